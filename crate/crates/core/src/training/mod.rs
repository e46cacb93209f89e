//! Cost, update generators, training loop and reference oracles.

mod cost;
mod gradient;
mod oracle;
mod train;
mod types;

pub use cost::{cost, evaluate, mean_fidelity};
pub use gradient::{
    apply_update, dcost_ds_analytic, gradient, k_from_generators, k_matrices, k_matrix, Gradient,
};
pub use oracle::{
    k_matrix_fd_oracle, k_matrix_path_sum, k_matrix_unrolled_oracle, hand_terms,
    hand_terms_complete, HandTerm,
};
pub use train::{train, train_from, update_step};
pub use types::{CostRecord, CostTrace, HyperParams, TrainingPair};
