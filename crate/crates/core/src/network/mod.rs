//! Network description, branch enumeration and feedforward propagation.

mod forward;
mod paths;
mod perceptrons;
mod spec;

pub use forward::{
    bypass_state, feedforward, layer_channel, propagate, residual_combine, BranchState,
    Feedforward, StageStates,
};
pub(crate) use forward::{layer_output, layer_states, perceptron_layout};
pub use paths::{bypass_move, enumerate_paths, Move, Path, PathDag};
pub use perceptrons::{PerceptronSet, UNITARY_TOLERANCE};
pub use spec::{Mode, NetworkSpec, ResidualEdge};

/// Parses the compact spec notation; see [`NetworkSpec::parse`].
pub fn parse_spec(text: &str) -> crate::Result<NetworkSpec> {
    NetworkSpec::parse(text)
}
