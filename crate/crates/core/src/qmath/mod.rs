//! Dense complex linear algebra over qubit registers.

mod expm;
mod matrix;
mod ops;
mod pauli;
mod random;

pub use expm::{expm_i_herm, HERMITIAN_TOLERANCE};
pub use matrix::{CMatrix, PureState, C64};
pub(crate) use matrix::ZERO;
pub use ops::{
    apply_left, apply_to_vector, conjugate, conjugate_hermitian, embed,
    extend_identity_trailing, kron, pad_trailing, partial_trace,
    partial_trace_product_hermitian, project_trailing_zero, trace_out_leading,
    trace_out_trailing, QubitLayout,
};
pub(crate) use ops::{conjugate_project_hermitian, pad_conjugate_hermitian};
pub use pauli::{pauli_products, single_qubit_paulis};
pub use random::{
    random_density_matrix, random_hermitian, random_pure_state, random_unitary, QRng, Stream,
};

use crate::{Error, Result};

/// Tolerance on the imaginary part of a fidelity before it is rejected.
pub const FIDELITY_IMAG_TOLERANCE: f64 = 1e-10;

/// `⟨φ|ρ|φ⟩`.
pub fn fidelity_pure(phi: &PureState, rho: &CMatrix) -> Result<f64> {
    if !rho.is_square() || rho.rows() != phi.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}-dimensional state against {}x{} operator",
            phi.dim(),
            rho.rows(),
            rho.cols()
        )));
    }
    let amps = phi.amplitudes();
    let mut acc = C64::new(0.0, 0.0);
    for (i, a) in amps.iter().enumerate() {
        let row_dot: C64 = rho.row(i).iter().zip(amps).map(|(r, b)| r * b).sum();
        acc += a.conj() * row_dot;
    }
    if acc.im.abs() > FIDELITY_IMAG_TOLERANCE {
        return Err(Error::ComplexFidelity(acc.im));
    }
    Ok(acc.re)
}
