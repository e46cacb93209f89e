use nalgebra::DMatrix;

use super::matrix::{CMatrix, C64};
use crate::{Error, Result};

/// Hermiticity tolerance accepted by [`expm_i_herm`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// `exp(i·eps·K)` for Hermitian `K`, via `K = V·D·V†`.
pub fn expm_i_herm(k: &CMatrix, eps: f64) -> Result<CMatrix> {
    k.require_qubits()?;
    let defect = k.hermiticity_defect();
    if defect > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian(defect));
    }
    let n = k.rows();
    let herm = k.hermitian_part();
    let m = DMatrix::from_fn(n, n, |i, j| herm[(i, j)]);
    let eig = m.symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases: Vec<C64> = eig
        .eigenvalues
        .iter()
        .map(|&d| C64::from_polar(1.0, eps * d))
        .collect();
    Ok(CMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|c| v[(i, c)] * phases[c] * v[(j, c)].conj())
            .sum()
    }))
}
