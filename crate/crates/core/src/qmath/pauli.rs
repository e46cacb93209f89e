use super::matrix::{CMatrix, C64};
use super::ops::kron;

/// `[I, σx, σy, σz]`.
pub fn single_qubit_paulis() -> [CMatrix; 4] {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        CMatrix::from_vec(2, 2, vec![o, z, z, o]).unwrap(),
        CMatrix::from_vec(2, 2, vec![z, o, o, z]).unwrap(),
        CMatrix::from_vec(2, 2, vec![z, -i, i, z]).unwrap(),
        CMatrix::from_vec(2, 2, vec![o, z, z, -o]).unwrap(),
    ]
}

/// All `4^k` Kronecker products of `{I, σx, σy, σz}`.
///
/// Entry `i` is the product whose factor for qubit `q` is Pauli number
/// `(i / 4^(k-1-q)) % 4`: base-4 digits of `i`, qubit 0 most significant,
/// with digits 0..3 meaning I, X, Y, Z.
pub fn pauli_products(k: usize) -> Vec<CMatrix> {
    assert!(k >= 1, "pauli_products needs at least one qubit");
    let base = single_qubit_paulis();
    let mut out: Vec<CMatrix> = base.to_vec();
    for _ in 1..k {
        out = out
            .iter()
            .flat_map(|g| base.iter().map(move |p| kron(g, p)))
            .collect();
    }
    out
}
