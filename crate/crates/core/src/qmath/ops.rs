//! Register-level operations. Qubit 0 is the leftmost Kronecker factor, i.e.
//! the most significant bit of a row or column index.

use super::matrix::{CMatrix, C64, ZERO};
use crate::{Error, Result};

/// Index bookkeeping for a set of target qubits inside an `n`-qubit register.
///
/// Every basis index of the register splits uniquely as
/// `target_offsets[t] + rest_offsets[r]`, where `t` enumerates the target
/// qubits in the given order (first target most significant) and `r` the
/// remaining qubits in increasing order.
#[derive(Clone, Debug)]
pub struct QubitLayout {
    n_qubits: usize,
    targets: Vec<usize>,
    target_offsets: Vec<usize>,
    rest_offsets: Vec<usize>,
}

impl QubitLayout {
    pub fn new(n_qubits: usize, targets: &[usize]) -> Result<Self> {
        let mut seen = vec![false; n_qubits];
        for &q in targets {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n_qubits,
                });
            }
            if seen[q] {
                return Err(Error::DuplicateQubit(q));
            }
            seen[q] = true;
        }
        let weight = |q: usize| 1usize << (n_qubits - 1 - q);
        let rest: Vec<usize> = (0..n_qubits).filter(|&q| !seen[q]).collect();
        Ok(Self {
            n_qubits,
            targets: targets.to_vec(),
            target_offsets: offsets(targets, weight),
            rest_offsets: offsets(&rest, weight),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn target_offsets(&self) -> &[usize] {
        &self.target_offsets
    }

    pub fn rest_offsets(&self) -> &[usize] {
        &self.rest_offsets
    }
}

fn offsets(qubits: &[usize], weight: impl Fn(usize) -> usize) -> Vec<usize> {
    let k = qubits.len();
    (0..1usize << k)
        .map(|t| {
            qubits
                .iter()
                .enumerate()
                .filter(|(i, _)| (t >> (k - 1 - i)) & 1 == 1)
                .map(|(_, &q)| weight(q))
                .sum()
        })
        .collect()
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (m, n) = (a.rows(), a.cols());
    let (p, q) = (b.rows(), b.cols());
    let mut out = CMatrix::zeros(m * p, n * q);
    let cols = n * q;
    let data = out.data_mut();
    for i in 0..m {
        for j in 0..n {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for r in 0..p {
                let row = (i * p + r) * cols + j * q;
                for (c, &brc) in b.row(r).iter().enumerate() {
                    data[row + c] = aij * brc;
                }
            }
        }
    }
    out
}

/// Reduced operator on the `keep` qubits, in the order given.
pub fn partial_trace(m: &CMatrix, keep: &[usize]) -> Result<CMatrix> {
    let n = m.require_qubits()?;
    let layout = QubitLayout::new(n, keep)?;
    let to = layout.target_offsets();
    let ro = layout.rest_offsets();
    let dim = m.rows();
    let k = to.len();
    let src = m.data();
    Ok(CMatrix::from_fn(k, k, |a, b| {
        ro.iter()
            .map(|&r| src[(to[a] + r) * dim + to[b] + r])
            .sum()
    }))
}

/// Extends `u` (acting on `targets`, in order) to the full `n_qubits` register.
pub fn embed(u: &CMatrix, n_qubits: usize, targets: &[usize]) -> Result<CMatrix> {
    let k = u.require_qubits()?;
    if k != targets.len() {
        return Err(Error::DimensionMismatch(format!(
            "{k}-qubit operator with {} targets",
            targets.len()
        )));
    }
    let layout = QubitLayout::new(n_qubits, targets)?;
    let to = layout.target_offsets();
    let dim = 1 << n_qubits;
    let mut out = CMatrix::zeros(dim, dim);
    let data = out.data_mut();
    for &r in layout.rest_offsets() {
        for (a, &ta) in to.iter().enumerate() {
            for (b, &tb) in to.iter().enumerate() {
                data[(ta + r) * dim + tb + r] = u[(a, b)];
            }
        }
    }
    Ok(out)
}

/// `(U ⊗ I) · A` with `U` acting on `layout`'s targets.
pub fn apply_left(a: &CMatrix, u: &CMatrix, layout: &QubitLayout) -> CMatrix {
    let dim = a.rows();
    debug_assert_eq!(dim, 1 << layout.n_qubits());
    let to = layout.target_offsets();
    let kdim = to.len();
    debug_assert_eq!(u.rows(), kdim);
    let src = a.data();
    let cols = a.cols();
    let mut out = CMatrix::zeros(dim, cols);
    let dst = out.data_mut();
    for &r in layout.rest_offsets() {
        for (t, &tt) in to.iter().enumerate() {
            let out_row = (tt + r) * cols;
            let out_slice = &mut dst[out_row..out_row + cols];
            for (s, &ts) in to.iter().enumerate() {
                let c = u[(t, s)];
                if c == ZERO {
                    continue;
                }
                let in_row = (ts + r) * cols;
                axpy(c, &src[in_row..in_row + cols], out_slice);
            }
        }
    }
    out
}

#[inline]
fn axpy(c: C64, x: &[C64], y: &mut [C64]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += c * xi;
    }
}

/// `(U ⊗ I) · A · (U ⊗ I)†`.
pub fn conjugate(a: &CMatrix, u: &CMatrix, layout: &QubitLayout) -> CMatrix {
    let half = apply_left(a, u, layout).adjoint();
    apply_left(&half, u, layout).adjoint()
}

/// `(U ⊗ I) · A · (U ⊗ I)†` for Hermitian `A`; skips the final adjoint copy.
pub fn conjugate_hermitian(a: &CMatrix, u: &CMatrix, layout: &QubitLayout) -> CMatrix {
    let half = apply_left(a, u, layout).adjoint();
    apply_left(&half, u, layout)
}

/// `tr_rest(A · B)` over everything except `layout`'s targets, for Hermitian `B`.
///
/// Uses `B[c, y] = conj(B[y, c])` so both factors are walked row-wise.
pub fn partial_trace_product_hermitian(
    a: &CMatrix,
    b: &CMatrix,
    layout: &QubitLayout,
) -> CMatrix {
    let dim = a.rows();
    let to = layout.target_offsets();
    let ro = layout.rest_offsets();
    let k = to.len();
    let mut out = CMatrix::zeros(k, k);
    for x in 0..k {
        for y in 0..k {
            let mut acc = ZERO;
            for &r in ro {
                let ar = a.row(to[x] + r);
                let br = b.row(to[y] + r);
                acc += dot_conj(ar, br);
            }
            out[(x, y)] = acc;
        }
    }
    debug_assert_eq!(b.rows(), dim);
    out
}

/// `Σ a_i · conj(b_i)`.
#[inline]
pub(crate) fn dot_conj(a: &[C64], b: &[C64]) -> C64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        re += x.re * y.re + x.im * y.im;
        im += x.im * y.re - x.re * y.im;
    }
    C64::new(re, im)
}

/// `A ⊗ |0…0⟩⟨0…0|` with `pad` trailing qubits.
pub fn pad_trailing(a: &CMatrix, pad: usize) -> CMatrix {
    if pad == 0 {
        return a.clone();
    }
    let dim = a.rows();
    let big = dim << pad;
    let mut out = CMatrix::zeros(big, big);
    let data = out.data_mut();
    for i in 0..dim {
        for (j, &v) in a.row(i).iter().enumerate() {
            data[(i << pad) * big + (j << pad)] = v;
        }
    }
    out
}

/// `⟨0…0| A |0…0⟩` on the `count` trailing qubits; adjoint of [`pad_trailing`].
pub fn project_trailing_zero(a: &CMatrix, count: usize) -> CMatrix {
    if count == 0 {
        return a.clone();
    }
    let dim = a.rows() >> count;
    CMatrix::from_fn(dim, dim, |i, j| a[(i << count, j << count)])
}

/// Partial trace over the `count` trailing qubits.
pub fn trace_out_trailing(a: &CMatrix, count: usize) -> CMatrix {
    if count == 0 {
        return a.clone();
    }
    let dim = a.rows() >> count;
    let block = 1 << count;
    CMatrix::from_fn(dim, dim, |i, j| {
        (0..block).map(|r| a[((i << count) + r, (j << count) + r)]).sum()
    })
}

/// Partial trace over the `count` leading qubits.
pub fn trace_out_leading(a: &CMatrix, count: usize) -> CMatrix {
    if count == 0 {
        return a.clone();
    }
    let dim = a.rows() >> count;
    let lead = 1 << count;
    CMatrix::from_fn(dim, dim, |i, j| {
        (0..lead).map(|r| a[(r * dim + i, r * dim + j)]).sum()
    })
}

/// `A ⊗ I` with `count` trailing identity qubits; adjoint of [`trace_out_trailing`].
pub fn extend_identity_trailing(a: &CMatrix, count: usize) -> CMatrix {
    kron(a, &CMatrix::identity(1 << count))
}

/// Applies `u` on `layout`'s targets to a state vector.
pub fn apply_to_vector(v: &[C64], u: &CMatrix, layout: &QubitLayout) -> Vec<C64> {
    let to = layout.target_offsets();
    let k = to.len();
    let mut out = vec![ZERO; v.len()];
    let mut block = vec![ZERO; k];
    for &r in layout.rest_offsets() {
        for (s, &ts) in to.iter().enumerate() {
            block[s] = v[ts + r];
        }
        for (t, &tt) in to.iter().enumerate() {
            out[tt + r] = u.row(t).iter().zip(&block).map(|(a, b)| a * b).sum();
        }
    }
    out
}

/// Rows `(U ⊗ I) · S` where `S` is `src` with a zero trailing qubit
/// interleaved into its row index. The layout's last target must be the
/// register's last qubit.
fn apply_left_padded_rows(src: &CMatrix, u: &CMatrix, layout: &QubitLayout) -> CMatrix {
    let to = layout.target_offsets();
    let cols = src.cols();
    let dim = src.rows() << 1;
    let data = src.data();
    let mut out = CMatrix::zeros(dim, cols);
    let dst = out.data_mut();
    for &r in layout.rest_offsets() {
        for (t, &tt) in to.iter().enumerate() {
            let out_row = (tt + r) * cols;
            let out_slice = &mut dst[out_row..out_row + cols];
            for (s, &ts) in to.iter().enumerate().step_by(2) {
                let c = u[(t, s)];
                let in_row = ((ts + r) >> 1) * cols;
                axpy(c, &data[in_row..in_row + cols], out_slice);
            }
        }
    }
    out
}

/// `(U ⊗ I)(ρ ⊗ |0⟩⟨0|)(U ⊗ I)†` for Hermitian `ρ`, with the fresh qubit last
/// in both the register and the layout.
pub(crate) fn pad_conjugate_hermitian(rho: &CMatrix, u: &CMatrix, layout: &QubitLayout) -> CMatrix {
    debug_assert_eq!(layout.targets().last(), Some(&(layout.n_qubits() - 1)));
    let half = apply_left_padded_rows(rho, u, layout).adjoint();
    apply_left_padded_rows(&half, u, layout)
}

/// Rows of `V · A` whose last qubit is `|0⟩`, with that qubit dropped.
fn apply_left_zero_rows(a: &CMatrix, v: &CMatrix, layout: &QubitLayout) -> CMatrix {
    let to = layout.target_offsets();
    let cols = a.cols();
    let data = a.data();
    let mut out = CMatrix::zeros(a.rows() >> 1, cols);
    let dst = out.data_mut();
    for &r in layout.rest_offsets() {
        for (t, &tt) in to.iter().enumerate().step_by(2) {
            let out_row = ((tt + r) >> 1) * cols;
            let out_slice = &mut dst[out_row..out_row + cols];
            for (s, &ts) in to.iter().enumerate() {
                let c = v[(t, s)];
                let in_row = (ts + r) * cols;
                axpy(c, &data[in_row..in_row + cols], out_slice);
            }
        }
    }
    out
}

/// `⟨0| (U ⊗ I)† B (U ⊗ I) |0⟩` on the last qubit for Hermitian `B`, given
/// `u_dag = U†`. The layout's last target must be the register's last qubit.
pub(crate) fn conjugate_project_hermitian(b: &CMatrix, u_dag: &CMatrix, layout: &QubitLayout) -> CMatrix {
    debug_assert_eq!(layout.targets().last(), Some(&(layout.n_qubits() - 1)));
    // W = ⟨0|(U† ⊗ I)B, then ⟨0|(U† ⊗ I) W† = (W (U ⊗ I)|0⟩)†, Hermitian.
    let half = apply_left_zero_rows(b, u_dag, layout).adjoint();
    apply_left_zero_rows(&half, u_dag, layout)
}
