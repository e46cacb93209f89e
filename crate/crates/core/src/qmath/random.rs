use nalgebra::DMatrix;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use super::matrix::{CMatrix, PureState, C64};
use crate::{Error, Result};

/// Independent sub-streams derived from one experiment seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    TargetUnitary = 0,
    CleanPairs = 1,
    Corruption = 2,
    Perceptrons = 3,
    Oracle = 4,
}

/// Seeded, platform-independent generator (ChaCha20, one stream per purpose).
#[derive(Clone, Debug)]
pub struct QRng {
    seed: u64,
    inner: ChaCha20Rng,
}

impl QRng {
    /// Identifies the generator and the sampling recipes built on it.
    pub const ALGORITHM: &'static str = "chacha20-stream/v1";

    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn for_stream(seed: u64, stream: Stream) -> Self {
        let mut inner = ChaCha20Rng::seed_from_u64(seed);
        inner.set_stream(stream as u64);
        Self { seed, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }

    pub fn complex_normal(&mut self) -> C64 {
        let re = self.normal();
        let im = self.normal();
        C64::new(re, im)
    }
}

impl RngCore for QRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Gaussian amplitudes (independent real and imaginary parts), normalized.
pub fn random_pure_state(n_qubits: usize, rng: &mut QRng) -> Result<PureState> {
    if n_qubits == 0 {
        return Err(Error::DimensionMismatch(
            "random state needs at least one qubit".into(),
        ));
    }
    let dim = 1usize << n_qubits;
    loop {
        let amps: Vec<C64> = (0..dim).map(|_| rng.complex_normal()).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm >= 1e-8 {
            return PureState::normalized(amps);
        }
    }
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// columns of `Q` rephased by `R`'s diagonal.
pub fn random_unitary(dim: usize, rng: &mut QRng) -> Result<CMatrix> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    // filled row-major so the draw order matches CMatrix layout
    let mut entries = Vec::with_capacity(dim * dim);
    for _ in 0..dim * dim {
        entries.push(rng.complex_normal());
    }
    let g = DMatrix::from_row_slice(dim, dim, &entries);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let phases: Vec<C64> = (0..dim)
        .map(|i| {
            let d = r[(i, i)];
            if d.norm() == 0.0 {
                C64::new(1.0, 0.0)
            } else {
                d / d.norm()
            }
        })
        .collect();
    Ok(CMatrix::from_fn(dim, dim, |i, j| q[(i, j)] * phases[j]))
}

/// Random Hermitian matrix with Gaussian entries; test and oracle helper.
pub fn random_hermitian(dim: usize, rng: &mut QRng) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| rng.complex_normal());
    g.hermitian_part()
}

/// Random density matrix `G·G† / tr(G·G†)`.
pub fn random_density_matrix(dim: usize, rng: &mut QRng) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| rng.complex_normal());
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    m.scale_real(1.0 / tr)
}
