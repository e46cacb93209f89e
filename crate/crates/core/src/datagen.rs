//! Training data: pairs `(|φ⟩, V|φ⟩)` for a hidden unitary `V`, unrelated
//! noisy pairs, and random replacement of clean pairs by noisy ones.

use rand::seq::index;

use crate::qmath::{random_pure_state, random_unitary, CMatrix, QRng, Stream};
use crate::training::TrainingPair;
use crate::{Error, Result};

pub fn make_target_unitary(n_qubits: usize, rng: &mut QRng) -> Result<CMatrix> {
    random_unitary(1 << n_qubits, rng)
}

pub fn make_clean_pairs(v: &CMatrix, n_pairs: usize, rng: &mut QRng) -> Result<Vec<TrainingPair>> {
    let n = v.require_qubits()?;
    if !v.is_unitary(1e-10) {
        return Err(Error::NotUnitary(v.unitarity_defect()));
    }
    (0..n_pairs)
        .map(|_| {
            let input = random_pure_state(n, rng)?;
            let target = input.apply(v)?;
            Ok(TrainingPair::new(input, target))
        })
        .collect()
}

pub fn make_noisy_pairs(
    n_in: usize,
    n_out: usize,
    n_pairs: usize,
    rng: &mut QRng,
) -> Result<Vec<TrainingPair>> {
    (0..n_pairs)
        .map(|_| {
            let input = random_pure_state(n_in, rng)?;
            let target = random_pure_state(n_out, rng)?;
            Ok(TrainingPair::new(input, target))
        })
        .collect()
}

/// Replaces a uniformly chosen set of `n` pairs (inputs and targets) by
/// fresh noisy pairs, keeping list order.
pub fn corrupt(set: &[TrainingPair], n: usize, rng: &mut QRng) -> Result<Vec<TrainingPair>> {
    if n > set.len() {
        return Err(Error::TooManyReplacements {
            requested: n,
            available: set.len(),
        });
    }
    let Some(first) = set.first() else {
        return Ok(Vec::new());
    };
    let (n_in, n_out) = (first.input.n_qubits(), first.target.n_qubits());
    let mut chosen = index::sample(rng, set.len(), n).into_vec();
    chosen.sort_unstable();
    let noisy = make_noisy_pairs(n_in, n_out, n, rng)?;
    let mut out = set.to_vec();
    for (i, pair) in chosen.into_iter().zip(noisy) {
        out[i] = pair;
    }
    Ok(out)
}

/// Which pairs count as "good" when scoring a net trained on corrupted data.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EvalSet {
    /// The clean pairs before corruption.
    #[default]
    PreCorruption,
    /// Fresh clean pairs drawn from the same unitary.
    HeldOut,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DataSetDescriptor {
    pub n_in: usize,
    pub n_out: usize,
    pub n_pairs: usize,
    pub n_noisy: usize,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct DataSet {
    pub unitary: CMatrix,
    /// Pairs before corruption.
    pub clean: Vec<TrainingPair>,
    /// Pairs used for training (`clean` with `n_noisy` replaced).
    pub training: Vec<TrainingPair>,
    /// Clean pairs disjoint from the training pairs, `n_pairs` of them.
    pub held_out: Vec<TrainingPair>,
}

impl DataSet {
    pub fn evaluation_set(&self, which: EvalSet) -> &[TrainingPair] {
        match which {
            EvalSet::PreCorruption => &self.clean,
            EvalSet::HeldOut => &self.held_out,
        }
    }
}

impl DataSetDescriptor {
    pub fn new(n_in: usize, n_out: usize, n_pairs: usize, n_noisy: usize, seed: u64) -> Result<Self> {
        let d = Self {
            n_in,
            n_out,
            n_pairs,
            n_noisy,
            seed,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_in != self.n_out {
            return Err(Error::DimensionMismatch(format!(
                "clean pairs need equal input and output widths, got {} and {}",
                self.n_in, self.n_out
            )));
        }
        if self.n_noisy > self.n_pairs {
            return Err(Error::TooManyReplacements {
                requested: self.n_noisy,
                available: self.n_pairs,
            });
        }
        Ok(())
    }

    /// Deterministic in the descriptor. Each stage draws from its own stream,
    /// so changing `n_noisy` leaves the unitary and clean pairs unchanged.
    pub fn generate(&self) -> Result<DataSet> {
        self.validate()?;
        let mut v_rng = QRng::for_stream(self.seed, Stream::TargetUnitary);
        let unitary = make_target_unitary(self.n_in, &mut v_rng)?;
        let mut pair_rng = QRng::for_stream(self.seed, Stream::CleanPairs);
        let clean = make_clean_pairs(&unitary, self.n_pairs, &mut pair_rng)?;
        let held_out = make_clean_pairs(&unitary, self.n_pairs, &mut pair_rng)?;
        let mut noise_rng = QRng::for_stream(self.seed, Stream::Corruption);
        let training = corrupt(&clean, self.n_noisy, &mut noise_rng)?;
        Ok(DataSet {
            unitary,
            clean,
            training,
            held_out,
        })
    }
}
