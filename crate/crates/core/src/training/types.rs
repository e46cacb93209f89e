use crate::network::NetworkSpec;
use crate::qmath::PureState;
use crate::{Error, Result};

/// Input state and desired output state.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainingPair {
    pub input: PureState,
    pub target: PureState,
}

impl TrainingPair {
    pub fn new(input: PureState, target: PureState) -> Self {
        Self { input, target }
    }
}

/// Checks that `set` is non-empty and its widths match the network.
pub(crate) fn check_set(set: &[TrainingPair], spec: &NetworkSpec) -> Result<()> {
    if set.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    for (x, pair) in set.iter().enumerate() {
        if pair.input.n_qubits() != spec.input_qubits() {
            return Err(Error::DimensionMismatch(format!(
                "pair {x}: input has {} qubits, network takes {}",
                pair.input.n_qubits(),
                spec.input_qubits()
            )));
        }
        if pair.target.n_qubits() != spec.output_qubits() {
            return Err(Error::DimensionMismatch(format!(
                "pair {x}: target has {} qubits, network emits {}",
                pair.target.n_qubits(),
                spec.output_qubits()
            )));
        }
    }
    Ok(())
}

/// Learning rate `eta` (the inverse Lagrange multiplier), step size `eps`,
/// number of update rounds, and the seed for the initial perceptrons.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperParams {
    pub eta: f64,
    pub eps: f64,
    pub rounds: usize,
    pub seed: u64,
}

impl HyperParams {
    pub fn new(eta: f64, eps: f64, rounds: usize, seed: u64) -> Result<Self> {
        let hp = Self {
            eta,
            eps,
            rounds,
            seed,
        };
        hp.validate()?;
        Ok(hp)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(Error::InvalidHyperParams(format!(
                "learning rate must be positive, got {}",
                self.eta
            )));
        }
        if !(self.eps.is_finite() && self.eps > 0.0) {
            return Err(Error::InvalidHyperParams(format!(
                "step size must be positive, got {}",
                self.eps
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostRecord {
    pub round: usize,
    pub cost: f64,
    /// Milliseconds since training started.
    pub wall_ms: f64,
}

/// Cost per round; entry 0 is the cost before any update.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CostTrace {
    records: Vec<CostRecord>,
}

impl CostTrace {
    pub(crate) fn push(&mut self, record: CostRecord) {
        self.records.push(record);
    }

    pub fn records(&self) -> &[CostRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn costs(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.cost).collect()
    }

    pub fn final_cost(&self) -> f64 {
        self.records.last().map_or(f64::NAN, |r| r.cost)
    }

    /// First round whose cost reaches `threshold`.
    pub fn rounds_to(&self, threshold: f64) -> Option<usize> {
        self.records
            .iter()
            .find(|r| r.cost >= threshold)
            .map(|r| r.round)
    }
}
