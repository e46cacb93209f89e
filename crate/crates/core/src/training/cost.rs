use rayon::prelude::*;

use super::types::{check_set, TrainingPair};
use crate::network::{propagate, NetworkSpec, PerceptronSet};
use crate::qmath::fidelity_pure;
use crate::Result;

/// `(1/N) Σ_x ⟨φ_x^out| ρ_x^out |φ_x^out⟩`, without path normalization.
pub fn mean_fidelity(
    set: &[TrainingPair],
    spec: &NetworkSpec,
    perceptrons: &PerceptronSet,
) -> Result<f64> {
    check_set(set, spec)?;
    let values: Vec<f64> = set
        .par_iter()
        .map(|pair| {
            let out = propagate(&pair.input.projector(), spec, perceptrons)?.output;
            fidelity_pure(&pair.target, &out)
        })
        .collect::<Result<_>>()?;
    Ok(values.iter().sum::<f64>() / set.len() as f64)
}

/// Mean fidelity divided by the network's cost normalization, in `[0, 1]`.
pub fn cost(set: &[TrainingPair], spec: &NetworkSpec, perceptrons: &PerceptronSet) -> Result<f64> {
    Ok(mean_fidelity(set, spec, perceptrons)? / spec.cost_normalization())
}

/// Cost of trained perceptrons on a held-out or clean set.
pub fn evaluate(set: &[TrainingPair], spec: &NetworkSpec, perceptrons: &PerceptronSet) -> Result<f64> {
    cost(set, spec, perceptrons)
}
