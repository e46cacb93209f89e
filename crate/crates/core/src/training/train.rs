use std::time::Instant;

use super::cost::cost;
use super::gradient::{apply_update, gradient, k_from_generators};
use super::types::{CostRecord, CostTrace, HyperParams, TrainingPair};
use crate::network::{NetworkSpec, PerceptronSet};
use crate::qmath::{QRng, Stream};
use crate::Result;

/// One simultaneous update of every perceptron.
pub fn update_step(
    spec: &NetworkSpec,
    perceptrons: &PerceptronSet,
    set: &[TrainingPair],
    hp: &HyperParams,
) -> Result<PerceptronSet> {
    hp.validate()?;
    let g = gradient(spec, perceptrons, set)?;
    apply_update(perceptrons, &k_from_generators(spec, hp.eta, &g.generators), hp.eps)
}

/// Trains from perceptrons drawn from `hp.seed`.
pub fn train(
    spec: &NetworkSpec,
    set: &[TrainingPair],
    hp: &HyperParams,
) -> Result<(PerceptronSet, CostTrace)> {
    let mut rng = QRng::for_stream(hp.seed, Stream::Perceptrons);
    let initial = PerceptronSet::random(spec, &mut rng);
    train_from(spec, set, hp, initial)
}

/// Trains from the given perceptrons. The trace has `rounds + 1` entries.
pub fn train_from(
    spec: &NetworkSpec,
    set: &[TrainingPair],
    hp: &HyperParams,
    initial: PerceptronSet,
) -> Result<(PerceptronSet, CostTrace)> {
    hp.validate()?;
    initial.check(spec)?;
    let norm = spec.cost_normalization();
    let start = Instant::now();
    let elapsed = || start.elapsed().as_secs_f64() * 1e3;
    let mut trace = CostTrace::default();
    let mut current = initial;
    for round in 0..hp.rounds {
        let g = gradient(spec, &current, set)?;
        trace.push(CostRecord {
            round,
            cost: g.mean_fidelity / norm,
            wall_ms: elapsed(),
        });
        let ks = k_from_generators(spec, hp.eta, &g.generators);
        current = apply_update(&current, &ks, hp.eps)?;
    }
    trace.push(CostRecord {
        round: hp.rounds,
        cost: cost(set, spec, &current)?,
        wall_ms: elapsed(),
    });
    Ok((current, trace))
}
