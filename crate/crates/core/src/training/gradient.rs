use rayon::prelude::*;

use super::types::{check_set, TrainingPair};
use crate::network::{
    layer_output, layer_states, perceptron_layout, NetworkSpec, PerceptronSet,
};
use crate::qmath::{
    conjugate_project_hermitian, expm_i_herm, extend_identity_trailing, fidelity_pure, kron,
    pad_trailing, partial_trace_product_hermitian, project_trailing_zero, trace_out_trailing,
    CMatrix, C64,
};
use crate::{Error, Result};

/// Mean fidelity and update generators at the current parameters.
///
/// `generators[l-1][j-1]` is the Hermitian `Y_j^l = (i/N) Σ_x tr_rest[A_j, B_j]`
/// summed over every branch through layer `l`; `K_j^l = η 2^{m_{l-1}} Y_j^l`.
#[derive(Clone, Debug)]
pub struct Gradient {
    pub mean_fidelity: f64,
    pub generators: Vec<Vec<CMatrix>>,
}

struct PairResult {
    fidelity: f64,
    commutators: Vec<Vec<CMatrix>>,
}

fn analyze_pair(
    spec: &NetworkSpec,
    perceptrons: &PerceptronSet,
    adjoints: &[Vec<CMatrix>],
    pair: &TrainingPair,
) -> Result<PairResult> {
    let terminal = spec.terminal_stage();
    let mut stages: Vec<CMatrix> = Vec::with_capacity(terminal);
    let mut traces: Vec<Vec<CMatrix>> = Vec::with_capacity(terminal - 1);
    stages.push(pair.input.projector());
    for l in 1..terminal {
        let (m_in, _) = spec.layer_io(l);
        let states = layer_states(&stages[l - 1], perceptrons.layer(l));
        let out = layer_output(states.last().unwrap(), m_in);
        let (w_apply, w_bypass) = spec.stage_weights(l + 1);
        let next = match spec.edge_into(l + 1) {
            None => out,
            Some(edge) => {
                let src = &stages[edge.source - 1];
                let bypass = if l + 1 == terminal {
                    trace_out_trailing(src, spec.stage_width(edge.source) - spec.stage_width(l + 1))
                } else {
                    pad_trailing(src, spec.stage_width(l + 1) - spec.stage_width(edge.source))
                };
                let mut sum = out.scale_real(w_apply);
                sum.add_scaled(w_bypass.into(), &bypass);
                sum
            }
        };
        traces.push(states);
        stages.push(next);
    }
    let fidelity = fidelity_pure(&pair.target, &stages[terminal - 1])?;

    // Adjoint effects: effects[t-1] is the operator whose expectation on the
    // state entering stage t equals the output fidelity contribution.
    let mut effects: Vec<Option<CMatrix>> = vec![None; terminal];
    effects[terminal - 1] = Some(pair.target.projector());
    let mut commutators: Vec<Vec<CMatrix>> = vec![Vec::new(); terminal - 1];
    for l in (1..terminal).rev() {
        let (m_in, m_out) = spec.layer_io(l);
        let (w_apply, _) = spec.stage_weights(l + 1);
        let e_hat = effects[l].as_ref().unwrap().scale_real(w_apply);
        let mut b = kron(&CMatrix::identity(1 << m_in), &e_hat);
        let mut xs = vec![CMatrix::zeros(0, 0); m_out];
        for j in (1..=m_out).rev() {
            let layout = perceptron_layout(m_in, j);
            let y = partial_trace_product_hermitian(&traces[l - 1][j - 1], &b, &layout);
            xs[j - 1] = &y - &y.adjoint();
            b = conjugate_project_hermitian(&b, &adjoints[l - 1][j - 1], &layout);
        }
        for edge in spec.edges_from(l) {
            let (_, w_bypass) = spec.stage_weights(edge.target);
            let target = effects[edge.target - 1].as_ref().unwrap();
            let back = if edge.target == terminal {
                extend_identity_trailing(target, spec.stage_width(l) - spec.stage_width(terminal))
            } else {
                project_trailing_zero(target, spec.stage_width(edge.target) - spec.stage_width(l))
            };
            b.add_scaled(w_bypass.into(), &back);
        }
        effects[l - 1] = Some(b);
        commutators[l - 1] = xs;
    }
    Ok(PairResult {
        fidelity,
        commutators,
    })
}

/// Mean fidelity and update generators over `set`.
pub fn gradient(
    spec: &NetworkSpec,
    perceptrons: &PerceptronSet,
    set: &[TrainingPair],
) -> Result<Gradient> {
    check_set(set, spec)?;
    perceptrons.check(spec)?;
    let adjoints: Vec<Vec<CMatrix>> = perceptrons
        .layers()
        .iter()
        .map(|layer| layer.iter().map(CMatrix::adjoint).collect())
        .collect();
    let results: Vec<PairResult> = set
        .par_iter()
        .map(|pair| analyze_pair(spec, perceptrons, &adjoints, pair))
        .collect::<Result<_>>()?;
    let n = set.len() as f64;
    let mut mean_fidelity = 0.0;
    let mut generators: Vec<Vec<CMatrix>> = perceptrons
        .layers()
        .iter()
        .map(|layer| {
            layer
                .iter()
                .map(|u| CMatrix::zeros(u.rows(), u.cols()))
                .collect()
        })
        .collect();
    let scale = C64::new(0.0, 1.0 / n);
    for r in &results {
        mean_fidelity += r.fidelity;
        for (acc_layer, xs) in generators.iter_mut().zip(&r.commutators) {
            for (acc, x) in acc_layer.iter_mut().zip(xs) {
                acc.add_scaled(scale, x);
            }
        }
    }
    Ok(Gradient {
        mean_fidelity: mean_fidelity / n,
        generators,
    })
}

/// `K_j^l = η 2^{m_{l-1}} Y_j^l` for every perceptron.
pub fn k_from_generators(spec: &NetworkSpec, eta: f64, generators: &[Vec<CMatrix>]) -> Vec<Vec<CMatrix>> {
    generators
        .iter()
        .enumerate()
        .map(|(idx, layer)| {
            let (m_in, _) = spec.layer_io(idx + 1);
            let factor = eta * (1u64 << m_in) as f64;
            layer.iter().map(|y| y.scale_real(factor)).collect()
        })
        .collect()
}

pub fn k_matrices(
    spec: &NetworkSpec,
    perceptrons: &PerceptronSet,
    set: &[TrainingPair],
    eta: f64,
) -> Result<Vec<Vec<CMatrix>>> {
    let g = gradient(spec, perceptrons, set)?;
    Ok(k_from_generators(spec, eta, &g.generators))
}

/// Update generator of perceptron `j` in layer `l` (both 1-based).
pub fn k_matrix(
    spec: &NetworkSpec,
    perceptrons: &PerceptronSet,
    set: &[TrainingPair],
    eta: f64,
    l: usize,
    j: usize,
) -> Result<CMatrix> {
    perceptrons.get(l, j)?;
    let mut all = k_matrices(spec, perceptrons, set, eta)?;
    Ok(all[l - 1].swap_remove(j - 1))
}

fn check_shapes(perceptrons: &PerceptronSet, ks: &[Vec<CMatrix>]) -> Result<()> {
    let ok = ks.len() == perceptrons.layer_count()
        && perceptrons.layers().iter().zip(ks).all(|(us, k)| {
            us.len() == k.len()
                && us
                    .iter()
                    .zip(k)
                    .all(|(u, k)| u.rows() == k.rows() && k.is_square())
        });
    if ok {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(
            "generator set does not match the perceptron set".into(),
        ))
    }
}

/// `U ← exp(iεK) U` for every perceptron simultaneously.
pub fn apply_update(perceptrons: &PerceptronSet, ks: &[Vec<CMatrix>], eps: f64) -> Result<PerceptronSet> {
    check_shapes(perceptrons, ks)?;
    let updated = perceptrons.map(|l, j, u| Ok(expm_i_herm(&ks[l - 1][j - 1], eps)?.matmul(u)))?;
    let defect = updated.max_unitarity_defect();
    if defect > crate::network::UNITARY_TOLERANCE {
        return Err(Error::NotUnitary(defect));
    }
    Ok(updated)
}

/// First-order change of the cost per unit step along `ks`:
/// `Σ Re tr(Y K)` divided by the cost normalization.
pub fn dcost_ds_analytic(
    spec: &NetworkSpec,
    perceptrons: &PerceptronSet,
    set: &[TrainingPair],
    ks: &[Vec<CMatrix>],
) -> Result<f64> {
    check_shapes(perceptrons, ks)?;
    let g = gradient(spec, perceptrons, set)?;
    let mut total = 0.0;
    for (ys, kl) in g.generators.iter().zip(ks) {
        for (y, k) in ys.iter().zip(kl) {
            total += y.matmul(k).trace().re;
        }
    }
    Ok(total / spec.cost_normalization())
}
