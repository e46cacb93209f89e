use std::path::Path;

use rayon::prelude::*;

use reshqcnn::datagen::{make_noisy_pairs, DataSetDescriptor, EvalSet};
use reshqcnn::network::{Mode, NetworkSpec, PerceptronSet};
use reshqcnn::qmath::{QRng, Stream};
use reshqcnn::training::{
    evaluate, k_matrices, k_matrix_fd_oracle, k_matrix_path_sum, k_matrix_unrolled_oracle,
    hand_terms_complete, train, CostTrace, HyperParams, TrainingPair,
};
use reshqcnn::Error;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{fmt_real, trace_rows, write_csv, write_svg, TRACE_HEADER};

/// Upper slack on the cost above 1.
pub const COST_SLACK: f64 = 1e-10;

fn check_cost(cost: f64, what: &str) -> CliResult<()> {
    if (-COST_SLACK..=1.0 + COST_SLACK).contains(&cost) {
        Ok(())
    } else {
        Err(CliError::Numeric(format!("{what}: cost {cost} outside [0, 1]")))
    }
}

fn check_trace(trace: &CostTrace) -> CliResult<()> {
    for r in trace.records() {
        check_cost(r.cost, &format!("round {}", r.round))?;
    }
    Ok(())
}

/// Clean (then possibly corrupted) data for a network with equal input and
/// output widths.
pub fn dataset_for(
    spec: &NetworkSpec,
    pairs: usize,
    noisy: usize,
    seed: u64,
) -> CliResult<reshqcnn::datagen::DataSet> {
    Ok(DataSetDescriptor::new(spec.input_qubits(), spec.output_qubits(), pairs, noisy, seed)?.generate()?)
}

/// Trains `spec` on the configured data without writing anything.
pub fn train_curve(
    spec: &NetworkSpec,
    pairs: usize,
    noisy: usize,
    hp: &HyperParams,
) -> CliResult<(PerceptronSet, CostTrace)> {
    let data = dataset_for(spec, pairs, noisy, hp.seed)?;
    let (perceptrons, trace) = train(spec, &data.training, hp)?;
    check_trace(&trace)?;
    Ok((perceptrons, trace))
}

/// Trains, writes `<out>.csv` (and `<out>.svg`), returns the final cost.
pub fn cmd_train(cfg: &RunConfig, svg: bool) -> CliResult<f64> {
    let spec = cfg.network()?;
    let hp = cfg.hyper_params()?;
    let (_, trace) = train_curve(&spec, cfg.pairs, cfg.noisy.unwrap_or(0), &hp)?;
    write_csv(&cfg.out_path(".csv"), TRACE_HEADER, &trace_rows(&trace))?;
    if svg {
        write_svg(&cfg.out_path(".svg"), &cfg.spec, &trace.costs())?;
    }
    Ok(trace.final_cost())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseRow {
    pub n_noisy: usize,
    pub cost_res: f64,
    pub cost_plain: f64,
    /// Mean over seeds of `cost_res − cost_plain`.
    pub variance: f64,
}

pub const NOISE_HEADER: &str = "n_noisy,cost_res,cost_plain,variance";

/// For `n = 0, step, 2·step, … ≤ pairs`, trains the network and its
/// residual-free counterpart on data with `n` pairs replaced, scoring both
/// on good pairs. Seeds `cfg.seed .. cfg.seed + seeds` are averaged.
pub fn noise_sweep(cfg: &RunConfig, step: usize, seeds: usize, eval: EvalSet) -> CliResult<Vec<NoiseRow>> {
    if step == 0 || seeds == 0 {
        return Err(CliError::Usage("step and seeds must be at least 1".into()));
    }
    let spec = cfg.network()?;
    let plain = spec.without_residuals();
    let ns: Vec<usize> = (0..=cfg.pairs).step_by(step).collect();
    let cells: Vec<(usize, u64)> = ns
        .iter()
        .flat_map(|&n| (0..seeds as u64).map(move |s| (n, cfg.seed + s)))
        .collect();
    let results: Vec<(f64, f64)> = cells
        .par_iter()
        .map(|&(n, seed)| {
            let data = dataset_for(&spec, cfg.pairs, n, seed)?;
            let hp = HyperParams::new(cfg.eta, cfg.eps, cfg.rounds, seed)?;
            let good = data.evaluation_set(eval);
            let (res, _) = train(&spec, &data.training, &hp)?;
            let (pln, _) = train(&plain, &data.training, &hp)?;
            let c_res = evaluate(good, &spec, &res)?;
            let c_pln = evaluate(good, &plain, &pln)?;
            check_cost(c_res, "residual network")?;
            check_cost(c_pln, "plain network")?;
            Ok((c_res, c_pln))
        })
        .collect::<CliResult<_>>()?;
    Ok(ns
        .iter()
        .zip(results.chunks(seeds))
        .map(|(&n, chunk)| {
            let k = chunk.len() as f64;
            let cost_res = chunk.iter().map(|c| c.0).sum::<f64>() / k;
            let cost_plain = chunk.iter().map(|c| c.1).sum::<f64>() / k;
            let variance = chunk.iter().map(|c| c.0 - c.1).sum::<f64>() / k;
            NoiseRow {
                n_noisy: n,
                cost_res,
                cost_plain,
                variance,
            }
        })
        .collect())
}

pub fn noise_rows(rows: &[NoiseRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.n_noisy.to_string(),
                fmt_real(r.cost_res),
                fmt_real(r.cost_plain),
                fmt_real(r.variance),
            ]
        })
        .collect()
}

pub fn cmd_noise_sweep(cfg: &RunConfig, step: usize, seeds: usize, eval: EvalSet) -> CliResult<Vec<NoiseRow>> {
    let rows = noise_sweep(cfg, step, seeds, eval)?;
    write_csv(&cfg.out_path(".csv"), NOISE_HEADER, &noise_rows(&rows))?;
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PRow {
    pub p: f64,
    /// Mean over seeds.
    pub final_cost: f64,
    /// Median over seeds of the first round with cost ≥ 0.95; −1 if the
    /// median run never gets there.
    pub rounds_to_095: i64,
}

pub const P_HEADER: &str = "p,final_cost,rounds_to_095";

/// Median of first-hit rounds, counting misses as never.
pub fn median_rounds(hits: &[Option<usize>]) -> i64 {
    let mut v: Vec<usize> = hits.iter().map(|h| h.unwrap_or(usize::MAX)).collect();
    v.sort_unstable();
    match v.get((v.len().max(1) - 1) / 2) {
        Some(&m) if m != usize::MAX => m as i64,
        _ => -1,
    }
}

/// Trains the mixing variant at `p = 0` (baseline) and at each given `p`.
pub fn p_sweep(cfg: &RunConfig, p_values: &[f64], seeds: usize) -> CliResult<Vec<(PRow, Vec<CostTrace>)>> {
    if seeds == 0 {
        return Err(CliError::Usage("seeds must be at least 1".into()));
    }
    if let Some(p) = p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(CliError::Usage(format!("p must lie in [0, 1], got {p}")));
    }
    let base = NetworkSpec::parse(&cfg.spec).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut ps = vec![0.0];
    ps.extend_from_slice(p_values);
    let cells: Vec<(f64, u64)> = ps
        .iter()
        .flat_map(|&p| (0..seeds as u64).map(move |s| (p, cfg.seed + s)))
        .collect();
    let traces: Vec<CostTrace> = cells
        .par_iter()
        .map(|&(p, seed)| {
            let spec = base.with_mode(Mode::PMix(p))?;
            let hp = HyperParams::new(cfg.eta, cfg.eps, cfg.rounds, seed)?;
            Ok(train_curve(&spec, cfg.pairs, cfg.noisy.unwrap_or(0), &hp)?.1)
        })
        .collect::<CliResult<_>>()?;
    Ok(ps
        .iter()
        .zip(traces.chunks(seeds))
        .map(|(&p, chunk)| {
            let final_cost = chunk.iter().map(CostTrace::final_cost).sum::<f64>() / chunk.len() as f64;
            let hits: Vec<Option<usize>> = chunk.iter().map(|t| t.rounds_to(0.95)).collect();
            (
                PRow {
                    p,
                    final_cost,
                    rounds_to_095: median_rounds(&hits),
                },
                chunk.to_vec(),
            )
        })
        .collect())
}

pub fn p_rows(rows: &[PRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| vec![fmt_real(r.p), fmt_real(r.final_cost), r.rounds_to_095.to_string()])
        .collect()
}

pub fn cmd_p_sweep(cfg: &RunConfig, p_values: &[f64], seeds: usize) -> CliResult<Vec<PRow>> {
    let rows: Vec<PRow> = p_sweep(cfg, p_values, seeds)?.into_iter().map(|r| r.0).collect();
    write_csv(&cfg.out_path(".csv"), P_HEADER, &p_rows(&rows))?;
    Ok(rows)
}

pub const UNROLLED_TOLERANCE: f64 = 1e-10;
pub const FD_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct GradEntry {
    pub layer: usize,
    pub perceptron: usize,
    /// Against finite differences.
    pub fd_error: f64,
    /// Against the unrolled sum over every branch through the layer.
    pub branch_error: f64,
    /// Against the hand-derived term list, when one exists for this shape,
    /// together with whether that list covers every branch.
    pub hand_terms: Option<(f64, bool)>,
}

impl GradEntry {
    pub fn passes(&self) -> bool {
        self.fd_error <= FD_TOLERANCE
            && self.branch_error <= UNROLLED_TOLERANCE
            && match self.hand_terms {
                Some((err, true)) => err <= UNROLLED_TOLERANCE,
                _ => true,
            }
    }
}

fn oracle_data(spec: &NetworkSpec, cfg: &RunConfig) -> CliResult<Vec<TrainingPair>> {
    if spec.input_qubits() == spec.output_qubits() {
        Ok(dataset_for(spec, cfg.pairs, 0, cfg.seed)?.training)
    } else {
        let mut rng = QRng::for_stream(cfg.seed, Stream::CleanPairs);
        Ok(make_noisy_pairs(spec.input_qubits(), spec.output_qubits(), cfg.pairs, &mut rng)?)
    }
}

/// Compares the layer-wise generators with finite differences and with
/// unrolled branch sums at random parameters.
pub fn gradcheck(cfg: &RunConfig, delta: f64) -> CliResult<Vec<GradEntry>> {
    let spec = cfg.network()?;
    let set = oracle_data(&spec, cfg)?;
    let mut rng = QRng::for_stream(cfg.seed, Stream::Oracle);
    let perc = PerceptronSet::random(&spec, &mut rng);
    let ks = k_matrices(&spec, &perc, &set, cfg.eta)?;
    let paths = reshqcnn::network::enumerate_paths(&spec).paths().to_vec();
    let mut out = Vec::new();
    for l in 1..=spec.layer_count() {
        let complete = match hand_terms_complete(&spec, l) {
            Ok(c) => Some(c),
            Err(Error::UnsupportedShape(_)) => None,
            Err(e) => return Err(e.into()),
        };
        for j in 1..=spec.layer_io(l).1 {
            let k = &ks[l - 1][j - 1];
            let fd = k_matrix_fd_oracle(&spec, &perc, &set, cfg.eta, l, j, delta)?;
            let branches = k_matrix_path_sum(&spec, &perc, &set, cfg.eta, l, j, &paths)?;
            let hand_terms = match complete {
                Some(c) => {
                    let hand = k_matrix_unrolled_oracle(&spec, &perc, &set, cfg.eta, l, j)?;
                    Some((k.max_abs_diff(&hand), c))
                }
                None => None,
            };
            out.push(GradEntry {
                layer: l,
                perceptron: j,
                fd_error: k.max_abs_diff(&fd),
                branch_error: k.max_abs_diff(&branches),
                hand_terms,
            });
        }
    }
    Ok(out)
}

pub fn format_grad_entry(e: &GradEntry) -> String {
    let hand = match e.hand_terms {
        Some((err, true)) => format!("hand-terms {err:.3e}"),
        Some((err, false)) => format!("hand-terms {err:.3e} (term list omits a branch; not checked)"),
        None => "hand-terms n/a".to_string(),
    };
    format!(
        "l={} j={}: finite-diff {:.3e}, branch-sum {:.3e}, {} [{}]",
        e.layer,
        e.perceptron,
        e.fd_error,
        e.branch_error,
        hand,
        if e.passes() { "ok" } else { "FAIL" }
    )
}

pub fn cmd_gradcheck(cfg: &RunConfig, delta: f64) -> CliResult<()> {
    let entries = gradcheck(cfg, delta)?;
    for e in &entries {
        println!("{}", format_grad_entry(e));
    }
    let failed: Vec<String> = entries
        .iter()
        .filter(|e| !e.passes())
        .map(|e| format!("l={} j={}", e.layer, e.perceptron))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(format!("out of tolerance at {}", failed.join(", "))))
    }
}

/// File-name fragment for a spec string.
pub fn slug(spec: &str) -> String {
    spec.chars()
        .filter_map(|c| match c {
            ',' => Some('-'),
            '~' => Some('t'),
            '^' => Some('h'),
            ';' | '=' => Some('_'),
            ' ' => None,
            c => Some(c),
        })
        .collect()
}

pub fn write_curve(dir: &Path, stem: &str, title: &str, trace: &CostTrace) -> CliResult<()> {
    write_csv(&dir.join(format!("{stem}.csv")), TRACE_HEADER, &trace_rows(trace))?;
    write_svg(&dir.join(format!("{stem}.svg")), title, &trace.costs())
}
