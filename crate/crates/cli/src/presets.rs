use std::path::Path;

use reshqcnn::datagen::EvalSet;
use reshqcnn::network::NetworkSpec;
use reshqcnn::training::HyperParams;

use crate::commands::{noise_rows, noise_sweep, p_rows, p_sweep, slug, train_curve, write_curve, NOISE_HEADER, P_HEADER};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::write_csv;

pub const EPS: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub enum Experiment {
    /// One training curve per spec.
    Curves { specs: Vec<&'static str> },
    /// Noisy-pair sweep of one spec against its residual-free counterpart.
    Noise { spec: &'static str, step: usize },
    /// Mixing-parameter sweep for each spec.
    Mixing { specs: Vec<&'static str>, p_values: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub pairs: usize,
    pub rounds: usize,
    pub eta: f64,
    pub experiment: Experiment,
}

pub const FIGURES: [&str; 13] = [
    "fig7a", "fig7b", "fig8a", "fig8b", "fig9a", "fig9b", "fig10a", "fig10b", "fig11a", "fig11b",
    "fig12a", "fig12b", "fig13",
];

pub fn preset(name: &str) -> Option<Preset> {
    use Experiment::*;
    let p = |name, pairs, rounds, eta, experiment| Preset {
        name,
        pairs,
        rounds,
        eta,
        experiment,
    };
    Some(match name {
        "fig7a" => p("fig7a", 10, 250, 1.0 / 1.8, Curves { specs: vec!["1,2~,1", "1,2,1", "2,3~,2", "2,3,2"] }),
        "fig7b" => p("fig7b", 10, 250, 1.0 / 2.0, Curves { specs: vec!["1,2~,1~", "1,2,1", "2,3~,2~", "2,3,2"] }),
        "fig8a" => p("fig8a", 10, 600, 1.0 / 5.0, Curves { specs: vec!["2,3~,3~,2", "2,3^,3~,2", "2,3,3~,2", "2,3~,3,2"] }),
        "fig8b" => p("fig8b", 10, 600, 1.0 / 3.0, Curves { specs: vec!["2,3^,3~,2", "2,3,3~,2"] }),
        "fig9a" => p("fig9a", 10, 1000, 1.0 / 9.0, Curves { specs: vec!["2,3~,4~,2", "2,3^,4~,2", "2,3,4~,2", "2,3~,4,2"] }),
        "fig9b" => p("fig9b", 10, 1000, 1.0 / 5.0, Curves { specs: vec!["2,3^,4~,2", "2,3,4~,2"] }),
        "fig10a" => p("fig10a", 5, 1000, 1.0 / 15.0, Curves { specs: vec!["2,3~,3~,3~,2", "2,3,3,3,2"] }),
        "fig10b" => p("fig10b", 5, 2500, 1.0 / 35.0, Curves { specs: vec!["2,3~,4~,5~,2", "2,3,4,5,2"] }),
        "fig11a" => p("fig11a", 30, 50, 1.0 / 1.8, Noise { spec: "2,3~,2", step: 3 }),
        "fig11b" => p("fig11b", 100, 200, 1.0 / 1.8, Noise { spec: "2,3~,2", step: 5 }),
        "fig12a" => p("fig12a", 30, 150, 1.0 / 9.0, Noise { spec: "2,3~,4~,2", step: 3 }),
        "fig12b" => p("fig12b", 100, 600, 1.0 / 9.0, Noise { spec: "2,3~,4~,2", step: 5 }),
        "fig13" => p(
            "fig13",
            10,
            250,
            1.0,
            Mixing {
                specs: vec!["1,2~,1", "2,3~,2"],
                p_values: vec![0.3, 0.6, 0.9, 1.0],
            },
        ),
        _ => return None,
    })
}

impl Preset {
    pub fn config(&self, spec: &str, seed: u64, out: &Path) -> RunConfig {
        RunConfig {
            spec: spec.to_string(),
            pairs: self.pairs,
            rounds: self.rounds,
            eta: self.eta,
            eps: EPS,
            seed,
            noisy: None,
            p: None,
            out: out.to_path_buf(),
        }
    }

    pub fn hyper_params(&self, seed: u64) -> CliResult<HyperParams> {
        Ok(HyperParams::new(self.eta, EPS, self.rounds, seed)?)
    }
}

fn unknown(name: &str) -> CliError {
    CliError::Usage(format!("unknown figure {name:?}; valid names: {}", FIGURES.join(", ")))
}

/// Runs a preset, writing its files under `dir`; returns the files written.
pub fn cmd_repro(name: &str, dir: &Path, seed: u64, seeds: usize) -> CliResult<Vec<String>> {
    let preset = preset(name).ok_or_else(|| unknown(name))?;
    if seeds == 0 {
        return Err(CliError::Usage("seeds must be at least 1".into()));
    }
    let mut written = Vec::new();
    let seed_tag = |s: u64| if seeds > 1 { format!("_s{s}") } else { String::new() };
    match &preset.experiment {
        Experiment::Curves { specs } => {
            for spec_text in specs {
                let spec = NetworkSpec::parse(spec_text)?;
                for s in seed..seed + seeds as u64 {
                    let (_, trace) = train_curve(&spec, preset.pairs, 0, &preset.hyper_params(s)?)?;
                    let stem = format!("{name}_{}{}", slug(spec_text), seed_tag(s));
                    write_curve(dir, &stem, spec_text, &trace)?;
                    println!("{stem}: final cost {:.6}", trace.final_cost());
                    written.push(stem);
                }
            }
        }
        Experiment::Noise { spec, step } => {
            let cfg = preset.config(spec, seed, dir);
            let rows = noise_sweep(&cfg, *step, seeds, EvalSet::PreCorruption)?;
            let stem = format!("{name}_{}", slug(spec));
            write_csv(&dir.join(format!("{stem}.csv")), NOISE_HEADER, &noise_rows(&rows))?;
            for r in &rows {
                println!(
                    "{stem}: n={} residual {:.4} plain {:.4} difference {:+.4}",
                    r.n_noisy, r.cost_res, r.cost_plain, r.variance
                );
            }
            written.push(stem);
        }
        Experiment::Mixing { specs, p_values } => {
            for spec_text in specs {
                let cfg = preset.config(spec_text, seed, dir);
                let sweep = p_sweep(&cfg, p_values, seeds)?;
                for (row, traces) in &sweep {
                    for (offset, trace) in traces.iter().enumerate() {
                        let stem = format!(
                            "{name}_{}_p{}{}",
                            slug(spec_text),
                            row.p,
                            seed_tag(seed + offset as u64)
                        );
                        write_curve(dir, &stem, &format!("{spec_text} p={}", row.p), trace)?;
                        written.push(stem);
                    }
                }
                let rows: Vec<_> = sweep.iter().map(|r| r.0).collect();
                let stem = format!("{name}_{}_sweep", slug(spec_text));
                write_csv(&dir.join(format!("{stem}.csv")), P_HEADER, &p_rows(&rows))?;
                for r in &rows {
                    println!("{stem}: p={} final cost {:.6} rounds to 0.95 {}", r.p, r.final_cost, r.rounds_to_095);
                }
                written.push(stem);
            }
        }
    }
    Ok(written)
}
