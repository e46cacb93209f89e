use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use reshqcnn::datagen::EvalSet;
use reshqcnn_cli::commands::{cmd_gradcheck, cmd_noise_sweep, cmd_p_sweep, cmd_train};
use reshqcnn_cli::config::{parse_real, Overrides};
use reshqcnn_cli::presets::cmd_repro;
use reshqcnn_cli::{CliResult, RunConfig};

#[derive(Parser)]
#[command(name = "reshqcnn", version, about = "Train and verify residual quantum neural networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// key=value file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Network, e.g. 2,3~,2 or 1,2~,1;p=0.5.
    #[arg(long)]
    spec: Option<String>,
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    rounds: Option<usize>,
    /// Learning rate; `1/x` accepted.
    #[arg(long, value_parser = parse_real)]
    eta: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    eps: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of training pairs replaced by noisy ones.
    #[arg(long)]
    noisy: Option<usize>,
    /// Mixing parameter; selects the convex-combination residual.
    #[arg(long, value_parser = parse_real)]
    p: Option<f64>,
    /// Output path prefix.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn resolve(self) -> CliResult<RunConfig> {
        let flags = Overrides {
            spec: self.spec,
            pairs: self.pairs,
            rounds: self.rounds,
            eta: self.eta,
            eps: self.eps,
            seed: self.seed,
            noisy: self.noisy,
            p: self.p,
            out: self.out,
        };
        RunConfig::resolve(self.config.as_deref(), flags)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Eval {
    PreCorruption,
    HeldOut,
}

#[derive(Subcommand)]
enum Command {
    /// Train one network and write its cost curve.
    Train {
        #[command(flatten)]
        common: Common,
        /// Also write `<out>.svg`.
        #[arg(long)]
        svg: bool,
    },
    /// Compare residual and plain networks as clean pairs are replaced by noise.
    NoiseSweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        step: usize,
        #[arg(long, default_value_t = 5)]
        seeds: usize,
        #[arg(long, value_enum, default_value = "pre-corruption")]
        eval: Eval,
    },
    /// Train the mixing variant for several values of p.
    PSweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', value_parser = parse_real, default_values_t = [0.3, 0.6, 0.9, 1.0])]
        p_values: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        seeds: usize,
    },
    /// Compare update generators with finite differences and unrolled sums.
    Gradcheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-4)]
        delta: f64,
    },
    /// Rerun a figure preset (fig7a … fig13).
    Repro {
        figure: String,
        #[arg(long, default_value = "repro")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        seeds: usize,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Train { common, svg } => {
            let cfg = common.resolve()?;
            let cost = cmd_train(&cfg, svg)?;
            println!("final cost {cost:.16e}");
        }
        Command::NoiseSweep {
            common,
            step,
            seeds,
            eval,
        } => {
            let cfg = common.resolve()?;
            let eval = match eval {
                Eval::PreCorruption => EvalSet::PreCorruption,
                Eval::HeldOut => EvalSet::HeldOut,
            };
            for r in cmd_noise_sweep(&cfg, step, seeds, eval)? {
                println!(
                    "n={} residual {:.6} plain {:.6} difference {:+.6}",
                    r.n_noisy, r.cost_res, r.cost_plain, r.variance
                );
            }
        }
        Command::PSweep {
            common,
            p_values,
            seeds,
        } => {
            let cfg = common.resolve()?;
            for r in cmd_p_sweep(&cfg, &p_values, seeds)? {
                println!("p={} final cost {:.6} rounds to 0.95 {}", r.p, r.final_cost, r.rounds_to_095);
            }
        }
        Command::Gradcheck { common, delta } => {
            let cfg = common.resolve()?;
            cmd_gradcheck(&cfg, delta)?;
            println!("gradient check passed");
        }
        Command::Repro {
            figure,
            out_dir,
            seed,
            seeds,
        } => {
            cmd_repro(&figure, &out_dir, seed, seeds)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
