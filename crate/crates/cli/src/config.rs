use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use reshqcnn::network::{Mode, NetworkSpec};
use reshqcnn::training::HyperParams;

use crate::error::{CliError, CliResult};

/// Settings of one experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub spec: String,
    pub pairs: usize,
    pub rounds: usize,
    pub eta: f64,
    pub eps: f64,
    pub seed: u64,
    pub noisy: Option<usize>,
    pub p: Option<f64>,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            spec: "2,3~,2".into(),
            pairs: 10,
            rounds: 250,
            eta: 1.0 / 1.8,
            eps: 0.1,
            seed: 1,
            noisy: None,
            p: None,
            out: PathBuf::from("run"),
        }
    }
}

/// Values given explicitly; unset fields fall back to the config file, then
/// to the defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub spec: Option<String>,
    pub pairs: Option<usize>,
    pub rounds: Option<usize>,
    pub eta: Option<f64>,
    pub eps: Option<f64>,
    pub seed: Option<u64>,
    pub noisy: Option<usize>,
    pub p: Option<f64>,
    pub out: Option<PathBuf>,
}

impl Overrides {
    fn apply(self, cfg: &mut RunConfig) {
        if let Some(v) = self.spec {
            cfg.spec = v;
        }
        if let Some(v) = self.pairs {
            cfg.pairs = v;
        }
        if let Some(v) = self.rounds {
            cfg.rounds = v;
        }
        if let Some(v) = self.eta {
            cfg.eta = v;
        }
        if let Some(v) = self.eps {
            cfg.eps = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if self.noisy.is_some() {
            cfg.noisy = self.noisy;
        }
        if self.p.is_some() {
            cfg.p = self.p;
        }
        if let Some(v) = self.out {
            cfg.out = v;
        }
    }
}

/// Parses a real, also accepting reciprocals written `1/x`.
pub fn parse_real(text: &str) -> Result<f64, String> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| format!("bad number {text:?}"))?;
            let den: f64 = den.trim().parse().map_err(|_| format!("bad number {text:?}"))?;
            num / den
        }
        None => text.parse().map_err(|_| format!("bad number {text:?}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("{text:?} is not finite"))
    }
}

fn parse_int<T: std::str::FromStr>(key: &str, text: &str) -> CliResult<T> {
    text.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{key}: expected an integer, got {text:?}")))
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> CliResult<Overrides> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> CliResult<Overrides> {
    let mut entries = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("line {}: expected key=value", n + 1)))?;
        entries.insert(key.trim().to_string(), value.trim().to_string());
    }
    let mut o = Overrides::default();
    for (key, value) in entries {
        let real = |v: &str| parse_real(v).map_err(|e| CliError::Usage(format!("{key}: {e}")));
        match key.as_str() {
            "spec" => o.spec = Some(value),
            "pairs" => o.pairs = Some(parse_int(&key, &value)?),
            "rounds" => o.rounds = Some(parse_int(&key, &value)?),
            "eta" => o.eta = Some(real(&value)?),
            "eps" => o.eps = Some(real(&value)?),
            "seed" => o.seed = Some(parse_int(&key, &value)?),
            "noisy" => o.noisy = Some(parse_int(&key, &value)?),
            "p" => o.p = Some(real(&value)?),
            "out" => o.out = Some(PathBuf::from(value)),
            other => return Err(CliError::Usage(format!("unknown config key {other:?}"))),
        }
    }
    Ok(o)
}

impl RunConfig {
    /// Defaults, then the file (if any), then explicit flags.
    pub fn resolve(file: Option<&Path>, flags: Overrides) -> CliResult<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = file {
            read_config_file(path)?.apply(&mut cfg);
        }
        flags.apply(&mut cfg);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        self.network()?;
        self.hyper_params()?;
        if self.pairs == 0 {
            return Err(CliError::Usage("pairs must be at least 1".into()));
        }
        if let Some(n) = self.noisy {
            if n > self.pairs {
                return Err(CliError::Usage(format!(
                    "cannot replace {n} of {} pairs",
                    self.pairs
                )));
            }
        }
        if let Some(p) = self.p {
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::Usage(format!("p must lie in [0, 1], got {p}")));
            }
        }
        Ok(())
    }

    /// The parsed network, with `p` (when set) selecting the mixing mode.
    pub fn network(&self) -> CliResult<NetworkSpec> {
        let spec = NetworkSpec::parse(&self.spec).map_err(|e| CliError::Usage(e.to_string()))?;
        match self.p {
            Some(p) => spec
                .with_mode(Mode::PMix(p))
                .map_err(|e| CliError::Usage(e.to_string())),
            None => Ok(spec),
        }
    }

    pub fn hyper_params(&self) -> CliResult<HyperParams> {
        HyperParams::new(self.eta, self.eps, self.rounds, self.seed)
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    /// `out` with `suffix` appended to its file name.
    pub fn out_path(&self, suffix: &str) -> PathBuf {
        let mut name = self.out.as_os_str().to_owned();
        name.push(suffix);
        PathBuf::from(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocal_reals() {
        assert_eq!(parse_real("1/2").unwrap(), 0.5);
        assert_eq!(parse_real(" 0.25 ").unwrap(), 0.25);
        assert!(parse_real("1/0").is_err());
        assert!(parse_real("x").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = parse_config_text("spec = 1,2~,1\nrounds=10 # short\n\neta=1/2\n").unwrap();
        let mut cfg = RunConfig::default();
        file.apply(&mut cfg);
        Overrides {
            rounds: Some(3),
            ..Default::default()
        }
        .apply(&mut cfg);
        assert_eq!(cfg.spec, "1,2~,1");
        assert_eq!(cfg.rounds, 3);
        assert_eq!(cfg.eta, 0.5);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_lines() {
        assert!(parse_config_text("colour=red").is_err());
        assert!(parse_config_text("rounds").is_err());
        assert!(parse_config_text("rounds=ten").is_err());
    }

    #[test]
    fn validation() {
        let mut cfg = RunConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.p = Some(1.5);
        assert!(cfg.validate().is_err());
        cfg.p = None;
        cfg.noisy = Some(11);
        assert!(cfg.validate().is_err());
        cfg.noisy = None;
        cfg.spec = "2,3~".into();
        assert!(cfg.validate().is_err());
    }
}
