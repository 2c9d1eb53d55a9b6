//! `key=value` run configuration. Flags given on the command line override
//! the file.

use super::HarnessError;
use crate::fields::DensityKind;
use crate::remap::Method;
use std::collections::BTreeMap;
use std::path::PathBuf;

pub const KEYS: [&str; 12] = [
    "family", "nx", "sizes", "function", "method", "seed", "t", "gamma", "out", "rescale", "strict", "config",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Tensor,
    Random,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Tensor => "tensor",
            Family::Random => "random",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tensor" => Ok(Family::Tensor),
            "random" => Ok(Family::Random),
            other => Err(format!("unknown family `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub family: Family,
    pub nx: usize,
    pub sizes: Vec<usize>,
    pub function: DensityKind,
    pub method: Method,
    pub seed: u64,
    /// Tensor time; `None` means the old/new pair `t1`, `t2`.
    pub t: Option<f64>,
    /// Random amplitude for a single generated grid.
    pub gamma: Option<f64>,
    pub out: PathBuf,
    pub rescale: bool,
    pub strict: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            family: Family::Random,
            nx: 11,
            sizes: vec![11, 21, 31, 41, 51, 61, 71, 81, 91, 101],
            function: DensityKind::Franke,
            method: Method::Fb,
            seed: 1,
            t: None,
            gamma: None,
            out: PathBuf::from("out"),
            rescale: true,
            strict: false,
        }
    }
}

/// Parse `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, HarnessError> {
    let mut pairs = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| HarnessError::Config {
            line: k + 1,
            msg: format!("expected key=value, got `{line}`"),
        })?;
        let key = key.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(HarnessError::Config {
                line: k + 1,
                msg: format!("unknown key `{key}`"),
            });
        }
        pairs.insert(key, value.trim().to_string());
    }
    Ok(pairs)
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, HarnessError> {
    value.parse().map_err(|_| HarnessError::InvalidValue {
        key: key.to_string(),
        value: value.to_string(),
    })
}

fn parse_bool(key: &str, value: &str) -> Result<bool, HarnessError> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(HarnessError::InvalidValue {
            key: key.to_string(),
            value: value.to_string(),
        }),
    }
}

impl RunConfig {
    /// Apply pairs over the current values; later layers win.
    pub fn apply(&mut self, pairs: &BTreeMap<String, String>) -> Result<(), HarnessError> {
        for (key, value) in pairs {
            match key.as_str() {
                "family" => self.family = parse(key, value)?,
                "nx" => self.nx = parse(key, value)?,
                "sizes" => {
                    self.sizes = value
                        .split(',')
                        .map(|s| parse(key, s.trim()))
                        .collect::<Result<_, _>>()?
                }
                "function" => self.function = parse(key, value)?,
                "method" => self.method = parse(key, value)?,
                "seed" => self.seed = parse(key, value)?,
                "t" => self.t = Some(parse(key, value)?),
                "gamma" => self.gamma = Some(parse(key, value)?),
                "out" => self.out = PathBuf::from(value),
                "rescale" => self.rescale = parse_bool(key, value)?,
                "strict" => self.strict = parse_bool(key, value)?,
                "config" => {}
                _ => {
                    return Err(HarnessError::InvalidValue {
                        key: key.clone(),
                        value: value.clone(),
                    })
                }
            }
        }
        self.check()
    }

    pub fn check(&self) -> Result<(), HarnessError> {
        let bad = |key: &str, value: String| Err(HarnessError::InvalidValue { key: key.into(), value });
        if self.nx < 3 {
            return bad("nx", self.nx.to_string());
        }
        if let Some(&s) = self.sizes.iter().find(|&&s| s < 3) {
            return bad("sizes", s.to_string());
        }
        Ok(())
    }

    /// Defaults, then the config file named by `config` (if any), then the
    /// remaining pairs.
    pub fn layered(flags: &BTreeMap<String, String>) -> Result<RunConfig, HarnessError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = flags.get("config") {
            let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{path}: {e}")))?;
            cfg.apply(&parse_pairs(&text)?)?;
        }
        cfg.apply(flags)?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let mut cfg = RunConfig::default();
        cfg.apply(&parse_pairs("# demo\nfamily = tensor\nnx=21\nsizes=11,21,31\n").unwrap())
            .unwrap();
        let flags = BTreeMap::from([("nx".to_string(), "41".to_string())]);
        cfg.apply(&flags).unwrap();
        assert_eq!(cfg.family, Family::Tensor);
        assert_eq!(cfg.nx, 41);
        assert_eq!(cfg.sizes, vec![11, 21, 31]);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(parse_pairs("nx 3"), Err(HarnessError::Config { line: 1, .. })));
        assert!(matches!(
            parse_pairs("\ncolour=red"),
            Err(HarnessError::Config { line: 2, .. })
        ));
        let mut cfg = RunConfig::default();
        let pairs = BTreeMap::from([("nx".to_string(), "2".to_string())]);
        assert!(matches!(cfg.apply(&pairs), Err(HarnessError::InvalidValue { .. })));
    }
}
