//! Run configuration: a line-oriented `key = value` file with command-line
//! overrides applied through the same setter.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bounds::Case;
use crate::exactfn::DimensionRange;
use crate::pde::{GridSpec, ProfileTag};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown key '{0}'")]
    UnknownKey(String),
    #[error("invalid value for '{key}': {msg}")]
    Value { key: String, msg: String },
    #[error("cannot read {path}: {msg}")]
    Read { path: String, msg: String },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    #[default]
    VerifyIdentities,
    Solve,
    Scan,
    Optimize,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyIdentities => "verify-identities",
            Command::Solve => "solve",
            Command::Scan => "scan",
            Command::Optimize => "optimize",
        }
    }
}

impl FromStr for Command {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "verify-identities" => Ok(Command::VerifyIdentities),
            "solve" => Ok(Command::Solve),
            "scan" => Ok(Command::Scan),
            "optimize" => Ok(Command::Optimize),
            _ => Err(format!("unknown command '{s}'")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format '{s}' (expected json or csv)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub n: Option<i64>,
    pub range: Option<DimensionRange>,
    pub case: Option<Case>,
    pub tag: Option<ProfileTag>,
    pub grid: GridSpec,
    /// Relative tolerance of the adaptive quadratures.
    pub tol: f64,
    /// Multiplier of the `C h²` error model in sandwich tolerances.
    pub safety: f64,
    pub out: PathBuf,
    pub format: Format,
    /// Seed of the random certification points in `optimize`.
    pub seed: u64,
    /// Basis entries: built-in names or profile expressions.
    pub basis: Vec<String>,
    /// Contribution label to double before verifying (fault injection).
    pub corrupt: Option<String>,
    /// Whether `scan` computes numeric values.
    pub numeric: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::default(),
            n: None,
            range: None,
            case: None,
            tag: None,
            grid: GridSpec::square(GridSpec::DEFAULT_NODES),
            tol: 1e-8,
            safety: 4.0,
            out: PathBuf::from("."),
            format: Format::default(),
            seed: 0,
            basis: Vec::new(),
            corrupt: None,
            numeric: true,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::Value { key: key.into(), msg: e.to_string() })
}

fn parse_range(value: &str) -> Result<DimensionRange, ConfigError> {
    let bad = |msg: String| ConfigError::Value { key: "range".into(), msg };
    let (lo, hi) = value
        .split_once("..=")
        .or_else(|| value.split_once(".."))
        .ok_or_else(|| bad(format!("expected 'lo..hi', got '{value}'")))?;
    let lo: i64 = lo.trim().parse().map_err(|e| bad(format!("{e}")))?;
    let hi: i64 = hi.trim().parse().map_err(|e| bad(format!("{e}")))?;
    DimensionRange::new(lo, hi).map_err(|e| bad(e.to_string()))
}

impl RunConfig {
    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let value = value.trim();
        match key {
            "command" => self.command = parse(key, value)?,
            "n" => self.n = Some(parse(key, value)?),
            "range" => self.range = Some(parse_range(value)?),
            "case" => self.case = Some(parse(key, value)?),
            "tag" => self.tag = Some(parse(key, value)?),
            "grid" => {
                let nodes: usize = parse(key, value)?;
                self.grid.n_r = nodes;
                self.grid.n_s = nodes;
            }
            "radius" => self.grid.radius = parse(key, value)?,
            "stretch" => self.grid.stretch = parse(key, value)?,
            "tol" => self.tol = parse(key, value)?,
            "safety" => self.safety = parse(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "format" => self.format = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "basis" => {
                self.basis = value.split(';').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
            }
            "corrupt" => self.corrupt = Some(value.to_string()),
            "numeric" => self.numeric = parse(key, value)?,
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    /// Parses the file representation on top of the defaults. Blank lines
    /// and lines starting with `#` are ignored.
    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax { line: k + 1, msg: "expected 'key = value'".into() })?;
            self.set(key.trim(), value).map_err(|e| ConfigError::Syntax { line: k + 1, msg: e.to_string() })?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Read { path: path.display().to_string(), msg: e.to_string() })?;
        self.apply_text(&text)
    }

    /// Canonical file representation; unset optional keys are omitted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        line("command", self.command.name().into());
        if let Some(n) = self.n {
            line("n", n.to_string());
        }
        if let Some(r) = self.range {
            line("range", r.to_string());
        }
        if let Some(c) = self.case {
            line("case", c.to_string());
        }
        if let Some(t) = self.tag {
            line("tag", t.to_string());
        }
        line("grid", self.grid.n_r.to_string());
        line("radius", self.grid.radius.to_string());
        line("stretch", self.grid.stretch.to_string());
        line("tol", self.tol.to_string());
        line("safety", self.safety.to_string());
        line("out", self.out.display().to_string());
        line("format", self.format.extension().into());
        line("seed", self.seed.to_string());
        if !self.basis.is_empty() {
            line("basis", self.basis.join("; "));
        }
        if let Some(c) = &self.corrupt {
            line("corrupt", c.clone());
        }
        line("numeric", self.numeric.to_string());
        out
    }

    /// SHA-256 of the canonical text, hex encoded.
    pub fn hash(&self) -> String {
        format!("{:x}", Sha256::digest(self.to_text().as_bytes()))
    }

    /// Checks the invariants that do not depend on the command.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let value = |key: &str, msg: String| Err(ConfigError::Value { key: key.into(), msg });
        for (key, v) in [("tol", self.tol), ("safety", self.safety)] {
            if !(v > 0.0 && v.is_finite()) {
                return value(key, format!("must be positive, got {v}"));
            }
        }
        if let Some(n) = self.n {
            if n < 3 {
                return value("n", format!("dimension must be at least 3, got {n}"));
            }
        }
        if let Err(e) = self.grid.validate() {
            return value("grid", e.to_string());
        }
        if self.basis.iter().any(|b| b.contains('\n')) {
            return value("basis", "entries must be single-line".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = RunConfig::default();
        assert_eq!(RunConfig::from_text(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn full_round_trip() {
        let text =
            "command = optimize\nn = 9\nrange = 6..12\ncase = umbilic\ntag = Lambda\ngrid = 129\nradius = 30.5\n\
                    stretch = 4.25\ntol = 0.000001\nsafety = 2\nout = /tmp/x y\nformat = csv\nseed = 42\n\
                    basis = standard; [1] * (1+s)^(3)\ncorrupt = linear, main\nnumeric = false\n";
        let cfg = RunConfig::from_text(text).unwrap();
        assert_eq!(cfg.basis, vec!["standard".to_string(), "[1] * (1+s)^(3)".to_string()]);
        assert_eq!(cfg.out, PathBuf::from("/tmp/x y"));
        assert_eq!(RunConfig::from_text(&cfg.to_text()).unwrap(), cfg);
        assert_eq!(cfg.to_text(), text);
    }

    #[test]
    fn syntax_errors_carry_the_line() {
        assert_eq!(
            RunConfig::from_text("# c\nn = 9\nbogus\n").unwrap_err(),
            ConfigError::Syntax { line: 3, msg: "expected 'key = value'".into() }
        );
        assert!(matches!(RunConfig::from_text("nn = 9"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(RunConfig::from_text("range = 9..6"), Err(ConfigError::Syntax { .. })));
    }

    #[test]
    fn validation() {
        let mut cfg = RunConfig::default();
        cfg.set("n", "2").unwrap();
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::default();
        cfg.set("tol", "0").unwrap();
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::default();
        cfg.set("grid", "8").unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn hash_tracks_content() {
        let a = RunConfig::default();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.seed = 1;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    proptest! {
        #[test]
        fn round_trip(
            n in proptest::option::of(3i64..200),
            lo in 3i64..50,
            span in 0i64..50,
            nodes in 2usize..300,
            radius in 10.0f64..1e3,
            stretch in 0.0f64..20.0,
            tol in 1e-14f64..1.0,
            seed: u64,
            csv: bool,
            numeric: bool,
        ) {
            let cfg = RunConfig {
                command: Command::Scan,
                n,
                range: Some(DimensionRange::new(lo, lo + span).unwrap()),
                case: Some(Case::Umbilic),
                tag: Some(ProfileTag::W2),
                grid: GridSpec { n_r: 2 * nodes + 1, n_s: 2 * nodes + 1, radius, stretch },
                tol,
                safety: tol * 3.0,
                out: PathBuf::from("reports/run"),
                format: if csv { Format::Csv } else { Format::Json },
                seed,
                basis: vec!["extended".into()],
                corrupt: None,
                numeric,
            };
            let back = RunConfig::from_text(&cfg.to_text()).unwrap();
            prop_assert_eq!(&back, &cfg);
            prop_assert_eq!(back.hash(), cfg.hash());
        }
    }
}
