//! Experiment configs.
//!
//! Grammar, one entry per line:
//!
//! ```text
//! line   := blank | comment | entry
//! comment:= '#' any*
//! entry  := key ws* '=' ws* value [ws* '#' any*]
//! ```
//!
//! Keys are case-sensitive and may appear once, except `assert`, which may
//! repeat. Lists (`n`) are comma-separated. `Y` uses the `z:m,z:m,...`
//! node language. An assertion reads `path op number`, where `path` is a
//! dotted path into the JSON summary (`rows.0.deriv_at_0`), `op` is one of
//! `<= >= < > ==`, and `number` may also be `true` or `false`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use pointwise_approx::counterex::Epsilon;
use pointwise_approx::verify::EstimateTag;
use pointwise_approx::{Error, NodeMultiset};

#[derive(Debug)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: String,
    pub reason: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}, field `{}`: {}", self.field, self.reason),
            None => write!(f, "field `{}`: {}", self.field, self.reason),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Verify,
    Construct,
    Dz59,
    Dlb,
    Blowup,
    Sandwich,
    Weak,
}

impl Kind {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "verify" => Kind::Verify,
            "construct" => Kind::Construct,
            "dz59" => Kind::Dz59,
            "dlb" => Kind::Dlb,
            "blowup" => Kind::Blowup,
            "sandwich" => Kind::Sandwich,
            "weak" => Kind::Weak,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Verify => "verify",
            Kind::Construct => "construct",
            Kind::Dz59 => "dz59",
            Kind::Dlb => "dlb",
            Kind::Blowup => "blowup",
            Kind::Sandwich => "sandwich",
            Kind::Weak => "weak",
        }
    }

    /// Keys this kind reads besides `kind`, `out`, `seed` and `assert`.
    fn keys(self) -> &'static [&'static str] {
        match self {
            Kind::Verify => &["f", "Y", "estimate", "k", "r", "nu", "ell", "m", "alpha", "x0", "n", "density", "mu"],
            Kind::Construct => &["f", "Y", "k", "r", "n", "mu"],
            Kind::Dz59 => &["n"],
            Kind::Dlb => &["alpha", "s", "nu", "n", "trials", "density"],
            Kind::Blowup => &["r", "n"],
            Kind::Sandwich => &["k", "r", "depth", "slack", "epsilon"],
            Kind::Weak => &["k", "r", "n", "target", "delta", "grid_points", "j_max", "epsilon"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Le,
    Ge,
    Lt,
    Gt,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Assertion {
    pub text: String,
    pub path: String,
    pub op: Op,
    pub rhs: f64,
}

impl Assertion {
    pub fn parse(text: &str) -> Option<Self> {
        let mut it = text.split_whitespace();
        let (path, op, rhs) = (it.next()?, it.next()?, it.next()?);
        if it.next().is_some() {
            return None;
        }
        let op = match op {
            "<=" => Op::Le,
            ">=" => Op::Ge,
            "<" => Op::Lt,
            ">" => Op::Gt,
            "==" => Op::Eq,
            _ => return None,
        };
        let rhs = match rhs {
            "true" => 1.0,
            "false" => 0.0,
            v => v.parse().ok()?,
        };
        Some(Assertion {
            text: text.trim().to_string(),
            path: path.to_string(),
            op,
            rhs,
        })
    }

    pub fn holds(&self, lhs: f64) -> bool {
        match self.op {
            Op::Le => lhs <= self.rhs,
            Op::Ge => lhs >= self.rhs,
            Op::Lt => lhs < self.rhs,
            Op::Gt => lhs > self.rhs,
            Op::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Config {
    pub kind: Kind,
    pub f: Option<String>,
    pub y: NodeMultiset,
    pub estimate: Option<EstimateTag>,
    pub k: Option<usize>,
    pub r: Option<usize>,
    pub nu: Option<usize>,
    pub ell: Option<usize>,
    pub m: Option<usize>,
    pub alpha: Option<f64>,
    pub x0: Option<f64>,
    pub s: f64,
    pub n: Vec<usize>,
    pub density: Option<usize>,
    pub mu: Option<usize>,
    pub trials: usize,
    pub depth: usize,
    pub slack: f64,
    pub target: f64,
    pub delta: f64,
    pub grid_points: usize,
    pub j_max: usize,
    pub epsilon: Option<Epsilon>,
    pub seed: u64,
    pub out: PathBuf,
    pub asserts: Vec<Assertion>,
}

pub const DEFAULT_SEED: u64 = 2024;

struct Raw {
    entries: BTreeMap<String, (usize, String)>,
    asserts: Vec<(usize, String)>,
}

impl Raw {
    fn lex(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        let mut asserts = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return Err(err(lineno, "", format!("expected `key = value`, got `{body}`")));
            };
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(err(lineno, "", "empty key"));
            }
            if key == "assert" {
                asserts.push((lineno, value.to_string()));
            } else if let Some((first, _)) = entries.insert(key.to_string(), (lineno, value.to_string())) {
                return Err(err(lineno, key, format!("repeated key, first set on line {first}")));
            }
        }
        Ok(Raw { entries, asserts })
    }

    fn get(&self, key: &str) -> Option<&(usize, String)> {
        self.entries.get(key)
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some((l, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| err(*l, key, format!("cannot parse `{v}`"))),
        }
    }
}

fn err(line: usize, field: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError {
        line: Some(line),
        field: field.to_string(),
        reason: reason.into(),
    }
}

fn missing(field: &str, kind: Kind) -> ConfigError {
    ConfigError {
        line: None,
        field: field.to_string(),
        reason: format!("required for kind `{}`", kind.name()),
    }
}

pub fn parse_epsilon(s: &str) -> Option<Epsilon> {
    match s.split_once(':') {
        None if s == "inv_log" => Some(Epsilon::inv_log()),
        Some(("root", k)) => k.parse().ok().filter(|&k| k > 0).map(Epsilon::root),
        Some(("power", p)) => p.parse().ok().filter(|p: &f64| *p > 0.0).map(Epsilon::power),
        _ => None,
    }
}

impl Config {
    /// Parses config text; relative `out` paths are resolved against `base`.
    pub fn parse(text: &str, base: &Path, default_out: PathBuf) -> Result<Self, ConfigError> {
        let raw = Raw::lex(text)?;
        let (kl, kv) = raw.get("kind").ok_or(ConfigError {
            line: None,
            field: "kind".into(),
            reason: "missing".into(),
        })?;
        let kind = Kind::parse(kv).ok_or_else(|| err(*kl, "kind", format!("unknown kind `{kv}`")))?;
        for (key, (l, _)) in &raw.entries {
            if !matches!(key.as_str(), "kind" | "out" | "seed") && !kind.keys().contains(&key.as_str()) {
                return Err(err(*l, key, format!("not used by kind `{}`", kind.name())));
            }
        }

        let y = match raw.get("Y") {
            None => NodeMultiset::empty(),
            Some((l, v)) => NodeMultiset::parse(v).map_err(|e| match e {
                Error::Parse { field, reason, .. } => err(*l, &field, reason),
                other => err(*l, "Y", other.to_string()),
            })?,
        };
        let n = match raw.get("n") {
            None => Vec::new(),
            Some((l, v)) => v
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| err(*l, "n", format!("expected a comma-separated list of degrees, got `{v}`")))?,
        };
        if let Some((l, _)) = raw.get("n") {
            if n.contains(&0) {
                return Err(err(*l, "n", "degrees must be positive"));
            }
        }
        let estimate = match raw.get("estimate") {
            None => None,
            Some((l, v)) => Some(v.parse::<EstimateTag>().map_err(|e| err(*l, "estimate", e.to_string()))?),
        };
        let epsilon = match raw.get("epsilon") {
            None => None,
            Some((l, v)) => Some(parse_epsilon(v).ok_or_else(|| err(*l, "epsilon", format!("expected inv_log, root:k or power:p, got `{v}`")))?),
        };
        let mut asserts = Vec::new();
        for (l, v) in &raw.asserts {
            asserts.push(Assertion::parse(v).ok_or_else(|| err(*l, "assert", format!("expected `path op number`, got `{v}`")))?);
        }
        let out = match raw.get("out") {
            None => default_out,
            Some((_, v)) => base.join(v),
        };

        let cfg = Config {
            kind,
            f: raw.get("f").map(|(_, v)| v.clone()),
            y,
            estimate,
            k: raw.parse("k")?,
            r: raw.parse("r")?,
            nu: raw.parse("nu")?,
            ell: raw.parse("ell")?,
            m: raw.parse("m")?,
            alpha: raw.parse("alpha")?,
            x0: raw.parse("x0")?,
            s: raw.parse("s")?.unwrap_or(0.0),
            n,
            density: raw.parse("density")?,
            mu: raw.parse("mu")?,
            trials: raw.parse("trials")?.unwrap_or(200),
            depth: raw.parse("depth")?.unwrap_or(5),
            slack: raw.parse("slack")?.unwrap_or(2.0),
            target: raw.parse("target")?.unwrap_or(100.0),
            delta: raw.parse("delta")?.unwrap_or(0.5),
            grid_points: raw.parse("grid_points")?.unwrap_or(512),
            j_max: raw.parse("j_max")?.unwrap_or(24),
            epsilon,
            seed: raw.parse("seed")?.unwrap_or(DEFAULT_SEED),
            out,
            asserts,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let need = |present: bool, field: &str| if present { Ok(()) } else { Err(missing(field, self.kind)) };
        let range = |field: &str, ok: bool, reason: &str| {
            if ok {
                Ok(())
            } else {
                Err(ConfigError {
                    line: None,
                    field: field.to_string(),
                    reason: reason.to_string(),
                })
            }
        };
        match self.kind {
            Kind::Verify | Kind::Construct => {
                need(self.f.is_some(), "f")?;
                need(self.k.is_some(), "k")?;
                need(self.r.is_some(), "r")?;
                need(!self.n.is_empty(), "n")?;
                if self.kind == Kind::Verify {
                    need(self.estimate.is_some(), "estimate")?;
                }
                range("k", self.k >= Some(1), "must be at least 1")?;
            }
            Kind::Dz59 => {
                need(!self.n.is_empty(), "n")?;
                range("n", self.n.iter().all(|n| n % 2 == 1), "degrees must be odd")?;
            }
            Kind::Dlb => {
                need(self.alpha.is_some(), "alpha")?;
                need(self.nu.is_some(), "nu")?;
                need(!self.n.is_empty(), "n")?;
                range("trials", self.trials > 0, "must be positive")?;
            }
            Kind::Blowup => need(!self.n.is_empty(), "n")?,
            Kind::Sandwich => {
                need(self.k.is_some(), "k")?;
                range("slack", self.slack >= 1.0, "must be at least 1")?;
            }
            Kind::Weak => {
                need(self.k.is_some(), "k")?;
                range("n", self.n.len() == 1, "exactly one degree")?;
                range("delta", self.delta > 0.0 && self.delta < 1.0, "must lie in (0, 1)")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Config, ConfigError> {
        Config::parse(text, Path::new("."), PathBuf::from("out"))
    }

    #[test]
    fn reads_entries_comments_and_asserts() {
        let c = parse("# dz\nkind = dz59\nn = 3, 5 # two degrees\nassert = rows.0.deriv_at_0 == 9\n").unwrap();
        assert_eq!(c.kind, Kind::Dz59);
        assert_eq!(c.n, vec![3, 5]);
        assert_eq!(c.asserts.len(), 1);
        assert!(c.asserts[0].holds(9.0));
        assert_eq!(c.seed, DEFAULT_SEED);
    }

    #[test]
    fn diagnostics_carry_line_and_field() {
        let e = parse("kind = construct\nf = exp\nY = 0:0\n").unwrap_err();
        assert_eq!(e.line, Some(3));
        assert!(e.field.starts_with('Y'), "{e}");
        let e = parse("kind = dz59\nn = 3\nn = 5\n").unwrap_err();
        assert_eq!(e.line, Some(3));
        let e = parse("kind = dz59\nn = 3\nk = 2\n").unwrap_err();
        assert_eq!(e.field, "k");
        let e = parse("kind = dz59\nn = 4\n").unwrap_err();
        assert_eq!(e.field, "n");
        let e = parse("kind = verify\nf = exp\nk = 2\nr = 0\nn = 8\n").unwrap_err();
        assert_eq!(e.field, "estimate");
        assert!(parse("kind = dz59\nn = 3\nassert = x ~ 1\n").is_err());
    }

    #[test]
    fn epsilon_labels() {
        assert!(parse_epsilon("inv_log").is_some());
        assert!(parse_epsilon("root:2").is_some());
        assert!(parse_epsilon("power:0.5").is_some());
        assert!(parse_epsilon("root:0").is_none());
        assert!(parse_epsilon("log").is_none());
    }
}
