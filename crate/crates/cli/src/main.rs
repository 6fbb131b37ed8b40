//! `approx`: runs constructor, verifier and counterexample experiments.
//!
//! Exit status: 0 on success, 1 when a declared assertion fails, 2 on a
//! config or argument parse error, 3 on a numerical failure.

mod config;
mod experiment;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use config::{Config, ConfigError};

#[derive(Parser)]
#[command(name = "approx", version, about = "Interpolatory pointwise approximation experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Common {
    /// Function label: exp, sin[:a], cos[:a], abspow:g, pluspow:g[:z], poly:c0,c1,...
    #[arg(long = "f")]
    f: String,
    /// Nodes as `z:m,z:m,...`
    #[arg(long = "Y", default_value = "", allow_hyphen_values = true)]
    y: String,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    r: usize,
    /// Degree or comma-separated ladder.
    #[arg(long)]
    n: String,
    #[arg(long)]
    mu: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run an experiment config.
    Run { cfg: PathBuf },
    /// Measure an estimate on the constructor output.
    Verify {
        /// Estimate tag, e.g. CLASSDIR, AN2, MAINNEW1_78.
        estimate: String,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        nu: Option<usize>,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Grid points per unit of degree.
        #[arg(long)]
        density: Option<usize>,
        #[arg(long, default_value = "verify_out")]
        out: PathBuf,
    },
    /// Counterexample experiments.
    Counterex {
        #[arg(value_parser = ["i", "ii", "weak"])]
        case: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        depth: Option<usize>,
        /// inv_log, root:k or power:p
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long, default_value = "counterex_out")]
        out: PathBuf,
    },
    /// Build the interpolating approximant and write it as JSON.
    Construct {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "poly.json")]
        out: PathBuf,
    },
}

enum Failure {
    Parse(String),
    Assertion(Vec<String>),
    Numeric(anyhow::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Parse(e.to_string())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        // parse errors raised by the library surface as exit 2 as well
        if matches!(e.downcast_ref::<pointwise_approx::Error>(), Some(pointwise_approx::Error::Parse { .. })) {
            return Failure::Parse(format!("{e:#}"));
        }
        Failure::Numeric(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(failed)) => {
            for a in failed {
                eprintln!("assertion failed: {a}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Parse(msg)) => {
            eprintln!("parse error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Run { cfg } => {
            let text = fs::read_to_string(&cfg).with_context(|| format!("reading {}", cfg.display()))?;
            let base = cfg.parent().map(Path::to_path_buf).unwrap_or_default();
            let stem = cfg.file_stem().and_then(|s| s.to_str()).unwrap_or("run");
            let config = Config::parse(&text, &base, base.join(format!("{stem}_out")))?;
            execute(&config)
        }
        Cmd::Verify {
            estimate,
            common,
            nu,
            ell,
            m,
            x0,
            alpha,
            density,
            out,
        } => {
            let mut lines = common_lines("verify", &common);
            lines.push(format!("estimate = {estimate}"));
            push_opt(&mut lines, "nu", nu);
            push_opt(&mut lines, "ell", ell);
            push_opt(&mut lines, "m", m);
            push_opt(&mut lines, "x0", x0);
            push_opt(&mut lines, "alpha", alpha);
            push_opt(&mut lines, "density", density);
            execute(&from_lines(&lines, out)?)
        }
        Cmd::Counterex {
            case,
            k,
            r,
            n,
            depth,
            epsilon,
            out,
        } => {
            let kind = match case.as_str() {
                "i" => "blowup",
                "ii" => "sandwich",
                _ => "weak",
            };
            let mut lines = vec![format!("kind = {kind}")];
            push_opt(&mut lines, "k", k);
            push_opt(&mut lines, "r", r);
            push_opt(&mut lines, "n", n);
            push_opt(&mut lines, "depth", depth);
            push_opt(&mut lines, "epsilon", epsilon);
            execute(&from_lines(&lines, out)?)
        }
        Cmd::Construct { common, out } => {
            let lines = common_lines("construct", &common);
            let config = from_lines(&lines, PathBuf::new())?;
            let art = experiment::run(&config)?;
            if art.files.len() != 1 {
                return Err(Failure::Parse("construct --out takes a single degree".into()));
            }
            write_atomic(&out, &art.files[0].1)?;
            Ok(())
        }
    }
}

fn common_lines(kind: &str, c: &Common) -> Vec<String> {
    let mut lines = vec![
        format!("kind = {kind}"),
        format!("f = {}", c.f),
        format!("Y = {}", c.y),
        format!("k = {}", c.k),
        format!("r = {}", c.r),
        format!("n = {}", c.n),
    ];
    push_opt(&mut lines, "mu", c.mu);
    lines
}

fn push_opt<T: std::fmt::Display>(lines: &mut Vec<String>, key: &str, v: Option<T>) {
    if let Some(v) = v {
        lines.push(format!("{key} = {v}"));
    }
}

fn from_lines(lines: &[String], out: PathBuf) -> Result<Config, Failure> {
    Ok(Config::parse(&lines.join("\n"), Path::new(""), out)?)
}

fn execute(cfg: &Config) -> Result<(), Failure> {
    let art = experiment::run(cfg)?;
    let mut summary = Value::Object(art.summary);
    let mut failed = Vec::new();
    let checks: Vec<Value> = cfg
        .asserts
        .iter()
        .map(|a| {
            let lhs = experiment::lookup(&summary, &a.path);
            let pass = lhs.is_some_and(|v| a.holds(v));
            if !pass {
                failed.push(format!("{} (value {})", a.text, lhs.map_or("missing".into(), |v| v.to_string())));
            }
            json!({ "assert": a.text, "value": lhs, "pass": pass })
        })
        .collect();
    summary["assertions"] = Value::Array(checks);

    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    for (name, body) in &art.files {
        write_atomic(&cfg.out.join(name), body)?;
    }
    write_atomic(&cfg.out.join("summary.json"), &experiment::pretty(&summary)?)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Assertion(failed))
    }
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, body: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).with_context(|| format!("temp file in {}", dir.display()))?;
    tmp.write_all(body)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
