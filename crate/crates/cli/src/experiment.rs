use anyhow::{Context, Result};
use serde_json::{json, Map, Value};

use pointwise_approx::construct::{construct, ConstructOptions};
use pointwise_approx::counterex::{
    blowup_demo, build_case_i, build_case_ii, minimax_fitter, ratio_minimax_fitter, weak_sweep, Epsilon,
};
use pointwise_approx::poly::{dlb_sweep, dz59_sharpness};
use pointwise_approx::smoothness::{FunctionModel, PhiFunction};
use pointwise_approx::verify::{measure, EstimateKind};
use pointwise_approx::EvalGrid;

use crate::config::{Config, Kind};

/// A JSON summary plus named output files, all byte-deterministic.
pub struct Artifacts {
    pub summary: Map<String, Value>,
    pub files: Vec<(String, Vec<u8>)>,
}

impl Artifacts {
    fn new(cfg: &Config) -> Self {
        let mut summary = Map::new();
        summary.insert("kind".into(), json!(cfg.kind.name()));
        summary.insert("seed".into(), json!(cfg.seed));
        Artifacts {
            summary,
            files: Vec::new(),
        }
    }

    fn set(&mut self, key: &str, v: Value) {
        self.summary.insert(key.into(), v);
    }

    fn file(&mut self, name: String, body: impl Into<Vec<u8>>) {
        self.files.push((name, body.into()));
    }
}

fn csv_of<T: serde::Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    Ok(w.into_inner()?)
}

fn model(cfg: &Config) -> Result<FunctionModel> {
    let label = cfg.f.as_deref().unwrap_or_default();
    FunctionModel::from_label(label).with_context(|| format!("function `{label}`"))
}

fn construct_options(cfg: &Config) -> ConstructOptions {
    ConstructOptions {
        mu: cfg.mu,
        ..ConstructOptions::default()
    }
}

pub fn run(cfg: &Config) -> Result<Artifacts> {
    let mut art = Artifacts::new(cfg);
    match cfg.kind {
        Kind::Verify => verify(cfg, &mut art)?,
        Kind::Construct => build(cfg, &mut art)?,
        Kind::Dz59 => dz59(cfg, &mut art)?,
        Kind::Dlb => dlb(cfg, &mut art)?,
        Kind::Blowup => blowup(cfg, &mut art)?,
        Kind::Sandwich => sandwich(cfg, &mut art)?,
        Kind::Weak => weak(cfg, &mut art)?,
    }
    Ok(art)
}

/// Measures the estimate on the constructor output for every `n` of the ladder.
fn verify(cfg: &Config, art: &mut Artifacts) -> Result<()> {
    let f = model(cfg)?;
    let (k, r) = (cfg.k.unwrap_or(1), cfg.r.unwrap_or(0));
    let tag = cfg.estimate.expect("validated");
    let mut kind = EstimateKind::new(tag, k, r);
    if let Some(nu) = cfg.nu {
        kind = kind.with_nu(nu);
    }
    if let Some(ell) = cfg.ell {
        kind = kind.with_ell(ell);
    }
    if cfg.x0.is_some() || cfg.m.is_some() {
        kind = kind.with_point(cfg.x0.unwrap_or(0.0), cfg.m.unwrap_or(0));
    }
    if let Some(a) = cfg.alpha {
        kind = kind.with_alpha(a);
    }
    let density = cfg.density.unwrap_or(64);
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for &n in &cfg.n {
        let p = construct(&f, &cfg.y, k, r, n, construct_options(cfg)).with_context(|| format!("constructing n = {n}"))?;
        let grid = EvalGrid::lobatto(f.domain(), density * n)?;
        let rep = measure(&kind, &f, &p, &cfg.y, n, &grid).with_context(|| format!("measuring {tag} at n = {n}"))?;
        art.file(format!("ratios_n{n}.csv"), rep.to_csv());
        let mut row = rep.summary_json();
        row["constraint_residual"] = json!(p.constraint_residual(&f).max_rel_err);
        row["zero_den_consistent"] = json!(rep.zero_den_consistent(1e-10));
        rows.push(row);
        values.push(rep.a);
    }
    let resolved: Vec<f64> = values.iter().flatten().copied().collect();
    let max = resolved.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = resolved.iter().copied().fold(f64::INFINITY, f64::min);
    let all = resolved.len() == values.len();
    art.set("estimate", json!(tag.name()));
    art.set("f", json!(f.label()));
    art.set("Y", json!(cfg.y.to_string()));
    art.set("rows", Value::Array(rows));
    art.set("all_resolved", json!(all));
    art.set("max_a", if all { json!(max) } else { Value::Null });
    art.set("min_a", if all { json!(min) } else { Value::Null });
    art.set(
        "growth_vs_first",
        match values.first() {
            Some(Some(a0)) if all && *a0 > 0.0 => json!(max / a0),
            _ => Value::Null,
        },
    );
    art.set("max_over_min", if all && min > 0.0 { json!(max / min) } else { Value::Null });
    Ok(())
}

fn build(cfg: &Config, art: &mut Artifacts) -> Result<()> {
    let f = model(cfg)?;
    let (k, r) = (cfg.k.unwrap_or(1), cfg.r.unwrap_or(0));
    let mut rows = Vec::new();
    for &n in &cfg.n {
        let p = construct(&f, &cfg.y, k, r, n, construct_options(cfg)).with_context(|| format!("constructing n = {n}"))?;
        let exported = p.export_json()?;
        rows.push(json!({
            "n": n,
            "degree": exported["degree"],
            "constraint_residual": p.constraint_residual(&f).max_rel_err,
        }));
        art.file(format!("poly_n{n}.json"), pretty(&exported)?);
    }
    art.set("f", json!(f.label()));
    art.set("Y", json!(cfg.y.to_string()));
    art.set("rows", Value::Array(rows));
    Ok(())
}

fn dz59(cfg: &Config, art: &mut Artifacts) -> Result<()> {
    let reps = cfg.n.iter().map(|&n| dz59_sharpness(n)).collect::<pointwise_approx::Result<Vec<_>>>()?;
    art.file("dz59.csv".into(), csv_of(&reps)?);
    if let [one] = reps.as_slice() {
        if let Value::Object(m) = serde_json::to_value(one)? {
            art.summary.extend(m);
        }
    }
    art.set("all_exceed", json!(reps.iter().all(|r| r.exceeds)));
    art.set("rows", serde_json::to_value(&reps)?);
    Ok(())
}

fn dlb(cfg: &Config, art: &mut Artifacts) -> Result<()> {
    let alpha = cfg.alpha.expect("validated");
    let nu = cfg.nu.expect("validated");
    let phi = PhiFunction::power(alpha)?;
    let rows = dlb_sweep(&cfg.n, cfg.trials, &phi, cfg.s, nu, cfg.density.unwrap_or(8), cfg.seed)?;
    art.file("dlb.csv".into(), csv_of(&rows)?);
    let per_n: Vec<Value> = cfg
        .n
        .iter()
        .map(|&n| {
            let max = rows.iter().filter(|r| r.n == n).map(|r| r.ratio).fold(0.0, f64::max);
            json!({ "n": n, "max_ratio": max })
        })
        .collect();
    let overall = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    art.set("alpha", json!(alpha));
    art.set("s", json!(cfg.s));
    art.set("nu", json!(nu));
    art.set("trials", json!(cfg.trials));
    art.set("rows", Value::Array(per_n));
    art.set("max_ratio", json!(overall));
    Ok(())
}

fn blowup(cfg: &Config, art: &mut Artifacts) -> Result<()> {
    let inst = build_case_i(cfg.r.unwrap_or(0));
    let mut rows = Vec::new();
    let mut worst_growth = f64::INFINITY;
    let mut all_monotone = true;
    for &n in &cfg.n {
        let rep = blowup_demo(&inst, n, &minimax_fitter).with_context(|| format!("fitting n = {n}"))?;
        art.file(format!("blowup_n{n}.csv"), rep.to_csv());
        let growth = match (rep.ratio_at(4), rep.ratio_at(12)) {
            (Some(a), Some(b)) if a > 0.0 => b / a,
            _ => f64::NAN,
        };
        let mono = rep.nondecreasing(4, 12, 0.05);
        worst_growth = worst_growth.min(growth);
        all_monotone &= mono;
        rows.push(json!({
            "n": n,
            "slope": rep.slope,
            "one_signed_from": rep.one_signed_from,
            "dropped": rep.dropped,
            "growth_4_12": growth,
            "nondecreasing_4_12": mono,
        }));
    }
    art.set("r", json!(inst.r));
    art.set("rows", Value::Array(rows));
    art.set("min_growth_4_12", json!(worst_growth));
    art.set("all_nondecreasing", json!(all_monotone));
    Ok(())
}

fn sandwich(cfg: &Config, art: &mut Artifacts) -> Result<()> {
    let k = cfg.k.expect("validated");
    let eps = cfg.epsilon.unwrap_or_else(|| Epsilon::root(k));
    let inst = build_case_ii(k, cfg.r.unwrap_or(0), eps, cfg.depth)?;
    let sw = inst.sandwich(cfg.slack, 1e-12)?;
    art.file("sandwich.csv".into(), csv_of(&sw.rows)?);
    let trends = inst.diagnostics().is_some_and(|d| d.trends_monotone());
    art.set("k", json!(k));
    art.set("r", json!(inst.r));
    art.set("epsilon", json!(inst.epsilon.label()));
    art.set("holds", json!(sw.holds));
    art.set("resolved", json!(sw.resolved()));
    art.set("breakpoints", json!(sw.rows.len()));
    art.set("floor", json!(sw.floor));
    art.set("trends_monotone", json!(trends));
    Ok(())
}

fn weak(cfg: &Config, art: &mut Artifacts) -> Result<()> {
    let k = cfg.k.expect("validated");
    let r = cfg.r.unwrap_or(0);
    let eps = cfg.epsilon.unwrap_or_else(Epsilon::inv_log);
    let ws = weak_sweep(k, r, eps, cfg.n[0], cfg.target, cfg.delta, cfg.grid_points, cfg.j_max, &ratio_minimax_fitter)?;
    art.file("weak.csv".into(), csv_of(&ws.rows)?);
    art.set("target", json!(cfg.target));
    art.set("eps_star", json!(ws.eps_star));
    art.set("ratio_at_star", json!(ws.ratio_at_star));
    art.set("ratio_at_half", json!(ws.ratio_at_half));
    Ok(())
}

pub fn pretty(v: &Value) -> Result<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(v)?;
    s.push(b'\n');
    Ok(s)
}

/// Looks up a dotted path; numbers and booleans become `f64`.
pub fn lookup(summary: &Value, path: &str) -> Option<f64> {
    let mut v = summary;
    for seg in path.split('.') {
        v = match v {
            Value::Object(m) => m.get(seg)?,
            Value::Array(a) => a.get(seg.parse::<usize>().ok()?)?,
            _ => return None,
        };
    }
    match v {
        Value::Number(x) => x.as_f64(),
        Value::Bool(b) => Some(if *b { 1.0 } else { 0.0 }),
        _ => None,
    }
}
