//! Finite differences and grid estimates of moduli of smoothness.

use rayon::prelude::*;
use serde::Serialize;

use super::function::FunctionModel;
use crate::error::{Error, Result};
use crate::numcore::{EvalGrid, Interval};

/// Number of step sizes used when estimating a single `omega_k(t)`.
pub const U_STEPS: usize = 64;
/// Decades spanned by that step grid below `t`.
pub const U_DECADES: f64 = 4.0;

pub(crate) fn binomials(k: usize) -> Vec<f64> {
    let mut b = vec![1.0; k + 1];
    for i in 1..=k {
        b[i] = b[i - 1] * (k + 1 - i) as f64 / i as f64;
    }
    b
}

/// Symmetric difference `sum_i (-1)^i C(k,i) g(x + (k/2 - i) u)`, without the admissibility test.
pub(crate) fn raw_difference(g: impl Fn(f64) -> f64, binom: &[f64], u: f64, x: f64) -> f64 {
    let k = binom.len() - 1;
    let mut acc = 0.0;
    for (i, &b) in binom.iter().enumerate() {
        let s = if i % 2 == 0 { b } else { -b };
        acc += s * g(x + (k as f64 / 2.0 - i as f64) * u);
    }
    acc
}

/// `Delta^k_u(f, x; J)`, exactly zero when the stencil leaves `J`.
pub fn finite_difference(f: &FunctionModel, k: usize, u: f64, x: f64, j: Interval) -> f64 {
    let half = k as f64 * u / 2.0;
    if !(j.contains(x - half) && j.contains(x + half)) {
        return 0.0;
    }
    raw_difference(|y| f.eval(y), &binomials(k), u, x)
}

/// Sup over admissible `x` of `|Delta^k_u g(x)|` for a single step `u`.
///
/// The candidates are the grid points inside the admissible range, its two
/// ends, and every shift that puts a stencil node or stencil midpoint on a
/// feature of the function.
fn sup_difference(g: &FunctionModel, r: usize, binom: &[f64], u: f64, j: Interval, xs: &[f64]) -> f64 {
    let k = binom.len() - 1;
    let half = k as f64 * u / 2.0;
    let (lo, hi) = (j.a + half, j.b - half);
    if lo > hi {
        return 0.0;
    }
    let eval = |y: f64| g.deriv(r, y);
    let mut best = 0.0f64;
    let mut probe = |x: f64| {
        if x >= lo && x <= hi {
            let v = raw_difference(eval, binom, u, x).abs();
            if v.is_finite() {
                best = best.max(v);
            } else {
                best = f64::INFINITY;
            }
        }
    };
    probe(lo);
    probe(hi);
    let start = xs.partition_point(|&x| x < lo);
    for &x in &xs[start..] {
        if x > hi {
            break;
        }
        probe(x);
    }
    for &p in g.features() {
        for i in 0..=k {
            let off = (k as f64 / 2.0 - i as f64) * u;
            probe(p - off);
            probe(p - off + 0.5 * u);
            probe(p - off - 0.5 * u);
        }
    }
    best
}

fn log_steps(t: f64, count: usize, decades: f64) -> Vec<f64> {
    (0..count)
        .map(|i| {
            if i == 0 {
                t
            } else {
                t * 10f64.powf(-decades * i as f64 / (count - 1) as f64)
            }
        })
        .collect()
}

/// Grid estimate of `omega_k(f^{(r)}, t; J)`: the max of `|Delta^k_u f^{(r)}|`
/// over 64 log-spaced steps `u` in `[t 10^-4, t]` and the admissible grid points.
///
/// This is a lower bound for the true modulus.
pub fn omega_k(f: &FunctionModel, r: usize, k: usize, t: f64, j: Interval, grid: &EvalGrid) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if r > f.r_max() {
        return Err(Error::Precondition(format!(
            "{} has derivatives only up to order {}, asked for {r}",
            f.label(),
            f.r_max()
        )));
    }
    if k == 0 {
        return Err(Error::param("k", "modulus order must be at least 1"));
    }
    if !(t > 0.0) {
        return Err(Error::param("t", "must be positive"));
    }
    let binom = binomials(k);
    let us = log_steps(t, U_STEPS, U_DECADES);
    let vals: Vec<f64> = us
        .par_iter()
        .map(|&u| sup_difference(f, r, &binom, u, j, grid.points()))
        .collect();
    Ok(vals.into_iter().fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy)]
pub struct ProfileOptions {
    pub per_decade: usize,
    /// Smallest tabulated `t`, relative to `|J|`.
    pub t_min_rel: f64,
    pub x_points: usize,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            per_decade: 24,
            t_min_rel: 1e-9,
            x_points: 2049,
        }
    }
}

/// Tabulated `t -> omega_k(f^{(r)}, t; J)` on a log grid.
#[derive(Debug, Clone)]
pub struct ModulusProfile {
    k: usize,
    r: usize,
    interval: Interval,
    ts: Vec<f64>,
    omegas: Vec<f64>,
    model: FunctionModel,
    xs: Vec<f64>,
}

impl ModulusProfile {
    pub fn build(f: &FunctionModel, r: usize, k: usize, j: Interval, opts: ProfileOptions) -> Result<Self> {
        if r > f.r_max() {
            return Err(Error::Precondition(format!(
                "{} has derivatives only up to order {}, asked for {r}",
                f.label(),
                f.r_max()
            )));
        }
        if k == 0 {
            return Err(Error::param("k", "modulus order must be at least 1"));
        }
        let t_max = j.len() / k as f64;
        let t_min = j.len() * opts.t_min_rel;
        let decades = (t_max / t_min).log10();
        let count = (decades * opts.per_decade as f64).ceil() as usize + 1;
        let ts: Vec<f64> = (0..count)
            .map(|i| {
                if i + 1 == count {
                    t_max
                } else {
                    t_min * 10f64.powf(decades * i as f64 / (count - 1) as f64)
                }
            })
            .collect();
        let xs = EvalGrid::uniform(j, opts.x_points.max(2))?.points().to_vec();
        let binom = binomials(k);
        let raw: Vec<f64> = ts
            .par_iter()
            .map(|&u| sup_difference(f, r, &binom, u, j, &xs))
            .collect();
        let mut omegas = Vec::with_capacity(raw.len());
        let mut m = 0.0f64;
        for v in raw {
            m = m.max(v);
            omegas.push(m);
        }
        Ok(ModulusProfile {
            k,
            r,
            interval: j,
            ts,
            omegas,
            model: f.clone(),
            xs,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn ts(&self) -> &[f64] {
        &self.ts
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn label(&self) -> &str {
        self.model.label()
    }

    /// `omega(t)`: interpolated in log-log scale inside the table, computed
    /// directly below it, and constant above `|J|/k`.
    pub fn eval(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        let n = self.ts.len();
        if t >= self.ts[n - 1] {
            return self.omegas[n - 1];
        }
        if t < self.ts[0] {
            let binom = binomials(self.k);
            return log_steps(t, U_STEPS, U_DECADES)
                .into_iter()
                .map(|u| sup_difference(&self.model, self.r, &binom, u, self.interval, &self.xs))
                .fold(0.0, f64::max)
                .min(self.omegas[0]);
        }
        let i = self.ts.partition_point(|&s| s <= t) - 1;
        let (t0, t1) = (self.ts[i], self.ts[i + 1]);
        let (w0, w1) = (self.omegas[i], self.omegas[i + 1]);
        if w0 <= 0.0 || w1 <= 0.0 {
            return w0 + (w1 - w0) * (t - t0) / (t1 - t0);
        }
        let s = (t / t0).ln() / (t1 / t0).ln();
        (w0.ln() + s * (w1 / w0).ln()).exp()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,omega\n");
        for (t, w) in self.ts.iter().zip(&self.omegas) {
            out.push_str(&format!("{t:e},{w:e}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MarchaudRow {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MarchaudReport {
    pub k: usize,
    pub rows: Vec<MarchaudRow>,
    pub max_c: f64,
    /// Max constant after doubling the integration grid.
    pub max_c_refined: f64,
    /// Set when refinement raised the constant by more than 5%.
    pub grows_under_refinement: bool,
}

/// Measures `omega_1(g, t) <= c (t int_t^{|J|} omega_k(g, u) u^-2 du + t |J|^-1 ||g||)` with `g = f^{(r)}`.
pub fn marchaud_check(f: &FunctionModel, r: usize, k: usize, j: Interval, ts: &[f64]) -> Result<MarchaudReport> {
    if k < 2 {
        return Err(Error::param("k", "Marchaud check needs k >= 2"));
    }
    let opts = ProfileOptions::default();
    let w1 = ModulusProfile::build(f, r, 1, j, opts)?;
    let wk = ModulusProfile::build(f, r, k, j, opts)?;
    let g = f.derivative_model(r)?;
    let xs = EvalGrid::uniform(j, opts.x_points)?;
    let mut norm = 0.0f64;
    for &x in xs.points().iter().chain(g.features()) {
        if j.contains(x) {
            norm = norm.max(g.eval(x).abs());
        }
    }
    let len = j.len();
    let run = |per_decade: usize| -> Vec<MarchaudRow> {
        ts.iter()
            .map(|&t| {
                let lhs = w1.eval(t);
                let integral = log_trapezoid(|u| wk.eval(u) / u, t, len, per_decade);
                let rhs = t * integral + t / len * norm;
                let c = if lhs == 0.0 { 0.0 } else { lhs / rhs };
                MarchaudRow { t, lhs, rhs, c }
            })
            .collect()
    };
    let rows = run(32);
    let refined = run(64);
    let max_c = rows.iter().map(|r| r.c).fold(0.0, f64::max);
    let max_c_refined = refined.iter().map(|r| r.c).fold(0.0, f64::max);
    Ok(MarchaudReport {
        k,
        rows,
        max_c,
        max_c_refined,
        grows_under_refinement: max_c_refined > 1.05 * max_c,
    })
}

/// `int_a^b h(u) d(ln u)` by the trapezoid rule on a log grid.
fn log_trapezoid(h: impl Fn(f64) -> f64, a: f64, b: f64, per_decade: usize) -> f64 {
    if a >= b {
        return 0.0;
    }
    let (la, lb) = (a.ln(), b.ln());
    let n = (((lb - la) / std::f64::consts::LN_10) * per_decade as f64).ceil().max(1.0) as usize;
    let step = (lb - la) / n as f64;
    let mut acc = 0.5 * (h(a) + h(b));
    for i in 1..n {
        acc += h((la + step * i as f64).exp());
    }
    acc * step
}
