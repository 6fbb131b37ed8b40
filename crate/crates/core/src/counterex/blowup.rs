use std::fmt::Write as _;

use serde::Serialize;

use super::{build_weak, Epsilon, NegativeInstance};
use crate::construct::constrained_minimax;
use crate::error::{Error, Result};
use crate::hermite::NodeMultiset;
use crate::numcore::EvalGrid;
use crate::poly::ChebPoly;
use crate::smoothness::{ModulusProfile, ProfileOptions};

#[derive(Debug, Clone, Serialize)]
pub struct DivergenceRow {
    pub m: usize,
    pub x: f64,
    pub num: f64,
    pub den: f64,
    pub ratio: f64,
    /// `|F(x_m)| / den` when `P(x_m)` and `F(x_m)` do not share a sign.
    pub sign_bound: Option<f64>,
}

/// `R_m = |F(x_m) - P(x_m)| / omega_k(F^{(r)}, eps(d) d^{(r+1)/k})` along the probes.
#[derive(Debug, Clone, Serialize)]
pub struct DivergenceReport {
    pub n: usize,
    pub rows: Vec<DivergenceRow>,
    /// Least-squares slope of `ln R_m` against `m`.
    pub slope: f64,
    /// Smallest `m` from which `P` keeps one sign on all later probes.
    pub one_signed_from: usize,
    /// Probes dropped because `x_m` is no longer distinguishable from the singular point.
    pub dropped: usize,
}

impl DivergenceReport {
    pub fn ratio_at(&self, m: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.m == m).map(|r| r.ratio)
    }

    /// `R_{m+1} >= (1 - slack) R_m` for consecutive probes with `m` in `[lo, hi]`.
    pub fn nondecreasing(&self, lo: usize, hi: usize, slack: f64) -> bool {
        let sel: Vec<f64> = self.rows.iter().filter(|r| r.m >= lo && r.m <= hi).map(|r| r.ratio).collect();
        sel.windows(2).all(|w| w[1] >= (1.0 - slack) * w[0])
    }

    pub fn max_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,x_m,num,den,ratio\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{:e},{:e},{:e},{:e}", r.m, r.x, r.num, r.den, r.ratio);
        }
        out
    }
}

/// Unconstrained minimax fit of degree `n` on the instance domain, on a grid
/// refined geometrically towards the singular point.
pub fn minimax_fitter(inst: &NegativeInstance, n: usize) -> Result<ChebPoly> {
    let dom = inst.domain;
    let mut extra: Vec<f64> = (1..=80)
        .map(|i| inst.singular + (-(i as f64) * 0.5).exp() * dom.len())
        .filter(|&x| x > inst.singular && x <= dom.b)
        .collect();
    extra.extend(inst.probes.iter().map(|p| inst.probe_x(p)).filter(|&x| x > inst.singular && x <= dom.b));
    extra.push(inst.singular);
    let grid = EvalGrid::lobatto(dom, (40 * n).max(2000))?.with_extra(&extra);
    Ok(constrained_minimax(&inst.model, &NodeMultiset::empty(), n, &|_| 1.0, &grid)?.poly)
}

/// The degree-`n` polynomial minimising the largest ratio
/// `|F(x_m) - P(x_m)| / omega_k(F^{(r)}, eps(d) d^{(r+1)/k})` over the probes,
/// among those matching `F` to order `r + 1` at the singular point.
///
/// The denominator is `o(d^{r+1})`, so any other `P` has an unbounded ratio
/// as `d -> 0`; the jet constraint is therefore no loss. Needs `F^{(r+1)}` at
/// the singular point.
pub fn ratio_minimax_fitter(inst: &NegativeInstance, n: usize) -> Result<ChebPoly> {
    if inst.model.r_max() < inst.r + 1 {
        return Err(Error::param("r", "the model has no derivative of order r + 1"));
    }
    let prof = ModulusProfile::build(&inst.model, inst.r, inst.k, inst.domain, ProfileOptions::default())?;
    let xs: Vec<f64> = inst
        .probes
        .iter()
        .map(|p| inst.probe_x(p))
        .filter(|&x| x > inst.singular && inst.domain.contains(x))
        .collect();
    let grid = EvalGrid::from_points(inst.domain, xs)?;
    let jet = NodeMultiset::new(vec![inst.singular], vec![inst.r + 2])?;
    let weight = |x: f64| prof.eval(inst.rate(x));
    Ok(constrained_minimax(&inst.model, &jet, n, &weight, &grid)?.poly)
}

pub fn blowup_demo(
    inst: &NegativeInstance,
    n: usize,
    fitter: &dyn Fn(&NegativeInstance, usize) -> Result<ChebPoly>,
) -> Result<DivergenceReport> {
    let p = fitter(inst, n)?;
    let prof = ModulusProfile::build(&inst.model, inst.r, inst.k, inst.domain, ProfileOptions::default())?;
    let mut rows = Vec::new();
    let mut dropped = 0;
    for probe in &inst.probes {
        let x = inst.probe_x(probe);
        if !(x > inst.singular) || !inst.domain.contains(x) {
            dropped += 1;
            continue;
        }
        let fx = inst.model.eval(x);
        let px = p.eval(x);
        let num = (fx - px).abs();
        let den = prof.eval(inst.rate(x));
        if !(den > 0.0) {
            dropped += 1;
            continue;
        }
        let sign_bound = (fx * px <= 0.0).then(|| fx.abs() / den);
        rows.push(DivergenceRow {
            m: probe.m,
            x,
            num,
            den,
            ratio: num / den,
            sign_bound,
        });
    }
    if rows.is_empty() {
        return Err(Error::Underflow { last_valid: 0 });
    }
    let signs: Vec<f64> = rows.iter().map(|r| p.eval(r.x)).collect();
    let last = signs.last().map_or(0.0, |s| s.signum());
    let tail = signs.iter().rev().take_while(|s| s.signum() == last).count();
    let one_signed_from = rows[rows.len() - tail].m;
    let slope = ls_slope(&rows);
    Ok(DivergenceReport {
        n,
        rows,
        slope,
        one_signed_from,
        dropped,
    })
}

fn ls_slope(rows: &[DivergenceRow]) -> f64 {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.ratio > 0.0)
        .map(|r| (r.m as f64, r.ratio.ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Serialize)]
pub struct WeakSweepRow {
    pub j: usize,
    pub eps: f64,
    pub sup_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeakSweep {
    pub rows: Vec<WeakSweepRow>,
    /// First `eps = 2^{-j}` whose sup ratio reaches the target.
    pub eps_star: Option<f64>,
    pub ratio_at_star: Option<f64>,
    pub ratio_at_half: Option<f64>,
}

/// Halves `eps` from `1/2` until the sup ratio over the probe grid of
/// `(eps - x)_+^{k+r}` reaches `target`, then measures one more halving.
///
/// With [`ratio_minimax_fitter`] each row is a lower bound over all degree-`n`
/// polynomials on that grid.
#[allow(clippy::too_many_arguments)]
pub fn weak_sweep(
    k: usize,
    r: usize,
    epsilon: Epsilon,
    n: usize,
    target: f64,
    delta: f64,
    grid_points: usize,
    j_max: usize,
    fitter: &dyn Fn(&NegativeInstance, usize) -> Result<ChebPoly>,
) -> Result<WeakSweep> {
    let mut rows = Vec::new();
    let mut star: Option<usize> = None;
    for j in 1..=j_max {
        let eps = 0.5f64.powi(j as i32);
        let inst = build_weak(k, r, eps, epsilon, delta, grid_points)?;
        let rep = blowup_demo(&inst, n, fitter)?;
        let sup_ratio = rep.max_ratio();
        rows.push(WeakSweepRow { j, eps, sup_ratio });
        if let Some(s) = star {
            if j > s {
                break;
            }
        } else if sup_ratio >= target {
            star = Some(j);
        }
    }
    let at = |j: usize| rows.iter().find(|r| r.j == j).map(|r| r.sup_ratio);
    Ok(WeakSweep {
        eps_star: star.map(|j| 0.5f64.powi(j as i32)),
        ratio_at_star: star.and_then(at),
        ratio_at_half: star.and_then(|j| at(j + 1)),
        rows,
    })
}
