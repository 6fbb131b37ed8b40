//! Weighted Bernstein-type inequality checkers.

use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::ChebPoly;
use crate::error::{Error, Result};
use crate::numcore::{rho_unchecked, EvalGrid};
use crate::rng;
use crate::smoothness::PhiFunction;

/// `sup rho^{s+nu} |P^{(nu)}| / phi(rho)` divided by `sup rho^s |P| / phi(rho)`, both on the grid.
pub fn dlb_ratio(p: &ChebPoly, n: usize, phi: &PhiFunction, s: f64, nu: usize, grid: &EvalGrid) -> Result<f64> {
    if nu == 0 {
        return Err(Error::param("nu", "derivative order must be at least 1"));
    }
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    if p.degree() > n {
        return Err(Error::Precondition(format!("degree {} exceeds n = {n}", p.degree())));
    }
    if p.is_zero() {
        return Ok(0.0);
    }
    let d = p.nth_derivative(nu);
    let (mut lhs, mut rhs) = (0.0f64, 0.0f64);
    for &x in grid.points() {
        let r = rho_unchecked(n, x);
        let w = r.powf(s) / phi.eval(r);
        lhs = lhs.max((r.powi(nu as i32) * w * d.eval(x)).abs());
        rhs = rhs.max((w * p.eval(x)).abs());
    }
    if rhs == 0.0 {
        return Ok(0.0);
    }
    Ok(lhs / rhs)
}

/// Degree-`n` polynomial with independent standard-normal Chebyshev coefficients.
pub fn random_cheb<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> ChebPoly {
    let c: Vec<f64> = (0..=n).map(|_| rng.sample(StandardNormal)).collect();
    ChebPoly::new(c)
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub trial: usize,
    pub ratio: f64,
}

/// `trials` random polynomials per `n`, each on a `rho_n`-adapted grid with `density` points per unit `rho_n`.
pub fn dlb_sweep(
    ns: &[usize],
    trials: usize,
    phi: &PhiFunction,
    s: f64,
    nu: usize,
    density: usize,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(ns.len() * trials);
    for &n in ns {
        let grid = EvalGrid::rho_adaptive(n, density)?;
        let part: Vec<Result<SweepRow>> = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let mut g = rng::stream(seed, n as u64, trial as u64);
                let p = random_cheb(n, &mut g);
                let ratio = dlb_ratio(&p, n, phi, s, nu, &grid)?;
                Ok(SweepRow { n, trial, ratio })
            })
            .collect();
        for r in part {
            rows.push(r?);
        }
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("n,trial,ratio\n");
    for r in rows {
        out.push_str(&format!("{},{},{:e}\n", r.n, r.trial, r.ratio));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct DzyadykReport {
    pub bound_ok: bool,
    /// `|P'(x0)|` after normalization.
    pub lhs: f64,
    /// `rho_n^{m-1}(x0)`.
    pub weight: f64,
    pub ratio: f64,
}

/// Normalizes `P` so that `sup |P(x)| / (|x - x0| + rho_n(x))^m = 1` on the grid and
/// compares `|P'(x0)|` with `constant * rho_n^{m-1}(x0)`.
pub fn dzyadyk_pointwise_check(
    p: &ChebPoly,
    n: usize,
    m: usize,
    x0: f64,
    grid: &EvalGrid,
    constant: f64,
) -> Result<DzyadykReport> {
    if m == 0 {
        return Err(Error::param("m", "must be at least 1"));
    }
    if !(x0.abs() <= 1.0) {
        return Err(Error::Domain(format!("x0 = {x0} outside [-1, 1]")));
    }
    let weight = rho_unchecked(n, x0).powi(m as i32 - 1);
    let mut norm = 0.0f64;
    for &x in grid.points() {
        let w = ((x - x0).abs() + rho_unchecked(n, x)).powi(m as i32);
        norm = norm.max(p.eval(x).abs() / w);
    }
    if norm == 0.0 {
        return Ok(DzyadykReport {
            bound_ok: true,
            lhs: 0.0,
            weight,
            ratio: 0.0,
        });
    }
    let lhs = p.derivative().eval(x0).abs() / norm;
    let ratio = lhs / weight;
    Ok(DzyadykReport {
        bound_ok: ratio <= constant,
        lhs,
        weight,
        ratio,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Dz59Report {
    pub n: usize,
    /// `|d/dx T_n(n x)|` at `x = 0`.
    pub deriv_at_0: f64,
    /// `n / rho_n(0)`, the bound with `A(0) = 1`.
    pub threshold: f64,
    /// Smallest `epsilon` compatible with `|P'(0)| <= (1 + epsilon) e A(0) / rho_n(0)`.
    pub implied_epsilon: f64,
    pub exceeds: bool,
}

/// The polynomial `T_n(n x)` has derivative `n^2` at the origin for odd `n`.
pub fn dz59_sharpness(n: usize) -> Result<Dz59Report> {
    if n % 2 == 0 {
        return Err(Error::param("n", format!("must be odd, got {n}")));
    }
    // chain rule: d/dx T_n(n x) = n T_n'(n x); the derivative series has integer coefficients
    let deriv_at_0 = (n as f64 * ChebPoly::chebyshev_t(n).derivative().eval(0.0)).abs();
    let r0 = rho_unchecked(n, 0.0);
    let threshold = n as f64 / r0;
    Ok(Dz59Report {
        n,
        deriv_at_0,
        threshold,
        implied_epsilon: deriv_at_0 * r0 / std::f64::consts::E - 1.0,
        exceeds: deriv_at_0 > threshold,
    })
}
