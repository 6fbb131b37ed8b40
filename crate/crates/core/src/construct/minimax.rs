//! Weighted minimax fits under Hermite equality constraints (Lawson iteration).

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermite::{hermite_interpolant_on, mul_root, NodeMultiset};
use crate::numcore::EvalGrid;
use crate::poly::ChebPoly;
use crate::smoothness::FunctionModel;

const MAX_ITER: usize = 200;
const REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct MinimaxResult {
    #[serde(skip)]
    pub poly: ChebPoly,
    /// Max of `|f - P| / w` over the grid for the returned `P`.
    pub upper: f64,
    /// A certified lower bound for the grid minimax value (from the Lawson weights).
    pub lower: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimises `max_grid |f - P| / w` over degree-`n` polynomials with
/// `P^{(nu)}(y_j) = f^{(nu)}(y_j)`.
///
/// The constraints are eliminated by writing `P = L + omega_Y q` with `L` the
/// Hermite interpolant and `omega_Y = prod (x - y_j)`; `q` is then fitted by
/// Lawson's reweighted least squares. Every weighted least-squares residual is a
/// lower bound for the minimax value, which gives `lower`.
pub fn constrained_minimax(
    f: &FunctionModel,
    y: &NodeMultiset,
    n: usize,
    weight: &dyn Fn(f64) -> f64,
    grid: &EvalGrid,
) -> Result<MinimaxResult> {
    let s = y.s();
    if s > n + 1 {
        return Err(Error::RankDeficient(format!("{s} constraints exceed degree n = {n} plus one")));
    }
    let dom = grid.domain();
    let base = if y.is_empty() {
        ChebPoly::zero_on(dom)
    } else {
        hermite_interpolant_on(f, y, dom)?
    };
    let omega = y
        .flat()
        .iter()
        .fold(ChebPoly::on(dom, vec![1.0]), |p, &v| mul_root(&p, v));
    let xs = grid.points();
    let w: Vec<f64> = xs.iter().map(|&x| weight(x)).collect();
    if w.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::param("weight", "must be positive and finite on the grid"));
    }
    let e: Vec<f64> = xs
        .iter()
        .zip(&w)
        .map(|(&x, &wi)| (f.eval(x) - base.eval(x)) / wi)
        .collect();
    let cols = n + 1 - s;
    if cols == 0 {
        let upper = e.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        return Ok(MinimaxResult {
            poly: base,
            upper,
            lower: upper,
            iterations: 0,
            converged: true,
        });
    }
    let g = xs.len();
    if g < cols {
        return Err(Error::RankDeficient(format!("{g} grid points for {cols} free coefficients")));
    }
    let mut a = DMatrix::<f64>::zeros(g, cols);
    for (i, &x) in xs.iter().enumerate() {
        let t = dom.to_unit(x);
        let ow = omega.eval(x) / w[i];
        let (mut t0, mut t1) = (1.0, t);
        for k in 0..cols {
            let tk = if k == 0 {
                1.0
            } else if k == 1 {
                t
            } else {
                let t2 = 2.0 * t * t1 - t0;
                t0 = t1;
                t1 = t2;
                t2
            };
            a[(i, k)] = ow * tk;
        }
    }
    let ev = DVector::from_vec(e);
    let mut lam = vec![1.0 / g as f64; g];
    let mut best: Option<(f64, DVector<f64>)> = None;
    let mut lower = 0.0f64;
    let mut prev = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;
    for it in 1..=MAX_ITER {
        iterations = it;
        let sq: Vec<f64> = lam.iter().map(|l| l.sqrt()).collect();
        let mut aw = a.clone();
        for (i, &s) in sq.iter().enumerate() {
            aw.row_mut(i).scale_mut(s);
        }
        let bw = DVector::from_iterator(g, ev.iter().zip(&sq).map(|(v, s)| v * s));
        let qr = aw.qr();
        let rdiag = qr.r().diagonal();
        let rmax = rdiag.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if rdiag.iter().any(|v| v.abs() <= 1e-13 * rmax) {
            return Err(Error::RankDeficient("constraint-reduced basis is singular on the grid".into()));
        }
        let qtb = qr.q().transpose() * &bw;
        let c = qr
            .r()
            .solve_upper_triangular(&qtb)
            .ok_or_else(|| Error::RankDeficient("triangular solve failed".into()))?;
        let res = &ev - &a * &c;
        let wls: f64 = lam.iter().zip(res.iter()).map(|(l, r)| l * r * r).sum();
        lower = lower.max(wls.sqrt());
        let upper = res.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if best.as_ref().map_or(true, |(u, _)| upper < *u) {
            best = Some((upper, c.clone()));
        }
        if upper == 0.0 || ((prev - upper).abs() / upper < REL_TOL) {
            converged = true;
            break;
        }
        prev = upper;
        let total: f64 = lam.iter().zip(res.iter()).map(|(l, r)| l * r.abs()).sum();
        if total == 0.0 {
            converged = true;
            break;
        }
        for (l, r) in lam.iter_mut().zip(res.iter()) {
            *l = *l * r.abs() / total;
        }
    }
    let (upper, c) = best.expect("at least one iteration");
    let q = ChebPoly::on(dom, c.iter().copied().collect());
    let poly = base.add(&omega.mul(&q));
    Ok(MinimaxResult {
        poly,
        upper,
        lower: lower.min(upper),
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::Interval;

    /// Discrete Remez exchange on a grid, for cross-checking.
    fn remez_oracle(f: impl Fn(f64) -> f64, n: usize, xs: &[f64]) -> f64 {
        let m = n + 2;
        let g = xs.len();
        let mut refs: Vec<usize> = (0..m)
            .map(|i| {
                let c = -(std::f64::consts::PI * i as f64 / (m - 1) as f64).cos();
                // a slight warp keeps the start away from symmetric degeneracies
                let t = c + 0.05 * (1.0 - c * c);
                xs.iter()
                    .enumerate()
                    .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
                    .unwrap()
                    .0
            })
            .collect();
        let mut level = 0.0;
        for _ in 0..100 {
            let mut mat = DMatrix::<f64>::zeros(m, m);
            let mut rhs = DVector::<f64>::zeros(m);
            for (row, &i) in refs.iter().enumerate() {
                let x = xs[i];
                for k in 0..=n {
                    mat[(row, k)] = x.powi(k as i32);
                }
                mat[(row, n + 1)] = if row % 2 == 0 { 1.0 } else { -1.0 };
                rhs[row] = f(x);
            }
            let sol = mat.lu().solve(&rhs).unwrap();
            level = sol[n + 1].abs();
            let p = |x: f64| (0..=n).map(|k| sol[k] * x.powi(k as i32)).sum::<f64>();
            let err: Vec<f64> = xs.iter().map(|&x| f(x) - p(x)).collect();
            // new reference: signed extrema of alternating runs
            let mut ext: Vec<usize> = Vec::new();
            let mut i = 0;
            while i < g {
                let s = err[i].signum();
                let mut best = i;
                while i < g && err[i].signum() == s {
                    if err[i].abs() > err[best].abs() {
                        best = i;
                    }
                    i += 1;
                }
                ext.push(best);
            }
            let maxerr = err.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if ext.len() < m || (maxerr - level) / maxerr < 1e-10 {
                return maxerr;
            }
            // keep the window of m alternating extrema around the global maximum
            let top = (0..ext.len())
                .max_by(|&i, &j| err[ext[i]].abs().total_cmp(&err[ext[j]].abs()))
                .unwrap();
            let start = top.saturating_sub(m / 2).min(ext.len() - m);
            ext = ext[start..start + m].to_vec();
            refs = ext;
        }
        level
    }

    #[test]
    fn exact_polynomial_gives_zero() {
        let f = FunctionModel::polynomial(&[1.0, -2.0, 0.5]);
        let grid = EvalGrid::uniform(Interval::unit(), 201).unwrap();
        let y = NodeMultiset::parse("-1,1").unwrap();
        let res = constrained_minimax(&f, &y, 4, &|_| 1.0, &grid).unwrap();
        assert!(res.upper < 1e-13);
    }

    #[test]
    fn abs_against_exchange_oracle() {
        let f = FunctionModel::abspow(1.0).unwrap();
        let grid = EvalGrid::uniform(Interval::unit(), 2001).unwrap();
        let res = constrained_minimax(&f, &NodeMultiset::empty(), 10, &|_| 1.0, &grid).unwrap();
        let oracle = remez_oracle(|x| x.abs(), 10, grid.points());
        assert!(res.lower <= oracle * (1.0 + 1e-9), "{} {}", res.lower, oracle);
        assert!((res.upper - oracle).abs() <= 0.1 * oracle, "{} vs {}", res.upper, oracle);
    }

    #[test]
    fn constraints_hold_exactly() {
        let f = FunctionModel::exp();
        let grid = EvalGrid::uniform(Interval::unit(), 501).unwrap();
        let y = NodeMultiset::parse("-1:1,1:1").unwrap();
        let res = constrained_minimax(&f, &y, 5, &|_| 1.0, &grid).unwrap();
        assert!((res.poly.eval(1.0) - f.eval(1.0)).abs() < 1e-10);
        assert!((res.poly.eval(-1.0) - f.eval(-1.0)).abs() < 1e-10);
        assert!(res.upper < 1e-3);
    }

    #[test]
    fn too_many_constraints() {
        let f = FunctionModel::exp();
        let grid = EvalGrid::uniform(Interval::unit(), 51).unwrap();
        let y = NodeMultiset::parse("-1:2,1:2").unwrap();
        assert!(matches!(
            constrained_minimax(&f, &y, 2, &|_| 1.0, &grid),
            Err(Error::RankDeficient(_))
        ));
    }
}
