//! The point sequence, step modulus and integrated functions of the `k >= max(2, r+1)` construction.
//!
//! Everything is kept in log space: the points shrink doubly exponentially
//! and leave the `f64` range after a few levels.

use std::num::NonZeroUsize;
use std::sync::Arc;

use gauss_quad::GaussLegendre;
use serde::Serialize;

use super::epsilon::Epsilon;
use crate::error::{Error, Result};
use crate::numcore::{EvalGrid, Interval};
use crate::smoothness::{omega_k, FunctionModel};

/// Below this the exponential of a log-space value is no longer a normal `f64`.
const LN_MIN_NORMAL: f64 = -708.0;
/// Left end of the `ln v` range used for the outer integral.
const S_TRUNC: f64 = -40.0;

#[derive(Debug, Clone, Serialize)]
pub struct StepSequence {
    pub k: usize,
    pub depth: usize,
    pub epsilon: Epsilon,
    /// `ln x_{2j}` for `j = 0..=depth`.
    pub ln_even: Vec<f64>,
    /// `ln x_{2j+1}` for `j < depth`.
    pub ln_odd: Vec<f64>,
    /// `ln xhat_{2j+1} = ln x_{2j} + ln x_{2j+1}`.
    pub ln_hat: Vec<f64>,
}

impl StepSequence {
    /// Builds the sequence from `x_0 = 1`. `epsilon` must already carry the `2 x^{1/k}` floor.
    pub fn new(k: usize, depth: usize, epsilon: Epsilon) -> Result<Self> {
        if k < 2 {
            return Err(Error::param("k", "the step construction needs k >= 2"));
        }
        if depth == 0 {
            return Err(Error::param("depth", "must be at least 1"));
        }
        let mut ln_even = vec![0.0];
        let (mut ln_odd, mut ln_hat) = (Vec::new(), Vec::new());
        for j in 0..depth {
            let le = ln_even[j];
            let lo = epsilon.ln_preimage(le);
            let next = le + k as f64 * lo;
            if !next.is_finite() {
                return Err(Error::Underflow { last_valid: 2 * j });
            }
            ln_odd.push(lo);
            ln_hat.push(le + lo);
            ln_even.push(next);
        }
        Ok(StepSequence {
            k,
            depth,
            epsilon,
            ln_even,
            ln_odd,
            ln_hat,
        })
    }

    /// `2 x_{2j+2} <= xhat_{2j+1} <= x_{2j+1} <= x_{2j}/2` for every built `j`.
    pub fn ordering_holds(&self) -> bool {
        let l2 = std::f64::consts::LN_2;
        let tol = 1e-12;
        (0..self.depth).all(|j| {
            self.ln_even[j + 1] + l2 <= self.ln_hat[j] + tol
                && self.ln_hat[j] <= self.ln_odd[j] + tol
                && self.ln_odd[j] <= self.ln_even[j] - l2 + tol
        })
    }

    /// `ln omega(t)`. Below the deepest point the modulus continues as `omega(t) = t`.
    pub fn ln_omega(&self, lt: f64) -> f64 {
        let k = self.k as f64;
        if lt >= 0.0 {
            return 0.0;
        }
        for j in 0..self.depth {
            if lt >= self.ln_hat[j] {
                return (1.0 - k) * self.ln_even[j] + k * lt;
            }
            if lt >= self.ln_even[j + 1] {
                return self.ln_even[j + 1];
            }
        }
        lt
    }

    pub fn omega(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        self.ln_omega(t.ln()).exp()
    }

    /// All stored breakpoints `x_j` and `xhat_j` (`j >= 1`), in log space, decreasing.
    pub fn ln_breakpoints(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(3 * self.depth);
        for j in 0..self.depth {
            v.push(self.ln_odd[j]);
            v.push(self.ln_hat[j]);
            v.push(self.ln_even[j + 1]);
        }
        v.sort_by(|a, b| b.total_cmp(a));
        v.dedup();
        v
    }

    /// Positivity, `omega(t) <= t`, `omega` nondecreasing and `omega(t)/t^k`
    /// nonincreasing, checked on consecutive breakpoints.
    pub fn omega_in_phi_k(&self) -> bool {
        let tol = 1e-10;
        let mut pts = self.ln_breakpoints();
        pts.insert(0, 0.0);
        let k = self.k as f64;
        let vals: Vec<f64> = pts.iter().map(|&l| self.ln_omega(l)).collect();
        let bounded = pts.iter().zip(&vals).all(|(&l, &w)| w.is_finite() && w <= l + tol);
        let mono = pts.windows(2).zip(vals.windows(2)).all(|(p, w)| {
            // p[0] > p[1]: larger t first
            w[1] <= w[0] + tol && w[1] - k * p[1] >= w[0] - k * p[0] - tol
        });
        bounded && mono
    }

    /// `f(x)/x` for `f(x) = 1/(k-2)! int_x^1 x (u-x)^{k-2} omega(u)/u^k du`.
    ///
    /// `omega` is a monomial on each panel, so every panel integral is in closed
    /// form; all ratios entering it are at most 1.
    pub fn f_over_x_ln(&self, lx: f64) -> f64 {
        let k = self.k;
        let km1 = (k - 1) as f64;
        let mut sum = 0.0;
        let ratio = |la: f64, lb: f64| (la - lb).exp();
        for j in 0..self.depth {
            // power panel [xhat_{2j+1}, x_{2j}]
            let (la, lb) = (self.ln_hat[j], self.ln_even[j]);
            if lb > lx {
                let la = la.max(lx);
                let a_over_b = ratio(la, lb);
                let one_b = 1.0 - ratio(lx, lb);
                let one_a = 1.0 - ratio(lx, la);
                sum += (one_b.powi(k as i32 - 1) - a_over_b.powi(k as i32 - 1) * one_a.powi(k as i32 - 1)) / km1;
            }
            // flat panel [x_{2j+2}, xhat_{2j+1}], omega = x_{2j+2}
            let (la, lb) = (self.ln_even[j + 1], self.ln_hat[j]);
            if lb > lx {
                let la = la.max(lx);
                let lc = self.ln_even[j + 1];
                let big_a = 1.0 - ratio(lx, lb);
                let big_b = 1.0 - ratio(lx, la);
                let s: f64 = (0..k - 1)
                    .map(|i| big_a.powi(i as i32) * big_b.powi((k - 2 - i) as i32))
                    .sum();
                sum += (ratio(lc, la) - ratio(lc, lb)) * s / km1;
            }
        }
        let deepest = self.ln_even[self.depth];
        if lx < deepest {
            // omega(u) = u below the deepest point
            let len = deepest - lx;
            let mut tail = len;
            let mut binom = 1.0;
            for i in 1..=k - 2 {
                binom *= (k - 1 - i) as f64 / i as f64;
                let sign = if i % 2 == 1 { -1.0 } else { 1.0 };
                tail += sign * binom * (1.0 - (-(i as f64) * len).exp()) / i as f64;
            }
            sum += tail;
        }
        sum / factorial(k - 2)
    }

    /// `F^{(nu)}(x) / x^{q+1}` with `q = r - nu >= 1`:
    /// `1/(q-1)! int_0^1 (1-v)^{q-1} v (f/x)(x v) dv`, integrated in `ln v`.
    pub fn integrated_ratio_ln(&self, lx: f64, q: usize, gl: &GaussLegendre) -> f64 {
        let mut cuts: Vec<f64> = self
            .ln_breakpoints()
            .into_iter()
            .map(|b| b - lx)
            .filter(|&s| s < 0.0 && s > S_TRUNC)
            .collect();
        cuts.push(0.0);
        cuts.push(S_TRUNC);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let integrand = |s: f64| {
            let v = s.exp();
            (1.0 - v).powi(q as i32 - 1) * v * v * self.f_over_x_ln(lx + s)
        };
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let pieces = ((w[1] - w[0]).ceil() as usize).max(1);
            let h = (w[1] - w[0]) / pieces as f64;
            for p in 0..pieces {
                let a = w[0] + p as f64 * h;
                total += gl.integrate(a, a + h, integrand);
            }
        }
        total / factorial(q - 1)
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Log-space growth diagnostics along the built sequence.
#[derive(Debug, Clone, Serialize)]
pub struct SequenceDiagnostics {
    /// `(j, ln x_{2j}, f(x_{2j})/x_{2j})`, expected increasing in `j`.
    pub f_over_x: Vec<(usize, f64, f64)>,
    /// `(j, ln x_{2j+1}, ln(F(x)/x^r))`, expected decreasing to `-inf`.
    pub small_ratio: Vec<(usize, f64, f64)>,
    /// `(j, ln x_{2j+1}, F(x)/x^{r+1})`, expected increasing.
    pub large_ratio: Vec<(usize, f64, f64)>,
}

impl SequenceDiagnostics {
    pub fn trends_monotone(&self) -> bool {
        let inc = |v: &[(usize, f64, f64)]| v.windows(2).all(|w| w[1].2 >= w[0].2);
        let dec = |v: &[(usize, f64, f64)]| v.windows(2).all(|w| w[1].2 <= w[0].2);
        inc(&self.f_over_x) && dec(&self.small_ratio) && inc(&self.large_ratio)
    }
}

/// One row of the `omega(t) <= omega_k(F^{(r)}, t) <= k omega(t)` check.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichRow {
    pub t: f64,
    pub omega: f64,
    pub estimate: f64,
    /// False when `omega(t)` is below the floor, where differences of `f` drown in roundoff.
    pub resolved: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    pub k: usize,
    pub slack: f64,
    pub rows: Vec<SandwichRow>,
    /// `floor_rel * max(sup|f|, 1)` on the estimator grid.
    pub floor: f64,
    /// Every resolved row satisfies both inequalities, and at least one row is resolved.
    pub holds: bool,
}

impl SandwichReport {
    pub fn resolved(&self) -> usize {
        self.rows.iter().filter(|r| r.resolved).count()
    }
}

/// The integrated functions of the construction, shared by the model closures.
#[derive(Debug)]
pub(crate) struct StepFunctions {
    pub seq: StepSequence,
    pub r: usize,
    gl: GaussLegendre,
}

impl StepFunctions {
    pub fn new(seq: StepSequence, r: usize) -> Arc<Self> {
        let gl = GaussLegendre::new(NonZeroUsize::new(12).expect("nonzero"));
        Arc::new(StepFunctions { seq, r, gl })
    }

    /// `F^{(nu)}(x)` for `0 <= nu <= r`, zero at `x <= 0`.
    pub fn deriv(&self, nu: usize, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        let lx = x.ln();
        if nu >= self.r {
            return x * self.seq.f_over_x_ln(lx);
        }
        let q = self.r - nu;
        ((q + 1) as f64 * lx).exp() * self.seq.integrated_ratio_ln(lx, q, &self.gl)
    }

    /// `ln(F(x)/x^r)` from `ln x`.
    pub fn ln_small_ratio(&self, lx: f64) -> f64 {
        if self.r == 0 {
            lx + self.seq.f_over_x_ln(lx).ln()
        } else {
            lx + self.seq.integrated_ratio_ln(lx, self.r, &self.gl).ln()
        }
    }

    /// `F(x)/x^{r+1}` from `ln x`.
    pub fn large_ratio(&self, lx: f64) -> f64 {
        if self.r == 0 {
            self.seq.f_over_x_ln(lx)
        } else {
            self.seq.integrated_ratio_ln(lx, self.r, &self.gl)
        }
    }

    pub fn diagnostics(&self) -> SequenceDiagnostics {
        let s = &self.seq;
        SequenceDiagnostics {
            f_over_x: (1..=s.depth).map(|j| (j, s.ln_even[j], s.f_over_x_ln(s.ln_even[j]))).collect(),
            small_ratio: (0..s.depth).map(|j| (j, s.ln_odd[j], self.ln_small_ratio(s.ln_odd[j]))).collect(),
            large_ratio: (0..s.depth).map(|j| (j, s.ln_odd[j], self.large_ratio(s.ln_odd[j]))).collect(),
        }
    }

    /// The model of `F^{(r)} = f` on `[0, 1]`, with representable breakpoints as features.
    pub fn top_model(self: &Arc<Self>) -> FunctionModel {
        let me = Arc::clone(self);
        FunctionModel::from_derivatives("step-modulus f", Interval::new(0.0, 1.0).expect("valid"), 0, move |_, x| {
            me.deriv(me.r, x)
        })
        .with_features(self.representable_breakpoints())
    }

    pub fn representable_breakpoints(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .seq
            .ln_breakpoints()
            .into_iter()
            .filter(|&l| l > LN_MIN_NORMAL)
            .map(f64::exp)
            .collect();
        v.push(0.0);
        v.push(1.0);
        v
    }

    /// Estimates `omega_k(f, t; [0, 1])` at every representable breakpoint `t <= 1/k`
    /// and checks `omega(t)/slack <= estimate <= slack k omega(t)`.
    pub fn sandwich(self: &Arc<Self>, slack: f64, floor_rel: f64) -> Result<SandwichReport> {
        let k = self.seq.k;
        let model = self.top_model();
        let unit = Interval::new(0.0, 1.0)?;
        let mut pts: Vec<f64> = (0..=600).map(|i| (-(i as f64) * 0.5).exp()).filter(|&x| x > 0.0).collect();
        pts.extend(self.representable_breakpoints());
        let grid = EvalGrid::from_points(unit, pts)?;
        let sup = grid.points().iter().fold(0.0f64, |m, &x| m.max(model.eval(x).abs()));
        let floor = floor_rel * sup.max(1.0);
        let mut rows = Vec::new();
        for t in self.representable_breakpoints() {
            if !(t > 0.0) || k as f64 * t > 1.0 {
                continue;
            }
            let omega = self.seq.omega(t);
            let estimate = omega_k(&model, 0, k, t, unit, &grid)?;
            rows.push(SandwichRow {
                t,
                omega,
                estimate,
                resolved: omega >= floor,
            });
        }
        let holds = rows.iter().any(|r| r.resolved)
            && rows
                .iter()
                .filter(|r| r.resolved)
                .all(|r| r.omega <= slack * r.estimate && r.estimate <= slack * k as f64 * r.omega);
        Ok(SandwichReport {
            k,
            slack,
            rows,
            floor,
            holds,
        })
    }
}
