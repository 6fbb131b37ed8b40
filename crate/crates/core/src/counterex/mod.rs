//! Functions for which the pointwise rates cannot be improved, and tables of
//! the diverging ratios against polynomial fits.

mod blowup;
mod epsilon;
mod sequence;

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numcore::Interval;
use crate::smoothness::{falling, FunctionModel};

pub use blowup::{blowup_demo, minimax_fitter, ratio_minimax_fitter, weak_sweep, DivergenceReport, DivergenceRow, WeakSweep, WeakSweepRow};
pub use epsilon::{Epsilon, EpsilonBase};
pub use sequence::{SandwichReport, SandwichRow, SequenceDiagnostics, StepSequence};

use sequence::StepFunctions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NegativeCase {
    I,
    II,
    III,
    Weak,
    Sobolev,
    Lip,
}

impl std::str::FromStr for NegativeCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "i" | "case_i" | "1" => Ok(NegativeCase::I),
            "ii" | "case_ii" | "2" => Ok(NegativeCase::II),
            "iii" | "case_iii" | "3" => Ok(NegativeCase::III),
            "weak" => Ok(NegativeCase::Weak),
            "sobolev" => Ok(NegativeCase::Sobolev),
            "lip" => Ok(NegativeCase::Lip),
            _ => Err(Error::param("case", format!("unknown case `{s}`"))),
        }
    }
}

/// A point `x0 + e^{ln_offset}` approaching the singular point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Probe {
    pub m: usize,
    pub ln_offset: f64,
}

#[derive(Clone, Serialize)]
pub struct NegativeInstance {
    pub case: NegativeCase,
    pub k: usize,
    pub r: usize,
    pub epsilon: Epsilon,
    /// The point `x0` the probes approach from the right.
    pub singular: f64,
    pub domain: Interval,
    #[serde(skip)]
    pub model: FunctionModel,
    pub probes: Vec<Probe>,
    /// Smoothness of the model: derivatives up to this order exist.
    pub r_model: usize,
    #[serde(skip)]
    steps: Option<Arc<StepFunctions>>,
}

impl std::fmt::Debug for NegativeInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NegativeInstance")
            .field("case", &self.case)
            .field("k", &self.k)
            .field("r", &self.r)
            .field("epsilon", &self.epsilon.label())
            .field("singular", &self.singular)
            .field("probes", &self.probes.len())
            .finish()
    }
}

impl NegativeInstance {
    pub fn probe_x(&self, p: &Probe) -> f64 {
        self.singular + p.ln_offset.exp()
    }

    /// The step sequence behind cases II and III.
    pub fn sequence(&self) -> Option<&StepSequence> {
        self.steps.as_ref().map(|s| &s.seq)
    }

    pub fn diagnostics(&self) -> Option<SequenceDiagnostics> {
        self.steps.as_ref().map(|s| s.diagnostics())
    }

    /// Sandwich check of the step modulus against the grid estimator, for cases II and III.
    ///
    /// Breakpoints with `omega(t) < floor_rel * max(sup|f|, 1)` are reported but not judged.
    pub fn sandwich(&self, slack: f64, floor_rel: f64) -> Result<SandwichReport> {
        match &self.steps {
            Some(s) => s.sandwich(slack, floor_rel),
            None => Err(Error::Precondition(format!("{:?} has no step modulus", self.case))),
        }
    }

    /// The rate `eps(|x - x0|) |x - x0|^{(r+1)/k}` inside the modulus.
    pub fn rate(&self, x: f64) -> f64 {
        let d = x - self.singular;
        if !(d > 0.0) {
            return 0.0;
        }
        self.epsilon.eval(d) * d.powf((self.r + 1) as f64 / self.k as f64)
    }
}

fn unit_right() -> Interval {
    Interval::new(0.0, 1.0).expect("valid interval")
}

fn exp_probes(range: std::ops::RangeInclusive<usize>) -> Vec<Probe> {
    range
        .map(|m| Probe {
            m,
            ln_offset: -(m as f64),
        })
        .collect()
}

/// `nu`-th derivative of `d^a (A cos L + B sin L)` with `L = 2 pi ln d`, for `d > 0`.
fn log_oscillation(a: f64, nu: usize, d: f64) -> f64 {
    let (mut ca, mut cb, mut p) = (1.0, 0.0, a);
    for _ in 0..nu {
        let (na, nb) = (p * ca + 2.0 * PI * cb, p * cb - 2.0 * PI * ca);
        ca = na;
        cb = nb;
        p -= 1.0;
    }
    let l = 2.0 * PI * d.ln();
    d.powf(p) * (ca * l.cos() + cb * l.sin())
}

/// `F(x) = x^{r+1} cos(2 pi ln x)` on `[0, 1]`, with probes `e^{-m}`.
pub fn build_case_i(r: usize) -> NegativeInstance {
    let model = FunctionModel::from_derivatives(format!("x^{}cos(2pi ln x)", r + 1), unit_right(), r + 1, move |nu, x| {
        if x > 0.0 {
            log_oscillation((r + 1) as f64, nu, x)
        } else {
            0.0
        }
    })
    .with_features(vec![0.0]);
    NegativeInstance {
        case: NegativeCase::I,
        k: 1,
        r,
        epsilon: Epsilon::inv_log(),
        singular: 0.0,
        domain: unit_right(),
        model,
        probes: exp_probes(1..=30),
        r_model: r + 1,
        steps: None,
    }
}

/// The step-modulus construction for `k >= max(2, r+1)`; `epsilon` gets the `2 x^{1/k}` floor.
pub fn build_case_ii(k: usize, r: usize, epsilon: Epsilon, depth: usize) -> Result<NegativeInstance> {
    if k < 2 || k < r + 1 {
        return Err(Error::param("k", format!("need k >= max(2, r + 1), got k = {k}, r = {r}")));
    }
    let floored = epsilon.with_floor(k);
    let seq = StepSequence::new(k, depth, floored)?;
    Ok(step_instance(NegativeCase::II, k, r, epsilon, seq))
}

/// Reduction of `2 <= k <= r` (or `k = 1 <= r`) to the step construction at order `r + 1`
/// with `eps^{k/(r+1)}`; ratios are then taken with `omega_k`.
pub fn build_case_iii(k: usize, r: usize, epsilon: Epsilon, depth: usize) -> Result<NegativeInstance> {
    if k == 0 || k > r {
        return Err(Error::param("k", format!("need 1 <= k <= r, got k = {k}, r = {r}")));
    }
    let reduced = epsilon.pow(k as f64 / (r + 1) as f64).with_floor(r + 1);
    let seq = StepSequence::new(r + 1, depth, reduced)?;
    Ok(step_instance(NegativeCase::III, k, r, epsilon, seq))
}

fn step_instance(case: NegativeCase, k: usize, r: usize, epsilon: Epsilon, seq: StepSequence) -> NegativeInstance {
    let probes = seq
        .ln_odd
        .iter()
        .enumerate()
        .map(|(j, &l)| Probe {
            m: 2 * j + 1,
            ln_offset: l,
        })
        .collect();
    let funcs = StepFunctions::new(seq, r);
    let feats = funcs.representable_breakpoints();
    let f2 = Arc::clone(&funcs);
    let model = FunctionModel::from_derivatives(format!("step construction k={k} r={r}"), unit_right(), r, move |nu, x| {
        f2.deriv(nu, x)
    })
    .with_features(feats);
    NegativeInstance {
        case,
        k,
        r,
        epsilon,
        singular: 0.0,
        domain: unit_right(),
        model,
        probes,
        r_model: r,
        steps: Some(funcs),
    }
}

/// `F(x) = (eps - x)_+^{k+r}` on `[0, 1]`, probed on `grid_points` uniform points of `(0, delta]`.
pub fn build_weak(k: usize, r: usize, eps: f64, epsilon: Epsilon, delta: f64, grid_points: usize) -> Result<NegativeInstance> {
    if k == 0 {
        return Err(Error::param("k", "must be at least 1"));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::param("eps", format!("must lie in (0, 1], got {eps}")));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::param("delta", format!("must lie in (0, 1], got {delta}")));
    }
    let p = (k + r) as f64;
    let model = FunctionModel::from_derivatives(format!("({eps}-x)_+^{}", k + r), unit_right(), k + r, move |nu, x| {
        if x < eps {
            let sign = if nu % 2 == 1 { -1.0 } else { 1.0 };
            sign * falling(p, nu) * (eps - x).powf(p - nu as f64)
        } else {
            0.0
        }
    })
    .with_features(vec![0.0, eps]);
    let count = grid_points.max(1);
    let probes = (1..=count)
        .map(|i| Probe {
            m: i,
            ln_offset: (delta * i as f64 / count as f64).ln(),
        })
        .collect();
    Ok(NegativeInstance {
        case: NegativeCase::Weak,
        k,
        r,
        epsilon,
        singular: 0.0,
        domain: unit_right(),
        model,
        probes,
        r_model: k + r - 1,
        steps: None,
    })
}

/// `f(x) = (x - z)_+^r cos(2 pi ln|x - z|)` on `[-1, 1]`, probes `z + e^{-m}`.
pub fn build_sobolev(r: usize, z: f64) -> Result<NegativeInstance> {
    if r == 0 {
        return Err(Error::param("r", "must be at least 1"));
    }
    if !(z > -1.0 && z < 1.0) {
        return Err(Error::param("z", format!("must lie in (-1, 1), got {z}")));
    }
    let model = FunctionModel::from_derivatives(format!("(x-{z})_+^{r}cos(2pi ln|x-{z}|)"), Interval::unit(), r, move |nu, x| {
        if x > z {
            log_oscillation(r as f64, nu, x - z)
        } else {
            0.0
        }
    })
    .with_features(vec![z]);
    let first = (-(1.0 - z).ln()).ceil().max(1.0) as usize;
    Ok(NegativeInstance {
        case: NegativeCase::Sobolev,
        k: 1,
        r,
        epsilon: Epsilon::inv_log(),
        singular: z,
        domain: Interval::unit(),
        model,
        probes: exp_probes(first..=first + 29),
        r_model: r,
        steps: None,
    })
}

/// `f(x) = (x - z)_+^alpha psi(x)` with `psi = ln|x - z|` for integer `alpha` and 1 otherwise.
pub fn build_lip(alpha: f64, z: f64) -> Result<NegativeInstance> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::param("alpha", format!("must be positive, got {alpha}")));
    }
    if !(z > -1.0 && z < 1.0) {
        return Err(Error::param("z", format!("must lie in (-1, 1), got {z}")));
    }
    let nu_max = (alpha.ceil() as usize).saturating_sub(1);
    let integer = alpha.fract() == 0.0;
    let model = FunctionModel::from_derivatives(format!("lip alpha={alpha} z={z}"), Interval::unit(), nu_max, move |nu, x| {
        let d = x - z;
        if !(d > 0.0) {
            return 0.0;
        }
        let base = falling(alpha, nu) * d.powf(alpha - nu as f64);
        if integer {
            // d^nu/dx^nu [d^a ln d] = a!/(a-nu)! d^{a-nu} (ln d + H_a - H_{a-nu})
            let a = alpha as usize;
            let h: f64 = ((a - nu + 1)..=a).map(|i| 1.0 / i as f64).sum();
            base * (d.ln() + h)
        } else {
            base
        }
    })
    .with_features(vec![z]);
    let first = (-(1.0 - z).ln()).ceil().max(1.0) as usize;
    Ok(NegativeInstance {
        case: NegativeCase::Lip,
        k: 2,
        r: nu_max,
        epsilon: Epsilon::inv_log(),
        singular: z,
        domain: Interval::unit(),
        model,
        probes: exp_probes(first..=first + 29),
        r_model: nu_max,
        steps: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_i_probe_values() {
        for r in 0..3 {
            let inst = build_case_i(r);
            for p in &inst.probes[..10] {
                let x = inst.probe_x(p);
                let want = x.powi(r as i32 + 1);
                assert!((inst.model.eval(x) - want).abs() <= 1e-12 * want);
                let half = (-(p.m as f64) - 0.5).exp();
                assert!((inst.model.eval(half) + half.powi(r as i32 + 1)).abs() <= 1e-12 * half.powi(r as i32 + 1));
            }
        }
    }

    #[test]
    fn log_oscillation_derivatives() {
        let a = 2.0;
        for x in [0.9, 0.3, 0.01] {
            for nu in 0..3 {
                let h = 1e-6 * x;
                let fd = (log_oscillation(a, nu, x + h) - log_oscillation(a, nu, x - h)) / (2.0 * h);
                let want = log_oscillation(a, nu + 1, x);
                assert!((fd - want).abs() <= 1e-6 * want.abs().max(1.0), "x={x} nu={nu}");
            }
        }
    }

    #[test]
    fn lip_models() {
        let f = build_lip(1.5, -0.2).unwrap();
        assert!((f.model.eval(0.3) - 0.5f64.powf(1.5)).abs() < 1e-15);
        assert_eq!(f.r_model, 1);
        let g = build_lip(2.0, 0.0).unwrap();
        let x = 0.4f64;
        assert!((g.model.eval(x) - x * x * x.ln()).abs() < 1e-15);
        let h = 1e-6;
        let fd = (g.model.eval(x + h) - g.model.eval(x - h)) / (2.0 * h);
        assert!((fd - g.model.deriv(1, x)).abs() < 1e-8);
    }

    #[test]
    fn sobolev_probes() {
        let s = build_sobolev(2, -0.5).unwrap();
        for p in &s.probes[..5] {
            let x = s.probe_x(p);
            let d: f64 = x + 0.5;
            assert!((s.model.eval(x) - d * d).abs() <= 1e-12 * d * d);
        }
    }
}
