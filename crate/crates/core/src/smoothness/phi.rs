//! Majorant classes: `phi` nondecreasing with `t^-alpha phi` nonincreasing,
//! their `M`-relaxed versions, Stechkin regularization and a pathological member.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PhiKind {
    Power,
    Regularized,
    Pathological,
}

/// A positive function on `(0, inf)`.
///
/// Tabulated kinds store `(ln t_i, ln phi_i)` with `t_i` increasing and are
/// extended geometrically: between samples `phi(t) = phi_i (t/t_i)^theta`,
/// below the table `phi(t) = phi_0 (t/t_0)^alpha`, above it `phi` is constant.
#[derive(Debug, Clone, Serialize)]
pub struct PhiFunction {
    alpha: f64,
    kind: PhiKind,
    ln_t: Vec<f64>,
    ln_phi: Vec<f64>,
    /// Largest `t` at which the tabulation is trusted.
    valid_max: f64,
}

/// Outcome of a class check on samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiCheck {
    pub ok: bool,
    /// `(t1, t2)` with `t1 < t2` at which a condition fails.
    pub witness: Option<(f64, f64)>,
    pub condition: Option<&'static str>,
}

impl PhiCheck {
    fn pass() -> Self {
        PhiCheck {
            ok: true,
            witness: None,
            condition: None,
        }
    }
}

impl PhiFunction {
    /// `phi(t) = t^alpha`.
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::param("alpha", "must be positive"));
        }
        Ok(PhiFunction {
            alpha,
            kind: PhiKind::Power,
            ln_t: Vec::new(),
            ln_phi: Vec::new(),
            valid_max: f64::INFINITY,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn kind(&self) -> PhiKind {
        self.kind
    }

    pub fn valid_max(&self) -> f64 {
        self.valid_max
    }

    /// Sample abscissae in increasing order.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.ln_t.iter().map(|v| v.exp()).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.ln_phi.iter().map(|v| v.exp()).collect()
    }

    pub fn ln_samples(&self) -> (&[f64], &[f64]) {
        (&self.ln_t, &self.ln_phi)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.ln_eval(t.ln()).exp()
    }

    pub fn ln_eval(&self, lt: f64) -> f64 {
        if self.kind == PhiKind::Power {
            return self.alpha * lt;
        }
        let n = self.ln_t.len();
        if lt <= self.ln_t[0] {
            return self.ln_phi[0] + self.alpha * (lt - self.ln_t[0]);
        }
        if lt >= self.ln_t[n - 1] {
            return self.ln_phi[n - 1];
        }
        let i = self.ln_t.partition_point(|&s| s <= lt) - 1;
        let (a, b) = (self.ln_t[i], self.ln_t[i + 1]);
        let theta = (self.ln_phi[i + 1] - self.ln_phi[i]) / (b - a);
        self.ln_phi[i] + theta * (lt - a)
    }

    /// Membership check at the samples (or on `probe` points for the power kind).
    pub fn check_membership(&self, probe: &[f64]) -> PhiCheck {
        if self.kind == PhiKind::Power {
            let lt: Vec<f64> = probe.iter().map(|t| t.ln()).collect();
            let lp: Vec<f64> = lt.iter().map(|&v| self.ln_eval(v)).collect();
            return check_ln(&lt, &lp, self.alpha, 1.0);
        }
        check_ln(&self.ln_t, &self.ln_phi, self.alpha, 1.0)
    }
}

const LN_TOL: f64 = 1e-12;

/// Checks the `M`-relaxed class conditions on samples given in log scale:
/// `psi(t1) <= M psi(t2)` and `t1^-alpha psi(t1) >= t2^-alpha psi(t2) / M` for `t1 <= t2`.
///
/// Runs in linear time by tracking the running max of `psi` and the running
/// min of `t^-alpha psi`.
pub fn check_ln(ln_t: &[f64], ln_psi: &[f64], alpha: f64, m: f64) -> PhiCheck {
    let lm = m.ln();
    let mut best_max: Option<(f64, usize)> = None;
    let mut best_min: Option<(f64, usize)> = None;
    for j in 0..ln_t.len() {
        let p = ln_psi[j];
        let q = p - alpha * ln_t[j];
        if let Some((v, i)) = best_max {
            if v > p + lm + LN_TOL * (1.0 + v.abs()) {
                return PhiCheck {
                    ok: false,
                    witness: Some((ln_t[i].exp(), ln_t[j].exp())),
                    condition: Some("nondecreasing"),
                };
            }
        }
        if let Some((v, i)) = best_min {
            if v < q - lm - LN_TOL * (1.0 + v.abs()) {
                return PhiCheck {
                    ok: false,
                    witness: Some((ln_t[i].exp(), ln_t[j].exp())),
                    condition: Some("t^-alpha phi nonincreasing"),
                };
            }
        }
        if best_max.is_none_or(|(v, _)| p > v) {
            best_max = Some((p, j));
        }
        if best_min.is_none_or(|(v, _)| q < v) {
            best_min = Some((q, j));
        }
    }
    PhiCheck::pass()
}

/// Same check on samples in linear scale. `ts` must be increasing.
pub fn check_class(ts: &[f64], vals: &[f64], alpha: f64, m: f64) -> Result<PhiCheck> {
    if ts.len() != vals.len() {
        return Err(Error::param("vals", "length differs from the t-grid"));
    }
    if vals.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Precondition("samples must be positive".into()));
    }
    if ts.windows(2).any(|w| !(w[0] < w[1])) || ts.first().is_some_and(|&t| !(t > 0.0)) {
        return Err(Error::param("ts", "must be positive and strictly increasing"));
    }
    let lt: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let lp: Vec<f64> = vals.iter().map(|v| v.ln()).collect();
    Ok(check_ln(&lt, &lp, alpha, m))
}

/// Stechkin regularization of a sampled function from the `M`-relaxed class.
///
/// With `w~` the running max, `w*(t_i) = t_i^alpha max_{j >= i} w~(t_j) / t_j^alpha`,
/// which satisfies `w <= w* <= M^2 w` on the grid. The result is trusted up to
/// one decade below the largest grid point.
pub fn stechkin_regularize(ts: &[f64], omega: &[f64], alpha: f64, m: f64) -> Result<PhiFunction> {
    if !(alpha > 0.0) {
        return Err(Error::param("alpha", "must be positive"));
    }
    if !(m >= 1.0) {
        return Err(Error::param("M", "must be at least 1"));
    }
    if ts.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let pre = check_class(ts, omega, alpha, m)?;
    if !pre.ok {
        let (a, b) = pre.witness.unwrap_or_default();
        return Err(Error::Precondition(format!(
            "input is not in the relaxed class with M = {m}: `{}` fails at t1 = {a:e}, t2 = {b:e}",
            pre.condition.unwrap_or("")
        )));
    }
    let lt: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let mut run = f64::NEG_INFINITY;
    let tilde: Vec<f64> = omega
        .iter()
        .map(|w| {
            run = run.max(w.ln());
            run
        })
        .collect();
    let n = ts.len();
    let mut ln_star = vec![0.0; n];
    let mut best = f64::NEG_INFINITY;
    for i in (0..n).rev() {
        best = best.max(tilde[i] - alpha * lt[i]);
        ln_star[i] = alpha * lt[i] + best;
    }
    Ok(PhiFunction {
        alpha,
        kind: PhiKind::Regularized,
        ln_t: lt,
        ln_phi: ln_star,
        valid_max: ts[n - 1] / 10.0,
    })
}

/// A member of the class with exponent `alpha` whose scalings `t^s phi`
/// leave every relaxed class with a smaller exponent.
///
/// Built from breakpoints `t_0 = 1/2 > t_1 > ... > t_depth` in log scale.
/// Fails with [`Error::Underflow`] when `t_depth` is below the smallest
/// positive double, reporting the last representable index.
pub fn pathological_phi(alpha: f64, depth: usize) -> Result<PhiFunction> {
    if !(alpha > 0.0) {
        return Err(Error::param("alpha", "must be positive"));
    }
    if depth == 0 {
        return Err(Error::param("depth", "must be at least 1"));
    }
    let min_ln = f64::MIN_POSITIVE.ln();
    let mut lt = vec![0.5f64.ln()];
    let mut lp = vec![0.5 * alpha * 0.5f64.ln()];
    let mut j = 0usize;
    while lt.len() <= depth {
        let phi_even = lp[2 * j].exp();
        // u(t) = 2 / (2 - alpha ln t) equals phi_even
        let l_odd = (2.0 - 2.0 / phi_even) / alpha;
        if lt.len() <= depth {
            if l_odd < min_ln {
                return Err(Error::Underflow { last_valid: lt.len() - 1 });
            }
            lt.push(l_odd);
            lp.push(lp[2 * j]);
        }
        if lt.len() <= depth {
            let ln_lambda = lp[2 * j] - alpha * l_odd;
            let l_even = -(j as f64 + 2.0) / alpha * ln_lambda;
            if l_even < min_ln {
                return Err(Error::Underflow { last_valid: lt.len() - 1 });
            }
            lt.push(l_even);
            lp.push(ln_lambda + alpha * l_even);
        }
        j += 1;
    }
    lt.reverse();
    lp.reverse();
    Ok(PhiFunction {
        alpha,
        kind: PhiKind::Pathological,
        ln_t: lt,
        ln_phi: lp,
        valid_max: f64::INFINITY,
    })
}

/// Checks `t^s phi(t)` against the relaxed class with exponent `beta` and constant `m` at the breakpoints of `phi`.
pub fn scaled_membership(phi: &PhiFunction, s: f64, beta: f64, m: f64) -> PhiCheck {
    let (lt, lp) = phi.ln_samples();
    let lpsi: Vec<f64> = lt.iter().zip(lp).map(|(t, p)| p + s * t).collect();
    check_ln(lt, &lpsi, beta, m)
}
