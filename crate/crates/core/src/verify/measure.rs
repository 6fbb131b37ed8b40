use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::kind::{EstimateKind, EstimateTag};
use crate::error::{Error, Result};
use crate::hermite::NodeMultiset;
use crate::numcore::{in_endpoint_zone, phi, rho, EvalGrid};
use crate::poly::Approximant;
use crate::smoothness::{FunctionModel, ModulusProfile, ProfileOptions};

#[derive(Debug, Clone)]
pub struct MeasureOptions {
    /// Denominators below `floor_rel * max(||f^{(nu)}||, 1)` are not turned into ratios.
    pub floor_rel: f64,
    /// Numerators below `noise_rel * (n + 1) * max(||f^{(nu)}||, 1)` count as zero
    /// in `A`; evaluating a degree-`n` polynomial loses about `n` ulps.
    pub noise_rel: f64,
    pub profile: ProfileOptions,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions {
            floor_rel: 1e-12,
            noise_rel: 4.0 * f64::EPSILON,
            profile: ProfileOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointStatus {
    Ratio,
    /// Denominator positive but below the resolution floor.
    Unresolved,
    ZeroDenominator,
}

/// Pointwise numerator, denominator and ratio of one estimate over a grid.
#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub kind: EstimateKind,
    pub n: usize,
    /// `"I"` or `"S_n"`.
    pub domain: String,
    pub xs: Vec<f64>,
    pub num: Vec<f64>,
    pub den: Vec<f64>,
    pub status: Vec<PointStatus>,
    /// Sup of the ratio over resolved points, with roundoff-level numerators
    /// taken as zero; `None` when no point is resolved.
    pub a: Option<f64>,
    pub argmax: Option<f64>,
    pub resolved: usize,
    pub unresolved: usize,
    pub zero_den: usize,
    pub unresolved_max_num: f64,
    pub zero_den_max_num: f64,
    /// Largest `num/den` among resolved points whose numerator is below the noise level.
    pub noise_bound: f64,
    /// `max(||f^{(nu)}||, 1)` on the grid.
    pub scale: f64,
    /// Sup of `|f|` on the grid.
    pub f_norm: f64,
}

impl RatioReport {
    pub fn ratio(&self, i: usize) -> Option<f64> {
        (self.status[i] == PointStatus::Ratio).then(|| self.num[i] / self.den[i])
    }

    /// Whether every zero-denominator point has numerator at most `tol_rel * ||f||`.
    pub fn zero_den_consistent(&self, tol_rel: f64) -> bool {
        self.zero_den_max_num <= tol_rel * self.f_norm.max(f64::MIN_POSITIVE)
    }

    /// Columns `x,num,den,ratio`; the ratio is empty where it is not reported.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,num,den,ratio\n");
        for i in 0..self.xs.len() {
            let ratio = self.ratio(i).map(|v| format!("{v:e}")).unwrap_or_default();
            let _ = writeln!(out, "{:e},{:e},{:e},{ratio}", self.xs[i], self.num[i], self.den[i]);
        }
        out
    }

    pub fn summary_json(&self) -> serde_json::Value {
        json!({
            "kind": self.kind.tag.name(),
            "params": {
                "k": self.kind.k,
                "r": self.kind.r,
                "nu": self.kind.nu,
                "ell": self.kind.ell,
                "m": self.kind.m,
                "alpha": self.kind.alpha,
                "x0": self.kind.x0,
                "n": self.n,
            },
            "A": self.a,
            "argmax": self.argmax,
            "domain": self.domain,
            "points": self.xs.len(),
            "resolved": self.resolved,
            "unresolved": self.unresolved,
            "zero_den": self.zero_den,
            "unresolved_max_num": self.unresolved_max_num,
            "zero_den_max_num": self.zero_den_max_num,
            "noise_bound": self.noise_bound,
        })
    }
}

pub fn measure(
    kind: &EstimateKind,
    f: &FunctionModel,
    p: &dyn Approximant,
    y: &NodeMultiset,
    n: usize,
    grid: &EvalGrid,
) -> Result<RatioReport> {
    measure_with(kind, f, p, y, n, grid, &MeasureOptions::default())
}

pub fn measure_with(
    kind: &EstimateKind,
    f: &FunctionModel,
    p: &dyn Approximant,
    y: &NodeMultiset,
    n: usize,
    grid: &EvalGrid,
    opts: &MeasureOptions,
) -> Result<RatioReport> {
    use EstimateTag::*;
    kind.validate(y)?;
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    let r_needed = match kind.tag {
        Corin => kind.corin_nu(),
        Qmonotone => 0,
        _ => kind.r,
    };
    if r_needed > f.r_max() {
        return Err(Error::Precondition(format!(
            "{} has derivatives only up to order {}, the estimate needs {r_needed}",
            f.label(),
            f.r_max()
        )));
    }
    let (grid, domain) = if kind.tag.endpoint_only() {
        (grid.restrict(|x| in_endpoint_zone(n, x))?, "S_n")
    } else {
        (grid.clone(), "I")
    };
    let xs = grid.points().to_vec();
    let order = kind.lhs_order();

    let pd = p.derivatives_at(&xs, order);
    let f_vals: Vec<f64> = xs.par_iter().map(|&x| f.eval(x)).collect();
    let num: Vec<f64> = if kind.tag == Tr2 {
        pd[order].iter().map(|v| v.abs()).collect()
    } else {
        xs.par_iter()
            .zip(&pd[order])
            .map(|(&x, &pv)| (f.deriv(order, x) - pv).abs())
            .collect()
    };
    let f_norm = f_vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = if kind.tag == Tr2 {
        pd[order].iter().fold(1.0f64, |m, v| m.max(v.abs()))
    } else {
        xs.iter().fold(1.0f64, |m, &x| m.max(f.deriv(order, x).abs()))
    };

    let den_fn = Denominator::new(kind, f, y, n, &xs, opts)?;
    let den: Vec<f64> = xs.par_iter().map(|&x| den_fn.eval(x)).collect();

    let floor = opts.floor_rel * scale;
    let noise = opts.noise_rel * (n + 1) as f64 * scale;
    let mut report = RatioReport {
        kind: kind.clone(),
        n,
        domain: domain.to_string(),
        status: Vec::with_capacity(xs.len()),
        xs,
        num,
        den,
        a: None,
        argmax: None,
        resolved: 0,
        unresolved: 0,
        zero_den: 0,
        unresolved_max_num: 0.0,
        zero_den_max_num: 0.0,
        noise_bound: 0.0,
        scale,
        f_norm,
    };
    for i in 0..report.xs.len() {
        let (nm, d) = (report.num[i], report.den[i]);
        let st = if !(d > 0.0) {
            report.zero_den += 1;
            report.zero_den_max_num = report.zero_den_max_num.max(nm);
            PointStatus::ZeroDenominator
        } else if d < floor {
            report.unresolved += 1;
            report.unresolved_max_num = report.unresolved_max_num.max(nm);
            PointStatus::Unresolved
        } else {
            report.resolved += 1;
            let q = if nm < noise {
                report.noise_bound = report.noise_bound.max(nm / d);
                0.0
            } else {
                nm / d
            };
            if report.a.map_or(true, |a| q > a) {
                report.a = Some(q);
                report.argmax = Some(report.xs[i]);
            }
            PointStatus::Ratio
        };
        report.status.push(st);
    }
    Ok(report)
}

/// Right-hand side of one estimate without its constant.
struct Denominator<'a> {
    kind: &'a EstimateKind,
    y: &'a NodeMultiset,
    n: usize,
    omega: Option<ModulusProfile>,
    /// `||f^{(r)}||` for `Estwr1`, the seminorm estimate for `Corin`.
    factor: f64,
}

impl<'a> Denominator<'a> {
    fn new(
        kind: &'a EstimateKind,
        f: &FunctionModel,
        y: &'a NodeMultiset,
        n: usize,
        xs: &[f64],
        opts: &MeasureOptions,
    ) -> Result<Self> {
        use EstimateTag::*;
        let dom = f.domain();
        let popts = opts.profile;
        let (omega, factor) = match kind.tag {
            Estwr1 => {
                let sup = xs.iter().fold(0.0f64, |m, &x| m.max(f.deriv(kind.r, x).abs()));
                (None, sup)
            }
            Corin => {
                let nu = kind.corin_nu();
                let prof = ModulusProfile::build(f, nu, 2, dom, popts)?;
                let e = nu as f64 - kind.alpha;
                let semi = prof
                    .ts()
                    .iter()
                    .zip(prof.omegas())
                    .map(|(t, w)| t.powf(e) * w)
                    .fold(0.0f64, f64::max);
                (None, semi)
            }
            Qmonotone => (Some(ModulusProfile::build(f, 0, 1, dom, popts)?), 1.0),
            Main1_8 | MainNew4nnn => (Some(ModulusProfile::build(f, kind.r, kind.ell, dom, popts)?), 1.0),
            _ => (Some(ModulusProfile::build(f, kind.r, kind.k, dom, popts)?), 1.0),
        };
        Ok(Denominator {
            kind,
            y,
            n,
            omega,
            factor,
        })
    }

    fn w(&self, t: f64) -> f64 {
        self.omega.as_ref().map_or(0.0, |p| p.eval(t))
    }

    fn eval(&self, x: f64) -> f64 {
        use EstimateTag::*;
        let kd = self.kind;
        let (k, r) = (kd.k, kd.r as i32);
        let nf = self.n as f64;
        let rh = rho(self.n, x).unwrap_or(f64::NAN);
        let ph = phi(x);
        let mixed = |d: f64, q: usize| d.powf(1.0 / q as f64) * rh.powf(1.0 - 1.0 / q as f64);
        match kd.tag {
            Classdir | An2 => rh.powi(r) * self.w(rh),
            Sim2 => {
                let t = ph.powf(2.0 / k as f64) * nf.powf(-2.0 + 2.0 / k as f64);
                ph.powi(2 * r) * self.w(t)
            }
            Main1_8 => {
                let l = kd.ell as f64;
                let t = ph.powf(2.0 / l) * nf.powf(-2.0 + 2.0 / l);
                ph.powi(2 * (r - kd.nu as i32)) * self.w(t)
            }
            Tr1 => rh.powi(r - kd.nu as i32) * self.w(rh),
            Tr2 => rh.powi(-(k as i32)) * self.w(rh),
            MainGen4g => {
                let d = (x - kd.x0).abs();
                if kd.m < kd.r {
                    d.powi(kd.m as i32 + 1) * rh.powi(r - kd.m as i32 - 1) * self.w(rh)
                } else {
                    d.powi(r) * self.w(mixed(d, k))
                }
            }
            MainNew4nnn => {
                let d = (x - kd.x0).abs();
                let nu = kd.nu as i32;
                if kd.m < kd.r {
                    let sigma = (kd.m as i32 - nu + 1).max(0);
                    d.powi(sigma) * rh.powi(r - nu - sigma) * self.w(rh)
                } else {
                    d.powi(r - nu) * self.w(mixed(d, kd.ell))
                }
            }
            MainNew1_78 | An222 => {
                let s = self.y.s();
                if s <= kd.r {
                    self.y.d_m(x, s as isize - 1) * rh.powi(r - s as i32) * self.w(rh)
                } else {
                    let idx = self.y.sigma(x)[kd.r];
                    let d = (x - self.y.flat()[idx]).abs();
                    self.y.d_m(x, r as isize - 1) * self.w(mixed(d, k))
                }
            }
            Estwr1 => rh.min(self.y.dist(x)).powi(r) * self.factor,
            Corin => {
                let dist = self.y.dist(x);
                let a = kd.alpha;
                let base = if a.fract() == 0.0 {
                    dist * (dist / 3.0).ln().abs().powf(1.0 / a)
                } else {
                    dist
                };
                base.min(rh).powf(a) * self.factor
            }
            Qmonotone => self.w((ph * ph).min(ph / nf)),
        }
    }
}
