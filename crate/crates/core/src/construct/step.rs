//! Polynomial switches: the kernel step `T_j` and the Hermite-compatible product `R_j`.
//!
//! A step is `T(x; a, b) = (F(x) - F(a)) / (F(b) - F(a))` where `F` is the
//! antiderivative of a nonnegative kernel `K(cos t) = J(t - t_c) + J(t + t_c)`,
//! `J` a power of the Fejer kernel and `t_c` the angle of the centring node.
//! With `J = (sin(m t / 2) / sin(t / 2))^{2p}` the tails of `T` decay like
//! `(m |t - t_c|)^{1 - 2p}`, so `p = ceil((mu + 1) / 2)` targets decay order `mu`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use super::sjet::{SJet, MAX_ORDER};
use crate::error::{Error, Result};
use crate::hermite::NodeMultiset;
use crate::numcore::{cheb_node, ChebPartition, EvalGrid, Interval};
use crate::poly::{dct, ChebPoly};

/// Kernel power used for a requested decay order.
pub fn kernel_power(mu: usize) -> usize {
    (mu + 2) / 2
}

/// Cosine coefficients of a Fejer power on a partition of size `m`, shared by all centres.
#[derive(Debug, Clone)]
pub struct KernelFamily {
    m: usize,
    power: usize,
    coeffs: Arc<Vec<f64>>,
}

impl KernelFamily {
    pub fn new(m: usize, power: usize) -> Result<Self> {
        if m < 2 || power == 0 {
            return Err(Error::param("m, power", "need m >= 2 and power >= 1"));
        }
        let w = m as isize;
        let base: Vec<f64> = (-(w - 1)..w).map(|k| (w - k.abs()) as f64 / w as f64).collect();
        let mut acc = base.clone();
        for _ in 1..power {
            let mut next = vec![0.0; acc.len() + base.len() - 1];
            for (i, &a) in acc.iter().enumerate() {
                for (j, &b) in base.iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            let top = next.iter().copied().fold(0.0, f64::max);
            next.iter_mut().for_each(|v| *v /= top);
            acc = next;
        }
        let mid = acc.len() / 2;
        Ok(KernelFamily {
            m,
            power,
            coeffs: Arc::new(acc[mid..].to_vec()),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn power(&self) -> usize {
        self.power
    }
}

/// Normalised kernel antiderivative `F` with `F(-1) = 0`, `F(1) = 1`.
#[derive(Debug, Clone)]
pub struct StepKernel {
    m: usize,
    center: usize,
    antider: ChebPoly,
}

impl StepKernel {
    pub fn new(family: &KernelFamily, center: usize) -> Result<Self> {
        let m = family.m;
        if center == 0 || center >= m {
            return Err(Error::param("center", format!("must lie in 1..{m}")));
        }
        let c: Vec<f64> = family
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &jk)| {
                if k == 0 {
                    2.0 * jk
                } else {
                    let phase = (k * center) % (2 * m);
                    4.0 * jk * (PI * phase as f64 / m as f64).cos()
                }
            })
            .collect();
        let f = ChebPoly::new(c).antiderivative();
        let total = f.eval(1.0);
        Ok(StepKernel {
            m,
            center,
            antider: f.scale(1.0 / total),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn center(&self) -> usize {
        self.center
    }

    /// The node the kernel is centred on.
    pub fn location(&self) -> f64 {
        cheb_node(self.m, self.center)
    }

    pub fn antiderivative(&self) -> &ChebPoly {
        &self.antider
    }

    pub fn degree(&self) -> usize {
        self.antider.degree()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.antider.eval(x)
    }

    /// `out[nu][i] = F^{(nu)}(xs[i])`.
    pub fn derivatives_at(&self, xs: &[f64], order: usize) -> Vec<Vec<f64>> {
        self.antider
            .derivatives(order)
            .iter()
            .map(|p| p.eval_many(xs))
            .collect()
    }

    /// Derivatives on the `mgrid + 1` Lobatto points of `[-1, 1]`, in ascending `x`.
    pub fn lobatto_derivatives(&self, mgrid: usize, order: usize) -> Vec<Vec<f64>> {
        self.antider
            .derivatives(order)
            .iter()
            .map(|p| lobatto_ascending(p, mgrid))
            .collect()
    }
}

pub(crate) fn lobatto_ascending(p: &ChebPoly, mgrid: usize) -> Vec<f64> {
    let mut v = if p.is_zero() {
        vec![0.0; mgrid + 1]
    } else {
        dct::coeffs_to_values(&dct::fold(p.coeffs(), mgrid))
    };
    v.reverse();
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepKind {
    T,
    Q,
    R,
}

/// Measured tail behaviour of a step polynomial against `chi_j`.
#[derive(Debug, Clone, Serialize)]
pub struct DecayReport {
    pub mu: usize,
    /// `max |chi_j - step| / psi_j^mu` over points where `psi_j^mu >= floor`.
    pub max_ratio: f64,
    /// `max(-min step, max step - 1)` over the grid.
    pub overshoot: f64,
    pub floor: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepApproximant {
    pub kind: StepKind,
    pub j: usize,
    pub n: usize,
    pub mu: usize,
    pub a: f64,
    pub b: f64,
    /// Partition size and centre the kernel actually used (differs from `(n, j)` after doubling).
    pub kernel_m: usize,
    pub kernel_center: usize,
    pub degree: usize,
    #[serde(skip)]
    pub poly: ChebPoly,
    pub decay: DecayReport,
}

const DECAY_FLOOR: f64 = 1e-10;

fn decay_report(
    partition: &ChebPartition,
    j: usize,
    mu: usize,
    xs: &[f64],
    vals: &[f64],
) -> DecayReport {
    let mut max_ratio = 0.0f64;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut samples = 0;
    for (&x, &v) in xs.iter().zip(vals) {
        lo = lo.min(v);
        hi = hi.max(v);
        let w = partition.psi(j, x).powi(mu as i32);
        if w >= DECAY_FLOOR {
            samples += 1;
            let chi = f64::from(partition.chi(j, x));
            max_ratio = max_ratio.max((chi - v).abs() / w);
        }
    }
    DecayReport {
        mu,
        max_ratio,
        overshoot: (-lo).max(hi - 1.0).max(0.0),
        floor: DECAY_FLOOR,
        samples,
    }
}

fn check_inner_index(partition: &ChebPartition, j: usize) -> Result<()> {
    if j == 0 || j >= partition.n() {
        return Err(Error::param("j", format!("must lie in 1..{}", partition.n())));
    }
    Ok(())
}

/// The kernel step `T_j(x; a, b)` on the partition itself.
pub fn build_step_poly(partition: &ChebPartition, j: usize, a: f64, b: f64, mu: usize) -> Result<StepApproximant> {
    check_inner_index(partition, j)?;
    if !(-1.0..=partition.node(j + 1)).contains(&a) || !(partition.node(j - 1)..=1.0).contains(&b) {
        return Err(Error::Precondition(format!(
            "infeasible anchors a = {a}, b = {b} for j = {j}: need -1 <= a <= x_(j+1) and x_(j-1) <= b <= 1"
        )));
    }
    let family = KernelFamily::new(partition.n(), kernel_power(mu))?;
    let kernel = StepKernel::new(&family, j)?;
    let (fa, fb) = (kernel.eval(a), kernel.eval(b));
    let delta = fb - fa;
    let poly = kernel.antiderivative().scale(1.0 / delta).add(&ChebPoly::constant(-fa / delta));
    let grid = EvalGrid::lobatto(Interval::unit(), 16 * partition.n())?;
    let vals = poly.eval_many(grid.points());
    let decay = decay_report(partition, j, mu, grid.points(), &vals);
    Ok(StepApproximant {
        kind: StepKind::T,
        j,
        n: partition.n(),
        mu,
        a,
        b,
        kernel_m: partition.n(),
        kernel_center: j,
        degree: poly.degree(),
        poly,
        decay,
    })
}

/// Evaluation plan for `R_j(x; Y)`.
#[derive(Debug, Clone)]
pub struct RStep {
    kernel: StepKernel,
    r: usize,
    node: f64,
    step_at: f64,
    a: Vec<f64>,
    b: Vec<f64>,
    fa: Vec<f64>,
    fb: Vec<f64>,
}

fn open_gap_free(ys: &[f64], lo: f64, hi: f64) -> bool {
    !ys.iter().any(|&y| lo < y && y < hi)
}

impl RStep {
    /// Plans `R_j` for `Y` with `+-1` adjoined.
    ///
    /// Uses the partition itself when `(x_{j+1}, x_{j-1})` avoids `Y`, otherwise the
    /// doubled partition centred at `2j + 1`. With `mirror` set, a step whose left
    /// cell meets `Y` is centred at `2j - 1` instead, which needs `(x_j, x_{j-1})` free.
    pub fn plan(
        partition: &ChebPartition,
        j: usize,
        y: &NodeMultiset,
        r: usize,
        families: &Families,
        mirror: bool,
    ) -> Result<Self> {
        check_inner_index(partition, j)?;
        let n = partition.n();
        let mut ys: Vec<f64> = y.distinct().to_vec();
        for e in [-1.0, 1.0] {
            if !ys.contains(&e) {
                ys.push(e);
            }
        }
        ys.sort_by(f64::total_cmp);
        let (xl, xj, xr) = (partition.node(j + 1), partition.node(j), partition.node(j - 1));
        let (m, center) = if open_gap_free(&ys, xl, xr) && !ys.contains(&xj) {
            (n, j)
        } else if open_gap_free(&ys, xl, xj) {
            (2 * n, 2 * j + 1)
        } else if mirror && open_gap_free(&ys, xj, xr) && !ys.contains(&xj) {
            (2 * n, 2 * j - 1)
        } else {
            return Err(Error::Precondition(format!(
                "the open interval next to x_{j} contains points of Y; R_{j} is not defined"
            )));
        };
        let family = if m == n { &families.single } else { &families.double };
        let kernel = StepKernel::new(family, center)?;
        let (lo, hi) = (cheb_node(m, center + 1), cheb_node(m, center - 1));
        let a: Vec<f64> = ys.iter().copied().filter(|&v| v <= lo).collect();
        let b: Vec<f64> = ys.iter().copied().filter(|&v| v >= hi).collect();
        if a.len() + b.len() != ys.len() {
            return Err(Error::Precondition(format!(
                "Y meets the cell pair around the centre of R_{j}"
            )));
        }
        let fa = a.iter().map(|&v| kernel.eval(v)).collect();
        let fb = b.iter().map(|&v| kernel.eval(v)).collect();
        Ok(RStep {
            step_at: kernel.location(),
            kernel,
            r,
            node: xj,
            a,
            b,
            fa,
            fb,
        })
    }

    pub fn kernel(&self) -> &StepKernel {
        &self.kernel
    }

    pub fn anchors(&self) -> (&[f64], &[f64]) {
        (&self.a, &self.b)
    }

    pub fn degree(&self) -> usize {
        let rp1 = self.r + 1;
        self.kernel.degree() * rp1 * rp1 * self.a.len() * self.b.len()
    }

    /// Jet of `R_j - chi_j` at `x`, given `d = [F(x), F'(x), ...]` of length `order + 1`.
    pub(crate) fn defect(&self, d: &[f64], x: f64) -> SJet {
        let order = d.len() - 1;
        let rp1 = self.r + 1;
        let chi = if x >= self.node { 1.0 } else { 0.0 };
        if x < self.step_at {
            // R itself is small here; keep it in "small" form.
            let mut w = SJet::constant(0.0, order);
            for &fb in &self.fb {
                let mut q = SJet::constant(1.0, order);
                for &fa in &self.fa {
                    let delta = fb - fa;
                    let t = SJet::affine((d[0] - fa) / delta, d, 1.0 / delta, order);
                    q = q.mul(&t.powi(rp1));
                }
                // 1 - (1 - q)^{r+1} by Horner in q
                let mut v = SJet::constant(0.0, order);
                for i in (1..=rp1).rev() {
                    let c = binom(rp1, i) * if i % 2 == 1 { 1.0 } else { -1.0 };
                    v = v.shift(c).mul(&q);
                }
                w = w.union(&v);
            }
            w.shift(-chi)
        } else {
            // 1 - R is small here.
            let mut prod = SJet::constant(1.0, order);
            for &fb in &self.fb {
                let mut u = SJet::constant(0.0, order);
                for &fa in &self.fa {
                    let delta = fb - fa;
                    let t = SJet::affine((d[0] - fa) / delta, d, 1.0 / delta, order);
                    let y = SJet::affine((fb - d[0]) / delta, d, -1.0 / delta, order);
                    let mut geo = SJet::constant(1.0, order);
                    let mut tp = SJet::constant(1.0, order);
                    for _ in 0..self.r {
                        tp = tp.mul(&t);
                        geo = geo.add(&tp);
                    }
                    u = u.union(&y.mul(&geo));
                }
                prod = prod.mul(&u.powi(rp1));
            }
            prod.scale(-1.0).shift(1.0 - chi)
        }
    }

    /// `R_j^{(nu)}(x)` for `nu <= order`, evaluated pointwise.
    pub fn jet_at(&self, x: f64, order: usize) -> Result<Vec<f64>> {
        check_order(order)?;
        let d: Vec<f64> = self
            .kernel
            .antiderivative()
            .derivatives(order)
            .iter()
            .map(|p| p.eval(x))
            .collect();
        let mut out = vec![0.0; order + 1];
        self.defect(&d, x).add_derivatives_to(&mut out);
        out[0] += if x >= self.node { 1.0 } else { 0.0 };
        Ok(out)
    }

    /// Values on the `mgrid + 1` Lobatto points, ascending.
    pub fn lobatto_values(&self, mgrid: usize) -> Vec<f64> {
        let fv = lobatto_ascending(self.kernel.antiderivative(), mgrid);
        let xs = EvalGrid::lobatto(Interval::unit(), mgrid).expect("mgrid >= 1");
        xs.points()
            .iter()
            .zip(fv)
            .map(|(&x, f)| {
                let chi = if x >= self.node { 1.0 } else { 0.0 };
                self.defect(&[f], x).value() + chi
            })
            .collect()
    }

    /// `R_j` as an explicit Chebyshev series, sampled at enough Lobatto points to be exact.
    pub fn to_cheb(&self) -> ChebPoly {
        let mgrid = self.degree().max(1).next_power_of_two();
        let mut v = self.lobatto_values(mgrid);
        v.reverse();
        ChebPoly::from_lobatto_values(Interval::unit(), &v)
    }
}

pub(crate) fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::param("order", format!("at most {MAX_ORDER} derivatives are supported")));
    }
    Ok(())
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Kernel families for a partition and its doubling.
#[derive(Debug, Clone)]
pub struct Families {
    pub single: KernelFamily,
    pub double: KernelFamily,
}

impl Families {
    pub fn new(n: usize, mu: usize) -> Result<Self> {
        let p = kernel_power(mu);
        Ok(Families {
            single: KernelFamily::new(n, p)?,
            double: KernelFamily::new(2 * n, p)?,
        })
    }
}

/// `R_j(x; Y)` as an explicit polynomial, for the open interval `(x_{j+1}, x_j)` free of `Y`.
pub fn build_r_j(partition: &ChebPartition, j: usize, y: &NodeMultiset, r: usize, mu: usize) -> Result<StepApproximant> {
    let families = Families::new(partition.n(), mu)?;
    let plan = RStep::plan(partition, j, y, r, &families, false)?;
    let poly = plan.to_cheb();
    let mgrid = (16 * partition.n()).max(64);
    let grid = EvalGrid::lobatto(Interval::unit(), mgrid)?;
    let vals = plan.lobatto_values(mgrid);
    let decay = decay_report(partition, j, mu, grid.points(), &vals);
    Ok(StepApproximant {
        kind: StepKind::R,
        j,
        n: partition.n(),
        mu,
        a: plan.a.last().copied().unwrap_or(-1.0),
        b: plan.b.first().copied().unwrap_or(1.0),
        kernel_m: plan.kernel.m(),
        kernel_center: plan.kernel.center(),
        degree: plan.degree(),
        poly,
        decay,
    })
}
