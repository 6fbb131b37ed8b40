//! Polynomials in Chebyshev form on an interval.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dct;
use crate::jet::Jet;
use crate::numcore::{EvalGrid, Interval};

/// `sum_k c_k T_k(t)` with `t` the affine image of `x` in `[-1, 1]`.
///
/// The zero polynomial has an empty coefficient list. Binary operations
/// require both operands to live on the same interval and panic otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChebPoly {
    domain: Interval,
    coeffs: Vec<f64>,
}

impl ChebPoly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self::on(Interval::unit(), coeffs)
    }

    pub fn on(domain: Interval, coeffs: Vec<f64>) -> Self {
        let mut p = ChebPoly { domain, coeffs };
        p.normalize();
        p
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn zero_on(domain: Interval) -> Self {
        Self::on(domain, Vec::new())
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// The identity `x` on `[-1, 1]`.
    pub fn identity() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    /// `T_n` on `[-1, 1]`.
    pub fn chebyshev_t(n: usize) -> Self {
        let mut c = vec![0.0; n + 1];
        c[n] = 1.0;
        Self::new(c)
    }

    /// From monomial coefficients `a_0 + a_1 x + ...` in the variable `x` of `[-1, 1]`.
    pub fn from_monomial(a: &[f64]) -> Self {
        let mut p = ChebPoly::zero();
        for &ak in a.iter().rev() {
            p = p.mul_x();
            p = p.add(&ChebPoly::constant(ak));
        }
        p
    }

    /// Interpolant of `values` given at the Lobatto points of `domain`
    /// (ordered from `domain.b` down to `domain.a`).
    pub fn from_lobatto_values(domain: Interval, values: &[f64]) -> Self {
        Self::on(domain, dct::values_to_coeffs(values))
    }

    /// Interpolates `f` at `m + 1` Lobatto points of `domain`.
    pub fn interpolate(domain: Interval, m: usize, f: impl Fn(f64) -> f64) -> Self {
        let xs = lobatto_points(domain, m);
        let v: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        Self::from_lobatto_values(domain, &v)
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
    }

    /// Drops trailing coefficients below `tol` times the largest coefficient.
    pub fn trim(&self, tol: f64) -> Self {
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let mut c = self.coeffs.clone();
        while c.last().is_some_and(|v| v.abs() <= tol * scale) {
            c.pop();
        }
        Self::on(self.domain, c)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        clenshaw(&self.coeffs, self.domain.to_unit(x))
    }

    pub fn eval_many(&self, xs: &[f64]) -> Vec<f64> {
        if xs.len() * self.coeffs.len() < 1 << 14 {
            xs.iter().map(|&x| self.eval(x)).collect()
        } else {
            xs.par_iter().map(|&x| self.eval(x)).collect()
        }
    }

    fn check_domain(&self, other: &ChebPoly) {
        assert!(
            self.domain == other.domain,
            "Chebyshev operands live on different intervals: {:?} vs {:?}",
            self.domain,
            other.domain
        );
    }

    pub fn add(&self, other: &ChebPoly) -> ChebPoly {
        self.check_domain(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::on(self.domain, c)
    }

    pub fn sub(&self, other: &ChebPoly) -> ChebPoly {
        self.check_domain(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Self::on(self.domain, c)
    }

    pub fn scale(&self, s: f64) -> ChebPoly {
        Self::on(self.domain, self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Product via `T_j T_k = (T_{j+k} + T_{|j-k|}) / 2`; large products go through Lobatto sampling.
    pub fn mul(&self, other: &ChebPoly) -> ChebPoly {
        self.check_domain(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero_on(self.domain);
        }
        let (p, q) = (&self.coeffs, &other.coeffs);
        let deg = p.len() + q.len() - 2;
        if p.len().min(q.len()) > 48 {
            let m = deg.max(1);
            let a = dct::coeffs_to_values(&pad(p, m + 1));
            let b = dct::coeffs_to_values(&pad(q, m + 1));
            let v: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
            let mut c = dct::values_to_coeffs(&v);
            c.truncate(deg + 1);
            return Self::on(self.domain, c);
        }
        let mut c = vec![0.0; deg + 1];
        for (j, &pj) in p.iter().enumerate() {
            if pj == 0.0 {
                continue;
            }
            for (k, &qk) in q.iter().enumerate() {
                let h = 0.5 * pj * qk;
                c[j + k] += h;
                c[j.abs_diff(k)] += h;
            }
        }
        Self::on(self.domain, c)
    }

    /// Multiplies by the unit variable `t` (which is `x` on `[-1, 1]`).
    fn mul_x(&self) -> ChebPoly {
        if self.is_zero() {
            return self.clone();
        }
        let n = self.coeffs.len();
        let mut c = vec![0.0; n + 1];
        for (k, &ck) in self.coeffs.iter().enumerate() {
            if k == 0 {
                c[1] += ck;
            } else {
                c[k + 1] += 0.5 * ck;
                c[k - 1] += 0.5 * ck;
            }
        }
        Self::on(self.domain, c)
    }

    /// First derivative with respect to `x`.
    pub fn derivative(&self) -> ChebPoly {
        let n = self.coeffs.len();
        if n <= 1 {
            return Self::zero_on(self.domain);
        }
        let mut d = vec![0.0; n - 1];
        for k in (1..n).rev() {
            let next = if k + 1 < n - 1 { d[k + 1] } else { 0.0 };
            // d_{k-1} = d_{k+1} + 2 k c_k
            let val = next + 2.0 * k as f64 * self.coeffs[k];
            d[k - 1] = val;
        }
        d[0] *= 0.5;
        let s = 2.0 / self.domain.len();
        Self::on(self.domain, d.into_iter().map(|v| v * s).collect())
    }

    pub fn nth_derivative(&self, nu: usize) -> ChebPoly {
        (0..nu).fold(self.clone(), |p, _| p.derivative())
    }

    /// `[p, p', ..., p^{(order)}]`.
    pub fn derivatives(&self, order: usize) -> Vec<ChebPoly> {
        let mut out = Vec::with_capacity(order + 1);
        out.push(self.clone());
        for i in 0..order {
            let d = out[i].derivative();
            out.push(d);
        }
        out
    }

    /// Antiderivative vanishing at the left end of the domain.
    pub fn antiderivative(&self) -> ChebPoly {
        let n = self.coeffs.len();
        if n == 0 {
            return self.clone();
        }
        let h = 0.5 * self.domain.len();
        let mut c = vec![0.0; n + 1];
        for k in 0..n {
            let ck = self.coeffs[k] * h;
            match k {
                0 => c[1] += ck,
                1 => {
                    c[2] += 0.25 * ck;
                }
                _ => {
                    c[k + 1] += ck / (2.0 * (k + 1) as f64);
                    c[k - 1] -= ck / (2.0 * (k - 1) as f64);
                }
            }
        }
        let p = Self::on(self.domain, c);
        let left = p.eval(self.domain.a);
        p.sub(&Self::on(self.domain, vec![left]))
    }

    /// `q(x) = p(alpha x + beta)`, with the result on `[-1, 1]`.
    ///
    /// Requires `self` to live on `[-1, 1]`; evaluated by a polynomial Clenshaw recurrence.
    pub fn compose_affine(&self, alpha: f64, beta: f64) -> ChebPoly {
        assert!(
            self.domain == Interval::unit(),
            "compose_affine expects a polynomial on [-1, 1]"
        );
        let y = ChebPoly::new(vec![beta, alpha]);
        let two_y = y.scale(2.0);
        let mut b1 = ChebPoly::zero();
        let mut b2 = ChebPoly::zero();
        for k in (1..self.coeffs.len()).rev() {
            let b0 = two_y.mul(&b1).sub(&b2).add(&ChebPoly::constant(self.coeffs[k]));
            b2 = b1;
            b1 = b0;
        }
        let c0 = ChebPoly::constant(self.coeff(0));
        c0.add(&y.mul(&b1)).sub(&b2)
    }

    /// Re-expands the same function on another interval.
    pub fn restrict_to(&self, target: Interval) -> ChebPoly {
        let m = self.degree().max(1);
        let v: Vec<f64> = lobatto_points(target, m).iter().map(|&x| self.eval(x)).collect();
        let mut p = Self::from_lobatto_values(target, &v);
        p.coeffs.truncate(self.coeffs.len().max(1));
        p.normalize();
        p
    }

    /// Monomial coefficients in the unit variable (only sensible for low degree).
    pub fn to_monomial(&self) -> Vec<f64> {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        let mut t_prev = vec![1.0];
        let mut t_cur = vec![0.0, 1.0];
        for (k, &ck) in self.coeffs.iter().enumerate() {
            let tk: &[f64] = match k {
                0 => &t_prev,
                1 => &t_cur,
                _ => {
                    let mut next = vec![0.0; k + 1];
                    for (i, &v) in t_cur.iter().enumerate() {
                        next[i + 1] += 2.0 * v;
                    }
                    for (i, &v) in t_prev.iter().enumerate() {
                        next[i] -= v;
                    }
                    t_prev = std::mem::replace(&mut t_cur, next);
                    &t_cur
                }
            };
            for (i, &v) in tk.iter().enumerate() {
                out[i] += ck * v;
            }
        }
        out
    }

    pub fn sup_norm_on_grid(&self, grid: &EvalGrid) -> f64 {
        self.eval_many(grid.points())
            .into_iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Values at the `m + 1` Lobatto points of the domain, for any degree (aliased when above `m`).
    pub fn lobatto_values(&self, m: usize) -> Vec<f64> {
        if self.is_zero() {
            return vec![0.0; m + 1];
        }
        dct::coeffs_to_values(&dct::fold(&self.coeffs, m))
    }

    pub fn jet(&self, x: f64, order: usize) -> Jet {
        let d: Vec<f64> = self.derivatives(order).iter().map(|p| p.eval(x)).collect();
        Jet::from_derivatives(&d)
    }
}

fn pad(c: &[f64], len: usize) -> Vec<f64> {
    let mut v = c.to_vec();
    v.resize(len, 0.0);
    v
}

/// Lobatto points of `domain`, ordered from right to left.
pub fn lobatto_points(domain: Interval, m: usize) -> Vec<f64> {
    (0..=m)
        .map(|i| domain.from_unit(crate::numcore::cheb_node(m.max(1), i)))
        .take(m + 1)
        .collect()
}

pub(crate) fn clenshaw(c: &[f64], t: f64) -> f64 {
    match c.len() {
        0 => 0.0,
        1 => c[0],
        _ => {
            let (mut b1, mut b2) = (0.0, 0.0);
            let tt = 2.0 * t;
            for &ck in c[1..].iter().rev() {
                let b0 = ck + tt * b1 - b2;
                b2 = b1;
                b1 = b0;
            }
            c[0] + t * b1 - b2
        }
    }
}
