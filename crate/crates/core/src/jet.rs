//! Truncated Taylor arithmetic.
//!
//! A [`Jet`] of order `d` at a point holds `a_m = g^{(m)}(x)/m!` for
//! `0 <= m <= d`. Products and powers propagate derivatives exactly up to
//! rounding, and a factor whose leading coefficients are exactly zero keeps
//! them exactly zero in the product.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet(Vec<f64>);

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = value;
        Jet(c)
    }

    /// Builds a jet from derivative values `g(x), g'(x), ..., g^{(d)}(x)`.
    pub fn from_derivatives(derivs: &[f64]) -> Self {
        let mut fact = 1.0;
        let c = derivs
            .iter()
            .enumerate()
            .map(|(m, &d)| {
                if m > 0 {
                    fact *= m as f64;
                }
                d / fact
            })
            .collect();
        Jet(c)
    }

    pub fn from_taylor(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "jet needs at least one coefficient");
        Jet(coeffs)
    }

    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    pub fn taylor(&self) -> &[f64] {
        &self.0
    }

    pub fn derivatives(&self) -> Vec<f64> {
        let mut fact = 1.0;
        self.0
            .iter()
            .enumerate()
            .map(|(m, &a)| {
                if m > 0 {
                    fact *= m as f64;
                }
                a * fact
            })
            .collect()
    }

    pub fn powi(&self, exp: u32) -> Jet {
        let mut out = Jet::constant(1.0, self.order());
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet(self.0.iter().map(|a| a * s).collect())
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> Jet {
        let mut c: Vec<f64> = self.0.iter().map(|a| -a).collect();
        c[0] = 1.0 - self.0[0];
        Jet(c)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let d = self.order().min(rhs.order());
        let mut c = vec![0.0; d + 1];
        for (m, slot) in c.iter_mut().enumerate() {
            let mut acc = 0.0;
            for i in 0..=m {
                let (a, b) = (self.0[i], rhs.0[m - i]);
                if a != 0.0 && b != 0.0 {
                    acc += a * b;
                }
            }
            *slot = acc;
        }
        Jet(c)
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let d = self.order().min(rhs.order());
        Jet((0..=d).map(|m| self.0[m] + rhs.0[m]).collect())
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let d = self.order().min(rhs.order());
        Jet((0..=d).map(|m| self.0[m] - rhs.0[m]).collect())
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet(self.0.iter().map(|a| -a).collect())
    }
}
