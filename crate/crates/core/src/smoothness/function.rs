//! Real functions with derivatives up to a known order.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numcore::Interval;
use crate::poly::ChebPoly;

pub type DerivFn = Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>;

/// Effectively unbounded derivative order for analytic built-ins.
pub const SMOOTH: usize = 64;

#[derive(Clone)]
pub struct FunctionModel {
    label: String,
    domain: Interval,
    r_max: usize,
    deriv: DerivFn,
    features: Vec<f64>,
    approximate: bool,
}

impl fmt::Debug for FunctionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionModel")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("r_max", &self.r_max)
            .field("features", &self.features)
            .field("approximate", &self.approximate)
            .finish()
    }
}

impl FunctionModel {
    /// Wraps a closure returning `f^{(nu)}(x)` for `nu <= r_max`.
    pub fn from_derivatives(
        label: impl Into<String>,
        domain: Interval,
        r_max: usize,
        deriv: impl Fn(usize, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        FunctionModel {
            label: label.into(),
            domain,
            r_max,
            deriv: Arc::new(deriv),
            features: Vec::new(),
            approximate: false,
        }
    }

    /// Derivatives by central differences with base step `1e-6` times the domain length.
    pub fn numerical(
        label: impl Into<String>,
        domain: Interval,
        r_max: usize,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let scale = domain.len();
        let f = Arc::new(f);
        let mut m = Self::from_derivatives(label, domain, r_max, move |nu, x| {
            if nu == 0 {
                return f(x);
            }
            // Higher orders need a larger step to keep cancellation in check.
            let h = if nu == 1 {
                1e-6 * scale
            } else {
                scale * f64::EPSILON.powf(1.0 / (nu as f64 + 2.0))
            };
            central_difference(&*f, nu, x, h)
        });
        m.approximate = true;
        m
    }

    pub fn with_features(mut self, mut features: Vec<f64>) -> Self {
        features.sort_by(f64::total_cmp);
        features.dedup();
        self.features = features;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn r_max(&self) -> usize {
        self.r_max
    }

    /// Points where the function is less smooth (kinks, singular points).
    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn is_approximate(&self) -> bool {
        self.approximate
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.deriv)(0, x)
    }

    pub fn deriv(&self, nu: usize, x: f64) -> f64 {
        (self.deriv)(nu, x)
    }

    pub fn try_deriv(&self, nu: usize, x: f64) -> Result<f64> {
        if nu > self.r_max {
            return Err(Error::Precondition(format!(
                "{} has derivatives only up to order {}, asked for {nu}",
                self.label, self.r_max
            )));
        }
        Ok(self.deriv(nu, x))
    }

    /// The model of `f^{(r)}`.
    pub fn derivative_model(&self, r: usize) -> Result<FunctionModel> {
        if r > self.r_max {
            return Err(Error::Precondition(format!(
                "{} has derivatives only up to order {}, asked for {r}",
                self.label, self.r_max
            )));
        }
        if r == 0 {
            return Ok(self.clone());
        }
        let base = self.deriv.clone();
        Ok(FunctionModel {
            label: format!("{}^({r})", self.label),
            domain: self.domain,
            r_max: self.r_max - r,
            deriv: Arc::new(move |nu, x| base(nu + r, x)),
            features: self.features.clone(),
            approximate: self.approximate,
        })
    }

    /// `f - p` for a polynomial `p` defined on the same interval.
    pub fn minus_poly(&self, p: &ChebPoly) -> FunctionModel {
        let base = self.deriv.clone();
        let d = p.derivatives(self.r_max.min(SMOOTH).min(p.degree() + 1));
        FunctionModel {
            label: format!("{} - P", self.label),
            domain: self.domain,
            r_max: self.r_max,
            deriv: Arc::new(move |nu, x| {
                let pv = d.get(nu).map_or(0.0, |q| q.eval(x));
                base(nu, x) - pv
            }),
            features: self.features.clone(),
            approximate: self.approximate,
        }
    }

    pub fn exp() -> Self {
        Self::from_derivatives("exp", Interval::unit(), SMOOTH, |_, x| x.exp())
    }

    /// `sin(a x)`.
    pub fn sin(a: f64) -> Self {
        Self::from_derivatives(label_with("sin", a), Interval::unit(), SMOOTH, move |nu, x| {
            a.powi(nu as i32) * (a * x + nu as f64 * std::f64::consts::FRAC_PI_2).sin()
        })
    }

    /// `cos(a x)`.
    pub fn cos(a: f64) -> Self {
        Self::from_derivatives(label_with("cos", a), Interval::unit(), SMOOTH, move |nu, x| {
            a.powi(nu as i32) * (a * x + nu as f64 * std::f64::consts::FRAC_PI_2).cos()
        })
    }

    /// `|x|^gamma`.
    pub fn abspow(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        let r_max = smoothness_order(gamma);
        Ok(Self::from_derivatives(
            format!("abspow:{gamma}"),
            Interval::unit(),
            r_max,
            move |nu, x| {
                if let Some(v) = even_integer_power(gamma, nu, x) {
                    return v;
                }
                let c = falling(gamma, nu);
                let s = if x < 0.0 && nu % 2 == 1 { -1.0 } else { 1.0 };
                power_term(c, x.abs(), gamma - nu as f64) * s
            },
        )
        .with_features(vec![0.0]))
    }

    /// `(x - z)_+^gamma`.
    pub fn pluspow(gamma: f64, z: f64) -> Result<Self> {
        check_gamma(gamma)?;
        let r_max = smoothness_order(gamma);
        let label = if z == 0.0 {
            format!("pluspow:{gamma}")
        } else {
            format!("pluspow:{gamma}:{z}")
        };
        Ok(
            Self::from_derivatives(label, Interval::unit(), r_max, move |nu, x| {
                let h = x - z;
                if h <= 0.0 {
                    // for integer gamma the derivative of order gamma jumps; take the right-continuous value
                    if h == 0.0 && gamma.fract() == 0.0 && nu as f64 == gamma {
                        return falling(gamma, nu);
                    }
                    return 0.0;
                }
                power_term(falling(gamma, nu), h, gamma - nu as f64)
            })
            .with_features(vec![z]),
        )
    }

    /// Polynomial with monomial coefficients `a_0 + a_1 x + ...`.
    pub fn polynomial(a: &[f64]) -> Self {
        let a = a.to_vec();
        let label = format!(
            "poly:{}",
            a.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
        );
        Self::from_derivatives(label, Interval::unit(), SMOOTH, move |nu, x| {
            let mut acc = 0.0;
            for (i, &c) in a.iter().enumerate().skip(nu).rev() {
                acc = acc * x + c * falling(i as f64, nu);
            }
            acc
        })
    }

    pub fn from_cheb(label: impl Into<String>, p: &ChebPoly) -> Self {
        let d = p.derivatives(p.degree() + 1);
        let domain = p.domain();
        Self::from_derivatives(label, domain, SMOOTH, move |nu, x| {
            d.get(nu).map_or(0.0, |q| q.eval(x))
        })
    }

    /// Parses `exp`, `sin[:a]`, `cos[:a]`, `abspow:g`, `pluspow:g[:z]`, `poly:c0,c1,...`.
    pub fn from_label(label: &str) -> Result<Self> {
        let label = label.trim();
        let mut parts = label.splitn(2, ':');
        let head = parts.next().unwrap_or_default();
        let rest = parts.next();
        let num = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::param("function", format!("bad number `{s}` in `{label}`")))
        };
        match (head, rest) {
            ("exp", None) => Ok(Self::exp()),
            ("sin", None) => Ok(Self::sin(1.0)),
            ("sin", Some(a)) => Ok(Self::sin(num(a)?)),
            ("cos", None) => Ok(Self::cos(1.0)),
            ("cos", Some(a)) => Ok(Self::cos(num(a)?)),
            ("abspow", Some(g)) => Self::abspow(num(g)?),
            ("pluspow", Some(args)) => {
                let mut it = args.split(':');
                let g = num(it.next().unwrap_or_default())?;
                let z = it.next().map(num).transpose()?.unwrap_or(0.0);
                Self::pluspow(g, z)
            }
            ("poly", Some(cs)) => {
                let a = cs.split(',').map(num).collect::<Result<Vec<_>>>()?;
                Ok(Self::polynomial(&a))
            }
            _ => Err(Error::param("function", format!("unknown function label `{label}`"))),
        }
    }
}

fn label_with(name: &str, a: f64) -> String {
    if a == 1.0 {
        name.to_string()
    } else {
        format!("{name}:{a}")
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::param("gamma", format!("must be positive, got {gamma}")));
    }
    Ok(())
}

/// Number of continuous derivatives of `|x|^gamma` or `x_+^gamma`.
pub fn smoothness_order(gamma: f64) -> usize {
    if gamma.fract() == 0.0 {
        (gamma as usize).saturating_sub(1)
    } else {
        gamma.floor() as usize
    }
}

/// `g (g-1) ... (g-nu+1)`.
pub fn falling(g: f64, nu: usize) -> f64 {
    (0..nu).map(|i| g - i as f64).product()
}

fn power_term(c: f64, base: f64, e: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else if base == 0.0 {
        if e > 0.0 {
            0.0
        } else if e == 0.0 {
            c
        } else {
            f64::INFINITY * c.signum()
        }
    } else {
        c * base.powf(e)
    }
}

/// `|x|^gamma` is a polynomial when `gamma` is an even integer.
fn even_integer_power(gamma: f64, nu: usize, x: f64) -> Option<f64> {
    if gamma.fract() != 0.0 || (gamma as i64) % 2 != 0 {
        return None;
    }
    let g = gamma as usize;
    if nu > g {
        return Some(0.0);
    }
    Some(falling(gamma, nu) * x.powi((g - nu) as i32))
}

fn central_difference(f: &(dyn Fn(f64) -> f64 + Send + Sync), nu: usize, x: f64, h: f64) -> f64 {
    let mut acc = 0.0;
    let mut binom = 1.0;
    for i in 0..=nu {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom * f(x + (nu as f64 / 2.0 - i as f64) * h);
        binom = binom * (nu - i) as f64 / (i + 1) as f64;
    }
    acc / h.powi(nu as i32)
}
