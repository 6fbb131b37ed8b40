use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermite::NodeMultiset;

/// Which pointwise estimate a [`RatioReport`](super::RatioReport) measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EstimateTag {
    /// `rho^r omega_k(f^{(r)}, rho)`.
    Classdir,
    /// `phi^{2r} omega_k(f^{(r)}, phi^{2/k} n^{-2+2/k})` near the endpoints.
    Sim2,
    /// `phi^{2(r-nu)} omega_l(f^{(r)}, phi^{2/l} n^{-2+2/l})` near the endpoints.
    #[serde(rename = "MAIN_1_8")]
    Main1_8,
    /// `rho^{r-nu} omega_k(f^{(r)}, rho)` for the `nu`-th derivative.
    Tr1,
    /// `rho^{-k} omega_k(f^{(r)}, rho)` against `|P^{(k+r)}|`.
    Tr2,
    /// Interpolation of order `m` at a single point `x0`.
    #[serde(rename = "MAINGEN_4G")]
    MainGen4g,
    /// Derivative form of `MainGen4g` with `sigma = max(m - nu + 1, 0)`.
    #[serde(rename = "MAINNEW_4NNN")]
    MainNew4nnn,
    /// Hermite interpolation on `Y`, with `D_{s-1}` or `D_{r-1}` factors.
    #[serde(rename = "MAINNEW1_78")]
    MainNew1_78,
    /// Same denominator as `Classdir`, applied to the constructor output.
    An2,
    /// Same denominator as `MainNew1_78`, applied to the constructor output.
    An222,
    /// `(min{rho, dist(x, Z)})^r ||f^{(r)}||`.
    Estwr1,
    /// Lipschitz-type rate `(min{dist(x, Z), rho})^alpha` times the seminorm.
    Corin,
    /// `omega_1(f, min{phi^2, phi/n})`.
    Qmonotone,
}

impl EstimateTag {
    pub const ALL: [EstimateTag; 13] = [
        EstimateTag::Classdir,
        EstimateTag::Sim2,
        EstimateTag::Main1_8,
        EstimateTag::Tr1,
        EstimateTag::Tr2,
        EstimateTag::MainGen4g,
        EstimateTag::MainNew4nnn,
        EstimateTag::MainNew1_78,
        EstimateTag::An2,
        EstimateTag::An222,
        EstimateTag::Estwr1,
        EstimateTag::Corin,
        EstimateTag::Qmonotone,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EstimateTag::Classdir => "CLASSDIR",
            EstimateTag::Sim2 => "SIM2",
            EstimateTag::Main1_8 => "MAIN_1_8",
            EstimateTag::Tr1 => "TR1",
            EstimateTag::Tr2 => "TR2",
            EstimateTag::MainGen4g => "MAINGEN_4G",
            EstimateTag::MainNew4nnn => "MAINNEW_4NNN",
            EstimateTag::MainNew1_78 => "MAINNEW1_78",
            EstimateTag::An2 => "AN2",
            EstimateTag::An222 => "AN222",
            EstimateTag::Estwr1 => "ESTWR1",
            EstimateTag::Corin => "CORIN",
            EstimateTag::Qmonotone => "QMONOTONE",
        }
    }

    /// True for the estimates stated only on `1 - n^{-2} <= |x| <= 1`.
    pub fn endpoint_only(self) -> bool {
        matches!(self, EstimateTag::Sim2 | EstimateTag::Main1_8)
    }
}

impl fmt::Display for EstimateTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimateTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase().replace('-', "_");
        EstimateTag::ALL
            .into_iter()
            .find(|t| t.name() == key)
            .ok_or_else(|| Error::param("kind", format!("unknown estimate `{s}`")))
    }
}

/// An estimate together with its parameters.
///
/// Unused parameters are carried along and ignored: `nu` matters for the
/// derivative estimates, `ell` for `Main1_8`/`MainNew4nnn`, `m` and `x0` for
/// the single-point estimates, `alpha` for `Corin`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateKind {
    pub tag: EstimateTag,
    pub k: usize,
    pub r: usize,
    pub nu: usize,
    pub ell: usize,
    pub m: usize,
    pub alpha: f64,
    pub x0: f64,
}

impl EstimateKind {
    pub fn new(tag: EstimateTag, k: usize, r: usize) -> Self {
        EstimateKind {
            tag,
            k,
            r,
            nu: 0,
            ell: k,
            m: 0,
            alpha: r.max(1) as f64,
            x0: 0.0,
        }
    }

    pub fn with_nu(mut self, nu: usize) -> Self {
        self.nu = nu;
        self
    }

    pub fn with_ell(mut self, ell: usize) -> Self {
        self.ell = ell;
        self
    }

    pub fn with_point(mut self, x0: f64, m: usize) -> Self {
        self.x0 = x0;
        self.m = m;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    /// Order of the derivative compared on the left-hand side.
    pub fn lhs_order(&self) -> usize {
        match self.tag {
            EstimateTag::Main1_8 | EstimateTag::Tr1 | EstimateTag::MainNew4nnn => self.nu,
            EstimateTag::Tr2 => self.k + self.r,
            _ => 0,
        }
    }

    /// `ceil(alpha) - 1`, the derivative order inside the `Corin` seminorm.
    pub fn corin_nu(&self) -> usize {
        (self.alpha.ceil() as usize).saturating_sub(1)
    }

    /// Checks parameter ranges, and the hypotheses on `Y` that can be read off `Y` alone.
    pub fn validate(&self, y: &NodeMultiset) -> Result<()> {
        use EstimateTag::*;
        let needs_k = !matches!(self.tag, Estwr1 | Corin | Qmonotone);
        if needs_k && self.k == 0 {
            return Err(Error::param("k", "must be at least 1"));
        }
        match self.tag {
            Main1_8 | MainNew4nnn => {
                if self.nu > self.r {
                    return Err(Error::param("nu", format!("need nu <= r = {}, got {}", self.r, self.nu)));
                }
                if self.ell == 0 || self.ell > self.k {
                    return Err(Error::param("ell", format!("need 1 <= ell <= k = {}, got {}", self.k, self.ell)));
                }
            }
            Tr1 if self.nu > self.r => {
                return Err(Error::param("nu", format!("need nu <= r = {}, got {}", self.r, self.nu)));
            }
            _ => {}
        }
        if matches!(self.tag, MainGen4g | MainNew4nnn) {
            if self.m > self.r {
                return Err(Error::param("m", format!("need m <= r = {}, got {}", self.r, self.m)));
            }
            if !(self.x0.abs() <= 1.0) {
                return Err(Error::param("x0", format!("must lie in [-1, 1], got {}", self.x0)));
            }
        }
        if self.tag == Main1_8 {
            for end in [-1.0, 1.0] {
                if y.multiplicity_at(end) < self.r + 1 {
                    return Err(Error::Precondition(format!(
                        "MAIN_1_8 needs Hermite data of order r = {} at {end}, Y has multiplicity {}",
                        self.r,
                        y.multiplicity_at(end)
                    )));
                }
            }
        }
        if matches!(self.tag, MainNew1_78 | An222) && y.max_multiplicity() > self.r + 1 {
            return Err(Error::Precondition(format!(
                "node multiplicities must not exceed r + 1 = {}",
                self.r + 1
            )));
        }
        if matches!(self.tag, Estwr1 | Corin) {
            if y.is_empty() {
                return Err(Error::Precondition("the node set Z is empty".into()));
            }
            if self.tag == Estwr1 && self.r == 0 {
                return Err(Error::param("r", "must be at least 1"));
            }
            if self.tag == Corin && !(self.alpha > 0.0 && self.alpha.is_finite()) {
                return Err(Error::param("alpha", format!("must be positive, got {}", self.alpha)));
            }
        }
        Ok(())
    }
}
