use serde::Serialize;

/// Shape of a rate function `eps` with `eps(0+) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonBase {
    /// `1 / |ln x|`.
    InvLog,
    /// `x^p`.
    Power(f64),
}

/// `max{ base(x)^exponent, 2 x^{1/floor_k} }`, the floor term present only when `floor_k` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Epsilon {
    pub base: EpsilonBase,
    pub exponent: f64,
    pub floor_k: Option<usize>,
}

impl Epsilon {
    pub fn inv_log() -> Self {
        Epsilon {
            base: EpsilonBase::InvLog,
            exponent: 1.0,
            floor_k: None,
        }
    }

    pub fn power(p: f64) -> Self {
        Epsilon {
            base: EpsilonBase::Power(p),
            exponent: 1.0,
            floor_k: None,
        }
    }

    /// `x^{1/(2k)}`.
    pub fn root(k: usize) -> Self {
        Self::power(1.0 / (2 * k.max(1)) as f64)
    }

    /// Raises the base to the power `e`.
    pub fn pow(mut self, e: f64) -> Self {
        self.exponent *= e;
        self
    }

    /// Replaces `eps` by `max{eps(x), 2 x^{1/k}}`.
    pub fn with_floor(mut self, k: usize) -> Self {
        self.floor_k = Some(k);
        self
    }

    pub fn label(&self) -> String {
        let base = match self.base {
            EpsilonBase::InvLog => "1/|ln x|".to_string(),
            EpsilonBase::Power(p) => format!("x^{p}"),
        };
        let mut s = if self.exponent == 1.0 {
            base
        } else {
            format!("({base})^{}", self.exponent)
        };
        if let Some(k) = self.floor_k {
            s = format!("max{{{s}, 2x^(1/{k})}}");
        }
        s
    }

    /// `ln eps(x)` from `ln x`, for `x` in `(0, 1)`.
    pub fn ln_eval(&self, lx: f64) -> f64 {
        let base = match self.base {
            EpsilonBase::InvLog => -(-lx).ln(),
            EpsilonBase::Power(p) => p * lx,
        };
        let v = self.exponent * base;
        match self.floor_k {
            Some(k) => v.max(std::f64::consts::LN_2 + lx / k as f64),
            None => v,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        self.ln_eval(x.ln()).exp()
    }

    /// `ln` of the smallest `x` with `eps(x) = y`, given `ln y <= 0`.
    ///
    /// Every built-in `eps` is increasing, so this is the inverse function; it
    /// may be `-inf` when the preimage is below the representable range.
    pub fn ln_preimage(&self, ly: f64) -> f64 {
        let lb = ly / self.exponent;
        let v = match self.base {
            EpsilonBase::InvLog => -(-lb).exp(),
            EpsilonBase::Power(p) => lb / p,
        };
        match self.floor_k {
            Some(k) => v.min(k as f64 * (ly - std::f64::consts::LN_2)),
            None => v,
        }
    }
}
