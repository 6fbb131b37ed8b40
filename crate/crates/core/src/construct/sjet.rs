//! Fixed-capacity Taylor jets for the inner loops of the assembly.

pub(crate) const MAX_ORDER: usize = 7;

#[derive(Debug, Clone, Copy)]
pub(crate) struct SJet {
    c: [f64; MAX_ORDER + 1],
    d: usize,
}

const INV_FACT: [f64; MAX_ORDER + 1] = [
    1.0,
    1.0,
    0.5,
    1.0 / 6.0,
    1.0 / 24.0,
    1.0 / 120.0,
    1.0 / 720.0,
    1.0 / 5040.0,
];
const FACT: [f64; MAX_ORDER + 1] = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0];

impl SJet {
    pub fn constant(v: f64, d: usize) -> Self {
        let mut c = [0.0; MAX_ORDER + 1];
        c[0] = v;
        SJet { c, d }
    }

    /// From `g(x), g'(x), ...`; `derivs.len() == d + 1`.
    pub fn from_derivatives(derivs: &[f64]) -> Self {
        let d = derivs.len() - 1;
        let mut c = [0.0; MAX_ORDER + 1];
        for (m, v) in derivs.iter().enumerate() {
            c[m] = v * INV_FACT[m];
        }
        SJet { c, d }
    }

    /// Value `v` with derivatives `s * derivs[1..]`.
    pub fn affine(v: f64, derivs: &[f64], s: f64, d: usize) -> Self {
        let mut c = [0.0; MAX_ORDER + 1];
        c[0] = v;
        for m in 1..=d {
            c[m] = s * derivs[m] * INV_FACT[m];
        }
        SJet { c, d }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn is_zero(&self) -> bool {
        self.c[..=self.d].iter().all(|&v| v == 0.0)
    }

    pub fn add_derivatives_to(&self, out: &mut [f64]) {
        for (m, o) in out.iter_mut().enumerate().take(self.d + 1) {
            *o += self.c[m] * FACT[m];
        }
    }

    pub fn mul(&self, o: &SJet) -> SJet {
        let d = self.d.min(o.d);
        let mut c = [0.0; MAX_ORDER + 1];
        for m in 0..=d {
            let mut acc = 0.0;
            for i in 0..=m {
                acc += self.c[i] * o.c[m - i];
            }
            c[m] = acc;
        }
        SJet { c, d }
    }

    pub fn powi(&self, e: usize) -> SJet {
        let mut out = SJet::constant(1.0, self.d);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn add(&self, o: &SJet) -> SJet {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(o.c.iter()) {
            *a += b;
        }
        SJet { c, d: self.d.min(o.d) }
    }

    pub fn scale(&self, s: f64) -> SJet {
        let mut c = self.c;
        c.iter_mut().for_each(|a| *a *= s);
        SJet { c, d: self.d }
    }

    pub fn shift(&self, s: f64) -> SJet {
        let mut c = self.c;
        c[0] += s;
        SJet { c, d: self.d }
    }

    /// `1 - (1 - self)(1 - o)`, accurate when both are small.
    pub fn union(&self, o: &SJet) -> SJet {
        self.add(o).add(&self.mul(o).scale(-1.0))
    }
}
