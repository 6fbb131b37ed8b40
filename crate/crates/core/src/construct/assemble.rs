//! Assembly of `P_n = L + p_n + sum_{i in Lambda} (p_i - p_{i+1}) R_i`.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::piecewise::{build_s, PiecewiseS, SOptions};
use super::sjet::{SJet, MAX_ORDER};
use super::step::{check_order, kernel_power, Families, RStep};
use crate::error::{Error, Result};
use crate::hermite::{hermite_interpolant, hermite_residual, HermiteResidual, NodeMultiset};
use crate::numcore::{EvalGrid, Interval};
use crate::poly::{Approximant, ChebPoly};
use crate::smoothness::FunctionModel;

#[derive(Debug, Clone, Copy, Default)]
pub struct ConstructOptions {
    /// Decay order of the steps; `None` picks `k + r + 2` with the effective `k`.
    pub mu: Option<usize>,
    pub s: SOptions,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstructMeta {
    pub k: usize,
    pub r: usize,
    pub n: usize,
    #[serde(rename = "Y")]
    pub y: NodeMultiset,
    pub k_eff: usize,
    pub mu: usize,
    pub kernel_power: usize,
    pub degree: usize,
    pub degree_per_n: f64,
    /// `50 (r + 1) / Lambda_r(Y)`, reported only.
    pub n_threshold: Option<f64>,
    pub steps: usize,
    pub doubled_steps: usize,
}

#[derive(Debug, Clone)]
struct JumpTerm {
    hi: usize,
    lo: usize,
    step: RStep,
}

/// The assembled polynomial, kept in structured form.
///
/// Evaluation uses `P_n = L + S + sum (p_i - p_{i+1}) (R_i - chi_i)`, whose terms are
/// small away from their nodes, so no large telescoping cancellations occur.
#[derive(Debug, Clone)]
pub struct ConstructedPn {
    base: ChebPoly,
    s: PiecewiseS,
    terms: Vec<JumpTerm>,
    meta: ConstructMeta,
}

/// Full pipeline: reduce by `L_{s-1}(f, Y)`, build `S`, assemble.
pub fn construct(
    f: &FunctionModel,
    y: &NodeMultiset,
    k: usize,
    r: usize,
    n: usize,
    opts: ConstructOptions,
) -> Result<ConstructedPn> {
    if r > f.r_max() {
        return Err(Error::Precondition(format!("{} is not in C^{r}", f.label())));
    }
    let base = if y.is_empty() {
        ChebPoly::zero()
    } else {
        hermite_interpolant(f, y)?
    };
    let g = f.minus_poly(&base);
    let s = build_s(&g, y, k, r, n, opts.s)?;
    let mu = opts.mu.unwrap_or(s.k_eff() + r + 2);
    let mut p = assemble_pn(s, y, r, mu)?;
    p.meta.degree = p.meta.degree.max(base.degree());
    p.base = base;
    Ok(p)
}

/// Joins the pieces of `S` with the steps `R_i(x; Y)`.
pub fn assemble_pn(s: PiecewiseS, y: &NodeMultiset, r: usize, mu: usize) -> Result<ConstructedPn> {
    let n = s.n();
    let terms: Vec<JumpTerm> = if n >= 2 {
        let families = Families::new(n, mu)?;
        s.lambda()
            .par_iter()
            .map(|&i| {
                Ok(JumpTerm {
                    hi: s.piece_index(i),
                    lo: s.piece_index(i + 1),
                    step: RStep::plan(s.partition(), i, y, r, &families, true)?,
                })
            })
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    let local = s.pieces().iter().map(ChebPoly::degree).max().unwrap_or(0);
    let degree = terms
        .iter()
        .map(|t| local + t.step.degree())
        .max()
        .unwrap_or(0)
        .max(local);
    let meta = ConstructMeta {
        k: s.k(),
        r,
        n,
        y: y.clone(),
        k_eff: s.k_eff(),
        mu,
        kernel_power: kernel_power(mu),
        degree,
        degree_per_n: degree as f64 / n as f64,
        n_threshold: s.threshold(),
        steps: terms.len(),
        doubled_steps: terms.iter().filter(|t| t.step.kernel().m() != n).count(),
    };
    Ok(ConstructedPn {
        base: ChebPoly::zero(),
        s,
        terms,
        meta,
    })
}

const CHUNK: usize = 16;

impl ConstructedPn {
    pub fn meta(&self) -> &ConstructMeta {
        &self.meta
    }

    pub fn piecewise(&self) -> &PiecewiseS {
        &self.s
    }

    /// The Hermite interpolant `L_{s-1}(f, Y)` added back after the reduction.
    pub fn base(&self) -> &ChebPoly {
        &self.base
    }

    fn evaluate(
        &self,
        xs: &[f64],
        order: usize,
        kernel_values: &(dyn Fn(&RStep) -> Vec<Vec<f64>> + Sync),
    ) -> Vec<Vec<f64>> {
        let piece_d: Vec<Vec<ChebPoly>> = self.s.pieces().iter().map(|p| p.derivatives(order)).collect();
        let base_d = self.base.derivatives(order);
        let part = self.s.partition();
        let mut out: Vec<Vec<f64>> = (0..=order)
            .map(|nu| {
                xs.par_iter()
                    .map(|&x| base_d[nu].eval(x) + piece_d[self.s.piece_index(part.locate(x))][nu].eval(x))
                    .collect()
            })
            .collect();
        for chunk in self.terms.chunks(CHUNK) {
            let fv: Vec<Vec<Vec<f64>>> = chunk.par_iter().map(|t| kernel_values(&t.step)).collect();
            let add: Vec<[f64; MAX_ORDER + 1]> = (0..xs.len())
                .into_par_iter()
                .map(|p| {
                    let x = xs[p];
                    let mut acc = [0.0; MAX_ORDER + 1];
                    let mut d = [0.0; MAX_ORDER + 1];
                    let mut jd = [0.0; MAX_ORDER + 1];
                    for (t, f) in chunk.iter().zip(&fv) {
                        for nu in 0..=order {
                            d[nu] = f[nu][p];
                        }
                        let def = t.step.defect(&d[..=order], x);
                        if def.is_zero() {
                            continue;
                        }
                        for nu in 0..=order {
                            jd[nu] = piece_d[t.hi][nu].eval(x) - piece_d[t.lo][nu].eval(x);
                        }
                        SJet::from_derivatives(&jd[..=order])
                            .mul(&def)
                            .add_derivatives_to(&mut acc);
                    }
                    acc
                })
                .collect();
            for (nu, row) in out.iter_mut().enumerate() {
                for (o, a) in row.iter_mut().zip(&add) {
                    *o += a[nu];
                }
            }
        }
        out
    }

    /// `P^{(nu)}` at arbitrary points; costs `O(degree)` per point and step.
    pub fn derivatives_pointwise(&self, xs: &[f64], order: usize) -> Result<Vec<Vec<f64>>> {
        check_order(order)?;
        Ok(self.evaluate(xs, order, &|st: &RStep| st.kernel().derivatives_at(xs, order)))
    }

    /// `(points, P^{(nu)}(points))` on the `mgrid + 1` Lobatto points of `[-1, 1]`, ascending.
    pub fn lobatto_derivatives(&self, mgrid: usize, order: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        check_order(order)?;
        let grid = EvalGrid::lobatto(Interval::unit(), mgrid)?;
        let xs = grid.points().to_vec();
        let vals = self.evaluate(&xs, order, &|st: &RStep| st.kernel().lobatto_derivatives(mgrid, order));
        Ok((xs, vals))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.evaluate(&[x], 0, &|st: &RStep| vec![vec![st.kernel().eval(x)]])[0][0]
    }

    /// Max relative violation of the Hermite conditions `P^{(nu)}(y_j) = f^{(nu)}(y_j)`.
    pub fn constraint_residual(&self, f: &FunctionModel) -> HermiteResidual {
        hermite_residual(f, &self.meta.y, self)
    }

    /// The explicit Chebyshev series, sampled at enough Lobatto points to be exact.
    pub fn to_cheb(&self) -> Result<ChebPoly> {
        let mgrid = self.meta.degree.max(1).next_power_of_two();
        let (_, mut vals) = self.lobatto_derivatives(mgrid, 0)?;
        let mut v = vals.swap_remove(0);
        v.reverse();
        Ok(ChebPoly::from_lobatto_values(Interval::unit(), &v))
    }

    /// `{basis, degree, coeffs, meta{k, r, n, Y}}`.
    pub fn export_json(&self) -> Result<serde_json::Value> {
        let p = self.to_cheb()?;
        Ok(json!({
            "basis": "chebyshev",
            "degree": p.degree(),
            "coeffs": p.coeffs(),
            "meta": {
                "k": self.meta.k,
                "r": self.meta.r,
                "n": self.meta.n,
                "Y": self.meta.y.to_string(),
            },
        }))
    }
}

fn is_unit_lobatto(xs: &[f64]) -> bool {
    let m = xs.len().saturating_sub(1);
    m >= 1
        && xs
            .iter()
            .enumerate()
            .all(|(i, &x)| x == crate::numcore::cheb_node(m, m - i))
}

impl Approximant for ConstructedPn {
    fn degree(&self) -> usize {
        self.meta.degree
    }

    /// Uses the fast transform path when `xs` are exactly the ascending Lobatto points of `[-1, 1]`.
    fn derivatives_at(&self, xs: &[f64], order: usize) -> Vec<Vec<f64>> {
        let order = order.min(MAX_ORDER);
        if is_unit_lobatto(xs) {
            let m = xs.len() - 1;
            self.evaluate(xs, order, &|st: &RStep| st.kernel().lobatto_derivatives(m, order))
        } else {
            self.evaluate(xs, order, &|st: &RStep| st.kernel().derivatives_at(xs, order))
        }
    }
}

/// `Q = P + (1 + x)/2 (f(1) - P(1)) + (1 - x)/2 (f(-1) - P(-1))`.
///
/// Only the constant and linear Chebyshev coefficients change.
pub fn boolean_sum_endpoint(f: &FunctionModel, p: &ChebPoly) -> ChebPoly {
    let g1 = f.eval(1.0) - p.eval(1.0);
    let gm = f.eval(-1.0) - p.eval(-1.0);
    let (even, odd) = (0.5 * (g1 + gm), 0.5 * (g1 - gm));
    let dom = p.domain();
    let (mid, half) = (dom.mid(), 0.5 * dom.len());
    let mut c = p.coeffs().to_vec();
    c.resize(c.len().max(2), 0.0);
    c[0] += even + odd * mid;
    c[1] += odd * half;
    ChebPoly::on(dom, c)
}
