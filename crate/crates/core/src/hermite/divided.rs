use serde::Serialize;

use super::NodeMultiset;
use crate::error::{Error, Result};
use crate::numcore::Interval;
use crate::poly::{Approximant, ChebPoly};
use crate::smoothness::FunctionModel;

/// Relative gap below which two distinct nodes make the tableau unreliable.
pub const NEAR_COINCIDENT: f64 = 1e-12;

fn check_nodes(f: &FunctionModel, sorted: &[f64]) -> Result<()> {
    let mut run = 0usize;
    for i in 0..sorted.len() {
        if i > 0 && sorted[i] == sorted[i - 1] {
            run += 1;
        } else {
            run = 1;
            if i > 0 {
                let gap = sorted[i] - sorted[i - 1];
                if gap < NEAR_COINCIDENT * sorted[i].abs().max(1.0) {
                    return Err(Error::IllConditioned(format!(
                        "distinct nodes {} and {} are closer than {NEAR_COINCIDENT:e}",
                        sorted[i - 1],
                        sorted[i]
                    )));
                }
            }
        }
        if run > f.r_max() + 1 {
            return Err(Error::Precondition(format!(
                "node {} has multiplicity {run} but {} has derivatives only up to order {}",
                sorted[i],
                f.label(),
                f.r_max()
            )));
        }
    }
    Ok(())
}

/// Newton coefficients `[y_0, ..., y_j; f]`, `j = 0..s`, of a sorted node list.
///
/// Coincident blocks take `f^{(j)}(y) / j!`.
pub fn newton_coefficients(f: &FunctionModel, sorted: &[f64]) -> Result<Vec<f64>> {
    check_nodes(f, sorted)?;
    let s = sorted.len();
    let mut v: Vec<f64> = sorted.iter().map(|&y| f.eval(y)).collect();
    let mut out = Vec::with_capacity(s);
    if s == 0 {
        return Ok(out);
    }
    out.push(v[0]);
    let mut fact = 1.0;
    for j in 1..s {
        fact *= j as f64;
        for i in (j..s).rev() {
            let (a, b) = (sorted[i - j], sorted[i]);
            v[i] = if a == b {
                f.deriv(j, b) / fact
            } else {
                (v[i] - v[i - 1]) / (b - a)
            };
        }
        out.push(v[j]);
    }
    Ok(out)
}

/// `[y_0, ..., y_m; f]` for nodes in any order.
pub fn divided_difference(f: &FunctionModel, nodes: &[f64]) -> Result<f64> {
    if nodes.is_empty() {
        return Err(Error::param("nodes", "need at least one node"));
    }
    let mut sorted = nodes.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(*newton_coefficients(f, &sorted)?.last().unwrap())
}

pub(crate) fn newton_eval(coeffs: &[f64], nodes: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for j in (0..coeffs.len()).rev() {
        acc = acc * (x - nodes[j]) + coeffs[j];
    }
    acc
}

/// `p (x - y)` for `p` on its own domain.
pub(crate) fn mul_root(p: &ChebPoly, y: f64) -> ChebPoly {
    let d = p.domain();
    // x - y = h t + (mid - y) in the unit variable t
    let lin = ChebPoly::on(d, vec![d.mid() - y, 0.5 * d.len()]);
    p.mul(&lin)
}

/// Hermite interpolant of degree `<= s - 1` on `[-1, 1]`.
pub fn hermite_interpolant(f: &FunctionModel, y: &NodeMultiset) -> Result<ChebPoly> {
    hermite_interpolant_on(f, y, Interval::unit())
}

/// Hermite interpolant expressed in Chebyshev form on `domain`.
pub fn hermite_interpolant_on(f: &FunctionModel, y: &NodeMultiset, domain: Interval) -> Result<ChebPoly> {
    let nodes = y.flat();
    let c = newton_coefficients(f, nodes)?;
    Ok(newton_to_cheb(&c, nodes, domain))
}

pub(crate) fn newton_to_cheb(c: &[f64], nodes: &[f64], domain: Interval) -> ChebPoly {
    let Some(&top) = c.last() else {
        return ChebPoly::zero_on(domain);
    };
    let mut p = ChebPoly::on(domain, vec![top]);
    for j in (0..c.len() - 1).rev() {
        p = mul_root(&p, nodes[j]).add(&ChebPoly::on(domain, vec![c[j]]));
    }
    p
}

#[derive(Debug, Clone, Serialize)]
pub struct HermiteResidual {
    /// Max of `|P^{(nu)}(z) - f^{(nu)}(z)| / max(|f^{(nu)}(z)|, 1)` over all constraints.
    pub max_rel_err: f64,
    pub worst_node: Option<f64>,
    pub worst_order: usize,
}

/// Checks `P^{(nu)}(z_i) = f^{(nu)}(z_i)` for `nu < m_i`.
pub fn hermite_residual<P: Approximant + ?Sized>(f: &FunctionModel, y: &NodeMultiset, p: &P) -> HermiteResidual {
    let mut out = HermiteResidual {
        max_rel_err: 0.0,
        worst_node: None,
        worst_order: 0,
    };
    for (&z, &m) in y.distinct().iter().zip(y.multiplicities()) {
        let ds = p.derivatives_at(&[z], m - 1);
        for (nu, d) in ds.iter().enumerate() {
            let target = f.deriv(nu, z);
            let err = (d[0] - target).abs() / target.abs().max(1.0);
            if err > out.max_rel_err || out.worst_node.is_none() {
                out = HermiteResidual {
                    max_rel_err: err.max(out.max_rel_err),
                    worst_node: Some(z),
                    worst_order: nu,
                };
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct RemainderCheck {
    /// `f(x) - L(x)`.
    pub lhs: f64,
    /// `[x, y_0, ..., y_{s-1}; f] prod (x - y_j)`.
    pub rhs: f64,
    /// `|lhs - rhs| / max(|f(x)|, |L(x)|)`, the scale at which `lhs` is computed.
    pub rel_err: f64,
}

/// Compares both sides of `f(x) - L(x) = [x, Y; f] prod (x - y_j)`.
pub fn remainder_identity_check(f: &FunctionModel, y: &NodeMultiset, x: f64) -> Result<RemainderCheck> {
    if y.flat().contains(&x) {
        return Err(Error::Precondition(format!("x = {x} coincides with a node")));
    }
    let nodes = y.flat();
    let c = newton_coefficients(f, nodes)?;
    let fx = f.eval(x);
    let lx = newton_eval(&c, nodes, x);
    let lhs = fx - lx;
    let mut all = nodes.to_vec();
    all.push(x);
    let dd = divided_difference(f, &all)?;
    let rhs = dd * nodes.iter().map(|y| x - y).product::<f64>();
    let scale = fx.abs().max(lx.abs()).max(f64::MIN_POSITIVE);
    Ok(RemainderCheck {
        lhs,
        rhs,
        rel_err: (lhs - rhs).abs() / scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divided_difference_examples() {
        let sq = FunctionModel::polynomial(&[0.0, 0.0, 1.0]);
        assert_eq!(divided_difference(&sq, &[1.0, 1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(divided_difference(&sq, &[0.0, 1.0]).unwrap(), 1.0);
        assert_eq!(divided_difference(&sq, &[0.0, 0.0, 1.0]).unwrap(), 1.0);
        let half = FunctionModel::abspow(0.5).unwrap();
        assert!(matches!(
            divided_difference(&half, &[0.2, 0.2]),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            divided_difference(&sq, &[0.3, 0.3 + 1e-14]),
            Err(Error::IllConditioned(_))
        ));
    }

    #[test]
    fn interpolant_examples() {
        let cubic = FunctionModel::polynomial(&[1.0, -1.0, 0.5, 2.0]);
        let y = NodeMultiset::parse("-0.5:2,0.25:1,0.9:1").unwrap();
        let p = hermite_interpolant(&cubic, &y).unwrap();
        let exact = ChebPoly::from_monomial(&[1.0, -1.0, 0.5, 2.0]);
        for (a, b) in p.coeffs().iter().zip(exact.coeffs()) {
            assert!((a - b).abs() < 1e-10);
        }
        let taylor = hermite_interpolant(&FunctionModel::sin(1.0), &NodeMultiset::parse("0:2").unwrap()).unwrap();
        assert!(taylor.coeff(0).abs() < 1e-16);
        assert!((taylor.coeff(1) - 1.0).abs() < 1e-16);
        assert_eq!(taylor.degree(), 1);
    }

    #[test]
    fn interpolant_against_barycentric_oracle() {
        let f = FunctionModel::exp();
        let y = NodeMultiset::parse("-1,0,1").unwrap();
        let p = hermite_interpolant(&f, &y).unwrap();
        let nodes = [-1.0f64, 0.0, 1.0];
        let w: Vec<f64> = (0..3)
            .map(|j| 1.0 / (0..3).filter(|&k| k != j).map(|k| nodes[j] - nodes[k]).product::<f64>())
            .collect();
        for i in 0..=400 {
            let x = -1.0 + i as f64 / 200.0;
            let oracle = if let Some(j) = nodes.iter().position(|&v| v == x) {
                nodes[j].exp()
            } else {
                let num: f64 = (0..3).map(|j| w[j] / (x - nodes[j]) * nodes[j].exp()).sum();
                let den: f64 = (0..3).map(|j| w[j] / (x - nodes[j])).sum();
                num / den
            };
            assert!((p.eval(x) - oracle).abs() < 1e-10);
        }
    }

    #[test]
    fn remainder_examples() {
        let f = FunctionModel::exp();
        let y = NodeMultiset::parse("0,1").unwrap();
        assert!(remainder_identity_check(&f, &y, 0.5).unwrap().rel_err < 1e-9);
        let g = FunctionModel::abspow(2.5).unwrap();
        let y = NodeMultiset::parse("-0.5,0.5").unwrap();
        assert!(remainder_identity_check(&g, &y, 0.0).unwrap().rel_err < 1e-9);
        let lin = FunctionModel::polynomial(&[2.0, 3.0]);
        let rc = remainder_identity_check(&lin, &y, 0.1).unwrap();
        assert!(rc.lhs.abs() < 1e-15 && rc.rhs.abs() < 1e-15);
    }
}
