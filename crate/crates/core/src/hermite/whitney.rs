use serde::Serialize;

use super::{hermite_interpolant_on, NodeMultiset};
use crate::error::{Error, Result};
use crate::numcore::{EvalGrid, Interval};
use crate::poly::ChebPoly;
use crate::smoothness::{omega_k, FunctionModel};

#[derive(Debug, Clone, Serialize)]
pub struct WhitneyReport {
    #[serde(skip)]
    pub poly: ChebPoly,
    pub nodes: NodeMultiset,
    /// Grid sup of `|f - L|` on `[a, b]`.
    pub err: f64,
    /// `(b - a)^r omega_{s-r}(f^{(r)}, b - a; [a, b])`.
    pub bound: f64,
    pub ratio: f64,
}

/// Adds simple nodes to `y` until it has `target` points, each placed where
/// it is farthest from the current distinct nodes (the ends of `[a, b]` included as candidates).
pub fn pad_nodes(y: &NodeMultiset, domain: Interval, target: usize) -> NodeMultiset {
    let mut pts: Vec<f64> = y.distinct().to_vec();
    let mut out = y.clone();
    while out.s() < target {
        let mut best = (f64::NEG_INFINITY, domain.a);
        if pts.is_empty() {
            best = (0.0, domain.a);
        } else {
            let first = pts[0];
            let last = *pts.last().unwrap();
            if first - domain.a > best.0 {
                best = (first - domain.a, domain.a);
            }
            if domain.b - last > best.0 {
                best = (domain.b - last, domain.b);
            }
            for w in pts.windows(2) {
                let half = 0.5 * (w[1] - w[0]);
                if half > best.0 {
                    best = (half, w[0] + half);
                }
            }
        }
        if best.0 <= 0.0 && !pts.is_empty() {
            // the interval is saturated; nothing sensible to add
            break;
        }
        out = out.adjoin(&[best.1], 1);
        pts = out.distinct().to_vec();
    }
    out
}

/// Local Hermite interpolation error against the modulus-based bound.
///
/// With `pad_to` the node set is first filled up to that many points. When
/// `lambda` is given and `s >= r + 2`, the separation `Lambda_r(Y) >= lambda (b - a)` is enforced.
pub fn whitney_local(
    f: &FunctionModel,
    y: &NodeMultiset,
    domain: Interval,
    r: usize,
    pad_to: Option<usize>,
    lambda: Option<f64>,
    grid_points: usize,
) -> Result<WhitneyReport> {
    if y.distinct().iter().any(|&z| !domain.contains(z)) {
        return Err(Error::Domain(format!("nodes {y} leave [{}, {}]", domain.a, domain.b)));
    }
    let nodes = match pad_to {
        Some(t) => pad_nodes(y, domain, t),
        None => y.clone(),
    };
    let s = nodes.s();
    if s < r + 1 {
        return Err(Error::Precondition(format!("need s >= r + 1, got s = {s}, r = {r}")));
    }
    if let (Some(lam), Some(sep)) = (lambda, nodes.lambda_r(r)) {
        if sep < lam * domain.len() {
            return Err(Error::Precondition(format!(
                "separation Lambda_r = {sep:e} below {lam} (b - a)"
            )));
        }
    }
    let poly = hermite_interpolant_on(f, &nodes, domain)?;
    let grid = EvalGrid::uniform(domain, grid_points.max(2))?.with_extra(f.features());
    let err = grid
        .points()
        .iter()
        .map(|&x| (f.eval(x) - poly.eval(x)).abs())
        .fold(0.0, f64::max);
    let h = domain.len();
    let bound = h.powi(r as i32) * omega_k(f, r, s - r, h, domain, &grid)?;
    let ratio = if err == 0.0 {
        0.0
    } else if bound == 0.0 {
        f64::INFINITY
    } else {
        err / bound
    };
    Ok(WhitneyReport {
        poly,
        nodes,
        err,
        bound,
        ratio,
    })
}
