//! The piecewise polynomial `S` on a Chebyshev partition.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermite::{whitney_local, NodeMultiset};
use crate::numcore::{ChebPartition, EvalGrid, Interval};
use crate::poly::ChebPoly;
use crate::smoothness::{omega_k, FunctionModel};

/// A maximal run of consecutive cells that meet `Y`, covering cells `first..=last`.
#[derive(Debug, Clone, Serialize)]
pub struct SpecialInterval {
    pub first: usize,
    pub last: usize,
    pub domain: Interval,
    /// `Y` restricted to the run.
    pub nodes: NodeMultiset,
    /// The same nodes padded with simple points to `k + r` in total.
    pub padded: NodeMultiset,
}

/// One local polynomial and its measured fit.
#[derive(Debug, Clone, Serialize)]
pub struct LocalFit {
    pub domain: Interval,
    pub hermite: bool,
    /// Grid sup of `|g - p|` on the domain.
    pub err: f64,
    /// `|J|^r omega_k(g^{(r)}, |J|; J)`.
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct PiecewiseS {
    partition: ChebPartition,
    k: usize,
    r: usize,
    k_eff: usize,
    pieces: Vec<ChebPoly>,
    fits: Vec<LocalFit>,
    /// `cell_piece[i]` indexes `pieces` for cell `I_i`; entry 0 is unused.
    cell_piece: Vec<usize>,
    special: Vec<SpecialInterval>,
    lambda: Vec<usize>,
    threshold: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct SOptions {
    /// Grid points per local domain for the fit and its error report.
    pub local_grid: usize,
}

impl Default for SOptions {
    fn default() -> Self {
        SOptions { local_grid: 33 }
    }
}

/// Builds `S` for a function `g` whose Hermite data on `Y` vanish.
///
/// The local degree is `k + r - 1`, with `k` raised to `s - r` when `s > k + r`.
/// Fails when some run of occupied cells is longer than `2r + 2` cells or holds
/// more than `r + 1` nodes, i.e. when `n` is too small for `Y`.
pub fn build_s(g: &FunctionModel, y: &NodeMultiset, k: usize, r: usize, n: usize, opts: SOptions) -> Result<PiecewiseS> {
    if k == 0 {
        return Err(Error::param("k", "must be at least 1"));
    }
    if r > g.r_max() {
        return Err(Error::Precondition(format!("{} is not in C^{r}", g.label())));
    }
    if y.max_multiplicity() > r + 1 {
        return Err(Error::Precondition(format!("multiplicities above r + 1 = {} in Y = {y}", r + 1)));
    }
    let partition = ChebPartition::new(n)?;
    let k_eff = k.max(y.s().saturating_sub(r));
    let deg = k_eff + r - 1;
    let ys = y.distinct();

    let occupied: Vec<bool> = (0..=n)
        .map(|i| {
            i > 0 && {
                let (a, b) = (partition.node(i), partition.node(i - 1));
                ys.iter().any(|&v| v >= a && v <= b)
            }
        })
        .collect();

    let mut special = Vec::new();
    let mut i = 1;
    while i <= n {
        if !occupied[i] {
            i += 1;
            continue;
        }
        let first = i;
        while i < n && occupied[i + 1] {
            i += 1;
        }
        let last = i;
        let domain = Interval {
            a: partition.node(last),
            b: partition.node(first - 1),
        };
        let nodes = y.restrict(domain.a, domain.b);
        if last + 1 - first > 2 * r + 2 || nodes.s() > r + 1 {
            return Err(Error::Precondition(format!(
                "n = {n} is too small for Y = {y}: cells {first}..={last} hold {} nodes (at most r + 1 = {} allowed in at most 2r + 2 cells)",
                nodes.s(),
                r + 1
            )));
        }
        special.push((first, last, domain, nodes));
        i += 1;
    }

    let mut cell_piece = vec![usize::MAX; n + 1];
    for (idx, (first, last, ..)) in special.iter().enumerate() {
        for c in *first..=*last {
            cell_piece[c] = idx;
        }
    }
    let mut plain: Vec<usize> = Vec::new();
    for c in 1..=n {
        if cell_piece[c] == usize::MAX {
            cell_piece[c] = special.len() + plain.len();
            plain.push(c);
        }
    }

    let herm: Vec<Result<(SpecialInterval, ChebPoly, LocalFit)>> = special
        .par_iter()
        .map(|(first, last, domain, nodes)| {
            let rep = whitney_local(g, nodes, *domain, r, Some(k_eff + r), None, opts.local_grid)?;
            let fit = LocalFit {
                domain: *domain,
                hermite: true,
                err: rep.err,
                bound: rep.bound,
                ratio: rep.ratio,
            };
            let si = SpecialInterval {
                first: *first,
                last: *last,
                domain: *domain,
                nodes: nodes.clone(),
                padded: rep.nodes,
            };
            Ok((si, rep.poly, fit))
        })
        .collect();
    let whit: Vec<Result<(ChebPoly, LocalFit)>> = plain
        .par_iter()
        .map(|&c| whitney_fit(g, partition.interval(c)?, deg, k_eff, r, opts.local_grid))
        .collect();

    let mut pieces = Vec::with_capacity(n);
    let mut fits = Vec::with_capacity(n);
    let mut specials = Vec::with_capacity(herm.len());
    for h in herm {
        let (si, p, fit) = h?;
        specials.push(si);
        pieces.push(p);
        fits.push(fit);
    }
    for w in whit {
        let (p, fit) = w?;
        pieces.push(p);
        fits.push(fit);
    }

    let lambda = (1..n)
        .filter(|&i| !specials.iter().any(|o| o.first <= i && i < o.last))
        .collect();
    let threshold = y.lambda_r(r).map(|lam| 50.0 * (r + 1) as f64 / lam);
    Ok(PiecewiseS {
        partition,
        k,
        r,
        k_eff,
        pieces,
        fits,
        cell_piece,
        special: specials,
        lambda,
        threshold,
    })
}

/// Discrete least squares of degree `deg` at Lobatto points of `cell`.
fn whitney_fit(g: &FunctionModel, cell: Interval, deg: usize, k: usize, r: usize, pts: usize) -> Result<(ChebPoly, LocalFit)> {
    let m = (4 * (deg + 1)).max(pts);
    let full = ChebPoly::interpolate(cell, m, |x| g.eval(x));
    let c: Vec<f64> = full.coeffs().iter().copied().take(deg + 1).collect();
    let p = ChebPoly::on(cell, c);
    let grid = EvalGrid::uniform(cell, pts.max(2))?.with_extra(g.features());
    let err = grid
        .points()
        .iter()
        .map(|&x| (g.eval(x) - p.eval(x)).abs())
        .fold(0.0, f64::max);
    let h = cell.len();
    let bound = h.powi(r as i32) * omega_k(g, r, k, h, cell, &grid)?;
    let ratio = if err == 0.0 {
        0.0
    } else if bound == 0.0 {
        f64::INFINITY
    } else {
        err / bound
    };
    Ok((
        p,
        LocalFit {
            domain: cell,
            hermite: false,
            err,
            bound,
            ratio,
        },
    ))
}

impl PiecewiseS {
    pub fn partition(&self) -> &ChebPartition {
        &self.partition
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// The modulus order actually used, `max(k, s - r)`.
    pub fn k_eff(&self) -> usize {
        self.k_eff
    }

    pub fn pieces(&self) -> &[ChebPoly] {
        &self.pieces
    }

    pub fn fits(&self) -> &[LocalFit] {
        &self.fits
    }

    /// `p_i`, the polynomial used on cell `I_i`.
    pub fn piece(&self, i: usize) -> &ChebPoly {
        &self.pieces[self.cell_piece[i]]
    }

    pub(crate) fn piece_index(&self, i: usize) -> usize {
        self.cell_piece[i]
    }

    pub fn special(&self) -> &[SpecialInterval] {
        &self.special
    }

    /// Nodes `x_i`, `1 <= i < n`, not interior to a special interval.
    pub fn lambda(&self) -> &[usize] {
        &self.lambda
    }

    /// `50 (r + 1) / Lambda_r(Y)` when `Lambda_r(Y)` is defined.
    pub fn threshold(&self) -> Option<f64> {
        self.threshold
    }

    /// Right-continuous evaluation of `S`.
    pub fn eval(&self, x: f64) -> f64 {
        self.piece(self.partition.locate(x)).eval(x)
    }

    /// Largest `err / bound` over the local fits.
    pub fn max_local_ratio(&self) -> f64 {
        self.fits.iter().map(|f| f.ratio).fold(0.0, f64::max)
    }
}
