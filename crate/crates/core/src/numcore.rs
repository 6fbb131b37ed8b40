//! Interval geometry, weights, Chebyshev partitions and evaluation grids.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Domain(format!("interval needs a < b, got [{a}, {b}]")));
        }
        Ok(Interval { a, b })
    }

    /// The reference interval [-1, 1].
    pub const fn unit() -> Self {
        Interval { a: -1.0, b: 1.0 }
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    /// Maps `x` in `self` to `[-1, 1]`.
    pub fn to_unit(&self, x: f64) -> f64 {
        (2.0 * x - self.a - self.b) / self.len()
    }

    pub fn from_unit(&self, t: f64) -> f64 {
        0.5 * (self.a + self.b) + 0.5 * self.len() * t
    }

    pub fn dist(&self, x: f64) -> f64 {
        if x < self.a {
            self.a - x
        } else if x > self.b {
            x - self.b
        } else {
            0.0
        }
    }
}

/// `sqrt(1 - x^2)`, computed as `sqrt((1-x)(1+x))` to keep accuracy near the ends.
pub fn phi(x: f64) -> f64 {
    ((1.0 - x) * (1.0 + x)).max(0.0).sqrt()
}

/// The weight `rho_n(x) = sqrt(1-x^2)/n + 1/n^2`, with `rho_0 = 1`.
pub fn rho(n: usize, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(Error::Domain(format!("rho requires |x| <= 1, got {x}")));
    }
    Ok(rho_unchecked(n, x))
}

#[inline]
pub(crate) fn rho_unchecked(n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let nf = n as f64;
    phi(x.clamp(-1.0, 1.0)) / nf + 1.0 / (nf * nf)
}

/// The endpoint zones `[-1, -1 + n^-2]` and `[1 - n^-2, 1]`.
pub fn endpoint_zone(n: usize) -> Result<(Interval, Interval)> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    let h = 1.0 / (n as f64 * n as f64);
    Ok((
        Interval { a: -1.0, b: -1.0 + h },
        Interval { a: 1.0 - h, b: 1.0 },
    ))
}

pub fn in_endpoint_zone(n: usize, x: f64) -> bool {
    let h = 1.0 / (n as f64 * n as f64);
    x.abs() >= 1.0 - h
}

/// Chebyshev partition `x_j = cos(j pi / n)`, `0 <= j <= n`.
///
/// Nodes are computed as `sin((n - 2j) pi / (2n))`, which is exactly
/// antisymmetric and gives an exact zero for the middle node of even `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChebPartition {
    n: usize,
    nodes: Vec<f64>,
}

impl ChebPartition {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "partition needs n >= 1"));
        }
        let nodes = (0..=n).map(|j| cheb_node(n, j)).collect();
        Ok(ChebPartition { n, nodes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, j: usize) -> f64 {
        self.nodes[j]
    }

    /// `I_j = [x_j, x_{j-1}]` for `1 <= j <= n`.
    pub fn interval(&self, j: usize) -> Result<Interval> {
        self.check_index(j)?;
        Ok(Interval {
            a: self.nodes[j],
            b: self.nodes[j - 1],
        })
    }

    pub fn interval_len(&self, j: usize) -> f64 {
        self.nodes[j - 1] - self.nodes[j]
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.n {
            return Err(Error::param("j", format!("index {j} outside 1..={}", self.n)));
        }
        Ok(())
    }

    /// Returns `(psi_j(x), chi_j(x))`.
    pub fn psi_chi(&self, j: usize, x: f64) -> Result<(f64, u8)> {
        self.check_index(j)?;
        Ok((self.psi(j, x), self.chi(j, x)))
    }

    pub fn psi(&self, j: usize, x: f64) -> f64 {
        let h = self.interval_len(j);
        h / ((x - self.nodes[j]).abs() + h)
    }

    pub fn chi(&self, j: usize, x: f64) -> u8 {
        u8::from(x >= self.nodes[j])
    }

    /// Index `j` with `x in I_j`, choosing the interval to the right at interior nodes.
    pub fn locate(&self, x: f64) -> usize {
        if x >= 1.0 {
            return 1;
        }
        if x <= -1.0 {
            return self.n;
        }
        // nodes decrease; find the first j with x_j <= x
        let j = self.nodes.partition_point(|&node| node > x);
        j.clamp(1, self.n)
    }
}

pub(crate) fn cheb_node(n: usize, j: usize) -> f64 {
    let k = n as f64 - 2.0 * j as f64;
    if k == 0.0 {
        0.0
    } else {
        (k * PI / (2.0 * n as f64)).sin()
    }
}

/// Sorted, deduplicated sample points inside an interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalGrid {
    domain: Interval,
    points: Vec<f64>,
    density: usize,
}

impl EvalGrid {
    pub fn from_points(domain: Interval, mut points: Vec<f64>) -> Result<Self> {
        points.retain(|x| x.is_finite() && domain.contains(*x));
        points.sort_by(f64::total_cmp);
        points.dedup();
        if points.is_empty() {
            return Err(Error::EmptyGrid);
        }
        Ok(EvalGrid {
            domain,
            points,
            density: 0,
        })
    }

    pub fn uniform(domain: Interval, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::param("count", "uniform grid needs at least 2 points"));
        }
        let h = domain.len() / (count - 1) as f64;
        let pts = (0..count)
            .map(|i| if i + 1 == count { domain.b } else { domain.a + h * i as f64 })
            .collect();
        Self::from_points(domain, pts)
    }

    /// Chebyshev-Lobatto points `sin(pi (m - 2i) / (2m))` on `[-1, 1]`, mapped to `domain`.
    pub fn lobatto(domain: Interval, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::param("m", "needs at least one panel"));
        }
        let pts = (0..=m).map(|i| domain.from_unit(cheb_node(m, i))).collect();
        Self::from_points(domain, pts)
    }

    /// Grid on `[-1, 1]` with at least `g` points per local length `rho_n(x)`.
    pub fn rho_adaptive(n: usize, g: usize) -> Result<Self> {
        if n == 0 || g == 0 {
            return Err(Error::param("n, g", "must be positive"));
        }
        let mut pts = Vec::new();
        let mut x = -1.0;
        while x < 1.0 {
            pts.push(x);
            // step with the smaller weight of the two ends of the step
            let h0 = rho_unchecked(n, x) / g as f64;
            let xm = (x + h0).min(1.0);
            let h = (rho_unchecked(n, xm).min(rho_unchecked(n, x))) / g as f64;
            x += h;
        }
        pts.push(1.0);
        let mut grid = Self::from_points(Interval::unit(), pts)?;
        grid.density = g;
        Ok(grid)
    }

    pub fn with_extra(&self, extra: &[f64]) -> Self {
        let mut pts = self.points.clone();
        pts.extend(extra.iter().copied().filter(|x| self.domain.contains(*x)));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        EvalGrid {
            domain: self.domain,
            points: pts,
            density: self.density,
        }
    }

    pub fn restrict(&self, keep: impl Fn(f64) -> bool) -> Result<Self> {
        let pts: Vec<f64> = self.points.iter().copied().filter(|&x| keep(x)).collect();
        if pts.is_empty() {
            return Err(Error::EmptyGrid);
        }
        Ok(EvalGrid {
            domain: self.domain,
            points: pts,
            density: self.density,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn density(&self) -> usize {
        self.density
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
