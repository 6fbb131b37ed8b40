use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Interpolation nodes with multiplicities.
///
/// Distinct points `z_0 < ... < z_{mu-1}` with multiplicities `m_i >= 1`,
/// and the flat sorted list `y_0 <= ... <= y_{s-1}` where each `z_i`
/// appears `m_i` times.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NodeMultiset {
    z: Vec<f64>,
    m: Vec<usize>,
    flat: Vec<f64>,
}

impl NodeMultiset {
    pub fn new(z: Vec<f64>, m: Vec<usize>) -> Result<Self> {
        if z.len() != m.len() {
            return Err(Error::param("multiplicities", "length differs from the node list"));
        }
        if z.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("nodes", "must be finite"));
        }
        if m.contains(&0) {
            return Err(Error::param("multiplicities", "must be at least 1"));
        }
        if z.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::param("nodes", "must be strictly increasing"));
        }
        let flat = z
            .iter()
            .zip(&m)
            .flat_map(|(&zi, &mi)| std::iter::repeat_n(zi, mi))
            .collect();
        Ok(NodeMultiset { z, m, flat })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Groups equal values of an arbitrary list.
    pub fn from_flat(ys: &[f64]) -> Result<Self> {
        let mut v = ys.to_vec();
        if v.iter().any(|y| !y.is_finite()) {
            return Err(Error::param("nodes", "must be finite"));
        }
        v.sort_by(f64::total_cmp);
        let mut z: Vec<f64> = Vec::new();
        let mut m: Vec<usize> = Vec::new();
        for y in v {
            if z.last() == Some(&y) {
                *m.last_mut().unwrap() += 1;
            } else {
                z.push(y);
                m.push(1);
            }
        }
        Self::new(z, m)
    }

    /// Parses `"z:m,z:m,..."`; a bare `z` means multiplicity 1 and the empty string gives no nodes.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(Self::empty());
        }
        let mut pairs = Vec::new();
        for (idx, item) in spec.split(',').enumerate() {
            let item = item.trim();
            let bad = |what: &str| Error::Parse {
                line: 1,
                field: format!("Y[{idx}]"),
                reason: format!("{what} in `{item}`"),
            };
            let (zs, ms) = match item.rsplit_once(':') {
                Some((a, b)) => (a, b),
                None => (item, "1"),
            };
            let z: f64 = zs.trim().parse().map_err(|_| bad("bad node"))?;
            let m: usize = ms.trim().parse().map_err(|_| bad("bad multiplicity"))?;
            if m == 0 {
                return Err(bad("zero multiplicity"));
            }
            if !z.is_finite() {
                return Err(bad("non-finite node"));
            }
            pairs.push((z, m));
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Parse {
                line: 1,
                field: "Y".into(),
                reason: format!("repeated node in `{spec}`"),
            });
        }
        let (z, m) = pairs.into_iter().unzip();
        Self::new(z, m)
    }

    pub fn distinct(&self) -> &[f64] {
        &self.z
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.m
    }

    pub fn flat(&self) -> &[f64] {
        &self.flat
    }

    /// Total count `s` with multiplicity.
    pub fn s(&self) -> usize {
        self.flat.len()
    }

    /// Number of distinct nodes.
    pub fn mu(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.m.iter().copied().max().unwrap_or(0)
    }

    pub fn multiplicity_at(&self, x: f64) -> usize {
        self.z
            .iter()
            .position(|&z| z == x)
            .map_or(0, |i| self.m[i])
    }

    /// `l_j`: the number of `i <= j` with `y_i = y_j` (so `l_j - 1` is the derivative order constrained at `y_j`).
    pub fn l(&self, j: usize) -> usize {
        let y = self.flat[j];
        self.flat[..=j].iter().filter(|&&v| v == y).count()
    }

    /// `min_j (y_{j+r+1} - y_j)`, defined when `s >= r + 2`.
    pub fn lambda_r(&self, r: usize) -> Option<f64> {
        let s = self.s();
        if s < r + 2 {
            return None;
        }
        (0..=s - r - 2)
            .map(|j| self.flat[j + r + 1] - self.flat[j])
            .reduce(f64::min)
    }

    /// Smallest gap between distinct nodes, defined when there are at least two.
    pub fn delta(&self) -> Option<f64> {
        self.z.windows(2).map(|w| w[1] - w[0]).reduce(f64::min)
    }

    /// Indices into [`flat`](Self::flat) ordered by distance to `x`; ties go to the smaller node.
    pub fn sigma(&self, x: f64) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.s()).collect();
        idx.sort_by(|&i, &j| {
            let (a, b) = (self.flat[i], self.flat[j]);
            (x - a)
                .abs()
                .total_cmp(&(x - b).abs())
                .then(a.total_cmp(&b))
                .then(i.cmp(&j))
        });
        idx
    }

    /// `prod_{j=0}^{m} |x - y_{sigma_j(x)}|`, with `m = -1` giving 1.
    pub fn d_m(&self, x: f64, m: isize) -> f64 {
        if m < 0 {
            return 1.0;
        }
        let mut dist: Vec<f64> = self.flat.iter().map(|y| (x - y).abs()).collect();
        dist.sort_by(f64::total_cmp);
        dist.iter().take(m as usize + 1).product()
    }

    /// Distance from `x` to the nearest node.
    pub fn dist(&self, x: f64) -> f64 {
        self.z.iter().map(|z| (x - z).abs()).fold(f64::INFINITY, f64::min)
    }

    /// Adds `points` with multiplicity `mult`, raising existing multiplicities to at least `mult`.
    pub fn adjoin(&self, points: &[f64], mult: usize) -> Self {
        let mut pairs: Vec<(f64, usize)> = self.z.iter().copied().zip(self.m.iter().copied()).collect();
        for &p in points {
            match pairs.iter_mut().find(|(z, _)| *z == p) {
                Some(pair) => pair.1 = pair.1.max(mult),
                None => pairs.push((p, mult)),
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (z, m) = pairs.into_iter().unzip();
        Self::new(z, m).expect("adjoin keeps the multiset valid")
    }

    /// Points of the multiset lying in `[a, b]`.
    pub fn restrict(&self, a: f64, b: f64) -> Self {
        let (z, m) = self
            .z
            .iter()
            .zip(&self.m)
            .filter(|(z, _)| **z >= a && **z <= b)
            .map(|(z, m)| (*z, *m))
            .unzip();
        Self::new(z, m).expect("subset of a valid multiset")
    }
}

impl fmt::Display for NodeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .z
            .iter()
            .zip(&self.m)
            .map(|(z, m)| format!("{z}:{m}"))
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for NodeMultiset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Serialize for NodeMultiset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_accessors() {
        let y = NodeMultiset::parse("-1:3,0:1,1:3").unwrap();
        assert_eq!(y.s(), 7);
        assert_eq!(y.mu(), 3);
        assert_eq!(y.flat(), &[-1.0, -1.0, -1.0, 0.0, 1.0, 1.0, 1.0]);
        assert_eq!((0..7).map(|j| y.l(j)).collect::<Vec<_>>(), vec![1, 2, 3, 1, 1, 2, 3]);
        assert_eq!(y.delta(), Some(1.0));
        assert_eq!(y.lambda_r(2), Some(1.0));
        assert_eq!(y.lambda_r(1), Some(0.0));
        assert_eq!(y.lambda_r(6), None);
        assert_eq!(y.to_string(), "-1:3,0:1,1:3");
        assert!(NodeMultiset::parse("0:0").is_err());
        assert!(NodeMultiset::parse("0:1,0:2").is_err());
        assert!(NodeMultiset::parse("a:1").is_err());
        assert!(NodeMultiset::parse("").unwrap().is_empty());
        assert_eq!(NodeMultiset::parse("0.5").unwrap().s(), 1);
    }

    #[test]
    fn sigma_and_products() {
        let y = NodeMultiset::parse("-0.5:1,0.5:2").unwrap();
        // equidistant from both nodes: the smaller node wins the tie
        assert_eq!(y.sigma(0.0)[0], 0);
        assert_eq!(y.d_m(0.2, -1), 1.0);
        assert!((y.d_m(0.2, 0) - 0.3).abs() < 1e-15);
        assert!((y.d_m(0.2, 0) - y.dist(0.2)).abs() < 1e-15);
        let all: f64 = y.flat().iter().map(|v| (0.2 - v).abs()).product();
        assert!((y.d_m(0.2, 2) - all).abs() < 1e-15);
    }

    #[test]
    fn adjoin_raises_multiplicity() {
        let y = NodeMultiset::parse("-1:1,0:2").unwrap().adjoin(&[-1.0, 1.0], 2);
        assert_eq!(y.to_string(), "-1:2,0:2,1:2");
    }
}
