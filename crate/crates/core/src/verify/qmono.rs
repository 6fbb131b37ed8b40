use rayon::prelude::*;
use serde::Serialize;

use crate::numcore::Interval;
use crate::smoothness::{binomials, raw_difference};

#[derive(Debug, Clone, Serialize)]
pub struct QmonotoneReport {
    pub q: usize,
    pub pass: bool,
    /// Most negative `Delta^q_u g(x)` found, or 0 when all are nonnegative.
    pub worst: f64,
    /// `(u, x)` of the worst difference.
    pub witness: Option<(f64, f64)>,
    pub tolerance: f64,
}

/// Scans `Delta^q_u g(x)` over `u_count` steps in `(0, |J|/q]` and `x_count`
/// admissible centres per step, accepting values down to `-1e-10 * ||g||`.
pub fn qmonotone_test(
    g: &(dyn Fn(f64) -> f64 + Sync),
    q: usize,
    domain: Interval,
    u_count: usize,
    x_count: usize,
) -> QmonotoneReport {
    let q = q.max(1);
    let (u_count, x_count) = (u_count.max(1), x_count.max(2));
    let scale = (0..=4 * x_count)
        .map(|i| g(domain.a + domain.len() * i as f64 / (4 * x_count) as f64).abs())
        .fold(0.0f64, f64::max);
    let tolerance = 1e-10 * scale.max(f64::MIN_POSITIVE);
    let binom = binomials(q);
    let u_max = domain.len() / q as f64;
    let rows: Vec<(f64, f64, f64)> = (1..=u_count)
        .into_par_iter()
        .map(|iu| {
            let u = u_max * iu as f64 / u_count as f64;
            let half = q as f64 * u / 2.0;
            let (lo, hi) = (domain.a + half, domain.b - half);
            let mut worst = (f64::INFINITY, u, lo);
            for ix in 0..x_count {
                let x = if hi > lo { lo + (hi - lo) * ix as f64 / (x_count - 1) as f64 } else { lo };
                let v = raw_difference(g, &binom, u, x);
                if v < worst.0 {
                    worst = (v, u, x);
                }
            }
            worst
        })
        .collect();
    let (v, u, x) = rows
        .into_iter()
        .fold((f64::INFINITY, 0.0, 0.0), |a, b| if b.0 < a.0 { b } else { a });
    QmonotoneReport {
        q,
        pass: v >= -tolerance,
        worst: v.min(0.0),
        witness: (v < 0.0).then_some((u, x)),
        tolerance,
    }
}
