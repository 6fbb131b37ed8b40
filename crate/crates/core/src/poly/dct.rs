//! Chebyshev-Lobatto sampling through a DCT-I computed with an FFT.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// Values `sum_k c_k cos(i k pi / m)` for `i = 0..=m`, given `c` of length `m + 1`.
pub fn coeffs_to_values(c: &[f64]) -> Vec<f64> {
    let m = c.len() - 1;
    if m == 0 {
        return vec![c[0]];
    }
    let mut buf: Vec<Complex<f64>> = Vec::with_capacity(2 * m);
    buf.extend(c.iter().map(|&v| Complex::new(v, 0.0)));
    buf.extend(c[1..m].iter().rev().map(|&v| Complex::new(v, 0.0)));
    FftPlanner::new().plan_fft_forward(2 * m).process(&mut buf);
    (0..=m)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            0.5 * (buf[i].re + c[0] + sign * c[m])
        })
        .collect()
}

/// Inverse of [`coeffs_to_values`].
pub fn values_to_coeffs(v: &[f64]) -> Vec<f64> {
    let m = v.len() - 1;
    if m == 0 {
        return vec![v[0]];
    }
    let mut half = v.to_vec();
    half[0] *= 0.5;
    half[m] *= 0.5;
    let mut c = coeffs_to_values(&half);
    let s = 1.0 / m as f64;
    for (k, ck) in c.iter_mut().enumerate() {
        let w = if k == 0 || k == m { s } else { 2.0 * s };
        *ck *= w;
    }
    c
}

/// Folds coefficients of any degree onto `m + 1` Lobatto points.
///
/// `T_k` and `T_{k'}` agree on `cos(i pi / m)` when `k' = |k mod 2m|` reflected into `0..=m`.
pub fn fold(c: &[f64], m: usize) -> Vec<f64> {
    let mut out = vec![0.0; m + 1];
    if m == 0 {
        out[0] = c.iter().sum();
        return out;
    }
    for (k, &ck) in c.iter().enumerate() {
        let mut r = k % (2 * m);
        if r > m {
            r = 2 * m - r;
        }
        out[r] += ck;
    }
    out
}
