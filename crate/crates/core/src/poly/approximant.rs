use super::ChebPoly;

/// Anything that can report a polynomial's derivatives on a set of points.
pub trait Approximant: Sync {
    fn degree(&self) -> usize;

    /// `out[nu][i] = P^{(nu)}(xs[i])` for `0 <= nu <= order`.
    fn derivatives_at(&self, xs: &[f64], order: usize) -> Vec<Vec<f64>>;

    fn value_at(&self, x: f64) -> f64 {
        self.derivatives_at(&[x], 0)[0][0]
    }
}

impl Approximant for ChebPoly {
    fn degree(&self) -> usize {
        ChebPoly::degree(self)
    }

    fn derivatives_at(&self, xs: &[f64], order: usize) -> Vec<Vec<f64>> {
        self.derivatives(order)
            .iter()
            .map(|d| d.eval_many(xs))
            .collect()
    }

    fn value_at(&self, x: f64) -> f64 {
        self.eval(x)
    }
}
