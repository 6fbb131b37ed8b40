//! Chebyshev-form polynomials and polynomial inequality checkers.

mod approximant;
mod cheb;
pub mod dct;
mod inequalities;

pub use approximant::Approximant;
pub use cheb::{lobatto_points, ChebPoly};
pub use inequalities::{
    dlb_ratio, dlb_sweep, dz59_sharpness, dzyadyk_pointwise_check, random_cheb, sweep_csv,
    Dz59Report, DzyadykReport, SweepRow,
};
