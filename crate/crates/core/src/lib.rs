//! Interpolatory pointwise estimates for polynomial approximation on `[-1, 1]`.
//!
//! The crate builds polynomials that approximate a function at the natural
//! local rate `rho_n(x)` while matching prescribed Hermite data, and measures
//! the constants in the corresponding pointwise inequalities on grids.

pub mod construct;
pub mod counterex;
pub mod error;
pub mod hermite;
pub mod jet;
pub mod numcore;
pub mod poly;
pub mod rng;
pub mod smoothness;
pub mod verify;

pub use error::{Error, Result};
pub use hermite::NodeMultiset;
pub use numcore::{ChebPartition, EvalGrid, Interval};
pub use poly::ChebPoly;
pub use smoothness::{FunctionModel, ModulusProfile, PhiFunction};
