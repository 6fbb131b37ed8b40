//! Finite differences, moduli of smoothness and majorant classes.

mod function;
mod modulus;
mod phi;

pub(crate) use modulus::{binomials, raw_difference};
pub use function::{falling, smoothness_order, DerivFn, FunctionModel, SMOOTH};
pub use modulus::{
    finite_difference, marchaud_check, omega_k, MarchaudReport, MarchaudRow, ModulusProfile,
    ProfileOptions, U_DECADES, U_STEPS,
};
pub use phi::{
    check_class, check_ln, pathological_phi, scaled_membership, stechkin_regularize, PhiCheck,
    PhiFunction, PhiKind,
};
