//! Exact arithmetic: Gaussian rationals, sparse multivariate polynomials
//! and reduced rational functions.

mod gcd;
mod monomial;
mod mpoly;
mod ratfun;
mod scalar;

pub use gcd::{gcd, gcd_all};
pub use monomial::Monomial;
pub(crate) use mpoly::render_coeff_times;
pub use mpoly::{poly_arith, ArithOp, MPoly};
pub use ratfun::RationalFunction;
pub use scalar::{GaussianRational, ParseScalarError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },
    #[error("polynomial is not divisible")]
    NotDivisible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("polynomial is constant")]
    ConstantPolynomial,
}

/// Squarefree test; errors on constant input.
pub fn squarefree_check(f: &MPoly) -> Result<bool, PolyError> {
    f.is_squarefree()
}

/// Exact division, `NotDivisible` when `b` does not divide `a`.
pub fn poly_exact_div(a: &MPoly, b: &MPoly) -> Result<MPoly, PolyError> {
    a.exact_div(b)
}

pub fn poly_gcd(a: &MPoly, b: &MPoly) -> Result<MPoly, PolyError> {
    gcd(a, b)
}

pub fn poly_partial(a: &MPoly, var_index: usize) -> Result<MPoly, PolyError> {
    a.partial(var_index)
}
