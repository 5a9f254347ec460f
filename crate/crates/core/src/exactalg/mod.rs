//! Exact arithmetic: rational functions in `s = q^{1/2}`, polynomials in `q`,
//! Adams substitutions and the number-theoretic helpers used by the checks.

mod intpoly;
mod laurent;
mod numtheory;
mod qcoeff;
mod qpoly;
pub mod rational;

pub use laurent::LaurentPoly;
pub use numtheory::{binomial, divisors, moebius};
pub use qcoeff::QCoeff;
pub use qpoly::{gauss_binomial, is_palindromic_unimodal, QPoly};

use crate::error::Result;

/// Field operation selector for [`qcoeff_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Single entry point for the four field operations.
pub fn qcoeff_arith(a: &QCoeff, b: &QCoeff, op: ArithOp) -> Result<QCoeff> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.div_checked(b)?,
    })
}

/// `s -> s^n` applied to `f`.
pub fn adams(f: &QCoeff, n: u32) -> QCoeff {
    f.adams(n)
}
