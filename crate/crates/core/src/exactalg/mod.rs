//! Exact coefficient arithmetic.
//!
//! Provides the scalar types everything else is built on: arbitrary-precision
//! rationals ([`Rat`]), cyclotomic field elements ([`CycloElement`]), dense
//! univariate rational polynomials ([`QPolynomial`]) and an exact rational
//! nullspace solver ([`LinearSystem`]).

pub mod arith;
pub mod cyclo;
pub mod linalg;
pub mod poly;
pub mod rat;

pub use cyclo::{CycloElement, CycloError};
pub use linalg::{nullspace, solve, LinearSystem};
pub use poly::{cyclotomic_polynomial, QPolynomial};
pub use rat::Rat;
