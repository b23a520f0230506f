//! Zeta functions of hyperelliptic curves `y^2 = D(x)` over odd finite
//! fields, exact moments of their central values over the whole family,
//! closed-form moment formulas, and high-precision evaluation of the
//! random-matrix-style moment predictions `Q_k(q; d)`.

pub mod akpred;
pub mod algebra;
pub mod algebraic;
pub mod charsym;
pub mod ensemble;
pub mod error;
pub mod exactmoments;
pub mod lfunc;
pub mod modforms;
pub mod render;

pub use error::{Error, Result};
pub use algebraic::AlgebraicValue;
