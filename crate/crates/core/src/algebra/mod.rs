//! Finite fields `F_q`, their extensions, and polynomials over them.

mod field;
mod poly;

pub use field::{extension_context, is_prime, prime_power, ExtensionField, FqContext, FqElement};
pub use poly::{
    count_irreducible, eval_in_extension, is_irreducible, mobius, monic_from_index, monic_polys,
    squarefree, FqPoly,
};
