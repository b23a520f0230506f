//! Dense polynomials over `F_q`, lowest coefficient first.

use std::fmt;

use rug::ops::Pow;
use rug::Integer;

use super::field::{ExtensionField, FqContext, FqElement};
use crate::error::{Error, Result};

/// A polynomial over a fixed `F_q`. Coefficients are packed [`FqElement`]s;
/// trailing zeros are never stored, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FqPoly {
    coeffs: Vec<FqElement>,
}

impl FqPoly {
    pub fn new(mut coeffs: Vec<FqElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FqPoly { coeffs }
    }

    /// Convenience constructor from integers reduced into the prime subfield.
    pub fn from_ints(ctx: &FqContext, coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| ctx.from_int(c)).collect())
    }

    /// Monic polynomial `x^d + c_{d-1} x^{d-1} + .. + c_0` from its lower coefficients.
    pub fn monic_from_lower(lower: &[FqElement]) -> Self {
        let mut coeffs = lower.to_vec();
        coeffs.push(FqElement::ONE);
        FqPoly { coeffs }
    }

    pub fn zero() -> Self {
        FqPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(FqElement::ONE)
    }

    pub fn x() -> Self {
        FqPoly {
            coeffs: vec![FqElement::ZERO, FqElement::ONE],
        }
    }

    pub fn constant(c: FqElement) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[FqElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqElement {
        self.coeffs.get(i).copied().unwrap_or(FqElement::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<FqElement> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(FqElement::ONE)
    }

    pub fn belongs_to(&self, ctx: &FqContext) -> bool {
        self.coeffs.iter().all(|&c| ctx.contains(c))
    }

    pub fn add(&self, other: &FqPoly, ctx: &FqContext) -> FqPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| ctx.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &FqPoly, ctx: &FqContext) -> FqPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| ctx.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, c: FqElement, ctx: &FqContext) -> FqPoly {
        Self::new(self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &FqPoly, ctx: &FqContext) -> FqPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![FqElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder; the divisor need not be monic.
    pub fn div_rem(&self, divisor: &FqPoly, ctx: &FqContext) -> Result<(FqPoly, FqPoly)> {
        let db = divisor.degree().ok_or(Error::ZeroModulus)?;
        let inv_lead = ctx.inv(divisor.leading().unwrap()).unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![FqElement::ZERO; r.len() - db];
        while r.len() > db {
            let top = r.len() - 1;
            let c = ctx.mul(r[top], inv_lead);
            let shift = top - db;
            quot[shift] = c;
            if !c.is_zero() {
                for (i, &bi) in divisor.coeffs.iter().enumerate() {
                    r[shift + i] = ctx.sub(r[shift + i], ctx.mul(c, bi));
                }
            }
            r.pop();
        }
        Ok((Self::new(quot), Self::new(r)))
    }

    pub fn rem(&self, divisor: &FqPoly, ctx: &FqContext) -> Result<FqPoly> {
        self.div_rem(divisor, ctx).map(|(_, r)| r)
    }

    /// Splits off the leading coefficient: `self = c * monic`. Zero maps to `(0, 0)`.
    pub fn make_monic(&self, ctx: &FqContext) -> (FqElement, FqPoly) {
        match self.leading() {
            None => (FqElement::ZERO, Self::zero()),
            Some(c) => {
                let ic = ctx.inv(c).unwrap();
                (c, self.scale(ic, ctx))
            }
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &FqPoly, ctx: &FqContext) -> FqPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, ctx).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.make_monic(ctx).1
    }

    /// Formal derivative.
    pub fn derivative(&self, ctx: &FqContext) -> FqPoly {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| ctx.mul(ctx.from_int((i as u64 % ctx.p()) as i64), c))
                .collect(),
        )
    }

    /// Horner evaluation at a point of the same field.
    pub fn eval(&self, x: FqElement, ctx: &FqContext) -> FqElement {
        self.coeffs
            .iter()
            .rev()
            .fold(FqElement::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }

    pub fn pow_mod(&self, mut e: u128, modulus: &FqPoly, ctx: &FqContext) -> Result<FqPoly> {
        let mut base = self.rem(modulus, ctx)?;
        let mut acc = FqPoly::one().rem(modulus, ctx)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ctx).rem(modulus, ctx)?;
            }
            base = base.mul(&base, ctx).rem(modulus, ctx)?;
            e >>= 1;
        }
        Ok(acc)
    }
}

impl fmt::Display for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c.0) {
                (0, v) => write!(f, "{v}")?,
                (1, 1) => write!(f, "x")?,
                (1, v) => write!(f, "{v}*x")?,
                (_, 1) => write!(f, "x^{i}")?,
                (_, v) => write!(f, "{v}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// `gcd(D, D') = 1`. A vanishing derivative leaves `gcd = D`, which is
/// correctly reported as not squarefree.
pub fn squarefree(d: &FqPoly, ctx: &FqContext) -> Result<bool> {
    match d.degree() {
        None => Err(Error::ZeroPolynomial),
        Some(0) => Ok(true),
        Some(_) => Ok(d.gcd(&d.derivative(ctx), ctx).degree() == Some(0)),
    }
}

/// The `index`-th monic polynomial of the given degree; the lower
/// coefficients are the base-`q` digits of `index`, `c_0` least significant.
pub fn monic_from_index(ctx: &FqContext, degree: usize, mut index: u64) -> FqPoly {
    let q = ctx.q();
    let mut lower = Vec::with_capacity(degree);
    for _ in 0..degree {
        lower.push(FqElement(index % q));
        index /= q;
    }
    FqPoly::monic_from_lower(&lower)
}

/// All monic polynomials of a degree, in index order. Panics if `q^degree`
/// does not fit in a `u64`.
pub fn monic_polys(ctx: &FqContext, degree: usize) -> impl Iterator<Item = FqPoly> + '_ {
    let count = ctx.q().checked_pow(degree as u32).expect("enumeration too large");
    (0..count).map(move |i| monic_from_index(ctx, degree, i))
}

/// Classical Möbius function by trial factorization.
pub fn mobius(mut m: u64) -> i32 {
    assert!(m >= 1);
    let mut sign = 1;
    let mut f = 2;
    while f * f <= m {
        if m.is_multiple_of(f) {
            m /= f;
            if m.is_multiple_of(f) {
                return 0;
            }
            sign = -sign;
        }
        f += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// Number of monic irreducibles of degree `n` over `F_q`: `(1/n) Σ_{m|n} μ(m) q^{n/m}`.
pub fn count_irreducible(n: u32, q: &Integer) -> Integer {
    assert!(n >= 1);
    let mut total = Integer::new();
    for m in (1..=n).filter(|m| n.is_multiple_of(*m)) {
        let term = Integer::from(q.pow(n / m));
        match mobius(m as u64) {
            1 => total += term,
            -1 => total -= term,
            _ => {}
        }
    }
    total / n
}

/// Irreducibility by distinct-degree splitting: `f` of degree `n` is
/// irreducible iff `gcd(x^{q^i} - x, f) = 1` for all `i <= n/2`.
pub fn is_irreducible(f: &FqPoly, ctx: &FqContext) -> Result<bool> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Ok(false);
    }
    let x = FqPoly::x();
    let mut frob = x.clone();
    for _ in 0..n / 2 {
        frob = frob.pow_mod(ctx.q() as u128, f, ctx)?;
        if frob.sub(&x, ctx).gcd(f, ctx).degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Evaluates `d` at a point of an extension, embedding each coefficient first.
pub fn eval_in_extension(d: &FqPoly, x: FqElement, ext: &ExtensionField) -> Result<FqElement> {
    let field = ext.field();
    if !field.contains(x) || !d.belongs_to(ext.base()) {
        return Err(Error::ContextMismatch);
    }
    Ok(d.coeffs()
        .iter()
        .rev()
        .fold(FqElement::ZERO, |acc, &c| field.add(field.mul(acc, x), ext.embed(c))))
}
