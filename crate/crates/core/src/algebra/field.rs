//! Arithmetic in `F_q = F_p[t]/(m(t))` and in its extensions `F_{q^r}`.
//!
//! Elements are coefficient vectors `(c_0, .., c_{n-1})` over `F_p`, packed
//! into a single word as the base-`p` integer `c_0 + c_1 p + .. + c_{n-1} p^{n-1}`.
//! The packing makes elements `Copy`, hashable and trivially enumerable
//! (`0..q` is the whole field). Every operation goes through the
//! [`FqContext`] the element belongs to.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Packed coefficient vector of a field element. See the module docs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqElement(pub u64);

impl FqElement {
    pub const ZERO: FqElement = FqElement(0);
    pub const ONE: FqElement = FqElement(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field `F_q`, `q = p^n` with `p` odd.
///
/// For `n > 1` the field is `F_p[t]/(m(t))` where `m` is the smallest monic
/// irreducible polynomial of degree `n`, ordered by the packed integer value
/// of its lower coefficients. The choice is deterministic so cached data is
/// reproducible across runs.
#[derive(Clone, Debug)]
pub struct FqContext {
    p: u64,
    n: usize,
    q: u64,
    /// Monic modulus, lowest coefficient first, length `n + 1`.
    modulus: Option<Vec<u64>>,
    /// `p^i` for `i in 0..=n`.
    powers_of_p: Vec<u64>,
    /// Full addition and multiplication tables for small extension fields.
    tables: Option<Arc<Tables>>,
}

#[derive(Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl PartialEq for FqContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n && self.modulus == other.modulus
    }
}

impl Eq for FqContext {}

/// Extension fields up to this order get precomputed operation tables.
const TABLE_LIMIT: u64 = 1024;
/// Enough coefficient slots for any field with `q < 2^62` and `p >= 3`.
const MAX_DEGREE: usize = 40;

const MAX_PRIME: u64 = 1 << 32;
const MAX_ORDER: u64 = 1 << 62;

pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    if m.is_multiple_of(2) {
        return m == 2;
    }
    let mut f = 3;
    while f * f <= m {
        if m.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

impl FqContext {
    /// Builds `F_{p^n}`.
    pub fn new(p: u64, n: usize) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
        }
        if p >= MAX_PRIME {
            return Err(Error::FieldTooLarge { p, n });
        }
        let powers_of_p = powers(p, n).ok_or(Error::FieldTooLarge { p, n })?;
        let modulus = if n == 1 {
            None
        } else {
            Some(smallest_irreducible(p, n).ok_or(Error::NoIrreducibleFound { p, degree: n })?)
        };
        let mut ctx = FqContext {
            p,
            n,
            q: powers_of_p[n],
            modulus,
            powers_of_p,
            tables: None,
        };
        if ctx.q <= TABLE_LIMIT {
            let q = ctx.q;
            let mut add = Vec::with_capacity((q * q) as usize);
            let mut mul = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                for b in 0..q {
                    add.push(ctx.add_slow(FqElement(a), FqElement(b)).0 as u32);
                    mul.push(ctx.mul_slow(FqElement(a), FqElement(b)).0 as u32);
                }
            }
            let mut inv = vec![0u32; q as usize];
            for a in 1..q {
                for b in 1..q {
                    if mul[(a * q + b) as usize] == 1 {
                        inv[a as usize] = b as u32;
                        break;
                    }
                }
            }
            ctx.tables = Some(Arc::new(Tables { add, mul, inv }));
        }
        Ok(ctx)
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    /// Builds `F_q` from an odd prime power `q`.
    pub fn from_order(q: u64) -> Result<Self> {
        let (p, n) = prime_power(q).ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
        Self::new(p, n)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Defining polynomial over `F_p` (lowest coefficient first), absent for prime fields.
    pub fn modulus(&self) -> Option<&[u64]> {
        self.modulus.as_deref()
    }

    pub fn is_prime_field(&self) -> bool {
        self.n == 1
    }

    pub fn contains(&self, e: FqElement) -> bool {
        e.0 < self.q
    }

    pub fn zero(&self) -> FqElement {
        FqElement::ZERO
    }

    pub fn one(&self) -> FqElement {
        FqElement::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> FqElement {
        FqElement(v.rem_euclid(self.p as i64) as u64)
    }

    pub fn from_coords(&self, coords: &[u64]) -> Result<FqElement> {
        if coords.len() > self.n || coords.iter().any(|&c| c >= self.p) {
            return Err(Error::ContextMismatch);
        }
        Ok(FqElement(
            coords
                .iter()
                .zip(&self.powers_of_p)
                .map(|(c, pp)| c * pp)
                .sum(),
        ))
    }

    pub fn coords(&self, e: FqElement) -> Vec<u64> {
        let mut v = e.0;
        (0..self.n)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    /// The class of `t`, i.e. the generator of `F_q` over `F_p`; `None` for prime fields.
    pub fn generator(&self) -> Option<FqElement> {
        (self.n > 1).then_some(FqElement(self.p))
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElement> {
        (0..self.q).map(FqElement)
    }

    #[inline]
    pub fn add(&self, a: FqElement, b: FqElement) -> FqElement {
        if self.n == 1 {
            let s = a.0 + b.0;
            return FqElement(if s >= self.p { s - self.p } else { s });
        }
        if let Some(t) = &self.tables {
            return FqElement(t.add[(a.0 * self.q + b.0) as usize] as u64);
        }
        self.add_slow(a, b)
    }

    fn add_slow(&self, a: FqElement, b: FqElement) -> FqElement {
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        for pp in &self.powers_of_p[..self.n] {
            let s = (x % self.p + y % self.p) % self.p;
            out += s * pp;
            x /= self.p;
            y /= self.p;
        }
        FqElement(out)
    }

    #[inline]
    pub fn neg(&self, a: FqElement) -> FqElement {
        if self.n == 1 {
            return FqElement(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let mut x = a.0;
        let mut out = 0;
        for pp in &self.powers_of_p[..self.n] {
            let c = x % self.p;
            out += ((self.p - c) % self.p) * pp;
            x /= self.p;
        }
        FqElement(out)
    }

    pub fn sub(&self, a: FqElement, b: FqElement) -> FqElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElement, b: FqElement) -> FqElement {
        if let Some(t) = &self.tables {
            return FqElement(t.mul[(a.0 * self.q + b.0) as usize] as u64);
        }
        if self.n == 1 {
            return FqElement(a.0 * b.0 % self.p);
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: FqElement, b: FqElement) -> FqElement {
        if self.n == 1 {
            return FqElement(a.0 * b.0 % self.p);
        }
        let p = self.p;
        let n = self.n;
        let mut ca = [0u64; MAX_DEGREE];
        let mut cb = [0u64; MAX_DEGREE];
        let (mut x, mut y) = (a.0, b.0);
        for i in 0..n {
            ca[i] = x % p;
            cb[i] = y % p;
            x /= p;
            y /= p;
        }
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for (i, &x) in ca[..n].iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb[..n].iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y % p) % p;
            }
        }
        let m = self.modulus.as_ref().expect("extension field has a modulus");
        // t^n = -(m_0 + .. + m_{n-1} t^{n-1})
        for top in (n..2 * n - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &mi) in m[..n].iter().enumerate() {
                let idx = top - n + i;
                prod[idx] = (prod[idx] + (p - mi * c % p)) % p;
            }
        }
        FqElement(
            prod[..n]
                .iter()
                .zip(&self.powers_of_p)
                .map(|(c, pp)| c * pp)
                .sum(),
        )
    }

    pub fn square(&self, a: FqElement) -> FqElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FqElement, mut e: u64) -> FqElement {
        let mut base = a;
        let mut acc = FqElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FqElement) -> Option<FqElement> {
        if a.is_zero() {
            return None;
        }
        if let Some(t) = &self.tables {
            return Some(FqElement(t.inv[a.0 as usize] as u64));
        }
        if self.n == 1 {
            // extended Euclid is much cheaper than a power for large p
            let (mut r0, mut r1) = (self.p as i64, a.0 as i64);
            let (mut s0, mut s1) = (0i64, 1i64);
            while r1 != 0 {
                let t = r0 / r1;
                (r0, r1) = (r1, r0 - t * r1);
                (s0, s1) = (s1, s0 - t * s1);
            }
            return Some(FqElement(s0.rem_euclid(self.p as i64) as u64));
        }
        Some(self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: FqElement, b: FqElement) -> Option<FqElement> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    /// Quadratic character: `0` for zero, `+1` for nonzero squares, `-1` otherwise
    /// (Euler's criterion).
    pub fn is_square(&self, e: FqElement) -> i8 {
        if e.is_zero() {
            return 0;
        }
        if self.pow(e, (self.q - 1) / 2) == FqElement::ONE {
            1
        } else {
            -1
        }
    }

    /// Smallest non-square, in packed order.
    pub fn nonsquare(&self) -> FqElement {
        self.elements()
            .find(|&e| self.is_square(e) == -1)
            .expect("odd fields contain non-squares")
    }

    /// Quadratic character of every element, indexed by packed value.
    pub fn square_table(&self) -> Vec<i8> {
        let mut table = vec![-1i8; self.q as usize];
        table[0] = 0;
        for e in self.elements().skip(1) {
            table[self.square(e).0 as usize] = 1;
        }
        table
    }
}

fn powers(p: u64, n: usize) -> Option<Vec<u64>> {
    let mut v = Vec::with_capacity(n + 1);
    let mut acc = 1u64;
    v.push(acc);
    for _ in 0..n {
        acc = acc.checked_mul(p)?;
        if acc > MAX_ORDER {
            return None;
        }
        v.push(acc);
    }
    Some(v)
}

/// Writes `q = p^n` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|f| q.is_multiple_of(*f) || f * f > q).map(|f| if q.is_multiple_of(f) { f } else { q })?;
    let mut rest = q;
    let mut n = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        n += 1;
    }
    (rest == 1).then_some((p, n))
}

/// Remainder of `a` modulo the monic `m` over `F_p`, both lowest coefficient first.
fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > dm {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - mi * c % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn monic_from_digits(p: u64, degree: usize, mut v: u64) -> Vec<u64> {
    let mut f = Vec::with_capacity(degree + 1);
    for _ in 0..degree {
        f.push(v % p);
        v /= p;
    }
    f.push(1);
    f
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(crate) fn fp_is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    for dd in 1..=deg / 2 {
        let count = p.pow(dd as u32);
        for v in 0..count {
            let divisor = monic_from_digits(p, dd, v);
            if fp_rem(f, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible polynomial of degree `n` over `F_p`.
pub(crate) fn smallest_irreducible(p: u64, n: usize) -> Option<Vec<u64>> {
    let count = p.checked_pow(n as u32)?;
    (0..count)
        .map(|v| monic_from_digits(p, n, v))
        .find(|f| f[0] != 0 && fp_is_irreducible(f, p))
}

/// `F_{q^r}` together with the embedding of `F_q` into it.
#[derive(Clone, Debug)]
pub struct ExtensionField {
    base: FqContext,
    field: FqContext,
    degree: usize,
    /// Image of the base generator `t`; `None` when the embedding is the identity
    /// on packed values (prime base field, or `r = 1`).
    generator_image: Option<FqElement>,
}

impl ExtensionField {
    pub fn base(&self) -> &FqContext {
        &self.base
    }

    pub fn field(&self) -> &FqContext {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generator_image(&self) -> Option<FqElement> {
        self.generator_image
    }

    /// The embedding `F_q -> F_{q^r}`.
    pub fn embed(&self, e: FqElement) -> FqElement {
        match self.generator_image {
            None => e,
            Some(beta) => {
                let coords = self.base.coords(e);
                let mut acc = FqElement::ZERO;
                for &c in coords.iter().rev() {
                    acc = self.field.mul(acc, beta);
                    acc = self.field.add(acc, FqElement(c));
                }
                acc
            }
        }
    }
}

/// Builds `F_{q^r}` over `F_p` with modulus of degree `n r`, and embeds `F_q`
/// by sending `t` to the smallest root of the base modulus.
pub fn extension_context(base: &FqContext, r: usize) -> Result<ExtensionField> {
    if r == 0 {
        return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
    }
    if r == 1 {
        return Ok(ExtensionField {
            base: base.clone(),
            field: base.clone(),
            degree: 1,
            generator_image: None,
        });
    }
    let field = FqContext::new(base.p(), base.n() * r)?;
    let generator_image = match base.modulus() {
        None => None,
        Some(m) => {
            let root = field
                .elements()
                .find(|&x| {
                    let mut acc = FqElement::ZERO;
                    for &c in m.iter().rev() {
                        acc = field.add(field.mul(acc, x), FqElement(c));
                    }
                    acc.is_zero()
                })
                .ok_or(Error::NoIrreducibleFound { p: base.p(), degree: base.n() })?;
            Some(root)
        }
    };
    Ok(ExtensionField {
        base: base.clone(),
        field,
        degree: r,
        generator_image,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_field_has_no_modulus() {
        let f = FqContext::new(3, 1).unwrap();
        assert_eq!(f.q(), 3);
        assert!(f.modulus().is_none());
    }

    #[test]
    fn f9_modulus_is_t2_plus_1() {
        let f = FqContext::new(3, 2).unwrap();
        assert_eq!(f.q(), 9);
        assert_eq!(f.modulus(), Some(&[1, 0, 1][..]));
        // t^2 + 1 has no root in F_3
        assert!((0..3u64).all(|x| (x * x + 1) % 3 != 0));
    }

    #[test]
    fn rejects_bad_characteristic() {
        assert_eq!(FqContext::new(2, 1), Err(Error::EvenCharacteristic));
        assert_eq!(FqContext::new(9, 1), Err(Error::NotPrime(9)));
        assert!(FqContext::new(3, 0).is_err());
    }

    #[test]
    fn from_order_splits_prime_powers() {
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(10009), Some((10009, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(FqContext::from_order(25).unwrap().n(), 2);
    }

    #[test]
    fn is_square_examples() {
        let f3 = FqContext::new(3, 1).unwrap();
        assert_eq!(f3.is_square(FqElement(0)), 0);
        assert_eq!(f3.is_square(FqElement(1)), 1);
        assert_eq!(f3.is_square(FqElement(2)), -1);
        let f9 = FqContext::new(3, 2).unwrap();
        assert_eq!(f9.is_square(f9.one()), 1);
        // every element of F_3 is a square in F_9
        assert_eq!(f9.is_square(FqElement(2)), 1);
    }

    #[test]
    fn half_of_nonzero_elements_are_squares() {
        for q in [3u64, 5, 7, 9, 11, 13, 25, 27, 49, 81, 121] {
            let f = FqContext::from_order(q).unwrap();
            let squares = f.elements().filter(|&e| f.is_square(e) == 1).count() as u64;
            assert_eq!(squares, (q - 1) / 2, "q = {q}");
            let table = f.square_table();
            assert!(f.elements().all(|e| table[e.0 as usize] == f.is_square(e)));
        }
    }

    #[test]
    fn field_axioms_on_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [3u64, 5, 9, 25, 27, 81, 343, 10009] {
            let f = FqContext::from_order(q).unwrap();
            for _ in 0..1000 {
                let a = FqElement(rng.gen_range(1..q));
                let b = FqElement(rng.gen_range(0..q));
                let c = FqElement(rng.gen_range(0..q));
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.add(a, f.neg(a)), f.zero());
            }
        }
    }

    #[test]
    fn extension_embeddings() {
        let f3 = FqContext::new(3, 1).unwrap();
        let f9 = extension_context(&f3, 2).unwrap();
        assert_eq!(f9.field().q(), 9);
        for v in 0..3 {
            assert_eq!(f9.embed(FqElement(v)), FqElement(v));
        }

        let base9 = FqContext::new(3, 2).unwrap();
        let same = extension_context(&base9, 1).unwrap();
        assert_eq!(same.field(), &base9);
        assert!(base9.elements().all(|e| same.embed(e) == e));

        // the image of t in F_{9^3} is a root of t^2 + 1
        let f729 = extension_context(&base9, 3).unwrap();
        let beta = f729.generator_image().unwrap();
        let big = f729.field();
        assert_eq!(big.add(big.mul(beta, beta), big.one()), big.zero());
        // embedding is a ring homomorphism
        for a in base9.elements() {
            for b in base9.elements() {
                assert_eq!(f729.embed(base9.mul(a, b)), big.mul(f729.embed(a), f729.embed(b)));
                assert_eq!(f729.embed(base9.add(a, b)), big.add(f729.embed(a), f729.embed(b)));
            }
        }

        let f27 = extension_context(&f3, 3).unwrap();
        let m = f27.field().modulus().unwrap().to_vec();
        assert_eq!(m.len(), 4);
        assert!(fp_is_irreducible(&m, 3));
    }
}
