//! The quadratic residue symbol `(a | b)` in `F_q[x]` and the character `χ_D`.
//!
//! The symbol is computed with a Euclidean loop driven by quadratic
//! reciprocity, so no factorization is ever needed. [`CharSumPlan`] adds the
//! fast path used during enumeration: symbols are evaluated only at
//! irreducible moduli and extended multiplicatively.

use crate::algebra::{monic_from_index, squarefree, FqContext, FqElement, FqPoly};
use crate::error::{Error, Result};

/// Fixed-capacity coefficient buffer; symbols never need more than the
/// degrees of their inputs.
#[derive(Clone, Copy)]
pub(crate) struct Buf {
    len: usize,
    c: [FqElement; BUF_CAP],
}

pub(crate) const BUF_CAP: usize = 32;

impl Buf {
    pub(crate) fn from_slice(s: &[FqElement]) -> Self {
        let mut c = [FqElement::ZERO; BUF_CAP];
        c[..s.len()].copy_from_slice(s);
        let mut b = Buf { len: s.len(), c };
        b.trim();
        b
    }

    fn trim(&mut self) {
        while self.len > 0 && self.c[self.len - 1].is_zero() {
            self.len -= 1;
        }
    }

    /// Reduces modulo the monic `m` in place.
    fn rem_monic(&mut self, m: &Buf, ctx: &FqContext) {
        let dm = m.len - 1;
        while self.len > dm {
            let top = self.len - 1;
            let c = self.c[top];
            if !c.is_zero() {
                let shift = top - dm;
                for i in 0..dm {
                    self.c[shift + i] = ctx.sub(self.c[shift + i], ctx.mul(c, m.c[i]));
                }
            }
            self.len -= 1;
        }
        self.trim();
    }

    /// Remainder modulo an arbitrary nonzero `m`.
    fn rem(&mut self, m: &Buf, ctx: &FqContext) {
        let dm = m.len - 1;
        let inv = ctx.inv(m.c[dm]).unwrap();
        while self.len > dm {
            let top = self.len - 1;
            let c = ctx.mul(self.c[top], inv);
            if !c.is_zero() {
                let shift = top - dm;
                for i in 0..dm {
                    self.c[shift + i] = ctx.sub(self.c[shift + i], ctx.mul(c, m.c[i]));
                }
            }
            self.len -= 1;
        }
        self.trim();
    }
}

/// Degree of `gcd(a, b)`, or `None` when both are zero.
fn gcd_degree(a: &[FqElement], b: &[FqElement], ctx: &FqContext) -> Option<usize> {
    let mut buf_a = Buf::from_slice(a);
    let mut buf_b = Buf::from_slice(b);
    let (mut a, mut b) = (&mut buf_a, &mut buf_b);
    while b.len > 0 {
        a.rem(b, ctx);
        std::mem::swap(&mut a, &mut b);
    }
    a.len.checked_sub(1)
}

/// Allocation-free squarefree test for polynomials of degree `< BUF_CAP`.
pub(crate) fn squarefree_fast(d: &[FqElement], ctx: &FqContext) -> bool {
    if d.len() > BUF_CAP {
        return squarefree(&FqPoly::new(d.to_vec()), ctx).unwrap_or(false);
    }
    let mut der = [FqElement::ZERO; BUF_CAP];
    for i in 1..d.len() {
        der[i - 1] = ctx.mul(ctx.from_int((i as u64 % ctx.p()) as i64), d[i]);
    }
    gcd_degree(d, &der[..d.len().saturating_sub(1)], ctx) == Some(0)
}

/// Core of [`residue_symbol`] with a pluggable quadratic character of `F_q`.
fn symbol_with(
    a: &[FqElement],
    b: &[FqElement],
    ctx: &FqContext,
    chi: &impl Fn(FqElement) -> i8,
) -> i8 {
    if a.len() > BUF_CAP || b.len() > BUF_CAP {
        return symbol_large(a, b, ctx, chi);
    }
    let flip_odd = (ctx.q() - 1) / 2 % 2 == 1;
    let mut buf_a = Buf::from_slice(a);
    let mut buf_b = Buf::from_slice(b);
    let (mut a, mut b) = (&mut buf_a, &mut buf_b);
    let mut result = 1i8;
    loop {
        let db = b.len - 1;
        if db == 0 {
            return result;
        }
        a.rem_monic(b, ctx);
        if a.len == 0 {
            return 0;
        }
        let c = a.c[a.len - 1];
        if c != FqElement::ONE {
            if db % 2 == 1 {
                result *= chi(c);
            }
            let ic = ctx.inv(c).unwrap();
            for x in a.c[..a.len].iter_mut() {
                *x = ctx.mul(*x, ic);
            }
        }
        let da = a.len - 1;
        if flip_odd && da % 2 == 1 && db % 2 == 1 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// Reduces `a` modulo the monic `b` in place.
fn rem_monic_in_place(a: &mut Vec<FqElement>, b: &[FqElement], ctx: &FqContext) {
    let db = b.len() - 1;
    while a.len() > db {
        let top = a.len() - 1;
        let c = a[top];
        if !c.is_zero() {
            let shift = top - db;
            for (i, &bi) in b[..db].iter().enumerate() {
                a[shift + i] = ctx.sub(a[shift + i], ctx.mul(c, bi));
            }
        }
        a.pop();
    }
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

/// Heap-backed variant of [`symbol_with`] for very large degrees.
fn symbol_large(
    a: &[FqElement],
    b: &[FqElement],
    ctx: &FqContext,
    chi: &impl Fn(FqElement) -> i8,
) -> i8 {
    let flip_odd = (ctx.q() - 1) / 2 % 2 == 1;
    let mut a = FqPoly::new(a.to_vec()).coeffs().to_vec();
    let mut b = b.to_vec();
    let mut result = 1i8;
    loop {
        let db = b.len() - 1;
        if db == 0 {
            return result;
        }
        rem_monic_in_place(&mut a, &b, ctx);
        let Some(&c) = a.last() else {
            return 0;
        };
        if c != FqElement::ONE {
            if db % 2 == 1 {
                result *= chi(c);
            }
            let ic = ctx.inv(c).unwrap();
            for x in a.iter_mut() {
                *x = ctx.mul(*x, ic);
            }
        }
        let da = a.len() - 1;
        if flip_odd && da % 2 == 1 && db % 2 == 1 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// The Jacobi symbol `(a | b)` for monic nonzero `b`: the product over the
/// irreducible factors `P` of `b` of the Legendre symbols `(a | P)`.
pub fn residue_symbol(a: &FqPoly, b: &FqPoly, ctx: &FqContext) -> Result<i8> {
    if b.is_zero() {
        return Err(Error::ZeroModulus);
    }
    if !b.is_monic() {
        return Err(Error::NonMonicModulus);
    }
    Ok(symbol_with(a.coeffs(), b.coeffs(), ctx, &|c| ctx.is_square(c)))
}

/// `χ_D(n) = (D | n)` for monic `n`; `χ_D(0) = 0` and `χ_D(1) = 1`.
pub fn chi_d(d: &FqPoly, n: &FqPoly, ctx: &FqContext) -> Result<i8> {
    if n.is_zero() {
        return Ok(0);
    }
    residue_symbol(d, n, ctx)
}

/// `Σ_{n monic, deg n = r} χ_D(n)` by direct enumeration.
pub fn charsum(d: &FqPoly, r: usize, ctx: &FqContext) -> Result<i64> {
    if !squarefree(d, ctx)? {
        return Err(Error::NotSquarefree);
    }
    let count = ctx
        .q()
        .checked_pow(r as u32)
        .ok_or(Error::BudgetExceeded { size: u128::MAX, budget: u64::MAX })?;
    let sq = square_lookup(ctx);
    let mut total = 0i64;
    for i in 0..count {
        let n = monic_from_index(ctx, r, i);
        total += symbol_with(d.coeffs(), n.coeffs(), ctx, &|c| sq.get(c, ctx)) as i64;
    }
    Ok(total)
}

/// Quadratic character, tabulated when the field is small enough.
pub(crate) struct SquareLookup(Option<Vec<i8>>);

impl SquareLookup {
    #[inline]
    pub(crate) fn get(&self, c: FqElement, ctx: &FqContext) -> i8 {
        match &self.0 {
            Some(t) => t[c.0 as usize],
            None => ctx.is_square(c),
        }
    }
}

pub(crate) fn square_lookup(ctx: &FqContext) -> SquareLookup {
    SquareLookup((ctx.q() <= 1 << 24).then(|| ctx.square_table()))
}

/// Precomputed factorization data for all monic polynomials of degree `<= max_degree`.
///
/// Monic polynomials are numbered degree by degree: those of degree `m`
/// occupy `offset[m] .. offset[m] + q^m`, each in [`monic_from_index`] order.
/// Every reducible entry records its smallest irreducible factor and the
/// cofactor, both as earlier entries, so `χ_D` fills in multiplicatively.
pub struct CharSumPlan {
    ctx: FqContext,
    max_degree: usize,
    offset: Vec<usize>,
    /// Index of each irreducible, in increasing numbering.
    irreducibles: Vec<usize>,
    irreducible_polys: Vec<FqPoly>,
    /// `(factor, cofactor)` for reducible entries, `None` for irreducibles and `1`.
    split: Vec<Option<(u32, u32)>>,
    squares: SquareLookup,
}

impl CharSumPlan {
    pub fn new(ctx: &FqContext, max_degree: usize) -> Result<Self> {
        let q = ctx.q() as usize;
        let mut offset = vec![0usize; max_degree + 2];
        for m in 0..=max_degree {
            let size = q
                .checked_pow(m as u32)
                .filter(|&s| s <= 1 << 26)
                .ok_or(Error::BudgetExceeded { size: (q as u128).pow(m as u32), budget: 1 << 26 })?;
            offset[m + 1] = offset[m] + size;
        }
        let total = offset[max_degree + 1];
        let mut split: Vec<Option<(u32, u32)>> = vec![None; total];
        let mut marked = vec![false; total];
        marked[0] = true;
        let mut irreducibles = Vec::new();
        let mut irreducible_polys = Vec::new();
        let index_of = |poly: &FqPoly| -> usize {
            let deg = poly.degree().unwrap();
            let mut idx = 0usize;
            for c in poly.coeffs()[..deg].iter().rev() {
                idx = idx * q + c.0 as usize;
            }
            offset[deg] + idx
        };
        for m in 1..=max_degree {
            for i in 0..q.pow(m as u32) {
                let idx = offset[m] + i;
                if marked[idx] {
                    continue;
                }
                // unmarked after all smaller degrees were sieved: irreducible
                marked[idx] = true;
                let p = monic_from_index(ctx, m, i as u64);
                irreducibles.push(idx);
                for cd in 1..=max_degree - m {
                    for j in 0..q.pow(cd as u32) {
                        let cof_idx = offset[cd] + j;
                        let cof = monic_from_index(ctx, cd, j as u64);
                        let prod = p.mul(&cof, ctx);
                        let pi = index_of(&prod);
                        if !marked[pi] {
                            marked[pi] = true;
                            split[pi] = Some((idx as u32, cof_idx as u32));
                        }
                    }
                }
                irreducible_polys.push(p);
            }
        }
        Ok(CharSumPlan {
            ctx: ctx.clone(),
            max_degree,
            offset,
            irreducibles,
            irreducible_polys,
            split,
            squares: square_lookup(ctx),
        })
    }

    pub fn context(&self) -> &FqContext {
        &self.ctx
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn irreducible_count(&self) -> usize {
        self.irreducibles.len()
    }

    /// `Σ_{deg n = r} χ_D(n)` for `r = 0..=max_degree`. `D` is not checked
    /// for squarefreeness here.
    pub fn charsums(&self, d: &FqPoly) -> Vec<i64> {
        let mut scratch = vec![0i8; self.split.len()];
        self.charsums_with(d, &mut scratch)
    }

    /// As [`Self::charsums`], reusing a caller-owned buffer of length [`Self::table_len`].
    pub fn charsums_with(&self, d: &FqPoly, chi: &mut [i8]) -> Vec<i64> {
        let ctx = &self.ctx;
        chi[0] = 1;
        for (&idx, p) in self.irreducibles.iter().zip(&self.irreducible_polys) {
            chi[idx] = if p.degree() == Some(1) {
                // (D | x - e) = χ(D(e))
                let e = ctx.neg(p.coeff(0));
                self.squares.get(d.eval(e, ctx), ctx)
            } else {
                symbol_with(d.coeffs(), p.coeffs(), ctx, &|c| self.squares.get(c, ctx))
            };
        }
        self.fill_products(chi)
    }

    /// Extends `χ` from irreducibles to all entries and sums by degree.
    fn fill_products(&self, chi: &mut [i8]) -> Vec<i64> {
        chi[0] = 1;
        let mut sums = vec![0i64; self.max_degree + 1];
        sums[0] = 1;
        for m in 1..=self.max_degree {
            let mut s = 0i64;
            for idx in self.offset[m]..self.offset[m + 1] {
                if let Some((f, c)) = self.split[idx] {
                    chi[idx] = chi[f as usize] * chi[c as usize];
                }
                s += chi[idx] as i64;
            }
            sums[m] = s;
        }
        sums
    }

    pub fn table_len(&self) -> usize {
        self.split.len()
    }

    /// A cursor for monic polynomials of degree `d` whose coefficients change
    /// a few at a time, as in an odometer-style enumeration.
    pub fn cursor(&self, d: usize) -> CharSumCursor<'_> {
        let ctx = &self.ctx;
        let mut starts = Vec::with_capacity(self.irreducible_polys.len() + 1);
        let mut total = 0;
        for p in &self.irreducible_polys {
            starts.push(total);
            total += p.degree().unwrap();
        }
        starts.push(total);
        // powers[i * total + starts[j] ..] = x^i mod P_j
        let mut powers = vec![FqElement::ZERO; (d + 1) * total];
        for (j, p) in self.irreducible_polys.iter().enumerate() {
            let m = p.degree().unwrap();
            let mut cur = FqPoly::one().rem(p, ctx).unwrap();
            for i in 0..=d {
                for (t, &c) in cur.coeffs().iter().enumerate() {
                    powers[i * total + starts[j] + t] = c;
                }
                cur = cur.mul(&FqPoly::x(), ctx).rem(p, ctx).unwrap();
            }
            debug_assert!(m >= 1);
        }
        // residues of x^d, i.e. of the polynomial with all lower coefficients zero
        let residues = powers[d * total..(d + 1) * total].to_vec();
        CharSumCursor {
            plan: self,
            d,
            lower: vec![FqElement::ZERO; d],
            starts,
            total,
            powers,
            residues,
            chi: vec![0i8; self.split.len()],
        }
    }
}

/// Incrementally maintained residues `D mod P` for every irreducible `P` of
/// the plan; see [`CharSumPlan::cursor`].
pub struct CharSumCursor<'a> {
    plan: &'a CharSumPlan,
    d: usize,
    lower: Vec<FqElement>,
    starts: Vec<usize>,
    total: usize,
    powers: Vec<FqElement>,
    residues: Vec<FqElement>,
    chi: Vec<i8>,
}

impl CharSumCursor<'_> {
    /// Moves to `x^d + Σ lower[i] x^i`.
    pub fn set(&mut self, lower: &[FqElement]) {
        assert_eq!(lower.len(), self.d);
        let ctx = &self.plan.ctx;
        for i in 0..self.d {
            if lower[i] == self.lower[i] {
                continue;
            }
            let delta = ctx.sub(lower[i], self.lower[i]);
            self.lower[i] = lower[i];
            let row = &self.powers[i * self.total..(i + 1) * self.total];
            for (r, &pw) in self.residues.iter_mut().zip(row) {
                if !pw.is_zero() {
                    *r = ctx.add(*r, ctx.mul(delta, pw));
                }
            }
        }
    }

    /// Character sums of the current polynomial for degrees `0..=max_degree`.
    pub fn charsums(&mut self) -> Vec<i64> {
        let plan = self.plan;
        let ctx = &plan.ctx;
        let chi_q = |c| plan.squares.get(c, ctx);
        for (j, (&idx, p)) in plan.irreducibles.iter().zip(&plan.irreducible_polys).enumerate() {
            let res = &self.residues[self.starts[j]..self.starts[j + 1]];
            self.chi[idx] = if res.len() == 1 {
                chi_q(res[0])
            } else {
                symbol_with(res, p.coeffs(), ctx, &chi_q)
            };
        }
        plan.fill_products(&mut self.chi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{is_irreducible, monic_polys};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Definitional evaluation: factor `b` by trial division and use Euler's
    /// criterion in `F_q[x]/(P)` for each irreducible factor.
    fn symbol_by_factoring(a: &FqPoly, b: &FqPoly, ctx: &FqContext) -> i8 {
        let mut rest = b.clone();
        let mut result = 1i8;
        let mut deg = 1;
        while rest.degree().unwrap() > 0 {
            let mut progressed = false;
            for p in monic_polys(ctx, deg) {
                if !is_irreducible(&p, ctx).unwrap() {
                    continue;
                }
                while rest.rem(&p, ctx).unwrap().is_zero() {
                    rest = rest.div_rem(&p, ctx).unwrap().0;
                    let qp = (ctx.q() as u128).pow(deg as u32);
                    let r = a.pow_mod((qp - 1) / 2, &p, ctx).unwrap();
                    result *= if r.is_zero() {
                        0
                    } else if r == FqPoly::one() {
                        1
                    } else {
                        -1
                    };
                    progressed = true;
                }
            }
            if !progressed {
                deg += 1;
            }
        }
        result
    }

    fn random_poly(ctx: &FqContext, deg: usize, rng: &mut ChaCha8Rng) -> FqPoly {
        FqPoly::new((0..=deg).map(|_| FqElement(rng.gen_range(0..ctx.q()))).collect())
    }

    #[test]
    fn examples() {
        let ctx = FqContext::new(3, 1).unwrap();
        let b = FqPoly::from_ints(&ctx, &[1, 1]);
        assert_eq!(residue_symbol(&FqPoly::x(), &b, &ctx), Ok(-1));
        let m = b.mul(&FqPoly::from_ints(&ctx, &[2, 0, 1]), &ctx);
        assert_eq!(residue_symbol(&m, &b, &ctx), Ok(0));
        assert_eq!(chi_d(&m, &FqPoly::one(), &ctx), Ok(1));
        assert_eq!(chi_d(&m, &FqPoly::zero(), &ctx), Ok(0));
        assert_eq!(residue_symbol(&m, &FqPoly::zero(), &ctx), Err(Error::ZeroModulus));
        assert_eq!(
            residue_symbol(&m, &FqPoly::from_ints(&ctx, &[1, 2]), &ctx),
            Err(Error::NonMonicModulus)
        );
    }

    #[test]
    fn matches_factoring_oracle() {
        for q in [3u64, 5] {
            let ctx = FqContext::from_order(q).unwrap();
            for db in 1..=3 {
                for b in monic_polys(&ctx, db) {
                    for da in 0..=3 {
                        for a in monic_polys(&ctx, da) {
                            for c in 1..q {
                                let a = a.scale(FqElement(c), &ctx);
                                assert_eq!(
                                    residue_symbol(&a, &b, &ctx).unwrap(),
                                    symbol_by_factoring(&a, &b, &ctx),
                                    "q={q} a={a} b={b}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reciprocity_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [3u64, 5, 7, 9, 25] {
            let ctx = FqContext::from_order(q).unwrap();
            let mut checked = 0;
            while checked < 500 {
                let da = rng.gen_range(1..8);
                let db = rng.gen_range(1..8);
                let a = monic_from_index(&ctx, da, rng.gen_range(0..q.pow(da as u32)));
                let b = monic_from_index(&ctx, db, rng.gen_range(0..q.pow(db as u32)));
                if a.gcd(&b, &ctx).degree() != Some(0) {
                    continue;
                }
                let sign = if ((q - 1) / 2 * da as u64 * db as u64).is_multiple_of(2) { 1 } else { -1 };
                let ab = residue_symbol(&a, &b, &ctx).unwrap();
                let ba = residue_symbol(&b, &a, &ctx).unwrap();
                assert_eq!(ab * ba, sign, "q={q} a={a} b={b}");
                checked += 1;
            }
        }
    }

    #[test]
    fn chi_is_completely_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for q in [3u64, 7, 9] {
            let ctx = FqContext::from_order(q).unwrap();
            for _ in 0..300 {
                let d = random_poly(&ctx, rng.gen_range(1..7), &mut rng);
                let n1 = monic_from_index(&ctx, rng.gen_range(0..4), rng.gen_range(0..q.pow(3)) % q.pow(3));
                let n2 = monic_from_index(&ctx, rng.gen_range(1..4), rng.gen_range(0..q.pow(3)) % q.pow(3));
                let prod = n1.mul(&n2, &ctx);
                assert_eq!(
                    chi_d(&d, &prod, &ctx).unwrap(),
                    chi_d(&d, &n1, &ctx).unwrap() * chi_d(&d, &n2, &ctx).unwrap()
                );
            }
        }
    }

    #[test]
    fn charsum_examples() {
        let ctx = FqContext::new(3, 1).unwrap();
        let d = FqPoly::from_ints(&ctx, &[0, 1, 0, 1]);
        assert_eq!(charsum(&d, 0, &ctx), Ok(1));
        assert_eq!(charsum(&d, 1, &ctx), Ok(0));
        for r in 3..6 {
            assert_eq!(charsum(&d, r, &ctx), Ok(0));
        }
        let not_sf = FqPoly::from_ints(&ctx, &[0, 0, 1]);
        assert_eq!(charsum(&not_sf, 1, &ctx), Err(Error::NotSquarefree));
    }

    #[test]
    fn plan_matches_direct_sums() {
        for (q, d) in [(3u64, 5usize), (5, 4), (9, 3), (3, 6)] {
            let ctx = FqContext::from_order(q).unwrap();
            let plan = CharSumPlan::new(&ctx, d).unwrap();
            for dp in monic_polys(&ctx, d).filter(|f| squarefree(f, &ctx).unwrap()).step_by(7) {
                let fast = plan.charsums(&dp);
                for (r, &s) in fast.iter().enumerate() {
                    assert_eq!(s, charsum(&dp, r, &ctx).unwrap(), "q={q} D={dp} r={r}");
                }
            }
        }
    }

    #[test]
    fn fast_squarefree_agrees() {
        for q in [3u64, 5, 9] {
            let ctx = FqContext::from_order(q).unwrap();
            for f in monic_polys(&ctx, 4) {
                assert_eq!(squarefree_fast(f.coeffs(), &ctx), squarefree(&f, &ctx).unwrap());
            }
        }
    }

    #[test]
    fn large_degree_path_agrees() {
        let ctx = FqContext::new(5, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = random_poly(&ctx, 40, &mut rng);
            let b = monic_from_index(&ctx, 3, rng.gen_range(0..125));
            let chi = |c| ctx.is_square(c);
            assert_eq!(
                symbol_large(a.coeffs(), b.coeffs(), &ctx, &chi),
                symbol_with(a.rem(&b, &ctx).unwrap().coeffs(), b.coeffs(), &ctx, &chi)
            );
        }
    }

    #[test]
    fn cursor_matches_plan() {
        let ctx = FqContext::new(5, 1).unwrap();
        let plan = CharSumPlan::new(&ctx, 3).unwrap();
        let mut cursor = plan.cursor(7);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for step in 0..400 {
            let idx = if step < 200 { step } else { rng.gen_range(0..5u64.pow(7)) };
            let d = monic_from_index(&ctx, 7, idx);
            cursor.set(&d.coeffs()[..7]);
            assert_eq!(cursor.charsums(), plan.charsums(&d), "D={d}");
        }
    }

    #[test]
    fn plan_counts_irreducibles() {
        let ctx = FqContext::new(3, 1).unwrap();
        let plan = CharSumPlan::new(&ctx, 4).unwrap();
        // 3 + 3 + 8 + 18
        assert_eq!(plan.irreducible_count(), 32);
    }
}
