//! L-polynomials `𝓛(u, χ_D)` of hyperelliptic curves `y^2 = D(x)`.
//!
//! Two independent constructions are provided: from point counts over
//! `F_{q^r}` (through the exponential of the point-count series) and from
//! character sums of degree `<= g` (through the functional equation). They
//! serve as oracles for each other.

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::algebra::{eval_in_extension, extension_context, squarefree, FqContext, FqElement, FqPoly};
use crate::algebraic::AlgebraicValue;
use crate::charsym::charsum;
use crate::error::{Error, Result};

/// Default bound on the number of field elements enumerated for point counts.
pub const DEFAULT_POINT_BUDGET: u64 = 100_000_000;

/// `𝓛(u) = Σ a(r) u^r` of degree `d - 1`, and the completed
/// `𝓛*(u) = 𝓛(u)/(1 - u)^λ = Σ b(r) u^r` of degree `2g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LPolynomial {
    pub q: u64,
    pub d: usize,
    /// 1 when `d` is even, else 0.
    pub lambda: usize,
    pub g: usize,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

/// `a_{q^r} = q^r + 1 + λ - N_r` for `r = 1..=R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCounts {
    pub a_qr: Vec<i64>,
}

/// Genus and parity indicator for degree `d >= 1`: `2g = d - 1 - λ`.
pub fn genus(d: usize) -> (usize, usize) {
    assert!(d >= 1);
    let lambda = 1 - d % 2;
    ((d - 1 - lambda) / 2, lambda)
}

fn overflow<T>(v: Option<T>) -> Result<T> {
    v.ok_or(Error::Overflow("L-polynomial coefficients"))
}

fn check_curve(d: &FqPoly, ctx: &FqContext) -> Result<usize> {
    let deg = d.degree().ok_or(Error::ZeroPolynomial)?;
    if deg == 0 {
        return Err(Error::InvalidArgument("D must have degree >= 1".into()));
    }
    if !d.is_monic() {
        return Err(Error::InvalidArgument("D must be monic".into()));
    }
    if !squarefree(d, ctx)? {
        return Err(Error::NotSquarefree);
    }
    Ok(deg)
}

impl LPolynomial {
    /// Completes `b(0..=g)` by `b(2g - r) = b(r) q^{g-r}` and recovers `a`.
    pub fn from_lower_b(q: u64, d: usize, lower: &[i64]) -> Result<Self> {
        let (g, lambda) = genus(d);
        assert!(lower.len() > g);
        let mut b = vec![0i64; 2 * g + 1];
        b[..=g].copy_from_slice(&lower[..=g]);
        for r in 0..g {
            let qp = overflow(q.checked_pow((g - r) as u32).and_then(|v| i64::try_from(v).ok()))?;
            b[2 * g - r] = overflow(b[r].checked_mul(qp))?;
        }
        let a = if lambda == 0 {
            b.clone()
        } else {
            let mut a = Vec::with_capacity(2 * g + 2);
            a.push(b[0]);
            for j in 1..=2 * g {
                a.push(overflow(b[j].checked_sub(b[j - 1]))?);
            }
            a.push(-b[2 * g]);
            a
        };
        Ok(LPolynomial { q, d, lambda, g, a, b })
    }

    /// Builds from the character sums `a(j) = Σ_{deg n = j} χ_D(n)` for `j = 0..=g`.
    pub fn from_charsums(q: u64, d: usize, sums: &[i64]) -> Result<Self> {
        let (g, lambda) = genus(d);
        let lower: Vec<i64> = if lambda == 0 {
            sums[..=g].to_vec()
        } else {
            sums[..=g]
                .iter()
                .scan(0i64, |acc, &s| {
                    *acc += s;
                    Some(*acc)
                })
                .collect()
        };
        Self::from_lower_b(q, d, &lower)
    }

    /// `q^h L(1/2) = X + Y√q` with `h = ⌈(d-1)/2⌉`; both parts are integers.
    pub fn scaled_central_value(&self) -> Result<(i64, i64)> {
        let h = self.d / 2;
        let q = self.q as i64;
        let (mut x, mut y) = (0i64, 0i64);
        for (r, &ar) in self.a.iter().enumerate() {
            if r % 2 == 0 {
                let w = overflow(q.checked_pow((h - r / 2) as u32))?;
                x = overflow(x.checked_add(overflow(ar.checked_mul(w))?))?;
            } else {
                let w = overflow(q.checked_pow((h - r.div_ceil(2)) as u32))?;
                y = overflow(y.checked_add(overflow(ar.checked_mul(w))?))?;
            }
        }
        Ok((x, y))
    }

    /// Exponent `h` of the scaling used by [`Self::scaled_central_value`].
    pub fn central_scale(&self) -> usize {
        self.d / 2
    }
}

/// Point counts `a_{q^r} = -Σ_{x ∈ F_{q^r}} χ(D(x))` for `r = 1..=R`.
pub fn point_counts(d: &FqPoly, r_max: usize, ctx: &FqContext, budget: u64) -> Result<PointCounts> {
    check_curve(d, ctx)?;
    let mut a_qr = Vec::with_capacity(r_max);
    for r in 1..=r_max {
        let size = (ctx.q() as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
        if size > budget as u128 {
            return Err(Error::ExtensionTooLarge { size, budget });
        }
        let ext = extension_context(ctx, r)?;
        let field = ext.field();
        let table = (field.q() <= 1 << 24).then(|| field.square_table());
        let mut s = 0i64;
        for x in field.elements() {
            let v = eval_in_extension(d, x, &ext)?;
            s += match &table {
                Some(t) => t[v.0 as usize],
                None => field.is_square(v),
            } as i64;
        }
        a_qr.push(-s);
    }
    Ok(PointCounts { a_qr })
}

/// `𝓛*(u) = (1-u)^{-λ} exp(-Σ_r a_{q^r} u^r / r)`, expanded to degree `g`
/// in exact rationals, then completed by the functional equation.
pub fn lpoly_from_pointcounts(d: &FqPoly, ctx: &FqContext, budget: u64) -> Result<LPolynomial> {
    let deg = check_curve(d, ctx)?;
    let (g, _) = genus(deg);
    let counts = point_counts(d, g, ctx, budget)?;
    lpoly_from_counts(ctx.q(), deg, &counts.a_qr)
}

/// The series step of [`lpoly_from_pointcounts`] from known `a_{q^r}`, `r = 1..=g`.
pub fn lpoly_from_counts(q: u64, d: usize, a_qr: &[i64]) -> Result<LPolynomial> {
    let (g, lambda) = genus(d);
    let mut e = vec![Rational::from(1)];
    for m in 1..=g {
        let mut acc = Rational::new();
        for i in 1..=m {
            acc -= Rational::from(a_qr[i - 1]) * &e[m - i];
        }
        e.push(acc / m as u32);
    }
    let mut lower = Vec::with_capacity(g + 1);
    let mut running = Rational::new();
    for em in &e {
        let coeff = if lambda == 1 {
            running += em;
            running.clone()
        } else {
            em.clone()
        };
        if *coeff.denom() != 1 {
            return Err(Error::VerificationFailed(format!(
                "non-integral L-polynomial coefficient {coeff}"
            )));
        }
        lower.push(overflow(coeff.numer().to_i64())?);
    }
    LPolynomial::from_lower_b(q, d, &lower)
}

/// Builds `𝓛` from character sums of degree `<= g` only.
pub fn lpoly_from_charsums(d: &FqPoly, ctx: &FqContext) -> Result<LPolynomial> {
    let deg = check_curve(d, ctx)?;
    let (g, _) = genus(deg);
    let sums = (0..=g).map(|j| charsum(d, j, ctx)).collect::<Result<Vec<_>>>()?;
    LPolynomial::from_charsums(ctx.q(), deg, &sums)
}

/// `L(1/2, χ_D) = 𝓛(q^{-1/2})` as an exact element of `Q(√q)`.
pub fn central_value(l: &LPolynomial) -> AlgebraicValue {
    let q = Integer::from(l.q);
    let mut x = Rational::new();
    let mut y = Rational::new();
    for (r, &ar) in l.a.iter().enumerate() {
        if r % 2 == 0 {
            x += Rational::from((Integer::from(ar), Integer::from((&q).pow((r / 2) as u32))));
        } else {
            y += Rational::from((Integer::from(ar), Integer::from((&q).pow(r.div_ceil(2) as u32))));
        }
    }
    AlgebraicValue::new(x, y, q)
}

/// Outcome of [`verify_lpoly`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    /// Number of power sums compared against brute-force point counts.
    pub power_sums_checked: usize,
}

/// Newton power sums `p_r = Σ α_j^r` of the inverse roots of `𝓛*`, `r = 1..=count`.
pub fn power_sums(l: &LPolynomial, count: usize) -> Vec<Integer> {
    let bcoef = |i: usize| Integer::from(l.b.get(i).copied().unwrap_or(0));
    let mut p: Vec<Integer> = Vec::with_capacity(count);
    for r in 1..=count {
        let mut v = -(bcoef(r) * r as u32);
        for i in 1..r {
            v -= &p[i - 1] * bcoef(r - i);
        }
        p.push(v);
    }
    p
}

/// Checks the functional equation, agreement of power sums with point
/// counts over extensions (beyond the `g` used in construction), and the
/// Weil bound `|p_r| <= 2g q^{r/2}`.
pub fn verify_lpoly(l: &LPolynomial, d: &FqPoly, ctx: &FqContext, budget: u64) -> Result<VerifyReport> {
    let g = l.g;
    if l.b.len() != 2 * g + 1 || l.b[0] != 1 {
        return Err(Error::VerificationFailed("b has the wrong shape".into()));
    }
    let q = Integer::from(l.q);
    for r in 0..=g {
        let lhs = Integer::from(l.b[2 * g - r]);
        let rhs = Integer::from(l.b[r]) * Integer::from((&q).pow((g - r) as u32));
        if lhs != rhs {
            return Err(Error::VerificationFailed(format!(
                "functional equation fails at r = {r}: b({}) = {lhs} but b({r}) q^{} = {rhs}",
                2 * g - r,
                g - r
            )));
        }
    }
    let mut r_max = (2 * g).max(1);
    while r_max > 0 && (l.q as u128).checked_pow(r_max as u32).is_none_or(|s| s > budget as u128) {
        r_max -= 1;
    }
    let sums = power_sums(l, (2 * g).max(r_max).max(1));
    for (i, p) in sums.iter().enumerate() {
        let r = i as u32 + 1;
        // p_r^2 <= 4 g^2 q^r
        let bound = Integer::from(4 * g * g) * Integer::from((&q).pow(r));
        if Integer::from(p.square_ref()) > bound {
            return Err(Error::VerificationFailed(format!("Weil bound fails for p_{r} = {p}")));
        }
    }
    let counts = point_counts(d, r_max, ctx, budget)?;
    for (i, &aq) in counts.a_qr.iter().enumerate() {
        let predicted = Integer::from(&sums[i] + l.lambda as u32);
        if predicted != aq {
            return Err(Error::VerificationFailed(format!(
                "power sum p_{} + λ = {predicted} disagrees with point count a = {aq}",
                i + 1
            )));
        }
    }
    Ok(VerifyReport { power_sums_checked: counts.a_qr.len() })
}

/// Point-count trace `a_q` of `y^2 = D(x)` over the base field.
pub fn a_q(d: &FqPoly, ctx: &FqContext) -> i64 {
    let mut s = 0i64;
    for x in ctx.elements() {
        s += ctx.is_square(d.eval(x, ctx)) as i64;
    }
    -s
}

/// Shifts `D(x) -> D(x + u)`.
pub fn translate(d: &FqPoly, u: FqElement, ctx: &FqContext) -> FqPoly {
    let shift = FqPoly::new(vec![u, FqElement::ONE]);
    d.coeffs()
        .iter()
        .rev()
        .fold(FqPoly::zero(), |acc, &c| acc.mul(&shift, ctx).add(&FqPoly::constant(c), ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::monic_polys;

    fn sf_curves(ctx: &FqContext, d: usize) -> Vec<FqPoly> {
        monic_polys(ctx, d).filter(|f| squarefree(f, ctx).unwrap()).collect()
    }

    #[test]
    fn genus_and_parity() {
        assert_eq!(genus(1), (0, 0));
        assert_eq!(genus(2), (0, 1));
        assert_eq!(genus(3), (1, 0));
        assert_eq!(genus(4), (1, 1));
        assert_eq!(genus(13), (6, 0));
    }

    #[test]
    fn x3_plus_x_over_f3() {
        let ctx = FqContext::new(3, 1).unwrap();
        let d = FqPoly::from_ints(&ctx, &[0, 1, 0, 1]);
        assert_eq!(point_counts(&d, 1, &ctx, DEFAULT_POINT_BUDGET).unwrap().a_qr, vec![0]);
        let l = lpoly_from_pointcounts(&d, &ctx, DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(l.a, vec![1, 0, 3]);
        assert_eq!(l, lpoly_from_charsums(&d, &ctx).unwrap());
        let c = central_value(&l);
        assert_eq!(c, AlgebraicValue::from_rational(Rational::from(2), Integer::from(3)));
        assert_eq!(l.scaled_central_value().unwrap(), (6, 0));
    }

    #[test]
    fn small_degrees() {
        let ctx = FqContext::new(3, 1).unwrap();
        let d1 = FqPoly::x();
        assert_eq!(point_counts(&d1, 2, &ctx, 100).unwrap().a_qr, vec![0, 0]);
        let l1 = lpoly_from_pointcounts(&d1, &ctx, 100).unwrap();
        assert_eq!(l1.a, vec![1]);
        assert_eq!(central_value(&l1), AlgebraicValue::one(Integer::from(3)));
        for d in sf_curves(&ctx, 2) {
            let l = lpoly_from_pointcounts(&d, &ctx, 100).unwrap();
            assert_eq!(l.a, vec![1, -1]);
            assert_eq!(l, lpoly_from_charsums(&d, &ctx).unwrap());
            let report = verify_lpoly(&l, &d, &ctx, 100).unwrap();
            assert_eq!(report.power_sums_checked, 1);
            assert_eq!(power_sums(&l, 1)[0], 0);
        }
    }

    #[test]
    fn table_rows_for_degrees_three_and_four() {
        let ctx = FqContext::new(5, 1).unwrap();
        for d in sf_curves(&ctx, 3) {
            let aq = a_q(&d, &ctx);
            let l = lpoly_from_charsums(&d, &ctx).unwrap();
            assert_eq!(l.a, vec![1, -aq, 5]);
            let expected = AlgebraicValue::new(Rational::from(2), Rational::from((-aq, 5)), Integer::from(5));
            assert_eq!(central_value(&l), expected);
        }
        for d in sf_curves(&ctx, 4) {
            let aq = a_q(&d, &ctx);
            let l = lpoly_from_charsums(&d, &ctx).unwrap();
            // (1 - u)(1 - (a_q - 1)u + q u^2)
            assert_eq!(l.a, vec![1, -aq, 5 + aq - 1, -5]);
            assert_eq!(l.b[2], 5);
        }
    }

    #[test]
    fn dual_construction_small_fields() {
        for (q, d) in [(3u64, 3usize), (3, 4), (5, 3), (5, 4), (3, 5), (3, 6)] {
            let ctx = FqContext::from_order(q).unwrap();
            for dp in sf_curves(&ctx, d) {
                assert_eq!(
                    lpoly_from_pointcounts(&dp, &ctx, DEFAULT_POINT_BUDGET).unwrap(),
                    lpoly_from_charsums(&dp, &ctx).unwrap(),
                    "q={q} D={dp}"
                );
            }
        }
    }

    #[test]
    fn verify_exhaustive_genus_two() {
        let ctx = FqContext::new(3, 1).unwrap();
        let curves = sf_curves(&ctx, 5);
        assert_eq!(curves.len(), 162);
        for d in curves {
            let l = lpoly_from_charsums(&d, &ctx).unwrap();
            let report = verify_lpoly(&l, &d, &ctx, DEFAULT_POINT_BUDGET).unwrap();
            assert_eq!(report.power_sums_checked, 4);
        }
    }

    #[test]
    fn tampered_polynomial_is_rejected() {
        let ctx = FqContext::new(3, 1).unwrap();
        let d = FqPoly::from_ints(&ctx, &[1, 0, 0, 0, 0, 1]);
        let mut l = lpoly_from_charsums(&d, &ctx).unwrap();
        l.b[4] -= 1;
        match verify_lpoly(&l, &d, &ctx, DEFAULT_POINT_BUDGET) {
            Err(Error::VerificationFailed(msg)) => assert!(msg.contains("functional equation")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn extension_budget_is_enforced() {
        let ctx = FqContext::new(3, 1).unwrap();
        let d = FqPoly::from_ints(&ctx, &[0, 1, 0, 1]);
        assert!(matches!(point_counts(&d, 3, &ctx, 10), Err(Error::ExtensionTooLarge { size: 27, budget: 10 })));
        assert_eq!(point_counts(&FqPoly::from_ints(&ctx, &[0, 0, 1]), 1, &ctx, 10), Err(Error::NotSquarefree));
    }

    #[test]
    fn translate_shifts_roots() {
        let ctx = FqContext::new(5, 1).unwrap();
        let d = FqPoly::from_ints(&ctx, &[3, 1, 0, 1]);
        let t = translate(&d, FqElement(2), &ctx);
        for x in ctx.elements() {
            assert_eq!(t.eval(x, &ctx), d.eval(ctx.add(x, FqElement(2)), &ctx));
        }
    }
}
