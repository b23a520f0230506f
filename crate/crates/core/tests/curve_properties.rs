use hyperzeta::algebra::{monic_from_index, monic_polys, prime_power, squarefree, FqContext, FqElement, FqPoly};
use hyperzeta::ensemble::{aq_moments_m3, aq_moments_m4, moments, EnsembleSpec, DEFAULT_CURVE_BUDGET};
use hyperzeta::lfunc::{
    a_q, central_value, lpoly_from_charsums, lpoly_from_pointcounts, power_sums, translate, verify_lpoly,
    DEFAULT_POINT_BUDGET,
};
use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer};

fn squarefree_curve() -> impl Strategy<Value = (FqContext, FqPoly)> {
    (prop::sample::select(vec![3u64, 5, 7, 9, 11, 25]), 1usize..=6)
        .prop_flat_map(|(q, d)| {
            let ctx = FqContext::from_order(q).unwrap();
            let size = q.pow(d as u32);
            (Just(ctx), Just(d), 0..size)
        })
        .prop_map(|(ctx, d, i)| {
            let p = monic_from_index(&ctx, d, i);
            (ctx, p)
        })
        .prop_filter("squarefree", |(ctx, p)| squarefree(p, ctx).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn two_constructions_agree((ctx, dp) in squarefree_curve()) {
        let l = lpoly_from_charsums(&dp, &ctx).unwrap();
        let by_counts = lpoly_from_pointcounts(&dp, &ctx, DEFAULT_POINT_BUDGET).unwrap();
        prop_assert_eq!(&l, &by_counts);
        verify_lpoly(&l, &dp, &ctx, 1_000_000).unwrap();
    }

    #[test]
    fn functional_equation_and_weil_bound((ctx, dp) in squarefree_curve()) {
        let l = lpoly_from_charsums(&dp, &ctx).unwrap();
        let (g, q) = (l.g, Integer::from(ctx.q()));
        prop_assert_eq!(l.b.len(), 2 * g + 1);
        for r in 0..=g {
            let rhs = Integer::from(l.b[r]) * Integer::from((&q).pow((g - r) as u32));
            prop_assert_eq!(Integer::from(l.b[2 * g - r]), rhs);
        }
        for (i, p) in power_sums(&l, 2 * g + 2).iter().enumerate() {
            let bound = Integer::from(4 * g * g) * Integer::from((&q).pow(i as u32 + 1));
            prop_assert!(Integer::from(p.square_ref()) <= bound);
        }
        // every inverse root of the completed polynomial has |α q^{-1/2}| = 1
        let v = central_value(&l).to_float(128);
        let trivial = Float::with_val(128, ctx.q()).sqrt().recip() + 1u32;
        let bound = trivial.pow(l.lambda as u32) * Float::with_val(128, 4).pow(g as u32) * 1.000001f64;
        prop_assert!(v.abs() <= bound);
    }

    #[test]
    fn translation_invariance((ctx, dp) in squarefree_curve(), u in 0u64..121) {
        let u = FqElement(u % ctx.q());
        let moved = translate(&dp, u, &ctx);
        prop_assert_eq!(lpoly_from_charsums(&moved, &ctx).unwrap(), lpoly_from_charsums(&dp, &ctx).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// `(α, β) -> (a^2 α, a^3 β)` with `a` a non-square negates `a_q`.
    #[test]
    fn quadratic_twist_negates_trace(q in prop::sample::select(vec![5u64, 7, 11, 13, 25, 27]), alpha in 0u64..27, beta in 0u64..27) {
        let ctx = FqContext::from_order(q).unwrap();
        let (alpha, beta) = (FqElement(alpha % q), FqElement(beta % q));
        let a = ctx.nonsquare();
        let a2 = ctx.square(a);
        let curve = |al, be| FqPoly::new(vec![be, al, FqElement(0), ctx.one()]);
        let base = curve(alpha, beta);
        prop_assume!(squarefree(&base, &ctx).unwrap());
        let twist = curve(ctx.mul(a2, alpha), ctx.mul(ctx.mul(a2, a), beta));
        prop_assert_eq!(a_q(&twist, &ctx), -a_q(&base, &ctx));
    }
}

/// Both constructions agree on every curve with `q^d <= 3^6`.
#[test]
fn dual_construction_exhaustive() {
    let bound = 3u64.pow(6);
    let mut curves = 0;
    for q in (3..=bound).step_by(2).filter(|&q| prime_power(q).is_some()) {
        let ctx = FqContext::from_order(q).unwrap();
        for d in (1..).take_while(|&d| q.pow(d as u32) <= bound) {
            for dp in monic_polys(&ctx, d).filter(|f| squarefree(f, &ctx).unwrap()) {
                let a = lpoly_from_charsums(&dp, &ctx).unwrap();
                let b = lpoly_from_pointcounts(&dp, &ctx, DEFAULT_POINT_BUDGET).unwrap();
                assert_eq!(a, b, "q={q} D={dp}");
                curves += 1;
            }
        }
    }
    assert!(curves > 5_000, "{curves}");
}

#[test]
fn zeroth_moment_is_family_size() {
    for (q, d) in [(3u64, 5usize), (5, 3), (5, 4), (9, 3), (7, 4)] {
        let ctx = FqContext::from_order(q).unwrap();
        let spec = EnsembleSpec::new(&ctx, d, false).unwrap();
        let t = moments(&ctx, d, 0, false, DEFAULT_CURVE_BUDGET, Some(2)).unwrap();
        assert_eq!(t.count, spec.family_size());
        assert_eq!(t.sums[0].x(), &rug::Rational::from(spec.family_size()));
    }
}

#[test]
fn thread_count_invariance() {
    let ctx = FqContext::from_order(7).unwrap();
    let reference = moments(&ctx, 5, 6, true, DEFAULT_CURVE_BUDGET, Some(1)).unwrap();
    for t in [2, 4, 16] {
        assert_eq!(moments(&ctx, 5, 6, true, DEFAULT_CURVE_BUDGET, Some(t)).unwrap(), reference);
    }
}

/// `m_4(q; j) = q m_3(q; j)` for even `j`, `m_3(q; j + 1)` for odd `j`.
#[test]
fn cubic_and_quartic_trace_moments() {
    for q in [5u64, 7, 11, 13, 25] {
        let ctx = FqContext::from_order(q).unwrap();
        let m3 = aq_moments_m3(&ctx, 9, DEFAULT_CURVE_BUDGET).unwrap();
        let m4 = aq_moments_m4(&ctx, 8, DEFAULT_CURVE_BUDGET).unwrap();
        assert_eq!(m3[0], q * q * q - q * q);
        for j in 0..=8usize {
            if j % 2 == 0 {
                assert_eq!(m4[j], Integer::from(&m3[j] * q), "q={q} j={j}");
            } else {
                assert_eq!(m3[j], 0, "q={q} j={j}");
                assert_eq!(m4[j], m3[j + 1], "q={q} j={j}");
            }
        }
    }
}
