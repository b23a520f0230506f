//! Exhaustive enumeration of the family `H_{q,d}` of squarefree monic
//! polynomials of degree `d`, and exact moments over it.
//!
//! Central values are collected as a histogram of the integral scaled values
//! `q^h L(1/2) = X + Y√q`; exact powers are formed once per distinct value.
//! When `p ∤ d` the translation `x -> x + u` lets us enumerate only the
//! reduced family with `c_{d-1} = 0` and multiply by `q`.

use std::collections::HashMap;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::algebra::{squarefree, FqContext, FqElement, FqPoly};
use crate::algebraic::AlgebraicValue;
use crate::charsym::{squarefree_fast, CharSumPlan};
use crate::error::{Error, Result};
use crate::lfunc::{genus, LPolynomial};

/// Default bound on the number of enumerated polynomials.
pub const DEFAULT_CURVE_BUDGET: u64 = 100_000_000;

/// Which family to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnsembleSpec {
    pub q: u64,
    pub d: usize,
    /// Enumerate `c_{d-1} = 0` only; requires `p ∤ d`.
    pub reduced: bool,
}

impl EnsembleSpec {
    pub fn new(ctx: &FqContext, d: usize, reduced: bool) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("degree must be >= 1".into()));
        }
        if reduced && (d as u64).is_multiple_of(ctx.p()) {
            return Err(Error::InvalidArgument(format!(
                "the reduced family needs p ∤ d (p = {}, d = {d})",
                ctx.p()
            )));
        }
        Ok(EnsembleSpec { q: ctx.q(), d, reduced })
    }

    /// Number of free lower coefficients.
    fn free(&self) -> usize {
        if self.reduced {
            self.d - 1
        } else {
            self.d
        }
    }

    /// Number of polynomials visited, before the squarefree filter.
    pub fn enumeration_size(&self) -> u128 {
        (self.q as u128).checked_pow(self.free() as u32).unwrap_or(u128::MAX)
    }

    /// Weight of each enumerated curve in the full family.
    pub fn multiplier(&self) -> u64 {
        if self.reduced {
            self.q
        } else {
            1
        }
    }

    /// `|H_{q,d}|` from the closed form.
    pub fn family_size(&self) -> Integer {
        let q = Integer::from(self.q);
        if self.d == 1 {
            q
        } else {
            Integer::from((&q).pow(self.d as u32)) - Integer::from((&q).pow(self.d as u32 - 1))
        }
    }

    fn check_budget(&self, budget: u64) -> Result<()> {
        let size = self.enumeration_size();
        if size > budget as u128 {
            return Err(Error::BudgetExceeded { size, budget });
        }
        Ok(())
    }

    /// Lower coefficients `c_0..c_{d-1}` of the `index`-th enumerated polynomial.
    fn lower_coeffs(&self, mut index: u64, out: &mut Vec<FqElement>) {
        out.clear();
        for _ in 0..self.free() {
            out.push(FqElement(index % self.q));
            index /= self.q;
        }
        if self.reduced {
            out.push(FqElement::ZERO);
        }
    }

    /// Chunks by the top free coefficient; returns `(start, end)` index ranges.
    fn chunks(&self) -> Vec<(u64, u64)> {
        let total = self.enumeration_size() as u64;
        let free = self.free();
        if free == 0 {
            return vec![(0, total)];
        }
        let step = total / self.q;
        (0..self.q).map(|t| (t * step, (t + 1) * step)).collect()
    }
}

/// Runs `f` on a dedicated pool when a thread count is given.
fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Visits every squarefree member of the (possibly reduced) family in
/// parallel chunks, folding per-chunk state with `fold` and merging with `merge`.
fn fold_family<S, F, M>(
    ctx: &FqContext,
    spec: &EnsembleSpec,
    threads: Option<usize>,
    init: impl Fn() -> S + Sync + Send,
    fold: F,
    merge: M,
) -> Result<S>
where
    S: Send,
    F: Fn(&mut S, u64, &FqPoly, &LPolynomial) + Sync + Send,
    M: Fn(S, S) -> S + Sync + Send,
{
    let (g, _) = genus(spec.d);
    let plan = CharSumPlan::new(ctx, g)?;
    let chunks = spec.chunks();
    let results: Vec<Result<S>> = with_threads(threads, || {
        chunks
            .par_iter()
            .map(|&(start, end)| {
                let mut state = init();
                let mut lower = Vec::with_capacity(spec.d);
                let mut cursor = plan.cursor(spec.d);
                for index in start..end {
                    spec.lower_coeffs(index, &mut lower);
                    let dpoly = FqPoly::monic_from_lower(&lower);
                    if !squarefree_fast(dpoly.coeffs(), ctx) {
                        continue;
                    }
                    cursor.set(&lower);
                    let sums = cursor.charsums();
                    let l = LPolynomial::from_charsums(spec.q, spec.d, &sums)?;
                    fold(&mut state, index, &dpoly, &l);
                }
                Ok(state)
            })
            .collect()
    })?;
    let mut acc: Option<S> = None;
    for r in results {
        let s = r?;
        acc = Some(match acc {
            None => s,
            Some(a) => merge(a, s),
        });
    }
    Ok(acc.unwrap_or_else(init))
}

/// Every squarefree member with its L-polynomial, in enumeration order.
pub fn enumerate_lpolys(
    ctx: &FqContext,
    d: usize,
    reduced: bool,
    budget: u64,
    threads: Option<usize>,
) -> Result<Vec<(FqPoly, LPolynomial)>> {
    let spec = EnsembleSpec::new(ctx, d, reduced)?;
    spec.check_budget(budget)?;
    let mut out = fold_family(
        ctx,
        &spec,
        threads,
        Vec::new,
        |v: &mut Vec<(u64, FqPoly, LPolynomial)>, i, dp, l| v.push((i, dp.clone(), l.clone())),
        |mut a, b| {
            a.extend(b);
            a
        },
    )?;
    out.sort_by_key(|e| e.0);
    Ok(out.into_iter().map(|(_, dp, l)| (dp, l)).collect())
}

/// Histogram of scaled central values `q^h L(1/2) = X + Y√q`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CentralHistogram {
    pub counts: HashMap<(i64, i64), u64>,
    pub curves: u64,
}

impl CentralHistogram {
    pub fn insert(&mut self, value: (i64, i64)) {
        *self.counts.entry(value).or_insert(0) += 1;
        self.curves += 1;
    }

    pub fn merge(mut self, other: CentralHistogram) -> CentralHistogram {
        if self.counts.len() < other.counts.len() {
            return other.merge(self);
        }
        for (k, v) in other.counts {
            *self.counts.entry(k).or_insert(0) += v;
        }
        self.curves += other.curves;
        self
    }
}

/// Exact moment sums over a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentTable {
    pub q: u64,
    pub d: usize,
    pub k_max: u32,
    /// `#H_{q,d}`.
    pub count: Integer,
    /// `S_k = Σ_{D ∈ H} L(1/2, χ_D)^k` for `k = 0..=k_max`.
    pub sums: Vec<AlgebraicValue>,
}

impl MomentTable {
    /// `M_k = S_k / #H`.
    pub fn moment(&self, k: u32) -> AlgebraicValue {
        self.sums[k as usize].scale(&Rational::from((Integer::from(1), self.count.clone())))
    }

    /// Builds the table from a histogram of scaled values.
    pub fn from_histogram(q: u64, d: usize, k_max: u32, hist: &CentralHistogram, multiplier: u64) -> Self {
        let qi = Integer::from(q);
        let h = (d / 2) as u32;
        let mut xs = vec![Integer::new(); k_max as usize + 1];
        let mut ys = vec![Integer::new(); k_max as usize + 1];
        // sorted for reproducible intermediate growth; the result is exact anyway
        let mut entries: Vec<_> = hist.counts.iter().collect();
        entries.sort();
        for (&(x0, y0), &c) in entries {
            let (x0, y0) = (Integer::from(x0), Integer::from(y0));
            let (mut x, mut y) = (Integer::from(c), Integer::new());
            for k in 0..=k_max as usize {
                xs[k] += &x;
                ys[k] += &y;
                let nx = Integer::from(&x * &x0) + Integer::from(&y * &y0) * &qi;
                let ny = Integer::from(&x * &y0) + Integer::from(&y * &x0);
                x = nx;
                y = ny;
            }
        }
        let sums = (0..=k_max as usize)
            .map(|k| {
                let den = Integer::from((&qi).pow(h * k as u32));
                let m = Integer::from(multiplier);
                AlgebraicValue::new(
                    Rational::from((Integer::from(&xs[k] * &m), den.clone())),
                    Rational::from((Integer::from(&ys[k] * &m), den)),
                    qi.clone(),
                )
            })
            .collect();
        MomentTable {
            q,
            d,
            k_max,
            count: Integer::from(hist.curves) * multiplier,
            sums,
        }
    }

    /// Builds the table from explicit L-polynomials, each of weight `multiplier`.
    pub fn from_lpolys<'a>(
        q: u64,
        d: usize,
        k_max: u32,
        lpolys: impl IntoIterator<Item = &'a LPolynomial>,
        multiplier: u64,
    ) -> Result<Self> {
        let mut hist = CentralHistogram::default();
        for l in lpolys {
            hist.insert(l.scaled_central_value()?);
        }
        Ok(Self::from_histogram(q, d, k_max, &hist, multiplier))
    }
}

/// Histogram of scaled central values over the family.
pub fn central_histogram(
    ctx: &FqContext,
    d: usize,
    reduced: bool,
    budget: u64,
    threads: Option<usize>,
) -> Result<CentralHistogram> {
    let spec = EnsembleSpec::new(ctx, d, reduced)?;
    spec.check_budget(budget)?;
    let overflowed = std::sync::atomic::AtomicBool::new(false);
    let hist = fold_family(
        ctx,
        &spec,
        threads,
        CentralHistogram::default,
        |h, _, _, l| match l.scaled_central_value() {
            Ok(v) => h.insert(v),
            Err(_) => overflowed.store(true, std::sync::atomic::Ordering::Relaxed),
        },
        CentralHistogram::merge,
    )?;
    if overflowed.into_inner() {
        return Err(Error::Overflow("scaled central values"));
    }
    Ok(hist)
}

/// Exact sums `Σ_{D ∈ H_{q,d}} L(1/2, χ_D)^k` for `k = 0..=k_max`.
pub fn moments(
    ctx: &FqContext,
    d: usize,
    k_max: u32,
    reduced: bool,
    budget: u64,
    threads: Option<usize>,
) -> Result<MomentTable> {
    let spec = EnsembleSpec::new(ctx, d, reduced)?;
    let hist = central_histogram(ctx, d, reduced, budget, threads)?;
    Ok(MomentTable::from_histogram(ctx.q(), d, k_max, &hist, spec.multiplier()))
}

/// `a_q` of `y^2 = D(x)` using a precomputed quadratic-character table.
fn a_q_with(d: &FqPoly, ctx: &FqContext, squares: &[i8]) -> i64 {
    -ctx.elements().map(|x| squares[d.eval(x, ctx).0 as usize] as i64).sum::<i64>()
}

/// Histogram of `a_q` over `H_{q,d}` by direct point counting.
pub fn aq_histogram(ctx: &FqContext, d: usize, budget: u64) -> Result<HashMap<i64, u64>> {
    let spec = EnsembleSpec::new(ctx, d, false)?;
    spec.check_budget(budget)?;
    let squares = ctx.square_table();
    let chunks = spec.chunks();
    let parts: Vec<Result<HashMap<i64, u64>>> = chunks
        .par_iter()
        .map(|&(start, end)| {
            let mut h = HashMap::new();
            let mut lower = Vec::with_capacity(d);
            for index in start..end {
                spec.lower_coeffs(index, &mut lower);
                let dp = FqPoly::monic_from_lower(&lower);
                if squarefree(&dp, ctx)? {
                    *h.entry(a_q_with(&dp, ctx, &squares)).or_insert(0) += 1;
                }
            }
            Ok(h)
        })
        .collect();
    let mut total = HashMap::new();
    for p in parts {
        for (k, v) in p? {
            *total.entry(k).or_insert(0) += v;
        }
    }
    Ok(total)
}

fn power_sum(hist: &HashMap<i64, u64>, shift: i64, sign: i64, j: u32) -> Integer {
    let mut keys: Vec<_> = hist.iter().collect();
    keys.sort();
    keys.into_iter()
        .map(|(&a, &c)| Integer::from(shift + sign * a).pow(j) * c)
        .sum()
}

/// `m_3(q; j) = Σ_{D ∈ H_{q,3}} (-a_q)^j` for `j = 0..=j_max`.
pub fn aq_moments_m3(ctx: &FqContext, j_max: u32, budget: u64) -> Result<Vec<Integer>> {
    let h = aq_histogram(ctx, 3, budget)?;
    Ok((0..=j_max).map(|j| power_sum(&h, 0, -1, j)).collect())
}

/// `m_4(q; j) = Σ_{D ∈ H_{q,4}} (1 - a_q)^j` for `j = 0..=j_max`.
pub fn aq_moments_m4(ctx: &FqContext, j_max: u32, budget: u64) -> Result<Vec<Integer>> {
    let h = aq_histogram(ctx, 4, budget)?;
    Ok((0..=j_max).map(|j| power_sum(&h, 1, -1, j)).collect())
}

pub fn aq_moment_m3(ctx: &FqContext, j: u32) -> Result<Integer> {
    Ok(aq_moments_m3(ctx, j, DEFAULT_CURVE_BUDGET)?.pop().unwrap())
}

pub fn aq_moment_m4(ctx: &FqContext, j: u32) -> Result<Integer> {
    Ok(aq_moments_m4(ctx, j, DEFAULT_CURVE_BUDGET)?.pop().unwrap())
}

/// Values `Σ_x (x^3 + Ax + B | F_p)` for every pair `(A, B)`, squarefree or not.
fn cubic_character_sums(ctx: &FqContext) -> Vec<i64> {
    let squares = ctx.square_table();
    let cubes: Vec<FqElement> = ctx.elements().map(|x| ctx.mul(ctx.square(x), x)).collect();
    let mut out = Vec::with_capacity((ctx.q() * ctx.q()) as usize);
    for a in ctx.elements() {
        let ax: Vec<FqElement> = ctx.elements().map(|x| ctx.mul(a, x)).collect();
        for b in ctx.elements() {
            let s: i64 = (0..ctx.q() as usize)
                .map(|i| squares[ctx.add(ctx.add(cubes[i], ax[i]), b).0 as usize] as i64)
                .sum();
            out.push(s);
        }
    }
    out
}

/// `S_{j/2} = Σ_{A,B ∈ F_p} (Σ_x (x^3 + Ax + B | F_p))^j` with `j = 2·halfj`, by brute force.
pub fn birch_sum(ctx: &FqContext, halfj: u32) -> Integer {
    birch_sums(ctx, halfj).pop().unwrap()
}

/// [`birch_sum`] for every `halfj` in `0..=max_halfj`.
pub fn birch_sums(ctx: &FqContext, max_halfj: u32) -> Vec<Integer> {
    let mut hist: HashMap<i64, u64> = HashMap::new();
    for s in cubic_character_sums(ctx) {
        *hist.entry(s).or_insert(0) += 1;
    }
    (0..=max_halfj).map(|h| power_sum(&hist, 0, 1, 2 * h)).collect()
}

/// Sum of `(-a_q)^j` over the reduced family `x^3 + Ax + B`, squarefree only.
pub fn reduced_cubic_moment(ctx: &FqContext, j: u32) -> Result<Integer> {
    let mut hist: HashMap<i64, u64> = HashMap::new();
    let squares = ctx.square_table();
    for a in ctx.elements() {
        for b in ctx.elements() {
            let dp = FqPoly::new(vec![b, a, FqElement::ZERO, FqElement::ONE]);
            if squarefree(&dp, ctx)? {
                *hist.entry(a_q_with(&dp, ctx, &squares)).or_insert(0) += 1;
            }
        }
    }
    Ok(power_sum(&hist, 0, -1, j))
}

/// The change of variables taking `y^2 = x^4 + Ax^2 + Bx + C` to
/// `Y^2 = X^3 + αX + β` with `α = -C/4 - A^2/48`, `β = A^3/864 + B^2/64 - AC/24`.
pub fn quartic_to_cubic(
    a: FqElement,
    b: FqElement,
    c: FqElement,
    ctx: &FqContext,
) -> Result<(FqElement, FqElement)> {
    if ctx.p() <= 3 {
        return Err(Error::CharacteristicTooSmall(ctx.p()));
    }
    let frac = |n: i64| ctx.inv(ctx.from_int(n)).unwrap();
    let a2 = ctx.square(a);
    let alpha = ctx.sub(ctx.neg(ctx.mul(c, frac(4))), ctx.mul(a2, frac(48)));
    let beta = ctx.sub(
        ctx.add(ctx.mul(ctx.mul(a2, a), frac(864)), ctx.mul(ctx.square(b), frac(64))),
        ctx.mul(ctx.mul(a, c), frac(24)),
    );
    Ok((alpha, beta))
}
