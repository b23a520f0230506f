//! The Andrade–Keating prediction `Q_k(q; d)` for the `k`-th moment.
//!
//! `Q_k` is a `k`-fold residue at the origin. It is evaluated as the limit of
//! the signed sum `Σ_ε K(ε_1 α_1, ..., ε_k α_k)` with tiny distinct shifts
//! `α_j = j · 10^{-E}`, where `K(u) = H(u) e^{g Σ u_j}`. Each term is of size
//! `10^{E k(k+1)/2}` and the sum is `O(1)`, so the working precision must
//! exceed `E k(k+1)/2` digits.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Assign, Float, Integer, Rational};

use crate::algebra::{count_irreducible, is_prime, prime_power};
use crate::error::{Error, Result};
use crate::lfunc::genus;
use crate::render::bits_for_digits;

/// Shift exponent `E` used unless overridden.
pub const DEFAULT_SHIFT_EXPONENT: u32 = 65;
/// Significant digits requested unless overridden.
pub const DEFAULT_TARGET_DIGITS: u32 = 22;
/// Digits held back from the certified estimate.
const MARGIN: i64 = 10;

/// Whether `d = 2g + 1` or `d = 2g + 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(d: usize) -> Self {
        if d % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// The degree `d` with genus `g` and this parity.
    pub fn degree(self, g: u32) -> usize {
        match self {
            Parity::Odd => 2 * g as usize + 1,
            Parity::Even => 2 * g as usize + 2,
        }
    }
}

fn triangular(k: u32) -> u32 {
    k * (k + 1) / 2
}

/// Digits lost to rounding amplified by `i_N(q)`.
fn amplification(q: u64, truncation: u32) -> i64 {
    (truncation as f64 * (q as f64).log10()).ceil() as i64
}

/// Digits of `Q_k` left by dropping the degrees `n > N`.
///
/// The degree-`n` Euler factors enter the residue like a genus shifted by
/// about `n`, so the dropped tail is of relative size
/// `q^{-N} ∏_{i<=j} (2N + i + j)/(i + j)`.
pub fn truncation_digits(q: u64, k: u32, truncation: u32) -> f64 {
    let n = truncation as f64;
    let mut growth = 0.0;
    for i in 1..=k {
        for j in i..=k {
            growth += ((2.0 * n + (i + j) as f64) / (i + j) as f64).log10();
        }
    }
    n * (q as f64).log10() - growth
}

/// Precision parameters for one evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecisionContext {
    /// Working precision in decimal digits.
    pub digits: u32,
    /// Requested significant digits of the result.
    pub target_digits: u32,
    /// Shifts are `α_j = j · 10^{-shift_exponent}`.
    pub shift_exponent: u32,
    /// Degrees `n <= truncation` are kept in the Euler products.
    pub truncation: u32,
}

impl PrecisionContext {
    /// Defaults sized for `Q_k(q; ·)` with `target_digits` correct digits.
    pub fn new(q: u64, k: u32, target_digits: u32) -> Self {
        let e = DEFAULT_SHIFT_EXPONENT;
        let n = Self::required_truncation(q, k, target_digits);
        PrecisionContext {
            digits: Self::required_digits(q, k, e, target_digits, n),
            target_digits,
            shift_exponent: e,
            truncation: n,
        }
    }

    /// Cancellation (`E k(k+1)/2`), the target, rounding amplified by
    /// `i_n(q) ≈ q^n/n` up to `n = N`, and a guard.
    pub fn required_digits(q: u64, k: u32, shift_exponent: u32, target_digits: u32, truncation: u32) -> u32 {
        shift_exponent * triangular(k) + target_digits + 20 + amplification(q, truncation) as u32
    }

    /// Smallest `N` whose truncation estimate leaves `target + 5` digits.
    pub fn required_truncation(q: u64, k: u32, target_digits: u32) -> u32 {
        let need = target_digits as f64 + 5.0;
        (1u32..).find(|&n| truncation_digits(q, k, n) >= need).unwrap()
    }

    /// Changes `E`, keeping the digits beyond the cancellation unchanged.
    pub fn with_shift_exponent(mut self, k: u32, e: u32) -> Self {
        let t = triangular(k) as i64;
        let extra = self.digits as i64 - self.shift_exponent as i64 * t;
        self.shift_exponent = e;
        self.digits = (e as i64 * t + extra).max(1) as u32;
        self
    }

    pub fn with_digits(mut self, digits: u32) -> Self {
        self.digits = digits;
        self
    }

    /// Changes `N` only; the working precision is left as is.
    pub fn with_truncation(mut self, n: u32) -> Self {
        self.truncation = n;
        self
    }

    pub fn bits(&self) -> u32 {
        bits_for_digits(self.digits) + 64
    }

    /// Estimated correct digits of `Q_k`: limited by the `O(α^2)` shift error,
    /// the cancellation, and the Euler-product truncation.
    pub fn certified_digits(&self, q: u64, k: u32) -> i64 {
        let trunc = truncation_digits(q, k, self.truncation).floor() as i64 - 5;
        let shift = 2 * self.shift_exponent as i64 - MARGIN;
        let cancel = self.digits as i64
            - (self.shift_exponent * triangular(k)) as i64
            - amplification(q, self.truncation)
            - MARGIN;
        shift.min(cancel).min(trunc)
    }

    /// Checks the invariants for `Q_k(q; ·)`.
    pub fn validate(&self, q: u64, k: u32) -> Result<()> {
        check_q(q)?;
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if self.truncation == 0 || self.shift_exponent == 0 || self.target_digits == 0 {
            return Err(Error::InvalidArgument("precision parameters must be positive".into()));
        }
        // the largest shift must stay well inside |u| < (ln q)/2
        if (k as f64).log10() - self.shift_exponent as f64 > ((q as f64).ln() / 4.0).log10() {
            return Err(Error::InvalidArgument(format!("shift exponent {} too small", self.shift_exponent)));
        }
        let cert = self.certified_digits(q, k);
        if cert < self.target_digits as i64 {
            return Err(Error::PrecisionInsufficient(format!(
                "{} digits requested but only {cert} supported by digits={}, E={}, N={}",
                self.target_digits, self.digits, self.shift_exponent, self.truncation
            )));
        }
        Ok(())
    }
}

/// A value of `Q_k(q; d)` with its estimated number of correct digits.
#[derive(Clone, Debug)]
pub struct AKPrediction {
    pub q: u64,
    pub d: usize,
    pub k: u32,
    pub value: Float,
    pub certified_digits: u32,
}

fn check_q(q: u64) -> Result<()> {
    match prime_power(q) {
        Some((p, _)) if p != 2 => Ok(()),
        _ => Err(Error::InvalidArgument(format!("q = {q} is not an odd prime power"))),
    }
}

/// Per-degree data for products over monic irreducibles grouped by degree.
struct Level {
    /// `i_n(q)`.
    count: Float,
    /// `q^{-n}`.
    q_inv: Float,
    /// `q^{-n/2}`.
    q_half_inv: Float,
}

fn levels(q: u64, n_max: u32, prec: u32) -> Vec<Level> {
    let qi = Integer::from(q);
    let root_inv = Float::with_val(prec, q).sqrt().recip();
    let mut q_half_inv = Float::with_val(prec, 1);
    (1..=n_max)
        .map(|n| {
            q_half_inv *= &root_inv;
            let q_inv = Float::with_val(prec, q_half_inv.square_ref());
            Level {
                count: Float::with_val(prec, &count_irreducible(n, &qi)),
                q_inv,
                q_half_inv: q_half_inv.clone(),
            }
        })
        .collect()
}

/// `P(1) = ∏_P (1 - 1/((|P|+1)|P|))`.
pub fn euler_p1(q: u64, ctx: &PrecisionContext) -> Result<Float> {
    check_q(q)?;
    let prec = ctx.bits();
    let mut log = Float::with_val(prec, 0);
    for lvl in levels(q, ctx.truncation, prec) {
        // x = q^{-2n}/(1 + q^{-n})
        let x = Float::with_val(prec, lvl.q_inv.square_ref()) / Float::with_val(prec, &lvl.q_inv + 1u32);
        log += Float::with_val(prec, (-x).ln_1p_ref()) * &lvl.count;
    }
    Ok(log.exp())
}

/// `Σ_P deg(P)/(|P|(|P|+1) - 1)`.
pub fn prime_deg_sum(q: u64, ctx: &PrecisionContext) -> Result<Float> {
    check_q(q)?;
    let prec = ctx.bits();
    let mut sum = Float::with_val(prec, 0);
    for (i, lvl) in levels(q, ctx.truncation, prec).into_iter().enumerate() {
        // 1/(q^n(q^n+1) - 1) = x/(1 - x) with x = q^{-2n}/(1 + q^{-n})
        let x = Float::with_val(prec, lvl.q_inv.square_ref()) / Float::with_val(prec, &lvl.q_inv + 1u32);
        let term = Float::with_val(prec, &x / Float::with_val(prec, 1u32 - &x));
        sum += term * &lvl.count * (i as u32 + 1);
    }
    Ok(sum)
}

/// Closed form of `Q_1(q; d)`:
/// `½P(1)(d + 1 + 4S)` for odd `d`, `½P(1)(d - 2/(√q - 1) + 4S)` for even `d`.
pub fn q1_closed(q: u64, d: usize, ctx: &PrecisionContext) -> Result<AKPrediction> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let prec = ctx.bits();
    let p1 = euler_p1(q, ctx)?;
    let s = prime_deg_sum(q, ctx)?;
    let mut inner = Float::with_val(prec, &s * 4u32) + d as u32;
    match Parity::of(d) {
        Parity::Odd => inner += 1u32,
        Parity::Even => {
            let root = Float::with_val(prec, q).sqrt() - 1u32;
            inner -= Float::with_val(prec, 2u32 / &root);
        }
    }
    let value = p1 * inner / 2u32;
    let cert = (ctx.digits as i64 - amplification(q, ctx.truncation) - MARGIN)
        .min(truncation_digits(q, 1, ctx.truncation).floor() as i64 - 5);
    Ok(AKPrediction { q, d, k: 1, value, certified_digits: cert.max(0) as u32 })
}

/// Evaluates `H(u)` and its pieces at a fixed precision.
struct Evaluator {
    prec: u32,
    parity: Parity,
    levels: Vec<Level>,
    q_half_inv: Float,
}

impl Evaluator {
    fn new(q: u64, parity: Parity, ctx: &PrecisionContext) -> Result<Self> {
        check_q(q)?;
        let prec = ctx.bits();
        Ok(Evaluator {
            prec,
            parity,
            levels: levels(q, ctx.truncation, prec),
            q_half_inv: Float::with_val(prec, q).sqrt().recip(),
        })
    }

    /// `Σ_{n<=N} i_n(q) log(E_n(u))`, the log of the grouped arithmetic product.
    fn log_arithmetic(&self, u: &[Float]) -> Float {
        let prec = self.prec;
        let k = u.len();
        let base: Vec<Float> = u.iter().map(|x| Float::with_val(prec, -x).exp()).collect();
        let mut r = base.clone();
        let mut acc = Float::with_val(prec, 0);
        let mut a = vec![Float::new(prec); k];
        for (idx, lvl) in self.levels.iter().enumerate() {
            if idx > 0 {
                for (rj, bj) in r.iter_mut().zip(&base) {
                    *rj *= bj;
                }
            }
            // r_j = e^{-n u_j}
            for (aj, rj) in a.iter_mut().zip(&r) {
                aj.assign(rj * &lvl.q_inv);
            }
            let mut pair = Float::with_val(prec, 1);
            let mut t = Float::new(prec);
            for i in 0..k {
                for j in i..k {
                    t.assign(&a[i] * &r[j]);
                    t = 1u32 - t;
                    pair *= &t;
                }
            }
            let mut minus = Float::with_val(prec, 1);
            let mut plus = Float::with_val(prec, 1);
            for rj in &r {
                t.assign(rj * &lvl.q_half_inv);
                minus *= Float::with_val(prec, 1u32 - &t);
                plus *= Float::with_val(prec, 1u32 + &t);
            }
            let mut mid = minus.recip() + plus.recip();
            mid /= 2u32;
            mid += &lvl.q_inv;
            let factor = pair * mid / Float::with_val(prec, &lvl.q_inv + 1u32);
            acc += factor.ln() * &lvl.count;
        }
        acc
    }

    /// `∏_j ((1 - q^{-1/2} e^{u_j}) / (1 - q^{-1/2} e^{-u_j}))^{1/2}`, or 1 for odd `d`.
    fn parity_factor(&self, u: &[Float]) -> Float {
        let prec = self.prec;
        let mut f = Float::with_val(prec, 1);
        if self.parity == Parity::Even {
            for x in u {
                let up = Float::with_val(prec, x.exp_ref()) * &self.q_half_inv;
                let down = Float::with_val(prec, -x).exp() * &self.q_half_inv;
                f *= Float::with_val(prec, 1u32 - &up);
                f /= Float::with_val(prec, 1u32 - &down);
            }
            f.sqrt_mut();
        }
        f
    }

    /// `∏_{i<=j} (1 - e^{-u_i-u_j})`, computed without cancellation.
    fn zeta_denominator(&self, u: &[Float]) -> Result<Float> {
        let prec = self.prec;
        let mut den = Float::with_val(prec, 1);
        for i in 0..u.len() {
            for j in i..u.len() {
                let s = Float::with_val(prec, &u[i] + &u[j]);
                if s.is_zero() {
                    return Err(Error::PoleHit);
                }
                den *= -(-s).exp_m1();
            }
        }
        Ok(den)
    }

    /// The regular part `F(u) = H(u) ∏_{i<=j} (1 - e^{-u_i-u_j})`.
    fn regular(&self, u: &[Float]) -> Float {
        self.log_arithmetic(u).exp() * self.parity_factor(u)
    }

    fn h(&self, u: &[Float]) -> Result<Float> {
        let den = self.zeta_denominator(u)?;
        Ok(self.regular(u) / den)
    }
}

fn check_shifts(u: &[Float], q: u64) -> Result<()> {
    let bound = (q as f64).ln() / 2.0;
    if u.iter().any(|x| !x.is_finite() || x.to_f64().abs() >= bound) {
        return Err(Error::InvalidArgument(format!("shifts must satisfy |u| < (ln q)/2 = {bound}")));
    }
    Ok(())
}

/// `H(u_1, ..., u_k)`: the ζ-factor, the arithmetic product truncated at
/// `n <= N`, and for even `d` the extra square-root factor.
pub fn h_eval(u: &[Float], q: u64, parity: Parity, ctx: &PrecisionContext) -> Result<Float> {
    check_shifts(u, q)?;
    Evaluator::new(q, parity, ctx)?.h(u)
}

/// `H(u) ∏_{i<=j} (1 - e^{-u_i-u_j})`, regular at the origin.
pub fn h_regular(u: &[Float], q: u64, parity: Parity, ctx: &PrecisionContext) -> Result<Float> {
    check_shifts(u, q)?;
    Ok(Evaluator::new(q, parity, ctx)?.regular(u))
}

/// `Q_k(q; 2g + 1)` or `Q_k(q; 2g + 2)` for each `g` in `genera`, sharing
/// the `2^k` evaluations of `H`.
pub fn qk_values(q: u64, parity: Parity, k: u32, genera: &[u32], ctx: &PrecisionContext) -> Result<Vec<Float>> {
    qk_values_with_shifts(q, parity, k, genera, ctx, None)
}

/// As [`qk_values`], with the shift magnitudes assigned to coordinates by `order`
/// (a permutation of `0..k`).
pub fn qk_values_with_shifts(
    q: u64,
    parity: Parity,
    k: u32,
    genera: &[u32],
    ctx: &PrecisionContext,
    order: Option<&[usize]>,
) -> Result<Vec<Float>> {
    ctx.validate(q, k)?;
    let prec = ctx.bits();
    let identity: Vec<usize> = (0..k as usize).collect();
    let order = order.unwrap_or(&identity);
    let mut seen = order.to_vec();
    seen.sort_unstable();
    if seen != identity {
        return Err(Error::InvalidArgument("shift order must be a permutation of 0..k".into()));
    }
    let grid = ShiftGrid::new(q, parity, k, ctx)?;
    // bit j of the mask flips the sign of the j-th shift; terms are summed in mask order
    let terms: Vec<(Float, i64)> = (0u64..1 << k)
        .into_par_iter()
        .map(|mask| {
            let v: Vec<i64> = order
                .iter()
                .enumerate()
                .map(|(j, &o)| if mask >> j & 1 == 1 { -(o as i64 + 1) } else { o as i64 + 1 })
                .collect();
            grid.h(&v).map(|h| (h, v.iter().sum()))
        })
        .collect::<Result<_>>()?;
    let step = Float::with_val(prec, grid.unit.exp_ref());
    Ok(genera
        .iter()
        .map(|&g| {
            let t = triangular(k) as i64;
            let weights: Vec<Float> =
                (-t..=t).map(|m| Float::with_val(prec, (&step).pow(m * g as i64))).collect();
            let mut sum = Float::with_val(prec, 0);
            for (h, m) in &terms {
                sum += Float::with_val(prec, h * &weights[(m + t) as usize]);
            }
            sum
        })
        .collect())
}

/// `H` restricted to shifts `u_j = v_j · 10^{-E}` with integers `0 < |v_j| <= k`,
/// so every transcendental value comes from a small table.
///
/// The ζ-factor and the pair part of every Euler factor depend on `u` only
/// through the sums `v_i + v_j`; their full products are tabulated per sum.
struct ShiftGrid {
    k: i64,
    unit: Float,
    /// `∏_n (1 - q^{-n} e^{-n m unit})^{i_n} / (-expm1(-m unit))` for `m = -2k..=2k`, `m != 0`.
    pair: Vec<Float>,
    /// `∏_n (1 + q^{-n})^{-i_n}`.
    norm: Float,
    /// `sqrt((1 - q^{-1/2} e^{v unit}) / (1 - q^{-1/2} e^{-v unit}))` for `v = -k..=k`.
    parity: Option<Vec<Float>>,
    levels: Vec<GridLevel>,
    /// Bit length of the largest `i_n` among the levels raised by repeated squaring.
    top_bit: u32,
}

/// Above this many set bits in `i_n`, one logarithm is cheaper than the
/// multiplications of repeated squaring.
const LOG_LEVEL_POPCOUNT: u32 = 100;

struct GridLevel {
    count: Integer,
    by_log: bool,
    q_inv: Float,
    /// `1 ∓ q^{-n/2} e^{-n v unit}` for `v = -k..=k`.
    minus: Vec<Float>,
    plus: Vec<Float>,
}

impl ShiftGrid {
    fn new(q: u64, parity: Parity, k: u32, ctx: &PrecisionContext) -> Result<Self> {
        let prec = ctx.bits();
        let k = k as i64;
        let unit = Float::with_val(prec, Float::u_pow_u(10, ctx.shift_exponent)).recip();
        let scaled = |m: i64| Float::with_val(prec, &unit * m);
        let q_half_inv = Float::with_val(prec, q).sqrt().recip();
        let parity = (parity == Parity::Even).then(|| {
            (-k..=k)
                .map(|v| {
                    let up = Float::with_val(prec, scaled(v).exp() * &q_half_inv);
                    let down = Float::with_val(prec, scaled(-v).exp() * &q_half_inv);
                    (Float::with_val(prec, 1u32 - &up) / Float::with_val(prec, 1u32 - &down)).sqrt()
                })
                .collect()
        });
        let qi = Integer::from(q);
        let mut pair: Vec<Float> =
            (-2 * k..=2 * k).map(|m| if m == 0 { Float::with_val(prec, 1) } else { -scaled(-m).exp_m1() }).collect();
        for x in pair.iter_mut() {
            x.recip_mut();
        }
        let mut norm = Float::with_val(prec, 1);
        let mut levels = Vec::new();
        for (i, lvl) in self::levels(q, ctx.truncation, prec).into_iter().enumerate() {
            let n = i as i64 + 1;
            let count = count_irreducible(n as u32, &qi);
            let decay = |m: i64| scaled(-n * m).exp();
            for (idx, m) in (-2 * k..=2 * k).enumerate() {
                let f = Float::with_val(prec, 1u32 - decay(m) * &lvl.q_inv);
                pair[idx] *= f.pow(&count);
            }
            norm /= Float::with_val(prec, &lvl.q_inv + 1u32).pow(&count);
            levels.push(GridLevel {
                minus: (-k..=k).map(|v| 1u32 - decay(v) * &lvl.q_half_inv).collect(),
                plus: (-k..=k).map(|v| 1u32 + decay(v) * &lvl.q_half_inv).collect(),
                q_inv: lvl.q_inv,
                by_log: count.count_ones().unwrap_or(0) > LOG_LEVEL_POPCOUNT,
                count,
            });
        }
        let top_bit = levels.iter().filter(|l| !l.by_log).map(|l| l.count.significant_bits()).max().unwrap_or(0);
        Ok(ShiftGrid { k, unit, pair, norm, parity, levels, top_bit })
    }

    fn h(&self, v: &[i64]) -> Result<Float> {
        let prec = self.unit.prec();
        let k = self.k;
        let mut mult = vec![0u32; self.pair.len()];
        for i in 0..v.len() {
            for j in i..v.len() {
                let m = v[i] + v[j];
                if m == 0 {
                    return Err(Error::PoleHit);
                }
                mult[(m + 2 * k) as usize] += 1;
            }
        }
        let mut value = Float::with_val(prec, &self.norm);
        for (p, &c) in self.pair.iter().zip(&mult) {
            if c > 0 {
                value *= Float::with_val(prec, p.pow(c));
            }
        }
        // the mixed factor ½(∏(1 - x_j)^{-1} + ∏(1 + x_j)^{-1}) + q^{-n} of each level
        let mids: Vec<Float> = self
            .levels
            .iter()
            .map(|lvl| {
                let mut minus = Float::with_val(prec, 1);
                let mut plus = Float::with_val(prec, 1);
                for &x in v {
                    minus *= &lvl.minus[(x + k) as usize];
                    plus *= &lvl.plus[(x + k) as usize];
                }
                let mut t = Float::with_val(prec, &minus + &plus);
                t /= minus * plus;
                t >>= 1;
                t += &lvl.q_inv;
                t
            })
            .collect();
        // ∏_n mid_n^{i_n} by one shared square-and-multiply pass, with the
        // largest exponents going through logarithms instead
        let mut acc = Float::with_val(prec, 1);
        for bit in (0..self.top_bit).rev() {
            acc.square_mut();
            for (lvl, mid) in self.levels.iter().zip(&mids) {
                if !lvl.by_log && lvl.count.get_bit(bit) {
                    acc *= mid;
                }
            }
        }
        let mut log = Float::with_val(prec, 0);
        for (lvl, mid) in self.levels.iter().zip(mids) {
            if lvl.by_log {
                log += mid.ln() * &lvl.count;
            }
        }
        value *= acc;
        if !log.is_zero() {
            value *= log.exp();
        }
        if let Some(par) = &self.parity {
            for &x in v {
                value *= &par[(x + k) as usize];
            }
        }
        Ok(value)
    }
}

fn prediction(q: u64, d: usize, k: u32, value: Float, ctx: &PrecisionContext) -> AKPrediction {
    let cert = ctx.certified_digits(q, k).max(0) as u32;
    AKPrediction { q, d, k, value, certified_digits: cert }
}

/// `Q_k(q; d)` by the signed-shift sum.
pub fn qk_direct(q: u64, d: usize, k: u32, ctx: &PrecisionContext) -> Result<AKPrediction> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let (g, _) = genus(d);
    let v = qk_values(q, Parity::of(d), k, &[g as u32], ctx)?.pop().unwrap();
    Ok(prediction(q, d, k, v, ctx))
}

/// `Q_k(q; d)` for `k = 1..=k_max`, each with its own context from `make_ctx(k)`.
pub fn qk_range(
    q: u64,
    d: usize,
    k_max: u32,
    make_ctx: impl Fn(u32) -> PrecisionContext,
) -> Result<Vec<AKPrediction>> {
    (1..=k_max).map(|k| qk_direct(q, d, k, &make_ctx(k))).collect()
}

/// Reruns with `E + 5` and fails unless both values agree to the target digits.
pub fn qk_direct_checked(q: u64, d: usize, k: u32, ctx: &PrecisionContext) -> Result<AKPrediction> {
    let a = qk_direct(q, d, k, ctx)?;
    let ctx2 = ctx.clone().with_shift_exponent(k, ctx.shift_exponent + 5);
    let b = qk_direct(q, d, k, &ctx2)?;
    let diff = Float::with_val(a.value.prec(), &a.value - &b.value).abs();
    let tol = Float::with_val(a.value.prec(), a.value.abs_ref()) * Float::with_val(64, 10).pow(-(ctx.target_digits as i32));
    if diff > tol {
        return Err(Error::PrecisionInsufficient(format!(
            "shift rerun differs by {} for k = {k}",
            diff.to_f64()
        )));
    }
    Ok(a)
}

/// Coefficients `c_0, ..., c_{k(k+1)/2}` of `Q_k` as a polynomial in `2g`,
/// `Q_k = Σ_r c_r (2g)^{k(k+1)/2 - r}`, by interpolation at `g = 1..=m`.
pub fn qk_coefficients(q: u64, k: u32, parity: Parity, ctx: &PrecisionContext) -> Result<Vec<Float>> {
    let t = triangular(k);
    let m = t + 1;
    // interpolation loses up to ~15 digits per node
    let ctx = ctx.clone().with_digits(ctx.digits + 15 * m);
    let prec = ctx.bits();
    let genera: Vec<u32> = (1..=m).collect();
    let values = qk_values(q, parity, k, &genera, &ctx)?;
    let coeffs = interpolate_unit_nodes(&values, prec);
    // coefficient of g^e becomes that of (2g)^e after dividing by 2^e
    let mut out = vec![Float::new(prec); m as usize];
    for (e, c) in coeffs.into_iter().enumerate() {
        out[t as usize - e] = c >> e as u32;
    }
    Ok(out)
}

/// Monomial coefficients (ascending) of the polynomial through `(j + 1, values[j])`,
/// via Newton divided differences.
fn interpolate_unit_nodes(values: &[Float], prec: u32) -> Vec<Float> {
    let m = values.len();
    let mut dd: Vec<Float> = values.iter().map(|v| Float::with_val(prec, v)).collect();
    let mut newton = Vec::with_capacity(m);
    newton.push(dd[0].clone());
    for level in 1..m {
        for i in 0..m - level {
            let diff = Float::with_val(prec, &dd[i + 1] - &dd[i]);
            dd[i] = diff / level as u32;
        }
        newton.push(dd[0].clone());
    }
    // Horner on the Newton form: p = a_0 + (g - 1)(a_1 + (g - 2)(a_2 + ...))
    let mut poly = vec![Float::with_val(prec, 0); m];
    poly[0] = newton[m - 1].clone();
    let mut deg = 0;
    for j in (0..m - 1).rev() {
        let node = (j + 1) as u32;
        // poly *= (g - node)
        deg += 1;
        for e in (0..=deg).rev() {
            let mut v = if e > 0 { poly[e - 1].clone() } else { Float::with_val(prec, 0) };
            if e < deg {
                v -= Float::with_val(prec, &poly[e] * node);
            }
            poly[e] = v;
        }
        poly[0] += &newton[j];
    }
    poly
}

/// `a_k = A(0, ..., 0)` and `c_0 = a_k ∏_{j<=k} j!/(2j)!`.
pub fn leading_constants(q: u64, k: u32, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    check_q(q)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let prec = ctx.bits();
    let mut log = Float::with_val(prec, 0);
    for lvl in levels(q, ctx.truncation, prec) {
        let x = &lvl.q_half_inv;
        let one_minus = Float::with_val(prec, 1u32 - x);
        let one_plus = Float::with_val(prec, 1u32 + x);
        let mut mid = Float::with_val(prec, one_minus.pow(-(k as i32)));
        mid += Float::with_val(prec, one_plus.pow(-(k as i32)));
        mid /= 2u32;
        mid += &lvl.q_inv;
        let pairs = Float::with_val(prec, 1u32 - &lvl.q_inv).pow(triangular(k));
        let factor = pairs * mid / Float::with_val(prec, &lvl.q_inv + 1u32);
        log += factor.ln() * &lvl.count;
    }
    let a_k = log.exp();
    let mut ratio = Rational::from(1);
    for j in 1..=k {
        ratio *= Rational::from((Integer::from(Integer::factorial(j)), Integer::from(Integer::factorial(2 * j))));
    }
    let c_0 = Float::with_val(prec, &a_k * &ratio);
    Ok((a_k, c_0))
}

/// A truncated expansion `Σ_e P_e(g) q^{-e/2}` with rational polynomials `P_e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    pub k: u32,
    pub parity: Parity,
    /// `(e, coefficients of P_e in g, ascending)`.
    pub terms: Vec<(u32, Vec<Rational>)>,
}

impl QSeries {
    /// The series for a fixed genus, as `(e, c_e)`.
    pub fn at_genus(&self, g: u32) -> Vec<(u32, Rational)> {
        self.terms
            .iter()
            .map(|(e, p)| {
                let mut v = Rational::new();
                for c in p.iter().rev() {
                    v *= g;
                    v += c;
                }
                (*e, v)
            })
            .collect()
    }

    pub fn evaluate(&self, q: u64, g: u32, prec: u32) -> Float {
        let root_inv = Float::with_val(prec, q).sqrt().recip();
        let mut sum = Float::with_val(prec, 0);
        for (e, c) in self.at_genus(g) {
            sum += Float::with_val(prec, &c) * Float::with_val(prec, (&root_inv).pow(e));
        }
        sum
    }

    /// Largest stored `e`.
    pub fn last_exponent(&self) -> u32 {
        self.terms.last().map(|t| t.0).unwrap_or(0)
    }

    /// Spacing between consecutive exponents: 2 for odd `d`, 1 for even `d`.
    pub fn step(&self) -> u32 {
        match self.parity {
            Parity::Odd => 2,
            Parity::Even => 1,
        }
    }
}

fn parse_g_poly(s: &str) -> Vec<Rational> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut coeffs: Vec<Rational> = Vec::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let (neg, body) = match rest.as_bytes()[0] {
            b'-' => (true, &rest[1..]),
            b'+' => (false, &rest[1..]),
            _ => (false, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        let (c, power) = match term.find('g') {
            Some(i) => {
                let pw = term[i + 1..].strip_prefix('^').map_or(1, |p| p.parse::<usize>().expect("series exponent"));
                (&term[..i], pw)
            }
            None => (term, 0),
        };
        let mut c = if c.is_empty() { Rational::from(1) } else { c.parse::<Rational>().expect("series coefficient") };
        if neg {
            c = -c;
        }
        if coeffs.len() <= power {
            coeffs.resize(power + 1, Rational::new());
        }
        coeffs[power] += c;
    }
    coeffs
}

const Q1_ODD: &[(u32, &str)] = &[
    (0, "g + 1"),
    (2, "-g + 1"),
    (4, "g - 1"),
    (6, "-2g + 4"),
    (8, "4g - 10"),
    (10, "-7g + 23"),
    (12, "11g - 43"),
    (14, "-18g + 82"),
    (16, "32g - 164"),
    (18, "-55g + 317"),
    (20, "89g - 569"),
    (22, "-147g + 1029"),
    (24, "251g - 1905"),
    (26, "-421g + 3451"),
    (28, "693g - 6099"),
    (30, "-1149g + 10795"),
    (32, "1919g - 19163"),
    (34, "-3190g + 33748"),
    (36, "5271g - 58885"),
    (38, "-8712g + 102452"),
    (40, "14436g - 178220"),
];

const Q1_EVEN: &[(u32, &str)] = &[
    (0, "g + 1"),
    (1, "-1"),
    (2, "-g"),
    (4, "g - 1"),
    (5, "-1"),
    (6, "-2g + 3"),
    (7, "1"),
    (8, "4g - 9"),
    (9, "-3"),
    (10, "-7g + 20"),
    (11, "4"),
    (12, "11g - 39"),
    (13, "-7"),
    (14, "-18g + 75"),
    (15, "11"),
    (16, "32g - 153"),
    (17, "-21"),
    (18, "-55g + 296"),
    (19, "34"),
    (20, "89g - 535"),
    (21, "-55"),
    (22, "-147g + 974"),
    (23, "92"),
    (24, "251g - 1813"),
    (25, "-159"),
    (26, "-421g + 3292"),
    (27, "262"),
    (28, "693g - 5837"),
    (29, "-431"),
    (30, "-1149g + 10364"),
    (31, "718"),
    (32, "1919g - 18445"),
    (33, "-1201"),
    (34, "-3190g + 32547"),
    (35, "1989"),
    (36, "5271g - 56896"),
    (37, "-3282"),
    (38, "-8712g + 99170"),
    (39, "5430"),
    (40, "14436g - 172790"),
];

const Q2_ODD: &[(u32, &str)] = &[
    (0, "1/3g^3 + 3/2g^2 + 13/6g + 1"),
    (2, "-4/3g^3 - g^2 + 4/3g + 1"),
    (4, "13/3g^3 - 13/2g^2 + 1/6g + 1"),
    (6, "-46/3g^3 + 54g^2 - 149/3g + 11"),
    (8, "163/3g^3 - 597/2g^2 + 2971/6g - 246"),
    (10, "-554/3g^3 + 1376g^2 - 9661/3g + 2364"),
    (12, "1826/3g^3 - 5701g^2 + 51295/3g - 16405"),
    (14, "-1982g^3 + 22265g^2 - 80929g + 95135"),
];

const Q2_EVEN: &[(u32, &str)] = &[
    (0, "1/3g^3 + 3/2g^2 + 13/6g + 1"),
    (1, "-g^2 - 3g - 2"),
    (2, "-4/3g^3 - 2g^2 - 2/3g + 1"),
    (3, "3g^2 + g"),
    (4, "13/3g^3 - 7/2g^2 - 11/6g"),
    (5, "-10g^2 + 8g"),
    (6, "-46/3g^3 + 44g^2 - 95/3g + 10"),
    (7, "36g^2 - 80g + 40"),
    (8, "163/3g^3 - 525/2g^2 + 2275/6g - 176"),
    (9, "-127g^2 + 445g - 368"),
    (10, "-554/3g^3 + 1249g^2 - 7945/3g + 1809"),
    (11, "427g^2 - 2053g + 2386"),
    (12, "1826/3g^3 - 5274g^2 + 43855/3g - 13107"),
    (13, "-1399g^2 + 8495g - 12584"),
    (14, "-1982g^3 + 20866g^2 - 71035g + 78675"),
];

const Q3_ODD: &[(u32, &str)] = &[
    (0, "1/45g^6 + 4/15g^5 + 47/36g^4 + 10/3g^3 + 841/180g^2 + 17/5g + 1"),
    (2, "-4/15g^6 - 8/5g^5 - 3g^4 - 4/3g^3 + 34/15g^2 + 44/15g + 1"),
    (4, "101/45g^6 + 44/15g^5 - 245/36g^4 - 13/3g^3 - 79/180g^2 - 8/5g + 2"),
    (6, "-764/45g^6 + 712/15g^5 + 110/9g^4 - 655/6g^3 + 4309/45g^2 - 93/10g - 20"),
    (8, "5416/45g^6 - 2408/3g^5 + 15317/9g^4 - 1615/2g^3 - 69446/45g^2 + 10303/6g - 244"),
    (
        10,
        "-36469/45g^6 + 126548/15g^5 - 1175831/36g^4 + 112353/2g^3 - 6151429/180g^2 - 295321/30g + 11168",
    ),
    (
        12,
        "236128/45g^6 - 1105616/15g^5 + 3631316/9g^4 - 1076052g^3 + 62711692/45g^2 - 10542424/15g + 19372",
    ),
    (
        14,
        "-494627/15g^6 + 8705044/15g^5 - 48772345/12g^4 + 28666535/2g^3 - 1575047267/60g^2 + 678778057/30g - 6415066",
    ),
];

const Q3_EVEN: &[(u32, &str)] = &[
    (0, "1/45g^6 + 4/15g^5 + 47/36g^4 + 10/3g^3 + 841/180g^2 + 17/5g + 1"),
    (1, "-2/15g^5 - 4/3g^4 - 31/6g^3 - 29/3g^2 - 87/10g - 3"),
    (2, "-4/15g^6 - 26/15g^5 - 4g^4 - 11/3g^3 + 19/15g^2 + 27/5g + 3"),
    (3, "22/15g^5 + 22/3g^4 + 23/2g^3 + 43/6g^2 + 23/15g - 1"),
    (4, "101/45g^6 + 22/5g^5 - 113/36g^4 - 26/3g^3 - 2089/180g^2 - 127/30g + 1"),
    (5, "-12g^5 - 44/3g^4 + 49/3g^3 + 8/3g^2 + 23/3g + 3"),
    (6, "-764/45g^6 + 532/15g^5 + 248/9g^4 - 331/6g^3 + 2899/45g^2 - 133/10g - 15"),
    (7, "1348/15g^5 - 192g^4 - 89/3g^3 + 529/2g^2 - 2037/10g + 17"),
    (8, "5416/45g^6 - 3564/5g^5 + 11567/9g^4 - 3073/6g^3 - 94327/90g^2 + 17272/15g - 160"),
    (9, "-9484/15g^5 + 3372g^4 - 16985/3g^3 + 2114g^2 + 41309/15g - 1694"),
    (
        10,
        "-36469/45g^6 + 117064/15g^5 - 997535/36g^4 + 264991/6g^3 - 4606789/180g^2 - 192403/30g + 7225",
    ),
    (11, "63454/15g^5 - 106948/3g^4 + 652081/6g^3 - 837925/6g^2 + 836686/15g + 10251"),
    (
        12,
        "236128/45g^6 - 1042162/15g^5 + 3215291/9g^4 - 2695787/3g^3 + 99784049/90g^2 - 16340081/30g + 24566",
    ),
    (13, "-408802/15g^5 + 311738g^4 - 8063951/6g^3 + 2664154g^2 - 22836967/10g + 559196"),
    (
        14,
        "-494627/15g^6 + 2765414/5g^5 - 44213885/12g^4 + 24762961/2g^3 - 434205189/20g^2 + 180627927/10g - 5043319",
    ),
];

/// The stored expansion of `Q_k` in powers of `q^{-1/2}`, for `k <= 3`.
pub fn stored_series(k: u32, parity: Parity) -> Result<QSeries> {
    let data = match (k, parity) {
        (1, Parity::Odd) => Q1_ODD,
        (1, Parity::Even) => Q1_EVEN,
        (2, Parity::Odd) => Q2_ODD,
        (2, Parity::Even) => Q2_EVEN,
        (3, Parity::Odd) => Q3_ODD,
        (3, Parity::Even) => Q3_EVEN,
        _ => return Err(Error::NotTabulated(format!("no stored series for k = {k}"))),
    };
    let terms = data.iter().map(|&(e, s)| (e, parse_g_poly(s))).collect();
    Ok(QSeries { k, parity, terms })
}

/// Comparison of a stored series with the direct evaluation.
#[derive(Clone, Debug)]
pub struct SeriesReport {
    pub q: u64,
    pub k: u32,
    pub parity: Parity,
    pub g: u32,
    pub series: Float,
    pub direct: Float,
    pub abs_diff: Float,
    pub rel_diff: Float,
    /// Second field size used to measure how the residual decays.
    pub q_check: u64,
    /// `|series - direct| · q^{next/2}` at `q` and at `q_check`, where `q^{-next/2}`
    /// is the first omitted order.
    pub scaled_residuals: [Float; 2],
    /// The larger scaled residual times `q^{-next/2}`.
    pub tail_estimate: Float,
    /// The residual is at the precision floor, or it decays at least like the first
    /// omitted order (the scaled residual at `q_check` is at most twice the one at `q`).
    pub within_tail: bool,
}

/// Scaled residuals that grow by more than this between `q` and `q_check` mean the
/// series is wrong at some stored order.
const RESIDUAL_GROWTH: f64 = 2.0;

/// Evaluates the stored series at `(q, g)` and compares it with [`qk_direct`].
///
/// The residual is also measured at the first prime `q_check >= 16 q`; a coefficient
/// that is wrong `j` half-orders before the end makes the scaled residual grow by
/// about `4^j` between the two.
pub fn series_check(q: u64, k: u32, parity: Parity, g: u32, ctx: &PrecisionContext) -> Result<SeriesReport> {
    check_series(&stored_series(k, parity)?, q, g, ctx)
}

fn check_series(series: &QSeries, q: u64, g: u32, ctx: &PrecisionContext) -> Result<SeriesReport> {
    let (k, parity) = (series.k, series.parity);
    let d = parity.degree(g);
    let next = series.last_exponent() + series.step();
    let prec = ctx.bits();
    let residual = |q: u64, ctx: &PrecisionContext| -> Result<(Float, Float, Float, Float)> {
        let direct = qk_direct(q, d, k, ctx)?.value;
        let s = series.evaluate(q, g, prec);
        let diff = Float::with_val(prec, &s - &direct).abs();
        let floor = Float::with_val(prec, direct.abs_ref()) * Float::with_val(prec, 10).pow(-ctx.certified_digits(q, k));
        Ok((s, direct, diff, floor))
    };
    let scale = |q: u64, x: &Float| Float::with_val(prec, x * Float::with_val(prec, q).sqrt().pow(next));

    let (s, direct, abs_diff, floor) = residual(q, ctx)?;
    let q_check = (16 * q..).find(|&n| is_prime(n)).expect("primes are unbounded");
    let check_ctx = PrecisionContext::new(q_check, k, ctx.target_digits).with_shift_exponent(k, ctx.shift_exponent);
    let (_, _, check_diff, check_floor) = residual(q_check, &check_ctx)?;
    let scaled = [scale(q, &abs_diff), scale(q_check, &check_diff)];
    let at_floor = abs_diff <= floor;
    let decays = check_diff <= check_floor || scaled[1] <= Float::with_val(prec, &scaled[0] * RESIDUAL_GROWTH);
    let biggest = scaled.iter().max_by(|a, b| a.total_cmp(b)).unwrap().clone();
    let tail = biggest / Float::with_val(prec, q).sqrt().pow(next);
    let rel_diff = Float::with_val(prec, &abs_diff / &direct).abs();
    Ok(SeriesReport {
        q,
        k,
        parity,
        g,
        series: s,
        direct,
        abs_diff,
        rel_diff,
        q_check,
        scaled_residuals: scaled,
        tail_estimate: tail,
        within_tail: at_floor || decays,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmoments::keating_snaith;

    fn close(a: &Float, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol * b.abs().max(1.0)
    }

    fn small_ctx(q: u64, k: u32) -> PrecisionContext {
        PrecisionContext::new(q, k, 25).with_shift_exponent(k, 20)
    }

    #[test]
    fn context_defaults() {
        let c = PrecisionContext::new(3, 10, 22);
        assert_eq!(c.shift_exponent, 65);
        assert!(c.digits >= 65 * 55 + 22 + 20);
        assert!(c.truncation as f64 >= 27.0 * 10f64.ln() / 3f64.ln());
        assert!(c.validate(3, 10).is_ok());
        assert!(c.certified_digits(3, 10) >= 22);
        let thin = c.clone().with_digits(500);
        assert!(matches!(thin.validate(3, 10), Err(Error::PrecisionInsufficient(_))));
        assert!(c.validate(4, 1).is_err());
        assert!(c.validate(3, 0).is_err());
    }

    #[test]
    fn p1_and_degree_sum() {
        let ctx = PrecisionContext::new(10009, 1, 25);
        let p1 = euler_p1(10009, &ctx).unwrap();
        assert!(p1 < 1);
        assert!(Float::with_val(64, 1u32 - &p1) < 1e-3);
        for q in [3u64, 5, 9, 25] {
            let c = PrecisionContext::new(q, 1, 25);
            let p = euler_p1(q, &c).unwrap();
            assert!(p < 1 && p > 0.5);
            assert!(prime_deg_sum(q, &c).unwrap() > 0);
        }
    }

    #[test]
    fn q1_closed_anchors() {
        let ctx = PrecisionContext::new(3, 1, 25);
        assert!(close(&q1_closed(3, 13, &ctx).unwrap().value, 5.710_336_021_545_694, 1e-15));
        let ctx9 = PrecisionContext::new(9, 1, 25);
        assert!(close(&q1_closed(9, 10, &ctx9).unwrap().value, 4.249_550_011_750_72, 1e-15));
        let big = PrecisionContext::new(10009, 1, 25);
        let v = q1_closed(10009, 3, &big).unwrap().value;
        assert!(close(&v, 2.000_000_000_001_994, 1e-15));
    }

    #[test]
    fn h_pole_and_regular_part() {
        let ctx = PrecisionContext::new(3, 2, 25);
        let prec = ctx.bits();
        let zero = vec![Float::with_val(prec, 0); 2];
        assert_eq!(h_eval(&zero, 3, Parity::Odd, &ctx), Err(Error::PoleHit));
        let opposite = vec![Float::with_val(prec, 1e-9), Float::with_val(prec, -1e-9)];
        assert_eq!(h_eval(&opposite, 3, Parity::Odd, &ctx), Err(Error::PoleHit));
        let reg = h_regular(&zero, 3, Parity::Odd, &ctx).unwrap();
        let (a2, _) = leading_constants(3, 2, &ctx).unwrap();
        let diff = Float::with_val(prec, &reg - &a2).abs();
        assert!(diff < Float::with_val(prec, 10).pow(-40), "{}", diff.to_f64());
        // the even-d factor is 1 at the origin
        let even = h_regular(&zero, 3, Parity::Even, &ctx).unwrap();
        assert_eq!(even, reg);
        let far = vec![Float::with_val(prec, 1.0)];
        assert!(h_eval(&far, 3, Parity::Odd, &ctx).is_err());
    }

    #[test]
    fn direct_matches_closed_k1() {
        for (q, d) in [(3u64, 13usize), (9, 10), (17, 8), (5, 4)] {
            let ctx = small_ctx(q, 1);
            let a = qk_direct(q, d, 1, &ctx).unwrap().value;
            let b = q1_closed(q, d, &ctx).unwrap().value;
            let rel = Float::with_val(ctx.bits(), &a - &b).abs() / &b;
            assert!(rel < 1e-24, "q={q} d={d} rel={}", rel.to_f64());
        }
    }

    #[test]
    fn direct_anchor_k2() {
        let ctx = small_ctx(10009, 2);
        let v = qk_direct(10009, 3, 2, &ctx).unwrap();
        assert!(close(&v.value, 4.999_999_990_017_976, 1e-15));
        assert!(v.certified_digits >= 25);
    }

    #[test]
    fn shift_assignment_symmetry() {
        let ctx = small_ctx(5, 3);
        let a = qk_values(5, Parity::Odd, 3, &[2], &ctx).unwrap().pop().unwrap();
        let b = qk_values_with_shifts(5, Parity::Odd, 3, &[2], &ctx, Some(&[2, 0, 1])).unwrap().pop().unwrap();
        let rel = Float::with_val(ctx.bits(), &a - &b).abs() / &a;
        assert!(rel < 1e-30, "{}", rel.to_f64());
    }

    #[test]
    fn large_q_approaches_keating_snaith() {
        for k in 1..=3 {
            let ctx = small_ctx(6561, k);
            for g in 1..=2 {
                let v = qk_direct(6561, 2 * g as usize + 1, k, &ctx).unwrap().value;
                let ks = keating_snaith(k, g).to_f64();
                assert!((v.to_f64() - ks).abs() < 10.0 * ks / 6561.0, "k={k} g={g}");
            }
        }
    }

    #[test]
    fn coefficients_k1_and_k2() {
        let ctx = small_ctx(3, 1);
        let c = qk_coefficients(3, 1, Parity::Odd, &ctx).unwrap();
        let p1 = euler_p1(3, &ctx).unwrap();
        let want = Float::with_val(ctx.bits(), &p1 / 2u32);
        assert!(Float::with_val(ctx.bits(), &c[0] - &want).abs() < 1e-20);
        let (_, c0) = leading_constants(3, 1, &ctx).unwrap();
        assert!(Float::with_val(ctx.bits(), &c[0] - &c0).abs() < 1e-20);

        let q = 10009;
        let ctx2 = small_ctx(q, 2);
        let c2 = qk_coefficients(q, 2, Parity::Odd, &ctx2).unwrap();
        let (_, c0) = leading_constants(q, 2, &ctx2).unwrap();
        assert!(Float::with_val(ctx2.bits(), &c2[0] - &c0).abs() < 1e-18);
        // q-independent part of Q_2 in g is g^3/3 + 3g^2/2 + 13g/6 + 1
        let series = stored_series(2, Parity::Odd).unwrap();
        let prec = ctx2.bits();
        let qi = Float::with_val(prec, q);
        for (e, want) in [(3usize, 0usize), (2, 1), (1, 2), (0, 3)] {
            let mut expect = Float::with_val(prec, 0);
            for (half, p) in &series.terms {
                expect += Float::with_val(prec, &p[e]) / Float::with_val(prec, (&qi).pow(half / 2));
            }
            let got = Float::with_val(prec, &c2[want] << e as u32);
            assert!(Float::with_val(prec, &got - &expect).abs() < 1e-20, "g^{e}");
        }
    }

    #[test]
    fn leading_constants_limit() {
        let ctx = PrecisionContext::new(1_000_003, 3, 20);
        let (a, c0) = leading_constants(1_000_003, 3, &ctx).unwrap();
        // the degree-one factor is 1 - 12/q^2 + O(q^-3) and there are q of them
        assert!((a.to_f64() - (1.0 - 12.0 / 1_000_003.0)).abs() < 1e-9, "{}", a.to_f64());
        // ∏ j!/(2j)! for j <= 3 = 1/2 · 2/24 · 6/720
        assert!((c0.to_f64() - 1.0 / 2880.0).abs() < 1e-8);
    }

    #[test]
    fn stored_series_match_keating_snaith_and_tables() {
        for k in 1..=3 {
            for parity in [Parity::Odd, Parity::Even] {
                let s = stored_series(k, parity).unwrap();
                for g in 0..5 {
                    let lead = &s.at_genus(g)[0];
                    assert_eq!(lead.0, 0);
                    assert_eq!(lead.1, keating_snaith(k, g), "k={k} g={g}");
                }
            }
        }
        // Q_2(q; 5) = 14 - 11/q + 10/q^2 + 5/q^3 - 15/q^4 + ...
        let s = stored_series(2, Parity::Odd).unwrap().at_genus(2);
        let firsts: Vec<Rational> = s.iter().take(5).map(|t| t.1.clone()).collect();
        assert_eq!(firsts, [14, -11, 10, 5, -15].map(Rational::from));
        // Q_1(q; 4) = 2 - q^{-1/2} - q^{-1} - q^{-5/2} + q^{-3} + ...
        let e = stored_series(1, Parity::Even).unwrap().at_genus(1);
        let head: Vec<(u32, Rational)> = e.into_iter().take(6).collect();
        assert_eq!(
            head,
            vec![(0, 2), (1, -1), (2, -1), (4, 0), (5, -1), (6, 1)]
                .into_iter()
                .map(|(a, b)| (a, Rational::from(b)))
                .collect::<Vec<_>>()
        );
        assert!(matches!(stored_series(4, Parity::Odd), Err(Error::NotTabulated(_))));
    }

    #[test]
    fn series_agree_with_direct() {
        for (q, k, g) in [(10009, 1, 1), (23, 3, 3)] {
            let r = series_check(q, k, Parity::Odd, g, &small_ctx(q, k)).unwrap();
            assert!(r.within_tail, "q={q} k={k} g={g}: {} > {}", r.abs_diff.to_f64(), r.tail_estimate.to_f64());
        }
        let r = series_check(10009, 1, Parity::Odd, 1, &small_ctx(10009, 1)).unwrap();
        assert!(close(&r.series, 2.0, 1e-10));

        // an error of 1 in the q^{-6} coefficient of Q_2(q; 5) is caught
        let mut bad = stored_series(2, Parity::Odd).unwrap();
        bad.terms[6].1[0] += 1;
        let ctx = small_ctx(53, 2);
        assert!(check_series(&stored_series(2, Parity::Odd).unwrap(), 53, 2, &ctx).unwrap().within_tail);
        assert!(!check_series(&bad, 53, 2, &ctx).unwrap().within_tail);
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let prec = 200;
        let vals: Vec<Float> = (1..=4).map(|g| Float::with_val(prec, 2 * g * g * g - 3 * g + 7)).collect();
        let c = interpolate_unit_nodes(&vals, prec);
        let want = [7.0, -3.0, 0.0, 2.0];
        for (a, b) in c.iter().zip(want) {
            assert!((a.to_f64() - b).abs() < 1e-40);
        }
    }
}
