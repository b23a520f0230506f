//! `hyperzeta identities`: exhaustive and randomized identity checks.
//!
//! Each suite prints one line per checked case and stops at the first
//! counterexample, which is reported with exit code 2.

use clap::{Args, ValueEnum};
use hyperzeta::akpred::{qk_values, Parity, PrecisionContext};
use hyperzeta::algebra::{is_prime, FqContext, FqElement, FqPoly};
use hyperzeta::charsym::residue_symbol;
use hyperzeta::ensemble::{aq_moments_m3, aq_moments_m4, birch_sums, enumerate_lpolys, DEFAULT_CURVE_BUDGET};
use hyperzeta::exactmoments::{binomial_identity_1, binomial_identity_2, birch_formula, keating_snaith};
use hyperzeta::lfunc::{verify_lpoly, LPolynomial, DEFAULT_POINT_BUDGET};
use hyperzeta::modforms::DeltaExpansion;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Integer};

use crate::{field, CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Reciprocity,
    Fe,
    M34,
    Birch,
    Binomial,
    Tau,
    KsLimit,
}

#[derive(Args, Debug, Clone)]
pub struct IdentitiesArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Field orders (or primes) to check; each suite has its own default list.
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<u64>,
    /// Degree for the fe suite.
    #[arg(long, default_value_t = 5)]
    pub d: usize,
    /// Random pairs per field for the reciprocity suite.
    #[arg(long, default_value_t = 500)]
    pub pairs: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub threads: Option<usize>,
}

impl IdentitiesArgs {
    pub fn new(suite: Suite) -> Self {
        IdentitiesArgs { suite, q: Vec::new(), d: 5, pairs: 500, seed: 1, threads: None }
    }

    fn fields(&self, default: &[u64]) -> Vec<u64> {
        if self.q.is_empty() {
            default.to_vec()
        } else {
            self.q.clone()
        }
    }
}

fn fail(suite: &str, detail: String) -> CliError {
    CliError::verification(format!("{suite}: counterexample: {detail}"))
}

pub fn run(args: &IdentitiesArgs) -> CliResult<String> {
    let lines = match args.suite {
        Suite::Reciprocity => reciprocity(args)?,
        Suite::Fe => functional_equation(args)?,
        Suite::M34 => m34(args)?,
        Suite::Birch => birch(args)?,
        Suite::Binomial => binomial()?,
        Suite::Tau => tau_bound(args)?,
        Suite::KsLimit => ks_limit(args)?,
    };
    let mut out = lines.join("\n");
    out.push('\n');
    Ok(out)
}

fn random_monic(ctx: &FqContext, degree: usize, rng: &mut ChaCha8Rng) -> FqPoly {
    let lower: Vec<FqElement> = (0..degree).map(|_| FqElement(rng.gen_range(0..ctx.q()))).collect();
    FqPoly::monic_from_lower(&lower)
}

/// `(a|b)(b|a) = (-1)^{(q-1)/2 · deg a · deg b}` for coprime monic `a`, `b`.
fn reciprocity(args: &IdentitiesArgs) -> CliResult<Vec<String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut lines = Vec::new();
    for q in args.fields(&[3, 5, 7, 9, 25]) {
        let ctx = field(q)?;
        let (mut checked, mut coprime) = (0, 0);
        while checked < args.pairs {
            let a = random_monic(&ctx, rng.gen_range(1..=7), &mut rng);
            let b = random_monic(&ctx, rng.gen_range(1..=7), &mut rng);
            let ab = residue_symbol(&a, &b, &ctx)?;
            let ba = residue_symbol(&b, &a, &ctx)?;
            checked += 1;
            if ab == 0 || ba == 0 {
                if ab != ba {
                    return Err(fail("reciprocity", format!("q = {q}, a = {a}, b = {b}: only one symbol vanishes")));
                }
                continue;
            }
            coprime += 1;
            let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
            let odd = (q - 1) / 2 % 2 == 1 && da % 2 == 1 && db % 2 == 1;
            let want = if odd { -1 } else { 1 };
            if ab * ba != want {
                return Err(fail(
                    "reciprocity",
                    format!("q = {q}, a = {a}, b = {b}: (a|b)(b|a) = {} but the sign is {want}", ab * ba),
                ));
            }
        }
        lines.push(format!("reciprocity q={q}: {checked} pairs ({coprime} coprime) ok"));
    }
    Ok(lines)
}

/// `b(2g - r) = b(r) q^{g-r}`, Weil bounds and point counts on every curve.
fn functional_equation(args: &IdentitiesArgs) -> CliResult<Vec<String>> {
    let mut lines = Vec::new();
    for q in args.fields(&[3]) {
        let ctx = field(q)?;
        let entries = enumerate_lpolys(&ctx, args.d, false, DEFAULT_CURVE_BUDGET, args.threads)?;
        for (poly, l) in &entries {
            let rebuilt = LPolynomial::from_lower_b(q, args.d, &l.b[..=l.g])?;
            if rebuilt.b != l.b {
                return Err(fail("fe", format!("q = {q}, D = {poly}: b = {:?}", l.b)));
            }
            verify_lpoly(l, poly, &ctx, DEFAULT_POINT_BUDGET)
                .map_err(|e| fail("fe", format!("q = {q}, D = {poly}: {e}")))?;
        }
        lines.push(format!("fe q={q} d={}: {} curves ok", args.d, entries.len()));
    }
    Ok(lines)
}

/// `m_4(q; j) = q m_3(q; j)` for even `j` and `m_4(q; j) = m_3(q; j + 1)` for odd `j`.
fn m34(args: &IdentitiesArgs) -> CliResult<Vec<String>> {
    const J_MAX: u32 = 8;
    let mut lines = Vec::new();
    for q in args.fields(&[5, 7, 11, 13, 25]) {
        let ctx = field(q)?;
        let m3 = aq_moments_m3(&ctx, J_MAX + 1, DEFAULT_CURVE_BUDGET)?;
        let m4 = aq_moments_m4(&ctx, J_MAX, DEFAULT_CURVE_BUDGET)?;
        for j in 0..=J_MAX as usize {
            let want = if j % 2 == 0 { Integer::from(&m3[j] * q) } else { m3[j + 1].clone() };
            if m4[j] != want {
                return Err(fail("m34", format!("q = {q}, j = {j}: m_4 = {} but expected {want}", m4[j])));
            }
        }
        lines.push(format!("m34 q={q}: j = 0..={J_MAX} ok"));
    }
    Ok(lines)
}

/// Brute-force `S_1..S_5` against the closed forms.
fn birch(args: &IdentitiesArgs) -> CliResult<Vec<String>> {
    const HALF_J_MAX: u32 = 5;
    let mut lines = Vec::new();
    for p in args.fields(&[5, 7, 11]) {
        if !is_prime(p) {
            return Err(CliError::usage(format!("birch needs primes, got {p}")));
        }
        let ctx = field(p)?;
        let sums = birch_sums(&ctx, HALF_J_MAX);
        for h in 1..=HALF_J_MAX {
            let formula = birch_formula(p, h)?;
            if sums[h as usize] != formula {
                return Err(fail(
                    "birch",
                    format!("p = {p}, S_{h}: brute force {} but closed form {formula}", sums[h as usize]),
                ));
            }
        }
        lines.push(format!("birch p={p}: S_1..S_{HALF_J_MAX} ok"));
    }
    Ok(lines)
}

fn binomial() -> CliResult<Vec<String>> {
    const K_MAX: u32 = 20;
    for k in 0..=K_MAX {
        let (lhs, rhs) = binomial_identity_1(k);
        if lhs != rhs {
            return Err(fail("binomial", format!("first identity at k = {k}: {lhs} != {rhs}")));
        }
        for l in 0..=k.div_ceil(2) {
            let (lhs, rhs) = binomial_identity_2(k, l)?;
            if lhs != rhs {
                return Err(fail("binomial", format!("second identity at k = {k}, l = {l}: {lhs} != {rhs}")));
            }
        }
    }
    Ok(vec![format!("binomial: both identities ok for k <= {K_MAX}")])
}

/// `τ(p)^2 <= 4 p^11` for primes up to the bound (default 10^4).
fn tau_bound(args: &IdentitiesArgs) -> CliResult<Vec<String>> {
    let bound = args.q.first().copied().unwrap_or(10_000);
    let delta = DeltaExpansion::new(bound)?;
    let mut count = 0;
    for p in (2..=bound).filter(|&p| is_prime(p)) {
        let t = delta.tau(p)?;
        let rhs = Integer::from(Integer::u_pow_u(p as u32, 11)) * 4u32;
        if Integer::from(t.square_ref()) > rhs {
            return Err(fail("tau", format!("p = {p}: tau(p) = {t}")));
        }
        count += 1;
    }
    Ok(vec![format!("tau: Ramanujan bound ok for {count} primes <= {bound}")])
}

/// `|Q_k(q; 2g+1) - KeS(k, g)|` decreases along `q = 3, 9, 81, 6561` and ends
/// below `10 KeS / 6561`.
fn ks_limit(args: &IdentitiesArgs) -> CliResult<Vec<String>> {
    const K_MAX: u32 = 5;
    const GENERA: [u32; 3] = [1, 2, 3];
    let qs = args.fields(&[3, 9, 81, 6561]);
    let last = *qs.last().ok_or_else(|| CliError::usage("no field orders"))?;
    let mut lines = Vec::new();
    for k in 1..=K_MAX {
        let mut gaps: Vec<Vec<f64>> = vec![Vec::new(); GENERA.len()];
        for &q in &qs {
            let ctx = PrecisionContext::new(q, k, 12).with_shift_exponent(k, 15);
            let values = qk_values(q, Parity::Odd, k, &GENERA, &ctx)?;
            for (i, v) in values.iter().enumerate() {
                let kes = Float::with_val(v.prec(), &keating_snaith(k, GENERA[i]));
                gaps[i].push(Float::with_val(v.prec(), v - &kes).abs().to_f64());
            }
        }
        for (i, &g) in GENERA.iter().enumerate() {
            let kes = keating_snaith(k, g).to_f64();
            let gap = &gaps[i];
            if let Some(w) = gap.windows(2).position(|w| w[1] >= w[0]) {
                return Err(fail(
                    "ks-limit",
                    format!("k = {k}, g = {g}: gap {} at q = {} does not decrease to {} at q = {}", gap[w], qs[w], gap[w + 1], qs[w + 1]),
                ));
            }
            let end = *gap.last().unwrap();
            if end >= 10.0 * kes / last as f64 {
                return Err(fail("ks-limit", format!("k = {k}, g = {g}: final gap {end:e} is not below 10 KeS/{last}")));
            }
        }
        lines.push(format!("ks-limit k={k}: g = 1, 2, 3 ok"));
    }
    Ok(lines)
}
