//! Closed-form and tabulated moment formulas.
//!
//! The `d = 3` and `d = 4` moments are exact functions of `p` and the Hecke
//! traces `tr_{2l+2}(T_p)`. For `5 <= d <= 9` only interpolated polynomials in
//! `q^{-1/2}` are known; they are stored here as text.

use std::fmt;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::algebra::{is_prime, prime_power};
use crate::algebraic::AlgebraicValue;
use crate::error::{Error, Result};
use crate::modforms::{cusp_form_dimension, hecke_trace, tau};

/// One term `c · q^{-e/2}`, multiplied by `τ(p) + 1` when `tau` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentTerm {
    /// Twice the (negated) exponent of `q`.
    pub half_exp: u32,
    pub coeff: i64,
    pub tau: bool,
}

/// A moment formula `Σ c_e (τ(p)+1)^{[marked]} q^{-e/2}` for `H_{q,d}`, normalised by `#H_{q,d}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentPolynomial {
    pub d: usize,
    pub k: u32,
    /// Sorted by `half_exp`, then plain terms before marked ones; no zero coefficients.
    pub terms: Vec<MomentTerm>,
}

impl MomentPolynomial {
    /// Collects like terms and drops zeros.
    pub fn new(d: usize, k: u32, mut terms: Vec<MomentTerm>) -> Self {
        terms.sort_by_key(|t| (t.half_exp, t.tau));
        let mut out: Vec<MomentTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.half_exp == t.half_exp && last.tau == t.tau => last.coeff += t.coeff,
                _ => out.push(t),
            }
        }
        out.retain(|t| t.coeff != 0);
        MomentPolynomial { d, k, terms: out }
    }

    /// Parses the printed form, e.g. `"2 - p^-1/2 - 3p^-2 - (tau+1)p^-6"`.
    /// The variable may be written `p` or `q`.
    pub fn parse(d: usize, k: u32, text: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("malformed moment polynomial: {text:?}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut terms = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ if terms.is_empty() => (1, rest),
                _ => return Err(bad()),
            };
            // a term ends at the next sign that is not part of `^-` or `(tau+1)`
            let mut end = body.len();
            let bytes = body.as_bytes();
            for i in 1..bytes.len() {
                if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' && bytes[i - 1] != b'u' {
                    end = i;
                    break;
                }
            }
            terms.push(parse_term(&body[..end], sign).ok_or_else(bad)?);
            rest = &body[end..];
        }
        Ok(MomentPolynomial::new(d, k, terms))
    }

    /// The `q^0` coefficient.
    pub fn leading(&self) -> i64 {
        self.terms.iter().filter(|t| t.half_exp == 0 && !t.tau).map(|t| t.coeff).sum()
    }

    pub fn has_tau(&self) -> bool {
        self.terms.iter().any(|t| t.tau)
    }

    /// Substitutes `q`; a `τ` marker requires `q` to be prime.
    pub fn evaluate(&self, q: u64) -> Result<AlgebraicValue> {
        if q < 2 {
            return Err(Error::InvalidArgument(format!("cannot evaluate at q = {q}")));
        }
        let qi = Integer::from(q);
        let tau_plus_one = if self.has_tau() {
            if !is_prime(q) {
                return Err(Error::InvalidArgument(format!("tau(p) needs a prime, got {q}")));
            }
            Some(tau(q)? + 1u32)
        } else {
            None
        };
        let mut x = Rational::new();
        let mut y = Rational::new();
        for t in &self.terms {
            let mut c = Integer::from(t.coeff);
            if t.tau {
                c *= tau_plus_one.as_ref().unwrap();
            }
            // q^{-e/2} = q^{-(e+1)/2} · √q for odd e
            let den = pow(&qi, t.half_exp.div_ceil(2));
            let term = Rational::from((c, den));
            if t.half_exp % 2 == 0 {
                x += term;
            } else {
                y += term;
            }
        }
        Ok(AlgebraicValue::new(x, y, qi))
    }

    /// Renders with the given variable name, in the printed style.
    pub fn render(&self, var: char) -> String {
        let mut s = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coeff < 0;
            let mag = t.coeff.unsigned_abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let power = match t.half_exp {
                0 => String::new(),
                e if e % 2 == 0 => format!("{var}^-{}", e / 2),
                e => format!("{var}^-{e}/2"),
            };
            let mut factor = String::new();
            if mag != 1 || (power.is_empty() && !t.tau) {
                factor.push_str(&mag.to_string());
            }
            if t.tau {
                factor.push_str("(tau+1)");
            }
            s.push_str(&factor);
            s.push_str(&power);
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

impl fmt::Display for MomentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render('q'))
    }
}

fn parse_term(body: &str, sign: i64) -> Option<MomentTerm> {
    let digits = body.bytes().take_while(u8::is_ascii_digit).count();
    let coeff: i64 = if digits == 0 { 1 } else { body[..digits].parse().ok()? };
    let mut rest = &body[digits..];
    let mut tau = false;
    if let Some(r) = rest.strip_prefix("(tau+1)") {
        tau = true;
        rest = r;
    }
    let half_exp = if rest.is_empty() {
        if digits == 0 && !tau {
            return None;
        }
        0
    } else {
        let exp = rest.strip_prefix('p').or_else(|| rest.strip_prefix('q'))?.strip_prefix("^-")?;
        match exp.split_once('/') {
            Some((num, "2")) => {
                let n: u32 = num.parse().ok()?;
                if n.is_multiple_of(2) {
                    return None;
                }
                n
            }
            Some(_) => return None,
            None => 2 * exp.parse::<u32>().ok()?,
        }
    };
    Some(MomentTerm { half_exp, coeff: sign * coeff, tau })
}

/// Moment formulas as text. Tables for `d = 3, 4` are in `p` (prime fields).
const TABLES: &[(usize, u32, &str)] = &[
    (3, 1, "2"),
    (3, 2, "5 - p^-2"),
    (3, 3, "14 - 6p^-2"),
    (3, 4, "42 - 27p^-2 - p^-3"),
    (3, 5, "132 - 110p^-2 - 10p^-3"),
    (3, 6, "429 - 429p^-2 - 65p^-3 - p^-4"),
    // -14p^-4, not -7p^-4: exhaustive enumeration and the closed form agree
    (3, 7, "1430 - 1638p^-2 - 350p^-3 - 14p^-4"),
    (3, 8, "4862 - 6188p^-2 - 1700p^-3 - 119p^-4 - p^-5"),
    (3, 9, "16796 - 23256p^-2 - 7752p^-3 - 798p^-4 - 18p^-5"),
    (3, 10, "58786 - 87210p^-2 - 33915p^-3 - 4655p^-4 - 189p^-5 - (tau+1)p^-6"),
    (4, 1, "2 - p^-1/2 - p^-1 - p^-5/2 + p^-3"),
    (4, 2, "5 - 6p^-1/2 - 3p^-1 + 4p^-3/2 - p^-2 - 2p^-5/2 + 7p^-3 - 4p^-7/2"),
    (
        4,
        3,
        "14 - 28p^-1/2 + 28p^-3/2 - 20p^-2 + 3p^-5/2 + 27p^-3 - 40p^-7/2 + 18p^-4 - 3p^-9/2 + p^-5",
    ),
    (
        4,
        4,
        "42 - 120p^-1/2 + 60p^-1 + 120p^-3/2 - 177p^-2 + 100p^-5/2 + 61p^-3 \
         - 232p^-7/2 + 223p^-4 - 100p^-9/2 + 31p^-5 - 8p^-11/2",
    ),
    (
        4,
        5,
        "132 - 495p^-1/2 + 495p^-1 + 330p^-3/2 - 1100p^-2 + 1034p^-5/2 - 230p^-3 \
         - 985p^-7/2 + 1665p^-4 - 1286p^-9/2 + 614p^-5 - 225p^-11/2 + 55p^-6 - 5p^-13/2 + p^-7",
    ),
    // ends in -q^-4, not -q^-3: brute force at q = 5, 7, 9 and M_1(81, 5) = 2.98780671354735706815 agree
    (5, 1, "3 - q^-1 + q^-2 - q^-4"),
    (5, 2, "14 - 11q^-1 + 10q^-2 + 5q^-3 - 15q^-4 - q^-5"),
    (5, 3, "84 - 111q^-1 + 91q^-2 + 98q^-3 - 174q^-4 - 51q^-5 - q^-6"),
    (5, 4, "594 - 1133q^-1 + 861q^-2 + 1476q^-3 - 1959q^-4 - 1192q^-5 - 90q^-6 - q^-7"),
    (
        5,
        5,
        "4719 - 11869q^-1 + 8645q^-2 + 20416q^-3 - 22055q^-4 - 21516q^-5 - 3398q^-6 - 145q^-7 - q^-8",
    ),
    (
        6,
        1,
        "3 - q^-1/2 - 2q^-1 + q^-2 - q^-5/2 - q^-3 + q^-7/2 - q^-4 - q^-9/2 + 2q^-5",
    ),
    (
        6,
        2,
        "14 - 12q^-1/2 - 19q^-1 + 14q^-3/2 + 17q^-2 - 24q^-5/2 + 24q^-7/2 \
         - 33q^-4 + 14q^-9/2 + 30q^-5 - 34q^-11/2 + 14q^-6 - 6q^-13/2 + q^-7",
    ),
    (7, 1, "4 - 2q^-1 + 2q^-2 - 2q^-3 + 2q^-4 + 2q^-5 - 2q^-6"),
    // the second term is -40q^-1 (checked by enumeration)
    (7, 2, "30 - 40q^-1 + 60q^-2 - 66q^-3 + 20q^-4 + 101q^-5 - 85q^-6 - 36q^-7 - 2q^-8"),
    (
        7,
        3,
        "330 - 832q^-1 + 1674q^-2 - 1986q^-3 - 240q^-4 + 4348q^-5 - 2330q^-6 - 3222q^-7 - 626q^-8 - 12q^-9",
    ),
    (
        8,
        1,
        "4 - q^-1/2 - 3q^-1 + 2q^-2 - q^-5/2 - 3q^-3 + q^-7/2 + 3q^-4 - 3q^-9/2 \
         - q^-5 + 3q^-11/2 - 3q^-6 - q^-13/2 + 5q^-7 - 2q^-15/2",
    ),
    (9, 1, "5 - 3q^-1 + 3q^-2 - 4q^-3 + 6q^-4 - 5q^-5 + q^-6 + 5q^-7 - 7q^-8 - q^-9"),
];

/// All tabulated `(d, k)` pairs.
pub fn tabulated() -> impl Iterator<Item = (usize, u32)> {
    TABLES.iter().map(|&(d, k, _)| (d, k))
}

/// The stored moment polynomial for `(d, k)`.
pub fn table_polynomial(d: usize, k: u32) -> Result<MomentPolynomial> {
    let (_, _, text) = TABLES
        .iter()
        .find(|&&(dd, kk, _)| dd == d && kk == k)
        .ok_or_else(|| Error::NotTabulated(format!("no moment formula for d = {d}, k = {k}")))?;
    MomentPolynomial::parse(d, k, text)
}

/// The stored formula for `(d, k)` evaluated at `q`.
pub fn evaluate_table(d: usize, k: u32, q: u64) -> Result<AlgebraicValue> {
    table_polynomial(d, k)?.evaluate(q)
}

fn pow(base: &Integer, e: u32) -> Integer {
    Integer::from(base.pow(e))
}

fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

fn ratio(num: Integer, den: Integer) -> Rational {
    Rational::from((num, den))
}

/// Coefficients of the `d = 3` moment as `(l, c_l)`: the moment is
/// `c_0 + Σ_{l>=1} c_l (tr_{2l+2}(T_p) + 1) p^{-(l+1)}`.
fn d3_coefficients(k: u32) -> Vec<(u32, Rational)> {
    let mut out = vec![(0, ratio(binomial(2 * k + 1, k) * 2u32, Integer::from(k + 2)))];
    for l in 1..=k / 2 {
        let c = binomial(2 * k + 1, k - 2 * l) * (2 * (2 * l + 1));
        out.push((l, -ratio(c, Integer::from(k + 2 * l + 2))));
    }
    out
}

/// Same shape for the bracket multiplying `p^{-1/2}` in the `d = 4` moment.
fn d4_odd_coefficients(k: u32) -> Vec<(u32, Rational)> {
    let mut out = Vec::new();
    out.push((0, ratio(binomial(2 * k + 1, k - 1) * 4u32, Integer::from(k + 3))));
    for l in 1..=k.div_ceil(2) {
        let num = Integer::from(k * k + k + 4 * l * l + 4 * l) * factorial(2 * k + 1) * (4 * (2 * l + 1));
        let den = factorial(k + 2 * l + 3) * factorial(k + 1 - 2 * l);
        out.push((l, -ratio(num, den)));
    }
    out
}

fn check_field(p: u64) -> Result<()> {
    if p <= 3 || prime_power(p).is_none() {
        return Err(Error::InvalidArgument(format!("need an odd prime power q > 3, got {p}")));
    }
    Ok(())
}

/// `tr_{w}(T_p) + 1`. Traces vanish below weight 12 and at 14, so those are
/// available for prime powers too; weight 12 needs `p` prime.
fn trace_plus_one(weight: u32, p: u64) -> Result<Integer> {
    if cusp_form_dimension(weight)? > 0 && !is_prime(p) {
        return Err(Error::InvalidArgument(format!("Hecke trace of weight 12 needs a prime, got {p}")));
    }
    Ok(hecke_trace(weight, p)? + 1u32)
}

fn sum_with_traces(coeffs: &[(u32, Rational)], p: u64) -> Result<Rational> {
    let pi = Integer::from(p);
    let mut acc = Rational::new();
    for (l, c) in coeffs {
        if *l == 0 {
            acc += c;
            continue;
        }
        let t = trace_plus_one(2 * l + 2, p)?;
        let den = pow(&pi, l + 1);
        acc += c * Rational::from((t, den));
    }
    Ok(acc)
}

/// `(p^3 - p^2)^{-1} Σ_{D ∈ H_{p,3}} L(1/2, χ_D)^k` in closed form, for `1 <= k <= 13`.
/// Prime powers are accepted while no Hecke trace of weight 12 is involved (`k <= 9`).
pub fn theorem_d3(p: u64, k: u32) -> Result<Rational> {
    check_field(p)?;
    if k == 0 {
        return Ok(Rational::from(1));
    }
    sum_with_traces(&d3_coefficients(k), p)
}

/// `(p^4 - p^3)^{-1} Σ_{D ∈ H_{p,4}} L(1/2, χ_D)^k` in closed form, exact in `Q(√p)`.
pub fn theorem_d4(p: u64, k: u32) -> Result<AlgebraicValue> {
    check_field(p)?;
    let pi = Integer::from(p);
    if k == 0 {
        return Ok(AlgebraicValue::one(pi));
    }
    let even = sum_with_traces(&d3_coefficients(k), p)?;
    let odd = sum_with_traces(&d4_odd_coefficients(k), p)?;
    // (1 - p^{-1/2})^k (even + p^{-1/2} odd), with p^{-1/2} = √p / p
    let inv_sqrt = AlgebraicValue::new(Rational::new(), Rational::from((1, pi.clone())), pi.clone());
    let factor = (&AlgebraicValue::one(pi.clone()) - &inv_sqrt).pow(k);
    let bracket = &AlgebraicValue::from_rational(even, pi.clone()) + &inv_sqrt.scale(&odd);
    Ok(&factor * &bracket)
}

fn symbolic_terms(coeffs: &[(u32, Rational)], shift: u32) -> Result<Vec<MomentTerm>> {
    let mut out = Vec::new();
    for (l, c) in coeffs {
        if !c.denom().eq(&1) {
            return Err(Error::VerificationFailed(format!("non-integral coefficient {c}")));
        }
        let coeff = c.numer().to_i64().ok_or(Error::Overflow("moment coefficient"))?;
        let half_exp = if *l == 0 { 0 } else { 2 * (l + 1) } + shift;
        // a nonzero trace can only be τ(p); otherwise just the `+1` survives
        let tau = *l > 0 && cusp_form_dimension(2 * l + 2)? > 0;
        out.push(MomentTerm { half_exp, coeff, tau });
    }
    Ok(out)
}

/// The `d = 3` closed form expanded in powers of `p^{-1}`.
pub fn theorem_d3_polynomial(k: u32) -> Result<MomentPolynomial> {
    if k == 0 {
        return Ok(MomentPolynomial::new(3, 0, vec![MomentTerm { half_exp: 0, coeff: 1, tau: false }]));
    }
    Ok(MomentPolynomial::new(3, k, symbolic_terms(&d3_coefficients(k), 0)?))
}

/// The `d = 4` closed form expanded in powers of `p^{-1/2}`.
pub fn theorem_d4_polynomial(k: u32) -> Result<MomentPolynomial> {
    if k == 0 {
        return Ok(MomentPolynomial::new(4, 0, vec![MomentTerm { half_exp: 0, coeff: 1, tau: false }]));
    }
    let mut bracket = symbolic_terms(&d3_coefficients(k), 0)?;
    bracket.extend(symbolic_terms(&d4_odd_coefficients(k), 1)?);
    let mut terms = bracket;
    for _ in 0..k {
        let shifted: Vec<MomentTerm> = terms
            .iter()
            .map(|t| MomentTerm { half_exp: t.half_exp + 1, coeff: -t.coeff, tau: t.tau })
            .collect();
        terms.extend(shifted);
        terms = MomentPolynomial::new(4, k, terms).terms;
    }
    Ok(MomentPolynomial::new(4, k, terms))
}

/// Birch's closed form for `S_{halfj}(p) = Σ_{A,B} (Σ_x (x^3+Ax+B | p))^{2·halfj}`, `halfj >= 1`.
pub fn birch_formula(p: u64, halfj: u32) -> Result<Integer> {
    check_field(p)?;
    if halfj == 0 {
        return Err(Error::InvalidArgument("the closed form starts at halfj = 1".into()));
    }
    let h = halfj;
    let j = 2 * h;
    let pi = Integer::from(p);
    let jf = factorial(j);
    let mut inner = Integer::from(1);
    inner += Integer::from(&jf / &(factorial(h) * factorial(h + 1))) * pow(&pi, h + 1);
    for l in 1..=h {
        let c = Integer::from(&jf * (2 * l + 1)) / (factorial(h - l) * factorial(h + l + 1));
        inner -= c * pow(&pi, h - l) * trace_plus_one(2 * l + 2, p)?;
    }
    Ok(inner * (pi - 1u32))
}

/// `∫_{USp(2g)} det(I - A)^k dA = ∏_{j<=k} j!/(2j)! · ∏_{1<=i<=j<=k} (2g + i + j)`.
pub fn keating_snaith(k: u32, g: u32) -> Rational {
    let mut acc = Rational::from(1);
    for j in 1..=k {
        acc *= ratio(factorial(j), factorial(2 * j));
        for i in 1..=j {
            acc *= 2 * g + i + j;
        }
    }
    acc
}

/// Both sides of `Σ_{j even <= k} C(k,j) j! 2^{k-j} / ((j/2)! (j/2+1)!) = 2/(k+2) C(2k+1, k)`.
pub fn binomial_identity_1(k: u32) -> (Rational, Rational) {
    let mut lhs = Rational::new();
    for j in (0..=k).step_by(2) {
        let num = binomial(k, j) * factorial(j) * (Integer::from(1) << (k - j));
        lhs += ratio(num, factorial(j / 2) * factorial(j / 2 + 1));
    }
    let rhs = ratio(binomial(2 * k + 1, k) * 2u32, Integer::from(k + 2));
    (lhs, rhs)
}

/// Both sides of
/// `Σ_{ν = 2l, even}^{k+1} C(k, ν-1) ν! 2^{k-ν+1} / ((ν/2-l)! (ν/2+l+1)!)
///  = 4(k^2+k+4l^2+4l) Γ(2k+2) / (Γ(k+2l+4) Γ(k-2l+2))`,
/// with the `ν = 0` term taken as zero.
pub fn binomial_identity_2(k: u32, l: u32) -> Result<(Rational, Rational)> {
    if 2 * l > k + 1 {
        return Err(Error::InvalidArgument(format!("need l <= (k+1)/2, got k = {k}, l = {l}")));
    }
    let mut lhs = Rational::new();
    for nu in (2 * l..=k + 1).step_by(2) {
        if nu == 0 {
            continue;
        }
        let num = binomial(k, nu - 1) * factorial(nu) * (Integer::from(1) << (k + 1 - nu));
        lhs += ratio(num, factorial(nu / 2 - l) * factorial(nu / 2 + l + 1));
    }
    let num = Integer::from(k * k + k + 4 * l * l + 4 * l) * factorial(2 * k + 1) * 4u32;
    let rhs = ratio(num, factorial(k + 2 * l + 3) * factorial(k + 1 - 2 * l));
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(d: usize, k: u32, s: &str) -> MomentPolynomial {
        MomentPolynomial::parse(d, k, s).unwrap()
    }

    #[test]
    fn parse_and_render() {
        let p = poly(4, 1, "2 - p^-1/2 - p^-1 - p^-5/2 + p^-3");
        assert_eq!(p.terms.len(), 5);
        assert_eq!(p.terms[1], MomentTerm { half_exp: 1, coeff: -1, tau: false });
        assert_eq!(p.render('p'), "2 - p^-1/2 - p^-1 - p^-5/2 + p^-3");
        let t = table_polynomial(3, 10).unwrap();
        assert!(t.has_tau());
        assert_eq!(t.to_string(), "58786 - 87210q^-2 - 33915q^-3 - 4655q^-4 - 189q^-5 - (tau+1)q^-6");
        assert!(MomentPolynomial::parse(3, 1, "2 + + q").is_err());
        assert!(MomentPolynomial::parse(3, 1, "2 q^-1/3").is_err());
    }

    #[test]
    fn every_table_row_parses_and_round_trips() {
        for (d, k) in tabulated() {
            let p = table_polynomial(d, k).unwrap();
            assert_eq!(MomentPolynomial::parse(d, k, &p.to_string()).unwrap(), p);
            assert_eq!(Rational::from(p.leading()), keating_snaith(k, ((d - 1) / 2) as u32), "d={d} k={k}");
        }
        assert!(matches!(table_polynomial(5, 6), Err(Error::NotTabulated(_))));
        assert!(matches!(evaluate_table(9, 2, 3), Err(Error::NotTabulated(_))));
    }

    #[test]
    fn evaluate_examples() {
        let v = evaluate_table(5, 1, 5).unwrap();
        // 3 - 1/5 + 1/25 - 1/625
        assert_eq!(v, AlgebraicValue::from_rational(Rational::from((1774, 625)), Integer::from(5)));
        let w = evaluate_table(4, 1, 9).unwrap();
        // 2 - 1/3 - 1/9 - 1/243 + 1/729 = 1132/729
        assert_eq!(w.x(), &Rational::from((1132, 729)));
        assert!(evaluate_table(3, 10, 9).is_err());
        let ten = evaluate_table(3, 10, 5).unwrap();
        assert_eq!(ten.x(), &theorem_d3(5, 10).unwrap());
    }

    #[test]
    fn theorem_d3_examples() {
        assert_eq!(theorem_d3(5, 1).unwrap(), 2);
        let p = Rational::from(7);
        let expect = Rational::from(42) - Rational::from(27) / p.clone().square() - Rational::from(1) / (p.clone() * &p * &p);
        assert_eq!(theorem_d3(7, 4).unwrap(), expect);
        assert!(theorem_d3(3, 2).is_err());
        assert!(theorem_d3(15, 2).is_err());
        assert_eq!(theorem_d3(9, 2).unwrap(), Rational::from((404, 81)));
        assert!(theorem_d3(25, 10).is_err());
        assert!(theorem_d3(5, 13).is_ok());
        assert_eq!(theorem_d3(5, 14), Err(Error::UnsupportedWeight(16)));
    }

    #[test]
    fn symbolic_theorems_match_tables() {
        for k in 1..=10 {
            assert_eq!(theorem_d3_polynomial(k).unwrap().terms, table_polynomial(3, k).unwrap().terms, "k={k}");
        }
        for k in 1..=5 {
            assert_eq!(theorem_d4_polynomial(k).unwrap().terms, table_polynomial(4, k).unwrap().terms, "k={k}");
        }
    }

    #[test]
    fn symbolic_and_numeric_agree() {
        for &p in &[5u64, 7, 11, 13] {
            for k in 1..=12 {
                let s = theorem_d3_polynomial(k).unwrap().evaluate(p).unwrap();
                assert_eq!(s.x(), &theorem_d3(p, k).unwrap());
                let s4 = theorem_d4_polynomial(k).unwrap().evaluate(p).unwrap();
                assert_eq!(s4, theorem_d4(p, k).unwrap(), "p={p} k={k}");
            }
        }
    }

    #[test]
    fn theorem_d4_k1() {
        let v = theorem_d4(5, 1).unwrap();
        assert_eq!(v, evaluate_table(4, 1, 5).unwrap());
    }

    #[test]
    fn birch_closed_forms() {
        for &p in &[5u64, 7, 11, 13] {
            let pi = Integer::from(p);
            let pw = |e: u32| pow(&pi, e);
            let pm = Integer::from(&pi - 1u32);
            assert_eq!(birch_formula(p, 1).unwrap(), &pm * pw(2));
            assert_eq!(birch_formula(p, 2).unwrap(), &pm * (pw(3) * 2u32 - pw(1) * 3u32));
            assert_eq!(
                birch_formula(p, 3).unwrap(),
                &pm * (pw(4) * 5u32 - pw(2) * 9u32 - pw(1) * 5u32)
            );
            assert_eq!(
                birch_formula(p, 4).unwrap(),
                &pm * (pw(5) * 14u32 - pw(3) * 28u32 - pw(2) * 20u32 - pw(1) * 7u32)
            );
            let s5 = pw(6) * 42u32 - pw(4) * 90u32 - pw(3) * 75u32 - pw(2) * 35u32 - pw(1) * 9u32 - tau(p).unwrap();
            assert_eq!(birch_formula(p, 5).unwrap(), pm * s5);
        }
        assert!(birch_formula(5, 0).is_err());
    }

    #[test]
    fn keating_snaith_values() {
        for g in 0..6 {
            assert_eq!(keating_snaith(1, g), g + 1);
        }
        assert_eq!(keating_snaith(2, 1), 5);
        assert_eq!(keating_snaith(3, 2), 84);
        let g1: Vec<Rational> = (1..=5).map(|k| keating_snaith(k, 1)).collect();
        assert_eq!(g1, [2, 5, 14, 42, 132].map(Rational::from));
        let g2: Vec<Rational> = (1..=5).map(|k| keating_snaith(k, 2)).collect();
        assert_eq!(g2, [3, 14, 84, 594, 4719].map(Rational::from));
    }

    #[test]
    fn binomial_identities() {
        assert_eq!(binomial_identity_1(2).0, 5);
        assert_eq!(binomial_identity_1(0), (Rational::from(1), Rational::from(1)));
        for k in 0..=20 {
            let (l, r) = binomial_identity_1(k);
            assert_eq!(l, r, "k={k}");
            for ll in 0..=k.div_ceil(2) {
                let (a, b) = binomial_identity_2(k, ll).unwrap();
                assert_eq!(a, b, "k={k} l={ll}");
            }
        }
        assert!(binomial_identity_2(3, 3).is_err());
    }
}
