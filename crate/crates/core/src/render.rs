//! Decimal rendering of exact and high-precision values, rounding half to even.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::algebraic::AlgebraicValue;

/// Bits needed for `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 1
}

/// `|r|` rounded half-to-even to `sig` significant digits, as `(mantissa, exponent)`
/// with `10^(sig-1) <= mantissa < 10^sig` and `|r| ≈ mantissa · 10^(exponent - sig + 1)`.
fn round_sig(r: &Rational, sig: u32) -> (Integer, i64) {
    let a = Rational::from(r.abs_ref());
    // initial guess from bit lengths, then correct
    let bits = a.numer().significant_bits() as i64 - a.denom().significant_bits() as i64;
    let mut e = (bits as f64 * std::f64::consts::LOG10_2).floor() as i64;
    let ten = Integer::from(10);
    let pow10 = |n: i64| -> Rational {
        if n >= 0 {
            Rational::from(Integer::from((&ten).pow(n as u32)))
        } else {
            Rational::from((Integer::from(1), Integer::from((&ten).pow((-n) as u32))))
        }
    };
    while a >= pow10(e + 1) {
        e += 1;
    }
    while a < pow10(e) {
        e -= 1;
    }
    loop {
        let scaled = Rational::from(&a * &pow10(sig as i64 - 1 - e));
        let m = round_half_even(&scaled);
        if m >= Integer::from((&ten).pow(sig)) {
            e += 1;
            continue;
        }
        return (m, e);
    }
}

fn round_half_even(r: &Rational) -> Integer {
    let (rem, fl) = r.clone().fract_floor(Integer::new());
    let half = Rational::from((1, 2));
    match rem.cmp(&half) {
        std::cmp::Ordering::Less => fl,
        std::cmp::Ordering::Greater => fl + 1u32,
        std::cmp::Ordering::Equal => {
            if fl.is_even() {
                fl
            } else {
                fl + 1u32
            }
        }
    }
}

/// Fixed-point rendering with `sig` significant digits, e.g. `5.710336021545693923735`.
pub fn fixed_sig(r: &Rational, sig: u32) -> String {
    assert!(sig > 0);
    if *r == 0 {
        return "0".into();
    }
    let (m, e) = round_sig(r, sig);
    let digits = m.to_string();
    let sign = if *r < 0 { "-" } else { "" };
    let sig = sig as i64;
    let body = if e >= sig - 1 {
        format!("{digits}{}", "0".repeat((e - sig + 1) as usize))
    } else if e >= 0 {
        let split = (e + 1) as usize;
        format!("{}.{}", &digits[..split], &digits[split..])
    } else {
        format!("0.{}{digits}", "0".repeat((-e - 1) as usize))
    };
    format!("{sign}{body}")
}

/// Scientific rendering in `printf("%.{sig-1}e")` style, e.g. `-1.99401e-12`.
pub fn sci_sig(r: &Rational, sig: u32) -> String {
    assert!(sig > 0);
    if *r == 0 {
        return "0e+00".into();
    }
    let (m, e) = round_sig(r, sig);
    let digits = m.to_string();
    let sign = if *r < 0 { "-" } else { "" };
    let mant = if sig > 1 { format!("{}.{}", &digits[..1], &digits[1..]) } else { digits };
    let esign = if e < 0 { '-' } else { '+' };
    format!("{sign}{mant}e{esign}{:02}", e.abs())
}

/// `printf("%.{sig}g")` style: fixed notation when the decimal exponent is in
/// `-5..sig`, scientific otherwise, trailing zeros removed.
pub fn general_sig(r: &Rational, sig: u32) -> String {
    assert!(sig > 0);
    if *r == 0 {
        return "0".into();
    }
    let (_, e) = round_sig(r, sig);
    if e < -4 || e >= sig as i64 {
        let s = sci_sig(r, sig);
        let (mant, exp) = s.split_once('e').expect("exponent");
        format!("{}e{exp}", trim_zeros(mant))
    } else {
        trim_zeros(&fixed_sig(r, sig))
    }
}

/// Drops trailing fractional zeros (and a bare trailing point).
pub fn trim_zeros(s: &str) -> String {
    if !s.contains('.') || s.contains('e') {
        return s.to_string();
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Exact value of a finite float.
pub fn float_to_rational(x: &Float) -> Rational {
    x.to_rational().expect("finite value")
}

pub fn float_fixed(x: &Float, sig: u32) -> String {
    fixed_sig(&float_to_rational(x), sig)
}

pub fn float_sci(x: &Float, sig: u32) -> String {
    sci_sig(&float_to_rational(x), sig)
}

/// Decimal value of `x + y√q`; the root is approximated with 10 guard digits.
pub fn algebraic_fixed(v: &AlgebraicValue, sig: u32) -> String {
    if v.is_rational() {
        return fixed_sig(v.x(), sig);
    }
    let f = algebraic_float(v, sig + 10);
    float_fixed(&f, sig)
}

/// `x + y√q` as a float with at least `digits` correct significant digits
/// (absolute accuracy relative to the larger of `|x|`, `|y√q|`).
pub fn algebraic_float(v: &AlgebraicValue, digits: u32) -> Float {
    v.to_float(bits_for_digits(digits) + 32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn fixed() {
        assert_eq!(fixed_sig(&r(2, 1), 5), "2.0000");
        assert_eq!(trim_zeros(&fixed_sig(&r(2, 1), 5)), "2");
        assert_eq!(fixed_sig(&r(124, 25), 3), "4.96");
        assert_eq!(fixed_sig(&r(-1, 3), 4), "-0.3333");
        assert_eq!(fixed_sig(&r(1, 800), 2), "0.0012");
        assert_eq!(fixed_sig(&r(1, 750), 2), "0.0013");
        assert_eq!(fixed_sig(&r(123456, 1), 3), "123000");
        assert_eq!(fixed_sig(&r(9999, 1000), 3), "10.0");
        assert_eq!(fixed_sig(&Rational::new(), 3), "0");
    }

    #[test]
    fn half_even() {
        assert_eq!(fixed_sig(&r(25, 10), 1), "2");
        assert_eq!(fixed_sig(&r(35, 10), 1), "4");
        assert_eq!(fixed_sig(&r(125, 1000), 2), "0.12");
        assert_eq!(fixed_sig(&r(1251, 10000), 2), "0.13");
    }

    #[test]
    fn scientific() {
        assert_eq!(sci_sig(&r(-199401, 100_000_000_000_000_000), 6), "-1.99401e-12");
        assert_eq!(sci_sig(&r(218175, 100_000_000), 6), "2.18175e-03");
        assert_eq!(sci_sig(&r(12, 1), 2), "1.2e+01");
        assert_eq!(sci_sig(&Rational::new(), 3), "0e+00");
    }

    #[test]
    fn general() {
        assert_eq!(general_sig(&r(484698, 10_000_000_000), 6), "4.84698e-05");
        assert_eq!(general_sig(&r(791942, 1_000_000_000), 6), "0.000791942");
        assert_eq!(general_sig(&r(36074, 1_000_000), 6), "0.036074");
        assert_eq!(general_sig(&r(-472187, 10), 6), "-47218.7");
        assert_eq!(general_sig(&r(-195073, 1), 6), "-195073");
        assert_eq!(general_sig(&r(-1950730, 1), 6), "-1.95073e+06");
        assert_eq!(general_sig(&r(5, 1), 6), "5");
        assert_eq!(general_sig(&r(1, 2_000_000), 6), "5e-07");
    }

    #[test]
    fn algebraic() {
        let v = AlgebraicValue::new(r(2, 1), r(1, 1), Integer::from(2));
        assert_eq!(algebraic_fixed(&v, 12), "3.41421356237");
        let f = Float::with_val(200, 1) / 3u32;
        assert_eq!(float_fixed(&f, 6), "0.333333");
    }
}
