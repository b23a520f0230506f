//! Exact elements `x + y√q` of `Q(√q)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Float, Integer, Rational};

/// `x + y√q` with rational `x`, `y`. When `q` is a perfect square the
/// irrational part is folded into `x`, so equal values compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicValue {
    x: Rational,
    y: Rational,
    q: Integer,
}

impl AlgebraicValue {
    pub fn new(x: Rational, y: Rational, q: Integer) -> Self {
        assert!(q > 0, "radicand must be positive");
        let mut v = AlgebraicValue { x, y, q };
        if v.q.is_perfect_square() && v.y != 0 {
            let s = Integer::from(v.q.sqrt_ref());
            v.x += Rational::from(&v.y * &s);
            v.y = Rational::new();
        }
        v
    }

    pub fn from_rational(x: Rational, q: Integer) -> Self {
        Self::new(x, Rational::new(), q)
    }

    pub fn zero(q: Integer) -> Self {
        Self::from_rational(Rational::new(), q)
    }

    pub fn one(q: Integer) -> Self {
        Self::from_rational(Rational::from(1), q)
    }

    /// `√q` itself (or its integer value for square `q`).
    pub fn sqrt_q(q: Integer) -> Self {
        Self::new(Rational::new(), Rational::from(1), q)
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    pub fn q(&self) -> &Integer {
        &self.q
    }

    pub fn is_rational(&self) -> bool {
        self.y == 0
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn scale(&self, r: &Rational) -> Self {
        AlgebraicValue {
            x: Rational::from(&self.x * r),
            y: Rational::from(&self.y * r),
            q: self.q.clone(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.q.clone());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Numerical value with `prec` bits; the square root carries extra guard bits.
    pub fn to_float(&self, prec: u32) -> Float {
        let work = prec + 64;
        let mut v = Float::with_val(work, &self.y);
        if self.y != 0 {
            v *= Float::with_val(work, &self.q).sqrt();
        }
        v += &self.x;
        Float::with_val(prec, v)
    }

    fn check_same_field(&self, other: &Self) {
        assert_eq!(self.q, other.q, "values from different quadratic fields");
    }
}

impl Add for &AlgebraicValue {
    type Output = AlgebraicValue;
    fn add(self, rhs: &AlgebraicValue) -> AlgebraicValue {
        self.check_same_field(rhs);
        AlgebraicValue {
            x: Rational::from(&self.x + &rhs.x),
            y: Rational::from(&self.y + &rhs.y),
            q: self.q.clone(),
        }
    }
}

impl Sub for &AlgebraicValue {
    type Output = AlgebraicValue;
    fn sub(self, rhs: &AlgebraicValue) -> AlgebraicValue {
        self + &(-rhs)
    }
}

impl Neg for &AlgebraicValue {
    type Output = AlgebraicValue;
    fn neg(self) -> AlgebraicValue {
        AlgebraicValue {
            x: Rational::from(-&self.x),
            y: Rational::from(-&self.y),
            q: self.q.clone(),
        }
    }
}

impl Mul for &AlgebraicValue {
    type Output = AlgebraicValue;
    fn mul(self, rhs: &AlgebraicValue) -> AlgebraicValue {
        self.check_same_field(rhs);
        let yy = Rational::from(&self.y * &rhs.y) * &self.q;
        AlgebraicValue {
            x: Rational::from(&self.x * &rhs.x) + yy,
            y: Rational::from(&self.x * &rhs.y) + Rational::from(&self.y * &rhs.x),
            q: self.q.clone(),
        }
    }
}

impl fmt::Display for AlgebraicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y == 0 {
            return write!(f, "{}", self.x);
        }
        let ay = Rational::from(self.y.abs_ref());
        let sign = if self.y < 0 { '-' } else { '+' };
        if self.x == 0 && self.y > 0 {
            write!(f, "{}*sqrt({})", ay, self.q)
        } else {
            write!(f, "{} {} {}*sqrt({})", self.x, sign, ay, self.q)
        }
    }
}
