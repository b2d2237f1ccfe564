//! Real quadratic surds `a + b√d` with rational `a`, `b` and squarefree `d`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

use crate::exact::rational::{format_rational, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    a: Rational,
    b: Rational,
    /// Squarefree and `> 1`, or `1` when `b = 0`.
    d: BigInt,
}

/// Splits `n > 0` as `s² · r` with `r` squarefree (trial division).
fn square_part(n: &BigInt) -> (BigInt, BigInt) {
    let mut s = BigInt::one();
    let mut r = n.clone();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while &p * &p <= r && p < limit {
        let pp = &p * &p;
        while (&r % &pp).is_zero() {
            r /= &pp;
            s *= &p;
        }
        p += 1;
    }
    let root = r.sqrt();
    if &root * &root == r {
        s *= root;
        r = BigInt::one();
    }
    (s, r)
}

fn sign_of(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_negative() {
        -1
    } else {
        1
    }
}

impl QuadraticSurd {
    pub fn rational(a: Rational) -> Self {
        QuadraticSurd {
            a,
            b: Rational::zero(),
            d: BigInt::one(),
        }
    }

    /// `a + b√n` for any integer `n ≥ 0`, normalized.
    pub fn new(a: Rational, b: Rational, n: BigInt) -> Self {
        assert!(n.sign() != Sign::Minus, "negative radicand");
        if b.is_zero() || n.is_zero() {
            return QuadraticSurd::rational(a);
        }
        let (s, r) = square_part(&n);
        let b = b * Rational::from_integer(s);
        if r.is_one() {
            return QuadraticSurd::rational(a + b);
        }
        QuadraticSurd { a, b, d: r }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn coefficient(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn radicand_with(&self, other: &Self) -> BigInt {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, _) => other.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(self.d, other.d, "surds from different quadratic fields");
                self.d.clone()
            }
        }
    }

    fn build(a: Rational, b: Rational, d: BigInt) -> Self {
        if b.is_zero() {
            QuadraticSurd::rational(a)
        } else {
            QuadraticSurd { a, b, d }
        }
    }

    pub fn conjugate(&self) -> Self {
        QuadraticSurd::build(self.a.clone(), -self.b.clone(), self.d.clone())
    }

    /// `a² - b²d`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.d.clone())
    }

    /// `None` on division by zero.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        let n = other.norm();
        let num = self * &other.conjugate();
        Some(QuadraticSurd::build(&num.a / &n, &num.b / &n, num.d))
    }

    pub fn signum(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rational::from_integer(self.d.clone());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let root = to_f64(&Rational::from_integer(self.d.clone())).sqrt();
        to_f64(&self.a) + to_f64(&self.b) * root
    }
}

impl Add for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn add(self, other: &QuadraticSurd) -> QuadraticSurd {
        let d = self.radicand_with(other);
        QuadraticSurd::build(&self.a + &other.a, &self.b + &other.b, d)
    }
}

impl Sub for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn sub(self, other: &QuadraticSurd) -> QuadraticSurd {
        self + &(-other)
    }
}

impl Neg for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        QuadraticSurd::build(-self.a.clone(), -self.b.clone(), self.d.clone())
    }
}

impl Mul for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn mul(self, other: &QuadraticSurd) -> QuadraticSurd {
        let d = self.radicand_with(other);
        let dr = Rational::from_integer(d.clone());
        QuadraticSurd::build(
            &self.a * &other.a + &self.b * &other.b * dr,
            &self.a * &other.b + &self.b * &other.a,
            d,
        )
    }
}

impl Mul<&Rational> for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn mul(self, r: &Rational) -> QuadraticSurd {
        QuadraticSurd::build(&self.a * r, &self.b * r, self.d.clone())
    }
}

impl PartialOrd for QuadraticSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.b.is_zero() || other.b.is_zero() || self.d == other.d {
            return (self - other).signum().cmp(&0);
        }
        // x = A + B√d₁ against y = C√d₂ with A, B, C rational.
        let x = QuadraticSurd::build(&self.a - &other.a, self.b.clone(), self.d.clone());
        let c = &other.b;
        let sx = x.signum();
        let sy = sign_of(c);
        if sx != sy {
            return sx.cmp(&sy);
        }
        if sx == 0 {
            return Ordering::Equal;
        }
        // Same sign: compare squares, then undo the sign.
        let x2 = &x * &x;
        let y2 = QuadraticSurd::rational(c * c * Rational::from_integer(other.d.clone()));
        let by_square = (&x2 - &y2).signum().cmp(&0);
        if sx > 0 {
            by_square
        } else {
            by_square.reverse()
        }
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", format_rational(&self.a));
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        let mag = self.b.abs();
        let coeff = if mag.is_one() {
            String::new()
        } else {
            format!("{}*", format_rational(&mag))
        };
        if self.a.is_zero() {
            let lead = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{lead}{coeff}sqrt({})", self.d)
        } else {
            write!(
                f,
                "{} {sign} {coeff}sqrt({})",
                format_rational(&self.a),
                self.d
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, ratio};

    fn s(a: Rational, b: Rational, n: i64) -> QuadraticSurd {
        QuadraticSurd::new(a, b, BigInt::from(n))
    }

    #[test]
    fn radicand_is_made_squarefree() {
        let x = s(int(0), int(1), 8);
        assert_eq!(x.radicand(), &BigInt::from(2));
        assert_eq!(x.coefficient(), &int(2));
        assert_eq!(s(int(1), int(1), 9).as_rational(), Some(&int(4)));
    }

    #[test]
    fn field_operations() {
        let phi = s(ratio(1, 2), ratio(1, 2), 5);
        // φ² = φ + 1.
        assert_eq!(&phi * &phi, &phi + &QuadraticSurd::rational(int(1)));
        let inv = QuadraticSurd::rational(int(1)).checked_div(&phi).unwrap();
        assert_eq!(&inv * &phi, QuadraticSurd::rational(int(1)));
        assert!((phi.to_f64() - 1.618_033_988_749_895).abs() < 1e-12);
    }

    #[test]
    fn ordering_is_exact() {
        let r2 = s(int(0), int(1), 2);
        assert!(r2 > QuadraticSurd::rational(ratio(141, 100)));
        assert!(r2 < QuadraticSurd::rational(ratio(142, 100)));
        let r3 = s(int(0), int(1), 3);
        assert!(r2 < r3);
        assert!(s(int(1), int(-1), 2) > s(int(0), int(-1), 3));
        assert_eq!(s(int(1), int(-1), 2).signum(), -1);
    }
}
