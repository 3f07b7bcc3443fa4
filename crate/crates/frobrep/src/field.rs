//! Runtime-selected exact coefficient fields: arbitrary-precision rationals
//! and prime fields of word-sized characteristic.
//!
//! Every matrix and module in this crate carries a [`Field`] tag, and all
//! arithmetic goes through [`Scalar`] values that remember their field.
//! Mixing scalars from different fields is a programming error and panics.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Errors arising from field construction or scalar parsing.
#[derive(Debug, Error)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse {0:?} as a field description (expected \"rational\" or \"fp:P\")")]
    BadFieldSpec(String),
    #[error("cannot parse {0:?} as a scalar over {1}")]
    BadScalar(String, Field),
    #[error("division by zero")]
    DivisionByZero,
}

/// An exact coefficient field, fixed at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    /// The rational numbers with arbitrary-precision arithmetic.
    Rationals,
    /// The prime field with the given (verified prime) number of elements.
    Fp(u64),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "rational"),
            Field::Fp(p) => write!(f, "fp:{p}"),
        }
    }
}

impl Field {
    /// Constructs a prime field, verifying primality of the modulus.
    pub fn fp(p: u64) -> Result<Field, FieldError> {
        if is_prime_u64(p) {
            Ok(Field::Fp(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    /// Parses `"rational"` or `"fp:P"` (with `P` prime).
    pub fn parse(s: &str) -> Result<Field, FieldError> {
        if s == "rational" {
            return Ok(Field::Rationals);
        }
        if let Some(rest) = s.strip_prefix("fp:") {
            let p: u64 = rest
                .parse()
                .map_err(|_| FieldError::BadFieldSpec(s.to_string()))?;
            return Field::fp(p);
        }
        Err(FieldError::BadFieldSpec(s.to_string()))
    }

    /// The characteristic of the field (0 for the rationals).
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Fp(p) => *p,
        }
    }

    /// The additive identity.
    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::zero()),
            Field::Fp(p) => Scalar::Fp { value: 0, prime: *p },
        }
    }

    /// The multiplicative identity.
    pub fn one(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::one()),
            Field::Fp(p) => Scalar::Fp { value: 1 % p, prime: *p },
        }
    }

    /// The image of a machine integer in this field.
    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Fp(p) => {
                let r = v.rem_euclid(*p as i64) as u64;
                Scalar::Fp { value: r, prime: *p }
            }
        }
    }

    /// The quotient of two integer images; errors if the denominator maps to zero.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar, FieldError> {
        let d = self.from_i64(den);
        if d.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(&self.from_i64(num) * &d.inv().expect("nonzero denominator"))
    }

    /// Parses a scalar literal: `"a"` or `"a/b"` with decimal integers.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, FieldError> {
        let bad = || FieldError::BadScalar(s.to_string(), *self);
        match self {
            Field::Rationals => {
                let (num_s, den_s) = match s.split_once('/') {
                    Some((a, b)) => (a, b),
                    None => (s, "1"),
                };
                let num: BigInt = num_s.trim().parse().map_err(|_| bad())?;
                let den: BigInt = den_s.trim().parse().map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(FieldError::DivisionByZero);
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            Field::Fp(_) => {
                let (num_s, den_s) = match s.split_once('/') {
                    Some((a, b)) => (a, b),
                    None => (s, "1"),
                };
                let num: i64 = num_s.trim().parse().map_err(|_| bad())?;
                let den: i64 = den_s.trim().parse().map_err(|_| bad())?;
                self.from_ratio(num, den)
            }
        }
    }
}

/// An element of a runtime-selected field.
///
/// Arithmetic panics if the operands belong to different fields; the library
/// never mixes fields in a single computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rational(BigRational),
    Fp { value: u64, prime: u64 },
}

impl Scalar {
    /// The field this scalar belongs to.
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Fp { prime, .. } => Field::Fp(*prime),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Fp { value, prime } => *value == 1 % *prime,
        }
    }

    /// The multiplicative inverse, or `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    None
                } else {
                    Some(Scalar::Rational(r.recip()))
                }
            }
            Scalar::Fp { value, prime } => {
                if *value == 0 {
                    None
                } else {
                    // Fermat: value^(p-2) mod p.
                    Some(Scalar::Fp {
                        value: powmod(*value, *prime - 2, *prime),
                        prime: *prime,
                    })
                }
            }
        }
    }

    /// Nonnegative integer power.
    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut acc = self.field().one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Renders as `"a"` or `"a/b"`; prime-field values as their canonical
    /// representative in `0..p`.
    pub fn to_display_string(&self) -> String {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { value, .. } => value.to_string(),
        }
    }

    /// The underlying rational value, if this is a rational scalar.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Fp { .. } => None,
        }
    }

    /// Exact conversion to an `i64`, when the value is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    let n = r.numer();
                    if n.abs() <= BigInt::from(i64::MAX) {
                        n.to_string().parse().ok()
                    } else {
                        None
                    }
                } else {
                    None
                }
            }
            Scalar::Fp { value, .. } => i64::try_from(*value).ok(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_display_string())
    }
}

fn check_same_field(a: &Scalar, b: &Scalar) {
    assert!(
        a.field() == b.field(),
        "mixed-field arithmetic: {} vs {}",
        a.field(),
        b.field()
    );
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        check_same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Fp { value: a, prime }, Scalar::Fp { value: b, .. }) => {
                let mut s = a + b;
                if s >= *prime {
                    s -= prime;
                }
                Scalar::Fp { value: s, prime: *prime }
            }
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        check_same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Fp { value: a, prime }, Scalar::Fp { value: b, .. }) => {
                let s = if a >= b { a - b } else { a + prime - b };
                Scalar::Fp { value: s, prime: *prime }
            }
            _ => unreachable!(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        check_same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Fp { value: a, prime }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: mulmod(*a, *b, *prime),
                prime: *prime,
            },
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Fp { value, prime } => {
                let v = if *value == 0 { 0 } else { prime - value };
                Scalar::Fp { value: v, prime: *prime }
            }
        }
    }
}

/// `a * b mod m` without overflow.
pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `a^e mod m` by square-and-multiply.
pub(crate) fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin primality test, valid for all `u64` inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    // This witness set decides primality for every 64-bit integer.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_and_structured() {
        let primes = [2u64, 3, 5, 7, 11, 97, 101, 7919, 2147483647];
        for p in primes {
            assert!(is_prime_u64(p), "{p} should be prime");
        }
        let composites = [0u64, 1, 4, 6, 9, 15, 91, 561, 41041, 2147483649];
        for c in composites {
            assert!(!is_prime_u64(c), "{c} should be composite");
        }
        // Largest 64-bit prime.
        assert!(is_prime_u64(18446744073709551557));
        assert!(!is_prime_u64(18446744073709551555));
    }

    #[test]
    fn rational_arithmetic() {
        let f = Field::Rationals;
        let half = f.from_ratio(1, 2).unwrap();
        let third = f.from_ratio(1, 3).unwrap();
        let sum = &half + &third;
        assert_eq!(sum, f.from_ratio(5, 6).unwrap());
        assert_eq!(&half * &third, f.from_ratio(1, 6).unwrap());
        assert_eq!(&half - &third, f.from_ratio(1, 6).unwrap());
        assert_eq!(-&half, f.from_ratio(-1, 2).unwrap());
        assert_eq!(half.inv().unwrap(), f.from_i64(2));
        assert!(f.zero().inv().is_none());
        assert_eq!(f.from_i64(3).pow(4), f.from_i64(81));
        assert_eq!(sum.to_display_string(), "5/6");
        assert_eq!(f.from_i64(-7).to_display_string(), "-7");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::fp(7).unwrap();
        let a = f.from_i64(5);
        let b = f.from_i64(4);
        assert_eq!(&a + &b, f.from_i64(2));
        assert_eq!(&a - &b, f.from_i64(1));
        assert_eq!(&b - &a, f.from_i64(-1));
        assert_eq!(&a * &b, f.from_i64(6));
        assert_eq!(-&a, f.from_i64(2));
        assert_eq!(a.inv().unwrap(), f.from_i64(3)); // 5*3 = 15 = 1 mod 7
        assert_eq!(a.pow(6), f.one()); // Fermat
        assert_eq!(f.from_i64(-13), f.from_i64(1));
    }

    #[test]
    fn field_parsing() {
        assert_eq!(Field::parse("rational").unwrap(), Field::Rationals);
        assert_eq!(Field::parse("fp:101").unwrap(), Field::Fp(101));
        assert!(Field::parse("fp:100").is_err());
        assert!(Field::parse("real").is_err());

        let q = Field::Rationals;
        assert_eq!(q.parse_scalar("-3/4").unwrap(), q.from_ratio(-3, 4).unwrap());
        assert_eq!(q.parse_scalar("6").unwrap(), q.from_i64(6));
        assert!(q.parse_scalar("1/0").is_err());
        assert!(q.parse_scalar("x").is_err());

        let f5 = Field::fp(5).unwrap();
        assert_eq!(f5.parse_scalar("7").unwrap(), f5.from_i64(2));
        assert_eq!(f5.parse_scalar("1/2").unwrap(), f5.from_i64(3));
        assert!(f5.parse_scalar("1/5").is_err());
    }

    #[test]
    #[should_panic(expected = "mixed-field")]
    fn mixing_fields_panics() {
        let a = Field::Rationals.one();
        let b = Field::fp(5).unwrap().one();
        let _ = &a + &b;
    }

    #[test]
    fn display_round_trip() {
        let q = Field::Rationals;
        for s in ["0", "1", "-5", "22/7", "-3/8"] {
            let v = q.parse_scalar(s).unwrap();
            assert_eq!(v.to_display_string(), s);
        }
    }
}
