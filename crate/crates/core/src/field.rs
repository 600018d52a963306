//! Scalar fields for exact rank computations.
//!
//! Two fields are supported: the rationals (arbitrary precision, used to certify
//! explicit frameworks with zero error) and a word-sized prime field (used for
//! randomized evaluation of generic ranks).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, Matrix};

pub type Rational = BigRational;

/// Default modulus, the Mersenne prime 2^61 - 1.
pub const DEFAULT_MODULUS: u64 = (1 << 61) - 1;
/// Smallest modulus accepted for a [`PrimeField`].
pub const MIN_MODULUS: u64 = 1 << 50;
/// Largest modulus accepted; keeps `a + b` inside a `u64`.
pub const MAX_MODULUS: u64 = 1 << 63;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is outside [2^50, 2^63)")]
    ModulusOutOfRange(u64),
}

/// Which field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldConfig {
    ExactRational,
    PrimeField { modulus: u64 },
}

impl FieldConfig {
    pub fn validate(&self) -> Result<(), FieldError> {
        match *self {
            FieldConfig::ExactRational => Ok(()),
            FieldConfig::PrimeField { modulus } => PrimeField::new(modulus).map(|_| ()),
        }
    }
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig::PrimeField {
            modulus: DEFAULT_MODULUS,
        }
    }
}

/// A field whose elements are plain values; the field object carries the
/// arithmetic (and, for prime fields, the modulus).
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn config(&self) -> FieldConfig;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// Image of a rational number; `None` when the denominator vanishes in the field.
    fn from_rational(&self, q: &Rational) -> Option<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Canonical text form ("num/den" for rationals, decimal residue for prime fields).
    fn format(&self, a: &Self::Elem) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|b| self.mul(a, &b))
    }

    fn pow(&self, a: &Self::Elem, mut exp: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    fn rank(&self, m: &Matrix<Self::Elem>) -> usize {
        linalg::gauss_rank(self, m)
    }
}

/// Fields we can draw random elements from.
pub trait SampleField: Field {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let v = self.sample(rng);
            if !self.is_zero(&v) {
                return v;
            }
        }
    }
}

/// Integers modulo a prime q with 2^50 <= q < 2^63.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    pub fn new(modulus: u64) -> Result<Self, FieldError> {
        if !(MIN_MODULUS..MAX_MODULUS).contains(&modulus) {
            return Err(FieldError::ModulusOutOfRange(modulus));
        }
        if !is_prime_u64(modulus) {
            return Err(FieldError::NotPrime(modulus));
        }
        Ok(Self { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn reduce_bigint(&self, v: &BigInt) -> u64 {
        let q = BigInt::from(self.modulus);
        v.mod_floor(&q).to_u64().expect("residue fits in u64")
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        Self {
            modulus: DEFAULT_MODULUS,
        }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn config(&self) -> FieldConfig {
        FieldConfig::PrimeField {
            modulus: self.modulus,
        }
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.modulus as i128) as u64
    }

    fn from_rational(&self, q: &Rational) -> Option<u64> {
        let num = self.reduce_bigint(q.numer());
        let den = self.reduce_bigint(q.denom());
        self.div(&num, &den)
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.modulus as u128) as u64
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // q < 2^63 so q - 2 fits comfortably; Fermat inversion.
        let mut base = *a;
        let mut exp = self.modulus - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        Some(acc)
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
}

impl SampleField for PrimeField {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.modulus)
    }
}

/// The rational numbers with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

/// Range of the integers drawn by [`Rationals::sample`].
const RATIONAL_SAMPLE_BOUND: i64 = 1 << 20;

impl Field for Rationals {
    type Elem = Rational;

    fn config(&self) -> FieldConfig {
        FieldConfig::ExactRational
    }

    fn zero(&self) -> Rational {
        Rational::zero()
    }

    fn one(&self) -> Rational {
        Rational::one()
    }

    fn from_i64(&self, v: i64) -> Rational {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(&self, q: &Rational) -> Option<Rational> {
        Some(q.clone())
    }

    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }

    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }

    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }

    fn neg(&self, a: &Rational) -> Rational {
        -a
    }

    fn inv(&self, a: &Rational) -> Option<Rational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }

    fn format(&self, a: &Rational) -> String {
        format_rational(a)
    }

    fn rank(&self, m: &Matrix<Rational>) -> usize {
        linalg::bareiss_rank(m)
    }
}

impl SampleField for Rationals {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Rational {
        self.from_i64(rng.gen_range(-RATIONAL_SAMPLE_BOUND..=RATIONAL_SAMPLE_BOUND))
    }
}

/// "num/den" in lowest terms, or just "num" for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid rational token {0:?}")]
pub struct ParseRationalError(pub String);

/// Parses "a", "-a" or "a/b" with b != 0.
pub fn parse_rational(token: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(token.to_string());
    let (num, den) = match token.split_once('/') {
        Some((n, d)) => (n, d),
        None => (token, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| err())?;
    let den: BigInt = den.trim().parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Least common multiple of the denominators of `values`.
pub(crate) fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
        .abs()
}

/// The integer vector with coprime entries and positive leading entry that
/// spans the same line as `v`. The zero vector is returned unchanged.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<Rational> {
    let l = denominator_lcm(v);
    let ints: Vec<BigInt> = v.iter().map(|q| (q * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &g * &sign))
        .collect()
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
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
    fn default_modulus_is_prime() {
        assert!(is_prime_u64(DEFAULT_MODULUS));
        assert!(PrimeField::new(DEFAULT_MODULUS).is_ok());
    }

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(
            PrimeField::new(DEFAULT_MODULUS - 2),
            Err(FieldError::NotPrime(DEFAULT_MODULUS - 2))
        );
        assert_eq!(
            PrimeField::new(101),
            Err(FieldError::ModulusOutOfRange(101))
        );
        assert!(FieldConfig::ExactRational.validate().is_ok());
    }

    #[test]
    fn primality_small_cases() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        // Carmichael number.
        assert!(!is_prime_u64(561));
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::default();
        let a = f.from_i64(-3);
        assert_eq!(f.add(&a, &3), 0);
        let inv = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), 1);
        assert_eq!(f.inv(&0), None);
        let half = f.from_rational(&Rational::new(1.into(), 2.into())).unwrap();
        assert_eq!(f.mul(&half, &2), 1);
        assert_eq!(f.pow(&2, 61), 1); // 2^61 = 1 mod 2^61 - 1
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
        assert_eq!(format_rational(&parse_rational("-7").unwrap()), "-7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn primitive_vectors() {
        let v: Vec<Rational> = ["-18", "7/4", "0", "2"]
            .iter()
            .map(|t| parse_rational(t).unwrap())
            .collect();
        let w: Vec<String> = primitive_integer_vector(&v)
            .iter()
            .map(format_rational)
            .collect();
        assert_eq!(w, ["72", "-7", "0", "-8"]);
        let z = vec![Rational::zero(); 2];
        assert_eq!(primitive_integer_vector(&z), z);
    }
}
