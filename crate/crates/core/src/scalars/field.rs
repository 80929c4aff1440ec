use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The ground field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u32),
}

impl FieldSpec {
    /// Builds `F_p`, rejecting composite moduli and anything at or above 2^31.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::PrimeField(p as u32))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
            FieldSpec::PrimeField(p) => Scalar::Mod { value: 0, modulus: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::PrimeField(p) => Scalar::Mod {
                value: n.rem_euclid(*p as i64) as u32,
                modulus: *p,
            },
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_i64(den);
        let inv = d.inv().ok_or_else(|| Error::ParseScalar(format!("{num}/{den}")))?;
        Ok(&self.from_i64(num) * &inv)
    }

    /// Parses `"3"`, `"-2"` or `"3/4"`; over `F_p` the denominator is inverted mod p.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::ParseScalar(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (
                BigInt::from_str(n.trim()).map_err(|_| bad())?,
                BigInt::from_str(d.trim()).map_err(|_| bad())?,
            ),
            None => (BigInt::from_str(s).map_err(|_| bad())?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(bad());
        }
        match self {
            FieldSpec::Rationals => Ok(Scalar::Rat(BigRational::new(num, den))),
            FieldSpec::PrimeField(p) => {
                let pb = BigInt::from(*p);
                let reduce = |x: &BigInt| -> u32 {
                    let r = ((x % &pb) + &pb) % &pb;
                    r.to_u32().expect("residue fits in u32")
                };
                let n = Scalar::Mod { value: reduce(&num), modulus: *p };
                let d = Scalar::Mod { value: reduce(&den), modulus: *p };
                let inv = d.inv().ok_or_else(bad)?;
                Ok(&n * &inv)
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F_{p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of a [`FieldSpec`]. Arithmetic between elements of different fields panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { value: u32, modulus: u32 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Rationals,
            Scalar::Mod { modulus, .. } => FieldSpec::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: pow_mod(*value as u64, *modulus as u64 - 2, *modulus as u64) as u32,
                modulus: *modulus,
            },
        })
    }

    /// Multiplies by `(-1)^k`.
    pub fn signed(&self, k: i64) -> Scalar {
        if k.rem_euclid(2) == 0 {
            self.clone()
        } else {
            -self
        }
    }

    pub fn add_assign_ref(&mut self, other: &Scalar) {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => *a += b,
            (Scalar::Mod { value, modulus }, Scalar::Mod { value: v, modulus: m }) => {
                assert_eq!(modulus, m, "field mismatch");
                *value = ((*value as u64 + *v as u64) % *modulus as u64) as u32;
            }
            _ => panic!("field mismatch"),
        }
    }

    /// `self += a * b`, the inner step of every elimination loop.
    pub fn add_product(&mut self, a: &Scalar, b: &Scalar) {
        match (self, a, b) {
            (Scalar::Rat(s), Scalar::Rat(x), Scalar::Rat(y)) => *s += x * y,
            (Scalar::Mod { value, modulus }, Scalar::Mod { value: x, .. }, Scalar::Mod { value: y, .. }) => {
                let m = *modulus as u64;
                *value = ((*value as u64 + (*x as u64 * *y as u64) % m) % m) as u32;
            }
            _ => panic!("field mismatch"),
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Scalar {
    /// True when the rational is negative; always false over `F_p`.
    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_negative())
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { value: a, modulus }, Scalar::Mod { value: b, modulus: m }) => {
                assert_eq!(modulus, m, "field mismatch");
                Scalar::Mod {
                    value: ((*a as u64 * *b as u64) % *modulus as u64) as u32,
                    modulus: *modulus,
                }
            }
            _ => panic!("field mismatch"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_check() {
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(7919).is_ok());
        assert!(FieldSpec::prime(2147483647).is_ok());
        assert!(FieldSpec::prime(4294967291).is_err());
        assert!(FieldSpec::prime(9).is_err());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(0).is_err());
    }

    #[test]
    fn modular_inverse() {
        let f = FieldSpec::prime(7).unwrap();
        for n in 1..7 {
            let x = f.from_i64(n);
            assert!((&x * &x.inv().unwrap()).is_one());
        }
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn parse_and_display() {
        let q = FieldSpec::Rationals;
        assert_eq!(q.parse("6/4").unwrap().to_string(), "3/2");
        assert_eq!(q.parse("-2").unwrap().to_string(), "-2");
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("x").is_err());
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.parse("1/2").unwrap(), f5.from_i64(3));
        assert_eq!(f5.parse("-1").unwrap().to_string(), "4");
        assert!(f5.parse("1/5").is_err());
    }

    #[test]
    fn signs() {
        let q = FieldSpec::Rationals;
        assert_eq!(q.one().signed(3), q.from_i64(-1));
        assert_eq!(q.one().signed(-2), q.one());
    }
}
