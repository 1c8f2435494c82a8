//! Exact coefficient fields: arbitrary-precision rationals in characteristic
//! zero, canonical residues mod p for prime p < 2^16.

use num::bigint::BigInt;
use num::rational::{BigRational, Ratio};
use num::traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::Error;

/// Rational numbers used for order values (not for coefficients).
pub type Rational = Ratio<i64>;

/// A coefficient field, either Q (characteristic 0) or F_p.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Field {
    characteristic: u32,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn rationals() -> Field {
        Field { characteristic: 0 }
    }

    pub fn prime(p: u32) -> Result<Field, Error> {
        if p >= 1 << 16 || !is_prime(p) {
            return Err(Error::InvalidCharacteristic(p));
        }
        Ok(Field { characteristic: p })
    }

    pub fn new(characteristic: u32) -> Result<Field, Error> {
        if characteristic == 0 {
            Ok(Field::rationals())
        } else {
            Field::prime(characteristic)
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn zero(&self) -> Coeff {
        match self.characteristic {
            0 => Coeff::Q(BigRational::zero()),
            _ => Coeff::Fp(0),
        }
    }

    pub fn one(&self) -> Coeff {
        match self.characteristic {
            0 => Coeff::Q(BigRational::one()),
            _ => Coeff::Fp(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Coeff {
        match self.characteristic {
            0 => Coeff::Q(BigRational::from_integer(BigInt::from(n))),
            p => {
                let p = p as i64;
                Coeff::Fp(n.rem_euclid(p) as u64)
            }
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Coeff {
        match self.characteristic {
            0 => Coeff::Q(BigRational::from_integer(n.clone())),
            p => {
                let p_big = BigInt::from(p);
                let mut r = n % &p_big;
                if r.is_negative() {
                    r += &p_big;
                }
                let digits = r.to_u64_digits().1;
                Coeff::Fp(digits.first().copied().unwrap_or(0))
            }
        }
    }

    /// Parses `n` or `n/d` into a field element.
    pub fn parse(&self, s: &str) -> Result<Coeff, Error> {
        let make = |num: &str, den: &str| -> Result<Coeff, Error> {
            let n: BigInt = num
                .parse()
                .map_err(|_| Error::BadNumber(s.to_string()))?;
            let d: BigInt = den
                .parse()
                .map_err(|_| Error::BadNumber(s.to_string()))?;
            if d.is_zero() {
                return Err(Error::BadNumber(s.to_string()));
            }
            let dd = self.from_bigint(&d);
            if self.is_zero(&dd) {
                return Err(Error::BadNumber(format!("{s}: denominator vanishes in F_{}", self.characteristic)));
            }
            Ok(self.mul(&self.from_bigint(&n), &self.inv(&dd)?))
        };
        match s.split_once('/') {
            Some((num, den)) => make(num.trim(), den.trim()),
            None => make(s.trim(), "1"),
        }
    }

    pub fn is_zero(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Q(q) => q.is_zero(),
            Coeff::Fp(r) => *r == 0,
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (a, b) {
            (Coeff::Q(x), Coeff::Q(y)) => Coeff::Q(x + y),
            (Coeff::Fp(x), Coeff::Fp(y)) => Coeff::Fp((x + y) % self.characteristic as u64),
            _ => panic!("mixed field elements"),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match a {
            Coeff::Q(x) => Coeff::Q(-x),
            Coeff::Fp(0) => Coeff::Fp(0),
            Coeff::Fp(x) => Coeff::Fp(self.characteristic as u64 - x),
        }
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (a, b) {
            (Coeff::Q(x), Coeff::Q(y)) => Coeff::Q(x * y),
            (Coeff::Fp(x), Coeff::Fp(y)) => Coeff::Fp((x * y) % self.characteristic as u64),
            _ => panic!("mixed field elements"),
        }
    }

    pub fn inv(&self, a: &Coeff) -> Result<Coeff, Error> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        match a {
            Coeff::Q(x) => Ok(Coeff::Q(x.recip())),
            Coeff::Fp(x) => {
                // Fermat: x^(p-2) mod p.
                let p = self.characteristic as u64;
                let mut base = *x % p;
                let mut e = p - 2;
                let mut acc = 1u64;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    e >>= 1;
                }
                Ok(Coeff::Fp(acc))
            }
        }
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Result<Coeff, Error> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// binom(n, k) as a field element.
    pub fn binomial(&self, n: u32, k: u32) -> Coeff {
        if k > n {
            return self.zero();
        }
        let mut acc = BigInt::one();
        for i in 0..k {
            acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        self.from_bigint(&acc)
    }

    /// All field elements, for brute-force enumeration; only in char p.
    pub fn elements(&self) -> Vec<Coeff> {
        assert!(self.characteristic > 0, "cannot enumerate Q");
        (0..self.characteristic as u64).map(Coeff::Fp).collect()
    }
}

/// An element of Q or of F_p. Arithmetic goes through the owning [`Field`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Coeff {
    Q(BigRational),
    Fp(u64),
}

impl Coeff {
    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Q(q) => q.is_one(),
            Coeff::Fp(r) => *r == 1,
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Q(q) => write!(f, "{q}"),
            Coeff::Fp(r) => write!(f, "{r}"),
        }
    }
}
