//! Truncated formal power series in t with explicit, propagated precision.

use std::fmt;

use crate::error::Error;
use crate::field::{Coeff, Field};
use crate::order::OrderValue;
use crate::poly::Polynomial;

/// Hard ceiling for any series precision; reparametrization refuses to
/// exceed it.
pub const MAX_PRECISION: u32 = 1 << 16;

/// Coefficients for t^0 .. t^{N-1}; N is the precision and is never
/// silently extended.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    field: Field,
    coeffs: Vec<Coeff>,
}

impl TruncatedSeries {
    pub fn zero(field: Field, precision: u32) -> TruncatedSeries {
        assert!(precision >= 1);
        TruncatedSeries { field, coeffs: vec![field.zero(); precision as usize] }
    }

    pub fn from_coeffs(field: Field, mut coeffs: Vec<Coeff>, precision: u32) -> TruncatedSeries {
        assert!(precision >= 1);
        coeffs.truncate(precision as usize);
        coeffs.resize(precision as usize, field.zero());
        TruncatedSeries { field, coeffs }
    }

    /// c * t^k to the given precision.
    pub fn monomial(field: Field, c: Coeff, k: u32, precision: u32) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(field, precision);
        if k < precision {
            s.coeffs[k as usize] = c;
        }
        s
    }

    pub fn identity(field: Field, precision: u32) -> TruncatedSeries {
        TruncatedSeries::monomial(field, field.one(), 1, precision)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn precision(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn coeff(&self, i: u32) -> &Coeff {
        &self.coeffs[i as usize]
    }

    pub fn constant_term(&self) -> &Coeff {
        &self.coeffs[0]
    }

    pub fn truncate(&self, precision: u32) -> TruncatedSeries {
        assert!(precision >= 1 && precision <= self.precision());
        TruncatedSeries {
            field: self.field,
            coeffs: self.coeffs[..precision as usize].to_vec(),
        }
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.iter().all(|c| self.field.is_zero(c))
    }

    /// Least exponent with a witnessed nonzero coefficient, else
    /// Inconclusive at the precision.
    pub fn order(&self) -> OrderValue {
        for (i, c) in self.coeffs.iter().enumerate() {
            if !self.field.is_zero(c) {
                return OrderValue::Finite(i as u32);
            }
        }
        OrderValue::Inconclusive(self.precision())
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.precision().min(other.precision()) as usize;
        let coeffs = (0..n)
            .map(|i| self.field.add(&self.coeffs[i], &other.coeffs[i]))
            .collect();
        TruncatedSeries { field: self.field, coeffs }
    }

    pub fn neg(&self) -> TruncatedSeries {
        TruncatedSeries {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        self.add(&other.neg())
    }

    pub fn sub_constant(&self, c: &Coeff) -> TruncatedSeries {
        let mut out = self.clone();
        out.coeffs[0] = self.field.sub(&out.coeffs[0], c);
        out
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.precision().min(other.precision()) as usize;
        let mut coeffs = vec![self.field.zero(); n];
        for i in 0..n.min(self.coeffs.len()) {
            if self.field.is_zero(&self.coeffs[i]) {
                continue;
            }
            for j in 0..(n - i).min(other.coeffs.len()) {
                let p = self.field.mul(&self.coeffs[i], &other.coeffs[j]);
                coeffs[i + j] = self.field.add(&coeffs[i + j], &p);
            }
        }
        TruncatedSeries { field: self.field, coeffs }
    }

    pub fn pow(&self, e: u32) -> TruncatedSeries {
        let mut acc = TruncatedSeries::monomial(self.field, self.field.one(), 0, self.precision());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// t -> t^n. Output precision n*(N-1)+1 so the top witnessed
    /// coefficient is preserved.
    pub fn reparametrize(&self, n: u32) -> Result<TruncatedSeries, Error> {
        assert!(n >= 1);
        let new_precision = n
            .checked_mul(self.precision() - 1)
            .and_then(|v| v.checked_add(1))
            .ok_or_else(|| Error::BudgetExceeded("reparametrization precision overflow".into()))?;
        if new_precision > MAX_PRECISION {
            return Err(Error::BudgetExceeded(format!(
                "reparametrized precision {new_precision} exceeds {MAX_PRECISION}"
            )));
        }
        let mut out = TruncatedSeries::zero(self.field, new_precision);
        for (k, c) in self.coeffs.iter().enumerate() {
            out.coeffs[k * n as usize] = c.clone();
        }
        Ok(out)
    }

    /// Multiplicative inverse of a unit series (nonzero constant term).
    pub fn invert(&self) -> Result<TruncatedSeries, Error> {
        if self.field.is_zero(&self.coeffs[0]) {
            return Err(Error::DivisionByZero);
        }
        let n = self.coeffs.len();
        let c0_inv = self.field.inv(&self.coeffs[0])?;
        let mut inv = vec![self.field.zero(); n];
        inv[0] = c0_inv.clone();
        for k in 1..n {
            // sum_{j=1..k} a_j * inv_{k-j} must cancel
            let mut acc = self.field.zero();
            for j in 1..=k {
                let p = self.field.mul(&self.coeffs[j], &inv[k - j]);
                acc = self.field.add(&acc, &p);
            }
            inv[k] = self.field.mul(&self.field.neg(&acc), &c0_inv);
        }
        Ok(TruncatedSeries { field: self.field, coeffs: inv })
    }

    /// Exact truncated division self / other, where ord(other) = d is
    /// witnessed and every coefficient of self below t^d vanishes. The
    /// quotient has precision N - d.
    pub fn div_exact(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, Error> {
        let n = self.precision().min(other.precision());
        let d = match other.truncate(n).order() {
            OrderValue::Finite(d) => d,
            _ => {
                return Err(Error::InexactSeriesDivision(
                    "divisor vanishes to precision".into(),
                ))
            }
        };
        for i in 0..d {
            if !self.field.is_zero(&self.coeffs[i as usize]) {
                return Err(Error::InexactSeriesDivision(format!(
                    "numerator has order {i} below divisor order {d}"
                )));
            }
        }
        let m = (n - d) as usize;
        let num = TruncatedSeries {
            field: self.field,
            coeffs: self.coeffs[d as usize..(d as usize + m)].to_vec(),
        };
        let den = TruncatedSeries {
            field: self.field,
            coeffs: other.coeffs[d as usize..(d as usize + m)].to_vec(),
        };
        Ok(num.mul(&den.invert()?))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if self.field.is_zero(c) {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "t")?,
                1 => write!(f, "{c}*t")?,
                _ if c.is_one() => write!(f, "t^{i}")?,
                _ => write!(f, "{c}*t^{i}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.precision())
    }
}

/// Substitutes one series per variable of `f`; all series must share a
/// precision (callers truncate explicitly when they accept a downgrade).
pub fn eval_poly(f: &Polynomial, args: &[TruncatedSeries]) -> Result<TruncatedSeries, Error> {
    if args.len() != f.ring().dim() {
        return Err(Error::VariableMismatch { expected: f.ring().dim(), got: args.len() });
    }
    let field = *f.ring().field();
    let precision = match args.first() {
        Some(first) => {
            for s in args {
                if s.precision() != first.precision() {
                    return Err(Error::PrecisionMismatch(first.precision(), s.precision()));
                }
            }
            first.precision()
        }
        None => 1,
    };
    let mut acc = TruncatedSeries::zero(field, precision);
    for (m, c) in f.terms() {
        let mut term = TruncatedSeries::monomial(field, c.clone(), 0, precision);
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                term = term.mul(&args[i].pow(e));
            }
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}
