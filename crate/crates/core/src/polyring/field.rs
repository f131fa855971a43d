//! Coefficient fields: the rationals and prime fields.
//!
//! Coefficients are always carried as `BigRational`. Over 𝔽_p every stored
//! coefficient is an integer in `[0, p)`, so the same container serves both
//! fields and the field handle decides how arithmetic is normalized.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Coeff = BigRational;

/// Field of definition of a polynomial ring.
///
/// Answers computed over `Prime(p)` are statements about the algebraic
/// closure of 𝔽_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[derive(Default)]
pub enum Field {
    #[default]
    Rational,
    Prime(u64),
}


impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "q" || s == "Q" {
            return Ok(Field::Rational);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::Input(format!("bad prime in field spec `{s}`")))?;
            return Field::prime(p);
        }
        Err(Error::Input(format!("unknown field `{s}` (expected `q` or `fp:<p>`)")))
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i.saturating_mul(i) <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Input(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    fn modulus(p: u64) -> BigInt {
        BigInt::from(p)
    }

    fn reduce_int(p: u64, n: &BigInt) -> BigInt {
        n.mod_floor(&Self::modulus(p))
    }

    /// Bring an arbitrary rational into canonical form for this field.
    /// Fails over 𝔽_p when the denominator is divisible by p.
    pub fn normalize(&self, c: Coeff) -> Result<Coeff> {
        match self {
            Field::Rational => Ok(c),
            Field::Prime(p) => {
                let num = Self::reduce_int(*p, c.numer());
                let den = Self::reduce_int(*p, c.denom());
                if den.is_zero() {
                    return Err(Error::Input(format!(
                        "denominator {} vanishes modulo {p}",
                        c.denom()
                    )));
                }
                let inv = mod_inverse(&den, &Self::modulus(*p));
                Ok(BigRational::from_integer(Self::reduce_int(*p, &(num * inv))))
            }
        }
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        self.normalize(BigRational::from_integer(BigInt::from(v)))
            .expect("integers are always representable")
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match self {
            Field::Rational => a + b,
            Field::Prime(p) => {
                BigRational::from_integer(Self::reduce_int(*p, &(a.numer() + b.numer())))
            }
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match self {
            Field::Rational => a - b,
            Field::Prime(p) => {
                BigRational::from_integer(Self::reduce_int(*p, &(a.numer() - b.numer())))
            }
        }
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match self {
            Field::Rational => a * b,
            Field::Prime(p) => {
                BigRational::from_integer(Self::reduce_int(*p, &(a.numer() * b.numer())))
            }
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match self {
            Field::Rational => -a,
            Field::Prime(p) => BigRational::from_integer(Self::reduce_int(*p, &(-a.numer()))),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Coeff) -> Option<Coeff> {
        if a.is_zero() {
            return None;
        }
        match self {
            Field::Rational => Some(a.recip()),
            Field::Prime(p) => Some(BigRational::from_integer(mod_inverse(
                a.numer(),
                &Self::modulus(*p),
            ))),
        }
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Option<Coeff> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    /// Multiplication by a positive integer (used by differentiation).
    pub fn scale_int(&self, a: &Coeff, k: u32) -> Coeff {
        self.mul(a, &self.from_i64(k as i64))
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let egcd = a.mod_floor(m).extended_gcd(m);
    debug_assert!(egcd.gcd.is_one());
    egcd.x.mod_floor(m)
}

/// Render a coefficient the way the polynomial grammar reads it back.
pub fn format_coeff(c: &Coeff) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn is_negative(c: &Coeff) -> bool {
    c.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Coeff {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn prime_field_normalizes_fractions() {
        let f = Field::prime(7).unwrap();
        // 3/2 = 3 * 4 = 12 = 5 mod 7
        assert_eq!(f.normalize(q(3, 2)).unwrap(), q(5, 1));
        assert!(f.normalize(q(1, 14)).is_err());
        assert_eq!(f.inv(&q(3, 1)).unwrap(), q(5, 1));
        assert_eq!(f.neg(&q(3, 1)), q(4, 1));
    }

    #[test]
    fn field_spec_parses() {
        assert_eq!("q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("fp:101".parse::<Field>().unwrap(), Field::Prime(101));
        assert!("fp:100".parse::<Field>().is_err());
        assert!("z".parse::<Field>().is_err());
    }
}
