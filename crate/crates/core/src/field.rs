//! Ground fields: the rationals and prime fields 𝔽_p.
//!
//! Scalars carry no reference to their field; every arithmetic operation goes
//! through a [`FieldSpec`], which keeps values normalized (residues in
//! `0..p`, or reduced fractions).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is neither 0 nor a prime")]
    NotPrime(u64),
    #[error("characteristic {0} is too large (primes below 2^31 are supported)")]
    TooLarge(u64),
}

/// A field of characteristic 0 (ℚ) or p (𝔽_p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct FieldSpec {
    characteristic: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Mod(u64),
    Rat(BigRational),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl TryFrom<u64> for FieldSpec {
    type Error = FieldError;
    fn try_from(c: u64) -> Result<Self, FieldError> {
        FieldSpec::new(c)
    }
}

impl From<FieldSpec> for u64 {
    fn from(f: FieldSpec) -> u64 {
        f.characteristic
    }
}

impl FieldSpec {
    pub fn new(characteristic: u64) -> Result<Self, FieldError> {
        if characteristic == 0 {
            return Ok(Self { characteristic });
        }
        if characteristic >= 1 << 31 {
            return Err(FieldError::TooLarge(characteristic));
        }
        if !is_prime(characteristic) {
            return Err(FieldError::NotPrime(characteristic));
        }
        Ok(Self { characteristic })
    }

    pub fn rationals() -> Self {
        Self { characteristic: 0 }
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p == 0 {
            return Err(FieldError::NotPrime(0));
        }
        Self::new(p)
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn zero(&self) -> Scalar {
        match self.characteristic {
            0 => Scalar::Rat(BigRational::zero()),
            _ => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self.characteristic {
            0 => Scalar::Rat(BigRational::one()),
            _ => Scalar::Mod(1),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self.characteristic {
            0 => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            p => Scalar::Mod(v.rem_euclid(p as i64) as u64),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self.characteristic {
            0 => Scalar::Rat(BigRational::from_integer(v.clone())),
            p => {
                let r = v.mod_floor(&BigInt::from(p));
                Scalar::Mod(r.to_u64().expect("residue fits"))
            }
        }
    }

    /// Maps a rational number into the field; `None` when the denominator
    /// vanishes mod p.
    pub fn from_rational(&self, v: &BigRational) -> Option<Scalar> {
        match self.characteristic {
            0 => Some(Scalar::Rat(v.clone())),
            _ => {
                let n = self.from_bigint(v.numer());
                let d = self.from_bigint(v.denom());
                self.inv(&d).map(|di| self.mul(&n, &di))
            }
        }
    }

    /// Brings a scalar produced elsewhere into normal form for this field.
    pub fn reduce(&self, a: &Scalar) -> Option<Scalar> {
        match (self.characteristic, a) {
            (0, Scalar::Rat(_)) => Some(a.clone()),
            (0, Scalar::Mod(v)) => Some(self.from_i64(*v as i64)),
            (p, Scalar::Mod(v)) => Some(Scalar::Mod(v % p)),
            (_, Scalar::Rat(r)) => self.from_rational(r),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x + y) % self.characteristic),
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            _ => panic!("scalar from a different field"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Mod(0) => Scalar::Mod(0),
            Scalar::Mod(x) => Scalar::Mod(self.characteristic - x),
            Scalar::Rat(x) => Scalar::Rat(-x),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x * y) % self.characteristic),
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            _ => panic!("scalar from a different field"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match a {
            Scalar::Mod(0) => None,
            Scalar::Mod(x) => Some(Scalar::Mod(mod_pow(*x, self.characteristic - 2, self.characteristic))),
            Scalar::Rat(x) if x.is_zero() => None,
            Scalar::Rat(x) => Some(Scalar::Rat(x.recip())),
        }
    }

    /// `(-1)^k` as a field element.
    pub fn sign(&self, odd: bool) -> Scalar {
        if odd {
            self.neg(&self.one())
        } else {
            self.one()
        }
    }
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
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

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod(x) => *x == 0,
            Scalar::Rat(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod(x) => *x == 1,
            Scalar::Rat(x) => x.is_one(),
        }
    }

    /// True for `-1` in ℚ; for 𝔽_p callers compare against `field.neg(one)`.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Mod(_) => false,
            Scalar::Rat(x) => x.is_negative(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod(x) => write!(f, "{x}"),
            Scalar::Rat(x) if x.is_integer() => write!(f, "{}", x.numer()),
            Scalar::Rat(x) => write!(f, "{}/{}", x.numer(), x.denom()),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.characteristic {
            0 => write!(f, "Q"),
            p => write!(f, "F{p}"),
        }
    }
}

/// Binomial coefficient computed in ℤ.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
