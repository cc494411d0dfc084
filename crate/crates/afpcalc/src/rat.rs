//! Exact scalars: rationals extended with a single point at infinity.
//!
//! Trace weights, relative dimensions and free-group parameters all live
//! in this type. Arithmetic is exact (arbitrary precision). `Inf` absorbs
//! addition and positive scaling; the genuinely undefined forms —
//! `0 * inf`, subtracting `inf`, dividing by zero — panic in operator
//! form and are available as `Err` through the `checked_*` variants.
//!
//! Finite values may turn negative in intermediate expressions (relative
//! dimension deficits `d - 1` are negative for matrix algebras); the
//! model types reject negatives at their own validation boundaries.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RatError {
    #[error("0 * inf is undefined")]
    ZeroTimesInf,
    #[error("negative multiple of inf is undefined")]
    NegativeTimesInf,
    #[error("subtracting inf is undefined")]
    SubtractInf,
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by inf is undefined")]
    DivisionByInf,
    #[error("cannot parse `{input}` as a rational{hint}")]
    Parse { input: String, hint: String },
}

/// An exact scalar: a rational number or `inf`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ExtRat {
    Fin(BigRational),
    Inf,
}

impl ExtRat {
    pub fn int(n: i64) -> Self {
        ExtRat::Fin(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den`. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "division by zero");
        ExtRat::Fin(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        ExtRat::int(0)
    }

    pub fn one() -> Self {
        ExtRat::int(1)
    }

    pub fn inf() -> Self {
        ExtRat::Inf
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ExtRat::Inf)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_inf()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRat::Fin(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, ExtRat::Fin(r) if r.is_one())
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, ExtRat::Fin(r) if r.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        match self {
            ExtRat::Fin(r) => r.is_positive(),
            ExtRat::Inf => true,
        }
    }

    pub fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self, RatError> {
        match (self, rhs) {
            (_, ExtRat::Inf) => Err(RatError::SubtractInf),
            (ExtRat::Inf, ExtRat::Fin(_)) => Ok(ExtRat::Inf),
            (ExtRat::Fin(a), ExtRat::Fin(b)) => Ok(ExtRat::Fin(a - b)),
        }
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, RatError> {
        match (self, rhs) {
            (ExtRat::Fin(a), ExtRat::Fin(b)) => Ok(ExtRat::Fin(a * b)),
            (ExtRat::Inf, ExtRat::Inf) => Ok(ExtRat::Inf),
            (ExtRat::Inf, ExtRat::Fin(c)) | (ExtRat::Fin(c), ExtRat::Inf) => {
                if c.is_zero() {
                    Err(RatError::ZeroTimesInf)
                } else if c.is_negative() {
                    Err(RatError::NegativeTimesInf)
                } else {
                    Ok(ExtRat::Inf)
                }
            }
        }
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self, RatError> {
        match (self, rhs) {
            (_, ExtRat::Inf) => Err(RatError::DivisionByInf),
            (_, ExtRat::Fin(b)) if b.is_zero() => Err(RatError::DivisionByZero),
            (ExtRat::Inf, ExtRat::Fin(b)) => {
                if b.is_negative() {
                    Err(RatError::NegativeTimesInf)
                } else {
                    Ok(ExtRat::Inf)
                }
            }
            (ExtRat::Fin(a), ExtRat::Fin(b)) => Ok(ExtRat::Fin(a / b)),
        }
    }

    pub fn checked_recip(self) -> Result<Self, RatError> {
        ExtRat::one().checked_div(self)
    }

    pub fn recip(self) -> Self {
        self.checked_recip().unwrap_or_else(|e| panic!("{e}"))
    }

    /// The value as an integer, if it is a finite integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            ExtRat::Fin(r) if r.denom().is_one() => Some(r.numer().clone()),
            _ => None,
        }
    }

    pub fn as_u32(&self) -> Option<u32> {
        self.as_integer().and_then(|n| n.to_u32())
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            ExtRat::Fin(r) => r.to_f64().unwrap_or_else(|| {
                // Fall back through numerator/denominator magnitudes.
                let n = r.numer().to_f64().unwrap_or(f64::MAX);
                let d = r.denom().to_f64().unwrap_or(f64::MAX);
                n / d
            }),
            ExtRat::Inf => f64::INFINITY,
        }
    }
}

impl From<u32> for ExtRat {
    fn from(n: u32) -> Self {
        ExtRat::int(n as i64)
    }
}

macro_rules! forward_ref_binop {
    ($imp:ident, $method:ident) => {
        impl<'a> $imp<&'a ExtRat> for &'a ExtRat {
            type Output = ExtRat;
            fn $method(self, rhs: &'a ExtRat) -> ExtRat {
                $imp::$method(self.clone(), rhs.clone())
            }
        }
        impl<'a> $imp<&'a ExtRat> for ExtRat {
            type Output = ExtRat;
            fn $method(self, rhs: &'a ExtRat) -> ExtRat {
                $imp::$method(self, rhs.clone())
            }
        }
        impl<'a> $imp<ExtRat> for &'a ExtRat {
            type Output = ExtRat;
            fn $method(self, rhs: ExtRat) -> ExtRat {
                $imp::$method(self.clone(), rhs)
            }
        }
    };
}

impl Add for ExtRat {
    type Output = ExtRat;
    fn add(self, rhs: ExtRat) -> ExtRat {
        match (self, rhs) {
            (ExtRat::Fin(a), ExtRat::Fin(b)) => ExtRat::Fin(a + b),
            _ => ExtRat::Inf,
        }
    }
}
forward_ref_binop!(Add, add);

impl AddAssign for ExtRat {
    fn add_assign(&mut self, rhs: ExtRat) {
        *self = self.clone() + rhs;
    }
}

impl Sub for ExtRat {
    type Output = ExtRat;
    fn sub(self, rhs: ExtRat) -> ExtRat {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}
forward_ref_binop!(Sub, sub);

impl Mul for ExtRat {
    type Output = ExtRat;
    fn mul(self, rhs: ExtRat) -> ExtRat {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}
forward_ref_binop!(Mul, mul);

impl Div for ExtRat {
    type Output = ExtRat;
    fn div(self, rhs: ExtRat) -> ExtRat {
        self.checked_div(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}
forward_ref_binop!(Div, div);

impl Neg for ExtRat {
    type Output = ExtRat;
    fn neg(self) -> ExtRat {
        match self {
            ExtRat::Fin(r) => ExtRat::Fin(-r),
            ExtRat::Inf => panic!("negating inf is undefined"),
        }
    }
}

impl Sum for ExtRat {
    fn sum<I: Iterator<Item = ExtRat>>(iter: I) -> ExtRat {
        iter.fold(ExtRat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a ExtRat> for ExtRat {
    fn sum<I: Iterator<Item = &'a ExtRat>>(iter: I) -> ExtRat {
        iter.fold(ExtRat::zero(), |acc, x| acc + x.clone())
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRat::Inf, ExtRat::Inf) => Ordering::Equal,
            (ExtRat::Inf, ExtRat::Fin(_)) => Ordering::Greater,
            (ExtRat::Fin(_), ExtRat::Inf) => Ordering::Less,
            (ExtRat::Fin(a), ExtRat::Fin(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Fin(r) => write!(f, "{r}"),
            ExtRat::Inf => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExtRat {
    type Err = RatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" {
            return Ok(ExtRat::Inf);
        }
        BigRational::from_str(s)
            .map(ExtRat::Fin)
            .map_err(|_| RatError::Parse {
                input: s.to_string(),
                hint: if s.contains('.') {
                    "; decimal literals are not supported, write rationals as p/q".to_string()
                } else {
                    String::new()
                },
            })
    }
}

impl Serialize for ExtRat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtRat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}
