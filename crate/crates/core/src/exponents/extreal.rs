use std::fmt;
use std::ops::Add;

use serde::{Serialize, Serializer};

/// A real number or `-inf`, used for exponents of quantities that can vanish.
///
/// `-inf` is a separate variant rather than `f64::NEG_INFINITY`, so NaN can
/// never be produced by `(-inf) - (-inf)` style arithmetic: subtraction is
/// only offered through [`ExtReal::checked_sub`].
///
/// Variant order makes the derived `PartialOrd` put `NegInf` below every finite value.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    /// Maps `f64::NEG_INFINITY` to `NegInf`; panics on NaN or `+inf`.
    pub fn from_f64(x: f64) -> Self {
        if x == f64::NEG_INFINITY {
            Self::NegInf
        } else {
            assert!(x.is_finite(), "exponent must be finite or -inf, got {x}");
            Self::Finite(x)
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Self::Finite(x) => Some(x),
            Self::NegInf => None,
        }
    }

    pub fn is_neg_inf(self) -> bool {
        matches!(self, Self::NegInf)
    }

    /// As `f64`, with `-inf` mapped to `f64::NEG_INFINITY`.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::NEG_INFINITY)
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Multiplies by a positive constant.
    pub fn scale(self, k: f64) -> Self {
        assert!(k > 0.0, "scale factor must be positive");
        match self {
            Self::Finite(x) => Self::Finite(k * x),
            Self::NegInf => Self::NegInf,
        }
    }

    /// `self - other`; `None` when `other` is `-inf` (the result would be `+inf` or undefined).
    pub fn checked_sub(self, other: Self) -> Option<Self> {
        match (self, other) {
            (_, Self::NegInf) => None,
            (Self::NegInf, _) => Some(Self::NegInf),
            (Self::Finite(a), Self::Finite(b)) => Some(Self::Finite(a - b)),
        }
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (Self::Finite(a), Self::Finite(b)) => Self::Finite(a + b),
            _ => Self::NegInf,
        }
    }
}

impl Add<f64> for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: f64) -> ExtReal {
        self + ExtReal::Finite(rhs)
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(x) => write!(f, "{x}"),
            Self::NegInf => f.write_str("-inf"),
        }
    }
}

/// Finite values serialize as numbers, `-inf` as the string `"-inf"`.
impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Finite(x) => serializer.serialize_f64(*x),
            Self::NegInf => serializer.serialize_str("-inf"),
        }
    }
}
