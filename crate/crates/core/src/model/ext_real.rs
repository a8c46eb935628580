use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A value in `(-inf, +inf]`.
///
/// NaN and negative infinity are rejected at construction, so the ordering is
/// total. `+inf` serializes as JSON `null`.
#[derive(Clone, Copy, PartialEq)]
pub struct ExtReal(f64);

impl ExtReal {
    pub const INFINITY: ExtReal = ExtReal(f64::INFINITY);
    pub const ZERO: ExtReal = ExtReal(0.0);

    pub fn new(v: f64) -> Result<Self> {
        if v.is_nan() {
            return Err(Error::NotANumber);
        }
        if v == f64::NEG_INFINITY {
            return Err(Error::InvalidInput(
                "extended reals exclude negative infinity".into(),
            ));
        }
        Ok(ExtReal(v))
    }

    /// Panics on NaN; for values already known to be finite.
    pub fn finite(v: f64) -> Self {
        assert!(v.is_finite(), "ExtReal::finite called with {v}");
        ExtReal(v)
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_infinite(self) -> bool {
        !self.0.is_finite()
    }

    pub fn value(self) -> Option<f64> {
        self.is_finite().then_some(self.0)
    }

    /// Raw value; `f64::INFINITY` for `+inf`.
    pub fn to_f64(self) -> f64 {
        self.0
    }

    /// `lambda * self` for `lambda > 0`; `0 * x` is defined as 0 for finite `x`.
    pub fn scale(self, lambda: f64) -> Result<Self> {
        if lambda.is_nan() || lambda < 0.0 {
            return Err(Error::InvalidInput(format!(
                "cannot scale an extended real by {lambda}"
            )));
        }
        if self.is_infinite() {
            return if lambda > 0.0 {
                Ok(Self::INFINITY)
            } else {
                Err(Error::InvalidInput("0 * inf is undefined".into()))
            };
        }
        ExtReal::new(lambda * self.0)
    }

    /// Simplex-weighted sum; finite inputs always give a finite result.
    pub fn weighted_sum(weights: &[f64], values: &[ExtReal]) -> Result<ExtReal> {
        if weights.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: weights.len(),
                got: values.len(),
            });
        }
        let mut acc = ExtReal::ZERO;
        for (&w, &v) in weights.iter().zip(values) {
            if w == 0.0 {
                continue;
            }
            acc = acc + v.scale(w)?;
        }
        Ok(acc)
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        ExtReal(self.0 + rhs.0)
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl From<ExtReal> for f64 {
    fn from(v: ExtReal) -> f64 {
        v.0
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "+inf")
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.value() {
            Some(v) => s.serialize_f64(v),
            None => s.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Option<f64> = Option::deserialize(d)?;
        match v {
            None => Ok(ExtReal::INFINITY),
            Some(x) => ExtReal::new(x).map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nan_and_negative_infinity() {
        assert_eq!(ExtReal::new(f64::NAN), Err(Error::NotANumber));
        assert!(ExtReal::new(f64::NEG_INFINITY).is_err());
        assert!(ExtReal::new(f64::INFINITY).unwrap().is_infinite());
    }

    #[test]
    fn infinity_dominates_and_absorbs() {
        let a = ExtReal::finite(1e300);
        assert!(ExtReal::INFINITY > a);
        assert!((a + ExtReal::INFINITY).is_infinite());
        assert!(ExtReal::INFINITY.scale(0.5).unwrap().is_infinite());
        assert!(ExtReal::INFINITY.scale(0.0).is_err());
        assert_eq!(ExtReal::finite(2.0).scale(0.0).unwrap(), ExtReal::ZERO);
    }

    #[test]
    fn simplex_weighted_sum_of_finite_values_is_finite() {
        let vals = [ExtReal::finite(1.0), ExtReal::finite(3.0)];
        let s = ExtReal::weighted_sum(&[0.25, 0.75], &vals).unwrap();
        assert_eq!(s.value(), Some(2.5));
    }

    #[test]
    fn json_uses_null_for_infinity() {
        let s = serde_json::to_string(&[ExtReal::finite(0.5), ExtReal::INFINITY]).unwrap();
        assert_eq!(s, "[0.5,null]");
        let back: Vec<ExtReal> = serde_json::from_str(&s).unwrap();
        assert!(back[1].is_infinite());
    }
}
