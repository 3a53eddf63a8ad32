//! Validated scalar newtypes.

use crate::error::{Error, Result};

/// A finite, strictly positive real (degrees of freedom, shapes, scales).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RealPositive(f64);

impl RealPositive {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(RealPositive(value))
        } else {
            Err(Error::domain(format!("expected a finite value > 0, got {value}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// A probability in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(Error::domain(format!("expected a probability in [0, 1], got {value}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl From<RealPositive> for f64 {
    fn from(v: RealPositive) -> f64 {
        v.0
    }
}

impl From<Probability> for f64 {
    fn from(v: Probability) -> f64 {
        v.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(RealPositive::new(1e-300).is_ok());
        assert!(RealPositive::new(0.0).is_err());
        assert!(RealPositive::new(f64::INFINITY).is_err());
        assert!(Probability::new(0.0).is_ok());
        assert!(Probability::new(1.0).is_ok());
        assert!(Probability::new(-0.1).is_err());
        assert!(Probability::new(f64::NAN).is_err());
    }
}
