use std::ops::Deref;

use crate::error::{Error, Result};

/// A non-empty vector of probabilities, the input to every pooler.
#[derive(Debug, Clone, PartialEq)]
pub struct PValues(Vec<f64>);

impl PValues {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("at least one p-value is required"));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
            return Err(Error::domain(format!("p-value {} is {v}, outside [0, 1]", i + 1)));
        }
        Ok(PValues(values))
    }

    /// Wraps values already known to lie in [0, 1].
    pub(crate) fn trusted(values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty() && values.iter().all(|v| (0.0..=1.0).contains(v)));
        PValues(values)
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for PValues {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for PValues {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        PValues::new(values)
    }
}

impl TryFrom<&[f64]> for PValues {
    type Error = Error;

    fn try_from(values: &[f64]) -> Result<Self> {
        PValues::new(values.to_vec())
    }
}
