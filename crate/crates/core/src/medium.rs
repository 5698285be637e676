use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::RadiusProfile;

/// Constant contrast `q` inside a star-shaped domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Medium {
    pub q: f64,
    pub profile: RadiusProfile,
}

impl Medium {
    pub fn new(q: f64, profile: RadiusProfile) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) || q == 1.0 {
            return Err(Error::InvalidInput(format!("contrast must be positive and different from 1, got {q}")));
        }
        Ok(Medium { q, profile })
    }

    pub fn sqrt_q(&self) -> f64 {
        self.q.sqrt()
    }
}
