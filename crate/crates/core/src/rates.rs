use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numfmt::serialize_sig;

/// Bus-mode dissipation rates (1/time): heating `γ+` (jump `a†`), cooling
/// `γ-` (jump `a`) and dephasing `γd` (jump `n̂`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentRates {
    #[serde(serialize_with = "serialize_sig")]
    pub gamma_plus: f64,
    #[serde(serialize_with = "serialize_sig")]
    pub gamma_minus: f64,
    #[serde(serialize_with = "serialize_sig")]
    pub gamma_dephase: f64,
}

impl EnvironmentRates {
    pub fn new(gamma_plus: f64, gamma_minus: f64, gamma_dephase: f64) -> Result<Self> {
        let r = EnvironmentRates {
            gamma_plus,
            gamma_minus,
            gamma_dephase,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn none() -> Self {
        EnvironmentRates {
            gamma_plus: 0.0,
            gamma_minus: 0.0,
            gamma_dephase: 0.0,
        }
    }

    /// `γ+ = γ- = γ`, no dephasing.
    pub fn thermalization(gamma: f64) -> Result<Self> {
        Self::new(gamma, gamma, 0.0)
    }

    pub fn dephasing(gamma: f64) -> Result<Self> {
        Self::new(0.0, 0.0, gamma)
    }

    /// `γ+ = γ- = γd = γ`.
    pub fn uniform(gamma: f64) -> Result<Self> {
        Self::new(gamma, gamma, gamma)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gamma_plus", self.gamma_plus),
            ("gamma_minus", self.gamma_minus),
            ("gamma_dephase", self.gamma_dephase),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return invalid(format!("{name} must be a non-negative rate, got {v}"));
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.gamma_plus == 0.0 && self.gamma_minus == 0.0 && self.gamma_dephase == 0.0
    }

    pub fn scaled(&self, s: f64) -> Self {
        EnvironmentRates {
            gamma_plus: self.gamma_plus * s,
            gamma_minus: self.gamma_minus * s,
            gamma_dephase: self.gamma_dephase * s,
        }
    }
}
