//! Flag groups shared by several subcommands and their conversion into
//! library types.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use num_complex::Complex64 as C64;
use polypulse::{monochromatic_pulse, optimal_pulse, BusMoments, BusState, EnvironmentRates, PulseSpec};

use crate::error::{usage, CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RateUnits {
    /// Multiples of the highest drive frequency δ = mω.
    Delta,
    /// Multiples of the fundamental frequency ω.
    Omega,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BusKind {
    Ground,
    Thermal,
    Coherent,
    Fock,
}

#[derive(Args, Debug, Clone)]
pub struct PulseArgs {
    /// Number of harmonics m (the highest harmonic of the pulse).
    #[arg(long)]
    pub m: Option<usize>,
    /// Use the monochromatic reference gate at harmonic m instead of the optimal pulse.
    #[arg(long)]
    pub mono: bool,
    /// Load the pulse from a JSON file instead of designing one.
    #[arg(long, conflicts_with_all = ["m", "mono"])]
    pub pulse: Option<PathBuf>,
    /// Fundamental angular frequency ω.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
}

impl PulseArgs {
    pub fn build(&self) -> CliResult<PulseSpec> {
        if let Some(path) = &self.pulse {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?;
            return Ok(PulseSpec::from_json(&text)?);
        }
        let Some(m) = self.m else {
            return usage("either --m or --pulse is required");
        };
        Ok(if self.mono {
            monochromatic_pulse(m, self.omega)?
        } else {
            optimal_pulse(m, self.omega)?
        })
    }
}

#[derive(Args, Debug, Clone)]
pub struct RateArgs {
    /// Heating rate γ+ (jump operator a†).
    #[arg(long, default_value_t = 0.0)]
    pub gamma_plus: f64,
    /// Cooling rate γ- (jump operator a).
    #[arg(long, default_value_t = 0.0)]
    pub gamma_minus: f64,
    /// Dephasing rate γd (jump operator a†a).
    #[arg(long, default_value_t = 0.0)]
    pub gamma_dephase: f64,
    /// Unit of the rates given above.
    #[arg(long, value_enum, default_value_t = RateUnits::Delta)]
    pub rate_units: RateUnits,
}

impl RateArgs {
    /// Rates in absolute units for a gate with highest harmonic `m` at
    /// fundamental frequency `omega`.
    pub fn build(&self, m: usize, omega: f64) -> CliResult<EnvironmentRates> {
        let unit = match self.rate_units {
            RateUnits::Delta => m as f64 * omega,
            RateUnits::Omega => omega,
        };
        Ok(EnvironmentRates::new(
            self.gamma_plus * unit,
            self.gamma_minus * unit,
            self.gamma_dephase * unit,
        )?)
    }
}

#[derive(Args, Debug, Clone)]
pub struct BusArgs {
    /// Initial bus-mode state.
    #[arg(long, value_enum, default_value_t = BusKind::Ground)]
    pub bus: BusKind,
    /// Mean phonon number of the thermal bus state.
    #[arg(long, default_value_t = 0.0)]
    pub nbar: f64,
    /// Real part of the coherent amplitude α.
    #[arg(long, default_value_t = 0.0)]
    pub alpha_re: f64,
    /// Imaginary part of the coherent amplitude α.
    #[arg(long, default_value_t = 0.0)]
    pub alpha_im: f64,
    /// Occupied level of the Fock bus state.
    #[arg(long, default_value_t = 0)]
    pub fock_level: usize,
}

impl BusArgs {
    /// Moments for the analytic error map.
    pub fn moments(&self) -> CliResult<BusMoments> {
        match self.bus {
            BusKind::Ground => Ok(BusMoments::ground()),
            BusKind::Thermal => Ok(BusMoments::thermal(self.nbar)?),
            BusKind::Coherent => Ok(BusMoments::coherent(C64::new(self.alpha_re, self.alpha_im))),
            BusKind::Fock => Ok(BusMoments::new(self.fock_level as f64, C64::new(0.0, 0.0), C64::new(0.0, 0.0))?),
        }
    }

    /// Density matrix, truncated so the discarded tail is negligible.
    pub fn state(&self) -> CliResult<BusState> {
        match self.bus {
            BusKind::Ground => Ok(BusState::ground(2)?),
            BusKind::Thermal => Ok(BusState::thermal(self.nbar)?),
            BusKind::Coherent => Ok(BusState::coherent(C64::new(self.alpha_re, self.alpha_im))?),
            BusKind::Fock => Ok(BusState::fock(self.fock_level, self.fock_level + 1)?),
        }
    }
}

/// Parses `"a:b"` (inclusive), `"a,b,c"` or a single integer.
pub fn parse_int_list(s: &str) -> Result<Vec<usize>, String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("'{t}': {e}"));
    if let Some((a, b)) = s.split_once(':') {
        let (a, b) = (parse(a)?, parse(b)?);
        if a > b {
            return Err(format!("empty range {a}:{b}"));
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(parse).collect()
}

/// Parses `"a,b,c"` or a single number.
pub fn parse_float_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            let v: f64 = t.trim().parse().map_err(|e| format!("'{t}': {e}"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("'{t}' is not finite"))
            }
        })
        .collect()
}
