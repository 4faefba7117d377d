//! Fourier-series drive pulses, their optimal and monochromatic constructions,
//! and the phase-space quantities `f(t)` and `g(t)` they induce.
//!
//! A pulse is `Υ(t) = Σ_j c_j ω exp(i j ω t)` with unitless complex amplitudes
//! `c_j` on harmonics `j ≥ 1`. One gate period is `T = 2π/ω`. The gate closes
//! on the maximally entangling operation `exp(-i π/8 S_x²)` when
//! `Σ_j |c_j|²/j = 1/16`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numfmt::serialize_sig;

/// Required value of `Σ |c_j|²/j` for the maximally entangling gate.
pub const GATE_AREA: f64 = 1.0 / 16.0;

/// Tolerance on the gate condition for a pulse to count as calibrated.
pub const CALIBRATION_TOL: f64 = 1e-12;

/// Amplitude mismatch accepted (and corrected) when loading a calibrated
/// pulse from its 12-digit JSON form.
const LOAD_RECALIBRATION_TOL: f64 = 1e-9;

const LAMBDA_POLE_GAP: f64 = 1e-9;
const LAMBDA_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Harmonic {
    pub index: u32,
    pub amplitude: C64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PulseSpec {
    omega: f64,
    components: Vec<Harmonic>,
    calibrated: bool,
}

impl PulseSpec {
    /// Builds a pulse from `(harmonic, amplitude)` pairs in any order.
    ///
    /// The calibration flag is set when the gate condition holds to
    /// [`CALIBRATION_TOL`].
    pub fn new<I>(omega: f64, components: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, C64)>,
    {
        if !(omega.is_finite() && omega > 0.0) {
            return invalid(format!("fundamental frequency must be positive, got {omega}"));
        }
        let mut components: Vec<Harmonic> = components
            .into_iter()
            .map(|(index, amplitude)| Harmonic { index, amplitude })
            .collect();
        components.sort_by_key(|h| h.index);
        for h in &components {
            if h.index == 0 {
                return invalid("harmonic indices must be >= 1");
            }
            if !(h.amplitude.re.is_finite() && h.amplitude.im.is_finite()) {
                return invalid(format!("non-finite amplitude on harmonic {}", h.index));
            }
        }
        if components.windows(2).any(|w| w[0].index == w[1].index) {
            return invalid("duplicate harmonic index");
        }
        let mut pulse = PulseSpec {
            omega,
            components,
            calibrated: false,
        };
        pulse.calibrated = (pulse.gate_area() - GATE_AREA).abs() <= CALIBRATION_TOL;
        Ok(pulse)
    }

    /// The zero drive.
    pub fn zero(omega: f64) -> Result<Self> {
        Self::new(omega, std::iter::empty())
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn components(&self) -> &[Harmonic] {
        &self.components
    }

    pub fn is_calibrated(&self) -> bool {
        self.calibrated
    }

    /// Gate duration `T = 2π/ω`.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// Highest harmonic present, 0 for the zero pulse.
    pub fn max_harmonic(&self) -> u32 {
        self.components.last().map_or(0, |h| h.index)
    }

    /// `Σ_j |c_j|²/j`, the enclosed phase-space area in units of `2π`.
    pub fn gate_area(&self) -> f64 {
        self.components
            .iter()
            .map(|h| h.amplitude.norm_sqr() / h.index as f64)
            .sum()
    }

    /// Drive amplitude `Υ(t)`.
    pub fn drive(&self, t: f64) -> C64 {
        self.components
            .iter()
            .map(|h| h.amplitude * self.omega * C64::from_polar(1.0, h.index as f64 * self.omega * t))
            .sum()
    }

    /// Displacement `f(t) = ∫_0^t Υ = -i Σ_j (c_j/j)(e^{ijωt} - 1)`.
    pub fn displacement(&self, t: f64) -> C64 {
        let s: C64 = self
            .components
            .iter()
            .map(|h| {
                let j = h.index as f64;
                h.amplitude / j * (C64::from_polar(1.0, j * self.omega * t) - 1.0)
            })
            .sum();
        -C64::i() * s
    }

    /// Accumulated phase `g(t) = Im ∫_0^t Υ f*`, integrated term by term.
    ///
    /// `Υ f* = iω Σ_{jk} (c_j c_k*/k)(e^{i(j-k)ωt} - e^{ijωt})`; each
    /// exponential is integrated exactly, with the `j = k` term linear in `t`.
    pub fn accumulated_phase(&self, t: f64) -> f64 {
        let w = self.omega;
        // ∫_0^t e^{iqωs} ds
        let integral = |q: i64| -> C64 {
            if q == 0 {
                C64::new(t, 0.0)
            } else {
                let qw = q as f64 * w;
                (C64::from_polar(1.0, qw * t) - 1.0) / (C64::i() * qw)
            }
        };
        let mut acc = C64::new(0.0, 0.0);
        for hj in &self.components {
            let j = hj.index as i64;
            let ij = integral(j);
            for hk in &self.components {
                let k = hk.index as i64;
                let coef = hj.amplitude * hk.amplitude.conj() / k as f64;
                acc += coef * (integral(j - k) - ij);
            }
        }
        (C64::i() * w * acc).im
    }

    /// Drive intensity `Σ_j |c_j ω|²`.
    pub fn intensity(&self) -> f64 {
        self.components
            .iter()
            .map(|h| (h.amplitude * self.omega).norm_sqr())
            .sum()
    }

    /// `samples` uniformly spaced points over `[0, T]`, endpoints included.
    pub fn trajectory(&self, samples: usize) -> Result<Vec<TrajectoryPoint>> {
        if samples < 2 {
            return invalid(format!("trajectory needs at least 2 samples, got {samples}"));
        }
        let period = self.period();
        Ok((0..samples)
            .map(|k| {
                let t = if k + 1 == samples {
                    period
                } else {
                    period * k as f64 / (samples - 1) as f64
                };
                let f = self.displacement(t);
                TrajectoryPoint {
                    t,
                    f_re: f.re,
                    f_im: f.im,
                    g: self.accumulated_phase(t),
                }
            })
            .collect())
    }

    pub fn to_json_value(&self) -> PulseJson {
        PulseJson {
            fundamental_frequency: self.omega,
            components: self
                .components
                .iter()
                .map(|h| ComponentJson {
                    harmonic: h.index,
                    re: h.amplitude.re,
                    im: h.amplitude.im,
                })
                .collect(),
            calibrated: self.calibrated,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("pulse serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: PulseJson = serde_json::from_str(text)
            .map_err(|e| crate::Error::InvalidArgument(format!("pulse JSON: {e}")))?;
        Self::from_json_value(&parsed)
    }

    /// Rebuilds a pulse. A pulse marked calibrated is rescaled back onto the
    /// gate condition, undoing the 12-digit rounding of its amplitudes.
    pub fn from_json_value(json: &PulseJson) -> Result<Self> {
        let mut pulse = Self::new(
            json.fundamental_frequency,
            json.components
                .iter()
                .map(|c| (c.harmonic, C64::new(c.re, c.im))),
        )?;
        if json.calibrated && !pulse.calibrated {
            let area = pulse.gate_area();
            if (area - GATE_AREA).abs() > LOAD_RECALIBRATION_TOL {
                return invalid(format!(
                    "pulse marked calibrated but sum |c_j|^2/j = {area}, expected 1/16"
                ));
            }
            let scale = (GATE_AREA / area).sqrt();
            for h in &mut pulse.components {
                h.amplitude *= scale;
            }
            pulse.calibrated = (pulse.gate_area() - GATE_AREA).abs() <= CALIBRATION_TOL;
        }
        Ok(pulse)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ComponentJson {
    pub harmonic: u32,
    #[serde(serialize_with = "serialize_sig")]
    pub re: f64,
    #[serde(serialize_with = "serialize_sig")]
    pub im: f64,
}

/// Interchange form of a pulse.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PulseJson {
    #[serde(serialize_with = "serialize_sig")]
    pub fundamental_frequency: f64,
    pub components: Vec<ComponentJson>,
    pub calibrated: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    #[serde(serialize_with = "serialize_sig")]
    pub t: f64,
    #[serde(serialize_with = "serialize_sig")]
    pub f_re: f64,
    #[serde(serialize_with = "serialize_sig")]
    pub f_im: f64,
    #[serde(serialize_with = "serialize_sig")]
    pub g: f64,
}

/// Lagrange multiplier and normalization of the optimal `m`-harmonic pulse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaSolution {
    pub m: usize,
    pub lambda: f64,
    pub b: f64,
}

/// `Σ_{j=1..m} 1/(1 - jλ)` and its derivative.
pub fn lambda_equation(m: usize, lambda: f64) -> (f64, f64) {
    (1..=m).fold((0.0, 0.0), |(v, d), j| {
        let j = j as f64;
        let r = 1.0 / (1.0 - j * lambda);
        (v + r, d + j * r * r)
    })
}

/// Smallest root of `Σ_{j=1..m} (1 - jλ)^{-1} = 0`.
///
/// The function increases monotonically between its poles at `1/m` and
/// `1/(m-1)`, going from `-∞` to `+∞`, so bisection on the pole-free
/// interior always brackets the root. Newton steps polish the result.
pub fn solve_lambda(m: usize) -> Result<LambdaSolution> {
    if m < 2 {
        return invalid(format!(
            "optimal pulse needs m >= 2 harmonics (zero-mean constraint), got {m}"
        ));
    }
    let mf = m as f64;
    let mut lo = 1.0 / mf + LAMBDA_POLE_GAP;
    let mut hi = 1.0 / (mf - 1.0) - LAMBDA_POLE_GAP;
    while hi - lo > 1e-6 * (1.0 / (mf - 1.0) - 1.0 / mf) {
        let mid = 0.5 * (lo + hi);
        if lambda_equation(m, mid).0 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut lambda = 0.5 * (lo + hi);
    for _ in 0..50 {
        let (v, d) = lambda_equation(m, lambda);
        let step = v / d;
        let next = (lambda - step).clamp(lo, hi);
        let done = (next - lambda).abs() <= LAMBDA_TOL * lambda;
        lambda = next;
        if done {
            break;
        }
    }
    let norm: f64 = (1..=m)
        .map(|j| {
            let j = j as f64;
            j / (1.0 - j * lambda).powi(2)
        })
        .sum();
    Ok(LambdaSolution {
        m,
        lambda,
        b: -0.25 / norm.sqrt(),
    })
}

/// Optimal `m`-harmonic pulse `c_j = j b / (1 - jλ)`, all amplitudes real.
///
/// Minimizes `Σ|c_j|²/j²` subject to the gate condition and `Σ c_j/j = 0`.
pub fn optimal_pulse(m: usize, omega: f64) -> Result<PulseSpec> {
    let sol = solve_lambda(m)?;
    PulseSpec::new(
        omega,
        (1..=m).map(|j| {
            let jf = j as f64;
            (j as u32, C64::new(jf * sol.b / (1.0 - jf * sol.lambda), 0.0))
        }),
    )
}

/// Conventional single-tone reference: detuning `δ = mω` and `ηΩ = √m ω/4`,
/// run for the same duration `2π/ω`, i.e. a single amplitude `c_m = √m/4`.
pub fn monochromatic_pulse(m: usize, omega: f64) -> Result<PulseSpec> {
    if m < 1 {
        return invalid("monochromatic pulse needs m >= 1");
    }
    PulseSpec::new(omega, [(m as u32, C64::new((m as f64).sqrt() / 4.0, 0.0))])
}
