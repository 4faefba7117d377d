use std::fmt;
use std::f64::consts::PI;
use std::str::FromStr;

use nalgebra::SMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use super::moments::{f_moments, pulse_moments, FMoments, PulseMoments};
use crate::bus::BusMoments;
use crate::error::{invalid, Error, Result};
use crate::hilbert::binomial;
use crate::numfmt::serialize_sig;
use crate::pulse::{monochromatic_pulse, optimal_pulse, PulseSpec};
use crate::rates::EnvironmentRates;

pub type Matrix5 = SMatrix<C64, 5, 5>;

pub const BASIS_LABELS: [&str; 5] = ["xi0", "xi1", "xi2", "xi3", "xi4"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Printed,
    Oracle,
    Reconciled,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Printed => "printed",
            Provenance::Oracle => "oracle",
            Provenance::Reconciled => "reconciled",
        })
    }
}

/// Coefficients `ζ_ij` of the first-order error map
/// `Ξ(ρ) = Σ_ij ζ_ij ξ_i ρ ξ_j†` in the `ξ` basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaMatrix {
    pub entries: Matrix5,
    pub provenance: Provenance,
}

impl ZetaMatrix {
    pub fn new(entries: Matrix5, provenance: Provenance) -> Self {
        ZetaMatrix {
            entries,
            provenance,
        }
    }

    pub fn hermiticity_error(&self) -> f64 {
        (self.entries - self.entries.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from `other`, relative to the largest
    /// entry of `other`.
    pub fn relative_deviation(&self, other: &ZetaMatrix) -> f64 {
        let diff = (self.entries - other.entries)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let scale = other.max_abs();
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Entry {
            #[serde(serialize_with = "serialize_sig")]
            re: f64,
            #[serde(serialize_with = "serialize_sig")]
            im: f64,
        }
        #[derive(Serialize)]
        struct Doc {
            basis: [&'static str; 5],
            provenance: Provenance,
            entries: Vec<Vec<Entry>>,
        }
        let doc = Doc {
            basis: BASIS_LABELS,
            provenance: self.provenance,
            entries: (0..5)
                .map(|i| {
                    (0..5)
                        .map(|j| Entry {
                            re: self.entries[(i, j)].re,
                            im: self.entries[(i, j)].im,
                        })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("zeta serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Metric {
    /// `tr ζ†ζ`
    FrobeniusSq,
    /// `(tr ζ†ζ)^{1/2}`
    #[default]
    Frobenius,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::FrobeniusSq => "frobenius_sq",
            Metric::Frobenius => "frobenius",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "frobenius_sq" => Ok(Metric::FrobeniusSq),
            "frobenius" => Ok(Metric::Frobenius),
            other => invalid(format!("unknown metric '{other}' (frobenius | frobenius_sq)")),
        }
    }
}

pub fn infidelity(zeta: &ZetaMatrix, metric: Metric) -> f64 {
    let sq: f64 = zeta.entries.iter().map(|z| z.norm_sqr()).sum();
    match metric {
        Metric::FrobeniusSq => sq,
        Metric::Frobenius => sq.sqrt(),
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn symmetric(entries: &[(usize, usize, C64)]) -> Matrix5 {
    let mut m = Matrix5::zeros();
    for &(i, j, v) in entries {
        m[(i, j)] += v;
        if i != j {
            m[(j, i)] += v.conj();
        }
    }
    m
}

/// `M_1 .. M_6` of the literal closed-form block, `Γ_p = C(N, p)`.
pub fn m_matrices(n: usize) -> [Matrix5; 6] {
    let nf = n as f64;
    let g = |p: usize| binomial(n, p);
    let s = |p: usize| g(p).sqrt();
    [
        symmetric(&[
            (0, 0, real(-nf)),
            (1, 1, real(2.0 * g(1))),
            (0, 2, real(-s(2))),
        ]),
        symmetric(&[
            (0, 0, real(1.0)),
            (0, 2, real(s(2))),
            (0, 4, real(-3.0 * s(4))),
            (2, 2, real(-2.0)),
        ]),
        symmetric(&[
            (0, 0, real(-(nf - 1.0))),
            (0, 2, real(-s(2) * (nf - 1.0))),
            (0, 4, real(3.0 * s(4))),
            (2, 2, real(2.0 * (nf - 1.0))),
        ]),
        symmetric(&[(0, 2, real(s(2))), (1, 1, real(nf))]),
        symmetric(&[
            (0, 1, real(nf.sqrt() * (nf - 1.0))),
            (0, 3, real(3.0 * s(3))),
            (1, 2, real(-(g(1) * g(2)).sqrt())),
        ]),
        symmetric(&[(0, 1, C64::new(0.0, -nf.sqrt()))]),
    ]
}

/// Literal transcription of the closed-form coefficient block,
/// `ζ = (π/ω)(ζ_0 + Σ_i ζ_1i)`.
///
/// Kept as a reference only; [`assemble_zeta`] is the validated path.
pub fn assemble_zeta_printed(
    pulse: &PulseSpec,
    n: usize,
    rates: &EnvironmentRates,
    bus: &BusMoments,
) -> Result<ZetaMatrix> {
    if n < 2 {
        return invalid(format!("printed block needs N >= 2 ions, got {n}"));
    }
    rates.validate()?;
    let PulseMoments { g1, g2, f1, f2 } = pulse_moments(pulse);
    let [m1, m2, m3, m4, m5, m6] = m_matrices(n);
    let EnvironmentRates {
        gamma_plus: gp,
        gamma_minus: gm,
        gamma_dephase: gd,
    } = *rates;
    let nf = n as f64;
    let pairs = nf * (nf - 1.0);
    let g1a2 = g1.norm_sqr();
    let single = gp + gm + (2.0 * bus.n_mean + 1.0) * gd;

    let zeta0 = m1 * real(2.0 * f1 * single) - m2 * real(4.0 * f2 * gd * pairs);
    let zeta11 = m1 * real(2.0 * g1a2 * single);
    let zeta12 = m3 * real(16.0 * g1a2 * f1 * gd * nf);
    let zeta13 = m2 * real(4.0 * gd * (g1a2 * g1a2 - 4.0 * (g1 * g2.conj()).re) * pairs);
    let zeta14 = m4 * real(4.0 * (g1 * g1 * bus.a2_mean).re * gd);
    let zeta15 = m5 * real(8.0 * (g1 * g1a2 * bus.a_mean).re * gd);
    let zeta16 = m6 * real(4.0 * (g1 * bus.a_mean).im * (gp - gm + gd));

    let total = zeta0 + zeta11 + zeta12 + zeta13 + zeta14 + zeta15 + zeta16;
    Ok(ZetaMatrix::new(total * real(PI / pulse.omega()), Provenance::Printed))
}

/// Structural matrices of the four first-order channels in the `ξ` basis.
///
/// With `S = S_x = √N ξ_1`, `S² = N + 2√Γ_2 ξ_2`,
/// `ξ_1 ξ_2 = ((N-1)√N ξ_1 + 3√Γ_3 ξ_3)/√(N Γ_2)` and
/// `ξ_2² = 1 + 2(N-2)/√Γ_2 ξ_2 + 6√Γ_4/Γ_2 ξ_4`:
///
/// * `single`: `D_S[ρ] = SρS - ½{S², ρ}`
/// * `pair`: `D_{S²}[ρ]`
/// * `shift`: `i[ρ, S]`
/// * `odd`: `SρS² + S²ρS - S³ρ - ρS³`
#[derive(Clone, Copy, Debug)]
pub struct ChannelMatrices {
    pub single: Matrix5,
    pub pair: Matrix5,
    pub shift: Matrix5,
    pub odd: Matrix5,
}

impl ChannelMatrices {
    pub fn new(n: usize) -> Self {
        let nf = n as f64;
        let g = |p: usize| binomial(n, p);
        let s = |p: usize| g(p).sqrt();
        ChannelMatrices {
            single: symmetric(&[(0, 0, real(-nf)), (1, 1, real(nf)), (0, 2, real(-s(2)))]),
            pair: symmetric(&[
                (0, 0, real(-4.0 * g(2))),
                (2, 2, real(4.0 * g(2))),
                (0, 2, real(-4.0 * (nf - 2.0) * s(2))),
                (0, 4, real(-12.0 * s(4))),
            ]),
            shift: symmetric(&[(0, 1, C64::new(0.0, nf.sqrt()))]),
            odd: symmetric(&[
                (0, 1, real(-2.0 * nf.sqrt() * (nf - 1.0))),
                (1, 2, real(2.0 * (g(1) * g(2)).sqrt())),
                (0, 3, real(-6.0 * s(3))),
            ]),
        }
    }
}

/// Channel weights of the first-order map for given moments, bus and rates.
///
/// Tracing the interaction-frame dissipators over the bus gives
///
/// * `single`: `(γ+ + γ-)⟨|f|²⟩ + γd[(2⟨n̂⟩+1)⟨|f|²⟩ - 2 Re(⟨a²⟩⟨f²⟩)]`
/// * `pair`: `γd ⟨|f|⁴⟩`
/// * `shift`: `(γ- - γ+ + γd) Re(⟨a⟩⟨f⟩)`
/// * `odd`: `-2 γd Im(⟨a⟩⟨|f|²f⟩)`
///
/// Third-order bus moments cancel between the `n̂` cross terms.
fn channel_weights(fm: &FMoments, rates: &EnvironmentRates, bus: &BusMoments) -> [f64; 4] {
    let EnvironmentRates {
        gamma_plus: gp,
        gamma_minus: gm,
        gamma_dephase: gd,
    } = *rates;
    [
        (gp + gm) * fm.avg_abs2
            + gd * ((2.0 * bus.n_mean + 1.0) * fm.avg_abs2 - 2.0 * (bus.a2_mean * fm.avg_f2).re),
        gd * fm.avg_abs4,
        (gm - gp + gd) * (bus.a_mean * fm.avg_f).re,
        -2.0 * gd * (bus.a_mean * fm.avg_abs2f).im,
    ]
}

fn combine(ch: &ChannelMatrices, w: [f64; 4]) -> Matrix5 {
    ch.single * real(w[0]) + ch.pair * real(w[1]) + ch.shift * real(w[2]) + ch.odd * real(w[3])
}

/// `ζ` split into the part that survives `g_1 = 0` and the remainder, which
/// vanishes whenever the time-averaged displacement does.
#[derive(Clone, Copy, Debug)]
pub struct ZetaParts {
    pub zeta0: ZetaMatrix,
    pub zeta1: ZetaMatrix,
}

impl ZetaParts {
    pub fn total(&self) -> ZetaMatrix {
        ZetaMatrix::new(self.zeta0.entries + self.zeta1.entries, Provenance::Reconciled)
    }
}

/// Reconciled analytic error map, valid for any `N ≥ 1`.
///
/// Relative to [`assemble_zeta_printed`], the coefficients that agree with
/// the numerically traced map differ as follows:
///
/// * `M_1`: the `(ξ_1, ξ_1)` entry is `N`, not `2Γ_1`; only then is the map
///   trace preserving.
/// * `⟨a²⟩` enters through the `single` pattern (weight `4 Re(g_1²⟨a²⟩)γd`
///   in units of `π/ω`), not through `M_4`.
/// * All of `⟨|f|⁴⟩ = (2π/ω)(f_2 - 4Re g_2g_1* + |g_1|⁴ + 4f_1|g_1|²)`
///   multiplies the single `pair` pattern; `M_2` and `M_3` and the opposite
///   signs of the `f_2` and `|g_1|⁴` terms are not reproduced.
/// * The odd pattern equals `-2 M_5` and carries
///   `-2γd Im(⟨a⟩⟨|f|²f⟩)`, which includes `g_2` and `f_1 g_1` terms besides
///   `|g_1|²g_1`.
/// * The `M_6` weight is `2 Im(g_1⟨a⟩)(γ- - γ+ + γd)` in units of `π/ω`.
pub fn assemble_zeta_split(
    pulse: &PulseSpec,
    n: usize,
    rates: &EnvironmentRates,
    bus: &BusMoments,
) -> Result<ZetaParts> {
    if n < 1 {
        return invalid("need at least one ion");
    }
    rates.validate()?;
    let ch = ChannelMatrices::new(n);
    let pm = pulse_moments(pulse);
    let pm0 = PulseMoments {
        g1: C64::new(0.0, 0.0),
        ..pm
    };
    let full = combine(&ch, channel_weights(&f_moments(&pm, pulse.omega()), rates, bus));
    let zeta0 = combine(&ch, channel_weights(&f_moments(&pm0, pulse.omega()), rates, bus));
    Ok(ZetaParts {
        zeta0: ZetaMatrix::new(zeta0, Provenance::Reconciled),
        zeta1: ZetaMatrix::new(full - zeta0, Provenance::Reconciled),
    })
}

pub fn assemble_zeta(
    pulse: &PulseSpec,
    n: usize,
    rates: &EnvironmentRates,
    bus: &BusMoments,
) -> Result<ZetaMatrix> {
    assemble_zeta_split(pulse, n, rates, bus).map(|p| p.total())
}

/// Infidelities of the monochromatic and optimal `m`-tone gates of equal
/// duration, and their ratio `R = I_mono / I_poly`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Improvement {
    pub i_mono: f64,
    pub i_poly: f64,
    pub ratio: f64,
}

pub fn improvement(
    m: usize,
    n: usize,
    rates: &EnvironmentRates,
    bus: &BusMoments,
    metric: Metric,
) -> Result<Improvement> {
    if m < 2 {
        return invalid(format!("improvement needs m >= 2, got {m}"));
    }
    rates.validate()?;
    if rates.is_zero() {
        return invalid("improvement ratio needs at least one nonzero rate");
    }
    let i_mono = infidelity(&assemble_zeta(&monochromatic_pulse(m, 1.0)?, n, rates, bus)?, metric);
    let i_poly = infidelity(&assemble_zeta(&optimal_pulse(m, 1.0)?, n, rates, bus)?, metric);
    if i_poly == 0.0 {
        return Err(Error::RatioUndefined("polychromatic infidelity is zero".into()));
    }
    Ok(Improvement {
        i_mono,
        i_poly,
        ratio: i_mono / i_poly,
    })
}

pub fn improvement_r(
    m: usize,
    n: usize,
    rates: &EnvironmentRates,
    bus: &BusMoments,
    metric: Metric,
) -> Result<f64> {
    improvement(m, n, rates, bus, metric).map(|r| r.ratio)
}
