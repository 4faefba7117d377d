use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{invalid, Result};
use crate::pulse::PulseSpec;

/// Amplitude sums through which the time-integrated displacement moments
/// depend on the pulse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseMoments {
    /// `Σ_i c_i/i`
    pub g1: C64,
    /// `Σ_{i+j=p} c_i c_j c_p* / (ijp)`
    pub g2: C64,
    /// `Σ_i |c_i|²/i²`
    pub f1: f64,
    /// `Σ_{i+j=p+q} c_i c_j c_p* c_q* / (ijpq)`
    pub f2: f64,
}

/// Integrals over one gate period (`⟨x⟩ = ∫_0^T x dt`) of powers of `f(t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FMoments {
    pub avg_f: C64,
    pub avg_f2: C64,
    pub avg_abs2f: C64,
    pub avg_abs2: f64,
    pub avg_abs4: f64,
}

pub fn pulse_moments(pulse: &PulseSpec) -> PulseMoments {
    let c: Vec<(f64, C64)> = pulse
        .components()
        .iter()
        .map(|h| (h.index as f64, h.amplitude))
        .collect();
    let index = |j: u32| pulse.components().iter().find(|h| h.index == j);

    let g1 = c.iter().map(|&(i, ci)| ci / i).sum();
    let f1 = c.iter().map(|&(i, ci)| ci.norm_sqr() / (i * i)).sum();

    let mut g2 = C64::new(0.0, 0.0);
    for &(i, ci) in &c {
        for &(j, cj) in &c {
            if let Some(hp) = index((i + j) as u32) {
                let p = hp.index as f64;
                g2 += ci * cj * hp.amplitude.conj() / (i * j * p);
            }
        }
    }

    let mut f2 = C64::new(0.0, 0.0);
    for &(i, ci) in &c {
        for &(j, cj) in &c {
            for &(p, cp) in &c {
                let q = i + j - p;
                if q < 1.0 {
                    continue;
                }
                if let Some(hq) = index(q as u32) {
                    f2 += ci * cj * cp.conj() * hq.amplitude.conj() / (i * j * p * q);
                }
            }
        }
    }

    PulseMoments { g1, g2, f1, f2: f2.re }
}

/// Closed-form period integrals of the displacement moments.
pub fn f_moments(pm: &PulseMoments, omega: f64) -> FMoments {
    let t = 2.0 * PI / omega;
    let PulseMoments { g1, g2, f1, f2 } = *pm;
    let g1_abs2 = g1.norm_sqr();
    FMoments {
        avg_f: C64::new(0.0, t) * g1,
        avg_f2: -t * g1 * g1,
        avg_abs2f: C64::new(0.0, -t) * (g2 - 2.0 * f1 * g1 - g1_abs2 * g1),
        avg_abs2: t * (f1 + g1_abs2),
        avg_abs4: t * (f2 - 4.0 * (g2 * g1.conj()).re + g1_abs2 * g1_abs2 + 4.0 * f1 * g1_abs2),
    }
}

/// Period integrals of the displacement moments by the periodic rectangle
/// rule on `points` samples of the closed-form `f(t)`.
///
/// The integrands are trigonometric polynomials of degree at most `4m`, so
/// the rule is exact up to rounding once `points > 4m`.
pub fn f_moments_quadrature(pulse: &PulseSpec, points: usize) -> Result<FMoments> {
    let needed = 8 * pulse.max_harmonic() as usize + 1;
    if points < needed {
        return invalid(format!("quadrature needs at least {needed} points, got {points}"));
    }
    let h = pulse.period() / points as f64;
    let mut m = FMoments {
        avg_f: C64::new(0.0, 0.0),
        avg_f2: C64::new(0.0, 0.0),
        avg_abs2f: C64::new(0.0, 0.0),
        avg_abs2: 0.0,
        avg_abs4: 0.0,
    };
    for k in 0..points {
        let f = pulse.displacement(k as f64 * h);
        let a2 = f.norm_sqr();
        m.avg_f += f * h;
        m.avg_f2 += f * f * h;
        m.avg_abs2f += f * a2 * h;
        m.avg_abs2 += a2 * h;
        m.avg_abs4 += a2 * a2 * h;
    }
    Ok(m)
}
