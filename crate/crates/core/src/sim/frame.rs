//! Comparison of the numerical propagator with its closed form
//! `U(t) = exp(-i((f(t) a + f*(t) a†) S_x + g(t) S_x²))`.

use num_complex::Complex64 as C64;

use super::generator::Rk4;
use super::SimConfig;
use crate::error::{invalid, Result};
use crate::hilbert::{annihilation, CMatrix};
use crate::pulse::PulseSpec;

/// Levels added to the truncation when evaluating the closed-form
/// displacement, so that it is exact for low-lying inputs.
pub const FRAME_CHECK_EXTRA_LEVELS: usize = 40;

/// Inputs are Fock levels `0` and `1` for every qubit state.
const INPUT_LEVELS: usize = 2;

/// Operator-norm distance between the Runge-Kutta propagator from `0` to `t`
/// and the closed form, both restricted to inputs with at most one phonon.
///
/// Both operators are block diagonal in the `σ_x` basis, so the norm is the
/// largest over the `N + 1` distinct `S_x` eigenvalues. The integration uses
/// `ceil(steps·t/T)` steps of the configuration.
pub fn interaction_frame_check(pulse: &PulseSpec, config: &SimConfig, t: f64) -> Result<f64> {
    config.validate()?;
    let period = pulse.period();
    if !(t.is_finite() && (0.0..=period * (1.0 + 1e-12)).contains(&t)) {
        return invalid(format!("time {t} outside [0, {period}]"));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let k = config.fock_cutoff;
    let kx = k + FRAME_CHECK_EXTRA_LEVELS;
    let steps = ((config.steps as f64 * t / period).ceil() as usize).max(1);
    let h = t / steps as f64;
    let sq: Vec<f64> = (0..=k).map(|n| (n as f64).sqrt()).collect();
    let f = pulse.displacement(t);
    let g = pulse.accumulated_phase(t);
    let a = annihilation(kx);
    let generator = &a * f + a.adjoint() * f.conj();

    let mut worst: f64 = 0.0;
    let n = config.n_qubits;
    for spin in (0..=n).map(|j| n as f64 - 2.0 * j as f64) {
        let exact = (&generator * C64::new(0.0, -spin)).exp() * C64::from_polar(1.0, -g * spin * spin);
        let mut diff = CMatrix::zeros(kx, INPUT_LEVELS);
        let mut rk = Rk4::new(k);
        for level in 0..INPUT_LEVELS.min(k) {
            let mut psi = vec![C64::new(0.0, 0.0); k];
            psi[level] = C64::new(1.0, 0.0);
            let deriv = |time: f64, y: &[C64], out: &mut [C64]| {
                let u = pulse.drive(time);
                let scale = C64::new(0.0, -spin);
                for j in 0..k {
                    let mut acc = C64::new(0.0, 0.0);
                    if j + 1 < k {
                        acc += u * sq[j + 1] * y[j + 1];
                    }
                    if j > 0 {
                        acc += u.conj() * sq[j] * y[j - 1];
                    }
                    out[j] = scale * acc;
                }
            };
            for step in 0..steps {
                rk.step(deriv, step as f64 * h, h, &mut psi);
            }
            for row in 0..kx {
                let numeric = if row < k { psi[row] } else { C64::new(0.0, 0.0) };
                diff[(row, level)] = numeric - exact[(row, level)];
            }
        }
        worst = worst.max(spectral_norm_two_columns(&diff));
    }
    Ok(worst)
}

fn spectral_norm_two_columns(m: &CMatrix) -> f64 {
    let gram = m.adjoint() * m;
    let (p, q, r) = (gram[(0, 0)].re, gram[(1, 1)].re, gram[(0, 1)]);
    let lmax = 0.5 * (p + q + ((p - q).powi(2) + 4.0 * r.norm_sqr()).sqrt());
    lmax.max(0.0).sqrt()
}
