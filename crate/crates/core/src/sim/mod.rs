//! Exact propagation of the qubit register coupled to one truncated bus mode.
//!
//! The master equation
//!
//! ```text
//! dρ/dt = -i[H(t), ρ] + Σ_j γ_j D_{E_j}[ρ],   H(t) = (Υ(t) a + Υ*(t) a†) S_x
//! ```
//!
//! with `E- = a`, `E+ = a†` and `Ed = a†a` is integrated over one gate period
//! with a fixed-step fourth-order Runge-Kutta scheme. The truncated ladder
//! operators are used as matrices, so the truncated generator is itself
//! trace preserving. Population reaching the top two Fock levels is monitored
//! instead of being corrected for.

mod entanglement;
mod frame;
mod generator;

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::bus::BusState;
use crate::error::{invalid, Error, Result};
use crate::hilbert::{hermitian_eigenvalues, hermiticity_error, kron, sx_eigenvalue, trace_bus, walsh_hadamard, CMatrix};
use crate::numfmt::serialize_sig;
use crate::pulse::{monochromatic_pulse, optimal_pulse, PulseSpec};
use crate::rates::EnvironmentRates;

pub use entanglement::{concurrence, eof, eof_from_concurrence};
pub use frame::{interaction_frame_check, FRAME_CHECK_EXTRA_LEVELS};
use generator::{Generator, Rk4};

/// Largest register the exact simulator accepts.
pub const MAX_SIM_QUBITS: usize = 4;
pub const DEFAULT_LEAKAGE_THRESHOLD: f64 = 1e-8;
pub const DEFAULT_GROUND_CUTOFF: usize = 12;
pub const STEPS_PER_HARMONIC: usize = 200;
/// Largest cutoff [`run_gate`] will escalate to.
pub const MAX_SIM_CUTOFF: usize = 160;
/// Largest step count [`run_gate`] will escalate to.
pub const MAX_SIM_STEPS: usize = 1 << 20;

pub const TRACE_DRIFT_TOL: f64 = 1e-9;
pub const MIN_EIGENVALUE_TOL: f64 = -1e-8;
pub const HERMITICITY_TOL: f64 = 1e-10;
const CHECKPOINTS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SimConfig {
    pub n_qubits: usize,
    pub fock_cutoff: usize,
    /// Runge-Kutta steps over one period `T`.
    pub steps: usize,
    #[serde(serialize_with = "serialize_sig")]
    pub leakage_threshold: f64,
}

impl SimConfig {
    pub fn new(n_qubits: usize, fock_cutoff: usize, steps: usize) -> Result<Self> {
        let c = SimConfig {
            n_qubits,
            fock_cutoff,
            steps,
            leakage_threshold: DEFAULT_LEAKAGE_THRESHOLD,
        };
        c.validate()?;
        Ok(c)
    }

    /// Cutoff 12 and `200·m` steps, where `m` is the pulse's highest harmonic.
    pub fn for_pulse(n_qubits: usize, pulse: &PulseSpec) -> Result<Self> {
        let m = pulse.max_harmonic().max(1) as usize;
        Self::new(n_qubits, DEFAULT_GROUND_CUTOFF, STEPS_PER_HARMONIC * m)
    }

    /// Resolution used to compare against the closed-form propagator:
    /// cutoff 30 and `2000·m` steps.
    pub fn reference(n_qubits: usize, pulse: &PulseSpec) -> Result<Self> {
        let m = pulse.max_harmonic().max(1) as usize;
        Self::new(n_qubits, 30, 2000 * m)
    }

    pub fn with_cutoff(mut self, fock_cutoff: usize) -> Result<Self> {
        self.fock_cutoff = fock_cutoff;
        self.validate()?;
        Ok(self)
    }

    pub fn with_steps(mut self, steps: usize) -> Result<Self> {
        self.steps = steps;
        self.validate()?;
        Ok(self)
    }

    pub fn with_leakage_threshold(mut self, threshold: f64) -> Result<Self> {
        self.leakage_threshold = threshold;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_SIM_QUBITS).contains(&self.n_qubits) {
            return invalid(format!(
                "exact simulation handles 1..={MAX_SIM_QUBITS} qubits, got {}",
                self.n_qubits
            ));
        }
        if self.fock_cutoff < 2 {
            return invalid(format!("Fock cutoff must be >= 2, got {}", self.fock_cutoff));
        }
        if self.steps < 100 {
            return invalid(format!("need at least 100 steps per period, got {}", self.steps));
        }
        if !(self.leakage_threshold.is_finite() && self.leakage_threshold > 0.0) {
            return invalid("leakage threshold must be positive");
        }
        Ok(())
    }
}

/// Default cutoff for a thermal bus with mean occupation `n_mean`.
pub fn default_cutoff(n_mean: f64) -> usize {
    if n_mean <= 0.0 {
        DEFAULT_GROUND_CUTOFF
    } else {
        (8.0 + 6.0 * n_mean).ceil() as usize
    }
}

/// Density matrix on `(qubits) ⊗ (bus)`, indexed `qubit·K + fock`, with the
/// qubits in the computational basis (qubit 0 most significant).
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    rho: CMatrix,
    n_qubits: usize,
    cutoff: usize,
}

fn qubit_count(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return invalid(format!("qubit dimension must be a power of two >= 2, got {dim}"));
    }
    Ok(dim.trailing_zeros() as usize)
}

fn check_density(rho: &CMatrix) -> Result<()> {
    if rho.iter().any(|z| !z.is_finite()) {
        return invalid("density matrix has non-finite entries");
    }
    let herm = hermiticity_error(rho);
    if herm > HERMITICITY_TOL {
        return invalid(format!("density matrix is not Hermitian (deviation {herm:.3e})"));
    }
    let tr = rho.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > TRACE_DRIFT_TOL {
        return invalid(format!("density matrix has trace {tr}"));
    }
    let min = hermitian_eigenvalues(rho)[0];
    if min < MIN_EIGENVALUE_TOL {
        return invalid(format!("density matrix has eigenvalue {min:.3e}"));
    }
    Ok(())
}

impl QuantumState {
    /// `|ψ⟩⟨ψ| ⊗ ρ_B` for normalized qubit amplitudes `psi`.
    pub fn product(psi: &[C64], bus: &BusState) -> Result<Self> {
        let n_qubits = qubit_count(psi.len())?;
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > TRACE_DRIFT_TOL {
            return invalid(format!("qubit state has norm² {norm}"));
        }
        let v = nalgebra::DVector::from_row_slice(psi);
        let rho = kron(&(&v * v.adjoint()), bus.density());
        Ok(QuantumState {
            rho,
            n_qubits,
            cutoff: bus.cutoff(),
        })
    }

    /// Computational basis state `|bits⟩` of `n_qubits` qubits times `ρ_B`.
    pub fn basis_product(n_qubits: usize, bits: usize, bus: &BusState) -> Result<Self> {
        if n_qubits == 0 || bits >= 1 << n_qubits {
            return invalid(format!("basis state {bits} outside a {n_qubits}-qubit register"));
        }
        let mut psi = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        psi[bits] = C64::new(1.0, 0.0);
        Self::product(&psi, bus)
    }

    pub fn from_density(rho: CMatrix, n_qubits: usize, cutoff: usize) -> Result<Self> {
        let dim = (1usize << n_qubits) * cutoff;
        if n_qubits == 0 || cutoff == 0 || rho.shape() != (dim, dim) {
            return invalid(format!(
                "density matrix shape {:?} does not match {n_qubits} qubits and cutoff {cutoff}",
                rho.shape()
            ));
        }
        check_density(&rho)?;
        Ok(QuantumState { rho, n_qubits, cutoff })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn density(&self) -> &CMatrix {
        &self.rho
    }

    pub fn qubit_state(&self) -> CMatrix {
        trace_bus(&self.rho, 1 << self.n_qubits, self.cutoff)
    }

    /// The same state in a bus space of `cutoff ≥ self.cutoff()` levels.
    pub fn padded(&self, cutoff: usize) -> Result<CMatrix> {
        if cutoff < self.cutoff {
            return invalid(format!(
                "state occupies {} Fock levels, cannot truncate to {cutoff}",
                self.cutoff
            ));
        }
        let q = 1usize << self.n_qubits;
        let k = self.cutoff;
        let mut out = CMatrix::zeros(q * cutoff, q * cutoff);
        for (i, j) in (0..q * k).flat_map(|i| (0..q * k).map(move |j| (i, j))) {
            out[((i / k) * cutoff + i % k, (j / k) * cutoff + j % k)] = self.rho[(i, j)];
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimResult {
    /// Reduced qubit density matrix at `T`, computational basis.
    pub final_qubit_state: CMatrix,
    /// `tr(U ρ_q(0) U† ρ_q(T))` with `U = exp(-iπ/8 S_x²)`.
    pub gate_fidelity: f64,
    /// Two-qubit registers only.
    pub concurrence: Option<f64>,
    pub eof: Option<f64>,
    /// Largest population of the top two Fock levels seen at any step.
    pub leakage: f64,
    pub trace_drift: f64,
    /// Smallest eigenvalue of the full state over all checkpoints.
    pub min_eigenvalue: f64,
    /// Configuration the result was obtained with.
    pub config: SimConfig,
}

/// `H^{⊗N} ⊗ 1_K`; conjugating with it maps between computational and
/// `σ_x` qubit bases.
fn hadamard_bus(n_qubits: usize, cutoff: usize) -> CMatrix {
    let q = 1usize << n_qubits;
    let scale = (q as f64).sqrt().recip();
    let w = CMatrix::from_fn(q, q, |a, b| {
        let sign = if (a & b).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        C64::new(sign * scale, 0.0)
    });
    kron(&w, &CMatrix::identity(cutoff, cutoff))
}

fn spins(n_qubits: usize) -> Vec<f64> {
    (0..1usize << n_qubits).map(|a| sx_eigenvalue(n_qubits, a)).collect()
}

/// `exp(-iπ/8 S_x²)` in the computational basis.
pub fn ideal_gate(n_qubits: usize) -> CMatrix {
    let w = hadamard_bus(n_qubits, 1);
    let phases = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        1 << n_qubits,
        spins(n_qubits)
            .into_iter()
            .map(|s| C64::from_polar(1.0, -PI / 8.0 * s * s)),
    ));
    &w * phases * &w
}

/// Applies `exp(-iπ/8 S_x²)` to a pure register state.
pub fn ideal_state(psi: &[C64]) -> Result<Vec<C64>> {
    let n = qubit_count(psi.len())?;
    let mut out = psi.to_vec();
    walsh_hadamard(&mut out);
    for (a, z) in out.iter_mut().enumerate() {
        let s = sx_eigenvalue(n, a);
        *z *= C64::from_polar(1.0, -PI / 8.0 * s * s);
    }
    walsh_hadamard(&mut out);
    Ok(out)
}

fn top_population(rho: &[C64], dim: usize, cutoff: usize) -> f64 {
    let levels = cutoff.min(2);
    (0..dim / cutoff)
        .flat_map(|q| (cutoff - levels..cutoff).map(move |n| q * cutoff + n))
        .map(|r| rho[r * dim + r].re)
        .sum()
}

fn flat_trace(rho: &[C64], dim: usize) -> C64 {
    (0..dim).map(|r| rho[r * dim + r]).sum()
}

fn to_matrix(rho: &[C64], dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |r, c| rho[r * dim + c])
}

fn suggest_cutoff(cutoff: usize) -> usize {
    cutoff + (cutoff / 2).max(4)
}

/// Integrates the master equation over one gate period.
///
/// The pulse does not have to be calibrated; the fidelity is always taken
/// against the ideal gate.
pub fn propagate(
    initial: &QuantumState,
    pulse: &PulseSpec,
    rates: &EnvironmentRates,
    config: &SimConfig,
) -> Result<SimResult> {
    config.validate()?;
    rates.validate()?;
    if initial.n_qubits != config.n_qubits {
        return invalid(format!(
            "state has {} qubits, configuration {}",
            initial.n_qubits, config.n_qubits
        ));
    }
    let k = config.fock_cutoff;
    let w = hadamard_bus(config.n_qubits, k);
    let rho_x = &w * initial.padded(k)? * &w;

    let gen = Generator::new(spins(config.n_qubits), k, *rates);
    let dim = gen.dim();
    let mut rho: Vec<C64> = (0..dim * dim).map(|i| rho_x[(i / dim, i % dim)]).collect();
    let trace0 = flat_trace(&rho, dim);

    let period = pulse.period();
    let h = period / config.steps as f64;
    let mut rk = Rk4::new(rho.len());
    let deriv = |t: f64, y: &[C64], out: &mut [C64]| gen.apply(pulse.drive(t), y, out);

    let mut leakage = top_population(&rho, dim, k);
    let mut trace_drift: f64 = 0.0;
    let mut min_eigenvalue = f64::INFINITY;
    let checkpoint_every = (config.steps / CHECKPOINTS).max(1);
    for step in 0..config.steps {
        rk.step(deriv, step as f64 * h, h, &mut rho);
        let t = (step + 1) as f64 * h;
        if rho.iter().any(|z| !z.is_finite()) {
            return Err(Error::IntegrationFailure(format!("non-finite state at t = {t:.6e}")));
        }
        trace_drift = trace_drift.max((flat_trace(&rho, dim) - trace0).norm());
        if trace_drift > TRACE_DRIFT_TOL {
            return Err(Error::IntegrationFailure(format!(
                "trace drift {trace_drift:.3e} at t = {t:.6e} exceeds {TRACE_DRIFT_TOL:.0e}"
            )));
        }
        leakage = leakage.max(top_population(&rho, dim, k));
        if leakage > config.leakage_threshold {
            return Err(Error::CutoffTooSmall {
                cutoff: k,
                leakage,
                threshold: config.leakage_threshold,
                suggested: suggest_cutoff(k),
            });
        }
        if (step + 1) % checkpoint_every == 0 || step + 1 == config.steps {
            let m = to_matrix(&rho, dim);
            let herm = hermiticity_error(&m);
            if herm > HERMITICITY_TOL {
                return Err(Error::IntegrationFailure(format!(
                    "Hermiticity error {herm:.3e} at t = {t:.6e}"
                )));
            }
            let ev = hermitian_eigenvalues(&m)[0];
            min_eigenvalue = min_eigenvalue.min(ev);
            if ev < MIN_EIGENVALUE_TOL {
                return Err(Error::StepTooCoarse {
                    steps: config.steps,
                    min_eigenvalue: ev,
                    threshold: MIN_EIGENVALUE_TOL,
                    suggested_steps: 2 * config.steps,
                });
            }
        }
    }

    let rho_z = &w * to_matrix(&rho, dim) * &w;
    let q = 1usize << config.n_qubits;
    let final_qubit_state = trace_bus(&rho_z, q, k);
    let u = ideal_gate(config.n_qubits);
    let target = &u * initial.qubit_state() * u.adjoint();
    let gate_fidelity = (target * &final_qubit_state).trace().re;
    let (concurrence, eof) = if config.n_qubits == 2 {
        let c = entanglement::concurrence(&final_qubit_state)?;
        (Some(c), Some(eof_from_concurrence(c)))
    } else {
        (None, None)
    };
    Ok(SimResult {
        final_qubit_state,
        gate_fidelity,
        concurrence,
        eof,
        leakage,
        trace_drift,
        min_eigenvalue,
        config: *config,
    })
}

/// [`propagate`], enlarging the Fock cutoff while the leakage monitor asks for
/// it (up to [`MAX_SIM_CUTOFF`]) and doubling the step count while the
/// positivity check fails (up to [`MAX_SIM_STEPS`]).
pub fn run_gate(
    initial: &QuantumState,
    pulse: &PulseSpec,
    rates: &EnvironmentRates,
    config: &SimConfig,
) -> Result<SimResult> {
    let mut config = *config;
    loop {
        match propagate(initial, pulse, rates, &config) {
            Err(Error::CutoffTooSmall { suggested, .. }) if suggested <= MAX_SIM_CUTOFF => {
                config.fock_cutoff = suggested;
            }
            Err(Error::StepTooCoarse { suggested_steps, .. }) if suggested_steps <= MAX_SIM_STEPS => {
                config.steps = suggested_steps;
            }
            other => return other,
        }
    }
}

/// EoF of the monochromatic and optimal `m`-tone gates and
/// `R_E = (1 - E_mono) / (1 - E_poly)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EofImprovement {
    #[serde(serialize_with = "serialize_sig")]
    pub e_mono: f64,
    #[serde(serialize_with = "serialize_sig")]
    pub e_poly: f64,
    #[serde(serialize_with = "serialize_sig")]
    pub ratio: f64,
}

pub const RATIO_FLOOR: f64 = 1e-12;

/// Both gates act on `|00⟩` with the bus in its ground state, for one period
/// `T = 2π/ω` with `ω = 1`. `config.steps` is used for both pulses.
pub fn improvement_re(m: usize, rates: &EnvironmentRates, config: &SimConfig) -> Result<EofImprovement> {
    if m < 2 {
        return invalid(format!("EoF improvement needs m >= 2, got {m}"));
    }
    if config.n_qubits != 2 {
        return invalid("EoF improvement is defined for two qubits");
    }
    rates.validate()?;
    if rates.is_zero() {
        return invalid("EoF improvement needs at least one nonzero rate");
    }
    let initial = QuantumState::basis_product(2, 0, &BusState::ground(2)?)?;
    let eof_of = |p: &PulseSpec| -> Result<f64> {
        let r = run_gate(&initial, p, rates, config)?;
        Ok(r.eof.expect("two-qubit run"))
    };
    let e_mono = eof_of(&monochromatic_pulse(m, 1.0)?)?;
    let e_poly = eof_of(&optimal_pulse(m, 1.0)?)?;
    if 1.0 - e_poly < RATIO_FLOOR {
        return Err(Error::RatioUndefined(format!(
            "polychromatic EoF deficit {:.3e} below {RATIO_FLOOR:.0e}",
            1.0 - e_poly
        )));
    }
    Ok(EofImprovement {
        e_mono,
        e_poly,
        ratio: (1.0 - e_mono) / (1.0 - e_poly),
    })
}
