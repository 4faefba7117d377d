//! Bus-mode states: low-order moments for the analytic error map and full
//! truncated-Fock density matrices for the oracle and the exact simulator.

use num_complex::Complex64 as C64;

use crate::error::{invalid, Result};
use crate::hilbert::{annihilation, hermitian_eigenvalues, hermiticity_error, CMatrix};

/// Discarded population allowed when truncating an infinite-support state.
pub const TAIL_WEIGHT: f64 = 1e-10;

const MAX_AUTO_CUTOFF: usize = 4096;

/// `⟨n̂⟩`, `⟨a⟩` and `⟨a²⟩` of the bus mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BusMoments {
    pub n_mean: f64,
    pub a_mean: C64,
    pub a2_mean: C64,
}

impl BusMoments {
    pub fn new(n_mean: f64, a_mean: C64, a2_mean: C64) -> Result<Self> {
        if !(n_mean.is_finite() && n_mean >= 0.0) {
            return invalid(format!("mean phonon number must be >= 0, got {n_mean}"));
        }
        Ok(BusMoments {
            n_mean,
            a_mean,
            a2_mean,
        })
    }

    pub fn ground() -> Self {
        BusMoments {
            n_mean: 0.0,
            a_mean: C64::new(0.0, 0.0),
            a2_mean: C64::new(0.0, 0.0),
        }
    }

    pub fn thermal(n_mean: f64) -> Result<Self> {
        Self::new(n_mean, C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    }

    pub fn coherent(alpha: C64) -> Self {
        BusMoments {
            n_mean: alpha.norm_sqr(),
            a_mean: alpha,
            a2_mean: alpha * alpha,
        }
    }
}

/// Bus density matrix on a truncated Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct BusState {
    rho: CMatrix,
}

impl BusState {
    pub fn from_density(rho: CMatrix) -> Result<Self> {
        if rho.nrows() != rho.ncols() || rho.nrows() < 1 {
            return invalid("bus density matrix must be square and non-empty");
        }
        if hermiticity_error(&rho) > 1e-10 {
            return invalid("bus density matrix is not Hermitian");
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
            return invalid(format!("bus density matrix has trace {tr}"));
        }
        if hermitian_eigenvalues(&rho)[0] < -1e-8 {
            return invalid("bus density matrix is not positive");
        }
        Ok(BusState { rho })
    }

    fn from_populations(p: &[f64]) -> Self {
        let total: f64 = p.iter().sum();
        let k = p.len();
        BusState {
            rho: CMatrix::from_fn(k, k, |i, j| {
                if i == j {
                    C64::new(p[i] / total, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        }
    }

    fn from_amplitudes(v: &[C64]) -> Self {
        let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let v: Vec<C64> = v.iter().map(|x| x / norm).collect();
        let k = v.len();
        BusState {
            rho: CMatrix::from_fn(k, k, |i, j| v[i] * v[j].conj()),
        }
    }

    pub fn ground(cutoff: usize) -> Result<Self> {
        Self::fock(0, cutoff)
    }

    pub fn fock(level: usize, cutoff: usize) -> Result<Self> {
        if level >= cutoff {
            return invalid(format!("Fock level {level} outside cutoff {cutoff}"));
        }
        let mut p = vec![0.0; cutoff];
        p[level] = 1.0;
        Ok(Self::from_populations(&p))
    }

    /// Thermal state truncated where the discarded weight drops below
    /// [`TAIL_WEIGHT`], then renormalized.
    pub fn thermal(n_mean: f64) -> Result<Self> {
        if !(n_mean.is_finite() && n_mean >= 0.0) {
            return invalid(format!("mean phonon number must be >= 0, got {n_mean}"));
        }
        if n_mean == 0.0 {
            return Self::ground(2);
        }
        let q = n_mean / (n_mean + 1.0);
        // weight of levels >= K is q^K; the top kept level K-1 carries
        // (1-q)q^(K-1) and must also stay below the tail weight
        let tail = (TAIL_WEIGHT.ln() / q.ln()).ceil();
        let top = 1.0 + ((TAIL_WEIGHT / (1.0 - q)).ln() / q.ln()).ceil();
        let k = tail.max(top) as usize;
        if k > MAX_AUTO_CUTOFF {
            return invalid(format!("thermal state with n = {n_mean} needs cutoff {k}"));
        }
        Self::thermal_with_cutoff(n_mean, k.max(2))
    }

    pub fn thermal_with_cutoff(n_mean: f64, cutoff: usize) -> Result<Self> {
        if cutoff < 1 {
            return invalid("cutoff must be >= 1");
        }
        let q = n_mean / (n_mean + 1.0);
        let p: Vec<f64> = (0..cutoff).map(|n| (1.0 - q) * q.powi(n as i32)).collect();
        Ok(Self::from_populations(&p))
    }

    /// Coherent state `|α⟩`, truncated at [`TAIL_WEIGHT`].
    pub fn coherent(alpha: C64) -> Result<Self> {
        let x = alpha.norm_sqr();
        let mut amps = Vec::new();
        let mut amp = C64::new((-0.5 * x).exp(), 0.0);
        let mut kept = 0.0;
        for n in 0..MAX_AUTO_CUTOFF {
            if n > 0 {
                amp = amp * alpha / (n as f64).sqrt();
            }
            amps.push(amp);
            kept += amp.norm_sqr();
            if 1.0 - kept <= TAIL_WEIGHT && amp.norm_sqr() <= TAIL_WEIGHT && n >= 1 {
                return Ok(Self::from_amplitudes(&amps));
            }
        }
        invalid(format!("coherent state with |alpha| = {} too large", alpha.norm()))
    }

    pub fn coherent_with_cutoff(alpha: C64, cutoff: usize) -> Result<Self> {
        if cutoff < 1 {
            return invalid("cutoff must be >= 1");
        }
        let mut amps = Vec::with_capacity(cutoff);
        let mut amp = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
        for n in 0..cutoff {
            if n > 0 {
                amp = amp * alpha / (n as f64).sqrt();
            }
            amps.push(amp);
        }
        Ok(Self::from_amplitudes(&amps))
    }

    pub fn cutoff(&self) -> usize {
        self.rho.nrows()
    }

    pub fn density(&self) -> &CMatrix {
        &self.rho
    }

    /// Population of the highest retained level.
    pub fn top_population(&self) -> f64 {
        let k = self.cutoff();
        self.rho[(k - 1, k - 1)].re
    }

    /// Same state embedded in a larger Fock space.
    pub fn padded(&self, cutoff: usize) -> CMatrix {
        let k = self.cutoff();
        let mut out = CMatrix::zeros(cutoff.max(k), cutoff.max(k));
        out.view_mut((0, 0), (k, k)).copy_from(&self.rho);
        out
    }

    /// Moments evaluated with ladder operators padded past the support, so
    /// they are exact for the stored state.
    pub fn moments(&self) -> BusMoments {
        let k = self.cutoff() + 2;
        let rho = self.padded(k);
        let a = annihilation(k);
        let ad = a.adjoint();
        let n = (&ad * &a * &rho).trace().re.max(0.0);
        let a1 = (&a * &rho).trace();
        let a2 = (&a * &a * &rho).trace();
        BusMoments {
            n_mean: n,
            a_mean: a1,
            a2_mean: a2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thermal_tail_and_moments() {
        let s = BusState::thermal(2.0).unwrap();
        let q: f64 = 2.0 / 3.0;
        assert!(q.powi(s.cutoff() as i32) <= TAIL_WEIGHT);
        let m = s.moments();
        assert!((m.n_mean - 2.0).abs() < 1e-8);
        assert_eq!(m.a_mean, C64::new(0.0, 0.0));
    }

    #[test]
    fn coherent_moments() {
        let alpha = C64::new(0.5, -0.2);
        let m = BusState::coherent(alpha).unwrap().moments();
        let exact = BusMoments::coherent(alpha);
        assert!((m.n_mean - exact.n_mean).abs() < 1e-9);
        assert!((m.a_mean - exact.a_mean).norm() < 1e-9);
        // ⟨a²⟩ couples levels two apart, so it sees the cut at the square root
        // of the discarded weight.
        assert!((m.a2_mean - exact.a2_mean).norm() < 1e-7);
    }

    #[test]
    fn fock_level_bounds() {
        assert!(BusState::fock(3, 3).is_err());
        assert_eq!(BusState::fock(1, 4).unwrap().moments().n_mean, 1.0);
        assert!(BusMoments::thermal(-1.0).is_err());
    }
}
