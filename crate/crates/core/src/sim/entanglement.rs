//! Two-qubit entanglement measures.

use num_complex::Complex64 as C64;

use crate::error::{invalid, Result};
use crate::hilbert::{hermiticity_error, CMatrix};

const HERMITICITY_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-9;

fn validate_two_qubit(rho: &CMatrix) -> Result<()> {
    if rho.shape() != (4, 4) {
        return invalid(format!("expected a 4x4 density matrix, got {:?}", rho.shape()));
    }
    if rho.iter().any(|z| !z.is_finite()) {
        return invalid("density matrix has non-finite entries");
    }
    let herm = hermiticity_error(rho);
    if herm > HERMITICITY_TOL {
        return invalid(format!("density matrix is not Hermitian (deviation {herm:.3e})"));
    }
    let tr = rho.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
        return invalid(format!("density matrix trace {tr} differs from 1"));
    }
    Ok(())
}

/// Wootters concurrence `max(0, μ1 - μ2 - μ3 - μ4)`, where `μ_k` are the
/// decreasing square roots of the eigenvalues of `ρ (σy⊗σy) ρ* (σy⊗σy)`.
///
/// Those are also the eigenvalues of the Hermitian `√ρ ρ̃ √ρ`, which is what is
/// diagonalized here.
pub fn concurrence(rho: &CMatrix) -> Result<f64> {
    validate_two_qubit(rho)?;
    let rho = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
    // σy⊗σy is the antidiagonal (-1, 1, 1, -1)
    let yy = CMatrix::from_fn(4, 4, |i, j| {
        if i + j == 3 {
            C64::new(if i == 0 || i == 3 { -1.0 } else { 1.0 }, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let tilde = &yy * rho.map(|z| z.conj()) * &yy;
    let eig = rho.clone().symmetric_eigen();
    let sqrt_diag = CMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::new(l.max(0.0).sqrt(), 0.0)));
    let sqrt_rho = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.adjoint();
    let m = &sqrt_rho * tilde * &sqrt_rho;
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut mu: Vec<f64> = m.symmetric_eigenvalues().iter().map(|l| l.max(0.0).sqrt()).collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).clamp(0.0, 1.0))
}

fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// Entanglement of formation from a concurrence value.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).sqrt()))
}

pub fn eof(rho: &CMatrix) -> Result<f64> {
    concurrence(rho).map(eof_from_concurrence)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pure(psi: [C64; 4]) -> CMatrix {
        let v = nalgebra::DVector::from_row_slice(&psi);
        &v * v.adjoint()
    }

    #[test]
    fn bell_and_product() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = C64::new(0.0, 0.0);
        let bell = pure([C64::new(h, 0.0), z, z, C64::new(0.0, -h)]);
        assert!((concurrence(&bell).unwrap() - 1.0).abs() < 1e-12);
        assert!((eof(&bell).unwrap() - 1.0).abs() < 1e-12);
        let prod = pure([C64::new(1.0, 0.0), z, z, z]);
        assert!(concurrence(&prod).unwrap().abs() < 1e-12);
        assert_eq!(eof(&prod).unwrap(), 0.0);
    }

    #[test]
    fn werner_state() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = C64::new(0.0, 0.0);
        let phi = pure([C64::new(h, 0.0), z, z, C64::new(h, 0.0)]);
        let p = 0.8;
        let w = phi * C64::new(p, 0.0) + CMatrix::identity(4, 4) * C64::new((1.0 - p) / 4.0, 0.0);
        assert!((concurrence(&w).unwrap() - 0.7).abs() < 1e-12);
        assert!((eof_from_concurrence(0.7) - 0.591_857_407).abs() < 1e-9);
    }

    #[test]
    fn rejects_invalid_input() {
        let mut m = CMatrix::identity(4, 4) * C64::new(0.25, 0.0);
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(concurrence(&m).is_err());
        assert!(concurrence(&CMatrix::identity(4, 4)).is_err());
        assert!(concurrence(&CMatrix::identity(3, 3)).is_err());
    }
}
