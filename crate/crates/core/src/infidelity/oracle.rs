//! Direct numerical construction of the first-order error map.
//!
//! The interaction-frame jump operators are
//!
//! ```text
//! Ẽ-(t) = a - i f*(t) S
//! Ẽ+(t) = a† + i f(t) S
//! Ẽd(t) = n̂ + i(a f(t) - a† f*(t)) S + |f(t)|² S²
//! ```
//!
//! and the map is `Ξ(ρ) = Σ_j γ_j ∫_0^T tr_B D_{Ẽ_j(t)}[ρ ⊗ ρ_B] dt`.
//!
//! `S = S_x` is diagonal in the product `σ_x` basis, so on `|a⟩⟨b|` each
//! `Ẽ_j` acts as a bus operator `E_j(s_a)` on the left and `E_j(s_b)` on the
//! right. `Ξ` is therefore diagonal on the `4^N` operators `|a⟩⟨b|`, with
//! `χ(a, b) = Σ_j γ_j ∫ tr[E(s_a) ρ_B E(s_b)† - ½ E(s_a)†E(s_a) ρ_B - ½ ρ_B E(s_b)†E(s_b)]`.
//! Bus operators are dense matrices padded two levels past the support of
//! `ρ_B`, so the trace is exact for the stored state.

use std::collections::HashMap;

use num_complex::Complex64 as C64;

use super::zeta::{Matrix5, Provenance, ZetaMatrix};
use crate::bus::{BusState, TAIL_WEIGHT};
use crate::error::{invalid, Error, Result};
use crate::hilbert::{annihilation, number, xi_diagonal, CMatrix};
use crate::pulse::PulseSpec;
use crate::rates::EnvironmentRates;

/// Largest register handled by the oracle.
pub const ORACLE_MAX_IONS: usize = 6;

/// Relative part of `Ξ` allowed outside the span of `{ξ_i ∘ ξ_j†}`.
pub const PROJECTION_TOL: f64 = 1e-8;

const BUS_PADDING: usize = 2;

#[derive(Clone, Copy, Debug)]
pub struct OracleReport {
    pub zeta: ZetaMatrix,
    /// `‖Ξ - Σ ζ_ij ξ_i∘ξ_j†‖ / ‖Ξ‖` in the Hilbert-Schmidt norm on superoperators.
    pub residual: f64,
}

/// Default time grid: `16m + 1` points.
pub fn default_oracle_points(pulse: &PulseSpec) -> usize {
    16 * pulse.max_harmonic() as usize + 1
}

struct BusOps {
    a: CMatrix,
    ad: CMatrix,
    n: CMatrix,
    id: CMatrix,
    rho: CMatrix,
}

impl BusOps {
    /// `E_j(s)` for the three channels at displacement `f`.
    fn jumps(&self, f: C64, s: f64) -> [CMatrix; 3] {
        let sc = C64::new(s, 0.0);
        let i = C64::i();
        [
            &self.a - &self.id * (i * f.conj() * sc),
            &self.ad + &self.id * (i * f * sc),
            &self.n + (&self.a * f - &self.ad * f.conj()) * (i * sc)
                + &self.id * C64::new(f.norm_sqr() * s * s, 0.0),
        ]
    }
}

/// `χ(s_left, s_right)` for every pair of `S_x` eigenvalues.
fn channel_table(
    pulse: &PulseSpec,
    n_ions: usize,
    rates: &EnvironmentRates,
    ops: &BusOps,
    points: usize,
) -> HashMap<(usize, usize), C64> {
    let gammas = [rates.gamma_minus, rates.gamma_plus, rates.gamma_dephase];
    let h = pulse.period() / points as f64;
    // eigenvalue N - 2k indexed by k
    let eig = |k: usize| n_ions as f64 - 2.0 * k as f64;
    let mut table: HashMap<(usize, usize), C64> = HashMap::new();
    for step in 0..points {
        let f = pulse.displacement(step as f64 * h);
        let jumps: Vec<[CMatrix; 3]> = (0..=n_ions).map(|k| ops.jumps(f, eig(k))).collect();
        let left: Vec<Vec<CMatrix>> = jumps
            .iter()
            .map(|js| js.iter().map(|e| e * &ops.rho).collect())
            .collect();
        // tr(X E†) without forming the product
        let overlap = |x: &CMatrix, e: &CMatrix| -> C64 {
            x.iter().zip(e.iter()).map(|(u, v)| u * v.conj()).sum()
        };
        // tr(E†E ρ) = tr(E ρ E†)
        let decay: Vec<[C64; 3]> = (0..=n_ions)
            .map(|k| std::array::from_fn(|c| overlap(&left[k][c], &jumps[k][c])))
            .collect();
        for kl in 0..=n_ions {
            for kr in 0..=n_ions {
                let mut acc = C64::new(0.0, 0.0);
                for c in 0..3 {
                    if gammas[c] == 0.0 {
                        continue;
                    }
                    let sandwich = overlap(&left[kl][c], &jumps[kr][c]);
                    acc += gammas[c] * (sandwich - 0.5 * decay[kl][c] - 0.5 * decay[kr][c]);
                }
                *table.entry((kl, kr)).or_insert(C64::new(0.0, 0.0)) += acc * h;
            }
        }
    }
    table
}

/// Brute-force `ζ` from the sampled interaction-frame dissipator.
pub fn zeta_oracle(
    pulse: &PulseSpec,
    n_ions: usize,
    rates: &EnvironmentRates,
    bus: &BusState,
    points: usize,
) -> Result<OracleReport> {
    if !(1..=ORACLE_MAX_IONS).contains(&n_ions) {
        return invalid(format!("oracle handles 1..={ORACLE_MAX_IONS} ions, got {n_ions}"));
    }
    rates.validate()?;
    let min_points = 4 * pulse.max_harmonic() as usize + 1;
    if points < min_points {
        return invalid(format!("oracle needs at least {min_points} time points, got {points}"));
    }
    if bus.top_population() > TAIL_WEIGHT {
        return invalid(format!(
            "bus state population {:.3e} at the cutoff; enlarge the truncation",
            bus.top_population()
        ));
    }

    let k = bus.cutoff() + BUS_PADDING;
    let a = annihilation(k);
    let ops = BusOps {
        ad: a.adjoint(),
        n: number(k),
        id: CMatrix::identity(k, k),
        rho: bus.padded(k),
        a,
    };
    let table = channel_table(pulse, n_ions, rates, &ops, points);

    let dim = 1usize << n_ions;
    let xi: Vec<Vec<f64>> = (0..5).map(|p| xi_diagonal(n_ions, p)).collect();
    let chi = |a: usize, b: usize| table[&(a.count_ones() as usize, b.count_ones() as usize)];

    // ζ_ij = 4^{-N} Σ_ab χ(a,b) ξ_i(a) ξ_j(b)
    let mut zeta = Matrix5::zeros();
    for a in 0..dim {
        for b in 0..dim {
            let c = chi(a, b);
            for i in 0..5 {
                for j in 0..5 {
                    zeta[(i, j)] += c * xi[i][a] * xi[j][b];
                }
            }
        }
    }
    zeta /= C64::new((dim * dim) as f64, 0.0);

    let mut resid = 0.0;
    let mut total = 0.0;
    for a in 0..dim {
        for b in 0..dim {
            let c = chi(a, b);
            let mut rec = C64::new(0.0, 0.0);
            for i in 0..5 {
                for j in 0..5 {
                    rec += zeta[(i, j)] * xi[i][a] * xi[j][b];
                }
            }
            resid += (c - rec).norm_sqr();
            total += c.norm_sqr();
        }
    }
    let residual = if total == 0.0 { 0.0 } else { (resid / total).sqrt() };
    if residual > PROJECTION_TOL {
        return Err(Error::Inconsistency {
            residual,
            threshold: PROJECTION_TOL,
        });
    }
    Ok(OracleReport {
        zeta: ZetaMatrix::new(zeta, Provenance::Oracle),
        residual,
    })
}
