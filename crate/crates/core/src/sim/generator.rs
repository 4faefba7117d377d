//! Lindblad generator in the product `σ_x` basis.
//!
//! The density matrix is stored row-major as a flat vector over the index
//! `(qubit, fock) ↦ qubit·K + fock`. In this basis the Hamiltonian
//! `s_q (Υ a + Υ* a†)` only couples neighbouring Fock levels within one qubit
//! block, and every jump operator acts on the bus alone, so the generator is
//! applied with a handful of shifted reads per entry.

use num_complex::Complex64 as C64;

use crate::rates::EnvironmentRates;

pub(crate) struct Generator {
    qdim: usize,
    cutoff: usize,
    /// `S_x` eigenvalue of each qubit basis state.
    spins: Vec<f64>,
    /// `√n` for `n = 0..=K`.
    sqrt: Vec<f64>,
    /// Diagonal of the truncated `a a†`; the top level has no partner above it.
    aad: Vec<f64>,
    rates: EnvironmentRates,
}

impl Generator {
    pub(crate) fn new(spins: Vec<f64>, cutoff: usize, rates: EnvironmentRates) -> Self {
        let aad = (0..cutoff)
            .map(|n| if n + 1 < cutoff { (n + 1) as f64 } else { 0.0 })
            .collect();
        Generator {
            qdim: spins.len(),
            cutoff,
            spins,
            sqrt: (0..=cutoff).map(|n| (n as f64).sqrt()).collect(),
            aad,
            rates,
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.qdim * self.cutoff
    }

    /// `out = L(t)[rho]` with `upsilon = Υ(t)`.
    pub(crate) fn apply(&self, upsilon: C64, rho: &[C64], out: &mut [C64]) {
        let k = self.cutoff;
        let d = self.dim();
        let ups_c = upsilon.conj();
        let minus_i = C64::new(0.0, -1.0);
        let EnvironmentRates {
            gamma_plus: gp,
            gamma_minus: gm,
            gamma_dephase: gd,
        } = self.rates;
        for r in 0..d {
            let (qa, n) = (r / k, r % k);
            let sa = self.spins[qa];
            let row = r * d;
            for c in 0..d {
                let (qb, np) = (c / k, c % k);
                let sb = self.spins[qb];
                let here = rho[row + c];

                let mut h_rho = C64::new(0.0, 0.0);
                if n + 1 < k {
                    h_rho += upsilon * self.sqrt[n + 1] * rho[row + d + c];
                }
                if n > 0 {
                    h_rho += ups_c * self.sqrt[n] * rho[row - d + c];
                }
                let mut rho_h = C64::new(0.0, 0.0);
                if np > 0 {
                    rho_h += upsilon * self.sqrt[np] * rho[row + c - 1];
                }
                if np + 1 < k {
                    rho_h += ups_c * self.sqrt[np + 1] * rho[row + c + 1];
                }
                let mut acc = minus_i * (h_rho * sa - rho_h * sb);

                if gm != 0.0 {
                    let mut jump = C64::new(0.0, 0.0);
                    if n + 1 < k && np + 1 < k {
                        jump = self.sqrt[n + 1] * self.sqrt[np + 1] * rho[row + d + c + 1];
                    }
                    acc += gm * (jump - 0.5 * (n + np) as f64 * here);
                }
                if gp != 0.0 {
                    let mut jump = C64::new(0.0, 0.0);
                    if n > 0 && np > 0 {
                        jump = self.sqrt[n] * self.sqrt[np] * rho[row - d + c - 1];
                    }
                    acc += gp * (jump - 0.5 * (self.aad[n] + self.aad[np]) * here);
                }
                if gd != 0.0 {
                    let diff = n as f64 - np as f64;
                    acc -= 0.5 * gd * diff * diff * here;
                }
                out[row + c] = acc;
            }
        }
    }
}

/// Classical fourth-order Runge-Kutta stepper with reusable buffers.
pub(crate) struct Rk4 {
    k1: Vec<C64>,
    k2: Vec<C64>,
    k3: Vec<C64>,
    k4: Vec<C64>,
    tmp: Vec<C64>,
}

impl Rk4 {
    pub(crate) fn new(len: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); len];
        Rk4 {
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            tmp: z,
        }
    }

    /// Advances `y` by `h` under `dy/dt = f(t, y)`.
    pub(crate) fn step<F>(&mut self, f: F, t: f64, h: f64, y: &mut [C64])
    where
        F: Fn(f64, &[C64], &mut [C64]),
    {
        f(t, y, &mut self.k1);
        axpy(&mut self.tmp, y, 0.5 * h, &self.k1);
        f(t + 0.5 * h, &self.tmp, &mut self.k2);
        axpy(&mut self.tmp, y, 0.5 * h, &self.k2);
        f(t + 0.5 * h, &self.tmp, &mut self.k3);
        axpy(&mut self.tmp, y, h, &self.k3);
        f(t + h, &self.tmp, &mut self.k4);
        let w = h / 6.0;
        for i in 0..y.len() {
            y[i] += w * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
    }
}

fn axpy(out: &mut [C64], y: &[C64], a: f64, x: &[C64]) {
    for ((o, yi), xi) in out.iter_mut().zip(y).zip(x) {
        *o = yi + a * xi;
    }
}
