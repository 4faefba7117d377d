//! Qubit-register and truncated bosonic operators.
//!
//! Collective qubit operators built from `σ_x` strings are diagonal in the
//! product `σ_x` eigenbasis (`|+⟩ ↦ bit 0`, `|-⟩ ↦ bit 1`). Basis state `a`
//! has `S_x` eigenvalue `N - 2·popcount(a)`.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

pub type CMatrix = DMatrix<C64>;

/// `C(n, k)` as a float, zero for `k > n`.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn sx_eigenvalue(n_qubits: usize, state: usize) -> f64 {
    n_qubits as f64 - 2.0 * state.count_ones() as f64
}

/// Value of `e_p(σ)` (elementary symmetric polynomial of the `σ_x` signs) on
/// an eigenstate with `k` negative signs.
fn elementary_symmetric(n_qubits: usize, k: usize, p: usize) -> f64 {
    (0..=p.min(k))
        .map(|l| {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(k, l) * binomial(n_qubits - k, p - l)
        })
        .sum()
}

/// Diagonal of `ξ_p = C(N,p)^{-1/2} Σ_{j1<..<jp} σ_x^{(j1)}..σ_x^{(jp)}` in the
/// `σ_x` eigenbasis. `ξ_0 = 1`; `ξ_p = 0` for `p > N`.
pub fn xi_diagonal(n_qubits: usize, p: usize) -> Vec<f64> {
    let dim = 1usize << n_qubits;
    if p > n_qubits {
        return vec![0.0; dim];
    }
    let norm = binomial(n_qubits, p).sqrt();
    (0..dim)
        .map(|a| elementary_symmetric(n_qubits, a.count_ones() as usize, p) / norm)
        .collect()
}

/// Normalized Walsh-Hadamard transform; maps computational-basis amplitudes
/// to `σ_x`-eigenbasis amplitudes and back (it is its own inverse).
pub fn walsh_hadamard(v: &mut [C64]) {
    let n = v.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(2 * h) {
            for j in i..i + h {
                let (x, y) = (v[j], v[j + h]);
                v[j] = x + y;
                v[j + h] = x - y;
            }
        }
        h *= 2;
    }
    let s = 1.0 / (n as f64).sqrt();
    v.iter_mut().for_each(|x| *x *= s);
}

/// Truncated annihilation operator on `cutoff` Fock levels.
pub fn annihilation(cutoff: usize) -> CMatrix {
    let mut a = CMatrix::zeros(cutoff, cutoff);
    for n in 1..cutoff {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

pub fn number(cutoff: usize) -> CMatrix {
    CMatrix::from_fn(cutoff, cutoff, |i, j| {
        if i == j {
            C64::new(i as f64, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Dense `σ_x^{(j)}` string product in the computational basis, qubit 0 most
/// significant.
pub fn sigma_x_string(n_qubits: usize, qubits: &[usize]) -> CMatrix {
    let x = CMatrix::from_row_slice(
        2,
        2,
        &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
    );
    let id = CMatrix::identity(2, 2);
    (0..n_qubits).fold(CMatrix::identity(1, 1), |acc, q| {
        kron(&acc, if qubits.contains(&q) { &x } else { &id })
    })
}

/// Dense `ξ_p` in the computational basis.
pub fn xi_matrix(n_qubits: usize, p: usize) -> CMatrix {
    let dim = 1usize << n_qubits;
    if p > n_qubits {
        return CMatrix::zeros(dim, dim);
    }
    let mut acc = CMatrix::zeros(dim, dim);
    for mask in 0usize..dim {
        if mask.count_ones() as usize == p {
            let qs: Vec<usize> = (0..n_qubits).filter(|q| mask >> q & 1 == 1).collect();
            acc += sigma_x_string(n_qubits, &qs);
        }
    }
    acc / C64::new(binomial(n_qubits, p).sqrt(), 0.0)
}

/// Collective `S_x = Σ_j σ_x^{(j)}` in the computational basis.
pub fn collective_sx(n_qubits: usize) -> CMatrix {
    xi_matrix(n_qubits, 1) * C64::new((n_qubits as f64).sqrt(), 0.0)
}

/// Partial trace over the bus of a `(qubits ⊗ bus)` operator.
pub fn trace_bus(rho: &CMatrix, qubit_dim: usize, bus_dim: usize) -> CMatrix {
    CMatrix::from_fn(qubit_dim, qubit_dim, |i, j| {
        (0..bus_dim).map(|n| rho[(i * bus_dim + n, j * bus_dim + n)]).sum()
    })
}

/// Hermitian-part eigenvalues in ascending order.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

pub fn hermiticity_error(m: &CMatrix) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
