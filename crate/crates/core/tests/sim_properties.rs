use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;
use polypulse::infidelity::{improvement, Metric};
use polypulse::sim::*;
use polypulse::{monochromatic_pulse, optimal_pulse, BusMoments, BusState, EnvironmentRates, Error, PulseSpec};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn zero_generator_leaves_state_unchanged() {
    let psi = [c(0.6, 0.0), c(0.0, 0.48), c(0.0, 0.0), c(0.64, 0.0)];
    let bus = BusState::thermal_with_cutoff(0.3, 6).unwrap();
    let init = QuantumState::product(&psi, &bus).unwrap();
    let cfg = SimConfig::new(2, 8, 100).unwrap();
    let r = propagate(&init, &PulseSpec::zero(1.0).unwrap(), &EnvironmentRates::none(), &cfg).unwrap();
    assert!((r.final_qubit_state - init.qubit_state()).camax() < 1e-10);
}

#[test]
fn ideal_gate_on_two_qubits() {
    let out = ideal_state(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
    let phase = out[0] / out[0].norm();
    let expect = [c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -FRAC_1_SQRT_2)];
    for (o, e) in out.iter().zip(expect) {
        assert!((o - phase * e).norm() < 1e-12);
    }
    let v = nalgebra::DVector::from_row_slice(&out);
    assert!((eof(&(&v * v.adjoint())).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn ideal_gate_is_unitary_for_one_qubit() {
    let out = ideal_state(&[c(0.8, 0.0), c(0.0, 0.6)]).unwrap();
    let norm: f64 = out.iter().map(|z| z.norm_sqr()).sum();
    assert!((norm - 1.0).abs() < 1e-14);
}

#[test]
fn three_qubit_gate_without_dissipation() {
    let p = optimal_pulse(2, 1.0).unwrap();
    let init = QuantumState::basis_product(3, 0b101, &BusState::ground(2).unwrap()).unwrap();
    let r = run_gate(&init, &p, &EnvironmentRates::none(), &SimConfig::for_pulse(3, &p).unwrap()).unwrap();
    assert!(r.gate_fidelity > 1.0 - 1e-6);
    assert!(r.concurrence.is_none() && r.eof.is_none());
}

#[test]
fn leakage_monitor_names_a_larger_cutoff() {
    let p = monochromatic_pulse(1, 1.0).unwrap();
    let init = QuantumState::basis_product(2, 0, &BusState::ground(2).unwrap()).unwrap();
    let cfg = SimConfig::new(2, 6, 200).unwrap();
    match propagate(&init, &p, &EnvironmentRates::none(), &cfg) {
        Err(Error::CutoffTooSmall { cutoff, suggested, leakage, .. }) => {
            assert_eq!(cutoff, 6);
            assert!(suggested > 6);
            assert!(leakage > 1e-8);
        }
        other => panic!("expected a cutoff error, got {other:?}"),
    }
}

#[test]
fn argument_validation() {
    assert!(SimConfig::new(2, 1, 200).is_err());
    assert!(SimConfig::new(2, 12, 99).is_err());
    assert!(SimConfig::new(5, 12, 200).is_err());
    assert!(QuantumState::product(&[c(1.0, 0.0), c(1.0, 0.0)], &BusState::ground(2).unwrap()).is_err());
    assert!(QuantumState::product(&[c(1.0, 0.0); 3], &BusState::ground(2).unwrap()).is_err());
    let bus = BusState::ground(14).unwrap();
    let init = QuantumState::basis_product(2, 0, &bus).unwrap();
    let p = optimal_pulse(2, 1.0).unwrap();
    assert!(propagate(&init, &p, &EnvironmentRates::none(), &SimConfig::new(2, 12, 400).unwrap()).is_err());
    let wrong_n = SimConfig::new(3, 14, 400).unwrap();
    assert!(propagate(&init, &p, &EnvironmentRates::none(), &wrong_n).is_err());
    let cfg = SimConfig::new(2, 12, 400).unwrap();
    assert!(improvement_re(2, &EnvironmentRates::none(), &cfg).is_err());
    assert!(improvement_re(1, &EnvironmentRates::uniform(1e-3).unwrap(), &cfg).is_err());
}

#[test]
fn dissipative_run_respects_state_tolerances() {
    let p = optimal_pulse(3, 1.0).unwrap();
    let rates = EnvironmentRates::new(3e-3, 6e-3, 3e-3).unwrap();
    let init = QuantumState::basis_product(2, 0, &BusState::thermal_with_cutoff(0.2, 10).unwrap()).unwrap();
    let cfg = SimConfig::for_pulse(2, &p).unwrap().with_cutoff(default_cutoff(0.2)).unwrap();
    let r = run_gate(&init, &p, &rates, &cfg).unwrap();
    assert!(r.trace_drift <= TRACE_DRIFT_TOL);
    assert!(r.min_eigenvalue >= MIN_EIGENVALUE_TOL);
    assert!(r.leakage <= r.config.leakage_threshold);
    assert!(r.gate_fidelity < 1.0 && r.gate_fidelity > 0.9);
}

#[test]
fn frame_check_is_zero_at_start() {
    let p = optimal_pulse(2, 1.0).unwrap();
    let cfg = SimConfig::reference(2, &p).unwrap();
    assert_eq!(interaction_frame_check(&p, &cfg, 0.0).unwrap(), 0.0);
    assert!(interaction_frame_check(&p, &cfg, -1.0).is_err());
    assert!(interaction_frame_check(&p, &cfg, 2.0 * p.period()).is_err());
}

#[test]
fn frame_check_at_half_period() {
    let p = optimal_pulse(2, 1.0).unwrap();
    let cfg = SimConfig::reference(2, &p).unwrap();
    assert!(interaction_frame_check(&p, &cfg, 0.5 * p.period()).unwrap() <= 1e-7);
    assert!(interaction_frame_check(&p, &cfg, p.period()).unwrap() <= 1e-7);
}

#[test]
fn exact_and_perturbative_rankings_agree_at_weak_dissipation() {
    let scale = 1e-4;
    let mut exact = Vec::new();
    let mut perturbative = Vec::new();
    for m in 2..=6 {
        let rates = EnvironmentRates::uniform(scale * m as f64).unwrap();
        let cfg = SimConfig::new(2, DEFAULT_GROUND_CUTOFF, STEPS_PER_HARMONIC * m).unwrap();
        let re = improvement_re(m, &rates, &cfg).unwrap();
        assert!(re.e_poly >= re.e_mono);
        exact.push(1.0 - re.e_poly);
        perturbative.push(improvement(m, 2, &rates, &BusMoments::ground(), Metric::Frobenius).unwrap().i_poly);
    }
    let order = |v: &[f64]| {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        idx
    };
    assert_eq!(order(&exact), order(&perturbative));
}
