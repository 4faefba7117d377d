use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use polypulse::pulse::{lambda_equation, GATE_AREA};
use polypulse::{monochromatic_pulse, optimal_pulse, solve_lambda, PulseSpec};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

fn closed_form_lambda(m: usize) -> f64 {
    let s3 = 3f64.sqrt();
    let s5 = 5f64.sqrt();
    let s7 = 7f64.sqrt();
    let s145 = 145f64.sqrt();
    match m {
        2 => 2.0 / 3.0,
        3 => (6.0 - s3) / 11.0,
        4 => (5.0 - s5) / 10.0,
        5 => (3.0 * (75.0 + s145) - (10830.0 + 802.0 * s145).sqrt()) / 548.0,
        6 => (98.0 + 7.0 * s7 - (2891.0 + 868.0 * s7).sqrt()) / 252.0,
        _ => unreachable!(),
    }
}

#[test]
fn lambda_root_and_bracket() {
    for m in 2..=12 {
        let sol = solve_lambda(m).unwrap();
        let (value, _) = lambda_equation(m, sol.lambda);
        assert!(value.abs() <= 1e-10, "m={m} residual {value:e}");
        assert!(sol.lambda > 1.0 / m as f64 && sol.lambda < 1.0 / (m - 1) as f64);
        assert!(sol.b < 0.0);
    }
}

#[test]
fn lambda_closed_forms() {
    for m in 2..=6 {
        let got = solve_lambda(m).unwrap().lambda;
        assert!((got - closed_form_lambda(m)).abs() <= 1e-10, "m={m}");
    }
}

#[test]
fn amplitude_sign_pattern() {
    for m in 2..=12 {
        let p = optimal_pulse(m, 1.0).unwrap();
        for h in p.components() {
            assert_eq!(h.amplitude.im, 0.0);
            if h.index as usize == m {
                assert!(h.amplitude.re > 0.0);
            } else {
                assert!(h.amplitude.re < 0.0);
            }
        }
    }
}

#[test]
fn weighted_square_sum_is_lambda_over_16() {
    for m in 2..=12 {
        let p = optimal_pulse(m, 1.0).unwrap();
        let lambda = solve_lambda(m).unwrap().lambda;
        let s: f64 = p
            .components()
            .iter()
            .map(|h| h.amplitude.norm_sqr() / (h.index as f64).powi(2))
            .sum();
        assert!((s - lambda / 16.0).abs() <= 1e-10);
    }
}

#[test]
fn closure_and_phase_for_calibrated_pulses() {
    for m in 1..=12 {
        let mut pulses = vec![monochromatic_pulse(m, 1.3).unwrap()];
        if m >= 2 {
            pulses.push(optimal_pulse(m, 1.3).unwrap());
        }
        for p in pulses {
            assert!(p.is_calibrated());
            assert!((p.gate_area() - GATE_AREA).abs() <= 1e-12);
            let t = p.period();
            assert!(p.displacement(t).norm() <= 1e-12);
            assert!((p.accumulated_phase(t) - PI / 8.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn intensity_never_exceeds_monochromatic() {
    for m in 2..=12 {
        let poly = optimal_pulse(m, 2.0).unwrap().intensity();
        let mono = monochromatic_pulse(m, 2.0).unwrap().intensity();
        assert!((mono - m as f64 * 4.0 / 16.0).abs() < 1e-12);
        assert!(poly <= mono);
    }
}

/// Composite Gauss-Legendre quadrature of the drive.
fn integrate_drive(p: &PulseSpec, t: f64) -> C64 {
    const NODES: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683,
        0.538_469_310_105_683,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const WEIGHTS: [f64; 5] = [
        0.568_888_888_888_889,
        0.478_628_670_499_366,
        0.478_628_670_499_366,
        0.236_926_885_056_189,
        0.236_926_885_056_189,
    ];
    let panels = 400;
    let h = t / panels as f64;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..panels {
        let mid = (k as f64 + 0.5) * h;
        for (x, w) in NODES.iter().zip(WEIGHTS) {
            acc += p.drive(mid + 0.5 * h * x) * (0.5 * h * w);
        }
    }
    acc
}

#[test]
fn displacement_matches_quadrature_at_random_times() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let p = optimal_pulse(5, 1.0).unwrap();
    let period = p.period();
    for _ in 0..100 {
        let t = (0.0..=period).new_tree(&mut runner).unwrap().current();
        let err = (p.displacement(t) - integrate_drive(&p, t)).norm();
        assert!(err <= 1e-10, "t={t} err={err:e}");
    }
}

proptest! {
    #[test]
    fn trajectory_endpoints(m in 2usize..=8, samples in 2usize..64) {
        let p = optimal_pulse(m, 1.0).unwrap();
        let tr = p.trajectory(samples).unwrap();
        prop_assert_eq!(tr.len(), samples);
        prop_assert_eq!(tr[0].t, 0.0);
        prop_assert!(tr[0].f_re.abs() < 1e-15 && tr[0].f_im.abs() < 1e-15);
        let last = tr.last().unwrap();
        prop_assert!(last.f_re.abs() < 1e-12 && last.f_im.abs() < 1e-12);
        prop_assert!((last.g - PI / 8.0).abs() < 1e-12);
    }

    #[test]
    fn accumulated_phase_matches_quadrature(
        re in proptest::collection::vec(-0.3f64..0.3, 3),
        im in proptest::collection::vec(-0.3f64..0.3, 3),
        frac in 0.0f64..1.0,
    ) {
        let p = PulseSpec::new(
            1.0,
            (1..=3u32).map(|j| (j, C64::new(re[j as usize - 1], im[j as usize - 1]))),
        ).unwrap();
        let t = frac * p.period();
        // g(t) = Im ∫ Υ f* by composite Simpson on a fine grid
        let n = 4000;
        let h = t / n as f64;
        let integrand = |s: f64| (p.drive(s) * p.displacement(s).conj()).im;
        let mut acc = integrand(0.0) + integrand(t);
        for k in 1..n {
            acc += integrand(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        prop_assert!((p.accumulated_phase(t) - acc * h / 3.0).abs() < 1e-9);
    }
}
