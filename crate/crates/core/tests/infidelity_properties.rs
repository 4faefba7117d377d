use num_complex::Complex64 as C64;
use polypulse::hilbert::binomial;
use polypulse::infidelity::*;
use polypulse::{monochromatic_pulse, optimal_pulse, solve_lambda, BusMoments, EnvironmentRates, PulseSpec};
use proptest::prelude::*;

fn calibrated(m: usize) -> Vec<PulseSpec> {
    let mut v = vec![monochromatic_pulse(m, 1.0).unwrap()];
    if m >= 2 {
        v.push(optimal_pulse(m, 1.0).unwrap());
    }
    v
}

#[test]
fn analytic_moments_match_quadrature() {
    for m in 1..=10 {
        for p in calibrated(m) {
            let a = f_moments(&pulse_moments(&p), p.omega());
            let q = f_moments_quadrature(&p, 8 * m + 1).unwrap();
            assert!((a.avg_f - q.avg_f).norm() < 1e-10);
            assert!((a.avg_f2 - q.avg_f2).norm() < 1e-10);
            assert!((a.avg_abs2f - q.avg_abs2f).norm() < 1e-10);
            assert!((a.avg_abs2 - q.avg_abs2).abs() < 1e-10);
            assert!((a.avg_abs4 - q.avg_abs4).abs() < 1e-10);
        }
    }
}

#[test]
fn optimal_moments() {
    for m in 2..=10 {
        let p = optimal_pulse(m, 1.0).unwrap();
        let pm = pulse_moments(&p);
        let lambda = solve_lambda(m).unwrap().lambda;
        assert!(pm.g1.norm() < 1e-12);
        assert!((pm.f1 - lambda / 16.0).abs() < 1e-12);
    }
}

#[test]
fn zeta_hermitian_all_variants() {
    let rates = EnvironmentRates::new(0.3, 0.9, 0.5).unwrap();
    let bus = BusMoments::new(0.7, C64::new(0.2, -0.1), C64::new(0.05, 0.03)).unwrap();
    for m in 2..=6 {
        for p in calibrated(m) {
            for n in 2..=8 {
                let z = assemble_zeta(&p, n, &rates, &bus).unwrap();
                assert!(z.hermiticity_error() < 1e-12);
                let zp = assemble_zeta_printed(&p, n, &rates, &bus).unwrap();
                assert!(zp.hermiticity_error() < 1e-12);
                assert!(infidelity(&z, Metric::FrobeniusSq) >= 0.0);
            }
        }
    }
}

#[test]
fn g1_part_vanishes_for_optimal_pulses() {
    let rates = EnvironmentRates::uniform(1.0).unwrap();
    let bus = BusMoments::new(2.0, C64::new(0.4, 0.3), C64::new(0.1, 0.0)).unwrap();
    for m in 2..=8 {
        let p = optimal_pulse(m, 1.0).unwrap();
        for n in 2..=10 {
            assert!(assemble_zeta_split(&p, n, &rates, &bus).unwrap().zeta1.max_abs() < 1e-12);
        }
    }
}

#[test]
fn ratio_is_independent_of_n_without_dephasing() {
    let rates = EnvironmentRates::new(0.4, 1.0, 0.0).unwrap();
    for bus in [BusMoments::ground(), BusMoments::thermal(3.0).unwrap()] {
        for m in 2..=8 {
            let r2 = improvement_r(m, 2, &rates, &bus, Metric::Frobenius).unwrap();
            for n in 3..=20 {
                let r = improvement_r(m, n, &rates, &bus, Metric::Frobenius).unwrap();
                assert!((r - r2).abs() <= 1e-10, "m={m} n={n}");
            }
        }
    }
}

#[test]
fn four_body_entries_scale_quadratically() {
    // with γd only and g1 = 0 the (ξ0, ξ4) entry is the only one carrying √Γ4
    let rates = EnvironmentRates::dephasing(1.0).unwrap();
    let p = optimal_pulse(4, 1.0).unwrap();
    let entry = |n: usize| assemble_zeta(&p, n, &rates, &BusMoments::ground()).unwrap().entries[(0, 4)].norm();
    for n in 4..=40 {
        let ratio = entry(n) / binomial(n, 4).sqrt();
        assert!((ratio - entry(4)).abs() < 1e-12 * entry(4).max(1.0), "n={n}");
    }
    // √Γ4 ~ N²/√24
    let big = 2000;
    let scaled = entry(big) / (big * big) as f64;
    assert!((scaled - entry(4) / 24f64.sqrt()).abs() / scaled < 5e-3);
}

#[test]
fn mixed_rates_lie_between_single_channels() {
    let bus = BusMoments::ground();
    for m in 2..=8 {
        for n in [2, 5, 10] {
            let th = improvement_r(m, n, &EnvironmentRates::thermalization(1.0).unwrap(), &bus, Metric::Frobenius).unwrap();
            let de = improvement_r(m, n, &EnvironmentRates::dephasing(1.0).unwrap(), &bus, Metric::Frobenius).unwrap();
            let mixed = improvement_r(m, n, &EnvironmentRates::uniform(1.0).unwrap(), &bus, Metric::Frobenius).unwrap();
            assert!(mixed >= th.min(de) - 1e-12 && mixed <= th.max(de) + 1e-12, "m={m} n={n}");
        }
    }
}

#[test]
fn rates_scale_linearly() {
    let p = optimal_pulse(3, 1.0).unwrap();
    let r = EnvironmentRates::new(0.2, 0.5, 0.8).unwrap();
    let bus = BusMoments::thermal(1.0).unwrap();
    let z1 = assemble_zeta(&p, 4, &r, &bus).unwrap();
    let z2 = assemble_zeta(&p, 4, &r.scaled(2.0), &bus).unwrap();
    assert!((z2.entries - z1.entries * C64::new(2.0, 0.0)).camax() < 1e-14);
    let i1 = infidelity(&z1, Metric::FrobeniusSq);
    let i2 = infidelity(&z2, Metric::FrobeniusSq);
    assert!((i2 - 4.0 * i1).abs() < 1e-12 * i2);
}

proptest! {
    #[test]
    fn f2_is_a_sum_of_squares(
        re in proptest::collection::vec(-1.0f64..1.0, 1..6),
        im in proptest::collection::vec(-1.0f64..1.0, 6),
    ) {
        let comps: Vec<(u32, C64)> = re
            .iter()
            .enumerate()
            .map(|(i, &x)| (i as u32 + 1, C64::new(x, im[i])))
            .collect();
        let p = PulseSpec::new(1.0, comps.iter().copied()).unwrap();
        let pm = pulse_moments(&p);
        let m = comps.len();
        let mut sum = 0.0;
        for s in 2..=2 * m {
            let a: C64 = comps
                .iter()
                .flat_map(|&(i, ci)| comps.iter().map(move |&(j, cj)| (i, ci, j, cj)))
                .filter(|&(i, _, j, _)| (i + j) as usize == s)
                .map(|(i, ci, j, cj)| ci * cj / (i * j) as f64)
                .sum();
            sum += a.norm_sqr();
        }
        prop_assert!(pm.f2 >= 0.0);
        prop_assert!((pm.f2 - sum).abs() <= 1e-12 * sum.max(1.0));
    }

    #[test]
    fn moments_match_quadrature_for_random_pulses(
        re in proptest::collection::vec(-1.0f64..1.0, 1..5),
        im in proptest::collection::vec(-1.0f64..1.0, 5),
        omega in 0.5f64..3.0,
    ) {
        let p = PulseSpec::new(
            omega,
            re.iter().enumerate().map(|(i, &x)| (i as u32 + 1, C64::new(x, im[i]))),
        ).unwrap();
        let a = f_moments(&pulse_moments(&p), omega);
        let q = f_moments_quadrature(&p, 8 * re.len() + 1).unwrap();
        let scale = a.avg_abs4.max(1.0);
        prop_assert!((a.avg_abs2f - q.avg_abs2f).norm() < 1e-10 * scale);
        prop_assert!((a.avg_abs4 - q.avg_abs4).abs() < 1e-10 * scale);
        prop_assert!((a.avg_f2 - q.avg_f2).norm() < 1e-10 * scale);
    }
}
