use num_complex::Complex64 as C64;
use polypulse::infidelity::{
    assemble_zeta, assemble_zeta_split, default_oracle_points, zeta_oracle, PROJECTION_TOL,
};
use polypulse::{monochromatic_pulse, optimal_pulse, BusState, EnvironmentRates, PulseSpec};

fn pulses(m: usize) -> Vec<PulseSpec> {
    let mut out = vec![monochromatic_pulse(m, 1.0).unwrap()];
    if m >= 2 {
        out.push(optimal_pulse(m, 1.0).unwrap());
    }
    out
}

fn rate_models() -> Vec<EnvironmentRates> {
    vec![
        EnvironmentRates::thermalization(1.0).unwrap(),
        EnvironmentRates::dephasing(1.0).unwrap(),
        EnvironmentRates::new(0.7, 1.3, 0.4).unwrap(),
    ]
}

fn check(pulse: &PulseSpec, n: usize, rates: &EnvironmentRates, bus: &BusState) -> f64 {
    let rep = zeta_oracle(pulse, n, rates, bus, default_oracle_points(pulse)).unwrap();
    assert!(rep.residual <= PROJECTION_TOL);
    let analytic = assemble_zeta(pulse, n, rates, &bus.moments()).unwrap();
    analytic.relative_deviation(&rep.zeta)
}

#[test]
fn reconciled_matches_oracle_small_registers() {
    let buses = [
        BusState::ground(3).unwrap(),
        BusState::thermal(2.0).unwrap(),
        BusState::coherent(C64::new(0.5, 0.0)).unwrap(),
    ];
    for m in 1..=3 {
        for p in pulses(m) {
            for n in 2..=3 {
                for r in rate_models() {
                    for b in &buses {
                        let dev = check(&p, n, &r, b);
                        assert!(dev < 1e-6, "m={m} n={n} {r:?} dev={dev:e}");
                    }
                }
            }
        }
    }
}

#[test]
fn complex_coherent_amplitude() {
    let bus = BusState::coherent(C64::new(0.3, -0.4)).unwrap();
    let p = PulseSpec::new(
        1.0,
        [(1, C64::new(0.1, 0.05)), (2, C64::new(-0.2, 0.1)), (3, C64::new(0.05, 0.3))],
    )
    .unwrap();
    for r in rate_models() {
        let dev = check(&p, 4, &r, &bus);
        assert!(dev < 1e-6, "{r:?} dev={dev:e}");
    }
}

#[test]
fn optimal_pulse_has_no_g1_part() {
    let rates = EnvironmentRates::new(0.5, 1.0, 2.0).unwrap();
    let bus = BusState::thermal(1.0).unwrap();
    for m in 2..=4 {
        let p = optimal_pulse(m, 1.0).unwrap();
        let parts = assemble_zeta_split(&p, 3, &rates, &bus.moments()).unwrap();
        assert!(parts.zeta1.max_abs() < 1e-12);
        // the oracle sees no g1-dependent structure either
        let rep = zeta_oracle(&p, 3, &rates, &bus, default_oracle_points(&p)).unwrap();
        assert!(parts.zeta0.relative_deviation(&rep.zeta) < 1e-8);
    }
}
