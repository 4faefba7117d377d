//! Benchmark fixtures shared by the criterion targets.

use polypulse::{optimal_pulse, BusState, EnvironmentRates, PulseSpec};

/// Optimal pulse with fundamental frequency 1.
pub fn pulse(m: usize) -> PulseSpec {
    optimal_pulse(m, 1.0).expect("valid harmonic count")
}

pub fn uniform_rates() -> EnvironmentRates {
    EnvironmentRates::uniform(1e-3).expect("valid rates")
}

pub fn ground_bus(cutoff: usize) -> BusState {
    BusState::ground(cutoff).expect("valid cutoff")
}
