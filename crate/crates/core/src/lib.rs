//! Polychromatic Mølmer-Sørensen pulse design and error analysis.
//!
//! The crate covers four layers:
//!
//! * [`pulse`]: Fourier-series drive pulses, including the optimal
//!   polychromatic family and the monochromatic reference.
//! * [`infidelity`]: the first-order error matrix `ζ` on the collective
//!   `S_x` basis, both analytic and from a brute-force projection.
//! * [`sim`]: exact Lindblad propagation of the qubit register plus a
//!   truncated bus mode.
//! * [`bus`], [`rates`] and [`hilbert`]: shared state, environment and
//!   linear-algebra helpers.

pub mod bus;
pub mod error;
pub mod hilbert;
pub mod infidelity;
pub mod numfmt;
pub mod pulse;
pub mod rates;
pub mod sim;

pub use bus::{BusMoments, BusState};
pub use error::{Error, Result};
pub use pulse::{monochromatic_pulse, optimal_pulse, solve_lambda, Harmonic, PulseSpec};
pub use rates::EnvironmentRates;
