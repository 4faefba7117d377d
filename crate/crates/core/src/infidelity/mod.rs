//! First-order gate-error analysis: pulse moments, the `ζ` coefficient matrix
//! (analytic and brute-force) and infidelity ratios.

mod moments;
mod oracle;
mod zeta;

pub use moments::{f_moments, f_moments_quadrature, pulse_moments, FMoments, PulseMoments};
pub use oracle::{default_oracle_points, zeta_oracle, OracleReport, ORACLE_MAX_IONS, PROJECTION_TOL};
pub use zeta::{
    assemble_zeta, assemble_zeta_printed, assemble_zeta_split, improvement, improvement_r,
    infidelity, m_matrices, ChannelMatrices, Improvement, Matrix5, Metric, Provenance, ZetaMatrix,
    ZetaParts, BASIS_LABELS,
};
