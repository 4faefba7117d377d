//! Subcommand implementations. Each returns the full text to emit.

use clap::{Args, ValueEnum};
use polypulse::infidelity::{
    assemble_zeta, assemble_zeta_printed, default_oracle_points, improvement, zeta_oracle, Metric,
};
use polypulse::numfmt::{round_sig, serialize_sig, serialize_sig_opt};
use polypulse::sim::{
    default_cutoff, improvement_re, propagate, run_gate, QuantumState, SimConfig, DEFAULT_GROUND_CUTOFF,
    DEFAULT_LEAKAGE_THRESHOLD, STEPS_PER_HARMONIC,
};
use polypulse::{EnvironmentRates, PulseSpec};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{parse_float_list, parse_int_list, BusArgs, BusKind, Format, PulseArgs, RateArgs};
use crate::error::{usage, CliError, CliResult};
use crate::output::{csv, json, Cell};

fn harmonic_count(pulse: &PulseSpec) -> usize {
    pulse.max_harmonic().max(1) as usize
}

fn parse_metric(s: &str) -> CliResult<Metric> {
    Ok(s.parse::<Metric>()?)
}

#[derive(Args, Debug)]
pub struct DesignArgs {
    #[command(flatten)]
    pub pulse: PulseArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

pub fn design(a: &DesignArgs) -> CliResult<String> {
    let p = a.pulse.build()?;
    Ok(match a.format {
        Format::Json => json(&p.to_json_value()),
        Format::Csv => {
            let rows: Vec<Vec<Cell>> = p
                .components()
                .iter()
                .map(|h| vec![Cell::Int(h.index as usize), Cell::Num(h.amplitude.re), Cell::Num(h.amplitude.im)])
                .collect();
            csv(&["harmonic", "re", "im"], &rows)
        }
    })
}

#[derive(Args, Debug)]
pub struct TrajectoryArgs {
    #[command(flatten)]
    pub pulse: PulseArgs,
    /// Number of uniformly spaced times over one period, endpoints included.
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

pub fn trajectory(a: &TrajectoryArgs) -> CliResult<String> {
    let points = a.pulse.build()?.trajectory(a.samples)?;
    Ok(match a.format {
        Format::Json => json(&points),
        Format::Csv => {
            let rows: Vec<Vec<Cell>> = points
                .iter()
                .map(|p| vec![Cell::Num(p.t), Cell::Num(p.f_re), Cell::Num(p.f_im), Cell::Num(p.g)])
                .collect();
            csv(&["t", "f_re", "f_im", "g"], &rows)
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Reconciled,
    Printed,
    Oracle,
}

#[derive(Args, Debug)]
pub struct ZetaArgs {
    #[command(flatten)]
    pub pulse: PulseArgs,
    /// Number of ions N.
    #[arg(long, default_value_t = 2)]
    pub ions: usize,
    #[command(flatten)]
    pub rates: RateArgs,
    #[command(flatten)]
    pub bus: BusArgs,
    /// Analytic assembly, literal transcription, or brute-force projection.
    #[arg(long, value_enum, default_value_t = Variant::Reconciled)]
    pub variant: Variant,
    /// Time points of the brute-force quadrature (default 16m+1).
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

pub fn zeta(a: &ZetaArgs) -> CliResult<String> {
    let p = a.pulse.build()?;
    let rates = a.rates.build(harmonic_count(&p), p.omega())?;
    let z = match a.variant {
        Variant::Reconciled => assemble_zeta(&p, a.ions, &rates, &a.bus.moments()?)?,
        Variant::Printed => assemble_zeta_printed(&p, a.ions, &rates, &a.bus.moments()?)?,
        Variant::Oracle => {
            let points = a.points.unwrap_or_else(|| default_oracle_points(&p));
            zeta_oracle(&p, a.ions, &rates, &a.bus.state()?, points)?.zeta
        }
    };
    Ok(match a.format {
        Format::Json => {
            let mut s = z.to_json();
            s.push('\n');
            s
        }
        Format::Csv => {
            let rows: Vec<Vec<Cell>> = (0..5)
                .flat_map(|i| (0..5).map(move |j| (i, j)))
                .map(|(i, j)| {
                    let e = z.entries[(i, j)];
                    vec![Cell::Int(i), Cell::Int(j), Cell::Num(e.re), Cell::Num(e.im)]
                })
                .collect();
            csv(&["row", "col", "re", "im"], &rows)
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Vary {
    M,
    Ions,
    Nbar,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Swept quantity; only this one may be given as a list.
    #[arg(long, value_enum)]
    pub vary: Vary,
    /// Harmonic count(s): `a:b`, `a,b,c` or a single value.
    #[arg(long, default_value = "2")]
    pub m: String,
    /// Ion number(s), same syntax as --m.
    #[arg(long, default_value = "2")]
    pub ions: String,
    /// Thermal occupation(s) `a,b,c`; used with --bus thermal.
    #[arg(long, default_value = "0")]
    pub nbar: String,
    #[command(flatten)]
    pub rates: RateArgs,
    /// Bus state for the analytic map (ground, thermal or coherent).
    #[arg(long, value_enum, default_value_t = BusKind::Ground)]
    pub bus: BusKind,
    #[arg(long, default_value_t = 0.0)]
    pub alpha_re: f64,
    #[arg(long, default_value_t = 0.0)]
    pub alpha_im: f64,
    /// frobenius (default) or frobenius_sq.
    #[arg(long, default_value = "frobenius")]
    pub metric: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Serialize)]
struct SweepRow {
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    #[serde(serialize_with = "serialize_sig")]
    gamma_plus: f64,
    #[serde(serialize_with = "serialize_sig")]
    gamma_minus: f64,
    #[serde(serialize_with = "serialize_sig")]
    gamma_dephase: f64,
    #[serde(serialize_with = "serialize_sig")]
    nbar: f64,
    metric: String,
    #[serde(rename = "I_mono", serialize_with = "serialize_sig")]
    i_mono: f64,
    #[serde(rename = "I_poly", serialize_with = "serialize_sig")]
    i_poly: f64,
    #[serde(rename = "R", serialize_with = "serialize_sig")]
    r: f64,
}

fn single<T: Copy>(values: &[T], flag: &str) -> CliResult<T> {
    match values {
        [v] => Ok(*v),
        _ => usage(format!("--{flag} takes a single value unless it is the swept quantity")),
    }
}

fn list_arg<T>(parsed: Result<Vec<T>, String>, flag: &str) -> CliResult<Vec<T>> {
    parsed.map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

/// Rates are reported in units of ω (with ω = 1), after any δ-unit
/// conversion, so rows for different m are directly comparable.
pub fn sweep(a: &SweepArgs) -> CliResult<String> {
    let metric = parse_metric(&a.metric)?;
    let ms = list_arg(parse_int_list(&a.m), "m")?;
    let ns = list_arg(parse_int_list(&a.ions), "ions")?;
    let nbars = list_arg(parse_float_list(&a.nbar), "nbar")?;
    if a.vary == Vary::Nbar && a.bus != BusKind::Thermal {
        return usage("--vary nbar needs --bus thermal");
    }
    if a.bus == BusKind::Fock {
        return usage("sweep supports ground, thermal and coherent bus states");
    }
    let grid: Vec<(usize, usize, f64)> = match a.vary {
        Vary::M => {
            let (n, nb) = (single(&ns, "ions")?, single(&nbars, "nbar")?);
            ms.iter().map(|&m| (m, n, nb)).collect()
        }
        Vary::Ions => {
            let (m, nb) = (single(&ms, "m")?, single(&nbars, "nbar")?);
            ns.iter().map(|&n| (m, n, nb)).collect()
        }
        Vary::Nbar => {
            let (m, n) = (single(&ms, "m")?, single(&ns, "ions")?);
            nbars.iter().map(|&nb| (m, n, nb)).collect()
        }
    };
    let bus_for = |nbar: f64| {
        BusArgs {
            bus: a.bus,
            nbar,
            alpha_re: a.alpha_re,
            alpha_im: a.alpha_im,
            fock_level: 0,
        }
        .moments()
    };
    let mut rows = grid
        .par_iter()
        .map(|&(m, n, nbar)| -> CliResult<SweepRow> {
            let rates = a.rates.build(m, 1.0)?;
            let bus = bus_for(nbar)?;
            let imp = improvement(m, n, &rates, &bus, metric)?;
            Ok(SweepRow {
                m,
                n,
                gamma_plus: rates.gamma_plus,
                gamma_minus: rates.gamma_minus,
                gamma_dephase: rates.gamma_dephase,
                nbar: bus.n_mean,
                metric: metric.to_string(),
                i_mono: imp.i_mono,
                i_poly: imp.i_poly,
                r: imp.ratio,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    rows.sort_by(|x, y| {
        (x.m, x.n)
            .cmp(&(y.m, y.n))
            .then(x.nbar.total_cmp(&y.nbar))
    });
    Ok(match a.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let cells: Vec<Vec<Cell>> = rows
                .iter()
                .map(|r| {
                    vec![
                        Cell::Int(r.m),
                        Cell::Int(r.n),
                        Cell::Num(r.gamma_plus),
                        Cell::Num(r.gamma_minus),
                        Cell::Num(r.gamma_dephase),
                        Cell::Num(r.nbar),
                        Cell::Text(r.metric.clone()),
                        Cell::Num(r.i_mono),
                        Cell::Num(r.i_poly),
                        Cell::Num(r.r),
                    ]
                })
                .collect();
            csv(
                &["m", "N", "gamma_plus", "gamma_minus", "gamma_dephase", "nbar", "metric", "I_mono", "I_poly", "R"],
                &cells,
            )
        }
    })
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub pulse: PulseArgs,
    #[command(flatten)]
    pub rates: RateArgs,
    #[command(flatten)]
    pub bus: BusArgs,
    /// Number of qubits (1 to 4).
    #[arg(long, default_value_t = 2)]
    pub ions: usize,
    /// Initial computational basis state as a bit string, qubit 0 first
    /// (default all zeros).
    #[arg(long)]
    pub qubits: Option<String>,
    /// Fock cutoff (default 12 for the ground state, ceil(8 + 6 nbar)
    /// otherwise, and never below the bus state's own support).
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Runge-Kutta steps per period (default 200m).
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_LEAKAGE_THRESHOLD)]
    pub leakage_threshold: f64,
    /// Fail instead of enlarging the cutoff or step count when a validity
    /// check trips.
    #[arg(long)]
    pub no_retry: bool,
}

fn parse_bits(s: &str, n: usize) -> CliResult<usize> {
    if s.len() != n || !s.chars().all(|c| c == '0' || c == '1') {
        return usage(format!("--qubits must be a {n}-character bit string, got '{s}'"));
    }
    Ok(s.chars().fold(0, |acc, c| 2 * acc + usize::from(c == '1')))
}

#[derive(Serialize)]
struct SimulationDoc {
    pulse: polypulse::pulse::PulseJson,
    rates: EnvironmentRates,
    config: SimConfig,
    #[serde(serialize_with = "serialize_sig")]
    gate_fidelity: f64,
    #[serde(serialize_with = "serialize_sig_opt")]
    concurrence: Option<f64>,
    #[serde(serialize_with = "serialize_sig_opt")]
    eof: Option<f64>,
    #[serde(serialize_with = "serialize_sig")]
    leakage: f64,
    #[serde(serialize_with = "serialize_sig")]
    trace_drift: f64,
    #[serde(serialize_with = "serialize_sig")]
    min_eigenvalue: f64,
}

pub fn simulate(a: &SimulateArgs) -> CliResult<String> {
    let p = a.pulse.build()?;
    let m = harmonic_count(&p);
    let rates = a.rates.build(m, p.omega())?;
    let bits = match &a.qubits {
        Some(s) => parse_bits(s, a.ions)?,
        None => 0,
    };
    let bus = a.bus.state()?;
    let initial = QuantumState::basis_product(a.ions, bits, &bus)?;
    let n_mean = a.bus.moments()?.n_mean;
    let cutoff = a.cutoff.unwrap_or_else(|| default_cutoff(n_mean).max(bus.cutoff()));
    let steps = a.steps.unwrap_or(STEPS_PER_HARMONIC * m);
    let config = SimConfig::new(a.ions, cutoff, steps)?.with_leakage_threshold(a.leakage_threshold)?;
    let r = if a.no_retry {
        propagate(&initial, &p, &rates, &config)?
    } else {
        run_gate(&initial, &p, &rates, &config)?
    };
    Ok(json(&SimulationDoc {
        pulse: p.to_json_value(),
        rates,
        config: r.config,
        gate_fidelity: r.gate_fidelity,
        concurrence: r.concurrence,
        eof: r.eof,
        leakage: r.leakage,
        trace_drift: r.trace_drift,
        min_eigenvalue: r.min_eigenvalue,
    }))
}

#[derive(Args, Debug)]
pub struct CompareEofArgs {
    /// Harmonic counts, `a:b` or `a,b,c`.
    #[arg(long, default_value = "2:6")]
    pub m: String,
    /// Rates γ+ = γ- = γd in units of δ = mω, comma separated.
    #[arg(long, default_value = "0.001,0.01")]
    pub gamma: String,
    #[arg(long, default_value_t = DEFAULT_GROUND_CUTOFF)]
    pub cutoff: usize,
    /// Runge-Kutta steps per period and harmonic.
    #[arg(long, default_value_t = STEPS_PER_HARMONIC)]
    pub steps_per_harmonic: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Serialize)]
struct EofRow {
    m: usize,
    #[serde(serialize_with = "serialize_sig")]
    gamma_over_delta: f64,
    #[serde(rename = "E_mono", serialize_with = "serialize_sig")]
    e_mono: f64,
    #[serde(rename = "E_poly", serialize_with = "serialize_sig")]
    e_poly: f64,
    #[serde(rename = "R_E", serialize_with = "serialize_sig")]
    r_e: f64,
}

/// Two qubits start in `|00⟩` with the bus in its ground state.
pub fn compare_eof(a: &CompareEofArgs) -> CliResult<String> {
    let ms = list_arg(parse_int_list(&a.m), "m")?;
    let gammas = list_arg(parse_float_list(&a.gamma), "gamma")?;
    let grid: Vec<(usize, f64)> = gammas.iter().flat_map(|&g| ms.iter().map(move |&m| (m, g))).collect();
    let mut rows = grid
        .par_iter()
        .map(|&(m, g)| -> CliResult<EofRow> {
            let rates = EnvironmentRates::uniform(g * m as f64)?;
            let config = SimConfig::new(2, a.cutoff, a.steps_per_harmonic * m)?;
            let imp = improvement_re(m, &rates, &config)?;
            Ok(EofRow {
                m,
                gamma_over_delta: g,
                e_mono: imp.e_mono,
                e_poly: imp.e_poly,
                r_e: imp.ratio,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    rows.sort_by(|x, y| x.gamma_over_delta.total_cmp(&y.gamma_over_delta).then(x.m.cmp(&y.m)));
    Ok(match a.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let cells: Vec<Vec<Cell>> = rows
                .iter()
                .map(|r| {
                    vec![
                        Cell::Int(r.m),
                        Cell::Num(round_sig(r.gamma_over_delta)),
                        Cell::Num(r.e_mono),
                        Cell::Num(r.e_poly),
                        Cell::Num(r.r_e),
                    ]
                })
                .collect();
            csv(&["m", "gamma_over_delta", "E_mono", "E_poly", "R_E"], &cells)
        }
    })
}
