//! Command-line front end: single-state analysis plus the seeded ensemble
//! sweeps behind the CSV datasets. All commands are deterministic functions
//! of (flags, seed); identical invocations produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use ndarray::{Array1, Array2};
use ndarray_linalg::c64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrowhead::mismatch_direct;
use crate::bounds::{self, delta_upper_bound};
use crate::circuits::{
    self, circuit_sigma2, random_circuit, AngleMode, Entangler, NoiseChannel, NoiseSpec,
};
use crate::distillation::{eigenstate_observable_rng, observable_error, random_normalized_observable_rng};
use crate::error::MismatchError;
use crate::states::{
    haar_random_pure_rng, mix, optimal_eta, random_density_rng, seeded_rng, DensityMatrix,
    PureState,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DIMENSION: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_INFEASIBLE: i32 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "mismatch",
    version,
    about = "Coherent-mismatch analysis of noisy density matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelArg {
    Dephasing,
    Depolarising,
    Damping,
    None,
}

impl From<ChannelArg> for NoiseChannel {
    fn from(v: ChannelArg) -> Self {
        match v {
            ChannelArg::Dephasing => NoiseChannel::Dephasing,
            ChannelArg::Depolarising => NoiseChannel::Depolarising,
            ChannelArg::Damping => NoiseChannel::Damping,
            ChannelArg::None => NoiseChannel::Noiseless,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AngleArg {
    Uniform,
    Linear,
    Constant,
}

impl From<AngleArg> for AngleMode {
    fn from(v: AngleArg) -> Self {
        match v {
            AngleArg::Uniform => AngleMode::Uniform,
            AngleArg::Linear => AngleMode::Linear,
            AngleArg::Constant => AngleMode::Constant,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EntanglerArg {
    Cnot,
    Xx,
}

impl From<EntanglerArg> for Entangler {
    fn from(v: EntanglerArg) -> Self {
        match v {
            EntanglerArg::Cnot => Entangler::Cnot,
            EntanglerArg::Xx => Entangler::Xx,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Analyze one (state, ideal-state) pair; JSON report on stdout.
    Analyze {
        /// Density matrix as JSON {dim, entries: [[re, im]; dim*dim]} row-major.
        #[arg(long)]
        state: PathBuf,
        /// Ideal pure state as JSON {dim, entries: [[re, im]; dim]}.
        #[arg(long)]
        ideal: PathBuf,
    },
    /// Observable-error dataset: random states and observables against the
    /// 2 sqrt(c) / 2c bounds.
    FigTrdist {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Dimension range MIN:MAX (inclusive).
        #[arg(long, default_value = "2:16")]
        dims: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Eigenvalue-ratio dataset: delta and its mismatch bound over two
    /// dimension classes.
    FigEigvals {
        #[arg(long, default_value_t = 50_000)]
        samples: usize,
        /// Small dimension class MIN:MAX.
        #[arg(long, default_value = "2:8")]
        dims: String,
        /// Large dimension class MIN:MAX.
        #[arg(long, default_value = "9:64")]
        dims_large: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Commutator-sandwich dataset: Delta, Delta_min and both bounds.
    FigCommutators {
        #[arg(long, default_value_t = 50_000)]
        samples: usize,
        #[arg(long, default_value = "2:64")]
        dims: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Noisy-circuit sigma^2 sweep over a xi grid against the f(xi) bounds.
    FigNoisemodel {
        /// Comma-separated qubit counts, e.g. 2,4,6.
        #[arg(long, default_value = "2,4,6")]
        qubits: String,
        #[arg(long, default_value_t = 200)]
        nu: usize,
        #[arg(long, value_enum, default_value_t = ChannelArg::Depolarising)]
        channel: ChannelArg,
        #[arg(long, value_enum, default_value_t = AngleArg::Uniform)]
        angles: AngleArg,
        #[arg(long, value_enum, default_value_t = EntanglerArg::Cnot)]
        entangler: EntanglerArg,
        /// Grid START:STOP:STEPS (linear, inclusive endpoints).
        #[arg(long, default_value = "0.1:2.0:8")]
        xi_grid: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Multiplier for the f(xi) comparison column.
        #[arg(long, default_value_t = 10.0)]
        bound_const: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
}

/// splitmix64; decorrelates per-sample seeds derived from one base seed.
fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Serialize, Deserialize)]
struct StateFile {
    dim: usize,
    /// Row-major complex entries as [re, im] pairs; dim entries for a pure
    /// state, dim*dim for a density matrix.
    entries: Vec<[f64; 2]>,
}

fn fail(code: i32, msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    code
}

fn error_code(e: &MismatchError) -> i32 {
    match e {
        MismatchError::DimensionMismatch { .. } => EXIT_DIMENSION,
        _ => EXIT_INFEASIBLE,
    }
}

fn read_state_file(path: &Path) -> std::result::Result<StateFile, i32> {
    let text = fs::read_to_string(path)
        .map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn parse_density(file: &StateFile) -> std::result::Result<DensityMatrix, i32> {
    let d = file.dim;
    if file.entries.len() != d * d {
        return Err(fail(
            EXIT_PARSE,
            format!("expected {} entries for a {d}x{d} matrix, got {}", d * d, file.entries.len()),
        ));
    }
    let m = Array2::from_shape_fn((d, d), |(i, j)| {
        let [re, im] = file.entries[i * d + j];
        c64::new(re, im)
    });
    DensityMatrix::new(m).map_err(|e| fail(error_code(&e), e))
}

fn parse_pure(file: &StateFile) -> std::result::Result<PureState, i32> {
    if file.entries.len() != file.dim {
        return Err(fail(
            EXIT_PARSE,
            format!("expected {} entries for a pure state, got {}", file.dim, file.entries.len()),
        ));
    }
    let v = Array1::from_iter(file.entries.iter().map(|&[re, im]| c64::new(re, im)));
    PureState::new(v).map_err(|e| fail(error_code(&e), e))
}

fn parse_range(s: &str) -> std::result::Result<(usize, usize), i32> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || fail(EXIT_PARSE, format!("range '{s}' is not MIN:MAX"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let lo: usize = parts[0].parse().map_err(|_| bad())?;
    let hi: usize = parts[1].parse().map_err(|_| bad())?;
    if lo < 2 || hi < lo {
        return Err(fail(EXIT_INFEASIBLE, format!("range '{s}' needs 2 <= MIN <= MAX")));
    }
    Ok((lo, hi))
}

fn parse_grid(s: &str) -> std::result::Result<Vec<f64>, i32> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || fail(EXIT_PARSE, format!("grid '{s}' is not START:STOP:STEPS"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].parse().map_err(|_| bad())?;
    let steps: usize = parts[2].parse().map_err(|_| bad())?;
    if steps == 0 || !(start >= 0.0) || stop < start {
        return Err(fail(EXIT_INFEASIBLE, format!("grid '{s}' needs 0 <= START <= STOP, STEPS >= 1")));
    }
    if steps == 1 {
        return Ok(vec![start]);
    }
    let h = (stop - start) / (steps - 1) as f64;
    Ok((0..steps).map(|k| start + h * k as f64).collect())
}

fn parse_qubit_list(s: &str) -> std::result::Result<Vec<usize>, i32> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| fail(EXIT_PARSE, format!("qubit list '{s}' is not comma-separated integers")))
}

/// One CSV/JSON table with '#'-prefixed metadata lines carrying the config.
struct Table {
    meta: Vec<(String, String)>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

impl Table {
    fn new(columns: Vec<&'static str>) -> Self {
        Self { meta: Vec::new(), columns, rows: Vec::new() }
    }

    fn meta(&mut self, key: &str, value: impl std::fmt::Display) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    fn write(&self, path: &Path, format: OutputFormat) -> std::result::Result<(), i32> {
        let body = match format {
            OutputFormat::Csv => {
                let mut out = String::new();
                for (k, v) in &self.meta {
                    let _ = writeln!(out, "# {k} = {v}");
                }
                let _ = writeln!(out, "{}", self.columns.join(","));
                for row in &self.rows {
                    let _ = writeln!(out, "{}", row.join(","));
                }
                out
            }
            OutputFormat::Json => {
                let meta: serde_json::Map<String, serde_json::Value> = self
                    .meta
                    .iter()
                    .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
                    .collect();
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        self.columns
                            .iter()
                            .zip(row.iter())
                            .map(|(c, v)| (c.to_string(), serde_json::Value::String(v.clone())))
                            .collect::<serde_json::Map<_, _>>()
                            .into()
                    })
                    .collect();
                let doc = serde_json::json!({ "meta": meta, "rows": rows });
                format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
            }
        };
        fs::write(path, body).map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))
    }
}

fn cmd_analyze(state: &Path, ideal: &Path) -> i32 {
    let rho = match read_state_file(state).and_then(|f| parse_density(&f)) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let psi = match read_state_file(ideal).and_then(|f| parse_pure(&f)) {
        Ok(v) => v,
        Err(code) => return code,
    };
    match bounds::bound_report(&rho, &psi) {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            EXIT_OK
        }
        Err(e) => fail(error_code(&e), e),
    }
}

/// Random (rho, psi_id) with a guaranteed non-degenerate dominant
/// eigenvalue: eta-mixture of a Haar pure state and a random density matrix.
/// `eta_log` switches the eta law from uniform [0.5, 1) to log-uniform
/// noise weight (small delta coverage for log-scale figures).
fn random_pair<R: Rng>(
    dim: usize,
    eta_log: bool,
    rng: &mut R,
) -> (DensityMatrix, PureState, f64) {
    let psi = haar_random_pure_rng(dim, rng).unwrap();
    let err = random_density_rng(dim, rng).unwrap();
    let eta = if eta_log {
        // Noise weight 1 - eta log-uniform on [1e-4, 0.5].
        let exponent = rng.gen_range(-4.0..0.5f64.log10());
        1.0 - 10f64.powf(exponent)
    } else {
        rng.gen_range(0.5..1.0)
    };
    (mix(eta, &psi, &err).unwrap(), psi, eta)
}

fn cmd_fig_trdist(
    samples: usize,
    dims: &str,
    seed: u64,
    out: &Path,
    format: OutputFormat,
) -> i32 {
    let (lo, hi) = match parse_range(dims) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let rows: Vec<(usize, Vec<String>)> = (0..samples)
        .into_par_iter()
        .map(|id| {
            let mut rng = seeded_rng(derive_seed(seed, id as u64));
            let dim = rng.gen_range(lo..=hi);
            // Retry until the dominant eigenvalue is clearly non-degenerate.
            let (psi, res) = loop {
                let (rho, psi, _) = random_pair(dim, false, &mut rng);
                if let Ok(res) = mismatch_direct(&rho, &psi) {
                    break (psi, res);
                }
            };
            let o_general = random_normalized_observable_rng(dim, &mut rng).unwrap();
            let o_eigen = eigenstate_observable_rng(&psi, &mut rng).unwrap();
            let err_general = observable_error(&res.dominant_vector, &psi, &o_general).unwrap();
            let err_eigen = observable_error(&res.dominant_vector, &psi, &o_eigen).unwrap();
            let c = res.c;
            let row = vec![
                id.to_string(),
                dim.to_string(),
                num(c),
                num(c.sqrt()),
                num(err_general),
                num(err_eigen),
                num(2.0 * c.sqrt()),
                num(2.0 * c),
            ];
            (id, row)
        })
        .collect();
    let mut table = Table::new(vec![
        "sample_id",
        "dim",
        "c",
        "sqrt_c",
        "obs_error_general",
        "obs_error_eigenstate",
        "bound_general",
        "bound_eigenstate",
    ]);
    table.meta("command", "fig-trdist");
    table.meta("samples", samples);
    table.meta("dims", dims);
    table.meta("seed", seed);
    table.meta("eta_law", "uniform[0.5,1)");
    finish(table, rows, out, format)
}

fn cmd_fig_eigvals(
    samples: usize,
    dims_small: &str,
    dims_large: &str,
    seed: u64,
    out: &Path,
    format: OutputFormat,
) -> i32 {
    let (slo, shi) = match parse_range(dims_small) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let (llo, lhi) = match parse_range(dims_large) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let rows: Vec<(usize, Vec<String>)> = (0..samples)
        .into_par_iter()
        .map(|id| {
            let mut rng = seeded_rng(derive_seed(seed, id as u64));
            let small = id % 2 == 0;
            let (lo, hi) = if small { (slo, shi) } else { (llo, lhi) };
            let dim = rng.gen_range(lo..=hi);
            let (c, eta, delta) = loop {
                let (rho, psi, _) = random_pair(dim, true, &mut rng);
                let res = match mismatch_direct(&rho, &psi) {
                    Ok(r) => r,
                    Err(_) => continue,
                };
                let dec = match optimal_eta(&rho, &psi) {
                    Ok(d) => d,
                    Err(_) => continue,
                };
                break (res.c, dec.eta, dec.delta);
            };
            let bound = if delta <= 1.0 {
                delta_upper_bound(delta).unwrap()
            } else {
                0.5
            };
            let row = vec![
                id.to_string(),
                (if small { "small" } else { "large" }).to_string(),
                dim.to_string(),
                num(eta),
                num(delta),
                num(c),
                num(bound),
            ];
            (id, row)
        })
        .collect();
    let mut table = Table::new(vec![
        "sample_id",
        "dim_class",
        "dim",
        "eta",
        "delta",
        "c",
        "delta_bound",
    ]);
    table.meta("command", "fig-eigvals");
    table.meta("samples", samples);
    table.meta("dims_small", dims_small);
    table.meta("dims_large", dims_large);
    table.meta("seed", seed);
    table.meta("eta_law", "1 - eta log-uniform on [1e-4, 0.5]");
    finish(table, rows, out, format)
}

fn cmd_fig_commutators(
    samples: usize,
    dims: &str,
    seed: u64,
    out: &Path,
    format: OutputFormat,
) -> i32 {
    let (lo, hi) = match parse_range(dims) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let rows: Vec<(usize, Vec<String>)> = (0..samples)
        .into_par_iter()
        .map(|id| {
            let mut rng = seeded_rng(derive_seed(seed, id as u64));
            let dim = rng.gen_range(lo..=hi);
            let (c, met) = loop {
                let (rho, psi, _) = random_pair(dim, false, &mut rng);
                let res = match mismatch_direct(&rho, &psi) {
                    Ok(r) => r,
                    Err(_) => continue,
                };
                if let Ok(m) = bounds::commutator_metrics(&rho, &psi) {
                    break (res.c, m);
                }
            };
            let row = vec![
                id.to_string(),
                dim.to_string(),
                num(met.delta_upper),
                num(met.delta_lower),
                num(c),
                num(bounds::commutator_upper_bound(&met)),
                num(bounds::commutator_lower_bound(&met)),
            ];
            (id, row)
        })
        .collect();
    let mut table = Table::new(vec![
        "sample_id",
        "dim",
        "Delta",
        "Delta_min",
        "c",
        "upper",
        "lower",
    ]);
    table.meta("command", "fig-commutators");
    table.meta("samples", samples);
    table.meta("dims", dims);
    table.meta("seed", seed);
    table.meta("eta_law", "uniform[0.5,1)");
    finish(table, rows, out, format)
}

#[allow(clippy::too_many_arguments)]
fn cmd_fig_noisemodel(
    qubits: &str,
    nu: usize,
    channel: ChannelArg,
    angles: AngleArg,
    entangler: EntanglerArg,
    xi_grid: &str,
    samples: usize,
    seed: u64,
    out: &Path,
    bound_const: f64,
    format: OutputFormat,
) -> i32 {
    let qubit_list = match parse_qubit_list(qubits) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let grid = match parse_grid(xi_grid) {
        Ok(v) => v,
        Err(code) => return code,
    };
    if qubit_list.iter().any(|&q| q < 2 || q > circuits::MAX_DENSITY_QUBITS) {
        return fail(
            EXIT_INFEASIBLE,
            format!("qubit counts must lie in 2..={}", circuits::MAX_DENSITY_QUBITS),
        );
    }
    if grid.iter().any(|&xi| xi >= nu as f64) {
        return fail(EXIT_INFEASIBLE, "xi grid must stay below nu");
    }
    let channel_name = format!("{channel:?}").to_lowercase();
    let angle_name = format!("{angles:?}").to_lowercase();
    let mut jobs = Vec::new();
    for &n in &qubit_list {
        for (gi, &xi) in grid.iter().enumerate() {
            for s in 0..samples {
                jobs.push((n, gi, xi, s));
            }
        }
    }
    let rows: Vec<(usize, Vec<String>)> = jobs
        .into_par_iter()
        .enumerate()
        .map(|(id, (n, _gi, xi, s))| {
            let sub = derive_seed(seed, id as u64);
            let mut spec =
                random_circuit(n, nu, angles.into(), entangler.into(), sub).unwrap();
            spec.noise = NoiseSpec::new(channel.into(), xi / nu as f64);
            let run = circuit_sigma2(&spec).unwrap();
            let row = vec![
                n.to_string(),
                channel_name.clone(),
                angle_name.clone(),
                num(xi),
                num(xi / nu as f64),
                s.to_string(),
                num(run.sigma2),
                num(run.f_exact),
                num(run.f_approx),
                num(xi * xi / 4.0),
                num(bound_const * run.f_exact),
            ];
            (id, row)
        })
        .collect();
    let mut table = Table::new(vec![
        "qubits",
        "channel",
        "angle_mode",
        "xi",
        "epsilon",
        "sample_id",
        "sigma2",
        "f_exact",
        "f_approx",
        "worst_case",
        "f_scaled",
    ]);
    table.meta("command", "fig-noisemodel");
    table.meta("qubits", qubits);
    table.meta("nu", nu);
    table.meta("channel", &channel_name);
    table.meta("angle_mode", &angle_name);
    table.meta("entangler", format!("{entangler:?}").to_lowercase());
    table.meta("xi_grid", xi_grid);
    table.meta("samples", samples);
    table.meta("seed", seed);
    table.meta("bound_const", bound_const);
    table.meta(
        "noise_placement",
        "channel after each gate on its targets; two-qubit budget split evenly (damping keeps full rate per qubit)",
    );
    finish(table, rows, out, format)
}

fn finish(
    mut table: Table,
    mut rows: Vec<(usize, Vec<String>)>,
    out: &Path,
    format: OutputFormat,
) -> i32 {
    rows.sort_by_key(|(id, _)| *id);
    table.rows = rows.into_iter().map(|(_, r)| r).collect();
    match table.write(out, format) {
        Ok(()) => EXIT_OK,
        Err(code) => code,
    }
}

/// Entry point shared by the binary and the CLI tests; returns the exit code.
pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Analyze { state, ideal } => cmd_analyze(&state, &ideal),
        Command::FigTrdist { samples, dims, seed, out, format } => {
            cmd_fig_trdist(samples, &dims, seed, &out, format)
        }
        Command::FigEigvals { samples, dims, dims_large, seed, out, format } => {
            cmd_fig_eigvals(samples, &dims, &dims_large, seed, &out, format)
        }
        Command::FigCommutators { samples, dims, seed, out, format } => {
            cmd_fig_commutators(samples, &dims, seed, &out, format)
        }
        Command::FigNoisemodel {
            qubits,
            nu,
            channel,
            angles,
            entangler,
            xi_grid,
            samples,
            seed,
            out,
            bound_const,
            format,
        } => cmd_fig_noisemodel(
            &qubits,
            nu,
            channel,
            angles,
            entangler,
            &xi_grid,
            samples,
            seed,
            &out,
            bound_const,
            format,
        ),
    }
}
