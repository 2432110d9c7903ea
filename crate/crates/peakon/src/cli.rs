//! File-based pipelines: configuration parsing, orchestration, and CSV/JSON
//! emission. Every command is a thin composition of library calls; no
//! numerical logic lives here.
//!
//! Input configurations are JSON objects
//! `{"peakons": [{"p": .., "q": ..}, ..], "kernel": {..}}` (the kernel block
//! is optional). Spectral data files carry
//! `{"eigenvalues": [..], "gammas": [..], "couplings": [..], "m": [..],
//! "l": [..]}` plus an optional `"exact"` block with `"num/den"` strings for
//! the rational pipeline. CSV floats are printed with 17 significant digits,
//! so outputs are byte-stable and parse back to the identical bits.

use crate::asymptotics::{phase_shifts, resolution_error};
use crate::dynamics::{integrate, IntegrateOptions};
use crate::error::{Error, Result};
use crate::flow::solve_conservative;
use crate::kernel::KernelParams;
use crate::moment::{invert_coefficients_exact, invert_spectral, invert_spectral_exact};
use crate::profile::{ConservativeState, PeakonConfig};
use crate::spectral::{forward_transform, string_coefficients};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Environment variable naming a key=value file with default options
/// (`tol`, `arithmetic`, `collision-gap`, `momentum-cap`).
pub const CONFIG_ENV: &str = "PEAKON_CONFIG";

/// Full round-trip decimal formatting: 17 significant digits, so golden CSV
/// files are bit-exact across platforms.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Simulate,
    Spectral,
    Invert,
    Evolve,
    Asymptotics,
    Compare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Arithmetic {
    #[default]
    Float,
    Rational,
}

impl FromStr for Arithmetic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "float" => Ok(Arithmetic::Float),
            "rational" => Ok(Arithmetic::Rational),
            other => Err(Error::BadInput(format!(
                "unknown arithmetic mode {other:?} (expected float or rational)"
            ))),
        }
    }
}

/// Sample grid `min:max:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.max - self.min) / self.step).round() as usize;
        (0..=n).map(|i| self.min + self.step * i as f64).collect()
    }
}

impl FromStr for Grid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::BadInput(format!(
                "grid must be min:max:step, got {s:?}"
            )));
        }
        let parse = |p: &str| {
            p.parse::<f64>()
                .map_err(|_| Error::BadInput(format!("bad grid component {p:?}")))
        };
        let grid = Grid {
            min: parse(parts[0])?,
            max: parse(parts[1])?,
            step: parse(parts[2])?,
        };
        if !(grid.step > 0.0) || !(grid.max > grid.min) {
            return Err(Error::BadInput(
                "grid bounds must be ordered and step positive".into(),
            ));
        }
        Ok(grid)
    }
}

/// Parsed run request: command, file paths, and numeric options.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub command: CommandKind,
    pub input: PathBuf,
    pub output: PathBuf,
    pub t_final: Option<f64>,
    pub times: Vec<f64>,
    pub grid: Option<Grid>,
    pub tol: f64,
    pub arithmetic: Arithmetic,
    pub kernel: Option<KernelParams>,
}

impl RunSpec {
    pub fn new(
        command: CommandKind,
        input: impl Into<PathBuf>,
        output: impl Into<PathBuf>,
    ) -> Self {
        RunSpec {
            command,
            input: input.into(),
            output: output.into(),
            t_final: None,
            times: Vec::new(),
            grid: None,
            tol: 1e-10,
            arithmetic: Arithmetic::Float,
            kernel: None,
        }
    }
}

// ---------------------------------------------------------------------------
// file schemas

#[derive(Debug, Serialize, Deserialize)]
struct PeakDto {
    p: f64,
    q: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct PeakonFile {
    peakons: Vec<PeakDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kernel: Option<KernelParams>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ExactDataDto {
    eigenvalues: Vec<String>,
    gammas: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SpectralFile {
    eigenvalues: Vec<f64>,
    gammas: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    couplings: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    l: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<ExactDataDto>,
}

#[derive(Debug, Serialize, Deserialize)]
struct AtomDto {
    x: f64,
    weight: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct StateDto {
    t: f64,
    peakons: Vec<PeakDto>,
    singular: Vec<AtomDto>,
    total_energy: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct StatesFile {
    states: Vec<StateDto>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CollisionDto {
    hankel_index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    time: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CollisionReport {
    collision: CollisionDto,
}

#[derive(Debug, Serialize, Deserialize)]
struct PhaseDto {
    lambda: f64,
    xi: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct PhaseFile {
    phase_shifts: Vec<PhaseDto>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ExactCoefficientsDto {
    m: Vec<String>,
    l: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct InvertOutput {
    peakons: Vec<PeakDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_coefficients: Option<ExactCoefficientsDto>,
}

fn read_peakon_file(path: &Path) -> Result<(PeakonConfig, Option<KernelParams>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::BadInput(format!("cannot read {}: {e}", path.display())))?;
    let file: PeakonFile = serde_json::from_str(&text)
        .map_err(|e| Error::BadInput(format!("{}: {e}", path.display())))?;
    let config = PeakonConfig::new(file.peakons.iter().map(|pk| (pk.p, pk.q)))?;
    Ok((config, file.kernel))
}

fn read_spectral_file(path: &Path) -> Result<SpectralFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::BadInput(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::BadInput(format!("{}: {e}", path.display())))
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let parse_int = |p: &str| {
        BigInt::from_str(p.trim())
            .map_err(|_| Error::BadInput(format!("bad rational component {p:?}")))
    };
    match s.split_once('/') {
        Some((num, den)) => {
            let d = parse_int(den)?;
            if d == BigInt::from(0) {
                return Err(Error::BadInput(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(num)?, d))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

fn write_string(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_string(path, &text)
}

fn with_suffix(base: &Path, suffix: &str) -> PathBuf {
    let stem = base.with_extension("");
    PathBuf::from(format!("{}.{suffix}", stem.display()))
}

fn state_dto(t: f64, state: &ConservativeState) -> StateDto {
    StateDto {
        t,
        peakons: state
            .peaks
            .peaks()
            .iter()
            .map(|pk| PeakDto { p: pk.p, q: pk.q })
            .collect(),
        singular: state
            .singular_energy
            .atoms()
            .iter()
            .map(|a| AtomDto {
                x: a.x,
                weight: a.w,
            })
            .collect(),
        total_energy: state.total_energy,
    }
}

fn requested_times(spec: &RunSpec) -> Result<Vec<f64>> {
    let mut times = spec.times.clone();
    if times.is_empty() {
        if let Some(t) = spec.t_final {
            times.push(t);
        }
    }
    if times.is_empty() {
        return Err(Error::BadInput(
            "no times requested: pass --times or --t-final".into(),
        ));
    }
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times.dedup();
    Ok(times)
}

// ---------------------------------------------------------------------------
// commands

fn run_simulate(spec: &RunSpec) -> Result<()> {
    let (config, file_kernel) = read_peakon_file(&spec.input)?;
    let kernel = spec
        .kernel
        .or(file_kernel)
        .unwrap_or_else(KernelParams::peakon);
    let t_final = spec
        .t_final
        .ok_or_else(|| Error::BadInput("simulate needs --t-final".into()))?;
    let options = IntegrateOptions {
        rtol: spec.tol,
        ..Default::default()
    };
    let traj = integrate(&kernel, &config, t_final, &options)?;

    let n = config.len();
    let mut csv = String::from("t");
    for i in 1..=n {
        let _ = write!(csv, ",q{i}");
    }
    for i in 1..=n {
        let _ = write!(csv, ",p{i}");
    }
    csv.push_str(",H\n");
    for (t, state) in traj.times.iter().zip(&traj.states) {
        csv.push_str(&fmt_f64(*t));
        for q in state.positions() {
            let _ = write!(csv, ",{}", fmt_f64(q));
        }
        for p in state.masses() {
            let _ = write!(csv, ",{}", fmt_f64(p));
        }
        let h = crate::kernel::cf_hamiltonian(&kernel, state)?;
        let _ = write!(csv, ",{}", fmt_f64(h));
        csv.push('\n');
    }
    write_string(&spec.output, &csv)?;
    for event in &traj.events {
        eprintln!(
            "simulate: collision of peaks {} and {} near t = {} (gap {:.3e}); trajectory truncated",
            event.indices.0, event.indices.1, event.time, event.gap
        );
    }
    Ok(())
}

fn run_spectral(spec: &RunSpec) -> Result<()> {
    let (config, _) = read_peakon_file(&spec.input)?;
    let data = forward_transform(&config)?;
    let (m, l) = string_coefficients(&config);
    write_json(
        &spec.output,
        &SpectralFile {
            eigenvalues: data.eigenvalues,
            gammas: data.gammas,
            couplings: Some(data.couplings),
            m: Some(m),
            l: Some(l),
            exact: None,
        },
    )
}

fn run_invert(spec: &RunSpec) -> Result<()> {
    let file = read_spectral_file(&spec.input)?;
    let result = match spec.arithmetic {
        Arithmetic::Float => invert_spectral(&file.eigenvalues, &file.gammas).map(|c| (c, None)),
        Arithmetic::Rational => {
            // exact strings when provided, otherwise the f64 values embedded
            // exactly (every finite double is a rational)
            let (sigma, gammas): (Vec<BigRational>, Vec<BigRational>) = match &file.exact {
                Some(exact) => (
                    exact
                        .eigenvalues
                        .iter()
                        .map(|s| parse_rational(s))
                        .collect::<Result<_>>()?,
                    exact
                        .gammas
                        .iter()
                        .map(|s| parse_rational(s))
                        .collect::<Result<_>>()?,
                ),
                None => (
                    file.eigenvalues
                        .iter()
                        .map(|&x| crate::moment::rational_from_f64(x))
                        .collect::<Result<_>>()?,
                    file.gammas
                        .iter()
                        .map(|&x| crate::moment::rational_from_f64(x))
                        .collect::<Result<_>>()?,
                ),
            };
            invert_spectral_exact(&sigma, &gammas).and_then(|c| {
                let coeffs = invert_coefficients_exact(&sigma, &gammas)?;
                Ok((
                    c,
                    Some(ExactCoefficientsDto {
                        m: coeffs.masses.iter().map(|r| r.to_string()).collect(),
                        l: coeffs.lengths.iter().map(|r| r.to_string()).collect(),
                    }),
                ))
            })
        }
    };
    match result {
        Ok((config, exact_coefficients)) => write_json(
            &spec.output,
            &InvertOutput {
                peakons: config
                    .peaks()
                    .iter()
                    .map(|pk| PeakDto { p: pk.p, q: pk.q })
                    .collect(),
                exact_coefficients,
            },
        ),
        Err(Error::Collision(signal)) => {
            write_json(
                &spec.output,
                &CollisionReport {
                    collision: CollisionDto {
                        hankel_index: signal.hankel_index,
                        time: signal.time,
                    },
                },
            )?;
            Err(Error::Collision(signal))
        }
        Err(e) => Err(e),
    }
}

fn run_evolve(spec: &RunSpec) -> Result<()> {
    let (config, _) = read_peakon_file(&spec.input)?;
    let times = requested_times(spec)?;
    let grid = spec.grid.unwrap_or(Grid {
        min: -20.0,
        max: 20.0,
        step: 0.01,
    });
    let mut states = Vec::with_capacity(times.len());
    for &t in &times {
        let state = match solve_conservative(&config, t) {
            Ok(s) => s,
            Err(Error::Collision(signal)) => {
                write_json(
                    &with_suffix(&spec.output, "collision.json"),
                    &CollisionReport {
                        collision: CollisionDto {
                            hankel_index: signal.hankel_index,
                            time: signal.time,
                        },
                    },
                )?;
                return Err(Error::Collision(signal));
            }
            Err(e) => return Err(e),
        };
        states.push((t, state));
    }

    let xs = grid.points();
    let mut csv = String::from("x");
    for (t, _) in &states {
        let _ = write!(csv, ",u@t={t}");
    }
    csv.push('\n');
    let profiles: Vec<Vec<f64>> = states
        .iter()
        .map(|(_, s)| s.peaks.eval_profile(&xs))
        .collect();
    for (i, &x) in xs.iter().enumerate() {
        csv.push_str(&fmt_f64(x));
        for profile in &profiles {
            let _ = write!(csv, ",{}", fmt_f64(profile[i]));
        }
        csv.push('\n');
    }
    write_string(&with_suffix(&spec.output, "profile.csv"), &csv)?;

    write_json(
        &with_suffix(&spec.output, "state.json"),
        &StatesFile {
            states: states.iter().map(|(t, s)| state_dto(*t, s)).collect(),
        },
    )
}

fn run_asymptotics(spec: &RunSpec) -> Result<()> {
    let (config, _) = read_peakon_file(&spec.input)?;
    let times = requested_times(spec)?;
    let data = forward_transform(&config)?;
    let shifts = phase_shifts(&data.eigenvalues, &data.couplings)?;
    write_json(
        &with_suffix(&spec.output, "phases.json"),
        &PhaseFile {
            phase_shifts: shifts
                .entries()
                .iter()
                .map(|e| PhaseDto {
                    lambda: e.lambda,
                    xi: e.xi,
                })
                .collect(),
        },
    )?;
    let mut csv = String::from("t,sup_error\n");
    for &t in &times {
        let err = resolution_error(&config, t)?;
        let _ = writeln!(csv, "{},{}", fmt_f64(t), fmt_f64(err));
    }
    write_string(&with_suffix(&spec.output, "errors.csv"), &csv)
}

fn run_compare(spec: &RunSpec) -> Result<()> {
    let (config, file_kernel) = read_peakon_file(&spec.input)?;
    if let Some(k) = spec.kernel.or(file_kernel) {
        if !k.is_peakon() {
            return Err(Error::BadInput(
                "compare requires the peakon kernel (the spectral route is peakon-specific)".into(),
            ));
        }
    }
    let times = requested_times(spec)?;
    let grid = spec.grid.unwrap_or(Grid {
        min: -20.0,
        max: 20.0,
        step: 0.05,
    });
    let t_max = *times.last().unwrap();
    let options = IntegrateOptions {
        rtol: spec.tol,
        sample_times: Some(times.clone()),
        ..Default::default()
    };
    let traj = integrate(&KernelParams::peakon(), &config, t_max, &options)?;
    let xs = grid.points();
    let mut csv = String::from("t,x,u_ode,u_spectral,abs_diff\n");
    let mut max_dev = 0.0f64;
    for &t in &times {
        let idx = traj
            .times
            .iter()
            .position(|&s| (s - t).abs() <= 1e-12 * t.abs().max(1.0))
            .ok_or_else(|| {
                Error::Dynamics(format!(
                    "ODE trajectory ended at t = {} before requested time {t} (collision?)",
                    traj.final_time()
                ))
            })?;
        let ode_state = &traj.states[idx];
        let spectral_state = solve_conservative(&config, t)?;
        for &x in &xs {
            let a = ode_state.eval_at(x);
            let b = spectral_state.eval_at(x);
            let d = (a - b).abs();
            if d > max_dev {
                max_dev = d;
            }
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                fmt_f64(t),
                fmt_f64(x),
                fmt_f64(a),
                fmt_f64(b),
                fmt_f64(d)
            );
        }
    }
    let _ = writeln!(csv, "max_deviation,,,,{}", fmt_f64(max_dev));
    write_string(&spec.output, &csv)
}

/// Executes a parsed run request. Writes the command's output files and
/// returns the first error encountered; the caller maps errors to exit codes
/// via [`Error::exit_code`] (2 bad input, 3 collision, 4 numerical failure).
pub fn run_command(spec: &RunSpec) -> Result<()> {
    if !(spec.tol > 0.0) {
        return Err(Error::BadInput("tolerance must be positive".into()));
    }
    if let Some(k) = &spec.kernel {
        k.validate()?;
    }
    match spec.command {
        CommandKind::Simulate => run_simulate(spec),
        CommandKind::Spectral => run_spectral(spec),
        CommandKind::Invert => run_invert(spec),
        CommandKind::Evolve => run_evolve(spec),
        CommandKind::Asymptotics => run_asymptotics(spec),
        CommandKind::Compare => run_compare(spec),
    }
}

/// Key=value defaults file named by [`CONFIG_ENV`]; flags override these.
#[derive(Debug, Clone, Default)]
pub struct FileDefaults {
    pub tol: Option<f64>,
    pub arithmetic: Option<Arithmetic>,
}

pub fn load_defaults() -> Result<FileDefaults> {
    let Some(path) = std::env::var_os(CONFIG_ENV) else {
        return Ok(FileDefaults::default());
    };
    let text = std::fs::read_to_string(&path).map_err(|e| {
        Error::BadInput(format!(
            "cannot read config file {}: {e}",
            Path::new(&path).display()
        ))
    })?;
    parse_defaults(&text)
}

fn parse_defaults(text: &str) -> Result<FileDefaults> {
    let mut defaults = FileDefaults::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::BadInput(format!(
                "config line {} is not key = value: {raw:?}",
                lineno + 1
            )));
        };
        match key.trim() {
            "tol" => {
                defaults.tol =
                    Some(value.trim().parse().map_err(|_| {
                        Error::BadInput(format!("bad tol value {:?}", value.trim()))
                    })?)
            }
            "arithmetic" => defaults.arithmetic = Some(value.trim().parse()?),
            other => {
                return Err(Error::BadInput(format!("unknown config key {other:?}")));
            }
        }
    }
    Ok(defaults)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn temp_dir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("peakon-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    fn write_config(dir: &Path, name: &str, pairs: &[(f64, f64)]) -> PathBuf {
        let path = dir.join(name);
        let file = PeakonFile {
            peakons: pairs.iter().map(|&(p, q)| PeakDto { p, q }).collect(),
            kernel: None,
        };
        write_json(&path, &file).unwrap();
        path
    }

    #[test]
    fn defaults_file_parsing() {
        let d = parse_defaults("# comment\ntol = 1e-8\narithmetic = rational  # inline\n").unwrap();
        assert_eq!(d.tol, Some(1e-8));
        assert_eq!(d.arithmetic, Some(Arithmetic::Rational));
        assert!(parse_defaults("bogus = 1").is_err());
        assert!(parse_defaults("just a line").is_err());
        assert!(parse_defaults("tol = fast").is_err());
    }

    #[test]
    fn grid_and_times_parsing() {
        let g: Grid = "-1:1:0.5".parse().unwrap();
        assert_eq!(g.points(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!("1:0:0.5".parse::<Grid>().is_err());
        assert!("1:2".parse::<Grid>().is_err());
        assert!(matches!(
            "rational".parse::<Arithmetic>(),
            Ok(Arithmetic::Rational)
        ));
        assert!("decimal".parse::<Arithmetic>().is_err());
    }

    #[test]
    fn fmt_round_trips() {
        for &x in &[0.1, 3.0, -2.5e-7, 1.0 / 3.0, 1e300] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn spectral_then_invert_round_trip() {
        let dir = temp_dir("roundtrip");
        let input = write_config(&dir, "config.json", &[(1.0, 0.0)]);
        let spec_out = dir.join("spectral.json");
        run_command(&RunSpec::new(CommandKind::Spectral, &input, &spec_out)).unwrap();

        let file = read_spectral_file(&spec_out).unwrap();
        assert_eq!(file.eigenvalues.len(), 1);
        assert!((file.eigenvalues[0] - 0.5).abs() < 1e-12);
        assert!((file.gammas[0] - 1.0).abs() < 1e-12);
        assert_eq!(file.m.as_ref().unwrap().len(), 1);
        assert!((file.m.as_ref().unwrap()[0] - 8.0).abs() < 1e-12);
        let l = file.l.as_ref().unwrap();
        assert!((l[0] - 0.5).abs() < 1e-12 && (l[1] - 0.5).abs() < 1e-12);

        let inv_out = dir.join("inverted.json");
        run_command(&RunSpec::new(CommandKind::Invert, &spec_out, &inv_out)).unwrap();
        let text = std::fs::read_to_string(&inv_out).unwrap();
        let back: InvertOutput = serde_json::from_str(&text).unwrap();
        assert!((back.peakons[0].p - 1.0).abs() < 1e-9);
        assert!(back.peakons[0].q.abs() < 1e-9);
    }

    #[test]
    fn invert_rational_mode_emits_exact_coefficients() {
        let dir = temp_dir("rational");
        let path = dir.join("data.json");
        write_json(
            &path,
            &SpectralFile {
                eigenvalues: vec![0.5],
                gammas: vec![1.0],
                couplings: None,
                m: None,
                l: None,
                exact: Some(ExactDataDto {
                    eigenvalues: vec!["1/2".into()],
                    gammas: vec!["1".into()],
                }),
            },
        )
        .unwrap();
        let out = dir.join("out.json");
        let mut spec = RunSpec::new(CommandKind::Invert, &path, &out);
        spec.arithmetic = Arithmetic::Rational;
        run_command(&spec).unwrap();
        let text = std::fs::read_to_string(&out).unwrap();
        let parsed: InvertOutput = serde_json::from_str(&text).unwrap();
        let exact = parsed.exact_coefficients.unwrap();
        assert_eq!(exact.m, vec!["8"]);
        assert_eq!(exact.l, vec!["1/2", "1/2"]);
    }

    #[test]
    fn evolve_profile_peaks_at_translated_position() {
        let dir = temp_dir("evolve");
        let input = write_config(&dir, "one.json", &[(1.0, 0.0)]);
        let out = dir.join("run");
        let mut spec = RunSpec::new(CommandKind::Evolve, &input, &out);
        spec.times = vec![3.0];
        spec.grid = Some("-10:10:0.01".parse().unwrap());
        run_command(&spec).unwrap();

        let csv = std::fs::read_to_string(with_suffix(&out, "profile.csv")).unwrap();
        let mut best = (f64::MIN, 0.0);
        for line in csv.lines().skip(1) {
            let mut cols = line.split(',');
            let x: f64 = cols.next().unwrap().parse().unwrap();
            let u: f64 = cols.next().unwrap().parse().unwrap();
            if u > best.0 {
                best = (u, x);
            }
        }
        assert!(
            (best.1 - 3.0).abs() < 1e-6,
            "argmax at {} (u = {})",
            best.1,
            best.0
        );

        let states: StatesFile = serde_json::from_str(
            &std::fs::read_to_string(with_suffix(&out, "state.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(states.states.len(), 1);
        assert!((states.states[0].peakons[0].q - 3.0).abs() < 1e-9);
        assert!(states.states[0].singular.is_empty());
    }

    #[test]
    fn simulate_writes_trajectory_csv() {
        let dir = temp_dir("simulate");
        let input = write_config(&dir, "cfg.json", &[(1.0, -2.0), (2.0, 2.0)]);
        let out = dir.join("traj.csv");
        let mut spec = RunSpec::new(CommandKind::Simulate, &input, &out);
        spec.t_final = Some(1.0);
        run_command(&spec).unwrap();
        let csv = std::fs::read_to_string(&out).unwrap();
        let header = csv.lines().next().unwrap();
        assert_eq!(header, "t,q1,q2,p1,p2,H");
        let first: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(first[0].parse::<f64>().unwrap(), 0.0);
        // H column stays constant to high accuracy between first and last row
        let h0: f64 = first[5].parse().unwrap();
        let last: Vec<&str> = csv.lines().last().unwrap().split(',').collect();
        let h1: f64 = last[5].parse().unwrap();
        assert!((h0 - h1).abs() < 1e-9 * h0.abs());
    }

    #[test]
    fn compare_reports_max_deviation_footer() {
        let dir = temp_dir("compare");
        let input = write_config(&dir, "cfg.json", &[(1.0, -1.0), (0.5, 1.0)]);
        let out = dir.join("cmp.csv");
        let mut spec = RunSpec::new(CommandKind::Compare, &input, &out);
        spec.times = vec![2.0];
        spec.grid = Some("-8:12:0.1".parse().unwrap());
        run_command(&spec).unwrap();
        let csv = std::fs::read_to_string(&out).unwrap();
        let footer = csv.lines().last().unwrap();
        assert!(footer.starts_with("max_deviation,,,,"));
        let dev: f64 = footer.rsplit(',').next().unwrap().parse().unwrap();
        assert!(dev < 1e-7, "ODE vs spectral deviation {dev}");
    }

    #[test]
    fn asymptotics_outputs_phases_and_errors() {
        let dir = temp_dir("asym");
        let input = write_config(&dir, "cfg.json", &[(1.0, 0.4)]);
        let out = dir.join("asym");
        let mut spec = RunSpec::new(CommandKind::Asymptotics, &input, &out);
        spec.times = vec![5.0, 10.0];
        run_command(&spec).unwrap();
        let phases: PhaseFile = serde_json::from_str(
            &std::fs::read_to_string(with_suffix(&out, "phases.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(phases.phase_shifts.len(), 1);
        assert!((phases.phase_shifts[0].xi + 0.4).abs() < 1e-10);
        let csv = std::fs::read_to_string(with_suffix(&out, "errors.csv")).unwrap();
        assert_eq!(csv.lines().count(), 3);
        for line in csv.lines().skip(1) {
            let err: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
            assert!(err < 1e-12, "single peakon resolves exactly: {err}");
        }
    }

    #[test]
    fn byte_stable_outputs() {
        let dir = temp_dir("stable");
        let input = write_config(&dir, "cfg.json", &[(0.9, -1.0), (1.7, 1.2)]);
        let out1 = dir.join("a.json");
        let out2 = dir.join("b.json");
        run_command(&RunSpec::new(CommandKind::Spectral, &input, &out1)).unwrap();
        run_command(&RunSpec::new(CommandKind::Spectral, &input, &out2)).unwrap();
        assert_eq!(std::fs::read(&out1).unwrap(), std::fs::read(&out2).unwrap());
    }

    #[test]
    fn collision_at_requested_time_reports_and_errors() {
        let dir = temp_dir("collide");
        // non-symmetric antipeakon pair at its blow-up instant
        let input = write_config(&dir, "cfg.json", &[(2.0, -1.0), (-1.0, 1.0)]);
        let tx = crate::dynamics::two_peakon_blowup_time(
            &PeakonConfig::new([(2.0, -1.0), (-1.0, 1.0)]).unwrap(),
        )
        .unwrap()
        .unwrap();
        let out = dir.join("evolved");
        let mut spec = RunSpec::new(CommandKind::Evolve, &input, &out);
        spec.times = vec![tx];
        spec.grid = Some("-5:5:0.5".parse().unwrap());
        let err = run_command(&spec).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let report: CollisionReport = serde_json::from_str(
            &std::fs::read_to_string(with_suffix(&out, "collision.json")).unwrap(),
        )
        .unwrap();
        assert!((report.collision.time.unwrap() - tx).abs() < 1e-6);
    }

    #[test]
    fn bad_input_maps_to_exit_two() {
        let dir = temp_dir("bad");
        let path = dir.join("nope.json");
        let err = run_command(&RunSpec::new(
            CommandKind::Spectral,
            &path,
            dir.join("o.json"),
        ))
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
        // unordered positions
        std::fs::write(
            &path,
            r#"{"peakons": [{"p": 1.0, "q": 1.0}, {"p": 1.0, "q": 0.0}]}"#,
        )
        .unwrap();
        let err = run_command(&RunSpec::new(
            CommandKind::Spectral,
            &path,
            dir.join("o.json"),
        ))
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
