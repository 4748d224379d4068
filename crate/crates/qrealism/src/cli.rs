//! Command-line front end: figure data generation, grid sweeps, the
//! verification suite, and pulse-sequence checking.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error. CSV output
//! is byte-stable for fixed inputs and seed: fixed column order, scientific
//! notation with 12 significant digits, '.' decimal separator, LF line
//! endings.

use crate::format::sig12;
use crate::interferometer::{
    circuit_unitary, detection_probability, realism_inside, visibility,
    CircuitKind, CircuitParams, Stage, VISIBILITY_RESOLUTION,
};
use crate::pulse::{compile, equivalent_up_to_phase, parse_sequence, SequenceParams};
use crate::tomography::{monte_carlo_realism, NoiseModel};
use crate::verify::{run_all, VerifyOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Debug, Parser)]
#[command(
    name = "qrealism",
    version,
    about = "Quantum-controlled interferometer simulation: realism quantifiers, \
             complementarity bounds, pulse compilation, Monte Carlo error bars"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Wave/particle realism against visibility for both circuits (CSV).
    Figure2(Figure2Args),
    /// Detection-probability surface plus a visibility table (CSV).
    Figure3(Figure3Args),
    /// Realism, visibility and detection probability on a custom grid (CSV).
    Sweep(SweepArgs),
    /// Run the full invariant suite and print per-check margins.
    Verify(VerifyArgs),
    /// Pulse-sequence tools.
    Pulse(PulseArgs),
}

#[derive(Debug, Args)]
struct Figure2Args {
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Number of alpha grid points over [0, pi].
    #[arg(long)]
    points: Option<usize>,
    /// Tomography noise sigma; omitting it produces the ideal curves.
    #[arg(long)]
    noise: Option<f64>,
    /// Monte Carlo samples per point.
    #[arg(long)]
    samples: Option<usize>,
    /// Master seed for the noise draws.
    #[arg(long)]
    seed: Option<u64>,
    /// Optional key=value config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Figure3Args {
    /// Which circuit to sweep.
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Output CSV path; the visibility table lands next to it.
    #[arg(long)]
    out: PathBuf,
    /// Alpha grid points over [0, pi].
    #[arg(long)]
    alpha_points: Option<usize>,
    /// Theta grid points over [0, 2 pi).
    #[arg(long)]
    theta_points: Option<usize>,
    /// Optional key=value config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Which circuit to sweep.
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Comma-separated controller angles.
    #[arg(long, value_delimiter = ',')]
    alphas: Vec<f64>,
    /// Comma-separated phase-shifter angles.
    #[arg(long, value_delimiter = ',')]
    thetas: Vec<f64>,
    /// Angle unit for --alphas/--thetas.
    #[arg(long, value_enum)]
    unit: Option<UnitArg>,
    /// Tomography noise sigma; omitting it reports ideal values.
    #[arg(long)]
    noise: Option<f64>,
    /// Monte Carlo samples per point.
    #[arg(long)]
    samples: Option<usize>,
    /// Master seed for the noise draws.
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Optional key=value config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Random states per property sweep.
    #[arg(long)]
    states: Option<usize>,
    /// Seed of the random sweeps.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct PulseArgs {
    #[command(subcommand)]
    command: PulseCommand,
}

#[derive(Debug, Subcommand)]
enum PulseCommand {
    /// Compile a sequence file and check it against an ideal circuit.
    Compile(PulseCompileArgs),
}

#[derive(Debug, Args)]
struct PulseCompileArgs {
    /// Sequence file (ROT/FREE lines, optional J header, # comments).
    #[arg(long)]
    seq: PathBuf,
    /// Circuit whose protocol unitary is the comparison target.
    #[arg(long, value_enum)]
    check_against: KindArg,
    /// Controller angle bound to `alpha` in the file.
    #[arg(long)]
    alpha: f64,
    /// Phase-shifter angle bound to `theta` in the file.
    #[arg(long)]
    theta: f64,
    /// Angle unit for --alpha/--theta.
    #[arg(long, value_enum)]
    unit: Option<UnitArg>,
    /// Compare against the circuit truncated at this stage.
    #[arg(long, value_enum, default_value = "output")]
    stage: StageArg,
    /// Entrywise equivalence tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Qdce,
    Qcre,
}

impl From<KindArg> for CircuitKind {
    fn from(value: KindArg) -> Self {
        match value {
            KindArg::Qdce => CircuitKind::Qdce,
            KindArg::Qcre => CircuitKind::Qcre,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum UnitArg {
    Rad,
    Deg,
}

impl UnitArg {
    fn to_radians(self, value: f64) -> f64 {
        match self {
            UnitArg::Rad => value,
            UnitArg::Deg => value.to_radians(),
        }
    }
}

impl FromStr for UnitArg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "rad" => Ok(UnitArg::Rad),
            "deg" => Ok(UnitArg::Deg),
            other => Err(format!("unknown unit {other:?} (expected rad or deg)")),
        }
    }
}

#[derive(Debug)]
enum CliError {
    /// Bad input from the user: exit code 2.
    Usage(String),
    /// A check ran and failed: exit code 1.
    Verification(String),
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }
}

impl From<crate::Error> for CliError {
    fn from(error: crate::Error) -> Self {
        CliError::Usage(error.to_string())
    }
}

type CliResult = std::result::Result<(), CliError>;

/// Entry point used by the binary.
pub fn run() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    ExitCode::from(run_from(args))
}

/// Parses and executes; returns the process exit code.
pub fn run_from<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(error) => {
            let code = if error.use_stderr() { 2 } else { 0 };
            let _ = error.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Figure2(args) => cmd_figure2(args),
        Command::Figure3(args) => cmd_figure3(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Pulse(args) => match args.command {
            PulseCommand::Compile(args) => cmd_pulse_compile(args),
        },
    };
    match outcome {
        Ok(()) => 0,
        Err(CliError::Verification(message)) => {
            eprintln!("{message}");
            1
        }
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            2
        }
    }
}

/// key=value configuration with # comments; unknown keys are rejected.
fn load_config(path: Option<&Path>, allowed: &[&str]) -> std::result::Result<HashMap<String, String>, CliError> {
    let mut map = HashMap::new();
    let Some(path) = path else {
        return Ok(map);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::usage(format!(
                "config {}:{}: expected key=value",
                path.display(),
                idx + 1
            )));
        };
        let key = key.trim().to_string();
        if !allowed.contains(&key.as_str()) {
            return Err(CliError::usage(format!(
                "config {}:{}: unknown key {key:?} (allowed: {})",
                path.display(),
                idx + 1,
                allowed.join(", ")
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn config_value<T: FromStr>(
    config: &HashMap<String, String>,
    key: &str,
) -> std::result::Result<Option<T>, CliError> {
    match config.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|_| CliError::usage(format!("config key {key}={raw:?} does not parse"))),
    }
}

fn resolve_noise(
    sigma: Option<f64>,
    samples: Option<usize>,
    seed: Option<u64>,
) -> std::result::Result<Option<NoiseModel>, CliError> {
    match sigma {
        None => Ok(None),
        Some(sigma) => {
            let model = NoiseModel {
                sigma,
                samples: samples.unwrap_or(NoiseModel::default().samples),
                seed: seed.unwrap_or(NoiseModel::default().seed),
            };
            model.validate()?;
            Ok(Some(model))
        }
    }
}

fn write_output(path: &Path, contents: &str) -> CliResult {
    std::fs::write(path, contents)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

fn alpha_grid(points: usize) -> std::result::Result<Vec<f64>, CliError> {
    if points < 2 {
        return Err(CliError::usage("grid needs at least 2 points"));
    }
    Ok((0..points)
        .map(|i| std::f64::consts::PI * i as f64 / (points - 1) as f64)
        .collect())
}

fn cmd_figure2(args: Figure2Args) -> CliResult {
    let config = load_config(
        args.config.as_deref(),
        &["points", "noise", "samples", "seed"],
    )?;
    let points = match args.points {
        Some(p) => p,
        None => config_value(&config, "points")?.unwrap_or(33),
    };
    let sigma = match args.noise {
        Some(s) => Some(s),
        None => config_value(&config, "noise")?,
    };
    let samples = match args.samples {
        Some(s) => Some(s),
        None => config_value(&config, "samples")?,
    };
    let seed = match args.seed {
        Some(s) => Some(s),
        None => config_value(&config, "seed")?,
    };
    let noise = resolve_noise(sigma, samples, seed)?;

    let mut out = String::new();
    if noise.is_some() {
        out.push_str(
            "kind,visibility,wave_realism,particle_realism,wave_realism_std,particle_realism_std\n",
        );
    } else {
        out.push_str("kind,visibility,wave_realism,particle_realism\n");
    }
    for kind in [CircuitKind::Qdce, CircuitKind::Qcre] {
        for &alpha in &alpha_grid(points)? {
            let params = CircuitParams::new(alpha, 0.0)?;
            match &noise {
                None => {
                    let report = realism_inside(kind, params)?;
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        kind.name(),
                        sig12(report.visibility),
                        sig12(report.wave_realism),
                        sig12(report.particle_realism),
                    ));
                }
                Some(noise) => {
                    let report = monte_carlo_realism(kind, params, noise)?;
                    out.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        kind.name(),
                        sig12(report.visibility.mean),
                        sig12(report.wave_realism.mean),
                        sig12(report.particle_realism.mean),
                        sig12(report.wave_realism.std),
                        sig12(report.particle_realism.std),
                    ));
                }
            }
        }
    }
    write_output(&args.out, &out)
}

fn cmd_figure3(args: Figure3Args) -> CliResult {
    let config = load_config(args.config.as_deref(), &["alpha-points", "theta-points"])?;
    let alpha_points = match args.alpha_points {
        Some(p) => p,
        None => config_value(&config, "alpha-points")?.unwrap_or(33),
    };
    let theta_points = match args.theta_points {
        Some(p) => p,
        None => config_value(&config, "theta-points")?.unwrap_or(33),
    };
    if theta_points < 2 {
        return Err(CliError::usage("grid needs at least 2 points"));
    }
    let kind = CircuitKind::from(args.kind);

    let mut pattern = String::from("alpha,theta,p0\n");
    for &alpha in &alpha_grid(alpha_points)? {
        for j in 0..theta_points {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / theta_points as f64;
            let p0 = detection_probability(kind, CircuitParams::new(alpha, theta)?);
            out_row(&mut pattern, &[alpha, theta, p0]);
        }
    }
    write_output(&args.out, &pattern)?;

    let mut table = String::from("alpha,visibility\n");
    for &alpha in &alpha_grid(alpha_points)? {
        let v = visibility(kind, alpha, VISIBILITY_RESOLUTION)?;
        out_row(&mut table, &[alpha, v]);
    }
    write_output(&visibility_table_path(&args.out), &table)
}

/// fig3.csv -> fig3.visibility.csv next to the pattern surface.
pub fn visibility_table_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "figure3".to_string());
    out.with_file_name(format!("{stem}.visibility.csv"))
}

fn out_row(buffer: &mut String, values: &[f64]) {
    let formatted: Vec<String> = values.iter().map(|&v| sig12(v)).collect();
    buffer.push_str(&formatted.join(","));
    buffer.push('\n');
}

fn cmd_sweep(args: SweepArgs) -> CliResult {
    let config = load_config(
        args.config.as_deref(),
        &["unit", "noise", "samples", "seed"],
    )?;
    let unit = match args.unit {
        Some(u) => u,
        None => config_value::<UnitArg>(&config, "unit")?.unwrap_or(UnitArg::Rad),
    };
    let sigma = match args.noise {
        Some(s) => Some(s),
        None => config_value(&config, "noise")?,
    };
    let samples = match args.samples {
        Some(s) => Some(s),
        None => config_value(&config, "samples")?,
    };
    let seed = match args.seed {
        Some(s) => Some(s),
        None => config_value(&config, "seed")?,
    };
    let noise = resolve_noise(sigma, samples, seed)?;
    if args.alphas.is_empty() || args.thetas.is_empty() {
        return Err(CliError::usage("sweep needs nonempty --alphas and --thetas"));
    }
    let kind = CircuitKind::from(args.kind);
    let seed_column = noise.as_ref().map_or(0, |n| n.seed);
    let samples_column = noise.as_ref().map_or(1, |n| n.samples);

    let mut out = String::from("alpha,theta,quantity,mean,std,samples,seed\n");
    for &alpha_raw in &args.alphas {
        for &theta_raw in &args.thetas {
            let alpha = unit.to_radians(alpha_raw);
            let theta = unit.to_radians(theta_raw);
            let params = CircuitParams::new(alpha, theta)?;
            let rows: [(&str, f64, f64); 4] = match &noise {
                None => {
                    let report = realism_inside(kind, params)?;
                    let p0 = detection_probability(kind, params);
                    [
                        ("R_W", report.wave_realism, 0.0),
                        ("R_P", report.particle_realism, 0.0),
                        ("V", report.visibility, 0.0),
                        ("p0", p0, 0.0),
                    ]
                }
                Some(noise) => {
                    let report = monte_carlo_realism(kind, params, noise)?;
                    [
                        ("R_W", report.wave_realism.mean, report.wave_realism.std),
                        (
                            "R_P",
                            report.particle_realism.mean,
                            report.particle_realism.std,
                        ),
                        ("V", report.visibility.mean, report.visibility.std),
                        (
                            "p0",
                            report.detection_probability.mean,
                            report.detection_probability.std,
                        ),
                    ]
                }
            };
            for (quantity, mean, std) in rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    sig12(alpha),
                    sig12(theta),
                    quantity,
                    sig12(mean),
                    sig12(std),
                    samples_column,
                    seed_column,
                ));
            }
        }
    }
    write_output(&args.out, &out)
}

fn cmd_verify(args: VerifyArgs) -> CliResult {
    let mut options = VerifyOptions::default();
    if let Some(states) = args.states {
        if states == 0 {
            return Err(CliError::usage("--states must be at least 1"));
        }
        options.random_states = states;
    }
    if let Some(seed) = args.seed {
        options.seed = seed;
    }
    let results = run_all(&options);
    let mut failures = 0;
    for check in &results {
        let status = if check.passed { "PASS" } else { "FAIL" };
        println!(
            "{status} {:<45} margin {:+.3e} (tol {:.1e}) — {}",
            check.name, check.margin, check.tolerance, check.detail
        );
        if !check.passed {
            failures += 1;
        }
    }
    println!("{} checks, {} failed", results.len(), failures);
    if failures > 0 {
        return Err(CliError::Verification(format!(
            "{failures} verification check(s) failed"
        )));
    }
    Ok(())
}

fn cmd_pulse_compile(args: PulseCompileArgs) -> CliResult {
    let unit = args.unit.unwrap_or(UnitArg::Rad);
    let alpha = unit.to_radians(args.alpha);
    let theta = unit.to_radians(args.theta);
    let params = CircuitParams::new(alpha, theta)?;
    let text = std::fs::read_to_string(&args.seq)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", args.seq.display())))?;
    let sequence = parse_sequence(
        &text,
        &SequenceParams {
            alpha: Some(alpha),
            theta: Some(theta),
        },
    )?;
    let compiled = compile(&sequence)?;
    let kind = CircuitKind::from(args.check_against);
    let stage = match args.stage {
        StageArg::Inside => Stage::Inside,
        StageArg::Output => Stage::Output,
    };
    let ideal = circuit_unitary(kind, params, stage);
    let check = equivalent_up_to_phase(&compiled.unitary, &ideal, args.tol)?;

    println!(
        "sequence: {} ops, {} rotations, duration {:.6e} s",
        sequence.ops.len(),
        compiled.budget.rotation_count,
        compiled.budget.total_duration
    );
    println!(
        "target: {} {:?} stage at alpha={} theta={}",
        kind.name(),
        stage,
        sig12(alpha),
        sig12(theta)
    );
    println!(
        "equivalent up to phase: {} (phase {:+.6} rad, max deviation {:.3e}, tol {:.1e})",
        check.equal, check.phase, check.max_deviation, args.tol
    );
    if !check.equal {
        return Err(CliError::Verification(
            "compiled unitary is not equivalent to the ideal circuit".into(),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StageArg {
    Inside,
    Output,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn visibility_table_path_derivation() {
        assert_eq!(
            visibility_table_path(Path::new("/tmp/fig3.csv")),
            PathBuf::from("/tmp/fig3.visibility.csv")
        );
        assert_eq!(
            visibility_table_path(Path::new("surface")),
            PathBuf::from("surface.visibility.csv")
        );
    }

    #[test]
    fn config_parsing() {
        let dir = std::env::temp_dir().join("qrealism-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("config.txt");
        std::fs::write(&path, "# comment\nnoise = 0.02\nsamples=7\n").unwrap();
        let config = load_config(Some(&path), &["noise", "samples"]).unwrap();
        assert_eq!(config_value::<f64>(&config, "noise").unwrap(), Some(0.02));
        assert_eq!(config_value::<usize>(&config, "samples").unwrap(), Some(7));

        std::fs::write(&path, "bogus = 1\n").unwrap();
        assert!(load_config(Some(&path), &["noise"]).is_err());
        std::fs::write(&path, "no separator\n").unwrap();
        assert!(load_config(Some(&path), &["noise"]).is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_from(["qrealism", "bogus-subcommand"]), 2);
        assert_eq!(
            run_from(["qrealism", "figure3", "--kind", "nope", "--out", "/tmp/x.csv"]),
            2
        );
        // Unwritable output path.
        assert_eq!(
            run_from([
                "qrealism",
                "figure3",
                "--kind",
                "qdce",
                "--out",
                "/nonexistent-dir/x.csv",
                "--alpha-points",
                "3",
                "--theta-points",
                "4",
            ]),
            2
        );
    }
}
