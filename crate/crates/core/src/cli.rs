//! Command-line front end behind the `frack` binary.
//!
//! Exit codes: 0 success, 1 verification failure, 2 argument error,
//! 3 ingestion error.

use crate::diffusion::{self, DiffusionQuery};
use crate::error::{FrackError, Result};
use crate::fractional::SampledFunction;
use crate::kinetic::{self, ForcingTerm, KineticProblem};
use crate::special::{mittag_leffler, MLParams};
use crate::table::SolutionTable;
use crate::verify::{self, Suite, VerifyConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_ARGUMENT: i32 = 2;
pub const EXIT_INGESTION: i32 = 3;

/// Fine-grid size used when the oracle column is requested.
pub const ORACLE_TARGET_POINTS: usize = 4096;
/// Trapezoid intervals for the normalization recorded in diffusion metadata.
pub const NORMALIZATION_INTERVALS: usize = 1000;

#[derive(Debug, Parser)]
#[command(name = "frack", version, about = "Fractional kinetic and diffusion equations: evaluation, solving, verification")]
pub struct Cli {
    /// Output format for tables and reports.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write the table to a file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the three-parameter Mittag-Leffler function E^γ_{α,β}(z).
    Ml(MlArgs),
    /// Solve the fractional kinetic equation N − N0 f = −c^ν I^ν N.
    Kinetic(KineticArgs),
    /// Tabulate the fractional diffusion Green's function.
    Diffusion(DiffusionArgs),
    /// Run an invariant suite and report PASS/FAIL per check.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct MlArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub gamma: f64,
    /// z, or the range z_min z_max.
    #[arg(long, num_args = 1..=2, required = true, allow_negative_numbers = true, value_names = ["Z_MIN", "Z_MAX"])]
    pub z: Vec<f64>,
    /// Number of grid intervals; the range yields steps + 1 rows.
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct KineticArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub nu: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub n0: f64,
    /// const | power:rho=R | prabhakar:mu=M,gamma=G | csv:PATH
    #[arg(long, default_value = "const")]
    pub forcing: String,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub t_max: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    /// Add the Volterra oracle and its absolute difference as columns.
    #[arg(long)]
    pub with_oracle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Realspace,
    Fourier,
    Both,
}

#[derive(Debug, Args)]
pub struct DiffusionArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub nu: f64,
    /// Diffusion constant c^ν.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, num_args = 2, default_values_t = [-5.0, 5.0], allow_negative_numbers = true, value_names = ["X_MIN", "X_MAX"])]
    pub x: Vec<f64>,
    /// Wavenumber range for the Fourier columns.
    #[arg(long, num_args = 2, default_values_t = [0.0, 4.0], allow_negative_numbers = true, value_names = ["K_MIN", "K_MAX"])]
    pub k: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Emit::Realspace)]
    pub emit: Emit,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// ml | hfun | kinetic | diffusion | transforms | all
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Seed for the randomized parameter draws.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Exit code for a library error.
pub fn exit_code(e: &FrackError) -> i32 {
    match e {
        FrackError::Ingestion(_) => EXIT_INGESTION,
        _ => EXIT_ARGUMENT,
    }
}

/// `steps + 1` equispaced points on [lo, hi]; a single point when lo == hi.
pub fn linear_grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(FrackError::invalid("grid bounds must be finite"));
    }
    if lo == hi {
        return Ok(vec![lo]);
    }
    if lo > hi {
        return Err(FrackError::invalid(format!("range must satisfy min < max, got {lo} > {hi}")));
    }
    if steps == 0 {
        return Err(FrackError::invalid("steps must be at least 1"));
    }
    Ok((0..=steps).map(|j| lo + (hi - lo) * j as f64 / steps as f64).collect())
}

pub fn cmd_ml(args: &MlArgs) -> Result<SolutionTable> {
    let params = MLParams::new(args.alpha, args.beta, args.gamma)?;
    let (lo, hi) = (args.z[0], *args.z.last().unwrap_or(&args.z[0]));
    let mut table = SolutionTable::new(["z"]);
    for z in linear_grid(lo, hi, args.steps)? {
        table.push(vec![z], mittag_leffler(params, z)?)?;
    }
    table.set_meta("alpha", args.alpha);
    table.set_meta("beta", args.beta);
    table.set_meta("gamma", args.gamma);
    Ok(table)
}

fn parse_positive(key: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw.trim().parse().map_err(|_| FrackError::invalid(format!("{key}={raw:?} is not a number")))?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(FrackError::invalid(format!("{key} must be positive, got {v}")));
    }
    Ok(v)
}

/// Parses `const`, `power:rho=R`, `prabhakar:mu=M,gamma=G` or `csv:PATH`.
pub fn parse_forcing(spec: &str) -> Result<ForcingTerm> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let pairs = || -> Result<Vec<(String, String)>> {
        rest.split(',')
            .map(|kv| {
                kv.split_once('=')
                    .map(|(k, v)| (k.trim().to_string(), v.to_string()))
                    .ok_or_else(|| FrackError::invalid(format!("expected key=value in forcing spec, got {kv:?}")))
            })
            .collect()
    };
    let lookup = |pairs: &[(String, String)], key: &str| -> Result<f64> {
        let (_, v) = pairs
            .iter()
            .find(|(k, _)| k == key)
            .ok_or_else(|| FrackError::invalid(format!("forcing spec {spec:?} lacks {key}")))?;
        parse_positive(key, v)
    };
    match kind {
        "const" if rest.is_empty() => Ok(ForcingTerm::Constant),
        "power" => {
            let p = pairs()?;
            if p.len() != 1 {
                return Err(FrackError::invalid("power forcing takes exactly rho"));
            }
            Ok(ForcingTerm::PowerLaw { rho: lookup(&p, "rho")? })
        }
        "prabhakar" => {
            let p = pairs()?;
            if p.len() != 2 {
                return Err(FrackError::invalid("prabhakar forcing takes exactly mu and gamma"));
            }
            Ok(ForcingTerm::PrabhakarML { mu: lookup(&p, "mu")?, gamma: lookup(&p, "gamma")? })
        }
        "csv" if !rest.is_empty() => {
            let file = std::fs::File::open(Path::new(rest))
                .map_err(|e| FrackError::Ingestion(format!("cannot open {rest}: {e}")))?;
            Ok(ForcingTerm::Sampled(read_forcing_csv(file)?))
        }
        _ => Err(FrackError::invalid(format!(
            "unknown forcing spec {spec:?} (const, power:rho=R, prabhakar:mu=M,gamma=G, csv:PATH)"
        ))),
    }
}

/// Reads two columns `t,f` (optional header): t strictly increasing from
/// t ≥ 0, every value finite.
pub fn read_forcing_csv<R: Read>(input: R) -> Result<SampledFunction> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(input);
    let (mut ts, mut fs) = (Vec::new(), Vec::new());
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| FrackError::Ingestion(format!("malformed CSV: {e}")))?;
        if record.len() != 2 {
            return Err(FrackError::Ingestion(format!("line {}: expected 2 columns, found {}", line + 1, record.len())));
        }
        let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
        let (t, f) = match parsed {
            (Ok(t), Ok(f)) => (t, f),
            _ if line == 0 => continue,
            _ => return Err(FrackError::Ingestion(format!("line {}: not a number pair", line + 1))),
        };
        if !(t.is_finite() && f.is_finite()) {
            return Err(FrackError::Ingestion(format!("line {}: non-finite value", line + 1)));
        }
        if ts.is_empty() && t < 0.0 {
            return Err(FrackError::Ingestion(format!("first t must be >= 0, got {t}")));
        }
        if ts.last().is_some_and(|&prev| t <= prev) {
            return Err(FrackError::Ingestion(format!("line {}: t not strictly increasing", line + 1)));
        }
        ts.push(t);
        fs.push(f);
    }
    if ts.len() < 2 {
        return Err(FrackError::Ingestion("need at least two samples".into()));
    }
    SampledFunction::new(ts, fs, 0.0).map_err(|e| FrackError::Ingestion(e.to_string()))
}

pub fn cmd_kinetic(args: &KineticArgs) -> Result<SolutionTable> {
    let problem = KineticProblem::new(args.nu, args.c, args.n0, parse_forcing(&args.forcing)?)?;
    if !(args.t_max > 0.0 && args.t_max.is_finite()) {
        return Err(FrackError::invalid(format!("t-max must be positive, got {}", args.t_max)));
    }
    let grid = linear_grid(0.0, args.t_max, args.steps)?;
    let closed = kinetic::solve_closed_form(&problem, &grid)?;
    if !args.with_oracle {
        return Ok(closed);
    }
    // oracle on a refinement of the output grid; output nodes are every r-th node
    let r = ORACLE_TARGET_POINTS.div_ceil(args.steps).max(1);
    let fine = linear_grid(0.0, args.t_max, args.steps * r)?;
    let oracle = kinetic::solve_oracle(&problem, &fine)?;
    let offset = fine.len() - oracle.len();
    let mut table = SolutionTable::new(["t"]).with_extras(["oracle", "abs_diff"]);
    table.metadata = closed.metadata.clone();
    let mut max_diff: f64 = 0.0;
    for row in &closed.rows {
        let t = row.coordinates[0];
        let j = (t / args.t_max * args.steps as f64).round() as usize * r;
        let o = oracle.rows[j - offset].value;
        let d = (row.value - o).abs();
        max_diff = max_diff.max(d);
        table.push_with_extras(vec![t], row.value, vec![o, d])?;
    }
    table.set_meta("oracle_points", fine.len());
    table.set_meta("max_abs_diff", max_diff);
    Ok(table)
}

pub fn cmd_diffusion(args: &DiffusionArgs) -> Result<SolutionTable> {
    DiffusionQuery::new(args.nu, args.c, 0.0, args.t)?;
    let xs = linear_grid(args.x[0], args.x[1], args.steps)?;
    let ks = linear_grid(args.k[0], args.k[1], args.steps)?;
    let fourier = |k: f64| diffusion::fourier_mode(args.nu, args.c, k, args.t);
    let mut table = match args.emit {
        Emit::Realspace => {
            let mut t = SolutionTable::new(["x"]);
            for (&x, g) in xs.iter().zip(diffusion::green_profile(args.nu, args.c, args.t, &xs)?) {
                t.push(vec![x], g)?;
            }
            t
        }
        Emit::Fourier => {
            let mut t = SolutionTable::new(["k"]);
            for &k in &ks {
                t.push(vec![k], fourier(k)?)?;
            }
            t
        }
        Emit::Both => {
            if xs.len() != ks.len() {
                return Err(FrackError::invalid("x and k ranges must both be ranges or both be points"));
            }
            let mut t = SolutionTable::new(["x"]).with_extras(["k", "fourier"]);
            for ((&x, g), &k) in xs.iter().zip(diffusion::green_profile(args.nu, args.c, args.t, &xs)?).zip(&ks) {
                t.push_with_extras(vec![x], g, vec![k, fourier(k)?])?;
            }
            t
        }
    };
    table.set_meta("nu", args.nu);
    table.set_meta("c_pow_nu", args.c);
    table.set_meta("t", args.t);
    if args.emit != Emit::Fourier {
        let norm = diffusion::normalization(args.nu, args.c, args.t, NORMALIZATION_INTERVALS)?;
        table.set_meta("normalization", norm.total);
        table.set_meta("normalization_tail", norm.tail);
    }
    Ok(table)
}

fn render(table: &SolutionTable, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv_string(),
        Format::Json => table.to_json_string() + "\n",
    }
}

fn emit(text: &str, output: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| FrackError::invalid(format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| FrackError::invalid(format!("cannot write output: {e}"))),
    }
}

fn cmd_verify(args: &VerifyArgs, cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let suite: Suite = args.suite.parse()?;
    let (mut config, warning) = VerifyConfig::from_env();
    if let Some(w) = warning {
        let _ = writeln!(stderr, "warning: {w}");
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let checks = verify::run_suite(suite, &config);
    let passed = checks.iter().filter(|c| c.passed).count();
    let text = match cli.format {
        Format::Csv => {
            let mut s: String = checks.iter().map(|c| format!("{c}\n")).collect();
            s += &format!("{passed}/{} checks passed\n", checks.len());
            s
        }
        Format::Json => serde_json::to_string_pretty(&checks).unwrap_or_default() + "\n",
    };
    emit(&text, cli.output.as_deref(), stdout)?;
    Ok(if passed == checks.len() { EXIT_SUCCESS } else { EXIT_VERIFICATION_FAILED })
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ARGUMENT } else { EXIT_SUCCESS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Verify(v) => cmd_verify(v, &cli, stdout, stderr),
        Command::Ml(a) => cmd_ml(a).and_then(|t| emit(&render(&t, cli.format), cli.output.as_deref(), stdout)).map(|_| 0),
        Command::Kinetic(a) => {
            cmd_kinetic(a).and_then(|t| emit(&render(&t, cli.format), cli.output.as_deref(), stdout)).map(|_| 0)
        }
        Command::Diffusion(a) => {
            cmd_diffusion(a).and_then(|t| emit(&render(&t, cli.format), cli.output.as_deref(), stdout)).map(|_| 0)
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("frack").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn forcing_grammar() {
        assert_eq!(parse_forcing("const").unwrap(), ForcingTerm::Constant);
        assert_eq!(parse_forcing("power:rho=1.5").unwrap(), ForcingTerm::PowerLaw { rho: 1.5 });
        assert_eq!(
            parse_forcing("prabhakar:gamma=2,mu=0.5").unwrap(),
            ForcingTerm::PrabhakarML { mu: 0.5, gamma: 2.0 }
        );
        for bad in ["power:rho=-1", "power:rho=x", "power", "prabhakar:mu=1", "const:x", "csv:", "sine"] {
            assert!(matches!(parse_forcing(bad), Err(FrackError::InvalidParameter(_))), "{bad}");
        }
        assert!(matches!(parse_forcing("csv:/nonexistent/f.csv"), Err(FrackError::Ingestion(_))));
    }

    #[test]
    fn csv_ingestion_rules() {
        let ok = read_forcing_csv("t,f\n0,1\n0.5,2\n1,3\n".as_bytes()).unwrap();
        assert_eq!(ok.values(), &[1.0, 2.0, 3.0]);
        assert!(read_forcing_csv("0,1\n1,2\n".as_bytes()).is_ok());
        for bad in ["0,1\n0,2\n", "0,1\n1,NaN\n", "-1,1\n0,1\n", "0,1\n", "0,1\n1,2,3\n", "0,1\nx,y\n"] {
            assert!(matches!(read_forcing_csv(bad.as_bytes()), Err(FrackError::Ingestion(_))), "{bad:?}");
        }
    }

    #[test]
    fn grids() {
        assert_eq!(linear_grid(-1.0, -1.0, 1).unwrap(), vec![-1.0]);
        assert_eq!(linear_grid(0.0, 1.0, 4).unwrap().len(), 5);
        assert!(linear_grid(1.0, 0.0, 4).is_err());
        assert!(linear_grid(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn ml_single_row() {
        let (code, out, _) = run_capture(&["ml", "--alpha", "1", "--beta", "1", "--gamma", "1", "--z", "-1", "-1", "--steps", "1"]);
        assert_eq!(code, 0);
        let t = SolutionTable::read_csv(out.as_bytes()).unwrap();
        assert_eq!(t.len(), 1);
        assert!((t.rows[0].value - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn argument_errors_exit_two() {
        assert_eq!(run_capture(&["ml", "--alpha", "0", "--z", "-1"]).0, 2);
        assert_eq!(run_capture(&["diffusion", "--nu", "2.5"]).0, 2);
        assert_eq!(run_capture(&["kinetic", "--nu", "0.5", "--forcing", "power:rho=-1"]).0, 2);
        assert_eq!(run_capture(&["bogus"]).0, 2);
        assert_eq!(run_capture(&["verify", "--suite", "nope"]).0, 2);
        let (code, _, err) = run_capture(&["ml", "--alpha", "0", "--z", "-1"]);
        assert_eq!(code, 2);
        assert!(err.contains("alpha"), "{err}");
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("kinetic"));
    }
}
