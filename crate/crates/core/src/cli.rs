//! `whichpath` command-line front end.
//!
//! Exit status: 0 all checks pass, 1 an inequality violation was found,
//! 2 usage error, 3 input-data error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::Error;
use crate::experiment::{self, ErasureSign, Marker, Scenario};
use crate::linalg::{ComplexMatrix, Tolerance, C64};
use crate::operators::{bell_phi_plus, PauliAxis};
use crate::states::{
    bloch, intersubsystem_relation, moment_table, single_qubit_relation, DensityOperator,
    UncertaintyReport,
};
use crate::sweep::{self, SweepSummary};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

pub const FRINGE_HEADER: &str = "phi,p0";
pub const ERASE_HEADER: &str = "phi,p0,p_select";
pub const VERIFY_HEADER: &str = "relation,dim,samples,min_margin,mean_margin,violations";
pub const MOMENT_HEADER: &str = "quantity,j,k,value";

#[derive(Debug, Parser)]
#[command(
    name = "whichpath",
    version,
    about = "Which-path marking, erasure and uncertainty-relation checks for two-level systems"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Seed of the sample generator
    #[arg(long, global = true, default_value_t = sweep::DEFAULT_SEED)]
    pub seed: u64,
    /// Samples per sweep family
    #[arg(long, global = true, default_value_t = sweep::DEFAULT_SAMPLES, value_parser = parse_positive_count)]
    pub samples: usize,
    /// Violation threshold and validation tolerance
    #[arg(long, global = true, default_value = "1e-9", value_parser = parse_tolerance, allow_hyphen_values = true)]
    pub tol: f64,
    /// Number of phase grid points over [0, 2π)
    #[arg(long, global = true, default_value_t = experiment::DEFAULT_GRID, value_parser = parse_grid)]
    pub grid: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Run the seeded inequality sweeps
    Verify,
    /// Moments and inter-subsystem relations of the Bell state Φ+
    Bell,
    /// Screen probability scan for a marking scenario
    Fringes {
        /// none, cnot or partial=THETA (radians)
        #[arg(long, default_value = "none", value_parser = parse_marker)]
        marker: Marker,
    },
    /// Conditional fringes after post-selecting the marker
    Erase {
        /// + or -
        #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
        sign: ErasureSign,
        #[arg(long, value_enum, default_value_t = EraseMode::Pair)]
        mode: EraseMode,
    },
    /// Moments and relations of a state read from a JSON file
    State { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EraseMode {
    Pair,
    Triple,
}

fn parse_positive_count(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("expected a positive integer, got '{s}'")),
    }
}

fn parse_grid(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= experiment::MIN_GRID => Ok(n),
        _ => Err(format!(
            "expected an integer >= {}, got '{s}'",
            experiment::MIN_GRID
        )),
    }
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    s.parse::<f64>()
        .ok()
        .and_then(|x| Tolerance::new(x).ok())
        .map(Tolerance::eps)
        .ok_or_else(|| format!("expected a positive finite number, got '{s}'"))
}

fn parse_marker(s: &str) -> Result<Marker, String> {
    match s {
        "none" => Ok(Marker::None),
        "cnot" => Ok(Marker::Cnot),
        _ => {
            let theta = s
                .strip_prefix("partial=")
                .ok_or_else(|| format!("expected none, cnot or partial=THETA, got '{s}'"))?;
            match theta.parse::<f64>() {
                Ok(t) if t.is_finite() => Ok(Marker::Partial(t)),
                _ => Err(format!("malformed marker angle '{theta}'")),
            }
        }
    }
}

fn parse_sign(s: &str) -> Result<ErasureSign, String> {
    match s {
        "+" | "plus" => Ok(ErasureSign::Plus),
        "-" | "minus" => Ok(ErasureSign::Minus),
        _ => Err(format!("expected + or -, got '{s}'")),
    }
}

/// Shortest decimal that round-trips to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    let s = format!("{x:?}");
    match s.strip_suffix(".0") {
        Some(trimmed) => trimmed.to_string(),
        None => s,
    }
}

/// JSON state file: `{"dim": n, "re": [[...]], "im": [[...]]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl StateFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let rows = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..n)
                .map(|r| (0..n).map(|c| f(&m[(r, c)])).collect())
                .collect()
        };
        Self {
            dim: n,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn to_density(&self, tol: Tolerance) -> Result<DensityOperator, String> {
        let n = self.dim;
        if n != 2 && n != 4 {
            return Err(format!("state files must have dim 2 or 4, got {n}"));
        }
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(format!("re and im must both be {n}x{n} arrays"));
        }
        let data = (0..n * n)
            .map(|i| C64::new(self.re[i / n][i % n], self.im[i / n][i % n]))
            .collect();
        let m = ComplexMatrix::from_row_major(n, data).map_err(|e| e.to_string())?;
        DensityOperator::new(m, tol).map_err(|e| format!("invalid state: {e}"))
    }
}

struct Outcome {
    body: String,
    status: i32,
}

enum Failure {
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e.to_string())
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// the report. Returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return status;
        }
    };
    let common = &cli.common;
    let (body, status) = match execute(&cli) {
        Ok(o) => (o.body, o.status),
        Err(Failure::Data(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            let body = match common.format {
                Format::Csv => format!("error,{}\n", msg.replace(',', ";")),
                Format::Json => format!("{}\n", json!({ "error": msg })),
            };
            (body, EXIT_DATA)
        }
    };
    let written = match &common.out {
        Some(path) => std::fs::write(path, body.as_bytes()),
        None => stdout.write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write report: {e}");
        return EXIT_DATA;
    }
    status
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let common = &cli.common;
    let tol = Tolerance::new(common.tol)?;
    match &cli.command {
        Command::Verify => cmd_verify(common, tol),
        Command::Bell => {
            let rho = DensityOperator::from_pure(&bell_phi_plus(), tol)?;
            state_report(&rho, common.format)
        }
        Command::Fringes { marker } => cmd_fringes(common, *marker),
        Command::Erase { sign, mode } => cmd_erase(common, *sign, *mode),
        Command::State { path } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Data(format!("cannot read {}: {e}", path.display())))?;
            let file: StateFile = serde_json::from_str(&text)
                .map_err(|e| Failure::Data(format!("cannot parse {}: {e}", path.display())))?;
            let rho = file.to_density(tol).map_err(Failure::Data)?;
            state_report(&rho, common.format)
        }
    }
}

fn cmd_verify(common: &CommonArgs, tol: Tolerance) -> Result<Outcome, Failure> {
    let rows = sweep::verify_all(common.seed, common.samples, tol)?;
    let violations: usize = rows.iter().map(|r| r.violations).sum();
    let body = match common.format {
        Format::Csv => {
            let mut out = format!(
                "# seed={} tol={}\n{VERIFY_HEADER}\n",
                common.seed,
                fmt_f64(common.tol)
            );
            for line in verify_csv_rows(&rows) {
                out.push_str(&line);
                out.push('\n');
            }
            out
        }
        Format::Json => json_line(&json!({
            "seed": common.seed,
            "tol": common.tol,
            "rows": rows,
        })),
    };
    Ok(Outcome {
        body,
        status: if violations > 0 {
            EXIT_VIOLATION
        } else {
            EXIT_OK
        },
    })
}

fn json_line(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct LabeledReport {
    j: PauliAxis,
    k: PauliAxis,
    #[serde(flatten)]
    report: UncertaintyReport,
}

fn state_report(rho: &DensityOperator, format: Format) -> Result<Outcome, Failure> {
    let mut rows: Vec<(String, &'static str, &'static str, f64)> = Vec::new();
    let mut reports = Vec::new();
    let axis_label = |a: PauliAxis| a.label();
    let moments_json = match rho.dim() {
        2 => {
            let b = bloch(rho)?;
            for axis in PauliAxis::XYZ {
                rows.push(("bloch".into(), axis_label(axis), "", b.component(axis)));
            }
            for (j, k) in [
                (PauliAxis::X, PauliAxis::Y),
                (PauliAxis::Y, PauliAxis::Z),
                (PauliAxis::Z, PauliAxis::X),
            ] {
                reports.push(LabeledReport {
                    j,
                    k,
                    report: single_qubit_relation(rho, j, k)?,
                });
            }
            json!({ "bloch": b })
        }
        4 => {
            let t = moment_table(rho)?;
            for (name, b) in [("bloch1", &t.bloch1), ("bloch2", &t.bloch2)] {
                for axis in PauliAxis::XYZ {
                    rows.push((name.into(), axis_label(axis), "", b.component(axis)));
                }
            }
            for (name, table) in [("K", &t.k), ("M", &t.m)] {
                for (a, &j) in PauliAxis::XYZ.iter().enumerate() {
                    for (b, &k) in PauliAxis::XYZ.iter().enumerate() {
                        rows.push((name.into(), axis_label(j), axis_label(k), table[a][b]));
                    }
                }
            }
            for j in PauliAxis::XYZ {
                for k in PauliAxis::XYZ {
                    reports.push(LabeledReport {
                        j,
                        k,
                        report: intersubsystem_relation(rho, j, k)?,
                    });
                }
            }
            serde_json::to_value(&t).expect("serializable")
        }
        other => return Err(Failure::Data(format!("no moment report for dim {other}"))),
    };
    for r in &reports {
        let (j, k) = (axis_label(r.j), axis_label(r.k));
        rows.push(("lhs".into(), j, k, r.report.lhs));
        rows.push(("commutator_term".into(), j, k, r.report.commutator_term));
        rows.push(("covariance_term".into(), j, k, r.report.covariance_term));
        rows.push(("margin".into(), j, k, r.report.margin));
    }
    let tol = rho.tolerance().eps();
    let violated = reports.iter().any(|r| r.report.margin < -tol);
    let body = match format {
        Format::Csv => {
            let mut out = format!("{MOMENT_HEADER}\n");
            for (q, j, k, v) in rows {
                let _ = writeln!(out, "{q},{j},{k},{}", fmt_f64(v));
            }
            out
        }
        Format::Json => json_line(&json!({
            "dim": rho.dim(),
            "moments": moments_json,
            "relations": reports,
        })),
    };
    Ok(Outcome {
        body,
        status: if violated { EXIT_VIOLATION } else { EXIT_OK },
    })
}

fn cmd_fringes(common: &CommonArgs, marker: Marker) -> Result<Outcome, Failure> {
    let scenario = Scenario::new(marker, common.grid)?;
    let scan = experiment::fringe_scan(&scenario)?;
    let d = experiment::duality(&scenario)?;
    let body = match common.format {
        Format::Csv => {
            let mut out = format!("# marker={marker} grid={}\n{FRINGE_HEADER}\n", common.grid);
            for (phi, p) in scan.phases.iter().zip(&scan.p0) {
                let _ = writeln!(out, "{},{}", fmt_f64(phi.radians()), fmt_f64(*p));
            }
            let _ = writeln!(
                out,
                "# visibility={},distinguishability={},duality_sum={}",
                fmt_f64(d.visibility),
                fmt_f64(d.distinguishability),
                fmt_f64(d.duality_sum)
            );
            out
        }
        Format::Json => json_line(&json!({
            "marker": marker.to_string(),
            "scan": scan,
            "duality": d,
        })),
    };
    Ok(Outcome {
        body,
        status: EXIT_OK,
    })
}

fn cmd_erase(common: &CommonArgs, sign: ErasureSign, mode: EraseMode) -> Result<Outcome, Failure> {
    let marker = match mode {
        EraseMode::Pair => Marker::Cnot,
        EraseMode::Triple => Marker::BellPair,
    };
    let scenario = Scenario::new(marker, common.grid)?;
    let scan = experiment::erase(&scenario, sign)?;
    let v = experiment::visibility(&scan)?;
    let mode_name = match mode {
        EraseMode::Pair => "pair",
        EraseMode::Triple => "triple",
    };
    let body = match common.format {
        Format::Csv => {
            let mut out = format!(
                "# mode={mode_name} sign={} grid={} condition={}\n{ERASE_HEADER}\n",
                sign.symbol(),
                common.grid,
                scan.condition.as_deref().unwrap_or("none")
            );
            let selected = scan.p_select.as_deref().unwrap_or(&[]);
            for ((phi, p), s) in scan.phases.iter().zip(&scan.p0).zip(selected) {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    fmt_f64(phi.radians()),
                    fmt_f64(*p),
                    fmt_f64(*s)
                );
            }
            let _ = writeln!(out, "# visibility={}", fmt_f64(v));
            out
        }
        Format::Json => json_line(&json!({
            "mode": mode_name,
            "sign": sign,
            "scan": scan,
            "visibility": v,
        })),
    };
    Ok(Outcome {
        body,
        status: EXIT_OK,
    })
}

/// Summary rows as `verify` prints them, without the header comment.
pub fn verify_csv_rows(rows: &[SweepSummary]) -> Vec<String> {
    rows.iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{}",
                r.relation,
                r.dim,
                r.samples,
                fmt_f64(r.min_margin),
                fmt_f64(r.mean_margin),
                r.violations
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["whichpath"];
        full.extend_from_slice(args);
        let status = run(full, &mut out, &mut err);
        (
            status,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn fmt_is_shortest_round_trip() {
        assert_eq!(fmt_f64(1.0), "1");
        assert_eq!(fmt_f64(0.5), "0.5");
        assert_eq!(fmt_f64(-2.220446049250313e-16), "-2.220446049250313e-16");
        assert_eq!(fmt_f64(100000.0), "100000");
        for x in [0.1, 1.0 / 3.0, 6.123233995736766e-17, -0.7071067811865475] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn marker_and_sign_parsing() {
        assert_eq!(parse_marker("none").unwrap(), Marker::None);
        assert_eq!(parse_marker("partial=1.5").unwrap(), Marker::Partial(1.5));
        assert!(parse_marker("partial=abc").is_err());
        assert!(parse_marker("partial=inf").is_err());
        assert!(parse_marker("full").is_err());
        assert_eq!(parse_sign("-").unwrap(), ErasureSign::Minus);
        assert!(parse_sign("x").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_capture(&["verify", "--tol", "-1"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["verify", "--samples", "0"]).0, EXIT_USAGE);
        assert_eq!(
            run_capture(&["fringes", "--marker", "partial=x"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_capture(&["fringes", "--grid", "2"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["nope"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["erase", "--sign", "0"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn verify_small_run_is_clean() {
        let (status, out, _) = run_capture(&["verify", "--samples", "10", "--seed", "7"]);
        assert_eq!(status, EXIT_OK);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "# seed=7 tol=1e-9");
        assert_eq!(lines[1], VERIFY_HEADER);
        assert_eq!(lines.len(), 2 + Relation::VERIFY_SET.len());
        assert!(lines[2..].iter().all(|l| l.ends_with(",0")));
    }

    use crate::sweep::Relation;

    #[test]
    fn erase_json_output() {
        let (status, out, _) = run_capture(&[
            "erase", "--sign", "+", "--mode", "triple", "--grid", "8", "--format", "json",
        ]);
        assert_eq!(status, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["visibility"].as_f64().unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(v["scan"]["p0"].as_array().unwrap().len(), 8);
    }

    #[test]
    fn state_file_round_trip() {
        let rho = DensityOperator::from_pure(&bell_phi_plus(), Tolerance::default()).unwrap();
        let file = StateFile::from_matrix(rho.matrix());
        let text = serde_json::to_string(&file).unwrap();
        let back: StateFile = serde_json::from_str(&text).unwrap();
        assert_eq!(
            back.to_density(Tolerance::default()).unwrap().matrix(),
            rho.matrix()
        );
        let bad = StateFile {
            dim: 2,
            re: vec![vec![1.0, 0.0]],
            im: vec![vec![0.0, 0.0]; 2],
        };
        assert!(bad.to_density(Tolerance::default()).is_err());
    }
}
