//! The `practical` command-line front end.
//!
//! Every subcommand produces a [`Table`]; JSON and CSV are two renderings of
//! the same cells, so both formats always carry identical data.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::arith::{MAX_INPUT, MAX_TABLE_LIMIT};
use crate::density::{self, MAX_PARTIAL_SUM_M, MAX_RHO_M};
use crate::error::Error;
use crate::hs::{self, MAX_NEAR_MISS_D};
use crate::practical::{self, MAX_F_BRUTE};
use crate::scan::{ScanConfig, DEFAULT_SEGMENT_SIZE};
use crate::sieve::{self, Sieve};

/// Sample size for `density` when `--empirical-x` is not given.
pub const DEFAULT_EMPIRICAL_X: u64 = 1_000_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "practical",
    version,
    about = "Practical numbers, f(n), and related counts"
)]
pub struct CommandConfig {
    /// Worker threads for range scans [default: available parallelism]
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Integers per scan segment
    #[arg(long, global = true, default_value_t = DEFAULT_SEGMENT_SIZE)]
    pub segment_size: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write results here instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Practicality, f(n) and practical component of n
    Check { n: u64 },
    /// f(n), the end of the initial run of subset sums of divisors
    F {
        n: u64,
        /// Use the subset-sum oracle instead of the factorization formula
        #[arg(long)]
        brute: bool,
    },
    /// N(x, y) = #{n <= x : f(n) >= y}
    Count {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        y: u64,
    },
    /// PR(x), the number of practical n <= x
    Pr {
        #[arg(long)]
        x: u64,
    },
    /// N(x, y)·log y / x over a grid
    RatioGrid {
        #[arg(long, value_delimiter = ',', required = true)]
        xs: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        ys: Vec<u64>,
    },
    /// Least practical n with x < n < x + 2√x
    Window { x: u64 },
    /// Additive endpoints (values of f) up to a limit
    Endpoints {
        #[arg(long)]
        limit: u64,
        #[arg(long)]
        witnesses: bool,
    },
    /// Exact and empirical density of {n : f(n) = m}
    Density {
        #[arg(long)]
        m: u64,
        #[arg(long = "empirical-x")]
        empirical_x: Option<u64>,
    },
    /// Exact sum of the densities for m <= M
    DensitySum {
        #[arg(long = "m-max")]
        m_max: u64,
    },
    /// Search for non-practical n with f(n) >= HS(n)
    HsVerify {
        #[arg(long)]
        limit: u64,
    },
    /// Non-practical n = d·q with f(n)/HS(n) close to 1
    HsNear {
        #[arg(long = "d-limit")]
        d_limit: u64,
    },
    /// Check Robin's bound on σ(n) for 3 <= n <= limit
    Robin {
        #[arg(long)]
        limit: u64,
    },
}

/// Rows of named cells. `single` tables render as one JSON object, the rest
/// as a JSON array.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub single: bool,
}

impl Table {
    fn object(columns: Vec<&'static str>, row: Vec<Value>) -> Self {
        Table {
            columns,
            rows: vec![row],
            single: true,
        }
    }

    fn array(columns: Vec<&'static str>, rows: Vec<Vec<Value>>) -> Self {
        Table {
            columns,
            rows,
            single: false,
        }
    }

    fn row_object(&self, row: &[Value]) -> Value {
        let map: Map<String, Value> = self
            .columns
            .iter()
            .zip(row)
            .map(|(c, v)| (c.to_string(), v.clone()))
            .collect();
        Value::Object(map)
    }

    pub fn to_json(&self) -> String {
        let doc = if self.single {
            self.row_object(&self.rows[0])
        } else {
            Value::Array(self.rows.iter().map(|r| self.row_object(r)).collect())
        };
        let mut s = doc.to_string();
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(csv_cell).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Result of one command: its table plus whether it found counterexamples.
#[derive(Debug)]
pub struct Outcome {
    pub table: Table,
    pub violation: bool,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn ok(table: Table) -> Self {
        Outcome {
            table,
            violation: false,
            warnings: Vec::new(),
        }
    }
}

#[derive(Debug)]
enum CliError {
    Flag { flag: &'static str, detail: String },
    Lib(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Flag { flag, detail } => write!(f, "{flag}: {detail}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

fn in_range(flag: &'static str, v: u64, lo: u64, hi: u64) -> Result<u64, CliError> {
    if v < lo || v > hi {
        return Err(CliError::Flag {
            flag,
            detail: format!("value {v} out of range {lo}..={hi}"),
        });
    }
    Ok(v)
}

fn num(v: u64) -> Value {
    Value::from(v)
}

fn real(v: f64) -> Value {
    Value::from(v)
}

fn text(s: impl ToString) -> Value {
    Value::String(s.to_string())
}

impl CommandConfig {
    fn scan_config(&self) -> Result<ScanConfig, CliError> {
        let threads = match self.threads {
            Some(t) => in_range("--threads", t as u64, 1, 1024)? as usize,
            None => ScanConfig::default().threads,
        };
        let segment = in_range("--segment-size", self.segment_size, 1, 1 << 32)?;
        Ok(ScanConfig::new(threads, segment)?)
    }

    fn sieve(&self, limit: u64) -> Result<Sieve, CliError> {
        Ok(Sieve::new(limit, self.scan_config()?)?)
    }

    /// Executes the subcommand and returns its results.
    pub fn execute(&self) -> Result<Outcome, String> {
        self.execute_inner().map_err(|e| e.to_string())
    }

    fn execute_inner(&self) -> Result<Outcome, CliError> {
        // validates scan flags even for commands that do not scan
        self.scan_config()?;
        match &self.command {
            Command::Check { n } => {
                let n = in_range("<n>", *n, 1, MAX_INPUT)?;
                let d = practical::decompose(n)?;
                Ok(Outcome::ok(Table::object(
                    vec!["n", "practical", "f", "component"],
                    vec![
                        num(n),
                        Value::Bool(d.is_practical),
                        num(d.f_value),
                        num(d.component),
                    ],
                )))
            }
            Command::F { n, brute } => {
                let f = if *brute {
                    practical::f_brute(in_range("<n>", *n, 1, MAX_F_BRUTE)?)?
                } else {
                    practical::f_fast(in_range("<n>", *n, 1, MAX_INPUT)?)?
                };
                Ok(Outcome::ok(Table::object(
                    vec!["n", "f"],
                    vec![num(*n), num(f)],
                )))
            }
            Command::Count { x, y } => {
                let x = in_range("--x", *x, 1, MAX_TABLE_LIMIT)?;
                let y = in_range("--y", *y, 1, u64::MAX)?;
                let count = self.sieve(x)?.n_count(x, y)?;
                let p = sieve::CountPoint::new(x, y, count);
                Ok(Outcome::ok(Table::object(
                    vec!["x", "y", "count", "normalized"],
                    vec![num(p.x), num(p.y), num(p.count), real(p.normalized)],
                )))
            }
            Command::Pr { x } => {
                let x = in_range("--x", *x, 1, MAX_TABLE_LIMIT)?;
                let count = self.sieve(x)?.pr_count(x)?;
                let ratio = count as f64 * (x as f64).ln() / x as f64;
                Ok(Outcome::ok(Table::object(
                    vec!["x", "count", "ratio"],
                    vec![num(x), num(count), real(ratio)],
                )))
            }
            Command::RatioGrid { xs, ys } => {
                for &x in xs {
                    in_range("--xs", x, 1, MAX_TABLE_LIMIT)?;
                }
                for &y in ys {
                    in_range("--ys", y, 1, u64::MAX)?;
                }
                let x_max = xs.iter().copied().max().unwrap_or(1);
                let grid = self.sieve(x_max)?.ratio_grid(xs, ys)?;
                let rows = grid
                    .points
                    .iter()
                    .map(|p| vec![num(p.x), num(p.y), num(p.count), real(p.normalized)])
                    .collect();
                let warnings = grid
                    .rejected
                    .iter()
                    .map(|r| format!("skipped (x={}, y={}): {}", r.x, r.y, r.reason))
                    .collect();
                Ok(Outcome {
                    table: Table::array(vec!["x", "y", "count", "normalized"], rows),
                    violation: false,
                    warnings,
                })
            }
            Command::Window { x } => {
                let x = in_range("<x>", *x, 1, MAX_INPUT / 2)?;
                let n = sieve::practical_in_window(x)?;
                Ok(Outcome::ok(Table::object(
                    vec!["x", "n"],
                    vec![num(x), num(n)],
                )))
            }
            Command::Endpoints { limit, witnesses } => {
                let limit = in_range("--limit", *limit, 1, MAX_TABLE_LIMIT)?;
                let table = density::endpoints_with(&self.sieve(limit)?, limit)?;
                let (columns, rows) = if *witnesses {
                    (
                        vec!["m", "witness"],
                        table.iter().map(|(m, w)| vec![num(m), num(w)]).collect(),
                    )
                } else {
                    (
                        vec!["m"],
                        table.endpoints.iter().map(|&m| vec![num(m)]).collect(),
                    )
                };
                Ok(Outcome::ok(Table::array(columns, rows)))
            }
            Command::Density { m, empirical_x } => {
                let m = in_range("--m", *m, 1, MAX_RHO_M)?;
                let x = in_range(
                    "--empirical-x",
                    empirical_x.unwrap_or(DEFAULT_EMPIRICAL_X),
                    1,
                    MAX_TABLE_LIMIT,
                )?;
                let rec = density::density_record_with(&self.sieve(m.max(x))?, m, x)?;
                Ok(Outcome::ok(Table::object(
                    vec!["m", "rho_num", "rho_den", "rho_float", "empirical", "sample_limit"],
                    vec![
                        num(rec.m),
                        text(rec.rho_exact.numer()),
                        text(rec.rho_exact.denom()),
                        real(rec.rho_float),
                        real(rec.empirical),
                        num(rec.sample_limit),
                    ],
                )))
            }
            Command::DensitySum { m_max } => {
                let m_max = in_range("--m-max", *m_max, 1, MAX_PARTIAL_SUM_M)?;
                let sum = density::rho_partial_sum(m_max)?;
                Ok(Outcome::ok(Table::object(
                    vec!["m_max", "sum_num", "sum_den", "sum_float"],
                    vec![
                        num(m_max),
                        text(sum.numer()),
                        text(sum.denom()),
                        real(density::to_f64(&sum)),
                    ],
                )))
            }
            Command::HsVerify { limit } => {
                let limit = in_range("--limit", *limit, 1, MAX_TABLE_LIMIT)?;
                let bad = if limit <= 3 {
                    Vec::new()
                } else {
                    hs::verify_hs_theorem_with(&self.sieve(limit)?, limit)?
                };
                let rows = bad.iter().map(hs_row).collect();
                Ok(Outcome {
                    table: Table::array(HS_COLUMNS.to_vec(), rows),
                    violation: !bad.is_empty(),
                    warnings: Vec::new(),
                })
            }
            Command::HsNear { d_limit } => {
                let d_limit = in_range("--d-limit", *d_limit, 1, MAX_NEAR_MISS_D)?;
                let misses = hs::near_miss_search_with(&self.sieve(d_limit)?, d_limit)?;
                let violation = misses.iter().any(|m| m.report.ratio >= 1.0);
                let rows = misses
                    .iter()
                    .map(|m| {
                        let mut row = vec![num(m.d), num(m.q)];
                        row.extend(hs_row(&m.report));
                        row
                    })
                    .collect();
                let mut columns = vec!["d", "q"];
                columns.extend(HS_COLUMNS);
                Ok(Outcome {
                    table: Table::array(columns, rows),
                    violation,
                    warnings: Vec::new(),
                })
            }
            Command::Robin { limit } => {
                let limit = in_range("--limit", *limit, 1, MAX_TABLE_LIMIT)?;
                let bad = if limit < 3 {
                    Vec::new()
                } else {
                    hs::robin_scan_with(&self.sieve(limit)?, limit)?
                };
                let rows = bad
                    .iter()
                    .map(|v| vec![num(v.n), num(v.sigma), real(v.bound)])
                    .collect();
                Ok(Outcome {
                    table: Table::array(vec!["n", "sigma", "bound"], rows),
                    violation: !bad.is_empty(),
                    warnings: Vec::new(),
                })
            }
        }
    }
}

const HS_COLUMNS: [&str; 5] = ["n", "f", "threshold", "ratio", "practical"];

fn hs_row(r: &hs::HsReport) -> Vec<Value> {
    vec![
        num(r.n),
        num(r.f_value),
        real(r.threshold),
        real(r.ratio),
        Value::Bool(r.practical),
    ]
}

/// Parses `argv` (including the program name), runs the command, and returns
/// the process exit code. Results go to `out` unless `--output` is given.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CommandConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_ERROR,
            };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let outcome = match config.execute_inner() {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return match e {
                CliError::Lib(Error::TheoremViolation(_)) => EXIT_VIOLATION,
                _ => EXIT_ERROR,
            };
        }
    };
    for w in &outcome.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let body = outcome.table.render(config.format);
    let written = match &config.output {
        Some(path) => std::fs::write(path, body.as_bytes())
            .map_err(|e| CliError::Io(format!("--output {}: {e}", path.display()))),
        None => out
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return EXIT_ERROR;
    }
    if outcome.violation {
        let _ = writeln!(err, "error: counterexamples found; see output");
        return EXIT_VIOLATION;
    }
    EXIT_OK
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("practical").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn check_150() {
        let (code, out, _) = call(&["check", "150"]);
        assert_eq!(code, 0);
        assert_eq!(out, "{\"n\":150,\"practical\":true,\"f\":372,\"component\":150}\n");
    }

    #[test]
    fn f_10() {
        assert_eq!(call(&["f", "10"]).1, "{\"n\":10,\"f\":3}\n");
        assert_eq!(call(&["f", "10", "--brute"]).1, "{\"n\":10,\"f\":3}\n");
    }

    #[test]
    fn csv_rendering() {
        let (code, out, _) = call(&["count", "--x", "10", "--y", "4", "--format", "csv"]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("x,y,count,normalized"));
        assert!(lines.next().unwrap().starts_with("10,4,3,0.41588"));
    }

    #[test]
    fn empty_violation_list() {
        let (code, out, _) = call(&["hs-verify", "--limit", "1000"]);
        assert_eq!(code, 0);
        assert_eq!(out, "[]\n");
        let (code, out, _) = call(&["hs-verify", "--limit", "1000", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out, "n,f,threshold,ratio,practical\n");
    }

    #[test]
    fn range_errors_name_the_flag() {
        for (args, flag) in [
            (vec!["count", "--x", "0", "--y", "4"], "--x"),
            (vec!["pr", "--x", "2000000000"], "--x"),
            (vec!["density", "--m", "0"], "--m"),
            (vec!["density-sum", "--m-max", "10001"], "--m-max"),
            (vec!["hs-near", "--d-limit", "0"], "--d-limit"),
            (vec!["f", "20000000", "--brute"], "<n>"),
            (vec!["pr", "--x", "10", "--threads", "0"], "--threads"),
        ] {
            let (code, out, err) = call(&args);
            assert_eq!(code, 1, "{args:?}");
            assert!(out.is_empty());
            assert_eq!(err.lines().count(), 1, "{err}");
            assert!(err.contains(flag), "{err}");
        }
    }

    #[test]
    fn parse_failures_exit_one() {
        assert_eq!(call(&["frobnicate"]).0, 1);
        assert_eq!(call(&["check"]).0, 1);
        assert_eq!(call(&["check", "12", "--bogus"]).0, 1);
        assert_eq!(call(&["check", "-5"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn rejected_grid_pairs_are_reported() {
        let (code, out, err) = call(&["ratio-grid", "--xs", "10,100", "--ys", "4,50"]);
        assert_eq!(code, 0);
        assert!(err.contains("x=10, y=50"));
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 3);
    }
}
