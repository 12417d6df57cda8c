//! Command-line front end. `run` parses arguments, executes, writes the
//! output, and returns the process exit code.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::Error;
use crate::group::DEFAULT_CLOSURE_CAP;
use crate::lemma_a::{lemma_a_campaign, LemmaAVerdict, SubgroupMode};
use crate::matgroup::{census_row, verify_sylowtwoingln, CensusRow};
use crate::plane::pg2;
use crate::report::{exit_code, parse_ndjson, to_markdown, VerificationReport};
use crate::suites;
use crate::tower::random_identity_campaign_with;

pub const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "baercheck", version, about = "Exact checks of involution and centralizer identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Zero out timings so repeated runs are byte-identical.
    #[arg(long, global = true)]
    stable_output: bool,

    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verifier.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Tabulate Sylow 2-subgroup censuses.
    Census {
        #[command(subcommand)]
        what: Census,
    },
    /// Projective plane export.
    Plane {
        #[command(subcommand)]
        what: PlaneCmd,
    },
    /// Report file utilities.
    Report {
        #[command(subcommand)]
        what: ReportCmd,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Random,
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Involution bounds for Sylow 2-subgroups of GL_n(q).
    Sylow2 {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        q: u64,
        /// 1..5; all five when omitted.
        #[arg(long)]
        statement: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
        cap: usize,
    },
    /// Seeded campaign over the odd-normal, fusion and tower identities.
    Tower {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: u64,
    },
    /// Baer-involution counting ratio on PG(2,q).
    Counting {
        #[arg(long, default_value_t = 9)]
        q: u64,
    },
    /// Fixed-point transitivity criterion on the built-in instances.
    Fixtrans,
    /// Involution index bound for subgroups of GL_n(q).
    LemmaA {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Distinct subgroups to check in random mode.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Order and involution-class bounds on primitive permutation groups.
    SnBounds,
    /// Two-rank, structure recognition and odd transitive subgroups.
    Quaternion {
        /// Prime for the SL_2(q) instance.
        #[arg(long, default_value_t = 7)]
        q: u64,
        /// Order of the plane searched for an odd transitive subgroup.
        #[arg(long, default_value_t = 9)]
        plane_q: u64,
    },
}

#[derive(Subcommand, Debug)]
enum Census {
    /// One row per (n, q).
    Sylow2 {
        #[arg(long, value_delimiter = ',', default_values_t = vec![2usize])]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![7u64])]
        q: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
        cap: usize,
    },
}

#[derive(Subcommand, Debug)]
enum PlaneCmd {
    /// PG(2,q) as JSON, or its incidence matrix as CSV.
    Build {
        #[arg(long)]
        q: u64,
    },
}

#[derive(Subcommand, Debug)]
enum ReportCmd {
    /// Concatenate newline-delimited report files.
    Merge { files: Vec<PathBuf> },
}

/// What a command produced.
enum Output {
    Reports(Vec<VerificationReport>),
    /// Rendered text plus the exit code it implies.
    Text(String, i32),
}

fn csv_of<T: Serialize>(rows: &[T]) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Internal(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

#[derive(Serialize)]
struct ReportCsvRow<'a> {
    lemma_id: &'a str,
    verdict: &'a str,
    params: String,
    counts: String,
    elapsed_ms: u64,
    seed: Option<u64>,
}

fn render_reports(reports: &[VerificationReport], format: Format) -> Result<String, Error> {
    match format {
        Format::Json => Ok(reports.iter().map(|r| r.to_json_line() + "\n").collect()),
        Format::Md => Ok(to_markdown(reports)),
        Format::Csv => {
            let rows: Vec<ReportCsvRow> = reports
                .iter()
                .map(|r| ReportCsvRow {
                    lemma_id: &r.lemma_id,
                    verdict: r.verdict.as_str(),
                    params: serde_json::to_string(&r.params).expect("serializable"),
                    counts: serde_json::to_string(&r.counts).expect("serializable"),
                    elapsed_ms: r.elapsed_ms,
                    seed: r.seed,
                })
                .collect();
            csv_of(&rows)
        }
    }
}

fn census_text(rows: &[CensusRow], format: Format) -> Result<String, Error> {
    match format {
        Format::Csv => csv_of(rows),
        Format::Json => Ok(rows
            .iter()
            .map(|r| serde_json::to_string(r).expect("serializable") + "\n")
            .collect()),
        Format::Md => {
            let mut s = String::from(
                "| n | q | construction | order | involutions | central | bound | verdict |\n|---|---|---|---|---|---|---|---|\n",
            );
            for r in rows {
                s.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {} | {} | {} |\n",
                    r.n, r.q, r.construction, r.order, r.involutions, r.central, r.bound, r.verdict
                ));
            }
            Ok(s)
        }
    }
}

#[derive(Serialize)]
struct LemmaARow<'a> {
    order: u64,
    involutions: u64,
    best_index: Option<u64>,
    index_part: Option<u64>,
    bound: u64,
    verdict: &'a str,
}

fn lemma_a_csv(rows: &[LemmaAVerdict]) -> Result<String, Error> {
    let table: Vec<LemmaARow> = rows
        .iter()
        .map(|r| LemmaARow {
            order: r.order,
            involutions: r.involutions,
            best_index: r.index,
            index_part: r.index_part,
            bound: r.bound,
            verdict: r.outcome.as_str(),
        })
        .collect();
    csv_of(&table)
}

fn plane_text(q: u64, format: Format) -> Result<String, Error> {
    let plane = pg2(q)?;
    match format {
        Format::Csv => Ok(plane.incidence_csv()),
        _ => {
            let f = plane.field().expect("coordinatized");
            let coords = |v: [u32; 3]| -> Vec<Vec<u32>> { v.iter().map(|&c| f.coeffs(c)).collect() };
            let n = plane.num_points() as u32;
            let value = json!({
                "order": plane.order(),
                "points": (0..n).map(|i| coords(plane.point(i))).collect::<Vec<_>>(),
                "lines": (0..n).map(|i| coords(plane.line(i))).collect::<Vec<_>>(),
                "incidence": (0..n).map(|l| plane.points_on(l).to_vec()).collect::<Vec<_>>(),
            });
            Ok(value.to_string() + "\n")
        }
    }
}

fn lemma_id_of(command: &Command) -> &'static str {
    match command {
        Command::Verify { what } => match what {
            Verify::Sylow2 { .. } => "sylowtwoingln",
            Verify::Tower { .. } => "identity-campaign",
            Verify::Counting { .. } => "counting",
            Verify::Fixtrans => "fixtrans",
            Verify::LemmaA { .. } => "lemma-a",
            Verify::SnBounds => "sn-bounds",
            Verify::Quaternion { .. } => "quaternion",
        },
        Command::Census { .. } => "census",
        Command::Plane { .. } => "plane",
        Command::Report { .. } => "report",
    }
}

fn execute(command: &Command, format: Format) -> Result<Output, Error> {
    Ok(match command {
        Command::Verify { what } => match what {
            Verify::Sylow2 { n, q, statement, cap } => {
                let statements: Vec<u32> = statement.map_or((1..=5).collect(), |s| vec![s]);
                let reports = statements
                    .into_iter()
                    .map(|s| {
                        verify_sylowtwoingln(s, *n, *q, *cap)
                            .or_else(|e| VerificationReport::from_error(format!("sylowtwoingln.{s}"), e))
                    })
                    .collect::<Result<_, _>>()?;
                Output::Reports(reports)
            }
            Verify::Tower { seed, trials } => {
                let (agg, mut per) = random_identity_campaign_with(*seed, *trials)?;
                per.push(agg);
                Output::Reports(per)
            }
            Verify::Counting { q } => Output::Reports(vec![suites::counting_report(*q)?]),
            Verify::Fixtrans => Output::Reports(suites::fixtrans_suite()?),
            Verify::LemmaA { n, q, mode, seed, trials } => {
                let mode = match mode {
                    Mode::Exhaustive => SubgroupMode::Exhaustive,
                    Mode::Random => SubgroupMode::Random { target: *trials },
                };
                let (report, rows) = lemma_a_campaign(*n, *q, mode, *seed)?;
                if format == Format::Csv {
                    let code = exit_code(std::slice::from_ref(&report));
                    Output::Text(lemma_a_csv(&rows)?, code)
                } else {
                    Output::Reports(vec![report])
                }
            }
            Verify::SnBounds => Output::Reports(suites::sn_bounds_suite()?),
            Verify::Quaternion { q, plane_q } => {
                let mut reports = suites::two_rank_suite()?;
                reports.extend(suites::quaternion_suite(*q)?);
                reports.push(suites::odd_transitive_report(*plane_q)?);
                Output::Reports(reports)
            }
        },
        Command::Census { what: Census::Sylow2 { n, q, cap } } => {
            let mut rows = Vec::new();
            for &qq in q {
                for &nn in n {
                    rows.push(census_row(nn, qq, *cap)?);
                }
            }
            let code = if rows.iter().any(|r| r.verdict == "violated") { 1 } else { 0 };
            Output::Text(census_text(&rows, format)?, code)
        }
        Command::Plane { what: PlaneCmd::Build { q } } => Output::Text(plane_text(*q, format)?, 0),
        Command::Report { what: ReportCmd::Merge { files } } => {
            let mut all = Vec::new();
            for f in files {
                let text = fs::read_to_string(f)
                    .map_err(|e| Error::invalid(format!("cannot read {}: {e}", f.display())))?;
                all.extend(parse_ndjson(&text)?);
            }
            Output::Reports(all)
        }
    })
}

/// Parses `args` (including the program name), runs the command, writes to
/// `stdout` or `--out`, and returns the exit code: 0 all verified or not
/// applicable, 1 a violation, 2 a resource limit was hit, 3 usage error.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(jobs) = cli.jobs {
        // Only the first configuration in a process takes effect.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global();
    }
    let (text, code) = match execute(&cli.command, cli.format) {
        Ok(Output::Reports(mut reports)) => {
            if cli.stable_output {
                for r in &mut reports {
                    r.elapsed_ms = 0;
                }
            }
            match render_reports(&reports, cli.format) {
                Ok(t) => (t, exit_code(&reports)),
                Err(e) => return fail(&e),
            }
        }
        Ok(Output::Text(t, code)) => (t, code),
        Err(e) if e.is_resource_limit() => {
            let report = VerificationReport::from_error(lemma_id_of(&cli.command), e).expect("resource limit");
            match render_reports(&[report], cli.format) {
                Ok(t) => (t, 2),
                Err(e) => return fail(&e),
            }
        }
        Err(e) => return fail(&e),
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, text.as_bytes()),
        None => stdout.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return EXIT_USAGE;
    }
    code
}

fn fail(e: &Error) -> i32 {
    eprintln!("error: {e}");
    match e {
        Error::Internal(_) => 1,
        _ => EXIT_USAGE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let mut full = vec!["baercheck"];
        full.extend_from_slice(args);
        let code = run(full, &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn usage_errors_exit_3() {
        assert_eq!(run_capture(&["verify", "nonsense"]).0, 3);
        assert_eq!(run_capture(&["verify", "sylow2", "--bogus"]).0, 3);
        assert_eq!(run_capture(&["verify", "sylow2", "--statement", "9"]).0, 3);
    }

    #[test]
    fn sylow2_statement_three() {
        let (code, out) = run_capture(&["verify", "sylow2", "--n", "2", "--q", "7", "--statement", "3"]);
        assert_eq!(code, 0);
        let r = parse_ndjson(&out).unwrap();
        assert_eq!(r[0].counts["involutions"], 9);
    }

    #[test]
    fn stable_output_is_byte_identical() {
        let args = ["verify", "counting", "--q", "9", "--stable-output"];
        let (c1, a) = run_capture(&args);
        let (c2, b) = run_capture(&args);
        assert_eq!((c1, c2), (0, 0));
        assert_eq!(a, b);
        assert!(a.contains("\"ratio\":7"));
    }

    #[test]
    fn formats() {
        let (_, csv) = run_capture(&["census", "sylow2", "--n", "2,3", "--q", "7", "--format", "csv"]);
        assert!(csv.starts_with("n,q,construction,order,involutions,central,bound,verdict"));
        assert_eq!(csv.lines().count(), 3);
        let (_, md) = run_capture(&["verify", "sn-bounds", "--format", "md"]);
        assert!(md.starts_with("| check |"));
        let (_, inc) = run_capture(&["plane", "build", "--q", "2", "--format", "csv"]);
        assert_eq!(inc.lines().count(), 7);
        assert!(inc.lines().all(|l| l.matches('1').count() == 3));
    }

    #[test]
    fn resource_limit_exits_2() {
        let (code, out) = run_capture(&["verify", "lemma-a", "--n", "3", "--q", "7"]);
        assert_eq!(code, 2, "{out}");
        let r = parse_ndjson(&out).unwrap();
        assert_eq!(r[0].verdict, crate::report::Verdict::SkippedResource);
    }
}
