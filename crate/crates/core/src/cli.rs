//! Command-line front end. [`run`] does all the work and returns the text to
//! print together with the exit code, so it can be driven from tests.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::abelian::{AbElement, DEFAULT_AUT_CAP};
use crate::degree::{self, DegreeKind, DegreeMethod, DegreeResult};
use crate::error::Error;
use crate::gcgroup::{BsParams, GcGroup};
use crate::twisted::{self, GcAutomorphism, ReidemeisterNumber, Sign};
use crate::verify::{self, Scope, SuiteCheck, VerifyConfig};

pub const SCHEMA_VERSION: &str = "1.0";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_BOUND_EXCEEDED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "bsrinf", version, about = "R-infinity nilpotency degrees of Baumslag-Solitar groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Largest torsion order for the brute-force Reidemeister oracle
    /// [default: $BSRINF_ORACLE_CAP or 4096].
    #[arg(long, global = true)]
    pub oracle_cap: Option<u64>,
    /// Largest torsion order for exhaustive automorphism searches.
    #[arg(long, global = true, default_value_t = DEFAULT_AUT_CAP)]
    pub aut_cap: u64,
    /// Include wall-clock time in the output (makes output nondeterministic).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// R-infinity nilpotency degree of BS(m, n).
    #[command(allow_negative_numbers = true)]
    Degree {
        m: i64,
        n: i64,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
        #[arg(long, default_value_t = degree::DEFAULT_QUERY_C_MAX)]
        c_max: usize,
    },
    /// Structure of G_c(m, n) and whether it has the R-infinity property.
    #[command(allow_negative_numbers = true)]
    Quotient { m: i64, n: i64, c: usize },
    /// Reidemeister number of an automorphism of G_c(m, n).
    #[command(allow_negative_numbers = true)]
    Reidemeister {
        m: i64,
        n: i64,
        c: usize,
        /// Act on the torsion subgroup by multiplication with MU.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "image", required_unless_present = "image")]
        mu: Option<BigInt>,
        /// Image of s, as comma-separated coordinates in the invariant-factor
        /// basis; determines the whole action.
        #[arg(long, allow_hyphen_values = true)]
        image: Option<String>,
        /// Image of t is (BETA * s) t^EPS.
        #[arg(long, allow_hyphen_values = true, default_value_t = BigInt::from(0))]
        beta: BigInt,
        #[arg(long, allow_hyphen_values = true, default_value_t = -1)]
        eps: i64,
    },
    /// Run the self-check suites.
    Verify {
        #[arg(value_enum, default_value_t = ScopeArg::All)]
        scope: ScopeArg,
        #[arg(long, default_value_t = 8)]
        max_n: i64,
        #[arg(long, default_value_t = 5)]
        max_c: usize,
        #[arg(long, default_value_t = 500)]
        random: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Torsion bound for the formula-versus-oracle comparison.
        #[arg(long, default_value_t = 512)]
        oracle_torsion: u64,
        /// Torsion bound for the exhaustive automorphism searches.
        #[arg(long, default_value_t = 4096)]
        search_torsion: u64,
    },
    /// Degrees for all canonical pairs 1 <= m <= M_MAX, m <= |n| <= N_MAX.
    Sweep {
        m_max: i64,
        n_max: i64,
        #[arg(long, default_value_t = degree::DEFAULT_SWEEP_C_MAX)]
        c_max: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Closed,
    Search,
    Both,
}

impl From<MethodArg> for DegreeMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Closed => DegreeMethod::ClosedForm,
            MethodArg::Search => DegreeMethod::Search,
            MethodArg::Both => DegreeMethod::Both,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScopeArg {
    Snf,
    Lemmas,
    Oracle,
    All,
}

impl From<ScopeArg> for Scope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::Snf => Scope::Snf,
            ScopeArg::Lemmas => Scope::Lemmas,
            ScopeArg::Oracle => Scope::Oracle,
            ScopeArg::All => Scope::All,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OutputRecord {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub query: Value,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

/// Tabular view used for csv and markdown output.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    record: OutputRecord,
    table: Table,
    code: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BoundExceeded { .. } => EXIT_BOUND_EXCEEDED,
        Error::Inconsistency(_) => EXIT_VERIFICATION_FAILED,
        _ => EXIT_INVALID_INPUT,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { code: EXIT_INVALID_INPUT, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let started = Instant::now();
    let oracle_cap = cli.oracle_cap.unwrap_or_else(twisted::oracle_cap_from_env);
    let report = match &cli.command {
        Command::Degree { m, n, method, c_max } => cmd_degree(*m, *n, (*method).into(), *c_max, cli.aut_cap),
        Command::Quotient { m, n, c } => cmd_quotient(*m, *n, *c, cli.aut_cap),
        Command::Reidemeister { m, n, c, mu, image, beta, eps } => {
            cmd_reidemeister(*m, *n, *c, mu.as_ref(), image.as_deref(), beta, *eps, oracle_cap)
        }
        Command::Verify { scope, max_n, max_c, random, seed, oracle_torsion, search_torsion } => {
            let cfg = VerifyConfig {
                max_n: *max_n,
                max_c: *max_c,
                random_matrices: *random,
                seed: *seed,
                oracle_torsion: *oracle_torsion,
                search_torsion: *search_torsion,
                oracle_cap,
                aut_cap: cli.aut_cap,
            };
            cmd_verify((*scope).into(), &cfg)
        }
        Command::Sweep { m_max, n_max, c_max } => cmd_sweep(*m_max, *n_max, *c_max, cli.aut_cap),
    };
    let mut report = match report {
        Ok(r) => r,
        Err(e) => return Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    if cli.timing {
        report.record.timing_ms = Some(started.elapsed().as_millis() as u64);
    }
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report.record).expect("records serialize") + "\n",
        Format::Csv => render_csv(&report.table),
        Format::Md => render_markdown(&report.table),
    };
    match &cli.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome { code: report.code, stdout: String::new(), stderr: String::new() },
            Err(e) => Outcome {
                code: EXIT_INVALID_INPUT,
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            },
        },
        None => Outcome { code: report.code, stdout: text, stderr: String::new() },
    }
}

/// JSON integer when it fits in `i64`, decimal string otherwise.
pub fn big_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn bigs_json(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(big_json).collect())
}

fn element_json(x: &AbElement) -> Value {
    bigs_json(x.coords())
}

fn reidemeister_json(r: &ReidemeisterNumber) -> Value {
    match r {
        ReidemeisterNumber::Finite(n) => big_json(n),
        ReidemeisterNumber::Infinite => json!("inf"),
    }
}

fn params_query(m: i64, n: i64, p: &BsParams) -> Value {
    json!({ "m": m, "n": n, "canonical": p })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn kind_bounds(kind: &DegreeKind) -> (String, String) {
    match kind {
        DegreeKind::Exact { value } => (value.to_string(), value.to_string()),
        DegreeKind::Infinite => ("inf".into(), "inf".into()),
        DegreeKind::Interval { lower, upper } => (lower.to_string(), upper.to_string()),
    }
}

const DEGREE_HEADERS: [&str; 10] = ["m", "n", "d", "case", "degree", "lower", "upper", "p", "method", "gc_threshold"];

fn degree_row(r: &DegreeResult) -> Vec<String> {
    let (lower, upper) = kind_bounds(&r.kind);
    vec![
        r.params.m.to_string(),
        r.params.n.to_string(),
        r.params.d.to_string(),
        r.case_label.as_str().into(),
        r.kind.to_string(),
        lower,
        upper,
        opt(r.p),
        to_value(&r.method).as_str().unwrap_or_default().to_string(),
        opt(r.gc_threshold.as_ref()),
    ]
}

fn cmd_degree(m: i64, n: i64, method: DegreeMethod, c_max: usize, aut_cap: u64) -> crate::Result<Report> {
    let p = BsParams::new(m, n)?;
    let r = degree::degree(&p, method, c_max, aut_cap)?;
    let mut query = params_query(m, n, &p);
    query["method"] = to_value(&method);
    query["c_max"] = json!(c_max);
    Ok(Report {
        record: OutputRecord { schema_version: SCHEMA_VERSION, command: "degree", query, result: to_value(&r), timing_ms: None },
        table: Table { headers: DEGREE_HEADERS.to_vec(), rows: vec![degree_row(&r)] },
        code: EXIT_OK,
    })
}

fn cmd_quotient(m: i64, n: i64, c: usize, aut_cap: u64) -> crate::Result<Report> {
    let p = BsParams::new(m, n)?;
    let g = Arc::new(GcGroup::build(p, c)?);
    let a = g.torsion();
    let gamma: Vec<BigInt> = g.lower_central_series()?.iter().map(|s| s.order().clone()).collect();
    let verdict = twisted::gc_has_rinf(&g, aut_cap)?;
    let witness = match &verdict.witness {
        Some(phi) => json!({ "image_of_s": element_json(&phi.action().apply(g.s())?), "epsilon": phi.epsilon() }),
        None => Value::Null,
    };
    let result = json!({
        "torsion_order": big_json(a.order()),
        "invariant_factors": bigs_json(a.invariant_factors()),
        "nu": g.nu().map(big_json),
        "gamma_orders": bigs_json(&gamma),
        "has_rinf": verdict.has_rinf,
        "rinf_method": verdict.method,
        "witness": witness,
    });
    let mut query = params_query(m, n, &p);
    query["c"] = json!(c);
    let join = |xs: &[BigInt]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let row = vec![
        p.m.to_string(),
        p.n.to_string(),
        c.to_string(),
        a.order().to_string(),
        join(a.invariant_factors()),
        opt(g.nu()),
        join(&gamma),
        verdict.has_rinf.to_string(),
    ];
    Ok(Report {
        record: OutputRecord { schema_version: SCHEMA_VERSION, command: "quotient", query, result, timing_ms: None },
        table: Table {
            headers: vec!["m", "n", "c", "torsion_order", "invariant_factors", "nu", "gamma_orders", "has_rinf"],
            rows: vec![row],
        },
        code: EXIT_OK,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_reidemeister(
    m: i64,
    n: i64,
    c: usize,
    mu: Option<&BigInt>,
    image: Option<&str>,
    beta: &BigInt,
    eps: i64,
    oracle_cap: u64,
) -> crate::Result<Report> {
    let p = BsParams::new(m, n)?;
    let sign = Sign::from_i64(eps)?;
    let g = Arc::new(GcGroup::build(p, c)?);
    let a = g.torsion();
    let mut query = params_query(m, n, &p);
    query["c"] = json!(c);
    query["beta"] = big_json(beta);
    query["epsilon"] = to_value(&sign);
    let phi = match (mu, image) {
        (Some(mu), _) => {
            query["mu"] = big_json(mu);
            GcAutomorphism::from_scalar(g.clone(), mu, beta, sign)?
        }
        (None, Some(text)) => {
            let coords = parse_coords(text)?;
            query["image_of_s"] = bigs_json(&coords);
            let w = a.element(&coords)?;
            let action = twisted::action_from_generator_image(&g, &w, sign)?.ok_or(Error::NotWellDefined)?;
            GcAutomorphism::new(g.clone(), action, a.scale(beta, g.s())?, sign)?
        }
        (None, None) => return Err(Error::InvalidParams("one of --mu or --image is required".into())),
    };
    let fast = twisted::reidemeister_number(&phi)?;
    let (oracle, oracle_note) = match twisted::reidemeister_oracle(&phi, oracle_cap) {
        Ok(v) => (Some(v), None),
        Err(e @ Error::BoundExceeded { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let agree = oracle.as_ref().map(|o| *o == fast);
    let result = json!({
        "valid": true,
        "image_of_s": element_json(&phi.action().apply(g.s())?),
        "reidemeister": reidemeister_json(&fast),
        "oracle": oracle.as_ref().map(reidemeister_json),
        "oracle_skipped": oracle_note,
        "agree": agree,
    });
    let row = vec![
        p.m.to_string(),
        p.n.to_string(),
        c.to_string(),
        sign.value().to_string(),
        fast.to_string(),
        opt(oracle.as_ref()),
        opt(agree),
    ];
    Ok(Report {
        record: OutputRecord { schema_version: SCHEMA_VERSION, command: "reidemeister", query, result, timing_ms: None },
        table: Table { headers: vec!["m", "n", "c", "epsilon", "reidemeister", "oracle", "agree"], rows: vec![row] },
        code: if agree == Some(false) { EXIT_VERIFICATION_FAILED } else { EXIT_OK },
    })
}

fn parse_coords(text: &str) -> crate::Result<Vec<BigInt>> {
    text.split(',')
        .map(|s| s.trim().parse::<BigInt>().map_err(|_| Error::InvalidParams(format!("bad coordinate {s:?}"))))
        .collect()
}

fn cmd_verify(scope: Scope, cfg: &VerifyConfig) -> crate::Result<Report> {
    let checks: Vec<SuiteCheck> = verify::run_scope(scope, cfg)?;
    let passed = checks.iter().all(|c| c.passed);
    let query = json!({
        "scope": scope,
        "max_n": cfg.max_n,
        "max_c": cfg.max_c,
        "random_matrices": cfg.random_matrices,
        "seed": cfg.seed,
        "oracle_torsion": cfg.oracle_torsion,
        "search_torsion": cfg.search_torsion,
    });
    let rows = checks
        .iter()
        .map(|c| vec![c.name.clone(), c.passed.to_string(), c.cases.to_string(), c.skipped.to_string(), c.detail.clone()])
        .collect();
    Ok(Report {
        record: OutputRecord {
            schema_version: SCHEMA_VERSION,
            command: "verify",
            query,
            result: json!({ "passed": passed, "checks": checks }),
            timing_ms: None,
        },
        table: Table { headers: vec!["check", "passed", "cases", "skipped", "detail"], rows },
        code: if passed { EXIT_OK } else { EXIT_VERIFICATION_FAILED },
    })
}

fn cmd_sweep(m_max: i64, n_max: i64, c_max: usize, aut_cap: u64) -> crate::Result<Report> {
    if m_max < 1 || n_max < 1 {
        return Err(Error::InvalidParams("sweep bounds must be positive".into()));
    }
    let results = degree::sweep(m_max, n_max, c_max, aut_cap)?;
    let rows = results.iter().map(degree_row).collect();
    let query = json!({ "m_max": m_max, "n_max": n_max, "c_max": c_max });
    Ok(Report {
        record: OutputRecord {
            schema_version: SCHEMA_VERSION,
            command: "sweep",
            query,
            result: json!({ "rows": results }),
            timing_ms: None,
        },
        table: Table { headers: DEGREE_HEADERS.to_vec(), rows },
        code: EXIT_OK,
    })
}

pub fn render_csv(t: &Table) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&t.headers).expect("in-memory write");
    for row in &t.rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

pub fn render_markdown(t: &Table) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "| {} |", t.headers.join(" | "));
    let _ = writeln!(s, "|{}", "---|".repeat(t.headers.len()));
    for row in &t.rows {
        let cells: Vec<String> = row.iter().map(|c| c.replace('|', "\\|")).collect();
        let _ = writeln!(s, "| {} |", cells.join(" | "));
    }
    s
}
