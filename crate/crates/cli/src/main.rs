//! `magicrect`: build, verify, convert and decide magic rectangle sets.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use mrs_core::array::io::{export, from_json, to_json, Format};
use mrs_core::array::{MrsInstance, MrsParams};
use mrs_core::construct::{base_case_r8_2, theorem_main, BaseCaseKind};
use mrs_core::diagonal::{diagonal_n2c, diagonal_n_2b_c, diagonal_n_4b_c};
use mrs_core::existence::{
    cross_check, decide_with, oracle_search, DecideOptions, ExistenceVerdict, OracleOptions, Status,
    SweepOptions,
};
use mrs_core::integer::{build_mrs_2_b_c, to_cyclic_group};
use mrs_core::search::{SearchOptions, DEFAULT_BUDGET};
use mrs_core::{FiniteAbelianGroup, MrsError};

const EXIT_OK: u8 = 0;
const EXIT_NOT_EXISTS: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "magicrect", version, about = "Magic rectangle sets over finite abelian groups")]
struct Cli {
    /// Output format for instances: json, csv, latex or pretty.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Write LaTeX group elements as concatenated coordinates.
    #[arg(long, global = true)]
    compact: bool,
    /// Worker threads for searches and sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Search node budget per task.
    #[arg(long, global = true, env = "MAGICRECT_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Seed reserved for randomized search restarts; the current search is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Skip the final verification of constructed output.
    #[arg(long, global = true)]
    no_verify: bool,
    /// Transpose constructed or loaded instances before output.
    #[arg(long, global = true)]
    transpose: bool,
    /// Report errors as JSON on stderr.
    #[arg(long, global = true)]
    json: bool,
    /// Write the main output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an instance with one of the constructions.
    #[command(subcommand)]
    Construct(Construct),
    /// Check an instance stored as JSON.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Decide existence for given parameters and group.
    Decide {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        group: String,
        /// Also run the exhaustive-search oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Decide every case over all groups up to an order and write a JSON report.
    Sweep {
        #[arg(long)]
        max_order: u64,
        /// Cross-check each case against the oracle.
        #[arg(long)]
        oracle: bool,
        /// Directory receiving one JSON file per witness.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
    /// Convert a stored instance to another format.
    Export {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct ParamArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    c: usize,
}

impl From<ParamArgs> for MrsParams {
    fn from(a: ParamArgs) -> Self {
        MrsParams::new(a.m, a.n, a.s, a.k, a.c)
    }
}

#[derive(Subcommand, Debug)]
enum Construct {
    /// Integer 2 x b set with c arrays (b even, b >= 4).
    #[command(name = "int-2bc")]
    Int2bc {
        #[arg(long)]
        b: usize,
        #[arg(long)]
        c: usize,
        /// Reduce entries into the cyclic group of order 2bc.
        #[arg(long)]
        cyclic: bool,
    },
    /// Zero-sum r x 8 base case with two arrays.
    GroupR8 {
        #[arg(long)]
        r: u64,
        /// 2-part shape: z4z4, z2z8, z2z2z4 or z2z2z2z2.
        #[arg(long)]
        kind: String,
    },
    /// Full (2l+1) x 8 set with 4h+2 arrays.
    ThmMain {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        group: String,
    },
    /// Diagonal n x n set with k filled diagonals (k = 2, k even, or k = 0 mod 4).
    Diagonal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        group: String,
    },
    /// Any parameters, through whichever construction applies.
    Rect {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        group: String,
    },
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(code: u8, kind: &'static str, message: impl Into<String>) -> Self {
        Failure { code, kind, message: message.into() }
    }
}

impl From<MrsError> for Failure {
    fn from(e: MrsError) -> Self {
        let (code, kind) = match &e {
            MrsError::NoSuchObject(_) => (EXIT_NOT_EXISTS, "no_such_object"),
            MrsError::BudgetExceeded { .. } => (EXIT_UNKNOWN, "budget_exceeded"),
            MrsError::ConstructionFailed(_) => (EXIT_VERIFY, "construction_failed"),
            _ => (EXIT_USAGE, "invalid_input"),
        };
        Failure::new(code, kind, e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            if cli.json {
                eprintln!("{}", json!({ "error": f.kind, "message": f.message, "exit_code": f.code }));
            } else {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let format: Format = cli.format.parse()?;
    let search = SearchOptions { budget: cli.budget, jobs: cli.jobs.max(1), ..Default::default() };
    match &cli.command {
        Command::Construct(c) => {
            let inst = construct(c, &search)?;
            emit_instance(cli, format, inst, true)
        }
        Command::Verify { input } => {
            let inst = load(input)?;
            let report = inst.verify();
            emit(cli, &serde_json::to_string_pretty(&report).expect("report serializes"))?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_NOT_EXISTS })
        }
        Command::Export { input } => emit_instance(cli, format, load(input)?, false),
        Command::Decide { params, group, oracle } => {
            let p: MrsParams = (*params).into();
            let g = parse_group(group)?;
            let opts = DecideOptions { witnesses: true, search };
            let verdict = decide_with(p, &g, &opts)?;
            let mut doc = json!({ "params": p, "group": g.to_string(), "decide": verdict_json(&verdict) });
            let mut status = verdict.status;
            if *oracle {
                let o = oracle_search(p, &g, &OracleOptions { search, ..Default::default() })?;
                if !status.is_definite() {
                    status = o.status;
                }
                doc["oracle"] = verdict_json(&o);
            }
            doc["status"] = json!(status);
            emit(cli, &serde_json::to_string_pretty(&doc).expect("verdict serializes"))?;
            Ok(status_code(status))
        }
        Command::Sweep { max_order, oracle, witness_dir } => {
            let opts = SweepOptions {
                max_order: *max_order,
                oracle: oracle.then(|| OracleOptions {
                    search: SearchOptions { jobs: 1, ..search },
                    ..Default::default()
                }),
                decide: DecideOptions { witnesses: true, search: SearchOptions { jobs: 1, ..search } },
                jobs: cli.jobs.max(1),
            };
            let report = cross_check(&opts)?;
            if let Some(dir) = witness_dir {
                fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
                for row in &report.rows {
                    if let (Some(name), Some(w)) = (&row.witness_ref, &row.witness) {
                        let path = dir.join(format!("{}.json", file_stem(name)));
                        fs::write(&path, to_json(w)).map_err(|e| io_failure(&path, e))?;
                    }
                }
            }
            emit(cli, &serde_json::to_string_pretty(&report).expect("report serializes"))?;
            eprintln!(
                "{} cases, {} contradictions, {} frontier, {} conjecture violations",
                report.rows.len(),
                report.contradictions.len(),
                report.frontier.len(),
                report.conjecture_violations.len()
            );
            Ok(if report.is_consistent() { EXIT_OK } else { EXIT_VERIFY })
        }
    }
}

fn construct(c: &Construct, search: &SearchOptions) -> Result<MrsInstance, Failure> {
    Ok(match c {
        Construct::Int2bc { b, c, cyclic } => {
            let inst = build_mrs_2_b_c(*b, *c)?;
            if *cyclic {
                to_cyclic_group(&inst)?
            } else {
                inst
            }
        }
        Construct::GroupR8 { r, kind } => base_case_r8_2(*r, kind.parse::<BaseCaseKind>()?)?,
        Construct::ThmMain { l, h, group } => theorem_main(*l, *h, &parse_group(group)?)?,
        Construct::Diagonal { n, k, c, group } => {
            let g = parse_group(group)?;
            match k {
                2 => diagonal_n2c(*n, *c, &g)?,
                k if k % 4 == 0 => diagonal_n_4b_c(*n, k / 4, *c, &g)?,
                k if k % 2 == 0 => diagonal_n_2b_c(*n, k / 2, *c, &g)?,
                _ => return Err(Failure::new(EXIT_USAGE, "invalid_input", "k must be even")),
            }
        }
        Construct::Rect { params, group } => {
            let p: MrsParams = (*params).into();
            let g = parse_group(group)?;
            let v = decide_with(p, &g, &DecideOptions { witnesses: true, search: *search })?;
            match v.witness {
                Some(w) => {
                    eprintln!("construction: {} {}", v.reason, v.note);
                    w
                }
                None => {
                    let code = status_code(v.status).max(EXIT_NOT_EXISTS);
                    return Err(Failure::new(code, "no_construction", format!("no construction available: {v}")));
                }
            }
        }
    })
}

fn emit_instance(cli: &Cli, format: Format, inst: MrsInstance, verify: bool) -> Outcome {
    let inst = if cli.transpose { inst.transpose() } else { inst };
    if verify && !cli.no_verify {
        let report = inst.verify();
        if !report.passed() {
            return Err(Failure::new(EXIT_VERIFY, "verification_failed", report.problems.join("; ")));
        }
    }
    emit(cli, &export(&inst, format, cli.compact))?;
    Ok(EXIT_OK)
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    let text = if text.ends_with('\n') { text.to_string() } else { format!("{text}\n") };
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<MrsInstance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    Ok(from_json(&text)?)
}

fn parse_group(spec: &str) -> Result<FiniteAbelianGroup, Failure> {
    Ok(spec.parse::<FiniteAbelianGroup>()?)
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::new(EXIT_USAGE, "io", format!("{}: {e}", path.display()))
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::Exists => EXIT_OK,
        Status::NotExists => EXIT_NOT_EXISTS,
        Status::Unknown => EXIT_UNKNOWN,
    }
}

fn verdict_json(v: &ExistenceVerdict) -> Value {
    let mut doc = json!({ "status": v.status, "reason": v.reason, "note": v.note });
    if let Some(c) = &v.certificate {
        doc["certificate"] = json!(c);
    }
    if let Some(w) = &v.witness {
        doc["witness"] = serde_json::from_str(&to_json(w)).expect("instance JSON parses");
    }
    doc
}

fn file_stem(name: &str) -> String {
    name.chars().map(|ch| if ch.is_ascii_alphanumeric() { ch } else { '_' }).collect()
}
