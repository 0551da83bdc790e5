//! Command-line front end for exact Lie, quasi-Lie, and tree diagram
//! computations.
//!
//! Four subcommands cover the library surface:
//!
//! * `dims` tabulates, per degree, the rank of the free Lie ring, the
//!   structure of the free quasi-Lie ring, and the structure of the
//!   kernel between them.
//! * `group` prints the structure of one named group object per degree.
//! * `verify` runs one named verification suite and exits nonzero when
//!   any joint fails.
//! * `conjecture` scans a named open question degree by degree and
//!   reports verdicts without ever gating: counterexamples are data,
//!   not errors.
//!
//! Degrees in the requested range are independent jobs; they run on a
//! private thread pool sized by `--jobs` and the report is assembled
//! in degree order afterwards, so the serialized output is identical
//! whatever the parallelism. Timings appear only in the text format
//! for the same reason.
//!
//! Exit codes: 0 when everything passed, 1 when a verification failed,
//! 2 on usage errors, 3 when a computation was refused because its
//! estimated free cover exceeds `--limit`.

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use std::path::PathBuf;
use std::time::{Duration, Instant};
use treelie::cache::Cache;
use treelie::report::{CheckRow, Format, GroupRow, JobSpec, Report, Status, StructureInfo};
use treelie::verify::{self, CheckName, ConjectureName, GroupObject};

#[derive(Parser)]
#[command(
    name = "treelie",
    version,
    about = "Exact tables and verifications for free Lie rings, quasi-Lie rings, and tree diagram groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate dim L_k, the structure of L'_k, and the structure of K_k
    Dims(CommonArgs),
    /// Print the structure of one group object per degree
    Group {
        /// One of: L, Lq, K, D, Dq, At, KerEta
        object: String,
        #[command(flatten)]
        args: CommonArgs,
    },
    /// Run a named verification suite
    Verify {
        /// One of: lemma-quasi, cor-dd, lemma-root, thm-tree, rho-eta, tau
        name: String,
        #[command(flatten)]
        args: CommonArgs,
    },
    /// Scan a named conjecture for counterexamples, reporting only
    Conjecture {
        /// One of: square-mono, eta-iso
        name: String,
        #[command(flatten)]
        args: CommonArgs,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Rank of the free coefficient group
    #[arg(long)]
    n: Option<u32>,
    /// Surface genus g, setting the rank to 2g; --n takes precedence
    #[arg(long)]
    genus: Option<u32>,
    /// Single degree, or the lower end of the range when --kmax is given
    #[arg(long)]
    k: Option<u32>,
    /// Upper end of the degree range; the range starts at 1 when --k is absent
    #[arg(long)]
    kmax: Option<u32>,
    /// Output format: text, json, or csv
    #[arg(long, default_value = "text")]
    format: String,
    /// Directory for cached structures, created if missing
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Number of degrees computed concurrently
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Refuse computations whose estimated free cover exceeds this many generators
    #[arg(long, default_value_t = 50_000)]
    limit: u128,
}

fn usage(msg: &str) -> ! {
    eprintln!("error: {msg}");
    std::process::exit(2);
}

fn refuse(msg: &str) -> ! {
    eprintln!("refusing: {msg}");
    std::process::exit(3);
}

/// Resolves the shared flags into a job description plus a cache
/// handle, exiting with a usage error when they do not make sense.
fn resolve(args: &CommonArgs, checks: Vec<String>) -> (JobSpec, Cache) {
    let n = match (args.n, args.genus) {
        (Some(n), _) => n,
        (None, Some(g)) => 2 * g,
        (None, None) => usage("one of --n or --genus is required"),
    };
    let k_range = match (args.k, args.kmax) {
        (Some(k), Some(kmax)) => (k, kmax),
        (Some(k), None) => (k, k),
        (None, Some(kmax)) => (1, kmax),
        (None, None) => usage("one of --k or --kmax is required"),
    };
    if k_range.0 < 1 {
        usage("degrees start at 1");
    }
    if k_range.1 < k_range.0 {
        usage("--kmax must not be below --k");
    }
    let format = match Format::parse(&args.format) {
        Some(f) => f,
        None => usage("--format must be text, json, or csv"),
    };
    if args.jobs == 0 {
        usage("--jobs must be at least 1");
    }
    let cache = match &args.cache {
        Some(dir) => Cache::open(dir),
        None => Cache::disabled(),
    };
    let spec = JobSpec {
        n,
        k_range,
        checks,
        format,
        cache_dir: args.cache.clone(),
        jobs: args.jobs,
        generator_limit: args.limit,
    };
    (spec, cache)
}

fn degrees(spec: &JobSpec) -> Vec<u32> {
    (spec.k_range.0..=spec.k_range.1).collect()
}

/// Runs one closure per task on a pool of the requested width,
/// preserving task order in the results.
fn run_tasks<T, R, F>(jobs: usize, tasks: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Send + Sync,
{
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool,
        Err(e) => usage(&format!("cannot build a pool of {jobs} threads: {e}")),
    };
    pool.install(|| tasks.par_iter().map(f).collect())
}

type Timing = (String, Duration);

/// Computes one structure row, consulting the cache first and skipping
/// the computation entirely when the size estimate is over the limit.
fn structure_row(
    object: GroupObject,
    n: u32,
    k: u32,
    limit: u128,
    cache: &Cache,
) -> (GroupRow, Timing) {
    let start = Instant::now();
    let estimate = object.estimate(n, k);
    let (structure, note) = if estimate > limit {
        (
            None,
            Some(format!(
                "skipped: estimated {estimate} generators exceeds limit {limit}"
            )),
        )
    } else {
        let s = match cache.get_structure(object.name(), n, k) {
            Some(s) => s,
            None => {
                let s = object.compute(n, k);
                cache.put_structure(object.name(), n, k, &s);
                s
            }
        };
        (Some(StructureInfo::from(&s)), None)
    };
    let row = GroupRow {
        object: object.name().to_string(),
        n,
        k,
        structure,
        note,
    };
    (row, (format!("{} n={n} k={k}", object.name()), start.elapsed()))
}

fn finish(report: &Report, format: Format, code: i32) -> ! {
    print!("{}", report.render(format));
    std::process::exit(code);
}

/// Structure table for the Lie ring, the quasi-Lie ring, and the
/// kernel between them, one row triple per degree. Oversized rows are
/// marked skipped instead of refusing the whole table.
fn cmd_dims(args: &CommonArgs) -> ! {
    let objects = [GroupObject::L, GroupObject::Lq, GroupObject::K];
    let requested = objects.iter().map(|o| o.name().to_string()).collect();
    let (spec, cache) = resolve(args, requested);
    let mut report = Report::new("dims", &spec);
    let rows = run_tasks(spec.jobs, &degrees(&spec), |&k| {
        objects.map(|object| structure_row(object, spec.n, k, spec.generator_limit, &cache))
    });
    for triple in rows {
        for (row, timing) in triple {
            report.groups.push(row);
            report.timings.push(timing);
        }
    }
    finish(&report, spec.format, 0);
}

/// Structure of a single group object across the degree range, with
/// the same per-row skip behavior as the dims table.
fn cmd_group(object_name: &str, args: &CommonArgs) -> ! {
    let object = match GroupObject::parse(object_name) {
        Some(o) => o,
        None => usage(&format!(
            "unknown group object '{object_name}'; known: L, Lq, K, D, Dq, At, KerEta"
        )),
    };
    let (spec, cache) = resolve(args, vec![object.name().to_string()]);
    let mut report = Report::new("group", &spec);
    let rows = run_tasks(spec.jobs, &degrees(&spec), |&k| {
        structure_row(object, spec.n, k, spec.generator_limit, &cache)
    });
    for (row, timing) in rows {
        report.groups.push(row);
        report.timings.push(timing);
    }
    finish(&report, spec.format, 0);
}

/// One named verification across the degree range. Any degree whose
/// estimated free cover is over the limit refuses the whole job up
/// front, before any work is done.
fn cmd_verify(check_name: &str, args: &CommonArgs) -> ! {
    let name = match CheckName::parse(check_name) {
        Some(c) => c,
        None => usage(&format!(
            "unknown verification '{check_name}'; known: lemma-quasi, cor-dd, lemma-root, thm-tree, rho-eta, tau"
        )),
    };
    let (spec, _cache) = resolve(args, vec![name.name().to_string()]);
    for k in degrees(&spec) {
        let estimate = verify::check_estimate(name, spec.n, k);
        if estimate > spec.generator_limit {
            refuse(&format!(
                "{} at n={} k={k} touches an estimated {estimate} free-cover generators, \
                 above the limit {}; raise --limit to proceed anyway",
                name.name(),
                spec.n,
                spec.generator_limit
            ));
        }
    }
    let mut report = Report::new("verify", &spec);
    let outcomes = run_tasks(spec.jobs, &degrees(&spec), |&k| {
        let start = Instant::now();
        let (check, groups) = verify::run_check(name, spec.n, k);
        (check, groups, (format!("{} n={} k={k}", name.name(), spec.n), start.elapsed()))
    });
    for (check, groups, timing) in outcomes {
        report.checks.push(check);
        report.groups.extend(groups);
        report.timings.push(timing);
    }
    let code = if report.any_check_failed() { 1 } else { 0 };
    finish(&report, spec.format, code);
}

/// One named conjecture scan across the degree range. Oversized
/// degrees produce skipped rows; verdicts are informational and the
/// exit code stays 0 either way, so pipelines can require verify
/// suites while keeping scans advisory.
fn cmd_conjecture(conjecture_name: &str, args: &CommonArgs) -> ! {
    let name = match ConjectureName::parse(conjecture_name) {
        Some(c) => c,
        None => usage(&format!(
            "unknown conjecture '{conjecture_name}'; known: square-mono, eta-iso"
        )),
    };
    let (spec, _cache) = resolve(args, vec![name.name().to_string()]);
    let mut report = Report::new("conjecture", &spec);
    let outcomes = run_tasks(spec.jobs, &degrees(&spec), |&k| {
        let start = Instant::now();
        let estimate = verify::conjecture_estimate(name, spec.n, k);
        let row = if estimate > spec.generator_limit {
            CheckRow {
                name: name.name().to_string(),
                n: spec.n,
                k,
                status: Status::Skipped,
                witness: Some(format!(
                    "skipped (size): estimated {estimate} generators exceeds limit {}",
                    spec.generator_limit
                )),
            }
        } else {
            verify::run_conjecture(name, spec.n, k)
        };
        (row, (format!("{} n={} k={k}", name.name(), spec.n), start.elapsed()))
    });
    for (row, timing) in outcomes {
        report.checks.push(row);
        report.timings.push(timing);
    }
    finish(&report, spec.format, 0);
}

fn main() {
    let cli = Cli::parse();
    match &cli.command {
        Command::Dims(args) => cmd_dims(args),
        Command::Group { object, args } => cmd_group(object, args),
        Command::Verify { name, args } => cmd_verify(name, args),
        Command::Conjecture { name, args } => cmd_conjecture(name, args),
    }
}
