//! `glcm`: run instance files and identity suites, print check registry
//! entries, and decide signs in the nonstandard tower.
//!
//! Exit codes: 0 when every selected check passes, 1 when some check fails,
//! 2 for usage errors, unreadable or refused input, and unknown names.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use glcm_core::certificate::Certificate;
use glcm_core::explain;
use glcm_core::instance::InstanceFile;
use glcm_core::nonstd::{parse, Tower};
use glcm_core::suites::{run_suite, SuiteOpts, SUITES};
use glcm_core::{Error, Exec};

const REFUSAL_SCHEMA: &str = "glcm-refusal/1";

#[derive(Parser, Debug)]
#[command(name = "glcm", version, about = "Certificates for finite generalized locally compact models")]
#[command(args_conflicts_with_subcommands = true)]
#[command(group(ArgGroup::new("input").args(["instance", "suite"])))]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Instance file (TOML). Repeat to run a batch.
    #[arg(long, value_name = "PATH")]
    instance: Vec<PathBuf>,

    /// Identity suite: ellis, quasihom, sl2 or nonstd.
    #[arg(long, value_name = "NAME")]
    suite: Option<String>,

    /// Seed; overrides the instance file's own seed.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,

    /// Sample count for a suite.
    #[arg(long, value_name = "N")]
    samples: Option<usize>,

    /// Comma-separated check ids to keep.
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    checks: Vec<String>,

    /// Write the certificate here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads for the parallel kernels.
    #[arg(long, env = "GLCM_WORKERS", value_name = "N", hide_env_values = true)]
    workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the formula, location and anchor of a check id.
    Explain { id: String },
    /// Sign and leading term of a prefix expression such as `(- b (* 3 c))`
    /// over c, b, s, gamma, c', b', s' (x, y, x', y' are circle coordinates).
    Sign { expr: String },
    /// List check ids, optionally for one module.
    Ids { module: Option<String> },
}

enum Outcome {
    Pass,
    Fail,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("glcm: {msg}");
    ExitCode::from(2)
}

/// Write to stdout; a closed pipe (`glcm ... | head`) is not an error.
fn stdout(text: &str) -> Result<(), String> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(format!("stdout: {e}")),
        _ => Ok(()),
    }
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => stdout(text),
    }
}

fn init_workers(n: Option<usize>) -> Result<(), String> {
    let Some(n) = n else { return Ok(()) };
    if n == 0 {
        return Err("GLCM_WORKERS must be at least 1".into());
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    Ok(())
}

/// A refusal document for input that never reached the checks.
fn refusal(path: &Path, e: &Error) -> String {
    let (line, msg) = match e {
        Error::Parse { line, msg } => (*line, msg.clone()),
        other => (0, other.to_string()),
    };
    let doc = serde_json::json!({
        "schema": REFUSAL_SCHEMA,
        "file": path.display().to_string(),
        "line": line,
        "error": msg,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("refusal serializes");
    s.push('\n');
    s
}

fn run_instance(path: &Path, seed: Option<u64>, checks: &[String]) -> Result<Certificate, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse { line: 0, msg: format!("{}: {e}", path.display()) })?;
    let mut file = InstanceFile::parse(&text)?;
    if seed.is_some() {
        file.seed = seed;
    }
    file.run(&text, checks)
}

fn report(cert: &Certificate) -> Outcome {
    let failed: Vec<&str> = cert.failures().iter().map(|c| c.id.as_str()).collect();
    if failed.is_empty() {
        eprintln!("{}: pass ({} checks)", cert.subject, cert.checks.len());
        Outcome::Pass
    } else {
        eprintln!("{}: FAIL {}", cert.subject, failed.join(", "));
        Outcome::Fail
    }
}

fn instances(cli: &Cli) -> ExitCode {
    let run = |p: &PathBuf| run_instance(p, cli.seed, &cli.checks);
    // Each certificate is assembled by one worker; the batch keeps file order.
    let results: Vec<Result<Certificate, Error>> = Exec::default().map_slice(&cli.instance, run);
    let mut docs = Vec::new();
    let mut outcome = Outcome::Pass;
    let mut refused = false;
    for (path, r) in cli.instance.iter().zip(results) {
        match r {
            Ok(cert) => {
                if let Outcome::Fail = report(&cert) {
                    outcome = Outcome::Fail;
                }
                docs.push(cert.to_json());
            }
            Err(e) => {
                eprintln!("glcm: {}: {e}", path.display());
                docs.push(refusal(path, &e));
                refused = true;
            }
        }
    }
    let text = if docs.len() == 1 { docs.pop().expect("one document") } else { format!("[\n{}]\n", docs.join(",\n")) };
    if let Err(e) = write_out(cli.out.as_deref(), &text) {
        return usage(e);
    }
    match (refused, outcome) {
        (true, _) => ExitCode::from(2),
        (false, Outcome::Fail) => ExitCode::from(1),
        (false, Outcome::Pass) => ExitCode::SUCCESS,
    }
}

fn suite(cli: &Cli, name: &str) -> ExitCode {
    if !SUITES.contains(&name) {
        return usage(format!("unknown suite `{name}` (expected one of {})", SUITES.join(", ")));
    }
    let opts = SuiteOpts { seed: cli.seed.unwrap_or(SuiteOpts::default().seed), samples: cli.samples, exec: Exec::default() };
    let mut cert = match run_suite(name, opts) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    if !cli.checks.is_empty() {
        cert.retain_ids(&cli.checks);
    }
    if let Err(e) = write_out(cli.out.as_deref(), &cert.to_json()) {
        return usage(e);
    }
    match report(&cert) {
        Outcome::Pass => ExitCode::SUCCESS,
        Outcome::Fail => ExitCode::from(1),
    }
}

fn sign(text: &str) -> ExitCode {
    let t = Tower::standard();
    let f = match parse(text).and_then(|e| e.to_ratfn(&t)) {
        Ok(f) => f,
        Err(e) => return usage(e),
    };
    let r = t.sign_report(&f);
    let sign = match r.sign {
        1 => "+1",
        -1 => "-1",
        _ => "0",
    };
    match stdout(&format!("sign: {sign}\nleading: {}\n", r.leading)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => usage(e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = init_workers(cli.workers) {
        return usage(e);
    }
    match (&cli.command, &cli.suite) {
        (Some(Command::Explain { id }), _) => match explain::lookup(id) {
            Ok(entry) => match stdout(&explain::render(entry)) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => usage(e),
            },
            Err(e) => usage(e),
        },
        (Some(Command::Sign { expr }), _) => sign(expr),
        (Some(Command::Ids { module }), _) => {
            let text: String = explain::REGISTRY.iter().filter(|e| module.as_deref().map_or(true, |m| m == e.module)).map(|e| format!("{}\t{}\n", e.id, e.module)).collect();
            match stdout(&text) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => usage(e),
            }
        }
        (None, Some(name)) => suite(&cli, name),
        (None, None) if !cli.instance.is_empty() => instances(&cli),
        (None, None) => usage("nothing to do: pass --instance PATH, --suite NAME, or a subcommand (see --help)"),
    }
}
