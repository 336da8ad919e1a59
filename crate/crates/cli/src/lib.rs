//! Command-line front end for the recurrence toolkit.
//!
//! Subcommands: `eval` (print terms), `classify` (decide geometric
//! behaviour), `primes` (factor terms and report the prime divisor set),
//! `example` (instantiate a built-in family), `search` (classify a whole
//! coefficient box and hunt for prime-scarce sequences).
//!
//! Exit codes
//! - 0: success (including `--help` / `--version`)
//! - 1: usage or syntax errors — unknown flags, unparseable polynomials,
//!   unknown family names, missing family parameters
//! - 2: precondition violations — polynomials that are not integer-valued,
//!   malformed or mismatched checkpoints, out-of-range values, i/o failures
//!
//! All output is ASCII and deterministic; `--json` switches every
//! subcommand to a single-line JSON payload on stdout.

mod json;
mod render;
mod search;

pub use search::{
    run_search, spec_at, spec_count, CandidateJson, RecordJson, SearchConfig, SearchError,
    SearchReportJson, SummaryJson, SPEC_CAP,
};

use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use ultgeo::{
    arithmetic_progression, certify_finite_prime_set, classify, derangements, double_factorials,
    example1, example2, example3, factorials, geometric_partial_sums, geometric_progression,
    parse_poly, prime_growth_curve, prime_set_up_to, remark_family1, remark_family2, FactorPolicy,
    FamilyInstance, Poly, SeqSpec,
};

use json::{classification_tag, to_line, ClassifyJson, EvalJson, FamilyJson, ParamsJson, PrimesJson, SpecJson};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;

// ---- Argument grammar ----

#[derive(Parser)]
#[command(
    name = "ultgeo",
    version,
    about = "Exact tools for sequences a(n) = f(n)*a(n-1) + g(n)*h(n)^n \
             with integer-valued polynomial coefficients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the terms a(0)..a(N), space-separated
    Eval(EvalArgs),
    /// Decide: zero, geometric, ultimately geometric, or neither
    Classify(ClassifyArgs),
    /// Factor the terms and report every prime seen, with first occurrences
    Primes(PrimesArgs),
    /// Instantiate a built-in family and evaluate / classify / factor it
    Example(ExampleArgs),
    /// Classify every spec in a coefficient box; list prime-scarce ones
    Search(SearchArgs),
}

#[derive(Args)]
struct SpecFlags {
    /// Polynomial f, e.g. "2*x^2 - 3*x + 1", "ff(x,3)", "C(x,2)"
    #[arg(long, value_name = "POLY", allow_hyphen_values = true)]
    f: String,
    /// Polynomial g (same grammar)
    #[arg(long, value_name = "POLY", allow_hyphen_values = true)]
    g: String,
    /// Polynomial h (same grammar)
    #[arg(long, value_name = "POLY", allow_hyphen_values = true)]
    h: String,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    spec: SpecFlags,
    /// Last index to print (inclusive)
    #[arg(short = 'n', long = "terms", value_name = "N", default_value_t = 10)]
    terms: usize,
    /// Emit a JSON payload instead of plain text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    spec: SpecFlags,
    /// Emit a JSON payload instead of plain text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PrimesArgs {
    #[command(flatten)]
    spec: SpecFlags,
    /// Last index to factor (inclusive)
    #[arg(short = 'n', long = "terms", value_name = "N", default_value_t = 50)]
    terms: usize,
    /// Strictly increasing indices for a prime-count growth curve
    #[arg(long, value_name = "N1,N2,...")]
    checkpoints: Option<String>,
    /// Trial-division bound used before Pollard rho
    #[arg(long, value_name = "B", default_value_t = 10_000)]
    trial_bound: u64,
    /// Iteration budget per Pollard rho attempt
    #[arg(long, value_name = "B", default_value_t = 8_192)]
    rho_budget: u64,
    /// Emit a JSON payload instead of plain text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExampleArgs {
    /// Family: example-1, example-2, example-3, remark-1, remark-2,
    /// arithmetic, geometric, partial-sums, factorial, double-factorial,
    /// derangement
    #[arg(value_name = "FAMILY")]
    name: String,
    /// What to do with the instantiated sequence
    #[arg(long, value_enum, default_value = "eval")]
    action: ExampleAction,
    /// Tail ratio (example-1/2/3, remark-1/2)
    #[arg(long, allow_negative_numbers = true)]
    b: Option<i64>,
    /// Tail scale (example-1/2/3, remark-1/2, arithmetic, geometric,
    /// partial-sums)
    #[arg(long, allow_negative_numbers = true)]
    c: Option<i64>,
    /// Extra ratio factor (example-3, remark-2)
    #[arg(long, allow_negative_numbers = true)]
    d: Option<i64>,
    /// Common ratio (geometric, partial-sums)
    #[arg(long, allow_negative_numbers = true)]
    q: Option<i64>,
    /// Index where the geometric tail starts (example-2/3, remark-1/2)
    #[arg(long)]
    n0: Option<usize>,
    /// Offset in f(x) = 2x + l (double-factorial; default 1)
    #[arg(long)]
    l: Option<u32>,
    /// Last index used by the eval and primes actions (inclusive)
    #[arg(short = 'n', long = "terms", value_name = "N", default_value_t = 10)]
    terms: usize,
    /// Emit a JSON payload instead of plain text
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExampleAction {
    Eval,
    Classify,
    Primes,
}

#[derive(Args)]
struct SearchArgs {
    /// Degree bound: every polynomial gets deg-max + 1 coefficients
    #[arg(long, value_name = "D", default_value_t = 1)]
    deg_max: u32,
    /// Coefficients range over [-coeff-max, coeff-max]
    #[arg(long, value_name = "C", default_value_t = 1)]
    coeff_max: u32,
    /// Verdicts are cross-checked against the window a(0)..a(N)
    #[arg(short = 'n', long = "terms", value_name = "N", default_value_t = 20)]
    terms: usize,
    /// Primes are counted among a(0)..a(N)
    #[arg(long, value_name = "N", default_value_t = 50)]
    prime_checkpoint: usize,
    /// Candidates have at most this many distinct primes in the scan
    #[arg(long, value_name = "K", default_value_t = 3)]
    prime_threshold: usize,
    /// JSONL checkpoint file; an interrupted search resumes from it
    #[arg(long, value_name = "PATH")]
    checkpoint: Option<PathBuf>,
    /// Emit a JSON payload instead of plain text
    #[arg(long)]
    json: bool,
}

// ---- Errors and entry point ----

enum CliError {
    Usage(String),
    Precondition(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Io(io) => CliError::Io(io),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

/// Parses `argv` (including the program name) and runs the command,
/// writing results to `out` and diagnostics to `err`. Returns the exit
/// code documented at the crate level.
pub fn run<O: Write, E: Write>(argv: &[String], out: &mut O, err: &mut E) -> u8 {
    let cli = match Cli::try_parse_from(argv.iter().map(String::as_str)) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Eval(args) => cmd_eval(args, out),
        Command::Classify(args) => cmd_classify(args, out),
        Command::Primes(args) => cmd_primes(args, out),
        Command::Example(args) => cmd_example(args, out),
        Command::Search(args) => cmd_search(args, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Precondition(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_PRECONDITION
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_PRECONDITION
        }
    }
}

// ---- Shared flag handling ----

fn parse_poly_flag(flag: &str, text: &str) -> Result<Poly, CliError> {
    parse_poly(text).map_err(|e| CliError::Usage(format!("invalid --{flag}: {e}")))
}

fn build_spec(flags: &SpecFlags) -> Result<SeqSpec, CliError> {
    let f = parse_poly_flag("f", &flags.f)?;
    let g = parse_poly_flag("g", &flags.g)?;
    let h = parse_poly_flag("h", &flags.h)?;
    SeqSpec::new(f, g, h).map_err(|e| CliError::Precondition(e.to_string()))
}

fn parse_checkpoints(text: &str) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::new();
    for piece in text.split(',') {
        let piece = piece.trim();
        let n: usize = piece
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid --checkpoints entry '{piece}'")))?;
        out.push(n);
    }
    if !out.windows(2).all(|w| w[0] < w[1]) {
        return Err(CliError::Precondition(
            "checkpoints must be strictly increasing".into(),
        ));
    }
    Ok(out)
}

// ---- Subcommands ----

fn cmd_eval<W: Write>(args: &EvalArgs, out: &mut W) -> Result<(), CliError> {
    let spec = build_spec(&args.spec)?;
    let terms = spec.terms(args.terms);
    if args.json {
        let payload = EvalJson {
            family: None,
            spec: SpecJson::from_spec(&spec),
            terms: terms.iter().map(ToString::to_string).collect(),
        };
        writeln!(out, "{}", to_line(&payload))?;
    } else {
        render::write_terms_line(out, &terms)?;
    }
    Ok(())
}

fn cmd_classify<W: Write>(args: &ClassifyArgs, out: &mut W) -> Result<(), CliError> {
    let spec = build_spec(&args.spec)?;
    let verdict = classify(&spec);
    let certificate = certify_finite_prime_set(&spec, &FactorPolicy::default());
    if args.json {
        writeln!(
            out,
            "{}",
            to_line(&ClassifyJson::new(&spec, &verdict, certificate.as_ref()))
        )?;
    } else {
        render::write_spec_lines(out, &spec)?;
        render::write_classification(out, &verdict, certificate.as_ref())?;
    }
    Ok(())
}

fn cmd_primes<W: Write>(args: &PrimesArgs, out: &mut W) -> Result<(), CliError> {
    let spec = build_spec(&args.spec)?;
    let policy = FactorPolicy {
        trial_bound: args.trial_bound,
        rho_budget: args.rho_budget,
    };
    let report = prime_set_up_to(&spec, args.terms, &policy);
    let growth = match &args.checkpoints {
        Some(text) => Some(prime_growth_curve(&spec, &parse_checkpoints(text)?, &policy)),
        None => None,
    };
    if args.json {
        writeln!(out, "{}", to_line(&PrimesJson::new(&spec, &report, growth)))?;
    } else {
        render::write_prime_report(out, &report, growth.as_deref())?;
    }
    Ok(())
}

fn cmd_search<W: Write>(args: &SearchArgs, out: &mut W) -> Result<(), CliError> {
    let config = SearchConfig {
        deg_max: args.deg_max as usize,
        coeff_max: args.coeff_max as i64,
        term_count: args.terms,
        prime_checkpoint: args.prime_checkpoint,
        prime_threshold: args.prime_threshold,
    };
    let report = run_search(&config, args.checkpoint.as_deref())?;
    if args.json {
        writeln!(out, "{}", to_line(&report))?;
    } else {
        render::write_search_report(out, &report)?;
    }
    Ok(())
}

// ---- The example subcommand ----

fn require<T: Copy>(value: Option<T>, flag: &str, family: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("family '{family}' requires --{flag}")))
}

fn positive_reset(n0: usize) -> Result<usize, CliError> {
    if n0 == 0 {
        return Err(CliError::Precondition(
            "--n0 must be at least 1: these families place the reset after the start".into(),
        ));
    }
    Ok(n0)
}

fn ensure_only(name: &str, args: &ExampleArgs, allowed: &[&str]) -> Result<(), CliError> {
    let given = [
        ("b", args.b.is_some()),
        ("c", args.c.is_some()),
        ("d", args.d.is_some()),
        ("q", args.q.is_some()),
        ("n0", args.n0.is_some()),
        ("l", args.l.is_some()),
    ];
    for (flag, present) in given {
        if present && !allowed.contains(&flag) {
            return Err(CliError::Usage(format!(
                "family '{name}' does not take --{flag}"
            )));
        }
    }
    Ok(())
}

fn build_family(args: &ExampleArgs) -> Result<(FamilyInstance, ParamsJson), CliError> {
    let name = args.name.as_str();
    let none = ParamsJson::default();
    let built = match name {
        "example-1" => {
            ensure_only(name, args, &["b", "c"])?;
            let b = require(args.b, "b", name)?;
            let c = require(args.c, "c", name)?;
            (example1(b, c), ParamsJson { b: Some(b), c: Some(c), ..none })
        }
        "example-2" => {
            ensure_only(name, args, &["b", "c", "n0"])?;
            let b = require(args.b, "b", name)?;
            let c = require(args.c, "c", name)?;
            let n0 = positive_reset(require(args.n0, "n0", name)?)?;
            (
                example2(b, c, n0),
                ParamsJson { b: Some(b), c: Some(c), n0: Some(n0), ..none },
            )
        }
        "example-3" => {
            ensure_only(name, args, &["b", "c", "d", "n0"])?;
            let b = require(args.b, "b", name)?;
            let c = require(args.c, "c", name)?;
            let d = require(args.d, "d", name)?;
            let n0 = positive_reset(require(args.n0, "n0", name)?)?;
            (
                example3(b, c, d, n0),
                ParamsJson { b: Some(b), c: Some(c), d: Some(d), n0: Some(n0), ..none },
            )
        }
        "remark-1" => {
            ensure_only(name, args, &["b", "c", "n0"])?;
            let b = require(args.b, "b", name)?;
            let c = require(args.c, "c", name)?;
            let n0 = positive_reset(require(args.n0, "n0", name)?)?;
            (
                remark_family1(b, c, n0),
                ParamsJson { b: Some(b), c: Some(c), n0: Some(n0), ..none },
            )
        }
        "remark-2" => {
            ensure_only(name, args, &["b", "c", "d", "n0"])?;
            let b = require(args.b, "b", name)?;
            let c = require(args.c, "c", name)?;
            let d = require(args.d, "d", name)?;
            let n0 = positive_reset(require(args.n0, "n0", name)?)?;
            (
                remark_family2(b, c, d, n0),
                ParamsJson { b: Some(b), c: Some(c), d: Some(d), n0: Some(n0), ..none },
            )
        }
        "arithmetic" => {
            ensure_only(name, args, &["c"])?;
            let c = require(args.c, "c", name)?;
            (arithmetic_progression(c), ParamsJson { c: Some(c), ..none })
        }
        "geometric" => {
            ensure_only(name, args, &["q", "c"])?;
            let q = require(args.q, "q", name)?;
            let c = require(args.c, "c", name)?;
            (geometric_progression(q, c), ParamsJson { c: Some(c), q: Some(q), ..none })
        }
        "partial-sums" => {
            ensure_only(name, args, &["c", "q"])?;
            let c = require(args.c, "c", name)?;
            let q = require(args.q, "q", name)?;
            (geometric_partial_sums(c, q), ParamsJson { c: Some(c), q: Some(q), ..none })
        }
        "factorial" => {
            ensure_only(name, args, &[])?;
            (factorials(), none)
        }
        "double-factorial" => {
            ensure_only(name, args, &["l"])?;
            let l = args.l.unwrap_or(1);
            (double_factorials(l), ParamsJson { l: Some(l), ..none })
        }
        "derangement" => {
            ensure_only(name, args, &[])?;
            (derangements(), none)
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown family '{other}' (known: example-1, example-2, example-3, \
                 remark-1, remark-2, arithmetic, geometric, partial-sums, factorial, \
                 double-factorial, derangement)"
            )));
        }
    };
    Ok(built)
}

fn cmd_example<W: Write>(args: &ExampleArgs, out: &mut W) -> Result<(), CliError> {
    let (instance, params) = build_family(args)?;
    let family = FamilyJson {
        name: instance.name,
        params: params.clone(),
        claimed: classification_tag(&instance.claimed),
    };
    match args.action {
        ExampleAction::Eval => {
            let terms = instance.spec.terms(args.terms);
            if args.json {
                let payload = EvalJson {
                    family: Some(family),
                    spec: SpecJson::from_spec(&instance.spec),
                    terms: terms.iter().map(ToString::to_string).collect(),
                };
                writeln!(out, "{}", to_line(&payload))?;
            } else {
                render::write_family_header(out, &instance, &params)?;
                render::write_terms_line(out, &terms)?;
            }
        }
        ExampleAction::Classify => {
            let verdict = classify(&instance.spec);
            let certificate = certify_finite_prime_set(&instance.spec, &FactorPolicy::default());
            if args.json {
                let mut payload = ClassifyJson::new(&instance.spec, &verdict, certificate.as_ref());
                payload.family = Some(family);
                writeln!(out, "{}", to_line(&payload))?;
            } else {
                render::write_family_header(out, &instance, &params)?;
                render::write_classification(out, &verdict, certificate.as_ref())?;
            }
        }
        ExampleAction::Primes => {
            let report = prime_set_up_to(&instance.spec, args.terms, &FactorPolicy::default());
            if args.json {
                let mut payload = PrimesJson::new(&instance.spec, &report, None);
                payload.family = Some(family);
                writeln!(out, "{}", to_line(&payload))?;
            } else {
                render::write_family_header(out, &instance, &params)?;
                render::write_prime_report(out, &report, None)?;
            }
        }
    }
    Ok(())
}
