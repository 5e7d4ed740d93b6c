//! Command line front end: `polyimage classify|enumerate|lemmas|counterexamples`.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::classify::{classify, classify_checked, is_classifiable, NO_THEOREM};
use crate::counterexample::{ut3_trivial_case, utn_zn_case, CounterexampleReport};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::image::{default_budget, enumerate_image, sample_image, Closure, ImageReport};
use crate::report::{counterexample_text, cross_check_text, image_text, run_lemmas, structure_json};
use crate::star_poly::PolyFile;

/// Exit status when every check is consistent.
pub const EXIT_OK: i32 = 0;
/// Exit status for bad arguments, unreadable input and unsupported requests.
pub const EXIT_USAGE: i32 = 1;
/// Exit status when a theorem and an exhaustive oracle disagree.
pub const EXIT_DISAGREE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Name the image symbolically and confirm it over small prime fields.
    Classify,
    /// Compute images exhaustively over prime fields.
    Enumerate,
    /// Check the entry lemmas and the identities behind the classification.
    Lemmas,
    /// Rerun the two counterexamples.
    Counterexamples,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "polyimage", version, about = "Images of graded *-polynomials on upper triangular matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Polynomial file; repeat for several, `-` reads standard input.
    #[arg(long = "file", global = true)]
    pub files: Vec<PathBuf>,
    /// Odd primes for exhaustive checks [default: 3,5,7; 3,5 for counterexamples].
    #[arg(long, global = true, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    /// Cap on tuples × degree per enumeration; defaults to POLYIMAGE_BUDGET or 10^8.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Seed for sampling over the rationals.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of samples over the rationals for `enumerate`; 0 disables sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub samples: usize,
    /// Largest size for `lemmas`.
    #[arg(long, global = true, default_value_t = 8)]
    pub max_size: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// Resolved settings for one run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub files: Vec<PathBuf>,
    pub primes: Vec<u64>,
    pub budget: u64,
    pub seed: u64,
    pub samples: usize,
    pub max_size: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<RunConfig> {
        let budget = cli.budget.unwrap_or_else(default_budget);
        if budget == 0 {
            return Err(Error::Unsupported("--budget must be positive".into()));
        }
        let primes = cli.primes.unwrap_or_else(|| match cli.command {
            Command::Counterexamples => vec![3, 5],
            _ => vec![3, 5, 7],
        });
        for &p in &primes {
            FieldSpec::prime(p)?;
            if p == 2 {
                return Err(Error::InvalidField("primes must be odd".into()));
            }
        }
        Ok(RunConfig {
            command: cli.command,
            files: cli.files,
            primes,
            budget,
            seed: cli.seed,
            samples: cli.samples,
            max_size: cli.max_size,
            format: cli.format,
            out: cli.out,
        })
    }
}

/// A finished run: both renderings and whether all checks were consistent.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub json: Value,
    pub text: String,
    pub consistent: bool,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.consistent {
            EXIT_OK
        } else {
            EXIT_DISAGREE
        }
    }
}

fn read_input(path: &PathBuf) -> Result<(String, PolyFile)> {
    let label = path.display().to_string();
    let text = if label == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Unsupported(format!("reading standard input: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Error::Unsupported(format!("reading {label}: {e}")))?
    };
    let file = PolyFile::parse(&text).map_err(|e| match e {
        Error::Parse { line, col, message } => Error::Parse {
            line,
            col,
            message: format!("{label}: {message}"),
        },
        other => other,
    })?;
    Ok((label, file))
}

fn need_files(cfg: &RunConfig) -> Result<()> {
    if cfg.files.is_empty() {
        return Err(Error::Unsupported("this command needs at least one --file".into()));
    }
    Ok(())
}

fn header(label: &str, file: &PolyFile) -> Value {
    json!({
        "file": label,
        "polynomial": file.poly.to_string(),
        "source": file.to_text(),
        "structure": structure_json(&file.structure),
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Some(b), Value::Object(e)) = (base.as_object_mut(), extra) {
        b.extend(e);
    }
    base
}

pub fn run_classify(cfg: &RunConfig) -> Result<RunOutcome> {
    need_files(cfg)?;
    let mut results = Vec::new();
    let mut text = String::new();
    let mut consistent = true;
    for path in &cfg.files {
        let (label, file) = read_input(path)?;
        let s = &file.structure;
        if !is_classifiable(s) {
            return Err(Error::Unsupported(format!("{label}: {s}: {NO_THEOREM}")));
        }
        let cc = classify_checked(&file.poly, s, &cfg.primes, cfg.budget)?;
        consistent &= cc.consistent();
        text.push_str(&format!("file: {label}\npolynomial: {}\n", file.poly));
        text.push_str(&cross_check_text(&cc));
        text.push('\n');
        results.push(merge(header(&label, &file), cc.to_json()));
    }
    Ok(RunOutcome {
        json: json!({"command": "classify", "results": results, "consistent": consistent}),
        text,
        consistent,
    })
}

pub fn run_enumerate(cfg: &RunConfig) -> Result<RunOutcome> {
    need_files(cfg)?;
    let mut results = Vec::new();
    let mut text = String::new();
    let mut consistent = true;
    for path in &cfg.files {
        let (label, file) = read_input(path)?;
        let s = &file.structure;
        let primes: Vec<u64> = match s.field().modulus() {
            Some(q) => vec![q],
            None => cfg.primes.clone(),
        };
        let mut images = Vec::new();
        text.push_str(&format!("file: {label}\npolynomial: {}\n", file.poly));
        for p in primes {
            let field = FieldSpec::prime(p)?;
            let (f, sp) = (file.poly.reduce_to(field)?, s.with_field(field));
            let img = enumerate_image(&f, &sp, cfg.budget)?;
            let report = ImageReport::new(&f, &img, cfg.budget)?;
            let mut j = report.to_json();
            if is_classifiable(&sp) {
                let c = classify(&f, &sp)?;
                let agrees = report.closure == Closure::Closed && c.name.resolve(&sp)? == report.span;
                consistent &= agrees;
                j["theorem"] = json!({"catalog": c.name.to_string(), "agrees": agrees});
            }
            text.push_str(&image_text(&report));
            text.push('\n');
            images.push(j);
        }
        if cfg.samples > 0 && !s.field().is_finite() {
            let img = sample_image(&file.poly, s, cfg.samples, cfg.seed)?;
            let report = ImageReport::new(&file.poly, &img, cfg.budget)?;
            text.push_str(&image_text(&report));
            text.push('\n');
            let mut j = report.to_json();
            j["seed"] = json!(cfg.seed);
            images.push(j);
        }
        results.push(merge(header(&label, &file), json!({"images": images})));
    }
    Ok(RunOutcome {
        json: json!({"command": "enumerate", "results": results, "consistent": consistent}),
        text,
        consistent,
    })
}

pub fn run_lemmas_command(cfg: &RunConfig) -> Result<RunOutcome> {
    let suite = run_lemmas(cfg.max_size)?;
    let consistent = suite.passed();
    Ok(RunOutcome {
        json: json!({"command": "lemmas", "max_size": cfg.max_size, "suite": suite.to_json(), "consistent": consistent}),
        text: suite.to_text(),
        consistent,
    })
}

/// Sizes run by `counterexamples`: `z1 z2` on `UT_3..UT_5`, `Z_n` on `UT_4..UT_6`.
pub const TRIVIAL_SIZES: [usize; 3] = [3, 4, 5];
pub const ZN_SIZES: [usize; 3] = [4, 5, 6];

pub fn run_counterexamples(cfg: &RunConfig) -> Result<RunOutcome> {
    let mut cases = Vec::new();
    let mut text = String::new();
    let mut consistent = true;
    let mut record = |outcome: Result<CounterexampleReport>, label: String| match outcome {
        Ok(r) => {
            consistent &= r.confirmed();
            text.push_str(&counterexample_text(&r));
            cases.push(r.to_json());
        }
        Err(e) => {
            text.push_str(&format!("case: {label}: {e}\n"));
            cases.push(json!({"case": label, "error": e.to_string()}));
        }
    };
    for &p in &cfg.primes {
        for n in TRIVIAL_SIZES {
            record(ut3_trivial_case(n, p, cfg.budget), format!("z1z2-trivial-grading n={n} p={p}"));
        }
        for n in ZN_SIZES {
            record(utn_zn_case(n, p, cfg.budget), format!("zn-grading n={n} p={p}"));
        }
    }
    Ok(RunOutcome {
        json: json!({"command": "counterexamples", "cases": cases, "consistent": consistent}),
        text,
        consistent,
    })
}

pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    match cfg.command {
        Command::Classify => run_classify(cfg),
        Command::Enumerate => run_enumerate(cfg),
        Command::Lemmas => run_lemmas_command(cfg),
        Command::Counterexamples => run_counterexamples(cfg),
    }
}

fn emit(cfg: &RunConfig, outcome: &RunOutcome) -> io::Result<()> {
    let body = match cfg.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&outcome.json).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => outcome.text.clone(),
    };
    match &cfg.out {
        Some(path) => fs::write(path, body),
        None => io::stdout().write_all(body.as_bytes()),
    }
}

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cfg = match RunConfig::from_cli(cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match run(&cfg) {
        Ok(outcome) => {
            if let Err(e) = emit(&cfg, &outcome) {
                eprintln!("error: writing output: {e}");
                return EXIT_USAGE;
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
