//! Command-line front end.
//!
//! Every report prints gradings relative to their minimum. Exit codes: 0 on
//! success, 2 for bad input, 3 when an internal check fails.

pub mod render;
pub mod suite;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::complex::json::load_complex;
use crate::error::{Error, Result};
use crate::infer::{enumerate_patterns, InferOptions, PageSpec, TargetSpec};
use crate::khovanov::{ckh, Convention, Flavor, LinkDiagram};
use crate::spectral::{check_constraints, compute_pages, converge, FilteredComplex, PageOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "skeinseq", version, about = "Khovanov homology, spectral sequences and explicit link Floer models over F2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Khovanov homology of a diagram.
    Kh(KhArgs),
    /// Spectral sequence of a filtered complex or of a cube filtration.
    Ss(SsArgs),
    /// Differentials compatible with an E2 page and a target homology.
    Infer(InferArgs),
    /// Runs the built-in suite of checks.
    Examples(ExamplesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Default)]
pub enum OutFormat {
    #[default]
    Tsv,
    Json,
}

#[derive(Args, Debug, Default)]
pub struct DiagramArgs {
    /// Inline PD code, e.g. "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]".
    #[arg(long)]
    pub pd: Option<String>,
    /// File holding a PD code or a JSON diagram {"crossings": [[a,b,c,d], ...], "loops": [...]}.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Braid word as comma-separated generator indices (negative for inverses).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub braid: Option<Vec<i32>>,
    /// Number of strands for --braid (default: one more than the largest index).
    #[arg(long)]
    pub strands: Option<usize>,
    #[arg(long)]
    pub mirror: bool,
    /// Exchange the roles of the 0- and 1-smoothings.
    #[arg(long)]
    pub swap_resolutions: bool,
}

#[derive(Args, Debug)]
pub struct KhArgs {
    #[command(flatten)]
    pub diagram: DiagramArgs,
    /// minus, hat or reduced.
    #[arg(long, default_value = "minus", value_parser = parse_flavor)]
    pub flavor: Flavor,
    /// Arc carrying the basepoint (minus defaults to the smallest arc; reduced requires it).
    #[arg(long)]
    pub basepoint: Option<u32>,
    /// Minus flavor over F2[U] without a basepoint.
    #[arg(long, conflicts_with = "basepoint")]
    pub unpointed: bool,
    #[arg(long, value_enum, default_value_t)]
    pub out: OutFormat,
}

#[derive(Args, Debug)]
pub struct SsArgs {
    #[command(flatten)]
    pub diagram: DiagramArgs,
    /// JSON complex with filtration levels, instead of a diagram.
    #[arg(long)]
    pub complex: Option<PathBuf>,
    #[arg(long, default_value = "hat", value_parser = parse_flavor)]
    pub flavor: Flavor,
    #[arg(long)]
    pub basepoint: Option<u32>,
    /// Truncation depth, in steps of the variable.
    #[arg(long)]
    pub truncation: Option<i64>,
    /// Last page to compute.
    #[arg(long)]
    pub max_page: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    pub out: OutFormat,
}

#[derive(Args, Debug)]
pub struct InferArgs {
    /// JSON page: {"generators": [{"name", "h", "q"}, ...]}.
    #[arg(long)]
    pub e2: PathBuf,
    /// JSON target: {"free_rank", "torsion", "basis", "actions"}.
    #[arg(long)]
    pub target: PathBuf,
    /// Largest page whose differential is searched.
    #[arg(long)]
    pub max_k: Option<i64>,
    #[arg(long, value_enum, default_value_t)]
    pub out: OutFormat,
}

#[derive(Args, Debug)]
pub struct ExamplesArgs {
    #[arg(long, value_enum, default_value_t)]
    pub out: OutFormat,
}

fn parse_flavor(s: &str) -> std::result::Result<Flavor, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// The text of a report and whether it records a failed check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub failed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, failed: false }
    }

    pub fn exit_code(&self) -> i32 {
        if self.failed {
            EXIT_INVARIANT
        } else {
            EXIT_OK
        }
    }
}

#[derive(Deserialize)]
struct DiagramFile {
    crossings: Vec<[u32; 4]>,
    #[serde(default)]
    loops: Vec<u32>,
}

impl DiagramArgs {
    fn is_given(&self) -> bool {
        self.pd.is_some() || self.input.is_some() || self.braid.is_some()
    }

    pub fn load(&self) -> Result<LinkDiagram> {
        let given = [self.pd.is_some(), self.input.is_some(), self.braid.is_some()].iter().filter(|b| **b).count();
        if given != 1 {
            return Err(Error::Input("give exactly one of --pd, --input or --braid".into()));
        }
        let d = if let Some(pd) = &self.pd {
            LinkDiagram::parse_pd(pd)?
        } else if let Some(path) = &self.input {
            let text = std::fs::read_to_string(path)?;
            if text.trim_start().starts_with('{') {
                let f: DiagramFile = serde_json::from_str(&text)?;
                LinkDiagram::from_parts(f.crossings, f.loops)?
            } else {
                LinkDiagram::parse_pd(&text)?
            }
        } else {
            let word = self.braid.as_deref().unwrap_or_default();
            let top = word.iter().map(|s| s.unsigned_abs() as usize).max().unwrap_or(0);
            LinkDiagram::braid_closure(self.strands.unwrap_or(top + 1), word)?
        };
        Ok(if self.mirror { d.mirror() } else { d })
    }

    fn convention(&self) -> Convention {
        Convention { swapped: self.swap_resolutions }
    }
}

fn kh(args: &KhArgs) -> Result<Outcome> {
    let d = args.diagram.load()?;
    let basepoint = match (args.flavor, args.basepoint) {
        (Flavor::Reduced, None) => {
            return Err(Error::Input("the reduced flavor requires --basepoint".into()));
        }
        (Flavor::Minus, None) if !args.unpointed => Some(d.arcs()[0]),
        (Flavor::Hat, _) => None,
        (_, b) => b,
    };
    let c = ckh(&d, args.flavor, basepoint, args.diagram.convention())?;
    let report = render::KhReport::new(&d, &c, args.flavor, basepoint)?;
    Ok(Outcome::ok(match args.out {
        OutFormat::Tsv => report.tsv(),
        OutFormat::Json => serde_json::to_string_pretty(&report)? + "\n",
    }))
}

fn ss(args: &SsArgs) -> Result<Outcome> {
    let complex = match (&args.complex, args.diagram.is_given()) {
        (Some(path), false) => load_complex(&std::fs::read_to_string(path)?)?.0,
        (None, true) => {
            let d = args.diagram.load()?;
            if args.flavor == Flavor::Reduced && args.basepoint.is_none() {
                return Err(Error::Input("the reduced flavor requires --basepoint".into()));
            }
            let bp = match args.flavor {
                Flavor::Hat => None,
                _ => Some(args.basepoint.unwrap_or_else(|| d.arcs()[0])),
            };
            ckh(&d, args.flavor, bp, args.diagram.convention())?
        }
        _ => return Err(Error::Input("give either --complex or a diagram".into())),
    };
    let fc = FilteredComplex::new(complex)?;
    let ss = compute_pages(&fc, PageOptions { depth: args.truncation, max_page: args.max_page })?;
    let conv = if args.max_page.is_none() { Some(converge(&fc, &ss)?) } else { None };
    let violations = check_constraints(&ss);
    let report = render::SsReport::new(&ss, conv, violations);
    let failed = report.convergence.as_ref().is_some_and(|c| !c.ok);
    let text = match args.out {
        OutFormat::Tsv => report.tsv(),
        OutFormat::Json => serde_json::to_string_pretty(&report)? + "\n",
    };
    Ok(Outcome { text, failed })
}

fn infer(args: &InferArgs) -> Result<Outcome> {
    let e2 = PageSpec::from_json(&std::fs::read_to_string(&args.e2)?)?;
    let target = TargetSpec::from_json(&std::fs::read_to_string(&args.target)?)?;
    let opts = InferOptions { max_k: args.max_k, ..InferOptions::default() };
    let report = enumerate_patterns(&e2, &target, opts)?;
    Ok(Outcome::ok(match args.out {
        OutFormat::Tsv => render::infer_tsv(&report),
        OutFormat::Json => serde_json::to_string_pretty(&report)? + "\n",
    }))
}

fn examples(args: &ExamplesArgs) -> Result<Outcome> {
    let checks = suite::run_suite();
    let failed = checks.iter().any(|c| !c.pass);
    let text = match args.out {
        OutFormat::Tsv => suite::tsv(&checks),
        OutFormat::Json => serde_json::to_string_pretty(&checks)? + "\n",
    };
    Ok(Outcome { text, failed })
}

/// Runs one parsed command.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Kh(a) => kh(a),
        Command::Ss(a) => ss(a),
        Command::Infer(a) => infer(a),
        Command::Examples(a) => examples(a),
    }
}

/// Runs a command, writing the report to stdout and diagnostics to stderr,
/// and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(out) => {
            print!("{}", out.text);
            out.exit_code()
        }
        Err(e) => {
            eprintln!("skeinseq: {e}");
            if e.is_input_error() {
                EXIT_INPUT
            } else {
                EXIT_INVARIANT
            }
        }
    }
}

/// Sizes the global thread pool from `SKEINSEQ_THREADS`.
pub fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("SKEINSEQ_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| Error::Input(format!("SKEINSEQ_THREADS must be a positive integer, got {v:?}")))?;
    if n == 0 {
        return Err(Error::Input("SKEINSEQ_THREADS must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Input(format!("cannot size the thread pool: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("skeinseq").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn reduced_without_basepoint_is_an_input_error() {
        let cli = parse(&["kh", "--pd", "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]", "--flavor", "reduced"]);
        let e = execute(&cli).unwrap_err();
        assert!(e.is_input_error());
        assert!(e.to_string().contains("--basepoint"));
    }

    #[test]
    fn braid_words_accept_negative_indices() {
        let cli = parse(&["kh", "--braid", "-1,-1,-1", "--flavor", "hat"]);
        let out = execute(&cli).unwrap();
        assert!(out.text.contains("# total_rank\t6"), "{}", out.text);
    }

    #[test]
    fn diagram_sources_are_exclusive() {
        let cli = parse(&["kh", "--pd", "U", "--braid", "1"]);
        assert!(execute(&cli).unwrap_err().is_input_error());
    }
}
