//! The `xfc` command line: every subcommand writes one self-describing JSON
//! or CSV document that embeds the tool version, the effective
//! configuration and the seed, so `xfc replay <file>` reproduces it.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage
//! or input errors.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::randgraph::Regime;

mod commands;
mod output;
pub mod spec;

pub use output::{render, Output, Table};

/// Seed used when neither `--seed` nor `XFC_SEED` is given.
pub const DEFAULT_SEED: u64 = 1;

#[derive(Parser, Debug)]
#[command(name = "xfc", version, about = "Formulation-complexity experiments for the stable set problem")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for sampling and NMF restarts.
    #[arg(long, global = true, env = "XFC_SEED")]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Exact rationals or doubles, where a command supports both.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Rational)]
    pub mode: Mode,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Search budget: nodes for induced-subgraph and rectangle searches,
    /// solutions for enumerations.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Run trials and restarts on one thread (same results).
    #[arg(long, global = true)]
    pub serial: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rational,
    Float,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Build the gadget graph of a template.
    Gadget(GadgetArgs),
    /// Check the UDISJ(t) embedding into the gadget slack matrix.
    EmbedCheck(EmbedArgs),
    /// Regime parameters and exponents at one (n, p).
    Bounds(BoundsArgs),
    /// Exponents across a grid of p, with the ordering checks.
    Sweep(SweepArgs),
    /// Monte-Carlo non-containment of an induced pattern in G(n, p).
    GnpContain(ContainArgs),
    /// Monte-Carlo tail of the stability number of G(n, p).
    AlphaTail(AlphaTailArgs),
    /// Bounds on the nonnegative rank of a small matrix.
    Nnr(NnrArgs),
    /// Slack matrices of stable set problems and UDISJ.
    Slack(SlackArgs),
    /// A nonnegative factorization of a matrix.
    Factorize(FactorizeArgs),
    /// LP formulation to factorization and back for a stable set problem.
    LpRoundtrip(RoundtripArgs),
    /// Re-run the configuration embedded in an output file.
    Replay(ReplayArgs),
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct GadgetArgs {
    /// K<t>, C<t>, P<t>, E<t>, gnp:<n>:<p> or a graph file.
    pub template: String,
    #[arg(long, default_value_t = 0)]
    pub ell: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct EmbedArgs {
    /// Order of the complete template.
    pub t: usize,
    #[arg(long, default_value_t = 0)]
    pub ell: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct RegimeArgs {
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 0.9)]
    pub delta: f64,
    /// The high regime starts at this multiple of n^{-1/4}.
    #[arg(long, default_value_t = 2.0)]
    pub high_margin: f64,
    /// Use this regime regardless of the thresholds.
    #[arg(long)]
    pub regime: Option<Regime>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: f64,
    #[arg(long)]
    pub p: f64,
    #[command(flatten)]
    pub regime: RegimeArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 1e6)]
    pub n: f64,
    #[arg(long, default_value_t = 60)]
    pub points: usize,
    /// Explicit grid of p values (default: geometric from n^{-0.4} to 1/ln n).
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<f64>,
    #[command(flatten)]
    pub regime: RegimeArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ContainArgs {
    /// Pattern graph spec.
    pub pattern: String,
    /// Use the gadget of the pattern with this path parameter.
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    /// Average-degree bound in the second-moment statistic.
    #[arg(long, value_enum, default_value_t = DegreeArg::Auto)]
    pub degree: DegreeArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeArg {
    /// The gadget cap when --ell is given, else measured.
    Auto,
    Measured,
    Gadget,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct AlphaTailArgs {
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 18)]
    pub threshold: usize,
    #[arg(long, default_value_t = 2000)]
    pub trials: u64,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct NmfArgs {
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 5000)]
    pub iters: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct NnrArgs {
    /// Matrix CSV/JSON file, or udisj:<n>.
    pub matrix: String,
    #[arg(long, default_value_t = 6)]
    pub rmax: usize,
    #[command(flatten)]
    pub nmf: NmfArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlackKind {
    /// Non-uniform stable set problem of --graph (all induced subgraphs).
    StabNu,
    /// UDISJ(--n), optionally restricted to rows of size --k.
    Udisj,
    /// Uniform model over all complete graphs on [--n].
    CompleteFamily,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SlackArgs {
    #[arg(value_enum)]
    pub kind: SlackKind,
    #[arg(long)]
    pub graph: Option<String>,
    /// Replace --graph by its gadget.
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Add this multiple of the all-ones matrix ("p/q").
    #[arg(long)]
    pub shift: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct FactorizeArgs {
    /// Matrix CSV/JSON file, or udisj:<n>.
    pub matrix: String,
    /// Inner dimension; default: the smallest NMF success.
    #[arg(long)]
    pub rank: Option<usize>,
    #[command(flatten)]
    pub nmf: NmfArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpKind {
    /// The edge relaxation for bipartite graphs, else the solution simplex.
    Auto,
    Edge,
    Simplex,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct RoundtripArgs {
    pub graph: String,
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long, value_enum, default_value_t = LpKind::Auto)]
    pub lp: LpKind,
    #[command(flatten)]
    pub nmf: NmfArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ReplayArgs {
    pub file: PathBuf,
}

/// Everything that determines an output document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub format: Format,
    pub mode: Mode,
    pub budget: Option<u64>,
}

impl RunConfig {
    /// Reads the configuration embedded in an output document.
    pub fn from_document(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            let v: serde_json::Value = serde_json::from_str(text)?;
            let cfg = v
                .get("config")
                .ok_or_else(|| Error::parse(1, None, "document has no \"config\" field"))?;
            return Ok(serde_json::from_value(cfg.clone())?);
        }
        for (i, line) in text.lines().enumerate() {
            if let Some(rest) = line.strip_prefix(output::CONFIG_PREFIX) {
                return serde_json::from_str(rest).map_err(|e| Error::parse(i + 1, None, e.to_string()));
            }
            if !line.starts_with('#') {
                break;
            }
        }
        Err(Error::parse(1, None, "no embedded configuration found"))
    }
}

/// Runs `cfg` and returns the rendered document and whether all checks
/// passed.
pub fn execute(cfg: &RunConfig, parallel: bool) -> Result<(String, bool)> {
    if matches!(cfg.command, Command::Replay(_)) {
        return Err(Error::InvalidParameter("a replay cannot embed another replay".into()));
    }
    let out = commands::dispatch(cfg, parallel)?;
    Ok((render(cfg, &out)?, out.passed))
}

fn write_output(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<bool> {
    let g = cli.global;
    let cfg = match cli.command {
        Command::Replay(r) => {
            let cfg = RunConfig::from_document(&std::fs::read_to_string(&r.file)?)?;
            eprintln!("xfc: replaying {} with seed {}", r.file.display(), cfg.seed);
            cfg
        }
        command => {
            let seed = g.seed.unwrap_or(DEFAULT_SEED);
            eprintln!("xfc: seed {seed}");
            RunConfig {
                command,
                seed,
                format: g.format,
                mode: g.mode,
                budget: g.budget,
            }
        }
    };
    let (text, passed) = execute(&cfg, !g.serial)?;
    write_output(&text, g.out.as_deref())?;
    Ok(passed)
}

/// Exit code for an error: 1 for a failed identity or guarantee check, 2
/// for everything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::IdentityViolation { .. } | Error::GuaranteeViolation { .. } => 1,
        _ => 2,
    }
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("xfc: a check failed");
            1
        }
        Err(e) => {
            eprintln!("xfc: error: {e}");
            exit_code(&e)
        }
    }
}
