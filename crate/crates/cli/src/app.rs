//! Argument parsing, command dispatch and exit codes.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use cqs_core::{
    chain_string, component_table, enumerate_k, enumerate_ky, minimal_resolution_fan,
    normalize_cone, ChainRole, CoeffChain, Error, InputCone, Int, NVec, NormalForm,
    SingularityReport,
};

use crate::document::{AnalysisDocument, InputEcho, JsonInt};
use crate::svg::{render_fan, FanFigure, Style, DEFAULT_SCALE};
use crate::sweep::{run_sweep, SweepConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_CONSISTENCY: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
    Consistency(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Consistency(_) => EXIT_CONSISTENCY,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(s) | CliError::Domain(s) | CliError::Consistency(s) => s,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_domain() {
            CliError::Domain(e.to_string())
        } else {
            CliError::Consistency(e.to_string())
        }
    }
}

type CmdResult = Result<(), CliError>;

#[derive(Debug, Parser)]
#[command(name = "cqs", version, about = "P-resolutions and versal base components of cyclic quotient singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Components of the versal base: chains, fans, Milnor numbers, dimensions.
    Analyze(AnalyzeArgs),
    /// List admissible chains of a given length or under a given a-chain.
    Chains(ChainsArgs),
    /// Write one SVG per P-resolution plus the minimal resolution.
    Render(RenderArgs),
    /// Check every formula identity for all Y(n,q) up to a bound.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Singularity Y(n,q), i.e. the cone <(1,0),(-q,n)>.
    #[arg(long, num_args = 2, value_names = ["N", "Q"])]
    nq: Option<Vec<String>>,
    /// Cone given by two primitive generators.
    #[arg(long, value_name = "X1,Y1,X2,Y2", allow_hyphen_values = true)]
    cone: Option<String>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Plain text report (the default).
    #[arg(long)]
    text: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "chain_source")]
struct ChainSource {
    /// All zero chains of this length.
    #[arg(long, value_name = "M")]
    len: Option<usize>,
    /// Zero chains bounded by this a-chain.
    #[arg(long, value_name = "A2,...")]
    a: Option<String>,
}

#[derive(Debug, Args)]
struct ChainsArgs {
    #[command(flatten)]
    source: ChainSource,
    #[arg(long)]
    count_only: bool,
}

#[derive(Debug, Args)]
struct RenderArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Pixels per lattice unit.
    #[arg(long, default_value_t = DEFAULT_SCALE, value_parser = clap::value_parser!(u32).range(1..=1000))]
    scale: u32,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 60)]
    max_n: u64,
    /// Also compare against the ray-subset search (n <= 20).
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1024))]
    jobs: Option<u64>,
    /// Report every mismatch instead of only the first.
    #[arg(long)]
    keep_going: bool,
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => cmd_analyze(&a, out, err),
        Command::Chains(a) => cmd_chains(&a, out),
        Command::Render(a) => cmd_render(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Usage(format!("write failed: {e}"))
}

fn parse_int(s: &str, what: &str) -> Result<Int, CliError> {
    s.trim()
        .parse::<Int>()
        .map_err(|_| CliError::Usage(format!("{what}: {s:?} is not an integer")))
}

fn parse_list(s: &str, what: &str) -> Result<Vec<Int>, CliError> {
    s.split(',').map(|p| parse_int(p, what)).collect()
}

fn resolve_input(input: &InputArgs) -> Result<(InputEcho, NormalForm), CliError> {
    if let Some(nq) = &input.nq {
        let n = parse_int(&nq[0], "--nq")?;
        let q = parse_int(&nq[1], "--nq")?;
        let nf = NormalForm::from_nq(n.clone(), q.clone())?;
        return Ok((InputEcho::Nq { n: JsonInt(n), q: JsonInt(q) }, nf));
    }
    let cone_arg = input.cone.as_deref().unwrap_or_default();
    let v = parse_list(cone_arg, "--cone")?;
    if v.len() != 4 {
        return Err(CliError::Usage(format!("--cone needs four integers, got {}", v.len())));
    }
    let g1 = NVec::new(v[0].clone(), v[1].clone());
    let g2 = NVec::new(v[2].clone(), v[3].clone());
    let cone = InputCone::new(g1, g2)?;
    let nf = normalize_cone(&cone)?;
    let echo = InputEcho::Cone {
        generators: [
            [JsonInt(v[0].clone()), JsonInt(v[1].clone())],
            [JsonInt(v[2].clone()), JsonInt(v[3].clone())],
        ],
    };
    Ok((echo, nf))
}

fn analyze(input: &InputArgs) -> Result<(InputEcho, SingularityReport), CliError> {
    let (echo, nf) = resolve_input(input)?;
    let report = component_table(&nf)?;
    Ok((echo, report))
}

fn cmd_analyze(a: &AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let (echo, report) = analyze(&a.input)?;
    // The text report carries its own warnings.
    let text = if a.json {
        for w in &report.warnings {
            let _ = writeln!(err, "warning: {w}");
        }
        AnalysisDocument::new(echo, &report).to_canonical_json()
    } else {
        text_report(&report)
    };
    out.write_all(text.as_bytes()).map_err(io_err)
}

/// The human-readable form of an analysis.
pub fn text_report(report: &SingularityReport) -> String {
    let nf = &report.nf;
    let mut s = String::new();
    let _ = writeln!(s, "{nf}  cone <{},{}>", nf.input.g1, nf.input.g2);
    let _ = writeln!(s, "a-chain {}  b-chain {}  dual q = {}", nf.a_chain, nf.b_chain, nf.dual_q);
    let _ = writeln!(
        s,
        "e = {}  r = {}  nu = {}  dim T1 = {}  h1(Theta) = {}",
        nf.e, report.r, report.nu, report.dim_t1, report.h1_theta
    );
    let _ = writeln!(s, "components: {}", report.components.len());
    let width = report
        .components
        .iter()
        .map(|c| c.k_chain.to_string().len())
        .max()
        .unwrap_or(0)
        .max(7);
    let _ = writeln!(s, "  {:width$}  milnor  dim  artin  interior rays", "k-chain");
    for c in &report.components {
        let rays: Vec<String> = c.fan.interior_rays().iter().map(|r| nf.to_input(r).to_string()).collect();
        let _ = writeln!(
            s,
            "  {:width$}  {:>6}  {:>3}  {:5}  {}",
            c.k_chain.to_string(),
            c.milnor_toric.to_string(),
            c.dim_toric.to_string(),
            if c.is_artin { "yes" } else { "no" },
            if rays.is_empty() { "-".to_string() } else { rays.join(" ") }
        );
    }
    for w in &report.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    s
}

fn cmd_chains(a: &ChainsArgs, out: &mut dyn Write) -> CmdResult {
    let chains = if let Some(m) = a.source.len {
        if m < 2 {
            return Err(CliError::Usage(format!("--len must be at least 2, got {m}")));
        }
        enumerate_k(m)
    } else {
        let coeffs = parse_list(a.source.a.as_deref().unwrap_or_default(), "--a")?;
        if coeffs.len() < 2 {
            return Err(CliError::Usage("--a needs at least two entries".into()));
        }
        if let Some(bad) = coeffs.iter().find(|c| c < &&Int::from(2)) {
            return Err(CliError::Usage(format!("--a entries must be at least 2, got {bad}")));
        }
        let chain = CoeffChain::new(coeffs, ChainRole::A).map_err(|e| CliError::Usage(e.to_string()))?;
        enumerate_ky(&chain)
    };
    let mut s = String::new();
    if a.count_only {
        let _ = writeln!(s, "{}", chains.len());
    } else {
        for c in &chains {
            let _ = writeln!(s, "{}  q = {}", c, chain_string(&c.q_seq));
        }
    }
    out.write_all(s.as_bytes()).map_err(io_err)
}

/// File name for a component figure, e.g. `fan_1-2-2-1.svg`.
pub fn figure_name(k: &[Int]) -> String {
    let parts: Vec<String> = k.iter().map(|c| c.to_string()).collect();
    format!("fan_{}.svg", parts.join("-"))
}

fn cmd_render(a: &RenderArgs, out: &mut dyn Write) -> CmdResult {
    let (_, report) = analyze(&a.input)?;
    let nf = &report.nf;
    let style = Style { scale: a.scale, ..Style::default() };
    let mut files = Vec::new();
    let minimal = minimal_resolution_fan(nf)?;
    files.push((
        "fan_minimal.svg".to_string(),
        render_fan(
            &FanFigure { nf, fan: &minimal, roofs: false, title: format!("{nf} minimal resolution") },
            &style,
        )?,
    ));
    for c in &report.components {
        let title = format!("{nf} P-resolution {}", c.k_chain);
        files.push((
            figure_name(&c.k_chain.k),
            render_fan(&FanFigure { nf, fan: &c.fan, roofs: true, title }, &style)?,
        ));
    }
    std::fs::create_dir_all(&a.out)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", a.out.display())))?;
    for (name, svg) in &files {
        let path = a.out.join(name);
        std::fs::write(&path, svg).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
        writeln!(out, "{}", path.display()).map_err(io_err)?;
    }
    Ok(())
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let cfg = SweepConfig {
        max_n: a.max_n,
        oracle: a.oracle,
        jobs: a.jobs.map(|j| j as usize),
    };
    let summary = run_sweep(&cfg).map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let mut s = String::new();
    let _ = writeln!(s, "singularities: {}", summary.singularities);
    let _ = writeln!(s, "components: {}", summary.components);
    match summary.max_at {
        Some((n, q)) => {
            let _ = writeln!(s, "max components: {} (first at Y({n},{q}))", summary.max_components);
        }
        None => {
            let _ = writeln!(s, "max components: 0");
        }
    }
    let _ = writeln!(s, "dual pairs compared: {}", summary.duality_pairs);
    if a.oracle {
        let _ = writeln!(
            s,
            "oracle: {} singularities, {} fans equal",
            summary.oracle_singularities, summary.oracle_fans
        );
    }
    let _ = writeln!(s, "mismatches: {}", summary.failures.len());
    out.write_all(s.as_bytes()).map_err(io_err)?;
    if summary.ok() {
        return Ok(());
    }
    let shown = if a.keep_going { summary.failures.len() } else { 1 };
    for f in summary.failures.iter().take(shown) {
        let _ = writeln!(err, "{f}");
        let _ = writeln!(out, "{}", f.repro());
    }
    Err(CliError::Consistency(format!("{} mismatch(es)", summary.failures.len())))
}
