//! Command-line front end.
//!
//! Exit codes: 0 when every requested check passes, 1 when any check fails,
//! 2 on usage or input errors (with a one-line diagnostic on stderr).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::axb::{run_axb_suite, AxbSuiteConfig, GridSpec, QuadratureGrid};
use crate::characters::enumerate_characters;
use crate::group::{
    builtin_by_name, enumerate_normal_subgroups, AssociativityCheck, CosetDecomposition,
    FiniteGroup,
};
use crate::haar::WeightPolicy;
use crate::verifier::{run_suite, SuiteConfig, SuiteReport, FINITE_TOLERANCE};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "covariant",
    version,
    about = "Check covariant-function identities on finite groups and the ax+b group"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the builtin group families.
    Groups(OutputArgs),
    /// Print normal subgroups, characters and coset representatives.
    Enumerate {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the finite theorem suite on one group.
    Verify {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        suite: SuiteArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the ax+b quadrature checks.
    VerifyAxb {
        #[command(flatten)]
        axb: AxbArgs,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Finite suite and ax+b checks in one document.
    Report {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        suite: SuiteArgs,
        #[command(flatten)]
        axb: AxbArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Builtin name (Z4, D4, S3, Q8, Heis3, Z2xZ2, trivial) or a path to a
    /// Cayley-table JSON file.
    #[arg(long)]
    pub group: Option<String>,
    /// Path to a Cayley-table JSON file.
    #[arg(long, conflicts_with = "group")]
    pub table: Option<PathBuf>,
    /// Check associativity exhaustively even for large tables.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// Weight of λ_G per element.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub u: f64,
    /// Weight of λ_N per element, or `auto` for 1/|N|.
    #[arg(long, default_value = "1", allow_negative_numbers = true)]
    pub v: String,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Residual tolerance for the finite checks.
    #[arg(long, default_value_t = FINITE_TOLERANCE, allow_negative_numbers = true)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct AxbArgs {
    /// Character frequency; repeat for several.
    #[arg(long, default_values_t = [1.0], allow_negative_numbers = true)]
    pub omega: Vec<f64>,
    /// Gauss–Legendre nodes per axis.
    #[arg(long, default_value_t = 128)]
    pub nodes: usize,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the result here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// A usage or input error, reported as a single line.
#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<(&str, E)> for UsageError {
    fn from((what, e): (&str, E)) -> Self {
        UsageError(format!("{what}: {e}"))
    }
}

type CliResult<T> = std::result::Result<T, UsageError>;

fn load_group(args: &GroupArgs) -> CliResult<FiniteGroup> {
    let check = if args.strict {
        AssociativityCheck::Strict
    } else {
        AssociativityCheck::Auto
    };
    let path = match (&args.table, &args.group) {
        (Some(p), _) => Some((p.clone(), "--table")),
        (None, Some(g)) if looks_like_path(g) => Some((PathBuf::from(g), "--group")),
        (None, Some(g)) => {
            return builtin_by_name(g).map_err(|e| (format!("--group {g}").as_str(), e).into())
        }
        (None, None) => return Err(UsageError("one of --group or --table is required".into())),
    };
    let (path, flag) = path.expect("handled above");
    let label = format!("{flag} {}", path.display());
    let text = std::fs::read_to_string(&path).map_err(|e| UsageError::from((label.as_str(), e)))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "table".into());
    FiniteGroup::from_json(name, &text, check).map_err(|e| (label.as_str(), e).into())
}

fn looks_like_path(s: &str) -> bool {
    s.ends_with(".json") || s.contains('/') || s.contains('\\') || Path::new(s).is_file()
}

fn weight_policy(args: &SuiteArgs) -> CliResult<WeightPolicy> {
    if !(args.u.is_finite() && args.u > 0.0) {
        return Err(UsageError(format!(
            "--u {}: weight must be positive",
            args.u
        )));
    }
    if args.v.eq_ignore_ascii_case("auto") {
        return Ok(WeightPolicy::Probability { u: args.u });
    }
    let v: f64 = args.v.parse().map_err(|_| {
        UsageError(format!(
            "--v {}: expected a positive number or `auto`",
            args.v
        ))
    })?;
    if !(v.is_finite() && v > 0.0) {
        return Err(UsageError(format!("--v {v}: weight must be positive")));
    }
    Ok(WeightPolicy::Fixed { u: args.u, v })
}

fn suite_config(args: &SuiteArgs) -> CliResult<SuiteConfig> {
    if args.trials == 0 {
        return Err(UsageError("--trials: must be at least 1".into()));
    }
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(UsageError(format!(
            "--tol {}: tolerance must be positive",
            args.tol
        )));
    }
    Ok(SuiteConfig {
        trials: args.trials,
        seed: args.seed,
        tolerance: args.tol,
        weights: weight_policy(args)?,
        ..SuiteConfig::default()
    })
}

fn axb_reports(args: &AxbArgs, seed: u64, report: &mut SuiteReport) -> CliResult<()> {
    if args.nodes < 2 {
        return Err(UsageError(format!(
            "--nodes {}: need at least 2 nodes",
            args.nodes
        )));
    }
    for &omega in &args.omega {
        if !omega.is_finite() {
            return Err(UsageError(format!("--omega {omega}: must be finite")));
        }
        QuadratureGrid::new(GridSpec::with_nodes(args.nodes))
            .and_then(|grid| grid.require_resolves(omega))
            .map_err(|e| UsageError(format!("--omega {omega} --nodes {}: {e}", args.nodes)))?;
        let config = AxbSuiteConfig {
            omega,
            nodes: args.nodes,
            seed,
            refinement_nodes: args.nodes / 2,
            ..AxbSuiteConfig::default()
        };
        report.continuous.push(
            run_axb_suite(&config)
                .map_err(|e| UsageError(format!("--omega {omega} --nodes {}: {e}", args.nodes)))?,
        );
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct SubgroupListing {
    members: Vec<usize>,
    size: usize,
    coset_representatives: Vec<usize>,
    characters: Vec<crate::characters::CharacterDocument>,
}

#[derive(Debug, Serialize)]
struct Enumeration {
    group: String,
    order: usize,
    normal_subgroups: Vec<SubgroupListing>,
}

fn enumerate(g: &FiniteGroup) -> CliResult<Enumeration> {
    let mut normal_subgroups = Vec::new();
    for n in enumerate_normal_subgroups(g).map_err(|e| UsageError::from(("enumerate", e)))? {
        let cosets =
            CosetDecomposition::new(g, &n).map_err(|e| UsageError::from(("enumerate", e)))?;
        let characters = enumerate_characters(g, &n)
            .map_err(|e| UsageError::from(("enumerate", e)))?
            .iter()
            .map(|c| c.to_document())
            .collect();
        normal_subgroups.push(SubgroupListing {
            members: n.members().to_vec(),
            size: n.len(),
            coset_representatives: cosets.representatives().to_vec(),
            characters,
        });
    }
    Ok(Enumeration {
        group: g.name().to_string(),
        order: g.order(),
        normal_subgroups,
    })
}

fn enumeration_text(g: &FiniteGroup, e: &Enumeration) -> String {
    let labels = |xs: &[usize]| {
        xs.iter()
            .map(|&x| g.label(x))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut out = format!(
        "{} (order {}): {} normal subgroups\n",
        e.group,
        e.order,
        e.normal_subgroups.len()
    );
    for n in &e.normal_subgroups {
        out.push_str(&format!("N = {{{}}} size {}\n", labels(&n.members), n.size));
        out.push_str(&format!(
            "  coset representatives: {}\n",
            labels(&n.coset_representatives)
        ));
        out.push_str(&format!("  {} characters\n", n.characters.len()));
        for c in &n.characters {
            let exps = c
                .exponents
                .iter()
                .map(|(s, k)| format!("{}->{k}", g.label(*s)))
                .collect::<Vec<_>>()
                .join(" ");
            out.push_str(&format!("    mod {}: {exps}\n", c.modulus));
        }
    }
    out
}

const FAMILIES: &[(&str, &str)] = &[
    ("Zn", "cyclic group of order n (1 ≤ n ≤ 4096), also Cn"),
    ("Dn", "dihedral group of order 2n"),
    ("Sn", "symmetric group, n ≤ 5"),
    ("Q8", "quaternion group"),
    ("Heisp", "Heisenberg group mod p, p in {2, 3, 5, 7}"),
    ("trivial", "the one-element group"),
    ("AxB", "direct product of builtin groups, e.g. Z2xZ2"),
];

fn emit(output: &OutputArgs, body: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match &output.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| (format!("--out {}", path.display()).as_str(), e).into()),
        None => stdout
            .write_all(body.as_bytes())
            .map_err(|e| UsageError::from(("stdout", e))),
    }
}

fn render(report: &SuiteReport, format: Format) -> String {
    match format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> CliResult<i32> {
    let verdict = |r: &SuiteReport| if r.all_pass() { EXIT_PASS } else { EXIT_FAIL };
    match cli.command {
        Command::Groups(output) => {
            let body = match output.format {
                Format::Json => {
                    let map: std::collections::BTreeMap<_, _> = FAMILIES.iter().copied().collect();
                    serde_json::to_string_pretty(&map).expect("plain data") + "\n"
                }
                Format::Text => FAMILIES
                    .iter()
                    .map(|(n, d)| format!("{n:<8} {d}\n"))
                    .collect(),
            };
            emit(&output, &body, stdout)?;
            Ok(EXIT_PASS)
        }
        Command::Enumerate { group, output } => {
            let g = load_group(&group)?;
            let e = enumerate(&g)?;
            let body = match output.format {
                Format::Json => serde_json::to_string_pretty(&e).expect("plain data") + "\n",
                Format::Text => enumeration_text(&g, &e),
            };
            emit(&output, &body, stdout)?;
            Ok(EXIT_PASS)
        }
        Command::Verify {
            group,
            suite,
            output,
        } => {
            let g = load_group(&group)?;
            let config = suite_config(&suite)?;
            let reports = run_suite(&g, &config).map_err(|e| UsageError::from(("--group", e)))?;
            let report = SuiteReport::new(config.seed, &reports);
            emit(&output, &render(&report, output.format), stdout)?;
            Ok(verdict(&report))
        }
        Command::VerifyAxb { axb, seed, output } => {
            let mut report = SuiteReport::new(seed, &[]);
            axb_reports(&axb, seed, &mut report)?;
            emit(&output, &render(&report, output.format), stdout)?;
            Ok(verdict(&report))
        }
        Command::Report {
            group,
            suite,
            axb,
            output,
        } => {
            let g = load_group(&group)?;
            let config = suite_config(&suite)?;
            let reports = run_suite(&g, &config).map_err(|e| UsageError::from(("--group", e)))?;
            let mut report = SuiteReport::new(config.seed, &reports);
            axb_reports(&axb, config.seed, &mut report)?;
            emit(&output, &render(&report, output.format), stdout)?;
            Ok(verdict(&report))
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_PASS
                }
                _ => {
                    let first = e.render().to_string();
                    let line = first.lines().next().unwrap_or("invalid arguments");
                    let _ = writeln!(stderr, "{line}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli, stdout) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}
