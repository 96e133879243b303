//! Command-line front end: `basis`, `positivity`, `invariants`, `molien`, `selftest`.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use crate::casimir::{self, PositivityReport};
use crate::error::{Error, Result};
use crate::invariants::{self, checks, InvariantValue, LocalOperators, Panel};
use crate::molien::{self, Backend, GroupSpec, MolienOptions, RationalForm};
use crate::selftest::{self, SelftestReport};
use crate::states::{QubitQutritState, StateFile};
use crate::su_algebra::{self, BasisLabel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algebra {
    Su2,
    Su3,
    Su6,
}

impl From<Algebra> for BasisLabel {
    fn from(a: Algebra) -> Self {
        match a {
            Algebra::Su2 => BasisLabel::Su2Pauli,
            Algebra::Su3 => BasisLabel::Su3GellMann,
            Algebra::Su6 => BasisLabel::Su6Tensor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Group {
    #[value(name = "2x2")]
    TwoQubit,
    #[value(name = "2x3")]
    QubitQutrit,
}

impl From<Group> for GroupSpec {
    fn from(g: Group) -> Self {
        match g {
            Group::TwoQubit => GroupSpec::Su2xSu2,
            Group::QubitQutrit => GroupSpec::Su2xSu3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Weyl,
    Reduced,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Weyl => Backend::Weyl,
            BackendArg::Reduced => Backend::Reduced,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "luinv", version, about = "Local unitary invariants and positivity of qubit-qutrit states")]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a Lie-algebra basis, its structure constants and identity checks
    Basis {
        #[arg(long, value_enum, default_value = "su6")]
        algebra: Algebra,
    },
    /// Semi-positivity report of a state file
    Positivity {
        file: PathBuf,
        /// Include the eigenvalues of the density matrix
        #[arg(long)]
        oracle: bool,
    },
    /// Trace invariants of a state file
    Invariants {
        file: PathBuf,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=8))]
        max_degree: u8,
        /// Append the relation checks on the default random panel
        #[arg(long)]
        checks: bool,
    },
    /// Molien series coefficients, one `d c_d` line per degree
    Molien {
        #[arg(long, value_enum)]
        group: Group,
        #[arg(long)]
        degree: usize,
        /// Compare against the closed rational form; exit 1 on mismatch
        #[arg(long)]
        compare_rational: bool,
        #[arg(long, value_enum, default_value = "weyl")]
        backend: BackendArg,
        /// Largest degree allowed
        #[arg(long, default_value_t = molien::DEFAULT_DEGREE_CAP)]
        cap: usize,
    },
    /// Run every numerical check with fixed seeds
    Selftest {
        #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = selftest::DEFAULT_PANEL_SIZE)]
        panel_size: usize,
    },
}

/// Reads a state file in either the `abc` or the `rho` form.
pub fn load_state(path: &Path) -> Result<QubitQutritState> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|source| Error::Json { path: path.to_path_buf(), source })?;
    StateFile::parse(&value).map_err(|e| match e {
        Error::StateField { field, message } => {
            Error::StateField { field, message: format!("{message} (in {})", path.display()) }
        }
        other => other,
    })
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

#[derive(Serialize)]
struct BasisOutput {
    label: BasisLabel,
    n: usize,
    dim: usize,
    orthonormality_deviation: f64,
    structure_constants: su_algebra::StructureConstantsDump,
    identities: su_algebra::IdentityReport,
}

fn run_basis(algebra: Algebra, format: Format, out: &mut dyn Write) -> Result<i32> {
    let basis = su_algebra::build_basis(algebra.into());
    let sc = su_algebra::structure_constants(&basis)?;
    let identities = su_algebra::verify_structure_identities(&sc);
    let code = if identities.passed { EXIT_OK } else { EXIT_CHECK_FAILED };
    let report = BasisOutput {
        label: basis.label(),
        n: basis.n(),
        dim: basis.dim(),
        orthonormality_deviation: basis.orthonormality_deviation(),
        structure_constants: sc.dump(),
        identities,
    };
    match format {
        Format::Json => write_json(out, &report),
        Format::Table => (|| {
            writeln!(out, "basis {}  n={}  dim={}", report.label, report.n, report.dim)?;
            writeln!(out, "orthonormality deviation  {:.3e}", report.orthonormality_deviation)?;
            writeln!(
                out,
                "nonzero d (a<=b<=c): {}   nonzero f (a<b<c): {}",
                report.structure_constants.d.len(),
                report.structure_constants.f.len()
            )?;
            for c in &report.identities.checks {
                writeln!(out, "{:<16} {:>12.3e}  {}", c.name, c.max_violation, pass(c.passed))?;
            }
            Ok(())
        })(),
    }
    .map_err(io_error)?;
    Ok(code)
}

fn io_error(source: io::Error) -> Error {
    Error::Io { path: PathBuf::from("<stdout>"), source }
}

fn run_positivity(file: &Path, oracle: bool, format: Format, out: &mut dyn Write) -> Result<i32> {
    let state = load_state(file)?;
    let report: PositivityReport = casimir::positivity_report_matrix(&state.to_matrix(), oracle)?;
    match format {
        Format::Json => write_json(out, &report),
        Format::Table => (|| {
            writeln!(out, "{:>2} {:>14} {:>14} {:>14} {:>14}  S  E", "k", "t_k", "S_k", "S_bar_k", "E_k")?;
            for k in 1..=6 {
                let (sb, e, ve) = if k >= 2 {
                    (
                        format!("{:14.6e}", report.s_bar[k - 2]),
                        format!("{:14.6e}", report.casimir_exprs[k - 2]),
                        pass(report.verdict_casimir[k - 2]),
                    )
                } else {
                    (format!("{:>14}", "-"), format!("{:>14}", "-"), "-")
                };
                writeln!(
                    out,
                    "{k:>2} {:14.6e} {:14.6e} {sb} {e}  {} {ve}",
                    report.t[k - 1],
                    report.s[k - 1],
                    pass(report.verdict_s[k - 1])
                )?;
            }
            writeln!(out, "consistent: {}", report.consistent)?;
            if let Some(ev) = &report.eigenvalues {
                let list: Vec<String> = ev.iter().map(|x| format!("{x:.6e}")).collect();
                writeln!(out, "eigenvalues: {}", list.join(" "))?;
            }
            Ok(())
        })(),
    }
    .map_err(io_error)?;
    Ok(if report.consistent { EXIT_OK } else { EXIT_CHECK_FAILED })
}

#[derive(Serialize)]
struct InvariantsChecks {
    panel_seed: u64,
    panel_size: usize,
    kernel_degree_4: checks::KernelReport,
    sign_relation: checks::CheckReport,
    gamma3_formula: checks::CheckReport,
    i004_identity: checks::CheckReport,
    multidegree_relations: checks::RelationsReport,
    casimir_decomposition: checks::RelationsReport,
    passed: bool,
}

fn invariant_checks() -> Result<InvariantsChecks> {
    let panel = Panel::default_panel();
    let sc3 = su_algebra::structure_constants(&su_algebra::build_basis(BasisLabel::Su3GellMann))?;
    let sign_relation = checks::sign_relation_check(&panel);
    let gamma3_formula = checks::gamma3_formula_check(&panel, &sc3);
    let i004_identity = checks::i004_identity_check(&panel, &sc3);
    let multidegree_relations = checks::multidegree_relations_check(&panel, &sc3);
    let casimir_decomposition = checks::casimir_decomposition_check(&panel);
    let passed = sign_relation.passed
        && gamma3_formula.passed
        && i004_identity.passed
        && multidegree_relations.passed
        && casimir_decomposition.passed;
    Ok(InvariantsChecks {
        panel_seed: panel.seed,
        panel_size: panel.len(),
        kernel_degree_4: checks::kernel_at_degree(4, &panel)?,
        sign_relation,
        gamma3_formula,
        i004_identity,
        multidegree_relations,
        casimir_decomposition,
        passed,
    })
}

#[derive(Serialize)]
struct InvariantsOutput {
    max_degree: usize,
    invariants: Vec<InvariantValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    checks: Option<InvariantsChecks>,
}

fn run_invariants(file: &Path, max_degree: usize, with_checks: bool, format: Format, out: &mut dyn Write) -> Result<i32> {
    let state = load_state(file)?;
    let ops = LocalOperators::new(&state);
    let mut values = Vec::new();
    for d in 1..=max_degree {
        for w in invariants::enumerate_words(d)? {
            values.push(invariants::eval::eval_trace_ops(&w, &ops));
        }
    }
    let checks = if with_checks { Some(invariant_checks()?) } else { None };
    let code = match &checks {
        Some(c) if !c.passed => EXIT_CHECK_FAILED,
        _ => EXIT_OK,
    };
    let report = InvariantsOutput { max_degree, invariants: values, checks };
    match format {
        Format::Json => write_json(out, &report),
        Format::Table => (|| {
            for v in &report.invariants {
                let (s, t, q) = v.multidegree;
                let flag = if v.flagged { format!("  im={:.3e}", v.imaginary) } else { String::new() };
                writeln!(out, "tr({})  ({s},{t},{q})  {:>16.9e}{flag}", v.word, v.value)?;
            }
            if let Some(c) = &report.checks {
                writeln!(out, "checks on panel seed={:#x} size={}", c.panel_seed, c.panel_size)?;
                let words: Vec<String> = c.kernel_degree_4.words.iter().map(|w| format!("tr({w})")).collect();
                writeln!(out, "kernel at degree 4: {}", words.join(", "))?;
                let singles = [&c.sign_relation, &c.gamma3_formula, &c.i004_identity];
                let all = singles
                    .into_iter()
                    .chain(&c.multidegree_relations.checks)
                    .chain(&c.casimir_decomposition.checks);
                for r in all {
                    writeln!(out, "{:<26} {:>12.3e}  {}", r.name, r.max_violation, pass(r.passed))?;
                }
            }
            Ok(())
        })(),
    }
    .map_err(io_error)?;
    Ok(code)
}

fn run_molien(
    group: Group,
    degree: usize,
    compare_rational: bool,
    backend: BackendArg,
    cap: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let spec: GroupSpec = group.into();
    let ws = molien::adjoint_weight_system(spec);
    let series = molien::molien_series_with(&ws, degree, MolienOptions { cap, backend: backend.into() })?;
    // `d c_d` lines regardless of --format: the output is meant for line-based tools
    for (d, c) in series.iter().enumerate() {
        writeln!(out, "{d} {c}").map_err(io_error)?;
    }
    if !compare_rational {
        return Ok(EXIT_OK);
    }
    let form = match spec {
        GroupSpec::Su2xSu2 => RationalForm::two_qubit(),
        GroupSpec::Su2xSu3 => RationalForm::qubit_qutrit(),
    };
    let expected: Vec<BigInt> = form.series(degree);
    let bad: Vec<usize> = (0..=degree).filter(|&d| series[d] != expected[d]).collect();
    if bad.is_empty() {
        writeln!(err, "rational form agrees through degree {degree}").map_err(io_error)?;
        Ok(EXIT_OK)
    } else {
        for d in &bad {
            writeln!(err, "mismatch at degree {d}: series {} vs rational form {}", series[*d], expected[*d])
                .map_err(io_error)?;
        }
        Ok(EXIT_CHECK_FAILED)
    }
}

fn run_selftest(seed: u64, panel_size: usize, format: Format, out: &mut dyn Write) -> Result<i32> {
    if panel_size == 0 {
        return Err(Error::InvalidParameter("panel size must be positive".into()));
    }
    let report: SelftestReport = selftest::run_selftest(seed, panel_size)?;
    match format {
        Format::Json => write_json(out, &report),
        Format::Table => (|| {
            writeln!(out, "selftest  seed={:#x}  panel_size={}", report.seed, report.panel_size)?;
            for c in &report.checks {
                writeln!(
                    out,
                    "{:<20} {:<36} {:>12.3e} {:>10.1e}  {}",
                    c.module,
                    c.name,
                    c.value,
                    c.tolerance,
                    pass(c.passed)
                )?;
            }
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            writeln!(out, "{} checks, {failed} failed", report.checks.len())
        })(),
    }
    .map_err(io_error)?;
    Ok(if report.passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// Executes a parsed command; errors are reported on `err` and mapped to exit code 2.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let format = cli.format;
    let result = match cli.command {
        Command::Basis { algebra } => run_basis(algebra, format, out),
        Command::Positivity { file, oracle } => run_positivity(&file, oracle, format, out),
        Command::Invariants { file, max_degree, checks } => {
            run_invariants(&file, max_degree as usize, checks, format, out)
        }
        Command::Molien { group, degree, compare_rational, backend, cap } => {
            run_molien(group, degree, compare_rational, backend, cap, out, err)
        }
        Command::Selftest { seed, panel_size } => run_selftest(seed, panel_size, format, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT_ERROR
        }
    }
}

/// Parses `args` (including the program name) and runs; usage errors exit with 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT_ERROR } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(cli, &mut stdout.lock(), &mut stderr.lock())
}
