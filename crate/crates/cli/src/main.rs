//! Command-line interface for the pattern calculus: decide
//! quasi-reducibility of a rewrite system, print the complement of its
//! left-hand patterns, or subtract one pattern set from another over a
//! shared signature.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use lctrs_core::cterm::{constrained_unifiable, value_free};
use lctrs_core::io::{json, parse_lctrs, parse_patterns, printer};
use lctrs_core::oracle::{Enumerator, FiniteFragment};
use lctrs_core::qr::{copat, is_redex, quasi_reducible, Severity};
use lctrs_core::signature::SymbolKind;
use lctrs_core::solver::ExternalSolver;
use lctrs_core::{
    ConstrainedTerm, DiffCtx, DiffStatus, EquivMode, FreshVars, FunctionSymbol, Lctrs, QrReport,
    QrVerdict, SetDiff, Signature, Term, TieredSolver, Var,
};

#[derive(Parser)]
#[command(
    name = "lctrs",
    version,
    about = "Complement and difference calculus for constrained patterns"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Constraint solver backend.
    #[arg(long, global = true, value_enum, default_value_t = SolverChoice::Builtin)]
    solver: SolverChoice,

    /// Command line of the external SMT-LIB solver; defaults to the
    /// LCTRS_SOLVER_CMD environment variable.
    #[arg(long, global = true)]
    solver_cmd: Option<String>,

    /// Timeout for each external solver query, in milliseconds.
    #[arg(long, global = true, default_value_t = 5000)]
    timeout_ms: u64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Cross-check the result by finite enumeration and print `oracle: OK`.
    #[arg(long, global = true)]
    oracle_check: bool,

    /// Integer range LO..HI (inclusive) for --oracle-check enumeration.
    #[arg(long, global = true, default_value = "-3..3", value_parser = parse_range)]
    int_range: (i64, i64),

    /// Term height bound for --oracle-check enumeration.
    #[arg(long, global = true, default_value_t = 5)]
    max_height: usize,

    /// Equality on constrained patterns used to deduplicate results.
    #[arg(long, global = true, value_enum, default_value_t = Equiv::Syntactic)]
    equiv: Equiv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether every ground pattern of the system is a redex.
    ///
    /// Exits 0 when the system is quasi-reducible, 1 when a witness refutes
    /// it, 2 when the result is unknown, 3 on input errors.
    Check {
        /// Rewrite system file.
        file: PathBuf,
    },
    /// Print the constrained patterns not covered by the system's rules.
    Complement {
        /// Rewrite system file.
        file: PathBuf,
    },
    /// Subtract the patterns in Q from the patterns in P.
    ///
    /// Both pattern files are read over SYSTEM's signature and value-freed
    /// on load. The output lists what remains of P, then what remains of Q
    /// (the codifference).
    Diff {
        /// Rewrite system file providing the signature.
        system: PathBuf,
        /// Pattern file to subtract from.
        p: PathBuf,
        /// Pattern file to subtract.
        q: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverChoice {
    Builtin,
    External,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Equiv {
    Syntactic,
    Semantic,
}

impl Equiv {
    fn mode(self) -> EquivMode {
        match self {
            Equiv::Syntactic => EquivMode::Syntactic,
            Equiv::Semantic => EquivMode::Semantic,
        }
    }
}

/// A failure with the exit code it maps to: 3 for input problems, 4 for a
/// failed oracle cross-check.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure { code: 3, message: message.into() }
    }

    fn oracle(message: impl Into<String>) -> Failure {
        Failure { code: 4, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Cmd::Check { file } => run_check(cli, file),
        Cmd::Complement { file } => run_complement(cli, file),
        Cmd::Diff { system, p, q } => run_diff(cli, system, p, q),
    }
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) =
        s.split_once("..").ok_or_else(|| "expected LO..HI, for example -3..3".to_string())?;
    let lo: i64 = lo.trim().parse().map_err(|_| format!("`{lo}` is not an integer"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("`{hi}` is not an integer"))?;
    if lo > hi {
        return Err("the range is empty".to_string());
    }
    Ok((lo, hi))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read `{}`: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<Lctrs, Failure> {
    let text = read(path)?;
    parse_lctrs(&text).map_err(|diags| {
        let mut msg = format!("`{}` did not parse:", path.display());
        for d in &diags {
            msg.push_str(&format!("\n  {d}"));
        }
        Failure::input(msg)
    })
}

fn load_patterns(path: &Path, sig: &Signature) -> Result<Vec<ConstrainedTerm>, Failure> {
    let text = read(path)?;
    let pats = parse_patterns(&text, sig).map_err(|diags| {
        let mut msg = format!("`{}` did not parse:", path.display());
        for d in &diags {
            msg.push_str(&format!("\n  {d}"));
        }
        Failure::input(msg)
    })?;
    for ct in &pats {
        if !ct.term().is_linear() {
            return Err(Failure::input(format!(
                "`{}` in `{}` is not linear; differences need linear patterns",
                printer::cterm_to_string(ct),
                path.display()
            )));
        }
    }
    let mut fresh = FreshVars::new();
    Ok(pats.iter().map(|ct| value_free(ct, sig, &mut fresh)).collect())
}

fn make_solver(cli: &Cli) -> Result<TieredSolver, Failure> {
    match cli.solver {
        SolverChoice::Builtin => Ok(TieredSolver::builtin_only()),
        SolverChoice::External => {
            let cmd = cli
                .solver_cmd
                .clone()
                .or_else(|| std::env::var("LCTRS_SOLVER_CMD").ok())
                .ok_or_else(|| {
                    Failure::input(
                        "--solver external needs --solver-cmd or the LCTRS_SOLVER_CMD variable",
                    )
                })?;
            let timeout = Duration::from_millis(cli.timeout_ms);
            Ok(TieredSolver::with_external(ExternalSolver::new(&cmd, timeout)))
        }
    }
}

fn fragment(cli: &Cli) -> FiniteFragment {
    FiniteFragment::new(cli.int_range.0, cli.int_range.1, cli.max_height)
}

fn print_oracle_ok(cli: &Cli) {
    // Keep stdout machine-readable in JSON mode.
    match cli.format {
        Format::Text => println!("oracle: OK"),
        Format::Json => eprintln!("oracle: OK"),
    }
}

/// `f(x1, .., xn)` with the trivial constraint.
fn top_pattern(sig: &Signature, f: &Arc<FunctionSymbol>) -> ConstrainedTerm {
    let args: Vec<Term> = f
        .arg_sorts()
        .iter()
        .enumerate()
        .map(|(i, s)| Term::var(Var::new(&format!("x{}", i + 1), s.clone())))
        .collect();
    ConstrainedTerm::unconstrained(
        sig,
        Term::app(f.clone(), args).expect("fresh variables match the declared sorts"),
    )
}

fn run_check(cli: &Cli, file: &Path) -> Result<u8, Failure> {
    let lctrs = load_system(file)?;
    let mut solver = make_solver(cli)?;
    let report = quasi_reducible(&lctrs, &mut solver, cli.equiv.mode())
        .map_err(|e| Failure::input(e.to_string()))?;
    for d in &report.diagnostics {
        eprintln!("warning: {d}");
    }
    match cli.format {
        Format::Json => print!("{}", json::to_string(&json::check_report(&report))),
        Format::Text => {
            println!("verdict: {}", report.verdict);
            if let Some(reason) = &report.reason {
                println!("reason: {reason}");
            }
            for w in &report.witnesses {
                let mark = if w.status == DiffStatus::Exact { "" } else { " (inconclusive)" };
                println!("witness: {w}{mark}");
            }
        }
    }
    if cli.oracle_check {
        check_oracle_qr(cli, &lctrs, &report, &mut solver)?;
        print_oracle_ok(cli);
    }
    Ok(match report.verdict {
        QrVerdict::QuasiReducible => 0,
        QrVerdict::NotQuasiReducible => 1,
        QrVerdict::Unknown => 2,
    })
}

/// Re-validates a `check` result by enumeration: exact witnesses must have
/// no redex instances, and a quasi-reducible verdict means every ground
/// pattern of every defined symbol is a redex.
fn check_oracle_qr(
    cli: &Cli,
    lctrs: &Lctrs,
    report: &QrReport,
    solver: &mut TieredSolver,
) -> Result<(), Failure> {
    let mut oracle = Enumerator::new(&lctrs.sig, fragment(cli));
    for w in &report.witnesses {
        if w.status != DiffStatus::Exact {
            continue;
        }
        for inst in oracle.ground_instances(&w.pattern) {
            if is_redex(lctrs, solver, &inst) {
                return Err(Failure::oracle(format!("witness instance `{inst}` is a redex")));
            }
        }
    }
    if report.verdict == QrVerdict::QuasiReducible {
        for f in lctrs.sig.defined_symbols() {
            let top = top_pattern(&lctrs.sig, &f);
            for inst in oracle.ground_instances(&top) {
                if !is_redex(lctrs, solver, &inst) {
                    return Err(Failure::oracle(format!(
                        "ground pattern `{inst}` is not a redex"
                    )));
                }
            }
        }
    }
    Ok(())
}

fn run_complement(cli: &Cli, file: &Path) -> Result<u8, Failure> {
    let lctrs = load_system(file)?;
    let issues = lctrs.diagnostics();
    let errors: Vec<String> = issues
        .iter()
        .filter(|i| i.severity == Severity::Error)
        .map(|i| i.message.clone())
        .collect();
    if !errors.is_empty() {
        return Err(Failure::input(errors.join("; ")));
    }
    let diagnostics: Vec<String> = issues.into_iter().map(|i| i.message).collect();
    for d in &diagnostics {
        eprintln!("warning: {d}");
    }
    let mut fresh = FreshVars::new();
    let basis: Vec<ConstrainedTerm> = lctrs
        .rules
        .iter()
        .filter(|r| r.lhs.is_pattern())
        .map(|r| {
            let ct = ConstrainedTerm::new(r.lhs.clone(), r.guard.clone())
                .expect("validated guards are boolean");
            value_free(&ct, &lctrs.sig, &mut fresh)
        })
        .collect();
    let mut solver = make_solver(cli)?;
    let (patterns, status) = copat(&lctrs.sig, &mut solver, cli.equiv.mode(), &basis)
        .map_err(|e| Failure::input(e.to_string()))?;
    match cli.format {
        Format::Json => print!(
            "{}",
            json::to_string(&json::complement_report(&patterns, status, diagnostics))
        ),
        Format::Text => {
            for ct in &patterns {
                println!("pattern: {}", printer::cterm_to_string(ct));
            }
            let verdict = match (patterns.is_empty(), status) {
                (true, DiffStatus::Exact) => "complete",
                (false, DiffStatus::Exact) => "incomplete",
                _ => "unknown",
            };
            println!("status: {verdict}");
        }
    }
    if cli.oracle_check {
        check_oracle_complement(cli, &lctrs, &basis, &patterns, status)?;
        print_oracle_ok(cli);
    }
    Ok(0)
}

/// The complement must hold exactly the uncovered ground patterns when its
/// status is exact, and at least cover them otherwise.
fn check_oracle_complement(
    cli: &Cli,
    lctrs: &Lctrs,
    basis: &[ConstrainedTerm],
    patterns: &[ConstrainedTerm],
    status: DiffStatus,
) -> Result<(), Failure> {
    let mut oracle = Enumerator::new(&lctrs.sig, fragment(cli));
    let covered = oracle.ground_instances_of_all(basis);
    let mut all: BTreeSet<Term> = BTreeSet::new();
    for f in lctrs.sig.defined_symbols() {
        all.extend(oracle.ground_instances(&top_pattern(&lctrs.sig, &f)));
    }
    let expected: BTreeSet<Term> = all.difference(&covered).cloned().collect();
    let got = oracle.ground_instances_of_all(patterns);
    if status == DiffStatus::Exact && got != expected {
        return Err(Failure::oracle(format!(
            "the complement has {} ground instances, {} expected",
            got.len(),
            expected.len()
        )));
    }
    if !expected.is_subset(&got) {
        return Err(Failure::oracle("the complement misses uncovered ground patterns"));
    }
    if !got.is_subset(&all) {
        return Err(Failure::oracle("the complement contains covered or foreign terms"));
    }
    Ok(())
}

fn run_diff(cli: &Cli, system: &Path, p_file: &Path, q_file: &Path) -> Result<u8, Failure> {
    let lctrs = load_system(system)?;
    // Complements enumerate sibling constructors per sort, so constructors
    // must not produce theory sorts; mirror the decision procedure's gate.
    if let Some(bad) = lctrs
        .sig
        .term_symbols()
        .iter()
        .find(|s| s.kind() == SymbolKind::Constructor && s.result_sort().is_theory())
    {
        return Err(Failure::input(format!(
            "constructor `{}` has the theory result sort `{}`",
            bad.display_name(),
            bad.result_sort()
        )));
    }
    let p_pats = load_patterns(p_file, &lctrs.sig)?;
    let q_pats = load_patterns(q_file, &lctrs.sig)?;
    let mut solver = make_solver(cli)?;
    let result = {
        let mut ctx = DiffCtx::new(&lctrs.sig, &mut solver, cli.equiv.mode());
        ctx.diff_sets(&p_pats, &q_pats).map_err(|e| Failure::input(e.to_string()))?
    };
    match cli.format {
        Format::Json => print!(
            "{}",
            json::to_string(&json::diff_report(&result.p, &result.q, result.status, Vec::new()))
        ),
        Format::Text => {
            for ct in &result.p {
                println!("pattern: {}", printer::cterm_to_string(ct));
            }
            for ct in &result.q {
                println!("codifference: {}", printer::cterm_to_string(ct));
            }
            let verdict = match result.status {
                DiffStatus::Exact => "exact",
                _ => "inconclusive",
            };
            println!("status: {verdict}");
        }
    }
    if cli.oracle_check {
        check_oracle_diff(cli, &lctrs.sig, &p_pats, &q_pats, &result, &mut solver)?;
        print_oracle_ok(cli);
    }
    Ok(0)
}

/// Bounds that hold for any inputs: each side keeps at least its own
/// instances minus the other side's and never gains foreign ones. When a
/// side's input family is pairwise non-overlapping and the run was exact,
/// that side is exact, and an exact run leaves the two results disjoint.
fn check_oracle_diff(
    cli: &Cli,
    sig: &Signature,
    p_in: &[ConstrainedTerm],
    q_in: &[ConstrainedTerm],
    result: &SetDiff,
    solver: &mut TieredSolver,
) -> Result<(), Failure> {
    let mut oracle = Enumerator::new(sig, fragment(cli));
    let p_inst = oracle.ground_instances_of_all(p_in);
    let q_inst = oracle.ground_instances_of_all(q_in);
    let got_p = oracle.ground_instances_of_all(&result.p);
    let got_q = oracle.ground_instances_of_all(&result.q);
    let expect_p: BTreeSet<Term> = p_inst.difference(&q_inst).cloned().collect();
    let expect_q: BTreeSet<Term> = q_inst.difference(&p_inst).cloned().collect();
    if !expect_p.is_subset(&got_p) || !got_p.is_subset(&p_inst) {
        return Err(Failure::oracle("the left result broke its instance bounds"));
    }
    if !expect_q.is_subset(&got_q) || !got_q.is_subset(&q_inst) {
        return Err(Failure::oracle("the right result broke its instance bounds"));
    }
    if result.status == DiffStatus::Exact {
        if got_p.intersection(&got_q).next().is_some() {
            return Err(Failure::oracle("the two results share a ground instance"));
        }
        if family_non_overlapping(sig, solver, p_in) && got_p != expect_p {
            return Err(Failure::oracle("the left result is not exact"));
        }
        if family_non_overlapping(sig, solver, q_in) && got_q != expect_q {
            return Err(Failure::oracle("the right result is not exact"));
        }
    }
    Ok(())
}

/// Whether no two members share an instance, checked symbolically; an
/// undecided pair counts as overlapping.
fn family_non_overlapping(
    sig: &Signature,
    solver: &mut TieredSolver,
    pats: &[ConstrainedTerm],
) -> bool {
    for (i, a) in pats.iter().enumerate() {
        for b in &pats[i + 1..] {
            let mut fresh = FreshVars::new();
            fresh.absorb_term(a.term());
            fresh.absorb_term(a.constraint());
            let b = b.rename_apart(&mut fresh);
            if !matches!(constrained_unifiable(a, &b, sig, solver), Ok(None)) {
                return false;
            }
        }
    }
    true
}
