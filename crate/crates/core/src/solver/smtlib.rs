//! Client for an external SMT-LIB 2 solver running as a subprocess.
//!
//! The process is kept alive across queries and `(reset)` between them; on
//! a timeout or I/O error it is killed and respawned lazily, and the query
//! answers `Unknown`. Models are parsed leniently (missing variables
//! default to `0`/`false`) and validated by ground evaluation before being
//! reported, so a misbehaving solver can cost completeness but not
//! soundness.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver};
use std::time::Duration;

use crate::build;
use crate::signature::{names, Signature, SymbolKind};
use crate::subst::Substitution;
use crate::term::{Term, Var};

use super::{validate_model, EquivResult, SatResult, Solver};

pub struct ExternalSolver {
    display: String,
    cmd: Vec<String>,
    timeout: Duration,
    proc: Option<Proc>,
}

struct Proc {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<String>,
}

impl ExternalSolver {
    /// `cmd` is the solver invocation, whitespace-separated, e.g.
    /// `"z3 -in"` or `"cvc5 --incremental"`. The process is spawned on
    /// first use.
    pub fn new(cmd: &str, timeout: Duration) -> ExternalSolver {
        ExternalSolver {
            display: cmd.to_string(),
            cmd: cmd.split_whitespace().map(str::to_string).collect(),
            timeout,
            proc: None,
        }
    }

    pub fn name(&self) -> String {
        format!("external({})", self.display)
    }

    /// Spawn the process if needed; `None` when it cannot be started.
    fn ensure_proc(&mut self) -> Option<&mut Proc> {
        if self.proc.is_none() {
            let (program, rest) = self.cmd.split_first()?;
            let mut child = Command::new(program)
                .args(rest)
                .stdin(Stdio::piped())
                .stdout(Stdio::piped())
                .stderr(Stdio::null())
                .spawn()
                .ok()?;
            let stdin = child.stdin.take()?;
            let stdout = child.stdout.take()?;
            let (tx, rx) = mpsc::channel();
            std::thread::spawn(move || {
                let reader = BufReader::new(stdout);
                for line in reader.lines() {
                    match line {
                        Ok(l) => {
                            if tx.send(l).is_err() {
                                break;
                            }
                        }
                        Err(_) => break,
                    }
                }
            });
            self.proc = Some(Proc { child, stdin, lines: rx });
        }
        self.proc.as_mut()
    }

    fn kill(&mut self) {
        if let Some(mut p) = self.proc.take() {
            let _ = p.child.kill();
            let _ = p.child.wait();
        }
    }

    fn send(&mut self, script: &str) -> Option<()> {
        let p = self.ensure_proc()?;
        let ok = p.stdin.write_all(script.as_bytes()).is_ok()
            && p.stdin.write_all(b"\n").is_ok()
            && p.stdin.flush().is_ok();
        if !ok {
            self.kill();
            return None;
        }
        Some(())
    }

    /// Next meaningful output line, or `None` on timeout/EOF (killing the
    /// process so the next query starts fresh).
    fn recv_line(&mut self) -> Option<String> {
        loop {
            let p = self.proc.as_mut()?;
            match p.lines.recv_timeout(self.timeout) {
                Ok(line) => {
                    let trimmed = line.trim().to_string();
                    if trimmed.is_empty() || trimmed == "success" || trimmed.starts_with(';') {
                        continue;
                    }
                    return Some(trimmed);
                }
                Err(_) => {
                    self.kill();
                    return None;
                }
            }
        }
    }

    /// Read lines until the parentheses balance, for `(get-model)` output.
    fn recv_sexpr(&mut self) -> Option<String> {
        let mut buf = String::new();
        let mut depth: i64 = 0;
        loop {
            let line = self.recv_line()?;
            for ch in line.chars() {
                match ch {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    _ => {}
                }
            }
            buf.push_str(&line);
            buf.push(' ');
            if depth <= 0 && buf.contains('(') {
                return Some(buf);
            }
            if depth < 0 {
                return None;
            }
        }
    }
}

impl Drop for ExternalSolver {
    fn drop(&mut self) {
        self.kill();
    }
}

impl Solver for ExternalSolver {
    fn name(&self) -> String {
        ExternalSolver::name(self)
    }

    fn sat(&mut self, sig: &Signature, phi: &Term) -> SatResult {
        let vars = phi.var_set();
        if vars.iter().any(|v| !v.sort().is_theory()) {
            return SatResult::Unknown;
        }
        let map = var_names(&vars, "v");
        let Ok(body) = smt_term(phi, &map) else {
            return SatResult::Unknown;
        };
        let mut script = String::from("(reset)\n(set-option :print-success false)\n(set-logic ALL)\n");
        for (v, n) in &map {
            script.push_str(&format!("(declare-const {} {})\n", n, sort_name(v)));
        }
        script.push_str(&format!("(assert {})\n(check-sat)", body));
        if self.send(&script).is_none() {
            return SatResult::Unknown;
        }
        match self.recv_line().as_deref() {
            Some("unsat") => SatResult::Unsat,
            Some("sat") => {
                if self.send("(get-model)").is_none() {
                    return SatResult::Unknown;
                }
                let Some(text) = self.recv_sexpr() else {
                    return SatResult::Unknown;
                };
                match parse_model(&text, &map, sig, &vars) {
                    Some(model) if validate_model(phi, &model) => SatResult::Sat(model),
                    _ => SatResult::Unknown,
                }
            }
            _ => SatResult::Unknown,
        }
    }

    fn check_equiv(
        &mut self,
        sig: &Signature,
        a: &Term,
        b: &Term,
        shared: &BTreeSet<Var>,
    ) -> EquivResult {
        let _ = sig;
        let shared_theory: BTreeSet<Var> =
            shared.iter().filter(|v| v.sort().is_theory()).cloned().collect();
        let private_a: BTreeSet<Var> =
            a.var_set().into_iter().filter(|v| !shared.contains(v)).collect();
        let private_b: BTreeSet<Var> =
            b.var_set().into_iter().filter(|v| !shared.contains(v)).collect();
        if private_a.iter().chain(&private_b).any(|v| !v.sort().is_theory()) {
            return EquivResult::Unknown;
        }
        let mut map = var_names(&shared_theory, "v");
        map.extend(var_names(&private_a, "pa"));
        let map_b_private = var_names(&private_b, "pb");
        let mut map_b = map.clone();
        map_b.extend(map_b_private);
        let (Ok(body_a), Ok(body_b)) = (smt_term(a, &map_b), smt_term(b, &map_b)) else {
            return EquivResult::Unknown;
        };
        let quantified = |body: String, private: &BTreeSet<Var>, m: &BTreeMap<Var, String>| {
            if private.is_empty() {
                body
            } else {
                let binders: Vec<String> = private
                    .iter()
                    .map(|v| format!("({} {})", m[v], sort_name(v)))
                    .collect();
                format!("(exists ({}) {})", binders.join(" "), body)
            }
        };
        let qa = quantified(body_a, &private_a, &map_b);
        let qb = quantified(body_b, &private_b, &map_b);
        let mut script = String::from("(reset)\n(set-option :print-success false)\n(set-logic ALL)\n");
        for v in &shared_theory {
            script.push_str(&format!("(declare-const {} {})\n", map[v], sort_name(v)));
        }
        script.push_str(&format!("(assert (not (= {} {})))\n(check-sat)", qa, qb));
        if self.send(&script).is_none() {
            return EquivResult::Unknown;
        }
        match self.recv_line().as_deref() {
            Some("unsat") => EquivResult::Equiv,
            Some("sat") => EquivResult::NotEquiv,
            _ => EquivResult::Unknown,
        }
    }
}

fn var_names(vars: &BTreeSet<Var>, prefix: &str) -> BTreeMap<Var, String> {
    vars.iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), format!("{}{}", prefix, i)))
        .collect()
}

fn sort_name(v: &Var) -> &'static str {
    if v.sort().is_int() {
        "Int"
    } else {
        "Bool"
    }
}

#[derive(Debug)]
pub struct Unsupported(pub String);

/// Translate a theory term to SMT-LIB 2 concrete syntax.
pub fn smt_term(t: &Term, map: &BTreeMap<Var, String>) -> Result<String, Unsupported> {
    match t {
        Term::Var(v) => map
            .get(v)
            .cloned()
            .ok_or_else(|| Unsupported(format!("unmapped variable {}", v))),
        Term::App(f, args) => {
            if let Some(n) = f.as_int() {
                return Ok(if n < 0 {
                    format!("(- {})", (n as i128).unsigned_abs())
                } else {
                    n.to_string()
                });
            }
            if let Some(b) = f.as_bool() {
                return Ok(b.to_string());
            }
            if f.kind() != SymbolKind::Calculation {
                return Err(Unsupported(f.display_name()));
            }
            let name = f.display_name();
            let op = match name.as_str() {
                names::AND => "and",
                names::OR => "or",
                names::NOT => "not",
                names::IMP => "=>",
                names::IFF | names::EQ => "=",
                names::LE => "<=",
                names::LT => "<",
                names::GE => ">=",
                names::GT => ">",
                names::ADD => "+",
                names::SUB => "-",
                names::MUL => "*",
                names::DIV => "div",
                names::MOD => "mod",
                names::NEQ => {
                    let xs = args
                        .iter()
                        .map(|a| smt_term(a, map))
                        .collect::<Result<Vec<_>, _>>()?;
                    return Ok(format!("(not (= {}))", xs.join(" ")));
                }
                // No SMT-LIB equivalent for exponentiation with these
                // semantics; let the caller fall back.
                _ => return Err(Unsupported(name)),
            };
            let xs = args
                .iter()
                .map(|a| smt_term(a, map))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(format!("({} {})", op, xs.join(" ")))
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
enum SExpr {
    Atom(String),
    List(Vec<SExpr>),
}

fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_sexpr(tokens: &[String], pos: &mut usize) -> Option<SExpr> {
    match tokens.get(*pos)?.as_str() {
        "(" => {
            *pos += 1;
            let mut items = Vec::new();
            while tokens.get(*pos)? != ")" {
                items.push(parse_sexpr(tokens, pos)?);
            }
            *pos += 1;
            Some(SExpr::List(items))
        }
        ")" => None,
        atom => {
            *pos += 1;
            Some(SExpr::Atom(atom.to_string()))
        }
    }
}

fn sexpr_int(e: &SExpr) -> Option<i64> {
    match e {
        SExpr::Atom(a) => a.parse().ok(),
        SExpr::List(items) => match items.as_slice() {
            [SExpr::Atom(minus), inner] if minus == "-" => sexpr_int(inner).and_then(i64::checked_neg),
            _ => None,
        },
    }
}

/// Extract variable assignments from `(get-model)` output, leniently:
/// variables the solver does not mention default to `0`/`false`.
fn parse_model(
    text: &str,
    map: &BTreeMap<Var, String>,
    sig: &Signature,
    vars: &BTreeSet<Var>,
) -> Option<Substitution> {
    let tokens = tokenize(text);
    let mut pos = 0;
    let top = parse_sexpr(&tokens, &mut pos)?;
    let mut values: BTreeMap<String, SExpr> = BTreeMap::new();
    collect_define_funs(&top, &mut values);
    let by_name: BTreeMap<&String, &Var> = map.iter().map(|(v, n)| (n, v)).collect();
    let mut model = Substitution::new();
    for v in vars {
        let smt_name = &map[v];
        let entry = values.get(smt_name);
        let image = if v.sort().is_int() {
            let n = entry.and_then(sexpr_int).unwrap_or(0);
            build::int(sig, n)
        } else {
            let b = match entry {
                Some(SExpr::Atom(a)) if a == "true" => true,
                Some(SExpr::Atom(a)) if a == "false" => false,
                _ => false,
            };
            build::boolean(sig, b)
        };
        model.insert(v.clone(), image).ok()?;
    }
    let _ = by_name;
    Some(model)
}

fn collect_define_funs(e: &SExpr, out: &mut BTreeMap<String, SExpr>) {
    if let SExpr::List(items) = e {
        if let [SExpr::Atom(kw), SExpr::Atom(name), SExpr::List(params), _sort, body] =
            items.as_slice()
        {
            if kw == "define-fun" && params.is_empty() {
                out.insert(name.clone(), clone_sexpr(body));
                return;
            }
        }
        for item in items {
            collect_define_funs(item, out);
        }
    }
}

fn clone_sexpr(e: &SExpr) -> SExpr {
    match e {
        SExpr::Atom(a) => SExpr::Atom(a.clone()),
        SExpr::List(xs) => SExpr::List(xs.iter().map(clone_sexpr).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;

    #[test]
    fn translation_goldens() {
        let sig = crate::signature::Signature::new();
        let phi = and(
            &sig,
            not(&sig, leq(&sig, ivar_t("x"), int(&sig, 0))),
            neq(&sig, ivar_t("y"), int(&sig, -2)),
        );
        let vars = phi.var_set();
        let map = var_names(&vars, "v");
        let got = smt_term(&phi, &map).unwrap();
        assert_eq!(got, "(and (not (<= v0 0)) (not (= v1 (- 2))))");
        // Exponentiation is not translated.
        let e = sig.lookup_unique(names::EXP, 2).unwrap();
        let t = Term::app(e, vec![ivar_t("x"), int(&sig, 2)]).unwrap();
        let map2 = var_names(&t.var_set(), "v");
        assert!(smt_term(&t, &map2).is_err());
    }

    #[test]
    fn model_parsing_is_lenient() {
        let sig = crate::signature::Signature::new();
        let vars: BTreeSet<Var> = [ivar("x"), ivar("y"), bvar("p")].into_iter().collect();
        let map = var_names(&vars, "v");
        // Names: sorted order p, x, y -> v0, v1, v2 by Var ordering.
        let x_name = map[&ivar("x")].clone();
        let text = format!(
            "(model (define-fun {} () Int (- 7)) (define-fun unrelated () Int 3))",
            x_name
        );
        let model = parse_model(&text, &map, &sig, &vars).unwrap();
        assert_eq!(model.image(&ivar("x")), int(&sig, -7));
        assert_eq!(model.image(&ivar("y")), int(&sig, 0));
        assert_eq!(model.image(&bvar("p")), ff(&sig));
    }

    #[test]
    fn sexpr_round_trip() {
        let tokens = tokenize("(a (b c) -12)");
        let mut pos = 0;
        let e = parse_sexpr(&tokens, &mut pos).unwrap();
        match e {
            SExpr::List(items) => {
                assert_eq!(items.len(), 3);
                assert_eq!(items[0], SExpr::Atom("a".into()));
                assert_eq!(sexpr_int(&items[2]), Some(-12));
            }
            _ => panic!("expected list"),
        }
    }

    /// Drive the client against a scripted fake solver to exercise the
    /// process plumbing without a real SMT solver.
    #[test]
    fn scripted_process_round_trip() {
        use std::io::Write as _;
        let dir = std::env::temp_dir();
        let path = dir.join(format!("fake-solver-{}.sh", std::process::id()));
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(
            f,
            "#!/bin/sh\nwhile read line; do\n  case \"$line\" in\n    *check-sat*) echo sat ;;\n    *get-model*) echo '(model (define-fun v0 () Int 42))' ;;\n  esac\ndone"
        )
        .unwrap();
        drop(f);
        let sig = crate::signature::Signature::new();
        let phi = gt(&sig, ivar_t("x"), int(&sig, 41));
        let cmd = format!("sh {}", path.display());
        let mut solver = ExternalSolver::new(&cmd, std::time::Duration::from_secs(5));
        match solver.sat(&sig, &phi) {
            SatResult::Sat(m) => assert_eq!(m.image(&ivar("x")), int(&sig, 42)),
            other => panic!("expected Sat, got {:?}", other),
        }
        // A second query reuses the process.
        assert!(matches!(solver.sat(&sig, &phi), SatResult::Sat(_)));
        drop(solver);
        let _ = std::fs::remove_file(&path);
    }

    #[test]
    fn lying_solver_is_caught_by_validation() {
        use std::io::Write as _;
        let dir = std::env::temp_dir();
        let path = dir.join(format!("lying-solver-{}.sh", std::process::id()));
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(
            f,
            "#!/bin/sh\nwhile read line; do\n  case \"$line\" in\n    *check-sat*) echo sat ;;\n    *get-model*) echo '(model (define-fun v0 () Int 0))' ;;\n  esac\ndone"
        )
        .unwrap();
        drop(f);
        let sig = crate::signature::Signature::new();
        let phi = gt(&sig, ivar_t("x"), int(&sig, 41));
        let cmd = format!("sh {}", path.display());
        let mut solver = ExternalSolver::new(&cmd, std::time::Duration::from_secs(5));
        assert!(matches!(solver.sat(&sig, &phi), SatResult::Unknown));
        drop(solver);
        let _ = std::fs::remove_file(&path);
    }

    #[test]
    fn unresponsive_solver_times_out() {
        let sig = crate::signature::Signature::new();
        let phi = gt(&sig, ivar_t("x"), int(&sig, 0));
        let mut solver = ExternalSolver::new("sleep 30", std::time::Duration::from_millis(200));
        let start = std::time::Instant::now();
        assert!(matches!(solver.sat(&sig, &phi), SatResult::Unknown));
        assert!(start.elapsed() < std::time::Duration::from_secs(5));
        // Missing binaries are also just Unknown.
        let mut none = ExternalSolver::new(
            "definitely-not-a-real-solver-binary",
            std::time::Duration::from_millis(200),
        );
        assert!(matches!(none.sat(&sig, &phi), SatResult::Unknown));
    }
}
