//! Builtin constraint solver: linear integer arithmetic plus booleans.
//!
//! Strategy: normalize to negation normal form over a small leaf language
//! (boolean literals, linear inequalities `Σ c·x ≤ b`, and opaque residue),
//! distribute to DNF with a size cap, and decide each conjunct by
//! Fourier–Motzkin elimination with gcd tightening. Elimination is recorded
//! so satisfiable conjuncts yield a concrete model by back-substitution; all
//! models are re-validated by ground evaluation before being reported.
//!
//! The procedure is a decision procedure (never `Unknown`) for conjunction-
//! of-bounds constraints whose variables have unit coefficients, which
//! covers guard languages built from comparisons of variables against
//! variables-plus-constants. Elsewhere — genuinely non-linear atoms,
//! division by a variable, or blow-ups past the DNF cap — it degrades to
//! `Unknown` rather than guessing: `Unsat` is reported only when every
//! conjunct is refuted, and `Sat` only with a checked model.

use std::collections::{BTreeMap, BTreeSet};

use crate::build;
use crate::signature::{names, Signature};
use crate::subst::Substitution;
use crate::term::{Term, Var};

use super::eval::{eval_ground, Value};
use super::{validate_model, EquivResult, SatResult, Solver};

const MAX_CONJUNCTS: usize = 4096;
const MAX_ATOMS: usize = 50_000;

/// A linear inequality `Σ coeffs[x]·x ≤ bound` over integer variables.
/// Invariants: no zero coefficients; the gcd of the coefficients is 1
/// (enforced by tightening, which is sound over the integers).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct LinAtom {
    coeffs: BTreeMap<Var, i128>,
    bound: i128,
}

/// Outcome of normalizing a candidate atom: a proper atom, or a constant
/// truth value when no variables remain.
enum NormAtom {
    Atom(LinAtom),
    Constant(bool),
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl LinAtom {
    fn normalized(mut coeffs: BTreeMap<Var, i128>, bound: i128) -> NormAtom {
        coeffs.retain(|_, c| *c != 0);
        if coeffs.is_empty() {
            return NormAtom::Constant(0 <= bound);
        }
        let g = coeffs.values().fold(0u128, |g, c| gcd(g, c.unsigned_abs()));
        if g > 1 {
            let g = g as i128;
            for c in coeffs.values_mut() {
                *c /= g;
            }
            // Floor division tightens the bound without losing integer
            // solutions.
            return NormAtom::Atom(LinAtom { coeffs, bound: bound.div_euclid(g) });
        }
        NormAtom::Atom(LinAtom { coeffs, bound })
    }
}

/// Eliminate `x` from the pair `upper` (coefficient of x positive) and
/// `lower` (negative) by the cross-multiplied sum. `None` on overflow.
fn combine_atoms(upper: &LinAtom, lower: &LinAtom, x: &Var) -> Option<NormAtom> {
    let cu = upper.coeffs[x];
    let cl = lower.coeffs[x];
    debug_assert!(cu > 0 && cl < 0);
    let mu = cl.checked_neg()?; // multiplier for the upper atom
    let ml = cu; // multiplier for the lower atom
    let mut coeffs: BTreeMap<Var, i128> = BTreeMap::new();
    for (v, c) in &upper.coeffs {
        if v != x {
            coeffs.insert(v.clone(), c.checked_mul(mu)?);
        }
    }
    for (v, c) in &lower.coeffs {
        if v != x {
            let add = c.checked_mul(ml)?;
            let entry = coeffs.entry(v.clone()).or_insert(0);
            *entry = entry.checked_add(add)?;
        }
    }
    let bound = upper.bound.checked_mul(mu)?.checked_add(lower.bound.checked_mul(ml)?)?;
    Some(LinAtom::normalized(coeffs, bound))
}

/// Negation normal form over decided leaves.
#[derive(Debug, Clone)]
enum Nf {
    And(Vec<Nf>),
    Or(Vec<Nf>),
    True,
    False,
    Bool(Var, bool),
    Leq(LinAtom),
    /// An atom outside the linear fragment, with its polarity.
    Opaque(Term, bool),
}

fn leaf(norm: NormAtom) -> Nf {
    match norm {
        NormAtom::Atom(a) => Nf::Leq(a),
        NormAtom::Constant(true) => Nf::True,
        NormAtom::Constant(false) => Nf::False,
    }
}

type Poly = (BTreeMap<Var, i128>, i128);

/// Interpret a term as a linear polynomial over integer variables.
fn poly(t: &Term) -> Option<Poly> {
    if t.is_ground() {
        return match eval_ground(t) {
            Ok(Value::Int(n)) => Some((BTreeMap::new(), n as i128)),
            _ => None,
        };
    }
    match t {
        Term::Var(v) if v.sort().is_int() => {
            Some(([(v.clone(), 1i128)].into_iter().collect(), 0))
        }
        Term::Var(_) => None,
        Term::App(f, args) => match f.display_name().as_str() {
            names::ADD => add_polys(poly(&args[0])?, poly(&args[1])?, 1),
            names::SUB => add_polys(poly(&args[0])?, poly(&args[1])?, -1),
            names::MUL => {
                let pa = poly(&args[0])?;
                let pb = poly(&args[1])?;
                if pa.0.is_empty() {
                    scale_poly(pb, pa.1)
                } else if pb.0.is_empty() {
                    scale_poly(pa, pb.1)
                } else {
                    None
                }
            }
            _ => None,
        },
    }
}

fn add_polys(a: Poly, b: Poly, sign: i128) -> Option<Poly> {
    let (mut coeffs, ka) = a;
    for (v, c) in b.0 {
        let entry = coeffs.entry(v).or_insert(0);
        *entry = entry.checked_add(c.checked_mul(sign)?)?;
    }
    let k = ka.checked_add(b.1.checked_mul(sign)?)?;
    Some((coeffs, k))
}

fn scale_poly(p: Poly, factor: i128) -> Option<Poly> {
    let (coeffs, k) = p;
    let coeffs = coeffs
        .into_iter()
        .map(|(v, c)| c.checked_mul(factor).map(|c| (v, c)))
        .collect::<Option<BTreeMap<_, _>>>()?;
    Some((coeffs, k.checked_mul(factor)?))
}

fn nnf(t: &Term, pos: bool) -> Nf {
    let (f, args) = match t {
        Term::Var(v) if v.sort().is_bool() => return Nf::Bool(v.clone(), pos),
        Term::Var(_) => return Nf::Opaque(t.clone(), pos),
        Term::App(f, args) => (f, args),
    };
    if let Some(b) = f.as_bool() {
        return if b == pos { Nf::True } else { Nf::False };
    }
    let name = f.display_name();
    match name.as_str() {
        names::AND | names::OR => {
            let parts: Vec<Nf> = args.iter().map(|a| nnf(a, pos)).collect();
            if (name == names::AND) == pos {
                Nf::And(parts)
            } else {
                Nf::Or(parts)
            }
        }
        names::NOT => nnf(&args[0], !pos),
        names::IMP => {
            let l = nnf(&args[0], !pos);
            let r = nnf(&args[1], pos);
            if pos {
                Nf::Or(vec![l, r])
            } else {
                Nf::And(vec![l, r])
            }
        }
        names::IFF => iff_nnf(&args[0], &args[1], pos),
        names::EQ if args[0].sort().is_bool() => iff_nnf(&args[0], &args[1], pos),
        names::NEQ if args[0].sort().is_bool() => iff_nnf(&args[0], &args[1], !pos),
        names::EQ | names::NEQ | names::LE | names::LT | names::GE | names::GT
            if args[0].sort().is_int() =>
        {
            comparison_nnf(&name, &args[0], &args[1], pos, t)
        }
        _ => Nf::Opaque(t.clone(), pos),
    }
}

fn iff_nnf(a: &Term, b: &Term, pos: bool) -> Nf {
    // pos:  (a ∧ b) ∨ (¬a ∧ ¬b);  neg:  (a ∧ ¬b) ∨ (¬a ∧ b)
    Nf::Or(vec![
        Nf::And(vec![nnf(a, true), nnf(b, pos)]),
        Nf::And(vec![nnf(a, false), nnf(b, !pos)]),
    ])
}

fn comparison_nnf(name: &str, a: &Term, b: &Term, pos: bool, orig: &Term) -> Nf {
    let effective = if pos {
        name
    } else {
        match name {
            names::LE => names::GT,
            names::LT => names::GE,
            names::GE => names::LT,
            names::GT => names::LE,
            names::EQ => names::NEQ,
            names::NEQ => names::EQ,
            _ => unreachable!(),
        }
    };
    let (pa, pb) = match (poly(a), poly(b)) {
        (Some(pa), Some(pb)) => (pa, pb),
        _ => return Nf::Opaque(orig.clone(), pos),
    };
    // a − b  =  m·x + k
    let (m, k) = match add_polys(pa, pb, -1) {
        Some(p) => p,
        None => return Nf::Opaque(orig.clone(), pos),
    };
    let neg = |m: &BTreeMap<Var, i128>| -> Option<BTreeMap<Var, i128>> {
        m.iter().map(|(v, c)| c.checked_neg().map(|c| (v.clone(), c))).collect()
    };
    let opaque = || Nf::Opaque(orig.clone(), pos);
    let checked = |b: Option<i128>, m: BTreeMap<Var, i128>| match b {
        Some(b) => leaf(LinAtom::normalized(m, b)),
        None => opaque(),
    };
    match effective {
        names::LE => checked(k.checked_neg(), m),
        names::LT => checked(k.checked_neg().and_then(|b| b.checked_sub(1)), m),
        names::GE => match neg(&m) {
            Some(mn) => leaf(LinAtom::normalized(mn, k)),
            None => opaque(),
        },
        names::GT => match (neg(&m), k.checked_sub(1)) {
            (Some(mn), Some(b)) => leaf(LinAtom::normalized(mn, b)),
            _ => opaque(),
        },
        names::EQ => match (k.checked_neg(), neg(&m)) {
            (Some(nb), Some(mn)) => Nf::And(vec![
                leaf(LinAtom::normalized(m, nb)),
                leaf(LinAtom::normalized(mn, k)),
            ]),
            _ => opaque(),
        },
        names::NEQ => match (k.checked_neg().and_then(|b| b.checked_sub(1)), neg(&m), k.checked_sub(1)) {
            (Some(lt_bound), Some(mn), Some(gt_bound)) => Nf::Or(vec![
                leaf(LinAtom::normalized(m, lt_bound)),
                leaf(LinAtom::normalized(mn, gt_bound)),
            ]),
            _ => opaque(),
        },
        _ => unreachable!(),
    }
}

#[derive(Debug, Clone, Default)]
struct Conjunct {
    bools: BTreeMap<Var, bool>,
    lins: Vec<LinAtom>,
    opaque: Vec<(Term, bool)>,
    contradiction: bool,
}

impl Conjunct {
    fn push_bool(&mut self, v: Var, val: bool) {
        match self.bools.insert(v, val) {
            Some(prev) if prev != val => self.contradiction = true,
            _ => {}
        }
    }

    fn merge(&mut self, other: &Conjunct) {
        for (v, val) in &other.bools {
            self.push_bool(v.clone(), *val);
        }
        self.lins.extend(other.lins.iter().cloned());
        self.opaque.extend(other.opaque.iter().cloned());
        self.contradiction |= other.contradiction;
    }
}

/// Distribute to DNF. `None` when the conjunct count exceeds the cap.
fn dnf(nf: &Nf) -> Option<Vec<Conjunct>> {
    match nf {
        Nf::True => Some(vec![Conjunct::default()]),
        Nf::False => Some(vec![]),
        Nf::Bool(v, val) => {
            let mut c = Conjunct::default();
            c.push_bool(v.clone(), *val);
            Some(vec![c])
        }
        Nf::Leq(a) => {
            let mut c = Conjunct::default();
            c.lins.push(a.clone());
            Some(vec![c])
        }
        Nf::Opaque(t, pol) => {
            let mut c = Conjunct::default();
            c.opaque.push((t.clone(), *pol));
            Some(vec![c])
        }
        Nf::Or(parts) => {
            let mut out = Vec::new();
            for p in parts {
                out.extend(dnf(p)?);
                if out.len() > MAX_CONJUNCTS {
                    return None;
                }
            }
            Some(out)
        }
        Nf::And(parts) => {
            let mut acc = vec![Conjunct::default()];
            for p in parts {
                let dp = dnf(p)?;
                let mut next = Vec::with_capacity(acc.len() * dp.len().max(1));
                for left in &acc {
                    for right in &dp {
                        let mut c = left.clone();
                        c.merge(right);
                        next.push(c);
                        if next.len() > MAX_CONJUNCTS {
                            return None;
                        }
                    }
                }
                acc = next;
            }
            Some(acc)
        }
    }
}

/// Outcome of deciding one conjunct's boolean and linear part.
enum ConjunctOutcome {
    /// A candidate assignment; `certain` when the conjunct had no opaque
    /// residue, so the assignment provably satisfies it.
    Candidate { ints: BTreeMap<Var, i128>, certain: bool },
    Unsat,
    Unknown,
}

fn ceil_div(n: i128, d: i128) -> i128 {
    debug_assert!(d > 0);
    let q = n.div_euclid(d);
    if n.rem_euclid(d) != 0 {
        q + 1
    } else {
        q
    }
}

fn decide_conjunct(c: &Conjunct) -> ConjunctOutcome {
    if c.contradiction {
        return ConjunctOutcome::Unsat;
    }
    let mut atoms = c.lins.clone();
    // (variable, lower-bound atoms, upper-bound atoms) per elimination step.
    let mut elims: Vec<(Var, Vec<LinAtom>, Vec<LinAtom>)> = Vec::new();
    loop {
        let Some(x) = atoms.iter().flat_map(|a| a.coeffs.keys()).min().cloned() else {
            break;
        };
        let mut uppers = Vec::new();
        let mut lowers = Vec::new();
        let mut rest = Vec::new();
        for a in atoms {
            match a.coeffs.get(&x) {
                Some(&c) if c > 0 => uppers.push(a),
                Some(_) => lowers.push(a),
                None => rest.push(a),
            }
        }
        for u in &uppers {
            for l in &lowers {
                match combine_atoms(u, l, &x) {
                    None => return ConjunctOutcome::Unknown,
                    Some(NormAtom::Constant(true)) => {}
                    Some(NormAtom::Constant(false)) => return ConjunctOutcome::Unsat,
                    Some(NormAtom::Atom(a)) => rest.push(a),
                }
                if rest.len() > MAX_ATOMS {
                    return ConjunctOutcome::Unknown;
                }
            }
        }
        elims.push((x, lowers, uppers));
        atoms = rest;
    }
    // The projected system is satisfiable over the rationals; reconstruct an
    // integer point, or give up when an interval contains no integer.
    let mut ints: BTreeMap<Var, i128> = BTreeMap::new();
    for (x, lowers, uppers) in elims.iter().rev() {
        let mut lo: Option<i128> = None;
        let mut hi: Option<i128> = None;
        for a in lowers {
            //  c·x + S ≤ b  with c < 0  ⇒  x ≥ (S − b) / (−c)
            let c = a.coeffs[x];
            let Some(s) = eval_rest(a, x, &mut ints) else { return ConjunctOutcome::Unknown };
            let Some(num) = s.checked_sub(a.bound) else { return ConjunctOutcome::Unknown };
            let Some(den) = c.checked_neg() else { return ConjunctOutcome::Unknown };
            let b = ceil_div(num, den);
            lo = Some(lo.map_or(b, |v: i128| v.max(b)));
        }
        for a in uppers {
            //  c·x + S ≤ b  with c > 0  ⇒  x ≤ (b − S) / c
            let c = a.coeffs[x];
            let Some(s) = eval_rest(a, x, &mut ints) else { return ConjunctOutcome::Unknown };
            let Some(num) = a.bound.checked_sub(s) else { return ConjunctOutcome::Unknown };
            let b = num.div_euclid(c);
            hi = Some(hi.map_or(b, |v: i128| v.min(b)));
        }
        if let (Some(l), Some(h)) = (lo, hi) {
            if l > h {
                // Rational solutions exist but no integer does (a dark
                // shadow gap); declining to answer keeps Unsat sound.
                return ConjunctOutcome::Unknown;
            }
        }
        let mut v: i128 = 0;
        if let Some(l) = lo {
            v = v.max(l);
        }
        if let Some(h) = hi {
            v = v.min(h);
        }
        ints.insert(x.clone(), v);
    }
    ConjunctOutcome::Candidate { ints, certain: c.opaque.is_empty() }
}

/// Sum the atom over every variable but `x`. A variable without an
/// assignment yet was consumed by a one-sided elimination step and is
/// otherwise unconstrained here, so it is pinned to 0 on first use.
fn eval_rest(a: &LinAtom, x: &Var, assign: &mut BTreeMap<Var, i128>) -> Option<i128> {
    let mut s: i128 = 0;
    for (v, c) in &a.coeffs {
        if v == x {
            continue;
        }
        let val = *assign.entry(v.clone()).or_insert(0);
        s = s.checked_add(c.checked_mul(val)?)?;
    }
    Some(s)
}

/// Assemble a substitution covering every variable of `phi`.
fn build_model(
    sig: &Signature,
    phi: &Term,
    ints: &BTreeMap<Var, i128>,
    bools: &BTreeMap<Var, bool>,
) -> Option<Substitution> {
    let mut model = Substitution::new();
    for v in phi.var_set() {
        let image = if v.sort().is_int() {
            let n = ints.get(&v).copied().unwrap_or(0);
            build::int(sig, i64::try_from(n).ok()?)
        } else if v.sort().is_bool() {
            build::boolean(sig, bools.get(&v).copied().unwrap_or(false))
        } else {
            // A term-sorted variable in a constraint: no value to offer.
            return None;
        };
        model.insert(v, image).ok()?;
    }
    Some(model)
}

pub struct BuiltinSolver;

impl BuiltinSolver {
    pub fn new() -> BuiltinSolver {
        BuiltinSolver
    }
}

impl Default for BuiltinSolver {
    fn default() -> Self {
        BuiltinSolver::new()
    }
}

impl Solver for BuiltinSolver {
    fn name(&self) -> String {
        "builtin".into()
    }

    fn sat(&mut self, sig: &Signature, phi: &Term) -> SatResult {
        let Some(conjuncts) = dnf(&nnf(phi, true)) else {
            return SatResult::Unknown;
        };
        let mut inconclusive = false;
        for c in &conjuncts {
            match decide_conjunct(c) {
                ConjunctOutcome::Unsat => {}
                ConjunctOutcome::Unknown => inconclusive = true,
                ConjunctOutcome::Candidate { ints, certain } => {
                    match build_model(sig, phi, &ints, &c.bools) {
                        Some(model) if validate_model(phi, &model) => {
                            return SatResult::Sat(model)
                        }
                        _ => {
                            debug_assert!(
                                !certain,
                                "self-check failed for a certain conjunct: {}",
                                phi
                            );
                            inconclusive = true;
                        }
                    }
                }
            }
        }
        if inconclusive {
            SatResult::Unknown
        } else {
            SatResult::Unsat
        }
    }

    fn check_equiv(
        &mut self,
        sig: &Signature,
        a: &Term,
        b: &Term,
        shared: &BTreeSet<Var>,
    ) -> EquivResult {
        let (Some(qa), Some(qb)) =
            (eliminate_private(sig, a, shared), eliminate_private(sig, b, shared))
        else {
            return EquivResult::Unknown;
        };
        let left = build::and(sig, qa.clone(), build::not(sig, qb.clone()));
        let right = build::and(sig, build::not(sig, qa), qb);
        match (self.sat(sig, &left), self.sat(sig, &right)) {
            (SatResult::Sat(_), _) | (_, SatResult::Sat(_)) => EquivResult::NotEquiv,
            (SatResult::Unsat, SatResult::Unsat) => EquivResult::Equiv,
            _ => EquivResult::Unknown,
        }
    }
}

/// Quantifier elimination for the existential closure of `phi` over its
/// variables outside `shared`. Exact only when every private integer
/// variable has unit coefficients in its conjunct (then Fourier–Motzkin
/// projection coincides with integer projection); otherwise `None`.
fn eliminate_private(sig: &Signature, phi: &Term, shared: &BTreeSet<Var>) -> Option<Term> {
    let private: BTreeSet<Var> =
        phi.var_set().into_iter().filter(|v| !shared.contains(v)).collect();
    if private.is_empty() {
        return Some(phi.clone());
    }
    if private.iter().any(|v| !v.sort().is_theory()) {
        return None;
    }
    let conjuncts = dnf(&nnf(phi, true))?;
    let mut out_disjuncts: Vec<Term> = Vec::new();
    'conj: for c in &conjuncts {
        if c.contradiction {
            continue;
        }
        // Opaque residue over private variables cannot be projected.
        for (t, _) in &c.opaque {
            if t.var_set().iter().any(|v| private.contains(v)) {
                return None;
            }
        }
        let mut atoms = c.lins.clone();
        for x in &private {
            if !x.sort().is_int() {
                continue;
            }
            if atoms.iter().any(|a| a.coeffs.get(x).is_some_and(|c| c.abs() != 1)) {
                return None;
            }
            let mut uppers = Vec::new();
            let mut lowers = Vec::new();
            let mut rest = Vec::new();
            for a in atoms {
                match a.coeffs.get(x) {
                    Some(&c) if c > 0 => uppers.push(a),
                    Some(_) => lowers.push(a),
                    None => rest.push(a),
                }
            }
            for u in &uppers {
                for l in &lowers {
                    match combine_atoms(u, l, x)? {
                        NormAtom::Constant(true) => {}
                        NormAtom::Constant(false) => continue 'conj,
                        NormAtom::Atom(a) => rest.push(a),
                    }
                    if rest.len() > MAX_ATOMS {
                        return None;
                    }
                }
            }
            atoms = rest;
        }
        // Private boolean variables occur only as their own literal (one
        // entry in the bools map), so ∃b just drops the literal.
        let mut parts: Vec<Term> = Vec::new();
        for (v, val) in &c.bools {
            if private.contains(v) {
                continue;
            }
            let lit = Term::var(v.clone());
            parts.push(if *val { lit } else { build::not(sig, lit) });
        }
        for a in &atoms {
            parts.push(lin_to_term(sig, a)?);
        }
        for (t, pol) in &c.opaque {
            parts.push(if *pol { t.clone() } else { build::not(sig, t.clone()) });
        }
        out_disjuncts.push(build::conj_all(sig, parts));
    }
    Some(build::disj_all(sig, out_disjuncts))
}

/// Render `Σ c·x ≤ b` back into a term.
fn lin_to_term(sig: &Signature, a: &LinAtom) -> Option<Term> {
    let mut lhs: Option<Term> = None;
    for (v, c) in &a.coeffs {
        let c = i64::try_from(*c).ok()?;
        let var = Term::var(v.clone());
        let summand = match c {
            1 => var,
            _ => build::mul(sig, build::int(sig, c), var),
        };
        lhs = Some(match lhs {
            None => summand,
            Some(acc) => build::add(sig, acc, summand),
        });
    }
    let bound = i64::try_from(a.bound).ok()?;
    Some(build::leq(sig, lhs?, build::int(sig, bound)))
}
