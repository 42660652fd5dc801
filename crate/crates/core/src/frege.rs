//! Tree-like bounded-depth Frege refutations with OR, NOT and parity
//! connectives, and their compilation to Hilbert-like IPS over `F_2`.
//!
//! The parity connective `(xor A1 ... An)` is the `MOD_2` gate: it is true
//! iff an even number of its arguments are true, so that the translation
//! `t(xor A) = n - sum t(A_i)` vanishes exactly when the gate is true. Under
//! this reading the empty parity is true and its axiom is `-> (xor)`.

use std::collections::HashMap;
use std::fmt;

use lexpr::Value;
use thiserror::Error;

use crate::circuit::{Circuit, Domain, NodeId};
use crate::cnf::CnfFormula;
use crate::field::Prime;
use crate::ips::Certificate;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FregeError {
    #[error("cedent {cedent}: {reason}")]
    RuleMismatch { cedent: usize, reason: String },
    #[error("cedent {cedent} reuses premise {premise}")]
    NotTreeLike { cedent: usize, premise: usize },
    #[error("the last cedent is not empty")]
    NotRefutation,
    #[error("only p = 2 is supported, got {0}")]
    UnsupportedModulus(u64),
    #[error("syntax: {0}")]
    Syntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoolFormula {
    Var(u32),
    Not(Box<BoolFormula>),
    Or(Vec<BoolFormula>),
    Xor(Vec<BoolFormula>),
    /// Only used by encodings; no sequent rule introduces it.
    And(Vec<BoolFormula>),
}

use BoolFormula as B;

impl BoolFormula {
    pub fn not(a: BoolFormula) -> Self {
        B::Not(Box::new(a))
    }

    pub fn literal(l: i32) -> Self {
        let v = B::Var(l.unsigned_abs());
        if l > 0 {
            v
        } else {
            B::not(v)
        }
    }

    /// Or/Xor/And nodes count one level each; negations are free.
    pub fn depth(&self) -> u32 {
        match self {
            B::Var(_) => 0,
            B::Not(a) => a.depth(),
            B::Or(cs) | B::Xor(cs) | B::And(cs) => 1 + cs.iter().map(B::depth).max().unwrap_or(0),
        }
    }

    pub fn max_var(&self) -> u32 {
        match self {
            B::Var(i) => *i,
            B::Not(a) => a.max_var(),
            B::Or(cs) | B::Xor(cs) | B::And(cs) => cs.iter().map(B::max_var).max().unwrap_or(0),
        }
    }

    /// Truth value; bit `i-1` of `a` is `x_i`.
    pub fn eval(&self, a: u64) -> bool {
        match self {
            B::Var(i) => (a >> (i - 1)) & 1 == 1,
            B::Not(x) => !x.eval(a),
            B::Or(cs) => cs.iter().any(|c| c.eval(a)),
            B::And(cs) => cs.iter().all(|c| c.eval(a)),
            B::Xor(cs) => cs.iter().filter(|c| c.eval(a)).count() % 2 == 0,
        }
    }
}

impl fmt::Display for BoolFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, head: &str, cs: &[BoolFormula]| {
            write!(f, "({head}")?;
            for c in cs {
                write!(f, " {c}")?;
            }
            write!(f, ")")
        };
        match self {
            B::Var(i) => write!(f, "x{i}"),
            B::Not(a) => write!(f, "(not {a})"),
            B::Or(cs) => list(f, "or", cs),
            B::Xor(cs) => list(f, "xor", cs),
            B::And(cs) => list(f, "and", cs),
        }
    }
}

/// The clause `κ` as a formula: a bare literal for unit clauses, otherwise
/// the disjunction of its literals in order.
pub fn clause_formula(clause: &[i32]) -> BoolFormula {
    match clause {
        [l] => B::literal(*l),
        _ => B::Or(clause.iter().map(|&l| B::literal(l)).collect()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Justification of a cedent. Premises are 0-based cedent positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// `A -> A`
    Identity,
    /// `(or) ->`
    FalseOr,
    /// `-> (xor)`
    XorEmpty,
    /// `-> κ_i` (1-based clause index)
    Clause(usize),
    Weaken(usize, Side, BoolFormula),
    /// From `-> A, Γ` and `-> ¬A, Γ` infer `-> Γ`.
    Cut(usize, usize, BoolFormula),
    NegL(usize),
    NegR(usize),
    OrL(usize, usize),
    OrR(usize),
    XorL(usize, usize),
    XorR(usize, usize),
}

impl Rule {
    fn premises(&self) -> Vec<usize> {
        match self {
            Rule::Identity | Rule::FalseOr | Rule::XorEmpty | Rule::Clause(_) => vec![],
            Rule::Weaken(p, ..) | Rule::NegL(p) | Rule::NegR(p) | Rule::OrR(p) => vec![*p],
            Rule::Cut(a, b, _) | Rule::OrL(a, b) | Rule::XorL(a, b) | Rule::XorR(a, b) => vec![*a, *b],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cedent {
    pub ants: Vec<BoolFormula>,
    pub sucs: Vec<BoolFormula>,
    pub by: Rule,
}

impl Cedent {
    pub fn new(ants: Vec<BoolFormula>, sucs: Vec<BoolFormula>, by: Rule) -> Self {
        Cedent { ants, sucs, by }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FregeRefutation {
    pub cnf: CnfFormula,
    pub cedents: Vec<Cedent>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FregeReport {
    /// Maximum formula depth over all cedents.
    pub depth: u32,
    pub cedents: usize,
}

/// The principal formula's first argument, where compilation needs it.
#[derive(Debug, Clone)]
enum Step {
    Pass,
    Identity(BoolFormula),
    Weaken(Side, BoolFormula),
    OrL(BoolFormula),
}

fn sorted(v: &[BoolFormula]) -> Vec<BoolFormula> {
    let mut v = v.to_vec();
    v.sort();
    v
}

/// `a == b + extra` as multisets.
fn plus(a: &[BoolFormula], b: &[BoolFormula], extra: &[BoolFormula]) -> bool {
    let mut rhs = b.to_vec();
    rhs.extend_from_slice(extra);
    sorted(a) == sorted(&rhs)
}

fn without(v: &[BoolFormula], k: usize) -> Vec<BoolFormula> {
    let mut v = v.to_vec();
    v.remove(k);
    v
}

fn same(a: &[BoolFormula], b: &[BoolFormula]) -> bool {
    sorted(a) == sorted(b)
}

fn check_step(cnf: &CnfFormula, cs: &[Cedent], k: usize) -> Result<Step, String> {
    let c = &cs[k];
    let (ga, gs) = (&c.ants, &c.sucs);
    let prem = |p: &usize| &cs[*p];
    let fail = |s: &str| Err(s.to_string());
    match &c.by {
        Rule::Identity => match (ga.as_slice(), gs.as_slice()) {
            ([a], [b]) if a == b => Ok(Step::Identity(a.clone())),
            _ => fail("identity axiom must be A -> A"),
        },
        Rule::FalseOr => {
            if ga == &[B::Or(vec![])] && gs.is_empty() {
                Ok(Step::Pass)
            } else {
                fail("axiom must be (or) ->")
            }
        }
        Rule::XorEmpty => {
            if ga.is_empty() && gs == &[B::Xor(vec![])] {
                Ok(Step::Pass)
            } else {
                fail("axiom must be -> (xor)")
            }
        }
        Rule::Clause(i) => {
            let Some(cl) = i.checked_sub(1).and_then(|j| cnf.clauses.get(j)) else {
                return fail("clause index out of range");
            };
            if ga.is_empty() && gs == &[clause_formula(cl)] {
                Ok(Step::Pass)
            } else {
                fail("initial cedent must be -> clause")
            }
        }
        Rule::Weaken(p, side, a) => {
            let p = prem(p);
            let ok = match side {
                Side::Left => plus(ga, &p.ants, std::slice::from_ref(a)) && same(gs, &p.sucs),
                Side::Right => same(ga, &p.ants) && plus(gs, &p.sucs, std::slice::from_ref(a)),
            };
            if ok {
                Ok(Step::Weaken(*side, a.clone()))
            } else {
                fail("weakening does not match its premise")
            }
        }
        Rule::Cut(p1, p2, a) => {
            let (p1, p2) = (prem(p1), prem(p2));
            let ok = ga.is_empty()
                && p1.ants.is_empty()
                && p2.ants.is_empty()
                && plus(&p1.sucs, gs, std::slice::from_ref(a))
                && plus(&p2.sucs, gs, &[B::not(a.clone())]);
            if ok {
                Ok(Step::Pass)
            } else {
                fail("cut needs -> A, Γ and -> ¬A, Γ with conclusion -> Γ")
            }
        }
        Rule::NegR(p) => {
            let p = prem(p);
            for (j, f) in gs.iter().enumerate() {
                if let B::Not(a) = f {
                    if same(&p.sucs, &without(gs, j)) && plus(&p.ants, ga, &[(**a).clone()]) {
                        return Ok(Step::Pass);
                    }
                }
            }
            fail("no negation on the right matches the premise")
        }
        Rule::NegL(p) => {
            let p = prem(p);
            for (j, f) in ga.iter().enumerate() {
                if let B::Not(a) = f {
                    if same(&p.ants, &without(ga, j)) && plus(&p.sucs, gs, &[(**a).clone()]) {
                        return Ok(Step::Pass);
                    }
                }
            }
            fail("no negation on the left matches the premise")
        }
        Rule::OrL(p1, p2) => {
            let (p1, p2) = (prem(p1), prem(p2));
            for (j, f) in ga.iter().enumerate() {
                if let B::Or(xs) = f {
                    let Some((a1, rest)) = xs.split_first() else { continue };
                    let g = without(ga, j);
                    if plus(&p1.ants, &g, std::slice::from_ref(a1))
                        && plus(&p2.ants, &g, &[B::Or(rest.to_vec())])
                        && same(&p1.sucs, gs)
                        && same(&p2.sucs, gs)
                    {
                        return Ok(Step::OrL(a1.clone()));
                    }
                }
            }
            fail("no disjunction on the left matches the premises")
        }
        Rule::OrR(p) => {
            let p = prem(p);
            for (j, f) in gs.iter().enumerate() {
                if let B::Or(xs) = f {
                    let Some((a1, rest)) = xs.split_first() else { continue };
                    if same(&p.ants, ga) && plus(&p.sucs, &without(gs, j), &[a1.clone(), B::Or(rest.to_vec())]) {
                        return Ok(Step::Pass);
                    }
                }
            }
            fail("no disjunction on the right matches the premise")
        }
        Rule::XorL(p1, p2) => {
            let (p1, p2) = (prem(p1), prem(p2));
            for (j, f) in ga.iter().enumerate() {
                if let B::Xor(xs) = f {
                    let Some((a1, rest)) = xs.split_first() else { continue };
                    let g = without(ga, j);
                    let r = B::Xor(rest.to_vec());
                    if plus(&p1.ants, &g, &[a1.clone(), B::not(r.clone())])
                        && same(&p1.sucs, gs)
                        && plus(&p2.ants, &g, &[r])
                        && plus(&p2.sucs, gs, std::slice::from_ref(a1))
                    {
                        return Ok(Step::Pass);
                    }
                }
            }
            fail("no parity on the left matches the premises")
        }
        Rule::XorR(p1, p2) => {
            let (p1, p2) = (prem(p1), prem(p2));
            for (j, f) in gs.iter().enumerate() {
                if let B::Xor(xs) = f {
                    let Some((a1, rest)) = xs.split_first() else { continue };
                    let d = without(gs, j);
                    let r = B::Xor(rest.to_vec());
                    if plus(&p1.ants, ga, std::slice::from_ref(a1))
                        && plus(&p1.sucs, &d, &[B::not(r.clone())])
                        && same(&p2.ants, ga)
                        && plus(&p2.sucs, &d, &[a1.clone(), r])
                    {
                        return Ok(Step::Pass);
                    }
                }
            }
            fail("no parity on the right matches the premises")
        }
    }
}

fn check_steps(r: &FregeRefutation, upto: usize) -> Result<(Vec<Step>, u32), FregeError> {
    let mut used = vec![false; upto];
    let mut steps = Vec::with_capacity(upto);
    let mut depth = 0;
    for k in 0..upto {
        let c = &r.cedents[k];
        for p in c.by.premises() {
            if p >= k {
                return Err(FregeError::RuleMismatch {
                    cedent: k + 1,
                    reason: format!("premise {} is not earlier", p + 1),
                });
            }
            if std::mem::replace(&mut used[p], true) {
                return Err(FregeError::NotTreeLike { cedent: k + 1, premise: p + 1 });
            }
        }
        for f in c.ants.iter().chain(&c.sucs) {
            if f.max_var() > r.cnf.n_vars {
                return Err(FregeError::RuleMismatch {
                    cedent: k + 1,
                    reason: format!("{f} uses an unknown variable"),
                });
            }
            depth = depth.max(f.depth());
        }
        steps.push(
            check_step(&r.cnf, &r.cedents, k).map_err(|reason| FregeError::RuleMismatch { cedent: k + 1, reason })?,
        );
    }
    Ok((steps, depth))
}

/// Structural check of every rule application; the last cedent must be empty.
pub fn check_frege(r: &FregeRefutation) -> Result<FregeReport, FregeError> {
    let (_, depth) = check_steps(r, r.cedents.len())?;
    match r.cedents.last() {
        Some(c) if c.ants.is_empty() && c.sucs.is_empty() => Ok(FregeReport { depth, cedents: r.cedents.len() }),
        _ => Err(FregeError::NotRefutation),
    }
}

fn f2() -> Domain {
    Domain::Prime(Prime::new(2).expect("2 is prime"))
}

/// `t(A)` added to `c`: `t(x) = 1 - x`, `t(¬A) = 1 - t(A)`, `t(or A) = prod t(A_i)`,
/// `t(xor A) = n - sum t(A_i)`, `t(and A) = 1 - prod (1 - t(A_i))`.
pub fn translate_into(c: &mut Circuit, a: &BoolFormula) -> NodeId {
    match a {
        B::Var(i) => {
            let x = c.x(*i);
            c.one_minus(x)
        }
        B::Not(b) => {
            let t = translate_into(c, b);
            c.one_minus(t)
        }
        B::Or(cs) => {
            let ts: Vec<_> = cs.iter().map(|b| translate_into(c, b)).collect();
            match ts.len() {
                0 => c.constant(1),
                1 => ts[0],
                _ => c.mul(ts),
            }
        }
        B::Xor(cs) => {
            let n = c.constant(cs.len() as i64);
            let mut terms = vec![(1, n)];
            terms.extend(cs.iter().map(|b| (-1, translate_into(c, b))));
            c.lin(terms)
        }
        B::And(cs) => {
            let ts: Vec<_> = cs
                .iter()
                .map(|b| {
                    let t = translate_into(c, b);
                    c.one_minus(t)
                })
                .collect();
            let p = match ts.len() {
                0 => c.constant(1),
                1 => ts[0],
                _ => c.mul(ts),
            };
            c.one_minus(p)
        }
    }
}

/// `t(A)` as a circuit over `F_2`.
pub fn translate_formula(a: &BoolFormula) -> Circuit {
    let mut c = Circuit::build(|c| translate_into(c, a));
    c.set_domain(f2());
    c
}

/// `t(Γ -> Δ) = prod (1 - t(Γ_i)) * prod t(Δ_j)`.
pub fn translate_cedent(ants: &[BoolFormula], sucs: &[BoolFormula]) -> Circuit {
    let mut c = Circuit::build(|c| {
        let mut fs = Vec::new();
        for a in ants {
            let t = translate_into(c, a);
            fs.push(c.one_minus(t));
        }
        for b in sucs {
            fs.push(translate_into(c, b));
        }
        match fs.len() {
            0 => c.constant(1),
            1 => fs[0],
            _ => c.mul(fs),
        }
    });
    c.set_domain(f2());
    c
}

/// `coef * prod factors * f_index`
#[derive(Debug, Clone)]
struct Term {
    coef: i64,
    factors: Vec<NodeId>,
    f: u32,
}

struct Compiler<'a> {
    c: Circuit,
    m: u32,
    cache: HashMap<&'a BoolFormula, NodeId>,
}

impl<'a> Compiler<'a> {
    fn t(&mut self, a: &'a BoolFormula) -> NodeId {
        if let Some(&id) = self.cache.get(a) {
            return id;
        }
        let id = translate_into(&mut self.c, a);
        self.cache.insert(a, id);
        id
    }

    /// Terms deriving `t(A)(1 - t(A))` from the Boolean axioms, mod 2.
    fn identity(&mut self, a: &'a BoolFormula) -> Vec<Term> {
        match a {
            B::Var(j) => vec![Term { coef: -1, factors: vec![], f: self.m + j }],
            B::Not(b) => self.identity(b),
            B::Xor(cs) => cs.iter().flat_map(|b| self.identity(b)).collect(),
            B::And(cs) => cs.iter().flat_map(|b| self.identity(b)).collect(),
            B::Or(cs) => {
                // P - P^2 = sum_i (prod_{j<i} u_j^2) (u_i - u_i^2) (prod_{j>i} u_j)
                let us: Vec<NodeId> = cs.iter().map(|b| self.t(b)).collect();
                let mut out = Vec::new();
                for (i, b) in cs.iter().enumerate() {
                    let mut extra: Vec<NodeId> = us[..i].iter().flat_map(|&u| [u, u]).collect();
                    extra.extend_from_slice(&us[i + 1..]);
                    for mut term in self.identity(b) {
                        term.factors.extend_from_slice(&extra);
                        out.push(term);
                    }
                }
                out
            }
        }
    }

    fn finish(mut self, terms: &[Term]) -> Circuit {
        let mut sum = Vec::with_capacity(terms.len());
        for t in terms {
            let f = self.c.f(t.f);
            let g = if t.factors.is_empty() {
                f
            } else {
                let mut fs = t.factors.clone();
                fs.push(f);
                self.c.mul(fs)
            };
            sum.push((t.coef, g));
        }
        let out = if sum.is_empty() { self.c.constant(0) } else { self.c.lin(sum) };
        self.c.set_outputs(vec![out]);
        crate::circuit::prune(&self.c)
    }
}

fn compile_upto(r: &FregeRefutation, k: usize) -> Result<Circuit, FregeError> {
    let (steps, _) = check_steps(r, k + 1)?;
    let m = r.cnf.clauses.len() as u32;
    let mut comp = Compiler { c: Circuit::with_vars(r.cnf.n_vars, m + r.cnf.n_vars), m, cache: HashMap::new() };
    comp.c.set_domain(f2());
    let mut lists: Vec<Option<Vec<Term>>> = Vec::with_capacity(k + 1);
    for (j, step) in steps.iter().enumerate() {
        let mut take = |p: usize| lists[p].take().expect("tree-like premise");
        let terms = match (&r.cedents[j].by, step) {
            (Rule::Clause(i), _) => vec![Term { coef: 1, factors: vec![], f: *i as u32 }],
            (Rule::Identity, Step::Identity(a)) => comp.identity(a),
            (Rule::FalseOr | Rule::XorEmpty, _) => vec![],
            (Rule::Weaken(p, ..), Step::Weaken(side, a)) => {
                let mut ts = take(*p);
                let t = comp.t(a);
                let g = match side {
                    Side::Right => t,
                    Side::Left => comp.c.one_minus(t),
                };
                for term in &mut ts {
                    term.factors.push(g);
                }
                ts
            }
            (Rule::Cut(a, b, _) | Rule::XorR(a, b), _) => {
                let mut ts = take(*a);
                ts.extend(take(*b));
                ts
            }
            (Rule::NegL(p) | Rule::NegR(p) | Rule::OrR(p), _) => take(*p),
            (Rule::OrL(a, b), Step::OrL(a1)) => {
                let mut ts = take(*a);
                let mut second = take(*b);
                let t = comp.t(a1);
                for term in &mut second {
                    term.factors.push(t);
                }
                ts.extend(second);
                ts
            }
            (Rule::XorL(a, b), _) => {
                let first = take(*a);
                let mut ts = take(*b);
                ts.extend(first.into_iter().map(|t| Term { coef: -t.coef, ..t }));
                ts
            }
            _ => unreachable!("step kind matches its rule"),
        };
        lists.push(Some(terms));
    }
    let terms = lists[k].take().expect("last cedent is unused");
    Ok(comp.finish(&terms))
}

/// Hilbert-like certificate over `f_1..f_m` (clauses) and
/// `f_{m+1}..f_{m+n}` (Boolean axioms), refuting the CNF over `F_2`.
pub fn compile_frege_to_ips(r: &FregeRefutation) -> Result<Certificate, FregeError> {
    check_frege(r)?;
    Ok(Certificate::refutation(compile_upto(r, r.cedents.len() - 1)?))
}

/// Derivation of `t(cedent k)` (0-based) built from the proof prefix.
pub fn cedent_derivation(r: &FregeRefutation, k: usize) -> Result<Certificate, FregeError> {
    let circ = compile_upto(r, k)?;
    let c = &r.cedents[k];
    Ok(Certificate::derivation(circ, translate_cedent(&c.ants, &c.sucs)))
}

fn syntax(msg: impl Into<String>) -> FregeError {
    FregeError::Syntax(msg.into())
}

fn items(v: &Value) -> Option<Vec<&Value>> {
    if v.is_null() || v.is_nil() {
        return Some(vec![]);
    }
    let it = v.list_iter()?;
    Some(it.collect())
}

pub fn parse_formula_value(v: &Value) -> Result<BoolFormula, FregeError> {
    if let Some(s) = v.as_symbol() {
        return s
            .strip_prefix('x')
            .and_then(|d| d.parse::<u32>().ok())
            .filter(|&i| i > 0)
            .map(B::Var)
            .ok_or_else(|| syntax(format!("bad atom `{s}`")));
    }
    let xs = items(v).ok_or_else(|| syntax(format!("bad formula `{v}`")))?;
    let (head, args) = xs.split_first().ok_or_else(|| syntax("empty formula"))?;
    let args = args.iter().map(|a| parse_formula_value(a)).collect::<Result<Vec<_>, _>>()?;
    match head.as_symbol() {
        Some("not") if args.len() == 1 => Ok(B::not(args.into_iter().next().unwrap())),
        Some("or") => Ok(B::Or(args)),
        Some("xor") => Ok(B::Xor(args)),
        Some("and") => Ok(B::And(args)),
        _ => Err(syntax(format!("bad connective in `{v}`"))),
    }
}

pub fn parse_formula(s: &str) -> Result<BoolFormula, FregeError> {
    parse_formula_value(&lexpr::from_str(s).map_err(|e| syntax(e.to_string()))?)
}

fn parse_rule(v: &Value) -> Result<Rule, FregeError> {
    let xs = items(v).ok_or_else(|| syntax("bad justification"))?;
    let [by, name, args @ ..] = xs.as_slice() else { return Err(syntax("bad justification")) };
    if by.as_symbol() != Some("by") {
        return Err(syntax("expected (by ...)"));
    }
    let num = |k: usize| -> Result<usize, FregeError> {
        args.get(k)
            .and_then(|a| a.as_u64())
            .filter(|&n| n >= 1)
            .map(|n| n as usize - 1)
            .ok_or_else(|| syntax(format!("bad argument {} of `{v}`", k + 1)))
    };
    let form = |k: usize| args.get(k).ok_or_else(|| syntax("missing formula")).and_then(|a| parse_formula_value(a));
    let arity = |n: usize| if args.len() == n { Ok(()) } else { Err(syntax(format!("`{v}` expects {n} arguments"))) };
    let name = name.as_symbol().ok_or_else(|| syntax("bad rule name"))?;
    let rule = match name {
        "identity" => arity(0).map(|_| Rule::Identity)?,
        "false-or" => arity(0).map(|_| Rule::FalseOr)?,
        "xor-empty" => arity(0).map(|_| Rule::XorEmpty)?,
        "clause" => {
            arity(1)?;
            Rule::Clause(num(0)? + 1)
        }
        "weaken" => {
            arity(3)?;
            let side = match args[1].as_symbol() {
                Some("left") => Side::Left,
                Some("right") => Side::Right,
                _ => return Err(syntax("weakening side must be left or right")),
            };
            Rule::Weaken(num(0)?, side, form(2)?)
        }
        "cut" => {
            arity(3)?;
            Rule::Cut(num(0)?, num(1)?, form(2)?)
        }
        "negl" | "negr" | "orr" => {
            arity(1)?;
            let p = num(0)?;
            match name {
                "negl" => Rule::NegL(p),
                "negr" => Rule::NegR(p),
                _ => Rule::OrR(p),
            }
        }
        "orl" | "xorl" | "xorr" => {
            arity(2)?;
            let (a, b) = (num(0)?, num(1)?);
            match name {
                "orl" => Rule::OrL(a, b),
                "xorl" => Rule::XorL(a, b),
                _ => Rule::XorR(a, b),
            }
        }
        other => return Err(syntax(format!("unknown rule `{other}`"))),
    };
    Ok(rule)
}

fn parse_side(v: &Value, tag: &str) -> Result<Vec<BoolFormula>, FregeError> {
    let xs = items(v).ok_or_else(|| syntax(format!("expected ({tag} ...)")))?;
    match xs.split_first() {
        Some((h, fs)) if h.as_symbol() == Some(tag) => fs.iter().map(|f| parse_formula_value(f)).collect(),
        _ => Err(syntax(format!("expected ({tag} ...)"))),
    }
}

/// A parsed proof file; the CNF is referenced by path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FregeFile {
    pub cnf_path: Option<String>,
    pub cedents: Vec<Cedent>,
}

pub fn parse_frege(text: &str) -> Result<FregeFile, FregeError> {
    let mut header = false;
    let mut cnf_path = None;
    let mut body = String::new();
    for line in text.lines() {
        let t = line.split(';').next().unwrap_or("").trim();
        if t.is_empty() {
            continue;
        }
        if !body.is_empty() || t.starts_with('(') {
            body.push_str(line);
            body.push('\n');
            continue;
        }
        let toks: Vec<&str> = t.split_whitespace().collect();
        match toks.as_slice() {
            ["fregeproof", "v1"] => header = true,
            ["cnf", p] if header => cnf_path = Some(p.to_string()),
            ["modp", p] if header => {
                let p: u64 = p.parse().map_err(|_| syntax("bad modulus"))?;
                if p != 2 {
                    return Err(FregeError::UnsupportedModulus(p));
                }
            }
            _ => return Err(syntax(format!("unexpected header line `{t}`"))),
        }
    }
    if !header {
        return Err(syntax("missing header `fregeproof v1`"));
    }
    let all = lexpr::from_str(&format!("({body})")).map_err(|e| syntax(e.to_string()))?;
    let mut cedents = Vec::new();
    for v in items(&all).ok_or_else(|| syntax("bad body"))? {
        let xs = items(v).ok_or_else(|| syntax("expected (cedent ...)"))?;
        let [head, ants, sucs, by] = xs.as_slice() else { return Err(syntax(format!("bad cedent `{v}`"))) };
        if head.as_symbol() != Some("cedent") {
            return Err(syntax("expected (cedent ...)"));
        }
        cedents.push(Cedent::new(parse_side(ants, "ants")?, parse_side(sucs, "sucs")?, parse_rule(by)?));
    }
    Ok(FregeFile { cnf_path, cedents })
}

fn rule_text(r: &Rule) -> String {
    match r {
        Rule::Identity => "(by identity)".into(),
        Rule::FalseOr => "(by false-or)".into(),
        Rule::XorEmpty => "(by xor-empty)".into(),
        Rule::Clause(i) => format!("(by clause {i})"),
        Rule::Weaken(p, s, a) => {
            format!("(by weaken {} {} {a})", p + 1, if *s == Side::Left { "left" } else { "right" })
        }
        Rule::Cut(a, b, f) => format!("(by cut {} {} {f})", a + 1, b + 1),
        Rule::NegL(p) => format!("(by negl {})", p + 1),
        Rule::NegR(p) => format!("(by negr {})", p + 1),
        Rule::OrR(p) => format!("(by orr {})", p + 1),
        Rule::OrL(a, b) => format!("(by orl {} {})", a + 1, b + 1),
        Rule::XorL(a, b) => format!("(by xorl {} {})", a + 1, b + 1),
        Rule::XorR(a, b) => format!("(by xorr {} {})", a + 1, b + 1),
    }
}

pub fn write_frege(cnf_path: Option<&str>, cedents: &[Cedent]) -> String {
    let mut s = String::from("fregeproof v1\n");
    if let Some(p) = cnf_path {
        s.push_str(&format!("cnf {p}\n"));
    }
    s.push_str("modp 2\n");
    let join = |fs: &[BoolFormula]| fs.iter().map(|f| format!(" {f}")).collect::<String>();
    for c in cedents {
        s.push_str(&format!("(cedent (ants{}) (sucs{}) {})\n", join(&c.ants), join(&c.sucs), rule_text(&c.by)));
    }
    s
}

/// Builds tree-like refutations by appending cedents.
#[derive(Debug, Default)]
struct Builder {
    cs: Vec<Cedent>,
}

impl Builder {
    fn push(&mut self, ants: Vec<BoolFormula>, sucs: Vec<BoolFormula>, by: Rule) -> usize {
        self.cs.push(Cedent::new(ants, sucs, by));
        self.cs.len() - 1
    }

    fn weaken(&mut self, p: usize, side: Side, a: BoolFormula) -> usize {
        let (mut ants, mut sucs) = (self.cs[p].ants.clone(), self.cs[p].sucs.clone());
        match side {
            Side::Left => ants.push(a.clone()),
            Side::Right => sucs.push(a.clone()),
        }
        self.push(ants, sucs, Rule::Weaken(p, side, a))
    }

    fn weaken_all(&mut self, mut p: usize, side: Side, fs: &[BoolFormula]) -> usize {
        for f in fs {
            p = self.weaken(p, side, f.clone());
        }
        p
    }

    /// `-> l_1, ..., l_k` from the clause cedent `-> κ_i`.
    fn unpack_clause(&mut self, cnf: &CnfFormula, i: usize) -> usize {
        let cl = &cnf.clauses[i];
        let lits: Vec<BoolFormula> = cl.iter().map(|&l| B::literal(l)).collect();
        let kappa = clause_formula(cl);
        let init = self.push(vec![], vec![kappa.clone()], Rule::Clause(i + 1));
        if cl.len() == 1 {
            return init;
        }
        // or(l_j, ..., l_k) -> lits, by Or-Left down the list.
        let mut below: Option<usize> = None;
        for j in (0..=lits.len()).rev() {
            let rest = B::Or(lits[j..].to_vec());
            let proof = if j == lits.len() {
                let ax = self.push(vec![rest.clone()], vec![], Rule::FalseOr);
                self.weaken_all(ax, Side::Right, &lits)
            } else {
                let ax = self.push(vec![lits[j].clone()], vec![lits[j].clone()], Rule::Identity);
                let others: Vec<_> = lits.iter().enumerate().filter(|&(t, _)| t != j).map(|(_, l)| l.clone()).collect();
                let left = self.weaken_all(ax, Side::Right, &others);
                self.push(vec![rest.clone()], lits.clone(), Rule::OrL(left, below.expect("tail proved first")))
            };
            below = Some(proof);
        }
        let neg = self.push(vec![], [vec![B::not(kappa.clone())], lits.clone()].concat(), Rule::NegR(below.unwrap()));
        let pos = self.weaken_all(init, Side::Right, &lits);
        self.push(vec![], lits, Rule::Cut(pos, neg, kappa))
    }

    /// Tree-like resolution by splitting on variables in order. Returns a
    /// cedent `-> Λ` whose literals are all false under `rho`.
    fn dpll(&mut self, cnf: &CnfFormula, rho: &mut Vec<(u32, bool)>) -> usize {
        let falsified = cnf
            .clauses
            .iter()
            .position(|cl| cl.iter().all(|&l| rho.iter().any(|&(v, b)| v == l.unsigned_abs() && b != (l > 0))));
        if let Some(i) = falsified {
            return self.unpack_clause(cnf, i);
        }
        let x = rho.len() as u32 + 1;
        assert!(x <= cnf.n_vars, "formula is satisfiable");
        let pos = B::Var(x);
        let neg = B::not(B::Var(x));
        rho.push((x, false));
        let p0 = self.dpll(cnf, rho);
        rho.pop();
        if !self.cs[p0].sucs.contains(&pos) {
            return p0;
        }
        rho.push((x, true));
        let p1 = self.dpll(cnf, rho);
        rho.pop();
        if !self.cs[p1].sucs.contains(&neg) {
            return p1;
        }
        let mut gamma: Vec<BoolFormula> = Vec::new();
        for f in self.cs[p0].sucs.iter().chain(&self.cs[p1].sucs) {
            if *f != pos && *f != neg && !gamma.contains(f) {
                gamma.push(f.clone());
            }
        }
        let need = |have: &[BoolFormula]| gamma.iter().filter(|g| !have.contains(g)).cloned().collect::<Vec<_>>();
        let add0 = need(&self.cs[p0].sucs);
        let add1 = need(&self.cs[p1].sucs);
        let a = self.weaken_all(p0, Side::Right, &add0);
        let b = self.weaken_all(p1, Side::Right, &add1);
        self.push(vec![], gamma, Rule::Cut(a, b, pos))
    }
}

/// A formula of depth `d` over `x_1..x_n` mixing parity and disjunction.
pub fn gadget_formula(d: u32, n: u32) -> BoolFormula {
    let v = |i: u32| B::Var((i % n.max(1)) + 1);
    let mut a = v(0);
    for k in 1..=d {
        a = if k % 2 == 1 { B::Xor(vec![a, v(k)]) } else { B::Or(vec![a, B::not(v(k))]) };
    }
    a
}

/// Tree-like refutation of an unsatisfiable CNF (`n <= 12`) with formulas
/// of depth exactly `d >= 1`: a resolution-style refutation, repeated
/// twice around a cut on `or(¬A, A)` for a depth-`(d-1)` formula `A`.
pub fn refutation_family(cnf: &CnfFormula, d: u32) -> FregeRefutation {
    assert!(d >= 1 && cnf.n_vars <= 12);
    let mut b = Builder::default();
    let a = gadget_formula(d - 1, cnf.n_vars);
    let na = B::not(a.clone());
    let t = B::Or(vec![na.clone(), a.clone()]);
    // -> or(¬A, A)
    let id = b.push(vec![a.clone()], vec![a.clone()], Rule::Identity);
    let s1 = b.push(vec![], vec![na.clone(), a.clone()], Rule::NegR(id));
    let s2 = b.weaken(s1, Side::Right, B::Or(vec![]));
    let s3 = b.push(vec![], vec![na.clone(), B::Or(vec![a.clone()])], Rule::OrR(s2));
    let proved = b.push(vec![], vec![t.clone()], Rule::OrR(s3));
    // or(¬A, A) -> from two copies of the refutation.
    let r1 = b.dpll(cnf, &mut vec![]);
    let l1 = b.weaken(r1, Side::Left, na);
    let r2 = b.dpll(cnf, &mut vec![]);
    let l2 = b.weaken(r2, Side::Left, B::Or(vec![a]));
    let tl = b.push(vec![t.clone()], vec![], Rule::OrL(l1, l2));
    let nt = b.push(vec![], vec![B::not(t.clone())], Rule::NegR(tl));
    b.push(vec![], vec![], Rule::Cut(proved, nt, t));
    FregeRefutation { cnf: cnf.clone(), cedents: b.cs }
}

/// Plain cut-and-resolution refutation (depth 1 unless all clauses are units).
pub fn resolution_refutation(cnf: &CnfFormula) -> FregeRefutation {
    let mut b = Builder::default();
    b.dpll(cnf, &mut vec![]);
    FregeRefutation { cnf: cnf.clone(), cedents: b.cs }
}
