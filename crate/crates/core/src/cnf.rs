//! DIMACS CNF input and translation of CNFs into polynomial systems.
//!
//! A positive literal `x_i` becomes `1 - x_i`, a negative literal becomes
//! `x_i`, and a clause becomes the product over its literals, so a 0/1 point
//! satisfies a clause exactly when the clause polynomial vanishes there.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::circuit::{parse_circuit, write_circuit, Circuit, FormatError, VarId};
use crate::field::Prime;
use crate::poly::{expand_circuit, Caps, Poly, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("line {0}: malformed or missing `p cnf <n> <m>` header")]
    MalformedHeader(usize),
    #[error("line {line}: literal {lit} out of range for {n} variables")]
    LiteralOutOfRange { line: usize, lit: i64, n: u32 },
    #[error("last clause is not terminated by 0")]
    UnterminatedClause,
    #[error("header declares {declared} clauses, found {found}")]
    CountMismatch { declared: usize, found: usize },
    #[error("line {0}: unexpected token {1:?}")]
    BadToken(usize, String),
    #[error("{0} variables exceed the enumeration limit of {1}")]
    CubeTooLarge(u32, u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CnfFormula {
    pub n_vars: u32,
    pub clauses: Vec<Vec<i32>>,
}

/// Largest variable count handled by exhaustive enumeration.
pub const MAX_ENUM_VARS: u32 = 24;

impl CnfFormula {
    pub fn new(n_vars: u32, clauses: Vec<Vec<i32>>) -> Self {
        for cl in &clauses {
            for &l in cl {
                assert!(l != 0 && l.unsigned_abs() <= n_vars, "literal {l} out of range");
            }
        }
        CnfFormula { n_vars, clauses }
    }

    /// Assignment bit `i-1` of `a` is the value of `x_i`.
    pub fn clause_satisfied(clause: &[i32], a: u64) -> bool {
        clause.iter().any(|&l| ((a >> (l.unsigned_abs() - 1)) & 1 == 1) == (l > 0))
    }

    pub fn first_falsified(&self, a: u64) -> Option<usize> {
        self.clauses.iter().position(|cl| !Self::clause_satisfied(cl, a))
    }

    /// For each block of 64 consecutive assignments starting at `base`
    /// (a multiple of 64), the mask of assignments satisfying `clause`.
    fn clause_mask(clause: &[i32], base: u64) -> u64 {
        const LOW: [u64; 6] = [
            0xAAAA_AAAA_AAAA_AAAA,
            0xCCCC_CCCC_CCCC_CCCC,
            0xF0F0_F0F0_F0F0_F0F0,
            0xFF00_FF00_FF00_FF00,
            0xFFFF_0000_FFFF_0000,
            0xFFFF_FFFF_0000_0000,
        ];
        let mut m = 0u64;
        for &l in clause {
            let i = l.unsigned_abs() - 1;
            let ones = if i < 6 {
                LOW[i as usize]
            } else if (base >> i) & 1 == 1 {
                !0
            } else {
                0
            };
            m |= if l > 0 { ones } else { !ones };
        }
        m
    }

    fn check_enum(&self) -> Result<(), CnfError> {
        if self.n_vars > MAX_ENUM_VARS {
            return Err(CnfError::CubeTooLarge(self.n_vars, MAX_ENUM_VARS));
        }
        Ok(())
    }

    /// Some satisfying assignment, by exhaustive bit-sliced enumeration.
    pub fn find_satisfying(&self) -> Result<Option<u64>, CnfError> {
        self.check_enum()?;
        let total = 1u64 << self.n_vars;
        let valid = if total < 64 { (1u64 << total) - 1 } else { !0 };
        let mut base = 0;
        while base < total {
            let mut sat = valid;
            for cl in &self.clauses {
                sat &= Self::clause_mask(cl, base);
                if sat == 0 {
                    break;
                }
            }
            if sat != 0 {
                return Ok(Some(base + sat.trailing_zeros() as u64));
            }
            base += 64;
        }
        Ok(None)
    }

    pub fn is_satisfiable(&self) -> Result<bool, CnfError> {
        Ok(self.find_satisfying()?.is_some())
    }

    pub fn max_width(&self) -> usize {
        self.clauses.iter().map(Vec::len).max().unwrap_or(0)
    }
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula, CnfError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut cur: Vec<i32> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
            continue;
        }
        if t.starts_with('p') {
            let toks: Vec<&str> = t.split_whitespace().collect();
            let parsed = match toks.as_slice() {
                ["p", "cnf", n, m] if header.is_none() => n.parse().ok().zip(m.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or(CnfError::MalformedHeader(line))?);
            continue;
        }
        let (n, _) = header.ok_or(CnfError::MalformedHeader(line))?;
        for tok in t.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| CnfError::BadToken(line, tok.to_string()))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut cur));
            } else if lit.unsigned_abs() > n as u64 {
                return Err(CnfError::LiteralOutOfRange { line, lit, n });
            } else {
                cur.push(lit as i32);
            }
        }
    }
    let (n, m) = header.ok_or(CnfError::MalformedHeader(0))?;
    if !cur.is_empty() {
        return Err(CnfError::UnterminatedClause);
    }
    if clauses.len() != m {
        return Err(CnfError::CountMismatch { declared: m, found: clauses.len() });
    }
    Ok(CnfFormula { n_vars: n, clauses })
}

pub fn write_dimacs(cnf: &CnfFormula) -> String {
    let mut s = format!("p cnf {} {}\n", cnf.n_vars, cnf.clauses.len());
    for cl in &cnf.clauses {
        for l in cl {
            write!(s, "{l} ").unwrap();
        }
        s.push_str("0\n");
    }
    s
}

/// Where an equation of a system came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// 1-based clause index.
    Clause(usize),
    /// `x_i^2 - x_i`.
    BooleanAxiom(u32),
    User,
}

#[derive(Debug, Error)]
pub enum SystemError {
    #[error("line {0}: {1}")]
    Syntax(usize, String),
    #[error("equation {0}: {1}")]
    Circuit(usize, FormatError),
    #[error("equation {0} is not a division-free circuit over x-variables")]
    BadEquation(usize),
}

/// Equations `F_1 = ... = F_m = 0`, each a division-free single-output
/// circuit over x-variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    pub n_vars: u32,
    pub equations: Vec<Circuit>,
    pub provenance: Vec<Provenance>,
    pub boolean_axioms_included: bool,
}

impl PolySystem {
    pub fn from_circuits(equations: Vec<Circuit>) -> Self {
        let n_vars = equations.iter().map(Circuit::xvars).max().unwrap_or(0);
        let provenance = vec![Provenance::User; equations.len()];
        PolySystem { n_vars, equations, provenance, boolean_axioms_included: false }
    }

    pub fn from_polys(polys: &[Poly]) -> Self {
        Self::from_circuits(polys.iter().map(Poly::to_circuit).collect())
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Equation `F_i` (1-based).
    pub fn equation(&self, i: usize) -> &Circuit {
        &self.equations[i - 1]
    }

    pub fn expand(&self, p: Prime, caps: Caps) -> Result<Vec<Poly>, PolyError> {
        self.equations.iter().map(|e| expand_circuit(e, p, caps)).collect()
    }

    /// Placeholder bindings `f_i -> F_i`.
    pub fn bindings(&self) -> std::collections::HashMap<VarId, Circuit> {
        self.equations.iter().enumerate().map(|(i, c)| (VarId::F(i as u32 + 1), c.clone())).collect()
    }

    /// Appends `x_i^2 - x_i` for every `i <= n_vars` not already flagged.
    pub fn with_boolean_axioms(mut self) -> Self {
        if !self.boolean_axioms_included {
            for i in 1..=self.n_vars {
                self.equations.push(boolean_axiom(i));
                self.provenance.push(Provenance::BooleanAxiom(i));
            }
            self.boolean_axioms_included = true;
        }
        self
    }

    fn validate(&self) -> Result<(), SystemError> {
        for (i, e) in self.equations.iter().enumerate() {
            let ok =
                e.outputs().len() == 1 && e.is_division_free() && e.variables().iter().all(|v| !v.is_placeholder());
            if !ok {
                return Err(SystemError::BadEquation(i + 1));
            }
        }
        Ok(())
    }
}

pub fn boolean_axiom(i: u32) -> Circuit {
    Circuit::build(|c| {
        let a = c.x(i);
        let b = c.x(i);
        let sq = c.mul(vec![a, b]);
        let x = c.x(i);
        c.sub(sq, x)
    })
}

pub fn clause_circuit(clause: &[i32]) -> Circuit {
    Circuit::build(|c| {
        let factors: Vec<_> = clause
            .iter()
            .map(|&l| {
                let x = c.x(l.unsigned_abs());
                if l > 0 {
                    c.one_minus(x)
                } else {
                    x
                }
            })
            .collect();
        match factors.len() {
            0 => c.constant(1),
            1 => factors[0],
            _ => c.mul(factors),
        }
    })
}

pub fn translate(cnf: &CnfFormula, include_boolean_axioms: bool) -> PolySystem {
    let mut equations: Vec<Circuit> = cnf.clauses.iter().map(|cl| clause_circuit(cl)).collect();
    for e in &mut equations {
        e.set_xvars(cnf.n_vars);
    }
    let provenance = (1..=cnf.clauses.len()).map(Provenance::Clause).collect();
    let sys = PolySystem { n_vars: cnf.n_vars, equations, provenance, boolean_axioms_included: false };
    if include_boolean_axioms {
        sys.with_boolean_axioms()
    } else {
        sys
    }
}

pub fn write_system(sys: &PolySystem) -> String {
    let mut s = String::from("system v1\n");
    writeln!(s, "xvars {}", sys.n_vars).unwrap();
    writeln!(s, "equations {}", sys.equations.len()).unwrap();
    writeln!(s, "boolean_axioms {}", sys.boolean_axioms_included).unwrap();
    for (i, (e, prov)) in sys.equations.iter().zip(&sys.provenance).enumerate() {
        let tag = match prov {
            Provenance::Clause(k) => format!("clause {k}"),
            Provenance::BooleanAxiom(v) => format!("axiom {v}"),
            Provenance::User => "user".to_string(),
        };
        writeln!(s, "eq {} {tag}", i + 1).unwrap();
        s.push_str(&write_circuit(e));
    }
    s
}

pub fn parse_system(text: &str) -> Result<PolySystem, SystemError> {
    let mut lines = text.lines().enumerate().peekable();
    let mut header = |want: &str| -> Result<String, SystemError> {
        loop {
            let Some((ln, raw)) = lines.next() else {
                return Err(SystemError::Syntax(0, format!("missing `{want}`")));
            };
            let t = raw.split(';').next().unwrap_or("").trim();
            if t.is_empty() {
                continue;
            }
            return t
                .strip_prefix(want)
                .map(|r| r.trim().to_string())
                .ok_or_else(|| SystemError::Syntax(ln + 1, format!("expected `{want}`")));
        }
    };
    let bad = |ln: usize, what: &str| SystemError::Syntax(ln, format!("bad {what}"));
    if !header("system v1")?.is_empty() {
        return Err(bad(1, "header"));
    }
    let n_vars: u32 = header("xvars")?.parse().map_err(|_| bad(2, "xvars"))?;
    let m: usize = header("equations")?.parse().map_err(|_| bad(3, "equations"))?;
    let axioms: bool = header("boolean_axioms")?.parse().map_err(|_| bad(4, "boolean_axioms"))?;
    let mut equations = Vec::with_capacity(m);
    let mut provenance = Vec::with_capacity(m);
    let mut block: Option<(usize, String)> = None;
    let finish = |block: &mut Option<(usize, String)>, eqs: &mut Vec<Circuit>| -> Result<(), SystemError> {
        if let Some((i, text)) = block.take() {
            eqs.push(parse_circuit(&text).map_err(|e| SystemError::Circuit(i, e))?);
        }
        Ok(())
    };
    for (ln, raw) in lines {
        let t = raw.trim();
        if let Some(rest) = t.strip_prefix("eq ") {
            finish(&mut block, &mut equations)?;
            let toks: Vec<&str> = rest.split_whitespace().collect();
            let idx: usize = toks.first().and_then(|s| s.parse().ok()).ok_or_else(|| bad(ln + 1, "eq line"))?;
            if idx != equations.len() + 1 {
                return Err(SystemError::Syntax(ln + 1, format!("expected eq {}", equations.len() + 1)));
            }
            let prov = match toks[1..] {
                ["clause", k] => Provenance::Clause(k.parse().map_err(|_| bad(ln + 1, "clause tag"))?),
                ["axiom", v] => Provenance::BooleanAxiom(v.parse().map_err(|_| bad(ln + 1, "axiom tag"))?),
                ["user"] | [] => Provenance::User,
                _ => return Err(bad(ln + 1, "provenance")),
            };
            provenance.push(prov);
            block = Some((idx, String::new()));
        } else if let Some((_, text)) = block.as_mut() {
            text.push_str(raw);
            text.push('\n');
        } else if !t.is_empty() && !t.starts_with(';') {
            return Err(SystemError::Syntax(ln + 1, "content before first `eq`".into()));
        }
    }
    finish(&mut block, &mut equations)?;
    if equations.len() != m {
        return Err(SystemError::Syntax(0, format!("declared {m} equations, found {}", equations.len())));
    }
    let sys = PolySystem { n_vars, equations, provenance, boolean_axioms_included: axioms };
    sys.validate()?;
    Ok(sys)
}

/// Uniform random 3CNF: three distinct variables per clause, random signs.
pub fn random_3cnf<R: Rng + ?Sized>(rng: &mut R, n: u32, m: usize) -> CnfFormula {
    assert!(n >= 3);
    let vars: Vec<u32> = (1..=n).collect();
    let clauses = (0..m)
        .map(|_| {
            vars.choose_multiple(rng, 3).map(|&v| if rng.gen_bool(0.5) { v as i32 } else { -(v as i32) }).collect()
        })
        .collect();
    CnfFormula { n_vars: n, clauses }
}

/// Tseitin parity formula of a graph: one variable per edge (1-based, in
/// edge order) and, per vertex, the clauses forcing the XOR of its incident
/// edges to equal its charge. Unsatisfiable iff some connected component has
/// odd total charge.
pub fn tseitin(n_vertices: usize, edges: &[(usize, usize)], charge: &[bool]) -> CnfFormula {
    assert_eq!(charge.len(), n_vertices);
    let mut clauses = Vec::new();
    for (v, &ch) in charge.iter().enumerate() {
        let inc: Vec<i32> =
            edges.iter().enumerate().filter(|(_, &(a, b))| a == v || b == v).map(|(i, _)| i as i32 + 1).collect();
        // Forbid every sign pattern whose parity differs from the charge.
        for mask in 0u32..(1 << inc.len()) {
            if (mask.count_ones() % 2 == 1) != ch {
                let cl = inc.iter().enumerate().map(|(k, &e)| if (mask >> k) & 1 == 1 { -e } else { e }).collect();
                clauses.push(cl);
            }
        }
    }
    CnfFormula { n_vars: edges.len() as u32, clauses }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parses_dimacs() {
        let f = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n").unwrap();
        assert_eq!(f, CnfFormula { n_vars: 1, clauses: vec![vec![1], vec![-1]] });
        let g = parse_dimacs("c hello\np cnf 1 2\nc mid\n1 0\nc x\n-1 0\n").unwrap();
        assert_eq!(f, g);
        assert_eq!(parse_dimacs(&write_dimacs(&f)).unwrap(), f);
        // clauses may span lines
        let h = parse_dimacs("p cnf 3 1\n1 -2\n3 0\n").unwrap();
        assert_eq!(h.clauses, vec![vec![1, -2, 3]]);
    }

    #[test]
    fn dimacs_errors() {
        assert_eq!(parse_dimacs("p cnf 1 3\n1 0\n-1 0\n"), Err(CnfError::CountMismatch { declared: 3, found: 2 }));
        assert_eq!(parse_dimacs("p cnf 1 1\n1\n"), Err(CnfError::UnterminatedClause));
        assert!(matches!(parse_dimacs("p cnf 1 1\n2 0\n"), Err(CnfError::LiteralOutOfRange { lit: 2, .. })));
        assert!(matches!(parse_dimacs("1 0\n"), Err(CnfError::MalformedHeader(1))));
        assert!(matches!(parse_dimacs("p dnf 1 1\n1 0\n"), Err(CnfError::MalformedHeader(1))));
        assert!(matches!(parse_dimacs("p cnf 1 1\n1 a 0\n"), Err(CnfError::BadToken(2, _))));
    }

    #[test]
    fn translates_clauses() {
        let p = Prime::new(10007).unwrap();
        let f = CnfFormula::new(42, vec![vec![1, -17, 42], vec![1], vec![-1]]);
        let sys = translate(&f, false);
        let e = sys.expand(p, Caps::default()).unwrap();
        let want = parse_poly("1 - x1", p)
            .unwrap()
            .mul(&parse_poly("x17", p).unwrap())
            .mul(&parse_poly("1 - x42", p).unwrap());
        assert_eq!(e[0], want);
        assert_eq!(e[1], parse_poly("1 - x1", p).unwrap());
        assert_eq!(e[2], parse_poly("x1", p).unwrap());
    }

    #[test]
    fn boolean_axioms_follow_clauses() {
        let p = Prime::new(101).unwrap();
        let sys = translate(&CnfFormula::new(2, vec![vec![1, 2]]), true);
        assert_eq!(sys.len(), 3);
        assert_eq!(
            sys.provenance,
            vec![Provenance::Clause(1), Provenance::BooleanAxiom(1), Provenance::BooleanAxiom(2)]
        );
        let e = sys.expand(p, Caps::default()).unwrap();
        assert_eq!(e[1], parse_poly("x1^2 - x1", p).unwrap());
        assert_eq!(e[2], parse_poly("x2^2 - x2", p).unwrap());
    }

    #[test]
    fn clause_polynomial_vanishes_iff_satisfied() {
        let p = Prime::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = 16;
            let f = random_3cnf(&mut rng, n, 1);
            let sys = translate(&f, false);
            for a in (0..1u64 << n).step_by(97) {
                let val = sys.equations[0].evaluate(p, |v| Some(p.elem((a >> (v.index() - 1)) & 1))).unwrap()[0];
                assert_eq!(val.is_zero(), CnfFormula::clause_satisfied(&f.clauses[0], a));
            }
        }
        // exhaustive on a small width-3 clause
        let cl = vec![1, -2, 3];
        let c = clause_circuit(&cl);
        for a in 0..8u64 {
            let v = c.evaluate(p, |v| Some(p.elem((a >> (v.index() - 1)) & 1))).unwrap()[0];
            assert_eq!(v.is_zero(), CnfFormula::clause_satisfied(&cl, a));
        }
    }

    #[test]
    fn bit_sliced_search_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in [3u32, 5, 7, 9] {
            for m in [2usize, 10, 30, 45] {
                let f = random_3cnf(&mut rng, n, m);
                let naive = (0..1u64 << n).find(|&a| f.first_falsified(a).is_none());
                assert_eq!(f.find_satisfying().unwrap(), naive);
            }
        }
        let big = CnfFormula::new(25, vec![vec![1]]);
        assert_eq!(big.find_satisfying(), Err(CnfError::CubeTooLarge(25, 24)));
    }

    #[test]
    fn tseitin_parity() {
        // triangle with one odd vertex: unsatisfiable
        let edges = [(0, 1), (1, 2), (2, 0)];
        let odd = tseitin(3, &edges, &[true, false, false]);
        assert_eq!(odd.clauses.len(), 6);
        assert!(!odd.is_satisfiable().unwrap());
        let even = tseitin(3, &edges, &[true, true, false]);
        assert!(even.is_satisfiable().unwrap());
    }

    #[test]
    fn system_round_trip() {
        let sys = translate(&CnfFormula::new(2, vec![vec![1, -2], vec![2]]), true);
        let text = write_system(&sys);
        assert!(
            text.starts_with("system v1\nxvars 2\nequations 4\nboolean_axioms true\neq 1 clause 1\nalgcircuit v1\n")
        );
        assert_eq!(parse_system(&text).unwrap(), sys);
        let bad = text.replace("%0 = x1", "%0 = f1");
        assert!(matches!(parse_system(&bad), Err(SystemError::BadEquation(1))));
        assert!(parse_system("system v1\nxvars 1\nequations 2\nboolean_axioms false\n").is_err());
    }
}
