//! Polynomial Calculus proofs: text format, checking, and compilation to and
//! from Hilbert-like weakly-skew IPS certificates.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use rand::Rng;
use thiserror::Error;

use crate::circuit::{binarize, prune, unshare_leaves, Circuit, CircuitError, Domain, Node, NodeId, VarId};
use crate::cnf::PolySystem;
use crate::field::FieldElement;
use crate::ips::{is_hilbert_like, Certificate, IpsError, Target};
use crate::poly::{expand_in, Caps, Coeff, Monomial, PolyError, SparsePoly};

#[derive(Debug, Error)]
pub enum PcError {
    #[error("line L{line}: {reason}")]
    InvalidRule { line: usize, reason: String },
    #[error("final line does not expand to 1")]
    FinalNotOne,
    #[error("final line does not expand to the target")]
    FinalMismatch,
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("certificate is not Hilbert-like")]
    NotHilbertLike,
    #[error("product gate {0} isolates neither child")]
    NotWeaklySkew(NodeId),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Ips(#[from] IpsError),
}

/// One proof line. Line references are 0-based positions in the proof.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    /// Equation `F_i` (1-based).
    Axiom(usize),
    /// `alpha * L_a + beta * L_b`.
    Lin(i64, usize, i64, usize),
    /// `L_a * x_i`.
    MulVar(usize, u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PcProof {
    pub lines: Vec<Line>,
    pub final_line: usize,
    /// Path of the system file, as recorded in the header.
    pub system: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PcMeasures {
    pub lines: usize,
    /// Total number of monomials over all expanded lines.
    pub monomials: usize,
    pub degree: u64,
}

impl PcProof {
    fn validate(&self, m: usize) -> Result<(), PcError> {
        let bad = |k: usize, reason: String| PcError::InvalidRule { line: k + 1, reason };
        for (k, l) in self.lines.iter().enumerate() {
            match *l {
                Line::Axiom(i) if i == 0 || i > m => return Err(bad(k, format!("axiom {i} outside 1..={m}"))),
                Line::Lin(_, a, _, b) if a >= k || b >= k => return Err(bad(k, "reference to a later line".into())),
                Line::MulVar(a, _) if a >= k => return Err(bad(k, "reference to a later line".into())),
                Line::MulVar(_, 0) => return Err(bad(k, "variable index 0".into())),
                _ => {}
            }
        }
        if self.final_line >= self.lines.len() {
            return Err(PcError::InvalidRule { line: self.final_line + 1, reason: "final line does not exist".into() });
        }
        Ok(())
    }
}

fn capped<K: Coeff>(p: SparsePoly<K>, caps: Caps) -> Result<SparsePoly<K>, PcError> {
    if p.num_terms() > caps.max_terms {
        return Err(PolyError::TermBlowup { terms: p.num_terms(), limit: caps.max_terms }.into());
    }
    let d = p.total_degree().unwrap_or(0);
    if d > caps.max_degree {
        return Err(PolyError::DegreeBlowup { degree: d, limit: caps.max_degree }.into());
    }
    Ok(p)
}

fn run<K: Coeff>(
    proof: &PcProof,
    sys: &PolySystem,
    ctx: K::Ctx,
    caps: Caps,
) -> Result<(PcMeasures, SparsePoly<K>), PcError> {
    proof.validate(sys.len())?;
    let mut axioms: HashMap<usize, SparsePoly<K>> = HashMap::new();
    let mut polys: Vec<SparsePoly<K>> = Vec::with_capacity(proof.lines.len());
    let mut meas = PcMeasures { lines: proof.lines.len(), monomials: 0, degree: 0 };
    for l in &proof.lines {
        let p = match *l {
            Line::Axiom(i) => match axioms.get(&i) {
                Some(p) => p.clone(),
                None => {
                    let p = expand_in::<K>(sys.equation(i), ctx, caps)?;
                    axioms.insert(i, p.clone());
                    p
                }
            },
            Line::Lin(a, i, b, j) => {
                let pa = polys[i].scale(&K::from_i64(ctx, a));
                capped(pa.add(&polys[j].scale(&K::from_i64(ctx, b))), caps)?
            }
            Line::MulVar(i, v) => capped(polys[i].mul_term(&K::from_i64(ctx, 1), &Monomial::var(VarId::X(v))), caps)?,
        };
        meas.monomials += p.num_terms();
        meas.degree = meas.degree.max(p.total_degree().unwrap_or(0));
        polys.push(p);
    }
    let fin = polys.swap_remove(proof.final_line);
    Ok((meas, fin))
}

fn final_matches<K: Coeff>(
    proof: &PcProof,
    sys: &PolySystem,
    ctx: K::Ctx,
    caps: Caps,
    target: Option<&Circuit>,
) -> Result<(PcMeasures, bool), PcError> {
    let (meas, fin) = run::<K>(proof, sys, ctx, caps)?;
    let ok = match target {
        None => fin.is_one(),
        Some(g) => fin == expand_in::<K>(g, ctx, caps)?,
    };
    Ok((meas, ok))
}

fn check_in(
    proof: &PcProof,
    sys: &PolySystem,
    domain: Domain,
    caps: Caps,
    target: Option<&Circuit>,
) -> Result<(PcMeasures, bool), PcError> {
    match domain {
        Domain::Integer => final_matches::<BigInt>(proof, sys, (), caps, target),
        Domain::Prime(p) => final_matches::<FieldElement>(proof, sys, p, caps, target),
    }
}

/// Checks a refutation: every line is recomputed and the final one must be 1.
pub fn check_pc(proof: &PcProof, sys: &PolySystem, domain: Domain, caps: Caps) -> Result<PcMeasures, PcError> {
    match check_in(proof, sys, domain, caps, None)? {
        (m, true) => Ok(m),
        _ => Err(PcError::FinalNotOne),
    }
}

/// Checks a derivation of `target`.
pub fn check_pc_derivation(
    proof: &PcProof,
    sys: &PolySystem,
    domain: Domain,
    caps: Caps,
    target: &Circuit,
) -> Result<PcMeasures, PcError> {
    match check_in(proof, sys, domain, caps, Some(target))? {
        (m, true) => Ok(m),
        _ => Err(PcError::FinalMismatch),
    }
}

/// The polynomial of the final line, as a circuit.
pub fn final_polynomial(proof: &PcProof, sys: &PolySystem, domain: Domain, caps: Caps) -> Result<Circuit, PcError> {
    let mut c = match domain {
        Domain::Integer => run::<BigInt>(proof, sys, (), caps)?.1.try_to_circuit()?,
        Domain::Prime(p) => run::<FieldElement>(proof, sys, p, caps)?.1.try_to_circuit()?,
    };
    c.set_domain(domain);
    Ok(c)
}

/// Transcribes a checked proof: axiom lines become placeholders `f_i`, `lin`
/// lines become linear gates and `mulvar` lines multiply by a fresh `x_i`
/// leaf, so every product isolates its variable child.
pub fn compile_pc_to_ips(
    proof: &PcProof,
    sys: &PolySystem,
    domain: Domain,
    caps: Caps,
) -> Result<Certificate, PcError> {
    let (_, is_one) = check_in(proof, sys, domain, caps, None)?;
    let mut c = Circuit::with_vars(sys.n_vars, sys.len() as u32);
    c.set_domain(domain);
    let mut ax: HashMap<usize, NodeId> = HashMap::new();
    let mut ids = Vec::with_capacity(proof.lines.len());
    for l in &proof.lines {
        let id = match *l {
            Line::Axiom(i) => *ax.entry(i).or_insert_with(|| c.f(i as u32)),
            Line::Lin(a, i, b, j) => c.lin(vec![(a, ids[i]), (b, ids[j])]),
            Line::MulVar(i, v) => {
                let x = c.x(v);
                c.mul(vec![ids[i], x])
            }
        };
        ids.push(id);
    }
    c.set_outputs(vec![ids[proof.final_line]]);
    let c = prune(&c);
    if is_one {
        return Ok(Certificate::refutation(c));
    }
    let target = final_polynomial(proof, sys, domain, caps)?;
    Ok(Certificate { circuit: c, target: Target::Poly(target) })
}

/// Splits linear gates into binary ones.
fn binarize_lin(c: &Circuit) -> Circuit {
    let mut out = Circuit::with_vars(c.xvars(), c.fvars());
    out.set_domain(c.domain());
    let mut map: Vec<NodeId> = Vec::with_capacity(c.len());
    for node in c.nodes() {
        let id = match node {
            Node::Lin(ts) if ts.len() > 2 => {
                let mut acc = out.lin(vec![(ts[0].0, map[ts[0].1.idx()]), (ts[1].0, map[ts[1].1.idx()])]);
                for &(k, ch) in &ts[2..] {
                    acc = out.lin(vec![(1, acc), (k, map[ch.idx()])]);
                }
                acc
            }
            Node::Lin(ts) => out.lin(ts.iter().map(|&(k, ch)| (k, map[ch.idx()])).collect()),
            Node::Mul(cs) => out.mul(cs.iter().map(|ch| map[ch.idx()]).collect()),
            other => out.push(other.clone()),
        };
        map.push(id);
    }
    out.set_outputs(c.outputs().iter().map(|o| map[o.idx()]).collect());
    out
}

/// Normal form used by [`compile_ips_to_pc`]: pruned, binary gates, and no
/// shared leaves.
pub fn normalize_for_pc(c: &Circuit) -> Circuit {
    prune(&unshare_leaves(&binarize_lin(&binarize(&prune(c)))))
}

/// Signals a product of two placeholder-carrying subcircuits.
struct Quadratic;

struct Emitter<'a> {
    c: &'a Circuit,
    has_f: Vec<bool>,
    isolated: HashMap<NodeId, usize>,
    lines: Vec<Line>,
    axiom: HashMap<u32, usize>,
    line_f: HashMap<NodeId, usize>,
    axtimes: HashMap<(u32, NodeId), usize>,
}

impl<'a> Emitter<'a> {
    fn emit(&mut self, l: Line) -> usize {
        self.lines.push(l);
        self.lines.len() - 1
    }

    fn axiom(&mut self, i: u32) -> usize {
        if let Some(&l) = self.axiom.get(&i) {
            return l;
        }
        let l = self.emit(Line::Axiom(i as usize));
        self.axiom.insert(i, l);
        l
    }

    fn scale(&mut self, l: usize, k: i64) -> usize {
        if k == 1 {
            l
        } else {
            self.emit(Line::Lin(k, l, 0, l))
        }
    }

    /// `sum k_j L_j`; `base` supplies a line to build 0 from when empty.
    fn combine(&mut self, base: usize, terms: &[(i64, usize)]) -> usize {
        let terms: Vec<_> = terms.iter().copied().filter(|&(k, _)| k != 0).collect();
        match terms.as_slice() {
            [] => self.emit(Line::Lin(0, base, 0, base)),
            [(k, l)] => self.scale(*l, *k),
            [(k1, l1), rest @ ..] => {
                let (k2, l2) = rest[0];
                let mut acc = self.emit(Line::Lin(*k1, *l1, k2, l2));
                for &(k, l) in &rest[1..] {
                    acc = self.emit(Line::Lin(1, acc, k, l));
                }
                acc
            }
        }
    }

    /// Line for `L * w` where `w` is placeholder-free, walking `w` as a tree.
    fn mult(&mut self, l: usize, w: NodeId) -> usize {
        match self.c.node(w).clone() {
            Node::Const(k) => {
                if k == 0 {
                    self.emit(Line::Lin(0, l, 0, l))
                } else {
                    self.scale(l, k)
                }
            }
            Node::Var(VarId::X(j)) => self.emit(Line::MulVar(l, j)),
            Node::Lin(ts) => {
                let parts: Vec<_> = ts.iter().map(|&(k, ch)| (k, self.mult(l, ch))).collect();
                self.combine(l, &parts)
            }
            Node::Mul(cs) => cs.iter().fold(l, |acc, &ch| self.mult(acc, ch)),
            Node::Var(VarId::F(_)) | Node::Div(..) => unreachable!("placeholder-free subcircuit expected"),
        }
    }

    /// Line for `F_i * w`, memoized over the shared placeholder-free node `w`.
    fn axtimes(&mut self, i: u32, w: NodeId) -> usize {
        if let Some(&l) = self.axtimes.get(&(i, w)) {
            return l;
        }
        let l = match self.c.node(w).clone() {
            Node::Lin(ts) => {
                let parts: Vec<_> = ts.iter().map(|&(k, ch)| (k, self.axtimes(i, ch))).collect();
                let base = self.axiom(i);
                self.combine(base, &parts)
            }
            Node::Mul(cs) if cs.len() == 2 => {
                let iso = self.isolated[&w];
                let inner = self.axtimes(i, cs[1 - iso]);
                self.mult(inner, cs[iso])
            }
            _ => {
                let a = self.axiom(i);
                self.mult(a, w)
            }
        };
        self.axtimes.insert((i, w), l);
        l
    }

    /// Splits a binary product into (placeholder child, free child).
    fn split(&self, g: NodeId, cs: &[NodeId]) -> Result<(NodeId, NodeId), Quadratic> {
        match (self.has_f[cs[0].idx()], self.has_f[cs[1].idx()]) {
            (true, false) => Ok((cs[0], cs[1])),
            (false, true) => Ok((cs[1], cs[0])),
            _ => {
                debug_assert!(self.has_f[g.idx()]);
                Err(Quadratic)
            }
        }
    }

    /// Line for the placeholder part `g(x, F) - g(x, 0)` of node `g`.
    fn line_f(&mut self, g: NodeId) -> Result<usize, Quadratic> {
        if let Some(&l) = self.line_f.get(&g) {
            return Ok(l);
        }
        let l = match self.c.node(g).clone() {
            Node::Var(VarId::F(i)) => self.axiom(i),
            Node::Lin(ts) => self.lin_part(&ts, |s, ch| s.line_f(ch))?,
            Node::Mul(cs) => {
                let (fc, w) = self.split(g, &cs)?;
                let iso = cs[self.isolated[&g]];
                if iso == w {
                    let inner = self.line_f(fc)?;
                    self.mult(inner, w)
                } else {
                    self.mult_f(fc, w)?
                }
            }
            _ => unreachable!("node without placeholders"),
        };
        self.line_f.insert(g, l);
        Ok(l)
    }

    fn lin_part(
        &mut self,
        ts: &[(i64, NodeId)],
        mut sub: impl FnMut(&mut Self, NodeId) -> Result<usize, Quadratic>,
    ) -> Result<usize, Quadratic> {
        let mut parts = Vec::new();
        for &(k, ch) in ts {
            if self.has_f[ch.idx()] {
                parts.push((k, sub(self, ch)?));
            }
        }
        Ok(self.combine(parts[0].1, &parts))
    }

    /// Line for `h_f * w` where `h` lies in an isolated subtree and `w` is a
    /// shared placeholder-free node.
    fn mult_f(&mut self, h: NodeId, w: NodeId) -> Result<usize, Quadratic> {
        match self.c.node(h).clone() {
            Node::Var(VarId::F(i)) => Ok(self.axtimes(i, w)),
            Node::Lin(ts) => self.lin_part(&ts, |s, ch| s.mult_f(ch, w)),
            Node::Mul(cs) => {
                let (fc, w2) = self.split(h, &cs)?;
                let inner = self.mult_f(fc, w)?;
                Ok(self.mult(inner, w2))
            }
            _ => unreachable!("node without placeholders"),
        }
    }
}

fn transcribe(c: &Circuit) -> Result<Result<PcProof, Quadratic>, PcError> {
    if !c.is_division_free() {
        return Err(CircuitError::DegreeOfDivision.into());
    }
    let skew = c.is_weakly_skew()?;
    if let Some((g, _, _)) = skew.witness {
        return Err(PcError::NotWeaklySkew(g));
    }
    let mut has_f = vec![false; c.len()];
    for (i, n) in c.nodes().iter().enumerate() {
        has_f[i] = match n {
            Node::Var(v) => v.is_placeholder(),
            _ => n.children().iter().any(|ch| has_f[ch.idx()]),
        };
    }
    let out = c.output()?;
    if !has_f[out.idx()] {
        return Err(PcError::NotHilbertLike);
    }
    let mut e = Emitter {
        c,
        has_f,
        isolated: skew.labels.into_iter().collect(),
        lines: Vec::new(),
        axiom: HashMap::new(),
        line_f: HashMap::new(),
        axtimes: HashMap::new(),
    };
    Ok(e.line_f(out).map(|final_line| PcProof { lines: e.lines, final_line, system: None }))
}

/// Per-placeholder expansion `sum_i f_i G_i(x)` with each `G_i` as a sum of
/// monomials.
fn expanded_form(cert: &Certificate, caps: Caps) -> Result<Circuit, PcError> {
    fn go<K: Coeff>(c: &Circuit, ctx: K::Ctx, caps: Caps) -> Result<Circuit, PcError> {
        let e = expand_in::<K>(c, ctx, caps)?;
        let mut out = Circuit::with_vars(c.xvars(), c.fvars());
        let mut terms = Vec::new();
        for (mono, g) in e.collect_by(VarId::is_placeholder) {
            let Some(&(VarId::F(i), 1)) = mono.pairs().first() else { return Err(PcError::NotHilbertLike) };
            let gi = g.build_into(&mut out)?;
            let f = out.f(i);
            terms.push((1, out.mul(vec![f, gi])));
        }
        if terms.is_empty() {
            return Err(PcError::NotHilbertLike);
        }
        let o = out.lin(terms);
        out.set_outputs(vec![o]);
        Ok(out)
    }
    let mut out = match cert.circuit.domain() {
        Domain::Integer => go::<BigInt>(&cert.circuit, (), caps)?,
        Domain::Prime(p) => go::<FieldElement>(&cert.circuit, p, caps)?,
    };
    out.set_domain(cert.circuit.domain());
    Ok(out)
}

/// Inverse of [`compile_pc_to_ips`] for Hilbert-like weakly-skew
/// certificates.
///
/// The circuit is brought to [`normalize_for_pc`] form and each
/// placeholder-carrying gate becomes one line, reused by all its parents.
/// Multiplication by an isolated placeholder-free subtree is distributed over
/// that subtree. A product of two placeholder-carrying gates (linear only
/// after cancellation) falls back to the expanded form `sum_i f_i G_i`.
pub fn compile_ips_to_pc(cert: &Certificate, caps: Caps) -> Result<PcProof, PcError> {
    if !is_hilbert_like(cert, caps)? {
        return Err(PcError::NotHilbertLike);
    }
    match transcribe(&normalize_for_pc(&cert.circuit))? {
        Ok(p) => Ok(p),
        Err(Quadratic) => {
            let flat = normalize_for_pc(&expanded_form(cert, caps)?);
            transcribe(&flat)?.map_err(|Quadratic| PcError::NotHilbertLike)
        }
    }
}

pub fn write_pc(proof: &PcProof) -> String {
    let mut s = String::from("pcproof v1\n");
    if let Some(path) = &proof.system {
        let _ = writeln!(s, "system {path}");
    }
    for (k, l) in proof.lines.iter().enumerate() {
        let _ = match *l {
            Line::Axiom(i) => writeln!(s, "L{} axiom {i}", k + 1),
            Line::Lin(a, i, b, j) => writeln!(s, "L{} lin {a} L{} {b} L{}", k + 1, i + 1, j + 1),
            Line::MulVar(i, v) => writeln!(s, "L{} mulvar L{} x{v}", k + 1, i + 1),
        };
    }
    let _ = writeln!(s, "final L{}", proof.final_line + 1);
    s
}

pub fn parse_pc(text: &str) -> Result<PcProof, PcError> {
    let mut proof = PcProof::default();
    let mut header = false;
    let mut fin = None;
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.split(';').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| PcError::Syntax { line: ln, msg: msg.to_string() };
        let toks: Vec<&str> = line.split_whitespace().collect();
        if !header {
            if toks != ["pcproof", "v1"] {
                return Err(err("expected header `pcproof v1`"));
            }
            header = true;
            continue;
        }
        let line_ref = |t: &str| -> Result<usize, PcError> {
            t.strip_prefix('L')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&k| k >= 1)
                .map(|k| k - 1)
                .ok_or_else(|| err(&format!("bad line reference `{t}`")))
        };
        let int = |t: &str| t.parse::<i64>().map_err(|_| err(&format!("bad integer `{t}`")));
        match toks.as_slice() {
            ["system", path] => proof.system = Some(path.to_string()),
            ["final", l] => fin = Some(line_ref(l)?),
            [id, rest @ ..] if id.starts_with('L') => {
                if line_ref(id)? != proof.lines.len() {
                    return Err(err("line ids must be sequential from L1"));
                }
                let l = match rest {
                    ["axiom", i] => Line::Axiom(i.parse().map_err(|_| err("bad axiom index"))?),
                    ["lin", a, la, b, lb] => Line::Lin(int(a)?, line_ref(la)?, int(b)?, line_ref(lb)?),
                    ["mulvar", la, x] => {
                        let v = x.strip_prefix('x').and_then(|d| d.parse().ok()).ok_or_else(|| err("bad variable"))?;
                        Line::MulVar(line_ref(la)?, v)
                    }
                    _ => return Err(err("unknown rule")),
                };
                proof.lines.push(l);
            }
            _ => return Err(err("unrecognized line")),
        }
    }
    if !header {
        return Err(PcError::Syntax { line: 0, msg: "missing header".into() });
    }
    proof.final_line = fin.ok_or(PcError::Syntax { line: 0, msg: "missing `final`".into() })?;
    Ok(proof)
}

/// A valid random derivation of `len` lines: axioms, small linear
/// combinations, and variable multiplications kept below `max_degree` by a
/// syntactic degree estimate.
pub fn random_pc_derivation<R: Rng + ?Sized>(rng: &mut R, sys: &PolySystem, len: usize, max_degree: u64) -> PcProof {
    assert!(!sys.is_empty() && len > 0);
    let base: Vec<u64> = sys.equations.iter().map(|e| e.degree_bound().unwrap_or(0)).collect();
    let mut lines = Vec::with_capacity(len);
    let mut deg: Vec<u64> = Vec::with_capacity(len);
    for k in 0..len {
        let roll = if k == 0 { 0 } else { rng.gen_range(0..3) };
        let (l, d) = match roll {
            1 => {
                let (a, b) = (rng.gen_range(0..k), rng.gen_range(0..k));
                let co = |r: &mut R| [-2i64, -1, 1, 2][r.gen_range(0..4)];
                (Line::Lin(co(rng), a, co(rng), b), deg[a].max(deg[b]))
            }
            2 => {
                let a = rng.gen_range(0..k);
                if deg[a] < max_degree && sys.n_vars > 0 {
                    (Line::MulVar(a, rng.gen_range(1..=sys.n_vars)), deg[a] + 1)
                } else {
                    (Line::Lin(1, a, -1, a), deg[a])
                }
            }
            _ => {
                let i = rng.gen_range(0..sys.len());
                (Line::Axiom(i + 1), base[i])
            }
        };
        lines.push(l);
        deg.push(d);
    }
    PcProof { lines, final_line: len - 1, system: None }
}

/// Appends `extra` to `proof`, shifting its line references, and keeps the
/// final line of `extra`.
pub fn splice(proof: &PcProof, extra: &PcProof) -> PcProof {
    let off = proof.lines.len();
    let mut lines = proof.lines.clone();
    lines.extend(extra.lines.iter().map(|l| match *l {
        Line::Axiom(i) => Line::Axiom(i),
        Line::Lin(a, i, b, j) => Line::Lin(a, i + off, b, j + off),
        Line::MulVar(i, v) => Line::MulVar(i + off, v),
    }));
    PcProof { lines, final_line: extra.final_line + off, system: proof.system.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{translate, CnfFormula};
    use crate::field::Prime;
    use crate::ips::{verify, VerifyMode};
    use crate::poly::{expand_circuit_int, parse_poly_in, IntPoly};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sys(eqs: &[&str]) -> PolySystem {
        let polys: Vec<IntPoly> = eqs.iter().map(|s| parse_poly_in::<BigInt>(s, ()).unwrap()).collect();
        PolySystem::from_circuits(polys.iter().map(|p| p.try_to_circuit().unwrap()).collect())
    }

    fn three_line() -> PcProof {
        PcProof { lines: vec![Line::Axiom(1), Line::Axiom(2), Line::Lin(1, 0, 1, 1)], final_line: 2, system: None }
    }

    fn xy_proof() -> PcProof {
        PcProof {
            lines: vec![Line::Axiom(2), Line::MulVar(0, 2), Line::Axiom(1), Line::Lin(1, 1, -1, 2)],
            final_line: 3,
            system: None,
        }
    }

    #[test]
    fn checks_hand_proofs() {
        let s = sys(&["1 - x1", "x1"]);
        let m = check_pc(&three_line(), &s, Domain::Integer, Caps::default()).unwrap();
        assert_eq!(m, PcMeasures { lines: 3, monomials: 4, degree: 1 });
        let s2 = sys(&["x1*x2 - 1", "x1"]);
        let m = check_pc(&xy_proof(), &s2, Domain::Integer, Caps::default()).unwrap();
        assert_eq!((m.lines, m.degree), (4, 2));
        let p = Prime::new(10007).unwrap();
        assert!(check_pc(&xy_proof(), &s2, Domain::Prime(p), Caps::default()).is_ok());
        let not_one = PcProof { lines: vec![Line::Axiom(2)], final_line: 0, system: None };
        assert!(matches!(check_pc(&not_one, &s2, Domain::Integer, Caps::default()), Err(PcError::FinalNotOne)));
        let x1 = Circuit::build(|c| c.x(1));
        assert!(check_pc_derivation(&not_one, &s2, Domain::Integer, Caps::default(), &x1).is_ok());
    }

    #[test]
    fn rejects_invalid_rules() {
        let s = sys(&["x1"]);
        let fwd = PcProof { lines: vec![Line::Axiom(1), Line::Lin(1, 1, 1, 0)], final_line: 1, system: None };
        assert!(matches!(
            check_pc(&fwd, &s, Domain::Integer, Caps::default()),
            Err(PcError::InvalidRule { line: 2, .. })
        ));
        let ax = PcProof { lines: vec![Line::Axiom(2)], final_line: 0, system: None };
        assert!(matches!(
            check_pc(&ax, &s, Domain::Integer, Caps::default()),
            Err(PcError::InvalidRule { line: 1, .. })
        ));
        let mut blow = PcProof { lines: vec![Line::Axiom(1)], final_line: 0, system: None };
        for k in 0..70 {
            blow.lines.push(Line::MulVar(k, 1));
        }
        blow.final_line = 70;
        assert!(matches!(
            check_pc(&blow, &s, Domain::Integer, Caps::default()),
            Err(PcError::Poly(PolyError::DegreeBlowup { .. }))
        ));
    }

    #[test]
    fn compiles_hand_proofs() {
        let s = sys(&["1 - x1", "x1"]);
        let cert = compile_pc_to_ips(&three_line(), &s, Domain::Integer, Caps::default()).unwrap();
        assert_eq!(expand_circuit_int(&cert.circuit, Caps::default()).unwrap().to_string(), "1*f1 + 1*f2");
        let s2 = sys(&["x1*x2 - 1", "x1"]);
        let cert = compile_pc_to_ips(&xy_proof(), &s2, Domain::Integer, Caps::default()).unwrap();
        assert_eq!(expand_circuit_int(&cert.circuit, Caps::default()).unwrap().to_string(), "1*x2*f2 + -1*f1");
        assert!(cert.circuit.is_weakly_skew().unwrap().weakly_skew);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(verify(&cert, &s2, VerifyMode::exact(), &mut rng).unwrap().accepted);
        let back = compile_ips_to_pc(&cert, Caps::default()).unwrap();
        assert!(back.lines.len() <= 4);
        check_pc(&back, &s2, Domain::Integer, Caps::default()).unwrap();
    }

    #[test]
    fn non_skew_coefficient_is_rejected() {
        // f1 * (g * g) with g = x1 + x2 shared by both factors.
        let c = Circuit::build(|c| {
            let f = c.f(1);
            let x1 = c.x(1);
            let x2 = c.x(2);
            let g = c.add(x1, x2);
            let sq = c.mul(vec![g, g]);
            c.mul(vec![f, sq])
        });
        let cert = Certificate::derivation(c, Circuit::build(|c| c.constant(0)));
        assert!(matches!(compile_ips_to_pc(&cert, Caps::default()), Err(PcError::NotWeaklySkew(_))));
        let notlin = Certificate::refutation(Circuit::build(|c| {
            let f = c.f(1);
            c.mul(vec![f, f])
        }));
        assert!(matches!(compile_ips_to_pc(&notlin, Caps::default()), Err(PcError::NotHilbertLike)));
    }

    #[test]
    fn cancelling_quadratic_product_uses_expanded_form() {
        // (f1 + x1) * (f2 - f2 + 1) - x1 is linear only after cancellation.
        let c = Circuit::build(|c| {
            let f1 = c.f(1);
            let f2 = c.f(2);
            let x1 = c.x(1);
            let one = c.constant(1);
            let a = c.add(f1, x1);
            let b = c.lin(vec![(1, f2), (-1, f2), (1, one)]);
            let p = c.mul(vec![a, b]);
            let x1b = c.x(1);
            c.sub(p, x1b)
        });
        let s = sys(&["1 - x1", "x1"]);
        let cert = Certificate::derivation(
            c,
            Circuit::build(|c| {
                let x = c.x(1);
                c.one_minus(x)
            }),
        );
        let pf = compile_ips_to_pc(&cert, Caps::default()).unwrap();
        let fin = final_polynomial(&pf, &s, Domain::Integer, Caps::default()).unwrap();
        assert_eq!(expand_circuit_int(&fin, Caps::default()).unwrap().to_string(), "-1*x1 + 1");
    }

    #[test]
    fn random_derivations_round_trip() {
        let cnf = crate::cnf::tseitin(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &[true, false, false, false]);
        let s = translate(&cnf, false);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let pf = random_pc_derivation(&mut rng, &s, 100, 6);
            let meas = check_in(&pf, &s, Domain::Integer, Caps::default(), None).unwrap().0;
            assert_eq!(meas.lines, 100);
            let cert = compile_pc_to_ips(&pf, &s, Domain::Integer, Caps::default()).unwrap();
            assert!(cert.circuit.metrics().size <= 3 * 100 + s.len());
            assert!(cert.circuit.is_weakly_skew().unwrap().weakly_skew);
            let rt = parse_pc(&write_pc(&pf)).unwrap();
            assert_eq!(rt, pf);
            let fin = expand_circuit_int(
                &final_polynomial(&pf, &s, Domain::Integer, Caps::default()).unwrap(),
                Caps::default(),
            )
            .unwrap();
            if fin.is_zero() {
                continue;
            }
            let back = compile_ips_to_pc(&cert, Caps::default()).unwrap();
            let norm = normalize_for_pc(&cert.circuit);
            assert!(back.lines.len() <= norm.metrics().size + s.len());
            let fin2 = final_polynomial(&back, &s, Domain::Integer, Caps::default()).unwrap();
            assert_eq!(expand_circuit_int(&fin2, Caps::default()).unwrap(), fin);
            let again = compile_pc_to_ips(&back, &s, Domain::Integer, Caps::default()).unwrap();
            assert_eq!(
                expand_circuit_int(&again.circuit, Caps::default()).unwrap(),
                expand_circuit_int(&cert.circuit, Caps::default()).unwrap()
            );
        }
    }

    #[test]
    fn vnp_certificates_compile_to_refutations() {
        let f = CnfFormula::new(2, vec![vec![1, 2], vec![-1, 2], vec![1, -2], vec![-1, -2]]);
        let s = translate(&f, false);
        let c = crate::vnp::build_explicit(&f, &Default::default()).unwrap();
        let cert = Certificate::refutation(c);
        let pf = match compile_ips_to_pc(&cert, Caps::default()) {
            Ok(pf) => pf,
            Err(PcError::NotWeaklySkew(_)) => compile_ips_to_pc(
                &Certificate::refutation(expanded_form(&cert, Caps::default()).unwrap()),
                Caps::default(),
            )
            .unwrap(),
            Err(e) => panic!("{e}"),
        };
        check_pc(&pf, &s, Domain::Integer, Caps::default()).unwrap();
    }

    #[test]
    fn parse_errors() {
        assert!(parse_pc("pcproof v2\n").is_err());
        assert!(parse_pc("pcproof v1\nL2 axiom 1\nfinal L2\n").is_err());
        assert!(parse_pc("pcproof v1\nL1 axiom 1\n").is_err());
        assert!(parse_pc("pcproof v1\nL1 frob 1\nfinal L1\n").is_err());
        let p = parse_pc("pcproof v1 ; c\nsystem s.sys\nL1 axiom 1\nL2 mulvar L1 x3\nfinal L2\n").unwrap();
        assert_eq!(p.lines, vec![Line::Axiom(1), Line::MulVar(0, 3)]);
        assert_eq!(p.system.as_deref(), Some("s.sys"));
    }
}
