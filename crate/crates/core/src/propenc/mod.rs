//! Propositional encodings: bit strings for 3CNFs and constant-free
//! circuits, `Truth_bool`, `Proof_IPS` with K-clauses, and the four PIT
//! axioms over a Boolean identity tester `K`.
//!
//! # Circuit layout
//!
//! A circuit is a list of `g` gate records; the last record is the output.
//! With `w` index bits a record is `kind(2) | a(w) | b(w) | ca | cb`, every
//! field most significant bit first. Kinds are `00` leaf, `01` add, `10`
//! subtract, `11` multiply.
//!
//! * Leaf: `ca = 1` is the constant `cb`; otherwise the variable with
//!   0-based index `a` (an index past the declared variable count reads 0).
//! * Other gates combine two operands. Operand `a` is the constant 1 when
//!   `ca = 1` and otherwise the value of gate `a`, which reads 0 unless
//!   `a` precedes the gate. Likewise for `b`.
//!
//! Placeholder `f_j` of a circuit over `n` variables has index `n + j - 1`.

mod axioms;
mod k;

pub use axioms::*;
pub use k::*;

use std::ops::Range;

use thiserror::Error;

use crate::circuit::{Circuit, Node, NodeId, VarId};
use crate::cnf::CnfFormula;
use crate::field::Prime;
use crate::frege::BoolFormula;

use BoolFormula as B;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("clause {clause} has width {width}, expected 3")]
    WidthNot3 { clause: usize, width: usize },
    #[error("layout mismatch: expected {expected}, found {found}")]
    LayoutMismatch { expected: String, found: String },
    #[error("{bits} index bits cannot address {needed} slots")]
    IndexTooNarrow { bits: usize, needed: usize },
    #[error("{n} free variables exceed the exhaustive limit {limit}")]
    TooManyVariables { n: usize, limit: usize },
    #[error("circuit cannot be encoded: {0}")]
    Unencodable(String),
}

pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

// ---------------------------------------------------------------------------
// Formula helpers

/// The constant true, written `(and)`.
pub fn tt() -> BoolFormula {
    B::And(vec![])
}

/// The constant false, written `(or)`.
pub fn ff() -> BoolFormula {
    B::Or(vec![])
}

pub fn konst(b: bool) -> BoolFormula {
    if b {
        tt()
    } else {
        ff()
    }
}

pub fn as_const(f: &BoolFormula) -> Option<bool> {
    match f {
        B::And(cs) if cs.is_empty() => Some(true),
        B::Or(cs) if cs.is_empty() => Some(false),
        _ => None,
    }
}

/// `(x ∧ y) ∨ (¬x ∧ ¬y)`
pub fn iff(x: BoolFormula, y: BoolFormula) -> BoolFormula {
    B::Or(vec![B::And(vec![x.clone(), y.clone()]), B::And(vec![B::not(x), B::not(y)])])
}

/// `¬a ∨ b`
pub fn implies(a: BoolFormula, b: BoolFormula) -> BoolFormula {
    B::Or(vec![B::not(a), b])
}

/// One simplification step at the root, assuming simplified children.
fn fold(f: BoolFormula) -> BoolFormula {
    match f {
        B::Var(_) => f,
        B::Not(a) => match as_const(&a) {
            Some(b) => konst(!b),
            None => B::Not(a),
        },
        B::And(cs) => {
            if cs.iter().any(|c| as_const(c) == Some(false)) {
                return ff();
            }
            let mut rest: Vec<_> = cs.into_iter().filter(|c| as_const(c) != Some(true)).collect();
            match rest.len() {
                0 => tt(),
                1 => rest.pop().unwrap(),
                _ => B::And(rest),
            }
        }
        B::Or(cs) => {
            if cs.iter().any(|c| as_const(c) == Some(true)) {
                return tt();
            }
            let mut rest: Vec<_> = cs.into_iter().filter(|c| as_const(c) != Some(false)).collect();
            match rest.len() {
                0 => ff(),
                1 => rest.pop().unwrap(),
                _ => B::Or(rest),
            }
        }
        B::Xor(cs) => {
            // True iff an even number of arguments is true: a true constant
            // flips the answer, a false one drops out.
            let mut flip = false;
            let mut rest = Vec::new();
            for c in cs {
                match as_const(&c) {
                    Some(true) => flip = !flip,
                    Some(false) => {}
                    None => rest.push(c),
                }
            }
            if rest.is_empty() {
                konst(!flip)
            } else if flip {
                B::not(B::Xor(rest))
            } else {
                B::Xor(rest)
            }
        }
    }
}

/// Rewrites `φ∧1 → φ`, `φ∨0 → φ`, `φ∧0 → 0`, `φ∨1 → 1` and negated
/// constants, collapsing one-argument conjunctions and disjunctions.
pub fn simplify_constants(f: &BoolFormula) -> BoolFormula {
    let node = match f {
        B::Var(_) => return f.clone(),
        B::Not(a) => B::Not(Box::new(simplify_constants(a))),
        B::And(cs) => B::And(cs.iter().map(simplify_constants).collect()),
        B::Or(cs) => B::Or(cs.iter().map(simplify_constants).collect()),
        B::Xor(cs) => B::Xor(cs.iter().map(simplify_constants).collect()),
    };
    fold(node)
}

pub fn formula_size(f: &BoolFormula) -> usize {
    match f {
        B::Var(_) => 1,
        B::Not(a) => 1 + formula_size(a),
        B::And(cs) | B::Or(cs) | B::Xor(cs) => 1 + cs.iter().map(formula_size).sum::<usize>(),
    }
}

pub fn formula_vars(f: &BoolFormula, out: &mut Vec<u32>) {
    match f {
        B::Var(i) => out.push(*i),
        B::Not(a) => formula_vars(a, out),
        B::And(cs) | B::Or(cs) | B::Xor(cs) => cs.iter().for_each(|c| formula_vars(c, out)),
    }
}

/// Evaluates 64 assignments at once; `lanes[i]` holds variable `i`.
pub fn eval_lanes(f: &BoolFormula, lanes: &[u64]) -> u64 {
    match f {
        B::Var(i) => lanes[*i as usize],
        B::Not(a) => !eval_lanes(a, lanes),
        B::And(cs) => cs.iter().fold(!0, |acc, c| if acc == 0 { 0 } else { acc & eval_lanes(c, lanes) }),
        B::Or(cs) => cs.iter().fold(0, |acc, c| if acc == !0 { !0 } else { acc | eval_lanes(c, lanes) }),
        B::Xor(cs) => !cs.iter().fold(0, |acc, c| acc ^ eval_lanes(c, lanes)),
    }
}

// Constant-folding constructors for the encoding transformers.

fn s_not(a: BoolFormula) -> BoolFormula {
    fold(B::not(a))
}

fn s_and(a: BoolFormula, b: BoolFormula) -> BoolFormula {
    fold(B::And(vec![a, b]))
}

fn s_or(a: BoolFormula, b: BoolFormula) -> BoolFormula {
    fold(B::Or(vec![a, b]))
}

fn s_any(cs: Vec<BoolFormula>) -> BoolFormula {
    fold(B::Or(cs.into_iter().filter(|c| as_const(c) != Some(false)).collect()))
}

fn s_mux(s: &BoolFormula, x: BoolFormula, y: BoolFormula) -> BoolFormula {
    match as_const(s) {
        Some(true) => x,
        Some(false) => y,
        None if x == y => x,
        None => s_or(s_and(s.clone(), x), s_and(s_not(s.clone()), y)),
    }
}

/// `bits = [j]`, with `bits` most significant first.
fn s_eq_const(bits: &[BoolFormula], j: usize) -> BoolFormula {
    let w = bits.len();
    if w < usize::BITS as usize && j >> w != 0 {
        return ff();
    }
    let lits = bits
        .iter()
        .enumerate()
        .map(|(k, b)| if (j >> (w - 1 - k)) & 1 == 1 { b.clone() } else { s_not(b.clone()) })
        .collect();
    fold(B::And(lits))
}

fn const_bits(j: usize, w: usize) -> Vec<BoolFormula> {
    (0..w).map(|k| konst((j >> (w - 1 - k)) & 1 == 1)).collect()
}

fn bool_bits(j: usize, w: usize) -> Vec<bool> {
    (0..w).map(|k| (j >> (w - 1 - k)) & 1 == 1).collect()
}

// ---------------------------------------------------------------------------
// Layouts and records

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub gates: usize,
    pub vars: usize,
    pub index_bits: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Kind,
    Left,
    Right,
    ConstLeft,
    ConstRight,
}

impl Layout {
    /// Smallest index width addressing every gate and variable.
    pub fn new(gates: usize, vars: usize) -> Self {
        Layout { gates, vars, index_bits: ceil_log2(gates.max(vars).max(2)) }
    }

    pub fn with_index_bits(gates: usize, vars: usize, index_bits: usize) -> Result<Self, EncodeError> {
        let l = Layout { gates, vars, index_bits };
        l.check()?;
        Ok(l)
    }

    pub fn check(&self) -> Result<(), EncodeError> {
        let needed = self.gates.max(self.vars);
        if self.index_bits < usize::BITS as usize && needed > 1 << self.index_bits {
            return Err(EncodeError::IndexTooNarrow { bits: self.index_bits, needed });
        }
        if self.gates == 0 {
            return Err(EncodeError::LayoutMismatch { expected: "at least one gate".into(), found: "0".into() });
        }
        Ok(())
    }

    pub fn record_bits(&self) -> usize {
        4 + 2 * self.index_bits
    }

    pub fn total_bits(&self) -> usize {
        self.gates * self.record_bits()
    }

    pub fn field(&self, gate: usize, f: Field) -> Range<usize> {
        let base = gate * self.record_bits();
        let w = self.index_bits;
        match f {
            Field::Kind => base..base + 2,
            Field::Left => base + 2..base + 2 + w,
            Field::Right => base + 2 + w..base + 2 + 2 * w,
            Field::ConstLeft => base + 2 + 2 * w..base + 3 + 2 * w,
            Field::ConstRight => base + 3 + 2 * w..base + 4 + 2 * w,
        }
    }

    fn with_gates(self, gates: usize) -> Self {
        Layout { gates, ..self }
    }

    fn with_vars(self, vars: usize) -> Self {
        Layout { vars, ..self }
    }
}

impl std::fmt::Display for Layout {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} gates, {} vars, {} index bits", self.gates, self.vars, self.index_bits)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RecordKind {
    Leaf,
    Add,
    Sub,
    Mul,
}

impl RecordKind {
    fn tag(self) -> usize {
        match self {
            RecordKind::Leaf => 0,
            RecordKind::Add => 1,
            RecordKind::Sub => 2,
            RecordKind::Mul => 3,
        }
    }

    fn from_tag(t: usize) -> Self {
        [RecordKind::Leaf, RecordKind::Add, RecordKind::Sub, RecordKind::Mul][t & 3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Record {
    pub kind: RecordKind,
    pub a: usize,
    pub b: usize,
    pub ca: bool,
    pub cb: bool,
}

impl Record {
    pub fn var(i: usize) -> Self {
        Record { kind: RecordKind::Leaf, a: i, b: 0, ca: false, cb: false }
    }

    pub fn constant(v: bool) -> Self {
        Record { kind: RecordKind::Leaf, a: 0, b: 0, ca: true, cb: v }
    }

    /// Binary gate; `None` stands for the constant 1.
    pub fn gate(kind: RecordKind, a: Option<usize>, b: Option<usize>) -> Self {
        Record { kind, a: a.unwrap_or(0), b: b.unwrap_or(0), ca: a.is_none(), cb: b.is_none() }
    }

    /// `1 * prev`, used to pad a circuit without changing its value.
    pub fn identity(prev: usize) -> Self {
        Record::gate(RecordKind::Mul, None, Some(prev))
    }
}

/// Value of the last record over `F_p` at `point` (variable `i` is
/// `point[i]`; missing variables read 0).
pub fn evaluate_records(records: &[Record], point: &[u64], p: Prime) -> u64 {
    let q = p.get() as u128;
    let mut vals: Vec<u64> = Vec::with_capacity(records.len());
    for (i, r) in records.iter().enumerate() {
        let v = if r.kind == RecordKind::Leaf {
            if r.ca {
                r.cb as u64
            } else {
                point.get(r.a).map_or(0, |&x| x % p.get())
            }
        } else {
            let op = |j: usize, c: bool| -> u128 {
                if c {
                    1
                } else if j < i {
                    vals[j] as u128
                } else {
                    0
                }
            };
            let (x, y) = (op(r.a, r.ca), op(r.b, r.cb));
            (match r.kind {
                RecordKind::Add => (x + y) % q,
                RecordKind::Sub => (x + q - y) % q,
                _ => (x * y) % q,
            }) as u64
        };
        vals.push(v);
    }
    *vals.last().unwrap_or(&0)
}

pub fn records_to_bits(records: &[Record], layout: Layout) -> Result<Vec<bool>, EncodeError> {
    layout.check()?;
    if records.len() != layout.gates {
        return Err(EncodeError::LayoutMismatch {
            expected: format!("{} gates", layout.gates),
            found: records.len().to_string(),
        });
    }
    let w = layout.index_bits;
    let mut out = Vec::with_capacity(layout.total_bits());
    for r in records {
        for v in [r.a, r.b] {
            if w < usize::BITS as usize && v >> w != 0 {
                return Err(EncodeError::IndexTooNarrow { bits: w, needed: v + 1 });
            }
        }
        out.extend(bool_bits(r.kind.tag(), 2));
        out.extend(bool_bits(r.a, w));
        out.extend(bool_bits(r.b, w));
        out.push(r.ca);
        out.push(r.cb);
    }
    Ok(out)
}

pub fn decode_records(bits: &[bool], layout: Layout) -> Result<Vec<Record>, EncodeError> {
    if bits.len() != layout.total_bits() {
        return Err(EncodeError::LayoutMismatch {
            expected: format!("{} bits", layout.total_bits()),
            found: bits.len().to_string(),
        });
    }
    let num = |r: Range<usize>| bits[r].iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
    Ok((0..layout.gates)
        .map(|i| Record {
            kind: RecordKind::from_tag(num(layout.field(i, Field::Kind))),
            a: num(layout.field(i, Field::Left)),
            b: num(layout.field(i, Field::Right)),
            ca: bits[layout.field(i, Field::ConstLeft).start],
            cb: bits[layout.field(i, Field::ConstRight).start],
        })
        .collect())
}

/// Compiles a division-free circuit into constant-free records. `X(i)` gets
/// index `i - 1` and `F(j)` gets `n_x + j - 1`; integer constants are built
/// from 1 by doubling.
pub fn encode_circuit(c: &Circuit, n_x: usize) -> Result<Vec<Record>, EncodeError> {
    struct Enc {
        recs: Vec<Record>,
        one: Option<usize>,
        zero: Option<usize>,
    }
    impl Enc {
        fn push(&mut self, r: Record) -> usize {
            self.recs.push(r);
            self.recs.len() - 1
        }
        fn zero(&mut self) -> usize {
            match self.zero {
                Some(z) => z,
                None => {
                    let z = self.push(Record::constant(false));
                    self.zero = Some(z);
                    z
                }
            }
        }
        fn one(&mut self) -> usize {
            match self.one {
                Some(z) => z,
                None => {
                    let z = self.push(Record::constant(true));
                    self.one = Some(z);
                    z
                }
            }
        }
        /// `k * g` for `k >= 1`, by double-and-add.
        fn times(&mut self, k: u64, g: usize) -> usize {
            let mut acc = g;
            for bit in (0..63 - k.leading_zeros()).rev() {
                acc = self.push(Record::gate(RecordKind::Add, Some(acc), Some(acc)));
                if (k >> bit) & 1 == 1 {
                    acc = self.push(Record::gate(RecordKind::Add, Some(acc), Some(g)));
                }
            }
            acc
        }
        fn signed(&mut self, k: i64, g: usize) -> (bool, usize) {
            if k == 0 {
                (true, self.zero())
            } else {
                (k > 0, self.times(k.unsigned_abs(), g))
            }
        }
    }
    let mut e = Enc { recs: Vec::new(), one: None, zero: None };
    let reach = c.reachable();
    let mut at: Vec<usize> = vec![usize::MAX; c.len()];
    for (i, node) in c.nodes().iter().enumerate() {
        if !reach[i] {
            continue;
        }
        let r = |id: &NodeId| at[id.idx()];
        at[i] = match node {
            Node::Const(k) => {
                let one = e.one();
                match e.signed(*k, one) {
                    (true, g) => g,
                    (false, g) => {
                        let z = e.zero();
                        e.push(Record::gate(RecordKind::Sub, Some(z), Some(g)))
                    }
                }
            }
            Node::Var(VarId::X(j)) => e.push(Record::var(*j as usize - 1)),
            Node::Var(VarId::F(j)) => e.push(Record::var(n_x + *j as usize - 1)),
            Node::Lin(ts) => {
                let mut acc: Option<usize> = None;
                for (k, ch) in ts {
                    let (pos, t) = e.signed(*k, r(ch));
                    acc = Some(match acc {
                        None if pos => t,
                        None => {
                            let z = e.zero();
                            e.push(Record::gate(RecordKind::Sub, Some(z), Some(t)))
                        }
                        Some(a) => {
                            e.push(Record::gate(if pos { RecordKind::Add } else { RecordKind::Sub }, Some(a), Some(t)))
                        }
                    });
                }
                match acc {
                    Some(a) => a,
                    None => e.zero(),
                }
            }
            Node::Mul(fs) => {
                let mut it = fs.iter();
                match it.next() {
                    None => e.one(),
                    Some(f0) => {
                        let mut acc = r(f0);
                        for f in it {
                            acc = e.push(Record::gate(RecordKind::Mul, Some(acc), Some(r(f))));
                        }
                        acc
                    }
                }
            }
            Node::Div(..) => return Err(EncodeError::Unencodable("division gate".into())),
        };
    }
    let out = c.output().map_err(|e| EncodeError::Unencodable(e.to_string()))?;
    let o = at[out.idx()];
    if o + 1 != e.recs.len() {
        e.push(Record::identity(o));
    }
    Ok(e.recs)
}

// ---------------------------------------------------------------------------
// Bit encodings

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Circuit(Layout),
    /// 3CNF with `n` variables and `m` clauses.
    Cnf {
        n: usize,
        m: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Gate { gate: usize, field: Field },
    Index { clause: usize, literal: usize },
    Sign { clause: usize, literal: usize },
}

/// Each bit is a constant, a propositional variable, or a formula.
#[derive(Debug, Clone, PartialEq)]
pub struct BitEncoding {
    pub shape: Shape,
    pub bits: Vec<BoolFormula>,
}

/// Names for propositional variables, numbered from 1.
#[derive(Debug, Clone, Default)]
pub struct VarPool {
    names: Vec<String>,
}

impl VarPool {
    pub fn new() -> Self {
        VarPool::default()
    }

    pub fn fresh(&mut self, name: impl Into<String>) -> u32 {
        self.names.push(name.into());
        self.names.len() as u32
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: u32) -> Option<&str> {
        self.names.get(id as usize - 1).map(String::as_str)
    }
}

impl BitEncoding {
    pub fn from_records(records: &[Record], layout: Layout) -> Result<Self, EncodeError> {
        let bits = records_to_bits(records, layout)?.into_iter().map(konst).collect();
        Ok(BitEncoding { shape: Shape::Circuit(layout), bits })
    }

    /// A circuit encoding whose every bit is a fresh variable.
    pub fn fresh(layout: Layout, pool: &mut VarPool, prefix: &str) -> Result<Self, EncodeError> {
        layout.check()?;
        let bits = (0..layout.total_bits()).map(|i| B::Var(pool.fresh(format!("{prefix}{i}")))).collect();
        Ok(BitEncoding { shape: Shape::Circuit(layout), bits })
    }

    /// Replaces the bits at `positions` by fresh variables.
    pub fn free_bits(&self, positions: &[usize], pool: &mut VarPool, prefix: &str) -> Self {
        let mut out = self.clone();
        for &i in positions {
            out.bits[i] = B::Var(pool.fresh(format!("{prefix}{i}")));
        }
        out
    }

    pub fn layout(&self) -> Option<Layout> {
        match self.shape {
            Shape::Circuit(l) => Some(l),
            Shape::Cnf { .. } => None,
        }
    }

    pub fn roles(&self) -> Vec<(Role, Range<usize>)> {
        match self.shape {
            Shape::Circuit(l) => (0..l.gates)
                .flat_map(|gate| {
                    [Field::Kind, Field::Left, Field::Right, Field::ConstLeft, Field::ConstRight]
                        .map(|field| (Role::Gate { gate, field }, l.field(gate, field)))
                })
                .collect(),
            Shape::Cnf { n, m } => {
                let w = ceil_log2(n);
                let mut out = Vec::new();
                for clause in 0..m {
                    for literal in 0..3 {
                        let base = (clause * 3 + literal) * (w + 1);
                        out.push((Role::Index { clause, literal }, base..base + w));
                        out.push((Role::Sign { clause, literal }, base + w..base + w + 1));
                    }
                }
                out
            }
        }
    }

    pub fn to_bools(&self) -> Option<Vec<bool>> {
        self.bits.iter().map(as_const).collect()
    }

    pub fn variables(&self) -> Vec<u32> {
        let mut v = Vec::new();
        for b in &self.bits {
            formula_vars(b, &mut v);
        }
        v.sort_unstable();
        v.dedup();
        v
    }

    fn circuit_layout(&self) -> Result<Layout, EncodeError> {
        self.layout().ok_or_else(|| EncodeError::LayoutMismatch {
            expected: "circuit encoding".into(),
            found: "clause encoding".into(),
        })
    }

    fn field(&self, gate: usize, f: Field) -> Vec<BoolFormula> {
        let l = self.layout().expect("circuit encoding");
        self.bits[l.field(gate, f)].to_vec()
    }

    fn bit(&self, gate: usize, f: Field) -> BoolFormula {
        self.field(gate, f).pop().expect("one bit")
    }

    fn is_leaf(&self, gate: usize) -> BoolFormula {
        let k = self.field(gate, Field::Kind);
        s_and(s_not(k[0].clone()), s_not(k[1].clone()))
    }

    fn records(&self) -> Vec<Vec<BoolFormula>> {
        let l = self.layout().expect("circuit encoding");
        self.bits.chunks(l.record_bits()).map(<[BoolFormula]>::to_vec).collect()
    }

    fn from_parts(layout: Layout, records: Vec<Vec<BoolFormula>>) -> Self {
        debug_assert_eq!(records.len(), layout.gates);
        BitEncoding { shape: Shape::Circuit(layout), bits: records.concat() }
    }
}

fn record_formulas(
    kind: [BoolFormula; 2],
    a: Vec<BoolFormula>,
    b: Vec<BoolFormula>,
    ca: BoolFormula,
    cb: BoolFormula,
) -> Vec<BoolFormula> {
    let mut v: Vec<BoolFormula> = kind.into();
    v.extend(a);
    v.extend(b);
    v.push(ca);
    v.push(cb);
    v
}

fn const_record(r: Record, w: usize) -> Vec<BoolFormula> {
    let [k1, k0] = [konst(r.kind.tag() >> 1 == 1), konst(r.kind.tag() & 1 == 1)];
    record_formulas([k1, k0], const_bits(r.a, w), const_bits(r.b, w), konst(r.ca), konst(r.cb))
}

/// Pads with `1 * prev` records up to `gates`.
pub fn pad_encoding(enc: &BitEncoding, gates: usize) -> Result<BitEncoding, EncodeError> {
    let l = enc.circuit_layout()?;
    let target = l.with_gates(gates.max(l.gates));
    target.check()?;
    let mut recs = enc.records();
    for i in l.gates..target.gates {
        recs.push(const_record(Record::identity(i - 1), l.index_bits));
    }
    Ok(BitEncoding::from_parts(target, recs))
}

/// `[1 - C]`: one subtraction record appended.
pub fn one_minus(enc: &BitEncoding) -> Result<BitEncoding, EncodeError> {
    let l = enc.circuit_layout()?;
    let target = l.with_gates(l.gates + 1);
    target.check()?;
    let mut recs = enc.records();
    recs.push(const_record(Record::gate(RecordKind::Sub, None, Some(l.gates - 1)), l.index_bits));
    Ok(BitEncoding::from_parts(target, recs))
}

/// Variable leaves whose index is in `vars` become the constant 0.
pub fn substitute_zero(enc: &BitEncoding, vars: &[usize]) -> Result<BitEncoding, EncodeError> {
    let l = enc.circuit_layout()?;
    let mut recs = enc.records();
    for (i, rec) in recs.iter_mut().enumerate() {
        let a = enc.field(i, Field::Left);
        let ca = enc.bit(i, Field::ConstLeft);
        let hit =
            s_and(s_and(enc.is_leaf(i), s_not(ca.clone())), s_any(vars.iter().map(|&j| s_eq_const(&a, j)).collect()));
        let cb = enc.bit(i, Field::ConstRight);
        let n = rec.len();
        rec[n - 2] = s_or(ca, hit.clone());
        rec[n - 1] = s_and(cb, s_not(hit));
    }
    Ok(BitEncoding::from_parts(l, recs))
}

/// `[C(p)]`: every variable leaf `x_a` becomes the constant `p[a]`
/// (indices past `p` read 0).
pub fn plug_constants(enc: &BitEncoding, p: &[BoolFormula]) -> Result<BitEncoding, EncodeError> {
    let l = enc.circuit_layout()?;
    let mut recs = enc.records();
    for (i, rec) in recs.iter_mut().enumerate() {
        let a = enc.field(i, Field::Left);
        let ca = enc.bit(i, Field::ConstLeft);
        let hit = s_and(enc.is_leaf(i), s_not(ca.clone()));
        let val = s_any(p.iter().enumerate().map(|(j, pj)| s_and(s_eq_const(&a, j), pj.clone())).collect());
        let cb = enc.bit(i, Field::ConstRight);
        let n = rec.len();
        rec[n - 2] = s_or(ca, hit.clone());
        rec[n - 1] = s_mux(&hit, val, cb);
    }
    Ok(BitEncoding::from_parts(l, recs))
}

/// `[C(π(x))]`: a variable leaf `x_a` with `a < π.len()` reads `x_{π(a)}`.
pub fn permute_vars(enc: &BitEncoding, pi: &[usize]) -> Result<BitEncoding, EncodeError> {
    let l = enc.circuit_layout()?;
    if pi.iter().enumerate().all(|(i, &j)| i == j) {
        return Ok(enc.clone());
    }
    let w = l.index_bits;
    let mut recs = enc.records();
    for (i, rec) in recs.iter_mut().enumerate() {
        let a = enc.field(i, Field::Left);
        let hit = s_and(enc.is_leaf(i), s_not(enc.bit(i, Field::ConstLeft)));
        let eqs: Vec<BoolFormula> = (0..pi.len()).map(|j| s_eq_const(&a, j)).collect();
        for k in 0..w {
            let image = s_any(
                pi.iter()
                    .enumerate()
                    .filter(|&(_, &t)| (t >> (w - 1 - k)) & 1 == 1)
                    .map(|(j, _)| eqs[j].clone())
                    .collect(),
            );
            let in_range = s_any(eqs.clone());
            rec[2 + k] = s_mux(&s_and(hit.clone(), in_range), image, a[k].clone());
        }
    }
    Ok(BitEncoding::from_parts(l, recs))
}

fn add_const_bits(bits: &[BoolFormula], c: usize) -> Vec<BoolFormula> {
    let w = bits.len();
    let mut out = vec![ff(); w];
    let mut carry = ff();
    for k in (0..w).rev() {
        let cb = (c >> (w - 1 - k)) & 1 == 1;
        let x = bits[k].clone();
        if cb {
            // x + 1 + carry
            out[k] = s_mux(&carry, x.clone(), s_not(x.clone()));
            carry = s_or(x, carry);
        } else {
            out[k] = s_mux(&carry, s_not(x.clone()), x.clone());
            carry = s_and(x, carry);
        }
    }
    out
}

/// Adds `offset` to both child indices of every non-leaf record.
pub fn shift_gates(enc: &BitEncoding, offset: usize) -> Result<BitEncoding, EncodeError> {
    let l = enc.circuit_layout()?;
    let w = l.index_bits;
    let mut recs = enc.records();
    for (i, rec) in recs.iter_mut().enumerate() {
        let leaf = enc.is_leaf(i);
        for (f, start) in [(Field::Left, 2), (Field::Right, 2 + w)] {
            let old = enc.field(i, f);
            let new = add_const_bits(&old, offset);
            for k in 0..w {
                rec[start + k] = s_mux(&leaf, old[k].clone(), new[k].clone());
            }
        }
    }
    Ok(BitEncoding::from_parts(l, recs))
}

/// Variable leaves `x_j` with `targets[j] = Some(t)` become `1 * gate t`.
pub fn redirect_vars(enc: &BitEncoding, targets: &[Option<usize>]) -> Result<BitEncoding, EncodeError> {
    let l = enc.circuit_layout()?;
    let w = l.index_bits;
    let mut recs = enc.records();
    for (i, rec) in recs.iter_mut().enumerate() {
        let a = enc.field(i, Field::Left);
        let eqs: Vec<(BoolFormula, usize)> =
            targets.iter().enumerate().filter_map(|(j, t)| t.map(|t| (s_eq_const(&a, j), t))).collect();
        let hit = s_and(
            s_and(enc.is_leaf(i), s_not(enc.bit(i, Field::ConstLeft))),
            s_any(eqs.iter().map(|(e, _)| e.clone()).collect()),
        );
        if as_const(&hit) == Some(false) {
            continue;
        }
        rec[0] = s_or(rec[0].clone(), hit.clone());
        rec[1] = s_or(rec[1].clone(), hit.clone());
        for k in 0..w {
            let t = s_any(eqs.iter().filter(|(_, t)| (t >> (w - 1 - k)) & 1 == 1).map(|(e, _)| e.clone()).collect());
            rec[2 + w + k] = s_mux(&hit, t, rec[2 + w + k].clone());
        }
        rec[2 + 2 * w] = s_or(rec[2 + 2 * w].clone(), hit.clone());
        rec[3 + 2 * w] = s_and(rec[3 + 2 * w].clone(), s_not(hit));
    }
    Ok(BitEncoding::from_parts(l, recs))
}

/// Records of `first` followed by those of `second`, which must already be
/// shifted past `first`.
pub fn concat_encodings(first: &BitEncoding, second: &BitEncoding, vars: usize) -> Result<BitEncoding, EncodeError> {
    let (a, b) = (first.circuit_layout()?, second.circuit_layout()?);
    if a.index_bits != b.index_bits {
        return Err(EncodeError::LayoutMismatch {
            expected: format!("{} index bits", a.index_bits),
            found: b.index_bits.to_string(),
        });
    }
    let l = Layout { gates: a.gates + b.gates, vars, index_bits: a.index_bits };
    l.check()?;
    let mut recs = first.records();
    recs.extend(second.records());
    Ok(BitEncoding::from_parts(l, recs))
}

/// Re-declares the variable count without touching any bit.
pub fn with_vars(enc: &BitEncoding, vars: usize) -> Result<BitEncoding, EncodeError> {
    let l = enc.circuit_layout()?.with_vars(vars);
    l.check()?;
    Ok(BitEncoding { shape: Shape::Circuit(l), bits: enc.bits.clone() })
}

// ---------------------------------------------------------------------------
// Clause encodings and Truth_bool

/// Repeats the last literal of each shorter clause until it has width 3.
pub fn pad_to_width3(cnf: &CnfFormula) -> CnfFormula {
    let clauses = cnf
        .clauses
        .iter()
        .map(|c| {
            let mut c = c.clone();
            while !c.is_empty() && c.len() < 3 {
                c.push(*c.last().unwrap());
            }
            c
        })
        .collect();
    CnfFormula::new(cnf.n_vars, clauses)
}

/// Per literal: the index `i - 1` in `⌈log₂ n⌉` bits, then the sign bit
/// (1 for a positive literal); clauses in order.
pub fn encode_clause_bits(cnf: &CnfFormula) -> Result<BitEncoding, EncodeError> {
    let n = cnf.n_vars as usize;
    let w = ceil_log2(n);
    let mut bits = Vec::with_capacity(cnf.clauses.len() * 3 * (w + 1));
    for (i, c) in cnf.clauses.iter().enumerate() {
        if c.len() != 3 {
            return Err(EncodeError::WidthNot3 { clause: i + 1, width: c.len() });
        }
        for &l in c {
            bits.extend(const_bits(l.unsigned_abs() as usize - 1, w));
            bits.push(konst(l > 0));
        }
    }
    Ok(BitEncoding { shape: Shape::Cnf { n, m: cnf.clauses.len() }, bits })
}

/// A clause encoding whose every bit is a fresh variable.
pub fn fresh_clause_bits(n: usize, m: usize, pool: &mut VarPool) -> BitEncoding {
    let w = ceil_log2(n);
    let mut bits = Vec::new();
    for i in 1..=m {
        for j in 1..=3 {
            for k in 1..=w {
                bits.push(B::Var(pool.fresh(format!("q{i}_{j}_{k}"))));
            }
            bits.push(B::Var(pool.fresh(format!("s{i}_{j}"))));
        }
    }
    BitEncoding { shape: Shape::Cnf { n, m }, bits }
}

/// `⋀_i ⋁_{j=1}^{3} ⋁_{i'=1}^{n} (q_{ij} = [i'] ∧ (p_{i'} ↔ s_{ij}))`,
/// exactly as displayed, with no simplification.
pub fn truth_bool_over(enc: &BitEncoding, p: &[BoolFormula]) -> Result<BoolFormula, EncodeError> {
    let Shape::Cnf { n, m } = enc.shape else {
        return Err(EncodeError::LayoutMismatch {
            expected: "clause encoding".into(),
            found: "circuit encoding".into(),
        });
    };
    if p.len() != n {
        return Err(EncodeError::LayoutMismatch {
            expected: format!("{n} assignment variables"),
            found: p.len().to_string(),
        });
    }
    let w = ceil_log2(n);
    let clauses = (0..m)
        .map(|ci| {
            B::Or(
                (0..3)
                    .map(|j| {
                        let base = (ci * 3 + j) * (w + 1);
                        let q = &enc.bits[base..base + w];
                        let s = enc.bits[base + w].clone();
                        B::Or(
                            (0..n)
                                .map(|i| {
                                    let eq = B::And(
                                        q.iter().zip(const_bits(i, w)).map(|(qk, ik)| iff(qk.clone(), ik)).collect(),
                                    );
                                    B::And(vec![eq, iff(p[i].clone(), s.clone())])
                                })
                                .collect(),
                        )
                    })
                    .collect(),
            )
        })
        .collect();
    Ok(B::And(clauses))
}

#[derive(Debug, Clone)]
pub struct TruthBool {
    pub formula: BoolFormula,
    /// `p_1..p_n` are variables `1..n`.
    pub p: Vec<u32>,
    pub encoding: BitEncoding,
    pub pool: VarPool,
}

/// `Truth_bool(q, p)` over fresh variables: `p_1..p_n` first, then the
/// encoding bits in layout order.
pub fn build_truth_bool(n: usize, m: usize) -> TruthBool {
    let mut pool = VarPool::new();
    let p: Vec<u32> = (1..=n).map(|i| pool.fresh(format!("p{i}"))).collect();
    let encoding = fresh_clause_bits(n, m, &mut pool);
    let pv: Vec<BoolFormula> = p.iter().map(|&i| B::Var(i)).collect();
    let formula = truth_bool_over(&encoding, &pv).expect("shapes agree");
    TruthBool { formula, p, encoding, pool }
}

/// `Truth_bool([φ], p)` for a fixed 3CNF; `p_i` is variable `i`.
pub fn truth_bool_fixed(cnf: &CnfFormula) -> Result<BoolFormula, EncodeError> {
    let enc = encode_clause_bits(cnf)?;
    let p: Vec<BoolFormula> = (1..=cnf.n_vars).map(B::Var).collect();
    truth_bool_over(&enc, &p)
}

/// The records computing `Q_i` for every clause: eight per clause, three
/// leaves, three literal gates (`1 - x` or `1 * x` by sign) and two
/// products. Clause `i`'s value sits at record `8i + 7`.
pub fn clause_records(phi: &BitEncoding, index_bits: usize) -> Result<BitEncoding, EncodeError> {
    let Shape::Cnf { n, m } = phi.shape else {
        return Err(EncodeError::LayoutMismatch {
            expected: "clause encoding".into(),
            found: "circuit encoding".into(),
        });
    };
    let w = index_bits;
    let l = Layout::with_index_bits(8 * m, n, w)?;
    let qw = ceil_log2(n);
    if qw > w {
        return Err(EncodeError::IndexTooNarrow { bits: w, needed: n });
    }
    let mut recs = Vec::with_capacity(8 * m);
    for ci in 0..m {
        let base = 8 * ci;
        let lit = |j: usize| (ci * 3 + j) * (qw + 1);
        for j in 0..3 {
            let mut a = vec![ff(); w - qw];
            a.extend(phi.bits[lit(j)..lit(j) + qw].iter().cloned());
            recs.push(record_formulas([ff(), ff()], a, const_bits(0, w), ff(), ff()));
        }
        for j in 0..3 {
            let s = phi.bits[lit(j) + qw].clone();
            recs.push(record_formulas([tt(), s_not(s)], const_bits(0, w), const_bits(base + j, w), tt(), ff()));
        }
        recs.push(const_record(Record::gate(RecordKind::Mul, Some(base + 3), Some(base + 4)), w));
        recs.push(const_record(Record::gate(RecordKind::Mul, Some(base + 6), Some(base + 5)), w));
    }
    Ok(BitEncoding::from_parts(l, recs))
}

#[cfg(test)]
mod tests;
