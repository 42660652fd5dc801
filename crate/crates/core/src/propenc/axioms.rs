//! `Proof_IPS` and the PIT axioms, with copies of `K` given by auxiliary
//! gate variables and definitional clauses.

use super::{
    as_const, clause_records, concat_encodings, eval_lanes, formula_vars, iff, implies, konst, one_minus, pad_encoding,
    permute_vars, plug_constants, redirect_vars, shift_gates, substitute_zero, with_vars, BitEncoding, EncodeError,
    KCircuit, KNode, Layout, Shape, VarPool,
};
use crate::cnf::CnfFormula;
use crate::frege::BoolFormula;

use BoolFormula as B;

/// Largest number of free variables checked exhaustively.
pub const TAUTOLOGY_LIMIT: usize = 20;

/// One copy `K^(i)`: a variable per node, and the formulas its inputs are
/// set to.
#[derive(Debug, Clone, PartialEq)]
pub struct KCopy {
    pub node_vars: Vec<u32>,
    pub inputs: Vec<BoolFormula>,
    pub output_var: u32,
}

/// A formula `(⋀ α) → ω` whose antecedents include the K-clauses and input
/// bindings of every copy.
#[derive(Debug, Clone, PartialEq)]
pub struct KInstance {
    pub formula: BoolFormula,
    pub copies: Vec<KCopy>,
    /// Variables outside every copy of `K`.
    pub free: Vec<u32>,
}

/// Definitional clauses `k_g ↔ (k_l op k_r)` and bindings
/// `k_{in,i} ↔ ψ_i` for a fresh copy of `k`.
fn instantiate(
    k: &KCircuit,
    inputs: Vec<BoolFormula>,
    pool: &mut VarPool,
    tag: usize,
) -> Result<(KCopy, Vec<BoolFormula>), EncodeError> {
    if inputs.len() != k.inputs {
        return Err(EncodeError::LayoutMismatch {
            expected: format!("{} K inputs", k.inputs),
            found: inputs.len().to_string(),
        });
    }
    let node_vars: Vec<u32> = (0..k.nodes.len()).map(|g| pool.fresh(format!("k{tag}_{g}"))).collect();
    let v = |i: usize| B::Var(node_vars[i]);
    let mut clauses = Vec::with_capacity(k.nodes.len());
    for (g, n) in k.nodes.iter().enumerate() {
        clauses.push(match *n {
            KNode::Input(i) => iff(v(g), inputs[i].clone()),
            KNode::Const(b) => iff(v(g), konst(b)),
            KNode::Not(a) => iff(v(g), B::not(v(a))),
            KNode::And(a, b) => iff(v(g), B::And(vec![v(a), v(b)])),
            KNode::Or(a, b) => iff(v(g), B::Or(vec![v(a), v(b)])),
        });
    }
    let output_var = node_vars[k.output];
    Ok((KCopy { node_vars, inputs, output_var }, clauses))
}

fn free_vars(bits: &[&BitEncoding], extra: &[u32]) -> Vec<u32> {
    let mut v: Vec<u32> = extra.to_vec();
    for e in bits {
        v.extend(e.variables());
    }
    v.sort_unstable();
    v.dedup();
    v
}

fn check_width(k: &KCircuit, l: Layout) -> Result<(), EncodeError> {
    k.validate()?;
    if k.inputs != l.total_bits() {
        return Err(EncodeError::LayoutMismatch {
            expected: format!("K over {} bits ({l})", l.total_bits()),
            found: k.inputs.to_string(),
        });
    }
    Ok(())
}

fn check_layout(enc: &BitEncoding, want: Layout) -> Result<(), EncodeError> {
    match enc.layout() {
        Some(l) if l == want => Ok(()),
        other => Err(EncodeError::LayoutMismatch {
            expected: want.to_string(),
            found: other.map_or("clause encoding".into(), |l| l.to_string()),
        }),
    }
}

/// Layout of the circuits `K` reads in `Proof_IPS` for a certificate with
/// `c_gates` records over `n` variables and `m` placeholders.
pub fn proof_ips_layout(n: usize, m: usize, c_gates: usize, index_bits: usize) -> Result<Layout, EncodeError> {
    Layout::with_index_bits(8 * m + c_gates + 1, n, index_bits)
}

/// The encodings `[C(x, 0)]` and `[1 - C(x, Q^φ(x))]`, both padded to the
/// common layout and declared over the `n` variables of `φ`.
pub fn proof_ips_inputs(c: &BitEncoding, phi: &BitEncoding) -> Result<(BitEncoding, BitEncoding), EncodeError> {
    let Shape::Cnf { n, m } = phi.shape else {
        return Err(EncodeError::LayoutMismatch {
            expected: "clause encoding".into(),
            found: "circuit encoding".into(),
        });
    };
    let lc = c.layout().ok_or_else(|| EncodeError::LayoutMismatch {
        expected: "circuit encoding".into(),
        found: "clause encoding".into(),
    })?;
    if lc.vars != n + m {
        return Err(EncodeError::LayoutMismatch {
            expected: format!("{} variables", n + m),
            found: lc.vars.to_string(),
        });
    }
    let target = proof_ips_layout(n, m, lc.gates, lc.index_bits)?;
    let placeholders: Vec<usize> = (n..n + m).collect();
    let zero = with_vars(&pad_encoding(&substitute_zero(c, &placeholders)?, target.gates)?, n)?;
    let q = clause_records(phi, lc.index_bits)?;
    let shifted = shift_gates(&with_vars(c, n + m)?, 8 * m)?;
    let targets: Vec<Option<usize>> = (0..n + m).map(|j| (j >= n).then(|| 8 * (j - n) + 7)).collect();
    let body = redirect_vars(&shifted, &targets)?;
    let full = one_minus(&concat_encodings(&q, &body, n)?)?;
    debug_assert_eq!(full.layout(), Some(target));
    Ok((zero, full))
}

/// `(K^(1)-clauses ∧ bindings to [C(x,0)] ∧ K^(2)-clauses ∧ bindings to
/// [1 - C(x, Q^φ(x))]) → k^(1)_out ∧ k^(2)_out`.
pub fn build_proof_ips(
    k: &KCircuit,
    c: &BitEncoding,
    phi: &BitEncoding,
    pool: &mut VarPool,
) -> Result<KInstance, EncodeError> {
    let (zero, full) = proof_ips_inputs(c, phi)?;
    check_width(k, full.layout().expect("circuit"))?;
    let free = free_vars(&[c, phi], &[]);
    let (c1, mut ante) = instantiate(k, zero.bits, pool, 1)?;
    let (c2, cl2) = instantiate(k, full.bits, pool, 2)?;
    ante.extend(cl2);
    let formula = implies(B::And(ante), B::And(vec![B::Var(c1.output_var), B::Var(c2.output_var)]));
    Ok(KInstance { formula, copies: vec![c1, c2], free })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PitAxiom {
    /// `K([C(x)]) → K([C(p)])`
    Boolean,
    /// `K([C]) → ¬K([1 - C])`
    OneMinus,
    /// `K([G]) ∧ K([C(x, 0)]) → K([C(x, G)])`, substituting at variable
    /// `position` (0-based).
    SubZero { position: usize },
    /// `K([C(x)]) → K([C(π(x))])`
    Permutation(Vec<usize>),
}

impl PitAxiom {
    pub fn number(&self) -> u8 {
        match self {
            PitAxiom::Boolean => 1,
            PitAxiom::OneMinus => 2,
            PitAxiom::SubZero { .. } => 3,
            PitAxiom::Permutation(_) => 4,
        }
    }
}

/// Builds an axiom instance. `circuits` holds `[C]` for axioms 1, 2 and 4
/// and `[G], [C]` for axiom 3. Every copy of `k` reads `layout`: `[C]` fills
/// it for axioms 1 and 4, has one record less for axiom 2, and `[G]`, `[C]`
/// share it for axiom 3.
pub fn build_pit_axiom(
    axiom: &PitAxiom,
    k: &KCircuit,
    layout: Layout,
    circuits: &[BitEncoding],
    pool: &mut VarPool,
) -> Result<KInstance, EncodeError> {
    layout.check()?;
    check_width(k, layout)?;
    let same = |enc: &BitEncoding, gates: usize| check_layout(enc, Layout { gates, ..layout });
    let arity = |n: usize| {
        if circuits.len() == n {
            Ok(())
        } else {
            Err(EncodeError::LayoutMismatch {
                expected: format!("{n} circuit encodings"),
                found: circuits.len().to_string(),
            })
        }
    };
    // Inputs of each copy, extra free variables, and the consequent over
    // the copies' outputs.
    let (inputs, extra_free, consequent): (Vec<BitEncoding>, Vec<u32>, Box<dyn Fn(&[u32]) -> BoolFormula>) = match axiom
    {
        PitAxiom::Boolean => {
            arity(1)?;
            let c = &circuits[0];
            same(c, layout.gates)?;
            let p: Vec<u32> = (1..=layout.vars).map(|i| pool.fresh(format!("p{i}"))).collect();
            let pv: Vec<BoolFormula> = p.iter().map(|&i| B::Var(i)).collect();
            let cp = plug_constants(c, &pv)?;
            (vec![c.clone(), cp], p, Box::new(|o: &[u32]| implies(B::Var(o[0]), B::Var(o[1]))))
        }
        PitAxiom::OneMinus => {
            arity(1)?;
            let c = &circuits[0];
            if layout.gates < 2 {
                return Err(EncodeError::LayoutMismatch {
                    expected: "at least two gates".into(),
                    found: layout.to_string(),
                });
            }
            same(c, layout.gates - 1)?;
            (
                vec![pad_encoding(c, layout.gates)?, one_minus(c)?],
                vec![],
                Box::new(|o: &[u32]| implies(B::Var(o[0]), B::not(B::Var(o[1])))),
            )
        }
        PitAxiom::SubZero { position } => {
            arity(2)?;
            let (g, c) = (&circuits[0], &circuits[1]);
            let (gg, gc) = (g.layout().map_or(0, |l| l.gates), c.layout().map_or(0, |l| l.gates));
            if gg + gc != layout.gates {
                return Err(EncodeError::LayoutMismatch {
                    expected: format!("{} gates in [G] and [C] together", layout.gates),
                    found: (gg + gc).to_string(),
                });
            }
            same(g, gg)?;
            same(c, gc)?;
            let g_pad = pad_encoding(g, layout.gates)?;
            let c_zero = pad_encoding(&substitute_zero(c, &[*position])?, layout.gates)?;
            let mut targets = vec![None; layout.vars.max(position + 1)];
            targets[*position] = Some(gg - 1);
            let c_g = concat_encodings(g, &redirect_vars(&shift_gates(c, gg)?, &targets)?, layout.vars)?;
            (
                vec![g_pad, c_zero, c_g],
                vec![],
                Box::new(|o: &[u32]| implies(B::And(vec![B::Var(o[0]), B::Var(o[1])]), B::Var(o[2]))),
            )
        }
        PitAxiom::Permutation(pi) => {
            arity(1)?;
            let c = &circuits[0];
            same(c, layout.gates)?;
            let mut seen = vec![false; pi.len()];
            for &t in pi {
                if t >= pi.len() || std::mem::replace(&mut seen[t], true) {
                    return Err(EncodeError::LayoutMismatch {
                        expected: "a permutation".into(),
                        found: format!("{pi:?}"),
                    });
                }
            }
            (vec![c.clone(), permute_vars(c, pi)?], vec![], Box::new(|o: &[u32]| implies(B::Var(o[0]), B::Var(o[1]))))
        }
    };
    let refs: Vec<&BitEncoding> = circuits.iter().collect();
    let free = free_vars(&refs, &extra_free);
    let mut ante = Vec::new();
    let mut copies = Vec::new();
    for (t, enc) in inputs.into_iter().enumerate() {
        let (copy, cl) = instantiate(k, enc.bits, pool, t + 1)?;
        ante.extend(cl);
        copies.push(copy);
    }
    let outs: Vec<u32> = copies.iter().map(|c| c.output_var).collect();
    let formula = implies(B::And(ante), consequent(&outs));
    Ok(KInstance { formula, copies, free })
}

fn lane_masks(free: &[u32], base: u64, lanes: &mut [u64]) -> u64 {
    // Assignment `base + t` goes to lane `t`; bit `j` of it is `free[j]`.
    for (j, &v) in free.iter().enumerate() {
        let mut m = 0u64;
        for t in 0..64u64 {
            if ((base + t) >> j) & 1 == 1 {
                m |= 1 << t;
            }
        }
        lanes[v as usize] = m;
    }
    let total = 1u64 << free.len();
    if total - base >= 64 {
        !0
    } else {
        (1u64 << (total - base)) - 1
    }
}

fn set_copy_lanes(inst: &KInstance, k: &KCircuit, lanes: &mut [u64]) {
    for copy in &inst.copies {
        let ins: Vec<u64> = copy.inputs.iter().map(|f| eval_lanes(f, lanes)).collect();
        for (v, x) in copy.node_vars.iter().zip(k.eval_lanes(&ins)) {
            lanes[*v as usize] = x;
        }
    }
}

/// Checks the instance at the K-values its clauses force, over every
/// assignment of the free variables. Any other K-assignment falsifies a
/// definitional clause in the antecedent, so this decides whether the
/// formula is a tautology. Returns a falsifying assignment if there is one.
pub fn check_instance(
    inst: &KInstance,
    k: &KCircuit,
    pool_len: usize,
) -> Result<Option<Vec<(u32, bool)>>, EncodeError> {
    if inst.free.len() > TAUTOLOGY_LIMIT {
        return Err(EncodeError::TooManyVariables { n: inst.free.len(), limit: TAUTOLOGY_LIMIT });
    }
    let mut lanes = vec![0u64; pool_len + 1];
    let total = 1u64 << inst.free.len();
    let mut base = 0;
    while base < total {
        let valid = lane_masks(&inst.free, base, &mut lanes);
        set_copy_lanes(inst, k, &mut lanes);
        let bad = !eval_lanes(&inst.formula, &lanes) & valid;
        if bad != 0 {
            let a = base + bad.trailing_zeros() as u64;
            return Ok(Some(inst.free.iter().enumerate().map(|(j, &v)| (v, (a >> j) & 1 == 1)).collect()));
        }
        base += 64;
    }
    Ok(None)
}

/// Truth value of the instance with its free variables set by `assign` and
/// the copies of `K` evaluated.
pub fn evaluate_instance(inst: &KInstance, k: &KCircuit, pool_len: usize, assign: &[(u32, bool)]) -> bool {
    let mut lanes = vec![0u64; pool_len + 1];
    for &(v, b) in assign {
        lanes[v as usize] = if b { !0 } else { 0 };
    }
    set_copy_lanes(inst, k, &mut lanes);
    eval_lanes(&inst.formula, &lanes) & 1 == 1
}

/// Exhaustive tautology test over every variable of `f`.
pub fn is_tautology(f: &BoolFormula) -> Result<bool, EncodeError> {
    let mut vars = Vec::new();
    formula_vars(f, &mut vars);
    vars.sort_unstable();
    vars.dedup();
    if vars.len() > TAUTOLOGY_LIMIT {
        return Err(EncodeError::TooManyVariables { n: vars.len(), limit: TAUTOLOGY_LIMIT });
    }
    let top = vars.last().copied().unwrap_or(0) as usize;
    let mut lanes = vec![0u64; top + 1];
    let total = 1u64 << vars.len();
    let mut base = 0;
    while base < total {
        let valid = lane_masks(&vars, base, &mut lanes);
        if !eval_lanes(f, &lanes) & valid != 0 {
            return Ok(false);
        }
        base += 64;
    }
    Ok(true)
}

/// Tseitin CNF asserting `f`: variables `1..=num_vars` keep their meaning
/// and every connective gets a fresh variable after them. `f` is
/// satisfiable iff the CNF is.
pub fn tseitin(f: &BoolFormula, num_vars: u32) -> CnfFormula {
    struct T {
        next: u32,
        clauses: Vec<Vec<i32>>,
    }
    impl T {
        fn fresh(&mut self) -> i32 {
            self.next += 1;
            self.next as i32
        }
        fn lit(&mut self, f: &BoolFormula) -> i32 {
            if let Some(b) = as_const(f) {
                let y = self.fresh();
                self.clauses.push(vec![if b { y } else { -y }]);
                return y;
            }
            match f {
                B::Var(i) => *i as i32,
                B::Not(a) => -self.lit(a),
                B::And(cs) => {
                    let ls: Vec<i32> = cs.iter().map(|c| self.lit(c)).collect();
                    let y = self.fresh();
                    for &l in &ls {
                        self.clauses.push(vec![-y, l]);
                    }
                    let mut big: Vec<i32> = ls.iter().map(|l| -l).collect();
                    big.push(y);
                    self.clauses.push(big);
                    y
                }
                B::Or(cs) => {
                    let ls: Vec<i32> = cs.iter().map(|c| self.lit(c)).collect();
                    let y = self.fresh();
                    for &l in &ls {
                        self.clauses.push(vec![y, -l]);
                    }
                    let mut big = ls;
                    big.push(-y);
                    self.clauses.push(big);
                    y
                }
                B::Xor(cs) => {
                    // Odd parity accumulated pairwise; the connective is its negation.
                    let mut acc: Option<i32> = None;
                    for c in cs {
                        let l = self.lit(c);
                        acc = Some(match acc {
                            None => l,
                            Some(a) => {
                                let z = self.fresh();
                                self.clauses.extend([vec![-z, a, l], vec![-z, -a, -l], vec![z, -a, l], vec![z, a, -l]]);
                                z
                            }
                        });
                    }
                    match acc {
                        Some(a) => -a,
                        None => {
                            let y = self.fresh();
                            self.clauses.push(vec![y]);
                            y
                        }
                    }
                }
            }
        }
    }
    let mut t = T { next: num_vars.max(f.max_var()), clauses: Vec::new() };
    let root = t.lit(f);
    t.clauses.push(vec![root]);
    CnfFormula::new(t.next, t.clauses)
}
