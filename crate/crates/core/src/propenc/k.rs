//! Boolean circuits `K` over an encoding's bits, and the bundled
//! brute-force identity tester.

use std::collections::HashMap;

use super::{ceil_log2, EncodeError, Field, Layout};
use crate::field::Prime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KNode {
    Input(usize),
    Const(bool),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
}

/// Children precede their parents; nodes `0..inputs` are the inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KCircuit {
    pub inputs: usize,
    pub nodes: Vec<KNode>,
    pub output: usize,
}

impl KCircuit {
    pub fn validate(&self) -> Result<(), EncodeError> {
        let bad = |what: String| Err(EncodeError::LayoutMismatch { expected: "well-formed K".into(), found: what });
        if self.nodes.len() < self.inputs || self.output >= self.nodes.len() {
            return bad("dangling output".into());
        }
        for (i, n) in self.nodes.iter().enumerate() {
            let ok = match *n {
                KNode::Input(j) => i < self.inputs && j == i,
                KNode::Const(_) => i >= self.inputs,
                KNode::Not(a) => i >= self.inputs && a < i,
                KNode::And(a, b) | KNode::Or(a, b) => i >= self.inputs && a < i && b < i,
            };
            if !ok {
                return bad(format!("node {i}"));
            }
        }
        Ok(())
    }

    /// Values of every node over 64 input assignments at once.
    pub fn eval_lanes(&self, inputs: &[u64]) -> Vec<u64> {
        let mut v: Vec<u64> = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let x = match *n {
                KNode::Input(j) => inputs[j],
                KNode::Const(b) => {
                    if b {
                        !0
                    } else {
                        0
                    }
                }
                KNode::Not(a) => !v[a],
                KNode::And(a, b) => v[a] & v[b],
                KNode::Or(a, b) => v[a] | v[b],
            };
            v.push(x);
        }
        v
    }

    pub fn eval(&self, inputs: &[bool]) -> bool {
        let lanes: Vec<u64> = inputs.iter().map(|&b| if b { !0 } else { 0 }).collect();
        self.eval_lanes(&lanes)[self.output] & 1 == 1
    }

    pub fn gate_count(&self) -> usize {
        self.nodes.len() - self.inputs
    }
}

/// Hash-consing builder with constant folding.
pub struct KBuilder {
    inputs: usize,
    nodes: Vec<KNode>,
    memo: HashMap<KNode, usize>,
}

impl KBuilder {
    pub fn new(inputs: usize) -> Self {
        KBuilder { inputs, nodes: (0..inputs).map(KNode::Input).collect(), memo: HashMap::new() }
    }

    fn intern(&mut self, n: KNode) -> usize {
        if let Some(&i) = self.memo.get(&n) {
            return i;
        }
        self.nodes.push(n);
        let i = self.nodes.len() - 1;
        self.memo.insert(n, i);
        i
    }

    fn value(&self, a: usize) -> Option<bool> {
        match self.nodes[a] {
            KNode::Const(b) => Some(b),
            _ => None,
        }
    }

    pub fn input(&self, i: usize) -> usize {
        assert!(i < self.inputs);
        i
    }

    pub fn konst(&mut self, b: bool) -> usize {
        self.intern(KNode::Const(b))
    }

    pub fn not(&mut self, a: usize) -> usize {
        match self.nodes[a] {
            KNode::Const(b) => self.konst(!b),
            KNode::Not(x) => x,
            _ => self.intern(KNode::Not(a)),
        }
    }

    pub fn and(&mut self, a: usize, b: usize) -> usize {
        match (self.value(a), self.value(b)) {
            (Some(false), _) | (_, Some(false)) => self.konst(false),
            (Some(true), _) => b,
            (_, Some(true)) => a,
            _ if a == b => a,
            _ => self.intern(KNode::And(a.min(b), a.max(b))),
        }
    }

    pub fn or(&mut self, a: usize, b: usize) -> usize {
        match (self.value(a), self.value(b)) {
            (Some(true), _) | (_, Some(true)) => self.konst(true),
            (Some(false), _) => b,
            (_, Some(false)) => a,
            _ if a == b => a,
            _ => self.intern(KNode::Or(a.min(b), a.max(b))),
        }
    }

    pub fn xor(&mut self, a: usize, b: usize) -> usize {
        let (na, nb) = (self.not(a), self.not(b));
        let l = self.and(a, nb);
        let r = self.and(na, b);
        self.or(l, r)
    }

    pub fn mux(&mut self, s: usize, x: usize, y: usize) -> usize {
        if x == y {
            return x;
        }
        let ns = self.not(s);
        let l = self.and(s, x);
        let r = self.and(ns, y);
        self.or(l, r)
    }

    pub fn all(&mut self, xs: &[usize]) -> usize {
        let t = self.konst(true);
        xs.iter().fold(t, |acc, &x| self.and(acc, x))
    }

    pub fn any(&mut self, xs: &[usize]) -> usize {
        let f = self.konst(false);
        xs.iter().fold(f, |acc, &x| self.or(acc, x))
    }

    /// Keeps the inputs and whatever the output depends on.
    pub fn finish(self, output: usize) -> KCircuit {
        let mut live = vec![false; self.nodes.len()];
        live[output] = true;
        for i in (0..self.nodes.len()).rev() {
            if !live[i] {
                continue;
            }
            match self.nodes[i] {
                KNode::Not(a) => live[a] = true,
                KNode::And(a, b) | KNode::Or(a, b) => {
                    live[a] = true;
                    live[b] = true;
                }
                _ => {}
            }
        }
        let mut at = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if i >= self.inputs && !live[i] {
                continue;
            }
            at[i] = nodes.len();
            nodes.push(match *n {
                KNode::Not(a) => KNode::Not(at[a]),
                KNode::And(a, b) => KNode::And(at[a], at[b]),
                KNode::Or(a, b) => KNode::Or(at[a], at[b]),
                other => other,
            });
        }
        KCircuit { inputs: self.inputs, nodes, output: at[output] }
    }

    // Little-endian bit vectors.

    fn const_vec(&mut self, v: u64, n: usize) -> Vec<usize> {
        (0..n).map(|k| self.konst((v >> k) & 1 == 1)).collect()
    }

    /// `x - y` on equal widths, with the final borrow.
    fn sub_borrow(&mut self, x: &[usize], y: &[usize]) -> (Vec<usize>, usize) {
        let mut borrow = self.konst(false);
        let mut out = Vec::with_capacity(x.len());
        for (&a, &b) in x.iter().zip(y) {
            let t = self.xor(a, b);
            out.push(self.xor(t, borrow));
            // borrow' = (¬a ∧ b) ∨ (¬(a ⊕ b) ∧ borrow)
            let na = self.not(a);
            let g = self.and(na, b);
            let nt = self.not(t);
            let p = self.and(nt, borrow);
            borrow = self.or(g, p);
        }
        (out, borrow)
    }

    /// `x + y` on equal widths, one carry bit longer.
    fn add(&mut self, x: &[usize], y: &[usize]) -> Vec<usize> {
        let mut carry = self.konst(false);
        let mut out = Vec::with_capacity(x.len() + 1);
        for (&a, &b) in x.iter().zip(y) {
            let t = self.xor(a, b);
            out.push(self.xor(t, carry));
            let g = self.and(a, b);
            let p = self.and(t, carry);
            carry = self.or(g, p);
        }
        out.push(carry);
        out
    }

    fn mux_vec(&mut self, s: usize, x: &[usize], y: &[usize]) -> Vec<usize> {
        x.iter().zip(y).map(|(&a, &b)| self.mux(s, a, b)).collect()
    }

    fn mod_add(&mut self, x: &[usize], y: &[usize], p: u64) -> Vec<usize> {
        let b = x.len();
        let s = self.add(x, y);
        let pv = self.const_vec(p, b + 1);
        let (d, borrow) = self.sub_borrow(&s, &pv);
        self.mux_vec(borrow, &s[..b], &d[..b])
    }

    fn mod_sub(&mut self, x: &[usize], y: &[usize], p: u64) -> Vec<usize> {
        let b = x.len();
        let (d, borrow) = self.sub_borrow(x, y);
        let pv = self.const_vec(p, b);
        let e = self.add(&d, &pv);
        self.mux_vec(borrow, &e[..b], &d)
    }

    fn mod_mul(&mut self, x: &[usize], y: &[usize], p: u64) -> Vec<usize> {
        let b = x.len();
        let zero = self.konst(false);
        let mut acc = vec![zero; 2 * b];
        for (k, &yk) in y.iter().enumerate() {
            let mut shifted = vec![zero; 2 * b];
            for (j, &xj) in x.iter().enumerate() {
                shifted[j + k] = self.and(xj, yk);
            }
            acc = self.add(&acc, &shifted)[..2 * b].to_vec();
        }
        for k in (0..b).rev() {
            let t = self.const_vec(p << k, 2 * b);
            let (d, borrow) = self.sub_borrow(&acc, &t);
            acc = self.mux_vec(borrow, &acc, &d);
        }
        acc.truncate(b);
        acc
    }
}

/// Parameters of the bundled tester: grid `{0..degree_bound}^vars` over
/// `F_P` with `P` the least prime above the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForceK {
    pub layout: Layout,
    pub degree_bound: u64,
    pub prime: Prime,
}

impl BruteForceK {
    pub fn new(layout: Layout, degree_bound: u64) -> Result<Self, EncodeError> {
        layout.check()?;
        let degree_bound = degree_bound.max(1);
        let prime = Prime::next_above(degree_bound)
            .ok_or_else(|| EncodeError::Unencodable(format!("no prime above {degree_bound}")))?;
        Ok(BruteForceK { layout, degree_bound, prime })
    }

    pub fn grid_points(&self) -> Vec<Vec<u64>> {
        let side = self.degree_bound + 1;
        let total = side.pow(self.layout.vars as u32);
        (0..total)
            .map(|mut t| {
                (0..self.layout.vars)
                    .map(|_| {
                        let d = t % side;
                        t /= side;
                        d
                    })
                    .collect()
            })
            .collect()
    }

    /// The reference semantics: every grid value of the decoded circuit is 0.
    pub fn decide(&self, bits: &[bool]) -> Result<bool, EncodeError> {
        let recs = super::decode_records(bits, self.layout)?;
        Ok(self.grid_points().iter().all(|z| super::evaluate_records(&recs, z, self.prime) == 0))
    }

    /// The same decision as a Boolean circuit over the encoding bits.
    pub fn circuit(&self) -> KCircuit {
        let l = self.layout;
        let p = self.prime.get();
        let bw = ceil_log2(p as usize).max(1);
        let mut kb = KBuilder::new(l.total_bits());
        let slots = 1usize << l.index_bits;
        // Decoders, shared across grid points.
        let decode = |kb: &mut KBuilder, bits: std::ops::Range<usize>| -> Vec<usize> {
            let idx: Vec<usize> = bits.collect();
            (0..slots)
                .map(|j| {
                    let lits: Vec<usize> = idx
                        .iter()
                        .enumerate()
                        .map(|(k, &b)| if (j >> (idx.len() - 1 - k)) & 1 == 1 { b } else { kb.not(b) })
                        .collect();
                    kb.all(&lits)
                })
                .collect()
        };
        let dec_a: Vec<Vec<usize>> = (0..l.gates).map(|i| decode(&mut kb, l.field(i, Field::Left))).collect();
        let dec_b: Vec<Vec<usize>> = (0..l.gates).map(|i| decode(&mut kb, l.field(i, Field::Right))).collect();
        let one = kb.const_vec(1, bw);
        let mut zero_at = Vec::new();
        for z in self.grid_points() {
            let mut vals: Vec<Vec<usize>> = Vec::with_capacity(l.gates);
            for i in 0..l.gates {
                let kind = l.field(i, Field::Kind);
                let (k1, k0) = (kind.start, kind.start + 1);
                let ca = l.field(i, Field::ConstLeft).start;
                let cb = l.field(i, Field::ConstRight).start;
                let leaf_var: Vec<usize> = (0..bw)
                    .map(|k| {
                        let hits: Vec<usize> =
                            (0..l.vars.min(slots)).filter(|&j| (z[j] >> k) & 1 == 1).map(|j| dec_a[i][j]).collect();
                        kb.any(&hits)
                    })
                    .collect();
                let zero = kb.konst(false);
                let mut leaf_const = vec![zero; bw];
                leaf_const[0] = cb;
                let leaf = kb.mux_vec(ca, &leaf_const, &leaf_var);
                let operand = |kb: &mut KBuilder, dec: &[usize], c: usize| -> Vec<usize> {
                    let sel: Vec<usize> = (0..bw)
                        .map(|k| {
                            let terms: Vec<usize> = (0..i.min(slots)).map(|j| kb.and(dec[j], vals[j][k])).collect();
                            kb.any(&terms)
                        })
                        .collect();
                    kb.mux_vec(c, &one, &sel)
                };
                let x = operand(&mut kb, &dec_a[i], ca);
                let y = operand(&mut kb, &dec_b[i], cb);
                let add = kb.mod_add(&x, &y, p);
                let sub = kb.mod_sub(&x, &y, p);
                let mul = kb.mod_mul(&x, &y, p);
                let hi = kb.mux_vec(k0, &mul, &sub);
                let lo = kb.mux_vec(k0, &add, &leaf);
                vals.push(kb.mux_vec(k1, &hi, &lo));
            }
            let out = &vals[l.gates - 1];
            let nz = kb.any(out);
            zero_at.push(kb.not(nz));
        }
        let out = kb.all(&zero_at);
        kb.finish(out)
    }
}
