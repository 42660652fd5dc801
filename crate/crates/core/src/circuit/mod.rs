//! Algebraic circuits over `x`-variables and placeholder `f`-variables.
//!
//! A [`Circuit`] is an append-only DAG: children always precede their parents,
//! so node order is a topological order. Transforms never mutate; they build
//! new circuits.

mod format;
mod transform;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::field::{FieldElement, Prime};

pub use format::{parse_circuit, write_circuit, FormatError};
pub use transform::{binarize, prune, split_division, substitute, unshare_leaves};

/// An input variable: `X(i)` is `x_i`, `F(i)` is the placeholder `f_i` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarId {
    X(u32),
    F(u32),
}

impl VarId {
    pub fn index(self) -> u32 {
        match self {
            VarId::X(i) | VarId::F(i) => i,
        }
    }

    pub fn is_placeholder(self) -> bool {
        matches!(self, VarId::F(_))
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::X(i) => write!(f, "x{i}"),
            VarId::F(i) => write!(f, "f{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "%{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Const(i64),
    Var(VarId),
    /// `sum c_k * child_k`
    Lin(Vec<(i64, NodeId)>),
    Mul(Vec<NodeId>),
    Div(NodeId, NodeId),
}

impl Node {
    pub fn children(&self) -> Vec<NodeId> {
        match self {
            Node::Const(_) | Node::Var(_) => Vec::new(),
            Node::Lin(ts) => ts.iter().map(|&(_, c)| c).collect(),
            Node::Mul(cs) => cs.clone(),
            Node::Div(a, b) => vec![*a, *b],
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Const(_) | Node::Var(_))
    }
}

/// Coefficient domain a circuit file declares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Domain {
    #[default]
    Integer,
    Prime(Prime),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("variable {0} is not assigned")]
    UnassignedVariable(VarId),
    #[error("division by zero at node {0}")]
    DivisionByZero(NodeId),
    #[error("degree bound is undefined for circuits with division")]
    DegreeOfDivision,
    #[error("product node {0} does not have fan-in 2")]
    NonBinaryProduct(NodeId),
    #[error("malformed node: {0}")]
    Malformed(String),
    #[error("expected a single output, found {0}")]
    NotSingleOutput(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    nodes: Vec<Node>,
    outputs: Vec<NodeId>,
    xvars: u32,
    fvars: u32,
    domain: Domain,
}

impl Default for Circuit {
    fn default() -> Self {
        Circuit::new()
    }
}

impl Circuit {
    pub fn new() -> Self {
        Circuit { nodes: Vec::new(), outputs: Vec::new(), xvars: 0, fvars: 0, domain: Domain::Integer }
    }

    pub fn with_vars(xvars: u32, fvars: u32) -> Self {
        Circuit { xvars, fvars, ..Circuit::new() }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.idx()]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn outputs(&self) -> &[NodeId] {
        &self.outputs
    }

    pub fn output(&self) -> Result<NodeId, CircuitError> {
        match self.outputs.as_slice() {
            [o] => Ok(*o),
            os => Err(CircuitError::NotSingleOutput(os.len())),
        }
    }

    pub fn xvars(&self) -> u32 {
        self.xvars
    }

    pub fn fvars(&self) -> u32 {
        self.fvars
    }

    pub fn set_xvars(&mut self, n: u32) {
        self.xvars = self.xvars.max(n);
    }

    pub fn set_fvars(&mut self, m: u32) {
        self.fvars = self.fvars.max(m);
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn set_domain(&mut self, d: Domain) {
        self.domain = d;
    }

    pub fn is_division_free(&self) -> bool {
        !self.nodes.iter().any(|n| matches!(n, Node::Div(..)))
    }

    /// Appends a node; children must already exist.
    pub fn push(&mut self, node: Node) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        for c in node.children() {
            assert!(c.0 < id.0, "child {c} does not precede {id}");
        }
        match &node {
            Node::Lin(ts) => assert!(!ts.is_empty(), "empty linear combination"),
            Node::Mul(cs) => assert!(!cs.is_empty(), "empty product"),
            Node::Var(VarId::X(i)) => self.xvars = self.xvars.max(*i),
            Node::Var(VarId::F(i)) => self.fvars = self.fvars.max(*i),
            _ => {}
        }
        self.nodes.push(node);
        id
    }

    pub fn constant(&mut self, c: i64) -> NodeId {
        self.push(Node::Const(c))
    }

    pub fn var(&mut self, v: VarId) -> NodeId {
        self.push(Node::Var(v))
    }

    pub fn x(&mut self, i: u32) -> NodeId {
        self.var(VarId::X(i))
    }

    pub fn f(&mut self, i: u32) -> NodeId {
        self.var(VarId::F(i))
    }

    pub fn lin(&mut self, terms: Vec<(i64, NodeId)>) -> NodeId {
        self.push(Node::Lin(terms))
    }

    pub fn mul(&mut self, factors: Vec<NodeId>) -> NodeId {
        self.push(Node::Mul(factors))
    }

    pub fn div(&mut self, num: NodeId, den: NodeId) -> NodeId {
        self.push(Node::Div(num, den))
    }

    pub fn add(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.lin(vec![(1, a), (1, b)])
    }

    pub fn sub(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.lin(vec![(1, a), (-1, b)])
    }

    /// `1 - a`
    pub fn one_minus(&mut self, a: NodeId) -> NodeId {
        let one = self.constant(1);
        self.sub(one, a)
    }

    pub fn set_outputs(&mut self, outs: Vec<NodeId>) {
        for o in &outs {
            assert!(o.idx() < self.nodes.len());
        }
        self.outputs = outs;
    }

    pub fn add_output(&mut self, o: NodeId) {
        assert!(o.idx() < self.nodes.len());
        self.outputs.push(o);
    }

    /// Single-output circuit from a builder closure.
    pub fn build(f: impl FnOnce(&mut Circuit) -> NodeId) -> Circuit {
        let mut c = Circuit::new();
        let o = f(&mut c);
        c.set_outputs(vec![o]);
        c
    }

    /// Copies all nodes of `other` into `self`; returns the new id of each node.
    pub fn import(&mut self, other: &Circuit) -> Vec<NodeId> {
        let mut map = Vec::with_capacity(other.nodes.len());
        for node in &other.nodes {
            let m = |c: &NodeId| map_id(&map, *c);
            let n = match node {
                Node::Const(v) => Node::Const(*v),
                Node::Var(v) => Node::Var(*v),
                Node::Lin(ts) => Node::Lin(ts.iter().map(|(k, c)| (*k, m(c))).collect()),
                Node::Mul(cs) => Node::Mul(cs.iter().map(m).collect()),
                Node::Div(a, b) => Node::Div(m(a), m(b)),
            };
            map.push(self.push(n));
        }
        self.xvars = self.xvars.max(other.xvars);
        self.fvars = self.fvars.max(other.fvars);
        map
    }

    /// Imports `other` and returns the id of its single output.
    pub fn import_output(&mut self, other: &Circuit) -> NodeId {
        let map = self.import(other);
        map[other.output().expect("single-output circuit").idx()]
    }

    /// Marks nodes reachable from the outputs.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        for o in &self.outputs {
            seen[o.idx()] = true;
        }
        for i in (0..self.nodes.len()).rev() {
            if seen[i] {
                for c in self.nodes[i].children() {
                    seen[c.idx()] = true;
                }
            }
        }
        seen
    }

    /// Variables appearing in nodes reachable from the outputs.
    pub fn variables(&self) -> Vec<VarId> {
        let live = self.reachable();
        let mut vs: Vec<VarId> = self
            .nodes
            .iter()
            .zip(&live)
            .filter_map(|(n, &l)| match n {
                Node::Var(v) if l => Some(*v),
                _ => None,
            })
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Evaluates every output modulo `p`.
    pub fn evaluate(
        &self,
        p: Prime,
        assign: impl Fn(VarId) -> Option<FieldElement>,
    ) -> Result<Vec<FieldElement>, CircuitError> {
        let live = self.reachable();
        let mut vals = vec![p.zero(); self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if !live[i] {
                continue;
            }
            vals[i] = match node {
                Node::Const(v) => p.from_i64(*v),
                Node::Var(v) => assign(*v).ok_or(CircuitError::UnassignedVariable(*v))?,
                Node::Lin(ts) => ts.iter().fold(p.zero(), |acc, (k, c)| acc + p.from_i64(*k) * vals[c.idx()]),
                Node::Mul(cs) => cs.iter().fold(p.one(), |acc, c| acc * vals[c.idx()]),
                Node::Div(a, b) => {
                    let inv = vals[b.idx()].inverse().map_err(|_| CircuitError::DivisionByZero(NodeId(i as u32)))?;
                    vals[a.idx()] * inv
                }
            };
        }
        Ok(self.outputs.iter().map(|o| vals[o.idx()]).collect())
    }

    pub fn evaluate_map(
        &self,
        p: Prime,
        assignment: &HashMap<VarId, FieldElement>,
    ) -> Result<Vec<FieldElement>, CircuitError> {
        self.evaluate(p, |v| assignment.get(&v).copied())
    }

    pub fn metrics(&self) -> CircuitMetrics {
        let live = self.reachable();
        let depth = self.depths();
        let degree = self.degree_bound().ok();
        let constant_free = self.nodes.iter().zip(&live).all(|(n, &l)| {
            !l || match n {
                Node::Const(v) => (-1..=1).contains(v),
                Node::Lin(ts) => ts.iter().all(|(k, _)| (-1..=1).contains(k)),
                _ => true,
            }
        });
        CircuitMetrics {
            size: live.iter().filter(|&&l| l).count(),
            depth: self.outputs.iter().map(|o| depth[o.idx()]).max().unwrap_or(0),
            syntactic_degree_bound: degree,
            constant_free,
        }
    }

    /// Per-node depth. Leaves have depth 0 and every gate adds one layer,
    /// except gates with at most one non-constant child (`1 - g`, `c * g`),
    /// which are affine maps of a single input and add nothing.
    pub fn depths(&self) -> Vec<u32> {
        let mut d = vec![0u32; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if node.is_leaf() {
                continue;
            }
            let kids: Vec<NodeId> =
                node.children().into_iter().filter(|c| !matches!(self.nodes[c.idx()], Node::Const(_))).collect();
            let deepest = kids.iter().map(|c| d[c.idx()]).max().unwrap_or(0);
            let affine = kids.len() <= 1 && !matches!(node, Node::Div(..));
            d[i] = if affine { deepest } else { deepest + 1 };
        }
        d
    }

    /// Syntactic degree bound with unit weight per variable.
    pub fn degree_bound(&self) -> Result<u64, CircuitError> {
        self.degree_bound_weighted(|_| 1)
    }

    /// Degree bound where variable `v` counts as degree `weight(v)`; saturates.
    pub fn degree_bound_weighted(&self, weight: impl Fn(VarId) -> u64) -> Result<u64, CircuitError> {
        let live = self.reachable();
        let mut deg = vec![0u64; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if !live[i] {
                continue;
            }
            deg[i] = match node {
                Node::Const(_) => 0,
                Node::Var(v) => weight(*v),
                Node::Lin(ts) => ts.iter().map(|(_, c)| deg[c.idx()]).max().unwrap_or(0),
                Node::Mul(cs) => cs.iter().fold(0u64, |a, c| a.saturating_add(deg[c.idx()])),
                Node::Div(..) => return Err(CircuitError::DegreeOfDivision),
            };
        }
        Ok(self.outputs.iter().map(|o| deg[o.idx()]).max().unwrap_or(0))
    }

    /// Parents of every node (with multiplicity), restricted to live nodes.
    fn parents(&self, live: &[bool]) -> Vec<Vec<NodeId>> {
        let mut ps = vec![Vec::new(); self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            if live[i] {
                for c in n.children() {
                    ps[c.idx()].push(NodeId(i as u32));
                }
            }
        }
        ps
    }

    /// Checks whether every product gate separates one of its two children
    /// from the rest of the circuit.
    pub fn is_weakly_skew(&self) -> Result<SkewReport, CircuitError> {
        let live = self.reachable();
        let parents = self.parents(&live);
        let mut is_output = vec![false; self.nodes.len()];
        for o in &self.outputs {
            is_output[o.idx()] = true;
        }
        let mut labels = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if !live[i] {
                continue;
            }
            let Node::Mul(cs) = node else { continue };
            let g = NodeId(i as u32);
            if cs.len() != 2 {
                return Err(CircuitError::NonBinaryProduct(g));
            }
            let iso = (0..2).find(|&k| cs[0] != cs[1] && self.separated_by(cs[k], g, &parents, &is_output));
            match iso {
                Some(k) => labels.push((g, k)),
                None => return Ok(SkewReport { weakly_skew: false, labels, witness: Some((g, cs[0], cs[1])) }),
            }
        }
        Ok(SkewReport { weakly_skew: true, labels, witness: None })
    }

    /// True iff the subcircuit rooted at `child` touches the rest of the DAG
    /// only through the edge into `gate`.
    fn separated_by(&self, child: NodeId, gate: NodeId, parents: &[Vec<NodeId>], is_output: &[bool]) -> bool {
        if is_output[child.idx()] || parents[child.idx()] != [gate] {
            return false;
        }
        let mut inside = vec![false; child.idx() + 1];
        inside[child.idx()] = true;
        for i in (0..=child.idx()).rev() {
            if !inside[i] {
                continue;
            }
            for c in self.nodes[i].children() {
                inside[c.idx()] = true;
            }
        }
        (0..child.idx())
            .filter(|&i| inside[i])
            .all(|i| !is_output[i] && parents[i].iter().all(|p| p.idx() <= child.idx() && inside[p.idx()]))
    }
}

fn map_id(map: &[NodeId], c: NodeId) -> NodeId {
    map[c.idx()]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitMetrics {
    /// Number of nodes reachable from the outputs.
    pub size: usize,
    pub depth: u32,
    /// `None` when the circuit contains a division.
    pub syntactic_degree_bound: Option<u64>,
    pub constant_free: bool,
}

/// Result of the weakly-skew test. `labels` records, for each product gate
/// checked so far, which child position (0 or 1) it isolates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewReport {
    pub weakly_skew: bool,
    pub labels: Vec<(NodeId, usize)>,
    /// Offending product gate and its two children.
    pub witness: Option<(NodeId, NodeId, NodeId)>,
}

impl SkewReport {
    pub fn isolated_child(&self, gate: NodeId) -> Option<usize> {
        self.labels.iter().find(|(g, _)| *g == gate).map(|&(_, k)| k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn b_gadget(c: &mut Circuit, e: NodeId, x: NodeId) -> NodeId {
        let ex = c.mul(vec![e, x]);
        let ne = c.one_minus(e);
        let nx = c.one_minus(x);
        let nn = c.mul(vec![ne, nx]);
        c.add(ex, nn)
    }

    #[test]
    fn evaluate_examples() {
        let c = Circuit::build(|c| {
            let x = c.x(1);
            c.one_minus(x)
        });
        let v = c.evaluate(p(7), |_| Some(p(7).zero())).unwrap();
        assert_eq!(v[0].value(), 1);

        let c = Circuit::build(|c| {
            let e = c.x(1);
            let x = c.x(2);
            b_gadget(c, e, x)
        });
        let v = c.evaluate(p(7), |v| Some(if v == VarId::X(1) { p(7).elem(1) } else { p(7).elem(5) })).unwrap();
        assert_eq!(v[0].value(), 5);

        let c = Circuit::build(|c| {
            let x = c.x(1);
            let y = c.x(2);
            let q = c.div(x, y);
            let one = c.constant(1);
            c.add(q, one)
        });
        let v = c.evaluate(p(7), |v| Some(if v == VarId::X(1) { p(7).elem(3) } else { p(7).elem(2) })).unwrap();
        assert_eq!(v[0].value(), 6);
    }

    #[test]
    fn evaluate_errors() {
        let c = Circuit::build(|c| {
            let x = c.x(1);
            let y = c.x(2);
            c.div(x, y)
        });
        assert_eq!(
            c.evaluate(p(7), |v| if v == VarId::X(1) { Some(p(7).one()) } else { None }),
            Err(CircuitError::UnassignedVariable(VarId::X(2)))
        );
        assert_eq!(
            c.evaluate(p(7), |v| Some(if v == VarId::X(1) { p(7).one() } else { p(7).zero() })),
            Err(CircuitError::DivisionByZero(NodeId(2)))
        );
    }

    #[test]
    fn metrics_examples() {
        let c = Circuit::build(|c| {
            let x1 = c.x(1);
            let x2 = c.x(2);
            let m = c.mul(vec![x1, x2]);
            c.add(m, x1)
        });
        let m = c.metrics();
        assert_eq!((m.size, m.depth, m.syntactic_degree_bound, m.constant_free), (4, 2, Some(2), true));

        let c = Circuit::build(|c| c.constant(1));
        let m = c.metrics();
        assert_eq!((m.depth, m.syntactic_degree_bound, m.constant_free), (0, Some(0), true));

        let c = Circuit::build(|c| {
            let k = c.constant(5);
            let x = c.x(1);
            c.mul(vec![k, x])
        });
        assert!(!c.metrics().constant_free);

        let c = Circuit::build(|c| {
            let x = c.x(1);
            c.lin(vec![(3, x)])
        });
        assert!(!c.metrics().constant_free);

        let c = Circuit::build(|c| {
            let x = c.x(1);
            let y = c.x(2);
            c.div(x, y)
        });
        assert_eq!(c.degree_bound(), Err(CircuitError::DegreeOfDivision));
        assert_eq!(c.metrics().syntactic_degree_bound, None);
    }

    #[test]
    fn affine_wrappers_are_free_for_depth() {
        let c = Circuit::build(|c| {
            let x = c.x(1);
            let y = c.x(2);
            let nx = c.one_minus(x);
            let ny = c.one_minus(y);
            let m = c.mul(vec![nx, ny]);
            c.one_minus(m)
        });
        assert_eq!(c.metrics().depth, 1);
    }

    #[test]
    fn formulas_are_weakly_skew() {
        let c = Circuit::build(|c| {
            let a = c.x(1);
            let b = c.x(2);
            let s = c.add(a, b);
            let d = c.x(3);
            let e = c.x(1);
            let t = c.mul(vec![d, e]);
            c.mul(vec![s, t])
        });
        let r = c.is_weakly_skew().unwrap();
        assert!(r.weakly_skew);
        assert_eq!(r.labels.len(), 2);
    }

    /// Independent oracle: g = a*b is weakly skew at g iff deleting the edge
    /// (g, child) disconnects child's side from the rest (undirected search).
    fn oracle_separates(c: &Circuit, gate: NodeId, pos: usize) -> bool {
        let n = c.len();
        let Node::Mul(cs) = c.node(gate) else { unreachable!() };
        let child = cs[pos];
        let live = c.reachable();
        let mut adj = vec![Vec::new(); n + 1];
        let mut removed = false;
        for (i, node) in c.nodes().iter().enumerate() {
            if !live[i] {
                continue;
            }
            for (k, ch) in node.children().into_iter().enumerate() {
                if i == gate.idx() && k == pos && !removed {
                    removed = true;
                    continue;
                }
                adj[i].push(ch.idx());
                adj[ch.idx()].push(i);
            }
        }
        // virtual sink attached to outputs
        for o in c.outputs() {
            adj[n].push(o.idx());
            adj[o.idx()].push(n);
        }
        let mut seen = vec![false; n + 1];
        let mut stack = vec![child.idx()];
        seen[child.idx()] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        !seen[gate.idx()] && !seen[n]
    }

    #[test]
    fn shared_children_break_skewness() {
        // a and b are both used by another gate; g = a*b isolates neither.
        let mut c = Circuit::new();
        let x1 = c.x(1);
        let x2 = c.x(2);
        let a = c.add(x1, x2);
        let b = c.lin(vec![(1, x1), (-1, x2)]);
        let g = c.mul(vec![a, b]);
        let h = c.lin(vec![(1, g), (1, a), (1, b)]);
        c.set_outputs(vec![h]);
        assert_eq!(c.len(), 6);
        let r = c.is_weakly_skew().unwrap();
        assert!(!r.weakly_skew);
        assert_eq!(r.witness, Some((g, a, b)));
        assert!(!oracle_separates(&c, g, 0) && !oracle_separates(&c, g, 1));
    }

    #[test]
    fn skew_predicate_matches_reachability_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..300 {
            let mut c = Circuit::new();
            for i in 1..=3 {
                c.x(i);
            }
            for _ in 0..rng.gen_range(1..8) {
                let n = c.len() as u32;
                let a = NodeId(rng.gen_range(0..n));
                let b = NodeId(rng.gen_range(0..n));
                if rng.gen_bool(0.5) {
                    c.mul(vec![a, b]);
                } else {
                    c.add(a, b);
                }
            }
            let out = NodeId(c.len() as u32 - 1);
            c.set_outputs(vec![out]);
            let live = c.reachable();
            let r = c.is_weakly_skew().unwrap();
            let expected = c.nodes().iter().enumerate().all(|(i, n)| match n {
                Node::Mul(cs) if live[i] => {
                    cs[0] != cs[1]
                        && (oracle_separates(&c, NodeId(i as u32), 0) || oracle_separates(&c, NodeId(i as u32), 1))
                }
                _ => true,
            });
            assert_eq!(r.weakly_skew, expected, "{c:?}");
        }
    }

    #[test]
    fn non_binary_products_are_rejected() {
        let c = Circuit::build(|c| {
            let a = c.x(1);
            let b = c.x(2);
            let d = c.x(3);
            c.mul(vec![a, b, d])
        });
        assert!(matches!(c.is_weakly_skew(), Err(CircuitError::NonBinaryProduct(_))));
        let r = binarize(&c).is_weakly_skew().unwrap();
        assert!(r.weakly_skew);
    }

    #[test]
    fn duplicating_a_shared_child_never_breaks_skewness() {
        // Sharing b between g and h is not skew; duplicating b restores it.
        let mut c = Circuit::new();
        let x1 = c.x(1);
        let x2 = c.x(2);
        let a = c.add(x1, x2);
        let b = c.mul(vec![x1, x2]);
        let g = c.mul(vec![a, b]);
        let h = c.lin(vec![(1, g), (1, b), (1, a)]);
        c.set_outputs(vec![h]);
        let before = unshare_leaves(&c).is_weakly_skew().unwrap().weakly_skew;
        let mut d = Circuit::new();
        let x1 = d.x(1);
        let x2 = d.x(2);
        let a = d.add(x1, x2);
        let y1 = d.x(1);
        let y2 = d.x(2);
        let b1 = d.mul(vec![y1, y2]);
        let g = d.mul(vec![a, b1]);
        let z1 = d.x(1);
        let z2 = d.x(2);
        let b2 = d.mul(vec![z1, z2]);
        let h = d.add(g, b2);
        d.set_outputs(vec![h]);
        let after = unshare_leaves(&d).is_weakly_skew().unwrap().weakly_skew;
        assert!(!before);
        assert!(after);
    }
}
