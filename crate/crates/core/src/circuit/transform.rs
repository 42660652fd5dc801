use std::collections::HashMap;

use super::{Circuit, CircuitError, Node, NodeId, VarId};

/// Replaces every bound variable by one shared copy of its binding.
///
/// Binding circuits must be single-output. Unbound variables are left alone.
pub fn substitute(c: &Circuit, bindings: &HashMap<VarId, Circuit>) -> Circuit {
    let mut out = Circuit::new();
    out.set_domain(c.domain());
    let mut imported: HashMap<VarId, NodeId> = HashMap::new();
    let mut map: Vec<NodeId> = Vec::with_capacity(c.len());
    for node in c.nodes() {
        let id = match node {
            Node::Var(v) => match bindings.get(v) {
                Some(b) => match imported.get(v) {
                    Some(&id) => id,
                    None => {
                        let id = out.import_output(b);
                        imported.insert(*v, id);
                        id
                    }
                },
                None => out.push(Node::Var(*v)),
            },
            other => out.push(remap(other, &map)),
        };
        map.push(id);
    }
    out.set_outputs(c.outputs().iter().map(|o| map[o.idx()]).collect());
    out.set_xvars(c.xvars());
    out
}

fn remap(node: &Node, map: &[NodeId]) -> Node {
    let m = |c: &NodeId| map[c.idx()];
    match node {
        Node::Const(v) => Node::Const(*v),
        Node::Var(v) => Node::Var(*v),
        Node::Lin(ts) => Node::Lin(ts.iter().map(|(k, c)| (*k, m(c))).collect()),
        Node::Mul(cs) => Node::Mul(cs.iter().map(m).collect()),
        Node::Div(a, b) => Node::Div(m(a), m(b)),
    }
}

/// Drops nodes unreachable from the outputs, preserving order.
pub fn prune(c: &Circuit) -> Circuit {
    let live = c.reachable();
    let mut out = Circuit::with_vars(c.xvars(), c.fvars());
    out.set_domain(c.domain());
    let mut map = vec![NodeId(u32::MAX); c.len()];
    for (i, node) in c.nodes().iter().enumerate() {
        if live[i] {
            map[i] = out.push(remap(node, &map));
        }
    }
    out.set_outputs(c.outputs().iter().map(|o| map[o.idx()]).collect());
    out
}

/// Rewrites products to fan-in exactly 2: wider products become left-leaning
/// chains, unary products collapse into their child.
pub fn binarize(c: &Circuit) -> Circuit {
    let mut out = Circuit::with_vars(c.xvars(), c.fvars());
    out.set_domain(c.domain());
    let mut map: Vec<NodeId> = Vec::with_capacity(c.len());
    for node in c.nodes() {
        let id = match node {
            Node::Mul(cs) => {
                let mut acc = map[cs[0].idx()];
                for ch in &cs[1..] {
                    acc = out.mul(vec![acc, map[ch.idx()]]);
                }
                acc
            }
            other => out.push(remap(other, &map)),
        };
        map.push(id);
    }
    out.set_outputs(c.outputs().iter().map(|o| map[o.idx()]).collect());
    out
}

/// Gives every use of a leaf its own copy, so leaves are never shared.
pub fn unshare_leaves(c: &Circuit) -> Circuit {
    let mut out = Circuit::with_vars(c.xvars(), c.fvars());
    out.set_domain(c.domain());
    let mut map: Vec<Option<NodeId>> = Vec::with_capacity(c.len());
    let leaf = |out: &mut Circuit, ch: NodeId, map: &[Option<NodeId>]| match map[ch.idx()] {
        Some(id) => id,
        None => out.push(c.node(ch).clone()),
    };
    for node in c.nodes() {
        let id = match node {
            Node::Const(_) | Node::Var(_) => None,
            Node::Lin(ts) => {
                let ts = ts.iter().map(|&(k, ch)| (k, leaf(&mut out, ch, &map))).collect();
                Some(out.lin(ts))
            }
            Node::Mul(cs) => {
                let cs = cs.iter().map(|&ch| leaf(&mut out, ch, &map)).collect();
                Some(out.mul(cs))
            }
            Node::Div(a, b) => {
                let a = leaf(&mut out, *a, &map);
                let b = leaf(&mut out, *b, &map);
                Some(out.div(a, b))
            }
        };
        map.push(id);
    }
    let outs = c.outputs().iter().map(|&o| leaf(&mut out, o, &map)).collect();
    out.set_outputs(outs);
    out
}

/// Splits a single-output circuit with divisions into division-free
/// numerator and denominator circuits by carrying a (numerator, denominator)
/// pair along every wire. The pair is not reduced to lowest terms.
pub fn split_division(c: &Circuit) -> Result<(Circuit, Circuit), CircuitError> {
    let out_id = c.output()?;
    let mut w = Circuit::with_vars(c.xvars(), c.fvars());
    w.set_domain(c.domain());
    // den == None means the denominator is 1.
    let mut pairs: Vec<(NodeId, Option<NodeId>)> = Vec::with_capacity(c.len());
    for node in c.nodes() {
        let pair = match node {
            Node::Const(_) | Node::Var(_) => (w.push(node.clone()), None),
            Node::Mul(cs) => {
                let nums = cs.iter().map(|ch| pairs[ch.idx()].0).collect();
                let dens: Vec<NodeId> = cs.iter().filter_map(|ch| pairs[ch.idx()].1).collect();
                let num = w.mul(nums);
                let den = match dens.len() {
                    0 => None,
                    1 => Some(dens[0]),
                    _ => Some(w.mul(dens)),
                };
                (num, den)
            }
            Node::Div(a, b) => {
                let (na, da) = pairs[a.idx()];
                let (nb, db) = pairs[b.idx()];
                let num = match db {
                    Some(db) => w.mul(vec![na, db]),
                    None => na,
                };
                let den = match da {
                    Some(da) => w.mul(vec![da, nb]),
                    None => nb,
                };
                (num, Some(den))
            }
            Node::Lin(ts) => {
                let mut terms: Vec<(i64, NodeId)> = Vec::new();
                let mut den: Option<NodeId> = None;
                for &(k, ch) in ts {
                    let (n, d) = pairs[ch.idx()];
                    match (d, den) {
                        (None, None) => terms.push((k, n)),
                        (None, Some(acc)) => {
                            let t = w.mul(vec![n, acc]);
                            terms.push((k, t));
                        }
                        (Some(d), acc) => {
                            // (N/A) + k n/d = (N d + k n A) / (A d)
                            terms = scale_terms(&mut w, terms, d);
                            let t = match acc {
                                Some(acc) => w.mul(vec![n, acc]),
                                None => n,
                            };
                            terms.push((k, t));
                            den = Some(match acc {
                                Some(acc) => w.mul(vec![acc, d]),
                                None => d,
                            });
                        }
                    }
                }
                (w.lin(terms), den)
            }
        };
        pairs.push(pair);
    }
    let (n, d) = pairs[out_id.idx()];
    let mut num = w.clone();
    num.set_outputs(vec![n]);
    let num = prune(&num);
    let den = match d {
        Some(d) => {
            let mut den = w;
            den.set_outputs(vec![d]);
            prune(&den)
        }
        None => {
            let mut one = Circuit::build(|c| c.constant(1));
            one.set_domain(c.domain());
            one
        }
    };
    Ok((num, den))
}

fn scale_terms(w: &mut Circuit, terms: Vec<(i64, NodeId)>, d: NodeId) -> Vec<(i64, NodeId)> {
    match terms.len() {
        0 => terms,
        1 => {
            let (k, n) = terms[0];
            vec![(k, w.mul(vec![n, d]))]
        }
        _ => {
            let sum = w.lin(terms);
            vec![(1, w.mul(vec![sum, d]))]
        }
    }
}
