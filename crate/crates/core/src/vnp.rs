//! Explicit Hilbert-like refutations of unsatisfiable CNFs.
//!
//! With `b(e, x) = e x + (1 - e)(1 - x)` the terms `t_e = prod_j b(e_j, x_j)`
//! over `e in {0,1}^n` sum to 1. Grouping the cube greedily by the first
//! clause each assignment falsifies, clause polynomial `C_i` divides every
//! term of its group, which yields the certificate
//! `sum_i f_i * sum_{e in A_i} prod_{j not in clause i} b(e_j, x_j)`.

use thiserror::Error;

use crate::circuit::{Circuit, NodeId};
use crate::cnf::CnfFormula;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VnpError {
    #[error("{n} variables exceed the limit of {limit} for this mode")]
    CubeTooLarge { n: u32, limit: u32 },
    #[error("clause {0} repeats a literal")]
    DuplicateLiteral(usize),
    #[error("clause order is not a permutation of 1..={0}")]
    BadPermutation(usize),
}

pub const PARTITION_LIMIT: u32 = 24;
pub const EXPLICIT_LIMIT: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyPartition {
    /// `parts[i]` holds the assignments (bit `j-1` is `x_j`) whose first
    /// falsified clause, in the chosen order, is clause `i+1`.
    pub parts: Vec<Vec<u64>>,
    /// Satisfying assignments.
    pub uncovered: Vec<u64>,
}

fn check_order(order: Option<&[usize]>, m: usize) -> Result<Vec<usize>, VnpError> {
    match order {
        None => Ok((0..m).collect()),
        Some(o) => {
            let mut seen = vec![false; m];
            for &k in o {
                if k == 0 || k > m || seen[k - 1] {
                    return Err(VnpError::BadPermutation(m));
                }
                seen[k - 1] = true;
            }
            if o.len() != m {
                return Err(VnpError::BadPermutation(m));
            }
            Ok(o.iter().map(|k| k - 1).collect())
        }
    }
}

/// Greedy partition of `{0,1}^n` in file order.
pub fn greedy_partition(cnf: &CnfFormula) -> Result<GreedyPartition, VnpError> {
    greedy_partition_ordered(cnf, None)
}

/// Greedy partition visiting clauses in `order` (1-based clause indices).
/// Parts stay indexed by the original clause numbers.
pub fn greedy_partition_ordered(cnf: &CnfFormula, order: Option<&[usize]>) -> Result<GreedyPartition, VnpError> {
    if cnf.n_vars > PARTITION_LIMIT {
        return Err(VnpError::CubeTooLarge { n: cnf.n_vars, limit: PARTITION_LIMIT });
    }
    let order = check_order(order, cnf.clauses.len())?;
    let total = 1u64 << cnf.n_vars;
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(16);
    let chunks = if total >= 1 << 14 { threads as u64 } else { 1 };
    let step = total.div_ceil(chunks);
    let classify = |lo: u64, hi: u64| {
        let mut parts = vec![Vec::new(); cnf.clauses.len()];
        let mut uncovered = Vec::new();
        for a in lo..hi {
            match order.iter().find(|&&i| !CnfFormula::clause_satisfied(&cnf.clauses[i], a)) {
                Some(&i) => parts[i].push(a),
                None => uncovered.push(a),
            }
        }
        (parts, uncovered)
    };
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..chunks)
            .map(|k| {
                let (lo, hi) = (k * step, ((k + 1) * step).min(total));
                let classify = &classify;
                s.spawn(move || classify(lo, hi))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut out = GreedyPartition { parts: vec![Vec::new(); cnf.clauses.len()], uncovered: Vec::new() };
    for (parts, unc) in results {
        for (acc, p) in out.parts.iter_mut().zip(parts) {
            acc.extend(p);
        }
        out.uncovered.extend(unc);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VnpMode {
    Explicit,
    Summand,
}

#[derive(Debug, Clone, Default)]
pub struct VnpOptions {
    /// Clause visiting order for the greedy partition (1-based).
    pub order: Option<Vec<usize>>,
    /// Widen the placeholder range to `m + n` so the certificate matches a
    /// system that also carries the Boolean axioms.
    pub pad_boolean_axioms: bool,
}

fn check_literals(cnf: &CnfFormula) -> Result<(), VnpError> {
    for (i, cl) in cnf.clauses.iter().enumerate() {
        let mut s = cl.clone();
        s.sort();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Err(VnpError::DuplicateLiteral(i + 1));
        }
    }
    Ok(())
}

/// `sum_i f_i * sum_{e in A_i} prod_{j not in clause i} b(e_j, x_j)` with
/// `b(1, x) = x` and `b(0, x) = 1 - x`; constant-free and of depth at most 4.
pub fn build_explicit(cnf: &CnfFormula, opts: &VnpOptions) -> Result<Circuit, VnpError> {
    if cnf.n_vars > EXPLICIT_LIMIT {
        return Err(VnpError::CubeTooLarge { n: cnf.n_vars, limit: EXPLICIT_LIMIT });
    }
    check_literals(cnf)?;
    let part = greedy_partition_ordered(cnf, opts.order.as_deref())?;
    let n = cnf.n_vars;
    let mut c = Circuit::with_vars(n, 0);
    let pos: Vec<NodeId> = (1..=n).map(|j| c.x(j)).collect();
    let mut neg: Vec<Option<NodeId>> = vec![None; n as usize];
    let mut terms = Vec::new();
    for (i, (cl, a_i)) in cnf.clauses.iter().zip(&part.parts).enumerate() {
        let f = c.f(i as u32 + 1);
        let inside: Vec<bool> = {
            let mut v = vec![false; n as usize];
            for l in cl {
                v[l.unsigned_abs() as usize - 1] = true;
            }
            v
        };
        let mut summands = Vec::with_capacity(a_i.len());
        for &e in a_i {
            let mut fs = Vec::new();
            for j in 0..n as usize {
                if inside[j] {
                    continue;
                }
                fs.push(if (e >> j) & 1 == 1 { pos[j] } else { *neg[j].get_or_insert_with(|| c.one_minus(pos[j])) });
            }
            let t = match fs.len() {
                0 => c.constant(1),
                1 => fs[0],
                _ => c.mul(fs),
            };
            summands.push((1, t));
        }
        let coef = if summands.is_empty() { c.constant(0) } else { c.lin(summands) };
        terms.push((1, c.mul(vec![f, coef])));
    }
    let root = if terms.is_empty() { c.constant(0) } else { c.lin(terms) };
    c.set_outputs(vec![root]);
    c.set_fvars(cnf.clauses.len() as u32);
    if opts.pad_boolean_axioms {
        c.set_fvars(cnf.clauses.len() as u32 + n);
    }
    Ok(c)
}

/// The summand whose sum over `e in {0,1}^n` is the certificate:
/// `sum_i f_i C_i(e) prod_{j<i} (1 - C_j(e)) prod_{j not in clause i} b(e_j, x_j)`.
/// Variable `e_j` is represented as `x_{n+j}`.
pub fn build_summand(cnf: &CnfFormula, opts: &VnpOptions) -> Result<Circuit, VnpError> {
    check_literals(cnf)?;
    let order = check_order(opts.order.as_deref(), cnf.clauses.len())?;
    let n = cnf.n_vars;
    let mut c = Circuit::with_vars(2 * n, 0);
    let xs: Vec<NodeId> = (1..=n).map(|j| c.x(j)).collect();
    let es: Vec<NodeId> = (1..=n).map(|j| c.x(n + j)).collect();
    let b: Vec<NodeId> = (0..n as usize)
        .map(|j| {
            let ex = c.mul(vec![es[j], xs[j]]);
            let ne = c.one_minus(es[j]);
            let nx = c.one_minus(xs[j]);
            let nn = c.mul(vec![ne, nx]);
            c.add(ex, nn)
        })
        .collect();
    // C_i(e): positive literal -> 1 - e_j, negative -> e_j.
    let clause_at_e: Vec<NodeId> = cnf
        .clauses
        .iter()
        .map(|cl| {
            let fs: Vec<NodeId> = cl
                .iter()
                .map(|&l| {
                    let e = es[l.unsigned_abs() as usize - 1];
                    if l > 0 {
                        c.one_minus(e)
                    } else {
                        e
                    }
                })
                .collect();
            match fs.len() {
                0 => c.constant(1),
                1 => fs[0],
                _ => c.mul(fs),
            }
        })
        .collect();
    let mut terms = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        let mut fs = vec![c.f(i as u32 + 1), clause_at_e[i]];
        for &j in &order[..pos] {
            fs.push(c.one_minus(clause_at_e[j]));
        }
        let mut inside = vec![false; n as usize];
        for l in &cnf.clauses[i] {
            inside[l.unsigned_abs() as usize - 1] = true;
        }
        fs.extend((0..n as usize).filter(|&j| !inside[j]).map(|j| b[j]));
        terms.push((1, c.mul(fs)));
    }
    let root = if terms.is_empty() { c.constant(0) } else { c.lin(terms) };
    c.set_outputs(vec![root]);
    c.set_fvars(cnf.clauses.len() as u32);
    if opts.pad_boolean_axioms {
        c.set_fvars(cnf.clauses.len() as u32 + n);
    }
    Ok(c)
}

pub fn build_certificate(cnf: &CnfFormula, mode: VnpMode, opts: &VnpOptions) -> Result<Circuit, VnpError> {
    match mode {
        VnpMode::Explicit => build_explicit(cnf, opts),
        VnpMode::Summand => build_summand(cnf, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{substitute, VarId};
    use crate::cnf::{random_3cnf, translate};
    use crate::ips::{is_hilbert_like, verify, Certificate, VerifyMode};
    use crate::poly::{expand_circuit_int, Caps};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    fn contradiction() -> CnfFormula {
        CnfFormula::new(1, vec![vec![1], vec![-1]])
    }

    #[test]
    fn partition_examples() {
        let p = greedy_partition(&contradiction()).unwrap();
        assert_eq!(p, GreedyPartition { parts: vec![vec![0], vec![1]], uncovered: vec![] });
        let p = greedy_partition(&CnfFormula::new(1, vec![vec![1]])).unwrap();
        assert_eq!(p, GreedyPartition { parts: vec![vec![0]], uncovered: vec![1] });
        let p = greedy_partition(&CnfFormula::new(2, vec![vec![], vec![1]])).unwrap();
        assert_eq!(p.parts, vec![vec![0, 1, 2, 3], vec![]]);
        assert!(matches!(
            greedy_partition(&CnfFormula::new(25, vec![])),
            Err(VnpError::CubeTooLarge { n: 25, limit: 24 })
        ));
    }

    #[test]
    fn partition_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let f = random_3cnf(&mut rng, 7, 20);
            let p = greedy_partition(&f).unwrap();
            let mut all: Vec<u64> = p.parts.iter().flatten().chain(&p.uncovered).copied().collect();
            all.sort();
            assert_eq!(all, (0..128).collect::<Vec<_>>());
            for (i, part) in p.parts.iter().enumerate() {
                for &a in part {
                    assert!(!CnfFormula::clause_satisfied(&f.clauses[i], a));
                    assert!(f.clauses[..i].iter().all(|cl| CnfFormula::clause_satisfied(cl, a)));
                }
            }
            assert_eq!(p.uncovered.is_empty(), !f.is_satisfiable().unwrap());
        }
    }

    #[test]
    fn parallel_chunks_match_sequential_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let f = random_3cnf(&mut rng, 15, 60);
        let p = greedy_partition(&f).unwrap();
        for (i, part) in p.parts.iter().enumerate() {
            assert!(part.windows(2).all(|w| w[0] < w[1]));
            for &a in part {
                assert_eq!(f.first_falsified(a), Some(i));
            }
        }
    }

    #[test]
    fn contradiction_certificate_is_f1_plus_f2() {
        let c = build_explicit(&contradiction(), &VnpOptions::default()).unwrap();
        let e = expand_circuit_int(&c, Caps::default()).unwrap();
        assert_eq!(e.to_string(), "1*f1 + 1*f2");
        assert!(c.metrics().constant_free);
    }

    #[test]
    fn unsat_certificates_verify_and_sat_ones_fail() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut seen = (0, 0);
        for k in 0..40 {
            let f = random_3cnf(&mut rng, 5 + (k % 3), 30);
            let sys = translate(&f, false);
            let cert = Certificate::refutation(build_explicit(&f, &VnpOptions::default()).unwrap());
            let v = verify(&cert, &sys, VerifyMode::exact(), &mut rng).unwrap();
            if f.is_satisfiable().unwrap() {
                seen.1 += 1;
                assert_eq!(v.failure_condition, Some(2));
            } else {
                seen.0 += 1;
                assert!(v.accepted);
                assert!(is_hilbert_like(&cert, Caps::default()).unwrap());
                assert!(cert.circuit.metrics().constant_free);
                assert!(cert.circuit.metrics().depth <= 4);
            }
        }
        assert!(seen.0 > 0 && seen.1 > 0, "{seen:?}");
    }

    #[test]
    fn satisfiable_residual_is_uncovered_terms() {
        // (x1): C(x,F) = (1 - x1) * 1, the residual is the uncovered term b(1, x1) = x1.
        let f = CnfFormula::new(1, vec![vec![1]]);
        let c = build_explicit(&f, &VnpOptions::default()).unwrap();
        let sys = translate(&f, false);
        let e = expand_circuit_int(&substitute(&c, &sys.bindings()), Caps::default()).unwrap();
        assert_eq!(e.to_string(), "-1*x1 + 1");
    }

    #[test]
    fn summand_sums_to_explicit_certificate() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..5 {
            let f = random_3cnf(&mut rng, 4, 14);
            let explicit = build_explicit(&f, &VnpOptions::default()).unwrap();
            let summand = build_summand(&f, &VnpOptions::default()).unwrap();
            let mut total = Circuit::new();
            let mut parts = Vec::new();
            for e in 0..16u64 {
                let bind: HashMap<VarId, Circuit> = (1..=4)
                    .map(|j| (VarId::X(4 + j), Circuit::build(|c| c.constant(((e >> (j - 1)) & 1) as i64))))
                    .collect();
                parts.push((1, total.import_output(&substitute(&summand, &bind))));
            }
            let o = total.lin(parts);
            total.set_outputs(vec![o]);
            let a = expand_circuit_int(&total, Caps::default()).unwrap();
            let b = expand_circuit_int(&explicit, Caps::default()).unwrap();
            assert_eq!(a, b);
            assert!(summand.metrics().constant_free);
        }
    }

    #[test]
    fn order_and_padding_options() {
        let f = contradiction();
        let opts = VnpOptions { order: Some(vec![2, 1]), pad_boolean_axioms: true };
        let c = build_explicit(&f, &opts).unwrap();
        assert_eq!(c.fvars(), 3);
        let sys = translate(&f, true);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(verify(&Certificate::refutation(c), &sys, VerifyMode::exact(), &mut rng).unwrap().accepted);
        let bad = VnpOptions { order: Some(vec![1, 1]), ..Default::default() };
        assert_eq!(build_explicit(&f, &bad), Err(VnpError::BadPermutation(2)));
        let dup = CnfFormula::new(2, vec![vec![1, 1, 2]]);
        assert_eq!(build_explicit(&dup, &VnpOptions::default()), Err(VnpError::DuplicateLiteral(1)));
    }
}
