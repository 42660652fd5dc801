use super::*;
use crate::cnf::{clause_circuit, random_3cnf};
use crate::frege::clause_formula;
use crate::poly::{parse_poly, Poly};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bits_of(e: &BitEncoding) -> Vec<bool> {
    e.to_bools().expect("constant encoding")
}

fn value(e: &BitEncoding, point: &[u64], p: Prime) -> u64 {
    let recs = decode_records(&bits_of(e), e.layout().unwrap()).unwrap();
    evaluate_records(&recs, point, p)
}

fn random_records(rng: &mut ChaCha8Rng, gates: usize, vars: usize) -> Vec<Record> {
    (0..gates)
        .map(|i| {
            if i == 0 || rng.gen_bool(0.3) {
                if rng.gen_bool(0.2) {
                    Record::constant(rng.gen())
                } else {
                    Record::var(rng.gen_range(0..vars))
                }
            } else {
                let kind = [RecordKind::Add, RecordKind::Sub, RecordKind::Mul][rng.gen_range(0..3)];
                let pick = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.15) { None } else { Some(rng.gen_range(0..i)) };
                let (a, b) = (pick(rng), pick(rng));
                Record::gate(kind, a, b)
            }
        })
        .collect()
}

#[test]
fn clause_bit_examples() {
    let cnf = CnfFormula::new(4, vec![vec![1, -2, 3], vec![4, 4, -1]]);
    let e = encode_clause_bits(&cnf).unwrap();
    assert_eq!(e.bits.len(), 18);
    let one = CnfFormula::new(4, vec![vec![1, -2, 3]]);
    let b = bits_of(&encode_clause_bits(&one).unwrap());
    let want = [0, 0, 1, 0, 1, 0, 1, 0, 1].map(|x| x == 1);
    assert_eq!(b, want);
    let tiny = CnfFormula::new(1, vec![vec![1, -1, 1]]);
    assert_eq!(bits_of(&encode_clause_bits(&tiny).unwrap()), vec![true, false, true]);
    let bad = CnfFormula::new(2, vec![vec![1, 2, 1], vec![2]]);
    assert_eq!(encode_clause_bits(&bad), Err(EncodeError::WidthNot3 { clause: 2, width: 1 }));
    assert_eq!(pad_to_width3(&bad).clauses[1], vec![2, 2, 2]);
}

#[test]
fn clause_bit_lengths() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let n = rng.gen_range(3..40u32);
        let m = rng.gen_range(1..30);
        let cnf = random_3cnf(&mut rng, n, m);
        let w = (n as f64).log2().ceil() as usize;
        assert_eq!(encode_clause_bits(&cnf).unwrap().bits.len(), 3 * m * (w + 1));
    }
}

#[test]
fn roles_partition_the_bits() {
    let enc = encode_clause_bits(&CnfFormula::new(5, vec![vec![1, 2, 3], vec![-4, 5, 1]])).unwrap();
    let circ = BitEncoding::from_records(&[Record::var(0), Record::identity(0)], Layout::new(2, 3)).unwrap();
    for e in [enc, circ] {
        let mut seen = vec![0; e.bits.len()];
        for (_, r) in e.roles() {
            for i in r {
                seen[i] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
    }
}

/// Decodes a clause encoding given as raw bits and evaluates it directly;
/// an index past `n` names no variable, so its literal is false.
fn truth_oracle(bits: &[bool], n: usize, m: usize, p: &[bool]) -> bool {
    let w = ceil_log2(n);
    (0..m).all(|c| {
        (0..3).any(|j| {
            let base = (c * 3 + j) * (w + 1);
            let idx = bits[base..base + w].iter().fold(0, |acc, &b| (acc << 1) | b as usize);
            idx < n && p[idx] == bits[base + w]
        })
    })
}

#[test]
fn truth_bool_matches_decoded_semantics() {
    for (n, m) in [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2)] {
        let tb = build_truth_bool(n, m);
        let nv = tb.pool.len();
        assert!(nv <= 21);
        let enc_vars: Vec<u32> =
            tb.encoding.bits.iter().map(|b| if let B::Var(v) = b { *v } else { unreachable!() }).collect();
        let mut lanes = vec![0u64; nv + 1];
        let total = 1u64 << nv;
        let mut base = 0;
        while base < total {
            for v in 1..=nv {
                lanes[v] = (0..64u64).filter(|t| ((base + t) >> (v - 1)) & 1 == 1).fold(0, |m, t| m | 1 << t);
            }
            let got = eval_lanes(&tb.formula, &lanes);
            for t in 0..64.min(total - base) {
                let a = base + t;
                let p: Vec<bool> = tb.p.iter().map(|&v| (a >> (v - 1)) & 1 == 1).collect();
                let bits: Vec<bool> = enc_vars.iter().map(|&v| (a >> (v - 1)) & 1 == 1).collect();
                assert_eq!((got >> t) & 1 == 1, truth_oracle(&bits, n, m, &p), "n={n} m={m} a={a}");
            }
            base += 64;
        }
    }
}

#[test]
fn truth_bool_on_contradiction() {
    let cnf = pad_to_width3(&CnfFormula::new(1, vec![vec![1], vec![-1]]));
    let f = truth_bool_fixed(&cnf).unwrap();
    let B::And(cl) = &f else { panic!("conjunction expected") };
    assert!(cl[0].eval(1));
    assert!(!cl[1].eval(1));
    assert!(!f.eval(1));
    assert!(!f.eval(0));
}

#[test]
fn truth_bool_size_follows_display() {
    for (n, m) in [(1, 1), (4, 2), (7, 3), (16, 5)] {
        let w = ceil_log2(n);
        let iff_size = 9;
        let term = 1 + (1 + iff_size * w) + iff_size;
        let want = 1 + m * (1 + 3 * (1 + n * term));
        assert_eq!(formula_size(&build_truth_bool(n, m).formula), want);
    }
}

#[test]
fn truth_bool_simplifies_to_clause() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let n = rng.gen_range(1..12u32);
        let clause: Vec<i32> = (0..3)
            .map(|_| {
                let v = rng.gen_range(1..=n) as i32;
                if rng.gen() {
                    v
                } else {
                    -v
                }
            })
            .collect();
        let cnf = CnfFormula::new(n, vec![clause.clone()]);
        let s = simplify_constants(&truth_bool_fixed(&cnf).unwrap());
        assert_eq!(s, clause_formula(&clause), "{clause:?}");
    }
    let cnf = random_3cnf(&mut rng, 6, 4);
    let s = simplify_constants(&truth_bool_fixed(&cnf).unwrap());
    assert_eq!(s, B::And(cnf.clauses.iter().map(|c| clause_formula(c)).collect()));
}

#[test]
fn simplify_examples() {
    let x = B::Var(1);
    assert_eq!(simplify_constants(&B::And(vec![x.clone(), tt()])), x);
    assert_eq!(simplify_constants(&B::Or(vec![x.clone(), tt()])), tt());
    assert_eq!(simplify_constants(&B::Or(vec![x.clone(), ff()])), x);
    assert_eq!(simplify_constants(&B::And(vec![x.clone(), ff()])), ff());
    assert_eq!(simplify_constants(&B::Xor(vec![x.clone(), tt()])), B::not(B::Xor(vec![x.clone()])));
    assert_eq!(simplify_constants(&B::Xor(vec![])), tt());
}

fn arb_formula() -> impl Strategy<Value = BoolFormula> {
    let leaf = prop_oneof![(1u32..5).prop_map(B::Var), Just(tt()), Just(ff())];
    leaf.prop_recursive(4, 32, 4, |inner| {
        prop_oneof![
            inner.clone().prop_map(B::not),
            proptest::collection::vec(inner.clone(), 0..4).prop_map(B::And),
            proptest::collection::vec(inner.clone(), 0..4).prop_map(B::Or),
            proptest::collection::vec(inner, 0..4).prop_map(B::Xor),
        ]
    })
}

fn has_inner_constant(f: &BoolFormula) -> bool {
    match f {
        B::Var(_) => false,
        B::Not(a) => as_const(a).is_some() || has_inner_constant(a),
        B::And(cs) | B::Or(cs) | B::Xor(cs) => cs.iter().any(|c| as_const(c).is_some() || has_inner_constant(c)),
    }
}

proptest! {
    #[test]
    fn simplify_preserves_semantics(f in arb_formula()) {
        let s = simplify_constants(&f);
        for a in 0..16u64 {
            prop_assert_eq!(f.eval(a), s.eval(a));
        }
        prop_assert_eq!(simplify_constants(&s), s.clone());
        prop_assert!(!has_inner_constant(&s));
    }

    #[test]
    fn tseitin_is_equisatisfiable(f in arb_formula()) {
        let sat = (0..16u64).any(|a| f.eval(a));
        let cnf = tseitin(&f, 4);
        if cnf.n_vars <= crate::cnf::MAX_ENUM_VARS {
            prop_assert_eq!(cnf.is_satisfiable().unwrap(), sat);
        }
    }
}

#[test]
fn records_round_trip_and_encode_circuits() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let p = Prime::new(101).unwrap();
    for _ in 0..30 {
        let l = Layout::new(6, 3);
        let recs = random_records(&mut rng, 6, 3);
        let bits = records_to_bits(&recs, l).unwrap();
        assert_eq!(decode_records(&bits, l).unwrap(), recs);
    }
    for s in ["x1^2 - x1", "3*x1*x2 - 5*f1 + 7", "-2*f2*x1 + f1", "0", "12"] {
        let poly = parse_poly(s, p).unwrap();
        let recs = encode_circuit(&poly.to_circuit(), 2).unwrap();
        for _ in 0..5 {
            let pt: Vec<u64> = (0..4).map(|_| rng.gen_range(0..101)).collect();
            let want = poly.evaluate(|v| match v {
                VarId::X(i) => p.elem(pt[i as usize - 1]),
                VarId::F(j) => p.elem(pt[2 + j as usize - 1]),
            });
            assert_eq!(evaluate_records(&recs, &pt, p), want.value(), "{s}");
        }
    }
}

#[test]
fn brute_force_k_matches_reference() {
    // Every encoding of a two-record circuit over one variable.
    let l = Layout::new(2, 1);
    let bk = BruteForceK::new(l, 2).unwrap();
    let k = bk.circuit();
    k.validate().unwrap();
    let nb = l.total_bits();
    for a in 0..1u32 << nb {
        let bits: Vec<bool> = (0..nb).map(|i| (a >> i) & 1 == 1).collect();
        assert_eq!(k.eval(&bits), bk.decide(&bits).unwrap(), "{a:b}");
    }
    let l = Layout::new(4, 2);
    let bk = BruteForceK::new(l, 3).unwrap();
    let k = bk.circuit();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut zeros = 0;
    for _ in 0..300 {
        let recs = random_records(&mut rng, 4, 2);
        let bits = records_to_bits(&recs, l).unwrap();
        let want = bk.decide(&bits).unwrap();
        zeros += want as usize;
        assert_eq!(k.eval(&bits), want);
    }
    let zero =
        [Record::var(0), Record::gate(RecordKind::Sub, Some(0), Some(0)), Record::identity(1), Record::identity(2)];
    assert!(k.eval(&records_to_bits(&zero, l).unwrap()));
    assert!(zeros < 300);
}

#[test]
fn transformers_match_semantics() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let p = Prime::new(13).unwrap();
    for _ in 0..40 {
        let recs = random_records(&mut rng, 4, 3);
        let l = Layout::with_index_bits(4, 3, 3).unwrap();
        let c = BitEncoding::from_records(&recs, l).unwrap();
        let pt: Vec<u64> = (0..3).map(|_| rng.gen_range(0..13)).collect();
        let v = evaluate_records(&recs, &pt, p);
        assert_eq!(value(&one_minus(&c).unwrap(), &pt, p), (1 + 13 - v) % 13);
        assert_eq!(value(&pad_encoding(&c, 7).unwrap(), &pt, p), v);
        let bools: Vec<bool> = (0..3).map(|_| rng.gen()).collect();
        let plugged = plug_constants(&c, &bools.iter().map(|&b| konst(b)).collect::<Vec<_>>()).unwrap();
        let pb: Vec<u64> = bools.iter().map(|&b| b as u64).collect();
        assert_eq!(value(&plugged, &[5, 6, 7], p), evaluate_records(&recs, &pb, p));
        let pi = [2, 0, 1];
        let permuted: Vec<u64> = (0..3).map(|i| pt[pi[i]]).collect();
        assert_eq!(value(&permute_vars(&c, &pi).unwrap(), &pt, p), evaluate_records(&recs, &permuted, p));
        let mut z = pt.clone();
        z[1] = 0;
        assert_eq!(value(&substitute_zero(&c, &[1]).unwrap(), &pt, p), evaluate_records(&recs, &z, p));
        // C(x, G) at variable 2, with G a random two-record circuit.
        let grecs = random_records(&mut rng, 2, 3);
        let g = BitEncoding::from_records(&grecs, Layout { gates: 2, ..l }).unwrap();
        let mut targets = vec![None; 3];
        targets[2] = Some(1);
        let cg = concat_encodings(&g, &redirect_vars(&shift_gates(&c, 2).unwrap(), &targets).unwrap(), 3).unwrap();
        let mut sub = pt.clone();
        sub[2] = evaluate_records(&grecs, &pt, p);
        assert_eq!(value(&cg, &pt, p), evaluate_records(&recs, &sub, p));
    }
}

#[test]
fn clause_records_compute_the_clause_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let p = Prime::new(101).unwrap();
    let cnf = random_3cnf(&mut rng, 5, 4);
    let phi = encode_clause_bits(&cnf).unwrap();
    let q = clause_records(&phi, 6).unwrap();
    let recs = decode_records(&bits_of(&q), q.layout().unwrap()).unwrap();
    for _ in 0..10 {
        let pt: Vec<u64> = (0..5).map(|_| rng.gen_range(0..101)).collect();
        for (i, cl) in cnf.clauses.iter().enumerate() {
            let want = crate::poly::expand_circuit(&clause_circuit(cl), p, Default::default())
                .unwrap()
                .evaluate(|v| p.elem(pt[v.index() as usize - 1]));
            assert_eq!(evaluate_records(&recs[..8 * i + 8], &pt, p), want.value());
        }
    }
}

/// `f1 * A + f2 * B` with `A (1-x)^3 + B x^3 = 1`.
fn contradiction_certificate() -> Circuit {
    let p = Prime::new(1_000_003).unwrap();
    let a = parse_poly("1 + 3*x1 + 6*x1^2", p).unwrap();
    let b = parse_poly("10 - 15*x1 + 6*x1^2", p).unwrap();
    let f1 = Poly::var(p, VarId::F(1));
    let f2 = Poly::var(p, VarId::F(2));
    f1.mul(&a).add(&f2.mul(&b)).to_circuit()
}

fn toy_proof(cert: &Circuit) -> (BitEncoding, BitEncoding) {
    let cnf = pad_to_width3(&CnfFormula::new(2, vec![vec![1], vec![-1]]));
    let phi = encode_clause_bits(&cnf).unwrap();
    let recs = encode_circuit(cert, 2).unwrap();
    let w = ceil_log2(8 * 2 + recs.len() + 1);
    let c = BitEncoding::from_records(&recs, Layout::with_index_bits(recs.len(), 4, w).unwrap()).unwrap();
    (c, phi)
}

#[test]
fn proof_ips_with_single_and_gate() {
    let (c, phi) = toy_proof(&contradiction_certificate());
    let (zero, _) = proof_ips_inputs(&c, &phi).unwrap();
    let width = zero.bits.len();
    let mut nodes: Vec<KNode> = (0..width).map(KNode::Input).collect();
    nodes.push(KNode::And(0, 1));
    let k = KCircuit { inputs: width, nodes, output: width };
    let mut pool = VarPool::new();
    let inst = build_proof_ips(&k, &c, &phi, &mut pool).unwrap();
    let B::Or(parts) = &inst.formula else { panic!("implication expected") };
    let [B::Not(ante), B::And(cons)] = parts.as_slice() else { panic!("implication expected") };
    let B::And(clauses) = ante.as_ref() else { panic!("conjunction expected") };
    assert_eq!(clauses.len(), 2 * (width + 1));
    let o1 = inst.copies[0].output_var;
    let o2 = inst.copies[1].output_var;
    assert_eq!(cons, &vec![B::Var(o1), B::Var(o2)]);
    let (n1, n2) = (&inst.copies[0].node_vars, &inst.copies[1].node_vars);
    assert_eq!(clauses[width], iff(B::Var(n1[width]), B::And(vec![B::Var(n1[0]), B::Var(n1[1])])));
    assert_eq!(clauses[2 * width + 1], iff(B::Var(n2[width]), B::And(vec![B::Var(n2[0]), B::Var(n2[1])])));
    // Everything is fixed, so only K-variables remain.
    assert!(inst.free.is_empty());
    let mut vars = Vec::new();
    formula_vars(&inst.formula, &mut vars);
    let kvars: Vec<u32> = n1.iter().chain(n2).copied().collect();
    assert!(vars.iter().all(|v| kvars.contains(v)));
}

#[test]
fn proof_ips_accepts_a_valid_certificate() {
    let cert = contradiction_certificate();
    let (c, phi) = toy_proof(&cert);
    let (zero, full) = proof_ips_inputs(&c, &phi).unwrap();
    let l = full.layout().unwrap();
    assert_eq!(zero.layout(), Some(l));
    let bk = BruteForceK::new(l, 2).unwrap();
    let k = bk.circuit();
    assert!(bk.decide(&bits_of(&zero)).unwrap());
    assert!(bk.decide(&bits_of(&full)).unwrap());
    let mut pool = VarPool::new();
    let inst = build_proof_ips(&k, &c, &phi, &mut pool).unwrap();
    assert!(evaluate_instance(&inst, &k, pool.len(), &[]));
    assert_eq!(check_instance(&inst, &k, pool.len()).unwrap(), None);
    // Dropping a summand breaks C(x, Q) = 1.
    let p = Prime::new(1_000_003).unwrap();
    let bad = parse_poly("f1 + 3*f1*x1 + 6*f1*x1^2", p).unwrap().to_circuit();
    let (c, phi) = toy_proof(&bad);
    let (_, full) = proof_ips_inputs(&c, &phi).unwrap();
    let bk = BruteForceK::new(full.layout().unwrap(), 2).unwrap();
    let k = bk.circuit();
    let mut pool = VarPool::new();
    let inst = build_proof_ips(&k, &c, &phi, &mut pool).unwrap();
    assert!(!evaluate_instance(&inst, &k, pool.len(), &[]));
}

#[test]
fn layout_mismatch_is_reported() {
    let (c, phi) = toy_proof(&contradiction_certificate());
    let k = KCircuit { inputs: 3, nodes: (0..3).map(KNode::Input).collect(), output: 0 };
    assert!(matches!(build_proof_ips(&k, &c, &phi, &mut VarPool::new()), Err(EncodeError::LayoutMismatch { .. })));
    let l = Layout::new(2, 2);
    let enc = BitEncoding::fresh(Layout::new(3, 2), &mut VarPool::new(), "q").unwrap();
    let k = BruteForceK::new(l, 1).unwrap().circuit();
    assert!(matches!(
        build_pit_axiom(&PitAxiom::Boolean, &k, l, &[enc], &mut VarPool::new()),
        Err(EncodeError::LayoutMismatch { .. })
    ));
}

fn axiom_instance(
    axiom: &PitAxiom,
    l: Layout,
    circuits: impl FnOnce(&mut VarPool) -> Vec<BitEncoding>,
    k: &KCircuit,
) -> (KInstance, usize) {
    let mut pool = VarPool::new();
    let cs = circuits(&mut pool);
    let inst = build_pit_axiom(axiom, k, l, &cs, &mut pool).unwrap();
    assert!(inst.free.len() <= TAUTOLOGY_LIMIT, "{} free", inst.free.len());
    (inst, pool.len())
}

#[test]
fn pit_axioms_are_tautologies_for_brute_force_k() {
    let l2 = Layout::new(2, 2);
    let k2 = BruteForceK::new(l2, 2).unwrap().circuit();
    let l3 = Layout::new(3, 2);
    let k3 = BruteForceK::new(l3, 2).unwrap().circuit();
    let cases: Vec<(PitAxiom, Layout, &KCircuit)> = vec![
        (PitAxiom::Boolean, l2, &k2),
        (PitAxiom::OneMinus, l3, &k3),
        (PitAxiom::SubZero { position: 1 }, l3, &k3),
        (PitAxiom::Permutation(vec![1, 0]), l2, &k2),
    ];
    for (ax, l, k) in cases {
        let (inst, n) = axiom_instance(
            &ax,
            l,
            |pool| match ax {
                PitAxiom::OneMinus => vec![BitEncoding::fresh(Layout { gates: 2, ..l }, pool, "c").unwrap()],
                PitAxiom::SubZero { .. } => {
                    let g = BitEncoding::fresh(Layout { gates: 1, ..l }, pool, "g").unwrap();
                    let base = BitEncoding::from_records(
                        &[Record::var(1), Record::gate(RecordKind::Mul, Some(0), Some(0))],
                        Layout { gates: 2, ..l },
                    )
                    .unwrap();
                    let free: Vec<usize> = (0..8).chain([8, 9, 14, 15]).collect();
                    vec![g, base.free_bits(&free, pool, "c")]
                }
                _ => vec![BitEncoding::fresh(l, pool, "c").unwrap()],
            },
            k,
        );
        assert_eq!(check_instance(&inst, k, n).unwrap(), None, "axiom {}", ax.number());
    }
}

#[test]
fn wrong_testers_break_axioms() {
    let l = Layout::new(3, 2);
    let k = KBuilder::new(l.total_bits());
    let mut k = k;
    let t = k.konst(true);
    let always = k.finish(t);
    let (inst, n) = axiom_instance(
        &PitAxiom::OneMinus,
        l,
        |pool| vec![BitEncoding::fresh(Layout { gates: 2, ..l }, pool, "c").unwrap()],
        &always,
    );
    assert!(check_instance(&inst, &always, n).unwrap().is_some());
    // Reading only the first kind bit is not invariant under renaming x1, x2.
    let l = Layout::new(2, 2);
    let kb = KBuilder::new(l.total_bits());
    let first = kb.input(2);
    let k = kb.finish(first);
    let (inst, n) = axiom_instance(
        &PitAxiom::Permutation(vec![1, 0]),
        l,
        |pool| vec![BitEncoding::fresh(l, pool, "c").unwrap()],
        &k,
    );
    assert!(check_instance(&inst, &k, n).unwrap().is_some());
}

#[test]
fn permutation_identity_keeps_inputs() {
    let l = Layout::new(2, 2);
    let k = BruteForceK::new(l, 1).unwrap().circuit();
    let (inst, _) = axiom_instance(
        &PitAxiom::Permutation(vec![0, 1]),
        l,
        |pool| vec![BitEncoding::fresh(l, pool, "c").unwrap()],
        &k,
    );
    assert_eq!(inst.copies[0].inputs, inst.copies[1].inputs);
}

#[test]
fn axiom_examples_with_fixed_circuits() {
    // Axiom 2 on the constant 0.
    let l = Layout::new(2, 1);
    let k = BruteForceK::new(l, 2).unwrap().circuit();
    let zero = BitEncoding::from_records(&[Record::constant(false)], Layout { gates: 1, ..l }).unwrap();
    let (inst, n) = axiom_instance(&PitAxiom::OneMinus, l, |_| vec![zero], &k);
    let o: Vec<u32> = inst.copies.iter().map(|c| c.output_var).collect();
    let mut lanes = vec![0u64; n + 1];
    for copy in &inst.copies {
        let ins: Vec<u64> = copy.inputs.iter().map(|f| eval_lanes(f, &lanes)).collect();
        for (v, x) in copy.node_vars.iter().zip(k.eval_lanes(&ins)) {
            lanes[*v as usize] = x;
        }
    }
    assert_eq!(lanes[o[0] as usize] & 1, 1);
    assert_eq!(lanes[o[1] as usize] & 1, 0);
    assert!(evaluate_instance(&inst, &k, n, &[]));
    // Axiom 1 on x1^2 - x1: the consequent holds at both Boolean points.
    let l = Layout::new(3, 1);
    let bk = BruteForceK::new(l, 2).unwrap();
    let k = bk.circuit();
    let recs = [
        Record::var(0),
        Record::gate(RecordKind::Mul, Some(0), Some(0)),
        Record::gate(RecordKind::Sub, Some(1), Some(0)),
    ];
    let c = BitEncoding::from_records(&recs, l).unwrap();
    for b in [false, true] {
        let cp = plug_constants(&c, &[konst(b)]).unwrap();
        assert!(k.eval(&bits_of(&cp)));
    }
    assert!(!k.eval(&bits_of(&c)));
    let (inst, n) = axiom_instance(&PitAxiom::Boolean, l, |_| vec![c], &k);
    assert_eq!(inst.free.len(), 1);
    assert_eq!(check_instance(&inst, &k, n).unwrap(), None);
}

#[test]
fn generic_tautology_check_agrees_on_small_instances() {
    // K = one AND gate over a one-record layout; small enough to enumerate
    // the K-variables too.
    let l = Layout::with_index_bits(1, 1, 0).unwrap();
    let mut kb = KBuilder::new(l.total_bits());
    let (a, b) = (kb.input(0), kb.input(1));
    let g = kb.and(a, b);
    let k = kb.finish(g);
    let (inst, n) =
        axiom_instance(&PitAxiom::Permutation(vec![0]), l, |pool| vec![BitEncoding::fresh(l, pool, "c").unwrap()], &k);
    assert!(n <= TAUTOLOGY_LIMIT);
    assert_eq!(is_tautology(&inst.formula).unwrap(), check_instance(&inst, &k, n).unwrap().is_none());
    assert!(is_tautology(&inst.formula).unwrap());
    let not_taut = implies(B::Var(1), B::Var(2));
    assert!(!is_tautology(&not_taut).unwrap());
}
