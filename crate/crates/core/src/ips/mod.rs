//! Ideal Proof System certificates.
//!
//! A certificate is a circuit `C(x, f)` over the variables `x` and the
//! placeholders `f_1..f_m` of a [`PolySystem`]. It proves the target `G`
//! when `C(x, 0) = 0` (condition 1) and `C(x, F(x)) = G(x)` (condition 2);
//! refutations have `G = 1`.

pub mod pit;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rand::Rng;
use thiserror::Error;

use crate::circuit::{substitute, Circuit, CircuitError, Domain, NodeId, VarId};
use crate::cnf::PolySystem;
use crate::field::{FieldElement, Prime};
use crate::poly::{expand_in, Caps, Coeff, Monomial, PolyError, SparsePoly};

pub use pit::{default_prime, pit_is_zero, PitOutcome};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IpsError {
    #[error("prime {p} is too small: randomized checks need p > {needed}")]
    PrimeTooSmall { p: u64, needed: u64 },
    #[error("randomized verification needs division-free circuits")]
    DivisionPresent,
    #[error("placeholder f{index} is out of range for a system of {m} equations")]
    PlaceholderOutOfRange { index: u32, m: usize },
    #[error("certificate has a nonzero placeholder-free part")]
    NonzeroConstantTerm,
    #[error("inverse certificate does not refute the augmented system (condition {0} fails)")]
    InverseCertInvalid(u8),
    #[error("could not split the inverse certificate: {0}")]
    SplitBlowup(PolyError),
    #[error("constructed certificate failed verification (condition {0})")]
    ConstructionFailed(u8),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// What a certificate claims to derive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    /// Refutation: `C(x, F(x)) = 1`.
    One,
    /// Derivation of `G`, a circuit over x-variables.
    Poly(Circuit),
}

impl Target {
    pub fn zero() -> Self {
        Target::Poly(Circuit::build(|c| c.constant(0)))
    }

    /// `G^k`, for radical-membership derivations with an explicit exponent.
    pub fn power(g: &Circuit, k: u32) -> Self {
        assert!(k >= 1);
        let mut c = Circuit::new();
        c.set_domain(g.domain());
        let base = c.import_output(g);
        let out = if k == 1 { base } else { c.mul(vec![base; k as usize]) };
        c.set_outputs(vec![out]);
        Target::Poly(c)
    }

    pub fn circuit(&self) -> Circuit {
        match self {
            Target::One => Circuit::build(|c| c.constant(1)),
            Target::Poly(g) => g.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub circuit: Circuit,
    pub target: Target,
}

impl Certificate {
    pub fn refutation(circuit: Circuit) -> Self {
        Certificate { circuit, target: Target::One }
    }

    pub fn derivation(circuit: Circuit, g: Circuit) -> Self {
        Certificate { circuit, target: Target::Poly(g) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VerifyMode {
    /// Exact expansion over the certificate's declared domain, or over
    /// `F_p` when `field` is given.
    Exact { caps: Caps, field: Option<Prime> },
    /// Random evaluation; the prime defaults to [`default_prime`] of the
    /// degree bound, or to the certificate's declared modulus.
    Randomized { trials: usize, prime: Option<Prime> },
}

impl VerifyMode {
    pub fn exact() -> Self {
        VerifyMode::Exact { caps: Caps::default(), field: None }
    }

    pub fn randomized(trials: usize) -> Self {
        VerifyMode::Randomized { trials, prime: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    Exact,
    Randomized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub accepted: bool,
    pub mode: ModeKind,
    pub trials: usize,
    /// The first condition found to fail.
    pub failure_condition: Option<u8>,
    /// Upper bound on the probability of wrongly accepting; 0 when exact.
    pub soundness_bound: f64,
    /// Modulus used by randomized mode or forced exact mode.
    pub prime: Option<Prime>,
}

fn check_placeholders(c: &Circuit, m: usize) -> Result<(), IpsError> {
    for v in c.variables() {
        if let VarId::F(i) = v {
            if i as usize > m || i == 0 {
                return Err(IpsError::PlaceholderOutOfRange { index: i, m });
            }
        }
    }
    Ok(())
}

fn zero_bindings(m: usize) -> HashMap<VarId, Circuit> {
    (1..=m as u32).map(|i| (VarId::F(i), Circuit::build(|c| c.constant(0)))).collect()
}

/// `C(x, 0)` as a circuit.
pub fn condition1_circuit(c: &Circuit, m: usize) -> Circuit {
    substitute(c, &zero_bindings(m))
}

/// `C(x, F(x))` as a circuit.
pub fn condition2_circuit(c: &Circuit, sys: &PolySystem) -> Circuit {
    substitute(c, &sys.bindings())
}

pub fn verify<R: Rng + ?Sized>(
    cert: &Certificate,
    sys: &PolySystem,
    mode: VerifyMode,
    rng: &mut R,
) -> Result<Verdict, IpsError> {
    check_placeholders(&cert.circuit, sys.len())?;
    match mode {
        VerifyMode::Exact { caps, field } => verify_exact(cert, sys, caps, field),
        VerifyMode::Randomized { trials, prime } => verify_randomized(cert, sys, trials, prime, rng),
    }
}

fn exact_domain(c: &Circuit, field: Option<Prime>) -> Option<Prime> {
    field.or(match c.domain() {
        Domain::Integer => None,
        Domain::Prime(p) => Some(p),
    })
}

fn verify_exact(cert: &Certificate, sys: &PolySystem, caps: Caps, field: Option<Prime>) -> Result<Verdict, IpsError> {
    let prime = exact_domain(&cert.circuit, field);
    let (ok1, ok2) = match prime {
        None => exact_conditions::<BigInt>(cert, sys, (), caps)?,
        Some(p) => exact_conditions::<FieldElement>(cert, sys, p, caps)?,
    };
    let failure = if !ok1 {
        Some(1)
    } else if !ok2 {
        Some(2)
    } else {
        None
    };
    Ok(Verdict {
        accepted: failure.is_none(),
        mode: ModeKind::Exact,
        trials: 0,
        failure_condition: failure,
        soundness_bound: 0.0,
        prime,
    })
}

fn exact_conditions<K: Coeff>(
    cert: &Certificate,
    sys: &PolySystem,
    ctx: K::Ctx,
    caps: Caps,
) -> Result<(bool, bool), IpsError> {
    let c1 = condition1_circuit(&cert.circuit, sys.len());
    let ok1 = expand_in::<K>(&c1, ctx, caps)?.is_zero();
    if !ok1 {
        return Ok((false, false));
    }
    let c2 = condition2_circuit(&cert.circuit, sys);
    let lhs = expand_in::<K>(&c2, ctx, caps)?;
    let rhs = expand_in::<K>(&cert.target.circuit(), ctx, caps)?;
    Ok((true, lhs == rhs))
}

/// Degree bounds of the two condition circuits (target included in the second).
pub fn condition_degree_bounds(cert: &Certificate, sys: &PolySystem) -> Result<(u64, u64), IpsError> {
    let fdeg: Vec<u64> = sys.equations.iter().map(|e| e.degree_bound()).collect::<Result<_, _>>()?;
    let d1 = cert.circuit.degree_bound_weighted(|v| match v {
        VarId::X(_) => 1,
        VarId::F(_) => 0,
    })?;
    let d2 = cert.circuit.degree_bound_weighted(|v| match v {
        VarId::X(_) => 1,
        VarId::F(i) => fdeg[i as usize - 1],
    })?;
    let dg = cert.target.circuit().degree_bound()?;
    Ok((d1, d2.max(dg)))
}

fn verify_randomized<R: Rng + ?Sized>(
    cert: &Certificate,
    sys: &PolySystem,
    trials: usize,
    prime: Option<Prime>,
    rng: &mut R,
) -> Result<Verdict, IpsError> {
    let target = cert.target.circuit();
    if !cert.circuit.is_division_free()
        || !target.is_division_free()
        || sys.equations.iter().any(|e| !e.is_division_free())
    {
        return Err(IpsError::DivisionPresent);
    }
    let (d1, d2) = condition_degree_bounds(cert, sys)?;
    let d = d1.max(d2);
    let p = match prime.or(exact_domain(&cert.circuit, None)) {
        Some(p) => p,
        None => default_prime(d),
    };
    let needed = d.saturating_mul(100);
    if p.get() <= needed {
        return Err(IpsError::PrimeTooSmall { p: p.get(), needed });
    }
    let mut xvars: Vec<VarId> = cert.circuit.variables().into_iter().filter(|v| !v.is_placeholder()).collect();
    for e in sys.equations.iter().chain(std::iter::once(&target)) {
        xvars.extend(e.variables());
    }
    xvars.sort();
    xvars.dedup();
    let zero = p.zero();
    let mut failure = None;
    let mut done = 0;
    for _ in 0..trials {
        done += 1;
        let pt = pit::random_point(&xvars, p, rng);
        let x = |v: VarId| pt.get(&v).copied();
        let v1 = cert.circuit.evaluate(p, |v| if v.is_placeholder() { Some(zero) } else { x(v) })?[0];
        if !v1.is_zero() {
            failure = Some(1);
            break;
        }
        let fs: Vec<FieldElement> =
            sys.equations.iter().map(|e| e.evaluate(p, x).map(|v| v[0])).collect::<Result<_, _>>()?;
        let v2 = cert.circuit.evaluate(p, |v| match v {
            VarId::F(i) => Some(fs[i as usize - 1]),
            VarId::X(_) => x(v),
        })?[0];
        if v2 != target.evaluate(p, x)?[0] {
            failure = Some(2);
            break;
        }
    }
    let soundness = if failure.is_none() {
        (pit::soundness_bound(d1, p, trials) + pit::soundness_bound(d2, p, trials)).min(1.0)
    } else {
        0.0
    };
    Ok(Verdict {
        accepted: failure.is_none(),
        mode: ModeKind::Randomized,
        trials: done,
        failure_condition: failure,
        soundness_bound: soundness,
        prime: Some(p),
    })
}

/// Expansion of the certificate in `(x, f)`, grouped by placeholder monomial.
fn f_groups<K: Coeff>(c: &Circuit, ctx: K::Ctx, caps: Caps) -> Result<BTreeMap<Monomial, SparsePoly<K>>, IpsError> {
    let e = expand_in::<K>(c, ctx, caps)?;
    Ok(e.collect_by(VarId::is_placeholder))
}

/// True iff the certificate is linear in the placeholders with no
/// placeholder-free part.
pub fn is_hilbert_like(cert: &Certificate, caps: Caps) -> Result<bool, IpsError> {
    fn go<K: Coeff>(c: &Circuit, ctx: K::Ctx, caps: Caps) -> Result<bool, IpsError> {
        Ok(f_groups::<K>(c, ctx, caps)?.keys().all(|m| m.degree() == 1))
    }
    match exact_domain(&cert.circuit, None) {
        None => go::<BigInt>(&cert.circuit, (), caps),
        Some(p) => go::<FieldElement>(&cert.circuit, p, caps),
    }
}

/// True iff both `C(x, 0)` and `C(x, F(x))` vanish.
pub fn is_zero_certificate<R: Rng + ?Sized>(
    c: &Circuit,
    sys: &PolySystem,
    mode: VerifyMode,
    rng: &mut R,
) -> Result<bool, IpsError> {
    let cert = Certificate { circuit: c.clone(), target: Target::zero() };
    Ok(verify(&cert, sys, mode, rng)?.accepted)
}

/// Rewrites a certificate into Hilbert-like form `sum_i f_i G_i(x)` with the
/// same value at `f = F(x)`.
///
/// Each placeholder monomial `f^e` with `x`-coefficient `g` and least index
/// `i0` becomes `g * f_{i0} * F_{i0}^{e_{i0}-1} * prod_{j > i0} F_j^{e_j}`.
pub fn hilbertize(cert: &Certificate, sys: &PolySystem, caps: Caps) -> Result<Certificate, IpsError> {
    check_placeholders(&cert.circuit, sys.len())?;
    let mut out = match exact_domain(&cert.circuit, None) {
        None => hilbertize_in::<BigInt>(&cert.circuit, sys, (), caps)?,
        Some(p) => hilbertize_in::<FieldElement>(&cert.circuit, sys, p, caps)?,
    };
    out.set_domain(cert.circuit.domain());
    out.set_xvars(cert.circuit.xvars());
    out.set_fvars(cert.circuit.fvars());
    Ok(Certificate { circuit: out, target: cert.target.clone() })
}

fn hilbertize_in<K: Coeff>(c: &Circuit, sys: &PolySystem, ctx: K::Ctx, caps: Caps) -> Result<Circuit, IpsError> {
    let groups = f_groups::<K>(c, ctx, caps)?;
    let mut out = Circuit::new();
    let mut eq_nodes: HashMap<u32, NodeId> = HashMap::new();
    let mut terms = Vec::new();
    for (fm, g) in &groups {
        if fm.is_one() {
            if g.is_zero() {
                continue;
            }
            return Err(IpsError::NonzeroConstantTerm);
        }
        let mut factors = vec![g.build_into(&mut out)?];
        let (i0, _) = fm.pairs()[0];
        factors.push(out.var(i0));
        for &(v, e) in fm.pairs() {
            let reps = if v == i0 { e - 1 } else { e };
            if reps == 0 {
                continue;
            }
            let idx = v.index();
            let node = match eq_nodes.get(&idx) {
                Some(&n) => n,
                None => {
                    let n = out.import_output(sys.equation(idx as usize));
                    eq_nodes.insert(idx, n);
                    n
                }
            };
            factors.extend(std::iter::repeat_n(node, reps as usize));
        }
        terms.push((1, out.mul(factors)));
    }
    let root = if terms.is_empty() { out.constant(0) } else { out.lin(terms) };
    out.set_outputs(vec![root]);
    Ok(out)
}

/// Product of two refutation certificates: again a refutation.
pub fn certificate_product(a: &Circuit, b: &Circuit) -> Circuit {
    let mut c = Circuit::new();
    c.set_domain(a.domain());
    let (x, y) = (c.import_output(a), c.import_output(b));
    let o = c.mul(vec![x, y]);
    c.set_outputs(vec![o]);
    c
}

/// Difference of two certificates for the same target: a zero-certificate.
pub fn certificate_difference(a: &Circuit, b: &Circuit) -> Circuit {
    let mut c = Circuit::new();
    c.set_domain(a.domain());
    let (x, y) = (c.import_output(a), c.import_output(b));
    let o = c.sub(x, y);
    c.set_outputs(vec![o]);
    c
}

/// Converts a rational certificate `C'/D` for `G` into a division-free one,
/// given a refutation `E(x, f, d)` of `F_1 = ... = F_m = D(x, F(x)) = 0`
/// whose extra placeholder `d` is `f_{m+1}`.
///
/// `E` is split as `d * Delta + E'` by exact expansion in `d`, and the
/// result is `C' * Delta(x, f, D(x, f)) + G * E'`, verified exactly before
/// it is returned.
pub fn rips_to_ips(
    num: &Circuit,
    den: &Circuit,
    inverse: &Circuit,
    g: &Circuit,
    sys: &PolySystem,
    caps: Caps,
) -> Result<Certificate, IpsError> {
    let m = sys.len();
    check_placeholders(num, m)?;
    check_placeholders(den, m)?;
    check_placeholders(inverse, m + 1)?;
    let d_var = VarId::F(m as u32 + 1);
    let mut aug = sys.clone();
    aug.equations.push(condition2_circuit(den, sys));
    aug.provenance.push(crate::cnf::Provenance::User);
    let e_cert = Certificate::refutation(inverse.clone());
    let mut rng = rand::rngs::mock::StepRng::new(0, 0);
    let field = exact_domain(num, None);
    let v = verify(&e_cert, &aug, VerifyMode::Exact { caps, field }, &mut rng)?;
    if let Some(k) = v.failure_condition {
        return Err(IpsError::InverseCertInvalid(k));
    }

    // E' = E(x, f, 0); Delta from the d-divisible part of E.
    let e_prime = substitute(inverse, &[(d_var, Circuit::build(|c| c.constant(0)))].into_iter().collect());
    let delta = match field {
        None => delta_circuit::<BigInt>(inverse, d_var, (), caps)?,
        Some(p) => delta_circuit::<FieldElement>(inverse, d_var, p, caps)?,
    };
    let delta_at_d = substitute(&delta, &[(d_var, den.clone())].into_iter().collect());

    let mut c = Circuit::new();
    c.set_domain(num.domain());
    let (cn, dl, gn, ep) =
        (c.import_output(num), c.import_output(&delta_at_d), c.import_output(g), c.import_output(&e_prime));
    let left = c.mul(vec![cn, dl]);
    let right = c.mul(vec![gn, ep]);
    let root = c.add(left, right);
    c.set_outputs(vec![root]);
    let cert = Certificate::derivation(crate::circuit::prune(&c), g.clone());
    let v = verify(&cert, sys, VerifyMode::Exact { caps, field }, &mut rng)?;
    match v.failure_condition {
        None => Ok(cert),
        Some(k) => Err(IpsError::ConstructionFailed(k)),
    }
}

fn delta_circuit<K: Coeff>(e: &Circuit, d: VarId, ctx: K::Ctx, caps: Caps) -> Result<Circuit, IpsError> {
    let poly = expand_in::<K>(e, ctx, caps).map_err(IpsError::SplitBlowup)?;
    let mut delta = SparsePoly::<K>::zero(ctx);
    for (mono, coef) in poly.terms() {
        let k = mono.exponent(d);
        if k == 0 {
            continue;
        }
        let rest: Vec<(VarId, u32)> =
            mono.pairs().iter().map(|&(v, e)| if v == d { (v, e - 1) } else { (v, e) }).collect();
        delta.add_term(Monomial::from_pairs(rest), coef.clone());
    }
    Ok(delta.try_to_circuit()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{expand_circuit, parse_poly, Poly};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(42)
    }

    fn fp() -> Prime {
        Prime::new(10007).unwrap()
    }

    fn poly_circuit(s: &str) -> Circuit {
        parse_poly(s, fp()).unwrap().to_circuit()
    }

    fn sys(eqs: &[&str]) -> PolySystem {
        PolySystem::from_circuits(eqs.iter().map(|s| poly_circuit(s)).collect())
    }

    #[test]
    fn exact_verdicts() {
        let s = sys(&["1 - x1", "x1"]);
        let good = Certificate::refutation(poly_circuit("f1 + f2"));
        let v = verify(&good, &s, VerifyMode::exact(), &mut rng()).unwrap();
        assert!(v.accepted && v.soundness_bound == 0.0 && v.failure_condition.is_none());
        let bad = Certificate::refutation(poly_circuit("f1"));
        let v = verify(&bad, &s, VerifyMode::exact(), &mut rng()).unwrap();
        assert_eq!((v.accepted, v.failure_condition), (false, Some(2)));
        let bad1 = Certificate::refutation(poly_circuit("f1 + f2 + x1"));
        assert_eq!(verify(&bad1, &s, VerifyMode::exact(), &mut rng()).unwrap().failure_condition, Some(1));
    }

    #[test]
    fn derivation_certificate() {
        let s = sys(&["x1", "1 - x1"]);
        let cert = Certificate::derivation(poly_circuit("f1*f2 + f1"), poly_circuit("2*x1 - x1^2"));
        assert!(verify(&cert, &s, VerifyMode::exact(), &mut rng()).unwrap().accepted);
        assert!(verify(&cert, &s, VerifyMode::randomized(20), &mut rng()).unwrap().accepted);
        assert!(!is_hilbert_like(&cert, Caps::default()).unwrap());
    }

    #[test]
    fn randomized_verdicts_and_prime_checks() {
        let s = sys(&["1 - x1", "x1"]);
        let good = Certificate::refutation(poly_circuit("f1 + f2"));
        let v = verify(&good, &s, VerifyMode::randomized(20), &mut rng()).unwrap();
        assert!(v.accepted && v.trials == 20 && v.soundness_bound > 0.0 && v.soundness_bound < 1e-100);
        assert_eq!(v.prime.unwrap().get(), 1_000_003);
        let bad = Certificate::refutation(poly_circuit("f1"));
        let v = verify(&bad, &s, VerifyMode::randomized(20), &mut rng()).unwrap();
        assert_eq!(v.failure_condition, Some(2));
        let small = VerifyMode::Randomized { trials: 5, prime: Some(Prime::new(97).unwrap()) };
        assert_eq!(verify(&good, &s, small, &mut rng()), Err(IpsError::PrimeTooSmall { p: 97, needed: 100 }));
        let div = Certificate::refutation(Circuit::build(|c| {
            let a = c.f(1);
            let b = c.x(1);
            c.div(a, b)
        }));
        assert_eq!(verify(&div, &s, VerifyMode::randomized(3), &mut rng()), Err(IpsError::DivisionPresent));
        let out_of_range = Certificate::refutation(poly_circuit("f3"));
        assert!(matches!(
            verify(&out_of_range, &s, VerifyMode::exact(), &mut rng()),
            Err(IpsError::PlaceholderOutOfRange { index: 3, m: 2 })
        ));
    }

    #[test]
    fn hilbert_like_predicate() {
        let cap = Caps::default();
        assert!(is_hilbert_like(&Certificate::refutation(poly_circuit("f1 + f2")), cap).unwrap());
        assert!(!is_hilbert_like(&Certificate::refutation(poly_circuit("f1*f2 + f1")), cap).unwrap());
        assert!(!is_hilbert_like(&Certificate::refutation(poly_circuit("f1 + 1")), cap).unwrap());
    }

    #[test]
    fn zero_certificates() {
        let s = sys(&["1 - x1", "x1"]);
        let a = poly_circuit("f1 + f2");
        let ok = |c: &Circuit| {
            verify(&Certificate::refutation(c.clone()), &s, VerifyMode::exact(), &mut rng()).unwrap().accepted
        };
        // a + f2 * (f1 - (1 - x1)), and f1 - (1 - x1) vanishes at f = F
        let b2 = poly_circuit("f1 + f2 + f2*f1 - f2 + x1*f2");
        assert!(ok(&a));
        assert!(ok(&b2));
        assert!(is_zero_certificate(&certificate_difference(&a, &b2), &s, VerifyMode::exact(), &mut rng()).unwrap());
        assert!(is_zero_certificate(&poly_circuit("0"), &s, VerifyMode::exact(), &mut rng()).unwrap());
        assert!(!is_zero_certificate(&poly_circuit("f1"), &sys(&["x1"]), VerifyMode::exact(), &mut rng()).unwrap());
        assert!(ok(&certificate_product(&a, &b2)));
    }

    #[test]
    fn hilbertize_examples() {
        let p = fp();
        let s = sys(&["x1", "1 - x1"]);
        let cert = Certificate::derivation(poly_circuit("f1*f2 + f1"), poly_circuit("2*x1 - x1^2"));
        let h = hilbertize(&cert, &s, Caps::default()).unwrap();
        assert!(is_hilbert_like(&h, Caps::default()).unwrap());
        assert!(verify(&h, &s, VerifyMode::exact(), &mut rng()).unwrap().accepted);
        let got = expand_circuit(&h.circuit, p, Caps::default()).unwrap();
        assert_eq!(got, parse_poly("2*f1 - f1*x1", p).unwrap());

        let already = Certificate::refutation(poly_circuit("f1 + f2"));
        let s2 = sys(&["1 - x1", "x1"]);
        let h2 = hilbertize(&already, &s2, Caps::default()).unwrap();
        let e = |c: &Circuit| expand_circuit(c, p, Caps::default()).unwrap();
        assert_eq!(e(&h2.circuit), e(&already.circuit));

        let s3 = sys(&["x1^2 - x1"]);
        let sq = Certificate::derivation(poly_circuit("f1^2"), poly_circuit("x1^4 - 2*x1^3 + x1^2"));
        let h3 = hilbertize(&sq, &s3, Caps::default()).unwrap();
        let want: Poly = parse_poly("f1*x1^2 - f1*x1", p).unwrap();
        assert_eq!(e(&h3.circuit), want);

        let bad = Certificate::refutation(poly_circuit("f1 + 1"));
        assert_eq!(hilbertize(&bad, &s3, Caps::default()), Err(IpsError::NonzeroConstantTerm));
    }
}
