//! Buchberger's algorithm over `F_p` with cofactor tracking, and what it
//! gives: ideal and radical membership, first syzygies, and f-only
//! (geometric) zero-certificates by elimination.

use std::cmp::Ordering;

use crate::circuit::{Circuit, Domain, VarId};
use crate::field::{FieldElement, Prime};
use crate::poly::{Caps, Monomial, MonomialOrder, Poly, PolyError};

/// Prime used when the caller does not choose one.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

pub fn default_prime() -> Prime {
    Prime::new(DEFAULT_PRIME).expect("2^31 - 1 is prime")
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroebnerBasis {
    pub generators: Vec<Poly>,
    pub order: MonomialOrder,
    /// `generators[k] = sum_j cofactors[k][j] * input[j]`.
    pub cofactors: Option<Vec<Vec<Poly>>>,
    pub prime: Prime,
    /// Number of input polynomials.
    pub inputs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyzygyGenerators {
    /// Each tuple `g` satisfies `sum_i g_i F_i = 0`.
    pub generators: Vec<Vec<Poly>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub member: bool,
    /// `g = sum_i c_i F_i` when `member` and cofactors were tracked.
    pub cofactors: Option<Vec<Poly>>,
    pub remainder: Poly,
}

fn mono_div(a: &Monomial, b: &Monomial) -> Monomial {
    Monomial::from_pairs(a.pairs().iter().map(|&(v, e)| (v, e - b.exponent(v))).collect())
}

fn mono_lcm(a: &Monomial, b: &Monomial) -> Monomial {
    let mut pairs: Vec<(VarId, u32)> = a.pairs().to_vec();
    for &(v, e) in b.pairs() {
        match pairs.iter_mut().find(|(w, _)| *w == v) {
            Some((_, f)) => *f = (*f).max(e),
            None => pairs.push((v, e)),
        }
    }
    Monomial::from_pairs(pairs)
}

fn coprime(a: &Monomial, b: &Monomial) -> bool {
    a.pairs().iter().all(|&(v, _)| b.exponent(v) == 0)
}

fn check_caps(p: &Poly, caps: Caps) -> Result<(), PolyError> {
    if p.num_terms() > caps.max_terms {
        return Err(PolyError::TermBlowup { terms: p.num_terms(), limit: caps.max_terms });
    }
    let d = p.total_degree().unwrap_or(0);
    if d > caps.max_degree {
        return Err(PolyError::DegreeBlowup { degree: d, limit: caps.max_degree });
    }
    Ok(())
}

fn lead(p: &Poly, order: MonomialOrder) -> (Monomial, FieldElement) {
    let (m, c) = p.leading(order).expect("nonzero polynomial");
    (m.clone(), *c)
}

/// Vector `sum_k q_k v_k` over polynomial vectors of equal length.
fn combine(p: Prime, len: usize, parts: &[(Poly, &[Poly])]) -> Vec<Poly> {
    let mut out = vec![Poly::zero(p); len];
    for (q, v) in parts {
        for (o, x) in out.iter_mut().zip(v.iter()) {
            *o = o.add(&q.mul(x));
        }
    }
    out
}

struct Engine {
    p: Prime,
    order: MonomialOrder,
    caps: Caps,
    m: usize,
    gens: Vec<Poly>,
    leads: Vec<(Monomial, FieldElement)>,
    cofs: Option<Vec<Vec<Poly>>>,
    /// Syzygies among `gens`, stored sparsely as (index, coefficient).
    syz: Option<Vec<Vec<(usize, Poly)>>>,
}

/// Result of dividing by the current generators.
struct Division {
    rem: Poly,
    quot: Vec<(usize, Poly)>,
}

impl Engine {
    fn reduce(&self, h: &Poly, track: bool) -> Result<Division, PolyError> {
        let mut p = h.clone();
        let mut rem = Poly::zero(self.p);
        let mut quot: Vec<Option<Poly>> = vec![None; if track { self.gens.len() } else { 0 }];
        while !p.is_zero() {
            let (lm, lc) = lead(&p, self.order);
            match self.leads.iter().position(|(m, _)| m.divides(&lm)) {
                Some(k) => {
                    let (gm, gc) = &self.leads[k];
                    let c = lc * gc.inverse().expect("nonzero leading coefficient");
                    let t = mono_div(&lm, gm);
                    p = p.sub(&self.gens[k].mul_term(&c, &t));
                    check_caps(&p, self.caps)?;
                    if track {
                        let q = quot[k].get_or_insert_with(|| Poly::zero(self.p));
                        q.add_term(t, c);
                    }
                }
                None => {
                    let mut lt = Poly::zero(self.p);
                    lt.add_term(lm, lc);
                    rem = rem.add(&lt);
                    p = p.sub(&lt);
                }
            }
        }
        let quot = quot.into_iter().enumerate().filter_map(|(k, q)| q.map(|q| (k, q))).collect();
        Ok(Division { rem, quot })
    }

    fn cofactor_of(&self, parts: &[(usize, Poly)]) -> Vec<Poly> {
        let cofs = self.cofs.as_ref().expect("tracked");
        let v: Vec<(Poly, &[Poly])> = parts.iter().map(|(k, q)| (q.clone(), cofs[*k].as_slice())).collect();
        combine(self.p, self.m, &v)
    }

    fn push(&mut self, g: Poly, cof: Option<Vec<Poly>>) {
        self.leads.push(lead(&g, self.order));
        self.gens.push(g);
        if let (Some(cofs), Some(c)) = (&mut self.cofs, cof) {
            cofs.push(c);
        }
    }

    fn run(&mut self) -> Result<(), PolyError> {
        let track = self.cofs.is_some() || self.syz.is_some();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for j in 0..self.gens.len() {
            for i in 0..j {
                pairs.push((i, j));
            }
        }
        while !pairs.is_empty() {
            // Normal strategy: smallest lcm, earliest pair on ties.
            let (best, _) = pairs
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    let la = mono_lcm(&self.leads[a.0].0, &self.leads[a.1].0);
                    let lb = mono_lcm(&self.leads[b.0].0, &self.leads[b.1].0);
                    la.cmp_in(&lb, self.order).then_with(|| (a.1, a.0).cmp(&(b.1, b.0)))
                })
                .expect("nonempty");
            let (i, j) = pairs.remove(best);
            let (mi, ci) = self.leads[i].clone();
            let (mj, cj) = self.leads[j].clone();
            if self.syz.is_none() && coprime(&mi, &mj) {
                continue;
            }
            let l = mono_lcm(&mi, &mj);
            let (ti, tj) = (mono_div(&l, &mi), mono_div(&l, &mj));
            let (ai, aj) = (ci.inverse().expect("nonzero"), cj.inverse().expect("nonzero"));
            let s = self.gens[i].mul_term(&ai, &ti).sub(&self.gens[j].mul_term(&aj, &tj));
            check_caps(&s, self.caps)?;
            let d = self.reduce(&s, track)?;
            // s - sum q_k g_k = rem, as a combination of generators.
            let mut rel: Vec<(usize, Poly)> = vec![(i, Poly::term(self.p, ai, ti)), (j, Poly::term(self.p, -aj, tj))];
            rel.extend(d.quot.iter().map(|(k, q)| (*k, q.neg())));
            if d.rem.is_zero() {
                if let Some(syz) = &mut self.syz {
                    syz.push(rel);
                }
                continue;
            }
            let (_, rc) = lead(&d.rem, self.order);
            let inv = rc.inverse().expect("nonzero");
            let g = d.rem.scale(&inv);
            let cof = self.cofs.as_ref().map(|_| {
                let scaled: Vec<(usize, Poly)> = rel.iter().map(|(k, q)| (*k, q.scale(&inv))).collect();
                self.cofactor_of(&scaled)
            });
            if let Some(syz) = &mut self.syz {
                // g_new - (1/rc) * rel = 0 among generators.
                let n = self.gens.len();
                let mut r: Vec<(usize, Poly)> = rel.iter().map(|(k, q)| (*k, q.scale(&inv).neg())).collect();
                r.push((n, Poly::one(self.p)));
                syz.push(r);
            }
            let n = self.gens.len();
            self.push(g, cof);
            for k in 0..n {
                pairs.push((k, n));
            }
        }
        Ok(())
    }

    /// Minimal, interreduced, monic basis.
    fn reduced(mut self) -> Result<GroebnerBasis, PolyError> {
        let n = self.gens.len();
        let mut keep = vec![true; n];
        for a in 0..n {
            for b in 0..n {
                if a != b
                    && keep[b]
                    && self.leads[b].0.divides(&self.leads[a].0)
                    && (self.leads[a].0 != self.leads[b].0 || b < a)
                {
                    keep[a] = false;
                    break;
                }
            }
        }
        let idx: Vec<usize> = (0..n).filter(|&k| keep[k]).collect();
        let mut gens: Vec<Poly> = idx.iter().map(|&k| self.gens[k].clone()).collect();
        let mut cofs: Option<Vec<Vec<Poly>>> = self.cofs.as_ref().map(|c| idx.iter().map(|&k| c[k].clone()).collect());
        for a in 0..gens.len() {
            let others = Engine {
                p: self.p,
                order: self.order,
                caps: self.caps,
                m: self.m,
                gens: gens.iter().enumerate().filter(|&(b, _)| b != a).map(|(_, g)| g.clone()).collect(),
                leads: vec![],
                cofs: cofs
                    .as_ref()
                    .map(|c| c.iter().enumerate().filter(|&(b, _)| b != a).map(|(_, v)| v.clone()).collect()),
                syz: None,
            };
            let others = Engine { leads: others.gens.iter().map(|g| lead(g, self.order)).collect(), ..others };
            let (lm, lc) = lead(&gens[a], self.order);
            // Only the tail may be reduced; the leading term stays.
            let tail = gens[a].sub(&Poly::term(self.p, lc, lm.clone()));
            let d = others.reduce(&tail, cofs.is_some())?;
            let inv = lc.inverse().expect("nonzero");
            let g = d.rem.add(&Poly::term(self.p, lc, lm)).scale(&inv);
            if let Some(c) = cofs.as_mut() {
                let sub = others.cofactor_of(&d.quot);
                c[a] = c[a].iter().zip(&sub).map(|(x, y)| x.sub(y).scale(&inv)).collect();
            }
            gens[a] = g;
        }
        let mut order: Vec<usize> = (0..gens.len()).collect();
        order.sort_by(|&a, &b| lead(&gens[b], self.order).0.cmp_in(&lead(&gens[a], self.order).0, self.order));
        let generators = order.iter().map(|&k| gens[k].clone()).collect();
        let cofactors = cofs.map(|c| order.iter().map(|&k| c[k].clone()).collect());
        self.gens.clear();
        Ok(GroebnerBasis { generators, order: self.order, cofactors, prime: self.p, inputs: self.m })
    }
}

fn engine(system: &[Poly], p: Prime, order: MonomialOrder, caps: Caps, cofactors: bool, syzygies: bool) -> Engine {
    let m = system.len();
    let mut e = Engine {
        p,
        order,
        caps,
        m,
        gens: vec![],
        leads: vec![],
        cofs: if cofactors || syzygies { Some(vec![]) } else { None },
        syz: if syzygies { Some(vec![]) } else { None },
    };
    for (j, f) in system.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        let (_, c) = lead(f, order);
        let inv = c.inverse().expect("nonzero");
        let mut row = vec![Poly::zero(p); m];
        row[j] = Poly::constant(p, 1).scale(&inv);
        e.push(f.scale(&inv), Some(row));
    }
    e
}

/// Reduced Gröbner basis of the ideal generated by `system` (all over the
/// same prime). Pair selection is deterministic.
pub fn buchberger(
    system: &[Poly],
    order: MonomialOrder,
    track_cofactors: bool,
    caps: Caps,
) -> Result<GroebnerBasis, PolyError> {
    let p = system.first().map(Poly::ctx).unwrap_or_else(default_prime);
    let mut e = engine(system, p, order, caps, track_cofactors, false);
    e.run()?;
    e.reduced()
}

impl GroebnerBasis {
    pub fn contains_one(&self) -> bool {
        self.generators.iter().any(|g| g.as_constant().is_some_and(|c| !c.is_zero()))
    }

    /// Every S-polynomial of basis pairs reduces to zero.
    pub fn is_groebner(&self, caps: Caps) -> Result<bool, PolyError> {
        let e = self.engine(caps);
        for j in 0..e.gens.len() {
            for i in 0..j {
                let (mi, ci) = &e.leads[i];
                let (mj, cj) = &e.leads[j];
                let l = mono_lcm(mi, mj);
                let s = e.gens[i]
                    .mul_term(&ci.inverse().expect("nonzero"), &mono_div(&l, mi))
                    .sub(&e.gens[j].mul_term(&cj.inverse().expect("nonzero"), &mono_div(&l, mj)));
                if !e.reduce(&s, false)?.rem.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn engine(&self, caps: Caps) -> Engine {
        Engine {
            p: self.prime,
            order: self.order,
            caps,
            m: self.inputs,
            gens: self.generators.clone(),
            leads: self.generators.iter().map(|g| lead(g, self.order)).collect(),
            cofs: self.cofactors.clone(),
            syz: None,
        }
    }

    pub fn normal_form(&self, g: &Poly, caps: Caps) -> Result<Poly, PolyError> {
        Ok(self.engine(caps).reduce(g, false)?.rem)
    }
}

/// Decides `g in <F>`; cofactors are returned when the basis tracks them.
pub fn ideal_membership(g: &Poly, basis: &GroebnerBasis, caps: Caps) -> Result<Membership, PolyError> {
    let e = basis.engine(caps);
    let track = basis.cofactors.is_some();
    let d = e.reduce(g, track)?;
    let member = d.rem.is_zero();
    let cofactors = (member && track).then(|| e.cofactor_of(&d.quot));
    Ok(Membership { member, cofactors, remainder: d.rem })
}

/// The Hilbert-like circuit `sum_i c_i(x) f_i` over `F_p`.
pub fn cofactor_certificate(cofactors: &[Poly]) -> Circuit {
    let p = cofactors.first().map(Poly::ctx).unwrap_or_else(default_prime);
    let mut c = Circuit::new();
    let mut terms = Vec::new();
    for (i, q) in cofactors.iter().enumerate() {
        if q.is_zero() {
            continue;
        }
        let g = q.build_into(&mut c).expect("field representatives fit in i64");
        let f = c.f(i as u32 + 1);
        terms.push((1, c.mul(vec![g, f])));
    }
    let out = if terms.is_empty() { c.constant(0) } else { c.lin(terms) };
    c.set_outputs(vec![out]);
    c.set_fvars(cofactors.len() as u32);
    c.set_domain(Domain::Prime(p));
    c
}

fn fresh_x(system: &[Poly], g: &Poly) -> VarId {
    let top = system
        .iter()
        .chain(std::iter::once(g))
        .flat_map(|p| p.variables())
        .filter_map(|v| match v {
            VarId::X(i) => Some(i),
            VarId::F(_) => None,
        })
        .max()
        .unwrap_or(0);
    VarId::X(top + 1)
}

/// `g in sqrt<F>` iff `1 in <F, 1 - t g>` for a fresh variable `t`.
pub fn radical_membership(g: &Poly, system: &[Poly], caps: Caps) -> Result<bool, PolyError> {
    let p = g.ctx();
    let t = fresh_x(system, g);
    let mut ext = system.to_vec();
    ext.push(Poly::one(p).sub(&Poly::var(p, t).mul(g)));
    Ok(buchberger(&ext, MonomialOrder::GrevLex, false, caps)?.contains_one())
}

/// Smallest `k <= max_k` with `g^k in <F>`, with its cofactors.
pub fn radical_exponent(
    g: &Poly,
    system: &[Poly],
    max_k: u32,
    caps: Caps,
) -> Result<Option<(u32, Vec<Poly>)>, PolyError> {
    let basis = buchberger(system, MonomialOrder::GrevLex, true, caps)?;
    let mut gk = g.clone();
    for k in 1..=max_k {
        let mem = ideal_membership(&gk, &basis, caps)?;
        if mem.member {
            return Ok(Some((k, mem.cofactors.expect("tracked"))));
        }
        gk = gk.mul_capped(g, caps)?;
    }
    Ok(None)
}

/// Generators of the first syzygy module of `system`: the reductions of all
/// S-pairs to zero, and the relations expressing each input through the basis.
pub fn syzygy_generators(system: &[Poly], caps: Caps) -> Result<SyzygyGenerators, PolyError> {
    let p = system.first().map(Poly::ctx).unwrap_or_else(default_prime);
    let m = system.len();
    let mut e = engine(system, p, MonomialOrder::GrevLex, caps, true, true);
    e.run()?;
    let mut out: Vec<Vec<Poly>> = Vec::new();
    let cofs = e.cofs.clone().expect("tracked");
    let lift = |parts: &[(usize, Poly)]| {
        let v: Vec<(Poly, &[Poly])> = parts.iter().map(|(k, q)| (q.clone(), cofs[*k].as_slice())).collect();
        combine(p, m, &v)
    };
    for rel in e.syz.take().expect("tracked") {
        out.push(lift(&rel));
    }
    // e_j minus the expression of F_j through the final basis.
    for (j, f) in system.iter().enumerate() {
        let d = e.reduce(f, true)?;
        debug_assert!(d.rem.is_zero());
        let mut v: Vec<Poly> = lift(&d.quot).iter().map(Poly::neg).collect();
        v[j] = v[j].add(&Poly::one(p));
        out.push(v);
    }
    out.retain(|v| v.iter().any(|q| !q.is_zero()));
    dedup_vectors(&mut out);
    Ok(SyzygyGenerators { generators: out })
}

fn dedup_vectors(v: &mut Vec<Vec<Poly>>) {
    let mut seen: Vec<Vec<Poly>> = Vec::new();
    v.retain(|s| {
        // Normalize by the first nonzero entry's leading coefficient.
        let first = s.iter().find(|q| !q.is_zero()).expect("nonzero");
        let (_, c) = lead(first, MonomialOrder::GrevLex);
        let inv = c.inverse().expect("nonzero");
        let n: Vec<Poly> = s.iter().map(|q| q.scale(&inv)).collect();
        if seen.contains(&n) {
            false
        } else {
            seen.push(n);
            true
        }
    });
}

/// `sum_i v_i F_i`
pub fn syzygy_residual(v: &[Poly], system: &[Poly]) -> Poly {
    let p = system.first().map(Poly::ctx).unwrap_or_else(default_prime);
    v.iter().zip(system).fold(Poly::zero(p), |acc, (a, f)| acc.add(&a.mul(f)))
}

/// Encodes a vector as the linear form `sum_i v_i e_i`, with `e_i` written
/// as placeholder `f_i`.
fn as_linear_form(v: &[Poly]) -> Poly {
    let p = v.first().map(Poly::ctx).unwrap_or_else(default_prime);
    v.iter().enumerate().fold(Poly::zero(p), |acc, (i, q)| acc.add(&q.mul(&Poly::var(p, VarId::F(i as u32 + 1)))))
}

/// Membership of `v` in the module spanned by `gens`, decided as ideal
/// membership of its linear form in `<gens as linear forms> + <e>^2`.
pub fn module_contains(gens: &[Vec<Poly>], v: &[Poly], caps: Caps) -> Result<bool, PolyError> {
    let p = v.first().map(Poly::ctx).unwrap_or_else(default_prime);
    let m = v.len();
    let mut ideal: Vec<Poly> = gens.iter().map(|g| as_linear_form(g)).collect();
    for i in 1..=m as u32 {
        for j in i..=m as u32 {
            ideal.push(Poly::var(p, VarId::F(i)).mul(&Poly::var(p, VarId::F(j))));
        }
    }
    let basis = buchberger(&ideal, MonomialOrder::GrevLex, false, caps)?;
    Ok(basis.normal_form(&as_linear_form(v), caps)?.is_zero())
}

/// Basis of `<f_i - F_i(x)> ∩ F_p[f]`.
pub fn elimination_ideal(system: &[Poly], caps: Caps) -> Result<GroebnerBasis, PolyError> {
    let p = system.first().map(Poly::ctx).unwrap_or_else(default_prime);
    let graph: Vec<Poly> =
        system.iter().enumerate().map(|(i, f)| Poly::var(p, VarId::F(i as u32 + 1)).sub(f)).collect();
    let mut b = buchberger(&graph, MonomialOrder::EliminateX, false, caps)?;
    b.generators.retain(|g| g.variables().iter().all(|v| v.is_placeholder()));
    b.inputs = system.len();
    Ok(b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometricResult {
    /// Generators of the f-only relations among the `F_i`.
    pub relations: GroebnerBasis,
    /// A relation with value 1 at the origin, when one exists.
    pub certificate: Option<Poly>,
}

/// f-only zero-certificates. A geometric certificate exists iff some
/// relation is nonzero at the origin, i.e. iff a basis generator has a
/// nonzero constant term; it is that generator scaled to value 1 at 0.
pub fn geometric_zero_certificates(system: &[Poly], caps: Caps) -> Result<GeometricResult, PolyError> {
    let relations = elimination_ideal(system, caps)?;
    let certificate = relations.generators.iter().find_map(|g| {
        let c = g.coeff(&Monomial::one());
        (!c.is_zero()).then(|| g.scale(&c.inverse().expect("nonzero")))
    });
    Ok(GeometricResult { relations, certificate })
}

/// `1 - C` as a circuit: an IPS refutation in the placeholders only.
pub fn geometric_refutation(certificate: &Poly) -> Circuit {
    let p = certificate.ctx();
    let mut c = Poly::one(p).sub(certificate).to_circuit();
    c.set_domain(Domain::Prime(p));
    c
}

/// Lexicographic comparison helper for tests and callers sorting tuples.
pub fn cmp_vectors(a: &[Poly], b: &[Poly], order: MonomialOrder) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = match (x.leading(order), y.leading(order)) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(l), Some(r)) => l.0.cmp_in(r.0, order),
        };
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}
