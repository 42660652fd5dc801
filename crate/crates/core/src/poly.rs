//! Exact sparse multivariate polynomials.
//!
//! Coefficients live either in `F_p` ([`Poly`]) or in the integers
//! ([`IntPoly`]). Expansion of a circuit into canonical form is the exact
//! oracle that every randomized check in the crate is compared against.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Node, NodeId, VarId};
use crate::field::{FieldElement, Prime};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("expansion exceeded {limit} terms (reached {terms})")]
    TermBlowup { terms: usize, limit: usize },
    #[error("expansion exceeded degree {limit} (reached {degree})")]
    DegreeBlowup { degree: u64, limit: u64 },
    #[error("circuit contains a division")]
    Division,
    #[error("polynomials live over different coefficient rings")]
    ModulusMismatch,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("coefficient {0} does not fit a circuit constant")]
    CoefficientTooLarge(String),
}

/// Resource limits for exact expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_terms: usize,
    pub max_degree: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_terms: 2_000_000, max_degree: 64 }
    }
}

/// A power product, stored as `(variable, exponent)` pairs sorted by variable
/// with no zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(VarId, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort();
        let mut out: Vec<(VarId, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn pairs(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.0.binary_search_by_key(&v, |&(w, _)| w).map(|i| self.0[i].1).unwrap_or(0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &o.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Splits into the part over variables satisfying `pred` and the rest.
    pub fn split(&self, pred: impl Fn(VarId) -> bool) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().partition(|(v, _)| pred(*v));
        (Monomial(a), Monomial(b))
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().all(|&(v, e)| o.exponent(v) >= e)
    }

    /// Compares under `order`. Variables rank by `VarId` order, smallest
    /// first: `x1 > x2 > ... > f1 > f2 > ...`.
    pub fn cmp_in(&self, o: &Monomial, order: MonomialOrder) -> Ordering {
        match order {
            MonomialOrder::Lex => lex(&self.0, &o.0),
            MonomialOrder::GrevLex => self.degree().cmp(&o.degree()).then_with(|| revlex(&self.0, &o.0)),
            MonomialOrder::EliminateX => {
                let (ax, af) = self.split(|v| !v.is_placeholder());
                let (bx, bf) = o.split(|v| !v.is_placeholder());
                ax.cmp_in(&bx, MonomialOrder::GrevLex).then_with(|| af.cmp_in(&bf, MonomialOrder::GrevLex))
            }
        }
    }
}

fn lex(a: &[(VarId, u32)], b: &[(VarId, u32)]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x.0 != y.0 {
            // The side holding the higher-ranked variable is larger.
            return if x.0 < y.0 { Ordering::Greater } else { Ordering::Less };
        }
        if x.1 != y.1 {
            return x.1.cmp(&y.1);
        }
    }
    a.len().cmp(&b.len())
}

fn revlex(a: &[(VarId, u32)], b: &[(VarId, u32)]) -> Ordering {
    // Equal total degree: the larger exponent in the lowest-ranked differing
    // variable makes the monomial smaller.
    let (mut i, mut j) = (a.len(), b.len());
    while i > 0 || j > 0 {
        let x = if i > 0 { Some(a[i - 1]) } else { None };
        let y = if j > 0 { Some(b[j - 1]) } else { None };
        match (x, y) {
            (Some(x), Some(y)) if x.0 == y.0 => {
                if x.1 != y.1 {
                    return y.1.cmp(&x.1);
                }
                i -= 1;
                j -= 1;
            }
            (Some(x), Some(y)) if x.0 > y.0 => return Ordering::Less,
            (Some(_), Some(_)) => return Ordering::Greater,
            (Some(_), None) => return Ordering::Less,
            (None, Some(_)) => return Ordering::Greater,
            (None, None) => unreachable!(),
        }
    }
    Ordering::Equal
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    Lex,
    #[default]
    GrevLex,
    /// Block order: grevlex on the x-variables, ties broken by grevlex on
    /// the placeholders. Eliminates the x-variables.
    EliminateX,
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Coefficient ring interface.
pub trait Coeff: Clone + PartialEq + Eq + fmt::Debug + fmt::Display {
    type Ctx: Copy + Eq + fmt::Debug;
    fn ctx(&self) -> Self::Ctx;
    fn from_i64(ctx: Self::Ctx, v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Signed machine-integer representative, if one fits.
    fn to_i64(&self) -> Option<i64>;
}

impl Coeff for FieldElement {
    type Ctx = Prime;
    fn ctx(&self) -> Prime {
        self.modulus()
    }
    fn from_i64(ctx: Prime, v: i64) -> Self {
        ctx.from_i64(v)
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(*self)
    }
    fn add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn to_i64(&self) -> Option<i64> {
        Some(self.signed())
    }
}

impl Coeff for BigInt {
    type Ctx = ();
    fn ctx(&self) {}
    fn from_i64(_: (), v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_i64(&self) -> Option<i64> {
        ToPrimitive::to_i64(self)
    }
}

/// Canonical sparse polynomial: no zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly<K: Coeff> {
    ctx: K::Ctx,
    terms: BTreeMap<Monomial, K>,
}

pub type Poly = SparsePoly<FieldElement>;
pub type IntPoly = SparsePoly<BigInt>;

impl<K: Coeff> SparsePoly<K> {
    pub fn zero(ctx: K::Ctx) -> Self {
        SparsePoly { ctx, terms: BTreeMap::new() }
    }

    pub fn constant(ctx: K::Ctx, c: i64) -> Self {
        Self::term(ctx, K::from_i64(ctx, c), Monomial::one())
    }

    pub fn one(ctx: K::Ctx) -> Self {
        Self::constant(ctx, 1)
    }

    pub fn var(ctx: K::Ctx, v: VarId) -> Self {
        Self::term(ctx, K::from_i64(ctx, 1), Monomial::var(v))
    }

    pub fn term(ctx: K::Ctx, c: K, m: Monomial) -> Self {
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(ctx: K::Ctx, terms: impl IntoIterator<Item = (Monomial, K)>) -> Self {
        let mut p = Self::zero(ctx);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ctx(&self) -> K::Ctx {
        self.ctx
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &K)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> K {
        self.terms.get(m).cloned().unwrap_or_else(|| K::from_i64(self.ctx, 0))
    }

    /// The constant value when the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<K> {
        match self.terms.len() {
            0 => Some(K::from_i64(self.ctx, 0)),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant() == Some(K::from_i64(self.ctx, 1))
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn variables(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = self.terms.keys().flat_map(|m| m.0.iter().map(|&(v, _)| v)).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn add_term(&mut self, m: Monomial, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        SparsePoly { ctx: self.ctx, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &K) -> Self {
        Self::from_terms(self.ctx, self.terms.iter().map(|(m, c)| (m.clone(), c.mul(k))))
    }

    pub fn mul_term(&self, c: &K, mono: &Monomial) -> Self {
        Self::from_terms(self.ctx, self.terms.iter().map(|(m, d)| (m.mul(mono), d.mul(c))))
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_capped(o, Caps { max_terms: usize::MAX, max_degree: u64::MAX }).expect("uncapped")
    }

    pub fn mul_capped(&self, o: &Self, caps: Caps) -> Result<Self, PolyError> {
        let deg = self.total_degree().unwrap_or(0) + o.total_degree().unwrap_or(0);
        if !self.is_zero() && !o.is_zero() && deg > caps.max_degree {
            return Err(PolyError::DegreeBlowup { degree: deg, limit: caps.max_degree });
        }
        let mut r = Self::zero(self.ctx);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1.mul(c2));
            }
            if r.terms.len() > caps.max_terms {
                return Err(PolyError::TermBlowup { terms: r.terms.len(), limit: caps.max_terms });
            }
        }
        Ok(r)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one(self.ctx);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn evaluate(&self, assign: impl Fn(VarId) -> K) -> K {
        let mut acc = K::from_i64(self.ctx, 0);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in &m.0 {
                let x = assign(v);
                for _ in 0..e {
                    t = t.mul(&x);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Groups terms by their restriction to the variables selected by `pred`:
    /// returns `selected monomial -> coefficient polynomial in the rest`.
    pub fn collect_by(&self, pred: impl Fn(VarId) -> bool) -> BTreeMap<Monomial, SparsePoly<K>> {
        let mut out: BTreeMap<Monomial, SparsePoly<K>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (sel, rest) = m.split(&pred);
            out.entry(sel).or_insert_with(|| Self::zero(self.ctx)).add_term(rest, c.clone());
        }
        out
    }

    /// Substitutes polynomials for variables (unbound variables stay).
    pub fn compose(&self, bind: impl Fn(VarId) -> Option<SparsePoly<K>>) -> Self {
        let mut r = Self::zero(self.ctx);
        for (m, c) in &self.terms {
            let mut t = Self::term(self.ctx, c.clone(), Monomial::one());
            for &(v, e) in &m.0 {
                let f = bind(v).unwrap_or_else(|| Self::var(self.ctx, v));
                t = t.mul(&f.pow(e));
            }
            r = r.add(&t);
        }
        r
    }

    /// Leading term under `order`, if nonzero.
    pub fn leading(&self, order: MonomialOrder) -> Option<(&Monomial, &K)> {
        self.terms.iter().max_by(|a, b| a.0.cmp_in(b.0, order))
    }

    /// Terms sorted from largest to smallest under `order`.
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(&Monomial, &K)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|a, b| b.0.cmp_in(a.0, order));
        ts
    }
}

impl<K: Coeff> SparsePoly<K> {
    /// Builds a sum-of-products circuit computing this polynomial, with
    /// coefficients written as signed representatives.
    pub fn try_to_circuit(&self) -> Result<Circuit, PolyError> {
        let mut c = Circuit::new();
        let out = self.build_into(&mut c)?;
        c.set_outputs(vec![out]);
        Ok(c)
    }

    /// Appends a sum-of-products for this polynomial to `c`.
    pub fn build_into(&self, c: &mut Circuit) -> Result<NodeId, PolyError> {
        let mut terms = Vec::new();
        for (m, k) in self.sorted_terms(MonomialOrder::GrevLex) {
            let k = k.to_i64().ok_or_else(|| PolyError::CoefficientTooLarge(k.to_string()))?;
            let node = if m.is_one() {
                c.constant(1)
            } else {
                let mut fs = Vec::new();
                for &(v, e) in &m.0 {
                    for _ in 0..e {
                        fs.push(c.var(v));
                    }
                }
                if fs.len() == 1 {
                    fs[0]
                } else {
                    c.mul(fs)
                }
            };
            terms.push((k, node));
        }
        if terms.is_empty() {
            return Ok(c.constant(0));
        }
        Ok(c.lin(terms))
    }
}

impl Poly {
    pub fn to_circuit(&self) -> Circuit {
        self.try_to_circuit().expect("field representatives fit in i64")
    }

    pub fn reduce_ints(p: Prime, q: &IntPoly) -> Poly {
        let pm = BigInt::from(p.get());
        Poly::from_terms(
            p,
            q.terms().map(|(m, c)| {
                let r: BigInt = ((c % &pm) + &pm) % &pm;
                (m.clone(), p.elem(r.to_u64().expect("reduced")))
            }),
        )
    }
}

pub fn poly_equal<K: Coeff>(a: &SparsePoly<K>, b: &SparsePoly<K>) -> Result<bool, PolyError> {
    if a.ctx != b.ctx {
        return Err(PolyError::ModulusMismatch);
    }
    Ok(a.terms == b.terms)
}

/// Expands a division-free single-output circuit over `F_p`.
pub fn expand_circuit(c: &Circuit, p: Prime, caps: Caps) -> Result<Poly, PolyError> {
    expand_in(c, p, caps)
}

/// Expands over the integers.
pub fn expand_circuit_int(c: &Circuit, caps: Caps) -> Result<IntPoly, PolyError> {
    expand_in(c, (), caps)
}

pub fn expand_in<K: Coeff>(c: &Circuit, ctx: K::Ctx, caps: Caps) -> Result<SparsePoly<K>, PolyError> {
    let out = c.output()?;
    expand_nodes(c, ctx, caps, &[out]).map(|mut v| v.pop().unwrap())
}

/// Expands the given nodes, freeing intermediate results after their last use.
pub fn expand_nodes<K: Coeff>(
    c: &Circuit,
    ctx: K::Ctx,
    caps: Caps,
    targets: &[NodeId],
) -> Result<Vec<SparsePoly<K>>, PolyError> {
    let Some(&last) = targets.iter().max() else { return Ok(Vec::new()) };
    let mut live = vec![false; last.idx() + 1];
    for t in targets {
        live[t.idx()] = true;
    }
    let mut uses = vec![0usize; last.idx() + 1];
    for t in targets {
        uses[t.idx()] += 1;
    }
    for i in (0..=last.idx()).rev() {
        if live[i] {
            for ch in c.nodes()[i].children() {
                live[ch.idx()] = true;
                uses[ch.idx()] += 1;
            }
        }
    }
    let mut vals: Vec<Option<SparsePoly<K>>> = vec![None; last.idx() + 1];
    let take = |vals: &mut Vec<Option<SparsePoly<K>>>, uses: &mut Vec<usize>, id: NodeId| {
        uses[id.idx()] -= 1;
        if uses[id.idx()] == 0 {
            vals[id.idx()].take().expect("computed")
        } else {
            vals[id.idx()].clone().expect("computed")
        }
    };
    for i in 0..=last.idx() {
        if !live[i] {
            continue;
        }
        let v = match &c.nodes()[i] {
            Node::Const(k) => SparsePoly::constant(ctx, *k),
            Node::Var(v) => SparsePoly::var(ctx, *v),
            Node::Div(..) => return Err(PolyError::Division),
            Node::Lin(ts) => {
                let mut acc = SparsePoly::zero(ctx);
                for &(k, ch) in ts {
                    let p = take(&mut vals, &mut uses, ch);
                    let k = K::from_i64(ctx, k);
                    for (m, cf) in p.terms {
                        acc.add_term(m, cf.mul(&k));
                    }
                    if acc.num_terms() > caps.max_terms {
                        return Err(PolyError::TermBlowup { terms: acc.num_terms(), limit: caps.max_terms });
                    }
                }
                acc
            }
            Node::Mul(cs) => {
                let mut acc = take(&mut vals, &mut uses, cs[0]);
                for &ch in &cs[1..] {
                    let p = take(&mut vals, &mut uses, ch);
                    acc = acc.mul_capped(&p, caps)?;
                }
                acc
            }
        };
        if v.num_terms() > caps.max_terms {
            return Err(PolyError::TermBlowup { terms: v.num_terms(), limit: caps.max_terms });
        }
        vals[i] = Some(v);
    }
    Ok(targets.iter().map(|t| take(&mut vals, &mut uses, *t)).collect())
}

impl<K: Coeff> fmt::Display for SparsePoly<K> {
    /// Terms in descending graded-reverse-lex order, `coeff*monomial` joined
    /// by ` + `; the zero polynomial prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.sorted_terms(MonomialOrder::GrevLex).into_iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Parses `3*x1^2*f2 + 1*x3 - x2` style text; coefficients are integers.
pub fn parse_poly_in<K: Coeff>(s: &str, ctx: K::Ctx) -> Result<SparsePoly<K>, PolyError> {
    let err = || PolyError::Parse(s.to_string());
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err());
    }
    let mut p = SparsePoly::zero(ctx);
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let mut sign = 1i64;
        while let Some(r) = rest.strip_prefix('+').or_else(|| rest.strip_prefix('-')) {
            if rest.starts_with('-') {
                sign = -sign;
            }
            rest = r;
        }
        if rest.is_empty() {
            return Err(err());
        }
        let end = rest.char_indices().skip(1).find(|&(_, c)| c == '+' || c == '-').map_or(rest.len(), |(i, _)| i);
        let (term, tail) = rest.split_at(end);
        rest = tail;
        let mut coef = BigInt::from(sign);
        let mut pairs = Vec::new();
        for factor in term.split('*') {
            if factor.chars().all(|c| c.is_ascii_digit()) && !factor.is_empty() {
                coef *= factor.parse::<BigInt>().map_err(|_| err())?;
                continue;
            }
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (n, e.parse::<u32>().map_err(|_| err())?),
                None => (factor, 1),
            };
            let idx = |t: &str| t.parse::<u32>().ok().filter(|&i| i >= 1);
            let v = if let Some(r) = name.strip_prefix('x') {
                VarId::X(idx(r).ok_or_else(err)?)
            } else if let Some(r) = name.strip_prefix('f') {
                VarId::F(idx(r).ok_or_else(err)?)
            } else {
                return Err(err());
            };
            pairs.push((v, exp));
        }
        p.add_term(Monomial::from_pairs(pairs), big_to_coeff::<K>(ctx, &coef));
    }
    Ok(p)
}

pub fn parse_poly(s: &str, p: Prime) -> Result<Poly, PolyError> {
    parse_poly_in(s, p)
}

fn big_to_coeff<K: Coeff>(ctx: K::Ctx, v: &BigInt) -> K {
    // Horner in base 2^32 so arbitrarily large literals reduce correctly.
    let (sign, digits) = v.to_u32_digits();
    let base = K::from_i64(ctx, 1 << 32);
    let mut acc = K::from_i64(ctx, 0);
    for d in digits.iter().rev() {
        acc = acc.mul(&base).add(&K::from_i64(ctx, *d as i64));
    }
    if sign == num_bigint::Sign::Minus {
        acc.neg()
    } else {
        acc
    }
}

impl IntPoly {
    /// True when every coefficient lies in `{-1, 0, 1}`.
    pub fn has_unit_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.abs().is_one())
    }
}
