//! Buchberger's algorithm, normal forms and the quotient ring `k[x]/I`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exactpoly::{Monomial, PolyRing, Polynomial, Rational};

pub fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (mf, cf) = f.leading_term().expect("nonzero");
    let (mg, cg) = g.leading_term().expect("nonzero");
    let l = mf.lcm(mg);
    let a = f.mul_term(&mf.quotient_of(&l), &(Rational::one() / cf));
    let b = g.mul_term(&mg.quotient_of(&l), &(Rational::one() / cg));
    a - b
}

/// Full multivariate division remainder of `p` by `basis`.
pub fn reduce(p: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let leads: Vec<(Monomial, Rational)> = basis
        .iter()
        .map(|g| {
            let (m, c) = g.leading_term().expect("basis elements are nonzero");
            (m.clone(), c.clone())
        })
        .collect();
    let mut rest = p.clone();
    let mut rem = Polynomial::zero(p.ring());
    while let Some((m, c)) = rest.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(k) => {
                let (lm, lc) = &leads[k];
                rest = &rest - &basis[k].mul_term(&lm.quotient_of(&m), &(&c / lc));
            }
            None => {
                let t = Polynomial::monomial(p.ring(), m, c);
                rest = &rest - &t;
                rem = &rem + &t;
            }
        }
    }
    rem
}

/// Reduced Gröbner basis of the ideal generated by `gens` under the order of
/// their ring. Zero generators are ignored; the result is monic and sorted by
/// descending leading monomial.
pub fn buchberger(gens: &[Polynomial]) -> Vec<Polynomial> {
    let mut basis: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if basis.is_empty() {
        return basis;
    }
    let ring = basis[0].ring().clone();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    let mut done: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
    while let Some((i, j)) = pairs.pop() {
        done.insert((i, j));
        let li = basis[i].leading_monomial().unwrap().clone();
        let lj = basis[j].leading_monomial().unwrap().clone();
        // first criterion: coprime leading monomials reduce to zero
        if li.is_coprime(&lj) {
            continue;
        }
        // chain criterion: some k with LM(k) | lcm and both pairs already treated
        let l = li.lcm(&lj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading_monomial().unwrap().divides(&l)
                && done.contains(&(i.min(k), i.max(k)))
                && done.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let r = reduce(&s_polynomial(&basis[i], &basis[j]), &basis);
        if !r.is_zero() {
            let n = basis.len();
            basis.push(r);
            for k in 0..n {
                pairs.push((k, n));
            }
        }
    }
    reduce_basis(&ring, basis)
}

fn reduce_basis(ring: &Arc<PolyRing>, basis: Vec<Polynomial>) -> Vec<Polynomial> {
    // minimal basis: drop elements whose leading monomial is divisible by another's
    let mut minimal: Vec<Polynomial> = Vec::new();
    let mut sorted = basis;
    let ord = ring.order().clone();
    sorted.sort_by(|a, b| ord.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    for (idx, g) in sorted.iter().enumerate() {
        let lg = g.leading_monomial().unwrap();
        let redundant = sorted.iter().enumerate().any(|(k, h)| {
            let lh = h.leading_monomial().unwrap();
            k != idx && lh.divides(lg) && (lh != lg || k < idx)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    // inter-reduce and normalize
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, p)| p.clone()).collect();
        let (lm, lc) = minimal[k].leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let lead = Polynomial::monomial(ring, lm, lc.clone());
        let tail = &minimal[k] - &lead;
        let r = &lead + &reduce(&tail, &others);
        reduced.push(r.scale(&(Rational::one() / lc)));
    }
    reduced.sort_by(|a, b| ord.cmp(b.leading_monomial().unwrap(), a.leading_monomial().unwrap()));
    reduced
}

/// A polynomial ideal with its reduced Gröbner basis, computed once.
#[derive(Debug)]
pub struct Ideal {
    ring: Arc<PolyRing>,
    generators: Vec<Polynomial>,
    basis: Vec<Polynomial>,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        *self.ring == *other.ring && self.basis == other.basis
    }
}

impl Ideal {
    pub fn new(ring: &Arc<PolyRing>, generators: Vec<Polynomial>) -> Result<Arc<Ideal>> {
        if generators.iter().any(|g| !crate::exactpoly::same_ring(g.ring(), ring)) {
            return Err(Error::VariableMismatch);
        }
        let basis = buchberger(&generators);
        Ok(Arc::new(Ideal { ring: ring.clone(), generators, basis }))
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        if self.basis.is_empty() {
            p.clone()
        } else {
            reduce(p, &self.basis)
        }
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn contains_one(&self) -> bool {
        self.basis.iter().any(|g| g.is_constant())
    }
}

/// `normal_form(p, I)`: the canonical representative of `p` in `A = k[x]/I`.
pub fn normal_form(p: &Polynomial, ideal: &Arc<Ideal>) -> QuotientElement {
    QuotientElement::new(ideal, p)
}

pub fn ideal_contains(p: &Polynomial, ideal: &Ideal) -> bool {
    ideal.contains(p)
}

/// An element of `A = k[x]/I`, stored by its normal form.
#[derive(Clone, Debug)]
pub struct QuotientElement {
    ideal: Arc<Ideal>,
    rep: Polynomial,
}

impl PartialEq for QuotientElement {
    fn eq(&self, other: &Self) -> bool {
        same_ideal(&self.ideal, &other.ideal) && self.rep == other.rep
    }
}

impl Eq for QuotientElement {}

fn same_ideal(a: &Arc<Ideal>, b: &Arc<Ideal>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl QuotientElement {
    pub fn new(ideal: &Arc<Ideal>, p: &Polynomial) -> Self {
        QuotientElement { ideal: ideal.clone(), rep: ideal.reduce(p) }
    }

    pub fn parse(ideal: &Arc<Ideal>, text: &str) -> Result<Self> {
        Ok(QuotientElement::new(ideal, &Polynomial::parse(ideal.ring(), text)?))
    }

    pub fn zero(ideal: &Arc<Ideal>) -> Self {
        QuotientElement { ideal: ideal.clone(), rep: Polynomial::zero(ideal.ring()) }
    }

    pub fn one(ideal: &Arc<Ideal>) -> Self {
        QuotientElement::new(ideal, &Polynomial::one(ideal.ring()))
    }

    pub fn constant(ideal: &Arc<Ideal>, c: Rational) -> Self {
        QuotientElement::new(ideal, &Polynomial::constant(ideal.ring(), c))
    }

    pub fn var(ideal: &Arc<Ideal>, i: usize) -> Self {
        QuotientElement::new(ideal, &Polynomial::var(ideal.ring(), i))
    }

    pub fn ideal(&self) -> &Arc<Ideal> {
        &self.ideal
    }

    pub fn rep(&self) -> &Polynomial {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        self.rep.evaluate(point)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_ideal(&self.ideal, &other.ideal) {
            Ok(())
        } else {
            Err(Error::IdealMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(QuotientElement { ideal: self.ideal.clone(), rep: &self.rep + &other.rep })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(QuotientElement { ideal: self.ideal.clone(), rep: &self.rep - &other.rep })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(QuotientElement::new(&self.ideal, &(&self.rep * &other.rep)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QuotientElement { ideal: self.ideal.clone(), rep: self.rep.scale(c) }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = QuotientElement::one(&self.ideal);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient `self / d` in `A` when the normal-form representative is
    /// divisible by `d`'s representative in `k[x]`. A `None` does not prove
    /// non-divisibility in `A`.
    pub fn try_divide(&self, d: &QuotientElement) -> Option<QuotientElement> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        if d.rep.is_constant() {
            return Some(self.scale(&(Rational::one() / d.rep.constant_term())));
        }
        self.rep.div_exact(&d.rep).map(|q| QuotientElement::new(&self.ideal, &q))
    }
}

impl fmt::Display for QuotientElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.rep.fmt(f)
    }
}

/// `quotient_arith(a, b, op)` with the structural ideal check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn quotient_arith(a: &QuotientElement, b: &QuotientElement, op: ArithOp) -> Result<QuotientElement> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
    }
}

crate::exactpoly::forward_binop!(QuotientElement, Add, add, checked_add);
crate::exactpoly::forward_binop!(QuotientElement, Sub, sub, checked_sub);
crate::exactpoly::forward_binop!(QuotientElement, Mul, mul, checked_mul);

impl Neg for &QuotientElement {
    type Output = QuotientElement;
    fn neg(self) -> QuotientElement {
        QuotientElement { ideal: self.ideal.clone(), rep: -&self.rep }
    }
}

impl Neg for QuotientElement {
    type Output = QuotientElement;
    fn neg(self) -> QuotientElement {
        -&self
    }
}
