use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{push_signed_term, Monomial, MonomialOrder, Rational};
use crate::error::{Error, Result};

/// Variable names plus the active monomial order.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    names: Vec<String>,
    order: MonomialOrder,
}

impl PolyRing {
    pub fn new(names: Vec<String>, order: MonomialOrder) -> Arc<Self> {
        assert_eq!(names.len(), order.priority().len(), "order length must match the variables");
        Arc::new(PolyRing { names, order })
    }

    /// Graded reverse lexicographic order in the given variable order.
    pub fn grevlex(names: &[&str]) -> Arc<Self> {
        PolyRing::new(names.iter().map(|s| s.to_string()).collect(), MonomialOrder::grevlex(names.len()))
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub(crate) fn monomial_body(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (name, &e) in self.names.iter().zip(m.exponents()) {
            match e {
                0 => {}
                1 => parts.push(name.clone()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        parts.join("*")
    }
}

pub(crate) fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Sparse polynomial with exact rational coefficients; zero coefficients are
/// never stored.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Polynomial::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Rational) -> Self {
        Polynomial::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        Polynomial::monomial(ring, Monomial::var(ring.nvars(), i), Rational::one())
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial, c: Rational) -> Self {
        let mut p = Polynomial::zero(ring);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(ring: &Arc<PolyRing>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn parse(ring: &Arc<PolyRing>, text: &str) -> Result<Self> {
        super::parse::parse_polynomial(ring, text)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Terms in descending order of the ring's monomial order.
    pub fn terms_ordered(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        let ord = self.ring.order();
        v.sort_by(|a, b| ord.cmp(b.0, a.0));
        v
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.nvars()))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        let ord = self.ring.order();
        self.terms.iter().max_by(|a, b| ord.cmp(a.0, b.0))
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.leading_term().map(|(m, _)| m)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::VariableMismatch)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut out = Polynomial::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn partial_derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e > 0 {
                out.add_term(m.lowered(i).unwrap(), c * super::int(e as i64));
            }
        }
        out
    }

    /// Exact value at a point of matching length.
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars(), "point length must equal the variable count");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `images[i]` for variable `i`; the images share a ring
    /// which becomes the ring of the result.
    pub fn compose(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.nvars());
        let target = images
            .first()
            .map(|p| p.ring.clone())
            .expect("compose needs at least one image; use constant_term for nullary rings");
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![Polynomial::one(&target), p.clone()]).collect();
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Re-reads the same terms in another ring with the same variable count.
    pub fn with_ring(&self, ring: &Arc<PolyRing>) -> Polynomial {
        assert_eq!(ring.nvars(), self.nvars());
        Polynomial { ring: ring.clone(), terms: self.terms.clone() }
    }

    /// Division with remainder by a single divisor under the ring order.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let (lm, lc) = divisor.leading_term().map(|(m, c)| (m.clone(), c.clone())).expect("division by zero polynomial");
        let mut q = Polynomial::zero(&self.ring);
        let mut r = Polynomial::zero(&self.ring);
        let mut p = self.clone();
        while let Some((m, c)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if lm.divides(&m) {
                let qm = lm.quotient_of(&m);
                let qc = &c / &lc;
                p = &p - &divisor.mul_term(&qm, &qc);
                q.add_term(qm, qc);
            } else {
                p.terms.remove(&m);
                r.add_term(m, c);
            }
        }
        (q, r)
    }

    /// `Some(q)` with `self = q * divisor` when the division is exact.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms_ordered().into_iter().enumerate() {
            push_signed_term(&mut out, c, &self.ring.monomial_body(m), i == 0);
        }
        f.write_str(&out)
    }
}

macro_rules! forward_binop {
    ($t:ty, $trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&$t> for &$t {
            type Output = $t;
            fn $method(self, rhs: &$t) -> $t {
                self.$checked(rhs).expect(concat!(stringify!($trait), " of incompatible operands"))
            }
        }
        impl $trait<$t> for $t {
            type Output = $t;
            fn $method(self, rhs: $t) -> $t {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&$t> for $t {
            type Output = $t;
            fn $method(self, rhs: &$t) -> $t {
                (&self).$method(rhs)
            }
        }
        impl $trait<$t> for &$t {
            type Output = $t;
            fn $method(self, rhs: $t) -> $t {
                self.$method(&rhs)
            }
        }
    };
}
pub(crate) use forward_binop;

forward_binop!(Polynomial, Add, add, checked_add);
forward_binop!(Polynomial, Sub, sub, checked_sub);
forward_binop!(Polynomial, Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{int, rat};
    use proptest::prelude::*;

    fn xyz() -> Arc<PolyRing> {
        PolyRing::grevlex(&["x", "y", "z"])
    }

    fn p(r: &Arc<PolyRing>, s: &str) -> Polynomial {
        Polynomial::parse(r, s).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = xyz();
        assert_eq!(p(&r, "x+y") * p(&r, "x-y"), p(&r, "x^2-y^2"));
    }

    #[test]
    fn additive_identity_and_cancellation() {
        let r = xyz();
        let s = p(&r, "x^2+y^2+z^2-1");
        assert_eq!(&s + &Polynomial::zero(&r), s);
        assert!((&s - &s).is_zero());
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = p(&xyz(), "x");
        let b = p(&PolyRing::grevlex(&["x", "y"]), "x");
        assert_eq!(a.checked_add(&b), Err(Error::VariableMismatch));
        assert_eq!(a.checked_mul(&b), Err(Error::VariableMismatch));
    }

    #[test]
    fn partials_of_the_sphere() {
        let r = xyz();
        let s = p(&r, "x^2+y^2+z^2-1");
        assert_eq!(s.partial_derivative(0), p(&r, "2*x"));
        assert_eq!(s.partial_derivative(2), p(&r, "2*z"));
        assert!(p(&r, "y^3").partial_derivative(0).is_zero());
    }

    #[test]
    fn evaluation_examples() {
        let r = xyz();
        let north = [int(0), int(0), int(1)];
        assert_eq!(p(&r, "x^2+y^2+z^2-1").evaluate(&north), int(0));
        assert_eq!(p(&r, "2*z").evaluate(&north), int(2));
        // 3/5 * (1 - 16/25) by hand
        let q = [rat(3, 5), rat(4, 5), int(0)];
        assert_eq!(p(&r, "x-x*y^2-x*z^2").evaluate(&q), rat(27, 125));
    }

    #[test]
    fn printing_is_canonical() {
        let r = xyz();
        assert_eq!(p(&r, "-1 + z^2 + y^2 + x^2").to_string(), "x^2 + y^2 + z^2 - 1");
        assert_eq!(p(&r, "1/2*x*y - 3/4").to_string(), "1/2*x*y - 3/4");
        assert_eq!(p(&r, "-x").to_string(), "-x");
        assert_eq!(Polynomial::zero(&r).to_string(), "0");
    }

    #[test]
    fn exact_division() {
        let r = xyz();
        let a = p(&r, "x^2*z - y^2*z");
        assert_eq!(a.div_exact(&p(&r, "2*z")), Some(p(&r, "1/2*x^2 - 1/2*y^2")));
        assert_eq!(p(&r, "x+1").div_exact(&p(&r, "z")), None);
    }

    #[test]
    fn compose_substitutes() {
        let r = xyz();
        let u = PolyRing::grevlex(&["u"]);
        let images = vec![p(&u, "u+1"), p(&u, "u"), p(&u, "2")];
        assert_eq!(p(&r, "x*y + z").compose(&images), p(&u, "u^2 + u + 2"));
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -5i64..6), 0..6).prop_map(|terms| {
            let r = xyz();
            Polynomial::from_terms(&r, terms.into_iter().map(|((a, b, c), k)| (Monomial::new(vec![a, b, c]), int(k))))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
        }

        #[test]
        fn evaluation_is_multiplicative(a in arb_poly(), b in arb_poly(), x in -3i64..4, y in -3i64..4, z in -3i64..4) {
            let pt = [rat(x, 2), int(y), rat(z, 3)];
            prop_assert_eq!((&a * &b).evaluate(&pt), a.evaluate(&pt) * b.evaluate(&pt));
        }

        #[test]
        fn leibniz_rule(a in arb_poly(), b in arb_poly(), i in 0usize..3) {
            let lhs = (&a * &b).partial_derivative(i);
            let rhs = &(&a.partial_derivative(i) * &b) + &(&a * &b.partial_derivative(i));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn print_parse_roundtrip(a in arb_poly()) {
            let again = Polynomial::parse(a.ring(), &a.to_string()).unwrap();
            prop_assert_eq!(again, a);
        }
    }
}
