//! Truncated power series in the centred chart parameters `u_i = t_i − t_i(p)`,
//! Newton lifting of the non-chart coordinates, and formal vector fields.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactpoly::{int, push_signed_term, Monomial, Polynomial, Rational};
use crate::groebner::QuotientElement;
use crate::variety::{Chart, LocalElement, Point};
use crate::vfields::VectorField;

/// A power series in `s` variables known modulo terms of degree `> order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetSeries {
    nvars: usize,
    order: u32,
    coeffs: BTreeMap<Monomial, Rational>,
}

impl JetSeries {
    pub fn zero(nvars: usize, order: u32) -> Self {
        JetSeries { nvars, order, coeffs: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, order: u32, c: Rational) -> Self {
        let mut s = JetSeries::zero(nvars, order);
        s.add_term(Monomial::one(nvars), c);
        s
    }

    pub fn one(nvars: usize, order: u32) -> Self {
        JetSeries::constant(nvars, order, Rational::one())
    }

    /// The variable `u_i`.
    pub fn var(nvars: usize, order: u32, i: usize) -> Self {
        let mut s = JetSeries::zero(nvars, order);
        s.add_term(Monomial::var(nvars, i), Rational::one());
        s
    }

    pub fn from_terms(nvars: usize, order: u32, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut s = JetSeries::zero(nvars, order);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if m.degree() > self.order || c.is_zero() {
            return;
        }
        match self.coeffs.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.coeffs.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest total degree present; `None` for the zero series.
    pub fn min_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|m| m.degree()).min()
    }

    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        JetSeries {
            nvars: self.nvars,
            order,
            coeffs: self.coeffs.iter().filter(|(m, _)| m.degree() <= order).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// The same coefficients read at a new order (only safe when the caller
    /// knows the series is exact, e.g. a polynomial).
    pub fn with_order(&self, order: u32) -> Self {
        let mut s = self.truncate(order);
        s.order = order;
        s
    }

    pub fn homogeneous(&self, d: u32) -> Self {
        JetSeries {
            nvars: self.nvars,
            order: self.order,
            coeffs: self.coeffs.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.truncate(other.order);
        for (m, c) in &other.coeffs {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return JetSeries::zero(self.nvars, self.order);
        }
        JetSeries { nvars: self.nvars, order: self.order, coeffs: self.coeffs.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.coeffs {
            let da = ma.degree();
            if da > order {
                continue;
            }
            for (mb, cb) in &other.coeffs {
                if da + mb.degree() > order {
                    continue;
                }
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        JetSeries { nvars: self.nvars, order, coeffs: acc }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = JetSeries::one(self.nvars, self.order);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse by Newton iteration `b ← b(2 − ab)`.
    pub fn invert(&self) -> Result<Self> {
        let a0 = self.constant_term();
        if a0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let two = JetSeries::constant(self.nvars, self.order, int(2));
        let mut b = JetSeries::constant(self.nvars, self.order, Rational::one() / a0);
        let mut valid = 0u32;
        while valid < self.order {
            b = b.mul(&two.sub(&self.mul(&b)));
            valid = 2 * valid + 1;
        }
        Ok(b)
    }

    /// `∂/∂u_i`, known to order `order − 1`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = JetSeries::zero(self.nvars, self.order.saturating_sub(1));
        for (m, c) in &self.coeffs {
            if let Some(l) = m.lowered(i) {
                out.add_term(l, c * int(m.exponents()[i] as i64));
            }
        }
        out
    }

    pub fn evaluate_poly(p: &Polynomial, images: &[JetSeries]) -> JetSeries {
        assert_eq!(p.nvars(), images.len());
        let (nvars, order) = (images[0].nvars, images.iter().map(|s| s.order).min().unwrap());
        let mut powers: Vec<Vec<JetSeries>> = images.iter().map(|s| vec![JetSeries::one(nvars, order), s.clone()]).collect();
        let mut out = JetSeries::zero(nvars, order);
        for (m, c) in p.terms() {
            let mut t = JetSeries::constant(nvars, order, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize]);
            }
            out = out.add(&t);
        }
        out
    }
}

impl fmt::Display for JetSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // graded, then descending lex inside each degree
        let mut terms: Vec<(&Monomial, &Rational)> = self.coeffs.iter().collect();
        terms.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then(b.0.cmp(a.0)));
        let mut out = String::new();
        for (k, (m, c)) in terms.iter().enumerate() {
            let body: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("u{}", i + 1) } else { format!("u{}^{}", i + 1, e) })
                .collect();
            push_signed_term(&mut out, c, &body.join("*"), k == 0);
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{} + O({})", out, self.order + 1)
    }
}

/// Taylor data of a chart at a point: every ambient coordinate and `1/h` as
/// series in `u = t − t(p)` to a fixed order.
#[derive(Clone, Debug)]
pub struct PointJets {
    chart: Arc<Chart>,
    point: Point,
    order: u32,
    coords: Vec<JetSeries>,
    h_inv: JetSeries,
}

impl PointJets {
    pub fn new(chart: &Arc<Chart>, point: &Point, order: u32) -> Result<PointJets> {
        if !point.in_chart(chart) {
            return Err(Error::SingularChart);
        }
        let coords = newton_coordinates(chart, point, order)?;
        let h_series = JetSeries::evaluate_poly_or_const(chart.h().rep(), &coords, chart.dim(), order);
        let h_inv = h_series.invert()?;
        Ok(PointJets { chart: chart.clone(), point: point.clone(), order, coords, h_inv })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn point(&self) -> &Point {
        &self.point
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Series of the ambient coordinate `x_j`.
    pub fn coordinate(&self, j: usize) -> &JetSeries {
        &self.coords[j]
    }

    pub fn h_inverse(&self) -> &JetSeries {
        &self.h_inv
    }

    pub fn expand_a(&self, f: &QuotientElement, order: u32) -> JetSeries {
        let order = order.min(self.order);
        let images: Vec<JetSeries> = self.coords.iter().map(|c| c.truncate(order)).collect();
        JetSeries::evaluate_poly_or_const(f.rep(), &images, self.chart.dim(), order)
    }

    pub fn expand(&self, f: &LocalElement, order: u32) -> JetSeries {
        let order = order.min(self.order);
        let mut s = self.expand_a(f.numerator(), order);
        if f.h_power() > 0 {
            s = s.mul(&self.h_inv.truncate(order).pow(f.h_power()));
        }
        s
    }

    /// `f ∈ k[u]` written back as an element of `A` via `u_k = t_k − t_k(p)`.
    pub fn to_a(&self, f: &JetSeries) -> QuotientElement {
        let v = self.chart.variety();
        let pc = self.point.chart_coords(&self.chart);
        let shifted: Vec<QuotientElement> = (0..self.chart.dim())
            .map(|k| &v.var(self.chart.params()[k]) - &QuotientElement::constant(v.ideal(), pc[k].clone()))
            .collect();
        let mut acc = QuotientElement::zero(v.ideal());
        for (m, c) in f.terms() {
            let mut t = QuotientElement::constant(v.ideal(), c.clone());
            for (k, &e) in m.exponents().iter().enumerate() {
                t = &t * &shifted[k].pow(e);
            }
            acc = &acc + &t;
        }
        acc
    }
}

impl JetSeries {
    fn evaluate_poly_or_const(p: &Polynomial, images: &[JetSeries], nvars: usize, order: u32) -> JetSeries {
        if images.is_empty() {
            return JetSeries::constant(nvars, order, p.constant_term());
        }
        JetSeries::evaluate_poly(p, images)
    }
}

/// Newton iteration `w ← w − M(t,w)^{-1} g(t,w)` on the rows of the chart
/// minor, `M` the square Jacobian block of the minor.
fn newton_coordinates(chart: &Chart, point: &Point, order: u32) -> Result<Vec<JetSeries>> {
    let v = chart.variety();
    let (n, s) = (v.ambient_dim(), chart.dim());
    let mut x: Vec<JetSeries> = (0..n).map(|j| JetSeries::constant(s, order, point.coords()[j].clone())).collect();
    for (k, &j) in chart.params().iter().enumerate() {
        x[j] = x[j].add(&JetSeries::var(s, order, k));
    }
    if chart.cols().is_empty() {
        return Ok(x);
    }
    let gens: Vec<&Polynomial> = chart.rows().iter().map(|&r| &v.generators()[r]).collect();
    let block: Vec<Vec<Polynomial>> =
        gens.iter().map(|g| chart.cols().iter().map(|&c| g.partial_derivative(c)).collect()).collect();
    let mut valid = 0u32;
    let mut rounds = 0;
    loop {
        let residual: Vec<JetSeries> = gens.iter().map(|g| JetSeries::evaluate_poly(g, &x)).collect();
        if residual.iter().all(|r| r.is_zero()) {
            break;
        }
        if valid >= order && rounds > 0 {
            return Err(Error::Internal("Newton iteration did not converge".into()));
        }
        let m: Vec<Vec<JetSeries>> = block.iter().map(|row| row.iter().map(|p| JetSeries::evaluate_poly(p, &x)).collect()).collect();
        let delta = solve_series(m, residual)?;
        for (k, &c) in chart.cols().iter().enumerate() {
            x[c] = x[c].sub(&delta[k]);
        }
        valid = 2 * valid + 1;
        rounds += 1;
    }
    // certificate: every generator vanishes to the requested order
    for g in v.generators() {
        if !JetSeries::evaluate_poly(g, &x).is_zero() {
            return Err(Error::Internal(format!("generator {g} does not vanish on the lifted coordinates")));
        }
    }
    Ok(x)
}

/// Gaussian elimination over series; pivots need an invertible constant term.
fn solve_series(mut m: Vec<Vec<JetSeries>>, mut b: Vec<JetSeries>) -> Result<Vec<JetSeries>> {
    let r = m.len();
    for c in 0..r {
        let piv = (c..r)
            .find(|&i| !m[i][c].constant_term().is_zero())
            .ok_or_else(|| Error::Internal("chart block singular at the point".into()))?;
        m.swap(c, piv);
        b.swap(c, piv);
        let inv = m[c][c].invert()?;
        for k in c..r {
            m[c][k] = m[c][k].mul(&inv);
        }
        b[c] = b[c].mul(&inv);
        for i in 0..r {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..r {
                    let t = f.mul(&m[c][k]);
                    m[i][k] = m[i][k].sub(&t);
                }
                let t = f.mul(&b[c]);
                b[i] = b[i].sub(&t);
            }
        }
    }
    Ok(b)
}

/// `taylor_expand(f, c, p, N)`.
pub fn taylor_expand(f: &LocalElement, chart: &Arc<Chart>, point: &Point, order: u32) -> Result<JetSeries> {
    Ok(PointJets::new(chart, point, order)?.expand(f, order))
}

/// `series_invert`.
pub fn series_invert(a: &JetSeries) -> Result<JetSeries> {
    a.invert()
}

/// A formal vector field `Σ Q_i ∂/∂X_i` known to a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetField {
    components: Vec<JetSeries>,
}

impl JetField {
    pub fn new(components: Vec<JetSeries>) -> Self {
        let order = components.iter().map(|c| c.order).min().unwrap_or(0);
        JetField { components: components.into_iter().map(|c| c.truncate(order)).collect() }
    }

    pub fn zero(nvars: usize, order: u32) -> Self {
        JetField { components: vec![JetSeries::zero(nvars, order); nvars] }
    }

    /// `X^k ∂/∂X_i`.
    pub fn monomial(nvars: usize, order: u32, k: Monomial, i: usize) -> Self {
        let mut f = JetField::zero(nvars, order);
        f.components[i] = JetSeries::from_terms(nvars, order, [(k, Rational::one())]);
        f
    }

    pub fn components(&self) -> &[JetSeries] {
        &self.components
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn order(&self) -> u32 {
        self.components.first().map_or(0, |c| c.order)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// Lowest degree present, where `Q∂/∂X_i` has degree `deg Q − 1`.
    pub fn min_degree(&self) -> Option<i64> {
        self.components.iter().filter_map(|c| c.min_degree()).min().map(|d| d as i64 - 1)
    }

    /// Homogeneous component of field degree `d ≥ −1`.
    pub fn graded(&self, d: i64) -> JetField {
        JetField { components: self.components.iter().map(|c| if d + 1 < 0 { JetSeries::zero(c.nvars, c.order) } else { c.homogeneous((d + 1) as u32) }).collect() }
    }

    /// Nonzero coefficients `(k, i, c)` of `c·X^k ∂/∂X_i`.
    pub fn terms(&self) -> Vec<(Monomial, usize, Rational)> {
        let mut out = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            for (m, v) in c.terms() {
                out.push((m.clone(), i, v.clone()));
            }
        }
        out
    }

    pub fn add(&self, other: &JetField) -> JetField {
        JetField::new(self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect())
    }

    pub fn sub(&self, other: &JetField) -> JetField {
        JetField::new(self.components.iter().zip(&other.components).map(|(a, b)| a.sub(b)).collect())
    }

    pub fn scale(&self, c: &Rational) -> JetField {
        JetField { components: self.components.iter().map(|a| a.scale(c)).collect() }
    }

    /// `μ(f) = Σ Q_i ∂f/∂X_i`.
    pub fn apply(&self, f: &JetSeries) -> JetSeries {
        let mut acc = JetSeries::zero(f.nvars, f.order.saturating_sub(1).min(self.order()));
        for (i, q) in self.components.iter().enumerate() {
            acc = acc.add(&q.mul(&f.derivative(i)));
        }
        acc
    }

    /// `∂μ/∂X_i`, componentwise.
    pub fn derivative(&self, i: usize) -> JetField {
        JetField::new(self.components.iter().map(|c| c.derivative(i)).collect())
    }

    /// `[a,b]_i = a(b_i) − b(a_i)`, known one order lower.
    pub fn bracket(&self, other: &JetField) -> JetField {
        JetField::new(
            self.components.iter().zip(&other.components).map(|(ai, bi)| self.apply(bi).sub(&other.apply(ai))).collect(),
        )
    }

    pub fn truncate(&self, order: u32) -> JetField {
        JetField { components: self.components.iter().map(|c| c.truncate(order)).collect() }
    }
}

impl fmt::Display for JetField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({})*d/dX{}", c, i + 1))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Component `i` is the expansion of `η(t_i)`.
pub fn embed_field(eta: &VectorField, jets: &PointJets, order: u32) -> JetField {
    let chart = jets.chart();
    JetField::new(chart.params().iter().map(|&j| jets.expand_a(&eta.coeffs()[j], order)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{rat, PolyRing};
    use crate::variety::{chart_by_minor, standard_atlas, Variety};
    use crate::vfields::{chart_basic_field, truncated_lift};

    fn north() -> (Arc<Chart>, Point) {
        let v = Variety::sphere();
        let c = chart_by_minor(&v, "2*z").unwrap();
        (c, Point::parse(&v, &["0", "0", "1"]).unwrap())
    }

    /// `(1 − w)^{1/2}` with `w = u1² + u2²`, by the binomial series computed
    /// with ordinary polynomials in two fresh variables.
    fn binomial_oracle(max_deg: u32) -> BTreeMap<Monomial, Rational> {
        let r = PolyRing::grevlex(&["u1", "u2"]);
        let w = Polynomial::parse(&r, "u1^2 + u2^2").unwrap();
        let mut acc = Polynomial::zero(&r);
        let mut binom = Rational::one();
        for k in 0..=max_deg / 2 {
            let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
            acc = &acc + &w.pow(k).scale(&(&binom * &sign));
            // C(1/2, k+1) = C(1/2, k)·(1/2 − k)/(k+1)
            binom = binom * (rat(1, 2) - int(k as i64)) / int(k as i64 + 1);
        }
        acc.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
    }

    #[test]
    fn newton_z_series_matches_binomial_series() {
        let (c, p) = north();
        let jets = PointJets::new(&c, &p, 6).unwrap();
        let z = jets.coordinate(2);
        let want = binomial_oracle(6);
        assert_eq!(z.coeffs, want);
        assert_eq!(z.truncate(4).to_string(), "1 - 1/2*u1^2 - 1/2*u2^2 - 1/8*u1^4 - 1/4*u1^2*u2^2 - 1/8*u2^4 + O(5)");
        assert_eq!(jets.coordinate(0).to_string(), "u1 + O(7)");
    }

    #[test]
    fn expansion_examples() {
        let (c, p) = north();
        let jets = PointJets::new(&c, &p, 4).unwrap();
        let f = c.parse_local("x*y + z - 1").unwrap();
        assert!(jets.expand(&f, 4).constant_term().is_zero());
        // h = 2z; 1/h² expanded agrees with the inverted series squared
        let inv2 = jets.expand(&LocalElement::h_inverse_pow(c.localization(), 2), 4);
        assert_eq!(inv2, jets.h_inverse().pow(2));
        // an off-centre point on the circle
        let circ = Variety::circle();
        let cy = chart_by_minor(&circ, "2*y").unwrap();
        let q = Point::parse(&circ, &["3/5", "4/5"]).unwrap();
        let j = PointJets::new(&cy, &q, 5).unwrap();
        let g = JetSeries::evaluate_poly(&circ.generators()[0], &[j.coordinate(0).clone(), j.coordinate(1).clone()]);
        assert!(g.is_zero());
        assert_eq!(j.coordinate(1).constant_term(), rat(4, 5));
    }

    #[test]
    fn series_inversion_examples() {
        assert_eq!(JetSeries::one(2, 5).invert().unwrap(), JetSeries::one(2, 5));
        let two_minus = JetSeries::from_terms(
            2,
            2,
            [(Monomial::one(2), int(2)), (Monomial::new(vec![2, 0]), int(-1)), (Monomial::new(vec![0, 2]), int(-1))],
        );
        assert_eq!(two_minus.invert().unwrap().to_string(), "1/2 + 1/4*u1^2 + 1/4*u2^2 + O(3)");
        let one_plus = JetSeries::one(1, 3).add(&JetSeries::var(1, 3, 0));
        assert_eq!(one_plus.invert().unwrap().to_string(), "1 - u1 + u1^2 - u1^3 + O(4)");
        assert_eq!(JetSeries::var(1, 3, 0).invert(), Err(Error::NotInvertible));
    }

    #[test]
    fn embedding_examples() {
        let a1 = Variety::affine_space(&["t"]);
        let ch = standard_atlas(&a1).remove(0);
        let p0 = Point::parse(&a1, &["0"]).unwrap();
        let jets = PointJets::new(&ch, &p0, 5).unwrap();
        let tdt = VectorField::parse(&a1, "t*d/dt").unwrap();
        let e = embed_field(&tdt, &jets, 5);
        assert_eq!(e, JetField::monomial(1, 5, Monomial::new(vec![1]), 0));
        assert_eq!(e.min_degree(), Some(0));

        let (c, p) = north();
        let jets = PointJets::new(&c, &p, 5).unwrap();
        let d12 = VectorField::parse(c.variety(), "y*d/dx - x*d/dy").unwrap();
        let e = embed_field(&d12, &jets, 5);
        let want = JetField::monomial(2, 5, Monomial::new(vec![0, 1]), 0).sub(&JetField::monomial(2, 5, Monomial::new(vec![1, 0]), 1));
        assert_eq!(e, want);
    }

    #[test]
    fn truncated_lifts_embed_to_coordinate_fields() {
        let (c, p) = north();
        for n in 0..=4 {
            let jets = PointJets::new(&c, &p, n + 3).unwrap();
            for i in 0..2 {
                let eta = truncated_lift(&c, &p, i, n).unwrap();
                let e = embed_field(&eta, &jets, n + 3);
                let rest = e.sub(&JetField::monomial(2, n + 3, Monomial::one(2), i));
                assert!(rest.min_degree().map_or(true, |d| d >= n as i64), "N={n}: {rest}");
            }
        }
    }

    #[test]
    fn embedding_respects_brackets() {
        let (c, p) = north();
        let jets = PointJets::new(&c, &p, 6).unwrap();
        let a = chart_basic_field(&c, 0);
        let b = VectorField::parse(c.variety(), "x*z*d/dy - x*y*d/dz").unwrap();
        let lhs = embed_field(&a.bracket(&b).unwrap(), &jets, 5);
        let rhs = embed_field(&a, &jets, 6).bracket(&embed_field(&b, &jets, 6));
        assert_eq!(lhs, rhs.truncate(5));
    }
}
