//! Affine varieties, the Jacobian, the standard atlas, localizations `A_(h)`
//! and the chart derivations `∂/∂t_i`.

use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{fmt_rational, MonomialOrder, PolyRing, Polynomial, Rational};
use crate::groebner::{Ideal, QuotientElement};

/// `X = V(g_1, …, g_m) ⊂ 𝔸ⁿ` with its Jacobian and certified rank.
#[derive(Debug)]
pub struct Variety {
    ring: Arc<PolyRing>,
    ideal: Arc<Ideal>,
    generators: Vec<Polynomial>,
    jacobian: Vec<Vec<QuotientElement>>,
    rank: usize,
}

impl Variety {
    pub fn new(ring: &Arc<PolyRing>, generators: Vec<Polynomial>) -> Result<Arc<Variety>> {
        let generators: Vec<Polynomial> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        let ideal = Ideal::new(ring, generators.clone())?;
        if ideal.contains_one() {
            return Err(Error::EmptyVariety);
        }
        let n = ring.nvars();
        let jacobian: Vec<Vec<QuotientElement>> = generators
            .iter()
            .map(|g| (0..n).map(|j| QuotientElement::new(&ideal, &g.partial_derivative(j))).collect())
            .collect();
        let mut v = Variety { ring: ring.clone(), ideal, generators, jacobian, rank: 0 };
        v.rank = v.certify_rank()?;
        Ok(Arc::new(v))
    }

    /// Parses generators in a ring with the given variable names and order.
    pub fn parse(names: &[&str], order: Option<MonomialOrder>, generators: &[&str]) -> Result<Arc<Variety>> {
        let order = order.unwrap_or_else(|| MonomialOrder::grevlex(names.len()));
        let ring = PolyRing::new(names.iter().map(|s| s.to_string()).collect(), order);
        let gens = generators.iter().map(|g| Polynomial::parse(&ring, g)).collect::<Result<Vec<_>>>()?;
        Variety::new(&ring, gens)
    }

    pub fn affine_space(names: &[&str]) -> Arc<Variety> {
        Variety::parse(names, None, &[]).expect("affine space is nonempty")
    }

    pub fn sphere() -> Arc<Variety> {
        Variety::parse(&["x", "y", "z"], None, &["x^2 + y^2 + z^2 - 1"]).expect("sphere")
    }

    pub fn circle() -> Arc<Variety> {
        Variety::parse(&["x", "y"], None, &["x^2 + y^2 - 1"]).expect("circle")
    }

    // r is the largest k with a nonzero k×k minor; larger minors vanish by
    // maximality. Over a domain every nonzero minor is a non-zero-divisor, so a
    // nilpotent maximal minor means the ideal is not prime.
    fn certify_rank(&self) -> Result<usize> {
        let (m, n) = (self.generators.len(), self.ring.nvars());
        let mut best = 0;
        for k in 1..=m.min(n) {
            if self.minors(k).next().is_some() {
                best = k;
            } else {
                break;
            }
        }
        if best > 0 && self.minors(best).all(|(_, _, h)| (&h * &h).is_zero()) {
            return Err(Error::RankCertification(format!(
                "every nonzero {best}x{best} minor squares to zero; the ideal is not prime"
            )));
        }
        Ok(best)
    }

    /// Nonzero `k×k` minors as `(rows, cols, det)` in lexicographic order of
    /// the index sets.
    pub fn minors(&self, k: usize) -> impl Iterator<Item = (Vec<usize>, Vec<usize>, QuotientElement)> + '_ {
        let rows = subsets(self.generators.len(), k);
        let cols = subsets(self.ring.nvars(), k);
        rows.into_iter()
            .flat_map(move |r| cols.clone().into_iter().map(move |c| (r.clone(), c)))
            .filter_map(move |(r, c)| {
                let d = self.minor(&r, &c);
                (!d.is_zero()).then_some((r, c, d))
            })
    }

    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> QuotientElement {
        let sub: Vec<Vec<QuotientElement>> =
            rows.iter().map(|&i| cols.iter().map(|&j| self.jacobian[i][j].clone()).collect()).collect();
        determinant(&self.ideal, &sub)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn ideal(&self) -> &Arc<Ideal> {
        &self.ideal
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn jacobian(&self) -> &[Vec<QuotientElement>] {
        &self.jacobian
    }

    pub fn ambient_dim(&self) -> usize {
        self.ring.nvars()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.ring.nvars() - self.rank
    }

    pub fn is_hypersurface(&self) -> bool {
        self.generators.len() == 1
    }

    pub fn element(&self, text: &str) -> Result<QuotientElement> {
        QuotientElement::parse(&self.ideal, text)
    }

    pub fn var(&self, i: usize) -> QuotientElement {
        QuotientElement::var(&self.ideal, i)
    }

    /// Ambient partial of the normal-form representative. Only combinations
    /// along vector fields are well defined on `A`.
    pub fn partial(&self, f: &QuotientElement, j: usize) -> QuotientElement {
        QuotientElement::new(&self.ideal, &f.rep().partial_derivative(j))
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Laplace expansion along the first row; the matrices here are at most 3×3.
pub fn determinant(ideal: &Arc<Ideal>, m: &[Vec<QuotientElement>]) -> QuotientElement {
    match m.len() {
        0 => QuotientElement::one(ideal),
        1 => m[0][0].clone(),
        k => {
            let mut acc = QuotientElement::zero(ideal);
            for c in 0..k {
                if m[0][c].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<QuotientElement>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, e)| e.clone()).collect()).collect();
                let t = &m[0][c] * &determinant(ideal, &sub);
                acc = if c % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

/// The chart `N(h)` of a nonzero `r×r` minor together with the Cramer
/// numerators of the basic fields `h∂/∂t_i`.
#[derive(Debug)]
pub struct Chart {
    variety: Arc<Variety>,
    rows: Vec<usize>,
    cols: Vec<usize>,
    params: Vec<usize>,
    loc: Arc<Localization>,
    // basic[i][j]: coefficient of ∂/∂x_j in h∂/∂t_i, an element of A
    basic: Vec<Vec<QuotientElement>>,
}

impl Chart {
    fn from_minor(variety: &Arc<Variety>, rows: Vec<usize>, cols: Vec<usize>, h: QuotientElement) -> Chart {
        let n = variety.ambient_dim();
        let params: Vec<usize> = (0..n).filter(|j| !cols.contains(j)).collect();
        let ideal = variety.ideal();
        let mut basic = Vec::with_capacity(params.len());
        for &p in &params {
            let mut coeffs = vec![QuotientElement::zero(ideal); n];
            coeffs[p] = h.clone();
            // Cramer: column c of the minor replaced by -J[rows][p]
            for (ci, &c) in cols.iter().enumerate() {
                let m: Vec<Vec<QuotientElement>> = rows
                    .iter()
                    .map(|&r| {
                        cols.iter()
                            .enumerate()
                            .map(|(cj, &cc)| if cj == ci { -&variety.jacobian[r][p] } else { variety.jacobian[r][cc].clone() })
                            .collect()
                    })
                    .collect();
                coeffs[c] = determinant(ideal, &m);
            }
            basic.push(coeffs);
        }
        Chart { variety: variety.clone(), rows, cols, params, loc: Localization::new(h), basic }
    }

    pub fn variety(&self) -> &Arc<Variety> {
        &self.variety
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    /// Ambient indices of the chart parameters `t_1, …, t_s`.
    pub fn params(&self) -> &[usize] {
        &self.params
    }

    pub fn param_names(&self) -> Vec<String> {
        self.params.iter().map(|&j| self.variety.ring().names()[j].clone()).collect()
    }

    pub fn dim(&self) -> usize {
        self.params.len()
    }

    pub fn h(&self) -> &QuotientElement {
        self.loc.h()
    }

    pub fn localization(&self) -> &Arc<Localization> {
        &self.loc
    }

    /// Ambient coefficients of `h∂/∂t_i`.
    pub fn basic(&self, i: usize) -> &[QuotientElement] {
        &self.basic[i]
    }

    /// `h∂/∂t_i` applied to `f ∈ A`.
    pub fn basic_apply(&self, i: usize, f: &QuotientElement) -> QuotientElement {
        let mut acc = QuotientElement::zero(self.variety.ideal());
        for (j, c) in self.basic[i].iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(c * &self.variety.partial(f, j));
            }
        }
        acc
    }

    /// The chart `N(hq) ⊂ N(h)` with the same parameters.
    pub fn localize_further(&self, q: &QuotientElement) -> Result<Chart> {
        let h = self.h() * q;
        if h.is_zero() {
            return Err(Error::Localization("the refined minor is zero".into()));
        }
        Ok(Chart {
            variety: self.variety.clone(),
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            params: self.params.clone(),
            loc: Localization::new(h),
            basic: self.basic.iter().map(|row| row.iter().map(|c| c * q).collect()).collect(),
        })
    }

    pub fn one(&self) -> LocalElement {
        LocalElement::one(&self.loc)
    }

    pub fn local(&self, f: &QuotientElement) -> LocalElement {
        LocalElement::from_a(&self.loc, f)
    }

    /// Chart parameter `t_i` as an element of `A_(h)`.
    pub fn param(&self, i: usize) -> LocalElement {
        self.local(&self.variety.var(self.params[i]))
    }

    pub fn parse_local(&self, text: &str) -> Result<LocalElement> {
        LocalElement::parse(&self.loc, text)
    }

    pub fn report(&self, point: Option<&Point>) -> ChartReport {
        ChartReport {
            minor: self.h().to_string(),
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            parameters: self.param_names(),
            base_point: point.map(|p| p.coords().iter().map(fmt_rational).collect()),
        }
    }
}

/// One chart per nonzero `r×r` minor.
pub fn standard_atlas(v: &Arc<Variety>) -> Vec<Arc<Chart>> {
    v.minors(v.rank()).map(|(r, c, h)| Arc::new(Chart::from_minor(v, r, c, h))).collect()
}

/// The atlas chart whose minor equals `minor` in `A`.
pub fn chart_by_minor(v: &Arc<Variety>, minor: &str) -> Result<Arc<Chart>> {
    let h = v.element(minor)?;
    standard_atlas(v)
        .into_iter()
        .find(|c| *c.h() == h)
        .ok_or_else(|| Error::Input(format!("no standard chart with minor {minor}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartReport {
    pub minor: String,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub parameters: Vec<String>,
    pub base_point: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyReport {
    pub variables: Vec<String>,
    pub generators: Vec<String>,
    pub jacobian: Vec<Vec<String>>,
    pub rank: usize,
    pub dimension: usize,
    pub charts: Vec<ChartReport>,
}

impl Variety {
    pub fn report(self: &Arc<Self>) -> VarietyReport {
        VarietyReport {
            variables: self.ring.names().to_vec(),
            generators: self.generators.iter().map(|g| g.to_string()).collect(),
            jacobian: self.jacobian.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect(),
            rank: self.rank,
            dimension: self.dim(),
            charts: standard_atlas(self).iter().map(|c| c.report(None)).collect(),
        }
    }
}

/// A rational point of `X`.
#[derive(Clone, Debug)]
pub struct Point {
    variety: Arc<Variety>,
    coords: Vec<Rational>,
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.variety, &other.variety) && self.coords == other.coords
    }
}

impl Point {
    pub fn new(variety: &Arc<Variety>, coords: Vec<Rational>) -> Result<Point> {
        if coords.len() != variety.ambient_dim() {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, the ambient space {}",
                coords.len(),
                variety.ambient_dim()
            )));
        }
        if let Some(g) = variety.generators().iter().find(|g| !g.evaluate(&coords).is_zero()) {
            return Err(Error::PointNotOnVariety(g.to_string()));
        }
        Ok(Point { variety: variety.clone(), coords })
    }

    pub fn parse(variety: &Arc<Variety>, coords: &[&str]) -> Result<Point> {
        Point::new(variety, coords.iter().map(|c| crate::exactpoly::parse_rational(c)).collect::<Result<_>>()?)
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn variety(&self) -> &Arc<Variety> {
        &self.variety
    }

    pub fn in_chart(&self, c: &Chart) -> bool {
        !c.h().evaluate(&self.coords).is_zero()
    }

    /// Coordinates of the point in the chart parameters.
    pub fn chart_coords(&self, c: &Chart) -> Vec<Rational> {
        c.params().iter().map(|&j| self.coords[j].clone()).collect()
    }

    /// The first atlas chart containing the point.
    pub fn default_chart(&self) -> Result<Arc<Chart>> {
        standard_atlas(&self.variety).into_iter().find(|c| self.in_chart(c)).ok_or(Error::SingularChart)
    }
}

/// `A_(h)` for a fixed nonzero `h ∈ A`, with a cache of powers of `h`.
#[derive(Debug)]
pub struct Localization {
    h: QuotientElement,
    powers: RwLock<Vec<QuotientElement>>,
}

impl PartialEq for Localization {
    fn eq(&self, other: &Self) -> bool {
        self.h == other.h
    }
}

impl Localization {
    pub fn new(h: QuotientElement) -> Arc<Localization> {
        let one = QuotientElement::one(h.ideal());
        Arc::new(Localization { powers: RwLock::new(vec![one, h.clone()]), h })
    }

    pub fn h(&self) -> &QuotientElement {
        &self.h
    }

    pub fn ideal(&self) -> &Arc<Ideal> {
        self.h.ideal()
    }

    pub fn h_pow(&self, k: u32) -> QuotientElement {
        let k = k as usize;
        if let Some(p) = self.powers.read().unwrap().get(k) {
            return p.clone();
        }
        let mut w = self.powers.write().unwrap();
        while w.len() <= k {
            let next = w.last().unwrap() * &self.h;
            w.push(next);
        }
        w[k].clone()
    }
}

/// `num / h^pow` in `A_(h)`.
#[derive(Clone, Debug)]
pub struct LocalElement {
    loc: Arc<Localization>,
    num: QuotientElement,
    pow: u32,
}

impl LocalElement {
    pub fn new(loc: &Arc<Localization>, num: QuotientElement, pow: u32) -> LocalElement {
        let mut e = LocalElement { loc: loc.clone(), num, pow };
        e.canonicalize();
        e
    }

    pub fn from_a(loc: &Arc<Localization>, f: &QuotientElement) -> LocalElement {
        LocalElement { loc: loc.clone(), num: f.clone(), pow: 0 }
    }

    pub fn zero(loc: &Arc<Localization>) -> LocalElement {
        LocalElement::from_a(loc, &QuotientElement::zero(loc.ideal()))
    }

    pub fn one(loc: &Arc<Localization>) -> LocalElement {
        LocalElement::from_a(loc, &QuotientElement::one(loc.ideal()))
    }

    pub fn constant(loc: &Arc<Localization>, c: Rational) -> LocalElement {
        LocalElement::from_a(loc, &QuotientElement::constant(loc.ideal(), c))
    }

    /// `h^{-k}`.
    pub fn h_inverse_pow(loc: &Arc<Localization>, k: u32) -> LocalElement {
        LocalElement::new(loc, QuotientElement::one(loc.ideal()), k)
    }

    /// Reads `p`, or `(p)/(q)` with `q` a nonzero constant times a power of
    /// `h`; the literal `h` may stand for the minor in the denominator.
    pub fn parse(loc: &Arc<Localization>, text: &str) -> Result<LocalElement> {
        let ideal = loc.ideal();
        let split = top_level_slash(text);
        if let Some(at) = split {
            let (a, b) = (&text[..at], text[at + 1..].trim());
            let hk = b.strip_prefix('h').map(|rest| rest.trim());
            let keyword_pow = match hk {
                Some("") => Some(1),
                Some(rest) => rest.strip_prefix('^').and_then(|e| e.trim().parse::<u32>().ok()),
                None => None,
            };
            if let Some(k) = keyword_pow {
                let num = QuotientElement::parse(ideal, a)?;
                return Ok(LocalElement::new(loc, num, k));
            }
            if let Ok(den) = QuotientElement::parse(ideal, b) {
                if !den.rep().is_constant() {
                    let num = QuotientElement::parse(ideal, a)?;
                    let mut q = den;
                    let mut k = 0;
                    while !q.rep().is_constant() {
                        q = q.try_divide(loc.h()).ok_or_else(|| {
                            Error::Localization(format!("denominator {b} is not a power of {}", loc.h()))
                        })?;
                        k += 1;
                    }
                    let c = q.rep().constant_term();
                    return Ok(LocalElement::new(loc, num.scale(&(Rational::one() / c)), k));
                }
            }
        }
        Ok(LocalElement::from_a(loc, &QuotientElement::parse(ideal, text)?))
    }

    pub fn localization(&self) -> &Arc<Localization> {
        &self.loc
    }

    pub fn numerator(&self) -> &QuotientElement {
        &self.num
    }

    pub fn h_power(&self) -> u32 {
        self.pow
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The element as a member of `A`, if its canonical form has no denominator.
    pub fn as_a(&self) -> Option<&QuotientElement> {
        (self.pow == 0).then_some(&self.num)
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.pow = 0;
            return;
        }
        while self.pow > 0 {
            match self.num.try_divide(self.loc.h()) {
                Some(q) => {
                    self.num = q;
                    self.pow -= 1;
                }
                None => break,
            }
        }
    }

    fn check(&self, other: &LocalElement) -> Result<()> {
        if Arc::ptr_eq(&self.loc, &other.loc) || *self.loc == *other.loc {
            Ok(())
        } else {
            Err(Error::Localization("elements of different localizations".into()))
        }
    }

    pub fn checked_add(&self, other: &LocalElement) -> Result<LocalElement> {
        self.check(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let k = self.pow.max(other.pow);
        let a = &self.num * &self.loc.h_pow(k - self.pow);
        let b = &other.num * &self.loc.h_pow(k - other.pow);
        Ok(LocalElement::new(&self.loc, &a + &b, k))
    }

    pub fn checked_sub(&self, other: &LocalElement) -> Result<LocalElement> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &LocalElement) -> Result<LocalElement> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(LocalElement::zero(&self.loc));
        }
        Ok(LocalElement::new(&self.loc, &self.num * &other.num, self.pow + other.pow))
    }

    pub fn mul_a(&self, f: &QuotientElement) -> LocalElement {
        LocalElement::new(&self.loc, &self.num * f, self.pow)
    }

    pub fn scale(&self, c: &Rational) -> LocalElement {
        if c.is_zero() {
            return LocalElement::zero(&self.loc);
        }
        LocalElement { loc: self.loc.clone(), num: self.num.scale(c), pow: self.pow }
    }

    pub fn pow(&self, k: u32) -> LocalElement {
        let mut acc = LocalElement::one(&self.loc);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Value at a point with `h(p) ≠ 0`.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        let n = self.num.evaluate(point);
        if self.pow == 0 {
            return Ok(n);
        }
        let hp = self.loc.h().evaluate(point);
        if hp.is_zero() {
            return Err(Error::SingularChart);
        }
        let mut d = Rational::one();
        for _ in 0..self.pow {
            d *= &hp;
        }
        Ok(n / d)
    }
}

fn top_level_slash(text: &str) -> Option<usize> {
    let mut depth = 0i32;
    let mut found = None;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => found = Some(i),
            _ => {}
        }
    }
    // `(p)/...` form only: a bare `3/4*x` is read as a polynomial
    found.filter(|&i| text[..i].trim_end().ends_with(')'))
}

/// Equality by cross-multiplication in `A`.
impl PartialEq for LocalElement {
    fn eq(&self, other: &Self) -> bool {
        if self.check(other).is_err() {
            return false;
        }
        if self.pow == other.pow {
            return self.num == other.num;
        }
        &self.num * &self.loc.h_pow(other.pow) == &other.num * &self.loc.h_pow(self.pow)
    }
}

impl Eq for LocalElement {}

impl fmt::Display for LocalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pow {
            0 => write!(f, "{}", self.num),
            1 => write!(f, "({})/({})", self.num, self.loc.h()),
            k => write!(f, "({})/({})^{}", self.num, self.loc.h(), k),
        }
    }
}

crate::exactpoly::forward_binop!(LocalElement, Add, add, checked_add);
crate::exactpoly::forward_binop!(LocalElement, Sub, sub, checked_sub);
crate::exactpoly::forward_binop!(LocalElement, Mul, mul, checked_mul);

use std::ops::{Add, Mul, Neg, Sub};

impl Neg for &LocalElement {
    type Output = LocalElement;
    fn neg(self) -> LocalElement {
        LocalElement { loc: self.loc.clone(), num: -&self.num, pow: self.pow }
    }
}

impl Neg for LocalElement {
    type Output = LocalElement;
    fn neg(self) -> LocalElement {
        -&self
    }
}

/// `∂f/∂t_i` on `A_(h)`: with `D = h∂/∂t_i`,
/// `∂(a/h^k)/∂t_i = (h·D(a) − k·a·D(h)) / h^{k+2}`.
pub fn chart_derivative(f: &LocalElement, i: usize, c: &Chart) -> LocalElement {
    let loc = c.localization();
    let da = c.basic_apply(i, &f.num);
    if f.pow == 0 {
        return LocalElement::new(loc, da, 1);
    }
    let dh = c.basic_apply(i, c.h());
    let k = crate::exactpoly::int(f.pow as i64);
    let num = &(c.h() * &da) - &(&f.num * &dh).scale(&k);
    LocalElement::new(loc, num, f.pow + 2)
}

/// The local-parameter criterion: `[(h·∂t̄_j/∂t_i)(p)]` is invertible.
pub fn local_parameter_check(c: &Chart, p: &Point) -> Result<bool> {
    if !p.in_chart(c) {
        return Err(Error::SingularChart);
    }
    let s = c.dim();
    let h = c.local(c.h());
    let mut m = vec![vec![Rational::zero(); s]; s];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            // t̄_j = t_j - t_j(p) has the same derivative as t_j
            *e = (&h * &chart_derivative(&c.param(j), i, c)).evaluate(p.coords())?;
        }
    }
    Ok(rational_rank(m) == s)
}

/// Rank of a rational matrix by Gaussian elimination.
pub fn rational_rank(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, piv);
        let inv = Rational::one() / &m[rank][c];
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] * &inv;
                for k in c..cols {
                    let t = &f * &m[rank][k];
                    m[r][k] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{int, rat};
    use proptest::prelude::*;

    fn chart_z() -> Arc<Chart> {
        chart_by_minor(&Variety::sphere(), "2*z").unwrap()
    }

    #[test]
    fn sphere_structure() {
        let v = Variety::sphere();
        assert_eq!((v.ambient_dim(), v.rank(), v.dim()), (3, 1, 2));
        let j: Vec<String> = v.jacobian()[0].iter().map(|e| e.to_string()).collect();
        assert_eq!(j, ["2*x", "2*y", "2*z"]);
        let atlas = standard_atlas(&v);
        let got: Vec<(String, Vec<String>)> = atlas.iter().map(|c| (c.h().to_string(), c.param_names())).collect();
        assert_eq!(
            got,
            [
                ("2*x".to_string(), vec!["y".to_string(), "z".to_string()]),
                ("2*y".to_string(), vec!["x".to_string(), "z".to_string()]),
                ("2*z".to_string(), vec!["x".to_string(), "y".to_string()]),
            ]
        );
    }

    #[test]
    fn affine_line_and_circle() {
        let a = Variety::affine_space(&["t"]);
        assert_eq!((a.rank(), a.dim()), (0, 1));
        let atlas = standard_atlas(&a);
        assert_eq!(atlas.len(), 1);
        assert_eq!(atlas[0].h().to_string(), "1");
        assert_eq!(atlas[0].param_names(), ["t"]);

        let c = Variety::circle();
        assert_eq!((c.rank(), c.dim()), (1, 1));
        let minors: Vec<String> = standard_atlas(&c).iter().map(|ch| format!("{}:{}", ch.h(), ch.param_names()[0])).collect();
        assert_eq!(minors, ["2*x:y", "2*y:x"]);
    }

    #[test]
    fn empty_and_non_reduced_inputs() {
        assert_eq!(Variety::parse(&["x"], None, &["x", "x - 1"]).unwrap_err(), Error::EmptyVariety);
        // the double line: the only minor 2y is nilpotent in k[x,y]/(y^2)
        assert!(matches!(Variety::parse(&["x", "y"], None, &["y^2"]), Err(Error::RankCertification(_))));
    }

    #[test]
    fn chart_derivative_examples() {
        let c = chart_z();
        let z = c.local(&c.variety().var(2));
        let dz = chart_derivative(&z, 0, &c);
        assert_eq!(dz, c.parse_local("(-2*x)/(2*z)").unwrap());
        assert_eq!(dz, c.parse_local("(-x)/h").unwrap().scale(&int(2)));
        assert_eq!(chart_derivative(&c.param(0), 0, &c), c.one());
        assert_eq!(chart_derivative(&c.param(1), 0, &c), LocalElement::zero(c.localization()));
        let z2 = &z * &z;
        let want = c.local(&c.variety().element("-2*x").unwrap());
        assert_eq!(chart_derivative(&z2, 0, &c), want);
        assert_eq!(chart_derivative(&c.local(&c.variety().element("1-x^2-y^2").unwrap()), 0, &c), want);
    }

    #[test]
    fn basic_fields_are_cramer_numerators() {
        let c = chart_z();
        let b: Vec<String> = c.basic(0).iter().map(|e| e.to_string()).collect();
        assert_eq!(b, ["2*z", "0", "-2*x"]);
        let circ = chart_by_minor(&Variety::circle(), "2*y").unwrap();
        let b: Vec<String> = circ.basic(0).iter().map(|e| e.to_string()).collect();
        assert_eq!(b, ["2*y", "-2*x"]);
    }

    #[test]
    fn local_parameters() {
        let v = Variety::sphere();
        let c = chart_z();
        let north = Point::parse(&v, &["0", "0", "1"]).unwrap();
        assert!(local_parameter_check(&c, &north).unwrap());
        let eq = Point::parse(&v, &["3/5", "4/5", "0"]).unwrap();
        assert_eq!(local_parameter_check(&c, &eq), Err(Error::SingularChart));
        assert!(matches!(Point::parse(&v, &["1", "1", "0"]), Err(Error::PointNotOnVariety(_))));
        let a2 = Variety::affine_space(&["x", "y"]);
        let p = Point::new(&a2, vec![rat(2, 3), int(-5)]).unwrap();
        assert!(local_parameter_check(&standard_atlas(&a2)[0], &p).unwrap());
    }

    #[test]
    fn local_element_printing_and_parsing() {
        let c = chart_z();
        let e = c.parse_local("(4*x)/(4*z^2)").unwrap();
        assert_eq!(e.h_power(), 2);
        assert_eq!(e.to_string(), "(4*x)/(2*z)^2");
        assert_eq!(c.parse_local(&e.to_string()).unwrap(), e);
        // z/(2z) collapses to 1/2
        let half = c.parse_local("(z)/h").unwrap();
        assert_eq!(half.h_power(), 0);
        assert_eq!(half.to_string(), "1/2");
        assert!(c.parse_local("(x)/(y)").is_err());
    }

    fn arb_local() -> impl Strategy<Value = (Vec<((u32, u32, u32), i64)>, u32)> {
        (prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -3i64..4), 0..4), 0u32..3)
    }

    fn build(c: &Chart, (terms, k): &(Vec<((u32, u32, u32), i64)>, u32)) -> LocalElement {
        let r = c.variety().ring();
        let p = Polynomial::from_terms(r, terms.iter().map(|&((a, b, d), q)| (crate::exactpoly::Monomial::new(vec![a, b, d]), int(q))));
        LocalElement::new(c.localization(), QuotientElement::new(c.variety().ideal(), &p), *k)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn chart_derivative_is_a_commuting_derivation(a in arb_local(), b in arb_local()) {
            let c = chart_z();
            let (f, g) = (build(&c, &a), build(&c, &b));
            for i in 0..2 {
                let lhs = chart_derivative(&(&f * &g), i, &c);
                let rhs = &(&f * &chart_derivative(&g, i, &c)) + &(&g * &chart_derivative(&f, i, &c));
                prop_assert_eq!(lhs, rhs);
            }
            let d01 = chart_derivative(&chart_derivative(&f, 1, &c), 0, &c);
            let d10 = chart_derivative(&chart_derivative(&f, 0, &c), 1, &c);
            prop_assert_eq!(d01, d10);
        }

        #[test]
        fn cross_multiplication_equality_is_consistent(a in arb_local(), b in arb_local()) {
            let c = chart_z();
            let (f, g) = (build(&c, &a), build(&c, &b));
            // the same value written with a padded denominator
            let padded = LocalElement { loc: f.loc.clone(), num: f.num.clone() * c.h().clone(), pow: f.pow + 1 };
            prop_assert_eq!(&padded, &f);
            prop_assert_eq!(&padded + &g, &f + &g);
            prop_assert_eq!(&(&f - &g) + &g, f);
        }
    }

    #[test]
    fn generators_differentiate_to_zero() {
        let c = chart_z();
        let g = QuotientElement::new(c.variety().ideal(), &c.variety().generators()[0]);
        for i in 0..2 {
            assert!(chart_derivative(&c.local(&g), i, &c).is_zero());
        }
    }
}
