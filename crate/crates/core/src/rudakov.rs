//! The induced module `R_p(U)` realized on `k[y_1..y_s]⊗U`, where `y_i` is
//! the image of the degree −1 jet `∂/∂X_i`. Fields act through their jets
//! at `p`, functions through their Taylor expansion with `t̄_k = −∂/∂y_k`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{fmt_rational, int, push_signed_term, Monomial, Rational};
use crate::groebner::QuotientElement;
use crate::jets::{JetField, JetSeries, PointJets};
use crate::repn::{FiniteModule, LPlusBasis};
use crate::variety::{Chart, LocalElement, Point};
use crate::vfields::{centred_params, truncated_lift_in, ChartField, VectorField};

/// `Σ c·y^a ⊗ u_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RudElement {
    s: usize,
    d: usize,
    terms: BTreeMap<(Monomial, usize), Rational>,
}

impl RudElement {
    pub fn zero(s: usize, d: usize) -> Self {
        RudElement { s, d, terms: BTreeMap::new() }
    }

    /// `c·y^a ⊗ u_k`.
    pub fn monomial(s: usize, d: usize, a: Monomial, k: usize, c: Rational) -> Self {
        let mut r = RudElement::zero(s, d);
        r.add_term(a, k, c);
        r
    }

    /// `1⊗u` for a coordinate vector `u`.
    pub fn base(s: usize, u: &[Rational]) -> Self {
        let mut r = RudElement::zero(s, u.len());
        for (k, c) in u.iter().enumerate() {
            r.add_term(Monomial::one(s), k, c.clone());
        }
        r
    }

    pub fn from_terms(s: usize, d: usize, terms: impl IntoIterator<Item = (Monomial, usize, Rational)>) -> Self {
        let mut r = RudElement::zero(s, d);
        for (a, k, c) in terms {
            r.add_term(a, k, c);
        }
        r
    }

    fn add_term(&mut self, a: Monomial, k: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((a, k)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, usize, &Rational)> {
        self.terms.iter().map(|((a, k), c)| (a, *k, c))
    }

    pub fn coeff(&self, a: &Monomial, k: usize) -> Rational {
        self.terms.get(&(a.clone(), k)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The smallest `l` with `v ∈ R_l`, i.e. the total `y`-degree; `None` for 0.
    pub fn level(&self) -> Option<u32> {
        self.terms.keys().map(|(a, _)| a.degree()).max()
    }

    /// The `U`-vector if `v ∈ 1⊗U`.
    pub fn base_vector(&self) -> Option<Vec<Rational>> {
        if self.level().unwrap_or(0) > 0 {
            return None;
        }
        let one = Monomial::one(self.s);
        Some((0..self.d).map(|k| self.coeff(&one, k)).collect())
    }

    pub fn add(&self, o: &RudElement) -> RudElement {
        let mut r = self.clone();
        for ((a, k), c) in &o.terms {
            r.add_term(a.clone(), *k, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &RudElement) -> RudElement {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> RudElement {
        if c.is_zero() {
            return RudElement::zero(self.s, self.d);
        }
        RudElement { s: self.s, d: self.d, terms: self.terms.iter().map(|(key, v)| (key.clone(), v * c)).collect() }
    }

    /// Left multiplication by `y_i`.
    pub fn mul_y(&self, i: usize) -> RudElement {
        RudElement { s: self.s, d: self.d, terms: self.terms.iter().map(|((a, k), c)| ((a.raised(i), *k), c.clone())).collect() }
    }

    /// The action of `t̄_i`: `−∂/∂y_i`.
    pub fn t_bar(&self, i: usize) -> RudElement {
        let mut r = RudElement::zero(self.s, self.d);
        for ((a, k), c) in &self.terms {
            if let Some(lower) = a.lowered(i) {
                r.add_term(lower, *k, -(c * int(a.exponents()[i] as i64)));
            }
        }
        r
    }

    pub fn display(&self, labels: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        // highest y-degree first
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by(|((a, k), _), ((b, l), _)| b.degree().cmp(&a.degree()).then(b.cmp(a)).then(k.cmp(l)));
        for ((a, k), c) in items {
            let y = y_body(a);
            let first = out.is_empty();
            if y.is_empty() {
                let mag = fmt_rational(&c.abs());
                match (first, c.is_negative()) {
                    (true, false) => out.push_str(&mag),
                    (true, true) => out.push_str(&format!("-{mag}")),
                    (false, false) => out.push_str(&format!(" + {mag}")),
                    (false, true) => out.push_str(&format!(" - {mag}")),
                }
                out.push_str(&format!(" ⊗ {}", labels[*k]));
            } else {
                push_signed_term(&mut out, c, &format!("{y} ⊗ {}", labels[*k]), first);
            }
        }
        out
    }

    /// Parses `Σ c·y^a·u_k`, a polynomial in `y1..ys, u1..ud` that is
    /// linear in the `u`'s, e.g. `-2*y1^2*u1 + 1/2*u2`.
    pub fn parse(s: usize, d: usize, text: &str) -> Result<RudElement> {
        let names: Vec<String> = (1..=s).map(|i| format!("y{i}")).chain((1..=d).map(|k| format!("u{k}"))).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let ring = crate::exactpoly::PolyRing::grevlex(&names);
        let p = crate::exactpoly::Polynomial::parse(&ring, text)?;
        let mut r = RudElement::zero(s, d);
        for (m, c) in p.terms() {
            let e = m.exponents();
            let us: Vec<usize> = (0..d).filter(|&k| e[s + k] > 0).collect();
            if us.len() != 1 || e[s + us[0]] != 1 {
                return Err(Error::Input(format!("`{text}` is not linear in u1..u{d}")));
            }
            r.add_term(Monomial::new(e[..s].to_vec()), us[0], c.clone());
        }
        Ok(r)
    }

    pub fn to_json(&self) -> RudElementJson {
        RudElementJson {
            terms: self
                .terms
                .iter()
                .map(|((a, k), c)| RudTermJson { y: a.exponents().to_vec(), u: *k, c: fmt_rational(c) })
                .collect(),
        }
    }

    pub fn from_json(s: usize, d: usize, j: &RudElementJson) -> Result<RudElement> {
        let mut r = RudElement::zero(s, d);
        for t in &j.terms {
            if t.y.len() != s || t.u >= d {
                return Err(Error::Dimension(format!("term {:?} does not fit s = {s}, dim U = {d}", t.y)));
            }
            r.add_term(Monomial::new(t.y.clone()), t.u, crate::exactpoly::parse_rational(&t.c)?);
        }
        Ok(r)
    }
}

fn y_body(a: &Monomial) -> String {
    let parts: Vec<String> = a
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, e)| **e > 0)
        .map(|(i, e)| if *e == 1 { format!("y{}", i + 1) } else { format!("y{}^{}", i + 1, e) })
        .collect();
    parts.join("*")
}

impl fmt::Display for RudElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (1..=self.d).map(|i| format!("u{i}")).collect();
        f.write_str(&self.display(&labels))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RudTermJson {
    pub y: Vec<u32>,
    pub u: usize,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RudElementJson {
    pub terms: Vec<RudTermJson>,
}

/// Chart, point and base module, with the point's jets cached at the
/// largest order requested so far.
#[derive(Debug)]
pub struct RudakovContext {
    chart: Arc<Chart>,
    point: Point,
    u: FiniteModule,
    jets: RwLock<Option<Arc<PointJets>>>,
}

impl RudakovContext {
    pub fn new(chart: &Arc<Chart>, point: &Point, u: FiniteModule) -> Result<RudakovContext> {
        if !point.in_chart(chart) {
            return Err(Error::SingularChart);
        }
        if u.s() != chart.dim() {
            return Err(Error::Dimension(format!("U is a module for s = {}, the chart has s = {}", u.s(), chart.dim())));
        }
        Ok(RudakovContext { chart: chart.clone(), point: point.clone(), u, jets: RwLock::new(None) })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn point(&self) -> &Point {
        &self.point
    }

    pub fn u(&self) -> &FiniteModule {
        &self.u
    }

    pub fn s(&self) -> usize {
        self.chart.dim()
    }

    pub fn zero(&self) -> RudElement {
        RudElement::zero(self.s(), self.u.dim())
    }

    /// `1⊗u_k`.
    pub fn generator(&self, k: usize) -> RudElement {
        RudElement::monomial(self.s(), self.u.dim(), Monomial::one(self.s()), k, Rational::one())
    }

    pub fn jets(&self, order: u32) -> Result<Arc<PointJets>> {
        if let Some(j) = self.jets.read().unwrap().as_ref() {
            if j.order() >= order {
                return Ok(j.clone());
            }
        }
        let mut w = self.jets.write().unwrap();
        if let Some(j) = w.as_ref() {
            if j.order() >= order {
                return Ok(j.clone());
            }
        }
        // grow in steps so repeated small increases do not recompute every time
        let target = order.max(w.as_ref().map_or(0, |j| j.order() + 2));
        let j = Arc::new(PointJets::new(&self.chart, &self.point, target)?);
        *w = Some(j.clone());
        Ok(j)
    }

    /// The jet of a chart field to the given order.
    pub fn jet_of(&self, eta: &ChartField, order: u32) -> Result<JetField> {
        let jets = self.jets(order)?;
        Ok(JetField::new(eta.coeffs().iter().map(|c| jets.expand(c, order)).collect()))
    }

    /// The truncation order used for `η·v`.
    pub fn field_order(&self, v: &RudElement) -> u32 {
        v.level().unwrap_or(0) + self.u.level() + 1
    }

    pub fn display(&self, v: &RudElement) -> String {
        v.display(self.u.labels())
    }
}

/// `μ·v` for a formal field known to sufficient order.
pub fn rud_act_jet(mu: &JetField, v: &RudElement, ctx: &RudakovContext) -> RudElement {
    let mut memo: HashMap<(Monomial, Monomial, usize), RudElement> = HashMap::new();
    let mut derived: HashMap<Monomial, JetField> = HashMap::new();
    derived.insert(Monomial::one(ctx.s()), mu.clone());
    let mut out = ctx.zero();
    for ((a, k), c) in &v.terms {
        let r = act_monomial(&Monomial::one(ctx.s()), a, *k, &mut derived, &mut memo, ctx);
        out = out.add(&r.scale(c));
    }
    out
}

/// `((−∂)^b μ)·(y^a⊗u_k)` by `μ·(y_i w) = y_i(μ·w) − (∂μ/∂X_i)·w`.
fn act_monomial(
    b: &Monomial,
    a: &Monomial,
    k: usize,
    derived: &mut HashMap<Monomial, JetField>,
    memo: &mut HashMap<(Monomial, Monomial, usize), RudElement>,
    ctx: &RudakovContext,
) -> RudElement {
    let key = (b.clone(), a.clone(), k);
    if let Some(r) = memo.get(&key) {
        return r.clone();
    }
    let out = match a.exponents().iter().position(|&e| e > 0) {
        None => {
            let mu = field_derivative(b, derived);
            base_action(&mu, k, ctx)
        }
        Some(i) => {
            let w = a.lowered(i).unwrap();
            let first = act_monomial(b, &w, k, derived, memo, ctx).mul_y(i);
            let second = act_monomial(&b.raised(i), &w, k, derived, memo, ctx);
            first.add(&second)
        }
    };
    memo.insert(key, out.clone());
    out
}

/// `(−∂)^b μ`, memoized.
fn field_derivative(b: &Monomial, derived: &mut HashMap<Monomial, JetField>) -> JetField {
    if let Some(f) = derived.get(b) {
        return f.clone();
    }
    let i = b.exponents().iter().position(|&e| e > 0).unwrap();
    let lower = field_derivative(&b.lowered(i).unwrap(), derived);
    let f = lower.derivative(i).scale(&-Rational::one());
    derived.insert(b.clone(), f.clone());
    f
}

/// `μ·(1⊗u_k) = Σ c_i y_i⊗u_k + 1⊗ρ(μ₊ mod L(level))u_k`.
fn base_action(mu: &JetField, k: usize, ctx: &RudakovContext) -> RudElement {
    let (s, d) = (ctx.s(), ctx.u.dim());
    let mut out = RudElement::zero(s, d);
    for (kappa, i, c) in mu.terms() {
        if kappa.is_one() {
            out.add_term(Monomial::var(s, i), k, c);
        } else if let Some(rho) = ctx.u.rho_ref(&LPlusBasis::new(kappa, i)) {
            for row in 0..d {
                let e = rho.get(row, k);
                if !e.is_zero() {
                    out.add_term(Monomial::one(s), row, &c * e);
                }
            }
        }
    }
    out
}

/// `η·v` computed at an explicit truncation order.
pub fn rud_act_chart_field_at(eta: &ChartField, v: &RudElement, ctx: &RudakovContext, order: u32) -> Result<RudElement> {
    let mu = ctx.jet_of(eta, order)?;
    Ok(rud_act_jet(&mu, v, ctx))
}

/// `η·v`, with the result re-checked one order higher.
pub fn rud_act_chart_field(eta: &ChartField, v: &RudElement, ctx: &RudakovContext) -> Result<RudElement> {
    let n = ctx.field_order(v);
    let r = rud_act_chart_field_at(eta, v, ctx, n)?;
    let r1 = rud_act_chart_field_at(eta, v, ctx, n + 1)?;
    if r != r1 {
        return Err(Error::TruncationUnstable(n, n + 1));
    }
    Ok(r)
}

pub fn rud_act_field(eta: &VectorField, v: &RudElement, ctx: &RudakovContext) -> Result<RudElement> {
    rud_act_chart_field(&eta.to_chart(ctx.chart()), v, ctx)
}

/// `Σ_α f_α·t̄^α v` for a Taylor series `f` in the centred parameters.
pub fn rud_act_series(f: &JetSeries, v: &RudElement) -> RudElement {
    let mut out = RudElement::zero(v.s, v.d);
    for (alpha, c) in f.terms() {
        let mut w = v.clone();
        for (i, &e) in alpha.exponents().iter().enumerate() {
            for _ in 0..e {
                w = w.t_bar(i);
            }
        }
        out = out.add(&w.scale(c));
    }
    out
}

pub fn rud_act_function(f: &LocalElement, v: &RudElement, ctx: &RudakovContext) -> Result<RudElement> {
    let order = v.level().unwrap_or(0) + 1;
    let jets = ctx.jets(order)?;
    Ok(rud_act_series(&jets.expand(f, order), v))
}

pub fn rud_act_a(f: &QuotientElement, v: &RudElement, ctx: &RudakovContext) -> Result<RudElement> {
    rud_act_function(&ctx.chart().local(f), v, ctx)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    /// `t̄_1^{r_1}…t̄_s^{r_s}` was applied.
    pub exponents: Vec<u32>,
    pub base: Vec<String>,
}

/// A nonzero element of `A·v ∩ (1⊗U)`: apply `t̄^r` for a top-degree
/// monomial `y^r` of `v` (ties go to the lexicographically largest `r`).
pub fn reduction_extract(v: &RudElement, ctx: &RudakovContext) -> Result<(Vec<u32>, RudElement)> {
    let top = v.level().ok_or_else(|| Error::Input("reduction needs a nonzero element".into()))?;
    let r = v.terms.keys().map(|(a, _)| a).filter(|a| a.degree() == top).max_by(|a, b| a.exponents().cmp(b.exponents())).unwrap().clone();
    let params = centred_params(ctx.chart(), ctx.point());
    let mut w = v.clone();
    for (i, &e) in r.exponents().iter().enumerate() {
        for _ in 0..e {
            w = rud_act_a(&params[i], &w, ctx)?;
        }
    }
    if w.is_zero() || w.level() != Some(0) {
        return Err(Error::Internal(format!("reduction of {v} gave {w}")));
    }
    Ok((r.exponents().to_vec(), w))
}

/// A random element of level at most `max_level` with small coefficients.
pub fn random_element(s: usize, d: usize, max_level: u32, rng: &mut impl Rng) -> RudElement {
    loop {
        let n = rng.gen_range(1..=4);
        let mut r = RudElement::zero(s, d);
        for _ in 0..n {
            let deg = rng.gen_range(0..=max_level);
            let monos = Monomial::all_of_degree(s, deg);
            let a = monos[rng.gen_range(0..monos.len())].clone();
            r.add_term(a, rng.gen_range(0..d), int(rng.gen_range(-3..=3)));
        }
        if !r.is_zero() {
            return r;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationReport {
    pub samples: usize,
    /// `m_p R_l ⊂ R_{l−1}`.
    pub m_level_drop: bool,
    /// `𝒟(j) R_l ⊂ R_{l−j}` for `−1 ≤ j ≤ depth`.
    pub d_level_drop: bool,
    pub m_nilpotent: bool,
    pub d_nilpotent: bool,
    pub witness: Option<String>,
}

impl FiltrationReport {
    pub fn pass(&self) -> bool {
        self.m_level_drop && self.d_level_drop && self.m_nilpotent && self.d_nilpotent
    }
}

/// A random element of `𝒟(j)`: `j + 1` centred parameters times a
/// truncated lift of `∂/∂t_i`.
pub fn random_filtered_field(ctx: &RudakovContext, j: i64, rng: &mut impl Rng) -> Result<VectorField> {
    let params = centred_params(ctx.chart(), ctx.point());
    let jets = ctx.jets((j + 3).max(2) as u32)?;
    let i = rng.gen_range(0..ctx.s());
    let mut q = QuotientElement::one(ctx.chart().variety().ideal());
    for _ in 0..(j + 1).max(0) {
        q = &q * &params[rng.gen_range(0..params.len())];
    }
    let c = int(rng.gen_range(1..=3));
    Ok(truncated_lift_in(&jets, i, (j + 2).max(1) as u32).mul_a(&q.scale(&c)))
}

/// Checks the level drops of `m_p` and `𝒟(j)` and the local nilpotency of
/// `m_p` and `𝒟(level U)` on random elements up to level `depth`.
pub fn filtration_checks(ctx: &RudakovContext, depth: u32, samples: usize, rng: &mut impl Rng) -> Result<FiltrationReport> {
    let (s, d) = (ctx.s(), ctx.u().dim());
    let big_l = ctx.u().level() as i64;
    let params = centred_params(ctx.chart(), ctx.point());
    let mut rep = FiltrationReport { samples, m_level_drop: true, d_level_drop: true, m_nilpotent: true, d_nilpotent: true, witness: None };
    let level_of = |v: &RudElement| v.level().map_or(-1, |l| l as i64);
    for _ in 0..samples {
        let v = random_element(s, d, depth, rng);
        let l = level_of(&v);
        let k = rng.gen_range(0..s);
        let tv = rud_act_a(&params[k], &v, ctx)?;
        if level_of(&tv) > l - 1 {
            rep.m_level_drop = false;
            rep.witness.get_or_insert(format!("t{}·({}) = {} has level {}", k + 1, ctx.display(&v), ctx.display(&tv), level_of(&tv)));
        }
        for j in -1..=(depth as i64) {
            let eta = random_filtered_field(ctx, j, rng)?;
            let r = rud_act_field(&eta, &v, ctx)?;
            // with a level-L base module the bound is l − j + L − 1
            let bound = l - j + big_l - 1;
            if level_of(&r) > bound.max(-1) {
                rep.d_level_drop = false;
                rep.witness.get_or_insert(format!("a field of D({j}) sends level {l} to level {}", level_of(&r)));
            }
        }
        // m_p^{depth+1} and D(L)-words of length depth+1 annihilate
        let mut w = v.clone();
        for _ in 0..=depth {
            w = rud_act_a(&params[rng.gen_range(0..s)], &w, ctx)?;
        }
        if !w.is_zero() {
            rep.m_nilpotent = false;
            rep.witness.get_or_insert(format!("m_p^{} does not kill {}", depth + 1, ctx.display(&v)));
        }
        let mut w = v.clone();
        for _ in 0..=depth {
            let eta = random_filtered_field(ctx, big_l, rng)?;
            w = rud_act_field(&eta, &w, ctx)?;
        }
        if !w.is_zero() {
            rep.d_nilpotent = false;
            rep.witness.get_or_insert(format!("a D({big_l})-word of length {} does not kill {}", depth + 1, ctx.display(&v)));
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicityProbe {
    pub level: u32,
    pub reduction: Vec<u32>,
    pub rank: usize,
    pub target: usize,
    pub reached: bool,
}

/// From a nonzero `v`, reduce into `1⊗U`, spread over `U` with the degree-0
/// fields `t̄_i·∂/∂t_j`, and regenerate with `∂/∂t_i`; reports whether the
/// span reaches all of `R_level`.
pub fn simplicity_probe(v: &RudElement, ctx: &RudakovContext, level: u32) -> Result<SimplicityProbe> {
    let (exponents, base) = reduction_extract(v, ctx)?;
    let (s, d) = (ctx.s(), ctx.u().dim());
    let chart = ctx.chart();
    let params = centred_params(chart, ctx.point());
    let mut gl_fields = Vec::new();
    for i in 0..s {
        for j in 0..s {
            gl_fields.push(ChartField::coordinate(chart, j, chart.local(&params[i])));
        }
    }
    let lowering: Vec<ChartField> = (0..s).map(|i| ChartField::coordinate(chart, i, chart.one())).collect();
    let keys: Vec<(Monomial, usize)> =
        Monomial::all_up_to_degree(s, level).into_iter().flat_map(|a| (0..d).map(move |k| (a.clone(), k))).collect();
    let target = keys.len();
    let mut span = Echelon::default();
    let mut queue = vec![base];
    let mut found = Vec::new();
    while let Some(w) = queue.pop() {
        let row: Vec<Rational> = keys.iter().map(|(a, k)| w.coeff(a, *k)).collect();
        if !span.insert(row) {
            continue;
        }
        found.push(w.clone());
        if span.rank() == target {
            break;
        }
        for f in &gl_fields {
            queue.push(rud_act_chart_field(f, &w, ctx)?);
        }
        if w.level().unwrap_or(0) < level {
            for f in &lowering {
                queue.push(rud_act_chart_field(f, &w, ctx)?);
            }
        }
    }
    Ok(SimplicityProbe { level, reduction: exponents, rank: span.rank(), target, reached: span.rank() == target })
}

/// Incremental row echelon form over ℚ.
#[derive(Default)]
struct Echelon {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `row` if it is independent of the current span.
    fn insert(&mut self, mut row: Vec<Rational>) -> bool {
        for (p, r) in &self.rows {
            if !row[*p].is_zero() {
                let f = row[*p].clone();
                for (a, b) in row.iter_mut().zip(r) {
                    *a -= &f * b;
                }
            }
        }
        let Some(p) = row.iter().position(|x| !x.is_zero()) else { return false };
        let inv = Rational::one() / &row[p];
        row.iter_mut().for_each(|x| *x *= &inv);
        self.rows.push((p, row));
        true
    }
}

/// `|c|`-weighted size, used to keep random samples small.
pub fn weight(v: &RudElement) -> Rational {
    v.terms.values().map(|c| c.abs()).fold(Rational::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;
    use crate::repn::{gl_family, GlKind};
    use crate::variety::{chart_by_minor, standard_atlas, Variety};
    use crate::vfields::delta_field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line_ctx(alpha: &Rational) -> (Arc<Variety>, RudakovContext) {
        let v = Variety::affine_space(&["t"]);
        let c = standard_atlas(&v).remove(0);
        let p = Point::parse(&v, &["0"]).unwrap();
        let u = gl_family(&GlKind::OneDim { alpha: fmt_rational(alpha) }, 1).unwrap();
        (v.clone(), RudakovContext::new(&c, &p, u).unwrap())
    }

    fn sphere_ctx(u: FiniteModule) -> (Arc<Variety>, RudakovContext) {
        let v = Variety::sphere();
        let c = chart_by_minor(&v, "2*z").unwrap();
        let p = Point::parse(&v, &["0", "0", "1"]).unwrap();
        (v.clone(), RudakovContext::new(&c, &p, u).unwrap())
    }

    fn y(s: usize, e: &[u32]) -> Monomial {
        assert_eq!(e.len(), s);
        Monomial::new(e.to_vec())
    }

    #[test]
    fn affine_line_base_cases() {
        let alpha = rat(2, 3);
        let (v, ctx) = line_ctx(&alpha);
        let one = ctx.generator(0);
        let f = |s: &str| VectorField::parse(&v, s).unwrap();
        assert_eq!(rud_act_field(&f("t*d/dt"), &one, &ctx).unwrap(), one.scale(&alpha));
        let y1 = RudElement::monomial(1, 1, y(1, &[1]), 0, Rational::one());
        assert_eq!(rud_act_field(&f("d/dt"), &one, &ctx).unwrap(), y1);
        assert!(rud_act_field(&f("t^2*d/dt"), &one, &ctx).unwrap().is_zero());
        // two-step recursion: y·(αu) + [t∂, ∂]·(1⊗u)
        assert_eq!(rud_act_field(&f("t*d/dt"), &y1, &ctx).unwrap(), y1.scale(&(&alpha - int(1))));
    }

    #[test]
    fn function_action() {
        let (v, ctx) = line_ctx(&int(1));
        let y2 = RudElement::monomial(1, 1, y(1, &[2]), 0, Rational::one());
        let t = v.element("t").unwrap();
        assert_eq!(rud_act_a(&t, &y2, &ctx).unwrap(), RudElement::monomial(1, 1, y(1, &[1]), 0, int(-2)));
        let f = v.element("3 + t^5").unwrap();
        assert_eq!(rud_act_a(&f, &ctx.generator(0), &ctx).unwrap(), ctx.generator(0).scale(&int(3)));
        // the z-series has no linear terms at the north pole
        let (sv, sctx) = sphere_ctx(gl_family(&GlKind::OneDim { alpha: "1".into() }, 2).unwrap());
        let y1 = RudElement::monomial(2, 1, y(2, &[1, 0]), 0, Rational::one());
        assert_eq!(rud_act_a(&sv.var(2), &y1, &sctx).unwrap(), y1);
    }

    #[test]
    fn reductions() {
        let (_, ctx) = line_ctx(&int(1));
        let (r, b) = reduction_extract(&ctx.generator(0), &ctx).unwrap();
        assert_eq!((r, b), (vec![0], ctx.generator(0)));
        let y2 = RudElement::monomial(1, 1, y(1, &[2]), 0, Rational::one());
        assert_eq!(reduction_extract(&y2, &ctx).unwrap().1, ctx.generator(0).scale(&int(2)));
        let (_, sctx) = sphere_ctx(gl_family(&GlKind::Natural, 2).unwrap());
        let v = RudElement::from_terms(2, 2, [(y(2, &[1, 0]), 0, int(1)), (y(2, &[0, 1]), 1, int(1))]);
        let (r, b) = reduction_extract(&v, &sctx).unwrap();
        assert_eq!(r, vec![1, 0]);
        assert_eq!(b, sctx.generator(0).scale(&int(-1)));
    }

    #[test]
    fn printing() {
        let v = RudElement::from_terms(2, 2, [(y(2, &[2, 1]), 1, int(-2)), (y(2, &[0, 0]), 0, rat(1, 2))]);
        assert_eq!(v.to_string(), "-2*y1^2*y2 ⊗ u2 + 1/2 ⊗ u1");
        let back = RudElement::from_json(2, 2, &v.to_json()).unwrap();
        assert_eq!(back, v);
    }

    fn random_sphere_field(v: &Arc<Variety>, rng: &mut impl Rng) -> VectorField {
        let monos = ["1", "x", "y", "z", "x*y", "y*z", "x*z", "z^2"];
        let mut acc = VectorField::zero(v);
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            let f = v.element(monos[rng.gen_range(0..monos.len())]).unwrap().scale(&int(rng.gen_range(-2..=2)));
            acc = acc.checked_add(&delta_field(v, i, j).unwrap().mul_a(&f)).unwrap();
        }
        acc
    }

    #[test]
    fn sphere_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (v, ctx) = sphere_ctx(gl_family(&GlKind::Natural, 2).unwrap());
        let funcs = ["x", "x*y + z", "z^2 - 3*y"];
        for _ in 0..6 {
            let a = random_sphere_field(&v, &mut rng);
            let b = random_sphere_field(&v, &mut rng);
            let el = random_element(2, 2, 2, &mut rng);
            let ab = rud_act_field(&a.bracket(&b).unwrap(), &el, &ctx).unwrap();
            let lhs = rud_act_field(&a, &rud_act_field(&b, &el, &ctx).unwrap(), &ctx).unwrap();
            let rhs = rud_act_field(&b, &rud_act_field(&a, &el, &ctx).unwrap(), &ctx).unwrap();
            assert_eq!(ab, lhs.sub(&rhs));
            let f = v.element(funcs[rng.gen_range(0..funcs.len())]).unwrap();
            let lhs = rud_act_field(&a, &rud_act_a(&f, &el, &ctx).unwrap(), &ctx).unwrap();
            let rhs = rud_act_a(&a.apply(&f), &el, &ctx).unwrap().add(&rud_act_a(&f, &rud_act_field(&a, &el, &ctx).unwrap(), &ctx).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn truncation_is_stable() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (v, ctx) = sphere_ctx(gl_family(&GlKind::OneDim { alpha: "1/2".into() }, 2).unwrap());
        for _ in 0..4 {
            let a = random_sphere_field(&v, &mut rng).to_chart(ctx.chart());
            let el = random_element(2, 1, 3, &mut rng);
            let n = ctx.field_order(&el);
            let r = rud_act_chart_field_at(&a, &el, &ctx, n).unwrap();
            assert_eq!(r, rud_act_chart_field_at(&a, &el, &ctx, n + 2).unwrap());
        }
    }

    #[test]
    fn filtration_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (_, ctx) = line_ctx(&rat(1, 2));
        let rep = filtration_checks(&ctx, 3, 4, &mut rng).unwrap();
        assert!(rep.pass(), "{rep:?}");
        let (_, sctx) = sphere_ctx(gl_family(&GlKind::Natural, 2).unwrap());
        let rep = filtration_checks(&sctx, 2, 2, &mut rng).unwrap();
        assert!(rep.pass(), "{rep:?}");
    }

    #[test]
    fn simplicity_probes() {
        let (_, ctx) = sphere_ctx(gl_family(&GlKind::Natural, 2).unwrap());
        let v = RudElement::from_terms(2, 2, [(y(2, &[1, 1]), 1, int(3)), (y(2, &[0, 0]), 0, int(1))]);
        let p = simplicity_probe(&v, &ctx, 2).unwrap();
        assert!(p.reached, "{p:?}");
        let (_, lctx) = line_ctx(&int(0));
        let p = simplicity_probe(&lctx.generator(0), &lctx, 2).unwrap();
        assert_eq!((p.target, p.reached), (3, true));
    }
}
