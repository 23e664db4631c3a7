//! The pairing between a free gauge module `M` and the Rudakov module on
//! the dual of its fiber `U = M/m_pM`: `⟨m, w·(1⊗φ)⟩ = φ(τ(w)·m mod m_p)`.

use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{fmt_rational, int, Monomial, Rational};
use crate::gauge::{function_act, gauge_act, GaugeElement, GaugeModule};
use crate::repn::{FiniteModule, LPlusBasis, QMatrix};
use crate::rudakov::{rud_act_chart_field, rud_act_function, RudElement, RudakovContext};
use crate::variety::{LocalElement, Point};
use crate::vfields::{centred_params, ChartField};

/// `U = M/m_pM` with its induced `𝒟₊`-action.
#[derive(Clone, Debug)]
pub struct QuotientFiber {
    module: FiniteModule,
    point: Point,
}

impl QuotientFiber {
    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    pub fn point(&self) -> &Point {
        &self.point
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }
}

/// The image of `g ⊗ u_k ↦ g(p)u_k`.
pub fn project(m: &GaugeElement, p: &Point) -> Result<Vec<Rational>> {
    m.coeffs().iter().map(|c| c.evaluate(p.coords())).collect()
}

/// `(t − p)^k` in the chart of `m`.
fn centred_power(m: &GaugeModule, p: &Point, k: &Monomial) -> LocalElement {
    let chart = m.chart();
    let params = centred_params(chart, p);
    let mut acc = crate::groebner::QuotientElement::one(chart.variety().ideal());
    for (i, &e) in k.exponents().iter().enumerate() {
        acc = &acc * &params[i].pow(e);
    }
    chart.local(&acc)
}

/// Builds the fiber of a free gauge module: `X^k∂_i` is represented by the
/// chart field `(t − p)^k ∂/∂t_i`, whose jet at `p` is exactly `X^k∂/∂X_i`.
pub fn fiber(m: &GaugeModule, p: &Point) -> Result<QuotientFiber> {
    if m.generators().is_some() {
        return Err(Error::UnsupportedPresentation("the fiber needs a free module A⊗U".into()));
    }
    if !p.in_chart(m.chart()) {
        return Err(Error::SingularChart);
    }
    let (s, d, level) = (m.chart().dim(), m.dim(), m.u().level());
    let mut action = std::collections::BTreeMap::new();
    for b in LPlusBasis::below(s, level) {
        let eta = ChartField::coordinate(m.chart(), b.dir, centred_power(m, p, &b.k));
        let mut mat = QMatrix::zeros(d);
        for k in 0..d {
            let col = project(&gauge_act(&eta, &m.pure(k, m.chart().one()), m), p)?;
            for (row, c) in col.into_iter().enumerate() {
                mat.set(row, k, c);
            }
        }
        if !mat.is_zero() {
            action.insert(b, mat);
        }
    }
    let module = FiniteModule::new(s, d, level, action)?.with_labels(m.u().labels().to_vec());
    if let Some(w) = module.homomorphism_witness() {
        return Err(Error::Internal(format!("induced fiber action is not a representation: {w}")));
    }
    Ok(QuotientFiber { module, point: p.clone() })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Letter {
    Function(LocalElement),
    Field(ChartField),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Function(g) => write!(f, "[{g}]"),
            Letter::Field(eta) => write!(f, "[{eta}]"),
        }
    }
}

/// `l_1 l_2 … l_n`, acting right to left.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct OperatorWord(pub Vec<Letter>);

impl OperatorWord {
    pub fn empty() -> Self {
        OperatorWord(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `l·w`.
    pub fn prepend(&self, l: Letter) -> OperatorWord {
        let mut v = vec![l];
        v.extend(self.0.iter().cloned());
        OperatorWord(v)
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" ∘ "))
    }
}

/// Reverses the word, keeps functions and negates fields.
pub fn tau(w: &OperatorWord) -> OperatorWord {
    OperatorWord(
        w.0.iter()
            .rev()
            .map(|l| match l {
                Letter::Function(g) => Letter::Function(g.clone()),
                Letter::Field(eta) => Letter::Field(eta.mul_local(&-&eta.chart().one())),
            })
            .collect(),
    )
}

/// `Σ c·w·(1⊗φ)` as data.
pub type WordTerm = (Rational, OperatorWord, Vec<Rational>);

/// A free gauge module at a point, its fiber, and the Rudakov module on
/// the fiber's dual.
#[derive(Debug)]
pub struct PairingContext {
    module: GaugeModule,
    fiber: QuotientFiber,
    rud: RudakovContext,
}

impl PairingContext {
    pub fn new(m: &GaugeModule, p: &Point) -> Result<PairingContext> {
        let fiber = fiber(m, p)?;
        let rud = RudakovContext::new(m.chart(), p, fiber.module().dual())?;
        Ok(PairingContext { module: m.clone(), fiber, rud })
    }

    pub fn module(&self) -> &GaugeModule {
        &self.module
    }

    pub fn fiber(&self) -> &QuotientFiber {
        &self.fiber
    }

    pub fn rudakov(&self) -> &RudakovContext {
        &self.rud
    }

    pub fn point(&self) -> &Point {
        self.fiber.point()
    }

    pub fn project(&self, m: &GaugeElement) -> Result<Vec<Rational>> {
        project(m, self.point())
    }

    pub fn act_gauge(&self, w: &OperatorWord, m: &GaugeElement) -> GaugeElement {
        w.0.iter().rev().fold(m.clone(), |acc, l| match l {
            Letter::Function(f) => function_act(f, &acc),
            Letter::Field(eta) => gauge_act(eta, &acc, &self.module),
        })
    }

    pub fn act_rud(&self, w: &OperatorWord, r: &RudElement) -> Result<RudElement> {
        let mut acc = r.clone();
        for l in w.0.iter().rev() {
            acc = match l {
                Letter::Function(f) => rud_act_function(f, &acc, &self.rud)?,
                Letter::Field(eta) => rud_act_chart_field(eta, &acc, &self.rud)?,
            };
        }
        Ok(acc)
    }

    /// `w·(1⊗φ)` in `R_p(U*)`.
    pub fn reduce(&self, terms: &[WordTerm]) -> Result<RudElement> {
        let mut acc = self.rud.zero();
        for (c, w, phi) in terms {
            let base = RudElement::base(self.rud.s(), phi);
            acc = acc.add(&self.act_rud(w, &base)?.scale(c));
        }
        Ok(acc)
    }

    /// `φ(τ(w)·m mod m_p)`.
    pub fn pair_word(&self, m: &GaugeElement, w: &OperatorWord, phi: &[Rational]) -> Result<Rational> {
        let proj = self.project(&self.act_gauge(&tau(w), m))?;
        Ok(dot(phi, &proj))
    }

    pub fn pair_terms(&self, m: &GaugeElement, terms: &[WordTerm]) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (c, w, phi) in terms {
            acc += c * self.pair_word(m, w, phi)?;
        }
        Ok(acc)
    }

    /// `⟨m, r⟩` through the canonical words `y^a⊗φ_j = ∂^a·(1⊗φ_j)`.
    pub fn pair_rud(&self, m: &GaugeElement, r: &RudElement) -> Result<Rational> {
        let chart = self.module.chart();
        let mut acc = Rational::zero();
        for (a, j, c) in r.terms() {
            let mut w = m.clone();
            for (i, &e) in a.exponents().iter().enumerate() {
                let di = ChartField::coordinate(chart, i, chart.one());
                for _ in 0..e {
                    w = gauge_act(&di, &w, &self.module);
                }
            }
            let sign = if a.degree() % 2 == 0 { Rational::one() } else { -Rational::one() };
            acc += c * sign * &self.project(&w)?[j];
        }
        Ok(acc)
    }

    /// `(⟨f·m, r⟩, ⟨m, f·r⟩)`.
    pub fn adjoint_function(&self, m: &GaugeElement, f: &LocalElement, r: &RudElement) -> Result<(Rational, Rational)> {
        Ok((self.pair_rud(&function_act(f, m), r)?, self.pair_rud(m, &rud_act_function(f, r, &self.rud)?)?))
    }

    /// `(⟨η·m, r⟩, −⟨m, η·r⟩)`.
    pub fn adjoint_field(&self, m: &GaugeElement, eta: &ChartField, r: &RudElement) -> Result<(Rational, Rational)> {
        let lhs = self.pair_rud(&gauge_act(eta, m, &self.module), r)?;
        let rhs = -self.pair_rud(m, &rud_act_chart_field(eta, r, &self.rud)?)?;
        Ok((lhs, rhs))
    }

    /// Two presentations of the same Rudakov element must pair equally.
    pub fn well_definedness_check(&self, m: &GaugeElement, lhs: &[WordTerm], rhs: &[WordTerm]) -> Result<WellDefinedness> {
        let (r1, r2) = (self.reduce(lhs)?, self.reduce(rhs)?);
        let (p1, p2) = (self.pair_terms(m, lhs)?, self.pair_terms(m, rhs)?);
        let via_element = self.pair_rud(m, &r1)?;
        Ok(WellDefinedness {
            equal_reductions: r1 == r2,
            pass: r1 == r2 && p1 == p2 && p1 == via_element,
            lhs: fmt_rational(&p1),
            rhs: fmt_rational(&p2),
            reduction: self.rud.display(&r1),
        })
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WellDefinedness {
    pub equal_reductions: bool,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
    pub reduction: String,
}

/// An equal-reduction partner of `terms`, by one rewrite: a commutation
/// `ab = ba + [a,b]`, the merge `fg`, or the induced relations
/// `f·(1⊗φ) = f(p)(1⊗φ)` and `η·(1⊗φ) = Σ η_i(p)∂_i(1⊗φ) + 1⊗ρ*(η₊)φ`.
pub fn random_rewrite(ctx: &PairingContext, terms: &[WordTerm], rng: &mut impl Rng) -> Result<Vec<WordTerm>> {
    let idx = rng.gen_range(0..terms.len());
    let (c, w, phi) = terms[idx].clone();
    let mut out: Vec<WordTerm> = terms.iter().enumerate().filter(|(i, _)| *i != idx).map(|(_, t)| t.clone()).collect();
    let n = w.len();
    let p = ctx.point();
    let chart = ctx.module.chart().clone();
    if n == 0 {
        out.push((c, w, phi));
        return Ok(out);
    }
    // the last letter touches 1⊗φ directly
    if n == 1 || rng.gen_bool(0.4) {
        let rest = OperatorWord(w.0[..n - 1].to_vec());
        match &w.0[n - 1] {
            Letter::Function(f) => out.push((c * f.evaluate(p.coords())?, rest, phi)),
            Letter::Field(eta) => {
                let mut plus = eta.clone();
                for (i, g) in eta.coeffs().iter().enumerate() {
                    let g0 = g.evaluate(p.coords())?;
                    if !g0.is_zero() {
                        let di = ChartField::coordinate(&chart, i, chart.one());
                        let mut ends_in_di = rest.0.clone();
                        ends_in_di.push(Letter::Field(di.clone()));
                        out.push((&c * &g0, OperatorWord(ends_in_di), phi.clone()));
                        plus = plus.add(&di.mul_local(&LocalElement::constant(chart.localization(), -g0)));
                    }
                }
                let moved = rud_act_chart_field(&plus, &RudElement::base(ctx.rud.s(), &phi), &ctx.rud)?;
                let phi2 = moved.base_vector().ok_or_else(|| Error::Internal(format!("𝒟₊ moved 1⊗φ to {moved}")))?;
                out.push((c, rest, phi2));
            }
        }
        return Ok(out);
    }
    let i = rng.gen_range(0..n - 1);
    let (a, b) = (&w.0[i], &w.0[i + 1]);
    let splice = |mid: Vec<Letter>| {
        let mut v = w.0[..i].to_vec();
        v.extend(mid);
        v.extend(w.0[i + 2..].iter().cloned());
        OperatorWord(v)
    };
    match (a, b) {
        (Letter::Function(f), Letter::Function(g)) => out.push((c, splice(vec![Letter::Function(f * g)]), phi)),
        (Letter::Field(x), Letter::Field(y)) => {
            out.push((c.clone(), splice(vec![b.clone(), a.clone()]), phi.clone()));
            out.push((c, splice(vec![Letter::Field(x.bracket(y))]), phi));
        }
        // η f = f η + η(f)
        (Letter::Field(x), Letter::Function(f)) => {
            out.push((c.clone(), splice(vec![b.clone(), a.clone()]), phi.clone()));
            out.push((c, splice(vec![Letter::Function(x.apply(f))]), phi));
        }
        // f η = η f − η(f)
        (Letter::Function(f), Letter::Field(x)) => {
            out.push((c.clone(), splice(vec![b.clone(), a.clone()]), phi.clone()));
            out.push((-c, splice(vec![Letter::Function(x.apply(f))]), phi));
        }
    }
    Ok(out)
}

/// A random word from the given letter pools.
pub fn random_word(funcs: &[LocalElement], fields: &[ChartField], max_len: usize, rng: &mut impl Rng) -> OperatorWord {
    let n = rng.gen_range(0..=max_len);
    OperatorWord(
        (0..n)
            .map(|_| {
                if rng.gen_bool(0.5) && !funcs.is_empty() {
                    Letter::Function(funcs[rng.gen_range(0..funcs.len())].clone())
                } else {
                    Letter::Field(fields[rng.gen_range(0..fields.len())].clone())
                }
            })
            .collect(),
    )
}

pub fn random_covector(d: usize, rng: &mut impl Rng) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..d).map(|_| int(rng.gen_range(-2..=2))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;
    use crate::gauge::{sphere_f_alpha, tensor_module};
    use crate::repn::{dualize, gl_family, GlKind};
    use crate::rudakov::random_element;
    use crate::variety::{standard_atlas, Variety};
    use crate::vfields::{delta_field, VectorField};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line(alpha: &Rational) -> PairingContext {
        let v = Variety::affine_space(&["t"]);
        let c = standard_atlas(&v).remove(0);
        let p = Point::parse(&v, &["0"]).unwrap();
        PairingContext::new(&tensor_module(&c, alpha), &p).unwrap()
    }

    fn sphere(alpha: &Rational) -> PairingContext {
        let m = sphere_f_alpha(alpha);
        let p = Point::parse(m.chart().variety(), &["0", "0", "1"]).unwrap();
        PairingContext::new(&m, &p).unwrap()
    }

    #[test]
    fn fibers() {
        let alpha = rat(3, 4);
        let ctx = line(&alpha);
        let e11 = ctx.fiber().module().e(0, 0);
        assert_eq!(e11.get(0, 0), &alpha);
        // B = 0 over 𝔸²: the fiber is the original module
        let a2 = Variety::affine_space(&["x", "y"]);
        let c = standard_atlas(&a2).remove(0);
        let u = gl_family(&GlKind::Sym { d: 2 }, 2).unwrap();
        let m = GaugeModule::new(&c, u.clone(), crate::gauge::GaugeField::zero(c.localization(), 2, 3)).unwrap();
        let f = fiber(&m, &Point::parse(&a2, &["1", "-2"]).unwrap()).unwrap();
        assert_eq!(f.module(), &u);
        assert!(fiber(&m.clone().with_generators(vec![m.pure(0, c.one())]), &Point::parse(&a2, &["0", "0"]).unwrap()).is_err());
        // sphere: the fiber has dimension at most the number of generators
        let s = sphere(&int(1));
        assert_eq!(s.fiber().dim(), 1);
        assert_eq!(dualize(s.fiber().module()).module, *s.rudakov().u());
    }

    #[test]
    fn pairing_examples() {
        let alpha = rat(2, 5);
        let ctx = line(&alpha);
        let m = ctx.module().clone();
        let c = m.chart().clone();
        let phi = vec![int(3)];
        let one = m.pure(0, c.one());
        assert_eq!(ctx.pair_word(&one, &OperatorWord::empty(), &phi).unwrap(), int(3));
        let t = m.pure(0, c.param(0));
        assert!(ctx.pair_word(&t, &OperatorWord::empty(), &phi).unwrap().is_zero());
        let tdt = OperatorWord(vec![Letter::Field(ChartField::coordinate(&c, 0, c.param(0)))]);
        assert_eq!(ctx.pair_word(&one, &tdt, &phi).unwrap(), -(&alpha * int(3)));
        // adding m_pM changes nothing
        let g = m.pure(0, c.parse_local("2 + t").unwrap());
        let g2 = g.add(&m.pure(0, c.parse_local("t^3 - 5*t").unwrap()));
        assert_eq!(ctx.pair_word(&g, &OperatorWord::empty(), &phi).unwrap(), ctx.pair_word(&g2, &OperatorWord::empty(), &phi).unwrap());
    }

    #[test]
    fn tau_is_an_anti_involution() {
        let ctx = line(&int(1));
        let c = ctx.module().chart().clone();
        let f = Letter::Function(c.parse_local("t + 1").unwrap());
        let eta = ChartField::coordinate(&c, 0, c.param(0));
        let w = OperatorWord(vec![Letter::Field(eta.clone()), f.clone()]);
        let t = tau(&w);
        assert_eq!(t.0[0], f);
        assert_eq!(t.0[1], Letter::Field(eta.mul_local(&-c.one())));
        assert_eq!(tau(&t), w);
        assert_eq!(tau(&OperatorWord(vec![f.clone()])), OperatorWord(vec![f]));
    }

    fn sphere_letters(ctx: &PairingContext) -> (Vec<LocalElement>, Vec<ChartField>) {
        let chart = ctx.module().chart().clone();
        let v = chart.variety().clone();
        let funcs = ["x", "y + 1", "z", "x*y - z"].map(|s| chart.parse_local(s).unwrap()).to_vec();
        let mut fields = Vec::new();
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            for g in ["1", "x", "z"] {
                fields.push(delta_field(&v, i, j).unwrap().mul_a(&v.element(g).unwrap()).to_chart(&chart));
            }
        }
        (funcs, fields)
    }

    #[test]
    fn adjointness() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for ctx in [line(&rat(1, 2)), sphere(&int(1)), sphere(&rat(1, 2))] {
            let s = ctx.rudakov().s();
            let (funcs, fields) = if s == 1 {
                let c = ctx.module().chart().clone();
                let v = VectorField::parse(c.variety(), "(1 + t^2)*d/dt").unwrap().to_chart(&c);
                (vec![c.parse_local("t - 2").unwrap()], vec![v, ChartField::coordinate(&c, 0, c.param(0))])
            } else {
                sphere_letters(&ctx)
            };
            for _ in 0..5 {
                let m = ctx.module().pure(0, funcs[rng.gen_range(0..funcs.len())].clone());
                let r = random_element(s, 1, 2, &mut rng);
                let f = &funcs[rng.gen_range(0..funcs.len())];
                let (a, b) = ctx.adjoint_function(&m, f, &r).unwrap();
                assert_eq!(a, b);
                let eta = &fields[rng.gen_range(0..fields.len())];
                let (a, b) = ctx.adjoint_field(&m, eta, &r).unwrap();
                assert_eq!(a, b, "eta = {eta}, r = {r}");
            }
        }
    }

    #[test]
    fn well_definedness() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let ctx = sphere(&rat(1, 2));
        let (funcs, fields) = sphere_letters(&ctx);
        for _ in 0..8 {
            let w = random_word(&funcs, &fields, 3, &mut rng);
            let lhs = vec![(Rational::one(), w, random_covector(1, &mut rng))];
            let rhs = random_rewrite(&ctx, &lhs, &mut rng).unwrap();
            let m = ctx.module().pure(0, funcs[rng.gen_range(0..funcs.len())].clone());
            let r = ctx.well_definedness_check(&m, &lhs, &rhs).unwrap();
            assert!(r.equal_reductions && r.pass, "{r:?}");
        }
        // (f, g) against (fg)
        let line = line(&int(1));
        let c = line.module().chart().clone();
        let (f, g) = (c.parse_local("t + 1").unwrap(), c.parse_local("t^2 - 3").unwrap());
        let phi = vec![int(1)];
        let lhs = vec![(Rational::one(), OperatorWord(vec![Letter::Function(f.clone()), Letter::Function(g.clone())]), phi.clone())];
        let rhs = vec![(Rational::one(), OperatorWord(vec![Letter::Function(&f * &g)]), phi)];
        let m = line.module().pure(0, c.parse_local("t + 4").unwrap());
        assert!(line.well_definedness_check(&m, &lhs, &rhs).unwrap().pass);
    }
}
