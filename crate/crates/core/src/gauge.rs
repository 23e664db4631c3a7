//! Gauge fields and the action of `Der A_(h)` on `A_(h)⊗U`:
//!
//! `(f∂_i)·(g⊗u) = f·∂g/∂t_i⊗u + g·f·B_i(1⊗u) + Σ_{k≠0} (1/k!)·g·∂^k f/∂t^k ⊗ ρ(X^k∂_i)u`,
//!
//! where the sum stops at `|k| = level(U)` because `ρ` kills `L(level)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{int, Monomial, Rational};
use crate::groebner::QuotientElement;
use crate::jets::PointJets;
use crate::repn::{gl_family, FiniteModule, GlKind, LPlusBasis, QMatrix};
use crate::variety::{chart_by_minor, chart_derivative, Chart, LocalElement, Localization, Point, Variety};
use crate::vfields::{ChartField, VectorField};

/// `B_i` as `d×d` matrices over `A_(h)`: `B_i(1⊗u_k) = Σ_m B_i[m][k] u_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeField {
    matrices: Vec<Vec<Vec<LocalElement>>>,
}

impl GaugeField {
    pub fn new(matrices: Vec<Vec<Vec<LocalElement>>>) -> Self {
        GaugeField { matrices }
    }

    pub fn zero(loc: &Arc<Localization>, s: usize, d: usize) -> Self {
        GaugeField { matrices: vec![vec![vec![LocalElement::zero(loc); d]; d]; s] }
    }

    /// The rank-one field `B_i = b_i`.
    pub fn scalar(b: Vec<LocalElement>) -> Self {
        GaugeField { matrices: b.into_iter().map(|e| vec![vec![e]]).collect() }
    }

    pub fn matrix(&self, i: usize) -> &[Vec<LocalElement>] {
        &self.matrices[i]
    }

    pub fn entry(&self, i: usize, m: usize, k: usize) -> &LocalElement {
        &self.matrices[i][m][k]
    }

    pub fn is_zero(&self) -> bool {
        self.matrices.iter().flatten().flatten().all(|e| e.is_zero())
    }

    /// Largest `h`-power appearing in any entry.
    pub fn max_h_power(&self) -> u32 {
        self.matrices.iter().flatten().flatten().map(|e| e.h_power()).max().unwrap_or(0)
    }

    fn dims(&self) -> (usize, usize) {
        (self.matrices.len(), self.matrices.first().map_or(0, |m| m.len()))
    }

    /// Axioms (ii) `[B_i, ρ(a)] = 0` and (iii)
    /// `∂B_j/∂t_i − ∂B_i/∂t_j + [B_i, B_j] = 0`, with an entrywise witness.
    pub fn check(&self, chart: &Chart, u: &FiniteModule) -> Result<()> {
        let (s, d) = self.dims();
        if s != chart.dim() || (s > 0 && d != u.dim()) || self.matrices.iter().any(|m| m.len() != d || m.iter().any(|r| r.len() != d)) {
            return Err(Error::Dimension(format!("gauge field needs {} matrices of size {}", chart.dim(), u.dim())));
        }
        let loc = chart.localization();
        for i in 0..s {
            for (a, rho) in u.actions() {
                let c = commutator_lq(loc, &self.matrices[i], rho);
                if let Some((m, k, e)) = first_nonzero(&c) {
                    return Err(Error::GaugeAxiom {
                        axiom: "ii",
                        witness: format!("[B_{}, rho({a})] has entry ({m},{k}) = {e}", i + 1),
                    });
                }
            }
        }
        for i in 0..s {
            for j in (i + 1)..s {
                let di_bj = map_entries(&self.matrices[j], |e| chart_derivative(e, i, chart));
                let dj_bi = map_entries(&self.matrices[i], |e| chart_derivative(e, j, chart));
                let br = sub_ll(&mul_ll(loc, &self.matrices[i], &self.matrices[j]), &mul_ll(loc, &self.matrices[j], &self.matrices[i]));
                let total = add_ll(&sub_ll(&di_bj, &dj_bi), &br);
                if let Some((m, k, e)) = first_nonzero(&total) {
                    return Err(Error::GaugeAxiom {
                        axiom: "iii",
                        witness: format!("dB_{}/dt_{} - dB_{}/dt_{} + [B_{0}, B_{1}] has entry ({m},{k}) = {e}", j + 1, i + 1, i + 1, j + 1),
                    });
                }
            }
        }
        Ok(())
    }
}

type LMat = Vec<Vec<LocalElement>>;

fn map_entries(m: &LMat, f: impl Fn(&LocalElement) -> LocalElement) -> LMat {
    m.iter().map(|r| r.iter().map(&f).collect()).collect()
}

fn add_ll(a: &LMat, b: &LMat) -> LMat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

fn sub_ll(a: &LMat, b: &LMat) -> LMat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

fn mul_ll(loc: &Arc<Localization>, a: &LMat, b: &LMat) -> LMat {
    let d = a.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..d).fold(LocalElement::zero(loc), |acc, k| if a[i][k].is_zero() || b[k][j].is_zero() { acc } else { &acc + &(&a[i][k] * &b[k][j]) }))
                .collect()
        })
        .collect()
}

fn commutator_lq(loc: &Arc<Localization>, b: &LMat, rho: &QMatrix) -> LMat {
    let d = b.len();
    let r: LMat = (0..d).map(|i| (0..d).map(|j| LocalElement::constant(loc, rho.get(i, j).clone())).collect()).collect();
    sub_ll(&mul_ll(loc, b, &r), &mul_ll(loc, &r, b))
}

fn first_nonzero(m: &LMat) -> Option<(usize, usize, &LocalElement)> {
    m.iter().enumerate().find_map(|(i, r)| r.iter().enumerate().find(|(_, e)| !e.is_zero()).map(|(j, e)| (i, j, e)))
}

/// `Σ_k g_k ⊗ u_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeElement {
    coeffs: Vec<LocalElement>,
}

impl GaugeElement {
    pub fn new(coeffs: Vec<LocalElement>) -> Self {
        GaugeElement { coeffs }
    }

    pub fn zero(loc: &Arc<Localization>, d: usize) -> Self {
        GaugeElement { coeffs: vec![LocalElement::zero(loc); d] }
    }

    /// `g ⊗ u_k`.
    pub fn pure(loc: &Arc<Localization>, d: usize, k: usize, g: LocalElement) -> Self {
        let mut e = GaugeElement::zero(loc, d);
        e.coeffs[k] = g;
        e
    }

    pub fn coeffs(&self) -> &[LocalElement] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &GaugeElement) -> GaugeElement {
        GaugeElement { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &GaugeElement) -> GaugeElement {
        GaugeElement { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Rational) -> GaugeElement {
        GaugeElement { coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn max_h_power(&self) -> u32 {
        self.coeffs.iter().map(|c| c.h_power()).max().unwrap_or(0)
    }

    pub fn display(&self, labels: &[String]) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .zip(labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| format!("({c}) ⊗ {l}"))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for GaugeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (1..=self.coeffs.len()).map(|i| format!("u{i}")).collect();
        f.write_str(&self.display(&labels))
    }
}

/// `A_(h)⊗U` with a validated gauge field, optionally restricted to the
/// `A`-span of given generators.
#[derive(Clone, Debug)]
pub struct GaugeModule {
    chart: Arc<Chart>,
    u: FiniteModule,
    b: GaugeField,
    generators: Option<Vec<GaugeElement>>,
}

impl GaugeModule {
    pub fn new(chart: &Arc<Chart>, u: FiniteModule, b: GaugeField) -> Result<GaugeModule> {
        if u.s() != chart.dim() {
            return Err(Error::Dimension(format!("U is a module for s = {}, the chart has s = {}", u.s(), chart.dim())));
        }
        b.check(chart, &u)?;
        Ok(GaugeModule { chart: chart.clone(), u, b, generators: None })
    }

    pub fn with_generators(mut self, gens: Vec<GaugeElement>) -> Self {
        self.generators = Some(gens);
        self
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn localization(&self) -> &Arc<Localization> {
        self.chart.localization()
    }

    pub fn u(&self) -> &FiniteModule {
        &self.u
    }

    pub fn field(&self) -> &GaugeField {
        &self.b
    }

    pub fn generators(&self) -> Option<&[GaugeElement]> {
        self.generators.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    pub fn zero(&self) -> GaugeElement {
        GaugeElement::zero(self.localization(), self.dim())
    }

    pub fn pure(&self, k: usize, g: LocalElement) -> GaugeElement {
        GaugeElement::pure(self.localization(), self.dim(), k, g)
    }

    /// `g ⊗ u_k` with `g ∈ A`.
    pub fn pure_a(&self, k: usize, g: &QuotientElement) -> GaugeElement {
        self.pure(k, self.chart.local(g))
    }

    pub fn parse_element(&self, coeffs: &[&str]) -> Result<GaugeElement> {
        if coeffs.len() != self.dim() {
            return Err(Error::Dimension(format!("{} coefficients for a {}-dimensional U", coeffs.len(), self.dim())));
        }
        Ok(GaugeElement::new(coeffs.iter().map(|c| self.chart.parse_local(c)).collect::<Result<_>>()?))
    }

    /// `ρ(X^k ∂_i)` for `1 ≤ |k| ≤ level`, grouped by direction.
    fn rho_terms(&self, i: usize) -> impl Iterator<Item = (&LPlusBasis, &QMatrix)> {
        self.u.actions().iter().filter(move |(b, _)| b.dir == i)
    }
}

/// The action of a chart field on `A_(h)⊗U`.
pub fn gauge_act(eta: &ChartField, v: &GaugeElement, m: &GaugeModule) -> GaugeElement {
    let chart = m.chart();
    let loc = chart.localization();
    let d = m.dim();
    let mut out = vec![LocalElement::zero(loc); d];
    for (i, f) in eta.coeffs().iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        // ∂^k f for every multi-index that ρ sees in direction i
        let mut derivs: BTreeMap<Monomial, LocalElement> = BTreeMap::new();
        for (b, _) in m.rho_terms(i) {
            partial_k(f, &b.k, chart, &mut derivs);
        }
        for (k, g) in v.coeffs().iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            out[k] = &out[k] + &(f * &chart_derivative(g, i, chart));
            let gf = g * f;
            for (mm, slot) in out.iter_mut().enumerate() {
                let bmk = m.b.entry(i, mm, k);
                if !bmk.is_zero() {
                    *slot = &*slot + &(&gf * bmk);
                }
            }
            for (b, rho) in m.rho_terms(i) {
                let dk = &derivs[&b.k];
                if dk.is_zero() {
                    continue;
                }
                let coeff = (g * dk).scale(&(Rational::one() / b.k.factorial()));
                for (mm, slot) in out.iter_mut().enumerate() {
                    let r = rho.get(mm, k);
                    if !r.is_zero() {
                        *slot = &*slot + &coeff.scale(r);
                    }
                }
            }
        }
    }
    GaugeElement::new(out)
}

fn partial_k(f: &LocalElement, k: &Monomial, chart: &Chart, memo: &mut BTreeMap<Monomial, LocalElement>) -> LocalElement {
    if k.is_one() {
        return f.clone();
    }
    if let Some(v) = memo.get(k) {
        return v.clone();
    }
    let i = k.exponents().iter().position(|&e| e > 0).unwrap();
    let lower = partial_k(f, &k.lowered(i).unwrap(), chart, memo);
    let out = chart_derivative(&lower, i, chart);
    memo.insert(k.clone(), out.clone());
    out
}

/// Ambient vector fields act through their chart coordinates.
pub fn field_act(eta: &VectorField, v: &GaugeElement, m: &GaugeModule) -> GaugeElement {
    gauge_act(&eta.to_chart(m.chart()), v, m)
}

/// The natural `A_(h)`-action, componentwise.
pub fn function_act(f: &LocalElement, v: &GaugeElement) -> GaugeElement {
    GaugeElement::new(v.coeffs().iter().map(|g| f * g).collect())
}

/// `one_dim` with `ρ(E_ii) = λ` for every `i`.
pub fn scalar_module(s: usize, lambda: &Rational) -> FiniteModule {
    let alpha = lambda * int(s as i64);
    gl_family(&GlKind::OneDim { alpha: crate::exactpoly::fmt_rational(&alpha) }, s).expect("one-dimensional module")
}

/// The tensor module `A_(h)⊗U`, `B = 0`, with `ρ(E_ii) = λ`.
pub fn tensor_module(chart: &Arc<Chart>, lambda: &Rational) -> GaugeModule {
    let u = scalar_module(chart.dim(), lambda);
    let b = GaugeField::zero(chart.localization(), chart.dim(), 1);
    GaugeModule::new(chart, u, b).expect("B = 0 is a gauge field")
}

/// `𝔉_α` on the sphere in the chart `N(2z)`, rank one, with
/// `B_i = α·x_i/z²` and `ρ(E_ii) = α`. This is the normalization for which
/// the chart-free formula `fΔ(g) + α·gΔ(f)` holds.
pub fn sphere_f_alpha(alpha: &Rational) -> GaugeModule {
    let chart = chart_by_minor(&Variety::sphere(), "2*z").expect("sphere chart");
    sphere_f_alpha_on(&chart, alpha)
}

pub fn sphere_f_alpha_on(chart: &Arc<Chart>, alpha: &Rational) -> GaugeModule {
    let loc = chart.localization();
    let v = chart.variety();
    // α x_i / z² = 4α x_i / h²
    let b = (0..2)
        .map(|i| LocalElement::new(loc, v.var(chart.params()[i]).scale(&(alpha * int(4))), 2))
        .collect();
    GaugeModule::new(chart, scalar_module(2, alpha), GaugeField::scalar(b)).expect("sphere gauge field")
}

/// Right side of the chart-free action `(fΔ)(g⊗u) = fΔ(g)⊗u + α·gΔ(f)⊗u`.
pub fn sphere_chart_free(f: &QuotientElement, delta: &VectorField, g: &QuotientElement, alpha: &Rational) -> QuotientElement {
    &(f * &delta.apply(g)) + &(g * &delta.apply(f)).scale(alpha)
}

/// `z^{−α}` for integer `α` in the chart `N(2z)`.
fn z_power(chart: &Chart, alpha: i64) -> LocalElement {
    let loc = chart.localization();
    let z = chart.variety().var(2);
    if alpha >= 0 {
        LocalElement::new(loc, QuotientElement::constant(loc.ideal(), int(2).pow(alpha as i32)), alpha as u32)
    } else {
        LocalElement::from_a(loc, &z.pow((-alpha) as u32))
    }
}

/// For integer `α`, `z^{−α}A⊗u` is closed under `𝒟`: checks the `Δ_ij` on
/// `z^{−α}·m` for every normal-form monomial `m` of degree `≤ max_degree`.
/// Returns the first offending input on failure.
pub fn sphere_submodule_closed(alpha: i64, max_degree: u32) -> std::result::Result<(), String> {
    let chart = chart_by_minor(&Variety::sphere(), "2*z").expect("sphere chart");
    let m = tensor_module(&chart, &int(alpha));
    let v = chart.variety();
    let zpow = z_power(&chart, alpha);
    let zinv = z_power(&chart, -alpha);
    let deltas = [
        VectorField::parse(v, "y*d/dx - x*d/dy").unwrap(),
        VectorField::parse(v, "z*d/dy - y*d/dz").unwrap(),
        VectorField::parse(v, "x*d/dz - z*d/dx").unwrap(),
    ];
    for mono in Monomial::all_up_to_degree(3, max_degree) {
        if mono.exponents()[0] > 1 {
            continue; // not a normal-form monomial
        }
        let a = QuotientElement::new(v.ideal(), &crate::exactpoly::Polynomial::monomial(v.ring(), mono.clone(), Rational::one()));
        let el = m.pure(0, &zpow * &chart.local(&a));
        for d in &deltas {
            let r = field_act(d, &el, &m);
            let back = &r.coeffs()[0] * &zinv;
            if back.as_a().is_none() {
                return Err(format!("{d} applied to z^{}*{} leaves z^{0}A", -alpha, a));
            }
        }
    }
    Ok(())
}

/// The transition `f⊗u ↦ (z/x)^α f⊗u` intertwines the tensor actions in the
/// charts `N(2z)` and `N(2x)`; both sides are compared in `A` after clearing
/// `z^α` and `x^α`.
pub fn sphere_transition_check(alpha: i64, samples: &[(VectorField, QuotientElement)]) -> std::result::Result<(), String> {
    let v = Variety::sphere();
    let cz = chart_by_minor(&v, "2*z").unwrap();
    let cx = chart_by_minor(&v, "2*x").unwrap();
    let (mz, mx) = (tensor_module(&cz, &int(alpha)), tensor_module(&cx, &int(alpha)));
    // a common localization at 4xz
    let common = Localization::new(cz.h() * cx.h());
    let lift = |e: &LocalElement, other_h: &QuotientElement| {
        LocalElement::new(&common, e.numerator() * &other_h.pow(e.h_power()), e.h_power())
    };
    let pow_in = |c: &Arc<Chart>, var: usize, a: i64| -> LocalElement {
        let loc = c.localization();
        if a >= 0 {
            LocalElement::new(loc, QuotientElement::constant(loc.ideal(), int(2).pow(a as i32)), a as u32)
        } else {
            LocalElement::from_a(loc, &v.var(var).pow((-a) as u32))
        }
    };
    for (eta, a) in samples {
        // g = z^{-α} a in chart z, its image x^{-α} a in chart x
        let gz = mz.pure(0, &pow_in(&cz, 2, alpha) * &cz.local(a));
        let gx = mx.pure(0, &pow_in(&cx, 0, alpha) * &cx.local(a));
        let rz = lift(&field_act(eta, &gz, &mz).coeffs()[0], cx.h());
        let rx = lift(&field_act(eta, &gx, &mx).coeffs()[0], cz.h());
        // (z/x)^α r_z = r_x, cleared of denominators
        let z = LocalElement::from_a(&common, &v.var(2));
        let x = LocalElement::from_a(&common, &v.var(0));
        let (lhs, rhs) = if alpha >= 0 {
            (&z.pow(alpha as u32) * &rz, &x.pow(alpha as u32) * &rx)
        } else {
            (&x.pow((-alpha) as u32) * &rz, &z.pow((-alpha) as u32) * &rx)
        };
        if lhs != rhs {
            return Err(format!("transition fails for {eta} on {a}: {lhs} vs {rhs}"));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// the circle in Laurent coordinates

/// `F_α` on `k[t, t^{-1}]` with basis `v_s`, `|s| ≤ window`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleModule {
    pub alpha: Rational,
    pub window: i64,
}

pub fn circle_family(alpha: &Rational, window: i64) -> CircleModule {
    CircleModule { alpha: alpha.clone(), window }
}

impl CircleModule {
    fn index(&self, s: i64) -> Result<i64> {
        if s.abs() > self.window {
            Err(Error::WindowOverflow { index: s, window: self.window })
        } else {
            Ok(s)
        }
    }

    /// `e_k·v_s = (s + αk)·v_{k+s}` as `(coefficient, index)`.
    pub fn e(&self, k: i64, s: i64) -> Result<(Rational, i64)> {
        Ok((int(s) + &self.alpha * int(k), self.index(s + k)?))
    }

    /// `t^k·v_s = v_{s+k}`.
    pub fn t(&self, k: i64, s: i64) -> Result<i64> {
        self.index(s + k)
    }
}

/// A Laurent polynomial as exponent → coefficient.
type Laurent = BTreeMap<i64, Rational>;

fn laurent_add(a: &mut Laurent, j: i64, c: Rational) {
    let e = a.entry(j).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        a.remove(&j);
    }
}

/// Which candidate map `F_{−α} → F_α°` to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DualMap {
    /// `v_s ↦ δ_{−s}` where `δ_j(v_j) = 1`.
    Standard,
    /// The negative control `v_s ↦ δ_s`.
    Perturbed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualCheck {
    pub pass: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

/// Builds `F_α° = Hom_A(F_α, A)` from the definition
/// `(η·φ)(m) = −φ(η·m) + η(φ(m))`, and tests whether the candidate map
/// intertwines it with `F_{−α}` on all indices inside the window.
pub fn circle_dual_check(alpha: &Rational, window: i64, map: DualMap) -> DualCheck {
    let m = circle_family(alpha, window * 3 + 2);
    let minus = circle_family(&-alpha, window * 3 + 2);
    // a functional φ with φ(v_0) = t^j is A-linear: φ(v_s) = t^{s+j}
    let eval = |phi: &Laurent, s: i64| -> Laurent {
        phi.iter().map(|(j, c)| (j + s, c.clone())).collect()
    };
    // (e_k·φ)(v_s) by the definition
    let act_e = |k: i64, phi: &Laurent, s: i64| -> Result<Laurent> {
        let (c, idx) = m.e(k, s)?;
        let mut out = Laurent::new();
        for (j, v) in eval(phi, idx) {
            laurent_add(&mut out, j, -(&c * &v));
        }
        // e_k = t^{k+1} d/dt on t^j gives j t^{j+k}
        for (j, v) in eval(phi, s) {
            laurent_add(&mut out, j + k, int(j) * v);
        }
        Ok(out)
    };
    let image = |s: i64| -> Laurent {
        // δ_j(v_0) = t^{-j}
        let j = match map {
            DualMap::Standard => -s,
            DualMap::Perturbed => s,
        };
        [(-j, Rational::one())].into_iter().collect()
    };
    let mut checked = 0;
    for s in -window..=window {
        for k in -window..=window {
            // the functional e_k·Φ(v_s) is A-linear: its value on v_r is t^r times its value on v_0
            let lhs0 = match act_e(k, &image(s), 0) {
                Ok(l) => l,
                Err(e) => return DualCheck { pass: false, checked, witness: Some(e.to_string()) },
            };
            for r in [-1i64, 1] {
                let lr = act_e(k, &image(s), r).expect("inside the enlarged window");
                if lr != eval(&lhs0, r) {
                    return DualCheck { pass: false, checked, witness: Some(format!("e_{k}·phi is not A-linear at v_{r}")) };
                }
            }
            let (c, idx) = minus.e(k, s).expect("inside the enlarged window");
            let rhs: Laurent = image(idx).into_iter().map(|(j, v)| (j, v * &c)).filter(|(_, v)| !v.is_zero()).collect();
            checked += 1;
            if lhs0 != rhs {
                return DualCheck {
                    pass: false,
                    checked,
                    witness: Some(format!("e_{k}·Phi(v_{s}) has value {:?} on v_0, Phi(e_{k}·v_{s}) has {:?}", show_laurent(&lhs0), show_laurent(&rhs))),
                };
            }
            // t^k·Φ(v_s) = Φ(t^k v_s)
            let tk: Laurent = image(s).into_iter().map(|(j, v)| (j + k, v)).collect();
            if tk != image(s + k) {
                return DualCheck { pass: false, checked, witness: Some(format!("t^{k}·Phi(v_{s}) differs from Phi(v_{})", s + k)) };
            }
        }
    }
    DualCheck { pass: true, checked, witness: None }
}

fn show_laurent(l: &Laurent) -> String {
    if l.is_empty() {
        return "0".into();
    }
    l.iter().map(|(j, c)| format!("{}*t^{}", crate::exactpoly::fmt_rational(c), j)).collect::<Vec<_>>().join(" + ")
}

/// The same family as a gauge module on `𝔸¹` localized at `t`:
/// `B = −α/t`, `ρ(E_11) = α`, with `t^s⊗u ↔ v_s`.
pub fn circle_gauge_module(alpha: &Rational) -> GaugeModule {
    let line = Variety::affine_space(&["t"]);
    let base = crate::variety::standard_atlas(&line).remove(0);
    let chart = Arc::new(base.localize_further(&line.var(0)).expect("t is nonzero"));
    let b = GaugeField::scalar(vec![LocalElement::new(chart.localization(), QuotientElement::constant(line.ideal(), -alpha), 1)]);
    GaugeModule::new(&chart, scalar_module(1, alpha), b).expect("rank-one fields on a line are flat")
}

/// `t^s` in `A_(t)`.
pub fn laurent_monomial(chart: &Chart, s: i64) -> LocalElement {
    let loc = chart.localization();
    if s >= 0 {
        LocalElement::from_a(loc, &chart.variety().var(0).pow(s as u32))
    } else {
        LocalElement::h_inverse_pow(loc, (-s) as u32)
    }
}

/// `e_k = t^{k+1} d/dt` as a chart field on `A_(t)`.
pub fn circle_e(chart: &Arc<Chart>, k: i64) -> ChartField {
    ChartField::coordinate(chart, 0, laurent_monomial(chart, k + 1))
}

// ---------------------------------------------------------------------------
// density

fn require_level_one(m: &GaugeModule) -> Result<()> {
    if m.u().level() != 1 {
        return Err(Error::InvalidModule("the density operators need a level-one U".into()));
    }
    Ok(())
}

/// `(t_i h∂_j)·v − t_i·(h∂_j·v)`, which equals `Σ_k h·g_k ⊗ E_ij u_k`.
pub fn density_operator(m: &GaugeModule, i: usize, j: usize, v: &GaugeElement) -> Result<GaugeElement> {
    require_level_one(m)?;
    let chart = m.chart();
    let h = chart.local(chart.h());
    let ti = chart.param(i);
    let a = gauge_act(&ChartField::coordinate(chart, j, &ti * &h), v, m);
    let b = function_act(&ti, &gauge_act(&ChartField::coordinate(chart, j, h), v, m));
    Ok(a.sub(&b))
}

/// The closed form `Σ_k h·g_k ⊗ E_ij u_k`.
pub fn density_closed_form(m: &GaugeModule, i: usize, j: usize, v: &GaugeElement) -> GaugeElement {
    let chart = m.chart();
    let h = chart.local(chart.h());
    let e = m.u().e(i, j);
    let d = m.dim();
    let out = (0..d)
        .map(|row| {
            (0..d).fold(LocalElement::zero(chart.localization()), |acc, k| {
                let c = e.get(row, k);
                if c.is_zero() || v.coeffs()[k].is_zero() {
                    acc
                } else {
                    &acc + &(&h * &v.coeffs()[k]).scale(c)
                }
            })
        })
        .collect();
    GaugeElement::new(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: String,
    pub result: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SweepOutcome {
    Reached {
        /// `h^n f (A⊗U)` lies in the submodule generated by the input.
        n: u32,
        f: String,
        f_at_point: String,
        witnesses: Vec<String>,
        operations: u64,
        derivative_steps: u32,
        trace: Vec<TraceStep>,
    },
    BudgetExhausted {
        operations: u64,
        trace: Vec<TraceStep>,
    },
}

impl SweepOutcome {
    pub fn reached(&self) -> bool {
        matches!(self, SweepOutcome::Reached { .. })
    }
}

struct Sweep<'a> {
    m: &'a GaugeModule,
    ops: u64,
    budget: u64,
    trace: Vec<TraceStep>,
}

struct OutOfBudget;

impl<'a> Sweep<'a> {
    fn tick(&mut self, n: u64) -> std::result::Result<(), OutOfBudget> {
        self.ops += n;
        if self.ops > self.budget {
            Err(OutOfBudget)
        } else {
            Ok(())
        }
    }

    fn log(&mut self, step: impl Into<String>, v: &GaugeElement) {
        let labels = self.m.u().labels().to_vec();
        self.trace.push(TraceStep { step: step.into(), result: v.display(&labels) });
    }

    /// `h⊗E_ij` through the commutator form: two field actions and one
    /// function action.
    fn h_e(&mut self, i: usize, j: usize, v: &GaugeElement) -> std::result::Result<GaugeElement, OutOfBudget> {
        self.tick(3)?;
        Ok(density_operator(self.m, i, j, v).expect("level checked"))
    }

    fn times(&mut self, f: &LocalElement, v: &GaugeElement) -> std::result::Result<GaugeElement, OutOfBudget> {
        self.tick(1)?;
        Ok(function_act(f, v))
    }
}

/// Words in the `E_ij` whose images span `End(U)`, with the expansion of
/// every matrix unit `E_{k,k0}` in them.
fn density_words(u: &FiniteModule, k0: usize) -> Result<Vec<Vec<(Vec<(usize, usize)>, Rational)>>> {
    let (s, d) = (u.s(), u.dim());
    let letters: Vec<(usize, usize)> = (0..s).flat_map(|i| (0..s).map(move |j| (i, j))).collect();
    let flat = |m: &QMatrix| -> Vec<Rational> { m.rows().into_iter().flatten().collect() };
    // incremental echelon form over the flattened matrices
    let mut words: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut mats: Vec<QMatrix> = Vec::new();
    let mut echelon: Vec<(usize, Vec<Rational>, Vec<Rational>)> = Vec::new(); // pivot, row, combination of words
    let mut frontier: Vec<(Vec<(usize, usize)>, QMatrix)> = vec![(Vec::new(), QMatrix::identity(d))];
    let target = d * d;
    let mut length = 0;
    while echelon.len() < target {
        if frontier.is_empty() || length > 2 * target + 2 {
            return Err(Error::InvalidModule("the E_ij do not generate End(U); U is not simple".into()));
        }
        let mut next = Vec::new();
        for (w, mat) in frontier {
            let mut row = flat(&mat);
            let mut comb = vec![Rational::zero(); words.len() + 1];
            comb[words.len()] = Rational::one();
            for (p, erow, ecomb) in &echelon {
                if !row[*p].is_zero() {
                    let f = row[*p].clone();
                    for (a, b) in row.iter_mut().zip(erow) {
                        *a -= &f * b;
                    }
                    for (a, b) in comb.iter_mut().zip(ecomb) {
                        *a -= &f * b;
                    }
                }
            }
            let Some(p) = row.iter().position(|x| !x.is_zero()) else { continue };
            let inv = Rational::one() / &row[p];
            row.iter_mut().for_each(|x| *x *= &inv);
            comb.iter_mut().for_each(|x| *x *= &inv);
            // keep the echelon reduced
            for (_, erow, ecomb) in echelon.iter_mut() {
                if !erow[p].is_zero() {
                    let f = erow[p].clone();
                    for (a, b) in erow.iter_mut().zip(&row) {
                        *a -= &f * b;
                    }
                    ecomb.resize(comb.len(), Rational::zero());
                    for (a, b) in ecomb.iter_mut().zip(&comb) {
                        *a -= &f * b;
                    }
                }
            }
            words.push(w.clone());
            mats.push(mat.clone());
            for e in echelon.iter_mut() {
                e.2.resize(words.len(), Rational::zero());
            }
            echelon.push((p, row, comb));
            for &(i, j) in &letters {
                let mut w2 = vec![(i, j)];
                w2.extend(w.iter().cloned());
                next.push((w2, u.e(i, j).mul(&mat)));
            }
            if echelon.len() == target {
                break;
            }
        }
        frontier = next;
        length += 1;
    }
    for e in echelon.iter_mut() {
        e.2.resize(words.len(), Rational::zero());
    }
    // express E_{k,k0}: its flattened form is a unit vector at k*d + k0
    let mut out = Vec::with_capacity(d);
    for k in 0..d {
        let pos = k * d + k0;
        let mut comb = vec![Rational::zero(); words.len()];
        for (p, _, ecomb) in &echelon {
            if *p == pos {
                for (a, b) in comb.iter_mut().zip(ecomb) {
                    *a += b;
                }
            }
        }
        let expr: Vec<(Vec<(usize, usize)>, Rational)> =
            comb.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(w, c)| (words[w].clone(), c)).collect();
        // sanity: the combination really is the matrix unit
        let check = expr.iter().fold(QMatrix::zeros(d), |acc, (w, c)| {
            let m = w.iter().rev().fold(QMatrix::identity(d), |acc, &(i, j)| u.e(i, j).mul(&acc));
            acc.add(&m.scale(c))
        });
        if check != QMatrix::unit(d, k, k0) {
            return Err(Error::Internal("density word expansion is wrong".into()));
        }
        out.push(expr);
    }
    Ok(out)
}

/// Runs the constructive density argument on `v` with an explicit operation
/// budget. Every produced element is obtained from `v` by module operations.
pub fn density_sweep(m: &GaugeModule, v: &GaugeElement, p: &Point, budget: u64) -> Result<SweepOutcome> {
    require_level_one(m)?;
    if v.is_zero() {
        return Err(Error::Input("the sweep needs a nonzero element".into()));
    }
    let chart = m.chart();
    if !p.in_chart(chart) {
        return Err(Error::SingularChart);
    }
    let loc = chart.localization();
    let h = chart.local(chart.h());
    let d = m.dim();
    let mut sw = Sweep { m, ops: 0, budget, trace: Vec::new() };
    let mut run = || -> std::result::Result<Result<SweepOutcome>, OutOfBudget> {
        // 1. clear denominators
        let k = v.max_h_power();
        let v0 = if k > 0 { sw.times(&h.pow(k), v)? } else { v.clone() };
        sw.log(format!("multiply by h^{k}"), &v0);
        // 2. pick k0, preferring a coefficient that does not vanish at p
        let nonzero: Vec<usize> = (0..d).filter(|&i| !v0.coeffs()[i].is_zero()).collect();
        let k0 = nonzero
            .iter()
            .copied()
            .find(|&i| !v0.coeffs()[i].evaluate(p.coords()).map(|x| x.is_zero()).unwrap_or(true))
            .unwrap_or(nonzero[0]);
        let mut f0 = v0.coeffs()[k0].as_a().expect("denominators cleared").clone();
        // 3. Jacobson density elements
        let words = match density_words(m.u(), k0) {
            Ok(w) => w,
            Err(e) => return Ok(Err(e)),
        };
        let r_of = |expr: &Vec<(Vec<(usize, usize)>, Rational)>| expr.iter().map(|(w, _)| w.len()).max().unwrap_or(0) as u32;
        let mut n = words.iter().map(r_of).max().unwrap_or(0);
        // 4. the h-padded correspondence, realized by module operations
        let mut witnesses: Vec<GaugeElement> = Vec::with_capacity(d);
        for (kk, expr) in words.iter().enumerate() {
            let r = r_of(expr);
            let mut acc = GaugeElement::zero(loc, d);
            for (word, c) in expr {
                let mut cur = v0.clone();
                for &(i, j) in word.iter().rev() {
                    cur = sw.h_e(i, j, &cur)?;
                }
                let pad = r - word.len() as u32;
                if pad > 0 {
                    cur = sw.times(&h.pow(pad), &cur)?;
                }
                acc = acc.add(&cur.scale(c));
            }
            if n > r {
                acc = sw.times(&h.pow(n - r), &acc)?;
            }
            sw.log(format!("density word for u_{} (length {r})", kk + 1), &acc);
            witnesses.push(acc);
        }
        let expect = |n: u32, f: &QuotientElement, k: usize| GaugeElement::pure(loc, d, k, &h.pow(n) * &chart.local(f));
        for (kk, w) in witnesses.iter().enumerate() {
            if *w != expect(n, &f0, kk) {
                return Ok(Err(Error::Internal(format!("density word for u_{} produced {w}", kk + 1))));
            }
        }
        // 5. derivative steps until the coefficient survives at p
        let kpow = m.field().max_h_power().max(1);
        let mut steps = 0;
        while f0.evaluate(p.coords()).is_zero() {
            let Some(i) = descending_direction(chart, p, &f0) else {
                return Ok(Err(Error::Internal("coefficient has no finite Taylor order".into())));
            };
            let basic = ChartField::coordinate(chart, i, h.clone());
            let mut next = Vec::with_capacity(d);
            for kk in 0..d {
                // h∂_i(h^{N+K} f0 ⊗ u_k) minus the parts lying in h^N f0 (A⊗U)
                let lifted = sw.times(&h.pow(kpow), &witnesses[kk])?;
                sw.tick(1)?;
                let acted = gauge_act(&basic, &lifted, m);
                let dh = chart.basic_apply(i, chart.h()); // h·∂h/∂t_i
                let mut corr = acted;
                for mm in 0..d {
                    let mut c = LocalElement::zero(loc);
                    if mm == kk {
                        c = &c + &(&LocalElement::new(loc, dh.scale(&int((n + kpow) as i64)), 1) * &h.pow(kpow));
                    }
                    c = &c + &(&h.pow(kpow + 1) * m.field().entry(i, mm, kk));
                    for q in 0..chart.dim() {
                        let e = m.u().e(q, i);
                        let r = e.get(mm, kk);
                        if !r.is_zero() {
                            let dq = LocalElement::new(loc, chart.basic_apply(q, chart.h()), 1);
                            c = &c + &(&h.pow(kpow) * &dq).scale(r);
                        }
                    }
                    if c.as_a().is_none() {
                        return Ok(Err(Error::Internal(format!("correction coefficient {c} is not in A"))));
                    }
                    if !c.is_zero() {
                        let t = sw.times(&c, &witnesses[mm])?;
                        corr = corr.sub(&t);
                    }
                }
                next.push(corr);
            }
            let df = chart.basic_apply(i, &f0);
            n += kpow;
            for (kk, w) in next.iter().enumerate() {
                if *w != expect(n, &df, kk) {
                    return Ok(Err(Error::Internal(format!("derivative step produced {w}"))));
                }
            }
            f0 = df;
            witnesses = next;
            steps += 1;
            sw.log(format!("derivative step along h*d/dt_{}", i + 1), &witnesses[0]);
        }
        // 6. certificate
        let labels = m.u().labels().to_vec();
        Ok(Ok(SweepOutcome::Reached {
            n,
            f: f0.to_string(),
            f_at_point: crate::exactpoly::fmt_rational(&f0.evaluate(p.coords())),
            witnesses: witnesses.iter().map(|w| w.display(&labels)).collect(),
            operations: 0,
            derivative_steps: steps,
            trace: Vec::new(),
        }))
    };
    let res = run();
    let (ops, trace) = (sw.ops, sw.trace);
    match res {
        Err(OutOfBudget) => Ok(SweepOutcome::BudgetExhausted { operations: ops, trace }),
        Ok(Err(e)) => Err(e),
        Ok(Ok(SweepOutcome::Reached { n, f, f_at_point, witnesses, derivative_steps, .. })) => {
            Ok(SweepOutcome::Reached { n, f, f_at_point, witnesses, operations: ops, derivative_steps, trace })
        }
        Ok(Ok(other)) => Ok(other),
    }
}

/// A chart direction along which the lowest Taylor term of `f` at `p` has a
/// nonzero derivative.
fn descending_direction(chart: &Arc<Chart>, p: &Point, f: &QuotientElement) -> Option<usize> {
    for order in [4u32, 8, 16, 32] {
        let jets = PointJets::new(chart, p, order).ok()?;
        let s = jets.expand_a(f, order);
        if let Some(d) = s.min_degree() {
            let low = s.homogeneous(d);
            return (0..chart.dim()).find(|&i| !low.derivative(i).is_zero());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;
    use crate::variety::standard_atlas;

    fn line() -> (Arc<Variety>, Arc<Chart>) {
        let v = Variety::affine_space(&["t"]);
        let c = standard_atlas(&v).remove(0);
        (v, c)
    }

    #[test]
    fn affine_line_example() {
        let (v, c) = line();
        let alpha = rat(3, 7);
        let m = tensor_module(&c, &alpha);
        let el = m.pure_a(0, &v.element("t^2").unwrap());
        let tdt = VectorField::parse(&v, "t*d/dt").unwrap();
        let r = field_act(&tdt, &el, &m);
        assert_eq!(r, el.scale(&(int(2) + &alpha)));
        // constant coefficient: only the derivative term survives
        let dt = VectorField::parse(&v, "3*d/dt").unwrap();
        assert_eq!(field_act(&dt, &el, &m), m.pure_a(0, &v.element("6*t").unwrap()));
    }

    #[test]
    fn sphere_examples() {
        let alpha = rat(1, 2);
        let m = sphere_f_alpha(&alpha);
        assert_eq!(m.field().entry(0, 0, 0).to_string(), "(2*x)/(2*z)^2");
        let v = m.chart().variety().clone();
        let d12 = VectorField::parse(&v, "y*d/dx - x*d/dy").unwrap();
        let one = m.pure_a(0, &v.element("1").unwrap());
        assert!(field_act(&d12, &one, &m).is_zero());
        let xd23 = VectorField::parse(&v, "x*z*d/dy - x*y*d/dz").unwrap();
        let r = field_act(&xd23, &m.pure_a(0, &v.element("y").unwrap()), &m);
        assert_eq!(r, m.pure_a(0, &v.element("x*z").unwrap()));
        let zero = sphere_f_alpha(&int(0));
        assert!(zero.field().is_zero());
    }

    #[test]
    fn sphere_chart_free_formula_agrees() {
        for alpha in [int(0), int(1), rat(1, 2), int(-1)] {
            let m = sphere_f_alpha(&alpha);
            let v = m.chart().variety().clone();
            let deltas = [(0, 1), (1, 2), (2, 0)].map(|(i, j)| {
                let mut c = vec![QuotientElement::zero(v.ideal()); 3];
                c[i] = v.var(j);
                c[j] = -&v.var(i);
                VectorField::new(&v, c).unwrap()
            });
            for (f, g) in [("x*y", "z"), ("1 + z^2", "x*y*z"), ("y", "x^2 - 3*y")] {
                let (f, g) = (v.element(f).unwrap(), v.element(g).unwrap());
                for d in &deltas {
                    let lhs = field_act(&d.mul_a(&f), &m.pure_a(0, &g), &m);
                    assert_eq!(lhs, m.pure_a(0, &sphere_chart_free(&f, d, &g, &alpha)));
                }
            }
        }
    }

    #[test]
    fn corrupted_field_fails_axiom_iii() {
        let m = sphere_f_alpha(&int(1));
        let chart = m.chart().clone();
        let mut b = vec![m.field().entry(0, 0, 0).clone(), m.field().entry(1, 0, 0).clone()];
        b[0] = &b[0] + &chart.parse_local("y").unwrap();
        match GaugeModule::new(&chart, m.u().clone(), GaugeField::scalar(b)) {
            Err(Error::GaugeAxiom { axiom, witness }) => {
                assert_eq!(axiom, "iii");
                assert!(witness.contains("entry"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_scalar_field_fails_axiom_ii() {
        let (_, c) = line();
        let u = gl_family(&GlKind::Sym { d: 0 }, 1).unwrap();
        let b = GaugeField::zero(c.localization(), 1, 1);
        assert!(GaugeModule::new(&c, u, b).is_ok());
        // on the natural module of gl_2 over 𝔸², a non-scalar B breaks (ii)
        let a2 = Variety::affine_space(&["x", "y"]);
        let c2 = standard_atlas(&a2).remove(0);
        let u2 = gl_family(&GlKind::Natural, 2).unwrap();
        let mut b2 = GaugeField::zero(c2.localization(), 2, 2);
        b2.matrices[0][0][1] = c2.one();
        assert!(matches!(GaugeModule::new(&c2, u2, b2), Err(Error::GaugeAxiom { axiom: "ii", .. })));
    }

    #[test]
    fn integer_alpha_submodules_are_closed() {
        for alpha in -2..=2 {
            assert_eq!(sphere_submodule_closed(alpha, 3), Ok(()), "alpha = {alpha}");
        }
    }

    #[test]
    fn chart_transition_intertwines() {
        let v = Variety::sphere();
        let fields = [
            VectorField::parse(&v, "y*d/dx - x*d/dy").unwrap(),
            VectorField::parse(&v, "x*z*d/dy - x*y*d/dz").unwrap(),
            VectorField::parse(&v, "y*x*d/dz - y*z*d/dx").unwrap(),
        ];
        let funcs = ["1", "x*y", "y + z^2"].map(|s| v.element(s).unwrap());
        let samples: Vec<_> = fields.iter().flat_map(|f| funcs.iter().map(move |g| (f.clone(), g.clone()))).collect();
        for alpha in -2..=2 {
            assert_eq!(sphere_transition_check(alpha, &samples), Ok(()), "alpha = {alpha}");
        }
    }

    #[test]
    fn circle_formulas() {
        let f = circle_family(&rat(1, 2), 5);
        assert_eq!(f.e(0, 3).unwrap(), (int(3), 3));
        assert_eq!(f.t(1, 3).unwrap(), 4);
        assert_eq!(f.e(2, 4), Err(Error::WindowOverflow { index: 6, window: 5 }));
        let zero = circle_family(&int(0), 5);
        assert_eq!(zero.e(3, 0).unwrap().0, int(0));
    }

    #[test]
    fn circle_duals() {
        for a in [int(0), int(1), rat(1, 2)] {
            assert!(circle_dual_check(&a, 5, DualMap::Standard).pass);
            let bad = circle_dual_check(&a, 5, DualMap::Perturbed);
            assert!(!bad.pass && bad.witness.is_some());
        }
    }

    #[test]
    fn circle_as_gauge_module() {
        for alpha in [int(0), int(1), rat(1, 2)] {
            let m = circle_gauge_module(&alpha);
            let c = m.chart().clone();
            let fam = circle_family(&alpha, 5);
            for k in -5..=5i64 {
                for s in -5..=5i64 {
                    let r = gauge_act(&circle_e(&c, k), &m.pure(0, laurent_monomial(&c, s)), &m);
                    if let Ok((coeff, idx)) = fam.e(k, s) {
                        assert_eq!(r, m.pure(0, laurent_monomial(&c, idx).scale(&coeff)), "k={k} s={s}");
                    }
                }
            }
        }
    }

    #[test]
    fn density_operator_examples() {
        let a2 = Variety::affine_space(&["x", "y"]);
        let c = standard_atlas(&a2).remove(0);
        let m = GaugeModule::new(&c, gl_family(&GlKind::Natural, 2).unwrap(), GaugeField::zero(c.localization(), 2, 2)).unwrap();
        let v = m.pure_a(1, &a2.element("x*y + 1").unwrap());
        let out = density_operator(&m, 0, 1, &v).unwrap();
        assert_eq!(out, m.pure_a(0, &a2.element("x*y + 1").unwrap()));
        assert_eq!(out, density_closed_form(&m, 0, 1, &v));
        assert!(density_operator(&m, 0, 1, &m.zero()).unwrap().is_zero());
        let s = sphere_f_alpha(&int(1));
        let w = s.pure_a(0, &s.chart().variety().element("x + y*z").unwrap());
        assert!(density_operator(&s, 0, 1, &w).unwrap().is_zero());
        let diag = density_operator(&s, 1, 1, &w).unwrap();
        assert_eq!(diag, function_act(&s.chart().local(s.chart().h()), &w));
    }

    #[test]
    fn density_sweep_examples() {
        let (v, c) = line();
        let p = Point::parse(&v, &["0"]).unwrap();
        let m = tensor_module(&c, &int(2));
        let out = density_sweep(&m, &m.pure_a(0, &v.element("1").unwrap()), &p, 10_000).unwrap();
        assert!(matches!(out, SweepOutcome::Reached { n: 0, .. }));

        let s = sphere_f_alpha(&int(1));
        let north = Point::parse(s.chart().variety(), &["0", "0", "1"]).unwrap();
        let z = s.pure_a(0, &s.chart().variety().element("z").unwrap());
        assert!(density_sweep(&s, &z, &north, 10_000).unwrap().reached());
        // vanishes at the north pole: needs derivative steps
        let xy = s.pure_a(0, &s.chart().variety().element("x*y").unwrap());
        match density_sweep(&s, &xy, &north, 10_000).unwrap() {
            SweepOutcome::Reached { derivative_steps, f_at_point, .. } => {
                assert_eq!(derivative_steps, 2);
                assert_ne!(f_at_point, "0");
            }
            other => panic!("{other:?}"),
        }
        assert!(!density_sweep(&s, &xy, &north, 2).unwrap().reached());

        let a1 = Variety::affine_space(&["t"]);
        let c1 = standard_atlas(&a1).remove(0);
        let nat = GaugeModule::new(&c1, gl_family(&GlKind::Natural, 1).unwrap(), GaugeField::zero(c1.localization(), 1, 1)).unwrap();
        let e = nat.pure_a(0, &a1.element("t^3 - t").unwrap());
        assert!(density_sweep(&nat, &e, &p, 10_000).unwrap().reached());
    }

    #[test]
    fn sweep_on_a_natural_module() {
        let a2 = Variety::affine_space(&["x", "y"]);
        let c = standard_atlas(&a2).remove(0);
        let m = GaugeModule::new(&c, gl_family(&GlKind::Natural, 2).unwrap(), GaugeField::zero(c.localization(), 2, 2)).unwrap();
        let p = Point::parse(&a2, &["0", "0"]).unwrap();
        let v = m.parse_element(&["x", "y^2"]).unwrap();
        match density_sweep(&m, &v, &p, 10_000).unwrap() {
            SweepOutcome::Reached { witnesses, .. } => assert_eq!(witnesses.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    mod laws {
        use super::*;
        use proptest::prelude::*;

        fn small_poly(v: &Arc<Variety>) -> impl Strategy<Value = QuotientElement> {
            let v = v.clone();
            prop::collection::vec((0u32..3, 0u32..3, 0u32..3, -3i64..4), 0..4).prop_map(move |ts| {
                let p = crate::exactpoly::Polynomial::from_terms(
                    v.ring(),
                    ts.into_iter().map(|(a, b, c, k)| (Monomial::new(vec![a, b, c]), int(k))),
                );
                QuotientElement::new(v.ideal(), &p)
            })
        }

        fn sphere_field(v: &Arc<Variety>) -> impl Strategy<Value = VectorField> {
            let v = v.clone();
            (small_poly(&v), small_poly(&v), small_poly(&v)).prop_map(move |(a, b, c)| {
                let d = |i, j| delta_field_local(&v, i, j);
                d(0, 1).mul_a(&a).checked_add(&d(1, 2).mul_a(&b)).unwrap().checked_add(&d(2, 0).mul_a(&c)).unwrap()
            })
        }

        fn delta_field_local(v: &Arc<Variety>, i: usize, j: usize) -> VectorField {
            crate::vfields::delta_field(v, i, j).unwrap()
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]
            #[test]
            fn lie_action_law(a in sphere_field(&Variety::sphere()), b in sphere_field(&Variety::sphere()), g in small_poly(&Variety::sphere())) {
                let m = sphere_f_alpha(&rat(1, 3));
                let (a, b) = (rebase(&a, &m), rebase(&b, &m));
                let g = QuotientElement::new(m.chart().variety().ideal(), &g.rep().with_ring(m.chart().variety().ring()));
                let el = m.pure_a(0, &g);
                let lhs = field_act(&a.bracket(&b).unwrap(), &el, &m);
                let rhs = field_act(&a, &field_act(&b, &el, &m), &m).sub(&field_act(&b, &field_act(&a, &el, &m), &m));
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn function_compatibility(a in sphere_field(&Variety::sphere()), f in small_poly(&Variety::sphere()), g in small_poly(&Variety::sphere())) {
                let m = sphere_f_alpha(&rat(-2, 5));
                let v = m.chart().variety().clone();
                let a = rebase(&a, &m);
                let f = QuotientElement::new(v.ideal(), &f.rep().with_ring(v.ring()));
                let g = QuotientElement::new(v.ideal(), &g.rep().with_ring(v.ring()));
                let el = m.pure_a(0, &g);
                // η·(f v) = η(f) v + f η·v
                let lhs2 = field_act(&a, &function_act(&m.chart().local(&f), &el), &m);
                let rhs2 = function_act(&m.chart().local(&a.apply(&f)), &el).add(&function_act(&m.chart().local(&f), &field_act(&a, &el, &m)));
                prop_assert_eq!(lhs2, rhs2);
            }
        }

        /// Strategies build on a fresh sphere; move the field onto the module's.
        fn rebase(a: &VectorField, m: &GaugeModule) -> VectorField {
            let v = m.chart().variety();
            let c = a.coeffs().iter().map(|q| QuotientElement::new(v.ideal(), &q.rep().with_ring(v.ring()))).collect();
            VectorField::new(v, c).unwrap()
        }
    }
}
