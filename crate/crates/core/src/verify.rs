//! Seeded verification suites. Every check yields a [`Record`]; reports are
//! sorted by record name so identical inputs give identical output.

use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{int, rat, Monomial, PolyRing, Polynomial, Rational};
use crate::gauge::{
    circle_dual_check, circle_e, circle_family, circle_gauge_module, density_closed_form, density_operator, density_sweep,
    field_act, function_act, gauge_act, laurent_monomial, sphere_chart_free, sphere_f_alpha, tensor_module, DualMap, GaugeElement,
    GaugeField, GaugeModule,
};
use crate::groebner::QuotientElement;
use crate::jets::{embed_field, JetField, PointJets};
use crate::pairing::{random_covector, random_rewrite, random_word, PairingContext};
use crate::repn::{dualize, gl_family, level_two_line, FiniteModule, GlKind, LPlusBasis};
use crate::rudakov::{
    filtration_checks, random_element, random_filtered_field, reduction_extract, rud_act_a, rud_act_chart_field,
    rud_act_chart_field_at, rud_act_field, RudElement, RudakovContext,
};
use crate::variety::{chart_by_minor, standard_atlas, Point, Variety};
use crate::vfields::{centred_params, delta_field, is_vector_field, truncated_lift, ChartField, VectorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub name: String,
    /// The identity or statement being checked.
    pub anchor: String,
    pub status: Status,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Record {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, samples: usize, failure: Option<String>) -> Record {
        let status = if failure.is_some() { Status::Fail } else { Status::Pass };
        Record { name: name.into(), anchor: anchor.into(), status, samples, witness: failure }
    }

    /// A negative control: passes when the corruption is detected, and
    /// keeps the detection witness either way.
    pub fn control(name: impl Into<String>, anchor: impl Into<String>, detected: Option<String>) -> Record {
        match detected {
            Some(w) => Record { name: name.into(), anchor: anchor.into(), status: Status::Pass, samples: 1, witness: Some(w) },
            None => Record {
                name: name.into(),
                anchor: anchor.into(),
                status: Status::Fail,
                samples: 1,
                witness: Some("corruption went undetected".into()),
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub engine: String,
    pub seed: u64,
    pub records: Vec<Record>,
    /// Command-specific results, e.g. the exact output of an action.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
}

impl Report {
    pub fn new(seed: u64) -> Report {
        Report { engine: format!("avmod {}", env!("CARGO_PKG_VERSION")), seed, records: Vec::new(), data: None }
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = Record>) {
        self.records.extend(records);
        self.records.sort_by(|a, b| a.name.cmp(&b.name));
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.passed())
    }

    /// Inconclusive records are not failures.
    pub fn has_failures(&self) -> bool {
        self.records.iter().any(|r| r.status == Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.passed())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} (seed {})\n", self.engine, self.seed);
        for r in &self.records {
            let status = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Inconclusive => "INCONCLUSIVE",
            };
            out.push_str(&format!("{status:<5} {} [{} samples]  {}\n", r.name, r.samples, r.anchor));
            if let Some(w) = &r.witness {
                out.push_str(&format!("      {w}\n"));
            }
        }
        if let Some(serde_json::Value::Object(map)) = &self.data {
            for (k, v) in map {
                match v {
                    serde_json::Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                    other => out.push_str(&format!("{k}: {other}\n")),
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: usize,
    /// Degree bound for random polynomial coefficients.
    pub max_degree: u32,
    /// Level bound for random Rudakov elements.
    pub depth: u32,
    /// Operation budget per density sweep.
    pub budget: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 1, samples: 25, max_degree: 3, depth: 3, budget: 10_000 }
    }
}

impl SuiteConfig {
    /// A generator seeded by the config seed and the suite name, so suites
    /// do not depend on each other's consumption.
    pub fn rng(&self, name: &str) -> ChaCha8Rng {
        let h = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
        ChaCha8Rng::seed_from_u64(self.seed ^ h)
    }
}

/// Runs `n` samples, stopping at the first failure; errors count as failures.
fn sampled(n: usize, mut f: impl FnMut(usize) -> Result<Option<String>>) -> (usize, Option<String>) {
    for i in 0..n {
        match f(i) {
            Ok(None) => {}
            Ok(Some(w)) => return (i + 1, Some(w)),
            Err(e) => return (i + 1, Some(format!("error: {e}"))),
        }
    }
    (n, None)
}

fn record(name: String, anchor: &str, (n, failure): (usize, Option<String>)) -> Record {
    Record::new(name, anchor, n, failure)
}

fn check(ok: bool, witness: impl FnOnce() -> String) -> Option<String> {
    if ok {
        None
    } else {
        Some(witness())
    }
}

// ---------------------------------------------------------------------------
// random data

pub fn random_poly(v: &Arc<Variety>, max_degree: u32, rng: &mut impl Rng) -> QuotientElement {
    let monos = Monomial::all_up_to_degree(v.ambient_dim(), max_degree);
    let n = rng.gen_range(1..=3);
    let terms: Vec<(Monomial, Rational)> =
        (0..n).map(|_| (monos[rng.gen_range(0..monos.len())].clone(), int(rng.gen_range(-3..=3)))).collect();
    QuotientElement::new(v.ideal(), &Polynomial::from_terms(v.ring(), terms))
}

/// A random element of `𝒟`: arbitrary coefficients on affine space, and
/// `Σ r_ij Δ_ij` on a hypersurface.
pub fn random_field(v: &Arc<Variety>, max_degree: u32, rng: &mut impl Rng) -> VectorField {
    let n = v.ambient_dim();
    if v.rank() == 0 {
        let coeffs = (0..n).map(|_| random_poly(v, max_degree, rng)).collect();
        return VectorField::new(v, coeffs).expect("every tuple is a field on affine space");
    }
    let mut acc = VectorField::zero(v);
    for i in 0..n {
        for j in (i + 1)..n {
            let c = random_poly(v, max_degree.saturating_sub(1), rng);
            acc = acc.checked_add(&delta_field(v, i, j).expect("hypersurface").mul_a(&c)).unwrap();
        }
    }
    acc
}

pub fn random_gauge_element(m: &GaugeModule, max_degree: u32, rng: &mut impl Rng) -> GaugeElement {
    let v = m.chart().variety().clone();
    (0..m.dim()).fold(m.zero(), |acc, k| acc.add(&m.pure_a(k, &random_poly(&v, max_degree, rng))))
}

// ---------------------------------------------------------------------------
// suites

/// Sphere structure: Jacobian, atlas, dimension and the relation among the Δ's.
pub fn structure_suite() -> Vec<Record> {
    let v = Variety::sphere();
    let j: Vec<String> = v.jacobian()[0].iter().map(|e| e.to_string()).collect();
    let atlas = standard_atlas(&v);
    let half = rat(1, 2);
    let d = |i, k| delta_field(&v, i, k).unwrap().scale(&half);
    let rel = d(1, 2).mul_a(&v.var(0)).checked_add(&d(2, 0).mul_a(&v.var(1))).unwrap().checked_add(&d(0, 1).mul_a(&v.var(2))).unwrap();
    let minors: Vec<String> = atlas.iter().map(|c| c.h().to_string()).collect();
    vec![
        Record::new("structure.sphere.jacobian", "J = (2x, 2y, 2z)", 1, check(j == ["2*x", "2*y", "2*z"], || format!("J = {j:?}"))),
        Record::new(
            "structure.sphere.atlas",
            "three charts N(2x), N(2y), N(2z), s = 2",
            1,
            check(atlas.len() == 3 && v.dim() == 2 && atlas.iter().all(|c| c.dim() == 2), || format!("minors {minors:?}, s = {}", v.dim())),
        ),
        Record::new("structure.sphere.relation", "x₁Δ₂₃+x₂Δ₃₁+x₃Δ₁₂=0", 1, check(rel.is_zero(), || format!("combination = {rel}"))),
    ]
}

/// Jacobi, closure, Leibniz and the `A`-module law for brackets.
pub fn lie_suite(name: &str, v: &Arc<Variety>, cfg: &SuiteConfig) -> Vec<Record> {
    let mut rng = cfg.rng(&format!("lie.{name}"));
    let d = cfg.max_degree;
    let mut out = Vec::new();
    let jac = sampled(cfg.samples, |_| {
        let (a, b, c) = (random_field(v, d, &mut rng), random_field(v, d, &mut rng), random_field(v, d, &mut rng));
        let s = a.bracket(&b.bracket(&c)?)?.checked_add(&b.bracket(&c.bracket(&a)?)?)?.checked_add(&c.bracket(&a.bracket(&b)?)?)?;
        Ok(check(s.is_zero(), || format!("a = {a}, b = {b}, c = {c}: cyclic sum {s}")))
    });
    out.push(record(format!("lie.{name}.jacobi"), "[a,[b,c]] + [b,[c,a]] + [c,[a,b]] = 0", jac));
    let clo = sampled(cfg.samples, |_| {
        let (a, b) = (random_field(v, d, &mut rng), random_field(v, d, &mut rng));
        let ab = a.bracket(&b)?;
        Ok(check(is_vector_field(ab.coeffs(), v), || format!("[{a}, {b}] = {ab} leaves ker J")))
    });
    out.push(record(format!("lie.{name}.closure"), "J·[a,b] = 0 in A", clo));
    let lei = sampled(cfg.samples, |_| {
        let a = random_field(v, d, &mut rng);
        let (f, g) = (random_poly(v, d, &mut rng), random_poly(v, d, &mut rng));
        let lhs = a.apply(&(&f * &g));
        let rhs = &(&a.apply(&f) * &g) + &(&f * &a.apply(&g));
        Ok(check(lhs == rhs, || format!("{a} on f = {f}, g = {g}")))
    });
    out.push(record(format!("lie.{name}.leibniz"), "a(fg) = a(f)g + f a(g)", lei));
    let am = sampled(cfg.samples, |_| {
        let (a, b) = (random_field(v, d, &mut rng), random_field(v, d, &mut rng));
        let f = random_poly(v, d, &mut rng);
        let lhs = a.bracket(&b.mul_a(&f))?;
        let rhs = b.mul_a(&a.apply(&f)).checked_add(&a.bracket(&b)?.mul_a(&f))?;
        Ok(check(lhs == rhs, || format!("a = {a}, b = {b}, f = {f}")))
    });
    out.push(record(format!("lie.{name}.a_module"), "[a, f b] = a(f) b + f [a,b]", am));
    out
}

/// Axioms, the Lie-action law and `A𝒟` compatibility for a gauge module.
pub fn gauge_suite(name: &str, m: &GaugeModule, cfg: &SuiteConfig) -> Vec<Record> {
    let mut rng = cfg.rng(&format!("gauge.{name}"));
    let v = m.chart().variety().clone();
    let d = cfg.max_degree;
    let mut out = Vec::new();
    let ax = m.field().check(m.chart(), m.u()).err().map(|e| e.to_string());
    out.push(Record::new(format!("gauge.{name}.axioms"), "[B_i, rho(L+)] = 0 and dB_j/dt_i - dB_i/dt_j + [B_i, B_j] = 0", 1, ax));
    let law = sampled(cfg.samples, |_| {
        let (a, b) = (random_field(&v, d, &mut rng), random_field(&v, d, &mut rng));
        let el = random_gauge_element(m, d, &mut rng);
        let lhs = field_act(&a.bracket(&b)?, &el, m);
        let rhs = field_act(&a, &field_act(&b, &el, m), m).sub(&field_act(&b, &field_act(&a, &el, m), m));
        Ok(check(lhs == rhs, || format!("a = {a}, b = {b}, v = {el}")))
    });
    out.push(record(format!("gauge.{name}.lie_action"), "[a,b]·v = a·(b·v) - b·(a·v)", law));
    let comp = sampled(cfg.samples, |_| {
        let a = random_field(&v, d, &mut rng);
        let f = m.chart().local(&random_poly(&v, d, &mut rng));
        let el = random_gauge_element(m, d, &mut rng);
        let lhs = field_act(&a, &function_act(&f, &el), m);
        let rhs = function_act(&m.chart().local(&a.apply(f.as_a().unwrap())), &el).add(&function_act(&f, &field_act(&a, &el, m)));
        Ok(check(lhs == rhs, || format!("a = {a}, f = {f}, v = {el}")))
    });
    out.push(record(format!("gauge.{name}.compatibility"), "a·(f v) = a(f) v + f (a·v)", comp));
    out
}

/// The chart-free description of `𝔉_α` on the sphere against the chart action.
pub fn sphere_chart_free_suite(alpha: &Rational, cfg: &SuiteConfig) -> Record {
    let name = format!("gauge.sphere_f[{}].chart_free", crate::exactpoly::fmt_rational(alpha));
    let mut rng = cfg.rng(&name);
    let m = sphere_f_alpha(alpha);
    let v = m.chart().variety().clone();
    let half = rat(1, 2);
    let res = sampled(cfg.samples, |_| {
        let (i, j) = [(0, 1), (1, 2), (2, 0)][rng.gen_range(0..3)];
        let delta = delta_field(&v, i, j)?.scale(&half);
        let (f, g) = (random_poly(&v, cfg.max_degree, &mut rng), random_poly(&v, cfg.max_degree, &mut rng));
        let lhs = field_act(&delta.mul_a(&f), &m.pure_a(0, &g), &m);
        let rhs = m.pure_a(0, &sphere_chart_free(&f, &delta, &g, alpha));
        Ok(check(lhs == rhs, || format!("f = {f}, g = {g}, D{}{}", i + 1, j + 1)))
    });
    record(name, "(fΔ_ij)·(g⊗u_α) = fΔ_ij(g)⊗u_α + αgΔ_ij(f)", res)
}

/// The circle family in Laurent form, its gauge realization, and its dual.
pub fn circle_suite(alpha: &Rational, window: i64) -> Vec<Record> {
    let a = crate::exactpoly::fmt_rational(alpha);
    let fam = circle_family(alpha, window);
    let m = circle_gauge_module(alpha);
    let c = m.chart().clone();
    let mut n = 0;
    let mut failure = None;
    'outer: for k in -window..=window {
        for s in -window..=window {
            let r = gauge_act(&circle_e(&c, k), &m.pure(0, laurent_monomial(&c, s)), &m);
            let expect = int(s) + alpha * int(k);
            n += 1;
            let ok = match fam.e(k, s) {
                Ok((coeff, idx)) => coeff == expect && r == m.pure(0, laurent_monomial(&c, idx).scale(&coeff)),
                Err(Error::WindowOverflow { .. }) => (k + s).abs() > window && r == m.pure(0, laurent_monomial(&c, k + s).scale(&expect)),
                Err(_) => false,
            };
            if !ok {
                failure = Some(format!("e_{k}·v_{s} = {r}"));
                break 'outer;
            }
        }
    }
    let dual = circle_dual_check(alpha, window, DualMap::Standard);
    vec![
        Record::new(format!("circle.f[{a}].action"), "e_k·v_s = (s + alpha k) v_(k+s)", n, failure),
        Record::new(format!("circle.f[{a}].dual"), "F_alpha° ≅ F_(-alpha) via v_s -> dual of v_(-s)", dual.checked, dual.witness.filter(|_| !dual.pass)),
    ]
}

/// Base cases, `t̄_k = −∂/∂y_k`, filtration bounds, the Lie-action law,
/// `A𝒟` compatibility and truncation stability for a Rudakov module.
pub fn rudakov_suite(name: &str, ctx: &RudakovContext, cfg: &SuiteConfig) -> Vec<Record> {
    let mut rng = cfg.rng(&format!("rudakov.{name}"));
    let (s, dim) = (ctx.s(), ctx.u().dim());
    let chart = ctx.chart().clone();
    let v = chart.variety().clone();
    let params = centred_params(&chart, ctx.point());
    let mut out = Vec::new();

    let mut base_fail = None;
    'b: for k in 0..dim {
        for i in 0..s {
            let r = rud_act_chart_field(&ChartField::coordinate(&chart, i, chart.one()), &ctx.generator(k), ctx);
            let want = RudElement::monomial(s, dim, Monomial::var(s, i), k, Rational::one());
            if r.as_ref().ok() != Some(&want) {
                base_fail = Some(format!("d/dt{}·(1⊗u{}) = {r:?}", i + 1, k + 1));
                break 'b;
            }
        }
    }
    out.push(Record::new(format!("rudakov.{name}.base_lowering"), "d/dt_i·(1⊗u) = y_i⊗u", s * dim, base_fail));
    let level = ctx.u().level() as i64;
    let kills = sampled(cfg.samples, |_| {
        let eta = random_filtered_field(ctx, level, &mut rng)?;
        let k = rng.gen_range(0..dim);
        let r = rud_act_field(&eta, &ctx.generator(k), ctx)?;
        Ok(check(r.is_zero(), || format!("{eta} sends 1⊗u{} to {}", k + 1, ctx.display(&r))))
    });
    out.push(record(format!("rudakov.{name}.base_kernel"), "D(level U)·(1⊗U) = 0", kills));
    let tlaw = sampled(cfg.samples, |_| {
        let el = random_element(s, dim, cfg.depth, &mut rng);
        let k = rng.gen_range(0..s);
        let r = rud_act_a(&params[k], &el, ctx)?;
        Ok(check(r == el.t_bar(k), || format!("t{}·({})", k + 1, ctx.display(&el))))
    });
    out.push(record(format!("rudakov.{name}.t_derivative"), "t_k·v = -dv/dy_k", tlaw));

    match filtration_checks(ctx, cfg.depth, (cfg.samples / 5).max(2), &mut rng) {
        Ok(rep) => {
            let w = rep.witness.clone();
            out.push(Record::new(format!("rudakov.{name}.level_drop_m"), "m_p R_l ⊂ R_(l-1)", rep.samples, w.clone().filter(|_| !rep.m_level_drop)));
            out.push(Record::new(format!("rudakov.{name}.level_drop_d"), "D(j) R_l ⊂ R_(l-j)", rep.samples, w.clone().filter(|_| !rep.d_level_drop)));
            out.push(Record::new(format!("rudakov.{name}.nilpotent_m"), "m_p^(l+1) R_l = 0", rep.samples, w.clone().filter(|_| !rep.m_nilpotent)));
            out.push(Record::new(format!("rudakov.{name}.nilpotent_d"), "D(1)-words of length l+1 kill R_l", rep.samples, w.filter(|_| !rep.d_nilpotent)));
        }
        Err(e) => out.push(Record::new(format!("rudakov.{name}.filtration"), "filtration bounds", 0, Some(e.to_string()))),
    }

    let d = cfg.max_degree.min(3);
    let law = sampled(cfg.samples, |_| {
        let (a, b) = (random_field(&v, d, &mut rng), random_field(&v, d, &mut rng));
        let el = random_element(s, dim, cfg.depth.min(3), &mut rng);
        let lhs = rud_act_field(&a.bracket(&b)?, &el, ctx)?;
        let rhs = rud_act_field(&a, &rud_act_field(&b, &el, ctx)?, ctx)?.sub(&rud_act_field(&b, &rud_act_field(&a, &el, ctx)?, ctx)?);
        Ok(check(lhs == rhs, || format!("a = {a}, b = {b}, v = {}", ctx.display(&el))))
    });
    out.push(record(format!("rudakov.{name}.lie_action"), "[a,b]·v = a·(b·v) - b·(a·v)", law));
    let comp = sampled(cfg.samples, |_| {
        let a = random_field(&v, d, &mut rng);
        let f = random_poly(&v, d, &mut rng);
        let el = random_element(s, dim, cfg.depth.min(3), &mut rng);
        let lhs = rud_act_field(&a, &rud_act_a(&f, &el, ctx)?, ctx)?;
        let rhs = rud_act_a(&a.apply(&f), &el, ctx)?.add(&rud_act_a(&f, &rud_act_field(&a, &el, ctx)?, ctx)?);
        Ok(check(lhs == rhs, || format!("a = {a}, f = {f}, v = {}", ctx.display(&el))))
    });
    out.push(record(format!("rudakov.{name}.compatibility"), "a·(f v) = a(f) v + f (a·v)", comp));
    let stab = sampled(cfg.samples, |_| {
        let a = random_field(&v, d, &mut rng).to_chart(&chart);
        let el = random_element(s, dim, cfg.depth, &mut rng);
        let n = ctx.field_order(&el);
        let r = rud_act_chart_field_at(&a, &el, ctx, n)?;
        for extra in [1, 2] {
            if rud_act_chart_field_at(&a, &el, ctx, n + extra)? != r {
                return Ok(Some(format!("order {} differs from {n} for {a}", n + extra)));
            }
        }
        Ok(None)
    });
    out.push(record(format!("rudakov.{name}.truncation"), "results agree at orders N, N+1, N+2", stab));
    out
}

/// Reduction into `1⊗U` from random nonzero elements.
pub fn reduction_suite(name: &str, ctx: &RudakovContext, cfg: &SuiteConfig) -> Record {
    let mut rng = cfg.rng(&format!("reduction.{name}"));
    let res = sampled(cfg.samples, |_| {
        let el = random_element(ctx.s(), ctx.u().dim(), cfg.depth, &mut rng);
        let (_, r) = reduction_extract(&el, ctx)?;
        Ok(check(!r.is_zero() && r.level() == Some(0), || format!("{} reduced to {}", ctx.display(&el), ctx.display(&r))))
    });
    record(format!("reduction.{name}.extract"), "Av ∩ (1⊗U) ≠ (0)", res)
}

/// The commutator form of `h⊗E_ij` and constructive density sweeps.
pub fn density_suite(name: &str, m: &GaugeModule, p: &Point, cfg: &SuiteConfig, sweeps: usize) -> Vec<Record> {
    let mut rng = cfg.rng(&format!("density.{name}"));
    let s = m.chart().dim();
    let closed = sampled(cfg.samples, |_| {
        let (i, j) = (rng.gen_range(0..s), rng.gen_range(0..s));
        let el = random_gauge_element(m, cfg.max_degree, &mut rng);
        let a = density_operator(m, i, j, &el)?;
        Ok(check(a == density_closed_form(m, i, j, &el), || format!("i = {}, j = {}, v = {el}", i + 1, j + 1)))
    });
    let mut out = vec![record(format!("density.{name}.closed_form"), "(t_i h d_j)·v - t_i (h d_j·v) = h ⊗ E_ij v", closed)];
    let sw = sampled(sweeps, |_| {
        let mut el = random_gauge_element(m, cfg.max_degree, &mut rng);
        while el.is_zero() {
            el = random_gauge_element(m, cfg.max_degree, &mut rng);
        }
        let res = density_sweep(m, &el, p, cfg.budget)?;
        Ok(check(res.reached(), || format!("budget {} exhausted on {el}", cfg.budget)))
    });
    out.push(record(format!("density.{name}.sweep"), "h^N f (A⊗U) lies in the submodule generated by v, f(p) ≠ 0", sw));
    out
}

/// Adjointness, well-definedness, fiber factorization and the dual base.
pub fn pairing_suite(name: &str, ctx: &PairingContext, cfg: &SuiteConfig, pairs: usize) -> Vec<Record> {
    let mut rng = cfg.rng(&format!("pairing.{name}"));
    let m = ctx.module();
    let chart = m.chart().clone();
    let v = chart.variety().clone();
    let s = chart.dim();
    let dim = m.dim();
    let d = cfg.max_degree.min(3);
    let mut out = Vec::new();
    let fa = sampled(cfg.samples, |_| {
        let el = random_gauge_element(m, d, &mut rng);
        let f = chart.local(&random_poly(&v, d, &mut rng));
        let r = random_element(s, dim, 2, &mut rng);
        let (a, b) = ctx.adjoint_function(&el, &f, &r)?;
        Ok(check(a == b, || format!("m = {el}, f = {f}, r = {r}: {a} vs {b}")))
    });
    out.push(record(format!("pairing.{name}.adjoint_function"), "<f·m, r> = <m, f·r>", fa));
    let fe = sampled(cfg.samples, |_| {
        let el = random_gauge_element(m, d, &mut rng);
        let eta = random_field(&v, d, &mut rng).to_chart(&chart);
        let r = random_element(s, dim, 2, &mut rng);
        let (a, b) = ctx.adjoint_field(&el, &eta, &r)?;
        Ok(check(a == b, || format!("m = {el}, eta = {eta}, r = {r}: {a} vs {b}")))
    });
    out.push(record(format!("pairing.{name}.adjoint_field"), "<eta·m, r> = -<m, eta·r>", fe));
    let funcs: Vec<_> = (0..4).map(|_| chart.local(&random_poly(&v, 2, &mut rng))).collect();
    let fields: Vec<_> = (0..4).map(|_| random_field(&v, 2, &mut rng).to_chart(&chart)).collect();
    let wd = sampled(pairs, |_| {
        let w = random_word(&funcs, &fields, 3, &mut rng);
        let lhs = vec![(Rational::one(), w, random_covector(dim, &mut rng))];
        let mut rhs = random_rewrite(ctx, &lhs, &mut rng)?;
        if rng.gen_bool(0.5) {
            rhs = random_rewrite(ctx, &rhs, &mut rng)?;
        }
        let el = random_gauge_element(m, d, &mut rng);
        let res = ctx.well_definedness_check(&el, &lhs, &rhs)?;
        if !res.equal_reductions {
            return Err(Error::ReductionMismatch);
        }
        Ok(check(res.pass, || format!("{res:?}")))
    });
    out.push(record(format!("pairing.{name}.well_defined"), "equal reductions w1·(1⊗phi) = w2·(1⊗phi) give equal pairings", wd));
    let params = centred_params(&chart, ctx.point());
    let fact = sampled(cfg.samples, |_| {
        let el = random_gauge_element(m, d, &mut rng);
        let k = rng.gen_range(0..s);
        let extra = function_act(&chart.local(&params[k]), &random_gauge_element(m, d, &mut rng));
        let phi = random_covector(dim, &mut rng);
        let w = crate::pairing::OperatorWord::empty();
        let (a, b) = (ctx.pair_word(&el, &w, &phi)?, ctx.pair_word(&el.add(&extra), &w, &phi)?);
        Ok(check(a == b, || format!("m = {el}, added {extra}")))
    });
    out.push(record(format!("pairing.{name}.factors_through_fiber"), "<m + m_p M, 1⊗phi> = <m, 1⊗phi>", fact));
    let dual = dualize(ctx.fiber().module()).module;
    out.push(Record::new(
        format!("pairing.{name}.dual_base"),
        "the Rudakov base module is the dual of M/m_p M",
        1,
        check(&dual == ctx.rudakov().u(), || "dual mismatch".into()),
    ));
    out
}

/// `(1 − w)^{1/2}` with `w = u1² + u2²`, by the generalized binomial theorem.
fn binomial_half(max_deg: u32) -> Polynomial {
    let r = PolyRing::grevlex(&["u1", "u2"]);
    let w = Polynomial::parse(&r, "u1^2 + u2^2").unwrap();
    let mut acc = Polynomial::zero(&r);
    let mut binom = Rational::one();
    for k in 0..=max_deg / 2 {
        let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
        acc = &acc + &w.pow(k).scale(&(&binom * &sign));
        binom = binom * (rat(1, 2) - int(k as i64)) / int(k as i64 + 1);
    }
    acc
}

/// Newton lifting on the sphere against the binomial series, and truncated
/// lifts against coordinate fields.
pub fn jets_suite() -> Vec<Record> {
    let v = Variety::sphere();
    let c = chart_by_minor(&v, "2*z").unwrap();
    let p = Point::parse(&v, &["0", "0", "1"]).unwrap();
    let mut out = Vec::new();
    let newton = PointJets::new(&c, &p, 6).map(|j| j.coordinate(2).clone());
    let oracle = binomial_half(6);
    let failure = match &newton {
        Ok(z) => {
            let mut bad = None;
            for m in Monomial::all_up_to_degree(2, 6) {
                if z.coeff(&m) != oracle.coeff(&m) {
                    bad = Some(format!("coefficient of {:?}: {} vs {}", m.exponents(), z.coeff(&m), oracle.coeff(&m)));
                    break;
                }
            }
            bad
        }
        Err(e) => Some(e.to_string()),
    };
    out.push(Record::new("jets.sphere.newton_z", "z = (1 - x^2 - y^2)^(1/2) through degree 6", 28, failure));
    let mut failure = None;
    let mut n_checked = 0;
    'n: for n in 0..=4u32 {
        let jets = match PointJets::new(&c, &p, n + 3) {
            Ok(j) => j,
            Err(e) => {
                failure = Some(e.to_string());
                break;
            }
        };
        for i in 0..2 {
            n_checked += 1;
            let eta = truncated_lift(&c, &p, i, n).expect("north pole is in the chart");
            let rest = embed_field(&eta, &jets, n + 3).sub(&JetField::monomial(2, n + 3, Monomial::one(2), i));
            if rest.min_degree().is_some_and(|d| d < n as i64) {
                failure = Some(format!("N = {n}, i = {}: remainder {rest}", i + 1));
                break 'n;
            }
        }
    }
    out.push(Record::new("jets.sphere.truncated_lift", "truncated_lift(N) = d/dX_i + O(deg N+1)", n_checked, failure));
    out
}

/// Corrupted inputs that must be caught.
pub fn negative_suite() -> Vec<Record> {
    let mut out = Vec::new();
    let m = sphere_f_alpha(&int(1));
    let chart = m.chart().clone();
    let b = vec![m.field().entry(0, 0, 0) + &chart.parse_local("y").unwrap(), m.field().entry(1, 0, 0).clone()];
    let detected = match GaugeModule::new(&chart, m.u().clone(), GaugeField::scalar(b)) {
        Err(Error::GaugeAxiom { axiom: "iii", witness }) => Some(witness),
        _ => None,
    };
    out.push(Record::control("negative.corrupted_gauge_field", "axiom (iii) rejects B_x + y", detected));
    let good = level_two_line(&int(1));
    let mut action = good.actions().clone();
    let key = LPlusBasis::new(Monomial::new(vec![1]), 0);
    let mut bad = action[&key].clone();
    bad.set(0, 0, int(3));
    action.insert(key, bad);
    let corrupted = FiniteModule::new(1, 2, 2, action).expect("shape is fine");
    out.push(Record::control("negative.corrupted_rho", "check_homomorphism rejects a broken level-two module", corrupted.homomorphism_witness().map(|w| w.to_string())));
    let d = circle_dual_check(&rat(1, 2), 5, DualMap::Perturbed);
    out.push(Record::control("negative.perturbed_circle_dual", "v_s -> dual of v_s does not intertwine", if d.pass { None } else { d.witness }));
    out
}

// ---------------------------------------------------------------------------
// the standard battery

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Structure,
    Lie,
    Gauge,
    Circle,
    Rudakov,
    Filtration,
    Reduction,
    Density,
    Pairing,
    Jets,
    Negative,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Structure,
        Suite::Lie,
        Suite::Gauge,
        Suite::Circle,
        Suite::Rudakov,
        Suite::Filtration,
        Suite::Reduction,
        Suite::Density,
        Suite::Pairing,
        Suite::Jets,
        Suite::Negative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Structure => "structure",
            Suite::Lie => "lie",
            Suite::Gauge => "gauge",
            Suite::Circle => "circle",
            Suite::Rudakov => "rudakov",
            Suite::Filtration => "filtration",
            Suite::Reduction => "reduction",
            Suite::Density => "density",
            Suite::Pairing => "pairing",
            Suite::Jets => "jets",
            Suite::Negative => "negative",
        }
    }

    /// Parses a suite name; `all` expands to every suite.
    pub fn parse_list(name: &str) -> Result<Vec<Suite>> {
        if name == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Suite::ALL
            .iter()
            .copied()
            .find(|s| s.name() == name)
            .map(|s| vec![s])
            .ok_or_else(|| Error::Input(format!("unknown suite `{name}`")))
    }
}

/// The α values exercised by the gauge suite.
pub fn gauge_alphas() -> Vec<Rational> {
    vec![int(0), int(1), rat(1, 2), int(-1)]
}

pub fn affine_line_chart() -> Arc<crate::variety::Chart> {
    standard_atlas(&Variety::affine_space(&["t"])).remove(0)
}

/// `A⊗U` on the affine line with `U = one_dim(α)` and `B = 0`.
pub fn affine_line_module(alpha: &Rational) -> GaugeModule {
    tensor_module(&affine_line_chart(), alpha)
}

/// `A⊗U` on `𝔸^s` with the natural `gl_s` module and `B = 0`.
pub fn affine_natural_module(s: usize) -> GaugeModule {
    let names: Vec<String> = (1..=s).map(|i| format!("t{i}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let chart = standard_atlas(&Variety::affine_space(&names)).remove(0);
    let u = gl_family(&GlKind::Natural, s).expect("s > 0");
    GaugeModule::new(&chart, u, GaugeField::zero(chart.localization(), s, s)).expect("B = 0 is a gauge field")
}

pub fn north_pole() -> Point {
    Point::parse(&Variety::sphere(), &["0", "0", "1"]).expect("on the sphere")
}

pub fn origin(v: &Arc<Variety>) -> Point {
    Point::new(v, vec![Rational::zero(); v.ambient_dim()]).expect("origin")
}

fn err_record(name: String, e: Error) -> Record {
    Record::new(name, "fixture construction", 0, Some(e.to_string()))
}

/// Runs one suite over the standard fixtures.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Vec<Record> {
    let mut out = Vec::new();
    match suite {
        Suite::Structure => out.extend(structure_suite()),
        Suite::Lie => {
            for (name, v) in [
                ("sphere", Variety::sphere()),
                ("circle", Variety::circle()),
                ("a1", Variety::affine_space(&["t"])),
                ("a2", Variety::affine_space(&["t1", "t2"])),
            ] {
                out.extend(lie_suite(name, &v, cfg));
            }
        }
        Suite::Gauge => {
            for a in gauge_alphas() {
                let a_str = crate::exactpoly::fmt_rational(&a);
                out.extend(gauge_suite(&format!("a1[{a_str}]"), &affine_line_module(&a), cfg));
                out.extend(gauge_suite(&format!("sphere_f[{a_str}]"), &sphere_f_alpha(&a), cfg));
                out.push(sphere_chart_free_suite(&a, cfg));
            }
        }
        Suite::Circle => {
            for a in [int(0), int(1), rat(1, 2)] {
                out.extend(circle_suite(&a, 5));
            }
        }
        Suite::Rudakov | Suite::Filtration => {
            let line = affine_line_chart();
            let sphere = chart_by_minor(&Variety::sphere(), "2*z").expect("chart N(2z)");
            let fixtures = [
                ("a1[level2]", RudakovContext::new(&line, &origin(line.variety()), level_two_line(&rat(1, 2)))),
                ("sphere[natural]", RudakovContext::new(&sphere, &north_pole(), gl_family(&GlKind::Natural, 2).expect("s = 2"))),
            ];
            for (name, ctx) in fixtures {
                match ctx {
                    Ok(ctx) => {
                        let recs = rudakov_suite(name, &ctx, cfg);
                        if suite == Suite::Filtration {
                            out.extend(recs.into_iter().filter(|r| r.name.contains(".level_drop") || r.name.contains(".nilpotent")));
                        } else {
                            out.extend(recs);
                        }
                    }
                    Err(e) => out.push(err_record(format!("rudakov.{name}"), e)),
                }
            }
        }
        Suite::Reduction => {
            let line = affine_line_chart();
            let sphere = chart_by_minor(&Variety::sphere(), "2*z").expect("chart N(2z)");
            let fixtures = [
                ("a1[level2]", RudakovContext::new(&line, &origin(line.variety()), level_two_line(&rat(1, 2)))),
                ("sphere[natural]", RudakovContext::new(&sphere, &north_pole(), gl_family(&GlKind::Natural, 2).expect("s = 2"))),
            ];
            for (name, ctx) in fixtures {
                match ctx {
                    Ok(ctx) => out.push(reduction_suite(name, &ctx, cfg)),
                    Err(e) => out.push(err_record(format!("reduction.{name}"), e)),
                }
            }
        }
        Suite::Density => {
            let sweeps = (cfg.samples / 5).max(1);
            for a in [int(0), int(1)] {
                let m = sphere_f_alpha(&a);
                out.extend(density_suite(&format!("sphere_f[{}]", crate::exactpoly::fmt_rational(&a)), &m, &north_pole(), cfg, sweeps));
            }
            let m = affine_natural_module(1);
            out.extend(density_suite("a1[natural]", &m, &origin(m.chart().variety()), cfg, sweeps));
        }
        Suite::Pairing => {
            let pairs = cfg.samples;
            for a in [rat(1, 2), int(-1)] {
                let a_str = crate::exactpoly::fmt_rational(&a);
                let m = affine_line_module(&a);
                match PairingContext::new(&m, &origin(m.chart().variety())) {
                    Ok(ctx) => out.extend(pairing_suite(&format!("a1[{a_str}]"), &ctx, cfg, pairs)),
                    Err(e) => out.push(err_record(format!("pairing.a1[{a_str}]"), e)),
                }
                let m = sphere_f_alpha(&a);
                match PairingContext::new(&m, &north_pole()) {
                    Ok(ctx) => out.extend(pairing_suite(&format!("sphere_f[{a_str}]"), &ctx, cfg, pairs)),
                    Err(e) => out.push(err_record(format!("pairing.sphere_f[{a_str}]"), e)),
                }
            }
        }
        Suite::Jets => out.extend(jets_suite()),
        Suite::Negative => out.extend(negative_suite()),
    }
    out
}

/// Runs several suites into a single sorted report.
pub fn run(suites: &[Suite], cfg: &SuiteConfig) -> Report {
    let mut report = Report::new(cfg.seed);
    let mut seen = std::collections::BTreeSet::new();
    for &s in suites {
        // the filtration records are part of the Rudakov suite
        let s = if s == Suite::Filtration && suites.contains(&Suite::Rudakov) { Suite::Rudakov } else { s };
        if seen.insert(s) {
            report.extend(run_suite(s, cfg));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_are_sorted_and_deterministic() {
        let cfg = SuiteConfig { samples: 3, ..Default::default() };
        let v = Variety::affine_space(&["x", "y"]);
        let mut a = Report::new(cfg.seed);
        a.extend(lie_suite("a2", &v, &cfg));
        a.extend(structure_suite());
        let mut b = Report::new(cfg.seed);
        b.extend(structure_suite());
        b.extend(lie_suite("a2", &v, &cfg));
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.records.windows(2).all(|w| w[0].name <= w[1].name));
        assert!(a.all_pass(), "{}", a.to_text());
    }

    #[test]
    fn small_suites_pass() {
        let mut r = Report::new(0);
        r.extend(negative_suite());
        r.extend(jets_suite());
        r.extend(circle_suite(&rat(1, 2), 3));
        assert!(r.all_pass(), "{}", r.to_text());
        assert!(r.records.iter().filter(|x| x.name.starts_with("negative")).all(|x| x.witness.is_some()));
    }
}
