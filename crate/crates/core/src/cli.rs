//! The batch front-end: problem files, the built-in catalog, and the
//! commands behind the `avmod` binary.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactpoly::{fmt_rational, parse_rational, MonomialOrder, OrderKind};
use crate::gauge::{density_sweep, field_act, function_act, gauge_act, sphere_f_alpha_on, GaugeField, GaugeModule, SweepOutcome};
use crate::pairing::{Letter, OperatorWord, PairingContext};
use crate::repn::{gl_family, FiniteModule, GlKind, ModuleSpec};
use crate::rudakov::{
    reduction_extract, rud_act_chart_field, rud_act_field, rud_act_function, simplicity_probe, RudElement, RudakovContext,
};
use crate::variety::{chart_by_minor, local_parameter_check, standard_atlas, Chart, Point, Variety};
use crate::verify::{self, Record, Report, Status, Suite, SuiteConfig};
use crate::vfields::{ChartField, VectorField};

// ---------------------------------------------------------------------------
// problem files

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub variety: VarietySpec,
    /// Named points, coordinates as rational strings.
    #[serde(default)]
    pub points: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub modules: Vec<ModuleDecl>,
    #[serde(default)]
    pub suites: Vec<String>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub max_degree: Option<u32>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub depth: Option<u32>,
    #[serde(default)]
    pub budget: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarietySpec {
    pub variables: Vec<String>,
    #[serde(default)]
    pub generators: Vec<String>,
    /// `grevlex` (default) or `lex`.
    #[serde(default)]
    pub order: Option<String>,
    /// Variables from most to least significant; defaults to declaration order.
    #[serde(default)]
    pub priority: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UDecl {
    Family(GlKind),
    Raw(ModuleSpec),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// `B = 0`.
    Tensor,
    /// The sphere family `𝔉_α`; needs `alpha`.
    SphereFAlpha,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDecl {
    pub id: String,
    /// The chart minor, e.g. `2*z`; defaults to the first chart of the atlas.
    #[serde(default)]
    pub chart: Option<String>,
    #[serde(default)]
    pub u: Option<UDecl>,
    /// `b[i][m][k]` is the `(m, k)` entry of `B_i`, a fraction over the chart's `h`.
    #[serde(default)]
    pub b: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default)]
    pub preset: Option<Preset>,
    #[serde(default)]
    pub alpha: Option<String>,
}

/// A problem file with every name resolved.
#[derive(Debug)]
pub struct Problem {
    pub spec: ProblemFile,
    pub variety: Arc<Variety>,
    pub points: BTreeMap<String, Point>,
    pub modules: BTreeMap<String, GaugeModule>,
}

pub const CATALOG: [(&str, &str); 3] = [
    ("line", include_str!("../problems/line.json")),
    ("circle", include_str!("../problems/circle.json")),
    ("sphere", include_str!("../problems/sphere.json")),
];

pub fn catalog(name: &str) -> Result<&'static str> {
    CATALOG
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| Error::Input(format!("no built-in example `{name}` (have line, circle, sphere)")))
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<ProblemFile> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("line {} column {}: {e}", e.line(), e.column())))
    }
}

fn context<T>(what: impl FnOnce() -> String, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Input(m) => Error::Input(format!("{}: {m}", what())),
        other => Error::Input(format!("{}: {other}", what())),
    })
}

impl Problem {
    pub fn build(spec: ProblemFile) -> Result<Problem> {
        let vs = &spec.variety;
        let names: Vec<&str> = vs.variables.iter().map(String::as_str).collect();
        let n = names.len();
        let priority = match &vs.priority {
            None => (0..n).collect(),
            Some(p) => {
                let idx: Vec<usize> = p
                    .iter()
                    .map(|v| names.iter().position(|x| x == v).ok_or_else(|| Error::Input(format!("variety.priority: unknown variable `{v}`"))))
                    .collect::<Result<_>>()?;
                let mut sorted = idx.clone();
                sorted.sort_unstable();
                if sorted != (0..n).collect::<Vec<_>>() {
                    return Err(Error::Input("variety.priority must list every variable once".into()));
                }
                idx
            }
        };
        let kind = match vs.order.as_deref() {
            None | Some("grevlex") => OrderKind::Grevlex,
            Some("lex") => OrderKind::Lex,
            Some(o) => return Err(Error::Input(format!("variety.order: unknown order `{o}`"))),
        };
        let gens: Vec<&str> = vs.generators.iter().map(String::as_str).collect();
        let variety = context(|| "variety".into(), Variety::parse(&names, Some(MonomialOrder::new(kind, priority)), &gens))?;

        let mut points = BTreeMap::new();
        for (name, coords) in &spec.points {
            let c: Vec<&str> = coords.iter().map(String::as_str).collect();
            points.insert(name.clone(), context(|| format!("points.{name}"), Point::parse(&variety, &c))?);
        }
        let mut modules = BTreeMap::new();
        for decl in &spec.modules {
            let m = context(|| format!("module `{}`", decl.id), build_module(&variety, decl))?;
            if modules.insert(decl.id.clone(), m).is_some() {
                return Err(Error::Input(format!("module id `{}` is declared twice", decl.id)));
            }
        }
        Ok(Problem { spec, variety, points, modules })
    }

    pub fn config(&self) -> SuiteConfig {
        let d = SuiteConfig::default();
        SuiteConfig {
            seed: self.spec.seed.unwrap_or(d.seed),
            samples: self.spec.samples.unwrap_or(d.samples),
            max_degree: self.spec.max_degree.unwrap_or(d.max_degree),
            depth: self.spec.depth.unwrap_or(d.depth),
            budget: self.spec.budget.unwrap_or(d.budget),
        }
    }

    pub fn module(&self, id: &str) -> Result<&GaugeModule> {
        self.modules.get(id).ok_or_else(|| Error::Input(format!("no module `{id}`")))
    }

    pub fn point(&self, name: &str) -> Result<&Point> {
        self.points.get(name).ok_or_else(|| Error::Input(format!("no point `{name}`")))
    }

    /// The declared points lying in the chart of `m`.
    fn points_in(&self, m: &GaugeModule) -> impl Iterator<Item = (&String, &Point)> {
        let chart = m.chart().clone();
        self.points.iter().filter(move |(_, p)| p.in_chart(&chart))
    }
}

fn build_module(v: &Arc<Variety>, decl: &ModuleDecl) -> Result<GaugeModule> {
    let chart = match &decl.chart {
        Some(minor) => chart_by_minor(v, minor)?,
        None => standard_atlas(v).into_iter().next().ok_or(Error::SingularChart)?,
    };
    let s = chart.dim();
    let alpha = decl.alpha.as_deref().map(parse_rational).transpose()?;
    if decl.preset == Some(Preset::SphereFAlpha) {
        let alpha = alpha.ok_or_else(|| Error::Input("sphere_f_alpha needs alpha".into()))?;
        if decl.u.is_some() || decl.b.is_some() {
            return Err(Error::Input("sphere_f_alpha fixes u and b".into()));
        }
        if v.ambient_dim() != 3 || !v.is_hypersurface() {
            return Err(Error::Input("sphere_f_alpha needs the sphere".into()));
        }
        let names: Vec<&str> = v.ring().names().iter().map(String::as_str).collect();
        let sphere = v.element(&format!("{}^2 + {}^2 + {}^2 - 1", names[0], names[1], names[2]))?;
        if !sphere.is_zero() {
            return Err(Error::Input("sphere_f_alpha needs the sphere".into()));
        }
        return Ok(sphere_f_alpha_on(&chart, &alpha));
    }
    let u = match (&decl.u, &alpha) {
        (Some(UDecl::Family(kind)), _) => gl_family(kind, s)?,
        (Some(UDecl::Raw(spec)), _) => FiniteModule::from_spec(spec)?,
        (None, Some(a)) => gl_family(&GlKind::OneDim { alpha: fmt_rational(a) }, s)?,
        (None, None) => return Err(Error::Input("give u or alpha".into())),
    };
    if let Some(w) = u.homomorphism_witness() {
        return Err(Error::InvalidModule(format!("rho is not a homomorphism: {w}")));
    }
    if u.s() != s {
        return Err(Error::Dimension(format!("U is a module for s = {}, the chart has s = {s}", u.s())));
    }
    let b = match (&decl.b, decl.preset) {
        (Some(_), Some(Preset::Tensor)) => return Err(Error::Input("the tensor preset has B = 0".into())),
        (Some(b), _) => parse_gauge_field(&chart, b, u.dim())?,
        (None, _) => GaugeField::zero(chart.localization(), s, u.dim()),
    };
    GaugeModule::new(&chart, u, b)
}

fn parse_gauge_field(chart: &Arc<Chart>, b: &[Vec<Vec<String>>], d: usize) -> Result<GaugeField> {
    if b.len() != chart.dim() {
        return Err(Error::Dimension(format!("b has {} matrices, the chart has s = {}", b.len(), chart.dim())));
    }
    let mut mats = Vec::new();
    for (i, mat) in b.iter().enumerate() {
        if mat.len() != d || mat.iter().any(|row| row.len() != d) {
            return Err(Error::Dimension(format!("b[{i}] must be {d}×{d}")));
        }
        mats.push(
            mat.iter()
                .map(|row| row.iter().map(|e| chart.parse_local(e)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(GaugeField::new(mats))
}

// ---------------------------------------------------------------------------
// commands

fn split(text: &str) -> Vec<&str> {
    text.split(';').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn labelled<T>(name: &str, r: Result<T>) -> Result<T> {
    context(|| name.to_string(), r)
}

/// The variety, its atlas, and the local-parameter criterion at every point.
pub fn cmd_variety(p: &Problem, seed: u64) -> Result<Report> {
    let mut report = Report::new(seed);
    let mut points = serde_json::Map::new();
    let mut records = Vec::new();
    for (name, pt) in &p.points {
        let chart = pt.default_chart();
        match chart {
            Ok(c) => {
                let ok = local_parameter_check(&c, pt)?;
                records.push(Record::new(
                    format!("variety.point[{name}].local_parameters"),
                    "[(h·dt̄_j/dt_i)(p)] is invertible",
                    1,
                    (!ok).then(|| format!("criterion fails in chart N({})", c.h())),
                ));
                points.insert(name.clone(), serde_json::to_value(c.report(Some(pt))).expect("plain data"));
            }
            Err(_) => records.push(Record {
                name: format!("variety.point[{name}].local_parameters"),
                anchor: "some chart of the standard atlas contains p".into(),
                status: Status::Fail,
                samples: 1,
                witness: Some("every minor vanishes, p is singular".into()),
            }),
        }
    }
    report.extend(records);
    report.data = Some(json!({ "variety": p.variety.report(), "points": points }));
    Ok(report)
}

/// Runs the selected suites over the file's variety, modules and points.
pub fn cmd_verify(p: &Problem, suites: &[Suite], cfg: &SuiteConfig) -> Report {
    let mut report = Report::new(cfg.seed);
    let mut seen = std::collections::BTreeSet::new();
    for &suite in suites {
        // the filtration records are a subset of the Rudakov suite
        let suite = if suite == Suite::Filtration && suites.contains(&Suite::Rudakov) { Suite::Rudakov } else { suite };
        if !seen.insert(suite) {
            continue;
        }
        let mut recs = Vec::new();
        match suite {
            Suite::Lie => recs.extend(verify::lie_suite("file", &p.variety, cfg)),
            Suite::Gauge => {
                for (id, m) in &p.modules {
                    recs.extend(verify::gauge_suite(id, m, cfg));
                }
            }
            Suite::Rudakov | Suite::Filtration | Suite::Reduction => {
                for (id, m) in &p.modules {
                    for (pt, point) in p.points_in(m) {
                        let name = format!("{id}@{pt}");
                        match RudakovContext::new(m.chart(), point, m.u().clone()) {
                            Ok(ctx) if suite == Suite::Reduction => recs.push(verify::reduction_suite(&name, &ctx, cfg)),
                            Ok(ctx) => recs.extend(
                                verify::rudakov_suite(&name, &ctx, cfg)
                                    .into_iter()
                                    .filter(|r| suite == Suite::Rudakov || r.name.contains(".level_drop") || r.name.contains(".nilpotent")),
                            ),
                            Err(e) => recs.push(Record::new(format!("rudakov.{name}"), "fixture construction", 0, Some(e.to_string()))),
                        }
                    }
                }
            }
            Suite::Density => {
                for (id, m) in &p.modules {
                    for (pt, point) in p.points_in(m) {
                        recs.extend(verify::density_suite(&format!("{id}@{pt}"), m, point, cfg, (cfg.samples / 5).max(1)));
                    }
                }
            }
            Suite::Pairing => {
                for (id, m) in &p.modules {
                    for (pt, point) in p.points_in(m) {
                        let name = format!("{id}@{pt}");
                        match PairingContext::new(m, point) {
                            Ok(ctx) => recs.extend(verify::pairing_suite(&name, &ctx, cfg, cfg.samples)),
                            Err(e) => recs.push(Record::new(format!("pairing.{name}"), "fixture construction", 0, Some(e.to_string()))),
                        }
                    }
                }
            }
            // fixture-free suites
            other => recs.extend(verify::run_suite(other, cfg)),
        }
        report.extend(recs);
    }
    report
}

/// The operator of `act`.
#[derive(Clone, Debug)]
pub enum Operator {
    /// Ambient coefficients of a tangent field.
    Field(String),
    /// Coefficients in the chart basis `∂/∂t_i`.
    ChartField(String),
    Function(String),
}

fn parse_chart_field(chart: &Arc<Chart>, text: &str) -> Result<ChartField> {
    let coeffs = text.split(',').map(|c| chart.parse_local(c.trim())).collect::<Result<Vec<_>>>()?;
    ChartField::new(chart, coeffs)
}

fn parse_field(v: &Arc<Variety>, text: &str) -> Result<VectorField> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    VectorField::from_strs(v, &parts)
}

fn describe(op: &Operator) -> String {
    match op {
        Operator::Field(t) => format!("field ({t})"),
        Operator::ChartField(t) => format!("chart field ({t})"),
        Operator::Function(t) => format!("function {t}"),
    }
}

/// One action, either on `A_(h)⊗U` or, with `rudakov = Some(point)`, on
/// `R_p(U)` with `element` written as a polynomial in `y1..ys, u1..ud`.
pub fn cmd_act(p: &Problem, module: &str, element: &str, op: &Operator, rudakov: Option<&str>, seed: u64) -> Result<Report> {
    let m = p.module(module)?;
    let chart = m.chart();
    let mut report = Report::new(seed);
    let (input, result) = match rudakov {
        None => {
            let v = labelled("element", m.parse_element(&split(element)))?;
            let r = match op {
                Operator::Field(t) => field_act(&labelled("field", parse_field(&p.variety, t))?, &v, m),
                Operator::ChartField(t) => gauge_act(&labelled("chart field", parse_chart_field(chart, t))?, &v, m),
                Operator::Function(t) => function_act(&labelled("function", chart.parse_local(t))?, &v),
            };
            let labels = m.u().labels().to_vec();
            (v.display(&labels), r.display(&labels))
        }
        Some(pt) => {
            let ctx = RudakovContext::new(chart, p.point(pt)?, m.u().clone())?;
            let v = labelled("element", RudElement::parse(ctx.s(), m.dim(), element))?;
            let r = match op {
                Operator::Field(t) => rud_act_field(&labelled("field", parse_field(&p.variety, t))?, &v, &ctx)?,
                Operator::ChartField(t) => rud_act_chart_field(&labelled("chart field", parse_chart_field(chart, t))?, &v, &ctx)?,
                Operator::Function(t) => rud_act_function(&labelled("function", chart.parse_local(t))?, &v, &ctx)?,
            };
            (ctx.display(&v), ctx.display(&r))
        }
    };
    report.data = Some(json!({
        "module": module,
        "space": if rudakov.is_some() { "rudakov" } else { "gauge" },
        "operator": describe(op),
        "element": input,
        "result": result,
    }));
    Ok(report)
}

/// `f:<function>` or `d:<c1>,<c2>,…` letters separated by `;`, leftmost
/// acting last.
pub fn parse_word(chart: &Arc<Chart>, text: &str) -> Result<OperatorWord> {
    let mut letters = Vec::new();
    for part in split(text) {
        let letter = if let Some(f) = part.strip_prefix("f:") {
            Letter::Function(chart.parse_local(f.trim())?)
        } else if let Some(d) = part.strip_prefix("d:") {
            Letter::Field(parse_chart_field(chart, d)?)
        } else {
            return Err(Error::Input(format!("letter `{part}` must start with f: or d:")));
        };
        letters.push(letter);
    }
    Ok(OperatorWord(letters))
}

fn parse_covector(text: &str, d: usize) -> Result<Vec<crate::exactpoly::Rational>> {
    let phi = text.split(',').map(|c| parse_rational(c.trim())).collect::<Result<Vec<_>>>()?;
    if phi.len() != d {
        return Err(Error::Dimension(format!("phi has {} entries, U has dimension {d}", phi.len())));
    }
    Ok(phi)
}

/// `⟨m, w·(1⊗φ)⟩` together with the Rudakov reduction of `w·(1⊗φ)`.
pub fn cmd_pair(p: &Problem, module: &str, point: &str, element: &str, word: &str, phi: &str, seed: u64) -> Result<Report> {
    let m = p.module(module)?;
    let ctx = PairingContext::new(m, p.point(point)?)?;
    let el = labelled("element", m.parse_element(&split(element)))?;
    let w = labelled("word", parse_word(m.chart(), word))?;
    let phi = labelled("phi", parse_covector(phi, m.dim()))?;
    let value = ctx.pair_word(&el, &w, &phi)?;
    let reduced = ctx.reduce(&[(crate::exactpoly::int(1), w.clone(), phi.clone())])?;
    let via_rud = ctx.pair_rud(&el, &reduced)?;
    let mut report = Report::new(seed);
    report.extend([Record::new(
        "pairing.word_vs_reduction",
        "<m, w·(1⊗phi)> depends only on the reduction of w·(1⊗phi)",
        1,
        (value != via_rud).then(|| format!("{} vs {}", fmt_rational(&value), fmt_rational(&via_rud))),
    )]);
    report.data = Some(json!({
        "module": module,
        "point": point,
        "element": el.display(m.u().labels()),
        "word": w.to_string(),
        "phi": phi.iter().map(fmt_rational).collect::<Vec<_>>(),
        "reduction": ctx.rudakov().display(&reduced),
        "value": fmt_rational(&value),
    }));
    Ok(report)
}

/// A density sweep from one element; an exhausted budget is inconclusive.
pub fn cmd_sweep(p: &Problem, module: &str, point: &str, element: &str, budget: u64, seed: u64) -> Result<Report> {
    let m = p.module(module)?;
    let el = labelled("element", m.parse_element(&split(element)))?;
    let out = density_sweep(m, &el, p.point(point)?, budget)?;
    let mut report = Report::new(seed);
    let rec = match &out {
        SweepOutcome::Reached { .. } => Record::new("density.sweep", "h^N f (A⊗U) lies in the submodule generated by v, f(p) ≠ 0", 1, None),
        SweepOutcome::BudgetExhausted { operations, .. } => Record {
            name: "density.sweep".into(),
            anchor: "h^N f (A⊗U) lies in the submodule generated by v, f(p) ≠ 0".into(),
            status: Status::Inconclusive,
            samples: 1,
            witness: Some(format!("budget exhausted after {operations} operations")),
        },
    };
    report.extend([rec]);
    report.data = Some(json!({ "module": module, "point": point, "element": el.display(m.u().labels()), "outcome": out }));
    Ok(report)
}

/// Reduction of a Rudakov element into `1⊗U`, and the simplicity probe.
pub fn cmd_probe(p: &Problem, module: &str, point: &str, element: &str, level: u32, seed: u64) -> Result<Report> {
    let m = p.module(module)?;
    let ctx = RudakovContext::new(m.chart(), p.point(point)?, m.u().clone())?;
    let v = labelled("element", RudElement::parse(ctx.s(), m.dim(), element))?;
    if v.is_zero() {
        return Err(Error::Input("element: reduction needs a nonzero element".into()));
    }
    let (exponents, base) = reduction_extract(&v, &ctx)?;
    let probe = simplicity_probe(&v, &ctx, level)?;
    let mut report = Report::new(seed);
    report.extend([
        Record::new(
            "reduction.extract",
            "Av ∩ (1⊗U) ≠ (0)",
            1,
            (base.is_zero() || base.level() != Some(0)).then(|| ctx.display(&base)),
        ),
        Record {
            name: "reduction.simplicity_probe".into(),
            anchor: "regenerating from the reduction reaches R_l".into(),
            // reaching the span is evidence, falling short is not a failure
            status: if probe.reached { Status::Pass } else { Status::Inconclusive },
            samples: 1,
            witness: (!probe.reached).then(|| format!("rank {} of {}", probe.rank, probe.target)),
        },
    ]);
    report.data = Some(json!({
        "module": module,
        "point": point,
        "element": ctx.display(&v),
        "exponents": exponents,
        "reduction": ctx.display(&base),
        "probe": probe,
    }));
    Ok(report)
}

// ---------------------------------------------------------------------------
// argument parsing

#[derive(Debug, Parser)]
#[command(name = "avmod", version, about = "Exact computations with vector-field modules on affine varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Problem definition file (JSON).
    #[arg(long, global = true)]
    pub file: Option<PathBuf>,
    /// Built-in problem: line, circle or sphere.
    #[arg(long, global = true, conflicts_with = "file")]
    pub example: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub max_degree: Option<u32>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Print the report as JSON.
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,
    /// Print the report as text (the default).
    #[arg(long, global = true)]
    pub text: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SuiteArg {
    Lie,
    Gauge,
    Rudakov,
    Pairing,
    Filtration,
    Reduction,
    Density,
    Structure,
    Circle,
    Jets,
    Negative,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Variety, Jacobian, standard atlas and local parameters at each point.
    Variety {
        #[command(flatten)]
        common: Common,
    },
    /// Property suites; without a problem file, the built-in battery.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        suite: Option<SuiteArg>,
    },
    /// One action of a field or a function on an element.
    Act {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        module: String,
        /// `g1; g2; …` on A⊗U, or `y`/`u` polynomial with --rudakov.
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        /// Ambient coefficients `a1, …, an`.
        #[arg(long, allow_hyphen_values = true, group = "op")]
        field: Option<String>,
        /// Chart coefficients `c1, …, cs` of `Σ c_i ∂/∂t_i`.
        #[arg(long, allow_hyphen_values = true, group = "op")]
        chart_field: Option<String>,
        #[arg(long, allow_hyphen_values = true, group = "op")]
        function: Option<String>,
        /// Act on the Rudakov module at this point.
        #[arg(long)]
        rudakov: Option<String>,
    },
    /// The pairing of a module element with `w·(1⊗φ)`.
    Pair {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        module: String,
        #[arg(long)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        /// Letters `f:<function>` or `d:<c1>,…` separated by `;`.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        word: String,
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
    },
    /// Constructive density sweep from one element.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        module: String,
        #[arg(long)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    /// Reduction of a Rudakov element into 1⊗U, plus the simplicity probe.
    Probe {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        module: String,
        #[arg(long)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long, default_value_t = 2)]
        level: u32,
    },
}

fn load(common: &Common) -> Result<Option<Problem>> {
    let text = match (&common.file, &common.example) {
        (Some(path), _) => std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?,
        (None, Some(name)) => catalog(name)?.to_string(),
        (None, None) => return Ok(None),
    };
    Problem::build(ProblemFile::from_json(&text)?).map(Some)
}

fn require(p: Option<Problem>) -> Result<Problem> {
    p.ok_or_else(|| Error::Input("this command needs --file or --example".into()))
}

fn config(common: &Common, p: Option<&Problem>) -> SuiteConfig {
    let mut cfg = p.map(Problem::config).unwrap_or_default();
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(d) = common.max_degree {
        cfg.max_degree = d;
    }
    if let Some(n) = common.samples {
        cfg.samples = n;
    }
    if let Some(b) = common.budget {
        cfg.budget = b;
    }
    cfg
}

fn suites(arg: Option<SuiteArg>, p: Option<&Problem>) -> Result<Vec<Suite>> {
    let name = match arg {
        Some(a) => a.to_possible_value().expect("no skipped variants").get_name().to_string(),
        None => match p.map(|p| &p.spec.suites) {
            Some(list) if !list.is_empty() => {
                let mut out = Vec::new();
                for s in list {
                    out.extend(Suite::parse_list(s)?);
                }
                return Ok(out);
            }
            _ => "all".into(),
        },
    };
    Suite::parse_list(&name)
}

/// Runs a parsed command; the error side is an input error.
pub fn execute(cli: &Cli) -> Result<(Report, bool)> {
    let common = match &cli.command {
        Command::Variety { common }
        | Command::Verify { common, .. }
        | Command::Act { common, .. }
        | Command::Pair { common, .. }
        | Command::Sweep { common, .. }
        | Command::Probe { common, .. } => common,
    };
    let problem = load(common)?;
    let cfg = config(common, problem.as_ref());
    let report = match &cli.command {
        Command::Variety { .. } => cmd_variety(&require(problem)?, cfg.seed)?,
        Command::Verify { suite, .. } => {
            let list = suites(*suite, problem.as_ref())?;
            match &problem {
                Some(p) => cmd_verify(p, &list, &cfg),
                None => verify::run(&list, &cfg),
            }
        }
        Command::Act { module, element, field, chart_field, function, rudakov, .. } => {
            let op = match (field, chart_field, function) {
                (Some(f), None, None) => Operator::Field(f.clone()),
                (None, Some(f), None) => Operator::ChartField(f.clone()),
                (None, None, Some(f)) => Operator::Function(f.clone()),
                _ => return Err(Error::Input("give exactly one of --field, --chart-field, --function".into())),
            };
            cmd_act(&require(problem)?, module, element, &op, rudakov.as_deref(), cfg.seed)?
        }
        Command::Pair { module, point, element, word, phi, .. } => cmd_pair(&require(problem)?, module, point, element, word, phi, cfg.seed)?,
        Command::Sweep { module, point, element, .. } => cmd_sweep(&require(problem)?, module, point, element, cfg.budget, cfg.seed)?,
        Command::Probe { module, point, element, level, .. } => cmd_probe(&require(problem)?, module, point, element, *level, cfg.seed)?,
    };
    Ok((report, common.json))
}

/// Parses arguments, runs, prints, and returns the process exit code:
/// 0 when nothing failed, 1 on a failed check, 2 on bad input.
pub fn run_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok((report, json)) => {
            use std::io::Write;
            let text = if json { serde_json::to_string_pretty(&report).expect("reports serialize") + "\n" } else { report.to_text() };
            // a closed pipe is not an error of ours
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            i32::from(report.has_failures())
        }
        Err(Error::Internal(m)) => {
            eprintln!("error: internal invariant violated: {m}");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(name: &str) -> Problem {
        Problem::build(ProblemFile::from_json(catalog(name).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn catalog_builds() {
        for (name, _) in CATALOG {
            let p = problem(name);
            assert!(!p.modules.is_empty(), "{name}");
            assert!(!p.points.is_empty(), "{name}");
        }
    }

    #[test]
    fn act_on_the_line() {
        // (t d/dt)(t^2 ⊗ u) = (2 + α) t^2 ⊗ u with α = 1/2
        let p = problem("line");
        let r = cmd_act(&p, "F", "t^2", &Operator::ChartField("t".into()), None, 0).unwrap();
        assert_eq!(r.data.unwrap()["result"], "(5/2*t^2) ⊗ u1");
        // t·(y1^2 ⊗ u) = -2 (y1 ⊗ u) at the origin
        let r = cmd_act(&p, "F", "y1^2*u1", &Operator::Function("t".into()), Some("origin"), 0).unwrap();
        assert_eq!(r.data.unwrap()["result"], "-2*y1 ⊗ u1");
        let r = cmd_act(&p, "F", "t^2", &Operator::Function("1".into()), None, 0).unwrap();
        assert_eq!(r.data.unwrap()["result"], "(t^2) ⊗ u1");
    }

    #[test]
    fn empty_variety_is_an_input_error() {
        let f = ProblemFile::from_json(r#"{"variety": {"variables": ["x"], "generators": ["x", "x - 1"]}}"#).unwrap();
        assert_eq!(Problem::build(f).unwrap_err(), Error::Input("variety: the ideal contains 1, the variety is empty".into()));
    }

    #[test]
    fn json_errors_carry_locations() {
        let e = ProblemFile::from_json("{\n  \"variety\": 3\n}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
    }

    #[test]
    fn corrupted_b_is_rejected_with_a_witness() {
        let text = r#"{
            "variety": {"variables": ["x", "y"]},
            "modules": [{"id": "M", "alpha": "1", "b": [[["0"]], [["x"]]]}]
        }"#;
        let e = Problem::build(ProblemFile::from_json(text).unwrap()).unwrap_err();
        assert!(e.to_string().contains("axiom (iii)"), "{e}");
    }

    #[test]
    fn sphere_gauge_suite_passes() {
        let p = problem("sphere");
        let cfg = SuiteConfig { samples: 5, ..p.config() };
        let r = cmd_verify(&p, &[Suite::Gauge], &cfg);
        assert!(r.all_pass(), "{}", r.to_text());
    }

    #[test]
    fn line_pairing_suite_passes() {
        let p = problem("line");
        let cfg = SuiteConfig { samples: 5, ..p.config() };
        let r = cmd_verify(&p, &[Suite::Pairing], &cfg);
        assert!(r.all_pass() && !r.records.is_empty(), "{}", r.to_text());
    }
}
