//! The graded Lie algebra `L₊` of formal vector fields of degree `≥ 0`, its
//! finite-dimensional modules given by action matrices, and the `gl_s`
//! families.
//!
//! Convention: `X_a ∂/∂X_b ↦ E_ab`, which is a Lie homomorphism
//! `L₊/L(1) → gl_s` for the bracket `[X^a∂_i, X^b∂_j] = b_i X^{a+b−e_i}∂_j − a_j X^{a+b−e_j}∂_i`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{fmt_rational, int, parse_rational, Monomial, Rational};

/// A dense square rational matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMatrix {
    n: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(n: usize) -> Self {
        QMatrix { n, data: vec![Rational::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// The matrix unit with a single 1 in position `(i, j)`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = QMatrix::zeros(n);
        m.set(i, j, Rational::one());
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidModule("matrix is not square".into()));
        }
        Ok(QMatrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn add(&self, o: &QMatrix) -> QMatrix {
        QMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &QMatrix) -> QMatrix {
        QMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Rational) -> QMatrix {
        QMatrix { n: self.n, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, o: &QMatrix) -> QMatrix {
        let n = self.n;
        let mut out = QMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, o: &QMatrix) -> QMatrix {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn transpose(&self) -> QMatrix {
        let mut out = QMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> Rational {
        (0..self.n).map(|i| self.get(i, i).clone()).fold(Rational::zero(), |a, b| a + b)
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.n)
            .map(|i| (0..self.n).fold(Rational::zero(), |acc, j| acc + self.get(i, j) * &v[j]))
            .collect()
    }

    /// First differing entry, for witnesses.
    pub fn first_difference(&self, o: &QMatrix) -> Option<(usize, usize, Rational, Rational)> {
        (0..self.n * self.n).find(|&k| self.data[k] != o.data[k]).map(|k| {
            (k / self.n, k % self.n, self.data[k].clone(), o.data[k].clone())
        })
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows().iter().map(|r| format!("[{}]", r.iter().map(fmt_rational).collect::<Vec<_>>().join(", "))).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// `X^k ∂/∂X_i` with `|k| ≥ 1`; its degree is `|k| − 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LPlusBasis {
    pub k: Monomial,
    pub dir: usize,
}

impl LPlusBasis {
    pub fn new(k: Monomial, dir: usize) -> Self {
        debug_assert!(k.degree() >= 1);
        LPlusBasis { k, dir }
    }

    /// `X_a ∂/∂X_b`, the preimage of `E_ab`.
    pub fn gl(s: usize, a: usize, b: usize) -> Self {
        LPlusBasis::new(Monomial::var(s, a), b)
    }

    pub fn degree(&self) -> i64 {
        self.k.degree() as i64 - 1
    }

    /// All basis elements in `s` variables with degree `< level`.
    pub fn below(s: usize, level: u32) -> Vec<LPlusBasis> {
        (1..=level)
            .flat_map(|d| Monomial::all_of_degree(s, d))
            .flat_map(|k| (0..s).map(move |i| LPlusBasis::new(k.clone(), i)))
            .collect()
    }

    /// `[X^a∂_i, X^b∂_j] = b_i X^{a+b−e_i}∂_j − a_j X^{a+b−e_j}∂_i`.
    pub fn bracket(&self, other: &LPlusBasis) -> Vec<(LPlusBasis, Rational)> {
        let (a, i, b, j) = (&self.k, self.dir, &other.k, other.dir);
        let ab = a.mul(b);
        let mut out: BTreeMap<LPlusBasis, Rational> = BTreeMap::new();
        let bi = b.exponents()[i];
        if bi > 0 {
            *out.entry(LPlusBasis::new(ab.lowered(i).unwrap(), j)).or_insert_with(Rational::zero) += int(bi as i64);
        }
        let aj = a.exponents()[j];
        if aj > 0 {
            *out.entry(LPlusBasis::new(ab.lowered(j).unwrap(), i)).or_insert_with(Rational::zero) -= int(aj as i64);
        }
        out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }
}

impl fmt::Display for LPlusBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self
            .k
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("X{}", i + 1) } else { format!("X{}^{}", i + 1, e) })
            .collect();
        write!(f, "{}*d/dX{}", body.join("*"), self.dir + 1)
    }
}

/// A failed homomorphism check: `ρ([a,b]) ≠ [ρ(a), ρ(b)]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomWitness {
    pub a: String,
    pub b: String,
    pub entry: (usize, usize),
    pub bracket_image: String,
    pub commutator: String,
}

impl fmt::Display for HomWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rho([{}, {}]) has entry {:?} = {}, the commutator {}",
            self.a, self.b, self.entry, self.bracket_image, self.commutator
        )
    }
}

/// `(U, ρ)` with `L(level)·U = 0`. Labels are cosmetic and ignored by `==`.
#[derive(Clone, Debug)]
pub struct FiniteModule {
    s: usize,
    dim: usize,
    level: u32,
    action: BTreeMap<LPlusBasis, QMatrix>,
    labels: Vec<String>,
}

impl PartialEq for FiniteModule {
    fn eq(&self, o: &Self) -> bool {
        (self.s, self.dim, self.level) == (o.s, o.dim, o.level) && self.action == o.action
    }
}

impl Eq for FiniteModule {}

impl FiniteModule {
    pub fn new(s: usize, dim: usize, level: u32, action: BTreeMap<LPlusBasis, QMatrix>) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidModule("level must be at least 1".into()));
        }
        for (b, m) in &action {
            if b.k.nvars() != s || b.dir >= s {
                return Err(Error::InvalidModule(format!("basis element {b} is not in {s} variables")));
            }
            if b.degree() >= level as i64 {
                return Err(Error::InvalidModule(format!("{b} has degree >= level {level}")));
            }
            if m.dim() != dim {
                return Err(Error::InvalidModule(format!("matrix of {b} is {}x{0}, expected {dim}", m.dim())));
            }
        }
        let action = action.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        Ok(FiniteModule { s, dim, level, action, labels: (1..=dim).map(|i| format!("u{i}")).collect() })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
        self
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn actions(&self) -> &BTreeMap<LPlusBasis, QMatrix> {
        &self.action
    }

    /// `ρ(b)`; zero outside the housed range.
    pub fn rho(&self, b: &LPlusBasis) -> QMatrix {
        self.action.get(b).cloned().unwrap_or_else(|| QMatrix::zeros(self.dim))
    }

    pub fn rho_ref(&self, b: &LPlusBasis) -> Option<&QMatrix> {
        self.action.get(b)
    }

    /// `ρ(E_ab) = ρ(X_a ∂/∂X_b)`.
    pub fn e(&self, a: usize, b: usize) -> QMatrix {
        self.rho(&LPlusBasis::gl(self.s, a, b))
    }

    pub fn rho_combination(&self, terms: &[(LPlusBasis, Rational)]) -> QMatrix {
        terms.iter().fold(QMatrix::zeros(self.dim), |acc, (b, c)| acc.add(&self.rho(b).scale(c)))
    }

    /// Every pair of housed basis elements satisfies `ρ([a,b]) = [ρ(a), ρ(b)]`
    /// with the bracket truncated below the level.
    pub fn homomorphism_witness(&self) -> Option<HomWitness> {
        let basis = LPlusBasis::below(self.s, self.level);
        for (x, a) in basis.iter().enumerate() {
            for b in &basis[x + 1..] {
                let lhs = self.rho_combination(&a.bracket(b));
                let rhs = self.rho(a).commutator(&self.rho(b));
                if let Some((i, j, l, r)) = lhs.first_difference(&rhs) {
                    return Some(HomWitness {
                        a: a.to_string(),
                        b: b.to_string(),
                        entry: (i, j),
                        bracket_image: fmt_rational(&l),
                        commutator: fmt_rational(&r),
                    });
                }
            }
        }
        None
    }

    /// `ρ*(a) = −ρ(a)ᵀ`.
    pub fn dual(&self) -> FiniteModule {
        let action = self.action.iter().map(|(b, m)| (b.clone(), m.transpose().scale(&-Rational::one()))).collect();
        FiniteModule {
            s: self.s,
            dim: self.dim,
            level: self.level,
            action,
            labels: self.labels.iter().map(|l| format!("{l}*")).collect(),
        }
    }

    pub fn to_spec(&self) -> ModuleSpec {
        ModuleSpec {
            s: self.s,
            dimension: self.dim,
            level: self.level,
            actions: self
                .action
                .iter()
                .map(|(b, m)| ActionSpec {
                    multi_index: b.k.exponents().to_vec(),
                    direction: b.dir,
                    matrix: m.rows().iter().map(|r| r.iter().map(fmt_rational).collect()).collect(),
                })
                .collect(),
        }
    }

    pub fn from_spec(spec: &ModuleSpec) -> Result<FiniteModule> {
        let mut action = BTreeMap::new();
        for a in &spec.actions {
            if a.multi_index.len() != spec.s || a.multi_index.iter().sum::<u32>() == 0 {
                return Err(Error::InvalidModule(format!("bad multi-index {:?}", a.multi_index)));
            }
            let rows = a
                .matrix
                .iter()
                .map(|r| r.iter().map(|e| parse_rational(e)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let key = LPlusBasis::new(Monomial::new(a.multi_index.clone()), a.direction);
            if action.insert(key.clone(), QMatrix::from_rows(rows)?).is_some() {
                return Err(Error::InvalidModule(format!("duplicate action for {key}")));
            }
        }
        FiniteModule::new(spec.s, spec.dimension, spec.level, action)
    }
}

/// `check_homomorphism`.
pub fn check_homomorphism(u: &FiniteModule) -> bool {
    u.homomorphism_witness().is_none()
}

/// The `U*` of a module with `ρ* = −ρᵀ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualModule {
    pub module: FiniteModule,
}

pub fn dualize(u: &FiniteModule) -> DualModule {
    DualModule { module: u.dual() }
}

/// JSON form of a module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub s: usize,
    pub dimension: usize,
    pub level: u32,
    pub actions: Vec<ActionSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSpec {
    pub multi_index: Vec<u32>,
    pub direction: usize,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GlKind {
    /// The identity matrix acts as `alpha`.
    OneDim { alpha: String },
    Natural,
    DualNatural,
    Sym { d: u32 },
    Ext { d: u32 },
}

/// Level-one `gl_s` modules.
pub fn gl_family(kind: &GlKind, s: usize) -> Result<FiniteModule> {
    if s == 0 {
        return Err(Error::InvalidModule("s must be positive".into()));
    }
    let gl = |f: &dyn Fn(usize, usize) -> QMatrix, dim: usize| -> Result<FiniteModule> {
        let mut action = BTreeMap::new();
        for a in 0..s {
            for b in 0..s {
                action.insert(LPlusBasis::gl(s, a, b), f(a, b));
            }
        }
        FiniteModule::new(s, dim, 1, action)
    };
    match kind {
        GlKind::OneDim { alpha } => {
            let alpha = parse_rational(alpha)?;
            let each = alpha / int(s as i64);
            gl(&|a, b| if a == b { QMatrix::identity(1).scale(&each) } else { QMatrix::zeros(1) }, 1)
        }
        GlKind::Natural => gl(&|a, b| QMatrix::unit(s, a, b), s),
        GlKind::DualNatural => gl(&|a, b| QMatrix::unit(s, b, a).scale(&-Rational::one()), s),
        GlKind::Sym { d } => {
            // E_ab acts on polynomials of degree d as x_a ∂/∂x_b
            let basis = Monomial::all_of_degree(s, *d);
            let index: BTreeMap<Monomial, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            let m = basis.len();
            let module = gl(
                &|a, b| {
                    let mut mat = QMatrix::zeros(m);
                    for (col, mono) in basis.iter().enumerate() {
                        if let Some(low) = mono.lowered(b) {
                            let img = low.raised(a);
                            mat.set(index[&img], col, int(mono.exponents()[b] as i64));
                        }
                    }
                    mat
                },
                m,
            )?;
            let labels = basis.iter().map(|mono| sym_label(mono)).collect();
            Ok(module.with_labels(labels))
        }
        GlKind::Ext { d } => {
            let d = *d as usize;
            if d == 0 || d > s {
                return Err(Error::InvalidModule(format!("exterior power {d} of a {s}-dimensional space")));
            }
            let basis = subsets(s, d);
            let index: BTreeMap<Vec<usize>, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            let m = basis.len();
            let module = gl(
                &|a, b| {
                    let mut mat = QMatrix::zeros(m);
                    for (col, set) in basis.iter().enumerate() {
                        let Some(pos) = set.iter().position(|&x| x == b) else { continue };
                        if a != b && set.contains(&a) {
                            continue;
                        }
                        let mut img = set.clone();
                        img[pos] = a;
                        // sort with sign
                        let mut sign = 1i64;
                        for i in 0..img.len() {
                            for j in 0..img.len() - 1 - i {
                                if img[j] > img[j + 1] {
                                    img.swap(j, j + 1);
                                    sign = -sign;
                                }
                            }
                        }
                        mat.set(index[&img], col, int(sign));
                    }
                    mat
                },
                m,
            )?;
            let labels = basis.iter().map(|set| set.iter().map(|i| format!("e{}", i + 1)).collect::<Vec<_>>().join("^")).collect();
            Ok(module.with_labels(labels))
        }
    }
}

fn sym_label(m: &Monomial) -> String {
    let parts: Vec<String> = m
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("e{}", i + 1) } else { format!("e{}^{}", i + 1, e) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
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
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// A two-dimensional level-two module for `s = 1`:
/// `X∂ ↦ diag(c+1, c)`, `X²∂ ↦ E_12`.
pub fn level_two_line(c: &Rational) -> FiniteModule {
    let mut action = BTreeMap::new();
    let mut d = QMatrix::zeros(2);
    d.set(0, 0, c + Rational::one());
    d.set(1, 1, c.clone());
    action.insert(LPlusBasis::new(Monomial::new(vec![1]), 0), d);
    action.insert(LPlusBasis::new(Monomial::new(vec![2]), 0), QMatrix::unit(2, 0, 1));
    FiniteModule::new(1, 2, 2, action).expect("valid data")
}
