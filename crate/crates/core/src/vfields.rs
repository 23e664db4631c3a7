//! The Lie algebra `𝒟 = Der A` of polynomial vector fields: membership,
//! brackets, the standard constructor families and the filtration `𝒟(l)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactpoly::{int, Monomial, PolyRing, Polynomial, Rational};
use crate::groebner::QuotientElement;
use crate::jets::PointJets;
use crate::variety::{chart_derivative, Chart, LocalElement, Point, Variety};

/// `Σ f_j ∂/∂x_j` with `(f_1, …, f_n) ∈ Ker J`.
#[derive(Clone, Debug)]
pub struct VectorField {
    variety: Arc<Variety>,
    coeffs: Vec<QuotientElement>,
}

impl PartialEq for VectorField {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for VectorField {}

/// `true` iff every row of `J` annihilates `coeffs` in `A`.
pub fn is_vector_field(coeffs: &[QuotientElement], v: &Variety) -> bool {
    membership_witness(coeffs, v).is_none()
}

fn membership_witness(coeffs: &[QuotientElement], v: &Variety) -> Option<(usize, QuotientElement)> {
    if coeffs.len() != v.ambient_dim() {
        return Some((0, QuotientElement::one(v.ideal())));
    }
    v.jacobian().iter().enumerate().find_map(|(r, row)| {
        let mut acc = QuotientElement::zero(v.ideal());
        for (a, f) in row.iter().zip(coeffs) {
            acc = &acc + &(a * f);
        }
        (!acc.is_zero()).then_some((r, acc))
    })
}

impl VectorField {
    pub fn new(variety: &Arc<Variety>, coeffs: Vec<QuotientElement>) -> Result<VectorField> {
        if let Some((row, value)) = membership_witness(&coeffs, variety) {
            return Err(Error::NotAVectorField { row, value: value.to_string() });
        }
        Ok(VectorField { variety: variety.clone(), coeffs })
    }

    pub(crate) fn new_unchecked(variety: &Arc<Variety>, coeffs: Vec<QuotientElement>) -> VectorField {
        debug_assert!(is_vector_field(&coeffs, variety));
        VectorField { variety: variety.clone(), coeffs }
    }

    pub fn zero(variety: &Arc<Variety>) -> VectorField {
        VectorField { variety: variety.clone(), coeffs: vec![QuotientElement::zero(variety.ideal()); variety.ambient_dim()] }
    }

    /// Reads `f1*d/dx1 + … + fn*d/dxn`; coefficients use the polynomial
    /// grammar and may be grouped in parentheses.
    pub fn parse(variety: &Arc<Variety>, text: &str) -> Result<VectorField> {
        let names = variety.ring().names();
        let mut marked = text.to_string();
        // longest names first so that d/dxy is not read as d/dx followed by y
        let mut order: Vec<usize> = (0..names.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(names[i].len()));
        for &i in &order {
            marked = marked.replace(&format!("d/d{}", names[i]), &format!("__d{i}"));
        }
        if marked.contains("d/d") {
            return Err(Error::Parse { position: marked.find("d/d").unwrap(), message: "unknown derivation variable".into() });
        }
        let mut ext: Vec<String> = names.to_vec();
        ext.extend((0..names.len()).map(|i| format!("__d{i}")));
        let n = names.len();
        let ring = PolyRing::new(ext, crate::exactpoly::MonomialOrder::grevlex(2 * n));
        let p = Polynomial::parse(&ring, &marked)?;
        let mut parts: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); n];
        for (m, c) in p.terms() {
            let e = m.exponents();
            let ds: Vec<usize> = (0..n).filter(|&i| e[n + i] > 0).collect();
            if ds.len() != 1 || e[n + ds[0]] != 1 {
                return Err(Error::Parse { position: 0, message: "every term needs exactly one d/dx factor".into() });
            }
            parts[ds[0]].push((Monomial::new(e[..n].to_vec()), c.clone()));
        }
        let coeffs = parts
            .into_iter()
            .map(|t| QuotientElement::new(variety.ideal(), &Polynomial::from_terms(variety.ring(), t)))
            .collect();
        VectorField::new(variety, coeffs)
    }

    /// `Σ f_j ∂/∂x_j` from coefficient strings.
    pub fn from_strs(variety: &Arc<Variety>, coeffs: &[&str]) -> Result<VectorField> {
        let c = coeffs.iter().map(|s| variety.element(s)).collect::<Result<Vec<_>>>()?;
        VectorField::new(variety, c)
    }

    pub fn variety(&self) -> &Arc<Variety> {
        &self.variety
    }

    pub fn coeffs(&self) -> &[QuotientElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `η(f) = Σ f_j ∂f/∂x_j`.
    pub fn apply(&self, f: &QuotientElement) -> QuotientElement {
        let mut acc = QuotientElement::zero(self.variety.ideal());
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(c * &self.variety.partial(f, j));
            }
        }
        acc
    }

    /// The unique extension to `A_(h)`: `η(a/h^k) = (h·η(a) − k·a·η(h)) / h^{k+1}`.
    pub fn apply_local(&self, f: &LocalElement) -> LocalElement {
        let loc = f.localization();
        let ea = self.apply(f.numerator());
        if f.h_power() == 0 {
            return LocalElement::from_a(loc, &ea);
        }
        let eh = self.apply(loc.h());
        let k = int(f.h_power() as i64);
        let num = &(loc.h() * &ea) - &(f.numerator() * &eh).scale(&k);
        LocalElement::new(loc, num, f.h_power() + 1)
    }

    fn check(&self, other: &VectorField) -> Result<()> {
        if Arc::ptr_eq(&self.variety, &other.variety) || self.variety.ideal() == other.variety.ideal() {
            Ok(())
        } else {
            Err(Error::IdealMismatch)
        }
    }

    /// `[a,b]_j = a(b_j) − b(a_j)`.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(aj, bj)| &self.apply(bj) - &other.apply(aj)).collect();
        VectorField::new(&self.variety, coeffs)
    }

    pub fn checked_add(&self, other: &VectorField) -> Result<VectorField> {
        self.check(other)?;
        Ok(VectorField { variety: self.variety.clone(), coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn checked_sub(&self, other: &VectorField) -> Result<VectorField> {
        self.checked_add(&other.scale(&-Rational::from_integer(1.into())))
    }

    pub fn scale(&self, c: &Rational) -> VectorField {
        VectorField { variety: self.variety.clone(), coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect() }
    }

    /// `f·η`, the `A`-module structure.
    pub fn mul_a(&self, f: &QuotientElement) -> VectorField {
        VectorField { variety: self.variety.clone(), coeffs: self.coeffs.iter().map(|a| a * f).collect() }
    }

    /// Chart coordinates `Σ η(t_i) ∂/∂t_i`.
    pub fn to_chart(&self, chart: &Arc<Chart>) -> ChartField {
        let coeffs = chart.params().iter().map(|&j| chart.local(&self.coeffs[j])).collect();
        ChartField { chart: chart.clone(), coeffs }
    }
}

crate::exactpoly::forward_binop!(VectorField, Add, add, checked_add);
crate::exactpoly::forward_binop!(VectorField, Sub, sub, checked_sub);

use std::ops::{Add, Neg, Sub};

impl Neg for &VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        self.scale(&-Rational::from_integer(1.into()))
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.variety.ring().names();
        let mut out = String::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = format!("d/d{}", names[j]);
            let rep = c.rep();
            if rep.num_terms() == 1 {
                let (m, coeff) = rep.terms_ordered()[0];
                let mono = Polynomial::monomial(rep.ring(), m.clone(), Rational::from_integer(1.into())).to_string();
                let full = if m.is_one() { body } else { format!("{mono}*{body}") };
                let first = out.is_empty();
                crate::exactpoly::push_signed_term(&mut out, coeff, &full, first);
            } else {
                if !out.is_empty() {
                    out.push_str(" + ");
                }
                out.push_str(&format!("({rep})*{body}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// An element `Σ f_i ∂/∂t_i` of `Der A_(h)`.
#[derive(Clone, Debug)]
pub struct ChartField {
    chart: Arc<Chart>,
    coeffs: Vec<LocalElement>,
}

impl PartialEq for ChartField {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl fmt::Display for ChartField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.chart.param_names();
        let parts: Vec<String> =
            self.coeffs.iter().zip(&names).filter(|(c, _)| !c.is_zero()).map(|(c, n)| format!("({c})*d/d{n}")).collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl ChartField {
    pub fn new(chart: &Arc<Chart>, coeffs: Vec<LocalElement>) -> Result<ChartField> {
        if coeffs.len() != chart.dim() {
            return Err(Error::Dimension(format!("{} chart coefficients for {} parameters", coeffs.len(), chart.dim())));
        }
        Ok(ChartField { chart: chart.clone(), coeffs })
    }

    /// `f·∂/∂t_i`.
    pub fn coordinate(chart: &Arc<Chart>, i: usize, f: LocalElement) -> ChartField {
        let mut coeffs = vec![LocalElement::zero(chart.localization()); chart.dim()];
        coeffs[i] = f;
        ChartField { chart: chart.clone(), coeffs }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn coeffs(&self) -> &[LocalElement] {
        &self.coeffs
    }

    pub fn apply(&self, g: &LocalElement) -> LocalElement {
        let mut acc = LocalElement::zero(self.chart.localization());
        for (i, f) in self.coeffs.iter().enumerate() {
            if !f.is_zero() {
                acc = &acc + &(f * &chart_derivative(g, i, &self.chart));
            }
        }
        acc
    }

    pub fn bracket(&self, other: &ChartField) -> ChartField {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| &self.apply(b) - &other.apply(a)).collect();
        ChartField { chart: self.chart.clone(), coeffs }
    }

    pub fn add(&self, other: &ChartField) -> ChartField {
        ChartField { chart: self.chart.clone(), coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn mul_local(&self, f: &LocalElement) -> ChartField {
        ChartField { chart: self.chart.clone(), coeffs: self.coeffs.iter().map(|a| a * f).collect() }
    }

    /// Back to ambient coordinates; fails unless the field preserves `A`.
    pub fn to_ambient(&self) -> Result<VectorField> {
        let v = self.chart.variety();
        let loc = self.chart.localization();
        let mut coeffs = Vec::with_capacity(v.ambient_dim());
        for j in 0..v.ambient_dim() {
            let mut acc = LocalElement::zero(loc);
            for (i, f) in self.coeffs.iter().enumerate() {
                acc = &acc + &f.mul_a(&self.chart.basic(i)[j]);
            }
            let acc = &acc * &LocalElement::h_inverse_pow(loc, 1);
            match acc.as_a() {
                Some(a) => coeffs.push(a.clone()),
                None => return Err(Error::Localization(format!("coefficient {acc} of d/d{} is not in A", v.ring().names()[j]))),
            }
        }
        VectorField::new(v, coeffs)
    }
}

/// `(∂g/∂x_j)∂/∂x_i − (∂g/∂x_i)∂/∂x_j` on a hypersurface `V(g)`.
pub fn delta_field(v: &Arc<Variety>, i: usize, j: usize) -> Result<VectorField> {
    if !v.is_hypersurface() {
        return Err(Error::UnsupportedConstructor("delta fields need a single defining equation".into()));
    }
    let n = v.ambient_dim();
    if i >= n || j >= n {
        return Err(Error::Dimension(format!("indices ({i}, {j}) out of range")));
    }
    let mut coeffs = vec![QuotientElement::zero(v.ideal()); n];
    if i != j {
        coeffs[i] = v.jacobian()[0][j].clone();
        coeffs[j] = -&v.jacobian()[0][i];
    }
    VectorField::new(v, coeffs)
}

/// `h∂/∂t_i` in ambient form.
pub fn chart_basic_field(c: &Chart, i: usize) -> VectorField {
    VectorField::new_unchecked(c.variety(), c.basic(i).to_vec())
}

/// Largest `l ≤ cap` with `η ∈ 𝒟(l)`, read from the expansions of `η(t_i)`.
pub fn filtration_level(eta: &VectorField, p: &Point, cap: i64) -> Result<i64> {
    let chart = p.default_chart()?;
    let jets = PointJets::new(&chart, p, (cap + 1).max(0) as u32)?;
    Ok(filtration_level_in(eta, &jets, cap))
}

pub fn filtration_level_in(eta: &VectorField, jets: &PointJets, cap: i64) -> i64 {
    let order = ((cap + 1).max(0) as u32).min(jets.order());
    let min = jets.chart().params().iter().filter_map(|&j| jets.expand_a(&eta.coeffs()[j], order).min_degree()).min();
    match min {
        Some(d) => (d as i64 - 1).min(cap),
        None => cap,
    }
}

pub const DEFAULT_LEVEL_CAP: i64 = 16;

/// `q_N·h∂/∂t_i` with `q_N` the degree-`N` truncation of the expansion of `1/h`.
pub fn truncated_lift(c: &Arc<Chart>, p: &Point, i: usize, n: u32) -> Result<VectorField> {
    let jets = PointJets::new(c, p, n)?;
    Ok(truncated_lift_in(&jets, i, n))
}

pub fn truncated_lift_in(jets: &PointJets, i: usize, n: u32) -> VectorField {
    let q = jets.to_a(&jets.h_inverse().truncate(n));
    chart_basic_field(jets.chart(), i).mul_a(&q)
}

/// Truncated lifts `η_1, …, η_s` plus the coordinate functions `t̄_k`, the
/// raw material for the filtration suites.
pub fn centred_params(c: &Chart, p: &Point) -> Vec<QuotientElement> {
    let v = c.variety();
    let pc = p.chart_coords(c);
    (0..c.dim()).map(|k| &v.var(c.params()[k]) - &QuotientElement::constant(v.ideal(), pc[k].clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variety::{chart_by_minor, standard_atlas};
    use proptest::prelude::*;

    fn vf(v: &Arc<Variety>, s: &str) -> VectorField {
        VectorField::parse(v, s).unwrap()
    }

    #[test]
    fn membership_examples() {
        let s = Variety::sphere();
        assert!(is_vector_field(vf(&s, "y*d/dx - x*d/dy").coeffs(), &s));
        let bad = [s.element("1").unwrap(), s.element("0").unwrap(), s.element("0").unwrap()];
        assert!(!is_vector_field(&bad, &s));
        match VectorField::from_strs(&s, &["1", "0", "0"]) {
            Err(Error::NotAVectorField { value, .. }) => assert_eq!(value, "2*x"),
            other => panic!("{other:?}"),
        }
        assert!(VectorField::zero(&s).is_zero());
        assert!(is_vector_field(VectorField::zero(&s).coeffs(), &s));
    }

    #[test]
    fn bracket_examples() {
        let s = Variety::sphere();
        let d12 = vf(&s, "y*d/dx - x*d/dy");
        let d23 = vf(&s, "z*d/dy - y*d/dz");
        let d31 = vf(&s, "x*d/dz - z*d/dx");
        assert_eq!(d12.bracket(&d23).unwrap(), d31);
        assert!(d12.bracket(&d12).unwrap().is_zero());
        let a1 = Variety::affine_space(&["t"]);
        assert_eq!(vf(&a1, "d/dt").bracket(&vf(&a1, "t*d/dt")).unwrap(), vf(&a1, "d/dt"));
    }

    #[test]
    fn delta_fields_and_the_syzygy() {
        let s = Variety::sphere();
        assert_eq!(delta_field(&s, 0, 1).unwrap(), vf(&s, "2*y*d/dx - 2*x*d/dy"));
        assert!(delta_field(&s, 2, 2).unwrap().is_zero());
        let c = Variety::circle();
        assert_eq!(delta_field(&c, 0, 1).unwrap(), vf(&c, "2*y*d/dx - 2*x*d/dy"));
        let two = Variety::parse(&["x", "y", "z"], None, &["x", "y"]).unwrap();
        assert!(matches!(delta_field(&two, 0, 1), Err(Error::UnsupportedConstructor(_))));
        // x Δ23 + y Δ31 + z Δ12 = 0
        let (d12, d23, d31) = (vf(&s, "y*d/dx - x*d/dy"), vf(&s, "z*d/dy - y*d/dz"), vf(&s, "x*d/dz - z*d/dx"));
        let sum = &(&d23.mul_a(&s.var(0)) + &d31.mul_a(&s.var(1))) + &d12.mul_a(&s.var(2));
        assert!(sum.is_zero());
    }

    #[test]
    fn basic_field_examples() {
        let s = Variety::sphere();
        let cz = chart_by_minor(&s, "2*z").unwrap();
        let b = chart_basic_field(&cz, 0);
        assert_eq!(b, vf(&s, "2*z*d/dx - 2*x*d/dz"));
        let chart = b.to_chart(&cz);
        assert_eq!(chart.coeffs(), &[cz.local(&s.element("2*z").unwrap()), cz.local(&s.element("0").unwrap())]);
        assert_eq!(chart.to_ambient().unwrap(), b);
        let a3 = Variety::affine_space(&["a", "b", "c"]);
        assert_eq!(chart_basic_field(&standard_atlas(&a3)[0], 1), vf(&a3, "d/db"));
        let circ = Variety::circle();
        let cy = chart_by_minor(&circ, "2*y").unwrap();
        assert_eq!(chart_basic_field(&cy, 0), vf(&circ, "2*y*d/dx - 2*x*d/dy"));
    }

    #[test]
    fn printing_round_trips() {
        let a3 = Variety::affine_space(&["x", "y", "z"]);
        let f = vf(&a3, "(x + y)*d/dz - 3/2*d/dx + x*y*d/dy");
        assert_eq!(f.to_string(), "-3/2*d/dx + x*y*d/dy + (x + y)*d/dz");
        // not tangent: parse rejects it
        assert!(VectorField::parse(&Variety::sphere(), "x*d/dx").is_err());
        let a2 = Variety::affine_space(&["x", "y"]);
        let g = vf(&a2, "(x + y)*d/dy - 3/2*d/dx + x*y*d/dy");
        assert_eq!(VectorField::parse(&a2, &g.to_string()).unwrap(), g);
        assert!(VectorField::parse(&a2, "x*y").is_err());
        assert!(VectorField::parse(&a2, "x*d/dw").is_err());
    }

    #[test]
    fn filtration_examples() {
        let s = Variety::sphere();
        let north = Point::parse(&s, &["0", "0", "1"]).unwrap();
        assert_eq!(filtration_level(&vf(&s, "y*d/dx - x*d/dy"), &north, 16).unwrap(), 0);
        let a1 = Variety::affine_space(&["t"]);
        let o = Point::parse(&a1, &["0"]).unwrap();
        assert_eq!(filtration_level(&vf(&a1, "d/dt"), &o, 16).unwrap(), -1);
        assert_eq!(filtration_level(&vf(&a1, "t^2*d/dt"), &o, 16).unwrap(), 1);
        assert_eq!(filtration_level(&VectorField::zero(&a1), &o, 5).unwrap(), 5);
    }

    #[test]
    fn truncated_lift_examples() {
        let s = Variety::sphere();
        let cz = chart_by_minor(&s, "2*z").unwrap();
        let north = Point::parse(&s, &["0", "0", "1"]).unwrap();
        assert_eq!(truncated_lift(&cz, &north, 0, 0).unwrap(), vf(&s, "z*d/dx - x*d/dz"));
        let l2 = truncated_lift(&cz, &north, 0, 2).unwrap();
        let q2 = s.element("1/2 + 1/4*x^2 + 1/4*y^2").unwrap();
        assert_eq!(l2, chart_basic_field(&cz, 0).mul_a(&q2));
        let a2 = Variety::affine_space(&["x", "y"]);
        let p = Point::parse(&a2, &["1", "2"]).unwrap();
        assert_eq!(truncated_lift(&standard_atlas(&a2)[0], &p, 1, 3).unwrap(), vf(&a2, "d/dy"));
        // successive lifts differ by a field of level >= N
        for n in 0..4 {
            let d = &truncated_lift(&cz, &north, 1, n + 1).unwrap() - &truncated_lift(&cz, &north, 1, n).unwrap();
            assert!(filtration_level(&d, &north, 10).unwrap() >= n as i64);
        }
    }

    fn sphere_sample(seed: [i8; 6]) -> VectorField {
        let s = Variety::sphere();
        let cz = chart_by_minor(&s, "2*z").unwrap();
        let fams = [
            delta_field(&s, 0, 1).unwrap(),
            delta_field(&s, 1, 2).unwrap(),
            delta_field(&s, 2, 0).unwrap(),
            chart_basic_field(&cz, 0),
            chart_basic_field(&cz, 1),
        ];
        let mut acc = VectorField::zero(&s);
        for (k, f) in fams.iter().enumerate() {
            let coeff = Polynomial::from_terms(
                s.ring(),
                [(Monomial::one(3), int(seed[k] as i64)), (Monomial::var(3, k % 3), int(seed[5] as i64))],
            );
            acc = &acc + &f.mul_a(&QuotientElement::new(s.ideal(), &coeff));
        }
        acc
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn jacobi_closure_and_leibniz(a in any::<[i8; 6]>(), b in any::<[i8; 6]>(), c in any::<[i8; 6]>()) {
            let (x, y, z) = (sphere_sample(a), sphere_sample(b), sphere_sample(c));
            let j = &(&x.bracket(&y).unwrap().bracket(&z).unwrap() + &y.bracket(&z).unwrap().bracket(&x).unwrap())
                + &z.bracket(&x).unwrap().bracket(&y).unwrap();
            prop_assert!(j.is_zero());
            let s = x.variety().clone();
            let f = s.element(&format!("{}*x*y + {}*z^2", a[0], b[1])).unwrap();
            let lhs = x.bracket(&y.mul_a(&f)).unwrap();
            let rhs = &y.mul_a(&x.apply(&f)) + &x.bracket(&y).unwrap().mul_a(&f);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn filtration_is_compatible_with_products(a in any::<[i8; 6]>(), l in 0i64..3) {
            let eta = sphere_sample(a);
            let s = eta.variety().clone();
            let north = Point::parse(&s, &["0", "0", "1"]).unwrap();
            // f ∈ m_p^{l+1}
            let f = s.element(&format!("x^{}*(y + 1) + y^{}", l + 1, l + 1)).unwrap();
            let lvl = filtration_level(&eta.mul_a(&f), &north, 8).unwrap();
            prop_assert!(lvl >= l.min(8));
            let d = delta_field(&s, 0, 1).unwrap();
            let lb = filtration_level(&d.mul_a(&f), &north, 8).unwrap();
            let bracket = eta.mul_a(&f).bracket(&d).unwrap();
            let la = filtration_level(&eta.mul_a(&f), &north, 8).unwrap();
            prop_assert!(filtration_level(&bracket, &north, 8).unwrap() >= (la + 0).min(8));
            prop_assert!(lb >= l);
        }
    }
}
