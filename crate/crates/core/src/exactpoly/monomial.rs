use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Exponent vector of fixed length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn factorial(&self) -> super::Rational {
        let mut acc = super::int(1);
        for &e in &self.0 {
            acc *= super::factorial(e);
        }
        acc
    }

    /// Decrements exponent `i`; `None` if it is already zero.
    pub fn lowered(&self, i: usize) -> Option<Monomial> {
        if self.0[i] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[i] -= 1;
        Some(Monomial(e))
    }

    pub fn raised(&self, i: usize) -> Monomial {
        let mut e = self.0.clone();
        e[i] += 1;
        Monomial(e)
    }

    /// All exponent vectors in `nvars` variables of total degree exactly `d`,
    /// in descending lexicographic order.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(nvars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == nvars {
                prefix.push(d);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=d).rev() {
                prefix.push(e);
                rec(nvars, d - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        rec(nvars, d, &mut Vec::with_capacity(nvars), &mut out);
        out
    }

    pub fn all_up_to_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        (0..=d).flat_map(|k| Monomial::all_of_degree(nvars, k)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Grevlex,
    Lex,
}

/// A monomial order together with a variable priority: `priority[0]` is the
/// most significant variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    priority: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, priority: Vec<usize>) -> Self {
        debug_assert!({
            let mut p = priority.clone();
            p.sort_unstable();
            p.iter().enumerate().all(|(i, &v)| i == v)
        });
        MonomialOrder { kind, priority }
    }

    pub fn grevlex(nvars: usize) -> Self {
        MonomialOrder::new(OrderKind::Grevlex, (0..nvars).collect())
    }

    pub fn lex(nvars: usize) -> Self {
        MonomialOrder::new(OrderKind::Lex, (0..nvars).collect())
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (ea, eb) = (a.exponents(), b.exponents());
        match self.kind {
            OrderKind::Lex => {
                for &v in &self.priority {
                    match ea[v].cmp(&eb[v]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            OrderKind::Grevlex => match a.degree().cmp(&b.degree()) {
                Ordering::Equal => {
                    for &v in self.priority.iter().rev() {
                        match ea[v].cmp(&eb[v]) {
                            Ordering::Equal => continue,
                            o => return o.reverse(),
                        }
                    }
                    Ordering::Equal
                }
                o => o,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_breaks_ties_on_last_variable() {
        let ord = MonomialOrder::grevlex(3);
        let x2 = Monomial::new(vec![2, 0, 0]);
        let z2 = Monomial::new(vec![0, 0, 2]);
        let xz = Monomial::new(vec![1, 0, 1]);
        let y2 = Monomial::new(vec![0, 2, 0]);
        assert_eq!(ord.cmp(&x2, &z2), Ordering::Greater);
        assert_eq!(ord.cmp(&y2, &xz), Ordering::Greater);
        assert_eq!(ord.cmp(&Monomial::one(3), &z2), Ordering::Less);
    }

    #[test]
    fn priority_permutation_reorders() {
        let ord = MonomialOrder::new(OrderKind::Lex, vec![2, 1, 0]);
        let x = Monomial::var(3, 0);
        let z = Monomial::var(3, 2);
        assert_eq!(ord.cmp(&z, &x), Ordering::Greater);
    }

    #[test]
    fn degree_enumeration_counts() {
        assert_eq!(Monomial::all_of_degree(2, 3).len(), 4);
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_up_to_degree(2, 2).len(), 6);
        assert_eq!(Monomial::all_of_degree(0, 0).len(), 1);
    }
}
