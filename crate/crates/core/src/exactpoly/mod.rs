//! Exact rational numbers and sparse multivariate polynomials.
//!
//! Every polynomial carries a shared [`PolyRing`] (variable names plus the
//! active [`MonomialOrder`]); arithmetic between polynomials from different
//! rings is a structural error.

mod monomial;
mod parse;
mod poly;

pub use monomial::{Monomial, MonomialOrder, OrderKind};
pub use parse::parse_rational;
pub use poly::{PolyRing, Polynomial};
pub(crate) use poly::{forward_binop, same_ring};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The ground field.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    BigRational::from_integer(acc)
}

/// `n(n-1)...(n-k+1)`, the falling factorial.
pub fn falling_factorial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= BigInt::from(n - j);
    }
    BigRational::from_integer(acc)
}

pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Writes `coeff*body` in the canonical sign-separated style used by every
/// printer in the crate: `first` controls whether a leading `+` is dropped.
pub(crate) fn push_signed_term(out: &mut String, coeff: &Rational, body: &str, first: bool) {
    let neg = coeff.is_negative();
    let mag = coeff.abs();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if body.is_empty() {
        out.push_str(&fmt_rational(&mag));
    } else if mag.is_one() {
        out.push_str(body);
    } else {
        out.push_str(&fmt_rational(&mag));
        out.push('*');
        out.push_str(body);
    }
}
