//! Gröbner bases and normal forms in coordinate rings.

use avmod::exactpoly::{PolyRing, Polynomial};
use avmod::groebner::{buchberger, Ideal, QuotientElement};

fn main() -> avmod::Result<()> {
    // the twisted cubic
    let r = PolyRing::grevlex(&["x", "y", "z"]);
    let gens: Vec<Polynomial> = ["y - x^2", "z - x^3"].iter().map(|g| Polynomial::parse(&r, g)).collect::<avmod::Result<_>>()?;
    for g in buchberger(&gens) {
        println!("basis element: {g}");
    }
    let cubic = Ideal::new(&r, gens)?;
    println!("x*z - y^2 ∈ I: {}", cubic.contains(&Polynomial::parse(&r, "x*z - y^2")?));

    // arithmetic on the sphere happens on normal forms
    let sphere = Ideal::new(&r, vec![Polynomial::parse(&r, "x^2 + y^2 + z^2 - 1")?])?;
    let a = QuotientElement::parse(&sphere, "x^2 + 2*y^2")?;
    let b = QuotientElement::parse(&sphere, "x^2 - z^2")?;
    println!("a = {a}");
    println!("a*b = {}", a.checked_mul(&b)?);
    println!("x^2 + y^2 + z^2 reduces to {}", QuotientElement::parse(&sphere, "x^2 + y^2 + z^2")?);
    Ok(())
}
