//! The pairing between a gauge module and the Rudakov module of the dual
//! fiber: word evaluation, adjointness, and independence of the word.

use avmod::exactpoly::{fmt_rational, int, rat};
use avmod::gauge::sphere_f_alpha;
use avmod::pairing::{random_rewrite, Letter, OperatorWord, PairingContext};
use avmod::rudakov::RudElement;
use avmod::variety::{Point, Variety};
use avmod::vfields::ChartField;
use rand::SeedableRng;

fn main() -> avmod::Result<()> {
    let m = sphere_f_alpha(&rat(1, 2));
    let north = Point::parse(&Variety::sphere(), &["0", "0", "1"])?;
    let ctx = PairingContext::new(&m, &north)?;
    let chart = m.chart().clone();

    let el = m.parse_element(&["x^2 + y + 1"])?;
    let d1 = ChartField::coordinate(&chart, 0, chart.one());
    let w = OperatorWord(vec![Letter::Function(chart.parse_local("1 + x")?), Letter::Field(d1.clone()), Letter::Field(d1.clone())]);
    let phi = vec![int(1)];
    println!("<m, {w}·(1⊗φ)> = {}", fmt_rational(&ctx.pair_word(&el, &w, &phi)?));
    let reduced = ctx.reduce(&[(int(1), w.clone(), phi.clone())])?;
    println!("the word reduces to {}", ctx.rudakov().display(&reduced));

    let r = RudElement::parse(2, 1, "y1*u1 - 2*y2^2*u1")?;
    let (a, b) = ctx.adjoint_field(&el, &d1, &r)?;
    println!("<d1·m, r> = {a}, -<m, d1·r> = {b}");

    // rewriting the word with the defining relations keeps the pairing
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let lhs = vec![(int(1), w, phi)];
    let rhs = random_rewrite(&ctx, &lhs, &mut rng)?;
    let check = ctx.well_definedness_check(&el, &lhs, &rhs)?;
    println!("rewritten into {} terms; equal reductions {}, equal pairings {}", rhs.len(), check.equal_reductions, check.pass);
    Ok(())
}
