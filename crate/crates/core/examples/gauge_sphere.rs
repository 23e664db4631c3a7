//! The rank-one gauge modules on the sphere: the action in the chart
//! N(2z), the chart-free formula, a submodule, and the chart transition.

use avmod::exactpoly::{fmt_rational, rat};
use avmod::gauge::{field_act, sphere_chart_free, sphere_f_alpha, sphere_submodule_closed};
use avmod::variety::Variety;
use avmod::vfields::delta_field;

fn main() -> avmod::Result<()> {
    let alpha = rat(1, 2);
    let m = sphere_f_alpha(&alpha);
    let sphere = Variety::sphere();
    println!("B = ({}, {})", m.field().entry(0, 0, 0), m.field().entry(1, 0, 0));

    let delta = delta_field(&sphere, 0, 1)?.scale(&rat(1, 2));
    let f = sphere.element("x + z")?;
    let g = sphere.element("y^2")?;
    let lhs = field_act(&delta.mul_a(&f), &m.pure_a(0, &g), &m);
    let rhs = sphere_chart_free(&f, &delta, &g, &alpha);
    println!("alpha = {}", fmt_rational(&alpha));
    println!("(f Δ12)·(g ⊗ u) = {lhs}");
    println!("chart-free:       ({rhs}) ⊗ u1");

    for a in [1, 2] {
        println!("z^-{a} A ⊗ u closed for alpha = {a}: {:?}", sphere_submodule_closed(a, 3));
    }
    Ok(())
}
