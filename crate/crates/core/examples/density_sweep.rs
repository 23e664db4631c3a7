//! Constructive density in A_(h)⊗U: from one element, a multiple
//! h^N f (A⊗U) with f(p) ≠ 0 inside the submodule it generates.

use avmod::exactpoly::int;
use avmod::gauge::{density_closed_form, density_operator, density_sweep, sphere_f_alpha, SweepOutcome};
use avmod::variety::{Point, Variety};

fn main() -> avmod::Result<()> {
    let m = sphere_f_alpha(&int(1));
    let north = Point::parse(&Variety::sphere(), &["0", "0", "1"])?;
    let v = m.parse_element(&["x^2*y - y"])?;
    println!("(t1 h d1)·v - t1 (h d1·v) = {}", density_operator(&m, 0, 0, &v)?);
    println!("closed form             = {}", density_closed_form(&m, 0, 0, &v));

    match density_sweep(&m, &v, &north, 10_000)? {
        SweepOutcome::Reached { n, f, f_at_point, operations, trace, .. } => {
            for step in trace {
                println!("  {:<40} {}", step.step, step.result);
            }
            println!("reached h^{n} ({f}) with f(p) = {f_at_point} after {operations} operations");
        }
        SweepOutcome::BudgetExhausted { operations, .. } => println!("budget exhausted after {operations} operations"),
    }
    Ok(())
}
