//! The Rudakov module of a level-two module on the affine line at the
//! origin: lowering by ∂, functions acting by −∂/∂y, and higher fields.

use avmod::exactpoly::rat;
use avmod::repn::level_two_line;
use avmod::rudakov::{rud_act_chart_field, rud_act_function, RudElement, RudakovContext};
use avmod::variety::{standard_atlas, Point, Variety};
use avmod::vfields::ChartField;

fn main() -> avmod::Result<()> {
    let line = Variety::affine_space(&["t"]);
    let chart = standard_atlas(&line).remove(0);
    let origin = Point::parse(&line, &["0"])?;
    let ctx = RudakovContext::new(&chart, &origin, level_two_line(&rat(1, 2)))?;

    let v = RudElement::parse(1, 2, "y1^2*u1 - 3*u2")?;
    println!("v = {}", ctx.display(&v));
    for (name, f) in [("d/dt", "1"), ("t d/dt", "t"), ("t^2 d/dt", "t^2"), ("t^3 d/dt", "t^3")] {
        let eta = ChartField::coordinate(&chart, 0, chart.parse_local(f)?);
        println!("{name} · v = {}", ctx.display(&rud_act_chart_field(&eta, &v, &ctx)?));
    }
    println!("t · v = {}", ctx.display(&rud_act_function(&chart.parse_local("t")?, &v, &ctx)?));
    println!("(1 + t)^2 · v = {}", ctx.display(&rud_act_function(&chart.parse_local("(1 + t)^2")?, &v, &ctx)?));
    Ok(())
}
