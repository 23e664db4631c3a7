//! The unit sphere: Jacobian, standard atlas, local parameters, and the
//! relation among the rotation fields.

use avmod::exactpoly::rat;
use avmod::variety::{local_parameter_check, standard_atlas, Point, Variety};
use avmod::vfields::delta_field;

fn main() -> avmod::Result<()> {
    let sphere = Variety::sphere();
    println!("J = {:?}", sphere.jacobian()[0].iter().map(|e| e.to_string()).collect::<Vec<_>>());
    println!("rank {}, dimension {}", sphere.rank(), sphere.dim());

    for chart in standard_atlas(&sphere) {
        println!("chart N({}) with parameters {:?}", chart.h(), chart.param_names());
    }

    let p = Point::parse(&sphere, &["3/5", "0", "4/5"])?;
    let chart = p.default_chart()?;
    println!("p = (3/5, 0, 4/5) lies in N({}); local parameters: {}", chart.h(), local_parameter_check(&chart, &p)?);

    // Δ_ij = x_j ∂_i − x_i ∂_j; delta_field gives 2Δ_ij on the sphere
    let half = rat(1, 2);
    let d = |i, j| delta_field(&sphere, i, j).map(|f| f.scale(&half));
    let rel = d(1, 2)?
        .mul_a(&sphere.var(0))
        .checked_add(&d(2, 0)?.mul_a(&sphere.var(1)))?
        .checked_add(&d(0, 1)?.mul_a(&sphere.var(2)))?;
    println!("x Δ23 + y Δ31 + z Δ12 = {rel}");
    Ok(())
}
