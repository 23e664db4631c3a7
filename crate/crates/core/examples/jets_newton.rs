//! Power series of the ambient coordinates at a point, by Newton lifting,
//! and the truncated lifts of the coordinate jets.

use avmod::jets::{embed_field, PointJets};
use avmod::variety::{chart_by_minor, Point, Variety};
use avmod::vfields::truncated_lift;

fn main() -> avmod::Result<()> {
    let sphere = Variety::sphere();
    let chart = chart_by_minor(&sphere, "2*z")?;
    let north = Point::parse(&sphere, &["0", "0", "1"])?;
    let jets = PointJets::new(&chart, &north, 6)?;
    println!("z = {}", jets.coordinate(2));

    for n in 0..=2 {
        let eta = truncated_lift(&chart, &north, 0, n)?;
        println!("lift of d/dX1 to order {n}: {eta}");
        println!("    its jet: {}", embed_field(&eta, &jets, n + 2));
    }
    Ok(())
}
