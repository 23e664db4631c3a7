//! From a nonzero element of a Rudakov module down to 1⊗U, and back up:
//! the simplicity probe on the sphere.

use avmod::repn::{gl_family, GlKind};
use avmod::rudakov::{reduction_extract, simplicity_probe, RudElement, RudakovContext};
use avmod::variety::{chart_by_minor, Point, Variety};

fn main() -> avmod::Result<()> {
    let sphere = Variety::sphere();
    let chart = chart_by_minor(&sphere, "2*z")?;
    let north = Point::parse(&sphere, &["0", "0", "1"])?;
    let ctx = RudakovContext::new(&chart, &north, gl_family(&GlKind::Natural, 2)?)?;

    let v = RudElement::parse(2, 2, "y1^2*y2*u1 + 5*y1*y2*u2 - u1")?;
    let (r, base) = reduction_extract(&v, &ctx)?;
    println!("v = {}", ctx.display(&v));
    println!("t^{r:?} · v = {}", ctx.display(&base));
    for level in 0..=3 {
        let p = simplicity_probe(&v, &ctx, level)?;
        println!("level {level}: span of rank {} of {} (reached: {})", p.rank, p.target, p.reached);
    }
    Ok(())
}
