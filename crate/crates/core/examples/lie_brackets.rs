//! Tangent fields on the sphere and the circle, their brackets and the
//! Jacobi identity.

use avmod::variety::Variety;
use avmod::vfields::{is_vector_field, VectorField};

fn main() -> avmod::Result<()> {
    let sphere = Variety::sphere();
    let rx = VectorField::parse(&sphere, "z*d/dy - y*d/dz")?;
    let ry = VectorField::parse(&sphere, "x*d/dz - z*d/dx")?;
    let rz = VectorField::parse(&sphere, "y*d/dx - x*d/dy")?;
    println!("[Rx, Ry] = {}", rx.bracket(&ry)?);

    let f = sphere.element("x*y")?;
    let a = rx.mul_a(&f);
    let ab = a.bracket(&rz)?;
    println!("[xy Rx, Rz] = {ab}, tangent: {}", is_vector_field(ab.coeffs(), &sphere));

    let jac = rx
        .bracket(&ry.bracket(&a)?)?
        .checked_add(&ry.bracket(&a.bracket(&rx)?)?)?
        .checked_add(&a.bracket(&rx.bracket(&ry)?)?)?;
    println!("Jacobi sum: {jac}");

    // a coefficient tuple off the tangent space is rejected
    let circle = Variety::circle();
    println!("x d/dx on the circle: {:?}", VectorField::parse(&circle, "x*d/dx").err().map(|e| e.to_string()));
    Ok(())
}
