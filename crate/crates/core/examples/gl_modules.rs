//! Finite-dimensional modules: gl_s families, duals, and a level-two
//! module with its homomorphism check.

use avmod::exactpoly::{int, Monomial};
use avmod::repn::{gl_family, level_two_line, FiniteModule, GlKind, LPlusBasis};

fn main() -> avmod::Result<()> {
    for kind in [GlKind::Natural, GlKind::Sym { d: 2 }, GlKind::Ext { d: 2 }] {
        let u = gl_family(&kind, 3)?;
        println!("{kind:?}: dimension {}, trace of rho(E11) = {}", u.dim(), u.e(0, 0).trace());
    }
    let nat = gl_family(&GlKind::Natural, 2)?;
    println!("natural: rho(E12) =\n{}", nat.e(0, 1));
    println!("dual:    rho(E12) =\n{}", nat.dual().e(0, 1));

    let good = level_two_line(&int(1));
    println!("level two line is a module: {}", good.homomorphism_witness().is_none());

    // breaking X∂ ↦ diag(c+1, c) destroys the bracket relation
    let mut action = good.actions().clone();
    let key = LPlusBasis::new(Monomial::new(vec![1]), 0);
    let mut m = action[&key].clone();
    m.set(0, 0, int(3));
    action.insert(key, m);
    let bad = FiniteModule::new(1, 2, 2, action)?;
    println!("corrupted: {}", bad.homomorphism_witness().map(|w| w.to_string()).unwrap_or_default());
    Ok(())
}
