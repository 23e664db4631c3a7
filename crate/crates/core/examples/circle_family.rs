//! The circle family e_k·v_s = (s + αk) v_{k+s}, its realization as a gauge
//! module on the punctured line, and the dual.

use avmod::exactpoly::rat;
use avmod::gauge::{circle_dual_check, circle_e, circle_family, circle_gauge_module, gauge_act, laurent_monomial, DualMap};

fn main() -> avmod::Result<()> {
    let alpha = rat(1, 3);
    let fam = circle_family(&alpha, 6);
    for (k, s) in [(1, 0), (-2, 3), (2, -2)] {
        let (c, idx) = fam.e(k, s)?;
        println!("e_{k}·v_{s} = {c} v_{idx}");
    }
    let m = circle_gauge_module(&alpha);
    let chart = m.chart().clone();
    println!("as fields on t: e_-2·t^3 = {}", gauge_act(&circle_e(&chart, -2), &m.pure(0, laurent_monomial(&chart, 3)), &m));

    for map in [DualMap::Standard, DualMap::Perturbed] {
        let d = circle_dual_check(&alpha, 5, map);
        println!("{map:?}: intertwines = {}, {} checks{}", d.pass, d.checked, d.witness.map(|w| format!(", witness: {w}")).unwrap_or_default());
    }
    Ok(())
}
