//! Zeros of det(1 - T_s) for the cylinder of length 2 (a lattice of double
//! zeros) and near s = 0 for the pants surface, where the zero is a
//! resonance on top of the topological zero.

use schottky_zeta::resonances::{self, SearchBox};
use schottky_zeta::SchottkyData;

fn main() -> schottky_zeta::Result<()> {
    let cylinder = SchottkyData::cylinder(2.0)?;
    let search = resonances::locate_zeros(&cylinder, &SearchBox::new(-2.4, 0.4, -0.4, 6.6)?, 24, 1e-8)?;
    println!("cylinder: winding number {} on the box", search.box_winding);
    for r in search.classify(cylinder.euler_characteristic())? {
        println!("  {:.10}  order {}  resonance multiplicity {}", r.location, r.order, r.resonance_multiplicity);
    }

    let pants = SchottkyData::standard_pants();
    let search = resonances::locate_zeros(&pants, &SearchBox::around(0.0.into(), 0.2)?, 30, 1e-8)?;
    for r in search.classify(pants.euler_characteristic())? {
        println!(
            "pants: {:.3e}  order {}  topological {}  resonance multiplicity {}",
            r.location, r.order, r.topological_order, r.resonance_multiplicity
        );
    }
    Ok(())
}
