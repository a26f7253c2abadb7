//! Fixed points, translation length, diagonalizer and inverter of the
//! cylinder generator, and the weighted-composition factor it induces.

use num_complex::Complex64;
use schottky_zeta::{BranchContext, MoebiusTransform, SpherePoint};

fn main() -> schottky_zeta::Result<()> {
    let (ch, sh) = (1.0_f64.cosh(), 1.0_f64.sinh());
    let h = MoebiusTransform::new(ch, sh, sh, ch)?;

    let (repelling, attracting) = h.fixed_points()?;
    println!("trace              {:.12}", h.trace());
    println!("kind               {:?}", h.classify());
    println!("fixed points       {repelling:?} -> {attracting:?}");
    println!("translation length {:.12}", h.displacement_length()?);

    // p sends 0 and ∞ to the fixed points, so p⁻¹hp is a dilation.
    let p = h.diagonalizer()?;
    let dilation = p.inverse() * h * p;
    println!("p^-1 h p           {:?}", dilation.matrix());
    println!("p(0)               {:?}", p.apply(SpherePoint::real(0.0)));

    let k = h.inverter()?;
    println!("k h k^-1 = h^-1    {}", (k * h * k.inverse()).approx_eq(&h.inverse(), 1e-12));

    let ctx = BranchContext::new(-ch / sh, 1.0 / sh)?;
    let s = Complex64::new(0.5, 1.0);
    let z = Complex64::new(-ch / sh, 0.1);
    println!("weight at s={s}    {:.12}", h.jacobian_weight(s, &ctx, z)?);
    Ok(())
}
