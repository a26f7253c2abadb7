//! Explicit eigenfunctions of the transfer operator at s = -n built from
//! transported monomials, checked against the truncated operator.

use schottky_zeta::theorems;
use schottky_zeta::SchottkyData;

fn main() -> schottky_zeta::Result<()> {
    let cylinder = SchottkyData::cylinder(2.0)?;
    let pants = SchottkyData::standard_pants();
    for n in 0..=2 {
        for k in -1..=1 {
            let c = theorems::cylinder_eigenfunctions_for(&cylinder, n, k, 30)?;
            report(&theorems::verify(&cylinder, &c, n, k)?);
        }
    }
    for n in 0..=2 {
        let c = theorems::schottky_eigenfunctions(&pants, n, 30)?;
        report(&theorems::verify(&pants, &c, n, 0)?);
    }

    // The weight-free monomial is invariant only at real s = -n.
    let (ch, sh) = (1.0_f64.cosh(), 1.0_f64.sinh());
    let h = schottky_zeta::MoebiusTransform::new(ch, sh, sh, ch)?;
    let samples = theorems::default_samples(&h, theorems::DEFAULT_VANISHING_SAMPLES)?;
    for s in [num_complex::Complex64::new(-1.0, 0.0), num_complex::Complex64::new(-1.0, std::f64::consts::PI)] {
        println!("vanishing check at s = {s}: {:.3e}", theorems::vanishing_check(&h, s, &samples)?);
    }
    Ok(())
}

fn report(v: &theorems::Verification) {
    println!(
        "{:<9} s = {:<22} count {}  residual {:.2e}  independence {:.2}  {}",
        v.provenance.as_str(),
        format!("{:.4}", v.s),
        v.count,
        v.max_residual,
        v.independence_gap,
        if v.pass { "PASS" } else { "FAIL" }
    );
}
