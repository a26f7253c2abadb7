//! Assembles the truncated transfer operator of the pants surface and looks
//! at its spectrum at a few real points: the leading eigenvalue crosses 1 at
//! the critical exponent, and at s = 0, -1 the eigenvalue 1 is repeated.

use num_complex::Complex64;
use schottky_zeta::transfer::{self, DEFAULT_KERNEL_TOL};
use schottky_zeta::SchottkyData;

fn main() -> schottky_zeta::Result<()> {
    let data = SchottkyData::standard_pants();
    let n = 30;
    for s in [1.0, 0.5, 0.31018968, 0.0] {
        println!("s = {s:<10}  leading eigenvalue {:.10}", transfer::leading_eigenvalue(&data, s, n)?);
    }
    for s in [0.0, -1.0, -2.0] {
        let t = transfer::assemble(&data, Complex64::new(s, 0.0), n)?;
        let k = transfer::kernel_report(&t, DEFAULT_KERNEL_TOL);
        println!("s = {s:<4}  dim ker(I - T) = {}  gap {:.2e}", k.dimension, k.gap);
    }
    Ok(())
}
