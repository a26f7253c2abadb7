//! The zeta function of the pants surface three ways: the Fredholm
//! determinant, the Euler product over primitive geodesics, and the trace
//! expansion. The last two only converge to the right of the critical
//! exponent.

use num_complex::Complex64;
use schottky_zeta::zeta::{self, EulerProduct, TraceExpansion};
use schottky_zeta::{schottky, SchottkyData};

fn main() -> schottky_zeta::Result<()> {
    let data = SchottkyData::standard_pants();
    let delta = schottky::delta(&data, 30, schottky::DELTA_TOL)?;
    let euler = EulerProduct::new(&data, zeta::DEFAULT_K_MAX, zeta::DEFAULT_M_MAX, delta);
    let traces = TraceExpansion::new(&data, zeta::DEFAULT_M_MAX, delta);

    println!("{:>16} {:>36} {:>12} {:>12}", "s", "det(1 - T_s)", "euler", "traces");
    for s in [Complex64::new(1.0, 0.0), Complex64::new(0.8, 2.0), Complex64::new(1.5, -4.0)] {
        let det = zeta::fredholm_det(&data, s, 30)?;
        let e = euler.eval(s)?.value;
        let t = traces.log_zeta(s)?.value.exp();
        println!("{s:>16.3} {det:>36.14} {:>12.2e} {:>12.2e}", (e / det - 1.0).norm(), (t / det - 1.0).norm());
    }

    // Left of δ only the determinant makes sense.
    let s = Complex64::new(-0.5, 1.0);
    println!("det at {s}: {:.14}", zeta::fredholm_det(&data, s, 30)?);
    println!("euler at {s}: {}", euler.eval(s).unwrap_err());
    Ok(())
}
