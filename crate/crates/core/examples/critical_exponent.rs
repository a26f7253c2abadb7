//! The critical exponent δ as the point where the leading eigenvalue of T_s
//! equals 1, for a family of pants surfaces whose disks move apart.

use schottky_zeta::schottky::{self, Disk};
use schottky_zeta::{zeta, SchottkyData};

fn main() -> schottky_zeta::Result<()> {
    for spread in [2.0, 3.0, 4.0, 6.0] {
        let disks = [(1, -3.0 * spread), (-1, -spread), (2, spread), (-2, 3.0 * spread)]
            .into_iter()
            .map(|(j, c)| Disk::new(c, 1.0).map(|d| (j, d)))
            .collect::<schottky_zeta::Result<Vec<_>>>()?;
        let data = SchottkyData::from_disks(disks)?;
        let delta = schottky::delta(&data, 30, schottky::DELTA_TOL)?;
        let det = zeta::fredholm_det(&data, delta.into(), 30)?;
        println!("spread {spread}: delta = {delta:.12}  |det(1 - T_delta)| = {:.1e}", det.norm());
    }
    Ok(())
}
