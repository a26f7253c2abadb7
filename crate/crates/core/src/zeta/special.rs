//! Gamma, Barnes G and the gamma factor `G_∞(s) = (2π)^{-s} Γ(s) G(s)²`.
//!
//! All three are evaluated in logarithmic form: the argument is shifted to
//! `Re z ≥ SHIFT_TARGET` with the functional equations, where the Stirling
//! type asymptotic series converge to machine precision.

use std::f64::consts::PI;

use num_complex::Complex64;

const SHIFT_TARGET: f64 = 16.0;
/// ζ'(-1) = 1/12 - ln A (Glaisher's constant A).
const ZETA_PRIME_MINUS_ONE: f64 = -0.165_421_143_700_450_93;

/// B₂, B₄, …, B₂₆.
const BERNOULLI_EVEN: [f64; 13] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
];

fn shift_for(z: Complex64) -> usize {
    if z.re >= SHIFT_TARGET {
        0
    } else {
        (SHIFT_TARGET - z.re).ceil() as usize
    }
}

/// Stirling series for ln Γ(z), `Re z ≥ SHIFT_TARGET`.
fn ln_gamma_asymptotic(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut term = inv;
    let mut series = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI_EVEN.iter().enumerate().take(10) {
        let k = (k + 1) as f64;
        series += term * (b / (2.0 * k * (2.0 * k - 1.0)));
        term *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series
}

/// Asymptotic series for ln G(u + 1), `Re u ≥ SHIFT_TARGET - 1`.
fn ln_barnes_asymptotic(u: Complex64) -> Complex64 {
    let lu = u.ln();
    let inv2 = (u * u).inv();
    let mut term = inv2;
    let mut series = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI_EVEN.iter().enumerate().skip(1).take(11) {
        let k = k as f64;
        series += term * (b / (4.0 * k * (k + 1.0)));
        term *= inv2;
    }
    0.5 * u * u * lu - 0.75 * u * u + 0.5 * u * (2.0 * PI).ln() - lu / 12.0 + ZETA_PRIME_MINUS_ONE + series
}

/// A logarithm of Γ(z) (branch unspecified; exponentiates to Γ).
pub fn ln_gamma(z: Complex64) -> Complex64 {
    let k = shift_for(z);
    let correction: Complex64 = (0..k).map(|i| (z + i as f64).ln()).sum();
    ln_gamma_asymptotic(z + k as f64) - correction
}

pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

/// A logarithm of the Barnes G-function.
pub fn ln_barnes_g(z: Complex64) -> Complex64 {
    let k = shift_for(z);
    let w = z + k as f64;
    let correction: Complex64 = (0..k).map(|i| (i + 1) as f64 * (z + i as f64).ln()).sum();
    ln_barnes_asymptotic(w - 1.0) - k as f64 * ln_gamma_asymptotic(w) + correction
}

/// Barnes G-function: `G(1) = 1`, `G(z + 1) = Γ(z) G(z)`, zeros of order
/// `n + 1` at `z = -n`.
pub fn barnes_g(z: Complex64) -> Complex64 {
    ln_barnes_g(z).exp()
}

/// `(2π)^{-z} Γ(z) G(z)²`, an entire function with zeros of order `2n + 1` at `-n`.
pub fn g_infty(z: Complex64) -> Complex64 {
    let k = shift_for(z);
    let w = z + k as f64;
    // Γ(z) G(z)² contributes (2i + 1) ln(z + i) from the shift.
    let correction: Complex64 = (0..k).map(|i| (2 * i + 1) as f64 * (z + i as f64).ln()).sum();
    let ln = -z * (2.0 * PI).ln()
        + ln_gamma_asymptotic(w) * (1.0 - 2.0 * k as f64)
        + 2.0 * ln_barnes_asymptotic(w - 1.0)
        + correction;
    ln.exp()
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
        (a - b).norm() <= rel * b.norm().max(1e-300)
    }

    #[test]
    fn gamma_reference_values() {
        // Reference values from a 30-digit multiprecision evaluation.
        let cases = [
            (c(0.5, 0.0), c(1.77245385090551602729816748334, 0.0)),
            (c(1.0, 1.0), c(0.498015668118356042713691117462, -0.154949828301810685124955130484)),
            (c(-1.5, 0.3), c(1.59792727807546625676548630481, 0.343934638111282001214446084847)),
            (c(7.25, 0.0), c(1155.38101391998968720270376797, 0.0)),
        ];
        for (z, expected) in cases {
            assert!(close(gamma(z), expected, 1e-13), "Γ({z}) = {}", gamma(z));
        }
        for n in 1..8u32 {
            let fact: f64 = (1..n).map(f64::from).product();
            assert!(close(gamma(c(n as f64, 0.0)), c(fact, 0.0), 1e-13));
        }
    }

    #[test]
    fn barnes_reference_values() {
        assert!(close(barnes_g(c(1.0, 0.0)), c(1.0, 0.0), 1e-13));
        assert!(close(barnes_g(c(2.0, 0.0)), c(1.0, 0.0), 1e-13));
        assert!(close(barnes_g(c(3.0, 0.0)), c(1.0, 0.0), 1e-13));
        assert!(close(barnes_g(c(4.0, 0.0)), c(2.0, 0.0), 1e-13));
        assert!(close(barnes_g(c(5.0, 0.0)), c(12.0, 0.0), 1e-13));
        let cases = [
            (c(0.5, 0.0), c(0.603244281209446206191429224535, 0.0)),
            (c(1.0, 1.0), c(1.80387672692513793105729099461, 0.00671757057971002953229486400079)),
            (c(2.5, -0.7), c(0.846715337011749576817084152692, 0.045483703381720182955323688286)),
            (c(-1.5, 0.3), c(-0.1765563668204901227608146321, -0.0496023784498590469107740622875)),
            (c(7.25, 0.0), c(150370.157947835967033108723911, 0.0)),
            (c(0.3, 4.0), c(-107.675954292454864275784694481, 32.5773455660106673372896706942)),
        ];
        for (z, expected) in cases {
            assert!(close(barnes_g(z), expected, 1e-12), "G({z}) = {}", barnes_g(z));
        }
    }

    #[test]
    fn barnes_zeros_at_nonpositive_integers() {
        for n in 0..4 {
            assert_eq!(barnes_g(c(-(n as f64), 0.0)), c(0.0, 0.0));
        }
    }

    #[test]
    fn barnes_recurrence_on_grid() {
        for a in 0..5 {
            for b in 0..5 {
                let s = c(1.0 + 0.5 * a as f64, -1.0 + 0.5 * b as f64);
                let lhs = barnes_g(s + 1.0);
                let rhs = gamma(s) * barnes_g(s);
                assert!((lhs - rhs).norm() / lhs.norm() < 1e-10, "s={s}");
            }
        }
    }

    #[test]
    fn g_infty_values() {
        assert!(close(g_infty(c(1.0, 0.0)), c(1.0 / (2.0 * PI), 0.0), 1e-13));
        assert!(close(g_infty(c(3.0, 0.0)), c(0.00806288360829987229610551317214209, 0.0), 1e-12));
        assert!(close(
            g_infty(c(0.5, 0.5)),
            c(0.438314141636316492679205287755023, -0.130682707396090046082442344719118),
            1e-12
        ));
        // Agrees with its defining product away from the poles of Γ.
        let s = c(-1.3, 0.4);
        let direct = (-s * (2.0 * PI).ln()).exp() * gamma(s) * barnes_g(s) * barnes_g(s);
        assert!(close(g_infty(s), direct, 1e-11));
    }

    #[test]
    fn g_infty_near_minus_one_has_order_three() {
        // Γ has a simple pole and G² a zero of order 4: net order 3.
        let base = c(-1.0, 0.0);
        let h1 = c(1e-3, 1e-3);
        let ratio = g_infty(base + h1 * 2.0) / g_infty(base + h1);
        assert!((ratio.norm() - 8.0).abs() < 0.05, "{ratio}");
    }
}
