//! The Selberg zeta function of a Schottky surface, evaluated three ways:
//! as the Fredholm determinant `det(1 - T_s)`, as the Euler product over
//! primitive geodesics, and through the trace expansion
//! `ln Z(s) = -Σ_m tr(T_s^m)/m`.
//!
//! The Euler product and the trace expansion only converge for `Re s > δ`;
//! callers pass `δ` explicitly so it is computed once per surface.

pub mod special;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::schottky::{fold_cyclic_words, primitive_classes, SchottkyData};
use crate::transfer;

pub use special::{barnes_g, g_infty, gamma, ln_barnes_g, ln_gamma};

pub const DEFAULT_K_MAX: usize = 40;
pub const DEFAULT_M_MAX: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Determinant,
    Euler,
    Traces,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Determinant => "determinant",
            Method::Euler => "euler",
            Method::Traces => "traces",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Truncation {
    Determinant { n: usize },
    Euler { k_max: usize, m_max: usize },
    Traces { m_max: usize },
}

impl Truncation {
    pub fn method(&self) -> Method {
        match self {
            Truncation::Determinant { .. } => Method::Determinant,
            Truncation::Euler { .. } => Method::Euler,
            Truncation::Traces { .. } => Method::Traces,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Truncation::Determinant { n } => format!("N={n}"),
            Truncation::Euler { k_max, m_max } => format!("k_max={k_max};m_max={m_max}"),
            Truncation::Traces { m_max } => format!("m_max={m_max}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaValue {
    pub s: Complex64,
    pub value: Complex64,
    pub truncation: Truncation,
    /// Size of the first neglected factor or term, when the method has one.
    pub tail_estimate: Option<f64>,
}

impl ZetaValue {
    pub fn method(&self) -> Method {
        self.truncation.method()
    }
}

/// `det(1 - T_s)` at truncation `n`.
pub fn fredholm_det(data: &SchottkyData, s: Complex64, n: usize) -> Result<Complex64> {
    Ok(transfer::assemble(data, s, n)?.fredholm_det())
}

pub fn fredholm_value(data: &SchottkyData, s: Complex64, n: usize) -> Result<ZetaValue> {
    Ok(ZetaValue {
        s,
        value: fredholm_det(data, s, n)?,
        truncation: Truncation::Determinant { n },
        tail_estimate: None,
    })
}

fn check_domain(s: Complex64, delta: f64) -> Result<()> {
    if s.re > delta {
        Ok(())
    } else {
        Err(Error::DomainError(format!("Re s = {} does not exceed the critical exponent {delta}", s.re)))
    }
}

/// `1 - e^{-(s+k)ℓ}` as a logarithm, summed over `k ≤ k_max`.
fn ln_local_factor(s: Complex64, length: f64, k_max: usize) -> Complex64 {
    (0..=k_max).map(|k| (1.0 - (-(s + k as f64) * length).exp()).ln()).sum()
}

/// Euler product over primitive classes of word length `≤ m_max`, precomputed
/// for repeated evaluation.
#[derive(Clone, Debug)]
pub struct EulerProduct {
    lengths: Vec<f64>,
    delta: f64,
    k_max: usize,
    m_max: usize,
}

impl EulerProduct {
    pub fn new(data: &SchottkyData, k_max: usize, m_max: usize, delta: f64) -> Self {
        let lengths = primitive_classes(data, m_max).into_iter().map(|c| c.length).collect();
        Self { lengths, delta, k_max, m_max }
    }

    pub fn eval(&self, s: Complex64) -> Result<ZetaValue> {
        check_domain(s, self.delta)?;
        let ln: Complex64 = self.lengths.iter().map(|&l| ln_local_factor(s, l, self.k_max)).sum();
        let l_min = self.lengths.first().copied().unwrap_or(f64::INFINITY);
        Ok(ZetaValue {
            s,
            value: ln.exp(),
            truncation: Truncation::Euler { k_max: self.k_max, m_max: self.m_max },
            tail_estimate: Some((-(s.re + (self.k_max + 1) as f64) * l_min).exp()),
        })
    }
}

pub fn euler_product(data: &SchottkyData, s: Complex64, k_max: usize, m_max: usize, delta: f64) -> Result<Complex64> {
    check_domain(s, delta)?;
    Ok(EulerProduct::new(data, k_max, m_max, delta).eval(s)?.value)
}

/// `tr T_s^m = Σ e^{-sℓ(w)} / (1 - e^{-ℓ(w)})` over cyclically reduced words
/// of length `m ≥ 1`.
pub fn trace_power(data: &SchottkyData, s: Complex64, m: usize) -> Complex64 {
    assert!(m >= 1, "trace_power needs m >= 1");
    cyclic_lengths(data, m).iter().map(|&l| trace_term(s, l)).sum()
}

fn trace_term(s: Complex64, length: f64) -> Complex64 {
    (-s * length).exp() / (1.0 - (-length).exp())
}

fn cyclic_lengths(data: &SchottkyData, m: usize) -> Vec<f64> {
    fold_cyclic_words(data, m, |_, g| Some(g.displacement_length().expect("hyperbolic")))
}

/// Cached word lengths for the trace expansion of `ln Z`.
#[derive(Clone, Debug)]
pub struct TraceExpansion {
    by_word_length: Vec<Vec<f64>>,
    delta: f64,
}

impl TraceExpansion {
    pub fn new(data: &SchottkyData, m_max: usize, delta: f64) -> Self {
        Self { by_word_length: (1..=m_max).map(|m| cyclic_lengths(data, m)).collect(), delta }
    }

    pub fn m_max(&self) -> usize {
        self.by_word_length.len()
    }

    pub fn trace_power(&self, s: Complex64, m: usize) -> Complex64 {
        self.by_word_length[m - 1].iter().map(|&l| trace_term(s, l)).sum()
    }

    /// `-Σ_{m ≤ m_max} tr(T_s^m)/m`.
    pub fn log_zeta(&self, s: Complex64) -> Result<ZetaValue> {
        check_domain(s, self.delta)?;
        let terms: Vec<Complex64> = (1..=self.m_max()).map(|m| self.trace_power(s, m) / m as f64).collect();
        let value = -terms.iter().sum::<Complex64>();
        Ok(ZetaValue {
            s,
            value,
            truncation: Truncation::Traces { m_max: self.m_max() },
            tail_estimate: terms.last().map(|t| t.norm()),
        })
    }
}

pub fn log_zeta_traces(data: &SchottkyData, s: Complex64, m_max: usize, delta: f64) -> Result<Complex64> {
    check_domain(s, delta)?;
    Ok(TraceExpansion::new(data, m_max, delta).log_zeta(s)?.value)
}

/// Order `(2n + 1)(-χ)` of the zero of `G_∞^{-χ}` at `s = -n`.
pub fn topological_order(n: u32, chi: i64) -> Result<u32> {
    if chi > 0 {
        return Err(Error::PositiveChi(chi));
    }
    Ok((2 * n + 1) * (-chi) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cylinder_closed_form(s: Complex64, l: f64, k_max: usize) -> Complex64 {
        (0..=k_max).map(|k| (1.0 - (-(s + k as f64) * l).exp()).powi(2)).product()
    }

    #[test]
    fn cylinder_determinant_matches_closed_form() {
        let cyl = SchottkyData::cylinder(2.0).unwrap();
        let det = fredholm_det(&cyl, c(1.0, 0.0), 30).unwrap();
        let expected = cylinder_closed_form(c(1.0, 0.0), 2.0, 30);
        assert!((det - expected).norm() < 1e-10);
    }

    #[test]
    fn determinant_truncation_convergence() {
        let cyl = SchottkyData::cylinder(2.0).unwrap();
        let s = c(-0.5, 2.0);
        let d = |n| fredholm_det(&cyl, s, n).unwrap();
        // The geometric truncation rate of this basis gives ~6e-9 at N = 24
        // and ~3e-11 at N = 30.
        assert!((d(24) - d(48)).norm() < 1e-8);
        assert!((d(30) - d(60)).norm() < 1e-10);
    }

    #[test]
    fn determinant_vanishes_at_delta() {
        let x2 = SchottkyData::standard_pants();
        let delta = crate::schottky::delta(&x2, 30, 1e-10).unwrap();
        assert!(delta > 0.0 && delta < 1.0);
        assert!(fredholm_det(&x2, c(delta, 0.0), 30).unwrap().norm() < 1e-8);
    }

    #[test]
    fn cylinder_euler_product_is_closed_form() {
        let cyl = SchottkyData::cylinder(1.5).unwrap();
        let s = c(0.7, 1.1);
        let e = euler_product(&cyl, s, 20, 5, 0.0).unwrap();
        assert!((e - cylinder_closed_form(s, 1.5, 20)).norm() < 1e-14);
    }

    #[test]
    fn euler_product_domain() {
        let cyl = SchottkyData::cylinder(1.5).unwrap();
        assert!(matches!(euler_product(&cyl, c(-0.1, 0.0), 10, 3, 0.0), Err(Error::DomainError(_))));
        assert!(matches!(log_zeta_traces(&cyl, c(0.0, 2.0), 10, 0.0), Err(Error::DomainError(_))));
    }

    #[test]
    fn pants_euler_product_matches_determinant() {
        let x2 = SchottkyData::standard_pants();
        let delta = crate::schottky::delta(&x2, 30, 1e-10).unwrap();
        let s = c(delta + 0.5, 0.0);
        let ep = EulerProduct::new(&x2, 40, 12, delta);
        let e12 = ep.eval(s).unwrap().value;
        let e10 = EulerProduct::new(&x2, 40, 10, delta).eval(s).unwrap().value;
        let det = fredholm_det(&x2, s, 30).unwrap();
        assert!((1.0 - e12 / det).norm() < 1e-6);
        assert!((e12 - e10).norm() < 1e-8);
    }

    #[test]
    fn cylinder_traces() {
        let l = 1.3;
        let cyl = SchottkyData::cylinder(l).unwrap();
        let s = c(0.4, -0.8);
        let t1 = trace_power(&cyl, s, 1);
        let expected1 = 2.0 * (-s * l).exp() / (1.0 - (-l).exp());
        assert!((t1 - expected1).norm() < 1e-13);
        let t2 = trace_power(&cyl, s, 2);
        let expected2 = 2.0 * (-2.0 * s * l).exp() / (1.0 - (-2.0 * l).exp());
        assert!((t2 - expected2).norm() < 1e-13);
    }

    #[test]
    fn traces_match_matrix_powers() {
        let x2 = SchottkyData::standard_pants();
        let s = c(1.0, 0.0);
        let t = transfer::assemble(&x2, s, 40).unwrap();
        let mut power = t.entries().clone();
        for m in 1..=4 {
            let exact = trace_power(&x2, s, m);
            assert!((power.trace() - exact).norm() < 1e-8, "m={m}");
            power = &power * t.entries();
        }
    }

    #[test]
    fn trace_expansion_against_determinant() {
        let cyl = SchottkyData::cylinder(2.0).unwrap();
        let s = c(1.0, 0.0);
        let lz = log_zeta_traces(&cyl, s, 20, 0.0).unwrap();
        let det = fredholm_det(&cyl, s, 30).unwrap();
        assert!((lz.exp() - det).norm() < 1e-9);

        let x2 = SchottkyData::standard_pants();
        let delta = crate::schottky::delta(&x2, 30, 1e-10).unwrap();
        let s = c(delta + 0.5, 0.0);
        let te = TraceExpansion::new(&x2, 12, delta);
        let lz = te.log_zeta(s).unwrap();
        let det = fredholm_det(&x2, s, 30).unwrap();
        assert!((1.0 - lz.value.exp() / det).norm() < 1e-6);
        assert!(lz.tail_estimate.unwrap() < 1e-8);
    }

    #[test]
    fn determinant_is_conjugate_symmetric() {
        for data in [SchottkyData::cylinder(2.0).unwrap(), SchottkyData::standard_pants()] {
            for s in [c(0.3, 0.9), c(-1.2, 2.5), c(1.5, -0.4)] {
                let a = fredholm_det(&data, s, 30).unwrap();
                let b = fredholm_det(&data, s.conj(), 30).unwrap();
                assert!((a - b.conj()).norm() < 1e-10 * (1.0 + a.norm()));
            }
        }
    }

    #[test]
    fn no_real_zeros_beyond_delta() {
        let x2 = SchottkyData::standard_pants();
        let delta = crate::schottky::delta(&x2, 30, 1e-10).unwrap();
        let mut s = delta + 0.1;
        while s <= 2.0 {
            assert!(fredholm_det(&x2, c(s, 0.0), 30).unwrap().norm() > 0.01, "s={s}");
            s += 0.05;
        }
    }

    #[test]
    fn topological_orders() {
        for n in 0..5 {
            assert_eq!(topological_order(n, 0).unwrap(), 0);
        }
        assert_eq!(topological_order(0, -1).unwrap(), 1);
        assert_eq!(topological_order(2, -2).unwrap(), 10);
        assert!(matches!(topological_order(0, 1), Err(Error::PositiveChi(1))));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(32))]
        #[test]
        fn conjugate_symmetry_at_random_points(re in -2.0..1.5f64, im in -6.0..6.0f64) {
            let data = SchottkyData::cylinder(2.0).unwrap();
            let s = Complex64::new(re, im);
            let a = fredholm_det(&data, s.conj(), 24).unwrap();
            let b = fredholm_det(&data, s, 24).unwrap().conj();
            proptest::prop_assert!((a - b).norm() <= 1e-10 * (1.0 + b.norm()), "{a} vs {b}");
        }
    }
}
