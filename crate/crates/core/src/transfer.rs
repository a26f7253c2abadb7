//! Truncated transfer operators on direct sums of Bergman spaces.
//!
//! Each disk `D_j` carries the orthonormal Bergman basis
//! `e_n(w) = √((n+1)/π) wⁿ` in the unit coordinate `w = (z - c_j)/ρ_j`.
//! The block in row `i`, column `j` is the matrix of the weighted composition
//! `τ_s(S_j) f(z) = ((S_j⁻¹)'(z))^s f(S_j⁻¹ z)` from `H²(D_j)` to `H²(D_i)`;
//! it vanishes when `i = -j`.
//!
//! Coefficients of an image function are read off from samples on the
//! circle of radius [`SAMPLE_RADIUS`] (unit coordinates of the target disk)
//! by a discrete Fourier transform.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::schottky::{index_at, slot, Disk, SchottkyData};

pub const SAMPLE_RADIUS: f64 = 0.8;
pub const DEFAULT_TRUNCATION: usize = 30;
pub const DEFAULT_KERNEL_TOL: f64 = 1e-7;
/// Minimal ratio between the smallest singular value above the kernel
/// threshold and the largest one below it.
pub const KERNEL_GAP: f64 = 1e3;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn forward_fft(len: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(len))
}

/// A disk together with a truncation order for its Bergman basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasisSpec {
    pub disk: Disk,
    pub n: usize,
}

impl BasisSpec {
    pub fn new(disk: Disk, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::DomainError("truncation order must be at least 1".into()));
        }
        Ok(Self { disk, n })
    }

    /// Value of the `m`-th orthonormal basis function at `z`.
    pub fn basis_value(&self, m: usize, z: Complex64) -> Complex64 {
        let w = (z - self.disk.center) / self.disk.radius;
        ((m + 1) as f64 / PI).sqrt() * w.powu(m as u32)
    }

    /// Evaluates `Σ coeffs[m] e_m(z)`.
    pub fn evaluate(&self, coeffs: &[Complex64], z: Complex64) -> Complex64 {
        let w = (z - self.disk.center) / self.disk.radius;
        let mut pow = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in coeffs.iter().enumerate() {
            acc += c * ((m + 1) as f64 / PI).sqrt() * pow;
            pow *= w;
        }
        acc
    }

    /// Orthonormal coefficients of a function holomorphic on a neighborhood of
    /// the closed disk, from `nodes` samples (at least `n`).
    pub fn project<F>(&self, nodes: usize, f: F) -> Result<Vec<Complex64>>
    where
        F: Fn(Complex64) -> Result<Complex64>,
    {
        let samples = sample_points(&self.disk, nodes).into_iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(coefficients_from_samples(samples, self.n))
    }
}

fn sample_points(disk: &Disk, nodes: usize) -> Vec<Complex64> {
    (0..nodes)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / nodes as f64;
            disk.center + disk.radius * Complex64::from_polar(SAMPLE_RADIUS, t)
        })
        .collect()
}

/// Taylor coefficients by DFT, rescaled to the orthonormal basis.
fn coefficients_from_samples(mut samples: Vec<Complex64>, n: usize) -> Vec<Complex64> {
    let nodes = samples.len();
    assert!(nodes >= n, "need at least {n} samples, got {nodes}");
    forward_fft(nodes).process(&mut samples);
    let mut scale = 1.0 / nodes as f64;
    (0..n)
        .map(|m| {
            let c = samples[m] * scale * (PI / (m + 1) as f64).sqrt();
            scale /= SAMPLE_RADIUS;
            c
        })
        .collect()
}

/// Element of `⊕_j H²(D_j)` as coefficient blocks in the layout `1, …, r, -1, …, -r`.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionVector {
    r: usize,
    n: usize,
    coeffs: Vec<Complex64>,
}

impl FunctionVector {
    pub fn zeros(r: usize, n: usize) -> Self {
        Self { r, n, coeffs: vec![Complex64::new(0.0, 0.0); 2 * r * n] }
    }

    pub fn from_coefficients(r: usize, n: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * r * n {
            return Err(Error::DimensionMismatch { expected: 2 * r * n, actual: coeffs.len() });
        }
        Ok(Self { r, n, coeffs })
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn block(&self, j: i32) -> &[Complex64] {
        let k = slot(self.r, j);
        &self.coeffs[k * self.n..(k + 1) * self.n]
    }

    pub fn set_block(&mut self, j: i32, values: &[Complex64]) -> Result<()> {
        if values.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, actual: values.len() });
        }
        let k = slot(self.r, j);
        self.coeffs[k * self.n..(k + 1) * self.n].copy_from_slice(values);
        Ok(())
    }

    /// Norm in `⊕ H²(D_j)`; the basis is orthonormal, so this is the ℓ² norm.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, k: Complex64) -> Self {
        Self { r: self.r, n: self.n, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Unit norm with the first non-negligible coefficient real and positive.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        let lead = self.coeffs.iter().find(|c| c.norm() > 1e-8 * norm).copied().unwrap_or(Complex64::new(norm, 0.0));
        let phase = lead.conj() / lead.norm();
        Ok(self.scaled(phase / norm))
    }

    /// Indices `j` whose block is not identically zero.
    pub fn support(&self) -> Vec<i32> {
        (0..2 * self.r)
            .map(|k| index_at(self.r, k))
            .filter(|&j| self.block(j).iter().any(|c| *c != Complex64::new(0.0, 0.0)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransferMatrix {
    s: Complex64,
    r: usize,
    n: usize,
    entries: CMatrix,
}

impl TransferMatrix {
    pub fn s(&self) -> Complex64 {
        self.s
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.r * self.n
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// The block mapping `H²(D_j)` into `H²(D_i)`.
    pub fn block(&self, i: i32, j: i32) -> CMatrix {
        let (bi, bj) = (slot(self.r, i), slot(self.r, j));
        self.entries.view((bi * self.n, bj * self.n), (self.n, self.n)).into_owned()
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// `det(I - T)`.
    pub fn fredholm_det(&self) -> Complex64 {
        linalg::det_identity_minus(&self.entries)
    }

    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        linalg::eigenvalues(&self.entries)
    }
}

/// Matrix of `τ_s(S_j) : H²(D_j) → H²(D_i)` with `4n` sample nodes.
pub fn block(data: &SchottkyData, j: i32, i: i32, s: Complex64, n: usize) -> Result<DMatrix<Complex64>> {
    block_with_nodes(data, j, i, s, n, 4 * n)
}

/// As [`block`], with an explicit number of sample nodes.
pub fn block_with_nodes(
    data: &SchottkyData,
    j: i32,
    i: i32,
    s: Complex64,
    n: usize,
    nodes: usize,
) -> Result<DMatrix<Complex64>> {
    if i == -j {
        return Err(Error::ForbiddenTransition { generator: j, target: i });
    }
    let g = data.generator(j);
    let (source, target) = (data.disk(j), data.disk(i));
    let (c, d) = g.weight_coefficients(&target.branch_context())?;
    let ginv = g.inverse();
    // Per node: the weight and the source unit coordinate of S_j⁻¹ z.
    let nodes_data: Vec<(Complex64, Complex64)> = sample_points(target, nodes)
        .into_iter()
        .map(|z| {
            let weight = (-2.0 * s * (c * z + d).ln()).exp();
            let w = (ginv.apply_finite(z) - source.center) / source.radius;
            (weight, w)
        })
        .collect();
    let mut out = DMatrix::zeros(n, n);
    let mut column: Vec<Complex64> = nodes_data.iter().map(|(wt, _)| *wt / PI.sqrt()).collect();
    for m in 0..n {
        let coeffs = coefficients_from_samples(column.clone(), n);
        for (row, value) in coeffs.into_iter().enumerate() {
            out[(row, m)] = value;
        }
        // e_{m+1} = √((m+2)/(m+1)) w e_m
        let ratio = ((m + 2) as f64 / (m + 1) as f64).sqrt();
        for (v, (_, w)) in column.iter_mut().zip(&nodes_data) {
            *v *= w * ratio;
        }
    }
    Ok(out)
}

/// The truncated transfer operator `T_s` on `2r` blocks of size `n`.
pub fn assemble(data: &SchottkyData, s: Complex64, n: usize) -> Result<TransferMatrix> {
    let r = data.rank();
    let pairs: Vec<(usize, usize)> = (0..2 * r)
        .flat_map(|bi| (0..2 * r).map(move |bj| (bi, bj)))
        .filter(|&(bi, bj)| index_at(r, bj) != -index_at(r, bi))
        .collect();
    let blocks = pairs
        .par_iter()
        .map(|&(bi, bj)| block(data, index_at(r, bj), index_at(r, bi), s, n))
        .collect::<Result<Vec<_>>>()?;
    let mut entries = CMatrix::zeros(2 * r * n, 2 * r * n);
    for (&(bi, bj), b) in pairs.iter().zip(blocks) {
        entries.view_mut((bi * n, bj * n), (n, n)).copy_from(&b);
    }
    Ok(TransferMatrix { s, r, n, entries })
}

pub fn apply_op(t: &TransferMatrix, f: &FunctionVector) -> Result<FunctionVector> {
    if f.r != t.r || f.n != t.n {
        return Err(Error::DimensionMismatch { expected: t.dim(), actual: f.coeffs.len() });
    }
    let v = nalgebra::DVector::from_column_slice(&f.coeffs);
    let out = &t.entries * v;
    Ok(FunctionVector { r: t.r, n: t.n, coeffs: out.iter().copied().collect() })
}

/// `‖T f - f‖ / ‖f‖` for an already assembled operator.
pub fn residual(t: &TransferMatrix, f: &FunctionVector) -> Result<f64> {
    let norm = f.norm();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let tf = apply_op(t, f)?;
    let diff: f64 = tf.coeffs.iter().zip(&f.coeffs).map(|(a, b)| (a - b).norm_sqr()).sum();
    Ok(diff.sqrt() / norm)
}

pub fn eigen_residual(data: &SchottkyData, s: Complex64, n: usize, f: &FunctionVector) -> Result<f64> {
    if f.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    residual(&assemble(data, s, n)?, f)
}

/// Numerical dimension of `ker(I - T)` with the singular-value gap behind it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelReport {
    pub dimension: usize,
    /// Smallest singular value above `tol` over the largest one below it
    /// (over `tol` itself when nothing falls below).
    pub gap: f64,
    pub reliable: bool,
    pub smallest_excluded: Option<f64>,
    pub largest_included: Option<f64>,
}

pub fn kernel_report(t: &TransferMatrix, tol: f64) -> KernelReport {
    let n = t.dim();
    let sv = linalg::singular_values(&(CMatrix::identity(n, n) - &t.entries));
    let dimension = sv.iter().filter(|&&x| x < tol).count();
    let largest_included = sv.iter().copied().find(|&x| x < tol);
    let smallest_excluded = sv.iter().copied().rfind(|&x| x >= tol);
    let gap = match (smallest_excluded, largest_included) {
        (None, _) => f64::INFINITY,
        (Some(hi), Some(lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        (Some(hi), None) => hi / tol,
    };
    KernelReport { dimension, gap, reliable: gap > KERNEL_GAP, smallest_excluded, largest_included }
}

pub fn kernel_dimension(t: &TransferMatrix, tol: f64) -> usize {
    kernel_report(t, tol).dimension
}

/// Largest eigenvalue modulus of `T_s` for real `s`.
pub fn leading_eigenvalue(data: &SchottkyData, s: f64, n: usize) -> Result<f64> {
    let t = assemble(data, Complex64::new(s, 0.0), n)?;
    Ok(t.eigenvalues()?.first().map(|z| z.norm()).unwrap_or(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::MoebiusTransform;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cylinder_block_spectrum() {
        let (l, s) = (2.0, c(0.3, 0.0));
        let data = SchottkyData::cylinder(l).unwrap();
        let b = block(&data, 1, 1, s, 30).unwrap();
        let ev = linalg::eigenvalues(&b).unwrap();
        for (k, z) in ev.iter().take(8).enumerate() {
            let expected = (-(s.re + k as f64) * l).exp();
            assert!((z.norm() - expected).abs() < 1e-8, "k={k}: {z} vs {expected}");
        }
    }

    #[test]
    fn constants_are_preserved_at_s_zero() {
        let data = SchottkyData::standard_pants();
        let b = block(&data, 2, 1, c(0.0, 0.0), 12).unwrap();
        assert!((b[(0, 0)] - 1.0).norm() < 1e-13);
        for row in 1..12 {
            assert!(b[(row, 0)].norm() < 1e-13);
        }
    }

    #[test]
    fn blocks_are_stable_under_node_refinement() {
        let data = SchottkyData::standard_pants();
        let s = c(0.4, 1.3);
        let a = block_with_nodes(&data, 1, 2, s, 20, 80).unwrap();
        let b = block_with_nodes(&data, 1, 2, s, 20, 160).unwrap();
        assert!((a - b).camax() < 1e-12);
    }

    #[test]
    fn forbidden_transition() {
        let data = SchottkyData::standard_pants();
        assert!(matches!(block(&data, 1, -1, c(0.5, 0.0), 4), Err(Error::ForbiddenTransition { .. })));
    }

    #[test]
    fn zero_block_pattern() {
        let cyl = SchottkyData::cylinder(2.0).unwrap();
        let t = assemble(&cyl, c(0.2, 0.7), 8).unwrap();
        assert!(t.block(1, -1).iter().all(|z| *z == c(0.0, 0.0)));
        assert!(t.block(-1, 1).iter().all(|z| *z == c(0.0, 0.0)));

        let x2 = SchottkyData::standard_pants();
        let t = assemble(&x2, c(-1.0, 1.0), 6).unwrap();
        for i in x2.indices() {
            for j in x2.indices() {
                let zero = t.block(i, j).iter().all(|z| *z == c(0.0, 0.0));
                assert_eq!(zero, j == -i, "block ({i}, {j})");
            }
        }
    }

    #[test]
    fn leading_section_is_independent_of_truncation() {
        let x2 = SchottkyData::standard_pants();
        let s = c(0.5, -0.5);
        let small = assemble(&x2, s, 10).unwrap();
        let large = assemble(&x2, s, 20).unwrap();
        for i in x2.indices() {
            for j in x2.indices() {
                let a = small.block(i, j);
                let b = large.block(i, j).view((0, 0), (10, 10)).into_owned();
                assert!((a - b).camax() < 1e-12);
            }
        }
    }

    #[test]
    fn apply_op_basics() {
        let cyl = SchottkyData::cylinder(2.0).unwrap();
        let t = assemble(&cyl, c(0.0, 0.0), 12).unwrap();
        let zero = FunctionVector::zeros(1, 12);
        assert_eq!(apply_op(&t, &zero).unwrap(), zero);

        let mut f = FunctionVector::zeros(1, 12);
        let mut e0 = vec![c(0.0, 0.0); 12];
        e0[0] = c(1.0, 0.0);
        f.set_block(1, &e0).unwrap();
        let tf = apply_op(&t, &f).unwrap();
        let diff: f64 = tf.coefficients().iter().zip(f.coefficients()).map(|(a, b)| (a - b).norm()).sum();
        assert!(diff < 1e-12);

        let g = FunctionVector::zeros(1, 10);
        assert!(matches!(apply_op(&t, &g), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn residual_is_scale_invariant_and_rejects_zero() {
        let x2 = SchottkyData::standard_pants();
        let n = 8;
        let coeffs = (0..4 * n).map(|k| c((k as f64).sin(), (k as f64 * 0.3).cos())).collect();
        let f = FunctionVector::from_coefficients(2, n, coeffs).unwrap();
        let s = c(0.3, 0.0);
        let r1 = eigen_residual(&x2, s, n, &f).unwrap();
        let r2 = eigen_residual(&x2, s, n, &f.scaled(c(2.0, 0.0))).unwrap();
        assert!((r1 - r2).abs() < 1e-12);
        assert!(r1 > 0.1);
        assert!(matches!(eigen_residual(&x2, s, n, &FunctionVector::zeros(2, n)), Err(Error::ZeroVector)));
    }

    #[test]
    fn kernel_dimensions_at_zero() {
        let cyl = SchottkyData::cylinder(2.0).unwrap();
        let rep = kernel_report(&assemble(&cyl, c(0.0, 0.0), 30).unwrap(), DEFAULT_KERNEL_TOL);
        assert_eq!(rep.dimension, 2);
        assert!(rep.reliable);
        let generic = kernel_report(&assemble(&cyl, c(0.37, 0.21), 30).unwrap(), DEFAULT_KERNEL_TOL);
        assert_eq!(generic.dimension, 0);

        let x2 = SchottkyData::standard_pants();
        let rep = kernel_report(&assemble(&x2, c(0.0, 0.0), 30).unwrap(), DEFAULT_KERNEL_TOL);
        assert!(rep.dimension >= 2 && rep.reliable, "{rep:?}");
    }

    #[test]
    fn trace_converges_to_fixed_point_sum() {
        for data in [SchottkyData::cylinder(2.0).unwrap(), SchottkyData::standard_pants()] {
            let s = c(0.6, 0.4);
            let t = assemble(&data, s, 40).unwrap();
            let exact = crate::zeta::trace_power(&data, s, 1);
            assert!((t.trace() - exact).norm() < 1e-8);
        }
    }

    #[test]
    fn spectra_converge_in_truncation() {
        for data in [SchottkyData::cylinder(2.0).unwrap(), SchottkyData::standard_pants()] {
            for s in [c(0.0, 0.0), c(0.5, 0.0), c(-1.0, 1.0)] {
                let a = assemble(&data, s, 20).unwrap().eigenvalues().unwrap();
                let b = assemble(&data, s, 40).unwrap().eigenvalues().unwrap();
                for (k, ak) in a.iter().take(10).enumerate() {
                    // Match each coarse eigenvalue to its nearest fine one.
                    let d = b.iter().map(|z| (z - ak).norm()).fold(f64::INFINITY, f64::min);
                    assert!(d < 1e-8 * (1.0 + ak.norm()), "s={s} k={k} d={d:e}");
                }
            }
        }
    }

    #[test]
    fn determinant_is_invariant_under_global_conjugation() {
        let x2 = SchottkyData::standard_pants();
        let g = MoebiusTransform::new(1.0, 0.5, 0.05, 1.2).unwrap();
        let y = x2.conjugated(&g).unwrap();
        for s in [c(0.8, 0.0), c(0.4, 2.0), c(-0.6, -1.5)] {
            let a = assemble(&x2, s, 30).unwrap().fredholm_det();
            let b = assemble(&y, s, 30).unwrap().fredholm_det();
            assert!((a - b).norm() < 1e-8 * (1.0 + a.norm()), "s={s}: {a} vs {b}");
        }
    }

    #[test]
    fn weights_compose_without_branch_jumps() {
        // For admissible transitions k → j → i the per-disk branches compose
        // exactly: w(S_j S_k, D_i)(z) = w(S_j, D_i)(z) w(S_k, D_j)(S_j⁻¹ z).
        let x2 = SchottkyData::standard_pants();
        let s = c(0.37, 2.9);
        for i in x2.indices() {
            for j in x2.indices().filter(|&j| j != -i) {
                for k in x2.indices().filter(|&k| k != -j) {
                    let (gj, gk) = (x2.generator(j), x2.generator(k));
                    let di = x2.disk(i);
                    let ctx_i = di.branch_context();
                    let ctx_j = x2.disk(j).branch_context();
                    for t in 0..5 {
                        let z = di.center + di.radius * Complex64::from_polar(0.6, t as f64);
                        let lhs = gj.compose(gk).jacobian_weight(s, &ctx_i, z).unwrap();
                        let y = gj.inverse().apply_finite(z);
                        let rhs = gj.jacobian_weight(s, &ctx_i, z).unwrap() * gk.jacobian_weight(s, &ctx_j, y).unwrap();
                        assert!((lhs - rhs).norm() < 1e-10 * lhs.norm(), "({i},{j},{k})");
                    }
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn apply_op_is_linear(seed in 0u64..1000, a in -2.0..2.0f64, b in -2.0..2.0f64) {
            let x2 = SchottkyData::standard_pants();
            let n = 6;
            let t = assemble(&x2, c(0.3, 0.2), n).unwrap();
            let mk = |k: u64| {
                let coeffs = (0..4 * n).map(|i| c(((seed + k) as f64 * 0.7 + i as f64).sin(), (i as f64 * 1.3 + k as f64).cos())).collect();
                FunctionVector::from_coefficients(2, n, coeffs).unwrap()
            };
            let (f, g) = (mk(1), mk(2));
            let combo = FunctionVector::from_coefficients(
                2, n, f.coefficients().iter().zip(g.coefficients()).map(|(x, y)| x * a + y * b).collect()).unwrap();
            let lhs = apply_op(&t, &combo).unwrap();
            let tf = apply_op(&t, &f).unwrap();
            let tg = apply_op(&t, &g).unwrap();
            for ((l, x), y) in lhs.coefficients().iter().zip(tf.coefficients()).zip(tg.coefficients()) {
                prop_assert!((l - (x * a + y * b)).norm() < 1e-12);
            }
        }
    }
}
