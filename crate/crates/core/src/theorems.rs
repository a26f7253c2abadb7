//! Explicit eigenfunctions of the transfer operator for the eigenvalue 1.
//!
//! For a hyperbolic `h = p a_L p⁻¹` the function `τ_s(p) zⁿ` is fixed by
//! `τ_s(h)` exactly when `s ∈ -n + (2πi/L)ℤ`. On a cylinder this gives two
//! independent eigenfunctions of `T_s`, one per disk. On a general Schottky
//! surface and `s = -n`, pairing `f_{j₀}` with `-(-1)ⁿ τ_s(k) f_{j₀}` on the
//! opposite disk (`k` the inverter of `S_{j₀}`) gives one eigenfunction per
//! generator.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::moebius::{MoebiusTransform, SpherePoint};
use crate::schottky::SchottkyData;
use crate::transfer::{self, BasisSpec, FunctionVector, TransferMatrix};

/// Tolerance on `s` being one of the admissible spectral parameters.
pub const SPECTRAL_TOL: f64 = 1e-9;
pub const RESIDUAL_THRESHOLD: f64 = 1e-9;
pub const INDEPENDENCE_THRESHOLD: f64 = 1e-8;
pub const DEFAULT_VANISHING_SAMPLES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// The two-function family on a hyperbolic cylinder, any admissible `s`.
    Cylinder,
    /// One function per generator, `s = -n`.
    Schottky,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Cylinder => "cylinder",
            Provenance::Schottky => "schottky",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenConstruction {
    pub s: Complex64,
    pub vectors: Vec<FunctionVector>,
    pub provenance: Provenance,
}

impl EigenConstruction {
    /// Smallest singular value of the matrix whose rows are the vectors.
    pub fn independence_gap(&self) -> f64 {
        independence_gap(&self.vectors)
    }
}

pub fn independence_gap(vectors: &[FunctionVector]) -> f64 {
    let Some(first) = vectors.first() else {
        return 0.0;
    };
    let cols = first.coefficients().len();
    let m = CMatrix::from_fn(vectors.len(), cols, |i, j| vectors[i].coefficients()[j]);
    linalg::singular_values(&m).last().copied().unwrap_or(0.0)
}

/// The lattice index `k` with `s = -n + 2πik/L`, if `s` is admissible.
fn lattice_index(s: Complex64, n: usize, length: f64) -> Option<i64> {
    let t = (s + n as f64) * length / (2.0 * PI);
    let k = t.im.round();
    (t.re.abs() < SPECTRAL_TOL && (t.im - k).abs() < SPECTRAL_TOL).then_some(k as i64)
}

/// Coefficients of `τ_s(g) zⁿ = ((g⁻¹)'(z))^s (g⁻¹ z)ⁿ` on the target disk.
pub fn transported_monomial(
    g: &MoebiusTransform,
    s: Complex64,
    n: usize,
    target: &BasisSpec,
) -> Result<Vec<Complex64>> {
    let ctx = target.disk.branch_context();
    let ginv = g.inverse();
    target.project(4 * target.n, |z| Ok(g.jacobian_weight(s, &ctx, z)? * ginv.apply_finite(z).powu(n as u32)))
}

/// The `τ_s(h)`-invariant function `τ_s(p) zⁿ`, `p` the diagonalizer of `h`,
/// expanded on a disk containing the repelling fixed point of `h`.
pub fn monomial_eigenfunction(
    h: &MoebiusTransform,
    s: Complex64,
    n: usize,
    target: &BasisSpec,
) -> Result<Vec<Complex64>> {
    let length = h.displacement_length()?;
    if lattice_index(s, n, length).is_none() {
        return Err(Error::BadSpectralParameter(s));
    }
    let (xm, _) = h.fixed_points()?;
    let x = match xm {
        SpherePoint::Finite(x) if target.disk.contains(x) => x,
        SpherePoint::Finite(x) => return Err(Error::FixedPointOutsideDisk(x.re)),
        SpherePoint::Infinity => return Err(Error::FixedPointOutsideDisk(f64::INFINITY)),
    };
    debug_assert!(x.im == 0.0);
    transported_monomial(&h.diagonalizer()?, s, n, target)
}

/// Both eigenfunctions of a rank-one surface at `s = -n + 2πik/L`.
pub fn cylinder_eigenfunctions_for(
    data: &SchottkyData,
    n: usize,
    k: i64,
    truncation: usize,
) -> Result<EigenConstruction> {
    if data.rank() != 1 {
        return Err(Error::DomainError(format!("expected a cylinder, got rank {}", data.rank())));
    }
    let h = data.generator(1);
    let length = h.displacement_length()?;
    let s = Complex64::new(-(n as f64), 2.0 * PI * k as f64 / length);
    let p = h.diagonalizer()?;
    let mut first = FunctionVector::zeros(1, truncation);
    first.set_block(1, &monomial_eigenfunction(h, s, n, &BasisSpec::new(*data.disk(1), truncation)?)?)?;
    let mut second = FunctionVector::zeros(1, truncation);
    let ps = p.compose(&MoebiusTransform::s_involution());
    second.set_block(-1, &transported_monomial(&ps, s, n, &BasisSpec::new(*data.disk(-1), truncation)?)?)?;
    Ok(EigenConstruction {
        s,
        vectors: vec![first.normalized()?, second.normalized()?],
        provenance: Provenance::Cylinder,
    })
}

pub fn cylinder_eigenfunctions(length: f64, n: usize, k: i64, truncation: usize) -> Result<EigenConstruction> {
    cylinder_eigenfunctions_for(&SchottkyData::cylinder(length)?, n, k, truncation)
}

/// `(c z + d)^{2n}` for `g⁻¹ = [[·, ·], [c, d]]`: the weight of `τ_{-n}(g)`,
/// a polynomial, so no branch is involved.
fn integer_weight(g: &MoebiusTransform, n: usize, z: Complex64) -> Complex64 {
    let [_, _, c, d] = g.inverse().entries();
    (c * z + d).powu(2 * n as u32)
}

/// `τ_{-n}(g) f`.
fn transport_integer<'a>(
    g: &'a MoebiusTransform,
    n: usize,
    f: impl Fn(Complex64) -> Complex64 + 'a,
) -> impl Fn(Complex64) -> Complex64 + 'a {
    let ginv = g.inverse();
    move |z| integer_weight(g, n, z) * f(ginv.apply_finite(z))
}

/// One eigenfunction of `T_{-n}` per generator `j₀`, supported on `D_{±j₀}`.
pub fn schottky_eigenfunctions(data: &SchottkyData, n: usize, truncation: usize) -> Result<EigenConstruction> {
    let sign = if n.is_multiple_of(2) { -1.0 } else { 1.0 }; // -(-1)ⁿ
    let mut vectors = Vec::with_capacity(data.rank());
    for j0 in 1..=data.rank() as i32 {
        let h = data.generator(j0);
        let (xm, _) = h.fixed_points()?;
        match xm {
            SpherePoint::Finite(x) if data.disk(j0).contains(x) => {}
            SpherePoint::Finite(x) => return Err(Error::FixedPointOutsideDisk(x.re)),
            SpherePoint::Infinity => return Err(Error::FixedPointOutsideDisk(f64::INFINITY)),
        }
        let p = h.diagonalizer()?;
        let k = h.inverter()?;
        let f = transport_integer(&p, n, move |w: Complex64| w.powu(n as u32));
        let g = transport_integer(&k, n, &f);
        let mut v = FunctionVector::zeros(data.rank(), truncation);
        let plus = BasisSpec::new(*data.disk(j0), truncation)?;
        let minus = BasisSpec::new(*data.disk(-j0), truncation)?;
        v.set_block(j0, &plus.project(4 * truncation, |z| Ok(f(z)))?)?;
        v.set_block(-j0, &minus.project(4 * truncation, |z| Ok(sign * g(z)))?)?;
        vectors.push(v.normalized()?);
    }
    Ok(EigenConstruction { s: Complex64::new(-(n as f64), 0.0), vectors, provenance: Provenance::Schottky })
}

/// `max |τ_s(h)f - (-1)^{Re s} τ_s(h⁻¹) τ_s(k) f|` over the samples, with `f = τ_s(p) zⁿ`.
///
/// Conjugating by the diagonalizer `p` turns the combination into
/// `τ_s(p)[τ_s(a_L) wⁿ - (-1)^{Re s} τ_s(a_L⁻¹) τ_s(S) wⁿ]`, which is what is
/// evaluated, at `w = p⁻¹ z`, with principal logarithms in the `w` frame.
pub fn vanishing_check(h: &MoebiusTransform, s: Complex64, samples: &[Complex64]) -> Result<f64> {
    let length = h.displacement_length()?;
    let n = (-s.re).round();
    if n < 0.0 || lattice_index(s, n as usize, length).is_none() {
        return Err(Error::BadSpectralParameter(s));
    }
    let n = n as usize;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let p = h.diagonalizer()?;
    let pinv = p.inverse();
    let [_, _, pc, pd] = pinv.entries();
    let (xm, xp) = h.fixed_points()?;
    let mut worst: f64 = 0.0;
    for &z in samples {
        let hits = |x: SpherePoint| x.finite().is_some_and(|x| (x - z).norm() < 1e-12);
        if hits(xm) || hits(xp) || !z.is_finite() {
            return Err(Error::SampleAtFixedPoint(z));
        }
        let w = pinv.apply_finite(z);
        if w.norm() < 1e-300 || !w.is_finite() {
            return Err(Error::SampleAtFixedPoint(z));
        }
        let el = length.exp();
        let term1 = (-s * length).exp() * (w / el).powu(n as u32);
        let v = el * w;
        let term2 = (s * length).exp() * (-2.0 * s * v.ln()).exp() * (-v.inv()).powu(n as u32);
        // |weight of τ_s(p)| at z with the principal logarithm.
        let weight = (-2.0 * s * (pc * z + pd).ln()).exp().norm();
        worst = worst.max(weight * (term1 - sign * term2).norm());
    }
    Ok(worst)
}

/// `p(2 e^{iθ_k})`, `θ_k = 2π(k + 1/2)/count`: a circle around the repelling
/// fixed point in the frame where `h` is diagonal.
pub fn default_samples(h: &MoebiusTransform, count: usize) -> Result<Vec<Complex64>> {
    let p = h.diagonalizer()?;
    Ok((0..count)
        .map(|k| {
            let theta = 2.0 * PI * (k as f64 + 0.5) / count as f64;
            p.apply_finite(Complex64::from_polar(2.0, theta))
        })
        .collect())
}

/// Outcome of checking one construction against the assembled operator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    pub provenance: Provenance,
    pub s: Complex64,
    pub n: usize,
    pub k: i64,
    pub count: usize,
    pub max_residual: f64,
    pub independence_gap: f64,
    pub kernel_dimension: usize,
    pub kernel_gap: f64,
    pub pass: bool,
}

/// Residuals against `T_s` at the construction's truncation, independence and
/// the numerical kernel dimension of `I - T_s`.
pub fn verify(data: &SchottkyData, construction: &EigenConstruction, n: usize, k: i64) -> Result<Verification> {
    let truncation = construction.vectors.first().map(|v| v.truncation()).ok_or(Error::ZeroVector)?;
    let t: TransferMatrix = transfer::assemble(data, construction.s, truncation)?;
    let max_residual = construction
        .vectors
        .iter()
        .map(|v| transfer::residual(&t, v))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let kernel = transfer::kernel_report(&t, transfer::DEFAULT_KERNEL_TOL);
    let gap = construction.independence_gap();
    let count = construction.vectors.len();
    Ok(Verification {
        provenance: construction.provenance,
        s: construction.s,
        n,
        k,
        count,
        max_residual,
        independence_gap: gap,
        kernel_dimension: kernel.dimension,
        kernel_gap: kernel.gap,
        pass: max_residual < RESIDUAL_THRESHOLD && gap > INDEPENDENCE_THRESHOLD && kernel.dimension >= count,
    })
}
