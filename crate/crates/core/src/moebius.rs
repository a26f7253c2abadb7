//! Real Möbius transformations acting on the Riemann sphere.
//!
//! Elements of PSL₂(ℝ) are stored as unit-determinant matrices with a fixed
//! sign representative (`c > 0`, or `c = 0` and `d > 0`), so that two
//! transformations are equal exactly when their stored entries are equal.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `|tr| - 2` separating hyperbolic from parabolic elements.
pub const TOL_CLASS: f64 = 1e-9;

#[derive(Clone, Copy, PartialEq)]
pub struct MoebiusTransform {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

/// A point of Ĉ = ℂ ∪ {∞}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub fn real(x: f64) -> Self {
        SpherePoint::Finite(Complex64::new(x, 0.0))
    }

    pub fn finite(self) -> Option<Complex64> {
        match self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    /// Chordal-style closeness: both infinite, or both finite and within `tol`.
    pub fn approx_eq(self, other: SpherePoint, tol: f64) -> bool {
        match (self, other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => true,
            (SpherePoint::Finite(z), SpherePoint::Finite(w)) => (z - w).norm() <= tol,
            _ => false,
        }
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::Finite(z)
    }
}

/// The disk on which a holomorphic branch of `(γ⁻¹)'(z)^s` is fixed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchContext {
    center: f64,
    radius: f64,
}

impl BranchContext {
    pub fn new(center: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !center.is_finite() || !radius.is_finite() {
            return Err(Error::InvalidDisk(format!("center {center}, radius {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl MoebiusTransform {
    /// Builds the transformation from any real matrix with positive determinant,
    /// rescaling it to determinant one.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::InvalidData(format!(
                "matrix [[{a}, {b}], [{c}, {d}]] has determinant {det}, expected > 0"
            )));
        }
        let k = det.sqrt();
        Ok(Self::normalized(a / k, b / k, c / k, d / k))
    }

    fn normalized(a: f64, b: f64, c: f64, d: f64) -> Self {
        if c < 0.0 || (c == 0.0 && d < 0.0) {
            Self { a: -a, b: -b, c: -c, d: -d }
        } else {
            Self { a, b, c, d }
        }
    }

    pub fn identity() -> Self {
        Self { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// The diagonal element `a_L = diag(e^{L/2}, e^{-L/2})`, multiplication by `e^L`.
    pub fn diagonal(length: f64) -> Self {
        let h = (0.5 * length).exp();
        Self { a: h, b: 0.0, c: 0.0, d: 1.0 / h }
    }

    /// The involution `z ↦ -1/z`.
    pub fn s_involution() -> Self {
        Self::normalized(0.0, 1.0, -1.0, 0.0)
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        Self::normalized(self.d, -self.b, -self.c, self.a)
    }

    pub fn compose(&self, other: &Self) -> Self {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let (e, f, g, h) = (other.a, other.b, other.c, other.d);
        Self::normalized(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }

    /// `self ∘ other ∘ self⁻¹`.
    pub fn conjugate(&self, other: &Self) -> Self {
        self.compose(other).compose(&self.inverse())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(), |acc, _| acc.compose(self))
    }

    /// Equality in PSL₂(ℝ), entrywise up to `tol`, modulo the overall sign.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let x = self.entries();
        let y = other.entries();
        let plus = x.iter().zip(&y).all(|(p, q)| (p - q).abs() <= tol);
        let minus = x.iter().zip(&y).all(|(p, q)| (p + q).abs() <= tol);
        plus || minus
    }

    pub fn apply(&self, z: SpherePoint) -> SpherePoint {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        match z {
            SpherePoint::Infinity if c == 0.0 => SpherePoint::Infinity,
            SpherePoint::Infinity => SpherePoint::real(a / c),
            SpherePoint::Finite(z) => {
                let den = c * z + d;
                if den == Complex64::new(0.0, 0.0) {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite((a * z + b) / den)
                }
            }
        }
    }

    /// Applies the map to a finite point known to avoid the pole.
    pub fn apply_finite(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// The point sent to ∞, if finite.
    pub fn pole(&self) -> Option<f64> {
        (self.c != 0.0).then(|| -self.d / self.c)
    }

    pub fn classify(&self) -> Kind {
        let t = self.trace().abs();
        if self.approx_eq(&Self::identity(), TOL_CLASS) {
            Kind::Identity
        } else if t > 2.0 + TOL_CLASS {
            Kind::Hyperbolic
        } else if (t - 2.0).abs() <= TOL_CLASS {
            Kind::Parabolic
        } else {
            Kind::Elliptic
        }
    }

    fn require_hyperbolic(&self) -> Result<()> {
        match self.classify() {
            Kind::Hyperbolic => Ok(()),
            _ => Err(Error::NonHyperbolic { trace: self.trace().abs() }),
        }
    }

    /// Repelling and attracting fixed points `(x₋, x₊)`.
    pub fn fixed_points(&self) -> Result<(SpherePoint, SpherePoint)> {
        self.require_hyperbolic()?;
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        if c == 0.0 {
            let finite = SpherePoint::real(b / (d - a));
            // z ↦ (a/d) z + b/d expands iff |a| > |d|.
            return Ok(if a.abs() > d.abs() {
                (finite, SpherePoint::Infinity)
            } else {
                (SpherePoint::Infinity, finite)
            });
        }
        // c z² + (d - a) z - b = 0, discriminant (a + d)² - 4.
        let p = d - a;
        let disc = (self.trace().powi(2) - 4.0).sqrt();
        let sign = if p >= 0.0 { 1.0 } else { -1.0 };
        let q = -0.5 * (p + sign * disc);
        let roots = if q == 0.0 { [(-p + disc) / (2.0 * c), (-p - disc) / (2.0 * c)] } else { [q / c, -b / q] };
        // Attracting iff |h'(z)| = |cz + d|⁻² < 1.
        let (x0, x1) = (roots[0], roots[1]);
        if (c * x0 + d).abs() > (c * x1 + d).abs() {
            Ok((SpherePoint::real(x1), SpherePoint::real(x0)))
        } else {
            Ok((SpherePoint::real(x0), SpherePoint::real(x1)))
        }
    }

    /// Translation length `L` of the conjugate `a_L`.
    pub fn displacement_length(&self) -> Result<f64> {
        self.require_hyperbolic()?;
        Ok(2.0 * (0.5 * self.trace().abs()).acosh())
    }

    /// An element `p` with `p a_L p⁻¹ = self`, `p.0 = x₋` and `p.∞ = x₊`.
    ///
    /// For two finite fixed points `p` sends the imaginary axis onto the
    /// geodesic joining them, with `p.i` at the apex of that semicircle.
    pub fn diagonalizer(&self) -> Result<Self> {
        let (xm, xp) = self.fixed_points()?;
        let p = match (xm, xp) {
            (SpherePoint::Finite(xm), SpherePoint::Infinity) => Self::new(1.0, xm.re, 0.0, 1.0)?,
            (SpherePoint::Infinity, SpherePoint::Finite(xp)) => Self::new(xp.re, -1.0, 1.0, 0.0)?,
            (SpherePoint::Finite(xm), SpherePoint::Finite(xp)) => {
                let (xm, xp) = (xm.re, xp.re);
                if xp > xm {
                    Self::new(xp, xm, 1.0, 1.0)?
                } else {
                    Self::new(-xp, xm, -1.0, 1.0)?
                }
            }
            (SpherePoint::Infinity, SpherePoint::Infinity) => unreachable!("distinct fixed points"),
        };
        Ok(p)
    }

    /// An element `k` with `k h k⁻¹ = h⁻¹`: the conjugate `p S p⁻¹` of the
    /// involution by the diagonalizer.
    pub fn inverter(&self) -> Result<Self> {
        let p = self.diagonalizer()?;
        Ok(p.conjugate(&Self::s_involution()))
    }

    /// The holomorphic weight `((γ⁻¹)'(z))^s = (c̃z + d̃)^{-2s}` on the disk of `ctx`.
    ///
    /// The representative of `γ⁻¹` is chosen with `c̃·center + d̃ > 0`; the
    /// logarithm is then the principal one, which is continuous on the disk
    /// because `c̃z + d̃` stays in the right half-plane there.
    pub fn jacobian_weight(&self, s: Complex64, ctx: &BranchContext, z: Complex64) -> Result<Complex64> {
        let (c, d) = self.weight_coefficients(ctx)?;
        Ok((-2.0 * s * (c * z + d).ln()).exp())
    }

    /// Sign-fixed `(c̃, d̃)` of `γ⁻¹` for the disk of `ctx`.
    pub(crate) fn weight_coefficients(&self, ctx: &BranchContext) -> Result<(f64, f64)> {
        let inv = self.inverse();
        if let Some(pole) = inv.pole() {
            if (pole - ctx.center).abs() <= ctx.radius {
                return Err(Error::PoleInDisk { pole, center: ctx.center, radius: ctx.radius });
            }
        }
        let (c, d) = (inv.c, inv.d);
        Ok(if c * ctx.center + d > 0.0 { (c, d) } else { (-c, -d) })
    }
}

impl Mul for MoebiusTransform {
    type Output = MoebiusTransform;

    fn mul(self, rhs: MoebiusTransform) -> MoebiusTransform {
        self.compose(&rhs)
    }
}

impl fmt::Debug for MoebiusTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}
