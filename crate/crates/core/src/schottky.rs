//! Schottky data: paired disks on the real line, their generators, and the
//! combinatorics of the free group they generate.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::{BranchContext, Kind, MoebiusTransform, SpherePoint};

/// Separation required between closed disks.
const DISJOINT_MARGIN: f64 = 1e-12;
const BOUNDARY_SAMPLES: usize = 64;
const BOUNDARY_TOL: f64 = 1e-10;

/// An open disk centered on the real axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: f64,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: f64, radius: f64) -> Result<Self> {
        if !center.is_finite() || !radius.is_finite() || !(radius > 0.0) {
            return Err(Error::InvalidDisk(format!("center {center}, radius {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn branch_context(&self) -> BranchContext {
        BranchContext::new(self.center, self.radius).expect("disk invariants")
    }

    /// Whether the closures of the two disks are disjoint.
    pub fn is_separated_from(&self, other: &Disk) -> bool {
        (self.center - other.center).abs() > self.radius + other.radius + DISJOINT_MARGIN
    }

    pub fn contains(&self, z: num_complex::Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }
}

/// The generator `z ↦ c_to - ρ_from ρ_to / (z - c_from)`, which maps the
/// exterior of `from` onto the interior of `to`.
pub fn canonical_generator(from: &Disk, to: &Disk) -> Result<MoebiusTransform> {
    if !from.is_separated_from(to) {
        return Err(Error::DisksOverlap(format!("{from:?} and {to:?}")));
    }
    let rr = from.radius * to.radius;
    MoebiusTransform::new(to.center, -to.center * from.center - rr, 1.0, -from.center)
}

/// Position of generator index `j ∈ {±1, …, ±r}` in the block layout
/// `1, …, r, -1, …, -r`.
pub fn slot(r: usize, j: i32) -> usize {
    let a = j.unsigned_abs() as usize;
    debug_assert!(a >= 1 && a <= r, "index {j} out of range for r = {r}");
    if j > 0 {
        a - 1
    } else {
        r + a - 1
    }
}

/// Generator index stored at position `k` of the block layout.
pub fn index_at(r: usize, k: usize) -> i32 {
    if k < r {
        (k + 1) as i32
    } else {
        -((k - r + 1) as i32)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchottkyData {
    r: usize,
    disks: Vec<Disk>,
    generators: Vec<MoebiusTransform>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Disjointness,
    Pairing,
    BoundaryMap,
    ExteriorMap,
    NotHyperbolic,
}

impl ViolationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViolationKind::Disjointness => "disjointness",
            ViolationKind::Pairing => "pairing",
            ViolationKind::BoundaryMap => "boundary_map",
            ViolationKind::ExteriorMap => "exterior_map",
            ViolationKind::NotHyperbolic => "not_hyperbolic",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.as_str(), self.message)
    }
}

fn check_index_set(r: usize, indices: &[i32]) -> Result<()> {
    let expected: BTreeSet<i32> = (1..=r as i32).flat_map(|j| [j, -j]).collect();
    let seen: BTreeSet<i32> = indices.iter().copied().collect();
    if r == 0 || seen != expected || indices.len() != 2 * r {
        return Err(Error::BadIndexSet(format!("got {indices:?} for r = {r}")));
    }
    Ok(())
}

impl SchottkyData {
    /// Assembles data from per-index disks and generators without validating
    /// the geometric conditions; see [`validate`].
    pub fn from_parts(r: usize, disks: Vec<(i32, Disk)>, generators: Vec<(i32, MoebiusTransform)>) -> Result<Self> {
        let idx: Vec<i32> = disks.iter().map(|(j, _)| *j).collect();
        check_index_set(r, &idx)?;
        let gidx: Vec<i32> = generators.iter().map(|(j, _)| *j).collect();
        check_index_set(r, &gidx)?;
        let mut ds = vec![Disk { center: 0.0, radius: 1.0 }; 2 * r];
        for (j, d) in disks {
            ds[slot(r, j)] = d;
        }
        let mut gs = vec![MoebiusTransform::identity(); 2 * r];
        for (j, g) in generators {
            gs[slot(r, j)] = g;
        }
        Ok(Self { r, disks: ds, generators: gs })
    }

    /// Disks indexed by `±1..±r`, paired `(j, -j)` by canonical generators.
    pub fn from_disks(disks: Vec<(i32, Disk)>) -> Result<Self> {
        if !disks.len().is_multiple_of(2) || disks.is_empty() {
            return Err(Error::BadIndexSet(format!("{} disks", disks.len())));
        }
        let r = disks.len() / 2;
        let idx: Vec<i32> = disks.iter().map(|(j, _)| *j).collect();
        check_index_set(r, &idx)?;
        for (a, (i, di)) in disks.iter().enumerate() {
            for (j, dj) in disks.iter().skip(a + 1) {
                if !di.is_separated_from(dj) {
                    return Err(Error::DisksOverlap(format!("disks {i} and {j}")));
                }
            }
        }
        let lookup = |j: i32| disks.iter().find(|(k, _)| *k == j).map(|(_, d)| *d).unwrap();
        let mut generators = Vec::with_capacity(2 * r);
        for j in 1..=r as i32 {
            let g = canonical_generator(&lookup(j), &lookup(-j))?;
            generators.push((j, g));
            generators.push((-j, g.inverse()));
        }
        Self::from_parts(r, disks, generators)
    }

    /// The hyperbolic cylinder whose generator has entries `cosh(ℓ/2), sinh(ℓ/2)`
    /// and whose disks are the isometric disks of the generator and its inverse.
    pub fn cylinder(length: f64) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::NonPositiveLength(length));
        }
        let (ch, sh) = ((0.5 * length).cosh(), (0.5 * length).sinh());
        let g = MoebiusTransform::new(ch, sh, sh, ch)?;
        let coth = ch / sh;
        let disks = vec![(1, Disk::new(-coth, 1.0 / sh)?), (-1, Disk::new(coth, 1.0 / sh)?)];
        Self::from_parts(1, disks, vec![(1, g), (-1, g.inverse())])
    }

    /// Four unit disks at -6, -2, 2, 6 with pairings (1, -1) = (-6, -2) and
    /// (2, -2) = (2, 6): a pair of pants-type surface with χ = -1.
    pub fn standard_pants() -> Self {
        let disks = [(1, -6.0), (-1, -2.0), (2, 2.0), (-2, 6.0)]
            .into_iter()
            .map(|(j, c)| (j, Disk::new(c, 1.0).unwrap()))
            .collect();
        Self::from_disks(disks).expect("disjoint unit disks")
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn euler_characteristic(&self) -> i64 {
        1 - self.r as i64
    }

    /// Generator indices in block order `1, …, r, -1, …, -r`.
    pub fn indices(&self) -> impl Iterator<Item = i32> + '_ {
        (0..2 * self.r).map(move |k| index_at(self.r, k))
    }

    pub fn disk(&self, j: i32) -> &Disk {
        &self.disks[slot(self.r, j)]
    }

    pub fn generator(&self, j: i32) -> &MoebiusTransform {
        &self.generators[slot(self.r, j)]
    }

    /// Conjugates the whole configuration by `g`: disks `g.D_j`, generators `g S_j g⁻¹`.
    pub fn conjugated(&self, g: &MoebiusTransform) -> Result<Self> {
        let mut disks = Vec::with_capacity(2 * self.r);
        let mut gens = Vec::with_capacity(2 * self.r);
        for j in self.indices() {
            let d = self.disk(j);
            if let Some(pole) = g.pole() {
                if (pole - d.center).abs() <= d.radius {
                    return Err(Error::PoleInDisk { pole, center: d.center, radius: d.radius });
                }
            }
            let y0 = g.apply_finite((d.center - d.radius).into()).re;
            let y1 = g.apply_finite((d.center + d.radius).into()).re;
            disks.push((j, Disk::new(0.5 * (y0 + y1), 0.5 * (y1 - y0).abs())?));
            gens.push((j, g.conjugate(self.generator(j))));
        }
        Self::from_parts(self.r, disks, gens)
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate(self)
    }

    pub fn is_valid(&self) -> bool {
        validate(self).is_empty()
    }
}

/// Checks every Schottky condition, returning the violated ones.
pub fn validate(data: &SchottkyData) -> Vec<Violation> {
    let mut out = Vec::new();
    let idx: Vec<i32> = data.indices().collect();
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            if !data.disk(i).is_separated_from(data.disk(j)) {
                out.push(Violation {
                    kind: ViolationKind::Disjointness,
                    message: format!("closed disks {i} and {j} intersect"),
                });
            }
        }
    }
    for j in 1..=data.r as i32 {
        let g = data.generator(j);
        if !data.generator(-j).approx_eq(&g.inverse(), 1e-10) {
            out.push(Violation {
                kind: ViolationKind::Pairing,
                message: format!("generator {} is not the inverse of generator {j}", -j),
            });
        }
    }
    for &j in &idx {
        let g = data.generator(j);
        if g.classify() != Kind::Hyperbolic {
            out.push(Violation {
                kind: ViolationKind::NotHyperbolic,
                message: format!("generator {j} has |trace| {}", g.trace().abs()),
            });
        }
        let (from, to) = (data.disk(j), data.disk(-j));
        let worst = (0..BOUNDARY_SAMPLES)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / BOUNDARY_SAMPLES as f64;
                let z = from.center + from.radius * num_complex::Complex64::from_polar(1.0, t);
                match g.apply(z.into()) {
                    SpherePoint::Finite(w) => ((w - to.center).norm() - to.radius).abs(),
                    SpherePoint::Infinity => f64::INFINITY,
                }
            })
            .fold(0.0f64, f64::max);
        if worst > BOUNDARY_TOL * (1.0 + to.radius) {
            out.push(Violation {
                kind: ViolationKind::BoundaryMap,
                message: format!("generator {j} misses the boundary of disk {} by {worst:e}", -j),
            });
        }
        // ∞ lies outside every disk, so its image must land inside D_{-j}.
        let inside = match g.apply(SpherePoint::Infinity) {
            SpherePoint::Finite(w) => to.contains(w),
            SpherePoint::Infinity => false,
        };
        if !inside {
            out.push(Violation {
                kind: ViolationKind::ExteriorMap,
                message: format!("generator {j} does not map the exterior of disk {j} into disk {}", -j),
            });
        }
    }
    out
}

/// A reduced word in the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<i32>);

impl Word {
    pub fn new(letters: Vec<i32>) -> Result<Self> {
        if letters.windows(2).any(|w| w[0] == -w[1]) || letters.contains(&0) {
            return Err(Error::InvalidData(format!("word {letters:?} is not reduced")));
        }
        Ok(Self(letters))
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(a), Some(b)) => *a != -*b,
            _ => true,
        }
    }

    /// The product `S_{w₁} S_{w₂} ⋯ S_{w_m}`.
    pub fn matrix(&self, data: &SchottkyData) -> MoebiusTransform {
        self.0.iter().fold(MoebiusTransform::identity(), |acc, &j| acc.compose(data.generator(j)))
    }

    pub fn rotated(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        let len = v.len().max(1);
        v.rotate_left(k % len);
        Self(v)
    }

    pub fn pow(&self, k: usize) -> Self {
        Self(self.0.repeat(k))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|j| j.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// All reduced words of length `m`, in lexicographic block order.
pub fn words(data: &SchottkyData, m: usize) -> Vec<Word> {
    let r = data.rank();
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(m);
    fn go(r: usize, m: usize, buf: &mut Vec<i32>, out: &mut Vec<Word>) {
        if buf.len() == m {
            out.push(Word(buf.clone()));
            return;
        }
        for k in 0..2 * r {
            let j = index_at(r, k);
            if buf.last().is_some_and(|&p| p == -j) {
                continue;
            }
            buf.push(j);
            go(r, m, buf, out);
            buf.pop();
        }
    }
    if m > 0 {
        go(r, m, &mut buf, &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicClass {
    pub representative: Word,
    pub length: f64,
    pub word_length: usize,
    pub primitive: bool,
}

/// Visits every cyclically reduced word of length `m` together with its
/// matrix product. Work is split by first letter; the visitor results are
/// concatenated in first-letter order.
pub(crate) fn fold_cyclic_words<T, F>(data: &SchottkyData, m: usize, visit: F) -> Vec<T>
where
    T: Send,
    F: Fn(&[i32], &MoebiusTransform) -> Option<T> + Sync,
{
    let r = data.rank();
    fn go<T, F: Fn(&[i32], &MoebiusTransform) -> Option<T>>(
        data: &SchottkyData,
        m: usize,
        buf: &mut Vec<i32>,
        prod: MoebiusTransform,
        visit: &F,
        out: &mut Vec<T>,
    ) {
        let r = data.rank();
        if buf.len() == m {
            if buf[0] != -buf[m - 1] {
                if let Some(t) = visit(buf, &prod) {
                    out.push(t);
                }
            }
            return;
        }
        for k in 0..2 * r {
            let j = index_at(r, k);
            if buf.last().is_some_and(|&p| p == -j) {
                continue;
            }
            buf.push(j);
            go(data, m, buf, prod.compose(data.generator(j)), visit, out);
            buf.pop();
        }
    }
    (0..2 * r)
        .into_par_iter()
        .map(|k| {
            let j = index_at(r, k);
            let mut out = Vec::new();
            let mut buf = vec![j];
            go(data, m, &mut buf, *data.generator(j), &visit, &mut out);
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Whether `w` is strictly smaller than each of its nontrivial rotations in
/// block order, i.e. it is the canonical representative of a primitive
/// necklace.
fn is_lyndon(r: usize, w: &[i32]) -> bool {
    let key = |j: i32| slot(r, j);
    let n = w.len();
    (1..n).all(|k| {
        for t in 0..n {
            let (a, b) = (key(w[t]), key(w[(t + k) % n]));
            if a != b {
                return a < b;
            }
        }
        false
    })
}

/// Oriented primitive conjugacy classes of word length `≤ m_max`, sorted by length.
pub fn primitive_classes(data: &SchottkyData, m_max: usize) -> Vec<GeodesicClass> {
    let r = data.rank();
    let mut out: Vec<GeodesicClass> = (1..=m_max)
        .flat_map(|m| {
            fold_cyclic_words(data, m, |w, g| {
                is_lyndon(r, w).then(|| GeodesicClass {
                    representative: Word(w.to_vec()),
                    length: g.displacement_length().expect("Schottky words are hyperbolic"),
                    word_length: m,
                    primitive: true,
                })
            })
        })
        .collect();
    out.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then(a.word_length.cmp(&b.word_length))
            .then_with(|| a.representative.cmp(&b.representative))
    });
    out
}

pub const DELTA_TOL: f64 = 1e-10;
const DELTA_MAX_ITER: usize = 200;

/// Critical exponent: the `s ∈ [0, 1)` at which the leading eigenvalue of
/// the transfer operator equals one, located by bisection.
pub fn delta(data: &SchottkyData, n: usize, tol: f64) -> Result<f64> {
    let excess = |s: f64| -> Result<f64> { Ok(crate::transfer::leading_eigenvalue(data, s, n)? - 1.0) };
    let f0 = excess(0.0)?;
    if f0.abs() < tol {
        return Ok(0.0);
    }
    let f1 = excess(1.0)?;
    if f0 < 0.0 || f1 > 0.0 {
        return Err(Error::NoConvergence(format!(
            "leading eigenvalue minus one does not change sign on [0, 1]: {f0:e}, {f1:e}"
        )));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..DELTA_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let fm = excess(mid)?;
        if fm.abs() < tol && hi - lo < tol {
            return Ok(mid);
        }
        if fm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            return if fm.abs() < tol {
                Ok(mid)
            } else {
                Err(Error::NoConvergence(format!("bracket collapsed at {mid} with residual {fm:e}")))
            };
        }
    }
    Err(Error::NoConvergence(format!("bisection did not reach {tol:e} in {DELTA_MAX_ITER} steps")))
}

/// On-disk description of Schottky data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchottkyFile {
    pub r: usize,
    pub disks: Vec<DiskEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<GeneratorEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskEntry {
    pub index: i32,
    pub center: f64,
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub index: i32,
    pub matrix: [[f64; 2]; 2],
}

impl SchottkyFile {
    /// Builds the data. Missing generators are filled canonically; when the
    /// file gives only the positive indices, the negative ones are their
    /// inverses. Geometric conditions are left to [`validate`].
    pub fn into_data(self) -> Result<SchottkyData> {
        let disks: Vec<(i32, Disk)> =
            self.disks.iter().map(|e| Disk::new(e.center, e.radius).map(|d| (e.index, d))).collect::<Result<_>>()?;
        check_index_set(self.r, &disks.iter().map(|(j, _)| *j).collect::<Vec<_>>())?;
        let Some(entries) = self.generators else {
            return SchottkyData::from_disks(disks);
        };
        let mut gens: Vec<(i32, MoebiusTransform)> = entries
            .iter()
            .map(|e| {
                let [[a, b], [c, d]] = e.matrix;
                MoebiusTransform::new(a, b, c, d).map(|g| (e.index, g))
            })
            .collect::<Result<_>>()?;
        if gens.len() == self.r && gens.iter().all(|(j, _)| *j > 0) {
            let inverses: Vec<_> = gens.iter().map(|(j, g)| (-j, g.inverse())).collect();
            gens.extend(inverses);
        }
        SchottkyData::from_parts(self.r, disks, gens)
    }

    pub fn from_data(data: &SchottkyData) -> Self {
        Self {
            r: data.rank(),
            disks: data
                .indices()
                .map(|j| DiskEntry { index: j, center: data.disk(j).center, radius: data.disk(j).radius })
                .collect(),
            generators: Some(
                data.indices().map(|j| GeneratorEntry { index: j, matrix: data.generator(j).matrix() }).collect(),
            ),
        }
    }
}
