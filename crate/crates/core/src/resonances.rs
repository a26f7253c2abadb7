//! Zeros of `s ↦ det(1 - T_s)` in a rectangle of the complex plane, their
//! orders, and their split into topological zeros and resonances.
//!
//! Counting uses the argument principle with sample refinement. Zeros are
//! isolated by quadrisection, approached with a multiplicity-aware Newton
//! iteration, and polished with the contour centroid
//! `c - (1/2πiW) ∮ log(f(z)/(z-c)^W) dz`, which is insensitive to the poor
//! conditioning of multiple zeros.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::schottky::SchottkyData;
use crate::zeta::{fredholm_det, topological_order};

/// Distance to `-n` below which a zero counts as sitting at `-n`.
pub const TOPOLOGICAL_MATCH_TOL: f64 = 1e-6;
/// Boundary values below this trigger an outward nudge of the search box.
pub const BOUNDARY_FLOOR: f64 = 1e-8;
pub const MAX_NUDGE: f64 = 1e-3;
pub const DEFAULT_NODES: usize = 32;
/// Contours are refined up to this many samples before giving up.
const MAX_SAMPLES: usize = 4096;
/// Small confirmation circles rarely need more; beyond this the phase is noise.
const MAX_SMALL_SAMPLES: usize = 256;
/// Largest phase step between adjacent samples accepted as resolved.
const MAX_PHASE_STEP: f64 = 1.0;
const NEWTON_MAX_ITER: usize = 60;
const SPLIT_JITTER: [f64; 6] = [0.0137, -0.0219, 0.0311, -0.0403, 0.0521, -0.0617];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchBox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl SearchBox {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let finite = [re_min, re_max, im_min, im_max].iter().all(|x| x.is_finite());
        if !finite || re_min >= re_max || im_min >= im_max {
            return Err(Error::InvalidBox(format!("[{re_min}, {re_max}] x [{im_min}, {im_max}]")));
        }
        Ok(Self { re_min, re_max, im_min, im_max })
    }

    pub fn around(center: Complex64, half_width: f64) -> Result<Self> {
        Self::new(center.re - half_width, center.re + half_width, center.im - half_width, center.im + half_width)
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.re_min - slack
            && z.re <= self.re_max + slack
            && z.im >= self.im_min - slack
            && z.im <= self.im_max + slack
    }

    pub fn expanded(&self, by: f64) -> Self {
        Self { re_min: self.re_min - by, re_max: self.re_max + by, im_min: self.im_min - by, im_max: self.im_max + by }
    }

    /// Point on the boundary, `t ∈ [0, 4)` walking counterclockwise one edge per unit.
    fn boundary_point(&self, t: f64) -> Complex64 {
        let edge = (t.floor() as usize).min(3);
        let u = t - edge as f64;
        let (x0, x1, y0, y1) = (self.re_min, self.re_max, self.im_min, self.im_max);
        match edge {
            0 => Complex64::new(x0 + u * (x1 - x0), y0),
            1 => Complex64::new(x1, y0 + u * (y1 - y0)),
            2 => Complex64::new(x1 - u * (x1 - x0), y1),
            _ => Complex64::new(x0, y1 - u * (y1 - y0)),
        }
    }

    /// The four boxes obtained by cutting at the fractions `fx`, `fy` of the sides.
    fn quadrants(&self, fx: f64, fy: f64) -> [SearchBox; 4] {
        let xm = self.re_min + fx * self.width();
        let ym = self.im_min + fy * self.height();
        [
            SearchBox { re_min: self.re_min, re_max: xm, im_min: self.im_min, im_max: ym },
            SearchBox { re_min: xm, re_max: self.re_max, im_min: self.im_min, im_max: ym },
            SearchBox { re_min: self.re_min, re_max: xm, im_min: ym, im_max: self.im_max },
            SearchBox { re_min: xm, re_max: self.re_max, im_min: ym, im_max: self.im_max },
        ]
    }
}

/// A winding number with the sampling that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Winding {
    pub value: i64,
    pub samples: usize,
    /// Two successive refinements agreed and the phase was resolved.
    pub converged: bool,
}

/// Winding number of `f` along the closed curve `t ↦ curve(t)`, `t ∈ [0, period)`.
///
/// Segments whose phase step is too large to be trusted are bisected until
/// every step is resolved; then all segments are halved once more and the
/// count must survive that refinement.
fn closed_winding<F, C>(f: &F, curve: C, period: f64, initial: usize, max_samples: usize) -> Result<Winding>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
    C: Fn(f64) -> Complex64 + Sync,
{
    let eval = |t: f64| -> Result<Complex64> {
        let z = curve(t);
        let v = f(z)?;
        if v.norm() == 0.0 || !v.is_finite() {
            return Err(Error::BoundaryZero(z));
        }
        Ok(v)
    };
    let m = initial.max(4);
    let ts: Vec<f64> = (0..m).map(|k| period * k as f64 / m as f64).collect();
    let values = ts.par_iter().map(|&t| eval(t)).collect::<Result<Vec<_>>>()?;
    let mut samples: Vec<(f64, Complex64)> = ts.into_iter().zip(values).collect();
    let step = |samples: &[(f64, Complex64)], k: usize| (samples[(k + 1) % samples.len()].1 / samples[k].1).arg();
    let exhausted = |n: usize| Error::NoConvergence(format!("winding number unresolved with {n} samples"));
    let mut previous: Option<i64> = None;
    loop {
        // Bisect the unresolved segments.
        loop {
            let bad: Vec<usize> = (0..samples.len()).filter(|&k| step(&samples, k).abs() >= MAX_PHASE_STEP).collect();
            if bad.is_empty() {
                break;
            }
            if samples.len() + bad.len() > max_samples {
                return Err(exhausted(samples.len()));
            }
            samples = refine(&samples, &bad, period, &eval)?;
        }
        let total: f64 = (0..samples.len()).map(|k| step(&samples, k)).sum();
        let count = (total / (2.0 * PI)).round() as i64;
        if previous == Some(count) {
            return Ok(Winding { value: count, samples: samples.len(), converged: true });
        }
        previous = Some(count);
        if 2 * samples.len() > max_samples {
            return Err(exhausted(samples.len()));
        }
        let all: Vec<usize> = (0..samples.len()).collect();
        samples = refine(&samples, &all, period, &eval)?;
    }
}

/// Inserts the parameter midpoints of the segments starting at `which`
/// (sorted indices); the last segment wraps around to `period`.
fn refine<E>(samples: &[(f64, Complex64)], which: &[usize], period: f64, eval: &E) -> Result<Vec<(f64, Complex64)>>
where
    E: Fn(f64) -> Result<Complex64> + Sync,
{
    let n = samples.len();
    let mids: Vec<f64> = which
        .iter()
        .map(|&k| {
            let a = samples[k].0;
            let b = if k + 1 == n { period } else { samples[k + 1].0 };
            0.5 * (a + b)
        })
        .collect();
    let tiny = which.iter().zip(&mids).any(|(&k, &t)| t == samples[k].0);
    if tiny {
        return Err(Error::NoConvergence("phase unresolved at parameter resolution".into()));
    }
    let values = mids.par_iter().map(|&t| eval(t)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(n + which.len());
    let mut next = which.iter().zip(mids.into_iter().zip(values)).peekable();
    for (k, &sample) in samples.iter().enumerate() {
        out.push(sample);
        if next.peek().is_some_and(|(&j, _)| j == k) {
            let (_, mid) = next.next().unwrap();
            out.push(mid);
        }
    }
    Ok(out)
}

/// Number of zeros (with multiplicity) of `f` inside `bx`; `nodes` samples per edge to start.
pub fn winding_number<F>(f: F, bx: &SearchBox, nodes: usize) -> Result<i64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    Ok(box_winding(&f, bx, nodes)?.value)
}

fn box_winding<F>(f: &F, bx: &SearchBox, nodes: usize) -> Result<Winding>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    closed_winding(f, |t| bx.boundary_point(t), 4.0, 4 * nodes, MAX_SAMPLES.max(4 * nodes))
}

pub fn circle_winding<F>(f: F, center: Complex64, radius: f64, nodes: usize) -> Result<Winding>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    closed_winding(&f, |t| center + Complex64::from_polar(radius, t), 2.0 * PI, nodes, MAX_SAMPLES.max(nodes))
}

fn small_circle_winding<F>(f: &F, center: Complex64, radius: f64) -> Result<Winding>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    closed_winding(f, |t| center + Complex64::from_polar(radius, t), 2.0 * PI, 16, MAX_SMALL_SAMPLES)
}

/// `(1/2πi) ∮ f'/f dz` on a circle by the trapezoid rule, with `f'` from
/// central differences. Returns the raw (non-rounded) value.
pub fn log_derivative_order<F>(f: F, center: Complex64, radius: f64, nodes: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let h = 1e-6 * radius;
    let sum = (0..nodes)
        .into_par_iter()
        .map(|k| {
            let e = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / nodes as f64);
            let z = center + radius * e;
            let v = f(z)?;
            if v.norm() == 0.0 {
                return Err(Error::BoundaryZero(z));
            }
            let dv = (f(z + h)? - f(z - h)?) / (2.0 * h);
            Ok(dv / v * radius * e)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum::<Complex64>();
    Ok(sum / nodes as f64)
}

/// Centroid of the `order` zeros enclosed by the circle, derivative free.
fn contour_centroid<F>(f: &F, center: Complex64, radius: f64, order: i64, nodes: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let points: Vec<Complex64> =
        (0..nodes).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / nodes as f64)).collect();
    let values = points.par_iter().map(|e| f(center + radius * e)).collect::<Result<Vec<_>>>()?;
    // log g with g = f / (z - c)^W, unwrapped along the circle.
    let w = order as f64;
    let mut logs = Vec::with_capacity(nodes);
    let mut acc = (values[0] / (radius * points[0]).powf(w)).ln();
    logs.push(acc);
    for k in 1..nodes {
        let g_prev = values[k - 1] / (radius * points[k - 1]).powf(w);
        let g = values[k] / (radius * points[k]).powf(w);
        let step = g / g_prev;
        let step = Complex64::new(step.norm().ln(), step.arg());
        acc += step;
        logs.push(acc);
    }
    let integral: Complex64 = logs.iter().zip(&points).map(|(l, e)| l * Complex64::i() * radius * e).sum::<Complex64>()
        * (2.0 * PI / nodes as f64);
    Ok(center - integral / (2.0 * PI * Complex64::i() * w))
}

/// Newton iteration `s ← s - W f/f'` for a zero of multiplicity `W`.
///
/// Roundoff limits a `W`-fold zero to about `ε^{1/W}`, so an iteration that
/// stalls with steps below `settle` still yields a usable starting point.
fn newton<F>(f: &F, start: Complex64, multiplicity: i64, tol: f64, settle: f64, fence: &SearchBox) -> Option<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let mut s = start;
    let mut last = f64::INFINITY;
    for _ in 0..NEWTON_MAX_ITER {
        let h = 1e-6 * (1.0 + s.norm());
        let (v, vp, vm) = (f(s).ok()?, f(s + h).ok()?, f(s - h).ok()?);
        if v.norm() == 0.0 {
            return Some(s);
        }
        let dv = (vp - vm) / (2.0 * h);
        if dv.norm() == 0.0 {
            return None;
        }
        let step = multiplicity as f64 * v / dv;
        s -= step;
        if !fence.contains(s, 0.0) {
            return None;
        }
        last = step.norm();
        if last < tol {
            return Some(s);
        }
    }
    (last < settle).then_some(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZeroRecord {
    pub location: Complex64,
    pub order: u32,
    pub topological_order: u32,
    pub resonance_multiplicity: u32,
    /// The order was confirmed on a small circle with converged sampling.
    pub certified: bool,
    /// Set for zeros at `-n`, `n ≥ 1`, on non-elementary surfaces, whose
    /// resonance multiplicity is order bookkeeping only.
    pub informational: bool,
}

/// Splits a zero of the given order into its topological and resonance parts.
pub fn classify_zero(location: Complex64, order: u32, chi: i64) -> Result<ZeroRecord> {
    if chi > 0 {
        return Err(Error::PositiveChi(chi));
    }
    let n = (-location.re).round();
    let at_integer = n >= 0.0 && (location - Complex64::new(-n, 0.0)).norm() < TOPOLOGICAL_MATCH_TOL;
    let topological = if at_integer { topological_order(n as u32, chi)? } else { 0 };
    if order < topological {
        return Err(Error::InconsistentOrder { order, topological });
    }
    Ok(ZeroRecord {
        location,
        order,
        topological_order: topological,
        resonance_multiplicity: order - topological,
        certified: false,
        informational: at_integer && n >= 1.0 && chi < 0,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocatedZero {
    pub location: Complex64,
    pub order: u32,
    pub certified: bool,
    /// Radius of the circle on which the order was confirmed.
    pub confirmation_radius: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterFailure {
    pub region: SearchBox,
    pub winding: i64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSearch {
    /// The box actually searched, after any boundary nudge.
    pub searched: SearchBox,
    pub box_winding: i64,
    pub zeros: Vec<LocatedZero>,
    pub failures: Vec<ClusterFailure>,
}

impl ZeroSearch {
    pub fn located_order(&self) -> i64 {
        self.zeros.iter().map(|z| z.order as i64).sum()
    }

    /// Orders add up to the box winding number and no cluster failed.
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty() && self.located_order() == self.box_winding
    }

    pub fn classify(&self, chi: i64) -> Result<Vec<ZeroRecord>> {
        self.zeros
            .iter()
            .map(|z| {
                let mut rec = classify_zero(z.location, z.order, chi)?;
                rec.certified = z.certified;
                Ok(rec)
            })
            .collect()
    }
}

enum Outcome {
    Zeros(Vec<LocatedZero>),
    Failed(ClusterFailure),
}

struct Searcher<'a, F> {
    f: &'a F,
    tol: f64,
    nodes: usize,
}

impl<F> Searcher<'_, F>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    fn search(&self, bx: SearchBox, winding: i64, depth: usize) -> Vec<Outcome> {
        if winding == 0 {
            return Vec::new();
        }
        if let Some(z) = self.isolate(&bx, winding) {
            return vec![Outcome::Zeros(vec![z])];
        }
        if bx.diameter() < 100.0 * self.tol {
            return vec![Outcome::Failed(ClusterFailure {
                region: bx,
                winding,
                reason: "cluster not resolved at the tolerance scale".into(),
            })];
        }
        // Try split points until every quadrant boundary is zero free.
        let mut last_error = String::new();
        for attempt in 0..SPLIT_JITTER.len() {
            let fx = 0.5 + SPLIT_JITTER[(depth + attempt) % SPLIT_JITTER.len()];
            let fy = 0.5 - SPLIT_JITTER[(depth + attempt + 3) % SPLIT_JITTER.len()];
            let quads = bx.quadrants(fx, fy);
            let windings: Result<Vec<Winding>> = quads.par_iter().map(|q| box_winding(self.f, q, self.nodes)).collect();
            match windings {
                Ok(ws) if ws.iter().map(|w| w.value).sum::<i64>() == winding => {
                    return quads
                        .into_par_iter()
                        .zip(ws)
                        .map(|(q, w)| self.search(q, w.value, depth + 1))
                        .collect::<Vec<_>>()
                        .into_iter()
                        .flatten()
                        .collect();
                }
                Ok(ws) => {
                    last_error = format!(
                        "quadrant windings {:?} do not add up to {winding}",
                        ws.iter().map(|w| w.value).collect::<Vec<_>>()
                    )
                }
                Err(e) => last_error = e.to_string(),
            }
        }
        vec![Outcome::Failed(ClusterFailure { region: bx, winding, reason: last_error })]
    }

    /// A single zero of multiplicity `winding` inside `bx`, if that is what the box holds.
    fn isolate(&self, bx: &SearchBox, winding: i64) -> Option<LocatedZero> {
        let fence = bx.expanded(0.5 * bx.diameter());
        let radius = (0.25 * bx.width().min(bx.height())).clamp(1e3 * self.tol, 1e-2);
        let guess = newton(self.f, bx.center(), winding, 1e-3 * self.tol, 1e-2 * radius, &fence)?;
        if !bx.contains(guess, 1e-12) {
            return None;
        }
        let ring = circle_winding(self.f, guess, radius, 32).ok()?;
        if ring.value != winding {
            return None;
        }
        let z = contour_centroid(self.f, guess, radius, winding, 64).ok()?;
        // Recentering shrinks the offset term of the trapezoid error.
        let z = contour_centroid(self.f, z, radius, winding, 64).ok()?;
        if !bx.contains(z, 10.0 * self.tol) {
            return None;
        }
        // Confirm on the smallest circle whose phase is still resolved: near a
        // zero of order W, |f| ~ r^W drops into roundoff for tiny r.
        let mut r = 10.0 * self.tol;
        let confirmed = loop {
            if r > radius {
                return None;
            }
            match small_circle_winding(self.f, z, r) {
                Ok(w) if w.value == winding => break r,
                Ok(_) => return None,
                Err(_) => r *= 10.0,
            }
        };
        Some(LocatedZero { location: z, order: winding as u32, certified: true, confirmation_radius: confirmed })
    }
}

/// Zeros of `f` inside `bx`, each located to `tol`.
pub fn locate_zeros_of<F>(f: F, bx: &SearchBox, tol: f64) -> Result<ZeroSearch>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let searched = nudged(&f, bx)?;
    let top = box_winding(&f, &searched, DEFAULT_NODES)?;
    let searcher = Searcher { f: &f, tol, nodes: DEFAULT_NODES };
    let mut zeros = Vec::new();
    let mut failures = Vec::new();
    for outcome in searcher.search(searched, top.value, 0) {
        match outcome {
            Outcome::Zeros(z) => zeros.extend(z),
            Outcome::Failed(e) => failures.push(e),
        }
    }
    // Real parts are compared on a grid of the dedupe radius so that roundoff
    // does not reorder zeros sharing a vertical line.
    let grid = 10.0 * tol;
    zeros.sort_by(|a, b| {
        let (ra, rb) = ((a.location.re / grid).round() + 0.0, (b.location.re / grid).round() + 0.0);
        ra.total_cmp(&rb).then(a.location.im.total_cmp(&b.location.im))
    });
    zeros.dedup_by(|b, a| (a.location - b.location).norm() < 10.0 * tol && a.order == b.order);
    Ok(ZeroSearch { searched, box_winding: top.value, zeros, failures })
}

/// Zeros of `det(1 - T_s)` at truncation `n` inside `bx`.
pub fn locate_zeros(data: &SchottkyData, bx: &SearchBox, n: usize, tol: f64) -> Result<ZeroSearch> {
    locate_zeros_of(|s| fredholm_det(data, s, n), bx, tol)
}

/// Pushes the box edges outward (at most [`MAX_NUDGE`]) while a boundary
/// sample comes close to a zero.
fn nudged<F>(f: &F, bx: &SearchBox) -> Result<SearchBox>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let probe = 4 * DEFAULT_NODES;
    for k in 0..=4 {
        let candidate = bx.expanded(MAX_NUDGE * k as f64 / 4.0);
        let min = (0..probe)
            .into_par_iter()
            .map(|i| f(candidate.boundary_point(4.0 * i as f64 / probe as f64)).map(|v| v.norm()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min >= BOUNDARY_FLOOR {
            return Ok(candidate);
        }
    }
    Err(Error::BoundaryZero(bx.center()))
}
