//! Numeric model of the Schottky group acting on the Poincaré disk.
//!
//! Generators are stored as real `SL(2, ℝ)` matrices acting on the upper
//! half-plane; the disk is reached through the Cayley map
//! `z = (τ − i)/(τ + i)`. Ideal points are carried as angles, which correspond
//! to the projective real line through `τ = −cot(θ/2)`.
//!
//! This module shares no code with the combinatorial path in
//! [`crate::chart`] and [`crate::intersection`]; it is used to cross-check
//! them and to draw pictures.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chart::{PeriodicWord, SurfaceKind};
use crate::word::{free_reduce, CyclicWord, Letter, Word};

/// Margin for every membership decision, in units of hyperbolic distance.
pub const BOUNDARY_EPS: f64 = 1e-9;
/// Agreement required between eigenvector and iterated limit points.
pub const LIMIT_TOL: f64 = 1e-10;
/// Feet closer than this (radians) are reported as a near tangency.
pub const TANGENCY_EPS: f64 = 1e-9;

pub const DEFAULT_LAMBDA_A: f64 = 3.7;
pub const DEFAULT_LAMBDA_B: f64 = 4.3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("translation lengths must be positive (got {0}, {1})")]
    NonPositiveLength(f64, f64),
    #[error("half-spaces D({0}) and D({1}) overlap; translation lengths too short")]
    Overlap(Letter, Letter),
    #[error("half-spaces appear in the wrong circular order for the {0}")]
    Arrangement(SurfaceKind),
    #[error("limit point of {word}: eigenvector and iteration disagree by {gap:e}")]
    Convergence { word: String, gap: f64 },
    #[error("intersection of lifts {i} and {j} lies within {eps:e} of the fundamental domain boundary")]
    BoundaryAmbiguity { i: usize, j: usize, eps: f64 },
    #[error("word {0} is not primitive")]
    NonPrimitive(String),
    #[error("identity has no axis")]
    Identity,
}

fn wrap(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Smallest absolute angular distance between two boundary angles.
pub fn angular_gap(x: f64, y: f64) -> f64 {
    let d = wrap(x - y);
    d.min(TAU - d)
}

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint {
    pub x: f64,
    pub y: f64,
}

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> DiskPoint {
        DiskPoint { x, y }
    }

    fn from_c(z: Complex64) -> DiskPoint {
        DiskPoint { x: z.re, y: z.im }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Hyperbolic distance (curvature −1).
    pub fn distance(self, other: DiskPoint) -> f64 {
        let (z, w) = (self.to_complex(), other.to_complex());
        let num = 2.0 * (z - w).norm_sqr();
        let den = (1.0 - z.norm_sqr()) * (1.0 - w.norm_sqr());
        (1.0 + num / den).acosh()
    }
}

/// A point of the boundary circle, by angle in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdealPoint {
    pub angle: f64,
}

impl IdealPoint {
    pub fn new(angle: f64) -> IdealPoint {
        IdealPoint { angle: wrap(angle) }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle)
    }

    /// Homogeneous coordinates on the real projective line.
    fn projective(self) -> (f64, f64) {
        let h = self.angle / 2.0;
        (-h.cos(), h.sin())
    }

    fn from_projective(x: f64, y: f64) -> IdealPoint {
        IdealPoint::new(2.0 * y.atan2(-x))
    }
}

/// Orientation-preserving isometry: a real matrix with unit determinant
/// acting on the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mobius {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mobius {
    pub const IDENTITY: Mobius = Mobius {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Rescales to determinant 1.
    pub fn normalized(self) -> Mobius {
        let s = self.det().abs().sqrt();
        Mobius {
            a: self.a / s,
            b: self.b / s,
            c: self.c / s,
            d: self.d / s,
        }
    }

    pub fn compose(&self, rhs: &Mobius) -> Mobius {
        Mobius {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
        .renormalized()
    }

    /// Pulls the determinant back to 1 while the entries are small enough for
    /// `ad − bc` to be computed accurately; beyond that the determinant
    /// cannot be measured and is left alone.
    fn renormalized(self) -> Mobius {
        let scale = (self.a * self.d).abs() + (self.b * self.c).abs();
        if scale < 1e8 {
            self.normalized()
        } else {
            self
        }
    }

    pub fn inverse(&self) -> Mobius {
        Mobius {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Hyperbolic translation of length `length` along the geodesic from
    /// `repelling` to `attracting`.
    pub fn translation(repelling: IdealPoint, attracting: IdealPoint, length: f64) -> Mobius {
        let (fx, fy) = attracting.projective();
        let (rx, ry) = repelling.projective();
        // columns: attracting and repelling eigenvectors
        let det = fx * ry - rx * fy;
        let (k, kinv) = ((length / 2.0).exp(), (-length / 2.0).exp());
        // C diag(k, 1/k) C⁻¹ with C = [[fx, rx], [fy, ry]]
        let a = (fx * k * ry - rx * kinv * fy) / det;
        let b = (-fx * k * rx + rx * kinv * fx) / det;
        let c = (fy * k * ry - ry * kinv * fy) / det;
        let d = (-fy * k * rx + ry * kinv * fx) / det;
        Mobius { a, b, c, d }.normalized()
    }

    /// The same isometry as a complex matrix acting on the disk.
    fn disk_matrix(&self) -> [Complex64; 4] {
        let i = Complex64::i();
        // K M K⁻¹ with K = [[1, −i], [1, i]], K⁻¹ = ½[[1, 1], [i, −i]]
        let (a, b, c, d) = (
            Complex64::new(self.a, 0.0),
            Complex64::new(self.b, 0.0),
            Complex64::new(self.c, 0.0),
            Complex64::new(self.d, 0.0),
        );
        let m00 = a - i * c;
        let m01 = b - i * d;
        let m10 = a + i * c;
        let m11 = b + i * d;
        let half = Complex64::new(0.5, 0.0);
        [
            (m00 + m01 * i) * half,
            (m00 - m01 * i) * half,
            (m10 + m11 * i) * half,
            (m10 - m11 * i) * half,
        ]
    }

    pub fn apply(&self, z: DiskPoint) -> DiskPoint {
        let [p, q, r, s] = self.disk_matrix();
        let z = z.to_complex();
        DiskPoint::from_c((p * z + q) / (r * z + s))
    }

    pub fn apply_ideal(&self, t: IdealPoint) -> IdealPoint {
        let (x, y) = t.projective();
        IdealPoint::from_projective(self.a * x + self.b * y, self.c * x + self.d * y)
    }

    pub fn apply_geodesic(&self, g: &Geodesic) -> Geodesic {
        Geodesic {
            backward: self.apply_ideal(g.backward),
            forward: self.apply_ideal(g.forward),
        }
    }

    /// Fixed points `(repelling, attracting)` of a hyperbolic element.
    pub fn fixed_points(&self) -> Option<(IdealPoint, IdealPoint)> {
        let t = self.trace();
        let disc = t * t - 4.0;
        if disc <= 0.0 {
            return None;
        }
        let root = disc.sqrt();
        let big = (t + t.signum() * root) / 2.0;
        let small = 1.0 / big;
        Some((self.eigenvector(small), self.eigenvector(big)))
    }

    fn eigenvector(&self, mu: f64) -> IdealPoint {
        let v1 = (self.b, mu - self.a);
        let v2 = (mu - self.d, self.c);
        let (x, y) = if v1.0.hypot(v1.1) >= v2.0.hypot(v2.1) { v1 } else { v2 };
        IdealPoint::from_projective(x, y)
    }
}

/// An oriented geodesic, by its ideal endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geodesic {
    pub backward: IdealPoint,
    pub forward: IdealPoint,
}

impl Geodesic {
    fn klein_point(&self, s: f64) -> Complex64 {
        let (u, v) = (self.backward.to_complex(), self.forward.to_complex());
        u + (v - u) * s
    }

    /// Point along the geodesic; `tau` runs over ℝ from the backward to the
    /// forward end.
    pub fn point(&self, tau: f64) -> DiskPoint {
        let s = 1.0 / (1.0 + (-tau).exp());
        DiskPoint::from_c(klein_to_poincare(self.klein_point(s)))
    }
}

fn klein_to_poincare(k: Complex64) -> Complex64 {
    k / (1.0 + (1.0 - k.norm_sqr()).max(0.0).sqrt())
}

fn cross(u: Complex64, v: Complex64) -> f64 {
    u.re * v.im - u.im * v.re
}

/// Whether `x` lies on the open counterclockwise arc from `from` to `to`.
fn on_ccw_arc(from: f64, to: f64, x: f64) -> bool {
    let span = wrap(to - from);
    let off = wrap(x - from);
    off > 0.0 && off < span
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossing {
    Disjoint,
    Point(DiskPoint),
    /// Two feet are closer than [`TANGENCY_EPS`]; `foot` is the shared one.
    NearTangent {
        foot: IdealPoint,
    },
}

pub fn geodesic_intersection(g1: &Geodesic, g2: &Geodesic) -> Crossing {
    for p in [g1.backward, g1.forward] {
        for q in [g2.backward, g2.forward] {
            if angular_gap(p.angle, q.angle) < TANGENCY_EPS {
                return Crossing::NearTangent { foot: p };
            }
        }
    }
    let (a, b) = (g1.backward.angle, g1.forward.angle);
    let in1 = on_ccw_arc(a, b, g2.backward.angle);
    let in2 = on_ccw_arc(a, b, g2.forward.angle);
    if in1 == in2 {
        return Crossing::Disjoint;
    }
    // chords in the Klein model: solve u + s(v − u) = p + t(q − p)
    let (u, v) = (g1.backward.to_complex(), g1.forward.to_complex());
    let (p, q) = (g2.backward.to_complex(), g2.forward.to_complex());
    let (r, e) = (v - u, q - p);
    let s = cross(p - u, e) / cross(r, e);
    Crossing::Point(DiskPoint::from_c(klein_to_poincare(u + r * s)))
}

/// Boundary arc of a half-space `D(e)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub center: f64,
    pub half_width: f64,
}

impl Arc {
    pub fn start(&self) -> f64 {
        wrap(self.center - self.half_width)
    }

    pub fn end(&self) -> f64 {
        wrap(self.center + self.half_width)
    }

    pub fn contains(&self, angle: f64) -> bool {
        angular_gap(angle, self.center) < self.half_width
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchottkyConfig {
    pub kind: SurfaceKind,
    pub lambda_a: f64,
    pub lambda_b: f64,
    generators: [Mobius; 4],
    arcs: [Arc; 4],
    anchor: f64,
}

/// Feet angles `(a repelling, a attracting, b repelling, b attracting)`,
/// placed so that the four half-spaces follow the surface's arrangement.
/// The midpoints of the two axes must not be antipodal: that puts `O` on
/// their common perpendicular, a mirror of the whole group, and self-crossings
/// then land exactly on the sides of the domain.
fn feet(kind: SurfaceKind) -> [f64; 4] {
    match kind {
        // ccw: a, b̄, ā, b
        SurfaceKind::PuncturedTorus => [3.49, 0.2, 1.75, 4.8],
        // ccw: a, b̄, b, ā
        SurfaceKind::Pants => [4.95, 0.3, 1.85, 3.3],
    }
}

pub fn standard_config(kind: SurfaceKind, lambda_a: f64, lambda_b: f64) -> Result<SchottkyConfig, OracleError> {
    if !(lambda_a > 0.0 && lambda_b > 0.0) {
        return Err(OracleError::NonPositiveLength(lambda_a, lambda_b));
    }
    let [ar, af, br, bf] = feet(kind).map(IdealPoint::new);
    let a = Mobius::translation(ar, af, lambda_a);
    let b = Mobius::translation(br, bf, lambda_b);
    let generators = [a, a.inverse(), b, b.inverse()];
    let arcs = generators.map(|g| {
        let q = g.apply(DiskPoint::ORIGIN);
        Arc {
            center: wrap(q.y.atan2(q.x)),
            // bisector of [O, q] meets the circle at arccos |q| from arg q
            half_width: q.norm().acos(),
        }
    });
    for x in Letter::ALL {
        for y in Letter::ALL {
            if x < y
                && angular_gap(arcs[x.index()].center, arcs[y.index()].center)
                    <= arcs[x.index()].half_width + arcs[y.index()].half_width
            {
                return Err(OracleError::Overlap(x, y));
            }
        }
    }
    let mut order: Vec<Letter> = Letter::ALL.to_vec();
    let base = arcs[Letter::A.index()].center;
    order.sort_by(|x, y| wrap(arcs[x.index()].center - base).total_cmp(&wrap(arcs[y.index()].center - base)));
    if order != kind.arrangement() {
        return Err(OracleError::Arrangement(kind));
    }
    // anchor: middle of the gap just before D(a)
    let prev = arcs[kind.arrangement()[3].index()];
    let first = arcs[Letter::A.index()];
    let anchor = wrap(prev.end() + wrap(first.start() - prev.end()) / 2.0);
    Ok(SchottkyConfig {
        kind,
        lambda_a,
        lambda_b,
        generators,
        arcs,
        anchor,
    })
}

pub fn default_config(kind: SurfaceKind) -> SchottkyConfig {
    standard_config(kind, DEFAULT_LAMBDA_A, DEFAULT_LAMBDA_B).expect("default lengths are valid")
}

/// Membership margin: `d(z, O) − d(z, e(O))`; positive inside `D(e)`.
fn half_space_margin(cfg: &SchottkyConfig, e: Letter, z: DiskPoint) -> f64 {
    let q = cfg.generator(e).apply(DiskPoint::ORIGIN);
    z.distance(DiskPoint::ORIGIN) - z.distance(q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside,
    /// Within [`BOUNDARY_EPS`] of `∂P`.
    Boundary,
}

impl SchottkyConfig {
    pub fn generator(&self, e: Letter) -> &Mobius {
        &self.generators[e.index()]
    }

    pub fn arc(&self, e: Letter) -> Arc {
        self.arcs[e.index()]
    }

    /// Angle of the anchor point `A` on the boundary circle.
    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    /// Order of `ψ(u^∞)` and `ψ(v^∞)` walking counterclockwise from the anchor.
    pub fn boundary_order(&self, u: &PeriodicWord, v: &PeriodicWord) -> Result<std::cmp::Ordering, OracleError> {
        let (x, y) = (self.limit_point(u)?, self.limit_point(v)?);
        if angular_gap(x.angle, y.angle) < TANGENCY_EPS {
            return Ok(std::cmp::Ordering::Equal);
        }
        Ok(self.offset_from_anchor(x).total_cmp(&self.offset_from_anchor(y)))
    }

    /// Counterclockwise angular offset of `t` from the anchor.
    pub fn offset_from_anchor(&self, t: IdealPoint) -> f64 {
        wrap(t.angle - self.anchor)
    }

    /// Product `e_0 e_1 … e_{n−1}` as a matrix.
    pub fn word_matrix(&self, w: &[Letter]) -> Mobius {
        w.iter().fold(Mobius::IDENTITY, |m, &e| m.compose(self.generator(e)))
    }

    /// Strict membership in `D(e)`: points within [`BOUNDARY_EPS`] of the
    /// bisector count as outside.
    pub fn half_space_contains(&self, e: Letter, z: DiskPoint) -> bool {
        half_space_margin(self, e, z) > BOUNDARY_EPS
    }

    pub fn in_fundamental_domain(&self, z: DiskPoint) -> bool {
        Letter::ALL.iter().all(|&e| !self.half_space_contains(e, z))
    }

    pub fn classify(&self, z: DiskPoint) -> Membership {
        let worst = Letter::ALL
            .iter()
            .map(|&e| half_space_margin(self, e, z))
            .fold(f64::NEG_INFINITY, f64::max);
        if worst.abs() <= BOUNDARY_EPS {
            Membership::Boundary
        } else if worst < 0.0 {
            Membership::Inside
        } else {
            Membership::Outside
        }
    }

    /// The half-space containing `z`, if any.
    pub fn region(&self, z: DiskPoint) -> Option<Letter> {
        Letter::ALL.iter().copied().find(|&e| self.half_space_contains(e, z))
    }

    /// `ψ(u^∞)` as the attracting fixed point of the period's matrix,
    /// cross-checked against iterating the word on the origin.
    pub fn limit_point(&self, u: &PeriodicWord) -> Result<IdealPoint, OracleError> {
        let fixed = self.periodic_fixed_point(u.period());
        let iterated = self.iterate_limit(&Word::identity(), u.period(), 60);
        let gap = angular_gap(fixed.angle, iterated.angle);
        if gap > LIMIT_TOL {
            return Err(OracleError::Convergence {
                word: u.to_string(),
                gap,
            });
        }
        Ok(fixed)
    }

    fn periodic_fixed_point(&self, period: &[Letter]) -> IdealPoint {
        self.word_matrix(period)
            .fixed_points()
            .expect("nontrivial elements of a Schottky group are hyperbolic")
            .1
    }

    /// `lim e_0 … e_n(O)` for the reduced infinite word `prefix · period^∞`,
    /// evaluated at `n = min_letters` (at least) letters.
    pub fn iterate_limit(&self, prefix: &Word, period: &[Letter], min_letters: usize) -> IdealPoint {
        let reps = (min_letters + prefix.len()) / period.len() + 2;
        let word = free_reduce(
            prefix
                .letters()
                .iter()
                .copied()
                .chain(period.iter().copied().cycle().take(period.len() * reps)),
        );
        let take = min_letters.min(word.len());
        let m = self.word_matrix(&word.letters()[..take]);
        let z = m.apply(DiskPoint::ORIGIN);
        IdealPoint::new(z.y.atan2(z.x))
    }

    /// Oriented axis `(w⁻¹)^∞ → w^∞` of a nontrivial element.
    pub fn axis(&self, w: &Word) -> Result<Geodesic, OracleError> {
        if w.is_empty() {
            return Err(OracleError::Identity);
        }
        let (backward, forward) = self
            .word_matrix(w.letters())
            .fixed_points()
            .expect("nontrivial elements of a Schottky group are hyperbolic");
        Ok(Geodesic { backward, forward })
    }

    /// The lifts `axis(w_i)` crossing the fundamental domain.
    pub fn lift_axes(&self, w: &CyclicWord) -> Vec<Geodesic> {
        w.cyclic_shifts()
            .iter()
            .map(|s| self.axis(s).expect("shifts are nontrivial"))
            .collect()
    }

    /// Counts intersection points of lifts lying in the fundamental domain.
    pub fn numeric_self_intersection(&self, w: &CyclicWord) -> Result<usize, OracleError> {
        Ok(self.intersection_points(w)?.iter().filter(|p| p.in_domain).count())
    }

    /// Every crossing between two lifts in `L_cyc`, with its domain
    /// membership. Errors if any crossing is ambiguous.
    pub fn intersection_points(&self, w: &CyclicWord) -> Result<Vec<LiftCrossing>, OracleError> {
        if !w.is_primitive() {
            return Err(OracleError::NonPrimitive(w.to_string()));
        }
        let axes = self.lift_axes(w);
        let mut out = Vec::new();
        for i in 0..axes.len() {
            for j in i + 1..axes.len() {
                let point = match geodesic_intersection(&axes[i], &axes[j]) {
                    Crossing::Disjoint => continue,
                    Crossing::Point(p) => p,
                    Crossing::NearTangent { foot } => {
                        // a near-shared foot inside some D(e) arc puts any
                        // crossing deep inside that half-space
                        if self
                            .arcs
                            .iter()
                            .any(|a| angular_gap(foot.angle, a.center) < a.half_width - 1e-6)
                        {
                            continue;
                        }
                        return Err(OracleError::BoundaryAmbiguity {
                            i: i + 1,
                            j: j + 1,
                            eps: BOUNDARY_EPS,
                        });
                    }
                };
                let in_domain = match self.classify(point) {
                    Membership::Inside => true,
                    Membership::Outside => false,
                    Membership::Boundary => {
                        return Err(OracleError::BoundaryAmbiguity {
                            i: i + 1,
                            j: j + 1,
                            eps: BOUNDARY_EPS,
                        })
                    }
                };
                out.push(LiftCrossing {
                    i: i + 1,
                    j: j + 1,
                    point,
                    in_domain,
                });
            }
        }
        Ok(out)
    }

    /// Reads the forward tile sequence of a geodesic crossing the fundamental
    /// domain: sample far along the forward ray, record the half-space it
    /// ends in, pull the geodesic back by that generator, repeat.
    ///
    /// Returns `None` if at some step the geodesic misses the domain. Each
    /// pull-back expands rounding error near the forward end, so reads much
    /// longer than a dozen letters are not reliable.
    pub fn read_coding(&self, g: &Geodesic, letters: usize) -> Option<Vec<Letter>> {
        let mut g = *g;
        let mut out = Vec::with_capacity(letters);
        for _ in 0..letters {
            if !self.crosses_domain(&g) {
                return None;
            }
            let far = g.point(16.0);
            let e = self.region(far)?;
            if !self.arc(e).contains(g.forward.angle) {
                return None;
            }
            out.push(e);
            g = self.generator(e.inverse()).apply_geodesic(&g);
        }
        Some(out)
    }

    fn crosses_domain(&self, g: &Geodesic) -> bool {
        (-320..=320)
            .map(|k| g.point(k as f64 * 0.05))
            .any(|z| self.in_fundamental_domain(z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftCrossing {
    pub i: usize,
    pub j: usize,
    pub point: DiskPoint,
    pub in_domain: bool,
}

/// Midpoint of `[O, e(O)]`, on the bisector bounding `D(e)`.
pub fn bisector_midpoint(cfg: &SchottkyConfig, e: Letter) -> DiskPoint {
    let q = cfg.generator(e).apply(DiskPoint::ORIGIN);
    let r = q.norm();
    // disk radius r sits at hyperbolic distance 2 atanh(r)
    let half = (r.atanh() / 2.0).tanh();
    DiskPoint::new(q.x / r * half, q.y / r * half)
}
