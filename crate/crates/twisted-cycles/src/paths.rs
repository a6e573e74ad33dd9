//! Piecewise paths in ℂ with puncture-clearance bookkeeping.
//!
//! Paths are lines and circular arcs. All clearance logic lives here:
//! distance from a path to the lattice orbits of the punctures, the
//! deterministic grid choice of a basepoint far from punctures and cuts,
//! connector routing between two points, and placement of period loops
//! (straight translates when possible, single-waypoint dog-legs otherwise).
//!
//! A path must keep distance ≥ clearance (default 1e−6·|ω₁|) from every
//! lattice translate of the punctures; paths that cannot be routed fail
//! loudly rather than silently passing near a pole of the integrand. The
//! three cut segments [0, x_i] enter only the basepoint score and the
//! cut-domain predicate — branch tracking integrates the single-valued
//! logarithmic derivative, so crossing a cut is harmless, while approaching
//! a puncture is not.

use crate::elliptic::Lattice;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// One smooth piece of a path, parameterized by t ∈ [0, 1].
#[derive(Debug, Clone, Copy)]
pub enum Piece {
    /// Straight segment from `from` to `to`.
    Line { from: Complex64, to: Complex64 },
    /// Circular arc; counterclockwise when `end_angle > start_angle`.
    Arc {
        center: Complex64,
        radius: f64,
        start_angle: f64,
        end_angle: f64,
    },
}

impl Piece {
    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            Piece::Line { from, to } => from + t * (to - from),
            Piece::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                let th = start_angle + t * (end_angle - start_angle);
                center + radius * Complex64::new(th.cos(), th.sin())
            }
        }
    }

    /// dz/dt at parameter t.
    pub fn derivative(&self, t: f64) -> Complex64 {
        match *self {
            Piece::Line { from, to } => to - from,
            Piece::Arc {
                center: _,
                radius,
                start_angle,
                end_angle,
            } => {
                let span = end_angle - start_angle;
                let th = start_angle + t * span;
                Complex64::new(0.0, span * radius) * Complex64::new(th.cos(), th.sin())
            }
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.point(1.0)
    }

    pub fn reversed(&self) -> Piece {
        match *self {
            Piece::Line { from, to } => Piece::Line { from: to, to: from },
            Piece::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => Piece::Arc {
                center,
                radius,
                start_angle: end_angle,
                end_angle: start_angle,
            },
        }
    }

    /// Arc length (exact for both kinds).
    pub fn length(&self) -> f64 {
        match *self {
            Piece::Line { from, to } => (to - from).norm(),
            Piece::Arc {
                radius,
                start_angle,
                end_angle,
                ..
            } => radius * (end_angle - start_angle).abs(),
        }
    }
}

/// A piecewise path: consecutive pieces share endpoints.
#[derive(Debug, Clone, Default)]
pub struct CurvePath {
    pub pieces: Vec<Piece>,
}

impl CurvePath {
    pub fn from_pieces(pieces: Vec<Piece>) -> CurvePath {
        for w in pieces.windows(2) {
            debug_assert!(
                (w[0].end() - w[1].start()).norm() < 1e-9,
                "path pieces must be contiguous"
            );
        }
        CurvePath { pieces }
    }

    /// Polyline through the given waypoints.
    pub fn from_waypoints(points: &[Complex64]) -> CurvePath {
        let pieces = points
            .windows(2)
            .map(|w| Piece::Line {
                from: w[0],
                to: w[1],
            })
            .collect();
        CurvePath { pieces }
    }

    /// Full counterclockwise circle starting and ending at
    /// center + radius·e^{i·base_angle}.
    pub fn circle(center: Complex64, radius: f64, base_angle: f64) -> CurvePath {
        CurvePath {
            pieces: vec![Piece::Arc {
                center,
                radius,
                start_angle: base_angle,
                end_angle: base_angle + 2.0 * PI,
            }],
        }
    }

    pub fn start(&self) -> Complex64 {
        self.pieces.first().expect("empty path").start()
    }

    pub fn end(&self) -> Complex64 {
        self.pieces.last().expect("empty path").end()
    }

    pub fn is_closed(&self) -> bool {
        (self.start() - self.end()).norm() < 1e-9
    }

    pub fn reversed(&self) -> CurvePath {
        CurvePath {
            pieces: self.pieces.iter().rev().map(|p| p.reversed()).collect(),
        }
    }

    /// Concatenation; the other path must start where this one ends.
    pub fn then(&self, other: &CurvePath) -> CurvePath {
        debug_assert!((self.end() - other.start()).norm() < 1e-9);
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().copied());
        CurvePath { pieces }
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(|p| p.length()).sum()
    }
}

// ───────────────────────── distances ─────────────────────────

/// Distance from point p to the segment [a, b].
pub fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + t * ab)).norm()
}

/// Distance from point p to the lattice orbit x + Γ, scanning translates
/// around the nearest one.
pub fn point_orbit_distance(p: Complex64, x: Complex64, lat: &Lattice) -> f64 {
    lat.distance_to_lattice(p - x)
}

/// Distance from the segment [a, b] to the orbit x + Γ. Translates are
/// scanned in a window around the segment midpoint; correct when the
/// segment is shorter than a couple of cells (all paths built here are).
pub fn segment_orbit_distance(a: Complex64, b: Complex64, x: Complex64, lat: &Lattice) -> f64 {
    let mid = 0.5 * (a + b);
    let (ca, cb) = lat.real_coordinates(mid - x);
    let (m0, n0) = (ca.round() as i64, cb.round() as i64);
    let mut best = f64::INFINITY;
    let reach = 2 + (self::segment_cell_span(a, b, lat) as i64);
    for m in (m0 - reach)..=(m0 + reach) {
        for n in (n0 - reach)..=(n0 + reach) {
            let w = x + (m as f64) * lat.omega1 + (n as f64) * lat.omega2;
            best = best.min(point_segment_distance(w, a, b));
        }
    }
    best
}

fn segment_cell_span(a: Complex64, b: Complex64, lat: &Lattice) -> usize {
    ((b - a).norm() / lat.omega1.norm().min(lat.omega2.norm())).ceil() as usize
}

/// Distance from an arc to the orbit x + Γ.
fn arc_orbit_distance(
    center: Complex64,
    radius: f64,
    start_angle: f64,
    end_angle: f64,
    x: Complex64,
    lat: &Lattice,
) -> f64 {
    let (ca, cb) = lat.real_coordinates(center - x);
    let (m0, n0) = (ca.round() as i64, cb.round() as i64);
    let mut best = f64::INFINITY;
    let full = (end_angle - start_angle).abs() >= 2.0 * PI - 1e-12;
    for m in (m0 - 2)..=(m0 + 2) {
        for n in (n0 - 2)..=(n0 + 2) {
            let w = x + (m as f64) * lat.omega1 + (n as f64) * lat.omega2;
            let v = w - center;
            let radial = (v.norm() - radius).abs();
            if full {
                best = best.min(radial);
                continue;
            }
            // Partial arc: radial distance only if the nearest-angle point
            // lies on the arc, otherwise the endpoints decide.
            let ang = v.im.atan2(v.re);
            let (lo, hi) = if start_angle <= end_angle {
                (start_angle, end_angle)
            } else {
                (end_angle, start_angle)
            };
            let mut inside = false;
            let mut k = (lo - ang) / (2.0 * PI);
            k = k.floor();
            for j in 0..3 {
                let cand = ang + (k + j as f64) * 2.0 * PI;
                if (lo..=hi).contains(&cand) {
                    inside = true;
                    break;
                }
            }
            if inside {
                best = best.min(radial);
            } else {
                let pa = center + radius * Complex64::new(start_angle.cos(), start_angle.sin());
                let pb = center + radius * Complex64::new(end_angle.cos(), end_angle.sin());
                best = best.min((w - pa).norm().min((w - pb).norm()));
            }
        }
    }
    best
}

/// Distance from p to the orbit of the cut segment [0, x] under Γ.
pub fn point_cut_distance(p: Complex64, x: Complex64, lat: &Lattice) -> f64 {
    let (ca, cb) = lat.real_coordinates(p - 0.5 * x);
    let (m0, n0) = (ca.round() as i64, cb.round() as i64);
    let mut best = f64::INFINITY;
    for m in (m0 - 2)..=(m0 + 2) {
        for n in (n0 - 2)..=(n0 + 2) {
            let w = (m as f64) * lat.omega1 + (n as f64) * lat.omega2;
            best = best.min(point_segment_distance(p, w, w + x));
        }
    }
    best
}

// ───────────────────────── obstacles ─────────────────────────

/// The puncture orbits and cut segments of a configuration, packaged for
/// clearance queries.
#[derive(Debug, Clone)]
pub struct Obstacles {
    /// Puncture representatives: 0, x₀, x₁, x₂ (orbits under Γ).
    pub punctures: Vec<Complex64>,
    /// Cut segments [0, x_i] (orbits under Γ).
    pub cuts: Vec<Complex64>,
    pub lattice: Lattice,
}

impl Obstacles {
    /// Hard clearance floor for paths.
    pub fn clearance(&self) -> f64 {
        self.lattice.clearance()
    }

    /// Minimum distance from the piece to every puncture orbit.
    pub fn piece_puncture_distance(&self, piece: &Piece) -> f64 {
        let mut best = f64::INFINITY;
        for &x in &self.punctures {
            let d = match *piece {
                Piece::Line { from, to } => segment_orbit_distance(from, to, x, &self.lattice),
                Piece::Arc {
                    center,
                    radius,
                    start_angle,
                    end_angle,
                } => arc_orbit_distance(center, radius, start_angle, end_angle, x, &self.lattice),
            };
            best = best.min(d);
        }
        best
    }

    pub fn path_puncture_distance(&self, path: &CurvePath) -> f64 {
        path.pieces
            .iter()
            .map(|p| self.piece_puncture_distance(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks the hard clearance invariant for a path.
    pub fn check_path(&self, path: &CurvePath, context: &str) -> Result<()> {
        let dist = self.path_puncture_distance(path);
        if dist < self.clearance() {
            return Err(Error::ClearanceViolation {
                context: context.to_string(),
                dist,
                clearance: self.clearance(),
            });
        }
        Ok(())
    }

    /// Distance from a point to punctures and cuts together (the basepoint
    /// score).
    pub fn point_score(&self, p: Complex64) -> f64 {
        let mut best = f64::INFINITY;
        for &x in &self.punctures {
            best = best.min(point_orbit_distance(p, x, &self.lattice));
        }
        for &x in &self.cuts {
            best = best.min(point_cut_distance(p, x, &self.lattice));
        }
        best
    }

    /// True iff p stays farther than the clearance from every cut translate.
    pub fn in_cut_domain(&self, p: Complex64) -> bool {
        self.cuts
            .iter()
            .all(|&x| point_cut_distance(p, x, &self.lattice) > self.clearance())
    }
}

// ───────────────────────── routing ─────────────────────────

/// Deterministic basepoint: the cell point (i+½)/N·ω₁ + (j+½)/N·ω₂ on the
/// N×N grid (N = 64) maximizing the distance to all punctures and cuts.
/// Ties keep the first maximizer in row-major order.
pub fn choose_basepoint(obs: &Obstacles) -> Complex64 {
    let n = crate::tolerances::SEARCH_GRID;
    let lat = &obs.lattice;
    let mut best_p = Complex64::new(0.0, 0.0);
    let mut best_score = f64::NEG_INFINITY;
    for i in 0..n {
        for j in 0..n {
            let p = ((i as f64 + 0.5) / n as f64) * lat.omega1
                + ((j as f64 + 0.5) / n as f64) * lat.omega2;
            let s = obs.point_score(p);
            if s > best_score {
                best_score = s;
                best_p = p;
            }
        }
    }
    best_p
}

fn segment_clear(a: Complex64, b: Complex64, obs: &Obstacles, margin: f64) -> bool {
    obs.piece_puncture_distance(&Piece::Line { from: a, to: b }) >= margin
}

/// Connector from `from` to `to` avoiding the punctures: straight if clear,
/// otherwise a one-waypoint detour, otherwise recursive bisection (depth 3).
/// Wider margins are tried before the hard clearance floor, so the route
/// stays well-conditioned for quadrature whenever the geometry allows it.
pub fn find_connector(from: Complex64, to: Complex64, obs: &Obstacles) -> Result<CurvePath> {
    if (from - to).norm() < 1e-15 {
        return Ok(CurvePath::from_waypoints(&[from, to]));
    }
    let scale = obs.lattice.omega1.norm();
    for margin in [0.05 * scale, 0.01 * scale, obs.clearance()] {
        if let Some(path) = route(from, to, obs, margin, 3) {
            obs.check_path(&path, "connector")?;
            return Ok(path);
        }
    }
    Err(Error::ClearanceViolation {
        context: format!("no connector from {from} to {to} clears the punctures"),
        dist: obs.piece_puncture_distance(&Piece::Line { from, to }),
        clearance: obs.clearance(),
    })
}

fn route(
    from: Complex64,
    to: Complex64,
    obs: &Obstacles,
    margin: f64,
    depth: u32,
) -> Option<CurvePath> {
    if segment_clear(from, to, obs, margin) {
        return Some(CurvePath::from_waypoints(&[from, to]));
    }
    if depth == 0 {
        return None;
    }
    let mid = 0.5 * (from + to);
    let normal = Complex64::new(0.0, 1.0) * (to - from);
    for k in [0.25, -0.25, 0.5, -0.5, 0.75, -0.75] {
        let w = mid + k * normal;
        if segment_clear(from, w, obs, margin) && segment_clear(w, to, obs, margin) {
            return Some(CurvePath::from_waypoints(&[from, w, to]));
        }
    }
    for k in [0.25, -0.25, 0.5, -0.5] {
        let w = mid + k * normal;
        if let (Some(p1), Some(p2)) = (
            route(from, w, obs, margin, depth - 1),
            route(w, to, obs, margin, depth - 1),
        ) {
            return Some(p1.then(&p2));
        }
    }
    None
}

/// A period loop in direction ω_i (i = 1 or 2): a path from some start p to
/// p + ω_i projecting to a closed torus loop. The straight translate through
/// `base` is preferred; when it passes too near a puncture orbit the start is
/// offset on a grid (up to half a cell each way, nearest offsets first), and
/// one-waypoint dog-legs are tried before relaxing the distance margin. The
/// staged margins keep the loop well away from poles of the integrand
/// whenever the geometry allows it, falling back to the hard clearance floor
/// only when it does not.
pub fn find_period_loop(direction: u8, base: Complex64, obs: &Obstacles) -> Result<CurvePath> {
    find_period_loop_satisfying(direction, base, obs, |_| true)
}

/// [`find_period_loop`] with an extra acceptance predicate. Candidates are
/// enumerated in the same deterministic order (straight translates before
/// dog-legs, nearest offsets first, wider clearance margins first) and the
/// first one passing both the geometric clearance test and `accept` wins.
///
/// The predicate lets callers impose analytic side conditions that geometry
/// alone cannot see — different placements of a period loop relative to the
/// punctures are homotopic on the torus but not on the punctured torus, and
/// integrals of meromorphic forms over them differ by residue terms. A
/// caller that needs the representative on which such an integral takes its
/// homologically normalized value can test each candidate and reject the
/// others.
pub fn find_period_loop_satisfying<P>(
    direction: u8,
    base: Complex64,
    obs: &Obstacles,
    mut accept: P,
) -> Result<CurvePath>
where
    P: FnMut(&CurvePath) -> bool,
{
    let lat = &obs.lattice;
    let step = match direction {
        1 => lat.omega1,
        2 => lat.omega2,
        _ => panic!("period direction must be 1 or 2"),
    };
    let cross = match direction {
        1 => lat.omega2,
        _ => lat.omega1,
    };
    let grid = 16i32;
    let half = grid / 2;
    // Offsets ordered by taxicab size so the loop stays near `base` and the
    // chosen placement varies as little as possible between nearby
    // configurations.
    let mut offsets: Vec<(i32, i32)> = Vec::new();
    for u in -half..=half {
        for v in -half..=half {
            offsets.push((u, v));
        }
    }
    offsets.sort_by_key(|&(u, v)| (u.abs() + v.abs(), u, v));
    let scale = lat.omega1.norm();
    let margins = [
        0.10 * scale,
        0.05 * scale,
        0.02 * scale,
        0.005 * scale,
        obs.clearance(),
    ];
    for margin in margins {
        for &(u, v) in &offsets {
            let p = base
                + (u as f64 / grid as f64) * lat.omega1
                + (v as f64 / grid as f64) * lat.omega2;
            let straight = CurvePath::from_waypoints(&[p, p + step]);
            if obs.path_puncture_distance(&straight) >= margin && accept(&straight) {
                return Ok(straight);
            }
        }
        for &(u, v) in &offsets {
            let p = base
                + (u as f64 / grid as f64) * lat.omega1
                + (v as f64 / grid as f64) * lat.omega2;
            for k in 1..=half {
                for sgn in [1.0f64, -1.0] {
                    let w = p + 0.5 * step + sgn * (k as f64 / grid as f64) * cross;
                    let dogleg = CurvePath::from_waypoints(&[p, w, p + step]);
                    if obs.path_puncture_distance(&dogleg) >= margin && accept(&dogleg) {
                        return Ok(dogleg);
                    }
                }
            }
        }
    }
    Err(Error::NoClearLoopFound(direction))
}
