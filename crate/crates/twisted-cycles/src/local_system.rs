//! The multi-valued integrand g^α on the punctured torus and its branch
//! tracking.
//!
//! For a configuration q = (x₀, x₁, x₂) with x₀ + x₁ + x₂ = 0, the function
//!
//! ```text
//!     g(t) = σ(t−x₀)σ(t−x₁)σ(t−x₂) / (σ(t)³ σ(x₀)σ(x₁)σ(x₂))
//! ```
//!
//! is elliptic with divisor (x̄₀) + (x̄₁) + (x̄₂) − 3(0̄), and
//!
//! ```text
//!     dg/g = (ζ(t−x₀) + ζ(t−x₁) + ζ(t−x₂) − 3ζ(t)) dt
//! ```
//!
//! is single-valued. Branches of log g are continued along paths by
//! integrating dg/g; after every integration step the running value is
//! snapped onto the exact principal logarithm plus the implied multiple of
//! 2πi, so branch errors cannot accumulate: quadrature error only has to
//! stay below π per step, not below the target accuracy.
//!
//! A branch of g^α = exp(α·log g) is fixed once log g is fixed at one point;
//! the canonical choice anchors the principal logarithm at a deterministic
//! basepoint far from the punctures and cut segments.

use crate::elliptic::{sigma, wp, wp_prime, zeta, Lattice};
use crate::error::{Error, Result};
use crate::paths::{choose_basepoint, CurvePath, Obstacles, Piece};
use crate::quadrature::adaptive_complex;
use crate::tolerances as tol;
use num_complex::Complex64;
use std::f64::consts::PI;

/// A configuration q = (x̄₀, x̄₁, x̄₂) of three punctures with
/// x₀ + x₁ + x₂ = 0 on the torus attached to `lattice` (the fourth puncture
/// is 0̄).
#[derive(Debug, Clone)]
pub struct Configuration {
    pub x0: Complex64,
    pub x1: Complex64,
    pub x2: Complex64,
    pub lattice: Lattice,
    basepoint: Complex64,
}

impl Configuration {
    /// Builds a configuration from the first two representatives; the third
    /// is projected to x₂ := −x₀ − x₁ so the sum vanishes exactly as stored.
    /// Rejects configurations where two punctures collide mod Γ or one hits
    /// the lattice (tolerance 1e−9·|ω₁|).
    pub fn new(x0: Complex64, x1: Complex64, lattice: Lattice) -> Result<Configuration> {
        let q = Configuration::new_unchecked(x0, x1, lattice);
        let loci = q.degeneracy_loci();
        if !loci.is_empty() {
            return Err(Error::DegenerateConfiguration { loci });
        }
        Ok(q)
    }

    /// Like [`Configuration::new`] but accepts all three representatives,
    /// checking that the supplied x₂ is consistent before projecting.
    pub fn from_representatives(
        x0: Complex64,
        x1: Complex64,
        x2: Complex64,
        lattice: Lattice,
    ) -> Result<Configuration> {
        let proj = -x0 - x1;
        if (x2 - proj).norm() > 1e-6 * lattice.omega1.norm() {
            return Err(Error::DegenerateConfiguration {
                loci: vec![format!(
                    "representatives do not sum to zero: x2 = {x2}, -x0-x1 = {proj}"
                )],
            });
        }
        Configuration::new(x0, x1, lattice)
    }

    /// Skips the collision check (used for limits and singular points where
    /// punctures are allowed to collide).
    pub fn new_unchecked(x0: Complex64, x1: Complex64, lattice: Lattice) -> Configuration {
        let x2 = -x0 - x1;
        let mut q = Configuration {
            x0,
            x1,
            x2,
            lattice,
            basepoint: Complex64::new(0.0, 0.0),
        };
        q.basepoint = choose_basepoint(&q.obstacles());
        q
    }

    pub fn punctures(&self) -> [Complex64; 4] {
        [Complex64::new(0.0, 0.0), self.x0, self.x1, self.x2]
    }

    fn representative(&self, i: usize) -> Complex64 {
        match i {
            0 => self.x0,
            1 => self.x1,
            _ => self.x2,
        }
    }

    /// Tags of all degeneracy loci the configuration sits on: `D^ij` when
    /// x̄_i = x̄_j and `D^i_inf` when x̄_i = 0̄.
    pub fn degeneracy_loci(&self) -> Vec<String> {
        let tolerance = tol::CONFIG_COLLISION_FACTOR * self.lattice.omega1.norm();
        let mut loci = Vec::new();
        for i in 0..3usize {
            for j in (i + 1)..3usize {
                let d = self
                    .lattice
                    .distance_to_lattice(self.representative(i) - self.representative(j));
                if d < tolerance {
                    loci.push(format!("D^{i}{j}"));
                }
            }
        }
        for i in 0..3usize {
            if self.lattice.distance_to_lattice(self.representative(i)) < tolerance {
                loci.push(format!("D^{i}_inf"));
            }
        }
        loci
    }

    /// Puncture orbits and cut segments for clearance queries.
    pub fn obstacles(&self) -> Obstacles {
        Obstacles {
            punctures: self.punctures().to_vec(),
            cuts: vec![self.x0, self.x1, self.x2],
            lattice: self.lattice,
        }
    }

    /// The deterministic basepoint t*: the 64×64 cell grid point maximizing
    /// the distance to all punctures and cuts.
    pub fn basepoint(&self) -> Complex64 {
        self.basepoint
    }

    /// The canonical branch: principal logarithm of g at the basepoint.
    pub fn canonical_branch(&self) -> Result<BranchState> {
        BranchState::principal(self.basepoint, self)
    }
}

/// The exponent α together with its monodromy unit c = e^{2πiα}.
#[derive(Debug, Clone, Copy)]
pub struct AlphaParam {
    alpha: Complex64,
    c: Complex64,
}

impl AlphaParam {
    /// Rejects α within 1e−9 of (1/2)ℤ ∪ (1/3)ℤ, where the twisted theory
    /// degenerates (c³ = 1 makes regularization weights blow up or the dual
    /// pairing collapse).
    pub fn new(alpha: Complex64) -> Result<AlphaParam> {
        let mut nearest = f64::INFINITY;
        for den in [2.0, 3.0] {
            let k = (alpha.re * den).round();
            let d = (alpha - Complex64::new(k / den, 0.0)).norm();
            nearest = nearest.min(d);
        }
        if nearest < tol::ALPHA_EXCLUSION_TOL {
            return Err(Error::ResonantAlpha {
                alpha: alpha.to_string(),
                tol: tol::ALPHA_EXCLUSION_TOL,
            });
        }
        let a = AlphaParam::new_unchecked(alpha);
        debug_assert!((a.c - Complex64::new(1.0, 0.0)).norm() > 1e-9);
        Ok(a)
    }

    /// No exclusion check — for diagnostics at resonant exponents such as
    /// α = 1, where g^α is single-valued.
    pub fn new_unchecked(alpha: Complex64) -> AlphaParam {
        AlphaParam {
            alpha,
            c: (2.0 * PI * Complex64::new(0.0, 1.0) * alpha).exp(),
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    /// c = e^{2πiα}.
    pub fn c(&self) -> Complex64 {
        self.c
    }
}

/// A branch of log g pinned at a point.
#[derive(Debug, Clone, Copy)]
pub struct BranchState {
    pub basepoint: Complex64,
    pub log_g_at_basepoint: Complex64,
}

impl BranchState {
    /// The principal branch at t.
    pub fn principal(t: Complex64, q: &Configuration) -> Result<BranchState> {
        Ok(BranchState {
            basepoint: t,
            log_g_at_basepoint: g_value(t, q)?.ln(),
        })
    }

    pub fn at(&self, t: Complex64, tolerance: f64) -> bool {
        (self.basepoint - t).norm() < tolerance
    }
}

fn guard_punctures(t: Complex64, q: &Configuration) -> Result<()> {
    let guard = q.lattice.pole_guard();
    let labels: [(&'static str, Complex64); 4] = [
        ("0", Complex64::new(0.0, 0.0)),
        ("x0", q.x0),
        ("x1", q.x1),
        ("x2", q.x2),
    ];
    for (which, x) in labels {
        let dist = q.lattice.distance_to_lattice(t - x);
        if dist < guard {
            return Err(Error::PoleOrZero { which, dist, guard });
        }
    }
    Ok(())
}

/// g(t) = σ(t−x₀)σ(t−x₁)σ(t−x₂) / (σ(t)³ σ(x₀)σ(x₁)σ(x₂)).
pub fn g_value(t: Complex64, q: &Configuration) -> Result<Complex64> {
    guard_punctures(t, q)?;
    let lat = &q.lattice;
    let num = sigma(t - q.x0, lat) * sigma(t - q.x1, lat) * sigma(t - q.x2, lat);
    let st = sigma(t, lat);
    let den = st * st * st * sigma(q.x0, lat) * sigma(q.x1, lat) * sigma(q.x2, lat);
    Ok(num / den)
}

/// dlog g(t) = ζ(t−x₀) + ζ(t−x₁) + ζ(t−x₂) − 3ζ(t).
pub fn dlog_g(t: Complex64, q: &Configuration) -> Result<Complex64> {
    guard_punctures(t, q)?;
    let lat = &q.lattice;
    Ok(zeta(t - q.x0, lat)? + zeta(t - q.x1, lat)? + zeta(t - q.x2, lat)?
        - 3.0 * zeta(t, lat)?)
}

/// g^α at a point where the branch has been continued.
pub fn g_alpha(t: Complex64, branch: &BranchState, a: &AlphaParam) -> Complex64 {
    debug_assert!(branch.at(t, 1e-9));
    (a.alpha() * branch.log_g_at_basepoint).exp()
}

// ───────────────────── branch transport machinery ─────────────────────

/// Snaps a continued-log estimate onto the exact value: the principal
/// logarithm of g plus the multiple of 2πi nearest the estimate.
fn snap_log(estimate: Complex64, g_val: Complex64) -> Complex64 {
    let principal = g_val.ln();
    let k = ((estimate.im - principal.im) / (2.0 * PI)).round();
    principal + Complex64::new(0.0, 2.0 * PI * k)
}

/// A path piece with an ordered branch partition: snapped values of log g at
/// partition points, spaced so the phase of g moves less than ~0.8 radians
/// per cell. Interior branch values follow by a trapezoid estimate plus a
/// snap, so they are exact whenever the estimate lands within π of the truth
/// — guaranteed by the cell-size bound with a wide margin.
pub(crate) struct BranchedPiece {
    pub piece: Piece,
    ts: Vec<f64>,
    logs: Vec<Complex64>,
    derivs: Vec<Complex64>, // d/dt log g(z(t)) at the partition points
}

/// Maximum phase motion allowed per partition cell, radians.
const CELL_VARIATION: f64 = 0.8;
/// Snap corrections larger than this flag a failed transport step.
const SNAP_RESIDUAL_MAX: f64 = 0.35;
const PARTITION_MAX_DEPTH: u32 = 28;

pub(crate) fn transport_over_piece(
    piece: Piece,
    q: &Configuration,
    log_start: Complex64,
) -> Result<BranchedPiece> {
    let h = |t: f64| -> Result<Complex64> { Ok(dlog_g(piece.point(t), q)? * piece.derivative(t)) };
    let mut bp = BranchedPiece {
        piece,
        ts: vec![0.0],
        logs: vec![log_start],
        derivs: vec![h(0.0)?],
    };
    extend(&mut bp, q, &h, 0.0, 1.0, 0)?;
    Ok(bp)
}

fn extend(
    bp: &mut BranchedPiece,
    q: &Configuration,
    h: &dyn Fn(f64) -> Result<Complex64>,
    a: f64,
    b: f64,
    depth: u32,
) -> Result<()> {
    let mid = 0.5 * (a + b);
    let speed = h(a)?.norm().max(h(mid)?.norm()).max(h(b)?.norm());
    if speed * (b - a) > CELL_VARIATION && depth < PARTITION_MAX_DEPTH {
        extend(bp, q, h, a, mid, depth + 1)?;
        return extend(bp, q, h, mid, b, depth + 1);
    }
    let (dint, _err, _n) = adaptive_complex(h, a, b, tol::CONTINUATION_ABS_TOL)?;
    let prev = *bp.logs.last().expect("partition starts non-empty");
    let estimate = prev + dint;
    let g_end = g_value(bp.piece.point(b), q)?;
    let snapped = snap_log(estimate, g_end);
    if (estimate - snapped).norm() > SNAP_RESIDUAL_MAX {
        if depth >= PARTITION_MAX_DEPTH {
            return Err(Error::QuadratureFailure {
                requested: SNAP_RESIDUAL_MAX,
                achieved: (estimate - snapped).norm(),
            });
        }
        extend(bp, q, h, a, mid, depth + 1)?;
        return extend(bp, q, h, mid, b, depth + 1);
    }
    bp.ts.push(b);
    bp.logs.push(snapped);
    bp.derivs.push(h(b)?);
    Ok(())
}

impl BranchedPiece {
    pub(crate) fn end_log(&self) -> Complex64 {
        *self.logs.last().expect("non-empty partition")
    }

    /// The continued branch of log g at parameter t ∈ [0, 1].
    pub(crate) fn log_at(&self, t: f64, q: &Configuration) -> Result<Complex64> {
        let k = match self.ts.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(self.ts.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.ts.len() - 2),
        };
        let t0 = self.ts[k];
        let z = self.piece.point(t);
        let ht = dlog_g(z, q)? * self.piece.derivative(t);
        // Trapezoid estimate of the log increment over [t0, t]; its error is
        // far below π by the cell-size bound, so the snap recovers the exact
        // branch.
        let estimate = self.logs[k] + 0.5 * (self.derivs[k] + ht) * (t - t0);
        let snapped = snap_log(estimate, g_value(z, q)?);
        if (estimate - snapped).norm() > 1.5 {
            return Err(Error::QuadratureFailure {
                requested: 1.5,
                achieved: (estimate - snapped).norm(),
            });
        }
        Ok(snapped)
    }
}

/// Continues a branch of log g along a path by integrating dlog g, snapping
/// the result onto the exact branch after every step.
pub fn continue_log_g(path: &CurvePath, q: &Configuration, start: &BranchState) -> Result<BranchState> {
    assert!(
        start.at(path.start(), 1e-9 * q.lattice.omega1.norm().max(1.0)),
        "continuation path must start at the branch basepoint"
    );
    q.obstacles().check_path(path, "branch continuation")?;
    let mut log = start.log_g_at_basepoint;
    for &piece in &path.pieces {
        let bp = transport_over_piece(piece, q, log)?;
        log = bp.end_log();
    }
    let end = path.end();
    let g_end = g_value(end, q)?;
    let residual = ((log.exp() - g_end) / g_end).norm();
    if residual > tol::BRANCH_CONSISTENCY_REL {
        return Err(Error::QuadratureFailure {
            requested: tol::BRANCH_CONSISTENCY_REL,
            achieved: residual,
        });
    }
    Ok(BranchState {
        basepoint: end,
        log_g_at_basepoint: log,
    })
}

/// ∮ f(z) dz over every piece of a path, each at the given absolute
/// tolerance.
fn path_integral<F>(path: &CurvePath, f: &F, abs_tol: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut total = Complex64::new(0.0, 0.0);
    for piece in &path.pieces {
        let h = |t: f64| -> Result<Complex64> { Ok(f(piece.point(t))? * piece.derivative(t)) };
        let (v, _e, _n) = adaptive_complex(&h, 0.0, 1.0, abs_tol)?;
        total += v;
    }
    Ok(total)
}

/// A period loop in direction ω_i on which ∮ dlog g takes its normalized
/// value.
///
/// For any loop from p to p + ω_i the quasi-periodicity of σ gives
/// ∮ dlog g = −η_i·(x₀+x₁+x₂) + 2πi·m = 2πi·m, where the integer m shifts
/// by ±1 each time the loop slides across a zero x̄_j (and by ∓3 across the
/// triple pole 0̄). Geometric clearance alone cannot see m, and for some
/// configurations no straight translate realizes m = 0, so candidates from
/// the deterministic loop family are probed by a coarse integral and the
/// first one with vanishing increment is kept.
pub fn period_loop_trivial_winding(direction: u8, q: &Configuration) -> Result<CurvePath> {
    let obs = q.obstacles();
    let loop_path =
        crate::paths::find_period_loop_satisfying(direction, q.basepoint(), &obs, |cand| {
            match path_integral(cand, &|z| dlog_g(z, q), tol::LOOP_WINDING_PROBE_TOL) {
                Ok(v) => v.norm() < tol::LOOP_WINDING_SEPARATION,
                Err(_) => false,
            }
        })?;
    obs.check_path(&loop_path, "period loop")?;
    Ok(loop_path)
}

/// ∮ dlog g over the normalized period loop in direction ω_i; vanishes
/// exactly when x₀ + x₁ + x₂ = 0. Purely a residual diagnostic — anything
/// beyond quadrature error signals a broken sum-zero mechanism.
pub fn abelian_integral_i(direction: u8, q: &Configuration) -> Result<Complex64> {
    let loop_path = period_loop_trivial_winding(direction, q)?;
    path_integral(
        &loop_path,
        &|z| dlog_g(z, q),
        tol::CONTINUATION_ABS_TOL,
    )
}

/// The same loop integral with raw representatives that need not sum to
/// zero — a diagnostic for the sum-zero mechanism, bypassing the
/// [`Configuration`] invariant. When x₀+x₁+x₂ = δ the normalized value is
/// −η_i·δ (the period integral of ℘ times the defect); the loop is selected
/// for that branch exactly as in [`period_loop_trivial_winding`].
pub fn abelian_integral_raw(
    direction: u8,
    xs: [Complex64; 3],
    lattice: &Lattice,
) -> Result<Complex64> {
    let obs = Obstacles {
        punctures: vec![Complex64::new(0.0, 0.0), xs[0], xs[1], xs[2]],
        cuts: vec![],
        lattice: *lattice,
    };
    let base = choose_basepoint(&obs);
    let integrand = |z: Complex64| -> Result<Complex64> {
        Ok(zeta(z - xs[0], lattice)? + zeta(z - xs[1], lattice)? + zeta(z - xs[2], lattice)?
            - 3.0 * zeta(z, lattice)?)
    };
    let eta = match direction {
        1 => lattice.eta1,
        _ => lattice.eta2,
    };
    let expected = -eta * (xs[0] + xs[1] + xs[2]);
    let loop_path = crate::paths::find_period_loop_satisfying(direction, base, &obs, |cand| {
        match path_integral(cand, &integrand, tol::LOOP_WINDING_PROBE_TOL) {
            Ok(v) => (v - expected).norm() < tol::LOOP_WINDING_SEPARATION,
            Err(_) => false,
        }
    })?;
    path_integral(&loop_path, &integrand, tol::CONTINUATION_ABS_TOL)
}

/// True iff t stays clear of every lattice translate of the three cut
/// segments [0, x_i].
pub fn in_cut_domain(t: Complex64, q: &Configuration) -> bool {
    q.obstacles().in_cut_domain(t)
}

/// Writes g(t) = ℘′(t)/2 + b·℘(t) + d, which holds for every configuration
/// with x₀+x₁+x₂ = 0 (g has only the order-3 pole at 0̄ with residue 0 and
/// leading coefficient −1). Returns (b, d), solved from two sample points;
/// b equals ζ(x₀)+ζ(x₁)+ζ(x₂).
pub fn g_partial_fraction_constants(q: &Configuration) -> Result<(Complex64, Complex64)> {
    let lat = &q.lattice;
    let scale = lat.omega1.norm();
    // Two puncture-clear points with well-separated ℘ values, found on a
    // deterministic scan.
    let mut first: Option<(Complex64, Complex64)> = None;
    for k in 0..64u32 {
        let t = q.basepoint()
            + ((k as f64 + 1.0) * 0.11) * lat.omega1
            + ((k as f64 + 1.0) * 0.07) * lat.omega2;
        if min_puncture_distance(t, q) < 0.04 * scale {
            continue;
        }
        let p = wp(t, lat)?;
        match first {
            None => first = Some((t, p)),
            Some((t1, p1)) => {
                if (p - p1).norm() < 0.1 {
                    continue;
                }
                let lhs1 = g_value(t1, q)? - 0.5 * wp_prime(t1, lat)?;
                let lhs2 = g_value(t, q)? - 0.5 * wp_prime(t, lat)?;
                let b = (lhs1 - lhs2) / (p1 - p);
                let d = lhs1 - b * p1;
                return Ok((b, d));
            }
        }
    }
    unreachable!("a generic cell always contains two separated sample points")
}

pub(crate) fn min_puncture_distance(t: Complex64, q: &Configuration) -> f64 {
    q.punctures()
        .iter()
        .map(|&x| q.lattice.distance_to_lattice(t - x))
        .fold(f64::INFINITY, f64::min)
}
