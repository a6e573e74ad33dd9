//! Adaptive complex-line quadrature and the regularized cycle integrals
//! F_μ(q) = ∫ g^α dt.
//!
//! The quadrature kernel is a 7–15 Gauss–Kronrod rule with adaptive
//! bisection; it integrates `f: [a,b] → ℂ` to an absolute tolerance and
//! reports an error estimate plus the evaluation count.
//!
//! The cycle layer realizes the twisted homology generators geometrically:
//!
//! * **segment cycles** (ij): an ε-circle around x_i, the truncated segment
//!   [x_i + εû, x_j − εû], and an ε-circle around x_j, weighted
//!   (1/(c−1), 1, −1/(c−1)) — the regularization that makes the chain a
//!   cycle and the integral ε-independent;
//! * **period cycles** ω₁, ω₂: one straight translate t ↦ t + ω_i, weight 1.
//!
//! Branch loading: each piece carries the analytic continuation of the
//! global section ς of g^α picked at the canonical basepoint t*. The twisted
//! boundary of the weighted sum cancels exactly when the circle at x_i and
//! the segment share the branch value at x_i + εû, and the circle at x_j is
//! anchored at the segment's terminal branch state — so the circles'
//! own end states are discarded rather than chained onward.
//!
//! Anchoring against ς is what makes *different* cycles comparable (the
//! homology relation and vanishing-cycle combinations are linear relations
//! between separately-built cycles). A connector path from t* may cross the
//! branch cuts [0̄, x̄_i]; each signed crossing offsets the continued log g
//! from the global section by ±2πi, which is corrected by counting
//! crossings, so connectors only need puncture clearance, not cut avoidance.

use crate::chains::{CycleIndex, BASIS_J_PRIME};
use crate::elliptic::Lattice;
use crate::error::{Error, Result};
use crate::local_system::{
    abelian_integral_i, continue_log_g, g_value, min_puncture_distance,
    period_loop_trivial_winding, transport_over_piece, AlphaParam, BranchState, Configuration,
};
use crate::paths::{find_connector, CurvePath, Piece};
use crate::picard_lefschetz::{path_point_with_window, vanishing_cycle, PathLabel};
use crate::tolerances as tol;
use num_complex::Complex64;
use std::f64::consts::PI;

// ───────────────────── Gauss–Kronrod 7–15 kernel ─────────────────────

/// Kronrod abscissae on [0, 1] side of the symmetric rule; XGK[7] = 0 is the
/// center. Odd indices are the embedded 7-point Gauss abscissae.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

/// Gauss weights for XGK[1], XGK[3], XGK[5] and the center.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Kronrod weights matching XGK.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// One Gauss–Kronrod panel: returns (integral, error estimate).
fn gk15<F>(f: &F, a: f64, b: f64) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Result<Complex64> + ?Sized,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    let mut fv1 = [Complex64::new(0.0, 0.0); 7];
    let mut fv2 = [Complex64::new(0.0, 0.0); 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        let sum = f1 + f2;
        resk += WGK[j] * sum;
        if j % 2 == 1 {
            resg += WG[j / 2] * sum;
        }
    }
    // Kronrod estimate of ∫|f − mean|, the scale against which the raw
    // Gauss/Kronrod discrepancy is judged (the QUADPACK error heuristic).
    let mean = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }
    resasc *= half.abs();
    let result = resk * half;
    let mut err = ((resk - resg) * half).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    Ok((result, err))
}

fn refine<F>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    depth: u32,
    evals: &mut u64,
) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Result<Complex64> + ?Sized,
{
    let (value, err) = gk15(f, a, b)?;
    *evals += 15;
    if err <= abs_tol {
        return Ok((value, err));
    }
    if depth >= tol::QUAD_MAX_DEPTH {
        return Err(Error::QuadratureFailure {
            requested: abs_tol,
            achieved: err,
        });
    }
    let mid = 0.5 * (a + b);
    let (v1, e1) = refine(f, a, mid, 0.5 * abs_tol, depth + 1, evals)?;
    let (v2, e2) = refine(f, mid, b, 0.5 * abs_tol, depth + 1, evals)?;
    Ok((v1 + v2, e1 + e2))
}

/// Integrates f over [a, b] to absolute tolerance `abs_tol` by adaptive
/// Gauss–Kronrod bisection. Returns (value, error estimate, evaluations).
pub fn adaptive_complex<F>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<(Complex64, f64, u64)>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if a == b {
        return Ok((Complex64::new(0.0, 0.0), 0.0, 0));
    }
    let mut evals = 0u64;
    let (value, err) = refine(&f, a, b, abs_tol, 0, &mut evals)?;
    Ok((value, err, evals))
}

// ───────────────────── global-section anchoring ─────────────────────

/// Signed crossings of a polyline path with the branch cuts \[0̄, x̄_i\] (all
/// lattice translates). Crossing so that the continued branch gains the
/// factor c counts +1. Errors if a crossing falls too close to a path vertex
/// or a cut endpoint to classify reliably.
fn signed_cut_crossings(path: &CurvePath, q: &Configuration) -> Result<i64> {
    let lat = &q.lattice;
    let cross = |u: Complex64, v: Complex64| u.re * v.im - u.im * v.re;
    let mut total = 0i64;
    for piece in &path.pieces {
        let (from, to) = match *piece {
            Piece::Line { from, to } => (from, to),
            Piece::Arc { .. } => {
                return Err(Error::Parse(
                    "cut-crossing count supports polyline connectors only".into(),
                ))
            }
        };
        let r = to - from;
        if r.norm() < 1e-15 {
            continue;
        }
        for &x in [q.x0, q.x1, q.x2].iter() {
            // Translate range covering both the piece and the cut span.
            let (a1, b1) = lat.real_coordinates(from);
            let (a2, b2) = lat.real_coordinates(to);
            let (cx, cy) = lat.real_coordinates(x);
            let lo_m = (a1.min(a2) - cx.max(0.0) - 1.0).floor() as i64;
            let hi_m = (a1.max(a2) - cx.min(0.0) + 1.0).ceil() as i64;
            let lo_n = (b1.min(b2) - cy.max(0.0) - 1.0).floor() as i64;
            let hi_n = (b1.max(b2) - cy.min(0.0) + 1.0).ceil() as i64;
            for m in lo_m..=hi_m {
                for n in lo_n..=hi_n {
                    let base = (m as f64) * lat.omega1 + (n as f64) * lat.omega2;
                    // Cut from base to base + x; direction x.
                    let denom = cross(r, x);
                    if denom.abs() < 1e-12 * r.norm() * x.norm() {
                        // Parallel: a crossing is impossible, but running
                        // along the cut would make the count ill-defined.
                        let offset = cross(base - from, r) / r.norm();
                        if offset.abs() < 1e-9 * x.norm() {
                            return Err(Error::Parse(
                                "connector runs along a branch cut; crossing count undefined"
                                    .into(),
                            ));
                        }
                        continue;
                    }
                    let t = cross(base - from, x) / denom;
                    let w = cross(base - from, r) / denom;
                    let delta = 1e-9;
                    let t_interior = t > delta && t < 1.0 - delta;
                    let w_interior = w > delta && w < 1.0 - delta;
                    let t_marginal = (t > -delta && t < delta) || (t > 1.0 - delta && t < 1.0 + delta);
                    let w_marginal = (w > -delta && w < delta) || (w > 1.0 - delta && w < 1.0 + delta);
                    if t_interior && w_interior {
                        total += if cross(x, r) > 0.0 { -1 } else { 1 };
                    } else if (t_marginal && (w_interior || w_marginal))
                        || (w_marginal && t_interior)
                    {
                        return Err(Error::Parse(
                            "connector touches a branch cut endpoint; crossing count undefined"
                                .into(),
                        ));
                    }
                }
            }
        }
    }
    Ok(total)
}

/// The global section's branch of log g at `p`: the canonical branch at t*
/// continued along a clearance-respecting connector, corrected by 2πi per
/// signed cut crossing so the result is connector-independent.
fn global_branch_at(p: Complex64, q: &Configuration) -> Result<BranchState> {
    let start = q.canonical_branch()?;
    if (p - q.basepoint()).norm() < 1e-15 {
        return Ok(start);
    }
    let connector = find_connector(q.basepoint(), p, &q.obstacles())?;
    let continued = continue_log_g(&connector, q, &start)?;
    let crossings = signed_cut_crossings(&connector, q)?;
    Ok(BranchState {
        basepoint: continued.basepoint,
        log_g_at_basepoint: continued.log_g_at_basepoint
            - Complex64::new(0.0, 2.0 * PI * (crossings as f64)),
    })
}

// ───────────────────── regularized cycles ─────────────────────

/// Which homology generator a realized cycle computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleKind {
    /// Regularized segment between punctures x_i and x_j.
    Segment(usize, usize),
    /// Period loop in direction ω₁ (1) or ω₂ (2).
    Period(u8),
}

/// A geometric realization of a twisted cycle: weighted pieces plus the
/// branch state anchoring the first piece to the global section.
#[derive(Debug, Clone)]
pub struct RegularizedCycle {
    pub kind: CycleKind,
    pub epsilon: f64,
    /// (path, weight); paths are traversed in order, each closed path reusing
    /// the anchor of the point it is based at.
    pub pieces: Vec<(CurvePath, Complex64)>,
    /// Branch of log g at the first path's start, anchored to the global
    /// section.
    pub branch: BranchState,
    config: Configuration,
}

/// Value, error estimate and integrand-evaluation count of one cycle
/// integral.
#[derive(Debug, Clone, Copy)]
pub struct IntegralResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: u64,
}

fn segment_endpoints(mu: CycleIndex) -> Option<(usize, usize)> {
    match mu {
        CycleIndex::Seg01 => Some((0, 1)),
        CycleIndex::Seg12 => Some((1, 2)),
        CycleIndex::Seg20 => Some((2, 0)),
        CycleIndex::LoopOmega1 | CycleIndex::LoopOmega2 => None,
    }
}

/// Builds the geometric realization of the twisted cycle Ξ_μ at q.
///
/// For segment cycles, ε must leave the two circles disjoint from each other
/// and from every other puncture orbit. For period cycles ε is unused; the
/// loop is the normalized translate near the basepoint (straight where
/// possible, a dog-leg when the trivial-winding representative requires it).
pub fn build_cycle(
    mu: CycleIndex,
    q: &Configuration,
    a: &AlphaParam,
    epsilon: f64,
) -> Result<RegularizedCycle> {
    let lat = &q.lattice;
    match segment_endpoints(mu) {
        None => {
            let direction = if mu == CycleIndex::LoopOmega1 { 1 } else { 2 };
            // The normalized loop (trivial log g winding) makes g^α return to
            // its starting branch after the translate, so the cycle closes in
            // the local system without a compensating weight.
            let loop_path = period_loop_trivial_winding(direction, q)?;
            let branch = global_branch_at(loop_path.start(), q)?;
            Ok(RegularizedCycle {
                kind: CycleKind::Period(direction),
                epsilon,
                pieces: vec![(loop_path, Complex64::new(1.0, 0.0))],
                branch,
                config: q.clone(),
            })
        }
        Some((i, j)) => {
            let xi = [q.x0, q.x1, q.x2][i];
            let xj = [q.x0, q.x1, q.x2][j];
            let chord = xj - xi;
            let clearance = lat.clearance();
            if epsilon <= 0.0 || 2.0 * epsilon + clearance >= chord.norm() {
                return Err(Error::EpsilonTooLarge {
                    epsilon,
                    context: format!(
                        "circles of radius {epsilon:.3e} overlap on the segment {mu} of length {:.3e}",
                        chord.norm()
                    ),
                });
            }
            let punctures = q.punctures();
            for (center, center_idx) in [(xi, i + 1), (xj, j + 1)] {
                for (k, &p) in punctures.iter().enumerate() {
                    if k == center_idx {
                        continue;
                    }
                    let d = lat.distance_to_lattice(center - p);
                    if d < epsilon + clearance {
                        return Err(Error::EpsilonTooLarge {
                            epsilon,
                            context: format!(
                                "circle on {mu} comes within {d:.3e} of another puncture orbit"
                            ),
                        });
                    }
                }
            }
            let unit = chord / chord.norm();
            let p_i = xi + epsilon * unit;
            let p_j = xj - epsilon * unit;
            let c = a.c();
            if (c - Complex64::new(1.0, 0.0)).norm() < tol::ALPHA_EXCLUSION_TOL {
                return Err(Error::ResonantAlpha {
                    alpha: a.alpha().to_string(),
                    tol: tol::ALPHA_EXCLUSION_TOL,
                });
            }
            let w = (c - Complex64::new(1.0, 0.0)).finv();
            let branch = global_branch_at(p_i, q)?;
            Ok(RegularizedCycle {
                kind: CycleKind::Segment(i, j),
                epsilon,
                pieces: vec![
                    (CurvePath::circle(xi, epsilon, unit.arg()), w),
                    (
                        CurvePath::from_waypoints(&[p_i, p_j]),
                        Complex64::new(1.0, 0.0),
                    ),
                    (CurvePath::circle(xj, epsilon, (-unit).arg()), -w),
                ],
                branch,
                config: q.clone(),
            })
        }
    }
}

/// Evaluates Σ_pieces weight·∫ g^α dt over the realized cycle to absolute
/// tolerance `tol_abs`: the branch continues from the cycle's anchor through
/// open pieces, while closed pieces (the ε-circles) borrow the anchor at
/// their basepoint and their terminal branch state is discarded.
pub fn integrate(cycle: &RegularizedCycle, a: &AlphaParam, tol_abs: f64) -> Result<IntegralResult> {
    let q = &cycle.config;
    let obs = q.obstacles();
    let piece_count: usize = cycle.pieces.iter().map(|(p, _)| p.pieces.len()).sum();
    let mut value = Complex64::new(0.0, 0.0);
    let mut error_estimate = 0.0;
    let mut evaluations = 0u64;
    let mut anchor = cycle.branch;
    for (path, weight) in &cycle.pieces {
        obs.check_path(path, "cycle piece")?;
        debug_assert!(anchor.at(path.start(), 1e-9 * q.lattice.omega1.norm().max(1.0)));
        let piece_tol = tol_abs / (piece_count.max(1) as f64) / weight.norm().max(1.0);
        let mut log = anchor.log_g_at_basepoint;
        let mut path_value = Complex64::new(0.0, 0.0);
        for piece in &path.pieces {
            let bp = transport_over_piece(*piece, q, log)?;
            let h = |t: f64| -> Result<Complex64> {
                Ok((a.alpha() * bp.log_at(t, q)?).exp() * piece.derivative(t))
            };
            let (v, e, n) = adaptive_complex(&h, 0.0, 1.0, piece_tol)?;
            path_value += v;
            error_estimate += e * weight.norm();
            evaluations += n;
            log = bp.end_log();
        }
        value += weight * path_value;
        if !path.is_closed() {
            anchor = BranchState {
                basepoint: path.end(),
                log_g_at_basepoint: log,
            };
        }
    }
    Ok(IntegralResult {
        value,
        error_estimate,
        evaluations,
    })
}

// ───────────────────── higher-level drivers ─────────────────────

/// Smallest pairwise torus distance between the four punctures.
fn puncture_gap(q: &Configuration) -> f64 {
    let ps = q.punctures();
    let mut gap = f64::INFINITY;
    for i in 0..4 {
        for j in (i + 1)..4 {
            gap = gap.min(q.lattice.distance_to_lattice(ps[i] - ps[j]));
        }
    }
    gap
}

/// ε-circle radius adapted to the configuration: the default fraction of
/// |ω₁|, shrunk when punctures crowd each other.
pub fn adapted_epsilon(q: &Configuration) -> f64 {
    (tol::EPSILON_DEFAULT_FACTOR * q.lattice.omega1.norm())
        .min(tol::EPSILON_GAP_FACTOR * puncture_gap(q))
}

/// |∫_{Δ(q(s))} g^α dt| for each s: the vanishing cycle Δ of an elementary
/// path, realized as its J′-coordinate combination of regularized cycles at
/// the configuration q(s) on the path. The magnitudes must decay as
/// s → 1/2.
pub fn vanishing_limit(
    label: &PathLabel,
    a: &AlphaParam,
    s_values: &[f64],
    lattice: Lattice,
) -> Result<Vec<f64>> {
    let delta = vanishing_cycle(label)?;
    let coords: Vec<Complex64> = delta
        .j_prime_coords()
        .iter()
        .map(|r| r.eval(a.c()))
        .collect();
    let mut magnitudes = Vec::with_capacity(s_values.len());
    for &s in s_values {
        let q = path_point_with_window(label, s, tol::VANISHING_WINDOW, lattice)?;
        let eps = adapted_epsilon(&q);
        let mut total = Complex64::new(0.0, 0.0);
        for (nu, &mu) in BASIS_J_PRIME.iter().enumerate() {
            if coords[nu].norm() == 0.0 {
                continue;
            }
            let cycle = build_cycle(mu, &q, a, eps)?;
            let result = integrate(&cycle, a, tol::QUAD_ABS_TOL)?;
            total += coords[nu] * result.value;
        }
        magnitudes.push(total.norm());
    }
    Ok(magnitudes)
}

/// One line of the numeric cross-validation report.
#[derive(Debug, Clone)]
pub struct CheckRecord {
    pub check: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckRecord {
    fn new(check: &str, value: f64, threshold: f64) -> CheckRecord {
        CheckRecord {
            check: check.to_string(),
            value,
            threshold,
            pass: value <= threshold,
        }
    }
}

/// Monodromy factor of g^α around one puncture: continue the canonical
/// branch along basepoint → circle → back and exponentiate the log-g
/// increment times α. Expected: c at each x̄_i, c⁻³ at 0̄.
pub fn monodromy_ratio(center: Complex64, q: &Configuration, a: &AlphaParam) -> Result<Complex64> {
    let lat = &q.lattice;
    let mut nearest = f64::INFINITY;
    for &p in q.punctures().iter() {
        let d = lat.distance_to_lattice(center - p);
        if d > lat.clearance() {
            nearest = nearest.min(d);
        }
    }
    let radius =
        (tol::MONODROMY_RADIUS_FACTOR * lat.omega1.norm()).min(tol::EPSILON_GAP_FACTOR * nearest);
    let direction = {
        let d = q.basepoint() - center;
        d / d.norm()
    };
    let entry = center + radius * direction;
    let obs = q.obstacles();
    let connector = find_connector(q.basepoint(), entry, &obs)?;
    let circle = CurvePath::circle(center, radius, direction.arg());
    let path = connector.then(&circle).then(&connector.reversed());
    let start = q.canonical_branch()?;
    let end = continue_log_g(&path, q, &start)?;
    Ok((a.alpha() * (end.log_g_at_basepoint - start.log_g_at_basepoint)).exp())
}

/// Runs the full numeric cross-validation bundle at one configuration:
/// Legendre residual, period integrals of dlog g, monodromy factors around
/// all four punctures, ellipticity of g, ε-independence of every segment
/// cycle, and the homology-relation residual.
pub fn numeric_report(q: &Configuration, a: &AlphaParam) -> Result<Vec<CheckRecord>> {
    let lat = &q.lattice;
    let mut records = Vec::new();

    let legendre = (lat.eta1 * lat.omega2 - lat.eta2 * lat.omega1
        - Complex64::new(0.0, 2.0 * PI))
    .norm()
        / (2.0 * PI);
    records.push(CheckRecord::new("legendre", legendre, tol::LEGENDRE_REL));

    for direction in [1u8, 2u8] {
        let residual = abelian_integral_i(direction, q)?.norm();
        records.push(CheckRecord::new(
            &format!("abelian_{direction}"),
            residual,
            tol::ABELIAN_RESIDUAL_TOL,
        ));
    }

    let c = a.c();
    for (name, center, expected) in [
        ("monodromy_x0", q.x0, c),
        ("monodromy_x1", q.x1, c),
        ("monodromy_x2", q.x2, c),
        ("monodromy_origin", Complex64::new(0.0, 0.0), c.powi(-3)),
    ] {
        let ratio = monodromy_ratio(center, q, a)?;
        records.push(CheckRecord::new(
            name,
            (ratio - expected).norm() / expected.norm(),
            tol::MONODROMY_TOL,
        ));
    }

    let mut ellipticity = 0.0f64;
    let step = 0.137 * lat.omega1 + 0.091 * lat.omega2;
    let mut _samples = 0;
    for k in 1..=12 {
        let t = q.basepoint() + (k as f64) * step;
        if min_puncture_distance(t, q) < 0.05 * lat.omega1.norm()
            || min_puncture_distance(t + lat.omega1, q) < 0.05 * lat.omega1.norm()
            || min_puncture_distance(t + lat.omega2, q) < 0.05 * lat.omega1.norm()
        {
            continue;
        }
        let g = g_value(t, q)?;
        for w in [lat.omega1, lat.omega2] {
            ellipticity = ellipticity.max((g_value(t + w, q)? - g).norm() / g.norm());
        }
        _samples += 1;
    }
    debug_assert!(_samples >= 4, "ellipticity sampling starved by punctures");
    records.push(CheckRecord::new(
        "g_ellipticity",
        ellipticity,
        tol::G_ELLIPTIC_REL,
    ));

    let scale = lat.omega1.norm();
    let eps_grid = [0.02 * scale, 0.03 * scale, 0.05 * scale];
    let segments = [CycleIndex::Seg01, CycleIndex::Seg12, CycleIndex::Seg20];
    let mut base_values = Vec::with_capacity(3);
    for &mu in &segments {
        let mut values = Vec::with_capacity(eps_grid.len());
        for &eps in &eps_grid {
            let cycle = build_cycle(mu, q, a, eps)?;
            values.push(integrate(&cycle, a, tol::QUAD_ABS_TOL)?.value);
        }
        let norm_scale = values[0].norm().max(1.0);
        let mut spread = 0.0f64;
        for i in 0..values.len() {
            for j in (i + 1)..values.len() {
                spread = spread.max((values[i] - values[j]).norm() / norm_scale);
            }
        }
        let tag = match mu {
            CycleIndex::Seg01 => "epsilon_independence_01",
            CycleIndex::Seg12 => "epsilon_independence_12",
            _ => "epsilon_independence_20",
        };
        records.push(CheckRecord::new(tag, spread, tol::EPSILON_INDEPENDENCE_REL));
        base_values.push(values[0]);
    }

    let max_f = base_values
        .iter()
        .map(|v| v.norm())
        .fold(f64::NEG_INFINITY, f64::max);
    let relation = (base_values[0] + base_values[1] + base_values[2]).norm() / max_f;
    records.push(CheckRecord::new(
        "relation_residual",
        relation,
        tol::RELATION_RESIDUAL_REL,
    ));

    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::make_lattice;
    use crate::local_system::g_partial_fraction_constants;
    use crate::picard_lefschetz::{special_configuration, PathPair};

    fn square() -> Lattice {
        make_lattice(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)).unwrap()
    }

    fn generic_config() -> Configuration {
        Configuration::new(
            Complex64::new(0.31, 0.04),
            Complex64::new(0.17, -0.10),
            square(),
        )
        .unwrap()
    }

    fn alpha_generic() -> AlphaParam {
        AlphaParam::new(Complex64::new(0.3, 0.0)).unwrap()
    }

    // ───────────────────── quadrature kernel ─────────────────────

    #[test]
    fn kernel_is_exact_on_polynomials() {
        // Degree ≤ 13 is integrated exactly by the embedded Gauss rule, so a
        // single panel must nail t⁶ and report a vanishing error estimate.
        let f = |t: f64| Ok(Complex64::new(t.powi(6), 3.0 * t * t));
        let (v, err, n) = adaptive_complex(f, 0.0, 1.0, 1e-12).unwrap();
        assert!((v - Complex64::new(1.0 / 7.0, 1.0)).norm() < 1e-15);
        assert!(err < 1e-14);
        assert_eq!(n, 15);
    }

    #[test]
    fn kernel_handles_oscillatory_integrands() {
        let f = |t: f64| Ok(Complex64::new(0.0, 10.0 * t).exp());
        let (v, _err, n) = adaptive_complex(f, 0.0, 1.0, 1e-13).unwrap();
        let exact = (Complex64::new(0.0, 10.0).exp() - 1.0) / Complex64::new(0.0, 10.0);
        assert!((v - exact).norm() < 1e-12);
        assert!(n >= 15);
    }

    #[test]
    fn kernel_reports_unresolvable_singularities() {
        // |t − 1/π|^{−0.9} is integrable but its tail keeps the panel error
        // above any tight tolerance at the depth cap.
        let f = |t: f64| {
            Ok(Complex64::new(
                (t - std::f64::consts::FRAC_1_PI).abs().powf(-0.9),
                0.0,
            ))
        };
        assert!(matches!(
            adaptive_complex(f, 0.0, 1.0, 1e-10),
            Err(Error::QuadratureFailure { .. })
        ));
    }

    #[test]
    fn kernel_propagates_integrand_errors() {
        let f = |t: f64| {
            if t > 0.4 {
                Err(Error::Parse("synthetic failure".into()))
            } else {
                Ok(Complex64::new(1.0, 0.0))
            }
        };
        assert!(matches!(
            adaptive_complex(f, 0.0, 1.0, 1e-10),
            Err(Error::Parse(_))
        ));
    }

    // ───────────────────── cut-crossing bookkeeping ─────────────────────

    #[test]
    fn crossing_signs_match_the_monodromy_convention() {
        // Configuration with a cut along [0, x1], x1 ≈ 0.17 − 0.10i. A path
        // crossing its midpoint moving so that cross(x1, velocity) < 0 gains
        // the factor c, counted +1.
        let q = generic_config();
        let mid = 0.5 * q.x1;
        let normal = Complex64::new(0.0, 1.0) * q.x1 / q.x1.norm();
        // cross(x1, +i·x1) > 0, so from −normal to +normal counts −1.
        let upward = CurvePath::from_waypoints(&[mid - 0.02 * normal, mid + 0.02 * normal]);
        assert_eq!(signed_cut_crossings(&upward, &q).unwrap(), -1);
        assert_eq!(
            signed_cut_crossings(&upward.reversed(), &q).unwrap(),
            1
        );
        // Out and back across the same cut nets zero.
        let there_and_back = CurvePath::from_waypoints(&[
            mid - 0.02 * normal,
            mid + 0.02 * normal,
            mid + 0.05 * normal + 0.01 * q.x1,
            mid - 0.02 * normal + 0.01 * q.x1,
        ]);
        assert_eq!(signed_cut_crossings(&there_and_back, &q).unwrap(), 0);
        // A faraway segment sees no cuts.
        let clear = CurvePath::from_waypoints(&[
            Complex64::new(0.62, 0.62),
            Complex64::new(0.70, 0.62),
        ]);
        assert_eq!(signed_cut_crossings(&clear, &q).unwrap(), 0);
    }

    #[test]
    fn crossing_counts_see_lattice_translates() {
        let q = generic_config();
        let mid = 0.5 * q.x1 + Complex64::new(2.0, 1.0);
        let normal = Complex64::new(0.0, 1.0) * q.x1 / q.x1.norm();
        let path = CurvePath::from_waypoints(&[mid - 0.02 * normal, mid + 0.02 * normal]);
        assert_eq!(signed_cut_crossings(&path, &q).unwrap(), -1);
    }

    #[test]
    fn full_loop_around_origin_crosses_all_three_cuts() {
        // A small square loop around 0̄ crosses each cut once with the same
        // sign: total −3, matching the c^{−3} monodromy of the section there.
        let q = generic_config();
        let r = 0.04;
        let loop_path = CurvePath::from_waypoints(&[
            Complex64::new(r, r),
            Complex64::new(-r, r),
            Complex64::new(-r, -r),
            Complex64::new(r, -r),
            Complex64::new(r, r),
        ]);
        assert_eq!(signed_cut_crossings(&loop_path, &q).unwrap(), -3);
    }

    // ───────────────────── cycle construction ─────────────────────

    #[test]
    fn segment_cycle_has_the_documented_shape() {
        let q = generic_config();
        let a = alpha_generic();
        let eps = 0.02;
        let cycle = build_cycle(CycleIndex::Seg01, &q, &a, eps).unwrap();
        assert_eq!(cycle.kind, CycleKind::Segment(0, 1));
        assert_eq!(cycle.pieces.len(), 3);
        let w = (a.c() - Complex64::new(1.0, 0.0)).finv();
        assert!((cycle.pieces[0].1 - w).norm() < 1e-15);
        assert!((cycle.pieces[1].1 - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((cycle.pieces[2].1 + w).norm() < 1e-15);
        let unit = (q.x1 - q.x0) / (q.x1 - q.x0).norm();
        let p_i = q.x0 + eps * unit;
        let p_j = q.x1 - eps * unit;
        assert!(cycle.pieces[0].0.is_closed());
        assert!((cycle.pieces[0].0.start() - p_i).norm() < 1e-12);
        assert!((cycle.pieces[1].0.start() - p_i).norm() < 1e-12);
        assert!((cycle.pieces[1].0.end() - p_j).norm() < 1e-12);
        assert!(cycle.pieces[2].0.is_closed());
        assert!((cycle.pieces[2].0.start() - p_j).norm() < 1e-12);
        // Anchor carries a genuine branch of log g at p_i.
        let g = g_value(p_i, &q).unwrap();
        assert!((cycle.branch.log_g_at_basepoint.exp() - g).norm() / g.norm() < 1e-10);
    }

    #[test]
    fn oversized_epsilon_is_rejected() {
        let q = generic_config();
        let a = alpha_generic();
        assert!(matches!(
            build_cycle(CycleIndex::Seg12, &q, &a, 0.4),
            Err(Error::EpsilonTooLarge { .. })
        ));
        assert!(matches!(
            build_cycle(CycleIndex::Seg01, &q, &a, -0.01),
            Err(Error::EpsilonTooLarge { .. })
        ));
    }

    #[test]
    fn period_cycle_translates_by_one_period() {
        let q = generic_config();
        let a = alpha_generic();
        for (mu, omega) in [
            (CycleIndex::LoopOmega1, q.lattice.omega1),
            (CycleIndex::LoopOmega2, q.lattice.omega2),
        ] {
            let cycle = build_cycle(mu, &q, &a, 0.02).unwrap();
            assert_eq!(cycle.pieces.len(), 1);
            let path = &cycle.pieces[0].0;
            assert!((path.end() - path.start() - omega).norm() < 1e-12);
            assert!((cycle.pieces[0].1 - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    // ───────────────────── branch round trip ─────────────────────

    #[test]
    fn forward_backward_transport_cancels() {
        let q = generic_config();
        let t0 = q.basepoint();
        let t1 = t0 + Complex64::new(0.21, 0.13);
        let piece = Piece::Line { from: t0, to: t1 };
        let log0 = q.canonical_branch().unwrap().log_g_at_basepoint;
        let out = transport_over_piece(piece, &q, log0).unwrap();
        let back = transport_over_piece(piece.reversed(), &q, out.end_log()).unwrap();
        assert!((back.end_log() - log0).norm() <= 1e-12);
    }

    // ───────────────────── oracle integrals at α = 1 ─────────────────────

    #[test]
    fn residues_of_g_sum_to_zero_over_a_cell() {
        // g dt is elliptic with a single order-3 pole of zero residue per
        // cell, so ∮ g dt over a cell boundary vanishes.
        let q = generic_config();
        let t0 = q.basepoint();
        let corners = [
            t0,
            t0 + q.lattice.omega1,
            t0 + q.lattice.omega1 + q.lattice.omega2,
            t0 + q.lattice.omega2,
            t0,
        ];
        let mut total = Complex64::new(0.0, 0.0);
        for w in corners.windows(2) {
            let (from, to) = (w[0], w[1]);
            let f = |t: f64| {
                let z = from + t * (to - from);
                Ok(g_value(z, &q)? * (to - from))
            };
            let (v, _e, _n) = adaptive_complex(f, 0.0, 1.0, 1e-11).unwrap();
            total += v;
        }
        assert!(total.norm() < 1e-8, "cell integral {total}");
    }

    #[test]
    fn period_integrals_match_the_closed_form_at_alpha_one() {
        // g = ℘′/2 + b·℘ + d gives ∫_{t}^{t+ω_i} g = −b·η_i + d·ω_i.
        let q = generic_config();
        let one = AlphaParam::new_unchecked(Complex64::new(1.0, 0.0));
        let (b, d) = g_partial_fraction_constants(&q).unwrap();
        let lat = &q.lattice;
        for (mu, eta, omega) in [
            (CycleIndex::LoopOmega1, lat.eta1, lat.omega1),
            (CycleIndex::LoopOmega2, lat.eta2, lat.omega2),
        ] {
            let cycle = build_cycle(mu, &q, &one, 0.02).unwrap();
            let result = integrate(&cycle, &one, 1e-11).unwrap();
            let expected = -b * eta + d * omega;
            assert!(
                (result.value - expected).norm() < 1e-8 * (1.0 + expected.norm()),
                "{mu}: {} vs {expected}",
                result.value
            );
            assert!(result.error_estimate < 1e-8);
            assert!(result.evaluations > 0);
        }
    }

    // ───────────────────── ε-independence and the relation ─────────────────────

    #[test]
    fn segment_integral_is_epsilon_independent() {
        let q = generic_config();
        let a = alpha_generic();
        let scale = q.lattice.omega1.norm();
        let f1 = integrate(
            &build_cycle(CycleIndex::Seg01, &q, &a, 0.02 * scale).unwrap(),
            &a,
            tol::QUAD_ABS_TOL,
        )
        .unwrap()
        .value;
        let f2 = integrate(
            &build_cycle(CycleIndex::Seg01, &q, &a, 0.04 * scale).unwrap(),
            &a,
            tol::QUAD_ABS_TOL,
        )
        .unwrap()
        .value;
        assert!(
            (f1 - f2).norm() < tol::EPSILON_INDEPENDENCE_REL * f1.norm().max(1.0),
            "{f1} vs {f2}"
        );
    }

    #[test]
    fn homology_relation_holds_at_the_half_period_configuration() {
        let q = special_configuration("012", square()).unwrap();
        let a = AlphaParam::new(Complex64::new(0.3, 0.1)).unwrap();
        let eps = 0.02;
        let mut values = Vec::new();
        for mu in [CycleIndex::Seg01, CycleIndex::Seg12, CycleIndex::Seg20] {
            let cycle = build_cycle(mu, &q, &a, eps).unwrap();
            values.push(integrate(&cycle, &a, tol::QUAD_ABS_TOL).unwrap().value);
        }
        let max_f = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let residual = (values[0] + values[1] + values[2]).norm();
        assert!(max_f > 1e-6, "degenerate integrals: {values:?}");
        assert!(
            residual < tol::RELATION_RESIDUAL_REL * max_f,
            "relation residual {residual:.3e} vs scale {max_f:.3e}"
        );
    }

    // ───────────────────── vanishing limit ─────────────────────

    #[test]
    fn vanishing_cycle_magnitude_is_finite_away_from_the_wall() {
        let label = PathLabel::new(PathPair::P01, 0, 1).unwrap();
        let a = alpha_generic();
        let mags = vanishing_limit(&label, &a, &[0.0], square()).unwrap();
        assert_eq!(mags.len(), 1);
        assert!(mags[0].is_finite());
        assert!(mags[0] > 1e-8, "unexpectedly small: {}", mags[0]);
    }

    // ───────────────────── the report bundle ─────────────────────

    #[test]
    fn numeric_report_passes_at_the_half_period_configuration() {
        let q = special_configuration("012", square()).unwrap();
        let a = alpha_generic();
        let records = numeric_report(&q, &a).unwrap();
        assert_eq!(records.len(), 12);
        for r in &records {
            assert!(
                r.pass,
                "check {} failed: {:.3e} > {:.3e}",
                r.check, r.value, r.threshold
            );
        }
        let names: Vec<&str> = records.iter().map(|r| r.check.as_str()).collect();
        assert!(names.contains(&"legendre"));
        assert!(names.contains(&"monodromy_origin"));
        assert!(names.contains(&"relation_residual"));
    }
}
