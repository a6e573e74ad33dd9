//! Centralized numeric tolerances and geometric guard radii.
//!
//! Every floating-point threshold used by the library (and pinned by the
//! acceptance suite) lives here as a documented constant, so a tolerance is
//! never an unexplained magic number at its point of use.
//!
//! Scale-dependent radii are expressed as dimensionless factors multiplied by
//! |ω₁| at the point of use, so lattices of any size behave identically.

// ─────────────────────────────────────────────────────────────────────────────
// Special-function evaluation
// ─────────────────────────────────────────────────────────────────────────────

/// Theta series truncation: stop once a term's magnitude drops below this.
/// The series converges geometrically in the nome, so two extra terms past
/// f64 machine epsilon cost nothing and guarantee the tail is negligible.
pub const THETA_TERM_CUTOFF: f64 = 1e-18;

/// Pole guard radius for ζ, ℘, ℘′ as a factor of |ω₁|: arguments closer than
/// this to a lattice point are rejected rather than evaluated into overflow.
pub const POLE_GUARD_FACTOR: f64 = 1e-10;

/// Legendre relation η₁ω₂ − η₂ω₁ = 2πi must hold to this relative error.
/// Both η's come from exact theta identities, so near machine precision is
/// available; 1e−12 leaves two digits of slack.
pub const LEGENDRE_REL: f64 = 1e-12;

/// Relative accuracy of σ/ζ/℘ parity and quasi-periodicity identities that
/// follow algebraically from the evaluation scheme (no quadrature involved).
pub const KERNEL_IDENTITY_REL: f64 = 1e-12;

/// Quasi-periodicity of σ checked against the explicit exponential factor.
/// Slightly looser than [`KERNEL_IDENTITY_REL`]: the reference side multiplies
/// exp(η(z+ω/2)), whose argument is O(10), costing ~2 digits of cancellation.
pub const SIGMA_QUASI_REL: f64 = 1e-10;

/// ζ′ = −℘ via central finite differences: with step h ≈ 1e−5·|ω₁| the
/// truncation error is O(h²) ≈ 1e−10 but the rounding error is O(ε/h) ≈ 1e−11,
/// so 1e−6 is a comfortable detection threshold for a wrong formula.
pub const FD_MATCH_TOL: f64 = 1e-6;

/// Finite-difference step as a factor of |ω₁|.
pub const FD_STEP_FACTOR: f64 = 1e-5;

/// Differential equation ℘′² = 4℘³ − g₂℘ − g₃, relative residual.
pub const WP_ODE_REL: f64 = 1e-10;

// ─────────────────────────────────────────────────────────────────────────────
// Configuration and exponent parameter domains
// ─────────────────────────────────────────────────────────────────────────────

/// Distance (as a factor of |ω₁|) under which two punctures are considered to
/// coincide mod Γ, i.e. the configuration sits on a singular locus.
pub const CONFIG_COLLISION_FACTOR: f64 = 1e-9;

/// α must avoid (1/2)ℤ ∪ (1/3)ℤ by at least this distance in ℂ; closer values
/// make 1/(c−1) (and the intersection form) ill-conditioned.
pub const ALPHA_EXCLUSION_TOL: f64 = 1e-9;

// ─────────────────────────────────────────────────────────────────────────────
// Path geometry
// ─────────────────────────────────────────────────────────────────────────────

/// Minimum distance (factor of |ω₁|) every path piece must keep from lattice
/// translates of the punctures (and, where the global section is carried, from
/// the branch cuts). Violations are hard errors, never warnings.
pub const CLEARANCE_FACTOR: f64 = 1e-6;

/// Default ε-circle radius of regularized cycles as a factor of |ω₁|.
pub const EPSILON_DEFAULT_FACTOR: f64 = 0.02;

/// Default half-width of the deformation window around s = 1/2 in which the
/// straight configuration-space parametrization is rejected.
pub const DEFORMATION_WINDOW_DEFAULT: f64 = 0.05;

/// Narrower window used by the vanishing-limit scan, whose whole point is to
/// evaluate close to (but never at) s = 1/2.
pub const VANISHING_WINDOW: f64 = 0.015;

/// When punctures approach each other, the ε-circle radius shrinks to this
/// fraction of the smallest pairwise torus distance between punctures.
pub const EPSILON_GAP_FACTOR: f64 = 0.3;

/// Radius of the monodromy test loops as a factor of |ω₁| (also capped by
/// [`EPSILON_GAP_FACTOR`] times the local puncture gap).
pub const MONODROMY_RADIUS_FACTOR: f64 = 0.05;

/// Grid resolution (per side) for the canonical-basepoint search and the
/// loop/connector waypoint searches. 64 balances determinism, cost and the
/// granularity needed to find clearance pockets.
pub const SEARCH_GRID: usize = 64;

// ─────────────────────────────────────────────────────────────────────────────
// Quadrature and branch continuation
// ─────────────────────────────────────────────────────────────────────────────

/// Default absolute tolerance for cycle integrals ∫ g^α dt.
pub const QUAD_ABS_TOL: f64 = 1e-10;

/// Absolute tolerance used when continuing log g along a path.
pub const CONTINUATION_ABS_TOL: f64 = 1e-12;

/// Maximum bisection depth of the adaptive integrator before reporting
/// failure; 2⁻⁵⁰ of a piece is far below every geometric feature size.
pub const QUAD_MAX_DEPTH: u32 = 50;

/// exp(continued log g) must match a direct evaluation of g to this relative
/// error (up to an exact multiple of 2πi) at the end of every continuation.
pub const BRANCH_CONSISTENCY_REL: f64 = 1e-8;

// ─────────────────────────────────────────────────────────────────────────────
// Cross-validation residuals (the numeric-report thresholds)
// ─────────────────────────────────────────────────────────────────────────────

/// |∮ dlog g| over a period loop (must vanish when x₀+x₁+x₂ = 0).
pub const ABELIAN_RESIDUAL_TOL: f64 = 1e-10;

/// Acceptance radius when selecting a period loop by its log g increment.
/// Different placements of the same torus loop give increments differing by
/// multiples of 2πi (each puncture the loop slides across contributes one
/// residue of dlog g), so any radius below π separates the normalized
/// representative from all others; 1 leaves room for quadrature slack.
pub const LOOP_WINDING_SEPARATION: f64 = 1.0;

/// Absolute quadrature tolerance for the probe integrals used during loop
/// selection. Distinguishing increments 2πi apart needs nothing near full
/// precision, and candidates may be probed in numbers, so the probe runs
/// much coarser than the final integral over the accepted loop.
pub const LOOP_WINDING_PROBE_TOL: f64 = 1e-6;

/// Monodromy ratios: |ratio − c| around each x̄ᵢ and |ratio − c⁻³| around 0̄.
pub const MONODROMY_TOL: f64 = 1e-8;

/// Ellipticity of g: |g(t+ω) − g(t)| relative to |g(t)|.
pub const G_ELLIPTIC_REL: f64 = 1e-10;

/// |g − ℘′/2| at the all-half-periods configuration, relative.
pub const G_HALFPERIOD_REL: f64 = 1e-9;

/// ε-independence of regularized integrals, relative to max(1, |F|).
pub const EPSILON_INDEPENDENCE_REL: f64 = 1e-8;

/// Homology-relation residual |F₍₀₁₎+F₍₁₂₎+F₍₂₀₎| relative to max_μ |F_μ|.
pub const RELATION_RESIDUAL_REL: f64 = 1e-6;

/// Final/initial magnitude ratio certifying the vanishing-cycle limit.
pub const VANISHING_RATIO_MAX: f64 = 0.2;

/// Exact-vs-complex specialization agreement for ℚ(c) matrices evaluated at a
/// concrete c₀ (pure arithmetic, no quadrature).
pub const SPECIALIZATION_REL: f64 = 1e-12;
