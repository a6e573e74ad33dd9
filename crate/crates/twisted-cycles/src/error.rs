//! Error type shared by all modules.

use thiserror::Error;

/// Errors reported by lattice construction, branch tracking, exact algebra and
/// contour quadrature.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// The two supplied periods do not span ℂ over ℝ (ω₂/ω₁ real, or a zero
    /// period): there is no lattice, and τ cannot be normalized.
    #[error("degenerate lattice: {0}")]
    DegenerateLattice(String),

    /// A quasi-elliptic function was evaluated within the pole guard radius of
    /// a lattice point. Returning an error beats returning overflow.
    #[error("argument within {guard:.3e} of a lattice point (distance {dist:.3e})")]
    PoleAtLatticePoint { dist: f64, guard: f64 },

    /// The integrand g (or log g) was evaluated within the pole guard radius
    /// of a puncture of the curve, where it has a zero or a pole.
    #[error("point within {guard:.3e} of the puncture {which} (distance {dist:.3e})")]
    PoleOrZero {
        which: &'static str,
        dist: f64,
        guard: f64,
    },

    /// The exponent α lies (numerically) in ½ℤ ∪ ⅓ℤ, where c = e^{2πiα}
    /// degenerates: 1/(c−1) and the intersection form blow up or lose rank.
    #[error("alpha = {alpha} is within {tol:.1e} of the excluded set (1/2)Z ∪ (1/3)Z")]
    ResonantAlpha { alpha: String, tol: f64 },

    /// Two of the four punctures x̄₀, x̄₁, x̄₂, 0̄ coincide mod Γ: the
    /// configuration sits on a singular locus and the punctured curve
    /// degenerates.
    #[error("configuration lies on singular loci: {loci:?}")]
    DegenerateConfiguration { loci: Vec<String> },

    /// A path piece passes closer than the clearance radius to a puncture (or,
    /// where required, to a branch cut). Failing loudly beats silently
    /// continuing across a cut.
    #[error("path clearance violated: {context} (distance {dist:.3e} < clearance {clearance:.3e})")]
    ClearanceViolation {
        context: String,
        dist: f64,
        clearance: f64,
    },

    /// Adaptive quadrature exceeded its refinement depth limit without
    /// reaching the requested tolerance.
    #[error("quadrature failed to converge: requested {requested:.3e}, achieved {achieved:.3e}")]
    QuadratureFailure { requested: f64, achieved: f64 },

    /// A cycle index outside J = {(01), (12), (20), ω₁, ω₂} was requested.
    #[error("unknown cycle index `{0}`")]
    UnknownIndex(String),

    /// A configuration-space path label outside the eight supported ones (or
    /// outside the four elementary ones, where an elementary label was
    /// required) was requested.
    #[error("unknown or non-elementary path label `{0}`")]
    UnknownLabel(String),

    /// The path parameter falls in the deformation window around s = 1/2 where
    /// the straight parametrization passes through the singular locus.
    #[error("s = {s} lies in the deformation window [{lo}, {hi}] around the singular point")]
    InDeformationWindow { s: f64, lo: f64, hi: f64 },

    /// The self-intersection number ⟨Δ, Δ^∨⟩ vanishes identically, so the
    /// Picard–Lefschetz transform is undefined.
    #[error("self-intersection number of the vanishing cycle is identically zero")]
    SelfIntersectionZero,

    /// Two connection matrices were composed whose endpoint configuration tags
    /// do not chain.
    #[error("composition mismatch: first factor ends at {end} but next starts at {start}")]
    CompositionMismatch { end: String, start: String },

    /// The ε-circles of a regularized segment cycle are not disjoint, or they
    /// swallow another puncture.
    #[error("epsilon {epsilon:.3e} too large: {context}")]
    EpsilonTooLarge { epsilon: f64, context: String },

    /// No clearance-respecting realization of a period loop was found by the
    /// straight-translate and dog-leg searches.
    #[error("no clearance-respecting period loop found for direction ω{0}")]
    NoClearLoopFound(u8),

    /// Malformed textual input (complex literal, rational-function string,
    /// label syntax, config file line).
    #[error("parse error: {0}")]
    Parse(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
