//! Vanishing cycles, the twisted Picard–Lefschetz transform, and connection
//! matrices for transport along the named configuration-space paths.
//!
//! The configuration space of (x̄₀, x̄₁, x̄₂) with x₀+x₁+x₂ = 0 has singular
//! loci D^{ij} (collision x̄_i = x̄_j) and D^i_∞ (x̄_i = 0̄). Eight named
//! paths connect the half-period configurations q_{(ijk)} = (ω_i/2, ω_j/2,
//! ω_k/2); each crosses one singular point at parameter s = 1/2 and is
//! deformed around it. Four are *elementary* — their vanishing cycles are
//! known integer vectors in the J′ basis — and the remaining four arise as
//! composition words in the elementary ones.
//!
//! Transport around a singular locus acts on twisted homology by the rank-1
//! modification
//!
//! ```text
//!     Ξ ↦ Ξ + ((−c−1)/⟨Δ, Δ^∨⟩) · ⟨Ξ, Δ^∨⟩ · Δ ,
//! ```
//!
//! where Δ is the vanishing cycle and ⟨·,·⟩ the intersection pairing (dual
//! substitution c ↦ 1/c in the second slot). Connection matrices collect
//! the images of the J′ basis vectors.
//!
//! Matrix convention: **columns as images** — column ν of a connection
//! matrix holds the J′ coordinates of the image of the ν-th basis vector.
//! Under this reading the Picard–Lefschetz pipeline reproduces the four
//! reference matrices entry-for-entry; under the row reading it does not.

use crate::chains::{intersect, TwistedCycleSym, BASIS_J_PRIME};
use crate::elliptic::Lattice;
use crate::error::{Error, Result};
use crate::local_system::Configuration;
use crate::matrix::MatQc;
use crate::ratfunc::RationalFunctionC as R;
use crate::tolerances as tol;
use num_complex::Complex64;
use std::collections::BTreeSet;
use std::fmt;

/// Which pair of punctures a path family moves (the third stays fixed).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathPair {
    /// Moves x₀ and x₂, fixes x̄₁.
    P02,
    /// Moves x₀ and x₁, fixes x̄₂.
    P01,
}

/// A named configuration-space path γ_{(ij)}^{m₁,m₂}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathLabel {
    pub pair: PathPair,
    pub m1: i32,
    pub m2: i32,
}

/// The eight named labels: (02)-family (±1,0), (±1,2); (01)-family (0,±1),
/// (2,±1).
const NAMED_LABELS: [PathLabel; 8] = [
    PathLabel { pair: PathPair::P02, m1: 1, m2: 0 },
    PathLabel { pair: PathPair::P02, m1: -1, m2: 0 },
    PathLabel { pair: PathPair::P02, m1: 1, m2: 2 },
    PathLabel { pair: PathPair::P02, m1: -1, m2: 2 },
    PathLabel { pair: PathPair::P01, m1: 0, m2: 1 },
    PathLabel { pair: PathPair::P01, m1: 0, m2: -1 },
    PathLabel { pair: PathPair::P01, m1: 2, m2: 1 },
    PathLabel { pair: PathPair::P01, m1: 2, m2: -1 },
];

impl PathLabel {
    pub fn new(pair: PathPair, m1: i32, m2: i32) -> Result<PathLabel> {
        let label = PathLabel { pair, m1, m2 };
        if NAMED_LABELS.contains(&label) {
            Ok(label)
        } else {
            Err(Error::UnknownLabel(label.to_string()))
        }
    }

    /// Parses `"02:1,0"` or `"01:0,-1"`.
    pub fn parse(s: &str) -> Result<PathLabel> {
        let bad = || Error::UnknownLabel(s.to_string());
        let (pair_str, ms) = s.split_once(':').ok_or_else(bad)?;
        let pair = match pair_str.trim() {
            "02" => PathPair::P02,
            "01" => PathPair::P01,
            _ => return Err(bad()),
        };
        let (m1s, m2s) = ms.split_once(',').ok_or_else(bad)?;
        let m1 = m1s.trim().parse::<i32>().map_err(|_| bad())?;
        let m2 = m2s.trim().parse::<i32>().map_err(|_| bad())?;
        PathLabel::new(pair, m1, m2)
    }

    /// The four labels with a known vanishing-cycle vector.
    pub fn is_elementary(&self) -> bool {
        match self.pair {
            PathPair::P02 => (self.m1 == 1 || self.m1 == -1) && self.m2 == 0,
            PathPair::P01 => self.m1 == 0 && (self.m2 == 1 || self.m2 == -1),
        }
    }

    /// The lattice vector m₁ω₁ + m₂ω₂ the moving punctures split along.
    fn displacement(&self, lat: &Lattice) -> Complex64 {
        (self.m1 as f64) * lat.omega1 + (self.m2 as f64) * lat.omega2
    }

    /// The transposition the path applies to half-period tags: (02) swaps
    /// tag positions 0 and 2, (01) swaps positions 0 and 1.
    fn swap_positions(&self) -> (usize, usize) {
        match self.pair {
            PathPair::P02 => (0, 2),
            PathPair::P01 => (0, 1),
        }
    }
}

impl fmt::Display for PathLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pair = match self.pair {
            PathPair::P02 => "02",
            PathPair::P01 => "01",
        };
        write!(f, "{pair}:{},{}", self.m1, self.m2)
    }
}

fn apply_transposition(tag: &str, (i, j): (usize, usize)) -> String {
    let mut chars: Vec<char> = tag.chars().collect();
    chars.swap(i, j);
    chars.into_iter().collect()
}

// ───────────────────── configurations on the path ─────────────────────

/// The half-period configuration q_{(ijk)} = (ω_i/2, ω_j/2, ω_k/2), with
/// ω₀ := −(ω₁+ω₂). The tag must be a permutation of "012".
pub fn special_configuration(tag: &str, lattice: Lattice) -> Result<Configuration> {
    let perm = parse_permutation(tag)?;
    let omega = |i: u8| -> Complex64 {
        match i {
            0 => lattice.omega0(),
            1 => lattice.omega1,
            _ => lattice.omega2,
        }
    };
    Configuration::from_representatives(
        0.5 * omega(perm[0]),
        0.5 * omega(perm[1]),
        0.5 * omega(perm[2]),
        lattice,
    )
}

fn parse_permutation(tag: &str) -> Result<[u8; 3]> {
    let digits: Vec<u8> = tag
        .chars()
        .filter_map(|ch| ch.to_digit(10).map(|d| d as u8))
        .collect();
    let mut sorted = digits.clone();
    sorted.sort_unstable();
    if digits.len() != 3 || sorted != vec![0, 1, 2] {
        return Err(Error::UnknownLabel(format!(
            "configuration tag must be a permutation of 012, got {tag}"
        )));
    }
    Ok([digits[0], digits[1], digits[2]])
}

/// The degeneracy loci the configuration lies on (empty for valid points).
pub fn singular_membership(q: &Configuration) -> BTreeSet<String> {
    q.degeneracy_loci().into_iter().collect()
}

/// The configuration γ(s) along the named path:
///
/// ```text
///   (02): ( ω₀/2 + (m₁ω₁+m₂ω₂)s/2,  ω₁/2,                 ω₂/2 − (m₁ω₁+m₂ω₂)s/2 )
///   (01): ( ω₀/2 + (m₁ω₁+m₂ω₂)s/2,  ω₁/2 − (m₁ω₁+m₂ω₂)s/2, ω₂/2 )
/// ```
///
/// The path crosses a singular point at s = 1/2; parameters inside the
/// deformation window around it are rejected (the actual path detours around
/// the singular point, and values there depend on the unspecified detour).
pub fn path_point(label: &PathLabel, s: f64, lattice: Lattice) -> Result<Configuration> {
    path_point_with_window(label, s, tol::DEFORMATION_WINDOW_DEFAULT, lattice)
}

/// [`path_point`] with an explicit half-width for the rejection window
/// around s = 1/2.
pub fn path_point_with_window(
    label: &PathLabel,
    s: f64,
    window: f64,
    lattice: Lattice,
) -> Result<Configuration> {
    if (s - 0.5).abs() <= window {
        return Err(Error::InDeformationWindow {
            s,
            lo: 0.5 - window,
            hi: 0.5 + window,
        });
    }
    let (x0, x1, x2) = path_representatives(label, s, &lattice);
    Configuration::from_representatives(x0, x1, x2, lattice)
}

fn path_representatives(
    label: &PathLabel,
    s: f64,
    lattice: &Lattice,
) -> (Complex64, Complex64, Complex64) {
    let shift = 0.5 * s * label.displacement(lattice);
    let x0 = 0.5 * lattice.omega0() + shift;
    match label.pair {
        PathPair::P02 => (x0, 0.5 * lattice.omega1, 0.5 * lattice.omega2 - shift),
        PathPair::P01 => (x0, 0.5 * lattice.omega1 - shift, 0.5 * lattice.omega2),
    }
}

/// The singular configuration the path meets at s = 1/2 (punctures collide
/// there, so the collision check is skipped).
pub fn singular_configuration(label: &PathLabel, lattice: Lattice) -> Configuration {
    let (x0, x1, _) = path_representatives(label, 0.5, &lattice);
    Configuration::new_unchecked(x0, x1, lattice)
}

// ───────────────────── vanishing cycles and transforms ─────────────────────

fn j_prime_int(coords: [i64; 4]) -> TwistedCycleSym {
    TwistedCycleSym::from_j_prime([
        R::integer(coords[0]),
        R::integer(coords[1]),
        R::integer(coords[2]),
        R::integer(coords[3]),
    ])
}

/// The vanishing cycle of an elementary path, as a J′-coordinate vector
/// (basis order (01), (20), ω₁, ω₂):
///
/// ```text
///     Δ_(02)^{−1,0} = −Ξ_(20) − Ξ_{ω₁} − Ξ_{ω₂}
///     Δ_(02)^{ 1,0} = −Ξ_(20) − Ξ_{ω₂}
///     Δ_(01)^{0,−1} =  Ξ_(01) − Ξ_{ω₁} − Ξ_{ω₂}
///     Δ_(01)^{0, 1} =  Ξ_(01) − Ξ_{ω₁}
/// ```
pub fn vanishing_cycle(label: &PathLabel) -> Result<TwistedCycleSym> {
    if !label.is_elementary() {
        return Err(Error::UnknownLabel(format!(
            "no direct vanishing cycle for composite label {label}"
        )));
    }
    Ok(match (label.pair, label.m1, label.m2) {
        (PathPair::P02, -1, 0) => j_prime_int([0, -1, -1, -1]),
        (PathPair::P02, 1, 0) => j_prime_int([0, -1, 0, -1]),
        (PathPair::P01, 0, -1) => j_prime_int([1, 0, -1, -1]),
        (PathPair::P01, 0, 1) => j_prime_int([1, 0, -1, 0]),
        _ => unreachable!("elementary labels are exactly the four above"),
    })
}

/// The twisted Picard–Lefschetz transform
/// Ξ ↦ Ξ + ((−c−1)/⟨Δ,Δ^∨⟩)·⟨Ξ,Δ^∨⟩·Δ, exact over ℚ(c).
pub fn pl_transform(xi: &TwistedCycleSym, delta: &TwistedCycleSym) -> Result<TwistedCycleSym> {
    let self_pairing = intersect(delta, delta);
    if self_pairing.is_zero() {
        return Err(Error::SelfIntersectionZero);
    }
    let minus_c_minus_1 = &R::integer(-1) - &R::c();
    let factor = &(&minus_c_minus_1 / &self_pairing) * &intersect(xi, delta);
    Ok(xi.add(&delta.scale(&factor)))
}

/// A connection matrix: the transport isomorphism on twisted homology in the
/// J′ basis, with its endpoint configuration tags.
#[derive(Debug, Clone)]
pub struct ConnectionMatrix {
    /// 4×4 over ℚ(c), columns-as-images.
    pub mat: MatQc,
    /// Half-period tag of the starting configuration.
    pub source: String,
    /// Half-period tag of the ending configuration.
    pub target: String,
}

impl ConnectionMatrix {
    /// Strict composition: `next` after `self`. The endpoint tags must
    /// chain exactly; [`compose`] rebases automatically instead.
    pub fn then(&self, next: &ConnectionMatrix) -> Result<ConnectionMatrix> {
        if self.target != next.source {
            return Err(Error::CompositionMismatch {
                end: self.target.clone(),
                start: next.source.clone(),
            });
        }
        Ok(ConnectionMatrix {
            mat: next.mat.mul(&self.mat),
            source: self.source.clone(),
            target: next.target.clone(),
        })
    }

    /// Inverse transport (tags swap).
    pub fn inverted(&self) -> ConnectionMatrix {
        ConnectionMatrix {
            mat: self
                .mat
                .inverse()
                .expect("connection matrices are invertible over Q(c)"),
            source: self.target.clone(),
            target: self.source.clone(),
        }
    }
}

impl fmt::Display for ConnectionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "q_({}) -> q_({})", self.source, self.target)?;
        write!(f, "{}", self.mat)
    }
}

/// The connection matrix of an elementary path, built from the
/// Picard–Lefschetz transform: column ν is the image of the ν-th J′ basis
/// vector.
pub fn connection_matrix(label: &PathLabel) -> Result<ConnectionMatrix> {
    let delta = vanishing_cycle(label)?;
    let mut entries = vec![R::zero(); 16];
    for (nu, &basis_index) in BASIS_J_PRIME.iter().enumerate() {
        let image = pl_transform(&TwistedCycleSym::generator(basis_index), &delta)?;
        let coords = image.j_prime_coords();
        for (mu, coord) in coords.into_iter().enumerate() {
            entries[mu * 4 + nu] = coord;
        }
    }
    let source = "012".to_string();
    let target = apply_transposition(&source, label.swap_positions());
    Ok(ConnectionMatrix {
        mat: MatQc::from_rows(4, entries),
        source,
        target,
    })
}

/// Composes a word of elementary labels with integer exponents. The word is
/// written in composition order: the **rightmost factor acts first**, and the
/// resulting matrix is the product of the factors' matrices in the order
/// listed. Endpoint tags are tracked by applying each factor's transposition
/// once per odd exponent (matrices are written in the J′ bases attached to
/// the endpoints, which transport canonically along the word, so no explicit
/// rebasing enters the product); [`ConnectionMatrix::then`] offers the strict
/// tag-checked alternative.
pub fn compose(word: &[(PathLabel, i32)]) -> Result<ConnectionMatrix> {
    let mut mat = MatQc::identity(4);
    let mut tag = "012".to_string();
    for (label, power) in word.iter().rev() {
        if *power == 0 {
            return Err(Error::UnknownLabel(format!(
                "exponent 0 for {label} is not a path"
            )));
        }
        let base = connection_matrix(label)?;
        let factor = if *power > 0 {
            base.mat.clone()
        } else {
            base.mat
                .inverse()
                .expect("connection matrices are invertible over Q(c)")
        };
        for _ in 0..power.unsigned_abs() {
            mat = factor.mul(&mat);
        }
        if power.rem_euclid(2) == 1 {
            tag = apply_transposition(&tag, label.swap_positions());
        }
    }
    Ok(ConnectionMatrix {
        mat,
        source: "012".to_string(),
        target: tag,
    })
}
