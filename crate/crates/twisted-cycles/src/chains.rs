//! Exact symbolic algebra of twisted cycles over ℚ(c).
//!
//! The twisted homology of the four-punctured curve is generated by five
//! cycles: the regularized segments Ξ₍₀₁₎, Ξ₍₁₂₎, Ξ₍₂₀₎ between pairs of the
//! punctures x̄ᵢ, and the two period loops Ξ_{ω₁}, Ξ_{ω₂}. They satisfy one
//! relation,
//!
//! ```text
//!     Ξ₍₀₁₎ + Ξ₍₁₂₎ + Ξ₍₂₀₎ = 0 ,
//! ```
//!
//! so any four of them form a basis; the reduced basis J′ drops Ξ₍₁₂₎. The
//! pairing with the dual space (coefficients composed with c ↦ 1/c) is the
//! 5×5 intersection matrix stored here as an exact golden constant, valid for
//! configurations in the standard chamber arg x₀ < arg x₁ < arg x₂. Everything
//! downstream (Picard–Lefschetz transforms, connection matrices) is derived
//! from this matrix by exact arithmetic; the geometric local-intersection
//! computation behind it is not re-derived.

use crate::error::{Error, Result};
use crate::matrix::MatQc;
use crate::ratfunc::RationalFunctionC;
use std::fmt;

type R = RationalFunctionC;

/// Index set J of the five generator cycles, in the fixed display order
/// (01) ≺ (12) ≺ (20) ≺ ω₁ ≺ ω₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CycleIndex {
    /// Regularized segment between x̄₀ and x̄₁.
    Seg01,
    /// Regularized segment between x̄₁ and x̄₂.
    Seg12,
    /// Regularized segment between x̄₂ and x̄₀.
    Seg20,
    /// Period loop in the +ω₁ direction.
    LoopOmega1,
    /// Period loop in the +ω₂ direction.
    LoopOmega2,
}

/// All five generator indices in display order.
pub const ALL_INDICES: [CycleIndex; 5] = [
    CycleIndex::Seg01,
    CycleIndex::Seg12,
    CycleIndex::Seg20,
    CycleIndex::LoopOmega1,
    CycleIndex::LoopOmega2,
];

/// The reduced basis J′ = {(01), (20), ω₁, ω₂} in display order.
pub const BASIS_J_PRIME: [CycleIndex; 4] = [
    CycleIndex::Seg01,
    CycleIndex::Seg20,
    CycleIndex::LoopOmega1,
    CycleIndex::LoopOmega2,
];

impl CycleIndex {
    /// Position in the J ordering.
    pub fn position(self) -> usize {
        match self {
            CycleIndex::Seg01 => 0,
            CycleIndex::Seg12 => 1,
            CycleIndex::Seg20 => 2,
            CycleIndex::LoopOmega1 => 3,
            CycleIndex::LoopOmega2 => 4,
        }
    }

    /// Parses the textual forms used by the CLI: `01`, `12`, `20`, `w1`, `w2`
    /// (also `omega1`/`omega2`).
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "01" => Ok(CycleIndex::Seg01),
            "12" => Ok(CycleIndex::Seg12),
            "20" => Ok(CycleIndex::Seg20),
            "w1" | "omega1" => Ok(CycleIndex::LoopOmega1),
            "w2" | "omega2" => Ok(CycleIndex::LoopOmega2),
            other => Err(Error::UnknownIndex(other.to_string())),
        }
    }
}

impl fmt::Display for CycleIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleIndex::Seg01 => write!(f, "(01)"),
            CycleIndex::Seg12 => write!(f, "(12)"),
            CycleIndex::Seg20 => write!(f, "(20)"),
            CycleIndex::LoopOmega1 => write!(f, "w1"),
            CycleIndex::LoopOmega2 => write!(f, "w2"),
        }
    }
}

/// A formal ℚ(c)-linear combination of the five generator cycles.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedCycleSym {
    coeffs: [R; 5],
}

impl TwistedCycleSym {
    /// The zero chain.
    pub fn zero() -> Self {
        TwistedCycleSym {
            coeffs: std::array::from_fn(|_| R::zero()),
        }
    }

    /// The unit generator e_μ.
    pub fn generator(index: CycleIndex) -> Self {
        let mut v = Self::zero();
        v.coeffs[index.position()] = R::one();
        v
    }

    /// Builds from explicit J-ordered coefficients.
    pub fn from_coeffs(coeffs: [R; 5]) -> Self {
        TwistedCycleSym { coeffs }
    }

    /// Builds a J′-supported chain from its four coordinates
    /// ((01), (20), ω₁, ω₂); the (12) coefficient is zero.
    pub fn from_j_prime(coords: [R; 4]) -> Self {
        let [a01, a20, aw1, aw2] = coords;
        TwistedCycleSym {
            coeffs: [a01, R::zero(), a20, aw1, aw2],
        }
    }

    /// Coefficient of a generator.
    pub fn coeff(&self, index: CycleIndex) -> &R {
        &self.coeffs[index.position()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(R::is_zero)
    }

    /// Eliminates the (12) generator through the relation
    /// Ξ₍₁₂₎ = −Ξ₍₀₁₎ − Ξ₍₂₀₎. Idempotent.
    pub fn reduce_to_basis(&self) -> Self {
        let a12 = &self.coeffs[1];
        if a12.is_zero() {
            return self.clone();
        }
        let mut out = self.clone();
        out.coeffs[0] = &out.coeffs[0] - a12;
        out.coeffs[2] = &out.coeffs[2] - a12;
        out.coeffs[1] = R::zero();
        out
    }

    /// The J′ coordinates ((01), (20), ω₁, ω₂) after reduction.
    pub fn j_prime_coords(&self) -> [R; 4] {
        let r = self.reduce_to_basis();
        [
            r.coeffs[0].clone(),
            r.coeffs[2].clone(),
            r.coeffs[3].clone(),
            r.coeffs[4].clone(),
        ]
    }

    /// The dual chain: every coefficient a(c) becomes a(1/c). Cycles of the
    /// dual local system pair against g^{−α} instead of g^α; on coefficients
    /// that is exactly the substitution c ↦ 1/c.
    pub fn dualize(&self) -> Self {
        TwistedCycleSym {
            coeffs: std::array::from_fn(|i| self.coeffs[i].invert_c()),
        }
    }

    pub fn scale(&self, s: &R) -> Self {
        TwistedCycleSym {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] * s),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        TwistedCycleSym {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] + &other.coeffs[i]),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        TwistedCycleSym {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] - &other.coeffs[i]),
        }
    }
}

impl fmt::Display for TwistedCycleSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for idx in ALL_INDICES {
            let a = self.coeff(idx);
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "[{a}]·{idx}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The 5×5 intersection form [⟨Ξ_μ, Ξ_ν^∨⟩] on the generators, as an exact
/// golden constant.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionMatrix {
    mat: MatQc,
}

impl IntersectionMatrix {
    /// Entry ⟨Ξ_μ, Ξ_ν^∨⟩.
    pub fn entry(&self, mu: CycleIndex, nu: CycleIndex) -> &R {
        self.mat.at(mu.position(), nu.position())
    }

    /// The underlying 5×5 matrix.
    pub fn as_mat(&self) -> &MatQc {
        &self.mat
    }

    /// The 4×4 Gram block on the reduced basis J′.
    pub fn j_prime_block(&self) -> MatQc {
        let mut m = MatQc::zeros(4);
        for (i, mu) in BASIS_J_PRIME.iter().enumerate() {
            for (j, nu) in BASIS_J_PRIME.iter().enumerate() {
                *m.at_mut(i, j) = self.entry(*mu, *nu).clone();
            }
        }
        m
    }

    /// The (2,2)-cofactor (delete the (12) row and column; its sign factor
    /// (−1)^{2+2} is +1), equal to (c²+c+1)/(c−1)².
    pub fn cofactor_22(&self) -> R {
        self.j_prime_block().det()
    }
}

/// The intersection form between the twisted homology and its dual, on the
/// ordered generators J, for configurations with arg x₀ < arg x₁ < arg x₂:
///
/// ```text
///          (01)        (12)        (20)      ω₁  ω₂
/// (01) [ -(c+1)/(c-1)   1/(c-1)     c/(c-1)   0   0 ]
/// (12) [  c/(c-1)     -(c+1)/(c-1)  1/(c-1)   0   0 ]
/// (20) [  1/(c-1)      c/(c-1)    -(c+1)/(c-1) 0  0 ]
/// ω₁   [  0             0           0         0   1 ]
/// ω₂   [  0             0           0        -1   0 ]
/// ```
pub fn intersection_matrix() -> IntersectionMatrix {
    let c = R::c();
    let one = R::one();
    let d = &c - &one; // c − 1
    let diag = -&(&(&c + &one) / &d); // −(c+1)/(c−1)
    let lo = &one / &d; // 1/(c−1)
    let hi = &c / &d; // c/(c−1)
    let z = R::zero;
    let mat = MatQc::from_rows(
        5,
        vec![
            diag.clone(), lo.clone(), hi.clone(), z(), z(),
            hi.clone(), diag.clone(), lo.clone(), z(), z(),
            lo.clone(), hi.clone(), diag.clone(), z(), z(),
            z(), z(), z(), z(), one.clone(),
            z(), z(), z(), -&one, z(),
        ],
    );
    IntersectionMatrix { mat }
}

/// The intersection number ⟨Ξ, Η^∨⟩: bilinear extension
/// Σ_{μ,ν} a_μ(c)·b_ν(1/c)·⟨Ξ_μ, Ξ_ν^∨⟩, where the second argument's
/// coefficients receive the dual substitution c ↦ 1/c.
pub fn intersect(xi: &TwistedCycleSym, eta: &TwistedCycleSym) -> R {
    let form = intersection_matrix();
    let mut acc = R::zero();
    for mu in ALL_INDICES {
        let a = xi.coeff(mu);
        if a.is_zero() {
            continue;
        }
        for nu in ALL_INDICES {
            let b = eta.coeff(nu);
            if b.is_zero() {
                continue;
            }
            let pairing = form.entry(mu, nu);
            if pairing.is_zero() {
                continue;
            }
            acc = acc + &(&(a * &b.invert_c()) * pairing);
        }
    }
    acc
}

/// Rank of the intersection pairing over ℚ(c): the 4×4 block on J′ has full
/// rank 4, and the full 5×5 matrix also has rank 4 with kernel spanned by the
/// relation vector (1,1,1,0,0) on both sides.
pub fn rank_check() -> usize {
    intersection_matrix().j_prime_block().rank()
}
