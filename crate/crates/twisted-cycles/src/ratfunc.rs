//! Exact arithmetic in ℚ(c), the field of rational functions in the monodromy
//! unit c = e^{2πiα}.
//!
//! Elements are stored as a pair of integer-coefficient polynomials
//! (arbitrary-precision, dense little-endian coefficient vectors) in a unique
//! canonical form:
//!
//! * the polynomial gcd of numerator and denominator is 1 (including the
//!   integer content gcd),
//! * the denominator's leading coefficient is positive,
//! * zero is (0, 1).
//!
//! With integer coefficients a literally monic denominator is not always
//! expressible; "primitive with positive leading coefficient" is the standard
//! substitute and coincides with monic for every denominator arising here
//! (they are all of the form c^a·(c−1)^b). Canonical form makes structural
//! equality (`==`) coincide with field equality, which is what lets the
//! intersection and connection matrices be compared with zero tolerance.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

// ─────────────────────────────────────────────────────────────────────────────
// Integer-coefficient polynomials
// ─────────────────────────────────────────────────────────────────────────────

/// Dense univariate polynomial over ℤ, little-endian coefficients, no trailing
/// zeros (the zero polynomial has an empty coefficient vector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyZ {
    coeffs: Vec<BigInt>,
}

impl PolyZ {
    /// The zero polynomial.
    pub fn zero() -> Self {
        PolyZ { coeffs: Vec::new() }
    }

    /// The constant polynomial `n`.
    pub fn constant(n: i64) -> Self {
        Self::from_coeffs(vec![BigInt::from(n)])
    }

    /// The monomial c^k.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::from(1);
        Self::from_coeffs(coeffs)
    }

    /// Builds from little-endian coefficients, trimming trailing zeros.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = PolyZ { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    /// Gcd of the coefficients (non-negative; 0 for the zero polynomial).
    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = gcd_int(&g, c);
        }
        g
    }

    fn neg(&self) -> PolyZ {
        PolyZ {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn add(&self, other: &PolyZ) -> PolyZ {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero);
            let b = other.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero);
            coeffs.push(a + b);
        }
        PolyZ::from_coeffs(coeffs)
    }

    fn sub(&self, other: &PolyZ) -> PolyZ {
        self.add(&other.neg())
    }

    fn mul(&self, other: &PolyZ) -> PolyZ {
        if self.is_zero() || other.is_zero() {
            return PolyZ::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PolyZ::from_coeffs(coeffs)
    }

    fn mul_scalar(&self, s: &BigInt) -> PolyZ {
        PolyZ::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Divides by c^k (must divide exactly, i.e. the low k coefficients are 0).
    fn shr_monomial(&self, k: usize) -> PolyZ {
        debug_assert!(self.coeffs.iter().take(k).all(|c| c.is_zero()));
        PolyZ::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Exact division: panics if `other` does not divide `self` exactly.
    /// Only called with divisors produced by `gcd`, for which exactness is
    /// guaranteed.
    fn exact_div(&self, other: &PolyZ) -> PolyZ {
        assert!(!other.is_zero(), "polynomial division by zero");
        if self.is_zero() {
            return PolyZ::zero();
        }
        let mut rem = self.clone();
        let dl = other.leading();
        let dd = other.degree().unwrap();
        let nd = rem.degree().expect("nonzero");
        assert!(nd >= dd, "exact_div: degree underflow");
        let mut q = vec![BigInt::zero(); nd - dd + 1];
        while !rem.is_zero() && rem.degree().unwrap() >= dd {
            let rd = rem.degree().unwrap();
            let (quot, r) = num_integer_div_rem(&rem.leading(), &dl);
            assert!(r.is_zero(), "exact_div: inexact leading coefficient");
            q[rd - dd] = quot.clone();
            let t = other.mul(&PolyZ::from_coeffs({
                let mut v = vec![BigInt::zero(); rd - dd + 1];
                v[rd - dd] = quot;
                v
            }));
            rem = rem.sub(&t);
        }
        assert!(rem.is_zero(), "exact_div: nonzero remainder");
        PolyZ::from_coeffs(q)
    }

    /// Pseudo-remainder of `self` by `other`: the remainder of
    /// lc(other)^(deg self − deg other + 1) · self under long division.
    fn pseudo_rem(&self, other: &PolyZ) -> PolyZ {
        assert!(!other.is_zero());
        let dd = other.degree().unwrap();
        let mut rem = self.clone();
        let dl = other.leading();
        while !rem.is_zero() && rem.degree().unwrap() >= dd {
            let rd = rem.degree().unwrap();
            let lead = rem.leading();
            // rem ← lc(other)·rem − lead·c^{rd−dd}·other stays integral and
            // strictly drops the degree.
            rem = rem.mul_scalar(&dl);
            let t = other.mul(&PolyZ::from_coeffs({
                let mut v = vec![BigInt::zero(); rd - dd + 1];
                v[rd - dd] = lead;
                v
            }));
            rem = rem.sub(&t);
        }
        rem
    }

    /// Primitive part: divides out the content; sign follows the leading
    /// coefficient of the input.
    fn primitive(&self) -> PolyZ {
        if self.is_zero() {
            return PolyZ::zero();
        }
        let c = self.content();
        PolyZ::from_coeffs(
            self.coeffs
                .iter()
                .map(|x| num_integer_div_rem(x, &c).0)
                .collect(),
        )
    }

    /// Full gcd over ℤ[c]: content gcd times the primitive-part gcd, with a
    /// positive leading coefficient.
    pub fn gcd(&self, other: &PolyZ) -> PolyZ {
        if self.is_zero() {
            return other.abs_leading();
        }
        if other.is_zero() {
            return self.abs_leading();
        }
        let cont = gcd_int(&self.content(), &other.content());
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        let g = a.primitive().mul_scalar(&cont);
        g.abs_leading()
    }

    /// Negates if the leading coefficient is negative.
    fn abs_leading(&self) -> PolyZ {
        if self.leading().is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Reversed coefficients: c^deg · p(1/c).
    fn reversed(&self) -> PolyZ {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        PolyZ::from_coeffs(coeffs)
    }

    /// Evaluates at a complex point by Horner's rule.
    pub fn eval(&self, c: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for coeff in self.coeffs.iter().rev() {
            acc = acc * c + Complex64::new(coeff.to_f64().expect("coefficient fits in f64"), 0.0);
        }
        acc
    }
}

/// Euclidean quotient/remainder on BigInt (num-bigint division truncates
/// toward zero, which is what the exact-division assertions expect).
fn num_integer_div_rem(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    (a / b, a % b)
}

fn gcd_int(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

impl fmt::Display for PolyZ {
    /// Standard descending-power rendering: `c^2+c+1`, `-c+2`, `-1`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, coeff) in self.coeffs.iter().enumerate().rev() {
            if coeff.is_zero() {
                continue;
            }
            let (sign, mag) = if coeff.is_negative() {
                ("-", -coeff)
            } else {
                ("+", coeff.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, "{sign}")?;
            }
            let one = mag == BigInt::from(1);
            match (k, one) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "c")?,
                (1, false) => write!(f, "{mag}c")?,
                (_, true) => write!(f, "c^{k}")?,
                (_, false) => write!(f, "{mag}c^{k}")?,
            }
        }
        Ok(())
    }
}

// ─────────────────────────────────────────────────────────────────────────────
// Rational functions
// ─────────────────────────────────────────────────────────────────────────────

/// An exact element of ℚ(c) in canonical numerator/denominator form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunctionC {
    num: PolyZ,
    den: PolyZ,
}

impl RationalFunctionC {
    /// Zero, stored as (0, 1).
    pub fn zero() -> Self {
        RationalFunctionC {
            num: PolyZ::zero(),
            den: PolyZ::constant(1),
        }
    }

    /// The constant one.
    pub fn one() -> Self {
        Self::integer(1)
    }

    /// An integer constant.
    pub fn integer(n: i64) -> Self {
        RationalFunctionC {
            num: PolyZ::constant(n),
            den: PolyZ::constant(1),
        }
    }

    /// The variable c itself.
    pub fn c() -> Self {
        RationalFunctionC {
            num: PolyZ::monomial(1),
            den: PolyZ::constant(1),
        }
    }

    /// Builds `num/den` in canonical form. Panics if `den` is the zero
    /// polynomial (a programming error, like integer division by zero).
    pub fn new(num: PolyZ, den: PolyZ) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let mut num = num.exact_div(&g);
        let mut den = den.exact_div(&g);
        if den.leading().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        RationalFunctionC { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self == &Self::one()
    }

    pub fn numerator(&self) -> &PolyZ {
        &self.num
    }

    pub fn denominator(&self) -> &PolyZ {
        &self.den
    }

    /// The substitution c ↦ 1/c, renormalized to polynomial/polynomial form.
    /// This is the coefficient-level duality of twisted cycles; it is an
    /// involution.
    pub fn invert_c(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        let mut num = self.num.reversed();
        let mut den = self.den.reversed();
        // num(1/c)/den(1/c) = rev(num)·c^{dd−dn}/rev(den); rev() may drop
        // factors of c (trailing zeros of the original), which reappear here.
        if dd >= dn {
            num = num.mul(&PolyZ::monomial(dd - dn));
        } else {
            den = den.mul(&PolyZ::monomial(dn - dd));
        }
        Self::new(num, den)
    }

    /// Evaluates at a concrete complex c₀. The denominator must not vanish
    /// there (guaranteed for |c₀| ∉ {0, 1} by the shapes arising here).
    pub fn eval(&self, c0: Complex64) -> Complex64 {
        self.num.eval(c0) / self.den.eval(c0)
    }

    /// Multiplicative inverse. Panics on zero, like integer division.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "inverse of the zero rational function");
        Self::new(self.den.clone(), self.num.clone())
    }

    /// Integer power (negative exponents through `recip`).
    pub fn powi(&self, n: i32) -> Self {
        let base = if n < 0 { self.recip() } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..n.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }
}

impl fmt::Display for RationalFunctionC {
    /// Canonical rendering: `0`, `1`, `-c+2`, `c/(c-1)`, `(-c-1)/(c-1)`,
    /// `(c^2+c+1)/(c-1)^2`. Denominators are displayed factored into the
    /// powers of `c` and `(c-1)` (and `(c+1)`) that actually occur; anything
    /// else falls back to an expanded parenthesized polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == PolyZ::constant(1) {
            return write!(f, "{}", self.num);
        }
        let num_str = self.num.to_string();
        // Parenthesize multi-term numerators.
        let num_terms = num_str[1..].contains('+') || num_str[1..].contains('-');
        if num_terms {
            write!(f, "({num_str})/")?;
        } else {
            write!(f, "{num_str}/")?;
        }
        write!(f, "{}", factored_denominator(&self.den))
    }
}

/// Renders a denominator as a product of recognized factors.
fn factored_denominator(den: &PolyZ) -> String {
    let mut rest = den.clone();
    let mut out = String::new();
    // powers of c
    let mut k = 0usize;
    while rest.degree().map_or(false, |d| d >= 1) && rest.coeffs[0].is_zero() {
        rest = rest.shr_monomial(1);
        k += 1;
    }
    if k == 1 {
        out.push('c');
    } else if k > 1 {
        out.push_str(&format!("c^{k}"));
    }
    for (factor, render) in [
        (PolyZ::from_coeffs(vec![BigInt::from(-1), BigInt::from(1)]), "(c-1)"),
        (PolyZ::from_coeffs(vec![BigInt::from(1), BigInt::from(1)]), "(c+1)"),
    ] {
        let mut p = 0usize;
        loop {
            if rest.degree().map_or(true, |d| d < 1) {
                break;
            }
            let g = rest.gcd(&factor);
            if g.degree() == Some(1) {
                rest = rest.exact_div(&factor);
                p += 1;
            } else {
                break;
            }
        }
        if p == 1 {
            out.push_str(render);
        } else if p > 1 {
            out.push_str(&format!("{render}^{p}"));
        }
    }
    if rest != PolyZ::constant(1) {
        out.push_str(&format!("({rest})"));
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

// Arithmetic on references, with owned forwarding so expressions read cleanly.
impl<'b> Add<&'b RationalFunctionC> for &RationalFunctionC {
    type Output = RationalFunctionC;
    fn add(self, rhs: &'b RationalFunctionC) -> RationalFunctionC {
        RationalFunctionC::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl<'b> Sub<&'b RationalFunctionC> for &RationalFunctionC {
    type Output = RationalFunctionC;
    fn sub(self, rhs: &'b RationalFunctionC) -> RationalFunctionC {
        RationalFunctionC::new(
            self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl<'b> Mul<&'b RationalFunctionC> for &RationalFunctionC {
    type Output = RationalFunctionC;
    fn mul(self, rhs: &'b RationalFunctionC) -> RationalFunctionC {
        RationalFunctionC::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl<'b> Div<&'b RationalFunctionC> for &RationalFunctionC {
    type Output = RationalFunctionC;
    fn div(self, rhs: &'b RationalFunctionC) -> RationalFunctionC {
        assert!(!rhs.is_zero(), "division by the zero rational function");
        RationalFunctionC::new(self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }
}

impl Neg for &RationalFunctionC {
    type Output = RationalFunctionC;
    fn neg(self) -> RationalFunctionC {
        RationalFunctionC {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait<RationalFunctionC> for RationalFunctionC {
            type Output = RationalFunctionC;
            fn $method(self, rhs: RationalFunctionC) -> RationalFunctionC {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&RationalFunctionC> for RationalFunctionC {
            type Output = RationalFunctionC;
            fn $method(self, rhs: &RationalFunctionC) -> RationalFunctionC {
                (&self).$method(rhs)
            }
        }
        impl $trait<RationalFunctionC> for &RationalFunctionC {
            type Output = RationalFunctionC;
            fn $method(self, rhs: RationalFunctionC) -> RationalFunctionC {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RationalFunctionC {
    type Output = RationalFunctionC;
    fn neg(self) -> RationalFunctionC {
        -(&self)
    }
}
