//! Exact dense matrices over ℚ(c).
//!
//! Degrees stay tiny (< 10) in every computation here, so plain Gaussian
//! elimination with exact field arithmetic is both simple and fast. The
//! characteristic polynomial uses the Faddeev–LeVerrier recurrence, which only
//! needs matrix products and exact division by small integers.

use crate::ratfunc::RationalFunctionC;
use num_complex::Complex64;
use std::fmt;

type R = RationalFunctionC;

/// A square matrix with entries in ℚ(c), row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MatQc {
    n: usize,
    data: Vec<R>,
}

impl MatQc {
    /// Zero matrix of side `n`.
    pub fn zeros(n: usize) -> Self {
        MatQc {
            n,
            data: vec![R::zero(); n * n],
        }
    }

    /// Identity matrix of side `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            *m.at_mut(i, i) = R::one();
        }
        m
    }

    /// Builds from a row-major vector of entries (length must be n²).
    pub fn from_rows(n: usize, entries: Vec<R>) -> Self {
        assert_eq!(entries.len(), n * n, "matrix entry count");
        MatQc { n, data: entries }
    }

    pub fn side(&self) -> usize {
        self.n
    }

    pub fn at(&self, row: usize, col: usize) -> &R {
        &self.data[row * self.n + col]
    }

    pub fn at_mut(&mut self, row: usize, col: usize) -> &mut R {
        &mut self.data[row * self.n + col]
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &MatQc) -> MatQc {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = MatQc::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(i, j).clone();
                    *out.at_mut(i, j) = cur + a * b;
                }
            }
        }
        out
    }

    /// Matrix–vector product.
    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = R::zero();
                for j in 0..self.n {
                    if !self.at(i, j).is_zero() && !v[j].is_zero() {
                        acc = acc + self.at(i, j) * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Vector–matrix product (left action).
    pub fn vec_mul(&self, v: &[R]) -> Vec<R> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|j| {
                let mut acc = R::zero();
                for i in 0..self.n {
                    if !self.at(i, j).is_zero() && !v[i].is_zero() {
                        acc = acc + &v[i] * self.at(i, j);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> MatQc {
        let n = self.n;
        let mut out = MatQc::zeros(n);
        for i in 0..n {
            for j in 0..n {
                *out.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        out
    }

    /// Applies c ↦ 1/c to every entry.
    pub fn invert_c_entrywise(&self) -> MatQc {
        MatQc {
            n: self.n,
            data: self.data.iter().map(|e| e.invert_c()).collect(),
        }
    }

    pub fn neg(&self) -> MatQc {
        MatQc {
            n: self.n,
            data: self.data.iter().map(|e| -e).collect(),
        }
    }

    /// Determinant by exact Gaussian elimination.
    pub fn det(&self) -> R {
        let n = self.n;
        let mut m = self.clone();
        let mut det = R::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !m.at(r, col).is_zero()) else {
                return R::zero();
            };
            if pivot != col {
                for j in 0..n {
                    let tmp = m.at(pivot, j).clone();
                    *m.at_mut(pivot, j) = m.at(col, j).clone();
                    *m.at_mut(col, j) = tmp;
                }
                det = -det;
            }
            let p = m.at(col, col).clone();
            det = det * &p;
            for r in col + 1..n {
                if m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col) / &p;
                for j in col..n {
                    let val = m.at(r, j) - &(&factor * m.at(col, j));
                    *m.at_mut(r, j) = val;
                }
            }
        }
        det
    }

    /// Rank over the field ℚ(c).
    pub fn rank(&self) -> usize {
        let n = self.n;
        let mut m = self.clone();
        let mut rank = 0usize;
        let mut row = 0usize;
        for col in 0..n {
            let Some(pivot) = (row..n).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            if pivot != row {
                for j in 0..n {
                    let tmp = m.at(pivot, j).clone();
                    *m.at_mut(pivot, j) = m.at(row, j).clone();
                    *m.at_mut(row, j) = tmp;
                }
            }
            let p = m.at(row, col).clone();
            for r in row + 1..n {
                if m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col) / &p;
                for j in col..n {
                    let val = m.at(r, j) - &(&factor * m.at(row, j));
                    *m.at_mut(r, j) = val;
                }
            }
            rank += 1;
            row += 1;
            if row == n {
                break;
            }
        }
        rank
    }

    /// Exact inverse by Gauss–Jordan; `None` if singular.
    pub fn inverse(&self) -> Option<MatQc> {
        let n = self.n;
        let mut m = self.clone();
        let mut inv = MatQc::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.at(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    let tmp = m.at(pivot, j).clone();
                    *m.at_mut(pivot, j) = m.at(col, j).clone();
                    *m.at_mut(col, j) = tmp;
                    let tmp = inv.at(pivot, j).clone();
                    *inv.at_mut(pivot, j) = inv.at(col, j).clone();
                    *inv.at_mut(col, j) = tmp;
                }
            }
            let p = m.at(col, col).clone();
            for j in 0..n {
                let v = m.at(col, j) / &p;
                *m.at_mut(col, j) = v;
                let v = inv.at(col, j) / &p;
                *inv.at_mut(col, j) = v;
            }
            for r in 0..n {
                if r == col || m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).clone();
                for j in 0..n {
                    let v = m.at(r, j) - &(&factor * m.at(col, j));
                    *m.at_mut(r, j) = v;
                    let v = inv.at(r, j) - &(&factor * inv.at(col, j));
                    *inv.at_mut(r, j) = v;
                }
            }
        }
        Some(inv)
    }

    /// Characteristic polynomial coefficients [1, a₁, …, aₙ] of
    /// λⁿ + a₁λⁿ⁻¹ + … + aₙ, by the Faddeev–LeVerrier recurrence.
    pub fn char_poly(&self) -> Vec<R> {
        let n = self.n;
        let mut coeffs = vec![R::one()];
        let mut m = MatQc::zeros(n); // M₀ = 0
        for k in 1..=n {
            // Mₖ = A·Mₖ₋₁ + aₖ₋₁·I ; aₖ = −tr(A·Mₖ)/k
            let mut am = self.mul(&m);
            let last = coeffs.last().unwrap().clone();
            for i in 0..n {
                let v = am.at(i, i) + &last;
                *am.at_mut(i, i) = v;
            }
            let prod = self.mul(&am);
            let mut trace = R::zero();
            for i in 0..n {
                trace = trace + prod.at(i, i);
            }
            coeffs.push(-(&trace / &R::integer(k as i64)));
            m = am;
        }
        coeffs
    }

    /// Evaluates every entry at a concrete c₀.
    pub fn eval(&self, c0: Complex64) -> Vec<Vec<Complex64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.at(i, j).eval(c0)).collect())
            .collect()
    }
}

impl fmt::Display for MatQc {
    /// Aligned textual rendering with exact rational-function strings.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strings: Vec<Vec<String>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.at(i, j).to_string()).collect())
            .collect();
        let widths: Vec<usize> = (0..self.n)
            .map(|j| strings.iter().map(|row| row[j].len()).max().unwrap_or(0))
            .collect();
        for row in &strings {
            write!(f, "[")?;
            for (j, s) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{:>width$}", s, width = widths[j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
