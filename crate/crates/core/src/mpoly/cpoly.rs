use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::linalg::{ONE, ZERO};

/// Polynomial in one complex variable, coefficients in ascending powers.
///
/// The highest stored coefficient is nonzero; the zero polynomial stores no
/// coefficients and has no degree.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CPoly {
    coeffs: Vec<Complex64>,
}

impl CPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == ZERO) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    /// z - z0
    pub fn linear_factor(z0: Complex64) -> Self {
        Self::new(vec![-z0, ONE])
    }

    /// Product of (z - r) over the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots
            .iter()
            .fold(Self::one(), |acc, &r| &acc * &Self::linear_factor(r))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, c| acc.max(c.norm()))
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Drops trailing coefficients whose magnitude is at most `abs_tol`.
    pub fn trim(&self, abs_tol: f64) -> Self {
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= abs_tol) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Trims relative to the largest coefficient.
    pub fn trim_relative(&self, rel_tol: f64) -> Self {
        self.trim(rel_tol * self.max_coeff())
    }

    /// Synthetic division by (z - z0): returns quotient and remainder p(z0).
    pub fn div_linear(&self, z0: Complex64) -> (Self, Complex64) {
        let n = self.coeffs.len();
        if n == 0 {
            return (Self::zero(), ZERO);
        }
        let mut q = vec![ZERO; n - 1];
        let mut acc = ZERO;
        for k in (0..n).rev() {
            acc = acc * z0 + self.coeffs[k];
            if k > 0 {
                q[k - 1] = acc;
            }
        }
        (Self::new(q), acc)
    }

    /// Coefficients of the Taylor expansion around z0, i.e. p^{(k)}(z0)/k!.
    pub fn taylor_at(&self, z0: Complex64, count: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(count);
        let mut cur = self.clone();
        for _ in 0..count {
            let (q, r) = cur.div_linear(z0);
            out.push(r);
            cur = q;
        }
        out
    }

    /// Order of vanishing at z0, capped at `max_order`.
    ///
    /// Successive synthetic-division remainders are compared against
    /// `abs_tol`; the zero polynomial vanishes to every order.
    pub fn order_at(&self, z0: Complex64, max_order: usize, abs_tol: f64) -> usize {
        let mut cur = self.clone();
        for k in 0..max_order {
            if cur.is_zero() {
                return max_order;
            }
            let (q, r) = cur.div_linear(z0);
            if r.norm() > abs_tol {
                return k;
            }
            cur = q;
        }
        max_order
    }

    /// Divides out (z - z0)^times, discarding remainders.
    pub fn deflate(&self, z0: Complex64, times: usize) -> Self {
        let mut cur = self.clone();
        for _ in 0..times {
            cur = cur.div_linear(z0).0;
        }
        cur
    }

    /// Euclidean division; the quotient's leading terms cancel exactly.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let Some(dd) = divisor.degree() else {
            panic!("division by the zero polynomial");
        };
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut q = vec![ZERO; nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let f = rem[k + dd] / lead;
            q[k] = f;
            for (i, &dc) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= f * dc;
            }
            rem[k + dd] = ZERO;
        }
        rem.truncate(dd);
        (Self::new(q), Self::new(rem))
    }
}

impl Add for &CPoly {
    type Output = CPoly;
    fn add(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &CPoly {
    type Output = CPoly;
    fn sub(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &CPoly {
    type Output = CPoly;
    fn mul(self, rhs: &CPoly) -> CPoly {
        if self.is_zero() || rhs.is_zero() {
            return CPoly::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CPoly::new(out)
    }
}

impl Neg for &CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        self.scale(-ONE)
    }
}
