use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::cpoly::CPoly;
use crate::error::{Error, Result};
use crate::linalg::{adjugate, determinant, identity, max_abs, CMat, ZERO};

/// Coefficients below this fraction of the largest one are treated as
/// interpolation round-off when fitting the exact degree.
const INTERPOLATION_TRIM: f64 = 1e-12;

/// Matrix-valued polynomial Σ C_k z^k with rows×cols coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPoly {
    rows: usize,
    cols: usize,
    coeffs: Vec<CMat>,
}

impl MatrixPoly {
    pub fn new(rows: usize, cols: usize, mut coeffs: Vec<CMat>) -> Result<Self> {
        for c in &coeffs {
            if c.nrows() != rows {
                return Err(Error::DimensionMismatch {
                    what: "matrix polynomial coefficient rows",
                    expected: rows,
                    found: c.nrows(),
                });
            }
            if c.ncols() != cols {
                return Err(Error::DimensionMismatch {
                    what: "matrix polynomial coefficient columns",
                    expected: cols,
                    found: c.ncols(),
                });
            }
        }
        while coeffs.last().is_some_and(|c| c.iter().all(|z| *z == ZERO)) {
            coeffs.pop();
        }
        Ok(Self { rows, cols, coeffs })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: CMat) -> Self {
        let (rows, cols) = c.shape();
        Self::new(rows, cols, vec![c]).expect("shape is consistent")
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(identity(n))
    }

    /// P(z) = Id - Σ_{k=1}^p Ψ_k z^k.
    pub fn autoregressive(psis: &[CMat]) -> Result<Self> {
        let m = psis.first().map_or(0, |p| p.nrows());
        let mut coeffs = Vec::with_capacity(psis.len() + 1);
        coeffs.push(identity(m));
        for psi in psis {
            if !psi.is_square() {
                return Err(Error::NotSquare {
                    rows: psi.nrows(),
                    cols: psi.ncols(),
                });
            }
            coeffs.push(-psi);
        }
        Self::new(m, m, coeffs)
    }

    /// Q(z) = Σ_{k=0}^q Θ_k z^k.
    pub fn moving_average(thetas: &[CMat]) -> Result<Self> {
        let (rows, cols) = thetas.first().map_or((0, 0), |t| t.shape());
        Self::new(rows, cols, thetas.to_vec())
    }

    /// Builds from row-major scalar entries.
    pub fn from_entries(rows: usize, cols: usize, entries: &[CPoly]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        let len = entries.iter().map(|e| e.coeffs().len()).max().unwrap_or(0);
        let coeffs = (0..len)
            .map(|k| CMat::from_fn(rows, cols, |i, j| entries[i * cols + j].coeff(k)))
            .collect();
        Self::new(rows, cols, coeffs).expect("shape is consistent")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    /// Coefficient of z^k, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> CMat {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| CMat::zeros(self.rows, self.cols))
    }

    pub fn entry(&self, i: usize, j: usize) -> CPoly {
        CPoly::new(self.coeffs.iter().map(|c| c[(i, j)]).collect())
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, c| acc.max(max_abs(c)))
    }

    pub fn eval(&self, z: Complex64) -> CMat {
        let mut acc = CMat::zeros(self.rows, self.cols);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn mul(&self, rhs: &MatrixPoly) -> Result<MatrixPoly> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                what: "matrix polynomial product",
                expected: self.cols,
                found: rhs.rows,
            });
        }
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Ok(Self::zero(self.rows, rhs.cols));
        }
        let mut out = vec![CMat::zeros(self.rows, rhs.cols); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(self.rows, rhs.cols, out)
    }

    /// Right multiplication by a constant matrix.
    pub fn mul_const(&self, m: &CMat) -> Result<MatrixPoly> {
        self.mul(&MatrixPoly::constant(m.clone()))
    }

    pub fn sub(&self, rhs: &MatrixPoly) -> Result<MatrixPoly> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                what: "matrix polynomial difference",
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new(self.rows, self.cols, (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }

    pub fn scale_poly(&self, p: &CPoly) -> MatrixPoly {
        let entries: Vec<CPoly> = (0..self.rows * self.cols)
            .map(|idx| &self.entry(idx / self.cols, idx % self.cols) * p)
            .collect();
        Self::from_entries(self.rows, self.cols, &entries)
    }

    /// Drops trailing coefficient matrices that are negligible relative to
    /// the largest coefficient.
    pub fn trim_relative(&self, rel_tol: f64) -> MatrixPoly {
        let cut = rel_tol * self.max_coeff();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| max_abs(c) <= cut) {
            coeffs.pop();
        }
        Self {
            rows: self.rows,
            cols: self.cols,
            coeffs,
        }
    }

    /// z^n · P(1/z̄)^*, which equals z^n · P(z)^* on the unit circle.
    pub fn para_conjugate(&self) -> MatrixPoly {
        let coeffs = self.coeffs.iter().rev().map(|c| c.adjoint()).collect();
        Self::new(self.cols, self.rows, coeffs).expect("shape is consistent")
    }
}

/// Interpolation nodes ω^k, k = 0..n-1, on the unit circle.
fn unit_nodes(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
        .collect()
}

/// Coefficients 0..n-1 of the polynomial taking `values` at `unit_nodes(n)`.
fn interpolate_on_circle(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    (0..n)
        .map(|j| {
            let mut acc = ZERO;
            for (k, v) in values.iter().enumerate() {
                let angle = -2.0 * PI * ((j * k) % n) as f64 / n as f64;
                acc += v * Complex64::from_polar(1.0, angle);
            }
            acc / n as f64
        })
        .collect()
}

fn require_square(p: &MatrixPoly) -> Result<()> {
    if p.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: p.rows,
            cols: p.cols,
        })
    }
}

fn node_count(p: &MatrixPoly) -> usize {
    p.rows * p.degree().unwrap_or(0) + 1
}

/// det P(z) as a polynomial, by interpolation at roots of unity.
pub fn det_poly(p: &MatrixPoly) -> Result<CPoly> {
    require_square(p)?;
    if p.rows == 0 {
        return Ok(CPoly::one());
    }
    let nodes = unit_nodes(node_count(p));
    let values: Vec<Complex64> = nodes.iter().map(|&z| determinant(&p.eval(z))).collect();
    Ok(CPoly::new(interpolate_on_circle(&values)).trim_relative(INTERPOLATION_TRIM))
}

/// Adj(P)(z), satisfying P(z)·Adj(P)(z) = det P(z)·Id.
pub fn adjugate_poly(p: &MatrixPoly) -> Result<MatrixPoly> {
    require_square(p)?;
    let m = p.rows;
    let nodes = unit_nodes(node_count(p));
    let adjs: Vec<CMat> = nodes.iter().map(|&z| adjugate(&p.eval(z))).collect();
    let mut entries = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let values: Vec<Complex64> = adjs.iter().map(|a| a[(i, j)]).collect();
            entries.push(CPoly::new(interpolate_on_circle(&values)));
        }
    }
    Ok(MatrixPoly::from_entries(m, m, &entries).trim_relative(INTERPOLATION_TRIM))
}

/// Entrywise coefficient comparison relative to the larger operand scale.
pub fn max_coeff_diff(a: &MatrixPoly, b: &MatrixPoly) -> f64 {
    let n = a.coeffs.len().max(b.coeffs.len());
    (0..n).fold(0.0, |acc, k| acc.max(max_abs(&(a.coeff(k) - b.coeff(k)))))
}
