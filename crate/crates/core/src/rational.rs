//! The transfer function M(z) = P⁻¹(z)·Q̃(z) around the unit circle.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::linalg::{inverse, max_abs, CMat};
use crate::mpoly::{adjugate_poly, det_poly, roots_with_multiplicity, CPoly, MatrixPoly};
use crate::tol::{CirclePosition, Tolerances};

/// A root of det P close to the unit circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Singularity {
    pub z0: Complex64,
    pub multiplicity: usize,
    /// `OnCircle` or `Boundary`.
    pub position: CirclePosition,
}

/// Roots of det P within the band `tol.circle` around |z| = 1. Roots within
/// `tol.circle_exact` are snapped onto the circle.
pub fn unit_circle_singularities(p: &MatrixPoly, tol: &Tolerances) -> Result<Vec<Singularity>> {
    let det = det_poly(p)?.trim_relative(tol.poly_zero);
    singularities_of(&det, tol)
}

pub(crate) fn singularities_of(det: &CPoly, tol: &Tolerances) -> Result<Vec<Singularity>> {
    if det.is_zero() {
        return Err(Error::SingularPolynomial);
    }
    Ok(roots_with_multiplicity(det, tol.root_cluster)?
        .into_iter()
        .filter_map(|r| match tol.classify_modulus(r.value.norm()) {
            CirclePosition::OnCircle => Some(Singularity {
                z0: snap_real(r.value / r.value.norm(), tol.circle_exact),
                multiplicity: r.multiplicity,
                position: CirclePosition::OnCircle,
            }),
            CirclePosition::Boundary => Some(Singularity {
                z0: r.value,
                multiplicity: r.multiplicity,
                position: CirclePosition::Boundary,
            }),
            _ => None,
        })
        .collect())
}

fn snap_real(z: Complex64, eps: f64) -> Complex64 {
    if z.im.abs() <= eps {
        Complex64::new(z.re.signum(), 0.0)
    } else {
        z
    }
}

/// Entry of Adj(P)·Q̃ whose zero at a singularity is too shallow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Obstruction {
    pub row: usize,
    pub col: usize,
    pub z0: Complex64,
    pub order: usize,
    pub multiplicity: usize,
}

/// Outcome of the removability test, with the deflated representation
/// M = N̂ / d̂ when every tested singularity is removable.
#[derive(Clone, Debug)]
pub struct Removability {
    pub removable: bool,
    pub numerator: MatrixPoly,
    pub denominator: CPoly,
    pub obstruction: Option<Obstruction>,
    pub singularities: Vec<Singularity>,
}

/// Order of vanishing of `p` at `z0`, each synthetic-division remainder being
/// compared with `rel_tol` times Σ|a_k||z0|^k of the polynomial divided.
pub(crate) fn vanishing_order(p: &CPoly, z0: Complex64, max_order: usize, rel_tol: f64) -> usize {
    let mut cur = p.clone();
    let r = z0.norm();
    for k in 0..max_order {
        if cur.is_zero() {
            return max_order;
        }
        let scale = cur.coeffs().iter().rev().fold(0.0, |acc, a| acc * r + a.norm());
        let (quotient, rem) = cur.div_linear(z0);
        if rem.norm() > rel_tol * scale {
            return k;
        }
        cur = quotient;
    }
    max_order
}

/// Removability of the unit-circle singularities of P⁻¹Q̃.
pub fn is_removable(p: &MatrixPoly, qt: &MatrixPoly, tol: &Tolerances) -> Result<Removability> {
    let det = det_poly(p)?.trim_relative(tol.poly_zero);
    let sing = singularities_of(&det, tol)?;
    removable_at(p, qt, &det, sing, tol)
}

/// Removability restricted to the given singularities.
pub fn is_removable_at(p: &MatrixPoly, qt: &MatrixPoly, singularities: &[Singularity], tol: &Tolerances) -> Result<Removability> {
    let det = det_poly(p)?.trim_relative(tol.poly_zero);
    if det.is_zero() {
        return Err(Error::SingularPolynomial);
    }
    removable_at(p, qt, &det, singularities.to_vec(), tol)
}

fn removable_at(p: &MatrixPoly, qt: &MatrixPoly, det: &CPoly, singularities: Vec<Singularity>, tol: &Tolerances) -> Result<Removability> {
    if qt.rows() != p.rows() {
        return Err(Error::DimensionMismatch {
            what: "transfer numerator rows",
            expected: p.rows(),
            found: qt.rows(),
        });
    }
    let numer = adjugate_poly(p)?.mul(qt)?;
    let (rows, cols) = (numer.rows(), numer.cols());
    let mut entries: Vec<CPoly> = (0..rows * cols).map(|i| numer.entry(i / cols, i % cols)).collect();
    // entries at round-off level of the whole numerator are exact zeros
    let cut = tol.poly_zero * numer.max_coeff();
    for e in entries.iter_mut() {
        if e.max_coeff() <= cut {
            *e = CPoly::zero();
        }
    }
    let numer = MatrixPoly::from_entries(rows, cols, &entries);
    let mut denominator = det.clone();
    for s in &singularities {
        for (idx, e) in entries.iter().enumerate() {
            let order = vanishing_order(e, s.z0, s.multiplicity, tol.poly_zero);
            if order < s.multiplicity {
                return Ok(Removability {
                    removable: false,
                    numerator: numer.clone(),
                    denominator: det.clone(),
                    obstruction: Some(Obstruction {
                        row: idx / cols,
                        col: idx % cols,
                        z0: s.z0,
                        order,
                        multiplicity: s.multiplicity,
                    }),
                    singularities,
                });
            }
        }
        for e in entries.iter_mut() {
            *e = e.deflate(s.z0, s.multiplicity);
        }
        denominator = denominator.deflate(s.z0, s.multiplicity);
    }
    Ok(Removability {
        removable: true,
        numerator: MatrixPoly::from_entries(rows, cols, &entries),
        denominator,
        obstruction: None,
        singularities,
    })
}

/// Geometric envelope ‖M_j‖ ≤ C·ρ^{|j|}, ρ taken per side of j = 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decay {
    /// Rate for j ≥ 0.
    pub rho_causal: f64,
    /// Rate for j < 0.
    pub rho_anticausal: f64,
    pub constant: f64,
}

impl Decay {
    pub fn rho(&self) -> f64 {
        self.rho_causal.max(self.rho_anticausal)
    }

    pub fn bound(&self, j: i64) -> f64 {
        let rho = if j >= 0 { self.rho_causal } else { self.rho_anticausal };
        self.constant * libm::pow(rho, j.unsigned_abs() as f64)
    }
}

/// Rates below this are rounded up so the fitted constant stays moderate on
/// finitely supported sides.
const RHO_FLOOR: f64 = 0.1;

fn decay_rates(denominator: &CPoly, tol: &Tolerances) -> Result<(f64, f64)> {
    let mut causal = (0.0f64, 1usize);
    let mut anticausal = (0.0f64, 1usize);
    if denominator.degree().unwrap_or(0) > 0 {
        for r in roots_with_multiplicity(denominator, tol.root_cluster)? {
            let modulus = r.value.norm();
            let (rate, slot) = if modulus < 1.0 {
                (modulus, &mut anticausal)
            } else {
                (1.0 / modulus, &mut causal)
            };
            if rate > slot.0 {
                *slot = (rate, r.multiplicity);
            }
        }
    }
    // a repeated dominant root adds a polynomial factor in |j|
    let settle = |(rate, mult): (f64, usize)| {
        let rate = rate.max(RHO_FLOOR);
        if mult > 1 {
            libm::sqrt(rate)
        } else {
            rate
        }
    };
    Ok((settle(causal), settle(anticausal)))
}

/// Coefficients below this fraction of the largest are round-off and do
/// not enter the envelope fit.
const FIT_FLOOR: f64 = 1e-12;

/// Windowed two-sided coefficient sequence j ↦ M_j.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries {
    j_min: i64,
    coeffs: Vec<CMat>,
    pub decay: Decay,
    /// Node count of the final transform (0 for recursive construction).
    pub nodes: usize,
}

impl LaurentSeries {
    fn new(j_min: i64, coeffs: Vec<CMat>, rates: (f64, f64), nodes: usize) -> Self {
        let mut series = Self {
            j_min,
            coeffs,
            decay: Decay {
                rho_causal: rates.0,
                rho_anticausal: rates.1,
                constant: 0.0,
            },
            nodes,
        };
        let unit = Decay {
            constant: 1.0,
            ..series.decay
        };
        let peak = series.coeffs.iter().map(|m| m.norm()).fold(0.0, f64::max);
        series.decay.constant = series
            .iter()
            .filter(|(_, m)| m.norm() > FIT_FLOOR * peak)
            .map(|(j, m)| m.norm() / unit.bound(j).max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        series
    }

    /// Builds a series from explicit coefficients for the window starting at `j_min`.
    pub fn from_coeffs(j_min: i64, coeffs: Vec<CMat>, rho_causal: f64, rho_anticausal: f64) -> Self {
        Self::new(j_min, coeffs, (rho_causal, rho_anticausal), 0)
    }

    pub fn j_min(&self) -> i64 {
        self.j_min
    }

    pub fn j_max(&self) -> i64 {
        self.j_min + self.coeffs.len() as i64 - 1
    }

    pub fn get(&self, j: i64) -> Option<&CMat> {
        usize::try_from(j - self.j_min).ok().and_then(|i| self.coeffs.get(i))
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &CMat)> {
        self.coeffs.iter().enumerate().map(move |(i, m)| (self.j_min + i as i64, m))
    }

    pub fn shape(&self) -> (usize, usize) {
        self.coeffs.first().map_or((0, 0), |m| m.shape())
    }
}

const MAX_NODES: usize = 1 << 20;

/// Laurent coefficients M_j, j_min ≤ j ≤ j_max, of P⁻¹Q̃ on |z| = 1.
///
/// The deflated form N̂/d̂ is sampled at N roots of unity and transformed;
/// N doubles until two successive estimates agree to `tol.laurent`
/// relative to the largest sampled value.
pub fn laurent_coeffs(p: &MatrixPoly, qt: &MatrixPoly, j_min: i64, j_max: i64, tol: &Tolerances) -> Result<LaurentSeries> {
    let rem = is_removable(p, qt, tol)?;
    laurent_from_removable(&rem, j_min, j_max, tol)
}

/// Same as [`laurent_coeffs`] reusing an existing removability result.
pub fn laurent_from_removable(rem: &Removability, j_min: i64, j_max: i64, tol: &Tolerances) -> Result<LaurentSeries> {
    if let Some(o) = rem.obstruction {
        return Err(Error::NotRemovable {
            row: o.row,
            col: o.col,
            z0: o.z0,
        });
    }
    if j_max < j_min {
        return Err(Error::InvalidModel(alloc::format!("empty Laurent window [{j_min}, {j_max}]")));
    }
    let width = (j_max - j_min + 1) as usize;
    let (rows, cols) = (rem.numerator.rows(), rem.numerator.cols());
    let min_nodes = (4 * width)
        .max(2 * (rem.numerator.degree().unwrap_or(0) + rem.denominator.degree().unwrap_or(0) + 1))
        .next_power_of_two();

    let mut n = min_nodes;
    let (mut previous, _) = extract(rem, n, j_min, width)?;
    loop {
        if n >= MAX_NODES {
            return Err(Error::AliasingNotConverged { nodes: n });
        }
        n *= 2;
        let (current, peak) = extract(rem, n, j_min, width)?;
        let diff = previous
            .iter()
            .zip(&current)
            .map(|(a, b)| max_abs(&(a - b)))
            .fold(0.0, f64::max);
        previous = current;
        if diff <= tol.laurent * peak.max(1.0) {
            break;
        }
    }
    let rates = decay_rates(&rem.denominator, tol)?;
    debug_assert!(previous.iter().all(|m| m.shape() == (rows, cols)));
    Ok(LaurentSeries::new(j_min, previous, rates, n))
}

fn node_value(rem: &Removability, n: usize, k: usize) -> CMat {
    let z = Complex64::from_polar(1.0, 2.0 * core::f64::consts::PI * k as f64 / n as f64);
    rem.numerator.eval(z) / rem.denominator.eval(z)
}

#[cfg(feature = "parallel")]
fn node_values(rem: &Removability, n: usize) -> Vec<CMat> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(|k| node_value(rem, n, k)).collect()
}

#[cfg(not(feature = "parallel"))]
fn node_values(rem: &Removability, n: usize) -> Vec<CMat> {
    (0..n).map(|k| node_value(rem, n, k)).collect()
}

/// Window coefficients from N nodes, and the largest sampled entry.
fn extract(rem: &Removability, n: usize, j_min: i64, width: usize) -> Result<(Vec<CMat>, f64)> {
    let (rows, cols) = (rem.numerator.rows(), rem.numerator.cols());
    let values = node_values(rem, n);
    let peak = values.iter().map(max_abs).fold(0.0, f64::max);
    if !peak.is_finite() {
        return Err(Error::AliasingNotConverged { nodes: n });
    }
    let mut out = vec![CMat::zeros(rows, cols); width];
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for r in 0..rows {
        for c in 0..cols {
            for (slot, v) in buf.iter_mut().zip(&values) {
                *slot = v[(r, c)];
            }
            fft::forward(&mut buf);
            for (i, m) in out.iter_mut().enumerate() {
                let j = j_min + i as i64;
                m[(r, c)] = buf[j.rem_euclid(n as i64) as usize] / n as f64;
            }
        }
    }
    Ok((out, peak))
}

/// Power-series coefficients M_0..M_{j_max} from P_0 M_j = Q̃_j − Σ_{k≥1} P_k M_{j−k};
/// requires det P to have no zero in the closed unit disk.
pub fn causal_coeffs(p: &MatrixPoly, qt: &MatrixPoly, j_max: i64, tol: &Tolerances) -> Result<LaurentSeries> {
    let det = det_poly(p)?.trim_relative(tol.poly_zero);
    if det.is_zero() {
        return Err(Error::SingularPolynomial);
    }
    if det.degree().unwrap_or(0) > 0 {
        for r in roots_with_multiplicity(&det, tol.root_cluster)? {
            if tol.classify_modulus(r.value.norm()) != CirclePosition::Outside {
                return Err(Error::RootInsideDisk { root: r.value });
            }
        }
    }
    let p0_inv = inverse(&p.coeff(0))?;
    let count = usize::try_from(j_max + 1).unwrap_or(0);
    let mut out: Vec<CMat> = Vec::with_capacity(count);
    for j in 0..count {
        let mut rhs = qt.coeff(j);
        for k in 1..=j.min(p.degree().unwrap_or(0)) {
            rhs -= p.coeff(k) * &out[j - k];
        }
        out.push(&p0_inv * rhs);
    }
    let rates = decay_rates(&det, tol)?;
    Ok(LaurentSeries::new(0, out, rates, 0))
}

/// max_j ‖Σ_k P_k M_{j−k} − Q̃_j‖ over window indices whose full history lies
/// in the window.
pub fn convolution_residual(p: &MatrixPoly, qt: &MatrixPoly, series: &LaurentSeries) -> f64 {
    let deg = p.degree().unwrap_or(0) as i64;
    let zero = CMat::zeros(qt.rows(), qt.cols());
    let mut worst: f64 = 0.0;
    for j in series.j_min() + deg..=series.j_max() {
        let mut acc = match usize::try_from(j) {
            Ok(k) => -qt.coeff(k),
            Err(_) => -zero.clone(),
        };
        for k in 0..=deg {
            if let Some(m) = series.get(j - k) {
                acc += p.coeff(k as usize) * m;
            }
        }
        worst = worst.max(max_abs(&acc));
    }
    worst
}
