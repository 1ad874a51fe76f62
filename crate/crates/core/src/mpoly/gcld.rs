use alloc::vec::Vec;

use super::cpoly::CPoly;
use super::matrix::{det_poly, MatrixPoly};
use crate::error::{Error, Result};

/// A greatest common left divisor R of (P, Q) with P = R·P1 and Q = R·Q1.
#[derive(Clone, Debug)]
pub struct Gcld {
    pub divisor: MatrixPoly,
    pub p_factor: MatrixPoly,
    pub q_factor: MatrixPoly,
}

const MAX_REDUCTION_STEPS: usize = 100_000;

/// Column compression of the compound block [P Q] to [R 0].
///
/// Elementary column operations (swaps and subtraction of polynomial
/// multiples of a pivot column) run the Euclidean algorithm along each row,
/// pivoting on the lowest-degree entry and, among equal degrees, on the
/// largest leading coefficient. The inverse of the accumulated unimodular
/// transform is carried along, so the cofactors come out as its leading rows.
/// Coefficients at or below `rel_tol` times the largest input coefficient are
/// treated as zero.
pub fn gcld(p: &MatrixPoly, q: &MatrixPoly, rel_tol: f64) -> Result<Gcld> {
    if !p.is_square() {
        return Err(Error::NotSquare {
            rows: p.rows(),
            cols: p.cols(),
        });
    }
    let m = p.rows();
    if q.rows() != m {
        return Err(Error::DimensionMismatch {
            what: "gcld right operand rows",
            expected: m,
            found: q.rows(),
        });
    }
    if det_poly(p)?.trim_relative(rel_tol).is_zero() {
        return Err(Error::SingularPolynomial);
    }
    let d = q.cols();
    let n = m + d;
    let abs_tol = rel_tol * p.max_coeff().max(q.max_coeff());

    // work[i][j]: entry (i, j) of the compound block
    let mut work: Vec<Vec<CPoly>> = (0..m)
        .map(|i| {
            (0..n)
                .map(|j| if j < m { p.entry(i, j) } else { q.entry(i, j - m) })
                .collect()
        })
        .collect();
    let mut inv: Vec<Vec<CPoly>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { CPoly::one() } else { CPoly::zero() }).collect())
        .collect();

    let mut steps = 0;
    for i in 0..m {
        loop {
            steps += 1;
            if steps > MAX_REDUCTION_STEPS {
                return Err(Error::NoConvergence("gcld column reduction"));
            }
            for entry in &mut work[i][i..n] {
                *entry = entry.trim(abs_tol);
            }
            let live: Vec<usize> = (i..n).filter(|&j| !work[i][j].is_zero()).collect();
            let Some(&first) = live.first() else {
                return Err(Error::RankDeficient);
            };
            if live.len() == 1 {
                swap_columns(&mut work, &mut inv, i, first);
                break;
            }
            let pivot = *live
                .iter()
                .min_by(|&&a, &&b| {
                    let (pa, pb) = (&work[i][a], &work[i][b]);
                    pa.degree()
                        .cmp(&pb.degree())
                        .then(pb.leading().norm().total_cmp(&pa.leading().norm()))
                })
                .expect("live is nonempty");
            for &k in live.iter().filter(|&&k| k != pivot) {
                let (quot, rem) = work[i][k].div_rem(&work[i][pivot]);
                for row in work.iter_mut() {
                    let updated = &row[k] - &(&row[pivot] * &quot);
                    row[k] = updated.trim(abs_tol);
                }
                work[i][k] = rem.trim(abs_tol);
                let (row_pivot, row_k) = if pivot < k {
                    let (head, tail) = inv.split_at_mut(k);
                    (&mut head[pivot], &tail[0])
                } else {
                    let (head, tail) = inv.split_at_mut(pivot);
                    (&mut tail[0], &head[k])
                };
                for (target, source) in row_pivot.iter_mut().zip(row_k.iter()) {
                    *target = &*target + &(source * &quot);
                }
            }
        }
    }

    let pick = |rows: core::ops::Range<usize>, cols: core::ops::Range<usize>, src: &Vec<Vec<CPoly>>| {
        let (r, c) = (rows.len(), cols.len());
        let entries: Vec<CPoly> = rows
            .flat_map(|i| cols.clone().map(move |j| (i, j)))
            .map(|(i, j)| src[i][j].clone())
            .collect();
        MatrixPoly::from_entries(r, c, &entries)
    };
    Ok(Gcld {
        divisor: pick(0..m, 0..m, &work),
        p_factor: pick(0..m, 0..m, &inv),
        q_factor: pick(0..m, m..n, &inv),
    })
}

fn swap_columns(work: &mut [Vec<CPoly>], inv: &mut [Vec<CPoly>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in work.iter_mut() {
        row.swap(a, b);
    }
    inv.swap(a, b);
}

/// Constant nonzero determinant, up to `rel_tol`.
pub fn is_unimodular(r: &MatrixPoly, rel_tol: f64) -> Result<bool> {
    let det = det_poly(r)?;
    let scale = libm::pow(r.max_coeff(), r.rows() as f64);
    if det.max_coeff() <= rel_tol * scale {
        return Ok(false);
    }
    Ok(det.trim_relative(rel_tol).degree() == Some(0))
}

pub fn are_left_coprime(p: &MatrixPoly, q: &MatrixPoly, rel_tol: f64) -> Result<bool> {
    is_unimodular(&gcld(p, q, rel_tol)?.divisor, rel_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, identity, real_matrix, CMat};
    use crate::mpoly::matrix::max_coeff_diff;
    use alloc::vec;

    const TOL: f64 = 1e-9;

    fn scalar_poly(coeffs: &[f64]) -> MatrixPoly {
        MatrixPoly::new(1, 1, coeffs.iter().map(|&x| real_matrix(1, 1, &[x])).collect()).unwrap()
    }

    fn unit_pole_pair() -> (MatrixPoly, MatrixPoly) {
        let p = MatrixPoly::autoregressive(&[identity(2)]).unwrap();
        let q = MatrixPoly::moving_average(&[identity(2), real_matrix(2, 2, &[-1.0, 0.0, 1.0, -1.0])]).unwrap();
        (p, q)
    }

    fn check_factorization(p: &MatrixPoly, q: &MatrixPoly, g: &Gcld) {
        for k in 0..20 {
            let z = num_complex::Complex64::from_polar(1.0, 0.31 * k as f64 + 0.1);
            let rp = g.divisor.eval(z) * g.p_factor.eval(z);
            let rq = g.divisor.eval(z) * g.q_factor.eval(z);
            assert!(crate::linalg::max_abs(&(p.eval(z) - rp)) < 1e-8);
            assert!(crate::linalg::max_abs(&(q.eval(z) - rq)) < 1e-8);
        }
    }

    #[test]
    fn coprime_scalars() {
        let p = scalar_poly(&[1.0, -0.5]);
        let q = scalar_poly(&[1.0]);
        let g = gcld(&p, &q, TOL).unwrap();
        assert_eq!(g.divisor.degree(), Some(0));
        assert!(is_unimodular(&g.divisor, TOL).unwrap());
        check_factorization(&p, &q, &g);
        assert!(are_left_coprime(&p, &q, TOL).unwrap());
    }

    #[test]
    fn unit_root_pair_shares_a_factor() {
        let (p, q) = unit_pole_pair();
        let g = gcld(&p, &q, TOL).unwrap();
        let det = det_poly(&g.divisor).unwrap().trim_relative(TOL);
        assert_eq!(det.degree(), Some(1));
        // the shared factor vanishes at z = 1
        assert!(det.eval(c(1.0, 0.0)).norm() < 1e-10);
        check_factorization(&p, &q, &g);
        assert!(!are_left_coprime(&p, &q, TOL).unwrap());
    }

    #[test]
    fn common_factor_roundtrip() {
        let p0 = MatrixPoly::new(
            2,
            2,
            vec![identity(2), real_matrix(2, 2, &[-0.3, 0.1, 0.2, 0.4])],
        )
        .unwrap();
        let q0 = MatrixPoly::new(2, 1, vec![real_matrix(2, 1, &[1.0, 0.5]), real_matrix(2, 1, &[0.2, -0.7])]).unwrap();
        let factor = scalar_poly(&[1.0, -1.0]);
        let p = p0.scale_poly(&factor.entry(0, 0));
        let q = q0.scale_poly(&factor.entry(0, 0));
        let g = gcld(&p, &q, TOL).unwrap();
        let det = det_poly(&g.divisor).unwrap();
        let roots = crate::mpoly::roots_with_multiplicity(&det.trim_relative(TOL), 1e-7).unwrap();
        assert!(roots.iter().any(|r| (r.value - c(1.0, 0.0)).norm() < 1e-6));
        check_factorization(&p, &q, &g);
    }

    #[test]
    fn p_equal_q_is_not_coprime() {
        let p = MatrixPoly::new(2, 2, vec![identity(2), real_matrix(2, 2, &[-0.5, 0.0, 0.3, -0.2])]).unwrap();
        assert!(!are_left_coprime(&p, &p, TOL).unwrap());
    }

    #[test]
    fn unimodular_examples() {
        assert!(is_unimodular(&MatrixPoly::identity(3), TOL).unwrap());
        let diag = MatrixPoly::new(2, 2, vec![identity(2), real_matrix(2, 2, &[-1.0, 0.0, 0.0, 0.0])]).unwrap();
        assert!(!is_unimodular(&diag, TOL).unwrap());
        // elementary column operations applied to the identity
        let e1 = MatrixPoly::new(
            3,
            3,
            vec![identity(3), real_matrix(3, 3, &[0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])],
        )
        .unwrap();
        let e2 = MatrixPoly::new(
            3,
            3,
            vec![identity(3), CMat::zeros(3, 3), real_matrix(3, 3, &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.5, 0.0, 0.0])],
        )
        .unwrap();
        let prod = e1.mul(&e2).unwrap();
        assert!(is_unimodular(&prod, TOL).unwrap());
        assert!(max_coeff_diff(&prod, &prod) == 0.0);
    }

    #[test]
    fn singular_p_is_rejected() {
        let p = MatrixPoly::constant(real_matrix(2, 2, &[1.0, 1.0, 1.0, 1.0]));
        let q = MatrixPoly::identity(2);
        assert!(matches!(gcld(&p, &q, TOL), Err(Error::SingularPolynomial)));
    }
}
