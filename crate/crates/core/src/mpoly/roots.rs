use alloc::vec::Vec;

use num_complex::Complex64;

use super::cpoly::CPoly;
use crate::error::{Error, Result};
use crate::linalg::{c, eigenvalues, CMat, ONE};

/// A root together with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Stage-one clusters closer than this (relative to max(1, |z|)) are merge
/// candidates for a multiple root.
const MERGE_RADIUS: f64 = 1e-2;
/// Relative size below which Taylor coefficients count as vanishing when
/// validating a merged cluster.
const MULTIPLICITY_CHECK: f64 = 1e-9;

/// Roots of `p` with multiplicities.
///
/// Eigenvalues of the companion matrix are clustered at `tol`; neighbouring
/// clusters are then merged when the merged mean is a numerically exact
/// multiple root, and each cluster mean is polished by Newton steps on the
/// appropriate derivative.
pub fn roots_with_multiplicity(p: &CPoly, tol: f64) -> Result<Vec<Root>> {
    let Some(n) = p.degree() else {
        return Err(Error::ZeroPolynomial);
    };
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = p.leading();
    let mut companion = CMat::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = ONE;
    }
    for i in 0..n {
        companion[(i, n - 1)] = -p.coeff(i) / lead;
    }
    let eigs = eigenvalues(&companion)?;

    let stage_one = link_clusters(&eigs, |a, b| (a - b).norm() <= tol * 1f64.max(a.norm()));
    let mut clusters: Vec<Vec<Complex64>> = stage_one
        .into_iter()
        .map(|idx| idx.into_iter().map(|i| eigs[i]).collect())
        .collect();

    // merge pass
    let means: Vec<Complex64> = clusters.iter().map(|cl| mean(cl)).collect();
    let groups = link_clusters(&means, |a, b| (a - b).norm() <= MERGE_RADIUS * 1f64.max(a.norm()));
    let mut merged: Vec<Vec<Complex64>> = Vec::new();
    for group in groups {
        if group.len() == 1 {
            merged.push(core::mem::take(&mut clusters[group[0]]));
            continue;
        }
        let all: Vec<Complex64> = group.iter().flat_map(|&g| clusters[g].iter().copied()).collect();
        if is_multiple_root(p, mean(&all), all.len()) {
            merged.push(all);
        } else {
            for g in group {
                merged.push(core::mem::take(&mut clusters[g]));
            }
        }
    }

    let mut roots: Vec<Root> = merged
        .into_iter()
        .map(|cl| {
            let k = cl.len();
            Root {
                value: polish(p, mean(&cl), k),
                multiplicity: k,
            }
        })
        .collect();
    roots.sort_by(|a, b| {
        a.value
            .norm()
            .total_cmp(&b.value.norm())
            .then(a.value.arg().total_cmp(&b.value.arg()))
    });
    Ok(roots)
}

fn mean(zs: &[Complex64]) -> Complex64 {
    zs.iter().sum::<Complex64>() / zs.len() as f64
}

/// Single-linkage components under `close`.
fn link_clusters(points: &[Complex64], close: impl Fn(Complex64, Complex64) -> bool) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if close(points[i], points[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut label: Vec<Option<usize>> = alloc::vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match label[r] {
            Some(g) => groups[g].push(i),
            None => {
                label[r] = Some(groups.len());
                groups.push(alloc::vec![i]);
            }
        }
    }
    groups
}

/// Whether the Taylor coefficients of orders 0..k-1 at `z` all vanish
/// relative to the matching coefficients of |p|.
fn is_multiple_root(p: &CPoly, z: Complex64, k: usize) -> bool {
    let taylor = p.taylor_at(z, k);
    let abs_poly = CPoly::new(p.coeffs().iter().map(|a| c(a.norm(), 0.0)).collect());
    let scale = abs_poly.taylor_at(c(z.norm(), 0.0), k);
    taylor
        .iter()
        .zip(scale.iter())
        .all(|(t, s)| t.norm() <= MULTIPLICITY_CHECK * s.norm().max(f64::MIN_POSITIVE))
}

/// Newton on p^{(k-1)}, which has a simple root at a k-fold root of p.
fn polish(p: &CPoly, start: Complex64, k: usize) -> Complex64 {
    let mut g = p.clone();
    for _ in 1..k {
        g = g.derivative();
    }
    let dg = g.derivative();
    let mut z = start;
    let mut best = g.eval(z).norm();
    for _ in 0..8 {
        let d = dg.eval(z);
        if d.norm() == 0.0 {
            break;
        }
        let next = z - g.eval(z) / d;
        let val = g.eval(next).norm();
        if val.is_nan() || val >= best || (next - start).norm() > MERGE_RADIUS * 1f64.max(start.norm()) {
            break;
        }
        z = next;
        best = val;
    }
    z
}
