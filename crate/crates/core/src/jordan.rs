//! Numerical Jordan form with ones on the first subdiagonal of each block.
//!
//! A chain s_1, …, s_n of a block satisfies A s_i = λ s_i + s_{i+1} and
//! A s_n = λ s_n, so S⁻¹AS carries its ones below the diagonal.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, identity, inverse, mat_pow, null_space_with_rank, svd_full, CMat, ONE, ZERO};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JordanBlock {
    pub lambda: Complex64,
    pub size: usize,
    /// Zero-based index of the first row of the block.
    pub start: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JordanForm {
    s: CMat,
    s_inv: CMat,
    blocks: Vec<JordanBlock>,
    residual: f64,
    tol: f64,
}

/// Clusters this close (relative to max(1, |λ|)) are candidates for one
/// defective eigenvalue.
const MERGE_RADIUS: f64 = 1e-2;
/// Relative size below which the singular values of (A − λ̄)^k count as zero
/// when validating a merge.
const MERGE_CHECK: f64 = 1e-12;

impl JordanForm {
    /// Wraps a known decomposition of `a`, reporting its residual.
    pub fn from_parts(a: &CMat, s: CMat, blocks: Vec<JordanBlock>, tol: f64) -> Result<Self> {
        let m = a.nrows();
        if !a.is_square() {
            return Err(Error::NotSquare {
                rows: a.nrows(),
                cols: a.ncols(),
            });
        }
        if s.shape() != (m, m) {
            return Err(Error::DimensionMismatch {
                what: "Jordan similarity size",
                expected: m,
                found: s.nrows(),
            });
        }
        let mut next = 0;
        for b in &blocks {
            if b.start != next || b.size == 0 {
                return Err(Error::InvalidModel(alloc::format!(
                    "Jordan block starting at row {} does not continue the partition at row {next}",
                    b.start
                )));
            }
            next += b.size;
        }
        if next != m {
            return Err(Error::DimensionMismatch {
                what: "total Jordan block size",
                expected: m,
                found: next,
            });
        }
        let s_inv = inverse(&s).map_err(|_| Error::IllConditionedJordan { residual: f64::INFINITY })?;
        let mut form = Self {
            s,
            s_inv,
            blocks,
            residual: 0.0,
            tol,
        };
        form.residual = form.reconstruction_residual(a);
        Ok(form)
    }

    /// Same as [`JordanForm::from_parts`] for a similarity whose blocks carry
    /// their ones above the diagonal.
    pub fn from_upper(a: &CMat, s_upper: CMat, blocks: Vec<JordanBlock>, tol: f64) -> Result<Self> {
        let s = reverse_within_blocks(&s_upper, &blocks);
        Self::from_parts(a, s, blocks, tol)
    }

    /// Similarity putting the ones above the diagonal instead.
    pub fn upper_similarity(&self) -> CMat {
        reverse_within_blocks(&self.s, &self.blocks)
    }

    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    pub fn s(&self) -> &CMat {
        &self.s
    }

    pub fn s_inv(&self) -> &CMat {
        &self.s_inv
    }

    pub fn blocks(&self) -> &[JordanBlock] {
        &self.blocks
    }

    /// ‖S J S⁻¹ − A‖_F / ‖A‖_F at construction.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn j_matrix(&self) -> CMat {
        let mut j = CMat::zeros(self.dim(), self.dim());
        for b in &self.blocks {
            j.view_mut((b.start, b.start), (b.size, b.size))
                .copy_from(&block_power(b.lambda, b.size, 1).expect("positive power"));
        }
        j
    }

    /// Rows `start..start+size` of the identity for block `h`.
    pub fn block_selector(&self, h: usize) -> Result<CMat> {
        let b = self.blocks.get(h).ok_or(Error::IndexOutOfRange {
            index: h,
            len: self.blocks.len(),
        })?;
        Ok(CMat::from_fn(b.size, self.dim(), |i, j| if j == i + b.start { ONE } else { ZERO }))
    }

    fn reconstruction_residual(&self, a: &CMat) -> f64 {
        let diff = &self.s * self.j_matrix() * &self.s_inv - a;
        let scale = a.norm();
        if scale == 0.0 {
            diff.norm()
        } else {
            diff.norm() / scale
        }
    }
}

fn reverse_within_blocks(s: &CMat, blocks: &[JordanBlock]) -> CMat {
    let mut out = s.clone();
    for b in blocks {
        for i in 0..b.size {
            out.set_column(b.start + i, &s.column(b.start + b.size - 1 - i));
        }
    }
    out
}

/// Φ^j for the lower Jordan block of size `size`: entry (i, i−l) equals
/// C(j, l)·λ^{j−l}, with generalized binomials for negative j.
pub fn block_power(lambda: Complex64, size: usize, j: i64) -> Result<CMat> {
    if j < 0 && lambda == ZERO {
        return Err(Error::SingularBlockPower);
    }
    let mut out = CMat::zeros(size, size);
    for l in 0..size {
        let mut binom = 1.0;
        for r in 0..l {
            binom *= (j - r as i64) as f64 / (r + 1) as f64;
        }
        if binom == 0.0 {
            continue;
        }
        let value = lambda.powi((j - l as i64) as i32) * binom;
        for i in l..size {
            out[(i, i - l)] = value;
        }
    }
    Ok(out)
}

/// Jordan decomposition of `a` with eigenvalue clustering radius `tol`
/// (relative to max(1, |λ|)); fails when the reconstruction residual exceeds
/// `residual_limit`.
pub fn jordan_decompose(a: &CMat, tol: f64, residual_limit: f64) -> Result<JordanForm> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let m = a.nrows();
    let eigs = eigenvalues(a)?;
    let scale = a.norm().max(1.0);

    let close = |x: Complex64, y: Complex64, radius: f64| (x - y).norm() <= radius * 1f64.max(x.norm());
    let stage_one: Vec<Vec<Complex64>> = link(&eigs, |x, y| close(x, y, tol))
        .into_iter()
        .map(|g| g.into_iter().map(|i| eigs[i]).collect())
        .collect();
    let means: Vec<Complex64> = stage_one.iter().map(|c| mean(c)).collect();
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for group in link(&means, |x, y| close(x, y, MERGE_RADIUS)) {
        let all: Vec<Complex64> = group.iter().flat_map(|&g| stage_one[g].iter().copied()).collect();
        let lambda = mean(&all);
        if group.len() > 1 && generalized_nullity(a, lambda, all.len(), MERGE_CHECK * libm::pow(scale, all.len() as f64))? >= all.len() {
            clusters.push((lambda, all.len()));
        } else {
            clusters.extend(group.iter().map(|&g| (means[g], stage_one[g].len())));
        }
    }
    clusters.sort_by(|x, y| x.0.norm().total_cmp(&y.0.norm()).then(x.0.arg().total_cmp(&y.0.arg())));

    let mut columns: Vec<nalgebra::DVector<Complex64>> = Vec::with_capacity(m);
    let mut blocks = Vec::new();
    for &(lambda, k) in &clusters {
        for chain in chains_for_eigenvalue(a, lambda, k, tol, scale)? {
            blocks.push(JordanBlock {
                lambda,
                size: chain.len(),
                start: columns.len(),
            });
            columns.extend(chain);
        }
    }
    let s = if m == 0 { CMat::zeros(0, 0) } else { CMat::from_columns(&columns) };
    let form = JordanForm::from_parts(a, s, blocks, tol)?;
    if form.residual.is_nan() || form.residual > residual_limit {
        return Err(Error::IllConditionedJordan { residual: form.residual });
    }
    Ok(form)
}

fn mean(zs: &[Complex64]) -> Complex64 {
    zs.iter().sum::<Complex64>() / zs.len() as f64
}

fn link(points: &[Complex64], close: impl Fn(Complex64, Complex64) -> bool) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut label: Vec<usize> = (0..n).collect();
    // naive relabeling suffices for matrix sizes handled here
    for i in 0..n {
        for j in i + 1..n {
            if close(points[i], points[j]) && label[i] != label[j] {
                let (keep, drop) = (label[i].min(label[j]), label[i].max(label[j]));
                for l in label.iter_mut() {
                    if *l == drop {
                        *l = keep;
                    }
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<Option<usize>> = alloc::vec![None; n];
    for i in 0..n {
        match seen[label[i]] {
            Some(g) => groups[g].push(i),
            None => {
                seen[label[i]] = Some(groups.len());
                groups.push(alloc::vec![i]);
            }
        }
    }
    groups
}

fn shifted(a: &CMat, lambda: Complex64) -> CMat {
    a - identity(a.nrows()) * lambda
}

/// Number of singular values of (A − λ)^power at or below `cut`.
fn generalized_nullity(a: &CMat, lambda: Complex64, power: usize, cut: f64) -> Result<usize> {
    let bk = mat_pow(&shifted(a, lambda), power);
    Ok(svd_full(&bk)?.singular_values.iter().filter(|&&s| s <= cut).count())
}

/// Jordan chains of the eigenvalue `lambda` with algebraic multiplicity `k`,
/// longest first; each chain is (v, Bv, …, B^{n−1}v) with B = A − λ.
fn chains_for_eigenvalue(a: &CMat, lambda: Complex64, k: usize, tol: f64, scale: f64) -> Result<Vec<Vec<nalgebra::DVector<Complex64>>>> {
    let m = a.nrows();
    let b = shifted(a, lambda);
    // nullity staircase n_0 = 0 ≤ n_1 ≤ … reaching k
    let mut nullity = alloc::vec![0usize];
    let mut power = b.clone();
    for i in 1..=k {
        let sv = svd_full(&power)?.singular_values;
        let count = sv.iter().filter(|&&s| s <= tol * libm::pow(scale, i as f64)).count();
        let prev = nullity[i - 1];
        let n_i = if i == k { k } else { count.clamp(prev + 1, k) };
        nullity.push(n_i);
        if n_i == k {
            break;
        }
        power = &power * &b;
    }
    let index = nullity.len() - 1;
    // blocks of size ≥ i: nullity[i] − nullity[i−1]
    let at_least = |i: usize| if i > index { 0 } else { nullity[i] - nullity[i - 1] };

    let kernel = |i: usize| -> Result<CMat> {
        if i == 0 {
            return Ok(CMat::zeros(m, 0));
        }
        null_space_with_rank(&mat_pow(&b, i), m - nullity[i])
    };

    let mut tops: Vec<(nalgebra::DVector<Complex64>, usize)> = Vec::new();
    for level in (1..=index).rev() {
        let exact = at_least(level) - at_least(level + 1);
        if exact == 0 {
            continue;
        }
        let mut span: Vec<nalgebra::DVector<Complex64>> = kernel(level - 1)?.column_iter().map(|c| c.into_owned()).collect();
        for (v, size) in &tops {
            span.push(mat_pow(&b, size - level) * v);
        }
        let basis = orthonormalize(&span, m);
        let w = kernel(level)?;
        let projected = &w - &basis * (basis.adjoint() * &w);
        let fresh = svd_full(&projected)?.u;
        for t in 0..exact {
            tops.push((fresh.column(t).into_owned(), level));
        }
    }
    Ok(tops
        .into_iter()
        .map(|(v, size)| {
            let mut chain = Vec::with_capacity(size);
            let mut cur = v;
            for _ in 0..size {
                let next = &b * &cur;
                chain.push(cur);
                cur = next;
            }
            chain
        })
        .collect())
}

/// Orthonormal basis of the span of `vectors` (numerically dependent ones dropped).
fn orthonormalize(vectors: &[nalgebra::DVector<Complex64>], n: usize) -> CMat {
    let mut basis: Vec<nalgebra::DVector<Complex64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let p = q.dotc(&w);
                w -= q * p;
            }
        }
        let norm = w.norm();
        if norm > 1e-10 * v.norm().max(f64::MIN_POSITIVE) {
            basis.push(w / Complex64::new(norm, 0.0));
        }
    }
    if basis.is_empty() {
        CMat::zeros(n, 0)
    } else {
        CMat::from_columns(&basis)
    }
}
