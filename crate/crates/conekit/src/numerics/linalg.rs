//! Dense row-major matrices and the spectral routines used across the crate.
//!
//! Everything here targets desk-scale problems (up to 512 columns or rows);
//! the SVD is a one-sided Jacobi iteration, which keeps small singular
//! values at high relative accuracy.

use super::NumericsError;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn scale_vec(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn vec_sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Normalizes a copy of `a`, or returns `None` when `a` is numerically zero.
pub fn normalized(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm2(a);
    if n <= 1e-300 {
        None
    } else {
        Some(scale_vec(a, 1.0 / n))
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> f64>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        assert!(!rows.is_empty(), "matrix needs at least one row");
        let cols = rows[0].len();
        assert!(
            rows.iter().all(|r| r.len() == cols),
            "ragged rows in matrix literal"
        );
        Mat {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Mat::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// A x for x of length `cols`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// A^T y for y of length `rows`.
    pub fn tr_matvec(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.rows, "tr_matvec dimension mismatch");
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let yi = y[i];
            let row = self.row(i);
            for (o, a) in out.iter_mut().zip(row) {
                *o += yi * a;
            }
        }
        out
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        Mat::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum()
        })
    }

    /// Rank-one matrix u v^T.
    pub fn outer(u: &[f64], v: &[f64]) -> Mat {
        Mat::from_fn(u.len(), v.len(), |i, j| u[i] * v[j])
    }

    pub fn scaled(&self, s: f64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.scaled(-1.0))
    }

    pub fn frob_norm(&self) -> f64 {
        norm2(&self.data)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0.0)
    }
}

/// All `min(rows, cols)` singular values in descending order.
pub fn sv_spectrum(a: &Mat) -> Vec<f64> {
    let thin = if a.rows() >= a.cols() {
        a.clone()
    } else {
        a.transpose()
    };
    let (mut cols, _) = jacobi_columns(&thin, false);
    let mut values: Vec<f64> = cols.iter_mut().map(|c| norm2(c)).collect();
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    values
}

/// Thin SVD A = U diag(values) V^T with values descending; U is n-by-r and
/// V is m-by-r for r = min(n, m). Columns of U belonging to numerically
/// zero singular values are zero vectors.
pub fn svd(a: &Mat) -> (Vec<f64>, Mat, Mat) {
    let tall = a.rows() >= a.cols();
    let thin = if tall { a.clone() } else { a.transpose() };
    let (cols, rot) = jacobi_columns(&thin, true);
    let rot = rot.expect("rotations requested");
    let r = cols.len();
    let mut order: Vec<usize> = (0..r).collect();
    let norms: Vec<f64> = cols.iter().map(|c| norm2(c)).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let scale = values.first().copied().unwrap_or(0.0).max(1e-300);
    let left = Mat::from_fn(thin.rows(), r, |i, jj| {
        let j = order[jj];
        if norms[j] > 1e-15 * scale {
            cols[j][i] / norms[j]
        } else {
            0.0
        }
    });
    let right = Mat::from_fn(thin.cols(), r, |i, jj| rot[order[jj]][i]);
    if tall {
        (values, left, right)
    } else {
        (values, right, left)
    }
}

/// One-sided Jacobi sweep engine. Returns the rotated columns and, when
/// requested, the accumulated right-rotation columns (V of the thin input).
fn jacobi_columns(thin: &Mat, want_rotations: bool) -> (Vec<Vec<f64>>, Option<Vec<Vec<f64>>>) {
    let m = thin.cols();
    let mut cols: Vec<Vec<f64>> = (0..m).map(|j| thin.col(j)).collect();
    let mut rot: Option<Vec<Vec<f64>>> = if want_rotations {
        Some(
            (0..m)
                .map(|j| {
                    let mut e = vec![0.0; m];
                    e[j] = 1.0;
                    e
                })
                .collect(),
        )
    } else {
        None
    };
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..m.saturating_sub(1) {
            for q in p + 1..m {
                let (cp, cq) = split_two(&mut cols, p, q);
                let alpha = dot(cp, cp);
                let beta = dot(cq, cq);
                let gamma = dot(cp, cq);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..cp.len() {
                    let xp = cp[i];
                    let xq = cq[i];
                    cp[i] = c * xp - s * xq;
                    cq[i] = s * xp + c * xq;
                }
                if let Some(rot) = rot.as_mut() {
                    let (rp, rq) = split_two(rot, p, q);
                    for i in 0..rp.len() {
                        let xp = rp[i];
                        let xq = rq[i];
                        rp[i] = c * xp - s * xq;
                        rq[i] = s * xp + c * xq;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (cols, rot)
}

fn split_two<T>(v: &mut [T], p: usize, q: usize) -> (&mut T, &mut T) {
    debug_assert!(p < q);
    let (lo, hi) = v.split_at_mut(q);
    (&mut lo[p], &mut hi[0])
}

/// Largest singular value.
pub fn operator_norm(a: &Mat) -> f64 {
    sv_spectrum(a).first().copied().unwrap_or(0.0)
}

/// max{sigma(A), sigma(A^T)} where sigma is the smallest singular value of
/// the map; equals the last entry of the singular spectrum.
pub fn smallest_sv(a: &Mat) -> f64 {
    sv_spectrum(a).last().copied().unwrap_or(0.0)
}

/// Condition number ||A|| / max{sigma(A), sigma(A^T)}; infinity when the
/// spectrum is rank deficient.
pub fn kappa(a: &Mat) -> Result<f64, NumericsError> {
    if a.is_zero() {
        return Err(NumericsError::KappaZeroMatrix);
    }
    let spectrum = sv_spectrum(a);
    let smax = spectrum[0];
    let smin = *spectrum.last().unwrap();
    let dim = a.rows().max(a.cols()) as f64;
    if smin <= smax * dim * 1e-14 {
        return Ok(f64::INFINITY);
    }
    Ok(smax / smin)
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Returns `None` when A is numerically singular.
pub fn solve(a: &Mat, b: &[f64]) -> Option<Vec<f64>> {
    assert_eq!(a.rows(), a.cols(), "solve needs a square matrix");
    assert_eq!(a.rows(), b.len());
    let n = a.rows();
    let mut aug = Mat::from_fn(n, n + 1, |i, j| if j < n { a.get(i, j) } else { b[i] });
    for k in 0..n {
        let mut piv = k;
        for i in k + 1..n {
            if aug.get(i, k).abs() > aug.get(piv, k).abs() {
                piv = i;
            }
        }
        if aug.get(piv, k).abs() < 1e-300 {
            return None;
        }
        if piv != k {
            for j in 0..=n {
                let tmp = aug.get(k, j);
                aug.set(k, j, aug.get(piv, j));
                aug.set(piv, j, tmp);
            }
        }
        let d = aug.get(k, k);
        for i in k + 1..n {
            let factor = aug.get(i, k) / d;
            if factor == 0.0 {
                continue;
            }
            for j in k..=n {
                let v = aug.get(i, j) - factor * aug.get(k, j);
                aug.set(i, j, v);
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = aug.get(i, n);
        for j in i + 1..n {
            acc -= aug.get(i, j) * x[j];
        }
        x[i] = acc / aug.get(i, i);
    }
    Some(x)
}

/// Orthonormal basis for the span of the given vectors, via modified
/// Gram-Schmidt with one reorthogonalization pass.
pub fn orthonormal_basis(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let n = norm2(&w);
        if n > tol * (1.0 + norm2(v)) {
            basis.push(scale_vec(&w, 1.0 / n));
        }
    }
    basis
}
