//! Dense complex linear algebra.
//!
//! Matrices are stored row-major. The SVD is one-sided (Hestenes) Jacobi on
//! columns; the Hermitian eigensolver is two-sided cyclic Jacobi. The two
//! share no code path, so spectra obtained through them check each other.

use std::ops::{Index, IndexMut};

use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return invalid("matrix dimensions must be positive");
        }
        if data.len() != rows * cols {
            return invalid(format!("{} entries cannot fill a {rows}x{cols} matrix", data.len()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Real diagonal matrix.
    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(x, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (r2, c2) = (other.rows, other.cols);
        CMatrix::from_fn(self.rows * r2, self.cols * c2, |i, j| self[(i / r2, j / c2)] * other[(i % r2, j % c2)])
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Multiply each row `i` by `s[i]`.
    pub fn scale_rows(&self, s: &[f64]) -> CMatrix {
        assert_eq!(s.len(), self.rows);
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * s[i])
    }

    /// Multiply each column `j` by `s[j]`.
    pub fn scale_cols(&self, s: &[f64]) -> CMatrix {
        assert_eq!(s.len(), self.cols);
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * s[j])
    }

    /// First `k` columns.
    pub fn take_cols(&self, k: usize) -> CMatrix {
        CMatrix::from_fn(self.rows, k, |i, j| self[(i, j)])
    }

    /// First `k` rows.
    pub fn take_rows(&self, k: usize) -> CMatrix {
        CMatrix { rows: k, cols: self.cols, data: self.data[..k * self.cols].to_vec() }
    }

    /// Reinterpret the row-major data with new dimensions.
    pub fn reshaped(self, rows: usize, cols: usize) -> Result<CMatrix> {
        CMatrix::from_vec(rows, cols, self.data)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Thin singular value decomposition `m = u · diag(s) · vdag`.
#[derive(Clone, Debug)]
pub struct SvdResult {
    /// `rows × r`, orthonormal columns.
    pub u: CMatrix,
    /// Descending, nonnegative, length `r = min(rows, cols)`.
    pub s: Vec<f64>,
    /// `r × cols`, orthonormal rows.
    pub vdag: CMatrix,
}

impl SvdResult {
    pub fn rank(&self, tol: f64) -> usize {
        self.s.iter().take_while(|&&x| x > tol).count()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.u.scale_cols(&self.s).matmul(&self.vdag)
    }
}

/// Thin SVD by one-sided (Hestenes) Jacobi rotations on the columns of
/// `m` (or of `m†` when `m` is wide).
pub fn svd(m: &CMatrix) -> Result<SvdResult> {
    if !m.is_finite() {
        return invalid("svd input contains non-finite entries");
    }
    if m.rows < m.cols {
        let t = svd_tall(&m.adjoint())?;
        return Ok(SvdResult { u: t.vdag.adjoint(), s: t.s, vdag: t.u.adjoint() });
    }
    svd_tall(m)
}

/// Singular values only, descending. Skips the basis bookkeeping of [`svd`].
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    if !m.is_finite() {
        return invalid("svd input contains non-finite entries");
    }
    let t;
    let m = if m.rows < m.cols {
        t = m.adjoint();
        &t
    } else {
        m
    };
    let mut a = columns(m);
    orthogonalize_columns(&mut a, None)?;
    let mut s: Vec<f64> = a.iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

fn columns(m: &CMatrix) -> Vec<Vec<C64>> {
    (0..m.cols).map(|j| (0..m.rows).map(|i| m[(i, j)]).collect()).collect()
}

/// Rotates the columns of `a` until they are mutually orthogonal, applying
/// the same rotations to `v` when given.
fn orthogonalize_columns(a: &mut [Vec<C64>], mut v: Option<&mut [Vec<C64>]>) -> Result<()> {
    const MAX_SWEEPS: usize = 80;
    let cols = a.len();
    if cols <= 1 {
        return Ok(());
    }
    let sq = |col: &[C64]| col.iter().map(|z| z.norm_sqr()).sum::<f64>();
    for _ in 0..MAX_SWEEPS {
        // squared column norms, refreshed every sweep and updated per rotation
        let mut nrm: Vec<f64> = a.iter().map(|c| sq(c)).collect();
        // columns below round-off of the whole matrix are left alone, else
        // their noise keeps the sweep alive forever
        let floor = 1e-30 * nrm.iter().sum::<f64>();
        let mut rotated = false;
        for p in 0..cols - 1 {
            for q in p + 1..cols {
                let (alpha, beta) = (nrm[p], nrm[q]);
                if alpha <= floor || beta <= floor {
                    continue;
                }
                let gamma: C64 = a[p].iter().zip(&a[q]).map(|(x, y)| x.conj() * y).sum();
                let mag = gamma.norm();
                if mag <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / mag;
                let zeta = (beta - alpha) / (2.0 * mag);
                let t = if zeta == 0.0 { 1.0 } else { zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt()) };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let (jpp, jpq) = (C64::new(c, 0.0), C64::new(s, 0.0));
                let (jqp, jqq) = (-phase.conj() * s, phase.conj() * c);
                let rotate = |cols_of: &mut [Vec<C64>]| {
                    let (lo, hi) = cols_of.split_at_mut(q);
                    for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                        let (xp, xq) = (*x, *y);
                        *x = xp * jpp + xq * jqp;
                        *y = xp * jpq + xq * jqq;
                    }
                };
                rotate(a);
                if let Some(v) = v.as_deref_mut() {
                    rotate(v);
                }
                nrm[p] = (alpha - t * mag).max(0.0);
                nrm[q] = beta + t * mag;
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(Error::NumericalFailure(format!(
        "Jacobi SVD of {}x{cols} matrix did not converge in {MAX_SWEEPS} sweeps",
        a[0].len()
    )))
}

fn svd_tall(m: &CMatrix) -> Result<SvdResult> {
    let (rows, cols) = (m.rows, m.cols);
    // Columns of `a` are rotated until mutually orthogonal; `v` accumulates
    // the rotations.
    let mut a = columns(m);
    let mut v: Vec<Vec<C64>> =
        (0..cols).map(|j| (0..cols).map(|i| if i == j { ONE } else { ZERO }).collect()).collect();
    orthogonalize_columns(&mut a, Some(&mut v))?;

    let norms: Vec<f64> = a.iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let smax = norms[order[0]];
    let null_tol = 1e-13 * smax;

    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(cols);
    let mut null_slots = Vec::new();
    for (slot, &j) in order.iter().enumerate() {
        if norms[j] > null_tol && norms[j] > 0.0 {
            u_cols.push(a[j].iter().map(|z| z / norms[j]).collect());
        } else {
            u_cols.push(Vec::new());
            null_slots.push(slot);
        }
    }
    // Complete the left basis where singular values vanish. Rejected basis
    // vectors each keep less than 1/(2·rows) of their mass, so some
    // remaining candidate always clears this bar.
    let accept = (0.5 / rows as f64).sqrt();
    let mut candidate = 0;
    for slot in null_slots {
        loop {
            if candidate >= rows {
                return Err(Error::NumericalFailure("could not complete the left singular basis".into()));
            }
            let mut e = vec![ZERO; rows];
            e[candidate] = ONE;
            candidate += 1;
            for _ in 0..2 {
                for u in u_cols.iter().filter(|u| !u.is_empty()) {
                    let proj: C64 = u.iter().zip(&e).map(|(x, y)| x.conj() * y).sum();
                    e.iter_mut().zip(u).for_each(|(y, x)| *y -= proj * x);
                }
            }
            let norm = e.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > accept {
                u_cols[slot] = e.iter().map(|z| z / norm).collect();
                break;
            }
        }
    }

    let s = order.iter().map(|&j| norms[j]).collect();
    let u = CMatrix::from_fn(rows, cols, |i, k| u_cols[k][i]);
    let vdag = CMatrix::from_fn(cols, cols, |k, i| v[order[k]][i].conj());
    Ok(SvdResult { u, s, vdag })
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// Returns eigenvalues in descending order and the matching eigenvectors as
/// the columns of a unitary matrix.
pub fn eigh(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if m.rows != m.cols {
        return invalid(format!("eigh needs a square matrix, got {}x{}", m.rows, m.cols));
    }
    if !m.is_finite() {
        return invalid("eigh input contains non-finite entries");
    }
    let n = m.rows;
    let herm_tol = 1e-12 * m.max_abs().max(1.0);
    for i in 0..n {
        for j in i..n {
            if (m[(i, j)] - m[(j, i)].conj()).norm() > herm_tol {
                return invalid(format!("matrix is not Hermitian at ({i}, {j})"));
            }
        }
    }
    // Work on the exactly Hermitian part.
    let mut a = CMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()));
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm();

    const MAX_SWEEPS: usize = 100;
    let mut converged = n == 1 || scale == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NumericalFailure(format!("Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps")));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.total_cmp(&a[(x, x)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok((values, vectors))
}

/// Zero `a[(p, q)]` with the unitary `J` acting on columns `p`, `q`:
/// `a ← J† a J`, `v ← v J`.
fn jacobi_rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // J = D · R with D = diag(1, conj(phase)) on (p, q) and R the real
    // rotation [[c, s], [-s, c]].
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;
    let n = a.rows;
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
}

/// View a flat amplitude vector as a `left_dim × right_dim` matrix, entry
/// `(i, j)` taken from flat index `i·right_dim + j`.
pub fn reshape_to_matrix(amplitudes: &[C64], left_dim: usize, right_dim: usize) -> Result<CMatrix> {
    if left_dim == 0 || right_dim == 0 || amplitudes.len() != left_dim * right_dim {
        return invalid(format!("{} amplitudes cannot be reshaped to {left_dim}x{right_dim}", amplitudes.len()));
    }
    CMatrix::from_vec(left_dim, right_dim, amplitudes.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> CMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CMatrix::from_fn(rows, cols, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn orthonormality_error(cols_of: &CMatrix) -> f64 {
        let g = cols_of.adjoint().matmul(cols_of);
        g.sub(&CMatrix::identity(g.rows())).max_abs()
    }

    #[test]
    fn svd_identity() {
        let out = svd(&CMatrix::identity(2)).unwrap();
        assert_eq!(out.s.len(), 2);
        for s in &out.s {
            assert!((s - 1.0).abs() < 1e-14);
        }
        let uv = out.u.matmul(&out.vdag);
        assert!(uv.sub(&CMatrix::identity(2)).max_abs() < 1e-14);
    }

    #[test]
    fn svd_nilpotent() {
        let m = CMatrix::from_vec(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let out = svd(&m).unwrap();
        assert!((out.s[0] - 1.0).abs() < 1e-14);
        assert!(out.s[1].abs() < 1e-14);
    }

    #[test]
    fn svd_random_reconstruction() {
        for (rows, cols) in [(8, 6), (6, 8), (1, 5), (5, 1), (16, 16)] {
            let m = random_matrix(rows, cols, 42);
            let out = svd(&m).unwrap();
            let resid = out.reconstruct().sub(&m).frobenius_norm();
            assert!(resid < 1e-10 * m.frobenius_norm(), "{rows}x{cols}: {resid}");
            assert!(out.s.windows(2).all(|w| w[0] >= w[1]));
            assert!(orthonormality_error(&out.u) < 1e-10);
            assert!(orthonormality_error(&out.vdag.adjoint()) < 1e-10);
            let mass: f64 = out.s.iter().map(|s| s * s).sum();
            let fro2 = m.frobenius_norm().powi(2);
            assert!((mass - fro2).abs() < 1e-10 * fro2);
        }
    }

    #[test]
    fn svd_rank_deficient_outer_products() {
        let a = [c(0.6, 0.0), c(0.0, 0.8)];
        let b = [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(0.3, 0.1)];
        for (rows, cols) in [(2, 8), (8, 2), (4, 4)] {
            let m = CMatrix::from_fn(rows, cols, |i, j| a[i % 2] * b[j % 4] * (1.0 + (i / 2) as f64));
            let out = svd(&m).unwrap();
            assert_eq!(out.rank(1e-12 * out.s[0]), 1, "{rows}x{cols}");
            assert!(out.reconstruct().sub(&m).frobenius_norm() < 1e-12 * m.frobenius_norm());
            assert!(orthonormality_error(&out.u) < 1e-12);
            assert!(orthonormality_error(&out.vdag.adjoint()) < 1e-12);
        }
        let z = svd(&CMatrix::zeros(3, 2)).unwrap();
        assert_eq!(z.s, vec![0.0, 0.0]);
        assert!(orthonormality_error(&z.u) < 1e-15);
    }

    #[test]
    fn svd_rejects_nan() {
        let mut m = CMatrix::identity(2);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert!(matches!(svd(&m), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn eigh_diagonal_and_projector() {
        let (w, _) = eigh(&CMatrix::from_diag(&[0.25, 0.75])).unwrap();
        assert_eq!(w, vec![0.75, 0.25]);
        let p = CMatrix::from_fn(2, 2, |_, _| c(0.5, 0.0));
        let (w, _) = eigh(&p).unwrap();
        assert!((w[0] - 1.0).abs() < 1e-14 && w[1].abs() < 1e-14);
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let m = CMatrix::from_vec(2, 2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(eigh(&m), Err(Error::InvalidInput(_))));
        assert!(matches!(eigh(&CMatrix::zeros(2, 3)), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn eigh_random_hermitian() {
        let g = random_matrix(12, 12, 7);
        let h = g.add(&g.adjoint());
        let (w, v) = eigh(&h).unwrap();
        assert!(w.windows(2).all(|p| p[0] >= p[1]));
        assert!(orthonormality_error(&v) < 1e-10);
        let hv = h.matmul(&v);
        let vw = v.scale_cols(&w);
        assert!(hv.sub(&vw).frobenius_norm() < 1e-10 * h.frobenius_norm());
    }

    #[test]
    fn eigh_of_gram_matches_squared_singular_values() {
        let m = random_matrix(6, 9, 3);
        let rho = m.matmul(&m.adjoint());
        let (w, _) = eigh(&rho).unwrap();
        let s = svd(&m).unwrap().s;
        for (wk, sk) in w.iter().zip(&s) {
            assert!((wk - sk * sk).abs() < 1e-10);
        }
    }

    #[test]
    fn reshape_examples() {
        let v: Vec<C64> = (0..8).map(|k| c(k as f64, -(k as f64))).collect();
        let m = reshape_to_matrix(&v, 4, 2).unwrap();
        for i in 0..4 {
            for j in 0..2 {
                assert_eq!(m[(i, j)], v[i * 2 + j]);
            }
        }
        assert!(reshape_to_matrix(&v, 3, 3).is_err());
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let bell = [c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(r, 0.0)];
        let m = reshape_to_matrix(&bell, 2, 2).unwrap();
        assert!(m.sub(&CMatrix::identity(2).scale(c(r, 0.0))).max_abs() < 1e-15);
    }
}
