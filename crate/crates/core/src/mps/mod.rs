//! Open-boundary matrix product states in Vidal form.
//!
//! A state on `n` sites is stored as site tensors `Γ[k]` with index order
//! `(left bond, physical, right bond)` and bond spectra `λ[k]` between
//! sites `k` and `k + 1`:
//!
//! ```text
//! Γ[1] --λ[1]-- Γ[2] --λ[2]-- ... --λ[n-1]-- Γ[n]
//!  |             |                             |
//! ```
//!
//! In canonical gauge every `λ[k]` is the Schmidt spectrum of the cut after
//! site `k`, so entropies are read off without touching the tensors.

mod io;
mod periodic;

pub use periodic::{periodic_amplitude, periodic_to_dense, PeriodicMps};

use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::linalg::{svd, CMatrix};
use crate::state::{DenseState, SchmidtSpectrum, DISCARD_TOL};

/// Dense expansions are refused beyond this many amplitudes.
pub const MAX_DENSE_AMPLITUDES: usize = 1 << 24;

pub(crate) fn dense_guard(n: usize, d: usize) -> Result<usize> {
    let too_large = || Error::TooLarge(format!("{d}^{n} amplitudes exceed the 2^24 limit"));
    let len = u32::try_from(n).ok().and_then(|n| d.checked_pow(n)).ok_or_else(too_large)?;
    if len > MAX_DENSE_AMPLITUDES {
        return Err(too_large());
    }
    Ok(len)
}

/// Three-index tensor `T[l, i, r]`, row-major in `(l, i, r)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteTensor {
    left: usize,
    phys: usize,
    right: usize,
    data: Vec<C64>,
}

impl SiteTensor {
    pub fn new(left: usize, phys: usize, right: usize, data: Vec<C64>) -> Result<Self> {
        if left == 0 || phys == 0 || right == 0 || data.len() != left * phys * right {
            return Err(Error::CorruptMps(format!(
                "{} entries do not fill a {left}x{phys}x{right} tensor",
                data.len()
            )));
        }
        Ok(Self { left, phys, right, data })
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn phys(&self) -> usize {
        self.phys
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, l: usize, i: usize, r: usize) -> C64 {
        self.data[(l * self.phys + i) * self.right + r]
    }

    /// The `left × right` matrix for physical index `i`.
    pub fn slice(&self, i: usize) -> CMatrix {
        CMatrix::from_fn(self.left, self.right, |l, r| self.get(l, i, r))
    }

    /// `(left·phys) × right` view.
    fn left_matrix(&self) -> CMatrix {
        CMatrix::from_vec(self.left * self.phys, self.right, self.data.clone()).unwrap()
    }

    /// `left × (phys·right)` view.
    fn right_matrix(&self) -> CMatrix {
        CMatrix::from_vec(self.left, self.phys * self.right, self.data.clone()).unwrap()
    }

    fn from_left_matrix(m: CMatrix, phys: usize) -> Self {
        let (rows, right) = (m.rows(), m.cols());
        Self { left: rows / phys, phys, right, data: m.into_vec() }
    }

    fn from_right_matrix(m: CMatrix, phys: usize) -> Self {
        let (left, cols) = (m.rows(), m.cols());
        Self { left, phys, right: cols / phys, data: m.into_vec() }
    }

    fn scale_right(&self, s: &[f64]) -> Self {
        let mut out = self.clone();
        for (k, z) in out.data.iter_mut().enumerate() {
            *z *= s[k % self.right];
        }
        out
    }

    fn scale_left(&self, s: &[f64]) -> Self {
        let mut out = self.clone();
        let block = self.phys * self.right;
        for (k, z) in out.data.iter_mut().enumerate() {
            *z *= s[k / block];
        }
        out
    }

    /// Contract a `rows × left` matrix into the left bond.
    fn absorb_left(&self, m: &CMatrix) -> Self {
        Self::from_right_matrix(m.matmul(&self.right_matrix()), self.phys)
    }

    /// Contract a `right × cols` matrix into the right bond.
    fn absorb_right(&self, m: &CMatrix) -> Self {
        Self::from_left_matrix(self.left_matrix().matmul(m), self.phys)
    }
}

/// Vidal-form MPS with open boundaries.
#[derive(Clone, Debug, PartialEq)]
pub struct Mps {
    n: usize,
    d: usize,
    gammas: Vec<SiteTensor>,
    lambdas: Vec<SchmidtSpectrum>,
}

impl Mps {
    /// Assemble and validate an MPS from its tensors and bond spectra.
    pub fn from_parts(d: usize, gammas: Vec<SiteTensor>, lambdas: Vec<SchmidtSpectrum>) -> Result<Self> {
        let mps = Self { n: gammas.len(), d, gammas, lambdas };
        mps.validate()?;
        Ok(mps)
    }

    fn validate(&self) -> Result<()> {
        let corrupt = |msg: String| Err(Error::CorruptMps(msg));
        if self.n == 0 {
            return corrupt("an MPS needs at least one site".into());
        }
        if self.lambdas.len() != self.n - 1 {
            return corrupt(format!("{} sites need {} bond spectra, got {}", self.n, self.n - 1, self.lambdas.len()));
        }
        if self.gammas[0].left != 1 || self.gammas[self.n - 1].right != 1 {
            return corrupt("boundary bonds must have dimension 1".into());
        }
        for (k, g) in self.gammas.iter().enumerate() {
            if g.phys != self.d {
                return corrupt(format!("site {} has physical dimension {}, expected {}", k + 1, g.phys, self.d));
            }
        }
        for (k, lam) in self.lambdas.iter().enumerate() {
            let (l, r) = (self.gammas[k].right, self.gammas[k + 1].left);
            if l != lam.len() || r != lam.len() {
                return corrupt(format!("bond {} joins dimensions {l} and {r} with {} weights", k + 1, lam.len()));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn gammas(&self) -> &[SiteTensor] {
        &self.gammas
    }

    pub fn lambdas(&self) -> &[SchmidtSpectrum] {
        &self.lambdas
    }

    /// `χ_1 … χ_{n−1}`.
    pub fn bond_dims(&self) -> Vec<usize> {
        self.lambdas.iter().map(SchmidtSpectrum::len).collect()
    }

    pub fn max_bond(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1)
    }

    /// Site tensors with each bond spectrum absorbed into the tensor on its
    /// left: `B[k] = Γ[k]·λ[k]`. In canonical gauge these are
    /// right-orthonormal.
    pub fn absorbed_sites(&self) -> Vec<SiteTensor> {
        self.gammas
            .iter()
            .enumerate()
            .map(|(k, g)| match self.lambdas.get(k) {
                Some(lam) => g.scale_right(lam.weights()),
                None => g.clone(),
            })
            .collect()
    }

    /// Exact Vidal decomposition by a left-to-right sweep of SVDs. Weights at
    /// or below `tol` are discarded.
    pub fn from_dense(state: &DenseState, tol: f64) -> Result<Self> {
        let (n, d) = (state.n(), state.d());
        if n == 1 {
            let g = SiteTensor::new(1, d, 1, state.amplitudes().to_vec())?;
            return Self::from_parts(d, vec![g], vec![]);
        }
        let len = state.amplitudes().len();
        let mut rest = CMatrix::from_vec(1, len, state.amplitudes().to_vec())?;
        let mut prev = vec![1.0];
        let mut gammas = Vec::with_capacity(n);
        let mut lambdas = Vec::with_capacity(n - 1);
        for _ in 0..n - 1 {
            let rows = rest.rows() * d;
            let cols = rest.as_slice().len() / rows;
            let f = svd(&rest.reshaped(rows, cols)?)?;
            let keep = f.rank(tol).max(1);
            let lam = SchmidtSpectrum::from_singular_values(f.s[..keep].to_vec())?;
            let inv_prev: Vec<f64> = (0..rows).map(|row| 1.0 / prev[row / d]).collect();
            let u = f.u.take_cols(keep).scale_rows(&inv_prev);
            gammas.push(SiteTensor::from_left_matrix(u, d));
            rest = f.vdag.take_rows(keep).scale_rows(lam.weights());
            prev = lam.weights().to_vec();
            lambdas.push(lam);
        }
        let inv_prev: Vec<f64> = prev.iter().map(|w| 1.0 / w).collect();
        let last = rest.scale_rows(&inv_prev);
        gammas.push(SiteTensor::from_right_matrix(last, d));
        Self::from_parts(d, gammas, lambdas)
    }

    /// Bring arbitrary-gauge site tensors into Vidal canonical form.
    fn canonicalize(d: usize, mut sites: Vec<SiteTensor>, tol: f64) -> Result<Self> {
        let n = sites.len();
        // Left-orthonormalize, pushing the remainder rightward.
        for k in 0..n - 1 {
            let f = svd(&sites[k].left_matrix())?;
            let keep = f.rank(tol * f.s[0]).max(1);
            let carry = f.vdag.take_rows(keep).scale_rows(&f.s[..keep]);
            sites[k] = SiteTensor::from_left_matrix(f.u.take_cols(keep), d);
            sites[k + 1] = sites[k + 1].absorb_left(&carry);
        }
        let norm = CMatrix::from_vec(1, sites[n - 1].data.len(), sites[n - 1].data.clone())?.frobenius_norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NumericalFailure("MPS has zero or non-finite norm".into()));
        }
        sites[n - 1].data.iter_mut().for_each(|z| *z /= norm);

        // Right-orthonormalize; the singular values are the bond spectra.
        let mut lambdas = vec![SchmidtSpectrum::trivial(); n - 1];
        for k in (1..n).rev() {
            let f = svd(&sites[k].right_matrix())?;
            let keep = f.rank(tol).max(1);
            let lam = SchmidtSpectrum::from_singular_values(f.s[..keep].to_vec())?;
            sites[k] = SiteTensor::from_right_matrix(f.vdag.take_rows(keep), d);
            let carry = f.u.take_cols(keep).scale_cols(&f.s[..keep]);
            sites[k - 1] = sites[k - 1].absorb_right(&carry);
            lambdas[k - 1] = lam;
        }
        let gammas = sites
            .iter()
            .enumerate()
            .map(|(k, b)| match lambdas.get(k) {
                Some(lam) => {
                    let inv: Vec<f64> = lam.weights().iter().map(|w| 1.0 / w).collect();
                    b.scale_right(&inv)
                }
                None => b.clone(),
            })
            .collect();
        Self::from_parts(d, gammas, lambdas)
    }

    /// Cap every bond at `chi` by a left-to-right sweep of truncated SVDs,
    /// then restore canonical gauge.
    ///
    /// Returns the new MPS and `1 − Π_k m_k`, where `m_k` is the squared
    /// Schmidt mass kept at bond `k` during the sweep.
    pub fn truncate(&self, chi: usize) -> Result<(Mps, f64)> {
        if chi == 0 {
            return invalid("bond cap must be at least 1");
        }
        if self.max_bond() <= chi {
            return Ok((self.clone(), 0.0));
        }
        let d = self.d;
        let mut rest = self.absorbed_sites();
        let mut sites = Vec::with_capacity(self.n);
        let mut kept_product = 1.0;
        let mut carry = rest.remove(0);
        for next in rest {
            let f = svd(&carry.left_matrix())?;
            let keep = f.rank(DISCARD_TOL * f.s[0]).max(1).min(chi);
            let total: f64 = f.s.iter().map(|s| s * s).sum();
            let kept: f64 = f.s[..keep].iter().map(|s| s * s).sum();
            kept_product *= kept / total;
            sites.push(SiteTensor::from_left_matrix(f.u.take_cols(keep), d));
            carry = next.absorb_left(&f.vdag.take_rows(keep).scale_rows(&f.s[..keep]));
        }
        sites.push(carry);
        let mps = Self::canonicalize(d, sites, DISCARD_TOL)?;
        Ok((mps, (1.0 - kept_product).max(0.0)))
    }

    /// Contract back to dense amplitudes.
    pub fn to_dense(&self) -> Result<DenseState> {
        self.validate()?;
        dense_guard(self.n, self.d)?;
        let sites = self.absorbed_sites();
        let mut acc = CMatrix::from_vec(1, 1, vec![C64::new(1.0, 0.0)])?;
        for site in &sites {
            let next = acc.matmul(&site.right_matrix());
            let rows = next.rows() * self.d;
            acc = next.reshaped(rows, site.right)?;
        }
        DenseState::from_unnormalized(self.n, self.d, acc.into_vec())
    }

    /// Von Neumann entropy (nats) across the cut after site `cut`.
    pub fn entropy_at_bond(&self, cut: usize) -> Result<f64> {
        if cut == 0 || cut >= self.n {
            return invalid(format!("cut {cut} must lie in 1..={}", self.n.saturating_sub(1)));
        }
        let lam = &self.lambdas[cut - 1];
        let s = lam.entropy();
        let bound = (lam.len() as f64).ln();
        if s > bound + 1e-10 {
            return Err(Error::NumericalFailure(format!("entropy {s} at bond {cut} exceeds ln χ = {bound}")));
        }
        Ok(s)
    }

    /// `⟨self|other⟩` by transfer-matrix contraction.
    pub fn inner_product(&self, other: &Mps) -> Result<C64> {
        if (self.n, self.d) != (other.n, other.d) {
            return invalid("inner product of MPS with different shapes");
        }
        let (a, b) = (self.absorbed_sites(), other.absorbed_sites());
        let mut env = CMatrix::identity(1);
        for (sa, sb) in a.iter().zip(&b) {
            let t = sb.absorb_left(&env);
            env = sa.left_matrix().adjoint().matmul(&t.left_matrix());
        }
        Ok(env[(0, 0)])
    }

    /// Tensor entries `Σ_k d·χ_{k−1}·χ_k`.
    pub fn site_parameters(&self) -> usize {
        self.gammas.iter().map(|g| g.data.len()).sum()
    }

    /// Stored bond weights `Σ_k χ_k`.
    pub fn bond_parameters(&self) -> usize {
        self.lambdas.iter().map(SchmidtSpectrum::len).sum()
    }

    pub fn parameter_count(&self) -> usize {
        self.site_parameters() + self.bond_parameters()
    }

    /// Largest deviation from left- and right-orthonormality of
    /// `λ[k−1]Γ[k]` and `Γ[k]λ[k]`.
    pub fn canonical_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, g) in self.gammas.iter().enumerate() {
            let left = match k {
                0 => g.clone(),
                _ => g.scale_left(self.lambdas[k - 1].weights()),
            };
            let m = left.left_matrix();
            let gram = m.adjoint().matmul(&m);
            worst = worst.max(gram.sub(&CMatrix::identity(gram.rows())).max_abs());
            let right = match self.lambdas.get(k) {
                Some(lam) => g.scale_right(lam.weights()),
                None => g.clone(),
            };
            let m = right.right_matrix();
            let gram = m.matmul(&m.adjoint());
            worst = worst.max(gram.sub(&CMatrix::identity(gram.rows())).max_abs());
        }
        worst
    }

    /// Absorb each `λ[k]` into `Γ[k]` (rightward) and embed all matrices in
    /// a uniform `χ_max × χ_max` block, giving a trace-form MPS for the same
    /// state.
    pub fn to_periodic(&self) -> PeriodicMps {
        let chi = self.max_bond();
        let mats = self
            .absorbed_sites()
            .iter()
            .map(|site| {
                (0..self.d)
                    .map(|i| {
                        CMatrix::from_fn(chi, chi, |l, r| {
                            if l < site.left && r < site.right {
                                site.get(l, i, r)
                            } else {
                                C64::new(0.0, 0.0)
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        PeriodicMps::new(self.d, mats).expect("embedded matrices share one size")
    }
}

/// Vidal decomposition of `state`, optionally capped at `chi_max`.
pub fn to_mps(state: &DenseState, chi_max: Option<usize>, tol: f64) -> Result<Mps> {
    if chi_max == Some(0) {
        return invalid("chi_max must be at least 1");
    }
    if tol.is_nan() || tol < 0.0 {
        return invalid("discard tolerance must be nonnegative");
    }
    let exact = Mps::from_dense(state, tol)?;
    match chi_max {
        Some(chi) => Ok(exact.truncate(chi)?.0),
        None => Ok(exact),
    }
}

pub fn from_mps(mps: &Mps) -> Result<DenseState> {
    mps.to_dense()
}

pub fn truncate(mps: &Mps, chi: usize) -> Result<(Mps, f64)> {
    mps.truncate(chi)
}

pub fn entropy_at_bond(mps: &Mps, cut: usize) -> Result<f64> {
    mps.entropy_at_bond(cut)
}

pub fn inner_product(a: &Mps, b: &Mps) -> Result<C64> {
    a.inner_product(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::schmidt_spectrum;
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

    fn bell() -> DenseState {
        DenseState::ghz(2).unwrap()
    }

    #[test]
    fn product_state_has_unit_bonds() {
        let s = DenseState::product(&[
            vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)],
            vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)],
            vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            vec![C64::new(0.3, 0.1), C64::new(0.2, 0.0)],
        ])
        .unwrap();
        let mps = to_mps(&s, None, DISCARD_TOL).unwrap();
        assert_eq!(mps.bond_dims(), vec![1, 1, 1]);
        for lam in mps.lambdas() {
            assert!((lam.weights()[0] - 1.0).abs() < 1e-12);
        }
        for cut in 1..4 {
            assert!(mps.entropy_at_bond(cut).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn bell_pair_bonds() {
        let amps = {
            let b = bell().into_amplitudes();
            b.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
        };
        let s = DenseState::new(4, 2, amps).unwrap();
        assert_eq!(to_mps(&s, None, DISCARD_TOL).unwrap().bond_dims(), vec![2, 1, 2]);
    }

    #[test]
    fn max_entangled_middle_bond() {
        for k in 1..=4 {
            let mps = to_mps(&DenseState::max_entangled(k).unwrap(), None, DISCARD_TOL).unwrap();
            assert_eq!(mps.bond_dims()[k - 1], 1 << k);
        }
    }

    #[test]
    fn basis_state_round_trip_exact() {
        let s = DenseState::basis(2, &[0; 5]).unwrap();
        let back = from_mps(&to_mps(&s, None, DISCARD_TOL).unwrap()).unwrap();
        assert_eq!(back.amplitudes(), s.amplitudes());
    }

    #[test]
    fn ghz_round_trip_and_entropy() {
        let s = DenseState::ghz(4).unwrap();
        let mps = to_mps(&s, None, DISCARD_TOL).unwrap();
        assert!(s.fidelity(&from_mps(&mps).unwrap()).unwrap() >= 1.0 - 1e-10);
        for cut in 1..4 {
            assert!((mps.entropy_at_bond(cut).unwrap() - LN_2).abs() < 1e-12);
        }
        let zero = to_mps(&DenseState::basis(2, &[0; 4]).unwrap(), None, DISCARD_TOL).unwrap();
        let ip = zero.inner_product(&mps).unwrap();
        assert!((ip.norm() - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn random_state_spectra_match_dense() {
        let s = DenseState::random(8, 2, 17).unwrap();
        let mps = to_mps(&s, None, DISCARD_TOL).unwrap();
        for cut in 1..8 {
            let dense = schmidt_spectrum(&s, cut).unwrap();
            for (a, b) in mps.lambdas()[cut - 1].weights().iter().zip(dense.weights()) {
                assert!((a - b).abs() < 1e-8);
            }
        }
        assert!(mps.canonical_error() < 1e-8);
        assert!((mps.inner_product(&mps).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn bell_truncated_to_product() {
        let mps = to_mps(&bell(), None, DISCARD_TOL).unwrap();
        let (t, err) = mps.truncate(1).unwrap();
        assert_eq!(t.bond_dims(), vec![1]);
        let f = bell().fidelity(&t.to_dense().unwrap()).unwrap();
        assert!((f * f - 0.5).abs() < 1e-12);
        assert!((err - 0.5).abs() < 1e-12);
    }

    #[test]
    fn truncate_noop_when_cap_is_large() {
        let mps = to_mps(&DenseState::random(6, 2, 1).unwrap(), None, DISCARD_TOL).unwrap();
        let (t, err) = mps.truncate(8).unwrap();
        assert_eq!(t, mps);
        assert_eq!(err, 0.0);
        assert!(matches!(mps.truncate(0), Err(Error::InvalidInput(_))));
        assert!(matches!(to_mps(&bell(), Some(0), DISCARD_TOL), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn truncated_mps_is_canonical() {
        let s = DenseState::random(8, 2, 3).unwrap();
        let (t, _) = to_mps(&s, None, DISCARD_TOL).unwrap().truncate(4).unwrap();
        assert!(t.max_bond() <= 4);
        assert!(t.canonical_error() < 1e-8);
        let dense = t.to_dense().unwrap();
        for cut in 1..8 {
            let sp = schmidt_spectrum(&dense, cut).unwrap();
            for (a, b) in t.lambdas()[cut - 1].weights().iter().zip(sp.weights()) {
                assert!((a - b).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn entropy_at_bond_rejects_bad_cut() {
        let mps = to_mps(&bell(), None, DISCARD_TOL).unwrap();
        assert!(mps.entropy_at_bond(0).is_err());
        assert!(mps.entropy_at_bond(2).is_err());
    }

    #[test]
    fn inner_product_shape_mismatch() {
        let a = to_mps(&bell(), None, DISCARD_TOL).unwrap();
        let b = to_mps(&DenseState::ghz(3).unwrap(), None, DISCARD_TOL).unwrap();
        assert!(matches!(a.inner_product(&b), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn parameter_counts() {
        let s = DenseState::basis(2, &[0; 10]).unwrap();
        let mps = to_mps(&s, None, DISCARD_TOL).unwrap();
        assert_eq!(mps.site_parameters(), 20);
        assert_eq!(mps.bond_parameters(), 9);
        let r = to_mps(&DenseState::random(8, 2, 4).unwrap(), None, DISCARD_TOL).unwrap();
        let dims = r.bond_dims();
        assert_eq!(dims, vec![2, 4, 8, 16, 8, 4, 2]);
        let mut full = vec![1];
        full.extend(&dims);
        full.push(1);
        let expected: usize = full.windows(2).map(|w| 2 * w[0] * w[1]).sum::<usize>() + dims.iter().sum::<usize>();
        assert_eq!(r.parameter_count(), expected);
    }

    #[test]
    fn from_parts_rejects_inconsistent_bonds() {
        let mps = to_mps(&DenseState::ghz(3).unwrap(), None, DISCARD_TOL).unwrap();
        let mut lambdas = mps.lambdas().to_vec();
        lambdas[0] = SchmidtSpectrum::trivial();
        let err = Mps::from_parts(2, mps.gammas().to_vec(), lambdas).unwrap_err();
        assert!(matches!(err, Error::CorruptMps(_)));
    }

    #[test]
    fn periodic_export_matches_dense() {
        let s = DenseState::random(5, 3, 8).unwrap();
        let mps = to_mps(&s, None, DISCARD_TOL).unwrap();
        let p = mps.to_periodic();
        assert_eq!(p.chi(), mps.max_bond());
        let back = p.to_dense().unwrap();
        assert!(s.fidelity(&back).unwrap() > 1.0 - 1e-10);
    }

    #[test]
    fn single_site_mps() {
        let s = DenseState::basis(3, &[2]).unwrap();
        let mps = to_mps(&s, None, DISCARD_TOL).unwrap();
        assert_eq!(mps.n(), 1);
        assert_eq!(mps.to_dense().unwrap(), s);
    }
}
