//! Gamma matrices of the Clifford algebra `{γ^a, γ^b} = 2δ^{ab}` and the
//! exact trace-form MPS of the `m = 1` Laughlin (Slater) state, whose
//! coefficients are the Levi-Civita tensor
//! `ε^{a_1…a_n} ∝ tr(γ^{a_1} ⋯ γ^{a_n} γ_5)`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::CMatrix;
use crate::mps::PeriodicMps;
use crate::state::{schmidt_spectrum, DenseState};

/// Largest generator count (`dim γ = 2^7`).
pub const MAX_GENERATORS: usize = 14;
/// Largest particle count for which the `n^n` dense state is built.
pub const MAX_DENSE_PARTICLES: usize = 8;

/// A matrix with exactly one nonzero entry per row: row `i` holds `val[i]`
/// in column `col[i]`. Pauli strings and their products stay in this form.
#[derive(Clone, Debug, PartialEq)]
struct Monomial {
    col: Vec<usize>,
    val: Vec<C64>,
}

impl Monomial {
    fn from_dense(m: &CMatrix) -> Self {
        let zero = C64::new(0.0, 0.0);
        let (col, val) = (0..m.rows())
            .map(|i| {
                let j = (0..m.cols()).find(|&j| m[(i, j)] != zero).expect("Pauli strings have no zero rows");
                (j, m[(i, j)])
            })
            .unzip();
        Self { col, val }
    }

    fn identity(dim: usize) -> Self {
        Self { col: (0..dim).collect(), val: vec![C64::new(1.0, 0.0); dim] }
    }

    fn mul_assign(&mut self, rhs: &Monomial) {
        for (c, v) in self.col.iter_mut().zip(self.val.iter_mut()) {
            *v *= rhs.val[*c];
            *c = rhs.col[*c];
        }
    }

    fn trace(&self) -> C64 {
        self.col.iter().zip(&self.val).enumerate().filter(|(i, (c, _))| i == *c).map(|(_, (_, v))| v).sum()
    }
}

#[derive(Clone, Debug)]
pub struct CliffordRep {
    n: usize,
    dim: usize,
    gammas: Vec<CMatrix>,
    gamma5: CMatrix,
    sparse: Vec<Monomial>,
    sparse5: Monomial,
    /// `tr(γ^0 ⋯ γ^{n−1} γ_5)`, the normalization of [`CliffordRep::epsilon`].
    anchor: C64,
}

fn pauli(label: char) -> CMatrix {
    let (o, l, i) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 1.0));
    let data = match label {
        'x' => vec![o, l, l, o],
        'y' => vec![o, -i, i, o],
        'z' => vec![l, o, o, -l],
        _ => vec![l, o, o, l],
    };
    CMatrix::from_vec(2, 2, data).expect("2x2")
}

/// Jordan-Wigner ladder on `n/2` qubits: `γ^{2k} = Z^{⊗k} ⊗ X ⊗ I…`,
/// `γ^{2k+1} = Z^{⊗k} ⊗ Y ⊗ I…`; `γ_5 = (−i)^{n/2} γ^0 ⋯ γ^{n−1}`.
pub fn build_clifford(n: usize) -> Result<CliffordRep> {
    if n == 0 || n % 2 == 1 {
        return invalid(format!("the generator count must be even and positive, got {n}"));
    }
    if n > MAX_GENERATORS {
        return Err(Error::TooLarge(format!("{n} generators exceed the limit of {MAX_GENERATORS}")));
    }
    let qubits = n / 2;
    let dim = 1usize << qubits;
    let mut gammas = Vec::with_capacity(n);
    for a in 0..n {
        let (k, last) = (a / 2, if a % 2 == 0 { 'x' } else { 'y' });
        let m = (0..qubits).fold(CMatrix::identity(1), |acc, q| {
            let label = match q.cmp(&k) {
                std::cmp::Ordering::Less => 'z',
                std::cmp::Ordering::Equal => last,
                std::cmp::Ordering::Greater => 'i',
            };
            acc.kron(&pauli(label))
        });
        gammas.push(m);
    }
    let phase = (0..qubits).fold(C64::new(1.0, 0.0), |p, _| p * C64::new(0.0, -1.0));
    let gamma5 = gammas.iter().fold(CMatrix::identity(dim), |acc, g| acc.matmul(g)).scale(phase);
    let sparse: Vec<Monomial> = gammas.iter().map(Monomial::from_dense).collect();
    let sparse5 = Monomial::from_dense(&gamma5);
    let mut rep = CliffordRep { n, dim, gammas, gamma5, sparse, sparse5, anchor: C64::new(1.0, 0.0) };
    let identity: Vec<usize> = (0..n).collect();
    rep.anchor = rep.trace_with_gamma5(&identity)?;
    if rep.anchor.norm() < 0.5 {
        return Err(Error::NumericalFailure("identity-permutation trace vanished".into()));
    }
    Ok(rep)
}

impl CliffordRep {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `2^{n/2}`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gammas(&self) -> &[CMatrix] {
        &self.gammas
    }

    pub fn gamma5(&self) -> &CMatrix {
        &self.gamma5
    }

    /// Trace at the identity permutation.
    pub fn anchor(&self) -> C64 {
        self.anchor
    }

    fn check_indices(&self, indices: &[usize]) -> Result<()> {
        if let Some(&bad) = indices.iter().find(|&&a| a >= self.n) {
            return invalid(format!("gamma index {bad} out of range 0..{}", self.n));
        }
        Ok(())
    }

    /// `tr(γ^{a_1} ⋯ γ^{a_k} γ_5)` for any number of factors.
    pub fn trace_with_gamma5(&self, indices: &[usize]) -> Result<C64> {
        self.check_indices(indices)?;
        let mut acc = Monomial::identity(self.dim);
        for &a in indices {
            acc.mul_assign(&self.sparse[a]);
        }
        acc.mul_assign(&self.sparse5);
        Ok(acc.trace())
    }

    /// Levi-Civita symbol from the normalized trace: `±1` on permutations of
    /// `0..n`, `0` otherwise.
    pub fn epsilon(&self, indices: &[usize]) -> Result<C64> {
        if indices.len() != self.n {
            return invalid(format!("expected {} indices, got {}", self.n, indices.len()));
        }
        Ok(self.trace_with_gamma5(indices)? / self.anchor)
    }

    /// Largest entrywise deviation of `{γ^a, γ^b}` from `2δ^{ab}·I`.
    pub fn anticommutator_error(&self) -> f64 {
        let eye = CMatrix::identity(self.dim);
        let mut worst: f64 = 0.0;
        for a in 0..self.n {
            for b in a..self.n {
                let (ga, gb) = (&self.gammas[a], &self.gammas[b]);
                let anti = ga.matmul(gb).add(&gb.matmul(ga));
                let target = if a == b { eye.scale(C64::new(2.0, 0.0)) } else { CMatrix::zeros(self.dim, self.dim) };
                worst = worst.max(anti.sub(&target).max_abs());
            }
        }
        worst
    }
}

pub fn epsilon_via_trace(rep: &CliffordRep, indices: &[usize]) -> Result<C64> {
    rep.epsilon(indices)
}

/// The `n`-fermion Slater determinant in first quantization: site `k` is
/// particle `k`, its local index the orbital label.
#[derive(Clone, Debug)]
pub struct SlaterState {
    rep: CliffordRep,
    norm: f64,
}

pub fn slater_from_trace(rep: &CliffordRep) -> SlaterState {
    let factorial: f64 = (1..=rep.n).map(|k| k as f64).product();
    SlaterState { rep: rep.clone(), norm: factorial.sqrt() }
}

impl SlaterState {
    pub fn n(&self) -> usize {
        self.rep.n
    }

    /// `ε^{a_1…a_n} / √n!`.
    pub fn amplitude(&self, indices: &[usize]) -> Result<C64> {
        Ok(self.rep.epsilon(indices)? / self.norm)
    }

    /// The `n^n` amplitude vector. Tuples with a repeated orbital are left
    /// at zero without a trace evaluation: `γ^a γ^a = I` removes a pair and
    /// the remaining product with `γ_5` is traceless.
    pub fn to_dense(&self) -> Result<DenseState> {
        let n = self.rep.n;
        if n > MAX_DENSE_PARTICLES {
            return Err(Error::TooLarge(format!(
                "{n}^{n} amplitudes exceed the dense limit (n ≤ {MAX_DENSE_PARTICLES})"
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); n.pow(n as u32)];
        for perm in permutations(n) {
            let flat = perm.iter().fold(0usize, |acc, &a| acc * n + a);
            amps[flat] = self.amplitude(&perm)?;
        }
        DenseState::new(n, n, amps)
    }
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("successor exists");
        p.swap(i, j);
        p[i + 1..].reverse();
    }
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    (0..k).map(|j| ((n - j) as f64 / (j + 1) as f64).ln()).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfCutEntropy {
    pub entropy_measured: f64,
    /// `ln C(n, n/2)`.
    pub entropy_formula: f64,
    /// `2·ln dim γ = n·ln 2`, the bound set by the MPS bond dimension.
    pub capacity: f64,
    /// `entropy_formula / capacity`, approaching 1 as `n` grows.
    pub ratio: f64,
}

/// Entropy of particles `1..n/2` against the rest, from the dense state.
pub fn half_cut_entropy(rep: &CliffordRep) -> Result<HalfCutEntropy> {
    let n = rep.n;
    let state = slater_from_trace(rep).to_dense()?;
    let entropy_measured = schmidt_spectrum(&state, n / 2)?.entropy();
    let entropy_formula = ln_binomial(n, n / 2);
    let capacity = 2.0 * (rep.dim as f64).ln();
    if entropy_formula > capacity + 1e-12 {
        return Err(Error::NumericalFailure(format!("ln C(n, n/2) = {entropy_formula} exceeds n ln 2 = {capacity}")));
    }
    Ok(HalfCutEntropy { entropy_measured, entropy_formula, capacity, ratio: entropy_formula / capacity })
}

/// `A^{[k] a} = γ^a` on every site; the last site carries `γ^a γ_5` divided
/// by the anchor trace so amplitudes equal `ε` exactly.
pub fn export_periodic_mps(rep: &CliffordRep) -> Result<PeriodicMps> {
    let scale = C64::new(1.0, 0.0) / rep.anchor;
    let last: Vec<CMatrix> = rep.gammas.iter().map(|g| g.matmul(&rep.gamma5).scale(scale)).collect();
    let mut mats = vec![rep.gammas.clone(); rep.n - 1];
    mats.push(last);
    PeriodicMps::new(rep.n, mats)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaughlinReport {
    pub n: usize,
    pub dim_gamma: usize,
    /// Present when `n` is small enough for the dense state.
    pub entropy_measured: Option<f64>,
    pub entropy_formula: f64,
    pub capacity: f64,
    pub ratio: f64,
    /// `n^n`.
    pub apparent_dof: u64,
    pub mps_params: usize,
    pub anticommutator_error: f64,
}

pub fn laughlin_report(n: usize) -> Result<LaughlinReport> {
    let rep = build_clifford(n)?;
    let entropy_measured = if n <= MAX_DENSE_PARTICLES { Some(half_cut_entropy(&rep)?.entropy_measured) } else { None };
    let entropy_formula = ln_binomial(n, n / 2);
    let capacity = 2.0 * (rep.dim as f64).ln();
    Ok(LaughlinReport {
        n,
        dim_gamma: rep.dim,
        entropy_measured,
        entropy_formula,
        capacity,
        ratio: entropy_formula / capacity,
        apparent_dof: (n as u64).pow(n as u32),
        mps_params: export_periodic_mps(&rep)?.parameter_count(),
        anticommutator_error: rep.anticommutator_error(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_algebra_is_pauli() {
        let rep = build_clifford(2).unwrap();
        assert_eq!(rep.gammas()[0], pauli('x'));
        assert_eq!(rep.gammas()[1], pauli('y'));
        assert_eq!(rep.gamma5(), &pauli('z'));
        assert_eq!(rep.anchor(), C64::new(0.0, 2.0));
    }

    #[test]
    fn rejects_odd_and_oversized() {
        assert!(matches!(build_clifford(3), Err(Error::InvalidInput(_))));
        assert!(matches!(build_clifford(0), Err(Error::InvalidInput(_))));
        assert!(matches!(build_clifford(16), Err(Error::TooLarge(_))));
        assert!(build_clifford(14).is_ok());
    }

    #[test]
    fn epsilon_anchor_and_transposition() {
        let rep = build_clifford(6).unwrap();
        assert_eq!(rep.epsilon(&[0, 1, 2, 3, 4, 5]).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(rep.epsilon(&[1, 0, 2, 3, 4, 5]).unwrap(), C64::new(-1.0, 0.0));
        assert_eq!(rep.epsilon(&[0, 0, 2, 3, 4, 5]).unwrap(), C64::new(0.0, 0.0));
        assert!(matches!(rep.epsilon(&[0, 1, 2, 3, 4, 6]), Err(Error::InvalidInput(_))));
        assert!(matches!(rep.epsilon(&[0, 1]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn two_particle_slater() {
        let s = slater_from_trace(&build_clifford(2).unwrap());
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitude(&[0, 1]).unwrap() - C64::new(r, 0.0)).norm() < 1e-15);
        assert!((s.amplitude(&[1, 0]).unwrap() + C64::new(r, 0.0)).norm() < 1e-15);
        assert_eq!(s.amplitude(&[1, 1]).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn permutation_enumeration() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(5).len(), 120);
        assert_eq!(permutations(1), vec![vec![0]]);
    }

    #[test]
    fn binomials() {
        assert!((ln_binomial(4, 2) - 6f64.ln()).abs() < 1e-14);
        assert!((ln_binomial(6, 3) - 20f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn dense_guard() {
        let s = slater_from_trace(&build_clifford(10).unwrap());
        assert!(matches!(s.to_dense(), Err(Error::TooLarge(_))));
        assert!(matches!(half_cut_entropy(&build_clifford(10).unwrap()), Err(Error::TooLarge(_))));
    }

    #[test]
    fn report_without_dense_state() {
        let r = laughlin_report(12).unwrap();
        assert!(r.entropy_measured.is_none());
        assert_eq!(r.dim_gamma, 64);
        assert_eq!(r.mps_params, 12 * 12 * 64 * 64);
        assert_eq!(r.apparent_dof, 12u64.pow(12));
        assert!(r.ratio < 1.0);
    }
}
