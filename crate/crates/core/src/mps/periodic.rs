use num_complex::Complex64 as C64;

use super::dense_guard;
use crate::error::{invalid, Result};
use crate::linalg::CMatrix;
use crate::state::DenseState;

/// Trace-form MPS: `c^{i_1…i_n} = tr(A[1]^{i_1} ⋯ A[n]^{i_n})` with every
/// matrix `χ × χ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicMps {
    n: usize,
    d: usize,
    chi: usize,
    /// `mats[k][i]` is `A[k+1]^i`.
    mats: Vec<Vec<CMatrix>>,
}

impl PeriodicMps {
    pub fn new(d: usize, mats: Vec<Vec<CMatrix>>) -> Result<Self> {
        let Some(first) = mats.first().and_then(|site| site.first()) else {
            return invalid("a periodic MPS needs at least one site");
        };
        let chi = first.rows();
        for (k, site) in mats.iter().enumerate() {
            if site.len() != d {
                return invalid(format!("site {} has {} matrices, expected {d}", k + 1, site.len()));
            }
            if site.iter().any(|m| m.rows() != chi || m.cols() != chi) {
                return invalid(format!("site {} matrices are not all {chi}x{chi}", k + 1));
            }
        }
        Ok(Self { n: mats.len(), d, chi, mats })
    }

    /// The same `d` matrices on every one of `n` sites.
    pub fn uniform(n: usize, site: Vec<CMatrix>) -> Result<Self> {
        let d = site.len();
        Self::new(d, vec![site; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn chi(&self) -> usize {
        self.chi
    }

    pub fn matrices(&self) -> &[Vec<CMatrix>] {
        &self.mats
    }

    /// `tr(A[1]^{i_1} ⋯ A[n]^{i_n})`.
    pub fn amplitude(&self, indices: &[usize]) -> Result<C64> {
        if indices.len() != self.n {
            return invalid(format!("expected {} indices, got {}", self.n, indices.len()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.d) {
            return invalid(format!("physical index {bad} out of range for d={}", self.d));
        }
        let mut acc = self.mats[0][indices[0]].clone();
        for (site, &i) in self.mats.iter().zip(indices).skip(1) {
            acc = acc.matmul(&site[i]);
        }
        Ok(acc.trace())
    }

    /// All `d^n` amplitudes, normalized.
    pub fn to_dense(&self) -> Result<DenseState> {
        let len = dense_guard(self.n, self.d)?;
        let mut digits = vec![0usize; self.n];
        let mut amps = Vec::with_capacity(len);
        for _ in 0..len {
            amps.push(self.amplitude(&digits)?);
            for digit in digits.iter_mut().rev() {
                *digit += 1;
                if *digit < self.d {
                    break;
                }
                *digit = 0;
            }
        }
        DenseState::from_unnormalized(self.n, self.d, amps)
    }

    /// `n·d·χ²`.
    pub fn parameter_count(&self) -> usize {
        self.n * self.d * self.chi * self.chi
    }
}

pub fn periodic_amplitude(p: &PeriodicMps, indices: &[usize]) -> Result<C64> {
    p.amplitude(indices)
}

pub fn periodic_to_dense(p: &PeriodicMps) -> Result<DenseState> {
    p.to_dense()
}
