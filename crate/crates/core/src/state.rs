//! Dense pure states and the brute-force spectral quantities computed from
//! them: reduced density matrices, Schmidt spectra, von Neumann entropy.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{eigh, reshape_to_matrix, singular_values, CMatrix};

/// Singular values at or below this are not counted in the Schmidt number.
pub const DISCARD_TOL: f64 = 1e-12;

/// Largest deviation of `Σ|c|²` from 1 that constructors silently repair.
pub const RENORMALIZE_TOL: f64 = 1e-3;

/// Complex amplitudes `c^{i_1…i_n}` over `n` sites of local dimension `d`,
/// stored in big-endian flat order.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    d: usize,
    amplitudes: Vec<C64>,
}

fn checked_pow(d: usize, n: usize) -> Result<usize> {
    u32::try_from(n)
        .ok()
        .and_then(|n| d.checked_pow(n))
        .ok_or_else(|| Error::TooLarge(format!("{d}^{n} amplitudes overflow")))
}

impl DenseState {
    /// Builds a state from amplitudes that are normalized up to file-format
    /// rounding; anything further than [`RENORMALIZE_TOL`] from unit norm is
    /// rejected.
    pub fn new(n: usize, d: usize, amplitudes: Vec<C64>) -> Result<Self> {
        let norm2 = Self::check_shape(n, d, &amplitudes)?;
        if (norm2 - 1.0).abs() > RENORMALIZE_TOL {
            return invalid(format!("state has squared norm {norm2}, expected 1"));
        }
        Ok(Self::scaled(n, d, amplitudes, norm2))
    }

    /// Builds a state from any nonzero amplitude vector, normalizing it.
    pub fn from_unnormalized(n: usize, d: usize, amplitudes: Vec<C64>) -> Result<Self> {
        let norm2 = Self::check_shape(n, d, &amplitudes)?;
        if norm2 == 0.0 {
            return invalid("cannot normalize the zero vector");
        }
        Ok(Self::scaled(n, d, amplitudes, norm2))
    }

    fn check_shape(n: usize, d: usize, amplitudes: &[C64]) -> Result<f64> {
        if n == 0 {
            return invalid("a state needs at least one site");
        }
        if d < 2 {
            return invalid(format!("local dimension must be at least 2, got {d}"));
        }
        let len = checked_pow(d, n)?;
        if amplitudes.len() != len {
            return invalid(format!("expected {len} amplitudes for n={n}, d={d}, got {}", amplitudes.len()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return invalid("amplitudes must be finite");
        }
        Ok(amplitudes.iter().map(|z| z.norm_sqr()).sum())
    }

    fn scaled(n: usize, d: usize, mut amplitudes: Vec<C64>, norm2: f64) -> Self {
        // already unit to rounding: keep the bits, so text round trips are exact
        if (norm2 - 1.0).abs() <= 1e-14 {
            return Self { n, d, amplitudes };
        }
        let inv = 1.0 / norm2.sqrt();
        amplitudes.iter_mut().for_each(|z| *z *= inv);
        Self { n, d, amplitudes }
    }

    /// Tensor product of single-site states.
    pub fn product(sites: &[Vec<C64>]) -> Result<Self> {
        let Some(first) = sites.first() else {
            return invalid("a state needs at least one site");
        };
        let d = first.len();
        if sites.iter().any(|s| s.len() != d) {
            return invalid("all sites must share one local dimension");
        }
        let mut amps = vec![C64::new(1.0, 0.0)];
        for site in sites {
            amps = amps.iter().flat_map(|a| site.iter().map(move |b| a * b)).collect();
        }
        Self::from_unnormalized(sites.len(), d, amps)
    }

    /// Computational basis state `|i_1 … i_n⟩`.
    pub fn basis(d: usize, digits: &[usize]) -> Result<Self> {
        let n = digits.len();
        let len = checked_pow(d, n)?;
        if digits.iter().any(|&i| i >= d) {
            return invalid("basis digit out of range");
        }
        let index = digits.iter().fold(0, |acc, &i| acc * d + i);
        let mut amps = vec![C64::new(0.0, 0.0); len];
        amps[index] = C64::new(1.0, 0.0);
        Self::new(n, d, amps)
    }

    /// `(|0…0⟩ + |1…1⟩)/√2` on `n` qubits.
    pub fn ghz(n: usize) -> Result<Self> {
        let len = checked_pow(2, n)?;
        let mut amps = vec![C64::new(0.0, 0.0); len];
        amps[0] = C64::new(1.0, 0.0);
        amps[len - 1] = C64::new(1.0, 0.0);
        Self::from_unnormalized(n, 2, amps)
    }

    /// Equal superposition of single excitations on `n` qubits.
    pub fn w(n: usize) -> Result<Self> {
        let len = checked_pow(2, n)?;
        let mut amps = vec![C64::new(0.0, 0.0); len];
        for k in 0..n {
            amps[1 << k] = C64::new(1.0, 0.0);
        }
        Self::from_unnormalized(n, 2, amps)
    }

    /// Maximally entangled state of `2k` qubits across the middle cut:
    /// `2^{-k/2} Σ_x |x⟩|x⟩`.
    pub fn max_entangled(k: usize) -> Result<Self> {
        let half = checked_pow(2, k)?;
        let mut amps = vec![C64::new(0.0, 0.0); half * half];
        for x in 0..half {
            amps[x * half + x] = C64::new(1.0, 0.0);
        }
        Self::from_unnormalized(2 * k, 2, amps)
    }

    /// Random state with i.i.d. complex Gaussian amplitudes (Haar-distributed
    /// after normalization), reproducible from `seed`.
    pub fn random(n: usize, d: usize, seed: u64) -> Result<Self> {
        let len = checked_pow(d, n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps = (0..len)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                C64::new(re, im)
            })
            .collect();
        Self::from_unnormalized(n, d, amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &DenseState) -> Result<C64> {
        if (self.n, self.d) != (other.n, other.d) {
            return invalid("overlap of states with different shapes");
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|`.
    pub fn fidelity(&self, other: &DenseState) -> Result<f64> {
        Ok(self.overlap(other)?.norm())
    }

    /// Apply a `d × d` operator to one site (0-based).
    pub fn apply_site(&self, site: usize, op: &CMatrix) -> Result<DenseState> {
        if site >= self.n {
            return invalid(format!("site {site} out of range for n={}", self.n));
        }
        if op.rows() != self.d || op.cols() != self.d {
            return invalid("site operator has the wrong shape");
        }
        let stride = self.d.pow((self.n - 1 - site) as u32);
        let block = stride * self.d;
        let mut out = vec![C64::new(0.0, 0.0); self.amplitudes.len()];
        for base in (0..self.amplitudes.len()).step_by(block) {
            for off in 0..stride {
                for i in 0..self.d {
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..self.d {
                        acc += op[(i, j)] * self.amplitudes[base + j * stride + off];
                    }
                    out[base + i * stride + off] = acc;
                }
            }
        }
        Ok(DenseState { n: self.n, d: self.d, amplitudes: out })
    }

    fn check_cut(&self, cut: usize) -> Result<()> {
        if cut == 0 || cut >= self.n {
            return invalid(format!("cut {cut} must lie in 1..={} for n={}", self.n.saturating_sub(1), self.n));
        }
        Ok(())
    }

    /// The amplitudes as a `d^cut × d^{n−cut}` matrix.
    pub fn bipartition(&self, cut: usize) -> Result<CMatrix> {
        self.check_cut(cut)?;
        let left = self.d.pow(cut as u32);
        reshape_to_matrix(&self.amplitudes, left, self.amplitudes.len() / left)
    }

    /// Parse the `QSTATE 1` text format.
    pub fn parse_qstate(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        if lines.next() != Some("QSTATE 1") {
            return invalid("missing `QSTATE 1` header");
        }
        let dims = lines.next().ok_or_else(|| Error::InvalidInput("missing `n d` line".into()))?;
        let dims: Vec<usize> = dims
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::InvalidInput(format!("bad dimension `{t}`"))))
            .collect::<Result<_>>()?;
        let [n, d] = dims[..] else {
            return invalid("dimension line must be `n d`");
        };
        if d < 2 || n == 0 {
            return invalid(format!("invalid shape n={n}, d={d}"));
        }
        let len = checked_pow(d, n)?;
        let amps = lines.map(parse_complex_line).collect::<Result<Vec<_>>>()?;
        if amps.len() != len {
            return invalid(format!("expected {len} amplitude lines, found {}", amps.len()));
        }
        Self::new(n, d, amps)
    }

    pub fn to_qstate(&self) -> String {
        let mut out = format!("QSTATE 1\n{} {}\n", self.n, self.d);
        for z in &self.amplitudes {
            writeln!(out, "{} {}", z.re, z.im).unwrap();
        }
        out
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_qstate(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_qstate())?;
        Ok(())
    }
}

pub(crate) fn parse_complex_line(line: &str) -> Result<C64> {
    let mut parts = line.split_whitespace();
    let (Some(re), Some(im), None) = (parts.next(), parts.next(), parts.next()) else {
        return invalid(format!("expected `re im`, got `{line}`"));
    };
    let parse = |t: &str| -> Result<f64> {
        let x: f64 = t.parse().map_err(|_| Error::InvalidInput(format!("bad number `{t}`")))?;
        if !x.is_finite() {
            return invalid(format!("non-finite value `{t}`"));
        }
        Ok(x)
    };
    Ok(C64::new(parse(re)?, parse(im)?))
}

/// Which side of a cut to keep when tracing out the other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Left,
    Right,
}

/// Schmidt coefficients `λ_a` at one cut, in descending order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchmidtSpectrum {
    weights: Vec<f64>,
    chi: usize,
}

impl SchmidtSpectrum {
    /// Validates an already normalized, descending spectrum.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return invalid("empty Schmidt spectrum");
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return invalid("Schmidt weights must be finite and nonnegative");
        }
        if weights.windows(2).any(|p| p[0] < p[1]) {
            return invalid("Schmidt weights must be descending");
        }
        let mass: f64 = weights.iter().map(|w| w * w).sum();
        if (mass - 1.0).abs() > 1e-8 {
            return invalid(format!("Schmidt weights have squared mass {mass}, expected 1"));
        }
        let chi = weights.iter().filter(|&&w| w > DISCARD_TOL).count();
        Ok(Self { weights, chi })
    }

    /// Sorts and normalizes raw singular values.
    pub fn from_singular_values(mut values: Vec<f64>) -> Result<Self> {
        values.sort_by(|a, b| b.total_cmp(a));
        let norm = values.iter().map(|w| w * w).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return invalid("singular values have zero or non-finite norm");
        }
        values.iter_mut().for_each(|w| *w /= norm);
        Self::new(values)
    }

    pub fn trivial() -> Self {
        Self { weights: vec![1.0], chi: 1 }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of weights above [`DISCARD_TOL`].
    pub fn chi(&self) -> usize {
        self.chi
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Von Neumann entropy in nats.
    pub fn entropy(&self) -> f64 {
        entropy(self)
    }

    /// Squared weight retained by the `chi` largest coefficients.
    pub fn top_mass(&self, chi: usize) -> f64 {
        self.weights.iter().take(chi).map(|w| w * w).sum()
    }

    /// Smallest `χ` whose top weights retain squared mass `≥ target`.
    pub fn chi_for_mass(&self, target: f64) -> usize {
        let mut mass = 0.0;
        for (k, w) in self.weights.iter().enumerate() {
            mass += w * w;
            if mass >= target {
                return k + 1;
            }
        }
        self.weights.len()
    }
}

/// `S = −Σ λ² ln λ²` in nats, with `0 ln 0 = 0`.
pub fn entropy(spectrum: &SchmidtSpectrum) -> f64 {
    let s: f64 = spectrum.weights.iter().map(|w| w * w).filter(|&p| p > 0.0).map(|p| -p * p.ln()).sum();
    s.max(0.0)
}

/// Entropy of a density-matrix eigenvalue list (`p = λ²`).
pub fn entropy_of_probabilities(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum::<f64>().max(0.0)
}

/// Reduced density matrix of the party kept at `cut` (sites `1..=cut` on
/// the left).
pub fn reduced_density_matrix(state: &DenseState, cut: usize, keep: Party) -> Result<CMatrix> {
    let m = state.bipartition(cut)?;
    // ρ_L[i,i'] = Σ_j c_ij c*_i'j ; ρ_R[j,j'] = Σ_i c_ij c*_ij'
    let rho = match keep {
        Party::Left => m.matmul(&m.adjoint()),
        Party::Right => m.transpose().matmul(&m.adjoint().transpose()),
    };
    Ok(rho)
}

/// Schmidt coefficients at `cut`: the singular values of the `d^a × d^{n−a}`
/// amplitude matrix.
pub fn schmidt_spectrum(state: &DenseState, cut: usize) -> Result<SchmidtSpectrum> {
    let m = state.bipartition(cut)?;
    let full = m.rows().min(m.cols());
    let mut values = Vec::with_capacity(full);
    for block in nonzero_blocks(&m) {
        values.extend(singular_values(&block)?);
    }
    values.resize(full, 0.0);
    SchmidtSpectrum::from_singular_values(values)
}

/// Splits `m` into the blocks of its nonzero pattern: a row and a column
/// sharing a nonzero entry belong to the same block. The singular values of
/// `m` are those of the blocks plus zeros, which keeps sparse states (Slater
/// determinants, GHZ-like superpositions) cheap.
fn nonzero_blocks(m: &CMatrix) -> Vec<CMatrix> {
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let (rows, cols) = (m.rows(), m.cols());
    let zero = C64::new(0.0, 0.0);
    let mut parent: Vec<usize> = (0..rows + cols).collect();
    let mut used = vec![false; rows + cols];
    for i in 0..rows {
        for (j, z) in m.row(i).iter().enumerate() {
            if *z != zero {
                used[i] = true;
                used[rows + j] = true;
                let (a, b) = (find(&mut parent, i), find(&mut parent, rows + j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, (Vec<usize>, Vec<usize>)> = Default::default();
    for node in (0..rows + cols).filter(|&x| used[x]) {
        let g = groups.entry(find(&mut parent, node)).or_default();
        if node < rows {
            g.0.push(node);
        } else {
            g.1.push(node - rows);
        }
    }
    groups.into_values().map(|(r, c)| CMatrix::from_fn(r.len(), c.len(), |i, j| m[(r[i], c[j])])).collect()
}

/// Entropy of each party computed from its own reduced density matrix.
pub fn entropy_left_equals_right(state: &DenseState, cut: usize) -> Result<(f64, f64)> {
    let left = eigh(&reduced_density_matrix(state, cut, Party::Left)?)?.0;
    let right = eigh(&reduced_density_matrix(state, cut, Party::Right)?)?.0;
    let (sl, sr) = (entropy_of_probabilities(&left), entropy_of_probabilities(&right));
    if (sl - sr).abs() > 1e-8 {
        return Err(Error::NumericalFailure(format!("left entropy {sl} differs from right entropy {sr}")));
    }
    Ok((sl, sr))
}

/// Display unit for entropies; all computation stays in nats.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyUnit {
    #[default]
    Nats,
    Bits,
}

impl EntropyUnit {
    pub fn from_nats(self, s: f64) -> f64 {
        match self {
            EntropyUnit::Nats => s,
            EntropyUnit::Bits => s / std::f64::consts::LN_2,
        }
    }
}
