//! Transverse-field Ising chain `H = −Σ σˣ_k σˣ_{k+1} − h Σ σᶻ_k`, its
//! ground state by matrix-free Lanczos, block-entropy scans, and the
//! finite-size central charge fit `S_l = (c/3)·ln chord(l) + const`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::state::{schmidt_spectrum, DenseState};

/// Largest chain handed to the dense-vector solver.
pub const MAX_SITES: usize = 22;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    #[default]
    Periodic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsingChain {
    n: usize,
    h: f64,
    boundary: Boundary,
}

impl IsingChain {
    pub fn new(n: usize, h: f64, boundary: Boundary) -> Result<Self> {
        if n < 2 {
            return invalid(format!("an Ising chain needs at least 2 sites, got {n}"));
        }
        if !h.is_finite() || h < 0.0 {
            return invalid(format!("transverse field must be finite and nonnegative, got {h}"));
        }
        Ok(Self { n, h, boundary })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Bit masks flipping both spins of each σˣσˣ bond. Site `k` (0-based)
    /// is bit `n−1−k` of the flat index.
    fn bond_masks(&self) -> Vec<usize> {
        let bit = |k: usize| 1usize << (self.n - 1 - k);
        let mut masks: Vec<usize> = (0..self.n - 1).map(|k| bit(k) | bit(k + 1)).collect();
        if self.boundary == Boundary::Periodic {
            masks.push(bit(self.n - 1) | bit(0));
        }
        masks
    }

    /// `H·v` without forming `H`.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim() {
            return invalid(format!("vector has length {}, expected 2^{} = {}", v.len(), self.n, self.dim()));
        }
        let masks = self.bond_masks();
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        for (idx, (o, &x)) in out.iter_mut().zip(v).enumerate() {
            // σᶻ eigenvalue is +1 for bit 0, −1 for bit 1
            let up = self.n as i64 - 2 * idx.count_ones() as i64;
            let mut acc = x * (-self.h * up as f64);
            for &m in &masks {
                acc -= v[idx ^ m];
            }
            *o = acc;
        }
        Ok(out)
    }
}

pub fn apply_hamiltonian(chain: &IsingChain, v: &[C64]) -> Result<Vec<C64>> {
    chain.apply(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LanczosOptions {
    /// Relative residual target `‖Hψ − Eψ‖ ≤ tol·|E|`.
    pub tol: f64,
    /// Budget of Hamiltonian applications.
    pub max_iter: usize,
    /// Krylov basis size before an explicit restart.
    pub krylov_dim: usize,
    /// Seed of the random start vector.
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 5000, krylov_dim: 80, seed: 20060707 }
    }
}

#[derive(Clone, Debug)]
pub struct GroundState {
    pub energy: f64,
    pub state: DenseState,
    pub residual: f64,
    pub matvecs: usize,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Lowest eigenpair of the symmetric tridiagonal matrix `(alphas, betas)`.
fn lowest_tridiagonal(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let k = alphas.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alphas[i]
        } else if i + 1 == j {
            betas[i]
        } else if j + 1 == i {
            betas[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let (idx, &theta) =
        eig.eigenvalues.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty tridiagonal");
    (theta, eig.eigenvectors.column(idx).iter().copied().collect())
}

/// Lanczos with full reorthogonalization and explicit restarts from the
/// current Ritz vector.
pub fn ground_state(chain: &IsingChain, opts: &LanczosOptions) -> Result<GroundState> {
    if chain.n > MAX_SITES {
        return Err(Error::TooLarge(format!("{} sites exceed the {MAX_SITES}-site limit", chain.n)));
    }
    if opts.tol.is_nan() || opts.tol <= 0.0 || opts.max_iter == 0 || opts.krylov_dim < 2 {
        return invalid("Lanczos needs tol > 0, max_iter ≥ 1, krylov_dim ≥ 2");
    }
    let dim = chain.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut start: Vec<C64> =
        (0..dim).map(|_| C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))).collect();
    let s = norm(&start);
    start.iter_mut().for_each(|z| *z /= s);

    let krylov = opts.krylov_dim.min(dim);
    let mut matvecs = 0;
    loop {
        let mut basis: Vec<Vec<C64>> = vec![start.clone()];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        loop {
            let j = basis.len() - 1;
            let mut w = chain.apply(&basis[j])?;
            matvecs += 1;
            let alpha = dot(&basis[j], &w).re;
            // Gram-Schmidt against the whole basis, repeated only when the
            // first pass cancels most of the vector.
            let mut before = norm(&w);
            let mut beta = before;
            for _ in 0..3 {
                for b in &basis {
                    let p = dot(b, &w);
                    w.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
                }
                beta = norm(&w);
                if beta > 0.7 * before || beta == 0.0 {
                    break;
                }
                before = beta;
            }
            alphas.push(alpha);
            let (theta, y) = lowest_tridiagonal(&alphas, &betas);
            let estimate = beta * y[j].abs();
            let exhausted = basis.len() == krylov || beta <= 1e-14 * theta.abs().max(1.0);
            if estimate <= opts.tol * theta.abs() || exhausted || matvecs >= opts.max_iter {
                let mut x = vec![C64::new(0.0, 0.0); dim];
                for (yk, b) in y.iter().zip(&basis) {
                    x.iter_mut().zip(b).for_each(|(xi, bi)| *xi += bi * *yk);
                }
                let nx = norm(&x);
                x.iter_mut().for_each(|z| *z /= nx);
                let hx = chain.apply(&x)?;
                matvecs += 1;
                let energy = dot(&x, &hx).re;
                let residual = hx.iter().zip(&x).map(|(a, b)| (a - b * energy).norm_sqr()).sum::<f64>().sqrt();
                let target = opts.tol * if energy == 0.0 { 1.0 } else { energy.abs() };
                if residual <= target {
                    let state = DenseState::from_unnormalized(chain.n, 2, x)?;
                    return Ok(GroundState { energy, state, residual, matvecs });
                }
                if matvecs >= opts.max_iter {
                    return Err(Error::NumericalFailure(format!(
                        "Lanczos did not converge in {} matrix-vector products (residual {residual:e})",
                        opts.max_iter
                    )));
                }
                start = x;
                break;
            }
            w.iter_mut().for_each(|z| *z /= beta);
            betas.push(beta);
            basis.push(w);
        }
    }
}

/// Block length entering the entropy fit: the chord `(n/π)·sin(πl/n)` for
/// periodic chains, `l` itself for open chains.
pub fn chord(l: usize, n: usize, boundary: Boundary) -> f64 {
    match boundary {
        Boundary::Periodic => n as f64 / PI * (PI * l as f64 / n as f64).sin(),
        Boundary::Open => l as f64,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub l: usize,
    /// Block entropy in nats.
    pub entropy: f64,
    pub chord: f64,
}

/// Least-squares fit of `S_l` against `(c/3)·ln chord(l) + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentralChargeFit {
    pub c: f64,
    pub intercept: f64,
    /// Root-mean-square deviation of the fit, nats.
    pub residual: f64,
    /// Coefficient of determination.
    pub r_squared: f64,
}

/// Fits scoring below this coefficient of determination are flagged as not
/// following the logarithmic law.
pub const FIT_QUALITY_THRESHOLD: f64 = 0.99;

impl CentralChargeFit {
    pub fn is_poor(&self) -> bool {
        self.r_squared.is_nan() || self.r_squared < FIT_QUALITY_THRESHOLD
    }
}

#[derive(Clone, Debug)]
pub struct EntropyScan {
    pub n: usize,
    pub h: f64,
    pub boundary: Boundary,
    pub energy: f64,
    pub entries: Vec<ScanEntry>,
    pub fit: Option<CentralChargeFit>,
    /// The ground state the entropies were read from.
    pub state: DenseState,
}

impl EntropyScan {
    pub fn fitted_c(&self) -> Option<f64> {
        self.fit.map(|f| f.c)
    }

    pub fn fit_residual(&self) -> Option<f64> {
        self.fit.map(|f| f.residual)
    }

    /// Entropy at block length `l`.
    pub fn entropy(&self, l: usize) -> Option<f64> {
        self.entries.iter().find(|e| e.l == l).map(|e| e.entropy)
    }
}

/// Block entropies `S_l`, `l = 1..n−1`, of a given chain state.
pub fn scan_state(chain: &IsingChain, energy: f64, state: DenseState) -> Result<EntropyScan> {
    if state.n() != chain.n || state.d() != 2 {
        return invalid("state does not match the chain");
    }
    // cuts are independent; one scoped thread each
    let entries = std::thread::scope(|scope| {
        let handles: Vec<_> = (1..chain.n)
            .map(|l| {
                let state = &state;
                scope.spawn(move || -> Result<ScanEntry> {
                    let entropy = schmidt_spectrum(state, l)?.entropy();
                    Ok(ScanEntry { l, entropy, chord: chord(l, chain.n, chain.boundary) })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("entropy worker panicked")).collect::<Result<Vec<_>>>()
    })?;
    let mut scan = EntropyScan { n: chain.n, h: chain.h, boundary: chain.boundary, energy, entries, fit: None, state };
    scan.fit = fit_central_charge(&scan).ok();
    Ok(scan)
}

/// Ground state plus block-entropy scan.
pub fn entropy_scan(chain: &IsingChain, opts: &LanczosOptions) -> Result<EntropyScan> {
    let gs = ground_state(chain, opts)?;
    scan_state(chain, gs.energy, gs.state)
}

pub fn fit_central_charge(scan: &EntropyScan) -> Result<CentralChargeFit> {
    let points: Vec<(f64, f64)> = scan
        .entries
        .iter()
        .filter(|e| e.chord > 0.0 && e.entropy.is_finite())
        .map(|e| (e.chord.ln(), e.entropy))
        .collect();
    if points.len() < 3 {
        return invalid(format!("central charge fit needs at least 3 points, got {}", points.len()));
    }
    let (slope, intercept, residual, r_squared) = linear_fit(&points)?;
    Ok(CentralChargeFit { c: 3.0 * slope, intercept, residual, r_squared })
}

/// Ordinary least squares `y = a·x + b`; returns `(a, b, rms, R²)`.
fn linear_fit(points: &[(f64, f64)]) -> Result<(f64, f64, f64, f64)> {
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return invalid("fit abscissae are all equal");
    }
    let a = sxy / sxx;
    let b = my - a * mx;
    let sse: f64 = points.iter().map(|p| (p.1 - a * p.0 - b).powi(2)).sum();
    let rms = (sse / m).sqrt();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Ok((a, b, rms, r2))
}

/// Minimal `χ` per cut `l = 1..n−1` whose top Schmidt weights keep squared
/// mass `≥ target`.
pub fn chi_requirement(state: &DenseState, target: f64) -> Result<Vec<usize>> {
    if !(target > 0.0 && target <= 1.0) {
        return invalid(format!("fidelity target must lie in (0, 1], got {target}"));
    }
    (1..state.n()).map(|l| Ok(schmidt_spectrum(state, l)?.chi_for_mass(target))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiEntry {
    pub l: usize,
    pub chi_required: usize,
    /// `l^{c/6}` using the fitted central charge.
    pub chi_predicted: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiProfile {
    pub target: f64,
    pub entries: Vec<ChiEntry>,
    /// Slope of `ln χ(l)` against `ln chord(l)` over `l ≤ n/2`, when
    /// defined.
    pub exponent: Option<f64>,
}

/// Measured `χ(l)` for a scan's ground state, next to `l^{c/6}`.
pub fn chi_profile(scan: &EntropyScan, target: f64) -> Result<ChiProfile> {
    let chis = chi_requirement(&scan.state, target)?;
    let c = scan.fitted_c();
    let entries: Vec<ChiEntry> = chis
        .iter()
        .enumerate()
        .map(|(k, &chi)| {
            let l = k + 1;
            ChiEntry { l, chi_required: chi, chi_predicted: c.map(|c| (l as f64).powf(c / 6.0)) }
        })
        .collect();
    let points: Vec<(f64, f64)> = entries
        .iter()
        .filter(|e| 2 * e.l <= scan.n)
        .map(|e| (chord(e.l, scan.n, scan.boundary).ln(), (e.chi_required as f64).ln()))
        .collect();
    let exponent = linear_fit(&points).ok().map(|f| f.0);
    Ok(ChiProfile { target, entries, exponent })
}
