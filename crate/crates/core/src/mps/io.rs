//! `QMPS 1` text format.
//!
//! ```text
//! QMPS 1
//! n d
//! chi_1
//! ...
//! chi_{n-1}
//! Γ[1] entries, then λ[1], Γ[2], λ[2], ..., Γ[n]
//! ```
//!
//! Every entry is one `re im` line. Tensor entries follow the
//! `(left, physical, right)` row-major order; bond weights are written with
//! a zero imaginary part. Floats use the shortest round-tripping decimal
//! form, so save/load is bit-exact.

use std::fmt::Write as _;
use std::path::Path;

use super::{Mps, SiteTensor};
use crate::error::{Error, Result};
use crate::state::{parse_complex_line, SchmidtSpectrum};

fn corrupt<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::CorruptMps(msg.into()))
}

impl Mps {
    pub fn to_qmps(&self) -> String {
        let mut out = format!("QMPS 1\n{} {}\n", self.n, self.d);
        for chi in self.bond_dims() {
            writeln!(out, "{chi}").unwrap();
        }
        for (k, g) in self.gammas.iter().enumerate() {
            for z in g.data() {
                writeln!(out, "{} {}", z.re, z.im).unwrap();
            }
            if let Some(lam) = self.lambdas.get(k) {
                for w in lam.weights() {
                    writeln!(out, "{w} 0").unwrap();
                }
            }
        }
        out
    }

    pub fn parse_qmps(text: &str) -> Result<Mps> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        if lines.next() != Some("QMPS 1") {
            return corrupt("missing `QMPS 1` header");
        }
        let dims: Vec<usize> = lines
            .next()
            .unwrap_or("")
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::CorruptMps("bad `n d` line".into()))?;
        let [n, d] = dims[..] else {
            return corrupt("dimension line must be `n d`");
        };
        if n == 0 || d < 2 {
            return corrupt(format!("invalid shape n={n}, d={d}"));
        }
        let mut bonds = vec![1usize];
        for k in 1..n {
            let chi: usize = lines
                .next()
                .and_then(|l| l.parse().ok())
                .ok_or_else(|| Error::CorruptMps(format!("missing bond dimension {k}")))?;
            if chi == 0 {
                return corrupt(format!("bond {k} has dimension 0"));
            }
            bonds.push(chi);
        }
        bonds.push(1);

        let mut next_entry = || -> Result<num_complex::Complex64> {
            let line = lines.next().ok_or_else(|| Error::CorruptMps("truncated tensor stream".into()))?;
            parse_complex_line(line).map_err(|e| Error::CorruptMps(e.to_string()))
        };
        let mut gammas = Vec::with_capacity(n);
        let mut lambdas = Vec::with_capacity(n - 1);
        for k in 0..n {
            let (l, r) = (bonds[k], bonds[k + 1]);
            let data = (0..l * d * r).map(|_| next_entry()).collect::<Result<Vec<_>>>()?;
            gammas.push(SiteTensor::new(l, d, r, data)?);
            if k + 1 < n {
                let weights = (0..r)
                    .map(|_| {
                        let z = next_entry()?;
                        if z.im != 0.0 {
                            return corrupt("bond weights must be real");
                        }
                        Ok(z.re)
                    })
                    .collect::<Result<Vec<_>>>()?;
                lambdas.push(SchmidtSpectrum::new(weights).map_err(|e| Error::CorruptMps(e.to_string()))?);
            }
        }
        if lines.next().is_some() {
            return corrupt("trailing data after tensor stream");
        }
        Mps::from_parts(d, gammas, lambdas)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Mps> {
        Self::parse_qmps(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_qmps())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mps::to_mps;
    use crate::state::{DenseState, DISCARD_TOL};

    #[test]
    fn save_load_is_bit_identical() {
        let mps = to_mps(&DenseState::random(6, 3, 99).unwrap(), None, DISCARD_TOL).unwrap();
        let text = mps.to_qmps();
        let back = Mps::parse_qmps(&text).unwrap();
        assert_eq!(back, mps);
        assert_eq!(back.to_qmps(), text);
    }

    #[test]
    fn rejects_corrupt_streams() {
        let mps = to_mps(&DenseState::ghz(3).unwrap(), None, DISCARD_TOL).unwrap();
        let text = mps.to_qmps();
        let short: String = text.lines().take(text.lines().count() - 1).map(|l| format!("{l}\n")).collect();
        assert!(matches!(Mps::parse_qmps(&short), Err(Error::CorruptMps(_))));
        let long = format!("{text}0 0\n");
        assert!(matches!(Mps::parse_qmps(&long), Err(Error::CorruptMps(_))));
        let wrong_chi = text.replacen("\n2\n", "\n3\n", 1);
        assert!(matches!(Mps::parse_qmps(&wrong_chi), Err(Error::CorruptMps(_))));
        assert!(Mps::parse_qmps("QSTATE 1\n").is_err());
    }
}
