//! Grey images as `d = 4` states through telescopic quadrant addressing,
//! compressed by MPS truncation.
//!
//! At level `k` the pixel's quadrant label is `q_k = 1 + 2·r_k + c_k`, with
//! `r_k`, `c_k` the `k`-th most significant bits of row and column
//! (1 = top-left, 2 = top-right, 3 = bottom-left, 4 = bottom-right). Site `k`
//! carries local index `q_k − 1`.

use std::path::Path;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::mps::{from_mps, to_mps};
use crate::state::{DenseState, DISCARD_TOL};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    max_value: u16,
    pixels: Vec<u16>,
    orig_width: usize,
    orig_height: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PgmFormat {
    /// ASCII raster.
    P2,
    /// Binary raster.
    P5,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, max_value: u16, pixels: Vec<u16>) -> Result<Self> {
        if width == 0 || height == 0 {
            return invalid(format!("image must be non-empty, got {width}x{height}"));
        }
        if max_value == 0 {
            return invalid("max grey value must be positive");
        }
        if pixels.len() != width * height {
            return invalid(format!("{} pixels for a {width}x{height} image", pixels.len()));
        }
        if let Some(&p) = pixels.iter().find(|&&p| p > max_value) {
            return invalid(format!("pixel value {p} exceeds max value {max_value}"));
        }
        Ok(Self { width, height, max_value, pixels, orig_width: width, orig_height: height })
    }

    pub fn uniform(width: usize, height: usize, max_value: u16, value: u16) -> Result<Self> {
        Self::new(width, height, max_value, vec![value; width * height])
    }

    /// Uniformly distributed grey levels from a seeded ChaCha8 stream.
    pub fn random(width: usize, height: usize, max_value: u16, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pixels = (0..width * height).map(|_| rng.random_range(0..=max_value)).collect();
        Self::new(width, height, max_value, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn max_value(&self) -> u16 {
        self.max_value
    }

    pub fn pixels(&self) -> &[u16] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> u16 {
        self.pixels[row * self.width + col]
    }

    /// Dimensions before padding.
    pub fn orig_width(&self) -> usize {
        self.orig_width
    }

    pub fn orig_height(&self) -> usize {
        self.orig_height
    }

    /// `n` when the image is a `2^n × 2^n` square with `n ≥ 1`.
    pub fn levels(&self) -> Option<usize> {
        (self.width == self.height && self.width >= 2 && self.width.is_power_of_two())
            .then(|| self.width.trailing_zeros() as usize)
    }

    /// Zero-padded to the next `2^n × 2^n` square (at least 2×2), remembering
    /// the current size as the original one.
    pub fn padded(&self) -> GrayImage {
        let side = self.width.max(self.height).next_power_of_two().max(2);
        let mut pixels = vec![0u16; side * side];
        for r in 0..self.height {
            pixels[r * side..r * side + self.width].copy_from_slice(&self.pixels[r * self.width..(r + 1) * self.width]);
        }
        GrayImage {
            width: side,
            height: side,
            max_value: self.max_value,
            pixels,
            orig_width: self.orig_width.min(self.width),
            orig_height: self.orig_height.min(self.height),
        }
    }

    /// The top-left `orig_width × orig_height` region.
    pub fn cropped(&self) -> GrayImage {
        let (w, h) = (self.orig_width, self.orig_height);
        let pixels = (0..h).flat_map(|r| self.pixels[r * self.width..r * self.width + w].iter().copied()).collect();
        GrayImage { width: w, height: h, max_value: self.max_value, pixels, orig_width: w, orig_height: h }
    }

    pub fn parse_pgm(bytes: &[u8]) -> Result<Self> {
        let mut pos = 0;
        let mut token = || -> Result<String> {
            loop {
                while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                    pos += 1;
                }
                if pos < bytes.len() && bytes[pos] == b'#' {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                    continue;
                }
                break;
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() && bytes[pos] != b'#' {
                pos += 1;
            }
            if start == pos {
                return invalid("truncated PGM header");
            }
            Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
        };
        let magic = token()?;
        let format = match magic.as_str() {
            "P2" => PgmFormat::P2,
            "P5" => PgmFormat::P5,
            other => return invalid(format!("unsupported PGM magic {other:?}")),
        };
        let mut number = |what: &str| -> Result<usize> {
            token()?.parse().map_err(|_| Error::InvalidInput(format!("bad PGM {what}")))
        };
        let width = number("width")?;
        let height = number("height")?;
        let max = number("max value")?;
        if max == 0 || max > u16::MAX as usize {
            return invalid(format!("PGM max value {max} outside 1..=65535"));
        }
        let count = width * height;
        let pixels: Vec<u16> = match format {
            PgmFormat::P2 => (0..count)
                .map(|_| {
                    let v = number("pixel")?;
                    u16::try_from(v).map_err(|_| Error::InvalidInput(format!("pixel value {v} too large")))
                })
                .collect::<Result<_>>()?,
            PgmFormat::P5 => {
                // exactly one whitespace byte separates the header from the raster
                let start = pos + 1;
                let wide = max > 255;
                let need = count * if wide { 2 } else { 1 };
                let raster =
                    bytes.get(start..start + need).ok_or_else(|| Error::InvalidInput("truncated PGM raster".into()))?;
                if wide {
                    raster.chunks_exact(2).map(|b| u16::from_be_bytes([b[0], b[1]])).collect()
                } else {
                    raster.iter().map(|&b| b as u16).collect()
                }
            }
        };
        Self::new(width, height, max as u16, pixels)
    }

    pub fn to_pgm(&self, format: PgmFormat) -> Vec<u8> {
        let header = |magic: &str| format!("{magic}\n{} {}\n{}\n", self.width, self.height, self.max_value);
        match format {
            PgmFormat::P2 => {
                let mut out = header("P2");
                for row in self.pixels.chunks(self.width) {
                    let line: Vec<String> = row.iter().map(u16::to_string).collect();
                    out.push_str(&line.join(" "));
                    out.push('\n');
                }
                out.into_bytes()
            }
            PgmFormat::P5 => {
                let mut out = header("P5").into_bytes();
                if self.max_value > 255 {
                    out.extend(self.pixels.iter().flat_map(|p| p.to_be_bytes()));
                } else {
                    out.extend(self.pixels.iter().map(|&p| p as u8));
                }
                out
            }
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_pgm(&std::fs::read(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>, format: PgmFormat) -> Result<()> {
        std::fs::write(path, self.to_pgm(format))?;
        Ok(())
    }
}

/// Quadrant labels `q_1 … q_n ∈ {1,2,3,4}` of pixel `(row, col)` in a
/// `2^n × 2^n` image.
pub fn quad_index(row: usize, col: usize, levels: usize) -> Result<Vec<u8>> {
    let side = 1usize.checked_shl(levels as u32).filter(|_| levels < usize::BITS as usize / 2);
    let Some(side) = side else {
        return invalid(format!("{levels} levels are too many"));
    };
    if row >= side || col >= side {
        return invalid(format!("pixel ({row}, {col}) outside a {side}x{side} image"));
    }
    Ok((0..levels).rev().map(|b| 1 + 2 * ((row >> b) & 1) as u8 + ((col >> b) & 1) as u8).collect())
}

/// Inverse of [`quad_index`].
pub fn quad_coords(labels: &[u8]) -> Result<(usize, usize)> {
    labels.iter().try_fold((0usize, 0usize), |(r, c), &q| {
        if !(1..=4).contains(&q) {
            return invalid(format!("quadrant label {q} outside 1..=4"));
        }
        let local = (q - 1) as usize;
        Ok((2 * r + local / 2, 2 * c + local % 2))
    })
}

/// Flat big-endian `d = 4` index: row and column bits interleaved.
fn flat_index(row: usize, col: usize, levels: usize) -> usize {
    (0..levels).rev().fold(0, |acc, b| 4 * acc + 2 * ((row >> b) & 1) + ((col >> b) & 1))
}

/// Grey levels as amplitudes (padded to a `2^n` square first), normalized;
/// returns the state and the norm that inverts the scaling.
pub fn image_to_state(img: &GrayImage) -> Result<(DenseState, f64)> {
    let img = if img.levels().is_some() { img.clone() } else { img.padded() };
    let n = img.levels().expect("padded image is a power-of-two square");
    let side = img.width;
    let mut amps = vec![C64::new(0.0, 0.0); side * side];
    for r in 0..side {
        for c in 0..side {
            amps[flat_index(r, c, n)] = C64::new(img.get(r, c) as f64, 0.0);
        }
    }
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return invalid("an all-black image has no normalizable state");
    }
    amps.iter_mut().for_each(|z| *z /= norm);
    Ok((DenseState::new(n, 4, amps)?, norm))
}

/// `pixel = clamp(round(Re(amplitude)·norm), 0, max_value)`, cropped to the
/// original size.
pub fn state_to_image(
    state: &DenseState,
    norm: f64,
    max_value: u16,
    orig_width: usize,
    orig_height: usize,
) -> Result<GrayImage> {
    if state.d() != 4 {
        return invalid(format!("image states have d = 4, got d = {}", state.d()));
    }
    let n = state.n();
    let side = 1usize << n;
    if orig_width == 0 || orig_height == 0 || orig_width > side || orig_height > side {
        return invalid(format!("{orig_width}x{orig_height} does not fit in a {side}x{side} state"));
    }
    let amps = state.amplitudes();
    let mut pixels = vec![0u16; side * side];
    for r in 0..side {
        for c in 0..side {
            let v = (amps[flat_index(r, c, n)].re * norm).round();
            pixels[r * side + c] = v.clamp(0.0, max_value as f64) as u16;
        }
    }
    let mut img = GrayImage::new(side, side, max_value, pixels)?;
    img.orig_width = orig_width;
    img.orig_height = orig_height;
    Ok(img.cropped())
}

/// `10·log10(max² / MSE)`; `None` when the images are identical.
pub fn psnr(reference: &GrayImage, other: &GrayImage) -> Result<Option<f64>> {
    if reference.width != other.width || reference.height != other.height {
        return invalid("PSNR needs images of equal size");
    }
    let mse = mean_squared_error(reference, other);
    let peak = reference.max_value as f64;
    Ok((mse > 0.0).then(|| 10.0 * (peak * peak / mse).log10()))
}

fn mean_squared_error(a: &GrayImage, b: &GrayImage) -> f64 {
    let sse: f64 = a.pixels.iter().zip(&b.pixels).map(|(&x, &y)| (x as f64 - y as f64).powi(2)).sum();
    sse / a.pixels.len() as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodecReport {
    pub chi: usize,
    pub levels: usize,
    pub orig_width: usize,
    pub orig_height: usize,
    /// Largest bond of the exact decomposition.
    pub max_bond_exact: usize,
    pub params_stored: usize,
    /// `4^n`.
    pub params_raw: usize,
    pub mse: f64,
    /// dB; `None` for an exact reconstruction.
    pub psnr: Option<f64>,
    pub lossless: bool,
    pub truncation_error: f64,
}

/// Encode, cap every bond at `chi`, decode. The decoded state is rescaled by
/// `norm·⟨ψ|φ⟩`, the least-squares amplitude of the truncated direction.
pub fn compress(img: &GrayImage, chi: usize) -> Result<(GrayImage, CodecReport)> {
    if chi == 0 {
        return invalid("chi must be at least 1");
    }
    let reference = img.cropped();
    let padded = img.padded();
    let levels = padded.levels().expect("padded");
    let (state, norm) = image_to_state(&padded)?;
    let exact = to_mps(&state, None, DISCARD_TOL)?;
    let (truncated, truncation_error) = exact.truncate(chi)?;
    let approx = from_mps(&truncated)?;
    let scale = norm * state.overlap(&approx)?.re;
    let out = state_to_image(&approx, scale, img.max_value, reference.width, reference.height)?;
    let mse = mean_squared_error(&reference, &out);
    let report = CodecReport {
        chi,
        levels,
        orig_width: reference.width,
        orig_height: reference.height,
        max_bond_exact: exact.max_bond(),
        params_stored: truncated.parameter_count(),
        params_raw: 1 << (2 * levels),
        mse,
        psnr: psnr(&reference, &out)?,
        lossless: mse == 0.0,
        truncation_error,
    };
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrant_labels() {
        assert_eq!(quad_index(0, 0, 1).unwrap(), vec![1]);
        assert_eq!(quad_index(0, 1, 1).unwrap(), vec![2]);
        assert_eq!(quad_index(1, 0, 1).unwrap(), vec![3]);
        assert_eq!(quad_index(3, 3, 2).unwrap(), vec![4, 4]);
        assert_eq!(quad_index(1, 2, 2).unwrap(), vec![2, 3]);
        assert!(matches!(quad_index(4, 0, 2), Err(Error::InvalidInput(_))));
        assert!(quad_coords(&[5]).is_err());
    }

    #[test]
    fn flat_index_agrees_with_labels() {
        for r in 0..8 {
            for c in 0..8 {
                let q = quad_index(r, c, 3).unwrap();
                let flat = q.iter().fold(0, |acc, &l| 4 * acc + (l - 1) as usize);
                assert_eq!(flat, flat_index(r, c, 3));
            }
        }
    }

    #[test]
    fn image_validation() {
        assert!(GrayImage::new(2, 2, 255, vec![0; 3]).is_err());
        assert!(GrayImage::new(2, 2, 10, vec![0, 11, 0, 0]).is_err());
        assert!(GrayImage::new(0, 2, 255, vec![]).is_err());
        let black = GrayImage::uniform(4, 4, 255, 0).unwrap();
        assert!(matches!(image_to_state(&black), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn padding_and_cropping() {
        let img = GrayImage::new(3, 1, 255, vec![1, 2, 3]).unwrap();
        let p = img.padded();
        assert_eq!((p.width(), p.height(), p.levels()), (4, 4, Some(2)));
        assert_eq!(&p.pixels()[..4], &[1, 2, 3, 0]);
        assert_eq!(p.cropped(), img);
        let tiny = GrayImage::uniform(1, 1, 255, 9).unwrap().padded();
        assert_eq!(tiny.levels(), Some(1));
    }

    #[test]
    fn pgm_round_trips() {
        let img = GrayImage::random(5, 3, 255, 1).unwrap();
        for f in [PgmFormat::P2, PgmFormat::P5] {
            assert_eq!(GrayImage::parse_pgm(&img.to_pgm(f)).unwrap(), img);
        }
        let deep = GrayImage::random(4, 4, 1023, 2).unwrap();
        assert_eq!(GrayImage::parse_pgm(&deep.to_pgm(PgmFormat::P5)).unwrap(), deep);
        let commented = b"P2\n# note\n2 1\n# more\n7\n3 7\n";
        assert_eq!(GrayImage::parse_pgm(commented).unwrap().pixels(), &[3, 7]);
    }

    #[test]
    fn pgm_rejections() {
        assert!(GrayImage::parse_pgm(b"P6\n1 1\n255\n\0\0\0").is_err());
        assert!(GrayImage::parse_pgm(b"P5\n2 2\n255\n\0\0").is_err());
        assert!(GrayImage::parse_pgm(b"P2\n2 1\n5\n3 9\n").is_err());
        assert!(GrayImage::parse_pgm(b"P2\n2 1\n").is_err());
    }

    #[test]
    fn psnr_infinite_only_when_identical() {
        let a = GrayImage::uniform(2, 2, 255, 10).unwrap();
        let b = GrayImage::new(2, 2, 255, vec![10, 10, 10, 11]).unwrap();
        assert_eq!(psnr(&a, &a).unwrap(), None);
        let v = psnr(&a, &b).unwrap().unwrap();
        assert!((v - 10.0 * (255.0f64.powi(2) * 4.0).log10()).abs() < 1e-12);
    }
}
