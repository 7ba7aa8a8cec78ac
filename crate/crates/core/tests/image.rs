use std::collections::HashSet;

use mpskit::image::{compress, image_to_state, quad_coords, quad_index, state_to_image, GrayImage, PgmFormat};
use mpskit::mps::to_mps;
use mpskit::state::DISCARD_TOL;

#[test]
fn quadrant_addressing_is_bijective() {
    for n in 1..=4 {
        let side = 1 << n;
        let mut seen = HashSet::new();
        for r in 0..side {
            for c in 0..side {
                let q = quad_index(r, c, n).unwrap();
                assert_eq!(quad_coords(&q).unwrap(), (r, c));
                assert!(seen.insert(q));
            }
        }
        assert_eq!(seen.len(), side * side);
    }
}

#[test]
fn uniform_and_single_pixel_images_are_products() {
    let uniform = GrayImage::uniform(8, 8, 255, 77).unwrap();
    let mut single = vec![0u16; 64];
    single[8 * 5 + 2] = 255;
    let single = GrayImage::new(8, 8, 255, single).unwrap();
    for img in [uniform, single] {
        let (state, norm) = image_to_state(&img).unwrap();
        let mps = to_mps(&state, None, DISCARD_TOL).unwrap();
        assert_eq!(mps.bond_dims(), vec![1, 1]);
        assert_eq!(state_to_image(&state, norm, 255, 8, 8).unwrap(), img);
        let (out, report) = compress(&img, 1).unwrap();
        assert_eq!(out, img);
        assert!(report.lossless && report.psnr.is_none());
    }
}

#[test]
fn small_random_image_round_trips() {
    let img = GrayImage::random(4, 4, 255, 3).unwrap();
    let (state, norm) = image_to_state(&img).unwrap();
    assert_eq!(state_to_image(&state, norm, 255, 4, 4).unwrap(), img);
    let (out, report) = compress(&img, 16).unwrap();
    assert_eq!(out, img);
    assert_eq!(report.params_raw, 16);
}

#[test]
fn full_chi_is_lossless_on_seeded_images() {
    for seed in 0..5 {
        let img = GrayImage::random(32, 32, 255, seed).unwrap();
        let (out, report) = compress(&img, 16).unwrap();
        assert_eq!(report.max_bond_exact, 16);
        assert!(report.lossless, "seed {seed}");
        assert_eq!(out, img);
    }
}

#[test]
fn psnr_monotone_and_storage_below_raw() {
    for seed in 100..103 {
        let img = GrayImage::random(32, 32, 255, seed).unwrap();
        let mut last = f64::NEG_INFINITY;
        for chi in [1, 2, 4, 8, 16] {
            let (_, report) = compress(&img, chi).unwrap();
            let p = report.psnr.unwrap_or(f64::INFINITY);
            assert!(p >= last, "seed {seed} chi {chi}: {p} < {last}");
            last = p;
            if chi < report.max_bond_exact {
                assert!(report.params_stored < report.params_raw);
            }
        }
    }
}

#[test]
fn odd_sized_image_is_padded_and_cropped() {
    let img = GrayImage::random(5, 3, 255, 4).unwrap();
    let (out, report) = compress(&img, 64).unwrap();
    assert_eq!((report.levels, report.orig_width, report.orig_height), (3, 5, 3));
    assert_eq!(out, img);
}

#[test]
fn pgm_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let img = GrayImage::random(6, 7, 200, 5).unwrap();
    for (name, f) in [("a.pgm", PgmFormat::P2), ("b.pgm", PgmFormat::P5)] {
        let path = dir.path().join(name);
        img.save(&path, f).unwrap();
        assert_eq!(GrayImage::load(&path).unwrap(), img);
    }
}
