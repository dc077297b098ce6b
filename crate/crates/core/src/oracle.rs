//! Classical ground truth: local adaptive threshold segmentation with cyclic
//! boundaries, a fixed-threshold baseline, exact-rational MSE, and the
//! threshold-adjustment precondition scan.
//!
//! Boundary handling is cyclic (torus) on both axes so that the classical
//! output is bit-comparable with the quantum pipeline, whose position shifts
//! wrap around. This differs from the zero/edge padding conventional in
//! classical adaptive thresholding and changes border pixels.

use thiserror::Error;

use crate::neqr::{BinaryImage, GrayImage};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("median requires an odd number of values, got {len}")]
    EvenLength { len: usize },

    #[error("threshold adjustment {z} outside [0, 2^{q})")]
    ZOutOfRange { z: u64, q: usize },

    #[error("fixed threshold {t} outside [0, 2^{q})")]
    TOutOfRange { t: u64, q: usize },

    #[error("image shapes differ: side {left} vs {right}")]
    ShapeMismatch { left: usize, right: usize },
}

/// Neighborhood window geometry, as `(dy, dx)` offsets including the center.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowShape {
    /// Center plus the four axis neighbors (5 offsets).
    Cross,
    /// The full 3x3 block (9 offsets).
    Square,
    /// Center plus the four diagonal neighbors (5 offsets).
    Diagonal,
}

impl WindowShape {
    pub fn offsets(self) -> &'static [(i64, i64)] {
        match self {
            WindowShape::Cross => &[(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)],
            WindowShape::Square => &[
                (-1, -1),
                (-1, 0),
                (-1, 1),
                (0, -1),
                (0, 0),
                (0, 1),
                (1, -1),
                (1, 0),
                (1, 1),
            ],
            WindowShape::Diagonal => &[(0, 0), (1, 1), (1, -1), (-1, 1), (-1, -1)],
        }
    }
}

/// The middle element of the sorted values. Length must be odd.
pub fn median_of_window(values: &[u16]) -> Result<u16, OracleError> {
    if values.is_empty() || values.len().is_multiple_of(2) {
        return Err(OracleError::EvenLength { len: values.len() });
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    Ok(sorted[sorted.len() / 2])
}

/// Window values around `(y, x)` with cyclic indexing, in offset order.
/// Wrapping can make offsets coincide on tiny images; values are collected
/// with that multiplicity, matching the quantum neighbor registers.
pub fn window_values(img: &GrayImage, y: usize, x: usize, window: WindowShape) -> Vec<u16> {
    window
        .offsets()
        .iter()
        .map(|&(dy, dx)| img.pixel_wrapped(y as i64 + dy, x as i64 + dx))
        .collect()
}

/// Output of the adaptive segmentation: the binary image, the per-pixel
/// thresholds, and the positions where `median < Z` forced a clamp to 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdaptiveOutput {
    pub binary: BinaryImage,
    /// Row-major per-pixel threshold T = median - Z (clamped at 0).
    pub thresholds: Vec<u16>,
    /// Positions where the unclamped threshold would have been negative.
    pub clamped: Vec<(usize, usize)>,
}

/// Per-pixel adaptive threshold segmentation: T = median(window) - Z, output
/// bit = [pixel >= T], cyclic boundaries.
///
/// Where `median < Z` the threshold is clamped at 0 and the position is
/// flagged; callers wanting parity with the quantum pipeline should reject
/// such inputs via [`check_z_precondition`] first.
pub fn adaptive_threshold_segment(
    img: &GrayImage,
    z: u64,
    window: WindowShape,
) -> Result<AdaptiveOutput, OracleError> {
    if z >= (1 << img.q()) {
        return Err(OracleError::ZOutOfRange { z, q: img.q() });
    }
    let side = img.side();
    let mut bits = Vec::with_capacity(side * side);
    let mut thresholds = Vec::with_capacity(side * side);
    let mut clamped = Vec::new();
    for y in 0..side {
        for x in 0..side {
            let median = median_of_window(&window_values(img, y, x, window)).expect("odd window");
            let t = if u64::from(median) >= z {
                median - z as u16
            } else {
                clamped.push((y, x));
                0
            };
            thresholds.push(t);
            bits.push(img.pixel(y, x) >= t);
        }
    }
    Ok(AdaptiveOutput {
        binary: BinaryImage::new(img.n(), bits).expect("size preserved"),
        thresholds,
        clamped,
    })
}

/// Global fixed-threshold baseline: bit = [pixel >= T].
pub fn fixed_threshold_segment(img: &GrayImage, t: u64) -> Result<BinaryImage, OracleError> {
    if t >= (1 << img.q()) {
        return Err(OracleError::TOutOfRange { t, q: img.q() });
    }
    let bits = img.pixels().iter().map(|&v| u64::from(v) >= t).collect();
    Ok(BinaryImage::new(img.n(), bits).expect("size preserved"))
}

/// Exact rational mean squared error with denominator 2^(2n).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mse {
    pub numerator: u64,
    pub denominator: u64,
}

impl Mse {
    pub fn as_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl std::fmt::Display for Mse {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}/{} ({})",
            self.numerator,
            self.denominator,
            self.as_f64()
        )
    }
}

fn mse_values(a: &[u16], b: &[u16]) -> Mse {
    debug_assert_eq!(a.len(), b.len());
    let numerator: u64 = a
        .iter()
        .zip(b)
        .map(|(&av, &bv)| {
            let d = i64::from(av) - i64::from(bv);
            (d * d) as u64
        })
        .sum();
    Mse {
        numerator,
        denominator: a.len() as u64,
    }
}

pub fn mse_gray(a: &GrayImage, b: &GrayImage) -> Result<Mse, OracleError> {
    if a.side() != b.side() {
        return Err(OracleError::ShapeMismatch {
            left: a.side(),
            right: b.side(),
        });
    }
    Ok(mse_values(a.pixels(), b.pixels()))
}

pub fn mse_binary(a: &BinaryImage, b: &BinaryImage) -> Result<Mse, OracleError> {
    if a.side() != b.side() {
        return Err(OracleError::ShapeMismatch {
            left: a.side(),
            right: b.side(),
        });
    }
    let to_u16 =
        |img: &BinaryImage| -> Vec<u16> { img.bits().iter().map(|&b| u16::from(b)).collect() };
    Ok(mse_values(&to_u16(a), &to_u16(b)))
}

/// Positions whose window median is below Z. An empty result means the
/// quantum pipeline's subtractor precondition (median >= Z everywhere)
/// holds and the circuit may be built.
pub fn check_z_precondition(img: &GrayImage, z: u64, window: WindowShape) -> Vec<(usize, usize)> {
    let side = img.side();
    let mut out = Vec::new();
    for y in 0..side {
        for x in 0..side {
            let median = median_of_window(&window_values(img, y, x, window)).expect("odd window");
            if u64::from(median) < z {
                out.push((y, x));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn img_2x2() -> GrayImage {
        GrayImage::new(1, 2, vec![0, 1, 2, 3]).unwrap()
    }

    #[test]
    fn median_examples() {
        assert_eq!(median_of_window(&[2, 7, 3, 0, 5]).unwrap(), 3);
        assert_eq!(median_of_window(&[4, 4, 4, 4, 4]).unwrap(), 4);
        assert_eq!(
            median_of_window(&[1, 2]).unwrap_err(),
            OracleError::EvenLength { len: 2 }
        );
    }

    #[test]
    fn median_matches_full_sort_reference() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let vals: Vec<u16> = (0..5).map(|_| rng.gen_range(0..16)).collect();
            let mut sorted = vals.clone();
            sorted.sort_unstable();
            assert_eq!(median_of_window(&vals).unwrap(), sorted[2]);
        }
    }

    #[test]
    fn cross_window_on_tiny_torus_repeats_neighbors() {
        // pixel (0,0) of a 2x2 torus: up and down both wrap to (1,0), left
        // and right both to (0,1)
        let w = window_values(&img_2x2(), 0, 0, WindowShape::Cross);
        let mut sorted = w.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 1, 2, 2]);
    }

    #[test]
    fn adaptive_hand_example_on_2x2() {
        // Z = 0: each median as hand evaluated; pixel (0,0) = 0 has median 1
        // so its bit clears
        let out = adaptive_threshold_segment(&img_2x2(), 0, WindowShape::Cross).unwrap();
        assert_eq!(out.thresholds[0], 1);
        assert!(!out.binary.bit(0, 0));
        assert!(out.clamped.is_empty());
    }

    #[test]
    fn constant_image_is_all_ones() {
        let img = GrayImage::new(2, 3, vec![5; 16]).unwrap();
        for z in [0u64, 1, 5] {
            let out = adaptive_threshold_segment(&img, z, WindowShape::Cross).unwrap();
            assert!(out.binary.bits().iter().all(|&b| b), "z={z}");
        }
    }

    #[test]
    fn z_out_of_range() {
        assert_eq!(
            adaptive_threshold_segment(&img_2x2(), 4, WindowShape::Cross).unwrap_err(),
            OracleError::ZOutOfRange { z: 4, q: 2 }
        );
    }

    #[test]
    fn clamping_is_flagged() {
        let img = GrayImage::new(1, 2, vec![0, 0, 0, 3]).unwrap();
        let out = adaptive_threshold_segment(&img, 1, WindowShape::Cross).unwrap();
        assert!(!out.clamped.is_empty());
    }

    #[test]
    fn fixed_threshold_examples() {
        let img = img_2x2();
        assert!(fixed_threshold_segment(&img, 0)
            .unwrap()
            .bits()
            .iter()
            .all(|&b| b));
        let at_max = fixed_threshold_segment(&img, 3).unwrap();
        assert_eq!(at_max.bits(), &[false, false, false, true]);
        assert!(fixed_threshold_segment(&img, 4).is_err());
    }

    #[test]
    fn mse_examples() {
        let a = GrayImage::new(2, 3, vec![1; 16]).unwrap();
        assert_eq!(
            mse_gray(&a, &a).unwrap(),
            Mse {
                numerator: 0,
                denominator: 16
            }
        );
        let mut p = vec![1u16; 16];
        p[5] = 3; // one pixel differs by 2
        let b = GrayImage::new(2, 3, p).unwrap();
        let m = mse_gray(&a, &b).unwrap();
        assert_eq!(
            m,
            Mse {
                numerator: 4,
                denominator: 16
            }
        );
        assert!((m.as_f64() - 0.25).abs() < 1e-15);
        assert_eq!(mse_gray(&a, &b).unwrap(), mse_gray(&b, &a).unwrap());
        let small = GrayImage::new(1, 3, vec![0; 4]).unwrap();
        assert!(mse_gray(&a, &small).is_err());
    }

    #[test]
    fn z_precondition_scan() {
        let img = img_2x2();
        assert!(check_z_precondition(&img, 0, WindowShape::Cross).is_empty());
        let zeros = GrayImage::new(1, 2, vec![0; 4]).unwrap();
        assert_eq!(check_z_precondition(&zeros, 1, WindowShape::Cross).len(), 4);
        // violations agree with a brute-force median scan
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let pixels: Vec<u16> = (0..16).map(|_| rng.gen_range(0..8)).collect();
            let img = GrayImage::new(2, 3, pixels).unwrap();
            let z = rng.gen_range(0..8u64);
            let scan = check_z_precondition(&img, z, WindowShape::Cross);
            for y in 0..4 {
                for x in 0..4 {
                    let med =
                        median_of_window(&window_values(&img, y, x, WindowShape::Cross)).unwrap();
                    assert_eq!(scan.contains(&(y, x)), u64::from(med) < z);
                }
            }
        }
    }

    #[test]
    fn raising_z_never_clears_a_set_bit() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..50 {
            let pixels: Vec<u16> = (0..16).map(|_| rng.gen_range(0..8)).collect();
            let img = GrayImage::new(2, 3, pixels).unwrap();
            let mut prev = adaptive_threshold_segment(&img, 0, WindowShape::Cross).unwrap();
            for z in 1..4u64 {
                let cur = adaptive_threshold_segment(&img, z, WindowShape::Cross).unwrap();
                for (p, c) in prev.binary.bits().iter().zip(cur.binary.bits()) {
                    assert!(!(*p && !c), "bit cleared when z rose to {z}");
                }
                prev = cur;
            }
        }
    }

    #[test]
    fn adaptive_output_translates_with_the_torus() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let pixels: Vec<u16> = (0..16).map(|_| rng.gen_range(0..8)).collect();
        let img = GrayImage::new(2, 3, pixels).unwrap();
        let shifted_pixels: Vec<u16> = (0..16)
            .map(|i| {
                let (y, x) = (i / 4, i % 4);
                img.pixel_wrapped(y as i64 - 1, x as i64 - 2)
            })
            .collect();
        let shifted = GrayImage::new(2, 3, shifted_pixels).unwrap();
        let out = adaptive_threshold_segment(&img, 1, WindowShape::Cross).unwrap();
        let out_shifted = adaptive_threshold_segment(&shifted, 1, WindowShape::Cross).unwrap();
        for y in 0..4usize {
            for x in 0..4usize {
                let (sy, sx) = ((y + 1) % 4, (x + 2) % 4);
                assert_eq!(out.binary.bit(y, x), out_shifted.binary.bit(sy, sx));
            }
        }
    }

    #[test]
    fn square_and_diagonal_windows_have_expected_sizes() {
        assert_eq!(WindowShape::Cross.offsets().len(), 5);
        assert_eq!(WindowShape::Square.offsets().len(), 9);
        assert_eq!(WindowShape::Diagonal.offsets().len(), 5);
        let img = img_2x2();
        for w in [WindowShape::Square, WindowShape::Diagonal] {
            let out = adaptive_threshold_segment(&img, 0, w).unwrap();
            assert_eq!(out.binary.bits().len(), 4);
        }
    }
}
