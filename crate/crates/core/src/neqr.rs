//! Classical image types, the register layout of the segmentation pipeline,
//! the NEQR preparation oracle, and decoding of measured distributions back
//! into images.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arith::{AncillaSet, BuildError, RegisterRef};
use crate::sim::{Circuit, GateOp};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImageError {
    #[error("image side {side} is not a power of two")]
    NotPowerOfTwoSide { side: usize },

    #[error("side exponent {n} outside supported range 1..=15")]
    SideOutOfRange { n: usize },

    #[error("pixel value {value} at ({y},{x}) exceeds {q}-bit range")]
    PixelOutOfRange {
        y: usize,
        x: usize,
        value: u16,
        q: usize,
    },

    #[error("bit depth {q} outside supported range 1..=8")]
    DepthOutOfRange { q: usize },

    #[error("expected {expected} pixels, got {got}")]
    WrongPixelCount { expected: usize, got: usize },

    #[error("two gray patterns {first} and {second} share position ({y},{x})")]
    AmbiguousPixel {
        y: usize,
        x: usize,
        first: u64,
        second: u64,
    },

    #[error("no gray pattern observed for position ({y},{x})")]
    MissingPixel { y: usize, x: usize },

    #[error("position marginal is not uniform: ({y},{x}) has probability {p}")]
    NonuniformPositionMarginal { y: usize, x: usize, p: f64 },
}

/// A 2^n x 2^n grayscale image with q-bit pixels, row-major, row 0 first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    n: usize,
    q: usize,
    pixels: Vec<u16>,
}

impl GrayImage {
    /// Build from the side exponent: `side = 2^n`.
    pub fn new(n: usize, q: usize, pixels: Vec<u16>) -> Result<Self, ImageError> {
        if q == 0 || q > 8 {
            return Err(ImageError::DepthOutOfRange { q });
        }
        if n == 0 || n > 15 {
            return Err(ImageError::SideOutOfRange { n });
        }
        let side = 1usize << n;
        if pixels.len() != side * side {
            return Err(ImageError::WrongPixelCount {
                expected: side * side,
                got: pixels.len(),
            });
        }
        let img = GrayImage { n, q, pixels };
        img.validate()?;
        Ok(img)
    }

    /// Build from an explicit side length, which must be a power of two.
    pub fn from_side(side: usize, q: usize, pixels: Vec<u16>) -> Result<Self, ImageError> {
        if side == 0 || !side.is_power_of_two() {
            return Err(ImageError::NotPowerOfTwoSide { side });
        }
        GrayImage::new(side.trailing_zeros() as usize, q, pixels)
    }

    /// Check the type invariants (side and pixel range).
    pub fn validate(&self) -> Result<(), ImageError> {
        let side = self.side();
        let max = ((1u32 << self.q) - 1) as u16;
        for (i, &v) in self.pixels.iter().enumerate() {
            if v > max {
                return Err(ImageError::PixelOutOfRange {
                    y: i / side,
                    x: i % side,
                    value: v,
                    q: self.q,
                });
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn side(&self) -> usize {
        1 << self.n
    }

    pub fn pixel(&self, y: usize, x: usize) -> u16 {
        self.pixels[y * self.side() + x]
    }

    /// Pixel with cyclic (torus) indexing on both axes.
    pub fn pixel_wrapped(&self, y: i64, x: i64) -> u16 {
        let side = self.side() as i64;
        self.pixel(y.rem_euclid(side) as usize, x.rem_euclid(side) as usize)
    }

    pub fn pixels(&self) -> &[u16] {
        &self.pixels
    }
}

/// A 2^n x 2^n binary image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    n: usize,
    bits: Vec<bool>,
}

impl BinaryImage {
    pub fn new(n: usize, bits: Vec<bool>) -> Result<Self, ImageError> {
        if n == 0 || n > 15 {
            return Err(ImageError::SideOutOfRange { n });
        }
        let side = 1usize << n;
        if bits.len() != side * side {
            return Err(ImageError::WrongPixelCount {
                expected: side * side,
                got: bits.len(),
            });
        }
        Ok(BinaryImage { n, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn side(&self) -> usize {
        1 << self.n
    }

    pub fn bit(&self, y: usize, x: usize) -> bool {
        self.bits[y * self.side() + x]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

/// Qubit allocation of the segmentation pipeline: position registers, the
/// center gray register and its copy, the four neighbor registers, and the
/// shared arithmetic ancillas. Total 6q + 2n + 4 qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    n: usize,
    q: usize,
    pub x_pos: RegisterRef,
    pub y_pos: RegisterRef,
    pub center: RegisterRef,
    pub copy: RegisterRef,
    pub n_up: RegisterRef,
    pub n_down: RegisterRef,
    pub n_left: RegisterRef,
    pub n_right: RegisterRef,
    pub anc: AncillaSet,
}

impl RegisterLayout {
    pub fn new(n: usize, q: usize) -> Self {
        assert!(n >= 1 && q >= 1);
        let mut next = 0;
        let mut take = |w: usize| {
            let r = RegisterRef::from_range(next, w);
            next += w;
            r
        };
        let x_pos = take(n);
        let y_pos = take(n);
        let center = take(q);
        let copy = take(q);
        let n_up = take(q);
        let n_down = take(q);
        let n_left = take(q);
        let n_right = take(q);
        let anc = AncillaSet::new(next, next + 1, next + 2, next + 3).unwrap();
        RegisterLayout {
            n,
            q,
            x_pos,
            y_pos,
            center,
            copy,
            n_up,
            n_down,
            n_left,
            n_right,
            anc,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn total_qubits(&self) -> usize {
        6 * self.q + 2 * self.n + 4
    }

    /// All position qubits in control order: X bits then Y bits.
    pub fn position_qubits(&self) -> Vec<usize> {
        let mut v = self.x_pos.qubits().to_vec();
        v.extend_from_slice(self.y_pos.qubits());
        v
    }

    /// Measurement order for decoding a gray register: register bits, then
    /// Y bits, then X bits.
    pub fn gray_measurement_qubits(&self, reg: &RegisterRef) -> Vec<usize> {
        let mut v = reg.qubits().to_vec();
        v.extend_from_slice(self.y_pos.qubits());
        v.extend_from_slice(self.x_pos.qubits());
        v
    }

    /// Measurement order for the segmented output: the copy register's low
    /// bit, then Y bits, then X bits.
    pub fn binary_measurement_qubits(&self) -> Vec<usize> {
        let mut v = vec![self.copy.qubit(0)];
        v.extend_from_slice(self.y_pos.qubits());
        v.extend_from_slice(self.x_pos.qubits());
        v
    }
}

/// Whether a preparation fragment owns the H prefix that puts the position
/// registers into uniform superposition. Exactly one fragment per circuit
/// does; later oracle passes reuse the existing superposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrepRole {
    First,
    Shifted,
}

/// Build the NEQR preparation oracle writing `img` into `target`: for every
/// pixel, an MCX per set gray bit, controlled on the full position register
/// with X-conjugation around the pixel's gate group for position bits that
/// must be zero. Pixels equal to zero contribute no gates.
pub fn build_preparation(
    img: &GrayImage,
    target: &RegisterRef,
    layout: &RegisterLayout,
    role: PrepRole,
) -> Result<Circuit, BuildError> {
    if target.width() != layout.q() {
        return Err(BuildError::WidthMismatch {
            left: target.width(),
            right: layout.q(),
        });
    }
    assert_eq!(img.n(), layout.n(), "image and layout disagree on n");
    assert_eq!(img.q(), layout.q(), "image and layout disagree on q");
    let mut gates = Vec::new();
    if role == PrepRole::First {
        for &qb in &layout.position_qubits() {
            gates.push(GateOp::h(qb));
        }
    }
    let n = layout.n();
    let controls = layout.position_qubits();
    let side = 1usize << n;
    for y in 0..side {
        for x in 0..side {
            let gray = img.pixel(y, x);
            if gray == 0 {
                continue;
            }
            // position value on the control qubits: X bits then Y bits
            let pos_value = (x as u64) | ((y as u64) << n);
            let zero_controls: Vec<usize> = (0..2 * n)
                .filter(|&i| (pos_value >> i) & 1 == 0)
                .map(|i| controls[i])
                .collect();
            for &c in &zero_controls {
                gates.push(GateOp::x(c));
            }
            for k in 0..layout.q() {
                if (gray >> k) & 1 == 1 {
                    gates.push(GateOp::mcx(&controls, target.qubit(k)));
                }
            }
            for &c in &zero_controls {
                gates.push(GateOp::x(c));
            }
        }
    }
    Ok(Circuit::from_gates(layout.total_qubits(), gates)?)
}

const SUPPORT_EPS: f64 = 1e-12;
const POSITION_UNIFORMITY_EPS: f64 = 1e-6;

/// Decode a measured `(register, Y, X)` marginal back into a gray image.
///
/// Pattern bit order must match [`RegisterLayout::gray_measurement_qubits`]:
/// bits `0..q` are the gray value, then n Y bits, then n X bits.
pub fn decode_gray(
    marginal: &BTreeMap<u64, f64>,
    n: usize,
    q: usize,
) -> Result<GrayImage, ImageError> {
    let side = 1usize << n;
    let mut grays: Vec<Option<u64>> = vec![None; side * side];
    let mut mass: Vec<f64> = vec![0.0; side * side];
    for (&pattern, &p) in marginal {
        if p < SUPPORT_EPS {
            continue;
        }
        let gray = pattern & ((1 << q) - 1);
        let y = ((pattern >> q) & ((1 << n) - 1)) as usize;
        let x = ((pattern >> (q + n)) & ((1 << n) - 1)) as usize;
        let idx = y * side + x;
        mass[idx] += p;
        match grays[idx] {
            None => grays[idx] = Some(gray),
            Some(existing) if existing != gray => {
                return Err(ImageError::AmbiguousPixel {
                    y,
                    x,
                    first: existing,
                    second: gray,
                })
            }
            Some(_) => {}
        }
    }
    let expected = 1.0 / (side * side) as f64;
    for idx in 0..side * side {
        let (y, x) = (idx / side, idx % side);
        if grays[idx].is_none() {
            return Err(ImageError::MissingPixel { y, x });
        }
        if (mass[idx] - expected).abs() > POSITION_UNIFORMITY_EPS {
            return Err(ImageError::NonuniformPositionMarginal { y, x, p: mass[idx] });
        }
    }
    let pixels = grays.into_iter().map(|g| g.unwrap() as u16).collect();
    GrayImage::new(n, q, pixels)
}

/// Decode a measured `(flag, Y, X)` marginal into a binary image; the
/// one-bit analogue of [`decode_gray`].
pub fn decode_binary(marginal: &BTreeMap<u64, f64>, n: usize) -> Result<BinaryImage, ImageError> {
    let gray = decode_gray(marginal, n, 1)?;
    let bits = gray.pixels().iter().map(|&v| v == 1).collect();
    BinaryImage::new(n, bits)
}

/// Decode a binary image from finite-shot sample counts over the
/// `(flag, Y, X)` pattern. Presence-based: the uniformity check of
/// [`decode_gray`] is skipped (sampled frequencies fluctuate), but every
/// position must have been sampled at least once and carry a single flag
/// value.
pub fn decode_binary_counts(
    counts: &BTreeMap<u64, u64>,
    n: usize,
) -> Result<BinaryImage, ImageError> {
    let side = 1usize << n;
    let mut bits: Vec<Option<bool>> = vec![None; side * side];
    for (&pattern, &c) in counts {
        if c == 0 {
            continue;
        }
        let bit = pattern & 1 == 1;
        let y = ((pattern >> 1) & ((1 << n) - 1)) as usize;
        let x = ((pattern >> (1 + n)) & ((1 << n) - 1)) as usize;
        match bits[y * side + x] {
            None => bits[y * side + x] = Some(bit),
            Some(existing) if existing != bit => {
                return Err(ImageError::AmbiguousPixel {
                    y,
                    x,
                    first: u64::from(existing),
                    second: u64::from(bit),
                })
            }
            Some(_) => {}
        }
    }
    let mut out = Vec::with_capacity(side * side);
    for (idx, b) in bits.into_iter().enumerate() {
        match b {
            Some(v) => out.push(v),
            None => {
                return Err(ImageError::MissingPixel {
                    y: idx / side,
                    x: idx % side,
                })
            }
        }
    }
    BinaryImage::new(n, out)
}
