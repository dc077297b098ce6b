//! Netpbm PGM reading and writing.
//!
//! Grayscale images are written as binary P5 with maxval 2^q - 1; binary
//! images as ASCII P2 with maxval 1. The reader accepts both P2 and P5,
//! requires a square power-of-two side, and infers the bit depth from the
//! maxval, which must be of the form 2^q - 1 (q <= 8) unless rescaling is
//! requested.

use std::fs;
use std::path::Path;

use qimseg::neqr::{BinaryImage, GrayImage, ImageError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PgmError {
    #[error("malformed PGM: {0}")]
    Malformed(String),

    #[error("image is {width}x{height}, expected square")]
    NonSquare { width: usize, height: usize },

    #[error("maxval {maxval} is not 2^q - 1 for q <= 8; pass --rescale to remap")]
    MaxvalNotSupported { maxval: u32 },

    #[error(transparent)]
    Image(#[from] ImageError),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Pull the next whitespace-delimited token, skipping `#` comments.
fn next_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Result<&'a [u8], PgmError> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    if *pos >= bytes.len() {
        return Err(PgmError::Malformed("unexpected end of file".into()));
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() && bytes[*pos] != b'#' {
        *pos += 1;
    }
    Ok(&bytes[start..*pos])
}

fn parse_number(token: &[u8]) -> Result<u32, PgmError> {
    std::str::from_utf8(token)
        .ok()
        .and_then(|s| s.parse::<u32>().ok())
        .ok_or_else(|| {
            PgmError::Malformed(format!(
                "expected number, got {:?}",
                String::from_utf8_lossy(token)
            ))
        })
}

/// Depth q such that maxval = 2^q - 1, if any.
fn depth_for_maxval(maxval: u32) -> Option<usize> {
    (1..=8usize).find(|&q| maxval == (1u32 << q) - 1)
}

pub fn read_pgm(path: &Path, rescale: bool) -> Result<GrayImage, PgmError> {
    parse_pgm(&fs::read(path)?, rescale)
}

pub fn parse_pgm(bytes: &[u8], rescale: bool) -> Result<GrayImage, PgmError> {
    let mut pos = 0usize;
    let magic = next_token(bytes, &mut pos)?;
    let binary = match magic {
        b"P2" => false,
        b"P5" => true,
        other => {
            return Err(PgmError::Malformed(format!(
                "unsupported magic {:?}",
                String::from_utf8_lossy(other)
            )))
        }
    };
    let width = parse_number(next_token(bytes, &mut pos)?)? as usize;
    let height = parse_number(next_token(bytes, &mut pos)?)? as usize;
    let maxval = parse_number(next_token(bytes, &mut pos)?)?;
    if maxval == 0 || maxval > 65535 {
        return Err(PgmError::Malformed(format!("maxval {maxval} out of range")));
    }
    if width != height {
        return Err(PgmError::NonSquare { width, height });
    }
    if width == 0 || !width.is_power_of_two() {
        return Err(PgmError::Image(ImageError::NotPowerOfTwoSide {
            side: width,
        }));
    }

    let count = width * height;
    let mut pixels: Vec<u32> = Vec::with_capacity(count);
    if binary {
        // one whitespace byte separates the header from the raster
        if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
            return Err(PgmError::Malformed("missing raster separator".into()));
        }
        pos += 1;
        let wide = maxval > 255;
        let need = count * if wide { 2 } else { 1 };
        let raster = bytes
            .get(pos..pos + need)
            .ok_or_else(|| PgmError::Malformed("raster truncated".into()))?;
        if wide {
            for pair in raster.chunks_exact(2) {
                pixels.push(u32::from(u16::from_be_bytes([pair[0], pair[1]])));
            }
        } else {
            pixels.extend(raster.iter().map(|&b| u32::from(b)));
        }
    } else {
        for _ in 0..count {
            pixels.push(parse_number(next_token(bytes, &mut pos)?)?);
        }
    }
    if let Some(bad) = pixels.iter().find(|&&v| v > maxval) {
        return Err(PgmError::Malformed(format!(
            "pixel {bad} exceeds maxval {maxval}"
        )));
    }

    let (q, mapped): (usize, Vec<u16>) = match depth_for_maxval(maxval) {
        Some(q) => (q, pixels.into_iter().map(|v| v as u16).collect()),
        None if rescale => {
            // remap linearly onto the full 8-bit range
            let scaled = pixels
                .into_iter()
                .map(|v| ((v as f64 / maxval as f64) * 255.0).round() as u16)
                .collect();
            (8, scaled)
        }
        None => return Err(PgmError::MaxvalNotSupported { maxval }),
    };
    Ok(GrayImage::from_side(width, q, mapped)?)
}

/// Serialize a gray image as binary P5. Byte output is a pure function of
/// the image.
pub fn gray_to_pgm(img: &GrayImage) -> Vec<u8> {
    let side = img.side();
    let maxval = (1u32 << img.q()) - 1;
    let mut out = format!("P5\n{side} {side}\n{maxval}\n").into_bytes();
    out.extend(img.pixels().iter().map(|&v| v as u8));
    out
}

/// Serialize a binary image as ASCII P2 with maxval 1.
pub fn binary_to_pgm(img: &BinaryImage) -> Vec<u8> {
    let side = img.side();
    let mut out = format!("P2\n{side} {side}\n1\n");
    for y in 0..side {
        let row: Vec<&str> = (0..side)
            .map(|x| if img.bit(y, x) { "1" } else { "0" })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out.into_bytes()
}

/// Write bytes atomically: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), std::io::Error> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

pub fn write_gray(img: &GrayImage, path: &Path) -> Result<(), PgmError> {
    Ok(write_atomic(path, &gray_to_pgm(img))?)
}

pub fn write_binary(img: &BinaryImage, path: &Path) -> Result<(), PgmError> {
    Ok(write_atomic(path, &binary_to_pgm(img))?)
}
