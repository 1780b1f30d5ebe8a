//! Binary PGM (P5, maxval 255) codec.

use super::{GrayImage, ImagingError};
use std::path::Path;

pub fn decode_pgm(bytes: &[u8]) -> Result<GrayImage, ImagingError> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(ImagingError::BadMagic);
    }
    let mut cursor = Header { bytes, pos: 2 };
    let width = cursor.next_uint()?;
    let height = cursor.next_uint()?;
    let maxval = cursor.next_uint()?;
    if maxval != 255 {
        return Err(ImagingError::UnsupportedMaxval(maxval as u32));
    }
    if width == 0 || height == 0 {
        return Err(ImagingError::MalformedHeader("zero dimension"));
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(cursor.pos) {
        Some(b) if b.is_ascii_whitespace() => cursor.pos += 1,
        _ => {
            return Err(ImagingError::MalformedHeader(
                "missing separator before raster",
            ))
        }
    }
    let expected = width
        .checked_mul(height)
        .ok_or(ImagingError::MalformedHeader("dimensions overflow"))?;
    let raster = &bytes[cursor.pos..];
    if raster.len() < expected {
        return Err(ImagingError::TruncatedData {
            expected,
            found: raster.len(),
        });
    }
    GrayImage::new(width, height, raster[..expected].to_vec())
}

pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width(), img.height());
    let mut out = Vec::with_capacity(header.len() + img.data().len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(img.data());
    out
}

pub fn read_pgm(path: &Path) -> Result<GrayImage, ImagingError> {
    let bytes = std::fs::read(path).map_err(|source| ImagingError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    decode_pgm(&bytes)
}

pub fn write_pgm(path: &Path, img: &GrayImage) -> Result<(), ImagingError> {
    std::fs::write(path, encode_pgm(img)).map_err(|source| ImagingError::Io {
        path: path.to_path_buf(),
        source,
    })
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn next_uint(&mut self) -> Result<usize, ImagingError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ImagingError::MalformedHeader(
                "expected an unsigned integer",
            ));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(ImagingError::MalformedHeader("integer out of range"))
    }
}
