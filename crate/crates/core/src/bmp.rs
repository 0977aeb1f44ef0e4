//! Uncompressed 24-bit BMP codec.
//!
//! Decoding accepts any `BITMAPINFOHEADER`-or-larger info header with a
//! positive (bottom-up) height, 24 bits per pixel and no compression. Encoding
//! always produces the canonical layout: a 14-byte file header, a 40-byte info
//! header, then bottom-up rows of `B, G, R` triples padded with zeros to a
//! multiple of four bytes.
//!
//! The canonical info header stores `stride * height` as the image size,
//! 2835 pixels per metre (72 DPI) in both directions, and zero for the
//! palette counts. Files written that way decode and re-encode byte for byte.

use crate::error::{Error, Result};
use crate::image::{RawImage, CHANNELS};

pub const FILE_HEADER_LEN: usize = 14;
pub const INFO_HEADER_LEN: usize = 40;
pub const HEADER_LEN: usize = FILE_HEADER_LEN + INFO_HEADER_LEN;

const PIXELS_PER_METRE: i32 = 2835;
const BI_RGB: u32 = 0;

/// Header fields relevant to a 24-bit uncompressed bitmap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BmpFileInfo {
    /// File size as declared in the file header.
    pub file_size: u32,
    pub data_offset: u32,
    pub width: u32,
    pub height: u32,
    pub bits_per_pixel: u16,
    pub compression: u32,
    pub row_stride: usize,
}

impl BmpFileInfo {
    /// Bytes the pixel array occupies on disk.
    pub fn pixel_array_len(&self) -> usize {
        self.row_stride * self.height as usize
    }
}

/// Bytes per on-disk row for a 24-bit image of the given width.
pub fn row_stride(width: u32) -> usize {
    (width as usize * CHANNELS).div_ceil(4) * 4
}

/// Size of the canonical encoding of a `width` x `height` image.
pub fn encoded_len(width: u32, height: u32) -> usize {
    HEADER_LEN + row_stride(width) * height as usize
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

fn i32_at(b: &[u8], at: usize) -> i32 {
    u32_at(b, at) as i32
}

/// Parses and validates the headers without touching pixel data.
pub fn parse_header(bytes: &[u8]) -> Result<BmpFileInfo> {
    if bytes.len() < 2 || &bytes[..2] != b"BM" {
        return Err(Error::BadMagic);
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::Truncated {
            expected: HEADER_LEN,
            actual: bytes.len(),
        });
    }

    let file_size = u32_at(bytes, 2);
    let data_offset = u32_at(bytes, 10);
    let info_len = u32_at(bytes, 14);
    if (info_len as usize) < INFO_HEADER_LEN {
        return Err(Error::UnsupportedFormat(format!(
            "info header of {info_len} bytes (OS/2 or core headers are not supported)"
        )));
    }
    let width = i32_at(bytes, 18);
    let height = i32_at(bytes, 22);
    let planes = u16_at(bytes, 26);
    let bits_per_pixel = u16_at(bytes, 28);
    let compression = u32_at(bytes, 30);

    if bits_per_pixel != 24 {
        return Err(Error::UnsupportedFormat(format!(
            "{bits_per_pixel} bits per pixel, only 24 is supported"
        )));
    }
    if compression != BI_RGB {
        return Err(Error::UnsupportedFormat(format!(
            "compression method {compression}, only uncompressed is supported"
        )));
    }
    if planes != 1 {
        return Err(Error::UnsupportedFormat(format!("{planes} colour planes")));
    }
    if height < 0 {
        return Err(Error::UnsupportedFormat(
            "top-down bitmaps (negative height) are not supported".into(),
        ));
    }
    if width <= 0 || height == 0 {
        return Err(Error::UnsupportedFormat(format!(
            "non-positive dimensions {width}x{height}"
        )));
    }
    let header_end = FILE_HEADER_LEN + info_len as usize;
    if (data_offset as usize) < header_end {
        return Err(Error::UnsupportedFormat(format!(
            "pixel data offset {data_offset} overlaps the {header_end}-byte header"
        )));
    }

    let width = width as u32;
    let height = height as u32;
    Ok(BmpFileInfo {
        file_size,
        data_offset,
        width,
        height,
        bits_per_pixel,
        compression,
        row_stride: row_stride(width),
    })
}

/// Decodes a 24-bit uncompressed BMP into a top-left-origin RGB grid.
pub fn decode_bmp(bytes: &[u8]) -> Result<RawImage> {
    let info = parse_header(bytes)?;
    let start = info.data_offset as usize;
    let expected = start
        .checked_add(info.pixel_array_len())
        .ok_or_else(|| Error::UnsupportedFormat("pixel array size overflows".into()))?;
    if bytes.len() < expected {
        return Err(Error::Truncated {
            expected,
            actual: bytes.len(),
        });
    }

    let width = info.width as usize;
    let row_len = width * CHANNELS;
    let mut data = vec![0u8; row_len * info.height as usize];
    let pixels = &bytes[start..expected];
    // on-disk row 0 is the bottom of the image
    for (disk_row, src) in pixels.chunks_exact(info.row_stride).enumerate() {
        let y = info.height as usize - 1 - disk_row;
        let dst = &mut data[y * row_len..(y + 1) * row_len];
        for (d, s) in dst
            .chunks_exact_mut(CHANNELS)
            .zip(src.chunks_exact(CHANNELS))
        {
            d[0] = s[2];
            d[1] = s[1];
            d[2] = s[0];
        }
    }
    RawImage::new(info.width, info.height, data)
}

/// Encodes an image as a canonical bottom-up 24-bit BMP.
pub fn encode_bmp(image: &RawImage) -> Vec<u8> {
    let width = image.width();
    let height = image.height();
    let stride = row_stride(width);
    let pixel_len = stride * height as usize;
    let total = HEADER_LEN + pixel_len;

    let mut out = Vec::with_capacity(total);
    out.extend_from_slice(b"BM");
    out.extend_from_slice(&(total as u32).to_le_bytes());
    out.extend_from_slice(&[0; 4]);
    out.extend_from_slice(&(HEADER_LEN as u32).to_le_bytes());

    out.extend_from_slice(&(INFO_HEADER_LEN as u32).to_le_bytes());
    out.extend_from_slice(&(width as i32).to_le_bytes());
    out.extend_from_slice(&(height as i32).to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&24u16.to_le_bytes());
    out.extend_from_slice(&BI_RGB.to_le_bytes());
    out.extend_from_slice(&(pixel_len as u32).to_le_bytes());
    out.extend_from_slice(&PIXELS_PER_METRE.to_le_bytes());
    out.extend_from_slice(&PIXELS_PER_METRE.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    debug_assert_eq!(out.len(), HEADER_LEN);

    let row_len = width as usize * CHANNELS;
    let padding = stride - row_len;
    for row in image.data().chunks_exact(row_len).rev() {
        for px in row.chunks_exact(CHANNELS) {
            out.extend_from_slice(&[px[2], px[1], px[0]]);
        }
        out.extend(std::iter::repeat_n(0u8, padding));
    }
    debug_assert_eq!(out.len(), total);
    out
}
