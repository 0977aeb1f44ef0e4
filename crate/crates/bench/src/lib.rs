//! Fixtures shared by the benchmarks.

use brightmark::RawImage;

/// Deterministic photo-like image: gradients plus hashed texture.
pub fn synthetic_image(width: u32, height: u32) -> RawImage {
    RawImage::from_fn(width, height, |x, y| {
        let h = (x.wrapping_mul(0x9E37_79B1) ^ y.wrapping_mul(0x85EB_CA77)).rotate_left(7);
        let n = h >> 27;
        [
            ((x * 255 / width) + n) as u8,
            ((y * 255 / height) + n) as u8,
            (((x + y) * 127 / (width + height)) + n) as u8,
        ]
    })
    .expect("non-zero dimensions")
}

/// `len` bytes of printable filler text.
pub fn message(len: usize) -> Vec<u8> {
    b"the quick brown fox jumps over the lazy dog "
        .iter()
        .copied()
        .cycle()
        .take(len)
        .collect()
}
