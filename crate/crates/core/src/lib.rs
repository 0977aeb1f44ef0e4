//! Intensity-partition steganography for uncompressed 24-bit BMP images.
//!
//! A payload is framed with a 32-bit length header, written three bits at a
//! time into the low bits of dark bytes, and the image is then brightened so
//! that carriers and non-carriers land in disjoint intensity bands. The
//! parameters travel inside the image, in its last two pixels.
//!
//! ```
//! use brightmark::{hide, reveal, RawImage, StegoParams};
//!
//! let image = RawImage::from_fn(64, 48, |x, y| [(x * 4) as u8, (y * 5) as u8, 60]).unwrap();
//! let params = StegoParams::new(40, 7, 100).unwrap();
//! let stego = hide(&image, b"meet at dawn", &params).unwrap();
//! assert_eq!(reveal(&stego).unwrap(), b"meet at dawn");
//! ```

pub mod analysis;
pub mod bmp;
pub mod error;
pub mod image;
pub mod lsb;
pub mod params;
pub mod payload;
pub mod stego;

pub use analysis::{
    capacity, intensity_census, psnr, AnalysisReport, CapacityFigures, Census, Psnr,
};
pub use bmp::{decode_bmp, encode_bmp, BmpFileInfo};
pub use error::{Error, Result};
pub use image::RawImage;
pub use lsb::{embed_chunk, extract_chunk, lowerbound_of, set_n_lsbs};
pub use params::{channels_of_mode, Channel, ChannelSet, StegoParams};
pub use payload::{deframe, frame, BitStream};
pub use stego::{
    brighten, carrier_positions, cover, embed_params, extract_params, preprocess,
    restore_brightness, uncover, uncover_positions, CarrierPosition, Uncovered, MARKER,
};

/// Frames `message` and covers it into `image`.
pub fn hide(image: &RawImage, message: &[u8], params: &StegoParams) -> Result<RawImage> {
    cover(image, &frame(message)?, params)
}

/// Uncovers and deframes the message carried by `stego`.
pub fn reveal(stego: &RawImage) -> Result<Vec<u8>> {
    deframe(&uncover(stego)?.bits)
}
