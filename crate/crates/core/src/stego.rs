//! The intensity-partition cover/uncover pipeline.
//!
//! Covering collapses every data-channel byte in `[lowerbound, upperbound]`
//! to `upperbound`, writes 3-bit chunks into the low bits of bytes below
//! `lowerbound`, then brightens the data channels by `brightness_level`.
//! After that shift carriers sit below `lowerbound + level` and every other
//! data-channel byte sits at or above `upperbound + level`, so the receiver
//! finds the carriers again by testing `byte - level < upperbound`.
//!
//! The last two pixels of the last row are reserved: pixel
//! `(width - 2, height - 1)` holds `level, mode, upperbound` verbatim and
//! pixel `(width - 1, height - 1)` holds [`MARKER`]. Neither takes part in
//! preprocessing, carrier selection or brightening.
//!
//! Bytes are visited in row-major order, left to right, `R, G, B` within a
//! pixel, keeping only the channels selected by the brightness mode.

use crate::error::{Error, Result};
use crate::image::{RawImage, CHANNELS};
use crate::lsb::{embed_chunk, extract_chunk};
use crate::params::{Channel, ChannelSet, StegoParams, CARRIER_BITS};
use crate::payload::BitStream;

/// Contents of the last pixel of a stego image.
pub const MARKER: [u8; 3] = [0x47, 0x42, 0x31];

const RESERVED_BYTES: usize = 2 * CHANNELS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CarrierPosition {
    pub x: u32,
    pub y: u32,
    pub channel: Channel,
}

impl CarrierPosition {
    fn from_index(index: usize, width: u32) -> Self {
        let pixel = index / CHANNELS;
        Self {
            x: (pixel % width as usize) as u32,
            y: (pixel / width as usize) as u32,
            channel: Channel::from_offset(index % CHANNELS),
        }
    }

    /// Offset of this byte in [`RawImage::data`].
    pub fn byte_index(&self, width: u32) -> usize {
        ((self.y as usize) * (width as usize) + self.x as usize) * CHANNELS + self.channel.offset()
    }
}

/// Output of [`uncover`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Uncovered {
    /// Low bits of every selected carrier, in scan order.
    pub bits: BitStream,
    pub params: StegoParams,
}

/// Whether the image is wide enough to hold the two parameter pixels.
pub fn has_parameter_pixels(image: &RawImage) -> bool {
    image.width() >= 2
}

fn require_parameter_pixels(image: &RawImage) -> Result<()> {
    if has_parameter_pixels(image) {
        Ok(())
    } else {
        Err(Error::ImageTooSmall {
            width: image.width(),
            height: image.height(),
        })
    }
}

/// Length of the prefix of `data` that excludes the parameter pixels.
///
/// Images one pixel wide have no parameter pixels, so nothing is excluded.
fn unreserved_len(image: &RawImage) -> usize {
    let len = image.data().len();
    if has_parameter_pixels(image) {
        len - RESERVED_BYTES
    } else {
        len
    }
}

/// Byte offsets of every data-channel byte outside the parameter pixels, in scan order.
pub fn data_channel_indices(image: &RawImage, channels: ChannelSet) -> impl Iterator<Item = usize> {
    let mask = channels.mask();
    (0..unreserved_len(image)).filter(move |i| mask[i % CHANNELS])
}

fn for_each_data_byte(image: &mut RawImage, channels: ChannelSet, mut f: impl FnMut(&mut u8)) {
    let end = unreserved_len(image);
    let mask = channels.mask();
    for (i, b) in image.data_mut()[..end].iter_mut().enumerate() {
        if mask[i % CHANNELS] {
            f(b);
        }
    }
}

fn preprocess_in_place(image: &mut RawImage, params: &StegoParams) {
    let lower = params.lowerbound_intensity();
    let upper = params.upperbound_intensity();
    for_each_data_byte(image, params.channels(), |b| {
        if (lower..=upper).contains(b) {
            *b = upper;
        }
    });
}

/// Collapses data-channel bytes in `[lowerbound, upperbound]` to `upperbound`.
pub fn preprocess(image: &RawImage, params: &StegoParams) -> RawImage {
    let mut out = image.clone();
    preprocess_in_place(&mut out, params);
    out
}

fn carrier_indices(image: &RawImage, params: &StegoParams) -> Vec<usize> {
    let lower = params.lowerbound_intensity();
    let data = image.data();
    data_channel_indices(image, params.channels())
        .filter(|&i| data[i] < lower)
        .collect()
}

/// Data-channel bytes whose current value is below `lowerbound`, in scan order.
///
/// Meant for an image that has already been preprocessed.
pub fn carrier_positions(image: &RawImage, params: &StegoParams) -> Vec<CarrierPosition> {
    carrier_indices(image, params)
        .into_iter()
        .map(|i| CarrierPosition::from_index(i, image.width()))
        .collect()
}

fn is_stego_carrier(byte: u8, params: &StegoParams) -> bool {
    i16::from(byte) - i16::from(params.brightness_level())
        < i16::from(params.upperbound_intensity())
}

fn uncover_indices(stego: &RawImage, params: &StegoParams) -> Vec<usize> {
    let data = stego.data();
    data_channel_indices(stego, params.channels())
        .filter(|&i| is_stego_carrier(data[i], params))
        .collect()
}

/// Positions the receiver treats as carriers: `byte - level < upperbound`.
pub fn uncover_positions(stego: &RawImage, params: &StegoParams) -> Vec<CarrierPosition> {
    uncover_indices(stego, params)
        .into_iter()
        .map(|i| CarrierPosition::from_index(i, stego.width()))
        .collect()
}

fn brighten_in_place(image: &mut RawImage, params: &StegoParams) {
    let level = params.brightness_level();
    for_each_data_byte(image, params.channels(), |b| *b = b.saturating_add(level));
}

/// Adds `brightness_level` to every data-channel byte, clamping at 255.
pub fn brighten(image: &RawImage, params: &StegoParams) -> RawImage {
    let mut out = image.clone();
    brighten_in_place(&mut out, params);
    out
}

/// Subtracts `brightness_level` from every data-channel byte, clamping at 0.
pub fn restore_brightness(image: &RawImage, params: &StegoParams) -> RawImage {
    let level = params.brightness_level();
    let mut out = image.clone();
    for_each_data_byte(&mut out, params.channels(), |b| {
        *b = b.saturating_sub(level)
    });
    out
}

fn parameter_pixel_offsets(image: &RawImage) -> (usize, usize) {
    let len = image.data().len();
    (len - RESERVED_BYTES, len - CHANNELS)
}

/// Stores the parameters and the marker in the last two pixels of the last row.
pub fn embed_params(image: &RawImage, params: &StegoParams) -> Result<RawImage> {
    require_parameter_pixels(image)?;
    let mut out = image.clone();
    write_params(&mut out, params);
    Ok(out)
}

fn write_params(image: &mut RawImage, params: &StegoParams) {
    let (param_at, marker_at) = parameter_pixel_offsets(image);
    let data = image.data_mut();
    data[param_at..param_at + CHANNELS].copy_from_slice(&params.to_bytes());
    data[marker_at..marker_at + CHANNELS].copy_from_slice(&MARKER);
}

/// Reads and validates the parameters stored by [`embed_params`].
pub fn extract_params(image: &RawImage) -> Result<StegoParams> {
    require_parameter_pixels(image)?;
    let (param_at, marker_at) = parameter_pixel_offsets(image);
    let data = image.data();
    if data[marker_at..marker_at + CHANNELS] != MARKER {
        return Err(Error::NotAStegoImage);
    }
    StegoParams::from_bytes([data[param_at], data[param_at + 1], data[param_at + 2]])
}

/// Hides `payload` in `image`.
///
/// Runs preprocessing, 3-bit substitution into successive carriers,
/// brightening and parameter embedding. A final partial chunk is zero-padded.
pub fn cover(image: &RawImage, payload: &BitStream, params: &StegoParams) -> Result<RawImage> {
    require_parameter_pixels(image)?;
    let mut out = image.clone();
    preprocess_in_place(&mut out, params);

    let carriers = carrier_indices(&out, params);
    let available = carriers.len() * CARRIER_BITS as usize;
    if payload.len() > available {
        return Err(Error::CapacityExceeded {
            required: payload.len(),
            available,
        });
    }

    let data = out.data_mut();
    for (&i, chunk) in carriers.iter().zip(payload.chunks(CARRIER_BITS)) {
        data[i] = embed_chunk(data[i], chunk);
    }

    brighten_in_place(&mut out, params);
    write_params(&mut out, params);
    Ok(out)
}

/// Recovers the parameters and the carried bits from a stego image.
///
/// The returned stream holds three bits for every selected carrier, so it may
/// extend past the payload that was covered.
pub fn uncover(stego: &RawImage) -> Result<Uncovered> {
    let params = extract_params(stego)?;
    let level = params.brightness_level();
    let data = stego.data();
    let chunks = uncover_indices(stego, &params)
        .into_iter()
        .map(|i| extract_chunk(data[i].wrapping_sub(level)));
    Ok(Uncovered {
        bits: BitStream::from_chunks(chunks, CARRIER_BITS),
        params,
    })
}

/// Checks that no data-channel byte lies in `[lowerbound + level, upperbound + level)`.
pub fn partition_holds(stego: &RawImage, params: &StegoParams) -> bool {
    let level = u16::from(params.brightness_level());
    let gap = u16::from(params.lowerbound_intensity()) + level
        ..u16::from(params.upperbound_intensity()) + level;
    let data = stego.data();
    data_channel_indices(stego, params.channels()).all(|i| !gap.contains(&u16::from(data[i])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::payload::{deframe, frame};

    fn p(level: u8, mode: u8, upper: u8) -> StegoParams {
        StegoParams::new(level, mode, upper).unwrap()
    }

    fn one_byte(v: u8) -> RawImage {
        // 3x1: the target byte is pixel 0 red, the last two pixels are reserved
        let mut img = RawImage::filled(3, 1, 0).unwrap();
        img.data_mut()[0] = v;
        img
    }

    #[test]
    fn preprocess_band() {
        let params = p(40, 7, 100);
        assert_eq!(preprocess(&one_byte(96), &params).data()[0], 100);
        assert_eq!(preprocess(&one_byte(100), &params).data()[0], 100);
        assert_eq!(preprocess(&one_byte(95), &params).data()[0], 95);
        assert_eq!(preprocess(&one_byte(101), &params).data()[0], 101);
    }

    #[test]
    fn preprocess_skips_other_channels_and_reserved_pixels() {
        let img = RawImage::filled(3, 2, 97).unwrap();
        let out = preprocess(&img, &p(40, 1, 100));
        for (i, &b) in out.data().iter().enumerate() {
            let reserved = i >= out.data().len() - 6;
            let expected = if i % 3 == 0 && !reserved { 100 } else { 97 };
            assert_eq!(b, expected, "byte {i}");
        }
    }

    #[test]
    fn carrier_counts_on_zero_fixture() {
        let img = RawImage::filled(4, 4, 0).unwrap();
        assert_eq!(carrier_positions(&img, &p(40, 7, 100)).len(), 42);
        assert_eq!(carrier_positions(&img, &p(40, 1, 100)).len(), 14);
        let white = RawImage::filled(4, 4, 255).unwrap();
        assert!(carrier_positions(&white, &p(40, 7, 100)).is_empty());
    }

    #[test]
    fn carrier_scan_order() {
        let img = RawImage::filled(4, 4, 0).unwrap();
        let pos = carrier_positions(&img, &p(40, 6, 100));
        assert_eq!(
            pos[..3],
            [
                CarrierPosition {
                    x: 0,
                    y: 0,
                    channel: Channel::Green
                },
                CarrierPosition {
                    x: 0,
                    y: 0,
                    channel: Channel::Blue
                },
                CarrierPosition {
                    x: 1,
                    y: 0,
                    channel: Channel::Green
                },
            ]
        );
        let last = pos.last().unwrap();
        assert_eq!((last.x, last.y, last.channel), (1, 3, Channel::Blue));
        for c in &pos {
            assert_eq!(img.data()[c.byte_index(4)], 0);
        }
    }

    #[test]
    fn brighten_and_restore() {
        let params = p(40, 7, 100);
        assert_eq!(brighten(&one_byte(200), &params).data()[0], 240);
        assert_eq!(brighten(&one_byte(240), &params).data()[0], 255);
        assert_eq!(restore_brightness(&one_byte(130), &params).data()[0], 90);
        assert_eq!(restore_brightness(&one_byte(0), &params).data()[0], 0);
        let round = restore_brightness(&brighten(&one_byte(200), &params), &params);
        assert_eq!(round.data()[0], 200);
    }

    #[test]
    fn brighten_leaves_reserved_and_unselected_bytes() {
        let img = RawImage::filled(3, 1, 10).unwrap();
        let out = brighten(&img, &p(5, 2, 100));
        assert_eq!(out.data(), &[10, 15, 10, 10, 10, 10, 10, 10, 10]);
    }

    #[test]
    fn params_round_trip_through_pixels() {
        let img = RawImage::filled(1024, 768, 12).unwrap();
        let stego = embed_params(&img, &p(40, 7, 100)).unwrap();
        assert_eq!(stego.pixel(1022, 767), [40, 7, 100]);
        assert_eq!(stego.pixel(1023, 767), MARKER);
        assert_eq!(extract_params(&stego).unwrap(), p(40, 7, 100));
    }

    #[test]
    fn param_errors() {
        let tiny = RawImage::filled(1, 1, 0).unwrap();
        assert!(matches!(
            embed_params(&tiny, &p(40, 7, 100)),
            Err(Error::ImageTooSmall { .. })
        ));
        let plain = RawImage::filled(4, 4, 0).unwrap();
        assert_eq!(extract_params(&plain), Err(Error::NotAStegoImage));

        let mut bad = embed_params(&plain, &p(40, 7, 100)).unwrap();
        bad.set_pixel(2, 3, [40, 9, 100]);
        assert!(matches!(extract_params(&bad), Err(Error::InvalidParams(_))));
        bad.set_pixel(2, 3, [40, 7, 220]);
        assert!(matches!(extract_params(&bad), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn uncover_predicate_boundary() {
        let params = p(40, 7, 100);
        assert!(is_stego_carrier(130, &params));
        assert!(!is_stego_carrier(140, &params));
        assert!(is_stego_carrier(139, &params));
    }

    #[test]
    fn capacity_guard() {
        let img = RawImage::filled(4, 4, 0).unwrap();
        let params = p(40, 7, 100);
        let fits = BitStream::from_bits(std::iter::repeat_n(true, 126));
        assert!(cover(&img, &fits, &params).is_ok());
        let over = BitStream::from_bits(std::iter::repeat_n(true, 127));
        assert_eq!(
            cover(&img, &over, &params),
            Err(Error::CapacityExceeded {
                required: 127,
                available: 126
            })
        );
    }

    #[test]
    fn degenerate_lowerbound_has_no_capacity() {
        let img = RawImage::filled(4, 4, 0).unwrap();
        let params = p(40, 7, 7);
        assert!(cover(&img, &BitStream::new(), &params).is_ok());
        assert!(matches!(
            cover(&img, &BitStream::from_bits([true]), &params),
            Err(Error::CapacityExceeded { available: 0, .. })
        ));
    }

    #[test]
    fn empty_message_round_trip() {
        let img = RawImage::filled(8, 8, 30).unwrap();
        let params = p(40, 7, 100);
        let stego = cover(&img, &frame(b"").unwrap(), &params).unwrap();
        assert_eq!(deframe(&uncover(&stego).unwrap().bits).unwrap(), b"");
    }

    #[test]
    fn cover_then_uncover_recovers_prefix() {
        let img = RawImage::from_fn(16, 9, |x, y| {
            [(x * 16) as u8, (y * 28) as u8, ((x + y) * 9) as u8]
        })
        .unwrap();
        for mode in 1..=7 {
            let params = p(23, mode, 130);
            let bits = BitStream::from_bytes(b"abc");
            let stego = cover(&img, &bits, &params).unwrap();
            assert!(partition_holds(&stego, &params));
            let got = uncover(&stego).unwrap();
            assert_eq!(got.params, params);
            assert!(got.bits.iter().take(bits.len()).eq(bits.iter()));
            assert_eq!(
                uncover_positions(&stego, &params),
                carrier_positions(&preprocess(&img, &params), &params)
            );
        }
    }

    #[test]
    fn cover_preserves_dimensions() {
        let img = RawImage::filled(5, 3, 50).unwrap();
        let stego = cover(&img, &frame(b"x").unwrap(), &p(40, 7, 100)).unwrap();
        assert!(stego.same_dimensions(&img));
    }
}
