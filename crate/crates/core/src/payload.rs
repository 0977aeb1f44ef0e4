//! Framing of byte payloads into the bit stream carried by the image.
//!
//! A frame is a 32-bit big-endian byte count followed by the message bytes,
//! every byte written most significant bit first.

use crate::error::{Error, Result};

const HEADER_BITS: usize = 32;

/// An ordered sequence of bits, packed MSB-first.
///
/// Bits past `len` in the last storage byte are always zero, so two streams
/// with the same bits compare equal.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct BitStream {
    bytes: Vec<u8>,
    len: usize,
}

impl BitStream {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every bit of `bytes`, MSB-first.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        Self {
            bytes: bytes.to_vec(),
            len: bytes.len() * 8,
        }
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        let mut s = Self::new();
        for b in bits {
            s.push(b);
        }
        s
    }

    /// Reassembles a stream from `width`-bit chunks, each MSB-first.
    pub fn from_chunks(chunks: impl IntoIterator<Item = u8>, width: u32) -> Self {
        let mut s = Self::new();
        for c in chunks {
            s.push_chunk(c, width);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        (index < self.len).then(|| self.bytes[index / 8] & (0x80 >> (index % 8)) != 0)
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            self.bytes[self.len / 8] |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    /// Appends the low `width` bits of `chunk`, most significant first.
    pub fn push_chunk(&mut self, chunk: u8, width: u32) {
        for shift in (0..width).rev() {
            self.push((chunk >> shift) & 1 == 1);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i).unwrap())
    }

    /// Splits the stream into `width`-bit chunks, MSB-first, zero-padding the last.
    pub fn chunks(&self, width: u32) -> Chunks<'_> {
        assert!((1..=8).contains(&width), "chunk width must be in 1..=8");
        Chunks {
            stream: self,
            pos: 0,
            width: width as usize,
        }
    }

    /// Number of `width`-bit chunks needed to hold the stream.
    pub fn chunk_count(&self, width: u32) -> usize {
        self.len.div_ceil(width as usize)
    }

    /// Reads `count` bits starting at `start` as a big-endian integer.
    fn read_bits(&self, start: usize, count: usize) -> u64 {
        (start..start + count).fold(0, |acc, i| (acc << 1) | u64::from(self.get(i).unwrap()))
    }
}

impl std::fmt::Debug for BitStream {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitStream({} bits: ", self.len)?;
        for (i, b) in self.iter().take(64).enumerate() {
            if i > 0 && i % 8 == 0 {
                f.write_str("_")?;
            }
            f.write_str(if b { "1" } else { "0" })?;
        }
        if self.len > 64 {
            f.write_str("...")?;
        }
        f.write_str(")")
    }
}

pub struct Chunks<'a> {
    stream: &'a BitStream,
    pos: usize,
    width: usize,
}

impl Iterator for Chunks<'_> {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        if self.pos >= self.stream.len {
            return None;
        }
        let mut chunk = 0u8;
        for i in self.pos..self.pos + self.width {
            chunk = (chunk << 1) | u8::from(self.stream.get(i).unwrap_or(false));
        }
        self.pos += self.width;
        Some(chunk)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self
            .stream
            .len
            .saturating_sub(self.pos)
            .div_ceil(self.width);
        (n, Some(n))
    }
}

impl ExactSizeIterator for Chunks<'_> {}

/// Prefixes `message` with its 32-bit big-endian length.
pub fn frame(message: &[u8]) -> Result<BitStream> {
    let len = u32::try_from(message.len()).map_err(|_| Error::MessageTooLarge(message.len()))?;
    let mut bytes = Vec::with_capacity(4 + message.len());
    bytes.extend_from_slice(&len.to_be_bytes());
    bytes.extend_from_slice(message);
    Ok(BitStream {
        len: bytes.len() * 8,
        bytes,
    })
}

/// Recovers the message from a framed stream; bits past the declared length are ignored.
pub fn deframe(bits: &BitStream) -> Result<Vec<u8>> {
    if bits.len() < HEADER_BITS {
        return Err(Error::CorruptFrame {
            declared: HEADER_BITS,
            available: bits.len(),
        });
    }
    let declared = bits.read_bits(0, HEADER_BITS) as usize;
    let available = bits.len() - HEADER_BITS;
    let needed = declared.saturating_mul(8);
    if needed > available {
        return Err(Error::CorruptFrame {
            declared: needed,
            available,
        });
    }
    Ok((0..declared)
        .map(|k| bits.read_bits(HEADER_BITS + 8 * k, 8) as u8)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bit_string(s: &BitStream) -> String {
        s.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    #[test]
    fn frames_hi() {
        let s = frame(b"Hi").unwrap();
        assert_eq!(s.len(), 48);
        let expected = format!("{:032b}{}", 2, "0100100001101001");
        assert_eq!(bit_string(&s), expected);
        assert_eq!(deframe(&s).unwrap(), b"Hi");
    }

    #[test]
    fn frames_letter_h() {
        let s = frame(b"H").unwrap();
        assert_eq!(bit_string(&s), format!("{:032b}01001000", 1));
    }

    #[test]
    fn frames_empty() {
        let s = frame(b"").unwrap();
        assert_eq!(s.len(), 32);
        assert!(s.iter().all(|b| !b));
        assert_eq!(deframe(&s).unwrap(), Vec::<u8>::new());
    }

    #[test]
    fn short_stream_is_corrupt() {
        let s = BitStream::from_bits(std::iter::repeat_n(false, 31));
        assert!(matches!(deframe(&s), Err(Error::CorruptFrame { .. })));
    }

    #[test]
    fn overlong_declared_length_is_corrupt() {
        let mut s = BitStream::from_bytes(&100u32.to_be_bytes());
        s.push_chunk(0xFF, 8);
        assert_eq!(s.len(), 40);
        assert_eq!(
            deframe(&s),
            Err(Error::CorruptFrame {
                declared: 800,
                available: 8
            })
        );
    }

    #[test]
    fn chunks_are_msb_first_and_padded() {
        let s = BitStream::from_bytes(&[0b0100_1000]);
        assert_eq!(
            s.chunks(2).collect::<Vec<_>>(),
            vec![0b01, 0b00, 0b10, 0b00]
        );
        assert_eq!(s.chunks(3).collect::<Vec<_>>(), vec![0b010, 0b010, 0b00]);
        assert_eq!(s.chunks(3).len(), 3);
        assert_eq!(s.chunk_count(3), 3);
    }

    #[test]
    fn push_keeps_padding_zeroed() {
        let a = BitStream::from_bits([true, false, true]);
        let b = BitStream::from_chunks([0b101], 3);
        assert_eq!(a, b);
        assert_eq!(a.get(3), None);
    }

    proptest! {
        #[test]
        fn deframe_inverts_frame(msg in proptest::collection::vec(any::<u8>(), 0..300)) {
            let s = frame(&msg).unwrap();
            prop_assert_eq!(s.len(), 32 + 8 * msg.len());
            prop_assert_eq!(deframe(&s).unwrap(), msg);
        }

        #[test]
        fn rechunking_is_identity_up_to_padding(
            bits in proptest::collection::vec(any::<bool>(), 0..200),
            width in 1u32..=8,
        ) {
            let s = BitStream::from_bits(bits.iter().copied());
            let back = BitStream::from_chunks(s.chunks(width), width);
            prop_assert!(back.len() >= s.len());
            prop_assert!(back.len() - s.len() < width as usize);
            prop_assert!(back.iter().take(s.len()).eq(s.iter()));
            prop_assert!(back.iter().skip(s.len()).all(|b| !b));
        }

        #[test]
        fn trailing_padding_is_ignored(msg in proptest::collection::vec(any::<u8>(), 0..64), pad in 0usize..9) {
            let mut s = frame(&msg).unwrap();
            for _ in 0..pad {
                s.push(true);
            }
            prop_assert_eq!(deframe(&s).unwrap(), msg);
        }
    }
}
