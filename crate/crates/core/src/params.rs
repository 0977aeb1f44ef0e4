use std::fmt;

use crate::error::{Error, Result};
use crate::lsb::lowerbound_of;

/// Number of low bits each carrier byte holds.
pub const CARRIER_BITS: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Red,
    Green,
    Blue,
}

impl Channel {
    /// Offset of this channel inside a decoded `R, G, B` pixel.
    pub fn offset(self) -> usize {
        match self {
            Channel::Red => 0,
            Channel::Green => 1,
            Channel::Blue => 2,
        }
    }

    pub fn from_offset(offset: usize) -> Channel {
        match offset % 3 {
            0 => Channel::Red,
            1 => Channel::Green,
            _ => Channel::Blue,
        }
    }
}

/// The colour channels that are brightened and carry payload bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChannelSet {
    pub red: bool,
    pub green: bool,
    pub blue: bool,
}

impl ChannelSet {
    pub const ALL: ChannelSet = ChannelSet {
        red: true,
        green: true,
        blue: true,
    };

    pub fn contains(&self, channel: Channel) -> bool {
        match channel {
            Channel::Red => self.red,
            Channel::Green => self.green,
            Channel::Blue => self.blue,
        }
    }

    /// Whether the byte at `offset` within a pixel belongs to this set.
    pub fn contains_offset(&self, offset: usize) -> bool {
        self.mask()[offset % 3]
    }

    pub fn mask(&self) -> [bool; 3] {
        [self.red, self.green, self.blue]
    }

    pub fn len(&self) -> usize {
        self.mask().iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Maps a brightness mode to its channel set.
///
/// 1 = R, 2 = G, 3 = B, 4 = R+G, 5 = R+B, 6 = G+B, 7 = R+G+B.
pub fn channels_of_mode(mode: u8) -> Result<ChannelSet> {
    let (red, green, blue) = match mode {
        1 => (true, false, false),
        2 => (false, true, false),
        3 => (false, false, true),
        4 => (true, true, false),
        5 => (true, false, true),
        6 => (false, true, true),
        7 => (true, true, true),
        other => return Err(Error::InvalidMode(other)),
    };
    Ok(ChannelSet { red, green, blue })
}

/// The shared secret configuration of a cover/uncover pair.
///
/// Construction validates `level >= 1`, `mode in 1..=7` and
/// `upperbound + level < 255`; a value of this type is always usable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StegoParams {
    brightness_level: u8,
    brightness_mode: u8,
    upperbound_intensity: u8,
    lowerbound_intensity: u8,
    channels: ChannelSet,
}

impl StegoParams {
    pub fn new(
        brightness_level: u8,
        brightness_mode: u8,
        upperbound_intensity: u8,
    ) -> Result<Self> {
        let channels = channels_of_mode(brightness_mode)?;
        if brightness_level == 0 {
            return Err(Error::InvalidParams(
                "brightness_level must be at least 1".into(),
            ));
        }
        if u16::from(upperbound_intensity) + u16::from(brightness_level) >= 255 {
            return Err(Error::InvalidParams(format!(
                "upperbound_intensity ({upperbound_intensity}) + brightness_level \
                 ({brightness_level}) must be < 255"
            )));
        }
        Ok(Self {
            brightness_level,
            brightness_mode,
            upperbound_intensity,
            lowerbound_intensity: lowerbound_of(upperbound_intensity),
            channels,
        })
    }

    /// Validates parameters given as wide integers, e.g. straight from a command line.
    pub fn from_ints(
        brightness_level: i64,
        brightness_mode: i64,
        upperbound_intensity: i64,
    ) -> Result<Self> {
        let byte = |name: &str, v: i64| {
            u8::try_from(v)
                .map_err(|_| Error::InvalidParams(format!("{name} ({v}) must fit in 0..=255")))
        };
        let mode = u8::try_from(brightness_mode).map_err(|_| {
            Error::InvalidParams(format!(
                "brightness_mode ({brightness_mode}) must be in 1..=7"
            ))
        })?;
        if !(1..=7).contains(&mode) {
            return Err(Error::InvalidParams(format!(
                "brightness_mode ({mode}) must be in 1..=7"
            )));
        }
        Self::new(
            byte("brightness_level", brightness_level)?,
            mode,
            byte("upperbound_intensity", upperbound_intensity)?,
        )
    }

    pub fn brightness_level(&self) -> u8 {
        self.brightness_level
    }

    pub fn brightness_mode(&self) -> u8 {
        self.brightness_mode
    }

    pub fn upperbound_intensity(&self) -> u8 {
        self.upperbound_intensity
    }

    /// `upperbound_intensity` with its three low bits cleared.
    pub fn lowerbound_intensity(&self) -> u8 {
        self.lowerbound_intensity
    }

    pub fn channels(&self) -> ChannelSet {
        self.channels
    }

    /// The three bytes stored verbatim in the parameter pixel.
    pub fn to_bytes(&self) -> [u8; 3] {
        [
            self.brightness_level,
            self.brightness_mode,
            self.upperbound_intensity,
        ]
    }

    pub fn from_bytes(bytes: [u8; 3]) -> Result<Self> {
        Self::new(bytes[0], bytes[1], bytes[2]).map_err(|e| match e {
            Error::InvalidMode(m) => {
                Error::InvalidParams(format!("brightness_mode ({m}) must be in 1..=7"))
            }
            other => other,
        })
    }
}

impl fmt::Display for StegoParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "level={} mode={} upper={} lower={}",
            self.brightness_level,
            self.brightness_mode,
            self.upperbound_intensity,
            self.lowerbound_intensity
        )
    }
}
