//! Capacity, distortion and intensity statistics.

use std::fmt;

use crate::error::{Error, Result};
use crate::image::RawImage;
use crate::params::{StegoParams, CARRIER_BITS};
use crate::stego::{carrier_positions, data_channel_indices, preprocess};

/// Peak signal-to-noise ratio in decibels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psnr {
    /// The images are identical.
    Infinite,
    Db(f64),
}

impl Psnr {
    pub fn db(self) -> f64 {
        match self {
            Psnr::Infinite => f64::INFINITY,
            Psnr::Db(v) => v,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Psnr::Infinite)
    }
}

impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Infinite => f.write_str("inf"),
            Psnr::Db(v) => write!(f, "{v:.2} dB"),
        }
    }
}

/// PSNR with peak 255 over every pixel byte.
pub fn psnr(a: &RawImage, b: &RawImage) -> Result<Psnr> {
    if !a.same_dimensions(b) {
        return Err(Error::DimensionMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    let sse: u64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&x, &y)| {
            let d = i64::from(x) - i64::from(y);
            (d * d) as u64
        })
        .sum();
    if sse == 0 {
        return Ok(Psnr::Infinite);
    }
    let mse = sse as f64 / a.data().len() as f64;
    Ok(Psnr::Db(10.0 * (255.0f64 * 255.0 / mse).log10()))
}

/// Number of pixel bytes (all channels) strictly above `threshold`.
pub fn intensity_census(image: &RawImage, threshold: u8) -> usize {
    image.data().iter().filter(|&&b| b > threshold).count()
}

/// Payload bits `image` can carry under `params`.
pub fn capacity(image: &RawImage, params: &StegoParams) -> usize {
    carrier_byte_count(image, params) * CARRIER_BITS as usize
}

fn carrier_byte_count(image: &RawImage, params: &StegoParams) -> usize {
    carrier_positions(&preprocess(image, params), params).len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CapacityFigures {
    pub params: StegoParams,
    pub carrier_byte_count: usize,
    pub capacity_bits: usize,
    /// Bytes in the selected channels, parameter pixels excluded.
    pub total_data_channel_bytes: usize,
}

impl CapacityFigures {
    pub fn measure(image: &RawImage, params: &StegoParams) -> Self {
        let carrier_byte_count = carrier_byte_count(image, params);
        Self {
            params: *params,
            carrier_byte_count,
            capacity_bits: carrier_byte_count * CARRIER_BITS as usize,
            total_data_channel_bytes: data_channel_indices(image, params.channels()).count(),
        }
    }

    /// Largest message, in bytes, that fits alongside the 32-bit length header.
    pub fn max_message_bytes(&self) -> usize {
        self.capacity_bits.saturating_sub(32) / 8
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Census {
    pub threshold: u8,
    pub count: usize,
}

/// Everything `inspect` reports about an image.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub width: u32,
    pub height: u32,
    pub capacity: Option<CapacityFigures>,
    pub census: Option<Census>,
    pub psnr: Option<Psnr>,
}

impl AnalysisReport {
    pub fn build(
        image: &RawImage,
        params: Option<&StegoParams>,
        census_threshold: Option<u8>,
        reference: Option<&RawImage>,
    ) -> Result<Self> {
        Ok(Self {
            width: image.width(),
            height: image.height(),
            capacity: params.map(|p| CapacityFigures::measure(image, p)),
            census: census_threshold.map(|threshold| Census {
                threshold,
                count: intensity_census(image, threshold),
            }),
            psnr: reference.map(|r| psnr(r, image)).transpose()?,
        })
    }

    /// Line-oriented `key: value` text for people.
    pub fn render_text(&self) -> String {
        let mut out = format!("dimensions: {}x{}\n", self.width, self.height);
        if let Some(c) = &self.capacity {
            out += &format!("params: {}\n", c.params);
            out += &format!("capacity: {} bits\n", c.capacity_bits);
            out += &format!("max message: {} bytes\n", c.max_message_bytes());
            out += &format!("carrier bytes: {}\n", c.carrier_byte_count);
            out += &format!("data-channel bytes: {}\n", c.total_data_channel_bytes);
        }
        if let Some(c) = &self.census {
            out += &format!("census above {}: {}\n", c.threshold, c.count);
        }
        if let Some(p) = &self.psnr {
            out += &format!("PSNR: {p}\n");
        }
        out
    }

    /// `key=value` lines for scripts. PSNR is printed as a plain number or `inf`.
    pub fn render_kv(&self) -> String {
        let mut out = format!("width={}\nheight={}\n", self.width, self.height);
        if let Some(c) = &self.capacity {
            out += &format!(
                "brightness_level={}\nbrightness_mode={}\nupperbound_intensity={}\nlowerbound_intensity={}\n",
                c.params.brightness_level(),
                c.params.brightness_mode(),
                c.params.upperbound_intensity(),
                c.params.lowerbound_intensity()
            );
            out += &format!("capacity_bits={}\n", c.capacity_bits);
            out += &format!("max_message_bytes={}\n", c.max_message_bytes());
            out += &format!("carrier_byte_count={}\n", c.carrier_byte_count);
            out += &format!("total_data_channel_bytes={}\n", c.total_data_channel_bytes);
        }
        if let Some(c) = &self.census {
            out += &format!(
                "census_threshold={}\ncensus_above_threshold={}\n",
                c.threshold, c.count
            );
        }
        if let Some(p) = &self.psnr {
            match p {
                Psnr::Infinite => out += "psnr_db=inf\n",
                Psnr::Db(v) => out += &format!("psnr_db={v:.4}\n"),
            }
        }
        out
    }
}
