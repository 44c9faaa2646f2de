//! RGB rasters, binary PPM/PBM interchange and bitplane slicing.

mod bitplane;
mod pnm;

pub use bitplane::{assemble_bitplanes, slice_bitplanes, BitAddress, BitStream, Bitplane};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Channel {
    R,
    G,
    B,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::R, Channel::G, Channel::B];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn letter(self) -> char {
        match self {
            Channel::R => 'R',
            Channel::G => 'G',
            Channel::B => 'B',
        }
    }
}

/// 8-bit, 3-channel image with interleaved row-major samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::MalformedImage("zero dimension".into()));
        }
        let want = width
            .checked_mul(height)
            .and_then(|p| p.checked_mul(3))
            .ok_or_else(|| Error::MalformedImage("dimensions overflow".into()))?;
        if samples.len() != want {
            return Err(Error::MalformedImage(format!(
                "expected {want} samples, got {}",
                samples.len()
            )));
        }
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    /// Builds an image by evaluating `f(row, col)` for every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [u8; 3],
    ) -> Result<Self> {
        let mut samples = Vec::with_capacity(width * height * 3);
        for r in 0..height {
            for c in 0..width {
                samples.extend_from_slice(&f(r, c));
            }
        }
        Self::new(width, height, samples)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn pixel(&self, row: usize, col: usize) -> [u8; 3] {
        let i = (row * self.width + col) * 3;
        [self.samples[i], self.samples[i + 1], self.samples[i + 2]]
    }

    pub fn sample(&self, row: usize, col: usize, channel: Channel) -> u8 {
        self.samples[(row * self.width + col) * 3 + channel.index()]
    }

    /// One channel's samples in row-major order.
    pub fn channel_samples(&self, channel: Channel) -> Vec<u8> {
        self.samples
            .iter()
            .skip(channel.index())
            .step_by(3)
            .copied()
            .collect()
    }

    pub fn set_channel(&mut self, channel: Channel, values: &[u8]) -> Result<()> {
        if values.len() != self.width * self.height {
            return Err(Error::PlaneMismatch(format!(
                "channel has {} samples, image has {} pixels",
                values.len(),
                self.width * self.height
            )));
        }
        for (dst, &v) in self
            .samples
            .iter_mut()
            .skip(channel.index())
            .step_by(3)
            .zip(values)
        {
            *dst = v;
        }
        Ok(())
    }

    /// Total number of bits across all channels and planes.
    pub fn bit_count(&self) -> usize {
        self.width * self.height * 3 * 8
    }

    pub fn get_bit(&self, addr: BitAddress) -> u8 {
        (self.sample(addr.row, addr.col, addr.channel) >> addr.plane) & 1
    }

    pub fn set_bit(&mut self, addr: BitAddress, bit: u8) {
        let i = (addr.row * self.width + addr.col) * 3 + addr.channel.index();
        let m = 1u8 << addr.plane;
        if bit & 1 == 1 {
            self.samples[i] |= m;
        } else {
            self.samples[i] &= !m;
        }
    }

    /// Every bit in canonical order: channel R, G, B; plane 7 down to 0; row-major.
    pub fn bit_stream(&self) -> BitStream<'_> {
        BitStream::new(self)
    }

    pub fn from_p6(bytes: &[u8]) -> Result<Self> {
        pnm::parse_p6(bytes)
    }

    pub fn to_p6(&self) -> Vec<u8> {
        pnm::write_p6(self)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_p6(&std::fs::read(path)?)
    }

    pub fn save(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        std::fs::write(path, self.to_p6())?;
        Ok(())
    }
}

/// Parses a binary PPM (`P6`, maxval 255).
pub fn load_raster(bytes: &[u8]) -> Result<RasterImage> {
    RasterImage::from_p6(bytes)
}

pub fn write_raster(img: &RasterImage) -> Vec<u8> {
    img.to_p6()
}

/// Binary PBM (`P4`), bit 1 drawn black.
pub fn write_bitplane(plane: &Bitplane) -> Vec<u8> {
    pnm::write_p4(plane)
}
