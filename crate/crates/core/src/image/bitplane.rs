use serde::{Deserialize, Serialize};

use super::{Channel, RasterImage};
use crate::error::{Error, Result};

/// One bit position of one channel across every pixel. Plane 7 is the MSB.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitplane {
    width: usize,
    height: usize,
    channel: Channel,
    plane_index: u8,
    bits: Vec<u8>,
}

impl Bitplane {
    pub fn new(
        width: usize,
        height: usize,
        channel: Channel,
        plane_index: u8,
        bits: Vec<u8>,
    ) -> Result<Self> {
        if plane_index > 7 {
            return Err(Error::PlaneMismatch(format!("plane index {plane_index}")));
        }
        if bits.len() != width * height {
            return Err(Error::PlaneMismatch(format!(
                "{} bits for a {width}x{height} plane",
                bits.len()
            )));
        }
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::NotABit(b));
        }
        Ok(Self {
            width,
            height,
            channel,
            plane_index,
            bits,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channel(&self) -> Channel {
        self.channel
    }

    pub fn plane_index(&self) -> u8 {
        self.plane_index
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn bit(&self, row: usize, col: usize) -> u8 {
        self.bits[row * self.width + col]
    }

    pub fn set_bit(&mut self, row: usize, col: usize, bit: u8) {
        self.bits[row * self.width + col] = bit & 1;
    }

    pub fn to_p4(&self) -> Vec<u8> {
        super::write_bitplane(self)
    }
}

/// The eight planes of one channel, indexed by plane number (0 = LSB).
pub fn slice_bitplanes(img: &RasterImage, channel: Channel) -> [Bitplane; 8] {
    let samples = img.channel_samples(channel);
    std::array::from_fn(|k| Bitplane {
        width: img.width(),
        height: img.height(),
        channel,
        plane_index: k as u8,
        bits: samples.iter().map(|&v| (v >> k) & 1).collect(),
    })
}

/// Inverse of [`slice_bitplanes`]: `sample = Σ bit_k · 2^k`.
pub fn assemble_bitplanes(planes: &[Bitplane]) -> Result<Vec<u8>> {
    if planes.len() != 8 {
        return Err(Error::PlaneMismatch(format!(
            "expected 8 planes, got {}",
            planes.len()
        )));
    }
    let (w, h) = (planes[0].width, planes[0].height);
    let mut seen = [false; 8];
    for p in planes {
        if p.width != w || p.height != h {
            return Err(Error::PlaneMismatch("inconsistent dimensions".into()));
        }
        let k = p.plane_index as usize;
        if seen[k] {
            return Err(Error::PlaneMismatch(format!("plane {k} given twice")));
        }
        seen[k] = true;
    }
    let mut out = vec![0u8; w * h];
    for p in planes {
        for (dst, &b) in out.iter_mut().zip(&p.bits) {
            *dst |= b << p.plane_index;
        }
    }
    Ok(out)
}

/// Location of one bit in an image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BitAddress {
    pub row: usize,
    pub col: usize,
    pub channel: Channel,
    pub plane: u8,
}

impl BitAddress {
    /// Position in the canonical stream of a `width`×`height` image.
    pub fn offset(&self, width: usize, height: usize) -> usize {
        let plane_rank = self.channel.index() * 8 + (7 - self.plane as usize);
        (plane_rank * height + self.row) * width + self.col
    }

    pub fn from_offset(offset: usize, width: usize, height: usize) -> Option<Self> {
        let per_plane = width * height;
        let plane_rank = offset / per_plane;
        if plane_rank >= 24 {
            return None;
        }
        let within = offset % per_plane;
        Some(Self {
            row: within / width,
            col: within % width,
            channel: Channel::from_index(plane_rank / 8)?,
            plane: 7 - (plane_rank % 8) as u8,
        })
    }

    /// Index into the 24-entry per-plane tables (`channel * 8 + plane`).
    pub fn plane_slot(&self) -> usize {
        self.channel.index() * 8 + self.plane as usize
    }
}

/// Canonical-order iterator over `(address, bit)`.
pub struct BitStream<'a> {
    img: &'a RasterImage,
    next: usize,
    total: usize,
}

impl<'a> BitStream<'a> {
    pub(super) fn new(img: &'a RasterImage) -> Self {
        Self {
            img,
            next: 0,
            total: img.bit_count(),
        }
    }
}

impl Iterator for BitStream<'_> {
    type Item = (BitAddress, u8);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.total {
            return None;
        }
        let addr = BitAddress::from_offset(self.next, self.img.width(), self.img.height())?;
        self.next += 1;
        Some((addr, self.img.get_bit(addr)))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.total - self.next;
        (left, Some(left))
    }
}

impl ExactSizeIterator for BitStream<'_> {}
