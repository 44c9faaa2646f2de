use super::{Bitplane, RasterImage};
use crate::error::{Error, Result};

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&b) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if b == b'\n' || b == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::MalformedImage(format!("missing {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MalformedImage(format!("bad {what}")))
    }
}

pub(super) fn parse_p6(bytes: &[u8]) -> Result<RasterImage> {
    if bytes.len() < 2 || bytes[0] != b'P' {
        return Err(Error::MalformedImage("bad magic".into()));
    }
    if bytes[1] != b'6' {
        return Err(Error::UnsupportedFormat(format!(
            "P{}",
            char::from(bytes[1]).escape_default()
        )));
    }
    let mut h = Header { bytes, pos: 2 };
    let width = h.number("width")?;
    let height = h.number("height")?;
    let maxval = h.number("maxval")?;
    if maxval != 255 {
        return Err(Error::UnsupportedFormat(format!("maxval {maxval}")));
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(h.pos) {
        Some(b) if b.is_ascii_whitespace() => h.pos += 1,
        _ => return Err(Error::MalformedImage("missing header terminator".into())),
    }
    let need = width
        .checked_mul(height)
        .and_then(|p| p.checked_mul(3))
        .ok_or_else(|| Error::MalformedImage("dimensions overflow".into()))?;
    let payload = &bytes[h.pos..];
    if payload.len() < need {
        return Err(Error::MalformedImage(format!(
            "truncated payload: {} of {need} bytes",
            payload.len()
        )));
    }
    RasterImage::new(width, height, payload[..need].to_vec())
}

pub(super) fn write_p6(img: &RasterImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.samples());
    out
}

pub(super) fn write_p4(plane: &Bitplane) -> Vec<u8> {
    let (w, h) = (plane.width(), plane.height());
    let mut out = format!("P4\n{w} {h}\n").into_bytes();
    let row_bytes = w.div_ceil(8);
    for r in 0..h {
        let mut row = vec![0u8; row_bytes];
        for c in 0..w {
            if plane.bit(r, c) == 1 {
                row[c / 8] |= 0x80 >> (c % 8);
            }
        }
        out.extend_from_slice(&row);
    }
    out
}
