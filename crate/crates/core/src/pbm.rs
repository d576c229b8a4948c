//! Plain (`P1`) portable bitmaps. 1 is black.

use crate::error::{domain, Error, LineError, Result};
use crate::lattice::Lattice;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitmap {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl Bitmap {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(domain(format!(
                "bitmap of {width}x{height} needs {} bits, got {}",
                width * height,
                bits.len()
            )));
        }
        Ok(Bitmap { width, height, bits })
    }

    /// One row per lattice, ON cells black.
    pub fn from_lattices(states: &[Lattice]) -> Result<Self> {
        let width = states.first().map_or(0, Lattice::len);
        if states.iter().any(|s| s.len() != width) {
            return Err(domain("space-time rows differ in width"));
        }
        let bits = states.iter().flat_map(Lattice::iter).collect();
        Bitmap::new(width, states.len(), bits)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.width + col]
    }

    pub fn row(&self, row: usize) -> &[bool] {
        &self.bits[row * self.width..(row + 1) * self.width]
    }

    pub fn to_lattices(&self) -> Result<Vec<Lattice>> {
        if self.width == 0 {
            return Err(domain("bitmap has zero width"));
        }
        Ok((0..self.height)
            .map(|r| Lattice::from_bits(self.row(r).iter().copied()))
            .collect())
    }

    /// `P1`, then `width height`, then one text line of digits per row.
    pub fn to_pbm(&self) -> String {
        let mut out = format!("P1\n{} {}\n", self.width, self.height);
        out.reserve(self.height * (self.width + 1));
        for r in 0..self.height {
            out.extend(self.row(r).iter().map(|&b| if b { '1' } else { '0' }));
            out.push('\n');
        }
        out
    }

    /// Reads any plain PBM: comments, free whitespace and packed or spaced
    /// digits are accepted.
    pub fn parse_pbm(text: &str) -> Result<Self> {
        let mut header = Vec::with_capacity(3);
        let mut bits = Vec::new();
        let bad = |line: usize, message: String| Error::Malformed {
            what: "PBM",
            detail: LineError { line, message },
        };
        let mut expected = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let mut rest = line;
            while header.len() < 3 {
                let trimmed = rest.trim_start();
                if trimmed.is_empty() {
                    break;
                }
                let end = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
                header.push((trimmed[..end].to_string(), i + 1));
                rest = &trimmed[end..];
                if header.len() == 3 {
                    let (w, h) = (&header[1], &header[2]);
                    let width: usize = w.0.parse().map_err(|_| bad(w.1, format!("bad width {:?}", w.0)))?;
                    let height: usize = h.0.parse().map_err(|_| bad(h.1, format!("bad height {:?}", h.0)))?;
                    expected = Some((width, height));
                }
            }
            if header.len() == 1 && header[0].0 != "P1" {
                return Err(bad(header[0].1, format!("expected magic P1, found {:?}", header[0].0)));
            }
            if expected.is_some() {
                for c in rest.chars() {
                    match c {
                        '0' => bits.push(false),
                        '1' => bits.push(true),
                        c if c.is_whitespace() => {}
                        c => return Err(bad(i + 1, format!("unexpected {c:?} in raster"))),
                    }
                }
            }
        }
        let (width, height) = expected.ok_or_else(|| bad(0, "incomplete header".into()))?;
        if bits.len() != width * height {
            return Err(bad(0, format!("expected {} pixels, found {}", width * height, bits.len())));
        }
        Bitmap::new(width, height, bits)
    }
}
