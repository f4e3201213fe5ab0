//! Minimal PGM (P2/P5) reader and writer.
//!
//! PGM keeps test fixtures byte-exact without codec dependencies. Reads
//! accept ASCII (P2) and binary (P5) with '#' comments in the header; writes
//! always emit canonical P5: `"P5\n<w> <h>\n<maxval>\n"` followed by raw
//! samples (big-endian pairs when maxval exceeds 255).

use std::path::Path;

use thiserror::Error;

use crate::buffer::ImageBuffer;

#[derive(Debug, Error)]
pub enum PgmError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("maxval must lie in 1..=65535, got {0}")]
    InvalidMaxval(u32),
    #[error("unexpected end of data")]
    UnexpectedEndOfData,
    #[error("sample {value} exceeds maxval {maxval}")]
    SampleOutOfRange { value: u32, maxval: u16 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmMagic {
    /// "P2"
    Ascii,
    /// "P5"
    Binary,
}

/// A decoded PGM file: exact integer samples plus the header fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PgmImage {
    pub magic: PgmMagic,
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub samples: Vec<u16>,
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderCursor<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    /// Next whitespace-delimited token, skipping '#' comments.
    fn token(&mut self) -> Result<&'a str, PgmError> {
        loop {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos >= self.bytes.len() {
                return Err(PgmError::UnexpectedEndOfData);
            }
            if self.bytes[self.pos] == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
                continue;
            }
            let start = self.pos;
            while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            return std::str::from_utf8(&self.bytes[start..self.pos])
                .map_err(|_| PgmError::MalformedHeader("non-ascii token".into()));
        }
    }

    fn number(&mut self, what: &str) -> Result<u32, PgmError> {
        let token = self.token()?;
        token
            .parse::<u32>()
            .map_err(|_| PgmError::MalformedHeader(format!("invalid {what}: {token:?}")))
    }
}

impl PgmImage {
    /// Parses P2 or P5 bytes.
    pub fn decode(bytes: &[u8]) -> Result<Self, PgmError> {
        let mut cursor = HeaderCursor::new(bytes);
        let magic = match cursor.token()? {
            "P2" => PgmMagic::Ascii,
            "P5" => PgmMagic::Binary,
            other => {
                return Err(PgmError::MalformedHeader(format!(
                    "unsupported magic {other:?}"
                )))
            }
        };
        let width = cursor.number("width")? as usize;
        let height = cursor.number("height")? as usize;
        if width == 0 || height == 0 {
            return Err(PgmError::MalformedHeader(format!(
                "degenerate dimensions {width}x{height}"
            )));
        }
        let maxval_raw = cursor.number("maxval")?;
        if maxval_raw == 0 || maxval_raw > 65535 {
            return Err(PgmError::InvalidMaxval(maxval_raw));
        }
        let maxval = maxval_raw as u16;
        let count = width * height;

        let samples = match magic {
            PgmMagic::Ascii => {
                let mut samples = Vec::with_capacity(count);
                for _ in 0..count {
                    let value = cursor.number("sample")?;
                    if value > maxval as u32 {
                        return Err(PgmError::SampleOutOfRange { value, maxval });
                    }
                    samples.push(value as u16);
                }
                samples
            }
            PgmMagic::Binary => {
                // Exactly one whitespace byte separates the header from data.
                let data_start = cursor.pos + 1;
                if cursor.pos >= bytes.len() || !bytes[cursor.pos].is_ascii_whitespace() {
                    return Err(PgmError::MalformedHeader(
                        "missing whitespace before binary data".into(),
                    ));
                }
                let data = &bytes[data_start..];
                let wide = maxval > 255;
                let need = count * if wide { 2 } else { 1 };
                if data.len() < need {
                    return Err(PgmError::UnexpectedEndOfData);
                }
                let mut samples = Vec::with_capacity(count);
                if wide {
                    for pair in data[..need].chunks_exact(2) {
                        let value = u16::from_be_bytes([pair[0], pair[1]]);
                        if value > maxval {
                            return Err(PgmError::SampleOutOfRange {
                                value: value as u32,
                                maxval,
                            });
                        }
                        samples.push(value);
                    }
                } else {
                    for &byte in &data[..need] {
                        if byte as u16 > maxval {
                            return Err(PgmError::SampleOutOfRange {
                                value: byte as u32,
                                maxval,
                            });
                        }
                        samples.push(byte as u16);
                    }
                }
                samples
            }
        };

        Ok(Self {
            magic,
            width,
            height,
            maxval,
            samples,
        })
    }

    /// Canonical P5 bytes.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n{}\n", self.width, self.height, self.maxval).into_bytes();
        if self.maxval > 255 {
            for &s in &self.samples {
                out.extend_from_slice(&s.to_be_bytes());
            }
        } else {
            out.extend(self.samples.iter().map(|&s| s as u8));
        }
        out
    }

    /// Intensity buffer rescaled to [0, 255] doubles (maxval-normalized).
    pub fn to_buffer(&self) -> ImageBuffer {
        let scale = 255.0 / self.maxval as f64;
        let data = self.samples.iter().map(|&s| s as f64 * scale).collect();
        ImageBuffer::from_vec_unchecked(self.width, self.height, data)
    }

    /// Quantizes a buffer: clamp to [0, maxval], round half to even.
    pub fn from_buffer(img: &ImageBuffer, maxval: u16) -> Self {
        let samples = img
            .as_slice()
            .iter()
            .map(|&v| v.clamp(0.0, maxval as f64).round_ties_even() as u16)
            .collect();
        Self {
            magic: PgmMagic::Binary,
            width: img.width(),
            height: img.height(),
            maxval,
            samples,
        }
    }
}

/// Reads a P2/P5 file into a [0, 255]-scaled buffer.
pub fn read_pgm(path: impl AsRef<Path>) -> Result<ImageBuffer, PgmError> {
    let bytes = std::fs::read(path)?;
    Ok(PgmImage::decode(&bytes)?.to_buffer())
}

/// Writes a buffer as canonical P5 with the given maxval (values are clamped
/// to [0, maxval] and rounded half to even).
pub fn write_pgm(img: &ImageBuffer, path: impl AsRef<Path>, maxval: u16) -> Result<(), PgmError> {
    let bytes = PgmImage::from_buffer(img, maxval).encode();
    std::fs::write(path, bytes)?;
    Ok(())
}
