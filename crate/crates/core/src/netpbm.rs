//! Binary Netpbm I/O: P6 color input, P5 grayscale output.
//!
//! Only 8-bit images (maxval 255) are accepted. Headers may contain `#`
//! comments; exactly one whitespace byte separates the maxval from the
//! pixel payload.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::segmentation::{ColorImage, Mask};
use crate::stimuli::Raster;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Header {
    magic: [u8; 2],
    width: usize,
    height: usize,
    maxval: u32,
    /// Offset of the first payload byte.
    data_start: usize,
}

fn parse_header(bytes: &[u8]) -> Result<Header> {
    if bytes.len() < 2 || bytes[0] != b'P' {
        return Err(Error::Format("missing netpbm magic number".into()));
    }
    let magic = [bytes[0], bytes[1]];
    match magic[1] {
        b'5' | b'6' => {}
        b'1'..=b'4' | b'7' => {
            return Err(Error::UnsupportedFormat(format!(
                "P{} (only binary P5/P6 are supported)",
                magic[1] as char
            )))
        }
        _ => return Err(Error::Format("unknown netpbm magic number".into())),
    }

    let mut pos = 2;
    let mut fields = [0u64; 3];
    for field in fields.iter_mut() {
        // Skip whitespace and comments.
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while let Some(&b) = bytes.get(pos) {
                        pos += 1;
                        if b == b'\n' || b == b'\r' {
                            break;
                        }
                    }
                }
                Some(_) => break,
                None => return Err(Error::Format("header ends early".into())),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Format(format!("expected a number at byte {start}")));
        }
        let text = std::str::from_utf8(&bytes[start..pos]).expect("ascii digits");
        *field = text
            .parse()
            .map_err(|_| Error::Format(format!("header value {text} out of range")))?;
    }
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(Error::Format("missing whitespace after maxval".into())),
    }

    let [width, height, maxval] = fields;
    if width == 0 || height == 0 {
        return Err(Error::Format(format!("empty image {width}x{height}")));
    }
    if maxval != 255 {
        return Err(Error::UnsupportedMaxval(maxval.min(u32::MAX as u64) as u32));
    }
    Ok(Header {
        magic,
        width: width as usize,
        height: height as usize,
        maxval: maxval as u32,
        data_start: pos,
    })
}

fn payload<'a>(bytes: &'a [u8], header: &Header, channels: usize) -> Result<&'a [u8]> {
    let expected = header
        .width
        .checked_mul(header.height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or_else(|| Error::Format("image dimensions overflow".into()))?;
    let data = &bytes[header.data_start..];
    if data.len() < expected {
        return Err(Error::Truncated {
            expected,
            found: data.len(),
        });
    }
    Ok(&data[..expected])
}

/// Decodes a P6 image, scaling channels to `[0, 1]` by `/255`.
pub fn decode_ppm(bytes: &[u8]) -> Result<ColorImage> {
    let header = parse_header(bytes)?;
    if header.magic != *b"P6" {
        return Err(Error::UnsupportedFormat("expected P6 color image".into()));
    }
    let data = payload(bytes, &header, 3)?;
    let pixels = data
        .chunks_exact(3)
        .map(|c| {
            [
                c[0] as f64 / 255.0,
                c[1] as f64 / 255.0,
                c[2] as f64 / 255.0,
            ]
        })
        .collect();
    ColorImage::new(header.width, header.height, pixels)
}

pub fn read_ppm<R: Read>(mut reader: R) -> Result<ColorImage> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    decode_ppm(&bytes)
}

pub fn read_ppm_file(path: impl AsRef<Path>) -> Result<ColorImage> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut bytes = Vec::new();
    BufReader::new(file)
        .read_to_end(&mut bytes)
        .map_err(|e| Error::io(path, e))?;
    decode_ppm(&bytes)
}

/// Encodes a color image as P6, rounding channels to the nearest 8-bit level.
pub fn write_ppm<W: Write>(img: &ColorImage, mut w: W) -> Result<()> {
    write!(w, "P6\n{} {}\n255\n", img.width(), img.height())?;
    let mut buf = Vec::with_capacity(img.width() * img.height() * 3);
    for px in img.pixels() {
        buf.extend(px.iter().map(|&c| to_u8(c)));
    }
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

fn to_u8(c: f64) -> u8 {
    (c * 255.0).round().clamp(0.0, 255.0) as u8
}

fn write_p5<W: Write>(width: usize, height: usize, levels: &[u8], mut w: W) -> Result<()> {
    write!(w, "P5\n{width} {height}\n255\n")?;
    w.write_all(levels)?;
    w.flush()?;
    Ok(())
}

/// Writes a mask as P5 with 255 for object pixels and 0 for background.
pub fn write_pgm_mask<W: Write>(mask: &Mask, w: W) -> Result<()> {
    let levels: Vec<u8> = mask
        .bits()
        .iter()
        .map(|&b| if b { 255 } else { 0 })
        .collect();
    write_p5(mask.width(), mask.height(), &levels, w)
}

/// Reads a P5 mask back; any nonzero level counts as object.
pub fn read_pgm_mask<R: Read>(mut reader: R) -> Result<Mask> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    let header = parse_header(&bytes)?;
    if header.magic != *b"P5" {
        return Err(Error::UnsupportedFormat(
            "expected P5 grayscale image".into(),
        ));
    }
    let data = payload(&bytes, &header, 1)?;
    Mask::new(
        header.width,
        header.height,
        data.iter().map(|&v| v != 0).collect(),
    )
}

/// Writes a raster as P5, mapping `[min, max]` linearly onto `0..=255`
/// with rounding. A constant raster maps to all zeros.
pub fn write_pgm_raster<W: Write>(r: &Raster, w: W) -> Result<()> {
    let (lo, hi) = r.min_max();
    let span = hi - lo;
    let levels: Vec<u8> = r
        .values()
        .iter()
        .map(|&v| {
            if span > 0.0 {
                (255.0 * (v - lo) / span).round().clamp(0.0, 255.0) as u8
            } else {
                0
            }
        })
        .collect();
    write_p5(r.width(), r.height(), &levels, w)
}

/// Creates `path` and hands a buffered writer to `f`, attaching the path to
/// any I/O failure.
pub fn write_file<F>(path: impl AsRef<Path>, f: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<()>,
{
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w).map_err(|e| match e {
        Error::Stream(source) => Error::io(path, source),
        other => other,
    })
}
