//! Netpbm graymap (P2/P5) and pixmap (P3/P6) codecs, 8-bit samples only.

use super::{GrayImage, RgbImage, SegmentError};

fn format_err(message: impl Into<String>) -> SegmentError {
    SegmentError::Format(message.into())
}

/// Header tokens and the offset of the first byte after the header's
/// trailing whitespace character.
struct Header {
    magic: [u8; 2],
    width: usize,
    height: usize,
    maxval: usize,
    data_start: usize,
}

fn parse_header(bytes: &[u8]) -> Result<Header, SegmentError> {
    if bytes.len() < 2 || bytes[0] != b'P' {
        return Err(format_err("missing netpbm magic number"));
    }
    let magic = [bytes[0], bytes[1]];
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        // Skip whitespace and comments.
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(format_err("truncated or malformed netpbm header"));
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| format_err("header value out of range"))?;
    }
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(format_err("header must end with whitespace"));
    }
    let [width, height, maxval] = fields;
    if maxval == 0 || maxval > 255 {
        return Err(format_err(format!("unsupported maxval {maxval}")));
    }
    Ok(Header {
        magic,
        width,
        height,
        maxval,
        data_start: pos + 1,
    })
}

fn samples(header: &Header, bytes: &[u8], per_pixel: usize) -> Result<Vec<u8>, SegmentError> {
    let count = header.width * header.height * per_pixel;
    let raw: Vec<usize> = match header.magic[1] {
        b'5' | b'6' => {
            let data = &bytes[header.data_start..];
            if data.len() < count {
                return Err(format_err(format!(
                    "expected {count} samples, found {}",
                    data.len()
                )));
            }
            data[..count].iter().map(|&b| b as usize).collect()
        }
        _ => {
            let text = std::str::from_utf8(&bytes[header.data_start..])
                .map_err(|_| format_err("plain netpbm data is not ASCII"))?;
            let values = text
                .lines()
                .map(|line| line.split('#').next().unwrap_or(""))
                .flat_map(str::split_ascii_whitespace)
                .map(|tok| tok.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| format_err("malformed sample"))?;
            if values.len() != count {
                return Err(format_err(format!(
                    "expected {count} samples, found {}",
                    values.len()
                )));
            }
            values
        }
    };
    raw.into_iter()
        .map(|v| {
            if v > header.maxval {
                Err(format_err(format!("sample {v} exceeds maxval {}", header.maxval)))
            } else {
                Ok(((v * 255 + header.maxval / 2) / header.maxval) as u8)
            }
        })
        .collect()
}

/// Reads a binary (P5) or plain (P2) graymap. Samples are rescaled to
/// `0..=255` when `maxval` is below 255.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage, SegmentError> {
    let header = parse_header(bytes)?;
    if !matches!(header.magic[1], b'2' | b'5') {
        return Err(format_err("not a graymap (expected P2 or P5)"));
    }
    let pixels = samples(&header, bytes, 1)?;
    GrayImage::new(header.width, header.height, pixels)
}

/// Writes a binary (P5) graymap, or the plain (P2) variant.
pub fn write_pgm(img: &GrayImage, plain: bool) -> Vec<u8> {
    let magic = if plain { "P2" } else { "P5" };
    let mut out = format!("{magic}\n{} {}\n255\n", img.width, img.height).into_bytes();
    if plain {
        for row in img.pixels.chunks(img.width.max(1)) {
            let line: Vec<String> = row.iter().map(u8::to_string).collect();
            out.extend_from_slice(line.join(" ").as_bytes());
            out.push(b'\n');
        }
    } else {
        out.extend_from_slice(&img.pixels);
    }
    out
}

/// Reads a binary (P6) or plain (P3) pixmap.
pub fn read_ppm(bytes: &[u8]) -> Result<RgbImage, SegmentError> {
    let header = parse_header(bytes)?;
    if !matches!(header.magic[1], b'3' | b'6') {
        return Err(format_err("not a pixmap (expected P3 or P6)"));
    }
    let pixels = samples(&header, bytes, 3)?
        .chunks_exact(3)
        .map(|c| [c[0], c[1], c[2]])
        .collect();
    Ok(RgbImage {
        width: header.width,
        height: header.height,
        pixels,
    })
}

/// Writes a binary (P6) pixmap.
pub fn write_ppm(img: &RgbImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width, img.height).into_bytes();
    for px in &img.pixels {
        out.extend_from_slice(px);
    }
    out
}
