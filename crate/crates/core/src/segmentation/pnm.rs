//! Binary PPM (P6) and PGM (P5) with 8-bit samples.

use std::path::Path;

use crate::error::{Error, Result};
use crate::submodular::Subset;

/// Row-major RGB image. Grayscale input is stored with equal channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl Image {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput("image must be nonempty".into()));
        }
        if pixels.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                found: pixels.len(),
            });
        }
        Ok(Image { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * self.width + x]
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    /// Luma with Rec. 601 weights, in `[0, 255]`.
    pub fn gray(&self, i: usize) -> f64 {
        let [r, g, b] = self.pixels[i];
        0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.pixels.iter().flatten());
        out
    }

    pub fn write_ppm(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_ppm())?;
        Ok(())
    }
}

pub fn load_image(path: &Path) -> Result<Image> {
    parse_pnm(&std::fs::read(path)?)
}

pub fn parse_pnm(bytes: &[u8]) -> Result<Image> {
    let mut pos = 0;
    let magic = header_token(bytes, &mut pos)?;
    let channels = match magic.as_str() {
        "P6" => 3,
        "P5" => 1,
        other => return Err(Error::Format(format!("unsupported magic number '{other}'"))),
    };
    let width = header_number(bytes, &mut pos, "width")?;
    let height = header_number(bytes, &mut pos, "height")?;
    let maxval = header_number(bytes, &mut pos, "maxval")?;
    if maxval != 255 {
        return Err(Error::Format(format!("unsupported maxval {maxval}, expected 255")));
    }
    if width == 0 || height == 0 {
        return Err(Error::Format("zero image dimension".into()));
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(Error::Format("missing whitespace after maxval".into())),
    }
    let need = width
        .checked_mul(height)
        .and_then(|p| p.checked_mul(channels))
        .ok_or_else(|| Error::Format("image dimensions overflow".into()))?;
    let raster = &bytes[pos..];
    if raster.len() < need {
        return Err(Error::Format(format!(
            "truncated raster: expected {need} bytes, found {}",
            raster.len()
        )));
    }
    let pixels = if channels == 3 {
        raster[..need].chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect()
    } else {
        raster[..need].iter().map(|&v| [v, v, v]).collect()
    };
    Image::new(width, height, pixels)
}

fn header_token(bytes: &[u8], pos: &mut usize) -> Result<String> {
    loop {
        match bytes.get(*pos) {
            None => return Err(Error::Format("unexpected end of header".into())),
            Some(b'#') => {
                while let Some(&b) = bytes.get(*pos) {
                    *pos += 1;
                    if b == b'\n' || b == b'\r' {
                        break;
                    }
                }
            }
            Some(b) if b.is_ascii_whitespace() => *pos += 1,
            Some(_) => break,
        }
    }
    let start = *pos;
    while let Some(b) = bytes.get(*pos) {
        if b.is_ascii_whitespace() || *b == b'#' {
            break;
        }
        *pos += 1;
    }
    Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
}

fn header_number(bytes: &[u8], pos: &mut usize, what: &str) -> Result<usize> {
    let tok = header_token(bytes, pos)?;
    tok.parse()
        .map_err(|_| Error::Format(format!("bad {what} '{tok}' in header")))
}

/// P5 mask: 255 for pixels in `set`, 0 elsewhere.
pub fn mask_pgm(set: &Subset, width: usize, height: usize) -> Result<Vec<u8>> {
    if set.ground_size() != width * height {
        return Err(Error::DimensionMismatch {
            expected: width * height,
            found: set.ground_size(),
        });
    }
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend(set.mask().iter().map(|&m| if m { 255u8 } else { 0 }));
    Ok(out)
}

pub fn emit_mask(set: &Subset, width: usize, height: usize, path: &Path) -> Result<()> {
    std::fs::write(path, mask_pgm(set, width, height)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_black_pixel() {
        let img = parse_pnm(b"P6\n1 1\n255\n\x00\x00\x00").unwrap();
        assert_eq!(img, Image::new(1, 1, vec![[0, 0, 0]]).unwrap());
    }

    #[test]
    fn comments_and_whitespace() {
        let img = parse_pnm(b"P5 # gray\n# size next\n2\t1\n255 \x10\x20").unwrap();
        assert_eq!(img.pixels(), &[[16, 16, 16], [32, 32, 32]]);
    }

    #[test]
    fn raster_may_start_with_whitespace_bytes() {
        let img = parse_pnm(b"P5\n2 1\n255\n\x0a\x20").unwrap();
        assert_eq!(img.pixels(), &[[10, 10, 10], [32, 32, 32]]);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(parse_pnm(b"P3\n1 1\n255\n0 0 0"), Err(Error::Format(_))));
        assert!(matches!(parse_pnm(b"P6\n1 1\n65535\n\0\0\0\0\0\0"), Err(Error::Format(_))));
        assert!(matches!(parse_pnm(b"P6\n2 2\n255\n\0\0\0"), Err(Error::Format(_))));
        assert!(matches!(parse_pnm(b"P6\n2"), Err(Error::Format(_))));
        assert!(matches!(parse_pnm(b"P6\nx 2\n255\n"), Err(Error::Format(_))));
    }

    #[test]
    fn ppm_round_trip() {
        let img = Image::new(2, 2, vec![[1, 2, 3], [4, 5, 6], [7, 8, 9], [255, 0, 128]]).unwrap();
        assert_eq!(parse_pnm(&img.to_ppm()).unwrap(), img);
    }

    #[test]
    fn mask_round_trip() {
        let set = Subset::from_indices(6, &[0, 3, 4]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("mask.pgm");
        emit_mask(&set, 3, 2, &path).unwrap();
        let back = load_image(&path).unwrap();
        let mask: Vec<bool> = back.pixels().iter().map(|p| p[0] == 255).collect();
        assert_eq!(mask, set.mask());
        assert!(back.pixels().iter().all(|p| p[0] == 0 || p[0] == 255));
    }
}
