//! Image segmentation instances: an 8-neighbour grid cut split into
//! matchings, plus one modular block of unary potentials.

mod grid;
mod pnm;

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use grid::{build_grid, edge_weight, partition_matchings, Direction, GridEdge, GridGraph};
pub use pnm::{emit_mask, load_image, mask_pgm, parse_pnm, Image};

use crate::blocks::Block;
use crate::error::{Error, Result};
use crate::solvers::Decomposition;

pub const SCHEME: &str = "direction-parity-8";

/// Parameters recorded next to an instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceMetadata {
    pub image: String,
    pub lambda: f64,
    pub sigma: f64,
    pub scheme: String,
    pub r: usize,
    pub n: usize,
}

#[derive(Debug, Clone)]
pub struct SegmentationInstance {
    pub decomposition: Decomposition,
    pub width: usize,
    pub height: usize,
    pub metadata: InstanceMetadata,
}

impl SegmentationInstance {
    pub fn metadata_json(&self) -> String {
        serde_json::to_string_pretty(&self.metadata).expect("metadata serializes")
    }
}

/// Matching blocks of `g` followed by one modular block holding `unary`.
pub fn make_instance(g: &GridGraph, unary: Vec<f64>) -> Result<Decomposition> {
    let n = g.width * g.height;
    if unary.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: unary.len(),
        });
    }
    let mut blocks = partition_matchings(g)?
        .into_iter()
        .map(|m| Block::matching(n, m))
        .collect::<Result<Vec<_>>>()?;
    blocks.push(Block::modular(unary)?);
    Decomposition::new(n, blocks)
}

/// Builds the grid with the given kernel parameters and attaches metadata.
pub fn segmentation_instance(
    img: &Image,
    unary: Vec<f64>,
    lambda: f64,
    sigma: f64,
    source: &str,
) -> Result<SegmentationInstance> {
    let g = build_grid(img, lambda, sigma)?;
    let decomposition = make_instance(&g, unary)?;
    let metadata = InstanceMetadata {
        image: source.to_string(),
        lambda,
        sigma,
        scheme: SCHEME.to_string(),
        r: decomposition.r(),
        n: decomposition.n(),
    };
    Ok(SegmentationInstance {
        decomposition,
        width: img.width(),
        height: img.height(),
        metadata,
    })
}

/// Whitespace-separated ASCII floats, one per pixel in row-major order.
pub fn parse_unary(text: &str, n: usize) -> Result<Vec<f64>> {
    let values = text
        .split_ascii_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Format(format!("bad unary value '{t}'")))
        })
        .collect::<Result<Vec<_>>>()?;
    if values.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: values.len(),
        });
    }
    Ok(values)
}

pub fn load_unary(path: &Path, n: usize) -> Result<Vec<f64>> {
    parse_unary(&std::fs::read_to_string(path)?, n)
}

/// Unary potentials from grayscale seed thresholds: pixels at least as
/// bright as `high` get `−scale` (pulled into the set), pixels at most
/// `low` get `+scale`, and values in between are interpolated linearly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdUnary {
    pub low: f64,
    pub high: f64,
    pub scale: f64,
}

impl Default for ThresholdUnary {
    fn default() -> Self {
        ThresholdUnary {
            low: 96.0,
            high: 160.0,
            scale: 1.0,
        }
    }
}

impl ThresholdUnary {
    pub fn unary(&self, img: &Image) -> Result<Vec<f64>> {
        if !(self.low < self.high) || !self.scale.is_finite() {
            return Err(Error::InvalidInput(format!(
                "thresholds need low < high and a finite scale, got {self:?}"
            )));
        }
        let mid = 0.5 * (self.low + self.high);
        let half = 0.5 * (self.high - self.low);
        Ok((0..img.len())
            .map(|i| self.scale * ((mid - img.gray(i)) / half).clamp(-1.0, 1.0))
            .collect())
    }
}

/// Seeded test image: a bright ellipse on a darker background, with noise
/// and a soft colour gradient.
pub fn synthetic_image(width: usize, height: usize, seed: u64) -> Result<Image> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidInput("image must be nonempty".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (cx, cy) = (0.55 * width as f64, 0.45 * height as f64);
    let (rx, ry) = (0.3 * width as f64, 0.25 * height as f64);
    let mut pixels = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let dx = (x as f64 + 0.5 - cx) / rx;
            let dy = (y as f64 + 0.5 - cy) / ry;
            let inside = dx * dx + dy * dy <= 1.0;
            let base = if inside {
                [200.0, 170.0, 120.0]
            } else {
                let t = y as f64 / height as f64;
                [40.0 + 40.0 * t, 70.0, 110.0 - 30.0 * t]
            };
            let mut px = [0u8; 3];
            for (p, b) in px.iter_mut().zip(base) {
                *p = (b + rng.gen_range(-35.0..35.0)).round().clamp(0.0, 255.0) as u8;
            }
            pixels.push(px);
        }
    }
    Image::new(width, height, pixels)
}

/// The seeded `width × height` synthetic segmentation instance used for
/// solver comparisons: [`synthetic_image`], threshold unaries, and the grid
/// kernel with the given `lambda`, `sigma`.
pub fn synthetic_instance(width: usize, height: usize, seed: u64, lambda: f64, sigma: f64) -> Result<SegmentationInstance> {
    let img = synthetic_image(width, height, seed)?;
    let unary = ThresholdUnary::default().unary(&img)?;
    segmentation_instance(&img, unary, lambda, sigma, &format!("synthetic:{width}x{height}:seed={seed}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submodular::{brute_force_min, Subset, SubmodularOracle};

    fn direct_energy(g: &GridGraph, unary: &[f64], set: &Subset) -> f64 {
        let cut: f64 = g
            .edges
            .iter()
            .filter(|e| set.contains(e.i) != set.contains(e.j))
            .map(|e| e.weight)
            .sum();
        cut + set.indices().iter().map(|&i| unary[i]).sum::<f64>()
    }

    #[test]
    fn instance_matches_direct_energy() {
        let img = synthetic_image(4, 4, 3).unwrap();
        let g = build_grid(&img, 0.7, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let unary: Vec<f64> = (0..16).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let d = make_instance(&g, unary.clone()).unwrap();
        for bits in 0..(1u64 << 16) {
            let s = Subset::from_bits(16, bits);
            let (a, b) = (d.eval(&s), direct_energy(&g, &unary, &s));
            assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "{bits}: {a} vs {b}");
        }
    }

    #[test]
    fn zero_unary_minimizers() {
        let img = synthetic_image(3, 2, 1).unwrap();
        let g = build_grid(&img, 1.0, 1.0).unwrap();
        let d = make_instance(&g, vec![0.0; 6]).unwrap();
        let (set, value) = brute_force_min(&d).unwrap();
        assert_eq!(value, 0.0);
        assert!(set.is_empty() || set.len() == 6);
    }

    #[test]
    fn bimodal_unary_recovers_box() {
        let (w, h) = (4, 2);
        let img = Image::new(w, h, vec![[128, 128, 128]; w * h]).unwrap();
        let g = build_grid(&img, 1e-3, 1.0).unwrap();
        let inside = [1usize, 2, 5, 6];
        let unary: Vec<f64> = (0..w * h).map(|i| if inside.contains(&i) { -5.0 } else { 5.0 }).collect();
        let d = make_instance(&g, unary).unwrap();
        let (set, _) = brute_force_min(&d).unwrap();
        assert_eq!(set.indices(), inside);
    }

    #[test]
    fn unary_length_checked() {
        let g = build_grid(&synthetic_image(2, 2, 0).unwrap(), 1.0, 1.0).unwrap();
        assert!(matches!(make_instance(&g, vec![0.0; 3]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn unary_file_parsing() {
        assert_eq!(parse_unary("1 -2.5\n3e-1\t0\n", 4).unwrap(), vec![1.0, -2.5, 0.3, 0.0]);
        assert!(parse_unary("1 2", 3).is_err());
        assert!(parse_unary("1 x 2", 3).is_err());
        assert!(parse_unary("1 nan", 2).is_err());
    }

    #[test]
    fn threshold_unary_signs() {
        let img = Image::new(3, 1, vec![[0, 0, 0], [128, 128, 128], [255, 255, 255]]).unwrap();
        let u = ThresholdUnary::default().unary(&img).unwrap();
        assert_eq!(u[0], 1.0);
        assert!(u[1].abs() < 0.05);
        assert_eq!(u[2], -1.0);
    }

    #[test]
    fn synthetic_instance_shape() {
        let inst = synthetic_instance(32, 32, 0, 1.0, 5.0).unwrap();
        assert_eq!(inst.decomposition.r(), 9);
        assert_eq!(inst.decomposition.n(), 1024);
        let json: serde_json::Value = serde_json::from_str(&inst.metadata_json()).unwrap();
        for key in ["image", "lambda", "sigma", "scheme", "r", "n"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert_eq!(json["r"], 9);
    }
}
