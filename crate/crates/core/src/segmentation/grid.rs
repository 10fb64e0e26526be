use std::f64::consts::FRAC_1_SQRT_2;

use super::Image;
use crate::blocks::{EdgeCutBlock, MatchingCutBlock};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    East,
    South,
    SouthEast,
    SouthWest,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::East,
        Direction::South,
        Direction::SouthEast,
        Direction::SouthWest,
    ];

    fn offset(self) -> (isize, isize) {
        match self {
            Direction::East => (1, 0),
            Direction::South => (0, 1),
            Direction::SouthEast => (1, 1),
            Direction::SouthWest => (-1, 1),
        }
    }

    fn is_diagonal(self) -> bool {
        matches!(self, Direction::SouthEast | Direction::SouthWest)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridEdge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
    pub direction: Direction,
    /// Parity of the source coordinate along the direction: `y` for south
    /// edges, `x` otherwise.
    pub parity: usize,
}

/// 8-neighbour grid over the pixels of an image; each unordered pixel pair
/// appears once, oriented from its source pixel along a [`Direction`].
#[derive(Debug, Clone)]
pub struct GridGraph {
    pub width: usize,
    pub height: usize,
    pub edges: Vec<GridEdge>,
}

/// `λ·exp(−σ‖v_i − v_j‖²/255²)` on RGB colours, times `1/√2` on diagonals.
pub fn edge_weight(a: [u8; 3], b: [u8; 3], lambda: f64, sigma: f64, diagonal: bool) -> f64 {
    let dist2: f64 = a
        .iter()
        .zip(&b)
        .map(|(&p, &q)| {
            let d = p as f64 - q as f64;
            d * d
        })
        .sum();
    let w = lambda * (-sigma * dist2 / (255.0 * 255.0)).exp();
    if diagonal {
        w * FRAC_1_SQRT_2
    } else {
        w
    }
}

pub fn build_grid(img: &Image, lambda: f64, sigma: f64) -> Result<GridGraph> {
    if !(lambda > 0.0 && lambda.is_finite()) || !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "lambda and sigma must be positive and finite, got {lambda} and {sigma}"
        )));
    }
    let (w, h) = (img.width() as isize, img.height() as isize);
    let mut edges = Vec::new();
    for dir in Direction::ALL {
        let (dx, dy) = dir.offset();
        for y in 0..h {
            for x in 0..w {
                let (tx, ty) = (x + dx, y + dy);
                if tx < 0 || tx >= w || ty >= h {
                    continue;
                }
                let (x, y, tx, ty) = (x as usize, y as usize, tx as usize, ty as usize);
                let parity = if dir == Direction::South { y % 2 } else { x % 2 };
                edges.push(GridEdge {
                    i: img.index(x, y),
                    j: img.index(tx, ty),
                    weight: edge_weight(img.pixel(x, y), img.pixel(tx, ty), lambda, sigma, dir.is_diagonal()),
                    direction: dir,
                    parity,
                });
            }
        }
    }
    Ok(GridGraph {
        width: img.width(),
        height: img.height(),
        edges,
    })
}

/// Splits the grid edges into at most 8 matchings: direction (E, S, SE, SW)
/// times parity, in that order, skipping empty classes.
pub fn partition_matchings(g: &GridGraph) -> Result<Vec<MatchingCutBlock>> {
    let mut out = Vec::new();
    let mut covered = 0;
    for dir in Direction::ALL {
        for parity in 0..2 {
            let class: Vec<EdgeCutBlock> = g
                .edges
                .iter()
                .filter(|e| e.direction == dir && e.parity == parity)
                .map(|e| EdgeCutBlock::new(e.i.min(e.j), e.i.max(e.j), e.weight))
                .collect::<Result<_>>()?;
            if class.is_empty() {
                continue;
            }
            covered += class.len();
            // rejects shared endpoints, which would mean a broken scheme
            out.push(MatchingCutBlock::new(class)?);
        }
    }
    if covered != g.edges.len() {
        return Err(Error::InvalidInput(format!(
            "matching classes cover {covered} of {} grid edges",
            g.edges.len()
        )));
    }
    Ok(out)
}
