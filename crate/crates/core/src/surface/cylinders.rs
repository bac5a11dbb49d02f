//! Horizontal cylinder decompositions.

use serde::Serialize;

use super::{Corner, SquareTiledSurface};
use crate::error::{Error, Result};

/// A maximal horizontal cylinder.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Cylinder {
    pub width: usize,
    pub height: usize,
    /// Squares of the surface inside the cylinder, sorted.
    pub squares: Vec<usize>,
    /// One square per row, bottom to top, as labels of the translation double cover.
    #[serde(skip)]
    pub lifted_rows: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CylinderDecomposition {
    pub cylinders: Vec<Cylinder>,
}

impl CylinderDecomposition {
    pub fn horizontal(s: &SquareTiledSurface) -> Result<Self> {
        let d = s.double_cover();
        let n2 = d.len();
        let (vert, _) = s.vertices();
        let counts = s.vertex_corner_counts();
        // lifted corner (x, c) sits over the surface corner of square x/2, turned when x is odd
        let singular_upper_left = |x: usize| {
            let c = if x % 2 == 0 { Corner::UL } else { Corner::UL.rot180() };
            counts[vert[4 * (x / 2) + c as usize]] != 4
        };

        let mut row_of = vec![usize::MAX; n2];
        let mut rows: Vec<Vec<usize>> = Vec::new();
        for x in 0..n2 {
            if row_of[x] != usize::MAX {
                continue;
            }
            let mut row = vec![x];
            row_of[x] = rows.len();
            let mut y = d.right[x];
            while y != x {
                row_of[y] = rows.len();
                row.push(y);
                y = d.right[y];
            }
            rows.push(row);
        }
        let nr = rows.len();
        let mut next = vec![None; nr];
        for (k, row) in rows.iter().enumerate() {
            if !row.iter().any(|&x| singular_upper_left(x)) {
                next[k] = Some(row_of[d.up[row[0]]]);
            }
        }
        let mut has_prev = vec![false; nr];
        for n in next.iter().flatten() {
            has_prev[*n] = true;
        }

        let mut used = vec![false; nr];
        let mut lifted: Vec<Vec<usize>> = Vec::new();
        let walk = |start: usize, used: &mut Vec<bool>| {
            let mut chain = vec![start];
            used[start] = true;
            let mut k = start;
            while let Some(m) = next[k] {
                if used[m] {
                    break;
                }
                used[m] = true;
                chain.push(m);
                k = m;
            }
            chain
        };
        for k in 0..nr {
            if !has_prev[k] && !used[k] {
                lifted.push(walk(k, &mut used));
            }
        }
        for k in 0..nr {
            if !used[k] {
                lifted.push(walk(k, &mut used));
            }
        }

        let mut cyl_of_row = vec![0; nr];
        for (c, chain) in lifted.iter().enumerate() {
            for &k in chain {
                cyl_of_row[k] = c;
            }
        }
        let mut paired = vec![false; lifted.len()];
        let mut cylinders = Vec::new();
        for (c, chain) in lifted.iter().enumerate() {
            if paired[c] {
                continue;
            }
            let partner = cyl_of_row[row_of[d.iota[rows[chain[0]][0]]]];
            if partner == c {
                return Err(Error::Invariant("cylinder is its own half-turn image".into()));
            }
            paired[c] = true;
            paired[partner] = true;
            let width = rows[chain[0]].len();
            if chain.iter().any(|&k| rows[k].len() != width) {
                return Err(Error::Invariant("rows of one cylinder differ in width".into()));
            }
            let mut squares: Vec<usize> =
                chain.iter().flat_map(|&k| rows[k].iter().map(|&x| x / 2)).collect();
            squares.sort_unstable();
            cylinders.push(Cylinder {
                width,
                height: chain.len(),
                squares,
                lifted_rows: chain.iter().map(|&k| rows[k][0]).collect(),
            });
        }
        cylinders.sort_by(|a, b| (b.width, b.height, &a.squares).cmp(&(a.width, a.height, &b.squares)));
        Ok(CylinderDecomposition { cylinders })
    }

    /// `(width, height)` pairs.
    pub fn shape(&self) -> Vec<(usize, usize)> {
        self.cylinders.iter().map(|c| (c.width, c.height)).collect()
    }

    pub fn area(&self) -> usize {
        self.cylinders.iter().map(|c| c.width * c.height).sum()
    }
}
