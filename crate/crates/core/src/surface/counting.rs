//! Area-weighted counts of cylinders with bounded circumference.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{psl2z_orbit, OrbitGraph, SquareTiledSurface};
use crate::error::{Error, Result};

/// Default cap on enumerated directions.
pub const DEFAULT_DIRECTION_BUDGET: usize = 5_000_000;

/// Unoriented primitive integer directions `(p, q)` with `p² + q² < L²`, in Stern–Brocot
/// order, with `(1,0)` and `(0,1)` first.
pub fn primitive_directions(l: f64, budget: usize) -> Result<Vec<(i64, i64)>> {
    let l2 = l * l;
    let fits = |p: i64, q: i64| ((p * p + q * q) as f64) < l2;
    let mut out = Vec::new();
    for v in [(1, 0), (0, 1)] {
        if fits(v.0, v.1) {
            out.push(v);
        }
    }
    // mediants between the fractions (lo) and (hi) as vectors (p, q)
    let mut stack = vec![((0i64, 1i64), (1i64, 0i64))];
    while let Some((lo, hi)) = stack.pop() {
        let m = (lo.0 + hi.0, lo.1 + hi.1);
        if !fits(m.0, m.1) {
            continue;
        }
        out.push(m);
        out.push((m.0, -m.1));
        if out.len() > budget {
            return Err(Error::Budget(budget));
        }
        stack.push((m, hi));
        stack.push((lo, m));
    }
    Ok(out)
}

/// Exponents `k₁, k₂, …` of a word `r·h^{k_m} ⋯ r·h^{k₁}` sending `(p, q)` to a horizontal vector.
pub fn direction_word(p: i64, q: i64) -> Vec<i64> {
    let (mut p, mut q) = (p, q);
    let mut ks = Vec::new();
    while q != 0 {
        let k = -p.div_euclid(q);
        p += k * q;
        ks.push(k);
        (p, q) = (-q, p);
    }
    ks
}

fn walk(cycles: &[usize], h: &[usize], r: &[usize], node: usize, ks: &[i64]) -> usize {
    let mut n = node;
    for &k in ks {
        let len = cycles[n];
        let steps = k.rem_euclid(len as i64) as usize;
        for _ in 0..steps {
            n = h[n];
        }
        n = r[n];
    }
    n
}

fn count_on_orbit(graph: &OrbitGraph, node: usize, l: f64, budget: usize) -> Result<BigRational> {
    let h = graph.h_map();
    let r = graph.r_map();
    let mut cycles = vec![0; graph.len()];
    for cyc in graph.h_cycles() {
        for &n in &cyc {
            cycles[n] = cyc.len();
        }
    }
    let cyls: Vec<Vec<(usize, usize)>> = graph
        .horizontal_cylinders()?
        .iter()
        .map(|d| d.shape())
        .collect();
    let l2 = l * l;
    let mut total: u64 = 0;
    for (p, q) in primitive_directions(l, budget)? {
        let n = walk(&cycles, &h, &r, node, &direction_word(p, q));
        let len2 = (p * p + q * q) as u64;
        for &(w, ht) in &cyls[n] {
            let w = w as u64;
            if ((w * w * len2) as f64) < l2 {
                total += w * ht as u64;
            }
        }
    }
    let area = graph.nodes[node].surface.n_squares();
    Ok(BigRational::new(BigInt::from(total), BigInt::from(area)))
}

/// `N_area(S, L)`: total area of cylinders with circumference below `L`, divided by the
/// area of `S`, with squares of unit side.
pub fn count_cylinders(s: &SquareTiledSurface, l: f64) -> Result<BigRational> {
    if l.is_nan() || l <= 0.0 {
        return Err(Error::Parameters("L must be positive".into()));
    }
    let graph = psl2z_orbit(s, 100_000)?;
    count_on_orbit(&graph, graph.base, l, DEFAULT_DIRECTION_BUDGET)
}

/// `N_area` for `S` rescaled to unit area, that is `N_area(S, L·√n)`.
pub fn count_cylinders_unit_area(s: &SquareTiledSurface, l: f64) -> Result<BigRational> {
    count_cylinders(s, l * (s.n_squares() as f64).sqrt())
}
