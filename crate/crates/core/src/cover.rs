//! Cyclic covers `w^d = ∏(z − z_i)` of genus-zero square-tiled surfaces, branched at
//! vertices, together with the closed-form data attached to them.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::{
    slot, slot_side, slot_square, Corner, Gluing, GluingKind, Side, SquareTiledSurface, Stratum, SurfaceData,
    StratumKind,
};

/// Base surface, branch vertices (labels from [`SquareTiledSurface::vertices`]) and degree.
#[derive(Clone, Debug)]
pub struct BranchData {
    pub base: SquareTiledSurface,
    pub branch_vertices: Vec<usize>,
    pub d: usize,
}

impl BranchData {
    /// Branch at every vertex whose cone angle differs from 2π.
    pub fn at_singularities(base: SquareTiledSurface, d: usize) -> Self {
        let branch_vertices = base
            .vertex_corner_counts()
            .iter()
            .enumerate()
            .filter(|(_, &k)| k != 4)
            .map(|(v, _)| v)
            .collect();
        BranchData {
            base,
            branch_vertices,
            d,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CoveringSurface {
    pub total: SquareTiledSurface,
    /// Deck generator `T` on squares: `(i, k) ↦ (i, k+1)` with index `k·n + i`.
    pub deck: Vec<usize>,
    /// Sheet shift in `Z/d` for every base edge (indexed as [`SquareTiledSurface::edges`]).
    pub cocycle: Vec<usize>,
    pub base: SquareTiledSurface,
    pub branch_vertices: Vec<usize>,
    pub d: usize,
}

/// Walk counterclockwise around every vertex; returns per vertex the list of
/// `(edge, ±1)` crossings, positive when leaving through the edge's first slot.
pub(crate) fn vertex_walks(s: &SquareTiledSurface) -> Vec<Vec<(usize, i64)>> {
    let (vert, nv) = s.vertices();
    let eidx = s.edge_index();
    let mut done = vec![false; vert.len()];
    let mut walks = vec![Vec::new(); nv];
    for start in 0..vert.len() {
        if done[start] {
            continue;
        }
        let v = vert[start];
        let mut c = start;
        loop {
            done[c] = true;
            let (sq, corner) = (c / 4, Corner::ALL[c % 4]);
            let side = corner.ccw_exit();
            let sl = slot(sq, side);
            let p = s.partner(sl);
            walks[v].push((eidx[sl], if sl < p { 1 } else { -1 }));
            let (t, _) = side.ends();
            let at_tail = corner == t;
            let (pt, ph) = slot_side(p).ends();
            let tail_side = at_tail != s.is_flip(sl);
            let nc = if tail_side { pt } else { ph };
            c = 4 * slot_square(p) + nc as usize;
            if c == start {
                break;
            }
        }
    }
    walks
}

/// Residue of an edge cochain around every vertex, in `Z/d`.
pub fn vertex_holonomy(s: &SquareTiledSurface, c: &[usize], d: usize) -> Vec<usize> {
    vertex_walks(s)
        .iter()
        .map(|w| {
            let t: i64 = w.iter().map(|&(e, sg)| sg * c[e] as i64).sum();
            t.rem_euclid(d as i64) as usize
        })
        .collect()
}

pub fn cyclic_cover(b: &BranchData) -> Result<CoveringSurface> {
    let s = &b.base;
    let d = b.d;
    if d < 2 {
        return Err(Error::Parameters("degree must be at least 2".into()));
    }
    if s.genus() != 0 {
        return Err(Error::Parameters("base surface must have genus 0".into()));
    }
    let (_, nv) = s.vertices();
    let mut branch = b.branch_vertices.clone();
    branch.sort_unstable();
    branch.dedup();
    if branch.len() != b.branch_vertices.len() || branch.iter().any(|&v| v >= nv) {
        return Err(Error::Parameters("branch vertices must be distinct vertex labels".into()));
    }
    if branch.is_empty() || branch.len() % d != 0 {
        return Err(Error::Parameters(format!(
            "degree {d} does not divide the number of branch points {}",
            branch.len()
        )));
    }
    let n = s.n_squares();
    let edges = s.edges();
    let ne = edges.len();

    // dual spanning tree over squares: shifts fixed to zero
    let eidx = s.edge_index();
    let mut in_dual = vec![false; ne];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for side in Side::ALL {
            let sl = slot(i, side);
            let j = slot_square(s.partner(sl));
            if !seen[j] {
                seen[j] = true;
                in_dual[eidx[sl]] = true;
                queue.push_back(j);
            }
        }
    }

    // the remaining edges form a spanning tree of the vertex graph; peel its leaves
    let walks = vertex_walks(s);
    let mut coef = vec![vec![0i64; ne]; nv];
    for (v, w) in walks.iter().enumerate() {
        for &(e, sg) in w {
            coef[v][e] += sg;
        }
    }
    let residue: Vec<i64> = (0..nv).map(|v| i64::from(branch.binary_search(&v).is_ok())).collect();
    let mut value: Vec<Option<i64>> = (0..ne).map(|e| if in_dual[e] { Some(0) } else { None }).collect();
    let mut open_vertices: Vec<bool> = vec![true; nv];
    let dd = d as i64;
    loop {
        let mut progressed = false;
        for v in 0..nv {
            if !open_vertices[v] {
                continue;
            }
            let unknown: Vec<usize> =
                (0..ne).filter(|&e| value[e].is_none() && coef[v][e] != 0).collect();
            if unknown.len() == 1 {
                let e = unknown[0];
                let known: i64 = (0..ne)
                    .filter_map(|f| value[f].map(|x| x * coef[v][f]))
                    .sum();
                let cf = coef[v][e];
                if cf.abs() != 1 {
                    return Err(Error::Unsolvable(format!("edge {e} meets vertex {v} twice")));
                }
                value[e] = Some(((residue[v] - known) * cf).rem_euclid(dd));
                open_vertices[v] = false;
                progressed = true;
            } else if unknown.is_empty() {
                open_vertices[v] = false;
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
    }
    if value.iter().any(|x| x.is_none()) {
        return Err(Error::Unsolvable("holonomy system is not a tree".into()));
    }
    let cocycle: Vec<usize> = value.iter().map(|x| x.unwrap_or(0) as usize).collect();
    let hol = vertex_holonomy(s, &cocycle, d);
    for v in 0..nv {
        if hol[v] as i64 != residue[v].rem_euclid(dd) {
            return Err(Error::Unsolvable(format!(
                "vertex {v} has holonomy {} instead of {}",
                hol[v], residue[v]
            )));
        }
    }

    let mut partner = vec![0; 4 * n * d];
    let mut flip = vec![false; 4 * n * d];
    for k in 0..d {
        for sl in 0..4 * n {
            let p = s.partner(sl);
            let c = cocycle[eidx[sl]] as i64;
            let shift = if sl < p { c } else { -c };
            let k2 = (k as i64 + shift).rem_euclid(dd) as usize;
            let from = slot(k * n + slot_square(sl), slot_side(sl));
            partner[from] = slot(k2 * n + slot_square(p), slot_side(p));
            flip[from] = s.is_flip(sl);
        }
    }
    let total = SquareTiledSurface::from_parts(n * d, partner, flip)?;
    let deck = (0..n * d).map(|x| (x + n) % (n * d)).collect();
    let cov = CoveringSurface {
        total,
        deck,
        cocycle,
        base: s.clone(),
        branch_vertices: branch,
        d,
    };
    cov.check()?;
    Ok(cov)
}

impl CoveringSurface {
    /// Deck group and Riemann–Hurwitz checks.
    pub fn check(&self) -> Result<()> {
        let t = &self.total;
        let m = t.n_squares();
        let mut x: Vec<usize> = (0..m).collect();
        for step in 1..=self.d {
            x = x.iter().map(|&i| self.deck[i]).collect();
            let fixed = x.iter().enumerate().any(|(i, &y)| i == y);
            if step < self.d && fixed {
                return Err(Error::Invariant(format!("deck power {step} has a fixed square")));
            }
        }
        if x.iter().enumerate().any(|(i, &y)| i != y) {
            return Err(Error::Invariant("deck transformation has the wrong order".into()));
        }
        for sl in 0..4 * m {
            let p = t.partner(sl);
            let tsl = slot(self.deck[slot_square(sl)], slot_side(sl));
            let tp = slot(self.deck[slot_square(p)], slot_side(p));
            if t.partner(tsl) != tp {
                return Err(Error::Invariant("deck transformation does not preserve gluings".into()));
            }
        }
        if !self.riemann_hurwitz() {
            return Err(Error::Invariant("Riemann–Hurwitz identity fails".into()));
        }
        let q = quotient_by_deck(t, &self.deck)?;
        if !q.is_isomorphic(&self.base) {
            return Err(Error::Invariant("quotient by the deck group differs from the base".into()));
        }
        Ok(())
    }

    pub fn riemann_hurwitz(&self) -> bool {
        let d = self.d as i64;
        self.total.euler_characteristic()
            == d * self.base.euler_characteristic() - (d - 1) * self.branch_vertices.len() as i64
    }

    pub fn to_json(&self) -> String {
        let layout = self.total.to_data();
        let base = self.base.to_data();
        let eidx = self.base.edge_index();
        let cocycle = base
            .gluings
            .iter()
            .map(|g| CocycleEntry {
                a: g.a,
                b: g.b,
                kind: g.kind,
                shift: self.cocycle[eidx[slot(g.a.0, g.a.1)]],
            })
            .collect();
        serde_json::to_string_pretty(&CoverFile {
            squares: layout.squares,
            gluings: layout.gluings,
            deck: self.deck.clone(),
            degree: self.d,
            cocycle,
        })
        .expect("cover serializes")
    }

    /// Inverse of [`CoveringSurface::to_json`]. The base is rebuilt from the cocycle
    /// entries and the branch vertices are those with nonzero holonomy.
    pub fn from_json(text: &str) -> Result<Self> {
        let f: CoverFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if f.degree < 2 || f.squares % f.degree != 0 {
            return Err(Error::InvalidSurface("square count is not a multiple of the degree".into()));
        }
        let total = SquareTiledSurface::from_data(&SurfaceData {
            squares: f.squares,
            gluings: f.gluings,
        })?;
        let base = SquareTiledSurface::from_data(&SurfaceData {
            squares: f.squares / f.degree,
            gluings: f
                .cocycle
                .iter()
                .map(|c| Gluing {
                    a: c.a,
                    b: c.b,
                    kind: c.kind,
                })
                .collect(),
        })?;
        let eidx = base.edge_index();
        let mut cocycle = vec![0; base.edges().len()];
        for c in &f.cocycle {
            if c.shift >= f.degree {
                return Err(Error::InvalidSurface(format!("shift {} exceeds the degree", c.shift)));
            }
            cocycle[eidx[slot(c.a.0, c.a.1)]] = c.shift;
        }
        let branch_vertices = vertex_holonomy(&base, &cocycle, f.degree)
            .iter()
            .enumerate()
            .filter(|(_, &h)| h != 0)
            .map(|(v, _)| v)
            .collect();
        if f.deck.len() != f.squares {
            return Err(Error::InvalidSurface("deck permutation has the wrong length".into()));
        }
        let cov = CoveringSurface {
            total,
            deck: f.deck,
            cocycle,
            base,
            branch_vertices,
            d: f.degree,
        };
        cov.check()?;
        Ok(cov)
    }
}

#[derive(Serialize, Deserialize)]
struct CocycleEntry {
    a: (usize, Side),
    b: (usize, Side),
    kind: GluingKind,
    shift: usize,
}

#[derive(Serialize, Deserialize)]
struct CoverFile {
    squares: usize,
    gluings: Vec<Gluing>,
    deck: Vec<usize>,
    degree: usize,
    cocycle: Vec<CocycleEntry>,
}

/// Surface on the orbits of a square permutation commuting with the gluings.
pub fn quotient_by_deck(t: &SquareTiledSurface, deck: &[usize]) -> Result<SquareTiledSurface> {
    let m = t.n_squares();
    let mut orbit = vec![usize::MAX; m];
    let mut reps = Vec::new();
    for i in 0..m {
        if orbit[i] != usize::MAX {
            continue;
        }
        let k = reps.len();
        reps.push(i);
        let mut j = i;
        while orbit[j] == usize::MAX {
            orbit[j] = k;
            j = deck[j];
        }
    }
    let n = reps.len();
    let mut partner = vec![0; 4 * n];
    let mut flip = vec![false; 4 * n];
    for (k, &i) in reps.iter().enumerate() {
        for side in Side::ALL {
            let sl = slot(i, side);
            let p = t.partner(sl);
            partner[slot(k, side)] = slot(orbit[slot_square(p)], slot_side(p));
            flip[slot(k, side)] = t.is_flip(sl);
        }
    }
    SquareTiledSurface::from_parts(n, partner, flip)
}

/// Dimension and signature of the deck eigenspace `E(ζ^k)` for `n` branch points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EigenspaceProfile {
    pub dim: usize,
    pub signature: (usize, usize),
}

pub fn eigenspace_profile(n: usize, d: usize, k: usize) -> Result<EigenspaceProfile> {
    if d < 2 || k == 0 || k >= d || n < 4 {
        return Err(Error::Parameters(format!("need 1 ≤ k < d and n ≥ 4, got n={n} d={d} k={k}")));
    }
    let dim = if (k * n) % d == 0 { n - 2 } else { n - 1 };
    let p = (n * k).div_ceil(d) - 1;
    let q = (n * (d - k)).div_ceil(d) - 1;
    if p + q != dim {
        return Err(Error::Invariant(format!("signature ({p},{q}) does not add up to {dim}")));
    }
    Ok(EigenspaceProfile {
        dim,
        signature: (p, q),
    })
}

pub fn cover_stratum(n: usize, d: usize) -> Result<Stratum> {
    if d < 2 || n < 5 || n % d != 0 {
        return Err(Error::Parameters(format!("need d ≥ 2, n ≥ 5 and d | n, got n={n} d={d}")));
    }
    let (n, d) = (n as i64, d as i64);
    if d % 2 == 1 {
        let mut orders = vec![d * (n - 3) - 2];
        orders.extend(std::iter::repeat_n(d - 2, (n - 1) as usize));
        Stratum::quadratic(orders)
    } else {
        let mut orders = vec![d * (n - 3) / 2 - 1];
        orders.extend(std::iter::repeat_n(d / 2 - 1, (n - 1) as usize));
        let orders: Vec<i64> = orders.into_iter().filter(|&m| m != 0).collect();
        let sum: i64 = orders.iter().sum();
        Stratum::new(StratumKind::Abelian, orders, ((sum + 2) / 2) as usize)
    }
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Ratio between the Siegel–Veech constants of the cover and of the base.
pub fn sv_factor(d: usize) -> Result<BigRational> {
    if d <= 2 {
        return Err(Error::Parameters("degree must exceed 2".into()));
    }
    Ok(ratio(if d % 2 == 1 { 1 } else { 4 }, d as i64))
}

/// `(π²/3)·c_area` of the cover branched at all singularities of a surface in `Q(n−5, −1^{n−1})`.
pub fn carea_cover(n: usize, d: usize) -> Result<BigRational> {
    if d <= 2 || n % d != 0 || n < 5 {
        return Err(Error::Parameters(format!("need d > 2, n ≥ 5 and d | n, got n={n} d={d}")));
    }
    let k = if d % 2 == 1 { 1 } else { 4 };
    let (n, d) = (n as i64, d as i64);
    Ok(ratio(k * (n - 1) * (n - 2), 12 * d * (n - 3)))
}
