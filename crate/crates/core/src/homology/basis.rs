//! Integer first homology of a square-tiled surface via a tree–cotree decomposition.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use num_traits::{ToPrimitive, Zero};

use crate::cyclotomic::{CycloMatrix, CycloNum};
use crate::error::{Error, Result};
use crate::surface::{slot, slot_side, slot_square, Generator, Origami, Side, SquareTiledSurface};

pub type IntMatrix = DMatrix<i64>;

/// Cycle and cocycle bases of `H₁(S; Z)` with the intersection form.
///
/// Edge chains index the glued edges of the surface; chains on the translation double
/// cover use index `2x` for the bottom side of square `x` and `2x + 1` for its left side.
#[derive(Clone, Debug)]
pub struct H1Basis {
    pub surface: SquareTiledSurface,
    pub double: Origami,
    pub edge_index: Vec<usize>,
    pub n_edges: usize,
    /// Fundamental cycles, as edge chains.
    pub cycles: Vec<Vec<i64>>,
    /// Dual cocycles: `cocycles[k]` evaluates to `δ_{kj}` on `cycles[j]`.
    pub cocycles: Vec<Vec<i64>>,
    /// Intersection numbers `omega[(i, j)] = cycles[i] · cycles[j]`.
    pub omega: IntMatrix,
}

/// `(tail, head)` vertices of every edge, oriented by its first slot.
fn edge_ends(s: &SquareTiledSurface, vert: &[usize]) -> Vec<(usize, usize)> {
    s.edges()
        .iter()
        .map(|&sl| {
            let (t, h) = slot_side(sl).ends();
            let sq = slot_square(sl);
            (vert[4 * sq + t as usize], vert[4 * sq + h as usize])
        })
        .collect()
}

impl H1Basis {
    pub fn rank(&self) -> usize {
        self.cycles.len()
    }

    pub fn genus(&self) -> usize {
        self.cycles.len() / 2
    }

    /// Chain of a square side with its local orientation (+x or +y).
    pub fn side(&self, square: usize, side: Side) -> (usize, i64) {
        self.surface.side_chain(&self.edge_index, slot(square, side))
    }

    /// Boundary of the counterclockwise square: `B + R − T − L`.
    pub fn square_boundary(&self, square: usize) -> Vec<i64> {
        let mut z = vec![0; self.n_edges];
        for (side, sg) in [(Side::B, 1), (Side::R, 1), (Side::T, -1), (Side::L, -1)] {
            let (e, s) = self.side(square, side);
            z[e] += sg * s;
        }
        z
    }

    /// Vertex boundary of an edge chain.
    pub fn boundary(&self, z: &[i64]) -> Vec<i64> {
        let (vert, nv) = self.surface.vertices();
        let ends = edge_ends(&self.surface, &vert);
        let mut b = vec![0; nv];
        for (e, &c) in z.iter().enumerate() {
            b[ends[e].1] += c;
            b[ends[e].0] -= c;
        }
        b
    }

    /// Coordinates of a closed chain in the cycle basis.
    pub fn coords(&self, z: &[i64]) -> Vec<i64> {
        self.cocycles
            .iter()
            .map(|g| g.iter().zip(z).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Edge chain of a homology class given by coordinates.
    pub fn chain_of(&self, coords: &[i64]) -> Vec<i64> {
        let mut z = vec![0; self.n_edges];
        for (c, cyc) in coords.iter().zip(&self.cycles) {
            for (zi, x) in z.iter_mut().zip(cyc) {
                *zi += c * x;
            }
        }
        z
    }

    fn d_side(&self, x: usize, side: Side) -> usize {
        match side {
            Side::B => 2 * x,
            Side::L => 2 * x + 1,
            Side::T => 2 * self.double.up[x],
            Side::R => 2 * self.double.right[x] + 1,
        }
    }

    /// Transfer to the double cover: the sum of both lifts of every edge.
    pub fn lift(&self, z: &[i64]) -> Vec<i64> {
        let mut w = vec![0; 2 * self.double.len()];
        for (sl, &c) in self.surface.edges().iter().zip(z) {
            if c == 0 {
                continue;
            }
            let (i, side) = (slot_square(*sl), slot_side(*sl));
            w[self.d_side(2 * i, side)] += c;
            w[self.d_side(2 * i + 1, side.opposite())] -= c;
        }
        w
    }

    /// Projection of a double-cover chain.
    pub fn push(&self, w: &[i64]) -> Vec<i64> {
        let mut z = vec![0; self.n_edges];
        for (k, &c) in w.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (x, is_left) = (k / 2, k % 2 == 1);
            let (i, turned) = (x / 2, x % 2 == 1);
            let side = match (is_left, turned) {
                (false, false) => Side::B,
                (false, true) => Side::T,
                (true, false) => Side::L,
                (true, true) => Side::R,
            };
            let (e, s) = self.side(i, side);
            z[e] += if turned { -c * s } else { c * s };
        }
        z
    }

    /// `(1/2)·coords(π_*(w))` for a double-cover cycle `w`.
    pub fn coords_from_double(&self, w: &[i64]) -> Result<Vec<i64>> {
        let c = self.coords(&self.push(w));
        if c.iter().any(|x| x % 2 != 0) {
            return Err(Error::Invariant("pushed-forward lift is not divisible by 2".into()));
        }
        Ok(c.iter().map(|x| x / 2).collect())
    }

    /// Homology class of the core curve of a horizontal cylinder whose bottom row contains
    /// the double-cover square `lifted_row`.
    pub fn waist(&self, lifted_row: usize) -> Vec<i64> {
        let mut w = vec![0; 2 * self.double.len()];
        let mut x = lifted_row;
        loop {
            w[2 * x] += 1;
            x = self.double.right[x];
            if x == lifted_row {
                break;
            }
        }
        self.coords(&self.push(&w))
    }
}

/// Tree–cotree construction of a homology basis, with the intersection form computed
/// from the cup product on the translation double cover.
pub fn build_h1(s: &SquareTiledSurface) -> Result<H1Basis> {
    let n = s.n_squares();
    let (vert, nv) = s.vertices();
    let edges = s.edges();
    let ne = edges.len();
    let ends = edge_ends(s, &vert);

    // primal spanning tree on vertices
    let mut adj = vec![Vec::new(); nv];
    for (e, &(t, h)) in ends.iter().enumerate() {
        adj[t].push((e, h, 1i64));
        adj[h].push((e, t, -1i64));
    }
    let mut in_tree = vec![false; ne];
    // parent[v] = (edge, sign) with v = head of `sign·edge` starting at the parent
    let mut parent: Vec<Option<(usize, usize, i64)>> = vec![None; nv];
    let mut seen = vec![false; nv];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &(e, w, sg) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                in_tree[e] = true;
                parent[w] = Some((v, e, sg));
                queue.push_back(w);
            }
        }
    }

    // dual spanning tree on squares through non-tree edges
    let eidx = s.edge_index();
    let mut in_cotree = vec![false; ne];
    let mut sq_parent: Vec<Option<usize>> = vec![None; n];
    let mut sq_seen = vec![false; n];
    sq_seen[0] = true;
    let mut order = vec![0];
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for side in Side::ALL {
            let sl = slot(i, side);
            let e = eidx[sl];
            let j = slot_square(s.partner(sl));
            if !in_tree[e] && !sq_seen[j] {
                sq_seen[j] = true;
                in_cotree[e] = true;
                sq_parent[j] = Some(e);
                order.push(j);
                queue.push_back(j);
            }
        }
    }
    let leftover: Vec<usize> = (0..ne).filter(|&e| !in_tree[e] && !in_cotree[e]).collect();
    if leftover.len() != 2 * s.genus() {
        return Err(Error::Invariant(format!(
            "tree–cotree leaves {} edges for genus {}",
            leftover.len(),
            s.genus()
        )));
    }

    let path_to_root = |mut v: usize, z: &mut Vec<i64>, sgn: i64| {
        while let Some((p, e, sg)) = parent[v] {
            // walking from v back to p traverses −sg·e
            z[e] -= sgn * sg;
            v = p;
        }
    };
    let mut cycles = Vec::with_capacity(leftover.len());
    for &e in &leftover {
        let mut z = vec![0i64; ne];
        z[e] += 1;
        let (t, h) = ends[e];
        path_to_root(h, &mut z, 1);
        path_to_root(t, &mut z, -1);
        cycles.push(z);
    }

    let mut basis = H1Basis {
        surface: s.clone(),
        double: s.double_cover(),
        edge_index: eidx,
        n_edges: ne,
        cycles,
        cocycles: Vec::new(),
        omega: IntMatrix::zeros(0, 0),
    };
    for z in &basis.cycles {
        if basis.boundary(z).iter().any(|&x| x != 0) {
            return Err(Error::Invariant("fundamental chain is not closed".into()));
        }
    }

    let boundaries: Vec<Vec<i64>> = (0..n).map(|i| basis.square_boundary(i)).collect();
    for (k, &ek) in leftover.iter().enumerate() {
        let mut g = vec![0i64; ne];
        for &e in &leftover {
            g[e] = i64::from(e == ek);
        }
        for &sq in order.iter().skip(1).rev() {
            let pe = sq_parent[sq].expect("non-root square has a parent edge");
            let bd = &boundaries[sq];
            let rest: i64 = (0..ne).filter(|&e| e != pe).map(|e| bd[e] * g[e]).sum();
            if bd[pe].abs() != 1 {
                return Err(Error::Invariant("cotree edge meets its square twice".into()));
            }
            g[pe] = -rest * bd[pe];
        }
        for bd in &boundaries {
            if bd.iter().zip(&g).map(|(a, b)| a * b).sum::<i64>() != 0 {
                return Err(Error::Invariant(format!("cocycle {k} is not closed")));
            }
        }
        basis.cocycles.push(g);
    }
    basis.omega = intersection_form(&basis)?;
    Ok(basis)
}

/// Cubical cup product of two double-cover cochains, evaluated on the fundamental class.
fn cup_double(d: &Origami, a: &[i64], b: &[i64]) -> i64 {
    (0..d.len())
        .map(|x| a[2 * x] * b[2 * d.right[x] + 1] - a[2 * x + 1] * b[2 * d.up[x]])
        .sum()
}

fn intersection_form(basis: &H1Basis) -> Result<IntMatrix> {
    let m = basis.rank();
    if m == 0 {
        return Ok(IntMatrix::zeros(0, 0));
    }
    let nd = 2 * basis.double.len();
    // pull each cocycle back along the projection
    let pulled: Vec<Vec<i64>> = basis
        .cocycles
        .iter()
        .map(|g| {
            (0..nd)
                .map(|k| {
                    let mut unit = vec![0; nd];
                    unit[k] = 1;
                    basis.push(&unit).iter().zip(g).map(|(a, b)| a * b).sum()
                })
                .collect()
        })
        .collect();
    let k = CycloMatrix::from_fn(m, m, |i, j| {
        CycloNum::from(cup_double(&basis.double, &pulled[i], &pulled[j]))
    });
    let kinv = k.inverse()?;
    // K carries the factor 2 of the double cover, so Ω = −(K/2)⁻¹ = −2K⁻¹
    let mut omega = IntMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let v = &kinv[(i, j)];
            let x = -(&v.a) * num_rational::BigRational::from_integer(2.into());
            if !v.b.is_zero() || !x.is_integer() {
                return Err(Error::Invariant("intersection form is not integral".into()));
            }
            omega[(i, j)] = x.to_integer().to_i64().ok_or(Error::Overflow)?;
        }
    }
    Ok(omega)
}

/// Image of a double-cover edge under the chain map of a generator, followed by a relabeling.
pub(crate) fn generator_edge_image(
    d: &Origami,
    g: Generator,
    relabel: &[usize],
    k: usize,
) -> Vec<(usize, i64)> {
    let x = k / 2;
    let left = k % 2 == 1;
    match (g, left) {
        (Generator::H, false) => vec![(2 * relabel[x], 1)],
        (Generator::H, true) => vec![(2 * relabel[x], 1), (2 * relabel[d.right[x]] + 1, 1)],
        (Generator::HInv, false) => vec![(2 * relabel[x], 1)],
        (Generator::HInv, true) => {
            let l = crate::surface::origami_inverse(&d.right)[x];
            vec![(2 * relabel[l], -1), (2 * relabel[l] + 1, 1)]
        }
        (Generator::R, false) => {
            let below = crate::surface::origami_inverse(&d.up)[x];
            vec![(2 * relabel[below] + 1, 1)]
        }
        (Generator::R, true) => vec![(2 * relabel[x], -1)],
    }
}

/// Apply an edge-wise chain map to a double-cover chain.
pub(crate) fn map_double_chain(
    w: &[i64],
    image: impl Fn(usize) -> Vec<(usize, i64)>,
    len: usize,
) -> Vec<i64> {
    let mut out = vec![0; len];
    for (k, &c) in w.iter().enumerate() {
        if c != 0 {
            for (t, s) in image(k) {
                out[t] += c * s;
            }
        }
    }
    out
}

/// Matrix of the map `H₁(source) → H₁(target)` induced by a chain map on double covers.
pub(crate) fn induced_matrix(
    source: &H1Basis,
    target: &H1Basis,
    image: impl Fn(usize) -> Vec<(usize, i64)>,
) -> Result<IntMatrix> {
    let (m, mt) = (source.rank(), target.rank());
    let mut out = IntMatrix::zeros(mt, m);
    let len = 2 * target.double.len();
    for j in 0..m {
        let w = map_double_chain(&source.lift(&source.cycles[j]), &image, len);
        let c = target.coords_from_double(&w)?;
        for i in 0..mt {
            out[(i, j)] = c[i];
        }
    }
    Ok(out)
}

/// An integer matrix between the homology groups of two surfaces.
#[derive(Clone, Debug)]
pub struct HomologyMap {
    pub matrix: IntMatrix,
    pub source: SquareTiledSurface,
    pub target: SquareTiledSurface,
}

/// Map induced by `g ∈ {h, h⁻¹, r}` from `S` to `g·S`, with the basis of `g·S` used.
pub fn induced_map(s: &SquareTiledSurface, g: Generator) -> Result<(HomologyMap, H1Basis, H1Basis)> {
    let src = build_h1(s)?;
    let moved = src.double.apply(g);
    let labels = moved.quotient_labels();
    let relabel: Vec<usize> = labels.iter().map(|&(k, e)| 2 * k + e).collect();
    let target_surface = moved.quotient();
    let tgt = build_h1(&target_surface)?;
    let matrix = induced_matrix(&src, &tgt, |k| generator_edge_image(&src.double, g, &relabel, k))?;
    Ok((
        HomologyMap {
            matrix,
            source: s.clone(),
            target: target_surface,
        },
        src,
        tgt,
    ))
}

/// Matrix of a translation automorphism of the double cover (a square permutation
/// commuting with the neighbour maps) acting on `H₁`.
pub fn automorphism_matrix(basis: &H1Basis, perm: &[usize]) -> Result<IntMatrix> {
    induced_matrix(basis, basis, |k| vec![(2 * perm[k / 2] + k % 2, 1)])
}

/// `Mᵀ·Ω_t·M == Ω_s`.
pub fn is_symplectic(m: &IntMatrix, omega_s: &IntMatrix, omega_t: &IntMatrix) -> bool {
    m.transpose() * omega_t * m == *omega_s
}

pub fn to_cyclo(m: &IntMatrix) -> CycloMatrix {
    CycloMatrix::from_fn(m.nrows(), m.ncols(), |i, j| CycloNum::from(m[(i, j)]))
}
