//! Square-tiled surfaces with translation or half-turn gluings.

mod counting;
mod cylinders;
mod orbit;
mod origami;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use counting::{count_cylinders, count_cylinders_unit_area, direction_word, primitive_directions};
pub use cylinders::{Cylinder, CylinderDecomposition};
pub use orbit::{psl2z_orbit, GraphReport, OrbitEdge, OrbitGraph, OrbitNode};
pub use origami::{CanonicalForm, Origami};
pub(crate) use origami::inverse as origami_inverse;

/// Side of a unit square.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    L = 0,
    R = 1,
    T = 2,
    B = 3,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::L, Side::R, Side::T, Side::B];

    pub fn from_index(i: usize) -> Side {
        Side::ALL[i & 3]
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
            Side::T => Side::B,
            Side::B => Side::T,
        }
    }

    pub fn is_vertical(self) -> bool {
        matches!(self, Side::L | Side::R)
    }

    /// Endpoints `(tail, head)` as corners, with sides oriented along +x or +y.
    pub fn ends(self) -> (Corner, Corner) {
        match self {
            Side::B => (Corner::LL, Corner::LR),
            Side::T => (Corner::UL, Corner::UR),
            Side::L => (Corner::LL, Corner::UL),
            Side::R => (Corner::LR, Corner::UR),
        }
    }
}

/// Corner of a unit square.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Corner {
    LL = 0,
    LR = 1,
    UR = 2,
    UL = 3,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::LL, Corner::LR, Corner::UR, Corner::UL];

    pub fn rot180(self) -> Corner {
        Corner::ALL[(self as usize + 2) % 4]
    }

    /// The side crossed when turning counterclockwise around this corner's vertex.
    pub fn ccw_exit(self) -> Side {
        match self {
            Corner::LL => Side::L,
            Corner::LR => Side::B,
            Corner::UR => Side::R,
            Corner::UL => Side::T,
        }
    }
}

pub fn slot(square: usize, side: Side) -> usize {
    4 * square + side as usize
}

pub fn slot_square(s: usize) -> usize {
    s / 4
}

pub fn slot_side(s: usize) -> Side {
    Side::from_index(s % 4)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GluingKind {
    Translation,
    Flip,
}

/// One identification of two square sides.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Gluing {
    pub a: (usize, Side),
    pub b: (usize, Side),
    pub kind: GluingKind,
}

/// On-disk surface description.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SurfaceData {
    pub squares: usize,
    pub gluings: Vec<Gluing>,
}

/// A connected surface glued from unit squares.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SquareTiledSurface {
    n: usize,
    partner: Vec<usize>,
    flip: Vec<bool>,
}

impl SquareTiledSurface {
    pub fn from_data(layout: &SurfaceData) -> Result<Self> {
        let n = layout.squares;
        if n == 0 {
            return Err(Error::InvalidSurface("no squares".into()));
        }
        let mut partner = vec![usize::MAX; 4 * n];
        let mut flip = vec![false; 4 * n];
        for g in &layout.gluings {
            let (sa, sb) = (g.a.0, g.b.0);
            if sa >= n || sb >= n {
                return Err(Error::InvalidSurface(format!("square index out of range in {g:?}")));
            }
            let a = slot(sa, g.a.1);
            let b = slot(sb, g.b.1);
            if a == b {
                return Err(Error::InvalidSurface(format!("slot glued to itself in {g:?}")));
            }
            for s in [a, b] {
                if partner[s] != usize::MAX {
                    return Err(Error::InvalidSurface(format!("slot {s} glued twice")));
                }
            }
            partner[a] = b;
            partner[b] = a;
            let f = g.kind == GluingKind::Flip;
            flip[a] = f;
            flip[b] = f;
        }
        Self::from_parts(n, partner, flip)
    }

    /// Validate raw slot data.
    pub fn from_parts(n: usize, partner: Vec<usize>, flip: Vec<bool>) -> Result<Self> {
        if partner.len() != 4 * n || flip.len() != 4 * n {
            return Err(Error::InvalidSurface("slot array length mismatch".into()));
        }
        for s in 0..4 * n {
            let p = partner[s];
            if p == usize::MAX {
                return Err(Error::InvalidSurface(format!(
                    "side {:?} of square {} is unglued",
                    slot_side(s),
                    slot_square(s)
                )));
            }
            if p >= 4 * n || partner[p] != s || p == s || flip[p] != flip[s] {
                return Err(Error::InvalidSurface(format!("slot {s} is not matched consistently")));
            }
            let (x, y) = (slot_side(s), slot_side(p));
            if x.is_vertical() != y.is_vertical() {
                return Err(Error::InvalidSurface(format!(
                    "side {x:?} of square {} glued to side {y:?} of square {}",
                    slot_square(s),
                    slot_square(p)
                )));
            }
            let ok = if flip[s] { x == y } else { x == y.opposite() };
            if !ok {
                let kind = if flip[s] { "flip" } else { "translation" };
                return Err(Error::InvalidSurface(format!(
                    "{kind} gluing cannot join side {x:?} to side {y:?}"
                )));
            }
        }
        let s = SquareTiledSurface { n, partner, flip };
        if !s.is_connected() {
            return Err(Error::InvalidSurface("surface is disconnected".into()));
        }
        Ok(s)
    }

    /// The translation surface defined by right and up neighbour permutations.
    pub fn from_permutations(right: &[usize], up: &[usize]) -> Result<Self> {
        let n = right.len();
        if up.len() != n {
            return Err(Error::InvalidSurface("permutation lengths differ".into()));
        }
        let mut partner = vec![usize::MAX; 4 * n];
        for i in 0..n {
            let (r, u) = (right[i], up[i]);
            if r >= n || u >= n {
                return Err(Error::InvalidSurface("permutation entry out of range".into()));
            }
            partner[slot(i, Side::R)] = slot(r, Side::L);
            partner[slot(r, Side::L)] = slot(i, Side::R);
            partner[slot(i, Side::T)] = slot(u, Side::B);
            partner[slot(u, Side::B)] = slot(i, Side::T);
        }
        Self::from_parts(n, partner, vec![false; 4 * n])
    }

    pub fn torus() -> Self {
        Self::from_permutations(&[0], &[0]).expect("torus is valid")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let layout: SurfaceData =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_data(&layout)
    }

    pub fn to_data(&self) -> SurfaceData {
        let gluings = (0..4 * self.n)
            .filter(|&s| s < self.partner[s])
            .map(|s| {
                let p = self.partner[s];
                Gluing {
                    a: (slot_square(s), slot_side(s)),
                    b: (slot_square(p), slot_side(p)),
                    kind: if self.flip[s] { GluingKind::Flip } else { GluingKind::Translation },
                }
            })
            .collect();
        SurfaceData {
            squares: self.n,
            gluings,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_data()).expect("surface serializes")
    }

    pub fn n_squares(&self) -> usize {
        self.n
    }

    pub fn partner(&self, s: usize) -> usize {
        self.partner[s]
    }

    pub fn is_flip(&self, s: usize) -> bool {
        self.flip[s]
    }

    pub fn neighbor(&self, square: usize, side: Side) -> (usize, Side, bool) {
        let s = slot(square, side);
        let p = self.partner[s];
        (slot_square(p), slot_side(p), self.flip[s])
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for side in Side::ALL {
                let j = slot_square(self.partner[slot(i, side)]);
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.iter().all(|&x| x)
    }

    /// Glued edges, one per matched slot pair, indexed by their smaller slot.
    pub fn edges(&self) -> Vec<usize> {
        (0..4 * self.n).filter(|&s| s < self.partner[s]).collect()
    }

    /// Map from slot to edge index in [`Self::edges`].
    pub fn edge_index(&self) -> Vec<usize> {
        let mut idx = vec![0; 4 * self.n];
        for (e, &s) in self.edges().iter().enumerate() {
            idx[s] = e;
            idx[self.partner[s]] = e;
        }
        idx
    }

    /// The edge chain `(edge, sign)` carried by a square side with its local orientation.
    pub fn side_chain(&self, edge_index: &[usize], s: usize) -> (usize, i64) {
        let sign = if s < self.partner[s] || !self.flip[s] { 1 } else { -1 };
        (edge_index[s], sign)
    }

    /// Vertex labels of the `4n` corners (index `4·square + corner`) and the vertex count.
    pub fn vertices(&self) -> (Vec<usize>, usize) {
        let mut parent: Vec<usize> = (0..4 * self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut union = |a: usize, b: usize| {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        };
        for s in 0..4 * self.n {
            let p = self.partner[s];
            if s > p {
                continue;
            }
            let (i, j) = (slot_square(s), slot_square(p));
            let (ta, ha) = slot_side(s).ends();
            let (tb, hb) = slot_side(p).ends();
            let (tb, hb) = if self.flip[s] { (hb, tb) } else { (tb, hb) };
            union(4 * i + ta as usize, 4 * j + tb as usize);
            union(4 * i + ha as usize, 4 * j + hb as usize);
        }
        let mut label = BTreeMap::new();
        let mut out = vec![0; 4 * self.n];
        for (c, o) in out.iter_mut().enumerate() {
            let r = find(&mut parent, c);
            let next = label.len();
            *o = *label.entry(r).or_insert(next);
        }
        (out, label.len())
    }

    /// Number of square corners at each vertex; a vertex with `k` corners has angle `k·π/2`.
    pub fn vertex_corner_counts(&self) -> Vec<usize> {
        let (v, nv) = self.vertices();
        let mut counts = vec![0; nv];
        for &x in &v {
            counts[x] += 1;
        }
        counts
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices().1 as i64 - self.n as i64
    }

    pub fn genus(&self) -> usize {
        ((2 - self.euler_characteristic()) / 2) as usize
    }

    /// True when the holonomy is trivial (the orientation double cover is disconnected).
    pub fn is_abelian(&self) -> bool {
        !self.double_cover().is_connected()
    }

    pub fn stratum(&self) -> Result<Stratum> {
        let counts = self.vertex_corner_counts();
        let abelian = self.is_abelian();
        let mut orders = Vec::new();
        for &k in &counts {
            if k % 2 != 0 {
                return Err(Error::Invariant(format!(
                    "vertex angle {k}·π/2 is not a multiple of π"
                )));
            }
            let d = if abelian {
                if k % 4 != 0 {
                    return Err(Error::Invariant(format!(
                        "translation surface vertex angle {k}·π/2 is not a multiple of 2π"
                    )));
                }
                k as i64 / 4 - 1
            } else {
                k as i64 / 2 - 2
            };
            if d != 0 {
                orders.push(d);
            }
        }
        Stratum::new(
            if abelian { StratumKind::Abelian } else { StratumKind::Quadratic },
            orders,
            self.genus(),
        )
    }

    /// The canonical translation double cover with its half-turn involution.
    pub fn double_cover(&self) -> Origami {
        Origami::double_of(self)
    }

    pub fn apply(&self, g: Generator) -> SquareTiledSurface {
        self.double_cover().apply(g).quotient()
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        self.double_cover().canonical_form()
    }

    /// Equality up to relabeling of squares.
    pub fn is_isomorphic(&self, other: &SquareTiledSurface) -> bool {
        self.n == other.n && self.canonical_form().key == other.canonical_form().key
    }

    /// The same surface with squares renamed by `perm` (old index to new index).
    pub fn relabel(&self, perm: &[usize]) -> Result<SquareTiledSurface> {
        let n = self.n;
        let mut partner = vec![0; 4 * n];
        let mut flip = vec![false; 4 * n];
        for s in 0..4 * n {
            let p = self.partner[s];
            let ns = slot(perm[slot_square(s)], slot_side(s));
            partner[ns] = slot(perm[slot_square(p)], slot_side(p));
            flip[ns] = self.flip[s];
        }
        Self::from_parts(n, partner, flip)
    }

    pub fn horizontal_cylinders(&self) -> Result<CylinderDecomposition> {
        CylinderDecomposition::horizontal(self)
    }
}

/// Generators of PSL(2,Z) acting on surfaces: `h = [[1,1],[0,1]]`, its inverse, and the
/// counterclockwise quarter turn `r = [[0,-1],[1,0]]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Generator {
    H,
    HInv,
    R,
}

impl std::str::FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h" => Ok(Generator::H),
            "H" | "h^-1" | "hinv" => Ok(Generator::HInv),
            "r" => Ok(Generator::R),
            _ => Err(Error::Parse(format!("unknown generator '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StratumKind {
    Abelian,
    Quadratic,
}

/// Orders of zeros and poles of the underlying differential.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Stratum {
    pub kind: StratumKind,
    /// Sorted descending; regular points omitted.
    pub orders: Vec<i64>,
    pub genus: usize,
}

impl Stratum {
    pub fn new(kind: StratumKind, mut orders: Vec<i64>, genus: usize) -> Result<Self> {
        orders.retain(|&d| d != 0);
        orders.sort_unstable_by(|a, b| b.cmp(a));
        let sum: i64 = orders.iter().sum();
        let g = genus as i64;
        let (want, min) = match kind {
            StratumKind::Quadratic => (4 * g - 4, -1),
            StratumKind::Abelian => (2 * g - 2, 1),
        };
        if orders.iter().any(|&d| d < min) {
            return Err(Error::Invariant(format!("order below {min} in {kind:?} stratum")));
        }
        if sum != want {
            return Err(Error::Invariant(format!(
                "orders sum to {sum}, expected {want} for genus {genus}"
            )));
        }
        Ok(Stratum { kind, orders, genus })
    }

    /// Quadratic stratum from orders alone, inferring the genus.
    pub fn quadratic(orders: Vec<i64>) -> Result<Self> {
        let sum: i64 = orders.iter().sum();
        if (sum + 4) % 4 != 0 || sum < -4 {
            return Err(Error::Parameters(format!("orders sum {sum} is not 4g-4")));
        }
        Self::new(StratumKind::Quadratic, orders, ((sum + 4) / 4) as usize)
    }

    /// Abelian stratum from orders alone, inferring the genus.
    pub fn abelian(orders: Vec<i64>) -> Result<Self> {
        let sum: i64 = orders.iter().sum();
        if sum % 2 != 0 || sum < 0 {
            return Err(Error::Parameters(format!("orders sum {sum} is not 2g-2")));
        }
        let genus = if orders.is_empty() { 1 } else { ((sum + 2) / 2) as usize };
        Self::new(StratumKind::Abelian, orders, genus)
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = match self.kind {
            StratumKind::Abelian => 'H',
            StratumKind::Quadratic => 'Q',
        };
        if self.orders.is_empty() {
            return write!(f, "{letter}(0)");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.orders.len() {
            let d = self.orders[i];
            let run = self.orders[i..].iter().take_while(|&&x| x == d).count();
            parts.push(if run == 1 { d.to_string() } else { format!("{d}^{run}") });
            i += run;
        }
        write!(f, "{letter}({})", parts.join(","))
    }
}
