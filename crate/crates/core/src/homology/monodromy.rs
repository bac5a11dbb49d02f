//! Homology representations over orbit graphs, deck eigenspaces and word monodromy.

use serde::Serialize;

use super::basis::{automorphism_matrix, build_h1, generator_edge_image, induced_matrix, to_cyclo, H1Basis, IntMatrix};
use crate::cover::CoveringSurface;
use crate::cyclotomic::{CycloMatrix, CycloNum};
use crate::error::{Error, Result};
use crate::surface::{origami_inverse, psl2z_orbit, Generator, Origami, OrbitGraph, SquareTiledSurface};

/// Integer homology of every surface of an orbit with the maps induced by `h` and `r`.
#[derive(Clone, Debug)]
pub struct HomologyRep {
    pub graph: OrbitGraph,
    pub bases: Vec<H1Basis>,
    /// `h[n]`: `H₁(node n) → H₁(h·n)`.
    pub h: Vec<IntMatrix>,
    /// `r[n]`: `H₁(node n) → H₁(r·n)`.
    pub r: Vec<IntMatrix>,
    /// Deck generator on each node's double cover, when the orbit comes from a cyclic cover.
    pub deck_perm: Option<Vec<Vec<usize>>>,
    pub deck: Option<Vec<IntMatrix>>,
    pub degree: usize,
}

fn conjugate_perm(p: &[usize], sigma: &[usize]) -> Vec<usize> {
    let mut out = vec![0; p.len()];
    for x in 0..p.len() {
        out[sigma[x]] = sigma[p[x]];
    }
    out
}

fn commutes_with(d: &Origami, p: &[usize]) -> bool {
    (0..d.len()).all(|x| {
        p[d.right[x]] == d.right[p[x]] && p[d.up[x]] == d.up[p[x]] && p[d.iota[x]] == d.iota[p[x]]
    })
}

impl HomologyRep {
    pub fn from_surface(s: &SquareTiledSurface, cap: usize) -> Result<Self> {
        let graph = psl2z_orbit(s, cap)?;
        let bases = graph
            .nodes
            .iter()
            .map(|n| build_h1(&n.surface))
            .collect::<Result<Vec<_>>>()?;
        let mut h = Vec::with_capacity(graph.len());
        let mut r = Vec::with_capacity(graph.len());
        for (i, b) in bases.iter().enumerate() {
            for (g, out) in [(Generator::H, &mut h), (Generator::R, &mut r)] {
                let e = match g {
                    Generator::H => &graph.h_edges[i],
                    _ => &graph.r_edges[i],
                };
                let m = induced_matrix(b, &bases[e.target], |k| {
                    generator_edge_image(&b.double, g, &e.relabel, k)
                })?;
                out.push(m);
            }
        }
        Ok(HomologyRep {
            graph,
            bases,
            h,
            r,
            deck_perm: None,
            deck: None,
            degree: 1,
        })
    }

    /// Orbit of the cover's total surface, with the deck generator carried to every node.
    pub fn from_cover(cov: &CoveringSurface, cap: usize) -> Result<Self> {
        let mut rep = Self::from_surface(&cov.total, cap)?;
        let g = &rep.graph;
        let n2 = 2 * cov.total.n_squares();
        let lifted: Vec<usize> = (0..n2).map(|x| 2 * cov.deck[x / 2] + x % 2).collect();
        let mut perms: Vec<Option<Vec<usize>>> = vec![None; g.len()];
        perms[g.base] = Some(conjugate_perm(&lifted, &g.input_relabel));
        for t in 0..g.len() {
            if let Some((s, gen)) = g.parent[t] {
                let e = match gen {
                    Generator::H => &g.h_edges[s],
                    _ => &g.r_edges[s],
                };
                let p = perms[s].clone().ok_or_else(|| Error::Invariant("parent visited late".into()))?;
                perms[t] = Some(conjugate_perm(&p, &e.relabel));
            }
        }
        let perms: Vec<Vec<usize>> = perms.into_iter().map(|p| p.expect("every node reached")).collect();
        for (n, p) in perms.iter().enumerate() {
            if !commutes_with(&g.nodes[n].double, p) {
                return Err(Error::Invariant(format!("deck permutation is not an automorphism at node {n}")));
            }
        }
        let deck = rep
            .bases
            .iter()
            .zip(&perms)
            .map(|(b, p)| automorphism_matrix(b, p))
            .collect::<Result<Vec<_>>>()?;
        rep.deck_perm = Some(perms);
        rep.deck = Some(deck);
        rep.degree = cov.d;
        Ok(rep)
    }

    pub fn edge(&self, n: usize, g: Generator) -> (&IntMatrix, usize) {
        match g {
            Generator::H => (&self.h[n], self.graph.h_edges[n].target),
            _ => (&self.r[n], self.graph.r_edges[n].target),
        }
    }

    /// Symplecticity of every edge map.
    pub fn check_symplectic(&self) -> Result<()> {
        for n in 0..self.graph.len() {
            for g in [Generator::H, Generator::R] {
                let (m, t) = self.edge(n, g);
                if !super::basis::is_symplectic(m, &self.bases[n].omega, &self.bases[t].omega) {
                    return Err(Error::Invariant(format!("{g:?} map at node {n} is not symplectic")));
                }
            }
        }
        Ok(())
    }

    /// Every edge map intertwines the deck actions.
    pub fn check_equivariance(&self) -> Result<()> {
        let deck = self.deck.as_ref().ok_or_else(|| Error::Parameters("no deck action".into()))?;
        for n in 0..self.graph.len() {
            for g in [Generator::H, Generator::R] {
                let (m, t) = self.edge(n, g);
                if m * &deck[n] != &deck[t] * m {
                    return Err(Error::Invariant(format!("{g:?} map at node {n} is not deck-equivariant")));
                }
            }
        }
        Ok(())
    }
}

/// Deck eigenspace with its Hermitian intersection form.
#[derive(Clone, Debug)]
pub struct IsotypicBasis {
    pub k: usize,
    /// Columns span `ker(T_* − ζ^k)`.
    pub basis: CycloMatrix,
    /// `H = conj(√−3)·V*·Ω·V`.
    pub hermitian: CycloMatrix,
    pub signature: (usize, usize),
}

/// `(positive, negative, zero)` inertia of a Hermitian matrix by exact congruence.
pub fn hermitian_inertia(h: &CycloMatrix) -> Result<(usize, usize, usize)> {
    if !h.is_square() || h.adjoint() != *h {
        return Err(Error::Parameters("matrix is not Hermitian".into()));
    }
    let n = h.rows();
    let mut m = h.clone();
    let (mut p, mut q, mut z) = (0, 0, 0);
    for k in 0..n {
        if m[(k, k)].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !m[(j, j)].is_zero()) {
                swap_sym(&mut m, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !m[(k, j)].is_zero()) {
                // row_k += c·row_j and col_k += conj(c)·col_j with c = H_kj
                let c = m[(k, j)].clone();
                add_sym(&mut m, k, j, &c);
            }
        }
        let piv = m[(k, k)].clone();
        if piv.is_zero() {
            z += 1;
            continue;
        }
        if !piv.is_rational() {
            return Err(Error::Invariant("Hermitian diagonal is not real".into()));
        }
        if piv.a > num_rational::BigRational::from_integer(0.into()) {
            p += 1;
        } else {
            q += 1;
        }
        let inv = piv.inv()?;
        for i in k + 1..n {
            if m[(i, k)].is_zero() {
                continue;
            }
            let f = &m[(i, k)] * &inv;
            add_sym(&mut m, i, k, &(-f));
        }
    }
    Ok((p, q, z))
}

fn swap_sym(m: &mut CycloMatrix, a: usize, b: usize) {
    let n = m.rows();
    for j in 0..n {
        let t = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = t;
    }
    for i in 0..n {
        let t = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = t;
    }
}

/// `row_i += c·row_j`, then `col_i += conj(c)·col_j`.
fn add_sym(m: &mut CycloMatrix, i: usize, j: usize, c: &CycloNum) {
    let n = m.rows();
    for t in 0..n {
        let v = c * &m[(j, t)];
        m[(i, t)] += &v;
    }
    let cc = c.conj();
    for t in 0..n {
        let v = &cc * &m[(t, j)];
        m[(t, i)] += &v;
    }
}

/// Exact eigenspace `ker(T_* − ζ^k)` and its Hermitian form.
pub fn isotypic_basis(t: &IntMatrix, omega: &IntMatrix, k: usize) -> Result<IsotypicBasis> {
    if k % 3 == 0 {
        return Err(Error::Parameters("the eigenvalue 1 is excluded".into()));
    }
    let n = t.nrows();
    let shifted = &to_cyclo(t) - &CycloMatrix::scalar(n, &CycloNum::zeta_pow(k as i64));
    let basis = shifted.kernel();
    let hermitian = hermitian_form(&basis, omega);
    let (p, q, z) = hermitian_inertia(&hermitian)?;
    if z != 0 {
        return Err(Error::Invariant("Hermitian form is degenerate on the eigenspace".into()));
    }
    Ok(IsotypicBasis {
        k,
        basis,
        hermitian,
        signature: (p, q),
    })
}

/// `conj(√−3)·V*·Ω·V`, Hermitian because `Ω` is antisymmetric.
pub fn hermitian_form(v: &CycloMatrix, omega: &IntMatrix) -> CycloMatrix {
    let s = CycloNum::sqrt_minus_three().conj();
    (&(&v.adjoint() * &to_cyclo(omega)) * v).scale(&s)
}

/// A step of a path in the orbit graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    H,
    HInv,
    R,
    RInv,
}

impl Letter {
    fn inverse(self) -> Letter {
        match self {
            Letter::H => Letter::HInv,
            Letter::HInv => Letter::H,
            Letter::R => Letter::RInv,
            Letter::RInv => Letter::R,
        }
    }
}

/// Parse words such as `"h r H^3 r"`, `"(R H r)^2"` or `"h^-2"`; `H` and `R` are inverses.
pub fn parse_word(w: &str) -> Result<Vec<Letter>> {
    let chars: Vec<char> = w.chars().filter(|c| !c.is_whitespace() && !matches!(c, '·' | '*' | '.')).collect();
    let mut pos = 0;
    let out = parse_seq(&chars, &mut pos)?;
    if pos != chars.len() {
        return Err(Error::BadWord(format!("unexpected '{}' in '{w}'", chars[pos])));
    }
    Ok(out)
}

fn parse_seq(c: &[char], pos: &mut usize) -> Result<Vec<Letter>> {
    let mut out = Vec::new();
    while *pos < c.len() && c[*pos] != ')' {
        let atom = match c[*pos] {
            'h' => vec![Letter::H],
            'H' => vec![Letter::HInv],
            'r' => vec![Letter::R],
            'R' => vec![Letter::RInv],
            '(' => {
                *pos += 1;
                let inner = parse_seq(c, pos)?;
                if *pos >= c.len() || c[*pos] != ')' {
                    return Err(Error::BadWord("unbalanced parenthesis".into()));
                }
                inner
            }
            x => return Err(Error::BadWord(format!("unknown letter '{x}'"))),
        };
        *pos += 1;
        let mut exp: i64 = 1;
        if *pos < c.len() && c[*pos] == '^' {
            *pos += 1;
            let start = *pos;
            if *pos < c.len() && c[*pos] == '-' {
                *pos += 1;
            }
            while *pos < c.len() && c[*pos].is_ascii_digit() {
                *pos += 1;
            }
            let s: String = c[start..*pos].iter().collect();
            exp = s.parse().map_err(|_| Error::BadWord(format!("bad exponent '{s}'")))?;
        }
        let unit: Vec<Letter> = if exp < 0 {
            atom.iter().rev().map(|l| l.inverse()).collect()
        } else {
            atom
        };
        for _ in 0..exp.unsigned_abs() {
            out.extend_from_slice(&unit);
        }
    }
    Ok(out)
}

/// Deck-eigenspace restriction of a [`HomologyRep`], defined up to scalars `±ζ^k`.
#[derive(Clone, Debug)]
pub struct MonodromyRep {
    pub k: usize,
    pub fibers: Vec<IsotypicBasis>,
    pub h: Vec<CycloMatrix>,
    pub r: Vec<CycloMatrix>,
    pub h_target: Vec<usize>,
    pub r_target: Vec<usize>,
    h_inv: Vec<CycloMatrix>,
    r_inv: Vec<CycloMatrix>,
    h_source: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeExport {
    pub node: usize,
    pub generator: String,
    pub target: usize,
    pub matrix: CycloMatrix,
}

impl MonodromyRep {
    pub fn restrict(rep: &HomologyRep, k: usize) -> Result<Self> {
        let deck = rep.deck.as_ref().ok_or_else(|| Error::Parameters("orbit has no deck action".into()))?;
        if rep.degree != 3 {
            return Err(Error::Parameters("eigenspaces are computed for degree-3 covers".into()));
        }
        let fibers = rep
            .bases
            .iter()
            .zip(deck)
            .map(|(b, t)| isotypic_basis(t, &b.omega, k))
            .collect::<Result<Vec<_>>>()?;
        let restrict = |m: &IntMatrix, s: usize, t: usize| -> Result<CycloMatrix> {
            let image = &to_cyclo(m) * &fibers[s].basis;
            fibers[t].basis.solve(&image)
        };
        let n = rep.graph.len();
        let mut h = Vec::with_capacity(n);
        let mut r = Vec::with_capacity(n);
        for s in 0..n {
            h.push(restrict(&rep.h[s], s, rep.graph.h_edges[s].target)?);
            r.push(restrict(&rep.r[s], s, rep.graph.r_edges[s].target)?);
        }
        let h_inv = h.iter().map(|m| m.inverse()).collect::<Result<Vec<_>>>()?;
        let r_inv = r.iter().map(|m| m.inverse()).collect::<Result<Vec<_>>>()?;
        let h_target = rep.graph.h_map();
        Ok(MonodromyRep {
            k,
            fibers,
            h,
            r,
            h_source: origami_inverse(&h_target),
            h_target,
            r_target: rep.graph.r_map(),
            h_inv,
            r_inv,
        })
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.fibers.first().map_or(0, |f| f.basis.cols())
    }

    /// Product of edge matrices along the path spelled by `word`, in path order.
    pub fn word(&self, start: usize, word: &str) -> Result<CycloMatrix> {
        let letters = parse_word(word)?;
        self.word_letters(start, &letters)
    }

    pub fn word_letters(&self, start: usize, letters: &[Letter]) -> Result<CycloMatrix> {
        if start >= self.len() {
            return Err(Error::Parameters(format!("node {start} out of range")));
        }
        let mut node = start;
        let mut acc = CycloMatrix::identity(self.dim());
        for &l in letters {
            let (m, next) = match l {
                Letter::H => (&self.h[node], self.h_target[node]),
                Letter::R => (&self.r[node], self.r_target[node]),
                Letter::HInv => {
                    let p = self.h_source[node];
                    (&self.h_inv[p], p)
                }
                Letter::RInv => {
                    let p = self.r_target[node];
                    (&self.r_inv[p], p)
                }
            };
            acc = m * &acc;
            node = next;
        }
        if node != start {
            return Err(Error::OpenPath(start));
        }
        Ok(acc)
    }

    /// Hermitian-form preservation and unit determinants on every edge.
    pub fn check_invariants(&self) -> Result<()> {
        for s in 0..self.len() {
            for (m, t, g) in [(&self.h[s], self.h_target[s], "h"), (&self.r[s], self.r_target[s], "r")] {
                let pulled = &(&m.adjoint() * &self.fibers[t].hermitian) * m;
                if pulled != self.fibers[s].hermitian {
                    return Err(Error::Invariant(format!("{g} at node {s} does not preserve the form")));
                }
                if m.det()?.as_root_of_unity().is_none() {
                    return Err(Error::Invariant(format!("{g} at node {s} has a non-unit determinant")));
                }
            }
        }
        Ok(())
    }

    pub fn export(&self) -> Vec<EdgeExport> {
        let mut out = Vec::new();
        for s in 0..self.len() {
            out.push(EdgeExport {
                node: s,
                generator: "h".into(),
                target: self.h_target[s],
                matrix: self.h[s].clone(),
            });
            out.push(EdgeExport {
                node: s,
                generator: "r".into(),
                target: self.r_target[s],
                matrix: self.r[s].clone(),
            });
        }
        out
    }
}
