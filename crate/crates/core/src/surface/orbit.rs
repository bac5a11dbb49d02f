//! PSL(2,Z)-orbits of square-tiled surfaces as graphs on canonical forms.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::origami::inverse;
use super::{CylinderDecomposition, Generator, Origami, SquareTiledSurface};
use crate::error::{Error, Result};

/// One surface of the orbit, kept with its translation double cover.
#[derive(Clone, Debug)]
pub struct OrbitNode {
    /// Representative surface (quotient of the canonical double cover).
    pub surface: SquareTiledSurface,
    /// `surface.double_cover()`.
    pub double: Origami,
    pub key: Vec<u32>,
    /// Labels of `double` to canonical labels.
    pub canon: Vec<usize>,
}

/// An `h` or `r` edge, with the square relabeling identifying `g·double(source)` with
/// `double(target)`.
#[derive(Clone, Debug)]
pub struct OrbitEdge {
    pub target: usize,
    pub relabel: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct OrbitGraph {
    pub nodes: Vec<OrbitNode>,
    pub h_edges: Vec<OrbitEdge>,
    pub r_edges: Vec<OrbitEdge>,
    pub base: usize,
    /// Identification of `double(input surface)` with `double(nodes[base].surface)`.
    pub input_relabel: Vec<usize>,
    /// Breadth-first tree: `(parent node, generator)` for every non-base node.
    pub parent: Vec<Option<(usize, Generator)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphReport {
    pub degree: usize,
    pub cusp_widths: Vec<usize>,
    pub r_fixed: usize,
    pub hr_fixed: usize,
}

fn identify(d: &Origami, target: &OrbitNode) -> Vec<usize> {
    let c = d.canonical_form();
    let back = inverse(&target.canon);
    c.relabel.iter().map(|&k| back[k]).collect()
}

fn make_node(d: &Origami) -> OrbitNode {
    let c = d.canonical_form();
    let canonical = d.relabel(&c.relabel);
    let surface = canonical.quotient();
    let double = surface.double_cover();
    let cf = double.canonical_form();
    debug_assert_eq!(cf.key, c.key);
    OrbitNode {
        surface,
        double,
        key: cf.key,
        canon: cf.relabel,
    }
}

/// Breadth-first closure under `h` and `r`, starting from `s`.
pub fn psl2z_orbit(s: &SquareTiledSurface, cap: usize) -> Result<OrbitGraph> {
    let start = s.double_cover();
    let node0 = make_node(&start);
    let input_relabel = identify(&start, &node0);
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    index.insert(node0.key.clone(), 0);
    let mut nodes = vec![node0];
    let mut parent = vec![None];
    let mut h_edges: Vec<Option<OrbitEdge>> = vec![None];
    let mut r_edges: Vec<Option<OrbitEdge>> = vec![None];
    let mut i = 0;
    while i < nodes.len() {
        for g in [Generator::H, Generator::R] {
            let d = nodes[i].double.apply(g);
            let c = d.canonical_form();
            let t = match index.get(&c.key) {
                Some(&t) => t,
                None => {
                    if nodes.len() >= cap {
                        return Err(Error::OrbitCap(cap));
                    }
                    let node = make_node(&d);
                    let t = nodes.len();
                    index.insert(node.key.clone(), t);
                    nodes.push(node);
                    parent.push(Some((i, g)));
                    h_edges.push(None);
                    r_edges.push(None);
                    t
                }
            };
            let edge = OrbitEdge {
                target: t,
                relabel: identify(&d, &nodes[t]),
            };
            match g {
                Generator::H => h_edges[i] = Some(edge),
                _ => r_edges[i] = Some(edge),
            }
        }
        i += 1;
    }
    let graph = OrbitGraph {
        nodes,
        h_edges: h_edges.into_iter().map(|e| e.expect("h edge")).collect(),
        r_edges: r_edges.into_iter().map(|e| e.expect("r edge")).collect(),
        base: 0,
        input_relabel,
        parent,
    };
    graph.check_relations()?;
    Ok(graph)
}

impl OrbitGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn h_map(&self) -> Vec<usize> {
        self.h_edges.iter().map(|e| e.target).collect()
    }

    pub fn r_map(&self) -> Vec<usize> {
        self.r_edges.iter().map(|e| e.target).collect()
    }

    pub fn h_inv_map(&self) -> Vec<usize> {
        inverse(&self.h_map())
    }

    pub fn step(&self, node: usize, g: Generator) -> usize {
        match g {
            Generator::H => self.h_edges[node].target,
            Generator::R => self.r_edges[node].target,
            Generator::HInv => self.h_inv_map()[node],
        }
    }

    /// `r² = id` and `(hr)³ = id` as node maps.
    pub fn check_relations(&self) -> Result<()> {
        let (h, r) = (self.h_map(), self.r_map());
        for n in 0..self.len() {
            if r[r[n]] != n {
                return Err(Error::Invariant(format!("r² moves node {n}")));
            }
            let mut m = n;
            for _ in 0..3 {
                m = h[r[m]];
            }
            if m != n {
                return Err(Error::Invariant(format!("(hr)³ moves node {n}")));
            }
        }
        Ok(())
    }

    /// Cycles of the `h` map, each listed from its smallest node.
    pub fn h_cycles(&self) -> Vec<Vec<usize>> {
        let h = self.h_map();
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for n in 0..self.len() {
            if seen[n] {
                continue;
            }
            let mut cyc = vec![n];
            seen[n] = true;
            let mut m = h[n];
            while m != n {
                seen[m] = true;
                cyc.push(m);
                m = h[m];
            }
            out.push(cyc);
        }
        out
    }

    pub fn report(&self) -> GraphReport {
        let (h, r) = (self.h_map(), self.r_map());
        let mut cusp_widths: Vec<usize> = self.h_cycles().iter().map(|c| c.len()).collect();
        cusp_widths.sort_unstable();
        GraphReport {
            degree: self.len(),
            cusp_widths,
            r_fixed: (0..self.len()).filter(|&n| r[n] == n).count(),
            hr_fixed: (0..self.len()).filter(|&n| h[r[n]] == n).count(),
        }
    }

    pub fn horizontal_cylinders(&self) -> Result<Vec<CylinderDecomposition>> {
        self.nodes.iter().map(|n| n.surface.horizontal_cylinders()).collect()
    }

    /// Graphviz export: `h` edges directed, `r` edges undirected.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph orbit {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "  {i} [label=\"{i} ({} sq)\"];", n.surface.n_squares());
        }
        for (i, e) in self.h_edges.iter().enumerate() {
            let _ = writeln!(s, "  {i} -> {} [label=\"h\"];", e.target);
        }
        for (i, e) in self.r_edges.iter().enumerate() {
            if i <= e.target {
                let _ = writeln!(s, "  {i} -> {} [label=\"r\", dir=none, style=dashed];", e.target);
            }
        }
        s.push_str("}\n");
        s
    }
}
