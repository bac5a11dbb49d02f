//! Translation double covers: origamis carrying a half-turn involution.

use std::collections::VecDeque;
use std::hash::{Hash, Hasher};

use super::{slot, Generator, Side, SquareTiledSurface};

/// Translation surface given by right/up neighbour permutations, with the half-turn
/// involution `iota` exchanging the two lifts of every square of the quotient.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Origami {
    pub right: Vec<usize>,
    pub up: Vec<usize>,
    pub iota: Vec<usize>,
}

/// Minimal relabeling of an [`Origami`].
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    /// Encoding `(right, up, iota)` of each relabeled square, concatenated.
    pub key: Vec<u32>,
    /// Old label to canonical label for the first minimizing start square.
    pub relabel: Vec<usize>,
    /// Number of start squares attaining the minimum (the automorphism count).
    pub automorphisms: usize,
}

impl CanonicalForm {
    pub fn hash64(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.key.hash(&mut h);
        h.finish()
    }
}

pub(crate) fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    // (a ∘ b)(x) = a(b(x))
    b.iter().map(|&x| a[x]).collect()
}

impl Origami {
    /// Square `(i, ε)` has index `2i + ε`; `ε = 1` is square `i` turned by π.
    pub fn double_of(s: &SquareTiledSurface) -> Origami {
        let n = s.n_squares();
        let mut right = vec![0; 2 * n];
        let mut up = vec![0; 2 * n];
        let mut iota = vec![0; 2 * n];
        for i in 0..n {
            for e in 0..2 {
                let x = 2 * i + e;
                let (rs, us) = if e == 0 { (Side::R, Side::T) } else { (Side::L, Side::B) };
                let (j, _, f) = s.neighbor(i, rs);
                right[x] = 2 * j + (e ^ f as usize);
                let (j, _, f) = s.neighbor(i, us);
                up[x] = 2 * j + (e ^ f as usize);
                iota[x] = 2 * i + (1 - e);
            }
        }
        Origami { right, up, iota }
    }

    pub fn len(&self) -> usize {
        self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.right.is_empty()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.len();
        let (ri, ui) = (inverse(&self.right), inverse(&self.up));
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for y in [self.right[x], self.up[x], ri[x], ui[x]] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == n
    }

    /// Action of a generator, keeping square labels.
    pub fn apply(&self, g: Generator) -> Origami {
        let ri = inverse(&self.right);
        match g {
            Generator::H => Origami {
                right: self.right.clone(),
                up: compose(&self.up, &ri),
                iota: compose(&self.right, &self.iota),
            },
            Generator::HInv => Origami {
                right: self.right.clone(),
                up: compose(&self.up, &self.right),
                iota: compose(&ri, &self.iota),
            },
            Generator::R => Origami {
                right: inverse(&self.up),
                up: self.right.clone(),
                iota: self.iota.clone(),
            },
        }
    }

    fn encode_from(&self, start: usize, inv: &(Vec<usize>, Vec<usize>)) -> (Vec<u32>, Vec<usize>) {
        let n = self.len();
        let mut label = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::new();
        label[start] = 0;
        order.push(start);
        queue.push_back(start);
        while let Some(x) = queue.pop_front() {
            for y in [self.right[x], self.up[x], inv.0[x], inv.1[x], self.iota[x]] {
                if label[y] == usize::MAX {
                    label[y] = order.len();
                    order.push(y);
                    queue.push_back(y);
                }
            }
        }
        let mut key = Vec::with_capacity(3 * n);
        for &x in &order {
            key.push(label[self.right[x]] as u32);
            key.push(label[self.up[x]] as u32);
            key.push(label[self.iota[x]] as u32);
        }
        (key, label)
    }

    /// Lexicographically least encoding over breadth-first relabelings from every square.
    pub fn canonical_form(&self) -> CanonicalForm {
        let inv = (inverse(&self.right), inverse(&self.up));
        let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
        let mut count = 0;
        for s in 0..self.len() {
            let (key, label) = self.encode_from(s, &inv);
            match &best {
                Some((k, _)) if key > *k => {}
                Some((k, _)) if key == *k => count += 1,
                _ => {
                    best = Some((key, label));
                    count = 1;
                }
            }
        }
        let (key, relabel) = best.expect("nonempty origami");
        CanonicalForm {
            key,
            relabel,
            automorphisms: count,
        }
    }

    /// Rename squares: square `x` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Origami {
        let n = self.len();
        let mut o = Origami {
            right: vec![0; n],
            up: vec![0; n],
            iota: vec![0; n],
        };
        for x in 0..n {
            o.right[perm[x]] = perm[self.right[x]];
            o.up[perm[x]] = perm[self.up[x]];
            o.iota[perm[x]] = perm[self.iota[x]];
        }
        o
    }

    /// Split squares into half-turn pairs: returns `(square, sheet)` for every label.
    /// Representatives are the first label of each pair met by a breadth-first
    /// search from label 0 through translation moves.
    pub fn quotient_labels(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let (ri, ui) = (inverse(&self.right), inverse(&self.up));
        let mut lab = vec![(usize::MAX, 0); n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut next = 0;
        while let Some(x) = queue.pop_front() {
            if lab[x].0 == usize::MAX {
                lab[x] = (next, 0);
                lab[self.iota[x]] = (next, 1);
                next += 1;
            }
            for y in [self.right[x], self.up[x], ri[x], ui[x]] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        lab
    }

    /// The half-translation surface obtained by identifying each square with its
    /// half-turn partner.
    pub fn quotient(&self) -> SquareTiledSurface {
        let n2 = self.len();
        let n = n2 / 2;
        let lab = self.quotient_labels();
        let (ri, ui) = (inverse(&self.right), inverse(&self.up));
        let mut rep = vec![0; n];
        for (x, &(k, e)) in lab.iter().enumerate() {
            if e == 0 {
                rep[k] = x;
            }
        }
        let mut partner = vec![0; 4 * n];
        let mut flip = vec![false; 4 * n];
        for k in 0..n {
            let x = rep[k];
            let moves = [
                (Side::R, self.right[x], Side::L),
                (Side::T, self.up[x], Side::B),
                (Side::L, ri[x], Side::R),
                (Side::B, ui[x], Side::T),
            ];
            for (side, y, opp) in moves {
                let (k2, e) = lab[y];
                let s = slot(k, side);
                if e == 0 {
                    partner[s] = slot(k2, opp);
                } else {
                    partner[s] = slot(k2, side);
                    flip[s] = true;
                }
            }
        }
        SquareTiledSurface::from_parts(n, partner, flip)
            .expect("quotient of a valid double cover is a valid surface")
    }
}
