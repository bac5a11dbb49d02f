mod common;

use common::*;
use flatlyap::surface::{
    count_cylinders, count_cylinders_unit_area, direction_word, primitive_directions, psl2z_orbit, slot, Generator,
    Side, SquareTiledSurface, StratumKind,
};
use flatlyap::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn orbit_nodes(s: &SquareTiledSurface) -> Vec<SquareTiledSurface> {
    psl2z_orbit(s, 1000).unwrap().nodes.into_iter().map(|n| n.surface).collect()
}

/// The surface seen in direction `(p, q)`: apply the word that makes `(p, q)` horizontal.
fn in_direction(s: &SquareTiledSurface, p: i64, q: i64) -> SquareTiledSurface {
    let mut t = s.clone();
    for k in direction_word(p, q) {
        let g = if k >= 0 { Generator::H } else { Generator::HInv };
        for _ in 0..k.unsigned_abs() {
            t = t.apply(g);
        }
        t = t.apply(Generator::R);
    }
    t
}

#[test]
fn basic_surface_loads_with_expected_stratum() {
    let s = basic6();
    assert_eq!(s.n_squares(), 6);
    let st = s.stratum().unwrap();
    assert_eq!(st.kind, StratumKind::Quadratic);
    assert_eq!(st.orders, vec![1, -1, -1, -1, -1, -1]);
    assert_eq!(st.genus, 0);
    assert_eq!(st.to_string(), "Q(1,-1^5)");
}

#[test]
fn torus_is_abelian_genus_one() {
    let t = SquareTiledSurface::torus();
    let st = t.stratum().unwrap();
    assert_eq!(st.kind, StratumKind::Abelian);
    assert!(st.orders.is_empty());
    assert_eq!(st.genus, 1);
    assert_eq!(st.to_string(), "H(0)");
}

#[test]
fn invalid_gluings_are_rejected() {
    let axis = r#"{"squares":1,"gluings":[{"a":[0,"R"],"b":[0,"T"],"kind":"translation"},{"a":[0,"L"],"b":[0,"B"],"kind":"translation"}]}"#;
    assert!(matches!(SquareTiledSurface::from_json(axis), Err(Error::InvalidSurface(_))));
    let open = r#"{"squares":1,"gluings":[{"a":[0,"R"],"b":[0,"L"],"kind":"translation"}]}"#;
    assert!(SquareTiledSurface::from_json(open).is_err());
    let two = r#"{"squares":2,"gluings":[
        {"a":[0,"R"],"b":[0,"L"],"kind":"translation"},{"a":[0,"T"],"b":[0,"B"],"kind":"translation"},
        {"a":[1,"R"],"b":[1,"L"],"kind":"translation"},{"a":[1,"T"],"b":[1,"B"],"kind":"translation"}]}"#;
    assert!(matches!(SquareTiledSurface::from_json(two), Err(Error::InvalidSurface(_))));
    assert!(matches!(SquareTiledSurface::from_json("not json"), Err(Error::Parse(_))));
}

#[test]
fn json_round_trip() {
    let s = basic6();
    let back = SquareTiledSurface::from_json(&s.to_json()).unwrap();
    assert_eq!(back, s);
}

#[test]
fn cylinders_of_the_basic_surface_and_its_cover() {
    assert_eq!(basic6().horizontal_cylinders().unwrap().shape(), vec![(6, 1)]);
    let cover = cover18().total;
    let nodes = orbit_nodes(&cover);
    let mut shapes: Vec<Vec<(usize, usize)>> =
        nodes.iter().map(|n| n.horizontal_cylinders().unwrap().shape()).collect();
    shapes.sort();
    assert_eq!(shapes, vec![vec![(12, 1), (6, 1)], vec![(12, 1), (6, 1)], vec![(18, 1)]]);
}

#[test]
fn orbit_of_the_cover_has_the_published_shape() {
    let g = psl2z_orbit(&cover18().total, 100).unwrap();
    assert_eq!(g.len(), 3);
    let (h, r) = (g.h_map(), g.r_map());
    let s3 = (0..3).find(|&n| h[n] == n).expect("node with an h-loop");
    let s2 = r[s3];
    assert_ne!(s2, s3);
    let s1 = h[s2];
    assert_ne!(s1, s2);
    assert_ne!(s1, s3);
    assert_eq!(h[s1], s2);
    assert_eq!(r[s1], s1);
    assert_eq!(r[s2], s3);
    assert_eq!(g.nodes[s3].surface.horizontal_cylinders().unwrap().shape(), vec![(18, 1)]);
    // Vertical cylinders of the h-fixed surface are the horizontal ones of its r-image.
    assert_eq!(g.nodes[s2].surface.horizontal_cylinders().unwrap().shape(), vec![(12, 1), (6, 1)]);
    assert!(!g.nodes[s1].surface.is_isomorphic(&g.nodes[s2].surface));
}

#[test]
fn graph_reports() {
    let g = psl2z_orbit(&cover18().total, 100).unwrap();
    let rep = g.report();
    assert_eq!(rep.degree, 3);
    assert_eq!(rep.cusp_widths, vec![1, 2]);
    assert_eq!(rep.r_fixed, 1);
    let t = psl2z_orbit(&SquareTiledSurface::torus(), 10).unwrap().report();
    assert_eq!((t.degree, t.cusp_widths.clone(), t.r_fixed, t.hr_fixed), (1, vec![1], 1, 1));
    let s = psl2z_orbit(&basic6(), 100).unwrap();
    assert_eq!(s.len(), 3);
    s.check_relations().unwrap();
}

#[test]
fn orbit_cap_is_enforced() {
    assert!(matches!(psl2z_orbit(&cover18().total, 2), Err(Error::OrbitCap(2))));
}

#[test]
fn generator_identities() {
    let s = basic6();
    assert!(s.apply(Generator::R).apply(Generator::R).is_isomorphic(&s));
    assert!(s.apply(Generator::H).apply(Generator::HInv).is_isomorphic(&s));
    let t = SquareTiledSurface::torus();
    assert!(t.apply(Generator::H).is_isomorphic(&t));
    let mut x = s.clone();
    for _ in 0..3 {
        x = x.apply(Generator::H).apply(Generator::R);
    }
    assert!(x.is_isomorphic(&s));
    assert!(!t.is_isomorphic(&s));
}

#[test]
fn dot_export_marks_r_edges_undirected() {
    let dot = psl2z_orbit(&cover18().total, 100).unwrap().to_dot();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("dir=none"));
}

#[test]
fn direction_enumeration() {
    let dirs = primitive_directions(2.0, 100).unwrap();
    let mut sorted = dirs.clone();
    sorted.sort();
    assert_eq!(sorted, vec![(0, 1), (1, -1), (1, 0), (1, 1)]);
    assert!(matches!(primitive_directions(1000.0, 10), Err(Error::Budget(10))));
    for (p, q) in [(3, 5), (7, -2), (1, 0), (0, 1), (5, 8)] {
        // the word sends (p, q) to a horizontal vector of the same length
        let (mut x, mut y) = (p, q);
        for k in direction_word(p, q) {
            x += k * y;
            (x, y) = (-y, x);
        }
        assert_eq!(y, 0);
        assert_eq!(x.abs(), 1);
    }
}

#[test]
fn torus_cylinder_count() {
    let two = BigRational::from_integer(BigInt::from(4));
    assert_eq!(count_cylinders(&SquareTiledSurface::torus(), 2.0).unwrap(), two);
    assert!(count_cylinders(&SquareTiledSurface::torus(), -1.0).is_err());
}

#[test]
fn vertical_cylinders_of_h_fixed_cover_surface() {
    let g = psl2z_orbit(&cover18().total, 100).unwrap();
    let s3 = (0..3).find(|&n| g.h_map()[n] == n).unwrap();
    let v = in_direction(&g.nodes[s3].surface, 0, 1);
    assert_eq!(v.horizontal_cylinders().unwrap().shape(), vec![(12, 1), (6, 1)]);
}

#[test]
fn unit_area_count_rescales_length() {
    let s = basic6();
    let a = count_cylinders_unit_area(&s, 3.0).unwrap();
    let b = count_cylinders(&s, 3.0 * 6f64.sqrt()).unwrap();
    assert_eq!(a, b);
}

/// Random perfect matchings of the vertical and of the horizontal slots; opposite sides are
/// glued by translation and equal sides by a half turn.
fn random_surface() -> impl Strategy<Value = SquareTiledSurface> {
    (1usize..=8).prop_flat_map(|n| {
        let vertical: Vec<usize> = (0..n).flat_map(|i| [slot(i, Side::L), slot(i, Side::R)]).collect();
        let horizontal: Vec<usize> = (0..n).flat_map(|i| [slot(i, Side::T), slot(i, Side::B)]).collect();
        (Just(n), Just(vertical).prop_shuffle(), Just(horizontal).prop_shuffle()).prop_filter_map("connected", |(n, v, h)| {
            let mut partner = vec![0; 4 * n];
            let mut flip = vec![false; 4 * n];
            for pair in v.chunks(2).chain(h.chunks(2)) {
                let (a, b) = (pair[0], pair[1]);
                partner[a] = b;
                partner[b] = a;
                let same = a % 4 == b % 4;
                flip[a] = same;
                flip[b] = same;
            }
            SquareTiledSurface::from_parts(n, partner, flip).ok()
        })
    })
}

fn random_perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complete_periodicity(s in random_surface(), p in 0i64..6, q in 1i64..6) {
        prop_assume!(num_integer::gcd(p, q) == 1);
        for t in [s.clone(), in_direction(&s, p, q), in_direction(&s, q, -p)] {
            let dec = t.horizontal_cylinders().unwrap();
            prop_assert_eq!(dec.area(), s.n_squares());
            let mut squares: Vec<usize> = dec.cylinders.iter().flat_map(|c| c.squares.clone()).collect();
            squares.sort_unstable();
            prop_assert_eq!(squares, (0..t.n_squares()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn stratum_is_invariant_under_generators(s in random_surface()) {
        let st = s.stratum().unwrap();
        for g in [Generator::H, Generator::HInv, Generator::R] {
            let t = s.apply(g);
            prop_assert_eq!(t.n_squares(), s.n_squares());
            prop_assert_eq!(t.stratum().unwrap(), st.clone());
        }
    }

    #[test]
    fn canonical_form_is_relabeling_invariant(perm in random_perm(6)) {
        let s = basic6();
        let t = s.relabel(&perm).unwrap();
        prop_assert_eq!(t.canonical_form().key, s.canonical_form().key);
        prop_assert_eq!(t.canonical_form().hash64(), s.canonical_form().hash64());
        prop_assert!(t.is_isomorphic(&s));
    }

    #[test]
    fn orbit_relations_hold(s in random_surface()) {
        // some eight-square half-translation surfaces have orbits beyond any practical cap
        let g = match psl2z_orbit(&s, 5000) {
            Err(Error::OrbitCap(_)) => return Err(TestCaseError::reject("orbit exceeds cap")),
            other => other.unwrap(),
        };
        g.check_relations().unwrap();
        let (h, r) = (g.h_map(), g.r_map());
        for n in 0..g.len() {
            prop_assert_eq!(r[r[n]], n);
            prop_assert_eq!(r[h[r[h[r[h[n]]]]]], n);
        }
    }
}
