mod common;

use std::sync::OnceLock;

use common::*;
use flatlyap::cyclotomic::{CycloMatrix, CycloNum, CycloPoly, IntPoly};
use flatlyap::homology::*;
use flatlyap::surface::{psl2z_orbit, SquareTiledSurface};
use flatlyap::Error;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn rep() -> &'static HomologyRep {
    static REP: OnceLock<HomologyRep> = OnceLock::new();
    REP.get_or_init(|| HomologyRep::from_cover(&cover18(), 100).expect("cover orbit homology"))
}

fn mono(k: usize) -> &'static MonodromyRep {
    static M: OnceLock<[MonodromyRep; 2]> = OnceLock::new();
    &M.get_or_init(|| {
        [
            MonodromyRep::restrict(rep(), 1).expect("k = 1"),
            MonodromyRep::restrict(rep(), 2).expect("k = 2"),
        ]
    })[k - 1]
}

/// Node fixed by `h`, which carries the single 18-square cylinder.
fn h_fixed(m: &MonodromyRep) -> usize {
    (0..m.len()).find(|&n| m.h_target[n] == n).expect("an h-fixed node")
}

/// A node moved by `h`.
fn moved(m: &MonodromyRep) -> usize {
    (0..m.len()).find(|&n| m.h_target[n] != n).expect("a node moved by h")
}

/// Node at which both commutator loops close.
fn s1(m: &MonodromyRep) -> usize {
    (0..m.len())
        .find(|&n| m.word(n, RHO1).is_ok() && m.word(n, RHO2).is_ok())
        .expect("a base point for the loops")
}

fn is_unit_scalar(m: &CycloMatrix) -> bool {
    m.as_scalar().is_some_and(|c| c.as_root_of_unity().is_some())
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn block_diag(a: &CycloMatrix, b: &CycloMatrix) -> CycloMatrix {
    CycloMatrix::from_fn(4, 4, |i, j| match (i < 2, j < 2) {
        (true, true) => a[(i, j)].clone(),
        (false, false) => b[(i - 2, j - 2)].clone(),
        _ => CycloNum::zero(),
    })
}

#[test]
fn ranks_of_h1() {
    assert_eq!(build_h1(&cover18().total).unwrap().rank(), 8);
    assert_eq!(build_h1(&SquareTiledSurface::torus()).unwrap().rank(), 2);
    assert_eq!(build_h1(&basic6()).unwrap().rank(), 0);
}

#[test]
fn torus_intersection_form_is_standard() {
    let b = build_h1(&SquareTiledSurface::torus()).unwrap();
    let o = &b.omega;
    assert_eq!(o.transpose(), -o.clone());
    assert_eq!((o[(0, 1)]).abs(), 1);
}

#[test]
fn torus_generators_have_the_standard_conjugacy_classes() {
    let rep = HomologyRep::from_surface(&SquareTiledSurface::torus(), 10).unwrap();
    assert_eq!(rep.graph.len(), 1);
    let (h, r) = (&rep.h[0], &rep.r[0]);
    let id = DMatrix::<i64>::identity(2, 2);
    // unipotent with primitive h − I, hence conjugate to [[1,1],[0,1]]
    assert_eq!(h.trace(), 2);
    assert_ne!(*h, id);
    let n = h - &id;
    assert!((&n * &n).iter().all(|&x| x == 0));
    assert_eq!(n.iter().fold(0i64, |g, &x| num_integer::gcd(g, x)), 1);
    // order-four rotation
    assert_eq!(r * r, -id);
    assert!(rep.check_symplectic().is_ok());
}

#[test]
fn deck_action_on_cover_homology() {
    let rep = rep();
    for t in rep.deck.as_ref().unwrap() {
        let id = DMatrix::<i64>::identity(8, 8);
        assert_eq!(t * t * t, id);
        let shifted = to_cyclo(&(t - &id));
        assert!(!shifted.det().unwrap().is_zero());
    }
    for n in 0..rep.graph.len() {
        let (t, b) = (&rep.deck.as_ref().unwrap()[n], &rep.bases[n]);
        let e1 = isotypic_basis(t, &b.omega, 1).unwrap();
        let e2 = isotypic_basis(t, &b.omega, 2).unwrap();
        assert_eq!(e1.basis.cols(), 4);
        assert_eq!(e2.basis.cols(), 4);
        assert_eq!(e1.signature, (1, 3));
        assert_eq!(e2.signature, (3, 1));
        assert_eq!(hermitian_inertia(&e1.hermitian).unwrap().2, 0);
        assert!(matches!(isotypic_basis(t, &b.omega, 0), Err(Error::Parameters(_))));
    }
}

#[test]
fn edge_maps_are_symplectic_and_equivariant() {
    rep().check_symplectic().unwrap();
    rep().check_equivariance().unwrap();
}

#[test]
fn monodromy_preserves_forms_with_unit_determinants() {
    for k in [1, 2] {
        let m = mono(k);
        m.check_invariants().unwrap();
        for s in 0..m.len() {
            for e in [&m.h[s], &m.r[s]] {
                assert!(e.det().unwrap().as_root_of_unity().is_some());
            }
        }
    }
}

#[test]
fn horizontal_waists_vanish_on_the_cover_orbit() {
    let g = &rep().graph;
    assert_eq!(g.len(), 3);
    for (n, node) in g.nodes.iter().enumerate() {
        let basis = &rep().bases[n];
        for cyl in &node.surface.horizontal_cylinders().unwrap().cylinders {
            for &row in &cyl.lifted_rows {
                assert!(basis.waist(row).iter().all(|&x| x == 0), "node {n}");
            }
        }
    }
}

#[test]
fn torus_waist_is_primitive() {
    let t = SquareTiledSurface::torus();
    let b = build_h1(&t).unwrap();
    let cyl = &t.horizontal_cylinders().unwrap().cylinders[0];
    let w = b.waist(cyl.lifted_rows[0]);
    assert_eq!(w.iter().fold(0i64, |g, &x| num_integer::gcd(g, x)), 1);
}

#[test]
fn h_has_finite_projective_order_everywhere() {
    let m = mono(1);
    for n in 0..m.len() {
        let len = if m.h_target[n] == n { "h" } else { "h^2" };
        let o = m.word(n, len).unwrap().det_order(100).unwrap();
        assert!(o.projective_order.is_some(), "node {n}");
    }
    let a = m.word(h_fixed(m), MU1).unwrap().det_order(100).unwrap();
    assert_eq!(a.projective_order, Some(18));
    assert_eq!(18 % a.order.unwrap(), 0);
}

#[test]
fn word_edge_cases() {
    let m = mono(1);
    assert_eq!(m.word(0, "").unwrap(), CycloMatrix::identity(4));
    assert!(matches!(m.word(moved(m), "h"), Err(Error::OpenPath(_))));
    assert!(matches!(m.word(0, "hx"), Err(Error::BadWord(_))));
    assert!(matches!(m.word(0, "(h r"), Err(Error::BadWord(_))));
    assert!(m.word(99, "").is_err());
    assert_eq!(parse_word("(R H r)^2").unwrap().len(), 6);
    assert_eq!(parse_word("h^-2").unwrap(), vec![Letter::HInv, Letter::HInv]);
}

#[test]
fn inverse_letters_cancel() {
    let m = mono(1);
    for n in 0..m.len() {
        assert_eq!(m.word(n, "h H").unwrap(), CycloMatrix::identity(4));
        assert_eq!(m.word(n, "R r").unwrap(), CycloMatrix::identity(4));
    }
}

#[test]
fn loop_relations_hold_projectively() {
    for k in [1, 2] {
        let m = mono(k);
        for n in 0..m.len() {
            assert!(is_unit_scalar(&m.word(n, "r r").unwrap()), "r² at {n}");
            assert!(is_unit_scalar(&m.word(n, "(h r)^3").unwrap()), "(hr)³ at {n}");
        }
    }
}

#[test]
fn wedge_functoriality_along_paths() {
    let m = mono(1);
    for (w, start) in [(RHO1, s1(m)), (RHO2, s1(m)), (MU2, h_fixed(m))] {
        let letters = parse_word(w).unwrap();
        let mut node = start;
        let mut acc = CycloMatrix::identity(6);
        for l in &letters {
            let (step, next) = match l {
                Letter::H => (m.h[node].clone(), m.h_target[node]),
                Letter::R => (m.r[node].clone(), m.r_target[node]),
                Letter::HInv => {
                    let p = (0..m.len()).find(|&p| m.h_target[p] == node).unwrap();
                    (m.h[p].inverse().unwrap(), p)
                }
                Letter::RInv => {
                    let p = (0..m.len()).find(|&p| m.r_target[p] == node).unwrap();
                    (m.r[p].inverse().unwrap(), p)
                }
            };
            acc = &step.wedge_square().unwrap() * &acc;
            node = next;
        }
        assert_eq!(node, start);
        let whole = m.word_letters(start, &letters).unwrap();
        assert_eq!(whole.wedge_square().unwrap(), acc, "{w}");
    }
}

#[test]
fn commutator_certificates_on_both_eigenspaces() {
    for k in [1, 2] {
        let m = mono(k);
        let start = s1(m);
        let x = m.word(start, RHO1).unwrap();
        let y = m.word(start, RHO2).unwrap();
        let rep = irreducibility_certificate(&x, &y).unwrap();
        assert_eq!(rep.det1, Some(int(285)), "k = {k}");
        assert_eq!(rep.det2, Some(int(5292)), "k = {k}");
        assert!(rep.irreducible);
    }
}

#[test]
fn published_matrices_certificate() {
    let rep = irreducibility_certificate(&published_x(), &published_y()).unwrap();
    assert_eq!(rep.det1, Some(int(285)));
    let (u, v) = (published_u(), published_v());
    let det = (&(&u * &v) - &(&v * &u)).det().unwrap();
    assert_eq!(det, CycloNum::from_ints(-5292, 0));
}

#[test]
fn reducible_toy_representations() {
    let a = zmatrix(&[&["1", "1"], &["0", "1"]]);
    let b = zmatrix(&[&["1", "0"], &["1", "1"]]);
    let c = zmatrix(&[&["2", "1"], &["1", "1"]]);
    let d = zmatrix(&[&["0", "-1"], &["1", "0"]]);
    let rep = irreducibility_certificate(&block_diag(&a, &c), &block_diag(&b, &d)).unwrap();
    assert_eq!(rep.det2, Some(int(0)));
    assert!(!rep.irreducible);
    let id = CycloMatrix::identity(4);
    let rep = irreducibility_certificate(&id, &id).unwrap();
    assert_eq!(rep.det1, Some(int(0)));
    assert_eq!(rep.det2, Some(int(0)));
    assert!(!rep.irreducible);
    assert!(irreducibility_certificate(&CycloMatrix::identity(3), &CycloMatrix::identity(3)).is_err());
}

#[test]
fn mu_product_spectrum_matches_the_published_cubic() {
    let m = mono(1);
    let s3 = h_fixed(m);
    let c = &m.word(s3, MU2).unwrap() * &m.word(s3, MU1).unwrap();
    let z = |s: &str| zexpr(s);
    let published = CycloPoly::from_ints(&[-1, 1]).mul(&CycloPoly::new(vec![z("-z"), z("2"), z("-2z"), z("1")]));
    let (_, dist) = match_spectrum_up_to_sixth_roots(&c, &published);
    assert!(dist < 1e-8, "distance {dist}");
    let cs = conjugate_spectrum_test(&c).unwrap();
    assert_eq!(cs.min_poly, IntPoly::from_i64(&[1, 2, 8, 5, 8, 2, 1]));
    assert!(!cs.cyclotomic);
    assert!(cs.distinct_from_conjugate);
}

#[test]
fn identity_is_not_distinct_from_its_conjugate() {
    let cs = conjugate_spectrum_test(&CycloMatrix::identity(4)).unwrap();
    assert!(!cs.distinct_from_conjugate);
    assert!(cs.gap < 1e-12);
}

#[test]
fn export_keys_every_edge() {
    let m = mono(1);
    let e = m.export();
    assert_eq!(e.len(), 2 * m.len());
    let json = serde_json::to_value(&e).unwrap();
    assert_eq!(json[0]["generator"], "h");
    assert_eq!(json[1]["generator"], "r");
    assert_eq!(json[0]["matrix"].as_array().unwrap().len(), 4);
}

#[test]
fn orbit_without_deck_cannot_be_restricted() {
    let rep = HomologyRep::from_surface(&SquareTiledSurface::torus(), 10).unwrap();
    assert!(matches!(MonodromyRep::restrict(&rep, 1), Err(Error::Parameters(_))));
    assert!(rep.check_equivariance().is_err());
    assert!(psl2z_orbit(&cover18().total, 2).is_err());
}

fn unit_strategy() -> impl Strategy<Value = CycloNum> {
    (0i64..3, any::<bool>()).prop_map(|(k, neg)| {
        let z = CycloNum::zeta_pow(k);
        if neg {
            -z
        } else {
            z
        }
    })
}

fn invertible_strategy() -> impl Strategy<Value = CycloMatrix> {
    proptest::collection::vec((-2i64..=2, -2i64..=2), 16)
        .prop_map(|v| CycloMatrix::from_fn(4, 4, |i, j| CycloNum::from_ints(v[4 * i + j].0, v[4 * i + j].1)))
        .prop_filter("invertible", |m| !m.det().unwrap().is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Certificates only depend on the representation up to a change of fiber basis and
    /// the scalar ambiguity of each generator.
    #[test]
    fn certificate_is_basis_and_scalar_invariant(
        p in invertible_strategy(),
        u in unit_strategy(),
        v in unit_strategy(),
        k in 1usize..=2,
    ) {
        let m = mono(k);
        let start = s1(m);
        let x = m.word(start, RHO1).unwrap();
        let y = m.word(start, RHO2).unwrap();
        let pi = p.inverse().unwrap();
        let x2 = (&(&pi * &x) * &p).scale(&u);
        let y2 = (&(&pi * &y) * &p).scale(&v);
        let rep = irreducibility_certificate(&x2, &y2).unwrap();
        prop_assert_eq!(rep.det1, Some(int(285)));
        prop_assert_eq!(rep.det2, Some(int(5292)));
    }
}
