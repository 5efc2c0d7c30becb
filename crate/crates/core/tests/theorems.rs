use monotone_core::catalog::{enumerate_monotone, long_edge_vertices};
use monotone_core::lattice::rat;
use monotone_core::polytope::{cube, monotone_simplex};
use monotone_core::verify::*;

#[test]
fn vertex_theorem_in_dimension_three() {
    let c = enumerate_monotone(3).unwrap();
    let r = verify_vertex_theorem(&c).unwrap();
    assert!(r.passed, "{:?}", r.counterexamples);
    assert_eq!(r.checks, 18);
    assert_eq!(r.witnesses.len(), 2);
    assert!(r.witnesses.iter().any(|w| w.ends_with("vol=64")));
    assert!(r.witnesses.iter().any(|w| w.ends_with("vol=54")));
}

#[test]
fn vertex_theorem_sampled_in_dimension_four() {
    let r = verify_vertex_theorem_sampled(4, 50, 2, 1).unwrap();
    assert!(r.passed, "{:?}", r.counterexamples);
    assert!(r.checks >= 52);
}

#[test]
fn simplex_theorem_through_dimension_six() {
    for n in 2..=6 {
        let r = verify_simplex_theorem(n).unwrap();
        assert!(r.passed, "n = {n}: {:?}", r.counterexamples);
    }
}

#[test]
fn three_disjoint_blowups_only_for_triangle() {
    let r = verify_three_blowups(6).unwrap();
    assert!(r.passed, "{:?}", r.counterexamples);
    assert_eq!(r.checks, 5);
}

#[test]
fn length_lemma_catalog_and_four_simplex() {
    for n in 1..=3 {
        let r = verify_length_lemma(&enumerate_monotone(n).unwrap()).unwrap();
        assert!(r.passed, "n = {n}: {:?}", r.counterexamples);
    }
    let r = verify_length_lemma_descendants(4, 2).unwrap();
    assert!(r.passed, "{:?}", r.counterexamples);
    assert!(r.checks > 0);
}

#[test]
fn length_examples() {
    let s = monotone_simplex(3);
    let at = long_edge_vertices(&s);
    assert_eq!(at.len(), 4);
    assert!(at.iter().all(|(_, l)| l.iter().all(|x| *x == rat(4))));
    // square: n = 2, every edge has length 2
    let sq = long_edge_vertices(&cube(2));
    assert_eq!(sq.len(), 4);
    // cube: no vertex qualifies
    assert!(long_edge_vertices(&cube(3)).is_empty());

    let [_, (_, b)] = vertex_theorem_classes(3).unwrap();
    let at = long_edge_vertices(&b);
    assert!(!at.is_empty());
    assert!(at
        .iter()
        .all(|(_, l)| l.iter().all(|x| *x == rat(3) || *x == rat(4))));
}
