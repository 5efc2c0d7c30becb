//! Smoothness and reflexivity predicates, central normals, and blow-ups.
//!
//! The blow-up of `P` at a face `F` of size `ε` adds the inequality
//! `u_F · x <= b - ε`, where `u_F` is the sum of the normals of the facets
//! containing `F` and `b` its supporting value. A monotone blow-up at a
//! codimension-`k` face of a monotone polytope always has size `k - 1`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{pair, Int, IntMatrix, Rat};
use crate::polytope::{FaceRef, Facet, Polytope};

/// A face together with a blow-up size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowUpSpec {
    pub face: FaceRef,
    pub size: Rat,
}

impl BlowUpSpec {
    pub fn new(face: FaceRef, size: Rat) -> Self {
        Self { face, size }
    }

    /// The monotone size `k - 1` for a face of codimension `k`.
    pub fn monotone(face: FaceRef) -> Self {
        let size = Rat::from_integer(Int::from(face.codim) - 1);
        Self { face, size }
    }
}

#[derive(Clone, Debug)]
pub struct BlowUpReport {
    pub result: Polytope,
    /// `P ∩ {u_F · x >= b - ε}`.
    pub excised: Polytope,
    pub new_facet_index: usize,
}

/// Simple, and at every vertex the primitive edge directions form a lattice basis.
pub fn is_smooth(p: &Polytope) -> bool {
    if !p.is_simple() {
        return false;
    }
    let n = p.dim();
    let mut dirs: Vec<Vec<Vec<Int>>> = vec![Vec::new(); p.num_vertices()];
    for e in p.edges_with_lengths() {
        let (a, b) = e.endpoints;
        let (d, _) =
            crate::lattice::primitive_direction(&crate::lattice::sub_rat(p.vertex(b), p.vertex(a)))
                .expect("distinct endpoints");
        dirs[b].push(d.iter().map(|x| -x).collect());
        dirs[a].push(d);
    }
    dirs.into_iter().all(|frame| {
        frame.len() == n
            && IntMatrix::from_columns(&frame)
                .and_then(|m| m.is_unimodular())
                .unwrap_or(false)
    })
}

/// Every facet is `u_F · x <= 1` with `u_F` primitive.
pub fn is_reflexive(p: &Polytope) -> Result<bool> {
    if !p.is_lattice() {
        return Err(Error::NotLattice);
    }
    Ok(p.facets().iter().all(|f| f.offset.is_one()))
}

pub fn is_monotone(p: &Polytope) -> bool {
    matches!(is_reflexive(p), Ok(true)) && is_smooth(p)
}

/// `u_G`: the sum of the outer normals of the facets containing `G`.
pub fn central_normal(p: &Polytope, face: &FaceRef) -> Result<Vec<Int>> {
    p.check_face(face)?;
    if face.codim == 0 {
        return Err(Error::InvalidFace(
            "the polytope itself is not a proper face".into(),
        ));
    }
    let mut u = vec![Int::zero(); p.dim()];
    for &j in &face.facet_indices {
        for (a, b) in u.iter_mut().zip(&p.facets()[j].normal) {
            *a += b;
        }
    }
    Ok(u)
}

/// `max { u · x : x ∈ P }`.
pub fn supporting_value(p: &Polytope, u: &[Int]) -> Rat {
    p.vertices()
        .iter()
        .map(|v| pair(u, v))
        .max()
        .expect("polytope has vertices")
}

/// On a monotone polytope a codim-`k` face lies on `u_G · x = k`; returns `k`.
pub fn face_level(p: &Polytope, face: &FaceRef) -> Result<usize> {
    let u = central_normal(p, face)?;
    let k = Rat::from_integer(Int::from(face.codim));
    for &i in &face.vertex_indices {
        if pair(&u, p.vertex(i)) != k {
            return Err(Error::MonotoneLevelViolated);
        }
    }
    Ok(face.codim)
}

/// Vertex form of the feasibility condition: `u_F · v < b - ε` for every
/// vertex `v` outside `F`.
pub fn feasible_by_vertices(p: &Polytope, face: &FaceRef, eps: &Rat) -> Result<bool> {
    let u = central_normal(p, face)?;
    let level = supporting_value(p, &u) - eps;
    Ok((0..p.num_vertices())
        .filter(|v| !face.contains_vertex(*v))
        .all(|v| pair(&u, p.vertex(v)) < level))
}

/// Edge form: every edge with exactly one end in `F` is longer than `ε`.
pub fn feasible_by_edges(p: &Polytope, face: &FaceRef, eps: &Rat) -> bool {
    p.edges_with_lengths().iter().all(|e| {
        let (a, b) = e.endpoints;
        face.contains_vertex(a) == face.contains_vertex(b) || &e.lattice_length > eps
    })
}

/// Whether a blow-up of size `eps` can be performed at `face`.
pub fn blow_up_feasible(p: &Polytope, face: &FaceRef, eps: &Rat) -> bool {
    if face.codim < 2 || !eps.is_positive() {
        return false;
    }
    let Ok(by_vertices) = feasible_by_vertices(p, face, eps) else {
        return false;
    };
    debug_assert!(
        !is_smooth(p) || by_vertices == feasible_by_edges(p, face, eps),
        "vertex and edge feasibility tests disagree"
    );
    by_vertices
}

/// The cutting inequality `u_F · x <= b - ε` as a facet.
fn cut_facet(p: &Polytope, spec: &BlowUpSpec) -> Result<Facet> {
    let u = central_normal(p, &spec.face)?;
    let b = supporting_value(p, &u);
    Facet::new(u, b - &spec.size)
}

/// The cut of a single feasible blow-up, validated like [`blow_up`].
pub fn blow_up_cut(p: &Polytope, spec: &BlowUpSpec) -> Result<Facet> {
    checked_cuts(p, std::slice::from_ref(spec)).map(|mut c| c.remove(0))
}

fn reversed(f: &Facet) -> Facet {
    Facet {
        normal: f.normal.iter().map(|x| -x).collect(),
        offset: -f.offset.clone(),
    }
}

/// `P ∩ {u_F · x <= b - ε}` together with the piece that was cut off.
pub fn blow_up(p: &Polytope, face: &FaceRef, eps: &Rat) -> Result<BlowUpReport> {
    p.check_face(face)?;
    if face.codim < 2 {
        return Err(Error::CodimTooSmall);
    }
    if !eps.is_positive() {
        return Err(Error::NonPositiveSize);
    }
    if !blow_up_feasible(p, face, eps) {
        return Err(Error::BlowUpTooLarge);
    }
    let cut = cut_facet(p, &BlowUpSpec::new(face.clone(), eps.clone()))?;

    let mut facets = p.facets().to_vec();
    facets.push(cut.clone());
    let result = Polytope::from_facets(p.dim(), &facets)?;
    let new_facet_index = result
        .facets()
        .iter()
        .position(|f| *f == cut)
        .ok_or_else(|| Error::Inconsistent("blow-up facet vanished".into()))?;

    let mut facets = p.facets().to_vec();
    facets.push(reversed(&cut));
    let excised = Polytope::from_facets(p.dim(), &facets)?;

    debug_assert_eq!(
        result.normalized_volume() + excised.normalized_volume(),
        p.normalized_volume()
    );
    debug_assert!(
        !is_smooth(p) || is_smooth(&result),
        "blow-up lost smoothness"
    );
    Ok(BlowUpReport {
        result,
        excised,
        new_facet_index,
    })
}

/// Edges leaving `face` all have length at least its codimension.
fn monotone_condition(p: &Polytope, face: &FaceRef) -> bool {
    let k = Rat::from_integer(Int::from(face.codim));
    p.edges_with_lengths().iter().all(|e| {
        let (a, b) = e.endpoints;
        face.contains_vertex(a) == face.contains_vertex(b) || e.lattice_length >= k
    })
}

/// Integral form of monotone feasibility: `u_F · v <= 0` for all vertices
/// outside `F`.
pub fn monotone_feasible_by_level(p: &Polytope, face: &FaceRef) -> Result<bool> {
    let u = central_normal(p, face)?;
    Ok((0..p.num_vertices())
        .filter(|v| !face.contains_vertex(*v))
        .all(|v| !pair(&u, p.vertex(v)).is_positive()))
}

/// Whether `face` admits a monotone blow-up (`P` monotone, codim at least 2).
pub fn admits_monotone_blow_up(p: &Polytope, face: &FaceRef) -> bool {
    face.codim >= 2 && monotone_condition(p, face)
}

/// The blow-up of size `k - 1` at a codim-`k` face of a monotone polytope.
pub fn monotone_blow_up(p: &Polytope, face: &FaceRef) -> Result<BlowUpReport> {
    p.check_face(face)?;
    if face.codim < 2 {
        return Err(Error::CodimTooSmall);
    }
    if !is_monotone(p) {
        return Err(Error::NotMonotone);
    }
    if !monotone_condition(p, face) {
        return Err(Error::NoMonotoneBlowUp);
    }
    let spec = BlowUpSpec::monotone(face.clone());
    let report = blow_up(p, face, &spec.size)?;
    debug_assert!(
        is_monotone(&report.result),
        "monotone blow-up is not monotone"
    );
    Ok(report)
}

/// All edges at the vertex have lattice length at least `n`.
pub fn vertex_blowup_admissible(p: &Polytope, vertex: &FaceRef) -> bool {
    let n = Rat::from_integer(Int::from(p.dim()));
    vertex.codim == p.dim()
        && vertex.vertex_indices.len() == 1
        && p.edges_at(*vertex.vertex_indices.iter().next().unwrap())
            .iter()
            .all(|(_, _, len)| *len >= n)
}

/// Whether the closed regions cut off by two cuts, `{x ∈ P : u_a · x >= b_a}`
/// and `{x ∈ P : u_c · x >= b_c}`, meet. Projects `P` to the plane along
/// `(u_a, u_c)` and tests the image polygon against the closed quadrant.
pub fn excised_regions_meet(p: &Polytope, a: &Facet, c: &Facet) -> bool {
    let pts: Vec<(Rat, Rat)> = p
        .vertices()
        .iter()
        .map(|v| {
            (
                pair(&a.normal, v) - &a.offset,
                pair(&c.normal, v) - &c.offset,
            )
        })
        .collect();
    if pts
        .iter()
        .any(|(s, t)| !s.is_negative() && !t.is_negative())
    {
        return true;
    }
    // Some edge of the projected polygon crosses the quadrant; every such
    // edge joins two projected vertices.
    for (i, (s0, t0)) in pts.iter().enumerate() {
        for (s1, t1) in &pts[i + 1..] {
            let mut lo = Rat::zero();
            let mut hi = Rat::one();
            for (x0, x1) in [(s0, s1), (t0, t1)] {
                // x0 + λ (x1 - x0) >= 0
                let d = x1 - x0;
                if d.is_zero() {
                    if x0.is_negative() {
                        hi = -Rat::one();
                    }
                } else if d.is_positive() {
                    lo = lo.max(-x0 / &d);
                } else {
                    hi = hi.min(-x0 / &d);
                }
            }
            if lo <= hi {
                return true;
            }
        }
    }
    false
}

fn checked_cuts(p: &Polytope, specs: &[BlowUpSpec]) -> Result<Vec<Facet>> {
    specs
        .iter()
        .map(|s| {
            p.check_face(&s.face)?;
            if s.face.codim < 2 {
                return Err(Error::CodimTooSmall);
            }
            if !blow_up_feasible(p, &s.face, &s.size) {
                return Err(Error::BlowUpTooLarge);
            }
            cut_facet(p, s)
        })
        .collect()
}

/// Pairwise disjointness of the excised regions. Regions that only touch
/// along their boundary count as overlapping.
pub fn blowups_disjoint(p: &Polytope, specs: &[BlowUpSpec]) -> Result<bool> {
    let cuts = checked_cuts(p, specs)?;
    for i in 0..cuts.len() {
        for j in i + 1..cuts.len() {
            if excised_regions_meet(p, &cuts[i], &cuts[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `P` with every cut of `specs` applied at once.
pub fn simultaneous_blow_up(p: &Polytope, specs: &[BlowUpSpec]) -> Result<Polytope> {
    let mut facets = p.facets().to_vec();
    facets.extend(checked_cuts(p, specs)?);
    Polytope::from_facets(p.dim(), &facets)
}

/// The blow-ups can be carried out together as independent operations:
/// the simultaneous cut has one new facet per blow-up, stays smooth, and
/// removes exactly the sum of the individual excised volumes.
pub fn blowups_globally_disjoint(p: &Polytope, specs: &[BlowUpSpec]) -> Result<bool> {
    let joint = simultaneous_blow_up(p, specs)?;
    if joint.num_facets() != p.num_facets() + specs.len() || !is_smooth(&joint) {
        return Ok(false);
    }
    let mut removed = Rat::zero();
    for s in specs {
        removed += blow_up(p, &s.face, &s.size)?.excised.normalized_volume();
    }
    Ok(joint.normalized_volume() == p.normalized_volume() - removed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{int_vec, rat, rat_vec};
    use crate::polytope::{cube, monotone_simplex};

    fn poly(dim: usize, pts: &[&[i64]]) -> Polytope {
        Polytope::hull(dim, &pts.iter().map(|p| rat_vec(p)).collect::<Vec<_>>()).unwrap()
    }

    fn vertex_at(p: &Polytope, x: &[i64]) -> FaceRef {
        let i = p.vertices().iter().position(|v| *v == rat_vec(x)).unwrap();
        p.vertex_face(i).unwrap()
    }

    #[test]
    fn smoothness() {
        assert!(is_smooth(&cube(3)));
        assert!(is_smooth(&monotone_simplex(3)));
        // at (0,1) the edge directions (0,-1),(2,-1) span index 2
        assert!(!is_smooth(&poly(2, &[&[0, 0], &[2, 0], &[0, 1]])));
        let pyramid = poly(
            3,
            &[
                &[1, 1, 0],
                &[1, -1, 0],
                &[-1, 1, 0],
                &[-1, -1, 0],
                &[0, 0, 1],
            ],
        );
        assert!(!is_smooth(&pyramid));
    }

    #[test]
    fn reflexivity() {
        assert!(is_reflexive(&cube(4)).unwrap());
        assert!(!is_reflexive(&poly(2, &[&[-1, -1], &[1, -1], &[-1, 1]])).unwrap());
        assert!(is_reflexive(&monotone_simplex(3)).unwrap());
        let half = Polytope::hull(
            2,
            &[
                vec![crate::lattice::ratio(1, 2), rat(0)],
                rat_vec(&[-1, 1]),
                rat_vec(&[-1, -1]),
            ],
        )
        .unwrap();
        assert_eq!(is_reflexive(&half), Err(Error::NotLattice));
        assert!(!is_monotone(&half));
    }

    #[test]
    fn monotonicity() {
        assert!(is_monotone(&monotone_simplex(3)));
        assert!(!is_monotone(&poly(2, &[&[0, 0], &[1, 0], &[0, 1]])));
        assert!(is_monotone(&cube(3)));
    }

    #[test]
    fn central_normals() {
        let s = monotone_simplex(3);
        assert_eq!(
            central_normal(&s, &vertex_at(&s, &[-1, -1, -1])).unwrap(),
            int_vec(&[-1, -1, -1])
        );
        let edge = s.face_from_facets(&[0, 1]).unwrap();
        assert_eq!(central_normal(&s, &edge).unwrap(), int_vec(&[-1, -1, 0]));
        let c = cube(3);
        assert_eq!(
            central_normal(&c, &vertex_at(&c, &[1, 1, 1])).unwrap(),
            int_vec(&[1, 1, 1])
        );
        let whole = c.faces(0).unwrap().pop().unwrap();
        assert!(central_normal(&c, &whole).is_err());
    }

    #[test]
    fn supporting_values() {
        let s = monotone_simplex(3);
        assert_eq!(supporting_value(&s, &int_vec(&[-1, -1, -1])), rat(3));
        assert_eq!(supporting_value(&cube(3), &int_vec(&[1, 0, 0])), rat(1));
        assert_eq!(supporting_value(&cube(3), &int_vec(&[0, 0, 0])), rat(0));
    }

    #[test]
    fn face_levels() {
        let s = monotone_simplex(3);
        for v in s.faces(3).unwrap() {
            assert_eq!(face_level(&s, &v).unwrap(), 3);
        }
        for e in s.faces(2).unwrap() {
            assert_eq!(face_level(&s, &e).unwrap(), 2);
        }
        let c = cube(3);
        for f in c.faces(1).unwrap() {
            assert_eq!(face_level(&c, &f).unwrap(), 1);
        }
        let t = poly(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(
            face_level(&t, &t.vertex_face(0).unwrap()),
            Err(Error::MonotoneLevelViolated)
        );
    }

    #[test]
    fn feasibility() {
        let s = monotone_simplex(3);
        let v = vertex_at(&s, &[-1, -1, -1]);
        assert!(blow_up_feasible(&s, &v, &rat(2)));
        assert!(!blow_up_feasible(&s, &v, &rat(4)));
        let c = cube(3);
        assert!(!blow_up_feasible(&c, &vertex_at(&c, &[1, 1, 1]), &rat(2)));
        assert!(blow_up_feasible(
            &c,
            &vertex_at(&c, &[1, 1, 1]),
            &crate::lattice::ratio(3, 2)
        ));
    }

    #[test]
    fn simplex_vertex_blow_up() {
        let s = monotone_simplex(3);
        let r = blow_up(&s, &vertex_at(&s, &[-1, -1, -1]), &rat(2)).unwrap();
        assert_eq!(r.result.num_facets(), 5);
        assert_eq!(r.result.normalized_volume(), rat(56));
        assert_eq!(r.excised.normalized_volume(), rat(8));
        assert_eq!(r.new_facet_index, 4);
        assert!(is_monotone(&r.result));
    }

    #[test]
    fn simplex_edge_blow_up() {
        let s = monotone_simplex(3);
        let r = blow_up(&s, &s.face_from_facets(&[0, 1]).unwrap(), &rat(1)).unwrap();
        assert_eq!(r.result.num_facets(), 5);
        assert_eq!(r.result.normalized_volume(), rat(54));
        assert_eq!(r.excised.normalized_volume(), rat(10));
        // new facet is a prism over the edge: a quadrilateral
        assert_eq!(r.result.facet_f_vector(r.new_facet_index), vec![4, 4]);
    }

    #[test]
    fn non_monotone_size_one_vertex_blow_up() {
        let s = monotone_simplex(3);
        let r = blow_up(&s, &vertex_at(&s, &[-1, -1, -1]), &rat(1)).unwrap();
        assert!(is_smooth(&r.result));
        let mut offsets: Vec<Rat> = r.result.facets().iter().map(|f| f.offset.clone()).collect();
        offsets.sort();
        assert_eq!(offsets, vec![rat(1), rat(1), rat(1), rat(1), rat(2)]);
        assert!(!is_reflexive(&r.result).unwrap());
    }

    #[test]
    fn blow_up_errors() {
        let s = monotone_simplex(3);
        let v = vertex_at(&s, &[-1, -1, -1]);
        assert_eq!(blow_up(&s, &v, &rat(4)).unwrap_err(), Error::BlowUpTooLarge);
        assert_eq!(
            blow_up(&s, &v, &rat(0)).unwrap_err(),
            Error::NonPositiveSize
        );
        let facet = s.faces(1).unwrap().remove(0);
        assert_eq!(
            blow_up(&s, &facet, &rat(1)).unwrap_err(),
            Error::CodimTooSmall
        );
        assert_eq!(
            Error::CodimTooSmall.to_string(),
            "codimension must be at least two"
        );
        assert_eq!(Error::BlowUpTooLarge.to_string(), "blow-up size too large");
    }

    #[test]
    fn monotone_blow_ups() {
        let s = monotone_simplex(3);
        let r = monotone_blow_up(&s, &vertex_at(&s, &[-1, -1, -1])).unwrap();
        assert_eq!(r.result.normalized_volume(), rat(56));
        assert!(is_monotone(&r.result));

        let sq = cube(2);
        let r = monotone_blow_up(&sq, &vertex_at(&sq, &[-1, -1])).unwrap();
        assert!(is_monotone(&r.result));
        assert_eq!(r.result.num_vertices(), 5);
        assert_eq!(r.result.normalized_volume(), rat(7));
        assert_eq!(
            r.result.facets()[r.new_facet_index],
            Facet::from_i64(&[-1, -1], 1).unwrap()
        );

        let c = cube(3);
        assert_eq!(
            monotone_blow_up(&c, &vertex_at(&c, &[1, 1, 1])).unwrap_err(),
            Error::NoMonotoneBlowUp
        );
        let t = poly(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(
            monotone_blow_up(&t, &t.vertex_face(0).unwrap()).unwrap_err(),
            Error::NotMonotone
        );
    }

    #[test]
    fn vertex_admissibility() {
        let s = monotone_simplex(3);
        assert!(s
            .faces(3)
            .unwrap()
            .iter()
            .all(|v| vertex_blowup_admissible(&s, v)));
        let c = cube(3);
        assert!(c
            .faces(3)
            .unwrap()
            .iter()
            .all(|v| !vertex_blowup_admissible(&c, v)));
        let sq = cube(2);
        assert!(sq
            .faces(2)
            .unwrap()
            .iter()
            .all(|v| vertex_blowup_admissible(&sq, v)));
    }

    #[test]
    fn disjointness_examples() {
        let s4 = monotone_simplex(4);
        // edges {v0,v1} and {v2,v3}: both codim 3
        let e1 = s4.face_with_vertices(&[0, 1].into()).unwrap();
        let e2 = s4.face_with_vertices(&[2, 3].into()).unwrap();
        assert_eq!((e1.codim, e2.codim), (3, 3));
        let specs = [BlowUpSpec::monotone(e1), BlowUpSpec::monotone(e2)];
        assert!(blowups_disjoint(&s4, &specs).unwrap());
        assert!(blowups_globally_disjoint(&s4, &specs).unwrap());

        let s3 = monotone_simplex(3);
        let vs = s3.faces(3).unwrap();
        let specs = [
            BlowUpSpec::monotone(vs[0].clone()),
            BlowUpSpec::monotone(vs[1].clone()),
        ];
        assert!(!blowups_disjoint(&s3, &specs).unwrap());
        assert!(!blowups_globally_disjoint(&s3, &specs).unwrap());

        let t = monotone_simplex(2);
        let specs: Vec<BlowUpSpec> = t
            .faces(2)
            .unwrap()
            .into_iter()
            .map(BlowUpSpec::monotone)
            .collect();
        assert!(blowups_disjoint(&t, &specs).unwrap());
        let hexagon = simultaneous_blow_up(&t, &specs).unwrap();
        assert!(is_monotone(&hexagon));
        assert_eq!(hexagon.normalized_volume(), rat(6));
    }

    #[test]
    fn disjointness_rejects_infeasible_specs() {
        let c = cube(3);
        let v = c.faces(3).unwrap();
        let specs = [
            BlowUpSpec::monotone(v[0].clone()),
            BlowUpSpec::monotone(v[7].clone()),
        ];
        assert_eq!(blowups_disjoint(&c, &specs), Err(Error::BlowUpTooLarge));
    }

    #[test]
    fn projection_test_matches_direct_feasibility() {
        // Cross-check the planar projection against vertex enumeration of the
        // intersection polytope for every pair of faces of the 3-simplex and cube.
        for p in [monotone_simplex(3), cube(3), monotone_simplex(2)] {
            let faces = p.blowup_candidates();
            for (i, f) in faces.iter().enumerate() {
                for g in &faces[i..] {
                    for (ef, eg) in [
                        (rat(1), rat(1)),
                        (crate::lattice::ratio(1, 2), crate::lattice::ratio(3, 2)),
                    ] {
                        if !blow_up_feasible(&p, f, &ef) || !blow_up_feasible(&p, g, &eg) {
                            continue;
                        }
                        let a = cut_facet(&p, &BlowUpSpec::new(f.clone(), ef.clone())).unwrap();
                        let c = cut_facet(&p, &BlowUpSpec::new(g.clone(), eg.clone())).unwrap();
                        let mut sys = p.facets().to_vec();
                        sys.push(reversed(&a));
                        sys.push(reversed(&c));
                        let direct = !crate::polytope::halfspace_vertices(p.dim(), &sys).is_empty();
                        assert_eq!(excised_regions_meet(&p, &a, &c), direct);
                    }
                }
            }
        }
    }
}
