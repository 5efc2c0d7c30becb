//! Machine checks of the classification results: which monotone polytopes
//! admit a vertex blow-up, when two monotone blow-ups of the simplex are
//! disjoint, and the edge-length lemma.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blowup::{
    admits_monotone_blow_up, blow_up_cut, blowups_globally_disjoint, monotone_blow_up,
    vertex_blowup_admissible, BlowUpSpec,
};
use crate::catalog::{
    length_lemma_violations, long_edge_vertices, monotone_descendants, random_descendant, Catalog,
};
use crate::equivalence::{canonical_form, CanonicalKey};
use crate::error::{Error, Result};
use crate::polytope::{monotone_simplex, FaceRef, Facet, Polytope};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub witnesses: Vec<String>,
    pub counterexamples: Vec<String>,
}

impl VerificationReport {
    fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            ..Default::default()
        }
    }

    fn fail(&mut self, msg: String) {
        self.counterexamples.push(msg);
    }

    fn finish(mut self) -> Self {
        self.passed = self.counterexamples.is_empty();
        self
    }

    /// Folds another report's checks into this one.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.checks += other.checks;
        self.witnesses.extend(other.witnesses);
        self.counterexamples.extend(other.counterexamples);
        self.passed = self.counterexamples.is_empty();
    }
}

fn describe(p: &Polytope) -> String {
    let f: Vec<String> = p.f_vector().iter().map(ToString::to_string).collect();
    format!("f=({}) vol={}", f.join(","), p.normalized_volume())
}

fn has_vertex_blowup(p: &Polytope) -> bool {
    p.faces(p.dim())
        .unwrap_or_default()
        .iter()
        .any(|v| vertex_blowup_admissible(p, v))
}

/// The two classes that admit a monotone vertex blow-up: the monotone
/// simplex and its blow-up at a codimension-two face.
pub fn vertex_theorem_classes(n: usize) -> Result<[(CanonicalKey, Polytope); 2]> {
    let s = monotone_simplex(n);
    let face = s
        .faces(2)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Inconsistent("simplex has no codimension-two face".into()))?;
    let b = monotone_blow_up(&s, &face)?.result;
    Ok([(canonical_form(&s)?, s), (canonical_form(&b)?, b)])
}

fn require_dim(what: &'static str, dim: usize, min: usize, max: usize) -> Result<()> {
    if dim < min || dim > max {
        return Err(Error::DimensionOutOfRange {
            what,
            dim,
            min,
            max,
        });
    }
    Ok(())
}

/// Over a complete catalog, the classes admitting a monotone vertex
/// blow-up are exactly the simplex and its codimension-two blow-up.
pub fn verify_vertex_theorem(c: &Catalog) -> Result<VerificationReport> {
    require_dim("vertex theorem", c.dim, 3, usize::MAX)?;
    let mut r = VerificationReport::new("vertex");
    let expected: BTreeSet<CanonicalKey> = vertex_theorem_classes(c.dim)?
        .into_iter()
        .map(|(k, _)| k)
        .collect();
    let mut found = BTreeSet::new();
    for e in &c.entries {
        r.checks += 1;
        let p = &e.polytope;
        // the edge-length test and the generic face test must agree
        for v in p.faces(p.dim())? {
            if vertex_blowup_admissible(p, &v) != admits_monotone_blow_up(p, &v) {
                r.fail(format!("admissibility tests disagree on {}", describe(p)));
            }
        }
        if has_vertex_blowup(p) {
            r.witnesses.push(describe(p));
            found.insert(e.key.clone());
        }
    }
    for k in found.difference(&expected) {
        r.fail(format!("unexpected vertex blow-up at {k}"));
    }
    for k in expected.difference(&found) {
        r.fail(format!("missing vertex blow-up at {k}"));
    }
    Ok(r.finish())
}

/// The dimension-free half of the vertex theorem on a sample: the two
/// expected classes admit a vertex blow-up, `samples` random descendants of
/// the simplex (at most `max_depth` blow-ups) outside those classes admit
/// none, and neither does any class at depth at most `max_depth`.
pub fn verify_vertex_theorem_sampled(
    n: usize,
    samples: usize,
    max_depth: usize,
    seed: u64,
) -> Result<VerificationReport> {
    require_dim("vertex theorem", n, 3, usize::MAX)?;
    let mut r = VerificationReport::new("vertex-sampled");
    let expected = vertex_theorem_classes(n)?;
    for (_, p) in &expected {
        r.checks += 1;
        if has_vertex_blowup(p) {
            r.witnesses.push(describe(p));
        } else {
            r.fail(format!("expected a vertex blow-up at {}", describe(p)));
        }
    }
    let is_expected = |k: &CanonicalKey| expected.iter().any(|(e, _)| e == k);

    let simplex = &expected[0].1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut taken = 0;
    let mut attempts = 0;
    while taken < samples && attempts < samples * 100 {
        attempts += 1;
        let q = random_descendant(&mut rng, simplex, max_depth)?;
        if is_expected(&canonical_form(&q)?) {
            continue;
        }
        taken += 1;
        r.checks += 1;
        if has_vertex_blowup(&q) {
            r.fail(format!("unexpected vertex blow-up at {}", describe(&q)));
        }
    }
    if taken < samples {
        r.fail(format!(
            "only {taken} of {samples} samples avoided the expected classes"
        ));
    }

    for (k, q, _) in monotone_descendants(simplex, max_depth)? {
        r.checks += 1;
        if has_vertex_blowup(&q) != is_expected(&k) {
            r.fail(format!("vertex blow-up mismatch at {}", describe(&q)));
        }
    }
    Ok(r.finish())
}

struct SimplexFace {
    face: FaceRef,
    cut: Facet,
}

fn simplex_faces(s: &Polytope) -> Result<Vec<SimplexFace>> {
    s.blowup_candidates()
        .into_iter()
        .map(|face| {
            if !admits_monotone_blow_up(s, &face) {
                return Err(Error::Inconsistent(
                    "simplex face without monotone blow-up".into(),
                ));
            }
            let cut = blow_up_cut(s, &BlowUpSpec::monotone(face.clone()))?;
            Ok(SimplexFace { face, cut })
        })
        .collect()
}

fn pairwise_disjoint(s: &Polytope, faces: &[&SimplexFace]) -> bool {
    faces.iter().enumerate().all(|(i, a)| {
        faces[i + 1..]
            .iter()
            .all(|b| !crate::blowup::excised_regions_meet(s, &a.cut, &b.cut))
    })
}

fn label(f: &FaceRef) -> String {
    let v: Vec<String> = f.vertex_indices.iter().map(ToString::to_string).collect();
    format!("{{{}}}", v.join(","))
}

/// Two monotone blow-ups of the monotone simplex are disjoint iff their
/// faces are disjoint with codimensions summing to `n + 1` or `n + 2`.
/// For `n <= 4` also checks, on every family of up to three pairwise
/// disjoint faces, that joint disjointness, pairwise disjointness, and
/// `k_i + k_j <= n + 2` for `i != j` coincide.
pub fn verify_simplex_theorem(n: usize) -> Result<VerificationReport> {
    require_dim("simplex theorem", n, 2, 6)?;
    let mut r = VerificationReport::new("simplex");
    let s = monotone_simplex(n);
    let faces = simplex_faces(&s)?;

    for a in &faces {
        for b in &faces {
            r.checks += 1;
            let got = pairwise_disjoint(&s, &[a, b]);
            let sum = a.face.codim + b.face.codim;
            let want = a.face.is_disjoint(&b.face) && (sum == n + 1 || sum == n + 2);
            if got != want {
                r.fail(format!(
                    "faces {} and {} (k = {}, {}): disjoint = {got}",
                    label(&a.face),
                    label(&b.face),
                    a.face.codim,
                    b.face.codim
                ));
            } else if got && r.witnesses.len() < 8 {
                r.witnesses
                    .push(format!("{} + {}", label(&a.face), label(&b.face)));
            }
        }
    }

    if n <= 4 {
        let mut families: Vec<Vec<&SimplexFace>> = Vec::new();
        for (i, a) in faces.iter().enumerate() {
            for (j, b) in faces.iter().enumerate().skip(i + 1) {
                if !a.face.is_disjoint(&b.face) {
                    continue;
                }
                families.push(vec![a, b]);
                for c in &faces[j + 1..] {
                    if a.face.is_disjoint(&c.face) && b.face.is_disjoint(&c.face) {
                        families.push(vec![a, b, c]);
                    }
                }
            }
        }
        for fam in families {
            r.checks += 1;
            let pairwise = pairwise_disjoint(&s, &fam);
            let by_codim = fam.iter().enumerate().all(|(i, a)| {
                fam[i + 1..]
                    .iter()
                    .all(|b| a.face.codim + b.face.codim <= n + 2)
            });
            let specs: Vec<BlowUpSpec> = fam
                .iter()
                .map(|f| BlowUpSpec::monotone(f.face.clone()))
                .collect();
            let global = blowups_globally_disjoint(&s, &specs)?;
            if pairwise != by_codim || pairwise != global {
                let names: Vec<String> = fam.iter().map(|f| label(&f.face)).collect();
                r.fail(format!(
                    "family {}: joint {global}, pairwise {pairwise}, codimension bound {by_codim}",
                    names.join(" ")
                ));
            }
        }
    }
    Ok(r.finish())
}

/// Families of three pairwise disjoint monotone blow-ups of the monotone
/// `n`-simplex, as vertex-index sets of the faces.
pub fn disjoint_triples(n: usize) -> Result<Vec<[BTreeSet<usize>; 3]>> {
    let s = monotone_simplex(n);
    let faces = simplex_faces(&s)?;
    let mut out = Vec::new();
    for (i, a) in faces.iter().enumerate() {
        for (j, b) in faces.iter().enumerate().skip(i + 1) {
            if !pairwise_disjoint(&s, &[a, b]) {
                continue;
            }
            for c in &faces[j + 1..] {
                if pairwise_disjoint(&s, &[a, c]) && pairwise_disjoint(&s, &[b, c]) {
                    out.push([
                        a.face.vertex_indices.clone(),
                        b.face.vertex_indices.clone(),
                        c.face.vertex_indices.clone(),
                    ]);
                }
            }
        }
    }
    Ok(out)
}

/// Only the triangle admits three disjoint monotone blow-ups, at its
/// three vertices, and these can be carried out simultaneously.
pub fn verify_three_blowups(max_n: usize) -> Result<VerificationReport> {
    require_dim("three blow-ups", max_n, 2, 6)?;
    let mut r = VerificationReport::new("disjoint-count");
    for n in 2..=max_n {
        r.checks += 1;
        let triples = disjoint_triples(n)?;
        if n == 2 {
            let verts: [BTreeSet<usize>; 3] = [0, 1, 2].map(|i| BTreeSet::from([i]));
            if triples != vec![verts] {
                r.fail(format!(
                    "n = 2: expected the three vertices, found {} triples",
                    triples.len()
                ));
                continue;
            }
            let s = monotone_simplex(2);
            let specs: Vec<BlowUpSpec> = (0..3)
                .map(|i| s.vertex_face(i).map(BlowUpSpec::monotone))
                .collect::<Result<_>>()?;
            if blowups_globally_disjoint(&s, &specs)? {
                r.witnesses.push("n = 2: the three vertices".into());
            } else {
                r.fail("n = 2: the three vertex blow-ups are not jointly disjoint".into());
            }
        } else if let Some(t) = triples.first() {
            r.fail(format!("n = {n}: disjoint triple {t:?}"));
        }
    }
    Ok(r.finish())
}

fn check_lengths(r: &mut VerificationReport, p: &Polytope) {
    for (v, lens) in long_edge_vertices(p) {
        r.checks += 1;
        if r.witnesses.len() < 8 {
            let l: Vec<String> = lens.iter().map(ToString::to_string).collect();
            r.witnesses
                .push(format!("{} vertex {v}: {}", describe(p), l.join(",")));
        }
    }
    for (v, lens) in length_lemma_violations(p) {
        let l: Vec<String> = lens.iter().map(ToString::to_string).collect();
        r.fail(format!(
            "{} vertex {v}: lengths {}",
            describe(p),
            l.join(",")
        ));
    }
}

/// At a vertex whose edges all have length at least `n`, every edge has
/// length `n` or `n + 1`.
pub fn verify_length_lemma(c: &Catalog) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("lengths");
    for e in &c.entries {
        check_lengths(&mut r, &e.polytope);
    }
    Ok(r.finish())
}

/// The length lemma on every class reachable from the monotone `n`-simplex
/// by at most `depth` monotone blow-ups.
pub fn verify_length_lemma_descendants(n: usize, depth: usize) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("lengths-descendants");
    for (_, q, _) in monotone_descendants(&monotone_simplex(n), depth)? {
        check_lengths(&mut r, &q);
    }
    Ok(r.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::enumerate_monotone;

    #[test]
    fn simplex_theorem_small() {
        for n in 2..=4 {
            let r = verify_simplex_theorem(n).unwrap();
            assert!(r.passed, "{:?}", r.counterexamples);
        }
        assert!(matches!(
            verify_simplex_theorem(7),
            Err(Error::DimensionOutOfRange { dim: 7, .. })
        ));
    }

    #[test]
    fn triangle_has_the_only_triple() {
        assert_eq!(disjoint_triples(2).unwrap().len(), 1);
        assert!(disjoint_triples(3).unwrap().is_empty());
    }

    #[test]
    fn length_lemma_on_polygons() {
        let r = verify_length_lemma(&enumerate_monotone(2).unwrap()).unwrap();
        assert!(r.passed);
        assert!(r.checks > 0);
    }

    #[test]
    fn vertex_theorem_needs_dimension_three() {
        let c = enumerate_monotone(2).unwrap();
        assert!(verify_vertex_theorem(&c).is_err());
    }
}
