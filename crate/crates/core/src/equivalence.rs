//! Unimodular canonical forms for smooth lattice polytopes.
//!
//! A lattice equivalence sends every pair (vertex, ordered edge frame) to
//! another such pair, and at a smooth vertex the primitive edge directions
//! form a basis of Z^n. Moving each frame to the standard basis and keeping
//! the lexicographically smallest sorted vertex list therefore gives a
//! complete invariant.

use std::cmp::Ordering;
use std::fmt;

use crate::blowup::is_smooth;
use crate::error::{Error, Result};
use crate::lattice::{to_rat_vec, Int, IntMatrix};
use crate::polytope::Polytope;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalKey {
    dim: usize,
    vertices: Vec<Vec<Int>>,
}

impl CanonicalKey {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The canonical representative's vertices, sorted lexicographically.
    pub fn vertices(&self) -> &[Vec<Int>] {
        &self.vertices
    }

    pub fn to_polytope(&self) -> Result<Polytope> {
        let pts: Vec<_> = self.vertices.iter().map(|v| to_rat_vec(v)).collect();
        Polytope::hull(self.dim, &pts)
    }
}

impl Ord for CanonicalKey {
    /// Vertex count first, then the flattened coordinate sequence.
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then(self.vertices.len().cmp(&other.vertices.len()))
            .then_with(|| self.vertices.cmp(&other.vertices))
    }
}

impl PartialOrd for CanonicalKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let c: Vec<String> = v.iter().map(ToString::to_string).collect();
            write!(f, "({})", c.join(","))?;
        }
        Ok(())
    }
}

/// The canonical key plus the affine map `x ↦ transform · (x - base)`
/// realizing it.
#[derive(Clone, Debug)]
pub struct CanonicalFrame {
    pub key: CanonicalKey,
    pub transform: IntMatrix,
    pub base: Vec<Int>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Minimizes over all (vertex, frame ordering) pairs. Polytopes with the
/// origin in their interior are only moved by GL(n,Z); otherwise each frame
/// is also translated to its vertex, which makes the key invariant under
/// integer translations as well.
pub fn canonical_frame(p: &Polytope) -> Result<CanonicalFrame> {
    let verts = p.integer_vertices()?;
    if !is_smooth(p) {
        return Err(Error::NotSmooth);
    }
    let n = p.dim();
    let affine = !p.origin_in_interior();
    let mut frames: Vec<Vec<Vec<Int>>> = vec![Vec::new(); verts.len()];
    for e in p.edges_with_lengths() {
        let (a, b) = e.endpoints;
        let d: Vec<Int> = verts[b].iter().zip(&verts[a]).map(|(x, y)| x - y).collect();
        let (dir, _) = crate::lattice::primitive_direction(&to_rat_vec(&d))?;
        frames[b].push(dir.iter().map(|x| -x).collect());
        frames[a].push(dir);
    }
    let perms = permutations(n);
    let zero = vec![Int::from(0); n];

    let mut best: Option<CanonicalFrame> = None;
    for (vi, frame) in frames.iter().enumerate() {
        let inv = IntMatrix::from_columns(frame)?.inverse_unimodular()?;
        let base = if affine {
            verts[vi].clone()
        } else {
            zero.clone()
        };
        let images: Vec<Vec<Int>> = verts
            .iter()
            .map(|x| {
                let shifted: Vec<Int> = x.iter().zip(&base).map(|(a, b)| a - b).collect();
                inv.apply(&shifted)
            })
            .collect();
        for perm in &perms {
            let mut cand: Vec<Vec<Int>> = images
                .iter()
                .map(|y| perm.iter().map(|&j| y[j].clone()).collect())
                .collect();
            cand.sort();
            let better = match &best {
                None => true,
                Some(b) => cand < b.key.vertices,
            };
            if better {
                let rows = perm.iter().map(|&j| inv.row(j).to_vec()).collect();
                best = Some(CanonicalFrame {
                    key: CanonicalKey {
                        dim: n,
                        vertices: cand,
                    },
                    transform: IntMatrix::from_rows(rows)?,
                    base: base.clone(),
                });
            }
        }
    }
    best.ok_or(Error::NotSmooth)
}

pub fn canonical_form(p: &Polytope) -> Result<CanonicalKey> {
    canonical_frame(p).map(|f| f.key)
}

pub fn are_equivalent(p: &Polytope, q: &Polytope) -> Result<bool> {
    if p.dim() != q.dim() || p.num_vertices() != q.num_vertices() {
        // still validate both inputs
        canonical_form(p)?;
        canonical_form(q)?;
        return Ok(false);
    }
    Ok(canonical_form(p)? == canonical_form(q)?)
}

/// A unimodular `A` and integer `t` with `A·P + t = Q`, if one exists.
pub fn equivalence_witness(p: &Polytope, q: &Polytope) -> Result<Option<(IntMatrix, Vec<Int>)>> {
    let fp = canonical_frame(p)?;
    let fq = canonical_frame(q)?;
    if fp.key != fq.key {
        return Ok(None);
    }
    // T_q (y - b_q) = T_p (x - b_p)
    let a = fq.transform.inverse_unimodular()?.mul(&fp.transform)?;
    let ab = a.apply(&fp.base);
    let t = fq.base.iter().zip(&ab).map(|(x, y)| x - y).collect();
    Ok(Some((a, t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::monotone_blow_up;
    use crate::lattice::{random_unimodular, rat_vec};
    use crate::polytope::{cube, monotone_simplex};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn blown_triangle() -> Polytope {
        let t = monotone_simplex(2);
        monotone_blow_up(&t, &t.vertex_face(0).unwrap())
            .unwrap()
            .result
    }

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn invariant_under_unimodular_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [cube(3), monotone_simplex(3), blown_triangle()] {
            let key = canonical_form(&p).unwrap();
            for _ in 0..20 {
                let a = random_unimodular(&mut rng, p.dim(), 8);
                assert_eq!(canonical_form(&p.transform(&a).unwrap()).unwrap(), key);
            }
        }
    }

    #[test]
    fn permuted_triangle_has_same_key() {
        let t = monotone_simplex(2);
        let swap = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(
            canonical_form(&t).unwrap(),
            canonical_form(&t.transform(&swap).unwrap()).unwrap()
        );
    }

    #[test]
    fn volume_eight_polygons_differ() {
        let sq = cube(2);
        let q = blown_triangle();
        assert_eq!(sq.normalized_volume(), q.normalized_volume());
        let lengths = |p: &Polytope| {
            let mut l: Vec<_> = p
                .edges_with_lengths()
                .into_iter()
                .map(|e| e.lattice_length)
                .collect();
            l.sort();
            l
        };
        assert_eq!(lengths(&sq), rat_vec(&[2, 2, 2, 2]));
        assert_eq!(lengths(&q), rat_vec(&[1, 2, 2, 3]));
        assert_ne!(canonical_form(&sq).unwrap(), canonical_form(&q).unwrap());
        assert!(!are_equivalent(&sq, &q).unwrap());
    }

    #[test]
    fn sheared_cube_is_equivalent() {
        let a = IntMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        let c = cube(3);
        let sheared = c.transform(&a).unwrap();
        assert!(are_equivalent(&c, &sheared).unwrap());
        assert!(!are_equivalent(&monotone_simplex(3), &c).unwrap());
        let (w, t) = equivalence_witness(&c, &sheared).unwrap().unwrap();
        assert!(w.is_unimodular().unwrap());
        let mapped: BTreeSet<_> = c
            .vertices()
            .iter()
            .map(|v| {
                w.apply_rat(v)
                    .into_iter()
                    .zip(&t)
                    .map(|(x, s)| x + crate::lattice::Rat::from_integer(s.clone()))
                    .collect::<Vec<_>>()
            })
            .collect();
        let target: BTreeSet<_> = sheared.vertices().iter().cloned().collect();
        assert_eq!(mapped, target);
    }

    #[test]
    fn translated_polytopes_share_a_key() {
        let c = cube(2).translate(&rat_vec(&[1, 1])).unwrap();
        let d = cube(2).translate(&rat_vec(&[-4, 9])).unwrap();
        assert!(are_equivalent(&c, &d).unwrap());
        assert_ne!(
            canonical_form(&c).unwrap(),
            canonical_form(&cube(2)).unwrap()
        );
    }

    #[test]
    fn rejects_non_smooth() {
        let t = Polytope::hull(2, &[rat_vec(&[0, 0]), rat_vec(&[2, 0]), rat_vec(&[0, 1])]).unwrap();
        assert_eq!(canonical_form(&t), Err(Error::NotSmooth));
        assert_eq!(
            Error::NotSmooth.to_string(),
            "canonical form requires a smooth polytope"
        );
    }

    #[test]
    fn key_round_trips_through_hull() {
        let key = canonical_form(&monotone_simplex(3)).unwrap();
        let p = key.to_polytope().unwrap();
        assert_eq!(canonical_form(&p).unwrap(), key);
    }
}
