//! Full-dimensional rational polytopes with both representations kept in sync.
//!
//! A [`Polytope`] stores its vertices, its irredundant facet inequalities
//! `u_F · x <= b_F` (with `u_F` primitive), and the vertex–facet incidence
//! matrix. Everything combinatorial (faces, edges, f-vector, triangulations)
//! is derived from the incidences.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    affine_rank, gcd_all, kernel, pair, primitive_direction, rank, solve, sub_rat, to_int_vec,
    to_rat_vec, Int, IntMatrix, Rat, RatMatrix,
};

/// A facet inequality `normal · x <= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<Int>,
    pub offset: Rat,
}

impl Facet {
    /// Builds `normal · x <= offset`, rescaling so the normal is primitive.
    pub fn new(normal: Vec<Int>, offset: Rat) -> Result<Self> {
        let g = gcd_all(&normal);
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        let normal = normal.iter().map(|x| x / &g).collect();
        let offset = offset / Rat::from_integer(g);
        Ok(Self { normal, offset })
    }

    pub fn from_i64(normal: &[i64], offset: i64) -> Result<Self> {
        Self::new(
            normal.iter().map(|&x| Int::from(x)).collect(),
            Rat::from_integer(Int::from(offset)),
        )
    }

    /// `offset - normal · x`; nonnegative exactly on the half-space.
    pub fn slack(&self, x: &[Rat]) -> Rat {
        &self.offset - pair(&self.normal, x)
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n: Vec<String> = self.normal.iter().map(ToString::to_string).collect();
        write!(f, "({})·x <= {}", n.join(","), self.offset)
    }
}

/// A nonempty face, addressed by the (maximal) set of facets containing it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceRef {
    pub facet_indices: BTreeSet<usize>,
    pub vertex_indices: BTreeSet<usize>,
    pub codim: usize,
}

impl FaceRef {
    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertex_indices.contains(&v)
    }

    pub fn is_disjoint(&self, other: &FaceRef) -> bool {
        self.vertex_indices.is_disjoint(&other.vertex_indices)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub endpoints: (usize, usize),
    pub lattice_length: Rat,
}

impl Edge {
    pub fn other(&self, v: usize) -> Option<usize> {
        match self.endpoints {
            (a, b) if a == v => Some(b),
            (a, b) if b == v => Some(a),
            _ => None,
        }
    }
}

#[derive(Clone)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<Rat>>,
    facets: Vec<Facet>,
    incidence: Vec<Vec<bool>>,
    faces: OnceLock<Vec<FaceRef>>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices && self.facets == other.facets
    }
}

impl Eq for Polytope {}

impl fmt::Debug for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Polytope")
            .field("dim", &self.dim)
            .field("vertices", &DisplayPoints(&self.vertices))
            .field(
                "facets",
                &self
                    .facets
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

struct DisplayPoints<'a>(&'a [Vec<Rat>]);

impl fmt::Debug for DisplayPoints<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.0.iter().map(|p| {
                let c: Vec<String> = p.iter().map(ToString::to_string).collect();
                format!("({})", c.join(","))
            }))
            .finish()
    }
}

fn check_dims<'a>(dim: usize, vs: impl IntoIterator<Item = &'a [Rat]>) -> Result<()> {
    for v in vs {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.len(),
            });
        }
    }
    Ok(())
}

/// Integer normal to the hyperplane through `n` affinely independent points
/// of R^n, or `None` if they are dependent.
fn hyperplane_normal(points: &[&[Rat]]) -> Option<Vec<Int>> {
    let n = points[0].len();
    let diffs: Vec<Vec<Rat>> = points[1..].iter().map(|p| sub_rat(p, points[0])).collect();
    let mut normal = Vec::with_capacity(n);
    for j in 0..n {
        let minor: Vec<Vec<Rat>> = diffs
            .iter()
            .map(|d| {
                d.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let d = RatMatrix::from_rows(minor)
            .and_then(|m| m.det())
            .unwrap_or_else(|_| Rat::from_integer(Int::from(1)));
        normal.push(if j % 2 == 0 { d } else { -d });
    }
    primitive_direction(&normal).ok().map(|(dir, _)| dir)
}

/// Visits every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All points where `dim` linearly independent constraints are tight and
/// every constraint holds. For a bounded feasible region these are exactly
/// its vertices, and the region is empty iff none exist.
pub(crate) fn halfspace_vertices(dim: usize, facets: &[Facet]) -> Vec<Vec<Rat>> {
    let rows: Vec<Vec<Rat>> = facets.iter().map(|f| to_rat_vec(&f.normal)).collect();
    let mut found = BTreeSet::new();
    for_each_subset(facets.len(), dim, |sub| {
        let a: Vec<Vec<Rat>> = sub.iter().map(|&i| rows[i].clone()).collect();
        let b: Vec<Rat> = sub.iter().map(|&i| facets[i].offset.clone()).collect();
        if let Some(x) = solve(&a, &b) {
            if !found.contains(&x) && facets.iter().all(|f| !f.slack(&x).is_negative()) {
                found.insert(x);
            }
        }
    });
    found.into_iter().collect()
}

/// Whether `{x : u·x <= 0 for all u}` contains a nonzero vector.
fn has_recession(dim: usize, normals: &[Vec<Rat>]) -> bool {
    if rank(normals) < dim {
        return true;
    }
    let mut unbounded = false;
    for_each_subset(normals.len(), dim - 1, |sub| {
        if unbounded {
            return;
        }
        let rows: Vec<Vec<Rat>> = sub.iter().map(|&i| normals[i].clone()).collect();
        let k = kernel(&rows, dim);
        if k.len() != 1 {
            return;
        }
        for sign in [1, -1] {
            let d: Vec<Rat> = k[0]
                .iter()
                .map(|x| x * Rat::from_integer(Int::from(sign)))
                .collect();
            let dots = normals.iter().map(|u| crate::lattice::dot_rat(u, &d));
            if dots.into_iter().all(|v| !v.is_positive()) {
                unbounded = true;
            }
        }
    });
    unbounded
}

/// Feasibility of a system whose normals do not span R^n: intersect with
/// the row space and look for a vertex there.
fn lineality_feasible(dim: usize, facets: &[Facet], normals: &[Vec<Rat>]) -> bool {
    let ker = kernel(normals, dim);
    let r = dim - ker.len();
    let mut feasible = false;
    for_each_subset(facets.len(), r, |sub| {
        if feasible {
            return;
        }
        let mut a: Vec<Vec<Rat>> = sub.iter().map(|&i| normals[i].clone()).collect();
        let mut b: Vec<Rat> = sub.iter().map(|&i| facets[i].offset.clone()).collect();
        for k in &ker {
            a.push(k.clone());
            b.push(Rat::zero());
        }
        if let Some(x) = solve(&a, &b) {
            feasible = facets.iter().all(|f| !f.slack(&x).is_negative());
        }
    });
    feasible
}

impl Polytope {
    /// Assembles a polytope from matching V- and H-representations and checks
    /// every consistency invariant.
    #[allow(clippy::needless_range_loop)]
    pub fn from_parts(dim: usize, vertices: Vec<Vec<Rat>>, facets: Vec<Facet>) -> Result<Self> {
        check_dims(dim, vertices.iter().map(Vec::as_slice))?;
        for f in &facets {
            if f.normal.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: f.normal.len(),
                });
            }
        }
        let refs: Vec<&[Rat]> = vertices.iter().map(Vec::as_slice).collect();
        if vertices.is_empty() || affine_rank(&refs) != dim {
            return Err(Error::DegenerateInput);
        }
        let mut incidence = vec![vec![false; facets.len()]; vertices.len()];
        for (i, v) in vertices.iter().enumerate() {
            for (j, f) in facets.iter().enumerate() {
                let s = f.slack(v);
                if s.is_negative() {
                    return Err(Error::Inconsistent(format!(
                        "vertex {i} violates facet {j}"
                    )));
                }
                incidence[i][j] = s.is_zero();
            }
        }
        for j in 0..facets.len() {
            let on: Vec<&[Rat]> = (0..vertices.len())
                .filter(|&i| incidence[i][j])
                .map(|i| vertices[i].as_slice())
                .collect();
            if on.len() < dim || affine_rank(&on) + 1 != dim {
                return Err(Error::Inconsistent(format!("facet {j} is redundant")));
            }
        }
        for i in 0..vertices.len() {
            let normals: Vec<Vec<Rat>> = (0..facets.len())
                .filter(|&j| incidence[i][j])
                .map(|j| to_rat_vec(&facets[j].normal))
                .collect();
            if rank(&normals) != dim {
                return Err(Error::Inconsistent(format!("point {i} is not a vertex")));
            }
        }
        Ok(Self {
            dim,
            vertices,
            facets,
            incidence,
            faces: OnceLock::new(),
        })
    }

    /// Convex hull of a point set. Facets come out sorted by normal; points
    /// that are not vertices are dropped and the remaining ones keep their
    /// input order.
    pub fn hull(dim: usize, points: &[Vec<Rat>]) -> Result<Self> {
        check_dims(dim, points.iter().map(Vec::as_slice))?;
        let mut seen = HashSet::new();
        let pts: Vec<Vec<Rat>> = points
            .iter()
            .filter(|p| seen.insert((*p).clone()))
            .cloned()
            .collect();
        let refs: Vec<&[Rat]> = pts.iter().map(Vec::as_slice).collect();
        if dim == 0 || pts.is_empty() || affine_rank(&refs) != dim {
            return Err(Error::DegenerateInput);
        }

        let mut facets: Vec<(Facet, BTreeSet<usize>)> = Vec::new();
        for_each_subset(pts.len(), dim, |sub| {
            if facets
                .iter()
                .any(|(_, on)| sub.iter().all(|i| on.contains(i)))
            {
                return;
            }
            let chosen: Vec<&[Rat]> = sub.iter().map(|&i| refs[i]).collect();
            let Some(normal) = hyperplane_normal(&chosen) else {
                return;
            };
            let offset = pair(&normal, chosen[0]);
            let mut above = false;
            let mut below = false;
            let mut on = BTreeSet::new();
            for (i, p) in refs.iter().enumerate() {
                let s = pair(&normal, p) - &offset;
                if s.is_positive() {
                    above = true;
                } else if s.is_negative() {
                    below = true;
                } else {
                    on.insert(i);
                }
                if above && below {
                    return;
                }
            }
            let facet = if above {
                Facet {
                    normal: normal.iter().map(|x| -x).collect(),
                    offset: -offset,
                }
            } else {
                Facet { normal, offset }
            };
            facets.push((facet, on));
        });
        let mut facets: Vec<Facet> = facets.into_iter().map(|(f, _)| f).collect();
        facets.sort();

        let vertices: Vec<Vec<Rat>> = pts
            .into_iter()
            .filter(|p| {
                let tight: Vec<Vec<Rat>> = facets
                    .iter()
                    .filter(|f| f.slack(p).is_zero())
                    .map(|f| to_rat_vec(&f.normal))
                    .collect();
                rank(&tight) == dim
            })
            .collect();
        Self::from_parts(dim, vertices, facets)
    }

    /// Polytope `{x : u·x <= b}` from a list of inequalities. Redundant
    /// inequalities are dropped; the surviving facets keep their relative
    /// order. Vertices come out in lexicographic order.
    pub fn from_facets(dim: usize, facets: &[Facet]) -> Result<Self> {
        let mut normalized: Vec<Facet> = Vec::with_capacity(facets.len());
        for f in facets {
            if f.normal.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: f.normal.len(),
                });
            }
            let f = Facet::new(f.normal.clone(), f.offset.clone())?;
            if !normalized.contains(&f) {
                normalized.push(f);
            }
        }
        if dim == 0 {
            return Err(Error::Degenerate);
        }
        let normals: Vec<Vec<Rat>> = normalized.iter().map(|f| to_rat_vec(&f.normal)).collect();
        if rank(&normals) < dim {
            return Err(if lineality_feasible(dim, &normalized, &normals) {
                Error::Unbounded
            } else {
                Error::Degenerate
            });
        }
        let vertices = halfspace_vertices(dim, &normalized);
        if vertices.is_empty() {
            return Err(Error::Degenerate);
        }
        if has_recession(dim, &normals) {
            return Err(Error::Unbounded);
        }
        let refs: Vec<&[Rat]> = vertices.iter().map(Vec::as_slice).collect();
        if affine_rank(&refs) != dim {
            return Err(Error::Degenerate);
        }
        let kept: Vec<Facet> = normalized
            .into_iter()
            .filter(|f| {
                let on: Vec<&[Rat]> = refs
                    .iter()
                    .copied()
                    .filter(|v| f.slack(v).is_zero())
                    .collect();
                on.len() >= dim && affine_rank(&on) + 1 == dim
            })
            .collect();
        Self::from_parts(dim, vertices, kept)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &[Rat] {
        &self.vertices[i]
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn incidence(&self) -> &[Vec<bool>] {
        &self.incidence
    }

    pub fn is_incident(&self, vertex: usize, facet: usize) -> bool {
        self.incidence[vertex][facet]
    }

    /// All vertex coordinates are integers.
    pub fn is_lattice(&self) -> bool {
        self.vertices.iter().flatten().all(|x| x.is_integer())
    }

    pub fn integer_vertices(&self) -> Result<Vec<Vec<Int>>> {
        self.vertices
            .iter()
            .map(|v| to_int_vec(v).ok_or(Error::NotLattice))
            .collect()
    }

    pub fn origin_in_interior(&self) -> bool {
        self.facets.iter().all(|f| f.offset.is_positive())
    }

    /// Image under `x ↦ A x` for unimodular `A`. Facet order is kept.
    pub fn transform(&self, a: &IntMatrix) -> Result<Self> {
        if a.nrows() != self.dim || !a.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: a.nrows(),
            });
        }
        // u·x <= b  becomes  (A^{-T} u)·y <= b
        let inv_t = a.inverse_unimodular()?.transpose();
        let vertices = self.vertices.iter().map(|v| a.apply_rat(v)).collect();
        let facets = self
            .facets
            .iter()
            .map(|f| Facet {
                normal: inv_t.apply(&f.normal),
                offset: f.offset.clone(),
            })
            .collect();
        Self::from_parts(self.dim, vertices, facets)
    }

    pub fn translate(&self, t: &[Rat]) -> Result<Self> {
        if t.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: t.len(),
            });
        }
        let vertices = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect())
            .collect();
        let facets = self
            .facets
            .iter()
            .map(|f| Facet {
                normal: f.normal.clone(),
                offset: &f.offset + pair(&f.normal, t),
            })
            .collect();
        Self::from_parts(self.dim, vertices, facets)
    }

    /// Every nonempty face, including the polytope itself (codim 0),
    /// ordered by codimension and then facet set.
    pub fn all_faces(&self) -> &[FaceRef] {
        self.faces.get_or_init(|| self.compute_faces())
    }

    fn compute_faces(&self) -> Vec<FaceRef> {
        let nv = self.vertices.len();
        let facet_sets: Vec<Vec<usize>> = (0..self.facets.len())
            .map(|j| (0..nv).filter(|&i| self.incidence[i][j]).collect())
            .collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        seen.insert((0..nv).collect());
        let mut frontier: Vec<Vec<usize>> = Vec::new();
        for s in &facet_sets {
            if seen.insert(s.clone()) {
                frontier.push(s.clone());
            }
        }
        while let Some(set) = frontier.pop() {
            for fs in &facet_sets {
                let inter: Vec<usize> = set
                    .iter()
                    .copied()
                    .filter(|i| fs.binary_search(i).is_ok())
                    .collect();
                if !inter.is_empty() && inter.len() < set.len() && seen.insert(inter.clone()) {
                    frontier.push(inter);
                }
            }
        }
        let mut faces: Vec<FaceRef> = seen
            .into_iter()
            .map(|vs| {
                let facet_indices = (0..self.facets.len())
                    .filter(|&j| vs.iter().all(|&i| self.incidence[i][j]))
                    .collect();
                let pts: Vec<&[Rat]> = vs.iter().map(|&i| self.vertices[i].as_slice()).collect();
                FaceRef {
                    facet_indices,
                    codim: self.dim - affine_rank(&pts),
                    vertex_indices: vs.into_iter().collect(),
                }
            })
            .collect();
        faces.sort_by(|a, b| {
            (a.codim, &a.facet_indices, &a.vertex_indices).cmp(&(
                b.codim,
                &b.facet_indices,
                &b.vertex_indices,
            ))
        });
        faces
    }

    /// Faces of the given codimension; codim `n` yields vertices and codim 1
    /// yields facets.
    pub fn faces(&self, codim: usize) -> Result<Vec<FaceRef>> {
        if codim > self.dim {
            return Err(Error::CodimOutOfRange {
                codim,
                dim: self.dim,
            });
        }
        Ok(self
            .all_faces()
            .iter()
            .filter(|f| f.codim == codim)
            .cloned()
            .collect())
    }

    /// Proper faces with codimension at least two.
    pub fn blowup_candidates(&self) -> Vec<FaceRef> {
        self.all_faces()
            .iter()
            .filter(|f| f.codim >= 2)
            .cloned()
            .collect()
    }

    /// The face cut out by the given facets (which need not be maximal).
    pub fn face_from_facets(&self, facet_indices: &[usize]) -> Result<FaceRef> {
        if facet_indices.is_empty() {
            return Err(Error::InvalidFace("empty facet set".into()));
        }
        if let Some(&j) = facet_indices.iter().find(|&&j| j >= self.facets.len()) {
            return Err(Error::InvalidFace(format!("no facet with index {j}")));
        }
        let vs: BTreeSet<usize> = (0..self.vertices.len())
            .filter(|&i| facet_indices.iter().all(|&j| self.incidence[i][j]))
            .collect();
        self.face_with_vertices(&vs)
            .ok_or_else(|| Error::InvalidFace(format!("facets {facet_indices:?} do not meet")))
    }

    pub fn vertex_face(&self, vertex: usize) -> Result<FaceRef> {
        if vertex >= self.vertices.len() {
            return Err(Error::InvalidFace(format!("no vertex with index {vertex}")));
        }
        Ok(self
            .face_with_vertices(&BTreeSet::from([vertex]))
            .expect("every vertex is a face"))
    }

    /// Looks up the face whose vertex set is exactly `vs`.
    pub fn face_with_vertices(&self, vs: &BTreeSet<usize>) -> Option<FaceRef> {
        self.all_faces()
            .iter()
            .find(|f| &f.vertex_indices == vs)
            .cloned()
    }

    /// Validates a face handed in from outside against this polytope.
    pub fn check_face(&self, face: &FaceRef) -> Result<()> {
        match self.face_with_vertices(&face.vertex_indices) {
            Some(f) if f == *face => Ok(()),
            _ => Err(Error::InvalidFace(format!(
                "{:?} is not a face of this polytope",
                face.facet_indices
            ))),
        }
    }

    pub fn edges_with_lengths(&self) -> Vec<Edge> {
        self.all_faces()
            .iter()
            .filter(|f| f.codim + 1 == self.dim && f.vertex_indices.len() == 2)
            .map(|f| {
                let mut it = f.vertex_indices.iter();
                let (a, b) = (*it.next().unwrap(), *it.next().unwrap());
                let (_, len) = primitive_direction(&sub_rat(&self.vertices[b], &self.vertices[a]))
                    .expect("distinct endpoints");
                Edge {
                    endpoints: (a, b),
                    lattice_length: len,
                }
            })
            .collect()
    }

    /// Edges incident to a vertex, as (neighbor, primitive direction, length).
    pub fn edges_at(&self, vertex: usize) -> Vec<(usize, Vec<Int>, Rat)> {
        self.edges_with_lengths()
            .into_iter()
            .filter_map(|e| e.other(vertex))
            .map(|w| {
                let (dir, len) =
                    primitive_direction(&sub_rat(&self.vertices[w], &self.vertices[vertex]))
                        .expect("distinct endpoints");
                (w, dir, len)
            })
            .collect()
    }

    /// `(f_0, …, f_{n-1})`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim];
        for face in self.all_faces() {
            if face.codim > 0 {
                f[self.dim - face.codim] += 1;
            }
        }
        f
    }

    /// f-vector of one facet viewed as an (n-1)-polytope.
    pub fn facet_f_vector(&self, facet: usize) -> Vec<usize> {
        let mut f = vec![0; self.dim - 1];
        for face in self.all_faces() {
            if face.codim > 1 && face.facet_indices.contains(&facet) {
                f[self.dim - face.codim] += 1;
            }
        }
        f
    }

    pub fn is_simple(&self) -> bool {
        self.incidence
            .iter()
            .all(|row| row.iter().filter(|&&b| b).count() == self.dim)
    }

    /// `n!` times the Euclidean volume, via a pulling triangulation.
    pub fn normalized_volume(&self) -> Rat {
        let faces = self.all_faces();
        let mut memo: HashMap<usize, Vec<Vec<usize>>> = HashMap::new();
        let top = faces
            .iter()
            .position(|f| f.codim == 0)
            .expect("polytope face");
        let simplices = pulling_triangulation(faces, self.dim, top, &mut memo);
        simplices
            .iter()
            .map(|s| {
                let base = &self.vertices[s[0]];
                let rows = s[1..]
                    .iter()
                    .map(|&i| sub_rat(&self.vertices[i], base))
                    .collect();
                RatMatrix::from_rows(rows)
                    .and_then(|m| m.det())
                    .expect("square")
                    .abs()
            })
            .sum()
    }

    /// Maximal simplices of the pulling triangulation, as vertex index lists.
    pub fn triangulation(&self) -> Vec<Vec<usize>> {
        let faces = self.all_faces();
        let top = faces
            .iter()
            .position(|f| f.codim == 0)
            .expect("polytope face");
        pulling_triangulation(faces, self.dim, top, &mut HashMap::new())
    }
}

/// Pulls the smallest vertex of each face and cones it over the
/// triangulations of the subfacets that avoid it.
fn pulling_triangulation(
    faces: &[FaceRef],
    dim: usize,
    face: usize,
    memo: &mut HashMap<usize, Vec<Vec<usize>>>,
) -> Vec<Vec<usize>> {
    if let Some(t) = memo.get(&face) {
        return t.clone();
    }
    let f = &faces[face];
    let fdim = dim - f.codim;
    let apex = *f.vertex_indices.iter().next().unwrap();
    let out = if fdim == 0 {
        vec![vec![apex]]
    } else {
        let mut out = Vec::new();
        for (gi, g) in faces.iter().enumerate() {
            if g.codim == f.codim + 1
                && !g.vertex_indices.contains(&apex)
                && g.vertex_indices.is_subset(&f.vertex_indices)
            {
                for mut s in pulling_triangulation(faces, dim, gi, memo) {
                    s.insert(0, apex);
                    out.push(s);
                }
            }
        }
        out
    };
    memo.insert(face, out.clone());
    out
}

/// `[-1,1]^n`.
pub fn cube(n: usize) -> Polytope {
    let facets: Vec<Facet> = (0..n)
        .flat_map(|i| {
            [1i64, -1].map(|s| {
                let mut u = vec![0i64; n];
                u[i] = s;
                Facet::from_i64(&u, 1).unwrap()
            })
        })
        .collect();
    Polytope::from_facets(n, &facets).expect("cube")
}

/// The monotone simplex `{x_i >= -1, Σ x_i <= 1}`; facet `i < n` is
/// `-x_i <= 1` and facet `n` is `Σ x_i <= 1`.
pub fn monotone_simplex(n: usize) -> Polytope {
    let mut facets: Vec<Facet> = (0..n)
        .map(|i| {
            let mut u = vec![0i64; n];
            u[i] = -1;
            Facet::from_i64(&u, 1).unwrap()
        })
        .collect();
    facets.push(Facet::from_i64(&vec![1; n], 1).unwrap());
    Polytope::from_facets(n, &facets).expect("simplex")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{int_vec, rat, rat_vec};

    fn pts(v: &[&[i64]]) -> Vec<Vec<Rat>> {
        v.iter().map(|p| rat_vec(p)).collect()
    }

    fn facet_set(p: &Polytope) -> BTreeSet<Facet> {
        p.facets().iter().cloned().collect()
    }

    #[test]
    fn subsets_are_enumerated_in_order() {
        let mut all = Vec::new();
        for_each_subset(4, 2, |s| all.push(s.to_vec()));
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[5], vec![2, 3]);
        let mut count = 0;
        for_each_subset(3, 0, |_| count += 1);
        assert_eq!(count, 1);
        for_each_subset(2, 3, |_| panic!("k > n"));
    }

    #[test]
    fn hull_of_square() {
        let p = Polytope::hull(2, &pts(&[&[-1, -1], &[1, -1], &[-1, 1], &[1, 1]])).unwrap();
        let expected: BTreeSet<Facet> = [[1, 0], [-1, 0], [0, 1], [0, -1]]
            .iter()
            .map(|u| Facet::from_i64(u, 1).unwrap())
            .collect();
        assert_eq!(facet_set(&p), expected);
        assert_eq!(p.num_vertices(), 4);
    }

    #[test]
    fn hull_of_monotone_triangle() {
        let p = Polytope::hull(2, &pts(&[&[-1, -1], &[2, -1], &[-1, 2]])).unwrap();
        let expected: BTreeSet<Facet> = [([-1, 0], 1), ([0, -1], 1), ([1, 1], 1)]
            .iter()
            .map(|(u, b)| Facet::from_i64(u, *b).unwrap())
            .collect();
        assert_eq!(facet_set(&p), expected);
    }

    #[test]
    fn hull_of_segment_and_interior_points() {
        let p = Polytope::hull(1, &pts(&[&[-1], &[0], &[1]])).unwrap();
        assert_eq!(p.num_vertices(), 2);
        let expected: BTreeSet<Facet> = [
            Facet::from_i64(&[1], 1).unwrap(),
            Facet::from_i64(&[-1], 1).unwrap(),
        ]
        .into();
        assert_eq!(facet_set(&p), expected);
        // interior and edge-midpoint points are dropped, input order kept
        let q = Polytope::hull(
            2,
            &pts(&[&[0, 0], &[1, 1], &[0, 1], &[-1, -1], &[1, -1], &[-1, 1]]),
        )
        .unwrap();
        assert_eq!(
            q.vertices(),
            pts(&[&[1, 1], &[-1, -1], &[1, -1], &[-1, 1]]).as_slice()
        );
    }

    #[test]
    fn hull_rejects_flat_input() {
        assert_eq!(
            Polytope::hull(2, &pts(&[&[0, 0], &[1, 1], &[2, 2]])).unwrap_err(),
            Error::DegenerateInput
        );
    }

    #[test]
    fn vertices_of_triangle_and_cube() {
        let t = Polytope::from_facets(
            2,
            &[
                Facet::from_i64(&[-1, 0], 1).unwrap(),
                Facet::from_i64(&[0, -1], 1).unwrap(),
                Facet::from_i64(&[1, 1], 1).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(
            t.vertices(),
            pts(&[&[-1, -1], &[-1, 2], &[2, -1]]).as_slice()
        );
        let c = cube(3);
        assert_eq!(c.num_vertices(), 8);
        for v in c.vertices() {
            assert!(v.iter().all(|x| x.abs() == rat(1)));
        }
    }

    #[test]
    fn vertices_of_errors() {
        let empty = [
            Facet::from_i64(&[1, 0], 0).unwrap(),
            Facet::from_i64(&[-1, 0], -1).unwrap(),
        ];
        assert_eq!(
            Polytope::from_facets(2, &empty).unwrap_err(),
            Error::Degenerate
        );
        assert_eq!(Error::Degenerate.to_string(), "degenerate");
        let half = [
            Facet::from_i64(&[1, 0], 1).unwrap(),
            Facet::from_i64(&[0, 1], 1).unwrap(),
        ];
        assert_eq!(
            Polytope::from_facets(2, &half).unwrap_err(),
            Error::Unbounded
        );
        let strip = [
            Facet::from_i64(&[1, 0], 1).unwrap(),
            Facet::from_i64(&[-1, 0], 1).unwrap(),
        ];
        assert_eq!(
            Polytope::from_facets(2, &strip).unwrap_err(),
            Error::Unbounded
        );
        let flat = [
            Facet::from_i64(&[1, 0], 0).unwrap(),
            Facet::from_i64(&[-1, 0], 0).unwrap(),
            Facet::from_i64(&[0, 1], 1).unwrap(),
            Facet::from_i64(&[0, -1], 1).unwrap(),
        ];
        assert_eq!(
            Polytope::from_facets(2, &flat).unwrap_err(),
            Error::Degenerate
        );
    }

    #[test]
    fn redundant_inequalities_are_dropped_in_order() {
        let p = Polytope::from_facets(
            2,
            &[
                Facet::from_i64(&[1, 0], 1).unwrap(),
                Facet::from_i64(&[1, 1], 5).unwrap(),
                Facet::from_i64(&[-1, 0], 1).unwrap(),
                Facet::from_i64(&[0, 2], 2).unwrap(),
                Facet::from_i64(&[0, -1], 1).unwrap(),
            ],
        )
        .unwrap();
        let normals: Vec<Vec<Int>> = p.facets().iter().map(|f| f.normal.clone()).collect();
        assert_eq!(
            normals,
            vec![
                int_vec(&[1, 0]),
                int_vec(&[-1, 0]),
                int_vec(&[0, 1]),
                int_vec(&[0, -1])
            ]
        );
    }

    #[test]
    fn face_counts() {
        assert_eq!(monotone_simplex(2).faces(2).unwrap().len(), 3);
        assert_eq!(cube(3).faces(2).unwrap().len(), 12);
        assert_eq!(monotone_simplex(3).faces(2).unwrap().len(), 6);
        assert_eq!(cube(3).faces(0).unwrap().len(), 1);
        assert!(matches!(
            cube(3).faces(4),
            Err(Error::CodimOutOfRange { .. })
        ));
    }

    #[test]
    fn edge_lengths() {
        let s = monotone_simplex(3);
        let e = s.edges_with_lengths();
        assert_eq!(e.len(), 6);
        assert!(e.iter().all(|e| e.lattice_length == rat(4)));
        let c = cube(3).edges_with_lengths();
        assert_eq!(c.len(), 12);
        assert!(c.iter().all(|e| e.lattice_length == rat(2)));
        let seg = Polytope::hull(1, &pts(&[&[-1], &[1]]))
            .unwrap()
            .edges_with_lengths();
        assert_eq!(seg.len(), 1);
        assert_eq!(seg[0].lattice_length, rat(2));
    }

    #[test]
    fn f_vectors() {
        assert_eq!(monotone_simplex(3).f_vector(), vec![4, 6, 4]);
        assert_eq!(cube(3).f_vector(), vec![8, 12, 6]);
        // triangle with one vertex cut off: x + y >= -1 on top of the simplex
        let mut facets = monotone_simplex(2).facets().to_vec();
        facets.push(Facet::from_i64(&[-1, -1], 1).unwrap());
        assert_eq!(
            Polytope::from_facets(2, &facets).unwrap().f_vector(),
            vec![4, 4]
        );
    }

    #[test]
    fn volumes() {
        assert_eq!(monotone_simplex(3).normalized_volume(), rat(64));
        assert_eq!(cube(3).normalized_volume(), rat(48));
        // area 9/2 times 2!
        assert_eq!(monotone_simplex(2).normalized_volume(), rat(9));
        assert_eq!(cube(1).normalized_volume(), rat(2));
    }

    #[test]
    fn simplicity() {
        assert!(cube(3).is_simple());
        assert!(monotone_simplex(3).is_simple());
        let pyramid = Polytope::hull(
            3,
            &pts(&[
                &[1, 1, 0],
                &[1, -1, 0],
                &[-1, 1, 0],
                &[-1, -1, 0],
                &[0, 0, 1],
            ]),
        )
        .unwrap();
        assert!(!pyramid.is_simple());
        assert_eq!(pyramid.f_vector(), vec![5, 8, 5]);
    }

    #[test]
    fn face_lookup() {
        let s = monotone_simplex(3);
        let e = s.face_from_facets(&[0, 1]).unwrap();
        assert_eq!(e.codim, 2);
        assert_eq!(e.vertex_indices.len(), 2);
        let v = s.face_from_facets(&[0, 1, 2]).unwrap();
        assert_eq!(v.codim, 3);
        assert!(s.face_from_facets(&[9]).is_err());
        let v0 = s.vertex_face(0).unwrap();
        assert_eq!(v0.facet_indices.len(), 3);
        assert!(s.check_face(&v0).is_ok());
    }

    #[test]
    fn transform_and_translate_keep_structure() {
        let a = IntMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        let c = cube(3).transform(&a).unwrap();
        assert_eq!(c.f_vector(), vec![8, 12, 6]);
        assert_eq!(c.normalized_volume(), rat(48));
        let t = c.translate(&rat_vec(&[3, -2, 5])).unwrap();
        assert_eq!(t.normalized_volume(), rat(48));
        assert!(!t.origin_in_interior());
    }
}
