//! Classification of monotone polytopes in low dimension and the graph of
//! monotone blow-ups between the classes.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::blowup::{admits_monotone_blow_up, is_monotone, monotone_blow_up};
use crate::enumerate::{search_fans, SearchConfig, SearchStats};
use crate::equivalence::{canonical_form, CanonicalKey};
use crate::error::{Error, Result};
use crate::lattice::{Int, Rat};
use crate::polytope::{FaceRef, Facet, Polytope};

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub key: CanonicalKey,
    /// The canonical representative.
    pub polytope: Polytope,
    pub f_vector: Vec<usize>,
    pub volume: Int,
}

impl CatalogEntry {
    pub fn new(key: CanonicalKey) -> Result<Self> {
        let polytope = key.to_polytope()?;
        let f_vector = polytope.f_vector();
        let volume = polytope.normalized_volume().to_integer();
        Ok(Self {
            key,
            polytope,
            f_vector,
            volume,
        })
    }

    pub fn num_facets(&self) -> usize {
        self.polytope.num_facets()
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub dim: usize,
    /// Sorted by facet count, then volume, then key.
    pub entries: Vec<CatalogEntry>,
    pub stats: SearchStats,
}

impl Catalog {
    /// Deduplicates by canonical form. Inputs must be monotone.
    pub fn from_polytopes(dim: usize, polys: &[Polytope]) -> Result<Self> {
        let keys: Vec<CanonicalKey> = polys
            .par_iter()
            .map(|p| {
                if p.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: p.dim(),
                    });
                }
                if !is_monotone(p) {
                    return Err(Error::NotMonotone);
                }
                canonical_form(p)
            })
            .collect::<Result<_>>()?;
        Self::from_keys(dim, keys.into_iter().collect(), SearchStats::default())
    }

    fn from_keys(dim: usize, keys: BTreeSet<CanonicalKey>, stats: SearchStats) -> Result<Self> {
        let mut entries: Vec<CatalogEntry> = keys
            .into_par_iter()
            .map(CatalogEntry::new)
            .collect::<Result<_>>()?;
        entries.sort_by(|a, b| {
            (a.num_facets(), &a.volume, &a.key).cmp(&(b.num_facets(), &b.volume, &b.key))
        });
        Ok(Self {
            dim,
            entries,
            stats,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn find(&self, key: &CanonicalKey) -> Option<usize> {
        self.entries.iter().position(|e| &e.key == key)
    }

    /// Index of the class of `p`, if it is in the catalog.
    pub fn classify(&self, p: &Polytope) -> Result<Option<usize>> {
        Ok(self.find(&canonical_form(p)?))
    }

    /// Sorted `(facet count, volume)` pairs, one per class.
    pub fn signature(&self) -> Vec<(usize, Int)> {
        let mut s: Vec<_> = self
            .entries
            .iter()
            .map(|e| (e.num_facets(), e.volume.clone()))
            .collect();
        s.sort();
        s
    }
}

/// Every monotone `n`-polytope up to lattice equivalence, for `n <= 3`.
pub fn enumerate_monotone(n: usize) -> Result<Catalog> {
    enumerate_monotone_with(n, &SearchConfig::for_dim(n)?)
}

pub fn enumerate_monotone_with(n: usize, config: &SearchConfig) -> Result<Catalog> {
    let (cands, sets, stats) = search_fans(n, config)?;
    let keys: Vec<CanonicalKey> = sets
        .par_iter()
        .map(|set| {
            let facets: Vec<Facet> = set
                .iter()
                .map(|&i| Facet::from_i64(&cands[i], 1))
                .collect::<Result<_>>()?;
            let p = Polytope::from_facets(n, &facets)?;
            // the fast filter must agree with the exact predicates
            if p.num_facets() != set.len() || !is_monotone(&p) {
                return Err(Error::Inconsistent(format!(
                    "search accepted a non-monotone normal set {:?}",
                    set.iter().map(|&i| &cands[i]).collect::<Vec<_>>()
                )));
            }
            canonical_form(&p)
        })
        .collect::<Result<_>>()?;
    Catalog::from_keys(n, keys.into_iter().collect(), stats)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DagEdge {
    pub source: usize,
    pub target: usize,
    pub codim: usize,
    pub is_vertex_blowup: bool,
    /// Number of faces of this codimension whose blow-up gives `target`.
    pub multiplicity: usize,
}

/// Catalog classes with an edge `P → Q` when `Q` is a monotone blow-up of `P`.
#[derive(Clone, Debug)]
pub struct BlowUpDag {
    pub dim: usize,
    pub nodes: Vec<CatalogEntry>,
    pub edges: Vec<DagEdge>,
}

impl BlowUpDag {
    pub fn in_degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|e| e.target == node).count()
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|e| e.source == node).count()
    }

    /// Classes that are not blow-ups of any other monotone polytope.
    pub fn maximal_elements(&self) -> Vec<usize> {
        let targets: BTreeSet<usize> = self.edges.iter().map(|e| e.target).collect();
        (0..self.nodes.len())
            .filter(|i| !targets.contains(i))
            .collect()
    }

    /// Classes with at least one monotone vertex blow-up.
    pub fn vertex_blowup_sources(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self
            .edges
            .iter()
            .filter(|e| e.is_vertex_blowup)
            .map(|e| e.source)
            .collect();
        s.into_iter().collect()
    }
}

/// All monotone blow-ups of `p`, with the face each came from.
pub fn monotone_blowups(p: &Polytope) -> Result<Vec<(FaceRef, Polytope)>> {
    p.blowup_candidates()
        .into_iter()
        .filter(|f| admits_monotone_blow_up(p, f))
        .map(|f| {
            let q = monotone_blow_up(p, &f)?.result;
            Ok((f, q))
        })
        .collect()
}

pub fn build_blowup_dag(catalog: &Catalog) -> Result<BlowUpDag> {
    let per_node: Vec<Vec<(usize, usize)>> = catalog
        .entries
        .par_iter()
        .map(|e| {
            monotone_blowups(&e.polytope)?
                .into_iter()
                .map(|(f, q)| {
                    let key = canonical_form(&q)?;
                    let t = catalog.find(&key).ok_or(Error::CatalogIncomplete)?;
                    Ok((t, f.codim))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut counts: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    for (s, targets) in per_node.into_iter().enumerate() {
        for (t, k) in targets {
            *counts.entry((s, t, k)).or_default() += 1;
        }
    }
    let edges = counts
        .into_iter()
        .map(|((source, target, codim), multiplicity)| DagEdge {
            source,
            target,
            codim,
            is_vertex_blowup: codim == catalog.dim,
            multiplicity,
        })
        .collect();
    Ok(BlowUpDag {
        dim: catalog.dim,
        nodes: catalog.entries.clone(),
        edges,
    })
}

/// Distinct classes reachable from `p` by at most `depth` monotone
/// blow-ups, including `p` itself, with the depth at which each first appears.
pub fn monotone_descendants(
    p: &Polytope,
    depth: usize,
) -> Result<Vec<(CanonicalKey, Polytope, usize)>> {
    let mut seen: BTreeMap<CanonicalKey, (Polytope, usize)> = BTreeMap::new();
    seen.insert(canonical_form(p)?, (p.clone(), 0));
    let mut frontier = vec![p.clone()];
    for d in 1..=depth {
        let children: Vec<Polytope> = frontier
            .par_iter()
            .map(monotone_blowups)
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .map(|(_, q)| q)
            .collect();
        let keyed: Vec<(CanonicalKey, Polytope)> = children
            .into_par_iter()
            .map(|q| Ok((canonical_form(&q)?, q)))
            .collect::<Result<_>>()?;
        frontier.clear();
        for (k, q) in keyed {
            if let std::collections::btree_map::Entry::Vacant(slot) = seen.entry(k) {
                slot.insert((q.clone(), d));
                frontier.push(q);
            }
        }
    }
    Ok(seen.into_iter().map(|(k, (q, d))| (k, q, d)).collect())
}

/// A random chain of monotone blow-ups of length at most `max_depth`,
/// stopping early if no face admits one.
pub fn random_descendant<R: Rng + ?Sized>(
    rng: &mut R,
    p: &Polytope,
    max_depth: usize,
) -> Result<Polytope> {
    let steps = rng.gen_range(1..=max_depth.max(1));
    let mut cur = p.clone();
    for _ in 0..steps.min(max_depth) {
        let faces: Vec<FaceRef> = cur
            .blowup_candidates()
            .into_iter()
            .filter(|f| admits_monotone_blow_up(&cur, f))
            .collect();
        let Some(f) = faces.choose(rng) else { break };
        cur = monotone_blow_up(&cur, f)?.result;
    }
    Ok(cur)
}

/// Vertices at which every edge has length at least `n`, paired with their
/// edge lengths.
pub fn long_edge_vertices(p: &Polytope) -> Vec<(usize, Vec<Rat>)> {
    let n = Rat::from_integer(Int::from(p.dim()));
    (0..p.num_vertices())
        .filter_map(|v| {
            let lens: Vec<Rat> = p.edges_at(v).into_iter().map(|(_, _, l)| l).collect();
            lens.iter().all(|l| *l >= n).then_some((v, lens))
        })
        .collect()
}

/// Vertices with all edges of length at least `n` where some edge has
/// length other than `n` or `n + 1`.
pub fn length_lemma_violations(p: &Polytope) -> Vec<(usize, Vec<Rat>)> {
    let n = Rat::from_integer(Int::from(p.dim()));
    let n1 = &n + Rat::from_integer(Int::from(1));
    long_edge_vertices(p)
        .into_iter()
        .filter(|(_, lens)| lens.iter().any(|l| *l != n && *l != n1))
        .collect()
}
