//! Exhaustive search for complete unimodular fans with small rays.
//!
//! A candidate is a set `S` of primitive integer vectors with coordinates in
//! `[-B, B]`; it is accepted when `P = {x : u·x <= 1, u ∈ S}` is a bounded
//! smooth polytope on which every `u ∈ S` supports a facet. Such a `P` is
//! automatically reflexive, so accepted sets are exactly the monotone
//! polytopes whose facet normals fit in the box.
//!
//! The search runs on fixed-width integers: every `n`-subset of candidates
//! is solved once up front and its interaction with every other candidate is
//! packed into bitmasks, so testing a set `S` is a handful of mask operations
//! per potential vertex.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polytope::for_each_subset;

/// Search limits. The facet bound and coordinate box are configuration,
/// not derived facts; the resulting counts are what validates them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub coord_bound: i64,
    pub max_facets: usize,
}

impl SearchConfig {
    pub fn for_dim(n: usize) -> Result<Self> {
        let max_facets = match n {
            1 => 2,
            2 => 6,
            3 => 8,
            _ => return Err(Error::UnsupportedEnumerationDim(n)),
        };
        Ok(Self {
            coord_bound: 1,
            max_facets,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub candidates: usize,
    pub subsets_tested: u64,
    pub accepted: usize,
}

/// Primitive nonzero integer vectors in `[-bound, bound]^n`, in lexicographic order.
pub fn candidate_normals(n: usize, bound: i64) -> Vec<Vec<i64>> {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (-bound..=bound).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().fold(0, |g, &x| gcd(g, x)) == 1);
    out
}

fn det_small(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        _ => (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det_small(&minor)
            })
            .sum(),
    }
}

/// Adjugate: `adj[i][j] = (-1)^{i+j} det(minor without row j, column i)`.
fn adjugate(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let minor: Vec<Vec<i64>> = m
                        .iter()
                        .enumerate()
                        .filter(|&(r, _)| r != j)
                        .map(|(_, row)| {
                            row.iter()
                                .enumerate()
                                .filter(|&(c, _)| c != i)
                                .map(|(_, &x)| x)
                                .collect()
                        })
                        .collect();
                    let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                    s * det_small(&minor)
                })
                .collect()
        })
        .collect()
}

/// Precomputed data for one nonsingular `n`-subset `T` of candidates, whose
/// hyperplanes meet in the point `x_T`.
#[derive(Clone, Debug)]
struct BasisEntry {
    /// Candidates `c` with `c · x_T > 1`.
    violated: u64,
    /// Candidates `c` with `c · x_T = 1`.
    tight: u64,
    unimodular: bool,
    /// For each edge leaving `x_T` (dropping one hyperplane of `T`), the
    /// candidates that bound it.
    edge_bounders: Vec<u64>,
}

struct BasisTable {
    n: usize,
    size: usize,
    entries: Vec<Option<BasisEntry>>,
}

impl BasisTable {
    fn build(cands: &[Vec<i64>], n: usize) -> Self {
        let size = cands.len();
        let mut entries = vec![None; size.pow(n as u32)];
        for_each_subset(size, n, |t| {
            let u: Vec<Vec<i64>> = t.iter().map(|&i| cands[i].clone()).collect();
            let det = det_small(&u);
            if det == 0 {
                return;
            }
            let adj = adjugate(&u);
            // x_T = adj · 1 / det
            let num: Vec<i64> = adj.iter().map(|r| r.iter().sum()).collect();
            let mut violated = 0u64;
            let mut tight = 0u64;
            for (ci, c) in cands.iter().enumerate() {
                let s: i64 = c.iter().zip(&num).map(|(a, b)| a * b).sum();
                if s == det {
                    tight |= 1 << ci;
                } else if (det > 0 && s > det) || (det < 0 && s < det) {
                    violated |= 1 << ci;
                }
            }
            // edge direction dropping hyperplane k: -(column k of adj) / det
            let edge_bounders = (0..n)
                .map(|k| {
                    let mut mask = 0u64;
                    for (ci, c) in cands.iter().enumerate() {
                        let s: i64 = (0..n).map(|r| c[r] * adj[r][k]).sum();
                        if s * det < 0 {
                            mask |= 1 << ci;
                        }
                    }
                    mask
                })
                .collect();
            entries[Self::index_of(size, t)] = Some(BasisEntry {
                violated,
                tight,
                unimodular: det.abs() == 1,
                edge_bounders,
            });
        });
        Self { n, size, entries }
    }

    fn index_of(size: usize, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &i| acc * size + i)
    }

    /// Exactly the acceptance test described in the module docs.
    fn accepts(&self, set: &[usize], mask: u64) -> bool {
        let n = self.n;
        let mut covered = 0u64;
        let mut has_vertex = false;
        let mut sub = vec![0usize; n];
        let mut ok = true;
        for_each_subset(set.len(), n, |pos| {
            if !ok {
                return;
            }
            for (s, &p) in sub.iter_mut().zip(pos) {
                *s = set[p];
            }
            let Some(e) = &self.entries[Self::index_of(self.size, &sub)] else {
                return;
            };
            if e.violated & mask != 0 {
                return;
            }
            // a vertex of P: it must be simple and unimodular, with bounded edges
            if !e.unimodular || (e.tight & mask).count_ones() as usize != n {
                ok = false;
                return;
            }
            if e.edge_bounders.iter().any(|b| b & mask == 0) {
                ok = false;
                return;
            }
            has_vertex = true;
            for &i in &sub {
                covered |= 1 << i;
            }
        });
        ok && has_vertex && covered == mask
    }
}

/// The candidate normals, the accepted sets as index lists into them, and
/// search statistics.
pub type FanSearch = (Vec<Vec<i64>>, Vec<Vec<usize>>, SearchStats);

/// All accepted normal sets, as index lists into [`candidate_normals`].
pub fn search_fans(n: usize, config: &SearchConfig) -> Result<FanSearch> {
    if !(1..=3).contains(&n) {
        return Err(Error::UnsupportedEnumerationDim(n));
    }
    let cands = candidate_normals(n, config.coord_bound);
    if cands.len() > 64 {
        return Err(Error::Inconsistent(format!(
            "{} candidate normals exceed the 64-bit search masks",
            cands.len()
        )));
    }
    let table = BasisTable::build(&cands, n);
    let size = cands.len();
    let max_k = config.max_facets.min(size);

    let per_first: Vec<(Vec<Vec<usize>>, u64)> = (0..size)
        .into_par_iter()
        .map(|first| {
            let mut found = Vec::new();
            let mut tested = 0u64;
            for k in n + 1..=max_k {
                let rest = size - first - 1;
                for_each_subset(rest, k - 1, |tail| {
                    let mut set = Vec::with_capacity(k);
                    set.push(first);
                    set.extend(tail.iter().map(|&t| first + 1 + t));
                    let mask = set.iter().fold(0u64, |m, &i| m | 1 << i);
                    tested += 1;
                    if table.accepts(&set, mask) {
                        found.push(set);
                    }
                });
            }
            (found, tested)
        })
        .collect();

    let mut stats = SearchStats {
        candidates: size,
        ..Default::default()
    };
    let mut accepted = Vec::new();
    for (found, tested) in per_first {
        stats.subsets_tested += tested;
        accepted.extend(found);
    }
    stats.accepted = accepted.len();
    Ok((cands, accepted, stats))
}
