//! Polytope files, and catalog and diagram export.
//!
//! The text format is line oriented: a header `n m` (dimension, number of
//! vertices) followed by `m` lines of `n` coordinates, each an integer or a
//! fraction `p/q`. Lines starting with `#` and blank lines are ignored.
//! Writing then reading a polytope reproduces it exactly, and reading then
//! writing a file in normal form reproduces the file byte for byte.
//!
//! The JSON format has `dim`, `vertices`, and optionally `facets` (objects
//! with `normal` and `offset`). Coordinates may be JSON integers or strings.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::catalog::{BlowUpDag, Catalog, CatalogEntry};
use crate::equivalence::CanonicalKey;
use crate::error::{Error, Result};
use crate::lattice::{Int, Rat};
use crate::polytope::{Facet, Polytope};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_rat(s: &str, line: usize) -> Result<Rat> {
    let bad = || parse_err(line, format!("bad coordinate {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: Int = p.parse().map_err(|_| bad())?;
            let q: Int = q.parse().map_err(|_| bad())?;
            if q == Int::from(0) {
                return Err(parse_err(line, "zero denominator"));
            }
            Ok(Rat::new(p, q))
        }
        None => s.parse::<Int>().map(Rat::from_integer).map_err(|_| bad()),
    }
}

/// Points listed in a text-format file, without building the polytope.
pub fn parse_points(text: &str) -> Result<(usize, Vec<Vec<Rat>>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| parse_err(hl, format!("bad header field {t:?}")))
        })
        .collect::<Result<_>>()?;
    let [n, m] = nums[..] else {
        return Err(parse_err(hl, "header must be `n m`"));
    };
    if n == 0 {
        return Err(parse_err(hl, "dimension must be positive"));
    }
    let mut pts = Vec::with_capacity(m);
    let mut last = hl;
    for (ln, l) in lines {
        last = ln;
        if pts.len() == m {
            return Err(parse_err(ln, format!("more than {m} points")));
        }
        let row: Vec<Rat> = l
            .split_whitespace()
            .map(|t| parse_rat(t, ln))
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(parse_err(
                ln,
                format!("expected {n} coordinates, found {}", row.len()),
            ));
        }
        pts.push(row);
    }
    if pts.len() < m {
        return Err(parse_err(
            last,
            format!("expected {m} points, found {}", pts.len()),
        ));
    }
    Ok((n, pts))
}

/// The listed points must all be vertices; their order is kept.
fn polytope_from_vertices(dim: usize, pts: Vec<Vec<Rat>>) -> Result<Polytope> {
    let p = Polytope::hull(dim, &pts)?;
    if p.num_vertices() != pts.len() {
        let i = pts
            .iter()
            .position(|x| !p.vertices().contains(x))
            .unwrap_or(p.num_vertices());
        return Err(Error::Inconsistent(format!("point {i} is not a vertex")));
    }
    Ok(p)
}

pub fn read_text(text: &str) -> Result<Polytope> {
    let (n, pts) = parse_points(text)?;
    polytope_from_vertices(n, pts)
}

pub fn points_to_text(dim: usize, pts: &[Vec<Rat>]) -> String {
    let mut s = format!("{dim} {}\n", pts.len());
    for p in pts {
        let c: Vec<String> = p.iter().map(ToString::to_string).collect();
        s.push_str(&c.join(" "));
        s.push('\n');
    }
    s
}

pub fn write_text(p: &Polytope) -> String {
    points_to_text(p.dim(), p.vertices())
}

/// The stable text identity of a canonical class.
pub fn key_to_text(k: &CanonicalKey) -> String {
    let pts: Vec<Vec<Rat>> = k
        .vertices()
        .iter()
        .map(|v| crate::lattice::to_rat_vec(v))
        .collect();
    points_to_text(k.dim(), &pts)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Coord {
    Int(i64),
    Str(String),
}

impl Coord {
    fn to_rat(&self) -> Result<Rat> {
        match self {
            Coord::Int(i) => Ok(Rat::from_integer(Int::from(*i))),
            Coord::Str(s) => parse_rat(s.trim(), 0).map_err(|_| Error::Parse {
                line: 0,
                msg: format!("bad coordinate {s:?}"),
            }),
        }
    }
}

#[derive(Deserialize)]
struct JsonFacet {
    normal: Vec<Coord>,
    offset: Coord,
}

#[derive(Deserialize)]
struct JsonPolytope {
    dim: usize,
    vertices: Vec<Vec<Coord>>,
    #[serde(default)]
    facets: Option<Vec<JsonFacet>>,
}

fn json_line(e: &serde_json::Error) -> usize {
    e.line()
}

/// With facets present, they must describe the same polytope as the
/// vertices, and their order is kept for face addressing.
pub fn read_json(text: &str) -> Result<Polytope> {
    let raw: JsonPolytope =
        serde_json::from_str(text).map_err(|e| parse_err(json_line(&e), e.to_string()))?;
    let pts: Vec<Vec<Rat>> = raw
        .vertices
        .iter()
        .map(|v| v.iter().map(Coord::to_rat).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    for v in &pts {
        if v.len() != raw.dim {
            return Err(Error::DimensionMismatch {
                expected: raw.dim,
                got: v.len(),
            });
        }
    }
    let from_vertices = polytope_from_vertices(raw.dim, pts.clone())?;
    let Some(jf) = raw.facets else {
        return Ok(from_vertices);
    };
    let facets: Vec<Facet> = jf
        .iter()
        .map(|f| {
            let normal: Vec<Rat> = f.normal.iter().map(Coord::to_rat).collect::<Result<_>>()?;
            let normal = crate::lattice::to_int_vec(&normal)
                .ok_or_else(|| parse_err(0, "facet normals must be integral"))?;
            Facet::new(normal, f.offset.to_rat()?)
        })
        .collect::<Result<_>>()?;
    let given: BTreeSet<&Facet> = facets.iter().collect();
    let hull: BTreeSet<&Facet> = from_vertices.facets().iter().collect();
    if given.len() != facets.len() || given != hull {
        return Err(Error::Inconsistent(
            "facets do not match the vertices".into(),
        ));
    }
    Polytope::from_parts(raw.dim, pts, facets)
}

fn coord_json(x: &Rat) -> Value {
    if x.is_integer() {
        if let Some(i) = x.to_integer().to_i64() {
            return json!(i);
        }
    }
    json!(x.to_string())
}

fn int_json(x: &Int) -> Value {
    x.to_i64()
        .map_or_else(|| json!(x.to_string()), |i| json!(i))
}

pub fn polytope_json(p: &Polytope) -> Value {
    json!({
        "dim": p.dim(),
        "vertices": p.vertices().iter().map(|v| v.iter().map(coord_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "facets": p.facets().iter().map(|f| json!({
            "normal": f.normal.iter().map(int_json).collect::<Vec<_>>(),
            "offset": coord_json(&f.offset),
        })).collect::<Vec<_>>(),
    })
}

pub fn write_json(p: &Polytope) -> String {
    serde_json::to_string_pretty(&polytope_json(p)).expect("json values serialize") + "\n"
}

/// Reads either format, choosing JSON when the first non-blank character is `{`.
pub fn read_polytope(text: &str) -> Result<Polytope> {
    if text.trim_start().starts_with('{') {
        read_json(text)
    } else {
        read_text(text)
    }
}

#[derive(Serialize)]
struct EntryRecord {
    index: usize,
    facets: usize,
    volume: Value,
    f_vector: Vec<usize>,
    vertices: Vec<Vec<Value>>,
}

fn entry_record(i: usize, e: &CatalogEntry) -> EntryRecord {
    EntryRecord {
        index: i,
        facets: e.num_facets(),
        volume: int_json(&e.volume),
        f_vector: e.f_vector.clone(),
        vertices: e
            .key
            .vertices()
            .iter()
            .map(|v| v.iter().map(int_json).collect())
            .collect(),
    }
}

pub fn catalog_json(c: &Catalog) -> Value {
    json!({
        "dim": c.dim,
        "count": c.len(),
        "classes": c.entries.iter().enumerate().map(|(i, e)| entry_record(i, e)).collect::<Vec<_>>(),
    })
}

pub fn dag_json(d: &BlowUpDag) -> Value {
    json!({
        "dim": d.dim,
        "nodes": d.nodes.iter().enumerate().map(|(i, e)| entry_record(i, e)).collect::<Vec<_>>(),
        "edges": d.edges.iter().map(|e| json!({
            "source": e.source,
            "target": e.target,
            "codim": e.codim,
            "vertex_blowup": e.is_vertex_blowup,
            "multiplicity": e.multiplicity,
        })).collect::<Vec<_>>(),
        "maximal": d.maximal_elements(),
    })
}

/// Graphviz description; vertex blow-ups are the only labelled edges.
pub fn dag_dot(d: &BlowUpDag) -> String {
    let mut s = format!("digraph monotone{} {{\n", d.dim);
    for (i, e) in d.nodes.iter().enumerate() {
        let _ = writeln!(
            s,
            "  n{i} [label=\"f={} vol={}\"];",
            e.num_facets(),
            e.volume
        );
    }
    for e in &d.edges {
        if e.is_vertex_blowup {
            let _ = writeln!(s, "  n{} -> n{} [label=\"v\"];", e.source, e.target);
        } else {
            let _ = writeln!(s, "  n{} -> n{};", e.source, e.target);
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{rat_vec, ratio};
    use crate::polytope::{cube, monotone_simplex};

    #[test]
    fn text_round_trip() {
        for p in [cube(3), monotone_simplex(3)] {
            let s = write_text(&p);
            let q = read_text(&s).unwrap();
            assert_eq!(q.vertices(), p.vertices());
            let sorted = |x: &Polytope| x.facets().iter().cloned().collect::<BTreeSet<_>>();
            assert_eq!(sorted(&q), sorted(&p));
            assert_eq!(write_text(&q), s);
        }
    }

    #[test]
    fn rational_coordinates() {
        let text = "# a triangle\n2 3\n0 0\n1/2 0\n\n0 1\n";
        let p = read_text(text).unwrap();
        assert_eq!(p.vertex(1), &[ratio(1, 2), ratio(0, 1)]);
        assert_eq!(write_text(&p), "2 3\n0 0\n1/2 0\n0 1\n");
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert_eq!(
            read_text("2 3\n0 0\n1 x\n0 1\n"),
            Err(Error::Parse {
                line: 3,
                msg: "bad coordinate \"x\"".into()
            })
        );
        assert!(matches!(
            read_text("2 3\n0 0\n1 0 4\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            read_text("2 2\n0 0\n1 0\n0 1\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(matches!(
            read_text("2 3\n0 0\n1 0\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            read_text("2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            read_text("1 2\n0\n1/0\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(read_text(""), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn non_vertices_are_rejected() {
        let r = read_text("2 4\n0 0\n2 0\n1 0\n0 2\n");
        assert_eq!(
            r,
            Err(Error::Inconsistent("point 2 is not a vertex".into()))
        );
        assert_eq!(
            read_text("2 3\n0 0\n1 1\n2 2\n"),
            Err(Error::DegenerateInput)
        );
    }

    #[test]
    fn json_round_trip_keeps_facet_order() {
        for p in [monotone_simplex(2), cube(3)] {
            assert_eq!(read_json(&write_json(&p)).unwrap(), p);
        }
        let text = r#"{"dim": 2, "vertices": [[-1,-1],["2",-1],[-1,"2"]],
            "facets": [{"normal":[1,1],"offset":1},{"normal":[-1,0],"offset":"1"},{"normal":[0,-1],"offset":1}]}"#;
        let r = read_json(text).unwrap();
        assert_eq!(r.facets()[0].normal, crate::lattice::int_vec(&[1, 1]));
        assert_eq!(r.vertex(1), rat_vec(&[2, -1]).as_slice());
    }

    #[test]
    fn json_cross_validation() {
        let bad = r#"{"dim": 2, "vertices": [[-1,-1],[2,-1],[-1,2]],
            "facets": [{"normal":[1,1],"offset":2},{"normal":[-1,0],"offset":1},{"normal":[0,-1],"offset":1}]}"#;
        assert!(matches!(read_json(bad), Err(Error::Inconsistent(_))));
        assert!(matches!(read_json("{\"dim\": 2"), Err(Error::Parse { .. })));
        assert!(matches!(read_polytope("{}"), Err(Error::Parse { .. })));
    }
}
