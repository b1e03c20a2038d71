//! JSON documents for graphs, point sets, vertex maps, witnesses and cube
//! models.
//!
//! Parsers walk a [`serde_json::Value`] by hand so that every rejection names
//! the offending field, e.g. `edges[3][1]`. Unknown fields are rejected.
//! Writers emit pretty JSON with a trailing newline; the output is a pure
//! function of the value, so re-running a command reproduces its bytes.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::cube_l1::CubeL1Model;
use crate::distortion::VertexMap;
use crate::error::{Error, Result};
use crate::gadget::GadgetParams;
use crate::graph::Graph;
use crate::points::{Norm, PointSet};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::witness::{EmbeddingCertificate, Witness, WitnessSemitree, WitnessTree};
use crate::DEFAULT_VERTEX_CAP;

/// Deepest witness a document may declare.
pub const MAX_WITNESS_DEPTH: usize = 24;

/// Pretty JSON plus a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn root(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::schema("$", e.to_string()))
}

fn object<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let obj = v.as_object().ok_or_else(|| Error::schema(path, "expected an object"))?;
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::schema(join(path, k), "unknown field"));
    }
    Ok(obj)
}

fn join(path: &str, key: &str) -> String {
    if path == "$" {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::schema(join(path, key), "missing field"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::schema(path, "expected an array"))
}

fn uint(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| Error::schema(path, "expected a non-negative integer"))
}

fn rational(v: &Value, path: &str) -> Result<Rational> {
    let s = v.as_str().ok_or_else(|| Error::schema(path, "expected a rational string \"p\" or \"p/q\""))?;
    parse_rational(s).map_err(|e| Error::schema(path, e.to_string()))
}

fn rational_vec(v: &Value, path: &str) -> Result<Vec<Rational>> {
    array(v, path)?.iter().enumerate().map(|(i, x)| rational(x, &format!("{path}[{i}]"))).collect()
}

fn norm(v: &Value, path: &str) -> Result<Norm> {
    let s = v.as_str().ok_or_else(|| Error::schema(path, "expected \"l1\", \"l2\" or \"linf\""))?;
    s.parse().map_err(|_| Error::schema(path, format!("unknown norm {s:?}")))
}

fn pair(v: &Value, path: &str, bound: usize) -> Result<(usize, usize)> {
    let a = array(v, path)?;
    if a.len() != 2 {
        return Err(Error::schema(path, "expected a pair"));
    }
    let x = uint(&a[0], &format!("{path}[0]"))?;
    let y = uint(&a[1], &format!("{path}[1]"))?;
    for (k, &z) in [x, y].iter().enumerate() {
        if z >= bound {
            return Err(Error::schema(format!("{path}[{k}]"), format!("vertex {z} is outside 0..{bound}")));
        }
    }
    Ok((x, y))
}

fn strs(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

// ---------------------------------------------------------------- graph

#[derive(Serialize)]
struct GraphOut<'a> {
    n: usize,
    unit: String,
    edges: &'a [(usize, usize)],
    loops: &'a [usize],
}

pub fn graph_to_value(g: &Graph) -> Value {
    serde_json::to_value(GraphOut { n: g.n(), unit: format_rational(g.unit()), edges: g.edges(), loops: g.loops() })
        .expect("graph serializes")
}

pub fn write_graph(g: &Graph) -> Result<String> {
    to_json(&graph_to_value(g))
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    graph_from_value(&root(text)?, "$")
}

pub fn graph_from_value(v: &Value, path: &str) -> Result<Graph> {
    let obj = object(v, path, &["n", "unit", "edges", "loops"])?;
    let n_path = join(path, "n");
    let n = uint(field(obj, path, "n")?, &n_path)?;
    if n > DEFAULT_VERTEX_CAP {
        return Err(Error::schema(n_path, format!("more than {DEFAULT_VERTEX_CAP} vertices")));
    }
    let unit_path = join(path, "unit");
    let unit = rational(field(obj, path, "unit")?, &unit_path)?;
    if !crate::rational::is_positive(&unit) {
        return Err(Error::schema(unit_path, "unit must be positive"));
    }
    let e_path = join(path, "edges");
    let mut edges = Vec::new();
    for (i, e) in array(field(obj, path, "edges")?, &e_path)?.iter().enumerate() {
        let p = format!("{e_path}[{i}]");
        let (a, b) = pair(e, &p, n)?;
        if a == b {
            return Err(Error::schema(p, "self-loops belong in loops"));
        }
        edges.push((a, b));
    }
    let l_path = join(path, "loops");
    let mut loops = Vec::new();
    if let Some(l) = obj.get("loops") {
        for (i, x) in array(l, &l_path)?.iter().enumerate() {
            let p = format!("{l_path}[{i}]");
            let v = uint(x, &p)?;
            if v >= n {
                return Err(Error::schema(p, format!("vertex {v} is outside 0..{n}")));
            }
            loops.push(v);
        }
    }
    Graph::from_edges(n, unit, edges, loops).map_err(|e| Error::schema(e_path, e.to_string()))
}

// ------------------------------------------------------------ point set

#[derive(Serialize)]
struct PointsOut {
    dim: usize,
    norm: Norm,
    points: BTreeMap<String, Vec<String>>,
}

pub fn points_to_value(p: &PointSet) -> Value {
    let points = p.iter().map(|(id, x)| (id.to_string(), strs(x))).collect();
    serde_json::to_value(PointsOut { dim: p.dim(), norm: p.norm(), points }).expect("points serialize")
}

pub fn write_points(p: &PointSet) -> Result<String> {
    to_json(&points_to_value(p))
}

pub fn parse_points(text: &str) -> Result<PointSet> {
    points_from_value(&root(text)?, "$")
}

pub fn points_from_value(v: &Value, path: &str) -> Result<PointSet> {
    let obj = object(v, path, &["dim", "norm", "points"])?;
    let dim = uint(field(obj, path, "dim")?, &join(path, "dim"))?;
    let norm = norm(field(obj, path, "norm")?, &join(path, "norm"))?;
    let p_path = join(path, "points");
    let raw = field(obj, path, "points")?.as_object().ok_or_else(|| Error::schema(&p_path, "expected an object"))?;
    let mut points = BTreeMap::new();
    for (key, x) in raw {
        let kp = format!("{p_path}.{key}");
        let id: usize = match key.parse() {
            Ok(id) if key == &format!("{id}") => id,
            _ => return Err(Error::schema(kp, "point IDs must be canonical non-negative integers")),
        };
        let coords = rational_vec(x, &kp)?;
        if coords.len() != dim {
            return Err(Error::schema(kp, format!("expected {dim} coordinates, found {}", coords.len())));
        }
        points.insert(id, coords);
    }
    PointSet::new(dim, norm, points)
}

// ----------------------------------------------------------- vertex map

pub fn map_to_value(f: &VertexMap) -> Value {
    let pairs: Vec<(usize, usize)> = f.iter().collect();
    serde_json::json!({ "pairs": pairs })
}

pub fn write_map(f: &VertexMap) -> Result<String> {
    to_json(&map_to_value(f))
}

pub fn parse_map(text: &str) -> Result<VertexMap> {
    let v = root(text)?;
    let obj = object(&v, "$", &["pairs"])?;
    let pairs = array(field(obj, "$", "pairs")?, "pairs")?
        .iter()
        .enumerate()
        .map(|(i, x)| pair(x, &format!("pairs[{i}]"), usize::MAX))
        .collect::<Result<Vec<_>>>()?;
    VertexMap::from_pairs(pairs).map_err(|e| Error::schema("pairs", e.to_string()))
}

// -------------------------------------------------------------- witness

/// A witness together with the embedding certificate it was extracted under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessDocument {
    pub witness: Witness,
    pub certificate: EmbeddingCertificate,
}

#[derive(Serialize)]
struct CertOut {
    delta: String,
    lip: String,
}

#[derive(Serialize)]
struct WitnessOut<'a> {
    kind: &'a str,
    depth: usize,
    norm: Norm,
    certificate: CertOut,
    nodes: Vec<Vec<String>>,
}

pub fn write_witness(doc: &WitnessDocument) -> Result<String> {
    let (kind, depth, norm, nodes) = match &doc.witness {
        Witness::Tree(t) => ("tree", t.depth, t.norm, &t.nodes),
        Witness::Semitree(s) => ("semitree", s.depth, s.norm, &s.nodes),
    };
    let certificate = CertOut {
        delta: format_rational(&doc.certificate.delta),
        lip: format_rational(&doc.certificate.lip),
    };
    let nodes = nodes.iter().map(|x| strs(x)).collect();
    to_json(&WitnessOut { kind, depth, norm, certificate, nodes })
}

pub fn parse_witness(text: &str) -> Result<WitnessDocument> {
    let v = root(text)?;
    let obj = object(&v, "$", &["kind", "depth", "norm", "certificate", "nodes"])?;
    let kind = field(obj, "$", "kind")?.as_str().ok_or_else(|| Error::schema("kind", "expected a string"))?;
    let depth = uint(field(obj, "$", "depth")?, "depth")?;
    if depth > MAX_WITNESS_DEPTH {
        return Err(Error::schema("depth", format!("deeper than {MAX_WITNESS_DEPTH}")));
    }
    let norm = norm(field(obj, "$", "norm")?, "norm")?;
    let c = object(field(obj, "$", "certificate")?, "certificate", &["delta", "lip"])?;
    let certificate = EmbeddingCertificate {
        delta: rational(field(c, "certificate", "delta")?, "certificate.delta")?,
        lip: rational(field(c, "certificate", "lip")?, "certificate.lip")?,
    };
    let nodes = array(field(obj, "$", "nodes")?, "nodes")?
        .iter()
        .enumerate()
        .map(|(i, x)| rational_vec(x, &format!("nodes[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let delta = certificate.delta.clone();
    let witness = match kind {
        "tree" => Witness::Tree(WitnessTree { depth, norm, delta, nodes }),
        "semitree" => Witness::Semitree(WitnessSemitree { depth, norm, delta, nodes }),
        other => return Err(Error::schema("kind", format!("expected \"tree\" or \"semitree\", found {other:?}"))),
    };
    Ok(WitnessDocument { witness, certificate })
}

// ----------------------------------------------------------- cube model

/// Serialized form of a [`CubeL1Model`]: the graph `S_n`, its coordinates in
/// `l1`, the gadget parameters and the roots standing for cube vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeModelDocument {
    pub n: usize,
    pub params: GadgetParams,
    pub roots: Vec<usize>,
    pub graph: Graph,
    pub coords: PointSet,
}

impl CubeModelDocument {
    pub fn from_model(model: &CubeL1Model) -> Self {
        CubeModelDocument {
            n: model.n,
            params: model.params.clone(),
            roots: model.roots.clone(),
            graph: model.graph.clone(),
            coords: model.coords(),
        }
    }
}

pub fn write_cube_model(doc: &CubeModelDocument) -> Result<String> {
    let p = &doc.params;
    to_json(&serde_json::json!({
        "n": doc.n,
        "params": { "r": p.r, "l": p.l, "epsilon": format_rational(&p.epsilon), "delta_g": p.delta_g },
        "roots": doc.roots,
        "graph": graph_to_value(&doc.graph),
        "coords": points_to_value(&doc.coords),
    }))
}

pub fn parse_cube_model(text: &str) -> Result<CubeModelDocument> {
    let v = root(text)?;
    let obj = object(&v, "$", &["n", "params", "roots", "graph", "coords"])?;
    let n = uint(field(obj, "$", "n")?, "n")?;
    let p = object(field(obj, "$", "params")?, "params", &["r", "l", "epsilon", "delta_g"])?;
    let small = |key: &str| -> Result<u32> {
        let path = format!("params.{key}");
        u32::try_from(uint(field(p, "params", key)?, &path)?).map_err(|_| Error::schema(path, "too large"))
    };
    let params = GadgetParams::new(
        small("r")?,
        small("l")?,
        rational(field(p, "params", "epsilon")?, "params.epsilon")?,
        uint(field(p, "params", "delta_g")?, "params.delta_g")?,
    )
    .map_err(|e| Error::schema("params", e.to_string()))?;
    let graph = graph_from_value(field(obj, "$", "graph")?, "graph")?;
    let roots = array(field(obj, "$", "roots")?, "roots")?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let path = format!("roots[{i}]");
            let r = uint(x, &path)?;
            if r >= graph.n() {
                return Err(Error::schema(path, format!("vertex {r} is outside 0..{}", graph.n())));
            }
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    let coords = points_from_value(field(obj, "$", "coords")?, "coords")?;
    Ok(CubeModelDocument { n, params, roots, graph, coords })
}
