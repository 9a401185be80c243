//! JSON encodings of graphs, modules, cycles, holonomies and certificates.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use sqfree_core::brill_noether::LinearSeriesCertificate;
use sqfree_core::jacobian::GaugeNormalForm;
use sqfree_core::{CycleVector, Face, Field, Graph, Matrix, Scalar, SquareFreeModule};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

fn bad(field: &str, message: impl Into<String>) -> FormatError {
    FormatError::Field { field: field.to_string(), message: message.into() }
}

fn get<'a>(v: &'a Value, field: &str) -> Result<&'a Value, FormatError> {
    v.get(field).ok_or_else(|| bad(field, "missing"))
}

pub fn graph_to_json(g: &Graph) -> Value {
    json!({ "n": g.vertex_count(), "edges": g.edges().iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>() })
}

pub fn graph_from_json(v: &Value) -> Result<Graph, FormatError> {
    let n = get(v, "n")?.as_u64().ok_or_else(|| bad("n", "expected a non-negative integer"))? as usize;
    let edges = get(v, "edges")?.as_array().ok_or_else(|| bad("edges", "expected an array"))?;
    let mut es = Vec::with_capacity(edges.len());
    for e in edges {
        let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("edges", "each edge must be [i, j]"))?;
        let a = pair[0].as_u64().ok_or_else(|| bad("edges", "vertex labels must be integers"))? as usize;
        let b = pair[1].as_u64().ok_or_else(|| bad("edges", "vertex labels must be integers"))? as usize;
        es.push((a, b));
    }
    Graph::new(n, &es).map_err(|e| bad("edges", e.to_string()))
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    Value::String(s.to_text())
}

fn scalar_from_json(field: Field, v: &Value, name: &str) -> Result<Scalar, FormatError> {
    match v {
        Value::String(s) => field.parse(s).map_err(|e| bad(name, e.to_string())),
        Value::Number(n) => n.as_i64().map(|k| field.from_i64(k)).ok_or_else(|| bad(name, "numbers must be integers or strings")),
        _ => Err(bad(name, "expected a rational string")),
    }
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(scalar_to_json).collect())).collect())
}

fn matrix_from_json(field: Field, v: &Value, rows: usize, cols: usize, name: &str) -> Result<Matrix, FormatError> {
    let arr = v.as_array().ok_or_else(|| bad(name, "expected an array of rows"))?;
    if rows == 0 || cols == 0 {
        return Ok(Matrix::zeros(field, rows, cols));
    }
    if arr.len() != rows {
        return Err(bad(name, format!("expected {rows} rows, found {}", arr.len())));
    }
    let mut out = Vec::with_capacity(rows);
    for r in arr {
        let r = r.as_array().ok_or_else(|| bad(name, "rows must be arrays"))?;
        out.push(r.iter().map(|x| scalar_from_json(field, x, name)).collect::<Result<Vec<_>, _>>()?);
    }
    Matrix::from_rows(field, cols, out).map_err(|e| bad(name, e.to_string()))
}

pub fn parse_face(s: &str) -> Result<Face, String> {
    let inner = s.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(|| format!("face {s:?} is not of the form [i,j,...]"))?;
    let vs = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| format!("bad vertex in face {s:?}"))).collect::<Result<Vec<_>, _>>()?
    };
    Face::from_vertices(&vs).map_err(|e| e.to_string())
}

pub fn module_to_json(m: &SquareFreeModule) -> Result<Value, sqfree_core::Error> {
    let g = m.graph()?;
    let complex = m.complex();
    let mut dims = Map::new();
    for (i, &f) in complex.faces().iter().enumerate() {
        dims.insert(f.label(), json!(m.dims()[i]));
    }
    let mut maps = Map::new();
    for (k, c) in complex.covers().iter().enumerate() {
        let key = format!("{}->{}", complex.face(c.from).label(), complex.face(c.to).label());
        maps.insert(key, matrix_to_json(&m.maps()[k]));
    }
    Ok(json!({ "graph": graph_to_json(&g), "field": m.field().to_string(), "dims": dims, "maps": maps }))
}

pub fn module_from_json(v: &Value) -> Result<SquareFreeModule, FormatError> {
    let graph = graph_from_json(get(v, "graph")?).map_err(|e| match e {
        FormatError::Field { field, message } => bad(&format!("graph.{field}"), message),
        other => other,
    })?;
    let field: Field = match v.get("field") {
        None => Field::Rational,
        Some(f) => f.as_str().ok_or_else(|| bad("field", "expected \"Q\" or \"Fp:<p>\""))?.parse().map_err(|e: sqfree_core::Error| bad("field", e.to_string()))?,
    };
    let complex = graph.complex();
    let dims_v = get(v, "dims")?.as_object().ok_or_else(|| bad("dims", "expected an object keyed by faces"))?;
    let mut dims = BTreeMap::new();
    for (k, d) in dims_v {
        let f = parse_face(k).map_err(|e| bad("dims", e))?;
        if !complex.contains(f) {
            return Err(bad("dims", format!("{k} is not a face of the graph")));
        }
        dims.insert(f, d.as_u64().ok_or_else(|| bad("dims", format!("dimension at {k} must be an integer")))? as usize);
    }
    let dim = |f: &Face| dims.get(f).copied().unwrap_or(0);
    let mut maps = BTreeMap::new();
    if let Some(mv) = v.get("maps") {
        let mv = mv.as_object().ok_or_else(|| bad("maps", "expected an object keyed by \"F->G\""))?;
        for (k, m) in mv {
            let (a, b) = k.split_once("->").ok_or_else(|| bad("maps", format!("key {k:?} is not \"F->G\"")))?;
            let fa = parse_face(a).map_err(|e| bad("maps", e))?;
            let fb = parse_face(b).map_err(|e| bad("maps", e))?;
            if !complex.contains(fb) || !fa.is_subset(fb) || fb.len() != fa.len() + 1 {
                return Err(bad("maps", format!("{k} is not a covering pair of faces")));
            }
            let mat = matrix_from_json(field, m, dim(&fb), dim(&fa), &format!("maps.{k}"))?;
            maps.insert((fa, fb), mat);
        }
    }
    let module = SquareFreeModule::from_face_data(complex, field, &dims, &maps).map_err(|e| bad("maps", e.to_string()))?;
    module.validate().map_err(|e| bad("maps", e.to_string()))?;
    Ok(module)
}

pub fn cycle_to_json(z: &CycleVector) -> Value {
    Value::Array(z.coeffs().iter().map(scalar_to_json).collect())
}

pub fn cycle_from_json(field: Field, v: &Value) -> Result<CycleVector, FormatError> {
    let arr = v.as_array().ok_or_else(|| bad("cycle", "expected an array of edge coefficients"))?;
    Ok(CycleVector::new(arr.iter().map(|x| scalar_from_json(field, x, "cycle")).collect::<Result<_, _>>()?))
}

pub fn holonomy_to_json(nf: &GaugeNormalForm) -> Value {
    json!({
        "tree_edges": nf.tree_edges.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
        "chords": nf.chords.iter().map(|(v, w, h)| json!([v, w, h.to_text()])).collect::<Vec<_>>(),
    })
}

/// Reads the holonomy scalars, in chord order, from `{"chords": [[v, w, "h"], ...]}`.
pub fn holonomies_from_json(field: Field, v: &Value) -> Result<Vec<Scalar>, FormatError> {
    let chords = get(v, "chords")?.as_array().ok_or_else(|| bad("chords", "expected an array"))?;
    chords
        .iter()
        .map(|c| {
            let c = c.as_array().filter(|c| c.len() == 3).ok_or_else(|| bad("chords", "each chord must be [v, w, \"h\"]"))?;
            scalar_from_json(field, &c[2], "chords")
        })
        .collect()
}

pub fn certificate_to_json(c: &LinearSeriesCertificate, verified: Option<bool>) -> Value {
    let mut out = json!({
        "cycles": c.generators.iter().map(cycle_to_json).collect::<Vec<_>>(),
        "d": c.degree,
        "r": c.r,
        "checks": {
            "special": c.checks.special,
            "effective": c.checks.effective(),
            "full_support": c.checks.full_support,
            "indecomposable": c.checks.indecomposable.as_str(),
            "cm": c.checks.cm,
            "locally_rank_one": c.checks.locally_rank_one,
        },
    });
    if let Some(v) = verified {
        out["verified"] = json!(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faces_parse() {
        assert_eq!(parse_face("[]").unwrap(), Face::EMPTY);
        assert_eq!(parse_face("[1, 3]").unwrap(), Face::edge(1, 3));
        assert!(parse_face("1,3").is_err());
    }

    #[test]
    fn module_round_trip() {
        let g = Graph::k33();
        let m = SquareFreeModule::build_effective(&g, Field::Rational, 2).unwrap();
        let v = module_to_json(&m).unwrap();
        let back = module_from_json(&v).unwrap();
        assert_eq!(back, m);
        assert_eq!(module_to_json(&back).unwrap(), v);
    }

    #[test]
    fn missing_fields_are_named() {
        let err = module_from_json(&json!({"graph": {"n": 3, "edges": [[1, 2]]}})).unwrap_err();
        assert!(err.to_string().contains("`dims`"));
        let err = graph_from_json(&json!({"edges": []})).unwrap_err();
        assert!(err.to_string().contains("`n`"));
    }
}
