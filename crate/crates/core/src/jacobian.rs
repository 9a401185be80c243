//! Multidegree-0, locally rank 1 modules on graphs: gauge fixing along the BFS
//! spanning tree, chord holonomies and the classification on cycles.
//!
//! Conventions: the tree is [`Graph::spanning_tree`]; chords come in edge
//! order. A chord `{v, w}` is oriented from its BFS-earlier endpoint `v`, and
//! its holonomy is `φ_{v e} / φ_{w e}` once every tree map is `1`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::complex::Face;
use crate::error::Error;
use crate::field::{Field, Scalar};
use crate::graph::{Graph, SpanningTree};
use crate::matrix::Matrix;
use crate::module::SquareFreeModule;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeNormalForm {
    pub tree_edges: Vec<(usize, usize)>,
    /// `(v, w, h)` with `v` the BFS-earlier endpoint.
    pub chords: Vec<(usize, usize, Scalar)>,
}

impl GaugeNormalForm {
    pub fn holonomies(&self) -> Vec<Scalar> {
        self.chords.iter().map(|c| c.2.clone()).collect()
    }
}

/// A point of `P^1`, with the edge carrying the zero map when it is `(0,1)` or `(1,0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleClass {
    pub point: (Scalar, Scalar),
    pub distinguished_edge: Option<(usize, usize)>,
}

fn rank_of_position(tree: &SpanningTree, n: usize) -> Vec<usize> {
    let mut pos = vec![usize::MAX; n + 1];
    for (i, &v) in tree.order.iter().enumerate() {
        pos[v] = i;
    }
    pos
}

/// `(earlier, later)` endpoints of edge `e` in BFS order.
fn oriented(g: &Graph, pos: &[usize], e: usize) -> (usize, usize) {
    let (a, b) = g.edges()[e];
    if pos[a] <= pos[b] {
        (a, b)
    } else {
        (b, a)
    }
}

/// The scalar `φ_{v e}` of a locally rank 1, multidegree-0 module.
fn scalar_map(m: &SquareFreeModule, g: &Graph, v: usize, e: usize) -> Result<Scalar, Error> {
    let (a, b) = g.edges()[e];
    let f = Face::vertex(v);
    let mat = m.map(f, Face::edge(a, b))?;
    Ok(mat.get(0, 0).clone())
}

fn check_shape(m: &SquareFreeModule) -> Result<Graph, Error> {
    let g = m.graph()?;
    if !g.is_connected() {
        return Err(Error::Precondition("graph must be connected".into()));
    }
    if !m.is_locally_rank_one() {
        return Err(Error::Precondition("module is not locally rank 1".into()));
    }
    if m.multi_degree().iter().any(|&d| d != 0) {
        return Err(Error::Precondition("multidegree is not 0".into()));
    }
    Ok(g)
}

/// Vertex and tree-edge scalings making every tree map `1`.
struct Gauge {
    tree: SpanningTree,
    pos: Vec<usize>,
    b: Vec<Scalar>,
    c: BTreeMap<usize, Scalar>,
}

fn gauge(m: &SquareFreeModule, g: &Graph) -> Result<Gauge, Error> {
    let field = m.field();
    let tree = g.spanning_tree()?;
    let pos = rank_of_position(&tree, g.vertex_count());
    for e in 0..g.edge_count() {
        let (a, b) = g.edges()[e];
        for v in [a, b] {
            if scalar_map(m, g, v, e)?.is_zero() {
                return Err(Error::Precondition(format!(
                    "map φ from {v} to edge {} is zero; use classify_cycle_graph or decomposition instead",
                    Face::edge(a, b)
                )));
            }
        }
    }
    let mut b = vec![field.zero(); g.vertex_count() + 1];
    b[1] = field.one();
    let mut c = BTreeMap::new();
    for &q in &tree.order[1..] {
        let p = tree.parent[q];
        let e = g.edge_index(p, q).unwrap();
        let ce = &scalar_map(m, g, p, e)? * &b[p];
        b[q] = &ce * &scalar_map(m, g, q, e)?.inverse().unwrap();
        c.insert(e, ce);
    }
    Ok(Gauge { tree, pos, b, c })
}

/// Gauge-fixes along the BFS tree and reads off one holonomy per chord.
pub fn tree_normalize(m: &SquareFreeModule) -> Result<GaugeNormalForm, Error> {
    let g = check_shape(m)?;
    let gauge = gauge(m, &g)?;
    let tree_edges = gauge.tree.tree_edges.iter().map(|&e| g.edges()[e]).collect();
    let mut chords = Vec::with_capacity(gauge.tree.chords.len());
    for &e in &gauge.tree.chords {
        let (v, w) = oriented(&g, &gauge.pos, e);
        let num = &scalar_map(m, &g, v, e)? * &gauge.b[v];
        let den = &scalar_map(m, &g, w, e)? * &gauge.b[w];
        chords.push((v, w, &num * &den.inverse().unwrap()));
    }
    Ok(GaugeNormalForm { tree_edges, chords })
}

/// Equal holonomy tuples.
pub fn jacobian_is_isomorphic(m: &SquareFreeModule, n: &SquareFreeModule) -> Result<bool, Error> {
    if m.complex() != n.complex() {
        return Err(Error::Precondition("modules live on different graphs".into()));
    }
    Ok(tree_normalize(m)? == tree_normalize(n)?)
}

/// All vertex and tree maps `1`, chord `{v, w}` carrying `φ_{v e} = h`,
/// `φ_{w e} = 1`, and `M_∅` the kernel of `⊕M_v -> ⊕M_e`.
pub fn module_from_holonomies(g: &Graph, field: Field, h: &[Scalar]) -> Result<SquareFreeModule, Error> {
    let tree = g.spanning_tree()?;
    if h.len() != tree.chords.len() {
        return Err(Error::DimensionMismatch(format!("{} holonomies for {} chords", h.len(), tree.chords.len())));
    }
    if h.iter().any(Scalar::is_zero) {
        return Err(Error::Precondition("holonomies must be nonzero".into()));
    }
    let pos = rank_of_position(&tree, g.vertex_count());
    let mut maps = BTreeMap::new();
    for e in 0..g.edge_count() {
        let (a, b) = g.edges()[e];
        maps.insert((a, e), Matrix::identity(field, 1));
        maps.insert((b, e), Matrix::identity(field, 1));
    }
    for (k, &e) in tree.chords.iter().enumerate() {
        let (v, _) = oriented(g, &pos, e);
        maps.insert((v, e), Matrix::from_rows(field, 1, vec![vec![h[k].clone()]])?);
    }
    SquareFreeModule::graph_module_with_kernel_sections(g, field, &vec![1; g.vertex_count()], &vec![1; g.edge_count()], &maps)
}

/// All maps `1` except `φ_{v e} = s`, `φ_{w e} = t` on edge `e = {v, w}`,
/// `v` the BFS-earlier endpoint.
pub fn edge_module_at_point(g: &Graph, field: Field, e: usize, s: &Scalar, t: &Scalar) -> Result<SquareFreeModule, Error> {
    if e >= g.edge_count() {
        return Err(Error::Precondition(format!("no edge with index {e}")));
    }
    let tree = g.spanning_tree()?;
    let pos = rank_of_position(&tree, g.vertex_count());
    let (v, w) = oriented(g, &pos, e);
    let mut maps = BTreeMap::new();
    for f in 0..g.edge_count() {
        let (a, b) = g.edges()[f];
        maps.insert((a, f), Matrix::identity(field, 1));
        maps.insert((b, f), Matrix::identity(field, 1));
    }
    maps.insert((v, e), Matrix::from_rows(field, 1, vec![vec![s.clone()]])?);
    maps.insert((w, e), Matrix::from_rows(field, 1, vec![vec![t.clone()]])?);
    SquareFreeModule::graph_module_with_kernel_sections(g, field, &vec![1; g.vertex_count()], &vec![1; g.edge_count()], &maps)
}

/// The class of a multidegree-0 locally rank 1 module on a cycle.
pub fn classify_cycle_graph(m: &SquareFreeModule) -> Result<CycleClass, Error> {
    let g = check_shape(m)?;
    let is_cycle = g.edge_count() == g.vertex_count() && (1..=g.vertex_count()).all(|v| g.valency(v) == 2);
    if !is_cycle {
        return Err(Error::Precondition("graph is not a cycle".into()));
    }
    let field = m.field();
    let tree = g.spanning_tree()?;
    let pos = rank_of_position(&tree, g.vertex_count());
    let mut zeros = Vec::new();
    for e in 0..g.edge_count() {
        let (v, w) = oriented(&g, &pos, e);
        for (side, x) in [(0, v), (1, w)] {
            if scalar_map(m, &g, x, e)?.is_zero() {
                zeros.push((e, side));
            }
        }
    }
    match zeros.as_slice() {
        [] => {
            let h = tree_normalize(m)?.chords[0].2.clone();
            Ok(CycleClass { point: (h, field.one()), distinguished_edge: None })
        }
        [(e, side)] => {
            let point = if *side == 0 { (field.zero(), field.one()) } else { (field.one(), field.zero()) };
            Ok(CycleClass { point, distinguished_edge: Some(g.edges()[*e]) })
        }
        _ => Err(Error::Precondition("module is decomposable: more than one zero map".into())),
    }
}

/// On a tree: the isomorphic module with every map `1`, and the per-face basis changes.
pub fn normalize_genus0(m: &SquareFreeModule) -> Result<(SquareFreeModule, Vec<Matrix>), Error> {
    let g = check_shape(m)?;
    if g.genus()? != 0 {
        return Err(Error::Precondition("graph is not a tree".into()));
    }
    let field = m.field();
    let gauge = gauge(m, &g).map_err(|e| match e {
        Error::Precondition(s) => Error::Precondition(format!("decomposable: {s}")),
        other => other,
    })?;
    let complex = m.complex();
    let mut changes = Vec::with_capacity(complex.face_count());
    for &f in complex.faces() {
        let d = m.dim_at(f);
        let scale = match f.len() {
            0 if d == 1 => {
                let phi = m.map(Face::EMPTY, Face::vertex(1))?.get(0, 0).clone();
                if phi.is_zero() {
                    return Err(Error::Precondition("decomposable: M_∅ does not reach vertex 1".into()));
                }
                phi.inverse().unwrap()
            }
            1 => gauge.b[f.to_vec()[0]].clone(),
            2 => {
                let v = f.to_vec();
                gauge.c[&g.edge_index(v[0], v[1]).unwrap()].clone()
            }
            _ => field.one(),
        };
        changes.push(Matrix::identity(field, d).scale(&scale));
    }
    Ok((m.change_basis(&changes)?, changes))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::Rational(num_rational::BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn structure_module_has_trivial_holonomy() {
        let g = Graph::k33();
        let k = SquareFreeModule::structure_module(&g.complex(), Q);
        let nf = tree_normalize(&k).unwrap();
        assert_eq!(nf.chords.len(), 4);
        assert!(nf.holonomies().iter().all(Scalar::is_one));
    }

    #[test]
    fn triangle_with_one_two_edge() {
        let g = Graph::cycle(3).unwrap();
        let e = g.edge_index(2, 3).unwrap();
        let m = edge_module_at_point(&g, Q, e, &Q.one(), &Q.from_i64(2)).unwrap();
        assert_eq!(tree_normalize(&m).unwrap().holonomies(), vec![q(1, 2)]);
    }

    #[test]
    fn round_trip_and_isomorphism() {
        let g = Graph::theta(&[1, 1, 1]).unwrap();
        let h = vec![q(2, 3), q(-5, 1)];
        let m = module_from_holonomies(&g, Q, &h).unwrap();
        assert!(m.is_cm());
        assert_eq!(tree_normalize(&m).unwrap().holonomies(), h);
        let changes: Vec<Matrix> = m.dims().iter().enumerate().map(|(i, &d)| Matrix::identity(Q, d).scale(&Q.from_i64(i as i64 + 2))).collect();
        let n = m.change_basis(&changes).unwrap();
        assert!(jacobian_is_isomorphic(&m, &n).unwrap());
        let other = module_from_holonomies(&g, Q, &[q(2, 3), q(-4, 1)]).unwrap();
        assert!(!jacobian_is_isomorphic(&m, &other).unwrap());
        assert!(module_from_holonomies(&g, Q, &[Q.zero(), Q.one()]).is_err());
    }

    #[test]
    fn cycle_sections_only_at_one_one() {
        let g = Graph::cycle(4).unwrap();
        let trivial = module_from_holonomies(&g, Q, &[Q.one()]).unwrap();
        assert_eq!(trivial.global_sections(), 1);
        assert_eq!(classify_cycle_graph(&trivial).unwrap().point, (Q.one(), Q.one()));
        let m = module_from_holonomies(&g, Q, &[Q.from_i64(3)]).unwrap();
        assert_eq!(m.global_sections(), 0);
    }

    #[test]
    fn doubled_points_differ_by_edge() {
        let g = Graph::cycle(4).unwrap();
        let a = edge_module_at_point(&g, Q, 0, &Q.zero(), &Q.one()).unwrap();
        let b = edge_module_at_point(&g, Q, 2, &Q.zero(), &Q.one()).unwrap();
        let ca = classify_cycle_graph(&a).unwrap();
        let cb = classify_cycle_graph(&b).unwrap();
        assert_eq!(ca.point, cb.point);
        assert_ne!(ca.distinguished_edge, cb.distinguished_edge);
        let both = edge_module_at_point(&g, Q, 0, &Q.zero(), &Q.zero()).unwrap();
        assert!(classify_cycle_graph(&both).is_err());
    }

    #[test]
    fn genus_zero_normalization() {
        let g = Graph::path(3).unwrap();
        let mut maps = BTreeMap::new();
        for (e, k) in [(0usize, [2i64, 3]), (1, [5, 7])] {
            let (a, b) = g.edges()[e];
            maps.insert((a, e), Matrix::from_i64(Q, &[&[k[0]]]));
            maps.insert((b, e), Matrix::from_i64(Q, &[&[k[1]]]));
        }
        let m = SquareFreeModule::graph_module_with_kernel_sections(&g, Q, &[1, 1, 1], &[1, 1], &maps).unwrap();
        let (n, _) = normalize_genus0(&m).unwrap();
        assert_eq!(n, SquareFreeModule::structure_module(&g.complex(), Q));
        let (again, _) = normalize_genus0(&n).unwrap();
        assert_eq!(again, n);
        maps.insert((1, 0), Matrix::from_i64(Q, &[&[0]]));
        let z = SquareFreeModule::graph_module_with_kernel_sections(&g, Q, &[1, 1, 1], &[1, 1], &maps).unwrap();
        assert!(normalize_genus0(&z).is_err());
    }
}
