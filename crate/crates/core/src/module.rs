//! Square-free modules, stored by their square-free degrees.
//!
//! A module assigns a vector space `M_F` to each face and a matrix
//! `φ_{F,F∪i}` (shape `dim M_{F∪i} x dim M_F`) to each covering pair.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::complex::{Face, SimplicialComplex};
use crate::error::Error;
use crate::field::{Field, Scalar};
use crate::graph::Graph;
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareFreeModule {
    complex: SimplicialComplex,
    field: Field,
    dims: Vec<usize>,
    /// Aligned with `complex.covers()`.
    maps: Vec<Matrix>,
}

/// A family of per-face matrices `ψ_F : M_F -> N_F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleHom {
    pub components: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiemannRochReport {
    pub l: usize,
    pub l_omega: usize,
    pub degree: i64,
    pub genus: usize,
    pub holds: bool,
}

impl SquareFreeModule {
    /// Assembles a module without checking anything; see [`validate`](Self::validate).
    pub fn from_parts(complex: SimplicialComplex, field: Field, dims: Vec<usize>, maps: Vec<Matrix>) -> SquareFreeModule {
        SquareFreeModule { complex, field, dims, maps }
    }

    /// Assembles and validates.
    pub fn new(complex: SimplicialComplex, field: Field, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<SquareFreeModule, Error> {
        let m = SquareFreeModule::from_parts(complex, field, dims, maps);
        m.validate()?;
        Ok(m)
    }

    /// Builds from per-face dimensions and a sparse map table keyed by
    /// `(from, to)` faces; absent maps are zero.
    pub fn from_face_data(
        complex: SimplicialComplex,
        field: Field,
        dims: &BTreeMap<Face, usize>,
        maps: &BTreeMap<(Face, Face), Matrix>,
    ) -> Result<SquareFreeModule, Error> {
        for (&f, &d) in dims {
            if d > 0 && !complex.contains(f) {
                return Err(Error::InvalidModule(format!("nonzero dimension at non-face {f}")));
            }
        }
        for &(f, g) in maps.keys() {
            let ok = match (complex.index_of(f), complex.index_of(g)) {
                (Some(a), Some(b)) => complex.cover_between(a, b).is_some(),
                _ => false,
            };
            if !ok {
                return Err(Error::InvalidModule(format!("{f}->{g} is not a covering pair of faces")));
            }
        }
        let dv: Vec<usize> = complex.faces().iter().map(|f| dims.get(f).copied().unwrap_or(0)).collect();
        let mut mv = Vec::with_capacity(complex.covers().len());
        for c in complex.covers() {
            let key = (complex.face(c.from), complex.face(c.to));
            mv.push(match maps.get(&key) {
                Some(m) => m.clone(),
                None => Matrix::zeros(field, dv[c.to], dv[c.from]),
            });
        }
        SquareFreeModule::new(complex, field, dv, mv)
    }

    /// Shape, field and commutativity checks.
    pub fn validate(&self) -> Result<(), Error> {
        let c = &self.complex;
        if self.dims.len() != c.face_count() {
            return Err(Error::InvalidModule(format!("{} dimensions for {} faces", self.dims.len(), c.face_count())));
        }
        if self.maps.len() != c.covers().len() {
            return Err(Error::InvalidModule(format!("{} maps for {} covering pairs", self.maps.len(), c.covers().len())));
        }
        for (k, cov) in c.covers().iter().enumerate() {
            let m = &self.maps[k];
            let want = (self.dims[cov.to], self.dims[cov.from]);
            if m.shape() != want {
                return Err(Error::InvalidModule(format!(
                    "map {}->{} has shape {}x{}, expected {}x{}",
                    c.face(cov.from),
                    c.face(cov.to),
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1
                )));
            }
            if m.field() != self.field {
                return Err(Error::InvalidModule(format!("map over {} in a module over {}", m.field(), self.field)));
            }
        }
        for (fi, &f) in c.faces().iter().enumerate() {
            let outs: Vec<usize> = (1..=c.vertex_count()).filter(|&v| !f.contains(v) && c.contains(f.with(v))).collect();
            for (a, &i) in outs.iter().enumerate() {
                for &j in &outs[a + 1..] {
                    let Some(top) = c.index_of(f.with(i).with(j)) else { continue };
                    let fi_ = c.index_of(f.with(i)).unwrap();
                    let fj = c.index_of(f.with(j)).unwrap();
                    let via_i = self.map_by_index(fi_, top).mul(self.map_by_index(fi, fi_))?;
                    let via_j = self.map_by_index(fj, top).mul(self.map_by_index(fi, fj))?;
                    if via_i != via_j {
                        return Err(Error::InvalidModule(format!(
                            "square at {f} through {} and {} does not commute",
                            f.with(i),
                            f.with(j)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    /// `dim M_F`, zero off the complex.
    pub fn dim_at(&self, f: Face) -> usize {
        self.complex.index_of(f).map_or(0, |i| self.dims[i])
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    fn map_by_index(&self, from: usize, to: usize) -> &Matrix {
        &self.maps[self.complex.cover_between(from, to).expect("covering pair")]
    }

    /// `φ_{F,G}` for `F ⊆ G`, composed along any maximal chain.
    pub fn map(&self, from: Face, to: Face) -> Result<Matrix, Error> {
        let mut cur = self.complex.require(from)?;
        self.complex.require(to)?;
        if !from.is_subset(to) {
            return Err(Error::Precondition(format!("{from} is not contained in {to}")));
        }
        let mut acc = Matrix::identity(self.field, self.dims[cur]);
        let mut face = from;
        for v in to.vertices().filter(|&v| !from.contains(v)) {
            let next = self.complex.index_of(face.with(v)).unwrap();
            acc = self.map_by_index(cur, next).mul(&acc)?;
            face = face.with(v);
            cur = next;
        }
        Ok(acc)
    }

    /// The cover map `φ_{F,F∪v}`.
    pub fn cover_map(&self, from: Face, v: usize) -> Result<&Matrix, Error> {
        let a = self.complex.require(from)?;
        let b = self.complex.require(from.with(v))?;
        Ok(self.map_by_index(a, b))
    }

    pub fn graph(&self) -> Result<Graph, Error> {
        Graph::from_complex(&self.complex)
    }

    /// `d_i = dim M_{i} - 1` for each vertex.
    pub fn multi_degree(&self) -> Vec<i64> {
        (1..=self.complex.vertex_count()).map(|v| self.dim_at(Face::vertex(v)) as i64 - 1).collect()
    }

    pub fn degree(&self) -> i64 {
        self.multi_degree().iter().sum()
    }

    /// `l(M) = dim M_∅`.
    pub fn global_sections(&self) -> usize {
        self.dim_at(Face::EMPTY)
    }

    pub fn is_locally_rank_one(&self) -> bool {
        self.complex.faces_of_size(2).all(|(i, _)| self.dims[i] == 1)
    }

    pub fn structure_module(complex: &SimplicialComplex, field: Field) -> SquareFreeModule {
        let dims = vec![1; complex.face_count()];
        let maps = vec![Matrix::identity(field, 1); complex.covers().len()];
        SquareFreeModule::from_parts(complex.clone(), field, dims, maps)
    }

    pub fn zero_module(complex: &SimplicialComplex, field: Field) -> SquareFreeModule {
        let dims = vec![0; complex.face_count()];
        let maps = vec![Matrix::zeros(field, 0, 0); complex.covers().len()];
        SquareFreeModule::from_parts(complex.clone(), field, dims, maps)
    }

    fn same_base(&self, other: &SquareFreeModule) -> Result<(), Error> {
        if self.complex != other.complex {
            return Err(Error::Precondition("modules live on different complexes".into()));
        }
        if self.field != other.field {
            return Err(Error::Precondition(format!("fields {} and {} differ", self.field, other.field)));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &SquareFreeModule) -> Result<SquareFreeModule, Error> {
        self.same_base(other)?;
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let mut maps = Vec::with_capacity(self.maps.len());
        for (k, c) in self.complex.covers().iter().enumerate() {
            let mut m = Matrix::zeros(self.field, dims[c.to], dims[c.from]);
            m.set_block(0, 0, &self.maps[k]);
            m.set_block(self.dims[c.to], self.dims[c.from], &other.maps[k]);
            maps.push(m);
        }
        Ok(SquareFreeModule::from_parts(self.complex.clone(), self.field, dims, maps))
    }

    /// The submodule with `N_F` spanned by the columns of `bases[F]`, which must
    /// be independent and carried into each other by the maps.
    pub fn submodule(&self, bases: &[Matrix]) -> Result<SquareFreeModule, Error> {
        if bases.len() != self.dims.len() {
            return Err(Error::DimensionMismatch("one basis per face".into()));
        }
        let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
        let mut maps = Vec::with_capacity(self.maps.len());
        for (k, c) in self.complex.covers().iter().enumerate() {
            let image = self.maps[k].mul(&bases[c.from])?;
            let m = bases[c.to]
                .solve_matrix(&image)?
                .ok_or_else(|| Error::InvalidModule("subspaces are not closed under the module maps".into()))?;
            maps.push(m);
        }
        Ok(SquareFreeModule::from_parts(self.complex.clone(), self.field, dims, maps))
    }

    /// Rewrites the module in new bases: column `j` of `changes[F]` is the
    /// `j`-th new basis vector of `M_F` in old coordinates.
    pub fn change_basis(&self, changes: &[Matrix]) -> Result<SquareFreeModule, Error> {
        if changes.len() != self.dims.len() {
            return Err(Error::DimensionMismatch("one basis change per face".into()));
        }
        let mut inverses = Vec::with_capacity(changes.len());
        for (i, p) in changes.iter().enumerate() {
            if p.shape() != (self.dims[i], self.dims[i]) {
                return Err(Error::DimensionMismatch(format!("basis change at {}", self.complex.face(i))));
            }
            inverses.push(p.inverse().ok_or_else(|| Error::Precondition("basis change is not invertible".into()))?);
        }
        let mut maps = Vec::with_capacity(self.maps.len());
        for (k, c) in self.complex.covers().iter().enumerate() {
            maps.push(inverses[c.to].mul(&self.maps[k])?.mul(&changes[c.from])?);
        }
        Ok(SquareFreeModule::from_parts(self.complex.clone(), self.field, self.dims.clone(), maps))
    }

    /// Faces `σ ⊇ τ` grouped by size, as face indices.
    fn upper_faces(&self, tau: Face) -> Vec<Vec<usize>> {
        let top = self.complex.dim() + 1;
        let mut groups = vec![Vec::new(); (top.max(0) as usize) + 1];
        for (i, &f) in self.complex.faces().iter().enumerate() {
            if tau.is_subset(f) {
                groups[f.len()].push(i);
            }
        }
        groups
    }

    /// `d^i : K^i -> K^{i+1}` of the cocomplex at degree `-τ`.
    fn differential(&self, from: &[usize], to: &[usize]) -> Matrix {
        let rows: usize = to.iter().map(|&i| self.dims[i]).sum();
        let cols: usize = from.iter().map(|&i| self.dims[i]).sum();
        let mut m = Matrix::zeros(self.field, rows, cols);
        let mut c0 = 0;
        for &s in from {
            let sigma = self.complex.face(s);
            let mut r0 = 0;
            for &t in to {
                let target = self.complex.face(t);
                if sigma.is_subset(target) {
                    let j = target.without_all(sigma);
                    let phi = self.map_by_index(s, t);
                    let block = if sigma.sign_is_negative(j) { phi.scale(&-self.field.one()) } else { phi.clone() };
                    m.set_block(r0, c0, &block);
                }
                r0 += self.dims[t];
            }
            c0 += self.dims[s];
        }
        m
    }

    /// Dimensions of `H^i` of `(K•)_{-τ}` for `i = 0..=dim Δ + 1`.
    pub fn local_cohomology_dims(&self, tau: Face) -> Vec<usize> {
        let groups = self.upper_faces(tau);
        let n = groups.len();
        let size: Vec<usize> = groups.iter().map(|g| g.iter().map(|&i| self.dims[i]).sum()).collect();
        let ranks: Vec<usize> = (0..n)
            .map(|i| if i + 1 < n { self.differential(&groups[i], &groups[i + 1]).rank() } else { 0 })
            .collect();
        (0..n).map(|i| size[i] - ranks[i] - if i > 0 { ranks[i - 1] } else { 0 }).collect()
    }

    /// Local cohomology at `τ` given as a vertex list.
    pub fn local_cohomology_at(&self, tau: &[usize]) -> Result<Vec<usize>, Error> {
        let f = Face::from_vertices(tau).map_err(|_| Error::Precondition(format!("{tau:?} is not square-free")))?;
        if f.max_vertex() > self.complex.vertex_count() {
            return Err(Error::Precondition(format!("{f} uses a vertex outside the complex")));
        }
        Ok(self.local_cohomology_dims(f))
    }

    /// `d = dim Δ + 1`.
    pub fn cm_dimension(&self) -> usize {
        (self.complex.dim() + 1).max(0) as usize
    }

    /// Vanishing below degree `d` at every face `τ`; non-faces give zero complexes.
    pub fn is_cm(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        let d = self.cm_dimension();
        self.complex.faces().iter().all(|&tau| self.local_cohomology_dims(tau)[..d].iter().all(|&h| h == 0))
    }

    /// The graph criterion: `M_∅` injects onto the kernel of `⊕M_v -> ⊕M_e`,
    /// and each `φ_v : M_v -> ⊕_{e∋v} M_e` is injective.
    pub fn is_cm_graph(&self) -> Result<bool, Error> {
        let g = self.graph()?;
        if self.is_zero() {
            return Ok(true);
        }
        if g.edge_count() == 0 {
            return Ok(self.is_cm());
        }
        for v in 1..=g.vertex_count() {
            let fv = self.complex.index_of(Face::vertex(v)).unwrap();
            let edges: Vec<usize> = g.incident_edges(v).iter().map(|&e| self.complex.index_of(g.edge_face(e)).unwrap()).collect();
            if self.differential(&[fv], &edges).rank() != self.dims[fv] {
                return Ok(false);
            }
        }
        let groups = self.upper_faces(Face::EMPTY);
        let d0 = self.differential(&groups[0], &groups[1]);
        let d1 = self.differential(&groups[1], &groups[2]);
        let kernel = d1.cols() - d1.rank();
        Ok(d0.rank() == self.dims[0] && self.dims[0] == kernel)
    }

    /// `dim (ω_M)_τ = Σ_{σ ⊇ τ} (-1)^{d-|σ|} dim M_σ`, indexed like the faces.
    pub fn omega_dims(&self) -> Result<Vec<usize>, Error> {
        if !self.is_cm() {
            return Err(Error::NotCohenMacaulay);
        }
        let d = self.cm_dimension() as i64;
        let faces = self.complex.faces();
        let mut out = Vec::with_capacity(faces.len());
        for &tau in faces {
            let mut s = 0i64;
            for (i, &sigma) in faces.iter().enumerate() {
                if tau.is_subset(sigma) {
                    let sign = if (d - sigma.len() as i64) % 2 == 0 { 1 } else { -1 };
                    s += sign * self.dims[i] as i64;
                }
            }
            if s < 0 {
                return Err(Error::InvalidModule(format!("negative omega dimension at {tau}")));
            }
            out.push(s as usize);
        }
        Ok(out)
    }

    /// `deg ω_M` from the vertex entries of [`omega_dims`](Self::omega_dims).
    pub fn omega_degree(&self) -> Result<i64, Error> {
        let dims = self.omega_dims()?;
        Ok((1..=self.complex.vertex_count())
            .map(|v| dims[self.complex.index_of(Face::vertex(v)).unwrap()] as i64 - 1)
            .sum())
    }

    /// Evaluates `l(M) - l(ω_M) = 1 + deg M - g`.
    pub fn riemann_roch_check(&self) -> Result<RiemannRochReport, Error> {
        let g = self.graph()?;
        if !g.is_connected() || g.edge_count() == 0 {
            return Err(Error::Precondition("support must be a connected graph with an edge".into()));
        }
        if !self.is_locally_rank_one() {
            return Err(Error::Precondition("module is not locally of rank 1".into()));
        }
        if !self.is_cm() {
            return Err(Error::NotCohenMacaulay);
        }
        let genus = g.genus()?;
        let l = self.global_sections();
        let l_omega = self.omega_dims()?[0];
        let degree = self.degree();
        let holds = l as i64 - l_omega as i64 == 1 + degree - genus as i64;
        Ok(RiemannRochReport { l, l_omega, degree, genus, holds })
    }

    /// Basis of `Hom(self, other)` from the naturality equations.
    pub fn hom_space(&self, other: &SquareFreeModule) -> Result<Vec<ModuleHom>, Error> {
        self.same_base(other)?;
        let nf = self.dims.len();
        let mut offset = vec![0usize; nf + 1];
        for i in 0..nf {
            offset[i + 1] = offset[i] + other.dims[i] * self.dims[i];
        }
        let unknowns = offset[nf];
        let var = |f: usize, r: usize, c: usize| offset[f] + r * self.dims[f] + c;
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        let zero = self.field.zero();
        for (k, cov) in self.complex.covers().iter().enumerate() {
            let (f, g) = (cov.from, cov.to);
            let phi_m = &self.maps[k];
            let phi_n = &other.maps[k];
            for r in 0..other.dims[g] {
                for c in 0..self.dims[f] {
                    let mut row = vec![zero.clone(); unknowns];
                    for kk in 0..self.dims[g] {
                        let a = phi_m.get(kk, c);
                        if !a.is_zero() {
                            row[var(g, r, kk)] = &row[var(g, r, kk)] + a;
                        }
                    }
                    for kk in 0..other.dims[f] {
                        let a = phi_n.get(r, kk);
                        if !a.is_zero() {
                            row[var(f, kk, c)] = &row[var(f, kk, c)] - a;
                        }
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let system = Matrix::from_rows(self.field, unknowns, rows)?;
        let basis = system.nullspace();
        Ok(basis
            .into_iter()
            .map(|x| ModuleHom {
                components: (0..nf)
                    .map(|f| {
                        let mut m = Matrix::zeros(self.field, other.dims[f], self.dims[f]);
                        for r in 0..other.dims[f] {
                            for c in 0..self.dims[f] {
                                m.set(r, c, x[var(f, r, c)].clone());
                            }
                        }
                        m
                    })
                    .collect(),
            })
            .collect())
    }

    pub fn end_space(&self) -> Result<Vec<ModuleHom>, Error> {
        self.hom_space(self)
    }

    /// Graph module whose `M_∅` is the full kernel of `⊕M_v -> ⊕M_e`, with
    /// `φ_{∅v}` the coordinate projections. `vertex_maps[(v, e)]` is `φ_{v,e}`.
    pub fn graph_module_with_kernel_sections(
        graph: &Graph,
        field: Field,
        vertex_dims: &[usize],
        edge_dims: &[usize],
        vertex_maps: &BTreeMap<(usize, usize), Matrix>,
    ) -> Result<SquareFreeModule, Error> {
        let complex = graph.complex();
        let n = graph.vertex_count();
        let mut dims = BTreeMap::new();
        let mut maps = BTreeMap::new();
        for v in 1..=n {
            dims.insert(Face::vertex(v), vertex_dims[v - 1]);
        }
        for (e, &(a, b)) in graph.edges().iter().enumerate() {
            dims.insert(Face::edge(a, b), edge_dims[e]);
            for v in [a, b] {
                let m = vertex_maps
                    .get(&(v, e))
                    .cloned()
                    .unwrap_or_else(|| Matrix::zeros(field, edge_dims[e], vertex_dims[v - 1]));
                maps.insert((Face::vertex(v), Face::edge(a, b)), m);
            }
        }
        let partial = SquareFreeModule::from_face_data(complex.clone(), field, &dims, &maps)?;
        let groups = partial.upper_faces(Face::EMPTY);
        let d1 = partial.differential(&groups[1], &groups[2]);
        let kernel = d1.kernel_matrix();
        dims.insert(Face::EMPTY, kernel.cols());
        let mut row = 0;
        for v in 1..=n {
            let block = kernel.block(row, 0, vertex_dims[v - 1], kernel.cols());
            row += vertex_dims[v - 1];
            maps.insert((Face::EMPTY, Face::vertex(v)), block);
        }
        SquareFreeModule::from_face_data(complex, field, &dims, &maps)
    }

    /// An indecomposable CM module with `l = 1` and degree `d`, `0 <= d <= g`:
    /// the first `d` chords of the BFS tree each acquire an extra basis vector
    /// at their tail.
    pub fn build_effective(graph: &Graph, field: Field, d: usize) -> Result<SquareFreeModule, Error> {
        let genus = graph.genus()?;
        if d > genus {
            return Err(Error::Precondition(format!("degree {d} outside 0..={genus}")));
        }
        let tree = graph.spanning_tree()?;
        let split: Vec<usize> = tree.chords[..d].to_vec();
        let n = graph.vertex_count();
        // extra[v] lists the split chords whose tail is v
        let mut extra: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        for &c in &split {
            extra[graph.edges()[c].0].push(c);
        }
        let one = field.one();
        let mut dims = BTreeMap::new();
        let mut maps = BTreeMap::new();
        dims.insert(Face::EMPTY, 1);
        for v in 1..=n {
            let dv = 1 + extra[v].len();
            dims.insert(Face::vertex(v), dv);
            let mut section = Matrix::zeros(field, dv, 1);
            for i in 0..dv {
                section.set(i, 0, one.clone());
            }
            maps.insert((Face::EMPTY, Face::vertex(v)), section);
        }
        for (e, &(a, b)) in graph.edges().iter().enumerate() {
            let ef = Face::edge(a, b);
            dims.insert(ef, 1);
            for v in [a, b] {
                let dv = 1 + extra[v].len();
                let mut m = Matrix::zeros(field, 1, dv);
                match extra[v].iter().position(|&c| c == e) {
                    Some(k) => m.set(0, 1 + k, one.clone()),
                    None => m.set(0, 0, one.clone()),
                }
                maps.insert((Face::vertex(v), ef), m);
            }
        }
        SquareFreeModule::from_face_data(graph.complex(), field, &dims, &maps)
    }

    /// `M_v = 0` on a set `σ` realizing the invariant `s`, `M_∅ = 0`, and `k`
    /// with identity maps elsewhere; degree `-s`.
    pub fn build_min_degree(graph: &Graph, field: Field) -> Result<SquareFreeModule, Error> {
        let s = graph.max_independent_connected_complement()?;
        let n = graph.vertex_count();
        let full: u64 = (1u64 << n) - 1;
        let sigma = (1..=full)
            .find(|&m| {
                m.count_ones() as usize == s
                    && !graph.edges().iter().any(|&(a, b)| m >> (a - 1) & 1 == 1 && m >> (b - 1) & 1 == 1)
                    && graph.induces_connected(full & !m)
            })
            .map(Face::from_bits)
            .unwrap_or(Face::EMPTY);
        let mut dims = BTreeMap::new();
        let mut maps = BTreeMap::new();
        for v in 1..=n {
            dims.insert(Face::vertex(v), usize::from(!sigma.contains(v)));
        }
        for &(a, b) in graph.edges() {
            let ef = Face::edge(a, b);
            dims.insert(ef, 1);
            for v in [a, b] {
                if !sigma.contains(v) {
                    maps.insert((Face::vertex(v), ef), Matrix::identity(field, 1));
                }
            }
        }
        SquareFreeModule::from_face_data(graph.complex(), field, &dims, &maps)
    }
}

impl Face {
    /// The single vertex of `self \ other`; panics unless that is one vertex.
    pub(crate) fn without_all(self, other: Face) -> usize {
        let rest = Face::from_bits(self.bits() & !other.bits());
        assert_eq!(rest.len(), 1, "faces differ by more than a vertex");
        rest.max_vertex()
    }
}

impl ModuleHom {
    pub fn compose(&self, first: &ModuleHom) -> Result<ModuleHom, Error> {
        let components = self.components.iter().zip(&first.components).map(|(a, b)| a.mul(b)).collect::<Result<_, _>>()?;
        Ok(ModuleHom { components })
    }

    pub fn add(&self, other: &ModuleHom) -> Result<ModuleHom, Error> {
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect::<Result<_, _>>()?;
        Ok(ModuleHom { components })
    }

    pub fn scale(&self, s: &Scalar) -> ModuleHom {
        ModuleHom { components: self.components.iter().map(|m| m.scale(s)).collect() }
    }

    pub fn identity(m: &SquareFreeModule) -> ModuleHom {
        ModuleHom { components: m.dims().iter().map(|&d| Matrix::identity(m.field(), d)).collect() }
    }

    pub fn zero(source: &SquareFreeModule, target: &SquareFreeModule) -> ModuleHom {
        ModuleHom {
            components: source.dims().iter().zip(target.dims()).map(|(&s, &t)| Matrix::zeros(source.field(), t, s)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Matrix::is_zero)
    }

    /// `Σ_F tr(ψ_F)`.
    pub fn trace(&self, field: Field) -> Scalar {
        self.components.iter().fold(field.zero(), |acc, m| &acc + &m.trace())
    }

    /// Checks `ψ_G φ^M = φ^N ψ_F` on every covering pair.
    pub fn is_natural(&self, source: &SquareFreeModule, target: &SquareFreeModule) -> Result<bool, Error> {
        for (k, c) in source.complex().covers().iter().enumerate() {
            let lhs = self.components[c.to].mul(&source.maps()[k])?;
            let rhs = target.maps()[k].mul(&self.components[c.from])?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn c3() -> Graph {
        Graph::cycle(3).unwrap()
    }

    #[test]
    fn structure_module_basics() {
        let m = SquareFreeModule::structure_module(&c3().complex(), Q);
        assert!(m.validate().is_ok());
        assert_eq!(m.total_dim(), 7);
        assert_eq!((m.degree(), m.global_sections()), (0, 1));
        let k = SquareFreeModule::structure_module(&Graph::k33().complex(), Q);
        assert_eq!((k.degree(), k.global_sections()), (0, 1));
    }

    #[test]
    fn shape_errors_are_reported() {
        let c = Graph::path(2).unwrap().complex();
        let mut dims = BTreeMap::new();
        for f in c.faces() {
            dims.insert(*f, 1);
        }
        let mut maps = BTreeMap::new();
        maps.insert((Face::vertex(1), Face::edge(1, 2)), Matrix::from_i64(Q, &[&[1], &[1]]));
        let err = SquareFreeModule::from_face_data(c, Q, &dims, &maps).unwrap_err();
        assert!(matches!(err, Error::InvalidModule(_)));
    }

    #[test]
    fn commutativity_errors_are_reported() {
        let c = Graph::path(2).unwrap().complex();
        let mut m = SquareFreeModule::structure_module(&c, Q);
        m.maps[0] = Matrix::from_i64(Q, &[&[2]]);
        assert!(m.validate().is_err());
    }

    #[test]
    fn local_cohomology_of_triangle() {
        let m = SquareFreeModule::structure_module(&c3().complex(), Q);
        assert_eq!(m.local_cohomology_dims(Face::EMPTY), vec![0, 0, 1]);
        let p = SquareFreeModule::structure_module(&Graph::path(3).unwrap().complex(), Q);
        assert_eq!(p.local_cohomology_dims(Face::EMPTY)[2], 0);
        let double = m.direct_sum(&m).unwrap();
        let single = m.local_cohomology_dims(Face::vertex(1));
        let twice: Vec<usize> = single.iter().map(|x| 2 * x).collect();
        assert_eq!(double.local_cohomology_dims(Face::vertex(1)), twice);
        assert!(m.local_cohomology_at(&[1, 1]).is_err());
    }

    #[test]
    fn edge_module_with_dead_edge_is_not_cm() {
        let c = Graph::path(2).unwrap().complex();
        let mut dims = BTreeMap::new();
        dims.insert(Face::EMPTY, 1);
        dims.insert(Face::vertex(1), 1);
        dims.insert(Face::vertex(2), 1);
        let mut maps = BTreeMap::new();
        maps.insert((Face::EMPTY, Face::vertex(1)), Matrix::identity(Q, 1));
        maps.insert((Face::EMPTY, Face::vertex(2)), Matrix::identity(Q, 1));
        let m = SquareFreeModule::from_face_data(c, Q, &dims, &maps).unwrap();
        assert!(!m.is_cm());
        assert!(!m.is_cm_graph().unwrap());
    }

    #[test]
    fn omega_dims_of_structure_modules() {
        let m = SquareFreeModule::structure_module(&c3().complex(), Q);
        assert_eq!(m.omega_dims().unwrap(), vec![1; 7]);
        let p = SquareFreeModule::structure_module(&Graph::path(3).unwrap().complex(), Q);
        assert_eq!(p.omega_dims().unwrap()[0], 0);
        let k = SquareFreeModule::structure_module(&Graph::k33().complex(), Q);
        assert_eq!(k.omega_dims().unwrap()[0], 4);
        assert_eq!(k.omega_degree().unwrap(), 6);
    }

    #[test]
    fn riemann_roch_for_structure_module() {
        for g in [c3(), Graph::k33(), Graph::petersen()] {
            let r = SquareFreeModule::structure_module(&g.complex(), Q).riemann_roch_check().unwrap();
            assert!(r.holds);
            assert_eq!(r.l_omega, r.genus);
        }
        let two = SquareFreeModule::structure_module(&c3().complex(), Q);
        let two = two.direct_sum(&two).unwrap();
        assert!(matches!(two.riemann_roch_check(), Err(Error::Precondition(_))));
    }

    #[test]
    fn hom_dimensions() {
        let k = SquareFreeModule::structure_module(&c3().complex(), Q);
        assert_eq!(k.end_space().unwrap().len(), 1);
        let kk = k.direct_sum(&k).unwrap();
        assert_eq!(kk.hom_space(&k).unwrap().len(), 2);
        assert_eq!(kk.end_space().unwrap().len(), 4);
        let z = SquareFreeModule::zero_module(&c3().complex(), Q);
        assert!(k.hom_space(&z).unwrap().is_empty());
        for h in kk.hom_space(&k).unwrap() {
            assert!(h.is_natural(&kk, &k).unwrap());
        }
    }

    #[test]
    fn effective_construction() {
        for (g, d) in [(c3(), 0), (c3(), 1), (Graph::k33(), 4), (Graph::petersen(), 3)] {
            let m = SquareFreeModule::build_effective(&g, Q, d).unwrap();
            assert_eq!((m.degree(), m.global_sections()), (d as i64, 1));
            assert!(m.is_cm() && m.is_locally_rank_one());
            assert!(m.multi_degree().iter().all(|&x| x >= 0));
            assert_eq!(m.end_space().unwrap().len(), 1);
        }
        assert_eq!(SquareFreeModule::build_effective(&c3(), Q, 0).unwrap(), SquareFreeModule::structure_module(&c3().complex(), Q));
        assert!(SquareFreeModule::build_effective(&c3(), Q, 2).is_err());
    }

    #[test]
    fn min_degree_construction() {
        for (g, s) in [(c3(), 1), (Graph::k33(), 2), (Graph::path(3).unwrap(), 2)] {
            let m = SquareFreeModule::build_min_degree(&g, Q).unwrap();
            assert_eq!(m.degree(), -(s as i64));
            assert_eq!(m.end_space().unwrap().len(), 1);
        }
    }

    #[test]
    fn change_of_basis_is_natural_iso() {
        let m = SquareFreeModule::build_effective(&c3(), Q, 1).unwrap();
        let mut changes: Vec<Matrix> = m.dims().iter().map(|&d| Matrix::identity(Q, d)).collect();
        let v1 = m.complex().index_of(Face::vertex(1)).unwrap();
        if m.dims()[v1] == 2 {
            changes[v1] = Matrix::from_i64(Q, &[&[1, 1], &[0, 2]]);
        } else {
            changes[v1] = Matrix::from_i64(Q, &[&[3]]);
        }
        let n = m.change_basis(&changes).unwrap();
        assert!(n.validate().is_ok());
        let hom = ModuleHom { components: changes.iter().map(|p| p.inverse().unwrap()).collect() };
        assert!(hom.is_natural(&m, &n).unwrap());
    }

    #[test]
    fn fast_cm_agrees_on_examples() {
        let k = SquareFreeModule::structure_module(&Graph::k33().complex(), Q);
        assert!(k.is_cm_graph().unwrap());
        let e = SquareFreeModule::build_effective(&Graph::k33(), Q, 2).unwrap();
        assert_eq!(e.is_cm_graph().unwrap(), e.is_cm());
    }
}
