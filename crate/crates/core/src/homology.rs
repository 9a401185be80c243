//! Reduced and relative simplicial homology over an exact field.
//!
//! Chains live on sorted face lists. The boundary of `[v_0 < ... < v_k]` is
//! `Σ (-1)^j [.. v̂_j ..]`, and a vertex bounds `∅`, so homology is reduced.

use alloc::vec;
use alloc::vec::Vec;

use crate::complex::{Face, SimplicialComplex};
use crate::error::Error;
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;

/// Boundary matrices between consecutive chain groups of a face list.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    field: Field,
    /// `groups[k]` are the faces of size `k` (dimension `k - 1`).
    groups: Vec<Vec<Face>>,
    /// `boundaries[k]` maps `groups[k]` to `groups[k - 1]`; `boundaries[0]` is empty.
    boundaries: Vec<Matrix>,
}

impl ChainComplex {
    /// Chains on an arbitrary face set. Faces of `quotient` are dropped from the
    /// boundary, so passing a subcomplex gives relative chains.
    pub fn new(field: Field, faces: &[Face]) -> ChainComplex {
        let top = faces.iter().map(|f| f.len()).max().map_or(0, |m| m + 1);
        let mut groups: Vec<Vec<Face>> = vec![Vec::new(); top.max(1) + 1];
        for &f in faces {
            groups[f.len()].push(f);
        }
        for g in &mut groups {
            g.sort();
            g.dedup();
        }
        let mut boundaries = vec![Matrix::zeros(field, 0, groups[0].len())];
        for k in 1..groups.len() {
            let mut m = Matrix::zeros(field, groups[k - 1].len(), groups[k].len());
            for (j, &f) in groups[k].iter().enumerate() {
                for (pos, v) in f.vertices().enumerate() {
                    if let Ok(i) = groups[k - 1].binary_search(&f.without(v)) {
                        let s = if pos % 2 == 0 { field.one() } else { -field.one() };
                        m.set(i, j, s);
                    }
                }
            }
            boundaries.push(m);
        }
        ChainComplex { field, groups, boundaries }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Faces spanning the chain group of dimension `i`.
    pub fn basis(&self, i: isize) -> &[Face] {
        let k = i + 1;
        if k < 0 || k as usize >= self.groups.len() {
            return &[];
        }
        &self.groups[k as usize]
    }

    /// `∂_i : C_i -> C_{i-1}`.
    pub fn boundary(&self, i: isize) -> Matrix {
        let k = i + 1;
        let rows = self.basis(i - 1).len();
        let cols = self.basis(i).len();
        if k < 1 || k as usize >= self.boundaries.len() {
            return Matrix::zeros(self.field, rows, cols);
        }
        self.boundaries[k as usize].clone()
    }

    pub fn homology(&self, i: isize) -> HomologyGroup {
        HomologyGroup::compute(self, i)
    }
}

/// A homology group with a fixed basis of representative cycles.
#[derive(Clone, Debug)]
pub struct HomologyGroup {
    pub degree: isize,
    /// Faces indexing chain coordinates.
    pub chain_basis: Vec<Face>,
    /// Representative cycles, as columns over `chain_basis`.
    pub representatives: Matrix,
    /// Basis of boundaries followed by the representatives, for coordinate solves.
    solver: Matrix,
    boundary_rank: usize,
}

impl HomologyGroup {
    fn compute(cc: &ChainComplex, i: isize) -> HomologyGroup {
        let field = cc.field;
        let chain_basis = cc.basis(i).to_vec();
        let n = chain_basis.len();
        let cycles = cc.boundary(i).nullspace();
        let boundaries = cc.boundary(i + 1).column_space();
        let boundary_rank = boundaries.cols();
        let mut solver = boundaries;
        let mut reps: Vec<Vec<Scalar>> = Vec::new();
        let mut rank = boundary_rank;
        for z in cycles {
            let candidate = solver.hstack(&Matrix::column_vector(field, &z)).unwrap();
            if candidate.rank() > rank {
                rank += 1;
                solver = candidate;
                reps.push(z);
            }
        }
        HomologyGroup {
            degree: i,
            chain_basis,
            representatives: Matrix::from_columns(field, n, &reps),
            solver,
            boundary_rank,
        }
    }

    pub fn dim(&self) -> usize {
        self.representatives.cols()
    }

    /// Coordinates of the class of a cycle `z` (over `chain_basis`).
    pub fn coordinates(&self, z: &[Scalar]) -> Result<Vec<Scalar>, Error> {
        let x = self
            .solver
            .solve(z)?
            .ok_or_else(|| Error::Precondition("chain is not a cycle of this group".into()))?;
        Ok(x[self.boundary_rank..].to_vec())
    }

    /// Restricts a chain over another face list to this group's chain basis.
    pub fn project(&self, faces: &[Face], z: &[Scalar]) -> Vec<Scalar> {
        let field = self.representatives.field();
        let mut out = vec![field.zero(); self.chain_basis.len()];
        for (f, x) in faces.iter().zip(z) {
            if let Ok(k) = self.chain_basis.binary_search(f) {
                out[k] = x.clone();
            }
        }
        out
    }
}

/// `H̃_i` of an arbitrary (downward closed) face list; the empty list is the void complex.
pub fn homology_of_faces(field: Field, faces: &[Face], i: isize) -> HomologyGroup {
    ChainComplex::new(field, faces).homology(i)
}

pub fn reduced_homology(c: &SimplicialComplex, field: Field, i: isize) -> HomologyGroup {
    homology_of_faces(field, c.faces(), i)
}

/// `H̃_i(Δ, Δ - F)`, computed on the chains of the closed star's open part `st F`.
pub fn relative_homology(c: &SimplicialComplex, field: Field, f: Face, i: isize) -> Result<HomologyGroup, Error> {
    c.require(f)?;
    Ok(homology_of_faces(field, &c.star(f), i))
}

/// The map `H̃_i(Δ, Δ - F) -> H̃_i(Δ, Δ - G)` for `F ⊆ G`, in the chosen bases.
pub fn natural_map(c: &SimplicialComplex, field: Field, f: Face, g: Face, i: isize) -> Result<Matrix, Error> {
    if !f.is_subset(g) {
        return Err(Error::Precondition("natural maps need F ⊆ G".into()));
    }
    let src = relative_homology(c, field, f, i)?;
    let dst = relative_homology(c, field, g, i)?;
    natural_map_between(&src, &dst)
}

pub(crate) fn natural_map_between(src: &HomologyGroup, dst: &HomologyGroup) -> Result<Matrix, Error> {
    let field = src.representatives.field();
    let mut cols = Vec::with_capacity(src.dim());
    for rep in src.representatives.columns() {
        cols.push(dst.coordinates(&dst.project(&src.chain_basis, &rep))?);
    }
    Ok(Matrix::from_columns(field, dst.dim(), &cols))
}

/// The natural map `H̃_{d-1}(Δ) -> H̃_{d-1}(Δ, Δ - F)`.
pub fn natural_restriction(c: &SimplicialComplex, field: Field, f: Face) -> Result<Matrix, Error> {
    natural_map(c, field, Face::EMPTY, f, c.dim())
}

/// Vanishing of `H̃_i(Δ)` and every `H̃_i(Δ, Δ - F)` for `i <= dim - 1`.
pub fn is_cm_complex(c: &SimplicialComplex, field: Field) -> bool {
    let top = c.dim();
    c.faces().iter().all(|&f| {
        let star = c.star(f);
        let cc = ChainComplex::new(field, &star);
        (-1..top).all(|i| cc.homology(i).dim() == 0)
    })
}

/// `H̃_i(Δ) = 0` and `H̃_i(Δ - F) = 0` for `0 <= i <= dim - 1` and every face `F`.
pub fn is_two_cm_complex(c: &SimplicialComplex, field: Field) -> bool {
    let top = c.dim();
    let whole = ChainComplex::new(field, c.faces());
    if (0..top).any(|i| whole.homology(i).dim() != 0) {
        return false;
    }
    c.faces().iter().filter(|f| !f.is_empty()).all(|&f| {
        let cc = ChainComplex::new(field, &c.deletion(f));
        (0..top).all(|i| cc.homology(i).dim() == 0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    const Q: Field = Field::Rational;

    fn two_triangles_at_vertex() -> Graph {
        Graph::new(5, &[(1, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 5)]).unwrap()
    }

    #[test]
    fn boundary_squares_to_zero() {
        let c = SimplicialComplex::from_facets(4, &[Face::from_vertices(&[1, 2, 3]).unwrap(), Face::edge(3, 4)]).unwrap();
        let cc = ChainComplex::new(Q, c.faces());
        for i in 0..=2 {
            assert!(cc.boundary(i - 1).mul(&cc.boundary(i)).unwrap().is_zero());
        }
    }

    #[test]
    fn graph_homology() {
        let k = Graph::k33().complex();
        assert_eq!(reduced_homology(&k, Q, 1).dim(), 4);
        assert_eq!(reduced_homology(&k, Q, 0).dim(), 0);
        let tree = Graph::path(4).unwrap().complex();
        assert_eq!(reduced_homology(&tree, Q, 1).dim(), 0);
        let two = Graph::new(4, &[(1, 2), (3, 4)]).unwrap().complex();
        assert_eq!(reduced_homology(&two, Q, 0).dim(), 1);
    }

    #[test]
    fn relative_examples() {
        let k = Graph::k33().complex();
        assert_eq!(relative_homology(&k, Q, Face::edge(1, 4), 1).unwrap().dim(), 1);
        let c3 = Graph::cycle(3).unwrap().complex();
        assert_eq!(relative_homology(&c3, Q, Face::vertex(2), 1).unwrap().dim(), 1);
        let tree = Graph::path(3).unwrap().complex();
        assert_eq!(relative_homology(&tree, Q, Face::vertex(1), 1).unwrap().dim(), 0);
        assert!(relative_homology(&c3, Q, Face::vertex(5), 1).is_err());
    }

    #[test]
    fn restriction_maps() {
        let c3 = Graph::cycle(3).unwrap().complex();
        assert_eq!(natural_restriction(&c3, Q, Face::EMPTY).unwrap(), Matrix::identity(Q, 1));
        let m = natural_restriction(&c3, Q, Face::vertex(1)).unwrap();
        assert_eq!(m.shape(), (1, 1));
        assert!(!m.is_zero());
        // a triangle hanging off a square through vertex 1: the square avoids vertex 5
        let g = Graph::new(6, &[(1, 2), (2, 3), (3, 4), (1, 4), (1, 5), (5, 6), (1, 6)]).unwrap();
        let c = g.complex();
        let r = natural_restriction(&c, Q, Face::vertex(5)).unwrap();
        assert_eq!(r.rank(), 1);
        assert_eq!(r.cols(), 2);
    }

    #[test]
    fn cm_and_two_cm() {
        assert!(is_cm_complex(&Graph::k33().complex(), Q));
        assert!(!is_cm_complex(&Graph::new(4, &[(1, 2), (3, 4)]).unwrap().complex(), Q));
        assert!(is_two_cm_complex(&Graph::cycle(3).unwrap().complex(), Q));
        assert!(is_two_cm_complex(&Graph::k33().complex(), Q));
        assert!(!is_two_cm_complex(&two_triangles_at_vertex().complex(), Q));
        let solid = SimplicialComplex::from_facets(3, &[Face::from_vertices(&[1, 2, 3]).unwrap()]).unwrap();
        assert!(is_cm_complex(&solid, Q));
    }
}
