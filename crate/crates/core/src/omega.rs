//! The canonical module `ω_{k[Δ]}` of a connected graph, with `(ω)_F` given by
//! `H̃_1(Δ, Δ - F)` and multiplication by the natural maps.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::Face;
use crate::error::Error;
use crate::field::{Field, Scalar};
use crate::graph::{Graph, SimpleCycle};
use crate::homology::{natural_map_between, relative_homology, HomologyGroup};
use crate::matrix::Matrix;
use crate::module::{ModuleHom, SquareFreeModule};

/// Edge coefficients of a 1-chain, indexed like [`Graph::edges`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleVector {
    coeffs: Vec<Scalar>,
}

impl CycleVector {
    pub fn new(coeffs: Vec<Scalar>) -> CycleVector {
        CycleVector { coeffs }
    }

    pub fn from_i64(field: Field, coeffs: &[i64]) -> CycleVector {
        CycleVector { coeffs: coeffs.iter().map(|&c| field.from_i64(c)).collect() }
    }

    pub fn from_simple_cycle(g: &Graph, field: Field, c: &SimpleCycle) -> CycleVector {
        CycleVector::from_i64(field, &c.signed_vector(g))
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Edge indices with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&e| !self.coeffs[e].is_zero()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Zero boundary at every vertex.
    pub fn is_cycle(&self, g: &Graph) -> bool {
        if self.coeffs.len() != g.edge_count() {
            return false;
        }
        let Some(f) = self.coeffs.first().map(Scalar::field) else { return true };
        let mut acc: Vec<Scalar> = (0..=g.vertex_count()).map(|_| f.zero()).collect();
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            acc[a] = &acc[a] - &self.coeffs[e];
            acc[b] = &acc[b] + &self.coeffs[e];
        }
        acc.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, s: &Scalar) -> CycleVector {
        CycleVector { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, other: &CycleVector) -> CycleVector {
        CycleVector { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }
}

/// A submodule of `ω` generated by cycles, with its inclusion.
#[derive(Clone, Debug)]
pub struct GeneratedSubmodule {
    pub generators: Vec<CycleVector>,
    pub module: SquareFreeModule,
    /// `inclusion.components[F]` has the basis of `M_F` as columns in `(ω)_F` coordinates.
    pub inclusion: ModuleHom,
}

impl GeneratedSubmodule {
    /// Always true: the module sits inside `ω` by construction.
    pub fn is_special(&self) -> bool {
        true
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalOmega {
    graph: Graph,
    field: Field,
    groups: Vec<HomologyGroup>,
    /// Per face, the natural map from `H̃_1(Δ)` to `(ω)_F`.
    restrictions: Vec<Matrix>,
    module: SquareFreeModule,
}

impl CanonicalOmega {
    pub fn build(graph: &Graph, field: Field) -> Result<CanonicalOmega, Error> {
        if !graph.is_connected() {
            return Err(Error::Precondition("ω is built for connected graphs".into()));
        }
        let complex = graph.complex();
        let groups: Vec<HomologyGroup> = complex
            .faces()
            .iter()
            .map(|&f| relative_homology(&complex, field, f, 1))
            .collect::<Result<_, _>>()?;
        let mut maps = Vec::with_capacity(complex.covers().len());
        for c in complex.covers() {
            maps.push(natural_map_between(&groups[c.from], &groups[c.to])?);
        }
        let restrictions = groups.iter().map(|g| natural_map_between(&groups[0], g)).collect::<Result<Vec<_>, _>>()?;
        let dims = groups.iter().map(HomologyGroup::dim).collect();
        let module = SquareFreeModule::new(complex, field, dims, maps)?;
        Ok(CanonicalOmega { graph: graph.clone(), field, groups, restrictions, module })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn module(&self) -> &SquareFreeModule {
        &self.module
    }

    pub fn genus(&self) -> usize {
        self.groups[0].dim()
    }

    /// Representatives of the chosen basis of `H̃_1(Δ)`.
    pub fn cycle_basis(&self) -> Vec<CycleVector> {
        self.groups[0].representatives.columns().into_iter().map(CycleVector::new).collect()
    }

    /// The natural map `H̃_1(Δ) -> (ω)_F`.
    pub fn restriction(&self, f: Face) -> Result<&Matrix, Error> {
        let i = self.module.complex().require(f)?;
        Ok(&self.restrictions[i])
    }

    /// The homology group realizing `(ω)_F`.
    pub fn group(&self, f: Face) -> Result<&HomologyGroup, Error> {
        let i = self.module.complex().require(f)?;
        Ok(&self.groups[i])
    }

    /// Coordinates of a cycle in the basis of `H̃_1(Δ)`.
    pub fn coordinates(&self, z: &CycleVector) -> Result<Vec<Scalar>, Error> {
        if !z.is_cycle(&self.graph) {
            return Err(Error::Precondition("chain is not a cycle of the graph".into()));
        }
        self.groups[0].coordinates(z.coeffs())
    }

    fn coordinate_matrix(&self, s: &[CycleVector]) -> Result<Matrix, Error> {
        let cols = s.iter().map(|z| self.coordinates(z)).collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix::from_columns(self.field, self.genus(), &cols))
    }

    /// `M_∅ = span S`, `M_F` its image in `(ω)_F`, maps restricted from `ω`.
    pub fn submodule_generated(&self, s: &[CycleVector]) -> Result<GeneratedSubmodule, Error> {
        let coords = self.coordinate_matrix(s)?;
        let base = coords.column_space();
        let bases: Vec<Matrix> = self.restrictions.iter().map(|r| r.mul(&base).map(|m| m.column_space())).collect::<Result<_, _>>()?;
        let module = self.module.submodule(&bases)?;
        Ok(GeneratedSubmodule { generators: s.to_vec(), module, inclusion: ModuleHom { components: bases } })
    }

    /// `Σ_v (dim span{s|_v : s ∈ S} - 1)` over vertices with a nonzero restriction.
    pub fn degree_of_generated(&self, s: &[CycleVector]) -> Result<i64, Error> {
        let coords = self.coordinate_matrix(s)?;
        let mut deg = 0i64;
        for v in 1..=self.graph.vertex_count() {
            let r = self.restriction(Face::vertex(v))?.mul(&coords)?.rank();
            if r > 0 {
                deg += r as i64 - 1;
            }
        }
        Ok(deg)
    }

    /// A seeded combination of the basis cycles with coefficients in `1..=10g`,
    /// accepted once every edge coefficient and every restriction is nonzero.
    pub fn general_section(&self, seed: u64) -> Result<CycleVector, Error> {
        if !self.field.is_rational() {
            return Err(Error::Unsupported("general sections are drawn over Q".into()));
        }
        if !self.graph.is_two_connected() {
            return Err(Error::Precondition("general sections need a 2-connected graph".into()));
        }
        let g = self.genus() as i64;
        let basis = self.cycle_basis();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..64 {
            let mut u = CycleVector::new(alloc::vec![self.field.zero(); self.graph.edge_count()]);
            for b in &basis {
                u = u.add(&b.scale(&self.field.from_i64(rng.random_range(1..=10 * g))));
            }
            if u.support().len() != self.graph.edge_count() {
                continue;
            }
            let coords = self.coordinates(&u)?;
            let col = Matrix::column_vector(self.field, &coords);
            let mut full = true;
            for r in &self.restrictions {
                if r.mul(&col)?.is_zero() {
                    full = false;
                    break;
                }
            }
            if full {
                return Ok(u);
            }
        }
        Err(Error::BudgetExhausted("no full-support section in 64 draws".into()))
    }

    /// Every natural map out of `(ω)_∅` is onto.
    pub fn is_generated_in_degree_zero(&self) -> bool {
        self.restrictions.iter().zip(&self.groups).all(|(r, g)| r.rank() == g.dim())
    }
}
