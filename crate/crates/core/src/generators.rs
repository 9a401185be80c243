//! Seeded random square-free modules on graphs.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::field::Field;
use crate::graph::Graph;
use crate::matrix::Matrix;
use crate::module::SquareFreeModule;

/// Knobs for [`random_graph_module`].
#[derive(Clone, Copy, Debug)]
pub struct RandomModuleOptions {
    /// Entries are drawn from `-entry_bound..=entry_bound`.
    pub entry_bound: i64,
    /// Probability that a vertex gets `M_v = 0`.
    pub zero_vertex_probability: f64,
    /// Probability that a nonzero `M_v` is one-dimensional rather than uniform in `1..=val(v)`.
    pub unit_probability: f64,
    /// When false, `M_∅` is a random subspace of the kernel instead of all of it.
    pub full_kernel: bool,
}

impl Default for RandomModuleOptions {
    fn default() -> RandomModuleOptions {
        RandomModuleOptions { entry_bound: 3, zero_vertex_probability: 0.15, unit_probability: 0.0, full_kernel: true }
    }
}

fn random_matrix(field: Field, rows: usize, cols: usize, bound: i64, rng: &mut ChaCha8Rng) -> Matrix {
    let mut m = Matrix::zeros(field, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, field.from_i64(rng.random_range(-bound..=bound)));
        }
    }
    m
}

/// A locally rank 1 module with `dim M_v` drawn from `0..=val(v)`,
/// each `φ_v : M_v -> ⊕_{e ∋ v} M_e` injective, and `M_∅` the kernel of
/// `⊕ M_v -> ⊕ M_e`. With `full_kernel` the result is CM.
pub fn random_graph_module(graph: &Graph, field: Field, opts: RandomModuleOptions, rng: &mut ChaCha8Rng) -> Result<SquareFreeModule, Error> {
    let n = graph.vertex_count();
    let mut vertex_dims = Vec::with_capacity(n);
    let mut maps = BTreeMap::new();
    for v in 1..=n {
        let val = graph.valency(v);
        let dv = if val == 0 || rng.random_bool(opts.zero_vertex_probability) {
            0
        } else if rng.random_bool(opts.unit_probability) {
            1
        } else {
            rng.random_range(1..=val)
        };
        vertex_dims.push(dv);
        let incident = graph.incident_edges(v);
        let stacked = loop {
            let m = random_matrix(field, val, dv, opts.entry_bound, rng);
            if m.rank() == dv {
                break m;
            }
        };
        for (k, &e) in incident.iter().enumerate() {
            maps.insert((v, e), stacked.block(k, 0, 1, dv));
        }
    }
    let edge_dims = alloc::vec![1; graph.edge_count()];
    let full = SquareFreeModule::graph_module_with_kernel_sections(graph, field, &vertex_dims, &edge_dims, &maps)?;
    if opts.full_kernel {
        return Ok(full);
    }
    let l = full.dims()[0];
    let keep = rng.random_range(0..=l);
    let sub = random_matrix(field, l, keep, opts.entry_bound, rng).column_space();
    let mut bases: Vec<Matrix> = full.dims().iter().map(|&d| Matrix::identity(field, d)).collect();
    bases[0] = sub;
    full.submodule(&bases)
}

/// `count` modules from a ChaCha8 stream seeded with `seed`.
pub fn random_graph_modules(graph: &Graph, field: Field, opts: RandomModuleOptions, seed: u64, count: usize) -> Result<Vec<SquareFreeModule>, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_graph_module(graph, field, opts, &mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_modules_are_cm_and_locally_rank_one() {
        for g in [Graph::cycle(4).unwrap(), Graph::k33(), Graph::theta(&[1, 1, 2]).unwrap()] {
            for m in random_graph_modules(&g, Field::Rational, RandomModuleOptions::default(), 7, 10).unwrap() {
                m.validate().unwrap();
                assert!(m.is_locally_rank_one());
                assert!(m.is_cm());
            }
        }
    }

    #[test]
    fn partial_kernel_stays_inside_full_kernel() {
        let g = Graph::k33();
        let opts = RandomModuleOptions { full_kernel: false, ..Default::default() };
        for seed in 0..5 {
            let f = &random_graph_modules(&g, Field::Rational, RandomModuleOptions::default(), seed, 1).unwrap()[0];
            let p = &random_graph_modules(&g, Field::Rational, opts, seed, 1).unwrap()[0];
            p.validate().unwrap();
            assert_eq!(&f.dims()[1..], &p.dims()[1..]);
            assert!(p.dims()[0] <= f.dims()[0]);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let g = Graph::petersen();
        let a = random_graph_modules(&g, Field::Rational, RandomModuleOptions::default(), 11, 3).unwrap();
        let b = random_graph_modules(&g, Field::Rational, RandomModuleOptions::default(), 11, 3).unwrap();
        assert_eq!(a, b);
    }
}
