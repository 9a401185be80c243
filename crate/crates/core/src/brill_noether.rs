//! Effective and special modules, pencil search, gonality and Clifford index.
//!
//! Everything here works over `Q`. Over an infinite field a finite union of
//! proper subspaces never covers `M_∅`, so a section nonzero at every face
//! exists iff every restriction `M_∅ -> M_F` is nonzero.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::Face;
use crate::decompose::{embeds_into, is_indecomposable, SearchOptions, Verdict};
use crate::error::Error;
use crate::field::{Field, Scalar};
use crate::graph::Graph;
use crate::matrix::Matrix;
use crate::module::SquareFreeModule;
use crate::omega::{CanonicalOmega, CycleVector};

/// Reported with every search result: minimal over the enumerated pencils only.
pub const SEARCH_SPACE_FLAG: &str = "exact-over-search-space";

const Q: Field = Field::Rational;

fn require_rational(field: Field) -> Result<(), Error> {
    if field.is_rational() {
        Ok(())
    } else {
        Err(Error::Unsupported("linear series are computed over Q".into()))
    }
}

/// Every composite `M_∅ -> M_F` is nonzero.
pub fn has_full_support_section(m: &SquareFreeModule) -> Result<bool, Error> {
    require_rational(m.field())?;
    if m.dims()[0] == 0 {
        return Ok(false);
    }
    for &f in m.complex().faces() {
        if m.map(Face::EMPTY, f)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Indecomposable with a section nonzero at every face.
pub fn is_effective(m: &SquareFreeModule, opts: SearchOptions) -> Result<Verdict, Error> {
    if !has_full_support_section(m)? {
        return Ok(Verdict::No);
    }
    is_indecomposable(m, opts)
}

/// Admits an injective homomorphism into `ω`.
pub fn is_special(m: &SquareFreeModule, omega: &CanonicalOmega, opts: SearchOptions) -> Result<Verdict, Error> {
    embeds_into(m, omega.module(), opts)
}

/// `deg M >= 2 (l(M) - 1)`.
pub fn verify_clifford(m: &SquareFreeModule) -> Result<bool, Error> {
    let l = m.global_sections();
    if l == 0 {
        return Err(Error::Precondition("Clifford check needs l(M) >= 1".into()));
    }
    Ok(m.degree() >= 2 * (l as i64 - 1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesChecks {
    pub special: bool,
    pub full_support: bool,
    pub indecomposable: Verdict,
    pub cm: bool,
    pub locally_rank_one: bool,
}

impl SeriesChecks {
    pub fn effective(&self) -> bool {
        self.full_support && self.indecomposable == Verdict::Yes
    }

    pub fn all_pass(&self) -> bool {
        self.special && self.effective() && self.cm && self.locally_rank_one
    }
}

/// A `g^r_d` presented by the cycles generating it inside `ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSeriesCertificate {
    pub generators: Vec<CycleVector>,
    pub degree: i64,
    pub r: usize,
    pub checks: SeriesChecks,
}

impl LinearSeriesCertificate {
    /// Builds the generated submodule and runs every check on it.
    pub fn certify(omega: &CanonicalOmega, generators: &[CycleVector], opts: SearchOptions) -> Result<LinearSeriesCertificate, Error> {
        require_rational(omega.field())?;
        let sub = omega.submodule_generated(generators)?;
        let m = &sub.module;
        let l = m.global_sections();
        let cm = m.is_cm_graph()?;
        let locally_rank_one = m.is_locally_rank_one();
        let full_support = has_full_support_section(m)?;
        let indecomposable = if full_support && l > 0 { is_indecomposable(m, opts)? } else { Verdict::No };
        let checks = SeriesChecks { special: sub.is_special(), full_support, indecomposable, cm, locally_rank_one };
        Ok(LinearSeriesCertificate {
            generators: generators.to_vec(),
            degree: m.degree(),
            r: l.saturating_sub(1),
            checks,
        })
    }

    pub fn is_valid(&self) -> bool {
        self.checks.all_pass()
    }

    /// Recomputes everything from the generating cycles.
    pub fn verify(&self, graph: &Graph, opts: SearchOptions) -> Result<bool, Error> {
        let omega = CanonicalOmega::build(graph, Q)?;
        if self.generators.iter().any(|z| !z.is_cycle(graph)) {
            return Ok(false);
        }
        let again = LinearSeriesCertificate::certify(&omega, &self.generators, opts)?;
        if again != *self || !again.is_valid() {
            return Ok(false);
        }
        let m = omega.submodule_generated(&self.generators)?.module;
        Ok(m.degree() == self.degree && m.global_sections() == self.r + 1 && is_special(&m, &omega, opts)? != Verdict::No)
    }

    pub fn clifford(&self) -> i64 {
        self.degree - 2 * self.r as i64
    }

    /// `l(ω_M)` from Riemann-Roch.
    pub fn l_omega(&self, genus: usize) -> i64 {
        self.r as i64 - self.degree + genus as i64
    }
}

#[derive(Clone, Debug)]
pub struct PencilSearchOptions {
    pub search: SearchOptions,
    /// Branch vertices (valency at least 3) allowed in each avoided set.
    pub max_branch: usize,
    pub cycle_cap: usize,
    pub pair_cap: usize,
    pub set_cap: usize,
}

impl Default for PencilSearchOptions {
    fn default() -> PencilSearchOptions {
        PencilSearchOptions { search: SearchOptions::default(), max_branch: 3, cycle_cap: 200_000, pair_cap: 20_000, set_cap: 50_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PencilSource {
    AvoidingSets { a1: Vec<usize>, a2: Vec<usize>, proportional: Vec<usize> },
    GeneralSectionAndCycle,
    CyclePair,
    Triangle,
}

#[derive(Clone, Debug)]
pub struct Pencil {
    pub generators: Vec<CycleVector>,
    pub degree: i64,
    pub source: PencilSource,
    key: Vec<Vec<usize>>,
}

/// Incident-edge restrictions, used for the fast degree count.
struct EdgeData {
    incident: Vec<Vec<usize>>,
    branch: Vec<bool>,
    edges: usize,
}

impl EdgeData {
    fn new(g: &Graph) -> EdgeData {
        let n = g.vertex_count();
        let mut incident = vec![Vec::new()];
        let mut branch = vec![false];
        for v in 1..=n {
            incident.push(g.incident_edges(v));
            branch.push(g.valency(v) >= 3);
        }
        EdgeData { incident, branch, edges: g.edge_count() }
    }

    /// `Σ_v (rank - 1)` over covered vertices, or `None` unless the vectors are
    /// independent and jointly cover every edge.
    fn degree(&self, gens: &[Vec<Scalar>]) -> Option<i64> {
        if (0..self.edges).any(|e| gens.iter().all(|z| z[e].is_zero())) {
            return None;
        }
        let all = Matrix::from_columns(Q, self.edges, gens);
        if all.rank() < gens.len() {
            return None;
        }
        let mut d = 0;
        for inc in &self.incident[1..] {
            let cols: Vec<Vec<Scalar>> = gens.iter().map(|z| inc.iter().map(|&e| z[e].clone()).collect()).collect();
            let r = Matrix::from_columns(Q, inc.len(), &cols).rank();
            if r > 0 {
                d += r as i64 - 1;
            }
        }
        Some(d)
    }
}

fn support(z: &[Scalar]) -> Vec<usize> {
    (0..z.len()).filter(|&e| !z[e].is_zero()).collect()
}

fn make_pencil(gens: Vec<Vec<Scalar>>, degree: i64, source: PencilSource) -> Pencil {
    let key = gens.iter().map(|z| support(z)).collect();
    Pencil { generators: gens.into_iter().map(CycleVector::new).collect(), degree, source, key }
}

fn mask_vertices(mask: u64) -> Vec<usize> {
    Face::from_bits(mask).to_vec()
}

/// Connected vertex sets with at most `max_branch` vertices of valency `>= 3`,
/// including the empty set.
fn connected_sets(g: &Graph, max_branch: usize, cap: usize) -> Result<Vec<u64>, Error> {
    let cost = |m: u64| mask_vertices(m).iter().filter(|&&v| g.valency(v) >= 3).count();
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    seen.insert(0);
    let mut frontier: Vec<u64> = Vec::new();
    for v in 1..=g.vertex_count() {
        let m = 1u64 << (v - 1);
        if cost(m) <= max_branch && seen.insert(m) {
            frontier.push(m);
        }
    }
    while let Some(s) = frontier.pop() {
        for v in mask_vertices(s) {
            for &w in g.neighbors(v) {
                let t = s | 1u64 << (w - 1);
                if t != s && cost(t) <= max_branch && seen.insert(t) {
                    if seen.len() > cap {
                        return Err(Error::BudgetExhausted(format!("more than {cap} connected vertex sets")));
                    }
                    frontier.push(t);
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Basis (as columns, edge-indexed) of the cycles vanishing on every edge at `avoid`.
fn cycles_avoiding(g: &Graph, boundary: &Matrix, avoid: u64) -> Matrix {
    let keep: Vec<usize> = (0..g.edge_count())
        .filter(|&e| {
            let (a, b) = g.edges()[e];
            avoid >> (a - 1) & 1 == 0 && avoid >> (b - 1) & 1 == 0
        })
        .collect();
    let kernel = boundary.select_columns(&keep).kernel_matrix();
    let mut out = Matrix::zeros(Q, g.edge_count(), kernel.cols());
    for (i, &e) in keep.iter().enumerate() {
        for j in 0..kernel.cols() {
            out.set(e, j, kernel.get(i, j).clone());
        }
    }
    out
}

fn random_column(k: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let mut c = Matrix::zeros(Q, k, 1);
    for i in 0..k {
        c.set(i, 0, Q.from_i64(rng.random_range(1..=97)));
    }
    c
}

fn adjacent_sets(g: &Graph, a: u64, b: u64) -> bool {
    mask_vertices(a).iter().any(|&v| g.neighbors(v).iter().any(|&w| b >> (w - 1) & 1 == 1))
}

struct ProportionalSearch<'a> {
    cand: &'a [usize],
    conds: &'a [Matrix],
    best: Vec<usize>,
    best_space: Matrix,
}

impl ProportionalSearch<'_> {
    fn dfs(&mut self, idx: usize, chosen: &mut Vec<usize>, space: &Matrix) -> Result<(), Error> {
        if chosen.len() + (self.cand.len() - idx) <= self.best.len() {
            return Ok(());
        }
        if chosen.len() > self.best.len() {
            self.best = chosen.clone();
            self.best_space = space.clone();
        }
        for j in idx..self.cand.len() {
            let kernel = self.conds[j].mul(space)?.kernel_matrix();
            if kernel.cols() == 0 {
                continue;
            }
            let next = space.mul(&kernel)?;
            chosen.push(self.cand[j]);
            self.dfs(j + 1, chosen, &next)?;
            chosen.pop();
        }
        Ok(())
    }
}

/// `t1` generic avoiding `A1`, `t2` generic avoiding `A2` and proportional to
/// `t1` at a largest possible set of branch vertices.
fn avoiding_set_pencils(g: &Graph, data: &EdgeData, opts: &PencilSearchOptions, rng: &mut ChaCha8Rng) -> Result<Vec<Pencil>, Error> {
    let boundary = Matrix::from_i64(Q, &g.boundary_i64().iter().map(|r| r.as_slice()).collect::<Vec<_>>());
    let sets = connected_sets(g, opts.max_branch, opts.set_cap)?;
    let spaces: Vec<Matrix> = sets.iter().map(|&s| cycles_avoiding(g, &boundary, s)).collect();
    let mut out = Vec::new();
    for (i, &a1) in sets.iter().enumerate() {
        if spaces[i].cols() == 0 {
            continue;
        }
        let t1 = spaces[i].mul(&random_column(spaces[i].cols(), rng))?.column(0);
        let branch: Vec<usize> = (1..=g.vertex_count())
            .filter(|&v| data.branch[v] && a1 >> (v - 1) & 1 == 0 && data.incident[v].iter().all(|&e| !t1[e].is_zero()))
            .collect();
        for (j, &a2) in sets.iter().enumerate() {
            let y = &spaces[j];
            if y.cols() == 0 || a1 & a2 != 0 || adjacent_sets(g, a1, a2) {
                continue;
            }
            let cand: Vec<usize> = branch.iter().copied().filter(|&v| a2 >> (v - 1) & 1 == 0).collect();
            let mut conds = Vec::with_capacity(cand.len());
            for &v in &cand {
                let inc = &data.incident[v];
                let mut rows = Matrix::zeros(Q, inc.len() - 1, y.cols());
                for k in 1..inc.len() {
                    for c in 0..y.cols() {
                        let val = &(y.get(inc[k], c) * &t1[inc[0]]) - &(y.get(inc[0], c) * &t1[inc[k]]);
                        rows.set(k - 1, c, val);
                    }
                }
                conds.push(rows);
            }
            let id = Matrix::identity(Q, y.cols());
            let mut search = ProportionalSearch { cand: &cand, conds: &conds, best: Vec::new(), best_space: id.clone() };
            search.dfs(0, &mut Vec::new(), &id)?;
            let space = search.best_space;
            let t2 = y.mul(&space)?.mul(&random_column(space.cols(), rng))?.column(0);
            let gens = vec![t1.clone(), t2];
            if let Some(d) = data.degree(&gens) {
                let source = PencilSource::AvoidingSets { a1: mask_vertices(a1), a2: mask_vertices(a2), proportional: search.best };
                out.push(make_pencil(gens, d, source));
            }
        }
    }
    Ok(out)
}

/// Every pencil the search enumerates, sorted by degree and then by the
/// supports of the generators.
pub fn pencil_candidates(omega: &CanonicalOmega, opts: &PencilSearchOptions) -> Result<Vec<Pencil>, Error> {
    require_rational(omega.field())?;
    let g = omega.graph();
    let data = EdgeData::new(g);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.search.seed);
    let mut out = avoiding_set_pencils(g, &data, opts, &mut rng)?;
    let cycles = match g.simple_cycles(opts.cycle_cap) {
        Ok(c) => c,
        Err(Error::CycleCapExceeded(_)) => Vec::new(),
        Err(e) => return Err(e),
    };
    let vectors: Vec<Vec<Scalar>> = cycles.iter().map(|c| c.signed_vector(g).iter().map(|&x| Q.from_i64(x)).collect()).collect();
    let u = omega.general_section(opts.search.seed)?;
    for z in &vectors {
        let gens = vec![u.coeffs().to_vec(), z.clone()];
        if let Some(d) = data.degree(&gens) {
            out.push(make_pencil(gens, d, PencilSource::GeneralSectionAndCycle));
        }
    }
    let full: u128 = if data.edges == 128 { u128::MAX } else { (1u128 << data.edges) - 1 };
    let masks: Vec<u128> = cycles.iter().map(|c| c.edge_mask()).collect();
    let mut tried = 0;
    'pairs: for i in 0..cycles.len() {
        for j in i + 1..cycles.len() {
            if masks[i] | masks[j] != full {
                continue;
            }
            if tried == opts.pair_cap {
                break 'pairs;
            }
            tried += 1;
            let gens = vec![vectors[i].clone(), vectors[j].clone()];
            if let Some(d) = data.degree(&gens) {
                out.push(make_pencil(gens, d, PencilSource::CyclePair));
            }
        }
    }
    out.sort_by(|a, b| a.degree.cmp(&b.degree).then_with(|| a.key.cmp(&b.key)));
    Ok(out)
}

fn require_curve(g: &Graph) -> Result<usize, Error> {
    if !g.is_two_connected() {
        return Err(Error::Precondition("graph must be 2-connected".into()));
    }
    let genus = g.genus()?;
    if genus < 2 {
        return Err(Error::Precondition(format!("genus {genus} is below 2")));
    }
    Ok(genus)
}

#[derive(Clone, Debug)]
pub struct GonalityResult {
    pub gonality: i64,
    pub certificate: LinearSeriesCertificate,
    pub source: PencilSource,
    pub flag: &'static str,
    pub candidates: usize,
    /// Every certificate built on the way, valid or not.
    pub attempts: Vec<LinearSeriesCertificate>,
}

/// Least degree of a certified `g^1_d` among the enumerated pencils.
pub fn gonality(g: &Graph, opts: &PencilSearchOptions) -> Result<GonalityResult, Error> {
    require_curve(g)?;
    let omega = CanonicalOmega::build(g, Q)?;
    let candidates = pencil_candidates(&omega, opts)?;
    let mut attempts = Vec::new();
    for p in &candidates {
        let cert = LinearSeriesCertificate::certify(&omega, &p.generators, opts.search)?;
        let ok = cert.is_valid() && cert.r == 1 && cert.degree == p.degree;
        attempts.push(cert.clone());
        if ok {
            return Ok(GonalityResult {
                gonality: cert.degree,
                certificate: cert,
                source: p.source.clone(),
                flag: SEARCH_SPACE_FLAG,
                candidates: candidates.len(),
                attempts,
            });
        }
    }
    Err(Error::BudgetExhausted("no certified pencil in the search space".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GonalityBounds {
    pub girth_bound: usize,
    pub genus_bound: usize,
}

/// Girth and `⌊(g+3)/2⌋`.
pub fn gonality_bounds(g: &Graph) -> Result<GonalityBounds, Error> {
    let genus = require_curve(g)?;
    let girth = g.girth().ok_or_else(|| Error::Precondition("graph is acyclic".into()))?;
    Ok(GonalityBounds { girth_bound: girth, genus_bound: (genus + 3) / 2 })
}

/// For a reduced graph: a `g^1_2` spanned by a general section and a triangle
/// through a valency-2 vertex, if such a triangle exists.
pub fn is_hyperelliptic_reduced(g: &Graph, opts: SearchOptions) -> Result<Option<LinearSeriesCertificate>, Error> {
    require_curve(g)?;
    let (reduced, _) = g.reduce();
    if reduced.vertex_count() != g.vertex_count() {
        return Err(Error::Precondition("graph is not reduced".into()));
    }
    let omega = CanonicalOmega::build(g, Q)?;
    for v in 1..=g.vertex_count() {
        if g.valency(v) != 2 {
            continue;
        }
        let (w1, w2) = (g.neighbors(v)[0], g.neighbors(v)[1]);
        if !g.has_edge(w1, w2) {
            continue;
        }
        let mut z = vec![Q.zero(); g.edge_count()];
        for (a, b) in [(v, w1), (w1, w2), (w2, v)] {
            let e = g.edge_index(a, b).unwrap();
            z[e] = Q.from_i64(if a < b { 1 } else { -1 });
        }
        let u = omega.general_section(opts.seed)?;
        let cert = LinearSeriesCertificate::certify(&omega, &[u, CycleVector::new(z)], opts)?;
        if cert.is_valid() && cert.r == 1 && cert.degree == 2 {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct CliffordResult {
    pub index: i64,
    pub certificate: LinearSeriesCertificate,
    /// Every valid special effective module met, qualifying or not.
    pub enumerated: Vec<LinearSeriesCertificate>,
    pub violations: usize,
}

#[derive(Clone, Debug)]
pub struct CliffordOptions {
    pub pencils: PencilSearchOptions,
    /// Pencil candidates to certify.
    pub pencil_limit: usize,
    /// Simple cycles tried as a third generator on the best pencil.
    pub net_limit: usize,
}

impl Default for CliffordOptions {
    fn default() -> CliffordOptions {
        CliffordOptions { pencils: PencilSearchOptions::default(), pencil_limit: 24, net_limit: 40 }
    }
}

/// `min (d - 2r)` over certified pencils and nets with `l >= 2` and `l(ω_M) >= 2`.
pub fn clifford_index(g: &Graph, opts: &CliffordOptions) -> Result<CliffordResult, Error> {
    let genus = require_curve(g)?;
    let omega = CanonicalOmega::build(g, Q)?;
    let candidates = pencil_candidates(&omega, &opts.pencils)?;
    let search = opts.pencils.search;
    let mut enumerated: Vec<LinearSeriesCertificate> = Vec::new();
    for p in candidates.iter().take(opts.pencil_limit) {
        let cert = LinearSeriesCertificate::certify(&omega, &p.generators, search)?;
        if cert.is_valid() {
            enumerated.push(cert);
        }
    }
    if let Some(base) = enumerated.first().cloned() {
        let mut cycles = g.simple_cycles(opts.pencils.cycle_cap).unwrap_or_default();
        cycles.sort_by_key(|c| c.len());
        for c in cycles.iter().take(opts.net_limit) {
            let mut gens = base.generators.clone();
            gens.push(CycleVector::from_simple_cycle(g, Q, c));
            let coords = gens.iter().map(|z| omega.coordinates(z)).collect::<Result<Vec<_>, _>>()?;
            if Matrix::from_columns(Q, genus, &coords).rank() < 3 {
                continue;
            }
            let cert = LinearSeriesCertificate::certify(&omega, &gens, search)?;
            if cert.is_valid() {
                enumerated.push(cert);
            }
        }
    }
    let mut violations = 0;
    for c in &enumerated {
        let m = omega.submodule_generated(&c.generators)?.module;
        if !verify_clifford(&m)? {
            violations += 1;
        }
    }
    let best = enumerated
        .iter()
        .filter(|c| c.r >= 1 && c.l_omega(genus) >= 2)
        .min_by(|a, b| a.clifford().cmp(&b.clifford()).then_with(|| a.degree.cmp(&b.degree)))
        .cloned()
        .ok_or_else(|| Error::BudgetExhausted("no qualifying module found in search space".into()))?;
    Ok(CliffordResult { index: best.clifford(), certificate: best, enumerated, violations })
}

/// A `(genus, vertex range, girth)` solution of the counting inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GirthRow {
    pub genus: usize,
    pub v_min: usize,
    pub v_max: usize,
    pub girth: usize,
}

/// `1 + k((k-1)^{⌊(w-1)/2⌋} - 1)/(k-2)`.
pub fn moore_bound(k: u64, w: u32) -> u64 {
    1 + k * ((k - 1).pow((w - 1) / 2) - 1) / (k - 2)
}

/// `2((k-1)^{w/2} - 1)/(k-2)` for even `w`, the odd bound otherwise.
pub fn sharpened_moore_bound(k: u64, w: u32) -> u64 {
    if w % 2 == 0 {
        2 * ((k - 1).pow(w / 2) - 1) / (k - 2)
    } else {
        moore_bound(k, w)
    }
}

/// All `(g, v, w)` with `g_min <= g <= g_max`, `w >= ⌊(g+5)/2⌋` and
/// `2g - 2 >= v >= bound(k, w)`.
pub fn girth_inequality_rows(k: u64, g_min: usize, g_max: usize, sharpened: bool) -> Vec<GirthRow> {
    let bound = |w: u32| if sharpened { sharpened_moore_bound(k, w) } else { moore_bound(k, w) };
    let mut rows = Vec::new();
    for genus in g_min..=g_max {
        let top = 2 * genus as u64 - 2;
        let mut w = (genus as u32 + 5) / 2;
        while moore_bound(k, w) <= top {
            if bound(w) <= top {
                rows.push(GirthRow { genus, v_min: bound(w) as usize, v_max: top as usize, girth: w as usize });
            }
            w += 1;
        }
    }
    rows
}

/// Rows at the least admissible girth `⌊(g+5)/2⌋` only.
pub fn least_girth_rows(k: u64, g_min: usize, g_max: usize) -> Vec<GirthRow> {
    girth_inequality_rows(k, g_min, g_max, false).into_iter().filter(|r| r.girth == (r.genus + 5) / 2).collect()
}

/// Text rendering of a row, e.g. `7, 10-12, 6`.
pub fn format_row(r: &GirthRow) -> String {
    if r.v_min == r.v_max {
        format!("{}, {}, {}", r.genus, r.v_min, r.girth)
    } else {
        format!("{}, {}-{}, {}", r.genus, r.v_min, r.v_max, r.girth)
    }
}
