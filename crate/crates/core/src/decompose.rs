//! Endomorphism algebras: indecomposability, splitting, isomorphism and embedding tests.
//!
//! Answers carry a [`Verdict`]; `Inconclusive` is returned rather than a guess
//! whenever the sampling budget runs out without a certificate.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;
use crate::module::{ModuleHom, SquareFreeModule};
use crate::poly::{coprime_split, minimal_polynomial, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

impl Verdict {
    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Random elements tried after the basis elements.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { samples: 32, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub enum Splitting {
    Indecomposable,
    /// An idempotent other than `0` and `id`.
    Split(ModuleHom),
    Inconclusive,
}

fn require_rational(f: Field) -> Result<(), Error> {
    if f.is_rational() {
        Ok(())
    } else {
        Err(Error::Unsupported(alloc::format!("endomorphism algebra methods need Q, got {f}")))
    }
}

fn random_combination(basis: &[ModuleHom], field: Field, rng: &mut ChaCha8Rng, spread: i64) -> Result<ModuleHom, Error> {
    let mut acc = basis[0].scale(&field.zero());
    for b in basis {
        let c = rng.random_range(-spread..=spread);
        if c != 0 {
            acc = acc.add(&b.scale(&field.from_i64(c)))?;
        }
    }
    Ok(acc)
}

/// Dimension of the radical `{a : tr(ab) = 0 for all b}` of the trace form.
fn radical_dim(basis: &[ModuleHom], field: Field) -> Result<usize, Error> {
    let n = basis.len();
    let mut gram = Matrix::zeros(field, n, n);
    for i in 0..n {
        for j in i..n {
            let t = basis[i].compose(&basis[j])?.trace(field);
            gram.set(i, j, t.clone());
            gram.set(j, i, t);
        }
    }
    Ok(n - gram.rank())
}

/// Minimal polynomial of a block-diagonal endomorphism: the lcm over faces.
fn hom_minimal_polynomial(h: &ModuleHom) -> Result<Poly, Error> {
    let mut acc = Poly::one();
    for m in &h.components {
        if m.rows() == 0 {
            continue;
        }
        let p = minimal_polynomial(m)?;
        let g = Poly::gcd(&acc, &p);
        acc = acc.mul(&p).div_rem(&g).0;
    }
    Ok(acc.monic())
}

fn eval_hom(p: &Poly, h: &ModuleHom) -> Result<ModuleHom, Error> {
    Ok(ModuleHom { components: h.components.iter().map(|m| p.eval_matrix(m)).collect::<Result<_, _>>()? })
}

/// An idempotent built from `ψ` by partial fractions, if its minimal
/// polynomial has coprime factors.
fn idempotent_from(h: &ModuleHom, m: &SquareFreeModule) -> Result<Option<ModuleHom>, Error> {
    let p = hom_minimal_polynomial(h)?;
    let Some((a, b)) = coprime_split(&p) else { return Ok(None) };
    let (g, _u, v) = Poly::ext_gcd(&a, &b);
    if g != Poly::one() {
        return Ok(None);
    }
    let e = eval_hom(&v.mul(&b), h)?;
    let id = ModuleHom::identity(m);
    if e.is_zero() || e == id || e.compose(&e)? != e {
        return Ok(None);
    }
    Ok(Some(e))
}

/// Looks for a splitting idempotent; certifies indecomposability when
/// `End(M)/rad` is one-dimensional.
pub fn find_splitting(m: &SquareFreeModule, opts: SearchOptions) -> Result<Splitting, Error> {
    require_rational(m.field())?;
    if m.is_zero() {
        return Err(Error::Precondition("the zero module has no splitting question".into()));
    }
    let basis = m.end_space()?;
    if basis.len() == 1 {
        return Ok(Splitting::Indecomposable);
    }
    if basis.len() - radical_dim(&basis, m.field())? == 1 {
        return Ok(Splitting::Indecomposable);
    }
    for b in &basis {
        if let Some(e) = idempotent_from(b, m)? {
            return Ok(Splitting::Split(e));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for k in 0..opts.samples {
        let spread = 1 + (k as i64 % 3);
        let h = random_combination(&basis, m.field(), &mut rng, spread)?;
        if h.is_zero() {
            continue;
        }
        if let Some(e) = idempotent_from(&h, m)? {
            return Ok(Splitting::Split(e));
        }
    }
    Ok(Splitting::Inconclusive)
}

/// `Yes` iff `End(M)` has no idempotents besides `0` and `id`. The zero module is `No`.
pub fn is_indecomposable(m: &SquareFreeModule, opts: SearchOptions) -> Result<Verdict, Error> {
    require_rational(m.field())?;
    if m.is_zero() {
        return Ok(Verdict::No);
    }
    Ok(match find_splitting(m, opts)? {
        Splitting::Indecomposable => Verdict::Yes,
        Splitting::Split(_) => Verdict::No,
        Splitting::Inconclusive => Verdict::Inconclusive,
    })
}

/// Image of an endomorphism as a submodule.
pub fn image_submodule(m: &SquareFreeModule, e: &ModuleHom) -> Result<SquareFreeModule, Error> {
    let bases: Vec<Matrix> = e.components.iter().map(Matrix::column_space).collect();
    m.submodule(&bases)
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub summands: Vec<SquareFreeModule>,
    /// True when every summand was certified indecomposable.
    pub certified: bool,
}

/// Splits recursively along idempotents.
pub fn decompose(m: &SquareFreeModule, opts: SearchOptions) -> Result<Decomposition, Error> {
    require_rational(m.field())?;
    let mut out = Vec::new();
    let mut certified = true;
    let mut stack = vec![m.clone()];
    while let Some(x) = stack.pop() {
        if x.is_zero() {
            continue;
        }
        match find_splitting(&x, opts)? {
            Splitting::Indecomposable => out.push(x),
            Splitting::Inconclusive => {
                certified = false;
                out.push(x);
            }
            Splitting::Split(e) => {
                let id = ModuleHom::identity(&x);
                let f = id.add(&e.scale(&-x.field().one()))?;
                stack.push(image_submodule(&x, &f)?);
                stack.push(image_submodule(&x, &e)?);
            }
        }
    }
    Ok(Decomposition { summands: out, certified })
}

/// Decides whether some element of `span(mats)` has rank `target`.
/// Exact when a sample succeeds, when a common kernel blocks it, or when the
/// matrices have at most two columns.
pub fn generic_rank_reaches(mats: &[Matrix], rows: usize, cols: usize, target: usize, rng: &mut ChaCha8Rng, samples: usize) -> Result<Verdict, Error> {
    if target == 0 {
        return Ok(Verdict::Yes);
    }
    if mats.is_empty() || target > rows.min(cols) {
        return Ok(Verdict::No);
    }
    let field = mats[0].field();
    let mut stacked = mats[0].clone();
    for m in &mats[1..] {
        stacked = stacked.vstack(m)?;
    }
    if stacked.rank() < target || {
        let mut side = mats[0].clone();
        for m in &mats[1..] {
            side = side.hstack(m)?;
        }
        side.rank() < target
    } {
        return Ok(Verdict::No);
    }
    for m in mats {
        if m.rank() >= target {
            return Ok(Verdict::Yes);
        }
    }
    for _ in 0..samples {
        let mut acc = Matrix::zeros(field, rows, cols);
        for m in mats {
            let c = rng.random_range(-50i64..=50);
            if c != 0 {
                acc = acc.add(&m.scale(&field.from_i64(c)))?;
            }
        }
        if acc.rank() >= target {
            return Ok(Verdict::Yes);
        }
    }
    if cols <= 2 && target == cols {
        return Ok(exact_two_column_rank(mats, rows, cols));
    }
    Ok(Verdict::Inconclusive)
}

/// For `rows x k` matrices with `k <= 2`: is `Σ c_i A_i` generically of full column rank?
fn exact_two_column_rank(mats: &[Matrix], rows: usize, cols: usize) -> Verdict {
    if cols == 1 {
        return if mats.iter().any(|m| !m.is_zero()) { Verdict::Yes } else { Verdict::No };
    }
    let minor = |a: &Matrix, r: usize, s: usize| -> Scalar { &(a.get(r, 0) * a.get(s, 1)) - &(a.get(s, 0) * a.get(r, 1)) };
    for r in 0..rows {
        for s in r + 1..rows {
            for (i, a) in mats.iter().enumerate() {
                if !minor(a, r, s).is_zero() {
                    return Verdict::Yes;
                }
                for b in &mats[i + 1..] {
                    let cross = &(a.get(r, 0) * b.get(s, 1)) - &(a.get(s, 0) * b.get(r, 1));
                    let cross = &cross + &(&(b.get(r, 0) * a.get(s, 1)) - &(b.get(s, 0) * a.get(r, 1)));
                    if !cross.is_zero() {
                        return Verdict::Yes;
                    }
                }
            }
        }
    }
    Verdict::No
}

/// Per-face generic rank test over a hom space: `Yes` when, at every face,
/// some element reaches `target(face)`. A product of nonzero polynomials over
/// an infinite field is nonzero, so one element then works everywhere.
fn generic_hom_rank(
    homs: &[ModuleHom],
    source: &SquareFreeModule,
    target: &SquareFreeModule,
    want: impl Fn(usize) -> usize,
    opts: SearchOptions,
) -> Result<Verdict, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut verdict = Verdict::Yes;
    for f in 0..source.dims().len() {
        let (rows, cols) = (target.dims()[f], source.dims()[f]);
        let mats: Vec<Matrix> = homs.iter().map(|h| h.components[f].clone()).collect();
        match generic_rank_reaches(&mats, rows, cols, want(f), &mut rng, opts.samples)? {
            Verdict::No => return Ok(Verdict::No),
            Verdict::Inconclusive => verdict = Verdict::Inconclusive,
            Verdict::Yes => {}
        }
    }
    Ok(verdict)
}

/// Is there a homomorphism `M -> N` invertible at every face?
pub fn is_isomorphic(m: &SquareFreeModule, n: &SquareFreeModule, opts: SearchOptions) -> Result<Verdict, Error> {
    require_rational(m.field())?;
    if m.complex() != n.complex() || m.field() != n.field() {
        return Err(Error::Precondition("isomorphism needs a common complex and field".into()));
    }
    if m.dims() != n.dims() {
        return Ok(Verdict::No);
    }
    let mn = m.hom_space(n)?;
    let nm = n.hom_space(m)?;
    let mm = m.end_space()?;
    let nn = n.end_space()?;
    if mn.len() != mm.len() || nm.len() != mm.len() || nn.len() != mm.len() {
        return Ok(Verdict::No);
    }
    generic_hom_rank(&mn, m, n, |f| m.dims()[f], opts)
}

/// Is there a homomorphism `M -> N` injective at every face?
pub fn embeds_into(m: &SquareFreeModule, n: &SquareFreeModule, opts: SearchOptions) -> Result<Verdict, Error> {
    require_rational(m.field())?;
    if m.complex() != n.complex() || m.field() != n.field() {
        return Err(Error::Precondition("embedding needs a common complex and field".into()));
    }
    if m.dims().iter().zip(n.dims()).any(|(a, b)| a > b) {
        return Ok(Verdict::No);
    }
    let homs = m.hom_space(n)?;
    generic_hom_rank(&homs, m, n, |f| m.dims()[f], opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Face;
    use crate::graph::Graph;

    const Q: Field = Field::Rational;

    fn k(g: &Graph) -> SquareFreeModule {
        SquareFreeModule::structure_module(&g.complex(), Q)
    }

    #[test]
    fn structure_module_is_indecomposable() {
        for g in [Graph::cycle(3).unwrap(), Graph::k33(), Graph::path(3).unwrap()] {
            assert_eq!(is_indecomposable(&k(&g), SearchOptions::default()).unwrap(), Verdict::Yes);
        }
    }

    #[test]
    fn doubled_module_splits_into_copies() {
        let g = Graph::cycle(4).unwrap();
        let m = k(&g).direct_sum(&k(&g)).unwrap();
        assert_eq!(is_indecomposable(&m, SearchOptions::default()).unwrap(), Verdict::No);
        let d = decompose(&m, SearchOptions::default()).unwrap();
        assert!(d.certified);
        assert_eq!(d.summands.len(), 2);
        for s in &d.summands {
            assert_eq!(is_isomorphic(s, &k(&g), SearchOptions::default()).unwrap(), Verdict::Yes);
        }
    }

    #[test]
    fn zero_and_modular_inputs() {
        let g = Graph::cycle(3).unwrap();
        let z = SquareFreeModule::zero_module(&g.complex(), Q);
        assert_eq!(is_indecomposable(&z, SearchOptions::default()).unwrap(), Verdict::No);
        let p = SquareFreeModule::structure_module(&g.complex(), Field::Prime(5));
        assert!(matches!(is_indecomposable(&p, SearchOptions::default()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn isomorphism_by_conjugation() {
        let g = Graph::k33();
        let m = SquareFreeModule::build_effective(&g, Q, 2).unwrap();
        let changes: Vec<Matrix> = m
            .dims()
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut p = Matrix::identity(Q, d);
                if d > 0 && m.complex().face(i) == Face::vertex(1) {
                    p.set(0, d - 1, Q.from_i64(5));
                    p.set(d - 1, d - 1, Q.from_i64(3));
                }
                p
            })
            .collect();
        let n = m.change_basis(&changes).unwrap();
        assert_eq!(is_isomorphic(&m, &n, SearchOptions::default()).unwrap(), Verdict::Yes);
        assert_eq!(is_isomorphic(&m, &k(&g), SearchOptions::default()).unwrap(), Verdict::No);
    }

    #[test]
    fn two_column_minor_oracle() {
        // span{E11, E22} in 2x2 matrices reaches rank 2 only through a combination
        let a = Matrix::from_i64(Q, &[&[1, 0], &[0, 0]]);
        let b = Matrix::from_i64(Q, &[&[0, 0], &[0, 1]]);
        assert_eq!(exact_two_column_rank(&[a.clone(), b], 2, 2), Verdict::Yes);
        let c = Matrix::from_i64(Q, &[&[2, 0], &[0, 0]]);
        assert_eq!(exact_two_column_rank(&[a, c], 2, 2), Verdict::No);
    }

    #[test]
    fn structure_module_embeds_in_double() {
        let g = Graph::cycle(3).unwrap();
        let kk = k(&g).direct_sum(&k(&g)).unwrap();
        assert_eq!(embeds_into(&k(&g), &kk, SearchOptions::default()).unwrap(), Verdict::Yes);
        assert_eq!(embeds_into(&kk, &k(&g), SearchOptions::default()).unwrap(), Verdict::No);
    }
}
