//! Univariate polynomials over the rationals.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::field::Scalar;
use crate::matrix::Matrix;

/// Coefficients from the constant term upward, never with a trailing zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| q(c)).collect())
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::from_i64(&[1])
    }

    /// `x - r`.
    pub fn linear(r: &BigRational) -> Poly {
        Poly::new(vec![-r.clone(), BigRational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial at `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading();
        Poly::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigRational::zero();
        Poly::new((0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect())
    }

    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, u, v)` with `u*a + v*b = g` and `g` monic.
    pub fn ext_gcd(a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (qt, r) = r0.div_rem(&r1);
            r0 = core::mem::replace(&mut r1, r);
            let s = s0.sub(&qt.mul(&s1));
            s0 = core::mem::replace(&mut s1, s);
            let t = t0.sub(&qt.mul(&t1));
            t0 = core::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let l = Poly::new(vec![r0.leading().recip()]);
        (r0.mul(&l), s0.mul(&l), t0.mul(&l))
    }

    /// Yun's algorithm: monic square-free `f_i` with `self = lc * prod f_i^i`.
    pub fn square_free_factors(&self) -> Vec<(Poly, usize)> {
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let fp = f.derivative();
        let a0 = Poly::gcd(&f, &fp);
        let mut b = f.div_rem(&a0).0;
        let mut c = fp.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let a = Poly::gcd(&b, &d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Rational roots, found among `p/q` with `p | a_0`, `q | a_n`.
    /// Divisor enumeration is capped, so very large coefficients may hide roots.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        let mut roots = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return roots;
        }
        let mut f = self.clone();
        while f.coeffs.first().is_some_and(Zero::is_zero) {
            f = Poly::new(f.coeffs[1..].to_vec());
            if !roots.contains(&BigRational::zero()) {
                roots.push(BigRational::zero());
            }
        }
        if f.degree().unwrap_or(0) == 0 {
            return roots;
        }
        let lcm = f.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = f.coeffs.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let (Some(ps), Some(qs)) = (divisors(&ints[0]), divisors(ints.last().unwrap())) else {
            return roots;
        };
        for p in &ps {
            for qd in &qs {
                for sign in [1, -1] {
                    let r = BigRational::new(p * BigInt::from(sign), qd.clone());
                    if !roots.contains(&r) && f.eval(&r).is_zero() {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Evaluates at a square matrix by Horner's rule.
    pub fn eval_matrix(&self, m: &Matrix) -> Result<Matrix, Error> {
        let f = m.field();
        if !f.is_rational() {
            return Err(Error::Unsupported("polynomial evaluation needs rational matrices".into()));
        }
        let n = m.rows();
        let mut acc = Matrix::zeros(f, n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m)?;
            let s = Scalar::Rational(c.clone());
            for i in 0..n {
                let v = acc.get(i, i) + &s;
                acc.set(i, i, v);
            }
        }
        Ok(acc)
    }
}

const DIVISOR_CAP: usize = 4096;
const TRIAL_LIMIT: u64 = 100_000;

fn divisors(x: &BigInt) -> Option<Vec<BigInt>> {
    let mut n = x.abs();
    if n.is_zero() {
        return None;
    }
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT && BigInt::from(d) * BigInt::from(d) <= n {
        let bd = BigInt::from(d);
        let mut e = 0;
        while (&n % &bd).is_zero() {
            n /= &bd;
            e += 1;
        }
        if e > 0 {
            factors.push((bd, e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        factors.push((n, 1));
    }
    let count: usize = factors.iter().map(|(_, e)| *e as usize + 1).product();
    if count > DIVISOR_CAP {
        return None;
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for dv in &divs {
            let mut pw = BigInt::one();
            for _ in 0..=e {
                next.push(dv * &pw);
                pw *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    Some(divs)
}

/// Minimal polynomial of a square rational matrix, via linear dependence of its powers.
pub fn minimal_polynomial(m: &Matrix) -> Result<Poly, Error> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("minimal polynomial of a non-square matrix".into()));
    }
    if !m.field().is_rational() {
        return Err(Error::Unsupported("minimal polynomials are computed over Q only".into()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Poly::one());
    }
    let f = m.field();
    let mut powers: Vec<Vec<Scalar>> = Vec::new();
    let mut p = Matrix::identity(f, n);
    for k in 0..=n {
        powers.push((0..n * n).map(|i| p.get(i / n, i % n).clone()).collect());
        let stacked = Matrix::from_columns(f, n * n, &powers);
        let kernel = stacked.nullspace();
        if let Some(rel) = kernel.first() {
            let coeffs = rel.iter().map(|s| s.as_rational().cloned().unwrap()).collect();
            return Ok(Poly::new(coeffs).monic());
        }
        if k < n {
            p = p.mul(m)?;
        }
    }
    unreachable!("Cayley-Hamilton bounds the degree by n")
}

/// Splits a monic polynomial into two coprime nonconstant factors, if the
/// square-free decomposition or a rational root exposes one.
pub fn coprime_split(p: &Poly) -> Option<(Poly, Poly)> {
    let parts = p.square_free_factors();
    if parts.len() >= 2 {
        let (f, i) = &parts[0];
        let mut a = Poly::one();
        for _ in 0..*i {
            a = a.mul(f);
        }
        let b = p.monic().div_rem(&a).0;
        return Some((a, b));
    }
    let (f, i) = parts.first()?;
    if f.degree()? < 2 {
        return None;
    }
    let r = f.rational_roots().into_iter().next()?;
    let mut a = Poly::one();
    for _ in 0..*i {
        a = a.mul(&Poly::linear(&r));
    }
    let b = p.monic().div_rem(&a).0;
    Some((a, b))
}

pub fn to_i64(c: &BigRational) -> Option<i64> {
    if c.is_integer() {
        c.to_integer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use alloc::string::ToString;

    #[test]
    fn division_with_remainder() {
        let a = Poly::from_i64(&[-1, 0, 1]);
        let (qt, r) = a.div_rem(&Poly::from_i64(&[-1, 1]));
        assert_eq!(qt, Poly::from_i64(&[1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn yun_separates_multiplicities() {
        // (x-1)^2 (x+2)
        let p = Poly::from_i64(&[-1, 1]).mul(&Poly::from_i64(&[-1, 1])).mul(&Poly::from_i64(&[2, 1]));
        let parts = p.square_free_factors();
        assert_eq!(parts, vec![(Poly::from_i64(&[2, 1]), 1), (Poly::from_i64(&[-1, 1]), 2)]);
    }

    #[test]
    fn rational_roots_of_cubic() {
        // (2x - 1)(x + 3)(x^2 + 1)
        let p = Poly::from_i64(&[-1, 2]).mul(&Poly::from_i64(&[3, 1])).mul(&Poly::from_i64(&[1, 0, 1]));
        let roots: Vec<_> = p.rational_roots().iter().map(|r| r.to_string()).collect();
        assert_eq!(roots, vec!["-3", "1/2"]);
        assert!(Poly::from_i64(&[-2, 0, 1]).rational_roots().is_empty());
    }

    #[test]
    fn ext_gcd_identity() {
        let a = Poly::from_i64(&[-1, 1]);
        let b = Poly::from_i64(&[1, 1]);
        let (g, u, v) = Poly::ext_gcd(&a, &b);
        assert_eq!(g, Poly::one());
        assert_eq!(u.mul(&a).add(&v.mul(&b)), Poly::one());
    }

    #[test]
    fn minimal_polynomial_of_projection() {
        let f = Field::Rational;
        let m = Matrix::from_i64(f, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]]);
        assert_eq!(minimal_polynomial(&m).unwrap(), Poly::from_i64(&[0, -1, 1]));
        let j = Matrix::from_i64(f, &[&[2, 1], &[0, 2]]);
        assert_eq!(minimal_polynomial(&j).unwrap(), Poly::from_i64(&[4, -4, 1]));
    }

    #[test]
    fn split_requires_coprime_parts() {
        assert!(coprime_split(&Poly::from_i64(&[4, -4, 1])).is_none());
        assert!(coprime_split(&Poly::from_i64(&[-2, 0, 1])).is_none());
        let (a, b) = coprime_split(&Poly::from_i64(&[0, -1, 1])).unwrap();
        assert_eq!(Poly::gcd(&a, &b), Poly::one());
    }
}
