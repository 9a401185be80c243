//! Faces and finite simplicial complexes on vertices `1..=n`, `n <= 64`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::Error;

pub const MAX_VERTICES: usize = 64;

/// A finite set of vertex labels, stored as a bitmask (vertex `i` is bit `i - 1`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Face(u64);

impl Face {
    pub const EMPTY: Face = Face(0);

    pub fn from_vertices(vs: &[usize]) -> Result<Face, Error> {
        let mut bits = 0u64;
        for &v in vs {
            if v == 0 || v > MAX_VERTICES {
                return Err(Error::InvalidComplex(format!("vertex label {v} out of range 1..={MAX_VERTICES}")));
            }
            if bits & (1 << (v - 1)) != 0 {
                return Err(Error::InvalidComplex(format!("vertex {v} repeated in a face")));
            }
            bits |= 1 << (v - 1);
        }
        Ok(Face(bits))
    }

    pub fn vertex(v: usize) -> Face {
        assert!((1..=MAX_VERTICES).contains(&v), "vertex label {v} out of range");
        Face(1 << (v - 1))
    }

    pub fn edge(a: usize, b: usize) -> Face {
        Face::vertex(a).union(Face::vertex(b))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn from_bits(bits: u64) -> Face {
        Face(bits)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        v >= 1 && v <= MAX_VERTICES && self.0 & (1 << (v - 1)) != 0
    }

    pub fn is_subset(self, other: Face) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Face) -> Face {
        Face(self.0 | other.0)
    }

    pub fn with(self, v: usize) -> Face {
        self.union(Face::vertex(v))
    }

    pub fn without(self, v: usize) -> Face {
        Face(self.0 & !(1 << (v - 1)))
    }

    pub fn max_vertex(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// Vertex labels in increasing order.
    pub fn vertices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        core::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as usize + 1;
            bits &= bits - 1;
            Some(v)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.vertices().collect()
    }

    /// `(-1)^{#{i in self : i < j}}`, as `true` for a minus sign.
    pub fn sign_is_negative(self, j: usize) -> bool {
        let below = self.0 & ((1u64 << (j - 1)) - 1);
        below.count_ones() % 2 == 1
    }

    /// Text form `[1,2]`.
    pub fn label(self) -> String {
        let mut s = String::from("[");
        for (k, v) in self.vertices().enumerate() {
            if k > 0 {
                s.push(',');
            }
            s.push_str(&format!("{v}"));
        }
        s.push(']');
        s
    }
}

impl Ord for Face {
    fn cmp(&self, other: &Face) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.vertices().cmp(other.vertices()))
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Face) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A covering pair `from ⊂ to = from ∪ {vertex}`, given by face indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cover {
    pub from: usize,
    pub to: usize,
    pub vertex: usize,
}

/// A simplicial complex containing `∅` and every singleton `{i}`, `1 <= i <= n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    n: usize,
    faces: Vec<Face>,
    index: BTreeMap<Face, usize>,
    covers: Vec<Cover>,
    cover_index: BTreeMap<(usize, usize), usize>,
}

impl SimplicialComplex {
    /// The downward closure of `facets` together with all singletons.
    pub fn from_facets(n: usize, facets: &[Face]) -> Result<SimplicialComplex, Error> {
        if n > MAX_VERTICES {
            return Err(Error::InvalidComplex(format!("{n} vertices exceeds {MAX_VERTICES}")));
        }
        let mut all: BTreeMap<Face, ()> = BTreeMap::new();
        all.insert(Face::EMPTY, ());
        for v in 1..=n {
            all.insert(Face::vertex(v), ());
        }
        for &f in facets {
            if f.max_vertex() > n {
                return Err(Error::InvalidComplex(format!("facet {f} uses a vertex above {n}")));
            }
            if f.len() > 20 {
                return Err(Error::InvalidComplex(format!("facet {f} is too large")));
            }
            let bits = f.bits();
            let mut sub = bits;
            loop {
                all.insert(Face(sub), ());
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & bits;
            }
        }
        Ok(Self::build(n, all.into_keys().collect()))
    }

    /// Builds from an explicit face list, which must be closed under subsets.
    pub fn from_faces(n: usize, faces: &[Face]) -> Result<SimplicialComplex, Error> {
        let mut set: BTreeMap<Face, ()> = faces.iter().map(|&f| (f, ())).collect();
        for v in 1..=n {
            if !set.contains_key(&Face::vertex(v)) {
                return Err(Error::InvalidComplex(format!("vertex {v} is missing")));
            }
        }
        set.insert(Face::EMPTY, ());
        for &f in set.keys() {
            if f.max_vertex() > n {
                return Err(Error::InvalidComplex(format!("face {f} uses a vertex above {n}")));
            }
            for v in f.vertices() {
                if !set.contains_key(&f.without(v)) {
                    return Err(Error::InvalidComplex(format!("face {f} present but {} missing", f.without(v))));
                }
            }
        }
        Ok(Self::build(n, set.into_keys().collect()))
    }

    fn build(n: usize, faces: Vec<Face>) -> SimplicialComplex {
        let index: BTreeMap<Face, usize> = faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let mut covers = Vec::new();
        for (i, &f) in faces.iter().enumerate() {
            for v in 1..=n {
                if f.contains(v) {
                    continue;
                }
                if let Some(&j) = index.get(&f.with(v)) {
                    covers.push(Cover { from: i, to: j, vertex: v });
                }
            }
        }
        let cover_index = covers.iter().enumerate().map(|(k, c)| ((c.from, c.to), k)).collect();
        SimplicialComplex { n, faces, index, covers, cover_index }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// All faces, sorted by size and then lexicographically.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> Face {
        self.faces[i]
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn contains(&self, f: Face) -> bool {
        self.index.contains_key(&f)
    }

    pub fn index_of(&self, f: Face) -> Option<usize> {
        self.index.get(&f).copied()
    }

    pub fn require(&self, f: Face) -> Result<usize, Error> {
        self.index_of(f).ok_or_else(|| Error::FaceNotInComplex(f.label()))
    }

    /// Covering pairs `F ⊂ F ∪ {i}`, ordered by source face and then vertex.
    pub fn covers(&self) -> &[Cover] {
        &self.covers
    }

    pub fn cover_between(&self, from: usize, to: usize) -> Option<usize> {
        self.cover_index.get(&(from, to)).copied()
    }

    /// Largest face size minus one; the void-free minimum is `-1`.
    pub fn dim(&self) -> isize {
        self.faces.last().map_or(-1, |f| f.len() as isize - 1)
    }

    pub fn faces_of_size(&self, k: usize) -> impl Iterator<Item = (usize, Face)> + '_ {
        self.faces.iter().copied().enumerate().filter(move |(_, f)| f.len() == k)
    }

    pub fn facets(&self) -> Vec<Face> {
        self.faces
            .iter()
            .copied()
            .filter(|&f| (1..=self.n).all(|v| f.contains(v) || !self.contains(f.with(v))))
            .collect()
    }

    /// True when every facet has the same size.
    pub fn is_pure(&self) -> bool {
        let facets = self.facets();
        facets.windows(2).all(|w| w[0].len() == w[1].len())
    }

    /// Faces containing `f`.
    pub fn star(&self, f: Face) -> Vec<Face> {
        self.faces.iter().copied().filter(|&g| f.is_subset(g)).collect()
    }

    /// `{G : G ∩ F = ∅, G ∪ F ∈ Δ}`.
    pub fn link(&self, f: Face) -> Vec<Face> {
        self.faces
            .iter()
            .copied()
            .filter(|&g| g.bits() & f.bits() == 0 && self.contains(g.union(f)))
            .collect()
    }

    /// `Δ - F`: faces not containing `F`. Empty (void) for `F = ∅`.
    pub fn deletion(&self, f: Face) -> Vec<Face> {
        self.faces.iter().copied().filter(|&g| !f.is_subset(g)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn face_order_is_size_then_lex() {
        let mut fs = [Face::edge(2, 3), Face::vertex(3), Face::edge(1, 3), Face::EMPTY, Face::vertex(1)];
        fs.sort();
        let labels: Vec<String> = fs.iter().map(|f| f.label()).collect();
        assert_eq!(labels, ["[]", "[1]", "[3]", "[1,3]", "[2,3]"]);
    }

    #[test]
    fn triangle_boundary() {
        let facets = [Face::edge(1, 2), Face::edge(1, 3), Face::edge(2, 3)];
        let c = SimplicialComplex::from_facets(3, &facets).unwrap();
        assert_eq!(c.face_count(), 7);
        assert_eq!(c.dim(), 1);
        assert_eq!(c.covers().len(), 3 + 6);
        assert!(c.is_pure());
        assert_eq!(c.link(Face::vertex(1)), vec![Face::EMPTY, Face::vertex(2), Face::vertex(3)]);
        assert_eq!(c.deletion(Face::vertex(1)).len(), 4);
    }

    #[test]
    fn from_faces_checks_closure() {
        let faces = [Face::EMPTY, Face::vertex(1), Face::edge(1, 2)];
        assert!(SimplicialComplex::from_faces(2, &faces).is_err());
    }

    #[test]
    fn signs_count_smaller_vertices() {
        let s = Face::from_vertices(&[1, 3]).unwrap();
        assert!(!s.sign_is_negative(1));
        assert!(s.sign_is_negative(2));
        assert!(!s.sign_is_negative(4));
    }
}
