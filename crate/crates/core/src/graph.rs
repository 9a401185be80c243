//! Simplicial graphs: one-dimensional complexes with labelled vertices `1..=n`.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::complex::{Face, SimplicialComplex, MAX_VERTICES};
use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

/// A simple cycle: vertices in traversal order starting at the smallest label,
/// with the second vertex smaller than the last.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SimpleCycle {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// A BFS spanning tree from vertex 1 with its chords.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    /// Vertices in BFS discovery order.
    pub order: Vec<usize>,
    /// `parent[v]` for `v != 1`; index 0 and the root hold 0.
    pub parent: Vec<usize>,
    pub tree_edges: Vec<usize>,
    /// Non-tree edges in lexicographic order.
    pub chords: Vec<usize>,
}

pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph, Error> {
        if n > MAX_VERTICES {
            return Err(Error::InvalidGraph(format!("{n} vertices exceeds {MAX_VERTICES}")));
        }
        let mut es: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if !(1 <= a && a < b && b <= n) {
                return Err(Error::InvalidGraph(format!("edge [{a},{b}] must satisfy 1 <= i < j <= {n}")));
            }
            es.push((a, b));
        }
        es.sort_unstable();
        if es.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph("duplicate edge".into()));
        }
        let mut adj = vec![Vec::new(); n + 1];
        for &(a, b) in &es {
            adj[a].push(b);
            adj[b].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        Ok(Graph { n, edges: es, adj })
    }

    pub fn cycle(k: usize) -> Result<Graph, Error> {
        if k < 3 {
            return Err(Error::InvalidGraph(format!("cycle:{k} needs k >= 3")));
        }
        let mut es: Vec<_> = (1..k).map(|i| (i, i + 1)).collect();
        es.push((1, k));
        Graph::new(k, &es)
    }

    pub fn path(k: usize) -> Result<Graph, Error> {
        if k < 1 {
            return Err(Error::InvalidGraph("path:k needs k >= 1".into()));
        }
        Graph::new(k, &(1..k).map(|i| (i, i + 1)).collect::<Vec<_>>())
    }

    pub fn complete(k: usize) -> Result<Graph, Error> {
        if k < 1 {
            return Err(Error::InvalidGraph("complete:k needs k >= 1".into()));
        }
        let es: Vec<_> = (1..=k).flat_map(|i| (i + 1..=k).map(move |j| (i, j))).collect();
        Graph::new(k, &es)
    }

    /// Sides `{1,2,3}` and `{4,5,6}`.
    pub fn k33() -> Graph {
        let es: Vec<_> = (1..=3).flat_map(|i| (4..=6).map(move |j| (i, j))).collect();
        Graph::new(6, &es).unwrap()
    }

    /// Outer 5-cycle `1..5`, inner pentagram `6..10`, spokes `i -- i+5`.
    pub fn petersen() -> Graph {
        let mut es = Vec::new();
        for i in 0..5 {
            es.push(ordered(i + 1, (i + 1) % 5 + 1));
            es.push((i + 1, i + 6));
            es.push(ordered(i + 6, (i + 2) % 5 + 6));
        }
        Graph::new(10, &es).unwrap()
    }

    /// The 14-cycle plus chords `i -- i+5` for odd `i` (LCF `[5,-5]^7`).
    pub fn heawood() -> Graph {
        let mut es = Vec::new();
        for i in 0..14 {
            es.push(ordered(i + 1, (i + 1) % 14 + 1));
            if i % 2 == 0 {
                es.push(ordered(i + 1, (i + 5) % 14 + 1));
            }
        }
        Graph::new(14, &es).unwrap()
    }

    /// Two vertices `1, 2` joined by internally disjoint paths with the given
    /// numbers of interior vertices. A zero entry is the edge `1 -- 2`.
    pub fn theta(lengths: &[usize]) -> Result<Graph, Error> {
        let mut n = 2;
        let mut es = Vec::new();
        for &len in lengths {
            if len == 0 {
                es.push((1, 2));
                continue;
            }
            let mut prev = 1;
            for _ in 0..len {
                n += 1;
                es.push(ordered(prev, n));
                prev = n;
            }
            es.push(ordered(prev, 2));
        }
        Graph::new(n, &es)
    }

    /// Parses `cycle:k`, `path:k`, `k33`, `petersen`, `heawood`, `complete:k`, `theta:a,b,c`.
    pub fn from_builder(name: &str) -> Result<Graph, Error> {
        let bad = || Error::Parse(format!("unknown builder {name:?}"));
        match name.trim() {
            "k33" => Ok(Graph::k33()),
            "petersen" => Ok(Graph::petersen()),
            "heawood" => Ok(Graph::heawood()),
            other => {
                let (kind, arg) = other.split_once(':').ok_or_else(bad)?;
                if kind == "theta" {
                    let lengths = arg.split(',').map(|x| x.trim().parse::<usize>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad())?;
                    return Graph::theta(&lengths);
                }
                let k: usize = arg.parse().map_err(|_| bad())?;
                match kind {
                    "cycle" => Graph::cycle(k),
                    "path" => Graph::path(k),
                    "complete" => Graph::complete(k),
                    _ => Err(bad()),
                }
            }
        }
    }

    /// Reads a one-dimensional complex as a graph.
    pub fn from_complex(c: &SimplicialComplex) -> Result<Graph, Error> {
        if c.dim() > 1 {
            return Err(Error::Precondition(format!("complex of dimension {} is not a graph", c.dim())));
        }
        let es: Vec<_> = c
            .faces_of_size(2)
            .map(|(_, f)| {
                let v = f.to_vec();
                (v[0], v[1])
            })
            .collect();
        Graph::new(c.vertex_count(), &es)
    }

    pub fn complex(&self) -> SimplicialComplex {
        let facets: Vec<Face> = self.edges.iter().map(|&(a, b)| Face::edge(a, b)).collect();
        SimplicialComplex::from_facets(self.n, &facets).expect("graph faces are valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted lexicographically, each as `(tail, head)` with `tail < head`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn valency(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&ordered(a, b)).ok()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.edge_index(a, b).is_some()
    }

    /// Indices of the edges at `v`, in increasing order.
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        let mut es: Vec<usize> = self.adj[v].iter().map(|&w| self.edge_index(v, w).unwrap()).collect();
        es.sort_unstable();
        es
    }

    pub fn edge_face(&self, e: usize) -> Face {
        let (a, b) = self.edges[e];
        Face::edge(a, b)
    }

    /// Connected components of the subgraph induced on `alive` vertices.
    fn components_within(&self, alive: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n + 1];
        let mut comps = Vec::new();
        for s in 1..=self.n {
            if !alive[s] || seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut k = 0;
            while k < comp.len() {
                let v = comp[k];
                k += 1;
                for &w in &self.adj[v] {
                    if alive[w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_within(&vec![true; self.n + 1])
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// True when the vertices of the bitmask induce a connected, nonempty subgraph.
    pub fn induces_connected(&self, mask: u64) -> bool {
        let mut alive = vec![false; self.n + 1];
        for v in Face::from_bits(mask).vertices() {
            alive[v] = true;
        }
        mask != 0 && self.components_within(&alive).len() == 1
    }

    /// `1 - v + e`.
    pub fn genus(&self) -> Result<usize, Error> {
        if !self.is_connected() {
            return Err(Error::Precondition("genus needs a connected graph".into()));
        }
        Ok(1 + self.edges.len() - self.n)
    }

    /// Shortest cycle length, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in 1..=self.n {
            let mut dist = vec![usize::MAX; self.n + 1];
            let mut parent = vec![0; self.n + 1];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        parent[w] = v;
                        queue.push_back(w);
                    } else if parent[v] != w {
                        let len = dist[v] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Cut vertices, by lowpoint DFS.
    pub fn cut_vertices(&self) -> Vec<usize> {
        let n = self.n;
        let mut disc = vec![0usize; n + 1];
        let mut low = vec![0usize; n + 1];
        let mut is_cut = vec![false; n + 1];
        let mut time = 0;
        for root in 1..=n {
            if disc[root] != 0 {
                continue;
            }
            time += 1;
            disc[root] = time;
            low[root] = time;
            let mut root_children = 0;
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, 0, 0)];
            while let Some(&mut (v, parent, ref mut next)) = stack.last_mut() {
                if *next < self.adj[v].len() {
                    let w = self.adj[v][*next];
                    *next += 1;
                    if disc[w] == 0 {
                        time += 1;
                        disc[w] = time;
                        low[w] = time;
                        if v == root {
                            root_children += 1;
                        }
                        stack.push((w, v, 0));
                    } else if w != parent {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if parent != 0 {
                        low[parent] = low[parent].min(low[v]);
                        if parent != root && low[v] >= disc[parent] {
                            is_cut[parent] = true;
                        }
                    }
                }
            }
            if root_children > 1 {
                is_cut[root] = true;
            }
        }
        (1..=n).filter(|&v| is_cut[v]).collect()
    }

    pub fn is_two_connected(&self) -> bool {
        self.n >= 3 && self.is_connected() && self.cut_vertices().is_empty()
    }

    /// Iterated smoothing of valency-2 vertices with non-adjacent neighbours,
    /// smallest label first. Returns the reduced graph and the renaming map
    /// (`map[old] = Some(new)` for surviving vertices; index 0 unused).
    pub fn reduce(&self) -> (Graph, Vec<Option<usize>>) {
        let mut alive = vec![true; self.n + 1];
        let mut edges: BTreeSet<(usize, usize)> = self.edges.iter().copied().collect();
        let neighbours = |edges: &BTreeSet<(usize, usize)>, v: usize| -> Vec<usize> {
            edges
                .iter()
                .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
                .collect()
        };
        loop {
            let mut changed = false;
            for v in 1..=self.n {
                if !alive[v] {
                    continue;
                }
                let nb = neighbours(&edges, v);
                if nb.len() == 2 && !edges.contains(&ordered(nb[0], nb[1])) {
                    edges.remove(&ordered(v, nb[0]));
                    edges.remove(&ordered(v, nb[1]));
                    edges.insert(ordered(nb[0], nb[1]));
                    alive[v] = false;
                    changed = true;
                    break;
                }
            }
            if !changed {
                break;
            }
        }
        let mut map = vec![None; self.n + 1];
        let mut next = 0;
        for v in 1..=self.n {
            if alive[v] {
                next += 1;
                map[v] = Some(next);
            }
        }
        let es: Vec<_> = edges.iter().map(|&(a, b)| ordered(map[a].unwrap(), map[b].unwrap())).collect();
        (Graph::new(next, &es).expect("smoothing keeps the graph simple"), map)
    }

    /// The invariant `s`: the largest independent `σ` whose complement induces
    /// a connected subgraph. Exhaustive, so limited to 30 vertices.
    pub fn max_independent_connected_complement(&self) -> Result<usize, Error> {
        if !self.is_connected() {
            return Err(Error::Precondition("s needs a connected graph".into()));
        }
        if self.n > 30 {
            return Err(Error::Unsupported(format!("exhaustive search over {} vertices", self.n)));
        }
        let full: u64 = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        let mut best = 0;
        for sigma in 1..=full {
            let size = sigma.count_ones() as usize;
            if size <= best {
                continue;
            }
            if self.edges.iter().any(|&(a, b)| sigma >> (a - 1) & 1 == 1 && sigma >> (b - 1) & 1 == 1) {
                continue;
            }
            if self.induces_connected(full & !sigma) {
                best = size;
            }
        }
        Ok(best)
    }

    /// Every simple cycle, by DFS from each smallest vertex. Errors past `cap`.
    pub fn simple_cycles(&self, cap: usize) -> Result<Vec<SimpleCycle>, Error> {
        let mut out = Vec::new();
        let mut path: Vec<usize> = Vec::new();
        let mut on_path = vec![false; self.n + 1];
        for s in 1..=self.n {
            path.clear();
            path.push(s);
            on_path[s] = true;
            self.cycle_dfs(s, &mut path, &mut on_path, &mut out, cap)?;
            on_path[s] = false;
        }
        Ok(out)
    }

    fn cycle_dfs(
        &self,
        s: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        out: &mut Vec<SimpleCycle>,
        cap: usize,
    ) -> Result<(), Error> {
        let v = *path.last().unwrap();
        for &w in &self.adj[v] {
            if w == s && path.len() >= 3 && path[1] < v {
                if out.len() >= cap {
                    return Err(Error::CycleCapExceeded(cap));
                }
                let mut edges: Vec<usize> = path.windows(2).map(|p| self.edge_index(p[0], p[1]).unwrap()).collect();
                edges.push(self.edge_index(v, s).unwrap());
                out.push(SimpleCycle { vertices: path.clone(), edges });
            } else if w > s && !on_path[w] {
                path.push(w);
                on_path[w] = true;
                self.cycle_dfs(s, path, on_path, out, cap)?;
                on_path[w] = false;
                path.pop();
            }
        }
        Ok(())
    }

    /// BFS tree from vertex 1, neighbours visited in increasing order.
    pub fn spanning_tree(&self) -> Result<SpanningTree, Error> {
        if self.n == 0 || !self.is_connected() {
            return Err(Error::Precondition("spanning tree needs a connected graph".into()));
        }
        let mut parent = vec![0; self.n + 1];
        let mut seen = vec![false; self.n + 1];
        let mut order = vec![1];
        let mut tree = vec![false; self.edges.len()];
        seen[1] = true;
        let mut k = 0;
        while k < order.len() {
            let v = order[k];
            k += 1;
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    tree[self.edge_index(v, w).unwrap()] = true;
                    order.push(w);
                }
            }
        }
        let tree_edges = (0..self.edges.len()).filter(|&e| tree[e]).collect();
        let chords = (0..self.edges.len()).filter(|&e| !tree[e]).collect();
        Ok(SpanningTree { order, parent, tree_edges, chords })
    }

    /// One signed cycle per chord: the chord oriented tail to head, closed
    /// through the tree. Entries are edge coefficients in `{-1, 0, 1}`.
    pub fn fundamental_cycles(&self) -> Result<(SpanningTree, Vec<Vec<i64>>), Error> {
        let tree = self.spanning_tree()?;
        let mut depth = vec![0usize; self.n + 1];
        for &v in &tree.order[1..] {
            depth[v] = depth[tree.parent[v]] + 1;
        }
        let mut cycles = Vec::new();
        for &c in &tree.chords {
            let (a, b) = self.edges[c];
            let mut vec = vec![0i64; self.edges.len()];
            vec[c] = 1;
            // walk b -> ... -> lca -> ... -> a, i.e. the tree path closing a -> b
            let (mut x, mut y) = (b, a);
            let mut tail_from_a: Vec<(usize, usize)> = Vec::new();
            while x != y {
                if depth[x] >= depth[y] {
                    let p = tree.parent[x];
                    add_step(self, &mut vec, x, p);
                    x = p;
                } else {
                    let p = tree.parent[y];
                    tail_from_a.push((p, y));
                    y = p;
                }
            }
            for &(u, w) in tail_from_a.iter().rev() {
                add_step(self, &mut vec, u, w);
            }
            cycles.push(vec);
        }
        Ok((tree, cycles))
    }

    /// The vertex-edge boundary matrix of the reduced chain complex, as integers:
    /// row `v-1`, column `e`, `+1` at the head and `-1` at the tail.
    pub fn boundary_i64(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.edges.len()]; self.n];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            m[a - 1][e] = -1;
            m[b - 1][e] = 1;
        }
        m
    }

    pub fn describe(&self) -> String {
        format!("graph on {} vertices with {} edges", self.n, self.edges.len())
    }
}

fn add_step(g: &Graph, vec: &mut [i64], from: usize, to: usize) {
    let e = g.edge_index(from, to).unwrap();
    vec[e] += if from < to { 1 } else { -1 };
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl SimpleCycle {
    /// Signed edge vector following the traversal order.
    pub fn signed_vector(&self, g: &Graph) -> Vec<i64> {
        let mut vec = vec![0i64; g.edge_count()];
        let k = self.vertices.len();
        for i in 0..k {
            add_step(g, &mut vec, self.vertices[i], self.vertices[(i + 1) % k]);
        }
        vec
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge_mask(&self) -> u128 {
        self.edges.iter().fold(0u128, |m, &e| m | 1u128 << e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bowtie() -> Graph {
        Graph::new(5, &[(1, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 5)]).unwrap()
    }

    #[test]
    fn named_graph_invariants() {
        for (g, genus, v, girth) in [(Graph::k33(), 4, 6, 4), (Graph::petersen(), 6, 10, 5), (Graph::heawood(), 8, 14, 6)] {
            assert_eq!((g.genus().unwrap(), g.vertex_count(), g.girth().unwrap()), (genus, v, girth));
            assert!((1..=v).all(|x| g.valency(x) == 3));
        }
        assert_eq!(Graph::cycle(3).unwrap().genus().unwrap(), 1);
        assert_eq!(Graph::path(3).unwrap().girth(), None);
    }

    #[test]
    fn two_connectivity() {
        assert!(Graph::cycle(3).unwrap().is_two_connected());
        assert!(Graph::petersen().is_two_connected());
        assert_eq!(bowtie().cut_vertices(), vec![3]);
        assert!(!bowtie().is_two_connected());
        assert!(!Graph::path(2).unwrap().is_two_connected());
        assert_eq!(Graph::path(4).unwrap().cut_vertices(), vec![2, 3]);
    }

    #[test]
    fn reduction_examples() {
        let (c, map) = Graph::cycle(4).unwrap().reduce();
        assert_eq!(c, Graph::cycle(3).unwrap());
        assert_eq!(map[1], None);
        let (p, _) = Graph::petersen().reduce();
        assert_eq!(p, Graph::petersen());
        let mut es: Vec<_> = Graph::k33().edges().to_vec();
        es.retain(|&e| e != (1, 4));
        es.push((1, 7));
        es.push((4, 7));
        let sub = Graph::new(7, &es).unwrap();
        let (r, map) = sub.reduce();
        assert_eq!(r, Graph::k33());
        assert_eq!(map[7], None);
    }

    #[test]
    fn invariant_s() {
        assert_eq!(Graph::cycle(3).unwrap().max_independent_connected_complement().unwrap(), 1);
        assert_eq!(Graph::k33().max_independent_connected_complement().unwrap(), 2);
        assert_eq!(Graph::path(3).unwrap().max_independent_connected_complement().unwrap(), 2);
    }

    #[test]
    fn cycle_counts() {
        assert_eq!(Graph::cycle(3).unwrap().simple_cycles(10).unwrap().len(), 1);
        let k = Graph::k33().simple_cycles(DEFAULT_CYCLE_CAP).unwrap();
        assert_eq!(k.iter().filter(|c| c.len() == 4).count(), 9);
        assert_eq!(k.iter().filter(|c| c.len() == 6).count(), 6);
        assert!(Graph::path(5).unwrap().simple_cycles(10).unwrap().is_empty());
        assert!(matches!(Graph::complete(6).unwrap().simple_cycles(5), Err(Error::CycleCapExceeded(5))));
    }

    #[test]
    fn fundamental_cycles_are_cycles() {
        for g in [Graph::cycle(3).unwrap(), Graph::k33(), Graph::heawood()] {
            let (tree, cycles) = g.fundamental_cycles().unwrap();
            assert_eq!(tree.chords.len(), g.genus().unwrap());
            let d = g.boundary_i64();
            for c in &cycles {
                for row in &d {
                    assert_eq!(row.iter().zip(c).map(|(a, b)| a * b).sum::<i64>(), 0);
                }
            }
        }
    }

    #[test]
    fn builders_parse() {
        assert_eq!(Graph::from_builder("cycle:5").unwrap().edge_count(), 5);
        assert_eq!(Graph::from_builder("complete:4").unwrap().edge_count(), 6);
        assert!(Graph::from_builder("cycle:2").is_err());
        assert!(Graph::from_builder("wheel:5").is_err());
        assert!(Graph::new(3, &[(2, 1)]).is_err());
        assert!(Graph::new(3, &[(1, 2), (1, 2)]).is_err());
    }

    #[test]
    fn theta_graph() {
        let t = Graph::theta(&[1, 1, 1]).unwrap();
        assert_eq!((t.vertex_count(), t.edge_count(), t.genus().unwrap()), (5, 6, 2));
        assert!(t.is_two_connected());
    }
}
