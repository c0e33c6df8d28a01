//! Multigraphs with tadpoles: canonical forms, exhaustive enumeration of
//! isomorphism classes, automorphisms and their signs.
//!
//! Vertices are `0..v` internally and `1..=v` in text dumps. The canonical
//! form of a graph is the relabeling that maximizes its column code: for
//! `k = 0..v`, the multiplicities `A[0][k], ..., A[k-1][k]` followed by the
//! tadpole count `A[k][k]`. A prefix of the code only depends on the first
//! vertices, so the first `k` vertices of a canonical graph again form a
//! canonical graph. Enumeration uses this to add one vertex at a time and keep
//! only canonical extensions.

use std::cmp::Ordering;
use std::fmt::Write as _;

use thiserror::Error;

use crate::flavor::{Convention, Flavor};

/// Largest vertex count accepted by [`canonicalize`] and [`automorphisms`].
pub const MAX_VERTICES: usize = 9;
/// Largest vertex count accepted by [`enumerate`].
pub const MAX_ENUM_VERTICES: usize = 8;
/// Largest edge count accepted by [`enumerate`].
pub const MAX_ENUM_EDGES: usize = 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("{0} vertices exceed the exhaustive-search limit of {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("enumeration of v={v}, e={e} is beyond the supported range")]
    TooLarge { v: usize, e: usize },
    #[error("edge {a}-{b} refers to a vertex outside 0..{v}")]
    VertexOutOfRange { a: usize, b: usize, v: usize },
    #[error("cannot parse graph `{0}`")]
    Parse(String),
}

/// An undirected multigraph with tadpoles. Edges are stored as a sorted list
/// of pairs `(a, b)` with `a <= b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiGraph {
    v: usize,
    edges: Vec<(usize, usize)>,
}

impl MultiGraph {
    pub fn new(v: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= v || b >= v {
                return Err(GraphError::VertexOutOfRange { a, b, v });
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        Ok(MultiGraph { v, edges: list })
    }

    /// Builds a graph from 1-indexed edges.
    pub fn from_one_indexed(v: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if let Some(&(a, b)) = edges.iter().find(|(a, b)| *a == 0 || *b == 0) {
            return Err(GraphError::VertexOutOfRange { a, b, v });
        }
        MultiGraph::new(v, edges.iter().map(|&(a, b)| (a - 1, b - 1)))
    }

    fn from_adjacency(v: usize, adj: &[u8]) -> Self {
        let mut edges = Vec::new();
        for a in 0..v {
            for b in a..v {
                for _ in 0..adj[a * v + b] {
                    edges.push((a, b));
                }
            }
        }
        MultiGraph { v, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.v
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `e - v`.
    pub fn loop_order(&self) -> isize {
        self.edges.len() as isize - self.v as isize
    }

    /// Valence of each vertex; a tadpole counts twice.
    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.v];
        for &(a, b) in &self.edges {
            val[a] += 1;
            val[b] += 1;
        }
        val
    }

    pub fn min_valence(&self) -> usize {
        self.valences().into_iter().min().unwrap_or(usize::MAX)
    }

    pub fn has_tadpole(&self) -> bool {
        self.edges.iter().any(|(a, b)| a == b)
    }

    pub fn has_multiedge(&self) -> bool {
        self.edges.windows(2).any(|w| w[0] == w[1])
    }

    /// Symmetric `v x v` matrix of edge multiplicities, tadpoles on the
    /// diagonal, in row-major order.
    pub fn adjacency(&self) -> Vec<u8> {
        let mut adj = vec![0u8; self.v * self.v];
        for &(a, b) in &self.edges {
            adj[a * self.v + b] += 1;
            if a != b {
                adj[b * self.v + a] += 1;
            }
        }
        adj
    }

    /// The graph with vertex `i` renamed to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> MultiGraph {
        assert_eq!(perm.len(), self.v);
        MultiGraph::new(self.v, self.edges.iter().map(|&(a, b)| (perm[a], perm[b]))).expect("permutation stays in range")
    }

    /// `"v; a1-b1, a2-b2, ..."` with 1-indexed vertices.
    pub fn dump(&self) -> String {
        let mut out = format!("{};", self.v);
        for (i, (a, b)) in self.edges.iter().enumerate() {
            write!(out, "{}{}-{}", if i == 0 { " " } else { ", " }, a + 1, b + 1).unwrap();
        }
        out
    }

    /// Parses the output of [`MultiGraph::dump`].
    pub fn parse_dump(s: &str) -> Result<Self, GraphError> {
        let bad = || GraphError::Parse(s.to_string());
        let (v, rest) = s.split_once(';').ok_or_else(bad)?;
        let v: usize = v.trim().parse().map_err(|_| bad())?;
        let mut edges = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (a, b) = item.split_once('-').ok_or_else(bad)?;
            edges.push((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?));
        }
        MultiGraph::from_one_indexed(v, &edges)
    }
}

/// Column code of `adj` listed in the vertex order `order`.
fn column_code(adj: &[u8], n: usize, order: &[usize]) -> Vec<u8> {
    let mut code = Vec::with_capacity(n * (n + 1) / 2);
    for (k, &x) in order.iter().enumerate() {
        for &y in &order[..k] {
            code.push(adj[y * n + x]);
        }
        code.push(adj[x * n + x]);
    }
    code
}

struct CanonSearch<'a> {
    n: usize,
    adj: &'a [u8],
    best: Vec<u8>,
    best_order: Vec<usize>,
    have_best: bool,
    /// Stop as soon as any ordering beats the initial `best`.
    stop_on_greater: bool,
    found_greater: bool,
}

impl CanonSearch<'_> {
    fn run(&mut self, order: &mut Vec<usize>, used: &mut [bool], code: &mut Vec<u8>) {
        if self.found_greater && self.stop_on_greater {
            return;
        }
        if order.len() == self.n {
            if !self.have_best || code.as_slice() > self.best.as_slice() {
                self.best.clone_from(code);
                self.best_order.clone_from(order);
                self.have_best = true;
                self.found_greater = true;
            }
            return;
        }
        for x in 0..self.n {
            if used[x] {
                continue;
            }
            let mark = code.len();
            for &y in order.iter() {
                code.push(self.adj[y * self.n + x]);
            }
            code.push(self.adj[x * self.n + x]);
            let cmp = if self.have_best { code[..].cmp(&self.best[..code.len()]) } else { Ordering::Greater };
            if cmp != Ordering::Less {
                if cmp == Ordering::Greater && self.stop_on_greater {
                    self.found_greater = true;
                    code.truncate(mark);
                    return;
                }
                used[x] = true;
                order.push(x);
                self.run(order, used, code);
                order.pop();
                used[x] = false;
            }
            code.truncate(mark);
            if self.found_greater && self.stop_on_greater {
                return;
            }
        }
    }
}

/// Canonical form together with the relabeling that produces it:
/// `canon == g.relabel(&perm)`.
pub fn canonical_labeling(g: &MultiGraph) -> Result<(MultiGraph, Vec<usize>), GraphError> {
    let n = g.v;
    if n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(n));
    }
    let adj = g.adjacency();
    let mut search = CanonSearch {
        n,
        adj: &adj,
        best: Vec::new(),
        best_order: Vec::new(),
        have_best: false,
        stop_on_greater: false,
        found_greater: false,
    };
    search.run(&mut Vec::with_capacity(n), &mut vec![false; n], &mut Vec::new());
    // best_order[k] is the old vertex placed at position k
    let mut perm = vec![0; n];
    for (k, &x) in search.best_order.iter().enumerate() {
        perm[x] = k;
    }
    Ok((g.relabel(&perm), perm))
}

/// The canonical representative of the isomorphism class of `g`.
pub fn canonicalize(g: &MultiGraph) -> Result<MultiGraph, GraphError> {
    Ok(canonical_labeling(g)?.0)
}

/// Whether the identity labeling of `adj` already has the maximal code.
fn is_canonical_adjacency(adj: &[u8], n: usize) -> bool {
    let identity: Vec<usize> = (0..n).collect();
    let mut search = CanonSearch {
        n,
        adj,
        best: column_code(adj, n, &identity),
        best_order: identity,
        have_best: true,
        stop_on_greater: true,
        found_greater: false,
    };
    search.run(&mut Vec::with_capacity(n), &mut vec![false; n], &mut Vec::new());
    !search.found_greater
}

pub fn is_canonical(g: &MultiGraph) -> bool {
    is_canonical_adjacency(&g.adjacency(), g.v)
}

/// Which degenerate edges may appear in an enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgePolicy {
    pub min_valence: usize,
    /// Largest multiplicity of an ordinary edge.
    pub max_multiplicity: u8,
    /// Largest number of tadpoles at one vertex.
    pub max_tadpoles: u8,
}

impl EdgePolicy {
    /// Everything the flavor allows, minus classes that vanish structurally:
    /// repeated edges under the even convention and tadpoles under the odd one.
    pub fn for_flavor(flavor: Flavor, e: usize) -> Self {
        let cap = e.min(u8::MAX as usize) as u8;
        let (max_multiplicity, max_tadpoles) = match flavor.convention {
            Convention::Even => (1, u8::from(flavor.tadpoles)),
            Convention::Odd => (if flavor.multiedges { cap } else { 1 }, 0),
        };
        EdgePolicy {
            min_valence: flavor.min_valence as usize,
            max_multiplicity,
            max_tadpoles,
        }
    }
}

struct Enumerator {
    v: usize,
    e: usize,
    policy: EdgePolicy,
    adj: Vec<u8>,
    deg: Vec<usize>,
    out: Vec<MultiGraph>,
}

impl Enumerator {
    /// Vertices `0..k` are placed with `used` edges among them.
    fn extend(&mut self, k: usize, used: usize) {
        let remaining = self.e - used;
        let mv = self.policy.min_valence;
        let deficit: usize = (0..k).map(|i| mv.saturating_sub(self.deg[i])).sum();
        // every missing half-edge at a placed vertex needs its own new edge,
        // and the other ends must cover the valence of the vertices to come
        if deficit > remaining || 2 * remaining < deficit + mv * (self.v - k) {
            return;
        }
        if k == self.v {
            if remaining == 0 {
                self.out.push(MultiGraph::from_adjacency(self.v, &self.adj));
            }
            return;
        }
        let mut column = vec![0u8; k + 1];
        self.columns(k, 0, remaining, &mut column, used);
    }

    fn columns(&mut self, k: usize, i: usize, budget: usize, column: &mut Vec<u8>, used: usize) {
        if i == k {
            let max_loops = (self.policy.max_tadpoles as usize).min(budget);
            for l in (0..=max_loops).rev() {
                column[k] = l as u8;
                self.try_column(k, column, used);
            }
            return;
        }
        let max = (self.policy.max_multiplicity as usize).min(budget);
        for m in (0..=max).rev() {
            column[i] = m as u8;
            self.columns(k, i + 1, budget - m, column, used);
        }
        column[i] = 0;
    }

    fn try_column(&mut self, k: usize, column: &[u8], used: usize) {
        let n = self.v;
        let added: usize = column.iter().map(|&c| c as usize).sum();
        for (i, &c) in column.iter().enumerate().take(k) {
            self.adj[i * n + k] = c;
            self.adj[k * n + i] = c;
            self.deg[i] += c as usize;
        }
        self.adj[k * n + k] = column[k];
        self.deg[k] = column[..k].iter().map(|&c| c as usize).sum::<usize>() + 2 * column[k] as usize;
        if self.prefix_is_canonical(k + 1) {
            self.extend(k + 1, used + added);
        }
        for (i, &c) in column.iter().enumerate().take(k) {
            self.adj[i * n + k] = 0;
            self.adj[k * n + i] = 0;
            self.deg[i] -= c as usize;
        }
        self.adj[k * n + k] = 0;
        self.deg[k] = 0;
    }

    fn prefix_is_canonical(&self, m: usize) -> bool {
        let n = self.v;
        let mut sub = vec![0u8; m * m];
        for a in 0..m {
            for b in 0..m {
                sub[a * m + b] = self.adj[a * n + b];
            }
        }
        is_canonical_adjacency(&sub, m)
    }
}

/// All isomorphism classes with `v` vertices and `e` edges allowed by
/// `policy`, as canonical forms in sorted order.
pub fn enumerate_with_policy(v: usize, e: usize, policy: EdgePolicy) -> Result<Vec<MultiGraph>, GraphError> {
    if v > MAX_ENUM_VERTICES || e > MAX_ENUM_EDGES {
        return Err(GraphError::TooLarge { v, e });
    }
    let mut en = Enumerator {
        v,
        e,
        policy,
        adj: vec![0; v * v],
        deg: vec![0; v],
        out: Vec::new(),
    };
    en.extend(0, 0);
    let mut out = en.out;
    out.sort();
    Ok(out)
}

/// All isomorphism classes of the flavor's graphs with `v` vertices and `e`
/// edges that do not vanish structurally (see [`EdgePolicy::for_flavor`]).
/// Classes with an odd automorphism are still listed; [`dim_oracle`] drops
/// them.
pub fn enumerate(v: usize, e: usize, flavor: Flavor) -> Result<Vec<MultiGraph>, GraphError> {
    enumerate_with_policy(v, e, EdgePolicy::for_flavor(flavor, e))
}

/// Automorphism data of a multigraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismReport {
    /// Number of vertex permutations that preserve the edge multiset.
    pub group_order: u64,
    /// Some automorphism permutes the edges oddly.
    pub has_odd_even_convention: bool,
    /// Some automorphism has vertex sign times reversal sign equal to `-1`.
    pub has_odd_odd_convention: bool,
}

impl AutomorphismReport {
    pub fn has_odd(&self, convention: Convention) -> bool {
        match convention {
            Convention::Even => self.has_odd_even_convention,
            Convention::Odd => self.has_odd_odd_convention,
        }
    }
}

/// Sign of the permutation `p` of `0..p.len()`.
pub fn permutation_sign(p: &[usize]) -> i32 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut j = i;
        let mut len = 0;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Every vertex permutation `perm` (vertex `i` goes to `perm[i]`) that maps
/// the edge multiset of `g` to itself.
pub fn automorphism_group(g: &MultiGraph) -> Result<Vec<Vec<usize>>, GraphError> {
    let n = g.v;
    if n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(n));
    }
    let adj = g.adjacency();
    let val = g.valences();
    fn rec(i: usize, n: usize, adj: &[u8], val: &[usize], perm: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(perm.clone());
            return;
        }
        for j in 0..n {
            if used[j] || val[j] != val[i] || adj[j * n + j] != adj[i * n + i] {
                continue;
            }
            if (0..i).any(|k| adj[i * n + k] != adj[j * n + perm[k]]) {
                continue;
            }
            used[j] = true;
            perm.push(j);
            rec(i + 1, n, adj, val, perm, used, out);
            perm.pop();
            used[j] = false;
        }
    }
    let mut out = Vec::new();
    rec(0, n, &adj, &val, &mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    Ok(out)
}

/// Sign of the permutation induced on the edges of a graph without repeated
/// edges, edges numbered by their position in `g.edges()`.
pub fn edge_permutation_sign(g: &MultiGraph, perm: &[usize]) -> i32 {
    let images: Vec<usize> = g
        .edges
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (perm[a].min(perm[b]), perm[a].max(perm[b]));
            g.edges.binary_search(&(x, y)).expect("perm is an automorphism")
        })
        .collect();
    permutation_sign(&images)
}

/// Vertex sign times `(-1)^{edges a < b with perm[a] > perm[b]}`.
pub fn orientation_sign(g: &MultiGraph, perm: &[usize]) -> i32 {
    let mut sign = permutation_sign(perm);
    for &(a, b) in &g.edges {
        if a != b && perm[a] > perm[b] {
            sign = -sign;
        }
    }
    sign
}

pub fn automorphisms(g: &MultiGraph) -> Result<AutomorphismReport, GraphError> {
    let group = automorphism_group(g)?;
    let multi = g.has_multiedge();
    let tadpole = g.has_tadpole();
    let has_odd_even_convention = multi || group.iter().any(|p| edge_permutation_sign(g, p) < 0);
    let has_odd_odd_convention = tadpole || group.iter().any(|p| orientation_sign(g, p) < 0);
    Ok(AutomorphismReport {
        group_order: group.len() as u64,
        has_odd_even_convention,
        has_odd_odd_convention,
    })
}

/// Whether `g` represents zero in the flavor's graph space.
pub fn has_odd_symmetry(g: &MultiGraph, convention: Convention) -> Result<bool, GraphError> {
    Ok(automorphisms(g)?.has_odd(convention))
}

/// Classes of [`enumerate`] without an odd automorphism.
pub fn basis(v: usize, e: usize, flavor: Flavor) -> Result<Vec<MultiGraph>, GraphError> {
    let mut out = Vec::new();
    for g in enumerate(v, e, flavor)? {
        if !has_odd_symmetry(&g, flavor.convention)? {
            out.push(g);
        }
    }
    Ok(out)
}

/// Dimension of the flavor's graph space with `v` vertices and `e` edges,
/// by exhaustive enumeration.
pub fn dim_oracle(v: usize, e: usize, flavor: Flavor) -> Result<usize, GraphError> {
    Ok(basis(v, e, flavor)?.len())
}

fn components_after_removing(g: &MultiGraph, removed: Option<usize>) -> usize {
    let n = g.v;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for &(a, b) in &g.edges {
        if Some(a) == removed || Some(b) == removed {
            continue;
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    (0..n).filter(|&x| Some(x) != removed).filter(|&x| find(&mut parent, x) == x).count()
}

/// Connected and nonempty.
pub fn is_connected(g: &MultiGraph) -> bool {
    g.v > 0 && components_after_removing(g, None) == 1
}

/// Connected, and removing any vertex with its edges leaves a connected graph.
pub fn is_one_vertex_irreducible(g: &MultiGraph) -> bool {
    is_connected(g) && (0..g.v).all(|x| g.v == 1 || components_after_removing(g, Some(x)) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1(v: usize, edges: &[(usize, usize)]) -> MultiGraph {
        MultiGraph::from_one_indexed(v, edges).unwrap()
    }

    fn k4() -> MultiGraph {
        g1(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
    }

    fn theta() -> MultiGraph {
        g1(2, &[(1, 2), (1, 2), (1, 2)])
    }

    #[test]
    fn test_canonicalize_examples() {
        let path = g1(3, &[(1, 3), (3, 2)]);
        let other = g1(3, &[(1, 2), (2, 3)]);
        assert_eq!(canonicalize(&path).unwrap(), canonicalize(&other).unwrap());
        let c = canonicalize(&path).unwrap();
        assert_eq!(canonicalize(&c).unwrap(), c);
        assert_eq!(canonicalize(&k4().relabel(&[2, 0, 3, 1])).unwrap(), canonicalize(&k4()).unwrap());
        let double = g1(2, &[(1, 2), (1, 2)]);
        assert_eq!(canonicalize(&double).unwrap(), double);
        assert_eq!(canonicalize(&MultiGraph::new(10, []).unwrap()), Err(GraphError::TooManyVertices(10)));
    }

    #[test]
    fn test_labeling_is_consistent() {
        let g = g1(5, &[(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 3), (1, 1)]);
        let (c, perm) = canonical_labeling(&g).unwrap();
        assert_eq!(g.relabel(&perm), c);
        assert!(is_canonical(&c));
    }

    #[test]
    fn test_enumerate_examples() {
        assert_eq!(enumerate(4, 6, Flavor::EVEN_STAR).unwrap(), vec![canonicalize(&k4()).unwrap()]);
        assert_eq!(enumerate(2, 3, Flavor::ODD).unwrap(), vec![theta()]);
        assert!(enumerate(1, 1, Flavor::EVEN).unwrap().is_empty());
        assert!(matches!(enumerate(9, 12, Flavor::ODD), Err(GraphError::TooLarge { .. })));
    }

    #[test]
    fn test_automorphism_examples() {
        let r = automorphisms(&theta()).unwrap();
        assert!(r.has_odd_even_convention);
        assert!(!r.has_odd_odd_convention);
        assert_eq!(r.group_order, 2);
        let r = automorphisms(&k4()).unwrap();
        assert_eq!(r.group_order, 24);
        assert!(!r.has_odd_even_convention);
        assert!(!r.has_odd_odd_convention);
        // the swap reverses the edge and is itself odd, so the signs cancel
        let r = automorphisms(&g1(2, &[(1, 2)])).unwrap();
        assert_eq!(r.group_order, 2);
        assert!(!r.has_odd_odd_convention);
        assert!(automorphisms(&g1(1, &[(1, 1)])).unwrap().has_odd_odd_convention);
    }

    #[test]
    fn test_dim_oracle_examples() {
        assert_eq!(dim_oracle(4, 6, Flavor::EVEN_STAR).unwrap(), 1);
        assert_eq!(dim_oracle(2, 3, Flavor::EVEN).unwrap(), 0);
        assert_eq!(dim_oracle(2, 3, Flavor::ODD).unwrap(), 1);
    }

    #[test]
    fn test_connectivity_examples() {
        assert!(is_connected(&theta()) && is_one_vertex_irreducible(&theta()));
        let bowtie = g1(5, &[(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 3)]);
        assert!(is_connected(&bowtie));
        assert!(!is_one_vertex_irreducible(&bowtie));
        let two_edges = g1(4, &[(1, 2), (3, 4)]);
        assert!(!is_connected(&two_edges));
        // a vertex whose only other neighbor carries tadpoles still separates
        let g = g1(3, &[(1, 2), (2, 3), (3, 3)]);
        assert!(!is_one_vertex_irreducible(&g));
    }

    #[test]
    fn test_dump_roundtrip() {
        assert_eq!(theta().dump(), "2; 1-2, 1-2, 1-2");
        assert_eq!(MultiGraph::parse_dump("2; 1-2, 1-2, 1-2").unwrap(), theta());
        assert_eq!(MultiGraph::new(0, []).unwrap().dump(), "0;");
        assert_eq!(MultiGraph::parse_dump("0;").unwrap(), MultiGraph::new(0, []).unwrap());
    }
}
