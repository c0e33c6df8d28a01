//! Fixed-loop-order graph complexes with the vertex-splitting differential.
//!
//! The differential splits one vertex `x` into `x` and a new vertex joined by
//! a new edge, distributing the half-edges at `x` over the two ends. Only
//! splittings that leave both ends at least trivalent are kept; on complexes
//! of at least trivalent graphs these are exactly the terms that survive.
//!
//! Orientations: under the even convention a graph is oriented by an ordering
//! of its edges, the reference ordering being the sorted edge list of the
//! canonical form. Under the odd convention it is oriented by an ordering of
//! its vertices together with a direction on every edge; the reference is the
//! canonical vertex order with every edge pointing from the smaller to the
//! larger label. A split graph lists the old edges in their old order (old
//! directions kept) followed by the new edge `x -> new`, and the new vertex
//! comes last.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::flavor::{Convention, Flavor};
use crate::graphs::{self, canonical_labeling, permutation_sign, GraphError, MultiGraph};

/// Largest loop order accepted by [`build_basis`].
pub const MAX_LOOP_ORDER: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("loop order {0} is beyond the supported range")]
    TooLarge(usize),
    #[error("flavor {0} is not supported here")]
    UnsupportedFlavor(Flavor),
    #[error("ranks disagree across primes: {0:?}")]
    RankDisagreementAcrossPrimes(Vec<usize>),
    #[error("degree shift needs n of the other parity for the {0} convention")]
    WrongParity(Convention),
    #[error("verification failed:\n{0}")]
    VerificationFailed(String),
}

/// Basis graphs of one loop order, grouped by vertex count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedBasis {
    pub flavor: Flavor,
    pub b: usize,
    pub connected: bool,
    pub one_vertex_irreducible: bool,
    /// `pieces[v]` for `v = 0..=2b`.
    pieces: Vec<Vec<MultiGraph>>,
    index: Vec<HashMap<MultiGraph, usize>>,
}

impl OrientedBasis {
    pub fn piece(&self, v: usize) -> &[MultiGraph] {
        self.pieces.get(v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn max_vertices(&self) -> usize {
        self.pieces.len() - 1
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.pieces.iter().map(Vec::len).collect()
    }

    pub fn position(&self, g: &MultiGraph) -> Option<usize> {
        self.index.get(g.vertex_count())?.get(g).copied()
    }

    fn admits(&self, g: &MultiGraph) -> bool {
        (!self.connected || graphs::is_connected(g)) && (!self.one_vertex_irreducible || graphs::is_one_vertex_irreducible(g))
    }
}

/// Basis of the loop-order-`b` complex: canonical graphs without odd
/// symmetry, optionally restricted to connected or one-vertex irreducible
/// graphs. One-vertex irreducible implies connected.
pub fn build_basis(flavor: Flavor, b: usize, connected: bool, one_vertex_irreducible: bool) -> Result<OrientedBasis, ComplexError> {
    if b > MAX_LOOP_ORDER {
        return Err(ComplexError::TooLarge(b));
    }
    if flavor.min_valence != 3 {
        return Err(ComplexError::UnsupportedFlavor(flavor));
    }
    let connected = connected || one_vertex_irreducible;
    let mut out = OrientedBasis {
        flavor,
        b,
        connected,
        one_vertex_irreducible,
        pieces: Vec::new(),
        index: Vec::new(),
    };
    for v in 0..=2 * b {
        let piece: Vec<MultiGraph> = graphs::basis(v, b + v, flavor)?.into_iter().filter(|g| out.admits(g)).collect();
        out.index.push(piece.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect());
        out.pieces.push(piece);
    }
    Ok(out)
}

/// Sparse integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    /// `(row, col, value)`, sorted, no zero values.
    pub entries: Vec<(usize, usize, i64)>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: Vec::new() }
    }

    fn from_columns(rows: usize, columns: Vec<Vec<(usize, i64)>>) -> Self {
        let cols = columns.len();
        let mut entries: Vec<(usize, usize, i64)> = columns
            .into_iter()
            .enumerate()
            .flat_map(|(c, col)| col.into_iter().map(move |(r, x)| (r, c, x)))
            .filter(|&(_, _, x)| x != 0)
            .collect();
        entries.sort_unstable();
        SparseMatrix { rows, cols, entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; self.cols]; self.rows];
        for &(r, c, x) in &self.entries {
            m[r][c] += x;
        }
        m
    }

    /// `self * other`, exactly.
    pub fn mul(&self, other: &SparseMatrix) -> Vec<Vec<i128>> {
        assert_eq!(self.cols, other.rows);
        let b = other.to_dense();
        let mut out = vec![vec![0i128; other.cols]; self.rows];
        for &(r, k, x) in &self.entries {
            for (c, &y) in b[k].iter().enumerate() {
                out[r][c] += x as i128 * y as i128;
            }
        }
        out
    }

    /// Header `rows cols nnz`, then one `row col value` line per entry
    /// (0-indexed).
    pub fn to_triplets(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows, self.cols, self.entries.len());
        for (r, c, x) in &self.entries {
            writeln!(out, "{r} {c} {x}").unwrap();
        }
        out
    }

    pub fn parse_triplets(text: &str) -> Option<SparseMatrix> {
        let mut lines = text.lines();
        let head: Vec<usize> = lines.next()?.split_whitespace().map(|x| x.parse().ok()).collect::<Option<_>>()?;
        let [rows, cols, nnz] = head.as_slice() else { return None };
        let mut entries = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let mut it = line.split_whitespace();
            entries.push((it.next()?.parse().ok()?, it.next()?.parse().ok()?, it.next()?.parse().ok()?));
        }
        (entries.len() == *nnz).then_some(SparseMatrix { rows: *rows, cols: *cols, entries })
    }
}

/// Sign relating an oriented labeled graph to the reference orientation of
/// its canonical form `canon`, where `perm` maps the labeled graph onto
/// `canon`. `edges` lists the edges in orientation order, each directed
/// tail to head.
fn orientation_change(convention: Convention, edges: &[(usize, usize)], perm: &[usize], canon: &MultiGraph) -> i32 {
    match convention {
        Convention::Even => {
            let mut taken = vec![false; canon.edge_count()];
            let target: Vec<usize> = edges
                .iter()
                .map(|&(a, b)| {
                    let e = (perm[a].min(perm[b]), perm[a].max(perm[b]));
                    let start = canon.edges().partition_point(|x| *x < e);
                    let i = (start..canon.edge_count()).find(|&i| !taken[i]).expect("edge present in canonical form");
                    taken[i] = true;
                    i
                })
                .collect();
            permutation_sign(&target)
        }
        Convention::Odd => {
            let mut sign = permutation_sign(perm);
            for &(a, b) in edges {
                if perm[a] > perm[b] {
                    sign = -sign;
                }
            }
            sign
        }
    }
}

/// The half-edges at `x` as `(edge index, end)` with end 0 the tail.
fn half_edges_at(edges: &[(usize, usize)], x: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        if a == x {
            out.push((i, 0));
        }
        if b == x {
            out.push((i, 1));
        }
    }
    out
}

/// All splittings of the oriented graph (`v` vertices, `edges` in
/// orientation order and direction), as `(canonical image, sign)` pairs
/// before any basis filtering.
pub fn split_images(convention: Convention, v: usize, edges: &[(usize, usize)]) -> Result<Vec<(MultiGraph, Vec<usize>, i32)>, GraphError> {
    let mut out = Vec::new();
    for x in 0..v {
        let halves = half_edges_at(edges, x);
        let h = halves.len();
        if h < 4 {
            continue;
        }
        // subsets B of the half-edges moving to the new vertex, never
        // containing the first half-edge, with 2 <= |B| <= h - 2
        for mask in 0u32..(1u32 << (h - 1)) {
            let moved = mask << 1;
            let k = moved.count_ones() as usize;
            if k < 2 || k > h - 2 {
                continue;
            }
            let mut new_edges = edges.to_vec();
            for (bit, &(i, end)) in halves.iter().enumerate() {
                if moved >> bit & 1 == 1 {
                    if end == 0 {
                        new_edges[i].0 = v;
                    } else {
                        new_edges[i].1 = v;
                    }
                }
            }
            new_edges.push((x, v));
            let g = MultiGraph::new(v + 1, new_edges.iter().copied())?;
            let (canon, perm) = canonical_labeling(&g)?;
            let sign = orientation_change(convention, &new_edges, &perm, &canon);
            out.push((canon, perm, sign));
        }
    }
    Ok(out)
}

/// Column of the differential for one oriented source graph, in the basis
/// of `target`.
fn column(convention: Convention, v: usize, edges: &[(usize, usize)], target: &OrientedBasis) -> Result<Vec<(usize, i64)>, GraphError> {
    let mut acc: HashMap<usize, i64> = HashMap::new();
    for (canon, _, sign) in split_images(convention, v, edges)? {
        if let Some(row) = target.position(&canon) {
            *acc.entry(row).or_insert(0) += sign as i64;
        }
    }
    let mut col: Vec<(usize, i64)> = acc.into_iter().filter(|&(_, x)| x != 0).collect();
    col.sort_unstable();
    Ok(col)
}

/// A complex of one loop order: its basis and the differentials
/// `D_v : V_v -> V_{v+1}`.
#[derive(Debug, Clone)]
pub struct ComplexSlice {
    pub basis: OrientedBasis,
    /// `matrices[v]` is `D_v`, for `v = 0..=2b`.
    pub matrices: Vec<SparseMatrix>,
}

impl ComplexSlice {
    /// `D_v`, the zero map outside the stored range.
    pub fn matrix(&self, v: usize) -> SparseMatrix {
        self.matrices
            .get(v)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zero(self.basis.piece(v + 1).len(), self.basis.piece(v).len()))
    }

    /// Whether `D_{v+1} D_v = 0` for every `v`.
    pub fn d_squared_is_zero(&self) -> bool {
        (0..self.matrices.len().saturating_sub(1)).all(|v| {
            let d1 = &self.matrices[v + 1];
            let d0 = &self.matrices[v];
            d1.mul(d0).iter().all(|row| row.iter().all(|&x| x == 0))
        })
    }

    /// Cohomological degree `(n - 1) e - n (v - 1)` of graphs with `v`
    /// vertices in this slice. `n` must be even for the even convention and
    /// odd for the odd convention.
    pub fn degree(&self, v: usize, n: i64) -> Result<i64, ComplexError> {
        degree_shift(self.basis.flavor.convention, v, self.basis.b + v, n)
    }
}

/// `(n - 1) e - n (v - 1)`; `n` must match the parity of the convention.
pub fn degree_shift(convention: Convention, v: usize, e: usize, n: i64) -> Result<i64, ComplexError> {
    let even_n = n.rem_euclid(2) == 0;
    if even_n != convention.is_even() {
        return Err(ComplexError::WrongParity(convention));
    }
    Ok((n - 1) * e as i64 - n * (v as i64 - 1))
}

/// Assembles the differential on a basis.
pub fn differential(basis: OrientedBasis) -> Result<ComplexSlice, ComplexError> {
    let convention = basis.flavor.convention;
    let top = basis.max_vertices();
    let matrices = (0..=top)
        .map(|v| {
            let sources = basis.piece(v);
            let rows = basis.piece(v + 1).len();
            let columns = sources
                .par_iter()
                .map(|g| column(convention, v, g.edges(), &basis))
                .collect::<Result<Vec<_>, GraphError>>()?;
            Ok(SparseMatrix::from_columns(rows, columns))
        })
        .collect::<Result<Vec<_>, ComplexError>>()?;
    Ok(ComplexSlice { basis, matrices })
}

/// The column of `D` for a basis graph computed from a relabeled copy,
/// converted back to the reference orientation of the basis graph.
pub fn column_from_relabeled(slice: &ComplexSlice, v: usize, index: usize, perm: &[usize]) -> Result<Vec<(usize, i64)>, ComplexError> {
    let convention = slice.basis.flavor.convention;
    let g = &slice.basis.piece(v)[index];
    let relabeled = g.relabel(perm);
    // orientation of `relabeled` (its sorted edges, directed low to high)
    // compared with the reference orientation of `g`
    let (canon, back) = canonical_labeling(&relabeled)?;
    debug_assert_eq!(&canon, g);
    let rel_edges: Vec<(usize, usize)> = relabeled.edges().to_vec();
    let sign = orientation_change(convention, &rel_edges, &back, &canon) as i64;
    let col = column(convention, v, &rel_edges, &slice.basis)?;
    Ok(col.into_iter().map(|(r, x)| (r, sign * x)).collect())
}

const RANK_PRIMES: [u64; 2] = [4611686018427387847, 4611686018427387817];

fn rank_mod_p(m: &SparseMatrix, p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = m
        .to_dense()
        .into_iter()
        .map(|row| row.into_iter().map(|x| x.rem_euclid(p as i64) as u64).collect())
        .collect();
    let mulmod = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let inv = |x: u64| {
        let (mut r0, mut r1, mut s0, mut s1) = (p as i128, x as i128, 0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        s0.rem_euclid(p as i128) as u64
    };
    let (rows, cols) = (m.rows, m.cols);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, pivot);
        let pinv = inv(a[rank][c]);
        for r in rank + 1..rows {
            if a[r][c] != 0 {
                let f = mulmod(a[r][c], pinv);
                for k in c..cols {
                    let sub = mulmod(f, a[rank][k]);
                    a[r][k] = (a[r][k] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Exact rank by fraction-free (Bareiss) elimination.
pub fn rank_exact(m: &SparseMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = m.to_dense().into_iter().map(|row| row.into_iter().map(BigInt::from).collect()).collect();
    let (rows, cols) = (m.rows, m.cols);
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for c in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, pivot);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                let x = &a[rank][c] * &a[r][k] - &a[r][c] * &a[rank][k];
                a[r][k] = x / &prev;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[rank][c].abs();
        rank += 1;
    }
    rank
}

/// Ranks modulo two large primes; an error if they disagree.
pub fn rank_modular(m: &SparseMatrix) -> Result<usize, ComplexError> {
    let ranks: Vec<usize> = RANK_PRIMES.iter().map(|&p| rank_mod_p(m, p)).collect();
    if ranks.windows(2).all(|w| w[0] == w[1]) {
        Ok(ranks[0])
    } else {
        Err(ComplexError::RankDisagreementAcrossPrimes(ranks))
    }
}

/// Modular rank, falling back to exact elimination on disagreement.
pub fn rank(m: &SparseMatrix) -> usize {
    rank_modular(m).unwrap_or_else(|_| rank_exact(m))
}

/// `dim H^v = dim V_v - rank D_v - rank D_{v-1}` for `v = 0..=2b`.
pub fn cohomology_dims(slice: &ComplexSlice) -> Vec<usize> {
    let ranks: Vec<usize> = slice.matrices.iter().map(rank).collect();
    slice
        .basis
        .sizes()
        .iter()
        .enumerate()
        .map(|(v, &dim)| dim - ranks[v] - if v > 0 { ranks[v - 1] } else { 0 })
        .collect()
}

/// Alternating sum `sum_v (-1)^v x_v`.
pub fn alternating_sum(x: &[usize]) -> i64 {
    x.iter().enumerate().map(|(v, &d)| if v % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
}

fn format_diff(names: [&str; 2], a: &[usize], b: &[usize]) -> String {
    let mut out = format!("{:>3} {:>8} {:>8}\n", "v", names[0], names[1]);
    for v in 0..a.len().max(b.len()) {
        let x = a.get(v).copied().unwrap_or(0);
        let y = b.get(v).copied().unwrap_or(0);
        writeln!(out, "{v:>3} {x:>8} {y:>8}{}", if x != y { "  <" } else { "" }).unwrap();
    }
    out
}

/// Cohomology of two complexes of one loop order, per vertex count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonReport {
    pub b: usize,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// Cohomology of the connected odd complex against the connected odd*
/// complex: they agree except for the theta class at `b = 1`, `v = 2`.
pub fn verify_multi_edge_removal(b: usize) -> Result<ComparisonReport, ComplexError> {
    let with_multi = cohomology_dims(&differential(build_basis(Flavor::ODD, b, true, false)?)?);
    let without = cohomology_dims(&differential(build_basis(Flavor::ODD_STAR, b, true, false)?)?);
    let mut expected = without.clone();
    if b == 1 {
        expected[2] += 1;
    }
    if with_multi != expected {
        return Err(ComplexError::VerificationFailed(format_diff(["odd", "odd*+Θ"], &with_multi, &expected)));
    }
    Ok(ComparisonReport {
        b,
        left: with_multi,
        right: without,
    })
}

/// Cohomology of the connected complex against its one-vertex irreducible
/// subcomplex. Only tadpole-free flavors: with tadpoles, splitting a vertex
/// carrying a tadpole can cut it off behind a separating vertex, so the
/// one-vertex irreducible graphs do not span a subcomplex.
pub fn verify_coh2(b: usize, flavor: Flavor) -> Result<ComparisonReport, ComplexError> {
    if flavor.tadpoles {
        return Err(ComplexError::UnsupportedFlavor(flavor));
    }
    let all = cohomology_dims(&differential(build_basis(flavor, b, true, false)?)?);
    let irreducible = cohomology_dims(&differential(build_basis(flavor, b, true, true)?)?);
    if all != irreducible {
        return Err(ComplexError::VerificationFailed(format_diff(["conn", "1vi"], &all, &irreducible)));
    }
    Ok(ComparisonReport {
        b,
        left: all,
        right: irreducible,
    })
}
