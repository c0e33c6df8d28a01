//! Dimension tables, Euler characteristics, and the inversions from all graphs
//! to connected graphs.
//!
//! A graph with `v` vertices and `e` edges has loop order `b = e - v`. Both
//! `b` and `v` are additive over connected components, so the all-graph data
//! is a product over connected pieces indexed by `(b, v)`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::flavor::{Convention, Flavor};
use crate::series::Truncation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EulerError {
    #[error("window {v_max}x{e_max} does not cover loop order {b}")]
    WindowTooSmall { b: usize, v_max: usize, e_max: usize },
    #[error("negative connected dimension {value} at v={v}, e={e}")]
    NegativeConnectedDim { v: usize, e: usize, value: BigInt },
    #[error("table has a nonzero entry with fewer edges than vertices at v={v}, e={e}")]
    NegativeLoopOrder { v: usize, e: usize },
    #[error("expected a table of all graphs")]
    ExpectedAllGraphs,
    #[error("expected a table of connected graphs")]
    ExpectedConnected,
    #[error("value {0} does not fit the output format")]
    Overflow(BigInt),
}

/// `dims[v][e]` for one flavor on a rectangular window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimTable {
    pub flavor: Flavor,
    pub connected: bool,
    trunc: Truncation,
    dims: Vec<Vec<BigInt>>,
}

impl DimTable {
    pub fn zeros(flavor: Flavor, connected: bool, trunc: Truncation) -> Self {
        DimTable {
            flavor,
            connected,
            trunc,
            dims: vec![vec![BigInt::zero(); trunc.e_max + 1]; trunc.v_max + 1],
        }
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn v_max(&self) -> usize {
        self.trunc.v_max
    }

    pub fn e_max(&self) -> usize {
        self.trunc.e_max
    }

    pub fn get(&self, v: usize, e: usize) -> &BigInt {
        &self.dims[v][e]
    }

    pub fn set(&mut self, v: usize, e: usize, value: BigInt) {
        self.dims[v][e] = value;
    }

    /// Largest `b` with `2b <= v_max` and `3b <= e_max`.
    pub fn max_loop_order(&self) -> usize {
        (self.trunc.v_max / 2).min(self.trunc.e_max / 3)
    }

    pub fn restrict(&self, trunc: Truncation) -> DimTable {
        assert!(trunc.v_max <= self.trunc.v_max && trunc.e_max <= self.trunc.e_max);
        let mut out = DimTable::zeros(self.flavor, self.connected, trunc);
        for v in 0..=trunc.v_max {
            for e in 0..=trunc.e_max {
                out.dims[v][e] = self.dims[v][e].clone();
            }
        }
        out
    }

    /// Cells `(v, e, dim)` in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.dims
            .iter()
            .enumerate()
            .flat_map(|(v, row)| row.iter().enumerate().map(move |(e, d)| (v, e, d)))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("flavor,connected,v,e,dim\n");
        for (v, e, d) in self.cells() {
            writeln!(out, "{},{},{v},{e},{d}", self.flavor, self.connected).unwrap();
        }
        out
    }

    pub fn rows(&self) -> Result<Vec<DimRow>, EulerError> {
        self.cells()
            .map(|(v, e, d)| {
                Ok(DimRow {
                    flavor: self.flavor.to_string(),
                    connected: self.connected,
                    v,
                    e,
                    dim: d.to_i128().ok_or_else(|| EulerError::Overflow(d.clone()))?,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimRow {
    pub flavor: String,
    pub connected: bool,
    pub v: usize,
    pub e: usize,
    pub dim: i128,
}

/// `chi[b]` for `b = 1..=max_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerTable {
    pub flavor: Flavor,
    pub connected: bool,
    chi: Vec<BigInt>,
}

impl EulerTable {
    /// Builds a table from `chi_1, chi_2, ...`.
    pub fn new(flavor: Flavor, connected: bool, chi: Vec<BigInt>) -> Self {
        EulerTable { flavor, connected, chi }
    }

    pub fn max_b(&self) -> usize {
        self.chi.len()
    }

    pub fn get(&self, b: usize) -> &BigInt {
        assert!(b >= 1, "loop orders start at 1");
        &self.chi[b - 1]
    }

    pub fn values(&self) -> &[BigInt] {
        &self.chi
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("flavor,connected,b,chi\n");
        for (i, c) in self.chi.iter().enumerate() {
            writeln!(out, "{},{},{},{c}", self.flavor, self.connected, i + 1).unwrap();
        }
        out
    }

    pub fn rows(&self) -> Result<Vec<EulerRow>, EulerError> {
        self.chi
            .iter()
            .enumerate()
            .map(|(i, c)| {
                Ok(EulerRow {
                    flavor: self.flavor.to_string(),
                    connected: self.connected,
                    b: i + 1,
                    chi: c.to_i128().ok_or_else(|| EulerError::Overflow(c.clone()))?,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EulerRow {
    pub flavor: String,
    pub connected: bool,
    pub b: usize,
    pub chi: i128,
}

fn sign(negative: bool) -> BigInt {
    if negative {
        -BigInt::one()
    } else {
        BigInt::one()
    }
}

/// `chi_b = sum_v (-1)^v dims[v][b+v]` (odd) or `sum_v (-1)^(b+v) dims[v][b+v]`
/// (even), for `b = 1..=max_b`.
pub fn euler_from_dims(t: &DimTable, max_b: usize) -> Result<EulerTable, EulerError> {
    if 2 * max_b > t.v_max() || 3 * max_b > t.e_max() {
        return Err(EulerError::WindowTooSmall {
            b: max_b,
            v_max: t.v_max(),
            e_max: t.e_max(),
        });
    }
    let even = t.flavor.convention.is_even();
    let chi = (1..=max_b)
        .map(|b| {
            (0..=2 * b)
                .map(|v| t.get(v, b + v) * sign((v + if even { b } else { 0 }) % 2 == 1))
                .sum()
        })
        .collect();
    Ok(EulerTable::new(t.flavor, t.connected, chi))
}

/// `n (n-1) ... (n-k+1) / k!` for any integer `n`.
pub fn binomial_generalized(n: &BigInt, k: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= n - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Nonconstant coefficients `(j, c_j)` of `(1 - eps X)^(-eps n)` for
/// `j <= max_j`, where `eps = -1` if `fermionic` and `+1` otherwise.
fn component_factor(n: &BigInt, fermionic: bool, max_j: usize) -> Vec<(usize, BigInt)> {
    let upper = if fermionic { n.clone() } else { -n.clone() };
    (1..=max_j)
        .map(|j| {
            let c = binomial_generalized(&upper, j);
            let s = if fermionic { BigInt::one() } else { sign(j % 2 == 1) };
            (j, c * s)
        })
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

/// Multiplies the univariate polynomial `poly` by `1 + sum_j c_j x^(j step)`.
fn mul_sparse_univariate(poly: &mut [BigInt], step: usize, factor: &[(usize, BigInt)]) {
    for n in (0..poly.len()).rev() {
        let mut add = BigInt::zero();
        for (j, c) in factor {
            let k = j * step;
            if k > n {
                break;
            }
            add += c * &poly[n - k];
        }
        poly[n] += add;
    }
}

/// The connected Euler characteristics. The all-graph sequence is
/// `1 + sum_b chi_b x^b = prod_a (1 - x^a)^(-chi~_a)`.
pub fn connected_euler(chi: &EulerTable) -> Result<EulerTable, EulerError> {
    if chi.connected {
        return Err(EulerError::ExpectedAllGraphs);
    }
    let max_b = chi.max_b();
    let mut prod = vec![BigInt::zero(); max_b + 1];
    prod[0] = BigInt::one();
    let mut out = Vec::with_capacity(max_b);
    for b in 1..=max_b {
        let c = chi.get(b) - &prod[b];
        mul_sparse_univariate(&mut prod, b, &component_factor(&c, false, max_b / b));
        out.push(c);
    }
    Ok(EulerTable::new(chi.flavor, true, out))
}

/// Inverse of [`connected_euler`].
pub fn compose_euler(chi: &EulerTable) -> Result<EulerTable, EulerError> {
    if !chi.connected {
        return Err(EulerError::ExpectedConnected);
    }
    let max_b = chi.max_b();
    let mut prod = vec![BigInt::zero(); max_b + 1];
    prod[0] = BigInt::one();
    for b in 1..=max_b {
        mul_sparse_univariate(&mut prod, b, &component_factor(chi.get(b), false, max_b / b));
    }
    Ok(EulerTable::new(chi.flavor, false, prod[1..].to_vec()))
}

/// Cells in `(b, v)` coordinates: `b + v <= e_max`, `v <= v_max`.
struct LoopGrid {
    v_max: usize,
    e_max: usize,
    cells: Vec<Vec<BigInt>>,
}

impl LoopGrid {
    fn from_table(t: &DimTable) -> Result<Self, EulerError> {
        let (v_max, e_max) = (t.v_max(), t.e_max());
        let mut cells = vec![vec![BigInt::zero(); v_max + 1]; e_max + 1];
        for (v, e, d) in t.cells() {
            if e < v {
                if !d.is_zero() {
                    return Err(EulerError::NegativeLoopOrder { v, e });
                }
                continue;
            }
            cells[e - v][v] = d.clone();
        }
        Ok(LoopGrid { v_max, e_max, cells })
    }

    fn in_window(&self, b: usize, v: usize) -> bool {
        v <= self.v_max && b + v <= self.e_max
    }

    fn into_table(self, flavor: Flavor, connected: bool) -> DimTable {
        let mut t = DimTable::zeros(flavor, connected, Truncation::new(self.v_max, self.e_max));
        for (b, row) in self.cells.into_iter().enumerate() {
            for (v, d) in row.into_iter().enumerate() {
                if b + v <= self.e_max && v <= self.v_max {
                    t.set(v, b + v, d);
                }
            }
        }
        t
    }

    /// Multiplies by the factor of one connected piece at `(b0, v0)`.
    fn mul_component(&mut self, b0: usize, v0: usize, n: &BigInt, fermionic: bool) {
        let max_j = if b0 == 0 { self.v_max / v0 } else { self.e_max / b0 };
        let factor = component_factor(n, fermionic, max_j);
        for b in (0..=self.e_max).rev() {
            for v in (0..=self.v_max).rev() {
                if !self.in_window(b, v) {
                    continue;
                }
                let mut add = BigInt::zero();
                for (j, c) in &factor {
                    let (db, dv) = (j * b0, j * v0);
                    if db > b || dv > v {
                        break;
                    }
                    add += c * &self.cells[b - db][v - dv];
                }
                self.cells[b][v] += add;
            }
        }
    }
}

/// Whether exchanging two copies of a connected piece with `b` loops and `v`
/// vertices acts by `-1`: vertex-count parity for the odd convention,
/// edge-count parity for the even one.
fn exchange_is_odd(convention: Convention, b: usize, v: usize) -> bool {
    match convention {
        Convention::Odd => v % 2 == 1,
        Convention::Even => (b + v) % 2 == 1,
    }
}

/// Connected dimensions from all-graph dimensions.
pub fn connected_dims(t: &DimTable) -> Result<DimTable, EulerError> {
    if t.connected {
        return Err(EulerError::ExpectedAllGraphs);
    }
    let input = LoopGrid::from_table(t)?;
    let (v_max, e_max) = (input.v_max, input.e_max);
    let mut prod = LoopGrid {
        v_max,
        e_max,
        cells: vec![vec![BigInt::zero(); v_max + 1]; e_max + 1],
    };
    prod.cells[0][0] = BigInt::one();
    let mut out = LoopGrid {
        v_max,
        e_max,
        cells: vec![vec![BigInt::zero(); v_max + 1]; e_max + 1],
    };
    for b in 0..=e_max {
        for v in 0..=v_max {
            if (b, v) == (0, 0) || !input.in_window(b, v) {
                continue;
            }
            let n = &input.cells[b][v] - &prod.cells[b][v];
            if n.is_negative() {
                return Err(EulerError::NegativeConnectedDim { v, e: b + v, value: n });
            }
            if !n.is_zero() {
                prod.mul_component(b, v, &n, exchange_is_odd(t.flavor.convention, b, v));
            }
            out.cells[b][v] = n;
        }
    }
    Ok(out.into_table(t.flavor, true))
}

/// All-graph dimensions from connected dimensions (the empty graph included).
pub fn compose_dims(t: &DimTable) -> Result<DimTable, EulerError> {
    if !t.connected {
        return Err(EulerError::ExpectedConnected);
    }
    let input = LoopGrid::from_table(t)?;
    let mut prod = LoopGrid {
        v_max: input.v_max,
        e_max: input.e_max,
        cells: vec![vec![BigInt::zero(); input.v_max + 1]; input.e_max + 1],
    };
    prod.cells[0][0] = BigInt::one();
    for b in 0..=input.e_max {
        for v in 0..=input.v_max {
            if (b, v) == (0, 0) || !input.in_window(b, v) {
                continue;
            }
            let n = &input.cells[b][v];
            if !n.is_zero() {
                prod.mul_component(b, v, n, exchange_is_odd(t.flavor.convention, b, v));
            }
        }
    }
    Ok(prod.into_table(t.flavor, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn test_binomial_generalized() {
        assert_eq!(binomial_generalized(&BigInt::from(-1), 2), BigInt::from(1));
        assert_eq!(binomial_generalized(&BigInt::from(-3), 2), BigInt::from(6));
        assert_eq!(binomial_generalized(&BigInt::from(5), 0), BigInt::from(1));
        assert_eq!(binomial_generalized(&BigInt::from(5), 7), BigInt::from(0));
        assert_eq!(binomial_generalized(&BigInt::from(-2), 3), BigInt::from(-4));
    }

    #[test]
    fn test_connected_euler_examples() {
        let t = EulerTable::new(Flavor::ODD, false, bi(&[1, 2]));
        assert_eq!(connected_euler(&t).unwrap().values(), bi(&[1, 1]).as_slice());
        let z = EulerTable::new(Flavor::EVEN, false, bi(&[0, 0, 0, 0]));
        assert_eq!(connected_euler(&z).unwrap().values(), bi(&[0, 0, 0, 0]).as_slice());
        let c = EulerTable::new(Flavor::ODD, true, bi(&[1, 1, 1, 2, 1, 2]));
        let all = compose_euler(&c).unwrap();
        assert_eq!(connected_euler(&all).unwrap(), c);
    }

    #[test]
    fn test_euler_window() {
        let t = DimTable::zeros(Flavor::ODD, false, Truncation::for_loop_order(3));
        assert!(euler_from_dims(&t, 4).is_err());
        assert_eq!(euler_from_dims(&t, 3).unwrap().values(), bi(&[0, 0, 0]).as_slice());
    }

    #[test]
    fn test_two_thetas() {
        // one connected theta at (v, e) = (2, 3); two of them at (4, 6)
        let trunc = Truncation::for_loop_order(2);
        let mut c = DimTable::zeros(Flavor::ODD, true, trunc);
        c.set(2, 3, BigInt::one());
        let all = compose_dims(&c).unwrap();
        assert_eq!(*all.get(0, 0), BigInt::one());
        assert_eq!(*all.get(4, 6), BigInt::one());
        assert_eq!(connected_dims(&all).unwrap(), c);
        // two copies of an odd-vertex piece cancel
        let mut c = DimTable::zeros(Flavor::ODD, true, Truncation::new(2, 4));
        c.set(1, 2, BigInt::one());
        assert!(compose_dims(&c).unwrap().get(2, 4).is_zero());
    }

    #[test]
    fn test_negative_connected_dim() {
        let mut t = DimTable::zeros(Flavor::ODD, false, Truncation::for_loop_order(2));
        t.set(0, 0, BigInt::one());
        t.set(2, 3, BigInt::one());
        assert!(matches!(connected_dims(&t), Err(EulerError::NegativeConnectedDim { .. })));
    }

    #[test]
    fn test_zero_input() {
        let mut t = DimTable::zeros(Flavor::EVEN_STAR, false, Truncation::for_loop_order(3));
        t.set(0, 0, BigInt::one());
        let c = connected_dims(&t).unwrap();
        assert!(c.cells().all(|(_, _, d)| d.is_zero()));
    }
}
