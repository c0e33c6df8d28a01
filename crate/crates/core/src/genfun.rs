//! Generating functions for the dimensions of graph spaces.
//!
//! Every standard flavor has a closed form
//!
//! ```text
//! P(s, t) = G(s, t) * sum_j scalar(j) s^|j| A(j) B(j) C(j)
//! ```
//!
//! summed over partitions `j` (cycle types of vertex permutations). `A`
//! collects per-part factors raised to `j_a`, `B` per-cycle-length factors
//! raised to `j_m / 2` (odd `m`) or `j_m` (even `m`), and `C` one factor per
//! ordered pair of parts raised to `gcd(a, b) j_a j_b / 2`. All factors are
//! products of q-Pochhammer symbols and binomials in signed monomials.
//!
//! [`partition_term`] evaluates one summand literally, with square roots and
//! integer powers. [`Evaluator`] computes the same sum by adding logarithms of
//! the factors and taking one exponential per partition, which is much
//! cheaper; the two routes are compared in tests.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::coeff::{crt_lift, rational_to_integer, CoeffError, PrimeBasis, PrimeField, Rationals, Residues, Ring};
use crate::euler::DimTable;
use crate::flavor::{Convention, Flavor};
use crate::series::{degree_inverses, BiSeries, SeriesError, Truncation};

#[derive(Debug, Error)]
pub enum GenFunError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("no closed-form generating function for flavor {0}")]
    UnsupportedFlavor(Flavor),
    #[error("coefficient at v={v}, e={e} is not an integer: {value}")]
    NonIntegral { v: usize, e: usize, value: String },
    #[error("coefficient at v={v}, e={e} is negative: {value}")]
    NegativeDimension { v: usize, e: usize, value: BigInt },
    #[error("prime basis of {have} bits cannot hold dimensions up to {needed} bits")]
    PrimeBasisTooSmall { needed: u64, have: u64 },
    #[error("cache i/o: {0}")]
    Cache(#[from] io::Error),
}

/// A partition stored as multiplicities: `mult[a - 1] = j_a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    mult: Vec<u32>,
}

impl Partition {
    pub fn from_multiplicities(mut mult: Vec<u32>) -> Self {
        while mult.last() == Some(&0) {
            mult.pop();
        }
        Partition { mult }
    }

    pub fn from_parts(parts: &[usize]) -> Self {
        let mut mult = vec![0u32; parts.iter().copied().max().unwrap_or(0)];
        for &p in parts {
            assert!(p > 0, "parts are positive");
            mult[p - 1] += 1;
        }
        Partition::from_multiplicities(mult)
    }

    /// `j_a`, zero beyond the largest part.
    pub fn multiplicity(&self, a: usize) -> u32 {
        if a == 0 {
            0
        } else {
            self.mult.get(a - 1).copied().unwrap_or(0)
        }
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.mult
    }

    pub fn weight(&self) -> usize {
        self.parts().map(|(a, j)| a * j as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.is_empty()
    }

    /// `(a, j_a)` for every part size with `j_a > 0`, ascending in `a`.
    pub fn parts(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.mult
            .iter()
            .enumerate()
            .filter(|(_, &j)| j > 0)
            .map(|(i, &j)| (i + 1, j))
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for (a, j) in self.parts().collect::<Vec<_>>().into_iter().rev() {
            parts.extend(std::iter::repeat(a.to_string()).take(j as usize));
        }
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Every partition of weight at most `weight_max`, by weight, then in
/// lexicographic order of the ascending list of parts.
pub fn enumerate_partitions(weight_max: usize) -> Vec<Partition> {
    fn rec(remaining: usize, min_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition::from_parts(current));
            return;
        }
        for p in min_part..=remaining {
            if remaining - p != 0 && remaining - p < p {
                continue;
            }
            current.push(p);
            rec(remaining - p, p, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    for w in 0..=weight_max {
        rec(w, 1, &mut Vec::new(), &mut out);
    }
    out
}

/// `(-1)^neg s^v t^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Mono {
    neg: bool,
    v: usize,
    e: usize,
}

impl Mono {
    const fn new(neg: bool, v: usize, e: usize) -> Self {
        Mono { neg, v, e }
    }

    /// `(sign * s^v t^e)^k` where the sign is applied before raising.
    fn signed_pow(neg: bool, v: usize, e: usize, k: usize) -> Self {
        Mono::new(neg && k % 2 == 1, v * k, e * k)
    }

    fn pow(self, k: usize) -> Self {
        Mono::new(self.neg && k % 2 == 1, self.v * k, self.e * k)
    }

    fn mul(self, o: Mono) -> Self {
        Mono::new(self.neg != o.neg, self.v + o.v, self.e + o.e)
    }

    fn negate(self) -> Self {
        Mono::new(!self.neg, self.v, self.e)
    }

    fn fits(self, t: Truncation) -> bool {
        t.contains(self.v, self.e)
    }

    fn series<R: Ring>(self, ring: &R, t: Truncation) -> BiSeries<R> {
        BiSeries::signed_term(ring, t, self.neg, self.v, self.e)
    }
}

/// One multiplicative piece of a factor.
#[derive(Debug, Clone, Copy)]
enum Piece {
    /// `<a, q>^power`
    Pochhammer { a: Mono, q: Mono, power: i64 },
    /// `(1 - m)^power`
    OneMinus { m: Mono, power: i64 },
}

type Factor = Vec<Piece>;

fn qp(a: Mono, q: Mono, power: i64) -> Piece {
    Piece::Pochhammer { a, q, power }
}

fn one_minus(m: Mono, power: i64) -> Piece {
    Piece::OneMinus { m, power }
}

fn st(k: usize) -> Mono {
    Mono::new(false, k, k)
}

fn check_flavor(flavor: Flavor) -> Result<(), GenFunError> {
    if flavor.is_standard() {
        Ok(())
    } else {
        Err(GenFunError::UnsupportedFlavor(flavor))
    }
}

/// Factor raised to `j_a` for each part size `a`.
fn part_factor(flavor: Flavor, a: usize) -> Factor {
    let x = Mono::signed_pow(true, 1, 1, a);
    let mut f = vec![qp(x, x, -1)];
    if flavor == Flavor::ODD_STAR {
        f.push(one_minus(Mono::signed_pow(true, 1, 2, a), 1));
    }
    f
}

/// Factor for cycle length `m`, raised to `j_m / 2` (odd `m`) or `j_m`
/// (even `m`). With `a = m` or `a = m / 2` both cases share one shape.
fn cycle_factor(flavor: Flavor, m: usize) -> Factor {
    let odd_m = m % 2 == 1;
    let a = if odd_m { m } else { m / 2 };
    let q = st(2 * a);
    let t_pow = |neg: bool, k: usize| Mono::signed_pow(neg, 0, 1, k);
    match flavor {
        Flavor::ODD | Flavor::ODD_STAR => {
            let mut f = vec![qp(t_pow(false, a), q, 1), qp(Mono::signed_pow(true, 1, 0, a).mul(t_pow(false, 2 * a)), q, -1)];
            if flavor == Flavor::ODD_STAR {
                // 1 - t^{2m} for odd m, 1 + t^{2a} for even m
                let m2 = t_pow(false, 2 * a);
                f.push(one_minus(if odd_m { m2 } else { m2.negate() }, -1));
            }
            f
        }
        Flavor::EVEN => vec![qp(t_pow(true, a), q, 1), qp(Mono::new(false, a, 2 * a), q, -1)],
        Flavor::EVEN_STAR => {
            let lead = Mono::new(false, 2 * a, 0).mul(t_pow(true, 3 * a));
            // 1 + t^m for odd m, 1 + (-t)^a for even m
            let tail = if odd_m { t_pow(false, a).negate() } else { t_pow(true, a).negate() };
            vec![qp(lead, q, 1), qp(Mono::new(false, a, 2 * a), q, -1), one_minus(tail, -1)]
        }
        _ => unreachable!("checked by check_flavor"),
    }
}

/// Factor for an ordered pair of parts with least common multiple `l`,
/// raised to `gcd j_a j_b / 2`.
fn pair_factor(flavor: Flavor, l: usize) -> Factor {
    let q = Mono::signed_pow(true, 1, 1, l);
    match flavor.convention {
        Convention::Odd => {
            let mut f = vec![qp(Mono::new(false, 0, l), q, -1)];
            if flavor == Flavor::ODD_STAR {
                f.push(one_minus(Mono::new(false, 0, 2 * l), 1));
            }
            f
        }
        Convention::Even => vec![qp(Mono::signed_pow(true, 0, 1, l), q, 1)],
    }
}

/// The global prefactor in front of the partition sum.
fn prefactor(flavor: Flavor) -> Factor {
    let q = st(2);
    match flavor {
        Flavor::ODD => vec![qp(Mono::new(true, 1, 0), q, -1), qp(st(2), q, -1)],
        Flavor::ODD_STAR => vec![qp(Mono::new(true, 1, 0), q, -1), qp(st(4), q, -1)],
        Flavor::EVEN => vec![qp(Mono::new(false, 1, 0), q, 1), qp(Mono::new(true, 1, 1), q, -1)],
        Flavor::EVEN_STAR => vec![qp(Mono::new(false, 1, 0), q, 1), qp(Mono::new(true, 3, 3), q, -1)],
        _ => unreachable!("checked by check_flavor"),
    }
}

/// Expands a factor with series arithmetic.
fn factor_series<R: Ring>(ring: &R, t: Truncation, factor: &Factor) -> Result<BiSeries<R>, SeriesError> {
    let one = BiSeries::one(ring, t);
    let mut out = one.clone();
    for piece in factor {
        let (base, power) = match *piece {
            Piece::Pochhammer { a, q, power } => (BiSeries::qpochhammer(&a.series(ring, t), &q.series(ring, t))?, power),
            Piece::OneMinus { m, power } => (one.sub(&m.series(ring, t))?, power),
        };
        out = out.mul(&base.pow(power)?)?;
    }
    Ok(out)
}

/// Adds `c * log(1 - m)` to `acc`.
fn add_log_one_minus<R: Ring>(acc: &mut BiSeries<R>, m: Mono, c: &R::Elem, inverses: &[R::Elem]) {
    let ring = acc.ring().clone();
    let t = acc.truncation();
    assert!(m.v + m.e > 0, "log(1 - m) needs a nonconstant monomial");
    let minus_c = ring.neg(c);
    let mut n = 1;
    loop {
        let mn = m.pow(n);
        if !mn.fits(t) {
            break;
        }
        // log(1 - m) = -sum m^n / n
        let mut term = ring.mul(&minus_c, &inverses[n]);
        if mn.neg {
            term = ring.neg(&term);
        }
        acc.add_term(mn.v, mn.e, &term);
        n += 1;
    }
}

/// Logarithm of a factor, built directly from `log(1 - m) = -sum m^n / n`.
fn factor_log<R: Ring>(ring: &R, t: Truncation, factor: &Factor, inverses: &[R::Elem]) -> BiSeries<R> {
    let mut acc = BiSeries::zero(ring, t);
    for piece in factor {
        match *piece {
            Piece::Pochhammer { a, q, power } => {
                let c = ring.from_i64(power);
                let mut x = a;
                while x.fits(t) {
                    add_log_one_minus(&mut acc, x, &c, inverses);
                    x = x.mul(q);
                }
            }
            Piece::OneMinus { m, power } => add_log_one_minus(&mut acc, m, &ring.from_i64(power), inverses),
        }
    }
    acc
}

/// `prod_a sign / (j_a! a^j_a)`, with sign `(-1)^{sum (a+1) j_a}` for the odd
/// convention.
fn partition_scalar<R: Ring>(ring: &R, j: &Partition, convention: Convention) -> Result<R::Elem, CoeffError> {
    let mut den = ring.one();
    let mut negative = false;
    for (a, ja) in j.parts() {
        for i in 1..=ja {
            den = ring.mul(&den, &ring.from_i64(i as i64 * a as i64));
        }
        if convention == Convention::Odd && ((a + 1) * ja as usize) % 2 == 1 {
            negative = !negative;
        }
    }
    let s = ring.inv(&den)?;
    Ok(if negative { ring.neg(&s) } else { s })
}

/// `sum over ordered pairs (a, b) with lcm(a, b) = l of gcd(a, b) j_a j_b`,
/// keyed by `l`. Each entry is twice the exponent of the pair factor.
fn pair_exponents(j: &Partition) -> BTreeMap<usize, u64> {
    let parts: Vec<(usize, u32)> = j.parts().collect();
    let mut out = BTreeMap::new();
    for &(a, ja) in &parts {
        for &(b, jb) in &parts {
            let g = a.gcd(&b);
            *out.entry(a / g * b).or_insert(0) += (g as u64) * ja as u64 * jb as u64;
        }
    }
    out
}

/// One summand of the partition sum, evaluated with square roots and powers
/// (the global prefactor is not included).
pub fn partition_term<R: Ring>(j: &Partition, flavor: Flavor, window: Truncation, ring: &R) -> Result<BiSeries<R>, GenFunError> {
    check_flavor(flavor)?;
    let w = j.weight();
    if w > window.v_max {
        return Ok(BiSeries::zero(ring, window));
    }
    let scalar = partition_scalar(ring, j, flavor.convention)?;
    let mut term = BiSeries::monomial(ring, window, scalar, w, 0)?;
    for (a, ja) in j.parts() {
        term = term.mul(&factor_series(ring, window, &part_factor(flavor, a))?.pow(ja as i64)?)?;
        let half_units = if a % 2 == 1 { ja as i64 } else { 2 * ja as i64 };
        term = term.mul(&factor_series(ring, window, &cycle_factor(flavor, a))?.pow_half_integer(half_units)?)?;
    }
    let parts: Vec<(usize, u32)> = j.parts().collect();
    for &(a, ja) in &parts {
        for &(b, jb) in &parts {
            let g = a.gcd(&b);
            let k = (g as i64) * ja as i64 * jb as i64;
            term = term.mul(&factor_series(ring, window, &pair_factor(flavor, a / g * b))?.pow_half_integer(k)?)?;
        }
    }
    Ok(term)
}

/// The global prefactor as a series.
pub fn prefactor_series<R: Ring>(flavor: Flavor, window: Truncation, ring: &R) -> Result<BiSeries<R>, GenFunError> {
    check_flavor(flavor)?;
    Ok(factor_series(ring, window, &prefactor(flavor))?)
}

/// Fast evaluator for one flavor on one window: logarithms of every factor are
/// precomputed once, so each partition costs one exponential on the window
/// left over after its weight.
pub struct Evaluator<R: Ring> {
    ring: R,
    flavor: Flavor,
    trunc: Truncation,
    inverses: Vec<R::Elem>,
    half: R::Elem,
    part_logs: Vec<Vec<(usize, usize, R::Elem)>>,
    cycle_logs: Vec<Vec<(usize, usize, R::Elem)>>,
    pair_logs: Vec<Vec<(usize, usize, R::Elem)>>,
}

fn sparse<R: Ring>(f: &BiSeries<R>) -> Vec<(usize, usize, R::Elem)> {
    f.terms().map(|(v, e, c)| (v, e, c.clone())).collect()
}

impl<R: Ring> Evaluator<R> {
    pub fn new(flavor: Flavor, trunc: Truncation, ring: &R) -> Result<Self, GenFunError> {
        check_flavor(flavor)?;
        let inverses = degree_inverses(ring, trunc.max_degree().max(1))?;
        let half = ring.from_ratio(1, 2)?;
        let part_logs = (0..=trunc.v_max)
            .map(|a| if a == 0 { Vec::new() } else { sparse(&factor_log(ring, trunc, &part_factor(flavor, a), &inverses)) })
            .collect();
        let cycle_logs = (0..=trunc.v_max)
            .map(|m| if m == 0 { Vec::new() } else { sparse(&factor_log(ring, trunc, &cycle_factor(flavor, m), &inverses)) })
            .collect();
        let pair_logs = (0..=trunc.e_max)
            .map(|l| if l == 0 { Vec::new() } else { sparse(&factor_log(ring, trunc, &pair_factor(flavor, l), &inverses)) })
            .collect();
        Ok(Evaluator {
            ring: ring.clone(),
            flavor,
            trunc,
            inverses,
            half,
            part_logs,
            cycle_logs,
            pair_logs,
        })
    }

    /// The summand for `j`, computed as `scalar * s^w * exp(log A + log B + log C)`.
    pub fn term(&self, j: &Partition) -> Result<BiSeries<R>, GenFunError> {
        let mut out = BiSeries::zero(&self.ring, self.trunc);
        self.accumulate(&mut out, j)?;
        Ok(out)
    }

    fn accumulate(&self, acc: &mut BiSeries<R>, j: &Partition) -> Result<(), GenFunError> {
        let ring = &self.ring;
        let w = j.weight();
        if w > self.trunc.v_max {
            return Ok(());
        }
        let small = Truncation::new(self.trunc.v_max - w, self.trunc.e_max);
        let mut h = BiSeries::zero(ring, small);
        let mut add = |log: &[(usize, usize, R::Elem)], c: &R::Elem| {
            for (v, e, x) in log {
                if *v <= small.v_max {
                    h.add_term(*v, *e, &ring.mul(x, c));
                }
            }
        };
        for (a, ja) in j.parts() {
            add(&self.part_logs[a], &ring.from_i64(ja as i64));
            let c = if a % 2 == 1 { ring.mul(&ring.from_i64(ja as i64), &self.half) } else { ring.from_i64(ja as i64) };
            add(&self.cycle_logs[a], &c);
        }
        for (l, k) in pair_exponents(j) {
            if l <= self.trunc.e_max {
                add(&self.pair_logs[l], &ring.mul(&ring.from_i64(k as i64), &self.half));
            }
        }
        let f = h.exp_with(&self.inverses)?;
        let scalar = partition_scalar(ring, j, self.flavor.convention)?;
        acc.add_shifted_scaled(&f, w, &scalar)?;
        Ok(())
    }

    /// The full generating function on the window.
    pub fn evaluate(&self) -> Result<BiSeries<R>, GenFunError> {
        let partitions = enumerate_partitions(self.trunc.v_max);
        let zero = || BiSeries::zero(&self.ring, self.trunc);
        let sum = partitions
            .par_iter()
            .try_fold(zero, |mut acc, j| self.accumulate(&mut acc, j).map(|_| acc))
            .try_reduce(zero, |a, b| Ok(a.add(&b)?))?;
        Ok(prefactor_series(self.flavor, self.trunc, &self.ring)?.mul(&sum)?)
    }
}

/// A generating function together with the ring it was computed over.
#[derive(Debug, Clone)]
pub struct GenFunResult<R: Ring> {
    pub flavor: Flavor,
    pub series: BiSeries<R>,
    pub ring_fingerprint: String,
}

/// The generating function of `flavor` on `window` over `ring`.
pub fn evaluate<R: Ring>(flavor: Flavor, window: Truncation, ring: &R) -> Result<GenFunResult<R>, GenFunError> {
    Ok(GenFunResult {
        flavor,
        series: Evaluator::new(flavor, window, ring)?.evaluate()?,
        ring_fingerprint: ring.fingerprint(),
    })
}

/// Coefficient ring used to produce integer tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Modular(PrimeBasis),
}

impl Backend {
    pub fn fingerprint(&self) -> String {
        match self {
            Backend::Exact => Rationals.fingerprint(),
            Backend::Modular(b) => b.fingerprint(),
        }
    }
}

impl Default for Backend {
    fn default() -> Self {
        Backend::Modular(PrimeBasis::default())
    }
}

fn check_dim(v: usize, e: usize, d: BigInt) -> Result<BigInt, GenFunError> {
    if d.is_negative() {
        Err(GenFunError::NegativeDimension { v, e, value: d })
    } else {
        Ok(d)
    }
}

/// Upper bound on every dimension in the window: isomorphism classes are at
/// most the multisets of `e` edges on `v` labeled vertices, tadpoles
/// included.
pub fn dimension_bound(window: Truncation) -> BigInt {
    let pairs = window.v_max * (window.v_max + 1) / 2;
    if pairs == 0 {
        return BigInt::one();
    }
    let mut c = BigInt::one();
    // C(pairs + e - 1, e) grows with e
    for k in 1..=window.e_max {
        c = c * BigInt::from(pairs + k - 1) / BigInt::from(k);
    }
    c
}

/// Errors if a modular backend cannot represent the window's dimensions.
pub fn check_backend(window: Truncation, backend: &Backend) -> Result<(), GenFunError> {
    if let Backend::Modular(basis) = backend {
        // balanced lifting needs the product to exceed twice the bound
        let needed = dimension_bound(window).bits() + 1;
        if basis.product_bits() <= needed {
            return Err(GenFunError::PrimeBasisTooSmall {
                needed,
                have: basis.product_bits(),
            });
        }
    }
    Ok(())
}

/// Integer dimension table of a standard flavor.
pub fn evaluate_dims(flavor: Flavor, window: Truncation, backend: &Backend) -> Result<DimTable, GenFunError> {
    check_backend(window, backend)?;
    let mut table = DimTable::zeros(flavor, false, window);
    match backend {
        Backend::Exact => {
            let f = evaluate(flavor, window, &Rationals)?.series;
            for v in 0..=window.v_max {
                for e in 0..=window.e_max {
                    let q = f.coeff(v, e);
                    let n = rational_to_integer(q).ok_or_else(|| GenFunError::NonIntegral { v, e, value: q.to_string() })?;
                    table.set(v, e, check_dim(v, e, n)?);
                }
            }
        }
        Backend::Modular(basis) => {
            let per_prime: Vec<BiSeries<PrimeField>> = basis
                .fields()
                .map(|field| Ok(evaluate(flavor, window, &field)?.series))
                .collect::<Result<_, GenFunError>>()?;
            for v in 0..=window.v_max {
                for e in 0..=window.e_max {
                    let r = Residues(per_prime.iter().map(|f| *f.coeff(v, e)).collect());
                    table.set(v, e, check_dim(v, e, crt_lift(&r, basis))?);
                }
            }
        }
    }
    Ok(table)
}

/// The total character of a permutation of cycle type `j` on graphs with all
/// valences allowed, as a series in `t` (on `Truncation::new(0, e_max)`).
pub fn total_character_unrestricted<R: Ring>(
    j: &Partition,
    convention: Convention,
    e_max: usize,
    ring: &R,
) -> Result<BiSeries<R>, GenFunError> {
    let t = Truncation::new(0, e_max);
    let one = BiSeries::one(ring, t);
    let tpow = |neg: bool, k: usize| BiSeries::signed_term(ring, t, neg, 0, k);
    // even: 1 + t^-_k with t^-_k = -(-t)^k; odd: 1 / (1 - t^k)
    let base = |k: usize| -> Result<BiSeries<R>, SeriesError> {
        match convention {
            Convention::Even => one.add(&tpow(k % 2 == 0, k)),
            Convention::Odd => one.sub(&tpow(false, k))?.inverse(),
        }
    };
    let mut out = one.clone();
    for (m, jm) in j.parts() {
        let jm = jm as i64;
        if m % 2 == 1 {
            let a = (m + 1) / 2;
            let exp = match convention {
                Convention::Even => a as i64 * jm,
                Convention::Odd => (a as i64 - 1) * jm,
            };
            out = out.mul(&base(m)?.pow(exp)?)?;
        } else {
            let a = m / 2;
            let f = match convention {
                Convention::Even => base(a)?.mul(&base(m)?.pow(a as i64)?)?,
                Convention::Odd => one.add(&tpow(false, a))?.inverse()?.neg().mul(&base(m)?.pow(a as i64 - 1)?)?,
            };
            out = out.mul(&f.pow(jm)?)?;
        }
    }
    let parts: Vec<(usize, u32)> = j.parts().collect();
    for (i, &(a, ja)) in parts.iter().enumerate() {
        let ja = ja as i64;
        out = out.mul(&base(a)?.pow(a as i64 * ja * (ja - 1) / 2)?)?;
        for &(b, jb) in &parts[i + 1..] {
            let g = a.gcd(&b);
            out = out.mul(&base(a / g * b)?.pow(g as i64 * ja * jb as i64)?)?;
        }
    }
    Ok(out)
}

/// Dimensions of the graph spaces with every valence allowed (tadpoles allowed
/// under the even convention), from the total characters.
pub fn dims_unrestricted(convention: Convention, window: Truncation) -> Result<DimTable, GenFunError> {
    let ring = Rationals;
    let mut table = DimTable::zeros(Flavor::unrestricted(convention), false, window);
    let mut acc = vec![vec![ring.zero(); window.e_max + 1]; window.v_max + 1];
    for j in enumerate_partitions(window.v_max) {
        let w = j.weight();
        let xi = total_character_unrestricted(&j, convention, window.e_max, &ring)?;
        // the plain 1 / (j! a^j) weights for both conventions
        let scalar = partition_scalar(&ring, &j, Convention::Even)?;
        for (e, slot) in acc[w].iter_mut().enumerate() {
            *slot = ring.add(slot, &ring.mul(xi.coeff(0, e), &scalar));
        }
    }
    for (v, row) in acc.iter().enumerate() {
        for (e, q) in row.iter().enumerate() {
            let n = rational_to_integer(q).ok_or_else(|| GenFunError::NonIntegral { v, e, value: q.to_string() })?;
            table.set(v, e, check_dim(v, e, n)?);
        }
    }
    Ok(table)
}

const CACHE_VERSION: u32 = 1;

/// On-disk cache of integer dimension tables, one file per
/// (flavor, window, ring).
#[derive(Debug, Clone)]
pub struct DimCache {
    dir: PathBuf,
}

impl DimCache {
    pub fn new(dir: impl AsRef<Path>) -> Self {
        DimCache { dir: dir.as_ref().to_path_buf() }
    }

    fn path(&self, flavor: Flavor, window: Truncation, backend: &Backend) -> PathBuf {
        let ring = match backend {
            Backend::Exact => "exact".to_string(),
            Backend::Modular(b) => format!("modular{}-{}", b.len(), b.smallest_prime()),
        };
        let name = flavor.to_string().replace('*', "_star");
        self.dir.join(format!("dims-{name}-{}x{}-{ring}.txt", window.v_max, window.e_max))
    }

    fn header(flavor: Flavor, window: Truncation, backend: &Backend) -> String {
        format!(
            "# gcdims dims cache v{CACHE_VERSION} flavor={flavor} v_max={} e_max={} ring={}",
            window.v_max,
            window.e_max,
            backend.fingerprint()
        )
    }

    /// A cached table, or `None` if absent, stale, or unreadable.
    pub fn load(&self, flavor: Flavor, window: Truncation, backend: &Backend) -> Option<DimTable> {
        let text = fs::read_to_string(self.path(flavor, window, backend)).ok()?;
        let mut lines = text.lines();
        if lines.next()? != Self::header(flavor, window, backend) {
            return None;
        }
        let mut table = DimTable::zeros(flavor, false, window);
        for line in lines {
            let mut it = line.split(' ');
            let v: usize = it.next()?.parse().ok()?;
            let e: usize = it.next()?.parse().ok()?;
            let d: BigInt = it.next()?.parse().ok()?;
            if !window.contains(v, e) {
                return None;
            }
            table.set(v, e, d);
        }
        Some(table)
    }

    pub fn store(&self, table: &DimTable, backend: &Backend) -> Result<(), GenFunError> {
        fs::create_dir_all(&self.dir)?;
        let window = table.truncation();
        let mut text = Self::header(table.flavor, window, backend);
        text.push('\n');
        for (v, e, d) in table.cells().filter(|(_, _, d)| !d.is_zero()) {
            text.push_str(&format!("{v} {e} {d}\n"));
        }
        let path = self.path(table.flavor, window, backend);
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, text)?;
        fs::rename(tmp, path)?;
        Ok(())
    }
}

/// [`evaluate_dims`] through an optional cache.
pub fn evaluate_dims_cached(
    flavor: Flavor,
    window: Truncation,
    backend: &Backend,
    cache: Option<&DimCache>,
) -> Result<DimTable, GenFunError> {
    if let Some(table) = cache.and_then(|c| c.load(flavor, window, backend)) {
        return Ok(table);
    }
    let table = evaluate_dims(flavor, window, backend)?;
    if let Some(c) = cache {
        c.store(&table, backend)?;
    }
    Ok(table)
}
