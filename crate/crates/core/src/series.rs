//! Truncated bivariate power series in `s` (vertex count) and `t` (edge count).
//!
//! A [`BiSeries`] keeps the coefficients of `s^v t^e` for `v <= v_max` and
//! `e <= e_max` in a dense row-major buffer. Every operation here only takes
//! series with nonnegative exponents, so the discarded monomials form an ideal
//! and all retained coefficients are exact.

use std::fmt::Write as _;

use thiserror::Error;

use crate::coeff::{CoeffError, Ring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series have different truncation windows")]
    TruncationMismatch,
    #[error("series are over different coefficient rings")]
    RingMismatch,
    #[error("constant term is not a unit")]
    NonUnitConstantTerm,
    #[error("constant term is not one")]
    ConstantTermNotOne,
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("monomial s^{v} t^{e} lies outside the window")]
    ExponentOutOfWindow { v: usize, e: usize },
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Rectangular truncation window `v <= v_max`, `e <= e_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Truncation {
    pub v_max: usize,
    pub e_max: usize,
}

impl Truncation {
    pub fn new(v_max: usize, e_max: usize) -> Self {
        Truncation { v_max, e_max }
    }

    /// Window that holds every coefficient needed up to loop order `b` in the
    /// at-least-trivalent setting (`v <= 2b`, `e <= 3b`).
    pub fn for_loop_order(b: usize) -> Self {
        Truncation::new(2 * b, 3 * b)
    }

    pub fn len(&self) -> usize {
        (self.v_max + 1) * (self.e_max + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: usize, e: usize) -> bool {
        v <= self.v_max && e <= self.e_max
    }

    #[inline]
    fn index(&self, v: usize, e: usize) -> usize {
        v * (self.e_max + 1) + e
    }

    /// Largest total degree `v + e` in the window.
    pub fn max_degree(&self) -> usize {
        self.v_max + self.e_max
    }
}

/// A truncated bivariate series over the ring `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries<R: Ring> {
    ring: R,
    trunc: Truncation,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> BiSeries<R> {
    pub fn zero(ring: &R, trunc: Truncation) -> Self {
        BiSeries {
            ring: ring.clone(),
            trunc,
            coeffs: vec![ring.zero(); trunc.len()],
        }
    }

    pub fn one(ring: &R, trunc: Truncation) -> Self {
        Self::constant(ring, trunc, ring.one())
    }

    pub fn constant(ring: &R, trunc: Truncation, c: R::Elem) -> Self {
        let mut f = Self::zero(ring, trunc);
        f.coeffs[0] = c;
        f
    }

    /// The single term `c s^v t^e`.
    pub fn monomial(ring: &R, trunc: Truncation, c: R::Elem, v: usize, e: usize) -> Result<Self, SeriesError> {
        if !trunc.contains(v, e) {
            return Err(SeriesError::ExponentOutOfWindow { v, e });
        }
        let mut f = Self::zero(ring, trunc);
        f.coeffs[trunc.index(v, e)] = c;
        Ok(f)
    }

    /// Like [`BiSeries::monomial`], but a term outside the window is silently
    /// truncated to zero.
    pub fn term(ring: &R, trunc: Truncation, c: R::Elem, v: usize, e: usize) -> Self {
        Self::monomial(ring, trunc, c, v, e).unwrap_or_else(|_| Self::zero(ring, trunc))
    }

    /// `sign * s^v t^e` for `sign` in `{1, -1}`, truncated to the window.
    pub fn signed_term(ring: &R, trunc: Truncation, negative: bool, v: usize, e: usize) -> Self {
        let c = if negative { ring.neg(&ring.one()) } else { ring.one() };
        Self::term(ring, trunc, c, v, e)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn coeff(&self, v: usize, e: usize) -> &R::Elem {
        &self.coeffs[self.trunc.index(v, e)]
    }

    pub fn set_coeff(&mut self, v: usize, e: usize, c: R::Elem) {
        let i = self.trunc.index(v, e);
        self.coeffs[i] = c;
    }

    pub fn constant_term(&self) -> &R::Elem {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    /// Nonzero monomials as `(v, e, coefficient)`, sorted by `(v, e)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &R::Elem)> + '_ {
        let w = self.trunc.e_max + 1;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.ring.is_zero(c))
            .map(move |(i, c)| (i / w, i % w, c))
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.trunc != other.trunc {
            return Err(SeriesError::TruncationMismatch);
        }
        if self.ring != other.ring {
            return Err(SeriesError::RingMismatch);
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&R::Elem, &R::Elem) -> R::Elem) -> Result<Self, SeriesError> {
        self.check(other)?;
        Ok(BiSeries {
            ring: self.ring.clone(),
            trunc: self.trunc,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.zip_with(other, |a, b| self.ring.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.zip_with(other, |a, b| self.ring.sub(a, b))
    }

    pub fn neg(&self) -> Self {
        BiSeries {
            ring: self.ring.clone(),
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| self.ring.neg(c)).collect(),
        }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        BiSeries {
            ring: self.ring.clone(),
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|x| self.ring.mul(x, c)).collect(),
        }
    }

    /// `self += c * other` in place.
    pub fn add_scaled(&mut self, other: &Self, c: &R::Elem) -> Result<(), SeriesError> {
        self.check(other)?;
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !self.ring.is_zero(y) {
                *x = self.ring.add(x, &self.ring.mul(y, c));
            }
        }
        Ok(())
    }

    /// Adds `c` to the coefficient of `s^v t^e`; terms outside the window
    /// are dropped.
    pub fn add_term(&mut self, v: usize, e: usize, c: &R::Elem) {
        if self.trunc.contains(v, e) {
            let i = self.trunc.index(v, e);
            self.coeffs[i] = self.ring.add(&self.coeffs[i], c);
        }
    }

    /// `self += c * s^shift * src`, where `src` may live on a smaller window.
    pub fn add_shifted_scaled(&mut self, src: &Self, shift: usize, c: &R::Elem) -> Result<(), SeriesError> {
        if self.ring != src.ring {
            return Err(SeriesError::RingMismatch);
        }
        if src.trunc.e_max > self.trunc.e_max {
            return Err(SeriesError::TruncationMismatch);
        }
        for (v, e, x) in src.terms() {
            if v + shift <= self.trunc.v_max {
                let i = self.trunc.index(v + shift, e);
                self.coeffs[i] = self.ring.add(&self.coeffs[i], &self.ring.mul(x, c));
            }
        }
        Ok(())
    }

    fn nonzero_positions(&self) -> Vec<(usize, usize)> {
        self.terms().map(|(v, e, _)| (v, e)).collect()
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let ring = &self.ring;
        let t = self.trunc;
        let (sparse, dense) = {
            let a = self.nonzero_positions();
            let b = other.nonzero_positions();
            if a.len() <= b.len() {
                ((a, self), other)
            } else {
                ((b, other), self)
            }
        };
        let (positions, sparse_series) = sparse;
        let w = t.e_max + 1;
        let mut acc = vec![ring.acc_zero(); t.len()];
        for (va, ea) in positions {
            let a = &sparse_series.coeffs[t.index(va, ea)];
            for vb in 0..=(t.v_max - va) {
                let out_row = (va + vb) * w + ea;
                let in_row = vb * w;
                for eb in 0..=(t.e_max - ea) {
                    let b = &dense.coeffs[in_row + eb];
                    ring.acc_mul_add(&mut acc[out_row + eb], a, b);
                }
            }
        }
        Ok(BiSeries {
            ring: ring.clone(),
            trunc: t,
            coeffs: acc.iter().map(|a| ring.acc_value(a)).collect(),
        })
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let ring = &self.ring;
        let t = self.trunc;
        let c0 = ring.inv(self.constant_term()).map_err(|_| SeriesError::NonUnitConstantTerm)?;
        let minus_c0 = ring.neg(&c0);
        let f_terms: Vec<(usize, usize)> = self.nonzero_positions().into_iter().filter(|&p| p != (0, 0)).collect();
        let mut g = Self::zero(ring, t);
        g.coeffs[0] = c0;
        for v in 0..=t.v_max {
            for e in 0..=t.e_max {
                if v == 0 && e == 0 {
                    continue;
                }
                let mut acc = ring.acc_zero();
                for &(a, b) in &f_terms {
                    if a <= v && b <= e {
                        ring.acc_mul_add(&mut acc, &self.coeffs[t.index(a, b)], &g.coeffs[t.index(v - a, e - b)]);
                    }
                }
                let s = ring.acc_value(&acc);
                g.coeffs[t.index(v, e)] = ring.mul(&s, &minus_c0);
            }
        }
        Ok(g)
    }

    /// Principal square root of a series with constant term one.
    ///
    /// Solves `g * g = f` coefficient by coefficient in lexicographic order of
    /// `(v, e)`: the coefficient `g_n` enters `(g*g)_n` as `2 g_n` and every
    /// other contribution only involves earlier coefficients.
    pub fn sqrt_one(&self) -> Result<Self, SeriesError> {
        let ring = &self.ring;
        if *self.constant_term() != ring.one() {
            return Err(SeriesError::ConstantTermNotOne);
        }
        let t = self.trunc;
        let half = ring.from_ratio(1, 2)?;
        let mut g = Self::one(ring, t);
        let mut known: Vec<(usize, usize)> = Vec::new();
        for v in 0..=t.v_max {
            for e in 0..=t.e_max {
                if v == 0 && e == 0 {
                    continue;
                }
                let mut acc = ring.acc_zero();
                for &(a, b) in &known {
                    if a <= v && b <= e && (a, b) != (v, e) {
                        let (c, d) = (v - a, e - b);
                        if (c, d) != (0, 0) {
                            ring.acc_mul_add(&mut acc, &g.coeffs[t.index(a, b)], &g.coeffs[t.index(c, d)]);
                        }
                    }
                }
                let rest = ring.acc_value(&acc);
                let c = ring.mul(&ring.sub(&self.coeffs[t.index(v, e)], &rest), &half);
                if !ring.is_zero(&c) {
                    known.push((v, e));
                }
                g.coeffs[t.index(v, e)] = c;
            }
        }
        Ok(g)
    }

    /// `self^k` for an integer `k`; negative powers go through the inverse.
    pub fn pow(&self, k: i64) -> Result<Self, SeriesError> {
        let mut base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut n = k.unsigned_abs();
        let mut result = Self::one(&self.ring, self.trunc);
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// `self^(k/2)` for a series with constant term one. Even `k` avoids the
    /// square root entirely.
    pub fn pow_half_integer(&self, k: i64) -> Result<Self, SeriesError> {
        if *self.constant_term() != self.ring.one() {
            return Err(SeriesError::ConstantTermNotOne);
        }
        if k % 2 == 0 {
            self.pow(k / 2)
        } else {
            self.sqrt_one()?.pow(k)
        }
    }

    /// Multiplies by the total-degree operator: `s^v t^e -> (v + e) s^v t^e`.
    fn degree_weighted(&self) -> Self {
        let ring = &self.ring;
        let w = self.trunc.e_max + 1;
        BiSeries {
            ring: ring.clone(),
            trunc: self.trunc,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if ring.is_zero(c) {
                        c.clone()
                    } else {
                        ring.mul(c, &ring.from_i64((i / w + i % w) as i64))
                    }
                })
                .collect(),
        }
    }

    /// Logarithm of a series with constant term one, defined through the
    /// total-degree derivation `D log f = D f / f`.
    pub fn log_one(&self) -> Result<Self, SeriesError> {
        let ring = &self.ring;
        if *self.constant_term() != ring.one() {
            return Err(SeriesError::ConstantTermNotOne);
        }
        let q = self.degree_weighted().mul(&self.inverse()?)?;
        let inverses = degree_inverses(ring, self.trunc.max_degree())?;
        let w = self.trunc.e_max + 1;
        let coeffs = q
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let d = i / w + i % w;
                if d == 0 {
                    ring.zero()
                } else {
                    ring.mul(c, &inverses[d])
                }
            })
            .collect();
        Ok(BiSeries {
            ring: ring.clone(),
            trunc: self.trunc,
            coeffs,
        })
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        let inverses = degree_inverses(&self.ring, self.trunc.max_degree())?;
        self.exp_with(&inverses)
    }

    /// [`BiSeries::exp`] with a precomputed table of `1/d` for
    /// `d <= v_max + e_max`.
    pub fn exp_with(&self, inverses: &[R::Elem]) -> Result<Self, SeriesError> {
        let ring = &self.ring;
        if !ring.is_zero(self.constant_term()) {
            return Err(SeriesError::PreconditionViolated("exp needs a zero constant term"));
        }
        let t = self.trunc;
        let w = t.e_max + 1;
        let dh = self.degree_weighted();
        let dh_terms: Vec<(usize, usize, usize)> = dh
            .terms()
            .map(|(v, e, _)| (v, e, t.index(v, e)))
            .collect();
        // Scatter form: once F_n is final, push DH_m F_n into every later slot.
        let mut acc = vec![ring.acc_zero(); t.len()];
        let mut f = Self::one(ring, t);
        for v in 0..=t.v_max {
            for e in 0..=t.e_max {
                let n = v * w + e;
                if n != 0 {
                    let val = ring.mul(&ring.acc_value(&acc[n]), &inverses[v + e]);
                    f.coeffs[n] = val;
                }
                let fn_ = &f.coeffs[n];
                if ring.is_zero(fn_) {
                    continue;
                }
                for &(a, b, mi) in &dh_terms {
                    if v + a <= t.v_max && e + b <= t.e_max {
                        ring.acc_mul_add(&mut acc[n + mi], &dh.coeffs[mi], fn_);
                    }
                }
            }
        }
        Ok(f)
    }

    /// The truncated q-Pochhammer product `prod_{k >= 0} (1 - a q^k)`.
    ///
    /// Both `a` and `q` must have zero constant term; the product is finite
    /// on the window because `a q^k` eventually leaves it.
    pub fn qpochhammer(a: &Self, q: &Self) -> Result<Self, SeriesError> {
        a.check(q)?;
        let ring = &a.ring;
        if !ring.is_zero(a.constant_term()) || !ring.is_zero(q.constant_term()) {
            return Err(SeriesError::PreconditionViolated("q-Pochhammer arguments need zero constant term"));
        }
        let one = Self::one(ring, a.trunc);
        let mut result = one.clone();
        let mut factor_arg = a.clone();
        while !factor_arg.is_zero() {
            result = result.mul(&one.sub(&factor_arg)?)?;
            factor_arg = factor_arg.mul(q)?;
        }
        Ok(result)
    }

    /// Multiplies by `s^k`, dropping what falls outside the window.
    pub fn shift_s(&self, k: usize) -> Self {
        let t = self.trunc;
        let mut out = Self::zero(&self.ring, t);
        for v in k..=t.v_max {
            for e in 0..=t.e_max {
                out.coeffs[t.index(v, e)] = self.coeffs[t.index(v - k, e)].clone();
            }
        }
        out
    }

    /// Restriction to a smaller window.
    pub fn restrict(&self, trunc: Truncation) -> Self {
        assert!(trunc.v_max <= self.trunc.v_max && trunc.e_max <= self.trunc.e_max);
        let mut out = Self::zero(&self.ring, trunc);
        for v in 0..=trunc.v_max {
            for e in 0..=trunc.e_max {
                out.coeffs[trunc.index(v, e)] = self.coeffs[self.trunc.index(v, e)].clone();
            }
        }
        out
    }

    /// Debug dump: one line `v e <coefficient>` per nonzero monomial, sorted
    /// by `(v, e)`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (v, e, c) in self.terms() {
            writeln!(out, "{v} {e} {}", self.ring.format_elem(c)).expect("writing to a String");
        }
        out
    }

    /// Parses the output of [`BiSeries::dump`].
    pub fn parse_dump(ring: &R, trunc: Truncation, text: &str) -> Result<Self, SeriesError> {
        let mut f = Self::zero(ring, trunc);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let mut parts = line.splitn(3, ' ');
            let bad = || SeriesError::Coeff(CoeffError::Parse(line.to_string()));
            let v: usize = parts.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
            let e: usize = parts.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
            let c = ring.parse_elem(parts.next().ok_or_else(bad)?)?;
            if !trunc.contains(v, e) {
                return Err(SeriesError::ExponentOutOfWindow { v, e });
            }
            f.set_coeff(v, e, c);
        }
        Ok(f)
    }
}

/// `[0, 1, 1/2, ..., 1/max]` in the ring (index 0 holds zero).
pub fn degree_inverses<R: Ring>(ring: &R, max: usize) -> Result<Vec<R::Elem>, SeriesError> {
    let mut out = vec![ring.zero()];
    for d in 1..=max {
        out.push(ring.inv(&ring.from_i64(d as i64))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{MultiModular, PrimeBasis, Rationals, Residues};
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        Rationals.from_ratio(n, d).unwrap()
    }

    fn poly(trunc: Truncation, terms: &[(i64, i64, usize, usize)]) -> BiSeries<Rationals> {
        let mut f = BiSeries::zero(&Rationals, trunc);
        for &(n, d, v, e) in terms {
            let c = Rationals.add(f.coeff(v, e), &q(n, d));
            f.set_coeff(v, e, c);
        }
        f
    }

    const W: Truncation = Truncation { v_max: 4, e_max: 4 };

    #[test]
    fn test_add_and_neg() {
        let a = poly(W, &[(1, 1, 0, 0), (1, 1, 1, 1)]);
        let b = poly(W, &[(1, 1, 0, 0), (-1, 1, 1, 1)]);
        assert_eq!(a.add(&b).unwrap(), poly(W, &[(2, 1, 0, 0)]));
        let zero = BiSeries::zero(&Rationals, W);
        assert_eq!(zero.neg(), zero);
        let c = poly(W, &[(1, 1, 0, 0), (1, 1, 1, 0)]).scale(&q(1, 2));
        assert_eq!(c, poly(W, &[(1, 2, 0, 0), (1, 2, 1, 0)]));
    }

    #[test]
    fn test_mul_examples() {
        let a = poly(W, &[(1, 1, 0, 0), (1, 1, 1, 1)]);
        let b = poly(W, &[(1, 1, 0, 0), (-1, 1, 1, 1)]);
        assert_eq!(a.mul(&b).unwrap(), poly(W, &[(1, 1, 0, 0), (-1, 1, 2, 2)]));
        assert_eq!(a.mul(&BiSeries::one(&Rationals, W)).unwrap(), a);
        let narrow = Truncation::new(0, 4);
        let x = poly(narrow, &[(1, 1, 0, 0)]).add(&BiSeries::term(&Rationals, narrow, q(1, 1), 1, 0)).unwrap();
        let y = poly(narrow, &[(1, 1, 0, 0), (1, 1, 0, 1)]);
        assert_eq!(x.mul(&y).unwrap(), y);
    }

    #[test]
    fn test_mismatch() {
        let a = BiSeries::one(&Rationals, W);
        let b = BiSeries::one(&Rationals, Truncation::new(3, 4));
        assert_eq!(a.mul(&b), Err(SeriesError::TruncationMismatch));
        assert_eq!(a.add(&b), Err(SeriesError::TruncationMismatch));
    }

    #[test]
    fn test_inverse_examples() {
        let f = poly(W, &[(1, 1, 0, 0), (-1, 1, 1, 1)]);
        let g = f.inverse().unwrap();
        for k in 0..=4 {
            assert_eq!(*g.coeff(k, k), q(1, 1));
        }
        assert_eq!(g.coeff(1, 0), &q(0, 1));
        assert_eq!(poly(W, &[(2, 1, 0, 0)]).inverse().unwrap(), poly(W, &[(1, 2, 0, 0)]));
        assert_eq!(BiSeries::one(&Rationals, W).inverse().unwrap(), BiSeries::one(&Rationals, W));
        assert_eq!(
            BiSeries::zero(&Rationals, W).inverse(),
            Err(SeriesError::NonUnitConstantTerm)
        );
    }

    #[test]
    fn test_sqrt_examples() {
        let f = poly(W, &[(1, 1, 0, 0), (2, 1, 1, 1), (1, 1, 2, 2)]);
        assert_eq!(f.sqrt_one().unwrap(), poly(W, &[(1, 1, 0, 0), (1, 1, 1, 1)]));
        let one = BiSeries::one(&Rationals, W);
        assert_eq!(one.sqrt_one().unwrap(), one);
        let g = poly(W, &[(1, 1, 0, 0), (1, 1, 1, 0)]).sqrt_one().unwrap();
        assert_eq!(g.coeff(1, 0), &q(1, 2));
        assert_eq!(g.coeff(2, 0), &q(-1, 8));
        assert_eq!(g.coeff(3, 0), &q(1, 16));
        assert_eq!(
            poly(W, &[(2, 1, 0, 0)]).sqrt_one(),
            Err(SeriesError::ConstantTermNotOne)
        );
    }

    #[test]
    fn test_pow_half_integer_examples() {
        let f = poly(W, &[(1, 1, 0, 0), (2, 1, 1, 1), (1, 1, 2, 2)]);
        assert_eq!(f.pow_half_integer(1).unwrap(), poly(W, &[(1, 1, 0, 0), (1, 1, 1, 1)]));
        assert_eq!(f.pow_half_integer(2).unwrap(), f);
        let g = poly(W, &[(1, 1, 0, 0), (-1, 1, 1, 1)]).pow_half_integer(-4).unwrap();
        for k in 0..=4 {
            assert_eq!(*g.coeff(k, k), q(k as i64 + 1, 1));
        }
    }

    #[test]
    fn test_qpochhammer_examples() {
        let t = Truncation::new(2, 2);
        let zero = BiSeries::zero(&Rationals, t);
        let st = poly(t, &[(1, 1, 1, 1)]);
        assert_eq!(BiSeries::qpochhammer(&zero, &st).unwrap(), BiSeries::one(&Rationals, t));
        // (1 - s)(1 - s^2 t)
        let s = poly(t, &[(1, 1, 1, 0)]);
        let expect = poly(t, &[(1, 1, 0, 0), (-1, 1, 1, 0), (-1, 1, 2, 1)]);
        assert_eq!(BiSeries::qpochhammer(&s, &st).unwrap(), expect);
        // (1 + st)(1 + s^3 t^3)
        let t3 = Truncation::new(3, 3);
        let a = poly(t3, &[(-1, 1, 1, 1)]);
        let qq = poly(t3, &[(1, 1, 2, 2)]);
        let expect = poly(t3, &[(1, 1, 0, 0), (1, 1, 1, 1), (1, 1, 3, 3)]);
        assert_eq!(BiSeries::qpochhammer(&a, &qq).unwrap(), expect);
        let bad = poly(t3, &[(1, 1, 0, 0)]);
        assert!(matches!(
            BiSeries::qpochhammer(&bad, &qq),
            Err(SeriesError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn test_monomial_examples() {
        let m = BiSeries::monomial(&Rationals, W, q(-1, 1), 1, 1).unwrap();
        assert_eq!(m, poly(W, &[(-1, 1, 1, 1)]));
        assert_eq!(BiSeries::monomial(&Rationals, W, q(1, 1), 0, 0).unwrap(), BiSeries::one(&Rationals, W));
        assert_eq!(BiSeries::monomial(&Rationals, W, q(1, 1), 2, 4).unwrap(), poly(W, &[(1, 1, 2, 4)]));
        assert_eq!(
            BiSeries::monomial(&Rationals, W, q(1, 1), 5, 0),
            Err(SeriesError::ExponentOutOfWindow { v: 5, e: 0 })
        );
    }

    #[test]
    fn test_log_exp() {
        // log(1 - t) = -sum t^n / n
        let t = Truncation::new(2, 5);
        let f = poly(t, &[(1, 1, 0, 0), (-1, 1, 0, 1)]);
        let l = f.log_one().unwrap();
        for n in 1..=5 {
            assert_eq!(*l.coeff(0, n), q(-1, n as i64));
        }
        assert_eq!(l.exp().unwrap(), f);
        let g = poly(t, &[(1, 1, 0, 0), (3, 1, 1, 2), (-2, 1, 2, 0), (1, 7, 1, 1)]);
        assert_eq!(g.log_one().unwrap().exp().unwrap(), g);
        // exp(k log g) = g^k
        assert_eq!(g.log_one().unwrap().scale(&q(3, 1)).exp().unwrap(), g.pow(3).unwrap());
    }

    #[test]
    fn test_dump_format() {
        let f = poly(W, &[(1, 1, 0, 0), (-1, 2, 1, 3)]);
        assert_eq!(f.dump(), "0 0 1/1\n1 3 -1/2\n");
        assert_eq!(BiSeries::parse_dump(&Rationals, W, &f.dump()).unwrap(), f);
        let ring = MultiModular::new(PrimeBasis::with_primes(vec![5, 7]).unwrap());
        let g = BiSeries::monomial(&ring, W, Residues(vec![2, 3]), 1, 0).unwrap();
        assert_eq!(g.dump(), "1 0 2,3\n");
    }
}
