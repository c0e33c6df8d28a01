//! Coefficient rings for series arithmetic.
//!
//! Three backends implement [`Ring`]:
//!
//! * [`Rationals`]: exact arbitrary-precision rationals, the reference backend.
//! * [`PrimeField`]: arithmetic modulo a single word-sized prime, the workhorse
//!   of the multi-modular pipeline (one run per prime, lifted afterwards).
//! * [`MultiModular`]: residue vectors over a whole [`PrimeBasis`], with
//!   componentwise arithmetic.
//!
//! Integers are recovered from residues with [`crt_lift`], which returns the
//! balanced representative in `(-M/2, M/2]`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    /// The divisor is not invertible. For modular backends this means the
    /// prime basis is too small for the denominators that occur.
    #[error("division by a non-unit")]
    DivisionByNonUnit,
    #[error("invalid prime basis: {0}")]
    InvalidBasis(String),
    #[error("cannot parse coefficient {0:?}")]
    Parse(String),
}

/// A commutative ring with the operations the series layer needs.
///
/// `Acc` is an accumulator for sums of products; backends may delay modular
/// reduction inside it.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;
    type Acc: Clone + Send;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, CoeffError>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, CoeffError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `num / den` as a ring element.
    fn from_ratio(&self, num: i64, den: i64) -> Result<Self::Elem, CoeffError> {
        self.div(&self.from_i64(num), &self.from_i64(den))
    }

    fn acc_zero(&self) -> Self::Acc;
    /// `acc += a * b`
    fn acc_mul_add(&self, acc: &mut Self::Acc, a: &Self::Elem, b: &Self::Elem);
    fn acc_value(&self, acc: &Self::Acc) -> Self::Elem;

    /// Identifies the ring instance in cache keys and dumps.
    fn fingerprint(&self) -> String;
    /// Text form used by series dumps.
    fn format_elem(&self, a: &Self::Elem) -> String;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, CoeffError>;
}

/// Exact rationals.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;
    type Acc = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational, CoeffError> {
        if a.is_zero() {
            Err(CoeffError::DivisionByNonUnit)
        } else {
            Ok(a.recip())
        }
    }
    fn acc_zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn acc_mul_add(&self, acc: &mut BigRational, a: &BigRational, b: &BigRational) {
        *acc += a * b;
    }
    fn acc_value(&self, acc: &BigRational) -> BigRational {
        acc.clone()
    }
    fn fingerprint(&self) -> String {
        "exact".to_string()
    }
    fn format_elem(&self, a: &BigRational) -> String {
        format!("{}/{}", a.numer(), a.denom())
    }
    fn parse_elem(&self, s: &str) -> Result<BigRational, CoeffError> {
        let bad = || CoeffError::Parse(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(p as i128) as u64)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &w in &WITNESSES {
        let mut x = pow_mod(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Integers modulo a single prime `p < 2^62`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

// Products of two residues are below 2^124, so an accumulator kept under 2^127
// can absorb one more product without overflowing a u128.
const ACC_LIMIT: u128 = 1 << 127;

impl Ring for PrimeField {
    type Elem = u64;
    type Acc = u128;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.p as i128) as u64
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("reduced residue fits in u64")
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn inv(&self, a: &u64) -> Result<u64, CoeffError> {
        inv_mod(*a, self.p).ok_or(CoeffError::DivisionByNonUnit)
    }
    fn acc_zero(&self) -> u128 {
        0
    }
    #[inline]
    fn acc_mul_add(&self, acc: &mut u128, a: &u64, b: &u64) {
        *acc += *a as u128 * *b as u128;
        if *acc >= ACC_LIMIT {
            *acc %= self.p as u128;
        }
    }
    fn acc_value(&self, acc: &u128) -> u64 {
        (acc % self.p as u128) as u64
    }
    fn fingerprint(&self) -> String {
        format!("modp:{}", self.p)
    }
    fn format_elem(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse_elem(&self, s: &str) -> Result<u64, CoeffError> {
        let r: u64 = s.trim().parse().map_err(|_| CoeffError::Parse(s.to_string()))?;
        if r >= self.p {
            return Err(CoeffError::Parse(s.to_string()));
        }
        Ok(r)
    }
}

/// An ordered list of distinct odd primes with precomputed CRT data.
#[derive(Clone, PartialEq, Eq)]
pub struct PrimeBasis {
    primes: Vec<u64>,
    product: BigInt,
    // Basis idempotents: e_i = 1 mod p_i, 0 mod p_j (j != i).
    idempotents: Vec<BigInt>,
}

impl fmt::Debug for PrimeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimeBasis").field("primes", &self.primes).finish()
    }
}

/// Eight consecutive primes just below 2^62.
pub const DEFAULT_PRIMES: [u64; 8] = [
    4611686018427387847,
    4611686018427387817,
    4611686018427387787,
    4611686018427387761,
    4611686018427387751,
    4611686018427387737,
    4611686018427387733,
    4611686018427387709,
];

/// Smallest prime accepted in a production basis.
pub const MIN_PRIME: u64 = 1 << 20;
/// Primes must stay below this bound so that residues fit the lazy accumulator.
pub const MAX_PRIME: u64 = 1 << 62;

impl PrimeBasis {
    /// Validates and builds a basis for production use: distinct odd primes in
    /// `(2^20, 2^62)`.
    pub fn new(primes: Vec<u64>) -> Result<Self, CoeffError> {
        for &p in &primes {
            if p <= MIN_PRIME || p >= MAX_PRIME {
                return Err(CoeffError::InvalidBasis(format!(
                    "{p} is outside the range (2^20, 2^62)"
                )));
            }
        }
        Self::with_primes(primes)
    }

    /// Builds a basis from any distinct odd primes below 2^62. Small primes are
    /// useful in tests; production code should go through [`PrimeBasis::new`].
    pub fn with_primes(primes: Vec<u64>) -> Result<Self, CoeffError> {
        if primes.is_empty() {
            return Err(CoeffError::InvalidBasis("empty prime list".into()));
        }
        for (i, &p) in primes.iter().enumerate() {
            if p >= MAX_PRIME {
                return Err(CoeffError::InvalidBasis(format!("{p} is not below 2^62")));
            }
            if p == 2 || !is_prime_u64(p) {
                return Err(CoeffError::InvalidBasis(format!("{p} is not an odd prime")));
            }
            if primes[..i].contains(&p) {
                return Err(CoeffError::InvalidBasis(format!("{p} is listed twice")));
            }
        }
        let product: BigInt = primes.iter().map(|&p| BigInt::from(p)).product();
        let idempotents = primes
            .iter()
            .map(|&p| {
                let cofactor = &product / BigInt::from(p);
                let c = PrimeField::new(p).from_bigint(&cofactor);
                let inv = inv_mod(c, p).expect("distinct primes are coprime");
                cofactor * BigInt::from(inv)
            })
            .collect();
        Ok(PrimeBasis {
            primes,
            product,
            idempotents,
        })
    }

    /// Parses a comma-separated list of decimal primes.
    pub fn parse(list: &str) -> Result<Self, CoeffError> {
        let primes = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<u64>()
                    .map_err(|_| CoeffError::InvalidBasis(format!("{s:?} is not a decimal integer")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(primes)
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn product(&self) -> &BigInt {
        &self.product
    }

    pub fn product_bits(&self) -> u64 {
        self.product.bits()
    }

    pub fn smallest_prime(&self) -> u64 {
        *self.primes.iter().min().expect("basis is nonempty")
    }

    pub fn fields(&self) -> impl Iterator<Item = PrimeField> + '_ {
        self.primes.iter().map(|&p| PrimeField::new(p))
    }

    pub fn fingerprint(&self) -> String {
        let list: Vec<String> = self.primes.iter().map(u64::to_string).collect();
        format!("residues:{}", list.join(","))
    }
}

impl Default for PrimeBasis {
    fn default() -> Self {
        PrimeBasis::new(DEFAULT_PRIMES.to_vec()).expect("default basis is valid")
    }
}

/// A residue vector, one entry per prime of a basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Residues(pub Vec<u64>);

impl Residues {
    pub fn from_bigint(n: &BigInt, basis: &PrimeBasis) -> Self {
        Residues(basis.fields().map(|f| f.from_bigint(n)).collect())
    }
}

/// Balanced CRT lift: the unique integer in `(-M/2, M/2]` with the given
/// residues, `M` being the product of the basis primes.
pub fn crt_lift(x: &Residues, basis: &PrimeBasis) -> BigInt {
    assert_eq!(x.0.len(), basis.len(), "residue vector does not match the basis");
    let m = basis.product();
    let mut acc = BigInt::zero();
    for (r, e) in x.0.iter().zip(&basis.idempotents) {
        acc += e * BigInt::from(*r);
    }
    let mut lifted = acc.mod_floor(m);
    if (&lifted * 2u32) > *m {
        lifted -= m;
    }
    lifted
}

/// Vectors of residues over a fixed basis with componentwise arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiModular {
    basis: Arc<PrimeBasis>,
}

impl MultiModular {
    pub fn new(basis: PrimeBasis) -> Self {
        MultiModular {
            basis: Arc::new(basis),
        }
    }

    pub fn basis(&self) -> &PrimeBasis {
        &self.basis
    }

    pub fn lift(&self, x: &Residues) -> BigInt {
        crt_lift(x, &self.basis)
    }

    fn zip_with(&self, a: &Residues, b: &Residues, f: impl Fn(PrimeField, u64, u64) -> u64) -> Residues {
        Residues(
            self.basis
                .fields()
                .zip(a.0.iter().zip(&b.0))
                .map(|(field, (&x, &y))| f(field, x, y))
                .collect(),
        )
    }
}

impl Ring for MultiModular {
    type Elem = Residues;
    type Acc = Vec<u128>;

    fn zero(&self) -> Residues {
        Residues(vec![0; self.basis.len()])
    }
    fn one(&self) -> Residues {
        Residues(vec![1; self.basis.len()])
    }
    fn from_i64(&self, n: i64) -> Residues {
        Residues(self.basis.fields().map(|f| f.from_i64(n)).collect())
    }
    fn from_bigint(&self, n: &BigInt) -> Residues {
        Residues::from_bigint(n, &self.basis)
    }
    fn is_zero(&self, a: &Residues) -> bool {
        a.0.iter().all(|&r| r == 0)
    }
    fn add(&self, a: &Residues, b: &Residues) -> Residues {
        self.zip_with(a, b, |f, x, y| f.add(&x, &y))
    }
    fn sub(&self, a: &Residues, b: &Residues) -> Residues {
        self.zip_with(a, b, |f, x, y| f.sub(&x, &y))
    }
    fn neg(&self, a: &Residues) -> Residues {
        Residues(self.basis.fields().zip(&a.0).map(|(f, x)| f.neg(x)).collect())
    }
    fn mul(&self, a: &Residues, b: &Residues) -> Residues {
        self.zip_with(a, b, |f, x, y| f.mul(&x, &y))
    }
    fn inv(&self, a: &Residues) -> Result<Residues, CoeffError> {
        self.basis
            .fields()
            .zip(&a.0)
            .map(|(f, x)| f.inv(x))
            .collect::<Result<Vec<_>, _>>()
            .map(Residues)
    }
    fn acc_zero(&self) -> Vec<u128> {
        vec![0; self.basis.len()]
    }
    fn acc_mul_add(&self, acc: &mut Vec<u128>, a: &Residues, b: &Residues) {
        for (((slot, f), x), y) in acc.iter_mut().zip(self.basis.fields()).zip(&a.0).zip(&b.0) {
            f.acc_mul_add(slot, x, y);
        }
    }
    fn acc_value(&self, acc: &Vec<u128>) -> Residues {
        Residues(self.basis.fields().zip(acc).map(|(f, a)| f.acc_value(a)).collect())
    }
    fn fingerprint(&self) -> String {
        self.basis.fingerprint()
    }
    fn format_elem(&self, a: &Residues) -> String {
        let parts: Vec<String> = a.0.iter().map(u64::to_string).collect();
        parts.join(",")
    }
    fn parse_elem(&self, s: &str) -> Result<Residues, CoeffError> {
        let parts = s
            .split(',')
            .zip(self.basis.fields())
            .map(|(x, f)| f.parse_elem(x))
            .collect::<Result<Vec<_>, _>>()?;
        if parts.len() != self.basis.len() {
            return Err(CoeffError::Parse(s.to_string()));
        }
        Ok(Residues(parts))
    }
}

/// Converts an exact rational to an integer when its denominator is one.
pub fn rational_to_integer(q: &BigRational) -> Option<BigInt> {
    if q.denom().is_one() {
        Some(q.numer().clone())
    } else {
        None
    }
}
