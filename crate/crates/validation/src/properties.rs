//! Randomized property suites. Each suite runs [`CASES`] cases and reports
//! the first failure.

use gcdims::coeff::{crt_lift, MultiModular, PrimeBasis, PrimeField, Rationals, Residues, Ring};
use gcdims::euler::{compose_dims, compose_euler, connected_dims, connected_euler, DimTable, EulerTable};
use gcdims::flavor::Flavor;
use gcdims::graphs::{canonical_labeling, canonicalize, MultiGraph};
use gcdims::series::{BiSeries, Truncation};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestError, TestRunner};

pub const CASES: u32 = 1000;

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    })
}

pub type PropResult = Result<(), String>;

fn report<T: std::fmt::Debug>(r: Result<(), TestError<T>>) -> PropResult {
    r.map_err(|e| e.to_string())
}

fn check(cond: bool, what: &str) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.to_string()))
    }
}

fn ring_axioms<R: Ring>(ring: &R, a: &R::Elem, b: &R::Elem, c: &R::Elem) -> Result<(), TestCaseError> {
    check(ring.add(a, b) == ring.add(b, a), "add commutes")?;
    check(ring.mul(a, b) == ring.mul(b, a), "mul commutes")?;
    check(ring.add(&ring.add(a, b), c) == ring.add(a, &ring.add(b, c)), "add associates")?;
    check(ring.mul(&ring.mul(a, b), c) == ring.mul(a, &ring.mul(b, c)), "mul associates")?;
    check(ring.mul(a, &ring.add(b, c)) == ring.add(&ring.mul(a, b), &ring.mul(a, c)), "distributive")?;
    check(ring.add(a, &ring.zero()) == *a && ring.mul(a, &ring.one()) == *a, "identities")?;
    check(ring.is_zero(&ring.add(a, &ring.neg(a))), "negation")?;
    check(ring.sub(a, b) == ring.add(a, &ring.neg(b)), "subtraction")?;
    if !ring.is_zero(a) {
        let inv = ring.inv(a).map_err(|e| TestCaseError::fail(e.to_string()))?;
        check(ring.mul(a, &inv) == ring.one(), "inverse")?;
    }
    let mut acc = ring.acc_zero();
    ring.acc_mul_add(&mut acc, a, b);
    ring.acc_mul_add(&mut acc, b, c);
    check(ring.acc_value(&acc) == ring.add(&ring.mul(a, b), &ring.mul(b, c)), "accumulator")?;
    check(ring.parse_elem(&ring.format_elem(a)).ok().as_ref() == Some(a), "format round trip")
}

fn small_basis() -> PrimeBasis {
    PrimeBasis::with_primes(vec![4611686018427387847, 4611686018427387817, 1000000007]).unwrap()
}

/// Field axioms for the exact, single-prime and multi-modular rings.
pub fn prop_ring_axioms() -> PropResult {
    let q = Rationals;
    let rat = (any::<i32>(), 1i64..1000).prop_map(|(n, d)| BigRational::new(n.into(), d.into()));
    report(runner().run(&(rat.clone(), rat.clone(), rat), |(a, b, c)| ring_axioms(&q, &a, &b, &c)))?;
    let p = PrimeField::new(4611686018427387847);
    let elem = 0u64..4611686018427387847;
    report(runner().run(&(elem.clone(), elem.clone(), elem), |(a, b, c)| ring_axioms(&p, &a, &b, &c)))?;
    let basis = small_basis();
    let mm = MultiModular::new(basis);
    report(runner().run(&(any::<i64>(), any::<i64>(), any::<i64>()), |(a, b, c)| {
        ring_axioms(&mm, &mm.from_i64(a), &mm.from_i64(b), &mm.from_i64(c))
    }))
}

const WINDOW: Truncation = Truncation { v_max: 3, e_max: 4 };

fn series_strategy(unit: bool) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-5i64..=5, WINDOW.len()).prop_map(move |mut c| {
        if unit {
            c[0] = 1;
        }
        c
    })
}

fn to_series<R: Ring>(ring: &R, c: &[i64]) -> BiSeries<R> {
    let mut s = BiSeries::zero(ring, WINDOW);
    let mut it = c.iter();
    for v in 0..=WINDOW.v_max {
        for e in 0..=WINDOW.e_max {
            s.set_coeff(v, e, ring.from_i64(*it.next().unwrap()));
        }
    }
    s
}

fn series_ring_laws<R: Ring>(ring: &R, a: &[i64], b: &[i64], c: &[i64]) -> Result<(), TestCaseError> {
    let (a, b, c) = (to_series(ring, a), to_series(ring, b), to_series(ring, c));
    let ok = |x: Result<BiSeries<R>, _>| x.map_err(|e: gcdims::series::SeriesError| TestCaseError::fail(e.to_string()));
    check(ok(a.mul(&b))? == ok(b.mul(&a))?, "series mul commutes")?;
    check(ok(ok(a.mul(&b))?.mul(&c))? == ok(a.mul(&ok(b.mul(&c))?))?, "series mul associates")?;
    check(ok(a.mul(&ok(b.add(&c))?))? == ok(ok(a.mul(&b))?.add(&ok(a.mul(&c))?))?, "series distributive")
}

/// Commutativity, associativity and distributivity of truncated series.
pub fn prop_series_ring() -> PropResult {
    let s = || series_strategy(false);
    report(runner().run(&(s(), s(), s()), |(a, b, c)| series_ring_laws(&Rationals, &a, &b, &c)))?;
    report(runner().run(&(s(), s(), s()), |(a, b, c)| series_ring_laws(&PrimeField::new(1000000007), &a, &b, &c)))
}

fn round_trips<R: Ring>(ring: &R, f: &[i64]) -> Result<(), TestCaseError> {
    let ok = |x: Result<BiSeries<R>, _>| x.map_err(|e: gcdims::series::SeriesError| TestCaseError::fail(e.to_string()));
    let f = to_series(ring, f);
    let one = BiSeries::one(ring, WINDOW);
    check(ok(f.mul(&ok(f.inverse())?))? == one, "f * f^-1 = 1")?;
    check(ok(ok(f.inverse())?.inverse())? == f, "inverse involutive")?;
    let g = ok(f.sqrt_one())?;
    check(ok(g.mul(&g))? == f, "sqrt squared")?;
    check(ok(ok(f.mul(&f))?.sqrt_one())? == f, "sqrt of square")?;
    check(ok(ok(f.log_one())?.exp())? == f, "exp log")
}

/// Inverse, square root and logarithm round trips on series with constant
/// term 1.
pub fn prop_series_round_trips() -> PropResult {
    report(runner().run(&series_strategy(true), |f| round_trips(&Rationals, &f)))?;
    report(runner().run(&series_strategy(true), |f| round_trips(&PrimeField::new(4611686018427387817), &f)))
}

fn graph_strategy() -> impl Strategy<Value = (MultiGraph, Vec<usize>)> {
    (1usize..=8)
        .prop_flat_map(|v| {
            (
                proptest::collection::vec((0..v, 0..v), 0..=12),
                Just((0..v).collect::<Vec<usize>>()).prop_shuffle(),
                Just(v),
            )
        })
        .prop_map(|(edges, perm, v)| (MultiGraph::new(v, edges).unwrap(), perm))
}

/// Canonical forms are idempotent and invariant under relabeling, and the
/// returned labeling maps the graph onto its canonical form.
pub fn prop_canonicalize() -> PropResult {
    report(runner().run(&graph_strategy(), |(g, perm)| {
        let (canon, labeling) = canonical_labeling(&g).unwrap();
        check(g.relabel(&labeling) == canon, "labeling reaches canonical form")?;
        check(canonicalize(&canon).unwrap() == canon, "idempotent")?;
        check(canonicalize(&g.relabel(&perm)).unwrap() == canon, "relabeling invariant")?;
        let (mut a, mut b) = (canon.valences(), g.valences());
        a.sort_unstable();
        b.sort_unstable();
        check(a == b && canon.edge_count() == g.edge_count(), "degree sequence kept")
    }))
}

fn dims_strategy() -> impl Strategy<Value = (usize, Vec<u8>)> {
    let trunc = Truncation::new(4, 7);
    (0usize..4, proptest::collection::vec(prop_oneof![3 => Just(0u8), 2 => 0u8..4], trunc.len()))
}

fn table_from(flavor: Flavor, values: &[u8]) -> DimTable {
    let trunc = Truncation::new(4, 7);
    let mut t = DimTable::zeros(flavor, true, trunc);
    let mut it = values.iter();
    for v in 0..=trunc.v_max {
        for e in 0..=trunc.e_max {
            let x = *it.next().unwrap();
            if e > v {
                t.set(v, e, BigInt::from(x));
            }
        }
    }
    t
}

/// Disconnected/connected round trips for dimensions and Euler
/// characteristics.
pub fn prop_connected_round_trips() -> PropResult {
    report(runner().run(&dims_strategy(), |(f, values)| {
        let conn = table_from(Flavor::ALL[f], &values);
        let all = compose_dims(&conn).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let back = connected_dims(&all).map_err(|e| TestCaseError::fail(e.to_string()))?;
        check(back.cells().eq(conn.cells()), "connected(compose(x)) = x")
    }))?;
    report(runner().run(&(0usize..4, proptest::collection::vec(-50i64..50, 1..16)), |(f, chi)| {
        let conn = EulerTable::new(Flavor::ALL[f], true, chi.into_iter().map(BigInt::from).collect());
        let all = compose_euler(&conn).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let back = connected_euler(&all).map_err(|e| TestCaseError::fail(e.to_string()))?;
        check(back.values() == conn.values(), "connected_euler(compose_euler(x)) = x")
    }))
}

fn integer_program<R: Ring>(ring: &R, f: &[i64], g: &[i64]) -> BiSeries<R> {
    let f = to_series(ring, f);
    let g = to_series(ring, g);
    let h = f.mul(&g.inverse().unwrap()).unwrap();
    h.add(&f.pow(3).unwrap()).unwrap().sub(&g.pow(-2).unwrap()).unwrap()
}

/// Exact arithmetic agrees with per-prime arithmetic lifted by CRT, and
/// with the multi-modular ring.
pub fn prop_backend_agreement() -> PropResult {
    let basis = small_basis();
    let mm = MultiModular::new(basis.clone());
    report(runner().run(&(series_strategy(true), series_strategy(true)), |(f, g)| {
        let exact = integer_program(&Rationals, &f, &g);
        let per_prime: Vec<BiSeries<PrimeField>> = basis.fields().map(|p| integer_program(&p, &f, &g)).collect();
        let joint = integer_program(&mm, &f, &g);
        for (v, e) in (0..=WINDOW.v_max).flat_map(|v| (0..=WINDOW.e_max).map(move |e| (v, e))) {
            let x = exact.coeff(v, e);
            let residues = Residues(per_prime.iter().map(|s| *s.coeff(v, e)).collect());
            let lifted = BigRational::from_integer(crt_lift(&residues, &basis));
            check(lifted == *x, "CRT lift equals exact")?;
            check(*joint.coeff(v, e) == residues, "multi-modular equals per-prime")?;
        }
        Ok(())
    }))
}

pub fn all_properties() -> Vec<(&'static str, fn() -> PropResult)> {
    vec![
        ("ring axioms", prop_ring_axioms),
        ("series ring laws", prop_series_ring),
        ("series round trips", prop_series_round_trips),
        ("canonical forms", prop_canonicalize),
        ("connected round trips", prop_connected_round_trips),
        ("backend agreement", prop_backend_agreement),
    ]
}
