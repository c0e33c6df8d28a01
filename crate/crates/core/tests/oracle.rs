use gcdims::euler::connected_dims;
use gcdims::flavor::Flavor;
use gcdims::genfun::{evaluate_dims, Backend};
use gcdims::graphs::{basis, is_connected};
use gcdims::series::Truncation;
use gcdims::tables;
use num_bigint::BigInt;

#[test]
fn test_connected_dims_match_brute_force() {
    let window = Truncation::new(8, 12);
    for f in Flavor::ALL {
        let conn = connected_dims(&evaluate_dims(f, window, &Backend::Exact).unwrap()).unwrap();
        for v in 1..=8 {
            for e in v..=12 {
                let count = basis(v, e, f).unwrap().iter().filter(|g| is_connected(g)).count();
                assert_eq!(*conn.get(v, e), BigInt::from(count), "{f} v={v} e={e}");
            }
        }
    }
}

#[test]
fn test_printed_grid_holds_all_graph_dims() {
    // K4 + K4 is the only class at (8, 12) and it is disconnected
    let window = Truncation::new(8, 12);
    let all = evaluate_dims(Flavor::EVEN_STAR, window, &Backend::Exact).unwrap();
    let conn = connected_dims(&all).unwrap();
    let printed = tables::connected_dims(Flavor::EVEN_STAR);
    assert_eq!(*all.get(8, 12), BigInt::from(1));
    assert_eq!(*conn.get(8, 12), BigInt::from(0));
    assert_eq!(printed.get(8, 12), all.get(8, 12));
    assert_eq!(basis(8, 12, Flavor::EVEN_STAR).unwrap().iter().filter(|g| is_connected(g)).count(), 0);
}

#[test]
fn test_modular_matches_exact() {
    let window = Truncation::for_loop_order(5);
    for f in Flavor::ALL {
        let exact = evaluate_dims(f, window, &Backend::Exact).unwrap();
        let modular = evaluate_dims(f, window, &Backend::default()).unwrap();
        assert!(exact.cells().eq(modular.cells()), "{f}");
    }
}
