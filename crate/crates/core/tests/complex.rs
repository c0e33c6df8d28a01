use gcdims::complex::*;
use gcdims::euler;
use gcdims::flavor::{Convention, Flavor};
use gcdims::genfun::{evaluate_dims, Backend};
use gcdims::graphs::{is_connected, is_one_vertex_irreducible};
use gcdims::series::Truncation;
use gcdims::tables;
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn max_b(flavor: Flavor) -> usize {
    match flavor.convention {
        Convention::Odd => 4,
        Convention::Even => 3,
    }
}

fn slice(flavor: Flavor, b: usize, connected: bool, vi: bool) -> ComplexSlice {
    differential(build_basis(flavor, b, connected, vi).unwrap()).unwrap()
}

#[test]
fn test_d_squared_vanishes() {
    for flavor in Flavor::ALL {
        for b in 1..=4 {
            for (c, vi) in [(false, false), (true, false), (true, true)] {
                let s = slice(flavor, b, c, vi);
                assert!(s.d_squared_is_zero(), "{flavor} b={b} connected={c} 1vi={vi}");
            }
        }
    }
}

#[test]
fn test_basis_sizes_match_generating_function() {
    for flavor in Flavor::ALL {
        let all = evaluate_dims(flavor, Truncation::for_loop_order(4), &Backend::Exact).unwrap();
        let conn = euler::connected_dims(&all).unwrap();
        for b in 1..=4 {
            for (connected, table) in [(false, &all), (true, &conn)] {
                let basis = build_basis(flavor, b, connected, false).unwrap();
                for v in 0..=2 * b {
                    assert_eq!(BigInt::from(basis.piece(v).len()), *table.get(v, b + v), "{flavor} b={b} v={v} connected={connected}");
                }
            }
        }
    }
}

#[test]
fn test_euler_poincare_matches_published_connected_euler() {
    for flavor in Flavor::ALL {
        let published = tables::euler(flavor, true);
        for b in 1..=4 {
            let h = cohomology_dims(&slice(flavor, b, true, false));
            let mut chi = alternating_sum(&h);
            if flavor.convention.is_even() && b % 2 == 1 {
                chi = -chi;
            }
            assert_eq!(BigInt::from(chi), *published.get(b), "{flavor} b={b}");
        }
    }
}

#[test]
fn test_euler_poincare_on_every_slice() {
    for flavor in Flavor::ALL {
        for b in 1..=4 {
            let s = slice(flavor, b, false, false);
            assert_eq!(alternating_sum(&cohomology_dims(&s)), alternating_sum(&s.basis.sizes()));
        }
    }
}

#[test]
fn test_known_classes() {
    // the wheels with three and five spokes
    assert_eq!(cohomology_dims(&slice(Flavor::EVEN_STAR, 2, true, false)), vec![0, 0, 0, 0, 1]);
    assert_eq!(cohomology_dims(&slice(Flavor::EVEN_STAR, 4, true, false))[6], 1);
    assert_eq!(cohomology_dims(&slice(Flavor::EVEN_STAR, 3, true, false)), vec![0; 7]);
    assert_eq!(cohomology_dims(&slice(Flavor::ODD, 1, true, false)), vec![0, 0, 1]);
}

#[test]
fn test_verify_multi_edge_removal() {
    for b in 1..=3 {
        let r = verify_multi_edge_removal(b).unwrap();
        if b == 1 {
            assert_eq!(r.left, vec![0, 0, 1]);
            assert_eq!(r.right, vec![0, 0, 0]);
        } else {
            assert_eq!(r.left, r.right);
        }
    }
}

#[test]
fn test_verify_coh2() {
    for flavor in [Flavor::EVEN_STAR, Flavor::ODD, Flavor::ODD_STAR] {
        for b in 1..=max_b(flavor) {
            let r = verify_coh2(b, flavor).unwrap();
            assert_eq!(r.left, r.right);
        }
    }
    assert_eq!(verify_coh2(1, Flavor::ODD).unwrap().left, vec![0, 0, 1]);
    assert_eq!(verify_coh2(2, Flavor::EVEN), Err(ComplexError::UnsupportedFlavor(Flavor::EVEN)));
}

#[test]
fn test_splitting_keeps_connectivity_and_irreducibility() {
    for flavor in [Flavor::EVEN_STAR, Flavor::ODD, Flavor::ODD_STAR] {
        for b in 1..=max_b(flavor) {
            let basis = build_basis(flavor, b, true, false).unwrap();
            for v in 0..=2 * b {
                for g in basis.piece(v) {
                    let irreducible = is_one_vertex_irreducible(g);
                    for (image, _, _) in split_images(flavor.convention, v, g.edges()).unwrap() {
                        assert!(is_connected(&image));
                        assert!(!irreducible || is_one_vertex_irreducible(&image), "{} -> {}", g.dump(), image.dump());
                    }
                }
            }
        }
    }
}

#[test]
fn test_tadpoles_can_create_separating_vertex() {
    let basis = build_basis(Flavor::EVEN, 3, true, true).unwrap();
    let found = (0..=6).any(|v| {
        basis.piece(v).iter().any(|g| {
            split_images(Convention::Even, v, g.edges())
                .unwrap()
                .iter()
                .any(|(image, _, _)| !is_one_vertex_irreducible(image))
        })
    });
    assert!(found);
}

#[test]
fn test_relabeling_invariance() {
    let mut rng = StdRng::seed_from_u64(7);
    for flavor in Flavor::ALL {
        for b in 1..=max_b(flavor) {
            let s = slice(flavor, b, false, false);
            for v in 0..2 * b {
                let m = s.matrix(v);
                for (index, _) in s.basis.piece(v).iter().enumerate() {
                    let expected: Vec<(usize, i64)> = m.entries.iter().filter(|e| e.1 == index).map(|&(r, _, x)| (r, x)).collect();
                    for _ in 0..3 {
                        let mut perm: Vec<usize> = (0..v).collect();
                        perm.shuffle(&mut rng);
                        let col = column_from_relabeled(&s, v, index, &perm).unwrap();
                        assert_eq!(col, expected, "{flavor} b={b} v={v} graph {index} perm {perm:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn test_triplet_export_round_trip() {
    let s = slice(Flavor::ODD, 3, true, false);
    for m in &s.matrices {
        let text = m.to_triplets();
        assert!(text.starts_with(&format!("{} {} ", m.rows, m.cols)));
        assert_eq!(SparseMatrix::parse_triplets(&text).as_ref(), Some(m));
    }
}

#[test]
fn test_degree_map() {
    let s = slice(Flavor::ODD, 1, true, false);
    assert_eq!(s.degree(2, 3), Ok(3));
    assert_eq!(s.degree(2, 2), Err(ComplexError::WrongParity(Convention::Odd)));
    let s = slice(Flavor::EVEN_STAR, 2, true, false);
    // K4 in GC_2
    assert_eq!(s.degree(4, 2), Ok(0));
}

#[test]
fn test_exact_and_modular_ranks_agree() {
    for flavor in Flavor::ALL {
        for b in 1..=3 {
            let s = slice(flavor, b, false, false);
            for m in &s.matrices {
                assert_eq!(rank_modular(m).unwrap(), rank_exact(m));
            }
        }
    }
}
