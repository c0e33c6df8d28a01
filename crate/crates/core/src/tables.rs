//! Published reference values, stored as checked-in CSV files.

use num_bigint::BigInt;

use crate::euler::{DimTable, EulerTable};
use crate::flavor::Flavor;
use crate::series::Truncation;

const EULER_CSV: &str = include_str!("../data/euler_table.csv");
const CONNECTED_EVEN_STAR_CSV: &str = include_str!("../data/connected_dims_even_star.csv");
const CONNECTED_ODD_STAR_CSV: &str = include_str!("../data/connected_dims_odd_star.csv");

/// Column order of the Euler characteristic table.
pub const EULER_COLUMNS: [(Flavor, bool); 8] = [
    (Flavor::EVEN, false),
    (Flavor::EVEN_STAR, false),
    (Flavor::EVEN, true),
    (Flavor::EVEN_STAR, true),
    (Flavor::ODD, false),
    (Flavor::ODD_STAR, false),
    (Flavor::ODD, true),
    (Flavor::ODD_STAR, true),
];

fn parse_rows(csv: &str) -> Vec<Vec<BigInt>> {
    csv.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split(',')
                .map(|x| x.trim().parse().expect("embedded tables hold integers"))
                .collect()
        })
        .collect()
}

/// The published Euler characteristics of `flavor` (connected or not),
/// for `b = 1..=30`.
pub fn euler(flavor: Flavor, connected: bool) -> EulerTable {
    let col = EULER_COLUMNS
        .iter()
        .position(|&c| c == (flavor, connected))
        .unwrap_or_else(|| panic!("no published column for {flavor}"));
    let rows = parse_rows(EULER_CSV);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[0], BigInt::from(i + 1), "rows are b = 1, 2, ...");
    }
    EulerTable::new(flavor, connected, rows.iter().map(|r| r[col + 1].clone()).collect())
}

/// The published connected dimensions (`even*` or `odd*`) on `v <= 24`,
/// `e <= 36`. The printed `(0, 0)` entry is kept as printed.
pub fn connected_dims(flavor: Flavor) -> DimTable {
    let csv = match flavor {
        Flavor::EVEN_STAR => CONNECTED_EVEN_STAR_CSV,
        Flavor::ODD_STAR => CONNECTED_ODD_STAR_CSV,
        _ => panic!("no published connected table for {flavor}"),
    };
    let rows = parse_rows(csv);
    let v_max = rows[0].len() - 2;
    let e_max = rows.len() - 1;
    let mut t = DimTable::zeros(flavor, true, Truncation::new(v_max, e_max));
    for (e, row) in rows.iter().enumerate() {
        assert_eq!(row[0], BigInt::from(e), "rows are e = 0, 1, ...");
        for (v, d) in row[1..].iter().enumerate() {
            t.set(v, e, d.clone());
        }
    }
    t
}
