//! Graded dimensions and Euler characteristics of ordinary graph complexes.

pub mod coeff;
pub mod complex;
pub mod euler;
pub mod flavor;
pub mod genfun;
pub mod graphs;
pub mod series;
pub mod tables;
