//! Seeded random instances for property checks.

use rand::Rng;

use crate::aggregation::{SymbolicTable, SymbolicUnit};
use crate::polygon::Polygon;

pub const CENTER_RANGE: (f64, f64) = (-10.0, 10.0);
pub const RADIUS_RANGE: (f64, f64) = (0.0, 5.0);

pub fn random_params<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    (rng.gen_range(CENTER_RANGE.0..CENTER_RANGE.1), rng.gen_range(RADIUS_RANGE.0..RADIUS_RANGE.1))
}

pub fn random_polygon<R: Rng + ?Sized>(rng: &mut R, vertex_count: usize) -> Polygon {
    let (c, r) = random_params(rng);
    Polygon::new(c, r, vertex_count).expect("finite parameters")
}

/// Polygon with a strictly positive radius, for density checks.
pub fn random_solid_polygon<R: Rng + ?Sized>(rng: &mut R, vertex_count: usize) -> Polygon {
    let c = rng.gen_range(CENTER_RANGE.0..CENTER_RANGE.1);
    let r = rng.gen_range(0.1..RADIUS_RANGE.1);
    Polygon::new(c, r, vertex_count).expect("finite parameters")
}

pub fn random_units<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize, vertex_count: usize) -> Vec<SymbolicUnit> {
    (0..n)
        .map(|i| {
            let params: Vec<(f64, f64)> = (0..p).map(|_| random_params(rng)).collect();
            SymbolicUnit::from_params(format!("u{i}"), &params, vertex_count).expect("finite parameters")
        })
        .collect()
}

pub fn random_table<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize, vertex_count: usize) -> SymbolicTable {
    let variables = (0..p).map(|z| format!("v{z}")).collect();
    SymbolicTable::new(variables, vertex_count, random_units(rng, n, p, vertex_count)).expect("consistent shape")
}

/// Planted instance: units scattered around `k` well separated group centers.
/// Returns the table and the planted labels.
pub fn planted_table<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    k: usize,
    p: usize,
    vertex_count: usize,
) -> (SymbolicTable, Vec<usize>) {
    let labels: Vec<usize> = (0..n).map(|i| i % k).collect();
    let units = labels
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            let params: Vec<(f64, f64)> =
                (0..p).map(|_| (20.0 * g as f64 + rng.gen_range(-1.0..1.0), 1.0 + rng.gen_range(0.0..1.0))).collect();
            SymbolicUnit::from_params(format!("u{i}"), &params, vertex_count).expect("finite parameters")
        })
        .collect();
    let variables = (0..p).map(|z| format!("v{z}")).collect();
    (SymbolicTable::new(variables, vertex_count, units).expect("consistent shape"), labels)
}
