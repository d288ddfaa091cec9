//! Brute-force verifiers for the metric, the prototypes, the density and the
//! clustering algorithm.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::aggregation::{SymbolicTable, SymbolicUnit};
use crate::clustering::{median_criterion, Partition, Prototype};
use crate::error::{Error, Result};
use crate::metric::polygon_distance;
use crate::polygon::{bounding_box, Density, Point, Polygon, PolygonSet};

pub mod generate;
pub mod suite;

/// Upper bound on the number of partitions [`exact_optimum`] will enumerate.
pub const MAX_PARTITIONS: u128 = 1_000_000;

/// Outcome of one oracle comparison. `tolerance` is `None` for measurements
/// that are reported without being asserted; those always pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub suite: String,
    pub instance: String,
    pub oracle: f64,
    pub subject: f64,
    pub gap: f64,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl OracleReport {
    pub fn new(
        suite: &str,
        instance: impl Into<String>,
        oracle: f64,
        subject: f64,
        gap: f64,
        tolerance: Option<f64>,
    ) -> Self {
        let pass = match tolerance {
            Some(t) => gap <= t,
            None => true,
        };
        OracleReport { suite: suite.to_string(), instance: instance.into(), oracle, subject, gap, tolerance, pass }
    }
}

/// Stirling number of the second kind, `S(n, k)`, saturating at `u128::MAX`.
pub fn stirling2(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = (j as u128).saturating_mul(row[j]).saturating_add(row[j - 1]);
        }
        row[0] = 0;
    }
    row[k]
}

/// Minimum-criterion partition into exactly `k` non-empty clusters, found by
/// enumerating restricted-growth strings. Ties keep the lexicographically
/// smallest assignment.
pub fn exact_optimum(table: &SymbolicTable, k: usize) -> Result<(Partition, f64)> {
    let n = table.len();
    if k < 1 || k > n {
        return Err(Error::InvalidArgument(format!("cannot split {n} units into {k} non-empty clusters")));
    }
    let count = stirling2(n, k);
    if count > MAX_PARTITIONS {
        return Err(Error::InstanceTooLarge { count, limit: MAX_PARTITIONS });
    }
    let mut rgs = vec![0usize; n];
    let mut best: Option<(Vec<usize>, f64)> = None;
    enumerate_rgs(&mut rgs, 1, 1, k, &mut |a| {
        let part = Partition::new(k, a.to_vec())?;
        let crit = median_criterion(table, &part)?;
        if best.as_ref().is_none_or(|b| crit < b.1) {
            best = Some((a.to_vec(), crit));
        }
        Ok(())
    })?;
    let (assignment, crit) = best.expect("k <= n admits at least one partition");
    Ok((Partition::new(k, assignment)?, crit))
}

// Lexicographic DFS over restricted-growth strings with exactly `k` blocks.
fn enumerate_rgs(
    rgs: &mut [usize],
    pos: usize,
    blocks: usize,
    k: usize,
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    let n = rgs.len();
    if pos == n {
        return if blocks == k { visit(rgs) } else { Ok(()) };
    }
    let remaining = n - pos;
    for v in 0..=blocks.min(k - 1) {
        let b = if v == blocks { blocks + 1 } else { blocks };
        if k - b.min(k) > remaining - 1 {
            continue;
        }
        rgs[pos] = v;
        enumerate_rgs(rgs, pos + 1, b, k, visit)?;
    }
    Ok(())
}

fn variable_adequacy(members: &[&SymbolicUnit], z: usize, center: f64, radius: f64, vertex_count: usize) -> f64 {
    let g = Polygon::new(center, radius.max(0.0), vertex_count).expect("finite candidate");
    members.iter().map(|m| polygon_distance(&m.polygons[z], &g).expect("shared vertex count")).sum()
}

/// Prototype found by grid search over `[min c, max c] × [min r, max r]` per
/// variable, refined by coordinate descent until the step drops below 1e-6.
pub fn grid_prototype_search(
    members: &[&SymbolicUnit],
    center_resolution: f64,
    radius_resolution: f64,
) -> Result<Prototype> {
    let first = members.first().ok_or(Error::EmptyCluster)?;
    if !(center_resolution > 0.0 && radius_resolution > 0.0) {
        return Err(Error::InvalidArgument("grid resolutions must be positive".into()));
    }
    let p = first.polygons.len();
    let l = first.polygons.first().map_or(3, Polygon::vertex_count);
    let mut params = Vec::with_capacity(p);
    for z in 0..p {
        let (c_lo, c_hi) = span(members.iter().map(|m| m.polygons[z].center()));
        let (r_lo, r_hi) = span(members.iter().map(|m| m.polygons[z].radius()));
        let f = |c: f64, r: f64| variable_adequacy(members, z, c, r, l);

        let mut best = (c_lo, r_lo, f(c_lo, r_lo));
        let nc = ((c_hi - c_lo) / center_resolution).ceil() as usize;
        let nr = ((r_hi - r_lo) / radius_resolution).ceil() as usize;
        for i in 0..=nc {
            let c = (c_lo + i as f64 * center_resolution).min(c_hi);
            for j in 0..=nr {
                let r = (r_lo + j as f64 * radius_resolution).min(r_hi);
                let v = f(c, r);
                if v < best.2 {
                    best = (c, r, v);
                }
            }
        }

        let mut step_c = center_resolution;
        let mut step_r = radius_resolution;
        while step_c >= 1e-6 || step_r >= 1e-6 {
            let (c, r, _) = best;
            let candidates = [(c + step_c, r), (c - step_c, r), (c, r + step_r), (c, (r - step_r).max(0.0))];
            let mut improved = false;
            for (cc, rr) in candidates {
                let vv = f(cc, rr);
                if vv < best.2 {
                    best = (cc, rr, vv);
                    improved = true;
                }
            }
            if !improved {
                step_c *= 0.5;
                step_r *= 0.5;
            }
        }
        params.push((best.0, best.1));
    }
    Prototype::new(params, l)
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// `max_l (|cos(2πl/L)| + |sin(2πl/L)|)`, evaluated directly.
pub fn kappa(vertex_count: usize) -> f64 {
    (1..=vertex_count)
        .map(|l| {
            let t = 2.0 * std::f64::consts::PI * l as f64 / vertex_count as f64;
            t.cos().abs() + t.sin().abs()
        })
        .fold(0.0, f64::max)
}

/// `2|Δc| + κ_L |Δr|`, valid when `L` is a multiple of 4.
pub fn closed_form_distance(c1: f64, r1: f64, c2: f64, r2: f64, vertex_count: usize) -> Result<f64> {
    if vertex_count < 4 || !vertex_count.is_multiple_of(4) {
        return Err(Error::InvalidArgument(format!("closed form needs L divisible by 4, got {vertex_count}")));
    }
    Ok(2.0 * (c1 - c2).abs() + kappa(vertex_count) * (r1 - r2).abs())
}

fn choose2(x: u64) -> f64 {
    (x as f64) * (x.saturating_sub(1) as f64) / 2.0
}

/// Adjusted Rand index between two labelings of the same units.
///
/// When the expected index equals its maximum (e.g. both sides a single
/// cluster, or both all singletons) the index is undefined; it is pinned to
/// 1.0 for identical partitions and 0.0 otherwise.
pub fn adjusted_rand_index_labels(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!("labelings cover {} and {} units", a.len(), b.len())));
    }
    let n = a.len();
    let ka = a.iter().max().map_or(0, |m| m + 1);
    let kb = b.iter().max().map_or(0, |m| m + 1);
    let mut table = vec![0u64; ka * kb];
    let mut rows = vec![0u64; ka];
    let mut cols = vec![0u64; kb];
    for (&x, &y) in a.iter().zip(b) {
        table[x * kb + y] += 1;
        rows[x] += 1;
        cols[y] += 1;
    }
    let index: f64 = table.iter().map(|&c| choose2(c)).sum();
    let sum_a: f64 = rows.iter().map(|&c| choose2(c)).sum();
    let sum_b: f64 = cols.iter().map(|&c| choose2(c)).sum();
    let total = choose2(n as u64);
    let expected = if total > 0.0 { sum_a * sum_b / total } else { 0.0 };
    let max_index = 0.5 * (sum_a + sum_b);
    let denom = max_index - expected;
    if denom == 0.0 {
        return Ok(if same_partition(a, b) { 1.0 } else { 0.0 });
    }
    Ok((index - expected) / denom)
}

fn same_partition(a: &[usize], b: &[usize]) -> bool {
    let canon = |x: &[usize]| {
        let mut map = std::collections::HashMap::new();
        x.iter()
            .map(|v| {
                let next = map.len();
                *map.entry(*v).or_insert(next)
            })
            .collect::<Vec<_>>()
    };
    canon(a) == canon(b)
}

pub fn adjusted_rand_index(a: &Partition, b: &Partition) -> Result<f64> {
    adjusted_rand_index_labels(a.assignment(), b.assignment())
}

/// Monte Carlo estimate of the integral of the empirical density over the
/// bounding box of `set`.
pub fn mc_pdf_integral(set: &PolygonSet, samples: usize, seed: u64) -> Result<f64> {
    if samples < 10_000 {
        return Err(Error::InvalidArgument(format!("at least 10000 samples required, got {samples}")));
    }
    let density = Density::new(set)?;
    let (lo, hi) = bounding_box(set)?;
    let (w, h) = (hi.x - lo.x, hi.y - lo.y);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    for _ in 0..samples {
        let q = Point::new(lo.x + w * rng.gen::<f64>(), lo.y + h * rng.gen::<f64>());
        sum += density.eval(q);
    }
    Ok(sum / samples as f64 * w * h)
}

/// Convex-hull membership by cross-product signs (monotone-chain hull, boundary inclusive).
pub fn hull_contains(vertices: &[Point], q: Point, tol: f64) -> bool {
    let hull = convex_hull(vertices);
    if hull.len() < 3 {
        return hull.iter().any(|v| (v.x - q.x).abs() <= tol && (v.y - q.y).abs() <= tol);
    }
    (0..hull.len()).all(|i| {
        let a = hull[i];
        let b = hull[(i + 1) % hull.len()];
        (b.x - a.x) * (q.y - a.y) - (b.y - a.y) * (q.x - a.x) >= -tol
    })
}

fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: Point, a: Point, b: Point| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Exhaustive scan for a single-unit reassignment that strictly lowers the
/// median criterion. Units in singleton clusters are not moved. Returns the
/// first `(unit, target, criterion)` found.
pub fn improving_single_move(table: &SymbolicTable, part: &Partition) -> Result<Option<(usize, usize, f64)>> {
    let current = median_criterion(table, part)?;
    let sizes: Vec<usize> = part.clusters().iter().map(Vec::len).collect();
    for s in 0..part.len() {
        let m = part.assignment()[s];
        if sizes[m] == 1 {
            continue;
        }
        for l in (0..part.k()).filter(|&l| l != m) {
            let mut a = part.assignment().to_vec();
            a[s] = l;
            let crit = median_criterion(table, &Partition::new(part.k(), a)?)?;
            if crit < current {
                return Ok(Some((s, l, crit)));
            }
        }
    }
    Ok(None)
}
