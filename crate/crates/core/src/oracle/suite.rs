//! The oracle suites behind `verify`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::generate::{planted_table, random_polygon, random_solid_polygon, random_table, random_units};
use super::{
    adjusted_rand_index_labels, closed_form_distance, exact_optimum, grid_prototype_search, mc_pdf_integral,
    OracleReport,
};
use crate::aggregation::{SymbolicTable, SymbolicUnit};
use crate::clustering::{adequacy, cluster, compute_prototype, restart_rng, ClusteringConfig};
use crate::error::{Error, Result};
use crate::metric::polygon_distance;
use crate::polygon::{empirical_pdf, make_polygon, Point, Polygon, PolygonSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Metric,
    Prototype,
    Pdf,
    Optimum,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "metric" => Ok(Suite::Metric),
            "prototype" => Ok(Suite::Prototype),
            "pdf" => Ok(Suite::Pdf),
            "optimum" => Ok(Suite::Optimum),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidArgument(format!("unknown suite {other:?}"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Metric => "metric",
            Suite::Prototype => "prototype",
            Suite::Pdf => "pdf",
            Suite::Optimum => "optimum",
            Suite::All => "all",
        })
    }
}

/// Sizes of the randomized checks.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub metric_triples: usize,
    pub closed_form_draws: usize,
    pub prototype_clusters: usize,
    pub pdf_sets: usize,
    pub pdf_samples: usize,
    pub optimum_instances: usize,
}

impl SuiteConfig {
    pub fn new(seed: u64) -> Self {
        SuiteConfig {
            seed,
            metric_triples: 1000,
            closed_form_draws: 10_000,
            prototype_clusters: 200,
            pdf_sets: 10,
            pdf_samples: 1_000_000,
            optimum_instances: 20,
        }
    }
}

pub fn run(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<OracleReport>> {
    Ok(match suite {
        Suite::Metric => metric_suite(cfg),
        Suite::Prototype => prototype_suite(cfg)?,
        Suite::Pdf => pdf_suite(cfg)?,
        Suite::Optimum => optimum_suite(cfg)?,
        Suite::All => {
            let mut all = metric_suite(cfg);
            all.extend(prototype_suite(cfg)?);
            all.extend(pdf_suite(cfg)?);
            all.extend(optimum_suite(cfg)?);
            all
        }
    })
}

/// Worst-case deviations from the metric axioms over random triples.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AxiomGaps {
    pub symmetry: f64,
    pub self_distance: f64,
    pub triangle: f64,
}

pub fn metric_axiom_gaps<R: Rng + ?Sized>(rng: &mut R, vertex_count: usize, triples: usize) -> AxiomGaps {
    let mut gaps = AxiomGaps::default();
    let d = |a: &Polygon, b: &Polygon| polygon_distance(a, b).expect("shared vertex count");
    for _ in 0..triples {
        let [p, q, r] = [(); 3].map(|_| random_polygon(rng, vertex_count));
        let (pq, qr, pr) = (d(&p, &q), d(&q, &r), d(&p, &r));
        gaps.symmetry = gaps.symmetry.max((pq - d(&q, &p)).abs());
        gaps.self_distance = gaps.self_distance.max(d(&p, &p));
        gaps.triangle = gaps.triangle.max(pr - (pq + qr));
    }
    gaps
}

/// Largest `|closed form − direct|` over random parameter draws.
pub fn closed_form_gap<R: Rng + ?Sized>(rng: &mut R, vertex_count: usize, draws: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..draws {
        let p = random_polygon(rng, vertex_count);
        let q = random_polygon(rng, vertex_count);
        let direct = polygon_distance(&p, &q).expect("shared vertex count");
        let closed = closed_form_distance(p.center(), p.radius(), q.center(), q.radius(), vertex_count)
            .expect("L divisible by 4");
        worst = worst.max((direct - closed).abs());
    }
    worst
}

fn metric_suite(cfg: &SuiteConfig) -> Vec<OracleReport> {
    let mut out = Vec::new();
    for (i, &l) in [3usize, 4, 5, 8, 12].iter().enumerate() {
        let g = metric_axiom_gaps(&mut restart_rng(cfg.seed, 100 + i), l, cfg.metric_triples);
        let inst = |what: &str| format!("{what} L={l} triples={}", cfg.metric_triples);
        out.push(OracleReport::new("metric", inst("symmetry"), 0.0, g.symmetry, g.symmetry, Some(0.0)));
        out.push(OracleReport::new("metric", inst("self-distance"), 0.0, g.self_distance, g.self_distance, Some(0.0)));
        out.push(OracleReport::new("metric", inst("triangle"), 0.0, g.triangle, g.triangle.max(0.0), Some(1e-9)));
    }
    for (i, &l) in [4usize, 8, 12, 16].iter().enumerate() {
        let gap = closed_form_gap(&mut restart_rng(cfg.seed, 200 + i), l, cfg.closed_form_draws);
        out.push(OracleReport::new(
            "metric",
            format!("closed-form L={l} draws={}", cfg.closed_form_draws),
            0.0,
            gap,
            gap,
            Some(1e-12),
        ));
    }
    let square = polygon_distance(&make_polygon(0.0, 1.0, 4).unwrap(), &make_polygon(1.0, 1.0, 4).unwrap()).unwrap();
    out.push(OracleReport::new("metric", "unit squares shifted by 1", 2.0, square, (square - 2.0).abs(), Some(0.0)));
    let oct = polygon_distance(&make_polygon(0.0, 1.0, 8).unwrap(), &make_polygon(0.0, 2.0, 8).unwrap()).unwrap();
    let sqrt2 = std::f64::consts::SQRT_2;
    out.push(OracleReport::new("metric", "octagons radius gap 1", sqrt2, oct, (oct - sqrt2).abs(), Some(0.0)));
    out
}

/// `adequacy(median prototype) − adequacy(grid-search prototype)` for one cluster.
pub fn prototype_gap(members: &[&SymbolicUnit]) -> Result<(f64, f64)> {
    let median = compute_prototype(members)?;
    let subject = adequacy(members, &median)?;
    // resolution: 20 cells across each parameter range
    let spread = |f: &dyn Fn(&SymbolicUnit) -> Vec<f64>| {
        let all: Vec<f64> = members.iter().flat_map(|m| f(m)).collect();
        let lo = all.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = all.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        ((hi - lo) / 20.0).max(1e-3)
    };
    let c_res = spread(&|m| m.polygons.iter().map(|p| p.center()).collect());
    let r_res = spread(&|m| m.polygons.iter().map(|p| p.radius()).collect());
    let grid = grid_prototype_search(members, c_res, r_res)?;
    let oracle = adequacy(members, &grid)?;
    Ok((oracle, subject))
}

fn prototype_suite(cfg: &SuiteConfig) -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();
    for (i, &l) in [4usize, 8, 3, 5, 6].iter().enumerate() {
        let mut rng = restart_rng(cfg.seed, 300 + i);
        let mut worst = (f64::NEG_INFINITY, 0.0, 0.0);
        for c in 0..cfg.prototype_clusters {
            let size = rng.gen_range(1..=15);
            let p = if c % 2 == 0 { 1 } else { 3 };
            let units = random_units(&mut rng, size, p, l);
            let refs: Vec<&SymbolicUnit> = units.iter().collect();
            let (oracle, subject) = prototype_gap(&refs)?;
            if subject - oracle > worst.0 {
                worst = (subject - oracle, oracle, subject);
            }
        }
        let asserted = l % 4 == 0;
        let inst = format!(
            "median vs grid adequacy L={l} clusters={}{}",
            cfg.prototype_clusters,
            if asserted { "" } else { " (measured only)" }
        );
        out.push(OracleReport::new("prototype", inst, worst.1, worst.2, worst.0, asserted.then_some(1e-9)));
    }
    Ok(out)
}

fn pdf_suite(cfg: &SuiteConfig) -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();
    for i in 0..cfg.pdf_sets {
        let mut rng = restart_rng(cfg.seed, 400 + i);
        let l = if i % 2 == 0 { 4 } else { 8 };
        let m = rng.gen_range(1..=50);
        let set = PolygonSet::new((0..m).map(|_| random_solid_polygon(&mut rng, l)).collect())?;
        let est = mc_pdf_integral(&set, cfg.pdf_samples, cfg.seed.wrapping_add(i as u64))?;
        out.push(OracleReport::new(
            "pdf",
            format!("integral m={m} L={l} samples={}", cfg.pdf_samples),
            1.0,
            est,
            (est - 1.0).abs(),
            Some(0.02),
        ));
    }
    let single = PolygonSet::new(vec![make_polygon(0.0, 1.0, 4)?])?;
    let v = empirical_pdf(&single, Point::new(0.0, 0.0))?;
    out.push(OracleReport::new("pdf", "single square at circumcenter", 0.5, v, (v - 0.5).abs(), Some(0.0)));
    Ok(out)
}

/// The six-unit planted example: two tight groups of three around 0 and 10.
pub fn planted_example(vertex_count: usize, replicas: usize) -> SymbolicTable {
    let centers = [0.0, 0.1, 0.2, 10.0, 10.1, 10.2];
    SymbolicTable::from_params(
        (0..replicas).map(|z| format!("x{z}")).collect(),
        vertex_count,
        centers.iter().enumerate().map(|(i, &c)| (format!("u{i}"), vec![(c, 1.0); replicas])).collect(),
    )
    .expect("valid planted table")
}

fn optimum_suite(cfg: &SuiteConfig) -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();
    let mut matches = 0;
    for i in 0..cfg.optimum_instances {
        let mut rng = restart_rng(cfg.seed, 500 + i);
        let n = rng.gen_range(4..=10);
        let p = rng.gen_range(1..=2);
        let l = [4, 8, 5][i % 3];
        let table = random_table(&mut rng, n, p, l);
        let (_, exact) = exact_optimum(&table, 2)?;
        let res = cluster(
            &table,
            &ClusteringConfig { k: 2, seed: cfg.seed.wrapping_add(i as u64), restarts: 20, max_passes: 100 },
        )?;
        if (res.criterion - exact).abs() <= 1e-9 {
            matches += 1;
        }
        out.push(OracleReport::new(
            "optimum",
            format!("not below exact optimum n={n} p={p} L={l}"),
            exact,
            res.criterion,
            (exact - res.criterion).max(0.0),
            Some(1e-9),
        ));
    }
    let need = (cfg.optimum_instances * 9).div_ceil(10);
    out.push(OracleReport::new(
        "optimum",
        format!("instances matching exact optimum (need {need} of {})", cfg.optimum_instances),
        need as f64,
        matches as f64,
        need.saturating_sub(matches) as f64,
        Some(0.0),
    ));

    for replicas in [1, 3] {
        let table = planted_example(4, replicas);
        let truth = [0, 0, 0, 1, 1, 1];
        let expected = 0.8 * replicas as f64;
        let mut worst_ari: f64 = 1.0;
        let mut worst_crit: f64 = 0.0;
        for seed in 0..20 {
            let res = cluster(&table, &ClusteringConfig { k: 2, seed, restarts: 5, max_passes: 100 })?;
            worst_ari = worst_ari.min(adjusted_rand_index_labels(res.partition.assignment(), &truth)?);
            worst_crit = worst_crit.max((res.criterion - expected).abs());
        }
        out.push(OracleReport::new(
            "optimum",
            format!("planted ARI p={replicas} seeds=20"),
            1.0,
            worst_ari,
            1.0 - worst_ari,
            Some(0.0),
        ));
        out.push(OracleReport::new(
            "optimum",
            format!("planted criterion p={replicas} seeds=20"),
            expected,
            expected + worst_crit,
            worst_crit,
            Some(1e-9),
        ));
    }

    let mut rng = restart_rng(cfg.seed, 600);
    let (table, labels) = planted_table(&mut rng, 24, 3, 2, 8);
    let res = cluster(&table, &ClusteringConfig { k: 3, seed: cfg.seed, restarts: 10, max_passes: 100 })?;
    let ari = adjusted_rand_index_labels(res.partition.assignment(), &labels)?;
    out.push(OracleReport::new("optimum", "separated 3-group recovery n=24", 1.0, ari, 1.0 - ari, Some(0.0)));
    Ok(out)
}
