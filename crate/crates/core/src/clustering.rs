//! Median prototypes and the dynamic allocation algorithm.
//!
//! A cluster's prototype holds, per variable, the median of its members'
//! centers and the median of their radii. The criterion is the sum over
//! clusters of each cluster's adequacy, the total cumulative distance from
//! its members to its prototype. Allocation visits units in index order and
//! moves a unit to another cluster whenever that strictly lowers the
//! criterion, recomputing the two affected prototypes immediately.

use log::warn;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::aggregation::{SymbolicTable, SymbolicUnit};
use crate::error::{Error, Result};
use crate::metric::unit_distance_unchecked;
use crate::polygon::Polygon;

/// Middle order statistic; midpoint of the two middle values for even length.
pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyList);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Ok(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

/// Per-variable `(center, radius)` of a cluster representative, with the
/// polygons materialized at the table's vertex count.
#[derive(Debug, Clone, PartialEq)]
pub struct Prototype {
    params: Vec<(f64, f64)>,
    polygons: Vec<Polygon>,
}

impl Prototype {
    pub fn new(params: Vec<(f64, f64)>, vertex_count: usize) -> Result<Self> {
        let polygons = params.iter().map(|&(c, r)| Polygon::new(c, r, vertex_count)).collect::<Result<_>>()?;
        Ok(Prototype { params, polygons })
    }

    /// `(μ, λ)` per variable.
    pub fn params(&self) -> &[(f64, f64)] {
        &self.params
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }
}

fn check_members(members: &[&SymbolicUnit]) -> Result<(usize, usize)> {
    let first = members.first().ok_or(Error::EmptyCluster)?;
    let p = first.polygons.len();
    let l = first.polygons.first().map_or(0, Polygon::vertex_count);
    for m in members {
        if m.polygons.len() != p {
            return Err(Error::DimensionMismatch { left: m.polygons.len(), right: p });
        }
        if let Some(poly) = m.polygons.iter().find(|poly| poly.vertex_count() != l) {
            return Err(Error::VertexCountMismatch { left: poly.vertex_count(), right: l });
        }
    }
    Ok((p, l))
}

/// Median of centers and median of radii, variable by variable.
pub fn compute_prototype(members: &[&SymbolicUnit]) -> Result<Prototype> {
    let (p, l) = check_members(members)?;
    Ok(median_prototype(members, p, l))
}

fn median_prototype(members: &[&SymbolicUnit], p: usize, vertex_count: usize) -> Prototype {
    let mut centers = Vec::with_capacity(members.len());
    let mut radii = Vec::with_capacity(members.len());
    let params = (0..p)
        .map(|z| {
            centers.clear();
            radii.clear();
            for m in members {
                centers.push(m.polygons[z].center());
                radii.push(m.polygons[z].radius());
            }
            // non-empty members and finite polygon parameters
            (median(&centers).unwrap(), median(&radii).unwrap())
        })
        .collect();
    Prototype::new(params, vertex_count).expect("medians of valid polygons form a valid prototype")
}

/// Total cumulative distance from `members` to `proto`.
pub fn adequacy(members: &[&SymbolicUnit], proto: &Prototype) -> Result<f64> {
    for m in members {
        if m.polygons.len() != proto.polygons.len() {
            return Err(Error::DimensionMismatch { left: m.polygons.len(), right: proto.polygons.len() });
        }
        for (a, b) in m.polygons.iter().zip(&proto.polygons) {
            if a.vertex_count() != b.vertex_count() {
                return Err(Error::VertexCountMismatch { left: a.vertex_count(), right: b.vertex_count() });
            }
        }
    }
    Ok(adequacy_unchecked(members, proto))
}

fn adequacy_unchecked(members: &[&SymbolicUnit], proto: &Prototype) -> f64 {
    members.iter().map(|m| unit_distance_unchecked(&m.polygons, &proto.polygons)).sum()
}

/// Assignment of every unit to one of `k` clusters (0-based indices).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    k: usize,
    assignment: Vec<usize>,
}

impl Partition {
    /// Validates labels (`< k`) and that no cluster is empty.
    pub fn new(k: usize, assignment: Vec<usize>) -> Result<Self> {
        let part = Partition { k, assignment };
        part.validate()?;
        Ok(part)
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InconsistentPartition("k must be positive".into()));
        }
        let mut sizes = vec![0usize; self.k];
        for (s, &c) in self.assignment.iter().enumerate() {
            if c >= self.k {
                return Err(Error::InconsistentPartition(format!(
                    "unit {s} assigned to cluster {c} >= k = {}",
                    self.k
                )));
            }
            sizes[c] += 1;
        }
        if let Some(c) = sizes.iter().position(|&n| n == 0) {
            return Err(Error::InconsistentPartition(format!("cluster {c} is empty")));
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Member indices per cluster, ascending.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (s, &c) in self.assignment.iter().enumerate() {
            out[c].push(s);
        }
        out
    }

    /// The partition as a set of sets, in canonical order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut b = self.clusters();
        b.sort();
        b
    }
}

fn members_of<'a>(table: &'a SymbolicTable, idx: &[usize]) -> Vec<&'a SymbolicUnit> {
    idx.iter().map(|&i| &table.units()[i]).collect()
}

fn check_partition(table: &SymbolicTable, part: &Partition) -> Result<()> {
    if part.len() != table.len() {
        return Err(Error::InconsistentPartition(format!(
            "partition covers {} units, table has {}",
            part.len(),
            table.len()
        )));
    }
    part.validate()
}

/// Σ over clusters of adequacy against the given prototypes.
pub fn global_criterion(table: &SymbolicTable, part: &Partition, protos: &[Prototype]) -> Result<f64> {
    check_partition(table, part)?;
    if protos.len() != part.k() {
        return Err(Error::InconsistentPartition(format!("{} prototypes for k = {}", protos.len(), part.k())));
    }
    let mut total = 0.0;
    for (idx, proto) in part.clusters().iter().zip(protos) {
        total += adequacy(&members_of(table, idx), proto)?;
    }
    Ok(total)
}

/// Median prototypes of every cluster.
pub fn prototypes_for(table: &SymbolicTable, part: &Partition) -> Result<Vec<Prototype>> {
    check_partition(table, part)?;
    Ok(part
        .clusters()
        .iter()
        .map(|idx| median_prototype(&members_of(table, idx), table.variables().len(), table.vertex_count()))
        .collect())
}

/// Criterion of `part` with freshly computed median prototypes.
pub fn median_criterion(table: &SymbolicTable, part: &Partition) -> Result<f64> {
    let protos = prototypes_for(table, part)?;
    global_criterion(table, part, &protos)
}

/// Mutable state of one allocation run.
#[derive(Debug, Clone)]
pub struct ClusterState<'a> {
    table: &'a SymbolicTable,
    assignment: Vec<usize>,
    members: Vec<Vec<usize>>,
    prototypes: Vec<Prototype>,
    adequacies: Vec<f64>,
    criterion: f64,
}

impl<'a> ClusterState<'a> {
    pub fn new(table: &'a SymbolicTable, part: &Partition) -> Result<Self> {
        check_partition(table, part)?;
        let members = part.clusters();
        let (prototypes, adequacies) = members.iter().map(|idx| cluster_fit(table, idx)).unzip();
        let mut state = ClusterState {
            table,
            assignment: part.assignment().to_vec(),
            members,
            prototypes,
            adequacies,
            criterion: 0.0,
        };
        state.criterion = state.sum_with(None);
        Ok(state)
    }

    pub fn criterion(&self) -> f64 {
        self.criterion
    }

    pub fn prototypes(&self) -> &[Prototype] {
        &self.prototypes
    }

    pub fn partition(&self) -> Partition {
        Partition { k: self.members.len(), assignment: self.assignment.clone() }
    }

    /// Criterion with up to two clusters' adequacies replaced, summed in cluster order.
    fn sum_with(&self, replace: Option<[(usize, f64); 2]>) -> f64 {
        let mut total = 0.0;
        for (i, &a) in self.adequacies.iter().enumerate() {
            total += match replace {
                Some([(m, am), _]) if m == i => am,
                Some([_, (l, al)]) if l == i => al,
                _ => a,
            };
        }
        total
    }

    /// One pass over all units; returns the number of moves.
    pub fn allocate_pass(&mut self) -> usize {
        self.allocate_pass_with(&mut |_| {})
    }

    /// As [`allocate_pass`](Self::allocate_pass), calling `on_move` after every accepted move.
    pub fn allocate_pass_with(&mut self, on_move: &mut dyn FnMut(&ClusterState<'a>)) -> usize {
        let mut moves = 0;
        for s in 0..self.assignment.len() {
            let m = self.assignment[s];
            if self.members[m].len() == 1 {
                continue;
            }
            let without: Vec<usize> = self.members[m].iter().copied().filter(|&i| i != s).collect();
            let (proto_m, adeq_m) = cluster_fit(self.table, &without);

            let mut best: Option<(usize, f64, Vec<usize>, Prototype, f64)> = None;
            for l in (0..self.members.len()).filter(|&l| l != m) {
                let with = insert_sorted(&self.members[l], s);
                let (proto_l, adeq_l) = cluster_fit(self.table, &with);
                let delta = self.sum_with(Some([(m, adeq_m), (l, adeq_l)]));
                if best.as_ref().is_none_or(|b| delta < b.1) {
                    best = Some((l, delta, with, proto_l, adeq_l));
                }
            }
            let Some((l, delta, with, proto_l, adeq_l)) = best else { continue };
            if delta < self.criterion {
                self.assignment[s] = l;
                self.members[m] = without.clone();
                self.members[l] = with;
                self.prototypes[m] = proto_m.clone();
                self.prototypes[l] = proto_l;
                self.adequacies[m] = adeq_m;
                self.adequacies[l] = adeq_l;
                self.criterion = delta;
                moves += 1;
                on_move(self);
            }
        }
        moves
    }
}

fn insert_sorted(idx: &[usize], s: usize) -> Vec<usize> {
    let mut v = Vec::with_capacity(idx.len() + 1);
    let pos = idx.partition_point(|&i| i < s);
    v.extend_from_slice(&idx[..pos]);
    v.push(s);
    v.extend_from_slice(&idx[pos..]);
    v
}

fn cluster_fit(table: &SymbolicTable, idx: &[usize]) -> (Prototype, f64) {
    let members = members_of(table, idx);
    let proto = median_prototype(&members, table.variables().len(), table.vertex_count());
    let adeq = adequacy_unchecked(&members, &proto);
    (proto, adeq)
}

/// Functional form of one allocation pass: returns the new partition, its
/// prototypes and the number of moves. `protos` must be the median
/// prototypes of `part`.
pub fn allocate_pass(
    table: &SymbolicTable,
    part: &Partition,
    protos: &[Prototype],
) -> Result<(Partition, Vec<Prototype>, usize)> {
    let mut state = ClusterState::new(table, part)?;
    if protos != state.prototypes() {
        return Err(Error::InconsistentPartition("prototypes are not the median prototypes of the partition".into()));
    }
    let moves = state.allocate_pass();
    Ok((state.partition(), state.prototypes, moves))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusteringConfig {
    pub k: usize,
    pub seed: u64,
    pub restarts: usize,
    pub max_passes: usize,
}

impl ClusteringConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        ClusteringConfig { k, seed, restarts: 20, max_passes: 100 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    pub partition: Partition,
    pub prototypes: Vec<Prototype>,
    pub criterion: f64,
    /// Criterion of the initial partition followed by one entry per accepted move.
    pub trace: Vec<f64>,
    pub passes: usize,
    pub seed: u64,
    /// Index of the restart that produced this result.
    pub restart: usize,
    pub hit_max_passes: bool,
}

/// Random partition with every cluster non-empty: `k` distinct units seed the
/// clusters, every other unit picks a cluster uniformly.
pub fn random_partition<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Partition> {
    if k < 1 || k > n {
        return Err(Error::InvalidArgument(format!("cannot split {n} units into {k} non-empty clusters")));
    }
    let seeds = sample(rng, n, k);
    let mut assignment = vec![usize::MAX; n];
    for (c, s) in seeds.iter().enumerate() {
        assignment[s] = c;
    }
    for a in assignment.iter_mut().filter(|a| **a == usize::MAX) {
        *a = rng.gen_range(0..k);
    }
    Partition::new(k, assignment)
}

/// RNG for restart `restart` under `seed`.
pub fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

/// Runs allocation passes from `initial` until a pass makes no move or
/// `max_passes` is reached.
pub fn cluster_from(table: &SymbolicTable, initial: &Partition, max_passes: usize) -> Result<ClusteringResult> {
    cluster_from_with(table, initial, max_passes, &mut |_| {})
}

/// As [`cluster_from`], calling `on_move` after every accepted move.
pub fn cluster_from_with<'a>(
    table: &'a SymbolicTable,
    initial: &Partition,
    max_passes: usize,
    on_move: &mut dyn FnMut(&ClusterState<'a>),
) -> Result<ClusteringResult> {
    if max_passes < 1 {
        return Err(Error::InvalidArgument("max_passes must be at least 1".into()));
    }
    let mut state = ClusterState::new(table, initial)?;
    let mut trace = vec![state.criterion()];
    let mut passes = 0;
    let mut converged = false;
    while passes < max_passes {
        passes += 1;
        let moves = state.allocate_pass_with(&mut |st| {
            trace.push(st.criterion());
            on_move(st);
        });
        if moves == 0 {
            converged = true;
            break;
        }
    }
    if !converged {
        warn!("allocation stopped after {max_passes} passes without converging");
    }
    Ok(ClusteringResult {
        partition: state.partition(),
        criterion: state.criterion(),
        prototypes: state.prototypes,
        trace,
        passes,
        seed: 0,
        restart: 0,
        hit_max_passes: !converged,
    })
}

/// Dynamic clustering with `cfg.restarts` random starts; keeps the lowest
/// final criterion (ties go to the lowest restart index).
pub fn cluster(table: &SymbolicTable, cfg: &ClusteringConfig) -> Result<ClusteringResult> {
    let n = table.len();
    if cfg.k < 2 {
        return Err(Error::InvalidArgument(format!("k must be at least 2, got {}", cfg.k)));
    }
    if cfg.k > n {
        return Err(Error::InvalidArgument(format!("k = {} exceeds the number of units {n}", cfg.k)));
    }
    if cfg.restarts < 1 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    let runs: Vec<ClusteringResult> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let initial = random_partition(n, cfg.k, &mut restart_rng(cfg.seed, r))?;
            let mut res = cluster_from(table, &initial, cfg.max_passes)?;
            res.seed = cfg.seed;
            res.restart = r;
            Ok(res)
        })
        .collect::<Result<_>>()?;
    let best = runs
        .into_iter()
        .reduce(|best, r| if r.criterion < best.criterion { r } else { best })
        .expect("at least one restart");
    Ok(best)
}
