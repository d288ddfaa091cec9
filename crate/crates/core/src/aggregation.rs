//! Aggregation of classical microdata into polygon-valued symbolic units.
//!
//! Each class becomes one unit; each selected variable becomes one regular
//! polygon centered at the class mean with radius `2 × sd`.

use std::collections::{HashMap, HashSet};

use log::warn;

use crate::error::{Error, Result};
use crate::polygon::Polygon;

/// Default multiplier applied to the class standard deviation to obtain the radius.
pub const RADIUS_FACTOR: f64 = 2.0;

/// One analysis column after ingestion; `None` marks a missing cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub values: Vec<Option<f64>>,
    /// Set when the column was encoded from yes/no tokens.
    pub binary: bool,
}

/// Individuals × variables with a class label per individual.
#[derive(Debug, Clone, PartialEq)]
pub struct Microdata {
    class_key: String,
    classes: Vec<String>,
    columns: Vec<Column>,
}

impl Microdata {
    pub fn new(class_key: impl Into<String>, classes: Vec<String>, columns: Vec<Column>) -> Result<Self> {
        let class_key = class_key.into();
        let mut seen = HashSet::new();
        for c in &columns {
            if c.values.len() != classes.len() {
                return Err(Error::InvalidArgument(format!(
                    "column {:?} has {} values but there are {} rows",
                    c.name,
                    c.values.len(),
                    classes.len()
                )));
            }
            if c.name == class_key || !seen.insert(c.name.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate column {:?}", c.name)));
            }
            if c.values.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!("column {:?} has non-finite values", c.name)));
            }
        }
        Ok(Microdata { class_key, classes, columns })
    }

    pub fn class_key(&self) -> &str {
        &self.class_key
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn row_count(&self) -> usize {
        self.classes.len()
    }

    /// Class labels in order of first appearance.
    pub fn class_labels(&self) -> Vec<&str> {
        let mut seen = HashSet::new();
        self.classes.iter().filter(|c| seen.insert(c.as_str())).map(String::as_str).collect()
    }
}

/// Mean and sample standard deviation of one variable within one class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassStats {
    pub label: String,
    pub count: usize,
    pub mean: f64,
    pub sd: f64,
}

/// Mean and sample sd (denominator `n - 1`); a singleton class gets `sd = 0`.
///
/// Values are summed in sorted order so the result does not depend on row order.
pub fn class_stats(values: &[f64], label: &str) -> Result<ClassStats> {
    if values.is_empty() {
        return Err(Error::EmptyClass(label.to_string()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mean = sorted.iter().sum::<f64>() / n;
    let sd = if sorted.len() == 1 {
        0.0
    } else {
        let ss: f64 = sorted.iter().map(|v| (v - mean) * (v - mean)).sum();
        (ss / (n - 1.0)).sqrt()
    };
    Ok(ClassStats { label: label.to_string(), count: sorted.len(), mean, sd })
}

/// Maps yes → 1.0 and no → 0.0, so a class mean is the class's yes-proportion.
pub fn encode_binary<S: AsRef<str>>(values: &[S], yes: &str, no: &str) -> Result<Vec<f64>> {
    values
        .iter()
        .map(|v| {
            let v = v.as_ref();
            if v == yes {
                Ok(1.0)
            } else if v == no {
                Ok(0.0)
            } else {
                Err(Error::UnknownToken { token: v.to_string(), yes: yes.to_string(), no: no.to_string() })
            }
        })
        .collect()
}

/// A class described by one polygon per variable.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicUnit {
    pub label: String,
    pub polygons: Vec<Polygon>,
}

impl SymbolicUnit {
    pub fn new(label: impl Into<String>, polygons: Vec<Polygon>) -> Self {
        SymbolicUnit { label: label.into(), polygons }
    }

    /// Builds a unit from `(center, radius)` pairs.
    pub fn from_params(label: impl Into<String>, params: &[(f64, f64)], vertex_count: usize) -> Result<Self> {
        let polygons = params.iter().map(|&(c, r)| Polygon::new(c, r, vertex_count)).collect::<Result<_>>()?;
        Ok(SymbolicUnit { label: label.into(), polygons })
    }
}

/// Units sharing variable names and a global vertex count.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicTable {
    variables: Vec<String>,
    vertex_count: usize,
    units: Vec<SymbolicUnit>,
}

impl SymbolicTable {
    pub fn new(variables: Vec<String>, vertex_count: usize, units: Vec<SymbolicUnit>) -> Result<Self> {
        if vertex_count < 3 {
            return Err(Error::InvalidArgument(format!("vertex count must be at least 3, got {vertex_count}")));
        }
        let mut labels = HashSet::new();
        for u in &units {
            if u.polygons.len() != variables.len() {
                return Err(Error::DimensionMismatch { left: u.polygons.len(), right: variables.len() });
            }
            if let Some(p) = u.polygons.iter().find(|p| p.vertex_count() != vertex_count) {
                return Err(Error::VertexCountMismatch { left: p.vertex_count(), right: vertex_count });
            }
            if !labels.insert(u.label.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate unit label {:?}", u.label)));
            }
        }
        Ok(SymbolicTable { variables, vertex_count, units })
    }

    /// Table whose units are given directly as `(center, radius)` per variable.
    pub fn from_params(
        variables: Vec<String>,
        vertex_count: usize,
        units: Vec<(String, Vec<(f64, f64)>)>,
    ) -> Result<Self> {
        let units = units
            .into_iter()
            .map(|(label, params)| SymbolicUnit::from_params(label, &params, vertex_count))
            .collect::<Result<_>>()?;
        Self::new(variables, vertex_count, units)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn units(&self) -> &[SymbolicUnit] {
        &self.units
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn variable_index(&self, name: &str) -> Result<usize> {
        self.variables.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn unit(&self, label: &str) -> Result<&SymbolicUnit> {
        self.units.iter().find(|u| u.label == label).ok_or_else(|| Error::UnknownUnit(label.to_string()))
    }

    /// Same table with units reordered by `order` (a permutation of unit indices).
    pub fn permuted(&self, order: &[usize]) -> Self {
        SymbolicTable {
            variables: self.variables.clone(),
            vertex_count: self.vertex_count,
            units: order.iter().map(|&i| self.units[i].clone()).collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AggregateOptions {
    pub vertex_count: usize,
    pub radius_factor: f64,
}

impl AggregateOptions {
    pub fn new(vertex_count: usize) -> Self {
        AggregateOptions { vertex_count, radius_factor: RADIUS_FACTOR }
    }
}

/// Bookkeeping from an aggregation run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AggregationReport {
    /// Rows dropped per variable because the cell was missing.
    pub dropped: Vec<(String, usize)>,
    /// `(class, variable)` pairs aggregated from a single observation.
    pub singletons: Vec<(String, String)>,
}

/// Aggregates with the default radius factor of 2.
pub fn aggregate(data: &Microdata, variables: &[&str], vertex_count: usize) -> Result<SymbolicTable> {
    aggregate_with_report(data, variables, &AggregateOptions::new(vertex_count)).map(|(t, _)| t)
}

/// One unit per class (first-appearance order), one polygon per requested
/// variable (request order). Missing cells are dropped per variable.
pub fn aggregate_with_report(
    data: &Microdata,
    variables: &[&str],
    opts: &AggregateOptions,
) -> Result<(SymbolicTable, AggregationReport)> {
    if opts.vertex_count < 3 {
        return Err(Error::InvalidArgument(format!("vertex count must be at least 3, got {}", opts.vertex_count)));
    }
    if variables.is_empty() {
        return Err(Error::InvalidArgument("no variables selected".into()));
    }
    if !(opts.radius_factor.is_finite() && opts.radius_factor >= 0.0) {
        return Err(Error::InvalidArgument(format!("invalid radius factor {}", opts.radius_factor)));
    }
    let columns: Vec<&Column> = variables
        .iter()
        .map(|v| data.column(v).ok_or_else(|| Error::UnknownColumn(v.to_string())))
        .collect::<Result<_>>()?;

    let labels = data.class_labels();
    let class_index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let mut report = AggregationReport::default();
    let mut polygons: Vec<Vec<Polygon>> = vec![Vec::with_capacity(columns.len()); labels.len()];

    for col in &columns {
        let mut per_class: Vec<Vec<f64>> = vec![Vec::new(); labels.len()];
        let mut dropped = 0;
        for (class, value) in data.classes().iter().zip(&col.values) {
            match value {
                Some(v) => per_class[class_index[class.as_str()]].push(*v),
                None => dropped += 1,
            }
        }
        report.dropped.push((col.name.clone(), dropped));
        for (ci, values) in per_class.iter().enumerate() {
            if values.is_empty() {
                return Err(Error::EmptyClassForVariable { class: labels[ci].to_string(), variable: col.name.clone() });
            }
            let stats = class_stats(values, labels[ci])?;
            if stats.count == 1 {
                warn!("class {:?} has a single observation for {:?}; radius set to 0", labels[ci], col.name);
                report.singletons.push((labels[ci].to_string(), col.name.clone()));
            }
            polygons[ci].push(Polygon::new(stats.mean, opts.radius_factor * stats.sd, opts.vertex_count)?);
        }
    }

    let units = labels.iter().zip(polygons).map(|(l, p)| SymbolicUnit::new(*l, p)).collect();
    let table = SymbolicTable::new(variables.iter().map(|v| v.to_string()).collect(), opts.vertex_count, units)?;
    Ok((table, report))
}
