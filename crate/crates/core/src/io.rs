//! CSV ingestion and the versioned JSON file formats.

use std::fs;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::aggregation::{Column, Microdata, SymbolicTable, SymbolicUnit};
use crate::clustering::{ClusteringConfig, ClusteringResult};
use crate::error::{Error, Result};
use crate::oracle::OracleReport;
use crate::polygon::Polygon;

pub const FORMAT_VERSION: u32 = 1;

/// Yes/no tokens recognized in binary columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryTokens {
    pub yes: String,
    pub no: String,
}

impl Default for BinaryTokens {
    fn default() -> Self {
        BinaryTokens { yes: "yes".into(), no: "no".into() }
    }
}

/// Counts gathered while reading microdata.
#[derive(Debug, Clone, PartialEq)]
pub struct IngestReport {
    pub rows: usize,
    pub columns: usize,
    /// Empty cells per analysis column, in column order.
    pub missing: Vec<(String, usize)>,
    pub binary_columns: Vec<String>,
}

/// Reads a header-first CSV. The class column holds labels; every other
/// column is numeric, or binary when its first non-empty cell is a yes/no
/// token. Empty cells are missing. Rows are numbered from 1 after the header.
pub fn read_microdata_csv(path: &Path, class_column: &str, tokens: &BinaryTokens) -> Result<(Microdata, IngestReport)> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_microdata_csv(file, class_column, tokens)
}

pub fn parse_microdata_csv<R: Read>(
    reader: R,
    class_column: &str,
    tokens: &BinaryTokens,
) -> Result<(Microdata, IngestReport)> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let class_idx =
        headers.iter().position(|h| h == class_column).ok_or_else(|| Error::UnknownColumn(class_column.to_string()))?;

    #[derive(Clone, Copy, PartialEq)]
    enum Kind {
        Unknown,
        Numeric,
        Binary,
    }
    let mut kinds = vec![Kind::Unknown; headers.len()];
    let mut values: Vec<Vec<Option<f64>>> = vec![Vec::new(); headers.len()];
    let mut classes = Vec::new();

    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record?;
        for (j, cell) in record.iter().enumerate() {
            if j == class_idx {
                if cell.is_empty() {
                    return Err(Error::Parse {
                        row,
                        column: headers[j].clone(),
                        message: "missing class label".into(),
                    });
                }
                classes.push(cell.to_string());
                continue;
            }
            if cell.is_empty() {
                values[j].push(None);
                continue;
            }
            let is_token = cell == tokens.yes || cell == tokens.no;
            if kinds[j] == Kind::Unknown {
                kinds[j] = if is_token { Kind::Binary } else { Kind::Numeric };
            }
            let v = match kinds[j] {
                Kind::Binary if cell == tokens.yes => 1.0,
                Kind::Binary if cell == tokens.no => 0.0,
                Kind::Binary => {
                    return Err(Error::Parse {
                        row,
                        column: headers[j].clone(),
                        message: format!(
                            "unknown binary token {cell:?} (expected {:?} or {:?})",
                            tokens.yes, tokens.no
                        ),
                    })
                }
                _ => match cell.parse::<f64>() {
                    Ok(v) if v.is_finite() => v,
                    _ => {
                        return Err(Error::Parse {
                            row,
                            column: headers[j].clone(),
                            message: format!("malformed number {cell:?}"),
                        })
                    }
                },
            };
            values[j].push(Some(v));
        }
    }

    let rows = classes.len();
    let mut columns = Vec::new();
    let mut missing = Vec::new();
    let mut binary_columns = Vec::new();
    for (j, (name, vals)) in headers.iter().zip(values).enumerate() {
        if j == class_idx {
            continue;
        }
        missing.push((name.clone(), vals.iter().filter(|v| v.is_none()).count()));
        let binary = kinds[j] == Kind::Binary;
        if binary {
            binary_columns.push(name.clone());
        }
        columns.push(Column { name: name.clone(), values: vals, binary });
    }
    let report = IngestReport { rows, columns: headers.len(), missing, binary_columns };
    Ok((Microdata::new(class_column, classes, columns)?, report))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolygonRecord {
    center: f64,
    radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitRecord {
    label: String,
    vertex_count: usize,
    polygons: Vec<PolygonRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    format_version: u32,
    vertex_count: usize,
    variables: Vec<String>,
    units: Vec<UnitRecord>,
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema { path: path.into(), message: message.into() }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| schema(e.path().to_string(), e.inner().to_string()))
}

fn check_version(found: u32) -> Result<()> {
    if found != FORMAT_VERSION {
        return Err(Error::VersionMismatch { found, expected: FORMAT_VERSION });
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// Serializes a table; numbers use the shortest decimal that round-trips exactly.
pub fn table_to_string(table: &SymbolicTable) -> String {
    let file = TableFile {
        format_version: FORMAT_VERSION,
        vertex_count: table.vertex_count(),
        variables: table.variables().to_vec(),
        units: table
            .units()
            .iter()
            .map(|u| UnitRecord {
                label: u.label.clone(),
                vertex_count: table.vertex_count(),
                polygons: u.polygons.iter().map(|p| PolygonRecord { center: p.center(), radius: p.radius() }).collect(),
            })
            .collect(),
    };
    to_json(&file)
}

pub fn table_from_str(text: &str) -> Result<SymbolicTable> {
    let file: TableFile = parse_json(text)?;
    check_version(file.format_version)?;
    let l = file.vertex_count;
    if l < 3 {
        return Err(schema("vertex_count", format!("must be at least 3, got {l}")));
    }
    let p = file.variables.len();
    let mut units = Vec::with_capacity(file.units.len());
    for (i, u) in file.units.into_iter().enumerate() {
        if u.vertex_count != l {
            return Err(schema(
                format!("units[{i}].vertex_count"),
                format!("{} differs from table vertex_count {l}", u.vertex_count),
            ));
        }
        if u.polygons.len() != p {
            return Err(schema(
                format!("units[{i}].polygons"),
                format!("{} polygons for {p} variables", u.polygons.len()),
            ));
        }
        let polygons = u
            .polygons
            .iter()
            .enumerate()
            .map(|(z, rec)| {
                Polygon::new(rec.center, rec.radius, l)
                    .map_err(|e| schema(format!("units[{i}].polygons[{z}]"), e.to_string()))
            })
            .collect::<Result<_>>()?;
        units.push(SymbolicUnit::new(u.label, polygons));
    }
    SymbolicTable::new(file.variables, l, units).map_err(|e| schema("units", e.to_string()))
}

pub fn write_table(path: &Path, table: &SymbolicTable) -> Result<()> {
    fs::write(path, table_to_string(table)).map_err(|e| Error::io(path, e))
}

pub fn read_table(path: &Path) -> Result<SymbolicTable> {
    table_from_str(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigEcho {
    pub k: usize,
    pub seed: u64,
    pub restarts: usize,
    pub max_passes: usize,
    pub vertex_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assignment {
    pub label: String,
    /// 1-based cluster index.
    pub cluster: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrototypeParams {
    pub variable: String,
    pub center: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrototypeRecord {
    pub cluster: usize,
    pub size: usize,
    pub adequacy: f64,
    pub variables: Vec<PrototypeParams>,
}

/// On-disk form of a clustering run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultFile {
    pub format_version: u32,
    pub config: ConfigEcho,
    pub assignments: Vec<Assignment>,
    pub prototypes: Vec<PrototypeRecord>,
    pub criterion: f64,
    pub trace: Vec<f64>,
    pub passes: usize,
    pub restart: usize,
    pub hit_max_passes: bool,
}

impl ResultFile {
    pub fn new(table: &SymbolicTable, cfg: &ClusteringConfig, result: &ClusteringResult) -> Self {
        let clusters = result.partition.clusters();
        let prototypes = result
            .prototypes
            .iter()
            .enumerate()
            .map(|(c, proto)| {
                let members: Vec<&SymbolicUnit> = clusters[c].iter().map(|&i| &table.units()[i]).collect();
                PrototypeRecord {
                    cluster: c + 1,
                    size: members.len(),
                    adequacy: crate::clustering::adequacy(&members, proto).expect("shapes agree"),
                    variables: table
                        .variables()
                        .iter()
                        .zip(proto.params())
                        .map(|(v, &(center, radius))| PrototypeParams { variable: v.clone(), center, radius })
                        .collect(),
                }
            })
            .collect();
        ResultFile {
            format_version: FORMAT_VERSION,
            config: ConfigEcho {
                k: cfg.k,
                seed: cfg.seed,
                restarts: cfg.restarts,
                max_passes: cfg.max_passes,
                vertex_count: table.vertex_count(),
            },
            assignments: table
                .units()
                .iter()
                .zip(result.partition.assignment())
                .map(|(u, &c)| Assignment { label: u.label.clone(), cluster: c + 1 })
                .collect(),
            prototypes,
            criterion: result.criterion,
            trace: result.trace.clone(),
            passes: result.passes,
            restart: result.restart,
            hit_max_passes: result.hit_max_passes,
        }
    }

    pub fn to_json_string(&self) -> String {
        to_json(self)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: ResultFile = parse_json(text)?;
        check_version(file.format_version)?;
        file.validate()?;
        Ok(file)
    }

    fn validate(&self) -> Result<()> {
        if self.trace.last() != Some(&self.criterion) {
            return Err(schema("criterion", "does not equal the last trace entry"));
        }
        let mut seen = std::collections::HashSet::new();
        for (i, a) in self.assignments.iter().enumerate() {
            if !seen.insert(a.label.as_str()) {
                return Err(schema(format!("assignments[{i}].label"), format!("duplicate label {:?}", a.label)));
            }
            if a.cluster < 1 || a.cluster > self.config.k {
                return Err(schema(
                    format!("assignments[{i}].cluster"),
                    format!("{} outside 1..={}", a.cluster, self.config.k),
                ));
            }
        }
        if self.prototypes.len() != self.config.k {
            return Err(schema(
                "prototypes",
                format!("{} prototypes for k = {}", self.prototypes.len(), self.config.k),
            ));
        }
        Ok(())
    }
}

pub fn write_result(path: &Path, file: &ResultFile) -> Result<()> {
    fs::write(path, file.to_json_string()).map_err(|e| Error::io(path, e))
}

pub fn read_result(path: &Path) -> Result<ResultFile> {
    ResultFile::from_json_str(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
}

/// One JSON object per line.
pub fn reports_to_jsonl(reports: &[OracleReport]) -> String {
    reports.iter().map(|r| serde_json::to_string(r).expect("plain data serializes") + "\n").collect()
}
