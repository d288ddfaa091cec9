//! Polygon-valued symbolic data analysis.
//!
//! Classical microdata are aggregated per class into regular polygons (center
//! = class mean, radius = twice the class standard deviation). Units described
//! by one polygon per variable are compared with a vertex-wise
//! Hausdorff/City-Block distance and grouped by a dynamic clustering
//! algorithm whose prototypes are per-variable medians of centers and radii.
//!
//! The [`oracle`] module holds brute-force checks (exhaustive partition
//! enumeration, prototype grid search, closed-form distances, Monte Carlo
//! density integration) used by the test suites and the `verify` command.

pub mod aggregation;
pub mod clustering;
pub mod error;
pub mod io;
pub mod metric;
pub mod oracle;
pub mod polygon;
pub mod svg;

pub use aggregation::{
    aggregate, aggregate_with_report, class_stats, encode_binary, AggregateOptions, ClassStats, Microdata,
    SymbolicTable, SymbolicUnit,
};
pub use clustering::{
    adequacy, cluster, cluster_from, compute_prototype, global_criterion, median, ClusteringConfig, ClusteringResult,
    Partition, Prototype,
};
pub use error::{Error, Result};
pub use metric::{polygon_distance, unit_distance};
pub use oracle::OracleReport;
pub use polygon::{bounding_box, empirical_pdf, make_polygon, shoelace_area, Point, Polygon, PolygonSet};
