//! Hausdorff/City-Block distance between polygons and its sum across variables.

use crate::error::{Error, Result};
use crate::polygon::Polygon;

/// Max over corresponding vertices `l` of the L1 distance between vertex `l`
/// of `p` and vertex `l` of `q`.
pub fn polygon_distance(p: &Polygon, q: &Polygon) -> Result<f64> {
    if p.vertex_count() != q.vertex_count() {
        return Err(Error::VertexCountMismatch { left: p.vertex_count(), right: q.vertex_count() });
    }
    Ok(vertex_max_l1(p, q))
}

pub(crate) fn vertex_max_l1(p: &Polygon, q: &Polygon) -> f64 {
    p.vertices().iter().zip(q.vertices()).map(|(a, b)| (a.x - b.x).abs() + (a.y - b.y).abs()).fold(0.0, f64::max)
}

/// Sum of per-variable polygon distances.
pub fn unit_distance(u: &[Polygon], v: &[Polygon]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { left: u.len(), right: v.len() });
    }
    u.iter().zip(v).map(|(a, b)| polygon_distance(a, b)).sum()
}

/// [`unit_distance`] for inputs already known to share shape.
pub(crate) fn unit_distance_unchecked(u: &[Polygon], v: &[Polygon]) -> f64 {
    u.iter().zip(v).map(|(a, b)| vertex_max_l1(a, b)).sum()
}
