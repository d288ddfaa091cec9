//! Regular polygons inscribed in a circle, their areas, point membership and
//! the polygonal empirical density.
//!
//! A polygon with center `c`, radius `r` and `L` vertices has vertex
//! `l = 1..=L` at `(c + r cos(2πl/L), c + r sin(2πl/L))`. Both coordinates
//! are offset by the same scalar, so the circumcenter sits on the diagonal at
//! `(c, c)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// `(cos, sin)` of the angle `2π·l/L`.
///
/// The angle is reduced to the first octant with integer arithmetic before a
/// single `cos`/`sin` evaluation, so quadrant angles come out as exact `0`/`±1`
/// and the vertex set is exactly symmetric under quarter turns whenever
/// `L % 4 == 0`.
pub fn unit_circle(l: usize, vertex_count: usize) -> (f64, f64) {
    use std::f64::consts::FRAC_PI_2;

    let n = vertex_count as u128;
    let t = (l as u128) % n;
    // 2πt/L = q·π/2 + (π/2)·rem/L
    let quadrant = (4 * t) / n;
    let rem = (4 * t) % n;
    let (c, s) = if rem == 0 {
        (1.0, 0.0)
    } else if 2 * rem == n {
        let h = (FRAC_PI_2 / 2.0).cos();
        (h, h)
    } else if 2 * rem < n {
        let phi = FRAC_PI_2 * (rem as f64) / (n as f64);
        (phi.cos(), phi.sin())
    } else {
        let phi = FRAC_PI_2 * ((n - rem) as f64) / (n as f64);
        (phi.sin(), phi.cos())
    };
    match quadrant {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    }
}

/// A regular polygon inscribed in the circle of radius `radius` around
/// `(center, center)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    center: f64,
    radius: f64,
    vertices: Vec<Point>,
}

impl Polygon {
    /// Builds the polygon with vertices `l = 1..=L`. `vertices()[0]` is the
    /// `l = 1` vertex at angle `2π/L`; the last one sits at angle `2π`.
    pub fn new(center: f64, radius: f64, vertex_count: usize) -> Result<Self> {
        if vertex_count < 3 {
            return Err(Error::InvalidArgument(format!("vertex count must be at least 3, got {vertex_count}")));
        }
        if !center.is_finite() || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!("center and radius must be finite, got ({center}, {radius})")));
        }
        if radius < 0.0 {
            return Err(Error::InvalidArgument(format!("radius must be non-negative, got {radius}")));
        }
        let vertices = (1..=vertex_count)
            .map(|l| {
                let (cos, sin) = unit_circle(l, vertex_count);
                Point::new(center + radius * cos, center + radius * sin)
            })
            .collect();
        Ok(Polygon { center, radius, vertices })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn circumcenter(&self) -> Point {
        Point::new(self.center, self.center)
    }

    pub fn is_degenerate(&self) -> bool {
        self.radius == 0.0
    }

    pub fn area(&self) -> f64 {
        shoelace_area(&self.vertices)
    }

    pub fn contains(&self, q: Point) -> bool {
        contains_point(&self.vertices, q)
    }
}

/// Shorthand for [`Polygon::new`].
pub fn make_polygon(center: f64, radius: f64, vertex_count: usize) -> Result<Polygon> {
    Polygon::new(center, radius, vertex_count)
}

/// Area of a simple polygon given by its ordered vertices (either orientation).
pub fn shoelace_area(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    if n < 3 {
        return 0.0;
    }
    let terms = (0..n).map(|i| {
        let next = vertices[(i + 1) % n];
        let prev = vertices[(i + n - 1) % n];
        vertices[i].y * (next.x - prev.x)
    });
    // Positive and negative terms are summed separately in order of magnitude:
    // reversing the vertex order negates every term, so the result is then
    // bit-identical for both orientations.
    let (mut pos, mut neg): (Vec<f64>, Vec<f64>) = terms.partition(|t| *t >= 0.0);
    pos.sort_by(f64::total_cmp);
    neg.sort_by(|a, b| b.total_cmp(a));
    let sum = pos.iter().sum::<f64>() + neg.iter().sum::<f64>();
    0.5 * sum.abs()
}

fn on_segment(a: Point, b: Point, q: Point) -> bool {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let cross = dx * (q.y - a.y) - dy * (q.x - a.x);
    let scale = dx.abs().max(dy.abs()).max(f64::MIN_POSITIVE);
    let tol = 1e-12 * scale * (1.0 + a.x.abs().max(a.y.abs()));
    if cross.abs() > tol {
        return false;
    }
    let slack = 1e-12 * (1.0 + scale);
    q.x >= a.x.min(b.x) - slack
        && q.x <= a.x.max(b.x) + slack
        && q.y >= a.y.min(b.y) - slack
        && q.y <= a.y.max(b.y) + slack
}

/// Point-in-polygon by ray casting; points on the boundary count as inside.
pub fn contains_point(vertices: &[Point], q: Point) -> bool {
    let n = vertices.len();
    if n == 0 {
        return false;
    }
    let mut inside = false;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        if on_segment(a, b, q) {
            return true;
        }
        if (a.y > q.y) != (b.y > q.y) {
            let x_cross = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if q.x < x_cross {
                inside = !inside;
            }
        }
    }
    inside
}

/// A finite sample space of polygons, each drawn with probability `1/m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonSet {
    polygons: Vec<Polygon>,
}

impl PolygonSet {
    pub fn new(polygons: Vec<Polygon>) -> Result<Self> {
        if polygons.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(PolygonSet { polygons })
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    /// Cardinality `m`.
    pub fn len(&self) -> usize {
        self.polygons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polygons.is_empty()
    }
}

/// Precomputed per-polygon data for repeated density evaluation.
#[derive(Debug, Clone)]
pub struct Density<'a> {
    set: &'a PolygonSet,
    inv_areas: Vec<f64>,
    // squared inradius / circumradius for quick accept / reject
    inner_sq: Vec<f64>,
    outer_sq: Vec<f64>,
}

impl<'a> Density<'a> {
    pub fn new(set: &'a PolygonSet) -> Result<Self> {
        let mut inv_areas = Vec::with_capacity(set.len());
        let mut inner_sq = Vec::with_capacity(set.len());
        let mut outer_sq = Vec::with_capacity(set.len());
        for (index, p) in set.polygons().iter().enumerate() {
            let area = p.area();
            if area.is_nan() || area <= 0.0 {
                return Err(Error::DegeneratePolygon { index });
            }
            inv_areas.push(1.0 / area);
            let apothem = p.radius() * (std::f64::consts::PI / p.vertex_count() as f64).cos();
            inner_sq.push(apothem * apothem * (1.0 - 1e-9));
            outer_sq.push(p.radius() * p.radius() * (1.0 + 1e-9));
        }
        Ok(Density { set, inv_areas, inner_sq, outer_sq })
    }

    /// `f(q) = (1/m) Σ 1/A_u` over the polygons `u` containing `q`.
    pub fn eval(&self, q: Point) -> f64 {
        let mut sum = 0.0;
        for (i, p) in self.set.polygons().iter().enumerate() {
            let dx = q.x - p.center();
            let dy = q.y - p.center();
            let d2 = dx * dx + dy * dy;
            if d2 > self.outer_sq[i] {
                continue;
            }
            if d2 <= self.inner_sq[i] || p.contains(q) {
                sum += self.inv_areas[i];
            }
        }
        sum / self.set.len() as f64
    }
}

/// Polygonal empirical density at `q`.
pub fn empirical_pdf(set: &PolygonSet, q: Point) -> Result<f64> {
    Ok(Density::new(set)?.eval(q))
}

/// Componentwise min and max over all vertices of all polygons.
pub fn bounding_box(set: &PolygonSet) -> Result<(Point, Point)> {
    bounding_box_of(set.polygons())
}

pub(crate) fn bounding_box_of(polygons: &[Polygon]) -> Result<(Point, Point)> {
    if polygons.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in polygons.iter().flat_map(|p| p.vertices()) {
        lo.x = lo.x.min(v.x);
        lo.y = lo.y.min(v.y);
        hi.x = hi.x.max(v.x);
        hi.y = hi.y.max(v.y);
    }
    Ok((lo, hi))
}
