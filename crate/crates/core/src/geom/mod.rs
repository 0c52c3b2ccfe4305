//! Planar vector geometries with point-set semantics: WKT parsing and
//! serialization, set operations, metrics and simple-features predicates.
//!
//! Coordinates are planar meter units; there is no CRS handling. All types
//! are generic over the scalar ([`crate::Scalar`]).

mod ops;
mod predicates;
mod primitives;
mod region;
mod wkt;

pub use ops::{
    area, boundary, buffer, convex_hull, distance, envelope, geom_intersection, geom_set_op,
    SetOp,
};
pub use predicates::{interiors_intersect, sf_predicate, SfPredicate};
pub use region::PointSetRegion;
pub use wkt::{parse_wkt, to_wkt};

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum GeomError {
    #[error("WKT parse error at offset {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("invalid geometry: {0}")]
    Invalid(String),
    #[error("unknown unit IRI: {0}")]
    UnknownUnit(String),
    #[error("negative buffer radius")]
    NegativeRadius,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point<T: Scalar> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    pub fn new(x: T, y: T) -> Point<T> {
        Point { x, y }
    }

    pub fn distance_to(&self, other: &Point<T>) -> T {
        ((self.x - other.x) * (self.x - other.x) + (self.y - other.y) * (self.y - other.y))
            .sqrt()
    }

    pub(crate) fn close_to(&self, other: &Point<T>, eps: T) -> bool {
        self.distance_to(other) <= eps
    }
}

/// Axis-aligned rectangle, closed on all sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<T: Scalar> {
    pub min_x: T,
    pub min_y: T,
    pub max_x: T,
    pub max_y: T,
}

impl<T: Scalar> Rect<T> {
    pub fn new(min_x: T, min_y: T, max_x: T, max_y: T) -> Result<Rect<T>, GeomError> {
        if min_x > max_x || min_y > max_y {
            return Err(GeomError::Invalid(
                "rectangle requires min <= max on both axes".into(),
            ));
        }
        Ok(Rect {
            min_x,
            min_y,
            max_x,
            max_y,
        })
    }

    pub fn width(&self) -> T {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> T {
        self.max_y - self.min_y
    }

    pub fn area(&self) -> T {
        self.width() * self.height()
    }

    pub fn contains_point(&self, p: &Point<T>) -> bool {
        p.x >= self.min_x && p.x <= self.max_x && p.y >= self.min_y && p.y <= self.max_y
    }

    pub fn intersects_rect(&self, other: &Rect<T>) -> bool {
        self.min_x <= other.max_x
            && other.min_x <= self.max_x
            && self.min_y <= other.max_y
            && other.min_y <= self.max_y
    }

    pub fn contains_rect(&self, other: &Rect<T>) -> bool {
        self.min_x <= other.min_x
            && self.min_y <= other.min_y
            && self.max_x >= other.max_x
            && self.max_y >= other.max_y
    }

    pub fn intersection(&self, other: &Rect<T>) -> Option<Rect<T>> {
        let min_x = self.min_x.max(other.min_x);
        let min_y = self.min_y.max(other.min_y);
        let max_x = self.max_x.min(other.max_x);
        let max_y = self.max_y.min(other.max_y);
        if min_x <= max_x && min_y <= max_y {
            Some(Rect {
                min_x,
                min_y,
                max_x,
                max_y,
            })
        } else {
            None
        }
    }

    /// Corner ring, counterclockwise, starting at the lower-left corner.
    pub fn corners(&self) -> [Point<T>; 4] {
        [
            Point::new(self.min_x, self.min_y),
            Point::new(self.max_x, self.min_y),
            Point::new(self.max_x, self.max_y),
            Point::new(self.min_x, self.max_y),
        ]
    }
}

/// Ordered list of at least two points, at least two of them distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct LineString<T: Scalar> {
    points: Vec<Point<T>>,
}

impl<T: Scalar> LineString<T> {
    pub fn new(points: Vec<Point<T>>) -> Result<LineString<T>, GeomError> {
        if points.len() < 2 {
            return Err(GeomError::Invalid("LineString requires >= 2 points".into()));
        }
        let eps = T::eps();
        if !points.iter().any(|p| !p.close_to(&points[0], eps)) {
            return Err(GeomError::Invalid(
                "LineString requires at least two distinct points".into(),
            ));
        }
        Ok(LineString { points })
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn is_closed(&self) -> bool {
        self.points
            .first()
            .zip(self.points.last())
            .map_or(false, |(a, b)| a.close_to(b, T::eps()))
    }
}

/// Single-ring polygon without holes; the encompassed area is included.
/// The stored ring is closed (first point equals last) and counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon<T: Scalar> {
    ring: Vec<Point<T>>,
}

impl<T: Scalar> Polygon<T> {
    /// Validates closure, vertex uniqueness and the no-crossing rule, then
    /// normalizes orientation to counterclockwise.
    pub fn new(ring: Vec<Point<T>>) -> Result<Polygon<T>, GeomError> {
        let eps = T::eps();
        if ring.len() < 4 {
            return Err(GeomError::Invalid(
                "polygon ring requires at least 4 points including closure".into(),
            ));
        }
        if !ring[0].close_to(ring.last().unwrap(), eps) {
            return Err(GeomError::Invalid(
                "polygon ring must be closed (first point = last point)".into(),
            ));
        }
        let open_len = ring.len() - 1;
        for i in 0..open_len {
            for j in (i + 1)..open_len {
                if ring[i].close_to(&ring[j], eps) {
                    return Err(GeomError::Invalid(format!(
                        "polygon ring repeats vertex {i} at position {j}"
                    )));
                }
            }
        }
        if primitives::ring_self_intersects(&ring[..open_len], eps) {
            return Err(GeomError::Invalid(
                "polygon ring is self-intersecting".into(),
            ));
        }
        let mut ring = ring;
        if primitives::signed_ring_area(&ring[..open_len]) < T::zero() {
            ring.reverse();
        }
        Ok(Polygon { ring })
    }

    /// Closed ring, counterclockwise.
    pub fn ring(&self) -> &[Point<T>] {
        &self.ring
    }

    /// Ring without the closing duplicate point.
    pub fn ring_open(&self) -> &[Point<T>] {
        &self.ring[..self.ring.len() - 1]
    }
}

/// Tagged union of the supported geometry kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum Geometry<T: Scalar> {
    Point(Point<T>),
    LineString(LineString<T>),
    Polygon(Polygon<T>),
    Rectangle(Rect<T>),
    Collection(Vec<Geometry<T>>),
}

impl<T: Scalar> Geometry<T> {
    pub fn point(x: T, y: T) -> Geometry<T> {
        Geometry::Point(Point::new(x, y))
    }

    pub fn rectangle(min_x: T, min_y: T, max_x: T, max_y: T) -> Result<Geometry<T>, GeomError> {
        Ok(Geometry::Rectangle(Rect::new(min_x, min_y, max_x, max_y)?))
    }

    pub fn empty() -> Geometry<T> {
        Geometry::Collection(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Geometry::Collection(members) => members.iter().all(Geometry::is_empty),
            _ => false,
        }
    }

    /// Topological dimension: 0 for points, 1 for lines, 2 for areas.
    /// `None` for empty geometries.
    pub fn dimension(&self) -> Option<u8> {
        match self {
            Geometry::Point(_) => Some(0),
            Geometry::LineString(_) => Some(1),
            Geometry::Polygon(_) => Some(2),
            Geometry::Rectangle(r) => {
                let eps = T::eps();
                if r.width() <= eps && r.height() <= eps {
                    Some(0)
                } else if r.width() <= eps || r.height() <= eps {
                    Some(1)
                } else {
                    Some(2)
                }
            }
            Geometry::Collection(members) => {
                members.iter().filter_map(Geometry::dimension).max()
            }
        }
    }

    /// All vertex coordinates of the geometry.
    pub fn vertices(&self) -> Vec<Point<T>> {
        let mut out = Vec::new();
        self.collect_vertices(&mut out);
        out
    }

    fn collect_vertices(&self, out: &mut Vec<Point<T>>) {
        match self {
            Geometry::Point(p) => out.push(*p),
            Geometry::LineString(ls) => out.extend_from_slice(ls.points()),
            Geometry::Polygon(p) => out.extend_from_slice(p.ring_open()),
            Geometry::Rectangle(r) => out.extend_from_slice(&r.corners()),
            Geometry::Collection(members) => {
                for m in members {
                    m.collect_vertices(out);
                }
            }
        }
    }

    /// Converts the geometry to its point-set region representation.
    pub fn to_region(&self) -> PointSetRegion<T> {
        PointSetRegion::from_geometry(self)
    }
}
