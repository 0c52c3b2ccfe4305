//! Geometry operations: metrics, envelope/hull/boundary, bounding-box
//! buffer and the point-set based set operations.

use super::primitives::{convex_hull_points, signed_ring_area};
use super::{GeomError, Geometry, LineString, Rect};
use crate::scalar::Scalar;

/// Area of the geometry: shoelace formula for polygons, width times height
/// for rectangles, zero for points and lines, sum of the (disjoint) members
/// for collections.
pub fn area<T: Scalar>(g: &Geometry<T>) -> T {
    match g {
        Geometry::Point(_) | Geometry::LineString(_) => T::zero(),
        Geometry::Polygon(p) => signed_ring_area(p.ring_open()).abs(),
        Geometry::Rectangle(r) => r.area(),
        Geometry::Collection(members) => members
            .iter()
            .map(area)
            .fold(T::zero(), |acc, a| acc + a),
    }
}

/// Minimal axis-aligned rectangle containing every vertex. An empty
/// geometry yields the degenerate rectangle at the origin.
pub fn envelope<T: Scalar>(g: &Geometry<T>) -> Rect<T> {
    let vertices = g.vertices();
    if vertices.is_empty() {
        return Rect {
            min_x: T::zero(),
            min_y: T::zero(),
            max_x: T::zero(),
            max_y: T::zero(),
        };
    }
    let mut min_x = vertices[0].x;
    let mut min_y = vertices[0].y;
    let mut max_x = vertices[0].x;
    let mut max_y = vertices[0].y;
    for v in &vertices[1..] {
        min_x = min_x.min(v.x);
        min_y = min_y.min(v.y);
        max_x = max_x.max(v.x);
        max_y = max_y.max(v.y);
    }
    Rect {
        min_x,
        min_y,
        max_x,
        max_y,
    }
}

/// Bounding box of radius `radius` around the geometry: the envelope grown
/// by the radius on all four sides. Supported unit IRIs are meter (factor 1)
/// and kilometer (factor 1000); coordinates are planar meters.
pub fn buffer<T: Scalar>(
    g: &Geometry<T>,
    radius: T,
    unit_iri: &str,
) -> Result<Rect<T>, GeomError> {
    if radius < T::zero() {
        return Err(GeomError::NegativeRadius);
    }
    let local = unit_iri
        .rsplit(['/', '#'])
        .next()
        .unwrap_or(unit_iri)
        .to_ascii_lowercase();
    let factor = match local.as_str() {
        "meter" | "metre" | "m" => T::one(),
        "km" | "kilometer" | "kilometre" => T::from_f64(1000.0),
        _ => return Err(GeomError::UnknownUnit(unit_iri.to_string())),
    };
    let r = radius * factor;
    let e = envelope(g);
    Ok(Rect {
        min_x: e.min_x - r,
        min_y: e.min_y - r,
        max_x: e.max_x + r,
        max_y: e.max_y + r,
    })
}

/// Convex hull of all vertices. Degenerate inputs collapse to a point or a
/// linestring.
pub fn convex_hull<T: Scalar>(g: &Geometry<T>) -> Geometry<T> {
    let hull = convex_hull_points(&g.vertices());
    match hull.len() {
        0 => Geometry::empty(),
        1 => Geometry::Point(hull[0]),
        2 => {
            let first = hull[0];
            LineString::new(hull)
                .map(Geometry::LineString)
                .unwrap_or(Geometry::Point(first))
        }
        _ => {
            let mut ring = hull;
            ring.push(ring[0]);
            super::Polygon::new(ring)
                .map(Geometry::Polygon)
                .unwrap_or_else(|_| Geometry::empty())
        }
    }
}

/// Boundary of the geometry: a polygon's ring, a linestring's endpoints
/// (none when closed), nothing for points, member boundaries for collections.
pub fn boundary<T: Scalar>(g: &Geometry<T>) -> Geometry<T> {
    match g {
        Geometry::Point(_) => Geometry::empty(),
        Geometry::LineString(ls) => {
            if ls.is_closed() {
                Geometry::empty()
            } else {
                Geometry::Collection(vec![
                    Geometry::Point(*ls.points().first().unwrap()),
                    Geometry::Point(*ls.points().last().unwrap()),
                ])
            }
        }
        Geometry::Polygon(p) => LineString::new(p.ring().to_vec())
            .map(Geometry::LineString)
            .unwrap_or_else(|_| Geometry::empty()),
        Geometry::Rectangle(r) => {
            let mut ring = r.corners().to_vec();
            ring.push(ring[0]);
            LineString::new(ring)
                .map(Geometry::LineString)
                .unwrap_or_else(|_| Geometry::empty())
        }
        Geometry::Collection(members) => {
            Geometry::Collection(members.iter().map(boundary).collect())
        }
    }
}

/// Minimum Euclidean distance between the two point sets; zero when they
/// intersect.
pub fn distance<T: Scalar>(g1: &Geometry<T>, g2: &Geometry<T>) -> T {
    g1.to_region().distance(&g2.to_region())
}

/// Geometry whose point set is the intersection of the two inputs. An empty
/// intersection yields an empty collection.
pub fn geom_intersection<T: Scalar>(g1: &Geometry<T>, g2: &Geometry<T>) -> Geometry<T> {
    g1.to_region().intersection(&g2.to_region()).to_geometry()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Difference,
    SymDifference,
}

/// Regularized point-set union/difference/symmetric difference.
pub fn geom_set_op<T: Scalar>(op: SetOp, g1: &Geometry<T>, g2: &Geometry<T>) -> Geometry<T> {
    let r1 = g1.to_region();
    let r2 = g2.to_region();
    let result = match op {
        SetOp::Union => r1.union(&r2),
        SetOp::Difference => r1.difference(&r2),
        SetOp::SymDifference => r1.sym_difference(&r2),
    };
    result.to_geometry()
}

#[cfg(test)]
mod tests {
    use super::super::{parse_wkt, sf_predicate, SfPredicate};
    use super::*;
    use crate::vocab;

    fn g(wkt: &str) -> Geometry<f64> {
        parse_wkt(wkt).unwrap()
    }

    #[test]
    fn area_examples() {
        assert_eq!(area(&g("POLYGON((0 0,1 0,1 1,0 1,0 0))")), 1.0);
        assert_eq!(area(&g("LINESTRING(0 0,5 5)")), 0.0);
        assert_eq!(area(&g("POINT(3 3)")), 0.0);
    }

    #[test]
    fn envelope_examples() {
        let e = envelope(&g("LINESTRING(0 0,2 1)"));
        assert_eq!(e, Rect::new(0.0, 0.0, 2.0, 1.0).unwrap());
    }

    #[test]
    fn buffer_examples() {
        let b = buffer(&g("POINT(0 0)"), 1.0, &format!("{}meter", vocab::UOM_NS)).unwrap();
        assert_eq!(b, Rect::new(-1.0, -1.0, 1.0, 1.0).unwrap());

        let b = buffer(&g("POINT(0 0)"), 1.0, &format!("{}km", vocab::UOM_NS)).unwrap();
        assert_eq!(b, Rect::new(-1000.0, -1000.0, 1000.0, 1000.0).unwrap());

        let line = g("LINESTRING(0 0,2 1)");
        let zero = buffer(&line, 0.0, &format!("{}meter", vocab::UOM_NS)).unwrap();
        assert_eq!(zero, envelope(&line));

        assert!(matches!(
            buffer(&line, 1.0, "http://example.org/furlong"),
            Err(GeomError::UnknownUnit(_))
        ));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&g("POINT(0 0)"), &g("POINT(3 4)")), 5.0);
        let a = g("POLYGON((0 0,2 0,2 2,0 2,0 0))");
        let b = g("POLYGON((1 1,3 1,3 3,1 3,1 1))");
        assert_eq!(distance(&a, &b), 0.0);
    }

    #[test]
    fn intersection_examples() {
        let square = g("POLYGON((0 0,1 0,1 1,0 1,0 0))");
        let i = geom_intersection(&square, &square);
        assert!(sf_predicate(SfPredicate::Equals, &i, &square));

        let a = Geometry::<f64>::rectangle(0.0, 0.0, 2.0, 2.0).unwrap();
        let b = Geometry::rectangle(1.0, 1.0, 3.0, 3.0).unwrap();
        let i = geom_intersection(&a, &b);
        let expected = Geometry::rectangle(1.0, 1.0, 2.0, 2.0).unwrap();
        assert!(sf_predicate(SfPredicate::Equals, &i, &expected));
        assert!((area(&i) - 1.0).abs() < 1e-9);

        let far = Geometry::rectangle(10.0, 10.0, 11.0, 11.0).unwrap();
        assert!(geom_intersection(&a, &far).is_empty());
    }

    #[test]
    fn set_op_examples() {
        let square = g("POLYGON((0 0,1 0,1 1,0 1,0 0))");
        let u = geom_set_op(SetOp::Union, &square, &square);
        assert!(sf_predicate(SfPredicate::Equals, &u, &square));

        let a = Geometry::rectangle(0.0, 0.0, 2.0, 1.0).unwrap();
        let b = Geometry::rectangle(1.0, 0.0, 2.0, 1.0).unwrap();
        let d = geom_set_op(SetOp::Difference, &a, &b);
        let expected = Geometry::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        assert!(sf_predicate(SfPredicate::Equals, &d, &expected));
    }

    #[test]
    fn hull_and_boundary() {
        let pts = g("GEOMETRYCOLLECTION(POINT(0 0),POINT(1 0),POINT(1 1),POINT(0 1),POINT(0.5 0.5))");
        let hull = convex_hull(&pts);
        let square = g("POLYGON((0 0,1 0,1 1,0 1,0 0))");
        assert!(sf_predicate(SfPredicate::Equals, &hull, &square));

        let b = boundary(&square);
        match &b {
            Geometry::LineString(ls) => assert_eq!(ls.points().len(), 5),
            other => panic!("expected ring linestring, got {other:?}"),
        }
    }
}
