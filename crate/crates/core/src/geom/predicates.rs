//! Simple-features predicates under point-set semantics: `equals` is point
//! set equality, `contains`/`covers` are subset tests, `overlaps` is a
//! nonempty intersection that is proper in both arguments, `touches` shares
//! only boundary points and `crosses` shares some but not all interior
//! points at a lower dimension than the inputs.

use super::primitives::{
    collinear_overlap_params, point_segment_distance, signed_line_distance, Segment,
};
use super::{Geometry, PointSetRegion};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SfPredicate {
    Equals,
    Intersects,
    Disjoint,
    Contains,
    Within,
    Covers,
    Overlaps,
    Touches,
    Crosses,
}

impl SfPredicate {
    pub fn from_name(name: &str) -> Option<SfPredicate> {
        Some(match name.to_ascii_lowercase().as_str() {
            "equals" | "sfequals" => SfPredicate::Equals,
            "intersects" | "sfintersects" => SfPredicate::Intersects,
            "disjoint" | "sfdisjoint" => SfPredicate::Disjoint,
            "contains" | "sfcontains" => SfPredicate::Contains,
            "within" | "sfwithin" => SfPredicate::Within,
            "covers" | "sfcovers" => SfPredicate::Covers,
            "overlaps" | "sfoverlaps" => SfPredicate::Overlaps,
            "touches" | "sftouches" => SfPredicate::Touches,
            "crosses" | "sfcrosses" => SfPredicate::Crosses,
            _ => return None,
        })
    }
}

pub fn sf_predicate<T: Scalar>(
    pred: SfPredicate,
    g1: &Geometry<T>,
    g2: &Geometry<T>,
) -> bool {
    let r1 = g1.to_region();
    let r2 = g2.to_region();
    sf_predicate_regions(pred, g1, g2, &r1, &r2)
}

pub(crate) fn sf_predicate_regions<T: Scalar>(
    pred: SfPredicate,
    g1: &Geometry<T>,
    g2: &Geometry<T>,
    r1: &PointSetRegion<T>,
    r2: &PointSetRegion<T>,
) -> bool {
    match pred {
        SfPredicate::Intersects => r1.intersects(r2),
        SfPredicate::Disjoint => !r1.intersects(r2),
        SfPredicate::Equals => r1.subset_of(r2) && r2.subset_of(r1),
        SfPredicate::Contains | SfPredicate::Covers => r2.subset_of(r1),
        SfPredicate::Within => r1.subset_of(r2),
        SfPredicate::Overlaps => {
            r1.intersects(r2) && !r1.subset_of(r2) && !r2.subset_of(r1)
        }
        SfPredicate::Touches => {
            r1.intersects(r2) && !interiors_intersect_impl(g1, g2, r1, r2)
        }
        SfPredicate::Crosses => {
            if !interiors_intersect_impl(g1, g2, r1, r2) {
                return false;
            }
            if r1.subset_of(r2) || r2.subset_of(r1) {
                return false;
            }
            let shared_dim = r1.intersection(r2).dimension();
            let max_dim = g1.dimension().max(g2.dimension());
            match (shared_dim, max_dim) {
                (Some(s), Some(m)) => s < m,
                _ => false,
            }
        }
    }
}

/// True when the interiors of both geometries share a point. Interiors are
/// relative to the geometry's own dimension: a polygon without its ring, a
/// linestring without its two extreme endpoints, a point as itself.
pub fn interiors_intersect<T: Scalar>(g1: &Geometry<T>, g2: &Geometry<T>) -> bool {
    interiors_intersect_impl(g1, g2, &g1.to_region(), &g2.to_region())
}

fn interiors_intersect_impl<T: Scalar>(
    g1: &Geometry<T>,
    g2: &Geometry<T>,
    r1: &PointSetRegion<T>,
    r2: &PointSetRegion<T>,
) -> bool {
    let d1 = g1.dimension();
    let d2 = g2.dimension();
    let (Some(d1), Some(d2)) = (d1, d2) else {
        return false;
    };
    match (d1, d2) {
        // For closed regular areas the interiors meet exactly when the
        // intersection has positive measure.
        (2, 2) => r1.intersection(r2).area() > T::sliver_eps(),
        (2, 1) => area_interior_meets_line(g1, r1, g2),
        (1, 2) => area_interior_meets_line(g2, r2, g1),
        (1, 1) => line_interiors_meet(g1, g2),
        (0, _) => points_in_interior(g1, g2, r2),
        (_, 0) => points_in_interior(g2, g1, r1),
        _ => false,
    }
}

/// Line endpoints that are topological boundary: the extreme endpoints of
/// each open linestring member.
fn extreme_endpoints<T: Scalar>(g: &Geometry<T>, out: &mut Vec<super::Point<T>>) {
    match g {
        Geometry::LineString(ls) => {
            if !ls.is_closed() {
                out.push(*ls.points().first().unwrap());
                out.push(*ls.points().last().unwrap());
            }
        }
        Geometry::Collection(members) => {
            for m in members {
                extreme_endpoints(m, out);
            }
        }
        _ => {}
    }
}

/// Ring edges of all two-dimensional members of the geometry.
fn boundary_ring_segments<T: Scalar>(g: &Geometry<T>, out: &mut Vec<Segment<T>>) {
    match g {
        Geometry::Polygon(p) => {
            for w in p.ring().windows(2) {
                out.push(Segment::new(w[0], w[1]));
            }
        }
        Geometry::Rectangle(r) => {
            let c = r.corners();
            for i in 0..4 {
                out.push(Segment::new(c[i], c[(i + 1) % 4]));
            }
        }
        Geometry::Collection(members) => {
            for m in members {
                boundary_ring_segments(m, out);
            }
        }
        _ => {}
    }
}

fn line_segments<T: Scalar>(g: &Geometry<T>, out: &mut Vec<Segment<T>>) {
    match g {
        Geometry::LineString(ls) => {
            for w in ls.points().windows(2) {
                if !w[0].close_to(&w[1], T::eps()) {
                    out.push(Segment::new(w[0], w[1]));
                }
            }
        }
        Geometry::Collection(members) => {
            for m in members {
                line_segments(m, out);
            }
        }
        Geometry::Rectangle(r) => {
            // Degenerate rectangles act as lines.
            let eps = T::eps();
            if (r.width() <= eps) != (r.height() <= eps) {
                out.push(Segment::new(
                    super::Point::new(r.min_x, r.min_y),
                    super::Point::new(r.max_x, r.max_y),
                ));
            }
        }
        _ => {}
    }
}

/// True when a line carries positive length through the interior of a
/// two-dimensional geometry (inside the area but not along its rings).
fn area_interior_meets_line<T: Scalar>(
    area_geom: &Geometry<T>,
    area_region: &PointSetRegion<T>,
    line_geom: &Geometry<T>,
) -> bool {
    let eps = T::eps();
    let mut rings = Vec::new();
    boundary_ring_segments(area_geom, &mut rings);
    let mut segs = Vec::new();
    line_segments(line_geom, &mut segs);
    for seg in &segs {
        let len = seg.length();
        if len <= eps {
            continue;
        }
        for piece in &area_region.pieces {
            let Some((t0, t1)) = piece.clip_segment(seg) else {
                continue;
            };
            let inside = Segment::new(seg.at(t0), seg.at(t1));
            let inside_len = inside.length();
            if inside_len <= eps {
                continue;
            }
            // Length of the inside portion lying along the area's rings.
            let mut on_ring: Vec<(T, T)> = Vec::new();
            for ring in &rings {
                if signed_line_distance(&inside.a, &inside.b, &ring.a).abs() <= eps
                    && signed_line_distance(&inside.a, &inside.b, &ring.b).abs() <= eps
                {
                    if let Some(range) = collinear_overlap_params(&inside, ring) {
                        on_ring.push(range);
                    }
                }
            }
            let covered = merge_and_total(on_ring);
            if (T::one() - covered) * inside_len > eps {
                return true;
            }
        }
    }
    false
}

fn merge_and_total<T: Scalar>(mut intervals: Vec<(T, T)>) -> T {
    intervals.retain(|(a, b)| b > a);
    intervals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut total = T::zero();
    let mut cursor = T::zero();
    for (a, b) in intervals {
        let a = a.max(cursor);
        if b > a {
            total = total + (b - a);
            cursor = b;
        }
    }
    total.min(T::one())
}

/// True when two one-dimensional geometries share a non-boundary point:
/// a collinear overlap of positive length, or a crossing point that is not
/// an extreme endpoint of either polyline.
fn line_interiors_meet<T: Scalar>(g1: &Geometry<T>, g2: &Geometry<T>) -> bool {
    let eps = T::eps();
    let mut segs1 = Vec::new();
    line_segments(g1, &mut segs1);
    let mut segs2 = Vec::new();
    line_segments(g2, &mut segs2);
    let mut ends1 = Vec::new();
    extreme_endpoints(g1, &mut ends1);
    let mut ends2 = Vec::new();
    extreme_endpoints(g2, &mut ends2);

    for s in &segs1 {
        for t in &segs2 {
            match super::primitives::segment_intersection(s, t) {
                super::primitives::SegSeg::Disjoint => {}
                super::primitives::SegSeg::Overlap(o) => {
                    if o.length() > eps {
                        return true;
                    }
                }
                super::primitives::SegSeg::At(p) => {
                    let boundary_of_1 = ends1.iter().any(|e| e.close_to(&p, eps));
                    let boundary_of_2 = ends2.iter().any(|e| e.close_to(&p, eps));
                    if !boundary_of_1 && !boundary_of_2 {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// True when any point member of `point_geom` lies in the interior of
/// `other`.
fn points_in_interior<T: Scalar>(
    point_geom: &Geometry<T>,
    other: &Geometry<T>,
    other_region: &PointSetRegion<T>,
) -> bool {
    let eps = T::eps();
    let mut pts = Vec::new();
    collect_points(point_geom, &mut pts);
    match other.dimension() {
        Some(2) => {
            let mut rings = Vec::new();
            boundary_ring_segments(other, &mut rings);
            pts.iter().any(|p| {
                other_region.contains_point(p)
                    && rings
                        .iter()
                        .all(|ring| point_segment_distance(p, ring) > eps)
            })
        }
        Some(1) => {
            let mut ends = Vec::new();
            extreme_endpoints(other, &mut ends);
            pts.iter().any(|p| {
                other_region.contains_point(p) && !ends.iter().any(|e| e.close_to(p, eps))
            })
        }
        Some(0) => pts.iter().any(|p| other_region.contains_point(p)),
        _ => false,
    }
}

fn collect_points<T: Scalar>(g: &Geometry<T>, out: &mut Vec<super::Point<T>>) {
    match g {
        Geometry::Point(p) => out.push(*p),
        Geometry::Collection(members) => {
            for m in members {
                collect_points(m, out);
            }
        }
        Geometry::Rectangle(r) if r.width() <= T::eps() && r.height() <= T::eps() => {
            out.push(super::Point::new(r.min_x, r.min_y));
        }
        _ => {}
    }
}
