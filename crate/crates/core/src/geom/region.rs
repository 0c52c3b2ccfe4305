//! Point-set region representation backing the set operations and
//! simple-features predicates. A region is a mixed-dimension set: convex
//! two-dimensional pieces with pairwise disjoint interiors, line segments
//! and isolated points.

use super::primitives::{
    collinear_overlap_params, segment_intersection, signed_line_distance, Convex, SegSeg,
    Segment,
};
use super::{Geometry, LineString, Point, Polygon, Rect};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Default)]
pub struct PointSetRegion<T: Scalar> {
    pub(crate) pieces: Vec<Convex<T>>,
    pub(crate) segments: Vec<Segment<T>>,
    pub(crate) points: Vec<Point<T>>,
}

impl<T: Scalar> PointSetRegion<T> {
    pub fn empty() -> PointSetRegion<T> {
        PointSetRegion {
            pieces: Vec::new(),
            segments: Vec::new(),
            points: Vec::new(),
        }
    }

    pub fn from_geometry(g: &Geometry<T>) -> PointSetRegion<T> {
        match g {
            Geometry::Point(p) => PointSetRegion {
                points: vec![*p],
                ..PointSetRegion::empty()
            },
            Geometry::LineString(ls) => PointSetRegion {
                segments: linestring_segments(ls),
                ..PointSetRegion::empty()
            },
            Geometry::Polygon(poly) => PointSetRegion {
                pieces: super::primitives::triangulate(poly.ring_open()),
                ..PointSetRegion::empty()
            },
            Geometry::Rectangle(r) => PointSetRegion::from_rect(r),
            Geometry::Collection(members) => {
                let mut acc = PointSetRegion::empty();
                for m in members {
                    acc = acc.union(&PointSetRegion::from_geometry(m));
                }
                acc
            }
        }
    }

    pub(crate) fn from_rect(r: &Rect<T>) -> PointSetRegion<T> {
        let eps = T::eps();
        let mut region = PointSetRegion::empty();
        if r.width() <= eps && r.height() <= eps {
            region.points.push(Point::new(r.min_x, r.min_y));
        } else if r.width() <= eps || r.height() <= eps {
            region.segments.push(Segment::new(
                Point::new(r.min_x, r.min_y),
                Point::new(r.max_x, r.max_y),
            ));
        } else if let Some(quad) = Convex::from_rect(r.min_x, r.min_y, r.max_x, r.max_y) {
            region.pieces.push(quad);
        }
        region
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty() && self.segments.is_empty() && self.points.is_empty()
    }

    /// Total area of the two-dimensional part.
    pub fn area(&self) -> T {
        self.pieces
            .iter()
            .map(Convex::area)
            .fold(T::zero(), |a, b| a + b)
    }

    /// Closed-set membership.
    pub fn contains_point(&self, p: &Point<T>) -> bool {
        let eps = T::eps();
        self.pieces.iter().any(|c| c.contains_point(p, eps))
            || self
                .segments
                .iter()
                .any(|s| super::primitives::point_segment_distance(p, s) <= eps)
            || self.points.iter().any(|q| q.close_to(p, eps))
    }

    /// Contact test on the closed sets (shared boundary points count).
    pub fn intersects(&self, other: &PointSetRegion<T>) -> bool {
        let eps = T::eps();
        for a in &self.pieces {
            if other.pieces.iter().any(|b| a.contacts(b)) {
                return true;
            }
            if other
                .segments
                .iter()
                .any(|s| a.distance_to_segment(s) <= eps)
            {
                return true;
            }
            if other.points.iter().any(|p| a.contains_point(p, eps)) {
                return true;
            }
        }
        for s in &self.segments {
            if other.pieces.iter().any(|b| b.distance_to_segment(s) <= eps) {
                return true;
            }
            if other
                .segments
                .iter()
                .any(|t| super::primitives::segment_segment_distance(s, t) <= eps)
            {
                return true;
            }
            if other
                .points
                .iter()
                .any(|p| super::primitives::point_segment_distance(p, s) <= eps)
            {
                return true;
            }
        }
        for p in &self.points {
            if other.contains_point(p) {
                return true;
            }
        }
        false
    }

    /// Minimum Euclidean distance between the two point sets; zero on contact.
    pub fn distance(&self, other: &PointSetRegion<T>) -> T {
        if self.is_empty() || other.is_empty() {
            return T::infinity();
        }
        if self.intersects(other) {
            return T::zero();
        }
        let mut best = T::infinity();
        for a in &self.pieces {
            for b in &other.pieces {
                best = best.min(a.distance_to_convex(b));
            }
            for s in &other.segments {
                best = best.min(a.distance_to_segment(s));
            }
            for p in &other.points {
                best = best.min(a.distance_to_point(p));
            }
        }
        for s in &self.segments {
            for b in &other.pieces {
                best = best.min(b.distance_to_segment(s));
            }
            for t in &other.segments {
                best = best.min(super::primitives::segment_segment_distance(s, t));
            }
            for p in &other.points {
                best = best.min(super::primitives::point_segment_distance(p, s));
            }
        }
        for p in &self.points {
            for b in &other.pieces {
                best = best.min(b.distance_to_point(p));
            }
            for t in &other.segments {
                best = best.min(super::primitives::point_segment_distance(p, t));
            }
            for q in &other.points {
                best = best.min(p.distance_to(q));
            }
        }
        best
    }

    /// Point-set intersection. The two-dimensional parts are regularized:
    /// degenerate contact between area pieces is dropped, while genuine
    /// mixed-dimension results (line clipped by area) are kept.
    pub fn intersection(&self, other: &PointSetRegion<T>) -> PointSetRegion<T> {
        let eps = T::eps();
        let mut out = PointSetRegion::empty();
        for a in &self.pieces {
            for b in &other.pieces {
                if let Some(c) = a.intersect(b) {
                    out.pieces.push(c);
                }
            }
        }
        let mut clip_segments = |segs: &[Segment<T>], pieces: &[Convex<T>]| {
            for s in segs {
                for piece in pieces {
                    if let Some((t0, t1)) = piece.clip_segment(s) {
                        let p0 = s.at(t0);
                        let p1 = s.at(t1);
                        if p0.close_to(&p1, eps) {
                            out.points.push(p0);
                        } else {
                            out.segments.push(Segment::new(p0, p1));
                        }
                    }
                }
            }
        };
        clip_segments(&self.segments, &other.pieces);
        clip_segments(&other.segments, &self.pieces);
        for s in &self.segments {
            for t in &other.segments {
                match segment_intersection(s, t) {
                    SegSeg::Disjoint => {}
                    SegSeg::At(p) => out.points.push(p),
                    SegSeg::Overlap(seg) => out.segments.push(seg),
                }
            }
        }
        for p in &self.points {
            if other.contains_point(p) {
                out.points.push(*p);
            }
        }
        for p in &other.points {
            if self.contains_point(p) {
                out.points.push(*p);
            }
        }
        out.normalize_lower_dims();
        out
    }

    /// Regularized point-set difference (closed pieces are kept).
    pub fn difference(&self, other: &PointSetRegion<T>) -> PointSetRegion<T> {
        let mut out = PointSetRegion::empty();
        out.pieces = subtract_pieces(&self.pieces, &other.pieces);
        for s in &self.segments {
            out.segments
                .extend(subtract_segment(s, other).into_iter());
        }
        for p in &self.points {
            if !other.contains_point(p) {
                out.points.push(*p);
            }
        }
        out.normalize_lower_dims();
        out
    }

    /// Point-set union with interior-disjoint output pieces.
    pub fn union(&self, other: &PointSetRegion<T>) -> PointSetRegion<T> {
        let mut out = self.clone();
        out.pieces.extend(subtract_pieces(&other.pieces, &self.pieces));
        out.segments.extend(other.segments.iter().copied());
        out.points.extend(other.points.iter().copied());
        out.normalize_lower_dims();
        out
    }

    pub fn sym_difference(&self, other: &PointSetRegion<T>) -> PointSetRegion<T> {
        self.difference(other).union(&other.difference(self))
    }

    /// True when every point of `self` lies in `other` (up to sliver
    /// tolerances on areas and lengths).
    pub fn subset_of(&self, other: &PointSetRegion<T>) -> bool {
        let eps = T::eps();
        for piece in &self.pieces {
            let residual = subtract_pieces(&[piece.clone()], &other.pieces);
            let residual_area: T = residual.iter().map(Convex::area).fold(T::zero(), |a, b| a + b);
            let tol = T::sliver_eps().max(piece.area() * T::from_f64(1e-9));
            if residual_area > tol {
                return false;
            }
        }
        for s in &self.segments {
            let len = s.length();
            if len <= eps {
                if !other.contains_point(&s.a) {
                    return false;
                }
                continue;
            }
            let covered = covered_intervals(s, other);
            let uncovered = len - interval_total(&covered) * len;
            if uncovered > eps.max(len * T::from_f64(1e-7)) {
                return false;
            }
        }
        for p in &self.points {
            if !other.contains_point(p) {
                return false;
            }
        }
        true
    }

    /// Overlap test used for raster cell selection: two-dimensional parts
    /// must overlap the cell with positive area (edge contact does not
    /// count), while line and point parts count on closed contact.
    pub fn overlaps_cell(&self, cell: &Rect<T>) -> bool {
        let eps = T::eps();
        if let Some(quad) = Convex::from_rect(cell.min_x, cell.min_y, cell.max_x, cell.max_y)
        {
            for piece in &self.pieces {
                if let Some(i) = piece.intersect(&quad) {
                    if i.area() > T::sliver_eps() {
                        return true;
                    }
                }
            }
            for s in &self.segments {
                if quad.distance_to_segment(s) <= eps {
                    return true;
                }
            }
        } else {
            // Degenerate cell rectangle: fall back to closed contact.
            let cell_region = PointSetRegion::from_rect(cell);
            if self.intersects(&cell_region) {
                return true;
            }
        }
        self.points.iter().any(|p| cell.contains_point(p))
    }

    /// The dimension of the highest-dimensional nonempty part.
    pub fn dimension(&self) -> Option<u8> {
        if !self.pieces.is_empty() {
            Some(2)
        } else if !self.segments.is_empty() {
            Some(1)
        } else if !self.points.is_empty() {
            Some(0)
        } else {
            None
        }
    }

    /// Converts back to a geometry: one polygon per piece, one linestring per
    /// segment, single members unwrapped, empty region to an empty collection.
    pub fn to_geometry(&self) -> Geometry<T> {
        let mut members: Vec<Geometry<T>> = Vec::new();
        for piece in &self.pieces {
            let mut ring: Vec<Point<T>> = piece.points().to_vec();
            ring.push(ring[0]);
            if let Ok(poly) = Polygon::new(ring) {
                members.push(Geometry::Polygon(poly));
            }
        }
        for s in &self.segments {
            if let Ok(ls) = LineString::new(vec![s.a, s.b]) {
                members.push(Geometry::LineString(ls));
            }
        }
        for p in &self.points {
            members.push(Geometry::Point(*p));
        }
        if members.len() == 1 {
            members.pop().unwrap()
        } else {
            Geometry::Collection(members)
        }
    }

    /// Adds a rectangle known to be interior-disjoint from the existing
    /// pieces (raster cells tile their domain).
    pub fn merge_disjoint_rect(&mut self, rect: &Rect<T>) {
        if let Some(quad) = Convex::from_rect(rect.min_x, rect.min_y, rect.max_x, rect.max_y)
        {
            self.pieces.push(quad);
        }
    }

    /// Drops zero-length segments, deduplicates points and removes lower
    /// dimensional parts already covered by higher-dimensional ones.
    fn normalize_lower_dims(&mut self) {
        let eps = T::eps();
        let pieces = std::mem::take(&mut self.pieces);
        let segments = std::mem::take(&mut self.segments);
        let points = std::mem::take(&mut self.points);
        self.pieces = pieces;
        for s in segments {
            if s.length() <= eps {
                self.points.push(s.a);
            } else {
                self.segments.push(s);
            }
        }
        for p in points {
            let on_piece = self
                .pieces
                .iter()
                .any(|c| c.contains_point(&p, eps));
            let on_segment = self
                .segments
                .iter()
                .any(|s| super::primitives::point_segment_distance(&p, s) <= eps);
            let duplicate = self.points.iter().any(|q| q.close_to(&p, eps));
            if !on_piece && !on_segment && !duplicate {
                self.points.push(p);
            }
        }
    }
}

fn linestring_segments<T: Scalar>(ls: &LineString<T>) -> Vec<Segment<T>> {
    let eps = T::eps();
    ls.points()
        .windows(2)
        .filter(|w| !w[0].close_to(&w[1], eps))
        .map(|w| Segment::new(w[0], w[1]))
        .collect()
}

/// Subtracts every piece of `subtrahend` from every piece of `minuend`.
fn subtract_pieces<T: Scalar>(minuend: &[Convex<T>], subtrahend: &[Convex<T>]) -> Vec<Convex<T>> {
    let mut current: Vec<Convex<T>> = minuend.to_vec();
    for sub in subtrahend {
        let mut next = Vec::with_capacity(current.len());
        for piece in &current {
            if !piece.contacts(sub) {
                next.push(piece.clone());
            } else {
                next.extend(piece.subtract(sub));
            }
        }
        current = next;
        if current.is_empty() {
            break;
        }
    }
    current
}

/// Parameter intervals of `s` covered by the region (area pieces plus
/// collinear segments), normalized and merged.
fn covered_intervals<T: Scalar>(s: &Segment<T>, region: &PointSetRegion<T>) -> Vec<(T, T)> {
    let eps = T::eps();
    let mut intervals: Vec<(T, T)> = Vec::new();
    for piece in &region.pieces {
        if let Some((t0, t1)) = piece.clip_segment(s) {
            intervals.push((t0, t1));
        }
    }
    for other in &region.segments {
        if signed_line_distance(&s.a, &s.b, &other.a).abs() <= eps
            && signed_line_distance(&s.a, &s.b, &other.b).abs() <= eps
        {
            if let Some((t0, t1)) = collinear_overlap_params(s, other) {
                intervals.push((t0, t1));
            }
        }
    }
    merge_intervals(intervals, eps / s.length().max(eps))
}

fn merge_intervals<T: Scalar>(mut intervals: Vec<(T, T)>, slack: T) -> Vec<(T, T)> {
    intervals.retain(|(a, b)| b >= a);
    intervals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut merged: Vec<(T, T)> = Vec::with_capacity(intervals.len());
    for (a, b) in intervals {
        match merged.last_mut() {
            Some(last) if a <= last.1 + slack => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    merged
}

fn interval_total<T: Scalar>(intervals: &[(T, T)]) -> T {
    intervals
        .iter()
        .map(|(a, b)| *b - *a)
        .fold(T::zero(), |acc, len| acc + len)
}

/// Portions of `s` outside the region, as sub-segments.
fn subtract_segment<T: Scalar>(s: &Segment<T>, region: &PointSetRegion<T>) -> Vec<Segment<T>> {
    let eps = T::eps();
    let len = s.length();
    if len <= eps {
        return if region.contains_point(&s.a) {
            Vec::new()
        } else {
            vec![*s]
        };
    }
    let covered = covered_intervals(s, region);
    let mut out = Vec::new();
    let mut cursor = T::zero();
    for (a, b) in &covered {
        if *a > cursor {
            out.push(Segment::new(s.at(cursor), s.at(*a)));
        }
        cursor = cursor.max(*b);
    }
    if cursor < T::one() {
        out.push(Segment::new(s.at(cursor), s.at(T::one())));
    }
    out.retain(|seg| seg.length() > eps);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect_region(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> PointSetRegion<f64> {
        PointSetRegion::from_rect(&Rect::new(min_x, min_y, max_x, max_y).unwrap())
    }

    #[test]
    fn intersection_of_overlapping_rects() {
        let a = rect_region(0.0, 0.0, 2.0, 2.0);
        let b = rect_region(1.0, 1.0, 3.0, 3.0);
        let i = a.intersection(&b);
        assert!((i.area() - 1.0).abs() < 1e-9);
        assert!(i.contains_point(&Point::new(1.5, 1.5)));
        assert!(!i.contains_point(&Point::new(0.5, 0.5)));
    }

    #[test]
    fn touching_rects_intersect_but_regularized_intersection_is_empty() {
        let a = rect_region(0.0, 0.0, 1.0, 1.0);
        let b = rect_region(1.0, 0.0, 2.0, 1.0);
        assert!(a.intersects(&b));
        let i = a.intersection(&b);
        assert!(i.pieces.is_empty());
    }

    #[test]
    fn union_area_of_disjoint_and_overlapping() {
        let a = rect_region(0.0, 0.0, 1.0, 1.0);
        let b = rect_region(2.0, 0.0, 3.0, 1.0);
        assert!((a.union(&b).area() - 2.0).abs() < 1e-9);

        let c = rect_region(0.5, 0.0, 1.5, 1.0);
        assert!((a.union(&c).area() - 1.5).abs() < 1e-9);
    }

    #[test]
    fn difference_drops_covered_area() {
        let a = rect_region(0.0, 0.0, 2.0, 1.0);
        let b = rect_region(1.0, 0.0, 2.0, 1.0);
        let d = a.difference(&b);
        assert!((d.area() - 1.0).abs() < 1e-9);
        assert!(d.contains_point(&Point::new(0.5, 0.5)));
        assert!(!d.contains_point(&Point::new(1.5, 0.5)));
    }

    #[test]
    fn segment_clipping_against_area() {
        let area = rect_region(0.0, 0.0, 2.0, 2.0);
        let line = PointSetRegion {
            segments: vec![Segment::new(Point::new(-1.0, 1.0), Point::new(3.0, 1.0))],
            ..PointSetRegion::empty()
        };
        let clipped = line.intersection(&area);
        assert!(clipped.pieces.is_empty());
        assert_eq!(clipped.segments.len(), 1);
        assert!((clipped.segments[0].length() - 2.0).abs() < 1e-9);

        let outside = line.difference(&area);
        let total: f64 = outside.segments.iter().map(Segment::length).sum();
        assert!((total - 2.0).abs() < 1e-9);
    }

    #[test]
    fn subset_tests() {
        let big = rect_region(0.0, 0.0, 4.0, 4.0);
        let small = rect_region(1.0, 1.0, 2.0, 2.0);
        assert!(small.subset_of(&big));
        assert!(!big.subset_of(&small));

        let line = PointSetRegion {
            segments: vec![Segment::new(Point::new(1.0, 1.0), Point::new(3.0, 3.0))],
            ..PointSetRegion::empty()
        };
        assert!(line.subset_of(&big));
        let poking_out = PointSetRegion {
            segments: vec![Segment::new(Point::new(1.0, 1.0), Point::new(5.0, 5.0))],
            ..PointSetRegion::empty()
        };
        assert!(!poking_out.subset_of(&big));
    }

    #[test]
    fn union_covering_hole_shape() {
        // Four rectangles forming a square annulus: a union with a hole in
        // the middle, which the convex decomposition represents exactly.
        let frame = rect_region(0.0, 0.0, 3.0, 1.0)
            .union(&rect_region(0.0, 2.0, 3.0, 3.0))
            .union(&rect_region(0.0, 1.0, 1.0, 2.0))
            .union(&rect_region(2.0, 1.0, 3.0, 2.0));
        assert!((frame.area() - 8.0).abs() < 1e-9);
        assert!(!frame.contains_point(&Point::new(1.5, 1.5)));
        assert!(frame.contains_point(&Point::new(0.5, 1.5)));
    }

    #[test]
    fn distance_between_regions() {
        let a = rect_region(0.0, 0.0, 1.0, 1.0);
        let b = rect_region(4.0, 0.0, 5.0, 1.0);
        assert!((a.distance(&b) - 3.0).abs() < 1e-9);
        assert_eq!(a.distance(&rect_region(0.5, 0.5, 2.0, 2.0)), 0.0);
    }
}
