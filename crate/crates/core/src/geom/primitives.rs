//! Low-level numeric primitives shared by the region engine: segment math,
//! convex polygon clipping, hulls and triangulation.

use super::Point;
use crate::scalar::Scalar;

/// Cross product of (a - o) x (b - o).
pub(crate) fn cross<T: Scalar>(o: &Point<T>, a: &Point<T>, b: &Point<T>) -> T {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn dot<T: Scalar>(ax: T, ay: T, bx: T, by: T) -> T {
    ax * bx + ay * by
}

/// Signed area of an open ring (positive for counterclockwise).
pub(crate) fn signed_ring_area<T: Scalar>(open_ring: &[Point<T>]) -> T {
    let mut sum = T::zero();
    let n = open_ring.len();
    for i in 0..n {
        let a = &open_ring[i];
        let b = &open_ring[(i + 1) % n];
        sum = sum + a.x * b.y - b.x * a.y;
    }
    sum * T::half()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment<T: Scalar> {
    pub a: Point<T>,
    pub b: Point<T>,
}

impl<T: Scalar> Segment<T> {
    pub fn new(a: Point<T>, b: Point<T>) -> Segment<T> {
        Segment { a, b }
    }

    pub fn length(&self) -> T {
        self.a.distance_to(&self.b)
    }

    pub fn at(&self, t: T) -> Point<T> {
        Point::new(
            self.a.x + (self.b.x - self.a.x) * t,
            self.a.y + (self.b.y - self.a.y) * t,
        )
    }
}

/// Signed distance of `p` from the directed line `u -> v` (positive on the
/// left). Zero-length lines yield the plain point distance.
pub(crate) fn signed_line_distance<T: Scalar>(u: &Point<T>, v: &Point<T>, p: &Point<T>) -> T {
    let len = u.distance_to(v);
    if len <= T::eps() {
        return u.distance_to(p);
    }
    cross(u, v, p) / len
}

pub(crate) fn point_segment_distance<T: Scalar>(p: &Point<T>, s: &Segment<T>) -> T {
    let dx = s.b.x - s.a.x;
    let dy = s.b.y - s.a.y;
    let len2 = dx * dx + dy * dy;
    if len2 <= T::eps() * T::eps() {
        return p.distance_to(&s.a);
    }
    let t = (dot(p.x - s.a.x, p.y - s.a.y, dx, dy) / len2)
        .max(T::zero())
        .min(T::one());
    p.distance_to(&s.at(t))
}

pub(crate) fn segment_segment_distance<T: Scalar>(s1: &Segment<T>, s2: &Segment<T>) -> T {
    if segments_properly_cross(s1, s2) {
        return T::zero();
    }
    point_segment_distance(&s1.a, s2)
        .min(point_segment_distance(&s1.b, s2))
        .min(point_segment_distance(&s2.a, s1))
        .min(point_segment_distance(&s2.b, s1))
}

/// True when the open interiors of two segments cross transversally.
fn segments_properly_cross<T: Scalar>(s1: &Segment<T>, s2: &Segment<T>) -> bool {
    let d1 = cross(&s2.a, &s2.b, &s1.a);
    let d2 = cross(&s2.a, &s2.b, &s1.b);
    let d3 = cross(&s1.a, &s1.b, &s2.a);
    let d4 = cross(&s1.a, &s1.b, &s2.b);
    ((d1 > T::zero() && d2 < T::zero()) || (d1 < T::zero() && d2 > T::zero()))
        && ((d3 > T::zero() && d4 < T::zero()) || (d3 < T::zero() && d4 > T::zero()))
}

/// Classification of a segment/segment intersection.
pub(crate) enum SegSeg<T: Scalar> {
    Disjoint,
    At(Point<T>),
    Overlap(Segment<T>),
}

pub(crate) fn segment_intersection<T: Scalar>(s1: &Segment<T>, s2: &Segment<T>) -> SegSeg<T> {
    let eps = T::eps();
    let d1x = s1.b.x - s1.a.x;
    let d1y = s1.b.y - s1.a.y;
    let d2x = s2.b.x - s2.a.x;
    let d2y = s2.b.y - s2.a.y;
    let denom = d1x * d2y - d1y * d2x;
    let len1 = s1.length().max(eps);
    let len2 = s2.length().max(eps);

    if denom.abs() <= eps * len1.max(len2) {
        // Parallel. Collinear overlap when both endpoints of s2 sit on s1's line.
        if signed_line_distance(&s1.a, &s1.b, &s2.a).abs() > eps
            || signed_line_distance(&s1.a, &s1.b, &s2.b).abs() > eps
        {
            return SegSeg::Disjoint;
        }
        let (t0, t1) = match collinear_overlap_params(s1, s2) {
            Some(range) => range,
            None => return SegSeg::Disjoint,
        };
        let p0 = s1.at(t0);
        let p1 = s1.at(t1);
        if p0.close_to(&p1, eps) {
            return SegSeg::At(p0);
        }
        return SegSeg::Overlap(Segment::new(p0, p1));
    }

    let t = ((s2.a.x - s1.a.x) * d2y - (s2.a.y - s1.a.y) * d2x) / denom;
    let u = ((s2.a.x - s1.a.x) * d1y - (s2.a.y - s1.a.y) * d1x) / denom;
    let slack1 = eps / len1;
    let slack2 = eps / len2;
    if t >= -slack1 && t <= T::one() + slack1 && u >= -slack2 && u <= T::one() + slack2 {
        SegSeg::At(s1.at(t.max(T::zero()).min(T::one())))
    } else {
        SegSeg::Disjoint
    }
}

/// Parameter interval of `s1` covered by a collinear `s2`, when nonempty.
pub(crate) fn collinear_overlap_params<T: Scalar>(
    s1: &Segment<T>,
    s2: &Segment<T>,
) -> Option<(T, T)> {
    let dx = s1.b.x - s1.a.x;
    let dy = s1.b.y - s1.a.y;
    let len2 = dx * dx + dy * dy;
    if len2 <= T::eps() * T::eps() {
        return None;
    }
    let project = |p: &Point<T>| dot(p.x - s1.a.x, p.y - s1.a.y, dx, dy) / len2;
    let ta = project(&s2.a);
    let tb = project(&s2.b);
    let lo = ta.min(tb).max(T::zero());
    let hi = ta.max(tb).min(T::one());
    if lo <= hi {
        Some((lo, hi))
    } else {
        None
    }
}

/// Convex polygon with counterclockwise vertices and positive area.
#[derive(Debug, Clone, PartialEq)]
pub struct Convex<T: Scalar> {
    pts: Vec<Point<T>>,
}

impl<T: Scalar> Convex<T> {
    /// Builds from a vertex loop; orientation is normalized, consecutive
    /// duplicates are merged. Returns `None` for degenerate input.
    pub(crate) fn from_points(mut pts: Vec<Point<T>>) -> Option<Convex<T>> {
        let eps = T::eps();
        pts.dedup_by(|a, b| a.close_to(b, eps));
        while pts.len() > 1 && pts[0].close_to(pts.last().unwrap(), eps) {
            pts.pop();
        }
        if pts.len() < 3 {
            return None;
        }
        if signed_ring_area(&pts) < T::zero() {
            pts.reverse();
        }
        let c = Convex { pts };
        if c.area() <= T::sliver_eps() {
            None
        } else {
            Some(c)
        }
    }

    pub(crate) fn triangle(a: Point<T>, b: Point<T>, c: Point<T>) -> Option<Convex<T>> {
        Convex::from_points(vec![a, b, c])
    }

    pub(crate) fn from_rect(
        min_x: T,
        min_y: T,
        max_x: T,
        max_y: T,
    ) -> Option<Convex<T>> {
        Convex::from_points(vec![
            Point::new(min_x, min_y),
            Point::new(max_x, min_y),
            Point::new(max_x, max_y),
            Point::new(min_x, max_y),
        ])
    }

    pub(crate) fn points(&self) -> &[Point<T>] {
        &self.pts
    }

    pub(crate) fn area(&self) -> T {
        signed_ring_area(&self.pts).abs()
    }

    pub(crate) fn edges(&self) -> impl Iterator<Item = Segment<T>> + '_ {
        let n = self.pts.len();
        (0..n).map(move |i| Segment::new(self.pts[i], self.pts[(i + 1) % n]))
    }

    /// Closed-set membership with tolerance.
    pub(crate) fn contains_point(&self, p: &Point<T>, eps: T) -> bool {
        self.edges()
            .all(|e| signed_line_distance(&e.a, &e.b, p) >= -eps)
    }

    /// Strict interior membership: at distance greater than `eps` from
    /// every edge line.
    pub(crate) fn strictly_contains_point(&self, p: &Point<T>, eps: T) -> bool {
        self.edges()
            .all(|e| signed_line_distance(&e.a, &e.b, p) > eps)
    }

    /// Clips against the left (or right) side of the directed line `u -> v`.
    pub(crate) fn clip_line(
        &self,
        u: &Point<T>,
        v: &Point<T>,
        keep_left: bool,
    ) -> Option<Convex<T>> {
        let eps = T::eps();
        let side = |p: &Point<T>| {
            let d = signed_line_distance(u, v, p);
            if keep_left {
                d
            } else {
                -d
            }
        };
        let n = self.pts.len();
        let mut out: Vec<Point<T>> = Vec::with_capacity(n + 2);
        for i in 0..n {
            let cur = &self.pts[i];
            let next = &self.pts[(i + 1) % n];
            let d_cur = side(cur);
            let d_next = side(next);
            if d_cur >= -eps {
                out.push(*cur);
            }
            if (d_cur > eps && d_next < -eps) || (d_cur < -eps && d_next > eps) {
                let t = d_cur / (d_cur - d_next);
                out.push(Segment::new(*cur, *next).at(t));
            }
        }
        Convex::from_points(out)
    }

    pub(crate) fn intersect(&self, other: &Convex<T>) -> Option<Convex<T>> {
        let mut cur = self.clone();
        let n = other.pts.len();
        for i in 0..n {
            let u = other.pts[i];
            let v = other.pts[(i + 1) % n];
            cur = cur.clip_line(&u, &v, true)?;
        }
        Some(cur)
    }

    /// Decomposes `self` minus `other` into interior-disjoint convex pieces.
    pub(crate) fn subtract(&self, other: &Convex<T>) -> Vec<Convex<T>> {
        let mut pieces = Vec::new();
        let mut cur = Some(self.clone());
        let n = other.pts.len();
        for i in 0..n {
            let Some(c) = cur else { break };
            let u = other.pts[i];
            let v = other.pts[(i + 1) % n];
            if let Some(outside) = c.clip_line(&u, &v, false) {
                pieces.push(outside);
            }
            cur = c.clip_line(&u, &v, true);
        }
        pieces
    }

    /// Separating-axis contact test on the closed sets; touching counts.
    pub(crate) fn contacts(&self, other: &Convex<T>) -> bool {
        let eps = T::eps();
        let separated_by = |poly: &Convex<T>, pts: &[Point<T>]| {
            poly.edges().any(|e| {
                pts.iter()
                    .all(|p| signed_line_distance(&e.a, &e.b, p) < -eps)
            })
        };
        !separated_by(self, &other.pts) && !separated_by(other, &self.pts)
    }

    pub(crate) fn distance_to_convex(&self, other: &Convex<T>) -> T {
        if self.contacts(other) {
            return T::zero();
        }
        let mut best = T::infinity();
        for e1 in self.edges() {
            for e2 in other.edges() {
                best = best.min(segment_segment_distance(&e1, &e2));
            }
        }
        best
    }

    pub(crate) fn distance_to_segment(&self, seg: &Segment<T>) -> T {
        if self.contains_point(&seg.a, T::eps()) || self.contains_point(&seg.b, T::eps()) {
            return T::zero();
        }
        let mut best = T::infinity();
        for e in self.edges() {
            best = best.min(segment_segment_distance(&e, seg));
            if best <= T::zero() {
                return T::zero();
            }
        }
        best
    }

    pub(crate) fn distance_to_point(&self, p: &Point<T>) -> T {
        if self.contains_point(p, T::eps()) {
            return T::zero();
        }
        self.edges()
            .map(|e| point_segment_distance(p, &e))
            .fold(T::infinity(), T::min)
    }

    /// Parameter interval of `seg` inside the convex (closed), when nonempty.
    pub(crate) fn clip_segment(&self, seg: &Segment<T>) -> Option<(T, T)> {
        let mut lo = T::zero();
        let mut hi = T::one();
        let n = self.pts.len();
        for i in 0..n {
            let u = &self.pts[i];
            let v = &self.pts[(i + 1) % n];
            let da = signed_line_distance(u, v, &seg.a);
            let db = signed_line_distance(u, v, &seg.b);
            let eps = T::eps();
            if da < -eps && db < -eps {
                return None;
            }
            if da >= -eps && db >= -eps {
                continue;
            }
            let t = da / (da - db);
            if da < db {
                lo = lo.max(t);
            } else {
                hi = hi.min(t);
            }
        }
        if lo <= hi {
            Some((lo, hi))
        } else {
            None
        }
    }
}

/// True when any two non-adjacent ring edges make contact, or adjacent
/// edges overlap beyond their shared vertex (spikes).
pub(crate) fn ring_self_intersects<T: Scalar>(open_ring: &[Point<T>], eps: T) -> bool {
    let n = open_ring.len();
    let edge = |i: usize| Segment::new(open_ring[i], open_ring[(i + 1) % n]);
    for i in 0..n {
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (ei, ej) = (edge(i), edge(j));
            if adjacent {
                // Only the shared endpoint may be common; collinear
                // back-tracking makes the shared portion longer than a point.
                if let SegSeg::Overlap(_) = segment_intersection(&ei, &ej) {
                    return true;
                }
            } else if segment_segment_distance(&ei, &ej) <= eps {
                return true;
            }
        }
    }
    false
}

/// Convex hull of a point set (monotone chain). Returns the hull as an
/// open counterclockwise ring; fewer than 3 distinct points fall through
/// unchanged.
pub(crate) fn convex_hull_points<T: Scalar>(points: &[Point<T>]) -> Vec<Point<T>> {
    let mut pts: Vec<Point<T>> = points.to_vec();
    pts.sort_by(|a, b| {
        a.x.partial_cmp(&b.x)
            .unwrap()
            .then(a.y.partial_cmp(&b.y).unwrap())
    });
    pts.dedup_by(|a, b| a.close_to(b, T::eps()));
    if pts.len() < 3 {
        return pts;
    }
    let chain = |iter: &mut dyn Iterator<Item = &Point<T>>| {
        let mut out: Vec<Point<T>> = Vec::new();
        for p in iter {
            while out.len() >= 2 {
                let o = &out[out.len() - 2];
                let a = &out[out.len() - 1];
                // Pop right turns and collinear runs.
                if signed_line_distance(o, a, p) <= T::eps() {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(*p);
        }
        out
    };
    let mut lower = chain(&mut pts.iter());
    let mut upper = chain(&mut pts.iter().rev());
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Ear-clipping triangulation of a simple counterclockwise open ring.
pub(crate) fn triangulate<T: Scalar>(open_ccw_ring: &[Point<T>]) -> Vec<Convex<T>> {
    let mut idx: Vec<usize> = (0..open_ccw_ring.len()).collect();
    let mut triangles = Vec::new();
    let pts = open_ccw_ring;
    let eps = T::eps();

    // A vertex is reflex when the ring turns right there (CCW orientation).
    let is_reflex = |idx: &[usize], k: usize| {
        let n = idx.len();
        let p = &pts[idx[(k + n - 1) % n]];
        let c = &pts[idx[k]];
        let q = &pts[idx[(k + 1) % n]];
        signed_line_distance(p, q, c) > eps
    };

    let mut guard = idx.len() * idx.len() + 16;
    while idx.len() > 3 && guard > 0 {
        guard -= 1;
        let n = idx.len();
        let mut clipped = false;
        for k in 0..n {
            let ip = idx[(k + n - 1) % n];
            let ic = idx[k];
            let inx = idx[(k + 1) % n];
            let (p, c, q) = (&pts[ip], &pts[ic], &pts[inx]);
            let turn = signed_line_distance(p, q, c);
            if turn >= -eps {
                // Reflex vertex, or a collinear one that is safe to drop.
                if turn.abs() <= eps && cross(p, c, q).abs() <= eps {
                    idx.remove(k);
                    clipped = true;
                    break;
                }
                continue;
            }
            let ear = Convex::triangle(*p, *c, *q);
            let Some(tri) = ear else {
                idx.remove(k);
                clipped = true;
                break;
            };
            // Blockers: any strictly interior vertex, or a reflex vertex on
            // the ear's boundary (typically on the chord p-q).
            let blocked = (0..n).any(|j| {
                let other = idx[j];
                if other == ip || other == ic || other == inx {
                    return false;
                }
                let w = &pts[other];
                if tri.strictly_contains_point(w, eps) {
                    return true;
                }
                tri.contains_point(w, eps) && is_reflex(&idx, j)
            });
            if !blocked {
                triangles.push(tri);
                idx.remove(k);
                clipped = true;
                break;
            }
        }
        if !clipped {
            // Numerical stalemate: fall back to a fan from the first vertex.
            break;
        }
    }
    if idx.len() == 3 {
        if let Some(tri) = Convex::triangle(pts[idx[0]], pts[idx[1]], pts[idx[2]]) {
            triangles.push(tri);
        }
    } else if idx.len() > 3 {
        for k in 1..idx.len() - 1 {
            if let Some(tri) = Convex::triangle(pts[idx[0]], pts[idx[k]], pts[idx[k + 1]]) {
                triangles.push(tri);
            }
        }
    }
    triangles
}
