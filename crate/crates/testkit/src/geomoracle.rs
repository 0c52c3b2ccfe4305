//! Independent geometry oracles: ray-cast membership, orientation-based
//! segment tests, ternary-search distances and Monte-Carlo areas. These
//! deliberately avoid the engine's region machinery.

use rand::Rng;

pub type P = (f64, f64);

fn cross(o: P, a: P, b: P) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Classic even-odd ray casting; `ring` is open (no closing duplicate).
/// Points exactly on the boundary may land on either side.
pub fn point_in_polygon(pt: P, ring: &[P]) -> bool {
    let mut inside = false;
    let n = ring.len();
    let (x, y) = pt;
    let mut j = n - 1;
    for i in 0..n {
        let (xi, yi) = ring[i];
        let (xj, yj) = ring[j];
        if ((yi > y) != (yj > y)) && (x < (xj - xi) * (y - yi) / (yj - yi) + xi) {
            inside = !inside;
        }
        j = i;
    }
    inside
}

/// Orientation-based closed segment intersection test.
pub fn segments_intersect(a1: P, a2: P, b1: P, b2: P) -> bool {
    let d1 = cross(b1, b2, a1);
    let d2 = cross(b1, b2, a2);
    let d3 = cross(a1, a2, b1);
    let d4 = cross(a1, a2, b2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on_segment = |p: P, q: P, r: P| {
        cross(p, q, r).abs() < 1e-12
            && r.0 >= p.0.min(q.0) - 1e-12
            && r.0 <= p.0.max(q.0) + 1e-12
            && r.1 >= p.1.min(q.1) - 1e-12
            && r.1 <= p.1.max(q.1) + 1e-12
    };
    on_segment(b1, b2, a1)
        || on_segment(b1, b2, a2)
        || on_segment(a1, a2, b1)
        || on_segment(a1, a2, b2)
}

/// Closed segment vs closed axis-aligned rectangle.
pub fn segment_intersects_rect(a: P, b: P, min: P, max: P) -> bool {
    let inside = |p: P| p.0 >= min.0 && p.0 <= max.0 && p.1 >= min.1 && p.1 <= max.1;
    if inside(a) || inside(b) {
        return true;
    }
    let corners = [
        (min.0, min.1),
        (max.0, min.1),
        (max.0, max.1),
        (min.0, max.1),
    ];
    (0..4).any(|i| segments_intersect(a, b, corners[i], corners[(i + 1) % 4]))
}

/// Positive-area overlap between a rectangle and a simple polygon, decided
/// on a slightly shrunken rectangle so pure edge contact does not count.
pub fn rect_polygon_area_overlap(min: P, max: P, ring: &[P]) -> bool {
    let margin = 1e-7 * ((max.0 - min.0).abs() + (max.1 - min.1).abs()).max(1.0);
    let smin = (min.0 + margin, min.1 + margin);
    let smax = (max.0 - margin, max.1 - margin);
    if smin.0 >= smax.0 || smin.1 >= smax.1 {
        return false;
    }
    if ring
        .iter()
        .any(|p| p.0 > smin.0 && p.0 < smax.0 && p.1 > smin.1 && p.1 < smax.1)
    {
        return true;
    }
    let corners = [smin, (smax.0, smin.1), smax, (smin.0, smax.1)];
    if corners.iter().any(|c| point_in_polygon(*c, ring)) {
        return true;
    }
    let n = ring.len();
    for i in 0..n {
        if segment_intersects_rect(ring[i], ring[(i + 1) % n], smin, smax) {
            return true;
        }
    }
    false
}

/// Minimum distance between two segments by nested ternary search; the
/// distance is convex in each parameter.
pub fn segment_distance_ternary(a1: P, a2: P, b1: P, b2: P) -> f64 {
    let at = |p: P, q: P, t: f64| (p.0 + (q.0 - p.0) * t, p.1 + (q.1 - p.1) * t);
    let dist = |p: P, q: P| ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt();
    let min_over_b = |pa: P| {
        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        for _ in 0..100 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if dist(pa, at(b1, b2, m1)) < dist(pa, at(b1, b2, m2)) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        dist(pa, at(b1, b2, (lo + hi) / 2.0))
    };
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for _ in 0..100 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if min_over_b(at(a1, a2, m1)) < min_over_b(at(a1, a2, m2)) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    min_over_b(at(a1, a2, (lo + hi) / 2.0))
}

/// Shoelace area of an open ring.
pub fn ring_area(ring: &[P]) -> f64 {
    let n = ring.len();
    let mut sum = 0.0;
    for i in 0..n {
        let (x1, y1) = ring[i];
        let (x2, y2) = ring[(i + 1) % n];
        sum += x1 * y2 - x2 * y1;
    }
    (sum / 2.0).abs()
}

/// Monte-Carlo polygon area from bounding-box sampling.
pub fn polygon_area_monte_carlo(ring: &[P], samples: usize, rng: &mut impl Rng) -> f64 {
    let min_x = ring.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let max_x = ring.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let min_y = ring.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let max_y = ring.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let bbox_area = (max_x - min_x) * (max_y - min_y);
    let mut hits = 0usize;
    for _ in 0..samples {
        let p = (rng.gen_range(min_x..=max_x), rng.gen_range(min_y..=max_y));
        if point_in_polygon(p, ring) {
            hits += 1;
        }
    }
    bbox_area * hits as f64 / samples as f64
}

/// Random convex polygon: points on a randomly scaled circle, returned as
/// an open counterclockwise ring with at least 3 vertices. Slivers are
/// rejected (the ring must fill a third of its bounding box) so that
/// bounding-box Monte-Carlo estimates stay sharp.
pub fn random_convex_ring(rng: &mut impl Rng, center: P, radius: f64) -> Vec<P> {
    loop {
        let n = rng.gen_range(3..=8);
        let mut angles: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|a, b| (*a - *b).abs() < 0.15);
        if angles.len() < 3 {
            continue;
        }
        let r = radius * rng.gen_range(0.6..1.0);
        let ring: Vec<P> = angles
            .iter()
            .map(|t| (center.0 + r * t.cos(), center.1 + r * t.sin()))
            .collect();
        let min_x = ring.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let max_x = ring.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        let min_y = ring.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let max_y = ring.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let bbox = (max_x - min_x) * (max_y - min_y);
        if bbox > 0.0 && ring_area(&ring) > bbox / 3.0 {
            return ring;
        }
    }
}

/// Distance from a point to an open ring's boundary.
pub fn point_ring_distance(pt: P, ring: &[P]) -> f64 {
    let n = ring.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        best = best.min(point_segment_distance(pt, ring[i], ring[(i + 1) % n]));
    }
    best
}

pub fn point_segment_distance(p: P, a: P, b: P) -> f64 {
    let dx = b.0 - a.0;
    let dy = b.1 - a.1;
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return ((p.0 - a.0).powi(2) + (p.1 - a.1).powi(2)).sqrt();
    }
    let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0);
    let q = (a.0 + dx * t, a.1 + dy * t);
    ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt()
}
