//! Map algebra: cellwise operators, aggregates, raster/geometry
//! intersection and union, rasterization, rescaling and raster-to-vector
//! relations.
//!
//! Binary operators keep the domain, shape and scale of the first raster.
//! Correspondence between misaligned grids is resolved by looking up the
//! first raster's cell center in the second raster. NODATA rules: a NODATA
//! cell in the first raster stays NODATA; a missing or NODATA counterpart
//! in the second raster keeps the first raster's value.

use super::{Raster, RasterError, Scale};
use crate::geom::{
    buffer, distance, geom_intersection, sf_predicate, Geometry, PointSetRegion, Rect,
    SfPredicate,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Plus,
    Subtract,
    Mult,
    Div,
    And,
    Or,
    Xor,
    Equals,
}

impl BinaryOp {
    pub const ALL: [BinaryOp; 8] = [
        BinaryOp::Plus,
        BinaryOp::Subtract,
        BinaryOp::Mult,
        BinaryOp::Div,
        BinaryOp::And,
        BinaryOp::Or,
        BinaryOp::Xor,
        BinaryOp::Equals,
    ];

    /// Applies the operator to two valid values; `None` means NODATA
    /// (division by zero).
    pub fn apply<T: Scalar>(self, a: T, b: T) -> Option<T> {
        let truthy = |v: T| v != T::zero();
        let bool_val = |v: bool| if v { T::one() } else { T::zero() };
        Some(match self {
            BinaryOp::Plus => a + b,
            BinaryOp::Subtract => a - b,
            BinaryOp::Mult => a * b,
            BinaryOp::Div => {
                if b == T::zero() {
                    return None;
                }
                a / b
            }
            BinaryOp::And => bool_val(truthy(a) && truthy(b)),
            BinaryOp::Or => bool_val(truthy(a) || truthy(b)),
            BinaryOp::Xor => bool_val(truthy(a) != truthy(b)),
            BinaryOp::Equals => bool_val(a == b),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConstOp {
    Plus,
    Subtract,
    Mult,
    Div,
    And,
    Or,
    Xor,
    Equals,
    Exp,
    /// Keeps values greater than the constant, all others become NODATA.
    GreaterKeep,
    /// Keeps values smaller than the constant, all others become NODATA.
    SmallerKeep,
}

impl ConstOp {
    pub const ALL: [ConstOp; 11] = [
        ConstOp::Plus,
        ConstOp::Subtract,
        ConstOp::Mult,
        ConstOp::Div,
        ConstOp::And,
        ConstOp::Or,
        ConstOp::Xor,
        ConstOp::Equals,
        ConstOp::Exp,
        ConstOp::GreaterKeep,
        ConstOp::SmallerKeep,
    ];

    /// Applies the operator to a valid value; `None` means NODATA.
    pub fn apply<T: Scalar>(self, v: T, c: T) -> Option<T> {
        match self {
            ConstOp::Plus => BinaryOp::Plus.apply(v, c),
            ConstOp::Subtract => BinaryOp::Subtract.apply(v, c),
            ConstOp::Mult => BinaryOp::Mult.apply(v, c),
            ConstOp::Div => BinaryOp::Div.apply(v, c),
            ConstOp::And => BinaryOp::And.apply(v, c),
            ConstOp::Or => BinaryOp::Or.apply(v, c),
            ConstOp::Xor => BinaryOp::Xor.apply(v, c),
            ConstOp::Equals => BinaryOp::Equals.apply(v, c),
            ConstOp::Exp => Some(v.powf(c)),
            ConstOp::GreaterKeep => (v > c).then_some(v),
            ConstOp::SmallerKeep => (v < c).then_some(v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    /// Nonzero values become 0, zero becomes 1, NODATA is unchanged.
    Not,
    /// Negates every valid value.
    Invert,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggregateOp {
    Min,
    Max,
    Mean,
}

/// Cellwise binary operator over the first raster's grid.
pub fn cellwise_binary<T: Scalar>(op: BinaryOp, r1: &Raster<T>, r2: &Raster<T>) -> Raster<T> {
    let mut out = r1.clone();
    for (col, row, v1) in r1.cells() {
        if r1.is_nodata(v1) {
            out.set_value(col, row, r1.nodata());
            continue;
        }
        let (cx, cy) = r1.cell_center(col, row);
        let v2 = match r2.cellval(cx, cy) {
            Ok(v) if !r2.is_nodata(v) => v,
            _ => {
                // No correspondence, or NODATA on the second raster: the
                // first raster's value is kept unchanged.
                continue;
            }
        };
        let result = match op.apply(v1, v2) {
            Some(v) => out.guard_sentinel(v),
            None => out.nodata(),
        };
        out.set_value(col, row, result);
    }
    out
}

/// Cellwise operator against a constant.
pub fn cellwise_binary_const<T: Scalar>(op: ConstOp, r: &Raster<T>, c: T) -> Raster<T> {
    let nodata = r.nodata();
    let guard = |r: &Raster<T>, v: T| r.guard_sentinel(v);
    let mut out = r.clone();
    for (col, row, v) in r.cells() {
        if r.is_nodata(v) {
            out.set_value(col, row, nodata);
            continue;
        }
        let result = match op.apply(v, c) {
            Some(v) => guard(r, v),
            None => nodata,
        };
        out.set_value(col, row, result);
    }
    out
}

pub fn cellwise_unary<T: Scalar>(op: UnaryOp, r: &Raster<T>) -> Raster<T> {
    let nodata = r.nodata();
    r.map_values(|v| {
        if v == nodata || v.is_nan() {
            return v;
        }
        let result = match op {
            UnaryOp::Not => {
                if v != T::zero() {
                    T::zero()
                } else {
                    T::one()
                }
            }
            UnaryOp::Invert => -v,
        };
        if result == nodata {
            result.next_up_value()
        } else {
            result
        }
    })
}

/// Aggregate over the valid cells only.
pub fn aggregate<T: Scalar>(op: AggregateOp, r: &Raster<T>) -> Result<T, RasterError> {
    let values = r.cellval2();
    if values.is_empty() {
        return Err(RasterError::AllNodata);
    }
    Ok(match op {
        AggregateOp::Min => values.iter().copied().fold(T::infinity(), T::min),
        AggregateOp::Max => values.iter().copied().fold(T::neg_infinity(), T::max),
        AggregateOp::Mean => {
            let sum = values.iter().copied().fold(T::zero(), |a, b| a + b);
            sum / T::from_usize(values.len())
        }
    })
}

/// A raster or geometry argument for the mixed-signature operations.
#[derive(Debug, Clone, Copy)]
pub enum RasterOrGeom<'a, T: Scalar> {
    Raster(&'a Raster<T>),
    Geom(&'a Geometry<T>),
}

impl<'a, T: Scalar> RasterOrGeom<'a, T> {
    fn as_geometry(&self) -> Geometry<T> {
        match self {
            RasterOrGeom::Raster(r) => r.domain_geometry(),
            RasterOrGeom::Geom(g) => (*g).clone(),
        }
    }
}

/// Picks the raster that supplies the cells and the other argument's region,
/// following the argument-swap rule.
fn split_raster_other<'a, T: Scalar>(
    a: RasterOrGeom<'a, T>,
    b: RasterOrGeom<'a, T>,
) -> Result<(&'a Raster<T>, RasterOrGeom<'a, T>), RasterError> {
    match (a, b) {
        (RasterOrGeom::Raster(r), other) => Ok((r, other)),
        (other @ RasterOrGeom::Geom(_), RasterOrGeom::Raster(r)) => Ok((r, other)),
        (RasterOrGeom::Geom(_), RasterOrGeom::Geom(_)) => Err(RasterError::Type(
            "operation requires at least one raster argument".into(),
        )),
    }
}

/// Region of the second argument used for cell-overlap tests: the domain
/// rectangle for a raster, the point set for a geometry. Area targets must
/// overlap a cell with positive area; lines and points count on contact.
enum OverlapTarget<T: Scalar> {
    Rect(Rect<T>),
    Region(Rect<T>, PointSetRegion<T>),
}

impl<T: Scalar> OverlapTarget<T> {
    fn new(other: &RasterOrGeom<'_, T>) -> OverlapTarget<T> {
        match other {
            RasterOrGeom::Raster(r) => OverlapTarget::Rect(r.domain_rect()),
            RasterOrGeom::Geom(g) => {
                OverlapTarget::Region(crate::geom::envelope(g), g.to_region())
            }
        }
    }

    fn intersects_cell(&self, cell: &Rect<T>) -> bool {
        match self {
            OverlapTarget::Rect(r) => match r.intersection(cell) {
                Some(i) => i.area() > T::sliver_eps(),
                None => false,
            },
            OverlapTarget::Region(env, region) => {
                env.intersects_rect(cell) && region.overlaps_cell(cell)
            }
        }
    }
}

/// Keeps the cells of the raster argument whose cell rectangle intersects
/// the other argument (raster domain or geometry point set); all other
/// cells become NODATA.
pub fn raster_intersection<T: Scalar>(
    a: RasterOrGeom<'_, T>,
    b: RasterOrGeom<'_, T>,
) -> Result<Raster<T>, RasterError> {
    let (r, other) = split_raster_other(a, b)?;
    let target = OverlapTarget::new(&other);
    let mut out = r.clone();
    for (col, row, _) in r.cells() {
        if !target.intersects_cell(&r.cell_rect(col, row)) {
            out.set_value(col, row, r.nodata());
        }
    }
    Ok(out)
}

/// The complement of [`raster_intersection`] for a raster/geometry pair:
/// cells intersecting the geometry become NODATA, all others are kept.
/// For two aligned rasters this is the per-cell first-valid merge over the
/// first raster's grid.
pub fn raster_union<T: Scalar>(
    a: RasterOrGeom<'_, T>,
    b: RasterOrGeom<'_, T>,
) -> Result<Raster<T>, RasterError> {
    if let (RasterOrGeom::Raster(r1), RasterOrGeom::Raster(r2)) = (a, b) {
        if !r1.aligned_with(r2) {
            return Err(RasterError::Misaligned(
                "raster union of two rasters requires identical grids".into(),
            ));
        }
        let mut out = r1.clone();
        for (col, row, v1) in r1.cells() {
            if r1.is_nodata(v1) {
                let v2 = r2.value_at(col, row);
                let merged = if r2.is_nodata(v2) {
                    out.nodata()
                } else {
                    out.guard_sentinel(v2)
                };
                out.set_value(col, row, merged);
            }
        }
        return Ok(out);
    }
    let (r, other) = split_raster_other(a, b)?;
    let target = OverlapTarget::new(&other);
    let mut out = r.clone();
    for (col, row, _) in r.cells() {
        if target.intersects_cell(&r.cell_rect(col, row)) {
            out.set_value(col, row, r.nodata());
        }
    }
    Ok(out)
}

/// Geometry-valued intersection: rasters take part via their domain
/// rectangle.
pub fn geometry_intersection<T: Scalar>(
    a: RasterOrGeom<'_, T>,
    b: RasterOrGeom<'_, T>,
) -> Geometry<T> {
    geom_intersection(&a.as_geometry(), &b.as_geometry())
}

/// Default NODATA for rasters created from geometries; moved away from the
/// painted value if they would collide.
fn fresh_nodata<T: Scalar>(painted: T) -> T {
    let candidate = T::from_f64(-9999.0);
    if painted == candidate {
        T::from_f64(-10000.0)
    } else {
        candidate
    }
}

/// Rasterizes a geometry: the domain is a 1 meter bounding-box buffer
/// around the geometry, divided into `n_cols` x `n_rows` cells; every cell
/// touching the geometry's point set gets `value`, all others NODATA.
pub fn geom_to_raster<T: Scalar>(
    g: &Geometry<T>,
    value: T,
    n_cols: T,
    n_rows: T,
) -> Result<Raster<T>, RasterError> {
    let n_cols = positive_integer(n_cols, "column count")?;
    let n_rows = positive_integer(n_rows, "row count")?;
    let domain = buffer(g, T::one(), &format!("{}meter", crate::vocab::UOM_NS))
        .map_err(|e| RasterError::Argument(e.to_string()))?;
    let scale = Scale::ratio("", fresh_nodata(value));
    let nodata = scale.nodata;
    let mut out = Raster::new(
        domain.min_x,
        domain.min_y,
        domain.width() / T::from_usize(n_cols),
        domain.height() / T::from_usize(n_rows),
        n_cols,
        n_rows,
        vec![nodata; n_cols * n_rows],
        scale,
    )?;
    let env = crate::geom::envelope(g);
    let region = g.to_region();
    for row in 0..n_rows {
        for col in 0..n_cols {
            let cell = out.cell_rect(col, row);
            if env.intersects_rect(&cell)
                && region.intersects(&PointSetRegion::from_rect(&cell))
            {
                out.set_value(col, row, value);
            }
        }
    }
    Ok(out)
}

fn positive_integer<T: Scalar>(v: T, what: &str) -> Result<usize, RasterError> {
    let rounded = v.round();
    if (v - rounded).abs() > T::eps() || rounded < T::one() {
        return Err(RasterError::Argument(format!(
            "{what} must be a positive integer, got {v}"
        )));
    }
    rounded
        .to_usize()
        .ok_or_else(|| RasterError::Argument(format!("{what} out of range")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RasterRelation<T: Scalar> {
    CoveredBy,
    Overlaps,
    Touches,
    Within,
    EqualsGeom,
    EqualsContent,
    WithinDistance(T),
}

/// Raster-to-vector relations: rasters are replaced by their domain
/// rectangle, then the simple-features predicate (or distance threshold)
/// applies. `EqualsContent` additionally compares the cell values.
pub fn raster_relation<T: Scalar>(
    relation: RasterRelation<T>,
    a: RasterOrGeom<'_, T>,
    b: RasterOrGeom<'_, T>,
) -> Result<bool, RasterError> {
    if matches!((&a, &b), (RasterOrGeom::Geom(_), RasterOrGeom::Geom(_))) {
        return Err(RasterError::Type(
            "raster relation requires at least one raster argument".into(),
        ));
    }
    let ga = a.as_geometry();
    let gb = b.as_geometry();
    Ok(match relation {
        RasterRelation::CoveredBy => sf_predicate(SfPredicate::Covers, &gb, &ga),
        RasterRelation::Overlaps => sf_predicate(SfPredicate::Overlaps, &ga, &gb),
        RasterRelation::Touches => sf_predicate(SfPredicate::Touches, &ga, &gb),
        RasterRelation::Within => sf_predicate(SfPredicate::Within, &ga, &gb),
        RasterRelation::EqualsGeom => sf_predicate(SfPredicate::Equals, &ga, &gb),
        RasterRelation::EqualsContent => match (a, b) {
            (RasterOrGeom::Raster(r1), RasterOrGeom::Raster(r2)) => {
                sf_predicate(SfPredicate::Equals, &ga, &gb) && r1.val_eq(r2)
            }
            _ => {
                return Err(RasterError::Type(
                    "rasterEqualsContent requires two raster arguments".into(),
                ))
            }
        },
        RasterRelation::WithinDistance(d) => distance(&ga, &gb) <= d,
    })
}

/// Nearest-neighbor rescale onto a new grid over the same domain.
pub fn rescale<T: Scalar>(
    r: &Raster<T>,
    new_cols: usize,
    new_rows: usize,
) -> Result<Raster<T>, RasterError> {
    if new_cols == 0 || new_rows == 0 {
        return Err(RasterError::Argument(
            "rescale requires positive target dimensions".into(),
        ));
    }
    let domain = r.domain_rect();
    let mut out = Raster::new(
        domain.min_x,
        domain.min_y,
        domain.width() / T::from_usize(new_cols),
        domain.height() / T::from_usize(new_rows),
        new_cols,
        new_rows,
        vec![r.nodata(); new_cols * new_rows],
        r.scale().clone(),
    )?;
    for row in 0..new_rows {
        for col in 0..new_cols {
            let (cx, cy) = out.cell_center(col, row);
            if let Ok(v) = r.cellval(cx, cy) {
                out.set_value(col, row, v);
            }
        }
    }
    Ok(out)
}

/// Union of the rectangles of all valid (non-NODATA) cells: the point set a
/// raster denotes in raster-aware filter predicates. Total rasters reduce to
/// the full domain rectangle.
pub fn valid_region<T: Scalar>(r: &Raster<T>) -> PointSetRegion<T> {
    if r.valid_cell_count() == r.n_cols() * r.n_rows() {
        return PointSetRegion::from_rect(&r.domain_rect());
    }
    let mut region = PointSetRegion::empty();
    for (col, row, v) in r.cells() {
        if !r.is_nodata(v) {
            region
                .merge_disjoint_rect(&r.cell_rect(col, row));
        }
    }
    region
}

/// True when the geometry's point set overlaps any valid cell rectangle
/// (under the same overlap rule the raster intersection uses).
pub fn geometry_intersects_valid_cells<T: Scalar>(g: &Geometry<T>, r: &Raster<T>) -> bool {
    let env = crate::geom::envelope(g);
    if !env.intersects_rect(&r.domain_rect()) {
        return false;
    }
    let region = g.to_region();
    for (col, row, v) in r.cells() {
        if r.is_nodata(v) {
            continue;
        }
        let cell = r.cell_rect(col, row);
        if env.intersects_rect(&cell) && region.overlaps_cell(&cell) {
            return true;
        }
    }
    false
}
