//! The raster data model: uniform rectangular grids of scale values with a
//! NODATA sentinel, cell access, accessors and the raster/geometry bridge.
//!
//! Grid layout: row index 0 is the bottom row (y grows with the row index),
//! values are stored row-major. Cells are half-open on their low edges so
//! interior edge points belong to the cell with the larger index, while the
//! domain's top and right boundary stay closed.

pub mod algebra;

use thiserror::Error;

use crate::geom::{Geometry, Rect};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum RasterError {
    #[error("position ({x}, {y}) is outside the raster domain")]
    OutOfDomain { x: f64, y: f64 },
    #[error("raster shape mismatch: {0}")]
    Shape(String),
    #[error("raster has no valid cells")]
    AllNodata,
    #[error("rasters are not aligned: {0}")]
    Misaligned(String),
    #[error("type error: {0}")]
    Type(String),
    #[error("invalid argument: {0}")]
    Argument(String),
}

/// Measurement scale kinds; metadata only, values are always floating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScaleKind {
    Nominal,
    Ordinal,
    Interval,
    #[default]
    Ratio,
}

/// A raster legend: scale kind, unit label and the NODATA sentinel. No valid
/// cell value ever equals the sentinel; the algebra nudges collisions.
#[derive(Debug, Clone, PartialEq)]
pub struct Scale<T: Scalar> {
    pub kind: ScaleKind,
    pub unit_label: String,
    pub nodata: T,
}

impl<T: Scalar> Scale<T> {
    pub fn new(kind: ScaleKind, unit_label: impl Into<String>, nodata: T) -> Scale<T> {
        Scale {
            kind,
            unit_label: unit_label.into(),
            nodata,
        }
    }

    pub fn ratio(unit_label: impl Into<String>, nodata: T) -> Scale<T> {
        Scale::new(ScaleKind::Ratio, unit_label, nodata)
    }
}

impl<T: Scalar> Default for Scale<T> {
    fn default() -> Self {
        Scale::ratio("", T::from_f64(-9999.0))
    }
}

/// Uniform rectangular grid of scale values over a closed rectangular
/// domain. Origin is the lower-left corner of the domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster<T: Scalar> {
    origin_x: T,
    origin_y: T,
    cell_width: T,
    cell_height: T,
    n_cols: usize,
    n_rows: usize,
    values: Vec<T>,
    scale: Scale<T>,
}

impl<T: Scalar> Raster<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        origin_x: T,
        origin_y: T,
        cell_width: T,
        cell_height: T,
        n_cols: usize,
        n_rows: usize,
        values: Vec<T>,
        scale: Scale<T>,
    ) -> Result<Raster<T>, RasterError> {
        if n_cols == 0 || n_rows == 0 {
            return Err(RasterError::Shape("grid must have at least one cell".into()));
        }
        if cell_width <= T::zero() || cell_height <= T::zero() {
            return Err(RasterError::Shape("cell size must be positive".into()));
        }
        if values.len() != n_cols * n_rows {
            return Err(RasterError::Shape(format!(
                "expected {} values for a {}x{} grid, got {}",
                n_cols * n_rows,
                n_cols,
                n_rows,
                values.len()
            )));
        }
        Ok(Raster {
            origin_x,
            origin_y,
            cell_width,
            cell_height,
            n_cols,
            n_rows,
            values,
            scale,
        })
    }

    /// Grid with every cell set to `value`.
    #[allow(clippy::too_many_arguments)]
    pub fn filled(
        origin_x: T,
        origin_y: T,
        cell_width: T,
        cell_height: T,
        n_cols: usize,
        n_rows: usize,
        value: T,
        scale: Scale<T>,
    ) -> Result<Raster<T>, RasterError> {
        Raster::new(
            origin_x,
            origin_y,
            cell_width,
            cell_height,
            n_cols,
            n_rows,
            vec![value; n_cols * n_rows],
            scale,
        )
    }

    pub fn origin_x(&self) -> T {
        self.origin_x
    }

    pub fn origin_y(&self) -> T {
        self.origin_y
    }

    pub fn cell_width(&self) -> T {
        self.cell_width
    }

    pub fn cell_height(&self) -> T {
        self.cell_height
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn scale(&self) -> &Scale<T> {
        &self.scale
    }

    pub fn nodata(&self) -> T {
        self.scale.nodata
    }

    /// Row-major cell values, bottom row first.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn is_nodata(&self, value: T) -> bool {
        value == self.scale.nodata || value.is_nan()
    }

    /// Value at grid position (col, row).
    pub fn value_at(&self, col: usize, row: usize) -> T {
        self.values[row * self.n_cols + col]
    }

    pub fn set_value(&mut self, col: usize, row: usize, value: T) {
        self.values[row * self.n_cols + col] = value;
    }

    /// The domain rectangle (raster-to-geometry conversion).
    pub fn domain_rect(&self) -> Rect<T> {
        Rect {
            min_x: self.origin_x,
            min_y: self.origin_y,
            max_x: self.origin_x + self.cell_width * T::from_usize(self.n_cols),
            max_y: self.origin_y + self.cell_height * T::from_usize(self.n_rows),
        }
    }

    /// The domain rectangle as a geometry value.
    pub fn domain_geometry(&self) -> Geometry<T> {
        Geometry::Rectangle(self.domain_rect())
    }

    /// Rectangle of the cell at (col, row).
    pub fn cell_rect(&self, col: usize, row: usize) -> Rect<T> {
        let min_x = self.origin_x + self.cell_width * T::from_usize(col);
        let min_y = self.origin_y + self.cell_height * T::from_usize(row);
        Rect {
            min_x,
            min_y,
            max_x: min_x + self.cell_width,
            max_y: min_y + self.cell_height,
        }
    }

    /// Center coordinates of the cell at (col, row).
    pub fn cell_center(&self, col: usize, row: usize) -> (T, T) {
        (
            self.origin_x + self.cell_width * (T::from_usize(col) + T::half()),
            self.origin_y + self.cell_height * (T::from_usize(row) + T::half()),
        )
    }

    /// Grid indexes of the cell containing (x, y) under the half-open rule,
    /// or `None` outside the domain.
    pub fn cell_index_at(&self, x: T, y: T) -> Option<(usize, usize)> {
        let d = self.domain_rect();
        if x < d.min_x || x > d.max_x || y < d.min_y || y > d.max_y {
            return None;
        }
        let col = ((x - self.origin_x) / self.cell_width).floor();
        let row = ((y - self.origin_y) / self.cell_height).floor();
        let col = (col.to_usize().unwrap_or(0)).min(self.n_cols - 1);
        let row = (row.to_usize().unwrap_or(0)).min(self.n_rows - 1);
        Some((col, row))
    }

    /// Atomic value of the cell containing (x, y).
    pub fn cellval(&self, x: T, y: T) -> Result<T, RasterError> {
        let (col, row) = self.cell_index_at(x, y).ok_or(RasterError::OutOfDomain {
            x: x.to_f64().unwrap_or(f64::NAN),
            y: y.to_f64().unwrap_or(f64::NAN),
        })?;
        Ok(self.value_at(col, row))
    }

    /// All valid (non-NODATA) cell values, row-major.
    pub fn cellval2(&self) -> Vec<T> {
        self.values
            .iter()
            .copied()
            .filter(|v| !self.is_nodata(*v))
            .collect()
    }

    pub fn valid_cell_count(&self) -> usize {
        self.values.iter().filter(|v| !self.is_nodata(**v)).count()
    }

    /// Iterates (col, row, value) over all cells.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.n_rows).flat_map(move |row| {
            (0..self.n_cols).map(move |col| (col, row, self.value_at(col, row)))
        })
    }

    /// True iff the domains are equal rectangles, the grids have equal
    /// shape, and all corresponding values are equal (NODATA matches only
    /// NODATA).
    pub fn val_eq(&self, other: &Raster<T>) -> bool {
        let eps = T::eps();
        let d1 = self.domain_rect();
        let d2 = other.domain_rect();
        if (d1.min_x - d2.min_x).abs() > eps
            || (d1.min_y - d2.min_y).abs() > eps
            || (d1.max_x - d2.max_x).abs() > eps
            || (d1.max_y - d2.max_y).abs() > eps
        {
            return false;
        }
        if self.n_cols != other.n_cols || self.n_rows != other.n_rows {
            return false;
        }
        self.values
            .iter()
            .zip(other.values.iter())
            .all(|(a, b)| match (self.is_nodata(*a), other.is_nodata(*b)) {
                (true, true) => true,
                (false, false) => a == b,
                _ => false,
            })
    }

    /// Same grid layout (origin, cell size, shape) within tolerance.
    pub fn aligned_with(&self, other: &Raster<T>) -> bool {
        let eps = T::eps();
        self.n_cols == other.n_cols
            && self.n_rows == other.n_rows
            && (self.origin_x - other.origin_x).abs() <= eps
            && (self.origin_y - other.origin_y).abs() <= eps
            && (self.cell_width - other.cell_width).abs() <= eps
            && (self.cell_height - other.cell_height).abs() <= eps
    }

    /// Returns `value` unless it collides with the NODATA sentinel, in which
    /// case the nearest representable neighbor is used instead.
    pub fn guard_sentinel(&self, value: T) -> T {
        if value == self.scale.nodata {
            value.next_up_value()
        } else {
            value
        }
    }

    pub(crate) fn map_values(&self, mut f: impl FnMut(T) -> T) -> Raster<T> {
        let mut out = self.clone();
        for v in &mut out.values {
            *v = f(*v);
        }
        out
    }

    /// Named accessor used by the function registry.
    pub fn accessor(&self, which: Accessor<T>) -> Result<AccessorValue<T>, RasterError> {
        Ok(match which {
            Accessor::Width => AccessorValue::Number(T::from_usize(self.n_cols)),
            Accessor::Height => AccessorValue::Number(T::from_usize(self.n_rows)),
            Accessor::CellWidth => AccessorValue::Number(self.cell_width),
            Accessor::CellHeight => AccessorValue::Number(self.cell_height),
            Accessor::Envelope => AccessorValue::Envelope(self.domain_rect()),
            Accessor::CellAt(x, y) => AccessorValue::Number(self.cellval(x, y)?),
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Accessor<T: Scalar> {
    Width,
    Height,
    CellWidth,
    CellHeight,
    Envelope,
    CellAt(T, T),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AccessorValue<T: Scalar> {
    Number(T),
    Envelope(Rect<T>),
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Fixture A: 2x2 grid, origin (0,0), 1x1 cells, bottom row [1,2],
    /// top row [3,4].
    pub(crate) fn raster_a() -> Raster<f64> {
        Raster::new(
            0.0,
            0.0,
            1.0,
            1.0,
            2,
            2,
            vec![1.0, 2.0, 3.0, 4.0],
            Scale::default(),
        )
        .unwrap()
    }

    #[test]
    fn domain_rect_examples() {
        assert_eq!(
            raster_a().domain_rect(),
            Rect::new(0.0, 0.0, 2.0, 2.0).unwrap()
        );
        let r = Raster::new(
            -10.0,
            40.0,
            5.0,
            10.0,
            1,
            1,
            vec![0.5],
            Scale::default(),
        )
        .unwrap();
        assert_eq!(r.domain_rect(), Rect::new(-10.0, 40.0, -5.0, 50.0).unwrap());
    }

    #[test]
    fn cellval_layout() {
        let a = raster_a();
        assert_eq!(a.cellval(0.5, 0.5).unwrap(), 1.0);
        assert_eq!(a.cellval(1.5, 1.5).unwrap(), 4.0);
        assert_eq!(
            a.cellval(3.0, 0.5),
            Err(RasterError::OutOfDomain { x: 3.0, y: 0.5 })
        );
    }

    #[test]
    fn half_open_interior_edges_closed_domain_boundary() {
        let a = raster_a();
        // Interior edge points belong to the larger-index cell.
        assert_eq!(a.cellval(1.0, 0.5).unwrap(), 2.0);
        assert_eq!(a.cellval(0.5, 1.0).unwrap(), 3.0);
        // The domain's maximum edges stay closed.
        assert_eq!(a.cellval(2.0, 2.0).unwrap(), 4.0);
        assert_eq!(a.cellval(0.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn cellval2_skips_nodata() {
        let a = raster_a();
        assert_eq!(a.cellval2(), vec![1.0, 2.0, 3.0, 4.0]);
        let nd = a.nodata();
        let r = Raster::new(
            0.0,
            0.0,
            1.0,
            1.0,
            2,
            2,
            vec![1.0, nd, 3.0, nd],
            Scale::default(),
        )
        .unwrap();
        assert_eq!(r.cellval2(), vec![1.0, 3.0]);
        assert_eq!(r.valid_cell_count(), 2);
    }

    #[test]
    fn val_eq_examples() {
        let a = raster_a();
        assert!(a.val_eq(&a));
        let mut changed = a.clone();
        changed.set_value(0, 0, 9.0);
        assert!(!a.val_eq(&changed));
        let translated = Raster::new(
            1.0,
            0.0,
            1.0,
            1.0,
            2,
            2,
            vec![1.0, 2.0, 3.0, 4.0],
            Scale::default(),
        )
        .unwrap();
        assert!(!a.val_eq(&translated));
    }

    #[test]
    fn accessors() {
        let a = raster_a();
        assert_eq!(
            a.accessor(Accessor::Width).unwrap(),
            AccessorValue::Number(2.0)
        );
        assert_eq!(
            a.accessor(Accessor::CellWidth).unwrap(),
            AccessorValue::Number(1.0)
        );
        assert_eq!(
            a.accessor(Accessor::Envelope).unwrap(),
            AccessorValue::Envelope(Rect::new(0.0, 0.0, 2.0, 2.0).unwrap())
        );
        assert_eq!(
            a.accessor(Accessor::CellAt(0.5, 1.5)).unwrap(),
            AccessorValue::Number(3.0)
        );
    }

    #[test]
    fn cell_rects_tile_the_domain() {
        let a = raster_a();
        let mut area = 0.0;
        for (col, row, _) in a.cells() {
            let r = a.cell_rect(col, row);
            area += r.area();
            assert!(a.domain_rect().contains_rect(&r));
        }
        assert!((area - a.domain_rect().area()).abs() < 1e-12);
    }

    #[test]
    fn sentinel_guard() {
        let a = raster_a();
        let nd = a.nodata();
        assert_ne!(a.guard_sentinel(nd), nd);
        assert_eq!(a.guard_sentinel(1.5), 1.5);
    }

    #[test]
    fn generic_over_f32() {
        let r: Raster<f32> =
            Raster::new(0.0, 0.0, 1.0, 1.0, 2, 1, vec![1.0, 2.0], Scale::default()).unwrap();
        assert_eq!(r.cellval(1.5, 0.5).unwrap(), 2.0f32);
    }
}
