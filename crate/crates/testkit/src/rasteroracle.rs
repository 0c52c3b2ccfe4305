//! Per-cell brute-force oracles for the raster algebra, written directly
//! from the operator rules: results take the first raster's grid, cell
//! correspondence is by cell-center lookup, NODATA in the first raster
//! stays NODATA, a missing or NODATA counterpart keeps the first raster's
//! value.

use rand::Rng;

use rastergraph_core::raster::{Raster, Scale};

/// Plain-struct view of a raster used by the oracle computations.
#[derive(Debug, Clone)]
pub struct GridView {
    pub origin_x: f64,
    pub origin_y: f64,
    pub cell_w: f64,
    pub cell_h: f64,
    pub cols: usize,
    pub rows: usize,
    pub nodata: f64,
    pub values: Vec<f64>,
}

impl GridView {
    pub fn of(r: &Raster<f64>) -> GridView {
        GridView {
            origin_x: r.origin_x(),
            origin_y: r.origin_y(),
            cell_w: r.cell_width(),
            cell_h: r.cell_height(),
            cols: r.n_cols(),
            rows: r.n_rows(),
            nodata: r.nodata(),
            values: r.values().to_vec(),
        }
    }

    pub fn get(&self, col: usize, row: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn is_nodata(&self, v: f64) -> bool {
        v == self.nodata || v.is_nan()
    }

    pub fn center(&self, col: usize, row: usize) -> (f64, f64) {
        (
            self.origin_x + self.cell_w * (col as f64 + 0.5),
            self.origin_y + self.cell_h * (row as f64 + 0.5),
        )
    }

    /// Value at a position, by direct index math (half-open low edges,
    /// closed domain maximum).
    pub fn lookup(&self, x: f64, y: f64) -> Option<f64> {
        let max_x = self.origin_x + self.cell_w * self.cols as f64;
        let max_y = self.origin_y + self.cell_h * self.rows as f64;
        if x < self.origin_x || x > max_x || y < self.origin_y || y > max_y {
            return None;
        }
        let col = (((x - self.origin_x) / self.cell_w).floor() as usize).min(self.cols - 1);
        let row = (((y - self.origin_y) / self.cell_h).floor() as usize).min(self.rows - 1);
        Some(self.get(col, row))
    }

    pub fn cell_rect(&self, col: usize, row: usize) -> (f64, f64, f64, f64) {
        let x0 = self.origin_x + self.cell_w * col as f64;
        let y0 = self.origin_y + self.cell_h * row as f64;
        (x0, y0, x0 + self.cell_w, y0 + self.cell_h)
    }
}

/// The named cellwise operators covered by the oracle suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleOp {
    Plus,
    Subtract,
    Mult,
    Div,
    And,
    Or,
    Xor,
    Equals,
}

pub const BINARY_OPS: [OracleOp; 8] = [
    OracleOp::Plus,
    OracleOp::Subtract,
    OracleOp::Mult,
    OracleOp::Div,
    OracleOp::And,
    OracleOp::Or,
    OracleOp::Xor,
    OracleOp::Equals,
];

fn apply(op: OracleOp, a: f64, b: f64) -> f64 {
    let t = |v: f64| v != 0.0;
    let b01 = |v: bool| if v { 1.0 } else { 0.0 };
    match op {
        OracleOp::Plus => a + b,
        OracleOp::Subtract => a - b,
        OracleOp::Mult => a * b,
        OracleOp::Div => a / b,
        OracleOp::And => b01(t(a) && t(b)),
        OracleOp::Or => b01(t(a) || t(b)),
        OracleOp::Xor => b01(t(a) != t(b)),
        OracleOp::Equals => b01(a == b),
    }
}

fn guard(v: f64, nodata: f64) -> f64 {
    if v == nodata {
        f64::from_bits(if v > 0.0 || v == 0.0 {
            v.to_bits() + 1
        } else {
            v.to_bits() - 1
        })
    } else {
        v
    }
}

/// Binary operator oracle over the first grid.
pub fn oracle_binary(op: OracleOp, r1: &GridView, r2: &GridView) -> Vec<f64> {
    let mut out = Vec::with_capacity(r1.values.len());
    for row in 0..r1.rows {
        for col in 0..r1.cols {
            let v1 = r1.get(col, row);
            if r1.is_nodata(v1) {
                out.push(r1.nodata);
                continue;
            }
            let (cx, cy) = r1.center(col, row);
            match r2.lookup(cx, cy) {
                Some(v2) if !r2.is_nodata(v2) => {
                    if op == OracleOp::Div && v2 == 0.0 {
                        out.push(r1.nodata);
                    } else {
                        out.push(guard(apply(op, v1, v2), r1.nodata));
                    }
                }
                _ => out.push(v1),
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleConstOp {
    Plus,
    Subtract,
    Mult,
    Div,
    And,
    Or,
    Xor,
    Equals,
    Exp,
    GreaterKeep,
    SmallerKeep,
}

pub const CONST_OPS: [OracleConstOp; 11] = [
    OracleConstOp::Plus,
    OracleConstOp::Subtract,
    OracleConstOp::Mult,
    OracleConstOp::Div,
    OracleConstOp::And,
    OracleConstOp::Or,
    OracleConstOp::Xor,
    OracleConstOp::Equals,
    OracleConstOp::Exp,
    OracleConstOp::GreaterKeep,
    OracleConstOp::SmallerKeep,
];

pub fn oracle_const(op: OracleConstOp, r: &GridView, c: f64) -> Vec<f64> {
    r.values
        .iter()
        .map(|v| {
            let v = *v;
            if r.is_nodata(v) {
                return r.nodata;
            }
            match op {
                OracleConstOp::Plus => guard(v + c, r.nodata),
                OracleConstOp::Subtract => guard(v - c, r.nodata),
                OracleConstOp::Mult => guard(v * c, r.nodata),
                OracleConstOp::Div => {
                    if c == 0.0 {
                        r.nodata
                    } else {
                        guard(v / c, r.nodata)
                    }
                }
                OracleConstOp::And => guard(
                    if v != 0.0 && c != 0.0 { 1.0 } else { 0.0 },
                    r.nodata,
                ),
                OracleConstOp::Or => guard(
                    if v != 0.0 || c != 0.0 { 1.0 } else { 0.0 },
                    r.nodata,
                ),
                OracleConstOp::Xor => guard(
                    if (v != 0.0) != (c != 0.0) { 1.0 } else { 0.0 },
                    r.nodata,
                ),
                OracleConstOp::Equals => {
                    guard(if v == c { 1.0 } else { 0.0 }, r.nodata)
                }
                OracleConstOp::Exp => guard(v.powf(c), r.nodata),
                OracleConstOp::GreaterKeep => {
                    if v > c {
                        v
                    } else {
                        r.nodata
                    }
                }
                OracleConstOp::SmallerKeep => {
                    if v < c {
                        v
                    } else {
                        r.nodata
                    }
                }
            }
        })
        .collect()
}

pub fn oracle_not(r: &GridView) -> Vec<f64> {
    r.values
        .iter()
        .map(|v| {
            if r.is_nodata(*v) {
                r.nodata
            } else if *v != 0.0 {
                0.0
            } else {
                1.0
            }
        })
        .collect()
}

pub fn oracle_invert(r: &GridView) -> Vec<f64> {
    r.values
        .iter()
        .map(|v| {
            if r.is_nodata(*v) {
                r.nodata
            } else {
                guard(-*v, r.nodata)
            }
        })
        .collect()
}

/// Cells kept by an intersection with a rectangle: positive-area overlap.
pub fn oracle_intersection_with_rect(
    r: &GridView,
    rect: (f64, f64, f64, f64),
) -> Vec<f64> {
    r.values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let col = i % r.cols;
            let row = i / r.cols;
            let (x0, y0, x1, y1) = r.cell_rect(col, row);
            let w = x1.min(rect.2) - x0.max(rect.0);
            let h = y1.min(rect.3) - y0.max(rect.1);
            if w > 1e-9 && h > 1e-9 {
                *v
            } else {
                r.nodata
            }
        })
        .collect()
}

/// Complement of [`oracle_intersection_with_rect`].
pub fn oracle_union_with_rect(r: &GridView, rect: (f64, f64, f64, f64)) -> Vec<f64> {
    r.values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let col = i % r.cols;
            let row = i / r.cols;
            let (x0, y0, x1, y1) = r.cell_rect(col, row);
            let w = x1.min(rect.2) - x0.max(rect.0);
            let h = y1.min(rect.3) - y0.max(rect.1);
            if w > 1e-9 && h > 1e-9 {
                r.nodata
            } else {
                *v
            }
        })
        .collect()
}

/// Random 4x4-ish fixture; values in a small range with NODATA sprinkled.
pub fn random_raster(rng: &mut impl Rng) -> Raster<f64> {
    let cols = rng.gen_range(2..=4);
    let rows = rng.gen_range(2..=4);
    let nodata = -9999.0;
    let values: Vec<f64> = (0..cols * rows)
        .map(|_| {
            if rng.gen_bool(0.15) {
                nodata
            } else {
                // Quarter-step values keep comparisons exact.
                (rng.gen_range(-20..=20) as f64) * 0.25
            }
        })
        .collect();
    Raster::new(
        (rng.gen_range(-8..=8) as f64) * 0.5,
        (rng.gen_range(-8..=8) as f64) * 0.5,
        (rng.gen_range(1..=4) as f64) * 0.5,
        (rng.gen_range(1..=4) as f64) * 0.5,
        cols,
        rows,
        values,
        Scale::ratio("", nodata),
    )
    .unwrap()
}

/// A second raster for binary fixtures: sometimes aligned with the first,
/// sometimes offset or differently sized.
pub fn random_partner(rng: &mut impl Rng, first: &Raster<f64>) -> Raster<f64> {
    if rng.gen_bool(0.4) {
        let values: Vec<f64> = (0..first.n_cols() * first.n_rows())
            .map(|_| {
                if rng.gen_bool(0.15) {
                    first.nodata()
                } else {
                    (rng.gen_range(-20..=20) as f64) * 0.25
                }
            })
            .collect();
        Raster::new(
            first.origin_x(),
            first.origin_y(),
            first.cell_width(),
            first.cell_height(),
            first.n_cols(),
            first.n_rows(),
            values,
            first.scale().clone(),
        )
        .unwrap()
    } else {
        random_raster(rng)
    }
}
