//! ESRI ASCII grid reader and writer. The header supplies column/row
//! counts, the lower-left corner, a square cell size and an optional
//! NODATA value; data rows follow top row first and are flipped into the
//! bottom-first internal layout.

use super::FormatError;
use crate::raster::{Raster, Scale};

pub fn parse_asc_grid(text: &str) -> Result<Raster<f64>, FormatError> {
    let mut n_cols: Option<usize> = None;
    let mut n_rows: Option<usize> = None;
    let mut xll: Option<f64> = None;
    let mut yll: Option<f64> = None;
    let mut cellsize: Option<f64> = None;
    let mut nodata = -9999.0;

    let mut lines = text.lines().enumerate().peekable();
    while let Some((line_no, line)) = lines.peek().copied() {
        let mut parts = line.split_whitespace();
        let Some(key) = parts.next() else {
            lines.next();
            continue;
        };
        let key_lower = key.to_ascii_lowercase();
        let is_header = matches!(
            key_lower.as_str(),
            "ncols" | "nrows" | "xllcorner" | "yllcorner" | "cellsize" | "nodata_value"
        );
        if !is_header {
            break;
        }
        let value = parts.next().ok_or_else(|| FormatError::Line {
            line: line_no + 1,
            message: format!("header `{key}` is missing its value"),
        })?;
        let parse_f64 = |v: &str| {
            v.parse::<f64>().map_err(|_| FormatError::Line {
                line: line_no + 1,
                message: format!("invalid number `{v}` for `{key}`"),
            })
        };
        match key_lower.as_str() {
            "ncols" => n_cols = Some(parse_f64(value)? as usize),
            "nrows" => n_rows = Some(parse_f64(value)? as usize),
            "xllcorner" => xll = Some(parse_f64(value)?),
            "yllcorner" => yll = Some(parse_f64(value)?),
            "cellsize" => cellsize = Some(parse_f64(value)?),
            "nodata_value" => nodata = parse_f64(value)?,
            _ => unreachable!(),
        }
        lines.next();
    }

    let n_cols = n_cols.ok_or_else(|| missing_header("ncols"))?;
    let n_rows = n_rows.ok_or_else(|| missing_header("nrows"))?;
    let xll = xll.ok_or_else(|| missing_header("xllcorner"))?;
    let yll = yll.ok_or_else(|| missing_header("yllcorner"))?;
    let cellsize = cellsize.ok_or_else(|| missing_header("cellsize"))?;
    if n_cols == 0 || n_rows == 0 || cellsize <= 0.0 {
        return Err(FormatError::Structure(
            "ncols, nrows and cellsize must be positive".into(),
        ));
    }

    // Top-first input rows map onto the bottom-first internal layout.
    let mut values = vec![nodata; n_cols * n_rows];
    let mut data_rows = 0usize;
    for (line_no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        if data_rows >= n_rows {
            return Err(FormatError::Line {
                line: line_no + 1,
                message: format!("more than nrows={n_rows} data rows"),
            });
        }
        let row_values: Vec<f64> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| FormatError::Line {
                    line: line_no + 1,
                    message: format!("invalid cell value `{tok}`"),
                })
            })
            .collect::<Result<_, _>>()?;
        if row_values.len() != n_cols {
            return Err(FormatError::Line {
                line: line_no + 1,
                message: format!(
                    "expected ncols={n_cols} values, got {}",
                    row_values.len()
                ),
            });
        }
        let internal_row = n_rows - 1 - data_rows;
        values[internal_row * n_cols..(internal_row + 1) * n_cols]
            .copy_from_slice(&row_values);
        data_rows += 1;
    }
    if data_rows != n_rows {
        return Err(FormatError::ShapeMismatch(format!(
            "expected nrows={n_rows} data rows, got {data_rows}"
        )));
    }

    Raster::new(
        xll,
        yll,
        cellsize,
        cellsize,
        n_cols,
        n_rows,
        values,
        Scale::ratio("", nodata),
    )
    .map_err(|e| FormatError::Structure(e.to_string()))
}

/// Serializes a raster with square cells back to an ESRI ASCII grid.
pub fn write_asc_grid(r: &Raster<f64>) -> Result<String, FormatError> {
    if (r.cell_width() - r.cell_height()).abs() > 1e-9 * r.cell_width().abs() {
        return Err(FormatError::Structure(
            "ASC grids require square cells".into(),
        ));
    }
    let mut out = String::new();
    out.push_str(&format!("ncols {}\n", r.n_cols()));
    out.push_str(&format!("nrows {}\n", r.n_rows()));
    out.push_str(&format!("xllcorner {}\n", r.origin_x()));
    out.push_str(&format!("yllcorner {}\n", r.origin_y()));
    out.push_str(&format!("cellsize {}\n", r.cell_width()));
    out.push_str(&format!("NODATA_value {}\n", r.nodata()));
    for display_row in 0..r.n_rows() {
        let row = r.n_rows() - 1 - display_row;
        let line: Vec<String> = (0..r.n_cols())
            .map(|col| format!("{}", r.value_at(col, row)))
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Ok(out)
}

fn missing_header(name: &str) -> FormatError {
    FormatError::Structure(format!("missing header `{name}`"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRID_A: &str = "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n3 4\n1 2\n";

    #[test]
    fn row_order_maps_to_bottom_first() {
        let r = parse_asc_grid(GRID_A).unwrap();
        assert_eq!(r.values(), &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(r.cellval(0.5, 0.5).unwrap(), 1.0);
        assert_eq!(r.cellval(1.5, 1.5).unwrap(), 4.0);
    }

    #[test]
    fn nodata_value_is_respected() {
        let text = "ncols 2\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\nNODATA_value -9999\n-9999 5\n";
        let r = parse_asc_grid(text).unwrap();
        assert!(r.is_nodata(r.value_at(0, 0)));
        assert_eq!(r.value_at(1, 0), 5.0);
        assert_eq!(r.cellval2(), vec![5.0]);
    }

    #[test]
    fn ncols_mismatch_is_a_shape_error_with_line() {
        let text = "ncols 3\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2\n";
        match parse_asc_grid(text) {
            Err(FormatError::Line { line, message }) => {
                assert_eq!(line, 6);
                assert!(message.contains("ncols"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_rows_rejected() {
        let text = "ncols 1\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n1\n";
        assert!(matches!(
            parse_asc_grid(text),
            Err(FormatError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn write_round_trip() {
        let r = parse_asc_grid(GRID_A).unwrap();
        let text = write_asc_grid(&r).unwrap();
        let again = parse_asc_grid(&text).unwrap();
        assert!(r.val_eq(&again));
        assert_eq!(r.domain_rect(), again.domain_rect());
    }
}
