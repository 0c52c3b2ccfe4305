//! CoverageJSON grid coverages. The parser expects a Coverage document with
//! domainType Grid, numeric x/y axes of uniform spacing interpreted as cell
//! centers, and one NdArray range with axisNames ["y","x"]. NODATA cells are
//! encoded as JSON nulls.

use serde_json::{json, Map, Number, Value};

use super::FormatError;
use crate::raster::{Raster, Scale};

/// Relative tolerance for axis spacing uniformity.
const SPACING_REL_TOL: f64 = 1e-9;

pub fn parse_coverage_json(text: &str) -> Result<Raster<f64>, FormatError> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| FormatError::Structure(format!("invalid JSON: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| structure("document must be a JSON object"))?;

    expect_str(obj, "type", "Coverage")?;
    let domain = get_object(obj, "domain")?;
    expect_str(domain, "domainType", "Grid")?;
    let axes = get_object(domain, "axes")?;
    let x_axis = parse_axis(axes, "x")?;
    let y_axis = parse_axis(axes, "y")?;

    let ranges = get_object(obj, "ranges")?;
    let (_name, range) = ranges
        .iter()
        .next()
        .ok_or_else(|| structure("`ranges` must contain one range"))?;
    if ranges.len() != 1 {
        return Err(structure("`ranges` must contain exactly one range"));
    }
    let range = range
        .as_object()
        .ok_or_else(|| structure("range must be an object"))?;
    expect_str(range, "type", "NdArray")?;
    let axis_names = range
        .get("axisNames")
        .and_then(Value::as_array)
        .ok_or_else(|| structure("range is missing `axisNames`"))?;
    let names: Vec<&str> = axis_names.iter().filter_map(Value::as_str).collect();
    if names != ["y", "x"] {
        return Err(structure("range `axisNames` must be [\"y\",\"x\"]"));
    }
    let shape = range
        .get("shape")
        .and_then(Value::as_array)
        .ok_or_else(|| structure("range is missing `shape`"))?;
    if shape.len() != 2 {
        return Err(FormatError::ShapeMismatch(
            "`shape` must have exactly two entries [rows, cols]".into(),
        ));
    }
    let n_rows = shape[0]
        .as_u64()
        .ok_or_else(|| structure("`shape` entries must be non-negative integers"))?
        as usize;
    let n_cols = shape[1]
        .as_u64()
        .ok_or_else(|| structure("`shape` entries must be non-negative integers"))?
        as usize;
    if n_rows != y_axis.values.len() {
        return Err(FormatError::ShapeMismatch(format!(
            "y axis has {} values but shape is [{n_rows}, {n_cols}]",
            y_axis.values.len()
        )));
    }
    if n_cols != x_axis.values.len() {
        return Err(FormatError::ShapeMismatch(format!(
            "x axis has {} values but shape is [{n_rows}, {n_cols}]",
            x_axis.values.len()
        )));
    }
    let raw_values = range
        .get("values")
        .and_then(Value::as_array)
        .ok_or_else(|| structure("range is missing `values`"))?;
    if raw_values.len() != n_rows * n_cols {
        return Err(FormatError::ShapeMismatch(format!(
            "`values` has {} entries but shape is [{n_rows}, {n_cols}] = {}",
            raw_values.len(),
            n_rows * n_cols
        )));
    }

    let unit_label = observed_property_label(obj);
    let mut cells: Vec<Option<f64>> = Vec::with_capacity(raw_values.len());
    for v in raw_values {
        match v {
            Value::Null => cells.push(None),
            Value::Number(n) => cells.push(Some(n.as_f64().ok_or_else(|| {
                structure("range values must be finite numbers or null")
            })?)),
            _ => return Err(structure("range values must be numbers or null")),
        }
    }

    let nodata = pick_nodata(&cells);
    let scale = Scale::ratio(unit_label, nodata);

    // Map the NdArray layout (row index = y axis index) onto the internal
    // bottom-first rows, honoring the y axis direction.
    let mut values = vec![nodata; n_rows * n_cols];
    for (iy, _) in y_axis.values.iter().enumerate() {
        for ix in 0..n_cols {
            let v = cells[iy * n_cols + ix].unwrap_or(nodata);
            let row = if y_axis.ascending { iy } else { n_rows - 1 - iy };
            let col = if x_axis.ascending { ix } else { n_cols - 1 - ix };
            values[row * n_cols + col] = v;
        }
    }

    let min_x_center = if x_axis.ascending {
        x_axis.values[0]
    } else {
        *x_axis.values.last().unwrap()
    };
    let min_y_center = if y_axis.ascending {
        y_axis.values[0]
    } else {
        *y_axis.values.last().unwrap()
    };
    Raster::new(
        min_x_center - x_axis.spacing / 2.0,
        min_y_center - y_axis.spacing / 2.0,
        x_axis.spacing,
        y_axis.spacing,
        n_cols,
        n_rows,
        values,
        scale,
    )
    .map_err(|e| structure(&e.to_string()))
}

pub fn write_coverage_json(r: &Raster<f64>) -> String {
    let x_values: Vec<Value> = (0..r.n_cols())
        .map(|col| number(r.cell_center(col, 0).0))
        .collect();
    let y_values: Vec<Value> = (0..r.n_rows())
        .map(|row| number(r.cell_center(0, row).1))
        .collect();

    let mut x_axis = Map::new();
    x_axis.insert("values".into(), Value::Array(x_values));
    if r.n_cols() == 1 {
        x_axis.insert("spacing".into(), number(r.cell_width()));
    }
    let mut y_axis = Map::new();
    y_axis.insert("values".into(), Value::Array(y_values));
    if r.n_rows() == 1 {
        y_axis.insert("spacing".into(), number(r.cell_height()));
    }

    let mut values: Vec<Value> = Vec::with_capacity(r.n_cols() * r.n_rows());
    for row in 0..r.n_rows() {
        for col in 0..r.n_cols() {
            let v = r.value_at(col, row);
            if r.is_nodata(v) {
                values.push(Value::Null);
            } else {
                values.push(number(v));
            }
        }
    }

    let doc = json!({
        "type": "Coverage",
        "domain": {
            "type": "Domain",
            "domainType": "Grid",
            "axes": { "x": Value::Object(x_axis), "y": Value::Object(y_axis) }
        },
        "observedProperty": { "label": r.scale().unit_label },
        "ranges": {
            "value": {
                "type": "NdArray",
                "dataType": "float",
                "axisNames": ["y", "x"],
                "shape": [r.n_rows(), r.n_cols()],
                "values": values
            }
        }
    });
    serde_json::to_string(&doc).expect("coverage document serializes")
}

struct Axis {
    values: Vec<f64>,
    spacing: f64,
    ascending: bool,
}

fn parse_axis(axes: &Map<String, Value>, name: &str) -> Result<Axis, FormatError> {
    let axis = axes
        .get(name)
        .and_then(Value::as_object)
        .ok_or_else(|| structure(&format!("domain is missing axis `{name}`")))?;
    let values: Vec<f64> = axis
        .get("values")
        .and_then(Value::as_array)
        .ok_or_else(|| structure(&format!("axis `{name}` is missing `values`")))?
        .iter()
        .map(|v| {
            v.as_f64()
                .ok_or_else(|| structure(&format!("axis `{name}` values must be numbers")))
        })
        .collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err(structure(&format!("axis `{name}` has no values")));
    }
    if values.len() == 1 {
        let spacing = axis.get("spacing").and_then(Value::as_f64).ok_or_else(|| {
            structure(&format!(
                "axis `{name}` has a single value; cell size cannot be inferred \
                 without a `spacing` member"
            ))
        })?;
        if spacing <= 0.0 {
            return Err(structure(&format!("axis `{name}` spacing must be positive")));
        }
        return Ok(Axis {
            values,
            spacing,
            ascending: true,
        });
    }
    let first_step = values[1] - values[0];
    if first_step == 0.0 {
        return Err(FormatError::NonUniformAxis { axis: name.into() });
    }
    for w in values.windows(2) {
        let step = w[1] - w[0];
        if (step - first_step).abs() > first_step.abs() * SPACING_REL_TOL {
            return Err(FormatError::NonUniformAxis { axis: name.into() });
        }
    }
    Ok(Axis {
        values,
        spacing: first_step.abs(),
        ascending: first_step > 0.0,
    })
}

fn observed_property_label(obj: &Map<String, Value>) -> String {
    let Some(op) = obj.get("observedProperty") else {
        return String::new();
    };
    match op {
        Value::String(s) => s.clone(),
        Value::Object(map) => match map.get("label") {
            Some(Value::String(s)) => s.clone(),
            Some(Value::Object(langs)) => langs
                .get("en")
                .or_else(|| langs.values().next())
                .and_then(Value::as_str)
                .unwrap_or_default()
                .to_string(),
            _ => String::new(),
        },
        _ => String::new(),
    }
}

/// Picks a NODATA sentinel distinct from every valid value.
fn pick_nodata(cells: &[Option<f64>]) -> f64 {
    let mut candidate = -9999.0;
    while cells.iter().flatten().any(|v| *v == candidate) {
        candidate = candidate * 2.0 - 1.0;
    }
    candidate
}

fn number(v: f64) -> Value {
    Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

fn structure(msg: &str) -> FormatError {
    FormatError::Structure(msg.to_string())
}

fn expect_str(
    obj: &Map<String, Value>,
    key: &str,
    expected: &str,
) -> Result<(), FormatError> {
    match obj.get(key).and_then(Value::as_str) {
        Some(actual) if actual == expected => Ok(()),
        Some(actual) => Err(structure(&format!(
            "`{key}` must be \"{expected}\", got \"{actual}\""
        ))),
        None => Err(structure(&format!("missing `{key}`"))),
    }
}

fn get_object<'a>(
    obj: &'a Map<String, Value>,
    key: &str,
) -> Result<&'a Map<String, Value>, FormatError> {
    obj.get(key)
        .and_then(Value::as_object)
        .ok_or_else(|| structure(&format!("missing object `{key}`")))
}
