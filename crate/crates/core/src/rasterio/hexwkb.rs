//! Hex raster WKB: a self-defined, versioned little-endian layout encoded
//! as uppercase hex.
//!
//! Layout: version(u16)=0, nBands(u16)=1, scaleX(f64), scaleY(f64),
//! originX(f64), originY(f64), nCols(u16), nRows(u16), nodata(f64),
//! then the row-major f64 cell values (bottom row first).

use super::FormatError;
use crate::raster::{Raster, Scale};

const VERSION: u16 = 0;
const N_BANDS: u16 = 1;
const HEADER_BYTES: usize = 2 + 2 + 8 * 4 + 2 + 2 + 8;

pub fn write_raster_hex_wkb(r: &Raster<f64>) -> String {
    let mut bytes = Vec::with_capacity(HEADER_BYTES + 8 * r.values().len());
    bytes.extend_from_slice(&VERSION.to_le_bytes());
    bytes.extend_from_slice(&N_BANDS.to_le_bytes());
    bytes.extend_from_slice(&r.cell_width().to_le_bytes());
    bytes.extend_from_slice(&r.cell_height().to_le_bytes());
    bytes.extend_from_slice(&r.origin_x().to_le_bytes());
    bytes.extend_from_slice(&r.origin_y().to_le_bytes());
    bytes.extend_from_slice(&(r.n_cols() as u16).to_le_bytes());
    bytes.extend_from_slice(&(r.n_rows() as u16).to_le_bytes());
    bytes.extend_from_slice(&r.nodata().to_le_bytes());
    for v in r.values() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    let mut hex = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        hex.push_str(&format!("{b:02X}"));
    }
    hex
}

pub fn parse_raster_hex_wkb(hex: &str) -> Result<Raster<f64>, FormatError> {
    let hex = hex.trim();
    if hex.len() % 2 != 0 {
        return Err(FormatError::Hex("odd number of hex digits".into()));
    }
    let mut bytes = Vec::with_capacity(hex.len() / 2);
    let raw = hex.as_bytes();
    for pair in raw.chunks(2) {
        let hi = hex_digit(pair[0])?;
        let lo = hex_digit(pair[1])?;
        bytes.push(hi << 4 | lo);
    }
    if bytes.len() < HEADER_BYTES {
        return Err(FormatError::Hex(format!(
            "truncated header: {} bytes, need {HEADER_BYTES}",
            bytes.len()
        )));
    }
    let mut cursor = Cursor { bytes: &bytes, pos: 0 };
    let version = cursor.u16();
    if version != VERSION {
        return Err(FormatError::Hex(format!(
            "unsupported version {version}, expected {VERSION}"
        )));
    }
    let bands = cursor.u16();
    if bands != N_BANDS {
        return Err(FormatError::Hex(format!(
            "unsupported band count {bands}, expected {N_BANDS}"
        )));
    }
    let scale_x = cursor.f64();
    let scale_y = cursor.f64();
    let origin_x = cursor.f64();
    let origin_y = cursor.f64();
    let n_cols = cursor.u16() as usize;
    let n_rows = cursor.u16() as usize;
    let nodata = cursor.f64();
    let expected = HEADER_BYTES + 8 * n_cols * n_rows;
    if bytes.len() != expected {
        return Err(FormatError::Hex(format!(
            "expected {expected} bytes for a {n_cols}x{n_rows} grid, got {}",
            bytes.len()
        )));
    }
    let mut values = Vec::with_capacity(n_cols * n_rows);
    for _ in 0..n_cols * n_rows {
        values.push(cursor.f64());
    }
    Raster::new(
        origin_x,
        origin_y,
        scale_x,
        scale_y,
        n_cols,
        n_rows,
        values,
        Scale::ratio("", nodata),
    )
    .map_err(|e| FormatError::Hex(e.to_string()))
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn u16(&mut self) -> u16 {
        let v = u16::from_le_bytes(self.bytes[self.pos..self.pos + 2].try_into().unwrap());
        self.pos += 2;
        v
    }

    fn f64(&mut self) -> f64 {
        let v = f64::from_le_bytes(self.bytes[self.pos..self.pos + 8].try_into().unwrap());
        self.pos += 8;
        v
    }
}

fn hex_digit(c: u8) -> Result<u8, FormatError> {
    match c {
        b'0'..=b'9' => Ok(c - b'0'),
        b'A'..=b'F' => Ok(c - b'A' + 10),
        b'a'..=b'f' => Ok(c - b'a' + 10),
        _ => Err(FormatError::Hex(format!(
            "invalid hex character `{}`",
            c as char
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raster_a() -> Raster<f64> {
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
    fn byte_exact_round_trip() {
        let a = raster_a();
        let hex = write_raster_hex_wkb(&a);
        let parsed = parse_raster_hex_wkb(&hex).unwrap();
        assert!(a.val_eq(&parsed));
        assert_eq!(write_raster_hex_wkb(&parsed), hex);
    }

    #[test]
    fn deterministic_and_uppercase() {
        let r = Raster::new(0.0, 0.0, 1.0, 1.0, 1, 1, vec![0.0], Scale::default()).unwrap();
        let h1 = write_raster_hex_wkb(&r);
        let h2 = write_raster_hex_wkb(&r);
        assert_eq!(h1, h2);
        assert!(h1.chars().all(|c| c.is_ascii_digit() || c.is_ascii_uppercase()));
        assert_eq!(h1.len() % 2, 0);
    }

    #[test]
    fn single_cell_difference_changes_hex() {
        let a = raster_a();
        let mut b = a.clone();
        b.set_value(1, 1, 4.5);
        assert_ne!(write_raster_hex_wkb(&a), write_raster_hex_wkb(&b));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_raster_hex_wkb("ABC"),
            Err(FormatError::Hex(_))
        ));
        assert!(matches!(
            parse_raster_hex_wkb("00"),
            Err(FormatError::Hex(_))
        ));
        // Bump the version halfword.
        let mut hex = write_raster_hex_wkb(&raster_a());
        hex.replace_range(0..2, "01");
        assert!(matches!(parse_raster_hex_wkb(&hex), Err(FormatError::Hex(_))));
        // Truncate the payload.
        let hex = write_raster_hex_wkb(&raster_a());
        assert!(matches!(
            parse_raster_hex_wkb(&hex[..hex.len() - 2]),
            Err(FormatError::Hex(_))
        ));
    }
}
