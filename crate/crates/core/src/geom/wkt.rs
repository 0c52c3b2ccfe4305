//! WKT parsing and serialization for the supported 2D subset: POINT,
//! LINESTRING, POLYGON (no holes), MULTIPOLYGON, MULTILINESTRING and
//! GEOMETRYCOLLECTION.
//!
//! Keywords are case-insensitive. Coordinates may be separated by spaces or
//! commas; the flat number list is paired in order, which accepts both the
//! standard `POINT(1 2)` and the comma form `POINT(1,2)` seen in queries.

use super::{GeomError, Geometry, LineString, Point, Polygon};
use crate::scalar::Scalar;

pub fn parse_wkt<T: Scalar>(text: &str) -> Result<Geometry<T>, GeomError> {
    let mut parser = WktParser {
        text: text.as_bytes(),
        pos: 0,
    };
    let geometry = parser.parse_geometry()?;
    parser.skip_ws();
    if !parser.at_end() {
        return Err(parser.error("trailing input after geometry"));
    }
    Ok(geometry)
}

pub fn to_wkt<T: Scalar>(g: &Geometry<T>) -> String {
    let mut out = String::new();
    write_geometry(g, &mut out);
    out
}

fn write_geometry<T: Scalar>(g: &Geometry<T>, out: &mut String) {
    match g {
        Geometry::Point(p) => {
            out.push_str(&format!("POINT({} {})", p.x, p.y));
        }
        Geometry::LineString(ls) => {
            out.push_str("LINESTRING(");
            write_coords(ls.points(), out);
            out.push(')');
        }
        Geometry::Polygon(poly) => {
            out.push_str("POLYGON((");
            write_coords(poly.ring(), out);
            out.push_str("))");
        }
        Geometry::Rectangle(r) => {
            let ring = [
                Point::new(r.min_x, r.min_y),
                Point::new(r.max_x, r.min_y),
                Point::new(r.max_x, r.max_y),
                Point::new(r.min_x, r.max_y),
                Point::new(r.min_x, r.min_y),
            ];
            out.push_str("POLYGON((");
            write_coords(&ring, out);
            out.push_str("))");
        }
        Geometry::Collection(members) => {
            if members.is_empty() {
                out.push_str("GEOMETRYCOLLECTION EMPTY");
                return;
            }
            out.push_str("GEOMETRYCOLLECTION(");
            for (i, m) in members.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_geometry(m, out);
            }
            out.push(')');
        }
    }
}

fn write_coords<T: Scalar>(points: &[Point<T>], out: &mut String) {
    for (i, p) in points.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!("{} {}", p.x, p.y));
    }
}

struct WktParser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> WktParser<'a> {
    fn error(&self, message: &str) -> GeomError {
        GeomError::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn keyword(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.text[start..self.pos]).to_ascii_uppercase()
    }

    fn expect(&mut self, byte: u8) -> Result<(), GeomError> {
        self.skip_ws();
        if self.pos < self.text.len() && self.text[self.pos] == byte {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", byte as char)))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn parse_geometry<T: Scalar>(&mut self) -> Result<Geometry<T>, GeomError> {
        let keyword = self.keyword();
        match keyword.as_str() {
            "POINT" => {
                if self.try_empty() {
                    return Err(self.error("empty POINT is not supported"));
                }
                let coords = self.parenthesized_coords()?;
                if coords.len() != 1 {
                    return Err(self.error("POINT requires exactly one coordinate pair"));
                }
                Ok(Geometry::Point(coords[0]))
            }
            "LINESTRING" => {
                let coords = self.parenthesized_coords()?;
                Ok(Geometry::LineString(LineString::new(coords)?))
            }
            "POLYGON" => {
                if self.try_empty() {
                    return Ok(Geometry::empty());
                }
                let rings = self.ring_list()?;
                if rings.len() > 1 {
                    return Err(self.error("polygon holes are not supported"));
                }
                Ok(Geometry::Polygon(Polygon::new(
                    rings.into_iter().next().unwrap(),
                )?))
            }
            "MULTIPOLYGON" => {
                if self.try_empty() {
                    return Ok(Geometry::empty());
                }
                self.expect(b'(')?;
                let mut members = Vec::new();
                loop {
                    let rings = self.ring_list()?;
                    if rings.len() > 1 {
                        return Err(self.error("polygon holes are not supported"));
                    }
                    let poly = Polygon::new(rings.into_iter().next().unwrap())?;
                    members.push(Geometry::Polygon(poly));
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                        }
                        _ => break,
                    }
                }
                self.expect(b')')?;
                Ok(Geometry::Collection(members))
            }
            "MULTILINESTRING" => {
                if self.try_empty() {
                    return Ok(Geometry::empty());
                }
                self.expect(b'(')?;
                let mut members = Vec::new();
                loop {
                    let coords = self.parenthesized_coords()?;
                    let ls = LineString::new(coords)?;
                    members.push(Geometry::LineString(ls));
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                        }
                        _ => break,
                    }
                }
                self.expect(b')')?;
                Ok(Geometry::Collection(members))
            }
            "GEOMETRYCOLLECTION" => {
                if self.try_empty() {
                    return Ok(Geometry::empty());
                }
                self.expect(b'(')?;
                let mut members = Vec::new();
                loop {
                    members.push(self.parse_geometry()?);
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                        }
                        _ => break,
                    }
                }
                self.expect(b')')?;
                Ok(Geometry::Collection(members))
            }
            "" => Err(self.error("expected geometry keyword")),
            other => Err(self.error(&format!("unsupported geometry type {other}"))),
        }
    }

    fn try_empty(&mut self) -> bool {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        if rest.len() >= 5 && rest[..5].eq_ignore_ascii_case(b"EMPTY") {
            self.pos += 5;
            true
        } else {
            false
        }
    }

    /// `((ring),(ring))`-style list used by POLYGON bodies.
    fn ring_list<T: Scalar>(&mut self) -> Result<Vec<Vec<Point<T>>>, GeomError> {
        self.expect(b'(')?;
        let mut rings = Vec::new();
        loop {
            rings.push(self.parenthesized_coords()?);
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                }
                _ => break,
            }
        }
        self.expect(b')')?;
        Ok(rings)
    }

    /// `(n n, n n, ...)` — reads a flat list of numbers separated by commas
    /// and/or whitespace, then pairs them in order.
    fn parenthesized_coords<T: Scalar>(&mut self) -> Result<Vec<Point<T>>, GeomError> {
        self.expect(b'(')?;
        let mut numbers: Vec<T> = Vec::new();
        loop {
            match self.peek() {
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                Some(b',') => {
                    self.pos += 1;
                }
                Some(_) => numbers.push(self.number()?),
                None => return Err(self.error("unterminated coordinate list")),
            }
        }
        if numbers.is_empty() || numbers.len() % 2 != 0 {
            return Err(self.error("coordinate list must contain an even number of values"));
        }
        Ok(numbers
            .chunks(2)
            .map(|pair| Point::new(pair[0], pair[1]))
            .collect())
    }

    fn number<T: Scalar>(&mut self) -> Result<T, GeomError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() {
            let b = self.text[self.pos];
            if b.is_ascii_digit() || matches!(b, b'-' | b'+' | b'.' | b'e' | b'E') {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let raw = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        let value: f64 = raw
            .parse()
            .map_err(|_| self.error(&format!("invalid number `{raw}`")))?;
        Ok(T::from_f64(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_space_and_comma_forms() {
        let a: Geometry<f64> = parse_wkt("POINT(49.2 36.2)").unwrap();
        let b: Geometry<f64> = parse_wkt("POINT(49.2,36.2)").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, Geometry::point(49.2, 36.2));
    }

    #[test]
    fn unit_square_polygon() {
        let g: Geometry<f64> = parse_wkt("POLYGON((0 0,1 0,1 1,0 1,0 0))").unwrap();
        match &g {
            Geometry::Polygon(p) => assert_eq!(p.ring().len(), 5),
            other => panic!("expected polygon, got {other:?}"),
        }
    }

    #[test]
    fn bow_tie_is_a_validity_error() {
        let r: Result<Geometry<f64>, _> = parse_wkt("POLYGON((0 0,1 1,1 0,0 1,0 0))");
        assert!(matches!(r, Err(GeomError::Invalid(_))));
    }

    #[test]
    fn keywords_are_case_insensitive() {
        let g: Geometry<f64> = parse_wkt("point( 1 2 )").unwrap();
        assert_eq!(g, Geometry::point(1.0, 2.0));
        assert!(parse_wkt::<f64>("LineString(0 0, 2 1)").is_ok());
    }

    #[test]
    fn rectangle_serializes_as_polygon() {
        let r: Geometry<f64> = Geometry::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(to_wkt(&r), "POLYGON((0 0,1 0,1 1,0 1,0 0))");
        assert_eq!(to_wkt(&Geometry::point(0.0, 0.0)), "POINT(0 0)");
    }

    #[test]
    fn multi_forms_become_collections() {
        let g: Geometry<f64> =
            parse_wkt("MULTILINESTRING((0 0,1 1),(2 2,3 3))").unwrap();
        match &g {
            Geometry::Collection(ms) => assert_eq!(ms.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
        let g: Geometry<f64> =
            parse_wkt("MULTIPOLYGON(((0 0,1 0,1 1,0 1,0 0)),((2 0,3 0,3 1,2 1,2 0)))")
                .unwrap();
        match &g {
            Geometry::Collection(ms) => assert_eq!(ms.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
        let g: Geometry<f64> =
            parse_wkt("GEOMETRYCOLLECTION(POINT(1 1),LINESTRING(0 0,1 1))").unwrap();
        match &g {
            Geometry::Collection(ms) => assert_eq!(ms.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn errors_report_position() {
        match parse_wkt::<f64>("POINT(1 2") {
            Err(GeomError::Parse { position, .. }) => assert!(position >= 9),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_wkt::<f64>("TRIANGLE(0 0,1 0,0 1)"),
            Err(GeomError::Parse { .. })
        ));
    }

    #[test]
    fn holes_are_rejected() {
        let r = parse_wkt::<f64>(
            "POLYGON((0 0,4 0,4 4,0 4,0 0),(1 1,2 1,2 2,1 2,1 1))",
        );
        assert!(matches!(r, Err(GeomError::Parse { .. })));
    }

    #[test]
    fn round_trip_preserves_geometry() {
        let cases = [
            "POINT(3.5 -2)",
            "LINESTRING(0 0,2 1,4 0)",
            "POLYGON((0 0,2 0,2 2,0 2,0 0))",
            "GEOMETRYCOLLECTION(POINT(1 1),POLYGON((0 0,1 0,1 1,0 1,0 0)))",
            "GEOMETRYCOLLECTION EMPTY",
        ];
        for case in cases {
            let g: Geometry<f64> = parse_wkt(case).unwrap();
            let again: Geometry<f64> = parse_wkt(&to_wkt(&g)).unwrap();
            assert_eq!(g, again, "case {case}");
        }
    }
}
