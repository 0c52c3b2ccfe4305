//! The function registry: maps function IRIs to arity-checked builtin
//! implementations. All raster and geometry builtins are registered before
//! any query runs. Standard geometry functions are reachable under both the
//! `geof:` and `geo:` namespaces.

use std::collections::HashMap;
use std::rc::Rc;

use super::value::{EvalError, Value};
use super::Evaluator;
use crate::geom::{
    area, boundary, buffer, convex_hull, distance, envelope, geom_intersection, geom_set_op,
    sf_predicate, SetOp, SfPredicate,
};
use crate::raster::algebra::{
    aggregate, cellwise_binary, cellwise_binary_const, cellwise_unary, geom_to_raster,
    geometry_intersection, geometry_intersects_valid_cells, raster_intersection,
    raster_relation, raster_union, rescale, valid_region, AggregateOp, BinaryOp, ConstOp,
    RasterOrGeom, RasterRelation, UnaryOp,
};
use crate::raster::{Accessor, AccessorValue};
use crate::rasterio::{write_coverage_json, write_raster_hex_wkb};
use crate::rdf::Term;
use crate::vocab::{GEO2_NS, GEOF_NS, GEO_NS};
use crate::{Geometry, Raster};

type Builtin = Box<dyn Fn(&Evaluator, &[Value]) -> Result<Value, EvalError>>;

pub struct FunctionRegistry {
    map: HashMap<String, (usize, Builtin)>,
}

impl FunctionRegistry {
    pub fn with_builtins() -> FunctionRegistry {
        let mut registry = FunctionRegistry {
            map: HashMap::new(),
        };
        registry.register_builtins();
        registry
    }

    pub fn contains(&self, iri: &str) -> bool {
        self.map.contains_key(iri)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn dispatch(
        &self,
        ev: &Evaluator,
        iri: &str,
        args: &[Value],
    ) -> Result<Value, EvalError> {
        let (arity, implementation) = self
            .map
            .get(iri)
            .ok_or_else(|| EvalError::UnknownFunction(iri.to_string()))?;
        if args.len() != *arity {
            return Err(EvalError::Arity {
                iri: iri.to_string(),
                expected: *arity,
                got: args.len(),
            });
        }
        implementation(ev, args)
    }

    fn register(
        &mut self,
        iri: String,
        arity: usize,
        implementation: impl Fn(&Evaluator, &[Value]) -> Result<Value, EvalError> + Clone + 'static,
    ) {
        self.map
            .insert(iri, (arity, Box::new(implementation)));
    }

    /// Registers under both the `geof:` and `geo:` namespaces.
    fn register_standard(
        &mut self,
        name: &str,
        arity: usize,
        implementation: impl Fn(&Evaluator, &[Value]) -> Result<Value, EvalError> + Clone + 'static,
    ) {
        self.register(format!("{GEOF_NS}{name}"), arity, implementation.clone());
        self.register(format!("{GEO_NS}{name}"), arity, implementation);
    }

    fn register_geo2(
        &mut self,
        name: &str,
        arity: usize,
        implementation: impl Fn(&Evaluator, &[Value]) -> Result<Value, EvalError> + Clone + 'static,
    ) {
        self.register(format!("{GEO2_NS}{name}"), arity, implementation);
    }

    fn register_builtins(&mut self) {
        // Geometry metrics and constructions.
        self.register_standard("buffer", 3, |ev, args| {
            let g = ev.coerce_geometry(&args[0])?;
            let radius = ev.coerce_number(&args[1])?;
            let unit = ev.coerce_iri(&args[2])?;
            let rect = buffer(&g, radius, &unit)
                .map_err(|e| EvalError::Runtime(e.to_string()))?;
            Ok(Value::Geometry(Rc::new(Geometry::Rectangle(rect))))
        });
        self.register_standard("distance", 2, |ev, args| {
            let a = ev.coerce_geometry(&args[0])?;
            let b = ev.coerce_geometry(&args[1])?;
            Ok(Value::Number(distance(&a, &b)))
        });
        self.register_standard("area", 1, |ev, args| {
            let g = ev.coerce_geometry(&args[0])?;
            Ok(Value::Number(area(&g)))
        });
        self.register_standard("intersection", 2, |ev, args| {
            let a = ev.coerce_geometry(&args[0])?;
            let b = ev.coerce_geometry(&args[1])?;
            Ok(Value::Geometry(Rc::new(geom_intersection(&a, &b))))
        });
        for (name, op) in [
            ("union", SetOp::Union),
            ("difference", SetOp::Difference),
            ("symDifference", SetOp::SymDifference),
        ] {
            self.register_standard(name, 2, move |ev, args| {
                let a = ev.coerce_geometry(&args[0])?;
                let b = ev.coerce_geometry(&args[1])?;
                Ok(Value::Geometry(Rc::new(geom_set_op(op, &a, &b))))
            });
        }
        self.register_standard("convexHull", 1, |ev, args| {
            let g = ev.coerce_geometry(&args[0])?;
            Ok(Value::Geometry(Rc::new(convex_hull(&g))))
        });
        self.register_standard("boundary", 1, |ev, args| {
            let g = ev.coerce_geometry(&args[0])?;
            Ok(Value::Geometry(Rc::new(boundary(&g))))
        });
        self.register_standard("envelope", 1, |ev, args| {
            let g = ev.coerce_geometry(&args[0])?;
            Ok(Value::Geometry(Rc::new(Geometry::Rectangle(envelope(&g)))))
        });
        self.register_standard("getsrid", 1, |ev, args| {
            ev.coerce_geometry(&args[0])?;
            Ok(Value::Term(Term::string_literal(crate::vocab::DEFAULT_CRS)))
        });

        // Simple-features predicates. `equals` and `intersects` carry the
        // raster-aware overloads; the remaining predicates take geometries.
        for (name, pred) in [
            ("sfDisjoint", SfPredicate::Disjoint),
            ("disjoint", SfPredicate::Disjoint),
            ("sfContains", SfPredicate::Contains),
            ("contains", SfPredicate::Contains),
            ("sfWithin", SfPredicate::Within),
            ("within", SfPredicate::Within),
            ("sfCovers", SfPredicate::Covers),
            ("covers", SfPredicate::Covers),
            ("sfOverlaps", SfPredicate::Overlaps),
            ("overlaps", SfPredicate::Overlaps),
            ("sfTouches", SfPredicate::Touches),
            ("touches", SfPredicate::Touches),
            ("sfCrosses", SfPredicate::Crosses),
            ("crosses", SfPredicate::Crosses),
        ] {
            self.register_standard(name, 2, move |ev, args| {
                let a = ev.coerce_geometry(&args[0])?;
                let b = ev.coerce_geometry(&args[1])?;
                Ok(Value::Boolean(sf_predicate(pred, &a, &b)))
            });
        }
        for name in ["sfEquals", "equals"] {
            self.register_standard(name, 2, equals_overloads);
        }
        for name in ["sfIntersects", "intersects"] {
            self.register_standard(name, 2, intersects_overloads);
        }
        self.register_geo2("equals", 2, equals_overloads);
        self.register_geo2("intersects", 2, intersects_overloads);

        // Raster algebra, binary.
        for (name, op) in [
            ("rasterPlus", BinaryOp::Plus),
            ("rasterSubtract", BinaryOp::Subtract),
            ("rasterMult", BinaryOp::Mult),
            ("rasterDiv", BinaryOp::Div),
            ("rasterAnd", BinaryOp::And),
            ("rasterOr", BinaryOp::Or),
            ("rasterXor", BinaryOp::Xor),
            // The cellwise comparison; the boolean domain relation is
            // ST_rasterEquals below, following the appendix naming.
            ("rasterEquals", BinaryOp::Equals),
        ] {
            self.register_geo2(name, 2, move |ev, args| {
                let r1 = ev.coerce_raster(&args[0])?;
                let r2 = ev.coerce_raster(&args[1])?;
                Ok(Value::Raster(Rc::new(cellwise_binary(op, &r1, &r2))))
            });
        }

        // Raster algebra, against a constant.
        for (name, op) in [
            ("rasterPlusConst", ConstOp::Plus),
            ("rasterSubtractConst", ConstOp::Subtract),
            ("rasterMultConst", ConstOp::Mult),
            ("rasterDivConst", ConstOp::Div),
            ("rasterAndConst", ConstOp::And),
            ("rasterOrConst", ConstOp::Or),
            ("rasterXorConst", ConstOp::Xor),
            ("rasterEqualsConst", ConstOp::Equals),
            ("rasterExp", ConstOp::Exp),
            ("rasterSmaller", ConstOp::SmallerKeep),
            ("rasterGreater", ConstOp::GreaterKeep),
            ("isGreater", ConstOp::GreaterKeep),
        ] {
            self.register_geo2(name, 2, move |ev, args| {
                let r = ev.coerce_raster(&args[0])?;
                let c = ev.coerce_number(&args[1])?;
                Ok(Value::Raster(Rc::new(cellwise_binary_const(op, &r, c))))
            });
        }

        for (name, op) in [("rasterNot", UnaryOp::Not), ("rasterInvert", UnaryOp::Invert)] {
            self.register_geo2(name, 1, move |ev, args| {
                let r = ev.coerce_raster(&args[0])?;
                Ok(Value::Raster(Rc::new(cellwise_unary(op, &r))))
            });
        }

        for (name, op) in [
            ("rasterMax", AggregateOp::Max),
            ("max", AggregateOp::Max),
            ("rasterMin", AggregateOp::Min),
            ("rasterMean", AggregateOp::Mean),
        ] {
            self.register_geo2(name, 1, move |ev, args| {
                let r = ev.coerce_raster(&args[0])?;
                let v = aggregate(op, &r).map_err(|e| EvalError::Runtime(e.to_string()))?;
                Ok(Value::Number(v))
            });
        }

        // Cell access.
        self.register_geo2("cellval", 3, |ev, args| {
            let r = ev.coerce_raster(&args[0])?;
            let x = ev.coerce_number(&args[1])?;
            let y = ev.coerce_number(&args[2])?;
            let v = r
                .cellval(x, y)
                .map_err(|e| EvalError::Runtime(e.to_string()))?;
            Ok(Value::Number(v))
        });
        self.register_geo2("rasterCell", 3, |ev, args| {
            let r = ev.coerce_raster(&args[0])?;
            let x = ev.coerce_number(&args[1])?;
            let y = ev.coerce_number(&args[2])?;
            match r
                .accessor(Accessor::CellAt(x, y))
                .map_err(|e| EvalError::Runtime(e.to_string()))?
            {
                AccessorValue::Number(n) => Ok(Value::Number(n)),
                AccessorValue::Envelope(_) => unreachable!(),
            }
        });
        self.register_geo2("cellval2", 1, |ev, args| {
            let r = ev.coerce_raster(&args[0])?;
            Ok(Value::NumberList(r.cellval2()))
        });

        // Accessors.
        for (name, which) in [
            ("rasterWidth", Accessor::Width),
            ("rasterHeight", Accessor::Height),
            ("rasterCellWidth", Accessor::CellWidth),
            ("rasterCellHeight", Accessor::CellHeight),
        ] {
            self.register_geo2(name, 1, move |ev, args| {
                let r = ev.coerce_raster(&args[0])?;
                match r
                    .accessor(which)
                    .map_err(|e| EvalError::Runtime(e.to_string()))?
                {
                    AccessorValue::Number(n) => Ok(Value::Number(n)),
                    AccessorValue::Envelope(_) => unreachable!(),
                }
            });
        }
        for name in ["rasterEnvelope", "raster2geom"] {
            self.register_geo2(name, 1, |ev, args| {
                let r = ev.coerce_raster(&args[0])?;
                Ok(Value::Geometry(Rc::new(r.domain_geometry())))
            });
        }

        // Raster/geometry conversions and combinations.
        self.register_geo2("geom2raster", 4, |ev, args| {
            let g = ev.coerce_geometry(&args[0])?;
            let value = ev.coerce_number(&args[1])?;
            let cols = ev.coerce_number(&args[2])?;
            let rows = ev.coerce_number(&args[3])?;
            let r = geom_to_raster(&g, value, cols, rows)
                .map_err(|e| EvalError::Runtime(e.to_string()))?;
            Ok(Value::Raster(Rc::new(r)))
        });
        self.register_geo2("rastervaleq", 2, |ev, args| {
            let r1 = ev.coerce_raster(&args[0])?;
            let r2 = ev.coerce_raster(&args[1])?;
            Ok(Value::Boolean(r1.val_eq(&r2)))
        });
        self.register_geo2("geometryIntersection", 2, |ev, args| {
            let a = coerce_raster_or_geom(ev, &args[0])?;
            let b = coerce_raster_or_geom(ev, &args[1])?;
            Ok(Value::Geometry(Rc::new(geometry_intersection(
                a.as_ref(),
                b.as_ref(),
            ))))
        });
        self.register_geo2("rasterIntersection", 2, |ev, args| {
            let a = coerce_raster_or_geom(ev, &args[0])?;
            let b = coerce_raster_or_geom(ev, &args[1])?;
            let r = raster_intersection(a.as_ref(), b.as_ref())
                .map_err(|e| EvalError::Runtime(e.to_string()))?;
            Ok(Value::Raster(Rc::new(r)))
        });
        self.register_geo2("rasterUnion", 2, |ev, args| {
            let a = coerce_raster_or_geom(ev, &args[0])?;
            let b = coerce_raster_or_geom(ev, &args[1])?;
            let r = raster_union(a.as_ref(), b.as_ref())
                .map_err(|e| EvalError::Runtime(e.to_string()))?;
            Ok(Value::Raster(Rc::new(r)))
        });

        for name in ["rasterRescale", "rasterResize"] {
            self.register_geo2(name, 3, |ev, args| {
                let r = ev.coerce_raster(&args[0])?;
                let cols = ev.coerce_number(&args[1])?;
                let rows = ev.coerce_number(&args[2])?;
                if cols < 1.0 || rows < 1.0 || cols.fract() != 0.0 || rows.fract() != 0.0 {
                    return Err(EvalError::Runtime(
                        "rescale requires positive integer dimensions".into(),
                    ));
                }
                let out = rescale(&r, cols as usize, rows as usize)
                    .map_err(|e| EvalError::Runtime(e.to_string()))?;
                Ok(Value::Raster(Rc::new(out)))
            });
        }

        // Raster-to-vector relations, also reachable under their ST_ names.
        for (name, relation) in [
            ("rasterCoveredBy", RasterRelation::CoveredBy),
            ("ST_rasterCoveredBy", RasterRelation::CoveredBy),
            ("rasterOverlaps", RasterRelation::Overlaps),
            ("ST_rasterOverlaps", RasterRelation::Overlaps),
            ("rasterTouches", RasterRelation::Touches),
            ("ST_rasterTouches", RasterRelation::Touches),
            ("rasterWithin", RasterRelation::Within),
            ("ST_rasterWithin", RasterRelation::Within),
            ("ST_rasterEquals", RasterRelation::EqualsGeom),
            ("rasterEqualsContent", RasterRelation::EqualsContent),
            ("ST_rasterEqualsContent", RasterRelation::EqualsContent),
        ] {
            self.register_geo2(name, 2, move |ev, args| {
                let a = coerce_raster_or_geom(ev, &args[0])?;
                let b = coerce_raster_or_geom(ev, &args[1])?;
                let v = raster_relation(relation, a.as_ref(), b.as_ref())
                    .map_err(|e| EvalError::Runtime(e.to_string()))?;
                Ok(Value::Boolean(v))
            });
        }
        for name in ["rasterWithinDistance", "ST_rasterWithinDistance"] {
            self.register_geo2(name, 3, |ev, args| {
                let a = coerce_raster_or_geom(ev, &args[0])?;
                let b = coerce_raster_or_geom(ev, &args[1])?;
                let d = ev.coerce_number(&args[2])?;
                let v = raster_relation(
                    RasterRelation::WithinDistance(d),
                    a.as_ref(),
                    b.as_ref(),
                )
                .map_err(|e| EvalError::Runtime(e.to_string()))?;
                Ok(Value::Boolean(v))
            });
        }

        // Exporters.
        self.register_geo2("asCoverageJSON", 1, |ev, args| {
            let r = ev.coerce_raster(&args[0])?;
            Ok(Value::Term(Term::string_literal(write_coverage_json(&r))))
        });
        self.register_geo2("asRasterHexWKB", 1, |ev, args| {
            let r = ev.coerce_raster(&args[0])?;
            Ok(Value::Term(Term::string_literal(write_raster_hex_wkb(&r))))
        });
    }
}

/// Owned raster-or-geometry argument, so builtins can borrow either.
enum OwnedRg {
    Raster(Rc<Raster>),
    Geom(Rc<Geometry>),
}

impl OwnedRg {
    fn as_ref(&self) -> RasterOrGeom<'_, f64> {
        match self {
            OwnedRg::Raster(r) => RasterOrGeom::Raster(r),
            OwnedRg::Geom(g) => RasterOrGeom::Geom(g),
        }
    }
}

fn coerce_raster_or_geom(ev: &Evaluator, value: &Value) -> Result<OwnedRg, EvalError> {
    if let Ok(r) = ev.coerce_raster(value) {
        return Ok(OwnedRg::Raster(r));
    }
    ev.coerce_geometry(value).map(OwnedRg::Geom)
}

/// The four equals overloads: rasters stand for the union of their valid
/// cell rectangles (their point set as a partial function), so the test is
/// point-set equality in every combination.
fn equals_overloads(ev: &Evaluator, args: &[Value]) -> Result<Value, EvalError> {
    let a = coerce_raster_or_geom(ev, &args[0])?;
    let b = coerce_raster_or_geom(ev, &args[1])?;
    let region_of = |rg: &OwnedRg| match rg {
        OwnedRg::Raster(r) => valid_region(r),
        OwnedRg::Geom(g) => g.to_region(),
    };
    let ra = region_of(&a);
    let rb = region_of(&b);
    Ok(Value::Boolean(ra.subset_of(&rb) && rb.subset_of(&ra)))
}

/// The four intersects overloads. Geometry/raster pairs iterate the valid
/// cells directly; raster/raster pairs use the valid-cell regions.
fn intersects_overloads(ev: &Evaluator, args: &[Value]) -> Result<Value, EvalError> {
    let a = coerce_raster_or_geom(ev, &args[0])?;
    let b = coerce_raster_or_geom(ev, &args[1])?;
    let result = match (&a, &b) {
        (OwnedRg::Geom(g1), OwnedRg::Geom(g2)) => {
            sf_predicate(SfPredicate::Intersects, g1, g2)
        }
        (OwnedRg::Geom(g), OwnedRg::Raster(r)) | (OwnedRg::Raster(r), OwnedRg::Geom(g)) => {
            geometry_intersects_valid_cells(g, r)
        }
        (OwnedRg::Raster(r1), OwnedRg::Raster(r2)) => {
            valid_region(r1).intersects(&valid_region(r2))
        }
    };
    Ok(Value::Boolean(result))
}
