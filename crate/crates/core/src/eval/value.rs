//! Runtime values and coercions. Expression evaluation is defined on RDF
//! terms; geometry and raster literals are materialized lazily and cached
//! per lexical form by the evaluator.

use std::rc::Rc;

use thiserror::Error;

use crate::geom::to_wkt;
use crate::rasterio::write_coverage_json;
use crate::rdf::Term;
use crate::vocab;
use crate::{Geometry, Raster};

/// Expression evaluation errors. Inside FILTER they make the condition
/// unsatisfied; inside BIND they drop the binding.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("unbound variable ?{0}")]
    Unbound(String),
    #[error("unknown function <{0}>")]
    UnknownFunction(String),
    #[error("<{iri}> expects {expected} arguments, got {got}")]
    Arity {
        iri: String,
        expected: usize,
        got: usize,
    },
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("evaluation error: {0}")]
    Runtime(String),
}

#[derive(Debug, Clone)]
pub enum Value {
    Term(Term),
    Geometry(Rc<Geometry>),
    Raster(Rc<Raster>),
    Number(f64),
    Boolean(bool),
    NumberList(Vec<f64>),
}

impl Value {
    /// Materializes the value as an RDF term (BIND results live in
    /// bindings). Number lists have no term form; BIND expands them
    /// element-wise instead.
    pub fn into_term(self) -> Result<Term, EvalError> {
        Ok(match self {
            Value::Term(t) => t,
            Value::Geometry(g) => Term::typed_literal(to_wkt(&g), vocab::WKT_LITERAL),
            Value::Raster(r) => {
                Term::typed_literal(write_coverage_json(&r), vocab::COVJSON_LITERAL)
            }
            Value::Number(n) => Term::double_literal(n),
            Value::Boolean(b) => Term::boolean_literal(b),
            Value::NumberList(_) => {
                return Err(EvalError::TypeMismatch(
                    "a value list has no term form".into(),
                ))
            }
        })
    }
}

pub(crate) const NUMERIC_DATATYPES: &[&str] = &[
    vocab::XSD_INTEGER,
    vocab::XSD_DECIMAL,
    vocab::XSD_DOUBLE,
    vocab::XSD_FLOAT,
];

/// Numeric view of a term, when its datatype is numeric.
pub(crate) fn term_as_number(term: &Term) -> Option<f64> {
    match term {
        Term::Literal {
            lexical, datatype, ..
        } if NUMERIC_DATATYPES.contains(&datatype.as_str()) => lexical.trim().parse().ok(),
        _ => None,
    }
}

pub(crate) fn term_as_datetime(term: &Term) -> Option<chrono::DateTime<chrono::FixedOffset>> {
    match term {
        Term::Literal {
            lexical, datatype, ..
        } if datatype == vocab::XSD_DATETIME => {
            chrono::DateTime::parse_from_rfc3339(lexical.trim()).ok()
        }
        _ => None,
    }
}

pub(crate) fn term_as_boolean(term: &Term) -> Option<bool> {
    match term {
        Term::Literal {
            lexical, datatype, ..
        } if datatype == vocab::XSD_BOOLEAN => match lexical.trim() {
            "true" | "1" => Some(true),
            "false" | "0" => Some(false),
            _ => None,
        },
        _ => None,
    }
}
