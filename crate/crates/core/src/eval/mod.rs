//! The query evaluator: expression evaluation over bindings, filter
//! satisfaction, BGP evaluation with join/FILTER/BIND and SELECT projection
//! with the MAX aggregate, dispatching builtins through a function registry.

mod registry;
mod value;

pub use registry::FunctionRegistry;
pub use value::{EvalError, Value};

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use crate::geom::parse_wkt;
use crate::query::{BgpNode, BoolOp, CmpOp, Expression, SelectQuery};
use crate::rasterio::parse_coverage_json;
use crate::rdf::{join_bindings, Binding, BindingSet, Graph, Term};
use crate::vocab;
use crate::{Geometry, Raster};

/// Evaluates queries over one immutable graph. Geometry and raster literals
/// are parsed once per lexical form and cached for the evaluator's lifetime.
pub struct Evaluator<'g> {
    graph: &'g Graph,
    registry: FunctionRegistry,
    geometries: RefCell<HashMap<String, Rc<Geometry>>>,
    rasters: RefCell<HashMap<String, Rc<Raster>>>,
}

impl<'g> Evaluator<'g> {
    pub fn new(graph: &'g Graph) -> Evaluator<'g> {
        Evaluator {
            graph,
            registry: FunctionRegistry::with_builtins(),
            geometries: RefCell::new(HashMap::new()),
            rasters: RefCell::new(HashMap::new()),
        }
    }

    pub fn registry(&self) -> &FunctionRegistry {
        &self.registry
    }

    /// Expression evaluation over a binding.
    pub fn eval_expression(
        &self,
        expression: &Expression,
        binding: &Binding,
    ) -> Result<Value, EvalError> {
        match expression {
            Expression::Var(name) => binding
                .get(name)
                .map(|t| Value::Term(t.as_ref().clone()))
                .ok_or_else(|| EvalError::Unbound(name.clone())),
            Expression::Const(term) => Ok(Value::Term(term.clone())),
            Expression::Call { iri, args } => {
                let mut values = Vec::with_capacity(args.len());
                for a in args {
                    values.push(self.eval_expression(a, binding)?);
                }
                self.registry.dispatch(self, iri, &values)
            }
            Expression::Cmp { op, lhs, rhs } => {
                let l = self.eval_expression(lhs, binding)?;
                let r = self.eval_expression(rhs, binding)?;
                Ok(Value::Boolean(compare(*op, &l, &r)?))
            }
            Expression::Bool { op, operands } => self.eval_bool(*op, operands, binding),
            Expression::Arith { op, lhs, rhs } => {
                let l = self.coerce_number(&self.eval_expression(lhs, binding)?)?;
                let r = self.coerce_number(&self.eval_expression(rhs, binding)?)?;
                let result = match op {
                    crate::query::ArithOp::Add => l + r,
                    crate::query::ArithOp::Sub => l - r,
                    crate::query::ArithOp::Mul => l * r,
                    crate::query::ArithOp::Div => {
                        if r == 0.0 {
                            return Err(EvalError::Runtime("division by zero".into()));
                        }
                        l / r
                    }
                };
                Ok(Value::Number(result))
            }
        }
    }

    /// SPARQL-style three-valued connectives: errors poison a conjunction
    /// only when no operand is decisively false, and a disjunction only when
    /// no operand is decisively true.
    fn eval_bool(
        &self,
        op: BoolOp,
        operands: &[Expression],
        binding: &Binding,
    ) -> Result<Value, EvalError> {
        match op {
            BoolOp::Not => {
                let v = self.eval_expression(&operands[0], binding)?;
                Ok(Value::Boolean(!self.coerce_boolean(&v)?))
            }
            BoolOp::And => {
                let mut error = None;
                for operand in operands {
                    match self
                        .eval_expression(operand, binding)
                        .and_then(|v| self.coerce_boolean(&v))
                    {
                        Ok(false) => return Ok(Value::Boolean(false)),
                        Ok(true) => {}
                        Err(e) => error = Some(e),
                    }
                }
                match error {
                    Some(e) => Err(e),
                    None => Ok(Value::Boolean(true)),
                }
            }
            BoolOp::Or => {
                let mut error = None;
                for operand in operands {
                    match self
                        .eval_expression(operand, binding)
                        .and_then(|v| self.coerce_boolean(&v))
                    {
                        Ok(true) => return Ok(Value::Boolean(true)),
                        Ok(false) => {}
                        Err(e) => error = Some(e),
                    }
                }
                match error {
                    Some(e) => Err(e),
                    None => Ok(Value::Boolean(false)),
                }
            }
        }
    }

    /// Filter satisfaction: errors make the condition unsatisfied.
    pub fn satisfies_filter(&self, condition: &Expression, binding: &Binding) -> bool {
        matches!(
            self.eval_expression(condition, binding)
                .and_then(|v| self.coerce_boolean(&v)),
            Ok(true)
        )
    }

    /// Structural BGP evaluation: patterns match, blocks recurse,
    /// conjunction joins, FILTER keeps satisfying bindings, BIND extends
    /// each binding (list values expand to one binding per element; errors
    /// and already-bound target variables drop the binding).
    pub fn eval_bgp(&self, node: &BgpNode) -> BindingSet {
        match node {
            BgpNode::Pattern(tp) => self.graph.match_pattern(tp),
            BgpNode::Block(inner) => self.eval_bgp(inner),
            BgpNode::Conj(l, r) => {
                let left = self.eval_bgp(l);
                if left.is_empty() {
                    return left;
                }
                let right = self.eval_bgp(r);
                join_bindings(&left, &right)
            }
            BgpNode::Filter { body, condition } => {
                let mut bindings = self.eval_bgp(body);
                bindings.retain(|b| self.satisfies_filter(condition, b));
                bindings
            }
            BgpNode::Bind {
                body,
                expression,
                variable,
            } => {
                let bindings = self.eval_bgp(body);
                let mut out = Vec::with_capacity(bindings.len());
                for binding in bindings {
                    if binding.contains(variable) {
                        continue;
                    }
                    let Ok(value) = self.eval_expression(expression, &binding) else {
                        continue;
                    };
                    match value {
                        Value::NumberList(values) => {
                            for v in values {
                                let mut extended = binding.clone();
                                extended.bind(
                                    variable.clone(),
                                    std::sync::Arc::new(Term::double_literal(v)),
                                );
                                out.push(extended);
                            }
                        }
                        other => {
                            let Ok(term) = other.into_term() else { continue };
                            let mut extended = binding.clone();
                            extended.bind(variable.clone(), std::sync::Arc::new(term));
                            out.push(extended);
                        }
                    }
                }
                out
            }
        }
    }

    /// Full SELECT evaluation: projection, optional MAX aggregate with
    /// implicit grouping by the plain projected variables, rows sorted by
    /// term lexical order.
    pub fn eval_select(&self, query: &SelectQuery) -> ResultTable {
        let bindings = self.eval_bgp(&query.body);
        let columns: Vec<String> =
            query.output_vars().iter().map(|s| s.to_string()).collect();
        let mut rows: Vec<Vec<Option<Term>>> = Vec::new();

        if let Some((over, _)) = query.aggregate() {
            let group_vars = query.group_vars();
            let mut groups: BTreeMap<Vec<Option<Term>>, f64> = BTreeMap::new();
            for binding in &bindings {
                let Some(value) = binding
                    .get(over)
                    .and_then(|t| value::term_as_number(t.as_ref()))
                else {
                    continue;
                };
                let key: Vec<Option<Term>> = group_vars
                    .iter()
                    .map(|v| binding.get(v).map(|t| t.as_ref().clone()))
                    .collect();
                groups
                    .entry(key)
                    .and_modify(|m| *m = m.max(value))
                    .or_insert(value);
            }
            for (key, max) in groups {
                let mut key_iter = key.into_iter();
                let row: Vec<Option<Term>> = query
                    .projection
                    .iter()
                    .map(|p| match p {
                        crate::query::Projection::Var(_) => key_iter.next().unwrap(),
                        crate::query::Projection::Max { .. } => {
                            Some(Term::double_literal(max))
                        }
                    })
                    .collect();
                rows.push(row);
            }
        } else {
            for binding in &bindings {
                rows.push(
                    query
                        .output_vars()
                        .iter()
                        .map(|v| binding.get(v).map(|t| t.as_ref().clone()))
                        .collect(),
                );
            }
        }

        rows.sort_by_key(row_sort_key);
        ResultTable { columns, rows }
    }

    pub(crate) fn coerce_geometry(&self, value: &Value) -> Result<Rc<Geometry>, EvalError> {
        match value {
            Value::Geometry(g) => Ok(g.clone()),
            Value::Term(Term::Literal { lexical, datatype, .. })
                if datatype == vocab::WKT_LITERAL =>
            {
                self.cached_geometry(lexical)
            }
            // Plain strings that look like WKT are accepted.
            Value::Term(Term::Literal { lexical, datatype, .. })
                if datatype == vocab::XSD_STRING && looks_like_wkt(lexical) =>
            {
                self.cached_geometry(lexical)
            }
            other => Err(EvalError::TypeMismatch(format!(
                "expected a geometry, got {}",
                describe(other)
            ))),
        }
    }

    fn cached_geometry(&self, lexical: &str) -> Result<Rc<Geometry>, EvalError> {
        if let Some(g) = self.geometries.borrow().get(lexical) {
            return Ok(g.clone());
        }
        let parsed = parse_wkt(lexical)
            .map_err(|e| EvalError::TypeMismatch(format!("bad WKT literal: {e}")))?;
        let rc = Rc::new(parsed);
        self.geometries
            .borrow_mut()
            .insert(lexical.to_string(), rc.clone());
        Ok(rc)
    }

    pub(crate) fn coerce_raster(&self, value: &Value) -> Result<Rc<Raster>, EvalError> {
        match value {
            Value::Raster(r) => Ok(r.clone()),
            Value::Term(Term::Literal { lexical, datatype, .. })
                if datatype == vocab::COVJSON_LITERAL
                    || (datatype == vocab::XSD_STRING
                        && lexical.trim_start().starts_with('{')) =>
            {
                if let Some(r) = self.rasters.borrow().get(lexical) {
                    return Ok(r.clone());
                }
                let parsed = parse_coverage_json(lexical).map_err(|e| {
                    EvalError::TypeMismatch(format!("bad raster literal: {e}"))
                })?;
                let rc = Rc::new(parsed);
                self.rasters
                    .borrow_mut()
                    .insert(lexical.clone(), rc.clone());
                Ok(rc)
            }
            other => Err(EvalError::TypeMismatch(format!(
                "expected a raster, got {}",
                describe(other)
            ))),
        }
    }

    pub(crate) fn coerce_number(&self, value: &Value) -> Result<f64, EvalError> {
        match value {
            Value::Number(n) => Ok(*n),
            Value::Term(t) => value::term_as_number(t).ok_or_else(|| {
                EvalError::TypeMismatch(format!("expected a number, got {t}"))
            }),
            other => Err(EvalError::TypeMismatch(format!(
                "expected a number, got {}",
                describe(other)
            ))),
        }
    }

    pub(crate) fn coerce_boolean(&self, value: &Value) -> Result<bool, EvalError> {
        match value {
            Value::Boolean(b) => Ok(*b),
            Value::Term(t) => value::term_as_boolean(t).ok_or_else(|| {
                EvalError::TypeMismatch(format!("expected a boolean, got {t}"))
            }),
            other => Err(EvalError::TypeMismatch(format!(
                "expected a boolean, got {}",
                describe(other)
            ))),
        }
    }

    /// IRI argument (unit IRIs); accepts IRI terms and string literals.
    pub(crate) fn coerce_iri(&self, value: &Value) -> Result<String, EvalError> {
        match value {
            Value::Term(Term::Iri(iri)) => Ok(iri.clone()),
            Value::Term(Term::Literal { lexical, .. }) => Ok(lexical.clone()),
            other => Err(EvalError::TypeMismatch(format!(
                "expected an IRI, got {}",
                describe(other)
            ))),
        }
    }
}

fn looks_like_wkt(text: &str) -> bool {
    let upper = text.trim_start().to_ascii_uppercase();
    ["POINT", "LINESTRING", "POLYGON", "MULTI", "GEOMETRYCOLLECTION"]
        .iter()
        .any(|k| upper.starts_with(k))
}

fn describe(value: &Value) -> String {
    match value {
        Value::Term(t) => format!("term {t}"),
        Value::Geometry(_) => "a geometry".into(),
        Value::Raster(_) => "a raster".into(),
        Value::Number(n) => format!("number {n}"),
        Value::Boolean(b) => format!("boolean {b}"),
        Value::NumberList(v) => format!("a list of {} numbers", v.len()),
    }
}

/// Comparison semantics: numeric when both sides are numeric, chronological
/// for xsd:dateTime pairs, lexical for plain/string literals; `=`/`!=` fall
/// back to RDF term equality.
fn compare(op: CmpOp, l: &Value, r: &Value) -> Result<bool, EvalError> {
    use std::cmp::Ordering;
    let ordering: Option<Ordering> = match (l, r) {
        (Value::Number(a), Value::Number(b)) => a.partial_cmp(b),
        (Value::Boolean(a), Value::Boolean(b)) => Some(a.cmp(b)),
        _ => {
            let num = |v: &Value| match v {
                Value::Number(n) => Some(*n),
                Value::Term(t) => value::term_as_number(t),
                _ => None,
            };
            if let (Some(a), Some(b)) = (num(l), num(r)) {
                a.partial_cmp(&b)
            } else if let (Value::Term(a), Value::Term(b)) = (l, r) {
                match (value::term_as_datetime(a), value::term_as_datetime(b)) {
                    (Some(da), Some(db)) => Some(da.cmp(&db)),
                    _ => match (a, b) {
                        (
                            Term::Literal { lexical: la, datatype: dta, language: None },
                            Term::Literal { lexical: lb, datatype: dtb, language: None },
                        ) if dta == vocab::XSD_STRING && dtb == vocab::XSD_STRING => {
                            Some(la.cmp(lb))
                        }
                        _ => None,
                    },
                }
            } else {
                None
            }
        }
    };
    match op {
        CmpOp::Eq | CmpOp::Ne => {
            let equal = match ordering {
                Some(ord) => ord == std::cmp::Ordering::Equal,
                None => match (l, r) {
                    (Value::Term(a), Value::Term(b)) => a == b,
                    _ => {
                        return Err(EvalError::TypeMismatch(
                            "incomparable values".into(),
                        ))
                    }
                },
            };
            Ok(if matches!(op, CmpOp::Eq) { equal } else { !equal })
        }
        _ => {
            let ord = ordering
                .ok_or_else(|| EvalError::TypeMismatch("incomparable values".into()))?;
            Ok(match op {
                CmpOp::Lt => ord == std::cmp::Ordering::Less,
                CmpOp::Gt => ord == std::cmp::Ordering::Greater,
                CmpOp::Le => ord != std::cmp::Ordering::Greater,
                CmpOp::Ge => ord != std::cmp::Ordering::Less,
                CmpOp::Eq | CmpOp::Ne => unreachable!(),
            })
        }
    }
}

fn row_sort_key(row: &Vec<Option<Term>>) -> Vec<Option<String>> {
    row.iter()
        .map(|t| t.as_ref().map(Term::to_ntriples))
        .collect()
}

/// Evaluation result: column names and rows of optional terms.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<Term>>>,
}

impl ResultTable {
    /// Tab-separated rendering: a header of variable names, then terms in
    /// N-Triples lexical form.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(
            &self
                .columns
                .iter()
                .map(|c| format!("?{c}"))
                .collect::<Vec<_>>()
                .join("\t"),
        );
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|t| t.as_ref().map(Term::to_ntriples).unwrap_or_default())
                .collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }

    /// JSON rows rendering: `{"vars": [...], "rows": [{var: term, ...}]}`.
    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (name, term) in self.columns.iter().zip(row.iter()) {
                    obj.insert(
                        name.clone(),
                        match term {
                            Some(t) => serde_json::Value::String(t.to_ntriples()),
                            None => serde_json::Value::Null,
                        },
                    );
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({
            "vars": self.columns,
            "rows": rows,
        }))
        .expect("result table serializes")
    }
}
