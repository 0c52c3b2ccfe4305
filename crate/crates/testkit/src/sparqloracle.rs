//! A naive reference evaluator for SELECT queries without geometry or
//! raster functions: linear-scan pattern matching, nested-loop joins and a
//! direct reading of the FILTER/BIND/projection semantics. Used to check
//! the engine's evaluator on randomized fixtures.

use std::collections::BTreeMap;

use rand::Rng;

use rastergraph_core::query::{
    ArithOp, BgpNode, BoolOp, CmpOp, Expression, Projection, SelectQuery,
};
use rastergraph_core::rdf::{Graph, PatternTerm, Term, Triple, TriplePattern};
use rastergraph_core::vocab;

/// A naive binding: plain map from names to terms.
pub type NaiveBinding = BTreeMap<String, Term>;

pub fn naive_select(query: &SelectQuery, graph: &Graph) -> Vec<Vec<Option<Term>>> {
    let bindings = naive_bgp(&query.body, graph);
    let mut rows = Vec::new();
    if let Some((over, _)) = query.aggregate() {
        let mut groups: BTreeMap<Vec<Option<String>>, f64> = BTreeMap::new();
        let mut reprs: BTreeMap<Vec<Option<String>>, Vec<Option<Term>>> = BTreeMap::new();
        for b in &bindings {
            let Some(v) = b.get(over).and_then(numeric) else { continue };
            let key: Vec<Option<String>> = query
                .group_vars()
                .iter()
                .map(|g| b.get(*g).map(|t| t.to_ntriples()))
                .collect();
            let repr: Vec<Option<Term>> = query
                .group_vars()
                .iter()
                .map(|g| b.get(*g).cloned())
                .collect();
            groups
                .entry(key.clone())
                .and_modify(|m| *m = m.max(v))
                .or_insert(v);
            reprs.entry(key).or_insert(repr);
        }
        for (key, max) in groups {
            let repr = reprs.remove(&key).unwrap();
            let mut repr_iter = repr.into_iter();
            let row = query
                .projection
                .iter()
                .map(|p| match p {
                    Projection::Var(_) => repr_iter.next().unwrap(),
                    Projection::Max { .. } => Some(Term::double_literal(max)),
                })
                .collect();
            rows.push(row);
        }
    } else {
        for b in &bindings {
            rows.push(
                query
                    .output_vars()
                    .iter()
                    .map(|v| b.get(*v).cloned())
                    .collect(),
            );
        }
    }
    rows
}

pub fn naive_bgp(node: &BgpNode, graph: &Graph) -> Vec<NaiveBinding> {
    match node {
        BgpNode::Pattern(tp) => naive_match(tp, graph),
        BgpNode::Block(inner) => naive_bgp(inner, graph),
        BgpNode::Conj(l, r) => {
            let left = naive_bgp(l, graph);
            let right = naive_bgp(r, graph);
            let mut out = Vec::new();
            for a in &left {
                for b in &right {
                    if compatible(a, b) {
                        let mut merged = a.clone();
                        for (k, v) in b {
                            merged.insert(k.clone(), v.clone());
                        }
                        out.push(merged);
                    }
                }
            }
            out
        }
        BgpNode::Filter { body, condition } => naive_bgp(body, graph)
            .into_iter()
            .filter(|b| matches!(eval(condition, b), Ok(V::Bool(true))))
            .collect(),
        BgpNode::Bind {
            body,
            expression,
            variable,
        } => {
            let mut out = Vec::new();
            for b in naive_bgp(body, graph) {
                if b.contains_key(variable) {
                    continue;
                }
                match eval(expression, &b) {
                    Ok(v) => {
                        if let Some(term) = v.into_term() {
                            let mut extended = b.clone();
                            extended.insert(variable.clone(), term);
                            out.push(extended);
                        }
                    }
                    Err(()) => {}
                }
            }
            out
        }
    }
}

fn naive_match(tp: &TriplePattern, graph: &Graph) -> Vec<NaiveBinding> {
    let mut out = Vec::new();
    'next: for triple in graph.triples() {
        let mut binding = NaiveBinding::new();
        for (pt, term) in positions(tp, triple) {
            match pt {
                PatternTerm::Term(expected) => {
                    if expected != term {
                        continue 'next;
                    }
                }
                PatternTerm::Variable(name) => match binding.get(name) {
                    Some(bound) if bound != term => continue 'next,
                    Some(_) => {}
                    None => {
                        binding.insert(name.clone(), term.clone());
                    }
                },
            }
        }
        out.push(binding);
    }
    out
}

fn positions<'a>(
    tp: &'a TriplePattern,
    triple: &'a Triple,
) -> [(&'a PatternTerm, &'a Term); 3] {
    [
        (&tp.subject, triple.subject.as_ref()),
        (&tp.predicate, triple.predicate.as_ref()),
        (&tp.object, triple.object.as_ref()),
    ]
}

fn compatible(a: &NaiveBinding, b: &NaiveBinding) -> bool {
    a.iter()
        .all(|(k, v)| b.get(k).map_or(true, |other| other == v))
}

enum V {
    Term(Term),
    Num(f64),
    Bool(bool),
}

impl V {
    fn into_term(self) -> Option<Term> {
        match self {
            V::Term(t) => Some(t),
            V::Num(n) => Some(Term::double_literal(n)),
            V::Bool(b) => Some(Term::boolean_literal(b)),
        }
    }
}

fn numeric(term: &Term) -> Option<f64> {
    match term {
        Term::Literal {
            lexical, datatype, ..
        } if [
            vocab::XSD_INTEGER,
            vocab::XSD_DECIMAL,
            vocab::XSD_DOUBLE,
            vocab::XSD_FLOAT,
        ]
        .contains(&datatype.as_str()) =>
        {
            lexical.parse().ok()
        }
        _ => None,
    }
}

fn eval(e: &Expression, b: &NaiveBinding) -> Result<V, ()> {
    match e {
        Expression::Var(name) => b.get(name).cloned().map(V::Term).ok_or(()),
        Expression::Const(t) => Ok(V::Term(t.clone())),
        Expression::Call { .. } => Err(()),
        Expression::Cmp { op, lhs, rhs } => {
            let l = eval(lhs, b)?;
            let r = eval(rhs, b)?;
            cmp(*op, &l, &r).map(V::Bool)
        }
        Expression::Bool { op, operands } => match op {
            BoolOp::Not => match eval(&operands[0], b)? {
                V::Bool(v) => Ok(V::Bool(!v)),
                V::Term(t) => boolean(&t).map(|v| V::Bool(!v)).ok_or(()),
                _ => Err(()),
            },
            BoolOp::And => {
                let mut error = false;
                for o in operands {
                    match eval(o, b).and_then(|v| as_bool(v).ok_or(())) {
                        Ok(false) => return Ok(V::Bool(false)),
                        Ok(true) => {}
                        Err(()) => error = true,
                    }
                }
                if error {
                    Err(())
                } else {
                    Ok(V::Bool(true))
                }
            }
            BoolOp::Or => {
                let mut error = false;
                for o in operands {
                    match eval(o, b).and_then(|v| as_bool(v).ok_or(())) {
                        Ok(true) => return Ok(V::Bool(true)),
                        Ok(false) => {}
                        Err(()) => error = true,
                    }
                }
                if error {
                    Err(())
                } else {
                    Ok(V::Bool(false))
                }
            }
        },
        Expression::Arith { op, lhs, rhs } => {
            let l = as_num(eval(lhs, b)?).ok_or(())?;
            let r = as_num(eval(rhs, b)?).ok_or(())?;
            let v = match op {
                ArithOp::Add => l + r,
                ArithOp::Sub => l - r,
                ArithOp::Mul => l * r,
                ArithOp::Div => {
                    if r == 0.0 {
                        return Err(());
                    }
                    l / r
                }
            };
            Ok(V::Num(v))
        }
    }
}

fn as_num(v: V) -> Option<f64> {
    match v {
        V::Num(n) => Some(n),
        V::Term(t) => numeric(&t),
        V::Bool(_) => None,
    }
}

fn as_bool(v: V) -> Option<bool> {
    match v {
        V::Bool(b) => Some(b),
        V::Term(t) => boolean(&t),
        V::Num(_) => None,
    }
}

fn boolean(t: &Term) -> Option<bool> {
    match t {
        Term::Literal {
            lexical, datatype, ..
        } if datatype == vocab::XSD_BOOLEAN => match lexical.as_str() {
            "true" | "1" => Some(true),
            "false" | "0" => Some(false),
            _ => None,
        },
        _ => None,
    }
}

fn cmp(op: CmpOp, l: &V, r: &V) -> Result<bool, ()> {
    use std::cmp::Ordering;
    let num_pair = |l: &V, r: &V| -> Option<(f64, f64)> {
        let a = match l {
            V::Num(n) => Some(*n),
            V::Term(t) => numeric(t),
            V::Bool(_) => None,
        }?;
        let b = match r {
            V::Num(n) => Some(*n),
            V::Term(t) => numeric(t),
            V::Bool(_) => None,
        }?;
        Some((a, b))
    };
    let ordering: Option<Ordering> = if let Some((a, b)) = num_pair(l, r) {
        a.partial_cmp(&b)
    } else if let (V::Term(a), V::Term(b)) = (l, r) {
        let datetime = |t: &Term| match t {
            Term::Literal {
                lexical, datatype, ..
            } if datatype == vocab::XSD_DATETIME => {
                chrono::DateTime::parse_from_rfc3339(lexical).ok()
            }
            _ => None,
        };
        match (datetime(a), datetime(b)) {
            (Some(da), Some(db)) => Some(da.cmp(&db)),
            _ => match (a, b) {
                (
                    Term::Literal {
                        lexical: la,
                        datatype: dta,
                        language: None,
                    },
                    Term::Literal {
                        lexical: lb,
                        datatype: dtb,
                        language: None,
                    },
                ) if dta == vocab::XSD_STRING && dtb == vocab::XSD_STRING => {
                    Some(la.cmp(lb))
                }
                _ => None,
            },
        }
    } else if let (V::Bool(a), V::Bool(b)) = (l, r) {
        Some(a.cmp(b))
    } else {
        None
    };
    match op {
        CmpOp::Eq | CmpOp::Ne => {
            let equal = match ordering {
                Some(ord) => ord == Ordering::Equal,
                None => match (l, r) {
                    (V::Term(a), V::Term(b)) => a == b,
                    _ => return Err(()),
                },
            };
            Ok(if matches!(op, CmpOp::Eq) { equal } else { !equal })
        }
        CmpOp::Lt => Ok(ordering.ok_or(())? == Ordering::Less),
        CmpOp::Gt => Ok(ordering.ok_or(())? == Ordering::Greater),
        CmpOp::Le => Ok(ordering.ok_or(())? != Ordering::Greater),
        CmpOp::Ge => Ok(ordering.ok_or(())? != Ordering::Less),
    }
}

// ---------------------------------------------------------------------
// Random fixture generation.

pub fn random_graph(rng: &mut impl Rng, max_triples: usize) -> Graph {
    let mut graph = Graph::new();
    let n = rng.gen_range(1..=max_triples);
    for _ in 0..n {
        let s = pool_iri(rng, "s", 6);
        let p = pool_iri(rng, "p", 4);
        let o = if rng.gen_bool(0.3) {
            Term::typed_literal(rng.gen_range(0..10).to_string(), vocab::XSD_INTEGER)
        } else {
            pool_iri(rng, "o", 5)
        };
        graph.insert(Triple::new(s, p, o).unwrap());
    }
    graph
}

fn pool_iri(rng: &mut impl Rng, prefix: &str, size: usize) -> Term {
    Term::iri(format!(
        "http://example.org/{prefix}{}",
        rng.gen_range(0..size)
    ))
}

/// Concrete pattern terms are drawn from a random existing triple so that
/// generated queries actually touch the data.
fn random_pattern_term(rng: &mut impl Rng, graph: &Graph, position: usize) -> PatternTerm {
    if rng.gen_bool(0.6) {
        return PatternTerm::Variable(format!("v{}", rng.gen_range(0..4)));
    }
    let triples: Vec<&Triple> = graph.triples().collect();
    if !triples.is_empty() && rng.gen_bool(0.8) {
        let t = triples[rng.gen_range(0..triples.len())];
        let term = match position {
            0 => t.subject.as_ref(),
            1 => t.predicate.as_ref(),
            _ => t.object.as_ref(),
        };
        return PatternTerm::Term(term.clone());
    }
    match position {
        0 => PatternTerm::Term(pool_iri(rng, "s", 6)),
        1 => PatternTerm::Term(pool_iri(rng, "p", 4)),
        _ => {
            if rng.gen_bool(0.3) {
                PatternTerm::Term(Term::typed_literal(
                    rng.gen_range(0..10).to_string(),
                    vocab::XSD_INTEGER,
                ))
            } else {
                PatternTerm::Term(pool_iri(rng, "o", 5))
            }
        }
    }
}

fn random_filter(rng: &mut impl Rng) -> Expression {
    let var = |rng: &mut dyn rand::RngCore| {
        Expression::Var(format!("v{}", rng.gen_range(0..4)))
    };
    let atom = |rng: &mut dyn rand::RngCore| {
        let op = match rng.gen_range(0..4) {
            0 => CmpOp::Eq,
            1 => CmpOp::Ne,
            2 => CmpOp::Lt,
            _ => CmpOp::Ge,
        };
        let rhs = if rng.gen_bool(0.5) {
            Expression::Const(Term::typed_literal(
                rng.gen_range(0..10).to_string(),
                vocab::XSD_INTEGER,
            ))
        } else if rng.gen_bool(0.5) {
            Expression::Const(Term::iri(format!(
                "http://example.org/o{}",
                rng.gen_range(0..5)
            )))
        } else {
            var(rng)
        };
        Expression::Cmp {
            op,
            lhs: Box::new(var(rng)),
            rhs: Box::new(rhs),
        }
    };
    match rng.gen_range(0..4) {
        0 => atom(rng),
        1 => Expression::Bool {
            op: BoolOp::Not,
            operands: vec![atom(rng)],
        },
        2 => Expression::Bool {
            op: BoolOp::And,
            operands: vec![atom(rng), atom(rng)],
        },
        _ => Expression::Bool {
            op: BoolOp::Or,
            operands: vec![atom(rng), atom(rng)],
        },
    }
}

fn random_bind(rng: &mut impl Rng) -> (Expression, String) {
    let target = format!("v{}", rng.gen_range(0..4));
    let op = match rng.gen_range(0..3) {
        0 => ArithOp::Add,
        1 => ArithOp::Sub,
        _ => ArithOp::Mul,
    };
    let expr = Expression::Arith {
        op,
        lhs: Box::new(Expression::Var(format!("v{}", rng.gen_range(0..4)))),
        rhs: Box::new(Expression::Const(Term::typed_literal(
            rng.gen_range(1..5).to_string(),
            vocab::XSD_INTEGER,
        ))),
    };
    (expr, target)
}

/// A random query: up to `max_patterns` triple patterns derived from a
/// witness set of actual triples (shared terms consistently replaced by
/// variables, so joins hit the data), with up to two FILTER/BIND nodes
/// folded in source order, plus a random projection.
pub fn random_query(rng: &mut impl Rng, graph: &Graph, max_patterns: usize) -> SelectQuery {
    let triples: Vec<&Triple> = graph.triples().collect();
    let n_patterns = rng.gen_range(1..=max_patterns);

    // Pick witness triples, preferring ones that share a term with the
    // witnesses already chosen.
    let mut witness: Vec<&Triple> = Vec::new();
    for _ in 0..n_patterns {
        let connected: Vec<&&Triple> = triples
            .iter()
            .filter(|t| {
                witness.iter().any(|w| {
                    [&w.subject, &w.predicate, &w.object].iter().any(|wt| {
                        [&t.subject, &t.predicate, &t.object].contains(&&**wt)
                    })
                })
            })
            .collect();
        let pick = if !connected.is_empty() && rng.gen_bool(0.7) {
            *connected[rng.gen_range(0..connected.len())]
        } else {
            triples[rng.gen_range(0..triples.len())]
        };
        witness.push(pick);
    }

    // Map up to four witness terms onto variables.
    let mut var_terms: Vec<Term> = Vec::new();
    for t in &witness {
        for term in [&t.subject, &t.object, &t.predicate] {
            if var_terms.len() < 4
                && !var_terms.contains(term.as_ref())
                && rng.gen_bool(0.7)
            {
                var_terms.push(term.as_ref().clone());
            }
        }
    }
    let to_pattern = |rng: &mut dyn rand::RngCore, term: &Term| -> PatternTerm {
        if let Some(idx) = var_terms.iter().position(|v| v == term) {
            if rng.gen_bool(0.85) {
                return PatternTerm::Variable(format!("v{idx}"));
            }
        }
        PatternTerm::Term(term.clone())
    };

    let mut body: Option<BgpNode> = None;
    let mut modifiers = 0;
    for (i, t) in witness.iter().enumerate() {
        let tp = if rng.gen_bool(0.85) {
            TriplePattern::new(
                to_pattern(rng, &t.subject),
                to_pattern(rng, &t.predicate),
                to_pattern(rng, &t.object),
            )
        } else {
            // Occasionally a fully random pattern, to exercise misses.
            TriplePattern::new(
                random_pattern_term(rng, graph, 0),
                random_pattern_term(rng, graph, 1),
                random_pattern_term(rng, graph, 2),
            )
        };
        let pattern = if rng.gen_bool(0.15) {
            BgpNode::Block(Box::new(BgpNode::Pattern(tp)))
        } else {
            BgpNode::Pattern(tp)
        };
        body = Some(match body {
            None => pattern,
            Some(prev) => BgpNode::Conj(Box::new(prev), Box::new(pattern)),
        });
        if modifiers < 2 && i + 1 < witness.len() {
            continue;
        }
        while modifiers < 2 && rng.gen_bool(0.4) {
            modifiers += 1;
            let inner = body.take().unwrap();
            body = Some(if rng.gen_bool(0.5) {
                BgpNode::Filter {
                    body: Box::new(inner),
                    condition: random_filter(rng),
                }
            } else {
                let (expression, variable) = random_bind(rng);
                BgpNode::Bind {
                    body: Box::new(inner),
                    expression,
                    variable,
                }
            });
        }
    }
    let mut projection: Vec<Projection> = Vec::new();
    for _ in 0..4 {
        if rng.gen_bool(0.5) {
            projection.push(Projection::Var(format!("v{}", rng.gen_range(0..4))));
        }
    }
    projection.dedup();
    if projection.is_empty() {
        projection.push(Projection::Var("v0".into()));
    }
    SelectQuery {
        projection,
        body: body.unwrap(),
        prefixes: Default::default(),
    }
}
