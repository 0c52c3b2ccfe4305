//! The query AST for the supported SELECT subset: prefix declarations,
//! projection with an optional MAX aggregate, triple patterns with `;`/`,`
//! lists and the `a` keyword, blocks, FILTER, BIND, comparison/boolean/
//! arithmetic operators and function calls by IRI.

mod parser;
mod printer;

pub use parser::parse_query;
pub use printer::print_query;

use std::collections::HashMap;

use thiserror::Error;

use crate::rdf::{Term, TriplePattern};

#[derive(Debug, Error, PartialEq)]
pub enum QueryError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown prefix `{prefix}:` at line {line}, column {column}")]
    UnknownPrefix {
        prefix: String,
        line: usize,
        column: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoolOp {
    And,
    Or,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Var(String),
    Const(Term),
    Call {
        iri: String,
        args: Vec<Expression>,
    },
    Cmp {
        op: CmpOp,
        lhs: Box<Expression>,
        rhs: Box<Expression>,
    },
    Bool {
        op: BoolOp,
        operands: Vec<Expression>,
    },
    Arith {
        op: ArithOp,
        lhs: Box<Expression>,
        rhs: Box<Expression>,
    },
}

/// A filter condition is an expression required to evaluate to a boolean.
pub type FilterCondition = Expression;

#[derive(Debug, Clone, PartialEq)]
pub enum BgpNode {
    Pattern(TriplePattern),
    Block(Box<BgpNode>),
    Conj(Box<BgpNode>, Box<BgpNode>),
    Filter {
        body: Box<BgpNode>,
        condition: FilterCondition,
    },
    Bind {
        body: Box<BgpNode>,
        expression: Expression,
        variable: String,
    },
}

impl BgpNode {
    /// Triple patterns in source order.
    pub fn patterns(&self) -> Vec<&TriplePattern> {
        let mut out = Vec::new();
        self.collect_patterns(&mut out);
        out
    }

    fn collect_patterns<'a>(&'a self, out: &mut Vec<&'a TriplePattern>) {
        match self {
            BgpNode::Pattern(tp) => out.push(tp),
            BgpNode::Block(inner) => inner.collect_patterns(out),
            BgpNode::Conj(l, r) => {
                l.collect_patterns(out);
                r.collect_patterns(out);
            }
            BgpNode::Filter { body, .. } | BgpNode::Bind { body, .. } => {
                body.collect_patterns(out)
            }
        }
    }

    pub fn filters(&self) -> Vec<&FilterCondition> {
        let mut out = Vec::new();
        self.collect_filters(&mut out);
        out
    }

    fn collect_filters<'a>(&'a self, out: &mut Vec<&'a FilterCondition>) {
        match self {
            BgpNode::Pattern(_) => {}
            BgpNode::Block(inner) => inner.collect_filters(out),
            BgpNode::Conj(l, r) => {
                l.collect_filters(out);
                r.collect_filters(out);
            }
            BgpNode::Filter { body, condition } => {
                body.collect_filters(out);
                out.push(condition);
            }
            BgpNode::Bind { body, .. } => body.collect_filters(out),
        }
    }

    pub fn binds(&self) -> Vec<(&Expression, &str)> {
        let mut out = Vec::new();
        self.collect_binds(&mut out);
        out
    }

    fn collect_binds<'a>(&'a self, out: &mut Vec<(&'a Expression, &'a str)>) {
        match self {
            BgpNode::Pattern(_) => {}
            BgpNode::Block(inner) => inner.collect_binds(out),
            BgpNode::Conj(l, r) => {
                l.collect_binds(out);
                r.collect_binds(out);
            }
            BgpNode::Filter { body, .. } => body.collect_binds(out),
            BgpNode::Bind {
                body,
                expression,
                variable,
            } => {
                body.collect_binds(out);
                out.push((expression, variable));
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Projection {
    Var(String),
    /// `(MAX(?over) AS ?rename)`
    Max { over: String, rename: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectQuery {
    pub projection: Vec<Projection>,
    pub body: BgpNode,
    pub prefixes: HashMap<String, String>,
}

impl SelectQuery {
    /// The single MAX aggregate, when present.
    pub fn aggregate(&self) -> Option<(&str, &str)> {
        self.projection.iter().find_map(|p| match p {
            Projection::Max { over, rename } => Some((over.as_str(), rename.as_str())),
            Projection::Var(_) => None,
        })
    }

    /// Plain projected variables; with an aggregate present these act as the
    /// group keys.
    pub fn group_vars(&self) -> Vec<&str> {
        self.projection
            .iter()
            .filter_map(|p| match p {
                Projection::Var(v) => Some(v.as_str()),
                Projection::Max { .. } => None,
            })
            .collect()
    }

    /// Output column names in projection order.
    pub fn output_vars(&self) -> Vec<&str> {
        self.projection
            .iter()
            .map(|p| match p {
                Projection::Var(v) => v.as_str(),
                Projection::Max { rename, .. } => rename.as_str(),
            })
            .collect()
    }
}
