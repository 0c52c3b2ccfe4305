//! Canonical query printer. Printing and reparsing a query yields the same
//! AST (IRIs are printed in full, so the prefix table is not needed).

use super::{ArithOp, BgpNode, BoolOp, CmpOp, Expression, Projection, SelectQuery};
use crate::rdf::{PatternTerm, Term};
use crate::vocab;

pub fn print_query(q: &SelectQuery) -> String {
    let mut out = String::from("SELECT");
    for p in &q.projection {
        match p {
            Projection::Var(v) => out.push_str(&format!(" ?{v}")),
            Projection::Max { over, rename } => {
                out.push_str(&format!(" (MAX(?{over}) AS ?{rename})"))
            }
        }
    }
    out.push_str(" WHERE { ");
    print_node(&q.body, &mut out);
    out.push_str(" }");
    out
}

fn print_node(node: &BgpNode, out: &mut String) {
    match node {
        BgpNode::Pattern(tp) => {
            print_pattern_term(&tp.subject, out);
            out.push(' ');
            print_pattern_term(&tp.predicate, out);
            out.push(' ');
            print_pattern_term(&tp.object, out);
            out.push_str(" .");
        }
        BgpNode::Block(inner) => {
            out.push_str("{ ");
            print_node(inner, out);
            out.push_str(" }");
        }
        BgpNode::Conj(l, r) => {
            print_node(l, out);
            out.push(' ');
            print_node(r, out);
        }
        BgpNode::Filter { body, condition } => {
            print_node(body, out);
            out.push_str(" FILTER(");
            print_expression(condition, out);
            out.push(')');
        }
        BgpNode::Bind {
            body,
            expression,
            variable,
        } => {
            print_node(body, out);
            out.push_str(" BIND(");
            print_expression(expression, out);
            out.push_str(&format!(" AS ?{variable})"));
        }
    }
}

fn print_pattern_term(pt: &PatternTerm, out: &mut String) {
    match pt {
        PatternTerm::Variable(name) => out.push_str(&format!("?{name}")),
        PatternTerm::Term(term) => print_term(term, out),
    }
}

fn print_term(term: &Term, out: &mut String) {
    match term {
        Term::Literal {
            lexical, datatype, ..
        } if datatype == vocab::XSD_DECIMAL && lexical.parse::<f64>().is_ok() => {
            out.push_str(lexical);
        }
        other => out.push_str(&other.to_ntriples()),
    }
}

pub(crate) fn print_expression(e: &Expression, out: &mut String) {
    match e {
        Expression::Var(name) => out.push_str(&format!("?{name}")),
        Expression::Const(term) => print_term(term, out),
        Expression::Call { iri, args } => {
            out.push_str(&format!("<{iri}>("));
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                print_expression(a, out);
            }
            out.push(')');
        }
        Expression::Cmp { op, lhs, rhs } => {
            out.push('(');
            print_expression(lhs, out);
            out.push_str(match op {
                CmpOp::Eq => " = ",
                CmpOp::Ne => " != ",
                CmpOp::Lt => " < ",
                CmpOp::Gt => " > ",
                CmpOp::Le => " <= ",
                CmpOp::Ge => " >= ",
            });
            print_expression(rhs, out);
            out.push(')');
        }
        Expression::Bool { op, operands } => match op {
            BoolOp::Not => {
                out.push('!');
                out.push('(');
                print_expression(&operands[0], out);
                out.push(')');
            }
            BoolOp::And | BoolOp::Or => {
                out.push('(');
                for (i, operand) in operands.iter().enumerate() {
                    if i > 0 {
                        out.push_str(if matches!(op, BoolOp::And) {
                            " && "
                        } else {
                            " || "
                        });
                    }
                    print_expression(operand, out);
                }
                out.push(')');
            }
        },
        Expression::Arith { op, lhs, rhs } => {
            out.push('(');
            print_expression(lhs, out);
            out.push_str(match op {
                ArithOp::Add => " + ",
                ArithOp::Sub => " - ",
                ArithOp::Mul => " * ",
                ArithOp::Div => " / ",
            });
            print_expression(rhs, out);
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_query;
    use super::*;

    #[test]
    fn parse_print_parse_is_a_fixpoint() {
        let queries = [
            "SELECT ?x WHERE { ?x a ex:Road }",
            "SELECT ?b (MAX(?v) AS ?m) WHERE { ?b ex:value ?v . FILTER(?v > 3 && ?v < 10) }",
            "SELECT ?x WHERE { ?x ex:p ?y . BIND(geo:area(?y) / 2 AS ?half) FILTER(!geo:intersects(?x, ?y)) }",
            "SELECT ?x WHERE { { ?x a ex:Road } ?x ex:name \"main\" . }",
        ];
        for text in queries {
            let once = parse_query(text).unwrap();
            let printed = print_query(&once);
            let twice = parse_query(&printed).unwrap_or_else(|e| {
                panic!("printed form failed to parse: {printed}\n{e}")
            });
            assert_eq!(once.projection, twice.projection, "{printed}");
            assert_eq!(once.body, twice.body, "{printed}");
        }
    }
}
