//! Recursive-descent parser for the SELECT subset. The canonical prefixes
//! are predeclared; PREFIX declarations may add to or override them. Both
//! `&&`/`||` and the `AND`/`OR` keywords are accepted in filter conditions.

use std::collections::HashMap;

use super::{
    ArithOp, BgpNode, BoolOp, CmpOp, Expression, Projection, QueryError, SelectQuery,
};
use crate::rdf::{PatternTerm, Term, TriplePattern};
use crate::vocab;

pub fn parse_query(text: &str) -> Result<SelectQuery, QueryError> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        prefixes: vocab::CANONICAL_PREFIXES
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect(),
    };
    p.parse_query()
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Var(String),
    IriRef(String),
    PName(String, String),
    Str(String),
    LangTag(String),
    Num(String),
    Word(String),
    A,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Dot,
    Semicolon,
    Comma,
    DoubleCaret,
    Bang,
    AndAnd,
    OrOr,
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, QueryError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;
    macro_rules! push {
        ($t:expr, $len:expr) => {{
            tokens.push(Token {
                tok: $t,
                line,
                column: col,
            });
            i += $len;
            col += $len;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            _ if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '{' => push!(Tok::LBrace, 1),
            '}' => push!(Tok::RBrace, 1),
            '(' => push!(Tok::LParen, 1),
            ')' => push!(Tok::RParen, 1),
            '.' => push!(Tok::Dot, 1),
            ';' => push!(Tok::Semicolon, 1),
            ',' => push!(Tok::Comma, 1),
            '+' => push!(Tok::Plus, 1),
            '-' => push!(Tok::Minus, 1),
            '*' => push!(Tok::Star, 1),
            '/' => push!(Tok::Slash, 1),
            '=' => push!(Tok::Eq, 1),
            '!' => {
                if chars.get(i + 1) == Some(&'=') {
                    push!(Tok::Ne, 2);
                } else {
                    push!(Tok::Bang, 1);
                }
            }
            '<' => {
                // Either an IRI reference or a comparison operator.
                let rest = &chars[i + 1..];
                let is_iri = rest
                    .iter()
                    .take_while(|c| **c != '\n')
                    .any(|c| *c == '>')
                    && rest
                        .first()
                        .map_or(false, |c| !c.is_whitespace() && *c != '=');
                if is_iri {
                    let mut j = i + 1;
                    while chars[j] != '>' {
                        j += 1;
                    }
                    let iri: String = chars[i + 1..j].iter().collect();
                    let len = j - i + 1;
                    push!(Tok::IriRef(iri), len);
                } else if chars.get(i + 1) == Some(&'=') {
                    push!(Tok::Le, 2);
                } else {
                    push!(Tok::Lt, 1);
                }
            }
            '>' => {
                if chars.get(i + 1) == Some(&'=') {
                    push!(Tok::Ge, 2);
                } else {
                    push!(Tok::Gt, 1);
                }
            }
            '&' => {
                if chars.get(i + 1) == Some(&'&') {
                    push!(Tok::AndAnd, 2);
                } else {
                    return Err(syntax(line, col, "expected `&&`"));
                }
            }
            '|' => {
                if chars.get(i + 1) == Some(&'|') {
                    push!(Tok::OrOr, 2);
                } else {
                    return Err(syntax(line, col, "expected `||`"));
                }
            }
            '^' => {
                if chars.get(i + 1) == Some(&'^') {
                    push!(Tok::DoubleCaret, 2);
                } else {
                    return Err(syntax(line, col, "expected `^^`"));
                }
            }
            '"' => {
                let mut j = i + 1;
                let mut value = String::new();
                loop {
                    match chars.get(j) {
                        None | Some('\n') => {
                            return Err(syntax(line, col, "unterminated string literal"))
                        }
                        Some('"') => break,
                        Some('\\') => {
                            let esc = chars.get(j + 1).copied().unwrap_or('\0');
                            value.push(match esc {
                                'n' => '\n',
                                'r' => '\r',
                                't' => '\t',
                                '"' => '"',
                                '\\' => '\\',
                                other => {
                                    return Err(syntax(
                                        line,
                                        col,
                                        &format!("bad escape \\{other}"),
                                    ))
                                }
                            });
                            j += 2;
                        }
                        Some(other) => {
                            value.push(*other);
                            j += 1;
                        }
                    }
                }
                let len = j - i + 1;
                push!(Tok::Str(value), len);
            }
            '@' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '-') {
                    j += 1;
                }
                let tag: String = chars[start..j].iter().collect();
                let len = j - i;
                push!(Tok::LangTag(tag), len);
            }
            '?' | '$' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && is_name_char(chars[j]) {
                    j += 1;
                }
                if j == start {
                    return Err(syntax(line, col, "empty variable name"));
                }
                let name: String = chars[start..j].iter().collect();
                let len = j - i;
                push!(Tok::Var(name), len);
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                let mut j = i;
                let mut seen_dot = false;
                while j < chars.len() {
                    let d = chars[j];
                    if d.is_ascii_digit() {
                        j += 1;
                    } else if d == '.' && !seen_dot && chars.get(j + 1).map_or(false, |n| n.is_ascii_digit()) {
                        seen_dot = true;
                        j += 1;
                    } else if (d == 'e' || d == 'E')
                        && chars
                            .get(j + 1)
                            .map_or(false, |n| n.is_ascii_digit() || *n == '-' || *n == '+')
                    {
                        j += 2;
                    } else {
                        break;
                    }
                }
                let lexeme: String = chars[start..j].iter().collect();
                let len = j - i;
                push!(Tok::Num(lexeme), len);
            }
            _ if is_name_start(c) => {
                let start = i;
                let mut j = i;
                while j < chars.len() && is_name_char(chars[j]) {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                if chars.get(j) == Some(&':') {
                    let local_start = j + 1;
                    let mut k = local_start;
                    while k < chars.len() && is_name_char(chars[k]) {
                        k += 1;
                    }
                    let local: String = chars[local_start..k].iter().collect();
                    let len = k - i;
                    push!(Tok::PName(word, local), len);
                } else if word == "a" {
                    let len = j - i;
                    push!(Tok::A, len);
                } else {
                    let len = j - i;
                    push!(Tok::Word(word), len);
                }
            }
            ':' => {
                let local_start = i + 1;
                let mut k = local_start;
                while k < chars.len() && is_name_char(chars[k]) {
                    k += 1;
                }
                let local: String = chars[local_start..k].iter().collect();
                let len = k - i;
                push!(Tok::PName(String::new(), local), len);
            }
            other => {
                return Err(syntax(line, col, &format!("unexpected character `{other}`")))
            }
        }
    }
    Ok(tokens)
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

fn syntax(line: usize, column: usize, message: &str) -> QueryError {
    QueryError::Syntax {
        line,
        column,
        message: message.to_string(),
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    prefixes: HashMap<String, String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn location(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos.min(self.tokens.len().saturating_sub(1)))
            .map(|t| (t.line, t.column))
            .unwrap_or((0, 0))
    }

    fn error(&self, message: &str) -> QueryError {
        let (line, column) = self.location();
        syntax(line, column, message)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), QueryError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected {what}")))
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        if let Some(Tok::Word(w)) = self.peek() {
            if w.eq_ignore_ascii_case(word) {
                self.pos += 1;
                return true;
            }
        }
        false
    }

    fn expect_keyword(&mut self, word: &str) -> Result<(), QueryError> {
        if self.keyword(word) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{word}`")))
        }
    }

    fn expand(&self, prefix: &str, local: &str) -> Result<String, QueryError> {
        match self.prefixes.get(prefix) {
            Some(ns) => Ok(format!("{ns}{local}")),
            None => {
                let (line, column) = self.location();
                Err(QueryError::UnknownPrefix {
                    prefix: prefix.to_string(),
                    line,
                    column,
                })
            }
        }
    }

    fn parse_query(&mut self) -> Result<SelectQuery, QueryError> {
        while self.keyword("prefix") {
            let Some(Tok::PName(prefix, local)) = self.bump() else {
                return Err(self.error("expected `prefix:` after PREFIX"));
            };
            if !local.is_empty() {
                return Err(self.error("prefix declaration must end with `:`"));
            }
            let Some(Tok::IriRef(iri)) = self.bump() else {
                return Err(self.error("expected <iri> in PREFIX declaration"));
            };
            self.prefixes.insert(prefix, iri);
            // Tolerate an optional trailing dot.
            if self.peek() == Some(&Tok::Dot) {
                self.pos += 1;
            }
        }
        self.expect_keyword("select")?;
        let mut projection = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Var(_)) => {
                    let Some(Tok::Var(name)) = self.bump() else { unreachable!() };
                    projection.push(Projection::Var(name));
                }
                Some(Tok::LParen) => {
                    self.pos += 1;
                    self.expect_keyword("max")?;
                    self.expect(Tok::LParen, "`(` after MAX")?;
                    let Some(Tok::Var(over)) = self.bump() else {
                        return Err(self.error("expected variable inside MAX()"));
                    };
                    self.expect(Tok::RParen, "`)` after MAX variable")?;
                    self.expect_keyword("as")?;
                    let Some(Tok::Var(rename)) = self.bump() else {
                        return Err(self.error("expected variable after AS"));
                    };
                    self.expect(Tok::RParen, "`)` closing the aggregate")?;
                    projection.push(Projection::Max { over, rename });
                }
                _ => break,
            }
        }
        if projection.is_empty() {
            return Err(self.error("SELECT requires at least one projection"));
        }
        if projection
            .iter()
            .filter(|p| matches!(p, Projection::Max { .. }))
            .count()
            > 1
        {
            return Err(self.error("at most one MAX aggregate is supported"));
        }
        self.expect_keyword("where")?;
        let body = self.parse_group()?;
        if self.pos != self.tokens.len() {
            return Err(self.error("trailing input after query"));
        }
        Ok(SelectQuery {
            projection,
            body,
            prefixes: self.prefixes.clone(),
        })
    }

    fn parse_group(&mut self) -> Result<BgpNode, QueryError> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut acc: Option<BgpNode> = None;
        loop {
            match self.peek() {
                None => return Err(self.error("unterminated group; expected `}`")),
                Some(Tok::RBrace) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::Dot) => {
                    self.pos += 1;
                }
                Some(Tok::LBrace) => {
                    let inner = self.parse_group()?;
                    acc = Some(conj(acc, BgpNode::Block(Box::new(inner))));
                }
                Some(Tok::Word(w)) if w.eq_ignore_ascii_case("filter") => {
                    self.pos += 1;
                    self.expect(Tok::LParen, "`(` after FILTER")?;
                    let condition = self.parse_expression()?;
                    self.expect(Tok::RParen, "`)` closing FILTER")?;
                    let body = acc.take().ok_or_else(|| {
                        self.error("FILTER must follow at least one pattern")
                    })?;
                    acc = Some(BgpNode::Filter {
                        body: Box::new(body),
                        condition,
                    });
                }
                Some(Tok::Word(w)) if w.eq_ignore_ascii_case("bind") => {
                    self.pos += 1;
                    self.expect(Tok::LParen, "`(` after BIND")?;
                    let expression = self.parse_expression()?;
                    self.expect_keyword("as")?;
                    let Some(Tok::Var(variable)) = self.bump() else {
                        return Err(self.error("expected variable after AS"));
                    };
                    self.expect(Tok::RParen, "`)` closing BIND")?;
                    let body = acc.take().ok_or_else(|| {
                        self.error("BIND must follow at least one pattern")
                    })?;
                    acc = Some(BgpNode::Bind {
                        body: Box::new(body),
                        expression,
                        variable,
                    });
                }
                Some(_) => {
                    let statements = self.parse_triple_statement()?;
                    for tp in statements {
                        acc = Some(conj(acc, BgpNode::Pattern(tp)));
                    }
                }
            }
        }
        acc.ok_or_else(|| self.error("empty group"))
    }

    /// One subject with its `;`/`,` lists, expanded to triple patterns.
    fn parse_triple_statement(&mut self) -> Result<Vec<TriplePattern>, QueryError> {
        let subject = self.parse_pattern_term(TermPosition::Subject)?;
        let mut out = Vec::new();
        loop {
            let predicate = self.parse_pattern_term(TermPosition::Predicate)?;
            loop {
                let object = self.parse_pattern_term(TermPosition::Object)?;
                out.push(TriplePattern::new(
                    subject.clone(),
                    predicate.clone(),
                    object,
                ));
                if self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            if self.peek() == Some(&Tok::Semicolon) {
                self.pos += 1;
                // A dangling `;` before `.` or `}` ends the statement.
                match self.peek() {
                    Some(Tok::Dot) | Some(Tok::RBrace) | None => break,
                    _ => continue,
                }
            }
            break;
        }
        Ok(out)
    }

    fn parse_pattern_term(
        &mut self,
        position: TermPosition,
    ) -> Result<PatternTerm, QueryError> {
        match self.bump() {
            Some(Tok::Var(name)) => Ok(PatternTerm::Variable(name)),
            Some(Tok::IriRef(iri)) => Ok(PatternTerm::Term(Term::iri(iri))),
            Some(Tok::PName(prefix, local)) => {
                self.pos -= 1;
                let expanded = self.expand(&prefix, &local)?;
                self.pos += 1;
                Ok(PatternTerm::Term(Term::iri(expanded)))
            }
            Some(Tok::A) if matches!(position, TermPosition::Predicate) => {
                Ok(PatternTerm::Term(Term::iri(vocab::RDF_TYPE)))
            }
            Some(Tok::Str(value)) if matches!(position, TermPosition::Object) => {
                self.pos -= 1;
                let term = self.parse_literal_tail(value)?;
                Ok(PatternTerm::Term(term))
            }
            Some(Tok::Num(lexeme)) if matches!(position, TermPosition::Object) => Ok(
                PatternTerm::Term(Term::typed_literal(lexeme, vocab::XSD_DECIMAL)),
            ),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.error(&format!("expected a term in {position:?} position")))
            }
        }
    }

    /// Consumes the string token at the cursor plus its `^^dt` or `@lang`
    /// suffix when present.
    fn parse_literal_tail(&mut self, value: String) -> Result<Term, QueryError> {
        self.pos += 1; // past the Str token
        match self.peek() {
            Some(Tok::DoubleCaret) => {
                self.pos += 1;
                match self.bump() {
                    Some(Tok::IriRef(iri)) => Ok(Term::typed_literal(value, iri)),
                    Some(Tok::PName(prefix, local)) => {
                        self.pos -= 1;
                        let iri = self.expand(&prefix, &local)?;
                        self.pos += 1;
                        Ok(Term::typed_literal(value, iri))
                    }
                    _ => Err(self.error("expected datatype IRI after `^^`")),
                }
            }
            Some(Tok::LangTag(tag)) => {
                let tag = tag.clone();
                self.pos += 1;
                Ok(Term::lang_literal(value, tag))
            }
            _ => Ok(Term::string_literal(value)),
        }
    }

    fn parse_expression(&mut self) -> Result<Expression, QueryError> {
        self.parse_or()
    }

    fn parse_or(&mut self) -> Result<Expression, QueryError> {
        let mut operands = vec![self.parse_and()?];
        loop {
            let is_or = match self.peek() {
                Some(Tok::OrOr) => true,
                Some(Tok::Word(w)) if w.eq_ignore_ascii_case("or") => true,
                _ => false,
            };
            if !is_or {
                break;
            }
            self.pos += 1;
            operands.push(self.parse_and()?);
        }
        Ok(if operands.len() == 1 {
            operands.pop().unwrap()
        } else {
            Expression::Bool {
                op: BoolOp::Or,
                operands,
            }
        })
    }

    fn parse_and(&mut self) -> Result<Expression, QueryError> {
        let mut operands = vec![self.parse_comparison()?];
        loop {
            let is_and = match self.peek() {
                Some(Tok::AndAnd) => true,
                Some(Tok::Word(w)) if w.eq_ignore_ascii_case("and") => true,
                _ => false,
            };
            if !is_and {
                break;
            }
            self.pos += 1;
            operands.push(self.parse_comparison()?);
        }
        Ok(if operands.len() == 1 {
            operands.pop().unwrap()
        } else {
            Expression::Bool {
                op: BoolOp::And,
                operands,
            }
        })
    }

    fn parse_comparison(&mut self) -> Result<Expression, QueryError> {
        let lhs = self.parse_additive()?;
        let op = match self.peek() {
            Some(Tok::Eq) => CmpOp::Eq,
            Some(Tok::Ne) => CmpOp::Ne,
            Some(Tok::Lt) => CmpOp::Lt,
            Some(Tok::Gt) => CmpOp::Gt,
            Some(Tok::Le) => CmpOp::Le,
            Some(Tok::Ge) => CmpOp::Ge,
            _ => return Ok(lhs),
        };
        self.pos += 1;
        let rhs = self.parse_additive()?;
        Ok(Expression::Cmp {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        })
    }

    fn parse_additive(&mut self) -> Result<Expression, QueryError> {
        let mut lhs = self.parse_multiplicative()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => ArithOp::Add,
                Some(Tok::Minus) => ArithOp::Sub,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.parse_multiplicative()?;
            lhs = Expression::Arith {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
        Ok(lhs)
    }

    fn parse_multiplicative(&mut self) -> Result<Expression, QueryError> {
        let mut lhs = self.parse_unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => ArithOp::Mul,
                Some(Tok::Slash) => ArithOp::Div,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.parse_unary()?;
            lhs = Expression::Arith {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Expression, QueryError> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.pos += 1;
                let inner = self.parse_unary()?;
                Ok(Expression::Bool {
                    op: BoolOp::Not,
                    operands: vec![inner],
                })
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                match self.peek() {
                    Some(Tok::Num(lexeme)) => {
                        let lexeme = format!("-{lexeme}");
                        self.pos += 1;
                        Ok(Expression::Const(Term::typed_literal(
                            lexeme,
                            vocab::XSD_DECIMAL,
                        )))
                    }
                    _ => {
                        let inner = self.parse_unary()?;
                        Ok(Expression::Arith {
                            op: ArithOp::Sub,
                            lhs: Box::new(Expression::Const(Term::typed_literal(
                                "0",
                                vocab::XSD_DECIMAL,
                            ))),
                            rhs: Box::new(inner),
                        })
                    }
                }
            }
            _ => self.parse_primary(),
        }
    }

    fn parse_primary(&mut self) -> Result<Expression, QueryError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.parse_expression()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Var(name)) => {
                self.pos += 1;
                Ok(Expression::Var(name))
            }
            Some(Tok::Num(lexeme)) => {
                self.pos += 1;
                Ok(Expression::Const(Term::typed_literal(
                    lexeme,
                    vocab::XSD_DECIMAL,
                )))
            }
            Some(Tok::Str(value)) => {
                let term = self.parse_literal_tail(value)?;
                Ok(Expression::Const(term))
            }
            Some(Tok::IriRef(iri)) => {
                self.pos += 1;
                self.finish_iri_expression(iri)
            }
            Some(Tok::PName(prefix, local)) => {
                let iri = self.expand(&prefix, &local)?;
                self.pos += 1;
                self.finish_iri_expression(iri)
            }
            _ => Err(self.error("expected an expression")),
        }
    }

    /// An IRI in expression position is a function call when followed by
    /// `(`, otherwise an IRI constant.
    fn finish_iri_expression(&mut self, iri: String) -> Result<Expression, QueryError> {
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let mut args = Vec::new();
            if self.peek() != Some(&Tok::RParen) {
                loop {
                    args.push(self.parse_expression()?);
                    if self.peek() == Some(&Tok::Comma) {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::RParen, "`)` closing the argument list")?;
            Ok(Expression::Call { iri, args })
        } else {
            Ok(Expression::Const(Term::iri(iri)))
        }
    }
}

fn conj(acc: Option<BgpNode>, next: BgpNode) -> BgpNode {
    match acc {
        None => next,
        Some(prev) => BgpNode::Conj(Box::new(prev), Box::new(next)),
    }
}

#[derive(Debug, Clone, Copy)]
enum TermPosition {
    Subject,
    Predicate,
    Object,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_query() {
        let q = parse_query("SELECT ?x WHERE { ?x a ex:Road }").unwrap();
        assert_eq!(q.projection, vec![Projection::Var("x".into())]);
        let patterns = q.body.patterns();
        assert_eq!(patterns.len(), 1);
        assert_eq!(
            patterns[0].predicate,
            PatternTerm::Term(Term::iri(vocab::RDF_TYPE))
        );
        assert_eq!(
            patterns[0].object,
            PatternTerm::Term(Term::iri("http://example.org/Road"))
        );
    }

    #[test]
    fn unknown_prefix_is_reported() {
        match parse_query("SELECT ?x WHERE { ?x a nope:Road }") {
            Err(QueryError::UnknownPrefix { prefix, .. }) => assert_eq!(prefix, "nope"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn prefix_declarations_extend_the_table() {
        let q = parse_query(
            "PREFIX my: <http://my.example/> SELECT ?x WHERE { ?x a my:Thing }",
        )
        .unwrap();
        assert_eq!(
            q.body.patterns()[0].object,
            PatternTerm::Term(Term::iri("http://my.example/Thing"))
        );
    }

    #[test]
    fn semicolon_and_comma_lists_expand() {
        let q = parse_query(
            "SELECT ?x WHERE { ?x a ex:Road ; ex:name \"a\" , \"b\" . }",
        )
        .unwrap();
        assert_eq!(q.body.patterns().len(), 3);
    }

    #[test]
    fn filter_and_bind_attach_to_preceding_group() {
        let q = parse_query(
            "SELECT ?x WHERE { ?x a ex:Road . BIND(geo2:rasterSmaller(?c, 10) AS ?r) FILTER(geo2:intersects(?x, ?r)) }",
        )
        .unwrap();
        assert_eq!(q.body.patterns().len(), 1);
        assert_eq!(q.body.binds().len(), 1);
        assert_eq!(q.body.filters().len(), 1);
        match &q.body {
            BgpNode::Filter { body, .. } => match body.as_ref() {
                BgpNode::Bind { variable, .. } => assert_eq!(variable, "r"),
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn aggregate_projection() {
        let q = parse_query(
            "SELECT ?b (MAX(?v) AS ?m) WHERE { ?b ex:value ?v }",
        )
        .unwrap();
        assert_eq!(q.aggregate(), Some(("v", "m")));
        assert_eq!(q.group_vars(), vec!["b"]);
        assert_eq!(q.output_vars(), vec!["b", "m"]);
    }

    #[test]
    fn and_keyword_and_symbolic_operators() {
        let q = parse_query(
            "SELECT ?x WHERE { ?x ex:open ?o ; ex:close ?c . FILTER(?o > 1 AND ?c < 5) }",
        )
        .unwrap();
        let filters = q.body.filters();
        assert_eq!(filters.len(), 1);
        match filters[0] {
            Expression::Bool { op: BoolOp::And, operands } => assert_eq!(operands.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
        let q2 = parse_query(
            "SELECT ?x WHERE { ?x ex:open ?o ; ex:close ?c . FILTER(?o > 1 && ?c < 5) }",
        )
        .unwrap();
        assert_eq!(q2.body.filters(), q.body.filters());
    }

    #[test]
    fn typed_literal_constant() {
        let q = parse_query(
            "SELECT ?x WHERE { ?x ex:t ?t . FILTER(?t > \"2019-05-23T10:20:13+05:30\"^^xsd:dateTime) }",
        )
        .unwrap();
        match q.body.filters()[0] {
            Expression::Cmp { rhs, .. } => match rhs.as_ref() {
                Expression::Const(Term::Literal { datatype, .. }) => {
                    assert_eq!(datatype, vocab::XSD_DATETIME)
                }
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn arithmetic_precedence() {
        let q = parse_query(
            "SELECT ?x WHERE { ?x ex:v ?v . BIND(?v + 2 * 3 AS ?y) }",
        )
        .unwrap();
        match q.body.binds()[0].0 {
            Expression::Arith { op: ArithOp::Add, rhs, .. } => match rhs.as_ref() {
                Expression::Arith { op: ArithOp::Mul, .. } => {}
                other => panic!("mul should bind tighter, got {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_error_location() {
        match parse_query("SELECT ?x WHERE { ?x a }") {
            Err(QueryError::Syntax { line, column, .. }) => {
                assert_eq!(line, 1);
                assert!(column >= 23, "column {column}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
