//! Parser and serializer for the supported RDF text format: N-Triples
//! statements plus `@prefix` declarations, the `a` keyword, `;`/`,`
//! continuation lists and typed literals.

use std::collections::HashMap;

use super::{Graph, RdfError, Term, Triple};
use crate::vocab;

/// Parses a document into a graph. Blank node labels are scoped to the
/// document. Reports the line of the offending token on failure.
pub fn parse_rdf_document(text: &str) -> Result<Graph, RdfError> {
    let tokens = tokenize(text)?;
    let mut graph = Graph::new();
    let mut prefixes: HashMap<String, String> = vocab::CANONICAL_PREFIXES
        .iter()
        .map(|(p, ns)| (p.to_string(), ns.to_string()))
        .collect();
    let mut pos = 0;

    while pos < tokens.len() {
        if let TokenKind::PrefixDecl = tokens[pos].kind {
            let line = tokens[pos].line;
            let name = match tokens.get(pos + 1) {
                Some(Token {
                    kind: TokenKind::PrefixedName(p, l),
                    ..
                }) if l.is_empty() => p.clone(),
                _ => return err(line, "expected `prefix:` after @prefix"),
            };
            let iri = match tokens.get(pos + 2) {
                Some(Token {
                    kind: TokenKind::IriRef(iri),
                    ..
                }) => iri.clone(),
                _ => return err(line, "expected <iri> in @prefix declaration"),
            };
            match tokens.get(pos + 3) {
                Some(Token {
                    kind: TokenKind::Dot,
                    ..
                }) => {}
                _ => return err(line, "expected `.` terminating @prefix declaration"),
            }
            prefixes.insert(name, iri);
            pos += 4;
            continue;
        }
        pos = parse_statement(&tokens, pos, &prefixes, &mut graph)?;
    }
    Ok(graph)
}

fn parse_statement(
    tokens: &[Token],
    mut pos: usize,
    prefixes: &HashMap<String, String>,
    graph: &mut Graph,
) -> Result<usize, RdfError> {
    let line = tokens[pos].line;
    let (subject, next) = parse_term(tokens, pos, prefixes, Position::Subject)?;
    pos = next;
    loop {
        let (predicate, next) = parse_term(tokens, pos, prefixes, Position::Predicate)?;
        pos = next;
        loop {
            let (object, next) = parse_term(tokens, pos, prefixes, Position::Object)?;
            pos = next;
            let triple = Triple::new(subject.clone(), predicate.clone(), object)
                .map_err(|e| RdfError::Parse {
                    line,
                    message: e.to_string(),
                })?;
            graph.insert(triple);
            match tokens.get(pos).map(|t| &t.kind) {
                Some(TokenKind::Comma) => {
                    pos += 1;
                    continue;
                }
                _ => break,
            }
        }
        match tokens.get(pos).map(|t| &t.kind) {
            Some(TokenKind::Semicolon) => {
                pos += 1;
                // Tolerate `;` directly followed by the statement terminator.
                if matches!(tokens.get(pos).map(|t| &t.kind), Some(TokenKind::Dot)) {
                    return Ok(pos + 1);
                }
                continue;
            }
            Some(TokenKind::Dot) => return Ok(pos + 1),
            Some(_) => {
                return err(
                    tokens[pos].line,
                    "expected `.`, `;` or `,` after object",
                )
            }
            None => return err(line, "unterminated statement; expected `.`"),
        }
    }
}

enum Position {
    Subject,
    Predicate,
    Object,
}

fn parse_term(
    tokens: &[Token],
    pos: usize,
    prefixes: &HashMap<String, String>,
    position: Position,
) -> Result<(Term, usize), RdfError> {
    let Some(token) = tokens.get(pos) else {
        return err(0, "unexpected end of document");
    };
    let line = token.line;
    match &token.kind {
        TokenKind::IriRef(iri) => Ok((Term::iri(iri.clone()), pos + 1)),
        TokenKind::PrefixedName(prefix, local) => {
            let ns = prefixes.get(prefix).ok_or_else(|| RdfError::Parse {
                line,
                message: format!("unknown prefix `{prefix}:`"),
            })?;
            Ok((Term::iri(format!("{ns}{local}")), pos + 1))
        }
        TokenKind::BlankNode(label) => Ok((Term::BlankNode(label.clone()), pos + 1)),
        TokenKind::A => match position {
            Position::Predicate => Ok((Term::iri(vocab::RDF_TYPE), pos + 1)),
            _ => err(line, "`a` keyword is only valid as a predicate"),
        },
        TokenKind::String(lexical) => {
            if matches!(position, Position::Subject | Position::Predicate) {
                return err(line, "literal is not allowed here");
            }
            match tokens.get(pos + 1).map(|t| &t.kind) {
                Some(TokenKind::DoubleCaret) => {
                    let (dt, next) =
                        parse_term(tokens, pos + 2, prefixes, Position::Predicate)?;
                    let Term::Iri(dt_iri) = dt else {
                        return err(line, "datatype must be an IRI");
                    };
                    if dt_iri == vocab::RDF_LANG_STRING {
                        return err(line, "rdf:langString requires a language tag");
                    }
                    Ok((Term::typed_literal(lexical.clone(), dt_iri), next))
                }
                Some(TokenKind::LangTag(lang)) => {
                    Ok((Term::lang_literal(lexical.clone(), lang.clone()), pos + 2))
                }
                _ => Ok((Term::string_literal(lexical.clone()), pos + 1)),
            }
        }
        other => err(line, &format!("unexpected token {other:?}")),
    }
}

fn err<T>(line: usize, message: &str) -> Result<T, RdfError> {
    Err(RdfError::Parse {
        line,
        message: message.to_string(),
    })
}

/// Serializes a graph as plain N-Triples (full IRIs, one statement per line,
/// sorted for deterministic output).
pub fn write_ntriples(graph: &Graph) -> String {
    let mut lines: Vec<String> = graph
        .triples()
        .map(|t| {
            format!(
                "{} {} {} .",
                t.subject.to_ntriples(),
                t.predicate.to_ntriples(),
                t.object.to_ntriples()
            )
        })
        .collect();
    lines.sort();
    let mut out = lines.join("\n");
    if !out.is_empty() {
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    IriRef(String),
    PrefixedName(String, String),
    BlankNode(String),
    String(String),
    LangTag(String),
    DoubleCaret,
    PrefixDecl,
    A,
    Dot,
    Semicolon,
    Comma,
}

#[derive(Debug)]
struct Token {
    kind: TokenKind,
    line: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, RdfError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line = 1;
    while i < chars.len() {
        let c = chars[i];
        match c {
            '\n' => {
                line += 1;
                i += 1;
            }
            _ if c.is_whitespace() => i += 1,
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '.' => {
                tokens.push(Token {
                    kind: TokenKind::Dot,
                    line,
                });
                i += 1;
            }
            ';' => {
                tokens.push(Token {
                    kind: TokenKind::Semicolon,
                    line,
                });
                i += 1;
            }
            ',' => {
                tokens.push(Token {
                    kind: TokenKind::Comma,
                    line,
                });
                i += 1;
            }
            '<' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j] != '>' {
                    if chars[j] == '\n' {
                        return err(line, "unterminated IRI");
                    }
                    j += 1;
                }
                if j == chars.len() {
                    return err(line, "unterminated IRI");
                }
                tokens.push(Token {
                    kind: TokenKind::IriRef(chars[start..j].iter().collect()),
                    line,
                });
                i = j + 1;
            }
            '"' => {
                let mut j = i + 1;
                let mut value = String::new();
                loop {
                    if j >= chars.len() {
                        return err(line, "unterminated string literal");
                    }
                    match chars[j] {
                        '"' => break,
                        '\\' => {
                            j += 1;
                            let esc = chars.get(j).copied().unwrap_or('\0');
                            value.push(match esc {
                                'n' => '\n',
                                'r' => '\r',
                                't' => '\t',
                                '"' => '"',
                                '\\' => '\\',
                                _ => return err(line, &format!("bad escape \\{esc}")),
                            });
                            j += 1;
                        }
                        '\n' => return err(line, "unterminated string literal"),
                        other => {
                            value.push(other);
                            j += 1;
                        }
                    }
                }
                tokens.push(Token {
                    kind: TokenKind::String(value),
                    line,
                });
                i = j + 1;
            }
            '^' => {
                if chars.get(i + 1) == Some(&'^') {
                    tokens.push(Token {
                        kind: TokenKind::DoubleCaret,
                        line,
                    });
                    i += 2;
                } else {
                    return err(line, "expected `^^`");
                }
            }
            '@' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '-') {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                if word == "prefix" {
                    tokens.push(Token {
                        kind: TokenKind::PrefixDecl,
                        line,
                    });
                } else if !word.is_empty() {
                    tokens.push(Token {
                        kind: TokenKind::LangTag(word),
                        line,
                    });
                } else {
                    return err(line, "expected language tag or @prefix");
                }
                i = j;
            }
            '_' if chars.get(i + 1) == Some(&':') => {
                let start = i + 2;
                let mut j = start;
                while j < chars.len() && is_name_char(chars[j]) {
                    j += 1;
                }
                if j == start {
                    return err(line, "empty blank node label");
                }
                tokens.push(Token {
                    kind: TokenKind::BlankNode(chars[start..j].iter().collect()),
                    line,
                });
                i = j;
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
                    tokens.push(Token {
                        kind: TokenKind::PrefixedName(
                            word,
                            chars[local_start..k].iter().collect(),
                        ),
                        line,
                    });
                    i = k;
                } else if word == "a" {
                    tokens.push(Token {
                        kind: TokenKind::A,
                        line,
                    });
                    i = j;
                } else {
                    return err(line, &format!("unexpected word `{word}`"));
                }
            }
            ':' => {
                // Prefixed name with empty prefix, e.g. `:local`.
                let local_start = i + 1;
                let mut k = local_start;
                while k < chars.len() && is_name_char(chars[k]) {
                    k += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::PrefixedName(
                        String::new(),
                        chars[local_start..k].iter().collect(),
                    ),
                    line,
                });
                i = k;
            }
            other => return err(line, &format!("unexpected character `{other}`")),
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{PatternTerm, TriplePattern};

    #[test]
    fn single_line_document() {
        let g = parse_rdf_document(
            "<http://example.org/a> <http://example.org/p> <http://example.org/b> .\n",
        )
        .unwrap();
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn sugar_is_equivalent_to_expanded_form() {
        let sugared = parse_rdf_document(
            "@prefix e: <http://example.org/> .\n\
             e:r1 a e:Road ; e:name \"main\" , \"hwy\" .\n",
        )
        .unwrap();
        let expanded = parse_rdf_document(
            "<http://example.org/r1> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://example.org/Road> .\n\
             <http://example.org/r1> <http://example.org/name> \"main\" .\n\
             <http://example.org/r1> <http://example.org/name> \"hwy\" .\n",
        )
        .unwrap();
        assert_eq!(sugared.len(), expanded.len());
        for t in expanded.triples() {
            assert!(sugared.contains(t), "missing {t:?}");
        }
    }

    #[test]
    fn typed_literals_keep_datatype_verbatim() {
        let g = parse_rdf_document(
            "@prefix e: <http://example.org/> .\n\
             e:r1 e:depth \"1.5\"^^<http://www.w3.org/2001/XMLSchema#double> .\n",
        )
        .unwrap();
        let hits = g.match_pattern(&TriplePattern::new(
            PatternTerm::var("s"),
            PatternTerm::var("p"),
            PatternTerm::var("o"),
        ));
        assert_eq!(hits.len(), 1);
        let o = hits[0].get("o").unwrap();
        assert_eq!(
            o.as_ref(),
            &Term::typed_literal("1.5", "http://www.w3.org/2001/XMLSchema#double")
        );
    }

    #[test]
    fn parse_error_reports_line() {
        let doc = "<http://example.org/a> <http://example.org/p> <http://example.org/b> .\n\
                   <http://example.org/a> bogus\n";
        match parse_rdf_document(doc) {
            Err(RdfError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn hundred_triples_round_trip() {
        let mut doc = String::from("@prefix e: <http://example.org/> .\n");
        for n in 0..100 {
            doc.push_str(&format!("e:r{n} a e:Road .\n"));
        }
        let g = parse_rdf_document(&doc).unwrap();
        assert_eq!(g.len(), 100);
        // Line-count oracle: one statement per generated line.
        assert_eq!(doc.lines().count() - 1, g.len());

        let serialized = write_ntriples(&g);
        let reparsed = parse_rdf_document(&serialized).unwrap();
        assert_eq!(reparsed.len(), g.len());
        for t in g.triples() {
            assert!(reparsed.contains(t));
        }
    }

    #[test]
    fn escapes_round_trip() {
        let g = parse_rdf_document(
            "<http://example.org/a> <http://example.org/p> \"line\\nwith \\\"quotes\\\"\" .\n",
        )
        .unwrap();
        let text = write_ntriples(&g);
        let reparsed = parse_rdf_document(&text).unwrap();
        assert_eq!(reparsed.len(), 1);
        for t in g.triples() {
            assert!(reparsed.contains(t));
        }
    }
}
