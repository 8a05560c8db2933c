//! Text format for ontologies.
//!
//! One axiom per line; `#` starts a comment that runs to the end of the line.
//!
//! ```text
//! line  := [ID ':'] axiom
//! axiom := '(sub' C C ')' | '(rsub' NAME NAME ')'
//! C     := NAME | 'Top' | 'Bot'
//!        | '(not' C ')' | '(and' C C+ ')' | '(or' C C+ ')'
//!        | '(some' NAME C ')' | '(all' NAME C ')'
//! NAME  := [A-Za-z_][A-Za-z0-9_.-]*
//! ```
//!
//! Axioms without an explicit label get `ax<k>` where `k` is the 1-based
//! position of the axiom in the file. A label that collides with another
//! label (or with an auto-assigned id) is a [`Error::DuplicateId`].
//!
//! The assertional forms `(inst C a)` and `(rel r a b)` are recognized and
//! rejected with [`Error::UnsupportedConstruct`]: this tool works on axiom
//! sets only, and silently dropping assertions would skew every set-level
//! answer computed downstream.

use crate::error::{Error, Result};
use crate::model::{Axiom, AxiomKind, ConceptExpr, Gci, Ontology, RoleInclusion};

/// Parse a full ontology document.
pub fn parse_ontology(input: &str) -> Result<Ontology> {
    let mut axioms = Vec::new();
    let mut position = 0usize; // 1-based axiom counter for auto ids
    for (lineno, raw) in input.lines().enumerate() {
        let line_number = lineno + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        position += 1;
        let mut toks = Tokenizer::new(line, line_number);
        let axiom = parse_line(&mut toks, position)?;
        axioms.push(axiom);
    }
    Ontology::new(axioms)
}

/// Parse a goal inclusion, e.g. `(sub A (some r B))`.
/// Only `sub` forms are valid goals.
pub fn parse_goal(input: &str) -> Result<Gci> {
    let line = strip_comment(input);
    let mut toks = Tokenizer::new(line, 1);
    toks.expect_open("goal")?;
    let (head, hl, hc) = toks.expect_name("axiom head")?;
    if head != "sub" {
        return Err(Error::Parse {
            line: hl,
            column: hc,
            message: format!("goal must be a `(sub ...)` inclusion, found `{head}`"),
        });
    }
    let lhs = parse_concept(&mut toks)?;
    let rhs = parse_concept(&mut toks)?;
    toks.expect_close()?;
    toks.expect_end()?;
    Ok(Gci::new(lhs, rhs))
}

/// Parse a single concept expression.
pub fn parse_concept_str(input: &str) -> Result<ConceptExpr> {
    let mut toks = Tokenizer::new(strip_comment(input), 1);
    let c = parse_concept(&mut toks)?;
    toks.expect_end()?;
    Ok(c)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_line(toks: &mut Tokenizer, position: usize) -> Result<Axiom> {
    // Optional leading `ID :`.
    let id = if let Some((Token::Name(n), _, _)) = toks.peek() {
        let n = n.clone();
        if toks.peek2_is_colon() {
            toks.next(); // name
            toks.next(); // colon
            n
        } else {
            format!("ax{position}")
        }
    } else {
        format!("ax{position}")
    };

    toks.expect_open("axiom")?;
    let (head, hl, hc) = toks.expect_name("axiom head")?;
    let kind = match head.as_str() {
        "sub" => {
            let lhs = parse_concept(toks)?;
            let rhs = parse_concept(toks)?;
            AxiomKind::Gci(Gci::new(lhs, rhs))
        }
        "rsub" => {
            let (sub, _, _) = toks.expect_name("role name")?;
            let (sup, _, _) = toks.expect_name("role name")?;
            AxiomKind::RoleInclusion(RoleInclusion { sub, sup })
        }
        "inst" | "rel" => {
            return Err(Error::UnsupportedConstruct {
                line: hl,
                column: hc,
                message: format!("assertion form `{head}` is not supported; only `sub` and `rsub` axioms are"),
            });
        }
        other => {
            return Err(Error::Parse {
                line: hl,
                column: hc,
                message: format!("expected `sub` or `rsub`, found `{other}`"),
            });
        }
    };
    toks.expect_close()?;
    toks.expect_end()?;
    Ok(Axiom {
        id: crate::model::AxiomId::new(id),
        kind,
    })
}

fn parse_concept(toks: &mut Tokenizer) -> Result<ConceptExpr> {
    match toks.next() {
        Some((t @ Token::Name(_), l, c)) => {
            let n = match t {
                Token::Name(n) if !n.starts_with('\u{0}') => n,
                t => {
                    return Err(Error::Parse {
                        line: l,
                        column: c,
                        message: format!("expected a concept, found {}", describe(&t)),
                    })
                }
            };
            Ok(match n.as_str() {
                "Top" => ConceptExpr::Top,
                "Bot" => ConceptExpr::Bot,
                _ => ConceptExpr::Name(n),
            })
        }
        Some((Token::Open, _, _)) => {
            let (head, hl, hc) = toks.expect_name("concept constructor")?;
            match head.as_str() {
                "not" => {
                    let c = parse_concept(toks)?;
                    toks.expect_close()?;
                    Ok(ConceptExpr::not(c))
                }
                "and" | "or" => {
                    let mut cs = vec![parse_concept(toks)?, parse_concept(toks)?];
                    while !matches!(toks.peek(), Some((Token::Close, _, _)) | None) {
                        cs.push(parse_concept(toks)?);
                    }
                    toks.expect_close()?;
                    Ok(if head == "and" {
                        ConceptExpr::And(cs)
                    } else {
                        ConceptExpr::Or(cs)
                    })
                }
                "some" | "all" => {
                    let (role, _, _) = toks.expect_name("role name")?;
                    let c = parse_concept(toks)?;
                    toks.expect_close()?;
                    Ok(if head == "some" {
                        ConceptExpr::some(role, c)
                    } else {
                        ConceptExpr::all(role, c)
                    })
                }
                other => Err(Error::Parse {
                    line: hl,
                    column: hc,
                    message: format!("expected `not`, `and`, `or`, `some` or `all`, found `{other}`"),
                }),
            }
        }
        Some((Token::Close, l, c)) => Err(Error::Parse {
            line: l,
            column: c,
            message: "expected a concept, found `)`".into(),
        }),
        Some((Token::Colon, l, c)) => Err(Error::Parse {
            line: l,
            column: c,
            message: "expected a concept, found `:`".into(),
        }),
        None => Err(Error::Parse {
            line: toks.line,
            column: toks.col_at_end(),
            message: "expected a concept, found end of line".into(),
        }),
    }
}

// ===== tokenizer =====

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Colon,
    Name(String),
}

struct Tokenizer {
    toks: Vec<(Token, usize, usize)>, // token, line, 1-based column
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Tokenizer {
    fn new(line_text: &str, line: usize) -> Self {
        let mut toks = Vec::new();
        let bytes = line_text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let col = i + 1;
            match bytes[i] {
                b' ' | b'\t' | b'\r' => i += 1,
                b'(' => {
                    toks.push((Token::Open, line, col));
                    i += 1;
                }
                b')' => {
                    toks.push((Token::Close, line, col));
                    i += 1;
                }
                b':' => {
                    toks.push((Token::Colon, line, col));
                    i += 1;
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = i;
                    while i < bytes.len()
                        && (bytes[i].is_ascii_alphanumeric()
                            || matches!(bytes[i], b'_' | b'.' | b'-'))
                    {
                        i += 1;
                    }
                    toks.push((
                        Token::Name(line_text[start..i].to_string()),
                        line,
                        col,
                    ));
                }
                other => {
                    // Surface the bad byte as a one-token error via a marker:
                    // we cannot return Result from new(), so push a token that
                    // parse steps will reject with a precise location.
                    toks.push((Token::Name(format!("\u{0}{}", other as char)), line, col));
                    i += 1;
                }
            }
        }
        let end_col = line_text.len() + 1;
        Tokenizer {
            toks,
            pos: 0,
            line,
            end_col,
        }
    }

    fn peek(&self) -> Option<&(Token, usize, usize)> {
        self.toks.get(self.pos)
    }

    fn peek2_is_colon(&self) -> bool {
        matches!(self.toks.get(self.pos + 1), Some((Token::Colon, _, _)))
    }

    fn next(&mut self) -> Option<(Token, usize, usize)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn col_at_end(&self) -> usize {
        self.end_col
    }

    fn expect_open(&mut self, what: &str) -> Result<()> {
        match self.next() {
            Some((Token::Open, _, _)) => Ok(()),
            Some((t, l, c)) => Err(Error::Parse {
                line: l,
                column: c,
                message: format!("expected `(` starting {what}, found {}", describe(&t)),
            }),
            None => Err(Error::Parse {
                line: self.line,
                column: self.end_col,
                message: format!("expected `(` starting {what}, found end of line"),
            }),
        }
    }

    fn expect_close(&mut self) -> Result<()> {
        match self.next() {
            Some((Token::Close, _, _)) => Ok(()),
            Some((t, l, c)) => Err(Error::Parse {
                line: l,
                column: c,
                message: format!("expected `)`, found {}", describe(&t)),
            }),
            None => Err(Error::Parse {
                line: self.line,
                column: self.end_col,
                message: "expected `)`, found end of line".into(),
            }),
        }
    }

    fn expect_name(&mut self, what: &str) -> Result<(String, usize, usize)> {
        match self.next() {
            Some((Token::Name(n), l, c)) if !n.starts_with('\u{0}') => Ok((n, l, c)),
            Some((t, l, c)) => Err(Error::Parse {
                line: l,
                column: c,
                message: format!("expected {what}, found {}", describe(&t)),
            }),
            None => Err(Error::Parse {
                line: self.line,
                column: self.end_col,
                message: format!("expected {what}, found end of line"),
            }),
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some((t, l, c)) => Err(Error::Parse {
                line: *l,
                column: *c,
                message: format!("unexpected trailing {}", describe(t)),
            }),
        }
    }
}

fn describe(t: &Token) -> String {
    match t {
        Token::Open => "`(`".into(),
        Token::Close => "`)`".into(),
        Token::Colon => "`:`".into(),
        Token::Name(n) if n.starts_with('\u{0}') => {
            format!("invalid character `{}`", &n[1..])
        }
        Token::Name(n) => format!("`{n}`"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::serialize_ontology;

    #[test]
    fn parses_labeled_and_auto_ids() {
        let o = parse_ontology("j1: (sub A B)\n(sub B C)\n").unwrap();
        let ids: Vec<&str> = o.ids().map(|i| i.as_str()).collect();
        assert_eq!(ids, vec!["j1", "ax2"]);
    }

    #[test]
    fn auto_ids_follow_textual_position() {
        // Comments and blank lines do not advance the axiom counter.
        let text = "# header\n\n(sub A B)\n  # another comment\n(sub B C)";
        let o = parse_ontology(text).unwrap();
        let ids: Vec<&str> = o.ids().map(|i| i.as_str()).collect();
        assert_eq!(ids, vec!["ax1", "ax2"]);
    }

    #[test]
    fn round_trip_is_identity() {
        let text = "ax1: (sub A B)\nax2: (sub (and A B) (some r (not C)))\nax3: (rsub r s)\nax4: (sub Top (or A B Bot))";
        let o = parse_ontology(text).unwrap();
        let printed = serialize_ontology(&o);
        assert_eq!(printed, text);
        let o2 = parse_ontology(&printed).unwrap();
        assert_eq!(o, o2);
    }

    #[test]
    fn empty_input_gives_empty_ontology() {
        let o = parse_ontology("").unwrap();
        assert!(o.is_empty());
        let o = parse_ontology("# nothing here\n\n").unwrap();
        assert!(o.is_empty());
    }

    #[test]
    fn reports_line_and_column() {
        let err = parse_ontology("(sub A B)\n(sub A (foo B))").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 2);
                assert_eq!(column, 9);
            }
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn rejects_assertions_as_unsupported() {
        let err = parse_ontology("(inst A alice)").unwrap_err();
        assert!(matches!(err, Error::UnsupportedConstruct { line: 1, .. }));
        let err = parse_ontology("(rel r alice bob)").unwrap_err();
        assert!(matches!(err, Error::UnsupportedConstruct { .. }));
    }

    #[test]
    fn rejects_duplicate_labels() {
        let err = parse_ontology("x: (sub A B)\nx: (sub B C)").unwrap_err();
        assert!(matches!(err, Error::DuplicateId { .. }));
    }

    #[test]
    fn rejects_label_colliding_with_auto_id() {
        // The second (unlabeled) axiom gets `ax2`, which is taken.
        let err = parse_ontology("ax2: (sub A B)\n(sub B C)").unwrap_err();
        assert!(matches!(err, Error::DuplicateId { id } if id == "ax2"));
    }

    #[test]
    fn rejects_trailing_tokens() {
        let err = parse_ontology("(sub A B) (sub B C)").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn rejects_arity_violations() {
        assert!(parse_ontology("(sub A)").is_err());
        assert!(parse_ontology("(and A B)").is_err()); // not an axiom
        assert!(parse_ontology("(sub (and A) B)").is_err()); // and needs 2+
        assert!(parse_ontology("(rsub r)").is_err());
    }

    #[test]
    fn top_bot_are_keywords_in_concept_position() {
        let o = parse_ontology("(sub Top Bot)").unwrap();
        let g = o.iter().next().unwrap().as_gci().unwrap();
        assert_eq!(g.lhs, ConceptExpr::Top);
        assert_eq!(g.rhs, ConceptExpr::Bot);
    }

    #[test]
    fn goal_parsing() {
        let g = parse_goal("(sub A (some r B))").unwrap();
        assert_eq!(g.to_string(), "(sub A (some r B))");
        assert!(parse_goal("(rsub r s)").is_err());
    }

    #[test]
    fn nary_and_or() {
        let c = parse_concept_str("(and A B C D)").unwrap();
        assert_eq!(c.to_string(), "(and A B C D)");
        let c = parse_concept_str("(or A B C)").unwrap();
        assert_eq!(c.to_string(), "(or A B C)");
    }

    #[test]
    fn invalid_character_is_reported() {
        let err = parse_ontology("(sub A% B)").unwrap_err();
        match err {
            Error::Parse { column, message, .. } => {
                assert_eq!(column, 7);
                assert!(message.contains('%'), "{message}");
            }
            other => panic!("unexpected error: {other:?}"),
        }
    }
}
