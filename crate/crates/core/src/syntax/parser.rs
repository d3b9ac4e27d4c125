use super::lexer::{lex, Tok};
use super::{ParseError, ParseErrorKind, SourceSpan};
use crate::ast::Formula;

/// Parses a formula in the ASCII grammar.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let end = text.chars().count();
    let mut p = Parser { toks, pos: 0, end };
    let f = p.iff()?;
    match p.peek() {
        None => Ok(f),
        Some((tok, span)) => Err(ParseError {
            kind: ParseErrorKind::UnexpectedToken { found: tok.text(), expected: "an operator or end of input" },
            span,
        }),
    }
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    end: usize,
}

const OPERAND: &str = "a formula";

impl Parser {
    fn peek(&self) -> Option<(Tok, SourceSpan)> {
        self.toks.get(self.pos).cloned()
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.toks.get(self.pos).map(|(t, _)| t) == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implies()?;
        if self.eat(&Tok::Iff) {
            return Ok(Formula::iff(lhs, self.iff()?));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            return Ok(Formula::implies(lhs, self.implies()?));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.until()?;
        while self.eat(&Tok::And) {
            lhs = Formula::and(lhs, self.until()?);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if self.eat(&Tok::Until) {
            return Ok(Formula::until(lhs, self.until()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let Some((tok, span)) = self.peek() else {
            return Err(ParseError {
                kind: ParseErrorKind::UnexpectedEnd { expected: OPERAND },
                span: SourceSpan::new(self.end, self.end),
            });
        };
        let build: fn(Formula) -> Formula = match tok {
            Tok::Not => Formula::not,
            Tok::Next => Formula::next,
            Tok::Always => Formula::always,
            Tok::Eventually => Formula::eventually,
            Tok::Rise => Formula::rise,
            Tok::Fall => Formula::fall,
            Tok::AnyEdge => Formula::any_edge,
            _ => return self.primary(),
        };
        self.pos += 1;
        if self.starts_operand() {
            Ok(build(self.unary()?))
        } else if tok != Tok::Not {
            // `G`, `up` and friends with nothing to apply to read as a
            // misplaced atom name.
            Err(ParseError { kind: ParseErrorKind::ReservedWord(tok.text()), span })
        } else {
            Ok(build(self.unary()?))
        }
    }

    fn starts_operand(&self) -> bool {
        matches!(
            self.toks.get(self.pos).map(|(t, _)| t),
            Some(
                Tok::Atom(_)
                    | Tok::True
                    | Tok::False
                    | Tok::Not
                    | Tok::Next
                    | Tok::Always
                    | Tok::Eventually
                    | Tok::Rise
                    | Tok::Fall
                    | Tok::AnyEdge
                    | Tok::LParen
            )
        )
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let (tok, span) = self.peek().expect("caller checked for end of input");
        self.pos += 1;
        match tok {
            Tok::Atom(name) => Ok(Formula::Atom(name)),
            Tok::True => Ok(Formula::True),
            Tok::False => Ok(Formula::False),
            Tok::LParen => {
                let inner = self.iff()?;
                match self.peek() {
                    Some((Tok::RParen, _)) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    Some((tok, span)) => Err(ParseError {
                        kind: ParseErrorKind::UnexpectedToken { found: tok.text(), expected: "`)`" },
                        span,
                    }),
                    None => Err(ParseError {
                        kind: ParseErrorKind::UnexpectedEnd { expected: "`)`" },
                        span: SourceSpan::new(self.end, self.end),
                    }),
                }
            }
            Tok::Until => Err(ParseError { kind: ParseErrorKind::ReservedWord(tok.text()), span }),
            other => Err(ParseError {
                kind: ParseErrorKind::UnexpectedToken { found: other.text(), expected: OPERAND },
                span,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn drop_on_table() {
        let f = parse("G(down hold -> pos_above_tbl)").unwrap();
        assert_eq!(f, Formula::always(Formula::implies(Formula::fall(a("hold")), a("pos_above_tbl"))));
    }

    #[test]
    fn push_and_release() {
        let f = parse("!(down hold) U down button").unwrap();
        assert_eq!(
            f,
            Formula::until(Formula::not(Formula::fall(a("hold"))), Formula::fall(a("button")))
        );
    }

    #[test]
    fn boolean_precedence() {
        let f = parse("a & b | b <-> a -> b").unwrap();
        let expected = Formula::iff(
            Formula::or(Formula::and(a("a"), a("b")), a("b")),
            Formula::implies(a("a"), a("b")),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn associativity() {
        assert_eq!(parse("a U b U c").unwrap(), Formula::until(a("a"), Formula::until(a("b"), a("c"))));
        assert_eq!(parse("a -> b -> c").unwrap(), Formula::implies(a("a"), Formula::implies(a("b"), a("c"))));
        assert_eq!(parse("a <-> b <-> c").unwrap(), Formula::iff(a("a"), Formula::iff(a("b"), a("c"))));
        assert_eq!(parse("a & b & c").unwrap(), Formula::and(Formula::and(a("a"), a("b")), a("c")));
        assert_eq!(parse("a | b | c").unwrap(), Formula::or(Formula::or(a("a"), a("b")), a("c")));
    }

    #[test]
    fn until_binds_tighter_than_and() {
        assert_eq!(
            parse("a & b U c").unwrap(),
            Formula::and(a("a"), Formula::until(a("b"), a("c")))
        );
        assert_eq!(
            parse("!a U X b").unwrap(),
            Formula::until(Formula::not(a("a")), Formula::next(a("b")))
        );
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(parse("G(a->F b)").unwrap(), parse("  G ( a -> F   b ) ").unwrap());
        assert_eq!(parse("!!a").unwrap(), Formula::not(Formula::not(a("a"))));
    }

    fn err(text: &str) -> ParseError {
        parse(text).unwrap_err()
    }

    #[test]
    fn lexical_errors_carry_spans() {
        let e = err("a & $b");
        assert_eq!(e.kind, ParseErrorKind::UnexpectedChar('$'));
        assert_eq!(e.span, SourceSpan::new(4, 5));
        let e = err("G Hold");
        assert_eq!(e.kind, ParseErrorKind::InvalidIdentifier("Hold".into()));
        assert_eq!(e.span, SourceSpan::new(2, 6));
        assert!(matches!(err("a - b").kind, ParseErrorKind::UnexpectedChar('-')));
    }

    #[test]
    fn syntax_errors_carry_spans() {
        let e = err("a & ");
        assert!(matches!(e.kind, ParseErrorKind::UnexpectedEnd { .. }));
        assert_eq!(e.span, SourceSpan::new(4, 4));
        let e = err("(a | b");
        assert!(matches!(e.kind, ParseErrorKind::UnexpectedEnd { .. }));
        let e = err("a b");
        assert_eq!(e.span, SourceSpan::new(2, 3));
        let e = err("a & )");
        assert_eq!(e.span, SourceSpan::new(4, 5));
    }

    #[test]
    fn reserved_words_are_not_atoms() {
        let e = err("up & a");
        assert_eq!(e.kind, ParseErrorKind::ReservedWord("up".into()));
        assert_eq!(e.span, SourceSpan::new(0, 2));
        assert_eq!(err("G").kind, ParseErrorKind::ReservedWord("G".into()));
        assert_eq!(err("a & U").kind, ParseErrorKind::ReservedWord("U".into()));
        assert!(parse("edge_case & up_x").is_ok());
    }

    #[test]
    fn spans_count_characters() {
        let e = err("é");
        assert_eq!(e.span, SourceSpan::new(0, 1));
        let e = err("ab ∧ c");
        assert_eq!(e.span, SourceSpan::new(3, 4));
    }
}
