use super::{ParseError, ParseErrorKind, SourceSpan};
use crate::ast::validate_atom_name;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) enum Tok {
    Atom(String),
    True,
    False,
    Not,
    Next,
    Always,
    Eventually,
    Rise,
    Fall,
    AnyEdge,
    Until,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
}

impl Tok {
    pub(super) fn text(&self) -> String {
        match self {
            Tok::Atom(s) => s.clone(),
            Tok::True => "true".into(),
            Tok::False => "false".into(),
            Tok::Not => "!".into(),
            Tok::Next => "X".into(),
            Tok::Always => "G".into(),
            Tok::Eventually => "F".into(),
            Tok::Rise => "up".into(),
            Tok::Fall => "down".into(),
            Tok::AnyEdge => "edge".into(),
            Tok::Until => "U".into(),
            Tok::And => "&".into(),
            Tok::Or => "|".into(),
            Tok::Implies => "->".into(),
            Tok::Iff => "<->".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
        }
    }
}

pub(super) fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '!' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Implies
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                i += 2;
                Tok::Iff
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                let word: String = chars[start..=i].iter().collect();
                let span = SourceSpan::new(start, i + 1);
                match word.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "X" => Tok::Next,
                    "G" => Tok::Always,
                    "F" => Tok::Eventually,
                    "U" => Tok::Until,
                    "up" => Tok::Rise,
                    "down" => Tok::Fall,
                    "edge" => Tok::AnyEdge,
                    _ => {
                        if validate_atom_name(&word).is_err() {
                            return Err(ParseError { kind: ParseErrorKind::InvalidIdentifier(word), span });
                        }
                        Tok::Atom(word)
                    }
                }
            }
            other => {
                return Err(ParseError {
                    kind: ParseErrorKind::UnexpectedChar(other),
                    span: SourceSpan::new(start, start + 1),
                })
            }
        };
        i += 1;
        out.push((tok, SourceSpan::new(start, i)));
    }
    Ok(out)
}
