//! Text syntax for terms and contexts.
//!
//! ```text
//! term    := IDENT | IDENT "(" term ("," term)* ")"
//! context := term-with-one-"<>"-atom
//! IDENT   := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! Whitespace between tokens is insignificant. Printing produces the
//! canonical form without whitespace, so print-then-parse is the
//! identity on values and parse-then-print is the identity on canonical
//! text.

use crate::error::Error;
use crate::Result;

use super::{Context, RankedAlphabet, Term, HOLE_TOKEN};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Hole,
    LPar,
    Comma,
    RPar,
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            bytes: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Next token with its starting byte offset, or `None` at end.
    fn next(&mut self) -> Result<Option<(usize, Tok)>> {
        self.skip_ws();
        if self.pos >= self.bytes.len() {
            return Ok(None);
        }
        let start = self.pos;
        let b = self.bytes[self.pos];
        let tok = match b {
            b'(' => {
                self.pos += 1;
                Tok::LPar
            }
            b')' => {
                self.pos += 1;
                Tok::RPar
            }
            b',' => {
                self.pos += 1;
                Tok::Comma
            }
            b'<' => {
                if self.bytes.get(self.pos + 1) == Some(&b'>') {
                    self.pos += 2;
                    Tok::Hole
                } else {
                    return Err(Error::syntax(start, "expected `<>`"));
                }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = self.pos + 1;
                while end < self.bytes.len()
                    && (self.bytes[end].is_ascii_alphanumeric() || self.bytes[end] == b'_')
                {
                    end += 1;
                }
                self.pos = end;
                Tok::Ident(self.src[start..end].to_string())
            }
            c => {
                return Err(Error::syntax(
                    start,
                    format!("unexpected character `{}`", c as char),
                ))
            }
        };
        Ok(Some((start, tok)))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    alphabet: &'a RankedAlphabet,
    allow_hole: bool,
    lookahead: Option<(usize, Tok)>,
}

impl<'a> Parser<'a> {
    fn new(alphabet: &'a RankedAlphabet, src: &'a str, allow_hole: bool) -> Result<Self> {
        let mut lexer = Lexer::new(src);
        let lookahead = lexer.next()?;
        Ok(Parser {
            lexer,
            alphabet,
            allow_hole,
            lookahead,
        })
    }

    fn bump(&mut self) -> Result<Option<(usize, Tok)>> {
        let cur = self.lookahead.take();
        self.lookahead = self.lexer.next()?;
        Ok(cur)
    }

    fn peek(&self) -> Option<&Tok> {
        self.lookahead.as_ref().map(|(_, t)| t)
    }

    fn term(&mut self) -> Result<Term> {
        let (pos, tok) = self
            .bump()?
            .ok_or_else(|| Error::syntax(self.lexer.pos, "unexpected end of input"))?;
        match tok {
            Tok::Hole if self.allow_hole => Ok(Term::constant(HOLE_TOKEN)),
            Tok::Hole => Err(Error::syntax(pos, "hole is not allowed in a ground term")),
            Tok::Ident(name) => {
                let arity = self
                    .alphabet
                    .arity(&name)
                    .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
                let mut children = Vec::new();
                if self.peek() == Some(&Tok::LPar) {
                    self.bump()?;
                    loop {
                        children.push(self.term()?);
                        match self.bump()? {
                            Some((_, Tok::Comma)) => continue,
                            Some((_, Tok::RPar)) => break,
                            Some((p, _)) => {
                                return Err(Error::syntax(p, "expected `,` or `)`"))
                            }
                            None => {
                                return Err(Error::syntax(
                                    self.lexer.pos,
                                    "unexpected end of input, expected `)`",
                                ))
                            }
                        }
                    }
                }
                if children.len() != arity {
                    return Err(Error::ArityMismatch {
                        symbol: name,
                        expected: arity,
                        found: children.len(),
                    });
                }
                Ok(Term::new(name, children))
            }
            _ => Err(Error::syntax(pos, "expected a symbol")),
        }
    }

    fn finish(&mut self) -> Result<()> {
        if let Some((pos, _)) = &self.lookahead {
            return Err(Error::syntax(*pos, "trailing input after term"));
        }
        Ok(())
    }
}

/// Parses a ground term, validating symbols and arities against
/// `alphabet`.
pub fn parse_term(alphabet: &RankedAlphabet, src: &str) -> Result<Term> {
    let mut p = Parser::new(alphabet, src, false)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses a context: the term grammar extended with the `<>` atom, of
/// which exactly one occurrence must appear.
pub fn parse_context(alphabet: &RankedAlphabet, src: &str) -> Result<Context> {
    let mut p = Parser::new(alphabet, src, true)?;
    let t = p.term()?;
    p.finish()?;
    Context::from_hole_term(&t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex1_alphabet() -> RankedAlphabet {
        RankedAlphabet::new([("f", 2), ("a1", 0), ("b1", 0), ("a2", 0), ("b2", 0)]).unwrap()
    }

    #[test]
    fn parses_example_term() {
        let t = parse_term(&ex1_alphabet(), "f(a1,b1)").unwrap();
        assert_eq!(t.root(), "f");
        assert_eq!(t.children().len(), 2);
        assert_eq!(t.to_string(), "f(a1,b1)");
    }

    #[test]
    fn whitespace_insignificant() {
        let t = parse_term(&ex1_alphabet(), "  f ( a1 , b1 )  ").unwrap();
        assert_eq!(t.to_string(), "f(a1,b1)");
    }

    #[test]
    fn hole_context_round_trip() {
        let alpha = ex1_alphabet();
        let c = parse_context(&alpha, "<>").unwrap();
        assert!(c.is_hole());
        let c = parse_context(&alpha, "f(<>,b2)").unwrap();
        assert_eq!(c.to_string(), "f(<>,b2)");
    }

    #[test]
    fn rejects_bad_input() {
        let alpha = ex1_alphabet();
        assert!(matches!(
            parse_term(&alpha, "g(a1)"),
            Err(Error::UnknownSymbol(_))
        ));
        assert!(matches!(
            parse_term(&alpha, "f(a1)"),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            parse_term(&alpha, "f(a1,b1"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_term(&alpha, "f(a1,b1) junk"),
            Err(Error::Syntax { .. })
        ));
        // zero holes and two holes are both invalid contexts
        assert!(parse_context(&alpha, "f(a1,b1)").is_err());
        assert!(parse_context(&alpha, "f(<>,<>)").is_err());
        // the hole atom is not a ground term
        assert!(parse_term(&alpha, "f(<>,b1)").is_err());
    }

    #[test]
    fn round_trip_enumerated() {
        let alpha = RankedAlphabet::new([("f", 2), ("a", 0)]).unwrap();
        for t in crate::trees::enumerate_terms(&alpha, 3) {
            assert_eq!(parse_term(&alpha, &t.to_string()).unwrap(), t);
        }
        for c in crate::trees::enumerate_contexts(&alpha, 3) {
            assert_eq!(parse_context(&alpha, &c.to_string()).unwrap(), c);
        }
    }
}
