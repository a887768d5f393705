//! Recursive-descent parser for the formula text syntax.
//!
//! ```text
//! formula := "true" | "false" | atom | "!" atom
//!          | "And" "{" [formula ("," formula)*] "}"
//!          | "Or" "{" [formula ("," formula)*] "}"
//!          | ("E" | "A") var ("," var)* "." formula
//!          | "(" formula ")"
//! atom    := label "(" var ")" | var "=" var
//! label   := ("u" | "l" | "ld" | "cls") index
//! index   := nat | "(" nat ("." nat)* ")" | "(eps)"
//! ```
//!
//! A parenthesized index is a sequence index; `u` and `cls` take naturals only.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{Atom, Formula};
use crate::label::{Label, LabelIndex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    UnboundVariable(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { line, col, message } => {
                write!(f, "syntax error at {line}:{col}: {message}")
            }
            ParseError::UnboundVariable(v) => write!(f, "unbound variable `{v}`"),
        }
    }
}

/// Parses a sentence; free variables are rejected.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let f = parse_open(text)?;
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(ParseError::UnboundVariable(v));
    }
    Ok(f)
}

/// Parses a formula that may have free variables.
pub fn parse_open(text: &str) -> Result<Formula, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        end: end_position(text),
    };
    let f = p.formula()?;
    if let Some(t) = p.peek() {
        return Err(p.error_at(t.line, t.col, format!("unexpected {}", t.tok)));
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Bang,
    Equals,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(s) => write!(f, "number {s}"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::Equals => f.write_str("`=`"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn end_position(text: &str) -> (usize, usize) {
    let mut line = 1;
    let mut col = 1;
    for c in text.chars() {
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '!' => Some(Tok::Bang),
            '=' => Some(Tok::Equals),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, line: tl, col: tc });
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned {
                tok: Tok::Ident(s),
                line: tl,
                col: tc,
            });
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned {
                tok: Tok::Number(s),
                line: tl,
                col: tc,
            });
        } else {
            return Err(ParseError::Syntax {
                line: tl,
                col: tc,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

enum LabelHead {
    Sort,
    Ell,
    Dagger,
    Class,
}

/// Splits an identifier like `ld12` into its label prefix and digit suffix.
fn label_head(ident: &str) -> Option<(LabelHead, &str)> {
    for (prefix, head) in [
        ("cls", LabelHead::Class),
        ("ld", LabelHead::Dagger),
        ("l", LabelHead::Ell),
        ("u", LabelHead::Sort),
    ] {
        if let Some(rest) = ident.strip_prefix(prefix) {
            if rest.bytes().all(|b| b.is_ascii_digit()) {
                return Some((head, rest));
            }
        }
    }
    None
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "true" | "false" | "And" | "Or" | "E" | "A")
}

fn is_var_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_lowercase() || c == '_') && !is_keyword(s)
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.tokens.get(self.pos)
    }

    fn peek_tok(&self) -> Option<&Tok> {
        self.peek().map(|t| &t.tok)
    }

    fn peek2_tok(&self) -> Option<&Tok> {
        self.tokens.get(self.pos + 1).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.peek() {
            Some(t) => (t.line, t.col),
            None => self.end,
        }
    }

    fn error_at(&self, line: usize, col: usize, message: String) -> ParseError {
        ParseError::Syntax { line, col, message }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        self.error_at(line, col, message.into())
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.tok)),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), ParseError> {
        if self.peek_tok() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn var(&mut self) -> Result<String, ParseError> {
        match self.peek_tok() {
            Some(Tok::Ident(s)) if is_var_name(s) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected("a variable")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let tok = match self.peek_tok() {
            Some(t) => t.clone(),
            None => return Err(self.unexpected("a formula")),
        };
        match tok {
            Tok::LParen => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Bang => {
                self.pos += 1;
                Ok(Formula::NotAtom(self.atom()?))
            }
            Tok::Ident(s) => match s.as_str() {
                "true" => {
                    self.pos += 1;
                    Ok(Formula::True)
                }
                "false" => {
                    self.pos += 1;
                    Ok(Formula::False)
                }
                "And" | "Or" => {
                    self.pos += 1;
                    let items = self.list()?;
                    Ok(if s == "And" {
                        Formula::And(items)
                    } else {
                        Formula::Or(items)
                    })
                }
                "E" | "A" => {
                    self.pos += 1;
                    let mut vars = alloc::vec![self.var()?];
                    while self.peek_tok() == Some(&Tok::Comma) {
                        self.pos += 1;
                        vars.push(self.var()?);
                    }
                    self.expect(Tok::Dot, "`.` after quantified variables")?;
                    let mut body = self.formula()?;
                    for v in vars.into_iter().rev() {
                        body = if s == "E" {
                            Formula::Exists(v, Box::new(body))
                        } else {
                            Formula::Forall(v, Box::new(body))
                        };
                    }
                    Ok(body)
                }
                _ => Ok(Formula::Atom(self.atom()?)),
            },
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn list(&mut self) -> Result<Vec<Formula>, ParseError> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut items = Vec::new();
        if self.peek_tok() == Some(&Tok::RBrace) {
            self.pos += 1;
            return Ok(items);
        }
        loop {
            items.push(self.formula()?);
            match self.peek_tok() {
                Some(Tok::Comma) => self.pos += 1,
                Some(Tok::RBrace) => {
                    self.pos += 1;
                    return Ok(items);
                }
                _ => return Err(self.unexpected("`,` or `}`")),
            }
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let ident = match self.peek_tok() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return Err(self.unexpected("an atom")),
        };
        if self.peek2_tok() == Some(&Tok::LParen) {
            let (line, col) = self.here();
            self.pos += 1;
            let label = self.label(&ident, line, col)?;
            self.expect(Tok::LParen, "`(`")?;
            let v = self.var()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(Atom::Label(label, v));
        }
        let x = self.var()?;
        self.expect(Tok::Equals, "`=` or a label argument")?;
        let y = self.var()?;
        Ok(Atom::Eq(x, y))
    }

    /// Called with the identifier consumed and `(` next.
    fn label(&mut self, ident: &str, line: usize, col: usize) -> Result<Label, ParseError> {
        let (head, digits) = match label_head(ident) {
            Some(h) => h,
            None => return Err(self.error_at(line, col, format!("unknown label `{ident}`"))),
        };
        let index = if digits.is_empty() {
            self.paren_index()?
        } else {
            LabelIndex::Nat(
                digits
                    .parse()
                    .map_err(|_| self.error_at(line, col, "label index too large".to_string()))?,
            )
        };
        let nat = |ix: LabelIndex, p: &Parser| match ix {
            LabelIndex::Nat(n) => u32::try_from(n)
                .map_err(|_| p.error_at(line, col, "label index too large".to_string())),
            LabelIndex::Seq(_) => Err(p.error_at(
                line,
                col,
                format!("`{ident}` takes a natural index, not a sequence"),
            )),
        };
        Ok(match head {
            LabelHead::Sort => Label::Sort(nat(index, self)?),
            LabelHead::Class => Label::Class(nat(index, self)?),
            LabelHead::Ell => Label::Ell(index),
            LabelHead::Dagger => Label::EllDagger(index),
        })
    }

    fn paren_index(&mut self) -> Result<LabelIndex, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        if let Some(Tok::Ident(s)) = self.peek_tok() {
            if s == "eps" {
                self.pos += 1;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(LabelIndex::Seq(Vec::new()));
            }
        }
        let mut seq = Vec::new();
        loop {
            match self.peek_tok() {
                Some(Tok::Number(n)) => {
                    let n = n.parse().map_err(|_| self.error("sequence entry too large"))?;
                    self.pos += 1;
                    seq.push(n);
                }
                _ => return Err(self.unexpected("a sequence entry or `eps`")),
            }
            match self.peek_tok() {
                Some(Tok::Dot) => self.pos += 1,
                Some(Tok::RParen) => {
                    self.pos += 1;
                    return Ok(LabelIndex::Seq(seq));
                }
                _ => return Err(self.unexpected("`.` or `)`")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn smallest_sentence() {
        let f = parse("E x. l0(x)").unwrap();
        assert_eq!(f, Formula::exists(&["x"], Formula::label(Label::ell(0), "x")));
    }

    #[test]
    fn forall_disjunction() {
        let f = parse("A x. Or{ ld0(x), l1(x) }").unwrap();
        assert_eq!(
            f,
            Formula::forall(
                &["x"],
                Formula::Or(vec![
                    Formula::label(Label::dagger(0), "x"),
                    Formula::label(Label::ell(1), "x")
                ])
            )
        );
    }

    #[test]
    fn sequence_labels() {
        let f = parse_open("And{ l(eps)(x), ld(0.1)(x), l(2)(x), u3(x), cls1(x) }").unwrap();
        assert_eq!(
            f,
            Formula::And(vec![
                Formula::label(Label::ell_seq(&[]), "x"),
                Formula::label(Label::dagger_seq(&[0, 1]), "x"),
                Formula::label(Label::ell_seq(&[2]), "x"),
                Formula::label(Label::Sort(3), "x"),
                Formula::label(Label::Class(1), "x"),
            ])
        );
    }

    #[test]
    fn quantifier_blocks_and_parens() {
        let f = parse("(E x, y. (!x = y))").unwrap();
        assert_eq!(f, Formula::exists(&["x", "y"], Formula::neq("x", "y")));
        assert_eq!(parse("Or{}").unwrap(), Formula::Or(vec![]));
    }

    #[test]
    fn errors_carry_positions() {
        match parse("E x.\n  l0(x") {
            Err(ParseError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 7)),
            other => panic!("{other:?}"),
        }
        match parse("A x. q1(x)") {
            Err(ParseError::Syntax { line, col, message }) => {
                assert_eq!((line, col), (1, 6));
                assert!(message.contains("unknown label"));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(parse("l0(x)"), Err(ParseError::UnboundVariable("x".into())));
        assert!(parse("u(0)(x)").is_err());
        assert!(parse("E x. l0(x) true").is_err());
        assert!(parse("E x. l0(x) # no").is_err());
    }
}
