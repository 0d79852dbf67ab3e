//! Reading and writing the functional-style ontology format.
//!
//! ```text
//! Ontology    ::= 'Ontology(' Axiom* ')'
//! Axiom       ::= 'SubClassOf(' Concept Concept ')' | 'EquivalentClasses(' Concept Concept ')'
//! Concept     ::= 'owl:Thing' | 'owl:Nothing' | NAME
//!               | 'ObjectIntersectionOf(' Concept Concept+ ')'
//!               | 'ObjectSomeValuesFrom(' NAME Concept ')'
//! ```
//!
//! Whitespace is insignificant and `#` starts a comment running to the end of the line.

use std::fmt;

use thiserror::Error;

use crate::model::{canonicalize, Axiom, Concept, Ontology, RESERVED_CHAR};

/// 1-based position in the input text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SourceLocation {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{location}: syntax error: {message}")]
    Syntax { location: SourceLocation, message: String },
    #[error("{location}: name `{name}` contains the reserved character `@`")]
    ReservedCharacter { location: SourceLocation, name: String },
}

impl ParseError {
    pub fn location(&self) -> SourceLocation {
        match self {
            ParseError::Syntax { location, .. } | ParseError::ReservedCharacter { location, .. } => *location,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Open,
    Close,
    Word(&'a str),
    Eof,
}

impl fmt::Display for Tok<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Open => f.write_str("`(`"),
            Tok::Close => f.write_str("`)`"),
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':' | RESERVED_CHAR)
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
    column: usize,
    peeked: Option<(Tok<'a>, SourceLocation)>,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { text, pos: 0, line: 1, column: 1, peeked: None }
    }

    fn here(&self) -> SourceLocation {
        SourceLocation { line: self.line, column: self.column }
    }

    fn bump(&mut self, c: char) {
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
    }

    fn scan(&mut self) -> Result<(Tok<'a>, SourceLocation), ParseError> {
        loop {
            let Some(c) = self.text[self.pos..].chars().next() else {
                return Ok((Tok::Eof, self.here()));
            };
            if c.is_whitespace() {
                self.bump(c);
            } else if c == '#' {
                while let Some(c) = self.text[self.pos..].chars().next() {
                    if c == '\n' {
                        break;
                    }
                    self.bump(c);
                }
            } else {
                break;
            }
        }
        let loc = self.here();
        let c = self.text[self.pos..].chars().next().unwrap();
        match c {
            '(' => {
                self.bump(c);
                Ok((Tok::Open, loc))
            }
            ')' => {
                self.bump(c);
                Ok((Tok::Close, loc))
            }
            c if is_word_char(c) => {
                let start = self.pos;
                while let Some(c) = self.text[self.pos..].chars().next() {
                    if !is_word_char(c) {
                        break;
                    }
                    self.bump(c);
                }
                Ok((Tok::Word(&self.text[start..self.pos]), loc))
            }
            other => Err(ParseError::Syntax { location: loc, message: format!("unexpected character `{other}`") }),
        }
    }

    fn peek(&mut self) -> Result<&(Tok<'a>, SourceLocation), ParseError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.scan()?);
        }
        Ok(self.peeked.as_ref().unwrap())
    }

    fn next(&mut self) -> Result<(Tok<'a>, SourceLocation), ParseError> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.scan(),
        }
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
}

fn syntax(location: SourceLocation, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { location, message: message.into() }
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { lex: Lexer::new(text) }
    }

    fn expect_open(&mut self) -> Result<(), ParseError> {
        match self.lex.next()? {
            (Tok::Open, _) => Ok(()),
            (t, loc) => Err(syntax(loc, format!("expected `(`, found {t}"))),
        }
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        match self.lex.next()? {
            (Tok::Close, _) => Ok(()),
            (t, loc) => Err(syntax(loc, format!("expected `)`, found {t}"))),
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        match self.lex.next()? {
            (Tok::Eof, _) => Ok(()),
            (t, loc) => Err(syntax(loc, format!("unexpected {t} after end of input"))),
        }
    }

    fn name(word: &str, loc: SourceLocation) -> Result<&str, ParseError> {
        if word.contains(RESERVED_CHAR) {
            return Err(ParseError::ReservedCharacter { location: loc, name: word.to_string() });
        }
        if word.contains(':') {
            return Err(syntax(loc, format!("`{word}` is not a valid name")));
        }
        Ok(word)
    }

    fn peek_is_close(&mut self) -> Result<bool, ParseError> {
        Ok(matches!(self.lex.peek()?.0, Tok::Close))
    }

    fn ontology(&mut self) -> Result<Ontology, ParseError> {
        match self.lex.next()? {
            (Tok::Word("Ontology"), _) => {}
            (t, loc) => return Err(syntax(loc, format!("expected `Ontology(`, found {t}"))),
        }
        self.expect_open()?;
        let mut axioms = Vec::new();
        while !self.peek_is_close()? {
            axioms.push(self.axiom()?);
        }
        self.expect_close()?;
        self.expect_eof()?;
        Ok(Ontology::new(axioms))
    }

    fn axiom(&mut self) -> Result<Axiom, ParseError> {
        let (tok, loc) = self.lex.next()?;
        let kind = match tok {
            Tok::Word(w @ ("SubClassOf" | "EquivalentClasses")) => w,
            Tok::Word(w) => return Err(syntax(loc, format!("unsupported axiom kind `{w}`"))),
            t => return Err(syntax(loc, format!("expected an axiom, found {t}"))),
        };
        self.expect_open()?;
        let lhs = self.concept()?;
        let rhs = self.concept()?;
        self.expect_close()?;
        Ok(if kind == "SubClassOf" { Axiom::SubClassOf(lhs, rhs) } else { Axiom::EquivalentClasses(lhs, rhs) })
    }

    fn concept(&mut self) -> Result<Concept, ParseError> {
        let (tok, loc) = self.lex.next()?;
        let word = match tok {
            Tok::Word(w) => w,
            t => return Err(syntax(loc, format!("expected a class expression, found {t}"))),
        };
        match word {
            "owl:Thing" => return Ok(Concept::Top),
            "owl:Nothing" => return Ok(Concept::Bottom),
            _ => {}
        }
        if !matches!(self.lex.peek()?.0, Tok::Open) {
            return Ok(Concept::name(Self::name(word, loc)?));
        }
        match word {
            "ObjectIntersectionOf" => {
                self.expect_open()?;
                let mut parts = vec![self.concept()?];
                while !self.peek_is_close()? {
                    parts.push(self.concept()?);
                }
                if parts.len() < 2 {
                    return Err(syntax(loc, "ObjectIntersectionOf needs at least two operands"));
                }
                self.expect_close()?;
                Ok(Concept::Conj(parts))
            }
            "ObjectSomeValuesFrom" => {
                self.expect_open()?;
                let role = match self.lex.next()? {
                    (Tok::Word(w), l) => Self::name(w, l)?.to_string(),
                    (t, l) => return Err(syntax(l, format!("expected a role name, found {t}"))),
                };
                let filler = self.concept()?;
                self.expect_close()?;
                Ok(Concept::exists(role, filler))
            }
            other => Err(syntax(loc, format!("unsupported class constructor `{other}`"))),
        }
    }
}

pub fn parse_ontology(text: &str) -> Result<Ontology, ParseError> {
    Parser::new(text).ontology()
}

/// Parses a single class expression. The result is not canonicalized.
pub fn parse_concept(text: &str) -> Result<Concept, ParseError> {
    let mut p = Parser::new(text);
    let c = p.concept()?;
    p.expect_eof()?;
    Ok(c)
}

/// Parses a single `SubClassOf` or `EquivalentClasses` axiom.
pub fn parse_axiom(text: &str) -> Result<Axiom, ParseError> {
    let mut p = Parser::new(text);
    let a = p.axiom()?;
    p.expect_eof()?;
    Ok(a)
}

/// Something with a canonical textual form.
pub trait Serialize {
    fn serialize(&self) -> String;
}

impl Serialize for Concept {
    fn serialize(&self) -> String {
        canonicalize(self).to_string()
    }
}

impl Serialize for Axiom {
    fn serialize(&self) -> String {
        self.canonical().to_string()
    }
}

impl Serialize for Ontology {
    /// One axiom per line, indented, inside `Ontology( ... )`.
    fn serialize(&self) -> String {
        if self.is_empty() {
            return "Ontology()\n".to_string();
        }
        let mut out = String::from("Ontology(\n");
        for ax in self.axioms() {
            out.push_str("    ");
            out.push_str(&ax.serialize());
            out.push('\n');
        }
        out.push_str(")\n");
        out
    }
}

pub fn serialize<T: Serialize + ?Sized>(item: &T) -> String {
    item.serialize()
}
