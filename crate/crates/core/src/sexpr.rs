//! Minimal s-expression reader shared by the instruction, cell and trace syntaxes.
//!
//! Bracketed groups such as `[2,2 / 1]@2` are read as single atoms so that
//! scheme literals can appear inside terms unquoted.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at line {line}, column {col}: {msg}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

impl Sexp {
    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a) => Some(a),
            Sexp::List(_) => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(v) => Some(v),
            Sexp::Atom(_) => None,
        }
    }

    /// The list's head atom, if it has one.
    pub fn head(&self) -> Option<&str> {
        self.list().and_then(|v| v.first()).and_then(Sexp::atom)
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(a) => f.write_str(a),
            Sexp::List(items) => {
                f.write_str("(")?;
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Reader<'a> {
    chars: Vec<(usize, usize, char)>,
    pos: usize,
    _text: &'a str,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        let mut chars = Vec::new();
        let (mut line, mut col) = (1, 1);
        for ch in text.chars() {
            chars.push((line, col, ch));
            if ch == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        Reader {
            chars,
            pos: 0,
            _text: text,
        }
    }

    fn err(&self, msg: impl Into<String>) -> SyntaxError {
        let (line, col) = match self.chars.get(self.pos) {
            Some(&(l, c, _)) => (l, c),
            None => self.chars.last().map(|&(l, c, _)| (l, c + 1)).unwrap_or((1, 1)),
        };
        SyntaxError {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|t| t.2)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn read(&mut self) -> Result<Sexp, SyntaxError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(')') => Err(self.err("unexpected ')'")),
            Some('(') => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        None => return Err(self.err("unclosed '('")),
                        Some(')') => {
                            self.pos += 1;
                            return Ok(Sexp::List(items));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(_) => self.read_atom(),
        }
    }

    fn read_atom(&mut self) -> Result<Sexp, SyntaxError> {
        let mut s = String::new();
        let mut depth = 0usize;
        while let Some(c) = self.peek() {
            match c {
                '[' => depth += 1,
                ']' => {
                    if depth == 0 {
                        return Err(self.err("unbalanced ']'"));
                    }
                    depth -= 1;
                }
                '(' | ')' if depth == 0 => break,
                c if c.is_whitespace() && depth == 0 => break,
                _ => {}
            }
            s.push(c);
            self.pos += 1;
        }
        if depth > 0 {
            return Err(self.err("unclosed '['"));
        }
        Ok(Sexp::Atom(s))
    }
}

/// Reads exactly one expression.
pub fn parse(text: &str) -> Result<Sexp, SyntaxError> {
    let mut r = Reader::new(text);
    let e = r.read()?;
    r.skip_ws();
    if r.peek().is_some() {
        return Err(r.err("trailing input"));
    }
    Ok(e)
}
