//! Concrete syntax for terms.
//!
//! ```text
//! term   ::= ("fun" | "Pi") binders "," term | app ("->" term)?
//! binders::= ("(" ident+ ":" term ")")+ | ident+ ":" term
//! app    ::= atom+
//! atom   ::= ident | "Type" | "(" term ")"
//! ```
//!
//! `λ`, `Π` and `→` are accepted as synonyms. Identifiers bound by an
//! enclosing binder become de Bruijn indices; all others are constants.

use std::fmt;

use crate::kernel::{name, Name, Term, TermKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Type,
    Fun,
    Pi,
    Arrow,
    Comma,
    Colon,
    ColonEq,
    LParen,
    RParen,
    Eq,
    HEq,
    By,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Type => f.write_str("`Type`"),
            Tok::Fun => f.write_str("`fun`"),
            Tok::Pi => f.write_str("`Pi`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::ColonEq => f.write_str("`:=`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::HEq => f.write_str("`==`"),
            Tok::By => f.write_str("`by`"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '.' | '#')
}

/// Tokenize one logical line. `line` is used for error positions; `col0`
/// is the column offset of the first character.
pub(crate) fn lex(src: &str, line: usize, col0: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        let mut push = |tok, len: usize, i: &mut usize| {
            toks.push(Token { tok, line, col });
            *i += len;
        };
        match c {
            c if c.is_whitespace() => i += 1,
            '-' if chars.get(i + 1) == Some(&'-') => break,
            '-' if chars.get(i + 1) == Some(&'>') => push(Tok::Arrow, 2, &mut i),
            '→' => push(Tok::Arrow, 1, &mut i),
            'λ' => push(Tok::Fun, 1, &mut i),
            'Π' => push(Tok::Pi, 1, &mut i),
            ',' => push(Tok::Comma, 1, &mut i),
            '(' => push(Tok::LParen, 1, &mut i),
            ')' => push(Tok::RParen, 1, &mut i),
            ':' if chars.get(i + 1) == Some(&'=') => push(Tok::ColonEq, 2, &mut i),
            ':' => push(Tok::Colon, 1, &mut i),
            '=' if chars.get(i + 1) == Some(&'=') => push(Tok::HEq, 2, &mut i),
            '=' => push(Tok::Eq, 1, &mut i),
            c if is_ident_char(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let tok = match word.as_str() {
                    "Type" => Tok::Type,
                    "fun" => Tok::Fun,
                    "Pi" => Tok::Pi,
                    "by" => Tok::By,
                    _ => Tok::Ident(word),
                };
                toks.push(Token { tok, line, col });
            }
            other => {
                return Err(ParseError { line, col, msg: format!("unexpected character `{other}`") })
            }
        }
    }
    Ok(toks)
}

/// A cursor over the tokens of one logical line.
pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Position reported for errors at end of input.
    end: (usize, usize),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BinderKind {
    Fun,
    Pi,
}

impl Parser {
    pub fn new(toks: Vec<Token>, end: (usize, usize)) -> Self {
        Parser { toks, pos: 0, end }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn error(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = match self.toks.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => self.end,
        };
        ParseError { line, col, msg: msg.into() }
    }

    fn unexpected(&self, what: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(format!("expected {what}, found {t}")),
            None => self.error(format!("expected {what}, found end of line")),
        }
    }

    pub fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    pub fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    pub fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    pub fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }

    /// Parse a closed term (no enclosing binders).
    pub fn term(&mut self) -> Result<Term, ParseError> {
        self.term_in(&mut Vec::new())
    }

    fn term_in(&mut self, scope: &mut Vec<String>) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Fun) => {
                self.bump();
                self.binder(BinderKind::Fun, scope)
            }
            Some(Tok::Pi) => {
                self.bump();
                self.binder(BinderKind::Pi, scope)
            }
            _ => {
                let lhs = self.app(scope)?;
                if self.peek() == Some(&Tok::Arrow) {
                    self.bump();
                    // the codomain lives under an anonymous binder
                    scope.push(String::new());
                    let rhs = self.term_in(scope);
                    scope.pop();
                    Ok(Term::pi("_", lhs, rhs?))
                } else {
                    Ok(lhs)
                }
            }
        }
    }

    fn binder(&mut self, kind: BinderKind, scope: &mut Vec<String>) -> Result<Term, ParseError> {
        let mut groups: Vec<(Vec<String>, Term)> = Vec::new();
        let base = scope.len();
        let res = (|| {
            if self.peek() == Some(&Tok::LParen) {
                while self.peek() == Some(&Tok::LParen) {
                    self.bump();
                    let names = self.binder_names()?;
                    self.expect(Tok::Colon)?;
                    let ty = self.term_in(scope)?;
                    self.expect(Tok::RParen)?;
                    // every name in a group shares the type, shifted per binder
                    for (k, n) in names.iter().enumerate() {
                        groups.push((vec![n.clone()], ty.lift(k as u32, 0)));
                        scope.push(n.clone());
                    }
                }
            } else {
                let names = self.binder_names()?;
                self.expect(Tok::Colon)?;
                let ty = self.term_in(scope)?;
                for (k, n) in names.iter().enumerate() {
                    groups.push((vec![n.clone()], ty.lift(k as u32, 0)));
                    scope.push(n.clone());
                }
            }
            self.expect(Tok::Comma)?;
            self.term_in(scope)
        })();
        scope.truncate(base);
        let mut body = res?;
        for (names, ty) in groups.into_iter().rev() {
            let n = name(&names[0]);
            body = match kind {
                BinderKind::Fun => Term::lambda(n, ty, body),
                BinderKind::Pi => Term::pi(n, ty, body),
            };
        }
        Ok(body)
    }

    fn binder_names(&mut self) -> Result<Vec<String>, ParseError> {
        let mut names = vec![self.ident()?];
        while let Some(Tok::Ident(_)) = self.peek() {
            names.push(self.ident()?);
        }
        Ok(names)
    }

    fn app(&mut self, scope: &mut Vec<String>) -> Result<Term, ParseError> {
        let mut t = self.atom(scope)?;
        while matches!(self.peek(), Some(Tok::Ident(_) | Tok::Type | Tok::LParen)) {
            let a = self.atom(scope)?;
            t = Term::app(t, a);
        }
        Ok(t)
    }

    fn atom(&mut self, scope: &mut Vec<String>) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.bump();
                Ok(match scope.iter().rposition(|n| *n == s) {
                    Some(p) => Term::var((scope.len() - 1 - p) as u32),
                    None => Term::cnst(name(&s)),
                })
            }
            Some(Tok::Type) => {
                self.bump();
                Ok(Term::sort())
            }
            Some(Tok::LParen) => {
                self.bump();
                let t = self.term_in(scope)?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.unexpected("term")),
        }
    }
}

/// Parse a standalone term.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let toks = lex(src, 1, 1)?;
    let mut p = Parser::new(toks, (1, src.chars().count() + 1));
    let t = p.term()?;
    p.expect_end()?;
    Ok(t)
}

/// Render a term in the concrete syntax. Binder names are freshened where
/// needed so the output parses back to an α-equal term.
pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    Printer { scope: Vec::new() }.term(t, Prec::Top, &mut out);
    out
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Top,
    App,
    Atom,
}

struct Printer {
    scope: Vec<Name>,
}

impl Printer {
    fn fresh(&self, hint: &Name, body: &Term) -> Name {
        let base: &str = if hint.is_empty() || &**hint == "_" { "x" } else { hint };
        let taken = |c: &str| self.scope.iter().any(|n| &**n == c) || body.has_const(c);
        if !taken(base) {
            return name(base);
        }
        (1..)
            .map(|i| format!("{base}{i}"))
            .find(|c| !taken(c))
            .map(|c| name(&c))
            .unwrap()
    }

    fn term(&mut self, t: &Term, prec: Prec, out: &mut String) {
        match t.kind() {
            TermKind::Var(i) => {
                let depth = self.scope.len();
                match depth.checked_sub(1 + *i as usize) {
                    Some(p) => out.push_str(&self.scope[p]),
                    None => out.push_str(&format!("#{i}")),
                }
            }
            TermKind::Const(n) => out.push_str(n),
            TermKind::Sort => out.push_str("Type"),
            TermKind::App(..) => {
                let (head, args) = t.spine();
                if prec > Prec::App {
                    out.push('(');
                }
                self.term(head, Prec::Atom, out);
                for a in args {
                    out.push(' ');
                    self.term(a, Prec::Atom, out);
                }
                if prec > Prec::App {
                    out.push(')');
                }
            }
            TermKind::Pi { ty, body, .. } if !body.has_var(0) => {
                if prec > Prec::Top {
                    out.push('(');
                }
                self.term(ty, Prec::App, out);
                out.push_str(" -> ");
                self.scope.push(name("_"));
                self.term(body, Prec::Top, out);
                self.scope.pop();
                if prec > Prec::Top {
                    out.push(')');
                }
            }
            TermKind::Lambda { .. } | TermKind::Pi { .. } => {
                if prec > Prec::Top {
                    out.push('(');
                }
                let is_pi = matches!(t.kind(), TermKind::Pi { .. });
                out.push_str(if is_pi { "Pi" } else { "fun" });
                let base = self.scope.len();
                let mut cur = t;
                loop {
                    let (n, ty, body) = match (cur.kind(), is_pi) {
                        (TermKind::Pi { name, ty, body }, true) if body.has_var(0) => {
                            (name, ty, body)
                        }
                        (TermKind::Lambda { name, ty, body }, false) => (name, ty, body),
                        _ => break,
                    };
                    let n = self.fresh(n, body);
                    out.push_str(" (");
                    out.push_str(&n);
                    out.push_str(" : ");
                    self.term(ty, Prec::Top, out);
                    out.push(')');
                    self.scope.push(n);
                    cur = body;
                }
                out.push_str(", ");
                self.term(cur, Prec::Top, out);
                self.scope.truncate(base);
                if prec > Prec::Top {
                    out.push(')');
                }
            }
        }
    }
}
