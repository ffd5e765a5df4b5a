//! Recursive-descent parser for the concrete formula syntax.
//!
//! ```text
//! formula := iff
//! iff     := imp ( "<->" imp )*
//! imp     := or ( "->" imp )?
//! or      := and ( "|" and )*
//! and     := unary ( "&" unary )*
//! unary   := "!" unary | "exists" ident "." formula | "forall" ident "." formula | atom
//! atom    := "O" "(" ident "," ident ")" | ident "=" ident | ident "!=" ident | "(" formula ")"
//! ```
//!
//! Derived connectives are desugared into `!`, `&` and `exists` while parsing.
//! Free variables are numbered `1..=k` by first occurrence; a variable bound at
//! quantifier depth `d` gets index `k + d`, so sentences come out canonical.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use super::ast::{Formula, Term, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown predicate symbol `{symbol}` at {line}:{column}")]
    UnknownPredicate {
        symbol: String,
        line: usize,
        column: usize,
    },
    #[error("predicate `O` takes 2 arguments, found {found} at {line}:{column}")]
    Arity {
        found: usize,
        line: usize,
        column: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Pred(String),
    Exists,
    Forall,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Eq,
    Neq,
    LParen,
    RParen,
    Comma,
    Dot,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Pred(s) => format!("`{s}`"),
            Tok::Exists => "`exists`".into(),
            Tok::Forall => "`forall`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Neq => "`!=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l, col) = (line, column);
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            column += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i);
            continue;
        }
        let next = chars.get(i + 1).copied();
        let tok = match c {
            '(' => Some((Tok::LParen, 1)),
            ')' => Some((Tok::RParen, 1)),
            ',' => Some((Tok::Comma, 1)),
            '.' => Some((Tok::Dot, 1)),
            '&' => Some((Tok::And, 1)),
            '|' => Some((Tok::Or, 1)),
            '=' => Some((Tok::Eq, 1)),
            '!' if next == Some('=') => Some((Tok::Neq, 2)),
            '!' => Some((Tok::Not, 1)),
            '-' if next == Some('>') => Some((Tok::Implies, 2)),
            '<' if next == Some('-') && chars.get(i + 2) == Some(&'>') => Some((Tok::Iff, 3)),
            _ => None,
        };
        if let Some((tok, width)) = tok {
            out.push(Spanned {
                tok,
                line: l,
                column: col,
            });
            advance(width, &mut i);
            continue;
        }
        if c.is_ascii_lowercase() || c.is_ascii_uppercase() {
            let start = i;
            let mut j = i + 1;
            while j < chars.len()
                && (chars[j].is_ascii_lowercase()
                    || chars[j].is_ascii_digit()
                    || chars[j] == '_'
                    || (c.is_ascii_uppercase() && chars[j].is_ascii_alphanumeric()))
            {
                j += 1;
            }
            let word: String = chars[start..j].iter().collect();
            let tok = if c.is_ascii_uppercase() {
                Tok::Pred(word)
            } else {
                match word.as_str() {
                    "exists" => Tok::Exists,
                    "forall" => Tok::Forall,
                    _ => Tok::Ident(word),
                }
            };
            out.push(Spanned {
                tok,
                line: l,
                column: col,
            });
            advance(j - start, &mut i);
            continue;
        }
        return Err(ParseError::Syntax {
            line: l,
            column: col,
            message: format!("unexpected character `{c}`"),
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

/// Name-based tree produced by the parser before variables are numbered.
#[derive(Debug)]
enum Raw {
    Perp(String, String),
    Eq(String, String),
    Not(Box<Raw>),
    And(Box<Raw>, Box<Raw>),
    Exists(String, Box<Raw>),
}

fn not(r: Raw) -> Raw {
    Raw::Not(Box::new(r))
}

fn and(a: Raw, b: Raw) -> Raw {
    Raw::And(Box::new(a), Box::new(b))
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Spanned, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.error_here(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            )))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(name)
            }
            other => {
                Err(self.error_here(format!("expected identifier, found {}", other.describe())))
            }
        }
    }

    fn formula(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.imp()?;
            lhs = iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Raw, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.imp()?;
            return Ok(not(and(lhs, not(rhs))));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = not(and(not(lhs), not(rhs)));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Raw, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(not(self.unary()?))
            }
            Tok::Exists | Tok::Forall => {
                let universal = *self.peek() == Tok::Forall;
                self.bump();
                let name = self.ident()?;
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(if universal {
                    not(Raw::Exists(name, Box::new(not(body))))
                } else {
                    Raw::Exists(name, Box::new(body))
                })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Raw, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Pred(symbol) => {
                let at = self.bump();
                if symbol != "O" {
                    return Err(ParseError::UnknownPredicate {
                        symbol,
                        line: at.line,
                        column: at.column,
                    });
                }
                self.expect(Tok::LParen)?;
                let mut args = vec![self.ident()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.ident()?);
                }
                self.expect(Tok::RParen)?;
                if args.len() != 2 {
                    return Err(ParseError::Arity {
                        found: args.len(),
                        line: at.line,
                        column: at.column,
                    });
                }
                let b = args.pop().unwrap_or_default();
                let a = args.pop().unwrap_or_default();
                Ok(Raw::Perp(a, b))
            }
            Tok::Ident(_) => {
                let a = self.ident()?;
                match self.peek() {
                    Tok::Eq => {
                        self.bump();
                        Ok(Raw::Eq(a, self.ident()?))
                    }
                    Tok::Neq => {
                        self.bump();
                        Ok(not(Raw::Eq(a, self.ident()?)))
                    }
                    other => Err(self
                        .error_here(format!("expected `=` or `!=`, found {}", other.describe()))),
                }
            }
            other => {
                Err(self.error_here(format!("expected a formula, found {}", other.describe())))
            }
        }
    }
}

fn iff(a: Raw, b: Raw) -> Raw {
    // (a -> b) & (b -> a) needs a second copy of each side.
    let (a2, b2) = (a.duplicate(), b.duplicate());
    and(not(and(a, not(b))), not(and(b2, not(a2))))
}

impl Raw {
    fn duplicate(&self) -> Raw {
        match self {
            Raw::Perp(a, b) => Raw::Perp(a.clone(), b.clone()),
            Raw::Eq(a, b) => Raw::Eq(a.clone(), b.clone()),
            Raw::Not(f) => not(f.duplicate()),
            Raw::And(a, b) => and(a.duplicate(), b.duplicate()),
            Raw::Exists(v, f) => Raw::Exists(v.clone(), Box::new(f.duplicate())),
        }
    }
}

struct Resolver {
    free: HashMap<String, Variable>,
    free_count: u32,
    names: HashMap<String, Arc<str>>,
}

impl Resolver {
    fn name(&mut self, s: &str) -> Arc<str> {
        self.names
            .entry(s.to_string())
            .or_insert_with(|| Arc::from(s))
            .clone()
    }

    fn collect_free(&mut self, raw: &Raw, scope: &mut Vec<String>) {
        let see = |name: &String, scope: &Vec<String>, this: &mut Resolver| {
            if !scope.contains(name) && !this.free.contains_key(name) {
                this.free_count += 1;
                let v = Variable::named(this.free_count, this.name(name));
                this.free.insert(name.clone(), v);
            }
        };
        match raw {
            Raw::Perp(a, b) | Raw::Eq(a, b) => {
                see(a, scope, self);
                see(b, scope, self);
            }
            Raw::Not(f) => self.collect_free(f, scope),
            Raw::And(a, b) => {
                self.collect_free(a, scope);
                self.collect_free(b, scope);
            }
            Raw::Exists(v, f) => {
                scope.push(v.clone());
                self.collect_free(f, scope);
                scope.pop();
            }
        }
    }

    fn lookup(&self, name: &str, scope: &[Variable]) -> Term {
        scope
            .iter()
            .rev()
            .find(|v| v.name() == Some(name))
            .cloned()
            .or_else(|| self.free.get(name).cloned())
            .map(Term::Var)
            .expect("free variables are collected before resolution")
    }

    fn resolve(&mut self, raw: Raw, scope: &mut Vec<Variable>) -> Formula {
        match raw {
            Raw::Perp(a, b) => Formula::Perp(self.lookup(&a, scope), self.lookup(&b, scope)),
            Raw::Eq(a, b) => Formula::Eq(self.lookup(&a, scope), self.lookup(&b, scope)),
            Raw::Not(f) => Formula::not(self.resolve(*f, scope)),
            Raw::And(a, b) => {
                let a = self.resolve(*a, scope);
                let b = self.resolve(*b, scope);
                Formula::and(a, b)
            }
            Raw::Exists(name, f) => {
                let index = self.free_count + scope.len() as u32 + 1;
                let v = Variable::named(index, self.name(&name));
                scope.push(v.clone());
                let body = self.resolve(*f, scope);
                scope.pop();
                Formula::exists(v, body)
            }
        }
    }
}

/// Parse a formula in the concrete syntax.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, pos: 0 };
    let raw = parser.formula()?;
    if *parser.peek() != Tok::End {
        return Err(parser.error_here(format!(
            "unexpected {} after formula",
            parser.peek().describe()
        )));
    }
    let mut resolver = Resolver {
        free: HashMap::new(),
        free_count: 0,
        names: HashMap::new(),
    };
    resolver.collect_free(&raw, &mut Vec::new());
    Ok(resolver.resolve(raw, &mut Vec::new()))
}
