//! Reader for the fully parenthesized surface syntax:
//!
//! ```text
//! form := atom | true | false | (not form) | (and form+) | (or form+) | (imp form form)
//!       | (exists var form) | (forall var form) | (existsS Var form) | (forallS Var form)
//! atom := (= var var) | (E var var) | (P int var) | (root var) | (in var Var)
//! ```

use super::formula::{is_point_var, is_set_var, Formula};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Word(String),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        match c {
            '(' | ')' => {
                chars.next();
                column += 1;
                out.push(Token {
                    tok: if c == '(' { Tok::Open } else { Tok::Close },
                    line: l,
                    column: col,
                });
            }
            ';' => {
                // comment to end of line
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            }
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                column += 1;
            }
            c if c.is_ascii_alphanumeric() || c == '_' || c == '=' => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '=' {
                        word.push(c);
                        chars.next();
                        column += 1;
                    } else {
                        break;
                    }
                }
                out.push(Token {
                    tok: Tok::Word(word),
                    line: l,
                    column: col,
                });
            }
            other => {
                return Err(Error::Syntax {
                    line: l,
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn err<T>(&self, at: Option<&Token>, message: impl Into<String>) -> Result<T> {
        let (line, column) = at.map(|t| (t.line, t.column)).unwrap_or(self.end);
        Err(Error::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn next(&mut self) -> Result<Token> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => self.err(None, "unexpected end of input"),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn expect_close(&mut self) -> Result<()> {
        let t = self.next()?;
        if t.tok != Tok::Close {
            return self.err(Some(&t), "expected `)`");
        }
        Ok(())
    }

    fn word(&mut self) -> Result<(String, Token)> {
        let t = self.next()?;
        match &t.tok {
            Tok::Word(w) => Ok((w.clone(), t.clone())),
            _ => self.err(Some(&t), "expected a name"),
        }
    }

    fn point_var(&mut self) -> Result<String> {
        let (w, t) = self.word()?;
        if !is_point_var(&w) || is_keyword(&w) {
            return self.err(Some(&t), format!("`{w}` is not a point variable (lowercase)"));
        }
        Ok(w)
    }

    fn set_var(&mut self) -> Result<String> {
        let (w, t) = self.word()?;
        if !is_set_var(&w) || w == "E" || w == "P" {
            return self.err(Some(&t), format!("`{w}` is not a set variable (capitalized)"));
        }
        Ok(w)
    }

    fn formula(&mut self) -> Result<Formula> {
        let t = self.next()?;
        match &t.tok {
            Tok::Word(w) if w == "true" => return Ok(Formula::True),
            Tok::Word(w) if w == "false" => return Ok(Formula::False),
            Tok::Word(w) => return self.err(Some(&t), format!("unexpected `{w}`; formulas are parenthesized")),
            Tok::Close => return self.err(Some(&t), "unexpected `)`"),
            Tok::Open => {}
        }
        let (head, head_tok) = self.word()?;
        let f = match head.as_str() {
            "=" => Formula::Eq(self.point_var()?, self.point_var()?),
            "E" => Formula::Edge(self.point_var()?, self.point_var()?),
            "P" => {
                let (n, nt) = self.word()?;
                let l = match n.parse::<u32>() {
                    Ok(l) if l >= 1 => l,
                    _ => return self.err(Some(&nt), format!("`{n}` is not a label (positive integer)")),
                };
                Formula::Label(l, self.point_var()?)
            }
            "root" => Formula::Root(self.point_var()?),
            "in" => Formula::In(self.point_var()?, self.set_var()?),
            "not" => Formula::Not(Box::new(self.formula()?)),
            "and" | "or" => {
                let mut parts = vec![self.formula()?];
                while self.peek().is_some_and(|t| t.tok != Tok::Close) {
                    parts.push(self.formula()?);
                }
                if head == "and" {
                    Formula::And(parts)
                } else {
                    Formula::Or(parts)
                }
            }
            "imp" => Formula::Implies(Box::new(self.formula()?), Box::new(self.formula()?)),
            "exists" => {
                let v = self.point_var()?;
                Formula::Exists(v, Box::new(self.formula()?))
            }
            "forall" => {
                let v = self.point_var()?;
                Formula::Forall(v, Box::new(self.formula()?))
            }
            "existsS" => {
                let v = self.set_var()?;
                Formula::ExistsSet(v, Box::new(self.formula()?))
            }
            "forallS" => {
                let v = self.set_var()?;
                Formula::ForallSet(v, Box::new(self.formula()?))
            }
            other => return self.err(Some(&head_tok), format!("unknown operator `{other}`")),
        };
        self.expect_close()?;
        Ok(f)
    }
}

fn is_keyword(w: &str) -> bool {
    matches!(
        w,
        "true" | "false" | "not" | "and" | "or" | "imp" | "exists" | "forall" | "existsS" | "forallS" | "in" | "root"
    )
}

/// Parses a sentence; any free variable is reported as unbound.
pub fn parse_formula(text: &str) -> Result<Formula> {
    parse_formula_with(text, &[])
}

/// Parses a formula whose free variables must be among `free`.
pub fn parse_formula_with(text: &str, free: &[&str]) -> Result<Formula> {
    let toks = tokenize(text)?;
    let end = text.lines().enumerate().last().map_or((1, 1), |(i, l)| (i + 1, l.len() + 1));
    let mut p = Parser { toks, pos: 0, end };
    let f = p.formula()?;
    if let Some(t) = p.peek().cloned() {
        return p.err(Some(&t), "trailing input after formula");
    }
    if let Some(v) = f.free_vars().into_iter().find(|v| !free.contains(&v.as_str())) {
        return Err(Error::UnboundVariable(v));
    }
    Ok(f)
}
