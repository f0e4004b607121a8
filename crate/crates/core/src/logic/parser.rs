//! Recursive-descent parser for the formula grammar.
//!
//! ```text
//! formula  := iff
//! iff      := impl ("<->" impl)*          (left-assoc)
//! impl     := or ("->" or)*               (right-assoc)
//! or       := and ("|" and)*
//! and      := unary ("&" unary)*
//! unary    := "!" unary | quant | atom | "(" formula ")" | "@" name "(" formula ")"
//! quant    := ("exists" | "forall") var "." formula
//! var      := "x" digits | "X" digits
//! atom     := vvar ("~" | "=" | "!=") vvar | vvar "in" Svar
//! ```
//!
//! `#` starts a comment running to end of line. Quantifier bodies extend
//! maximally to the right.

use crate::error::Error;
use crate::logic::ast::{Formula, SetVar, VertexVar};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Bang,
    Amp,
    Pipe,
    Arrow,
    IffOp,
    Tilde,
    Eq,
    Neq,
    Dot,
    At,
    Exists,
    Forall,
    In,
    Vertex(u32),
    Set(u32),
    Name(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Bang => "'!'".into(),
            Tok::Amp => "'&'".into(),
            Tok::Pipe => "'|'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::IffOp => "'<->'".into(),
            Tok::Tilde => "'~'".into(),
            Tok::Eq => "'='".into(),
            Tok::Neq => "'!='".into(),
            Tok::Dot => "'.'".into(),
            Tok::At => "'@'".into(),
            Tok::Exists => "'exists'".into(),
            Tok::Forall => "'forall'".into(),
            Tok::In => "'in'".into(),
            Tok::Vertex(i) => format!("vertex variable x{i}"),
            Tok::Set(i) => format!("set variable X{i}"),
            Tok::Name(n) => format!("name '{n}'"),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, Error> {
        let mut out = Vec::new();
        loop {
            while let Some(&c) = self.chars.peek() {
                if c == '#' {
                    while let Some(&d) = self.chars.peek() {
                        if d == '\n' {
                            break;
                        }
                        self.bump();
                    }
                } else if c.is_whitespace() {
                    self.bump();
                } else {
                    break;
                }
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.bump() else {
                out.push((Tok::Eof, line, col));
                return Ok(out);
            };
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '&' => Tok::Amp,
                '|' => Tok::Pipe,
                '~' => Tok::Tilde,
                '=' => Tok::Eq,
                '.' => Tok::Dot,
                '@' => Tok::At,
                '!' => {
                    if self.chars.peek() == Some(&'=') {
                        self.bump();
                        Tok::Neq
                    } else {
                        Tok::Bang
                    }
                }
                '-' => {
                    if self.bump() == Some('>') {
                        Tok::Arrow
                    } else {
                        return Err(self.error("expected '->'"));
                    }
                }
                '<' => {
                    if self.bump() == Some('-') && self.bump() == Some('>') {
                        Tok::IffOp
                    } else {
                        return Err(self.error("expected '<->'"));
                    }
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut word = String::new();
                    word.push(c);
                    while let Some(&d) = self.chars.peek() {
                        if d.is_ascii_alphanumeric() || d == '_' {
                            word.push(d);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    match word.as_str() {
                        "exists" => Tok::Exists,
                        "forall" => Tok::Forall,
                        "in" => Tok::In,
                        _ => match variable_token(&word) {
                            Some(Ok(tok)) => tok,
                            Some(Err(msg)) => return Err(self.error(msg)),
                            None => Tok::Name(word),
                        },
                    }
                }
                other => return Err(self.error(format!("unexpected character '{other}'"))),
            };
            out.push((tok, line, col));
        }
    }
}

fn variable_token(word: &str) -> Option<Result<Tok, String>> {
    let (head, digits) = word.split_at(1);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if !matches!(head, "x" | "X") {
        return None;
    }
    let index = match digits.parse::<u32>() {
        Ok(i) => i,
        Err(_) => return Some(Err(format!("variable index '{digits}' is too large"))),
    };
    Some(Ok(if head == "x" {
        Tok::Vertex(index)
    } else {
        Tok::Set(index)
    }))
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, msg: impl Into<String>) -> Error {
        let (_, line, col) = self.toks[self.pos];
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, want: &Tok) -> Result<(), Error> {
        if self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!(
                "expected {}, found {}",
                want.describe(),
                self.peek().describe()
            )))
        }
    }

    fn formula(&mut self) -> Result<Formula, Error> {
        self.iff()
    }

    fn iff(&mut self) -> Result<Formula, Error> {
        let mut f = self.implication()?;
        while *self.peek() == Tok::IffOp {
            self.bump();
            let r = self.implication()?;
            f = Formula::iff(f, r);
        }
        Ok(f)
    }

    fn implication(&mut self) -> Result<Formula, Error> {
        let l = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let r = self.implication()?;
            Ok(Formula::implies(l, r))
        } else {
            Ok(l)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, Error> {
        let mut f = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let r = self.conjunction()?;
            f = Formula::or(f, r);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, Error> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let r = self.unary()?;
            f = Formula::and(f, r);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, Error> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Exists | Tok::Forall => self.quantifier(),
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Tok::At => {
                self.bump();
                let name = match self.bump() {
                    Tok::Name(n) => n,
                    other => {
                        return Err(self.error_here(format!(
                            "expected a tag name after '@', found {}",
                            other.describe()
                        )))
                    }
                };
                self.expect(&Tok::LParen)?;
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(Formula::Tagged(name, Box::new(f)))
            }
            Tok::Vertex(_) => self.atom(),
            other => Err(self.error_here(format!(
                "expected a formula, found {}",
                other.describe()
            ))),
        }
    }

    fn quantifier(&mut self) -> Result<Formula, Error> {
        let universal = matches!(self.bump(), Tok::Forall);
        let var = self.bump();
        self.back_if_not_var(&var)?;
        self.expect(&Tok::Dot)?;
        let body = self.formula()?;
        Ok(match var {
            Tok::Vertex(i) if universal => Formula::forall(i, body),
            Tok::Vertex(i) => Formula::exists(i, body),
            Tok::Set(i) if universal => Formula::forall_set(i, body),
            Tok::Set(i) => Formula::exists_set(i, body),
            _ => unreachable!(),
        })
    }

    fn back_if_not_var(&mut self, tok: &Tok) -> Result<(), Error> {
        if matches!(tok, Tok::Vertex(_) | Tok::Set(_)) {
            Ok(())
        } else {
            self.pos -= 1;
            Err(self.error_here(format!(
                "expected a variable after the quantifier, found {}",
                tok.describe()
            )))
        }
    }

    fn atom(&mut self) -> Result<Formula, Error> {
        let l = match self.bump() {
            Tok::Vertex(i) => VertexVar(i),
            _ => unreachable!("atom called on a vertex variable"),
        };
        match self.bump() {
            Tok::Tilde => Ok(Formula::adjacent(l, self.vertex_term()?)),
            Tok::Eq => Ok(Formula::equal(l, self.vertex_term()?)),
            Tok::Neq => Ok(Formula::not_equal(l, self.vertex_term()?)),
            Tok::In => match self.bump() {
                Tok::Set(i) => Ok(Formula::member(l, SetVar(i))),
                other => {
                    self.pos -= 1;
                    Err(self.error_here(format!(
                        "expected a set variable after 'in', found {}",
                        other.describe()
                    )))
                }
            },
            other => {
                self.pos -= 1;
                Err(self.error_here(format!(
                    "expected '~', '=', '!=' or 'in', found {}",
                    other.describe()
                )))
            }
        }
    }

    fn vertex_term(&mut self) -> Result<VertexVar, Error> {
        match self.bump() {
            Tok::Vertex(i) => Ok(VertexVar(i)),
            other => {
                self.pos -= 1;
                Err(self.error_here(format!(
                    "expected a vertex variable, found {}",
                    other.describe()
                )))
            }
        }
    }
}

/// Parses a formula from its concrete syntax. Free variables are allowed;
/// the result is simply not a sentence then.
pub fn parse_formula(text: &str) -> Result<Formula, Error> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error_here(format!(
            "unexpected {} after the formula",
            p.peek().describe()
        )));
    }
    Ok(f)
}
