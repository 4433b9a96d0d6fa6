//! Minimal arithmetic expression interpreter for coefficient functions:
//! numeric literals, the variable x, + - * / ^, parentheses, unary minus,
//! and the functions exp and ln. Deliberately no user code execution.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    X,
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Exp(Box<Node>),
    Ln(Box<Node>),
}

impl Node {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Node::Num(v) => *v,
            Node::X => x,
            Node::Add(a, b) => a.eval(x) + b.eval(x),
            Node::Sub(a, b) => a.eval(x) - b.eval(x),
            Node::Mul(a, b) => a.eval(x) * b.eval(x),
            Node::Div(a, b) => a.eval(x) / b.eval(x),
            Node::Pow(a, b) => a.eval(x).powf(b.eval(x)),
            Node::Neg(a) => -a.eval(x),
            Node::Exp(a) => a.eval(x).exp(),
            Node::Ln(a) => a.eval(x).ln(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at position {}", self.message, self.pos)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    X,
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = s.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            '^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len()
                    && matches!(bytes[i] as char, '0'..='9' | '.' | 'e' | 'E')
                {
                    // allow exponent signs
                    if matches!(bytes[i] as char, 'e' | 'E')
                        && i + 1 < bytes.len()
                        && matches!(bytes[i + 1] as char, '+' | '-')
                    {
                        i += 1;
                    }
                    i += 1;
                }
                let text = &s[start..i];
                let v: f64 = text.parse().map_err(|_| ParseError {
                    pos: start,
                    message: format!("bad numeric literal '{text}'"),
                })?;
                toks.push((start, Tok::Num(v)));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && matches!(bytes[i] as char, 'a'..='z' | 'A'..='Z' | '0'..='9' | '_')
                {
                    i += 1;
                }
                let name = &s[start..i];
                if name == "x" {
                    toks.push((start, Tok::X));
                } else {
                    toks.push((start, Tok::Ident(name.to_string())));
                }
            }
            other => {
                return Err(ParseError {
                    pos: i,
                    message: format!("unexpected character '{other}'"),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(_, t)| t.clone());
        self.idx += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.next() {
            Some(t) if t == want => Ok(()),
            other => Err(ParseError {
                pos,
                message: format!("expected {want:?}, found {other:?}"),
            }),
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.next();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.next();
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // unary minus binds looser than ^, so -x^2 = -(x^2)
    fn unary(&mut self) -> Result<Node, ParseError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.next();
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    // right-associative; the exponent may carry a unary sign (x^-0.5)
    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.next();
            let exp = self.unary()?;
            return Ok(Node::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::Num(v)) => Ok(Node::Num(v)),
            Some(Tok::X) => Ok(Node::X),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                self.expect(Tok::LParen)?;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                match name.as_str() {
                    "exp" => Ok(Node::Exp(Box::new(inner))),
                    "ln" => Ok(Node::Ln(Box::new(inner))),
                    other => Err(ParseError {
                        pos,
                        message: format!("unknown function '{other}' (supported: exp, ln)"),
                    }),
                }
            }
            other => Err(ParseError {
                pos,
                message: format!("unexpected token {other:?}"),
            }),
        }
    }
}

/// Parse an expression in the variable x.
pub fn parse(s: &str) -> Result<Node, ParseError> {
    let toks = tokenize(s)?;
    let mut p = Parser {
        toks,
        idx: 0,
        len: s.len(),
    };
    let node = p.expr()?;
    if p.idx != p.toks.len() {
        return Err(ParseError {
            pos: p.pos(),
            message: "trailing input".into(),
        });
    }
    Ok(node)
}
