//! Arithmetic expressions over named variables.
//!
//! Grammar: `+ - * / ^`, parentheses, numeric literals, variables and the
//! functions listed in [`Func`]. `^` binds tighter than unary minus and is
//! right-associative, so `-x^2 = -(x^2)` and `2^3^2 = 2^9`.

use std::collections::HashMap;
use std::fmt;

use fracnoether::frac_kernels::gamma;

#[derive(Debug, Clone, PartialEq)]
pub struct ExprError {
    /// Byte offset into the expression text.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (at column {})", self.message, self.offset + 1)
    }
}

impl std::error::Error for ExprError {}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Func {
    Gamma,
    Sqrt,
    Exp,
    Ln,
    Sin,
    Cos,
    Tan,
    Abs,
    Min,
    Max,
}

impl Func {
    fn lookup(name: &str) -> Option<(Func, usize)> {
        Some(match name {
            "gamma" => (Func::Gamma, 1),
            "sqrt" => (Func::Sqrt, 1),
            "exp" => (Func::Exp, 1),
            "ln" => (Func::Ln, 1),
            "sin" => (Func::Sin, 1),
            "cos" => (Func::Cos, 1),
            "tan" => (Func::Tan, 1),
            "abs" => (Func::Abs, 1),
            "min" => (Func::Min, 2),
            "max" => (Func::Max, 2),
            _ => return None,
        })
    }

    fn apply(self, args: &[f64]) -> f64 {
        let x = args[0];
        match self {
            // poles evaluate to NaN so that residuals flag them
            Func::Gamma => gamma(x).unwrap_or(f64::NAN),
            Func::Sqrt => x.sqrt(),
            Func::Exp => x.exp(),
            Func::Ln => x.ln(),
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Abs => x.abs(),
            Func::Min => x.min(args[1]),
            Func::Max => x.max(args[1]),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Slot(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

impl Node {
    fn eval(&self, slots: &[f64]) -> f64 {
        match self {
            Node::Num(x) => *x,
            Node::Slot(i) => slots[*i],
            Node::Neg(a) => -a.eval(slots),
            Node::Add(a, b) => a.eval(slots) + b.eval(slots),
            Node::Sub(a, b) => a.eval(slots) - b.eval(slots),
            Node::Mul(a, b) => a.eval(slots) * b.eval(slots),
            Node::Div(a, b) => a.eval(slots) / b.eval(slots),
            Node::Pow(a, b) => pow(a.eval(slots), b.eval(slots)),
            Node::Call(f, args) => {
                let vals: Vec<f64> = args.iter().map(|a| a.eval(slots)).collect();
                f.apply(&vals)
            }
        }
    }

    fn is_constant(&self) -> bool {
        match self {
            Node::Num(_) => true,
            Node::Slot(_) => false,
            Node::Neg(a) => a.is_constant(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) | Node::Pow(a, b) => {
                a.is_constant() && b.is_constant()
            }
            Node::Call(_, args) => args.iter().all(Node::is_constant),
        }
    }
}

fn pow(x: f64, y: f64) -> f64 {
    if y.fract() == 0.0 && y.abs() <= i32::MAX as f64 {
        x.powi(y as i32)
    } else {
        x.powf(y)
    }
}

/// Names an expression may refer to: runtime slots and fixed constants.
#[derive(Debug, Clone, Default)]
pub struct Scope {
    slots: HashMap<String, usize>,
    constants: HashMap<String, f64>,
}

impl Scope {
    pub fn new() -> Self {
        let mut s = Self::default();
        s.constants.insert("pi".into(), std::f64::consts::PI);
        s.constants.insert("e".into(), std::f64::consts::E);
        s
    }

    pub fn slot(mut self, name: impl Into<String>, index: usize) -> Self {
        self.slots.insert(name.into(), index);
        self
    }

    pub fn constant(mut self, name: impl Into<String>, value: f64) -> Self {
        self.constants.insert(name.into(), value);
        self
    }

    pub fn set_constant(&mut self, name: impl Into<String>, value: f64) {
        self.constants.insert(name.into(), value);
    }

    pub fn has(&self, name: &str) -> bool {
        self.slots.contains_key(name) || self.constants.contains_key(name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
    source: String,
}

impl Expr {
    pub fn parse(text: &str, scope: &Scope) -> Result<Self, ExprError> {
        let tokens = tokenize(text)?;
        let mut p = Parser {
            tokens: &tokens,
            pos: 0,
            scope,
            end: text.len(),
        };
        let root = p.expr()?;
        if let Some(t) = p.peek() {
            return Err(p.error_at(t.offset, format!("unexpected {}", t.kind)));
        }
        Ok(Self {
            root,
            source: text.to_string(),
        })
    }

    pub fn eval(&self, slots: &[f64]) -> f64 {
        self.root.eval(slots)
    }

    /// True when the expression references no slot.
    pub fn is_constant(&self) -> bool {
        self.root.is_constant()
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

/// Parses and evaluates an expression that may only use constants.
pub fn eval_constant(text: &str, scope: &Scope) -> Result<f64, ExprError> {
    let e = Expr::parse(text, scope)?;
    if !e.is_constant() {
        return Err(ExprError {
            offset: 0,
            message: "expression must not depend on t or the trajectory".into(),
        });
    }
    Ok(e.eval(&[]))
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Num(f64),
    Ident(String),
    Op(char),
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Num(x) => write!(f, "number {x}"),
            Kind::Ident(s) => write!(f, "name '{s}'"),
            Kind::Op(c) => write!(f, "'{c}'"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: Kind,
    offset: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let lit = &text[start..i];
            let value = lit.parse::<f64>().map_err(|_| ExprError {
                offset: start,
                message: format!("malformed number '{lit}'"),
            })?;
            out.push(Token {
                kind: Kind::Num(value),
                offset: start,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                kind: Kind::Ident(text[start..i].to_string()),
                offset: start,
            });
        } else if "+-*/^(),".contains(c) {
            out.push(Token {
                kind: Kind::Op(c),
                offset: i,
            });
            i += 1;
        } else {
            let ch = text[i..].chars().next().unwrap_or('?');
            return Err(ExprError {
                offset: i,
                message: format!("unexpected character '{ch}'"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    scope: &'a Scope,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn error_at(&self, offset: usize, message: String) -> ExprError {
        ExprError { offset, message }
    }

    fn eat(&mut self, op: char) -> bool {
        if matches!(self.peek(), Some(Token { kind: Kind::Op(c), .. }) if *c == op) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<(), ExprError> {
        if self.eat(op) {
            return Ok(());
        }
        let (offset, found) = match self.peek() {
            Some(t) => (t.offset, t.kind.to_string()),
            None => (self.end, "end of expression".into()),
        };
        Err(self.error_at(offset, format!("expected '{op}', found {found}")))
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if self.eat('-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Node::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, ExprError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error_at(self.end, "unexpected end of expression".into()));
        };
        self.pos += 1;
        match tok.kind {
            Kind::Num(x) => Ok(Node::Num(x)),
            Kind::Op('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Kind::Ident(name) => {
                if self.eat('(') {
                    let (func, arity) = Func::lookup(&name)
                        .ok_or_else(|| self.error_at(tok.offset, format!("unknown function '{name}'")))?;
                    let mut args = vec![self.expr()?];
                    while self.eat(',') {
                        args.push(self.expr()?);
                    }
                    self.expect(')')?;
                    if args.len() != arity {
                        return Err(self.error_at(
                            tok.offset,
                            format!("{name}() takes {arity} argument(s), got {}", args.len()),
                        ));
                    }
                    return Ok(Node::Call(func, args));
                }
                if let Some(&i) = self.scope.slots.get(&name) {
                    Ok(Node::Slot(i))
                } else if let Some(&x) = self.scope.constants.get(&name) {
                    Ok(Node::Num(x))
                } else {
                    Err(self.error_at(tok.offset, format!("unknown variable '{name}'")))
                }
            }
            Kind::Op(c) => Err(self.error_at(tok.offset, format!("unexpected '{c}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(text: &str) -> f64 {
        Expr::parse(text, &Scope::new().slot("x", 0)).unwrap().eval(&[3.0])
    }

    #[test]
    fn precedence() {
        assert_eq!(eval("1 + 2 * 3"), 7.0);
        assert_eq!(eval("(1 + 2) * 3"), 9.0);
        assert_eq!(eval("-x^2"), -9.0);
        assert_eq!(eval("2^3^2"), 512.0);
        assert_eq!(eval("2^-1"), 0.5);
        assert_eq!(eval("8 / 4 / 2"), 1.0);
        assert_eq!(eval("x - 1 - 1"), 1.0);
        assert_eq!(eval("1.5e1 + .5"), 15.5);
    }

    #[test]
    fn functions() {
        assert_eq!(eval("gamma(x + 1)"), 6.0);
        assert_eq!(eval("max(x, 4) + min(x, 4)"), 7.0);
        assert!(eval("gamma(0)").is_nan());
        assert_eq!(eval("abs(-x)"), 3.0);
    }

    #[test]
    fn errors_carry_offsets() {
        let scope = Scope::new().slot("x", 0);
        let e = Expr::parse("x + y", &scope).unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(e.message.contains("'y'"));
        assert_eq!(Expr::parse("x +", &scope).unwrap_err().offset, 3);
        assert!(Expr::parse("foo(x)", &scope).unwrap_err().message.contains("unknown function"));
        assert!(Expr::parse("min(x)", &scope).is_err());
        assert!(Expr::parse("(x", &scope).is_err());
        assert!(Expr::parse("x $ 1", &scope).is_err());
        assert!(Expr::parse("", &scope).is_err());
        assert!(Expr::parse("1..2", &scope).is_err());
    }

    #[test]
    fn constants_fold() {
        let scope = Scope::new().constant("alpha", 0.5);
        assert_eq!(eval_constant("2 * alpha", &scope).unwrap(), 1.0);
        assert!(eval_constant("t", &Scope::new().slot("t", 0)).is_err());
    }
}
