//! A small expression language for defining functions `rho(z)` with
//! `D = {rho < 0}`.
//!
//! Variables are `z1..zn` (complex), `x1..xn` / `y1..yn` (real and imaginary
//! parts); constants `i`, `pi`; functions `abs re im conj sqrt exp ln sin cos
//! max min`. Arithmetic is complex throughout and the real part of the final
//! value is the defining function.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Complex64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Var {
    Z(usize),
    X(usize),
    Y(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Func {
    Abs,
    Re,
    Im,
    Conj,
    Sqrt,
    Exp,
    Ln,
    Sin,
    Cos,
    Max,
    Min,
}

impl Func {
    fn lookup(name: &str) -> Option<(Func, usize)> {
        Some(match name {
            "abs" => (Func::Abs, 1),
            "re" => (Func::Re, 1),
            "im" => (Func::Im, 1),
            "conj" => (Func::Conj, 1),
            "sqrt" => (Func::Sqrt, 1),
            "exp" => (Func::Exp, 1),
            "ln" => (Func::Ln, 1),
            "sin" => (Func::Sin, 1),
            "cos" => (Func::Cos, 1),
            "max" => (Func::Max, 2),
            "min" => (Func::Min, 2),
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' | '-' | '*' | '/' | '^' => {
                out.push(Token::Op(c));
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            ',' => {
                out.push(Token::Comma);
                i += 1;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let save = i;
                    i += 1;
                    if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                        i += 1;
                    }
                    if i < chars.len() && chars[i].is_ascii_digit() {
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    } else {
                        i = save;
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let v = text.parse::<f64>().map_err(|_| Error::Parse(format!("bad number `{text}`")))?;
                out.push(Token::Num(v));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Token) -> Result<()> {
        match self.next() {
            Some(got) if got == t => Ok(()),
            got => Err(Error::Parse(format!("expected {t:?}, found {got:?}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(Token::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(Token::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if let Some(Token::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if let Some(Token::Op('+')) = self.peek() {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if let Some(Token::Op('^')) = self.peek() {
            self.pos += 1;
            // right associative, binds tighter than unary minus on the left
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Token::Num(v)) => Ok(Expr::Num(Complex64::new(v, 0.0))),
            Some(Token::LParen) => {
                let e = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(e)
            }
            Some(Token::Ident(name)) => {
                if let Some((f, arity)) = Func::lookup(&name) {
                    self.expect(Token::LParen)?;
                    let mut args = vec![self.expr()?];
                    while let Some(Token::Comma) = self.peek() {
                        self.pos += 1;
                        args.push(self.expr()?);
                    }
                    self.expect(Token::RParen)?;
                    if args.len() != arity {
                        return Err(Error::Parse(format!("`{name}` takes {arity} argument(s)")));
                    }
                    return Ok(Expr::Call(f, args));
                }
                self.variable(&name)
            }
            got => Err(Error::Parse(format!("unexpected token {got:?}"))),
        }
    }

    fn variable(&self, name: &str) -> Result<Expr> {
        match name {
            "i" => return Ok(Expr::Num(Complex64::new(0.0, 1.0))),
            "pi" => return Ok(Expr::Num(Complex64::new(std::f64::consts::PI, 0.0))),
            _ => {}
        }
        let (head, idx) = name.split_at(1);
        let k: usize = idx.parse().map_err(|_| Error::Parse(format!("unknown identifier `{name}`")))?;
        if k == 0 || k > self.n {
            return Err(Error::Parse(format!("variable `{name}` out of range for n = {}", self.n)));
        }
        match head {
            "z" => Ok(Expr::Var(Var::Z(k - 1))),
            "x" => Ok(Expr::Var(Var::X(k - 1))),
            "y" => Ok(Expr::Var(Var::Y(k - 1))),
            _ => Err(Error::Parse(format!("unknown identifier `{name}`"))),
        }
    }
}

impl Expr {
    pub fn parse(src: &str, n: usize) -> Result<Expr> {
        let mut p = Parser { tokens: tokenize(src)?, pos: 0, n };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
        }
        Ok(e)
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        let re = |x: f64| Complex64::new(x, 0.0);
        match self {
            Expr::Num(c) => *c,
            Expr::Var(Var::Z(k)) => z[*k],
            Expr::Var(Var::X(k)) => re(z[*k].re),
            Expr::Var(Var::Y(k)) => re(z[*k].im),
            Expr::Neg(e) => -e.eval(z),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(z), b.eval(z));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => pow(a, b),
                }
            }
            Expr::Call(f, args) => {
                let a = args[0].eval(z);
                match f {
                    Func::Abs => re(a.norm()),
                    Func::Re => re(a.re),
                    Func::Im => re(a.im),
                    Func::Conj => a.conj(),
                    Func::Sqrt => a.sqrt(),
                    Func::Exp => a.exp(),
                    Func::Ln => a.ln(),
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Max | Func::Min => {
                        let b = args[1].eval(z);
                        let pick_a = if *f == Func::Max { a.re >= b.re } else { a.re <= b.re };
                        if pick_a {
                            a
                        } else {
                            b
                        }
                    }
                }
            }
        }
    }

    /// Real part of the value: the defining function itself.
    pub fn eval_real(&self, z: &[Complex64]) -> f64 {
        self.eval(z).re
    }
}

fn pow(a: Complex64, b: Complex64) -> Complex64 {
    if b.im == 0.0 {
        if a.im == 0.0 && a.re >= 0.0 {
            return Complex64::new(a.re.powf(b.re), 0.0);
        }
        if b.re.fract() == 0.0 && b.re.abs() < 64.0 {
            return a.powi(b.re as i32);
        }
        return a.powf(b.re);
    }
    a.powc(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ball_expression() {
        let e = Expr::parse("abs(z1)^2 + abs(z2)^2 - 1", 2).unwrap();
        assert!((e.eval_real(&[c(0.6, 0.0), c(0.0, 0.8)])).abs() < 1e-15);
        assert!(e.eval_real(&[c(0.1, 0.1), c(0.0, 0.2)]) < 0.0);
    }

    #[test]
    fn precedence_and_unary() {
        let e = Expr::parse("-2^2 + 3*x1 - y1/2", 1).unwrap();
        assert_eq!(e.eval_real(&[c(1.0, 4.0)]), -4.0 + 3.0 - 2.0);
        let e = Expr::parse("2^3^2", 1).unwrap();
        assert_eq!(e.eval_real(&[c(0.0, 0.0)]), 512.0);
        let e = Expr::parse("1.5e-1 * 2", 1).unwrap();
        assert!((e.eval_real(&[c(0.0, 0.0)]) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn functions() {
        let e = Expr::parse("max(abs(z1), abs(z2)) - 1", 2).unwrap();
        assert!((e.eval_real(&[c(0.5, 0.0), c(0.0, -0.9)]) + 0.1).abs() < 1e-15);
        let e = Expr::parse("re(z1 * conj(z1)) + im(i)", 1).unwrap();
        assert!((e.eval_real(&[c(3.0, 4.0)]) - 26.0).abs() < 1e-12);
    }

    #[test]
    fn parse_errors() {
        assert!(Expr::parse("z3", 2).is_err());
        assert!(Expr::parse("abs(z1", 2).is_err());
        assert!(Expr::parse("max(z1)", 2).is_err());
        assert!(Expr::parse("z1 z2", 2).is_err());
        assert!(Expr::parse("q1", 2).is_err());
        assert!(Expr::parse("1 $ 2", 2).is_err());
    }
}
