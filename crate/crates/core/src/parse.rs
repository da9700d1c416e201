//! Text syntax for polynomials, elements, columns and endomorphisms.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' INT)?
//! atom  := NUMBER | 'x' INT | 'y' INT | '[' expr ',' expr ']' | '(' expr ')'
//! ```
//!
//! Indices are one-based in text. An expression is typed while it is
//! parsed: anything built from numbers and `y`s is a polynomial, anything
//! containing an `x` is an element of `M_n`. Products of an element with a
//! polynomial act through the module structure.

use num_bigint::BigInt;

use crate::endo::Endomorphism;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::magnus::{JacobianColumn, MagnusElement};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Poly(Poly),
    Element(MagnusElement),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    X(usize),
    Y(usize),
    Sym(char),
    Arrow,
    Sep,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, column, message: String| Error::Parse { line, column, message };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: l0, column: c0 });
        match c {
            '\n' | ';' => {
                push(&mut out, Tok::Sep);
                i += 1;
                if c == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                continue;
            }
            _ if c.is_whitespace() => {}
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                push(&mut out, Tok::Num(digits.parse().expect("ascii digits")));
                col += i - start;
                continue;
            }
            'x' | 'y' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == start {
                    return Err(err(l0, c0, format!("expected an index after '{c}'")));
                }
                let digits: String = chars[start..j].iter().collect();
                let k: usize = digits.parse().map_err(|_| err(l0, c0, "index too large".into()))?;
                if k == 0 {
                    return Err(err(l0, c0, format!("indices start at 1, found {c}0")));
                }
                push(&mut out, if c == 'x' { Tok::X(k - 1) } else { Tok::Y(k - 1) });
                col += j - i;
                i = j;
                continue;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                push(&mut out, Tok::Arrow);
                i += 2;
                col += 2;
                continue;
            }
            '+' | '-' | '*' | '/' | '^' | '[' | ']' | '(' | ')' | ',' => push(&mut out, Tok::Sym(c)),
            _ => return Err(err(l0, c0, format!("unexpected character '{c}'"))),
        }
        i += 1;
        col += 1;
    }
    out.push(Token { tok: Tok::End, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    n: usize,
    field: Field,
}

impl Parser {
    fn new(src: &str, n: usize, field: Field) -> Result<Parser> {
        crate::magnus::check_n(n)?;
        Ok(Parser { toks: lex(src)?, pos: 0, n, field })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn error_here(&self, message: impl Into<String>) -> Error {
        let t = &self.toks[self.pos];
        let message = message.into();
        let message = if t.tok == Tok::End { format!("{message} at end of input") } else { message };
        Error::Parse { line: t.line, column: t.column, message }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error_here(format!("expected '{c}'")))
        }
    }

    fn skip_separators(&mut self) {
        while *self.peek() == Tok::Sep {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_separators();
        *self.peek() == Tok::End
    }

    fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error_here("unexpected trailing input"))
        }
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k >= self.n {
            return Err(Error::IndexOutOfRange { index: k + 1, n: self.n });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        loop {
            let sign = if self.eat('+') {
                false
            } else if self.eat('-') {
                true
            } else {
                return Ok(acc);
            };
            let at = self.pos;
            let rhs = self.term()?;
            acc = self.add(acc, rhs, sign, at)?;
        }
    }

    fn add(&self, a: Value, b: Value, subtract: bool, at: usize) -> Result<Value> {
        let b = if subtract { self.negate(b) } else { b };
        Ok(match (a, b) {
            (Value::Poly(p), Value::Poly(q)) => Value::Poly(&p + &q),
            (Value::Element(u), Value::Element(v)) => Value::Element(&u + &v),
            (Value::Poly(p), Value::Element(v)) | (Value::Element(v), Value::Poly(p)) if p.is_zero() => Value::Element(v),
            _ => {
                let t = &self.toks[at];
                return Err(Error::Parse {
                    line: t.line,
                    column: t.column,
                    message: "cannot add a polynomial to an element of M_n".into(),
                });
            }
        })
    }

    fn negate(&self, v: Value) -> Value {
        match v {
            Value::Poly(p) => Value::Poly(-&p),
            Value::Element(e) => Value::Element(-&e),
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        loop {
            let at = self.pos;
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = self.mul(acc, rhs, at)?;
            } else if self.eat('/') {
                let rhs = self.unary()?;
                acc = self.div(acc, rhs, at)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn error_at(&self, at: usize, message: impl Into<String>) -> Error {
        let t = &self.toks[at];
        Error::Parse { line: t.line, column: t.column, message: message.into() }
    }

    fn mul(&self, a: Value, b: Value, at: usize) -> Result<Value> {
        match (a, b) {
            (Value::Poly(p), Value::Poly(q)) => Ok(Value::Poly(&p * &q)),
            (Value::Poly(p), Value::Element(e)) | (Value::Element(e), Value::Poly(p)) => {
                if p.is_constant() {
                    return Ok(Value::Element(e.scale(&p.constant_term())));
                }
                e.module_scale(&p).map(Value::Element).map_err(|_| {
                    self.error_at(at, "only commutator elements can be multiplied by a polynomial")
                })
            }
            (Value::Element(_), Value::Element(_)) => {
                Err(self.error_at(at, "product of two elements; use [u,v] for the bracket"))
            }
        }
    }

    fn div(&self, a: Value, b: Value, at: usize) -> Result<Value> {
        let c = match b {
            Value::Poly(q) if q.is_constant() && !q.is_zero() => q.constant_term(),
            Value::Poly(q) if q.is_zero() => return Err(self.error_at(at, "division by zero")),
            _ => return Err(self.error_at(at, "can only divide by a nonzero constant")),
        };
        let inv = c.inv().expect("nonzero constant");
        Ok(match a {
            Value::Poly(p) => Value::Poly(p.scale(&inv)),
            Value::Element(e) => Value::Element(e.scale(&inv)),
        })
    }

    fn unary(&mut self) -> Result<Value> {
        if self.eat('-') {
            let v = self.unary()?;
            return Ok(self.negate(v));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.pos;
        let e = match self.bump() {
            Tok::Num(k) => u32::try_from(k).map_err(|_| self.error_at(at, "exponent too large"))?,
            _ => return Err(self.error_at(at, "expected an integer exponent")),
        };
        match base {
            Value::Poly(p) => Ok(Value::Poly(p.pow(e))),
            Value::Element(_) => Err(self.error_at(at, "elements of M_n cannot be raised to powers")),
        }
    }

    fn atom(&mut self) -> Result<Value> {
        let at = self.pos;
        match self.bump() {
            Tok::Num(k) => {
                let c = self.field.from_ratio(&k, &BigInt::from(1))?;
                Ok(Value::Poly(Poly::constant(self.n, self.field, c)))
            }
            Tok::X(k) => {
                self.check_index(k)?;
                Ok(Value::Element(MagnusElement::generator(self.n, self.field, k)))
            }
            Tok::Y(k) => {
                self.check_index(k)?;
                Ok(Value::Poly(Poly::var(self.n, self.field, k)))
            }
            Tok::Sym('[') => {
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                match (a, b) {
                    (Value::Element(u), Value::Element(v)) => Ok(Value::Element(u.bracket(&v)?)),
                    _ => Err(self.error_at(at, "brackets take two elements of M_n")),
                }
            }
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            _ => {
                self.pos = at;
                Err(self.error_here("expected a number, generator, variable, '[' or '('"))
            }
        }
    }
}

/// A polynomial or an element, whichever the text denotes.
pub fn parse_value(src: &str, n: usize, field: Field) -> Result<Value> {
    let mut p = Parser::new(src, n, field)?;
    p.skip_separators();
    let v = p.expr()?;
    p.finish()?;
    Ok(v)
}

pub fn parse_poly(src: &str, n: usize, field: Field) -> Result<Poly> {
    match parse_value(src, n, field)? {
        Value::Poly(p) => Ok(p),
        Value::Element(_) => Err(Error::Parse { line: 1, column: 1, message: "expected a polynomial in y1..yn".into() }),
    }
}

/// An element of `M_n`; `0` is accepted, other constants are not.
pub fn parse_element(src: &str, n: usize, field: Field) -> Result<MagnusElement> {
    match parse_value(src, n, field)? {
        Value::Element(e) => Ok(e),
        Value::Poly(p) if p.is_zero() => Ok(MagnusElement::zero(n, field)),
        Value::Poly(_) => {
            Err(Error::Parse { line: 1, column: 1, message: "expected an element of M_n, found a polynomial".into() })
        }
    }
}

pub fn parse_scalar(src: &str, field: Field) -> Result<Scalar> {
    let p = parse_poly(src, 2, field)?;
    if !p.is_constant() {
        return Err(Error::Parse { line: 1, column: 1, message: "expected a constant".into() });
    }
    Ok(p.constant_term())
}

/// `(p1, ..., pn)`; the parentheses are optional.
pub fn parse_column(src: &str, n: usize, field: Field) -> Result<JacobianColumn> {
    let mut p = Parser::new(src, n, field)?;
    p.skip_separators();
    let parens = p.eat('(');
    let mut entries = Vec::new();
    loop {
        let at = p.pos;
        match p.expr()? {
            Value::Poly(q) => entries.push(q),
            Value::Element(_) => return Err(p.error_at(at, "column entries are polynomials")),
        }
        if !p.eat(',') {
            break;
        }
    }
    if parens {
        p.expect(')')?;
    }
    p.finish()?;
    if entries.len() != n {
        return Err(Error::Dimension(format!("column has {} entries, expected {n}", entries.len())));
    }
    JacobianColumn::new(entries)
}

/// Lines `xi -> expr`, separated by newlines or `;`. Generators that are
/// not mentioned are fixed.
pub fn parse_endomorphism(src: &str, n: usize, field: Field) -> Result<Endomorphism> {
    let mut p = Parser::new(src, n, field)?;
    let mut images: Vec<Option<MagnusElement>> = vec![None; n];
    while !p.at_end() {
        let at = p.pos;
        let k = match p.bump() {
            Tok::X(k) => k,
            _ => {
                p.pos = at;
                return Err(p.error_here("expected 'x<k> ->'"));
            }
        };
        p.check_index(k)?;
        if *p.peek() != Tok::Arrow {
            return Err(p.error_here("expected '->'"));
        }
        p.bump();
        let image = match p.expr()? {
            Value::Element(e) => e,
            Value::Poly(q) if q.is_zero() => MagnusElement::zero(n, field),
            Value::Poly(_) => return Err(p.error_at(at, "image must be an element of M_n")),
        };
        if images[k].is_some() {
            return Err(p.error_at(at, format!("x{} assigned twice", k + 1)));
        }
        images[k] = Some(image);
        if !matches!(p.peek(), Tok::Sep | Tok::End) {
            return Err(p.error_here("expected a newline or ';'"));
        }
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(k, img)| img.unwrap_or_else(|| MagnusElement::generator(n, field, k)))
        .collect();
    Endomorphism::from_images(images)
}
