//! Tiny expression reader for polynomial literals such as `-1/4*eps^4*u + t`.

use std::collections::BTreeSet;

use super::poly::SparsePoly;
use super::scalar::Field;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(chars[start..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected character '{c}'"));
        }
    }
    Ok(out)
}

struct Parser<'a, T: Field> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a BTreeSet<String>,
    _t: std::marker::PhantomData<T>,
}

impl<'a, T: Field> Parser<'a, T> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<SparsePoly<T>, String> {
        let mut acc = if self.eat('-') {
            -self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<SparsePoly<T>, String> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc * self.power()?;
            } else if self.eat('/') {
                let d = self.power()?;
                let c = d.as_constant().ok_or("division by a non-constant")?;
                acc = acc.div_scalar(&c).map_err(|_| "division by zero".to_string())?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<SparsePoly<T>, String> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.parse().map_err(|_| format!("bad exponent '{n}'"))?;
                    Ok(base.pow(e))
                }
                _ => Err("exponent must be a nonnegative integer".into()),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<SparsePoly<T>, String> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(SparsePoly::constant(decimal::<T>(&n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if !self.vars.contains(&name) {
                    return Err(format!("undeclared variable '{name}'"));
                }
                Ok(SparsePoly::var(&name))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err("missing ')'".into());
                }
                Ok(inner)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of expression".into()),
        }
    }
}

fn decimal<T: Field>(digits: &str) -> T {
    let ten = T::from_u32(10).expect("10 fits the field");
    digits.chars().fold(T::zero(), |acc, d| {
        acc * ten.clone() + T::from_u32(d.to_digit(10).expect("lexer emits digits")).expect("digit fits")
    })
}

/// Parses a polynomial expression over the declared variables.
pub fn parse_poly<T: Field>(src: &str, vars: &BTreeSet<String>) -> Result<SparsePoly<T>, String> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err("empty expression".into());
    }
    let mut p = Parser { toks, pos: 0, vars, _t: std::marker::PhantomData };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input at token {}", p.pos));
    }
    Ok(out)
}
