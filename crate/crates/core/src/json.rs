//! Shared JSON reading helpers. Every failure is recorded as a diagnostic
//! with a JSON pointer instead of aborting at the first problem.

use std::collections::BTreeSet;

use serde_json::{json, Map, Value};

use crate::algebra::{parse_poly, parse_scalar, Monomial, Scalar, SparsePoly};
use crate::error::Diagnostic;

pub type Poly = SparsePoly<Scalar>;

#[derive(Default)]
pub struct Reader {
    pub diags: Vec<Diagnostic>,
}

pub fn ptr(base: &str, key: impl std::fmt::Display) -> String {
    let k = key.to_string().replace('~', "~0").replace('/', "~1");
    format!("{base}/{k}")
}

impl Reader {
    pub fn fail(&mut self, pointer: &str, message: impl Into<String>) {
        self.diags.push(Diagnostic { pointer: pointer.to_string(), message: message.into() });
    }

    pub fn object<'a>(&mut self, v: &'a Value, at: &str) -> Option<&'a Map<String, Value>> {
        match v.as_object() {
            Some(o) => Some(o),
            None => {
                self.fail(at, "expected an object");
                None
            }
        }
    }

    pub fn array<'a>(&mut self, v: &'a Value, at: &str) -> Option<&'a Vec<Value>> {
        match v.as_array() {
            Some(a) => Some(a),
            None => {
                self.fail(at, "expected an array");
                None
            }
        }
    }

    pub fn field<'a>(&mut self, o: &'a Map<String, Value>, key: &str, at: &str) -> Option<&'a Value> {
        match o.get(key) {
            Some(v) => Some(v),
            None => {
                self.fail(&ptr(at, key), "missing required field");
                None
            }
        }
    }

    pub fn uint(&mut self, v: &Value, at: &str) -> Option<u64> {
        match v.as_u64() {
            Some(x) => Some(x),
            None => {
                self.fail(at, "expected a nonnegative integer");
                None
            }
        }
    }

    pub fn boolean(&mut self, v: &Value, at: &str) -> Option<bool> {
        match v.as_bool() {
            Some(x) => Some(x),
            None => {
                self.fail(at, "expected a boolean");
                None
            }
        }
    }

    pub fn string<'a>(&mut self, v: &'a Value, at: &str) -> Option<&'a str> {
        match v.as_str() {
            Some(x) => Some(x),
            None => {
                self.fail(at, "expected a string");
                None
            }
        }
    }

    /// `"p/q"`, `"p"` or a JSON integer.
    pub fn scalar(&mut self, v: &Value, at: &str) -> Option<Scalar> {
        let parsed = match v {
            Value::String(s) => parse_scalar(s),
            Value::Number(n) => n.as_i64().map(|i| Scalar::from_integer(i.into())),
            _ => None,
        };
        if parsed.is_none() {
            self.fail(at, format!("expected an exact rational \"p/q\", got {v}"));
        }
        parsed
    }

    /// A polynomial given as an expression string, an integer, or an array of
    /// `{exponents, coeff}` terms. Only declared variables are accepted.
    pub fn poly(&mut self, v: &Value, vars: &BTreeSet<String>, at: &str) -> Option<Poly> {
        match v {
            Value::String(s) => match parse_poly::<Scalar>(s, vars) {
                Ok(p) => Some(p),
                Err(e) => {
                    self.fail(at, e);
                    None
                }
            },
            Value::Number(_) => self.scalar(v, at).map(Poly::constant),
            Value::Array(terms) => {
                let mut out = Poly::zero();
                let mut ok = true;
                for (i, t) in terms.iter().enumerate() {
                    let tp = ptr(at, i);
                    let Some(o) = self.object(t, &tp) else {
                        ok = false;
                        continue;
                    };
                    let coeff = self.field(o, "coeff", &tp).and_then(|c| self.scalar(c, &ptr(&tp, "coeff")));
                    let exps = self.field(o, "exponents", &tp).and_then(|e| {
                        let ep = ptr(&tp, "exponents");
                        self.exponents(e, &ep, |name| vars.contains(name), "variable")
                    });
                    match (coeff, exps) {
                        (Some(c), Some(m)) => out = out + Poly::term(m, c),
                        _ => ok = false,
                    }
                }
                ok.then_some(out)
            }
            _ => {
                self.fail(at, "expected a polynomial (string, integer, or term array)");
                None
            }
        }
    }

    /// `{name: exponent}` with every name accepted by `known`.
    pub fn exponents(
        &mut self,
        v: &Value,
        at: &str,
        known: impl Fn(&str) -> bool,
        what: &str,
    ) -> Option<Monomial> {
        let o = self.object(v, at)?;
        let mut pairs = Vec::new();
        let mut ok = true;
        for (name, e) in o {
            let ep = ptr(at, name);
            if !known(name) {
                self.fail(&ep, format!("undeclared {what} '{name}'"));
                ok = false;
                continue;
            }
            match e.as_u64().filter(|x| *x <= u32::MAX as u64) {
                Some(x) => pairs.push((name.as_str(), x as u32)),
                None => {
                    self.fail(&ep, "exponent must be a nonnegative integer");
                    ok = false;
                }
            }
        }
        ok.then(|| Monomial::from_pairs(pairs))
    }
}

pub fn monomial_json(m: &Monomial) -> Value {
    let o: Map<String, Value> = m.iter().map(|(v, e)| (v.to_string(), json!(e))).collect();
    Value::Object(o)
}

pub fn scalar_json(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

pub fn opt_scalar_json(s: &Option<Scalar>) -> Value {
    s.as_ref().map(scalar_json).unwrap_or(Value::Null)
}
