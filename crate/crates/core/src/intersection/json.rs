use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;
use serde_json::{json, Map, Value};

use crate::algebra::{Monomial, J};
use crate::error::{Diagnostic, Error};
use crate::json::{monomial_json, opt_scalar_json, ptr, scalar_json, Reader};

use super::class::{Divisor, ZeroPattern};
use super::datum::{Exceptional, FibrationDatum, Flags, Roles, TestConfigDatum};
use super::table::IntersectionTable;

/// Parses and validates a datum file. Either a loadable datum or the full
/// list of problems found.
pub fn load_datum(bytes: &[u8]) -> Result<TestConfigDatum, Error> {
    let v: Value = serde_json::from_slice(bytes)
        .map_err(|e| Error::schema("", format!("invalid JSON: {e}")))?;
    datum_from_value(&v).map_err(Error::Schema)
}

/// Diagnostics for a datum file; empty iff it loads.
pub fn validate_datum(bytes: &[u8]) -> Vec<Diagnostic> {
    match load_datum(bytes) {
        Ok(_) => Vec::new(),
        Err(Error::Schema(d)) => d,
        Err(e) => vec![Diagnostic { pointer: String::new(), message: e.to_string() }],
    }
}

pub fn datum_from_value(v: &Value) -> Result<TestConfigDatum, Vec<Diagnostic>> {
    let mut r = Reader::default();
    let Some(root) = r.object(v, "") else { return Err(r.diags) };

    let n = r.field(root, "n", "").and_then(|x| r.uint(x, "/n"));
    let m = r.field(root, "m", "").and_then(|x| r.uint(x, "/m"));
    let total = r.field(root, "total_degree", "").and_then(|x| r.uint(x, "/total_degree"));

    let mut classes: Vec<String> = Vec::new();
    if let Some(arr) = r.field(root, "classes", "").and_then(|x| r.array(x, "/classes")) {
        for (i, c) in arr.iter().enumerate() {
            let at = ptr("/classes", i);
            if let Some(s) = r.string(c, &at) {
                if s.is_empty() {
                    r.fail(&at, "class name must be nonempty");
                } else if classes.iter().any(|k| k == s) {
                    r.fail(&at, format!("duplicate class '{s}'"));
                } else {
                    classes.push(s.to_string());
                }
            }
        }
    }
    let class_set: BTreeSet<String> = classes.iter().cloned().collect();

    let mut vars: BTreeSet<String> = BTreeSet::new();
    if let Some(arr) = r.field(root, "variables", "").and_then(|x| r.array(x, "/variables")) {
        for (i, c) in arr.iter().enumerate() {
            let at = ptr("/variables", i);
            if let Some(s) = r.string(c, &at) {
                let ident = s.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                    && s.chars().all(|c| c.is_alphanumeric() || c == '_');
                if s == J {
                    r.fail(&at, "'j' is reserved for the twist parameter");
                } else if !ident {
                    r.fail(&at, format!("'{s}' is not a valid variable name"));
                } else if !vars.insert(s.to_string()) {
                    r.fail(&at, format!("duplicate variable '{s}'"));
                }
            }
        }
    }

    if let (Some(n), Some(m), Some(t)) = (n, m, total) {
        if t != n + m + 1 {
            r.fail("/total_degree", format!("total_degree {t} must equal n + m + 1 = {}", n + m + 1));
        }
    }
    let total = total.unwrap_or(0) as u32;
    let mut table = IntersectionTable::new(classes.clone(), total);

    if let Some(arr) = r.field(root, "products", "").and_then(|x| r.array(x, "/products")) {
        let mut seen: BTreeMap<Monomial, usize> = BTreeMap::new();
        for (i, row) in arr.iter().enumerate() {
            let at = ptr("/products", i);
            let Some(o) = r.object(row, &at) else { continue };
            let mono = r.field(o, "exponents", &at).and_then(|e| {
                r.exponents(e, &ptr(&at, "exponents"), |c| class_set.contains(c), "class")
            });
            let value = r.field(o, "value", &at).and_then(|x| r.poly(x, &vars, &ptr(&at, "value")));
            let Some(mono) = mono else { continue };
            if mono.degree() != total {
                r.fail(
                    &ptr(&at, "exponents"),
                    format!("monomial {mono} has degree {}, expected total_degree {total}", mono.degree()),
                );
                continue;
            }
            if let Some(first) = seen.insert(mono.clone(), i) {
                r.fail(&ptr(&at, "exponents"), format!("monomial {mono} already given at /products/{first}"));
                continue;
            }
            if let Some(value) = value {
                table.insert(mono, value).expect("checked above");
            }
        }
    }

    if let Some(v) = root.get("zero_default") {
        if let Some(arr) = r.array(v, "/zero_default") {
            for (i, p) in arr.iter().enumerate() {
                let at = ptr("/zero_default", i);
                match p {
                    Value::String(s) if s == "*" => table.add_zero_pattern(ZeroPattern::All),
                    Value::Object(_) => {
                        if let Some(m) = r.exponents(p, &at, |c| class_set.contains(c), "class") {
                            let req = m.iter().map(|(c, e)| (c.to_string(), e)).collect();
                            table.add_zero_pattern(ZeroPattern::AtLeast(req));
                        }
                    }
                    _ => r.fail(&at, "zero pattern must be \"*\" or {class: min_exponent}"),
                }
            }
        }
    }

    let mut exceptionals = Vec::new();
    if let Some(v) = root.get("exceptionals") {
        if let Some(arr) = r.array(v, "/exceptionals") {
            for (i, e) in arr.iter().enumerate() {
                let at = ptr("/exceptionals", i);
                let Some(o) = r.object(e, &at) else { continue };
                let class = r.field(o, "class", &at).and_then(|x| r.string(x, &ptr(&at, "class")));
                if let Some(c) = class {
                    if !class_set.contains(c) {
                        r.fail(&ptr(&at, "class"), format!("unknown class '{c}'"));
                    }
                }
                let b = match o.get("b") {
                    None => Some(1),
                    Some(x) => r.uint(x, &ptr(&at, "b")),
                };
                if b == Some(0) {
                    r.fail(&ptr(&at, "b"), "multiplicity must be positive");
                }
                let a = r.field(o, "A", &at).and_then(|x| r.scalar(x, &ptr(&at, "A")));
                if let (Some(class), Some(b), Some(a)) = (class, b, a) {
                    exceptionals.push(Exceptional { class: class.to_string(), b: b as u32, a });
                }
            }
        }
    }

    let combo = |r: &mut Reader, v: &Value, at: &str| -> Option<Divisor> {
        match v {
            Value::String(s) => {
                if class_set.contains(s) {
                    Some(Divisor::class(s))
                } else {
                    r.fail(at, format!("unknown class '{s}'"));
                    None
                }
            }
            Value::Object(o) => {
                let mut d = Divisor::zero();
                let mut ok = true;
                for (c, coeff) in o {
                    let cp = ptr(at, c);
                    if !class_set.contains(c) {
                        r.fail(&cp, format!("unknown class '{c}'"));
                        ok = false;
                        continue;
                    }
                    match r.poly(coeff, &vars, &cp) {
                        Some(p) => d = d.plus(c, p),
                        None => ok = false,
                    }
                }
                ok.then_some(d)
            }
            _ => {
                r.fail(at, "expected a class name or {class: coefficient}");
                None
            }
        }
    };

    let mut roles = None;
    if let Some(ro) = r.field(root, "roles", "").and_then(|x| r.object(x, "/roles")) {
        let get = |r: &mut Reader, key: &str, required: bool| -> Option<Option<Divisor>> {
            match ro.get(key) {
                Some(v) => combo(r, v, &ptr("/roles", key)).map(Some),
                None if required => {
                    r.fail(&ptr("/roles", key), "missing required role");
                    None
                }
                None => Some(None),
            }
        };
        let pol = get(&mut r, "polarization", true);
        let base = get(&mut r, "base_pullback", true);
        let klog = get(&mut r, "klog", true);
        let twist = get(&mut r, "twist", false);
        let kpull = get(&mut r, "kpull", false);
        let excess = get(&mut r, "excess", false);
        if let (Some(Some(p)), Some(Some(b)), Some(k), Some(t), Some(kp), Some(ex)) =
            (pol, base, klog, twist, kpull, excess)
        {
            roles = Some(Roles { polarization: p, base_pullback: b, klog: k, twist: t, kpull: kp, excess: ex });
        }
    }
    if let (Some(n), Some(ro)) = (n, roles.as_ref()) {
        if n > 0 && ro.twist.is_none() {
            r.fail("/roles/twist", "a twist class is required when n > 0");
        }
    }

    let mut flags = Flags::default();
    if let Some(v) = root.get("flags") {
        if let Some(o) = r.object(v, "/flags") {
            for (k, x) in o {
                let at = ptr("/flags", k);
                match k.as_str() {
                    "normalized" => flags.normalized = r.boolean(x, &at).unwrap_or(false),
                    "trivial" => flags.trivial = r.boolean(x, &at).unwrap_or(false),
                    _ => r.fail(&at, format!("unknown flag '{k}'")),
                }
            }
        }
    }

    let fibration = match (n, m, r.field(root, "fibration", "")) {
        (Some(n), Some(m), Some(f)) => fibration_from_value(&mut r, f, "/fibration", n as usize, m as usize),
        _ => None,
    };

    match (n, m, roles, fibration) {
        (Some(n), Some(m), Some(roles), Some(fibration)) if r.diags.is_empty() => Ok(TestConfigDatum {
            n: n as usize,
            m: m as usize,
            variables: vars,
            table,
            roles,
            exceptionals,
            flags,
            fibration,
        }),
        _ => {
            if r.diags.is_empty() {
                r.fail("", "datum incomplete");
            }
            Err(r.diags)
        }
    }
}

fn fibration_from_value(r: &mut Reader, v: &Value, at: &str, n: usize, m: usize) -> Option<FibrationDatum> {
    let o = r.object(v, at)?;
    let list = |r: &mut Reader, key: &str, len: usize, positive: bool| -> Option<Vec<Option<crate::algebra::Scalar>>> {
        let kp = ptr(at, key);
        let arr = r.field(o, key, at).and_then(|x| r.array(x, &kp))?;
        if arr.len() != len {
            r.fail(&kp, format!("expected {len} entries, got {}", arr.len()));
            return None;
        }
        let mut out = Vec::new();
        let mut ok = true;
        for (i, x) in arr.iter().enumerate() {
            let ip = ptr(&kp, i);
            if x.is_null() {
                out.push(None);
                continue;
            }
            match r.scalar(x, &ip) {
                Some(s) if positive && !s.is_positive() => {
                    r.fail(&ip, format!("volume must be positive, got {s}"));
                    ok = false;
                }
                Some(s) => out.push(Some(s)),
                None => ok = false,
            }
        }
        ok.then_some(out)
    };
    let mixed = list(r, "mixed_volumes", n + 1, true);
    let canon_len = if n + m == 0 { 0 } else { n.min(n + m - 1) + 1 };
    let canon = list(r, "canonical_products", canon_len, false);
    let mut components = Vec::new();
    if let Some(cv) = o.get("components") {
        let cp = ptr(at, "components");
        if let Some(arr) = r.array(cv, &cp) {
            for (i, c) in arr.iter().enumerate() {
                if let Some(f) = fibration_from_value(r, c, &ptr(&cp, i), n, m) {
                    components.push(f);
                }
            }
        }
    }
    Some(FibrationDatum { n, m, mixed_volumes: mixed?, canonical_products: canon?, components })
}

fn divisor_json(d: &Divisor) -> Value {
    let o: Map<String, Value> = d.parts().map(|(c, p)| (c.clone(), p.to_json())).collect();
    Value::Object(o)
}

fn fibration_json(f: &FibrationDatum) -> Value {
    let mut v = json!({
        "mixed_volumes": f.mixed_volumes.iter().map(opt_scalar_json).collect::<Vec<_>>(),
        "canonical_products": f.canonical_products.iter().map(opt_scalar_json).collect::<Vec<_>>(),
    });
    if !f.components.is_empty() {
        v["components"] = Value::Array(f.components.iter().map(fibration_json).collect());
    }
    v
}

/// Inverse of [`datum_from_value`] for uncut tables.
pub fn datum_to_value(d: &TestConfigDatum) -> Value {
    let mut roles = Map::new();
    roles.insert("polarization".into(), divisor_json(&d.roles.polarization));
    roles.insert("base_pullback".into(), divisor_json(&d.roles.base_pullback));
    for (k, v) in [
        ("klog", &d.roles.klog),
        ("twist", &d.roles.twist),
        ("kpull", &d.roles.kpull),
        ("excess", &d.roles.excess),
    ] {
        if let Some(x) = v {
            roles.insert(k.into(), divisor_json(x));
        }
    }
    let zero: Vec<Value> = d
        .table
        .zero_patterns()
        .iter()
        .map(|p| match p {
            ZeroPattern::All => json!("*"),
            ZeroPattern::AtLeast(req) => {
                Value::Object(req.iter().map(|(c, e)| (c.clone(), json!(e))).collect())
            }
        })
        .collect();
    json!({
        "n": d.n,
        "m": d.m,
        "classes": d.table.classes(),
        "variables": d.variables.iter().collect::<Vec<_>>(),
        "total_degree": d.table.degree(),
        "products": d.table.entries().map(|(m, v)| json!({"exponents": monomial_json(m), "value": v.to_json()})).collect::<Vec<_>>(),
        "zero_default": zero,
        "exceptionals": d.exceptionals.iter().map(|e| json!({"class": e.class, "b": e.b, "A": scalar_json(&e.a)})).collect::<Vec<_>>(),
        "roles": Value::Object(roles),
        "flags": {"normalized": d.flags.normalized, "trivial": d.flags.trivial},
        "fibration": fibration_json(&d.fibration),
    })
}
