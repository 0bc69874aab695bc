//! Command-line driver. `run` is pure in its inputs (the environment is read
//! by the binary and passed in), so identical inputs give identical bytes.

use std::path::PathBuf;

use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use crate::algebra::{approx_scalar, int, parse_scalar, Scalar, EPS};
use crate::degenerations::{
    build_test_config, entropy_series, fano_fiber_type_obstruction, fano_leading, heuristic_level, i_j_series,
    lc_obstruction, load_catalog, validate_catalog, NormalConeDatum, DEFAULT_TRUNCATION,
};
use crate::error::{Diagnostic, Error};
use crate::functionals::{e_na, h_na, i_na, j_na, report, FunctionalReport};
use crate::gallery::{self, ExampleKind};
use crate::intersection::{load_datum, validate_datum, Poly, TestConfigDatum};
use crate::winv::{
    mabuchi_rational_fn, verdict, w_k_via_fano_identity, w_table, w_table_df, Assumptions, StabilityVerdict,
};

pub const TRUNCATION_ENV: &str = "FIBRK_TRUNCATION";

pub const EXIT_OK: i32 = 0;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Functionals,
    Wtable,
    Verdict,
    Degenerate,
    Examples,
    Validate,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    /// Input file, or the example name for `examples`.
    pub input: Option<PathBuf>,
    pub list: bool,
    pub format: Format,
    pub check: bool,
    pub truncation: Option<u32>,
    /// Value of the truncation environment variable, if set.
    pub env_truncation: Option<String>,
    pub assume: Vec<String>,
    pub lambda: Option<String>,
    pub level: Option<usize>,
    pub approx: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            input: None,
            list: false,
            format: Format::Json,
            check: false,
            truncation: None,
            env_truncation: None,
            assume: Vec::new(),
            lambda: None,
            level: None,
            approx: false,
        }
    }

    pub fn input(mut self, p: impl Into<PathBuf>) -> Self {
        self.input = Some(p.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Schema(Vec<Diagnostic>),
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Schema(d) => Failure::Schema(d),
            e => Failure::Compute(e),
        }
    }
}

pub fn run(cfg: &RunConfig) -> Outcome {
    match dispatch(cfg) {
        Ok(v) => Outcome { code: EXIT_OK, stdout: render(&v, cfg.format), stderr: String::new() },
        Err(Failure::Schema(diags)) => {
            let lines: Vec<String> = diags.iter().map(|d| format!("schema error at {d}")).collect();
            Outcome { code: EXIT_SCHEMA, stdout: String::new(), stderr: lines.join("\n") + "\n" }
        }
        Err(Failure::Usage(msg)) => Outcome { code: EXIT_SCHEMA, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Compute(e)) => {
            Outcome { code: EXIT_COMPUTE, stdout: String::new(), stderr: format!("computation error: {e}\n") }
        }
    }
}

fn dispatch(cfg: &RunConfig) -> Result<Value, Failure> {
    let out = Out { approx: cfg.approx };
    let assume = Assumptions::parse(&cfg.assume).map_err(Failure::Usage)?;
    match cfg.command {
        Command::Functionals => {
            let d = load_datum(&read_input(cfg)?)?;
            functionals_cmd(&out, &d, cfg.check)
        }
        Command::Wtable => {
            let d = load_datum(&read_input(cfg)?)?;
            Ok(out.wtable(&d)?)
        }
        Command::Verdict => {
            let d = load_datum(&read_input(cfg)?)?;
            let w = w_table(&d)?;
            Ok(out.verdict(&verdict(&w, d.flags.trivial, &assume), &assume))
        }
        Command::Degenerate => {
            let cat = load_catalog(&read_input(cfg)?)?;
            degenerate_cmd(&out, cfg, cat, &assume)
        }
        Command::Validate => {
            let bytes = read_input(cfg)?;
            let diags = if is_catalog(&bytes) { validate_catalog(&bytes) } else { validate_datum(&bytes) };
            if diags.is_empty() {
                Ok(json!({ "diagnostics": [], "valid": true }))
            } else {
                Err(Failure::Schema(diags))
            }
        }
        Command::Examples => examples_cmd(&out, cfg, &assume),
    }
}

fn read_input(cfg: &RunConfig) -> Result<Vec<u8>, Failure> {
    let path = cfg.input.as_ref().ok_or_else(|| Failure::Usage("missing input file".into()))?;
    std::fs::read(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn is_catalog(bytes: &[u8]) -> bool {
    serde_json::from_slice::<Value>(bytes).map(|v| v.get("components").is_some()).unwrap_or(false)
}

fn functionals_cmd(out: &Out, d: &TestConfigDatum, check: bool) -> Result<Value, Failure> {
    let r = report(d)?;
    if check {
        if let Some((name, _)) = r.identities_checked.iter().find(|(_, ok)| !ok) {
            return Err(Failure::Compute(Error::PreconditionUnverifiable(format!("identity fails: {name}"))));
        }
    }
    Ok(out.functionals(&r))
}

fn parse_lambda(s: &str) -> Result<Scalar, Failure> {
    match parse_scalar(s) {
        Some(l) if l.is_positive() => Ok(l),
        _ => Err(Failure::Usage(format!("--lambda must be a positive rational, got '{s}'"))),
    }
}

fn resolve_truncation(cfg: &RunConfig, file: Option<u32>) -> Result<(u32, &'static str), Failure> {
    if let Some(t) = cfg.truncation {
        return Ok((t, "flag"));
    }
    if let Some(t) = file {
        return Ok((t, "file"));
    }
    if let Some(s) = &cfg.env_truncation {
        let t = s
            .trim()
            .parse::<u32>()
            .map_err(|_| Failure::Usage(format!("{TRUNCATION_ENV} must be a nonnegative integer, got '{s}'")))?;
        return Ok((t, "environment"));
    }
    Ok((DEFAULT_TRUNCATION, "default"))
}

fn degenerate_cmd(
    out: &Out,
    cfg: &RunConfig,
    mut cat: NormalConeDatum,
    assume: &Assumptions,
) -> Result<Value, Failure> {
    let (order, source) = resolve_truncation(cfg, cat.truncation)?;
    cat.truncation = Some(order);
    if let Some(l) = &cfg.lambda {
        cat.lambda = Some(parse_lambda(l)?);
    }
    let n = cat.n;
    let series = i_j_series(&cat)?;
    let entropy = entropy_series(&cat)?;
    let fano_combo = (&series.i_na - &series.j_na.scale(&int(n as i64 + 1))).scale(&cat.volume);

    let mut o = Map::new();
    o.insert("N".into(), json!(cat.big_n));
    o.insert("n".into(), json!(n));
    o.insert("truncation".into(), json!({ "order": order, "source": source }));
    o.insert("min_codim".into(), json!(cat.min_codim()));
    o.insert(
        "variables".into(),
        json!(cat.variables().into_iter().filter(|v| v != EPS).collect::<Vec<_>>()),
    );
    o.insert(
        "series".into(),
        json!({
            "I": out.p(&series.i_na),
            "J": out.p(&series.j_na),
            "H": out.p(&entropy),
            "V(I-(n+1)J)": out.p(&fano_combo),
        }),
    );
    o.insert(
        "fano_leading".into(),
        match fano_leading(&cat, n) {
            Some(f) => json!({ "order": f.order, "coefficient": out.s(&f.coefficient) }),
            None => Value::Null,
        },
    );

    let (level, level_source) = match (cfg.level, heuristic_level(&cat)) {
        (Some(k), _) => (Some(k), "flag"),
        (None, Some(k)) => (Some(k), "heuristic"),
        (None, None) => (None, "none"),
    };
    let lc = match lc_obstruction(&cat, level) {
        Ok(v) => {
            let mut x = out.verdict(&v, &Assumptions::default());
            x["level_source"] = json!(level_source);
            x
        }
        Err(e @ Error::PreconditionUnverifiable(_)) => json!({ "unverifiable": e.to_string() }),
        Err(e) => return Err(e.into()),
    };
    o.insert("lc_obstruction".into(), lc);
    let fano = match &cat.lambda {
        Some(l) => match fano_fiber_type_obstruction(&cat, n, l) {
            Ok(v) => out.verdict(&v, &Assumptions::default()),
            Err(e @ Error::PreconditionUnverifiable(_)) => json!({ "unverifiable": e.to_string() }),
            Err(e) => return Err(e.into()),
        },
        None => json!({ "unverifiable": "lambda not given" }),
    };
    o.insert("fano_obstruction".into(), fano);

    let built = build_test_config(&cat)?;
    let mut b = Map::new();
    b.insert("E".into(), out.p(&e_na(&built)?));
    b.insert("I".into(), out.p(&i_na(&built)?));
    b.insert("J".into(), out.p(&j_na(&built)?));
    b.insert("H".into(), out.p(&h_na(&built)?));
    if cat.lambda.is_some() {
        b.insert("functionals".into(), out.functionals(&report(&built)?));
        b.insert("wtable".into(), out.wtable(&built)?);
        let w = w_table(&built)?;
        b.insert("verdict".into(), out.verdict(&verdict(&w, built.flags.trivial, assume), assume));
    }
    o.insert("builder".into(), Value::Object(b));
    Ok(Value::Object(o))
}

fn examples_cmd(out: &Out, cfg: &RunConfig, user: &Assumptions) -> Result<Value, Failure> {
    let name = cfg.input.as_ref().map(|p| p.to_string_lossy().into_owned());
    if cfg.list || name.is_none() {
        let list: Vec<Value> = gallery::EXAMPLES
            .iter()
            .map(|e| json!({ "name": e.name, "description": e.description }))
            .collect();
        return Ok(json!({ "examples": list }));
    }
    let name = name.unwrap_or_default();
    let ex = gallery::find(&name).ok_or_else(|| Failure::Usage(format!("unknown example '{name}'")))?;
    let bundled = Assumptions::parse(ex.assume).map_err(Failure::Usage)?;
    let assume = bundled.merged(user);
    let mut o = Map::new();
    o.insert("example".into(), json!(ex.name));
    o.insert("description".into(), json!(ex.description));
    match ex.kind {
        ExampleKind::Catalog => {
            let cat = load_catalog(ex.source.as_bytes())?;
            o.insert("degenerate".into(), degenerate_cmd(out, cfg, cat, &assume)?);
        }
        ExampleKind::Datum => {
            let d = load_datum(ex.source.as_bytes())?;
            let r = report(&d)?;
            o.insert("functionals".into(), out.functionals(&r));
            o.insert("wtable".into(), out.wtable(&d)?);
            let w = w_table(&d)?;
            o.insert("verdict".into(), out.verdict(&verdict(&w, d.flags.trivial, &assume), &assume));
            if let Some(p) = positivity(&r.m_na) {
                o.insert("slope".into(), json!({ "M": out.p(&r.m_na), "positive_for": p }));
            }
            if let Some((k, lam)) = ex.fano_identity {
                let lam = parse_scalar(lam).expect("bundled lambda");
                let wk = w_k_via_fano_identity(&d, k, &lam)?;
                o.insert(
                    "fano_identity".into(),
                    json!({
                        "level": k,
                        "lambda": out.s(&lam),
                        "W": out.p(&wk),
                        "W_assumed": out.p(&assume.apply(&wk)),
                    }),
                );
            }
        }
    }
    Ok(Value::Object(o))
}

/// Range of small `eps > 0` on which a univariate `p = eps^k (a + b eps)` is positive.
fn positivity(p: &Poly) -> Option<String> {
    if p.is_zero() || p.variables().iter().any(|v| v != EPS) {
        return None;
    }
    let (k, _) = p.leading_in_eps().ok()?;
    let dense = p.to_dense(EPS);
    let rest: Vec<Scalar> = dense[k as usize..].iter().map(|c| c.as_constant().unwrap_or_else(Scalar::zero)).collect();
    match rest.as_slice() {
        [a] if a.is_positive() => Some("eps > 0".into()),
        [a, b] if a.is_positive() && !b.is_negative() => Some("eps > 0".into()),
        [a, b] if a.is_positive() => Some(format!("0 < eps < {}", -a.clone() / b.clone())),
        _ => None,
    }
}

struct Out {
    approx: bool,
}

impl Out {
    fn p(&self, x: &Poly) -> Value {
        if self.approx {
            json!({ "exact": x.to_string(), "approx": approx_poly(x) })
        } else {
            json!(x.to_string())
        }
    }

    fn s(&self, x: &Scalar) -> Value {
        if self.approx {
            json!({ "exact": x.to_string(), "approx": approx_scalar(x) })
        } else {
            json!(x.to_string())
        }
    }

    fn functionals(&self, r: &FunctionalReport) -> Value {
        let ids: Vec<Value> =
            r.identities_checked.iter().map(|(name, ok)| json!({ "identity": name, "holds": ok })).collect();
        json!({
            "E": self.p(&r.e_na),
            "I": self.p(&r.i_na),
            "J": self.p(&r.j_na),
            "H": self.p(&r.h_na),
            "JK": self.p(&r.jk_na),
            "R": self.p(&r.r_na),
            "M": self.p(&r.m_na),
            "DF": self.p(&r.df),
            "V": self.s(&r.volume),
            "S": self.s(&r.scalar_curvature),
            "identities": ids,
        })
    }

    fn wtable(&self, d: &TestConfigDatum) -> Result<Value, Error> {
        let f = mabuchi_rational_fn(d)?;
        let w = w_table(d)?;
        let df = w_table_df(d)?;
        let diff: Vec<Value> = df.w.iter().zip(&w.w).map(|(a, b)| self.p(&(a - b))).collect();
        Ok(json!({
            "n": w.n,
            "W": w.w.iter().map(|x| self.p(x)).collect::<Vec<_>>(),
            "quotient": self.p(&w.quotient),
            "remainder": { "num": self.p(w.remainder.num()), "den": self.p(w.remainder.den()) },
            "recomposes": w.recomposes(&f),
            "DF_W": df.w.iter().map(|x| self.p(x)).collect::<Vec<_>>(),
            "DF_minus_M": diff,
        }))
    }

    fn verdict(&self, v: &StabilityVerdict, assume: &Assumptions) -> Value {
        let levels: Vec<Value> = v
            .levels
            .iter()
            .enumerate()
            .map(|(i, a)| {
                json!({
                    "index": i,
                    "value": self.p(&a.value),
                    "sign": a.sign.map(|s| s.to_string()).unwrap_or_else(|| "undetermined".into()),
                    "eps_order": a.eps_order,
                    "leading": self.p(&a.leading),
                })
            })
            .collect();
        json!({
            "verdict": v.kind.label(),
            "kind": v.kind.tag(),
            "level": v.kind.level(),
            "assumptions": assume.describe(),
            "levels": levels,
            "notes": v.notes,
        })
    }
}

fn approx_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = p
        .terms()
        .map(|(m, c)| if m.is_one() { approx_scalar(c) } else { format!("{}*{m}", approx_scalar(c)) })
        .collect();
    parts.join(" + ")
}

/// JSON with sorted keys, or `path: value` lines.
pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("serializable") + "\n",
        Format::Text => {
            let mut lines = Vec::new();
            flatten(v, "", &mut lines);
            lines.join("\n") + "\n"
        }
    }
}

fn flatten(v: &Value, prefix: &str, out: &mut Vec<String>) {
    match v {
        Value::Object(o) if !o.is_empty() => {
            for (k, x) in o {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(x, &p, out);
            }
        }
        Value::Array(a) if !a.is_empty() => {
            for (i, x) in a.iter().enumerate() {
                flatten(x, &format!("{prefix}[{i}]"), out);
            }
        }
        Value::String(s) => out.push(format!("{prefix}: {s}")),
        other => out.push(format!("{prefix}: {other}")),
    }
}
