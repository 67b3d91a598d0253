//! JSON formats for algebras, modules, morphisms, complexes, fact bases,
//! derivations and verification reports. Field elements are written as
//! their canonical representatives in `0..p`.

use std::sync::Arc;

use pladder_core::algcore::{AModule, ModMap, PresentedAlgebra, CATALOG};
use pladder_core::exactlin::{Field, Matrix, PrimeField};
use pladder_core::laddercalc::{
    Atom, CategoryFlag, Derivation, FactBase, FunctorFlag, Height, LadderReport, Row, Step, TtfSequence,
};
use pladder_core::perfcx::{LamComplex, PiComplex};
use pladder_core::pimod::{PiCategory, PiModule, PiMorphism};
use pladder_core::category::ModuleCategory;
use pladder_core::perfcx::Complex;
use pladder_core::report::Report;
use serde_json::{json, Map, Value};

/// Version tag carried by every report.
pub const REPORT_SCHEMA: &str = "ladder-report/1";

/// Malformed or inconsistent input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

impl From<pladder_core::Error> for InputError {
    fn from(e: pladder_core::Error) -> Self {
        InputError(e.to_string())
    }
}

impl From<serde_json::Error> for InputError {
    fn from(e: serde_json::Error) -> Self {
        InputError(format!("JSON: {e}"))
    }
}

pub type Res<T> = Result<T, InputError>;

fn err<T>(msg: impl Into<String>) -> Res<T> {
    Err(InputError(msg.into()))
}

fn field_of<'a>(v: &'a Value, key: &str) -> Res<&'a Value> {
    v.get(key).ok_or_else(|| InputError(format!("missing field `{key}`")))
}

fn as_usize(v: &Value, what: &str) -> Res<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| InputError(format!("`{what}` must be a non-negative integer")))
}

fn as_i64(v: &Value, what: &str) -> Res<i64> {
    v.as_i64().ok_or_else(|| InputError(format!("`{what}` must be an integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Res<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| InputError(format!("`{what}` must be an array")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Res<&'a str> {
    v.as_str().ok_or_else(|| InputError(format!("`{what}` must be a string")))
}

fn check_schema(v: &Value, expected: &str) -> Res<()> {
    match v.get("schema").and_then(Value::as_str) {
        None => Ok(()),
        Some(s) if s == expected => Ok(()),
        Some(s) => err(format!("expected schema {expected}, found {s}")),
    }
}

fn check_field(v: &Value, f: &PrimeField) -> Res<()> {
    if let Some(p) = v.get("field") {
        let p = as_usize(p, "field")? as u64;
        if p != f.modulus() {
            return err(format!("file is over GF({p}) but the run uses GF({})", f.modulus()));
        }
    }
    Ok(())
}

pub fn matrix_to_json(m: &Matrix<PrimeField>) -> Value {
    json!({ "rows": m.rows(), "cols": m.cols(), "data": m.data() })
}

pub fn matrix_from_json(f: &PrimeField, v: &Value) -> Res<Matrix<PrimeField>> {
    let rows = as_usize(field_of(v, "rows")?, "rows")?;
    let cols = as_usize(field_of(v, "cols")?, "cols")?;
    let data = as_array(field_of(v, "data")?, "data")?
        .iter()
        .map(|x| as_i64(x, "matrix entry").map(|x| f.from_i64(x)))
        .collect::<Res<Vec<_>>>()?;
    Ok(Matrix::from_data(f, rows, cols, data)?)
}

fn matrices_to_json(ms: &[Matrix<PrimeField>]) -> Value {
    Value::Array(ms.iter().map(matrix_to_json).collect())
}

fn matrices_from_json(f: &PrimeField, v: &Value, what: &str) -> Res<Vec<Matrix<PrimeField>>> {
    as_array(v, what)?.iter().map(|m| matrix_from_json(f, m)).collect()
}

pub fn algebra_to_json(a: &PresentedAlgebra<PrimeField>) -> Value {
    let mult: Vec<Value> = a.mult_triples().into_iter().map(|(i, j, k, c)| json!([i, j, k, c])).collect();
    json!({
        "schema": "algebra/1",
        "field": a.field().modulus(),
        "basis": a.labels(),
        "mult": mult,
        "idempotents": a.idempotents(),
    })
}

pub fn algebra_from_json(f: &PrimeField, v: &Value) -> Res<PresentedAlgebra<PrimeField>> {
    check_schema(v, "algebra/1")?;
    check_field(v, f)?;
    let basis = as_array(field_of(v, "basis")?, "basis")?
        .iter()
        .map(|s| as_str(s, "basis label").map(String::from))
        .collect::<Res<Vec<_>>>()?;
    let mut mult = Vec::new();
    for t in as_array(field_of(v, "mult")?, "mult")? {
        let t = as_array(t, "mult entry")?;
        if t.len() != 4 {
            return err("mult entries are [i, j, k, coeff]");
        }
        mult.push((
            as_usize(&t[0], "i")?,
            as_usize(&t[1], "j")?,
            as_usize(&t[2], "k")?,
            f.from_i64(as_i64(&t[3], "coeff")?),
        ));
    }
    let idem = as_array(field_of(v, "idempotents")?, "idempotents")?
        .iter()
        .map(|x| as_usize(x, "idempotent"))
        .collect::<Res<Vec<_>>>()?;
    let a = PresentedAlgebra::new(f, basis, &mult, idem)?;
    let problems = pladder_core::algcore::algebra_check(&a);
    if !problems.is_empty() {
        return err(format!("algebra fails its checks: {}", problems.join("; ")));
    }
    Ok(a)
}

/// A builtin name from the catalog or the path of an algebra file.
pub fn resolve_algebra(f: &PrimeField, src: &str) -> Res<PresentedAlgebra<PrimeField>> {
    if CATALOG.contains(&src) {
        return Ok(pladder_core::algcore::catalog(src, f)?);
    }
    let text = std::fs::read_to_string(src)
        .map_err(|e| InputError(format!("`{src}` is neither a builtin algebra ({}) nor a readable file: {e}", CATALOG.join(", "))))?;
    algebra_from_json(f, &serde_json::from_str(&text)?)
}

fn lambda_ref(lam: &PresentedAlgebra<PrimeField>, name: Option<&str>) -> Value {
    match name {
        Some(n) => Value::String(n.into()),
        None => algebra_to_json(lam),
    }
}

/// Checks that a file's `lambda` entry describes the run's base algebra.
fn check_lambda(f: &PrimeField, v: &Value, lam: &PresentedAlgebra<PrimeField>) -> Res<()> {
    let Some(l) = v.get("lambda") else { return Ok(()) };
    let theirs = match l {
        Value::String(s) => resolve_algebra(f, s)?,
        other => algebra_from_json(f, other)?,
    };
    if theirs != *lam {
        return err("the file's base algebra differs from --lambda");
    }
    Ok(())
}

fn lam_body(m: &AModule<PrimeField>) -> Value {
    json!({ "dim": m.dim(), "action": matrices_to_json(m.actions()) })
}

fn lam_from_body(lam: &Arc<PresentedAlgebra<PrimeField>>, v: &Value) -> Res<AModule<PrimeField>> {
    let f = lam.field();
    let dim = as_usize(field_of(v, "dim")?, "dim")?;
    let action = matrices_from_json(f, field_of(v, "action")?, "action")?;
    let m = AModule::new(lam, dim, action)?;
    let problems = m.check();
    if !problems.is_empty() {
        return err(format!("not a module: {}", problems.join("; ")));
    }
    Ok(m)
}

fn pi_body(m: &PiModule<PrimeField>) -> Value {
    json!({
        "n": m.n(),
        "parts": m.parts().iter().map(lam_body).collect::<Vec<_>>(),
        "f": matrices_to_json(m.fs()),
        "g": matrices_to_json(m.gs()),
    })
}

fn pi_from_body(lam: &Arc<PresentedAlgebra<PrimeField>>, n: usize, v: &Value) -> Res<PiModule<PrimeField>> {
    let f = lam.field();
    if let Some(k) = v.get("n") {
        if as_usize(k, "n")? != n {
            return err(format!("module has n = {} but the run uses n = {n}", k));
        }
    }
    let parts = as_array(field_of(v, "parts")?, "parts")?
        .iter()
        .map(|p| lam_from_body(lam, p))
        .collect::<Res<Vec<_>>>()?;
    if parts.len() != n {
        return err(format!("{} parts for n = {n}", parts.len()));
    }
    let fs = matrices_from_json(f, field_of(v, "f")?, "f")?;
    let gs = matrices_from_json(f, field_of(v, "g")?, "g")?;
    Ok(PiModule::new(lam, parts, fs, gs)?)
}

pub fn lambda_module_to_json(m: &AModule<PrimeField>, lambda_name: Option<&str>) -> Value {
    let mut v = lam_body(m);
    v["schema"] = json!("lambda-module/1");
    v["field"] = json!(m.field().modulus());
    v["lambda"] = lambda_ref(m.algebra(), lambda_name);
    v
}

pub fn pi_module_to_json(m: &PiModule<PrimeField>, lambda_name: Option<&str>) -> Value {
    let mut v = pi_body(m);
    v["schema"] = json!("pi-module/1");
    v["field"] = json!(m.field().modulus());
    v["lambda"] = lambda_ref(m.lam(), lambda_name);
    v
}

/// A module of either kind read from JSON.
#[derive(Debug, Clone)]
pub enum AnyModule {
    Lam(AModule<PrimeField>),
    Pi(PiModule<PrimeField>),
}

pub fn module_from_json(lam: &Arc<PresentedAlgebra<PrimeField>>, n: usize, v: &Value) -> Res<AnyModule> {
    let f = lam.field();
    check_field(v, f)?;
    check_lambda(f, v, lam)?;
    match v.get("schema").and_then(Value::as_str) {
        Some("lambda-module/1") => Ok(AnyModule::Lam(lam_from_body(lam, v)?)),
        Some("pi-module/1") => Ok(AnyModule::Pi(pi_from_body(lam, n, v)?)),
        Some(other) => err(format!("unexpected schema {other}")),
        None if v.get("parts").is_some() => Ok(AnyModule::Pi(pi_from_body(lam, n, v)?)),
        None => Ok(AnyModule::Lam(lam_from_body(lam, v)?)),
    }
}

pub fn pi_morphism_to_json(phi: &PiMorphism<PrimeField>) -> Value {
    json!({
        "schema": "pi-morphism/1",
        "source": pi_body(&phi.source),
        "target": pi_body(&phi.target),
        "a": matrices_to_json(&phi.comps),
    })
}

pub fn pi_morphism_from_json(lam: &Arc<PresentedAlgebra<PrimeField>>, n: usize, v: &Value) -> Res<PiMorphism<PrimeField>> {
    check_schema(v, "pi-morphism/1")?;
    let s = pi_from_body(lam, n, field_of(v, "source")?)?;
    let t = pi_from_body(lam, n, field_of(v, "target")?)?;
    let a = matrices_from_json(lam.field(), field_of(v, "a")?, "a")?;
    let phi = PiMorphism::new(&s, &t, a)?;
    if !phi.is_morphism() {
        return err("components do not commute with the structure maps");
    }
    Ok(phi)
}

pub fn lambda_map_to_json(phi: &ModMap<PrimeField>) -> Value {
    json!({
        "schema": "lambda-map/1",
        "source": lam_body(&phi.source),
        "target": lam_body(&phi.target),
        "matrix": matrix_to_json(&phi.matrix),
    })
}

pub fn pi_complex_to_json(c: &PiComplex<PrimeField>, n: usize, lambda_name: Option<&str>, lam: &PresentedAlgebra<PrimeField>) -> Value {
    json!({
        "schema": "complex/1",
        "kind": "pi",
        "field": lam.field().modulus(),
        "lambda": lambda_ref(lam, lambda_name),
        "n": n,
        "lo": c.lo,
        "hi": c.hi(),
        "objects": c.objects.iter().map(pi_body).collect::<Vec<_>>(),
        "diffs": c.diffs.iter().map(|d| matrices_to_json(&d.comps)).collect::<Vec<_>>(),
    })
}

pub fn lam_complex_to_json(c: &LamComplex<PrimeField>, lambda_name: Option<&str>, lam: &PresentedAlgebra<PrimeField>) -> Value {
    json!({
        "schema": "complex/1",
        "kind": "lambda",
        "field": lam.field().modulus(),
        "lambda": lambda_ref(lam, lambda_name),
        "lo": c.lo,
        "hi": c.hi(),
        "objects": c.objects.iter().map(lam_body).collect::<Vec<_>>(),
        "diffs": c.diffs.iter().map(|d| matrix_to_json(&d.matrix)).collect::<Vec<_>>(),
    })
}

/// A complex of either kind read from JSON.
#[derive(Debug, Clone)]
pub enum AnyComplexJson {
    Lam(LamComplex<PrimeField>),
    Pi(PiComplex<PrimeField>),
}

pub fn complex_from_json(lam: &Arc<PresentedAlgebra<PrimeField>>, n: usize, v: &Value) -> Res<AnyComplexJson> {
    check_schema(v, "complex/1")?;
    let f = lam.field();
    check_field(v, f)?;
    check_lambda(f, v, lam)?;
    let lo = as_i64(field_of(v, "lo")?, "lo")?;
    let objs = as_array(field_of(v, "objects")?, "objects")?;
    let diffs = as_array(field_of(v, "diffs")?, "diffs")?;
    if !objs.is_empty() && diffs.len() + 1 != objs.len() {
        return err("a complex with k objects needs k - 1 differentials");
    }
    if let Some(hi) = v.get("hi") {
        let hi = as_i64(hi, "hi")?;
        if !objs.is_empty() && hi != lo + objs.len() as i64 - 1 {
            return err("`hi` disagrees with the number of objects");
        }
    }
    match as_str(field_of(v, "kind")?, "kind")? {
        "pi" => {
            let cat = PiCategory::new(lam, n)?;
            let objects = objs.iter().map(|o| pi_from_body(lam, n, o)).collect::<Res<Vec<_>>>()?;
            let mut ds = Vec::new();
            for (k, d) in diffs.iter().enumerate() {
                let comps = matrices_from_json(f, d, "differential")?;
                let m = PiMorphism::new(&objects[k], &objects[k + 1], comps)?;
                if !m.is_morphism() {
                    return err(format!("differential {k} is not a morphism"));
                }
                ds.push(m);
            }
            Ok(AnyComplexJson::Pi(Complex::new(&cat, lo, objects, ds)?))
        }
        "lambda" => {
            let cat = ModuleCategory::new(lam);
            let objects = objs.iter().map(|o| lam_from_body(lam, o)).collect::<Res<Vec<_>>>()?;
            let mut ds = Vec::new();
            for (k, d) in diffs.iter().enumerate() {
                let m = ModMap::new(&objects[k], &objects[k + 1], matrix_from_json(f, d)?)?;
                if !objects[k].is_hom(&objects[k + 1], &m.matrix) {
                    return err(format!("differential {k} is not a module map"));
                }
                ds.push(m);
            }
            Ok(AnyComplexJson::Lam(Complex::new(&cat, lo, objects, ds)?))
        }
        other => err(format!("unknown complex kind {other}")),
    }
}

/// Reads a fact base: categories (optionally flagged), functors with
/// flags, then atoms in their textual form.
pub fn facts_from_json(v: &Value) -> Res<FactBase> {
    check_schema(v, "facts/1")?;
    let mut fb = FactBase::new();
    let mut flags = Vec::new();
    for c in as_array(field_of(v, "categories")?, "categories")? {
        let (name, extra) = match c {
            Value::String(s) => (s.as_str(), None),
            Value::Object(o) => (as_str(field_of(c, "name")?, "category name")?, Some(o)),
            _ => return err("categories are names or objects"),
        };
        fb.declare_category(name)?;
        for (k, val) in extra.into_iter().flatten() {
            if k == "name" {
                continue;
            }
            let flag = CategoryFlag::parse(k).ok_or_else(|| InputError(format!("unknown category flag {k}")))?;
            let holds = val.as_bool().ok_or_else(|| InputError(format!("flag {k} must be a boolean")))?;
            flags.push(Atom::Category { flag, name: name.into(), holds });
        }
    }
    for f in as_array(field_of(v, "functors")?, "functors")? {
        let name = as_str(field_of(f, "name")?, "functor name")?;
        let dom = as_str(field_of(f, "domain")?, "domain")?;
        let cod = as_str(field_of(f, "codomain")?, "codomain")?;
        fb.declare_functor(name, dom, cod)?;
        if let Some(fl) = f.get("flags") {
            let fl = fl.as_object().ok_or_else(|| InputError("`flags` must be an object".into()))?;
            for (k, val) in fl {
                let flag = FunctorFlag::parse(k).ok_or_else(|| InputError(format!("unknown functor flag {k}")))?;
                let holds = val.as_bool().ok_or_else(|| InputError(format!("flag {k} must be a boolean")))?;
                flags.push(Atom::Functor { flag, name: name.into(), holds });
            }
        }
    }
    for a in flags {
        fb.insert(a)?;
    }
    if let Some(atoms) = v.get("atoms") {
        for a in as_array(atoms, "atoms")? {
            fb.insert(Atom::parse(as_str(a, "atom")?)?)?;
        }
    }
    Ok(fb)
}

pub fn facts_to_json(fb: &FactBase) -> Value {
    json!({
        "schema": "facts/1",
        "categories": fb.categories(),
        "functors": fb.functors().iter().map(|f| json!({"name": f.name, "domain": f.domain, "codomain": f.codomain})).collect::<Vec<_>>(),
        "atoms": fb.atoms().iter().map(|a| a.to_string()).collect::<Vec<_>>(),
    })
}

fn strings(atoms: &[Atom]) -> Vec<String> {
    atoms.iter().map(|a| a.to_string()).collect()
}

pub fn step_to_json(s: &Step) -> Value {
    json!({
        "rule": s.rule.id(),
        "citation": s.rule.citation(),
        "consumed": strings(&s.consumed),
        "produced": strings(&s.produced),
        "fresh": s.fresh.iter().map(|f| json!({"name": f.name, "domain": f.domain, "codomain": f.codomain})).collect::<Vec<_>>(),
    })
}

pub fn step_from_json(v: &Value) -> Res<Step> {
    let rule = as_str(field_of(v, "rule")?, "rule")?;
    let rule = pladder_core::laddercalc::Rule::parse(rule).ok_or_else(|| InputError(format!("unknown rule {rule}")))?;
    let atoms = |key: &str| -> Res<Vec<Atom>> {
        as_array(field_of(v, key)?, key)?
            .iter()
            .map(|a| Ok(Atom::parse(as_str(a, key)?)?))
            .collect()
    };
    let fresh = as_array(field_of(v, "fresh")?, "fresh")?
        .iter()
        .map(|f| {
            Ok(pladder_core::laddercalc::FunctorSym {
                name: as_str(field_of(f, "name")?, "name")?.into(),
                domain: as_str(field_of(f, "domain")?, "domain")?.into(),
                codomain: as_str(field_of(f, "codomain")?, "codomain")?.into(),
            })
        })
        .collect::<Res<Vec<_>>>()?;
    Ok(Step { rule, consumed: atoms("consumed")?, produced: atoms("produced")?, fresh })
}

pub fn derivation_to_json(d: &Derivation) -> Value {
    json!({
        "budget": d.budget,
        "exhausted": d.exhausted,
        "conflicts": d.conflicts,
        "steps": d.steps.iter().map(step_to_json).collect::<Vec<_>>(),
    })
}

pub fn height_to_json(h: Height) -> Value {
    let mut m = Map::new();
    match h {
        Height::Finite(n) => {
            m.insert("kind".into(), json!("finite"));
            m.insert("value".into(), json!(n));
        }
        Height::AtLeast(n) => {
            m.insert("kind".into(), json!("at_least"));
            m.insert("value".into(), json!(n));
        }
        Height::Infinite { period } => {
            m.insert("kind".into(), json!("infinite"));
            m.insert("period".into(), json!(period));
        }
    }
    m.insert("text".into(), json!(h.to_string()));
    Value::Object(m)
}

fn rows_to_json(rows: &[Row]) -> Value {
    Value::Array(rows.iter().map(|r| json!({"row": r.index, "u_side": r.u_side, "v_side": r.v_side})).collect())
}

pub fn ttf_to_json(t: &TtfSequence) -> Value {
    json!({ "entries": t.entries, "triples": t.triples, "wraparound": t.wraparound })
}

pub fn ladder_to_json(r: &LadderReport) -> Value {
    json!({
        "anchor": r.anchor.to_string(),
        "categories": [r.categories.0, r.categories.1, r.categories.2],
        "height_down": height_to_json(r.height_down),
        "height_up": height_to_json(r.height_up),
        "rows_down": rows_to_json(&r.rows_down),
        "rows_up": rows_to_json(&r.rows_up),
        "notes": r.notes,
    })
}

pub fn report_to_json(r: &Report) -> Value {
    json!({
        "title": r.title,
        "passed": r.passed(),
        "checks": r.checks.iter().map(|c| json!({
            "name": c.name,
            "total": c.total,
            "passed": c.passed(),
            "failures": c.failures,
        })).collect::<Vec<_>>(),
        "notes": r.notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use pladder_core::rng::SplitMix64;

    #[test]
    fn algebra_round_trip_is_exact() {
        let f = PrimeField::gf101();
        for name in CATALOG {
            let a = pladder_core::algcore::catalog(name, &f).unwrap();
            let v = algebra_to_json(&a);
            let back = algebra_from_json(&f, &v).unwrap();
            assert_eq!(algebra_to_json(&back), v);
            assert_eq!(back, a);
        }
    }

    #[test]
    fn module_round_trip() {
        let f = PrimeField::gf101();
        let lam = Arc::new(pladder_core::algcore::dual_numbers(&f));
        let mut rng = SplitMix64::new(3);
        let m = pladder_core::pimod::random_pi_module(&lam, 3, &mut rng, 2);
        let v = pi_module_to_json(&m, Some("dual"));
        match module_from_json(&lam, 3, &v).unwrap() {
            AnyModule::Pi(back) => assert_eq!(back, m),
            AnyModule::Lam(_) => panic!("wrong kind"),
        }
        assert!(module_from_json(&lam, 2, &v).is_err());
    }

    #[test]
    fn wrong_field_is_rejected() {
        let a = pladder_core::algcore::catalog("k", &PrimeField::gf101()).unwrap();
        let v = algebra_to_json(&a);
        assert!(algebra_from_json(&PrimeField::gf32003(), &v).is_err());
    }
}
