//! Argument parsing and command dispatch.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use pladder_core::algcore::{preprojective_algebra, tensor_algebra, AModule, PresentedAlgebra, CATALOG};
use pladder_core::category::{ext_dims, ModuleCategory};
use pladder_core::exactlin::{is_prime, PrimeField, DEFAULT_PRIME};
use pladder_core::laddercalc::{self, derive_closure, explain, ladder_height_with, ttf_sequence, Atom, Direction, FactBase};
use pladder_core::perfcx::random_perfect_complex;
use pladder_core::pimod::{pi_hom, PiModule};
use pladder_core::recfun::{
    flip_equivalence_check, verify_adjunction, verify_hom_embedding, verify_nakayama_identity, verify_recollement,
    FunctorName, Functors, Obj, Pair, Which,
};
use pladder_core::report::Report;
use pladder_core::rng::SplitMix64;
use serde_json::{json, Value};

use crate::json::{self, InputError, Res, REPORT_SCHEMA};

/// Environment variable naming the default field prime.
pub const PRIME_ENV: &str = "LADDER_PRIME";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "pladder", version, about = "Preprojective recollements, period-four ladders and ladder-height derivations")]
pub struct Cli {
    /// Field prime (default: $LADDER_PRIME, else 101).
    #[arg(long, global = true)]
    pub prime: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write an algebra, module or complex as JSON.
    Build(BuildArgs),
    /// Run a verification suite and report per-check results.
    Verify(VerifyArgs),
    /// Run the ladder inference engine on a fact base.
    Derive(DeriveArgs),
    /// Dimension of a hom space.
    Hom(HomArgs),
    /// Ext dimensions, optionally compared through T1.
    Ext(ExtArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuildType {
    Preprojective,
    Tensor,
    Morita,
    Module,
    Complex,
}

#[derive(clap::Args, Debug)]
pub struct BuildArgs {
    #[arg(long = "type", value_enum)]
    pub kind: BuildType,
    /// Number of vertices of the type A quiver.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Base algebra for `tensor`: builtin name or algebra file.
    #[arg(long)]
    pub base: Option<String>,
    /// Base algebra for `module` and `complex`.
    #[arg(long, default_value = "k")]
    pub lambda: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of terms of a random complex.
    #[arg(long, default_value_t = 3)]
    pub max_len: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Recollement,
    Ladder,
    Nakayama,
    Ttf,
    DerivedLadder,
    HomEmbedding,
    Flip,
}

#[derive(clap::Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value = "k")]
    pub lambda: String,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Recollement to check: first or second (default: both).
    #[arg(long)]
    pub which: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub max_len: usize,
    #[arg(long, default_value_t = 4)]
    pub max_degree: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the human-readable report instead of JSON.
    #[arg(long)]
    pub text: bool,
}

#[derive(clap::Args, Debug)]
pub struct DeriveArgs {
    /// `builtin:preprojective`, `builtin:bare`, `builtin:compact-i` or a facts file.
    #[arg(long)]
    pub facts: String,
    #[arg(long, default_value_t = laddercalc::DEFAULT_BUDGET)]
    pub budget: usize,
    /// Atoms to justify, e.g. `adjoint(p,p¹)`.
    #[arg(long)]
    pub explain: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub text: bool,
}

#[derive(clap::Args, Debug)]
pub struct HomArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value = "k")]
    pub lambda: String,
    /// Object: `regular`, `P<i>`, `F(obj)` for a functor F, or a module file.
    #[arg(long)]
    pub source: String,
    #[arg(long)]
    pub target: String,
}

#[derive(clap::Args, Debug)]
pub struct ExtArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value = "k")]
    pub lambda: String,
    #[arg(long)]
    pub source: String,
    #[arg(long)]
    pub target: String,
    #[arg(long, default_value_t = 2)]
    pub max_degree: usize,
    /// Compare Ext over Λ with Ext of the images under this functor.
    #[arg(long)]
    pub through: Option<String>,
}

/// What a command prints and its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

fn field_from(prime: Option<u64>) -> Res<PrimeField> {
    let p = match prime {
        Some(p) => p,
        None => match std::env::var(PRIME_ENV) {
            Ok(s) => s
                .trim()
                .parse::<u64>()
                .map_err(|_| InputError(format!("{PRIME_ENV}={s:?} is not an integer")))?,
            Err(_) => DEFAULT_PRIME,
        },
    };
    if !is_prime(p) || p >= 1 << 32 {
        return Err(InputError(format!("{p} is not a prime below 2^32")));
    }
    Ok(PrimeField::new(p)?)
}

fn positive(v: usize, what: &str) -> Res<()> {
    if v == 0 {
        Err(InputError(format!("{what} must be positive")))
    } else {
        Ok(())
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialise");
    s.push('\n');
    s
}

fn emit(v: &Value, out: &Option<PathBuf>) -> Res<String> {
    let text = pretty(v);
    if let Some(path) = out {
        std::fs::write(path, &text).map_err(|e| InputError(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(text)
}

fn builtin_name(src: &str) -> Option<&str> {
    CATALOG.contains(&src).then_some(src)
}

fn context(f: &PrimeField, lambda: &str, n: usize) -> Res<(Arc<PresentedAlgebra<PrimeField>>, Functors<PrimeField>)> {
    positive(n, "n")?;
    let lam = Arc::new(json::resolve_algebra(f, lambda)?);
    let fs = Functors::new(&lam, n)?;
    Ok((lam, fs))
}

pub fn cmd_build(f: &PrimeField, a: &BuildArgs) -> Res<Outcome> {
    let v = match a.kind {
        BuildType::Preprojective => {
            positive(a.n, "n")?;
            let pre = preprojective_algebra(a.n, f)?;
            let mut v = json::algebra_to_json(&pre.algebra);
            v["paths"] = json!(pre.paths.iter().map(|p| p.label(&pre.quiver)).collect::<Vec<_>>());
            v
        }
        BuildType::Tensor => {
            positive(a.n, "n")?;
            let base = a.base.as_deref().ok_or_else(|| InputError("--base is required for tensor".into()))?;
            let lam = json::resolve_algebra(f, base)?;
            let pre = preprojective_algebra(a.n, f)?;
            json::algebra_to_json(&tensor_algebra(&lam, &pre.algebra)?)
        }
        BuildType::Morita => json::algebra_to_json(&pladder_core::algcore::morita_ring(f)),
        BuildType::Module => {
            let (_, fs) = context(f, &a.lambda, a.n)?;
            let mut rng = SplitMix64::new(a.seed);
            let mut m = fs.pi.ctx.random_module(&mut rng, 2);
            while m.parts().iter().all(|p| p.dim() == 0) {
                m = fs.pi.ctx.random_module(&mut rng, 2);
            }
            json::pi_module_to_json(&m, builtin_name(&a.lambda))
        }
        BuildType::Complex => {
            positive(a.max_len, "max-len")?;
            let (lam, fs) = context(f, &a.lambda, a.n)?;
            let mut rng = SplitMix64::new(a.seed);
            let c = random_perfect_complex(&fs.pi, &mut rng, a.max_len, 2)?;
            json::pi_complex_to_json(&c, a.n, builtin_name(&a.lambda), &lam)
        }
    };
    Ok(Outcome { output: emit(&v, &a.out)?, code: EXIT_PASS })
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Recollement => "recollement",
        Suite::Ladder => "ladder",
        Suite::Nakayama => "nakayama",
        Suite::Ttf => "ttf",
        Suite::DerivedLadder => "derived-ladder",
        Suite::HomEmbedding => "hom-embedding",
        Suite::Flip => "flip",
    }
}

/// The four adjunctions of the cycle and the closing of the cycle.
pub fn ladder_reports(fs: &Functors<PrimeField>, samples: usize, seed: u64) -> Vec<Report> {
    let mut out: Vec<Report> = Pair::CYCLE
        .iter()
        .enumerate()
        .map(|(k, &p)| verify_adjunction(fs, p, samples, seed.wrapping_add(k as u64)))
        .collect();
    let mut cyc = Report::new("period-four cycle");
    for k in 0..4 {
        let (a, b) = (Pair::CYCLE[k], Pair::CYCLE[(k + 1) % 4]);
        cyc.record("consecutive pairs share a functor", a.right() == b.left(), || {
            format!("{} then {}", a.label(), b.label())
        });
    }
    cyc.record("the fifth pair coincides with the first", Pair::CYCLE[3].right() == Pair::CYCLE[0].left(), || {
        "cycle does not close".into()
    });
    out.push(cyc);
    out
}

pub fn cmd_verify(f: &PrimeField, a: &VerifyArgs) -> Res<Outcome> {
    positive(a.samples, "samples")?;
    positive(a.max_len, "max-len")?;
    let which = a.which.as_deref().map(Which::parse).transpose()?;
    let (lam, fs) = context(f, &a.lambda, a.n)?;
    let reports: Vec<Report> = match a.suite {
        Suite::Recollement => match which {
            Some(w) => vec![verify_recollement(&fs, w, a.samples, a.seed)],
            None => vec![
                verify_recollement(&fs, Which::First, a.samples, a.seed),
                verify_recollement(&fs, Which::Second, a.samples, a.seed),
            ],
        },
        Suite::Ladder => ladder_reports(&fs, a.samples, a.seed),
        Suite::Nakayama => vec![verify_nakayama_identity(&fs, a.samples, a.seed)],
        Suite::Ttf => vec![pladder_core::perfcx::ttf_check(&fs, a.samples, a.seed, a.max_len)],
        Suite::DerivedLadder => vec![pladder_core::perfcx::ladder_verify_derived(&fs, a.samples, a.seed, a.max_len)],
        Suite::HomEmbedding => vec![verify_hom_embedding(&fs, a.samples, a.max_degree, a.seed)],
        Suite::Flip => vec![flip_equivalence_check(&fs, a.samples, a.seed)],
    };
    let passed = reports.iter().all(Report::passed);
    let code = if passed { EXIT_PASS } else { EXIT_FAIL };
    if a.text {
        let mut s = String::new();
        for r in &reports {
            s.push_str(&r.to_string());
        }
        return Ok(Outcome { output: s, code });
    }
    let v = json!({
        "schema": REPORT_SCHEMA,
        "command": format!("verify {}", suite_name(a.suite)),
        "config": {
            "prime": f.modulus(),
            "n": a.n,
            "lambda": a.lambda,
            "samples": a.samples,
            "seed": a.seed,
            "which": a.which,
            "max_len": a.max_len,
            "max_degree": a.max_degree,
        },
        "dims": {
            "lambda": lam.dim(),
            "pi": fs.pi.ctx.flat_algebra().dim(),
            "projectives": fs.pi.ctx.projectives().iter().map(|p| p.dim_vector()).collect::<Vec<_>>(),
        },
        "passed": passed,
        "reports": reports.iter().map(json::report_to_json).collect::<Vec<_>>(),
    });
    Ok(Outcome { output: emit(&v, &a.out)?, code })
}

fn load_facts(src: &str) -> Res<FactBase> {
    if let Some(name) = src.strip_prefix("builtin:") {
        return laddercalc::builtin(name)
            .ok_or_else(|| InputError(format!("unknown builtin fact base {name} (preprojective, bare, compact-i)")));
    }
    let text = std::fs::read_to_string(src).map_err(|e| InputError(format!("cannot read {src}: {e}")))?;
    json::facts_from_json(&serde_json::from_str(&text)?)
}

pub fn cmd_derive(a: &DeriveArgs) -> Res<Outcome> {
    let fb = load_facts(&a.facts)?;
    let targets = a.explain.iter().map(|s| Atom::parse(s)).collect::<Result<Vec<_>, _>>()?;
    let (closure, deriv) = derive_closure(&fb, a.budget);
    let report = ladder_height_with(&closure, deriv.exhausted)?;
    let down = ttf_sequence(&report, &closure, Direction::Down);
    let up = ttf_sequence(&report, &closure, Direction::Up);
    let mut explained = Vec::new();
    for t in &targets {
        let steps = explain(&closure, &deriv, t)?;
        explained.push(json!({
            "atom": t.to_string(),
            "steps": steps.iter().map(json::step_to_json).collect::<Vec<_>>(),
        }));
    }
    if a.text {
        let mut s = format!(
            "height down: {}\nheight up: {}\n",
            report.height_down, report.height_up
        );
        s.push_str(&format!("TTF down: {}\n", down.entries.join(", ")));
        s.push_str(&format!("TTF up: {}\n", up.entries.join(", ")));
        for n in &report.notes {
            s.push_str(&format!("note: {n}\n"));
        }
        for st in &deriv.steps {
            let produced: Vec<String> = st.produced.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("{}: {}\n", st.rule, produced.join(", ")));
        }
        return Ok(Outcome { output: s, code: EXIT_PASS });
    }
    let v = json!({
        "schema": REPORT_SCHEMA,
        "command": "derive",
        "config": { "facts": a.facts, "budget": a.budget },
        "ladder": json::ladder_to_json(&report),
        "ttf_down": json::ttf_to_json(&down),
        "ttf_up": json::ttf_to_json(&up),
        "derivation": json::derivation_to_json(&deriv),
        "closure": json::facts_to_json(&closure),
        "explain": explained,
    });
    Ok(Outcome { output: emit(&v, &a.out)?, code: EXIT_PASS })
}

/// Parses an object expression: `regular`, `P<i>` (indecomposable
/// projective tuple), `F(expr)` for a functor name, or a module file.
pub fn parse_object(fs: &Functors<PrimeField>, lam: &Arc<PresentedAlgebra<PrimeField>>, expr: &str) -> Res<Obj<PrimeField>> {
    let s = expr.trim();
    if s == "regular" {
        return Ok(Obj::Lam(AModule::regular(lam)));
    }
    if let Some(k) = s.strip_prefix('P').and_then(|k| k.parse::<usize>().ok()) {
        let ps = fs.pi.ctx.projectives();
        if k == 0 || k > ps.len() {
            return Err(InputError(format!("P{k}: projectives are numbered 1..={}", ps.len())));
        }
        return Ok(Obj::Pi(ps[k - 1].clone()));
    }
    if let (Some(open), true) = (s.find('('), s.ends_with(')')) {
        if let Ok(name) = FunctorName::parse(&s[..open]) {
            let inner = parse_object(fs, lam, &s[open + 1..s.len() - 1])?;
            return Ok(fs.apply(name, &inner)?);
        }
    }
    let text = std::fs::read_to_string(s).map_err(|e| InputError(format!("`{s}` is not an object expression or readable file: {e}")))?;
    Ok(match json::module_from_json(lam, fs.n(), &serde_json::from_str(&text)?)? {
        json::AnyModule::Lam(m) => Obj::Lam(m),
        json::AnyModule::Pi(m) => Obj::Pi(m),
    })
}

fn obj_kind(o: &Obj<PrimeField>) -> &'static str {
    match o {
        Obj::Lam(_) => "lambda",
        Obj::Pi(_) => "pi",
    }
}

fn hom_dim(fs: &Functors<PrimeField>, x: &Obj<PrimeField>, y: &Obj<PrimeField>) -> Res<usize> {
    match (x, y) {
        (Obj::Lam(a), Obj::Lam(b)) => Ok(a.hom_basis(b)?.len()),
        (Obj::Pi(a), Obj::Pi(b)) => {
            check_tuple(fs, a)?;
            check_tuple(fs, b)?;
            Ok(pi_hom(a, b)?.len())
        }
        _ => Err(InputError("source and target live in different categories".into())),
    }
}

fn check_tuple(fs: &Functors<PrimeField>, m: &PiModule<PrimeField>) -> Res<()> {
    if m.n() != fs.n() {
        return Err(InputError(format!("object has {} parts but n = {}", m.n(), fs.n())));
    }
    Ok(())
}

pub fn cmd_hom(f: &PrimeField, a: &HomArgs) -> Res<Outcome> {
    let (lam, fs) = context(f, &a.lambda, a.n)?;
    let x = parse_object(&fs, &lam, &a.source)?;
    let y = parse_object(&fs, &lam, &a.target)?;
    let d = hom_dim(&fs, &x, &y)?;
    let v = json!({
        "schema": REPORT_SCHEMA,
        "command": "hom",
        "config": { "prime": f.modulus(), "n": a.n, "lambda": a.lambda, "source": a.source, "target": a.target },
        "category": obj_kind(&x),
        "dim": d,
    });
    Ok(Outcome { output: pretty(&v), code: EXIT_PASS })
}

fn ext_of(fs: &Functors<PrimeField>, x: &Obj<PrimeField>, y: &Obj<PrimeField>, d: usize) -> Res<Vec<usize>> {
    match (x, y) {
        (Obj::Lam(a), Obj::Lam(b)) => Ok(ext_dims(&ModuleCategory::new(fs.algebra()), a, b, d)?),
        (Obj::Pi(a), Obj::Pi(b)) => {
            check_tuple(fs, a)?;
            check_tuple(fs, b)?;
            Ok(ext_dims(&fs.pi, a, b, d)?)
        }
        _ => Err(InputError("source and target live in different categories".into())),
    }
}

pub fn cmd_ext(f: &PrimeField, a: &ExtArgs) -> Res<Outcome> {
    let (lam, fs) = context(f, &a.lambda, a.n)?;
    let x = parse_object(&fs, &lam, &a.source)?;
    let y = parse_object(&fs, &lam, &a.target)?;
    let own = ext_of(&fs, &x, &y, a.max_degree)?;
    let mut v = json!({
        "schema": REPORT_SCHEMA,
        "command": "ext",
        "config": {
            "prime": f.modulus(), "n": a.n, "lambda": a.lambda,
            "source": a.source, "target": a.target, "max_degree": a.max_degree, "through": a.through,
        },
        "category": obj_kind(&x),
        "dims": own,
    });
    let mut code = EXIT_PASS;
    if let Some(t) = &a.through {
        let name = FunctorName::parse(t)?;
        if !matches!(name, FunctorName::T1 | FunctorName::T2) {
            return Err(InputError("--through takes T1 or T2".into()));
        }
        if !matches!(x, Obj::Lam(_)) || !matches!(y, Obj::Lam(_)) {
            return Err(InputError("--through needs Λ-modules as source and target".into()));
        }
        let image = ext_of(&fs, &fs.apply(name, &x)?, &fs.apply(name, &y)?, a.max_degree)?;
        let equal = image == own;
        v["through_dims"] = json!(image);
        v["equal"] = json!(equal);
        if !equal {
            code = EXIT_FAIL;
        }
    }
    Ok(Outcome { output: pretty(&v), code })
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Res<Outcome> {
    let field = || field_from(cli.prime);
    match &cli.command {
        Command::Build(a) => cmd_build(&field()?, a),
        Command::Verify(a) => cmd_verify(&field()?, a),
        Command::Derive(a) => cmd_derive(a),
        Command::Hom(a) => cmd_hom(&field()?, a),
        Command::Ext(a) => cmd_ext(&field()?, a),
    }
}

/// Parses `args`, runs the command and returns stdout text, stderr text
/// and the exit code.
pub fn run_args<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let text = e.render().to_string();
            return if code == EXIT_PASS { (text, String::new(), code) } else { (String::new(), text, code) };
        }
    };
    match run(&cli) {
        Ok(o) => (o.output, String::new(), o.code),
        Err(e) => (String::new(), format!("error: {e}\n"), EXIT_INPUT),
    }
}
