//! Forward-chaining engine over facts about categories, functors and
//! recollements. It derives adjoints, compactness flags and neighbouring
//! recollements, then reads off ladder heights and TTF sequences.
//!
//! Ladder rows are indexed relative to an anchor recollement
//! `(q,i,p;l,e,r)`: rows 0, 1, 2 are `(q,l)`, `(i,e)`, `(p,r)`. Each row
//! holds one functor on the `U` side and one on the `V` side. Going down
//! appends right adjoints, going up prepends left adjoints.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Default bound on fresh functor symbols per closure.
pub const DEFAULT_BUDGET: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FunctorFlag {
    FullyFaithful,
    PreservesCoproducts,
    PreservesCompacts,
    ExactAbelianOrigin,
    RestrictsToFd,
}

impl FunctorFlag {
    pub const ALL: [FunctorFlag; 5] = [
        FunctorFlag::FullyFaithful,
        FunctorFlag::PreservesCoproducts,
        FunctorFlag::PreservesCompacts,
        FunctorFlag::ExactAbelianOrigin,
        FunctorFlag::RestrictsToFd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FunctorFlag::FullyFaithful => "fully_faithful",
            FunctorFlag::PreservesCoproducts => "preserves_coproducts",
            FunctorFlag::PreservesCompacts => "preserves_compacts",
            FunctorFlag::ExactAbelianOrigin => "exact_abelian_origin",
            FunctorFlag::RestrictsToFd => "restricts_to_fd",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CategoryFlag {
    CompactlyGenerated,
}

impl CategoryFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            CategoryFlag::CompactlyGenerated => "compactly_generated",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        (s == "compactly_generated").then_some(CategoryFlag::CompactlyGenerated)
    }
}

/// `U --i--> T --e--> V` with `q ⊣ i ⊣ p` and `l ⊣ e ⊣ r`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Recollement {
    pub q: String,
    pub i: String,
    pub p: String,
    pub l: String,
    pub e: String,
    pub r: String,
}

impl Recollement {
    pub fn new(q: &str, i: &str, p: &str, l: &str, e: &str, r: &str) -> Self {
        Recollement { q: q.into(), i: i.into(), p: p.into(), l: l.into(), e: e.into(), r: r.into() }
    }

    pub fn functors(&self) -> [&str; 6] {
        [&self.q, &self.i, &self.p, &self.l, &self.e, &self.r]
    }

    /// The recollement one row further down: `(e, r, r¹; i, p, p¹)`.
    fn down(&self, p1: &str, r1: &str) -> Recollement {
        Recollement::new(&self.e, &self.r, r1, &self.i, &self.p, p1)
    }

    /// The recollement one row further up: `(l¹, l, e; q¹, q, i)`.
    fn up(&self, q1: &str, l1: &str) -> Recollement {
        Recollement::new(l1, &self.l, &self.e, q1, &self.q, &self.i)
    }

    fn is_down_of(&self, upper: &Recollement) -> bool {
        self.q == upper.e && self.i == upper.r && self.l == upper.i && self.e == upper.p
    }

    fn map(&self, f: &impl Fn(&str) -> String) -> Recollement {
        Recollement { q: f(&self.q), i: f(&self.i), p: f(&self.p), l: f(&self.l), e: f(&self.e), r: f(&self.r) }
    }
}

impl fmt::Display for Recollement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "recollement({},{},{};{},{},{})", self.q, self.i, self.p, self.l, self.e, self.r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// `F ⊣ G` between triangulated categories.
    Adjoint(String, String),
    /// `F ⊣ G` between the underlying abelian categories.
    AbelianAdjoint(String, String),
    ExactSequence(String, String),
    KernelEqualsImage(String, String),
    Recollement(Recollement),
    Functor { flag: FunctorFlag, name: String, holds: bool },
    Category { flag: CategoryFlag, name: String, holds: bool },
}

impl Atom {
    pub fn adjoint(f: &str, g: &str) -> Atom {
        Atom::Adjoint(f.into(), g.into())
    }

    pub fn abelian_adjoint(f: &str, g: &str) -> Atom {
        Atom::AbelianAdjoint(f.into(), g.into())
    }

    pub fn flag(flag: FunctorFlag, name: &str) -> Atom {
        Atom::Functor { flag, name: name.into(), holds: true }
    }

    pub fn compactly_generated(name: &str) -> Atom {
        Atom::Category { flag: CategoryFlag::CompactlyGenerated, name: name.into(), holds: true }
    }

    /// Functor symbols mentioned by the atom.
    pub fn functors(&self) -> Vec<&str> {
        match self {
            Atom::Adjoint(a, b)
            | Atom::AbelianAdjoint(a, b)
            | Atom::ExactSequence(a, b)
            | Atom::KernelEqualsImage(a, b) => vec![a.as_str(), b.as_str()],
            Atom::Recollement(r) => r.functors().to_vec(),
            Atom::Functor { name, .. } => vec![name.as_str()],
            Atom::Category { .. } => Vec::new(),
        }
    }

    fn negation(&self) -> Option<Atom> {
        match self {
            Atom::Functor { flag, name, holds } => {
                Some(Atom::Functor { flag: *flag, name: name.clone(), holds: !holds })
            }
            Atom::Category { flag, name, holds } => {
                Some(Atom::Category { flag: *flag, name: name.clone(), holds: !holds })
            }
            _ => None,
        }
    }

    fn map(&self, f: &impl Fn(&str) -> String) -> Atom {
        match self {
            Atom::Adjoint(a, b) => Atom::Adjoint(f(a), f(b)),
            Atom::AbelianAdjoint(a, b) => Atom::AbelianAdjoint(f(a), f(b)),
            Atom::ExactSequence(a, b) => Atom::ExactSequence(f(a), f(b)),
            Atom::KernelEqualsImage(a, b) => Atom::KernelEqualsImage(f(a), f(b)),
            Atom::Recollement(r) => Atom::Recollement(r.map(f)),
            Atom::Functor { flag, name, holds } => Atom::Functor { flag: *flag, name: f(name), holds: *holds },
            c @ Atom::Category { .. } => c.clone(),
        }
    }

    /// Parses the textual form produced by `Display`, e.g. `adjoint(F,G)`,
    /// `preserves_compacts(i)`, `not compactly_generated(T)` or
    /// `recollement(q,i,p;l,e,r)`.
    pub fn parse(s: &str) -> Result<Atom> {
        let bad = || Error::Invalid(format!("cannot parse atom `{s}`"));
        let t = s.trim();
        let (holds, t) = match t.strip_prefix("not ") {
            Some(rest) => (false, rest.trim()),
            None => (true, t),
        };
        let open = t.find('(').ok_or_else(bad)?;
        let head = t[..open].trim();
        let body = t[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let args: Vec<String> = body
            .split([',', ';'])
            .map(|a| a.trim().to_string())
            .collect();
        if args.iter().any(String::is_empty) {
            return Err(bad());
        }
        let two = |mk: fn(String, String) -> Atom| -> Result<Atom> {
            if args.len() != 2 || !holds {
                return Err(bad());
            }
            Ok(mk(args[0].clone(), args[1].clone()))
        };
        match head {
            "adjoint" => two(Atom::Adjoint),
            "abelian_adjoint" => two(Atom::AbelianAdjoint),
            "exact_sequence" => two(Atom::ExactSequence),
            "kernel_equals_image" => two(Atom::KernelEqualsImage),
            "recollement" => {
                if args.len() != 6 || !holds || body.matches(';').count() != 1 {
                    return Err(bad());
                }
                let a = &args;
                Ok(Atom::Recollement(Recollement::new(&a[0], &a[1], &a[2], &a[3], &a[4], &a[5])))
            }
            _ => {
                if args.len() != 1 {
                    return Err(bad());
                }
                if let Some(flag) = FunctorFlag::parse(head) {
                    Ok(Atom::Functor { flag, name: args[0].clone(), holds })
                } else if let Some(flag) = CategoryFlag::parse(head) {
                    Ok(Atom::Category { flag, name: args[0].clone(), holds })
                } else {
                    Err(bad())
                }
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Adjoint(a, b) => write!(f, "adjoint({a},{b})"),
            Atom::AbelianAdjoint(a, b) => write!(f, "abelian_adjoint({a},{b})"),
            Atom::ExactSequence(a, b) => write!(f, "exact_sequence({a},{b})"),
            Atom::KernelEqualsImage(a, b) => write!(f, "kernel_equals_image({a},{b})"),
            Atom::Recollement(r) => write!(f, "{r}"),
            Atom::Functor { flag, name, holds } => {
                write!(f, "{}{}({name})", if *holds { "" } else { "not " }, flag.as_str())
            }
            Atom::Category { flag, name, holds } => {
                write!(f, "{}{}({name})", if *holds { "" } else { "not " }, flag.as_str())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunctorSym {
    pub name: String,
    pub domain: String,
    pub codomain: String,
}

/// Declared symbols plus atoms in insertion order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FactBase {
    categories: Vec<String>,
    functors: Vec<FunctorSym>,
    atoms: Vec<Atom>,
    index: BTreeSet<Atom>,
}

impl FactBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn functors(&self) -> &[FunctorSym] {
        &self.functors
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.index.contains(atom)
    }

    pub fn functor(&self, name: &str) -> Option<&FunctorSym> {
        self.functors.iter().find(|f| f.name == name)
    }

    pub fn has_category(&self, name: &str) -> bool {
        self.categories.iter().any(|c| c == name)
    }

    /// Idempotent.
    pub fn declare_category(&mut self, name: &str) -> Result<()> {
        if name.is_empty() {
            return Err(Error::Invalid("empty category name".into()));
        }
        if !self.has_category(name) {
            self.categories.push(name.into());
        }
        Ok(())
    }

    /// Idempotent for identical declarations.
    pub fn declare_functor(&mut self, name: &str, domain: &str, codomain: &str) -> Result<()> {
        if name.is_empty() {
            return Err(Error::Invalid("empty functor name".into()));
        }
        for c in [domain, codomain] {
            if !self.has_category(c) {
                return Err(Error::Undeclared(c.into()));
            }
        }
        match self.functor(name) {
            Some(f) if f.domain == domain && f.codomain == codomain => Ok(()),
            Some(f) => Err(Error::Contradiction(format!(
                "{name} already declared as {} -> {}",
                f.domain, f.codomain
            ))),
            None => {
                self.functors.push(FunctorSym { name: name.into(), domain: domain.into(), codomain: codomain.into() });
                Ok(())
            }
        }
    }

    fn sym(&self, name: &str) -> Result<&FunctorSym> {
        self.functor(name).ok_or_else(|| Error::Undeclared(name.into()))
    }

    fn check_atom(&self, atom: &Atom) -> Result<()> {
        let ill = |what: &str| Err(Error::Contradiction(format!("ill-typed {what}: {atom}")));
        match atom {
            Atom::Category { name, .. } => {
                if !self.has_category(name) {
                    return Err(Error::Undeclared(name.clone()));
                }
            }
            _ => {
                for f in atom.functors() {
                    self.sym(f)?;
                }
            }
        }
        match atom {
            Atom::Adjoint(f, g) | Atom::AbelianAdjoint(f, g) => {
                let (f, g) = (self.sym(f)?, self.sym(g)?);
                if f.domain != g.codomain || f.codomain != g.domain {
                    return ill("adjoint pair");
                }
            }
            Atom::ExactSequence(i, e) | Atom::KernelEqualsImage(i, e) => {
                if self.sym(i)?.codomain != self.sym(e)?.domain {
                    return ill("sequence");
                }
            }
            Atom::Recollement(r) => {
                let i = self.sym(&r.i)?;
                let e = self.sym(&r.e)?;
                let (u, t, v) = (&i.domain, &i.codomain, &e.codomain);
                if &e.domain != t {
                    return ill("recollement");
                }
                for (name, dom, cod) in [(&r.q, t, u), (&r.p, t, u), (&r.l, v, t), (&r.r, v, t)] {
                    let s = self.sym(name)?;
                    if &s.domain != dom || &s.codomain != cod {
                        return ill("recollement");
                    }
                }
            }
            _ => {}
        }
        if let Some(neg) = atom.negation() {
            if self.contains(&neg) {
                return Err(Error::Contradiction(format!("{atom} contradicts {neg}")));
            }
        }
        Ok(())
    }

    /// Inserts an atom in place. Returns whether it was new.
    pub fn insert(&mut self, atom: Atom) -> Result<bool> {
        if self.contains(&atom) {
            return Ok(false);
        }
        self.check_atom(&atom)?;
        self.index.insert(atom.clone());
        self.atoms.push(atom);
        Ok(true)
    }

    /// Persistent form of [`FactBase::insert`].
    pub fn add_fact(&self, atom: Atom) -> Result<FactBase> {
        let mut out = self.clone();
        out.insert(atom)?;
        Ok(out)
    }

    /// Re-checks every invariant from scratch.
    pub fn check(&self) -> Result<()> {
        let mut fresh = FactBase { categories: self.categories.clone(), functors: Vec::new(), ..Default::default() };
        for f in &self.functors {
            fresh.declare_functor(&f.name, &f.domain, &f.codomain)?;
        }
        for a in &self.atoms {
            fresh.insert(a.clone())?;
        }
        Ok(())
    }

    pub fn holds(&self, flag: FunctorFlag, name: &str) -> bool {
        self.contains(&Atom::Functor { flag, name: name.into(), holds: true })
    }

    pub fn compactly_generated(&self, cat: &str) -> bool {
        self.contains(&Atom::compactly_generated(cat))
    }

    /// The first declared right adjoint of `g`.
    pub fn right_adjoint(&self, g: &str) -> Option<&str> {
        self.atoms.iter().find_map(|a| match a {
            Atom::Adjoint(f, h) if f == g => Some(h.as_str()),
            _ => None,
        })
    }

    /// The first declared left adjoint of `g`.
    pub fn left_adjoint(&self, g: &str) -> Option<&str> {
        self.atoms.iter().find_map(|a| match a {
            Atom::Adjoint(h, f) if f == g => Some(h.as_str()),
            _ => None,
        })
    }

    pub fn recollements(&self) -> impl Iterator<Item = &Recollement> {
        self.atoms.iter().filter_map(|a| match a {
            Atom::Recollement(r) => Some(r),
            _ => None,
        })
    }

    /// Applies `f` to every functor symbol. `f` must be injective.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> Result<FactBase> {
        let mut out = FactBase::new();
        for c in &self.categories {
            out.declare_category(c)?;
        }
        for s in &self.functors {
            out.declare_functor(&f(&s.name), &s.domain, &s.codomain)?;
        }
        for a in &self.atoms {
            out.insert(a.map(&f))?;
        }
        Ok(out)
    }

    /// Categories `(U, T, V)` of a recollement.
    pub fn recollement_categories(&self, r: &Recollement) -> Option<(String, String, String)> {
        let i = self.functor(&r.i)?;
        let e = self.functor(&r.e)?;
        Some((i.domain.clone(), i.codomain.clone(), e.codomain.clone()))
    }

    fn fresh_name(&self, base: &str) -> String {
        let mut name = String::from(base);
        while self.functor(&name).is_some() {
            name.push('\'');
        }
        name
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Def,
    Lift,
    CpsLeft,
    CpsRight,
    Brown,
    H2Down,
    H2Up,
    Iter,
    Restrict,
}

impl Rule {
    /// Application order within one pass.
    pub const ORDER: [Rule; 9] = [
        Rule::Def,
        Rule::Lift,
        Rule::CpsLeft,
        Rule::CpsRight,
        Rule::Brown,
        Rule::H2Down,
        Rule::H2Up,
        Rule::Iter,
        Rule::Restrict,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::Def => "R-DEF",
            Rule::Lift => "R-LIFT",
            Rule::CpsLeft => "R-CPS-L",
            Rule::CpsRight => "R-CPS-R",
            Rule::Brown => "R-BROWN",
            Rule::H2Down => "R-H2DOWN",
            Rule::H2Up => "R-H2UP",
            Rule::Iter => "R-ITER",
            Rule::Restrict => "R-RESTRICT",
        }
    }

    pub fn parse(s: &str) -> Option<Rule> {
        Rule::ORDER.into_iter().find(|r| r.id() == s)
    }

    /// The result each rule encodes.
    pub fn citation(self) -> &'static str {
        match self {
            Rule::Def => "definition of a recollement: two adjoint triples over an exact sequence",
            Rule::Lift => "exact adjoint pairs of abelian categories lift to unbounded derived categories",
            Rule::CpsLeft => "over an exact sequence, i has a left adjoint iff e has one",
            Rule::CpsRight => "over an exact sequence, i has a right adjoint iff e has one",
            Rule::Brown => "Brown representability: G has a right adjoint iff G preserves coproducts iff F preserves compacts",
            Rule::H2Down => "height-two criterion going downwards (compactness of i or e, or right adjoints of p or r)",
            Rule::H2Up => "height-two criterion going upwards (left adjoints of q or l)",
            Rule::Iter => "iterated height criterion for ladders of height n",
            Rule::Restrict => "restriction of a recollement to finite-dimensional derived categories",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub consumed: Vec<Atom>,
    pub produced: Vec<Atom>,
    pub fresh: Vec<FunctorSym>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Derivation {
    pub steps: Vec<Step>,
    /// Some rule wanted a fresh symbol after the budget ran out.
    pub exhausted: bool,
    pub budget: usize,
    /// Produced atoms rejected by the fact base (typically a negated flag).
    pub conflicts: Vec<String>,
}

const SUPERSCRIPTS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];

/// `p -> p¹`, `p¹ -> p²`, `r⁹ -> r¹⁰`.
pub fn bump(name: &str) -> String {
    let base = name.trim_end_matches(|c| SUPERSCRIPTS.contains(&c));
    let digits = &name[base.len()..];
    let level: u64 = digits
        .chars()
        .map(|c| SUPERSCRIPTS.iter().position(|&s| s == c).unwrap_or(0) as u64)
        .fold(0, |acc, d| acc * 10 + d);
    let mut out = String::from(base);
    for c in (level + 1).to_string().chars() {
        out.push(SUPERSCRIPTS[c.to_digit(10).unwrap_or(0) as usize]);
    }
    out
}

/// One row of a ladder: the functor on the `U` side and on the `V` side,
/// both relative to the anchor recollement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub index: i64,
    pub u_side: String,
    pub v_side: String,
}

/// Recollements connected to an anchor through down/up successors.
struct Chain {
    /// Atom positions of recollements, top to bottom.
    members: Vec<usize>,
    anchor_pos: usize,
    rows: BTreeMap<i64, (String, String)>,
    top: i64,
    /// Whether the top / bottom recollement has its sides swapped
    /// relative to the anchor.
    top_flipped: bool,
    bottom_flipped: bool,
}

fn rec_at(fb: &FactBase, pos: usize) -> &Recollement {
    match &fb.atoms[pos] {
        Atom::Recollement(r) => r,
        _ => unreachable!("position does not hold a recollement"),
    }
}

fn rec_rows(r: &Recollement, top: i64, flipped: bool) -> [(i64, (String, String)); 3] {
    let pair = |a: &String, b: &String| if flipped { (b.clone(), a.clone()) } else { (a.clone(), b.clone()) };
    [(top, pair(&r.q, &r.l)), (top + 1, pair(&r.i, &r.e)), (top + 2, pair(&r.p, &r.r))]
}

fn chain_from(fb: &FactBase, anchor: usize) -> Chain {
    let recs: Vec<usize> = (0..fb.atoms.len()).filter(|&k| matches!(fb.atoms[k], Atom::Recollement(_))).collect();
    let mut rows = BTreeMap::new();
    for (k, v) in rec_rows(rec_at(fb, anchor), 0, false) {
        rows.insert(k, v);
    }
    let mut seen = BTreeSet::from([anchor]);
    let mut below = Vec::new();
    let (mut cur, mut flipped, mut top) = (anchor, false, 0i64);
    while let Some(&next) = recs.iter().find(|&&k| !seen.contains(&k) && rec_at(fb, k).is_down_of(rec_at(fb, cur))) {
        seen.insert(next);
        below.push(next);
        flipped = !flipped;
        top += 1;
        for (k, v) in rec_rows(rec_at(fb, next), top, flipped) {
            rows.entry(k).or_insert(v);
        }
        cur = next;
    }
    let bottom_flipped = flipped;
    let mut above = Vec::new();
    let (mut cur, mut flipped, mut top) = (anchor, false, 0i64);
    while let Some(&prev) = recs.iter().find(|&&k| !seen.contains(&k) && rec_at(fb, cur).is_down_of(rec_at(fb, k))) {
        seen.insert(prev);
        above.push(prev);
        flipped = !flipped;
        top -= 1;
        for (k, v) in rec_rows(rec_at(fb, prev), top, flipped) {
            rows.entry(k).or_insert(v);
        }
        cur = prev;
    }
    let mut members: Vec<usize> = above.into_iter().rev().collect();
    let anchor_pos = members.len();
    members.push(anchor);
    members.extend(below);
    Chain { members, anchor_pos, rows, top, top_flipped: flipped, bottom_flipped }
}

impl Chain {
    fn bottom(&self) -> usize {
        *self.members.last().unwrap_or(&self.members[self.anchor_pos])
    }

    fn topmost(&self) -> usize {
        self.members[0]
    }

    fn bottom_row(&self) -> i64 {
        *self.rows.keys().next_back().unwrap_or(&2)
    }

    /// Row index `j` in the given range holding `sym` on the given side.
    fn find(&self, sym: &str, v_side: bool, range: impl Iterator<Item = i64>) -> Option<i64> {
        let mut hit = None;
        for k in range {
            if let Some((u, v)) = self.rows.get(&k) {
                if (if v_side { v } else { u }) == sym {
                    hit = Some(k);
                }
            }
        }
        hit
    }

    /// Period if a row `(u, v)` appended at `index` repeats a symbol of the
    /// rows on the same side of the anchor.
    fn revisit(&self, index: i64, u: Option<&str>, v: Option<&str>, down: bool) -> Option<i64> {
        let (lo, hi) = if down { (0, index - 1) } else { (index + 1, 2) };
        let mut best: Option<i64> = None;
        for (sym, v_side) in [(u, false), (v, true)] {
            let Some(sym) = sym else { continue };
            let hit = if down {
                self.find(sym, v_side, lo..=hi)
            } else {
                // nearest occurrence from the top
                self.find(sym, v_side, (lo..=hi).rev())
            };
            if let Some(j) = hit {
                let p = (index - j).abs();
                best = Some(best.map_or(p, |b| b.min(p)));
            }
        }
        best
    }
}

/// Chains in anchor order: each recollement belongs to exactly one.
fn chains(fb: &FactBase) -> Vec<Chain> {
    let mut covered = BTreeSet::new();
    let mut out = Vec::new();
    for k in 0..fb.atoms.len() {
        if matches!(fb.atoms[k], Atom::Recollement(_)) && !covered.contains(&k) {
            let c = chain_from(fb, k);
            covered.extend(c.members.iter().copied());
            out.push(c);
        }
    }
    out
}

struct Engine {
    fb: FactBase,
    deriv: Derivation,
    remaining: usize,
}

enum Fire {
    /// Nothing new.
    Idle,
    /// A step was recorded.
    Fired,
    /// Needed fresh symbols beyond the budget.
    Blocked,
}

impl Engine {
    fn mint(&mut self, base: &str, domain: &str, codomain: &str, fresh: &mut Vec<FunctorSym>) -> String {
        let taken = |n: &str, fresh: &Vec<FunctorSym>| self.fb.functor(n).is_some() || fresh.iter().any(|f| f.name == n);
        let mut name = self.fb.fresh_name(base);
        while taken(&name, fresh) {
            name.push('\'');
        }
        fresh.push(FunctorSym { name: name.clone(), domain: domain.into(), codomain: codomain.into() });
        name
    }

    /// Records a step if it produces something new.
    fn commit(&mut self, rule: Rule, consumed: Vec<Atom>, produced: Vec<Atom>, fresh: Vec<FunctorSym>) -> Fire {
        if fresh.len() > self.remaining {
            self.deriv.exhausted = true;
            return Fire::Blocked;
        }
        let produced: Vec<Atom> = {
            let mut seen = BTreeSet::new();
            produced.into_iter().filter(|a| !self.fb.contains(a) && seen.insert(a.clone())).collect()
        };
        if produced.is_empty() {
            return Fire::Idle;
        }
        for s in &fresh {
            self.fb
                .declare_functor(&s.name, &s.domain, &s.codomain)
                .expect("fresh symbols have declared categories");
        }
        self.remaining -= fresh.len();
        let mut kept = Vec::new();
        for a in produced {
            match self.fb.insert(a.clone()) {
                Ok(_) => kept.push(a),
                Err(e) => self.deriv.conflicts.push(format!("{}: {e}", rule.id())),
            }
        }
        if kept.is_empty() {
            return Fire::Idle;
        }
        self.deriv.steps.push(Step { rule, consumed, produced: kept, fresh });
        Fire::Fired
    }

    fn sym(&self, name: &str) -> FunctorSym {
        self.fb.functor(name).cloned().expect("atoms reference declared symbols")
    }

    fn flag(&self, flag: FunctorFlag, name: &str) -> Option<Atom> {
        let a = Atom::flag(flag, name);
        self.fb.contains(&a).then_some(a)
    }

    fn cg(&self, cats: &[&str]) -> Option<Vec<Atom>> {
        cats.iter()
            .map(|c| {
                let a = Atom::compactly_generated(c);
                self.fb.contains(&a).then_some(a)
            })
            .collect::<Option<BTreeSet<Atom>>>()
            .map(|s| s.into_iter().collect())
    }

    fn run_rule(&mut self, rule: Rule) -> Fire {
        let mut any = Fire::Idle;
        let snapshot: Vec<Atom> = self.fb.atoms.clone();
        macro_rules! track {
            ($e:expr) => {
                match $e {
                    Fire::Idle => {}
                    Fire::Fired => any = Fire::Fired,
                    Fire::Blocked => return Fire::Blocked,
                }
            };
        }
        match rule {
            Rule::Def => {
                for a in &snapshot {
                    if let Atom::Recollement(r) = a {
                        let produced = vec![
                            Atom::adjoint(&r.q, &r.i),
                            Atom::adjoint(&r.i, &r.p),
                            Atom::adjoint(&r.l, &r.e),
                            Atom::adjoint(&r.e, &r.r),
                            Atom::flag(FunctorFlag::FullyFaithful, &r.i),
                            Atom::flag(FunctorFlag::FullyFaithful, &r.l),
                            Atom::flag(FunctorFlag::FullyFaithful, &r.r),
                            Atom::ExactSequence(r.i.clone(), r.e.clone()),
                            Atom::KernelEqualsImage(r.i.clone(), r.e.clone()),
                        ];
                        track!(self.commit(rule, vec![a.clone()], produced, Vec::new()));
                    }
                }
            }
            Rule::Lift => {
                for a in &snapshot {
                    if let Atom::AbelianAdjoint(f, g) = a {
                        let (Some(ff), Some(fg)) = (
                            self.flag(FunctorFlag::ExactAbelianOrigin, f),
                            self.flag(FunctorFlag::ExactAbelianOrigin, g),
                        ) else {
                            continue;
                        };
                        track!(self.commit(rule, vec![a.clone(), ff, fg], vec![Atom::adjoint(f, g)], Vec::new()));
                    }
                }
            }
            Rule::CpsLeft | Rule::CpsRight => {
                let left = rule == Rule::CpsLeft;
                for a in &snapshot {
                    let Atom::ExactSequence(i, e) = a else { continue };
                    let adj = |fb: &FactBase, x: &str| {
                        if left { fb.left_adjoint(x).map(String::from) } else { fb.right_adjoint(x).map(String::from) }
                    };
                    let pair = |x: &str, y: &str| if left { Atom::adjoint(x, y) } else { Atom::adjoint(y, x) };
                    let (ai, ae) = (adj(&self.fb, i), adj(&self.fb, e));
                    let (si, se) = (self.sym(i), self.sym(e));
                    let mut fresh = Vec::new();
                    let (consumed, produced) = match (ai, ae) {
                        (Some(x), None) => {
                            let base = if left { "l" } else { "r" };
                            let y = self.mint(base, &se.codomain, &se.domain, &mut fresh);
                            (
                                vec![a.clone(), pair(&x, i)],
                                vec![pair(&y, e), Atom::flag(FunctorFlag::FullyFaithful, &y)],
                            )
                        }
                        (None, Some(y)) => {
                            let base = if left { "q" } else { "p" };
                            let x = self.mint(base, &si.codomain, &si.domain, &mut fresh);
                            (vec![a.clone(), pair(&y, e)], vec![pair(&x, i)])
                        }
                        _ => continue,
                    };
                    track!(self.commit(rule, consumed, produced, fresh));
                }
            }
            Rule::Brown => {
                for a in &snapshot {
                    let Atom::Adjoint(f, g) = a else { continue };
                    let sf = self.sym(f);
                    let Some(cg) = self.cg(&[&sf.domain, &sf.codomain]) else { continue };
                    let mut consumed = vec![a.clone()];
                    consumed.extend(cg);
                    match self.fb.right_adjoint(g).map(String::from) {
                        Some(h) => {
                            consumed.push(Atom::adjoint(g, &h));
                            let produced = vec![
                                Atom::flag(FunctorFlag::PreservesCompacts, f),
                                Atom::flag(FunctorFlag::PreservesCoproducts, g),
                            ];
                            track!(self.commit(rule, consumed, produced, Vec::new()));
                        }
                        None => {
                            let trigger = self
                                .flag(FunctorFlag::PreservesCompacts, f)
                                .or_else(|| self.flag(FunctorFlag::PreservesCoproducts, g));
                            let Some(t) = trigger else { continue };
                            consumed.push(t);
                            let mut fresh = Vec::new();
                            let h = self.mint(&bump(g), &sf.domain, &sf.codomain, &mut fresh);
                            let produced = vec![
                                Atom::adjoint(g, &h),
                                Atom::flag(FunctorFlag::PreservesCompacts, f),
                                Atom::flag(FunctorFlag::PreservesCoproducts, g),
                            ];
                            track!(self.commit(rule, consumed, produced, fresh));
                        }
                    }
                }
            }
            Rule::H2Down | Rule::H2Up | Rule::Iter => {
                for c in chains(&self.fb) {
                    let anchor = c.members[c.anchor_pos];
                    let bottom = c.bottom();
                    let top = c.topmost();
                    let down_here = (rule == Rule::H2Down && bottom == anchor) || (rule == Rule::Iter && bottom != anchor);
                    let up_here = (rule == Rule::H2Up && top == anchor) || (rule == Rule::Iter && top != anchor);
                    if down_here {
                        track!(self.extend_down(rule, &c));
                    }
                    if up_here {
                        // The chain may have grown in this pass.
                        let c = chain_from(&self.fb, anchor);
                        track!(self.extend_up(rule, &c));
                    }
                }
            }
            Rule::Restrict => {
                for a in &snapshot {
                    let Atom::Recollement(r) = a else { continue };
                    let fd = FunctorFlag::RestrictsToFd;
                    let pc = FunctorFlag::PreservesCompacts;
                    let via = match (self.flag(fd, &r.l), self.flag(pc, &r.i)) {
                        (Some(x), Some(y)) => Some((x, y)),
                        _ => match (self.flag(fd, &r.q), self.flag(pc, &r.e)) {
                            (Some(x), Some(y)) => Some((x, y)),
                            _ => None,
                        },
                    };
                    let Some((x, y)) = via else { continue };
                    let produced = r.functors().iter().map(|f| Atom::flag(fd, f)).collect();
                    track!(self.commit(rule, vec![a.clone(), x, y], produced, Vec::new()));
                }
            }
        }
        any
    }

    fn extend_down(&mut self, rule: Rule, c: &Chain) -> Fire {
        let pos = c.bottom();
        let r = rec_at(&self.fb, pos).clone();
        let Some((u, t, v)) = self.fb.recollement_categories(&r) else { return Fire::Idle };
        let Some(cg) = self.cg(&[&u, &t, &v]) else { return Fire::Idle };
        let pc = FunctorFlag::PreservesCompacts;
        let p1 = self.fb.right_adjoint(&r.p).map(String::from);
        let r1 = self.fb.right_adjoint(&r.r).map(String::from);
        let trigger = self
            .flag(pc, &r.i)
            .or_else(|| self.flag(pc, &r.e))
            .or_else(|| p1.as_ref().map(|x| Atom::adjoint(&r.p, x)))
            .or_else(|| r1.as_ref().map(|x| Atom::adjoint(&r.r, x)));
        let Some(trigger) = trigger else { return Fire::Idle };
        let mut consumed = vec![Atom::Recollement(r.clone())];
        consumed.extend(cg);
        consumed.push(trigger);
        let mut produced = vec![Atom::flag(pc, &r.i), Atom::flag(pc, &r.e)];
        let index = c.bottom_row() + 1;
        let (pu, pv) = if c.bottom_flipped { (r1.as_deref(), p1.as_deref()) } else { (p1.as_deref(), r1.as_deref()) };
        let mut fresh = Vec::new();
        if c.revisit(index, pu, pv, true).is_none() {
            let p1 = match p1 {
                Some(x) => x,
                None => self.mint(&bump(&r.p), &u, &t, &mut fresh),
            };
            let r1 = match r1 {
                Some(x) => x,
                None => self.mint(&bump(&r.r), &t, &v, &mut fresh),
            };
            produced.push(Atom::adjoint(&r.p, &p1));
            produced.push(Atom::adjoint(&r.r, &r1));
            produced.push(Atom::Recollement(r.down(&p1, &r1)));
        }
        self.commit(rule, consumed, produced, fresh)
    }

    fn extend_up(&mut self, rule: Rule, c: &Chain) -> Fire {
        let pos = c.topmost();
        let r = rec_at(&self.fb, pos).clone();
        let Some((u, t, v)) = self.fb.recollement_categories(&r) else { return Fire::Idle };
        let Some(cg) = self.cg(&[&u, &t, &v]) else { return Fire::Idle };
        let q1 = self.fb.left_adjoint(&r.q).map(String::from);
        let l1 = self.fb.left_adjoint(&r.l).map(String::from);
        let trigger = q1
            .as_ref()
            .map(|x| Atom::adjoint(x, &r.q))
            .or_else(|| l1.as_ref().map(|x| Atom::adjoint(x, &r.l)));
        let Some(trigger) = trigger else { return Fire::Idle };
        let mut consumed = vec![Atom::Recollement(r.clone())];
        consumed.extend(cg);
        consumed.push(trigger);
        let index = c.top - 1;
        let (qu, qv) = if c.top_flipped { (l1.as_deref(), q1.as_deref()) } else { (q1.as_deref(), l1.as_deref()) };
        if c.revisit(index, qu, qv, false).is_some() {
            return Fire::Idle;
        }
        let mut fresh = Vec::new();
        let q1 = match q1 {
            Some(x) => x,
            None => self.mint(&bump(&r.q), &u, &t, &mut fresh),
        };
        let l1 = match l1 {
            Some(x) => x,
            None => self.mint(&bump(&r.l), &t, &v, &mut fresh),
        };
        let produced = vec![Atom::adjoint(&q1, &r.q), Atom::adjoint(&l1, &r.l), Atom::Recollement(r.up(&q1, &l1))];
        self.commit(rule, consumed, produced, fresh)
    }
}

/// Applies the rules in [`Rule::ORDER`] until nothing changes or a rule
/// needs more than `budget` fresh symbols in total.
pub fn derive_closure(fb: &FactBase, budget: usize) -> (FactBase, Derivation) {
    let mut eng = Engine {
        fb: fb.clone(),
        deriv: Derivation { budget, ..Default::default() },
        remaining: budget,
    };
    'outer: loop {
        let mut changed = false;
        for rule in Rule::ORDER {
            match eng.run_rule(rule) {
                Fire::Idle => {}
                Fire::Fired => changed = true,
                Fire::Blocked => break 'outer,
            }
        }
        if !changed {
            break;
        }
    }
    (eng.fb, eng.deriv)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Height {
    Finite(usize),
    /// The chain stopped because the fresh-symbol budget ran out.
    AtLeast(usize),
    Infinite { period: usize },
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(n) => write!(f, "{n}"),
            Height::AtLeast(n) => write!(f, "height >= {n} (budget exhausted)"),
            Height::Infinite { period } => write!(f, "(infinite, period {period})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Down,
    Up,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderReport {
    pub anchor: Recollement,
    /// `(U, T, V)` of the anchor.
    pub categories: (String, String, String),
    pub height_down: Height,
    pub height_up: Height,
    /// Rows from the anchor's top row downwards.
    pub rows_down: Vec<Row>,
    /// Rows from the anchor's bottom row upwards.
    pub rows_up: Vec<Row>,
    pub notes: Vec<String>,
}

impl LadderReport {
    pub fn height(&self, dir: Direction) -> Height {
        match dir {
            Direction::Down => self.height_down,
            Direction::Up => self.height_up,
        }
    }
}

fn walk(fb: &FactBase, c: &Chain, dir: Direction, exhausted: bool) -> (Height, Vec<Row>) {
    let down = dir == Direction::Down;
    let anchor = c.anchor_pos;
    let steps = if down { c.members.len() - 1 - anchor } else { anchor };
    let height = 1 + steps;
    // Rows on this side of the anchor, checked for repeats as they appear.
    let mut seen = Chain { rows: BTreeMap::new(), ..chain_stub() };
    let range: Vec<i64> = if down {
        (0..=c.bottom_row()).collect()
    } else {
        (c.top..=2).rev().collect()
    };
    let mut rows = Vec::new();
    for k in range {
        let (u, v) = c.rows[&k].clone();
        if let Some(p) = seen.revisit(k, Some(&u), Some(&v), down) {
            return (Height::Infinite { period: p as usize }, rows);
        }
        seen.rows.insert(k, (u.clone(), v.clone()));
        rows.push(Row { index: k, u_side: u, v_side: v });
    }
    // The next row is not assembled: see whether it would close a cycle.
    let (edge, flipped, next) = if down {
        (c.bottom(), c.bottom_flipped, c.bottom_row() + 1)
    } else {
        (c.topmost(), c.top_flipped, c.top - 1)
    };
    let r = rec_at(fb, edge);
    let (a, b) = if down {
        (fb.right_adjoint(&r.p), fb.right_adjoint(&r.r))
    } else {
        (fb.left_adjoint(&r.q), fb.left_adjoint(&r.l))
    };
    let (u, v) = if flipped { (b, a) } else { (a, b) };
    if let Some(p) = seen.revisit(next, u, v, down) {
        return (Height::Infinite { period: p as usize }, rows);
    }
    if exhausted {
        (Height::AtLeast(height), rows)
    } else {
        (Height::Finite(height), rows)
    }
}

fn chain_stub() -> Chain {
    Chain {
        members: Vec::new(),
        anchor_pos: 0,
        rows: BTreeMap::new(),
        top: 0,
        top_flipped: false,
        bottom_flipped: false,
    }
}

/// Heights of the ladder through the first recollement atom of `fb`.
/// Pass the closure; `exhausted` marks chains cut by the budget.
pub fn ladder_height_with(fb: &FactBase, exhausted: bool) -> Result<LadderReport> {
    let anchor = fb
        .atoms
        .iter()
        .position(|a| matches!(a, Atom::Recollement(_)))
        .ok_or_else(|| Error::Precondition("fact base has no recollement atom".into()))?;
    let c = chain_from(fb, anchor);
    let (height_down, rows_down) = walk(fb, &c, Direction::Down, exhausted);
    let (height_up, rows_up) = walk(fb, &c, Direction::Up, exhausted);
    let r = rec_at(fb, anchor).clone();
    let categories = fb.recollement_categories(&r).expect("recollement atoms are typed");
    let mut notes = Vec::new();
    for (name, h) in [("down", height_down), ("up", height_up)] {
        if let Height::Finite(n) | Height::AtLeast(n) = h {
            if n >= 4 && n % 2 == 0 {
                notes.push(format!(
                    "height {n} {name}: by analogy (the iterated criterion is stated for odd heights, the even case is similar)"
                ));
            }
        }
    }
    Ok(LadderReport { anchor: r, categories, height_down, height_up, rows_down, rows_up, notes })
}

/// [`ladder_height_with`] for a closure that did not run out of budget.
pub fn ladder_height(fb: &FactBase) -> Result<LadderReport> {
    ladder_height_with(fb, false)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TtfSequence {
    pub direction: Direction,
    /// Subcategories `F(C)`, top to bottom.
    pub entries: Vec<String>,
    /// Index triples of consecutive entries forming TTF-triples.
    pub triples: Vec<[usize; 3]>,
    pub wraparound: Option<String>,
}

/// The image of the row functor that lands in the middle category.
fn row_image(fb: &FactBase, t: &str, row: &Row) -> String {
    for f in [&row.u_side, &row.v_side] {
        if let Some(s) = fb.functor(f) {
            if s.codomain == t {
                return format!("{}({})", s.name, s.domain);
            }
        }
    }
    format!("?({},{})", row.u_side, row.v_side)
}

/// Subcategory sequence `l(V), i(U), r(V), p¹(U), ...` whose consecutive
/// triples are TTF-triples in the middle category.
pub fn ttf_sequence(report: &LadderReport, fb: &FactBase, dir: Direction) -> TtfSequence {
    let t = &report.categories.1;
    let rows: Vec<Row> = match dir {
        Direction::Down => report.rows_down.clone(),
        Direction::Up => report.rows_up.iter().rev().cloned().collect(),
    };
    let images: Vec<String> = rows.iter().map(|r| row_image(fb, t, r)).collect();
    let (entries, wraparound) = match report.height(dir) {
        Height::Infinite { period } => {
            let period = period.min(images.len());
            match dir {
                Direction::Down => {
                    let mut e: Vec<String> = images[..period].to_vec();
                    e.extend(images[..2.min(period)].iter().cloned());
                    let note = format!("entries {} and {} repeat entries 0 and 1 (period {period})", period, period + 1);
                    (e, Some(note))
                }
                Direction::Up => {
                    let body = &images[images.len() - period..];
                    let mut e: Vec<String> = body[body.len() - 2.min(period)..].to_vec();
                    e.extend(body.iter().cloned());
                    let note = format!(
                        "entries 0 and 1 repeat the last two entries (period {period})"
                    );
                    (e, Some(note))
                }
            }
        }
        _ => (images, None),
    };
    let triples = (0..entries.len().saturating_sub(2)).map(|k| [k, k + 1, k + 2]).collect();
    TtfSequence { direction: dir, entries, triples, wraparound }
}

/// Steps justifying `atom`, in derivation order. Seed atoms have an empty
/// trace.
pub fn explain(closure: &FactBase, deriv: &Derivation, atom: &Atom) -> Result<Vec<Step>> {
    if !closure.contains(atom) {
        return Err(Error::Precondition(format!("{atom} is not in the closure")));
    }
    let mut producer: BTreeMap<&Atom, usize> = BTreeMap::new();
    let mut minted: BTreeMap<&str, usize> = BTreeMap::new();
    for (k, s) in deriv.steps.iter().enumerate() {
        for a in &s.produced {
            producer.entry(a).or_insert(k);
        }
        for f in &s.fresh {
            minted.entry(f.name.as_str()).or_insert(k);
        }
    }
    let mut needed = BTreeSet::new();
    let mut stack: Vec<&Atom> = vec![atom];
    while let Some(a) = stack.pop() {
        let mut deps: Vec<usize> = producer.get(a).copied().into_iter().collect();
        deps.extend(a.functors().iter().filter_map(|f| minted.get(f).copied()));
        for k in deps {
            if needed.insert(k) {
                stack.extend(deriv.steps[k].consumed.iter());
                for f in &deriv.steps[k].fresh {
                    if let Some(&m) = minted.get(f.name.as_str()) {
                        if m != k && needed.insert(m) {
                            stack.extend(deriv.steps[m].consumed.iter());
                        }
                    }
                }
            }
        }
    }
    Ok(needed.into_iter().map(|k| deriv.steps[k].clone()).collect())
}

/// Re-applies recorded steps to `base`, checking each step's premises.
pub fn replay(base: &FactBase, steps: &[Step]) -> Result<FactBase> {
    let mut fb = base.clone();
    for (k, s) in steps.iter().enumerate() {
        for f in &s.fresh {
            fb.declare_functor(&f.name, &f.domain, &f.codomain)?;
        }
        if let Some(missing) = s.consumed.iter().find(|a| !fb.contains(a)) {
            return Err(Error::Precondition(format!("step {k} ({}) lacks premise {missing}", s.rule)));
        }
        for a in &s.produced {
            fb.insert(a.clone())?;
        }
    }
    Ok(fb)
}

fn declare_all(fb: &mut FactBase, cats: &[&str], functors: &[(&str, &str, &str)]) {
    for c in cats {
        fb.declare_category(c).expect("builtin category");
    }
    for (f, d, c) in functors {
        fb.declare_functor(f, d, c).expect("builtin functor");
    }
}

/// `U --i--> T --e--> V` with the standard six symbols and no flags.
pub fn builtin_bare() -> FactBase {
    let mut fb = FactBase::new();
    declare_all(
        &mut fb,
        &["U", "T", "V"],
        &[("q", "T", "U"), ("i", "U", "T"), ("p", "T", "U"), ("l", "V", "T"), ("e", "T", "V"), ("r", "V", "T")],
    );
    fb.insert(Atom::Recollement(Recollement::new("q", "i", "p", "l", "e", "r")))
        .expect("builtin atom");
    fb
}

/// The bare recollement over compactly generated categories with `i`
/// preserving compact objects.
pub fn builtin_compact_i() -> FactBase {
    let mut fb = builtin_bare();
    for c in ["U", "T", "V"] {
        fb.insert(Atom::compactly_generated(c)).expect("builtin atom");
    }
    fb.insert(Atom::flag(FunctorFlag::PreservesCompacts, "i")).expect("builtin atom");
    fb
}

/// Derived categories of Γ, Πn(Λ) and Λ with the gluing recollement whose
/// `V` side is `(T1, U1, T2)`, and the four exact abelian adjunctions of
/// the period-four cycle.
pub fn builtin_preprojective() -> FactBase {
    let (g, pi, lam) = ("D(Gamma)", "D(Pi)", "D(Lambda)");
    let mut fb = FactBase::new();
    declare_all(
        &mut fb,
        &[g, pi, lam],
        &[
            ("q", pi, g),
            ("i", g, pi),
            ("p", pi, g),
            ("T1", lam, pi),
            ("U1", pi, lam),
            ("T2", lam, pi),
            ("U2", pi, lam),
        ],
    );
    for c in [g, pi, lam] {
        fb.insert(Atom::compactly_generated(c)).expect("builtin atom");
    }
    for f in ["T1", "U1", "T2", "U2"] {
        fb.insert(Atom::flag(FunctorFlag::ExactAbelianOrigin, f)).expect("builtin atom");
    }
    for (f, h) in [("T1", "U1"), ("U1", "T2"), ("T2", "U2"), ("U2", "T1")] {
        fb.insert(Atom::abelian_adjoint(f, h)).expect("builtin atom");
    }
    fb.insert(Atom::Recollement(Recollement::new("q", "i", "p", "T1", "U1", "T2")))
        .expect("builtin atom");
    fb
}

/// Looks up `builtin:<name>` fact bases.
pub fn builtin(name: &str) -> Option<FactBase> {
    match name {
        "preprojective" => Some(builtin_preprojective()),
        "bare" => Some(builtin_bare()),
        "compact-i" => Some(builtin_compact_i()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closure(fb: &FactBase) -> (FactBase, Derivation, LadderReport) {
        let (c, d) = derive_closure(fb, DEFAULT_BUDGET);
        let rep = ladder_height_with(&c, d.exhausted).unwrap();
        (c, d, rep)
    }

    #[test]
    fn add_fact_basics() {
        let mut fb = FactBase::new();
        fb.declare_category("A").unwrap();
        fb.declare_category("B").unwrap();
        fb.declare_functor("T1", "A", "B").unwrap();
        fb.declare_functor("U1", "B", "A").unwrap();
        let fb2 = fb.add_fact(Atom::adjoint("T1", "U1")).unwrap();
        assert!(fb2.contains(&Atom::adjoint("T1", "U1")));
        assert_eq!(fb2.add_fact(Atom::adjoint("T1", "U1")).unwrap(), fb2);
        assert!(matches!(fb.add_fact(Atom::adjoint("T1", "G")), Err(Error::Undeclared(_))));
        assert!(matches!(fb.add_fact(Atom::adjoint("T1", "T1")), Err(Error::Contradiction(_))));
        let on = fb.add_fact(Atom::flag(FunctorFlag::PreservesCompacts, "T1")).unwrap();
        let off = Atom::Functor { flag: FunctorFlag::PreservesCompacts, name: "T1".into(), holds: false };
        assert!(matches!(on.add_fact(off), Err(Error::Contradiction(_))));
    }

    #[test]
    fn atoms_round_trip_through_text() {
        for s in [
            "adjoint(F,G)",
            "abelian_adjoint(T1,U1)",
            "recollement(q,i,p;l,e,r)",
            "not preserves_compacts(i)",
            "compactly_generated(D(Pi))",
            "exact_sequence(i,e)",
        ] {
            assert_eq!(Atom::parse(s).unwrap().to_string(), s);
        }
        assert!(Atom::parse("adjoint(F)").is_err());
        assert!(Atom::parse("recollement(q,i,p,l,e,r)").is_err());
    }

    #[test]
    fn bump_names() {
        assert_eq!(bump("p"), "p¹");
        assert_eq!(bump("p¹"), "p²");
        assert_eq!(bump("r⁹"), "r¹⁰");
        assert_eq!(bump("T2"), "T2¹");
    }

    #[test]
    fn bare_recollement_has_height_one() {
        let (c, d, rep) = closure(&builtin_bare());
        assert_eq!(rep.height_down, Height::Finite(1));
        assert_eq!(rep.height_up, Height::Finite(1));
        assert!(d.steps.iter().all(|s| s.rule == Rule::Def && s.fresh.is_empty()));
        assert_eq!(c.recollements().count(), 1);
        let t = ttf_sequence(&rep, &c, Direction::Down);
        assert_eq!(t.entries, ["l(V)", "i(U)", "r(V)"]);
    }

    #[test]
    fn compact_i_gives_height_two_down() {
        let (c, d, rep) = closure(&builtin_compact_i());
        assert_eq!(rep.height_down, Height::Finite(2));
        assert_eq!(rep.height_up, Height::Finite(1));
        assert!(c.contains(&Atom::adjoint("p", "p¹")));
        assert!(c.contains(&Atom::adjoint("r", "r¹")));
        assert!(c.contains(&Atom::flag(FunctorFlag::PreservesCompacts, "e")));
        let t = ttf_sequence(&rep, &c, Direction::Down);
        assert_eq!(t.entries, ["l(V)", "i(U)", "r(V)", "p¹(U)"]);
        assert_eq!(t.triples.len(), 2);
        let p1 = explain(&c, &d, &Atom::adjoint("p", "p¹")).unwrap();
        assert!(p1.iter().any(|s| s.rule == Rule::Brown || s.rule == Rule::H2Down));
    }

    #[test]
    fn preprojective_base_is_periodic() {
        let (c, d, rep) = closure(&builtin_preprojective());
        assert!(!d.exhausted);
        assert_eq!(rep.height_down, Height::Infinite { period: 4 });
        assert_eq!(rep.height_up, Height::Infinite { period: 4 });
        for (f, g) in [("U2", "T1"), ("T1", "U1"), ("U1", "T2"), ("T2", "U2")] {
            assert!(c.contains(&Atom::adjoint(f, g)), "{f} ⊣ {g}");
        }
        let down = ttf_sequence(&rep, &c, Direction::Down);
        assert_eq!(down.entries.len(), 6);
        assert_eq!(down.entries[4], down.entries[0]);
        assert!(down.wraparound.is_some());
        let up = ttf_sequence(&rep, &c, Direction::Up);
        assert_eq!(up.entries.len(), 6);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let (c, d) = derive_closure(&builtin_compact_i(), 1);
        assert!(d.exhausted);
        let rep = ladder_height_with(&c, d.exhausted).unwrap();
        assert_eq!(rep.height_down, Height::AtLeast(1));
    }

    #[test]
    fn no_recollement_is_an_error() {
        assert!(ladder_height(&FactBase::new()).is_err());
    }

    #[test]
    fn seed_atoms_have_empty_traces() {
        let fb = builtin_bare();
        let (c, d) = derive_closure(&fb, DEFAULT_BUDGET);
        let seed = fb.atoms()[0].clone();
        assert!(explain(&c, &d, &seed).unwrap().is_empty());
        assert!(explain(&c, &d, &Atom::adjoint("e", "l")).is_err());
    }
}
