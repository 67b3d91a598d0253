//! The gluing functors between Λ-modules and tuples, their adjunctions,
//! the flip equivalence, the Nakayama functor, and checks of both
//! recollements.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algcore::{AModule, ModMap, PresentedAlgebra};
use crate::category::{iso_test, AbelianCategory, ModuleCategory};
use crate::error::{Error, Result};
use crate::exactlin::{EchelonBasis, Field, Matrix};
use crate::pimod::{check_pi_relations, pi_cokernel, random_pi_module, PiCategory, PiModule, PiMorphism};
use crate::report::Report;
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctorName {
    T1,
    T2,
    U1,
    U2,
    Z1,
    Z2,
    Flip,
    Nakayama,
    NakayamaInv,
}

impl FunctorName {
    pub const ALL: [FunctorName; 9] = [
        FunctorName::T1,
        FunctorName::T2,
        FunctorName::U1,
        FunctorName::U2,
        FunctorName::Z1,
        FunctorName::Z2,
        FunctorName::Flip,
        FunctorName::Nakayama,
        FunctorName::NakayamaInv,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FunctorName::T1 => "T1",
            FunctorName::T2 => "T2",
            FunctorName::U1 => "U1",
            FunctorName::U2 => "U2",
            FunctorName::Z1 => "Z1",
            FunctorName::Z2 => "Z2",
            FunctorName::Flip => "Flip",
            FunctorName::Nakayama => "Nakayama",
            FunctorName::NakayamaInv => "NakayamaInv",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|f| f.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown functor {s:?}")))
    }

    pub fn domain(self) -> Domain {
        match self {
            FunctorName::T1 | FunctorName::T2 => Domain::Lambda,
            FunctorName::Z1 | FunctorName::Z2 => Domain::PiShort,
            _ => Domain::Pi,
        }
    }

    pub fn codomain(self) -> Domain {
        match self {
            FunctorName::U1 | FunctorName::U2 => Domain::Lambda,
            _ => Domain::Pi,
        }
    }
}

impl fmt::Display for FunctorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where objects live: Λ-modules, tuples of length `n`, or tuples of
/// length `n - 1` (the domain of `Z1` and `Z2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Lambda,
    Pi,
    PiShort,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Obj<F: Field> {
    Lam(AModule<F>),
    Pi(PiModule<F>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Mor<F: Field> {
    Lam(ModMap<F>),
    Pi(PiMorphism<F>),
}

impl<F: Field> Obj<F> {
    pub fn dim(&self) -> usize {
        match self {
            Obj::Lam(x) => x.dim(),
            Obj::Pi(m) => m.dim(),
        }
    }

    pub fn as_lam(&self) -> Result<&AModule<F>> {
        match self {
            Obj::Lam(x) => Ok(x),
            Obj::Pi(_) => Err(Error::Invalid("expected a Λ-module".into())),
        }
    }

    pub fn as_pi(&self) -> Result<&PiModule<F>> {
        match self {
            Obj::Pi(m) => Ok(m),
            Obj::Lam(_) => Err(Error::Invalid("expected a tuple".into())),
        }
    }
}

impl<F: Field> Mor<F> {
    pub fn source(&self) -> Obj<F> {
        match self {
            Mor::Lam(m) => Obj::Lam(m.source.clone()),
            Mor::Pi(m) => Obj::Pi(m.source.clone()),
        }
    }

    pub fn target(&self) -> Obj<F> {
        match self {
            Mor::Lam(m) => Obj::Lam(m.target.clone()),
            Mor::Pi(m) => Obj::Pi(m.target.clone()),
        }
    }

    /// `self ∘ g`.
    pub fn after(&self, g: &Self) -> Result<Self> {
        match (self, g) {
            (Mor::Lam(a), Mor::Lam(b)) => Ok(Mor::Lam(a.after(b))),
            (Mor::Pi(a), Mor::Pi(b)) => Ok(Mor::Pi(a.after(b))),
            _ => Err(Error::Invalid("composing morphisms of different kinds".into())),
        }
    }

    pub fn as_lam(&self) -> Result<&ModMap<F>> {
        match self {
            Mor::Lam(x) => Ok(x),
            Mor::Pi(_) => Err(Error::Invalid("expected a Λ-map".into())),
        }
    }

    pub fn as_pi(&self) -> Result<&PiMorphism<F>> {
        match self {
            Mor::Pi(m) => Ok(m),
            Mor::Lam(_) => Err(Error::Invalid("expected a tuple morphism".into())),
        }
    }
}

fn ident<F: Field>(f: &F, d: usize) -> Matrix<F> {
    Matrix::identity(f, d)
}

/// `T1(X) = (X, ..., X; f = Id, g = 0)`.
pub fn t1<F: Field>(n: usize, x: &AModule<F>) -> PiModule<F> {
    let fl = x.field();
    let d = x.dim();
    PiModule::unchecked(x.algebra(), vec![x.clone(); n], vec![ident(fl, d); n - 1], vec![Matrix::zeros(fl, d, d); n - 1])
        .expect("T1 shapes")
}

/// `T2(X) = (X, ..., X; f = 0, g = Id)`.
pub fn t2<F: Field>(n: usize, x: &AModule<F>) -> PiModule<F> {
    let fl = x.field();
    let d = x.dim();
    PiModule::unchecked(x.algebra(), vec![x.clone(); n], vec![Matrix::zeros(fl, d, d); n - 1], vec![ident(fl, d); n - 1])
        .expect("T2 shapes")
}

pub fn u1<F: Field>(m: &PiModule<F>) -> AModule<F> {
    m.part(0).clone()
}

pub fn u2<F: Field>(m: &PiModule<F>) -> AModule<F> {
    m.part(m.n() - 1).clone()
}

/// Appends a zero part on the right.
pub fn z1<F: Field>(m: &PiModule<F>) -> PiModule<F> {
    let fl = m.field();
    let mut parts = m.parts().to_vec();
    parts.push(AModule::zero(m.lam()));
    let last = m.part(m.n() - 1).dim();
    let mut f = m.fs().to_vec();
    f.push(Matrix::zeros(fl, 0, last));
    let mut g = m.gs().to_vec();
    g.push(Matrix::zeros(fl, last, 0));
    PiModule::unchecked(m.lam(), parts, f, g).expect("Z1 shapes")
}

/// Prepends a zero part on the left.
pub fn z2<F: Field>(m: &PiModule<F>) -> PiModule<F> {
    let fl = m.field();
    let mut parts = vec![AModule::zero(m.lam())];
    parts.extend(m.parts().iter().cloned());
    let first = m.part(0).dim();
    let mut f = vec![Matrix::zeros(fl, first, 0)];
    f.extend(m.fs().iter().cloned());
    let mut g = vec![Matrix::zeros(fl, 0, first)];
    g.extend(m.gs().iter().cloned());
    PiModule::unchecked(m.lam(), parts, f, g).expect("Z2 shapes")
}

/// Reverses the parts; the reversed `g` maps become the forward maps.
pub fn flip<F: Field>(m: &PiModule<F>) -> PiModule<F> {
    let mut parts = m.parts().to_vec();
    parts.reverse();
    let mut f = m.gs().to_vec();
    f.reverse();
    let mut g = m.fs().to_vec();
    g.reverse();
    PiModule::unchecked(m.lam(), parts, f, g).expect("Flip shapes")
}

pub fn t1_mor<F: Field>(n: usize, a: &ModMap<F>) -> PiMorphism<F> {
    PiMorphism { source: t1(n, &a.source), target: t1(n, &a.target), comps: vec![a.matrix.clone(); n] }
}

pub fn t2_mor<F: Field>(n: usize, a: &ModMap<F>) -> PiMorphism<F> {
    PiMorphism { source: t2(n, &a.source), target: t2(n, &a.target), comps: vec![a.matrix.clone(); n] }
}

pub fn u1_mor<F: Field>(a: &PiMorphism<F>) -> ModMap<F> {
    ModMap { source: u1(&a.source), target: u1(&a.target), matrix: a.comps[0].clone() }
}

pub fn u2_mor<F: Field>(a: &PiMorphism<F>) -> ModMap<F> {
    ModMap { source: u2(&a.source), target: u2(&a.target), matrix: a.comps[a.comps.len() - 1].clone() }
}

pub fn z1_mor<F: Field>(a: &PiMorphism<F>) -> PiMorphism<F> {
    let mut comps = a.comps.clone();
    comps.push(Matrix::zeros(a.source.field(), 0, 0));
    PiMorphism { source: z1(&a.source), target: z1(&a.target), comps }
}

pub fn z2_mor<F: Field>(a: &PiMorphism<F>) -> PiMorphism<F> {
    let mut comps = vec![Matrix::zeros(a.source.field(), 0, 0)];
    comps.extend(a.comps.iter().cloned());
    PiMorphism { source: z2(&a.source), target: z2(&a.target), comps }
}

pub fn flip_mor<F: Field>(a: &PiMorphism<F>) -> PiMorphism<F> {
    let mut comps = a.comps.clone();
    comps.reverse();
    PiMorphism { source: flip(&a.source), target: flip(&a.target), comps }
}

/// The ambient data for the functors: Λ, the tuple category of length
/// `n`, and the module category of Λ.
#[derive(Clone, Debug)]
pub struct Functors<F: Field> {
    pub pi: PiCategory<F>,
    pub lam: ModuleCategory<F>,
}

impl<F: Field> Functors<F> {
    pub fn new(lam: &Arc<PresentedAlgebra<F>>, n: usize) -> Result<Self> {
        Ok(Functors { pi: PiCategory::new(lam, n)?, lam: ModuleCategory::new(lam) })
    }

    pub fn n(&self) -> usize {
        self.pi.ctx.n()
    }

    pub fn algebra(&self) -> &Arc<PresentedAlgebra<F>> {
        self.lam.algebra()
    }

    pub fn field(&self) -> &F {
        self.lam.field()
    }

    fn check_domain(&self, name: FunctorName, x: &Obj<F>) -> Result<()> {
        let n = self.n();
        let ok = match (name.domain(), x) {
            (Domain::Lambda, Obj::Lam(_)) => true,
            (Domain::Pi, Obj::Pi(m)) => m.n() == n,
            (Domain::PiShort, Obj::Pi(m)) => n >= 2 && m.n() == n - 1,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!("{name} cannot be applied to this object")))
        }
    }

    pub fn apply(&self, name: FunctorName, x: &Obj<F>) -> Result<Obj<F>> {
        self.check_domain(name, x)?;
        let n = self.n();
        Ok(match name {
            FunctorName::T1 => Obj::Pi(t1(n, x.as_lam()?)),
            FunctorName::T2 => Obj::Pi(t2(n, x.as_lam()?)),
            FunctorName::U1 => Obj::Lam(u1(x.as_pi()?)),
            FunctorName::U2 => Obj::Lam(u2(x.as_pi()?)),
            FunctorName::Z1 => Obj::Pi(z1(x.as_pi()?)),
            FunctorName::Z2 => Obj::Pi(z2(x.as_pi()?)),
            FunctorName::Flip => Obj::Pi(flip(x.as_pi()?)),
            FunctorName::Nakayama => Obj::Pi(self.nakayama(x.as_pi()?)?),
            FunctorName::NakayamaInv => Obj::Pi(self.nakayama_inv(x.as_pi()?)?),
        })
    }

    pub fn apply_mor(&self, name: FunctorName, a: &Mor<F>) -> Result<Mor<F>> {
        self.check_domain(name, &a.source())?;
        let n = self.n();
        Ok(match name {
            FunctorName::T1 => Mor::Pi(t1_mor(n, a.as_lam()?)),
            FunctorName::T2 => Mor::Pi(t2_mor(n, a.as_lam()?)),
            FunctorName::U1 => Mor::Lam(u1_mor(a.as_pi()?)),
            FunctorName::U2 => Mor::Lam(u2_mor(a.as_pi()?)),
            FunctorName::Z1 => Mor::Pi(z1_mor(a.as_pi()?)),
            FunctorName::Z2 => Mor::Pi(z2_mor(a.as_pi()?)),
            FunctorName::Flip => Mor::Pi(flip_mor(a.as_pi()?)),
            FunctorName::Nakayama | FunctorName::NakayamaInv => {
                return Err(Error::Unsupported("the Nakayama functors act on objects only".into()))
            }
        })
    }

    pub fn identity(&self, x: &Obj<F>) -> Mor<F> {
        match x {
            Obj::Lam(x) => Mor::Lam(ModMap::identity(x)),
            Obj::Pi(m) => Mor::Pi(PiMorphism::identity(m)),
        }
    }

    pub fn hom_basis(&self, x: &Obj<F>, y: &Obj<F>) -> Result<Vec<Mor<F>>> {
        match (x, y) {
            (Obj::Lam(a), Obj::Lam(b)) => Ok(self.lam.hom_basis(a, b).into_iter().map(Mor::Lam).collect()),
            (Obj::Pi(a), Obj::Pi(b)) => Ok(crate::pimod::pi_hom(a, b)?.into_iter().map(Mor::Pi).collect()),
            _ => Err(Error::Invalid("hom between objects of different kinds".into())),
        }
    }

    pub fn coords(&self, m: &Mor<F>) -> Vec<F::Elem> {
        match m {
            Mor::Lam(a) => self.lam.coords(a),
            Mor::Pi(a) => self.pi.coords(a),
        }
    }

    /// Rank of a family of morphisms with common source and target.
    pub fn rank(&self, ms: &[Mor<F>]) -> usize {
        let Some(first) = ms.first() else { return 0 };
        let mut e = EchelonBasis::new(self.field(), self.coords(first).len());
        for m in ms {
            e.insert(self.coords(m));
        }
        e.rank()
    }

    pub fn random_obj(&self, domain: Domain, rng: &mut SplitMix64) -> Obj<F> {
        match domain {
            Domain::Lambda => Obj::Lam(AModule::random(self.algebra(), rng, 2)),
            Domain::Pi => Obj::Pi(self.pi.ctx.random_module(rng, 2)),
            Domain::PiShort => Obj::Pi(random_pi_module(self.algebra(), self.n() - 1, rng, 2)),
        }
    }

    /// A random combination of a hom basis (zero if the space is zero).
    pub fn random_mor(&self, x: &Obj<F>, y: &Obj<F>, rng: &mut SplitMix64) -> Result<Mor<F>> {
        let fl = self.field();
        let basis = self.hom_basis(x, y)?;
        Ok(match (x, y) {
            (Obj::Lam(a), Obj::Lam(b)) => {
                let ms: Vec<&ModMap<F>> = basis.iter().map(|m| m.as_lam().expect("Λ-map")).collect();
                let terms: Vec<(F::Elem, &ModMap<F>)> = ms.into_iter().map(|m| (fl.random(rng), m)).collect();
                Mor::Lam(self.lam.lin_comb(a, b, &terms))
            }
            (Obj::Pi(a), Obj::Pi(b)) => {
                let ms: Vec<&PiMorphism<F>> = basis.iter().map(|m| m.as_pi().expect("tuple morphism")).collect();
                let terms: Vec<(F::Elem, &PiMorphism<F>)> = ms.into_iter().map(|m| (fl.random(rng), m)).collect();
                Mor::Pi(self.pi.lin_comb(a, b, &terms))
            }
            _ => unreachable!("hom_basis rejects mixed kinds"),
        })
    }

    /// Whether the functor is fully faithful on the pair: hom dimensions
    /// agree and the induced map on hom spaces is injective.
    pub fn fully_faithful_on(&self, name: FunctorName, x: &Obj<F>, y: &Obj<F>) -> Result<bool> {
        let hs = self.hom_basis(x, y)?;
        let fx = self.apply(name, x)?;
        let fy = self.apply(name, y)?;
        let target_dim = self.hom_basis(&fx, &fy)?.len();
        let images = hs.iter().map(|h| self.apply_mor(name, h)).collect::<Result<Vec<_>>>()?;
        Ok(target_dim == hs.len() && self.rank(&images) == hs.len())
    }
}

/// The adjoint pairs of the period-four cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pair {
    T1U1,
    U1T2,
    T2U2,
    U2T1,
}

impl Pair {
    pub const CYCLE: [Pair; 4] = [Pair::T1U1, Pair::U1T2, Pair::T2U2, Pair::U2T1];

    pub fn left(self) -> FunctorName {
        match self {
            Pair::T1U1 => FunctorName::T1,
            Pair::U1T2 => FunctorName::U1,
            Pair::T2U2 => FunctorName::T2,
            Pair::U2T1 => FunctorName::U2,
        }
    }

    pub fn right(self) -> FunctorName {
        match self {
            Pair::T1U1 => FunctorName::U1,
            Pair::U1T2 => FunctorName::T2,
            Pair::T2U2 => FunctorName::U2,
            Pair::U2T1 => FunctorName::T1,
        }
    }

    pub fn from_names(left: FunctorName, right: FunctorName) -> Option<Pair> {
        Self::CYCLE.iter().copied().find(|p| p.left() == left && p.right() == right)
    }

    pub fn label(self) -> String {
        format!("({},{})", self.left(), self.right())
    }
}

/// Unit and counit of an adjoint pair, built from closed formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdjunctionData {
    pub pair: Pair,
}

/// Counit `T1 U1 M -> M`: components `Id, f1, f2 f1, ...`.
fn counit_t1u1<F: Field>(m: &PiModule<F>) -> PiMorphism<F> {
    let n = m.n();
    let x1 = m.part(0);
    let mut comps = vec![ident(m.field(), x1.dim())];
    for i in 0..n - 1 {
        let next = m.f(i).mul(&comps[i]);
        comps.push(next);
    }
    PiMorphism { source: t1(n, x1), target: m.clone(), comps }
}

/// Unit `M -> T2 U1 M`: components `Id, g1, g1 g2, ...`.
fn unit_u1t2<F: Field>(m: &PiModule<F>) -> PiMorphism<F> {
    let n = m.n();
    let x1 = m.part(0);
    let mut comps = vec![ident(m.field(), x1.dim())];
    for i in 0..n - 1 {
        let next = comps[i].mul(m.g(i));
        comps.push(next);
    }
    PiMorphism { source: m.clone(), target: t2(n, x1), comps }
}

impl AdjunctionData {
    pub fn new(pair: Pair) -> Self {
        AdjunctionData { pair }
    }

    pub fn left(&self) -> FunctorName {
        self.pair.left()
    }

    pub fn right(&self) -> FunctorName {
        self.pair.right()
    }

    /// The unit `x -> R L x` for `x` in the domain of the left adjoint.
    pub fn unit<F2: Field>(&self, fs: &Functors<F2>, x: &Obj<F2>) -> Result<Mor<F2>> {
        let n = fs.n();
        Ok(match self.pair {
            Pair::T1U1 | Pair::T2U2 => Mor::Lam(ModMap::identity(x.as_lam()?)),
            Pair::U1T2 => Mor::Pi(unit_u1t2(x.as_pi()?)),
            Pair::U2T1 => {
                let m = x.as_pi()?;
                check_len(m, n)?;
                Mor::Pi(flip_mor(&unit_u1t2(&flip(m))))
            }
        })
    }

    /// The counit `L R y -> y` for `y` in the domain of the right adjoint.
    pub fn counit<F2: Field>(&self, fs: &Functors<F2>, y: &Obj<F2>) -> Result<Mor<F2>> {
        let n = fs.n();
        Ok(match self.pair {
            Pair::U1T2 | Pair::U2T1 => Mor::Lam(ModMap::identity(y.as_lam()?)),
            Pair::T1U1 => {
                let m = y.as_pi()?;
                check_len(m, n)?;
                Mor::Pi(counit_t1u1(m))
            }
            Pair::T2U2 => {
                let m = y.as_pi()?;
                check_len(m, n)?;
                Mor::Pi(flip_mor(&counit_t1u1(&flip(m))))
            }
        })
    }
}

fn check_len<F: Field>(m: &PiModule<F>, n: usize) -> Result<()> {
    if m.n() == n {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!("tuple of length {} where {n} is expected", m.n())))
    }
}

/// The adjunction data of one pair of the cycle.
pub fn adjunction(pair: Pair) -> AdjunctionData {
    AdjunctionData::new(pair)
}

fn is_identity<F: Field>(m: &Mor<F>) -> bool {
    match m {
        Mor::Lam(a) => a.source == a.target && a.matrix.is_identity(),
        Mor::Pi(a) => a.source == a.target && a.comps.iter().all(|c| c.is_identity()),
    }
}

fn is_valid<F: Field>(m: &Mor<F>) -> bool {
    match m {
        Mor::Lam(a) => a.is_linear(),
        Mor::Pi(a) => a.is_morphism(),
    }
}

/// A deliberately broken counit, for exercising failure reports.
pub type CounitOverride<'a, F> = &'a dyn Fn(&Obj<F>) -> Option<Mor<F>>;

/// Certifies an adjunction on random objects and morphisms: units and
/// counits are morphisms, both triangle identities hold, hom dimensions
/// agree and both natural transformations are natural.
pub fn verify_adjunction<F: Field>(fs: &Functors<F>, pair: Pair, samples: usize, seed: u64) -> Report {
    verify_adjunction_with(fs, pair, samples, seed, None)
}

pub fn verify_adjunction_with<F: Field>(
    fs: &Functors<F>,
    pair: Pair,
    samples: usize,
    seed: u64,
    corrupt: Option<CounitOverride<'_, F>>,
) -> Report {
    let mut rep = Report::new(format!("adjunction {}", pair.label()));
    let adj = adjunction(pair);
    let (l, r) = (pair.left(), pair.right());
    let mut rng = SplitMix64::derive(seed, 0xAD);
    let counit = |y: &Obj<F>| -> Result<Mor<F>> {
        if let Some(c) = corrupt {
            if let Some(m) = c(y) {
                return Ok(m);
            }
        }
        adj.counit(fs, y)
    };
    for s in 0..samples {
        let res: Result<()> = (|| {
            let x = fs.random_obj(l.domain(), &mut rng);
            let y = fs.random_obj(r.domain(), &mut rng);
            let eta = adj.unit(fs, &x)?;
            let eps = counit(&y)?;
            rep.record("unit is a morphism", is_valid(&eta), || format!("sample {s}: unit on {:?}", x));
            rep.record("counit is a morphism", is_valid(&eps), || format!("sample {s}: counit on {:?}", y));
            // ε_{L x} ∘ L(η_x) = id_{L x}
            let lx = fs.apply(l, &x)?;
            let left_tri = counit(&lx)?.after(&fs.apply_mor(l, &eta)?)?;
            rep.record("triangle identity on the left adjoint", is_identity(&left_tri), || {
                format!("sample {s}: object {:?}", x)
            });
            // R(ε_y) ∘ η_{R y} = id_{R y}
            let ry = fs.apply(r, &y)?;
            let right_tri = fs.apply_mor(r, &eps)?.after(&adj.unit(fs, &ry)?)?;
            rep.record("triangle identity on the right adjoint", is_identity(&right_tri), || {
                format!("sample {s}: object {:?}", y)
            });
            let d1 = fs.hom_basis(&lx, &y)?.len();
            let d2 = fs.hom_basis(&x, &ry)?.len();
            rep.record("dim Hom(Lx, y) = dim Hom(x, Ry)", d1 == d2, || format!("sample {s}: {d1} vs {d2}"));
            // Naturality along random maps x -> x' and y -> y'.
            let x2 = fs.random_obj(l.domain(), &mut rng);
            let phi = fs.random_mor(&x, &x2, &mut rng)?;
            let lhs = fs.apply_mor(r, &fs.apply_mor(l, &phi)?)?.after(&eta)?;
            let rhs = adj.unit(fs, &x2)?.after(&phi)?;
            rep.record("unit is natural", lhs == rhs, || format!("sample {s}"));
            let y2 = fs.random_obj(r.domain(), &mut rng);
            let psi = fs.random_mor(&y, &y2, &mut rng)?;
            let lhs = psi.after(&eps)?;
            let rhs = counit(&y2)?.after(&fs.apply_mor(l, &fs.apply_mor(r, &psi)?)?)?;
            rep.record("counit is natural", lhs == rhs, || format!("sample {s}"));
            Ok(())
        })();
        if let Err(e) = res {
            rep.record("computation", false, || format!("sample {s}: {e}"));
        }
    }
    rep.note(format!("n = {}, samples = {samples}, seed = {seed}", fs.n()));
    rep
}

/// Checks that Flip is an involution on objects and morphisms, that
/// `U2 ∘ Flip = U1` exactly, and that it swaps `Z1` and `Z2`.
pub fn flip_equivalence_check<F: Field>(fs: &Functors<F>, samples: usize, seed: u64) -> Report {
    let mut rep = Report::new("flip equivalence");
    let mut rng = SplitMix64::derive(seed, 0xF1);
    for s in 0..samples {
        let res: Result<()> = (|| {
            let a = fs.pi.ctx.random_module(&mut rng, 2);
            let b = fs.pi.ctx.random_module(&mut rng, 2);
            rep.record("Flip(Flip(M)) = M", flip(&flip(&a)) == a, || format!("sample {s}: {:?}", a));
            rep.record("Flip(M) satisfies the relations", check_pi_relations(&flip(&a)).is_empty(), || {
                format!("sample {s}")
            });
            rep.record("U2(Flip(M)) = U1(M)", u2(&flip(&a)) == u1(&a), || format!("sample {s}"));
            let phi = fs.random_mor(&Obj::Pi(a.clone()), &Obj::Pi(b), &mut rng)?;
            let phi = phi.as_pi()?;
            rep.record("Flip(Flip(φ)) = φ", flip_mor(&flip_mor(phi)) == *phi, || format!("sample {s}"));
            rep.record("U2(Flip(φ)) = U1(φ)", u2_mor(&flip_mor(phi)) == u1_mor(phi), || format!("sample {s}"));
            if fs.n() >= 2 {
                let Obj::Pi(short) = fs.random_obj(Domain::PiShort, &mut rng) else { unreachable!() };
                rep.record("Flip(Z2(N)) = Z1(Flip(N))", flip(&z2(&short)) == z1(&flip(&short)), || format!("sample {s}"));
            }
            let Obj::Lam(x) = fs.random_obj(Domain::Lambda, &mut rng) else { unreachable!() };
            rep.record("Flip(T1(X)) = T2(X)", flip(&t1(fs.n(), &x)) == t2(fs.n(), &x), || format!("sample {s}"));
            Ok(())
        })();
        if let Err(e) = res {
            rep.record("computation", false, || format!("sample {s}: {e}"));
        }
    }
    rep
}

/// Which of the two equivalent recollements to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    /// Adjoint triple `(T1, U1, T2)` with kernel `Im Z2`.
    First,
    /// Adjoint triple `(T2, U2, T1)` with kernel `Im Z1`.
    Second,
}

impl Which {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(Which::First),
            "second" => Ok(Which::Second),
            _ => Err(Error::Invalid(format!("unknown recollement {s:?}"))),
        }
    }
}

/// Recovers `N` from a tuple with zero first part, so that `Z2(N) = M`.
pub fn z2_preimage<F: Field>(m: &PiModule<F>) -> Result<PiModule<F>> {
    if m.n() < 2 || m.part(0).dim() != 0 {
        return Err(Error::Precondition("first part is not zero".into()));
    }
    PiModule::unchecked(m.lam(), m.parts()[1..].to_vec(), m.fs()[1..].to_vec(), m.gs()[1..].to_vec())
}

/// Recovers `N` from a tuple with zero last part, so that `Z1(N) = M`.
pub fn z1_preimage<F: Field>(m: &PiModule<F>) -> Result<PiModule<F>> {
    let n = m.n();
    if n < 2 || m.part(n - 1).dim() != 0 {
        return Err(Error::Precondition("last part is not zero".into()));
    }
    PiModule::unchecked(m.lam(), m.parts()[..n - 1].to_vec(), m.fs()[..n - 2].to_vec(), m.gs()[..n - 2].to_vec())
}

/// Checks one of the two recollements on random samples: both adjunctions,
/// full faithfulness of the outer functors and of the inclusion of the
/// kernel, and the kernel described as an image constructively.
pub fn verify_recollement<F: Field>(fs: &Functors<F>, which: Which, samples: usize, seed: u64) -> Report {
    let (pairs, ff, title) = match which {
        Which::First => ([Pair::T1U1, Pair::U1T2], [FunctorName::T1, FunctorName::T2, FunctorName::Z2], "first recollement"),
        Which::Second => ([Pair::T2U2, Pair::U2T1], [FunctorName::T2, FunctorName::T1, FunctorName::Z1], "second recollement"),
    };
    let mut rep = Report::new(title);
    for (k, p) in pairs.iter().enumerate() {
        rep.absorb(&p.label(), verify_adjunction(fs, *p, samples, seed.wrapping_add(k as u64)));
    }
    let n = fs.n();
    let mut rng = SplitMix64::derive(seed, 0x4EC);
    for s in 0..samples {
        let res: Result<()> = (|| {
            for &f in &ff {
                if f.domain() == Domain::PiShort && n < 2 {
                    continue;
                }
                let x = fs.random_obj(f.domain(), &mut rng);
                let y = fs.random_obj(f.domain(), &mut rng);
                let ok = fs.fully_faithful_on(f, &x, &y)?;
                rep.record(&format!("{f} fully faithful"), ok, || format!("sample {s}: {:?} -> {:?}", x, y));
            }
            if n < 2 {
                return Ok(());
            }
            // A tuple in the kernel: the cokernel of the counit of the pair
            // whose left adjoint is the outer functor on the relevant side.
            let m = fs.pi.ctx.random_module(&mut rng, 2);
            let eps = adjunction(pairs[0]).counit(fs, &Obj::Pi(m.clone()))?;
            let (k, _) = pi_cokernel(eps.as_pi()?);
            let (e, z, pre): (fn(&PiModule<F>) -> AModule<F>, fn(&PiModule<F>) -> PiModule<F>, fn(&PiModule<F>) -> Result<PiModule<F>>) =
                match which {
                    Which::First => (u1, z2, z2_preimage),
                    Which::Second => (u2, z1, z1_preimage),
                };
            rep.record("kernel sample is killed", e(&k).dim() == 0, || format!("sample {s}: {:?}", k));
            let back = pre(&k)?;
            rep.record("kernel equals image: round trip", z(&back) == k, || format!("sample {s}: {:?}", k));
            let Obj::Pi(short) = fs.random_obj(Domain::PiShort, &mut rng) else { unreachable!() };
            rep.record("image lies in the kernel", e(&z(&short)).dim() == 0, || format!("sample {s}"));
            Ok(())
        })();
        if let Err(e) = res {
            rep.record("computation", false, || format!("sample {s}: {e}"));
        }
    }
    rep
}

// ---------------------------------------------------------------------------
// Nakayama functor

/// Left action of each basis element on the dual basis of `D A`:
/// `b_i · φ_k = Σ_l c[l][i][k] φ_l`.
fn dual_left_actions<F: Field>(a: &PresentedAlgebra<F>) -> Vec<Matrix<F>> {
    let d = a.dim();
    let fl = a.field();
    let mut out = vec![Matrix::zeros(fl, d, d); d];
    for l in 0..d {
        for i in 0..d {
            for (k, c) in a.product(l, i) {
                // column k (φ_k), row l
                let v = fl.add(out[i].get(l, *k), c);
                out[i].set(l, *k, v);
            }
        }
    }
    out
}

/// Right action `φ_k · b_j = Σ_l c[j][l][k] φ_l`, as matrices acting on
/// coordinate columns.
fn dual_right_actions<F: Field>(a: &PresentedAlgebra<F>) -> Vec<Matrix<F>> {
    let d = a.dim();
    let fl = a.field();
    let mut out = vec![Matrix::zeros(fl, d, d); d];
    for j in 0..d {
        for l in 0..d {
            for (k, c) in a.product(j, l) {
                let v = fl.add(out[j].get(l, *k), c);
                out[j].set(l, *k, v);
            }
        }
    }
    out
}

/// `D A` as a left module.
pub fn dual_regular<F: Field>(a: &Arc<PresentedAlgebra<F>>) -> AModule<F> {
    AModule::new(a, a.dim(), dual_left_actions(a)).expect("dual module shapes")
}

/// `ν(M) = D A ⊗_A M`, as the quotient of `D A ⊗_k M` by the balancing
/// relations `φ·b ⊗ m - φ ⊗ b·m` for the algebra generators `b`.
pub fn nakayama_module<F: Field>(m: &AModule<F>) -> AModule<F> {
    let a = m.algebra();
    let fl = m.field();
    let (d, md) = (a.dim(), m.dim());
    let left = dual_left_actions(a);
    let right = dual_right_actions(a);
    let id_m = Matrix::identity(fl, md);
    let id_d = Matrix::identity(fl, d);
    let mut span = EchelonBasis::new(fl, d * md);
    let mut rels = Vec::new();
    for &b in a.generators() {
        // (R_b ⊗ I - I ⊗ ρ(b)) applied to all basis tensors: its columns.
        let r = right[b].kron(&id_m).expect("same field").sub(&id_d.kron(m.act(b)).expect("same field"));
        for col in r.columns() {
            if span.insert(col.clone()) {
                rels.push(col);
            }
        }
    }
    let action: Vec<Matrix<F>> = left.iter().map(|l| l.kron(&id_m).expect("same field")).collect();
    let big = AModule::new(a, d * md, action).expect("tensor shapes");
    let sub = Matrix::from_columns(fl, d * md, &rels);
    big.quotient(&sub).0
}

/// `ν⁻¹(M) = Hom_A(D A, M)` with action `(b·h)(φ) = h(φ·b)`.
pub fn nakayama_inv_module<F: Field>(m: &AModule<F>) -> AModule<F> {
    let a = m.algebra();
    let fl = m.field();
    let da = dual_regular(a);
    let homs = da.hom_basis(m).expect("same algebra");
    let right = dual_right_actions(a);
    let cols: Vec<Vec<F::Elem>> = homs.iter().map(|h| h.to_vec()).collect();
    let width = m.dim() * a.dim();
    let basis = Matrix::from_columns(fl, width, &cols);
    let action = (0..a.dim())
        .map(|b| {
            let imgs: Vec<Vec<F::Elem>> = homs.iter().map(|h| h.mul(&right[b]).to_vec()).collect();
            basis.solve(&Matrix::from_columns(fl, width, &imgs)).expect("shapes").expect("hom space is stable")
        })
        .collect();
    AModule::new(a, homs.len(), action).expect("hom module shapes")
}

impl<F: Field> Functors<F> {
    /// The Nakayama functor on tuples, computed on the underlying module
    /// over the tensor algebra.
    pub fn nakayama(&self, m: &PiModule<F>) -> Result<PiModule<F>> {
        let flat = self.pi.ctx.to_flat(m)?;
        Ok(self.pi.ctx.from_flat(&nakayama_module(&flat))?.0)
    }

    pub fn nakayama_inv(&self, m: &PiModule<F>) -> Result<PiModule<F>> {
        let flat = self.pi.ctx.to_flat(m)?;
        Ok(self.pi.ctx.from_flat(&nakayama_inv_module(&flat))?.0)
    }

    /// Whether `ν_Λ(Λ) ≅ Λ`, found by an explicit isomorphism.
    pub fn lambda_selfinjective(&self, rng: &mut SplitMix64) -> bool {
        let reg = AModule::regular(self.algebra());
        iso_test(&self.lam, &nakayama_module(&reg), &reg, rng).is_iso()
    }
}

/// Checks `U2 ≅ ν_Λ⁻¹ ∘ U1 ∘ ν` on every indecomposable projective of the
/// tuple category, and the hom-dimension form of the adjunction of
/// `ν_Λ⁻¹ U1 ν` with `T1` on random pairs. Gated on `Λ` being
/// selfinjective.
pub fn verify_nakayama_identity<F: Field>(fs: &Functors<F>, samples: usize, seed: u64) -> Report {
    let mut rep = Report::new("Nakayama identity");
    let mut rng = SplitMix64::derive(seed, 0x5A);
    let gate = fs.lambda_selfinjective(&mut rng);
    rep.record("Λ selfinjective", gate, || "Λ not selfinjective".into());
    if !gate {
        return rep;
    }
    let composite = |m: &PiModule<F>| -> Result<AModule<F>> { Ok(nakayama_inv_module(&u1(&fs.nakayama(m)?))) };
    for (i, p) in fs.pi.ctx.projectives().iter().enumerate() {
        let res: Result<()> = (|| {
            let lhs = u2(p);
            let rhs = composite(p)?;
            let ok = iso_test(&fs.lam, &lhs, &rhs, &mut rng).is_iso();
            rep.record("U2(P) ≅ ν⁻¹ U1 ν (P) on projectives", ok, || {
                format!("projective {}: dims {} vs {}", i + 1, lhs.dim(), rhs.dim())
            });
            Ok(())
        })();
        if let Err(e) = res {
            rep.record("computation", false, || format!("projective {}: {e}", i + 1));
        }
    }
    for s in 0..samples {
        let res: Result<()> = (|| {
            let e = fs.pi.ctx.random_module(&mut rng, 2);
            let x = AModule::random(fs.algebra(), &mut rng, 2);
            let d1 = composite(&e)?.hom_basis(&x)?.len();
            let d2 = crate::pimod::pi_hom(&e, &t1(fs.n(), &x))?.len();
            rep.record("dim Hom(ν⁻¹U1ν E, X) = dim Hom(E, T1 X)", d1 == d2, || format!("sample {s}: {d1} vs {d2}"));
            Ok(())
        })();
        if let Err(e) = res {
            rep.record("computation", false, || format!("sample {s}: {e}"));
        }
    }
    rep
}

/// Compares `dim Ext^d_Λ(X, Y)` with `dim Ext^d(T1 X, T1 Y)` over the tuple
/// category for `d ≤ max_d` on random pairs.
pub fn verify_hom_embedding<F: Field>(fs: &Functors<F>, pairs: usize, max_d: usize, seed: u64) -> Report {
    let mut rep = Report::new(format!("homological embedding, degrees ≤ {max_d}"));
    let mut rng = SplitMix64::derive(seed, 0xE7);
    for s in 0..pairs {
        let res: Result<()> = (|| {
            let x = AModule::random(fs.algebra(), &mut rng, 2);
            let y = AModule::random(fs.algebra(), &mut rng, 2);
            let lam = crate::category::ext_dims(&fs.lam, &x, &y, max_d)?;
            let pi = crate::category::ext_dims(&fs.pi, &t1(fs.n(), &x), &t1(fs.n(), &y), max_d)?;
            for d in 0..=max_d {
                rep.record(&format!("Ext^{d} preserved by T1"), lam[d] == pi[d], || {
                    format!("pair {s}: dim X = {}, dim Y = {}: {} vs {}", x.dim(), y.dim(), lam[d], pi[d])
                });
            }
            Ok(())
        })();
        if let Err(e) = res {
            rep.record("computation", false, || format!("pair {s}: {e}"));
        }
    }
    rep.note(format!("n = {}, pairs = {pairs}, seed = {seed}", fs.n()));
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algcore::{dual_numbers, field_algebra, path_algebra_a2};
    use crate::exactlin::PrimeField;

    fn fs(lam: PresentedAlgebra<PrimeField>, n: usize) -> Functors<PrimeField> {
        Functors::new(&Arc::new(lam), n).unwrap()
    }

    #[test]
    fn t1_of_k() {
        let f = PrimeField::gf101();
        let k = AModule::regular(&Arc::new(field_algebra(&f)));
        let m = t1(2, &k);
        assert_eq!(m.dim_vector(), vec![1, 1]);
        assert!(m.f(0).is_identity() && m.g(0).is_zero());
        assert_eq!(u1(&m), k);
        assert_eq!(flip(&m), t2(2, &k));
    }

    #[test]
    fn adjunctions_certify() {
        let f = PrimeField::gf101();
        let a = fs(field_algebra(&f), 3);
        for p in Pair::CYCLE {
            let r = verify_adjunction(&a, p, 10, 1);
            assert!(r.passed(), "{r}");
        }
        let d = fs(dual_numbers(&f), 2);
        let r = verify_adjunction(&d, Pair::U2T1, 10, 2);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn corrupted_counit_is_located() {
        let f = PrimeField::gf101();
        let a = fs(field_algebra(&f), 2);
        let bad = |y: &Obj<PrimeField>| -> Option<Mor<PrimeField>> {
            let m = y.as_pi().ok()?;
            let mut c = counit_t1u1(m);
            let two = f.from_i64(2);
            c.comps[0] = c.comps[0].scale(&two);
            Some(Mor::Pi(c))
        };
        let r = verify_adjunction_with(&a, Pair::T1U1, 5, 3, Some(&bad));
        assert!(!r.passed());
        assert!(r.checks.iter().any(|c| !c.passed() && !c.failures.is_empty()));
    }

    #[test]
    fn recollements_and_flip() {
        let f = PrimeField::gf101();
        let a = fs(path_algebra_a2(&f), 3);
        for w in [Which::First, Which::Second] {
            let r = verify_recollement(&a, w, 5, 4);
            assert!(r.passed(), "{r}");
        }
        let r = flip_equivalence_check(&a, 10, 5);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn nakayama_of_t1_k_is_t2_k() {
        let f = PrimeField::gf101();
        let a = fs(field_algebra(&f), 2);
        let k = AModule::regular(a.algebra());
        let nu = a.nakayama(&t1(2, &k)).unwrap();
        let mut rng = SplitMix64::new(1);
        assert!(iso_test(&a.pi, &nu, &t2(2, &k), &mut rng).is_iso());
        assert!(!iso_test(&a.pi, &t1(2, &k), &t2(2, &k), &mut rng).is_iso());
        let back = a.nakayama_inv(&nu).unwrap();
        assert!(iso_test(&a.pi, &back, &t1(2, &k), &mut rng).is_iso());
    }

    #[test]
    fn nakayama_gate() {
        let f = PrimeField::gf101();
        for (lam, expect) in [(field_algebra(&f), true), (dual_numbers(&f), true), (path_algebra_a2(&f), false)] {
            let a = fs(lam, 2);
            let r = verify_nakayama_identity(&a, 5, 6);
            assert_eq!(r.passed(), expect, "{r}");
        }
    }

    #[test]
    fn t1_preserves_ext() {
        let f = PrimeField::gf101();
        for lam in [dual_numbers(&f), path_algebra_a2(&f)] {
            let r = verify_hom_embedding(&fs(lam, 2), 3, 3, 9);
            assert!(r.passed(), "{r}");
        }
    }
}
