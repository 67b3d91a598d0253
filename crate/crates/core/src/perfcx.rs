//! Bounded complexes over a finite-dimensional abelian category: cones,
//! shifts, homs in the homotopy category, and the triangle and ladder
//! checks for complexes of projective tuples.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algcore::AModule;
use crate::category::{is_projective, AbelianCategory, Elem, ModuleCategory};
use crate::error::{Error, Result};
use crate::exactlin::{EchelonBasis, Field, Matrix};
use crate::pimod::{PiCategory, PiModule, PiMorphism};
use crate::recfun::{adjunction, t1, t1_mor, t2, t2_mor, u1, u1_mor, u2, u2_mor, FunctorName, Functors, Obj, Pair};
use crate::report::Report;
use crate::rng::SplitMix64;

/// A bounded cochain complex: objects in degrees `lo, lo+1, ...` and
/// differentials `d^i: C^i -> C^{i+1}` between consecutive objects.
pub struct Complex<C: AbelianCategory> {
    pub lo: i64,
    pub objects: Vec<C::Obj>,
    /// `diffs[k]` goes from degree `lo + k` to `lo + k + 1`.
    pub diffs: Vec<C::Mor>,
}

impl<C: AbelianCategory> Clone for Complex<C> {
    fn clone(&self) -> Self {
        Complex { lo: self.lo, objects: self.objects.clone(), diffs: self.diffs.clone() }
    }
}

impl<C: AbelianCategory> PartialEq for Complex<C> {
    fn eq(&self, other: &Self) -> bool {
        self.lo == other.lo && self.objects == other.objects && self.diffs == other.diffs
    }
}

impl<C: AbelianCategory> fmt::Debug for Complex<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Complex(lo {}, {:?})", self.lo, self.objects)
    }
}

impl<C: AbelianCategory> Complex<C> {
    pub fn new(cat: &C, lo: i64, objects: Vec<C::Obj>, diffs: Vec<C::Mor>) -> Result<Self> {
        if objects.is_empty() && !diffs.is_empty() || !objects.is_empty() && diffs.len() + 1 != objects.len() {
            return Err(Error::DimensionMismatch("a complex needs one differential between consecutive objects".into()));
        }
        for (k, d) in diffs.iter().enumerate() {
            if cat.source(d) != objects[k] || cat.target(d) != objects[k + 1] {
                return Err(Error::DimensionMismatch(format!("differential in degree {} has the wrong ends", lo + k as i64)));
            }
        }
        for k in 1..diffs.len() {
            if !cat.is_zero_mor(&cat.compose(&diffs[k], &diffs[k - 1])) {
                return Err(Error::Invalid(format!("d∘d ≠ 0 in degree {}", lo + k as i64 - 1)));
            }
        }
        Ok(Complex { lo, objects, diffs })
    }

    pub fn zero() -> Self {
        Complex { lo: 0, objects: Vec::new(), diffs: Vec::new() }
    }

    /// The complex with one object in degree `deg`.
    pub fn stalk(x: C::Obj, deg: i64) -> Self {
        Complex { lo: deg, objects: vec![x], diffs: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.objects.len() as i64 - 1
    }

    pub fn obj(&self, cat: &C, deg: i64) -> C::Obj {
        if deg < self.lo || deg > self.hi() {
            cat.zero_object()
        } else {
            self.objects[(deg - self.lo) as usize].clone()
        }
    }

    /// `d^deg`, zero outside the support.
    pub fn d(&self, cat: &C, deg: i64) -> C::Mor {
        if deg >= self.lo && deg < self.hi() {
            self.diffs[(deg - self.lo) as usize].clone()
        } else {
            cat.zero(&self.obj(cat, deg), &self.obj(cat, deg + 1))
        }
    }

    pub fn d_squared_zero(&self, cat: &C) -> bool {
        (1..self.diffs.len()).all(|k| cat.is_zero_mor(&cat.compose(&self.diffs[k], &self.diffs[k - 1])))
    }

    pub fn total_dim(&self, cat: &C) -> usize {
        self.objects.iter().map(|x| cat.dim(x)).sum()
    }

    /// Every object is projective.
    pub fn is_perfect(&self, cat: &C) -> Result<bool> {
        for x in &self.objects {
            if !is_projective(cat, x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A chain map, with one component per degree in `lo..=hi`, where the
/// range covers the supports of both complexes.
pub struct ChainMap<C: AbelianCategory> {
    pub source: Complex<C>,
    pub target: Complex<C>,
    pub lo: i64,
    pub comps: Vec<C::Mor>,
}

impl<C: AbelianCategory> Clone for ChainMap<C> {
    fn clone(&self) -> Self {
        ChainMap { source: self.source.clone(), target: self.target.clone(), lo: self.lo, comps: self.comps.clone() }
    }
}

impl<C: AbelianCategory> fmt::Debug for ChainMap<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainMap({:?} -> {:?})", self.source, self.target)
    }
}

/// Degree range covering both complexes (empty ranges give `lo > hi`).
fn span<C: AbelianCategory>(a: &Complex<C>, b: &Complex<C>) -> (i64, i64) {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => (0, -1),
        (true, false) => (b.lo, b.hi()),
        (false, true) => (a.lo, a.hi()),
        (false, false) => (a.lo.min(b.lo), a.hi().max(b.hi())),
    }
}

impl<C: AbelianCategory> ChainMap<C> {
    /// Builds a chain map from components on `lo..`, padding with zeros, and
    /// checks that it commutes with the differentials.
    pub fn new(cat: &C, source: &Complex<C>, target: &Complex<C>, lo: i64, comps: Vec<C::Mor>) -> Result<Self> {
        let (a, b) = span(source, target);
        let mut full = Vec::new();
        for deg in a..=b {
            let k = deg - lo;
            if k >= 0 && (k as usize) < comps.len() {
                full.push(comps[k as usize].clone());
            } else {
                full.push(cat.zero(&source.obj(cat, deg), &target.obj(cat, deg)));
            }
        }
        let m = ChainMap { source: source.clone(), target: target.clone(), lo: a, comps: full };
        if !m.commutes(cat) {
            return Err(Error::Invalid("components do not commute with the differentials".into()));
        }
        Ok(m)
    }

    pub fn at(&self, cat: &C, deg: i64) -> C::Mor {
        let k = deg - self.lo;
        if k >= 0 && (k as usize) < self.comps.len() {
            self.comps[k as usize].clone()
        } else {
            cat.zero(&self.source.obj(cat, deg), &self.target.obj(cat, deg))
        }
    }

    pub fn commutes(&self, cat: &C) -> bool {
        let (a, b) = span(&self.source, &self.target);
        (a - 1..=b).all(|deg| {
            let lhs = cat.compose(&self.target.d(cat, deg), &self.at(cat, deg));
            let rhs = cat.compose(&self.at(cat, deg + 1), &self.source.d(cat, deg));
            cat.coords(&lhs) == cat.coords(&rhs)
        })
    }

    pub fn identity(cat: &C, c: &Complex<C>) -> Self {
        ChainMap { source: c.clone(), target: c.clone(), lo: c.lo, comps: c.objects.iter().map(|x| cat.identity(x)).collect() }
    }

    pub fn zero(cat: &C, s: &Complex<C>, t: &Complex<C>) -> Self {
        let (a, b) = span(s, t);
        let comps = (a..=b).map(|d| cat.zero(&s.obj(cat, d), &t.obj(cat, d))).collect();
        ChainMap { source: s.clone(), target: t.clone(), lo: a, comps }
    }
}

/// Multiplies every differential by `-1` when `k` is odd and moves
/// degree `i` to `i - k`, so `shift(C, k)^i = C^{i+k}`.
pub fn shift<C: AbelianCategory>(cat: &C, c: &Complex<C>, k: i64) -> Complex<C> {
    let diffs = if k.rem_euclid(2) == 1 { c.diffs.iter().map(|d| cat.neg(d)).collect() } else { c.diffs.clone() };
    Complex { lo: c.lo - k, objects: c.objects.clone(), diffs }
}

/// The mapping cone: `cone^i = C^{i+1} ⊕ D^i` with differential
/// `[[-d_C, 0], [φ, d_D]]`. Degrees where both summands vanish at the ends
/// are trimmed.
pub fn cone<C: AbelianCategory>(cat: &C, phi: &ChainMap<C>) -> Complex<C> {
    let (s, t) = (&phi.source, &phi.target);
    let (a, b) = span(s, t);
    if a > b {
        return Complex::zero();
    }
    let (lo, hi) = (a - 1, b);
    let sums: Vec<_> = (lo..=hi).map(|i| cat.direct_sum(&[s.obj(cat, i + 1), t.obj(cat, i)])).collect();
    let mut diffs = Vec::new();
    for i in lo..hi {
        let (src, _, proj) = &sums[(i - lo) as usize];
        let (tgt, inj2, _) = &sums[(i + 1 - lo) as usize];
        // Components: C^{i+1} -> C^{i+2} by -d_C, C^{i+1} -> D^{i+1} by φ,
        // D^i -> D^{i+1} by d_D.
        let a11 = cat.neg(&s.d(cat, i + 1));
        let a21 = phi.at(cat, i + 1);
        let a22 = t.d(cat, i);
        let terms = [
            cat.compose(&cat.compose(&inj2[0], &a11), &proj[0]),
            cat.compose(&cat.compose(&inj2[1], &a21), &proj[0]),
            cat.compose(&cat.compose(&inj2[1], &a22), &proj[1]),
        ];
        let f = cat.field();
        let refs: Vec<(Elem<C>, &C::Mor)> = terms.iter().map(|m| (f.one(), m)).collect();
        diffs.push(cat.lin_comb(src, tgt, &refs));
    }
    let objects: Vec<C::Obj> = sums.into_iter().map(|(o, _, _)| o).collect();
    trim(cat, Complex { lo, objects, diffs })
}

/// Drops zero objects at both ends.
pub fn trim<C: AbelianCategory>(cat: &C, mut c: Complex<C>) -> Complex<C> {
    while c.objects.last().is_some_and(|x| cat.is_zero_obj(x)) {
        c.objects.pop();
        c.diffs.pop();
    }
    while c.objects.first().is_some_and(|x| cat.is_zero_obj(x)) {
        c.objects.remove(0);
        if !c.diffs.is_empty() {
            c.diffs.remove(0);
        }
        c.lo += 1;
    }
    if c.objects.is_empty() {
        c.lo = 0;
    }
    c
}

/// Degreewise direct sum.
pub fn direct_sum_cx<C: AbelianCategory>(cat: &C, a: &Complex<C>, b: &Complex<C>) -> Complex<C> {
    let (lo, hi) = span(a, b);
    if lo > hi {
        return Complex::zero();
    }
    let sums: Vec<_> = (lo..=hi).map(|i| cat.direct_sum(&[a.obj(cat, i), b.obj(cat, i)])).collect();
    let diffs = (lo..hi)
        .map(|i| {
            let (_, _, proj) = &sums[(i - lo) as usize];
            let (_, inj, _) = &sums[(i + 1 - lo) as usize];
            let x = cat.compose(&cat.compose(&inj[0], &a.d(cat, i)), &proj[0]);
            let y = cat.compose(&cat.compose(&inj[1], &b.d(cat, i)), &proj[1]);
            cat.add(&x, &y)
        })
        .collect();
    Complex { lo, objects: sums.into_iter().map(|(o, _, _)| o).collect(), diffs }
}

/// Homotopy classes of chain maps `c -> d`: the dimension and chain maps
/// representing a basis.
pub struct HomKb<C: AbelianCategory> {
    pub dim: usize,
    pub chain_map_dim: usize,
    pub basis: Vec<ChainMap<C>>,
}

/// Hom in the homotopy category: chain maps modulo null-homotopic ones,
/// both computed in hom-basis coordinates of the degreewise hom spaces.
pub fn hom_kb<C: AbelianCategory>(cat: &C, c: &Complex<C>, d: &Complex<C>) -> HomKb<C> {
    let (a, b) = span(c, d);
    let f = cat.field();
    if a > b {
        return HomKb { dim: 0, chain_map_dim: 0, basis: Vec::new() };
    }
    let degs: Vec<i64> = (a..=b).collect();
    let homs: Vec<Vec<C::Mor>> = degs.iter().map(|&i| cat.hom_basis(&c.obj(cat, i), &d.obj(cat, i))).collect();
    let mut offs = vec![0usize; degs.len() + 1];
    for k in 0..degs.len() {
        offs[k + 1] = offs[k] + homs[k].len();
    }
    let unknowns = offs[degs.len()];
    // Equation for degree i: d_D^i φ^i - φ^{i+1} d_C^i, a map C^i -> D^{i+1}.
    let eq_degs: Vec<i64> = (a - 1..=b).collect();
    let eq_width: Vec<usize> = eq_degs
        .iter()
        .map(|&i| cat.coords(&cat.zero(&c.obj(cat, i), &d.obj(cat, i + 1))).len())
        .collect();
    let mut eq_offs = vec![0usize; eq_degs.len() + 1];
    for k in 0..eq_degs.len() {
        eq_offs[k + 1] = eq_offs[k] + eq_width[k];
    }
    let rows = eq_offs[eq_degs.len()];
    let mut columns: Vec<Vec<Elem<C>>> = Vec::with_capacity(unknowns);
    for (k, &i) in degs.iter().enumerate() {
        for h in &homs[k] {
            let mut col = vec![f.zero(); rows];
            // contributes d_D^i h to the equation of degree i
            let e1 = (i - (a - 1)) as usize;
            for (r, v) in cat.coords(&cat.compose(&d.d(cat, i), h)).into_iter().enumerate() {
                col[eq_offs[e1] + r] = v;
            }
            // and -h d_C^{i-1} to the equation of degree i-1
            let e0 = e1 - 1;
            for (r, v) in cat.coords(&cat.compose(h, &c.d(cat, i - 1))).into_iter().enumerate() {
                col[eq_offs[e0] + r] = f.sub(&col[eq_offs[e0] + r], &v);
            }
            columns.push(col);
        }
    }
    let system = Matrix::from_columns(f, rows, &columns);
    let z = system.kernel_basis();
    let amb_total: usize = degs.iter().map(|&i| cat.coords(&cat.zero(&c.obj(cat, i), &d.obj(cat, i))).len()).sum();
    let to_components = |x: &[Elem<C>]| -> Vec<C::Mor> {
        degs.iter()
            .enumerate()
            .map(|(k, &i)| {
                let terms: Vec<(Elem<C>, &C::Mor)> =
                    homs[k].iter().enumerate().map(|(t, h)| (x[offs[k] + t].clone(), h)).collect();
                cat.lin_comb(&c.obj(cat, i), &d.obj(cat, i), &terms)
            })
            .collect()
    };
    let ambient = |comps: &[C::Mor]| -> Vec<Elem<C>> { comps.iter().flat_map(|m| cat.coords(m)).collect() };
    // Null-homotopic maps: d_D^{i-1} s^i + s^{i+1} d_C^i for s^i: C^i -> D^{i-1}.
    let mut null = EchelonBasis::new(f, amb_total);
    for (k, &i) in degs.iter().enumerate() {
        let ci = c.obj(cat, i);
        let dm = d.obj(cat, i - 1);
        for s in cat.hom_basis(&ci, &dm) {
            let mut comps: Vec<C::Mor> = degs.iter().map(|&j| cat.zero(&c.obj(cat, j), &d.obj(cat, j))).collect();
            // degree i: d_D^{i-1} s
            comps[k] = cat.compose(&d.d(cat, i - 1), &s);
            // degree i-1: s d_C^{i-1}
            if k > 0 {
                comps[k - 1] = cat.compose(&s, &c.d(cat, i - 1));
            }
            null.insert(ambient(&comps));
        }
    }
    let mut basis = Vec::new();
    for col in z.columns() {
        let comps = to_components(&col);
        if null.insert(ambient(&comps)) {
            basis.push(ChainMap { source: c.clone(), target: d.clone(), lo: a, comps });
        }
    }
    HomKb { dim: basis.len(), chain_map_dim: z.cols(), basis }
}

pub fn hom_kb_dim<C: AbelianCategory>(cat: &C, c: &Complex<C>, d: &Complex<C>) -> usize {
    hom_kb(cat, c, d).dim
}

/// A complex is contractible iff its identity is null-homotopic, i.e. its
/// endomorphism space in the homotopy category vanishes.
pub fn is_contractible<C: AbelianCategory>(cat: &C, c: &Complex<C>) -> bool {
    hom_kb(cat, c, c).dim == 0
}

/// Degreewise image of a complex under a functor given on objects and
/// morphisms.
pub fn map_complex<C: AbelianCategory, D: AbelianCategory>(
    _dst: &D,
    c: &Complex<C>,
    fo: impl Fn(&C::Obj) -> D::Obj,
    fm: impl Fn(&C::Mor) -> D::Mor,
) -> Complex<D> {
    Complex { lo: c.lo, objects: c.objects.iter().map(fo).collect(), diffs: c.diffs.iter().map(fm).collect() }
}

/// Degreewise image of a chain map.
pub fn map_chain_map<C: AbelianCategory, D: AbelianCategory>(
    dst: &D,
    m: &ChainMap<C>,
    fo: impl Fn(&C::Obj) -> D::Obj + Copy,
    fm: impl Fn(&C::Mor) -> D::Mor + Copy,
) -> ChainMap<D> {
    ChainMap {
        source: map_complex(dst, &m.source, fo, fm),
        target: map_complex(dst, &m.target, fo, fm),
        lo: m.lo,
        comps: m.comps.iter().map(fm).collect(),
    }
}

/// A random bounded complex of projectives in degrees `0..len`: each term
/// a sum of up to `max_summands` indecomposable projectives, each
/// differential a random map killed by composition with the previous one.
pub fn random_perfect_complex<C: AbelianCategory>(
    cat: &C,
    rng: &mut SplitMix64,
    len: usize,
    max_summands: usize,
) -> Result<Complex<C>> {
    let f = cat.field();
    let projs = cat.indecomposable_projectives()?;
    if projs.is_empty() || len == 0 {
        return Ok(Complex::zero());
    }
    let objects: Vec<C::Obj> = (0..len)
        .map(|_| {
            let k = rng.range(1, max_summands.max(1));
            let pick: Vec<C::Obj> = (0..k).map(|_| projs[rng.below(projs.len() as u64) as usize].clone()).collect();
            cat.direct_sum(&pick).0
        })
        .collect();
    let mut diffs: Vec<C::Mor> = Vec::new();
    for k in 0..len - 1 {
        let hs = cat.hom_basis(&objects[k], &objects[k + 1]);
        let allowed: Vec<C::Mor> = match diffs.last() {
            None => hs,
            Some(prev) => {
                // Combinations x with (Σ x_t h_t) ∘ prev = 0.
                let width = cat.coords(&cat.zero(&objects[k - 1], &objects[k + 1])).len();
                let cols: Vec<Vec<Elem<C>>> = hs.iter().map(|h| cat.coords(&cat.compose(h, prev))).collect();
                let ker = Matrix::from_columns(f, width, &cols).kernel_basis();
                ker.columns()
                    .iter()
                    .map(|x| {
                        let terms: Vec<(Elem<C>, &C::Mor)> = x.iter().cloned().zip(hs.iter()).collect();
                        cat.lin_comb(&objects[k], &objects[k + 1], &terms)
                    })
                    .collect()
            }
        };
        let terms: Vec<(Elem<C>, &C::Mor)> = allowed.iter().map(|h| (f.random(rng), h)).collect();
        diffs.push(cat.lin_comb(&objects[k], &objects[k + 1], &terms));
    }
    Complex::new(cat, 0, objects, diffs)
}

pub type LamComplex<F> = Complex<ModuleCategory<F>>;
pub type PiComplex<F> = Complex<PiCategory<F>>;

/// A complex over either category.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyComplex<F: Field> {
    Lam(LamComplex<F>),
    Pi(PiComplex<F>),
}

pub fn t1_cx<F: Field>(fs: &Functors<F>, c: &LamComplex<F>) -> PiComplex<F> {
    let n = fs.n();
    map_complex(&fs.pi, c, |x| t1(n, x), |m| t1_mor(n, m))
}

pub fn t2_cx<F: Field>(fs: &Functors<F>, c: &LamComplex<F>) -> PiComplex<F> {
    let n = fs.n();
    map_complex(&fs.pi, c, |x| t2(n, x), |m| t2_mor(n, m))
}

pub fn u1_cx<F: Field>(fs: &Functors<F>, c: &PiComplex<F>) -> LamComplex<F> {
    map_complex(&fs.lam, c, u1, u1_mor)
}

pub fn u2_cx<F: Field>(fs: &Functors<F>, c: &PiComplex<F>) -> LamComplex<F> {
    map_complex(&fs.lam, c, u2, u2_mor)
}

/// Applies an exact functor degreewise. `Z1` and `Z2` do not preserve
/// projectives and are refused when `proj_only` is set; the Nakayama
/// functors are not handled here.
pub fn apply_functor_cx<F: Field>(fs: &Functors<F>, name: FunctorName, c: &AnyComplex<F>, proj_only: bool) -> Result<AnyComplex<F>> {
    use crate::recfun::{flip, flip_mor, z1, z1_mor, z2, z2_mor};
    if proj_only && matches!(name, FunctorName::Z1 | FunctorName::Z2) {
        return Err(Error::Unsupported(format!("{name} does not preserve projectives")));
    }
    Ok(match (name, c) {
        (FunctorName::T1, AnyComplex::Lam(c)) => AnyComplex::Pi(t1_cx(fs, c)),
        (FunctorName::T2, AnyComplex::Lam(c)) => AnyComplex::Pi(t2_cx(fs, c)),
        (FunctorName::U1, AnyComplex::Pi(c)) => AnyComplex::Lam(u1_cx(fs, c)),
        (FunctorName::U2, AnyComplex::Pi(c)) => AnyComplex::Lam(u2_cx(fs, c)),
        (FunctorName::Z1, AnyComplex::Pi(c)) => AnyComplex::Pi(map_complex(&fs.pi, c, z1, z1_mor)),
        (FunctorName::Z2, AnyComplex::Pi(c)) => AnyComplex::Pi(map_complex(&fs.pi, c, z2, z2_mor)),
        (FunctorName::Flip, AnyComplex::Pi(c)) => AnyComplex::Pi(map_complex(&fs.pi, c, flip, flip_mor)),
        _ => return Err(Error::Unsupported(format!("{name} cannot be applied degreewise to this complex"))),
    })
}

/// Counit `T1 U1 c -> c`, degreewise.
pub fn counit_cx<F: Field>(fs: &Functors<F>, c: &PiComplex<F>) -> Result<ChainMap<PiCategory<F>>> {
    let adj = adjunction(Pair::T1U1);
    let comps = c
        .objects
        .iter()
        .map(|m| adj.counit(fs, &Obj::Pi(m.clone())).and_then(|x| x.as_pi().cloned()))
        .collect::<Result<Vec<PiMorphism<F>>>>()?;
    let src = t1_cx(fs, &u1_cx(fs, c));
    ChainMap::new(&fs.pi, &src, c, c.lo, comps)
}

/// Unit `c -> T2 U1 c`, degreewise.
pub fn unit_cx<F: Field>(fs: &Functors<F>, c: &PiComplex<F>) -> Result<ChainMap<PiCategory<F>>> {
    let adj = adjunction(Pair::U1T2);
    let comps = c
        .objects
        .iter()
        .map(|m| adj.unit(fs, &Obj::Pi(m.clone())).and_then(|x| x.as_pi().cloned()))
        .collect::<Result<Vec<PiMorphism<F>>>>()?;
    let tgt = t2_cx(fs, &u1_cx(fs, c));
    ChainMap::new(&fs.pi, c, &tgt, c.lo, comps)
}

/// `K = cone(T1 U1 c -> c)`, with checks that `U1 K` is contractible and
/// that `K` receives no maps from `T1` of the sample complexes.
pub fn canonical_q_triangle<F: Field>(
    fs: &Functors<F>,
    c: &PiComplex<F>,
    probes: &[LamComplex<F>],
) -> Result<(PiComplex<F>, Report)> {
    let eps = counit_cx(fs, c)?;
    let k = cone(&fs.pi, &eps);
    let mut rep = Report::new("canonical q-triangle");
    rep.record("U1(K) contractible", is_contractible(&fs.lam, &u1_cx(fs, &k)), || format!("{:?}", c));
    for (i, p) in probes.iter().enumerate() {
        let d = hom_kb_dim(&fs.pi, &t1_cx(fs, p), &k);
        rep.record("Hom(T1 P, K) = 0", d == 0, || format!("probe {i}: dim {d}"));
    }
    Ok((k, rep))
}

/// `K' = shift(cone(c -> T2 U1 c), -1)`, with checks that `U1 K'` is
/// contractible and that `K'` maps to no `T2` of the sample complexes.
pub fn canonical_p_triangle<F: Field>(
    fs: &Functors<F>,
    c: &PiComplex<F>,
    probes: &[LamComplex<F>],
) -> Result<(PiComplex<F>, Report)> {
    let eta = unit_cx(fs, c)?;
    let k = shift(&fs.pi, &cone(&fs.pi, &eta), -1);
    let mut rep = Report::new("canonical p-triangle");
    rep.record("U1(K') contractible", is_contractible(&fs.lam, &u1_cx(fs, &k)), || format!("{:?}", c));
    for (i, p) in probes.iter().enumerate() {
        let d = hom_kb_dim(&fs.pi, &k, &t2_cx(fs, p));
        rep.record("Hom(K', T2 P) = 0", d == 0, || format!("probe {i}: dim {d}"));
    }
    Ok((k, rep))
}

/// The triple `(Im T1, Ker U1, Im T2)` on sampled perfect complexes: both
/// canonical triangles exist, their third terms lie in `Ker U1`, and they
/// are orthogonal to `T1` and `T2` of sampled complexes on both sides.
pub fn ttf_check<F: Field>(fs: &Functors<F>, samples: usize, seed: u64, max_len: usize) -> Report {
    let mut rep = Report::new("TTF triple on perfect complexes");
    let mut rng = SplitMix64::derive(seed, 0x77F);
    for s in 0..samples {
        let res: Result<()> = (|| {
            let len = rng.range(1, max_len.max(1));
            let c = random_perfect_complex(&fs.pi, &mut rng, len, 2)?;
            let probes: Vec<LamComplex<F>> = (0..2)
                .map(|_| {
                    let l = rng.range(1, max_len.max(1));
                    random_perfect_complex(&fs.lam, &mut rng, l, 2)
                })
                .collect::<Result<_>>()?;
            let (k, r1) = canonical_q_triangle(fs, &c, &probes)?;
            let (k2, r2) = canonical_p_triangle(fs, &c, &probes)?;
            rep.absorb("q", r1);
            rep.absorb("p", r2);
            for (i, p) in probes.iter().enumerate() {
                let d = hom_kb_dim(&fs.pi, &k, &t2_cx(fs, p));
                rep.record("Hom(K, T2 P) = 0", d == 0, || format!("sample {s}, probe {i}: dim {d}"));
                let d = hom_kb_dim(&fs.pi, &t1_cx(fs, p), &k2);
                rep.record("Hom(T1 P, K') = 0", d == 0, || format!("sample {s}, probe {i}: dim {d}"));
            }
            rep.record("cones are perfect", k.is_perfect(&fs.pi)? && k2.is_perfect(&fs.pi)?, || format!("sample {s}"));
            Ok(())
        })();
        if let Err(e) = res {
            rep.record("computation", false, || format!("sample {s}: {e}"));
        }
    }
    merge_duplicate_checks(&mut rep);
    rep
}

/// The four adjunctions of the cycle in the homotopy category of perfect
/// complexes, through hom dimensions, plus preservation of perfect
/// complexes by `T1`, `T2`, `U1`, `U2`.
pub fn ladder_verify_derived<F: Field>(fs: &Functors<F>, samples: usize, seed: u64, max_len: usize) -> Report {
    let mut rep = Report::new("derived ladder");
    let mut rng = SplitMix64::derive(seed, 0x1AD);
    for s in 0..samples {
        let res: Result<()> = (|| {
            let lx = rng.range(1, max_len.max(1));
            let lm = rng.range(1, max_len.max(1));
            let x = random_perfect_complex(&fs.lam, &mut rng, lx, 2)?;
            let m = random_perfect_complex(&fs.pi, &mut rng, lm, 2)?;
            let (t1x, t2x) = (t1_cx(fs, &x), t2_cx(fs, &x));
            let (u1m, u2m) = (u1_cx(fs, &m), u2_cx(fs, &m));
            let checks = [
                ("(T1,U1)", hom_kb_dim(&fs.pi, &t1x, &m), hom_kb_dim(&fs.lam, &x, &u1m)),
                ("(U1,T2)", hom_kb_dim(&fs.pi, &m, &t2x), hom_kb_dim(&fs.lam, &u1m, &x)),
                ("(T2,U2)", hom_kb_dim(&fs.pi, &t2x, &m), hom_kb_dim(&fs.lam, &x, &u2m)),
                ("(U2,T1)", hom_kb_dim(&fs.pi, &m, &t1x), hom_kb_dim(&fs.lam, &u2m, &x)),
            ];
            for (name, a, b) in checks {
                rep.record(&format!("{name} hom dimensions agree"), a == b, || format!("sample {s}: {a} vs {b}"));
            }
            let perfect = t1x.is_perfect(&fs.pi)? && t2x.is_perfect(&fs.pi)? && u1m.is_perfect(&fs.lam)? && u2m.is_perfect(&fs.lam)?;
            rep.record("T1, T2, U1, U2 preserve perfect complexes", perfect, || format!("sample {s}"));
            Ok(())
        })();
        if let Err(e) = res {
            rep.record("computation", false, || format!("sample {s}: {e}"));
        }
    }
    rep.note(format!("n = {}, samples = {samples}, seed = {seed}, max length = {max_len}", fs.n()));
    rep
}

/// Folds checks with equal names into one entry.
fn merge_duplicate_checks(rep: &mut Report) {
    let mut out: Vec<crate::report::Check> = Vec::new();
    for c in rep.checks.drain(..) {
        if let Some(e) = out.iter_mut().find(|e| e.name == c.name) {
            e.total += c.total;
            e.failures.extend(c.failures);
        } else {
            out.push(c);
        }
    }
    rep.checks = out;
}

/// Stalk complexes of Λ-modules, for callers that probe with modules.
pub fn lam_stalk<F: Field>(x: &AModule<F>) -> LamComplex<F> {
    Complex::stalk(x.clone(), 0)
}

pub fn pi_stalk<F: Field>(m: &PiModule<F>) -> PiComplex<F> {
    Complex::stalk(m.clone(), 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algcore::{dual_numbers, field_algebra};
    use crate::exactlin::PrimeField;
    use alloc::sync::Arc;

    fn fs(n: usize) -> Functors<PrimeField> {
        let f = PrimeField::gf101();
        Functors::new(&Arc::new(field_algebra(&f)), n).unwrap()
    }

    #[test]
    fn stalks_and_cones() {
        let a = fs(2);
        let p = a.pi.ctx.projectives()[0].clone();
        let c = pi_stalk(&p);
        assert_eq!(hom_kb_dim(&a.pi, &c, &c), 1);
        assert!(!is_contractible(&a.pi, &c));
        let k = cone(&a.pi, &ChainMap::identity(&a.pi, &c));
        assert!(is_contractible(&a.pi, &k));
        assert_eq!(hom_kb_dim(&a.pi, &c, &k), 0);
        assert_eq!(hom_kb_dim(&a.pi, &c, &shift(&a.pi, &c, 1)), 0);
        assert!(is_contractible(&a.pi, &Complex::zero()));
        assert_eq!(shift(&a.pi, &shift(&a.pi, &c, 1), -1), c);
    }

    #[test]
    fn random_complexes_are_complexes() {
        let a = fs(3);
        let mut rng = SplitMix64::new(1);
        for _ in 0..5 {
            let c = random_perfect_complex(&a.pi, &mut rng, 4, 2).unwrap();
            assert!(c.d_squared_zero(&a.pi));
            assert!(c.is_perfect(&a.pi).unwrap());
            // Adding a contractible summand changes no hom dimension.
            let id = ChainMap::identity(&a.pi, &c);
            let c2 = direct_sum_cx(&a.pi, &c, &cone(&a.pi, &id));
            assert_eq!(hom_kb_dim(&a.pi, &c, &c), hom_kb_dim(&a.pi, &c2, &c2));
        }
    }

    #[test]
    fn cone_of_zero_map_is_a_sum() {
        let a = fs(2);
        let mut rng = SplitMix64::new(2);
        let c = random_perfect_complex(&a.pi, &mut rng, 2, 2).unwrap();
        let d = random_perfect_complex(&a.pi, &mut rng, 2, 2).unwrap();
        let k = cone(&a.pi, &ChainMap::zero(&a.pi, &c, &d));
        let s = direct_sum_cx(&a.pi, &shift(&a.pi, &c, 1), &d);
        assert_eq!(k.lo, s.lo);
        let dv = |x: &PiComplex<PrimeField>| x.objects.iter().map(|o| o.dim_vector()).collect::<Vec<_>>();
        assert_eq!(dv(&k), dv(&s));
    }

    #[test]
    fn triangles_and_ladder() {
        let a = fs(2);
        let r = ttf_check(&a, 4, 1, 3);
        assert!(r.passed(), "{r}");
        let r = ladder_verify_derived(&a, 4, 2, 3);
        assert!(r.passed(), "{r}");
        let f = PrimeField::gf101();
        let d = Functors::new(&Arc::new(dual_numbers(&f)), 3).unwrap();
        let r = ladder_verify_derived(&d, 2, 3, 3);
        assert!(r.passed(), "{r}");
    }
}
