//! Modules over `Λ ⊗ Π_n` in tuple form: Λ-modules `X_1, ..., X_n` with maps
//! `f_i: X_i -> X_{i+1}` and `g_i: X_{i+1} -> X_i` subject to the
//! preprojective relations, and the translation to and from ordinary modules
//! over the tensor algebra.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algcore::{
    preprojective_algebra, projective_module, tensor_algebra, tensor_one_left, AModule, ModMap, PresentedAlgebra,
    QuotientPathAlgebra,
};
use crate::category::{all_invertible, AbelianCategory};
use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix, MatrixSystem, Term};
use crate::rng::SplitMix64;

struct PiInner<F: Field> {
    lam: Arc<PresentedAlgebra<F>>,
    parts: Vec<AModule<F>>,
    f: Vec<Matrix<F>>,
    g: Vec<Matrix<F>>,
}

/// A module over `Λ ⊗ Π_n` in tuple form. Cloning is cheap.
pub struct PiModule<F: Field>(Arc<PiInner<F>>);

impl<F: Field> Clone for PiModule<F> {
    fn clone(&self) -> Self {
        PiModule(self.0.clone())
    }
}

impl<F: Field> PartialEq for PiModule<F> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.parts == other.0.parts && self.0.f == other.0.f && self.0.g == other.0.g)
    }
}

impl<F: Field> fmt::Debug for PiModule<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PiModule{:?}", self.dim_vector())
    }
}

impl<F: Field> PiModule<F> {
    /// Builds and validates a tuple: shapes, Λ-linearity of every map and
    /// the preprojective relations.
    pub fn new(lam: &Arc<PresentedAlgebra<F>>, parts: Vec<AModule<F>>, f: Vec<Matrix<F>>, g: Vec<Matrix<F>>) -> Result<Self> {
        let m = Self::unchecked(lam, parts, f, g)?;
        let problems = check_pi_relations(&m);
        if problems.is_empty() {
            Ok(m)
        } else {
            Err(Error::Invalid(problems.join("; ")))
        }
    }

    /// Builds a tuple, checking only shapes.
    pub fn unchecked(
        lam: &Arc<PresentedAlgebra<F>>,
        parts: Vec<AModule<F>>,
        f: Vec<Matrix<F>>,
        g: Vec<Matrix<F>>,
    ) -> Result<Self> {
        let n = parts.len();
        if n == 0 {
            return Err(Error::Invalid("a tuple needs at least one part".into()));
        }
        if f.len() != n - 1 || g.len() != n - 1 {
            return Err(Error::DimensionMismatch(format!("{n} parts need {} maps in each direction", n - 1)));
        }
        for (i, x) in parts.iter().enumerate() {
            if !Arc::ptr_eq(x.algebra(), lam) && **x.algebra() != **lam {
                return Err(Error::AlgebraMismatch(format!("part {} is over another algebra", i + 1)));
            }
        }
        for i in 0..n - 1 {
            let (a, b) = (parts[i].dim(), parts[i + 1].dim());
            if f[i].rows() != b || f[i].cols() != a {
                return Err(Error::DimensionMismatch(format!("f{} must be {b}x{a}", i + 1)));
            }
            if g[i].rows() != a || g[i].cols() != b {
                return Err(Error::DimensionMismatch(format!("g{} must be {a}x{b}", i + 1)));
            }
        }
        Ok(PiModule(Arc::new(PiInner { lam: lam.clone(), parts, f, g })))
    }

    pub fn zero(lam: &Arc<PresentedAlgebra<F>>, n: usize) -> Self {
        let fld = lam.field();
        let parts = vec![AModule::zero(lam); n];
        let z = vec![Matrix::zeros(fld, 0, 0); n.saturating_sub(1)];
        Self::unchecked(lam, parts, z.clone(), z).expect("zero tuple")
    }

    pub fn lam(&self) -> &Arc<PresentedAlgebra<F>> {
        &self.0.lam
    }

    pub fn field(&self) -> &F {
        self.0.lam.field()
    }

    pub fn n(&self) -> usize {
        self.0.parts.len()
    }

    pub fn parts(&self) -> &[AModule<F>] {
        &self.0.parts
    }

    pub fn part(&self, i: usize) -> &AModule<F> {
        &self.0.parts[i]
    }

    pub fn f(&self, i: usize) -> &Matrix<F> {
        &self.0.f[i]
    }

    pub fn g(&self, i: usize) -> &Matrix<F> {
        &self.0.g[i]
    }

    pub fn fs(&self) -> &[Matrix<F>] {
        &self.0.f
    }

    pub fn gs(&self) -> &[Matrix<F>] {
        &self.0.g
    }

    pub fn dim_vector(&self) -> Vec<usize> {
        self.0.parts.iter().map(|p| p.dim()).collect()
    }

    pub fn dim(&self) -> usize {
        self.dim_vector().iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Direct sum, part by part.
    pub fn direct_sum(lam: &Arc<PresentedAlgebra<F>>, n: usize, xs: &[&Self]) -> Result<Self> {
        if xs.iter().any(|x| x.n() != n) {
            return Err(Error::DimensionMismatch("summands of different length".into()));
        }
        let fld = lam.field();
        let parts = (0..n)
            .map(|i| {
                let ps: Vec<&AModule<F>> = xs.iter().map(|x| x.part(i)).collect();
                AModule::direct_sum(lam, &ps)
            })
            .collect();
        let diag = |sel: &dyn Fn(&Self) -> &Matrix<F>| -> Matrix<F> {
            let bs: Vec<&Matrix<F>> = xs.iter().map(|x| sel(x)).collect();
            Matrix::block_diag(fld, &bs)
        };
        let f = (0..n.saturating_sub(1)).map(|i| diag(&|x: &Self| x.f(i))).collect();
        let g = (0..n.saturating_sub(1)).map(|i| diag(&|x: &Self| x.g(i))).collect();
        Self::unchecked(lam, parts, f, g)
    }
}

/// Every violated condition of a tuple: part modules, Λ-linearity of the
/// maps and the relations `g1 f1 = 0`, `f_i g_i = g_{i+1} f_{i+1}`,
/// `f_{n-1} g_{n-1} = 0`.
pub fn check_pi_relations<F: Field>(m: &PiModule<F>) -> Vec<String> {
    let mut out = Vec::new();
    let n = m.n();
    for (i, x) in m.parts().iter().enumerate() {
        for p in x.check() {
            out.push(format!("X{}: {p}", i + 1));
        }
    }
    for i in 0..n.saturating_sub(1) {
        if !m.part(i).is_hom(m.part(i + 1), m.f(i)) {
            out.push(format!("f{} is not Λ-linear", i + 1));
        }
        if !m.part(i + 1).is_hom(m.part(i), m.g(i)) {
            out.push(format!("g{} is not Λ-linear", i + 1));
        }
    }
    for v in 0..n {
        let d = m.part(v).dim();
        let mut rel = Matrix::zeros(m.field(), d, d);
        if v + 1 < n {
            rel = rel.add(&m.g(v).mul(m.f(v)));
        }
        if v > 0 {
            rel = rel.sub(&m.f(v - 1).mul(m.g(v - 1)));
        }
        if !rel.is_zero() {
            out.push(format!("relation at vertex {} fails", v + 1));
        }
    }
    out
}

/// A morphism of tuples: one Λ-linear component per part.
#[derive(Clone, Debug, PartialEq)]
pub struct PiMorphism<F: Field> {
    pub source: PiModule<F>,
    pub target: PiModule<F>,
    pub comps: Vec<Matrix<F>>,
}

impl<F: Field> PiMorphism<F> {
    pub fn new(source: &PiModule<F>, target: &PiModule<F>, comps: Vec<Matrix<F>>) -> Result<Self> {
        if source.n() != target.n() || comps.len() != source.n() {
            return Err(Error::DimensionMismatch("component count".into()));
        }
        for (i, c) in comps.iter().enumerate() {
            if c.rows() != target.part(i).dim() || c.cols() != source.part(i).dim() {
                return Err(Error::DimensionMismatch(format!("component {} has the wrong shape", i + 1)));
            }
        }
        Ok(PiMorphism { source: source.clone(), target: target.clone(), comps })
    }

    pub fn identity(m: &PiModule<F>) -> Self {
        let comps = m.parts().iter().map(|p| Matrix::identity(m.field(), p.dim())).collect();
        PiMorphism { source: m.clone(), target: m.clone(), comps }
    }

    pub fn zero(s: &PiModule<F>, t: &PiModule<F>) -> Self {
        let comps = (0..s.n()).map(|i| Matrix::zeros(s.field(), t.part(i).dim(), s.part(i).dim())).collect();
        PiMorphism { source: s.clone(), target: t.clone(), comps }
    }

    /// `self ∘ g`.
    pub fn after(&self, g: &Self) -> Self {
        let comps = self.comps.iter().zip(&g.comps).map(|(a, b)| a.mul(b)).collect();
        PiMorphism { source: g.source.clone(), target: self.target.clone(), comps }
    }

    /// Whether the components are Λ-linear and commute with `f` and `g`.
    pub fn is_morphism(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        let n = s.n();
        (0..n).all(|i| s.part(i).is_hom(t.part(i), &self.comps[i]))
            && (0..n.saturating_sub(1)).all(|i| {
                t.f(i).mul(&self.comps[i]) == self.comps[i + 1].mul(s.f(i))
                    && t.g(i).mul(&self.comps[i + 1]) == self.comps[i].mul(s.g(i))
            })
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }
}

/// Basis of `Hom_Λ(x, y)`.
pub fn lambda_hom<F: Field>(x: &AModule<F>, y: &AModule<F>) -> Result<Vec<Matrix<F>>> {
    x.hom_basis(y)
}

/// Basis of the morphisms `m -> n`, from one linear system in all
/// components at once.
pub fn pi_hom<F: Field>(m: &PiModule<F>, n: &PiModule<F>) -> Result<Vec<PiMorphism<F>>> {
    if m.n() != n.n() {
        return Err(Error::DimensionMismatch("tuples of different length".into()));
    }
    let fld = m.field();
    let len = m.n();
    let shapes = (0..len).map(|i| (n.part(i).dim(), m.part(i).dim())).collect();
    let mut sys = MatrixSystem::new(fld, shapes);
    let one = fld.one();
    let minus = fld.neg(&one);
    for &gen in m.lam().generators() {
        for i in 0..len {
            sys.add(&[
                Term::new(one.clone(), Some(n.part(i).act(gen)), i, None),
                Term::new(minus.clone(), None, i, Some(m.part(i).act(gen))),
            ]);
        }
    }
    for i in 0..len.saturating_sub(1) {
        sys.add(&[Term::new(one.clone(), Some(n.f(i)), i, None), Term::new(minus.clone(), None, i + 1, Some(m.f(i)))]);
        sys.add(&[Term::new(one.clone(), Some(n.g(i)), i + 1, None), Term::new(minus.clone(), None, i, Some(m.g(i)))]);
    }
    Ok(sys.solutions().into_iter().map(|comps| PiMorphism { source: m.clone(), target: n.clone(), comps }).collect())
}

/// Kernel of a morphism with its inclusion.
pub fn pi_kernel<F: Field>(phi: &PiMorphism<F>) -> (PiModule<F>, PiMorphism<F>) {
    let s = &phi.source;
    let bases: Vec<Matrix<F>> = phi.comps.iter().map(|c| c.kernel_basis()).collect();
    let parts = (0..s.n()).map(|i| s.part(i).submodule(&bases[i])).collect();
    let restrict = |b1: &Matrix<F>, map: &Matrix<F>, b0: &Matrix<F>| -> Matrix<F> {
        b1.solve(&map.mul(b0)).expect("shapes").expect("kernel is stable")
    };
    let f = (0..s.n() - 1).map(|i| restrict(&bases[i + 1], s.f(i), &bases[i])).collect();
    let g = (0..s.n() - 1).map(|i| restrict(&bases[i], s.g(i), &bases[i + 1])).collect();
    let k = PiModule::unchecked(s.lam(), parts, f, g).expect("kernel shapes");
    let inc = PiMorphism { source: k.clone(), target: s.clone(), comps: bases };
    (k, inc)
}

/// Cokernel of a morphism with its projection.
pub fn pi_cokernel<F: Field>(phi: &PiMorphism<F>) -> (PiModule<F>, PiMorphism<F>) {
    let t = &phi.target;
    let mut parts = Vec::new();
    let mut projs = Vec::new();
    for (i, c) in phi.comps.iter().enumerate() {
        let (q, p) = t.part(i).quotient(&c.image_basis());
        parts.push(q);
        projs.push(p);
    }
    // The induced map X with X · p0 = p1 · map.
    let descend = |p1: &Matrix<F>, map: &Matrix<F>, p0: &Matrix<F>| -> Matrix<F> {
        let rhs = p1.mul(map);
        p0.transpose().solve(&rhs.transpose()).expect("shapes").expect("image is stable").transpose()
    };
    let f = (0..t.n() - 1).map(|i| descend(&projs[i + 1], t.f(i), &projs[i])).collect();
    let g = (0..t.n() - 1).map(|i| descend(&projs[i], t.g(i), &projs[i + 1])).collect();
    let q = PiModule::unchecked(t.lam(), parts, f, g).expect("cokernel shapes");
    let proj = PiMorphism { source: t.clone(), target: q.clone(), comps: projs };
    (q, proj)
}

/// The algebra data for tuples of length `n` over `Λ`: the preprojective
/// algebra and the tensor algebra `Λ ⊗ Π_n` that tuples are modules over.
#[derive(Clone)]
pub struct PiContext<F: Field> {
    lam: Arc<PresentedAlgebra<F>>,
    n: usize,
    pre: Arc<QuotientPathAlgebra<F>>,
    flat: Arc<PresentedAlgebra<F>>,
    projectives: Vec<PiModule<F>>,
}

impl<F: Field> fmt::Debug for PiContext<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PiContext(n = {}, dim Λ = {})", self.n, self.lam.dim())
    }
}

impl<F: Field> PiContext<F> {
    pub fn new(lam: &Arc<PresentedAlgebra<F>>, n: usize) -> Result<Self> {
        let pre = preprojective_algebra(n, lam.field())?;
        let flat = Arc::new(tensor_algebra(lam, &pre.algebra)?);
        let mut ctx = PiContext { lam: lam.clone(), n, pre: Arc::new(pre), flat, projectives: Vec::new() };
        let mut projectives = Vec::new();
        for pos in 0..ctx.flat.idempotents().len() {
            let p = projective_module(&ctx.flat, pos)?;
            projectives.push(ctx.from_flat(&p)?.0);
        }
        ctx.projectives = projectives;
        Ok(ctx)
    }

    pub fn lam(&self) -> &Arc<PresentedAlgebra<F>> {
        &self.lam
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &F {
        self.lam.field()
    }

    pub fn preprojective(&self) -> &QuotientPathAlgebra<F> {
        &self.pre
    }

    /// The tensor algebra `Λ ⊗ Π_n`.
    pub fn flat_algebra(&self) -> &Arc<PresentedAlgebra<F>> {
        &self.flat
    }

    pub fn projectives(&self) -> &[PiModule<F>] {
        &self.projectives
    }

    /// The coarse idempotent `1 ⊗ e_v` of the tensor algebra.
    pub fn vertex_element(&self, v: usize) -> Vec<F::Elem> {
        tensor_one_left(&self.lam, &self.pre.algebra, self.pre.vertex_idempotent(v))
    }

    /// The element `1 ⊗ a` for an arrow of the double quiver.
    pub fn arrow_element(&self, arrow: usize) -> Result<Vec<F::Elem>> {
        let Some(b) = self.pre.arrow_element(arrow) else {
            return Err(Error::Invalid(format!("arrow {arrow} vanishes in the preprojective algebra")));
        };
        Ok(tensor_one_left(&self.lam, &self.pre.algebra, b))
    }

    /// The linear map of a path of the double quiver on a tuple.
    pub fn path_map(&self, m: &PiModule<F>, arrows: &[usize], start: usize) -> Matrix<F> {
        let n = self.n;
        let mut cur = Matrix::identity(m.field(), m.part(start).dim());
        for &a in arrows {
            cur = if a < n - 1 { m.f(a).mul(&cur) } else { m.g(a - (n - 1)).mul(&cur) };
        }
        cur
    }

    fn check_len(&self, m: &PiModule<F>) -> Result<()> {
        if m.n() != self.n {
            return Err(Error::DimensionMismatch(format!("tuple of length {} in a context of length {}", m.n(), self.n)));
        }
        Ok(())
    }

    /// The module over `Λ ⊗ Π_n` underlying a tuple, on `X_1 ⊕ ... ⊕ X_n`.
    pub fn to_flat(&self, m: &PiModule<F>) -> Result<AModule<F>> {
        self.check_len(m)?;
        let fld = self.field();
        let dims = m.dim_vector();
        let mut offs = vec![0; dims.len()];
        for i in 1..dims.len() {
            offs[i] = offs[i - 1] + dims[i - 1];
        }
        let total = m.dim();
        let dp = self.pre.algebra.dim();
        let path_maps: Vec<Matrix<F>> = self.pre.paths.iter().map(|p| self.path_map(m, &p.arrows, p.source)).collect();
        let mut action = Vec::with_capacity(self.flat.dim());
        for a in 0..self.lam.dim() {
            for (b, p) in self.pre.paths.iter().enumerate() {
                let blk = m.part(p.target).act(a).mul(&path_maps[b]);
                let mut full = Matrix::zeros(fld, total, total);
                full.paste(offs[p.target], offs[p.source], &blk);
                debug_assert_eq!(action.len(), a * dp + b);
                action.push(full);
            }
        }
        AModule::new(&self.flat, total, action)
    }

    /// The tuple of a module over `Λ ⊗ Π_n`, with `X_v` the image of the
    /// coarse idempotent `1 ⊗ e_v`. Also returns the basis (columns) chosen
    /// for each `X_v` inside the module.
    pub fn from_flat(&self, a: &AModule<F>) -> Result<(PiModule<F>, Vec<Matrix<F>>)> {
        if !Arc::ptr_eq(a.algebra(), &self.flat) && **a.algebra() != *self.flat {
            return Err(Error::AlgebraMismatch("module is not over the tensor algebra".into()));
        }
        let n = self.n;
        let dp = self.pre.algebra.dim();
        let bases: Vec<Matrix<F>> = (0..n).map(|v| a.act_elem(&self.vertex_element(v)).image_basis()).collect();
        let restrict = |b1: &Matrix<F>, map: &Matrix<F>, b0: &Matrix<F>| -> Result<Matrix<F>> {
            b1.solve(&map.mul(b0))?.ok_or_else(|| Error::Invalid("vertex decomposition is not stable".into()))
        };
        let mut parts = Vec::with_capacity(n);
        for v in 0..n {
            let e = self.pre.vertex_idempotent(v);
            let action =
                (0..self.lam.dim()).map(|l| restrict(&bases[v], a.act(l * dp + e), &bases[v])).collect::<Result<Vec<_>>>()?;
            parts.push(AModule::new(&self.lam, bases[v].cols(), action)?);
        }
        let mut f = Vec::new();
        let mut g = Vec::new();
        for i in 0..n - 1 {
            f.push(restrict(&bases[i + 1], &a.act_elem(&self.arrow_element(i)?), &bases[i])?);
            g.push(restrict(&bases[i], &a.act_elem(&self.arrow_element(n - 1 + i)?), &bases[i + 1])?);
        }
        Ok((PiModule::unchecked(&self.lam, parts, f, g)?, bases))
    }

    /// Standard vertex bases of `to_flat(m)`: coordinate blocks.
    pub fn standard_bases(&self, m: &PiModule<F>) -> Vec<Matrix<F>> {
        let fld = self.field();
        let total = m.dim();
        let mut off = 0;
        m.parts()
            .iter()
            .map(|p| {
                let d = p.dim();
                let b = Matrix::from_fn(fld, total, d, |r, c| if r == off + c { fld.one() } else { fld.zero() });
                off += d;
                b
            })
            .collect()
    }

    /// A tuple morphism from a linear map between flat modules, given the
    /// vertex bases of both sides.
    pub fn morphism_from_flat(
        &self,
        source: &PiModule<F>,
        source_bases: &[Matrix<F>],
        target: &PiModule<F>,
        target_bases: &[Matrix<F>],
        map: &Matrix<F>,
    ) -> Result<PiMorphism<F>> {
        let comps = (0..self.n)
            .map(|v| {
                target_bases[v]
                    .solve(&map.mul(&source_bases[v]))?
                    .ok_or_else(|| Error::Invalid("map does not respect the vertex decomposition".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        PiMorphism::new(source, target, comps)
    }

    /// The flat form of a tuple morphism, on the standard bases.
    pub fn morphism_to_flat(&self, phi: &PiMorphism<F>) -> Result<ModMap<F>> {
        let s = self.to_flat(&phi.source)?;
        let t = self.to_flat(&phi.target)?;
        let refs: Vec<&Matrix<F>> = phi.comps.iter().collect();
        ModMap::new(&s, &t, Matrix::block_diag(self.field(), &refs))
    }

    /// A random tuple: random Λ-parts, random sparse maps on one side and a
    /// random solution of the relations on the other, plus occasionally a
    /// projective summand.
    pub fn random_module(&self, rng: &mut SplitMix64, max_summands: usize) -> PiModule<F> {
        let m = random_pi_module(&self.lam, self.n, rng, max_summands);
        if !self.projectives.is_empty() && rng.chance(1, 4) {
            let p = &self.projectives[rng.below(self.projectives.len() as u64) as usize];
            PiModule::direct_sum(&self.lam, self.n, &[&m, p]).expect("same length")
        } else {
            m
        }
    }
}

/// A random tuple of length `n` over `lam` without projective summands
/// added on purpose.
pub fn random_pi_module<F: Field>(lam: &Arc<PresentedAlgebra<F>>, n: usize, rng: &mut SplitMix64, max_summands: usize) -> PiModule<F> {
    let fld = lam.field();
    let parts: Vec<AModule<F>> = (0..n)
        .map(|_| if rng.chance(1, 5) { AModule::zero(lam) } else { AModule::random(lam, rng, max_summands) })
        .collect();
    let m = n.saturating_sub(1);
    // `forward`: the f side is chosen, the g side solved for.
    let forward = rng.chance(1, 2);
    let known: Vec<Matrix<F>> = (0..m)
        .map(|i| {
            let (s, t) = if forward { (&parts[i], &parts[i + 1]) } else { (&parts[i + 1], &parts[i]) };
            let hs = lambda_hom(s, t).expect("same algebra");
            let mut acc = Matrix::zeros(fld, t.dim(), s.dim());
            if !rng.chance(1, 4) {
                for h in &hs {
                    if rng.chance(1, 2) {
                        acc = acc.add_scaled(&fld.random(rng), h);
                    }
                }
            }
            acc
        })
        .collect();
    let shapes: Vec<(usize, usize)> = (0..m)
        .map(|i| if forward { (parts[i].dim(), parts[i + 1].dim()) } else { (parts[i + 1].dim(), parts[i].dim()) })
        .collect();
    let mut sys = MatrixSystem::new(fld, shapes);
    let one = fld.one();
    let minus = fld.neg(&one);
    for &gen in lam.generators() {
        for i in 0..m {
            let (s, t) = if forward { (&parts[i + 1], &parts[i]) } else { (&parts[i], &parts[i + 1]) };
            sys.add(&[Term::new(one.clone(), Some(t.act(gen)), i, None), Term::new(minus.clone(), None, i, Some(s.act(gen)))]);
        }
    }
    // Relation at vertex v: g_v f_v - f_{v-1} g_{v-1} = 0.
    for v in 0..n {
        let mut terms = Vec::new();
        if forward {
            if v < m {
                terms.push(Term::new(one.clone(), None, v, Some(&known[v])));
            }
            if v > 0 {
                terms.push(Term::new(minus.clone(), Some(&known[v - 1]), v - 1, None));
            }
        } else {
            if v < m {
                terms.push(Term::new(one.clone(), Some(&known[v]), v, None));
            }
            if v > 0 {
                terms.push(Term::new(minus.clone(), None, v - 1, Some(&known[v - 1])));
            }
        }
        sys.add(&terms);
    }
    let sols = sys.solutions();
    let mut solved: Vec<Matrix<F>> = sys.split(&vec![fld.zero(); sys.width()]);
    if !rng.chance(1, 4) {
        for s in &sols {
            if rng.chance(2, 3) {
                let c = fld.random(rng);
                solved = solved.iter().zip(s).map(|(a, b)| a.add_scaled(&c, b)).collect();
            }
        }
    }
    let (f, g) = if forward { (known, solved) } else { (solved, known) };
    PiModule::unchecked(lam, parts, f, g).expect("random tuple shapes")
}

/// The category of tuples of a fixed length over `Λ`.
#[derive(Clone, Debug)]
pub struct PiCategory<F: Field> {
    pub ctx: PiContext<F>,
}

impl<F: Field> PiCategory<F> {
    pub fn new(lam: &Arc<PresentedAlgebra<F>>, n: usize) -> Result<Self> {
        Ok(PiCategory { ctx: PiContext::new(lam, n)? })
    }
}

impl<F: Field> AbelianCategory for PiCategory<F> {
    type F = F;
    type Obj = PiModule<F>;
    type Mor = PiMorphism<F>;

    fn field(&self) -> &F {
        self.ctx.field()
    }

    fn dim_vector(&self, x: &PiModule<F>) -> Vec<usize> {
        x.dim_vector()
    }

    fn source(&self, m: &PiMorphism<F>) -> PiModule<F> {
        m.source.clone()
    }

    fn target(&self, m: &PiMorphism<F>) -> PiModule<F> {
        m.target.clone()
    }

    fn zero_object(&self) -> PiModule<F> {
        PiModule::zero(&self.ctx.lam, self.ctx.n)
    }

    fn identity(&self, x: &PiModule<F>) -> PiMorphism<F> {
        PiMorphism::identity(x)
    }

    fn zero(&self, x: &PiModule<F>, y: &PiModule<F>) -> PiMorphism<F> {
        PiMorphism::zero(x, y)
    }

    fn compose(&self, g: &PiMorphism<F>, f: &PiMorphism<F>) -> PiMorphism<F> {
        g.after(f)
    }

    fn hom_basis(&self, x: &PiModule<F>, y: &PiModule<F>) -> Vec<PiMorphism<F>> {
        pi_hom(x, y).expect("tuples of the category length")
    }

    fn coords(&self, m: &PiMorphism<F>) -> Vec<F::Elem> {
        m.comps.iter().flat_map(|c| c.data().iter().cloned()).collect()
    }

    fn lin_comb(&self, x: &PiModule<F>, y: &PiModule<F>, terms: &[(F::Elem, &PiMorphism<F>)]) -> PiMorphism<F> {
        let fld = self.field();
        let comps = (0..x.n())
            .map(|i| {
                let ts: Vec<(F::Elem, &Matrix<F>)> = terms.iter().map(|(c, m)| (c.clone(), &m.comps[i])).collect();
                Matrix::lin_comb(fld, y.part(i).dim(), x.part(i).dim(), &ts)
            })
            .collect();
        PiMorphism { source: x.clone(), target: y.clone(), comps }
    }

    fn direct_sum(&self, xs: &[PiModule<F>]) -> (PiModule<F>, Vec<PiMorphism<F>>, Vec<PiMorphism<F>>) {
        let fld = self.field();
        let n = self.ctx.n;
        let refs: Vec<&PiModule<F>> = xs.iter().collect();
        let s = PiModule::direct_sum(&self.ctx.lam, n, &refs).expect("summands of the category length");
        let mut offs = vec![0usize; n];
        let mut inj = Vec::new();
        let mut proj = Vec::new();
        for x in xs {
            let comps: Vec<Matrix<F>> = (0..n)
                .map(|i| {
                    let o = offs[i];
                    Matrix::from_fn(fld, s.part(i).dim(), x.part(i).dim(), |r, c| if r == o + c { fld.one() } else { fld.zero() })
                })
                .collect();
            for i in 0..n {
                offs[i] += x.part(i).dim();
            }
            proj.push(PiMorphism { source: s.clone(), target: x.clone(), comps: comps.iter().map(|c| c.transpose()).collect() });
            inj.push(PiMorphism { source: x.clone(), target: s.clone(), comps });
        }
        (s, inj, proj)
    }

    fn kernel(&self, m: &PiMorphism<F>) -> (PiModule<F>, PiMorphism<F>) {
        pi_kernel(m)
    }

    fn cokernel(&self, m: &PiMorphism<F>) -> (PiModule<F>, PiMorphism<F>) {
        pi_cokernel(m)
    }

    fn projective_cover(&self, x: &PiModule<F>) -> Result<PiMorphism<F>> {
        let flat = self.ctx.to_flat(x)?;
        let (p, pi) = flat.projective_cover()?;
        let (ptup, pbases) = self.ctx.from_flat(&p)?;
        self.ctx.morphism_from_flat(&ptup, &pbases, x, &self.ctx.standard_bases(x), &pi)
    }

    fn indecomposable_projectives(&self) -> Result<Vec<PiModule<F>>> {
        Ok(self.ctx.projectives.clone())
    }

    fn is_iso(&self, m: &PiMorphism<F>) -> bool {
        all_invertible(&m.comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algcore::{dual_numbers, field_algebra};
    use crate::category::{ext_dims, iso_test, stable_hom_dim, IsoOutcome};
    use crate::exactlin::PrimeField;

    fn kcat(n: usize) -> PiCategory<PrimeField> {
        let f = PrimeField::gf101();
        PiCategory::new(&Arc::new(field_algebra(&f)), n).unwrap()
    }

    #[test]
    fn projectives_have_the_expected_dimension_vectors() {
        let cat = kcat(3);
        let dv: Vec<Vec<usize>> = cat.ctx.projectives().iter().map(|p| p.dim_vector()).collect();
        assert_eq!(dv, vec![vec![1, 1, 1], vec![1, 2, 1], vec![1, 1, 1]]);
        for p in cat.ctx.projectives() {
            assert!(check_pi_relations(p).is_empty());
        }
    }

    #[test]
    fn flat_round_trip() {
        let cat = kcat(3);
        let mut rng = SplitMix64::new(7);
        for _ in 0..10 {
            let m = cat.ctx.random_module(&mut rng, 2);
            assert!(check_pi_relations(&m).is_empty());
            let flat = cat.ctx.to_flat(&m).unwrap();
            assert!(flat.check().is_empty());
            let (back, _) = cat.ctx.from_flat(&flat).unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn hom_matches_flat_hom() {
        let f = PrimeField::gf101();
        let cat = PiCategory::new(&Arc::new(dual_numbers(&f)), 2).unwrap();
        let mut rng = SplitMix64::new(11);
        for _ in 0..6 {
            let a = cat.ctx.random_module(&mut rng, 2);
            let b = cat.ctx.random_module(&mut rng, 2);
            let h = pi_hom(&a, &b).unwrap();
            assert!(h.iter().all(|m| m.is_morphism()));
            let fa = cat.ctx.to_flat(&a).unwrap();
            let fb = cat.ctx.to_flat(&b).unwrap();
            assert_eq!(h.len(), fa.hom_basis(&fb).unwrap().len());
        }
    }

    #[test]
    fn kernels_and_cokernels() {
        let cat = kcat(3);
        let mut rng = SplitMix64::new(3);
        for _ in 0..8 {
            let a = cat.ctx.random_module(&mut rng, 2);
            let b = cat.ctx.random_module(&mut rng, 2);
            let hs = pi_hom(&a, &b).unwrap();
            let Some(h) = hs.first() else { continue };
            let (k, inc) = pi_kernel(h);
            let (q, pr) = pi_cokernel(h);
            assert!(check_pi_relations(&k).is_empty() && check_pi_relations(&q).is_empty());
            assert!(inc.is_morphism() && pr.is_morphism());
            assert!(h.after(&inc).is_zero() && pr.after(h).is_zero());
            let rank: usize = h.comps.iter().map(|c| c.rank()).sum();
            assert_eq!(k.dim() + rank, a.dim());
            assert_eq!(q.dim() + rank, b.dim());
        }
    }

    #[test]
    fn covers_are_surjective_and_projectives_have_no_ext() {
        let cat = kcat(3);
        let mut rng = SplitMix64::new(5);
        let projs = cat.ctx.projectives().to_vec();
        for _ in 0..5 {
            let m = cat.ctx.random_module(&mut rng, 2);
            let pi = cat.projective_cover(&m).unwrap();
            assert!(pi.is_morphism());
            let rank: usize = pi.comps.iter().map(|c| c.rank()).sum();
            assert_eq!(rank, m.dim());
            for p in &projs {
                let e = ext_dims(&cat, p, &m, 2).unwrap();
                assert_eq!(&e[1..], &[0, 0]);
                assert_eq!(stable_hom_dim(&cat, p, &m).unwrap(), 0);
            }
        }
    }

    #[test]
    fn iso_test_finds_isomorphisms_and_rejects_mismatches() {
        let cat = kcat(3);
        let mut rng = SplitMix64::new(9);
        let ps = cat.ctx.projectives();
        assert!(iso_test(&cat, &ps[0], &ps[0], &mut rng).is_iso());
        assert_eq!(iso_test(&cat, &ps[0], &ps[1], &mut rng), IsoOutcome::NotIsomorphic);
        // Same dimension vectors and hom dimensions, still not isomorphic.
        assert_eq!(iso_test(&cat, &ps[0], &ps[2], &mut rng), IsoOutcome::NotFound);
    }

    #[test]
    fn new_rejects_broken_relations() {
        let f = PrimeField::gf101();
        let lam = Arc::new(field_algebra(&f));
        let k = AModule::regular(&lam);
        let one = Matrix::identity(&f, 1);
        assert!(PiModule::new(&lam, vec![k.clone(), k.clone()], vec![one.clone()], vec![one]).is_err());
    }
}
