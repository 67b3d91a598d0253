//! A small interface for the finite-dimensional abelian categories used here
//! (modules over a base algebra and over its preprojective extension), with
//! Ext groups, stable homs and isomorphism search written once on top of it.

use alloc::vec;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt::Debug;

use crate::algcore::{projective_module, AModule, ModMap, PresentedAlgebra};
use crate::error::Result;
use crate::exactlin::{EchelonBasis, Field, Matrix};
use crate::rng::SplitMix64;

pub type Elem<C> = <<C as AbelianCategory>::F as Field>::Elem;

pub trait AbelianCategory {
    type F: Field;
    type Obj: Clone + Debug + PartialEq;
    type Mor: Clone + Debug + PartialEq;

    fn field(&self) -> &Self::F;
    /// Dimension vector of an object (one entry for plain modules).
    fn dim_vector(&self, x: &Self::Obj) -> Vec<usize>;
    fn source(&self, m: &Self::Mor) -> Self::Obj;
    fn target(&self, m: &Self::Mor) -> Self::Obj;
    fn zero_object(&self) -> Self::Obj;
    fn identity(&self, x: &Self::Obj) -> Self::Mor;
    fn zero(&self, x: &Self::Obj, y: &Self::Obj) -> Self::Mor;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor;
    fn hom_basis(&self, x: &Self::Obj, y: &Self::Obj) -> Vec<Self::Mor>;
    /// Coordinates of a morphism in the ambient space of linear maps.
    fn coords(&self, m: &Self::Mor) -> Vec<Elem<Self>>;
    fn lin_comb(&self, x: &Self::Obj, y: &Self::Obj, terms: &[(Elem<Self>, &Self::Mor)]) -> Self::Mor;
    /// Direct sum with its injections and projections.
    fn direct_sum(&self, xs: &[Self::Obj]) -> (Self::Obj, Vec<Self::Mor>, Vec<Self::Mor>);
    fn kernel(&self, m: &Self::Mor) -> (Self::Obj, Self::Mor);
    fn cokernel(&self, m: &Self::Mor) -> (Self::Obj, Self::Mor);
    fn projective_cover(&self, x: &Self::Obj) -> Result<Self::Mor>;
    fn indecomposable_projectives(&self) -> Result<Vec<Self::Obj>>;
    fn is_iso(&self, m: &Self::Mor) -> bool;

    fn dim(&self, x: &Self::Obj) -> usize {
        self.dim_vector(x).iter().sum()
    }

    fn is_zero_obj(&self, x: &Self::Obj) -> bool {
        self.dim(x) == 0
    }

    fn is_zero_mor(&self, m: &Self::Mor) -> bool {
        let f = self.field();
        self.coords(m).iter().all(|c| f.is_zero(c))
    }

    fn neg(&self, m: &Self::Mor) -> Self::Mor {
        let f = self.field();
        self.lin_comb(&self.source(m), &self.target(m), &[(f.neg(&f.one()), m)])
    }

    fn add(&self, a: &Self::Mor, b: &Self::Mor) -> Self::Mor {
        let f = self.field();
        self.lin_comb(&self.source(a), &self.target(a), &[(f.one(), a), (f.one(), b)])
    }

    fn hom_dim(&self, x: &Self::Obj, y: &Self::Obj) -> usize {
        self.hom_basis(x, y).len()
    }
}

/// Whether `x` is projective: its projective cover is an isomorphism.
pub fn is_projective<C: AbelianCategory>(cat: &C, x: &C::Obj) -> Result<bool> {
    let pi = cat.projective_cover(x)?;
    Ok(cat.dim(&cat.source(&pi)) == cat.dim(x))
}

/// Rank of a family of morphisms, measured in ambient coordinates.
pub fn span_rank<C: AbelianCategory>(cat: &C, ms: &[C::Mor]) -> usize {
    let Some(first) = ms.first() else { return 0 };
    let width = cat.coords(first).len();
    let mut e = EchelonBasis::new(cat.field(), width);
    for m in ms {
        e.insert(cat.coords(m));
    }
    e.rank()
}

/// A projective resolution `P_k -> ... -> P_0 -> M` truncated after `len`
/// terms: returns the objects `P_0..P_{len-1}` and the differentials
/// `d_k: P_k -> P_{k-1}` for `k >= 1` (index `k-1` in the list), plus the
/// augmentation `P_0 -> M`.
pub struct Resolution<C: AbelianCategory> {
    pub terms: Vec<C::Obj>,
    pub augmentation: C::Mor,
    pub differentials: Vec<C::Mor>,
}

pub fn projective_resolution<C: AbelianCategory>(cat: &C, m: &C::Obj, len: usize) -> Result<Resolution<C>> {
    let cover = cat.projective_cover(m)?;
    let mut terms = vec![cat.source(&cover)];
    let mut differentials = Vec::new();
    let mut last = cover.clone();
    while terms.len() < len {
        let (k, inc) = cat.kernel(&last);
        let c = cat.projective_cover(&k)?;
        differentials.push(cat.compose(&inc, &c));
        terms.push(cat.source(&c));
        last = c;
    }
    Ok(Resolution { terms, augmentation: cover, differentials })
}

/// `dim Ext^d(m, n)` for `d = 0..=max_d`, from a truncated projective
/// resolution of `m` and the ranks of the induced maps on hom spaces.
pub fn ext_dims<C: AbelianCategory>(cat: &C, m: &C::Obj, n: &C::Obj, max_d: usize) -> Result<Vec<usize>> {
    let res = projective_resolution(cat, m, max_d + 2)?;
    let homs: Vec<Vec<C::Mor>> = res.terms.iter().map(|p| cat.hom_basis(p, n)).collect();
    // rank of δ_{k+1}: Hom(P_k, N) -> Hom(P_{k+1}, N), h ↦ h ∘ d_{k+1}
    let delta_rank = |k: usize| -> usize {
        let d = &res.differentials[k];
        let imgs: Vec<C::Mor> = homs[k].iter().map(|h| cat.compose(h, d)).collect();
        span_rank(cat, &imgs)
    };
    let mut out = Vec::with_capacity(max_d + 1);
    for d in 0..=max_d {
        let outgoing = delta_rank(d);
        let incoming = if d == 0 { 0 } else { delta_rank(d - 1) };
        out.push(homs[d].len() - outgoing - incoming);
    }
    Ok(out)
}

pub fn ext_dim<C: AbelianCategory>(cat: &C, m: &C::Obj, n: &C::Obj, d: usize) -> Result<usize> {
    Ok(ext_dims(cat, m, n, d)?[d])
}

/// Dimension of the stable hom space: homs modulo those factoring through a
/// projective, computed as those factoring through the projective cover of
/// the target.
pub fn stable_hom_dim<C: AbelianCategory>(cat: &C, m: &C::Obj, n: &C::Obj) -> Result<usize> {
    let all = cat.hom_basis(m, n);
    if all.is_empty() {
        return Ok(0);
    }
    let pi = cat.projective_cover(n)?;
    let p = cat.source(&pi);
    let through: Vec<C::Mor> = cat.hom_basis(m, &p).iter().map(|h| cat.compose(&pi, h)).collect();
    Ok(all.len() - span_rank(cat, &through))
}

/// Outcome of the randomized isomorphism search.
#[derive(Debug, Clone, PartialEq)]
pub enum IsoOutcome<M> {
    /// An explicit isomorphism was found.
    Isomorphic(M),
    /// A necessary condition fails, so the objects are not isomorphic.
    NotIsomorphic,
    /// Every sampled combination was singular; over a small field this is
    /// only evidence, not proof, of non-isomorphism.
    NotFound,
}

impl<M> IsoOutcome<M> {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic(_))
    }
}

pub const ISO_RETRIES: usize = 64;

/// Searches for an isomorphism among random combinations of a hom basis,
/// after the prefilters on dimension vectors and hom dimensions.
pub fn iso_test<C: AbelianCategory>(cat: &C, x: &C::Obj, y: &C::Obj, rng: &mut SplitMix64) -> IsoOutcome<C::Mor> {
    if cat.dim_vector(x) != cat.dim_vector(y) {
        return IsoOutcome::NotIsomorphic;
    }
    if cat.is_zero_obj(x) {
        return IsoOutcome::Isomorphic(cat.zero(x, y));
    }
    let hxy = cat.hom_basis(x, y);
    if hxy.is_empty() || hxy.len() != cat.hom_dim(y, x) {
        return IsoOutcome::NotIsomorphic;
    }
    let f = cat.field();
    for _ in 0..ISO_RETRIES {
        let coeffs: Vec<Elem<C>> = hxy.iter().map(|_| f.random(rng)).collect();
        let terms: Vec<(Elem<C>, &C::Mor)> = coeffs.into_iter().zip(hxy.iter()).collect();
        let cand = cat.lin_comb(x, y, &terms);
        if cat.is_iso(&cand) {
            return IsoOutcome::Isomorphic(cand);
        }
    }
    IsoOutcome::NotFound
}

/// Whether the square matrices of a morphism are all invertible.
pub fn all_invertible<F: Field>(blocks: &[Matrix<F>]) -> bool {
    blocks.iter().all(|b| b.is_square() && b.rank() == b.rows())
}

/// Finite-dimensional modules over a basic presented algebra.
#[derive(Clone, Debug)]
pub struct ModuleCategory<F: Field> {
    algebra: Arc<PresentedAlgebra<F>>,
}

impl<F: Field> ModuleCategory<F> {
    pub fn new(algebra: &Arc<PresentedAlgebra<F>>) -> Self {
        ModuleCategory { algebra: algebra.clone() }
    }

    pub fn algebra(&self) -> &Arc<PresentedAlgebra<F>> {
        &self.algebra
    }
}

impl<F: Field> AbelianCategory for ModuleCategory<F> {
    type F = F;
    type Obj = AModule<F>;
    type Mor = ModMap<F>;

    fn field(&self) -> &F {
        self.algebra.field()
    }

    fn dim_vector(&self, x: &AModule<F>) -> Vec<usize> {
        vec![x.dim()]
    }

    fn source(&self, m: &ModMap<F>) -> AModule<F> {
        m.source.clone()
    }

    fn target(&self, m: &ModMap<F>) -> AModule<F> {
        m.target.clone()
    }

    fn zero_object(&self) -> AModule<F> {
        AModule::zero(&self.algebra)
    }

    fn identity(&self, x: &AModule<F>) -> ModMap<F> {
        ModMap::identity(x)
    }

    fn zero(&self, x: &AModule<F>, y: &AModule<F>) -> ModMap<F> {
        ModMap::zero(x, y)
    }

    fn compose(&self, g: &ModMap<F>, f: &ModMap<F>) -> ModMap<F> {
        g.after(f)
    }

    fn hom_basis(&self, x: &AModule<F>, y: &AModule<F>) -> Vec<ModMap<F>> {
        x.hom_basis(y)
            .expect("modules over the category algebra")
            .into_iter()
            .map(|m| ModMap { source: x.clone(), target: y.clone(), matrix: m })
            .collect()
    }

    fn coords(&self, m: &ModMap<F>) -> Vec<F::Elem> {
        m.matrix.data().to_vec()
    }

    fn lin_comb(&self, x: &AModule<F>, y: &AModule<F>, terms: &[(F::Elem, &ModMap<F>)]) -> ModMap<F> {
        let ts: Vec<(F::Elem, &Matrix<F>)> = terms.iter().map(|(c, m)| (c.clone(), &m.matrix)).collect();
        ModMap { source: x.clone(), target: y.clone(), matrix: Matrix::lin_comb(self.field(), y.dim(), x.dim(), &ts) }
    }

    fn direct_sum(&self, xs: &[AModule<F>]) -> (AModule<F>, Vec<ModMap<F>>, Vec<ModMap<F>>) {
        let refs: Vec<&AModule<F>> = xs.iter().collect();
        let s = AModule::direct_sum(&self.algebra, &refs);
        let f = self.field();
        let mut inj = Vec::new();
        let mut proj = Vec::new();
        let mut off = 0;
        for x in xs {
            let i = Matrix::from_fn(f, s.dim(), x.dim(), |r, c| if r == off + c { f.one() } else { f.zero() });
            proj.push(ModMap { source: s.clone(), target: x.clone(), matrix: i.transpose() });
            inj.push(ModMap { source: x.clone(), target: s.clone(), matrix: i });
            off += x.dim();
        }
        (s, inj, proj)
    }

    fn kernel(&self, m: &ModMap<F>) -> (AModule<F>, ModMap<F>) {
        let k = m.matrix.kernel_basis();
        let sub = m.source.submodule(&k);
        (sub.clone(), ModMap { source: sub, target: m.source.clone(), matrix: k })
    }

    fn cokernel(&self, m: &ModMap<F>) -> (AModule<F>, ModMap<F>) {
        let (q, p) = m.target.quotient(&m.matrix.image_basis());
        (q.clone(), ModMap { source: m.target.clone(), target: q, matrix: p })
    }

    fn projective_cover(&self, x: &AModule<F>) -> Result<ModMap<F>> {
        let (p, pi) = x.projective_cover()?;
        Ok(ModMap { source: p, target: x.clone(), matrix: pi })
    }

    fn indecomposable_projectives(&self) -> Result<Vec<AModule<F>>> {
        (0..self.algebra.idempotents().len()).map(|i| projective_module(&self.algebra, i)).collect()
    }

    fn is_iso(&self, m: &ModMap<F>) -> bool {
        all_invertible(core::slice::from_ref(&m.matrix))
    }
}
