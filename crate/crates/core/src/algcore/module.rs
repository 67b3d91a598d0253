use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::algebra::PresentedAlgebra;
use crate::error::{Error, Result};
use crate::exactlin::{EchelonBasis, Field, Matrix, MatrixSystem, Term};
use crate::rng::SplitMix64;

struct Inner<F: Field> {
    algebra: Arc<PresentedAlgebra<F>>,
    dim: usize,
    action: Vec<Matrix<F>>,
}

/// A finite-dimensional left module, given by one action matrix per basis
/// element of its algebra. Cloning is cheap.
pub struct AModule<F: Field>(Arc<Inner<F>>);

impl<F: Field> Clone for AModule<F> {
    fn clone(&self) -> Self {
        AModule(self.0.clone())
    }
}

impl<F: Field> PartialEq for AModule<F> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.same_algebra(other) && self.0.dim == other.0.dim && self.0.action == other.0.action)
    }
}

impl<F: Field> fmt::Debug for AModule<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AModule(dim {} over an algebra of dim {})", self.0.dim, self.0.algebra.dim())
    }
}

impl<F: Field> AModule<F> {
    pub fn new(algebra: &Arc<PresentedAlgebra<F>>, dim: usize, action: Vec<Matrix<F>>) -> Result<Self> {
        if action.len() != algebra.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} action matrices for an algebra of dimension {}",
                action.len(),
                algebra.dim()
            )));
        }
        if action.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::DimensionMismatch(format!("action matrices must be {dim}x{dim}")));
        }
        Ok(AModule(Arc::new(Inner { algebra: algebra.clone(), dim, action })))
    }

    pub fn zero(algebra: &Arc<PresentedAlgebra<F>>) -> Self {
        let f = algebra.field();
        AModule(Arc::new(Inner { algebra: algebra.clone(), dim: 0, action: vec![Matrix::zeros(f, 0, 0); algebra.dim()] }))
    }

    /// The algebra acting on itself by left multiplication.
    pub fn regular(algebra: &Arc<PresentedAlgebra<F>>) -> Self {
        let action = (0..algebra.dim()).map(|i| algebra.left_mult_matrix(i)).collect();
        AModule(Arc::new(Inner { algebra: algebra.clone(), dim: algebra.dim(), action }))
    }

    pub fn algebra(&self) -> &Arc<PresentedAlgebra<F>> {
        &self.0.algebra
    }
    pub fn field(&self) -> &F {
        self.0.algebra.field()
    }
    pub fn dim(&self) -> usize {
        self.0.dim
    }
    pub fn is_zero(&self) -> bool {
        self.0.dim == 0
    }
    pub fn act(&self, i: usize) -> &Matrix<F> {
        &self.0.action[i]
    }
    pub fn actions(&self) -> &[Matrix<F>] {
        &self.0.action
    }

    pub fn same_algebra(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0.algebra, &other.0.algebra) || self.0.algebra == other.0.algebra
    }

    /// Action matrix of an arbitrary algebra element.
    pub fn act_elem(&self, v: &[F::Elem]) -> Matrix<F> {
        let f = self.field();
        let mut m = Matrix::zeros(f, self.dim(), self.dim());
        for (i, c) in v.iter().enumerate() {
            if !f.is_zero(c) {
                m = m.add_scaled(c, self.act(i));
            }
        }
        m
    }

    /// Violations of the module axioms (empty when the action is valid).
    pub fn check(&self) -> Vec<String> {
        let a = self.algebra();
        let f = self.field();
        let mut out = Vec::new();
        if !self.act_elem(&a.unit()).is_identity() {
            out.push(String::from("the unit does not act as the identity"));
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let mut rhs = Matrix::zeros(f, self.dim(), self.dim());
                for (k, c) in a.product(i, j) {
                    rhs = rhs.add_scaled(c, self.act(*k));
                }
                if self.act(i).mul(self.act(j)) != rhs {
                    out.push(format!("action of {}·{} is not multiplicative", a.label(i), a.label(j)));
                }
            }
        }
        out
    }

    /// Direct sum with block-diagonal action; summands in the given order.
    pub fn direct_sum(algebra: &Arc<PresentedAlgebra<F>>, parts: &[&Self]) -> Self {
        let f = algebra.field();
        let dim = parts.iter().map(|p| p.dim()).sum();
        let action = (0..algebra.dim())
            .map(|i| {
                let blocks: Vec<&Matrix<F>> = parts.iter().map(|p| p.act(i)).collect();
                Matrix::block_diag(f, &blocks)
            })
            .collect();
        AModule(Arc::new(Inner { algebra: algebra.clone(), dim, action }))
    }

    /// The submodule with the given basis (columns), assumed invariant.
    pub fn submodule(&self, basis: &Matrix<F>) -> Self {
        let action = self
            .actions()
            .iter()
            .map(|a| basis.solve(&a.mul(basis)).expect("shapes").expect("subspace is invariant"))
            .collect();
        AModule(Arc::new(Inner { algebra: self.0.algebra.clone(), dim: basis.cols(), action }))
    }

    /// The quotient by an invariant subspace (basis as columns) and the
    /// projection onto it.
    pub fn quotient(&self, sub: &Matrix<F>) -> (Self, Matrix<F>) {
        let proj = sub.left_kernel_basis();
        let action = self.actions().iter().map(|a| induced_on_quotient(&proj, a)).collect();
        let q = AModule(Arc::new(Inner { algebra: self.0.algebra.clone(), dim: proj.rows(), action }));
        (q, proj)
    }

    /// Basis (columns) of the submodule generated by the given vectors.
    pub fn generated(&self, vectors: &[Vec<F::Elem>]) -> Matrix<F> {
        let f = self.field();
        let mut span = EchelonBasis::new(f, self.dim());
        let mut cols = Vec::new();
        for v in vectors {
            for a in self.actions() {
                let w = a.mul_vec(v);
                if span.insert(w.clone()) {
                    cols.push(w);
                }
            }
        }
        Matrix::from_columns(f, self.dim(), &cols)
    }

    /// Basis of `Hom_A(self, y)` as `dim y × dim self` matrices.
    pub fn hom_basis(&self, y: &Self) -> Result<Vec<Matrix<F>>> {
        if !self.same_algebra(y) {
            return Err(Error::AlgebraMismatch("modules over different algebras".into()));
        }
        let f = self.field();
        let mut sys = MatrixSystem::new(f, vec![(y.dim(), self.dim())]);
        let minus = f.neg(&f.one());
        for &g in self.algebra().generators() {
            sys.add(&[Term::new(f.one(), Some(y.act(g)), 0, None), Term::new(minus.clone(), None, 0, Some(self.act(g)))]);
        }
        Ok(sys.solutions().into_iter().map(|mut v| v.remove(0)).collect())
    }

    /// Whether `m` is an `A`-linear map `self -> y`.
    pub fn is_hom(&self, y: &Self, m: &Matrix<F>) -> bool {
        m.rows() == y.dim()
            && m.cols() == self.dim()
            && self.algebra().generators().iter().all(|&g| y.act(g).mul(m) == m.mul(self.act(g)))
    }

    /// Vectors of `self` whose classes form a basis of `e·top` for each
    /// idempotent `e`, listed as `(idempotent basis index, vector)`.
    /// Requires a radical description of the algebra.
    pub fn top_generators(&self) -> Result<Vec<(usize, Vec<F::Elem>)>> {
        let a = self.algebra();
        if a.radical().is_none() {
            return Err(Error::Unsupported("projective covers need a basic algebra with known radical".into()));
        }
        let f = self.field();
        let mut span = EchelonBasis::new(f, self.dim());
        for g in a.radical_generators() {
            for col in self.act(g).columns() {
                span.insert(col);
            }
        }
        let mut out = Vec::new();
        for &e in a.idempotents() {
            for col in self.act(e).columns() {
                if span.insert(col.clone()) {
                    out.push((e, col));
                }
            }
        }
        Ok(out)
    }

    /// A projective cover: `(P, π)` with `P = ⊕ A·e` over the top generators
    /// and `π: P -> self` surjective.
    pub fn projective_cover(&self) -> Result<(Self, Matrix<F>)> {
        let a = self.algebra();
        let gens = self.top_generators()?;
        let mut parts = Vec::new();
        let mut maps = Vec::new();
        for (e, v) in &gens {
            let pos = a.idempotents().iter().position(|x| x == e).expect("idempotent");
            let (p, basis) = projective_with_basis(a, pos)?;
            // Basis element β of A·e goes to β·v.
            let cols: Vec<Vec<F::Elem>> = basis.columns().iter().map(|beta| self.act_elem(beta).mul_vec(v)).collect();
            maps.push(Matrix::from_columns(self.field(), self.dim(), &cols));
            parts.push(p);
        }
        let refs: Vec<&Self> = parts.iter().collect();
        let p = Self::direct_sum(a, &refs);
        let mut pi = Matrix::zeros(self.field(), self.dim(), 0);
        for m in &maps {
            pi = pi.hstack(m)?;
        }
        Ok((p, pi))
    }

    /// A random module: a direct sum of cyclic modules `A·e / A·v` with `v`
    /// random in `rad·e`, including projective and simple summands.
    pub fn random(algebra: &Arc<PresentedAlgebra<F>>, rng: &mut SplitMix64, max_summands: usize) -> Self {
        let count = rng.range(1, max_summands.max(1));
        let parts: Vec<Self> = (0..count).map(|_| random_cyclic(algebra, rng)).collect();
        let refs: Vec<&Self> = parts.iter().collect();
        Self::direct_sum(algebra, &refs)
    }
}

fn induced_on_quotient<F: Field>(proj: &Matrix<F>, a: &Matrix<F>) -> Matrix<F> {
    // Solve X · proj = proj · a for X.
    let rhs = proj.mul(a);
    proj.transpose().solve(&rhs.transpose()).expect("shapes").expect("subspace is invariant").transpose()
}

/// `A·e` for the idempotent at position `pos`, with the basis (as algebra
/// elements, columns) used for its coordinates.
fn projective_with_basis<F: Field>(a: &Arc<PresentedAlgebra<F>>, pos: usize) -> Result<(AModule<F>, Matrix<F>)> {
    let Some(&e) = a.idempotents().get(pos) else {
        return Err(Error::BadIndex(format!("idempotent position {pos} of {}", a.idempotents().len())));
    };
    let basis = a.right_mult_matrix(e).image_basis();
    let reg = AModule::regular(a);
    Ok((reg.submodule(&basis), basis))
}

/// The left ideal `A·e` for the idempotent at position `idx`.
pub fn projective_module<F: Field>(a: &Arc<PresentedAlgebra<F>>, idx: usize) -> Result<AModule<F>> {
    projective_with_basis(a, idx).map(|(m, _)| m)
}

fn random_cyclic<F: Field>(a: &Arc<PresentedAlgebra<F>>, rng: &mut SplitMix64) -> AModule<F> {
    let f = a.field();
    let pos = rng.below(a.idempotents().len() as u64) as usize;
    let (p, basis) = projective_with_basis(a, pos).expect("valid position");
    let e = a.idempotents()[pos];
    // Coordinates in A·e of the radical part: basis elements other than e.
    let rad_cols: Vec<usize> = (0..p.dim()).filter(|&c| basis.column(c) != a.basis_vec(e)).collect();
    let choice = rng.below(4);
    let sub = if rad_cols.is_empty() || choice == 0 {
        Matrix::zeros(f, p.dim(), 0)
    } else if choice == 1 {
        let vecs: Vec<Vec<F::Elem>> = rad_cols
            .iter()
            .map(|&c| {
                let mut v = vec![f.zero(); p.dim()];
                v[c] = f.one();
                v
            })
            .collect();
        p.generated(&vecs)
    } else {
        let mut v = vec![f.zero(); p.dim()];
        for &c in &rad_cols {
            v[c] = f.random(rng);
        }
        p.generated(&[v])
    };
    if sub.cols() == 0 {
        p
    } else {
        p.quotient(&sub).0
    }
}

/// A morphism of modules over the same algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct ModMap<F: Field> {
    pub source: AModule<F>,
    pub target: AModule<F>,
    pub matrix: Matrix<F>,
}

impl<F: Field> ModMap<F> {
    pub fn new(source: &AModule<F>, target: &AModule<F>, matrix: Matrix<F>) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch("map shape does not match its modules".into()));
        }
        if !source.same_algebra(target) {
            return Err(Error::AlgebraMismatch("map between modules over different algebras".into()));
        }
        Ok(ModMap { source: source.clone(), target: target.clone(), matrix })
    }

    pub fn identity(m: &AModule<F>) -> Self {
        ModMap { source: m.clone(), target: m.clone(), matrix: Matrix::identity(m.field(), m.dim()) }
    }

    pub fn zero(s: &AModule<F>, t: &AModule<F>) -> Self {
        ModMap { source: s.clone(), target: t.clone(), matrix: Matrix::zeros(s.field(), t.dim(), s.dim()) }
    }

    /// `self ∘ g`.
    pub fn after(&self, g: &Self) -> Self {
        ModMap { source: g.source.clone(), target: self.target.clone(), matrix: self.matrix.mul(&g.matrix) }
    }

    pub fn is_linear(&self) -> bool {
        self.source.is_hom(&self.target, &self.matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algcore::algebra::{dual_numbers, field_algebra, path_algebra_a2};
    use crate::algcore::preproj::preprojective_algebra;
    use crate::exactlin::PrimeField;

    #[test]
    fn projectives_of_small_algebras() {
        let f = PrimeField::gf101();
        let k = Arc::new(field_algebra(&f));
        assert_eq!(projective_module(&k, 0).unwrap().dim(), 1);
        let pi = Arc::new(preprojective_algebra(2, &f).unwrap().algebra);
        let p1 = projective_module(&pi, 0).unwrap();
        assert_eq!(p1.dim(), 2);
        assert!(p1.check().is_empty());
        let total: usize = (0..2).map(|i| projective_module(&pi, i).unwrap().dim()).sum();
        assert_eq!(total, pi.dim());
        assert!(projective_module(&pi, 2).is_err());
    }

    #[test]
    fn endomorphisms_of_dual_numbers() {
        let f = PrimeField::gf101();
        let d = Arc::new(dual_numbers(&f));
        let r = AModule::regular(&d);
        assert_eq!(r.hom_basis(&r).unwrap().len(), 2);
        assert_eq!(r.hom_basis(&AModule::zero(&d)).unwrap().len(), 0);
    }

    #[test]
    fn random_modules_are_modules_and_covers_surject() {
        let f = PrimeField::gf101();
        let a = Arc::new(path_algebra_a2(&f));
        let mut rng = SplitMix64::new(3);
        for _ in 0..20 {
            let m = AModule::random(&a, &mut rng, 3);
            assert!(m.check().is_empty());
            let (p, pi) = m.projective_cover().unwrap();
            assert!(p.is_hom(&m, &pi));
            assert_eq!(pi.rank(), m.dim());
        }
    }
}
