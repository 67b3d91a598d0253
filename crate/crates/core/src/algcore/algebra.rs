use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exactlin::{EchelonBasis, Field, Matrix};

/// Sparse linear combination of basis elements, sorted by index.
pub type Sparse<E> = Vec<(usize, E)>;

/// A finite-dimensional algebra given by a basis, structure constants and a
/// complete set of orthogonal idempotents (each a basis element).
#[derive(Clone, Debug, PartialEq)]
pub struct PresentedAlgebra<F: Field> {
    field: F,
    labels: Vec<String>,
    table: Vec<Sparse<F::Elem>>,
    idempotents: Vec<usize>,
    radical: Option<Vec<usize>>,
    generators: Vec<usize>,
}

impl<F: Field> PresentedAlgebra<F> {
    /// Builds an algebra from sparse triples `(i, j, k, c)` meaning that
    /// `b_i b_j` has coefficient `c` on `b_k`. Repeated triples accumulate.
    pub fn new(
        field: &F,
        labels: Vec<String>,
        mult: &[(usize, usize, usize, F::Elem)],
        idempotents: Vec<usize>,
    ) -> Result<Self> {
        let d = labels.len();
        let mut dense: Vec<Vec<F::Elem>> = Vec::new();
        let mut touched = vec![false; d * d];
        dense.resize_with(d * d, Vec::new);
        for (i, j, k, c) in mult {
            if *i >= d || *j >= d || *k >= d {
                return Err(Error::BadIndex(format!("structure constant ({i},{j},{k}) outside basis of size {d}")));
            }
            let cell = &mut dense[i * d + j];
            if !touched[i * d + j] {
                *cell = vec![field.zero(); d];
                touched[i * d + j] = true;
            }
            cell[*k] = field.add(&cell[*k], c);
        }
        let table = dense
            .into_iter()
            .map(|row| row.into_iter().enumerate().filter(|(_, c)| !field.is_zero(c)).collect())
            .collect();
        Self::from_table(field, labels, table, idempotents)
    }

    pub(crate) fn from_table(
        field: &F,
        labels: Vec<String>,
        table: Vec<Sparse<F::Elem>>,
        idempotents: Vec<usize>,
    ) -> Result<Self> {
        let d = labels.len();
        if d == 0 {
            return Err(Error::Invalid("an algebra needs a nonempty basis".into()));
        }
        if table.len() != d * d {
            return Err(Error::DimensionMismatch(format!("table has {} cells for dimension {d}", table.len())));
        }
        if idempotents.is_empty() {
            return Err(Error::Invalid("at least one idempotent is required".into()));
        }
        if let Some(&bad) = idempotents.iter().find(|&&e| e >= d) {
            return Err(Error::BadIndex(format!("idempotent index {bad} outside basis")));
        }
        let mut a = PresentedAlgebra {
            field: field.clone(),
            labels,
            table,
            idempotents,
            radical: None,
            generators: Vec::new(),
        };
        a.radical = a.find_radical();
        a.generators = a.find_generators();
        Ok(a)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }
    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `b_i b_j` as a sparse combination.
    #[inline]
    pub fn product(&self, i: usize, j: usize) -> &[(usize, F::Elem)] {
        &self.table[i * self.dim() + j]
    }

    /// All nonzero structure constants as `(i, j, k, c)`, in index order.
    pub fn mult_triples(&self) -> Vec<(usize, usize, usize, F::Elem)> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for (k, c) in self.product(i, j) {
                    out.push((i, j, *k, c.clone()));
                }
            }
        }
        out
    }

    pub fn basis_vec(&self, i: usize) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i] = self.field.one();
        v
    }

    pub fn unit(&self) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); self.dim()];
        for &e in &self.idempotents {
            v[e] = self.field.add(&v[e], &self.field.one());
        }
        v
    }

    pub fn mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim()];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if f.is_zero(y) {
                    continue;
                }
                let xy = f.mul(x, y);
                for (k, c) in self.product(i, j) {
                    out[*k] = f.mul_add(&out[*k], &xy, c);
                }
            }
        }
        out
    }

    /// `a b_j` for a basis element `b_j`.
    pub fn mul_basis_right(&self, a: &[F::Elem], j: usize) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim()];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (k, c) in self.product(i, j) {
                out[*k] = f.mul_add(&out[*k], x, c);
            }
        }
        out
    }

    /// Matrix of `x ↦ b_i x` in the basis.
    pub fn left_mult_matrix(&self, i: usize) -> Matrix<F> {
        let d = self.dim();
        let mut m = Matrix::zeros(&self.field, d, d);
        for j in 0..d {
            for (k, c) in self.product(i, j) {
                m.set(*k, j, c.clone());
            }
        }
        m
    }

    /// Matrix of `x ↦ x b_i` in the basis.
    pub fn right_mult_matrix(&self, i: usize) -> Matrix<F> {
        let d = self.dim();
        let mut m = Matrix::zeros(&self.field, d, d);
        for j in 0..d {
            for (k, c) in self.product(j, i) {
                m.set(*k, j, c.clone());
            }
        }
        m
    }

    /// Basis indices spanning the Jacobson radical, when the algebra is
    /// basic with every non-idempotent basis element homogeneous for the
    /// idempotent decomposition and spanning a nilpotent ideal.
    pub fn radical(&self) -> Option<&[usize]> {
        self.radical.as_deref()
    }

    pub fn is_basic_presented(&self) -> bool {
        self.radical.is_some()
    }

    /// Basis elements generating the algebra: the idempotents together with
    /// a complement of `rad²` in `rad` (all basis elements when no radical
    /// description is available).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Generators lying in the radical.
    pub fn radical_generators(&self) -> Vec<usize> {
        self.generators.iter().copied().filter(|g| !self.idempotents.contains(g)).collect()
    }

    /// The pair `(i, j)` of idempotent positions with `e_i b e_j = b`.
    pub fn homogeneous_type(&self, b: usize) -> Option<(usize, usize)> {
        let f = &self.field;
        for (ii, &ei) in self.idempotents.iter().enumerate() {
            let left = self.product(ei, b);
            if !(left.len() == 1 && left[0].0 == b && f.is_one(&left[0].1)) {
                continue;
            }
            for (jj, &ej) in self.idempotents.iter().enumerate() {
                let right = self.product(b, ej);
                if right.len() == 1 && right[0].0 == b && f.is_one(&right[0].1) {
                    return Some((ii, jj));
                }
            }
        }
        None
    }

    fn find_radical(&self) -> Option<Vec<usize>> {
        if !check_idempotents(self).is_empty() {
            return None;
        }
        let rad: Vec<usize> = (0..self.dim()).filter(|i| !self.idempotents.contains(i)).collect();
        for &b in &rad {
            self.homogeneous_type(b)?;
        }
        let is_idem = |k: usize| self.idempotents.contains(&k);
        for &x in &rad {
            for &y in &rad {
                if self.product(x, y).iter().any(|(k, _)| is_idem(*k)) {
                    return None;
                }
            }
        }
        // Nilpotency: successive powers of the radical must reach zero.
        let mut power: Vec<Vec<F::Elem>> = rad.iter().map(|&b| self.basis_vec(b)).collect();
        for _ in 0..=self.dim() {
            if power.is_empty() {
                return Some(rad);
            }
            let mut next = EchelonBasis::new(&self.field, self.dim());
            for p in &power {
                for &b in &rad {
                    next.insert(self.mul_basis_right(p, b));
                }
            }
            power = next.basis_rows().to_vec();
        }
        None
    }

    fn find_generators(&self) -> Vec<usize> {
        let Some(rad) = &self.radical else {
            return (0..self.dim()).collect();
        };
        let mut sq = EchelonBasis::new(&self.field, self.dim());
        for &x in rad {
            for &y in rad {
                let p = self.product(x, y);
                if p.is_empty() {
                    continue;
                }
                let mut v = vec![self.field.zero(); self.dim()];
                for (k, c) in p {
                    v[*k] = c.clone();
                }
                sq.insert(v);
            }
        }
        let mut gens = self.idempotents.clone();
        for &b in rad {
            if sq.insert(self.basis_vec(b)) {
                gens.push(b);
            }
        }
        gens
    }

    /// A copy with one structure constant replaced (used to build
    /// deliberately broken tables).
    pub fn with_constant(&self, i: usize, j: usize, k: usize, c: F::Elem) -> Self {
        let mut out = self.clone();
        let cell = &mut out.table[i * self.dim() + j];
        cell.retain(|(kk, _)| *kk != k);
        if !self.field.is_zero(&c) {
            cell.push((k, c));
            cell.sort_by_key(|(kk, _)| *kk);
        }
        out
    }
}

fn check_idempotents<F: Field>(a: &PresentedAlgebra<F>) -> Vec<String> {
    let f = &a.field;
    let mut out = Vec::new();
    for (x, &ei) in a.idempotents.iter().enumerate() {
        for (y, &ej) in a.idempotents.iter().enumerate() {
            let p = a.product(ei, ej);
            let ok = if x == y {
                p.len() == 1 && p[0].0 == ei && f.is_one(&p[0].1)
            } else {
                p.is_empty()
            };
            if !ok {
                out.push(format!(
                    "idempotents {} and {} are not orthogonal idempotents",
                    a.labels[ei], a.labels[ej]
                ));
            }
        }
    }
    out
}

/// Verifies associativity on all basis triples, that the idempotent sum is a
/// two-sided unit, and idempotent orthogonality. Returns the violations.
pub fn algebra_check<F: Field>(a: &PresentedAlgebra<F>) -> Vec<String> {
    let f = a.field();
    let d = a.dim();
    let mut out = check_idempotents(a);
    let unit = a.unit();
    for i in 0..d {
        let bi = a.basis_vec(i);
        if a.mul(&unit, &bi) != bi || a.mul(&bi, &unit) != bi {
            out.push(format!("unit law fails on {}", a.label(i)));
        }
    }
    let lefts: Vec<Matrix<F>> = (0..d).map(|i| a.left_mult_matrix(i)).collect();
    for i in 0..d {
        for j in 0..d {
            // (b_i b_j) b_k = b_i (b_j b_k) for all k, i.e. L_{b_i b_j} = L_i L_j.
            let mut lij = Matrix::zeros(f, d, d);
            for (k, c) in a.product(i, j) {
                lij = lij.add_scaled(c, &lefts[*k]);
            }
            if lij != lefts[i].mul(&lefts[j]) {
                out.push(format!("associativity fails for ({}, {}, -)", a.label(i), a.label(j)));
            }
        }
    }
    out
}

/// Tensor product `lam ⊗ pi`: basis pairs in lexicographic order (index
/// `a * dim(pi) + b`), componentwise multiplication, and idempotents the
/// pairs of idempotents ordered by the `pi` idempotent first.
pub fn tensor_algebra<F: Field>(lam: &PresentedAlgebra<F>, pi: &PresentedAlgebra<F>) -> Result<PresentedAlgebra<F>> {
    if lam.field != pi.field {
        return Err(Error::FieldMismatch);
    }
    let f = &lam.field;
    let (dl, dp) = (lam.dim(), pi.dim());
    let d = dl * dp;
    let mut labels = Vec::with_capacity(d);
    for a in 0..dl {
        for b in 0..dp {
            labels.push(format!("{}⊗{}", lam.labels[a], pi.labels[b]));
        }
    }
    let mut table: Vec<Sparse<F::Elem>> = Vec::with_capacity(d * d);
    for i in 0..d {
        let (a, b) = (i / dp, i % dp);
        for j in 0..d {
            let (a2, b2) = (j / dp, j % dp);
            let mut cell = Vec::new();
            for (k, c) in lam.product(a, a2) {
                for (l, c2) in pi.product(b, b2) {
                    cell.push((k * dp + l, f.mul(c, c2)));
                }
            }
            cell.sort_by_key(|(k, _)| *k);
            table.push(cell);
        }
    }
    let mut idempotents = Vec::new();
    for &pe in &pi.idempotents {
        for &le in &lam.idempotents {
            idempotents.push(le * dp + pe);
        }
    }
    let mut out = PresentedAlgebra::from_table(f, labels, table, idempotents)?;
    // Products of generators on each side generate the tensor product.
    if lam.radical.is_some() && pi.radical.is_some() {
        let mut gens = out.idempotents.clone();
        for &g in lam.generators() {
            if lam.idempotents.contains(&g) {
                continue;
            }
            for &pe in &pi.idempotents {
                gens.push(g * dp + pe);
            }
        }
        for &g in pi.generators() {
            if pi.idempotents.contains(&g) {
                continue;
            }
            for &le in &lam.idempotents {
                gens.push(le * dp + g);
            }
        }
        out.generators = gens;
    }
    Ok(out)
}

/// The element `Σ_i λ_i ⊗ x` for a basis element `x` of the right factor.
pub fn tensor_one_left<F: Field>(lam: &PresentedAlgebra<F>, pi: &PresentedAlgebra<F>, x: usize) -> Vec<F::Elem> {
    let dp = pi.dim();
    let mut v = vec![lam.field.zero(); lam.dim() * dp];
    for &le in &lam.idempotents {
        v[le * dp + x] = lam.field.one();
    }
    v
}

/// The element `λ ⊗ Σ_j π_j` for a basis element `λ` of the left factor.
pub fn tensor_one_right<F: Field>(lam: &PresentedAlgebra<F>, pi: &PresentedAlgebra<F>, l: usize) -> Vec<F::Elem> {
    let dp = pi.dim();
    let mut v = vec![lam.field.zero(); lam.dim() * dp];
    for &pe in &pi.idempotents {
        v[l * dp + pe] = lam.field.one();
    }
    v
}

/// The Morita context ring with `A = B = M = N = k` and both bimodule
/// pairings zero: basis `E11, E12, E21, E22` for the slots `(a, n, m, b)`,
/// multiplication `(a,n,m,b)(a',n',m',b') = (aa', an'+nb', ma'+bm', bb')`.
pub fn morita_ring<F: Field>(field: &F) -> PresentedAlgebra<F> {
    let one = field.one();
    let labels = ["E11", "E12", "E21", "E22"].iter().map(|s| String::from(*s)).collect();
    let (a, n, m, b) = (0, 1, 2, 3);
    let mult = [
        (a, a, a, one.clone()),
        (a, n, n, one.clone()),
        (n, b, n, one.clone()),
        (m, a, m, one.clone()),
        (b, m, m, one.clone()),
        (b, b, b, one),
    ];
    PresentedAlgebra::new(field, labels, &mult, vec![a, b]).expect("static table")
}

/// Whether `phi` (a basis-index bijection) carries the structure constants
/// of `a` onto those of `b` exactly.
pub fn same_structure_under<F: Field>(a: &PresentedAlgebra<F>, b: &PresentedAlgebra<F>, phi: &[usize]) -> bool {
    let d = a.dim();
    if b.dim() != d || phi.len() != d {
        return false;
    }
    let mut seen = vec![false; d];
    for &p in phi {
        if p >= d || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    for i in 0..d {
        for j in 0..d {
            let mut mapped: Vec<(usize, F::Elem)> = a.product(i, j).iter().map(|(k, c)| (phi[*k], c.clone())).collect();
            mapped.sort_by_key(|(k, _)| *k);
            if mapped.as_slice() != b.product(phi[i], phi[j]) {
                return false;
            }
        }
    }
    true
}

/// The ground field as a one-dimensional algebra.
pub fn field_algebra<F: Field>(field: &F) -> PresentedAlgebra<F> {
    PresentedAlgebra::new(field, vec![String::from("1")], &[(0, 0, 0, field.one())], vec![0]).expect("static table")
}

/// The dual numbers `k[x]/(x²)`.
pub fn dual_numbers<F: Field>(field: &F) -> PresentedAlgebra<F> {
    let one = field.one();
    let mult = [(0, 0, 0, one.clone()), (0, 1, 1, one.clone()), (1, 0, 1, one)];
    PresentedAlgebra::new(field, vec![String::from("1"), String::from("x")], &mult, vec![0]).expect("static table")
}

/// The path algebra of `1 -a-> 2`, basis `e1, e2, a`.
pub fn path_algebra_a2<F: Field>(field: &F) -> PresentedAlgebra<F> {
    let one = field.one();
    let mult = [(0, 0, 0, one.clone()), (1, 1, 1, one.clone()), (1, 2, 2, one.clone()), (2, 0, 2, one)];
    let labels = ["e1", "e2", "a"].iter().map(|s| String::from(*s)).collect();
    PresentedAlgebra::new(field, labels, &mult, vec![0, 1]).expect("static table")
}

/// Names accepted by [`catalog`].
pub const CATALOG: [&str; 4] = ["k", "dual", "pathA2", "morita"];

/// Built-in base algebras by name.
pub fn catalog<F: Field>(name: &str, field: &F) -> Result<PresentedAlgebra<F>> {
    match name {
        "k" => Ok(field_algebra(field)),
        "dual" => Ok(dual_numbers(field)),
        "pathA2" => Ok(path_algebra_a2(field)),
        "morita" => Ok(morita_ring(field)),
        other => Err(Error::Invalid(format!("unknown builtin algebra {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::PrimeField;

    #[test]
    fn catalog_algebras_pass_checks() {
        let f = PrimeField::gf101();
        for name in CATALOG {
            let a = catalog(name, &f).unwrap();
            assert!(algebra_check(&a).is_empty(), "{name}");
            assert!(a.is_basic_presented(), "{name}");
        }
    }

    #[test]
    fn corrupted_constant_is_reported() {
        let f = PrimeField::gf101();
        let a = path_algebra_a2(&f).with_constant(1, 2, 2, 5);
        assert!(!algebra_check(&a).is_empty());
    }

    #[test]
    fn generators_of_path_algebra() {
        let f = PrimeField::gf101();
        assert_eq!(path_algebra_a2(&f).generators(), &[0, 1, 2]);
        assert_eq!(dual_numbers(&f).generators(), &[0, 1]);
    }

    #[test]
    fn tensor_with_field_has_same_table() {
        let f = PrimeField::gf101();
        let p = path_algebra_a2(&f);
        let t = tensor_algebra(&field_algebra(&f), &p).unwrap();
        assert_eq!(t.dim(), 3);
        assert!(same_structure_under(&p, &t, &[0, 1, 2]));
        assert!(algebra_check(&tensor_algebra(&dual_numbers(&f), &p).unwrap()).is_empty());
    }

    #[test]
    fn tensor_field_mismatch() {
        let a = field_algebra(&PrimeField::gf101());
        let b = field_algebra(&PrimeField::gf32003());
        assert_eq!(tensor_algebra(&a, &b), Err(Error::FieldMismatch));
    }
}
