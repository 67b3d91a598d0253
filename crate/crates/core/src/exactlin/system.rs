use alloc::vec;
use alloc::vec::Vec;

use super::field::Field;
use super::matrix::{EchelonBasis, Matrix};

/// One summand `c · L · X_b · R` of a matrix equation; `None` stands for an
/// identity factor.
pub struct Term<'a, F: Field> {
    pub coeff: F::Elem,
    pub left: Option<&'a Matrix<F>>,
    pub block: usize,
    pub right: Option<&'a Matrix<F>>,
}

impl<'a, F: Field> Term<'a, F> {
    pub fn new(coeff: F::Elem, left: Option<&'a Matrix<F>>, block: usize, right: Option<&'a Matrix<F>>) -> Self {
        Term { coeff, left, block, right }
    }
}

/// Homogeneous linear equations `Σ c · L · X_b · R = 0` in unknown matrices
/// `X_0, X_1, ...` of fixed shapes, solved by incremental elimination.
pub struct MatrixSystem<F: Field> {
    field: F,
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    eqs: EchelonBasis<F>,
}

impl<F: Field> MatrixSystem<F> {
    pub fn new(field: &F, shapes: Vec<(usize, usize)>) -> Self {
        let mut offsets = Vec::with_capacity(shapes.len());
        let mut w = 0;
        for &(r, c) in &shapes {
            offsets.push(w);
            w += r * c;
        }
        MatrixSystem { field: field.clone(), shapes, offsets, eqs: EchelonBasis::new(field, w) }
    }

    pub fn width(&self) -> usize {
        self.eqs.width()
    }

    /// Adds the entrywise equations of `Σ terms = 0`.
    pub fn add(&mut self, terms: &[Term<'_, F>]) {
        if terms.is_empty() || self.eqs.is_full() {
            return;
        }
        let f = &self.field;
        let shape = |t: &Term<'_, F>| {
            let (br, bc) = self.shapes[t.block];
            let p = t.left.map_or(br, |l| {
                assert_eq!(l.cols(), br, "left factor shape");
                l.rows()
            });
            let q = t.right.map_or(bc, |r| {
                assert_eq!(r.rows(), bc, "right factor shape");
                r.cols()
            });
            (p, q)
        };
        let (p, q) = shape(&terms[0]);
        for t in terms {
            assert_eq!(shape(t), (p, q), "equation terms disagree in shape");
        }
        // Nonzero pattern of each left row and right column, per term.
        let lnz: Vec<Vec<Vec<(usize, F::Elem)>>> = terms
            .iter()
            .map(|t| match t.left {
                None => (0..p).map(|r| vec![(r, f.one())]).collect(),
                Some(l) => (0..p)
                    .map(|r| l.row(r).iter().cloned().enumerate().filter(|(_, x)| !f.is_zero(x)).collect())
                    .collect(),
            })
            .collect();
        let rnz: Vec<Vec<Vec<(usize, F::Elem)>>> = terms
            .iter()
            .map(|t| match t.right {
                None => (0..q).map(|c| vec![(c, f.one())]).collect(),
                Some(rm) => (0..q)
                    .map(|c| (0..rm.rows()).filter(|&l| !f.is_zero(rm.get(l, c))).map(|l| (l, rm.get(l, c).clone())).collect())
                    .collect(),
            })
            .collect();
        let w = self.width();
        for r in 0..p {
            for c in 0..q {
                let mut row = vec![f.zero(); w];
                let mut any = false;
                for (ti, t) in terms.iter().enumerate() {
                    let off = self.offsets[t.block];
                    let bc = self.shapes[t.block].1;
                    for (k, lv) in &lnz[ti][r] {
                        let cl = f.mul(&t.coeff, lv);
                        for (l, rv) in &rnz[ti][c] {
                            let idx = off + k * bc + l;
                            row[idx] = f.mul_add(&row[idx], &cl, rv);
                            any = true;
                        }
                    }
                }
                if any && self.eqs.insert(row) && self.eqs.is_full() {
                    return;
                }
            }
        }
    }

    /// Forces every entry of `X_b` to vanish.
    pub fn kill_block(&mut self, b: usize) {
        let (r, c) = self.shapes[b];
        let off = self.offsets[b];
        for i in 0..r * c {
            let mut row = vec![self.field.zero(); self.width()];
            row[off + i] = self.field.one();
            self.eqs.insert(row);
        }
    }

    /// Basis of the solution space, each solution split into its blocks.
    pub fn solutions(&self) -> Vec<Vec<Matrix<F>>> {
        self.eqs.null_vectors().iter().map(|v| self.split(v)).collect()
    }

    pub fn solution_dim(&self) -> usize {
        self.width() - self.eqs.rank()
    }

    pub fn split(&self, v: &[F::Elem]) -> Vec<Matrix<F>> {
        self.shapes
            .iter()
            .zip(&self.offsets)
            .map(|(&(r, c), &off)| Matrix::from_data(&self.field, r, c, v[off..off + r * c].to_vec()).expect("block shape"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::PrimeField;

    #[test]
    fn commutant_of_a_jordan_block() {
        let f = PrimeField::gf101();
        let j = Matrix::from_i64(&f, 2, 2, &[0, 1, 0, 0]);
        let mut s = MatrixSystem::new(&f, vec![(2, 2)]);
        s.add(&[Term::new(f.one(), Some(&j), 0, None), Term::new(f.from_i64(-1), None, 0, Some(&j))]);
        let sols = s.solutions();
        assert_eq!(sols.len(), 2);
        for x in sols {
            assert_eq!(j.mul(&x[0]), x[0].mul(&j));
        }
    }
}
