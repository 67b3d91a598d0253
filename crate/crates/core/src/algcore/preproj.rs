use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::algebra::{PresentedAlgebra, Sparse};
use super::quiver::{double_quiver, Quiver};
use crate::error::{Error, Result};
use crate::exactlin::{EchelonBasis, Field};

/// A path in a quiver, arrows listed in traversal order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path { source: v, target: v, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Label in composition order: the path `a` then `b` reads `ba`.
    pub fn label(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            return format!("e{}", self.source + 1);
        }
        let mut s = String::new();
        for &a in self.arrows.iter().rev() {
            s.push_str(&q.arrows()[a].label);
        }
        s
    }
}

/// A homogeneous relation: a linear combination of paths of one length, all
/// with the same endpoints.
pub type Relation<E> = Vec<(E, Path)>;

/// A path algebra modulo a homogeneous ideal, with its chosen monomial basis.
#[derive(Debug, Clone)]
pub struct QuotientPathAlgebra<F: Field> {
    pub quiver: Quiver,
    pub algebra: PresentedAlgebra<F>,
    /// The path representing each basis element.
    pub paths: Vec<Path>,
}

impl<F: Field> QuotientPathAlgebra<F> {
    pub fn vertex_idempotent(&self, v: usize) -> usize {
        self.paths.iter().position(|p| p.is_empty() && p.source == v).expect("vertex idempotent")
    }

    /// Basis index of the length-one path along `arrow`, if it survives.
    pub fn arrow_element(&self, arrow: usize) -> Option<usize> {
        self.paths.iter().position(|p| p.arrows.as_slice() == [arrow])
    }
}

struct Degree<F: Field> {
    paths: Vec<Path>,
    index: BTreeMap<Vec<usize>, usize>,
    ideal: EchelonBasis<F>,
    /// Position in the global basis of each path that is not an ideal pivot.
    normal: Vec<Option<usize>>,
}

fn paths_of_length(q: &Quiver, prev: &[Path]) -> Vec<Path> {
    let mut out = Vec::new();
    for p in prev {
        for (ai, a) in q.arrows().iter().enumerate() {
            if a.source == p.target {
                let mut arrows = p.arrows.clone();
                arrows.push(ai);
                out.push(Path { source: p.source, target: a.target, arrows });
            }
        }
    }
    out
}

/// `kQ / I` for a homogeneous ideal `I` generated by `relations`, built by
/// saturating the ideal degree by degree until a degree vanishes.
///
/// Fails if no degree up to `max_len` vanishes (the quotient is then either
/// infinite-dimensional or larger than the caller allows).
pub fn quotient_path_algebra<F: Field>(
    field: &F,
    q: &Quiver,
    relations: &[Relation<F::Elem>],
    max_len: usize,
) -> Result<QuotientPathAlgebra<F>> {
    for r in relations {
        let Some((_, p0)) = r.first() else { continue };
        if r.iter().any(|(_, p)| p.len() != p0.len() || p.source != p0.source || p.target != p0.target) {
            return Err(Error::Invalid("relations must be homogeneous with fixed endpoints".into()));
        }
    }
    let mut degrees: Vec<Degree<F>> = Vec::new();
    let mut prev: Vec<Path> = (0..q.vertex_count()).map(Path::trivial).collect();
    let mut len = 0;
    loop {
        if len > max_len {
            return Err(Error::Unsupported(format!("quotient does not vanish by path length {max_len}")));
        }
        let paths = if len == 0 { prev.clone() } else { paths_of_length(q, &prev) };
        let index: BTreeMap<Vec<usize>, usize> = paths
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut key = p.arrows.clone();
                if key.is_empty() {
                    key.push(usize::MAX - p.source);
                }
                (key, i)
            })
            .collect();
        let mut ideal = EchelonBasis::new(field, paths.len());
        // Generators of I in this degree: u · r · w for relations r and
        // paths u, w of complementary lengths.
        for r in relations {
            let Some((_, p0)) = r.first() else { continue };
            let rl = p0.len();
            if rl > len {
                continue;
            }
            for before_len in 0..=(len - rl) {
                let after_len = len - rl - before_len;
                let of_len = |l: usize| if l < len { &degrees[l].paths } else { &paths };
                let (befores, afters) = (of_len(before_len), of_len(after_len));
                for b in befores.iter().filter(|b| b.target == p0.source) {
                    for a in afters.iter().filter(|a| a.source == p0.target) {
                        let mut v = vec![field.zero(); paths.len()];
                        for (c, p) in r {
                            let mut arrows = b.arrows.clone();
                            arrows.extend(&p.arrows);
                            arrows.extend(&a.arrows);
                            if arrows.is_empty() {
                                arrows.push(usize::MAX - b.source);
                            }
                            let k = index[&arrows];
                            v[k] = field.add(&v[k], c);
                        }
                        if ideal.is_full() {
                            break;
                        }
                        ideal.insert(v);
                    }
                }
            }
        }
        let survives = paths.len() > ideal.rank();
        degrees.push(Degree { paths: paths.clone(), index, ideal, normal: Vec::new() });
        if !survives {
            break;
        }
        prev = paths;
        len += 1;
    }
    // Global basis: non-pivot paths, degree by degree.
    let mut basis: Vec<Path> = Vec::new();
    for d in degrees.iter_mut() {
        d.normal = vec![None; d.paths.len()];
        for (i, p) in d.paths.iter().enumerate() {
            if !d.ideal.is_pivot(i) {
                d.normal[i] = Some(basis.len());
                basis.push(p.clone());
            }
        }
    }
    let dim = basis.len();
    let mut table: Vec<Sparse<F::Elem>> = Vec::with_capacity(dim * dim);
    for bi in &basis {
        for bj in &basis {
            // b_i b_j means: first b_j, then b_i.
            if bj.target != bi.source {
                table.push(Vec::new());
                continue;
            }
            let total = bi.len() + bj.len();
            if total >= degrees.len() {
                table.push(Vec::new());
                continue;
            }
            let mut arrows = bj.arrows.clone();
            arrows.extend(&bi.arrows);
            if arrows.is_empty() {
                arrows.push(usize::MAX - bj.source);
            }
            table.push(reduce_path(field, &degrees[total], &arrows));
        }
    }
    let labels: Vec<String> = basis.iter().map(|p| p.label(q)).collect();
    let idempotents: Vec<usize> =
        (0..q.vertex_count()).map(|v| basis.iter().position(|p| p.is_empty() && p.source == v).unwrap()).collect();
    let algebra = PresentedAlgebra::from_table(field, labels, table, idempotents)?;
    Ok(QuotientPathAlgebra { quiver: q.clone(), algebra, paths: basis })
}

fn reduce_path<F: Field>(field: &F, d: &Degree<F>, arrows: &[usize]) -> Sparse<F::Elem> {
    let k = d.index[arrows];
    let mut v = vec![field.zero(); d.paths.len()];
    v[k] = field.one();
    d.ideal.reduce(&mut v);
    let mut out = Vec::new();
    for (i, c) in v.into_iter().enumerate() {
        if !field.is_zero(&c) {
            out.push((d.normal[i].expect("remainder lies on normal paths"), c));
        }
    }
    out
}

/// The preprojective relations of `q`: for each vertex `v` the component
/// `e_v c e_v` of `c = Σ_a (a* a − a a*)`, where `a* a` is the path `a` then `a*`.
pub fn preprojective_relations<F: Field>(field: &F, q: &Quiver) -> Vec<Relation<F::Elem>> {
    let m = q.arrows().len();
    (0..q.vertex_count())
        .map(|v| {
            let mut r = Vec::new();
            for (i, a) in q.arrows().iter().enumerate() {
                let star = m + i;
                if a.source == v {
                    r.push((field.one(), Path { source: v, target: v, arrows: vec![i, star] }));
                }
                if a.target == v {
                    r.push((field.neg(&field.one()), Path { source: v, target: v, arrows: vec![star, i] }));
                }
            }
            r
        })
        .filter(|r: &Relation<F::Elem>| !r.is_empty())
        .collect()
}

/// The preprojective algebra of `q` (the starred arrows of the double quiver
/// follow the original ones).
pub fn preprojective_of_quiver<F: Field>(field: &F, q: &Quiver) -> Result<QuotientPathAlgebra<F>> {
    let d = double_quiver(q);
    let rels = preprojective_relations(field, q);
    quotient_path_algebra(field, &d, &rels, 2 * q.vertex_count() + 2)
}

/// The preprojective algebra of the linearly oriented quiver of type `A_n`.
///
/// In the double quiver arrow `i` (for `0 <= i < n-1`) is `a{i+1}: i -> i+1`
/// and arrow `n-1+i` is its reverse.
pub fn preprojective_algebra<F: Field>(n: usize, field: &F) -> Result<QuotientPathAlgebra<F>> {
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    preprojective_of_quiver(field, &Quiver::linear_a(n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algcore::algebra::algebra_check;
    use crate::exactlin::PrimeField;

    #[test]
    fn small_dimensions() {
        let f = PrimeField::gf101();
        let dims: Vec<usize> = (1..=5).map(|n| preprojective_algebra(n, &f).unwrap().algebra.dim()).collect();
        assert_eq!(dims, vec![1, 4, 10, 20, 35]);
    }

    #[test]
    fn a2_basis_and_relations() {
        let f = PrimeField::gf101();
        let p = preprojective_algebra(2, &f).unwrap();
        let a = &p.algebra;
        assert_eq!(a.labels(), &["e1", "e2", "a1", "a1*"]);
        let (x, y) = (p.arrow_element(0).unwrap(), p.arrow_element(1).unwrap());
        assert!(a.product(x, y).is_empty() && a.product(y, x).is_empty());
        assert!(algebra_check(a).is_empty());
    }

    #[test]
    fn constructor_outputs_are_algebras() {
        let f = PrimeField::gf101();
        for n in 1..=4 {
            assert!(algebra_check(&preprojective_algebra(n, &f).unwrap().algebra).is_empty());
        }
    }

    #[test]
    fn zero_rank_rejected() {
        assert!(preprojective_algebra(0, &PrimeField::gf101()).is_err());
    }
}
