//! Independent oracles shared by the oracle tests and the acceptance run.
#![allow(dead_code)]

use std::sync::Arc;

use pladder_core::algcore::{
    field_algebra, morita_ring, preprojective_algebra, same_structure_under, tensor_algebra, AModule, PresentedAlgebra,
};
use pladder_core::exactlin::{Matrix, PrimeField};
use pladder_core::pimod::{pi_hom, PiModule};

// ---------------------------------------------------------------------------
// Small dense matrices over GF(2), stored row-major as 0/1 bytes.

#[derive(Clone, Debug)]
pub struct M2 {
    pub r: usize,
    pub c: usize,
    pub d: Vec<u8>,
}

impl M2 {
    pub fn from_bits(r: usize, c: usize, bits: u64) -> Self {
        M2 { r, c, d: (0..r * c).map(|k| ((bits >> k) & 1) as u8).collect() }
    }
    pub fn mul(&self, o: &M2) -> M2 {
        assert_eq!(self.c, o.r);
        let mut d = vec![0u8; self.r * o.c];
        for i in 0..self.r {
            for k in 0..self.c {
                if self.d[i * self.c + k] == 1 {
                    for j in 0..o.c {
                        d[i * o.c + j] ^= o.d[k * o.c + j];
                    }
                }
            }
        }
        M2 { r: self.r, c: o.c, d }
    }
    pub fn add(&self, o: &M2) -> M2 {
        M2 { r: self.r, c: self.c, d: self.d.iter().zip(&o.d).map(|(a, b)| a ^ b).collect() }
    }
    pub fn is_zero(&self) -> bool {
        self.d.iter().all(|&x| x == 0)
    }
}

/// A representation of the double quiver of `A_n` over GF(2):
/// `f[i]: X_i -> X_{i+1}`, `g[i]: X_{i+1} -> X_i`.
#[derive(Clone, Debug)]
pub struct Rep {
    pub dims: Vec<usize>,
    pub f: Vec<M2>,
    pub g: Vec<M2>,
}

pub fn zero_m(r: usize, c: usize) -> M2 {
    M2 { r, c, d: vec![0; r * c] }
}

/// Over GF(2) the preprojective relation at each vertex is the sum of the
/// two 2-cycles through it, whatever the sign convention.
pub fn satisfies_relations(x: &Rep) -> bool {
    let n = x.dims.len();
    (0..n).all(|v| {
        let mut rel = zero_m(x.dims[v], x.dims[v]);
        if v + 1 < n {
            rel = rel.add(&x.g[v].mul(&x.f[v]));
        }
        if v > 0 {
            rel = rel.add(&x.f[v - 1].mul(&x.g[v - 1]));
        }
        rel.is_zero()
    })
}

pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every representation of the given dimension vector satisfying the
/// relations.
pub fn all_reps(dims: &[usize]) -> Vec<Rep> {
    let n = dims.len();
    let shapes: Vec<(usize, usize)> = (0..n - 1)
        .flat_map(|i| [(dims[i + 1], dims[i]), (dims[i], dims[i + 1])])
        .collect();
    let bits: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let mut out = Vec::new();
    for word in 0u64..(1u64 << bits) {
        let mut off = 0;
        let mut mats = Vec::new();
        for &(r, c) in &shapes {
            mats.push(M2::from_bits(r, c, word >> off));
            off += r * c;
        }
        let f = mats.iter().step_by(2).cloned().collect();
        let g = mats.iter().skip(1).step_by(2).cloned().collect();
        let x = Rep { dims: dims.to_vec(), f, g };
        if satisfies_relations(&x) {
            out.push(x);
        }
    }
    out
}

/// Number of tuples `(φ_i)` commuting with all arrows, by enumeration.
pub fn brute_hom_count(x: &Rep, y: &Rep) -> u64 {
    let n = x.dims.len();
    let shapes: Vec<(usize, usize)> = (0..n).map(|i| (y.dims[i], x.dims[i])).collect();
    let bits: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let mut count = 0;
    for word in 0u64..(1u64 << bits) {
        let mut off = 0;
        let mut phi = Vec::new();
        for &(r, c) in &shapes {
            phi.push(M2::from_bits(r, c, word >> off));
            off += r * c;
        }
        let ok = (0..n - 1).all(|i| {
            phi[i + 1].mul(&x.f[i]).add(&y.f[i].mul(&phi[i])).is_zero()
                && phi[i].mul(&x.g[i]).add(&y.g[i].mul(&phi[i + 1])).is_zero()
        });
        if ok {
            count += 1;
        }
    }
    count
}

pub fn to_matrix(fld: &PrimeField, m: &M2) -> Matrix<PrimeField> {
    Matrix::from_data(fld, m.r, m.c, m.d.iter().map(|&b| b as u64).collect()).unwrap()
}

pub fn to_pi(fld: &PrimeField, lam: &Arc<PresentedAlgebra<PrimeField>>, x: &Rep) -> PiModule<PrimeField> {
    let parts = x
        .dims
        .iter()
        .map(|&d| AModule::new(lam, d, vec![Matrix::identity(fld, d)]).unwrap())
        .collect();
    let f = x.f.iter().map(|m| to_matrix(fld, m)).collect();
    let g = x.g.iter().map(|m| to_matrix(fld, m)).collect();
    PiModule::new(lam, parts, f, g).expect("relations hold over GF(2)")
}

pub fn all_modules_up_to(n: usize, max_total: usize) -> Vec<Rep> {
    (0..=max_total).flat_map(|t| compositions(t, n)).flat_map(|d| all_reps(&d)).collect()
}

// ---------------------------------------------------------------------------
// Graded dimension of Π(A_n) by enumerating paths of the double quiver and
// computing the degree-d part of the ideal generated by the mesh relations.

/// Arrow `2i` is `i -> i+1`, arrow `2i+1` is `i+1 -> i`.
pub fn arrow_ends(a: usize) -> (usize, usize) {
    let i = a / 2;
    if a % 2 == 0 {
        (i, i + 1)
    } else {
        (i + 1, i)
    }
}

pub fn paths_of_length(n: usize, len: usize) -> Vec<(usize, Vec<usize>)> {
    let mut cur: Vec<(usize, Vec<usize>)> = (0..n).map(|v| (v, vec![])).collect();
    for _ in 0..len {
        let mut next = Vec::new();
        for (start, p) in &cur {
            let end = p.last().map(|&a| arrow_ends(a).1).unwrap_or(*start);
            for a in 0..2 * (n - 1) {
                if arrow_ends(a).0 == end {
                    let mut q = p.clone();
                    q.push(a);
                    next.push((*start, q));
                }
            }
        }
        cur = next;
    }
    cur
}

pub fn rank_mod(p: u64, mut rows: Vec<Vec<u64>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][c], p - 2, p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let k = rows[r][c];
                for j in 0..cols {
                    rows[r][j] = (rows[r][j] + p * p - k * rows[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn preprojective_dim_by_paths(n: usize, p: u64) -> usize {
    if n == 1 {
        return 1;
    }
    let mut total = n;
    for d in 1.. {
        let paths = paths_of_length(n, d);
        let index: std::collections::HashMap<(usize, Vec<usize>), usize> =
            paths.iter().cloned().enumerate().map(|(k, x)| (x, k)).collect();
        let mut rows = Vec::new();
        if d >= 2 {
            for l in 0..=d - 2 {
                for (start, pre) in paths_of_length(n, l) {
                    let v = pre.last().map(|&a| arrow_ends(a).1).unwrap_or(start);
                    for (_, post) in paths_of_length(n, d - 2 - l).into_iter().filter(|(s, _)| *s == v) {
                        let mut row = vec![0u64; paths.len()];
                        for a in 0..2 * (n - 1) {
                            if arrow_ends(a).0 != v {
                                continue;
                            }
                            let back = a ^ 1;
                            let mut w = pre.clone();
                            w.extend([a, back]);
                            w.extend(post.iter().copied());
                            let sign = if a % 2 == 0 { 1 } else { p - 1 };
                            let k = index[&(start, w)];
                            row[k] = (row[k] + sign) % p;
                        }
                        rows.push(row);
                    }
                }
            }
        }
        let dim_d = paths.len() - rank_mod(p, rows);
        if dim_d == 0 {
            break;
        }
        total += dim_d;
    }
    total
}

// ---------------------------------------------------------------------------
// The Morita context ring with zero pairings, from its multiplication rule.

pub fn delta00_from_rule(fld: &PrimeField) -> PresentedAlgebra<PrimeField> {
    // Slots (a, n, m, b); (a,n,m,b)(a',n',m',b') = (aa', an'+nb', ma'+bm', bb').
    let mul = |x: [u64; 4], y: [u64; 4]| -> [u64; 4] {
        [x[0] * y[0], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[3] * y[3]]
    };
    let unit = |i: usize| {
        let mut v = [0u64; 4];
        v[i] = 1;
        v
    };
    let mut table = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            let z = mul(unit(i), unit(j));
            for (k, &c) in z.iter().enumerate() {
                if c != 0 {
                    table.push((i, j, k, c));
                }
            }
        }
    }
    let labels = ["E11", "E12", "E21", "E22"].iter().map(|s| s.to_string()).collect();
    PresentedAlgebra::new(fld, labels, &table, vec![0, 3]).unwrap()
}

/// Compares `pi_hom` with enumeration on all pairs of total dimension at
/// most `max_total`. Returns the number of instances and any mismatches.
pub fn gf2_hom_agreement(n: usize, max_total: usize) -> (usize, Vec<String>) {
    let fld = PrimeField::new(2).unwrap();
    let lam = Arc::new(field_algebra(&fld));
    let reps = all_modules_up_to(n, max_total);
    let mut instances = 0;
    let mut bad = Vec::new();
    for x in &reps {
        for y in &reps {
            let total: usize = x.dims.iter().chain(&y.dims).sum();
            if total > max_total {
                continue;
            }
            let expected = brute_hom_count(x, y);
            let d = pi_hom(&to_pi(&fld, &lam, x), &to_pi(&fld, &lam, y)).unwrap().len();
            if 1u64 << d != expected {
                bad.push(format!("n = {n}, {x:?} -> {y:?}: 2^{d} vs {expected}"));
            }
            instances += 1;
        }
    }
    (instances, bad)
}

/// Dimensions of Π(A_n), n = 1..=5, from the library over both primes and
/// from path enumeration. Returns mismatches against `1, 4, 10, 20, 35`.
pub fn preprojective_dimension_mismatches() -> Vec<String> {
    let expected = [1usize, 4, 10, 20, 35];
    let mut bad = Vec::new();
    for (k, &want) in expected.iter().enumerate() {
        let n = k + 1;
        for fld in [PrimeField::gf101(), PrimeField::gf32003()] {
            let lib = preprojective_algebra(n, &fld).unwrap().algebra.dim();
            let oracle = preprojective_dim_by_paths(n, fld.modulus());
            if lib != want || oracle != want {
                bad.push(format!("n = {n}, p = {}: library {lib}, paths {oracle}, expected {want}", fld.modulus()));
            }
        }
    }
    bad
}

/// The basis bijection `E11, E12, E21, E22 -> 1⊗e1, 1⊗a1*, 1⊗a1, 1⊗e2`.
pub const MORITA_PHI: [usize; 4] = [0, 3, 2, 1];

/// Whether the rule-built table equals the library ring and, under
/// [`MORITA_PHI`], the tensor product with Π(A_2).
pub fn morita_matches(fld: &PrimeField) -> bool {
    let rule = delta00_from_rule(fld);
    let pi = preprojective_algebra(2, fld).unwrap().algebra;
    let tensor = tensor_algebra(&field_algebra(fld), &pi).unwrap();
    same_structure_under(&rule, &morita_ring(fld), &[0, 1, 2, 3]) && same_structure_under(&rule, &tensor, &MORITA_PHI)
}
