//! Structure constants of a finite-dimensional algebra in a fixed basis.
//!
//! Products of basis pairs are stored in CSR form: `product(i, j)` is the
//! sparse coordinate vector of `e_i * e_j`. The table is built once and is
//! read-only afterwards, so sweeps share it freely across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::field::{Fq, GaloisField};
use crate::linalg::{Matrix, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraKind {
    DividedPower,
    Witt,
    Melikyan,
}

#[derive(Clone)]
pub struct StructureTable {
    kind: AlgebraKind,
    field: GaloisField,
    dim: usize,
    offsets: Vec<usize>,
    entries: Vec<(u32, Fq)>,
}

impl std::fmt::Debug for StructureTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "StructureTable({:?}, dim={}, nnz={})", self.kind, self.dim, self.entries.len())
    }
}

/// Dense scratch accumulator for sparse linear combinations.
struct Accumulator<'a> {
    field: &'a GaloisField,
    values: Vec<Fq>,
    touched: Vec<usize>,
}

impl<'a> Accumulator<'a> {
    fn new(field: &'a GaloisField, dim: usize) -> Self {
        Accumulator { field, values: vec![Fq::ZERO; dim], touched: Vec::new() }
    }

    fn add(&mut self, i: usize, c: Fq) {
        let v = &mut self.values[i];
        if v.is_zero() {
            self.touched.push(i);
        }
        *v = self.field.add(*v, c);
    }

    fn drain(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        self.touched.dedup();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            let v = std::mem::replace(&mut self.values[i], Fq::ZERO);
            if !v.is_zero() {
                out.push((i, v));
            }
        }
        self.touched.clear();
        out
    }
}

impl StructureTable {
    /// Builds the table from a product rule on basis indices.
    pub fn build<F>(kind: AlgebraKind, field: &GaloisField, dim: usize, rule: F) -> Self
    where
        F: Fn(usize, usize) -> SparseVec + Sync,
    {
        let rows: Vec<Vec<(u32, Fq)>> = (0..dim * dim)
            .into_par_iter()
            .map(|ij| {
                let mut v = rule(ij / dim, ij % dim);
                v.retain(|&(_, c)| !c.is_zero());
                v.sort_unstable_by_key(|&(k, _)| k);
                v.into_iter().map(|(k, c)| (k as u32, c)).collect()
            })
            .collect();
        let mut offsets = Vec::with_capacity(dim * dim + 1);
        let mut entries = Vec::with_capacity(rows.iter().map(Vec::len).sum());
        offsets.push(0);
        for r in rows {
            entries.extend(r);
            offsets.push(entries.len());
        }
        StructureTable { kind, field: field.clone(), dim, offsets, entries }
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn product(&self, i: usize, j: usize) -> &[(u32, Fq)] {
        let ij = i * self.dim + j;
        &self.entries[self.offsets[ij]..self.offsets[ij + 1]]
    }

    pub fn product_sparse(&self, i: usize, j: usize) -> SparseVec {
        self.product(i, j).iter().map(|&(k, c)| (k as usize, c)).collect()
    }

    fn combine(&self, acc: &mut Accumulator<'_>, x: &[(usize, Fq)], y: &[(usize, Fq)]) {
        let f = &self.field;
        for &(i, a) in x {
            for &(j, b) in y {
                let ab = f.mul(a, b);
                for &(k, c) in self.product(i, j) {
                    acc.add(k as usize, f.mul(ab, c));
                }
            }
        }
    }

    /// Bilinear product of two sparse vectors.
    pub fn multiply_sparse(&self, x: &[(usize, Fq)], y: &[(usize, Fq)]) -> SparseVec {
        let mut acc = Accumulator::new(&self.field, self.dim);
        self.combine(&mut acc, x, y);
        acc.drain()
    }

    pub fn multiply_dense(&self, x: &[(usize, Fq)], y: &[(usize, Fq)]) -> Vec<Fq> {
        crate::linalg::to_dense(&self.multiply_sparse(x, y), self.dim)
    }

    /// Bilinear product of two dense coordinate vectors.
    pub fn multiply(&self, x: &[Fq], y: &[Fq]) -> Vec<Fq> {
        let xs = crate::linalg::to_sparse(x);
        let ys = crate::linalg::to_sparse(y);
        self.multiply_dense(&xs, &ys)
    }

    /// Matrix of left multiplication by `x`.
    pub fn left_multiplication(&self, x: &[(usize, Fq)]) -> Matrix {
        let columns: Vec<Vec<Fq>> = (0..self.dim).map(|j| self.multiply_dense(x, &[(j, Fq::ONE)])).collect();
        Matrix::from_columns(&self.field, self.dim, &columns)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (i..self.dim).all(|j| self.product(i, j) == self.product(j, i)))
    }

    /// First basis pair with `e_i e_j != -e_j e_i` or `e_i e_i != 0`.
    pub fn anticommutativity_failure(&self) -> Option<(usize, usize)> {
        let f = &self.field;
        (0..self.dim).into_par_iter().find_map_first(|i| {
            if !self.product(i, i).is_empty() {
                return Some((i, i));
            }
            (i + 1..self.dim).find(|&j| {
                let a = self.product(i, j);
                let b = self.product(j, i);
                a.len() != b.len() || a.iter().zip(b).any(|(&(k, c), &(l, d))| k != l || f.add(c, d) != Fq::ZERO)
            })
            .map(|j| (i, j))
        })
    }

    /// `[a,[b,c]] + [b,[c,a]] + [c,[a,b]]` for basis indices.
    fn jacobi_sum(&self, acc: &mut Accumulator<'_>, a: usize, b: usize, c: usize) -> SparseVec {
        let f = &self.field;
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            for &(l, s) in self.product(y, z) {
                for &(k, t) in self.product(x, l as usize) {
                    acc.add(k as usize, f.mul(s, t));
                }
            }
        }
        acc.drain()
    }

    pub fn jacobiator(&self, a: usize, b: usize, c: usize) -> SparseVec {
        let mut acc = Accumulator::new(&self.field, self.dim);
        self.jacobi_sum(&mut acc, a, b, c)
    }

    /// Exhaustive Jacobi sweep over every ordered basis triple.
    pub fn jacobi_failure(&self) -> Option<(usize, usize, usize)> {
        let d = self.dim;
        (0..d).into_par_iter().find_map_first(|a| {
            let mut acc = Accumulator::new(&self.field, d);
            for b in 0..d {
                for c in 0..d {
                    if !self.jacobi_sum(&mut acc, a, b, c).is_empty() {
                        return Some((a, b, c));
                    }
                }
            }
            None
        })
    }

    /// Jacobi on `samples` triples drawn from a ChaCha stream seeded by `seed`.
    pub fn jacobi_failure_random(&self, samples: usize, seed: u64) -> Option<(usize, usize, usize)> {
        const CHUNK: usize = 1 << 14;
        let d = self.dim;
        let chunks = samples.div_ceil(CHUNK);
        (0..chunks).into_par_iter().find_map_first(|ci| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(ci as u64);
            let mut acc = Accumulator::new(&self.field, d);
            let count = CHUNK.min(samples - ci * CHUNK);
            for _ in 0..count {
                let (a, b, c) = (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d));
                if !self.jacobi_sum(&mut acc, a, b, c).is_empty() {
                    return Some((a, b, c));
                }
            }
            None
        })
    }

    /// First basis pair `(i, j)` with `m(e_i e_j) != m(e_i) m(e_j)`, where
    /// `columns[i]` is the image of `e_i`.
    pub fn homomorphism_failure(&self, columns: &[SparseVec]) -> Option<(usize, usize)> {
        assert_eq!(columns.len(), self.dim);
        let f = &self.field;
        let d = self.dim;
        (0..d).into_par_iter().find_map_first(|i| {
            let mut acc = Accumulator::new(f, d);
            for j in 0..d {
                // m(e_i e_j) - m(e_i) m(e_j)
                for &(k, c) in self.product(i, j) {
                    for &(l, v) in &columns[k as usize] {
                        acc.add(l, f.mul(c, v));
                    }
                }
                let minus_one = f.neg(Fq::ONE);
                for &(a, x) in &columns[i] {
                    for &(b, y) in &columns[j] {
                        let xy = f.mul(minus_one, f.mul(x, y));
                        for &(k, c) in self.product(a, b) {
                            acc.add(k as usize, f.mul(xy, c));
                        }
                    }
                }
                if !acc.drain().is_empty() {
                    return Some((i, j));
                }
            }
            None
        })
    }

    /// Dimension of the smallest subspace containing `seed` and closed under
    /// left multiplication by every basis element. For anticommutative and
    /// commutative tables this is the two-sided ideal generated by `seed`.
    pub fn ideal_closure_dim(&self, seed: &[Fq]) -> usize {
        use crate::linalg::Echelon;
        let mut span = Echelon::new(&self.field, self.dim);
        let mut frontier = Vec::new();
        if span.insert(seed) {
            frontier.push(seed.to_vec());
        }
        while let Some(v) = frontier.pop() {
            let vs = crate::linalg::to_sparse(&v);
            for j in 0..self.dim {
                let w = self.multiply_dense(&[(j, Fq::ONE)], &vs);
                if span.insert(&w) {
                    frontier.push(w);
                }
                if span.rank() == self.dim {
                    return self.dim;
                }
            }
        }
        span.rank()
    }
}
