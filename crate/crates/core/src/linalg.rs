//! Dense matrices, sparse vectors and row reduction over a [`GaloisField`].

use std::fmt;

use crate::field::{Fq, GaloisField};

/// Sparse vector as `(index, nonzero coefficient)` pairs, sorted by index.
pub type SparseVec = Vec<(usize, Fq)>;

pub fn to_sparse(v: &[Fq]) -> SparseVec {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, &c)| (i, c)).collect()
}

pub fn to_dense(v: &[(usize, Fq)], dim: usize) -> Vec<Fq> {
    let mut out = vec![Fq::ZERO; dim];
    for &(i, c) in v {
        out[i] = c;
    }
    out
}

pub fn unit_vector(dim: usize, i: usize) -> Vec<Fq> {
    let mut v = vec![Fq::ZERO; dim];
    v[i] = Fq::ONE;
    v
}

#[derive(Clone)]
pub struct Matrix {
    field: GaloisField,
    rows: usize,
    cols: usize,
    data: Vec<Fq>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl Eq for Matrix {}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows.min(16) {
            let row: Vec<String> = (0..self.cols.min(16)).map(|c| self.field.display(self[(r, c)])).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Fq;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Fq {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Fq {
        &mut self.data[r * self.cols + c]
    }
}

impl Matrix {
    pub fn zeros(field: &GaloisField, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![Fq::ZERO; rows * cols] }
    }

    pub fn identity(field: &GaloisField, n: usize) -> Self {
        Self::diagonal(field, &vec![Fq::ONE; n])
    }

    pub fn diagonal(field: &GaloisField, diag: &[Fq]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn(field: &GaloisField, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Fq) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Columns given as dense vectors of length `rows`.
    pub fn from_columns(field: &GaloisField, rows: usize, columns: &[Vec<Fq>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, &v) in col.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[Fq] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Fq> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn sparse_column(&self, c: usize) -> SparseVec {
        (0..self.rows).filter_map(|r| {
            let v = self[(r, c)];
            (!v.is_zero()).then_some((r, v))
        }).collect()
    }

    pub fn sparse_columns(&self) -> Vec<SparseVec> {
        let mut cols = vec![Vec::new(); self.cols];
        for r in 0..self.rows {
            for (c, col) in cols.iter_mut().enumerate() {
                let v = self[(r, c)];
                if !v.is_zero() {
                    col.push((r, v));
                }
            }
        }
        cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        assert!(self.field == other.field, "field mismatch");
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    if !b.is_zero() {
                        *o = f.add(*o, f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Fq]) -> Vec<Fq> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        let mut out = vec![Fq::ZERO; self.rows];
        for (k, &x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self[(i, k)];
                if !a.is_zero() {
                    *o = f.add(*o, f.mul(a, x));
                }
            }
        }
        out
    }

    pub fn mul_sparse(&self, v: &[(usize, Fq)]) -> Vec<Fq> {
        let f = &self.field;
        let mut out = vec![Fq::ZERO; self.rows];
        for &(k, x) in v {
            for (i, o) in out.iter_mut().enumerate() {
                let a = self[(i, k)];
                if !a.is_zero() {
                    *o = f.add(*o, f.mul(a, x));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |f, a, b| f.sub(a, b))
    }

    fn zip_with(&self, other: &Matrix, op: impl Fn(&GaloisField, Fq, Fq) -> Fq) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| op(f, a, b)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: Fq) -> Matrix {
        let f = &self.field;
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self[(r, c)] == if r == c { Fq::ONE } else { Fq::ZERO }))
    }

    /// First off-diagonal nonzero entry, if any.
    pub fn off_diagonal_entry(&self) -> Option<(usize, usize)> {
        (0..self.rows).flat_map(|r| (0..self.cols).map(move |c| (r, c))).find(|&(r, c)| r != c && !self[(r, c)].is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square() && self.off_diagonal_entry().is_none()
    }

    pub fn diagonal_entries(&self) -> Vec<Fq> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut result = Matrix::identity(&self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(&self.field, rows.len(), cols.len(), |r, c| self[(rows[r], cols[c])])
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else { continue };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self[(r, c)]);
            for j in c..self.cols {
                self[(r, j)] = f.mul(self[(r, j)], inv);
            }
            let pivot_row: Vec<(usize, Fq)> = (c..self.cols).filter_map(|j| {
                let v = self[(r, j)];
                (!v.is_zero()).then_some((j, v))
            }).collect();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self[(i, c)];
                if factor.is_zero() {
                    continue;
                }
                let nf = f.neg(factor);
                for &(j, v) in &pivot_row {
                    self[(i, j)] = f.add(self[(i, j)], f.mul(nf, v));
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let f = &self.field;
        let mut aug = Matrix::zeros(f, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)];
            }
            aug[(r, n + r)] = Fq::ONE;
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_fn(f, n, n, |r, c| aug[(r, n + c)]))
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Fq>> {
        let f = self.field.clone();
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Fq::ZERO; self.cols];
            v[free] = Fq::ONE;
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(m[(r, free)]);
            }
            basis.push(v);
        }
        basis
    }
}

/// A subspace kept in semi-echelon form with sparse rows.
///
/// Row `i` has a unit entry at `pivots[i]` and zeros at the pivots of all
/// earlier rows, so reducing a vector against the rows in order is exact.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: GaloisField,
    dim: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: &GaloisField, dim: usize) -> Self {
        Echelon { field: field.clone(), dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_vectors(field: &GaloisField, dim: usize, vectors: &[Vec<Fq>]) -> Self {
        let mut e = Self::new(field, dim);
        for v in vectors {
            e.insert(v);
        }
        e
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `v` after reduction by the stored rows.
    pub fn reduce(&self, v: &[Fq]) -> Vec<Fq> {
        let f = &self.field;
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = w[p];
            if c.is_zero() {
                continue;
            }
            let nc = f.neg(c);
            for &(j, x) in row {
                w[j] = f.add(w[j], f.mul(nc, x));
            }
        }
        w
    }

    pub fn contains(&self, v: &[Fq]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &[Fq]) -> bool {
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else { return false };
        let f = &self.field;
        let inv = f.inv(w[p]);
        let row: SparseVec = w.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, &x)| (j, f.mul(x, inv))).collect();
        self.rows.push(row);
        self.pivots.push(p);
        true
    }

    /// Equality of spans.
    pub fn same_span(&self, other: &Echelon) -> bool {
        self.dim == other.dim
            && self.rank() == other.rank()
            && other.rows.iter().all(|r| self.contains(&to_dense(r, self.dim)))
    }

    pub fn basis(&self) -> Vec<Vec<Fq>> {
        self.rows.iter().map(|r| to_dense(r, self.dim)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_matrix(f: &GaloisField, n: usize, rng: &mut impl Rng) -> Matrix {
        let entries: Vec<Fq> = (0..n * n).map(|_| f.decode(rng.gen_range(0..f.order())).unwrap()).collect();
        Matrix::from_fn(f, n, n, |r, c| entries[r * n + c])
    }

    #[test]
    fn inverse_roundtrip() {
        let f = GaloisField::new(5, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut invertible = 0;
        for _ in 0..20 {
            let a = random_matrix(&f, 6, &mut rng);
            if let Some(inv) = a.inverse() {
                invertible += 1;
                assert!(a.mul(&inv).is_identity());
                assert!(inv.mul(&a).is_identity());
            } else {
                assert!(a.rank() < 6);
            }
        }
        assert!(invertible > 10);
    }

    #[test]
    fn nullspace_is_kernel() {
        let f = GaloisField::new(5, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let mut a = random_matrix(&f, 5, &mut rng);
        // force a dependency
        for r in 0..5 {
            let v = f.add(a[(r, 0)], a[(r, 1)]);
            a[(r, 4)] = v;
        }
        let ns = a.nullspace();
        assert_eq!(ns.len(), 5 - a.rank());
        for v in ns {
            assert!(a.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn echelon_membership() {
        let f = GaloisField::new(5, 1).unwrap();
        let v1 = vec![Fq::ONE, f.from_int(2), Fq::ZERO];
        let v2 = vec![Fq::ZERO, Fq::ONE, Fq::ONE];
        let e = Echelon::from_vectors(&f, 3, &[v1.clone(), v2.clone()]);
        assert_eq!(e.rank(), 2);
        let sum: Vec<Fq> = v1.iter().zip(&v2).map(|(&a, &b)| f.add(a, f.mul(f.from_int(3), b))).collect();
        assert!(e.contains(&sum));
        assert!(!e.contains(&unit_vector(3, 2)));
        let e2 = Echelon::from_vectors(&f, 3, &[sum, v2]);
        assert!(e.same_span(&e2));
    }

    #[test]
    fn matrix_power() {
        let f = GaloisField::new(5, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let a = random_matrix(&f, 4, &mut rng);
        let a3 = a.mul(&a).mul(&a);
        assert_eq!(a.pow(3), a3);
        assert!(a.pow(0).is_identity());
    }
}
