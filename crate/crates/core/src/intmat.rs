//! Small dense integer matrices and the Smith normal form.

use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<i128>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[i128] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<i128> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn mul_vec(&self, v: &[i128]) -> Vec<i128> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row(&mut self, target: usize, source: usize, factor: i128) {
        for c in 0..self.cols {
            let v = self[(source, c)];
            self[(target, c)] += factor * v;
        }
    }

    fn add_col(&mut self, target: usize, source: usize, factor: i128) {
        for r in 0..self.rows {
            let v = self[(r, source)];
            self[(r, target)] += factor * v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            self[(r, c)] = -self[(r, c)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i128;
    fn index(&self, (r, c): (usize, usize)) -> &i128 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut i128 {
        &mut self.data[r * self.cols + c]
    }
}

/// `u * a * v = diag(d)` with `u`, `v` unimodular and `d[0] | d[1] | ...`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Nonzero invariant factors; `d.len()` is the rank.
    pub d: Vec<i128>,
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows, a.cols);
    let mut a = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut d = Vec::new();

    for t in 0..m.min(n) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if a[(i, j)] != 0 && best.map_or(true, |(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..m {
                let q = a[(i, t)].div_euclid(a[(t, t)]);
                if q != 0 {
                    a.add_row(i, t, -q);
                    u.add_row(i, t, -q);
                }
                if a[(i, t)] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                let q = a[(t, j)].div_euclid(a[(t, t)]);
                if q != 0 {
                    a.add_col(j, t, -q);
                    v.add_col(j, t, -q);
                }
                if a[(t, j)] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                // Move the smallest remainder in row/column t into the pivot.
                let mut best = (t, t);
                for i in t + 1..m {
                    if a[(i, t)] != 0 && a[(i, t)].abs() < a[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    if a[(t, j)] != 0 && a[(t, j)].abs() < a[best].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap_rows(t, best.0);
                    u.swap_rows(t, best.0);
                } else if best.1 != t {
                    a.swap_cols(t, best.1);
                    v.swap_cols(t, best.1);
                }
                continue;
            }
            // Divisibility condition on the trailing block.
            let pivot = a[(t, t)];
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| a[(i, j)] % pivot != 0));
            match offender {
                Some(i) => {
                    a.add_row(t, i, 1);
                    u.add_row(t, i, 1);
                }
                None => break,
            }
        }
        if a[(t, t)] < 0 {
            a.negate_row(t);
            u.negate_row(t);
        }
        d.push(a[(t, t)]);
    }
    SmithForm { u, v, d }
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.d.len()
    }

    /// Some integer `x` with `a x = b`, if one exists.
    pub fn solve(&self, b: &[i128]) -> Option<Vec<i128>> {
        let y = self.u.mul_vec(b);
        let n = self.v.rows();
        let mut z = vec![0i128; n];
        for (i, &yi) in y.iter().enumerate() {
            if i < self.d.len() {
                if yi % self.d[i] != 0 {
                    return None;
                }
                z[i] = yi / self.d[i];
            } else if yi != 0 {
                return None;
            }
        }
        Some(self.v.mul_vec(&z))
    }

    /// Basis of the integer kernel of `a`.
    pub fn kernel(&self) -> Vec<Vec<i128>> {
        (self.rank()..self.v.cols()).map(|j| self.v.column(j)).collect()
    }
}
