//! Automorphisms of M(2; n): the torus `lambda`, `Theta`, the coordinate swap
//! and its extension to M, duality actions of characters, simultaneous
//! eigenspace decompositions, truncated exponentials, and torus membership.

use std::sync::OnceLock;

use crate::divided_power::{self, DividedPowerPoly, Shape};
use crate::error::{Error, Result};
use crate::field::{extend_field, root_of_unity, FieldEmbedding, Fq, GaloisField};
use crate::grading::{component_action, Component, Grading};
use crate::group::{AbelianGroup, Character};
use crate::linalg::{unit_vector, Matrix};
use crate::melikyan::{Block, MelikyanAlgebra, MelikyanElement};
use crate::witt::{self, VectorField};

/// Flags cached on an [`Endomorphism`]. `bracket_preserving` is `Some(true)`
/// only after the check on every canonical basis pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Flags {
    pub invertible: bool,
    pub bracket_preserving: Option<bool>,
    pub w_preserving: bool,
}

/// A linear map of M(2; n) as a matrix in the canonical basis.
#[derive(Clone)]
pub struct Endomorphism {
    algebra: MelikyanAlgebra,
    matrix: Matrix,
    flags: Flags,
    inverse: OnceLock<Option<Matrix>>,
}

impl std::fmt::Debug for Endomorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Endomorphism({:?}, nnz={}, {:?})", self.algebra, self.matrix.nnz(), self.flags)
    }
}

impl PartialEq for Endomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.matrix == other.matrix
    }
}

impl Eq for Endomorphism {}

impl Endomorphism {
    pub fn new(algebra: &MelikyanAlgebra, matrix: Matrix) -> Result<Self> {
        let d = algebra.dim();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::InvalidShape(format!("{}x{} matrix for dimension {d}", matrix.rows(), matrix.cols())));
        }
        if matrix.field() != algebra.field() {
            return Err(Error::FieldMismatch);
        }
        let w = algebra.w_indices();
        let w_preserving = w.clone().all(|j| (0..d).all(|i| w.contains(&i) || matrix[(i, j)].is_zero()));
        let inverse = OnceLock::new();
        let inv = if matrix.is_diagonal() {
            let diag = matrix.diagonal_entries();
            (!diag.iter().any(|x| x.is_zero())).then(|| {
                Matrix::diagonal(algebra.field(), &diag.iter().map(|&x| algebra.field().inv(x)).collect::<Vec<_>>())
            })
        } else {
            matrix.inverse()
        };
        let invertible = inv.is_some();
        let _ = inverse.set(inv);
        Ok(Endomorphism {
            algebra: algebra.clone(),
            matrix,
            flags: Flags { invertible, bracket_preserving: None, w_preserving },
            inverse,
        })
    }

    /// A map with a diagonal matrix; the inverse is taken entrywise.
    pub fn diagonal(algebra: &MelikyanAlgebra, diag: &[Fq]) -> Result<Self> {
        Self::new(algebra, Matrix::diagonal(algebra.field(), diag))
    }

    pub fn identity(algebra: &MelikyanAlgebra) -> Self {
        let mut e = Self::new(algebra, Matrix::identity(algebra.field(), algebra.dim())).expect("square");
        e.flags.bracket_preserving = Some(true);
        e
    }

    pub fn algebra(&self) -> &MelikyanAlgebra {
        &self.algebra
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn is_invertible(&self) -> bool {
        self.flags.invertible
    }

    pub fn is_w_preserving(&self) -> bool {
        self.flags.w_preserving
    }

    pub fn is_verified_automorphism(&self) -> bool {
        self.flags.invertible && self.flags.bracket_preserving == Some(true)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn is_diagonal(&self) -> bool {
        self.matrix.is_diagonal()
    }

    /// First basis pair `(i, j)` with `Psi[e_i, e_j] != [Psi e_i, Psi e_j]`.
    pub fn bracket_failure(&self) -> Option<(usize, usize)> {
        self.algebra.table().homomorphism_failure(&self.matrix.sparse_columns())
    }

    /// Runs the exhaustive bracket check and records the result.
    pub fn verified(mut self) -> Result<Self> {
        if !self.flags.invertible {
            return Err(Error::Singular);
        }
        match self.bracket_failure() {
            Some((i, j)) => {
                self.flags.bracket_preserving = Some(false);
                Err(Error::NotAutomorphism(i, j))
            }
            None => {
                self.flags.bracket_preserving = Some(true);
                Ok(self)
            }
        }
    }

    pub fn inverse(&self) -> Result<Endomorphism> {
        let inv = self.inverse.get_or_init(|| self.matrix.inverse()).clone().ok_or(Error::Singular)?;
        let mut e = Endomorphism::new(&self.algebra, inv)?;
        e.flags.bracket_preserving = self.flags.bracket_preserving;
        Ok(e)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism> {
        if self.algebra != other.algebra {
            return Err(Error::WrongAlgebra { expected: format!("{:?}", self.algebra), got: format!("{:?}", other.algebra) });
        }
        let mut e = Endomorphism::new(&self.algebra, self.matrix.mul(&other.matrix))?;
        if self.flags.bracket_preserving == Some(true) && other.flags.bracket_preserving == Some(true) {
            e.flags.bracket_preserving = Some(true);
        }
        Ok(e)
    }

    pub fn pow(&self, k: u64) -> Result<Endomorphism> {
        let mut e = Endomorphism::new(&self.algebra, self.matrix.pow(k))?;
        if self.flags.bracket_preserving == Some(true) {
            e.flags.bracket_preserving = Some(true);
        }
        Ok(e)
    }

    /// `self ∘ other ∘ self^{-1}`.
    pub fn conjugate(&self, other: &Endomorphism) -> Result<Endomorphism> {
        self.compose(other)?.compose(&self.inverse()?)
    }

    pub fn commutes_with(&self, other: &Endomorphism) -> bool {
        self.matrix.mul(&other.matrix) == other.matrix.mul(&self.matrix)
    }

    pub fn apply(&self, y: &MelikyanElement) -> Result<MelikyanElement> {
        self.algebra.check_element(y)?;
        self.algebra.from_dense(&self.matrix.mul_vec(&y.to_dense()))
    }
}

/// `(t_1, t_2)` in `(F^x)^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TorusParameter {
    pub t1: Fq,
    pub t2: Fq,
}

impl TorusParameter {
    pub fn new(t1: Fq, t2: Fq) -> Result<Self> {
        if t1.is_zero() || t2.is_zero() {
            return Err(Error::ZeroParameter);
        }
        Ok(TorusParameter { t1, t2 })
    }

    pub fn one() -> Self {
        TorusParameter { t1: Fq::ONE, t2: Fq::ONE }
    }

    /// `alpha(t) = t_1 t_2`.
    pub fn alpha(&self, f: &GaloisField) -> Fq {
        f.mul(self.t1, self.t2)
    }

    pub fn mul(&self, other: &Self, f: &GaloisField) -> Self {
        TorusParameter { t1: f.mul(self.t1, other.t1), t2: f.mul(self.t2, other.t2) }
    }

    pub fn swapped(&self) -> Self {
        TorusParameter { t1: self.t2, t2: self.t1 }
    }

    /// `t^(u, v) = t_1^u t_2^v`.
    pub fn monomial(&self, f: &GaloisField, (u, v): (i64, i64)) -> Fq {
        f.mul(f.pow(self.t1, u), f.pow(self.t2, v))
    }

    pub fn map(&self, e: &FieldEmbedding) -> Self {
        TorusParameter { t1: e.map(self.t1), t2: e.map(self.t2) }
    }
}

/// All of `(F^x)^2`, the default exhaustive torus sample.
pub fn torus_points(f: &GaloisField) -> Vec<TorusParameter> {
    let units: Vec<Fq> = f.nonzero_elements().collect();
    units.iter().flat_map(|&a| units.iter().map(move |&b| TorusParameter { t1: a, t2: b })).collect()
}

/// Diagonal entries of `lambda(t)`:
/// `x^(a) d_i -> t^(3a - 3e_i)`, `x^(a) d~_i -> t^(3a - 3e_i) alpha`, `x^(a) -> t^(3a) alpha^{-1}`.
pub fn lambda_diagonal(alg: &MelikyanAlgebra, t: &TorusParameter) -> Vec<Fq> {
    let f = alg.field();
    let alpha = t.alpha(f);
    let alpha_inv = f.inv(alpha);
    alg.basis()
        .iter()
        .map(|b| {
            let a = b.index.entries();
            let base = (3 * a[0] as i64, 3 * a[1] as i64);
            match b.block {
                Block::O => f.mul(t.monomial(f, base), alpha_inv),
                blk => {
                    let e = if blk.axis() == Some(0) { (base.0 - 3, base.1) } else { (base.0, base.1 - 3) };
                    let w = t.monomial(f, e);
                    if blk.is_tilde() {
                        f.mul(w, alpha)
                    } else {
                        w
                    }
                }
            }
        })
        .collect()
}

/// `lambda(t)`. The bracket flag is left unset; see [`Endomorphism::verified`].
pub fn lambda(alg: &MelikyanAlgebra, t: &TorusParameter) -> Result<Endomorphism> {
    if t.t1.is_zero() || t.t2.is_zero() {
        return Err(Error::ZeroParameter);
    }
    Endomorphism::diagonal(alg, &lambda_diagonal(alg, t))
}

/// The kernel of `lambda` over the algebra's field.
#[derive(Clone, Debug)]
pub struct LambdaKernel {
    pub elements: Vec<TorusParameter>,
    /// False when the field has no primitive cube root of unity, so only the
    /// trivial element can appear.
    pub complete: bool,
}

/// Enumerates `(F^x)^2` and keeps the parameters with `lambda(t) = Id`.
pub fn kernel_of_lambda(alg: &MelikyanAlgebra) -> LambdaKernel {
    let f = alg.field();
    let elements = torus_points(f)
        .into_iter()
        .filter(|t| lambda_diagonal(alg, t).iter().all(|&x| x == Fq::ONE))
        .collect();
    LambdaKernel { elements, complete: (f.order() - 1) % 3 == 0 }
}

/// The primitive cube root of unity used throughout.
pub fn beta(f: &GaloisField) -> Result<Fq> {
    Ok(root_of_unity(f, 3)?)
}

/// `Theta = lambda(beta^2, beta^2)`.
pub fn theta(alg: &MelikyanAlgebra) -> Result<Endomorphism> {
    let f = alg.field();
    let b2 = f.pow(beta(f)?, 2);
    lambda(alg, &TorusParameter { t1: b2, t2: b2 })?.verified()
}

fn require_equal_shape(alg: &MelikyanAlgebra) -> Result<()> {
    let [n1, n2] = alg.n();
    if n1 != n2 {
        return Err(Error::UnequalShape(n1, n2));
    }
    Ok(())
}

/// A linear map of W(2; n) in the basis `x^(a) d_1` (lex), then `x^(a) d_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittMap {
    shape: Shape,
    matrix: Matrix,
}

impl WittMap {
    pub fn new(shape: &Shape, matrix: Matrix) -> Result<Self> {
        let d = 2 * shape.dim();
        if shape.m() != 2 {
            return Err(Error::RequiresTwoVariables(shape.m()));
        }
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::InvalidShape(format!("{}x{} matrix for W of dimension {d}", matrix.rows(), matrix.cols())));
        }
        Ok(WittMap { shape: shape.clone(), matrix })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// First basis pair where the bracket of W(2; n) is not preserved.
    pub fn bracket_failure(&self) -> Option<(usize, usize)> {
        witt::structure_table(&self.shape, self.matrix.field()).homomorphism_failure(&self.matrix.sparse_columns())
    }

    pub fn is_automorphism(&self) -> bool {
        self.matrix.inverse().is_some() && self.bracket_failure().is_none()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    /// Whether this is `x^(a) d_k -> s^a s_k^{-1} x^(a) d_k`, returning `s`.
    pub fn witt_torus_parameter(&self) -> Option<TorusParameter> {
        let f = self.matrix.field();
        if !self.matrix.is_diagonal() {
            return None;
        }
        let d = self.shape.dim();
        let diag = self.matrix.diagonal_entries();
        let s1 = f.try_inv(diag[0])?;
        let s2 = f.try_inv(diag[d])?;
        let s = TorusParameter { t1: s1, t2: s2 };
        let basis = self.shape.basis();
        for axis in 0..2 {
            for (i, a) in basis.iter().enumerate() {
                let e = a.entries();
                let u = (e[0] as i64 - (axis == 0) as i64, e[1] as i64 - (axis == 1) as i64);
                if diag[axis * d + i] != s.monomial(f, u) {
                    return None;
                }
            }
        }
        Some(s)
    }
}

/// The torus element of W(2; n) induced by `x_i -> s_i x_i`:
/// `x^(a) d_k -> s^(a - e_k) x^(a) d_k`.
pub fn witt_torus(shape: &Shape, field: &GaloisField, s: &TorusParameter) -> Result<WittMap> {
    if s.t1.is_zero() || s.t2.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let basis = shape.basis();
    let mut diag = Vec::with_capacity(2 * basis.len());
    for axis in 0..2 {
        for a in &basis {
            let e = a.entries();
            diag.push(s.monomial(field, (e[0] as i64 - (axis == 0) as i64, e[1] as i64 - (axis == 1) as i64)));
        }
    }
    WittMap::new(shape, Matrix::diagonal(field, &diag))
}

/// The exponent swap `x^(a1, a2) -> x^(a2, a1)` on O(2; n).
pub fn upsilon(shape: &Shape, field: &GaloisField) -> Result<Matrix> {
    if shape.m() != 2 {
        return Err(Error::RequiresTwoVariables(shape.m()));
    }
    if shape.n()[0] != shape.n()[1] {
        return Err(Error::UnequalShape(shape.n()[0], shape.n()[1]));
    }
    let basis = shape.basis();
    let columns: Vec<Vec<Fq>> = basis.iter().map(|a| unit_vector(shape.dim(), shape.index_of(&a.swapped()))).collect();
    Ok(Matrix::from_columns(field, shape.dim(), &columns))
}

/// Whether a matrix is an automorphism of the commutative algebra O(2; n).
pub fn is_o_automorphism(shape: &Shape, m: &Matrix) -> bool {
    m.inverse().is_some() && divided_power::structure_table(shape, m.field()).homomorphism_failure(&m.sparse_columns()).is_none()
}

/// `sigma(D) = upsilon D upsilon^{-1}`, computed by conjugation: a special
/// derivation is determined by its values on `x_1, x_2`, so
/// `sigma(D) = sum_i upsilon(D(upsilon^{-1} x_i)) d_i`.
pub fn sigma_w(shape: &Shape, field: &GaloisField) -> Result<WittMap> {
    let ups = upsilon(shape, field)?;
    let ups_inv = ups.inverse().ok_or(Error::Singular)?;
    let apply = |m: &Matrix, p: &DividedPowerPoly| DividedPowerPoly::from_dense(shape, field, &m.mul_vec(&p.to_dense()));
    let d = shape.dim();
    let basis = shape.basis();
    let mut columns = Vec::with_capacity(2 * d);
    for axis in 0..2 {
        for a in &basis {
            let dfield = VectorField::monomial(shape, field, a.clone(), axis, Fq::ONE);
            let comps = (0..2)
                .map(|i| {
                    let xi = DividedPowerPoly::variable(shape, field, i);
                    Ok(apply(&ups, &dfield.apply(&apply(&ups_inv, &xi))?))
                })
                .collect::<Result<Vec<_>>>()?;
            columns.push(VectorField::new(comps)?.to_dense());
        }
    }
    Ok(WittMap { shape: shape.clone(), matrix: Matrix::from_columns(field, 2 * d, &columns) })
}

/// `pi(Psi)`: the restriction of a W-preserving map to W.
pub fn pi_restrict(psi: &Endomorphism) -> Result<WittMap> {
    if !psi.is_w_preserving() {
        return Err(Error::NotWPreserving);
    }
    let w: Vec<usize> = psi.algebra.w_indices().collect();
    Ok(WittMap { shape: psi.algebra.shape().clone(), matrix: psi.matrix.submatrix(&w, &w) })
}

/// The matrix of the extension of `sigma` with constants `(c_o, c_t)`:
/// `f -> c_o upsilon(f)` on O, `sigma` on W, and
/// `f1 d~1 + f2 d~2 -> c_t (upsilon(f1) d~2 + upsilon(f2) d~1)` on W~.
pub fn sigma_extension_matrix(alg: &MelikyanAlgebra, c_o: Fq, c_t: Fq) -> Result<Matrix> {
    require_equal_shape(alg)?;
    let sigma = sigma_w(alg.shape(), alg.field())?;
    let ups = upsilon(alg.shape(), alg.field())?;
    Ok(extension_matrix(alg, &sigma, &ups, c_o, c_t))
}

fn extension_matrix(alg: &MelikyanAlgebra, sigma: &WittMap, ups: &Matrix, c_o: Fq, c_t: Fq) -> Matrix {
    let f = alg.field();
    let dim = alg.dim();
    let d = alg.block_dim();
    let mut m = Matrix::zeros(f, dim, dim);
    for j in 0..dim {
        let (block, local) = (j / d, j % d);
        match block {
            0 => {
                for r in 0..d {
                    m[(r, j)] = f.mul(c_o, ups[(r, local)]);
                }
            }
            1 | 2 => {
                for r in 0..2 * d {
                    m[(d + r, j)] = sigma.matrix[(r, j - d)];
                }
            }
            _ => {
                let target = if block == 3 { 4 } else { 3 };
                for r in 0..d {
                    m[(target * d + r, j)] = f.mul(c_t, ups[(r, local)]);
                }
            }
        }
    }
    m
}

/// A bracket-compatible extension of `sigma` to M(2; n).
#[derive(Clone, Debug)]
pub struct SigmaExtension {
    pub c_o: Fq,
    pub c_t: Fq,
    pub map: Endomorphism,
}

/// Every `(c_o, c_t)` in `(F^x)^2` for which the extension preserves the
/// bracket. Candidates are screened on the probe pairs `[d~1, d~2]`,
/// `[x_1, x_2]` and `[1, d~1]` before the full check.
pub fn sigma_extensions(alg: &MelikyanAlgebra) -> Result<Vec<SigmaExtension>> {
    require_equal_shape(alg)?;
    let f = alg.field();
    let probes = [
        (alg.index(Block::T1, [0, 0])?, alg.index(Block::T2, [0, 0])?),
        (alg.index(Block::O, [1, 0])?, alg.index(Block::O, [0, 1])?),
        (alg.index(Block::O, [0, 0])?, alg.index(Block::T1, [0, 0])?),
    ];
    let table = alg.table();
    let sigma = sigma_w(alg.shape(), f)?;
    let ups = upsilon(alg.shape(), f)?;
    let mut out = Vec::new();
    for c_o in f.nonzero_elements() {
        for c_t in f.nonzero_elements() {
            let m = extension_matrix(alg, &sigma, &ups, c_o, c_t);
            let cols = m.sparse_columns();
            let probe_ok = probes.iter().all(|&(i, j)| {
                let lhs = m.mul_sparse(&table.product_sparse(i, j));
                let rhs = crate::linalg::to_dense(&table.multiply_sparse(&cols[i], &cols[j]), alg.dim());
                lhs == rhs
            });
            if !probe_ok {
                continue;
            }
            if let Ok(map) = Endomorphism::new(alg, m)?.verified() {
                out.push(SigmaExtension { c_o, c_t, map });
            }
        }
    }
    Ok(out)
}

/// `sigma_M`: the extension whose constants lie in the prime field.
pub fn sigma_m(alg: &MelikyanAlgebra) -> Result<SigmaExtension> {
    let f = alg.field().clone();
    sigma_extensions(alg)?
        .into_iter()
        .find(|e| f.is_prime_field_element(e.c_o) && f.is_prime_field_element(e.c_t))
        .ok_or(Error::NoExtension)
}

/// Diagonal bracket-preserving maps fixing W pointwise whose entries are cube
/// roots of unity. With `d_i = beta^{e_i}`, a diagonal map preserves the
/// bracket iff `e_i + e_j = e_k (mod 3)` whenever `e_k` occurs in `[e_i, e_j]`;
/// the solutions form the null space of that system over GF(3).
pub fn mu3_w_fixing_diagonals(alg: &MelikyanAlgebra) -> Result<Vec<Endomorphism>> {
    let f = alg.field();
    let b = beta(f)?;
    let dim = alg.dim();
    let w = alg.w_indices();
    let f3 = GaloisField::new(3, 1)?;
    let one = Fq::ONE;
    let minus = f3.neg(one);
    let table = alg.table();
    let mut rows: Vec<Vec<Fq>> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for i in 0..dim {
        for j in 0..dim {
            for &(k, _) in table.product(i, j) {
                let mut row = vec![Fq::ZERO; dim];
                row[i] = f3.add(row[i], one);
                row[j] = f3.add(row[j], one);
                row[k as usize] = f3.add(row[k as usize], minus);
                if row.iter().any(|x| !x.is_zero()) && seen.insert(row.clone()) {
                    rows.push(row);
                }
            }
        }
    }
    for i in w.clone() {
        let mut row = vec![Fq::ZERO; dim];
        row[i] = one;
        rows.push(row);
    }
    let system = Matrix::from_fn(&f3, rows.len(), dim, |r, c| rows[r][c]);
    let null = system.nullspace();
    // enumerate all GF(3)-combinations of the null space basis
    let mut solutions: Vec<Vec<Fq>> = vec![vec![Fq::ZERO; dim]];
    for v in &null {
        let mut next = Vec::new();
        for s in &solutions {
            for c in f3.elements() {
                next.push(s.iter().zip(v).map(|(&x, &y)| f3.add(x, f3.mul(c, y))).collect::<Vec<_>>());
            }
        }
        solutions = next;
    }
    solutions
        .into_iter()
        .map(|e| {
            let diag: Vec<Fq> = e.iter().map(|&x| f.pow(b, f3.encode(x) as i64)).collect();
            Endomorphism::diagonal(alg, &diag)?.verified()
        })
        .collect()
}

/// `eta(chi)`: multiplication by `chi(g)` on the component labelled `g`.
pub fn eta(grading: &Grading, chi: &Character) -> Result<Endomorphism> {
    if chi.group() != grading.group() {
        return Err(Error::GroupMismatch);
    }
    chi.field().ensure_same(grading.field())?;
    let m = component_action(grading, |g| chi.eval(g).expect("label in group"));
    Endomorphism::new(grading.algebra(), m)
}

/// Simultaneous eigenspaces of commuting maps `q[j]`, with `q[j]` paired to the
/// `j`-th generator of `hint` (of order `m_j`). The eigenvalue
/// `zeta_{m_j}^e` becomes torsion coordinate `e`, where
/// `zeta_m = root_of_unity(field, m)`.
pub fn eigenspace_grading(alg: &MelikyanAlgebra, q: &[Endomorphism], hint: &AbelianGroup) -> Result<Grading> {
    if !hint.is_finite() {
        return Err(Error::InfiniteGroup(hint.rank()));
    }
    if hint.torsion().len() != q.len() {
        return Err(Error::GroupMismatch);
    }
    let f = alg.field();
    for a in q {
        if a.algebra() != alg {
            return Err(Error::WrongAlgebra { expected: format!("{alg:?}"), got: format!("{:?}", a.algebra()) });
        }
    }
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            if !q[i].commutes_with(&q[j]) {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    let order = f.order() as u64 - 1;
    let identity = Matrix::identity(f, alg.dim());
    for (j, a) in q.iter().enumerate() {
        let aq = a.matrix().pow(order);
        if !aq.is_identity() {
            let n = aq.sub(&identity);
            if n.pow(alg.dim() as u64).is_zero() {
                return Err(Error::OrderDivisibleByCharacteristic(j));
            }
            return Err(Error::NotDiagonalizable(j));
        }
        let m = hint.torsion()[j];
        if !a.matrix().pow(m).is_identity() {
            return Err(Error::EigenvalueOutsideCharacterGroup { index: j, order: m });
        }
    }
    let zetas: Vec<Fq> = hint.torsion().iter().map(|&m| root_of_unity(f, m)).collect::<std::result::Result<_, _>>()?;

    // Each piece: (exponents so far, basis of the joint eigenspace as columns).
    let dim = alg.dim();
    let mut pieces: Vec<(Vec<i64>, Vec<Vec<Fq>>)> = vec![(Vec::new(), (0..dim).map(|i| unit_vector(dim, i)).collect())];
    for (j, a) in q.iter().enumerate() {
        let mut next = Vec::new();
        for (labels, basis) in pieces {
            let image: Vec<Vec<Fq>> = basis.iter().map(|v| a.matrix().mul_vec(v)).collect();
            for e in 0..hint.torsion()[j] {
                let lam = f.pow(zetas[j], e as i64);
                // (A - lam) B x = 0
                let cols: Vec<Vec<Fq>> =
                    image.iter().zip(&basis).map(|(av, v)| av.iter().zip(v).map(|(&x, &y)| f.sub(x, f.mul(lam, y))).collect()).collect();
                let m = Matrix::from_columns(f, dim, &cols);
                let sub: Vec<Vec<Fq>> = m
                    .nullspace()
                    .into_iter()
                    .map(|x| {
                        let mut v = vec![Fq::ZERO; dim];
                        for (c, b) in x.iter().zip(&basis) {
                            if !c.is_zero() {
                                for (vi, &bi) in v.iter_mut().zip(b) {
                                    *vi = f.add(*vi, f.mul(*c, bi));
                                }
                            }
                        }
                        v
                    })
                    .collect();
                if !sub.is_empty() {
                    let mut l = labels.clone();
                    l.push(e as i64);
                    next.push((l, sub));
                }
            }
        }
        pieces = next;
    }
    let components = pieces
        .into_iter()
        .map(|(labels, basis)| Ok(Component { label: hint.element(&[], &labels)?, basis }))
        .collect::<Result<Vec<_>>>()?;
    Grading::new(alg, hint, components)
}

/// `exp(ad y) = Id + ad y + (ad y)^2 / 2`, for `(ad y)^3 = 0`.
pub fn exp_ad(alg: &MelikyanAlgebra, y: &MelikyanElement) -> Result<Endomorphism> {
    alg.check_element(y)?;
    let f = alg.field();
    let ys = crate::linalg::to_sparse(&y.to_dense());
    let ad = alg.table().left_multiplication(&ys);
    let ad2 = ad.mul(&ad);
    if !ad2.mul(&ad).is_zero() {
        return Err(Error::NilpotencyTooHigh);
    }
    let half = f.inv(f.from_int(2));
    let m = Matrix::identity(f, alg.dim()).add(&ad).add(&ad2.scale(half));
    Endomorphism::new(alg, m)?.verified()
}

/// Result of a torus membership test.
#[derive(Clone, Debug)]
pub enum TorusVerdict {
    /// `Psi = lambda(t)` with `t` in `field` (an extension of the working
    /// field of degree at most 3, reached through `embedding`).
    Yes { t: TorusParameter, field: GaloisField, embedding: FieldEmbedding },
    No { reason: String, entry: Option<(usize, usize)> },
}

impl TorusVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, TorusVerdict::Yes { .. })
    }
}

/// Decides whether `Psi = lambda(t)` for some `t` over an extension of degree
/// at most 3. Reads `s_i = t_i^3` and `alpha` off the diagonal, checks every
/// entry against the `lambda` formula and `alpha^3 = s_1 s_2`, then extracts a
/// cube root of `s_1`.
pub fn in_torus(psi: &Endomorphism) -> TorusVerdict {
    let alg = psi.algebra();
    let f = alg.field();
    let m = psi.matrix();
    if let Some(entry) = m.off_diagonal_entry() {
        return TorusVerdict::No { reason: "not diagonal".into(), entry: Some(entry) };
    }
    let diag = m.diagonal_entries();
    if diag.iter().any(|x| x.is_zero()) {
        return TorusVerdict::No { reason: "singular".into(), entry: None };
    }
    let at = |b: Block, a: [u32; 2]| diag[alg.index(b, a).expect("index in range")];
    let s1 = f.inv(at(Block::W1, [0, 0]));
    let s2 = f.inv(at(Block::W2, [0, 0]));
    let alpha = f.inv(at(Block::O, [0, 0]));
    let s = TorusParameter { t1: s1, t2: s2 };
    for (i, b) in alg.basis().iter().enumerate() {
        let a = b.index.entries();
        let base = s.monomial(f, (a[0] as i64, a[1] as i64));
        let want = match b.block {
            Block::O => f.div(base, alpha),
            blk => {
                let w = f.div(base, if blk.axis() == Some(0) { s1 } else { s2 });
                if blk.is_tilde() {
                    f.mul(w, alpha)
                } else {
                    w
                }
            }
        };
        if diag[i] != want {
            return TorusVerdict::No { reason: format!("diagonal entry at {b} is not of torus form"), entry: Some((i, i)) };
        }
    }
    if f.pow(alpha, 3) != f.mul(s1, s2) {
        return TorusVerdict::No { reason: "alpha^3 != s_1 s_2".into(), entry: None };
    }
    let (field, embedding) = match f.nth_root(s1, 3) {
        Some(_) => (f.clone(), FieldEmbedding::identity(f)),
        None => match extend_field(f, 3 * (f.order() as u64 - 1)) {
            Ok(x) => x,
            Err(e) => return TorusVerdict::No { reason: format!("no cube-root extension: {e}"), entry: None },
        },
    };
    let e1 = embedding.map(s1);
    let t1 = field.nth_root(e1, 3).expect("cube roots exist after extension");
    let t2 = field.div(embedding.map(alpha), t1);
    TorusVerdict::Yes { t: TorusParameter { t1, t2 }, field, embedding }
}

/// How conjugation by `Psi` acts on sampled torus parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InducedMap {
    Identity,
    Swap,
    Other,
}

#[derive(Clone, Debug)]
pub struct NormalizerVerdict {
    pub normalizes: bool,
    /// First sample whose conjugate leaves the torus.
    pub failure: Option<TorusParameter>,
    pub induced: InducedMap,
}

/// Checks `Psi lambda(t) Psi^{-1}` is in the torus for every sample.
pub fn normalizes_torus(psi: &Endomorphism, samples: &[TorusParameter]) -> Result<NormalizerVerdict> {
    let alg = psi.algebra();
    let inv = psi.inverse()?;
    let mut identity = true;
    let mut swap = true;
    for t in samples {
        let l = lambda(alg, t)?;
        let c = psi.compose(&l)?.compose(&inv)?;
        if !in_torus(&c).is_yes() {
            return Ok(NormalizerVerdict { normalizes: false, failure: Some(*t), induced: InducedMap::Other });
        }
        identity &= c.matrix() == l.matrix();
        swap &= c.matrix() == lambda(alg, &t.swapped())?.matrix();
    }
    let induced = if identity {
        InducedMap::Identity
    } else if swap {
        InducedMap::Swap
    } else {
        InducedMap::Other
    };
    Ok(NormalizerVerdict { normalizes: true, failure: None, induced })
}

/// Whether `Psi` commutes with `lambda(t)` for every sample: a map commutes
/// with a diagonal matrix iff each nonzero entry `(i, j)` has `d_i = d_j`.
pub fn centralizes_torus(psi: &Endomorphism, samples: &[TorusParameter]) -> Result<bool> {
    if samples.iter().any(|t| t.t1.is_zero() || t.t2.is_zero()) {
        return Err(Error::ZeroParameter);
    }
    let alg = psi.algebra();
    let diags: Vec<Vec<Fq>> = samples.iter().map(|t| lambda_diagonal(alg, t)).collect();
    for (j, col) in psi.matrix().sparse_columns().iter().enumerate() {
        for &(i, _) in col {
            if i != j && diags.iter().any(|d| d[i] != d[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Canonical basis vectors of top canonical degree.
pub fn top_degree_indices(alg: &MelikyanAlgebra) -> Vec<usize> {
    let (_, hi) = alg.canonical_degree_range();
    (0..alg.dim()).filter(|&i| alg.deg_canonical(i) == hi).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(k: u32) -> MelikyanAlgebra {
        MelikyanAlgebra::new([1, 1], &GaloisField::new(5, k).unwrap()).unwrap()
    }

    #[test]
    fn lambda_examples() {
        let a = alg(2);
        let f = a.field().clone();
        assert!(lambda(&a, &TorusParameter::one()).unwrap().is_identity());
        let t = TorusParameter::new(f.primitive_element(), f.pow(f.primitive_element(), 5)).unwrap();
        let l = lambda(&a, &t).unwrap();
        let d1 = a.index(Block::W1, [0, 0]).unwrap();
        assert_eq!(l.matrix()[(d1, d1)], f.pow(t.t1, -3));
        let b = beta(&f).unwrap();
        let b2 = f.pow(b, 2);
        let l = lambda(&a, &TorusParameter::new(b2, b2).unwrap()).unwrap();
        let one = a.index(Block::O, [0, 0]).unwrap();
        assert_eq!(l.matrix()[(one, one)], b2);
        assert!(TorusParameter::new(Fq::ZERO, Fq::ONE).is_err());
    }

    #[test]
    fn lambda_matches_degree_formula() {
        let a = alg(2);
        let f = a.field().clone();
        let g = f.primitive_element();
        for (x, y) in [(1, 0), (2, 7), (5, 11), (23, 3)] {
            let t = TorusParameter { t1: f.pow(g, x), t2: f.pow(g, y) };
            let diag = lambda_diagonal(&a, &t);
            for i in 0..a.dim() {
                assert_eq!(diag[i], t.monomial(&f, a.deg_zz(i)));
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_of_lambda(&alg(2));
        assert_eq!(k.elements.len(), 3);
        assert!(k.complete);
        let f = GaloisField::new(5, 2).unwrap();
        for t in &k.elements {
            assert_eq!(f.pow(t.t1, 3), Fq::ONE);
            assert_eq!(f.mul(t.t1, t.t2), Fq::ONE);
        }
        let k1 = kernel_of_lambda(&alg(1));
        assert_eq!(k1.elements, vec![TorusParameter::one()]);
        assert!(!k1.complete);
    }

    #[test]
    fn theta_examples() {
        let a = alg(2);
        let f = a.field().clone();
        let th = theta(&a).unwrap();
        assert!(th.pow(3).unwrap().is_identity());
        assert!(pi_restrict(&th).unwrap().is_identity());
        let t1 = a.index(Block::T1, [0, 0]).unwrap();
        assert_eq!(th.matrix()[(t1, t1)], beta(&f).unwrap());
        let b2 = f.pow(beta(&f).unwrap(), 2);
        for i in 0..a.dim() {
            assert_eq!(th.matrix()[(i, i)], f.pow(b2, a.deg_canonical(i)));
        }
        assert!(matches!(theta(&alg(1)), Err(Error::Field(_))));
    }

    #[test]
    fn swap_maps() {
        let a = alg(1);
        let s = a.shape();
        let f = a.field();
        let ups = upsilon(s, f).unwrap();
        let x21 = DividedPowerPoly::basis_element(s, f, &[2, 1]).unwrap();
        let x12 = DividedPowerPoly::basis_element(s, f, &[1, 2]).unwrap();
        assert_eq!(ups.mul_vec(&x21.to_dense()), x12.to_dense());
        assert!(is_o_automorphism(s, &ups));
        let sigma = sigma_w(s, f).unwrap();
        assert!(sigma.is_automorphism());
        assert!(sigma.matrix().pow(2).is_identity());
        let d1 = VectorField::partial(s, f, 0).to_dense();
        assert_eq!(sigma.matrix().mul_vec(&d1), VectorField::partial(s, f, 1).to_dense());
        let a12 = MelikyanAlgebra::new([1, 2], f).unwrap();
        assert_eq!(sigma_extensions(&a12).unwrap_err(), Error::UnequalShape(1, 2));
    }

    #[test]
    fn sigma_m_over_prime_field() {
        let a = alg(1);
        let f = a.field().clone();
        let exts = sigma_extensions(&a).unwrap();
        assert_eq!(exts.len(), 1);
        let s = sigma_m(&a).unwrap();
        let m1 = f.neg(Fq::ONE);
        assert_eq!((s.c_o, s.c_t), (m1, m1));
        assert!(s.map.pow(2).unwrap().is_identity());
        assert_eq!(pi_restrict(&s.map).unwrap().matrix(), sigma_w(a.shape(), &f).unwrap().matrix());
        let one = a.index(Block::O, [0, 0]).unwrap();
        assert_eq!(s.map.matrix()[(one, one)], f.from_int(4));
        match in_torus(&s.map) {
            TorusVerdict::No { entry, .. } => assert!(entry.is_some()),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn exp_ad_examples() {
        let a = alg(1);
        let zero = MelikyanElement::zero(a.shape(), a.field()).unwrap();
        assert!(exp_ad(&a, &zero).unwrap().is_identity());
        assert_eq!(top_degree_indices(&a).len(), 2);
        let top = a.element(a.index(Block::T1, [4, 4]).unwrap());
        let e = exp_ad(&a, &top).unwrap();
        assert!(!e.is_identity());
        assert!(e.is_verified_automorphism());
        let d1 = a.element(a.index(Block::W1, [0, 0]).unwrap());
        assert_eq!(exp_ad(&a, &d1).unwrap_err(), Error::NilpotencyTooHigh);
    }

    #[test]
    fn torus_membership() {
        let a = alg(2);
        let f = a.field().clone();
        let g = f.primitive_element();
        let t = TorusParameter { t1: f.pow(g, 5), t2: f.pow(g, 7) };
        match in_torus(&lambda(&a, &t).unwrap()) {
            TorusVerdict::Yes { t: r, field, embedding } => {
                // lambda(r) = lambda(t) over the extension: r = t k with k in the kernel
                let k = TorusParameter { t1: field.div(r.t1, embedding.map(t.t1)), t2: field.div(r.t2, embedding.map(t.t2)) };
                assert_eq!(field.pow(k.t1, 3), Fq::ONE);
                assert_eq!(field.mul(k.t1, k.t2), Fq::ONE);
            }
            v => panic!("{v:?}"),
        }
        assert!(in_torus(&theta(&a).unwrap()).is_yes());
        let mut m = lambda(&a, &t).unwrap().matrix().clone();
        let one = a.index(Block::O, [0, 0]).unwrap();
        m[(one, one)] = f.mul(m[(one, one)], g);
        match in_torus(&Endomorphism::new(&a, m).unwrap()) {
            TorusVerdict::No { .. } => {}
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn torus_point_needing_extension() {
        // over GF(5) every element is a cube, over GF(25) the generator is not
        let a = alg(2);
        let f = a.field().clone();
        let g = f.primitive_element();
        assert!(f.nth_root(g, 3).is_none());
        // s = (g, g^2), alpha^3 = g^3 so alpha = g works; t_1 = g^(1/3) lives in GF(5^6)
        let s = TorusParameter { t1: g, t2: f.pow(g, 2) };
        let alpha = g;
        let diag: Vec<Fq> = a
            .basis()
            .iter()
            .map(|b| {
                let e = b.index.entries();
                let base = s.monomial(&f, (e[0] as i64, e[1] as i64));
                match b.block {
                    Block::O => f.div(base, alpha),
                    blk => {
                        let w = f.div(base, if blk.axis() == Some(0) { s.t1 } else { s.t2 });
                        if blk.is_tilde() {
                            f.mul(w, alpha)
                        } else {
                            w
                        }
                    }
                }
            })
            .collect();
        let psi = Endomorphism::diagonal(&a, &diag).unwrap().verified().unwrap();
        match in_torus(&psi) {
            TorusVerdict::Yes { t, field, embedding } => {
                assert_eq!(field.degree(), 6);
                assert_eq!(field.pow(t.t1, 3), embedding.map(s.t1));
                assert_eq!(field.mul(t.t1, t.t2), embedding.map(alpha));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn mu3_diagonal_search() {
        let a = alg(2);
        let sols = mu3_w_fixing_diagonals(&a).unwrap();
        assert_eq!(sols.len(), 3);
        let th = theta(&a).unwrap();
        let powers = [Endomorphism::identity(&a), th.clone(), th.pow(2).unwrap()];
        for s in &sols {
            assert!(powers.iter().any(|p| p == s));
        }
    }
}
