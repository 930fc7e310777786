//! The divided power algebra O(m; n).
//!
//! Basis `x^(a)` for `0 <= a <= tau(n) = (p^{n_1} - 1, ..., p^{n_m} - 1)` with
//! `x^(a) x^(b) = binom(a + b, a) x^(a + b)`. Products whose exponent leaves the
//! box are zero; whenever that happens some coordinate carries in base p, so the
//! Lucas coefficient vanishes anyway (checked exhaustively in the tests).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{binom_mod_p, is_prime, Fq, GaloisField};
use crate::structure::{AlgebraKind, StructureTable};

struct ShapeData {
    p: u32,
    n: Vec<u32>,
    tau: Vec<u32>,
    dim: usize,
}

/// `(m, n, p)` together with the cached bound `tau(n)`.
#[derive(Clone)]
pub struct Shape(Arc<ShapeData>);

impl PartialEq for Shape {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.n == other.0.n
    }
}

impl Eq for Shape {}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Shape(p={}, n={:?})", self.0.p, self.0.n)
    }
}

/// Upper bound on `dim O(m; n)`.
pub const MAX_DIM: usize = 1 << 16;

impl Shape {
    pub fn new(p: u32, n: &[u32]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidShape(format!("{p} is not prime")));
        }
        if n.is_empty() || n.iter().any(|&x| x == 0) {
            return Err(Error::InvalidShape(format!("n must be a nonempty tuple of positive integers, got {n:?}")));
        }
        let mut dim: usize = 1;
        let mut tau = Vec::with_capacity(n.len());
        for &ni in n {
            let side = (p as usize).checked_pow(ni).filter(|&s| s <= MAX_DIM);
            let side = side.ok_or_else(|| Error::InvalidShape(format!("p^{ni} too large")))?;
            dim = dim.checked_mul(side).filter(|&d| d <= MAX_DIM).ok_or_else(|| Error::InvalidShape("dimension too large".into()))?;
            tau.push(side as u32 - 1);
        }
        Ok(Shape(Arc::new(ShapeData { p, n: n.to_vec(), tau, dim })))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn m(&self) -> usize {
        self.0.n.len()
    }

    pub fn n(&self) -> &[u32] {
        &self.0.n
    }

    pub fn tau(&self) -> &[u32] {
        &self.0.tau
    }

    /// `dim O(m; n) = p^(n_1 + ... + n_m)`.
    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn contains(&self, a: &[u32]) -> bool {
        a.len() == self.m() && a.iter().zip(self.tau()).all(|(x, t)| x <= t)
    }

    /// Position of `a` in the lexicographic basis order.
    pub fn index_of(&self, a: &MultiIndex) -> usize {
        a.0.iter().zip(self.tau()).fold(0usize, |acc, (&x, &t)| acc * (t as usize + 1) + x as usize)
    }

    pub fn multi_index(&self, mut idx: usize) -> MultiIndex {
        let mut out = vec![0u32; self.m()];
        for (o, &t) in out.iter_mut().zip(self.tau()).rev() {
            let r = t as usize + 1;
            *o = (idx % r) as u32;
            idx /= r;
        }
        MultiIndex(out)
    }

    /// All multi-indices `0 <= a <= tau(n)` in lexicographic order.
    pub fn basis(&self) -> Vec<MultiIndex> {
        (0..self.dim()).map(|i| self.multi_index(i)).collect()
    }

    pub fn top(&self) -> MultiIndex {
        MultiIndex(self.tau().to_vec())
    }

    pub fn unit(&self, axis: usize) -> MultiIndex {
        let mut a = vec![0; self.m()];
        a[axis] = 1;
        MultiIndex(a)
    }

    pub fn zero_index(&self) -> MultiIndex {
        MultiIndex(vec![0; self.m()])
    }
}

/// Exponent `a` of a basis monomial `x^(a)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(shape: &Shape, a: &[u32]) -> Result<Self> {
        if !shape.contains(a) {
            return Err(Error::IndexOutOfBounds(a.to_vec()));
        }
        Ok(MultiIndex(a.to_vec()))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `a - eps_axis`, if nonnegative.
    pub fn lowered(&self, axis: usize) -> Option<MultiIndex> {
        let mut a = self.0.clone();
        a[axis] = a[axis].checked_sub(1)?;
        Some(MultiIndex(a))
    }

    /// Exponents with the two coordinates swapped (m = 2).
    pub fn swapped(&self) -> MultiIndex {
        MultiIndex(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Canonical degree `a_1 + ... + a_m` of `x^(a)`.
pub fn deg_o(a: &MultiIndex) -> i64 {
    a.0.iter().map(|&x| x as i64).sum()
}

/// `x^(a) x^(b)` as a coefficient in GF(p) and exponent, or `None` when zero.
pub fn monomial_product(shape: &Shape, a: &MultiIndex, b: &MultiIndex) -> Option<(u32, MultiIndex)> {
    let p = shape.p();
    let mut sum = Vec::with_capacity(a.len());
    let mut coeff = 1u32;
    for ((&x, &y), &t) in a.0.iter().zip(&b.0).zip(shape.tau()) {
        let s = x + y;
        if s > t {
            return None;
        }
        coeff = coeff * binom_mod_p(s as u64, x as u64, p) % p;
        if coeff == 0 {
            return None;
        }
        sum.push(s);
    }
    Some((coeff, MultiIndex(sum)))
}

/// An element `sum alpha(a) x^(a)` of O(m; n) in canonical sparse form.
#[derive(Clone)]
pub struct DividedPowerPoly {
    shape: Shape,
    field: GaloisField,
    terms: BTreeMap<MultiIndex, Fq>,
}

impl PartialEq for DividedPowerPoly {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.field == other.field && self.terms == other.terms
    }
}

impl Eq for DividedPowerPoly {}

impl fmt::Debug for DividedPowerPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(a, &c)| format!("{}*x^{}", self.field.display(c), a)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl DividedPowerPoly {
    pub fn zero(shape: &Shape, field: &GaloisField) -> Self {
        DividedPowerPoly { shape: shape.clone(), field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn one(shape: &Shape, field: &GaloisField) -> Self {
        Self::monomial(shape, field, shape.zero_index(), Fq::ONE)
    }

    pub fn monomial(shape: &Shape, field: &GaloisField, a: MultiIndex, coeff: Fq) -> Self {
        let mut p = Self::zero(shape, field);
        if !coeff.is_zero() {
            p.terms.insert(a, coeff);
        }
        p
    }

    /// `x^(a)` with coefficient one; rejects out-of-range exponents.
    pub fn basis_element(shape: &Shape, field: &GaloisField, a: &[u32]) -> Result<Self> {
        Ok(Self::monomial(shape, field, MultiIndex::new(shape, a)?, Fq::ONE))
    }

    /// `x_i = x^(eps_i)` (0-based axis).
    pub fn variable(shape: &Shape, field: &GaloisField, axis: usize) -> Self {
        Self::monomial(shape, field, shape.unit(axis), Fq::ONE)
    }

    pub fn from_terms(shape: &Shape, field: &GaloisField, terms: impl IntoIterator<Item = (MultiIndex, Fq)>) -> Self {
        let mut p = Self::zero(shape, field);
        for (a, c) in terms {
            p.add_term(a, c);
        }
        p
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, Fq)> {
        self.terms.iter().map(|(a, &c)| (a, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, a: &MultiIndex) -> Fq {
        self.terms.get(a).copied().unwrap_or(Fq::ZERO)
    }

    fn add_term(&mut self, a: MultiIndex, c: Fq) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        let entry = self.terms.entry(a);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch);
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, c) in other.terms() {
            out.add_term(a.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.neg(Fq::ONE))
    }

    pub fn scale(&self, c: Fq) -> Self {
        let f = &self.field;
        Self::from_terms(&self.shape, f, self.terms().map(|(a, x)| (a.clone(), f.mul(x, c))))
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(self.field.from_int(n))
    }

    /// Bilinear extension of `x^(a) x^(b) = binom(a+b, a) x^(a+b)`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let f = &self.field;
        let mut out = Self::zero(&self.shape, f);
        for (a, c) in self.terms() {
            for (b, d) in other.terms() {
                if let Some((k, s)) = monomial_product(&self.shape, a, b) {
                    out.add_term(s, f.mul(f.from_int(k as i64), f.mul(c, d)));
                }
            }
        }
        Ok(out)
    }

    /// Standard derivation `d_i x^(a) = x^(a - eps_i)` (0-based axis).
    pub fn partial(&self, axis: usize) -> Result<Self> {
        if axis >= self.shape.m() {
            return Err(Error::AxisOutOfRange { axis, m: self.shape.m() });
        }
        Ok(Self::from_terms(
            &self.shape,
            &self.field,
            self.terms().filter_map(|(a, c)| a.lowered(axis).map(|b| (b, c))),
        ))
    }

    /// Coordinates in the lexicographic basis.
    pub fn to_dense(&self) -> Vec<Fq> {
        let mut v = vec![Fq::ZERO; self.shape.dim()];
        for (a, c) in self.terms() {
            v[self.shape.index_of(a)] = c;
        }
        v
    }

    pub fn from_dense(shape: &Shape, field: &GaloisField, v: &[Fq]) -> Self {
        Self::from_terms(shape, field, v.iter().enumerate().map(|(i, &c)| (shape.multi_index(i), c)))
    }

    /// Applies a map on exponents, e.g. the coordinate swap.
    pub fn map_exponents(&self, f: impl Fn(&MultiIndex) -> MultiIndex) -> Self {
        Self::from_terms(&self.shape, &self.field, self.terms().map(|(a, c)| (f(a), c)))
    }
}

/// Multiplication table of O(m; n) in the lexicographic basis.
pub fn structure_table(shape: &Shape, field: &GaloisField) -> StructureTable {
    let basis = shape.basis();
    StructureTable::build(AlgebraKind::DividedPower, field, shape.dim(), |i, j| {
        match monomial_product(shape, &basis[i], &basis[j]) {
            Some((c, s)) => vec![(shape.index_of(&s), field.from_int(c as i64))],
            None => Vec::new(),
        }
    })
}
