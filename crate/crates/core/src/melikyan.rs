//! The Melikyan algebra M(2; n) = O(2; n) + W(2; n) + W~(2; n) in characteristic 5.
//!
//! Bracket rules, for `D, E` in W and `f, f_i, g_i` in O:
//!
//! ```text
//! [D, E~]  = [D, E]~ + 2 div(D) E~
//! [D, f]   = D(f) - 2 div(D) f
//! [f, E~]  = f E
//! [f1, f2] = 2 (f1 d1 f2 - f2 d1 f1) d~2 + 2 (f2 d2 f1 - f1 d2 f2) d~1
//! [f1 d~1 + f2 d~2, g1 d~1 + g2 d~2] = f1 g2 - f2 g1
//! ```
//!
//! `[D, E]` is the Witt bracket and the remaining argument orders follow by
//! antisymmetry.

use std::fmt;
use std::sync::Arc;

use crate::divided_power::{deg_o, DividedPowerPoly, MultiIndex, Shape};
use crate::error::{Error, Result};
use crate::field::{Fq, GaloisField};
use crate::linalg::SparseVec;
use crate::structure::{AlgebraKind, StructureTable};
use crate::witt::{TildeField, VectorField};

/// The five blocks of the canonical basis, in basis order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    O,
    W1,
    W2,
    T1,
    T2,
}

impl Block {
    pub const ALL: [Block; 5] = [Block::O, Block::W1, Block::W2, Block::T1, Block::T2];

    pub fn position(self) -> usize {
        self as usize
    }

    pub fn is_w(self) -> bool {
        matches!(self, Block::W1 | Block::W2)
    }

    pub fn is_tilde(self) -> bool {
        matches!(self, Block::T1 | Block::T2)
    }

    /// 0-based derivation axis for W and W~ blocks.
    pub fn axis(self) -> Option<usize> {
        match self {
            Block::O => None,
            Block::W1 | Block::T1 => Some(0),
            Block::W2 | Block::T2 => Some(1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Block::O => "O",
            Block::W1 => "W1",
            Block::W2 => "W2",
            Block::T1 => "Wt1",
            Block::T2 => "Wt2",
        }
    }
}

/// `x^(a)`, `x^(a) d_i` or `x^(a) d~_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalBasisIndex {
    pub block: Block,
    pub index: MultiIndex,
}

impl fmt::Display for CanonicalBasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.index.entries();
        match self.block {
            Block::O => write!(f, "x^({},{})", a[0], a[1]),
            b => {
                let t = if b.is_tilde() { "~" } else { "" };
                write!(f, "x^({},{})d{}{}", a[0], a[1], t, b.axis().unwrap() + 1)
            }
        }
    }
}

fn mul(a: (i64, i64), k: i64) -> (i64, i64) {
    (a.0 * k, a.1 * k)
}

/// Degree in the Z^2-grading whose W part is `M_{3a} = span{x^(a + e_i) d_i}`.
pub fn deg_zz(b: &CanonicalBasisIndex) -> (i64, i64) {
    let a = b.index.entries();
    let a = (a[0] as i64, a[1] as i64);
    let shifted = |axis: usize| mul(if axis == 0 { (a.0 - 1, a.1) } else { (a.0, a.1 - 1) }, 3);
    match b.block {
        Block::O => (3 * a.0 - 1, 3 * a.1 - 1),
        Block::W1 => shifted(0),
        Block::W2 => shifted(1),
        Block::T1 => {
            let (u, v) = shifted(0);
            (u + 1, v + 1)
        }
        Block::T2 => {
            let (u, v) = shifted(1);
            (u + 1, v + 1)
        }
    }
}

/// `phi(i, j) = (3i + j, j)`.
pub fn phi_m(ij: (i64, i64)) -> (i64, i64) {
    (3 * ij.0 + ij.1, ij.1)
}

/// Degree in the Z^2-grading generated by its support: the preimage of
/// [`deg_zz`] under [`phi_m`].
pub fn deg_standard(b: &CanonicalBasisIndex) -> (i64, i64) {
    let (u, v) = deg_zz(b);
    assert_eq!((u - v).rem_euclid(3), 0, "degree {:?} of {b} is not in the image", (u, v));
    ((u - v) / 3, v)
}

/// Canonical Z-degree: `3 deg_W`, `3 deg_W + 2`, `3 deg_O - 2` per block.
pub fn deg_canonical(b: &CanonicalBasisIndex) -> i64 {
    let d = deg_o(&b.index);
    match b.block {
        Block::O => 3 * d - 2,
        Block::W1 | Block::W2 => 3 * (d - 1),
        Block::T1 | Block::T2 => 3 * (d - 1) + 2,
    }
}

/// An element `f + D + E~` of M(2; n).
#[derive(Clone, PartialEq, Eq)]
pub struct MelikyanElement {
    o: DividedPowerPoly,
    w: VectorField,
    wt: TildeField,
}

impl fmt::Debug for MelikyanElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?} | {:?} | {:?}]", self.o, self.w, self.wt)
    }
}

fn check_melikyan_shape(shape: &Shape) -> Result<()> {
    if shape.p() != 5 {
        return Err(Error::RequiresCharacteristicFive(shape.p()));
    }
    if shape.m() != 2 {
        return Err(Error::RequiresTwoVariables(shape.m()));
    }
    Ok(())
}

impl MelikyanElement {
    pub fn new(o: DividedPowerPoly, w: VectorField, wt: TildeField) -> Result<Self> {
        check_melikyan_shape(o.shape())?;
        if o.shape() != w.shape() || o.shape() != wt.shape() {
            return Err(Error::ShapeMismatch);
        }
        if o.field() != w.field() || o.field() != wt.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(MelikyanElement { o, w, wt })
    }

    pub fn zero(shape: &Shape, field: &GaloisField) -> Result<Self> {
        check_melikyan_shape(shape)?;
        Ok(MelikyanElement {
            o: DividedPowerPoly::zero(shape, field),
            w: VectorField::zero(shape, field),
            wt: TildeField::zero(shape, field)?,
        })
    }

    pub fn from_o(f: DividedPowerPoly) -> Result<Self> {
        let z = Self::zero(f.shape(), f.field())?;
        Ok(MelikyanElement { o: f, ..z })
    }

    pub fn from_w(d: VectorField) -> Result<Self> {
        let z = Self::zero(d.shape(), d.field())?;
        Ok(MelikyanElement { w: d, ..z })
    }

    pub fn from_wt(e: TildeField) -> Result<Self> {
        let z = Self::zero(e.shape(), e.field())?;
        Ok(MelikyanElement { wt: e, ..z })
    }

    pub fn basis_element(shape: &Shape, field: &GaloisField, b: &CanonicalBasisIndex) -> Result<Self> {
        let mono = DividedPowerPoly::monomial(shape, field, b.index.clone(), Fq::ONE);
        match b.block {
            Block::O => Self::from_o(mono),
            Block::W1 | Block::W2 => Self::from_w(VectorField::single(mono, b.block.axis().unwrap())?),
            Block::T1 | Block::T2 => Self::from_wt(VectorField::single(mono, b.block.axis().unwrap())?.tilde()?),
        }
    }

    pub fn shape(&self) -> &Shape {
        self.o.shape()
    }

    pub fn field(&self) -> &GaloisField {
        self.o.field()
    }

    pub fn o_part(&self) -> &DividedPowerPoly {
        &self.o
    }

    pub fn w_part(&self) -> &VectorField {
        &self.w
    }

    pub fn wt_part(&self) -> &TildeField {
        &self.wt
    }

    pub fn is_zero(&self) -> bool {
        self.o.is_zero() && self.w.is_zero() && self.wt.is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(MelikyanElement { o: self.o.add(&other.o)?, w: self.w.add(&other.w)?, wt: self.wt.add(&other.wt)? })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field().neg(Fq::ONE))
    }

    pub fn scale(&self, c: Fq) -> Self {
        MelikyanElement { o: self.o.scale(c), w: self.w.scale(c), wt: self.wt.scale(c) }
    }

    /// Coordinates in the canonical basis (O, W d1, W d2, W~ d~1, W~ d~2).
    pub fn to_dense(&self) -> Vec<Fq> {
        let mut v = self.o.to_dense();
        v.extend(self.w.to_dense());
        v.extend(self.wt.to_dense());
        v
    }

    pub fn from_dense(shape: &Shape, field: &GaloisField, v: &[Fq]) -> Result<Self> {
        check_melikyan_shape(shape)?;
        let d = shape.dim();
        if v.len() != 5 * d {
            return Err(Error::InvalidShape(format!("expected {} coordinates, got {}", 5 * d, v.len())));
        }
        Ok(MelikyanElement {
            o: DividedPowerPoly::from_dense(shape, field, &v[..d]),
            w: VectorField::from_dense(shape, field, &v[d..3 * d]),
            wt: TildeField::from_dense(shape, field, &v[3 * d..])?,
        })
    }
}

fn two(field: &GaloisField) -> Fq {
    field.from_int(2)
}

/// `[D, f] = D(f) - 2 div(D) f`.
fn bracket_w_o(d: &VectorField, f: &DividedPowerPoly) -> Result<DividedPowerPoly> {
    let t = d.divergence()?.multiply(f)?.scale(two(f.field()));
    d.apply(f)?.sub(&t)
}

/// `[D, E~] = [D, E]~ + 2 div(D) E~`.
fn bracket_w_t(d: &VectorField, e: &TildeField) -> Result<TildeField> {
    let t = e.mul_poly(&d.divergence()?)?.scale(two(d.field()));
    d.bracket(&e.untilde())?.tilde()?.add(&t)
}

/// `[f, E~] = f E`.
fn bracket_o_t(f: &DividedPowerPoly, e: &TildeField) -> Result<VectorField> {
    e.untilde().mul_poly(f)
}

/// `[f1, f2] = 2 (f1 d1 f2 - f2 d1 f1) d~2 + 2 (f2 d2 f1 - f1 d2 f2) d~1`.
fn bracket_o_o(f1: &DividedPowerPoly, f2: &DividedPowerPoly) -> Result<TildeField> {
    let c2 = f1.multiply(&f2.partial(0)?)?.sub(&f2.multiply(&f1.partial(0)?)?)?;
    let c1 = f2.multiply(&f1.partial(1)?)?.sub(&f1.multiply(&f2.partial(1)?)?)?;
    let t = two(f1.field());
    TildeField::new(c1.scale(t), c2.scale(t))
}

/// `[f1 d~1 + f2 d~2, g1 d~1 + g2 d~2] = f1 g2 - f2 g1`.
fn bracket_t_t(e: &TildeField, g: &TildeField) -> Result<DividedPowerPoly> {
    e.component(0).multiply(g.component(1))?.sub(&e.component(1).multiply(g.component(0))?)
}

/// The Melikyan bracket `[y, z]`.
pub fn m_bracket(y: &MelikyanElement, z: &MelikyanElement) -> Result<MelikyanElement> {
    check_melikyan_shape(y.shape())?;
    if y.shape() != z.shape() {
        return Err(Error::ShapeMismatch);
    }
    if y.field() != z.field() {
        return Err(Error::FieldMismatch);
    }
    let mut out = MelikyanElement::zero(y.shape(), y.field())?;

    // O-valued terms: [D, g] - [E, f] + [f~, g~]
    out.o = out.o.add(&bracket_w_o(&y.w, &z.o)?)?;
    out.o = out.o.sub(&bracket_w_o(&z.w, &y.o)?)?;
    out.o = out.o.add(&bracket_t_t(&y.wt, &z.wt)?)?;

    // W-valued terms: [D, E] + [f, G~] - [g, F~]
    out.w = out.w.add(&y.w.bracket(&z.w)?)?;
    out.w = out.w.add(&bracket_o_t(&y.o, &z.wt)?)?;
    out.w = out.w.sub(&bracket_o_t(&z.o, &y.wt)?)?;

    // W~-valued terms: [D, G~] - [E, F~] + [f, g]
    out.wt = out.wt.add(&bracket_w_t(&y.w, &z.wt)?)?;
    out.wt = out.wt.sub(&bracket_w_t(&z.w, &y.wt)?)?;
    out.wt = out.wt.add(&bracket_o_o(&y.o, &z.o)?)?;

    Ok(out)
}

struct AlgebraData {
    shape: Shape,
    field: GaloisField,
    basis: Vec<CanonicalBasisIndex>,
    table: StructureTable,
}

/// M(2; n) over a fixed field together with its structure-constant table.
#[derive(Clone)]
pub struct MelikyanAlgebra(Arc<AlgebraData>);

impl fmt::Debug for MelikyanAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M(2;{:?}) over GF({}^{})", self.n(), self.field().characteristic(), self.field().degree())
    }
}

impl PartialEq for MelikyanAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.shape == other.0.shape && self.0.field == other.0.field)
    }
}

impl Eq for MelikyanAlgebra {}

impl MelikyanAlgebra {
    pub fn new(n: [u32; 2], field: &GaloisField) -> Result<Self> {
        let shape = Shape::new(field.characteristic(), &n)?;
        check_melikyan_shape(&shape)?;
        let d = shape.dim();
        let monomials = shape.basis();
        let basis: Vec<CanonicalBasisIndex> = Block::ALL
            .iter()
            .flat_map(|&block| monomials.iter().map(move |a| CanonicalBasisIndex { block, index: a.clone() }))
            .collect();
        let elements: Vec<MelikyanElement> =
            basis.iter().map(|b| MelikyanElement::basis_element(&shape, field, b)).collect::<Result<_>>()?;
        let table = StructureTable::build(AlgebraKind::Melikyan, field, 5 * d, |i, j| {
            let v = m_bracket(&elements[i], &elements[j]).expect("basis elements share the shape");
            crate::linalg::to_sparse(&v.to_dense())
        });
        Ok(MelikyanAlgebra(Arc::new(AlgebraData { shape, field: field.clone(), basis, table })))
    }

    pub fn shape(&self) -> &Shape {
        &self.0.shape
    }

    pub fn n(&self) -> [u32; 2] {
        [self.0.shape.n()[0], self.0.shape.n()[1]]
    }

    pub fn field(&self) -> &GaloisField {
        &self.0.field
    }

    pub fn dim(&self) -> usize {
        self.0.basis.len()
    }

    /// Dimension of O(2; n), the size of each block.
    pub fn block_dim(&self) -> usize {
        self.0.shape.dim()
    }

    pub fn table(&self) -> &StructureTable {
        &self.0.table
    }

    pub fn basis(&self) -> &[CanonicalBasisIndex] {
        &self.0.basis
    }

    pub fn basis_index(&self, i: usize) -> &CanonicalBasisIndex {
        &self.0.basis[i]
    }

    pub fn index_of(&self, b: &CanonicalBasisIndex) -> usize {
        b.block.position() * self.block_dim() + self.0.shape.index_of(&b.index)
    }

    /// Index of the basis element in `block` with exponent `a`.
    pub fn index(&self, block: Block, a: [u32; 2]) -> Result<usize> {
        let index = MultiIndex::new(&self.0.shape, &a)?;
        Ok(self.index_of(&CanonicalBasisIndex { block, index }))
    }

    /// Canonical basis positions of the W block.
    pub fn w_indices(&self) -> std::ops::Range<usize> {
        self.block_dim()..3 * self.block_dim()
    }

    pub fn element(&self, i: usize) -> MelikyanElement {
        MelikyanElement::basis_element(&self.0.shape, &self.0.field, &self.0.basis[i]).expect("valid basis index")
    }

    pub fn from_dense(&self, v: &[Fq]) -> Result<MelikyanElement> {
        MelikyanElement::from_dense(&self.0.shape, &self.0.field, v)
    }

    pub fn check_element(&self, y: &MelikyanElement) -> Result<()> {
        if y.shape() != self.shape() {
            return Err(Error::ShapeMismatch);
        }
        if y.field() != self.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Bracket through the cached table.
    pub fn bracket(&self, y: &MelikyanElement, z: &MelikyanElement) -> Result<MelikyanElement> {
        self.check_element(y)?;
        self.check_element(z)?;
        let v = self.0.table.multiply(&y.to_dense(), &z.to_dense());
        self.from_dense(&v)
    }

    pub fn bracket_sparse(&self, y: &[(usize, Fq)], z: &[(usize, Fq)]) -> SparseVec {
        self.0.table.multiply_sparse(y, z)
    }

    pub fn deg_zz(&self, i: usize) -> (i64, i64) {
        deg_zz(&self.0.basis[i])
    }

    pub fn deg_standard(&self, i: usize) -> (i64, i64) {
        deg_standard(&self.0.basis[i])
    }

    pub fn deg_canonical(&self, i: usize) -> i64 {
        deg_canonical(&self.0.basis[i])
    }

    pub fn canonical_degree_range(&self) -> (i64, i64) {
        let degs = (0..self.dim()).map(|i| self.deg_canonical(i));
        (degs.clone().min().unwrap(), degs.max().unwrap())
    }

    /// Basis elements of canonical degree at least `i`.
    pub fn filtration_component(&self, i: i64) -> Vec<CanonicalBasisIndex> {
        self.0.basis.iter().filter(|b| deg_canonical(b) >= i).cloned().collect()
    }

    /// Dimension of the ideal generated by the `i`-th basis element.
    pub fn ideal_closure_dim(&self, i: usize) -> usize {
        self.0.table.ideal_closure_dim(&crate::linalg::unit_vector(self.dim(), i))
    }
}
