//! The Witt algebra W(m; n) of special derivations `sum f_i d_i` of O(m; n),
//! the divergence, and the tilde copy of W(2; n).

use std::fmt;

use crate::divided_power::{deg_o, DividedPowerPoly, MultiIndex, Shape};
use crate::error::{Error, Result};
use crate::field::{Fq, GaloisField};
use crate::structure::{AlgebraKind, StructureTable};

/// `f_1 d_1 + ... + f_m d_m`.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    components: Vec<DividedPowerPoly>,
}

/// `f_1 d~_1 + f_2 d~_2`, an element of W~(2; n).
#[derive(Clone, PartialEq, Eq)]
pub struct TildeField {
    components: [DividedPowerPoly; 2],
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().enumerate().map(|(i, c)| format!("({c:?})d{}", i + 1)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for TildeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})d~1 + ({:?})d~2", self.components[0], self.components[1])
    }
}

fn require_two(shape: &Shape) -> Result<()> {
    if shape.m() != 2 {
        return Err(Error::RequiresTwoVariables(shape.m()));
    }
    Ok(())
}

impl VectorField {
    pub fn zero(shape: &Shape, field: &GaloisField) -> Self {
        VectorField { components: (0..shape.m()).map(|_| DividedPowerPoly::zero(shape, field)).collect() }
    }

    pub fn new(components: Vec<DividedPowerPoly>) -> Result<Self> {
        let first = components.first().ok_or_else(|| Error::InvalidShape("no components".into()))?;
        if components.len() != first.shape().m() {
            return Err(Error::InvalidShape(format!("{} components for m = {}", components.len(), first.shape().m())));
        }
        for c in &components[1..] {
            if c.shape() != first.shape() {
                return Err(Error::ShapeMismatch);
            }
            if c.field() != first.field() {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(VectorField { components })
    }

    /// `f d_axis`.
    pub fn single(f: DividedPowerPoly, axis: usize) -> Result<Self> {
        let m = f.shape().m();
        if axis >= m {
            return Err(Error::AxisOutOfRange { axis, m });
        }
        let mut out = Self::zero(f.shape(), f.field());
        out.components[axis] = f;
        Ok(out)
    }

    /// `c x^(a) d_axis`.
    pub fn monomial(shape: &Shape, field: &GaloisField, a: MultiIndex, axis: usize, c: Fq) -> Self {
        let mut out = Self::zero(shape, field);
        out.components[axis] = DividedPowerPoly::monomial(shape, field, a, c);
        out
    }

    /// The standard derivation `d_axis`.
    pub fn partial(shape: &Shape, field: &GaloisField, axis: usize) -> Self {
        Self::monomial(shape, field, shape.zero_index(), axis, Fq::ONE)
    }

    pub fn shape(&self) -> &Shape {
        self.components[0].shape()
    }

    pub fn field(&self) -> &GaloisField {
        self.components[0].field()
    }

    pub fn components(&self) -> &[DividedPowerPoly] {
        &self.components
    }

    pub fn component(&self, axis: usize) -> &DividedPowerPoly {
        &self.components[axis]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(DividedPowerPoly::is_zero)
    }

    fn zip(&self, other: &Self, op: impl Fn(&DividedPowerPoly, &DividedPowerPoly) -> Result<DividedPowerPoly>) -> Result<Self> {
        let components = self.components.iter().zip(&other.components).map(|(a, b)| op(a, b)).collect::<Result<_>>()?;
        Ok(VectorField { components })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, DividedPowerPoly::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, DividedPowerPoly::sub)
    }

    pub fn scale(&self, c: Fq) -> Self {
        VectorField { components: self.components.iter().map(|p| p.scale(c)).collect() }
    }

    /// `g D = sum g f_i d_i`.
    pub fn mul_poly(&self, g: &DividedPowerPoly) -> Result<Self> {
        let components = self.components.iter().map(|p| g.multiply(p)).collect::<Result<_>>()?;
        Ok(VectorField { components })
    }

    /// `D(f) = sum f_i d_i(f)`.
    pub fn apply(&self, f: &DividedPowerPoly) -> Result<DividedPowerPoly> {
        let mut out = DividedPowerPoly::zero(self.shape(), self.field());
        for (i, c) in self.components.iter().enumerate() {
            out = out.add(&c.multiply(&f.partial(i)?)?)?;
        }
        Ok(out)
    }

    /// `[D, E]`, whose j-th coefficient is `D(g_j) - E(f_j)`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch);
        }
        let components = (0..self.components.len())
            .map(|j| self.apply(&other.components[j])?.sub(&other.apply(&self.components[j])?))
            .collect::<Result<_>>()?;
        Ok(VectorField { components })
    }

    /// `div(f_1 d_1 + f_2 d_2) = d_1 f_1 + d_2 f_2`.
    pub fn divergence(&self) -> Result<DividedPowerPoly> {
        require_two(self.shape())?;
        self.components[0].partial(0)?.add(&self.components[1].partial(1)?)
    }

    pub fn tilde(&self) -> Result<TildeField> {
        require_two(self.shape())?;
        Ok(TildeField { components: [self.components[0].clone(), self.components[1].clone()] })
    }

    /// Coordinates in the W basis: all `x^(a) d_1` (lex), then `x^(a) d_2`, ...
    pub fn to_dense(&self) -> Vec<Fq> {
        self.components.iter().flat_map(|c| c.to_dense()).collect()
    }

    pub fn from_dense(shape: &Shape, field: &GaloisField, v: &[Fq]) -> Self {
        let d = shape.dim();
        VectorField {
            components: (0..shape.m()).map(|i| DividedPowerPoly::from_dense(shape, field, &v[i * d..(i + 1) * d])).collect(),
        }
    }
}

/// `[D, E]` in W(m; n).
pub fn witt_bracket(d: &VectorField, e: &VectorField) -> Result<VectorField> {
    d.bracket(e)
}

impl TildeField {
    pub fn zero(shape: &Shape, field: &GaloisField) -> Result<Self> {
        require_two(shape)?;
        Ok(TildeField { components: [DividedPowerPoly::zero(shape, field), DividedPowerPoly::zero(shape, field)] })
    }

    pub fn new(f1: DividedPowerPoly, f2: DividedPowerPoly) -> Result<Self> {
        require_two(f1.shape())?;
        if f1.shape() != f2.shape() {
            return Err(Error::ShapeMismatch);
        }
        if f1.field() != f2.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(TildeField { components: [f1, f2] })
    }

    /// `d~_axis`.
    pub fn partial(shape: &Shape, field: &GaloisField, axis: usize) -> Result<Self> {
        VectorField::partial(shape, field, axis).tilde()
    }

    pub fn shape(&self) -> &Shape {
        self.components[0].shape()
    }

    pub fn field(&self) -> &GaloisField {
        self.components[0].field()
    }

    pub fn components(&self) -> &[DividedPowerPoly; 2] {
        &self.components
    }

    pub fn component(&self, axis: usize) -> &DividedPowerPoly {
        &self.components[axis]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(DividedPowerPoly::is_zero)
    }

    /// The vector field `E` with `E~ = self`.
    pub fn untilde(&self) -> VectorField {
        VectorField { components: self.components.to_vec() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(TildeField { components: [self.components[0].add(&other.components[0])?, self.components[1].add(&other.components[1])?] })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(self.field().neg(Fq::ONE)))
    }

    pub fn scale(&self, c: Fq) -> Self {
        TildeField { components: [self.components[0].scale(c), self.components[1].scale(c)] }
    }

    pub fn mul_poly(&self, g: &DividedPowerPoly) -> Result<Self> {
        Ok(TildeField { components: [g.multiply(&self.components[0])?, g.multiply(&self.components[1])?] })
    }

    pub fn to_dense(&self) -> Vec<Fq> {
        self.components.iter().flat_map(|c| c.to_dense()).collect()
    }

    pub fn from_dense(shape: &Shape, field: &GaloisField, v: &[Fq]) -> Result<Self> {
        VectorField::from_dense(shape, field, v).tilde()
    }
}

/// Canonical degree `deg_O(a) - 1` of `x^(a) d_i`.
pub fn deg_w(a: &MultiIndex) -> i64 {
    deg_o(a) - 1
}

/// Bracket table of W(m; n) in the basis `x^(a) d_i`, axis-major.
pub fn structure_table(shape: &Shape, field: &GaloisField) -> StructureTable {
    let basis = shape.basis();
    let d = shape.dim();
    let elem = |i: usize| VectorField::monomial(shape, field, basis[i % d].clone(), i / d, Fq::ONE);
    StructureTable::build(AlgebraKind::Witt, field, shape.m() * d, |i, j| {
        let v = elem(i).bracket(&elem(j)).expect("same shape");
        crate::linalg::to_sparse(&v.to_dense())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Shape, GaloisField) {
        (Shape::new(5, &[1, 1]).unwrap(), GaloisField::new(5, 1).unwrap())
    }

    fn x(s: &Shape, f: &GaloisField, a: &[u32]) -> DividedPowerPoly {
        DividedPowerPoly::basis_element(s, f, a).unwrap()
    }

    fn xd(s: &Shape, f: &GaloisField, a: &[u32], axis: usize) -> VectorField {
        VectorField::single(x(s, f, a), axis).unwrap()
    }

    #[test]
    fn apply_examples() {
        let (s, f) = setup();
        let d1 = VectorField::partial(&s, &f, 0);
        assert_eq!(d1.apply(&x(&s, &f, &[1, 0])).unwrap(), DividedPowerPoly::one(&s, &f));
        assert!(xd(&s, &f, &[1, 0], 0).apply(&x(&s, &f, &[0, 1])).unwrap().is_zero());
        let euler = xd(&s, &f, &[1, 0], 0).add(&xd(&s, &f, &[0, 1], 1)).unwrap();
        assert_eq!(euler.apply(&x(&s, &f, &[1, 1])).unwrap(), x(&s, &f, &[1, 1]).scale_int(2));
    }

    #[test]
    fn bracket_examples() {
        let (s, f) = setup();
        let d1 = VectorField::partial(&s, &f, 0);
        let x1d1 = xd(&s, &f, &[1, 0], 0);
        assert_eq!(witt_bracket(&d1, &x1d1).unwrap(), d1);
        assert!(witt_bracket(&x1d1, &x1d1).unwrap().is_zero());
        let lhs = witt_bracket(&xd(&s, &f, &[1, 0], 1), &xd(&s, &f, &[0, 1], 0)).unwrap();
        assert_eq!(lhs, x1d1.sub(&xd(&s, &f, &[0, 1], 1)).unwrap());
    }

    #[test]
    fn divergence_and_tilde() {
        let (s, f) = setup();
        assert_eq!(xd(&s, &f, &[1, 0], 0).divergence().unwrap(), DividedPowerPoly::one(&s, &f));
        assert!(VectorField::partial(&s, &f, 0).divergence().unwrap().is_zero());
        let d = xd(&s, &f, &[2, 0], 0).add(&xd(&s, &f, &[1, 1], 1)).unwrap();
        assert_eq!(d.divergence().unwrap(), x(&s, &f, &[1, 0]).scale_int(2));

        assert_eq!(VectorField::partial(&s, &f, 0).tilde().unwrap(), TildeField::partial(&s, &f, 0).unwrap());
        assert!(VectorField::zero(&s, &f).tilde().unwrap().is_zero());
        let euler = xd(&s, &f, &[1, 0], 0).add(&xd(&s, &f, &[0, 1], 1)).unwrap();
        let t = euler.tilde().unwrap();
        assert_eq!(t.component(0), &x(&s, &f, &[1, 0]));
        assert_eq!(t.untilde(), euler);

        let s3 = Shape::new(5, &[1, 1, 1]).unwrap();
        let v = VectorField::partial(&s3, &f, 2);
        assert_eq!(v.divergence().unwrap_err(), Error::RequiresTwoVariables(3));
        assert!(v.tilde().is_err());
    }

    #[test]
    fn degrees() {
        let (s, _) = setup();
        assert_eq!(deg_w(&s.zero_index()), -1);
        assert_eq!(deg_w(&s.unit(0)), 0);
        assert_eq!(deg_w(&s.top()), 7);
    }

    #[test]
    fn witt_table_is_lie_and_graded() {
        let (s, f) = setup();
        let t = structure_table(&s, &f);
        assert_eq!(t.dim(), 50);
        assert_eq!(t.anticommutativity_failure(), None);
        assert_eq!(t.jacobi_failure(), None);
        let basis = s.basis();
        let deg = |i: usize| deg_w(&basis[i % 25]);
        for i in 0..50 {
            for j in 0..50 {
                for &(k, _) in t.product(i, j) {
                    assert_eq!(deg(k as usize), deg(i) + deg(j));
                }
            }
        }
    }

    #[test]
    fn bracket_is_commutator_of_derivations() {
        let (s, f) = setup();
        let polys: Vec<DividedPowerPoly> = s.basis().into_iter().map(|a| DividedPowerPoly::monomial(&s, &f, a, Fq::ONE)).collect();
        let fields: Vec<VectorField> = (0..2).flat_map(|ax| polys.iter().map(move |p| VectorField::single(p.clone(), ax).unwrap())).collect();
        for d in &fields {
            for e in &fields {
                let de = d.bracket(e).unwrap();
                for g in &polys {
                    let lhs = de.apply(g).unwrap();
                    let rhs = d.apply(&e.apply(g).unwrap()).unwrap().sub(&e.apply(&d.apply(g).unwrap()).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
                let div = de.divergence().unwrap();
                let rhs = d.apply(&e.divergence().unwrap()).unwrap().sub(&e.apply(&d.divergence().unwrap()).unwrap()).unwrap();
                assert_eq!(div, rhs);
            }
        }
    }
}
