//! Group gradings of M(2; n).
//!
//! A [`Grading`] is a list of labelled subspaces (given by spanning bases in
//! canonical coordinates) whose direct sum is the whole algebra. A
//! [`MonomialGrading`] assigns a label to every canonical basis vector and is
//! the fast path for everything built from degree functions.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::automorphism::Endomorphism;
use crate::error::{Error, Result};
use crate::field::{Fq, GaloisField};
use crate::group::{subgroup_generated, AbelianGroup, GroupElement, GroupHom, Subgroup};
use crate::intmat::{smith_normal_form, IntMatrix};
use crate::linalg::{to_sparse, Echelon, Matrix, SparseVec};
use crate::melikyan::MelikyanAlgebra;

/// One homogeneous component `A_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub label: GroupElement,
    pub basis: Vec<Vec<Fq>>,
}

/// A bracket `[u, v]` with `u` in `A_left`, `v` in `A_right` that leaves
/// `A_{left + right}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingWitness {
    pub left: GroupElement,
    pub right: GroupElement,
    pub u: SparseVec,
    pub v: SparseVec,
    pub bracket: SparseVec,
}

impl std::fmt::Display for GradingWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[u, v] not in component {} + {}: u = {:?}, v = {:?}", self.left, self.right, self.u, self.v)
    }
}

#[derive(Clone)]
pub struct Grading {
    algebra: MelikyanAlgebra,
    group: AbelianGroup,
    components: Vec<Component>,
    /// Inverse of the matrix whose columns are all component vectors in order.
    coordinates: OnceLock<Vec<SparseVec>>,
}

impl std::fmt::Debug for Grading {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Grading(by {}, {} components)", self.group, self.components.len())
    }
}

impl Grading {
    /// Validates labels, drops empty components, and checks that the
    /// components form a direct sum decomposition.
    pub fn new(algebra: &MelikyanAlgebra, group: &AbelianGroup, components: Vec<Component>) -> Result<Self> {
        let dim = algebra.dim();
        let mut seen = HashMap::new();
        let mut kept = Vec::new();
        let mut total = 0;
        for c in components {
            group.check(&c.label).map_err(|_| Error::MalformedGrading(format!("label {} not in {group}", c.label)))?;
            if c.basis.iter().any(|v| v.len() != dim) {
                return Err(Error::MalformedGrading(format!("vector of wrong length in component {}", c.label)));
            }
            if c.basis.is_empty() {
                continue;
            }
            if seen.insert(c.label.clone(), ()).is_some() {
                return Err(Error::MalformedGrading(format!("label {} used twice", c.label)));
            }
            total += c.basis.len();
            kept.push(c);
        }
        if total != dim {
            return Err(Error::MalformedGrading(format!("components have total dimension {total}, expected {dim}")));
        }
        let g = Grading { algebra: algebra.clone(), group: group.clone(), components: kept, coordinates: OnceLock::new() };
        if g.is_monomial() {
            let mut hit = vec![false; dim];
            for c in &g.components {
                for v in &c.basis {
                    let i = v.iter().position(|x| !x.is_zero()).unwrap();
                    if std::mem::replace(&mut hit[i], true) {
                        return Err(Error::MalformedGrading("components are not independent".into()));
                    }
                }
            }
        } else {
            let p = Matrix::from_columns(algebra.field(), dim, &g.all_vectors());
            let inv = p.inverse().ok_or_else(|| Error::MalformedGrading("components are not independent".into()))?;
            let _ = g.coordinates.set(inv.sparse_columns());
        }
        Ok(g)
    }

    /// The grading with the single component `A_e = A`.
    pub fn trivial(algebra: &MelikyanAlgebra) -> Self {
        let dim = algebra.dim();
        let basis = (0..dim).map(|i| crate::linalg::unit_vector(dim, i)).collect();
        let g = AbelianGroup::trivial();
        Grading::new(algebra, &g, vec![Component { label: g.zero(), basis }]).expect("trivial grading is valid")
    }

    pub fn algebra(&self) -> &MelikyanAlgebra {
        &self.algebra
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn field(&self) -> &GaloisField {
        self.algebra.field()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, label: &GroupElement) -> Option<&Component> {
        self.components.iter().find(|c| &c.label == label)
    }

    /// Labels of the nonzero components.
    pub fn support(&self) -> Vec<GroupElement> {
        self.components.iter().map(|c| c.label.clone()).collect()
    }

    fn all_vectors(&self) -> Vec<Vec<Fq>> {
        self.components.iter().flat_map(|c| c.basis.iter().cloned()).collect()
    }

    /// Whether every component vector is a scaled canonical basis vector.
    pub fn is_monomial(&self) -> bool {
        self.components.iter().all(|c| c.basis.iter().all(|v| v.iter().filter(|x| !x.is_zero()).count() == 1))
    }

    fn offsets(&self) -> Vec<usize> {
        let mut out = vec![0];
        for c in &self.components {
            out.push(out.last().unwrap() + c.basis.len());
        }
        out
    }

    fn coordinate_columns(&self) -> &[SparseVec] {
        self.coordinates.get_or_init(|| {
            // monomial case: the inverse of a scaled permutation matrix
            let f = self.field();
            let mut cols = vec![Vec::new(); self.algebra.dim()];
            for (pos, v) in self.all_vectors().iter().enumerate() {
                let i = v.iter().position(|x| !x.is_zero()).unwrap();
                cols[i] = vec![(pos, f.inv(v[i]))];
            }
            cols
        })
    }

    /// Coordinates of `v` against the concatenated component bases.
    pub fn coordinates(&self, v: &[(usize, Fq)]) -> Vec<Fq> {
        let f = self.field();
        let cols = self.coordinate_columns();
        let mut out = vec![Fq::ZERO; self.algebra.dim()];
        for &(k, x) in v {
            for &(r, c) in &cols[k] {
                out[r] = f.add(out[r], f.mul(x, c));
            }
        }
        out
    }

    /// Components whose coordinates in `v` are nonzero.
    pub fn components_touched(&self, v: &[(usize, Fq)]) -> Vec<usize> {
        let c = self.coordinates(v);
        let off = self.offsets();
        (0..self.components.len()).filter(|&t| c[off[t]..off[t + 1]].iter().any(|x| !x.is_zero())).collect()
    }

    /// Checks `[A_g, A_h] ⊂ A_{g+h}` on all pairs of component basis vectors.
    pub fn verify(&self) -> std::result::Result<(), Box<GradingWitness>> {
        let index: HashMap<&GroupElement, usize> = self.components.iter().enumerate().map(|(i, c)| (&c.label, i)).collect();
        let off = self.offsets();
        let sparse: Vec<Vec<SparseVec>> = self.components.iter().map(|c| c.basis.iter().map(|v| to_sparse(v)).collect()).collect();
        let pairs: Vec<(usize, usize)> = (0..self.components.len()).flat_map(|a| (0..self.components.len()).map(move |b| (a, b))).collect();
        let _ = self.coordinate_columns();
        let failure = pairs.par_iter().find_map_first(|&(a, b)| {
            let target = self.group.add(&self.components[a].label, &self.components[b].label);
            let t = index.get(&target).copied();
            for u in &sparse[a] {
                for v in &sparse[b] {
                    let w = self.algebra.bracket_sparse(u, v);
                    if w.is_empty() {
                        continue;
                    }
                    let c = self.coordinates(&w);
                    let outside = c.iter().enumerate().any(|(k, x)| !x.is_zero() && t.is_none_or(|t| k < off[t] || k >= off[t + 1]));
                    if outside {
                        return Some(GradingWitness {
                            left: self.components[a].label.clone(),
                            right: self.components[b].label.clone(),
                            u: u.clone(),
                            v: v.clone(),
                            bracket: w,
                        });
                    }
                }
            }
            None
        });
        match failure {
            Some(w) => Err(Box::new(w)),
            None => Ok(()),
        }
    }

    /// `A_h = ⊕_{phi(g) = h} A_g`.
    pub fn coarsen(&self, phi: &GroupHom) -> Result<Grading> {
        if phi.domain() != &self.group {
            return Err(Error::GroupMismatch);
        }
        let mut merged: BTreeMap<GroupElement, Vec<Vec<Fq>>> = BTreeMap::new();
        for c in &self.components {
            merged.entry(phi.apply(&c.label)?).or_default().extend(c.basis.iter().cloned());
        }
        let components = merged.into_iter().map(|(label, basis)| Component { label, basis }).collect();
        Grading::new(&self.algebra, phi.codomain(), components)
    }

    /// `Psi(A_g)` for every component.
    pub fn apply_automorphism(&self, psi: &Endomorphism) -> Result<Grading> {
        if psi.algebra() != &self.algebra {
            return Err(Error::WrongAlgebra { expected: format!("{:?}", self.algebra), got: format!("{:?}", psi.algebra()) });
        }
        if !psi.is_invertible() {
            return Err(Error::Singular);
        }
        let m = psi.matrix();
        let components = self
            .components
            .iter()
            .map(|c| Component { label: c.label.clone(), basis: c.basis.iter().map(|v| m.mul_vec(v)).collect() })
            .collect();
        Grading::new(&self.algebra, &self.group, components)
    }

    fn spans(&self) -> Vec<Echelon> {
        let dim = self.algebra.dim();
        self.components.iter().map(|c| Echelon::from_vectors(self.field(), dim, &c.basis)).collect()
    }

    /// Same group, same labels and the same subspace for every label.
    pub fn same_as(&self, other: &Grading) -> bool {
        self.group == other.group && self.relabeling_to(other).is_some_and(|m| m.iter().all(|(a, b)| a == b))
    }

    /// If both gradings have the same components as subspaces, the label
    /// correspondence `self label -> other label`.
    pub fn relabeling_to(&self, other: &Grading) -> Option<Vec<(GroupElement, GroupElement)>> {
        if self.algebra != other.algebra || self.components.len() != other.components.len() {
            return None;
        }
        let mine = self.spans();
        let theirs = other.spans();
        let mut used = vec![false; theirs.len()];
        let mut out = Vec::new();
        for (c, e) in self.components.iter().zip(&mine) {
            let j = (0..theirs.len()).find(|&j| !used[j] && theirs[j].rank() == e.rank() && e.same_span(&theirs[j]))?;
            used[j] = true;
            out.push((c.label.clone(), other.components[j].label.clone()));
        }
        Some(out)
    }

    /// Index of the component of `other` containing each component of `self`.
    fn containment(&self, other: &Grading) -> Result<Vec<usize>> {
        self.components
            .iter()
            .map(|c| {
                let mut hit: Option<usize> = None;
                for v in &c.basis {
                    let touched = other.components_touched(&to_sparse(v));
                    match (touched.as_slice(), hit) {
                        ([t], None) => hit = Some(*t),
                        ([t], Some(h)) if *t == h => {}
                        _ => return Err(Error::NotRefinement { label: c.label.to_string() }),
                    }
                }
                hit.ok_or_else(|| Error::NotRefinement { label: c.label.to_string() })
            })
            .collect()
    }

    /// Whether every component of `self` lies in a component of `other`.
    pub fn refines(&self, other: &Grading) -> bool {
        self.algebra == other.algebra && self.containment(other).is_ok()
    }
}

/// A grading that labels every canonical basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialGrading {
    algebra: MelikyanAlgebra,
    group: AbelianGroup,
    degrees: Vec<GroupElement>,
}

impl MonomialGrading {
    pub fn new(algebra: &MelikyanAlgebra, group: &AbelianGroup, degrees: Vec<GroupElement>) -> Result<Self> {
        if degrees.len() != algebra.dim() {
            return Err(Error::MalformedGrading(format!("{} degrees for dimension {}", degrees.len(), algebra.dim())));
        }
        for d in &degrees {
            group.check(d).map_err(|_| Error::MalformedGrading(format!("label {d} not in {group}")))?;
        }
        Ok(MonomialGrading { algebra: algebra.clone(), group: group.clone(), degrees })
    }

    pub fn algebra(&self) -> &MelikyanAlgebra {
        &self.algebra
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn degrees(&self) -> &[GroupElement] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> &GroupElement {
        &self.degrees[i]
    }

    /// Distinct labels in first-occurrence order.
    pub fn support(&self) -> Vec<GroupElement> {
        let mut seen = std::collections::HashSet::new();
        self.degrees.iter().filter(|d| seen.insert((*d).clone())).cloned().collect()
    }

    /// Checks every basis pair: all terms of `[e_i, e_j]` have degree `deg i + deg j`.
    pub fn verify(&self) -> std::result::Result<(), Box<GradingWitness>> {
        let table = self.algebra.table();
        let d = self.algebra.dim();
        let failure = (0..d).into_par_iter().find_map_first(|i| {
            (0..d).find_map(|j| {
                let prod = table.product(i, j);
                if prod.is_empty() {
                    return None;
                }
                let target = self.group.add(&self.degrees[i], &self.degrees[j]);
                prod.iter().any(|&(k, _)| self.degrees[k as usize] != target).then(|| GradingWitness {
                    left: self.degrees[i].clone(),
                    right: self.degrees[j].clone(),
                    u: vec![(i, Fq::ONE)],
                    v: vec![(j, Fq::ONE)],
                    bracket: table.product_sparse(i, j),
                })
            })
        });
        match failure {
            Some(w) => Err(Box::new(w)),
            None => Ok(()),
        }
    }

    pub fn coarsen(&self, phi: &GroupHom) -> Result<MonomialGrading> {
        if phi.domain() != &self.group {
            return Err(Error::GroupMismatch);
        }
        let degrees = self.degrees.iter().map(|d| phi.apply(d)).collect::<Result<_>>()?;
        MonomialGrading::new(&self.algebra, phi.codomain(), degrees)
    }

    /// Components in order of first occurrence, each spanned by unit vectors.
    pub fn to_grading(&self) -> Grading {
        let dim = self.algebra.dim();
        let mut order: Vec<GroupElement> = Vec::new();
        let mut members: HashMap<GroupElement, Vec<Vec<Fq>>> = HashMap::new();
        for (i, d) in self.degrees.iter().enumerate() {
            members
                .entry(d.clone())
                .or_insert_with(|| {
                    order.push(d.clone());
                    Vec::new()
                })
                .push(crate::linalg::unit_vector(dim, i));
        }
        let components =
            order.into_iter().map(|label| Component { basis: members.remove(&label).unwrap(), label }).collect();
        Grading::new(&self.algebra, &self.group, components).expect("a degree map is a decomposition")
    }

    /// Changes the label of every basis vector currently labelled `from`.
    pub fn relabel(&self, from: &GroupElement, to: &GroupElement) -> Result<MonomialGrading> {
        self.group.check(to)?;
        let degrees = self.degrees.iter().map(|d| if d == from { to.clone() } else { d.clone() }).collect();
        MonomialGrading::new(&self.algebra, &self.group, degrees)
    }

    /// Swaps two labels.
    pub fn swap_labels(&self, a: &GroupElement, b: &GroupElement) -> MonomialGrading {
        let degrees = self
            .degrees
            .iter()
            .map(|d| if d == a { b.clone() } else if d == b { a.clone() } else { d.clone() })
            .collect();
        MonomialGrading { algebra: self.algebra.clone(), group: self.group.clone(), degrees }
    }
}

fn z2() -> AbelianGroup {
    AbelianGroup::free(2)
}

fn pair(g: &AbelianGroup, (a, b): (i64, i64)) -> GroupElement {
    g.from_coords(&[a, b]).expect("rank-2 coordinates")
}

/// The Z^2-grading with `M_{3a} = span{x^(a + e_i) d_i}` on W.
pub fn gamma_bar(alg: &MelikyanAlgebra) -> MonomialGrading {
    let g = z2();
    let degrees = (0..alg.dim()).map(|i| pair(&g, alg.deg_zz(i))).collect();
    MonomialGrading::new(alg, &g, degrees).expect("valid degrees")
}

/// The Z^2-grading whose support generates Z^2.
pub fn gamma_m(alg: &MelikyanAlgebra) -> MonomialGrading {
    let g = z2();
    let degrees = (0..alg.dim()).map(|i| pair(&g, alg.deg_standard(i))).collect();
    MonomialGrading::new(alg, &g, degrees).expect("valid degrees")
}

/// The canonical Z-grading.
pub fn canonical_grading(alg: &MelikyanAlgebra) -> MonomialGrading {
    let g = AbelianGroup::free(1);
    let degrees = (0..alg.dim()).map(|i| g.from_coords(&[alg.deg_canonical(i)]).unwrap()).collect();
    MonomialGrading::new(alg, &g, degrees).expect("valid degrees")
}

/// `phi_M : Z^2 -> Z^2, (i, j) -> (3i + j, j)`.
pub fn phi_m_hom() -> GroupHom {
    let g = z2();
    GroupHom::new(&g, &g, vec![pair(&g, (3, 0)), pair(&g, (1, 1))]).unwrap()
}

/// `(a_1, a_2) -> a_1 + a_2`.
pub fn augmentation() -> GroupHom {
    let z = AbelianGroup::free(1);
    let one = z.from_coords(&[1]).unwrap();
    GroupHom::new(&z2(), &z, vec![one.clone(), one]).unwrap()
}

/// The standard grading `M_g = span{y : phi(deg y) = g}` for `phi` from Z^2.
pub fn standard_grading(alg: &MelikyanAlgebra, phi: &GroupHom) -> Result<MonomialGrading> {
    if phi.domain() != &z2() {
        return Err(Error::GroupMismatch);
    }
    gamma_m(alg).coarsen(phi)
}

/// A homomorphism recovered from a refinement `gamma -> coarse`.
#[derive(Clone, Debug)]
pub struct RecoveredHom {
    /// `<Supp gamma>` inside the fine group.
    pub support_subgroup: Subgroup,
    /// `(g, phi(g))` for every support label.
    pub on_support: Vec<(GroupElement, GroupElement)>,
    /// The homomorphism on the whole fine group, when it is determined:
    /// always if the support generates, and for free groups whenever the
    /// integer extension exists.
    pub hom: Option<GroupHom>,
    codomain: AbelianGroup,
}

impl RecoveredHom {
    /// `phi(g)` for `g` in the support-generated subgroup.
    pub fn apply(&self, g: &GroupElement) -> Option<GroupElement> {
        let coeffs = self.support_subgroup.coefficients(g)?;
        let terms: Vec<(i64, &GroupElement)> = coeffs.iter().copied().zip(self.on_support.iter().map(|(_, h)| h)).collect();
        Some(self.codomain.combine(&terms))
    }

    /// Agreement with `phi` on the support-generated subgroup.
    pub fn agrees_with(&self, phi: &GroupHom) -> bool {
        self.on_support.iter().all(|(g, h)| phi.apply(g).as_ref() == Ok(h))
    }

    /// Subgroup of the coarse group hit by the support.
    pub fn image(&self) -> Subgroup {
        let labels: Vec<GroupElement> = self.on_support.iter().map(|(_, h)| h.clone()).collect();
        subgroup_generated(&self.codomain, &labels).expect("labels lie in the codomain")
    }
}

/// The unique `phi` with `coarse = coarsen(fine, phi)` on `<Supp fine>`.
pub fn recover_homomorphism(fine: &Grading, coarse: &Grading) -> Result<RecoveredHom> {
    if fine.algebra != coarse.algebra {
        return Err(Error::WrongAlgebra { expected: format!("{:?}", fine.algebra), got: format!("{:?}", coarse.algebra) });
    }
    let hits = fine.containment(coarse)?;
    // Every coarse component must be a union of fine ones.
    let mut sizes = vec![0usize; coarse.components.len()];
    for (c, &h) in fine.components.iter().zip(&hits) {
        sizes[h] += c.basis.len();
    }
    if let Some(t) = (0..sizes.len()).find(|&t| sizes[t] != coarse.components[t].basis.len()) {
        return Err(Error::NotRefinement { label: coarse.components[t].label.to_string() });
    }

    let g = &fine.group;
    let h = &coarse.group;
    let support = fine.support();
    let on_support: Vec<(GroupElement, GroupElement)> =
        support.iter().cloned().zip(hits.iter().map(|&t| coarse.components[t].label.clone())).collect();
    let sub = subgroup_generated(g, &support)?;
    for rel in sub.relations() {
        let terms: Vec<(i64, &GroupElement)> = rel.iter().copied().zip(on_support.iter().map(|(_, y)| y)).collect();
        if !h.is_zero(&h.combine(&terms)) {
            return Err(Error::NotHomomorphism(format!("support relation {rel:?} is not respected")));
        }
    }
    let mut rec = RecoveredHom { support_subgroup: sub, on_support, hom: None, codomain: h.clone() };
    rec.hom = if rec.support_subgroup.is_whole_group() {
        let images = g.generators().iter().map(|e| rec.apply(e).expect("support generates")).collect();
        Some(GroupHom::new(g, h, images)?)
    } else {
        extend_free(g, h, &rec.on_support)
    };
    Ok(rec)
}

/// For free `g` and `h`, the integer matrix `Y` with `Y s = phi(s)` on the
/// support, when it exists and is unique.
fn extend_free(g: &AbelianGroup, h: &AbelianGroup, on_support: &[(GroupElement, GroupElement)]) -> Option<GroupHom> {
    if !g.is_finite() && g.torsion().is_empty() && h.torsion().is_empty() {
        let r = g.rank();
        let rows: Vec<Vec<i128>> = on_support.iter().map(|(s, _)| s.free.iter().map(|&x| x as i128).collect()).collect();
        let mut a = IntMatrix::zeros(rows.len(), r);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                a[(i, j)] = x;
            }
        }
        let snf = smith_normal_form(&a);
        if snf.rank() != r {
            return None;
        }
        // column j of Y^T solves a y = (phi(s)_j)_s
        let mut images = vec![vec![0i64; h.rank()]; r];
        for k in 0..h.rank() {
            let b: Vec<i128> = on_support.iter().map(|(_, t)| t.free[k] as i128).collect();
            let y = snf.solve(&b)?;
            for (j, &yj) in y.iter().enumerate() {
                images[j][k] = yj as i64;
            }
        }
        let images = images.into_iter().map(|free| h.element(&free, &[]).unwrap()).collect();
        return GroupHom::new(g, h, images).ok();
    }
    None
}

/// Dense diagonal helper for the labelled action `y -> c(g) y` on components.
pub(crate) fn component_action(grading: &Grading, scalar: impl Fn(&GroupElement) -> Fq) -> Matrix {
    let f = grading.field();
    let dim = grading.algebra.dim();
    if grading.is_monomial() {
        let mut diag = vec![Fq::ZERO; dim];
        for c in &grading.components {
            let s = scalar(&c.label);
            for v in &c.basis {
                let i = v.iter().position(|x| !x.is_zero()).unwrap();
                diag[i] = s;
            }
        }
        return Matrix::diagonal(f, &diag);
    }
    // P diag(s) P^{-1}
    let vectors = grading.all_vectors();
    let mut scales = Vec::with_capacity(dim);
    for c in &grading.components {
        let s = scalar(&c.label);
        scales.extend(std::iter::repeat_n(s, c.basis.len()));
    }
    let scaled: Vec<Vec<Fq>> = vectors.iter().zip(&scales).map(|(v, &s)| v.iter().map(|&x| f.mul(x, s)).collect()).collect();
    let ps = Matrix::from_columns(f, dim, &scaled);
    let inv_cols = grading.coordinate_columns();
    let columns: Vec<Vec<Fq>> = inv_cols.iter().map(|c| ps.mul_sparse(c)).collect();
    Matrix::from_columns(f, dim, &columns)
}
