//! Finitely generated abelian groups `Z^r x Z/m_1 x ... x Z/m_s` in
//! invariant-factor form, homomorphisms between them, subgroups, and
//! characters of finite groups with values in a finite field.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{root_of_unity, Fq, GaloisField};
use crate::intmat::{smith_normal_form, IntMatrix, SmithForm};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    rank: usize,
    torsion: Vec<u64>,
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|m| format!("Z/{m}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// A group element as free coordinates followed by reduced torsion residues.
/// Elements are interpreted relative to the group that produced them.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub free: Vec<i64>,
    pub torsion: Vec<u64>,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.free.iter().map(|x| x.to_string()).chain(self.torsion.iter().map(|x| format!("{x}~"))).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl AbelianGroup {
    /// Requires `m_1 | m_2 | ... | m_s` with every `m_j >= 2`.
    pub fn new(rank: usize, torsion: &[u64]) -> Result<Self> {
        if torsion.iter().any(|&m| m < 2) {
            return Err(Error::InvalidGroup(format!("torsion orders must be at least 2, got {torsion:?}")));
        }
        if torsion.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidGroup(format!("{torsion:?} is not a divisibility chain")));
        }
        Ok(AbelianGroup { rank, torsion: torsion.to_vec() })
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { rank, torsion: Vec::new() }
    }

    pub fn cyclic(m: u64) -> Result<Self> {
        if m == 0 {
            return Ok(Self::free(1));
        }
        if m == 1 {
            return Ok(Self::trivial());
        }
        Self::new(0, &[m])
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// Normalizes `Z^rank x Z/moduli[0] x ...` (any moduli, 0 meaning Z) and
    /// returns the images of the presentation generators.
    pub fn normalize(rank: usize, moduli: &[u64]) -> Result<(Self, Vec<GroupElement>)> {
        let n = rank + moduli.len();
        let mut rel = IntMatrix::zeros(n, n);
        for (j, &m) in moduli.iter().enumerate() {
            rel[(rank + j, rank + j)] = m as i128;
        }
        let s = smith_normal_form(&rel);
        // Generators of the quotient are the columns of U^{-1}; a presentation
        // generator e_i has coordinates U e_i against them.
        let mut torsion = Vec::new();
        let mut torsion_rows = Vec::new();
        let mut free_rows = Vec::new();
        for i in 0..n {
            let d = s.d.get(i).copied().unwrap_or(0);
            if d == 0 {
                free_rows.push(i);
            } else if d > 1 {
                torsion.push(d as u64);
                torsion_rows.push(i);
            }
        }
        let group = AbelianGroup::new(free_rows.len(), &torsion)?;
        let images = (0..n)
            .map(|i| {
                let col = s.u.column(i);
                let free: Vec<i64> = free_rows.iter().map(|&r| col[r] as i64).collect();
                let tors: Vec<i64> = torsion_rows.iter().map(|&r| col[r] as i64).collect();
                group.element(&free, &tors)
            })
            .collect::<Result<_>>()?;
        Ok((group, images))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    /// Number of generators (free first, then torsion).
    pub fn num_generators(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    pub fn exponent(&self) -> Option<u64> {
        self.is_finite().then(|| self.torsion.last().copied().unwrap_or(1))
    }

    /// Whether some element has order 5 (equivalently 5 divides `m_s`).
    pub fn has_order_5_elements(&self) -> bool {
        self.torsion.last().is_some_and(|m| m % 5 == 0)
    }

    pub fn element(&self, free: &[i64], torsion: &[i64]) -> Result<GroupElement> {
        if free.len() != self.rank || torsion.len() != self.torsion.len() {
            return Err(Error::GroupMismatch);
        }
        Ok(GroupElement {
            free: free.to_vec(),
            torsion: torsion.iter().zip(&self.torsion).map(|(&x, &m)| x.rem_euclid(m as i64) as u64).collect(),
        })
    }

    /// Element from a coordinate vector over all generators.
    pub fn from_coords(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.num_generators() {
            return Err(Error::GroupMismatch);
        }
        self.element(&coords[..self.rank], &coords[self.rank..])
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { free: vec![0; self.rank], torsion: vec![0; self.torsion.len()] }
    }

    /// The `i`-th generator.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut c = vec![0i64; self.num_generators()];
        c[i] = 1;
        self.from_coords(&c).expect("generator index in range")
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.num_generators()).map(|i| self.generator(i)).collect()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.free.len() == self.rank
            && g.torsion.len() == self.torsion.len()
            && g.torsion.iter().zip(&self.torsion).all(|(x, m)| x < m)
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn coords(&self, g: &GroupElement) -> Vec<i64> {
        g.free.iter().copied().chain(g.torsion.iter().map(|&x| x as i64)).collect()
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.combine(&[(1, a), (1, b)])
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.combine(&[(-1, a)])
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.combine(&[(1, a), (-1, b)])
    }

    pub fn mul(&self, k: i64, a: &GroupElement) -> GroupElement {
        self.combine(&[(k, a)])
    }

    /// `sum k_i g_i`.
    pub fn combine(&self, terms: &[(i64, &GroupElement)]) -> GroupElement {
        let mut free = vec![0i64; self.rank];
        let mut tors = vec![0i128; self.torsion.len()];
        for &(k, g) in terms {
            for (f, &x) in free.iter_mut().zip(&g.free) {
                *f += k * x;
            }
            for ((t, &x), &m) in tors.iter_mut().zip(&g.torsion).zip(&self.torsion) {
                *t = (*t + k as i128 * x as i128).rem_euclid(m as i128);
            }
        }
        GroupElement { free, torsion: tors.into_iter().map(|t| t as u64).collect() }
    }

    pub fn is_zero(&self, g: &GroupElement) -> bool {
        g.free.iter().all(|&x| x == 0) && g.torsion.iter().all(|&x| x == 0)
    }

    /// Order of `g`, or `None` if it has infinite order.
    pub fn element_order(&self, g: &GroupElement) -> Option<u64> {
        if g.free.iter().any(|&x| x != 0) {
            return None;
        }
        Some(g.torsion.iter().zip(&self.torsion).fold(1u64, |acc, (&x, &m)| {
            let o = m / gcd(x, m);
            acc / gcd(acc, o) * o
        }))
    }

    /// All elements of a finite group, torsion coordinates in lex order.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        if !self.is_finite() {
            return Err(Error::InfiniteGroup(self.rank));
        }
        let mut out = vec![self.zero()];
        for (j, &m) in self.torsion.iter().enumerate() {
            out = out
                .into_iter()
                .flat_map(|g| {
                    (0..m).map(move |x| {
                        let mut h = g.clone();
                        h.torsion[j] = x;
                        h
                    })
                })
                .collect();
        }
        Ok(out)
    }

    /// Relation matrix `diag(0,...,0, m_1, ..., m_s)` columns for torsion.
    fn relation_columns(&self) -> Vec<Vec<i128>> {
        let n = self.num_generators();
        self.torsion
            .iter()
            .enumerate()
            .map(|(j, &m)| {
                let mut c = vec![0i128; n];
                c[self.rank + j] = m as i128;
                c
            })
            .collect()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A homomorphism given by the images of the domain generators.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupHom {
    domain: AbelianGroup,
    codomain: AbelianGroup,
    images: Vec<GroupElement>,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupHom({} -> {}, {:?})", self.domain, self.codomain, self.images)
    }
}

impl GroupHom {
    /// Checks `m_j * image_j = 0` for each torsion generator.
    pub fn new(domain: &AbelianGroup, codomain: &AbelianGroup, images: Vec<GroupElement>) -> Result<Self> {
        if images.len() != domain.num_generators() {
            return Err(Error::IllDefinedHom(format!(
                "{} images for {} generators",
                images.len(),
                domain.num_generators()
            )));
        }
        for img in &images {
            codomain.check(img)?;
        }
        for (j, &m) in domain.torsion.iter().enumerate() {
            let img = &images[domain.rank + j];
            if !codomain.is_zero(&codomain.mul(m as i64, img)) {
                return Err(Error::IllDefinedHom(format!("{m} * {img} is not zero in {codomain}")));
            }
        }
        Ok(GroupHom { domain: domain.clone(), codomain: codomain.clone(), images })
    }

    pub fn identity(g: &AbelianGroup) -> Self {
        GroupHom { domain: g.clone(), codomain: g.clone(), images: g.generators() }
    }

    pub fn zero(domain: &AbelianGroup, codomain: &AbelianGroup) -> Self {
        GroupHom { domain: domain.clone(), codomain: codomain.clone(), images: vec![codomain.zero(); domain.num_generators()] }
    }

    pub fn domain(&self) -> &AbelianGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &AbelianGroup {
        &self.codomain
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    pub fn apply(&self, g: &GroupElement) -> Result<GroupElement> {
        self.domain.check(g)?;
        let coords = self.domain.coords(g);
        let terms: Vec<(i64, &GroupElement)> = coords.iter().copied().zip(&self.images).collect();
        Ok(self.codomain.combine(&terms))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if other.domain != self.codomain {
            return Err(Error::GroupMismatch);
        }
        let images = self.images.iter().map(|g| other.apply(g)).collect::<Result<_>>()?;
        Ok(GroupHom { domain: self.domain.clone(), codomain: other.codomain.clone(), images })
    }

    /// Subgroup of the codomain generated by the images.
    pub fn image(&self) -> Subgroup {
        subgroup_generated(&self.codomain, &self.images).expect("images lie in the codomain")
    }

    pub fn is_surjective(&self) -> bool {
        self.image().index() == Some(1)
    }
}

/// `phi(g)`.
pub fn hom_apply(phi: &GroupHom, g: &GroupElement) -> Result<GroupElement> {
    phi.apply(g)
}

/// The subgroup of `ambient` generated by a finite set.
#[derive(Clone, Debug)]
pub struct Subgroup {
    ambient: AbelianGroup,
    generators: Vec<GroupElement>,
    lattice: SmithForm,
    isomorphism_type: AbelianGroup,
}

/// `<S>` in `G`, with membership decided through the Smith form of `[S | R]`,
/// `R` the torsion relations of `G`.
pub fn subgroup_generated(ambient: &AbelianGroup, generators: &[GroupElement]) -> Result<Subgroup> {
    for g in generators {
        ambient.check(g)?;
    }
    let n = ambient.num_generators();
    let mut columns: Vec<Vec<i128>> =
        generators.iter().map(|g| ambient.coords(g).into_iter().map(i128::from).collect()).collect();
    columns.extend(ambient.relation_columns());
    let lattice = smith_normal_form(&IntMatrix::from_columns(n, &columns));

    // <S> = Z^|S| / K with K the S-parts of the kernel of [S | R].
    let s = generators.len();
    let kernel_s: Vec<Vec<i128>> = lattice.kernel().into_iter().map(|k| k[..s].to_vec()).collect();
    let isomorphism_type = if s == 0 {
        AbelianGroup::trivial()
    } else {
        let k = smith_normal_form(&IntMatrix::from_columns(s, &kernel_s));
        let torsion: Vec<u64> = k.d.iter().filter(|&&d| d > 1).map(|&d| d as u64).collect();
        AbelianGroup::new(s - k.rank(), &torsion)?
    };
    Ok(Subgroup { ambient: ambient.clone(), generators: generators.to_vec(), lattice, isomorphism_type })
}

impl Subgroup {
    pub fn ambient(&self) -> &AbelianGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// Abstract group isomorphic to this subgroup.
    pub fn isomorphism_type(&self) -> &AbelianGroup {
        &self.isomorphism_type
    }

    /// Integer coefficients expressing `g` in the generators, if `g` is a member.
    pub fn coefficients(&self, g: &GroupElement) -> Option<Vec<i64>> {
        if !self.ambient.contains(g) {
            return None;
        }
        let b: Vec<i128> = self.ambient.coords(g).into_iter().map(i128::from).collect();
        let x = self.lattice.solve(&b)?;
        Some(x[..self.generators.len()].iter().map(|&c| c as i64).collect())
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.coefficients(g).is_some()
    }

    /// Integer relations among the generators: each `k` has `sum k_i s_i = 0`.
    pub fn relations(&self) -> Vec<Vec<i64>> {
        let s = self.generators.len();
        self.lattice.kernel().into_iter().map(|k| k[..s].iter().map(|&c| c as i64).collect()).collect()
    }

    /// `[G : <S>]`, or `None` when the index is infinite.
    pub fn index(&self) -> Option<u64> {
        (self.lattice.rank() == self.ambient.num_generators()).then(|| self.lattice.d.iter().map(|&d| d as u64).product())
    }

    pub fn is_whole_group(&self) -> bool {
        self.index() == Some(1)
    }
}

/// A character `G -> F^x`: the value on each generator, free generators first.
#[derive(Clone, PartialEq, Eq)]
pub struct Character {
    group: AbelianGroup,
    field: GaloisField,
    values: Vec<Fq>,
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.values.iter().map(|&x| self.field.display(x)).collect();
        write!(f, "Character({}, [{}])", self.group, v.join(", "))
    }
}

fn check_character_field(group: &AbelianGroup, field: &GaloisField) -> Result<()> {
    let Some(e) = group.exponent() else {
        return Err(Error::InfiniteGroup(group.rank()));
    };
    if group.has_order_5_elements() || e % field.characteristic() as u64 == 0 {
        return Err(crate::field::FieldError::OrderDivisibleByCharacteristic { m: e, p: field.characteristic() }.into());
    }
    if (field.order() as u64 - 1) % e != 0 {
        return Err(crate::field::FieldError::InsufficientField { p: field.characteristic(), k: field.degree(), m: e }.into());
    }
    Ok(())
}

impl Character {
    /// Checks that free values are nonzero and the value on the `j`-th
    /// torsion generator has order dividing `m_j`.
    pub fn new(group: &AbelianGroup, field: &GaloisField, values: Vec<Fq>) -> Result<Self> {
        if values.len() != group.num_generators() {
            return Err(Error::GroupMismatch);
        }
        if values[..group.rank].iter().any(|v| v.is_zero()) {
            return Err(Error::NotHomomorphism("zero value on a free generator".into()));
        }
        for (&v, &m) in values[group.rank..].iter().zip(&group.torsion) {
            if field.pow(v, m as i64) != Fq::ONE {
                return Err(Error::NotHomomorphism(format!("value {} does not have order dividing {m}", field.display(v))));
            }
        }
        Ok(Character { group: group.clone(), field: field.clone(), values })
    }

    pub fn trivial(group: &AbelianGroup, field: &GaloisField) -> Result<Self> {
        Self::new(group, field, vec![Fq::ONE; group.num_generators()])
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn values(&self) -> &[Fq] {
        &self.values
    }

    pub fn eval(&self, g: &GroupElement) -> Result<Fq> {
        self.group.check(g)?;
        let f = &self.field;
        let free = g.free.iter().zip(&self.values).fold(Fq::ONE, |acc, (&x, &v)| f.mul(acc, f.pow(v, x)));
        Ok(g.torsion.iter().zip(&self.values[self.group.rank..]).fold(free, |acc, (&x, &v)| f.mul(acc, f.pow(v, x as i64))))
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == Fq::ONE)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Character) -> Result<Character> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        self.field.ensure_same(&other.field)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| self.field.mul(a, b)).collect();
        Ok(Character { group: self.group.clone(), field: self.field.clone(), values })
    }
}

/// All `|G|` characters of a finite group, built from the fixed roots of unity
/// `root_of_unity(field, m_j)`; the `e`-th character sends generator `j` to
/// `zeta_j^{e_j}` with `e` running over [`AbelianGroup::elements`].
pub fn character_group(group: &AbelianGroup, field: &GaloisField) -> Result<Vec<Character>> {
    check_character_field(group, field)?;
    let roots: Vec<Fq> = group.torsion.iter().map(|&m| root_of_unity(field, m)).collect::<std::result::Result<_, _>>()?;
    group
        .elements()?
        .into_iter()
        .map(|e| {
            let values = e.torsion.iter().zip(&roots).map(|(&x, &z)| field.pow(z, x as i64)).collect();
            Character::new(group, field, values)
        })
        .collect()
}

/// The characters `chi_j` sending the `j`-th torsion generator to
/// `root_of_unity(field, m_j)` and every other generator to 1; they generate
/// the character group.
pub fn generator_characters(group: &AbelianGroup, field: &GaloisField) -> Result<Vec<Character>> {
    check_character_field(group, field)?;
    (0..group.torsion.len())
        .map(|j| {
            let mut values = vec![Fq::ONE; group.torsion.len()];
            values[j] = root_of_unity(field, group.torsion[j])?;
            Character::new(group, field, values)
        })
        .collect()
}

/// `zeta = chi ∘ phi`.
pub fn pullback_character(chi: &Character, phi: &GroupHom) -> Result<Character> {
    if phi.codomain() != chi.group() {
        return Err(Error::GroupMismatch);
    }
    let dom = phi.domain();
    let values = phi.images().iter().map(|g| chi.eval(g)).collect::<Result<_>>()?;
    Character::new(dom, chi.field(), values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> AbelianGroup {
        AbelianGroup::free(2)
    }

    fn el(g: &AbelianGroup, c: &[i64]) -> GroupElement {
        g.from_coords(c).unwrap()
    }

    #[test]
    fn hom_apply_examples() {
        let g = z2();
        let phi_m = GroupHom::new(&g, &g, vec![el(&g, &[3, 0]), el(&g, &[1, 1])]).unwrap();
        assert_eq!(hom_apply(&phi_m, &el(&g, &[1, 0])).unwrap(), el(&g, &[3, 0]));
        assert_eq!(hom_apply(&phi_m, &g.zero()).unwrap(), g.zero());
        let z = AbelianGroup::free(1);
        let aug = GroupHom::new(&g, &z, vec![el(&z, &[1]), el(&z, &[1])]).unwrap();
        assert_eq!(aug.apply(&el(&g, &[-3, 0])).unwrap(), el(&z, &[-3]));
    }

    #[test]
    fn ill_defined_homs_rejected() {
        let z3 = AbelianGroup::cyclic(3).unwrap();
        let z4 = AbelianGroup::cyclic(4).unwrap();
        assert!(matches!(GroupHom::new(&z3, &z4, vec![el(&z4, &[1])]), Err(Error::IllDefinedHom(_))));
        let z = AbelianGroup::free(1);
        assert!(GroupHom::new(&z3, &z, vec![el(&z, &[1])]).is_err());
        assert!(GroupHom::new(&z3, &z, vec![el(&z, &[0])]).is_ok());
        let z6 = AbelianGroup::cyclic(6).unwrap();
        assert!(GroupHom::new(&z6, &z3, vec![el(&z3, &[1])]).is_ok());
        assert!(GroupHom::new(&z3, &z6, vec![el(&z6, &[2])]).is_ok());
        assert!(GroupHom::new(&z3, &z6, vec![el(&z6, &[1])]).is_err());
    }

    #[test]
    fn subgroup_examples() {
        let g = z2();
        let s = subgroup_generated(&g, &[el(&g, &[3, 0]), el(&g, &[1, 1])]).unwrap();
        assert_eq!(s.index(), Some(3));
        assert_eq!(s.isomorphism_type(), &AbelianGroup::free(2));
        assert!(s.contains(&el(&g, &[4, 1])));
        assert!(!s.contains(&el(&g, &[1, 0])));
        let s = subgroup_generated(&g, &[el(&g, &[1, 0]), el(&g, &[0, 1])]).unwrap();
        assert!(s.is_whole_group());
        let t = subgroup_generated(&g, &[]).unwrap();
        assert_eq!(t.index(), None);
        assert!(t.contains(&g.zero()));
        assert_eq!(t.isomorphism_type(), &AbelianGroup::trivial());
    }

    #[test]
    fn subgroup_of_mixed_group() {
        let g = AbelianGroup::new(1, &[2, 4]).unwrap();
        let s = subgroup_generated(&g, &[el(&g, &[0, 1, 2]), el(&g, &[0, 0, 2])]).unwrap();
        assert_eq!(s.index(), None);
        assert_eq!(s.isomorphism_type(), &AbelianGroup::new(0, &[2, 2]).unwrap());
        let s = subgroup_generated(&g, &[el(&g, &[2, 1, 1])]).unwrap();
        assert_eq!(s.isomorphism_type(), &AbelianGroup::free(1));
        let s = subgroup_generated(&g, &[el(&g, &[1, 0, 0]), el(&g, &[0, 1, 0]), el(&g, &[0, 0, 1])]).unwrap();
        assert!(s.is_whole_group());
        let s = subgroup_generated(&g, &[el(&g, &[2, 0, 0]), el(&g, &[0, 0, 2])]).unwrap();
        assert_eq!(s.index(), Some(2 * 2 * 2));
    }

    #[test]
    fn subgroup_generation_is_idempotent() {
        let g = AbelianGroup::new(1, &[6]).unwrap();
        let s = subgroup_generated(&g, &[el(&g, &[2, 3]), el(&g, &[0, 2])]).unwrap();
        let s2 = subgroup_generated(&g, &[el(&g, &[2, 3]), el(&g, &[0, 2]), el(&g, &[4, 2])]).unwrap();
        for a in -4..5 {
            for b in 0..6 {
                let h = el(&g, &[a, b]);
                assert_eq!(s.contains(&h), s2.contains(&h), "{h}");
            }
        }
        assert_eq!(s.index(), Some(4));
    }

    #[test]
    fn normalize_presentation() {
        let (g, imgs) = AbelianGroup::normalize(0, &[2, 3]).unwrap();
        assert_eq!(g, AbelianGroup::cyclic(6).unwrap());
        assert_eq!(g.element_order(&imgs[0]), Some(2));
        assert_eq!(g.element_order(&imgs[1]), Some(3));
        let (g, _) = AbelianGroup::normalize(1, &[4, 6, 1]).unwrap();
        assert_eq!(g, AbelianGroup::new(1, &[2, 12]).unwrap());
        assert!(AbelianGroup::new(0, &[4, 6]).is_err());
    }

    #[test]
    fn characters_of_z3() {
        let f = GaloisField::new(5, 2).unwrap();
        let g = AbelianGroup::cyclic(3).unwrap();
        let chars = character_group(&g, &f).unwrap();
        assert_eq!(chars.len(), 3);
        let beta = root_of_unity(&f, 3).unwrap();
        let mut vals: Vec<Fq> = chars.iter().map(|c| c.values()[0]).collect();
        vals.sort();
        let mut want = vec![Fq::ONE, beta, f.mul(beta, beta)];
        want.sort();
        assert_eq!(vals, want);

        let t = character_group(&AbelianGroup::trivial(), &f).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t[0].is_trivial());

        let z5 = AbelianGroup::cyclic(5).unwrap();
        assert!(matches!(
            character_group(&z5, &f),
            Err(Error::Field(crate::field::FieldError::OrderDivisibleByCharacteristic { .. }))
        ));
        let z7 = AbelianGroup::cyclic(7).unwrap();
        assert!(matches!(character_group(&z7, &f), Err(Error::Field(crate::field::FieldError::InsufficientField { .. }))));
    }

    #[test]
    fn characters_separate_points() {
        let f = GaloisField::new(5, 2).unwrap();
        for torsion in [vec![2], vec![3], vec![4], vec![6], vec![2, 2], vec![2, 4], vec![12], vec![2, 6], vec![24], vec![2, 12], vec![4, 4], vec![3, 6]] {
            let g = AbelianGroup::new(0, &torsion).unwrap();
            let chars = character_group(&g, &f).unwrap();
            assert_eq!(chars.len() as u64, g.order().unwrap());
            for x in g.elements().unwrap() {
                if g.is_zero(&x) {
                    continue;
                }
                assert!(chars.iter().any(|c| c.eval(&x).unwrap() != Fq::ONE), "{x} in {g}");
            }
            for a in &chars {
                for b in &chars {
                    let ab = a.mul(b).unwrap();
                    for x in g.elements().unwrap() {
                        assert_eq!(ab.eval(&x).unwrap(), f.mul(a.eval(&x).unwrap(), b.eval(&x).unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn pullback_examples() {
        let f = GaloisField::new(5, 2).unwrap();
        let z3 = AbelianGroup::cyclic(3).unwrap();
        let z6 = AbelianGroup::cyclic(6).unwrap();
        let beta = root_of_unity(&f, 3).unwrap();
        let chi = Character::new(&z3, &f, vec![beta]).unwrap();
        let red = GroupHom::new(&z6, &z3, vec![el(&z3, &[1])]).unwrap();
        assert_eq!(pullback_character(&chi, &red).unwrap().values(), &[beta]);
        let triv = Character::trivial(&z3, &f).unwrap();
        assert!(pullback_character(&triv, &red).unwrap().is_trivial());
        let zero = GroupHom::zero(&z6, &z3);
        assert!(pullback_character(&chi, &zero).unwrap().is_trivial());
        assert!(Character::new(&z3, &f, vec![f.from_int(2)]).is_err());
    }
}
