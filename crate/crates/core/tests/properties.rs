use std::sync::OnceLock;

use melikyan::automorphism::{lambda, lambda_diagonal, TorusParameter};
use melikyan::divided_power::{DividedPowerPoly, Shape};
use melikyan::grading::gamma_m;
use melikyan::group::{AbelianGroup, Character, GroupElement, GroupHom};
use melikyan::json::{
    element_from_json, element_to_json, endomorphism_from_json, endomorphism_to_json, group_element_from_json,
    group_element_to_json, hom_spec_from_json, hom_spec_to_json, torus_parameter_from_json, torus_parameter_to_json,
};
use melikyan::melikyan::{m_bracket, MelikyanAlgebra, MelikyanElement};
use melikyan::witt::{witt_bracket, VectorField};
use melikyan::{Fq, GaloisField};
use proptest::prelude::*;

fn gf25() -> &'static GaloisField {
    static F: OnceLock<GaloisField> = OnceLock::new();
    F.get_or_init(|| GaloisField::new(5, 2).unwrap())
}

fn m11() -> &'static MelikyanAlgebra {
    static A: OnceLock<MelikyanAlgebra> = OnceLock::new();
    A.get_or_init(|| MelikyanAlgebra::new([1, 1], gf25()).unwrap())
}

fn shape() -> &'static Shape {
    m11().shape()
}

fn elt() -> impl Strategy<Value = Fq> {
    (0u32..5, 0u32..5).prop_map(|(a, b)| gf25().from_coords(&[a, b]).unwrap())
}

fn unit() -> impl Strategy<Value = Fq> {
    (0i64..24).prop_map(|i| gf25().primitive_power(i))
}

fn torus() -> impl Strategy<Value = TorusParameter> {
    (unit(), unit()).prop_map(|(a, b)| TorusParameter::new(a, b).unwrap())
}

// Sparse random vector of length `len` with at most `k` nonzero entries.
fn sparse(len: usize, k: usize) -> impl Strategy<Value = Vec<Fq>> {
    prop::collection::vec((0..len, elt()), 0..=k).prop_map(move |terms| {
        let mut v = vec![Fq::ZERO; len];
        for (i, c) in terms {
            v[i] = c;
        }
        v
    })
}

fn poly() -> impl Strategy<Value = DividedPowerPoly> {
    sparse(25, 6).prop_map(|v| DividedPowerPoly::from_dense(shape(), gf25(), &v))
}

fn vector_field() -> impl Strategy<Value = VectorField> {
    sparse(50, 6).prop_map(|v| VectorField::from_dense(shape(), gf25(), &v))
}

fn m_element() -> impl Strategy<Value = MelikyanElement> {
    sparse(125, 6).prop_map(|v| m11().from_dense(&v).unwrap())
}

fn z2_element() -> impl Strategy<Value = GroupElement> {
    (-20i64..20, -20i64..20).prop_map(|(a, b)| AbelianGroup::free(2).from_coords(&[a, b]).unwrap())
}

fn target() -> impl Strategy<Value = AbelianGroup> {
    prop_oneof![
        Just(AbelianGroup::free(1)),
        Just(AbelianGroup::free(2)),
        Just(AbelianGroup::cyclic(3).unwrap()),
        Just(AbelianGroup::cyclic(4).unwrap()),
        Just(AbelianGroup::new(0, &[2, 2]).unwrap()),
        Just(AbelianGroup::new(1, &[6]).unwrap()),
    ]
}

fn hom_into(g: AbelianGroup) -> impl Strategy<Value = GroupHom> {
    let n = g.num_generators();
    prop::collection::vec(prop::collection::vec(-7i64..7, n), 2).prop_map(move |imgs| {
        let images = imgs.iter().map(|c| g.from_coords(c).unwrap()).collect();
        GroupHom::new(&AbelianGroup::free(2), &g, images).unwrap()
    })
}

fn hom_from_z2() -> impl Strategy<Value = GroupHom> {
    target().prop_flat_map(hom_into)
}

proptest! {
    #[test]
    fn field_axioms(a in elt(), b in elt(), c in elt()) {
        let f = gf25();
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(a, f.neg(a)), Fq::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a)), Fq::ONE);
            prop_assert_eq!(f.pow(a, 24), Fq::ONE);
        }
        prop_assert_eq!(f.pow(a, 25), a);
    }

    #[test]
    fn divided_powers_form_a_commutative_algebra(p in poly(), q in poly(), r in poly()) {
        let pq = p.multiply(&q).unwrap();
        prop_assert_eq!(&pq, &q.multiply(&p).unwrap());
        prop_assert_eq!(pq.multiply(&r).unwrap(), p.multiply(&q.multiply(&r).unwrap()).unwrap());
        for axis in 0..2 {
            let lhs = pq.partial(axis).unwrap();
            let rhs = p.partial(axis).unwrap().multiply(&q).unwrap().add(&p.multiply(&q.partial(axis).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn witt_bracket_is_a_commutator_of_derivations(d in vector_field(), e in vector_field(), g in poly()) {
        let de = witt_bracket(&d, &e).unwrap();
        let lhs = de.apply(&g).unwrap();
        let rhs = d.apply(&e.apply(&g).unwrap()).unwrap().sub(&e.apply(&d.apply(&g).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let div = de.divergence().unwrap();
        let want = d.apply(&e.divergence().unwrap()).unwrap().sub(&e.apply(&d.divergence().unwrap()).unwrap()).unwrap();
        prop_assert_eq!(div, want);
    }

    #[test]
    fn witt_jacobi(a in vector_field(), b in vector_field(), c in vector_field()) {
        let j = witt_bracket(&a, &witt_bracket(&b, &c).unwrap()).unwrap()
            .add(&witt_bracket(&b, &witt_bracket(&c, &a).unwrap()).unwrap()).unwrap()
            .add(&witt_bracket(&c, &witt_bracket(&a, &b).unwrap()).unwrap()).unwrap();
        prop_assert!(j.is_zero());
    }

    #[test]
    fn melikyan_bracket_is_a_lie_bracket(y in m_element(), z in m_element(), w in m_element()) {
        let yz = m_bracket(&y, &z).unwrap();
        prop_assert_eq!(&yz, &m_bracket(&z, &y).unwrap().neg());
        prop_assert!(m_bracket(&y, &y).unwrap().is_zero());
        let j = m_bracket(&y, &m_bracket(&z, &w).unwrap()).unwrap()
            .add(&m_bracket(&z, &m_bracket(&w, &y).unwrap()).unwrap()).unwrap()
            .add(&m_bracket(&w, &yz).unwrap()).unwrap();
        prop_assert!(j.is_zero());
        prop_assert_eq!(m11().bracket(&y, &z).unwrap(), yz);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lambda_is_a_multiplicative_family_of_automorphisms(s in torus(), t in torus(), y in m_element(), z in m_element()) {
        let f = gf25();
        let a = m11();
        let (ls, lt) = (lambda_diagonal(a, &s), lambda_diagonal(a, &t));
        let lst = lambda_diagonal(a, &s.mul(&t, f));
        for i in 0..a.dim() {
            prop_assert_eq!(lst[i], f.mul(ls[i], lt[i]));
        }
        let l = lambda(a, &s).unwrap();
        let lhs = l.apply(&m_bracket(&y, &z).unwrap()).unwrap();
        let rhs = m_bracket(&l.apply(&y).unwrap(), &l.apply(&z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn homomorphisms_are_additive(phi in hom_from_z2(), g in z2_element(), h in z2_element()) {
        let z2 = AbelianGroup::free(2);
        let c = phi.codomain();
        prop_assert_eq!(phi.apply(&z2.add(&g, &h)).unwrap(), c.add(&phi.apply(&g).unwrap(), &phi.apply(&h).unwrap()));
        prop_assert_eq!(phi.apply(&z2.neg(&g)).unwrap(), c.neg(&phi.apply(&g).unwrap()));
    }

    #[test]
    fn coarsening_composes(phi in hom_into(AbelianGroup::free(2)), psi in hom_from_z2()) {
        let fine = gamma_m(m11());
        let psi = GroupHom::new(phi.codomain(), psi.codomain(), psi.images().to_vec()).unwrap();
        let stepwise = fine.coarsen(&phi).unwrap().coarsen(&psi).unwrap();
        let direct = fine.coarsen(&phi.then(&psi).unwrap()).unwrap();
        for i in 0..m11().dim() {
            prop_assert_eq!(stepwise.degree(i), direct.degree(i));
        }
    }

    #[test]
    fn characters_of_free_groups_are_multiplicative(u in unit(), v in unit(), g in z2_element(), h in z2_element()) {
        let f = gf25();
        let z2 = AbelianGroup::free(2);
        let chi = Character::new(&z2, f, vec![u, v]).unwrap();
        let lhs = chi.eval(&z2.add(&g, &h)).unwrap();
        prop_assert_eq!(lhs, f.mul(chi.eval(&g).unwrap(), chi.eval(&h).unwrap()));
        let want = f.mul(f.pow(u, g.free[0]), f.pow(v, g.free[1]));
        prop_assert_eq!(chi.eval(&g).unwrap(), want);
    }

    #[test]
    fn json_round_trips(y in m_element(), t in torus(), phi in hom_from_z2(), g in z2_element()) {
        let a = m11();
        let f = gf25();
        prop_assert_eq!(element_from_json(a, &element_to_json(&y)).unwrap(), y);
        prop_assert_eq!(torus_parameter_from_json(f, &torus_parameter_to_json(f, &t)).unwrap(), t);
        let back = hom_spec_from_json(&hom_spec_to_json(&phi)).unwrap();
        prop_assert_eq!(back.codomain(), phi.codomain());
        prop_assert_eq!(back.images(), phi.images());
        let z2 = AbelianGroup::free(2);
        prop_assert_eq!(group_element_from_json(&z2, &group_element_to_json(&g)).unwrap(), g);
        let l = lambda(a, &t).unwrap();
        prop_assert_eq!(endomorphism_from_json(a, &endomorphism_to_json(&l)).unwrap(), l);
    }
}
