//! Worked values checked against computations that do not go through the
//! code under test: schoolbook polynomial arithmetic, exact integer
//! binomials, hand-evaluated brackets, brute-force enumeration.

use melikyan::automorphism::{
    beta, eigenspace_grading, eta, exp_ad, kernel_of_lambda, lambda, lambda_diagonal, sigma_extensions, sigma_m,
    sigma_w, theta, top_degree_indices, torus_points, TorusParameter,
};
use melikyan::divided_power::{DividedPowerPoly, MultiIndex, Shape};
use melikyan::field::{binom_mod_p, extend_field, multi_binom};
use melikyan::grading::{gamma_bar, gamma_m, standard_grading, MonomialGrading};
use melikyan::group::{character_group, pullback_character, AbelianGroup, GroupHom};
use melikyan::melikyan::{m_bracket, Block, CanonicalBasisIndex, MelikyanAlgebra, MelikyanElement};
use melikyan::twist::{run_plan, TwistFactor, TwistPlan};
use melikyan::witt::{deg_w, witt_bracket, TildeField, VectorField};
use melikyan::{Fq, GaloisField};

fn gf(k: u32) -> GaloisField {
    GaloisField::new(5, k).unwrap()
}

fn alg(k: u32) -> MelikyanAlgebra {
    MelikyanAlgebra::new([1, 1], &gf(k)).unwrap()
}

fn shape() -> Shape {
    Shape::new(5, &[1, 1]).unwrap()
}

fn x(f: &GaloisField, a: [u32; 2]) -> DividedPowerPoly {
    DividedPowerPoly::basis_element(&shape(), f, &a).unwrap()
}

fn mi(a: [u32; 2]) -> MultiIndex {
    MultiIndex::new(&shape(), &a).unwrap()
}

fn o(f: &GaloisField, a: [u32; 2]) -> MelikyanElement {
    MelikyanElement::from_o(x(f, a)).unwrap()
}

fn w(f: &GaloisField, a: [u32; 2], axis: usize, c: i64) -> VectorField {
    VectorField::monomial(&shape(), f, mi(a), axis, f.from_int(c))
}

fn wt(f: &GaloisField, a: [u32; 2], axis: usize, c: i64) -> MelikyanElement {
    let z = DividedPowerPoly::zero(&shape(), f);
    let p = x(f, a).scale(f.from_int(c));
    let t = if axis == 0 { TildeField::new(p, z) } else { TildeField::new(z, p) };
    MelikyanElement::from_wt(t.unwrap()).unwrap()
}

fn idx(b: Block, a: [u32; 2]) -> CanonicalBasisIndex {
    CanonicalBasisIndex { block: b, index: mi(a) }
}

// (c_0 + c_1 X) (d_0 + d_1 X) reduced by the monic quadratic modulus, mod 5.
fn schoolbook(m: &[u32], a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut prod = [0u32; 3];
    for i in 0..2 {
        for j in 0..2 {
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % 5;
        }
    }
    // X^2 = -(m_0 + m_1 X)
    let top = prod[2];
    vec![(prod[0] + 5 * 5 - top * m[0]) % 5, (prod[1] + 5 * 5 - top * m[1]) % 5]
}

#[test]
fn gf25_multiplication_matches_schoolbook_arithmetic() {
    let f = gf(2);
    let m = f.modulus().to_vec();
    assert_eq!(m.len(), 3);
    assert_eq!(m[2], 1);
    for a in f.elements() {
        for b in f.elements() {
            let (ca, cb) = (f.coords(a), f.coords(b));
            assert_eq!(f.coords(f.mul(a, b)), schoolbook(&m, &ca, &cb));
            let sum: Vec<u32> = ca.iter().zip(&cb).map(|(s, t)| (s + t) % 5).collect();
            assert_eq!(f.coords(f.add(a, b)), sum);
        }
    }
}

#[test]
fn gf25_has_eight_generators() {
    let f = gf(2);
    let generators = f
        .nonzero_elements()
        .filter(|&a| {
            let mut y = a;
            let mut order = 1;
            while y != Fq::ONE {
                y = f.mul(y, a);
                order += 1;
            }
            order == 24
        })
        .count();
    assert_eq!(generators, 8);
}

#[test]
fn beta_is_a_primitive_cube_root_of_unity() {
    let f = gf(2);
    let b = beta(&f).unwrap();
    assert_ne!(b, Fq::ONE);
    assert_eq!(f.mul(b, f.mul(b, b)), Fq::ONE);
    assert_eq!(f.add(f.add(f.mul(b, b), b), Fq::ONE), Fq::ZERO);
    let cube_roots: Vec<Fq> = f.elements().filter(|&a| a != Fq::ONE && f.pow(a, 3) == Fq::ONE).collect();
    assert_eq!(cube_roots.len(), 2);
    assert!(cube_roots.contains(&b));
    assert!(beta(&gf(1)).is_err());
}

#[test]
fn extension_degrees() {
    assert_eq!(extend_field(&gf(1), 3).unwrap().0.degree(), 2);
    assert_eq!(extend_field(&gf(2), 7).unwrap().0.degree(), 6);
    assert_eq!(extend_field(&gf(2), 72).unwrap().0.degree(), 6);
    assert_eq!(extend_field(&gf(2), 8).unwrap().0.degree(), 2);
}

#[test]
fn lucas_binomials_match_exact_integers() {
    let mut row = vec![1u128];
    for a in 0..=100u64 {
        for (b, &c) in row.iter().enumerate() {
            assert_eq!(binom_mod_p(a, b as u64, 5), (c % 5) as u32, "C({a},{b})");
        }
        let mut next = vec![1u128; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    assert_eq!(binom_mod_p(3, 7, 5), 0);
    assert_eq!(multi_binom(&[4, 0], &[4, 0], 5).unwrap(), 0);
    assert_eq!(multi_binom(&[1, 1], &[2, 1], 5).unwrap(), 1);
}

#[test]
fn divided_power_products() {
    let f = gf(1);
    assert_eq!(x(&f, [1, 1]).multiply(&x(&f, [2, 1])).unwrap(), x(&f, [3, 2]));
    let x1 = x(&f, [1, 0]);
    let sq = x1.multiply(&x1).unwrap();
    assert_eq!(sq, x(&f, [2, 0]).scale_int(2));
    let leibniz = x1.multiply(&x1.partial(0).unwrap()).unwrap().scale_int(2);
    assert_eq!(sq.partial(0).unwrap(), leibniz);
    assert_eq!(sq.partial(0).unwrap(), x1.scale_int(2));
}

#[test]
fn witt_brackets_by_hand() {
    let f = gf(1);
    let d1 = w(&f, [0, 0], 0, 1);
    assert_eq!(witt_bracket(&d1, &w(&f, [1, 0], 0, 1)).unwrap(), d1);
    let lhs = witt_bracket(&w(&f, [1, 0], 1, 1), &w(&f, [0, 1], 0, 1)).unwrap();
    assert_eq!(lhs, w(&f, [1, 0], 0, 1).sub(&w(&f, [0, 1], 1, 1)).unwrap());
    let euler = w(&f, [1, 0], 0, 1).add(&w(&f, [0, 1], 1, 1)).unwrap();
    assert_eq!(euler.apply(&x(&f, [1, 1])).unwrap(), x(&f, [1, 1]).scale_int(2));
    let dv = w(&f, [2, 0], 0, 1).add(&w(&f, [1, 1], 1, 1)).unwrap().divergence().unwrap();
    assert_eq!(dv, x(&f, [1, 0]).scale_int(2));
}

#[test]
fn melikyan_brackets_by_hand() {
    let f = gf(1);
    let d1 = MelikyanElement::from_w(w(&f, [0, 0], 0, 1)).unwrap();
    assert_eq!(m_bracket(&d1, &o(&f, [1, 0])).unwrap(), o(&f, [0, 0]));
    // 2(x1 d1 x2 - x2 d1 x1) d~2 + 2(x2 d2 x1 - x1 d2 x2) d~1 = -2 x2 d~2 - 2 x1 d~1
    let want = wt(&f, [0, 1], 1, 3).add(&wt(&f, [1, 0], 0, 3)).unwrap();
    assert_eq!(m_bracket(&o(&f, [1, 0]), &o(&f, [0, 1])).unwrap(), want);
    // x1 - 2 div(x1 d1) x1
    let e = MelikyanElement::from_w(w(&f, [1, 0], 0, 1)).unwrap();
    assert_eq!(m_bracket(&e, &o(&f, [1, 0])).unwrap(), o(&f, [1, 0]).scale(f.from_int(4)));
    // [f1 d~1 + f2 d~2, g1 d~1 + g2 d~2] = f1 g2 - f2 g1
    assert_eq!(m_bracket(&wt(&f, [1, 0], 0, 1), &wt(&f, [0, 1], 1, 1)).unwrap(), o(&f, [1, 1]));
    // (ad d1)^3 x^(3,0) = 1
    let mut y = o(&f, [3, 0]);
    for _ in 0..3 {
        y = m_bracket(&d1, &y).unwrap();
    }
    assert_eq!(y, o(&f, [0, 0]));
}

#[test]
fn degrees_from_closed_forms() {
    let a = alg(1);
    let at = |b, e| a.index_of(&idx(b, e));
    assert_eq!(a.deg_zz(at(Block::T2, [1, 1])), (4, 1));
    assert_eq!(a.deg_standard(at(Block::T2, [1, 1])), (1, 1));
    assert_eq!(deg_w(&mi([4, 4])), 7);
    assert_eq!(a.deg_canonical(at(Block::W1, [4, 4])), 21);
    assert_eq!(a.canonical_degree_range(), (-3, 23));
    for i in 0..a.dim() {
        let b = a.basis_index(i);
        let e = b.index.entries();
        let (u, v) = (e[0] as i64, e[1] as i64);
        let zz = match b.block {
            Block::O => (3 * u - 1, 3 * v - 1),
            Block::W1 => (3 * u - 3, 3 * v),
            Block::W2 => (3 * u, 3 * v - 3),
            Block::T1 => (3 * u - 2, 3 * v + 1),
            Block::T2 => (3 * u + 1, 3 * v - 2),
        };
        assert_eq!(a.deg_zz(i), zz, "{b}");
        assert_eq!(a.deg_standard(i), ((zz.0 - zz.1) / 3, zz.1), "{b}");
        assert_eq!(a.deg_canonical(i), zz.0 + zz.1, "{b}");
    }
    let top: Vec<usize> = top_degree_indices(&a);
    assert_eq!(top, vec![at(Block::T1, [4, 4]), at(Block::T2, [4, 4])]);
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

// The index of the subgroup of Z^2 spanned by `v` is the gcd of its 2x2 minors.
fn lattice_index(v: &[(i64, i64)]) -> i64 {
    let mut g = 0;
    for (i, a) in v.iter().enumerate() {
        for b in &v[i + 1..] {
            g = gcd(g, a.0 * b.1 - a.1 * b.0);
        }
    }
    g
}

#[test]
fn support_indices_from_minors() {
    let a = alg(1);
    let zz: Vec<(i64, i64)> = (0..a.dim()).map(|i| a.deg_zz(i)).collect();
    let st: Vec<(i64, i64)> = (0..a.dim()).map(|i| a.deg_standard(i)).collect();
    assert_eq!(lattice_index(&zz), 3);
    assert_eq!(lattice_index(&st), 1);
    let as_pairs = |g: MonomialGrading| -> Vec<(i64, i64)> {
        g.support().iter().map(|e| (e.free[0], e.free[1])).collect()
    };
    assert_eq!(lattice_index(&as_pairs(gamma_bar(&a))), 3);
    assert_eq!(lattice_index(&as_pairs(gamma_m(&a))), 1);
}

#[test]
fn characters_of_small_cyclic_groups() {
    let f = gf(2);
    let b = beta(&f).unwrap();
    let z3 = AbelianGroup::cyclic(3).unwrap();
    let mut values: Vec<Fq> = character_group(&z3, &f).unwrap().iter().map(|c| c.values()[0]).collect();
    values.sort();
    let mut want = vec![Fq::ONE, b, f.mul(b, b)];
    want.sort();
    assert_eq!(values, want);
    let z6 = AbelianGroup::cyclic(6).unwrap();
    let reduce = GroupHom::new(&z6, &z3, vec![z3.generator(0)]).unwrap();
    let chi = character_group(&z3, &f).unwrap().into_iter().find(|c| c.values()[0] == b).unwrap();
    let zeta = pullback_character(&chi, &reduce).unwrap();
    assert_eq!(zeta.eval(&z6.generator(0)).unwrap(), b);
    assert_eq!(zeta.eval(&z6.from_coords(&[4]).unwrap()).unwrap(), b);
    assert_eq!(zeta.eval(&z6.from_coords(&[5]).unwrap()).unwrap(), f.mul(b, b));
}

#[test]
fn lambda_values_and_kernel_by_enumeration() {
    let a = alg(2);
    let f = a.field().clone();
    let b = beta(&f).unwrap();
    let g = f.primitive_element();
    let t = TorusParameter::new(g, f.mul(g, g)).unwrap();
    let d1 = a.index_of(&idx(Block::W1, [0, 0]));
    assert_eq!(lambda_diagonal(&a, &t)[d1], f.pow(g, -3));
    let b2 = f.mul(b, b);
    let one = a.index_of(&idx(Block::O, [0, 0]));
    assert_eq!(lambda_diagonal(&a, &TorusParameter::new(b2, b2).unwrap())[one], b2);
    let brute: Vec<TorusParameter> = torus_points(&f)
        .into_iter()
        .filter(|t| lambda_diagonal(&a, t).iter().all(|&c| c == Fq::ONE))
        .collect();
    assert_eq!(brute.len(), 3);
    let k = kernel_of_lambda(&a);
    assert!(k.complete);
    assert_eq!(k.elements.len(), 3);
    assert!(brute.iter().all(|t| k.elements.contains(t)));
    let a5 = alg(1);
    let brute5 = torus_points(a5.field())
        .into_iter()
        .filter(|t| lambda_diagonal(&a5, t).iter().all(|&c| c == Fq::ONE))
        .count();
    assert_eq!(brute5, 1);
}

#[test]
fn theta_scalars() {
    let a = alg(2);
    let f = a.field().clone();
    let b = beta(&f).unwrap();
    let th = theta(&a).unwrap();
    let t1 = a.index_of(&idx(Block::T1, [0, 0]));
    assert_eq!(th.matrix()[(t1, t1)], b);
}

#[test]
fn sigma_constants_by_brute_force() {
    for k in [1, 2] {
        let a = alg(k);
        let f = a.field().clone();
        let sols: Vec<(Fq, Fq)> = f
            .nonzero_elements()
            .flat_map(|c| f.nonzero_elements().map(move |d| (c, d)))
            .filter(|&(c, d)| d == f.neg(f.mul(c, c)) && c == f.neg(f.mul(d, d)))
            .collect();
        let exts = sigma_extensions(&a).unwrap();
        assert_eq!(exts.len(), sols.len(), "GF(5^{k})");
        for e in &exts {
            assert!(sols.contains(&(e.c_o, e.c_t)));
        }
        let m1 = f.neg(Fq::ONE);
        let s = sigma_m(&a).unwrap();
        assert_eq!((s.c_o, s.c_t), (m1, m1));
        let one = a.index_of(&idx(Block::O, [0, 0]));
        assert_eq!(s.map.matrix()[(one, one)], m1);
        let sw = sigma_w(a.shape(), &f).unwrap();
        let d1 = a.index_of(&idx(Block::W1, [0, 0])) - a.w_indices().start;
        let d2 = a.index_of(&idx(Block::W2, [0, 0])) - a.w_indices().start;
        assert_eq!(sw.matrix()[(d2, d1)], Fq::ONE);
    }
    assert_eq!(sigma_extensions(&alg(1)).unwrap().len(), 1);
}

#[test]
fn eta_of_a_cyclic_grading_is_the_expected_diagonal() {
    let a = alg(2);
    let f = a.field().clone();
    let b = beta(&f).unwrap();
    let z3 = AbelianGroup::cyclic(3).unwrap();
    let z2 = AbelianGroup::free(2);
    let first = GroupHom::new(&z2, &z3, vec![z3.generator(0), z3.zero()]).unwrap();
    let g = standard_grading(&a, &first).unwrap().to_grading();
    let chi = character_group(&z3, &f).unwrap().into_iter().find(|c| c.values()[0] == b).unwrap();
    let e = eta(&g, &chi).unwrap();
    assert!(e.is_diagonal());
    for i in 0..a.dim() {
        let (s, _) = a.deg_standard(i);
        assert_eq!(e.matrix()[(i, i)], f.pow(b, s.rem_euclid(3)));
    }
}

#[test]
fn theta_eigenspaces_are_canonical_degrees_mod_three() {
    let a = alg(2);
    let z3 = AbelianGroup::cyclic(3).unwrap();
    let got = eigenspace_grading(&a, &[theta(&a).unwrap()], &z3).unwrap();
    let labels = (0..a.dim()).map(|i| z3.from_coords(&[(2 * a.deg_canonical(i)).rem_euclid(3)]).unwrap()).collect();
    let want = MonomialGrading::new(&a, &z3, labels).unwrap().to_grading();
    assert!(got.same_as(&want));
}

#[test]
fn exp_ad_of_top_degree() {
    let a = alg(2);
    let y = a.element(a.index_of(&idx(Block::T1, [4, 4])));
    let e = exp_ad(&a, &y).unwrap();
    assert!(e.is_verified_automorphism());
    assert!(!e.is_identity());
}

#[test]
fn twisting_standard_gradings() {
    let a = alg(2);
    let f = a.field().clone();
    let bar = gamma_bar(&a).to_grading();
    let t = TorusParameter::new(f.primitive_element(), f.from_int(3)).unwrap();
    let l = lambda(&a, &t).unwrap().verified().unwrap();
    assert!(bar.apply_automorphism(&l).unwrap().same_as(&bar));
    let y = a.element(top_degree_indices(&a)[0]);
    let twisted = gamma_m(&a).to_grading().apply_automorphism(&exp_ad(&a, &y).unwrap()).unwrap();
    assert!(twisted.verify().is_ok());
    let non_monomial = twisted.components().iter().flat_map(|c| &c.basis).any(|v| v.iter().filter(|c| !c.is_zero()).count() > 1);
    assert!(non_monomial);
}

#[test]
fn coarsenings_of_the_standard_grading() {
    let a = alg(1);
    let z = AbelianGroup::free(1);
    let z2 = AbelianGroup::free(2);
    let to_z = GroupHom::new(&z2, &z, vec![z.from_coords(&[3]).unwrap(), z.from_coords(&[2]).unwrap()]).unwrap();
    let g = standard_grading(&a, &to_z).unwrap();
    for i in 0..a.dim() {
        assert_eq!(g.degree(i).free, vec![a.deg_canonical(i)]);
    }
    let z4 = AbelianGroup::cyclic(4).unwrap();
    let to_z4 = GroupHom::new(&z2, &z4, vec![z4.from_coords(&[1]).unwrap(), z4.from_coords(&[2]).unwrap()]).unwrap();
    assert!(standard_grading(&a, &to_z4).unwrap().verify().is_ok());
    let z3sq = AbelianGroup::new(0, &[3, 3]).unwrap();
    let reduce = GroupHom::new(&z2, &z3sq, z3sq.generators()).unwrap();
    let c = gamma_bar(&a).to_grading().coarsen(&reduce).unwrap();
    assert!(c.components().len() <= 9);
    assert_eq!(c.components().iter().map(|c| c.basis.len()).sum::<usize>(), 125);
}

#[test]
fn swap_twist_negates_the_first_standard_coordinate() {
    let a = alg(2);
    let z3 = AbelianGroup::cyclic(3).unwrap();
    let z2 = AbelianGroup::free(2);
    let phi = GroupHom::new(&z2, &z3, vec![z3.generator(0), z3.zero()]).unwrap();
    let plan = TwistPlan { phi, factors: vec![TwistFactor::SigmaM] };
    let r = run_plan(&a, &plan, 0, "swap".into());
    assert!(r.certificate.passed());
    for (from, to) in r.theta.unwrap() {
        assert_eq!(to, z3.neg(&from));
    }
    let gens = &r.certificate.report.unwrap()["theta_generators"];
    assert_eq!(gens, &serde_json::json!(["(2~)"]));
}
