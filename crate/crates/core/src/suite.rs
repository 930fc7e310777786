//! Verification batteries behind `melikyan verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::automorphism::{
    beta, centralizes_torus, exp_ad, in_torus, is_o_automorphism, kernel_of_lambda, lambda, lambda_diagonal,
    mu3_w_fixing_diagonals, normalizes_torus, pi_restrict, sigma_extensions, sigma_m, sigma_w, theta,
    top_degree_indices, torus_points, upsilon, witt_torus, Endomorphism, InducedMap, TorusParameter,
};
use crate::certificate::{run_checks, Certificate, CheckSpec, Outcome};
use crate::error::{Error, Result};
use crate::field::{extend_field, Fq, GaloisField};
use crate::grading::{
    augmentation, canonical_grading, gamma_bar, gamma_m, phi_m_hom, recover_homomorphism, standard_grading, Component,
    Grading, GradingWitness, MonomialGrading,
};
use crate::group::{character_group, generator_characters, pullback_character, subgroup_generated, AbelianGroup, GroupHom};
use crate::json::algebra_to_json;
use crate::linalg::SparseVec;
use crate::melikyan::{Block, MelikyanAlgebra};
use crate::witt;

pub const SUITES: [&str; 7] = ["jacobi", "grading", "torus", "sigma", "duality", "simplicity", "all"];

/// Largest dimension at which the exhaustive sweeps (all Jacobi triples,
/// every torus point, every basis element) run by default.
pub const EXHAUSTIVE_MAX_DIM: usize = 125;
pub const RANDOM_JACOBI_SAMPLES: usize = 1_000_000;
pub const MULTIPLICATIVITY_PAIRS: usize = 10_000;
pub const RESTRICTION_SAMPLES: usize = 100;
pub const CONJUGATION_SAMPLES: usize = 100;
pub const RECOVERY_PAIRS: usize = 25;
pub const DUALITY_HOMS_PER_GROUP: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub n: [u32; 2],
    pub field_degree: u32,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { n: [1, 1], field_degree: 2, seed: 0 }
    }
}

/// Shared state of one suite run. Each check draws from its own ChaCha
/// stream so results do not depend on scheduling.
pub struct Context {
    pub alg: MelikyanAlgebra,
    pub seed: u64,
}

impl Context {
    pub fn new(cfg: &SuiteConfig) -> Result<Self> {
        let field = GaloisField::new(5, cfg.field_degree)?;
        Ok(Context { alg: MelikyanAlgebra::new(cfg.n, &field)?, seed: cfg.seed })
    }

    pub fn field(&self) -> &GaloisField {
        self.alg.field()
    }

    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }

    fn exhaustive(&self) -> bool {
        self.alg.dim() <= EXHAUSTIVE_MAX_DIM
    }

    fn has_beta(&self) -> bool {
        beta(self.field()).is_ok()
    }

    fn equal_shape(&self) -> bool {
        let [a, b] = self.alg.n();
        a == b
    }

    fn name(&self, i: usize) -> String {
        self.alg.basis_index(i).to_string()
    }

    fn sparse_json(&self, v: &SparseVec) -> Value {
        let f = self.field();
        Value::Array(v.iter().map(|&(i, x)| json!([self.name(i), f.display(x)])).collect())
    }

    fn grading_witness(&self, w: &GradingWitness) -> Value {
        json!({
            "left": w.left.to_string(),
            "right": w.right.to_string(),
            "u": self.sparse_json(&w.u),
            "v": self.sparse_json(&w.v),
            "bracket": self.sparse_json(&w.bracket),
        })
    }

    fn torus_json(&self, t: &TorusParameter) -> Value {
        json!([self.field().display(t.t1), self.field().display(t.t2)])
    }

    fn random_unit(&self, rng: &mut ChaCha8Rng) -> Fq {
        let q = self.field().order() as i64;
        self.field().primitive_power(rng.gen_range(0..q - 1))
    }

    fn random_torus(&self, rng: &mut ChaCha8Rng) -> TorusParameter {
        TorusParameter { t1: self.random_unit(rng), t2: self.random_unit(rng) }
    }

    /// Every torus point when exhaustive, otherwise a seeded sample of 24.
    fn torus_sample(&self, stream: u64) -> Vec<TorusParameter> {
        if self.exhaustive() {
            torus_points(self.field())
        } else {
            let mut rng = self.rng(stream);
            (0..24).map(|_| self.random_torus(&mut rng)).collect()
        }
    }
}

/// Runs a named suite and assembles its certificate.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Certificate> {
    if !SUITES.contains(&name) {
        return Err(Error::UnknownSuite(name.into()));
    }
    if name == "sigma" && cfg.n[0] != cfg.n[1] {
        return Err(Error::UnequalShape(cfg.n[0], cfg.n[1]));
    }
    let ctx = Context::new(cfg)?;
    let specs = match name {
        "jacobi" => jacobi_checks(&ctx),
        "grading" => grading_checks(&ctx),
        "torus" => torus_checks(&ctx),
        "sigma" => sigma_checks(&ctx),
        "duality" => duality_checks(&ctx),
        "simplicity" => simplicity_checks(&ctx),
        _ => {
            let mut all = jacobi_checks(&ctx);
            all.extend(grading_checks(&ctx));
            all.extend(torus_checks(&ctx));
            all.extend(sigma_checks(&ctx));
            all.extend(duality_checks(&ctx));
            all.extend(simplicity_checks(&ctx));
            all
        }
    };
    let checks = run_checks(specs);
    let command = format!(
        "verify {name} --n {},{} --field-degree {} --seed {}",
        cfg.n[0], cfg.n[1], cfg.field_degree, cfg.seed
    );
    Ok(Certificate::new(command, algebra_to_json(&ctx.alg), ctx.field().descriptor(), cfg.seed, checks))
}

pub fn jacobi_checks(ctx: &Context) -> Vec<CheckSpec<'_>> {
    let table = ctx.alg.table();
    let d = ctx.alg.dim();
    vec![
        CheckSpec::new("anticommutativity", "[y, z] = -[z, y] on all canonical basis pairs", move || {
            Ok(match table.anticommutativity_failure() {
                None => Outcome::pass_with(json!({"pairs": d * d})),
                Some((i, j)) => Outcome::fail(json!({"pair": [ctx.name(i), ctx.name(j)]})),
            })
        }),
        CheckSpec::new("jacobi", "[y, [z, w]] + [z, [w, y]] + [w, [y, z]] = 0", move || {
            let (failure, detail) = if ctx.exhaustive() {
                (table.jacobi_failure(), json!({"mode": "exhaustive", "triples": d * d * d}))
            } else {
                let s = RANDOM_JACOBI_SAMPLES;
                (table.jacobi_failure_random(s, ctx.seed), json!({"mode": "random", "triples": s, "seed": ctx.seed}))
            };
            Ok(match failure {
                None => Outcome::pass_with(detail),
                Some((a, b, c)) => Outcome::fail(json!({
                    "triple": [ctx.name(a), ctx.name(b), ctx.name(c)],
                    "jacobiator": ctx.sparse_json(&table.jacobiator(a, b, c)),
                })),
            })
        }),
        CheckSpec::new("witt-jacobi", "W(2; n) is a Lie algebra under [D, E]", move || {
            let t = witt::structure_table(ctx.alg.shape(), ctx.field());
            let failure = t.anticommutativity_failure().map(|(i, j)| (i, j, j)).or_else(|| {
                if t.dim() <= 2 * EXHAUSTIVE_MAX_DIM {
                    t.jacobi_failure()
                } else {
                    t.jacobi_failure_random(100_000, ctx.seed)
                }
            });
            Ok(match failure {
                None => Outcome::pass_with(json!({"dim": t.dim()})),
                Some(x) => Outcome::fail(json!({"triple": [x.0, x.1, x.2]})),
            })
        }),
    ]
}

fn perturbed_general_grading(alg: &MelikyanAlgebra) -> Result<Grading> {
    // replace d_1 by d_1 + x_1 inside its component of the fine grading
    let g = gamma_m(alg).to_grading();
    let d1 = alg.index(Block::W1, [0, 0])?;
    let x1 = alg.index(Block::O, [1, 0])?;
    let mut comps: Vec<Component> = g.components().to_vec();
    for c in &mut comps {
        for v in &mut c.basis {
            if !v[d1].is_zero() {
                v[x1] = Fq::ONE;
            }
        }
    }
    Grading::new(alg, g.group(), comps)
}

fn random_hom_from_z2(rng: &mut ChaCha8Rng, target: &AbelianGroup) -> Result<GroupHom> {
    let mut images = Vec::with_capacity(2);
    for _ in 0..2 {
        let free: Vec<i64> = (0..target.rank()).map(|_| rng.gen_range(-3..=3)).collect();
        let tors: Vec<i64> = target.torsion().iter().map(|&m| rng.gen_range(0..m as i64)).collect();
        images.push(target.element(&free, &tors)?);
    }
    GroupHom::new(&AbelianGroup::free(2), target, images)
}

fn hom_json(phi: &GroupHom) -> Value {
    json!({"group": phi.codomain().to_string(), "images": phi.images().iter().map(|g| g.to_string()).collect::<Vec<_>>()})
}

pub fn grading_checks(ctx: &Context) -> Vec<CheckSpec<'_>> {
    let alg = &ctx.alg;
    let verify = |name: &'static str, anchor: &'static str, build: fn(&MelikyanAlgebra) -> MonomialGrading| {
        CheckSpec::new(name, anchor, move || {
            let g = build(alg);
            Ok(match g.verify() {
                Ok(()) => Outcome::pass_with(json!({"support": g.support().len()})),
                Err(w) => Outcome::fail(ctx.grading_witness(&w)),
            })
        })
    };
    vec![
        verify("gamma-bar", "the decomposition by (3a - 3e_i) on W is a Z^2-grading", gamma_bar),
        verify("gamma-m", "the decomposition by phi_M^{-1} of those degrees is a Z^2-grading", gamma_m),
        verify("canonical", "M_i = sum over a_1 + a_2 = i of M_(a_1, a_2) is a Z-grading", canonical_grading),
        CheckSpec::new("coarsening-identity", "M_i = sum over a_1 + a_2 = i of M_(a_1, a_2)", move || {
            let bar = gamma_bar(alg);
            let from_bar = bar.coarsen(&augmentation())?;
            let can = canonical_grading(alg);
            let via_m = gamma_m(alg).coarsen(&phi_m_hom())?;
            for i in 0..alg.dim() {
                if from_bar.degree(i) != can.degree(i) {
                    return Ok(Outcome::fail(json!({"basis": ctx.name(i), "coarsened": from_bar.degree(i).to_string(), "canonical": can.degree(i).to_string()})));
                }
                if via_m.degree(i) != bar.degree(i) {
                    return Ok(Outcome::fail(json!({"basis": ctx.name(i), "phi_M(gamma_m)": via_m.degree(i).to_string(), "gamma_bar": bar.degree(i).to_string()})));
                }
            }
            Ok(Outcome::pass_with(json!({"labels": alg.dim()})))
        }),
        CheckSpec::new("support-gamma-bar", "Supp of the Z^2-grading by deg_zz generates a subgroup of index 3", move || {
            let s = subgroup_generated(&AbelianGroup::free(2), &gamma_bar(alg).support())?;
            Ok(Outcome::expect(s.index() == Some(3), || json!({"index": s.index()})))
        }),
        CheckSpec::new("support-gamma-m", "Supp of the standard Z^2-grading generates Z^2", move || {
            let s = subgroup_generated(&AbelianGroup::free(2), &gamma_m(alg).support())?;
            Ok(Outcome::expect(s.is_whole_group(), || json!({"index": s.index()})))
        }),
        CheckSpec::new("recover-homomorphism", "a coarsening by phi determines phi on the support", move || {
            let mut rng = ctx.rng(11);
            let targets = [
                AbelianGroup::free(1),
                AbelianGroup::free(2),
                AbelianGroup::cyclic(2)?,
                AbelianGroup::cyclic(3)?,
                AbelianGroup::cyclic(4)?,
                AbelianGroup::cyclic(6)?,
                AbelianGroup::new(0, &[2, 2])?,
                AbelianGroup::new(1, &[3])?,
            ];
            let fines = [gamma_m(alg).to_grading(), gamma_bar(alg).to_grading()];
            for k in 0..RECOVERY_PAIRS {
                let fine = &fines[k % 2];
                let target = &targets[rng.gen_range(0..targets.len())];
                let phi = random_hom_from_z2(&mut rng, target)?;
                let coarse = fine.coarsen(&phi)?;
                let rec = recover_homomorphism(fine, &coarse)?;
                let whole = rec.support_subgroup.is_whole_group();
                let hom_ok = match &rec.hom {
                    Some(h) => h.images() == phi.images(),
                    None => !whole && !target.torsion().is_empty(),
                };
                if !rec.agrees_with(&phi) || !hom_ok {
                    return Ok(Outcome::fail(json!({"pair": k, "phi": hom_json(&phi), "recovered": rec.hom.as_ref().map(hom_json)})));
                }
            }
            Ok(Outcome::pass_with(json!({"pairs": RECOVERY_PAIRS})))
        }),
        CheckSpec::new("negative-swapped-labels", "a relabelled decomposition is not a grading", move || {
            let g = gamma_m(alg);
            let a = g.degree(alg.index(Block::W1, [0, 0])?).clone();
            let b = g.degree(alg.index(Block::O, [0, 0])?).clone();
            let bad = g.swap_labels(&a, &b);
            let w1 = bad.verify().err();
            let w2 = bad.to_grading().verify().err();
            Ok(match (w1, w2) {
                (Some(w1), Some(w2)) => Outcome::pass_with(json!({"monomial": ctx.grading_witness(&w1), "general": ctx.grading_witness(&w2)})),
                _ => Outcome::fail("perturbed grading accepted"),
            })
        }),
        CheckSpec::new("negative-perturbed-subspace", "replacing d_1 by d_1 + x_1 breaks the grading", move || {
            let bad = perturbed_general_grading(alg)?;
            Ok(match bad.verify() {
                Err(w) => Outcome::pass_with(ctx.grading_witness(&w)),
                Ok(()) => Outcome::fail("perturbed grading accepted"),
            })
        }),
        CheckSpec::new("negative-non-refinement", "recovery requires the fine grading to refine the coarse one", move || {
            let can = canonical_grading(alg).to_grading();
            let m = gamma_m(alg).to_grading();
            let perturbed = perturbed_general_grading(alg)?;
            let e1 = recover_homomorphism(&can, &m).err();
            let e2 = recover_homomorphism(&perturbed, &m).err();
            Ok(match (e1, e2) {
                (Some(a @ Error::NotRefinement { .. }), Some(b @ Error::NotRefinement { .. })) => {
                    Outcome::pass_with(json!([a.to_string(), b.to_string()]))
                }
                (a, b) => Outcome::fail(json!({"coarse-into-fine": format!("{a:?}"), "perturbed": format!("{b:?}")})),
            })
        }),
    ]
}

fn no_beta() -> Outcome {
    Outcome::Skip("the field has no primitive cube root of unity; use an even field degree".into())
}

pub fn torus_checks(ctx: &Context) -> Vec<CheckSpec<'_>> {
    let alg = &ctx.alg;
    let f = ctx.field();
    vec![
        CheckSpec::new("lambda-multiplicative", "lambda(s t) = lambda(s) lambda(t)", move || {
            let mut rng = ctx.rng(21);
            for _ in 0..MULTIPLICATIVITY_PAIRS {
                let s = ctx.random_torus(&mut rng);
                let t = ctx.random_torus(&mut rng);
                let ls = lambda_diagonal(alg, &s);
                let lt = lambda_diagonal(alg, &t);
                let lst = lambda_diagonal(alg, &s.mul(&t, f));
                if let Some(i) = (0..alg.dim()).find(|&i| lst[i] != f.mul(ls[i], lt[i])) {
                    return Ok(Outcome::fail(json!({"s": ctx.torus_json(&s), "t": ctx.torus_json(&t), "entry": ctx.name(i)})));
                }
            }
            Ok(Outcome::pass_with(json!({"pairs": MULTIPLICATIVITY_PAIRS})))
        }),
        CheckSpec::new("lambda-automorphism", "lambda(t) is an automorphism for every t", move || {
            let points = ctx.torus_sample(22);
            let bad = points.par_iter().find_map_first(|t| match lambda(alg, t).and_then(|l| l.verified()) {
                Ok(_) => None,
                Err(e) => Some((*t, e)),
            });
            Ok(match bad {
                None => Outcome::pass_with(json!({"points": points.len()})),
                Some((t, e)) => Outcome::fail(json!({"t": ctx.torus_json(&t), "error": e.to_string()})),
            })
        }),
        CheckSpec::new("lambda-kernel", "ker lambda = {(b, b^-1) : b^3 = 1}", move || {
            let k = kernel_of_lambda(alg);
            let expected = if k.complete { 3 } else { 1 };
            let ok = k.elements.len() == expected
                && k.elements.iter().all(|t| lambda(alg, t).is_ok_and(|l| l.is_identity()) && t.alpha(f) == Fq::ONE);
            Ok(Outcome::expect(ok, || json!({"kernel": k.elements.iter().map(|t| ctx.torus_json(t)).collect::<Vec<_>>()})))
        }),
        CheckSpec::new("theta", "Theta^3 = Id, pi(Theta) = Id_W, Theta acts by (beta^2)^i on canonical degree i", move || {
            if !ctx.has_beta() {
                return Ok(no_beta());
            }
            let th = theta(alg)?;
            if !th.pow(3)?.is_identity() {
                return Ok(Outcome::fail("Theta^3 != Id"));
            }
            if !pi_restrict(&th)?.is_identity() {
                return Ok(Outcome::fail("pi(Theta) != Id_W"));
            }
            let b2 = f.pow(beta(f)?, 2);
            for i in 0..alg.dim() {
                let want = f.pow(b2, alg.deg_canonical(i));
                if th.matrix()[(i, i)] != want {
                    return Ok(Outcome::fail(json!({"basis": ctx.name(i), "got": f.display(th.matrix()[(i, i)]), "want": f.display(want)})));
                }
            }
            Ok(Outcome::pass())
        }),
        CheckSpec::new("w-fixing-diagonals", "a W-fixing automorphism with cube-root entries is a power of Theta", move || {
            if !ctx.has_beta() {
                return Ok(no_beta());
            }
            let sols = mu3_w_fixing_diagonals(alg)?;
            let th = theta(alg)?;
            let powers = [Endomorphism::identity(alg), th.clone(), th.pow(2)?];
            let ok = sols.len() == 3 && sols.iter().all(|s| powers.contains(s));
            Ok(Outcome::expect(ok, || json!({"solutions": sols.len()})))
        }),
        CheckSpec::new("restriction-lifts", "restriction of T_M to W(2;n) is T_W", move || {
            let q = f.order() as u64;
            let (big, emb) = extend_field(f, 3 * (q - 1))?;
            let big_alg = MelikyanAlgebra::new(alg.n(), &big)?;
            let mut rng = ctx.rng(23);
            for _ in 0..RESTRICTION_SAMPLES {
                let s = ctx.random_torus(&mut rng);
                let psi = witt_torus(alg.shape(), f, &s)?;
                if !psi.is_automorphism() {
                    return Ok(Outcome::fail(json!({"s": ctx.torus_json(&s), "error": "T_W element is not an automorphism"})));
                }
                let (Some(t1), Some(t2)) = (big.nth_root(emb.map(s.t1), 3), big.nth_root(emb.map(s.t2), 3)) else {
                    return Ok(Outcome::fail(json!({"s": ctx.torus_json(&s), "error": "no cube roots"})));
                };
                let r = pi_restrict(&lambda(&big_alg, &TorusParameter::new(t1, t2)?)?)?;
                let m = psi.matrix();
                let d = m.rows();
                for i in 0..d {
                    for j in 0..d {
                        if r.matrix()[(i, j)] != emb.map(m[(i, j)]) {
                            return Ok(Outcome::fail(json!({"s": ctx.torus_json(&s), "entry": [i, j]})));
                        }
                    }
                }
            }
            Ok(Outcome::pass_with(json!({"samples": RESTRICTION_SAMPLES, "lift_field_degree": big.degree()})))
        }),
        CheckSpec::new("exp-ad-top", "exp(ad y) is an automorphism for y of top canonical degree", move || {
            let mut rng = ctx.rng(24);
            for &i in &top_degree_indices(alg) {
                let y = alg.element(i).scale(ctx.random_unit(&mut rng));
                let e = exp_ad(alg, &y)?;
                if e.is_identity() {
                    return Ok(Outcome::fail(json!({"y": ctx.name(i), "error": "exp(ad y) = Id"})));
                }
            }
            Ok(Outcome::pass())
        }),
        CheckSpec::new("negative-exp-ad", "exp_ad requires (ad y)^3 = 0", move || {
            let y = alg.element(alg.index(Block::W1, [0, 0])?);
            Ok(match exp_ad(alg, &y) {
                Err(Error::NilpotencyTooHigh) => Outcome::pass(),
                r => Outcome::fail(json!({"y": "d_1", "result": format!("{:?}", r.map(|_| "accepted"))})),
            })
        }),
        CheckSpec::new("negative-normalizer", "a unipotent non-central exp(ad y) does not normalize the torus", move || {
            let top = alg.index(Block::T1, top_exponent(alg))?;
            let e = exp_ad(alg, &alg.element(top))?;
            let v = normalizes_torus(&e, first(&ctx.torus_sample(25), 24))?;
            Ok(match v.failure {
                Some(t) => Outcome::pass_with(json!({"t": ctx.torus_json(&t)})),
                None => Outcome::fail("exp_ad(top) normalizes every sampled torus element"),
            })
        }),
        CheckSpec::new("centralizer-sample", "the centralizer of T_M is T_M", move || {
            let samples = ctx.torus_sample(26);
            let mut battery: Vec<(String, Endomorphism)> = Vec::new();
            let mut rng = ctx.rng(27);
            for k in 0..4 {
                let t = ctx.random_torus(&mut rng);
                battery.push((format!("lambda#{k}"), lambda(alg, &t)?.verified()?));
            }
            if ctx.has_beta() {
                battery.push(("Theta".into(), theta(alg)?));
            }
            let top = exp_ad(alg, &alg.element(alg.index(Block::T2, top_exponent(alg))?))?;
            battery.push(("exp_ad(top)".into(), top.clone()));
            battery.push(("exp_ad(top) lambda".into(), top.compose(&battery[0].1)?));
            if ctx.equal_shape() {
                let s = sigma_m(alg)?.map;
                battery.push(("sigma_M lambda".into(), s.compose(&battery[1].1)?));
                battery.push(("sigma_M".into(), s));
            }
            let mut central = Vec::new();
            for (name, psi) in &battery {
                if centralizes_torus(psi, &samples)? {
                    if !in_torus(psi).is_yes() {
                        return Ok(Outcome::fail(json!({"automorphism": name, "error": "centralizes but is not in the torus"})));
                    }
                    central.push(name.clone());
                }
            }
            Ok(Outcome::pass_with(json!({"battery": battery.len(), "centralizing": central})))
        }),
    ]
}

fn top_exponent(alg: &MelikyanAlgebra) -> [u32; 2] {
    let t = alg.shape().top();
    let e = t.entries();
    [e[0], e[1]]
}

pub fn sigma_checks(ctx: &Context) -> Vec<CheckSpec<'_>> {
    let alg = &ctx.alg;
    let f = ctx.field();
    if !ctx.equal_shape() {
        let [a, b] = alg.n();
        return vec![CheckSpec::new("sigma", "the swap extends only when n_1 = n_2", move || {
            Ok(Outcome::Skip(format!("n = ({a}, {b}) has n_1 != n_2")))
        })];
    }
    vec![
        CheckSpec::new("upsilon", "upsilon is an automorphism of O(2; n)", move || {
            let u = upsilon(alg.shape(), f)?;
            Ok(Outcome::expect(is_o_automorphism(alg.shape(), &u) && u.pow(2).is_identity(), || json!("upsilon fails")))
        }),
        CheckSpec::new("sigma-w", "sigma(D) = upsilon D upsilon^{-1} is an automorphism of W(2; n)", move || {
            let s = sigma_w(alg.shape(), f)?;
            Ok(match s.bracket_failure() {
                None if s.matrix().pow(2).is_identity() => Outcome::pass(),
                None => Outcome::fail("sigma^2 != Id"),
                Some((i, j)) => Outcome::fail(json!({"pair": [i, j]})),
            })
        }),
        CheckSpec::new("sigma-m", "sigma extends to sigma_M with constants (-1, -1), pi(sigma_M) = sigma, sigma_M^2 = Id", move || {
            let s = sigma_m(alg)?;
            let m1 = f.neg(Fq::ONE);
            if (s.c_o, s.c_t) != (m1, m1) {
                return Ok(Outcome::fail(json!({"constants": [f.display(s.c_o), f.display(s.c_t)]})));
            }
            if !s.map.is_verified_automorphism() {
                return Ok(Outcome::fail("sigma_M is not verified"));
            }
            if pi_restrict(&s.map)?.matrix() != sigma_w(alg.shape(), f)?.matrix() {
                return Ok(Outcome::fail("pi(sigma_M) != sigma"));
            }
            Ok(Outcome::expect(s.map.pow(2)?.is_identity(), || json!("sigma_M^2 != Id")))
        }),
        CheckSpec::new("sigma-conjugation", "sigma_M lambda(t_1, t_2) sigma_M^{-1} = lambda(t_2, t_1)", move || {
            let s = sigma_m(alg)?.map;
            let mut rng = ctx.rng(31);
            for _ in 0..CONJUGATION_SAMPLES {
                let t = ctx.random_torus(&mut rng);
                let c = s.conjugate(&lambda(alg, &t)?)?;
                if c.matrix() != lambda(alg, &t.swapped())?.matrix() {
                    return Ok(Outcome::fail(json!({"t": ctx.torus_json(&t)})));
                }
            }
            let v = normalizes_torus(&s, first(&ctx.torus_sample(32), 24))?;
            Ok(Outcome::expect(v.normalizes && v.induced == InducedMap::Swap, || json!({"induced": format!("{:?}", v.induced)})))
        }),
        CheckSpec::new("sigma-extensions", "the extensions of sigma are exactly sigma_M Theta^l", move || {
            let exts = sigma_extensions(alg)?;
            let s = sigma_m(alg)?.map;
            let expected: Vec<Endomorphism> = if ctx.has_beta() {
                let th = theta(alg)?;
                vec![s.clone(), s.compose(&th)?, s.compose(&th.pow(2)?)?]
            } else {
                vec![s]
            };
            let ok = exts.len() == expected.len() && exts.iter().all(|e| expected.contains(&e.map));
            Ok(Outcome::expect(ok, || {
                json!({"found": exts.iter().map(|e| [f.display(e.c_o), f.display(e.c_t)]).collect::<Vec<_>>()})
            }))
        }),
        CheckSpec::new("negative-in-torus-sigma", "sigma_M is not in the torus", move || {
            let s = sigma_m(alg)?.map;
            Ok(match in_torus(&s) {
                crate::automorphism::TorusVerdict::No { reason, entry } => Outcome::pass_with(json!({"reason": reason, "entry": entry})),
                _ => Outcome::fail("in_torus accepted sigma_M"),
            })
        }),
    ]
}

/// The groups of the duality battery.
pub fn duality_groups() -> Vec<AbelianGroup> {
    vec![
        AbelianGroup::cyclic(2).unwrap(),
        AbelianGroup::cyclic(3).unwrap(),
        AbelianGroup::cyclic(4).unwrap(),
        AbelianGroup::cyclic(6).unwrap(),
        AbelianGroup::new(0, &[2, 2]).unwrap(),
    ]
}

/// Eta of the generating characters, then the simultaneous eigenspaces.
pub fn dualize_and_recover(grading: &Grading) -> Result<Grading> {
    let chars = generator_characters(grading.group(), grading.field())?;
    let q = chars
        .iter()
        .map(|chi| crate::automorphism::eta(grading, chi)?.verified())
        .collect::<Result<Vec<_>>>()?;
    crate::automorphism::eigenspace_grading(grading.algebra(), &q, grading.group())
}

pub fn duality_checks(ctx: &Context) -> Vec<CheckSpec<'_>> {
    let alg = &ctx.alg;
    let f = ctx.field();
    let mut out = Vec::new();
    for (gi, group) in duality_groups().into_iter().enumerate() {
        let name = format!("duality-round-trip[{group}]");
        out.push(CheckSpec::new(&name, "eta then simultaneous eigenspaces recovers the standard grading", move || {
            if let Err(e) = generator_characters(&group, f) {
                return Ok(Outcome::Skip(e.to_string()));
            }
            let mut rng = ctx.rng(40 + gi as u64);
            for _ in 0..DUALITY_HOMS_PER_GROUP {
                let phi = random_hom_from_z2(&mut rng, &group)?;
                let g = standard_grading(alg, &phi)?.to_grading();
                let back = dualize_and_recover(&g)?;
                if !back.same_as(&g) {
                    return Ok(Outcome::fail(json!({"phi": hom_json(&phi)})));
                }
            }
            Ok(Outcome::pass_with(json!({"homs": DUALITY_HOMS_PER_GROUP})))
        }));
        let group2 = duality_groups().swap_remove(gi);
        let name = format!("eta-pullback[{group2}]");
        out.push(CheckSpec::new(&name, "eta(coarsen(Gamma, phi), chi) = eta(Gamma, chi o phi)", move || {
            let chars = match character_group(&group2, f) {
                Ok(c) => c,
                Err(e) => return Ok(Outcome::Skip(e.to_string())),
            };
            let fine = gamma_m(alg).to_grading();
            let mut rng = ctx.rng(50 + gi as u64);
            let mut count = 0;
            for _ in 0..DUALITY_HOMS_PER_GROUP {
                let phi = random_hom_from_z2(&mut rng, &group2)?;
                let coarse = fine.coarsen(&phi)?;
                for chi in &chars {
                    let lhs = crate::automorphism::eta(&coarse, chi)?;
                    let rhs = crate::automorphism::eta(&fine, &pullback_character(chi, &phi)?)?;
                    if lhs != rhs {
                        return Ok(Outcome::fail(json!({"phi": hom_json(&phi), "chi": format!("{chi:?}")})));
                    }
                    count += 1;
                }
            }
            Ok(Outcome::pass_with(json!({"identities": count})))
        }));
    }
    out.push(CheckSpec::new("negative-order-5", "characters of a group with elements of order 5 do not separate components in characteristic 5", move || {
        let z5 = AbelianGroup::cyclic(5)?;
        let a = character_group(&z5, f).err();
        let b = generator_characters(&z5, f).err();
        let is_char = |e: &Option<Error>| {
            matches!(e, Some(Error::Field(crate::field::FieldError::OrderDivisibleByCharacteristic { .. })))
        };
        Ok(if is_char(&a) && is_char(&b) {
            Outcome::pass_with(json!(a.unwrap().to_string()))
        } else {
            Outcome::fail(json!({"character_group": format!("{a:?}"), "generators": format!("{b:?}")}))
        })
    }));
    out
}

pub fn simplicity_checks(ctx: &Context) -> Vec<CheckSpec<'_>> {
    let alg = &ctx.alg;
    vec![CheckSpec::new("simplicity-probe", "the ideal generated by any basis element is M(2; n)", move || {
        let indices: Vec<usize> = if ctx.exhaustive() {
            (0..alg.dim()).collect()
        } else {
            let mut rng = ctx.rng(61);
            (0..25).map(|_| rng.gen_range(0..alg.dim())).collect()
        };
        let bad = indices.par_iter().find_map_first(|&i| {
            let d = alg.ideal_closure_dim(i);
            (d != alg.dim()).then_some((i, d))
        });
        Ok(match bad {
            None => Outcome::pass_with(json!({"seeds": indices.len()})),
            Some((i, d)) => Outcome::fail(json!({"basis": ctx.name(i), "closure_dim": d})),
        })
    })]
}

fn first<T>(v: &[T], k: usize) -> &[T] {
    &v[..k.min(v.len())]
}
