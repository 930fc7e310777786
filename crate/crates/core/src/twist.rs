//! Twist a standard grading by an automorphism, recover it from the dual
//! quasi-torus action, and untwist.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::automorphism::{eta, eigenspace_grading, exp_ad, lambda, sigma_m, top_degree_indices, Endomorphism, TorusParameter};
use crate::certificate::{Certificate, Check, Verdict};
use crate::error::{Error, Result};
use crate::field::GaloisField;
use crate::grading::{standard_grading, Grading};
use crate::group::{generator_characters, AbelianGroup, GroupElement, GroupHom};
use crate::json::{algebra_to_json, hom_spec_to_json};
use crate::melikyan::{MelikyanAlgebra, MelikyanElement};

/// One factor of the twisting automorphism.
#[derive(Clone, Debug, PartialEq)]
pub enum TwistFactor {
    Lambda(TorusParameter),
    /// `exp(ad y)` for `y` of top canonical degree.
    ExpAd(MelikyanElement),
    SigmaM,
}

impl TwistFactor {
    pub fn build(&self, alg: &MelikyanAlgebra) -> Result<Endomorphism> {
        match self {
            TwistFactor::Lambda(t) => lambda(alg, t)?.verified(),
            TwistFactor::ExpAd(y) => exp_ad(alg, y),
            TwistFactor::SigmaM => Ok(sigma_m(alg)?.map),
        }
    }

    fn describe(&self, f: &GaloisField) -> Value {
        match self {
            TwistFactor::Lambda(t) => json!({"lambda": [f.display(t.t1), f.display(t.t2)]}),
            TwistFactor::ExpAd(y) => {
                let terms: Vec<Value> = crate::linalg::to_sparse(&y.to_dense()).iter().map(|&(i, c)| json!([i, f.display(c)])).collect();
                json!({"exp_ad": terms})
            }
            TwistFactor::SigmaM => json!("sigma_M"),
        }
    }
}

/// A standard grading and the automorphism used to twist it; the factors are
/// composed left to right, so `[A, B]` means `A ∘ B`.
#[derive(Clone, Debug)]
pub struct TwistPlan {
    pub phi: GroupHom,
    pub factors: Vec<TwistFactor>,
}

/// Finite groups the pipeline draws from, in seed order.
pub fn pipeline_groups() -> Vec<AbelianGroup> {
    [vec![3], vec![2], vec![4], vec![6], vec![2, 2], vec![3, 3], vec![2, 4]]
        .iter()
        .map(|t| AbelianGroup::new(0, t).expect("invariant factors"))
        .collect()
}

const TWIST_PATTERNS: [&[u8]; 6] = [b"L", b"E", b"S", b"EL", b"LS", b"ELS"];

impl TwistPlan {
    /// Deterministic plan for `seed`: the group and the factor pattern cycle
    /// with the seed, the parameters are drawn from ChaCha8.
    pub fn from_seed(alg: &MelikyanAlgebra, seed: u64) -> Result<Self> {
        let f = alg.field();
        let q = f.order() as u64;
        let groups: Vec<AbelianGroup> =
            pipeline_groups().into_iter().filter(|g| (q - 1) % g.exponent().unwrap() == 0).collect();
        if groups.is_empty() {
            return Err(Error::InvalidGroup(format!("no pipeline group embeds in GF({q})^x")));
        }
        let group = groups[(seed % groups.len() as u64) as usize].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let images = (0..2)
            .map(|_| {
                let t: Vec<i64> = group.torsion().iter().map(|&m| rng.gen_range(0..m as i64)).collect();
                group.element(&[], &t)
            })
            .collect::<Result<Vec<_>>>()?;
        let phi = GroupHom::new(&AbelianGroup::free(2), &group, images)?;
        let [n1, n2] = alg.n();
        let unit = |rng: &mut ChaCha8Rng| f.primitive_power(rng.gen_range(0..q as i64 - 1));
        let mut factors = Vec::new();
        for &c in TWIST_PATTERNS[(seed % TWIST_PATTERNS.len() as u64) as usize] {
            match c {
                b'L' => factors.push(TwistFactor::Lambda(TorusParameter { t1: unit(&mut rng), t2: unit(&mut rng) })),
                b'E' => {
                    let mut y = MelikyanElement::zero(alg.shape(), f)?;
                    for i in top_degree_indices(alg) {
                        y = y.add(&alg.element(i).scale(unit(&mut rng)))?;
                    }
                    factors.push(TwistFactor::ExpAd(y));
                }
                _ if n1 == n2 => factors.push(TwistFactor::SigmaM),
                _ => {}
            }
        }
        if factors.is_empty() {
            factors.push(TwistFactor::Lambda(TorusParameter { t1: unit(&mut rng), t2: unit(&mut rng) }));
        }
        Ok(TwistPlan { phi, factors })
    }

    pub fn automorphism(&self, alg: &MelikyanAlgebra) -> Result<Endomorphism> {
        let mut psi = Endomorphism::identity(alg);
        for factor in &self.factors {
            psi = psi.compose(&factor.build(alg)?)?;
        }
        Ok(psi)
    }
}

/// Outcome of the pipeline beyond the per-step checks.
#[derive(Clone, Debug)]
pub struct TwistResult {
    pub certificate: Certificate,
    pub standard: Option<Grading>,
    pub twisted: Option<Grading>,
    pub recovered: Option<Grading>,
    /// Label correspondence from the recovered grading to the standard one
    /// when both have the same components as subspaces.
    pub theta: Option<Vec<(GroupElement, GroupElement)>>,
}

struct Steps {
    checks: Vec<Check>,
    failed: bool,
}

impl Steps {
    fn run<T>(&mut self, name: &str, anchor: &str, body: impl FnOnce() -> Result<(bool, T, Value)>) -> Option<T> {
        if self.failed {
            self.checks.push(Check {
                name: name.into(),
                anchor: anchor.into(),
                verdict: Verdict::Skip,
                witness: None,
                detail: Some(json!("an earlier step failed")),
                wall_time_ms: 0,
            });
            return None;
        }
        let start = Instant::now();
        let r = body();
        let wall_time_ms = start.elapsed().as_millis() as u64;
        let (verdict, witness, detail, value) = match r {
            Ok((true, v, d)) => (Verdict::Pass, None, (!d.is_null()).then_some(d), Some(v)),
            Ok((false, _, w)) => (Verdict::Fail, Some(if w.is_null() { json!(format!("{name} failed")) } else { w }), None, None),
            Err(e) => (Verdict::Fail, Some(json!(format!("error: {e}"))), None, None),
        };
        self.failed |= verdict == Verdict::Fail;
        self.checks.push(Check { name: name.into(), anchor: anchor.into(), verdict, witness, detail, wall_time_ms });
        value
    }
}

/// `twist-recover --seed S --n N1,N2 --field-degree K`.
pub fn twist_recover(n: [u32; 2], field_degree: u32, seed: u64) -> Result<TwistResult> {
    let field = GaloisField::new(5, field_degree)?;
    let alg = MelikyanAlgebra::new(n, &field)?;
    let plan = TwistPlan::from_seed(&alg, seed)?;
    let command = format!("twist-recover --n {},{} --field-degree {field_degree} --seed {seed}", n[0], n[1]);
    Ok(run_plan(&alg, &plan, seed, command))
}

/// Runs the pipeline for an explicit plan.
pub fn run_plan(alg: &MelikyanAlgebra, plan: &TwistPlan, seed: u64, command: String) -> TwistResult {
    let f = alg.field();
    let group = plan.phi.codomain().clone();
    let mut steps = Steps { checks: Vec::new(), failed: false };

    let standard = steps.run("standard-grading", "M_g = span{y : phi(deg y) = g} is a G-grading", || {
        let g = standard_grading(alg, &plan.phi)?;
        Ok(match g.verify() {
            Ok(()) => (true, g.to_grading(), json!({"support": g.support().len()})),
            Err(w) => (false, g.to_grading(), json!(w.to_string())),
        })
    });
    let psi = steps.run("twist-automorphism", "the twisting map preserves the bracket", || {
        let psi = plan.automorphism(alg)?;
        let ok = psi.bracket_failure().is_none() && psi.is_invertible();
        Ok((ok, psi, Value::Null))
    });
    let twisted = steps.run("twisted-grading", "Psi(Gamma) is a G-grading", || {
        let g = standard.as_ref().unwrap().apply_automorphism(psi.as_ref().unwrap())?;
        Ok(match g.verify() {
            Ok(()) => (true, g, Value::Null),
            Err(w) => (false, g, json!(w.to_string())),
        })
    });
    let generators = steps.run("twisted-eta", "Psi eta(Gamma, chi) Psi^{-1} = eta(Psi(Gamma), chi)", || {
        let psi = psi.as_ref().unwrap();
        let chars = generator_characters(&group, f)?;
        let mut q = Vec::new();
        for (j, chi) in chars.iter().enumerate() {
            let conj = psi.conjugate(&eta(standard.as_ref().unwrap(), chi)?)?;
            let direct = eta(twisted.as_ref().unwrap(), chi)?;
            if conj != direct {
                return Ok((false, q, json!({"character": j})));
            }
            q.push(conj.verified()?);
        }
        let n = q.len();
        Ok((true, q, json!({"generators": n})))
    });
    let recovered = steps.run("eigenspace-grading", "the simultaneous eigenspaces of the dual action give back Psi(Gamma)", || {
        let e = eigenspace_grading(alg, generators.as_ref().unwrap(), &group)?;
        let ok = e.same_as(twisted.as_ref().unwrap());
        Ok((ok, e, Value::Null))
    });
    steps.run("untwist", "Psi^{-1} carries the recovered grading to Gamma, label by label", || {
        let back = recovered.as_ref().unwrap().apply_automorphism(&psi.as_ref().unwrap().inverse()?)?;
        Ok((back.same_as(standard.as_ref().unwrap()), (), Value::Null))
    });

    let theta = match (&recovered, &standard) {
        (Some(r), Some(s)) => r.relabeling_to(s),
        _ => None,
    };
    let theta_hom = theta.as_ref().and_then(|pairs| label_map_as_hom(&group, pairs));
    let report = json!({
        "group": group.to_string(),
        "phi": hom_spec_to_json(&plan.phi),
        "twist": plan.factors.iter().map(|x| x.describe(f)).collect::<Vec<_>>(),
        "theta": theta.as_ref().map(|pairs| pairs.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect::<Vec<_>>()),
        "theta_generators": theta_hom.as_ref().map(|imgs| imgs.iter().map(|g| g.to_string()).collect::<Vec<_>>()),
    });
    let mut certificate = Certificate::new(command, algebra_to_json(alg), f.descriptor(), seed, steps.checks);
    certificate.report = Some(report);
    TwistResult { certificate, standard, twisted: twisted.clone(), recovered, theta }
}

/// If the label correspondence is the restriction of a group endomorphism
/// determined on generators, the images of the generators.
fn label_map_as_hom(group: &AbelianGroup, pairs: &[(GroupElement, GroupElement)]) -> Option<Vec<GroupElement>> {
    let lookup = |g: &GroupElement| pairs.iter().find(|(a, _)| a == g).map(|(_, b)| b.clone());
    let images: Vec<GroupElement> = group.generators().iter().map(lookup).collect::<Option<_>>()?;
    let hom = GroupHom::new(group, group, images.clone()).ok()?;
    pairs.iter().all(|(a, b)| hom.apply(a).as_ref() == Ok(b)).then_some(images)
}
