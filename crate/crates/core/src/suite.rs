//! Randomized property suite: Cartan identities, `d² = 0`, graded Leibniz,
//! structural certificates and the Poisson laws, run with a seeded PRNG.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{Calculus, Form};
use crate::cartan::{
    cartan_formula_residual, d_lie_residual, iprod_antisymmetry_residual, lie_commutator_residual,
    lie_iprod_residual,
};
use crate::error::Result;
use crate::models::{cuntz, matrix, poly, sample_form, torus, AnyModel, Model, Namespace};
use crate::with_model;

pub const DEFAULT_SEED: u64 = 2024;
pub const DEFAULT_CASES: usize = 100;

/// Outcome of one named property over all its cases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub model: String,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn total_cases(&self) -> usize {
        self.checks.iter().map(|c| c.cases).sum()
    }
}

/// Accumulates outcomes in first-seen order.
#[derive(Default)]
struct Tally {
    checks: Vec<CheckOutcome>,
}

impl Tally {
    fn record(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        let i = match self.checks.iter().position(|c| c.name == name) {
            Some(i) => i,
            None => {
                self.checks.push(CheckOutcome {
                    name: name.to_string(),
                    cases: 0,
                    failures: 0,
                    first_failure: None,
                });
                self.checks.len() - 1
            }
        };
        let c = &mut self.checks[i];
        c.cases += 1;
        if !ok {
            c.failures += 1;
            if c.first_failure.is_none() {
                c.first_failure = Some(detail());
            }
        }
    }

    fn zero<C: Calculus>(&mut self, c: &C, name: &str, residual: &Form<C::Key>) {
        self.record(name, residual.is_zero(), || format!("residual {}", c.render(residual)));
    }
}

pub const CARTAN_CHECKS: [&str; 5] = [
    "d(θ⌟ω) + θ⌟dω = L_θ ω",
    "d L_θ = L_θ d",
    "L_φ(θ⌟ω) - θ⌟L_φ ω = [φ,θ]⌟ω",
    "φ⌟θ⌟ω = -θ⌟φ⌟ω",
    "[L_θ, L_φ] = L_[θ,φ]",
];

/// Cartan identities on `cases` random `(θ, φ, ω)` with `deg ω ≤ 2`, plus
/// `d² = 0` and graded Leibniz on random forms.
pub fn cartan_checks<C: Namespace>(model: &Model<C>, rng: &mut ChaCha8Rng, cases: usize) -> Result<Vec<CheckOutcome>> {
    let c = model.calc();
    let ansatz = model.symplectic()?.ansatz();
    let mut t = Tally::default();
    for _ in 0..cases {
        let theta = c.sample_derivation(ansatz, rng)?;
        let phi = c.sample_derivation(ansatz, rng)?;
        let w = sample_form(c, rng, 2)?;
        let consistent = c.check_consistency(&theta)?.is_consistent() && c.check_consistency(&phi)?.is_consistent();
        t.record("sampled derivations are consistent", consistent, || c.render_derivation(&theta));
        t.zero(c, CARTAN_CHECKS[0], &cartan_formula_residual(c, &theta, &w)?);
        t.zero(c, CARTAN_CHECKS[1], &d_lie_residual(c, &theta, &w)?);
        t.zero(c, CARTAN_CHECKS[2], &lie_iprod_residual(c, &theta, &phi, &w)?);
        t.zero(c, CARTAN_CHECKS[3], &iprod_antisymmetry_residual(c, &theta, &phi, &w)?);
        t.zero(c, CARTAN_CHECKS[4], &lie_commutator_residual(c, &theta, &phi, &w)?);

        let x = sample_form(c, rng, 1)?;
        t.zero(c, "d² = 0", &c.d(&c.d(&x)?)?);
        let y = sample_form(c, rng, 1)?;
        let k = rng.gen_range(0..=1);
        let xk = c.component(&x, k);
        let lhs = c.d(&c.mul(&xk, &y)?)?;
        let mut rhs = c.mul(&c.d(&xk)?, &y)?;
        let second = c.mul(&xk, &c.d(&y)?)?;
        if k == 0 {
            rhs.add_assign(&second);
        } else {
            rhs.sub_assign(&second);
        }
        t.zero(c, "graded Leibniz for d", &lhs.minus(&rhs));
    }
    Ok(t.checks)
}

/// Closedness and nonsingularity of the symplectic form.
pub fn structural_checks<C: Calculus>(model: &Model<C>) -> Result<Vec<CheckOutcome>> {
    let c = model.calc();
    let s = model.symplectic()?;
    let mut t = Tally::default();
    let dw = c.d(s.omega())?;
    t.zero(c, "dω = 0", &dw);
    let k = s.kernel_report();
    t.record(&format!("ω̃ injective on ansatz {}", s.label()), k.is_nonsingular(), || {
        format!("kernel dimension {}", k.kernel.len())
    });
    Ok(t.checks)
}

fn random_combination<C: Namespace>(c: &C, samples: &[Form<C::Key>], rng: &mut ChaCha8Rng) -> Form<C::Key> {
    let mut out = Form::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let a = samples.choose(rng).expect("samples");
        out.add_scaled(a, &c.sample_scalar(rng));
    }
    out
}

/// Antisymmetry, Jacobi, Leibniz and `X_{a,b} = [X_a, X_b]` on random
/// combinations of Hamiltonian samples.
pub fn poisson_checks<C: Namespace>(
    model: &Model<C>,
    samples: &[Form<C::Key>],
    rng: &mut ChaCha8Rng,
    cases: usize,
) -> Result<Vec<CheckOutcome>> {
    let c = model.calc();
    let s = model.symplectic()?;
    let mut t = Tally::default();
    if samples.is_empty() {
        return Ok(t.checks);
    }
    for _ in 0..cases {
        let a = random_combination(c, samples, rng);
        let b = random_combination(c, samples, rng);
        let e = random_combination(c, samples, rng);
        let ab = s.poisson(c, &a, &b)?;
        let ba = s.poisson(c, &b, &a)?;
        t.zero(c, "{a,b} = -{b,a}", &ab.plus(&ba));
        let be = s.poisson(c, &b, &e)?;
        let ea = s.poisson(c, &e, &a)?;
        let jac = s
            .poisson(c, &a, &be)?
            .plus(&s.poisson(c, &b, &ea)?)
            .plus(&s.poisson(c, &e, &ab)?);
        t.zero(c, "Jacobi", &jac);
        let xa = s.vector_field(c, &a)?;
        let leib = c
            .apply(&xa, &c.mul(&b, &e)?)?
            .minus(&c.mul(&ab, &e)?)
            .minus(&c.mul(&b, &s.poisson(c, &a, &e)?)?);
        t.zero(c, "{a,bc} = {a,b}c + b{a,c}", &leib);
        let xb = s.vector_field(c, &b)?;
        let xab = s.vector_field(c, &ab)?;
        let comm = c.commutator(&xa, &xb)?;
        let ok = xab == comm;
        t.record("X_{a,b} = [X_a, X_b]", ok, || {
            format!("{} vs {}", c.render_derivation(&xab), c.render_derivation(&comm))
        });
    }
    Ok(t.checks)
}

/// The full suite for a model. Confluence reports are included for models
/// that rewrite with a presentation.
pub fn run(model: &AnyModel, seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    for (name, report) in model.confluence()? {
        let bad = report.non_joinable().count();
        checks.push(CheckOutcome {
            name: format!("local confluence ({name})"),
            cases: report.joinable_count() + bad,
            failures: bad,
            first_failure: report.non_joinable().next().map(|p| format!("{p:?}")),
        });
    }
    if let AnyModel::Torus(m) | AnyModel::Custom(m) = model {
        let bad = m.calc().check_differential()?;
        checks.push(CheckOutcome {
            name: "d respects every relation".into(),
            cases: m.calc().relations().len(),
            failures: bad.len(),
            first_failure: bad.first().map(|(rel, r)| format!("{rel}: {}", m.calc().render(r))),
        });
    }
    with_model!(model, m => {
        if m.symplectic().is_ok() {
            checks.extend(structural_checks(m)?);
            checks.extend(cartan_checks(m, &mut rng, cases)?);
        }
    });
    let poisson = match model {
        AnyModel::Torus(m) => poisson_checks(m, &torus::hamiltonian_samples(m)?, &mut rng, cases)?,
        AnyModel::Matrix(m) => poisson_checks(m, &matrix::hamiltonian_samples(m), &mut rng, cases)?,
        AnyModel::Cuntz(m) => poisson_checks(m, &cuntz::hamiltonian_samples(m)?, &mut rng, cases)?,
        AnyModel::PolyMatrix(m) => poisson_checks(m, &poly::hamiltonian_samples(m), &mut rng, cases)?,
        AnyModel::Custom(_) => Vec::new(),
    };
    checks.extend(poisson);
    Ok(SuiteReport {
        model: model.kind().to_string(),
        seed,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for desc in ["torus:p=2", "matrix:n=2", "cuntz:n=2", "polymat:D=2"] {
            let m = AnyModel::parse_and_build(desc, None).unwrap();
            let r = run(&m, 1, 5).unwrap();
            for c in &r.checks {
                assert!(c.passed(), "{desc}: {} failed: {:?}", c.name, c.first_failure);
            }
            assert!(r.total_cases() > 0);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let m = AnyModel::parse_and_build("torus:p=3", None).unwrap();
        let a = run(&m, 9, 3).unwrap();
        let b = run(&m, 9, 3).unwrap();
        assert_eq!(a.checks, b.checks);
    }
}
