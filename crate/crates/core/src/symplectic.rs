//! Closed 2-forms, Hamiltonian vector fields, Poisson brackets and flows.
//!
//! Everything here is relative to a finite ansatz `V` of derivations: an
//! element `a` is Hamiltonian when `da = θ⌟ω` for some `θ` in the span of `V`.

use crate::calculus::{Calculus, Derivation, Form};
use crate::cartan::DerivationSpace;
use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::linalg::Echelon;
use crate::scalar::{factorial, CycScalar};

/// `ω̃(θ) = θ⌟ω`.
pub fn omega_tilde<C: Calculus>(c: &C, theta: &Derivation<C::DerivKey>, omega: &Form<C::Key>) -> Result<Form<C::Key>> {
    c.iprod(theta, omega)
}

/// Whether `L_θ ω = 0`, decided through `d(θ⌟ω) = 0` and cross-checked
/// against the Lie derivative.
pub fn in_v_omega<C: Calculus>(c: &C, theta: &Derivation<C::DerivKey>, omega: &Form<C::Key>) -> Result<bool> {
    let via_d = c.d(&c.iprod(theta, omega)?)?.is_zero();
    let via_lie = c.lie(theta, omega)?.is_zero();
    if via_d != via_lie {
        return Err(Error::Unsupported(
            "d(θ⌟ω) and L_θ ω disagree: the 2-form is not closed".into(),
        ));
    }
    Ok(via_d)
}

/// A closed 2-form together with an ansatz and the linear system realising
/// `ω̃` on its span.
#[derive(Clone, Debug)]
pub struct Symplectic<C: Calculus> {
    omega: Form<C::Key>,
    ansatz: DerivationSpace<C::DerivKey>,
    label: String,
    images: Vec<Form<C::Key>>,
    system: Echelon<C::Key>,
}

/// `X_a` with its certificate.
#[derive(Clone, Debug)]
pub struct HamiltonianSolution<C: Calculus> {
    pub element: Form<C::Key>,
    pub field: Derivation<C::DerivKey>,
    /// Coordinates of `X_a` in the ansatz basis.
    pub coordinates: LinComb<usize>,
    /// `ω̃(X_a) - da`, always zero for a returned solution.
    pub residual: Form<C::Key>,
}

#[derive(Clone, Debug)]
pub enum HamiltonianOutcome<C: Calculus> {
    Hamiltonian(HamiltonianSolution<C>),
    /// The part of `da` outside the image of `ω̃` on the ansatz.
    NotHamiltonian { residual: Form<C::Key> },
}

/// Exact kernel of `ω̃` on the ansatz.
#[derive(Clone, Debug)]
pub struct KernelReport<D: Ord> {
    pub ansatz_dimension: usize,
    pub kernel: Vec<Derivation<D>>,
}

impl<D: Ord> KernelReport<D> {
    pub fn is_nonsingular(&self) -> bool {
        self.kernel.is_empty()
    }
}

impl<C: Calculus> Symplectic<C> {
    /// Fails with [`Error::NotClosed`] unless `dω = 0`.
    pub fn new(c: &C, omega: Form<C::Key>, ansatz: DerivationSpace<C::DerivKey>, label: impl Into<String>) -> Result<Self> {
        if c.degree_of(&omega).map_or(false, |k| k != 2) {
            return Err(Error::NotHomogeneous(2));
        }
        if !c.is_closed(&omega)? {
            return Err(Error::NotClosed);
        }
        let images = ansatz
            .basis()
            .iter()
            .map(|t| c.iprod_raw(t, &omega))
            .collect::<Result<Vec<_>>>()?;
        let system = Echelon::from_vectors(c.p(), images.iter())?;
        Ok(Symplectic {
            omega,
            ansatz,
            label: label.into(),
            images,
            system,
        })
    }

    pub fn omega(&self) -> &Form<C::Key> {
        &self.omega
    }

    pub fn ansatz(&self) -> &DerivationSpace<C::DerivKey> {
        &self.ansatz
    }

    /// Name of the ansatz, e.g. `B=3`.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// `ω̃` of the i-th basis derivation.
    pub fn image(&self, i: usize) -> &Form<C::Key> {
        &self.images[i]
    }

    pub fn kernel_report(&self) -> KernelReport<C::DerivKey> {
        KernelReport {
            ansatz_dimension: self.ansatz.len(),
            kernel: self
                .system
                .kernel()
                .iter()
                .map(|k| self.ansatz.combination(k))
                .collect(),
        }
    }

    pub fn is_nonsingular(&self) -> bool {
        self.system.kernel().is_empty()
    }

    /// Solve `ω̃(X) = da` on the ansatz.
    pub fn solve(&self, c: &C, a: &Form<C::Key>) -> Result<HamiltonianOutcome<C>> {
        if !self.is_nonsingular() {
            return Err(Error::Singular(self.system.kernel().len()));
        }
        if let Some(k) = a.keys().map(|k| c.degree(k)).find(|&k| k != 0) {
            return Err(Error::NotDegreeZero(k));
        }
        let da = c.d(a)?;
        match self.system.solve(&da)? {
            Err(residual) => Ok(HamiltonianOutcome::NotHamiltonian { residual }),
            Ok(coordinates) => {
                let field = self.ansatz.combination(&coordinates);
                let residual = c.iprod_raw(&field, &self.omega)?.minus(&da);
                assert!(residual.is_zero(), "solver certificate failed");
                Ok(HamiltonianOutcome::Hamiltonian(HamiltonianSolution {
                    element: a.clone(),
                    field,
                    coordinates,
                    residual,
                }))
            }
        }
    }

    /// `X_a`, or [`Error::NotHamiltonian`].
    pub fn vector_field(&self, c: &C, a: &Form<C::Key>) -> Result<Derivation<C::DerivKey>> {
        match self.solve(c, a)? {
            HamiltonianOutcome::Hamiltonian(s) => Ok(s.field),
            HamiltonianOutcome::NotHamiltonian { residual } => Err(Error::NotHamiltonian(format!(
                "{} is not Hamiltonian relative to ansatz {}; unmatched part of its differential: {}",
                c.render(a),
                self.label,
                c.render(&residual)
            ))),
        }
    }

    pub fn is_hamiltonian(&self, c: &C, a: &Form<C::Key>) -> Result<bool> {
        Ok(matches!(self.solve(c, a)?, HamiltonianOutcome::Hamiltonian(_)))
    }

    /// `{a, b} = X_a(b)`; both arguments must be Hamiltonian.
    pub fn poisson(&self, c: &C, a: &Form<C::Key>, b: &Form<C::Key>) -> Result<Form<C::Key>> {
        let xa = self.vector_field(c, a)?;
        self.vector_field(c, b)?;
        c.apply(&xa, b)
    }

    /// Coefficients of `Σ_{k≤N} t^k X_b^k(a) / k!`, lowest order first.
    pub fn flow(&self, c: &C, b: &Form<C::Key>, a: &Form<C::Key>, order: u32) -> Result<Vec<Form<C::Key>>> {
        let xb = self.vector_field(c, b)?;
        let mut out = Vec::with_capacity(order as usize + 1);
        let mut cur = a.clone();
        for k in 0..=order {
            if k > 0 {
                cur = c.apply(&xb, &cur)?;
            }
            let inv = factorial(c.p(), k).inverse()?;
            out.push(cur.scale(&inv));
        }
        Ok(out)
    }
}

/// Render a truncated flow as `a0 + t (a1) + t^2 (a2) …`.
pub fn render_flow<C: Calculus>(c: &C, coeffs: &[Form<C::Key>]) -> String {
    let mut parts = Vec::new();
    for (k, f) in coeffs.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        let body = c.render(f);
        parts.push(match k {
            0 => body,
            1 => format!("t ({body})"),
            k => format!("t^{k} ({body})"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// `1` in the coefficient field of `c`.
pub fn unit_scalar<C: Calculus>(c: &C) -> CycScalar {
    CycScalar::one(c.p())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::classify_torus_derivations;
    use crate::models::torus;

    fn torus_system(p: u32, b: i64) -> (crate::forms::PresentedCalculus, Symplectic<crate::forms::PresentedCalculus>) {
        let c = torus::calculus(p, 1).unwrap();
        let v = classify_torus_derivations(&c, b).unwrap();
        let w = torus::omega(&c).unwrap();
        let s = Symplectic::new(&c, w, v, format!("B={b}")).unwrap();
        (c, s)
    }

    #[test]
    fn torus_hamiltonian_vector_field() {
        let (c, s) = torus_system(2, 3);
        assert!(s.is_nonsingular());
        let a = torus::monomial(&c, 2, 2);
        let x = s.vector_field(&c, &a).unwrap();
        let two = CycScalar::from_int(2, 2);
        assert_eq!(c.apply(&x, &torus::monomial(&c, 1, 0)).unwrap(), torus::monomial(&c, 3, 2).scale(&two));
        assert_eq!(c.apply(&x, &torus::monomial(&c, 0, 1)).unwrap(), torus::monomial(&c, 2, 3).scale(&-&two));
    }

    #[test]
    fn u_is_not_hamiltonian() {
        let (c, s) = torus_system(2, 3);
        let err = s.vector_field(&c, &torus::monomial(&c, 1, 0)).unwrap_err();
        assert!(matches!(err, Error::NotHamiltonian(ref m) if m.contains("B=3")));
        match s.solve(&c, &torus::monomial(&c, 1, 0)).unwrap() {
            HamiltonianOutcome::NotHamiltonian { residual } => assert!(!residual.is_zero()),
            _ => panic!("u must not be Hamiltonian"),
        }
    }

    #[test]
    fn torus_bracket_example() {
        let (c, s) = torus_system(2, 3);
        let b = s
            .poisson(&c, &torus::monomial(&c, 2, 2), &torus::monomial(&c, 2, 4))
            .unwrap();
        assert_eq!(c.render(&b), "-4 u^4 v^6");
    }

    #[test]
    fn in_v_omega_examples() {
        let (c, s) = torus_system(2, 1);
        let x = s.vector_field(&c, &torus::monomial(&c, 2, 2)).unwrap();
        assert!(in_v_omega(&c, &x, s.omega()).unwrap());
        let theta = c.derivation(&[("u", torus::monomial(&c, 3, 2))]).unwrap();
        assert!(!in_v_omega(&c, &theta, s.omega()).unwrap());
    }

    #[test]
    fn zero_form_is_singular() {
        let c = torus::calculus(2, 1).unwrap();
        let v = classify_torus_derivations(&c, 1).unwrap();
        let n = v.len();
        let s = Symplectic::new(&c, Form::zero(), v, "B=1").unwrap();
        assert_eq!(s.kernel_report().kernel.len(), n);
        assert!(matches!(s.solve(&c, &c.one()), Err(Error::Singular(_))));
    }

    #[test]
    fn non_closed_form_is_rejected() {
        let c = torus::calculus(2, 1).unwrap();
        let v = classify_torus_derivations(&c, 0).unwrap();
        let w = c.word(&[("u", 1), ("du", 1)]).unwrap();
        assert!(matches!(Symplectic::new(&c, w, v, "B=0"), Err(Error::NotHomogeneous(2))));
    }

    #[test]
    fn flow_first_order() {
        let (c, s) = torus_system(2, 3);
        let f = s
            .flow(&c, &torus::monomial(&c, 2, 2), &torus::monomial(&c, 1, 0), 1)
            .unwrap();
        assert_eq!(render_flow(&c, &f), "u + t (2 u^3 v^2)");
    }
}
