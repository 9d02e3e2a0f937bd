//! Derivation spaces, the Cartan identities and the torus classification.

use crate::calculus::{Calculus, Derivation, Form};
use crate::error::{Error, Result};
use crate::forms::{GenImageKey, PresentedCalculus};
use crate::lincomb::LinComb;
use crate::linalg::Echelon;
use crate::models::torus;

/// A finite family of consistent derivations.
#[derive(Clone, Debug)]
pub struct DerivationSpace<D: Ord> {
    p: u32,
    basis: Vec<Derivation<D>>,
    labels: Vec<String>,
}

impl<D: Ord + Clone + std::fmt::Debug> DerivationSpace<D> {
    /// Every member is checked for consistency with the calculus.
    pub fn new<C: Calculus<DerivKey = D>>(
        calc: &C,
        basis: Vec<Derivation<D>>,
        labels: Vec<String>,
    ) -> Result<Self> {
        assert_eq!(basis.len(), labels.len(), "one label per derivation");
        for (theta, label) in basis.iter().zip(&labels) {
            calc.check_consistency(theta)?
                .into_result()
                .map_err(|e| Error::InconsistentDerivation(format!("{label}: {e}")))?;
        }
        Ok(DerivationSpace { p: calc.p(), basis, labels })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn basis(&self) -> &[Derivation<D>] {
        &self.basis
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// `Σ c_i θ_i`.
    pub fn combination(&self, coeffs: &LinComb<usize>) -> Derivation<D> {
        let mut out = Derivation::zero();
        for (i, c) in coeffs.iter() {
            out = out.plus(&self.basis[*i].scale(c));
        }
        out
    }

    /// Coefficients of `θ` in the basis, if it lies in the span.
    pub fn coordinates(&self, theta: &Derivation<D>) -> Result<Option<LinComb<usize>>> {
        let e = Echelon::from_vectors(self.p, self.basis.iter().map(|b| &b.coords))?;
        if !e.kernel().is_empty() {
            return Err(Error::Singular(e.kernel().len()));
        }
        Ok(e.solve(&theta.coords)?.ok())
    }

    /// Pairs `(i, j)` whose commutator leaves the span.
    pub fn closure_failures<C: Calculus<DerivKey = D>>(&self, calc: &C) -> Result<Vec<(usize, usize)>> {
        let e = Echelon::from_vectors(self.p, self.basis.iter().map(|b| &b.coords))?;
        let mut bad = Vec::new();
        for i in 0..self.basis.len() {
            for j in i + 1..self.basis.len() {
                let c = calc.commutator(&self.basis[i], &self.basis[j])?;
                if e.solve(&c.coords)?.is_err() {
                    bad.push((i, j));
                }
            }
        }
        Ok(bad)
    }
}

/// Basis of the consistent torus derivations `θ(u) = u^{1+sp} v^{tp}`,
/// `θ(v) = u^{sp} v^{1+tp}` (as separate basis elements) with `|s|, |t| ≤ B`.
pub fn classify_torus_derivations(
    calc: &PresentedCalculus,
    bound: i64,
) -> Result<DerivationSpace<GenImageKey>> {
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for s in -bound..=bound {
        for t in -bound..=bound {
            basis.push(torus::u_field(calc, s, t));
            labels.push(format!("u-field s={s} t={t}"));
            basis.push(torus::v_field(calc, s, t));
            labels.push(format!("v-field s={s} t={t}"));
        }
    }
    DerivationSpace::new(calc, basis, labels)
}

/// `d(θ⌟ω) + θ⌟dω - L_θ ω`; zero by the Cartan formula.
pub fn cartan_formula_residual<C: Calculus>(
    c: &C,
    theta: &Derivation<C::DerivKey>,
    w: &Form<C::Key>,
) -> Result<Form<C::Key>> {
    let a = c.d(&c.iprod_raw(theta, w)?)?;
    let b = c.iprod_raw(theta, &c.d(w)?)?;
    Ok(a.plus(&b).minus(&c.lie(theta, w)?))
}

/// `d L_θ ω - L_θ dω`.
pub fn d_lie_residual<C: Calculus>(
    c: &C,
    theta: &Derivation<C::DerivKey>,
    w: &Form<C::Key>,
) -> Result<Form<C::Key>> {
    Ok(c.d(&c.lie(theta, w)?)?.minus(&c.lie(theta, &c.d(w)?)?))
}

/// `L_φ(θ⌟ω) - θ⌟L_φ ω - [φ,θ]⌟ω`.
pub fn lie_iprod_residual<C: Calculus>(
    c: &C,
    theta: &Derivation<C::DerivKey>,
    phi: &Derivation<C::DerivKey>,
    w: &Form<C::Key>,
) -> Result<Form<C::Key>> {
    let comm = c.commutator(phi, theta)?;
    Ok(c
        .lie(phi, &c.iprod_raw(theta, w)?)?
        .minus(&c.iprod_raw(theta, &c.lie(phi, w)?)?)
        .minus(&c.iprod_raw(&comm, w)?))
}

/// `φ⌟(θ⌟ω) + θ⌟(φ⌟ω)`.
pub fn iprod_antisymmetry_residual<C: Calculus>(
    c: &C,
    theta: &Derivation<C::DerivKey>,
    phi: &Derivation<C::DerivKey>,
    w: &Form<C::Key>,
) -> Result<Form<C::Key>> {
    let a = c.iprod_raw(phi, &c.iprod_raw(theta, w)?)?;
    let b = c.iprod_raw(theta, &c.iprod_raw(phi, w)?)?;
    Ok(a.plus(&b))
}

/// `L_θ L_φ ω - L_φ L_θ ω - L_{[θ,φ]} ω`.
pub fn lie_commutator_residual<C: Calculus>(
    c: &C,
    theta: &Derivation<C::DerivKey>,
    phi: &Derivation<C::DerivKey>,
    w: &Form<C::Key>,
) -> Result<Form<C::Key>> {
    let comm = c.commutator(theta, phi)?;
    Ok(c
        .lie(theta, &c.lie(phi, w)?)?
        .minus(&c.lie(phi, &c.lie(theta, w)?)?)
        .minus(&c.lie(&comm, w)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CycScalar;

    #[test]
    fn classification_counts() {
        let c = torus::calculus(2, 1).unwrap();
        assert_eq!(classify_torus_derivations(&c, 1).unwrap().len(), 18);
        let c1 = torus::calculus(1, 1).unwrap();
        let v = classify_torus_derivations(&c1, 0).unwrap();
        assert_eq!(v.len(), 2);
        let u = torus::monomial(&c1, 1, 0);
        assert_eq!(c1.apply(&v.basis()[0], &u).unwrap(), u);
    }

    #[test]
    fn brute_force_scan_matches_family() {
        // single monomial images within a box: consistent exactly when the
        // exponents satisfy the congruences of the family
        for p in [1u32, 2, 3] {
            let c = torus::calculus(p, 1).unwrap();
            let pi = p as i64;
            for a in -4..=4i64 {
                for b in -4..=4i64 {
                    let m = torus::monomial(&c, a, b);
                    let tu = c.derivation(&[("u", m.clone())]).unwrap();
                    let tv = c.derivation(&[("v", m)]).unwrap();
                    let in_u = (a - 1).rem_euclid(pi) == 0 && b.rem_euclid(pi) == 0;
                    let in_v = a.rem_euclid(pi) == 0 && (b - 1).rem_euclid(pi) == 0;
                    assert_eq!(c.check_consistency(&tu).unwrap().is_consistent(), in_u, "p={p} u -> u^{a} v^{b}");
                    assert_eq!(c.check_consistency(&tv).unwrap().is_consistent(), in_v, "p={p} v -> u^{a} v^{b}");
                }
            }
        }
    }

    #[test]
    fn mixed_images_of_equal_shift_do_not_cancel() {
        // θ(u) = α u^{1+m} v^n, θ(v) = β u^m v^{1+n}: consistency forces each
        // part separately into the family
        let c = torus::calculus(3, 1).unwrap();
        for (m, n) in [(1i64, 0i64), (0, 1), (1, 1), (2, -1)] {
            for beta in [1i64, -1, 2] {
                let theta = c
                    .derivation(&[
                        ("u", torus::monomial(&c, 1 + m, n)),
                        ("v", torus::monomial(&c, m, 1 + n).scale(&CycScalar::from_int(3, beta))),
                    ])
                    .unwrap();
                assert!(!c.check_consistency(&theta).unwrap().is_consistent());
            }
        }
    }

    #[test]
    fn inconsistent_member_is_rejected() {
        let c = torus::calculus(2, 1).unwrap();
        let bad = c.derivation(&[("u", torus::monomial(&c, 2, 0))]).unwrap();
        let err = DerivationSpace::new(&c, vec![bad], vec!["bad".into()]).unwrap_err();
        assert!(matches!(err, Error::InconsistentDerivation(_)));
    }

    #[test]
    fn torus_family_is_closed() {
        let c = torus::calculus(2, 1).unwrap();
        let v = classify_torus_derivations(&c, 1).unwrap();
        // commutators raise exponents, so only check those landing inside
        let big = classify_torus_derivations(&c, 2).unwrap();
        for i in 0..v.len() {
            for j in 0..v.len() {
                let comm = c.commutator(&v.basis()[i], &v.basis()[j]).unwrap();
                assert!(big.coordinates(&comm).unwrap().is_some());
            }
        }
    }

    #[test]
    fn cartan_identities_on_torus() {
        let c = torus::calculus(3, 1).unwrap();
        let th = torus::u_field(&c, 1, -1).plus(&torus::v_field(&c, 0, 1));
        let ph = torus::v_field(&c, -1, 0).scale(&CycScalar::q(3));
        let w = c
            .word(&[("u", 2), ("du", 1), ("v", -1)])
            .unwrap()
            .plus(&c.word(&[("u", -1), ("dv", 1), ("du", 1)]).unwrap());
        assert!(cartan_formula_residual(&c, &th, &w).unwrap().is_zero());
        assert!(d_lie_residual(&c, &th, &w).unwrap().is_zero());
        assert!(lie_iprod_residual(&c, &th, &ph, &w).unwrap().is_zero());
        assert!(iprod_antisymmetry_residual(&c, &th, &ph, &w).unwrap().is_zero());
        assert!(lie_commutator_residual(&c, &th, &ph, &w).unwrap().is_zero());
    }
}
