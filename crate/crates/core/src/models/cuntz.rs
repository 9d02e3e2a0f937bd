//! The algebraic Cuntz algebra `O_n`: `s_i* s_j = δ_ij`, `Σ s_i s_i* = 1`.
//!
//! Forms live in the universal calculus over the normal-word basis. The
//! form relations `ds_i* s_j + s_i* ds_j = 0` and the differential of the
//! sum relation are installed as rules too, but only used for consistency
//! checks of derivations.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Alphabet, Generator, Presentation, Rule, Word, WordComb};
use crate::calculus::{Calculus, Derivation, Form};
use crate::cartan::DerivationSpace;
use crate::error::{Error, Result};
use crate::forms::GenImageKey;
use crate::scalar::CycScalar;
use crate::symplectic::Symplectic;
use crate::universal::{Legs, PresentedAlgebra, UniversalCalculus};

use super::{unknown_head, Model, ModelKind, Namespace};

pub type CuntzCalculus = UniversalCalculus<PresentedAlgebra>;

fn name(i: usize, star: bool) -> String {
    format!("s{}{}", i + 1, if star { "*" } else { "" })
}

/// Presentation with generators `s1..sn, s1*..sn*` and letter order
/// `ds_i < s_i < s_i* < ds_i*` (each block in index order).
pub fn presentation(n: usize) -> Result<Presentation> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("cuntz model needs n ≥ 2, got {n}")));
    }
    let mut gens = Vec::new();
    for star in [false, true] {
        for i in 0..n {
            gens.push(Generator::new(name(i, star), false));
        }
    }
    let mut order: Vec<String> = Vec::new();
    order.extend((0..n).map(|i| format!("d{}", name(i, false))));
    order.extend((0..n).map(|i| name(i, false)));
    order.extend((0..n).map(|i| name(i, true)));
    order.extend((0..n).map(|i| format!("d{}", name(i, true))));
    let order_refs: Vec<&str> = order.iter().map(String::as_str).collect();
    let alpha = Alphabet::new(gens, &order_refs)?;

    let one = CycScalar::one(1);
    let w = |f: &[(String, i64)]| -> Result<Word> {
        let refs: Vec<(&str, i64)> = f.iter().map(|(s, e)| (s.as_str(), *e)).collect();
        alpha.word(&refs)
    };
    let s = |i: usize| (name(i, false), 1i64);
    let ss = |i: usize| (name(i, true), 1i64);
    let ds = |i: usize| (format!("d{}", name(i, false)), 1i64);
    let dss = |i: usize| (format!("d{}", name(i, true)), 1i64);
    let last = n - 1;

    let mut rules = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let rhs = if i == j {
                WordComb::single(Word::one(), one.clone())
            } else {
                WordComb::zero()
            };
            rules.push(Rule { lhs: w(&[ss(i), s(j)])?, rhs });
        }
    }
    let mut sum = WordComb::single(Word::one(), one.clone());
    for i in 0..last {
        sum.add_term(w(&[s(i), ss(i)])?, -&one);
    }
    rules.push(Rule { lhs: w(&[s(last), ss(last)])?, rhs: sum });
    for i in 0..n {
        for j in 0..n {
            rules.push(Rule {
                lhs: w(&[dss(i), s(j)])?,
                rhs: WordComb::single(w(&[ss(i), ds(j)])?, -&one),
            });
        }
    }
    let mut dsum = WordComb::zero();
    for i in 0..n {
        dsum.add_term(w(&[ds(i), ss(i)])?, -&one);
    }
    for i in 0..last {
        dsum.add_term(w(&[s(i), dss(i)])?, -&one);
    }
    rules.push(Rule { lhs: w(&[s(last), dss(last)])?, rhs: dsum });
    Presentation::new(alpha, 1, rules)
}

pub fn calculus(n: usize) -> Result<CuntzCalculus> {
    Ok(UniversalCalculus::new(PresentedAlgebra::new(presentation(n)?)?))
}

pub fn n_of(c: &CuntzCalculus) -> usize {
    c.algebra().presentation().alphabet().generators().len() / 2
}

/// `s_i` (`star = false`) or `s_i*` (zero-based `i`) as an algebra element.
pub fn generator(c: &CuntzCalculus, i: usize, star: bool) -> WordComb {
    let alg = c.algebra();
    alg.presentation()
        .word_element(alg.presentation().alphabet().word(&[(&name(i, star), 1)]).expect("cuntz generator"))
}

/// `s_k s_l*`.
pub fn matrix_unit(c: &CuntzCalculus, k: usize, l: usize) -> Result<WordComb> {
    c.algebra().normalize(&c.algebra().presentation().mul_free(&generator(c, k, false), &generator(c, l, true)))
}

/// `θ_h(s_i) = h s_i`, `θ_h(s_i*) = -s_i* h`.
pub fn theta(c: &CuntzCalculus, h: &WordComb) -> Result<Derivation<GenImageKey>> {
    let alg = c.algebra();
    let pres = alg.presentation();
    let n = n_of(c);
    let mut images = Vec::new();
    for i in 0..n {
        images.push((i, pres.mul(h, &generator(c, i, false))?));
        images.push((n + i, pres.mul(&generator(c, i, true), h)?.neg()));
    }
    alg.derivation(&images)
}

/// `Σ_i ds_i ds_i*`.
pub fn omega(c: &CuntzCalculus) -> Result<Form<Legs<Word>>> {
    let mut out = Form::zero();
    for i in 0..n_of(c) {
        let ds = c.d(&c.element(&generator(c, i, false)))?;
        let dss = c.d(&c.element(&generator(c, i, true)))?;
        out.add_assign(&c.mul(&ds, &dss)?);
    }
    Ok(out)
}

/// `θ_{s_k s_l*}` for `k ≠ l` and `θ_{s_i s_i* - s_n s_n*}` for `i < n`
/// (dimension `n² - 1`), or all `θ_{s_k s_l*}` when `full`.
pub fn ansatz(c: &CuntzCalculus, full: bool) -> Result<DerivationSpace<GenImageKey>> {
    let n = n_of(c);
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    let lab = |k: usize, l: usize| format!("{} {}", name(k, false), name(l, true));
    for k in 0..n {
        for l in 0..n {
            if k == l && !full {
                continue;
            }
            basis.push(theta(c, &matrix_unit(c, k, l)?)?);
            labels.push(format!("theta[{}]", lab(k, l)));
        }
    }
    if !full {
        let last = matrix_unit(c, n - 1, n - 1)?;
        for i in 0..n - 1 {
            let h = matrix_unit(c, i, i)?.minus(&last);
            basis.push(theta(c, &h)?);
            labels.push(format!("theta[{} - {}]", lab(i, i), lab(n - 1, n - 1)));
        }
    }
    DerivationSpace::new(c, basis, labels)
}

pub fn build(n: usize, full: bool) -> Result<Model<CuntzCalculus>> {
    let c = calculus(n)?;
    let v = ansatz(&c, full)?;
    let w = omega(&c)?;
    let label = if full { "full" } else { "traceless" };
    let sym = Symplectic::new(&c, w, v, label)?;
    Ok(Model::new(ModelKind::Cuntz { n }, c, Some(sym)))
}

/// All `s_k s_l*`.
pub fn hamiltonian_samples(m: &Model<CuntzCalculus>) -> Result<Vec<Form<Legs<Word>>>> {
    let c = m.calc();
    let n = n_of(c);
    let mut out = Vec::new();
    for k in 0..n {
        for l in 0..n {
            out.push(c.element(&matrix_unit(c, k, l)?));
        }
    }
    Ok(out)
}

impl Namespace for CuntzCalculus {
    fn generator_names(&self) -> Vec<String> {
        let alpha = self.algebra().presentation().alphabet();
        alpha.generators().iter().map(|g| g.name.clone()).collect()
    }

    fn atom(&self, name: &str, exp: i64) -> Result<Form<Self::Key>> {
        let pres = self.algebra().presentation();
        if pres.alphabet().generator_index(name).is_none() {
            return Err(Error::UnknownGenerator(name.to_string()));
        }
        let w = pres.word_element(pres.alphabet().word(&[(name, exp)])?);
        Ok(self.element(&self.algebra().normalize(&w)?))
    }

    fn derivation_from_images(&self, images: &[(String, Form<Self::Key>)]) -> Result<Derivation<Self::DerivKey>> {
        let alpha = self.algebra().presentation().alphabet();
        let mut out = Vec::new();
        for (name, img) in images {
            let g = alpha
                .generator_index(name)
                .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
            out.push((g, self.as_element(img)?));
        }
        self.algebra().derivation(&out)
    }

    fn special_derivation(&self, head: &str, args: &[Form<Self::Key>]) -> Result<Derivation<Self::DerivKey>> {
        match (head, args) {
            ("theta", [h]) => theta(self, &self.as_element(h)?),
            ("ad", [h]) => {
                let h = self.element(&self.as_element(h)?);
                let images = self
                    .generator_names()
                    .into_iter()
                    .map(|g| Ok((g.clone(), self.commutator_elements(&h, &self.atom(&g, 1)?)?)))
                    .collect::<Result<Vec<_>>>()?;
                self.derivation_from_images(&images)
            }
            _ => Err(unknown_head(head, args.len(), self.special_heads())),
        }
    }

    fn special_heads(&self) -> &'static [&'static str] {
        &["theta", "ad"]
    }

    fn tensor(&self, legs: &[Form<Self::Key>]) -> Result<Form<Self::Key>> {
        let legs = legs.iter().map(|l| self.as_element(l)).collect::<Result<Vec<_>>>()?;
        Ok(self.raw_tensor(&legs))
    }

    fn check_form(&self, x: &Form<Self::Key>) -> Result<()> {
        if self.in_kernel(x)? {
            Ok(())
        } else {
            Err(Error::KernelViolation)
        }
    }

    fn sample_atoms(&self) -> Vec<Form<Self::Key>> {
        self.generator_names()
            .iter()
            .map(|g| self.atom(g, 1).expect("generator"))
            .collect()
    }

    /// `θ_h` for a random element `h` of word length at most 3.
    fn sample_derivation(
        &self,
        _ansatz: &DerivationSpace<Self::DerivKey>,
        rng: &mut ChaCha8Rng,
    ) -> Result<Derivation<Self::DerivKey>> {
        let mut h = Form::zero();
        for _ in 0..rng.gen_range(1..=2) {
            let len = rng.gen_range(0..=3);
            h.add_scaled(&super::sample_element(self, rng, len)?, &self.sample_scalar(rng));
        }
        theta(self, &self.as_element(&h)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RuleScope;

    #[test]
    fn relations_normalize() {
        let c = calculus(2).unwrap();
        let one = c.one();
        assert_eq!(c.mul(&c.atom("s1*", 1).unwrap(), &c.atom("s1", 1).unwrap()).unwrap(), one);
        assert!(c.mul(&c.atom("s1*", 1).unwrap(), &c.atom("s2", 1).unwrap()).unwrap().is_zero());
        let s2s2 = c.mul(&c.atom("s2", 1).unwrap(), &c.atom("s2*", 1).unwrap()).unwrap();
        assert_eq!(c.render(&s2s2), "1 - s1 s1*");
        let s1s1 = c.mul(&c.atom("s1", 1).unwrap(), &c.atom("s1*", 1).unwrap()).unwrap();
        assert_eq!(c.render(&s1s1), "s1 s1*");
    }

    #[test]
    fn algebra_rules_are_confluent_form_rules_are_not() {
        for n in [2, 3] {
            let c = calculus(n).unwrap();
            assert!(c.algebra().confluence(RuleScope::Algebra).unwrap().is_locally_confluent());
            assert!(!c.algebra().confluence(RuleScope::All).unwrap().is_locally_confluent());
        }
    }

    #[test]
    fn ansatz_dimensions_and_kernel() {
        for n in [2, 3] {
            let m = build(n, false).unwrap();
            let s = m.symplectic().unwrap();
            assert_eq!(s.ansatz().len(), n * n - 1);
            assert!(s.is_nonsingular());
            let full = build(n, true).unwrap();
            let k = full.symplectic().unwrap().kernel_report();
            assert_eq!(k.kernel.len(), 1);
            // the kernel is spanned by θ_1
            let t1 = theta(full.calc(), &full.calc().algebra().presentation().one()).unwrap();
            let c = full.calc();
            let kv = &k.kernel[0];
            let ratio = kv.coords.iter().next().unwrap().1.clone();
            let t1_first = t1.coords.coeff(kv.coords.keys().next().unwrap()).unwrap().clone();
            let scaled = t1.scale(&ratio.try_div(&t1_first).unwrap());
            assert_eq!(&scaled, kv, "{}", c.render_derivation(kv));
        }
    }

    #[test]
    fn theta_of_matrix_unit_is_hamiltonian_field() {
        let m = build(2, false).unwrap();
        let c = m.calc();
        let s = m.symplectic().unwrap();
        let h = matrix_unit(c, 0, 1).unwrap();
        let t = theta(c, &h).unwrap();
        let lhs = c.iprod(&t, s.omega()).unwrap();
        assert_eq!(lhs, c.d(&c.element(&h)).unwrap());
    }
}
