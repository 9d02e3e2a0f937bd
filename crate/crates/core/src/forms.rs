//! Differential calculi given by generators and rewrite rules.
//!
//! The letter-level maps below act on raw words by the Leibniz rule; the
//! result is then brought to normal form by the presentation. They are shared
//! with the universal backend over presented algebras.

use crate::algebra::{Alphabet, LetterKind, Letter, Presentation, Word, WordComb};
use crate::calculus::{Calculus, CheckKind, ConsistencyReport, Derivation, Form};
use crate::display::render_lincomb;
use crate::error::{Error, Result};
use crate::scalar::CycScalar;

/// Key of a presented derivation: image of generator `.0` has a term on word `.1`.
pub type GenImageKey = (usize, Word);

/// Sum over the letters of `w` of `prefix · f(letter) · suffix`, where `f`
/// also receives the number of form-generators in the prefix.
pub fn expand_letters(
    alpha: &Alphabet,
    w: &Word,
    mut f: impl FnMut(Letter, usize) -> Option<WordComb>,
) -> WordComb {
    let mut out = WordComb::zero();
    let mut diffs = 0;
    for (i, &l) in w.letters().iter().enumerate() {
        if let Some(r) = f(l, diffs) {
            let pre = w.slice(0, i);
            let suf = w.slice(i + 1, w.len());
            for (rw, rc) in r.iter() {
                out.add_term(alpha.concat3(&pre, rw, &suf), rc.clone());
            }
        }
        if alpha.kind(l) == LetterKind::Diff {
            diffs += 1;
        }
    }
    out
}

fn expand_comb(
    alpha: &Alphabet,
    x: &WordComb,
    mut f: impl FnMut(Letter, usize) -> Option<WordComb>,
) -> WordComb {
    let mut out = WordComb::zero();
    for (w, c) in x.iter() {
        out.add_scaled(&expand_letters(alpha, w, &mut f), c);
    }
    out
}

fn sign(p: u32, k: usize) -> CycScalar {
    CycScalar::from_int(p, if k % 2 == 0 { 1 } else { -1 })
}

/// `-g^-1 · x · g^-1`
fn conjugate_inverse(alpha: &Alphabet, p: u32, l: Letter, x: &WordComb) -> WordComb {
    let inv = Word(vec![l]);
    let minus = CycScalar::from_int(p, -1);
    x.iter()
        .map(|(w, c)| (alpha.concat3(&inv, w, &inv), c * &minus))
        .collect()
}

/// Letter-level differential: `d g = dg`, `d g^-1 = -g^-1 dg g^-1`,
/// `d dg = 0`, with the sign `(-1)^k` for `k` form-generators to the left.
pub fn free_d(alpha: &Alphabet, p: u32, x: &WordComb) -> WordComb {
    expand_comb(alpha, x, |l, k| {
        let g = alpha.generator_of(l);
        let dg = Word(vec![alpha.letter(g, LetterKind::Diff)?]);
        let r = match alpha.kind(l) {
            LetterKind::Gen => WordComb::single(dg, CycScalar::one(p)),
            LetterKind::Inv => conjugate_inverse(alpha, p, l, &WordComb::single(dg, CycScalar::one(p))),
            LetterKind::Diff => return None,
        };
        Some(r.scale(&sign(p, k)))
    })
}

/// Letter-level interior product: `θ⌟dg = θ(g)` with Koszul sign.
pub fn free_iprod(alpha: &Alphabet, p: u32, images: &[WordComb], x: &WordComb) -> WordComb {
    expand_comb(alpha, x, |l, k| match alpha.kind(l) {
        LetterKind::Diff => Some(images[alpha.generator_of(l)].scale(&sign(p, k))),
        _ => None,
    })
}

/// Letter-level Lie derivative. `dimages[g]` must be `d(θ(g))`.
pub fn free_lie(
    alpha: &Alphabet,
    p: u32,
    images: &[WordComb],
    dimages: &[WordComb],
    x: &WordComb,
) -> WordComb {
    expand_comb(alpha, x, |l, _| {
        let g = alpha.generator_of(l);
        match alpha.kind(l) {
            LetterKind::Gen => Some(images[g].clone()),
            LetterKind::Inv => Some(conjugate_inverse(alpha, p, l, &images[g])),
            LetterKind::Diff => Some(dimages[g].clone()),
        }
    })
}

/// Per-generator images of a derivation keyed by [`GenImageKey`].
pub fn images_of(n_gens: usize, theta: &Derivation<GenImageKey>) -> Vec<WordComb> {
    let mut out = vec![WordComb::zero(); n_gens];
    for ((g, w), c) in theta.coords.iter() {
        out[*g].add_term(w.clone(), c.clone());
    }
    out
}

pub fn derivation_from_images(images: &[WordComb]) -> Derivation<GenImageKey> {
    let mut coords = crate::lincomb::LinComb::zero();
    for (g, img) in images.iter().enumerate() {
        for (w, c) in img.iter() {
            coords.add_term((g, w.clone()), c.clone());
        }
    }
    Derivation::from_coords(coords)
}

pub fn render_images(alpha: &Alphabet, images: &[WordComb]) -> String {
    alpha
        .generators()
        .iter()
        .zip(images)
        .map(|(g, img)| format!("{} -> {}", g.name, render_lincomb(img, |w| alpha.render_word(w))))
        .collect::<Vec<_>>()
        .join(", ")
}

/// A labelled defining relation `lhs - rhs`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub label: String,
    pub element: WordComb,
}

/// Differential calculus presented by algebra and form rewrite rules.
#[derive(Clone, Debug)]
pub struct PresentedCalculus {
    pres: Presentation,
    relations: Vec<Relation>,
}

impl PresentedCalculus {
    pub fn new(pres: Presentation) -> Self {
        let relations = pres
            .rules()
            .iter()
            .map(|r| Relation {
                label: pres.rule_label(r),
                element: WordComb::single(r.lhs.clone(), CycScalar::one(pres.p())).minus(&r.rhs),
            })
            .collect();
        PresentedCalculus { pres, relations }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.pres.alphabet()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn normalize(&self, x: &WordComb) -> Result<WordComb> {
        self.pres.normalize(x)
    }

    pub fn word(&self, factors: &[(&str, i64)]) -> Result<WordComb> {
        Ok(self.pres.word_element(self.alphabet().word(factors)?))
    }

    /// Build a derivation from generator images (normalised; must be degree 0).
    pub fn derivation(&self, images: &[(&str, WordComb)]) -> Result<Derivation<GenImageKey>> {
        let n = self.alphabet().generators().len();
        let mut out = vec![WordComb::zero(); n];
        for (name, img) in images {
            let g = self
                .alphabet()
                .generator_index(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            let img = self.normalize(img)?;
            if let Some(k) = img.keys().map(|w| self.alphabet().degree(w)).find(|&k| k != 0) {
                return Err(Error::NotDegreeZero(k));
            }
            out[g].add_assign(&img);
        }
        Ok(derivation_from_images(&out))
    }

    pub fn images(&self, theta: &Derivation<GenImageKey>) -> Vec<WordComb> {
        images_of(self.alphabet().generators().len(), theta)
    }

    fn lie_data(&self, theta: &Derivation<GenImageKey>) -> (Vec<WordComb>, Vec<WordComb>) {
        let images = self.images(theta);
        let dimages = images
            .iter()
            .map(|img| free_d(self.alphabet(), self.pres.p(), img))
            .collect();
        (images, dimages)
    }

    /// Relations whose differential does not reduce to zero; empty when `d`
    /// is well defined on the presented calculus.
    pub fn check_differential(&self) -> Result<Vec<(String, WordComb)>> {
        let mut bad = Vec::new();
        for rel in &self.relations {
            let r = self.normalize(&free_d(self.alphabet(), self.pres.p(), &rel.element))?;
            if !r.is_zero() {
                bad.push((rel.label.clone(), r));
            }
        }
        Ok(bad)
    }
}

impl Calculus for PresentedCalculus {
    type Key = Word;
    type DerivKey = GenImageKey;

    fn p(&self) -> u32 {
        self.pres.p()
    }

    fn degree(&self, key: &Word) -> usize {
        self.alphabet().degree(key)
    }

    fn one(&self) -> Form<Word> {
        self.pres.one()
    }

    fn mul(&self, x: &Form<Word>, y: &Form<Word>) -> Result<Form<Word>> {
        self.pres.mul(x, y)
    }

    fn d(&self, x: &Form<Word>) -> Result<Form<Word>> {
        self.normalize(&free_d(self.alphabet(), self.p(), x))
    }

    fn iprod_raw(&self, theta: &Derivation<GenImageKey>, x: &Form<Word>) -> Result<Form<Word>> {
        let images = self.images(theta);
        self.normalize(&free_iprod(self.alphabet(), self.p(), &images, x))
    }

    fn lie(&self, theta: &Derivation<GenImageKey>, x: &Form<Word>) -> Result<Form<Word>> {
        let (images, dimages) = self.lie_data(theta);
        self.normalize(&free_lie(self.alphabet(), self.p(), &images, &dimages, x))
    }

    fn commutator(
        &self,
        theta: &Derivation<GenImageKey>,
        phi: &Derivation<GenImageKey>,
    ) -> Result<Derivation<GenImageKey>> {
        let ti = self.images(theta);
        let pi = self.images(phi);
        let mut out = Vec::with_capacity(ti.len());
        for (t, f) in ti.iter().zip(&pi) {
            out.push(self.lie(theta, f)?.minus(&self.lie(phi, t)?));
        }
        Ok(derivation_from_images(&out))
    }

    fn check_consistency(&self, theta: &Derivation<GenImageKey>) -> Result<ConsistencyReport> {
        let (images, dimages) = self.lie_data(theta);
        let alpha = self.alphabet();
        let p = self.p();
        let mut report = ConsistencyReport::default();
        for rel in &self.relations {
            let deg = self.pres.degree_of(&rel.element).unwrap_or(0);
            let mut run = |kind: CheckKind, raw: WordComb| -> Result<()> {
                let r = self.normalize(&raw)?;
                report.push(rel.label.clone(), kind, self.render(&r), r.is_zero());
                Ok(())
            };
            if deg == 0 {
                run(CheckKind::Apply, free_lie(alpha, p, &images, &dimages, &rel.element))?;
            } else {
                run(CheckKind::Iprod, free_iprod(alpha, p, &images, &rel.element))?;
                run(CheckKind::Lie, free_lie(alpha, p, &images, &dimages, &rel.element))?;
            }
        }
        Ok(report)
    }

    fn render(&self, x: &Form<Word>) -> String {
        self.pres.render(x)
    }

    fn render_derivation(&self, theta: &Derivation<GenImageKey>) -> String {
        render_images(self.alphabet(), &self.images(theta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::torus;

    fn calc(p: u32) -> PresentedCalculus {
        torus::calculus(p, 1).unwrap()
    }

    fn w(c: &PresentedCalculus, f: &[(&str, i64)]) -> WordComb {
        c.word(f).unwrap()
    }

    #[test]
    fn torus_form_relations_normalize() {
        let c = calc(3);
        let q = CycScalar::q(3);
        let x = w(&c, &[("du", 1), ("dv", 1)]).plus(&w(&c, &[("dv", 1), ("du", 1)]).scale(&q));
        assert!(c.normalize(&x).unwrap().is_zero());
        let y = c.normalize(&w(&c, &[("u", 1), ("dv", 1)])).unwrap();
        assert_eq!(y, w(&c, &[("dv", 1), ("u", 1)]).scale(&q));
        assert!(c.normalize(&w(&c, &[("du", 2)])).unwrap().is_zero());
    }

    #[test]
    fn d_of_u_dv_is_du_dv() {
        let c = calc(2);
        let got = c.d(&w(&c, &[("u", 1), ("dv", 1)])).unwrap();
        let expect = c.normalize(&w(&c, &[("du", 1), ("dv", 1)])).unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn d_of_inverse() {
        let c = calc(2);
        let got = c.d(&w(&c, &[("u", -1)])).unwrap();
        let expect = c
            .normalize(&w(&c, &[("u", -1), ("du", 1), ("u", -1)]))
            .unwrap()
            .neg();
        assert_eq!(got, expect);
        assert_eq!(c.render(&got), "-du u^-2");
    }

    #[test]
    fn log_form_is_closed_and_degree_two() {
        for p in 1..=4 {
            let c = calc(p);
            let omega = w(&c, &[("u", -1), ("du", 1), ("dv", 1), ("v", -1)]);
            assert!(c.is_closed(&omega).unwrap());
            let n = c.normalize(&omega).unwrap();
            assert_eq!(c.degree_of(&n), Some(2));
            assert_eq!(c.render(&n), "-dv du u^-1 v^-1");
        }
    }

    #[test]
    fn three_forms_vanish_on_the_torus() {
        let c = calc(3);
        let fill = [("u", 1), ("u", -1), ("v", 2), ("v", -1)];
        for a in ["du", "dv"] {
            for b in ["du", "dv"] {
                for e in ["du", "dv"] {
                    for (pos, x) in (0..4).flat_map(|i| fill.iter().map(move |x| (i, *x))) {
                        let mut f = vec![(a, 1), (b, 1), (e, 1)];
                        f.insert(pos, x);
                        assert!(c.normalize(&w(&c, &f)).unwrap().is_zero(), "{f:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn differential_is_well_defined() {
        for p in 1..=5 {
            assert!(calc(p).check_differential().unwrap().is_empty());
        }
    }

    #[test]
    fn apply_to_inverse_and_unit() {
        let c = calc(2);
        let theta = c.derivation(&[("u", w(&c, &[("u", 1)]))]).unwrap();
        assert_eq!(c.apply(&theta, &w(&c, &[("u", -1)])).unwrap(), w(&c, &[("u", -1)]).neg());
        assert!(c.apply(&theta, &c.one()).unwrap().is_zero());
        assert_eq!(
            c.apply(&theta, &w(&c, &[("du", 1)])),
            Err(Error::NotDegreeZero(1))
        );
    }

    #[test]
    fn iprod_of_log_form() {
        let c = calc(2);
        let theta = c.derivation(&[("u", w(&c, &[("u", 1)]))]).unwrap();
        let omega = w(&c, &[("u", -1), ("du", 1), ("dv", 1), ("v", -1)]);
        let got = c.iprod(&theta, &omega).unwrap();
        assert_eq!(got, c.normalize(&w(&c, &[("dv", 1), ("v", -1)])).unwrap());
        assert_eq!(c.iprod(&theta, &c.one()), Err(Error::DegreeZero));
        let du = w(&c, &[("du", 1)]);
        assert_eq!(c.iprod(&theta, &du).unwrap(), w(&c, &[("u", 1)]));
    }

    #[test]
    fn iprod_of_log_form_general() {
        let p = 3;
        let c = calc(p);
        let tu = w(&c, &[("u", 4), ("v", 3)]);
        let tv = w(&c, &[("u", 3), ("v", -2)]).plus(&w(&c, &[("v", 1)]));
        let theta = c.derivation(&[("u", tu.clone()), ("v", tv.clone())]).unwrap();
        let omega = w(&c, &[("u", -1), ("du", 1), ("dv", 1), ("v", -1)]);
        let got = c.iprod(&theta, &omega).unwrap();
        let pres = c.presentation();
        let t1 = pres.mul_free(&pres.mul_free(&w(&c, &[("u", -1)]), &tu), &w(&c, &[("dv", 1), ("v", -1)]));
        let t2 = pres.mul_free(&pres.mul_free(&w(&c, &[("u", -1), ("du", 1)]), &tv), &w(&c, &[("v", -1)]));
        assert_eq!(got, c.normalize(&t1.minus(&t2)).unwrap());
    }

    #[test]
    fn logarithmic_one_form_is_invariant() {
        let c = calc(2);
        let theta = c.derivation(&[("u", w(&c, &[("u", 1)]))]).unwrap();
        let x = w(&c, &[("u", -1), ("du", 1)]);
        assert!(c.lie(&theta, &x).unwrap().is_zero());
        let du = w(&c, &[("du", 1)]);
        assert_eq!(c.lie(&theta, &du).unwrap(), du);
    }

    #[test]
    fn consistency_examples() {
        let c = calc(2);
        let good = c
            .derivation(&[("u", w(&c, &[("u", 3), ("v", 2)])), ("v", w(&c, &[("u", 2), ("v", 3)]))])
            .unwrap();
        assert!(c.check_consistency(&good).unwrap().is_consistent());
        let bad = c.derivation(&[("u", w(&c, &[("u", 2)]))]).unwrap();
        let rep = c.check_consistency(&bad).unwrap();
        assert!(!rep.is_consistent());
        assert!(rep.into_result().is_err());
    }

    #[test]
    fn commutator_with_itself_vanishes() {
        let c = calc(3);
        let theta = c
            .derivation(&[("u", w(&c, &[("u", 4), ("v", 3)])), ("v", w(&c, &[("u", -3), ("v", 1)]))])
            .unwrap();
        assert!(c.commutator(&theta, &theta).unwrap().is_zero());
    }
}
