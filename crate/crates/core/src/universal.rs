//! The universal differential calculus of an algebra with a linear basis.
//!
//! A k-form is an element of the kernel part of `A^{⊗(k+1)}`, stored sparsely
//! as combinations of leg tuples `a0⊗a1⊗…⊗ak` of basis elements.
//!
//! - `d(a0⊗…⊗ak) = Σ_i (-1)^i a0⊗…⊗1⊗…⊗ak` (unit inserted in slot `i`),
//! - products merge the touching legs,
//! - `θ⌟(a0⊗…⊗ak) = Σ_{i≥1} (-1)^{i-1} a0⊗…⊗a_{i-1}θ(a_i)⊗…⊗ak`,
//! - `L_θ` applies `θ` to each leg in turn.

use std::fmt::Debug;

use crate::algebra::{
    check_local_confluence, ConfluenceReport, LetterKind, Presentation, RuleScope, Word, WordComb,
};
use crate::calculus::{Calculus, CheckKind, ConsistencyReport, Derivation, Form};
use crate::display::render_lincomb;
use crate::error::{Error, Result};
use crate::forms::{self, GenImageKey, Relation};
use crate::lincomb::LinComb;
use crate::scalar::CycScalar;

/// An algebra with a distinguished linear basis and a notion of derivation.
pub trait BasisAlgebra {
    type Basis: Ord + Clone + Debug;
    type DerivKey: Ord + Clone + Debug;

    fn p(&self) -> u32;

    fn unit(&self) -> LinComb<Self::Basis>;

    fn mul_basis(&self, a: &Self::Basis, b: &Self::Basis) -> Result<LinComb<Self::Basis>>;

    fn apply_basis(
        &self,
        theta: &Derivation<Self::DerivKey>,
        b: &Self::Basis,
    ) -> Result<LinComb<Self::Basis>>;

    fn derivation_commutator(
        &self,
        theta: &Derivation<Self::DerivKey>,
        phi: &Derivation<Self::DerivKey>,
    ) -> Result<Derivation<Self::DerivKey>>;

    fn check_derivation(&self, theta: &Derivation<Self::DerivKey>) -> Result<ConsistencyReport>;

    fn render_basis(&self, b: &Self::Basis) -> String;

    fn render_derivation(&self, theta: &Derivation<Self::DerivKey>) -> String;

    /// The unit, when it is itself a basis element. Forms are then printed
    /// as `a0 d(a1) … d(ak)`.
    fn unit_basis(&self) -> Option<Self::Basis> {
        None
    }

    fn mul(&self, x: &LinComb<Self::Basis>, y: &LinComb<Self::Basis>) -> Result<LinComb<Self::Basis>> {
        let mut out = LinComb::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                out.add_scaled(&self.mul_basis(a, b)?, &(ca * cb));
            }
        }
        Ok(out)
    }

    fn apply(
        &self,
        theta: &Derivation<Self::DerivKey>,
        x: &LinComb<Self::Basis>,
    ) -> Result<LinComb<Self::Basis>> {
        let mut out = LinComb::zero();
        for (b, c) in x.iter() {
            out.add_scaled(&self.apply_basis(theta, b)?, c);
        }
        Ok(out)
    }
}

pub type Legs<B> = Vec<B>;

/// Product of two leg tuples: the last leg of `a` meets the first of `b`.
pub fn mul_legs<A: BasisAlgebra>(alg: &A, a: &[A::Basis], b: &[A::Basis]) -> Result<LinComb<Legs<A::Basis>>> {
    let mid = alg.mul_basis(a.last().expect("nonempty legs"), &b[0])?;
    Ok(mid
        .iter()
        .map(|(m, c)| {
            let mut legs = a[..a.len() - 1].to_vec();
            legs.push(m.clone());
            legs.extend_from_slice(&b[1..]);
            (legs, c.clone())
        })
        .collect())
}

pub fn mul_forms<A: BasisAlgebra>(
    alg: &A,
    x: &LinComb<Legs<A::Basis>>,
    y: &LinComb<Legs<A::Basis>>,
) -> Result<LinComb<Legs<A::Basis>>> {
    let mut out = LinComb::zero();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            out.add_scaled(&mul_legs(alg, a, b)?, &(ca * cb));
        }
    }
    Ok(out)
}

pub fn d_forms<A: BasisAlgebra>(alg: &A, x: &LinComb<Legs<A::Basis>>) -> LinComb<Legs<A::Basis>> {
    let unit = alg.unit();
    let mut out = LinComb::zero();
    for (legs, c) in x.iter() {
        for i in 0..=legs.len() {
            let s = if i % 2 == 0 { c.clone() } else { -c };
            for (u, cu) in unit.iter() {
                let mut l = legs.clone();
                l.insert(i, u.clone());
                out.add_term(l, &s * cu);
            }
        }
    }
    out
}

/// Universal calculus over a [`BasisAlgebra`].
#[derive(Clone, Debug)]
pub struct UniversalCalculus<A> {
    alg: A,
}

impl<A: BasisAlgebra> UniversalCalculus<A> {
    pub fn new(alg: A) -> Self {
        UniversalCalculus { alg }
    }

    pub fn algebra(&self) -> &A {
        &self.alg
    }

    /// Embed an algebra element as a 0-form.
    pub fn element(&self, x: &LinComb<A::Basis>) -> Form<Legs<A::Basis>> {
        x.iter().map(|(b, c)| (vec![b.clone()], c.clone())).collect()
    }

    /// The algebra element underlying a 0-form.
    pub fn as_element(&self, x: &Form<Legs<A::Basis>>) -> Result<LinComb<A::Basis>> {
        let mut out = LinComb::zero();
        for (legs, c) in x.iter() {
            if legs.len() != 1 {
                return Err(Error::NotDegreeZero(legs.len() - 1));
            }
            out.add_term(legs[0].clone(), c.clone());
        }
        Ok(out)
    }

    /// True when multiplying any two adjacent legs gives zero.
    pub fn in_kernel(&self, x: &Form<Legs<A::Basis>>) -> Result<bool> {
        let Some(max) = x.keys().map(Vec::len).max() else {
            return Ok(true);
        };
        for k in 2..=max {
            let part = x.filter(|l| l.len() == k);
            for j in 0..k - 1 {
                let mut contracted: LinComb<Legs<A::Basis>> = LinComb::zero();
                for (legs, c) in part.iter() {
                    for (m, cm) in self.alg.mul_basis(&legs[j], &legs[j + 1])?.iter() {
                        let mut l = legs[..j].to_vec();
                        l.push(m.clone());
                        l.extend_from_slice(&legs[j + 2..]);
                        contracted.add_term(l, c * cm);
                    }
                }
                if !contracted.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `a0 ⊗ a1 ⊗ …` from algebra elements, checked against the kernel condition.
    pub fn tensor(&self, legs: &[LinComb<A::Basis>]) -> Result<Form<Legs<A::Basis>>> {
        let raw = self.raw_tensor(legs);
        if !self.in_kernel(&raw)? {
            return Err(Error::KernelViolation);
        }
        Ok(raw)
    }

    pub fn raw_tensor(&self, legs: &[LinComb<A::Basis>]) -> Form<Legs<A::Basis>> {
        let mut acc: LinComb<Legs<A::Basis>> = LinComb::single(Vec::new(), CycScalar::one(self.alg.p()));
        for leg in legs {
            let mut next = LinComb::zero();
            for (l, c) in acc.iter() {
                for (b, cb) in leg.iter() {
                    let mut nl = l.clone();
                    nl.push(b.clone());
                    next.add_term(nl, c * cb);
                }
            }
            acc = next;
        }
        acc
    }

    fn render_legs(&self, legs: &[A::Basis]) -> String {
        legs.iter()
            .map(|b| {
                let s = self.alg.render_basis(b);
                if s.is_empty() {
                    "1".to_string()
                } else {
                    s
                }
            })
            .collect::<Vec<_>>()
            .join("⊗")
    }

    /// `a0 d(a1) … d(ak)`; terms with a unit among `a1..ak` vanish.
    fn render_differentials(&self, x: &Form<Legs<A::Basis>>, unit: &A::Basis) -> String {
        let reduced = x.filter(|legs| legs.len() == 1 || !legs[1..].contains(unit));
        render_lincomb(&reduced, |legs| {
            let mut parts = Vec::new();
            let head = self.alg.render_basis(&legs[0]);
            if !head.is_empty() {
                parts.push(head);
            }
            for b in &legs[1..] {
                let s = self.alg.render_basis(b);
                if s.contains([' ', '^']) {
                    parts.push(format!("d({s})"));
                } else {
                    parts.push(format!("d{s}"));
                }
            }
            parts.join(" ")
        })
    }

    /// Render in raw leg notation regardless of the algebra.
    pub fn render_tensor(&self, x: &Form<Legs<A::Basis>>) -> String {
        render_lincomb(x, |legs| self.render_legs(legs))
    }
}

impl<A: BasisAlgebra> Calculus for UniversalCalculus<A> {
    type Key = Legs<A::Basis>;
    type DerivKey = A::DerivKey;

    fn p(&self) -> u32 {
        self.alg.p()
    }

    fn degree(&self, key: &Self::Key) -> usize {
        key.len() - 1
    }

    fn one(&self) -> Form<Self::Key> {
        self.element(&self.alg.unit())
    }

    fn mul(&self, x: &Form<Self::Key>, y: &Form<Self::Key>) -> Result<Form<Self::Key>> {
        mul_forms(&self.alg, x, y)
    }

    fn d(&self, x: &Form<Self::Key>) -> Result<Form<Self::Key>> {
        Ok(d_forms(&self.alg, x))
    }

    fn iprod_raw(&self, theta: &Derivation<A::DerivKey>, x: &Form<Self::Key>) -> Result<Form<Self::Key>> {
        let mut out = LinComb::zero();
        for (legs, c) in x.iter() {
            for i in 1..legs.len() {
                let s = if i % 2 == 1 { c.clone() } else { -c };
                let img = self.alg.apply_basis(theta, &legs[i])?;
                for (b, cb) in img.iter() {
                    for (m, cm) in self.alg.mul_basis(&legs[i - 1], b)?.iter() {
                        let mut l = legs[..i - 1].to_vec();
                        l.push(m.clone());
                        l.extend_from_slice(&legs[i + 1..]);
                        out.add_term(l, &(&s * cb) * cm);
                    }
                }
            }
        }
        Ok(out)
    }

    fn lie(&self, theta: &Derivation<A::DerivKey>, x: &Form<Self::Key>) -> Result<Form<Self::Key>> {
        let mut out = LinComb::zero();
        for (legs, c) in x.iter() {
            for i in 0..legs.len() {
                for (b, cb) in self.alg.apply_basis(theta, &legs[i])?.iter() {
                    let mut l = legs.clone();
                    l[i] = b.clone();
                    out.add_term(l, c * cb);
                }
            }
        }
        Ok(out)
    }

    fn commutator(
        &self,
        theta: &Derivation<A::DerivKey>,
        phi: &Derivation<A::DerivKey>,
    ) -> Result<Derivation<A::DerivKey>> {
        self.alg.derivation_commutator(theta, phi)
    }

    fn check_consistency(&self, theta: &Derivation<A::DerivKey>) -> Result<ConsistencyReport> {
        self.alg.check_derivation(theta)
    }

    fn render(&self, x: &Form<Self::Key>) -> String {
        match self.alg.unit_basis() {
            Some(unit) => self.render_differentials(x, &unit),
            None => render_lincomb(x, |legs| self.render_legs(legs)),
        }
    }

    fn render_derivation(&self, theta: &Derivation<A::DerivKey>) -> String {
        self.alg.render_derivation(theta)
    }
}

/// Matrix unit `E_{ij}` (zero-based indices).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixUnit(pub u8, pub u8);

impl MatrixUnit {
    pub fn name(&self) -> String {
        format!("E{}{}", self.0 + 1, self.1 + 1)
    }
}

/// A derivation of `M_n`: image of `E_src` has coefficient on `E_dst`.
pub type MatrixDerivKey = (MatrixUnit, MatrixUnit);

/// The full matrix algebra `M_n` over `Q(q)`.
#[derive(Clone, Debug)]
pub struct MatrixAlgebra {
    n: u8,
    p: u32,
}

pub type Matrix = LinComb<MatrixUnit>;

impl MatrixAlgebra {
    pub fn new(n: usize, p: u32) -> Result<Self> {
        if !(1..=16).contains(&n) {
            return Err(Error::OutOfRange(format!("matrix size {n} not supported")));
        }
        Ok(MatrixAlgebra { n: n as u8, p })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn units(&self) -> impl Iterator<Item = MatrixUnit> {
        let n = self.n;
        (0..n).flat_map(move |i| (0..n).map(move |j| MatrixUnit(i, j)))
    }

    pub fn unit_matrix(&self, i: usize, j: usize) -> Matrix {
        LinComb::single(MatrixUnit(i as u8, j as u8), CycScalar::one(self.p))
    }

    /// `E_ij - E_ji` for `i < j`: the standard basis of antisymmetric matrices.
    pub fn antisymmetric_basis(&self) -> Vec<Matrix> {
        let mut out = Vec::new();
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                out.push(self.unit_matrix(i, j).minus(&self.unit_matrix(j, i)));
            }
        }
        out
    }

    pub fn is_antisymmetric(&self, s: &Matrix) -> bool {
        s.iter().all(|(e, c)| {
            let t = MatrixUnit(e.1, e.0);
            s.coeff(&t).map_or(false, |ct| ct == &-c)
        })
    }

    pub fn commutator(&self, a: &Matrix, b: &Matrix) -> Result<Matrix> {
        Ok(self.mul(a, b)?.minus(&self.mul(b, a)?))
    }

    /// Derivation from explicit images of all matrix units.
    pub fn derivation(&self, images: impl IntoIterator<Item = (MatrixUnit, Matrix)>) -> Derivation<MatrixDerivKey> {
        let mut coords = LinComb::zero();
        for (src, img) in images {
            for (dst, c) in img.iter() {
                coords.add_term((src, *dst), c.clone());
            }
        }
        Derivation::from_coords(coords)
    }

    /// `ad_S(a) = Sa - aS`.
    pub fn inner_derivation(&self, s: &Matrix) -> Result<Derivation<MatrixDerivKey>> {
        let mut images = Vec::new();
        for e in self.units() {
            let em = LinComb::single(e, CycScalar::one(self.p));
            images.push((e, self.commutator(s, &em)?));
        }
        Ok(self.derivation(images))
    }

    pub fn image(&self, theta: &Derivation<MatrixDerivKey>, e: MatrixUnit) -> Matrix {
        theta
            .coords
            .iter()
            .filter(|((src, _), _)| *src == e)
            .map(|((_, dst), c)| (*dst, c.clone()))
            .collect()
    }

    pub fn render_matrix(&self, m: &Matrix) -> String {
        render_lincomb(m, MatrixUnit::name)
    }
}

impl BasisAlgebra for MatrixAlgebra {
    type Basis = MatrixUnit;
    type DerivKey = MatrixDerivKey;

    fn p(&self) -> u32 {
        self.p
    }

    fn unit(&self) -> Matrix {
        (0..self.n)
            .map(|i| (MatrixUnit(i, i), CycScalar::one(self.p)))
            .collect()
    }

    fn mul_basis(&self, a: &MatrixUnit, b: &MatrixUnit) -> Result<Matrix> {
        Ok(if a.1 == b.0 {
            LinComb::single(MatrixUnit(a.0, b.1), CycScalar::one(self.p))
        } else {
            LinComb::zero()
        })
    }

    fn apply_basis(&self, theta: &Derivation<MatrixDerivKey>, b: &MatrixUnit) -> Result<Matrix> {
        Ok(self.image(theta, *b))
    }

    fn derivation_commutator(
        &self,
        theta: &Derivation<MatrixDerivKey>,
        phi: &Derivation<MatrixDerivKey>,
    ) -> Result<Derivation<MatrixDerivKey>> {
        let mut images = Vec::new();
        for e in self.units() {
            let t = self.apply(theta, &self.image(phi, e))?;
            let f = self.apply(phi, &self.image(theta, e))?;
            images.push((e, t.minus(&f)));
        }
        Ok(self.derivation(images))
    }

    fn check_derivation(&self, theta: &Derivation<MatrixDerivKey>) -> Result<ConsistencyReport> {
        let mut report = ConsistencyReport::default();
        for a in self.units() {
            for b in self.units() {
                let ab = self.mul_basis(&a, &b)?;
                let lhs = self.apply(theta, &ab)?;
                let am = LinComb::single(a, CycScalar::one(self.p));
                let bm = LinComb::single(b, CycScalar::one(self.p));
                let rhs = self
                    .mul(&self.image(theta, a), &bm)?
                    .plus(&self.mul(&am, &self.image(theta, b))?);
                let r = lhs.minus(&rhs);
                report.push(
                    format!("{} {} = {}", a.name(), b.name(), self.render_matrix(&ab)),
                    CheckKind::Apply,
                    self.render_matrix(&r),
                    r.is_zero(),
                );
            }
        }
        Ok(report)
    }

    fn render_basis(&self, b: &MatrixUnit) -> String {
        b.name()
    }

    fn render_derivation(&self, theta: &Derivation<MatrixDerivKey>) -> String {
        self.units()
            .map(|e| format!("{} -> {}", e.name(), self.render_matrix(&self.image(theta, e))))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// A presented algebra with basis the normal words; relations between
/// forms are kept only for consistency checks, the forms themselves live in
/// the universal calculus.
#[derive(Clone, Debug)]
pub struct PresentedAlgebra {
    algebra: Presentation,
    full: Presentation,
    algebra_relations: Vec<Relation>,
    form_relations: Vec<Relation>,
}

impl PresentedAlgebra {
    /// `full` may contain rules between forms; only the algebra rules are
    /// used for normal forms.
    pub fn new(full: Presentation) -> Result<Self> {
        let alphabet = full.alphabet().clone();
        let algebra_rules = full.algebra_rules().cloned().collect();
        let algebra = Presentation::new(alphabet, full.p(), algebra_rules)?;
        let rel = |r: &crate::algebra::Rule| Relation {
            label: full.rule_label(r),
            element: WordComb::single(r.lhs.clone(), CycScalar::one(full.p())).minus(&r.rhs),
        };
        let algebra_relations = full.algebra_rules().map(rel).collect();
        let form_relations = full.form_rules().map(rel).collect();
        Ok(PresentedAlgebra {
            algebra,
            full,
            algebra_relations,
            form_relations,
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.algebra
    }

    /// The presentation including the rules between forms.
    pub fn full_presentation(&self) -> &Presentation {
        &self.full
    }

    pub fn form_relations(&self) -> &[Relation] {
        &self.form_relations
    }

    pub fn confluence(&self, scope: RuleScope) -> Result<ConfluenceReport> {
        match scope {
            RuleScope::Algebra => check_local_confluence(&self.algebra, RuleScope::Algebra),
            RuleScope::All => check_local_confluence(&self.full, RuleScope::All),
        }
    }

    pub fn normalize(&self, x: &WordComb) -> Result<WordComb> {
        self.algebra.normalize(x)
    }

    fn n_gens(&self) -> usize {
        self.algebra.alphabet().generators().len()
    }

    pub fn images(&self, theta: &Derivation<GenImageKey>) -> Vec<WordComb> {
        forms::images_of(self.n_gens(), theta)
    }

    /// Build a derivation from generator images (normalised).
    pub fn derivation(&self, images: &[(usize, WordComb)]) -> Result<Derivation<GenImageKey>> {
        let mut out = vec![WordComb::zero(); self.n_gens()];
        for (g, img) in images {
            out[*g].add_assign(&self.normalize(img)?);
        }
        Ok(forms::derivation_from_images(&out))
    }

    /// Realise a word in algebra letters and form-generators as a
    /// universal form: `g ↦ g`, `dg ↦ 1⊗g - g⊗1`.
    pub fn realize(&self, x: &WordComb) -> Result<Form<Legs<Word>>> {
        let alpha = self.algebra.alphabet();
        let p = self.algebra.p();
        let mut out = LinComb::zero();
        for (w, c) in x.iter() {
            let mut acc: LinComb<Legs<Word>> = LinComb::single(vec![Word::one()], CycScalar::one(p));
            for &l in w.letters() {
                let factor = match alpha.kind(l) {
                    LetterKind::Diff => {
                        let g = alpha.letter(alpha.generator_of(l), LetterKind::Gen).expect("generator letter");
                        let leg = LinComb::single(vec![Word(vec![g])], CycScalar::one(p));
                        d_forms(self, &leg)
                    }
                    _ => LinComb::single(vec![Word(vec![l])], CycScalar::one(p)),
                };
                acc = mul_forms(self, &acc, &factor)?;
            }
            out.add_scaled(&acc, c);
        }
        Ok(out)
    }
}

impl BasisAlgebra for PresentedAlgebra {
    type Basis = Word;
    type DerivKey = GenImageKey;

    fn p(&self) -> u32 {
        self.algebra.p()
    }

    fn unit(&self) -> WordComb {
        self.algebra.one()
    }

    fn unit_basis(&self) -> Option<Word> {
        Some(Word::one())
    }

    fn mul_basis(&self, a: &Word, b: &Word) -> Result<WordComb> {
        let w = self.algebra.alphabet().concat(a, b);
        self.algebra.normalize(&self.algebra.word_element(w))
    }

    fn apply_basis(&self, theta: &Derivation<GenImageKey>, b: &Word) -> Result<WordComb> {
        let images = self.images(theta);
        let zeros = vec![WordComb::zero(); images.len()];
        let raw = forms::free_lie(
            self.algebra.alphabet(),
            self.p(),
            &images,
            &zeros,
            &self.algebra.word_element(b.clone()),
        );
        self.normalize(&raw)
    }

    fn derivation_commutator(
        &self,
        theta: &Derivation<GenImageKey>,
        phi: &Derivation<GenImageKey>,
    ) -> Result<Derivation<GenImageKey>> {
        let ti = self.images(theta);
        let pi = self.images(phi);
        let mut out = Vec::with_capacity(ti.len());
        for (t, f) in ti.iter().zip(&pi) {
            out.push(self.apply(theta, f)?.minus(&self.apply(phi, t)?));
        }
        Ok(forms::derivation_from_images(&out))
    }

    fn check_derivation(&self, theta: &Derivation<GenImageKey>) -> Result<ConsistencyReport> {
        let alpha = self.algebra.alphabet();
        let p = self.p();
        let images = self.images(theta);
        let dimages: Vec<WordComb> = images.iter().map(|i| forms::free_d(alpha, p, i)).collect();
        let mut report = ConsistencyReport::default();
        for rel in &self.algebra_relations {
            let r = self.normalize(&forms::free_lie(alpha, p, &images, &dimages, &rel.element))?;
            report.push(rel.label.clone(), CheckKind::Apply, self.algebra.render(&r), r.is_zero());
        }
        let calc = UniversalCalculus { alg: self };
        for rel in &self.form_relations {
            let r = self.normalize(&forms::free_iprod(alpha, p, &images, &rel.element))?;
            report.push(rel.label.clone(), CheckKind::Iprod, self.algebra.render(&r), r.is_zero());
            let l = self.realize(&forms::free_lie(alpha, p, &images, &dimages, &rel.element))?;
            report.push(rel.label.clone(), CheckKind::Lie, calc.render(&l), l.is_zero());
        }
        Ok(report)
    }

    fn render_basis(&self, b: &Word) -> String {
        self.algebra.alphabet().render_word(b)
    }

    fn render_derivation(&self, theta: &Derivation<GenImageKey>) -> String {
        forms::render_images(self.algebra.alphabet(), &self.images(theta))
    }
}

impl<A: BasisAlgebra> BasisAlgebra for &A {
    type Basis = A::Basis;
    type DerivKey = A::DerivKey;

    fn p(&self) -> u32 {
        (*self).p()
    }

    fn unit(&self) -> LinComb<A::Basis> {
        (*self).unit()
    }

    fn mul_basis(&self, a: &A::Basis, b: &A::Basis) -> Result<LinComb<A::Basis>> {
        (*self).mul_basis(a, b)
    }

    fn apply_basis(&self, theta: &Derivation<A::DerivKey>, b: &A::Basis) -> Result<LinComb<A::Basis>> {
        (*self).apply_basis(theta, b)
    }

    fn derivation_commutator(
        &self,
        theta: &Derivation<A::DerivKey>,
        phi: &Derivation<A::DerivKey>,
    ) -> Result<Derivation<A::DerivKey>> {
        (*self).derivation_commutator(theta, phi)
    }

    fn check_derivation(&self, theta: &Derivation<A::DerivKey>) -> Result<ConsistencyReport> {
        (*self).check_derivation(theta)
    }

    fn render_basis(&self, b: &A::Basis) -> String {
        (*self).render_basis(b)
    }

    fn render_derivation(&self, theta: &Derivation<A::DerivKey>) -> String {
        (*self).render_derivation(theta)
    }

    fn unit_basis(&self) -> Option<A::Basis> {
        (*self).unit_basis()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2() -> (MatrixAlgebra, UniversalCalculus<MatrixAlgebra>) {
        let a = MatrixAlgebra::new(2, 1).unwrap();
        (a.clone(), UniversalCalculus::new(a))
    }

    fn e(i: u8, j: u8) -> MatrixUnit {
        MatrixUnit(i - 1, j - 1)
    }

    fn single(legs: &[MatrixUnit]) -> Form<Legs<MatrixUnit>> {
        LinComb::single(legs.to_vec(), CycScalar::one(1))
    }

    fn one_tensor(calc: &UniversalCalculus<MatrixAlgebra>, a: MatrixUnit, unit_first: bool) -> Form<Legs<MatrixUnit>> {
        let unit = calc.algebra().unit();
        let leg = LinComb::single(a, CycScalar::one(1));
        if unit_first {
            calc.raw_tensor(&[unit, leg])
        } else {
            calc.raw_tensor(&[leg, unit])
        }
    }

    #[test]
    fn d_of_matrix_unit() {
        let (_, c) = m2();
        let got = c.d(&single(&[e(1, 2)])).unwrap();
        let expect = one_tensor(&c, e(1, 2), true).minus(&one_tensor(&c, e(1, 2), false));
        assert_eq!(got, expect);
        assert!(c.in_kernel(&got).unwrap());
        assert!(c.d(&got).unwrap().is_zero());
    }

    #[test]
    fn d_of_one_form_matches_three_term_formula() {
        let (a, c) = m2();
        let x = single(&[e(1, 1), e(2, 2)]);
        let got = c.d(&x).unwrap();
        let u = a.unit();
        let l = |m: MatrixUnit| LinComb::single(m, CycScalar::one(1));
        let expect = c
            .raw_tensor(&[u.clone(), l(e(1, 1)), l(e(2, 2))])
            .minus(&c.raw_tensor(&[l(e(1, 1)), u.clone(), l(e(2, 2))]))
            .plus(&c.raw_tensor(&[l(e(1, 1)), l(e(2, 2)), u]));
        assert_eq!(got, expect);
    }

    #[test]
    fn leibniz_expansion_of_products() {
        // a db c dd = a d(bc) dd - ab dc dd for all matrix units
        let (a, c) = m2();
        let units: Vec<MatrixUnit> = a.units().collect();
        let el = |m: MatrixUnit| single(&[m]);
        for &x in &units {
            for &y in &units {
                for &z in &units {
                    for &w in &units {
                        let dy = c.d(&el(y)).unwrap();
                        let dw = c.d(&el(w)).unwrap();
                        let lhs = c
                            .mul(&c.mul(&c.mul(&el(x), &dy).unwrap(), &el(z)).unwrap(), &dw)
                            .unwrap();
                        let yz = c.mul(&el(y), &el(z)).unwrap();
                        let xy = c.mul(&el(x), &el(y)).unwrap();
                        let rhs = c
                            .mul(&c.mul(&el(x), &c.d(&yz).unwrap()).unwrap(), &dw)
                            .unwrap()
                            .minus(&c.mul(&c.mul(&xy, &c.d(&el(z)).unwrap()).unwrap(), &dw).unwrap());
                        assert_eq!(lhs, rhs);
                        assert!(c.in_kernel(&lhs).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn one_form_times_zero_form() {
        // (a db) c = a⊗bc - ab⊗c
        let (_, c) = m2();
        let (x, y, z) = (e(1, 2), e(2, 1), e(1, 1));
        let adb = c.mul(&single(&[x]), &c.d(&single(&[y])).unwrap()).unwrap();
        let got = c.mul(&adb, &single(&[z])).unwrap();
        // y z = E21 E11 = E21, x y = E11
        let direct = single(&[x, e(2, 1)]).minus(&single(&[e(1, 1), z]));
        assert_eq!(got, direct);
        assert_eq!(c.mul(&got, &c.one()).unwrap(), got);
    }

    #[test]
    fn inner_derivation_on_d_e11() {
        let (a, c) = m2();
        let s = a.unit_matrix(0, 1).minus(&a.unit_matrix(1, 0));
        let ad = a.inner_derivation(&s).unwrap();
        let got = c.iprod(&ad, &c.d(&single(&[e(1, 1)])).unwrap()).unwrap();
        let expect = c.element(&a.unit_matrix(0, 1).plus(&a.unit_matrix(1, 0))).neg();
        assert_eq!(got, expect);
        assert!(c.check_consistency(&ad).unwrap().is_consistent());
    }

    #[test]
    fn non_derivation_is_rejected() {
        let (a, c) = m2();
        let bogus = a.derivation([(e(1, 1), a.unit_matrix(0, 1))]);
        assert!(!c.check_consistency(&bogus).unwrap().is_consistent());
    }

    #[test]
    fn raw_tensor_kernel_check() {
        let (_, c) = m2();
        let l = |m: MatrixUnit| LinComb::single(m, CycScalar::one(1));
        assert_eq!(c.tensor(&[l(e(1, 2)), l(e(2, 1))]), Err(Error::KernelViolation));
        assert!(c.tensor(&[l(e(1, 2)), l(e(1, 2))]).is_ok());
    }

    #[test]
    fn rendering() {
        let (_, c) = m2();
        let x = c.d(&single(&[e(1, 2)])).unwrap();
        assert_eq!(c.render(&x), "E11⊗E12 - E12⊗E11 - E12⊗E22 + E22⊗E12");
    }
}
