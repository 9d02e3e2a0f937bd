//! The interface shared by every differential-calculus backend.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::scalar::CycScalar;

/// A form: a linear combination of backend basis keys.
pub type Form<K> = LinComb<K>;

/// A derivation, stored as coordinates on backend-specific keys (generator
/// images, matrix coefficients, ...). Coordinates are canonical, so equal
/// derivations compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Derivation<D: Ord> {
    pub coords: LinComb<D>,
}

impl<D: Ord + Clone> Derivation<D> {
    pub fn zero() -> Self {
        Derivation {
            coords: LinComb::zero(),
        }
    }

    pub fn from_coords(coords: LinComb<D>) -> Self {
        Derivation { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    pub fn plus(&self, other: &Self) -> Self {
        Derivation::from_coords(self.coords.plus(&other.coords))
    }

    pub fn minus(&self, other: &Self) -> Self {
        Derivation::from_coords(self.coords.minus(&other.coords))
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        Derivation::from_coords(self.coords.scale(c))
    }
}

impl<D: Ord + Debug> Debug for Derivation<D> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_tuple("Derivation").field(&self.coords).finish()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CheckKind {
    /// `θ(R)` for an algebra relation.
    Apply,
    /// `θ⌟R` for a relation between forms.
    Iprod,
    /// `L_θ(R)` for a relation between forms.
    Lie,
}

#[derive(Clone, Debug)]
pub struct ConsistencyCheck {
    pub relation: String,
    pub kind: CheckKind,
    /// Rendered normal form of the image of the relation; `0` when passed.
    pub residual: String,
    pub passed: bool,
}

/// Outcome of checking that a derivation annihilates every relation.
#[derive(Clone, Debug, Default)]
pub struct ConsistencyReport {
    pub checks: Vec<ConsistencyCheck>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConsistencyCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn push(&mut self, relation: String, kind: CheckKind, residual: String, passed: bool) {
        self.checks.push(ConsistencyCheck {
            relation,
            kind,
            residual,
            passed,
        });
    }

    /// `Err(InconsistentDerivation)` naming the first failed check.
    pub fn into_result(self) -> Result<()> {
        match self.failures().next() {
            None => Ok(()),
            Some(c) => Err(Error::InconsistentDerivation(format!(
                "{:?} on `{}` leaves `{}`",
                c.kind, c.relation, c.residual
            ))),
        }
    }
}

/// A graded differential algebra together with its derivations.
///
/// Forms are linear combinations of `Key`s. All results are returned in the
/// backend's canonical form, so structural equality is mathematical equality.
pub trait Calculus {
    type Key: Ord + Clone + Debug;
    type DerivKey: Ord + Clone + Debug;

    /// Order of the root of unity in the coefficient field.
    fn p(&self) -> u32;

    fn degree(&self, key: &Self::Key) -> usize;

    fn one(&self) -> Form<Self::Key>;

    /// Graded product.
    fn mul(&self, x: &Form<Self::Key>, y: &Form<Self::Key>) -> Result<Form<Self::Key>>;

    fn d(&self, x: &Form<Self::Key>) -> Result<Form<Self::Key>>;

    /// Interior product extended as a signed derivation of degree -1;
    /// degree-0 components contribute zero.
    fn iprod_raw(&self, theta: &Derivation<Self::DerivKey>, x: &Form<Self::Key>) -> Result<Form<Self::Key>>;

    /// Lie derivative; on degree 0 this is the derivation itself.
    fn lie(&self, theta: &Derivation<Self::DerivKey>, x: &Form<Self::Key>) -> Result<Form<Self::Key>>;

    /// `[θ, φ] = θφ - φθ`.
    fn commutator(
        &self,
        theta: &Derivation<Self::DerivKey>,
        phi: &Derivation<Self::DerivKey>,
    ) -> Result<Derivation<Self::DerivKey>>;

    /// Check that `θ` annihilates every defining relation.
    fn check_consistency(&self, theta: &Derivation<Self::DerivKey>) -> Result<ConsistencyReport>;

    fn render(&self, x: &Form<Self::Key>) -> String;

    fn render_derivation(&self, theta: &Derivation<Self::DerivKey>) -> String;

    fn scalar(&self, n: i64) -> CycScalar {
        CycScalar::from_int(self.p(), n)
    }

    fn constant(&self, c: &CycScalar) -> Form<Self::Key> {
        self.one().scale(c)
    }

    /// Degree of a nonzero homogeneous form.
    fn degree_of(&self, x: &Form<Self::Key>) -> Option<usize> {
        let mut degs = x.keys().map(|k| self.degree(k));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// The component of degree `k`.
    fn component(&self, x: &Form<Self::Key>, k: usize) -> Form<Self::Key> {
        x.filter(|key| self.degree(key) == k)
    }

    fn is_closed(&self, x: &Form<Self::Key>) -> Result<bool> {
        Ok(self.d(x)?.is_zero())
    }

    /// `θ(a)` for an algebra element.
    fn apply(&self, theta: &Derivation<Self::DerivKey>, a: &Form<Self::Key>) -> Result<Form<Self::Key>> {
        if let Some(k) = a.keys().map(|k| self.degree(k)).find(|&k| k != 0) {
            return Err(Error::NotDegreeZero(k));
        }
        self.lie(theta, a)
    }

    /// `θ⌟x`; rejects forms with a degree-0 component.
    fn iprod(&self, theta: &Derivation<Self::DerivKey>, x: &Form<Self::Key>) -> Result<Form<Self::Key>> {
        if x.keys().any(|k| self.degree(k) == 0) {
            return Err(Error::DegreeZero);
        }
        self.iprod_raw(theta, x)
    }

    fn commutator_elements(&self, a: &Form<Self::Key>, b: &Form<Self::Key>) -> Result<Form<Self::Key>> {
        Ok(self.mul(a, b)?.minus(&self.mul(b, a)?))
    }
}
