//! The matrix algebra `M_n` with its universal calculus and
//! `ω = ½ Σ dE_ij dE_ij`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::calculus::{Calculus, Derivation, Form};
use crate::cartan::DerivationSpace;
use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::scalar::CycScalar;
use crate::symplectic::Symplectic;
use crate::universal::{BasisAlgebra, Legs, Matrix, MatrixAlgebra, MatrixDerivKey, MatrixUnit, UniversalCalculus};

use super::{unknown_head, Model, ModelKind, Namespace};

pub type MatrixCalculus = UniversalCalculus<MatrixAlgebra>;

pub fn calculus(n: usize) -> Result<MatrixCalculus> {
    if !(2..=4).contains(&n) {
        return Err(Error::OutOfRange(format!("matrix size must be between 2 and 4, got {n}")));
    }
    Ok(UniversalCalculus::new(MatrixAlgebra::new(n, 1)?))
}

/// `½ Σ_ij dE_ij dE_ij`.
pub fn omega(c: &MatrixCalculus) -> Result<Form<Legs<MatrixUnit>>> {
    let half = CycScalar::from_ratio(1, 1, 2);
    let mut out = Form::zero();
    for e in c.algebra().units() {
        let de = c.d(&c.element(&LinComb::single(e, CycScalar::one(1))))?;
        out.add_scaled(&c.mul(&de, &de)?, &half);
    }
    Ok(out)
}

/// `{ad_S}` over the antisymmetric basis `E_ij - E_ji`, `i < j`.
pub fn ansatz(c: &MatrixCalculus) -> Result<DerivationSpace<MatrixDerivKey>> {
    let alg = c.algebra();
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for s in alg.antisymmetric_basis() {
        labels.push(format!("ad[{}]", alg.render_matrix(&s)));
        basis.push(alg.inner_derivation(&s)?);
    }
    DerivationSpace::new(c, basis, labels)
}

pub fn build(n: usize) -> Result<Model<MatrixCalculus>> {
    let c = calculus(n)?;
    let v = ansatz(&c)?;
    let w = omega(&c)?;
    let sym = Symplectic::new(&c, w, v, "ad")?;
    Ok(Model::new(ModelKind::Matrix { n }, c, Some(sym)))
}

/// The antisymmetric basis matrices.
pub fn hamiltonian_samples(m: &Model<MatrixCalculus>) -> Vec<Form<Legs<MatrixUnit>>> {
    let c = m.calc();
    c.algebra().antisymmetric_basis().iter().map(|s| c.element(s)).collect()
}

/// Parse `E12`-style names (1-based) within an `n × n` algebra.
pub(crate) fn parse_unit(name: &str, n: usize) -> Option<MatrixUnit> {
    let digits = name.strip_prefix('E')?.as_bytes();
    if digits.len() != 2 {
        return None;
    }
    let i = (digits[0] as char).to_digit(10)? as usize;
    let j = (digits[1] as char).to_digit(10)? as usize;
    ((1..=n).contains(&i) && (1..=n).contains(&j)).then(|| MatrixUnit(i as u8 - 1, j as u8 - 1))
}

/// The matrix of a 0-form of the universal calculus.
pub fn as_matrix(c: &MatrixCalculus, x: &Form<Legs<MatrixUnit>>) -> Result<Matrix> {
    c.as_element(x)
}

impl Namespace for MatrixCalculus {
    fn generator_names(&self) -> Vec<String> {
        self.algebra().units().map(|e| e.name()).collect()
    }

    fn atom(&self, name: &str, exp: i64) -> Result<Form<Self::Key>> {
        let alg = self.algebra();
        let m = if name == "I" {
            alg.unit()
        } else {
            let e = parse_unit(name, alg.n()).ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            LinComb::single(e, CycScalar::one(1))
        };
        if exp < 0 {
            return Err(Error::NotInvertible(name.to_string()));
        }
        let base = self.element(&m);
        let mut out = self.one();
        for _ in 0..exp {
            out = self.mul(&out, &base)?;
        }
        Ok(out)
    }

    fn derivation_from_images(&self, images: &[(String, Form<Self::Key>)]) -> Result<Derivation<Self::DerivKey>> {
        let alg = self.algebra();
        let mut out = Vec::new();
        for (name, img) in images {
            let e = parse_unit(name, alg.n()).ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            out.push((e, self.as_element(img)?));
        }
        Ok(alg.derivation(out))
    }

    fn special_derivation(&self, head: &str, args: &[Form<Self::Key>]) -> Result<Derivation<Self::DerivKey>> {
        match (head, args) {
            ("ad", [s]) => self.algebra().inner_derivation(&self.as_element(s)?),
            _ => Err(unknown_head(head, args.len(), self.special_heads())),
        }
    }

    fn special_heads(&self) -> &'static [&'static str] {
        &["ad"]
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
        self.algebra()
            .units()
            .map(|e| self.element(&LinComb::single(e, CycScalar::one(1))))
            .collect()
    }

    /// `ad_S` for a random (not necessarily antisymmetric) matrix `S`.
    fn sample_derivation(
        &self,
        _ansatz: &DerivationSpace<Self::DerivKey>,
        rng: &mut ChaCha8Rng,
    ) -> Result<Derivation<Self::DerivKey>> {
        let mut s = Matrix::zero();
        for e in self.algebra().units() {
            if rng.gen_bool(0.4) {
                s.add_term(e, self.sample_scalar(rng));
            }
        }
        self.algebra().inner_derivation(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_and_nonsingularity() {
        for (n, dim) in [(2, 1), (3, 3), (4, 6)] {
            let m = build(n).unwrap();
            let s = m.symplectic().unwrap();
            assert_eq!(s.ansatz().len(), dim);
            assert!(s.is_nonsingular());
        }
        assert!(build(5).is_err());
        assert!(build(1).is_err());
    }

    #[test]
    fn identity_alias_and_units() {
        let c = calculus(3).unwrap();
        let i = c.atom("I", 1).unwrap();
        assert_eq!(i, c.one());
        assert_eq!(c.render(&c.atom("E23", 1).unwrap()), "E23");
        assert!(c.atom("E41", 1).is_err());
        assert!(c.atom("E12", -1).is_err());
        let e12 = c.atom("E12", 1).unwrap();
        assert!(c.atom("E12", 2).unwrap().is_zero());
        assert_eq!(c.mul(&e12, &c.atom("E21", 1).unwrap()).unwrap(), c.atom("E11", 1).unwrap());
    }
}
