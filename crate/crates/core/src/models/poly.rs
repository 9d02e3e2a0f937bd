//! Polynomial functions on the plane with values in `M_2`, with
//! `ω = dx dy + ½ Σ dE_ij dE_ij + dx (dE12 - dE21)`.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::calculus::{Calculus, Derivation, Form};
use crate::cartan::DerivationSpace;
use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::polymat::{mono_name, MixedKey, Mono, Poly, PolyKey, PolyMatrixCalculus, DX, DY};
use crate::scalar::CycScalar;
use crate::symplectic::Symplectic;
use crate::universal::{Matrix, MatrixUnit};

use super::matrix::{omega as matrix_omega, parse_unit};
use super::{unknown_head, Model, ModelKind, Namespace};

/// Monomials of total degree at most `d`, by degree then by power of `y`.
pub fn monomials(d: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    for k in 0..=d {
        for b in 0..=k {
            out.push((k - b, b));
        }
    }
    out
}

pub fn omega(c: &PolyMatrixCalculus) -> Result<Form<PolyKey>> {
    let mut w = c.classical((0, 0), DX | DY);
    w.add_assign(&c.lift(&matrix_omega(c.matrix_calculus())?));
    let dj = c.d(&c.matrix(&c.rotation()))?;
    w.add_assign(&c.mul(&c.classical((0, 0), DX), &dj)?);
    Ok(w)
}

/// `m ∂x`, `m ∂y` and `ad_{mJ}` for every monomial `m` of degree at most `d`.
pub fn ansatz(c: &PolyMatrixCalculus, d: u32) -> Result<DerivationSpace<MixedKey>> {
    let one = CycScalar::one(1);
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for m in monomials(d) {
        let mp = Poly::single(m, one.clone());
        let name = match mono_name(m) {
            s if s.is_empty() => "1".to_string(),
            s => s,
        };
        basis.push(c.derivation(&mp, &Poly::zero(), &LinComb::zero()));
        labels.push(format!("x-part {name}"));
        basis.push(c.derivation(&Poly::zero(), &mp, &LinComb::zero()));
        labels.push(format!("y-part {name}"));
        basis.push(c.derivation(&Poly::zero(), &Poly::zero(), &rotation_part(c, &mp)));
        labels.push(format!("matrix part {name} (E12 - E21)"));
    }
    DerivationSpace::new(c, basis, labels)
}

/// `f J` as a matrix-valued polynomial.
pub fn rotation_part(c: &PolyMatrixCalculus, f: &Poly) -> LinComb<(Mono, MatrixUnit)> {
    let mut out = LinComb::zero();
    for (m, cf) in f.iter() {
        for (e, ce) in c.rotation().iter() {
            out.add_term((*m, *e), cf * ce);
        }
    }
    out
}

pub fn build(degree: u32) -> Result<Model<PolyMatrixCalculus>> {
    if degree < 1 {
        return Err(Error::OutOfRange("polymat degree bound must be at least 1".into()));
    }
    let c = PolyMatrixCalculus::new();
    let v = ansatz(&c, degree)?;
    let w = omega(&c)?;
    let sym = Symplectic::new(&c, w, v, format!("D={degree}"))?;
    Ok(Model::new(ModelKind::PolyMatrix { degree }, c, Some(sym)))
}

/// `E12 - E21` and `f I` for non-constant monomials `f` of degree at most 2.
pub fn hamiltonian_samples(m: &Model<PolyMatrixCalculus>) -> Vec<Form<PolyKey>> {
    let c = m.calc();
    let mut out = vec![c.matrix(&c.rotation())];
    for mono in monomials(2).into_iter().skip(1) {
        out.push(c.scalar_poly(&Poly::single(mono, CycScalar::one(1))));
    }
    out
}

impl Namespace for PolyMatrixCalculus {
    fn generator_names(&self) -> Vec<String> {
        let mut out = vec!["x".to_string(), "y".to_string()];
        out.extend(self.matrices().units().map(|e| e.name()));
        out
    }

    fn atom(&self, name: &str, exp: i64) -> Result<Form<Self::Key>> {
        let base = match name {
            "x" => self.x(),
            "y" => self.y(),
            "I" => self.one(),
            _ => {
                let e = parse_unit(name, 2).ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
                self.matrix(&LinComb::single(e, CycScalar::one(1)))
            }
        };
        if exp < 0 {
            return Err(Error::NotInvertible(name.to_string()));
        }
        let mut out = self.one();
        for _ in 0..exp {
            out = self.mul(&out, &base)?;
        }
        Ok(out)
    }

    fn derivation_from_images(&self, _images: &[(String, Form<Self::Key>)]) -> Result<Derivation<Self::DerivKey>> {
        Err(Error::Unsupported(
            "derivations of this model are written mixed[θx; θy; θS] or ad[S]".into(),
        ))
    }

    fn special_derivation(&self, head: &str, args: &[Form<Self::Key>]) -> Result<Derivation<Self::DerivKey>> {
        match (head, args) {
            ("mixed", [tx, ty, ts]) => self.derivation_from_forms(tx, ty, ts),
            ("ad", [s]) => Ok(self.derivation(&Poly::zero(), &Poly::zero(), &self.matrix_poly(s)?)),
            _ => Err(unknown_head(head, args.len(), self.special_heads())),
        }
    }

    fn special_heads(&self) -> &'static [&'static str] {
        &["mixed", "ad"]
    }

    /// Legs must be constant matrices.
    fn tensor(&self, legs: &[Form<Self::Key>]) -> Result<Form<Self::Key>> {
        let mut mats = Vec::new();
        for l in legs {
            let mut m = Matrix::zero();
            for ((mono, e), c) in self.matrix_poly(l)?.iter() {
                if *mono != (0, 0) {
                    return Err(Error::Unsupported("tensor legs must be constant matrices".into()));
                }
                m.add_term(*e, c.clone());
            }
            mats.push(m);
        }
        Ok(self.lift(&self.matrix_calculus().raw_tensor(&mats)))
    }

    /// The matrix part of every `x^a y^b ε` component satisfies the
    /// kernel condition.
    fn check_form(&self, x: &Form<Self::Key>) -> Result<()> {
        let mut parts: BTreeMap<(Mono, u8), Form<Vec<MatrixUnit>>> = BTreeMap::new();
        for (k, c) in x.iter() {
            parts.entry((k.mono, k.ext)).or_default().add_term(k.legs.clone(), c.clone());
        }
        for eta in parts.values() {
            if !self.matrix_calculus().in_kernel(eta)? {
                return Err(Error::KernelViolation);
            }
        }
        Ok(())
    }

    fn sample_atoms(&self) -> Vec<Form<Self::Key>> {
        self.generator_names()
            .iter()
            .map(|g| self.atom(g, 1).expect("generator"))
            .collect()
    }

    /// Random polynomial coefficients of degree at most 2, `θ_S` a
    /// polynomial multiple of `E12 - E21`.
    fn sample_derivation(
        &self,
        _ansatz: &DerivationSpace<Self::DerivKey>,
        rng: &mut ChaCha8Rng,
    ) -> Result<Derivation<Self::DerivKey>> {
        let poly = |rng: &mut ChaCha8Rng| -> Poly {
            let mut f = Poly::zero();
            for m in monomials(2) {
                if rng.gen_bool(0.3) {
                    f.add_term(m, self.sample_scalar(rng));
                }
            }
            f
        };
        let tx = poly(rng);
        let ty = poly(rng);
        let g = poly(rng);
        Ok(self.derivation(&tx, &ty, &rotation_part(self, &g)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ansatz_size_and_nonsingular() {
        let m = build(3).unwrap();
        let s = m.symplectic().unwrap();
        assert_eq!(s.ansatz().len(), 30);
        assert!(s.is_nonsingular());
        assert!(m.calc().is_closed(s.omega()).unwrap());
    }

    #[test]
    fn omega_tilde_matches_closed_formula() {
        // θ⌟ω = θx dy - θy dx + d_M(θS + θx J)
        let c = PolyMatrixCalculus::new();
        let w = omega(&c).unwrap();
        let one = CycScalar::one(1);
        let tx = Poly::single((1, 2), one.clone());
        let ty = Poly::single((0, 1), CycScalar::from_int(1, -3));
        let g = Poly::single((2, 0), one.clone());
        let theta = c.derivation(&tx, &ty, &rotation_part(&c, &g));
        let got = c.iprod(&theta, &w).unwrap();
        let dx = c.classical((0, 0), DX);
        let dy = c.classical((0, 0), DY);
        let j = c.matrix(&c.rotation());
        let dj = c.d(&j).unwrap();
        let mut expect = c.mul(&c.scalar_poly(&tx), &dy).unwrap();
        expect.sub_assign(&c.mul(&c.scalar_poly(&ty), &dx).unwrap());
        expect.add_assign(&c.mul(&c.scalar_poly(&g.plus(&tx)), &dj).unwrap());
        assert_eq!(got, expect);
    }

    #[test]
    fn monomial_count() {
        assert_eq!(monomials(3).len(), 10);
        assert_eq!(monomials(0), vec![(0, 0)]);
    }
}
