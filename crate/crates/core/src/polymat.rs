//! Graded tensor product of polynomial de Rham forms on the plane with the
//! universal calculus of `M_2`.
//!
//! A basis element is `x^a y^b ε ⊗ (E⊗…⊗E)` where `ε` is one of `1`, `dx`,
//! `dy`, `dx dy`. Products follow
//! `(τ⊗η)(τ'⊗η') = (-1)^{|η||τ'|} ττ'⊗ηη'` and the differential is
//! `d(τ⊗η) = dτ⊗η + (-1)^{|τ|} τ⊗dη`.
//!
//! Derivations are triples `(θ_x, θ_y, θ_S)` acting as
//! `θ(f) = θ_x ∂f/∂x + θ_y ∂f/∂y + [θ_S, f]` with scalar polynomials
//! `θ_x`, `θ_y` and a matrix-valued polynomial `θ_S`.

use crate::calculus::{Calculus, CheckKind, ConsistencyReport, Derivation, Form};
use crate::display::render_lincomb;
use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::scalar::CycScalar;
use crate::universal::{d_forms, mul_legs, BasisAlgebra, Matrix, MatrixAlgebra, MatrixUnit, UniversalCalculus};

/// Exponents `(a, b)` of `x^a y^b`.
pub type Mono = (u32, u32);
pub type Poly = LinComb<Mono>;

pub const DX: u8 = 1;
pub const DY: u8 = 2;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyKey {
    pub mono: Mono,
    pub ext: u8,
    pub legs: Vec<MatrixUnit>,
}

/// Coordinates of a mixed derivation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MixedKey {
    X(Mono),
    Y(Mono),
    S(Mono, MatrixUnit),
}

pub fn mono_name(m: Mono) -> String {
    let mut parts = Vec::new();
    for (v, e) in [("x", m.0), ("y", m.1)] {
        match e {
            0 => {}
            1 => parts.push(v.to_string()),
            e => parts.push(format!("{v}^{e}")),
        }
    }
    parts.join(" ")
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (ma, ca) in a.iter() {
        for (mb, cb) in b.iter() {
            out.add_term((ma.0 + mb.0, ma.1 + mb.1), ca * cb);
        }
    }
    out
}

/// `∂/∂x` (`var = 0`) or `∂/∂y` (`var = 1`).
pub fn partial(a: &Poly, var: usize) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in a.iter() {
        let e = if var == 0 { m.0 } else { m.1 };
        if e == 0 {
            continue;
        }
        let nm = if var == 0 { (m.0 - 1, m.1) } else { (m.0, m.1 - 1) };
        out.add_term(nm, c * &CycScalar::from_int(c.p(), e as i64));
    }
    out
}

pub fn poly_degree(a: &Poly) -> Option<u32> {
    a.keys().map(|m| m.0 + m.1).max()
}

/// Product sign and exterior part of `ε ε'`; `None` when it vanishes.
fn wedge(a: u8, b: u8) -> Option<(u8, bool)> {
    if a & b != 0 {
        return None;
    }
    Some((a | b, a & DY != 0 && b & DX != 0))
}

/// `Q[x, y] ⊗ M_2` with the bigraded calculus above.
#[derive(Clone, Debug)]
pub struct PolyMatrixCalculus {
    mat: MatrixAlgebra,
    mcalc: UniversalCalculus<MatrixAlgebra>,
    ad: Vec<(MatrixUnit, Derivation<(MatrixUnit, MatrixUnit)>)>,
}

impl Default for PolyMatrixCalculus {
    fn default() -> Self {
        Self::new()
    }
}

impl PolyMatrixCalculus {
    pub fn new() -> Self {
        let mat = MatrixAlgebra::new(2, 1).expect("2x2 matrices");
        let ad = mat
            .units()
            .map(|e| {
                let em = LinComb::single(e, CycScalar::one(1));
                (e, mat.inner_derivation(&em).expect("inner derivation"))
            })
            .collect();
        PolyMatrixCalculus {
            mcalc: UniversalCalculus::new(mat.clone()),
            mat,
            ad,
        }
    }

    pub fn matrices(&self) -> &MatrixAlgebra {
        &self.mat
    }

    pub fn matrix_calculus(&self) -> &UniversalCalculus<MatrixAlgebra> {
        &self.mcalc
    }

    fn c(&self, n: i64) -> CycScalar {
        CycScalar::from_int(1, n)
    }

    /// `J = E12 - E21`.
    pub fn rotation(&self) -> Matrix {
        self.mat.unit_matrix(0, 1).minus(&self.mat.unit_matrix(1, 0))
    }

    /// Classical form `x^a y^b ε` times the identity matrix.
    pub fn classical(&self, mono: Mono, ext: u8) -> Form<PolyKey> {
        self.mat
            .unit()
            .iter()
            .map(|(e, c)| {
                (
                    PolyKey {
                        mono,
                        ext,
                        legs: vec![*e],
                    },
                    c.clone(),
                )
            })
            .collect()
    }

    pub fn x(&self) -> Form<PolyKey> {
        self.classical((1, 0), 0)
    }

    pub fn y(&self) -> Form<PolyKey> {
        self.classical((0, 1), 0)
    }

    /// A polynomial times the identity matrix.
    pub fn scalar_poly(&self, f: &Poly) -> Form<PolyKey> {
        let mut out = Form::zero();
        for (m, c) in f.iter() {
            out.add_scaled(&self.classical(*m, 0), c);
        }
        out
    }

    /// `1 ⊗ η` for a universal form on `M_2`.
    pub fn lift(&self, eta: &Form<Vec<MatrixUnit>>) -> Form<PolyKey> {
        eta.iter()
            .map(|(legs, c)| {
                (
                    PolyKey {
                        mono: (0, 0),
                        ext: 0,
                        legs: legs.clone(),
                    },
                    c.clone(),
                )
            })
            .collect()
    }

    pub fn matrix(&self, m: &Matrix) -> Form<PolyKey> {
        self.lift(&self.mcalc.element(m))
    }

    /// `f ⊗ M` for a polynomial `f` and a constant matrix `M`.
    pub fn poly_times_matrix(&self, f: &Poly, m: &Matrix) -> Form<PolyKey> {
        let mut out = Form::zero();
        for (mono, c) in f.iter() {
            for (e, ce) in m.iter() {
                out.add_term(
                    PolyKey {
                        mono: *mono,
                        ext: 0,
                        legs: vec![*e],
                    },
                    c * ce,
                );
            }
        }
        out
    }

    /// Mixed derivation from its three components.
    pub fn derivation(&self, theta_x: &Poly, theta_y: &Poly, theta_s: &LinComb<(Mono, MatrixUnit)>) -> Derivation<MixedKey> {
        let mut coords = LinComb::zero();
        for (m, c) in theta_x.iter() {
            coords.add_term(MixedKey::X(*m), c.clone());
        }
        for (m, c) in theta_y.iter() {
            coords.add_term(MixedKey::Y(*m), c.clone());
        }
        for ((m, e), c) in theta_s.iter() {
            coords.add_term(MixedKey::S(*m, *e), c.clone());
        }
        Derivation::from_coords(coords)
    }

    /// Matrix-valued polynomial `Σ c x^a y^b E` from a 0-form.
    pub fn matrix_poly(&self, a: &Form<PolyKey>) -> Result<LinComb<(Mono, MatrixUnit)>> {
        let mut out = LinComb::zero();
        for (k, c) in a.iter() {
            if k.ext != 0 || k.legs.len() != 1 {
                return Err(Error::NotDegreeZero(self.degree(k)));
            }
            out.add_term((k.mono, k.legs[0]), c.clone());
        }
        Ok(out)
    }

    /// The scalar polynomial `f` when `a = f I`.
    pub fn as_scalar_poly(&self, a: &Form<PolyKey>) -> Option<Poly> {
        let mp = self.matrix_poly(a).ok()?;
        let f: Poly = mp
            .iter()
            .filter(|((_, e), _)| *e == MatrixUnit(0, 0))
            .map(|((m, _), c)| (*m, c.clone()))
            .collect();
        (self.scalar_poly(&f) == *a).then_some(f)
    }

    /// Mixed derivation built from 0-forms: `θ_x`, `θ_y` must be scalar
    /// multiples of the identity.
    pub fn derivation_from_forms(
        &self,
        theta_x: &Form<PolyKey>,
        theta_y: &Form<PolyKey>,
        theta_s: &Form<PolyKey>,
    ) -> Result<Derivation<MixedKey>> {
        let not_scalar = || Error::InconsistentDerivation("θx and θy must be scalar polynomials".into());
        let tx = self.as_scalar_poly(theta_x).ok_or_else(not_scalar)?;
        let ty = self.as_scalar_poly(theta_y).ok_or_else(not_scalar)?;
        let ts = self.matrix_poly(theta_s)?;
        Ok(self.derivation(&tx, &ty, &ts))
    }

    pub fn parts(&self, theta: &Derivation<MixedKey>) -> (Poly, Poly, LinComb<(Mono, MatrixUnit)>) {
        let mut tx = Poly::zero();
        let mut ty = Poly::zero();
        let mut ts = LinComb::zero();
        for (k, c) in theta.coords.iter() {
            match k {
                MixedKey::X(m) => tx.add_term(*m, c.clone()),
                MixedKey::Y(m) => ty.add_term(*m, c.clone()),
                MixedKey::S(m, e) => ts.add_term((*m, *e), c.clone()),
            }
        }
        (tx, ty, ts)
    }

    fn matrix_poly_form(&self, ts: &LinComb<(Mono, MatrixUnit)>) -> Form<PolyKey> {
        ts.iter()
            .map(|((m, e), c)| {
                (
                    PolyKey {
                        mono: *m,
                        ext: 0,
                        legs: vec![*e],
                    },
                    c.clone(),
                )
            })
            .collect()
    }

    /// Classical part only: `d` on `x^a y^b ε` (as polynomial forms).
    fn d_classical(&self, mono: Mono, ext: u8) -> Vec<(Mono, u8, CycScalar)> {
        let mut out = Vec::new();
        if mono.0 > 0 {
            if let Some((e, neg)) = wedge(DX, ext) {
                let c = mono.0 as i64;
                out.push(((mono.0 - 1, mono.1), e, self.c(if neg { -c } else { c })));
            }
        }
        if mono.1 > 0 {
            if let Some((e, neg)) = wedge(DY, ext) {
                let c = mono.1 as i64;
                out.push(((mono.0, mono.1 - 1), e, self.c(if neg { -c } else { c })));
            }
        }
        out
    }

    /// `θ(f E)` for a basis 0-form.
    fn apply_basis(&self, parts: &(Poly, Poly, LinComb<(Mono, MatrixUnit)>), mono: Mono, e: MatrixUnit) -> Result<Form<PolyKey>> {
        let (tx, ty, ts) = parts;
        let f = Poly::single(mono, self.c(1));
        let em = LinComb::single(e, self.c(1));
        let mut out = self.poly_times_matrix(&poly_mul(tx, &partial(&f, 0)), &em);
        out.add_assign(&self.poly_times_matrix(&poly_mul(ty, &partial(&f, 1)), &em));
        for ((m, s), c) in ts.iter() {
            let sm = LinComb::single(*s, c.clone());
            let comm = self.mat.commutator(&sm, &em)?;
            out.add_assign(&self.poly_times_matrix(&Poly::single((m.0 + mono.0, m.1 + mono.1), self.c(1)), &comm));
        }
        Ok(out)
    }

    fn apply_element(&self, parts: &(Poly, Poly, LinComb<(Mono, MatrixUnit)>), a: &Form<PolyKey>) -> Result<Form<PolyKey>> {
        let mut out = Form::zero();
        for (k, c) in a.iter() {
            debug_assert!(k.ext == 0 && k.legs.len() == 1);
            out.add_scaled(&self.apply_basis(parts, k.mono, k.legs[0])?, c);
        }
        Ok(out)
    }

    fn render_key(&self, k: &PolyKey) -> String {
        let mut parts = Vec::new();
        let m = mono_name(k.mono);
        if !m.is_empty() {
            parts.push(m);
        }
        if k.ext & DX != 0 {
            parts.push("dx".into());
        }
        if k.ext & DY != 0 {
            parts.push("dy".into());
        }
        parts.push(k.legs.iter().map(MatrixUnit::name).collect::<Vec<_>>().join("⊗"));
        parts.join(" ")
    }

    pub fn render_matrix_poly(&self, ts: &LinComb<(Mono, MatrixUnit)>) -> String {
        self.render(&self.matrix_poly_form(ts))
    }

    pub fn render_poly(&self, f: &Poly) -> String {
        render_lincomb(f, |m| mono_name(*m))
    }
}

impl Calculus for PolyMatrixCalculus {
    type Key = PolyKey;
    type DerivKey = MixedKey;

    fn p(&self) -> u32 {
        1
    }

    fn degree(&self, k: &PolyKey) -> usize {
        k.ext.count_ones() as usize + k.legs.len() - 1
    }

    fn one(&self) -> Form<PolyKey> {
        self.classical((0, 0), 0)
    }

    fn mul(&self, x: &Form<PolyKey>, y: &Form<PolyKey>) -> Result<Form<PolyKey>> {
        let mut out = Form::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                let Some((ext, wneg)) = wedge(a.ext, b.ext) else {
                    continue;
                };
                let koszul = (a.legs.len() - 1) * b.ext.count_ones() as usize % 2 == 1;
                let mut c = ca * cb;
                if wneg != koszul {
                    c = -c;
                }
                let mono = (a.mono.0 + b.mono.0, a.mono.1 + b.mono.1);
                for (legs, cl) in mul_legs(&self.mat, &a.legs, &b.legs)?.iter() {
                    out.add_term(
                        PolyKey {
                            mono,
                            ext,
                            legs: legs.clone(),
                        },
                        &c * cl,
                    );
                }
            }
        }
        Ok(out)
    }

    fn d(&self, x: &Form<PolyKey>) -> Result<Form<PolyKey>> {
        let mut out = Form::zero();
        for (k, c) in x.iter() {
            for (mono, ext, s) in self.d_classical(k.mono, k.ext) {
                out.add_term(
                    PolyKey {
                        mono,
                        ext,
                        legs: k.legs.clone(),
                    },
                    c * &s,
                );
            }
            let sign = if k.ext.count_ones() % 2 == 0 { c.clone() } else { -c };
            let eta = d_forms(&self.mat, &LinComb::single(k.legs.clone(), sign));
            for (legs, cl) in eta.iter() {
                out.add_term(
                    PolyKey {
                        mono: k.mono,
                        ext: k.ext,
                        legs: legs.clone(),
                    },
                    cl.clone(),
                );
            }
        }
        Ok(out)
    }

    fn iprod_raw(&self, theta: &Derivation<MixedKey>, x: &Form<PolyKey>) -> Result<Form<PolyKey>> {
        let (tx, ty, ts) = self.parts(theta);
        let mut out = Form::zero();
        for (k, c) in x.iter() {
            // ι(τ⊗1)(1⊗η)
            let classical: Vec<(Poly, u8)> = match k.ext {
                0 => vec![],
                DX => vec![(tx.clone(), 0)],
                DY => vec![(ty.clone(), 0)],
                _ => vec![(tx.clone(), DY), (ty.neg(), DX)],
            };
            for (f, ext) in classical {
                for (m, cf) in f.iter() {
                    out.add_term(
                        PolyKey {
                            mono: (m.0 + k.mono.0, m.1 + k.mono.1),
                            ext,
                            legs: k.legs.clone(),
                        },
                        c * cf,
                    );
                }
            }
            // (-1)^|τ| (τ⊗1) ι(1⊗η)
            if k.legs.len() < 2 {
                continue;
            }
            let sign = if k.ext.count_ones() % 2 == 0 { c.clone() } else { -c };
            let eta = LinComb::single(k.legs.clone(), sign);
            for ((m, e), cs) in ts.iter() {
                let ad = &self.ad.iter().find(|(u, _)| u == e).expect("matrix unit").1;
                for (legs, cl) in self.mcalc.iprod_raw(ad, &eta)?.iter() {
                    out.add_term(
                        PolyKey {
                            mono: (m.0 + k.mono.0, m.1 + k.mono.1),
                            ext: k.ext,
                            legs: legs.clone(),
                        },
                        cl * cs,
                    );
                }
            }
        }
        Ok(out)
    }

    fn lie(&self, theta: &Derivation<MixedKey>, x: &Form<PolyKey>) -> Result<Form<PolyKey>> {
        let parts = self.parts(theta);
        let (tx, ty, _) = &parts;
        let mut out = Form::zero();
        for (k, c) in x.iter() {
            // L(τ⊗1)(1⊗η) with τ = m ε
            let m = Poly::single(k.mono, self.c(1));
            let lm = poly_mul(tx, &partial(&m, 0)).plus(&poly_mul(ty, &partial(&m, 1)));
            let eta = self.lift(&LinComb::single(k.legs.clone(), self.c(1)));
            let mut ltau = self.mul(&self.scalar_poly(&lm), &self.classical((0, 0), k.ext))?;
            let mf = self.scalar_poly(&m);
            let dtx = self.d(&self.scalar_poly(tx))?;
            let dty = self.d(&self.scalar_poly(ty))?;
            let dx = self.classical((0, 0), DX);
            let dy = self.classical((0, 0), DY);
            match k.ext {
                0 => {}
                DX => ltau.add_assign(&self.mul(&mf, &dtx)?),
                DY => ltau.add_assign(&self.mul(&mf, &dty)?),
                _ => {
                    ltau.add_assign(&self.mul(&self.mul(&mf, &dtx)?, &dy)?);
                    ltau.add_assign(&self.mul(&self.mul(&mf, &dx)?, &dty)?);
                }
            }
            out.add_scaled(&self.mul(&ltau, &eta)?, c);
            // (τ⊗1) L(1⊗η), with η = a0 da1 … dak
            let tau = self.classical(k.mono, k.ext);
            let legs: Vec<Form<PolyKey>> = k
                .legs
                .iter()
                .map(|e| self.matrix(&LinComb::single(*e, self.c(1))))
                .collect();
            let images: Vec<Form<PolyKey>> = legs
                .iter()
                .map(|a| self.apply_element(&parts, a))
                .collect::<Result<_>>()?;
            let dlegs: Vec<Form<PolyKey>> = legs.iter().map(|a| self.d(a)).collect::<Result<_>>()?;
            let mut l_eta = Form::zero();
            for i in 0..legs.len() {
                if images[i].is_zero() {
                    continue;
                }
                let mut acc = if i == 0 { images[0].clone() } else { legs[0].clone() };
                for j in 1..legs.len() {
                    let f = if j == i { self.d(&images[j])? } else { dlegs[j].clone() };
                    acc = self.mul(&acc, &f)?;
                }
                l_eta.add_assign(&acc);
            }
            out.add_scaled(&self.mul(&tau, &l_eta)?, c);
        }
        Ok(out)
    }

    fn commutator(&self, theta: &Derivation<MixedKey>, phi: &Derivation<MixedKey>) -> Result<Derivation<MixedKey>> {
        let (tx, ty, ts) = self.parts(theta);
        let (fx, fy, fs) = self.parts(phi);
        let vf = |ax: &Poly, ay: &Poly, g: &Poly| poly_mul(ax, &partial(g, 0)).plus(&poly_mul(ay, &partial(g, 1)));
        let cx = vf(&tx, &ty, &fx).minus(&vf(&fx, &fy, &tx));
        let cy = vf(&tx, &ty, &fy).minus(&vf(&fx, &fy, &ty));
        let mut cs: LinComb<(Mono, MatrixUnit)> = LinComb::zero();
        let split = |s: &LinComb<(Mono, MatrixUnit)>| -> Vec<(MatrixUnit, Poly)> {
            self.mat
                .units()
                .map(|e| {
                    let p: Poly = s.iter().filter(|((_, u), _)| *u == e).map(|((m, _), c)| (*m, c.clone())).collect();
                    (e, p)
                })
                .collect()
        };
        for (e, g) in split(&fs) {
            for (m, c) in vf(&tx, &ty, &g).iter() {
                cs.add_term((*m, e), c.clone());
            }
        }
        for (e, g) in split(&ts) {
            for (m, c) in vf(&fx, &fy, &g).iter() {
                cs.add_term((*m, e), -c);
            }
        }
        let prod = self.mul(&self.matrix_poly_form(&ts), &self.matrix_poly_form(&fs))?
            .minus(&self.mul(&self.matrix_poly_form(&fs), &self.matrix_poly_form(&ts))?);
        cs.add_assign(&self.matrix_poly(&prod)?);
        Ok(self.derivation(&cx, &cy, &cs))
    }

    fn check_consistency(&self, theta: &Derivation<MixedKey>) -> Result<ConsistencyReport> {
        let parts = self.parts(theta);
        let mut report = ConsistencyReport::default();
        let ts = self.matrix_poly_form(&parts.2);
        let transpose: Form<PolyKey> = ts
            .iter()
            .map(|(k, c)| {
                let e = k.legs[0];
                (
                    PolyKey {
                        mono: k.mono,
                        ext: 0,
                        legs: vec![MatrixUnit(e.1, e.0)],
                    },
                    c.clone(),
                )
            })
            .collect();
        let sym = ts.plus(&transpose);
        report.push("θS antisymmetric".into(), CheckKind::Apply, self.render(&sym), sym.is_zero());
        let mut gens: Vec<(String, Form<PolyKey>)> = vec![("x".into(), self.x()), ("y".into(), self.y())];
        for e in self.mat.units() {
            gens.push((e.name(), self.matrix(&LinComb::single(e, self.c(1)))));
        }
        for (na, a) in &gens {
            for (nb, b) in &gens {
                let ab = self.mul(a, b)?;
                let lhs = self.apply_element(&parts, &ab)?;
                let rhs = self
                    .mul(&self.apply_element(&parts, a)?, b)?
                    .plus(&self.mul(a, &self.apply_element(&parts, b)?)?);
                let r = lhs.minus(&rhs);
                report.push(format!("Leibniz on {na} {nb}"), CheckKind::Apply, self.render(&r), r.is_zero());
            }
        }
        Ok(report)
    }

    fn render(&self, x: &Form<PolyKey>) -> String {
        render_lincomb(x, |k| self.render_key(k))
    }

    fn render_derivation(&self, theta: &Derivation<MixedKey>) -> String {
        let (tx, ty, ts) = self.parts(theta);
        format!(
            "mixed[{}; {}; {}]",
            self.render_poly(&tx),
            self.render_poly(&ty),
            self.render_matrix_poly(&ts)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm() -> PolyMatrixCalculus {
        PolyMatrixCalculus::new()
    }

    fn poly(terms: &[((u32, u32), i64)]) -> Poly {
        terms.iter().map(|(m, c)| (*m, CycScalar::from_int(1, *c))).collect()
    }

    #[test]
    fn classical_one_forms_anticommute() {
        let c = pm();
        let dx = c.classical((0, 0), DX);
        let dy = c.classical((0, 0), DY);
        let a = c.mul(&dx, &dy).unwrap();
        let b = c.mul(&dy, &dx).unwrap();
        assert_eq!(a, b.neg());
        assert!(c.mul(&dx, &dx).unwrap().is_zero());
    }

    #[test]
    fn d_of_x_times_matrix() {
        let c = pm();
        let e12 = c.mat.unit_matrix(0, 1);
        let a = c.mul(&c.x(), &c.matrix(&e12)).unwrap();
        let got = c.d(&a).unwrap();
        let dx = c.classical((0, 0), DX);
        let expect = c
            .mul(&dx, &c.matrix(&e12))
            .unwrap()
            .plus(&c.mul(&c.x(), &c.lift(&c.mcalc.d(&c.mcalc.element(&e12)).unwrap())).unwrap());
        assert_eq!(got, expect);
        assert!(c.d(&got).unwrap().is_zero());
    }

    #[test]
    fn graded_leibniz_for_mixed_products() {
        let c = pm();
        let j = c.rotation();
        let tau = c.mul(&c.classical((2, 1), 0), &c.d(&c.matrix(&j)).unwrap()).unwrap();
        let sigma = c.mul(&c.classical((0, 1), DX), &c.matrix(&c.mat.unit_matrix(1, 1))).unwrap();
        let lhs = c.d(&c.mul(&tau, &sigma).unwrap()).unwrap();
        let rhs = c
            .mul(&c.d(&tau).unwrap(), &sigma)
            .unwrap()
            .minus(&c.mul(&tau, &c.d(&sigma).unwrap()).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn rotation_commutes_with_antisymmetric_matrices() {
        let c = pm();
        let j = c.rotation();
        let s = j.scale(&CycScalar::from_ratio(1, 7, 3));
        assert!(c.mat.commutator(&s, &j).unwrap().is_zero());
    }

    #[test]
    fn derivation_action_on_generators() {
        let c = pm();
        let theta = c.derivation(&poly(&[((0, 2), 1)]), &poly(&[((1, 0), -2)]), &LinComb::zero());
        let got = c.apply(&theta, &c.mul(&c.x(), &c.y()).unwrap()).unwrap();
        // θ(xy) = y^2 · y + x · (-2x)
        let expect = c.scalar_poly(&poly(&[((0, 3), 1), ((2, 0), -2)]));
        assert_eq!(got, expect);
        assert!(c.check_consistency(&theta).unwrap().is_consistent());
    }

    #[test]
    fn non_antisymmetric_rotation_part_is_flagged() {
        let c = pm();
        let ts: LinComb<(Mono, MatrixUnit)> = LinComb::single(((0, 0), MatrixUnit(0, 1)), CycScalar::one(1));
        let theta = c.derivation(&Poly::zero(), &Poly::zero(), &ts);
        assert!(!c.check_consistency(&theta).unwrap().is_consistent());
    }
}
