//! The rational noncommutative torus: invertible `u`, `v` with `uv = q vu`.

use crate::algebra::{Alphabet, Generator, Presentation, Rule, WordComb};
use crate::calculus::{Calculus, Derivation};
use crate::cartan::classify_torus_derivations;
use crate::error::{Error, Result};
use crate::forms::{GenImageKey, PresentedCalculus};
use crate::scalar::{gcd, CycScalar};
use crate::symplectic::Symplectic;

use super::{Model, ModelKind};

/// Default ansatz bound `B`.
pub const DEFAULT_BOUND: i64 = 3;

/// Letter order of the torus calculus: `dv < du < u < u^-1 < v < v^-1`.
pub const ORDER: [&str; 4] = ["dv", "du", "u", "v"];

/// Torus calculus over `Q(q)`, `q` of order `p`; the relations use `q^root`.
///
/// Installs the four orientations of `uv = q vu` (one per choice of
/// inverses) and the eleven rules of the first-order calculus:
/// `du dv = -q dv du`, `(du)^2 = (dv)^2 = 0`, `u dv = q dv u`,
/// `v du = q^-1 du v`, `[u, du] = [v, dv] = 0` and their inverse variants.
pub fn calculus(p: u32, root: u32) -> Result<PresentedCalculus> {
    if p == 0 {
        return Err(Error::OutOfRange("torus order p must be at least 1".into()));
    }
    if gcd(root % p.max(1), p) != 1 && p > 1 {
        return Err(Error::OutOfRange(format!(
            "root exponent {root} is not coprime to p={p}"
        )));
    }
    let alpha = Alphabet::new(
        vec![Generator::new("u", true), Generator::new("v", true)],
        &ORDER,
    )?;
    let e = root as i64;
    let q = |k: i64| CycScalar::q_power(p, k * e);
    let one = CycScalar::one(p);
    let zero = || WordComb::zero();
    let mut rules = Vec::new();
    let mut rule = |lhs: &[(&str, i64)], rhs: Option<(CycScalar, &[(&str, i64)])>| -> Result<()> {
        let lhs = alpha.word(lhs)?;
        let rhs = match rhs {
            None => zero(),
            Some((c, r)) => WordComb::single(alpha.word(r)?, c),
        };
        rules.push(Rule { lhs, rhs });
        Ok(())
    };
    rule(&[("v", 1), ("u", 1)], Some((q(-1), &[("u", 1), ("v", 1)])))?;
    rule(&[("v", 1), ("u", -1)], Some((q(1), &[("u", -1), ("v", 1)])))?;
    rule(&[("v", -1), ("u", 1)], Some((q(1), &[("u", 1), ("v", -1)])))?;
    rule(&[("v", -1), ("u", -1)], Some((q(-1), &[("u", -1), ("v", -1)])))?;
    rule(&[("du", 1), ("dv", 1)], Some((-q(1), &[("dv", 1), ("du", 1)])))?;
    rule(&[("du", 2)], None)?;
    rule(&[("dv", 2)], None)?;
    rule(&[("u", 1), ("dv", 1)], Some((q(1), &[("dv", 1), ("u", 1)])))?;
    rule(&[("u", -1), ("dv", 1)], Some((q(-1), &[("dv", 1), ("u", -1)])))?;
    rule(&[("v", 1), ("du", 1)], Some((q(-1), &[("du", 1), ("v", 1)])))?;
    rule(&[("v", -1), ("du", 1)], Some((q(1), &[("du", 1), ("v", -1)])))?;
    rule(&[("u", 1), ("du", 1)], Some((one.clone(), &[("du", 1), ("u", 1)])))?;
    rule(&[("u", -1), ("du", 1)], Some((one.clone(), &[("du", 1), ("u", -1)])))?;
    rule(&[("v", 1), ("dv", 1)], Some((one.clone(), &[("dv", 1), ("v", 1)])))?;
    rule(&[("v", -1), ("dv", 1)], Some((one, &[("dv", 1), ("v", -1)])))?;
    Ok(PresentedCalculus::new(Presentation::new(alpha, p, rules)?))
}

/// `u^a v^b` as an element.
pub fn monomial(c: &PresentedCalculus, a: i64, b: i64) -> WordComb {
    c.word(&[("u", a), ("v", b)]).expect("torus generators")
}

/// The symplectic form `u^-1 du dv v^-1`, normalised.
pub fn omega(c: &PresentedCalculus) -> Result<WordComb> {
    c.normalize(&c.word(&[("u", -1), ("du", 1), ("dv", 1), ("v", -1)])?)
}

/// Derivation with `θ(u) = u^{1+sp} v^{tp}`, `θ(v) = 0`.
pub fn u_field(c: &PresentedCalculus, s: i64, t: i64) -> Derivation<GenImageKey> {
    let p = c.p() as i64;
    c.derivation(&[("u", monomial(c, 1 + s * p, t * p))])
        .expect("torus derivation")
}

/// Derivation with `θ(u) = 0`, `θ(v) = u^{sp} v^{1+tp}`.
pub fn v_field(c: &PresentedCalculus, s: i64, t: i64) -> Derivation<GenImageKey> {
    let p = c.p() as i64;
    c.derivation(&[("v", monomial(c, s * p, 1 + t * p))])
        .expect("torus derivation")
}

/// Torus model with ansatz `|s|, |t| ≤ bound` and `ω = u^-1 du dv v^-1`.
pub fn build(p: u32, root: u32, bound: i64) -> Result<Model<PresentedCalculus>> {
    let calc = calculus(p, root)?;
    let ansatz = classify_torus_derivations(&calc, bound)?;
    let w = omega(&calc)?;
    let sym = Symplectic::new(&calc, w, ansatz, format!("B={bound}"))?;
    Ok(Model::new(ModelKind::Torus { p, root }, calc, Some(sym)))
}

/// `u^{sp} v^{tp}` for `2|s|, 2|t| ≤ B`: brackets of these stay Hamiltonian.
pub fn hamiltonian_samples(m: &Model<PresentedCalculus>) -> Result<Vec<WordComb>> {
    let c = m.calc();
    let bound = m
        .symplectic()?
        .label()
        .strip_prefix("B=")
        .and_then(|b| b.parse::<i64>().ok())
        .unwrap_or(0);
    let r = bound / 2;
    let p = c.p() as i64;
    let mut out = Vec::new();
    for s in -r..=r {
        for t in -r..=r {
            out.push(monomial(c, s * p, t * p));
        }
    }
    Ok(out)
}
