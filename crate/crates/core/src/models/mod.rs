//! Built-in example models.
//!
//! A model bundles a calculus, a closed 2-form, and the finite ansatz of
//! derivations on which Hamiltonian vector fields are sought.

pub mod cuntz;
pub mod matrix;
pub mod poly;
pub mod torus;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{check_local_confluence, ConfluenceReport, Presentation, RuleScope};
use crate::calculus::{Calculus, Derivation, Form};
use crate::cartan::DerivationSpace;
use crate::error::{Error, Result};
use crate::forms::PresentedCalculus;
use crate::polymat::PolyMatrixCalculus;
use crate::scalar::CycScalar;
use crate::symplectic::Symplectic;
use crate::universal::{MatrixAlgebra, PresentedAlgebra, UniversalCalculus};

/// Which built-in example, with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// Rational noncommutative torus, `q` of order `p`, relations in `q^root`.
    Torus { p: u32, root: u32 },
    /// Universal calculus on `M_n`.
    Matrix { n: usize },
    /// Algebraic Cuntz algebra on `n` isometries.
    Cuntz { n: usize },
    /// `Q[x,y] ⊗ M_2` with ansatz polynomials of degree at most `degree`.
    PolyMatrix { degree: u32 },
    /// A presentation read from a file.
    Custom { name: String },
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Torus { p, root: 1 } => write!(f, "torus:p={p}"),
            ModelKind::Torus { p, root } => write!(f, "torus:p={p},root={root}"),
            ModelKind::Matrix { n } => write!(f, "matrix:n={n}"),
            ModelKind::Cuntz { n } => write!(f, "cuntz:n={n}"),
            ModelKind::PolyMatrix { degree } => write!(f, "polymat:D={degree}"),
            ModelKind::Custom { name } => write!(f, "presentation:{name}"),
        }
    }
}

fn parse_params(s: &str) -> Result<Vec<(String, u32)>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::OutOfRange(format!("expected key=value, found `{part}`")))?;
        let v = v
            .trim()
            .parse::<u32>()
            .map_err(|_| Error::OutOfRange(format!("`{part}`: value must be a non-negative integer")))?;
        out.push((k.trim().to_string(), v));
    }
    Ok(out)
}

impl FromStr for ModelKind {
    type Err = Error;

    /// `torus:p=2[,root=e]`, `matrix:n=3`, `cuntz:n=2`, `polymat:D=3`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let params = parse_params(rest)?;
        let get = |key: &str, default: u32| -> Result<u32> {
            for (k, _) in &params {
                if !allowed(name, k) {
                    return Err(Error::OutOfRange(format!("unknown parameter `{k}` for model `{name}`")));
                }
            }
            Ok(params.iter().rev().find(|(k, _)| k == key).map_or(default, |(_, v)| *v))
        };
        fn allowed(name: &str, k: &str) -> bool {
            matches!(
                (name, k),
                ("torus", "p") | ("torus", "root") | ("matrix", "n") | ("cuntz", "n") | ("polymat", "D")
            )
        }
        match name {
            "torus" => Ok(ModelKind::Torus {
                p: get("p", 2)?,
                root: get("root", 1)?,
            }),
            "matrix" => Ok(ModelKind::Matrix { n: get("n", 2)? as usize }),
            "cuntz" => Ok(ModelKind::Cuntz { n: get("n", 2)? as usize }),
            "polymat" => Ok(ModelKind::PolyMatrix { degree: get("D", 3)? }),
            other => Err(Error::OutOfRange(format!(
                "unknown model `{other}` (expected torus, matrix, cuntz or polymat)"
            ))),
        }
    }
}

/// Names, atoms and derivation constructors a calculus exposes to the
/// expression language, plus samplers for randomized checks.
pub trait Namespace: Calculus {
    /// Algebra generators in declaration order.
    fn generator_names(&self) -> Vec<String>;

    /// `name^exp` as a 0-form.
    fn atom(&self, name: &str, exp: i64) -> Result<Form<Self::Key>>;

    /// `d(name)`.
    fn differential(&self, name: &str) -> Result<Form<Self::Key>> {
        self.d(&self.atom(name, 1)?)
    }

    /// Derivation from the images `g -> θ(g)` of generators; unlisted
    /// generators map to zero.
    fn derivation_from_images(
        &self,
        images: &[(String, Form<Self::Key>)],
    ) -> Result<Derivation<Self::DerivKey>>;

    /// Named derivation families, e.g. `ad[S]`.
    fn special_derivation(
        &self,
        head: &str,
        args: &[Form<Self::Key>],
    ) -> Result<Derivation<Self::DerivKey>>;

    /// Heads accepted by [`Namespace::special_derivation`].
    fn special_heads(&self) -> &'static [&'static str];

    /// Degree-0 building blocks for random forms.
    fn sample_atoms(&self) -> Vec<Form<Self::Key>>;

    /// `a0 ⊗ a1 ⊗ …` for calculi whose forms are tensors. The result need
    /// not be a form on its own; see [`Namespace::check_form`].
    fn tensor(&self, _legs: &[Form<Self::Key>]) -> Result<Form<Self::Key>> {
        Err(Error::Unsupported("tensor notation is not available in this model".into()))
    }

    /// Reject values that are not forms of the calculus.
    fn check_form(&self, _x: &Form<Self::Key>) -> Result<()> {
        Ok(())
    }

    fn sample_scalar(&self, rng: &mut ChaCha8Rng) -> CycScalar {
        let n = *[-2i64, -1, 1, 2, 3].choose(rng).expect("nonempty");
        let c = CycScalar::from_int(self.p(), n);
        if self.p() > 1 && rng.gen_bool(0.5) {
            c * CycScalar::q_power(self.p(), rng.gen_range(0..self.p() as i64))
        } else {
            c
        }
    }

    /// A random consistent derivation; defaults to a sparse combination of
    /// the ansatz.
    fn sample_derivation(
        &self,
        ansatz: &DerivationSpace<Self::DerivKey>,
        rng: &mut ChaCha8Rng,
    ) -> Result<Derivation<Self::DerivKey>> {
        let mut out = Derivation::zero();
        if ansatz.is_empty() {
            return Ok(out);
        }
        for _ in 0..rng.gen_range(1..=3) {
            let i = rng.gen_range(0..ansatz.len());
            out = out.plus(&ansatz.basis()[i].scale(&self.sample_scalar(rng)));
        }
        Ok(out)
    }
}

/// A random product of up to `len` atoms (possibly the unit).
pub fn sample_element<C: Namespace>(c: &C, rng: &mut ChaCha8Rng, len: usize) -> Result<Form<C::Key>> {
    let atoms = c.sample_atoms();
    let mut out = c.one();
    for _ in 0..rng.gen_range(0..=len) {
        out = c.mul(&out, atoms.choose(rng).expect("atoms"))?;
    }
    Ok(out)
}

/// A random form with components of degree at most `max_degree`, built as
/// sums of `a0 da1 … dak`.
pub fn sample_form<C: Namespace>(c: &C, rng: &mut ChaCha8Rng, max_degree: usize) -> Result<Form<C::Key>> {
    let mut out = Form::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let k = rng.gen_range(0..=max_degree);
        let mut term = sample_element(c, rng, 2)?;
        for _ in 0..k {
            let a = sample_element(c, rng, 2)?;
            term = c.mul(&term, &c.d(&a)?)?;
        }
        out.add_scaled(&term, &c.sample_scalar(rng));
    }
    Ok(out)
}

/// A calculus with its symplectic data.
#[derive(Clone, Debug)]
pub struct Model<C: Calculus> {
    kind: ModelKind,
    calc: C,
    symplectic: Option<Symplectic<C>>,
}

impl<C: Calculus> Model<C> {
    pub fn new(kind: ModelKind, calc: C, symplectic: Option<Symplectic<C>>) -> Self {
        Model { kind, calc, symplectic }
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn calc(&self) -> &C {
        &self.calc
    }

    /// The symplectic structure; custom presentations may lack one.
    pub fn symplectic(&self) -> Result<&Symplectic<C>> {
        self.symplectic
            .as_ref()
            .ok_or_else(|| Error::Unsupported("this model declares no symplectic form".into()))
    }
}

/// Any of the built-in models.
#[derive(Clone, Debug)]
pub enum AnyModel {
    Torus(Model<PresentedCalculus>),
    Matrix(Model<UniversalCalculus<MatrixAlgebra>>),
    Cuntz(Model<UniversalCalculus<PresentedAlgebra>>),
    PolyMatrix(Model<PolyMatrixCalculus>),
    Custom(Model<PresentedCalculus>),
}

/// Run `$body` with `$m` bound to the concrete [`Model`] inside an [`AnyModel`].
#[macro_export]
macro_rules! with_model {
    ($any:expr, $m:ident => $body:expr) => {
        match $any {
            $crate::models::AnyModel::Torus($m) => $body,
            $crate::models::AnyModel::Matrix($m) => $body,
            $crate::models::AnyModel::Cuntz($m) => $body,
            $crate::models::AnyModel::PolyMatrix($m) => $body,
            $crate::models::AnyModel::Custom($m) => $body,
        }
    };
}

impl AnyModel {
    /// Build a model; `ansatz` overrides the default ansatz (`B=<n>` for the
    /// torus, `D=<n>` for polymat, `traceless` or `full` for Cuntz, `ad`
    /// for matrices).
    pub fn build(kind: &ModelKind, ansatz: Option<&str>) -> Result<Self> {
        match *kind {
            ModelKind::Torus { p, root } => {
                let bound = match ansatz {
                    None => torus::DEFAULT_BOUND,
                    Some(a) => parse_bound(a, "B")? as i64,
                };
                torus::build(p, root, bound).map(AnyModel::Torus)
            }
            ModelKind::Matrix { n } => {
                if let Some(a) = ansatz.filter(|a| *a != "ad") {
                    return Err(Error::OutOfRange(format!("matrix model has only the `ad` ansatz, not `{a}`")));
                }
                matrix::build(n).map(AnyModel::Matrix)
            }
            ModelKind::Cuntz { n } => {
                let full = match ansatz {
                    None | Some("traceless") => false,
                    Some("full") => true,
                    Some(a) => {
                        return Err(Error::OutOfRange(format!(
                            "cuntz ansatz must be `traceless` or `full`, not `{a}`"
                        )))
                    }
                };
                cuntz::build(n, full).map(AnyModel::Cuntz)
            }
            ModelKind::PolyMatrix { degree } => {
                let degree = match ansatz {
                    None => degree,
                    Some(a) => parse_bound(a, "D")?,
                };
                poly::build(degree).map(AnyModel::PolyMatrix)
            }
            ModelKind::Custom { .. } => Err(Error::Unsupported(
                "custom models are built from a presentation file".into(),
            )),
        }
    }

    pub fn parse_and_build(desc: &str, ansatz: Option<&str>) -> Result<Self> {
        Self::build(&desc.parse()?, ansatz)
    }

    pub fn kind(&self) -> &ModelKind {
        with_model!(self, m => m.kind())
    }

    /// Local-confluence reports of every presentation the model rewrites with.
    pub fn confluence(&self) -> Result<Vec<(String, ConfluenceReport)>> {
        match self {
            AnyModel::Torus(m) | AnyModel::Custom(m) => Ok(vec![(
                "calculus".into(),
                check_local_confluence(m.calc().presentation(), RuleScope::All)?,
            )]),
            AnyModel::Cuntz(m) => Ok(vec![(
                "algebra".into(),
                m.calc().algebra().confluence(RuleScope::Algebra)?,
            )]),
            AnyModel::Matrix(_) | AnyModel::PolyMatrix(_) => Ok(Vec::new()),
        }
    }

    /// The Cuntz presentation including the form rules, whose confluence is
    /// reported separately since the calculus does not rewrite with them.
    pub fn form_presentation(&self) -> Option<&Presentation> {
        match self {
            AnyModel::Cuntz(m) => Some(m.calc().algebra().full_presentation()),
            _ => None,
        }
    }
}

impl Namespace for PresentedCalculus {
    fn generator_names(&self) -> Vec<String> {
        self.alphabet().generators().iter().map(|g| g.name.clone()).collect()
    }

    fn atom(&self, name: &str, exp: i64) -> Result<Form<Self::Key>> {
        if self.alphabet().generator_index(name).is_none() {
            return Err(Error::UnknownGenerator(name.to_string()));
        }
        self.word(&[(name, exp)])
    }

    fn derivation_from_images(&self, images: &[(String, Form<Self::Key>)]) -> Result<Derivation<Self::DerivKey>> {
        let named: Vec<(&str, Form<Self::Key>)> = images.iter().map(|(n, f)| (n.as_str(), f.clone())).collect();
        self.derivation(&named)
    }

    fn special_derivation(&self, head: &str, args: &[Form<Self::Key>]) -> Result<Derivation<Self::DerivKey>> {
        match (head, args) {
            ("ad", [h]) => {
                let images = self
                    .generator_names()
                    .into_iter()
                    .map(|g| Ok((g.clone(), self.commutator_elements(h, &self.atom(&g, 1)?)?)))
                    .collect::<Result<Vec<_>>>()?;
                self.derivation_from_images(&images)
            }
            _ => Err(unknown_head(head, args.len(), self.special_heads())),
        }
    }

    fn special_heads(&self) -> &'static [&'static str] {
        &["ad"]
    }

    fn sample_atoms(&self) -> Vec<Form<Self::Key>> {
        let mut out = Vec::new();
        for g in self.alphabet().generators() {
            let name = g.name.as_str();
            out.push(self.word(&[(name, 1)]).expect("generator"));
            if g.invertible {
                out.push(self.word(&[(name, -1)]).expect("inverse"));
            }
        }
        out
    }
}

pub(crate) fn unknown_head(head: &str, arity: usize, heads: &[&str]) -> Error {
    Error::Unsupported(format!(
        "no derivation family `{head}` taking {arity} argument(s) in this model (available: {})",
        heads.join(", ")
    ))
}

fn parse_bound(s: &str, key: &str) -> Result<u32> {
    let v = s
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .unwrap_or(s);
    v.trim()
        .parse()
        .map_err(|_| Error::OutOfRange(format!("ansatz must be `{key}=<n>`, found `{s}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors_parse_and_print() {
        for s in ["torus:p=2", "torus:p=3,root=2", "matrix:n=3", "cuntz:n=2", "polymat:D=3"] {
            let k: ModelKind = s.parse().unwrap();
            assert_eq!(k.to_string(), s);
        }
        assert_eq!("torus".parse::<ModelKind>().unwrap(), ModelKind::Torus { p: 2, root: 1 });
        assert!("torus:n=2".parse::<ModelKind>().is_err());
        assert!("sphere:n=2".parse::<ModelKind>().is_err());
        assert!("matrix:n=x".parse::<ModelKind>().is_err());
    }

    #[test]
    fn ansatz_overrides() {
        let m = AnyModel::parse_and_build("torus:p=2", Some("B=1")).unwrap();
        let AnyModel::Torus(t) = &m else { panic!() };
        assert_eq!(t.symplectic().unwrap().ansatz().len(), 18);
        assert_eq!(t.symplectic().unwrap().label(), "B=1");
        assert!(AnyModel::parse_and_build("cuntz:n=2", Some("wide")).is_err());
        assert!(AnyModel::parse_and_build("torus:p=2", Some("B=x")).is_err());
    }
}
