//! Surface syntax for elements, forms and derivations.
//!
//! ```text
//! sum     := ['+'|'-'] product (('+'|'-') product)*
//! product := unary (['*'|'/'] unary)*          juxtaposition multiplies
//! unary   := '-' unary | tensor
//! tensor  := power ('⊗' power)*                legs of a universal form
//! power   := primary ['^' ['-'] integer]
//! primary := number | name | 'd' name | 'd(' sum ')' | '(' sum ')'
//!
//! deriv   := 'X[' sum ']' | head '[' sum (';' sum)* ']' | name '->' sum (',' name '->' sum)*
//! ```
//!
//! A trailing `*` belongs to a name when the model has a generator of that
//! name (`s1*`); otherwise it is a product sign.

use std::collections::BTreeSet;
use std::str::FromStr;

use ncham_core::calculus::{Derivation, Form};
use ncham_core::models::Namespace;
use ncham_core::{CycScalar, Rational};

use crate::error::CliError;

/// Names an expression may refer to.
#[derive(Clone, Debug, Default)]
pub struct Vocabulary {
    generators: BTreeSet<String>,
    constants: BTreeSet<String>,
}

impl Vocabulary {
    pub fn new(generators: impl IntoIterator<Item = String>, constants: impl IntoIterator<Item = String>) -> Self {
        Vocabulary {
            generators: generators.into_iter().collect(),
            constants: constants.into_iter().collect(),
        }
    }

    /// Generators of the calculus, plus `I` where the model defines it.
    pub fn of<C: Namespace>(c: &C) -> Self {
        let gens = c.generator_names();
        let consts = ["I"]
            .into_iter()
            .filter(|k| !gens.iter().any(|g| g == k) && c.atom(k, 1).is_ok())
            .map(String::from);
        Vocabulary::new(gens.clone(), consts.collect::<Vec<_>>())
    }

    fn is_generator(&self, name: &str) -> bool {
        self.generators.contains(name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Number(Rational),
    Q,
    Gen(String),
    Const(String),
    Diff(String),
    DiffOf(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Tensor(Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum DerivExpr {
    /// `X[a]`, the Hamiltonian vector field of `a`.
    Field(Expr),
    /// A named family such as `ad[S]` or `theta[h]`.
    Family { head: String, args: Vec<Expr> },
    /// Images of generators; unlisted generators map to zero.
    Images(Vec<(String, Expr)>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Semi,
    Comma,
    Arrow,
    Tensor,
}

fn describe(t: Option<&Tok>) -> String {
    match t {
        None => "end of input".into(),
        Some(Tok::Num(n)) => format!("`{n}`"),
        Some(Tok::Ident(n)) => format!("`{n}`"),
        Some(t) => format!(
            "`{}`",
            match t {
                Tok::Plus => "+",
                Tok::Minus => "-",
                Tok::Star => "*",
                Tok::Slash => "/",
                Tok::Caret => "^",
                Tok::LParen => "(",
                Tok::RParen => ")",
                Tok::LBrack => "[",
                Tok::RBrack => "]",
                Tok::Semi => ";",
                Tok::Comma => ",",
                Tok::Tensor => "⊗",
                _ => "->",
            }
        ),
    }
}

fn lex(text: &str, vocab: &Vocabulary) -> Result<Vec<(Tok, usize)>, CliError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        if ch.is_whitespace() {
            i += 1;
            continue;
        }
        if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Num(chars[start..i].iter().map(|c| c.1).collect()), pos));
            continue;
        }
        if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let mut name: String = chars[start..i].iter().map(|c| c.1).collect();
            if i < chars.len() && chars[i].1 == '*' {
                let starred = format!("{name}*");
                let base = starred.strip_prefix('d').unwrap_or("");
                if vocab.is_generator(&starred) || vocab.is_generator(base) {
                    name = starred;
                    i += 1;
                }
            }
            out.push((Tok::Ident(name), pos));
            continue;
        }
        let tok = match ch {
            '+' => Tok::Plus,
            '-' if chars.get(i + 1).map(|c| c.1) == Some('>') => {
                i += 1;
                Tok::Arrow
            }
            '-' | '−' => Tok::Minus,
            '*' | '·' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            ';' => Tok::Semi,
            ',' => Tok::Comma,
            '⊗' => Tok::Tensor,
            _ => return Err(CliError::parse(pos, format!("unexpected character `{ch}`"))),
        };
        out.push((tok, pos));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    vocab: &'a Vocabulary,
}

impl<'a> Parser<'a> {
    fn new(text: &str, vocab: &'a Vocabulary) -> Result<Self, CliError> {
        Ok(Parser {
            toks: lex(text, vocab)?,
            at: 0,
            end: text.len(),
            vocab,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.at + 1).map(|t| &t.0)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.1)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.0.clone());
        self.at += 1;
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<(), CliError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected {}", describe(Some(t)))))
        }
    }

    fn unexpected(&self, what: &str) -> CliError {
        CliError::parse(self.pos(), format!("{what}, found {}", describe(self.peek())))
    }

    fn finish(&self) -> Result<(), CliError> {
        if self.at < self.toks.len() {
            Err(self.unexpected("expected end of input"))
        } else {
            Ok(())
        }
    }

    fn sum(&mut self) -> Result<Expr, CliError> {
        let mut acc = if self.eat(&Tok::Minus) {
            Expr::Neg(Box::new(self.product()?))
        } else {
            self.eat(&Tok::Plus);
            self.product()?
        };
        loop {
            if self.eat(&Tok::Plus) {
                acc = Expr::Add(Box::new(acc), Box::new(self.product()?));
            } else if self.eat(&Tok::Minus) {
                acc = Expr::Sub(Box::new(acc), Box::new(self.product()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::LParen))
    }

    fn product(&mut self) -> Result<Expr, CliError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
            } else if self.eat(&Tok::Slash) {
                acc = Expr::Div(Box::new(acc), Box::new(self.unary()?));
            } else if self.starts_factor() {
                acc = Expr::Mul(Box::new(acc), Box::new(self.tensor()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, CliError> {
        if self.eat(&Tok::Minus) {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.tensor()
        }
    }

    fn tensor(&mut self) -> Result<Expr, CliError> {
        let first = self.power()?;
        if self.peek() != Some(&Tok::Tensor) {
            return Ok(first);
        }
        let mut legs = vec![first];
        while self.eat(&Tok::Tensor) {
            legs.push(self.power()?);
        }
        Ok(Expr::Tensor(legs))
    }

    fn power(&mut self) -> Result<Expr, CliError> {
        let base = self.primary()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let pos = self.pos();
        let paren = self.eat(&Tok::LParen);
        let neg = self.eat(&Tok::Minus);
        let n = match self.bump() {
            Some(Tok::Num(n)) => n
                .parse::<i64>()
                .map_err(|_| CliError::parse(pos, format!("exponent `{n}` is too large")))?,
            _ => {
                self.at -= 1;
                return Err(self.unexpected("expected an integer exponent"));
            }
        };
        if paren {
            self.expect(&Tok::RParen)?;
        }
        let n = if neg { -n } else { n };
        if n < 0 {
            match &base {
                Expr::Diff(_) | Expr::DiffOf(_) => {
                    return Err(CliError::parse(pos, "differentials are not invertible"));
                }
                Expr::Gen(_) | Expr::Q | Expr::Number(_) => {}
                _ => return Err(CliError::parse(pos, "only generators, q and numbers take negative exponents")),
            }
        }
        Ok(Expr::Pow(Box::new(base), n))
    }

    fn primary(&mut self) -> Result<Expr, CliError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Expr::Number(
                Rational::from_str(&n).map_err(|_| CliError::parse(pos, format!("bad number `{n}`")))?,
            )),
            Some(Tok::LParen) => {
                let e = self.sum()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => self.name(name, pos),
            _ => {
                self.at -= 1;
                Err(self.unexpected("expected a number, a name or `(`"))
            }
        }
    }

    fn name(&mut self, name: String, pos: usize) -> Result<Expr, CliError> {
        let v = self.vocab;
        if v.is_generator(&name) {
            return Ok(Expr::Gen(name));
        }
        if v.constants.contains(&name) {
            return Ok(Expr::Const(name));
        }
        if name == "q" {
            return Ok(Expr::Q);
        }
        if name == "d" && self.peek() == Some(&Tok::LParen) {
            self.bump();
            let e = self.sum()?;
            self.expect(&Tok::RParen)?;
            return Ok(Expr::DiffOf(Box::new(e)));
        }
        if let Some(base) = name.strip_prefix('d') {
            if v.is_generator(base) {
                return Ok(Expr::Diff(base.to_string()));
            }
        }
        Err(CliError::parse(pos, format!("unknown generator `{name}`")))
    }

    fn derivation(&mut self) -> Result<DerivExpr, CliError> {
        if self.peek().is_none() {
            return Err(self.unexpected("expected a derivation"));
        }
        if self.peek() == Some(&Tok::Num("0".into())) && self.toks.len() == 1 {
            self.bump();
            return Ok(DerivExpr::Images(Vec::new()));
        }
        let head = match (self.peek(), self.peek2()) {
            (Some(Tok::Ident(h)), Some(Tok::LBrack)) => Some(h.clone()),
            _ => None,
        };
        if let Some(head) = head {
            self.at += 2;
            let mut args = vec![self.sum()?];
            while self.eat(&Tok::Semi) {
                args.push(self.sum()?);
            }
            self.expect(&Tok::RBrack)?;
            return Ok(match (head.as_str(), args.len()) {
                ("X", 1) => DerivExpr::Field(args.pop().expect("one argument")),
                _ => DerivExpr::Family { head, args },
            });
        }
        let mut images = Vec::new();
        loop {
            let pos = self.pos();
            let g = match self.bump() {
                Some(Tok::Ident(g)) if self.vocab.is_generator(&g) => g,
                Some(Tok::Ident(g)) => return Err(CliError::parse(pos, format!("unknown generator `{g}`"))),
                _ => {
                    self.at -= 1;
                    return Err(self.unexpected("expected `g -> image`, `head[args]` or `X[a]`"));
                }
            };
            self.expect(&Tok::Arrow)?;
            images.push((g, self.sum()?));
            if !self.eat(&Tok::Comma) {
                return Ok(DerivExpr::Images(images));
            }
        }
    }
}

pub fn parse(text: &str, vocab: &Vocabulary) -> Result<Expr, CliError> {
    let mut p = Parser::new(text, vocab)?;
    let e = p.sum()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_derivation(text: &str, vocab: &Vocabulary) -> Result<DerivExpr, CliError> {
    let mut p = Parser::new(text, vocab)?;
    let d = p.derivation()?;
    p.finish()?;
    Ok(d)
}

/// The scalar `c` when `x = c·1`.
fn as_constant<C: Namespace>(c: &C, x: &Form<C::Key>) -> Option<CycScalar> {
    let one = c.one();
    let (unit, _) = one.iter().next()?;
    if x.is_zero() {
        return Some(CycScalar::zero(c.p()));
    }
    (x.len() == 1).then(|| x.iter().next()).flatten().and_then(|(k, v)| (k == unit).then(|| v.clone()))
}

pub fn eval<C: Namespace>(c: &C, e: &Expr) -> Result<Form<C::Key>, CliError> {
    let p = c.p();
    Ok(match e {
        Expr::Number(r) => c.constant(&CycScalar::from_rational(p, r.clone())),
        Expr::Q => c.constant(&CycScalar::q(p)),
        Expr::Gen(g) | Expr::Const(g) => c.atom(g, 1)?,
        Expr::Diff(g) => c.differential(g)?,
        Expr::DiffOf(x) => c.d(&eval(c, x)?)?,
        Expr::Tensor(legs) => c.tensor(&legs.iter().map(|l| eval(c, l)).collect::<Result<Vec<_>, _>>()?)?,
        Expr::Neg(x) => eval(c, x)?.scale(&CycScalar::from_int(p, -1)),
        Expr::Add(a, b) => eval(c, a)?.plus(&eval(c, b)?),
        Expr::Sub(a, b) => eval(c, a)?.minus(&eval(c, b)?),
        Expr::Mul(a, b) => c.mul(&eval(c, a)?, &eval(c, b)?)?,
        Expr::Div(a, b) => {
            let den = eval(c, b)?;
            let s = as_constant(c, &den).ok_or_else(|| CliError::Usage("can only divide by a scalar".into()))?;
            let inv = s.inverse().map_err(ncham_core::Error::from)?;
            eval(c, a)?.scale(&inv)
        }
        Expr::Pow(base, n) => match (&**base, *n) {
            (Expr::Gen(g), n) => c.atom(g, n)?,
            (Expr::Q, n) => c.constant(&CycScalar::q_power(p, n)),
            (Expr::Number(r), n) => {
                let s = CycScalar::from_rational(p, r.clone());
                let s = if n < 0 { s.inverse().map_err(ncham_core::Error::from)? } else { s };
                let mut out = c.one();
                for _ in 0..n.unsigned_abs() {
                    out = out.scale(&s);
                }
                out
            }
            (other, n) => {
                let x = eval(c, other)?;
                let mut out = c.one();
                for _ in 0..n {
                    out = c.mul(&out, &x)?;
                }
                out
            }
        },
    })
}

/// Evaluate a complete expression and check that it is a form.
pub fn eval_form<C: Namespace>(c: &C, e: &Expr) -> Result<Form<C::Key>, CliError> {
    let x = eval(c, e)?;
    c.check_form(&x)?;
    Ok(x)
}

/// Evaluate a derivation; `field` resolves `X[a]`.
pub fn eval_derivation<C: Namespace>(
    c: &C,
    d: &DerivExpr,
    field: impl Fn(&Form<C::Key>) -> Result<Derivation<C::DerivKey>, CliError>,
) -> Result<Derivation<C::DerivKey>, CliError> {
    match d {
        DerivExpr::Field(a) => field(&eval_form(c, a)?),
        DerivExpr::Family { head, args } => {
            let args = args.iter().map(|a| eval_form(c, a)).collect::<Result<Vec<_>, _>>()?;
            Ok(c.special_derivation(head, &args)?)
        }
        DerivExpr::Images(images) => {
            let images = images
                .iter()
                .map(|(g, e)| Ok((g.clone(), eval_form(c, e)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(c.derivation_from_images(&images)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ncham_core::algebra::Presentation;
    use ncham_core::calculus::Calculus;
    use ncham_core::forms::PresentedCalculus;
    use ncham_core::models::{cuntz, torus};

    fn torus_vocab() -> Vocabulary {
        Vocabulary::new(["u".to_string(), "v".to_string()], [])
    }

    #[test]
    fn degree_two_word() {
        // as written, over the free calculus on u, v
        let t = torus::calculus(2, 1).unwrap();
        let free = PresentedCalculus::new(Presentation::new(t.alphabet().clone(), 2, Vec::new()).unwrap());
        let x = eval(&free, &parse("u^-1 du dv v^-1", &Vocabulary::of(&free)).unwrap()).unwrap();
        assert_eq!(free.degree_of(&x), Some(2));
        assert_eq!(x.len(), 1);
        assert!(x.iter().next().unwrap().1.is_one());
        // the torus reorders it into a single q-multiple of a normal word
        let y = eval(&t, &parse("u^-1 du dv v^-1", &Vocabulary::of(&t)).unwrap()).unwrap();
        assert_eq!((t.degree_of(&y), y.len()), (Some(2), 1));
    }

    #[test]
    fn rational_q_coefficient() {
        let c = torus::calculus(3, 1).unwrap();
        let x = eval(&c, &parse("2/3 q^2 u^2 v^-1", &Vocabulary::of(&c)).unwrap()).unwrap();
        let want = torus::monomial(&c, 2, -1).scale(&(CycScalar::from_ratio(3, 2, 3) * CycScalar::q_power(3, 2)));
        assert_eq!(x, want);
        // q^2 = -1 - q in the power basis
        assert_eq!(c.render(&x), "(-2/3 - 2/3 q) u^2 v^-1");
    }

    #[test]
    fn inverse_differential_is_rejected() {
        let err = parse("du^-1", &torus_vocab()).unwrap_err();
        assert!(err.to_string().contains("differentials are not invertible"), "{err}");
        let err = parse("u dv^(-2)", &torus_vocab()).unwrap_err();
        assert!(err.to_string().contains("position 5"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let v = torus_vocab();
        assert!(parse("u +", &v).unwrap_err().to_string().contains("position 3"));
        assert!(parse("u w", &v).unwrap_err().to_string().contains("unknown generator `w` at position 2"));
        assert!(parse("(u", &v).is_err());
        assert!(parse("u ^ x", &v).is_err());
        assert!(parse("u $ v", &v).is_err());
    }

    #[test]
    fn stars_attach_to_generators() {
        let c = cuntz::calculus(2).unwrap();
        let v = Vocabulary::of(&c);
        let a = eval(&c, &parse("s1 s2*", &v).unwrap()).unwrap();
        let b = eval(&c, &parse("s1*s2*", &v).unwrap()).unwrap();
        assert_eq!(c.render(&a), "s1 s2*");
        assert!(b.len() == 1);
        let e = eval(&c, &parse("s1 * s1*", &v).unwrap()).unwrap();
        assert_eq!(c.render(&e), "s1 s1*");
    }

    #[test]
    fn left_associative_products_and_sums() {
        let v = torus_vocab();
        let e = parse("u - v - u", &v).unwrap();
        assert!(matches!(e, Expr::Sub(ref l, _) if matches!(**l, Expr::Sub(..))));
        let e = parse("u v u", &v).unwrap();
        assert!(matches!(e, Expr::Mul(ref l, _) if matches!(**l, Expr::Mul(..))));
    }

    #[test]
    fn derivation_forms() {
        let v = torus_vocab();
        assert!(matches!(parse_derivation("X[u^2 v^2]", &v).unwrap(), DerivExpr::Field(_)));
        assert!(matches!(
            parse_derivation("ad[u; v]", &v).unwrap(),
            DerivExpr::Family { ref head, ref args } if head == "ad" && args.len() == 2
        ));
        let DerivExpr::Images(im) = parse_derivation("u -> u^3 v^2, v -> 0", &v).unwrap() else {
            panic!()
        };
        assert_eq!(im.len(), 2);
        assert!(parse_derivation("w -> u", &v).is_err());
        assert!(parse_derivation("u ->", &v).is_err());
    }
}
