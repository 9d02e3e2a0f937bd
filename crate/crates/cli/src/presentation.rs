//! Plain-text presentation files.
//!
//! ```text
//! # the rational torus at p = 2
//! name      torus2
//! cyclotomic 2
//! generator u invertible
//! generator v invertible
//! order     dv < du < u < v
//! rule      v u -> q^-1 u v
//! rule      du dv -> -q dv du
//! omega     u^-1 du dv v^-1
//! field     u -> u
//! field     v -> v
//! ```
//!
//! `frule` is accepted as a synonym of `rule`, and `derivation NAME: images`
//! as a labelled `field`.
//!
//! `cyclotomic`, `generator`, `order` and `name` may appear anywhere; rules,
//! `omega` and `field` lines are read once the alphabet is known. Rules
//! whose left side contains a differential are relations of the calculus.
//! `omega` and the `field` lines (the ansatz) are optional together.

use std::path::Path;

use ncham_core::algebra::{Alphabet, Generator, Presentation, Rule, Word, WordComb};
use ncham_core::cartan::DerivationSpace;
use ncham_core::forms::PresentedCalculus;
use ncham_core::models::{Model, ModelKind};
use ncham_core::symplectic::Symplectic;

use crate::error::CliError;
use crate::expr::{eval, eval_form, eval_derivation, parse, parse_derivation, Vocabulary};

pub fn load(path: &Path) -> Result<Model<PresentedCalculus>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("custom");
    parse_presentation(&text, &path.display().to_string(), stem)
}

struct Line<'a> {
    no: usize,
    keyword: &'a str,
    rest: &'a str,
}

pub fn parse_presentation(text: &str, file: &str, default_name: &str) -> Result<Model<PresentedCalculus>, CliError> {
    let err = |no: usize, msg: String| CliError::Presentation {
        file: file.to_string(),
        line: no,
        msg,
    };
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                return None;
            }
            let (keyword, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
            Some(Line {
                no: i + 1,
                keyword,
                rest: rest.trim(),
            })
        })
        .collect();

    let mut name = default_name.to_string();
    let mut p = 1u32;
    let mut generators = Vec::new();
    let mut order: Vec<String> = Vec::new();
    for l in &lines {
        match l.keyword {
            "name" => name = l.rest.to_string(),
            "cyclotomic" => {
                p = l
                    .rest
                    .parse()
                    .ok()
                    .filter(|&p| p > 0)
                    .ok_or_else(|| err(l.no, format!("expected a positive integer, found `{}`", l.rest)))?;
            }
            "generator" => {
                let mut parts = l.rest.split_whitespace();
                let g = parts.next().ok_or_else(|| err(l.no, "generator needs a name".into()))?;
                let invertible = match parts.next() {
                    None => false,
                    Some("invertible") => true,
                    Some(other) => return Err(err(l.no, format!("unknown generator flag `{other}`"))),
                };
                if g.starts_with('d') || g == "q" || !g.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '*') {
                    return Err(err(l.no, format!("`{g}` cannot be a generator name")));
                }
                generators.push(Generator::new(g, invertible));
            }
            "order" => order.extend(l.rest.split('<').map(|s| s.trim().to_string())),
            "rule" | "frule" | "omega" | "field" | "derivation" => {}
            other => return Err(err(l.no, format!("unknown keyword `{other}`"))),
        }
    }
    if generators.is_empty() {
        return Err(err(0, "no generators declared".into()));
    }
    let order_refs: Vec<&str> = order.iter().map(String::as_str).collect();
    let alphabet = Alphabet::new(generators, &order_refs).map_err(|e| err(0, e.to_string()))?;

    // rules are read over the free calculus on the alphabet
    let free = PresentedCalculus::new(Presentation::new(alphabet.clone(), p, Vec::new())?);
    let vocab = Vocabulary::of(&free);
    let at = |l: &Line, e: CliError| err(l.no, e.to_string());
    let mut rules = Vec::new();
    for l in lines.iter().filter(|l| matches!(l.keyword, "rule" | "frule")) {
        let (lhs, rhs) = l
            .rest
            .split_once("->")
            .ok_or_else(|| err(l.no, "rule must read `lhs -> rhs`".into()))?;
        let lhs = eval(&free, &parse(lhs, &vocab).map_err(|e| at(l, e))?).map_err(|e| at(l, e))?;
        let rhs = eval(&free, &parse(rhs, &vocab).map_err(|e| at(l, e))?).map_err(|e| at(l, e))?;
        let lhs = single_word(&lhs).ok_or_else(|| err(l.no, "left side must be a single word with coefficient 1".into()))?;
        rules.push(Rule { lhs, rhs });
    }
    let pres = Presentation::new(alphabet, p, rules).map_err(|e| err(0, e.to_string()))?;
    let calc = PresentedCalculus::new(pres);

    let omega_line = lines.iter().find(|l| l.keyword == "omega");
    let field_lines: Vec<&Line> = lines.iter().filter(|l| matches!(l.keyword, "field" | "derivation")).collect();
    let symplectic = match omega_line {
        None if field_lines.is_empty() => None,
        None => return Err(err(field_lines[0].no, "`field` lines need an `omega` line".into())),
        Some(ol) => {
            let w = eval_form(&calc, &parse(ol.rest, &vocab).map_err(|e| at(ol, e))?).map_err(|e| at(ol, e))?;
            let mut basis = Vec::new();
            let mut labels = Vec::new();
            for l in &field_lines {
                let (label, body) = match l.keyword {
                    "derivation" => l
                        .rest
                        .split_once(':')
                        .map(|(n, b)| (n.trim(), b.trim()))
                        .ok_or_else(|| err(l.no, "derivation must read `NAME: images`".into()))?,
                    _ => (l.rest, l.rest),
                };
                let d = parse_derivation(body, &vocab).map_err(|e| at(l, e))?;
                let theta = eval_derivation(&calc, &d, |_| {
                    Err(CliError::Usage("X[…] cannot appear in an ansatz".into()))
                })
                .map_err(|e| at(l, e))?;
                basis.push(theta);
                labels.push(label.to_string());
            }
            let ansatz = DerivationSpace::new(&calc, basis, labels).map_err(|e| err(0, e.to_string()))?;
            Some(Symplectic::new(&calc, w, ansatz, "fields").map_err(|e| at(ol, e.into()))?)
        }
    };
    Ok(Model::new(ModelKind::Custom { name }, calc, symplectic))
}

fn single_word(x: &WordComb) -> Option<Word> {
    let (w, c) = x.iter().next()?;
    (x.len() == 1 && c.is_one()).then(|| w.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ncham_core::calculus::Calculus;
    use ncham_core::models::{torus, Namespace};

    const TORUS: &str = "
        # rational torus
        cyclotomic 2
        generator u invertible
        generator v invertible
        order dv < du < u < v
        rule v u -> q^-1 u v
        rule v u^-1 -> q u^-1 v
        rule v^-1 u -> q u v^-1
        rule v^-1 u^-1 -> q^-1 u^-1 v^-1
    ";

    #[test]
    fn frule_and_named_derivations() {
        let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/torus2.pres")).unwrap();
        let renamed = text
            .lines()
            .map(|l| match l.trim_start().strip_prefix("field") {
                Some(rest) => format!("derivation theta: {}", rest.trim()),
                None if l.contains(" d") && l.trim_start().starts_with("rule") => l.replacen("rule", "frule", 1),
                None => l.to_string(),
            })
            .collect::<Vec<_>>()
            .join("\n");
        assert!(renamed.contains("frule") && renamed.contains("derivation theta:"));
        let a = parse_presentation(&text, "a", "a").unwrap();
        let b = parse_presentation(&renamed, "b", "b").unwrap();
        let (ca, cb) = (a.calc(), b.calc());
        let x = ca.mul(&ca.d(&ca.atom("v", 1).unwrap()).unwrap(), &ca.atom("u", -2).unwrap()).unwrap();
        let y = cb.mul(&cb.d(&cb.atom("v", 1).unwrap()).unwrap(), &cb.atom("u", -2).unwrap()).unwrap();
        assert_eq!(ca.render(&x), cb.render(&y));
        assert_eq!(a.symplectic().unwrap().ansatz().len(), b.symplectic().unwrap().ansatz().len());
    }

    #[test]
    fn algebra_part_matches_builtin() {
        let m = parse_presentation(TORUS, "t", "t").unwrap();
        let c = m.calc();
        let builtin = torus::calculus(2, 1).unwrap();
        let x = c.mul(&c.atom("v", 3).unwrap(), &c.atom("u", -1).unwrap()).unwrap();
        let y = builtin.mul(&builtin.atom("v", 3).unwrap(), &builtin.atom("u", -1).unwrap()).unwrap();
        assert_eq!(c.render(&x), builtin.render(&y));
        assert!(m.symplectic().is_err());
        assert_eq!(m.kind().to_string(), "presentation:t");
    }

    #[test]
    fn errors_name_the_line() {
        let bad = "generator u\nrule u u u ->\n";
        let e = parse_presentation(bad, "f.txt", "f").unwrap_err().to_string();
        assert!(e.starts_with("f.txt:2:"), "{e}");
        let e = parse_presentation("generator u\nrelation u -> 1\n", "f.txt", "f").unwrap_err().to_string();
        assert!(e.contains("unknown keyword `relation`"), "{e}");
        let e = parse_presentation("generator u\nrule u + u -> 0\n", "f.txt", "f").unwrap_err().to_string();
        assert!(e.contains("single word"), "{e}");
        let e = parse_presentation("generator u\nrule u -> u u\n", "f.txt", "f").unwrap_err().to_string();
        assert!(e.contains("not smaller"), "{e}");
    }
}
