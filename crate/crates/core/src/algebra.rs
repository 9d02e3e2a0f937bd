//! Presented noncommutative algebras and their differential extensions.
//!
//! Words are sequences of letters drawn from an [`Alphabet`]: a generator `g`,
//! its formal inverse `g^-1` (only for invertible generators) and the
//! form-generator `dg`. Letters are numbered by their rank in the term order,
//! so the derived ordering on [`Word`] (length first, then lexicographic) is the
//! degree-lexicographic order used to orient every rewrite rule.
//!
//! Words are kept freely reduced: `g g^-1` and `g^-1 g` cancel on
//! concatenation, which plays the role of the implicit inverse rules.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::scalar::CycScalar;

/// Default number of rule applications allowed in one normalisation.
pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub invertible: bool,
}

impl Generator {
    pub fn new(name: impl Into<String>, invertible: bool) -> Self {
        Generator {
            name: name.into(),
            invertible,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum LetterKind {
    Gen,
    Inv,
    Diff,
}

/// A letter, identified by its rank in the term order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub u16);

#[derive(Clone, Debug)]
pub struct Alphabet {
    generators: Vec<Generator>,
    letters: Vec<(usize, LetterKind)>,
    index: HashMap<(usize, LetterKind), Letter>,
}

impl Alphabet {
    /// Build an alphabet. `precedence` lists letters in increasing order by
    /// name (`u`, `du`); the inverse `g^-1` is placed directly after `g`.
    /// Form-generators not mentioned come first, algebra generators not
    /// mentioned come last, both in declaration order.
    pub fn new(generators: Vec<Generator>, precedence: &[&str]) -> Result<Self> {
        let mut by_name = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if g.name.is_empty() || by_name.insert(g.name.clone(), i).is_some() {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
        }
        let mut listed: Vec<(usize, LetterKind)> = Vec::new();
        for name in precedence {
            let entry = if let Some(&i) = by_name.get(*name) {
                (i, LetterKind::Gen)
            } else if let Some(&i) = name.strip_prefix('d').and_then(|b| by_name.get(b)) {
                (i, LetterKind::Diff)
            } else {
                return Err(Error::UnknownGenerator(name.to_string()));
            };
            if listed.contains(&entry) {
                return Err(Error::BadOrder(format!("`{name}` listed twice")));
            }
            listed.push(entry);
        }
        let mut letters = Vec::new();
        for i in 0..generators.len() {
            if !listed.contains(&(i, LetterKind::Diff)) {
                letters.push((i, LetterKind::Diff));
            }
        }
        let push_gen = |letters: &mut Vec<(usize, LetterKind)>, i: usize| {
            letters.push((i, LetterKind::Gen));
            if generators[i].invertible {
                letters.push((i, LetterKind::Inv));
            }
        };
        for &(i, kind) in &listed {
            match kind {
                LetterKind::Gen => push_gen(&mut letters, i),
                _ => letters.push((i, kind)),
            }
        }
        for i in 0..generators.len() {
            if !listed.contains(&(i, LetterKind::Gen)) {
                push_gen(&mut letters, i);
            }
        }
        let index = letters
            .iter()
            .enumerate()
            .map(|(rank, &key)| (key, Letter(rank as u16)))
            .collect();
        Ok(Alphabet {
            generators,
            letters,
            index,
        })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn letter(&self, gen: usize, kind: LetterKind) -> Option<Letter> {
        self.index.get(&(gen, kind)).copied()
    }

    pub fn kind(&self, l: Letter) -> LetterKind {
        self.letters[l.0 as usize].1
    }

    pub fn generator_of(&self, l: Letter) -> usize {
        self.letters[l.0 as usize].0
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.letters.len()).map(|i| Letter(i as u16))
    }

    pub fn letter_name(&self, l: Letter) -> String {
        let (g, kind) = self.letters[l.0 as usize];
        let name = &self.generators[g].name;
        match kind {
            LetterKind::Gen => name.clone(),
            LetterKind::Inv => format!("{name}^-1"),
            LetterKind::Diff => format!("d{name}"),
        }
    }

    pub fn inverse_letter(&self, l: Letter) -> Option<Letter> {
        let (g, kind) = self.letters[l.0 as usize];
        match kind {
            LetterKind::Gen => self.letter(g, LetterKind::Inv),
            LetterKind::Inv => self.letter(g, LetterKind::Gen),
            LetterKind::Diff => None,
        }
    }

    /// Number of form-generators in a word.
    pub fn degree(&self, w: &Word) -> usize {
        w.0.iter()
            .filter(|&&l| self.kind(l) == LetterKind::Diff)
            .count()
    }

    /// Word for `g^exp` (exp may be negative for invertible generators).
    pub fn power_word(&self, gen: usize, exp: i64) -> Result<Word> {
        let kind = if exp >= 0 {
            LetterKind::Gen
        } else {
            LetterKind::Inv
        };
        let l = self
            .letter(gen, kind)
            .ok_or_else(|| Error::NotInvertible(self.generators[gen].name.clone()))?;
        Ok(Word(vec![l; exp.unsigned_abs() as usize]))
    }

    /// Word from `(name, exponent)` factors; names may be `dg` with exponent 1.
    pub fn word(&self, factors: &[(&str, i64)]) -> Result<Word> {
        let mut out = Word::one();
        for &(name, exp) in factors {
            let w = if let Some(g) = self.generator_index(name) {
                self.power_word(g, exp)?
            } else if let Some(g) = name.strip_prefix('d').and_then(|b| self.generator_index(b)) {
                if exp < 0 {
                    return Err(Error::NotInvertible(name.to_string()));
                }
                let l = self.letter(g, LetterKind::Diff).expect("diff letter");
                Word(vec![l; exp as usize])
            } else {
                return Err(Error::UnknownGenerator(name.to_string()));
            };
            out = self.concat(&out, &w);
        }
        Ok(out)
    }

    /// Concatenate, cancelling `g g^-1` pairs at the junction.
    pub fn concat(&self, a: &Word, b: &Word) -> Word {
        let mut out = Vec::with_capacity(a.0.len() + b.0.len());
        out.extend_from_slice(&a.0);
        for &l in &b.0 {
            match (out.last(), self.inverse_letter(l)) {
                (Some(&last), Some(inv)) if last == inv => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    pub fn concat3(&self, a: &Word, b: &Word, c: &Word) -> Word {
        self.concat(&self.concat(a, b), c)
    }

    /// The inverse of a word made only of invertible letters.
    pub fn inverse_word(&self, w: &Word) -> Option<Word> {
        w.0.iter()
            .rev()
            .map(|&l| self.inverse_letter(l))
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }

    pub fn is_freely_reduced(&self, w: &Word) -> bool {
        w.0.windows(2)
            .all(|p| self.inverse_letter(p[1]) != Some(p[0]))
    }

    /// `u^-1 du dv v^2`; the empty word renders as the empty string.
    pub fn render_word(&self, w: &Word) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < w.0.len() {
            let l = w.0[i];
            let (g, kind) = self.letters[l.0 as usize];
            let mut run = 1;
            if kind != LetterKind::Diff {
                while i + run < w.0.len() && w.0[i + run] == l {
                    run += 1;
                }
            }
            let name = &self.generators[g].name;
            parts.push(match (kind, run) {
                (LetterKind::Diff, _) => format!("d{name}"),
                (LetterKind::Gen, 1) => name.clone(),
                (LetterKind::Gen, n) => format!("{name}^{n}"),
                (LetterKind::Inv, n) => format!("{name}^-{n}"),
            });
            i += run;
        }
        parts.join(" ")
    }
}

/// A word over an [`Alphabet`]; the empty word is the unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn one() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    /// Position of the first occurrence of `pat` at or after `from`.
    pub fn find(&self, pat: &Word, from: usize) -> Option<usize> {
        if pat.0.len() > self.0.len() {
            return None;
        }
        (from..=self.0.len() - pat.0.len()).find(|&i| self.0[i..].starts_with(&pat.0))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Scalar-linear combination of words: algebra elements and presented forms.
pub type WordComb = LinComb<Word>;

#[derive(Clone, Debug)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: WordComb,
}

/// Generators, oriented rewrite rules and the coefficient field.
///
/// Rules whose left side contains no form-generator are algebra relations;
/// the others are relations of the differential calculus. All rules must
/// decrease in the term order and preserve the form degree.
#[derive(Clone, Debug)]
pub struct Presentation {
    alphabet: Arc<Alphabet>,
    rules: Vec<Rule>,
    by_first: HashMap<Letter, Vec<usize>>,
    p: u32,
    budget: usize,
}

impl Presentation {
    pub fn new(alphabet: Alphabet, p: u32, rules: Vec<Rule>) -> Result<Self> {
        if p == 0 {
            return Err(Error::OutOfRange("cyclotomic order must be positive".into()));
        }
        let alphabet = Arc::new(alphabet);
        let mut by_first: HashMap<Letter, Vec<usize>> = HashMap::new();
        for (i, rule) in rules.iter().enumerate() {
            let label = || rule_label(&alphabet, rule);
            let bad = |reason: &str| Error::BadRule {
                rule: label(),
                reason: reason.into(),
            };
            if rule.lhs.is_empty() {
                return Err(bad("empty left-hand side"));
            }
            if !alphabet.is_freely_reduced(&rule.lhs) {
                return Err(bad("left-hand side is not freely reduced"));
            }
            let deg = alphabet.degree(&rule.lhs);
            for (w, c) in rule.rhs.iter() {
                if c.p() != p {
                    return Err(bad("coefficient from a different field"));
                }
                if *w >= rule.lhs {
                    return Err(bad("right-hand side word is not smaller than the left-hand side in the term order"));
                }
                if alphabet.degree(w) != deg {
                    return Err(bad("rule does not preserve the form degree"));
                }
            }
            by_first.entry(rule.lhs.0[0]).or_default().push(i);
        }
        Ok(Presentation {
            alphabet,
            rules,
            by_first,
            p,
            budget: DEFAULT_STEP_BUDGET,
        })
    }

    pub fn with_step_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn algebra_rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules
            .iter()
            .filter(move |r| self.alphabet.degree(&r.lhs) == 0)
    }

    pub fn form_rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules
            .iter()
            .filter(move |r| self.alphabet.degree(&r.lhs) > 0)
    }

    pub fn has_form_rules(&self) -> bool {
        self.form_rules().next().is_some()
    }

    pub fn rule_label(&self, rule: &Rule) -> String {
        rule_label(&self.alphabet, rule)
    }

    pub fn scalar(&self, n: i64) -> CycScalar {
        CycScalar::from_int(self.p, n)
    }

    pub fn one(&self) -> WordComb {
        WordComb::single(Word::one(), CycScalar::one(self.p))
    }

    pub fn word_element(&self, w: Word) -> WordComb {
        WordComb::single(w, CycScalar::one(self.p))
    }

    /// Leftmost redex: (position, rule index).
    fn find_redex(&self, w: &Word) -> Option<(usize, usize)> {
        for pos in 0..w.0.len() {
            if let Some(cands) = self.by_first.get(&w.0[pos]) {
                for &ri in cands {
                    if w.0[pos..].starts_with(&self.rules[ri].lhs.0) {
                        return Some((pos, ri));
                    }
                }
            }
        }
        None
    }

    fn all_redexes(&self, w: &Word) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for pos in 0..w.0.len() {
            if let Some(cands) = self.by_first.get(&w.0[pos]) {
                for &ri in cands {
                    if w.0[pos..].starts_with(&self.rules[ri].lhs.0) {
                        out.push((pos, ri));
                    }
                }
            }
        }
        out
    }

    fn rewrite_at(&self, w: &Word, pos: usize, ri: usize) -> impl Iterator<Item = (Word, &CycScalar)> + '_ {
        let rule = &self.rules[ri];
        let prefix = w.slice(0, pos);
        let suffix = w.slice(pos + rule.lhs.len(), w.len());
        rule.rhs
            .iter()
            .map(move |(rw, rc)| (self.alphabet.concat3(&prefix, rw, &suffix), rc))
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.alphabet.is_freely_reduced(w) && self.find_redex(w).is_none()
    }

    /// Canonical normal form.
    ///
    /// Words are processed largest-first, so every word is reduced once with
    /// its fully collected coefficient.
    pub fn normalize(&self, x: &WordComb) -> Result<WordComb> {
        let mut pending: BTreeMap<Word, CycScalar> = BTreeMap::new();
        let push = |pending: &mut BTreeMap<Word, CycScalar>, w: Word, c: CycScalar| {
            use std::collections::btree_map::Entry;
            match pending.entry(w) {
                Entry::Vacant(e) => {
                    e.insert(c);
                }
                Entry::Occupied(mut e) => {
                    *e.get_mut() += &c;
                }
            }
        };
        for (w, c) in x.iter() {
            let w = self.alphabet.concat(&Word::one(), w);
            push(&mut pending, w, c.clone());
        }
        let mut out = WordComb::zero();
        let mut steps = 0usize;
        while let Some((w, c)) = pending.pop_last() {
            if c.is_zero() {
                continue;
            }
            match self.find_redex(&w) {
                None => out.add_term(w, c),
                Some((pos, ri)) => {
                    steps += 1;
                    if steps > self.budget {
                        return Err(Error::StepBudgetExceeded(self.budget));
                    }
                    for (nw, rc) in self.rewrite_at(&w, pos, ri) {
                        push(&mut pending, nw, &c * rc);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Normal form reached by contracting a randomly chosen redex at every
    /// step. On a confluent presentation this agrees with [`normalize`].
    ///
    /// [`normalize`]: Presentation::normalize
    pub fn normalize_random<R: Rng>(&self, x: &WordComb, rng: &mut R) -> Result<WordComb> {
        let mut stack: Vec<(Word, CycScalar)> = x
            .iter()
            .map(|(w, c)| (self.alphabet.concat(&Word::one(), w), c.clone()))
            .collect();
        let mut out = WordComb::zero();
        let mut steps = 0usize;
        while let Some((w, c)) = stack.pop() {
            let redexes = self.all_redexes(&w);
            if redexes.is_empty() {
                out.add_term(w, c);
                continue;
            }
            steps += 1;
            if steps > self.budget {
                return Err(Error::StepBudgetExceeded(self.budget));
            }
            let (pos, ri) = redexes[rng.gen_range(0..redexes.len())];
            for (nw, rc) in self.rewrite_at(&w, pos, ri) {
                stack.push((nw, &c * rc));
            }
        }
        Ok(out)
    }

    /// Bilinear extension of concatenation; no normalisation.
    pub fn mul_free(&self, x: &WordComb, y: &WordComb) -> WordComb {
        let mut out = WordComb::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                out.add_term(self.alphabet.concat(a, b), ca * cb);
            }
        }
        out
    }

    pub fn mul(&self, x: &WordComb, y: &WordComb) -> Result<WordComb> {
        self.normalize(&self.mul_free(x, y))
    }

    pub fn add(&self, x: &WordComb, y: &WordComb) -> Result<WordComb> {
        self.normalize(&x.plus(y))
    }

    pub fn scalar_mul(&self, c: &CycScalar, x: &WordComb) -> Result<WordComb> {
        self.normalize(&x.scale(c))
    }

    /// `xy - yx`.
    pub fn commutator(&self, x: &WordComb, y: &WordComb) -> Result<WordComb> {
        self.normalize(&self.mul_free(x, y).minus(&self.mul_free(y, x)))
    }

    pub fn power(&self, x: &WordComb, n: u32) -> Result<WordComb> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// Total form degree of a homogeneous element, `None` when mixed or zero.
    pub fn degree_of(&self, x: &WordComb) -> Option<usize> {
        let mut degs = x.keys().map(|w| self.alphabet.degree(w));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn render(&self, x: &WordComb) -> String {
        crate::display::render_lincomb(x, |w| self.alphabet.render_word(w))
    }
}

fn rule_label(alphabet: &Alphabet, rule: &Rule) -> String {
    let rhs = crate::display::render_lincomb(&rule.rhs, |w| alphabet.render_word(w));
    format!("{} -> {}", alphabet.render_word(&rule.lhs), rhs)
}

/// One overlap or inclusion ambiguity between two rules.
#[derive(Clone, Debug)]
pub struct CriticalPair {
    pub overlap: Word,
    pub first_rule: String,
    pub second_rule: String,
    pub left: WordComb,
    pub right: WordComb,
}

impl CriticalPair {
    pub fn is_joinable(&self) -> bool {
        self.left == self.right
    }
}

#[derive(Clone, Debug, Default)]
pub struct ConfluenceReport {
    pub pairs: Vec<CriticalPair>,
}

impl ConfluenceReport {
    pub fn is_locally_confluent(&self) -> bool {
        self.pairs.iter().all(CriticalPair::is_joinable)
    }

    pub fn non_joinable(&self) -> impl Iterator<Item = &CriticalPair> {
        self.pairs.iter().filter(|cp| !cp.is_joinable())
    }

    pub fn joinable_count(&self) -> usize {
        self.pairs.iter().filter(|cp| cp.is_joinable()).count()
    }
}

/// Which rules take part in a confluence check.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum RuleScope {
    /// Algebra relations only.
    Algebra,
    /// Algebra and differential relations.
    All,
}

struct CheckRule {
    lhs: Word,
    rhs: WordComb,
    label: String,
}

/// Enumerate every critical pair of the rewriting system (including the
/// implicit cancellation rules `g g^-1 -> 1`, `g^-1 g -> 1`), reduce both
/// branches to normal form and record whether they meet.
pub fn check_local_confluence(pres: &Presentation, scope: RuleScope) -> Result<ConfluenceReport> {
    let alpha = pres.alphabet();
    let mut rules: Vec<CheckRule> = pres
        .rules()
        .iter()
        .filter(|r| scope == RuleScope::All || alpha.degree(&r.lhs) == 0)
        .map(|r| CheckRule {
            lhs: r.lhs.clone(),
            rhs: r.rhs.clone(),
            label: pres.rule_label(r),
        })
        .collect();
    for l in alpha.letters() {
        if let Some(inv) = alpha.inverse_letter(l) {
            let lhs = Word(vec![l, inv]);
            rules.push(CheckRule {
                label: format!("{} {} -> 1", alpha.letter_name(l), alpha.letter_name(inv)),
                lhs,
                rhs: pres.one(),
            });
        }
    }
    let embed = |prefix: &[Letter], rhs: &WordComb, suffix: &[Letter]| -> WordComb {
        let pre = Word(prefix.to_vec());
        let suf = Word(suffix.to_vec());
        rhs.iter()
            .map(|(w, c)| (alpha.concat3(&pre, w, &suf), c.clone()))
            .collect()
    };
    let mut report = ConfluenceReport::default();
    for (i, r1) in rules.iter().enumerate() {
        for (j, r2) in rules.iter().enumerate() {
            let (a, b) = (&r1.lhs.0, &r2.lhs.0);
            // overlaps: suffix of a == prefix of b
            for k in 1..a.len().min(b.len()) {
                if a[a.len() - k..] == b[..k] {
                    let mut overlap = a.clone();
                    overlap.extend_from_slice(&b[k..]);
                    let left = embed(&[], &r1.rhs, &b[k..]);
                    let right = embed(&a[..a.len() - k], &r2.rhs, &[]);
                    report.pairs.push(CriticalPair {
                        overlap: Word(overlap),
                        first_rule: r1.label.clone(),
                        second_rule: r2.label.clone(),
                        left: pres.normalize(&left)?,
                        right: pres.normalize(&right)?,
                    });
                }
            }
            // inclusions: b occurs inside a
            if i != j && b.len() <= a.len() {
                for pos in 0..=a.len() - b.len() {
                    if a[pos..pos + b.len()] == b[..] {
                        let left = r1.rhs.clone();
                        let right = embed(&a[..pos], &r2.rhs, &a[pos + b.len()..]);
                        report.pairs.push(CriticalPair {
                            overlap: r1.lhs.clone(),
                            first_rule: r1.label.clone(),
                            second_rule: r2.label.clone(),
                            left: pres.normalize(&left)?,
                            right: pres.normalize(&right)?,
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn torus_algebra(p: u32) -> Presentation {
        let alpha = Alphabet::new(
            vec![Generator::new("u", true), Generator::new("v", true)],
            &["u", "v"],
        )
        .unwrap();
        let q = |k| CycScalar::q_power(p, k);
        let rule = |l: &[(&str, i64)], c: CycScalar, r: &[(&str, i64)]| Rule {
            lhs: alpha.word(l).unwrap(),
            rhs: WordComb::single(alpha.word(r).unwrap(), c),
        };
        let rules = vec![
            rule(&[("v", 1), ("u", 1)], q(-1), &[("u", 1), ("v", 1)]),
            rule(&[("v", 1), ("u", -1)], q(1), &[("u", -1), ("v", 1)]),
            rule(&[("v", -1), ("u", 1)], q(1), &[("u", 1), ("v", -1)]),
            rule(&[("v", -1), ("u", -1)], q(-1), &[("u", -1), ("v", -1)]),
        ];
        Presentation::new(alpha, p, rules).unwrap()
    }

    fn el(pres: &Presentation, f: &[(&str, i64)]) -> WordComb {
        pres.word_element(pres.alphabet().word(f).unwrap())
    }

    #[test]
    fn vu_rewrites_to_q_inverse_uv() {
        let t = torus_algebra(2);
        let n = t.normalize(&el(&t, &[("v", 1), ("u", 1)])).unwrap();
        let expect = el(&t, &[("u", 1), ("v", 1)]).scale(&t.scalar(-1));
        assert_eq!(n, expect);
        assert_eq!(t.render(&n), "-u v");
    }

    #[test]
    fn u_squared_is_central_when_q_has_order_two() {
        let t = torus_algebra(2);
        let c = t
            .commutator(&el(&t, &[("u", 2)]), &el(&t, &[("v", 1)]))
            .unwrap();
        assert!(c.is_zero());
        let t3 = torus_algebra(3);
        let c3 = t3
            .commutator(&el(&t3, &[("u", 2)]), &el(&t3, &[("v", 1)]))
            .unwrap();
        assert!(!c3.is_zero());
    }

    #[test]
    fn multiplication_by_one() {
        let t = torus_algebra(3);
        let x = el(&t, &[("v", 2), ("u", -1)]);
        let nx = t.normalize(&x).unwrap();
        assert_eq!(t.mul(&x, &t.one()).unwrap(), nx);
    }

    #[test]
    fn inverse_cancellation_on_concat() {
        let t = torus_algebra(2);
        let w = t.alphabet().word(&[("u", 2), ("u", -3), ("v", 1)]).unwrap();
        assert_eq!(t.alphabet().render_word(&w), "u^-1 v");
    }

    #[test]
    fn torus_normal_form_matches_pairwise_swaps() {
        // u^a v^b u^c v^d = q^{-bc} u^{a+c} v^{b+d}, counting one factor of
        // q^{-1} per (v, u) transposition with signs for inverses.
        for p in [2u32, 3, 5] {
            let t = torus_algebra(p);
            for a in -2..=2i64 {
                for b in -2..=2i64 {
                    for c in -2..=2i64 {
                        for d in -2..=2i64 {
                            let x = el(&t, &[("u", a), ("v", b), ("u", c), ("v", d)]);
                            let got = t.normalize(&x).unwrap();
                            let expect = el(&t, &[("u", a + c), ("v", b + d)])
                                .scale(&CycScalar::q_power(p, -b * c));
                            assert_eq!(got, expect, "p={p} a={a} b={b} c={c} d={d}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn random_strategies_agree() {
        let t = torus_algebra(3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = el(&t, &[("v", 2), ("u", -1), ("v", -1), ("u", 3)])
            .plus(&el(&t, &[("v", 1), ("u", 1), ("v", 1), ("u", 1)]));
        let canon = t.normalize(&x).unwrap();
        for _ in 0..20 {
            assert_eq!(t.normalize_random(&x, &mut rng).unwrap(), canon);
        }
    }

    #[test]
    fn torus_algebra_is_locally_confluent() {
        let rep = check_local_confluence(&torus_algebra(3), RuleScope::All).unwrap();
        assert!(!rep.pairs.is_empty());
        assert!(rep.is_locally_confluent());
    }

    #[test]
    fn conflicting_orientations_are_reported() {
        let alpha = Alphabet::new(
            vec![Generator::new("v", false), Generator::new("u", false)],
            &["v", "u"],
        )
        .unwrap();
        let uv = alpha.word(&[("u", 1), ("v", 1)]).unwrap();
        let vu = alpha.word(&[("v", 1), ("u", 1)]).unwrap();
        let p = 3;
        let rules = vec![
            Rule {
                lhs: uv.clone(),
                rhs: WordComb::single(vu.clone(), CycScalar::q(p)),
            },
            Rule {
                lhs: uv,
                rhs: WordComb::single(vu, CycScalar::one(p)),
            },
        ];
        let pres = Presentation::new(alpha, p, rules).unwrap();
        let rep = check_local_confluence(&pres, RuleScope::All).unwrap();
        assert!(!rep.is_locally_confluent());
        assert!(rep.non_joinable().count() >= 1);
    }

    #[test]
    fn misoriented_rule_is_rejected() {
        let alpha = Alphabet::new(
            vec![Generator::new("u", false), Generator::new("v", false)],
            &["u", "v"],
        )
        .unwrap();
        let rules = vec![Rule {
            lhs: alpha.word(&[("u", 1), ("v", 1)]).unwrap(),
            rhs: WordComb::single(alpha.word(&[("v", 1), ("u", 1)]).unwrap(), CycScalar::one(1)),
        }];
        assert!(matches!(
            Presentation::new(alpha, 1, rules),
            Err(Error::BadRule { .. })
        ));
    }

    #[test]
    fn step_budget_is_enforced() {
        let t = torus_algebra(2).with_step_budget(3);
        let x = el(&t, &[("v", 3), ("u", 3)]);
        assert_eq!(t.normalize(&x), Err(Error::StepBudgetExceeded(3)));
    }

    #[test]
    fn unknown_generator() {
        let t = torus_algebra(2);
        assert!(matches!(
            t.alphabet().word(&[("w", 1)]),
            Err(Error::UnknownGenerator(_))
        ));
        assert!(matches!(
            t.alphabet().word(&[("du", -1)]),
            Err(Error::NotInvertible(_))
        ));
    }
}
