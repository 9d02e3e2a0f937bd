//! Command dispatch and output formatting.

use clap::{Subcommand, ValueEnum};
use serde_json::{json, Value};

use ncham_core::algebra::{check_local_confluence, Alphabet, ConfluenceReport, RuleScope};
use ncham_core::calculus::{Derivation, Form};
use ncham_core::models::{AnyModel, Model, Namespace};
use ncham_core::suite::{self, SuiteReport};
use ncham_core::symplectic::{render_flow, HamiltonianOutcome, Symplectic};
use ncham_core::with_model;

use crate::error::CliError;
use crate::expr::{eval_form, eval_derivation, parse, parse_derivation, Vocabulary};

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Print the canonical form of an expression.
    Normalize {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Exterior derivative.
    D {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Interior product `θ⌟ω` of a derivation with a form of positive degree.
    Iprod {
        #[arg(allow_hyphen_values = true)]
        derivation: String,
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Lie derivative `L_θ ω`.
    Lie {
        #[arg(allow_hyphen_values = true)]
        derivation: String,
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Poisson bracket `{a, b} = X_a(b)`.
    Bracket {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Hamiltonian vector field of an element.
    Hamvec {
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    /// Decide whether an element is Hamiltonian relative to the ansatz.
    IsHamiltonian {
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    /// Truncated flow `exp(t X_b)(a)` up to `--order`.
    Flow {
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    /// Run the randomized property suite.
    Check,
    /// Report local confluence of the model's rewriting systems.
    Confluence,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Normalize { .. } => "normalize",
            Command::D { .. } => "d",
            Command::Iprod { .. } => "iprod",
            Command::Lie { .. } => "lie",
            Command::Bracket { .. } => "bracket",
            Command::Hamvec { .. } => "hamvec",
            Command::IsHamiltonian { .. } => "is-hamiltonian",
            Command::Flow { .. } => "flow",
            Command::Check => "check",
            Command::Confluence => "confluence",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub order: u32,
    pub seed: u64,
    pub cases: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            order: 3,
            seed: suite::DEFAULT_SEED,
            cases: suite::DEFAULT_CASES,
        }
    }
}

/// What a command produced: text for the terminal, a JSON report, and
/// whether the answer is a mathematical negative.
#[derive(Clone, Debug)]
pub struct Output {
    pub text: String,
    pub json: Value,
    pub negative: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            negative: false,
        }
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.negative)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("json"),
        }
    }
}

struct Session<'a, C: Namespace> {
    model: &'a Model<C>,
    vocab: Vocabulary,
}

impl<'a, C: Namespace> Session<'a, C> {
    fn new(model: &'a Model<C>) -> Self {
        Session {
            vocab: Vocabulary::of(model.calc()),
            model,
        }
    }

    fn c(&self) -> &C {
        self.model.calc()
    }

    fn sym(&self) -> Result<&Symplectic<C>, CliError> {
        Ok(self.model.symplectic()?)
    }

    fn expr(&self, text: &str) -> Result<Form<C::Key>, CliError> {
        eval_form(self.c(), &parse(text, &self.vocab)?)
    }

    fn deriv(&self, text: &str) -> Result<Derivation<C::DerivKey>, CliError> {
        let d = parse_derivation(text, &self.vocab)?;
        eval_derivation(self.c(), &d, |a| Ok(self.sym()?.vector_field(self.c(), a)?))
    }

    fn form_result(&self, cmd: &str, x: &Form<C::Key>) -> Output {
        let text = self.c().render(x);
        let degree = self.c().degree_of(x);
        Output::ok(
            text.clone(),
            json!({ "model": self.model.kind().to_string(), "command": cmd, "result": text, "degree": degree }),
        )
    }

    fn not_hamiltonian(&self, cmd: &str, a: &Form<C::Key>, residual: &Form<C::Key>) -> Result<Output, CliError> {
        let label = self.sym()?.label().to_string();
        Ok(Output {
            text: format!("NOT_HAMILTONIAN (relative to ansatz {label})"),
            json: json!({
                "model": self.model.kind().to_string(),
                "command": cmd,
                "element": self.c().render(a),
                "hamiltonian": false,
                "ansatz": label,
                "residual": self.c().render(residual),
            }),
            negative: true,
        })
    }

    fn run(&self, cmd: &Command, opts: &Options) -> Result<Output, CliError> {
        let c = self.c();
        let name = cmd.name();
        match cmd {
            Command::Normalize { expr } => Ok(self.form_result(name, &self.expr(expr)?)),
            Command::D { expr } => Ok(self.form_result(name, &c.d(&self.expr(expr)?)?)),
            Command::Iprod { derivation, form } => {
                Ok(self.form_result(name, &c.iprod(&self.deriv(derivation)?, &self.expr(form)?)?))
            }
            Command::Lie { derivation, form } => {
                Ok(self.form_result(name, &c.lie(&self.deriv(derivation)?, &self.expr(form)?)?))
            }
            Command::Bracket { a, b } => {
                let (a, b) = (self.expr(a)?, self.expr(b)?);
                let s = self.sym()?;
                match s.solve(c, &a)? {
                    HamiltonianOutcome::Hamiltonian(sol) => Ok(self.form_result(name, &c.apply(&sol.field, &b)?)),
                    HamiltonianOutcome::NotHamiltonian { residual } => self.not_hamiltonian(name, &a, &residual),
                }
            }
            Command::Hamvec { a } | Command::IsHamiltonian { a } => {
                let a = self.expr(a)?;
                let s = self.sym()?;
                match s.solve(c, &a)? {
                    HamiltonianOutcome::Hamiltonian(sol) => {
                        let field = c.render_derivation(&sol.field);
                        let text = if matches!(cmd, Command::Hamvec { .. }) {
                            field.clone()
                        } else {
                            format!("HAMILTONIAN (relative to ansatz {})", s.label())
                        };
                        let coords: Vec<Value> = sol
                            .coordinates
                            .iter()
                            .map(|(i, k)| json!({ "basis": s.ansatz().labels()[*i], "coefficient": k.to_string() }))
                            .collect();
                        Ok(Output::ok(
                            text,
                            json!({
                                "model": self.model.kind().to_string(),
                                "command": name,
                                "element": c.render(&a),
                                "hamiltonian": true,
                                "ansatz": s.label(),
                                "field": field,
                                "coordinates": coords,
                            }),
                        ))
                    }
                    HamiltonianOutcome::NotHamiltonian { residual } => self.not_hamiltonian(name, &a, &residual),
                }
            }
            Command::Flow { b, a } => {
                let (b, a) = (self.expr(b)?, self.expr(a)?);
                let s = self.sym()?;
                if let HamiltonianOutcome::NotHamiltonian { residual } = s.solve(c, &b)? {
                    return self.not_hamiltonian(name, &b, &residual);
                }
                let coeffs = s.flow(c, &b, &a, opts.order)?;
                let text = render_flow(c, &coeffs);
                let terms: Vec<String> = coeffs.iter().map(|x| c.render(x)).collect();
                Ok(Output::ok(
                    text.clone(),
                    json!({
                        "model": self.model.kind().to_string(),
                        "command": name,
                        "order": opts.order,
                        "result": text,
                        "coefficients": terms,
                    }),
                ))
            }
            Command::Check | Command::Confluence => unreachable!("handled on the model"),
        }
    }
}

/// Characters excluding combining marks such as the tilde of `ω̃`.
fn display_width(s: &str) -> usize {
    s.chars().filter(|c| !('\u{0300}'..='\u{036f}').contains(c)).count()
}

fn check_output(r: &SuiteReport) -> Output {
    let mut lines = vec![format!("model {}  seed {}", r.model, r.seed)];
    let width = r.checks.iter().map(|c| display_width(&c.name)).max().unwrap_or(0);
    for c in &r.checks {
        let pad = " ".repeat(width - display_width(&c.name));
        let status = if c.passed() { "ok  " } else { "FAIL" };
        lines.push(format!("[{status}] {}{pad}  {}/{}", c.name, c.cases - c.failures, c.cases));
        if let Some(f) = &c.first_failure {
            lines.push(format!("       first failure: {f}"));
        }
    }
    let failed = r.checks.iter().filter(|c| !c.passed()).count();
    lines.push(if failed == 0 {
        format!("all {} checks passed ({} cases)", r.checks.len(), r.total_cases())
    } else {
        format!("{failed} of {} checks failed", r.checks.len())
    });
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| json!({ "name": c.name, "cases": c.cases, "failures": c.failures, "first_failure": c.first_failure }))
        .collect();
    Output {
        text: lines.join("\n"),
        json: json!({ "model": r.model, "command": "check", "seed": r.seed, "passed": failed == 0, "checks": checks }),
        negative: failed > 0,
    }
}

fn confluence_output(model: &AnyModel) -> Result<Output, CliError> {
    let mut lines = Vec::new();
    let mut reports = Vec::new();
    let mut ok = true;
    let mut describe = |scope: &str,
                        r: &ConfluenceReport,
                        alphabet: &Alphabet,
                        binding: bool,
                        lines: &mut Vec<String>| {
        let bad: Vec<_> = r.non_joinable().collect();
        let note = if binding { "" } else { " (not used for rewriting)" };
        lines.push(format!(
            "{scope}{note}: {} critical pairs, {} joinable",
            r.pairs.len(),
            r.joinable_count()
        ));
        for cp in &bad {
            lines.push(format!(
                "  not joinable: {} from [{}] and [{}]",
                alphabet.render_word(&cp.overlap),
                cp.first_rule,
                cp.second_rule
            ));
        }
        ok &= !binding || bad.is_empty();
        reports.push(json!({
            "scope": scope,
            "used_for_rewriting": binding,
            "pairs": r.pairs.len(),
            "joinable": r.joinable_count(),
            "locally_confluent": bad.is_empty(),
        }));
    };
    let confluence = model.confluence()?;
    if confluence.is_empty() {
        lines.push("no rewriting system: normal forms come from a basis".to_string());
    }
    let alphabet = match model {
        AnyModel::Torus(m) | AnyModel::Custom(m) => Some(m.calc().alphabet()),
        AnyModel::Cuntz(m) => Some(m.calc().algebra().presentation().alphabet()),
        _ => None,
    };
    for (scope, r) in &confluence {
        describe(scope, r, alphabet.expect("rewriting model"), true, &mut lines);
    }
    if let Some(full) = model.form_presentation() {
        let r = check_local_confluence(full, RuleScope::All)?;
        describe("calculus", &r, full.alphabet(), false, &mut lines);
    }
    lines.push(if ok { "locally confluent".into() } else { "NOT locally confluent".into() });
    Ok(Output {
        text: lines.join("\n"),
        json: json!({ "model": model.kind().to_string(), "command": "confluence", "locally_confluent": ok, "reports": reports }),
        negative: !ok,
    })
}

pub fn run(model: &AnyModel, cmd: &Command, opts: &Options) -> Result<Output, CliError> {
    match cmd {
        Command::Check => Ok(check_output(&suite::run(model, opts.seed, opts.cases)?)),
        Command::Confluence => confluence_output(model),
        _ => with_model!(model, m => Session::new(m).run(cmd, opts)),
    }
}
