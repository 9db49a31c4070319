//! The `rbx` command line: a session built from flags, an expression parser,
//! and one subcommand per library operation.
//!
//! Exit codes: 0 success, 1 a check failed or an equality was not proven,
//! 2 usage, parse or domain errors, 3 a word-length or step guard was hit.

mod format;
mod parse;
mod session;

use std::ffi::OsString;
use std::io::Write;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::base::AlgebraDescriptor;
use crate::batch::{rb_axiom_batch, run_checks, BatchReport, Exec};
use crate::error::{Error, Result};
use crate::free_rb::{DisplayTerms, ShuffleElement, TensorWord};
use crate::limits::Limits;
use crate::linear::Terms;
use crate::localize::{LocalizedElement, RbLocalization, Variant};
use crate::presented::{
    cross_check_localization, normalize_with, Component, EqualityVerdict, NormalForm, Presentation,
    Strategy, TensorLocalizationInstance,
};
use crate::rb::{verify_rb_axiom, BaseRb, RotaBaxterAlgebra};
use crate::sample::{KeyKind, Sampler};
use crate::scalar::Scalar;

pub use format::terms_json;
pub use parse::{parse, parse_element, parse_expression, Ast, Node, Pos, MAX_EXPONENT};
pub use session::{OpSpec, Session};

#[derive(Parser, Debug)]
#[command(
    name = "rbx",
    version,
    about = "Exact computations in commutative Rota-Baxter algebras over the rationals"
)]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Flags {
    /// Comma-separated variable names (default: the localized variable, else x)
    #[arg(long, global = true, value_delimiter = ',')]
    vars: Vec<String>,
    /// Invert powers of a polynomial: `var` or `var:poly`
    #[arg(long, global = true, value_name = "VAR[:POLY]")]
    localize: Option<String>,
    /// zero, id, negid or integral[:var]
    #[arg(long, global = true, value_parser = parse_op)]
    op: Option<OpSpec>,
    /// The weight λ as p/q (default: the operator's own weight)
    #[arg(long, global = true, value_parser = parse_scalar, allow_hyphen_values = true)]
    weight: Option<Scalar>,
    /// general, weight-zero or zero-op
    #[arg(long, global = true, value_parser = parse_variant)]
    variant: Option<Variant>,
    #[arg(long, global = true)]
    json: bool,
    /// Print rewrite steps before each normal form
    #[arg(long, global = true)]
    trace: bool,
    #[arg(long, global = true)]
    max_word_len: Option<usize>,
    #[arg(long, global = true)]
    max_steps: Option<usize>,
    /// Check N seeded random samples instead of given inputs
    #[arg(long, global = true, value_name = "N")]
    random: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = StrategyArg::Innermost)]
    strategy: StrategyArg,
    /// Run batch checks on one thread
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Innermost,
    RbFirst,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Product in the free algebra, or in the localized carrier with --localize
    Mul {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// The operator P, free or localized
    Applyp {
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    /// Check the Rota-Baxter identity on a pair or on --random samples
    Rbcheck {
        #[arg(allow_hyphen_values = true)]
        pair: Vec<String>,
        /// Check the free algebra instead of the base operator
        #[arg(long)]
        free: bool,
    },
    /// Map an element of the localized algebra into the carrier and apply P
    Localize {
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    /// Normal forms modulo the localization relations
    Normalize {
        #[arg(required = true, allow_hyphen_values = true)]
        exprs: Vec<String>,
    },
    /// Compare two expressions modulo the localization relations
    Equal {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Normal forms in a tensor product; the left factor is the session algebra
    Tensor {
        /// Variables of the right factor
        #[arg(long, value_delimiter = ',', required = true)]
        right_vars: Vec<String>,
        /// Operator of the right factor (default: the session operator)
        #[arg(long, value_parser = parse_op)]
        right_op: Option<OpSpec>,
        /// Shared variables (default: all common ones)
        #[arg(long, value_delimiter = ',')]
        shared: Option<Vec<String>>,
        #[arg(allow_hyphen_values = true)]
        exprs: Vec<String>,
    },
    /// Compare the localized carrier with the presentation
    Crosscheck {
        #[arg(allow_hyphen_values = true)]
        a: Option<String>,
    },
    /// The tensor-localization isomorphism for Q[x] at x and Q[x,y]
    Lemma44 {
        #[arg(allow_hyphen_values = true)]
        t: Option<String>,
    },
}

fn parse_op(s: &str) -> Result<OpSpec> {
    s.parse()
}

fn parse_scalar(s: &str) -> Result<Scalar> {
    s.parse()
}

fn parse_variant(s: &str) -> Result<Variant> {
    s.parse()
}

/// Exit code of an error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_guard() {
        3
    } else {
        2
    }
}

struct Output {
    text: String,
    status: i32,
}

impl Output {
    fn new() -> Self {
        Output {
            text: String::new(),
            status: 0,
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn fail(mut self) -> Self {
        self.status = 1;
        self
    }
}

struct Ctx {
    session: Session,
    flags: Flags,
}

/// Runs `rbx` with `args` (including the program name), writing results to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let flags = cli.flags.clone();
    let result = Session::new(
        &flags.vars,
        flags.localize.as_deref(),
        flags.op.clone(),
        flags.weight.clone(),
        flags.variant,
        limits(&flags),
    )
    .and_then(|session| {
        dispatch(
            &Ctx {
                session,
                flags: flags.clone(),
            },
            &cli.command,
        )
    });
    match result {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            o.status
        }
        Err(e) => {
            if let (Error::StepLimit { trace, .. }, true) = (&e, flags.trace) {
                for line in trace {
                    let _ = writeln!(out, "{line}");
                }
            }
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn limits(flags: &Flags) -> Limits {
    let d = Limits::default();
    Limits {
        max_word_len: flags.max_word_len.unwrap_or(d.max_word_len),
        max_steps: flags.max_steps.unwrap_or(d.max_steps),
    }
}

fn usage(msg: &str) -> Error {
    Error::domain(msg)
}

impl Ctx {
    fn exec(&self) -> Exec {
        if self.flags.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }

    fn strategy(&self) -> Strategy {
        match self.flags.strategy {
            StrategyArg::Innermost => Strategy::Innermost,
            StrategyArg::RbFirst => Strategy::RbFirst,
        }
    }

    fn no_random(&self, cmd: &str) -> Result<()> {
        match self.flags.random {
            Some(_) => Err(usage(&format!("{cmd} does not take --random"))),
            None => Ok(()),
        }
    }

    fn terms(
        &self,
        out: &mut Output,
        alg: &AlgebraDescriptor,
        terms: &Terms<TensorWord>,
        header: Option<&RbLocalization>,
    ) {
        if self.flags.json {
            let mut v = terms_json(alg, terms);
            if let Some(loc) = header {
                v = header_json(v, loc);
            }
            out.line(v.to_string());
        } else {
            if let Some(loc) = header {
                out.line(loc.header());
            }
            out.line(DisplayTerms { alg, terms }.to_string());
        }
    }
}

fn header_json(v: Value, loc: &RbLocalization) -> Value {
    let v = format::with(v, "variant", json!(loc.variant().name()));
    format::with(v, "weight", json!(loc.weight().to_ratio_string()))
}

/// Evaluates `input` in the free algebra of the session.
pub fn parse_shuffle(input: &str, ring: &Arc<crate::free_rb::FreeRb>) -> Result<ShuffleElement> {
    parse_expression(input, ring.algebra())?.evaluate(ring, |k| {
        ShuffleElement::from_word(ring, TensorWord::single(k.clone()), Scalar::one())
    })
}

/// Evaluates `input` in the localized carrier.
pub fn parse_localized(input: &str, loc: &Arc<RbLocalization>) -> Result<LocalizedElement> {
    parse_expression(input, loc.algebra())?.evaluate(loc, |k| {
        LocalizedElement::word(loc, TensorWord::single(k.clone()), Scalar::one())
    })
}

fn dispatch(ctx: &Ctx, cmd: &Command) -> Result<Output> {
    let s = &ctx.session;
    // rbcheck may test an operator against a foreign weight; lemma44 is fixed
    if !matches!(cmd, Command::Rbcheck { .. } | Command::Lemma44 { .. }) {
        s.operator()?;
    }
    match cmd {
        Command::Mul { a, b } => {
            ctx.no_random("mul")?;
            let mut out = Output::new();
            if s.is_localized() {
                let loc = s.localization()?;
                let r = parse_localized(a, &loc)?.b_product(&parse_localized(b, &loc)?)?;
                ctx.terms(&mut out, &s.alg, r.terms(), Some(&loc));
            } else {
                let ring = s.free_ring();
                let r = parse_shuffle(a, &ring)?.msh_product(&parse_shuffle(b, &ring)?)?;
                ctx.terms(&mut out, &s.alg, r.terms(), None);
            }
            Ok(out)
        }
        Command::Applyp { a } => {
            ctx.no_random("applyp")?;
            let mut out = Output::new();
            if s.is_localized() {
                let loc = s.localization()?;
                let r = parse_localized(a, &loc)?.p_localized()?;
                ctx.terms(&mut out, &s.alg, r.terms(), Some(&loc));
            } else {
                let r = parse_shuffle(a, &s.free_ring())?.shuffle_p()?;
                ctx.terms(&mut out, &s.alg, r.terms(), None);
            }
            Ok(out)
        }
        Command::Rbcheck { pair, free } => rbcheck(ctx, pair, *free),
        Command::Localize { a } => {
            ctx.no_random("localize")?;
            let loc = s.localization()?;
            let image = LocalizedElement::from_fraction(&loc, &parse_element(a, &s.alg)?)?;
            let p = image.p_localized()?;
            let mut out = Output::new();
            if ctx.flags.json {
                let v = json!({
                    "image": terms_json(&s.alg, image.terms()),
                    "p_image": terms_json(&s.alg, p.terms()),
                });
                out.line(header_json(v, &loc).to_string());
            } else {
                out.line(loc.header());
                out.line(format!("a = {image}"));
                out.line(format!("P(a) = {p}"));
            }
            Ok(out)
        }
        Command::Normalize { exprs } => {
            ctx.no_random("normalize")?;
            let pres = s.presentation()?;
            normalize_all(ctx, &pres, exprs)
        }
        Command::Equal { a, b } => {
            ctx.no_random("equal")?;
            let pres = s.presentation()?;
            let left = normal_form(ctx, &pres, a)?;
            let right = normal_form(ctx, &pres, b)?;
            Ok(verdict_output(
                ctx,
                EqualityVerdict::from_forms(left, right),
            ))
        }
        Command::Tensor {
            right_vars,
            right_op,
            shared,
            exprs,
        } => {
            ctx.no_random("tensor")?;
            let pres = tensor_presentation(s, right_vars, right_op.as_ref(), shared.as_deref())?;
            if exprs.is_empty() {
                let mut out = Output::new();
                out.line(pres.describe());
                return Ok(out);
            }
            normalize_all(ctx, &pres, exprs)
        }
        Command::Crosscheck { a } => crosscheck(ctx, a.as_deref()),
        Command::Lemma44 { t } => lemma44(ctx, t.as_deref()),
    }
}

fn normal_form(ctx: &Ctx, pres: &Arc<Presentation>, input: &str) -> Result<NormalForm> {
    let e = parse_expression(input, pres.carrier())?;
    Ok(normalize_with(&e, pres, ctx.strategy(), false)?.form)
}

fn normalize_all(ctx: &Ctx, pres: &Arc<Presentation>, exprs: &[String]) -> Result<Output> {
    let mut out = Output::new();
    for input in exprs {
        let e = parse_expression(input, pres.carrier())?;
        let n = normalize_with(&e, pres, ctx.strategy(), ctx.flags.trace)?;
        if ctx.flags.json {
            let mut v = terms_json(pres.carrier(), n.form.terms());
            v = format::with(v, "steps", json!(n.steps));
            if ctx.flags.trace {
                v = format::with(v, "trace", json!(n.trace));
            }
            out.line(v.to_string());
        } else {
            for line in &n.trace {
                out.line(line);
            }
            out.line(n.form.to_string());
        }
    }
    Ok(out)
}

fn verdict_output(ctx: &Ctx, v: EqualityVerdict) -> Output {
    let status = if v.is_proven() {
        "proven-equal"
    } else {
        "not-proven"
    };
    let mut out = Output::new();
    if ctx.flags.json {
        let alg = v.left.presentation().carrier();
        out.line(
            json!({
                "verdict": status,
                "left": terms_json(alg, v.left.terms()),
                "right": terms_json(alg, v.right.terms()),
            })
            .to_string(),
        );
    } else {
        out.line(status);
        out.line(format!("left: {}", v.left));
        out.line(format!("right: {}", v.right));
    }
    if v.is_proven() {
        out
    } else {
        out.fail()
    }
}

fn tensor_presentation(
    s: &Session,
    right_vars: &[String],
    right_op: Option<&OpSpec>,
    shared: Option<&[String]>,
) -> Result<Arc<Presentation>> {
    let right = Arc::new(AlgebraDescriptor::polynomial(right_vars)?);
    let left_integral = match s.kind {
        crate::base::OperatorKind::Integral(i) => Some(s.alg.vars()[i].clone()),
        _ => None,
    };
    let spec = right_op.unwrap_or(&s.op);
    let kind = spec.resolve(&right, left_integral.as_deref())?;
    let r2 = Component::new(
        Arc::clone(&right),
        crate::base::BaseOperator::new(kind, s.weight.clone())?,
    )?;
    let r1 = Component::new(Arc::clone(&s.alg), s.operator()?)?;
    let shared: Vec<String> = match shared {
        Some(v) => v.to_vec(),
        None => s
            .alg
            .vars()
            .iter()
            .filter(|v| right.var_index(v).is_some())
            .cloned()
            .collect(),
    };
    Presentation::tensor_with_limits(&shared, r1, r2, s.limits)
}

fn batch_output(out: &mut Output, what: &str, report: &BatchReport) -> bool {
    match &report.failure {
        None => {
            out.line(format!(
                "{what} holds on {n}/{n} samples",
                n = report.checked
            ));
            true
        }
        Some((i, msg)) => {
            out.line(format!("{what} fails on sample {i}: {msg}"));
            false
        }
    }
}

fn report_json(report: &BatchReport) -> Value {
    json!({
        "holds": report.passed(),
        "checked": report.checked,
        "failure": report.failure.as_ref().map(|(i, msg)| json!({ "sample": i, "detail": msg })),
    })
}

/// Shared driver for the three kinds of algebra `rbcheck` works in.
fn check_axiom<R, P, G>(
    ctx: &Ctx,
    target: &R,
    pair: &[String],
    parse: P,
    sample: G,
    mut out: Output,
) -> Result<Output>
where
    R: RotaBaxterAlgebra + Sync,
    R::Element: Send + std::fmt::Display,
    P: Fn(&str) -> Result<R::Element>,
    G: Fn(&mut Sampler) -> R::Element + Sync + Send,
{
    let lambda = &ctx.session.weight;
    match (ctx.flags.random, pair.len()) {
        (Some(n), 0) => {
            let report = rb_axiom_batch(ctx.exec(), target, lambda, n, ctx.flags.seed, sample)?;
            let ok = if ctx.flags.json {
                out.line(report_json(&report).to_string());
                report.passed()
            } else {
                batch_output(&mut out, "rb-axiom", &report)
            };
            Ok(if ok { out } else { out.fail() })
        }
        (None, 2) => {
            let x = parse(&pair[0])?;
            let y = parse(&pair[1])?;
            let holds = verify_rb_axiom(target, lambda, &x, &y)?;
            if ctx.flags.json {
                out.line(json!({ "holds": holds }).to_string());
            } else {
                out.line(if holds {
                    "rb-axiom holds"
                } else {
                    "rb-axiom fails"
                });
            }
            Ok(if holds { out } else { out.fail() })
        }
        _ => Err(usage("rbcheck takes two elements or --random N")),
    }
}

fn rbcheck(ctx: &Ctx, pair: &[String], free: bool) -> Result<Output> {
    let s = &ctx.session;
    let mut out = Output::new();
    if s.is_localized() {
        let loc = s.localization()?;
        if !ctx.flags.json {
            out.line(loc.header());
        }
        return check_axiom(
            ctx,
            &loc,
            pair,
            |t| parse_localized(t, &loc),
            |r| r.localized_element(&loc, 3),
            out,
        );
    }
    if free {
        let ring = s.free_ring();
        return check_axiom(
            ctx,
            &ring,
            pair,
            |t| parse_shuffle(t, &ring),
            |r| r.shuffle_element(&ring, 3),
            out,
        );
    }
    let base = BaseRb::new(Arc::clone(&s.alg), s.natural_operator()?)?;
    check_axiom(
        ctx,
        &base,
        pair,
        |t| parse_element(t, &s.alg),
        |r| r.element(&s.alg, KeyKind::Polynomial),
        out,
    )
}

fn crosscheck(ctx: &Ctx, input: Option<&str>) -> Result<Output> {
    let loc = ctx.session.localization()?;
    let mut out = Output::new();
    out.line(loc.header());
    match (ctx.flags.random, input) {
        (Some(n), None) => {
            let report = run_checks(ctx.exec(), n, ctx.flags.seed, |r| {
                let u = r.localized_element(&loc, 3);
                let v = cross_check_localization(&u)?;
                Ok((!v.is_proven()).then(|| format!("{u} normalizes to {}", v.left)))
            })?;
            let ok = batch_output(&mut out, "crosscheck", &report);
            Ok(if ok { out } else { out.fail() })
        }
        (None, Some(text)) => {
            let v = cross_check_localization(&parse_localized(text, &loc)?)?;
            if v.is_proven() {
                out.line(format!("proven-equal: {}", v.left));
                Ok(out)
            } else {
                out.line(format!(
                    "not-proven: normalizes to {}, carrier gives {}",
                    v.left, v.right
                ));
                Ok(out.fail())
            }
        }
        _ => Err(usage("crosscheck takes one element or --random N")),
    }
}

fn lemma44(ctx: &Ctx, input: Option<&str>) -> Result<Output> {
    let inst = TensorLocalizationInstance::new(ctx.session.limits)?;
    let mut out = Output::new();
    if let Some(text) = input {
        ctx.no_random("lemma44 with an element")?;
        let t = parse_localized(text, inst.target())?;
        let back = inst.forward(&inst.backward(&t))?;
        out.line(format!("g(h(t)) = {back}"));
        return Ok(if back == t {
            out.line("round-trips");
            out
        } else {
            out.line(format!("differs from t = {t}"));
            out.fail()
        });
    }
    let n = ctx.flags.random.unwrap_or(25);
    let report = inst.check_with(ctx.exec(), n, ctx.flags.seed)?;
    match report.counterexample {
        None => {
            out.line(format!(
                "g(h(t)) = t on {n}/{n} samples, h(g(e)) proven equal on {n}/{n} samples"
            ));
            Ok(out)
        }
        Some(c) => {
            out.line(format!("counterexample: {c}"));
            Ok(out.fail())
        }
    }
}
