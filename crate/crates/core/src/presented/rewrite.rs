use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::base::{check_same, push_term, AlgebraDescriptor, BasisKey};
use crate::error::{Error, Result};
use crate::free_rb::{check_len, DisplayTerms, TensorWord};
use crate::linear::{add_scaled, add_term, scaled, Terms};
use crate::presented::expr::RBExpression;
use crate::presented::presentation::Presentation;
use crate::rb::RotaBaxterAlgebra;
use crate::scalar::Scalar;

/// `leaf · P(ps[0]) · P(ps[1]) ⋯` with the P-arguments sorted, so that
/// commutativity is built into equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Mono {
    leaf: BasisKey,
    ps: Vec<Mono>,
}

type Lin = Terms<Mono>;

impl Mono {
    fn leaf(leaf: BasisKey) -> Self {
        Mono {
            leaf,
            ps: Vec::new(),
        }
    }

    fn new(leaf: BasisKey, mut ps: Vec<Mono>) -> Self {
        ps.sort();
        Mono { leaf, ps }
    }

    fn from_word(w: &TensorWord) -> Self {
        let slots = w.slots();
        let mut acc = Mono::leaf(slots[slots.len() - 1].clone());
        for k in slots[..slots.len() - 1].iter().rev() {
            acc = Mono {
                leaf: k.clone(),
                ps: vec![acc],
            };
        }
        acc
    }

    /// The word of a chain `a₀·P(a₁·P(⋯))`.
    fn to_word(&self) -> Option<TensorWord> {
        let mut slots = vec![self.leaf.clone()];
        let mut cur = self;
        while let Some(next) = cur.ps.first() {
            if cur.ps.len() > 1 {
                return None;
            }
            slots.push(next.leaf.clone());
            cur = next;
        }
        TensorWord::new(slots).ok()
    }

    fn chain_len(&self) -> usize {
        1 + self.ps.iter().map(Mono::chain_len).max().unwrap_or(0)
    }
}

fn fmt_mono(alg: &AlgebraDescriptor, m: &Mono) -> String {
    let mut parts = Vec::new();
    if !m.leaf.is_unit() || m.ps.is_empty() {
        parts.push(alg.format_key(&m.leaf));
    }
    for p in &m.ps {
        parts.push(format!("P({})", fmt_mono(alg, p)));
    }
    parts.join("*")
}

fn fmt_lin(alg: &AlgebraDescriptor, lin: &Lin) -> String {
    if lin.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (m, c) in lin {
        push_term(&mut out, c, &fmt_mono(alg, m));
    }
    out
}

/// The order in which redexes are contracted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Normalize P-arguments first, then evaluate, then merge products of
    /// P-terms.
    #[default]
    Innermost,
    /// Merge products of P-terms by the Rota-Baxter identity before looking
    /// inside their arguments.
    RbFirst,
}

struct Engine<'a> {
    pres: &'a Presentation,
    alg: &'a AlgebraDescriptor,
    strategy: Strategy,
    unit: BasisKey,
    steps: usize,
    trace: Option<Vec<String>>,
    norm_memo: HashMap<Mono, Lin>,
    p_memo: HashMap<Mono, Lin>,
    rb_memo: HashMap<(Mono, Mono), Lin>,
}

impl<'a> Engine<'a> {
    fn new(pres: &'a Presentation, strategy: Strategy, trace: bool) -> Self {
        Engine {
            pres,
            alg: pres.carrier(),
            strategy,
            unit: pres.carrier().unit_key(),
            steps: 0,
            trace: trace.then(Vec::new),
            norm_memo: HashMap::new(),
            p_memo: HashMap::new(),
            rb_memo: HashMap::new(),
        }
    }

    fn step(&mut self, rule: &str, before: &str, after: &Lin) -> Result<()> {
        self.steps += 1;
        if let Some(t) = &mut self.trace {
            t.push(format!(
                "step {}: {}: {} => {}",
                self.steps,
                rule,
                before,
                fmt_lin(self.alg, after)
            ));
        }
        let limit = self.pres.limits().max_steps;
        if self.steps > limit {
            return Err(Error::StepLimit {
                limit,
                trace: self.trace.clone().unwrap_or_default(),
            });
        }
        Ok(())
    }

    fn mono_mul(&self, a: &Mono, b: &Mono) -> Lin {
        let mut ps = a.ps.clone();
        ps.extend(b.ps.iter().cloned());
        let ps_sorted = Mono::new(self.unit.clone(), ps).ps;
        let mut out = Lin::new();
        for (k, c) in self.alg.mul_keys(&a.leaf, &b.leaf) {
            add_term(
                &mut out,
                Mono {
                    leaf: k,
                    ps: ps_sorted.clone(),
                },
                c,
            );
        }
        out
    }

    fn lin_mul_raw(&self, a: &Lin, b: &Lin) -> Lin {
        let mut out = Lin::new();
        for (x, cx) in a {
            for (y, cy) in b {
                add_scaled(&mut out, &(cx * cy), &self.mono_mul(x, y));
            }
        }
        out
    }

    /// Linearity and distributivity, applied eagerly.
    fn expand(&self, e: &RBExpression) -> Result<Lin> {
        Ok(match e {
            RBExpression::Leaf(a) => {
                check_same(self.pres.carrier(), a.algebra())?;
                a.terms()
                    .iter()
                    .map(|(k, c)| (Mono::leaf(k.clone()), c.clone()))
                    .collect()
            }
            RBExpression::Sum(items) => {
                let mut out = Lin::new();
                for e in items {
                    add_scaled(&mut out, &Scalar::one(), &self.expand(e)?);
                }
                out
            }
            RBExpression::Scale(c, e) => scaled(c, &self.expand(e)?),
            RBExpression::Product(items) => {
                let mut out: Lin = [(Mono::leaf(self.unit.clone()), Scalar::one())].into();
                for e in items {
                    out = self.lin_mul_raw(&out, &self.expand(e)?);
                }
                out
            }
            RBExpression::PNode(e) => self
                .expand(e)?
                .into_iter()
                .map(|(m, c)| (Mono::new(self.unit.clone(), vec![m]), c))
                .collect(),
        })
    }

    fn norm_lin(&mut self, lin: &Lin) -> Result<Lin> {
        let mut out = Lin::new();
        for (m, c) in lin {
            let n = self.norm_mono(m)?;
            add_scaled(&mut out, c, &n);
        }
        Ok(out)
    }

    /// `leaf · f` for a normal `f`; stays normal.
    fn leaf_times(&self, leaf: &BasisKey, f: &Lin) -> Lin {
        let m = Mono::leaf(leaf.clone());
        let mut out = Lin::new();
        for (n, c) in f {
            add_scaled(&mut out, c, &self.mono_mul(&m, n));
        }
        out
    }

    /// `P` of a normal combination, in normal form.
    fn p_lin(&mut self, lin: &Lin) -> Result<Lin> {
        let mut out = Lin::new();
        for (n, c) in lin {
            let image = self.p_of(n)?;
            add_scaled(&mut out, c, &image);
        }
        Ok(out)
    }

    fn norm_mono(&mut self, m: &Mono) -> Result<Lin> {
        if let Some(hit) = self.norm_memo.get(m) {
            return Ok(hit.clone());
        }
        let out = match self.strategy {
            Strategy::Innermost => {
                let mut acc: Lin = [(Mono::leaf(m.leaf.clone()), Scalar::one())].into();
                for arg in &m.ps {
                    let arg_n = self.norm_mono(arg)?;
                    let factor = self.p_lin(&arg_n)?;
                    acc = self.mul_normal(&acc, &factor)?;
                }
                acc
            }
            Strategy::RbFirst => {
                if m.ps.len() >= 2 {
                    let (x, y) = (&m.ps[0], &m.ps[1]);
                    let rest = &m.ps[2..];
                    let with = |arg: Mono| {
                        let mut ps = rest.to_vec();
                        ps.push(arg);
                        Mono::new(m.leaf.clone(), ps)
                    };
                    let mut next = Lin::new();
                    let mut xpy = x.ps.clone();
                    xpy.push(y.clone());
                    add_term(
                        &mut next,
                        with(Mono::new(x.leaf.clone(), xpy)),
                        Scalar::one(),
                    );
                    let mut pxy = y.ps.clone();
                    pxy.push(x.clone());
                    add_term(
                        &mut next,
                        with(Mono::new(y.leaf.clone(), pxy)),
                        Scalar::one(),
                    );
                    let lambda = self.pres.weight().clone();
                    if !lambda.is_zero() {
                        for (z, c) in self.mono_mul(x, y) {
                            add_term(&mut next, with(z), &lambda * &c);
                        }
                    }
                    let before = fmt_mono(self.alg, m);
                    self.step("rb", &before, &next)?;
                    self.norm_lin(&next)?
                } else if let Some(arg) = m.ps.first() {
                    let arg_n = self.norm_mono(arg)?;
                    let factor = self.p_lin(&arg_n)?;
                    self.leaf_times(&m.leaf, &factor)
                } else {
                    [(m.clone(), Scalar::one())].into()
                }
            }
        };
        self.norm_memo.insert(m.clone(), out.clone());
        Ok(out)
    }

    /// Product of two normal combinations, merging P-terms by the
    /// Rota-Baxter identity.
    fn mul_normal(&mut self, a: &Lin, b: &Lin) -> Result<Lin> {
        let mut out = Lin::new();
        for (x, cx) in a {
            for (y, cy) in b {
                let c = cx * cy;
                if x.ps.is_empty() || y.ps.is_empty() {
                    add_scaled(&mut out, &c, &self.mono_mul(x, y));
                    continue;
                }
                let merged = self.merge_p(&x.ps[0], &y.ps[0])?;
                let leaves: Lin = self
                    .alg
                    .mul_keys(&x.leaf, &y.leaf)
                    .into_iter()
                    .map(|(k, c)| (Mono::leaf(k), c))
                    .collect();
                for (l, cl) in &leaves {
                    add_scaled(&mut out, &(&c * cl), &self.leaf_times(&l.leaf, &merged));
                }
            }
        }
        Ok(out)
    }

    /// `P(x)·P(y) = P(x·P(y)) + P(P(x)·y) + λ P(x·y)` for normal `x`, `y`.
    fn merge_p(&mut self, x: &Mono, y: &Mono) -> Result<Lin> {
        let key = if x <= y {
            (x.clone(), y.clone())
        } else {
            (y.clone(), x.clone())
        };
        if let Some(hit) = self.rb_memo.get(&key) {
            return Ok(hit.clone());
        }
        let mut inner = Lin::new();
        let mut xpy = x.ps.clone();
        xpy.push(y.clone());
        add_term(&mut inner, Mono::new(x.leaf.clone(), xpy), Scalar::one());
        let mut pxy = y.ps.clone();
        pxy.push(x.clone());
        add_term(&mut inner, Mono::new(y.leaf.clone(), pxy), Scalar::one());
        let lambda = self.pres.weight().clone();
        if !lambda.is_zero() {
            add_scaled(&mut inner, &lambda, &self.mono_mul(x, y));
        }
        let before = format!("P({})*P({})", fmt_mono(self.alg, x), fmt_mono(self.alg, y));
        let unnormal: Lin = inner
            .iter()
            .map(|(m, c)| (Mono::new(self.unit.clone(), vec![m.clone()]), c.clone()))
            .collect();
        self.step("rb", &before, &unnormal)?;
        let inner_n = self.norm_lin(&inner)?;
        let out = self.p_lin(&inner_n)?;
        self.rb_memo.insert(key, out.clone());
        Ok(out)
    }

    /// `P(n)` for a normal monomial `n`, in normal form.
    fn p_of(&mut self, n: &Mono) -> Result<Lin> {
        if let Some(hit) = self.p_memo.get(n) {
            return Ok(hit.clone());
        }
        let evaluable = n.ps.len() <= 1 && self.pres.is_evaluable(&n.leaf);
        let out = if !evaluable {
            check_len(n.chain_len() + 1, self.pres.limits().max_word_len)?;
            [(Mono::new(self.unit.clone(), vec![n.clone()]), Scalar::one())].into()
        } else {
            let image = self
                .pres
                .evaluate_key(&n.leaf)?
                .ok_or_else(|| Error::Internal("evaluable key without image".into()))?;
            let before = format!("P({})", fmt_mono(self.alg, n));
            match n.ps.first() {
                None => {
                    let out: Lin = image.into_iter().map(|(k, c)| (Mono::leaf(k), c)).collect();
                    self.step("eval", &before, &out)?;
                    out
                }
                Some(w) => {
                    // P(a·P(w)) = P_A(a)·P(w) − P(P_A(a)·w) − λ P(a·w)
                    let mut out = Lin::new();
                    let pw: Lin =
                        [(Mono::new(self.unit.clone(), vec![w.clone()]), Scalar::one())].into();
                    let minus = Scalar::from_int(-1);
                    for (h, ch) in &image {
                        add_scaled(&mut out, ch, &self.leaf_times(h, &pw));
                    }
                    let mut recurse = Lin::new();
                    for (h, ch) in &image {
                        for (k, ck) in self.alg.mul_keys(h, &w.leaf) {
                            add_term(
                                &mut recurse,
                                Mono::new(k, w.ps.clone()),
                                &minus * &(ch * &ck),
                            );
                        }
                    }
                    let lambda = self.pres.weight().clone();
                    if !lambda.is_zero() {
                        for (k, ck) in self.alg.mul_keys(&n.leaf, &w.leaf) {
                            add_term(&mut recurse, Mono::new(k, w.ps.clone()), -(&lambda * &ck));
                        }
                    }
                    let mut shown = out.clone();
                    for (m, c) in &recurse {
                        add_term(
                            &mut shown,
                            Mono::new(self.unit.clone(), vec![m.clone()]),
                            c.clone(),
                        );
                    }
                    self.step("eval-rb", &before, &shown)?;
                    let tail = self.p_lin(&recurse)?;
                    add_scaled(&mut out, &Scalar::one(), &tail);
                    out
                }
            }
        };
        self.p_memo.insert(n.clone(), out.clone());
        Ok(out)
    }

    /// No rule applies anywhere: every monomial is a chain whose inner
    /// leaves admit no evaluation.
    fn scan(&self, lin: &Lin) -> Result<Terms<TensorWord>> {
        let mut out = Terms::new();
        for (m, c) in lin {
            let mut cur = m;
            while let Some(arg) = cur.ps.first() {
                if cur.ps.len() > 1 || self.pres.is_evaluable(&arg.leaf) && arg.ps.len() <= 1 {
                    return Err(Error::Internal(format!(
                        "rewriting stopped at a reducible term {}",
                        fmt_mono(self.alg, m)
                    )));
                }
                cur = arg;
            }
            let w = m
                .to_word()
                .ok_or_else(|| Error::Internal("non-chain normal form".into()))?;
            check_len(w.len(), self.pres.limits().max_word_len)?;
            add_term(&mut out, w, c.clone());
        }
        Ok(out)
    }
}

/// A fixpoint of the rewriting system, read out as tensor words over the
/// presentation carrier.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pres: Arc<Presentation>,
    terms: Terms<TensorWord>,
}

impl PartialEq for NormalForm {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.pres, &other.pres) || self.pres == other.pres)
            && self.terms == other.terms
    }
}

impl NormalForm {
    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn terms(&self) -> &Terms<TensorWord> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Re-lift as an expression through the reconstruction identity.
    pub fn to_expression(&self) -> RBExpression {
        RBExpression::from_terms(self.pres.carrier(), &self.terms)
    }

    fn lin(&self) -> Lin {
        self.terms
            .iter()
            .map(|(w, c)| (Mono::from_word(w), c.clone()))
            .collect()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.pres, &other.pres) || self.pres == other.pres {
            Ok(())
        } else {
            Err(Error::domain(
                "normal forms belong to different presentations",
            ))
        }
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        DisplayTerms {
            alg: self.pres.carrier(),
            terms: &self.terms,
        }
        .fmt(f)
    }
}

/// The outcome of a normalization run.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub form: NormalForm,
    pub steps: usize,
    pub trace: Vec<String>,
}

pub fn normalize(e: &RBExpression, pres: &Arc<Presentation>) -> Result<NormalForm> {
    Ok(normalize_with(e, pres, Strategy::Innermost, false)?.form)
}

pub fn normalize_with(
    e: &RBExpression,
    pres: &Arc<Presentation>,
    strategy: Strategy,
    trace: bool,
) -> Result<Normalized> {
    let mut engine = Engine::new(pres, strategy, trace);
    let lin = engine.expand(e)?;
    let normal = engine.norm_lin(&lin)?;
    let terms = engine.scan(&normal)?;
    Ok(Normalized {
        form: NormalForm {
            pres: Arc::clone(pres),
            terms,
        },
        steps: engine.steps,
        trace: engine.trace.unwrap_or_default(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    ProvenEqual,
    /// The normal forms differ. This is not a proof of inequality.
    NotProven,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EqualityVerdict {
    pub status: Verdict,
    pub left: NormalForm,
    pub right: NormalForm,
}

impl EqualityVerdict {
    pub fn from_forms(left: NormalForm, right: NormalForm) -> Self {
        let status = if left == right {
            Verdict::ProvenEqual
        } else {
            Verdict::NotProven
        };
        EqualityVerdict {
            status,
            left,
            right,
        }
    }

    pub fn is_proven(&self) -> bool {
        self.status == Verdict::ProvenEqual
    }
}

pub fn equal_mod_ideal(
    a: &RBExpression,
    b: &RBExpression,
    pres: &Arc<Presentation>,
) -> Result<EqualityVerdict> {
    Ok(EqualityVerdict::from_forms(
        normalize(a, pres)?,
        normalize(b, pres)?,
    ))
}

/// Builds a normal form from words that are already irreducible.
pub(crate) fn normal_form_of(
    pres: &Arc<Presentation>,
    terms: Terms<TensorWord>,
) -> Result<NormalForm> {
    let engine = Engine::new(pres, Strategy::Innermost, false);
    let lin: Lin = terms
        .iter()
        .map(|(w, c)| (Mono::from_word(w), c.clone()))
        .collect();
    let terms = engine.scan(&lin)?;
    Ok(NormalForm {
        pres: Arc::clone(pres),
        terms,
    })
}

/// The presented quotient as a Rota-Baxter algebra on its normal forms.
impl RotaBaxterAlgebra for Arc<Presentation> {
    type Element = NormalForm;

    fn weight(&self) -> &Scalar {
        Presentation::weight(self)
    }

    fn zero(&self) -> NormalForm {
        NormalForm {
            pres: Arc::clone(self),
            terms: Terms::new(),
        }
    }

    fn one(&self) -> NormalForm {
        let mut terms = Terms::new();
        add_term(
            &mut terms,
            TensorWord::single(self.carrier().unit_key()),
            Scalar::one(),
        );
        NormalForm {
            pres: Arc::clone(self),
            terms,
        }
    }

    fn add(&self, a: &NormalForm, b: &NormalForm) -> Result<NormalForm> {
        a.check(b)?;
        let mut terms = a.terms.clone();
        add_scaled(&mut terms, &Scalar::one(), &b.terms);
        Ok(NormalForm {
            pres: Arc::clone(&a.pres),
            terms,
        })
    }

    fn scale(&self, c: &Scalar, a: &NormalForm) -> NormalForm {
        NormalForm {
            pres: Arc::clone(&a.pres),
            terms: scaled(c, &a.terms),
        }
    }

    fn mul(&self, a: &NormalForm, b: &NormalForm) -> Result<NormalForm> {
        a.check(b)?;
        let mut engine = Engine::new(self, Strategy::Innermost, false);
        let prod = engine.mul_normal(&a.lin(), &b.lin())?;
        Ok(NormalForm {
            pres: Arc::clone(self),
            terms: engine.scan(&prod)?,
        })
    }

    fn apply_p(&self, a: &NormalForm) -> Result<NormalForm> {
        let mut engine = Engine::new(self, Strategy::Innermost, false);
        let image = engine.p_lin(&a.lin())?;
        Ok(NormalForm {
            pres: Arc::clone(self),
            terms: engine.scan(&image)?,
        })
    }
}
