//! The expression grammar:
//!
//! ```text
//! element := ['+'|'-'] term (('+'|'-') term)*
//! term    := factor ('*' factor)*
//! factor  := atom ['^' ['-'] integer]
//! atom    := integer ['/' integer] | var | 'P(' element ')'
//!          | 'T[' element (',' element)* ']' | '(' element ')'
//! ```
//!
//! `T[a₀, …, a_k]` stands for `a₀·P(a₁·P(⋯ P(a_k)⋯))`. Negative exponents
//! need an invertible base, e.g. `x^-2` in a Laurent algebra or
//! `(1 + x^2)^-1` when localizing at `1 + x^2`.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::base::{AlgebraDescriptor, AlgebraElement};
use crate::error::{Error, Result};
use crate::presented::RBExpression;
use crate::scalar::Scalar;

/// Largest accepted exponent.
pub const MAX_EXPONENT: u32 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    fn error(self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Num(Scalar),
    Var(String),
    P(Box<Node>),
    T(Vec<Node>),
    /// Terms with their signs (`true` for subtraction).
    Sum(Vec<(bool, Node)>),
    Product(Vec<Node>),
    Pow(Box<Node>, i64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub ast: Ast,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

fn lex(input: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column };
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((Tok::Int(text.parse().expect("digits")), pos));
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
        } else if "+-*/^()[],".contains(c) {
            i += 1;
            out.push((Tok::Sym(c), pos));
        } else {
            return Err(pos.error(format!("unexpected character {c:?}")));
        }
        column += i - start;
    }
    out.push((Tok::End, Pos { line, column }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{c}'")))
        }
    }

    fn unexpected(&self, wanted: &str) -> Error {
        let found = match self.peek() {
            Tok::Int(n) => format!("number {n}"),
            Tok::Ident(s) => format!("{s:?}"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::End => "end of input".to_string(),
        };
        self.pos()
            .error(format!("expected {wanted}, found {found}"))
    }

    fn element(&mut self) -> Result<Node> {
        let pos = self.pos();
        let mut terms = Vec::new();
        let mut neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            terms.push((neg, self.term()?));
            if self.eat('+') {
                neg = false;
            } else if self.eat('-') {
                neg = true;
            } else {
                break;
            }
        }
        if terms.len() == 1 && !terms[0].0 {
            return Ok(terms.pop().expect("one term").1);
        }
        Ok(Node {
            ast: Ast::Sum(terms),
            pos,
        })
    }

    fn term(&mut self) -> Result<Node> {
        let pos = self.pos();
        let mut factors = vec![self.factor()?];
        while self.eat('*') {
            factors.push(self.factor()?);
        }
        if factors.len() == 1 {
            return Ok(factors.pop().expect("one factor"));
        }
        Ok(Node {
            ast: Ast::Product(factors),
            pos,
        })
    }

    fn factor(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let pos = self.pos();
        let n = match self.bump().0 {
            Tok::Int(n) => n,
            _ => return Err(pos.error("expected an integer exponent")),
        };
        let n: u32 = match u32::try_from(&n) {
            Ok(n) if n <= MAX_EXPONENT => n,
            _ => return Err(pos.error(format!("exponent out of range (at most {MAX_EXPONENT})"))),
        };
        let n = if neg { -(n as i64) } else { n as i64 };
        Ok(Node {
            pos: base.pos,
            ast: Ast::Pow(Box::new(base), n),
        })
    }

    fn atom(&mut self) -> Result<Node> {
        let pos = self.pos();
        let ast = match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                let mut d = BigInt::from(1);
                if self.eat('/') {
                    let dpos = self.pos();
                    match self.bump().0 {
                        Tok::Int(v) if v != BigInt::from(0) => d = v,
                        Tok::Int(_) => return Err(dpos.error("zero denominator")),
                        _ => return Err(dpos.error("expected a denominator")),
                    }
                }
                Ast::Num(Scalar::from_big(n, d)?)
            }
            Tok::Ident(name) if name == "P" => {
                self.bump();
                self.expect('(')?;
                let e = self.element()?;
                self.expect(')')?;
                Ast::P(Box::new(e))
            }
            Tok::Ident(name) if name == "T" => {
                self.bump();
                self.expect('[')?;
                let mut slots = vec![self.element()?];
                while self.eat(',') {
                    slots.push(self.element()?);
                }
                self.expect(']')?;
                Ast::T(slots)
            }
            Tok::Ident(name) => {
                self.bump();
                Ast::Var(name)
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.element()?;
                self.expect(')')?;
                return Ok(Node { ast: e.ast, pos });
            }
            _ => return Err(self.unexpected("a number, variable, 'P(', 'T[' or '('")),
        };
        Ok(Node { ast, pos })
    }
}

/// Parses `input` into a syntax tree.
pub fn parse(input: &str) -> Result<Node> {
    let mut p = Parser {
        toks: lex(input)?,
        at: 0,
    };
    let e = p.element()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(e)
}

fn as_leaf(e: &RBExpression) -> Option<&AlgebraElement> {
    match e {
        RBExpression::Leaf(a) => Some(a),
        _ => None,
    }
}

fn lower(node: &Node, alg: &Arc<AlgebraDescriptor>) -> Result<RBExpression> {
    let at = |e: Error| match e {
        Error::Parse { .. } => e,
        other => node.pos.error(other.to_string()),
    };
    Ok(match &node.ast {
        Ast::Num(c) => RBExpression::leaf(AlgebraElement::constant(alg, c.clone())),
        Ast::Var(name) => RBExpression::leaf(
            AlgebraElement::variable(alg, name)
                .map_err(|_| node.pos.error(format!("unknown variable {name:?}")))?,
        ),
        Ast::P(e) => RBExpression::p(lower(e, alg)?),
        Ast::T(slots) => {
            let mut acc = lower(&slots[slots.len() - 1], alg)?;
            for s in slots[..slots.len() - 1].iter().rev() {
                let head = lower(s, alg)?;
                let inner = RBExpression::p(acc);
                acc = match as_leaf(&head) {
                    Some(a) if a.as_constant().is_some_and(|c| c.is_one()) => inner,
                    _ => RBExpression::product(vec![head, inner]),
                };
            }
            acc
        }
        Ast::Sum(terms) => {
            let items: Vec<RBExpression> = terms
                .iter()
                .map(|(neg, t)| {
                    let e = lower(t, alg)?;
                    Ok(match (neg, as_leaf(&e)) {
                        (false, _) => e,
                        (true, Some(a)) => RBExpression::leaf(a.neg()),
                        (true, None) => RBExpression::scale(Scalar::from_int(-1), e),
                    })
                })
                .collect::<Result<_>>()?;
            if items.iter().all(|e| as_leaf(e).is_some()) {
                let mut acc = AlgebraElement::zero(alg);
                for e in &items {
                    acc = acc.add(as_leaf(e).expect("leaf")).map_err(at)?;
                }
                RBExpression::leaf(acc)
            } else {
                RBExpression::sum(items)
            }
        }
        Ast::Product(factors) => {
            let items: Vec<RBExpression> = factors
                .iter()
                .map(|f| lower(f, alg))
                .collect::<Result<_>>()?;
            if items.iter().all(|e| as_leaf(e).is_some()) {
                let mut acc = AlgebraElement::one(alg);
                for e in &items {
                    acc = acc.mul(as_leaf(e).expect("leaf")).map_err(at)?;
                }
                RBExpression::leaf(acc)
            } else {
                RBExpression::product(items)
            }
        }
        Ast::Pow(base, n) => {
            let b = lower(base, alg)?;
            let m = n.unsigned_abs() as u32;
            match as_leaf(&b) {
                Some(a) => {
                    let a = if *n < 0 {
                        a.try_inverse()
                            .map_err(|_| node.pos.error(format!("{a} is not invertible here")))?
                    } else {
                        a.clone()
                    };
                    RBExpression::leaf(a.pow(m).map_err(at)?)
                }
                None if *n < 0 => {
                    return Err(node
                        .pos
                        .error("negative exponents need an element of the base algebra"))
                }
                None => RBExpression::product(vec![b; m as usize]),
            }
        }
    })
}

/// Parses `input` as an expression whose leaves live over `alg`.
pub fn parse_expression(input: &str, alg: &Arc<AlgebraDescriptor>) -> Result<RBExpression> {
    lower(&parse(input)?, alg)
}

/// Parses `input` as an element of the base algebra; `P` is rejected.
pub fn parse_element(input: &str, alg: &Arc<AlgebraDescriptor>) -> Result<AlgebraElement> {
    let node = parse(input)?;
    match lower(&node, alg)? {
        RBExpression::Leaf(a) => Ok(a),
        _ => Err(node
            .pos
            .error("expected an element of the base algebra (no P or multi-slot T)")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laurent() -> Arc<AlgebraDescriptor> {
        Arc::new(AlgebraDescriptor::laurent(&["x"], "x").unwrap())
    }

    fn var(alg: &Arc<AlgebraDescriptor>) -> RBExpression {
        RBExpression::leaf(AlgebraElement::variable(alg, "x").unwrap())
    }

    #[test]
    fn grammar_examples() {
        let alg = laurent();
        let x = var(&alg);
        assert_eq!(
            parse_expression("P(x*P(x))", &alg).unwrap(),
            RBExpression::p(RBExpression::product(vec![
                x.clone(),
                RBExpression::p(x.clone())
            ]))
        );
        let xinv = AlgebraElement::variable(&alg, "x")
            .unwrap()
            .try_inverse()
            .unwrap();
        let x2 = AlgebraElement::variable(&alg, "x").unwrap().pow(2).unwrap();
        assert_eq!(
            parse_expression("1/2*T[x^2, x^-1]", &alg).unwrap(),
            RBExpression::product(vec![
                RBExpression::leaf(AlgebraElement::constant(&alg, Scalar::ratio(1, 2).unwrap())),
                RBExpression::product(vec![
                    RBExpression::leaf(x2),
                    RBExpression::p(RBExpression::leaf(xinv.clone()))
                ])
            ])
        );
        let sum = AlgebraElement::variable(&alg, "x")
            .unwrap()
            .add(&xinv)
            .unwrap();
        assert_eq!(
            parse_expression("P(x + x^-1)", &alg).unwrap(),
            RBExpression::p(RBExpression::leaf(sum))
        );
    }

    #[test]
    fn whitespace_and_signs() {
        let alg = laurent();
        let a = parse_element(" - 2 * x ^ 2\n + 1/3 ", &alg).unwrap();
        assert_eq!(a.to_string(), "1/3 - 2*x^2");
        assert_eq!(
            parse_element("(x + 1)^2 - x^2", &alg).unwrap().to_string(),
            "1 + 2*x"
        );
        assert_eq!(parse_element("0", &alg).unwrap().to_string(), "0");
    }

    #[test]
    fn general_denominators() {
        let s = crate::base::UPoly::from_coeffs(vec![Scalar::one(), Scalar::zero(), Scalar::one()]);
        let alg = Arc::new(AlgebraDescriptor::localized(&["x"], "x", &s).unwrap());
        let a = parse_element("x*(1 + x^2)^-2", &alg).unwrap();
        assert_eq!(a.to_string(), "x*(1 + x^2)^-2");
        assert!(matches!(
            parse_element("x^-1", &alg),
            Err(Error::Parse { column: 1, .. })
        ));
    }

    fn err_at(input: &str) -> (usize, usize) {
        match parse_expression(input, &laurent()) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("expected a parse error for {input:?}, got {other:?}"),
        }
    }

    #[test]
    fn error_positions() {
        assert_eq!(err_at("x + "), (1, 5));
        assert_eq!(err_at("P(x"), (1, 4));
        assert_eq!(err_at("x +\n  y"), (2, 3));
        assert_eq!(err_at("x $ 1"), (1, 3));
        assert_eq!(err_at("x^1001"), (1, 3));
        assert_eq!(err_at("1/0"), (1, 3));
        assert_eq!(err_at("T[]"), (1, 3));
        assert_eq!(err_at("x x"), (1, 3));
        let poly = Arc::new(AlgebraDescriptor::polynomial(&["x", "y"]).unwrap());
        assert!(matches!(
            parse_expression("x + y^-1", &poly),
            Err(Error::Parse { column: 5, .. })
        ));
    }

    #[test]
    fn base_elements_reject_operators() {
        assert!(parse_element("P(x)", &laurent()).is_err());
        assert!(parse_element("T[x]", &laurent()).is_ok());
    }
}
