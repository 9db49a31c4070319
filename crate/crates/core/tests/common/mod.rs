#![allow(dead_code)]

use std::sync::Arc;

use rota_baxter::base::{AlgebraDescriptor, BaseOperator, UPoly};
use rota_baxter::cli::{parse_element, parse_expression, parse_localized, parse_shuffle};
use rota_baxter::free_rb::FreeRb;
use rota_baxter::localize::{RbLocalization, Variant};
use rota_baxter::presented::{normalize, Presentation};
use rota_baxter::sample::{KeyKind, Sampler};
use rota_baxter::scalar::Scalar;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
pub struct Corpus {
    pub case: Vec<Case>,
}

#[derive(Debug, Deserialize)]
pub struct Case {
    pub name: String,
    pub args: Vec<String>,
    pub exit: i32,
    pub stdout: String,
    #[serde(default)]
    pub stderr: Option<String>,
}

pub fn corpus() -> Corpus {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/cli.toml");
    toml::from_str(&std::fs::read_to_string(path).expect("golden corpus")).expect("valid corpus")
}

pub struct Ran {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[String]) -> Ran {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("rbx".to_string()).chain(args.iter().cloned());
    let code = rota_baxter::cli::run(argv, &mut out, &mut err);
    Ran {
        code,
        stdout: String::from_utf8(out).expect("utf-8"),
        stderr: String::from_utf8(err).expect("utf-8"),
    }
}

/// The first mismatch between a case and its run, if any.
pub fn mismatch(case: &Case, ran: &Ran) -> Option<String> {
    if ran.code != case.exit {
        return Some(format!(
            "{}: exit {} (expected {}), stderr {:?}",
            case.name, ran.code, case.exit, ran.stderr
        ));
    }
    if ran.stdout != case.stdout {
        return Some(format!(
            "{}: stdout {:?}, expected {:?}",
            case.name, ran.stdout, case.stdout
        ));
    }
    match &case.stderr {
        Some(want) if !ran.stderr.contains(want.as_str()) => Some(format!(
            "{}: stderr {:?} lacks {:?}",
            case.name, ran.stderr, want
        )),
        _ => None,
    }
}

fn s2() -> UPoly {
    UPoly::from_coeffs(vec![Scalar::one(), Scalar::zero(), Scalar::one()])
}

/// Prints a sampled value of kind `i % 6`, parses it back and compares.
pub fn round_trip(i: usize, s: &mut Sampler) -> Result<(), String> {
    let laurent = Arc::new(AlgebraDescriptor::laurent(&["x", "y"], "x").unwrap());
    let general = Arc::new(AlgebraDescriptor::localized(&["x", "y"], "x", &s2()).unwrap());
    let check = |printed: String, same: bool| {
        if same {
            Ok(())
        } else {
            Err(format!("{printed:?} did not round-trip"))
        }
    };
    match i % 6 {
        0 | 1 => {
            let alg = if i.is_multiple_of(6) {
                &laurent
            } else {
                &general
            };
            let a = s.element(alg, KeyKind::Any);
            let text = a.to_string();
            let back = parse_element(&text, alg).map_err(|e| e.to_string())?;
            check(text, back == a)
        }
        2 => {
            let ring = FreeRb::new(
                Arc::new(AlgebraDescriptor::polynomial(&["x", "y"]).unwrap()),
                Scalar::one(),
            );
            let u = s.shuffle_element(&ring, 3);
            let text = u.to_string();
            let back = parse_shuffle(&text, &ring).map_err(|e| e.to_string())?;
            check(text, back == u)
        }
        3 | 4 => {
            let alg = if i % 6 == 3 { &laurent } else { &general };
            let loc = RbLocalization::new(
                Arc::clone(alg),
                BaseOperator::integral(0),
                Variant::WeightZero,
            )
            .unwrap();
            let u = s.localized_element(&loc, 3);
            let text = u.to_string();
            let back = parse_localized(&text, &loc).map_err(|e| e.to_string())?;
            check(text, back == u)
        }
        _ => {
            let pres = Presentation::localization(Arc::clone(&laurent), BaseOperator::integral(0))
                .unwrap();
            let nf = normalize(&s.expression(&laurent, 3), &pres).map_err(|e| e.to_string())?;
            let text = nf.to_string();
            let e = parse_expression(&text, &laurent).map_err(|e| e.to_string())?;
            check(text, normalize(&e, &pres).map_err(|e| e.to_string())? == nf)
        }
    }
}
