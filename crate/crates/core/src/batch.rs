//! Seeded batch loops. Sample `i` of a batch is drawn from its own generator
//! seeded by `(seed, i)`, so sequential and parallel runs give identical
//! results in identical order.

use crate::error::{Error, Result};
use crate::rb::{verify_rb_axiom, RotaBaxterAlgebra};
use crate::sample::Sampler;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// The seed of sample `index` in a batch seeded with `seed` (splitmix64).
pub fn sample_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((index as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `f(i, sampler_i)` for `i in 0..n`, in index order.
pub fn map_samples<T, F>(exec: Exec, n: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut Sampler) -> T + Sync + Send,
{
    let run = |i: usize| f(i, &mut Sampler::new(sample_seed(seed, i)));
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(run).collect();
    }
    let _ = exec;
    (0..n).map(run).collect()
}

/// Outcome of a batch of checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchReport {
    pub checked: usize,
    /// The first failing sample, by index.
    pub failure: Option<(usize, String)>,
}

impl BatchReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Runs `check` on `n` seeded samples. A check returns `Ok(None)` on success,
/// `Ok(Some(msg))` on a counterexample; the first error by index aborts.
pub fn run_checks<F>(exec: Exec, n: usize, seed: u64, check: F) -> Result<BatchReport>
where
    F: Fn(&mut Sampler) -> Result<Option<String>> + Sync + Send,
{
    let outcomes = map_samples(exec, n, seed, |_, s| check(s));
    let mut failure = None;
    for (i, o) in outcomes.into_iter().enumerate() {
        if let Some(msg) = o? {
            failure.get_or_insert((i, msg));
        }
    }
    Ok(BatchReport {
        checked: n,
        failure,
    })
}

/// The RB axiom at `lambda` on `n` sampled pairs.
pub fn rb_axiom_batch<R, G>(
    exec: Exec,
    alg: &R,
    lambda: &Scalar,
    n: usize,
    seed: u64,
    sample: G,
) -> Result<BatchReport>
where
    R: RotaBaxterAlgebra + Sync,
    R::Element: Send,
    G: Fn(&mut Sampler) -> R::Element + Sync + Send,
{
    run_checks(exec, n, seed, |s| {
        let x = sample(s);
        let y = sample(s);
        Ok(if verify_rb_axiom(alg, lambda, &x, &y)? {
            None
        } else {
            Some(format!("x = {x:?}, y = {y:?}"))
        })
    })
}

/// Turns a failing report into an error message, for callers that only care
/// about success.
pub fn expect_pass(report: &BatchReport) -> Result<()> {
    match &report.failure {
        None => Ok(()),
        Some((i, msg)) => Err(Error::Internal(format!("sample {i} failed: {msg}"))),
    }
}
