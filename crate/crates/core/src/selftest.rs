//! Seeded invariant suites run by the `selftest` subcommand.
//!
//! Each suite checks a fixed number of cases, so a passing run prints the same
//! summary for every seed.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Limits;
use crate::embedding::{minimal_closure, Mode};
use crate::error::Result;
use crate::lattice::{
    abar_bruteforce, chains_through, chains_through_oracle, closure, is_convex, unrelated, Family,
};
use crate::numbers::{factorial, middle_binomial};
use crate::oracle::{gst_formula, pa_exact};
use crate::packing::{build_plan, count_copies, materialize, verify_unrelated};
use crate::poset::{Poset, StandardPoset};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: usize,
    /// First failing case, if any.
    pub failure: Option<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

type Suite = fn(&mut ChaCha8Rng, &Limits) -> Result<(usize, Option<String>)>;

const SUITES: &[(&str, Suite)] = &[
    ("closure-laws", closure_laws),
    ("chain-counts", chain_counts),
    ("abar-small", abar_small),
    ("closure-values", closure_values),
    ("construction", construction),
    ("oracle", oracle_values),
];

/// Runs every suite with its own generator derived from `seed`.
pub fn run(seed: u64, limits: &Limits) -> Vec<SuiteOutcome> {
    SUITES
        .iter()
        .enumerate()
        .map(|(i, (name, suite))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let (cases, failure) = match suite(&mut rng, limits) {
                Ok(r) => r,
                Err(e) => (0, Some(format!("error: {e}"))),
            };
            SuiteOutcome {
                name,
                cases,
                failure,
            }
        })
        .collect()
}

/// A random family on `[n]` with at most `max_len` members.
pub fn random_family(rng: &mut impl Rng, n: usize, max_len: usize) -> Family {
    let len = rng.gen_range(0..=max_len);
    let top = 1u64 << n;
    Family::from_masks(n, (0..len).map(|_| rng.gen_range(0..top))).expect("n is small")
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Option<String> {
    (!cond).then(what)
}

fn closure_laws(rng: &mut ChaCha8Rng, limits: &Limits) -> Result<(usize, Option<String>)> {
    let cases = 500;
    for _ in 0..cases {
        let n = rng.gen_range(1..=10);
        let f = random_family(rng, n, 6);
        let extra = random_family(rng, n, 3);
        let g = Family::from_masks(n, f.masks().iter().chain(extra.masks()).copied())?;
        let cf = closure(&f, limits)?;
        let cg = closure(&g, limits)?;
        let fail = check(f.is_subfamily_of(&cf), || format!("not extensive on {f:?}"))
            .or_else(|| {
                check(cf.is_subfamily_of(&cg), || {
                    format!("not monotone on {f:?} ⊆ {g:?}")
                })
            })
            .or_else(|| {
                check(closure(&cf, limits).ok() == Some(cf.clone()), || {
                    format!("not idempotent on {f:?}")
                })
            })
            .or_else(|| {
                check(is_convex(&cf, limits).unwrap_or(false), || {
                    format!("closure of {f:?} not convex")
                })
            });
        if fail.is_some() {
            return Ok((cases, fail));
        }
        // a partner made only of sets unrelated to every member of f
        let partner: Vec<u64> = random_family(rng, n, 8)
            .masks()
            .iter()
            .copied()
            .filter(|&s| f.masks().iter().all(|&t| s & t != s && s & t != t))
            .collect();
        let h = Family::from_masks(n, partner)?;
        if unrelated(&f, &h)? && !unrelated(&cf, &closure(&h, limits)?)? {
            return Ok((
                cases,
                Some(format!("closures of {f:?} and {h:?} are related")),
            ));
        }
    }
    Ok((cases, None))
}

fn chain_counts(rng: &mut ChaCha8Rng, limits: &Limits) -> Result<(usize, Option<String>)> {
    let cases = 200;
    for _ in 0..cases {
        let n = rng.gen_range(1..=10);
        let f = random_family(rng, n, 6);
        let fast = chains_through(&f, limits)?;
        let dp = chains_through_oracle(&f, limits)?;
        if fast != dp {
            return Ok((cases, Some(format!("{f:?}: {fast} vs {dp}"))));
        }
        let full = (1u64 << n) - 1;
        let m = f.len();
        if m > 0 && n > (1 << m) && !f.contains_mask(0) && !f.contains_mask(full) {
            // (1 - 2^m/n) Σ |A|!(n-|A|)! ≤ a(F), scaled by n
            let single: BigUint = f
                .masks()
                .iter()
                .map(|&a| {
                    let s = a.count_ones() as usize;
                    factorial(s) * factorial(n - s)
                })
                .sum();
            let lhs = single * BigUint::from(n - (1 << m));
            if lhs > fast * BigUint::from(n) {
                return Ok((cases, Some(format!("lower bound fails on {f:?}"))));
            }
        }
    }
    Ok((cases, None))
}

fn abar_small(_: &mut ChaCha8Rng, limits: &Limits) -> Result<(usize, Option<String>)> {
    let mut cases = 0;
    for n in 2..=5 {
        cases += 1;
        let got = abar_bruteforce(1, n, limits)?.value;
        let want = factorial(n / 2) * factorial(n - n / 2);
        if got != want {
            return Ok((cases, Some(format!("abar(1,{n}) = {got}, expected {want}"))));
        }
    }
    Ok((cases, None))
}

fn closure_values(_: &mut ChaCha8Rng, limits: &Limits) -> Result<(usize, Option<String>)> {
    use StandardPoset::*;
    let table = [
        (Antichain(1), Mode::Weak, 1),
        (V, Mode::Weak, 3),
        (Lambda, Mode::Weak, 3),
        (Chain(1), Mode::Weak, 2),
        (Chain(2), Mode::Weak, 4),
        (Chain(3), Mode::Weak, 8),
        (J, Mode::Weak, 4),
        (J, Mode::Strong, 5),
    ];
    for (i, (p, mode, want)) in table.iter().enumerate() {
        let cert = minimal_closure(&Poset::standard(*p), *mode, None, limits)?;
        if cert.m != *want {
            return Ok((i + 1, Some(format!("{p} ({mode}): {} != {want}", cert.m))));
        }
    }
    Ok((table.len(), None))
}

fn construction(_: &mut ChaCha8Rng, limits: &Limits) -> Result<(usize, Option<String>)> {
    let cases = [
        (StandardPoset::V, Mode::Weak, 12, 1),
        (StandardPoset::V, Mode::Weak, 12, 2),
        (StandardPoset::J, Mode::Strong, 14, 1),
    ];
    for (p, mode, n, iters) in cases {
        let poset = Poset::standard(p);
        let cert = minimal_closure(&poset, mode, None, limits)?;
        let plan = build_plan(&cert.witness, n, iters, limits)?;
        let copies = materialize(&plan, limits)?;
        let (count, _) = count_copies(&plan);
        if BigUint::from(copies.len()) != count {
            return Ok((cases.len(), Some(format!("{p} n={n}: count mismatch"))));
        }
        let pattern = (mode == Mode::Strong).then(|| cert.witness.image().to_vec());
        let report = verify_unrelated(&copies, pattern.as_deref());
        if !report.passed() {
            return Ok((
                cases.len(),
                Some(format!("{p} n={n} i={iters}: {report:?}")),
            ));
        }
    }
    Ok((cases.len(), None))
}

fn oracle_values(_: &mut ChaCha8Rng, limits: &Limits) -> Result<(usize, Option<String>)> {
    let point = Poset::standard(StandardPoset::Antichain(1));
    let pair = Poset::standard(StandardPoset::Chain(1));
    let mut cases = 0;
    for n in 1..=4 {
        cases += 1;
        let got = pa_exact(&point, n, Mode::Weak, limits)?.size;
        if BigUint::from(got) != middle_binomial(n as u64) {
            return Ok((cases, Some(format!("antichain packing at n={n}: {got}"))));
        }
    }
    for n in 2..=3 {
        cases += 1;
        let got = pa_exact(&pair, n, Mode::Weak, limits)?.size;
        if BigUint::from(got) != gst_formula(1, n)? {
            return Ok((cases, Some(format!("chain packing at n={n}: {got}"))));
        }
    }
    Ok((cases, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_and_are_seed_independent() {
        let a = run(1, &Limits::default());
        let b = run(2, &Limits::default());
        for s in &a {
            assert!(s.passed(), "{s:?}");
        }
        let summary = |v: &[SuiteOutcome]| v.iter().map(|s| (s.name, s.cases)).collect::<Vec<_>>();
        assert_eq!(summary(&a), summary(&b));
    }
}
