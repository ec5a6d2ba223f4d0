//! Counting full chains of `B_n` that meet a family.
//!
//! `chains_through` evaluates the inclusion-exclusion sum over sub-chains of the
//! family. Only sub-families that are chains contribute, and the sum over all
//! chains starting at a given member factors through that member's successors:
//!
//! ```text
//! g(A) = (n - |A|)! - Σ_{B ⊃ A, B ∈ F} (|B| - |A|)! · g(B)
//! a(F) = Σ_{A ∈ F} |A|! · g(A)
//! ```
//!
//! Expanding `g` recovers every signed chain term exactly once, so the result is
//! the alternating sum term for term, evaluated in `O(|F|^2)` multiplications.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::{full_mask, Family};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::numbers::{binomial, factorials, BigNat};

/// Number of full chains of `B_n` meeting at least one member of `f`.
pub fn chains_through(f: &Family, limits: &Limits) -> Result<BigNat> {
    if f.len() > limits.chain_family_cap {
        return Err(Error::Size {
            size: f.len(),
            cap: limits.chain_family_cap,
        });
    }
    let n = f.ground();
    let fact: Vec<BigInt> = factorials(n).into_iter().map(BigInt::from).collect();
    let sets = by_size(f.masks());
    let mut g: Vec<BigInt> = vec![BigInt::zero(); sets.len()];
    let mut total = BigInt::zero();
    for i in (0..sets.len()).rev() {
        let a = sets[i];
        let size_a = a.count_ones() as usize;
        let mut acc = fact[n - size_a].clone();
        for j in i + 1..sets.len() {
            let b = sets[j];
            if a & !b == 0 {
                acc -= &fact[b.count_ones() as usize - size_a] * &g[j];
            }
        }
        total += &fact[size_a] * &acc;
        g[i] = acc;
    }
    match total.to_biguint() {
        Some(v) => Ok(v),
        None => unreachable!("chain count is non-negative"),
    }
}

/// Same sum as [`chains_through`] in fixed-width arithmetic, for `n <= 30`.
pub(crate) fn chains_through_small(n: usize, masks: &[u64], fact: &[i128]) -> i128 {
    debug_assert!(n <= 30);
    let sets = by_size(masks);
    let mut g = vec![0i128; sets.len()];
    let mut sizes = vec![0usize; sets.len()];
    let mut total = 0i128;
    for i in (0..sets.len()).rev() {
        let a = sets[i];
        let size_a = a.count_ones() as usize;
        sizes[i] = size_a;
        let mut acc = fact[n - size_a];
        for j in i + 1..sets.len() {
            if a & !sets[j] == 0 {
                acc -= fact[sizes[j] - size_a] * g[j];
            }
        }
        g[i] = acc;
        total += fact[size_a] * acc;
    }
    total
}

// Members ordered by cardinality, so containment only points forward.
fn by_size(masks: &[u64]) -> Vec<u64> {
    let mut v = masks.to_vec();
    v.sort_by_key(|m| (m.count_ones(), *m));
    v
}

/// Independent count of full chains meeting `f`: dynamic programming over the
/// subset lattice counts the maximal chains from `∅` to `[n]` that avoid `f`.
pub fn chains_through_oracle(f: &Family, limits: &Limits) -> Result<BigNat> {
    let n = f.ground();
    if n > limits.chain_oracle_cap {
        return Err(Error::Cap {
            what: "ground size",
            value: n,
            cap: limits.chain_oracle_cap,
        });
    }
    if f.is_empty() {
        return Ok(BigNat::zero());
    }
    let size = 1usize << n;
    let mut blocked = vec![false; size];
    for &m in f.masks() {
        blocked[m as usize] = true;
    }
    // n <= 20 keeps every count below 20! < 2^63
    let mut avoid = vec![0u64; size];
    for s in 0..size {
        if blocked[s] {
            continue;
        }
        avoid[s] = if s == 0 {
            1
        } else {
            let mut rest = s;
            let mut sum = 0u64;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                sum += avoid[s ^ bit];
                rest ^= bit;
            }
            sum
        };
    }
    let all: u64 = (1..=n as u64).product();
    Ok(BigNat::from(all - avoid[size - 1]))
}

/// Result of the exhaustive minimum-chain search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbarResult {
    pub value: BigNat,
    /// Lexicographically least family attaining the minimum.
    pub witness: Family,
    pub families_examined: u64,
}

/// Minimum of [`chains_through`] over all `m`-element families of `B_n`.
///
/// Families are visited as `m`-combinations of masks in lexicographic order and
/// only a strictly smaller count replaces the incumbent, so the witness is the
/// lexicographically least minimizer regardless of how work is split.
pub fn abar_bruteforce(m: usize, n: usize, limits: &Limits) -> Result<AbarResult> {
    if n > 30 {
        return Err(Error::Range {
            what: "ground size",
            value: n,
            limit: 30,
        });
    }
    let universe = 1u64 << n;
    if m == 0 || m as u64 > universe {
        return Err(Error::Range {
            what: "family size",
            value: m,
            limit: universe as usize,
        });
    }
    let required = binomial(universe, m as u64);
    let budget = BigUint::from(limits.search_budget);
    if required > budget {
        return Err(Error::Budget {
            what: "minimum-chain search",
            required: required.to_string(),
            budget: limits.search_budget,
        });
    }
    let fact: Vec<i128> = (0..=n as i128)
        .scan(1i128, |acc, i| {
            if i > 0 {
                *acc *= i;
            }
            Some(*acc)
        })
        .collect();

    let best = (0..=universe - m as u64)
        .into_par_iter()
        .map(|first| {
            let mut combo: Vec<u64> = (0..m as u64).map(|i| first + i).collect();
            let mut best: Option<(i128, Vec<u64>)> = None;
            let mut seen = 0u64;
            loop {
                seen += 1;
                let v = chains_through_small(n, &combo, &fact);
                if best.as_ref().is_none_or(|(b, _)| v < *b) {
                    best = Some((v, combo.clone()));
                }
                if !advance_tail(&mut combo, universe) {
                    break;
                }
            }
            (best, seen)
        })
        .reduce(
            || (None, 0),
            |(a, sa), (b, sb)| {
                let pick = match (a, b) {
                    (None, x) | (x, None) => x,
                    (Some(x), Some(y)) => {
                        // keep the lexicographically earlier family on ties
                        if y.0 < x.0 || (y.0 == x.0 && y.1 < x.1) {
                            Some(y)
                        } else {
                            Some(x)
                        }
                    }
                };
                (pick, sa + sb)
            },
        );
    let ((value, witness), seen) = match best {
        (Some(b), seen) => (b, seen),
        (None, _) => unreachable!("at least one family exists"),
    };
    let witness = Family::from_masks(n, witness)?;
    debug_assert!(witness.masks().iter().all(|&s| s & !full_mask(n) == 0));
    Ok(AbarResult {
        value: BigNat::from(value.to_u128().expect("count is non-negative")),
        witness,
        families_examined: seen,
    })
}

// Next combination with the same first element; false when exhausted.
fn advance_tail(combo: &mut [u64], universe: u64) -> bool {
    let m = combo.len();
    let mut i = m;
    while i > 1 {
        i -= 1;
        if combo[i] < universe - (m - i) as u64 {
            combo[i] += 1;
            for j in i + 1..m {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
