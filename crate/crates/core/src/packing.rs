//! Layered packing of pairwise unrelated copies of an embedded poset into `B_n`.
//!
//! Each populated layer occupies `k + 1` consecutive levels starting at its base
//! rank `b`. A layer carries an iteration index `j` and a restriction set
//! `R ⊆ [k·j]`; its copies are
//!
//! ```text
//! { R ∪ (A + k·j) ∪ B : A ∈ f(P) }   for every B ⊆ [n] \ [k(j+1)], |R| + |B| = b
//! ```
//!
//! Layers correspond one-to-one with words `V_0 … V_{j-1} E` over the letters of
//! `U = B_k \ closure(f(P))`. Sorting the words lexicographically under the
//! letter order and handing out base ranks in that order keeps every pair of
//! copies from different layers unrelated.

use std::fmt;

use rayon::prelude::*;

use crate::config::Limits;
use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::lattice::{full_mask, Family, Relation};
use crate::numbers::{binomial_signed, BigNat};
use crate::poset::bits;

/// A letter of a layer word: a subset of `[k]` outside the closure, or the end marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    Set(u64),
    End,
}

/// `V_0 V_1 … V_{j-1} E`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Number of non-end letters, the iteration index `j`.
    pub fn iteration(&self) -> usize {
        self.0.len() - 1
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            match l {
                Letter::End => f.write_str("E")?,
                Letter::Set(m) => {
                    let elems: Vec<String> = bits(*m).map(|i| (i + 1).to_string()).collect();
                    write!(f, "{{{}}}", elems.join(","))?;
                }
            }
        }
        Ok(())
    }
}

/// One populated layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerSpec {
    pub j: usize,
    /// Restriction set as sorted 1-based elements of `[k·j]`.
    pub restriction: Vec<usize>,
    pub base_rank: usize,
    pub word: Word,
}

impl LayerSpec {
    pub fn restriction_len(&self) -> usize {
        self.restriction.len()
    }
}

/// Layers of the construction, sorted by base rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingPlan {
    pub n: usize,
    pub embedding: Embedding,
    /// Closure size of the embedding's image.
    pub m: usize,
    pub iterations: usize,
    /// `U⁻`, then `E`, then `U⁺`.
    pub letters: Vec<Letter>,
    pub layers: Vec<LayerSpec>,
}

impl PackingPlan {
    pub fn k(&self) -> usize {
        self.embedding.k()
    }

    /// Number of letters other than `E`, i.e. `2^k - m`.
    pub fn branching(&self) -> usize {
        self.letters.len() - 1
    }
}

/// Orders `U = B_k \ closure`: all of `U⁻` (sets above the image), then `E`, then
/// all of `U⁺`; inside each class by decreasing size, then increasing
/// characteristic vector.
///
/// Within this order a letter never precedes one of its proper supersets,
/// and no `U⁻` letter is a subset of a `U⁺` letter.
pub fn letter_order(closure: &Family) -> Vec<Letter> {
    let k = closure.ground();
    let members = closure.masks();
    let mut lower: Vec<u64> = Vec::new();
    let mut upper: Vec<u64> = Vec::new();
    for v in 0..=full_mask(k) {
        if closure.contains_mask(v) {
            continue;
        }
        // the up-set of the closure equals the up-set of the image
        if members.iter().any(|&c| c & !v == 0) {
            lower.push(v);
        } else {
            upper.push(v);
        }
    }
    let key = |a: &u64, b: &u64| b.count_ones().cmp(&a.count_ones()).then(a.cmp(b));
    lower.sort_by(key);
    upper.sort_by(key);
    lower
        .into_iter()
        .map(Letter::Set)
        .chain(std::iter::once(Letter::End))
        .chain(upper.into_iter().map(Letter::Set))
        .collect()
}

/// Total layer count `Σ_{j<i} u^j`, saturating.
fn layer_count(u: usize, iterations: usize) -> u128 {
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for _ in 0..iterations {
        total = total.saturating_add(term);
        term = term.saturating_mul(u as u128);
    }
    total
}

/// Lays out all words of length at most `iterations` with their base ranks.
pub fn build_plan(
    embedding: &Embedding,
    n: usize,
    iterations: usize,
    limits: &Limits,
) -> Result<PackingPlan> {
    if iterations < 1 {
        return Err(Error::Iteration(iterations));
    }
    let k = embedding.k();
    let closure = embedding.closure_family();
    let m = closure.len();
    let letters = letter_order(&closure);
    let end_pos = letters
        .iter()
        .position(|l| *l == Letter::End)
        .expect("end marker present");
    let branching = letters.len() - 1;
    debug_assert_eq!(branching, (1usize << k) - m);

    let total = layer_count(branching, iterations);
    if total > limits.layer_budget as u128 {
        return Err(Error::Budget {
            what: "layer plan",
            required: total.to_string(),
            budget: limits.layer_budget,
        });
    }

    // words as sequences of positions in `letters`
    let non_end: Vec<usize> = (0..letters.len()).filter(|&p| p != end_pos).collect();
    let mut words: Vec<Vec<usize>> = Vec::with_capacity(total as usize);
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for j in 0..iterations {
        for w in &frontier {
            let mut full = w.clone();
            full.push(end_pos);
            words.push(full);
        }
        if j + 1 < iterations {
            frontier = frontier
                .iter()
                .flat_map(|w| {
                    non_end.iter().map(move |&p| {
                        let mut next = w.clone();
                        next.push(p);
                        next
                    })
                })
                .collect();
        }
    }
    // distinct words differ at or before the shorter word's end marker
    words.sort();
    let anchor = words
        .iter()
        .position(|w| w.len() == 1)
        .expect("the word E is present");

    let mut floor_need: i64 = 0;
    let mut ceil_need: i64 = 0;
    let mut pending = Vec::with_capacity(words.len());
    for (s, w) in words.iter().enumerate() {
        let j = w.len() - 1;
        let offset = (s as i64 - anchor as i64) * (k as i64 + 1);
        let mut restriction = Vec::new();
        for (p, &pos) in w[..j].iter().enumerate() {
            if let Letter::Set(v) = letters[pos] {
                restriction.extend(bits(v).map(|e| e + 1 + k * p));
            }
        }
        restriction.sort_unstable();
        let r = restriction.len() as i64;
        // floor(n/2) + offset - r >= 0
        floor_need = floor_need.max(r - offset);
        // floor(n/2) + offset + k <= n  and  floor(n/2) + offset - r <= n - k(j+1)
        ceil_need = ceil_need
            .max(offset + k as i64)
            .max(offset - r + (k * (j + 1)) as i64);
        pending.push((
            offset,
            LayerSpec {
                j,
                restriction,
                base_rank: 0,
                word: Word(w.iter().map(|&p| letters[p]).collect()),
            },
        ));
    }
    let fits = |n: i64| n / 2 >= floor_need && n - n / 2 >= ceil_need;
    if !fits(n as i64) {
        let mut n_min = 0i64;
        while !fits(n_min) {
            n_min += 1;
        }
        return Err(Error::TooSmall {
            n,
            n_min: n_min as usize,
        });
    }
    let half = (n / 2) as i64;
    let layers = pending
        .into_iter()
        .map(|(offset, mut layer)| {
            layer.base_rank = (half + offset) as usize;
            layer
        })
        .collect();
    Ok(PackingPlan {
        n,
        embedding: embedding.clone(),
        m,
        iterations,
        letters,
        layers,
    })
}

/// Exact number of copies the plan packs, and the number of sets they contain.
pub fn count_copies(plan: &PackingPlan) -> (BigNat, BigNat) {
    let k = plan.k() as i64;
    let copies: BigNat = plan
        .layers
        .iter()
        .map(|l| layer_copies(plan.n as i64, k, l))
        .sum();
    let sets = &copies * BigNat::from(plan.embedding.poset().size());
    (copies, sets)
}

fn layer_copies(n: i64, k: i64, layer: &LayerSpec) -> BigNat {
    binomial_signed(
        n - k * (layer.j as i64 + 1),
        layer.base_rank as i64 - layer.restriction_len() as i64,
    )
}

/// One packed copy: its sets in poset-element order, and the index of its layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedCopy {
    pub layer: usize,
    pub sets: Vec<u64>,
}

impl AsRef<[u64]> for PackedCopy {
    fn as_ref(&self) -> &[u64] {
        &self.sets
    }
}

/// Writes out every copy of the plan, layer by layer in plan order, with the
/// free part `B` running through combinations in increasing order.
pub fn materialize(plan: &PackingPlan, limits: &Limits) -> Result<Vec<PackedCopy>> {
    if plan.n > 63 {
        return Err(Error::Range {
            what: "ground size",
            value: plan.n,
            limit: 63,
        });
    }
    let (_, total_sets) = count_copies(plan);
    if total_sets > BigNat::from(limits.materialize_budget) {
        return Err(Error::Budget {
            what: "materialization",
            required: total_sets.to_string(),
            budget: limits.materialize_budget,
        });
    }
    let n = plan.n;
    let k = plan.k();
    let image = plan.embedding.image();
    let mut out = Vec::new();
    for (li, layer) in plan.layers.iter().enumerate() {
        let restriction = layer
            .restriction
            .iter()
            .fold(0u64, |acc, &e| acc | 1 << (e - 1));
        let shift = k * layer.j;
        let translated: Vec<u64> = image.iter().map(|&a| restriction | a << shift).collect();
        let offset = k * (layer.j + 1);
        let free = n - offset;
        let pick = layer.base_rank - layer.restriction_len();
        for b in combinations(free, pick) {
            let b = b << offset;
            out.push(PackedCopy {
                layer: li,
                sets: translated.iter().map(|&s| s | b).collect(),
            });
        }
    }
    Ok(out)
}

// All `r`-subsets of the low `width` bits, increasing (Gosper's hack).
fn combinations(width: usize, r: usize) -> impl Iterator<Item = u64> {
    let limit = if width >= 64 { u64::MAX } else { 1u64 << width };
    let mut next = if r > width {
        None
    } else if r == 0 {
        Some(0)
    } else {
        Some((1u64 << r) - 1)
    };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let low = cur & cur.wrapping_neg();
            let ripple = cur.wrapping_add(low);
            let candidate = (((ripple ^ cur) >> 2) / low) | ripple;
            if ripple == 0 || candidate >= limit {
                None
            } else {
                Some(candidate)
            }
        };
        Some(cur)
    })
}

/// Two sets from different copies that are related.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub copies: (usize, usize),
    pub sets: (u64, u64),
    /// How the first set relates to the second.
    pub relation: Relation,
}

/// A copy whose containment pattern differs from the reference image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternViolation {
    pub copy: usize,
    pub elements: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub copies: usize,
    pub sets: usize,
    pub violation: Option<Violation>,
    pub pattern_violation: Option<PatternViolation>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none() && self.pattern_violation.is_none()
    }
}

/// Checks that no set of one copy equals, contains, or lies in a set of another.
///
/// With `pattern`, also checks each copy's pairwise containment pattern against
/// the pattern's (same length, indexed by element). On failure the witness with
/// the least copy indices is reported.
pub fn verify_unrelated<C: AsRef<[u64]> + Sync>(
    copies: &[C],
    pattern: Option<&[u64]>,
) -> VerifyReport {
    let sets = copies.iter().map(|c| c.as_ref().len()).sum();
    // a set of p can only meet a set of q if p's common part fits in q's union
    let summary: Vec<(u64, u64)> = copies
        .iter()
        .map(|c| {
            let c = c.as_ref();
            let union = c.iter().fold(0, |a, &s| a | s);
            let inter = c.iter().fold(u64::MAX, |a, &s| a & s);
            (union, inter)
        })
        .collect();
    let violation = (0..copies.len()).into_par_iter().find_map_first(|p| {
        let sp = copies[p].as_ref();
        for q in p + 1..copies.len() {
            let (up, ip) = summary[p];
            let (uq, iq) = summary[q];
            if ip & !uq != 0 && iq & !up != 0 {
                continue;
            }
            for &a in sp {
                for &b in copies[q].as_ref() {
                    if let Some(relation) = Relation::between(a, b) {
                        return Some(Violation {
                            copies: (p, q),
                            sets: (a, b),
                            relation,
                        });
                    }
                }
            }
        }
        None
    });
    let pattern_violation = pattern.and_then(|pat| {
        copies.iter().enumerate().find_map(|(ci, c)| {
            let c = c.as_ref();
            if c.len() != pat.len() {
                return Some(PatternViolation {
                    copy: ci,
                    elements: (c.len(), pat.len()),
                });
            }
            for a in 0..c.len() {
                for b in 0..c.len() {
                    if a == b {
                        continue;
                    }
                    let here = Relation::between(c[a], c[b]);
                    let there = Relation::between(pat[a], pat[b]);
                    if here != there {
                        return Some(PatternViolation {
                            copy: ci,
                            elements: (a, b),
                        });
                    }
                }
            }
            None
        })
    });
    VerifyReport {
        copies: copies.len(),
        sets,
        violation,
        pattern_violation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{minimal_closure, Mode};
    use crate::poset::{Poset, StandardPoset};

    fn lim() -> Limits {
        Limits::default()
    }

    fn v_witness() -> Embedding {
        Embedding::new(
            Poset::standard(StandardPoset::V),
            2,
            vec![0b00, 0b01, 0b10],
            Mode::Weak,
        )
        .unwrap()
    }

    fn chain1_witness() -> Embedding {
        Embedding::new(
            Poset::standard(StandardPoset::Chain(1)),
            1,
            vec![0, 1],
            Mode::Weak,
        )
        .unwrap()
    }

    #[test]
    fn letter_orders() {
        assert_eq!(
            letter_order(&v_witness().closure_family()),
            vec![Letter::Set(0b11), Letter::End]
        );
        assert_eq!(
            letter_order(&chain1_witness().closure_family()),
            vec![Letter::End]
        );
        let j = Embedding::new(
            Poset::standard(StandardPoset::J),
            2,
            vec![0b00, 0b01, 0b11, 0b10],
            Mode::Weak,
        )
        .unwrap();
        assert_eq!(letter_order(&j.closure_family()), vec![Letter::End]);
    }

    #[test]
    fn letter_order_constraints() {
        // single middle set in B_3: both classes are populated
        let p = Poset::standard(StandardPoset::Antichain(1));
        let e = Embedding::new(p, 3, vec![0b011], Mode::Weak).unwrap();
        let letters = letter_order(&e.closure_family());
        let end = letters.iter().position(|l| *l == Letter::End).unwrap();
        assert_eq!(end, 1);
        assert_eq!(letters[0], Letter::Set(0b111));
        for (x, a) in letters.iter().enumerate() {
            for b in &letters[x + 1..] {
                if let (Letter::Set(a), Letter::Set(b)) = (a, b) {
                    assert!(a & !b != 0, "{a:b} precedes its superset {b:b}");
                }
            }
        }
    }

    #[test]
    fn plans_for_v() {
        let p1 = build_plan(&v_witness(), 12, 1, &lim()).unwrap();
        assert_eq!(p1.layers.len(), 1);
        assert_eq!((p1.layers[0].j, p1.layers[0].base_rank), (0, 6));
        assert!(p1.layers[0].restriction.is_empty());

        let p2 = build_plan(&v_witness(), 12, 2, &lim()).unwrap();
        assert_eq!(p2.layers.len(), 2);
        let l0 = &p2.layers[0];
        assert_eq!(
            (l0.j, l0.restriction.clone(), l0.base_rank),
            (1, vec![1, 2], 3)
        );
        assert_eq!(l0.word.to_string(), "{1,2}E");
        assert_eq!((p2.layers[1].j, p2.layers[1].base_rank), (0, 6));
    }

    #[test]
    fn full_closure_gives_one_layer() {
        let plan = build_plan(&chain1_witness(), 10, 5, &lim()).unwrap();
        assert_eq!(plan.layers.len(), 1);
    }

    #[test]
    fn copy_counts() {
        let (c, _) = count_copies(&build_plan(&v_witness(), 12, 1, &lim()).unwrap());
        assert_eq!(c, 210u32.into());
        let (c, _) = count_copies(&build_plan(&v_witness(), 12, 2, &lim()).unwrap());
        assert_eq!(c, 218u32.into());
        let (c, s) = count_copies(&build_plan(&chain1_witness(), 4, 1, &lim()).unwrap());
        assert_eq!((c, s), (3u32.into(), 6u32.into()));
    }

    #[test]
    fn plan_errors() {
        assert!(matches!(
            build_plan(&v_witness(), 12, 0, &lim()),
            Err(Error::Iteration(0))
        ));
        match build_plan(&v_witness(), 3, 3, &lim()) {
            Err(Error::TooSmall { n_min, .. }) => {
                assert!(build_plan(&v_witness(), n_min, 3, &lim()).is_ok());
                assert!(build_plan(&v_witness(), n_min - 1, 3, &lim()).is_err());
            }
            other => panic!("expected TooSmall, got {other:?}"),
        }
    }

    #[test]
    fn materialize_small() {
        let plan = build_plan(&chain1_witness(), 3, 1, &lim()).unwrap();
        let copies = materialize(&plan, &lim()).unwrap();
        let sets: Vec<Vec<u64>> = copies.iter().map(|c| c.sets.clone()).collect();
        assert_eq!(sets, vec![vec![0b010, 0b011], vec![0b100, 0b101]]);

        let b0 = minimal_closure(
            &Poset::standard(StandardPoset::Antichain(1)),
            Mode::Weak,
            None,
            &lim(),
        )
        .unwrap();
        let plan = build_plan(&b0.witness, 6, 1, &lim()).unwrap();
        let copies = materialize(&plan, &lim()).unwrap();
        assert_eq!(copies.len(), 20);
        assert!(copies.iter().all(|c| c.sets[0].count_ones() == 3));

        let plan = build_plan(&v_witness(), 6, 1, &lim()).unwrap();
        let copies = materialize(&plan, &lim()).unwrap();
        assert_eq!(copies.len(), 4);
        assert!(verify_unrelated(&copies, Some(v_witness().image())).passed());
    }

    #[test]
    fn materialize_budget() {
        let plan = build_plan(&v_witness(), 12, 1, &lim()).unwrap();
        let tight = Limits::default().with_budget(100);
        match materialize(&plan, &tight) {
            Err(Error::Budget { required, .. }) => assert_eq!(required, "630"),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn verify_catches_relations() {
        let shared = verify_unrelated(&[vec![0b00u64, 0b01], vec![0b00, 0b10]], None);
        let v = shared.violation.unwrap();
        assert_eq!(
            (v.copies, v.sets, v.relation),
            ((0, 1), (0b00, 0b00), Relation::Equal)
        );
        let nested = verify_unrelated(&[vec![0b01u64], vec![0b11]], None);
        assert_eq!(nested.violation.unwrap().relation, Relation::Below);
        assert!(verify_unrelated(&[vec![0b01u64], vec![0b10]], None).passed());
        let bad_pattern = verify_unrelated(&[vec![0b01u64, 0b10]], Some(&[0b0, 0b1]));
        assert!(bad_pattern.pattern_violation.is_some());
    }

    #[test]
    fn gosper() {
        let all: Vec<u64> = combinations(4, 2).collect();
        assert_eq!(all, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(combinations(3, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(combinations(2, 3).count(), 0);
        assert_eq!(combinations(63, 63).count(), 1);
    }
}
