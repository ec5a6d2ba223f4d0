//! Subsets of `[n]`, families of subsets, and the convex closure operator.
//!
//! Subsets are characteristic vectors packed into a `u64`: element `i` of `[n]`
//! (1-based) is bit `i - 1`. Families keep their members sorted by that integer
//! value and free of duplicates, which is the canonical order used everywhere
//! (witness tie-breaking, JSON output, catalog order).

mod chains;

pub use chains::{abar_bruteforce, chains_through, chains_through_oracle, AbarResult};

use std::fmt;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::poset::bits;

/// Largest ground set whose subsets fit in one word.
pub const MAX_GROUND: usize = 63;

/// A subset of `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    ground: u8,
    mask: u64,
}

impl Subset {
    pub fn new(ground: usize, mask: u64) -> Result<Subset> {
        check_ground(ground)?;
        if mask & !full_mask(ground) != 0 {
            return Err(Error::Range {
                what: "subset element",
                value: 64 - mask.leading_zeros() as usize,
                limit: ground,
            });
        }
        Ok(Subset {
            ground: ground as u8,
            mask,
        })
    }

    /// Builds a subset from 1-based element labels.
    pub fn from_elements(ground: usize, elements: &[usize]) -> Result<Subset> {
        check_ground(ground)?;
        let mut mask = 0u64;
        for &e in elements {
            if e == 0 || e > ground {
                return Err(Error::Range {
                    what: "subset element",
                    value: e,
                    limit: ground,
                });
            }
            mask |= 1 << (e - 1);
        }
        Subset::new(ground, mask)
    }

    pub fn ground(&self) -> usize {
        self.ground as usize
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// 1-based element labels in increasing order.
    pub fn elements(&self) -> Vec<usize> {
        bits(self.mask).map(|i| i + 1).collect()
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.mask & !other.mask == 0
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// A set of subsets of `[n]`, deduplicated and sorted by characteristic vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    ground: usize,
    sets: Vec<u64>,
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B_{}", self.ground)?;
        f.debug_list().entries(self.subsets()).finish()
    }
}

impl Family {
    pub fn empty(ground: usize) -> Result<Family> {
        check_ground(ground)?;
        Ok(Family {
            ground,
            sets: Vec::new(),
        })
    }

    /// Builds a family from masks; duplicates collapse.
    pub fn from_masks(ground: usize, masks: impl IntoIterator<Item = u64>) -> Result<Family> {
        check_ground(ground)?;
        let full = full_mask(ground);
        let mut sets: Vec<u64> = masks.into_iter().collect();
        if let Some(bad) = sets.iter().find(|&&m| m & !full != 0) {
            return Err(Error::Range {
                what: "subset element",
                value: 64 - bad.leading_zeros() as usize,
                limit: ground,
            });
        }
        sets.sort_unstable();
        sets.dedup();
        Ok(Family { ground, sets })
    }

    pub fn from_subsets(ground: usize, subsets: &[Subset]) -> Result<Family> {
        if let Some(s) = subsets.iter().find(|s| s.ground() != ground) {
            return Err(Error::GroundMismatch {
                left: ground,
                right: s.ground(),
            });
        }
        Family::from_masks(ground, subsets.iter().map(Subset::mask))
    }

    /// Internal constructor for already sorted, deduplicated, in-range masks.
    pub(crate) fn from_sorted(ground: usize, sets: Vec<u64>) -> Family {
        debug_assert!(sets.windows(2).all(|w| w[0] < w[1]));
        Family { ground, sets }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Members as masks, in canonical order.
    pub fn masks(&self) -> &[u64] {
        &self.sets
    }

    pub fn subsets(&self) -> impl Iterator<Item = Subset> + '_ {
        self.sets.iter().map(move |&mask| Subset {
            ground: self.ground as u8,
            mask,
        })
    }

    pub fn contains_mask(&self, mask: u64) -> bool {
        self.sets.binary_search(&mask).is_ok()
    }

    /// True when every member of `self` belongs to `other`.
    pub fn is_subfamily_of(&self, other: &Family) -> bool {
        self.ground == other.ground && self.sets.iter().all(|&m| other.contains_mask(m))
    }
}

pub(crate) fn full_mask(ground: usize) -> u64 {
    if ground >= 64 {
        u64::MAX
    } else {
        (1u64 << ground) - 1
    }
}

fn check_ground(ground: usize) -> Result<()> {
    if ground > MAX_GROUND {
        Err(Error::Range {
            what: "ground size",
            value: ground,
            limit: MAX_GROUND,
        })
    } else {
        Ok(())
    }
}

fn check_cap(f: &Family, limits: &Limits) -> Result<()> {
    if f.ground > limits.enumeration_cap {
        Err(Error::Cap {
            what: "ground size",
            value: f.ground,
            cap: limits.enumeration_cap,
        })
    } else {
        Ok(())
    }
}

/// Iterates every submask of `mask`, including `0` and `mask` itself.
pub(crate) fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & mask)
        };
        Some(cur)
    })
}

// Dense membership table over all 2^n subsets.
struct Table {
    ground: usize,
    bits: Vec<u64>,
}

impl Table {
    fn new(ground: usize) -> Table {
        let words = (1usize << ground).div_ceil(64);
        Table {
            ground,
            bits: vec![0; words],
        }
    }

    fn get(&self, s: u64) -> bool {
        self.bits[(s >> 6) as usize] >> (s & 63) & 1 == 1
    }

    fn set(&mut self, s: u64) {
        self.bits[(s >> 6) as usize] |= 1 << (s & 63);
    }

    // Closes the table downward: afterwards it holds every subset of a member.
    fn close_down(&mut self) {
        let size = 1u64 << self.ground;
        for i in 0..self.ground {
            let bit = 1u64 << i;
            for s in 0..size {
                if s & bit != 0 && self.get(s) {
                    self.set(s ^ bit);
                }
            }
        }
    }

    fn masks(&self) -> Vec<u64> {
        (0..1u64 << self.ground).filter(|&s| self.get(s)).collect()
    }
}

fn sort_dedup(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    v.dedup();
    v
}

fn downset_masks(ground: usize, sets: &[u64]) -> Vec<u64> {
    let work: u128 = sets.iter().map(|m| 1u128 << m.count_ones()).sum();
    if work <= 1u128 << ground {
        sort_dedup(sets.iter().flat_map(|&m| submasks(m)).collect())
    } else {
        let mut t = Table::new(ground);
        for &m in sets {
            t.set(m);
        }
        t.close_down();
        t.masks()
    }
}

fn complement_all(ground: usize, sets: &[u64]) -> Vec<u64> {
    let full = full_mask(ground);
    sort_dedup(sets.iter().map(|m| m ^ full).collect())
}

/// `D(F)`: every subset of some member of `F`.
pub fn downset(f: &Family, limits: &Limits) -> Result<Family> {
    check_cap(f, limits)?;
    Ok(Family::from_sorted(
        f.ground,
        downset_masks(f.ground, &f.sets),
    ))
}

/// `U(F)`: every superset of some member of `F`.
pub fn upset(f: &Family, limits: &Limits) -> Result<Family> {
    check_cap(f, limits)?;
    // S contains A exactly when the complement of S lies inside the complement of A.
    let down = downset_masks(f.ground, &complement_all(f.ground, &f.sets));
    Ok(Family::from_sorted(
        f.ground,
        complement_all(f.ground, &down),
    ))
}

/// Convex closure `D(F) ∩ U(F)`: all `S` with `A ⊆ S ⊆ B` for some members `A`, `B`.
pub fn closure(f: &Family, limits: &Limits) -> Result<Family> {
    check_cap(f, limits)?;
    Ok(Family::from_sorted(
        f.ground,
        closure_masks(f.ground, &f.sets),
    ))
}

pub(crate) fn closure_masks(ground: usize, sets: &[u64]) -> Vec<u64> {
    let mut work: u128 = 0;
    for &a in sets {
        for &b in sets {
            if a & !b == 0 {
                work += 1u128 << (b ^ a).count_ones();
            }
        }
    }
    if work <= 1u128 << ground {
        let mut out = Vec::with_capacity(work as usize);
        for &a in sets {
            for &b in sets {
                if a & !b == 0 {
                    out.extend(submasks(b ^ a).map(|s| s | a));
                }
            }
        }
        sort_dedup(out)
    } else {
        let mut down = Table::new(ground);
        let mut up = Table::new(ground);
        let full = full_mask(ground);
        for &m in sets {
            down.set(m);
            up.set(m ^ full);
        }
        down.close_down();
        up.close_down();
        (0..1u64 << ground)
            .filter(|&s| down.get(s) && up.get(s ^ full))
            .collect()
    }
}

/// True when `F` equals its closure.
pub fn is_convex(f: &Family, limits: &Limits) -> Result<bool> {
    Ok(closure(f, limits)?.len() == f.len())
}

/// How a set of the first family relates to a set of the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Equal,
    /// The first set is a proper subset of the second.
    Below,
    /// The first set is a proper superset of the second.
    Above,
}

impl Relation {
    pub fn between(a: u64, b: u64) -> Option<Relation> {
        if a == b {
            Some(Relation::Equal)
        } else if a & !b == 0 {
            Some(Relation::Below)
        } else if b & !a == 0 {
            Some(Relation::Above)
        } else {
            None
        }
    }
}

/// The first related pair `(A, B, relation)` with `A` from `f1` and `B` from `f2`,
/// scanning both families in canonical order.
pub fn first_relation(f1: &Family, f2: &Family) -> Result<Option<(Subset, Subset, Relation)>> {
    if f1.ground != f2.ground {
        return Err(Error::GroundMismatch {
            left: f1.ground,
            right: f2.ground,
        });
    }
    for a in f1.subsets() {
        for b in f2.subsets() {
            if let Some(rel) = Relation::between(a.mask, b.mask) {
                return Ok(Some((a, b, rel)));
            }
        }
    }
    Ok(None)
}

/// True when no member of `f1` is contained in, contains, or equals a member of `f2`.
pub fn unrelated(f1: &Family, f2: &Family) -> Result<bool> {
    Ok(first_relation(f1, f2)?.is_none())
}
