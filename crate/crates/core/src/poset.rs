//! Finite strict partial orders on integer-labeled elements.
//!
//! A [`Poset`] stores both the cover relation (the transitive reduction) and the
//! full strict order as one bit row per element, so comparisons are O(1).

use std::fmt;

use crate::error::{Error, Result};

/// Largest poset representable with one machine word per relation row.
pub const MAX_POSET_SIZE: usize = 64;

/// A finite strict partial order on `0..size`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    size: usize,
    covers: Vec<(usize, usize)>,
    // less[a] has bit b set iff a < b
    less: Vec<u64>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("size", &self.size)
            .field("covers", &self.covers)
            .finish()
    }
}

/// Named posets used throughout the tests and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardPoset {
    /// `k + 1` elements in a single chain.
    Chain(usize),
    /// `t` pairwise incomparable elements.
    Antichain(usize),
    /// `0 < 1`, `0 < 2`.
    V,
    /// `1 < 0`, `2 < 0`.
    Lambda,
    /// `0 < 1 < 2`, `0 < 3`.
    J,
    /// Containment order on all subsets of `[k]`; element `i` is the subset with mask `i`.
    Boolean(usize),
}

impl Poset {
    /// Builds a poset from any generating set of ordered pairs `(a, b)` meaning `a < b`.
    ///
    /// The stored covers are the transitive reduction regardless of how many implied
    /// pairs the input lists.
    pub fn new(size: usize, relations: &[(usize, usize)]) -> Result<Poset> {
        if size > MAX_POSET_SIZE {
            return Err(Error::Range {
                what: "poset size",
                value: size,
                limit: MAX_POSET_SIZE,
            });
        }
        let mut less = vec![0u64; size];
        for &(a, b) in relations {
            for x in [a, b] {
                if x >= size {
                    return Err(Error::Range {
                        what: "element label",
                        value: x,
                        limit: size.saturating_sub(1),
                    });
                }
            }
            if a == b {
                return Err(Error::Cycle { element: a });
            }
            less[a] |= 1 << b;
        }
        // Warshall on bit rows
        for k in 0..size {
            let row_k = less[k];
            for row in less.iter_mut() {
                if *row >> k & 1 == 1 {
                    *row |= row_k;
                }
            }
        }
        if let Some(a) = (0..size).find(|&a| less[a] >> a & 1 == 1) {
            return Err(Error::Cycle { element: a });
        }
        let mut covers = Vec::new();
        for a in 0..size {
            let mut above = less[a];
            while above != 0 {
                let b = above.trailing_zeros() as usize;
                above &= above - 1;
                // b covers a unless some c with a < c < b exists
                let between = less[a] & !(1u64 << b);
                let implied = bits(between).any(|c| less[c] >> b & 1 == 1);
                if !implied {
                    covers.push((a, b));
                }
            }
        }
        Ok(Poset { size, covers, less })
    }

    pub fn standard(which: StandardPoset) -> Poset {
        let build = |size: usize, rel: Vec<(usize, usize)>| {
            Poset::new(size, &rel).expect("standard posets are valid")
        };
        match which {
            StandardPoset::Chain(k) => build(k + 1, (0..k).map(|i| (i, i + 1)).collect()),
            StandardPoset::Antichain(t) => build(t, vec![]),
            StandardPoset::V => build(3, vec![(0, 1), (0, 2)]),
            StandardPoset::Lambda => build(3, vec![(1, 0), (2, 0)]),
            StandardPoset::J => build(4, vec![(0, 1), (1, 2), (0, 3)]),
            StandardPoset::Boolean(k) => {
                let count = 1usize << k;
                let mut rel = Vec::new();
                for s in 0..count {
                    for i in 0..k {
                        if s >> i & 1 == 0 {
                            rel.push((s, s | 1 << i));
                        }
                    }
                }
                build(count, rel)
            }
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Cover pairs `(a, b)`, `b` covering `a`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// `a < b` in the strict order.
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.less[a] >> b & 1 == 1
    }

    /// Elements strictly above `a`, as a bit row.
    pub fn up_row(&self, a: usize) -> u64 {
        self.less[a]
    }

    /// Elements strictly below `b`, as a bit row.
    pub fn down_row(&self, b: usize) -> u64 {
        (0..self.size)
            .filter(|&a| self.less(a, b))
            .fold(0, |acc, a| acc | 1 << a)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.less(a, b) || self.less(b, a)
    }

    /// Number of elements in a longest chain, minus one. Zero for the empty poset.
    pub fn height(&self) -> usize {
        let order = self.linear_extension();
        let mut depth = vec![0usize; self.size];
        for &b in &order {
            depth[b] = bits(self.down_row(b))
                .map(|a| depth[a] + 1)
                .max()
                .unwrap_or(0);
        }
        depth.into_iter().max().unwrap_or(0)
    }

    /// The lexicographically least linear extension (smallest available label first).
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut placed = 0u64;
        let mut order = Vec::with_capacity(self.size);
        while order.len() < self.size {
            let next = (0..self.size)
                .find(|&b| placed >> b & 1 == 0 && self.down_row(b) & !placed == 0)
                .expect("acyclic order always has a minimal element");
            placed |= 1 << next;
            order.push(next);
        }
        order
    }
}

/// Iterates the set bit positions of `word`, lowest first.
pub(crate) fn bits(mut word: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if word == 0 {
            None
        } else {
            let i = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(i)
        }
    })
}

impl fmt::Display for StandardPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardPoset::Chain(k) => write!(f, "chain({k})"),
            StandardPoset::Antichain(t) => write!(f, "antichain({t})"),
            StandardPoset::V => f.write_str("V"),
            StandardPoset::Lambda => f.write_str("Lambda"),
            StandardPoset::J => f.write_str("J"),
            StandardPoset::Boolean(k) => write!(f, "boolean({k})"),
        }
    }
}

impl std::str::FromStr for StandardPoset {
    type Err = Error;

    /// Accepts `chain(k)`, `antichain(t)`, `boolean(k)`, `V`, `Lambda`, `J` and `B0`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown standard poset '{s}'"));
        match s {
            "V" => return Ok(StandardPoset::V),
            "Lambda" | "Λ" => return Ok(StandardPoset::Lambda),
            "J" => return Ok(StandardPoset::J),
            "B0" | "B_0" => return Ok(StandardPoset::Antichain(1)),
            _ => {}
        }
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let arg: usize = rest
            .strip_suffix(')')
            .ok_or_else(bad)?
            .trim()
            .parse()
            .map_err(|_| bad())?;
        match name.trim() {
            "chain" => Ok(StandardPoset::Chain(arg)),
            "antichain" => Ok(StandardPoset::Antichain(arg)),
            "boolean" if arg <= 6 => Ok(StandardPoset::Boolean(arg)),
            _ => Err(bad()),
        }
    }
}
