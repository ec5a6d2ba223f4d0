//! Embeddings of a poset into `B_k` and the minimum convex-closure size over them.
//!
//! Elements are assigned along the poset's least linear extension, each trying
//! candidate subsets in increasing characteristic-vector order. That fixes one
//! deterministic enumeration order, which is also the tie-break order for
//! witnesses.

use std::fmt;

use num_rational::Ratio;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::lattice::{closure_masks, full_mask, submasks, Family};
use crate::poset::Poset;

/// Which maps count as embeddings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `a < b` implies `f(a) ⊂ f(b)`.
    Weak,
    /// `a < b` if and only if `f(a) ⊂ f(b)`.
    Strong,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Weak => "weak",
            Mode::Strong => "strong",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An injective, mode-respecting map from a poset into `B_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Embedding {
    poset: Poset,
    k: usize,
    image: Vec<u64>,
    mode: Mode,
}

impl Embedding {
    /// Validates `image` (indexed by element label) against `poset` and `mode`.
    pub fn new(poset: Poset, k: usize, image: Vec<u64>, mode: Mode) -> Result<Embedding> {
        if image.len() != poset.size() {
            return Err(Error::Parse(format!(
                "embedding assigns {} sets to a poset of size {}",
                image.len(),
                poset.size()
            )));
        }
        if k > 63 {
            return Err(Error::Range {
                what: "ground size",
                value: k,
                limit: 63,
            });
        }
        if image.iter().any(|&m| m & !full_mask(k) != 0) {
            return Err(Error::Parse(format!("image set outside [{k}]")));
        }
        for a in 0..image.len() {
            for b in 0..image.len() {
                if a == b {
                    continue;
                }
                if image[a] == image[b] {
                    return Err(Error::Parse(format!(
                        "elements {a} and {b} share an image; embeddings are injective"
                    )));
                }
                let contained = image[a] & !image[b] == 0;
                let ok = match mode {
                    Mode::Weak => !poset.less(a, b) || contained,
                    Mode::Strong => poset.less(a, b) == contained,
                };
                if !ok {
                    return Err(Error::Parse(format!(
                        "images of {a} and {b} violate the {mode} embedding condition"
                    )));
                }
            }
        }
        Ok(Embedding {
            poset,
            k,
            image,
            mode,
        })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Image masks indexed by element label.
    pub fn image(&self) -> &[u64] {
        &self.image
    }

    pub fn image_family(&self) -> Family {
        Family::from_masks(self.k, self.image.iter().copied()).expect("image lies in B_k")
    }

    /// Closure of the image inside `B_k`.
    pub fn closure_family(&self) -> Family {
        Family::from_masks(self.k, closure_masks(self.k, &self.image)).expect("closure lies in B_k")
    }
}

/// `|closure(f(P))|` computed in `B_k`.
pub fn closure_size(e: &Embedding) -> usize {
    closure_masks(e.k, &e.image).len()
}

/// Minimum closure size with the embedding attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureCertificate {
    pub m: usize,
    pub k: usize,
    pub witness: Embedding,
    pub mode: Mode,
    /// Every `k` up to this value was searched (or ruled out by the lower bound).
    pub exhaustive_to: usize,
    /// Minimum found for each searched `k`, `None` when no embedding into `B_k`
    /// reached the running minimum.
    pub per_k: Vec<(usize, Option<usize>)>,
}

// Shared search state: the assignment order and candidate checks.
struct Search<'a> {
    poset: &'a Poset,
    order: Vec<usize>,
    // position of each element in `order`
    rank: Vec<usize>,
    mode: Mode,
    k: usize,
}

impl<'a> Search<'a> {
    fn new(poset: &'a Poset, k: usize, mode: Mode) -> Search<'a> {
        let order = poset.linear_extension();
        let mut rank = vec![0; order.len()];
        for (i, &x) in order.iter().enumerate() {
            rank[x] = i;
        }
        Search {
            poset,
            order,
            rank,
            mode,
            k,
        }
    }

    // Smallest valid candidate >= `from` for depth `assigned.len()`.
    fn next_candidate(&self, assigned: &[u64], from: u64) -> Option<u64> {
        let depth = assigned.len();
        let x = self.order[depth];
        let full = full_mask(self.k);
        let mut required = 0u64;
        for (d, &img) in assigned.iter().enumerate() {
            if self.poset.less(self.order[d], x) {
                required |= img;
            }
        }
        let mut s = from;
        while s <= full {
            if s & required == required && self.accepts(assigned, x, s) {
                return Some(s);
            }
            s += 1;
        }
        None
    }

    fn accepts(&self, assigned: &[u64], x: usize, s: u64) -> bool {
        assigned.iter().enumerate().all(|(d, &img)| {
            if img == s {
                return false;
            }
            let y = self.order[d];
            // y precedes x in a linear extension, so x < y is impossible
            match self.mode {
                Mode::Weak => !self.poset.less(y, x) || img & !s == 0,
                Mode::Strong => (self.poset.less(y, x) == (img & !s == 0)) && (s & !img != 0),
            }
        })
    }

    fn by_label(&self, by_depth: &[u64]) -> Vec<u64> {
        (0..self.order.len())
            .map(|x| by_depth[self.rank[x]])
            .collect()
    }
}

/// Streams every embedding of `poset` into `B_k` exactly once, in a fixed order.
pub struct EmbeddingIter<'a> {
    search: Search<'a>,
    by_depth: Vec<u64>,
    next_from: Vec<u64>,
    depth: usize,
    done: bool,
}

impl Iterator for EmbeddingIter<'_> {
    type Item = Embedding;

    fn next(&mut self) -> Option<Embedding> {
        let size = self.search.order.len();
        if self.done {
            return None;
        }
        if size == 0 {
            self.done = true;
            return Some(self.emit());
        }
        loop {
            let found = self
                .search
                .next_candidate(&self.by_depth[..self.depth], self.next_from[self.depth]);
            match found {
                Some(c) => {
                    self.by_depth[self.depth] = c;
                    self.next_from[self.depth] = c + 1;
                    if self.depth + 1 == size {
                        return Some(self.emit());
                    }
                    self.depth += 1;
                    self.next_from[self.depth] = 0;
                }
                None => {
                    if self.depth == 0 {
                        self.done = true;
                        return None;
                    }
                    self.depth -= 1;
                }
            }
        }
    }
}

impl EmbeddingIter<'_> {
    fn emit(&self) -> Embedding {
        Embedding {
            poset: self.search.poset.clone(),
            k: self.search.k,
            image: self.search.by_label(&self.by_depth),
            mode: self.search.mode,
        }
    }
}

fn check_caps(poset: &Poset, k: usize, limits: &Limits) -> Result<()> {
    if poset.size() > limits.poset_cap {
        return Err(Error::Cap {
            what: "poset size",
            value: poset.size(),
            cap: limits.poset_cap,
        });
    }
    if k > limits.embedding_k_cap {
        return Err(Error::Cap {
            what: "target ground size",
            value: k,
            cap: limits.embedding_k_cap,
        });
    }
    Ok(())
}

/// All injective `mode` embeddings of `poset` into `B_k`.
pub fn enumerate_embeddings<'a>(
    poset: &'a Poset,
    k: usize,
    mode: Mode,
    limits: &Limits,
) -> Result<EmbeddingIter<'a>> {
    check_caps(poset, k, limits)?;
    let size = poset.size();
    Ok(EmbeddingIter {
        search: Search::new(poset, k, mode),
        by_depth: vec![0; size],
        next_from: vec![0; size.max(1)],
        depth: 0,
        done: false,
    })
}

// Closure sizes inside B_k without allocation: stamp each visited subset.
struct Scratch {
    stamp: Vec<u32>,
    generation: u32,
}

impl Scratch {
    fn new(k: usize) -> Scratch {
        Scratch {
            stamp: vec![0; 1 << k],
            generation: 0,
        }
    }

    fn closure_size(&mut self, sets: &[u64]) -> usize {
        self.generation += 1;
        let g = self.generation;
        let mut count = 0;
        for &a in sets {
            for &b in sets {
                if a & !b != 0 {
                    continue;
                }
                for s in submasks(b ^ a) {
                    let slot = &mut self.stamp[(s | a) as usize];
                    if *slot != g {
                        *slot = g;
                        count += 1;
                    }
                }
            }
        }
        count
    }
}

struct KSearch<'s, 'a> {
    search: &'s Search<'a>,
    scratch: Scratch,
    by_depth: Vec<u64>,
    // prune partial images whose closure exceeds this before anything is found
    limit: Option<usize>,
    lower_bound: usize,
    best: Option<(usize, Vec<u64>)>,
}

impl KSearch<'_, '_> {
    fn prune(&self, partial: usize) -> bool {
        match (&self.best, self.limit) {
            (Some((v, _)), _) => partial >= *v,
            (None, Some(l)) => partial > l,
            (None, None) => false,
        }
    }

    fn finished(&self) -> bool {
        matches!(&self.best, Some((v, _)) if *v <= self.lower_bound)
    }

    fn run(&mut self, depth: usize) {
        let size = self.search.order.len();
        if depth == size {
            let m = self.scratch.closure_size(&self.by_depth);
            if !self.prune(m) {
                self.best = Some((m, self.by_depth.clone()));
            }
            return;
        }
        let mut from = 0u64;
        while let Some(c) = self.search.next_candidate(&self.by_depth[..depth], from) {
            from = c + 1;
            self.by_depth[depth] = c;
            let partial = self.scratch.closure_size(&self.by_depth[..=depth]);
            if !self.prune(partial) {
                self.run(depth + 1);
                if self.finished() {
                    return;
                }
            }
        }
    }
}

/// `c(P)` (weak) or `c*(P)` (strong) over all `k <= k_max`, with a witness.
///
/// `k_max` defaults to `|P|`, where the down-set embedding always exists. The
/// witness has the smallest `k` and, within it, the lexicographically least
/// image sequence along the assignment order.
pub fn minimal_closure(
    poset: &Poset,
    mode: Mode,
    k_max: Option<usize>,
    limits: &Limits,
) -> Result<ClosureCertificate> {
    if poset.is_empty() {
        return Err(Error::Range {
            what: "poset size",
            value: 0,
            limit: limits.poset_cap,
        });
    }
    let k_max = k_max.unwrap_or(poset.size());
    check_caps(poset, k_max, limits)?;
    let height = poset.height();
    if k_max < height {
        return Err(Error::Infeasible {
            mode: mode.name(),
            k_max,
        });
    }
    let lower_bound = poset.size().max(1 << height);
    let mut best: Option<(usize, usize, Vec<u64>)> = None;
    let mut per_k = Vec::new();
    for k in height..=k_max {
        let search = Search::new(poset, k, mode);
        let mut ks = KSearch {
            search: &search,
            scratch: Scratch::new(k),
            by_depth: vec![0; poset.size()],
            limit: best.as_ref().map(|b| b.0),
            lower_bound,
            best: None,
        };
        ks.run(0);
        per_k.push((k, ks.best.as_ref().map(|b| b.0)));
        match ks.best {
            Some((m, by_depth)) => {
                if best.as_ref().is_none_or(|b| m < b.0) {
                    best = Some((m, k, search.by_label(&by_depth)));
                }
            }
            None => assert!(
                best.is_none(),
                "an embedding into B_{} is also one into B_{k}",
                k - 1
            ),
        }
        if matches!(&best, Some((m, _, _)) if *m <= lower_bound) {
            break;
        }
    }
    let (m, k, image) = best.ok_or(Error::Infeasible {
        mode: mode.name(),
        k_max,
    })?;
    debug_assert!(m >= lower_bound);
    Ok(ClosureCertificate {
        m,
        k,
        witness: Embedding {
            poset: poset.clone(),
            k,
            image,
            mode,
        },
        mode,
        exhaustive_to: k_max,
        per_k,
    })
}

/// Largest `|P_i| / c(P_i)` over a collection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestRatio {
    pub ratio: Ratio<u64>,
    /// Least index attaining the maximum.
    pub index: usize,
    pub certificates: Vec<ClosureCertificate>,
}

pub fn best_ratio(collection: &[Poset], mode: Mode, limits: &Limits) -> Result<BestRatio> {
    if collection.is_empty() {
        return Err(Error::Parse("empty poset collection".into()));
    }
    let certificates = collection
        .iter()
        .map(|p| minimal_closure(p, mode, None, limits))
        .collect::<Result<Vec<_>>>()?;
    let mut ratio = Ratio::new(0u64, 1);
    let mut index = 0;
    for (i, (p, c)) in collection.iter().zip(&certificates).enumerate() {
        let r = Ratio::new(p.size() as u64, c.m as u64);
        if i == 0 || r > ratio {
            ratio = r;
            index = i;
        }
    }
    Ok(BestRatio {
        ratio,
        index,
        certificates,
    })
}
