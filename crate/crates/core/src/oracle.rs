//! Exhaustive maximum packings of unrelated copies at tiny sizes, plus the
//! closed-form chain packing value used as a reference.

use std::collections::BTreeMap;

use crate::clique::WeightedGraph;
use crate::config::Limits;
use crate::embedding::{enumerate_embeddings, Mode};
use crate::error::{Error, Result};
use crate::lattice::{unrelated, Family};
use crate::numbers::{binomial, BigNat};
use crate::poset::Poset;

/// Every distinct image of `poset` in `B_n` under `mode` embeddings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyCatalog {
    pub poset: Poset,
    pub n: usize,
    pub mode: Mode,
    /// Sorted by member masks.
    pub copies: Vec<Family>,
}

pub fn enumerate_copies(
    poset: &Poset,
    n: usize,
    mode: Mode,
    limits: &Limits,
) -> Result<CopyCatalog> {
    let mut images: BTreeMap<Vec<u64>, ()> = BTreeMap::new();
    for e in enumerate_embeddings(poset, n, mode, limits)? {
        let mut key = e.image().to_vec();
        key.sort_unstable();
        images.insert(key, ());
        if images.len() as u64 > limits.catalog_budget {
            return Err(Error::Budget {
                what: "copy catalog",
                required: format!(">{}", limits.catalog_budget),
                budget: limits.catalog_budget,
            });
        }
    }
    let copies = images
        .into_keys()
        .map(|k| Family::from_masks(n, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(CopyCatalog {
        poset: poset.clone(),
        n,
        mode,
        copies,
    })
}

/// A maximum family built from pairwise unrelated copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingOptimum {
    /// Total number of sets in the chosen copies.
    pub size: usize,
    /// The chosen copies, lexicographically least among optima.
    pub copies: Vec<Family>,
}

/// Solves the packing as a maximum-weight clique on the "unrelated" graph.
fn best_packing(copies: &[Family]) -> Result<PackingOptimum> {
    let weights = copies.iter().map(|c| c.len() as u64).collect();
    let mut graph = WeightedGraph::new(weights);
    for a in 0..copies.len() {
        for b in a + 1..copies.len() {
            if unrelated(&copies[a], &copies[b])? {
                graph.add_edge(a, b);
            }
        }
    }
    let (weight, chosen) = graph.max_weight_clique();
    let chosen: Vec<Family> = chosen.into_iter().map(|i| copies[i].clone()).collect();
    // unrelated copies never share a set, so sizes add up exactly
    let mut all: Vec<u64> = chosen
        .iter()
        .flat_map(|c| c.masks().iter().copied())
        .collect();
    all.sort_unstable();
    all.dedup();
    assert_eq!(all.len() as u64, weight, "chosen copies overlap");
    Ok(PackingOptimum {
        size: weight as usize,
        copies: chosen,
    })
}

/// `pa(n, P)` or `pa*(n, P)` by exhaustive search.
pub fn pa_exact(poset: &Poset, n: usize, mode: Mode, limits: &Limits) -> Result<PackingOptimum> {
    let catalog = enumerate_copies(poset, n, mode, limits)?;
    best_packing(&catalog.copies)
}

/// Maximum packing mixing copies of any poset in the collection.
pub fn pa_exact_collection(
    posets: &[Poset],
    n: usize,
    mode: Mode,
    limits: &Limits,
) -> Result<PackingOptimum> {
    let mut union: BTreeMap<Vec<u64>, Family> = BTreeMap::new();
    for p in posets {
        for copy in enumerate_copies(p, n, mode, limits)?.copies {
            union.entry(copy.masks().to_vec()).or_insert(copy);
        }
        if union.len() as u64 > limits.catalog_budget {
            return Err(Error::Budget {
                what: "copy catalog",
                required: union.len().to_string(),
                budget: limits.catalog_budget,
            });
        }
    }
    let copies: Vec<Family> = union.into_values().collect();
    best_packing(&copies)
}

/// `(k + 1) · C(n - k, ⌊(n - k)/2⌋)`, the largest packing of `(k+1)`-chains.
pub fn gst_formula(k: usize, n: usize) -> Result<BigNat> {
    if n < k {
        return Err(Error::Range {
            what: "chain length",
            value: k,
            limit: n,
        });
    }
    let rest = (n - k) as u64;
    Ok(binomial(rest, rest / 2) * BigNat::from(k + 1))
}
