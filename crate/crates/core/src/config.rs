/// Resource limits shared by every search and enumeration routine.
///
/// All limits are explicit so that exponential routines fail with an error
/// instead of running unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest poset accepted by the embedding search.
    pub poset_cap: usize,
    /// Largest ground size for which down-sets, up-sets and closures are enumerated.
    pub enumeration_cap: usize,
    /// Largest target lattice `B_k` searched for embeddings.
    pub embedding_k_cap: usize,
    /// Largest family accepted by inclusion-exclusion chain counting.
    pub chain_family_cap: usize,
    /// Largest ground size accepted by the dynamic-programming chain oracle.
    pub chain_oracle_cap: usize,
    /// Maximum number of candidate families examined by the minimum-chain search.
    pub search_budget: u64,
    /// Maximum number of sets written out when materializing a packing.
    pub materialize_budget: u64,
    /// Maximum number of distinct copies held in an oracle catalog.
    pub catalog_budget: u64,
    /// Maximum number of populated layers in a packing plan.
    pub layer_budget: u64,
}

/// Name of the environment variable that overrides every default budget.
pub const BUDGET_ENV: &str = "POSETPACK_BUDGET";

impl Default for Limits {
    fn default() -> Self {
        Limits {
            poset_cap: 16,
            enumeration_cap: 25,
            embedding_k_cap: 16,
            chain_family_cap: 30,
            chain_oracle_cap: 20,
            search_budget: 1_000_000,
            materialize_budget: 1_000_000,
            catalog_budget: 100_000,
            layer_budget: 1_000_000,
        }
    }
}

impl Limits {
    /// Sets every work budget (search, materialization, catalog, layers) to `budget`.
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.search_budget = budget;
        self.materialize_budget = budget;
        self.catalog_budget = budget;
        self.layer_budget = budget;
        self
    }

    /// Defaults, with budgets replaced by `POSETPACK_BUDGET` when it is set and parses.
    pub fn from_env() -> Self {
        let limits = Limits::default();
        match std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
        {
            Some(b) if b > 0 => limits.with_budget(b),
            _ => limits,
        }
    }
}
