//! Runtime limits and seeds shared by every computation.

pub const DEFAULT_GROUP_ORDER_CAP: usize = 5040;
pub const GROUP_ORDER_CAP_ENV: &str = "PILELAB_CAP_GROUP_ORDER";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    /// Largest group order any closure may produce.
    pub group_order_cap: usize,
    /// Seed for the MeatAxe random algebra elements.
    pub seed: u64,
    /// Modules up to this dimension are certified irreducible by brute force.
    pub certification_dim: usize,
    /// Random algebra elements tried per chop level.
    pub chop_retries: usize,
    /// Bound on `|G|^3 * dim` for bar complexes.
    pub chain_entry_cap: usize,
    /// Node budget for brute-force embedding problem searches.
    pub search_node_budget: usize,
    /// Largest `|B|` accepted by the brute-force solver.
    pub brute_group_cap: usize,
    /// Largest number of embedding problems the oracle route will enumerate.
    pub enumeration_cap: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            group_order_cap: DEFAULT_GROUP_ORDER_CAP,
            seed: 0,
            certification_dim: 6,
            chop_retries: 200,
            chain_entry_cap: 50_000_000,
            search_node_budget: 5_000_000,
            brute_group_cap: 512,
            enumeration_cap: 4096,
        }
    }
}

impl Config {
    /// Defaults, with the group-order cap taken from `PILELAB_CAP_GROUP_ORDER` when set.
    pub fn from_env() -> Self {
        let mut cfg = Config::default();
        if let Some(cap) = std::env::var(GROUP_ORDER_CAP_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
            cfg.group_order_cap = cap;
        }
        cfg
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}
