use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("generator {index} is not a permutation of 1..={degree}")]
    NotAPermutation { index: usize, degree: usize },

    #[error("group order exceeds the cap of {cap}")]
    GroupTooLarge { cap: usize },

    #[error("index {index} out of range (size {size})")]
    InvalidIndex { index: usize, size: usize },

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("map is not a group homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("action is not well defined: {0}")]
    ActionInconsistent(String),

    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("subspace is not contained in the ambient subspace")]
    NotContained,

    #[error("modules are over different primes ({0} vs {1})")]
    MixedPrimes(u32, u32),

    #[error("modules are over different groups")]
    GroupMismatch,

    #[error("{0} is not a prime in the supported range")]
    NotAPrime(u32),

    #[error("matrix for generator {0} is not invertible")]
    NotInvertible(usize),

    #[error("meataxe chop failed after {retries} random algebra elements on a module of dimension {dim}")]
    ChopFailure { dim: usize, retries: usize },

    #[error("module too large for brute-force enumeration (dim {dim}, p {p})")]
    TooLarge { dim: usize, p: u32 },

    #[error("randomized isomorphism search exhausted without a certificate")]
    InconclusiveIso,

    #[error("resource cap exceeded: {what} = {size} > {cap}")]
    ResourceCap { what: &'static str, size: usize, cap: usize },

    #[error("homology spaces do not match the requested map")]
    BasisMismatch,

    #[error("point {0} is not an orbit representative")]
    NotOrbitRep(usize),

    #[error("cochain violates the 2-cocycle identity at ({0}, {1}, {2})")]
    NotACocycle(usize, usize, usize),

    #[error("kernel is not an elementary abelian p-group")]
    KernelNotElementaryAbelian,

    #[error("morphism is not an epimorphism: {0}")]
    NotEpimorphism(String),

    #[error("morphisms do not share a target pile")]
    TargetMismatch,

    #[error("morphism is not rigid: {0}")]
    NotRigid(String),

    #[error("embedding problem is not an identity embedding problem")]
    NotIdEp,

    #[error("search budget of {budget} nodes exceeded")]
    SearchCap { budget: usize },

    #[error("verdict routes disagree at p = {p}, module #{module}")]
    RouteDisagreement { p: u32, module: usize, report: Box<serde_json::Value> },

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by configured size or search limits.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::GroupTooLarge { .. }
                | Error::ResourceCap { .. }
                | Error::SearchCap { .. }
                | Error::TooLarge { .. }
                | Error::ChopFailure { .. }
        )
    }
}
