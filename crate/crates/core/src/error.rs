use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown atlas group `{0}`")]
    UnknownAtlas(String),

    #[error("inconsistent metacyclic parameters D_{{{m},{n},{k}}}: k^m is not 1 mod n")]
    InconsistentMetacyclic { m: u32, n: u32, k: u32 },

    #[error("atlas group `{name}` failed validation: {reason}")]
    AtlasValidation { name: String, reason: String },

    #[error("group closure exceeds the order cap of {0}")]
    GroupTooLarge(usize),

    #[error("malformed permutation `{0}`")]
    ParsePermutation(String),

    #[error("permutation `{perm}` is not an element of {group}")]
    NotInGroup { perm: String, group: String },

    #[error("malformed signature `{0}` (expected `h:m1,m2,...`)")]
    ParseSignature(String),

    #[error("non-integral genus: {order} * chi({signature}) gives 2-2g = {value}")]
    NonIntegralGenus {
        signature: String,
        order: u64,
        value: String,
    },

    #[error("braid index {index} out of range for {len} cone points")]
    BraidIndex { index: usize, len: usize },

    #[error("element order {order} is not an edge order of {kind}")]
    IncompatibleOrder { order: u32, kind: String },

    #[error("invalid tetrahedron: {0}")]
    Tetrahedron(String),

    #[error("eigenvalue {value:e} of {which} is within tolerance {tol:e} of zero")]
    GramDegenerate { which: String, value: f64, tol: f64 },

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("restriction refused: {0}")]
    Restriction(String),

    #[error("malformed certificate: {0}")]
    Certificate(String),
}
