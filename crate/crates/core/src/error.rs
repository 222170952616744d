use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("could not parse group spec `{spec}`: {reason}")]
    GroupSpec { spec: String, reason: String },
    #[error("could not parse permutation `{0}`")]
    Perm(String),
    #[error("could not parse signature `{0}`")]
    SignatureParse(String),
    #[error("could not parse element `{0}`")]
    Element(String),
    #[error("group order {order} exceeds the configured limit {limit}")]
    OrderLimit { order: usize, limit: usize },
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("Riemann-Hurwitz genus is not an integer for this group order")]
    NonIntegralGenus,
    #[error("Riemann-Hurwitz genus {0} is below 2")]
    GenusTooSmall(i64),
    #[error("invalid generating vector: {0}")]
    InvalidVector(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("groups are not isomorphic")]
    NotIsomorphic,
    #[error("budget exceeded: {what} passed {limit}")]
    Budget { what: &'static str, limit: usize },
    #[error("catalog error: {0}")]
    Catalog(String),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// The module whose check failed.
    pub fn module(&self) -> &'static str {
        match self {
            Error::GroupSpec { .. } | Error::Perm(_) | Error::Element(_) | Error::OrderLimit { .. } => "group-core",
            Error::NotSubgroup(_) | Error::NotIsomorphic => "group-core",
            Error::SignatureParse(_) | Error::InvalidSignature(_) | Error::NonIntegralGenus | Error::GenusTooSmall(_) => {
                "signatures"
            }
            Error::InvalidVector(_) => "ske",
            Error::Budget { .. } => "budget",
            Error::Catalog(_) => "strata",
            Error::Usage(_) => "usage",
        }
    }
}
