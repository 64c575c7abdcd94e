use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("bound exceeded: {what} ({value} > {bound})")]
    BoundExceeded { what: String, value: u128, bound: u128 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("config error in `{field}`: {msg}")]
    Config { field: String, msg: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn bound_check(what: &str, value: u128, bound: u128) -> Result<()> {
    if value > bound {
        Err(Error::BoundExceeded {
            what: what.to_string(),
            value,
            bound,
        })
    } else {
        Ok(())
    }
}

pub(crate) fn pre(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(msg()))
    }
}
