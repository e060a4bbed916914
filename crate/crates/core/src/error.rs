use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },

    /// `d < N`: the antisymmetric spin subspace has dimension zero.
    #[error("empty antisymmetric spin subspace (d = {spin_dim} < N = {n_particles})")]
    EmptyAntisymmetric { spin_dim: u32, n_particles: u32 },

    #[error("no bracketing interval for the transition in `{parameter}`")]
    NoBracket { parameter: &'static str },

    #[error("{what} exceeds the supported limit of {limit}")]
    TooLarge { what: &'static str, limit: u64 },

    #[error("target is infeasible: {0}")]
    Infeasible(&'static str),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: &'static str) -> Self {
        Error::InvalidParameter { name, reason }
    }
}
