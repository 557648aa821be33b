use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported relay count {0}: routes carry 0..=6 relays")]
    UnsupportedK(usize),

    #[error("rate must be strictly positive")]
    ZeroRate,

    #[error("rate {rate} bit/cu infeasible for the {what}: {reason}")]
    Infeasible {
        what: &'static str,
        rate: f64,
        reason: String,
    },

    #[error("rate verification failed on {link}: achieved {achieved} vs target {target}")]
    Verification {
        link: String,
        achieved: f64,
        target: f64,
    },

    #[error("config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by a rate outside the feasible region.
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::Infeasible { .. })
    }
}
