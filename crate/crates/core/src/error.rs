use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("detuning {detuning_ghz} GHz outside Raman table span [{min_ghz}, {max_ghz}] GHz")]
    OutOfRange {
        detuning_ghz: f64,
        min_ghz: f64,
        max_ghz: f64,
    },

    #[error("singular input: {0}")]
    Singular(String),

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("{source_name}:{line}:{column}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("QKD allocation infeasible on {} link(s): {}", .0.len(), describe_violations(.0))]
    Infeasible(Vec<LinkViolation>),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// A link whose routed QKD load exceeds its admissible share of capacity.
#[derive(Clone, Debug, PartialEq)]
pub struct LinkViolation {
    pub link: String,
    pub load_bps: f64,
    pub capacity_bps: f64,
    pub admissible_bps: f64,
}

fn describe_violations(v: &[LinkViolation]) -> String {
    v.iter()
        .map(|l| {
            format!(
                "{} (load {:.3e} b/s > admissible {:.3e} b/s of capacity {:.3e} b/s)",
                l.link, l.load_bps, l.admissible_bps, l.capacity_bps
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
