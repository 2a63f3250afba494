use thiserror::Error;

/// Runtime failures that abort a solver run.
///
/// Contract violations (querying the player of a terminal history, applying
/// an illegal action, ...) are programming errors and panic instead.
#[derive(Debug, Error)]
pub enum SolverError {
    /// A sampled backward pass produced a non-finite intermediate value.
    #[error("non-finite value {value} at {context} (iteration {iteration})")]
    NonFinite {
        context: String,
        value: f64,
        iteration: u64,
    },

    /// The oracle baseline was requested on a game above the node budget.
    #[error("oracle baseline refused: game has {nodes} histories, limit is {limit}")]
    OracleTooLarge { nodes: usize, limit: usize },

    /// Invalid run settings.
    #[error("invalid configuration: {0}")]
    Config(String),
}
