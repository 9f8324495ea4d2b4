use thiserror::Error;

/// Errors surfaced by the simulator and its harnesses.
#[derive(Debug, Error)]
pub enum Error {
    #[error("observer and target are coincident; no projection exists")]
    CoincidentAgents,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("agent placement failed after {attempts} rejection attempts (disk too small for {n_agents} agents)")]
    Placement { attempts: usize, n_agents: usize },

    #[error("non-finite state at step {step} (agent {agent}): {dump}")]
    NonFiniteState {
        step: u64,
        agent: usize,
        dump: String,
    },

    #[error("metric series spans {have} time units but the window needs {needed}")]
    SeriesTooShort { needed: f64, have: f64 },

    #[error("malformed input at line {line}: {reason}")]
    MalformedInput { line: usize, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
