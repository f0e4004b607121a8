use thiserror::Error;

/// Errors across the toolkit. Capacity errors (exhaustive searches or
/// enumerations that would not finish at desk scale) are kept distinct
/// from input errors so callers can report them differently.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("self-loop on vertex {0} is not allowed")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("mapping is not a bijection on 0..{n}")]
    NotBijection { n: usize },

    #[error("components overlap")]
    OverlappingComponents,

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("formula is not a sentence; free variables: {vars}")]
    NotASentence { vars: String },

    #[error("vertex variable x{0} is unbound")]
    UnboundVertexVar(u32),

    #[error("set variable X{0} is unbound")]
    UnboundSetVar(u32),

    #[error("set quantifier over {n} vertices exceeds the cap of {cap}")]
    SetQuantifierCapacity { n: usize, cap: usize },

    #[error("graph on {n} vertices exceeds the exhaustive-search limit of {limit}")]
    SearchCapacity { n: usize, limit: usize },

    #[error("component of size {size} exceeds the signature limit of {limit}")]
    SignatureCapacity { size: usize, limit: usize },

    #[error("keep limit 2^({c}*{q2})*{q1} exceeds the cap of {cap}")]
    KeepLimitOverflow { c: usize, q1: usize, q2: usize, cap: u64 },

    #[error("formula has set quantifiers; the FO keep limit requires q2 = 0")]
    WrongFragment,

    #[error("leaf count must lie in 1..=4, got {0}")]
    LeafCountOutOfRange(usize),

    #[error("clique size must be at least 2, got {0}")]
    CliqueSizeTooSmall(usize),

    #[error("gadget construction needs at least 2 vertices, got {0}")]
    SourceTooSmall(usize),

    #[error("coloring must assign a color in 1..=3 to every vertex")]
    BadColoring,

    #[error("generator parameters inconsistent: {0}")]
    BadGeneratorParams(String),
}

impl Error {
    /// True for errors that signal "this instance is too big for the
    /// exhaustive strategy", as opposed to malformed input.
    pub fn is_capacity(&self) -> bool {
        matches!(
            self,
            Error::SetQuantifierCapacity { .. }
                | Error::SearchCapacity { .. }
                | Error::SignatureCapacity { .. }
                | Error::KeepLimitOverflow { .. }
        )
    }
}
