use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("slice {slice}: item {item} sits at position {found}, expected {expected}")]
    Position {
        slice: usize,
        item: usize,
        expected: usize,
        found: usize,
    },
    #[error("slice {slice}: item {item} runs past the {width} available strands")]
    Overrun { slice: usize, item: usize, width: usize },
    #[error("slice {slice}: items cover {found} input strands, expected {expected}")]
    Width {
        slice: usize,
        expected: usize,
        found: usize,
    },
    #[error("annular closure needs equal widths, bottom has {bottom} strands and top has {top}")]
    ClosureWidth { bottom: usize, top: usize },
    #[error("marked arc {arc} does not exist (diagram has {arc_count} arcs)")]
    DanglingMarkedArc { arc: usize, arc_count: usize },
    #[error("orientation override for component {component}, but there are only {count}")]
    UnknownComponent { component: usize, count: usize },
    #[error("braid generator {generator} is invalid on {strands} strands")]
    BraidGenerator { generator: i32, strands: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

/// Failures of the homology and invariant computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("operation needs a closed diagram, got an open tangle")]
    OpenTangle,
    #[error("operation needs an open tangle (closure = none)")]
    ClosedDiagram,
    #[error("tangle has {bottom} bottom and {top} top endpoints")]
    UnequalEndpoints { bottom: usize, top: usize },
    #[error("reduced homology requested but no marked arc is set")]
    NoMarkedArc,
    #[error("resolution index has {found} bits, diagram has {expected} crossings")]
    IndexLength { expected: usize, found: usize },
    #[error("crossing {0} is already 1-resolved")]
    EdgeFromOne(usize),
    #[error("{0} crossings or circles exceed the supported size")]
    TooLarge(usize),
    #[error("differential squares to a nonzero map in degree {0}")]
    DSquared(i32),
    #[error("differential entry from generator {source_gen} to {target} changes k by {delta}")]
    Filtration {
        source_gen: usize,
        target: usize,
        delta: i32,
    },
    #[error("polynomial is not in Z[q^±1][z]: remainder {0}")]
    NotInSubring(String),
    #[error("nonzero entry between arrow sequences {row} and {col} of different weight")]
    WeightViolation { row: String, col: String },
    #[error("A_S occupied count {occupied} out of range for m = {m}")]
    Occupied { occupied: usize, m: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
