use thiserror::Error;

use crate::word::Word;

/// A broken structural invariant of a [`Graph`](crate::graph::Graph).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("graph has no vertices")]
    Empty,
    #[error("dart {dart}: involution target {inv} does not exist")]
    DanglingInvolution { dart: usize, inv: usize },
    #[error("dart {dart}: involution has unexpected fixed point")]
    FixedPoint { dart: usize },
    #[error("dart {dart}: inv(inv(d)) = {back}, not an involution")]
    NotInvolution { dart: usize, back: usize },
    #[error("dart {dart}: source {src} is not a declared vertex")]
    UnknownSource { dart: usize, src: usize },
    #[error("dart {dart}: label {label} is not the negation of its partner's label {partner}")]
    LabelAsymmetry { dart: usize, label: i32, partner: i32 },
    #[error("dart {dart}: label {label} outside the rank-{rank} alphabet")]
    LabelOutOfRange { dart: usize, label: i32, rank: usize },
    #[error("vertex {vertex}: two outgoing darts carry label {label}")]
    NotFolded { vertex: usize, label: i32 },
    #[error("graph is not connected")]
    Disconnected,
    #[error("vertex {vertex} is not on any closed reduced path at the basepoint")]
    NotSpine { vertex: usize },
    #[error("duplicate identifier {0}")]
    DuplicateId(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(#[from] Violation),
    #[error("subgraph is empty")]
    EmptySubgraph,
    #[error("subgraph is not closed under the involution or misses a source vertex")]
    InvalidSubgraph,
    #[error("graph or subgraph is not connected")]
    Disconnected,
    #[error("subgraph is not a tree")]
    NotATree,
    #[error("subgraph is not a spanning tree")]
    NotSpanningTree,
    #[error("subgraphs overlap")]
    OverlappingSubgraphs,
    #[error("path is not a valid sequence of incident darts")]
    InvalidPath,
    #[error("path is not closed at vertex {0}")]
    PathNotClosed(usize),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("letter '{letter}' is outside the rank-{rank} alphabet")]
    LetterOutOfRange { letter: char, rank: usize },
    #[error("invalid character '{0}' in word")]
    InvalidCharacter(char),
    #[error("rank {0} is not supported (alphabet has 26 letters)")]
    RankTooLarge(usize),
    #[error("base ranks differ: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("operation requires base rank {expected}, got {found}")]
    UnsupportedRank { expected: usize, found: usize },
    #[error("operation requires a non-trivial subgroup")]
    TrivialSubgroup,
    #[error("operation requires a finite-index subgroup")]
    InfiniteIndex,
    #[error("operation requires an infinite-index subgroup")]
    FiniteIndex,
    #[error("word must be non-trivial")]
    TrivialWord,
    #[error("word {0} already lies in the subgroup")]
    AlreadyMember(Word),
    #[error("no witness found")]
    NoWitness,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("document error: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
