//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("minimal polynomial is reducible over the rationals")]
    ReducibleMinimalPolynomial,
    #[error("the rational field has no generator")]
    NoGenerator,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("field mismatch between operands")]
    FieldMismatch,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HypergraphError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("component {index} is not slim: {reason}")]
    NotSlim { index: usize, reason: String },
    #[error("hypergraph needs at least one component")]
    NoComponents,
    #[error("third-point query requires two distinct points")]
    EqualPoints,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RemainderError {
    #[error("sample point {index} lies inside the subspace")]
    PointInsideSubspace { index: usize },
    #[error("biclique parts must be disjoint")]
    PartsNotDisjoint,
    #[error("biclique parts must lie inside the subspace (offending part {part}, index {index})")]
    PartOutsideSubspace { part: usize, index: usize },
    #[error("translation point lies inside the subspace")]
    ShiftInsideSubspace,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("coherent sequence is empty")]
    EmptySequence,
    #[error("stage {stage} subspace does not contain stage {prev}")]
    ChainNotIncreasing { prev: usize, stage: usize },
    #[error("stage {stage}: point {point} outside the stage subspace")]
    PointOutsideStage { stage: usize, point: String },
    #[error("stage {stage}: remainder coloring must cover exactly the new sampled points (offending {point})")]
    RemainderDomainMismatch { stage: usize, point: String },
    #[error("stage {stage}: first stage carries the null remainder marker, later stages a real one")]
    RemainderMarkerMisplaced { stage: usize },
    #[error("stage {stage}: stage coloring is missing sampled point {point}")]
    StageColoringIncomplete { stage: usize, point: String },
    #[error("stage {stage}: monochromatic hyperedge in stage coloring")]
    StageColoringImproper { stage: usize },
    #[error("stage {stage}: remainder coloring equal on a remainder edge")]
    RemainderColoringImproper { stage: usize },
    #[error("sampled point {point} belongs to no stage subspace")]
    PointOutsideFiltration { point: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("sample point {point} lies outside the domain subspace")]
    SampleOutsideDomain { point: String },
    #[error("sample point {point} has no color")]
    UncoloredSample { point: String },
    #[error("condition coloring has a monochromatic hyperedge")]
    ImproperColoring,
    #[error("domain intersection differs from the declared core")]
    CoreMismatch,
    #[error("condition {side} disagrees with the background coloring at {point}")]
    BackgroundDisagreement { side: usize, point: String },
    #[error("core sample sets of the two conditions differ at {point}")]
    CoreSampleMismatch { point: String },
    #[error("background coloring leaves core point {point} uncovered")]
    BackgroundIncomplete { point: String },
    #[error("point {point} lies inside a condition domain")]
    PointInsideDomain { point: String },
    #[error("merged colorings disagree at {point}")]
    NotAFunction { point: String },
    #[error("merged coloring has a monochromatic hyperedge: {edge}")]
    MergeImproper { edge: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RamseyError {
    #[error("search space of size {needed} exceeds the budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("all conditions must have domain size {expected}, condition {index} has {got}")]
    DomainSizeMismatch { expected: usize, index: usize, got: usize },
    #[error("stepping-up bound overflows at n={n}, exponent={exponent}, colors={colors}")]
    BoundOverflow { n: u64, exponent: u32, colors: u64 },
    #[error("exponent must be 2 or 3, got {0}")]
    UnsupportedExponent(u32),
    #[error("condition {index} is not a proper partial coloring")]
    ImproperCondition { index: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HjError {
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(usize),
    #[error("word length must be at least 1")]
    EmptyLength,
    #[error("search space of size {needed} exceeds the budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("covered set must be nonempty")]
    EmptySet,
    #[error("component maps must sum to zero")]
    NotSumZero,
    #[error("no nonzero pairwise distinct base solution found in the search window")]
    NoBaseSolution,
    #[error("word length {got} exceeds the scheme depth {depth}")]
    WordTooLong { got: usize, depth: usize },
    #[error("word letter {letter} outside alphabet of size {alphabet}")]
    LetterOutOfRange { letter: u8, alphabet: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown preset `{0}` (expected `ap` or `equilateral`)")]
    UnknownPreset(String),
    #[error("certificate does not verify: {0}")]
    CertificateInvalid(String),
}

impl FormatError {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        FormatError::Parse { line, message: message.into() }
    }
}
