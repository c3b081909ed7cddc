use thiserror::Error;

use crate::geom::Segment;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library reports. Variants mirror the precondition that
/// was violated so callers (and the CLI) can surface them verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // point sets and matchings
    #[error("collinear triple ({0}, {1}, {2})")]
    CollinearTriple(usize, usize, usize),
    #[error("duplicate point ({0}, {1})")]
    DuplicatePoint(usize, usize),
    #[error("too few points: need at least {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("matchings are not over the same vertex set")]
    MismatchedVertexSet,
    #[error("unknown point id {0}")]
    UnknownPoint(usize),
    #[error("segment joins point {0} to itself")]
    DegenerateSegment(usize),
    #[error("point {0} is used by more than one segment")]
    VertexReused(usize),
    #[error("segments {0} and {1} cross")]
    CrossingSegments(Segment, Segment),
    #[error("matching is not perfect: point {0} is unmatched")]
    NotPerfect(usize),
    #[error("polygon is not strictly convex and counterclockwise")]
    NotConvex,

    // extension engine
    #[error("segment {0} meets the region without an endpoint inside it")]
    SegmentOutsideRegionRule(Segment),
    #[error("degenerate incidence: {0}")]
    DegenerateIncidence(String),
    #[error("invalid extension directives: {0}")]
    InvalidDirectives(String),

    // orientations
    #[error("no even orientation: component containing vertex {vertex} has an odd number of edges")]
    NoEvenOrientation { vertex: usize },
    #[error("graph is not a tree")]
    NotATree,
    #[error("tree has an odd number of edges")]
    OddTree,
    #[error("part {part} has an odd component containing vertex {vertex}")]
    OddComponentInPart { part: u8, vertex: usize },

    // matching constructors
    #[error("points are not in convex position")]
    NotConvexPosition,
    #[error("odd number of points ({0})")]
    OddCount(usize),
    #[error("the only two points are already matched to each other")]
    TwoPointsAlreadyMatched,
    #[error("cell {cell} receives exactly the two endpoints of one segment")]
    SameSegmentIndegreeTwo { cell: usize },
    #[error("no perfect matching satisfies the constraints")]
    NoMatching,

    // theorem pipelines
    #[error("points {0} and {1} share an x-coordinate; apply the shear preprocessing")]
    DistinctXRequired(usize, usize),
    #[error("cut line passes through point {0}")]
    VertexOnLine(usize),
    #[error("cut line crosses an odd number ({0}) of segments")]
    OddCut(usize),
    #[error("segment {0} is not axis-parallel")]
    NotAxisParallel(Segment),
    #[error("matching has an odd number ({0}) of segments")]
    OddMatching(usize),
    #[error("matching is not convex-hull-connected: segment {0} has no endpoint on the hull")]
    NotChc(Segment),
    #[error("segment {0} is vertical")]
    VerticalSegment(Segment),
    #[error("generation failed: {0}")]
    GenerationFailed(String),

    // oracle
    #[error("instance too large for exhaustive search: {size} > {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("target matching unreachable in the compatibility graph")]
    Unreachable,

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
