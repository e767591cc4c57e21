use thiserror::Error;

/// Errors raised across the crate. Variants that reject a simplex name the
/// offending vertex, edge, or face so failures can be located in the mesh.
#[derive(Debug, Error)]
pub enum Error {
    #[error("edge ({a}, {b}) borders {count} faces; at most two are allowed")]
    NonManifoldEdge { a: usize, b: usize, count: usize },

    #[error("faces {f0} and {f1} traverse edge ({a}, {b}) in the same direction")]
    InconsistentOrientation {
        a: usize,
        b: usize,
        f0: usize,
        f1: usize,
    },

    #[error("face {face} is degenerate (area {area:.3e} below {threshold:.1e})")]
    DegenerateFace {
        face: usize,
        area: f64,
        threshold: f64,
    },

    #[error("face {face} references invalid or repeated vertex indices {indices:?}")]
    InvalidFace { face: usize, indices: [usize; 3] },

    #[error("vertex {vertex} has a non-finite coordinate")]
    NonFiniteVertex { vertex: usize },

    #[error("{context}: length mismatch ({left} vs {right})")]
    LengthMismatch {
        context: &'static str,
        left: usize,
        right: usize,
    },

    #[error("angular step {step:.4} exceeds {max:.4} (pi/8); increase the v resolution")]
    ResolutionTooCoarse { step: f64, max: f64 },

    #[error("requested band [{lo:.6}, {hi:.6}] x {turns} turns does not fit inside the parent surface")]
    RangeOutsideParent { lo: f64, hi: f64, turns: f64 },

    #[error("integrand is singular or non-finite at grid node ({re:.6}, {im:.6}): {reason}")]
    SingularIntegrand { re: f64, im: f64, reason: String },

    #[error(
        "staircase path integrals disagree by {discrepancy:.3e} at node ({re:.6}, {im:.6}), \
         beyond 10x the quadrature tolerance {tolerance:.3e}"
    )]
    PathDependenceDetected {
        re: f64,
        im: f64,
        discrepancy: f64,
        tolerance: f64,
    },

    #[error("vertex {vertex} has only {found} distinct fit neighbors (needs {needed})")]
    InsufficientNeighborhood {
        vertex: usize,
        found: usize,
        needed: usize,
    },

    #[error("extrinsic ball of radius {radius:.6} about vertex {center} contains no interior vertex")]
    EmptyBall { center: usize, radius: f64 },

    #[error("|A|^2 vanishes at vertex {vertex}; no blow-up scale exists")]
    ZeroCurvatureAtCenter { vertex: usize },

    #[error("vertex {unreached} is unreachable from vertex {from}; the mesh is disconnected")]
    DisconnectedMesh { from: usize, unreached: usize },

    #[error("graphicality of the ball of radius {radius:.6} about vertex {vertex} is not certified: {reason}")]
    GraphicalityNotCertified {
        vertex: usize,
        radius: f64,
        reason: String,
    },

    #[error("source and target meshes do not share combinatorics: {detail}")]
    CombinatoricsMismatch { detail: String },

    #[error("vertex map is not injective: vertices {v0} and {v1} share a target position")]
    NonInjectiveVertexMap { v0: usize, v1: usize },

    #[error("target axis distance {target:.6} outside achieved range [{lo:.6}, {hi:.6}]")]
    TargetOutOfRange { target: f64, lo: f64, hi: f64 },

    #[error("density target {target:.4} not reached; largest tabulated value {best:.4}")]
    TargetNotReached {
        target: f64,
        best: f64,
        table: Vec<(f64, f64)>,
    },

    #[error("blow-up pair unverified at vertex {vertex}: {reason}")]
    BlowUpUnverified { vertex: usize, reason: String },

    #[error("separation {measured:.6} between the inner and probe boundaries is below the required {required:.6}")]
    SeparationTooSmall { measured: f64, required: f64 },

    #[error("intrinsic ball of radius {radius:.6} about vertex {vertex} is boundary-truncated")]
    BoundaryTruncatedBall { vertex: usize, radius: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}:{line}: {message}")]
    Format {
        path: String,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
