use thiserror::Error;

/// Errors produced by the polynomial, partitioning and incidence routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("direction vector is zero")]
    ZeroDirection,

    #[error("polynomial has degree 0 in the elimination variable")]
    ConstantInLastVariable,

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("restriction of the polynomial to the line is identically zero")]
    IdenticallyZeroRestriction,

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("a space of dimension {dim} cannot bisect {families} families")]
    BisectionPrecondition { dim: usize, families: usize },

    #[error("no bisector certified at slack {slack}; best found needs {best_slack} ({best})")]
    Uncertified {
        slack: f64,
        best_slack: f64,
        best: String,
    },

    #[error("point {index} does not lie exactly on the base hypersurface")]
    PointOffSurface { index: usize },

    #[error("base polynomial rejected: {0}")]
    BaseRejected(String),

    #[error("E = {e} is smaller than rho * D = {bound}")]
    DegreeTooSmall { e: u32, bound: f64 },

    #[error("no real zero found after {attempts} attempts")]
    EmptyZeroSet { attempts: usize },

    #[error("surface {index} is contained in the zero set of the partition")]
    SurfaceInZeroSet { index: usize },

    #[error("complement space too small: dimension {dim} for {families} families at degree {degree}")]
    ComplementTooSmall {
        dim: usize,
        families: usize,
        degree: u32,
    },

    #[error("configuration violates the nondegeneracy hypotheses: {0}")]
    Degenerate(String),

    #[error("pipeline counted {pipeline} incidences, brute force {brute_force}")]
    CountMismatch { pipeline: usize, brute_force: usize },

    #[error("feasibility guard exceeded: {0}")]
    Feasibility(String),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
