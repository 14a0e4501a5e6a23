use thiserror::Error;

/// Errors surfaced by the exact-arithmetic layers and the verification
/// operations. Every variant corresponds to a contract violation that the
/// caller can act on; internal invariant breakage panics instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("constant term is not a unit, cannot invert series")]
    NonUnitConstantTerm,
    #[error("inner series of a composition has nonzero constant term")]
    NonZeroInnerConstant,
    #[error("z-window of depth {zdepth} cannot hold order {order} at N = {n}")]
    DepthTooSmall { zdepth: i64, order: usize, n: usize },
    #[error("unknown target k = {0}, expected 6, 8 or 10")]
    UnknownTarget(u32),
    #[error("mirror map is not invertible as a formal series")]
    MirrorMapNotInvertible,
    #[error("quantum connection residual is nonzero: {0}")]
    ConnectionResidualNonzero(String),
    #[error("specialized S-matrix routes disagree: {0}")]
    RoutesDisagree(String),
    #[error("z-substitution hit a non-invertible denominator: {0}")]
    ZNotInvertibleWindow(String),
    #[error("level-1 scalar ODE has no polynomial solution at m = {m}: {detail}")]
    NoPolynomialSolution { m: usize, detail: String },
    #[error("level-1 scalar ODE solution is not unique (N divides m = {0})")]
    NonUniqueSolution(usize),
    #[error("neither reading of the loop-weight term matches the QRR expansion")]
    NeitherReadingMatches,
    #[error("tail-contribution constant mismatch: {0}")]
    ConstantMismatch(String),
    #[error("degree bound violated: {0}")]
    DegreeBoundViolated(String),
    #[error("vanishing pattern violated at (m={m}, j={j}, b={b})")]
    VanishingPatternViolated { m: usize, j: usize, b: usize },
    #[error("membership certificate not found: {0}")]
    MembershipFailed(String),
    #[error("series order {have} too small, need at least {need}")]
    InsufficientOrder { have: usize, need: usize },
    #[error("membership fit passed the window but failed guard coefficient {0}")]
    GuardFailed(usize),
    #[error("w-adic valuation violated while dividing by w")]
    WValuationViolated,
    #[error("expansion window violated: {0}")]
    ExpansionWindowViolated(String),
    #[error("cache schema mismatch or corruption: {0}")]
    SchemaMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
