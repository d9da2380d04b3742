//! Error type shared by all modules of the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building or applying window operators.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("not analytic: coefficient present at frequency {0}")]
    NotAnalytic(i64),

    #[error("window radius {radius} too small: need at least {needed}")]
    InsufficientWindow { radius: usize, needed: usize },

    #[error(
        "outside exactness margin: band [{lo}, {hi}] with operator margin {margin} \
         does not fit window radius {radius}"
    )]
    OutsideExactnessMargin {
        lo: i64,
        hi: i64,
        margin: usize,
        radius: usize,
    },

    #[error("window mismatch: operands live on different windows")]
    WindowMismatch,

    #[error("matrix is not an orthogonal projection (defect {0:.3e})")]
    NotProjection(f64),

    #[error("matrix is not unitary (defect {0:.3e})")]
    NotUnitary(f64),

    #[error("matrix is not symmetric (defect {0:.3e})")]
    NotSymmetric(f64),

    #[error("zero location lies outside the open unit disk: |a| = {0}")]
    ZeroOutsideDisk(f64),

    #[error("evaluation point too close to the unit circle: |lambda| = {0} > 0.9")]
    PointNearBoundary(f64),

    #[error("not an inner function: boundary unitarity defect {0:.3e}")]
    NotInner(f64),

    #[error("not gamma-symmetric: defect {0:.3e}")]
    NotGammaSymmetric(f64),

    #[error("factors do not commute: defect {0:.3e}")]
    NotCommuting(f64),

    #[error("not a divisor: {0}")]
    NotDivisor(String),

    #[error("vector is not in the model space: projection residual {0:.3e}")]
    NotInModelSpace(f64),

    #[error("not intertwining with the shift: defect {0:.3e}")]
    NotIntertwining(f64),

    #[error("not a multiplication operator: block-Toeplitz structure defect {0:.3e}")]
    NotMultiplication(f64),

    #[error("unsupported strategy: {0}")]
    UnknownStrategy(String),
}
