//! Exact apolarity calculus for homogeneous forms.
//!
//! The crate works with homogeneous polynomials over arbitrary-precision
//! rationals, tagged by the space they live on (forms on a vector space V
//! versus forms on its dual). On top of that it provides
//!
//! - polars, mixed polars and the apolarity pairing ([`polarity`]),
//! - catalecticant matrices, non-degeneracy tests and dual forms with an
//!   explicit Hankel-consistency check ([`polarity`]),
//! - power-sum (Waring) representations, the three equivalent membership
//!   routes for quartics, and a floating-point decomposition solver
//!   ([`powersum`], [`numeric`]),
//! - a Picard-lattice calculator for the blown-up plane together with a
//!   consistency ledger of derived integer invariants ([`ledger`]).
//!
//! All exact operations are pure functions over immutable values; results
//! are deterministic, including every seeded random generator. The `apolar`
//! binary exposes the same functionality as a batch-oriented command line;
//! see the `examples/` directory for library usage.

pub mod cli;
pub mod form;
pub mod io;
pub mod ledger;
pub mod matrix;
pub mod numeric;
pub mod polarity;
pub mod powersum;

pub use form::{Form, MultiIndex, PointVec, Role, Space};
pub use matrix::{LinearSolution, RatMatrix};



/// Crate-wide error type. Mathematical verdicts (a degenerate form, a
/// failed membership test) are kept apart from malformed-input conditions
/// so callers can tell them apart; see [`Error::is_verdict`].
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("mismatched variable counts ({left} vs {right})")]
    NvarsMismatch { left: usize, right: usize },
    #[error("mismatched degrees ({left} vs {right})")]
    DegreeMismatch { left: u32, right: u32 },
    #[error("mismatched spaces ({left} vs {right})")]
    SpaceMismatch { left: Space, right: Space },
    #[error("point lives in the wrong space for this form")]
    RoleMismatch,
    #[error("point has {got} coordinates, form has {want} variables")]
    PointDimension { got: usize, want: usize },
    #[error("expected {want} points, got {got}")]
    PointCount { want: usize, got: usize },
    #[error("degree-0 forms have no polars")]
    ZeroDegreePolar,
    #[error("polar degree {k} out of range 1..={m}")]
    PolarDegreeRange { k: u32, m: u32 },
    #[error("form of odd degree {0} has no middle catalecticant")]
    OddDegree(u32),
    #[error("form is degenerate: its middle catalecticant is singular")]
    DegenerateForm,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix shapes {0}x{1} and {2}x{3} are incompatible")]
    MatrixShape(usize, usize, usize, usize),
    #[error("zero vector does not define a linear form")]
    ZeroLinearForm,
    #[error("points {0} and {1} coincide projectively")]
    DuplicatePoints(usize, usize),
    #[error("squares of the given linear forms are linearly dependent")]
    DependentSquares,
    #[error("need at least {want} variables, got {got}")]
    TooFewVariables { want: usize, got: usize },
    #[error("gave up after {0} attempts to draw a tight instance")]
    RetriesExhausted(u32),
    #[error("degree must be at least 5, got {0}")]
    DegreeTooSmall(i64),
    #[error("divisor classes live on different lattices ({0} vs {1} exceptional classes)")]
    LatticeMismatch(usize, usize),
    #[error("biquadric matrix is not swap-symmetric at entry ({0}, {1})")]
    NotSwapSymmetric(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that report a checked mathematical fact about valid
    /// input (exit code 1 at the CLI) rather than a malformed request.
    pub fn is_verdict(&self) -> bool {
        matches!(
            self,
            Error::DegenerateForm | Error::SingularMatrix | Error::DependentSquares
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
pub(crate) mod test_support {
    use num_rational::BigRational;

    use crate::form::{Form, MultiIndex, Space};

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    /// x0^4 + x1^4 + (x0+x1)^4, the binary-quartic workhorse: its middle
    /// catalecticant is [[2,1,1],[2,2,2],[1,1,2]] with determinant 2.
    pub fn fermat_plus() -> Form {
        Form::from_terms(
            Space::OnV,
            2,
            4,
            [
                (MultiIndex::new(vec![4, 0]), rat(2)),
                (MultiIndex::new(vec![3, 1]), rat(4)),
                (MultiIndex::new(vec![2, 2]), rat(6)),
                (MultiIndex::new(vec![1, 3]), rat(4)),
                (MultiIndex::new(vec![0, 4]), rat(2)),
            ],
        )
        .unwrap()
    }
}
