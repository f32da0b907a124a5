//! Hand-built inputs with known behaviour.

use crate::linalg::ComplexMatrix;
use crate::varieties::{FinAbGroup, GroupFamily, Representation};

/// The non-commuting `SL(2)` pair `(diag(2, 1/2), [[3, 1], [0, 1/3]])`.
///
/// It is not a representation of `ℤ²`, but conjugating by `diag(t, 1/t)`
/// and letting `t → 0` kills the off-diagonal entry and leaves the
/// commuting pair `(diag(2, 1/2), diag(3, 1/3))`. So the closure of the
/// conjugation orbit of a non-commuting pair can meet the commuting locus.
pub fn limit_to_commuting_pair() -> Representation {
    Representation::new(
        GroupFamily::sl(2),
        FinAbGroup::free(2).expect("rank 2"),
        vec![
            ComplexMatrix::from_real_diagonal(&[2.0, 0.5]),
            ComplexMatrix::from_real_rows(&[&[3.0, 1.0], &[0.0, 1.0 / 3.0]]),
        ],
    )
    .expect("shapes match")
}

/// Weights of the cocharacter used with [`limit_to_commuting_pair`].
pub const LIMIT_WEIGHTS: [i64; 2] = [1, -1];

/// The expected limit of [`limit_to_commuting_pair`].
pub fn commuting_limit() -> Representation {
    Representation::new(
        GroupFamily::sl(2),
        FinAbGroup::free(2).expect("rank 2"),
        vec![
            ComplexMatrix::from_real_diagonal(&[2.0, 0.5]),
            ComplexMatrix::from_real_diagonal(&[3.0, 1.0 / 3.0]),
        ],
    )
    .expect("shapes match")
}
