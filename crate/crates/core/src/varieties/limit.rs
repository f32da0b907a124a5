use super::Representation;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Tolerances};

/// Limit as `t → 0` of conjugation by `diag(t^{w_1}, …, t^{w_n})`.
///
/// Entry `(i, j)` scales by `t^{w_i − w_j}`. The limit exists iff every entry
/// with `w_i < w_j` vanishes (within tolerance); entries with `w_i > w_j` go
/// to exactly zero and the rest are unchanged.
pub fn cochar_limit(rho: &Representation, weights: &[i64], tol: &Tolerances) -> Result<Representation> {
    tol.validate()?;
    let n = rho.matrix_size();
    if weights.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: weights.len(),
        });
    }
    let mut images = Vec::with_capacity(rho.images().len());
    for (generator, g) in rho.images().iter().enumerate() {
        let threshold = tol.scaled(g.frobenius_norm());
        let mut limit: ComplexMatrix = g.clone();
        for i in 0..n {
            for j in 0..n {
                let entry = g.get(i, j);
                if weights[i] < weights[j] && entry.norm() > threshold {
                    return Err(Error::NoLimit {
                        generator,
                        row: i,
                        col: j,
                        magnitude: entry.norm(),
                    });
                }
                if weights[i] > weights[j] {
                    limit.set(i, j, num_complex::Complex64::new(0.0, 0.0));
                }
            }
        }
        images.push(limit);
    }
    rho.with_images(images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::varieties::{FinAbGroup, GroupFamily};

    fn pair(a: ComplexMatrix, b: ComplexMatrix) -> Representation {
        Representation::new(GroupFamily::sl(2), FinAbGroup::free(2).unwrap(), vec![a, b]).unwrap()
    }

    #[test]
    fn upper_triangular_pair_limits_to_diagonal() {
        let (x, y) = (2.0, 3.0);
        let rho = pair(
            ComplexMatrix::from_real_diagonal(&[x, 1.0 / x]),
            ComplexMatrix::from_real_rows(&[&[y, 1.0], &[0.0, 1.0 / y]]),
        );
        let lim = cochar_limit(&rho, &[1, -1], &Tolerances::default()).unwrap();
        assert_eq!(lim.images()[0], ComplexMatrix::from_real_diagonal(&[2.0, 0.5]));
        assert_eq!(lim.images()[1], ComplexMatrix::from_real_diagonal(&[3.0, 1.0 / 3.0]));
    }

    #[test]
    fn diagonal_tuple_is_fixed() {
        let rho = pair(
            ComplexMatrix::from_real_diagonal(&[4.0, 0.25]),
            ComplexMatrix::from_real_diagonal(&[-1.0, -1.0]),
        );
        for w in [[1, -1], [-3, 2], [0, 0]] {
            assert_eq!(cochar_limit(&rho, &w, &Tolerances::default()).unwrap(), rho);
        }
    }

    #[test]
    fn lower_entry_blocks_the_limit() {
        let rho = pair(
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[1.0, 1.0]]),
            ComplexMatrix::identity(2),
        );
        assert!(matches!(
            cochar_limit(&rho, &[1, -1], &Tolerances::default()),
            Err(Error::NoLimit { generator: 0, row: 1, col: 0, .. })
        ));
    }

    #[test]
    fn weight_length_is_checked() {
        let rho = Representation::trivial(GroupFamily::sl(2), FinAbGroup::free(1).unwrap());
        assert!(cochar_limit(&rho, &[1], &Tolerances::default()).is_err());
    }
}
