//! Deformation retraction of semisimple elements onto conjugates of the
//! compact group.
//!
//! On the diagonal torus the flow is `σ_t(z) = |z|^{-t} z` entrywise. On a
//! semisimple matrix it acts through spectral calculus,
//! `δ_t(g) = Σ σ_t(λ_c) P_c`, which is the same as diagonalising, applying
//! `σ_t` and conjugating back, without depending on the chosen diagonaliser.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigendecompose, jordan_residual, semisimple_threshold, ComplexMatrix, Tolerances};
use crate::varieties::Representation;

/// Time parameter in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct RetractionTime(f64);

impl RetractionTime {
    pub fn new(t: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&t) {
            Ok(RetractionTime(t))
        } else {
            Err(Error::InvalidTime(t))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub const START: RetractionTime = RetractionTime(0.0);
    pub const END: RetractionTime = RetractionTime(1.0);
}

impl TryFrom<f64> for RetractionTime {
    type Error = Error;
    fn try_from(t: f64) -> Result<Self> {
        RetractionTime::new(t)
    }
}

impl From<RetractionTime> for f64 {
    fn from(t: RetractionTime) -> f64 {
        t.0
    }
}

/// Scalar flow `z ↦ |z|^{-t} z`.
fn flow(z: Complex64, t: f64) -> Complex64 {
    if t == 0.0 {
        z
    } else {
        z * z.norm().powf(-t)
    }
}

/// `σ_t` on the diagonal entries of a torus element.
pub fn sigma_t(z: &[Complex64], t: RetractionTime) -> Result<Vec<Complex64>> {
    if z.iter().any(|w| w.re == 0.0 && w.im == 0.0) {
        return Err(Error::ZeroEigenvalue);
    }
    Ok(z.iter().map(|&w| flow(w, t.0)).collect())
}

/// `δ_t(g)` for a semisimple invertible matrix.
pub fn delta_t(g: &ComplexMatrix, t: RetractionTime, tol: &Tolerances) -> Result<ComplexMatrix> {
    let dec = eigendecompose(g, tol)?;
    if jordan_residual(g, &dec) > semisimple_threshold(g, &dec, tol) {
        return Err(Error::NotSemisimple { generator: None });
    }
    let floor = tol.scaled(g.frobenius_norm()) * f64::EPSILON.sqrt();
    if dec.eigenvalues().iter().any(|z| z.norm() <= floor) {
        return Err(Error::ZeroEigenvalue);
    }
    if t.0 == 0.0 {
        return Ok(g.clone());
    }
    Ok(dec.apply(|z| flow(z, t.0)))
}

/// Applies [`delta_t`] to every generator image.
///
/// Torsion images have unit-modulus spectrum, so the flow fixes them; this
/// is checked rather than assumed.
pub fn delta_tuple(rho: &Representation, t: RetractionTime, tol: &Tolerances) -> Result<Representation> {
    let mut images = Vec::with_capacity(rho.images().len());
    for (i, g) in rho.images().iter().enumerate() {
        let out = delta_t(g, t, tol).map_err(|e| match e {
            Error::NotSemisimple { .. } => Error::NotSemisimple { generator: Some(i) },
            other => other,
        })?;
        if let Some(order) = rho.gamma().order_of(i) {
            let drift = out.relative_distance(g);
            if drift > tol.eq_tol.max(1e3 * f64::EPSILON * g.condition_number()) {
                return Err(Error::InvalidRepresentation(format!(
                    "generator {i} of order {order} moved under the flow by {drift:e}; \
                     its eigenvalues are not roots of unity"
                )));
            }
        }
        images.push(out);
    }
    rho.with_images(images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::varieties::{FinAbGroup, GroupFamily};
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn t(x: f64) -> RetractionTime {
        RetractionTime::new(x).unwrap()
    }

    #[test]
    fn time_is_bounded() {
        assert!(RetractionTime::new(-0.1).is_err());
        assert!(RetractionTime::new(1.5).is_err());
        assert!(RetractionTime::new(f64::NAN).is_err());
    }

    #[test]
    fn sigma_examples() {
        let out = sigma_t(&[c(2.0, 0.0), c(0.5, 0.0)], t(1.0)).unwrap();
        assert!((out[0] - c(1.0, 0.0)).norm() < 1e-15 && (out[1] - c(1.0, 0.0)).norm() < 1e-15);
        for s in [0.0, 0.3, 1.0] {
            let out = sigma_t(&[c(0.0, 1.0), c(0.0, -1.0)], t(s)).unwrap();
            assert_eq!(out, vec![c(0.0, 1.0), c(0.0, -1.0)]);
        }
        // |z|^{-1/2} z per entry
        let out = sigma_t(&[c(0.0, 2.0), c(0.0, -0.5)], t(0.5)).unwrap();
        assert!((out[0] - c(0.0, SQRT_2)).norm() < 1e-15);
        assert!((out[1] - c(0.0, -1.0 / SQRT_2)).norm() < 1e-15);
        assert_eq!(sigma_t(&[c(0.0, 0.0)], t(0.5)), Err(Error::ZeroEigenvalue));
    }

    #[test]
    fn sigma_is_a_homomorphism() {
        let a = [c(2.0, 1.0), c(-0.3, 0.1)];
        let b = [c(0.5, -4.0), c(1.0, 1.0)];
        let ab: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        let s = t(0.7);
        let lhs = sigma_t(&ab, s).unwrap();
        let (sa, sb) = (sigma_t(&a, s).unwrap(), sigma_t(&b, s).unwrap());
        for k in 0..2 {
            assert!((lhs[k] - sa[k] * sb[k]).norm() < 1e-14);
        }
    }

    #[test]
    fn delta_on_diagonal_and_triangular_inputs() {
        let d = ComplexMatrix::from_real_diagonal(&[2.0, 0.5]);
        assert!(delta_t(&d, t(1.0), &tol()).unwrap().relative_distance(&ComplexMatrix::identity(2)) < 1e-14);
        let m = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 0.5]]);
        assert!(delta_t(&m, t(1.0), &tol()).unwrap().relative_distance(&ComplexMatrix::identity(2)) < 1e-13);
    }

    #[test]
    fn delta_fixes_conjugates_of_unitaries() {
        let k = ComplexMatrix::from_rows(&[&[c(0.6, 0.0), c(0.0, 0.8)], &[c(0.0, 0.8), c(0.6, 0.0)]]);
        let u = ComplexMatrix::from_rows(&[&[c(1.0, 0.5), c(2.0, 0.0)], &[c(0.0, -1.0), c(0.7, 0.2)]]);
        let g = u.conjugate(&k).unwrap();
        for s in [0.25, 0.5, 1.0] {
            assert!(delta_t(&g, t(s), &tol()).unwrap().relative_distance(&g) < 1e-12);
        }
    }

    #[test]
    fn delta_rejects_bad_inputs() {
        let j = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert_eq!(delta_t(&j, t(0.5), &tol()), Err(Error::NotSemisimple { generator: None }));
        let z = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        assert_eq!(delta_t(&z, t(0.5), &tol()), Err(Error::ZeroEigenvalue));
    }

    #[test]
    fn tuple_examples() {
        let gamma = FinAbGroup::free(2).unwrap();
        let triv = Representation::trivial(GroupFamily::sl(2), gamma.clone());
        assert_eq!(delta_tuple(&triv, t(0.6), &tol()).unwrap(), triv);

        let w = Complex64::from_polar(1.0, FRAC_PI_4);
        let rho = Representation::new(
            GroupFamily::sl(2),
            gamma,
            vec![
                ComplexMatrix::from_real_diagonal(&[2.0, 0.5]),
                ComplexMatrix::from_diagonal(&[w * 3.0, w.inv() / 3.0]),
            ],
        )
        .unwrap();
        let out = delta_tuple(&rho, t(1.0), &tol()).unwrap();
        assert!(out.images()[0].relative_distance(&ComplexMatrix::identity(2)) < 1e-14);
        assert!(out.images()[1].relative_distance(&ComplexMatrix::from_diagonal(&[w, w.inv()])) < 1e-14);
    }

    #[test]
    fn torsion_generator_stays_torsion() {
        let l = ComplexMatrix::from_rows(&[&[c(1.0, 0.0), c(0.4, 0.2)], &[c(-0.3, 0.0), c(1.2, 0.5)]]);
        let g = l.conjugate(&ComplexMatrix::from_diagonal(&[c(0.0, 1.0), c(0.0, -1.0)])).unwrap();
        let rho = Representation::new(GroupFamily::sl(2), FinAbGroup::new(0, vec![4]).unwrap(), vec![g]).unwrap();
        for s in [0.0, 0.5, 1.0] {
            let out = delta_tuple(&rho, t(s), &tol()).unwrap();
            let p = out.images()[0].pow(4);
            assert!(p.relative_distance(&ComplexMatrix::identity(2)) < 1e-12);
        }
    }

    #[test]
    fn tuple_error_names_generator() {
        let rho = Representation::new(
            GroupFamily::sl(2),
            FinAbGroup::free(2).unwrap(),
            vec![ComplexMatrix::identity(2), ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]])],
        )
        .unwrap();
        assert_eq!(
            delta_tuple(&rho, t(0.5), &tol()),
            Err(Error::NotSemisimple { generator: Some(1) })
        );
    }
}
