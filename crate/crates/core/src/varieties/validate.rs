use num_complex::Complex64;
use serde::Serialize;

use super::{Family, Representation};
use crate::error::Result;
use crate::linalg::{commutator_norm, eigendecompose, jordan_residual, semisimple_threshold, ComplexMatrix, Tolerances};

/// A failed relation, with the residual that exceeded its threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NonCommuting { i: usize, k: usize, residual: f64, threshold: f64 },
    Torsion { generator: usize, order: u64, residual: f64, threshold: f64 },
    Determinant { generator: usize, residual: f64, threshold: f64 },
    Symplectic { generator: usize, residual: f64, threshold: f64 },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> String {
        self.violations
            .iter()
            .map(|v| match v {
                Violation::NonCommuting { i, k, residual, .. } => {
                    format!("generators {i},{k} do not commute (residual {residual:e})")
                }
                Violation::Torsion { generator, order, residual, .. } => {
                    format!("generator {generator} fails g^{order} = 1 (residual {residual:e})")
                }
                Violation::Determinant { generator, residual, .. } => {
                    format!("generator {generator} has det != 1 (residual {residual:e})")
                }
                Violation::Symplectic { generator, residual, .. } => {
                    format!("generator {generator} is not symplectic (residual {residual:e})")
                }
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Checks pairwise commutation, torsion relations and group membership.
pub fn validate_representation(rho: &Representation, tol: &Tolerances) -> Result<ValidationReport> {
    tol.validate()?;
    let images = rho.images();
    let mut violations = Vec::new();

    for i in 0..images.len() {
        for k in (i + 1)..images.len() {
            let residual = commutator_norm(&images[i], &images[k]);
            let threshold = tol.scaled(images[i].frobenius_norm() * images[k].frobenius_norm());
            if residual > threshold {
                violations.push(Violation::NonCommuting { i, k, residual, threshold });
            }
        }
    }

    for (generator, g) in images.iter().enumerate() {
        if let Some(order) = rho.gamma().order_of(generator) {
            let (residual, scale) = power_residual(g, order);
            let threshold = tol.scaled(scale);
            if residual > threshold {
                violations.push(Violation::Torsion { generator, order, residual, threshold });
            }
        }
        match rho.group().family {
            Family::GL => {}
            Family::SL => {
                let residual = (g.determinant() - Complex64::new(1.0, 0.0)).norm();
                let threshold = tol.scaled(hadamard_bound(g));
                if residual > threshold {
                    violations.push(Violation::Determinant { generator, residual, threshold });
                }
            }
            Family::Sp => {
                let j = standard_symplectic(rho.group().n);
                let residual = (&(&(&g.transpose() * &j) * g) - &j).frobenius_norm();
                let threshold = tol.scaled(g.frobenius_norm().powi(2));
                if residual > threshold {
                    violations.push(Violation::Symplectic { generator, residual, threshold });
                }
            }
        }
    }
    Ok(ValidationReport { violations })
}

/// `‖g^order − I‖_F` and the rounding scale `‖g‖ · max_k ‖g^k‖`.
fn power_residual(g: &ComplexMatrix, order: u64) -> (f64, f64) {
    let n = g.dim();
    let mut acc = ComplexMatrix::identity(n);
    let mut largest: f64 = 1.0;
    for _ in 0..order {
        acc = &acc * g;
        largest = largest.max(acc.frobenius_norm());
    }
    let residual = (&acc - &ComplexMatrix::identity(n)).frobenius_norm();
    (residual, g.frobenius_norm() * largest)
}

/// Product of column norms, an upper bound for `|det g|`.
fn hadamard_bound(g: &ComplexMatrix) -> f64 {
    let n = g.dim();
    (0..n)
        .map(|j| (0..n).map(|i| g.get(i, j).norm_sqr()).sum::<f64>().sqrt())
        .product()
}

/// `J = [[0, I], [−I, 0]]` on `ℂ^{2n}`.
pub(crate) fn standard_symplectic(n: usize) -> ComplexMatrix {
    let mut j = ComplexMatrix::zeros(2 * n);
    for i in 0..n {
        j.set(i, n + i, Complex64::new(1.0, 0.0));
        j.set(n + i, i, Complex64::new(-1.0, 0.0));
    }
    j
}

/// True iff `m` is semisimple with every eigenvalue on the unit circle,
/// i.e. `m` is conjugate into the unitary group.
pub fn is_compact_conjugate(m: &ComplexMatrix, tol: &Tolerances) -> Result<bool> {
    let dec = eigendecompose(m, tol)?;
    if jordan_residual(m, &dec) > semisimple_threshold(m, &dec, tol) {
        return Ok(false);
    }
    let modulus_tol = tol.eq_tol.max(64.0 * f64::EPSILON * dec.basis_condition());
    Ok(dec.eigenvalues().iter().all(|z| (z.norm() - 1.0).abs() <= modulus_tol))
}
