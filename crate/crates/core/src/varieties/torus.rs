use nalgebra::DMatrix;
use num_complex::Complex64;

use super::validate::validate_representation;
use super::weyl::TorusPoint;
use super::Representation;
use crate::error::{Error, Result};
use crate::linalg::{commutes, eigendecompose, is_semisimple, ComplexMatrix, Tolerances};

/// Result of [`simultaneous_diagonalize`]: `conjugator · ρ_i · conjugator^{-1}`
/// is diagonal with diagonal `point.row(i)`.
#[derive(Debug, Clone)]
pub struct TorusReduction {
    pub conjugator: ComplexMatrix,
    pub point: TorusPoint,
}

/// Conjugates a commuting semisimple GL/SL tuple into the diagonal torus.
///
/// The space is split along the eigenspaces of the first generator, then each
/// block along the eigenspaces of the second generator restricted to it, and
/// so on. Leaves are joint eigenspaces; their bases make up the conjugator.
/// Success is certified at the end by checking the conjugated images are
/// diagonal, so a non-semisimple image surfaces as `NotSemisimple`.
pub fn simultaneous_diagonalize(rho: &Representation, tol: &Tolerances) -> Result<TorusReduction> {
    tol.validate()?;
    rho.group().require_linear()?;
    let images = rho.images();
    for i in 0..images.len() {
        for k in (i + 1)..images.len() {
            if !commutes(&images[i], &images[k], tol)? {
                return Err(Error::NotSimultaneouslyDiagonalizable(format!(
                    "generators {i} and {k} do not commute"
                )));
            }
        }
    }

    let n = rho.matrix_size();
    let mut leaves = Vec::new();
    split(
        images,
        DMatrix::identity(n, n),
        DMatrix::identity(n, n),
        0,
        tol,
        &mut leaves,
    )?;

    let mut h_inv = DMatrix::<Complex64>::zeros(n, n);
    let mut h = DMatrix::<Complex64>::zeros(n, n);
    let mut offset = 0;
    for (v, w) in &leaves {
        let k = v.ncols();
        h_inv.columns_mut(offset, k).copy_from(v);
        h.rows_mut(offset, k).copy_from(w);
        offset += k;
    }
    let conjugator = ComplexMatrix::from_dmatrix(h)
        .map_err(|_| Error::NumericalFailure("non-finite conjugator".into()))?;
    let conjugator_inv = ComplexMatrix::from_dmatrix(h_inv)
        .map_err(|_| Error::NumericalFailure("non-finite conjugator".into()))?;
    let cond = conjugator.condition_number();
    if cond > tol.cond_max {
        return Err(Error::NumericalFailure(format!(
            "joint eigenbasis condition number {cond:e} exceeds cond_max"
        )));
    }

    let mut rows = Vec::with_capacity(images.len());
    for (i, g) in images.iter().enumerate() {
        let d = &(&conjugator * g) * &conjugator_inv;
        let threshold = tol.eq_tol * cond * g.frobenius_norm().max(1.0);
        if d.off_diagonal_norm() > threshold {
            return Err(Error::NotSemisimple { generator: Some(i) });
        }
        rows.push(d.diagonal());
    }
    let point = TorusPoint::new(rows)?;
    Ok(TorusReduction { conjugator, point })
}

fn split(
    images: &[ComplexMatrix],
    basis: DMatrix<Complex64>,
    dual: DMatrix<Complex64>,
    generator: usize,
    tol: &Tolerances,
    leaves: &mut Vec<(DMatrix<Complex64>, DMatrix<Complex64>)>,
) -> Result<()> {
    if basis.ncols() == 1 || generator == images.len() {
        leaves.push((basis, dual));
        return Ok(());
    }
    let restricted = &dual * images[generator].as_dmatrix() * &basis;
    let restricted = ComplexMatrix::from_dmatrix(restricted)
        .map_err(|_| Error::NumericalFailure("non-finite restriction".into()))?;
    let dec = eigendecompose(&restricted, tol)?;
    if dec.len() == 1 {
        return split(images, basis, dual, generator + 1, tol, leaves);
    }
    for c in 0..dec.len() {
        let sub_basis = &basis * dec.basis(c);
        let sub_dual = dec.dual(c) * &dual;
        split(images, sub_basis, sub_dual, generator + 1, tol, leaves)?;
    }
    Ok(())
}

/// True iff the tuple can be conjugated into a single maximal torus.
pub fn lies_in_common_torus(rho: &Representation, tol: &Tolerances) -> Result<bool> {
    match simultaneous_diagonalize(rho, tol) {
        Ok(_) => Ok(true),
        Err(Error::NotSemisimple { .. }) | Err(Error::NotSimultaneouslyDiagonalizable(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// A representation of an abelian group has closed orbit iff every
/// generator image is semisimple.
pub fn is_polystable(rho: &Representation, tol: &Tolerances) -> Result<bool> {
    let report = validate_representation(rho, tol)?;
    if !report.is_valid() {
        return Err(Error::InvalidRepresentation(report.summary()));
    }
    for g in rho.images() {
        if !is_semisimple(g, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}
