//! Spectral projectors, semisimplicity and the multiplicative Jordan
//! decomposition.
//!
//! Eigenvalues come from a complex Schur factorisation. They are grouped into
//! clusters, and each cluster gets an orthonormal basis of its generalised
//! eigenspace (null space of `∏ (A − λ_j)` over the cluster, via SVD). The
//! bases are assembled into `V`; the rows of `V^{-1}` give the dual bases and
//! `P_c = V_c W_c`.
//!
//! Clusters merge in two situations: eigenvalues closer than
//! `cluster_tol · ρ(A)`, or an eigenbasis whose condition number exceeds
//! `cond_max`. The second rule catches Jordan blocks that rounding has split
//! into nearby simple eigenvalues with almost parallel eigenvectors.

use nalgebra::{DMatrix, Schur, SVD};
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::tolerances::Tolerances;
use crate::error::{Error, Result};

const SCHUR_MAX_ITER: usize = 100_000;

/// Eigenvalue clusters of a matrix together with their spectral projectors.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<Complex64>,
    multiplicities: Vec<usize>,
    projectors: Vec<ComplexMatrix>,
    bases: Vec<DMatrix<Complex64>>,
    duals: Vec<DMatrix<Complex64>>,
    basis_condition: f64,
}

impl SpectralDecomposition {
    /// Distinct (clustered) eigenvalues, sorted by `(Re, Im)`.
    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    /// Algebraic multiplicity of each cluster.
    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    /// Number of clusters.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `n × k` basis of the `c`-th generalised eigenspace.
    pub fn basis(&self, c: usize) -> &DMatrix<Complex64> {
        &self.bases[c]
    }

    /// `k × n` rows of `V^{-1}` dual to [`Self::basis`].
    pub fn dual(&self, c: usize) -> &DMatrix<Complex64> {
        &self.duals[c]
    }

    /// Condition number of the assembled eigenbasis.
    pub fn basis_condition(&self) -> f64 {
        self.basis_condition
    }

    /// Eigenvalue list with multiplicities expanded.
    pub fn eigenvalues_with_multiplicity(&self) -> Vec<Complex64> {
        self.eigenvalues
            .iter()
            .zip(&self.multiplicities)
            .flat_map(|(&z, &k)| std::iter::repeat_n(z, k))
            .collect()
    }

    /// Spectral calculus: `Σ f(λ_c) P_c`.
    pub fn apply<F: Fn(Complex64) -> Complex64>(&self, f: F) -> ComplexMatrix {
        let n = self.projectors[0].dim();
        let mut acc = DMatrix::zeros(n, n);
        for (z, p) in self.eigenvalues.iter().zip(&self.projectors) {
            acc += p.as_dmatrix() * f(*z);
        }
        ComplexMatrix::from_dmatrix(acc).expect("spectral calculus produced non-finite entries")
    }

    /// Semisimple part `Σ λ_c P_c` of the additive Jordan decomposition.
    pub fn semisimple_part(&self) -> ComplexMatrix {
        self.apply(|z| z)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Computes clustered eigenvalues and spectral projectors of `m`.
pub fn eigendecompose(m: &ComplexMatrix, tol: &Tolerances) -> Result<SpectralDecomposition> {
    tol.validate()?;
    let n = m.dim();
    let scale = m.frobenius_norm();
    if scale == 0.0 {
        return Ok(single_cluster(n, Complex64::new(0.0, 0.0)));
    }
    let a = m.as_dmatrix() / Complex64::new(scale, 0.0);
    let raw = schur_eigenvalues(&a)?;

    let rho = raw.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut clusters = cluster_by_gap(&raw, tol.cluster_tol * rho);
    let mut bases: Vec<DMatrix<Complex64>> = clusters
        .iter()
        .map(|c| generalized_eigenspace(&a, &raw, c))
        .collect::<Result<_>>()?;

    let mut v = assemble(&bases);
    let mut cond = condition_number(&v);
    while cond > tol.cond_max && clusters.len() > 1 {
        let (i, j) = least_separated_pair(&bases);
        let mut merged = clusters[i].clone();
        merged.extend_from_slice(&clusters[j]);
        // j > i, so removing j first keeps i valid
        clusters.remove(j);
        bases.remove(j);
        clusters[i] = merged;
        bases[i] = generalized_eigenspace(&a, &raw, &clusters[i])?;
        v = assemble(&bases);
        cond = condition_number(&v);
    }

    let w = v
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NumericalFailure("eigenbasis is singular".into()))?;

    let mut parts = Vec::with_capacity(clusters.len());
    let mut offset = 0;
    for basis in bases {
        let k = basis.ncols();
        let dual = w.rows(offset, k).into_owned();
        offset += k;
        // Rayleigh-quotient refinement of the cluster eigenvalue.
        let restricted = &dual * &a * &basis;
        let mean = restricted.trace() / Complex64::new(k as f64, 0.0) * scale;
        let projector = &basis * &dual;
        parts.push((mean, k, projector, basis, dual));
    }
    parts.sort_by(|x, y| x.0.re.total_cmp(&y.0.re).then(x.0.im.total_cmp(&y.0.im)));

    let mut out = SpectralDecomposition {
        eigenvalues: Vec::new(),
        multiplicities: Vec::new(),
        projectors: Vec::new(),
        bases: Vec::new(),
        duals: Vec::new(),
        basis_condition: cond,
    };
    for (mean, k, p, basis, dual) in parts {
        out.eigenvalues.push(mean);
        out.multiplicities.push(k);
        out.projectors.push(
            ComplexMatrix::from_dmatrix(p)
                .map_err(|_| Error::NumericalFailure("non-finite projector".into()))?,
        );
        out.bases.push(basis);
        out.duals.push(dual);
    }
    Ok(out)
}

/// True iff `m` is diagonalizable: its semisimple part reconstructs `m`.
pub fn is_semisimple(m: &ComplexMatrix, tol: &Tolerances) -> Result<bool> {
    let dec = eigendecompose(m, tol)?;
    Ok(jordan_residual(m, &dec) <= semisimple_threshold(m, &dec, tol))
}

/// `‖m − s‖_F` where `s` is the semisimple part.
pub(crate) fn jordan_residual(m: &ComplexMatrix, dec: &SpectralDecomposition) -> f64 {
    (m - &dec.semisimple_part()).frobenius_norm()
}

/// Reconstruction of a diagonalizable matrix loses about `ε · κ(V)` relative
/// accuracy, so the threshold never drops below that floor.
pub(crate) fn semisimple_threshold(
    m: &ComplexMatrix,
    dec: &SpectralDecomposition,
    tol: &Tolerances,
) -> f64 {
    let floor = 64.0 * f64::EPSILON * dec.basis_condition();
    tol.eq_tol.max(floor) * m.frobenius_norm().max(1.0)
}

/// Multiplicative Jordan decomposition `m = s·u = u·s`.
pub fn multiplicative_jordan(
    m: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let dec = eigendecompose(m, tol)?;
    let floor = tol.scaled(m.frobenius_norm()) * f64::EPSILON.sqrt();
    if dec.eigenvalues().iter().any(|z| z.norm() <= floor) {
        return Err(Error::SingularInput);
    }
    let s = dec.semisimple_part();
    let s_inv = dec.apply(|z| z.inv());
    let u = &s_inv * m;
    Ok((s, u))
}

/// `‖ab − ba‖_F ≤ eq_tol · max(1, ‖a‖_F ‖b‖_F)`.
pub fn commutes(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerances) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(commutator_norm(a, b) <= tol.scaled(a.frobenius_norm() * b.frobenius_norm()))
}

pub(crate) fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (&(a * b) - &(b * a)).frobenius_norm()
}

fn single_cluster(n: usize, z: Complex64) -> SpectralDecomposition {
    SpectralDecomposition {
        eigenvalues: vec![z],
        multiplicities: vec![n],
        projectors: vec![ComplexMatrix::identity(n)],
        bases: vec![DMatrix::identity(n, n)],
        duals: vec![DMatrix::identity(n, n)],
        basis_condition: 1.0,
    }
}

fn schur_eigenvalues(a: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if n == 1 {
        return Ok(vec![a[(0, 0)]]);
    }
    let schur = Schur::try_new(a.clone(), f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::NumericalFailure("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        // Leftover 2x2 blocks are solved directly.
        if i + 1 < n && t[(i + 1, i)].norm() > f64::EPSILON * (t[(i, i)].norm() + t[(i + 1, i + 1)].norm()) {
            let (p, q, r, s) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let half_tr = (p + s) * 0.5;
            let disc = ((p - s) * 0.5 * ((p - s) * 0.5) + q * r).sqrt();
            out.push(half_tr + disc);
            out.push(half_tr - disc);
            i += 2;
        } else {
            out.push(t[(i, i)]);
            i += 1;
        }
    }
    if out.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NumericalFailure("non-finite eigenvalue".into()));
    }
    Ok(out)
}

/// Single-linkage grouping of eigenvalue indices.
fn cluster_by_gap(values: &[Complex64], threshold: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= threshold {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_slot[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_slot[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// Orthonormal basis of the null space of `∏_{j ∈ members} (a − λ_j I)`.
fn generalized_eigenspace(
    a: &DMatrix<Complex64>,
    values: &[Complex64],
    members: &[usize],
) -> Result<DMatrix<Complex64>> {
    let n = a.nrows();
    let k = members.len();
    if k == n {
        return Ok(DMatrix::identity(n, n));
    }
    let mut product = DMatrix::<Complex64>::identity(n, n);
    for &j in members {
        let mut shifted = a.clone();
        for d in 0..n {
            shifted[(d, d)] -= values[j];
        }
        product = &product * &shifted;
    }
    let svd = SVD::try_new(product, false, true, f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::NumericalFailure("SVD did not converge".into()))?;
    let v = svd
        .v_t
        .ok_or_else(|| Error::NumericalFailure("SVD returned no right vectors".into()))?
        .adjoint();
    Ok(v.columns(n - k, k).into_owned())
}

fn assemble(bases: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    let n = bases[0].nrows();
    let mut v = DMatrix::zeros(n, n);
    let mut col = 0;
    for b in bases {
        v.columns_mut(col, b.ncols()).copy_from(b);
        col += b.ncols();
    }
    v
}

fn condition_number(m: &DMatrix<Complex64>) -> f64 {
    let sv = m.clone().singular_values();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        sv.max() / min
    }
}

/// Pair of clusters whose subspaces are closest to linearly dependent.
fn least_separated_pair(bases: &[DMatrix<Complex64>]) -> (usize, usize) {
    let mut best = (0, 1);
    let mut best_sigma = f64::INFINITY;
    for i in 0..bases.len() {
        for j in (i + 1)..bases.len() {
            let sigma = min_singular_value(&hstack(&bases[i], &bases[j]));
            if sigma < best_sigma {
                best_sigma = sigma;
                best = (i, j);
            }
        }
    }
    best
}

fn hstack(x: &DMatrix<Complex64>, y: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(x.nrows(), x.ncols() + y.ncols());
    out.columns_mut(0, x.ncols()).copy_from(x);
    out.columns_mut(x.ncols(), y.ncols()).copy_from(y);
    out
}

fn min_singular_value(m: &DMatrix<Complex64>) -> f64 {
    m.clone().singular_values().min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn identity_has_single_cluster() {
        let dec = eigendecompose(&ComplexMatrix::identity(3), &tol()).unwrap();
        assert_eq!(dec.len(), 1);
        assert_eq!(dec.multiplicities(), &[3]);
        assert!((dec.eigenvalues()[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!(dec.projectors()[0].relative_distance(&ComplexMatrix::identity(3)) < 1e-14);
    }

    #[test]
    fn diagonal_input_gives_coordinate_projectors() {
        let m = ComplexMatrix::from_real_diagonal(&[2.0, 0.5]);
        let dec = eigendecompose(&m, &tol()).unwrap();
        assert_eq!(dec.len(), 2);
        // sorted by real part: 0.5 first
        assert!((dec.eigenvalues()[0] - c(0.5, 0.0)).norm() < 1e-14);
        assert!((dec.eigenvalues()[1] - c(2.0, 0.0)).norm() < 1e-14);
        let p0 = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        let p1 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert!(dec.projectors()[0].relative_distance(&p0) < 1e-14);
        assert!(dec.projectors()[1].relative_distance(&p1) < 1e-14);
    }

    #[test]
    fn rotation_projectors_match_hand_computation() {
        // λ² + 1 = 0, eigenvectors (1, i) for i and (1, −i) for −i.
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let dec = eigendecompose(&m, &tol()).unwrap();
        assert_eq!(dec.len(), 2);
        let (lo, hi) = (dec.eigenvalues()[0], dec.eigenvalues()[1]);
        assert!((lo - c(0.0, -1.0)).norm() < 1e-12);
        assert!((hi - c(0.0, 1.0)).norm() < 1e-12);
        let p_minus = ComplexMatrix::from_rows(&[&[c(0.5, 0.0), c(0.0, 0.5)], &[c(0.0, -0.5), c(0.5, 0.0)]]);
        let p_plus = ComplexMatrix::from_rows(&[&[c(0.5, 0.0), c(0.0, -0.5)], &[c(0.0, 0.5), c(0.5, 0.0)]]);
        assert!(dec.projectors()[0].relative_distance(&p_minus) < 1e-12);
        assert!(dec.projectors()[1].relative_distance(&p_plus) < 1e-12);
    }

    #[test]
    fn projector_invariants() {
        let m = ComplexMatrix::from_rows(&[
            &[c(1.0, 0.5), c(2.0, 0.0), c(0.0, 1.0)],
            &[c(0.0, 0.0), c(-1.0, 0.0), c(3.0, -1.0)],
            &[c(0.5, 0.0), c(0.0, 0.0), c(2.0, 2.0)],
        ]);
        let dec = eigendecompose(&m, &tol()).unwrap();
        let n = 3;
        let mut sum = ComplexMatrix::zeros(n);
        for p in dec.projectors() {
            sum = &sum + p;
        }
        assert!(sum.relative_distance(&ComplexMatrix::identity(n)) < 1e-10);
        for (i, p) in dec.projectors().iter().enumerate() {
            for (j, q) in dec.projectors().iter().enumerate() {
                if i != j {
                    assert!((p * q).frobenius_norm() < 1e-10);
                }
            }
        }
        assert!(dec.semisimple_part().relative_distance(&m) < 1e-10);
    }

    #[test]
    fn jordan_block_is_not_semisimple() {
        let j = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(!is_semisimple(&j, &tol()).unwrap());
        assert!(is_semisimple(&ComplexMatrix::from_real_diagonal(&[3.0, -2.0, 3.0]), &tol()).unwrap());
        let rot = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        assert!(is_semisimple(&rot, &tol()).unwrap());
    }

    #[test]
    fn conjugated_jordan_block_is_detected() {
        // rounding splits the double eigenvalue; the conditioning rule must merge it back
        let l = ComplexMatrix::from_rows(&[
            &[c(1.0, 0.2), c(0.3, 0.0), c(-0.5, 0.1)],
            &[c(0.2, -0.4), c(1.5, 0.0), c(0.7, 0.0)],
            &[c(0.0, 0.3), c(-0.6, 0.2), c(0.9, -0.1)],
        ]);
        let j = ComplexMatrix::from_rows(&[
            &[c(2.0, 1.0), c(1.0, 0.0), c(0.0, 0.0)],
            &[c(0.0, 0.0), c(2.0, 1.0), c(0.0, 0.0)],
            &[c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)],
        ]);
        let m = l.conjugate(&j).unwrap();
        assert!(!is_semisimple(&m, &tol()).unwrap());
        let d = ComplexMatrix::from_diagonal(&[c(2.0, 1.0), c(2.0, 1.0), c(-0.5, 0.0)]);
        assert!(is_semisimple(&l.conjugate(&d).unwrap(), &tol()).unwrap());
    }

    #[test]
    fn jordan_examples() {
        let d = ComplexMatrix::from_real_diagonal(&[2.0, 0.5]);
        let (s, u) = multiplicative_jordan(&d, &tol()).unwrap();
        assert!(s.relative_distance(&d) < 1e-14);
        assert!(u.relative_distance(&ComplexMatrix::identity(2)) < 1e-14);

        let unip = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let (s, u) = multiplicative_jordan(&unip, &tol()).unwrap();
        assert!(s.relative_distance(&ComplexMatrix::identity(2)) < 1e-14);
        assert!(u.relative_distance(&unip) < 1e-14);

        // additive Jordan form: s is the diagonal part, u = s^{-1} m
        let m = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 2.0]]);
        let (s, u) = multiplicative_jordan(&m, &tol()).unwrap();
        assert!(s.relative_distance(&ComplexMatrix::from_real_diagonal(&[2.0, 2.0])) < 1e-14);
        let expected_u = ComplexMatrix::from_real_rows(&[&[1.0, 0.5], &[0.0, 1.0]]);
        assert!(u.relative_distance(&expected_u) < 1e-14);
    }

    #[test]
    fn jordan_rejects_singular() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(multiplicative_jordan(&m, &tol()).unwrap_err(), Error::SingularInput);
    }

    #[test]
    fn commutation_examples() {
        let t = tol();
        let a = ComplexMatrix::from_real_diagonal(&[2.0, 3.0]);
        let b = ComplexMatrix::from_real_diagonal(&[5.0, 7.0]);
        assert!(commutes(&a, &b, &t).unwrap());
        let g = ComplexMatrix::from_real_diagonal(&[2.0, 0.5]);
        let h = ComplexMatrix::from_real_rows(&[&[3.0, 1.0], &[0.0, 1.0 / 3.0]]);
        assert!(!commutes(&g, &h, &t).unwrap());
        let m = ComplexMatrix::from_rows(&[&[c(1.0, 2.0), c(-3.0, 0.5)], &[c(0.25, 0.0), c(4.0, -1.0)]]);
        assert!(commutes(&m, &m.pow(2), &t).unwrap());
        assert!(matches!(
            commutes(&a, &ComplexMatrix::identity(3), &t),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
