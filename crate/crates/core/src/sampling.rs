//! Seeded random generators for the property suites.
//!
//! All randomness goes through [`SampleRng`] (ChaCha8, seeded with
//! `seed_from_u64`), so a seed fully determines every sample.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::ComplexMatrix;

pub type SampleRng = ChaCha8Rng;

/// Name of the generator, for report headers.
pub const RNG_NAME: &str = "ChaCha8Rng::seed_from_u64";

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in the square `[-1, 1] × [-1, 1]`.
pub fn complex_in_square<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
}

/// Unit-modulus number with uniform phase.
pub fn unit_phase<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI))
}

/// Haar-ish unitary from the QR factor of a random complex matrix.
pub fn unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let m = DMatrix::from_fn(n, n, |_, _| complex_in_square(rng));
    let q = m.qr().q();
    ComplexMatrix::from_dmatrix(q).expect("finite unitary")
}

/// `U · diag(s) · V` with singular values log-uniform in `[1, cond]`,
/// so the two-norm condition number is at most `cond`.
pub fn well_conditioned<R: Rng>(rng: &mut R, n: usize, cond: f64) -> ComplexMatrix {
    let u = unitary(rng, n);
    let v = unitary(rng, n);
    let log_max = cond.max(1.0).ln();
    let s: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.random_range(0.0..=log_max).exp(), 0.0))
        .collect();
    &(&u * &ComplexMatrix::from_diagonal(&s)) * &v
}

/// Diagonal entries of a random `SL(n)` torus element whose moduli lie in
/// `[min_mod, max_mod]` and whose product is exactly representable as one.
pub fn sl_torus_entries<R: Rng>(rng: &mut R, n: usize, min_mod: f64, max_mod: f64) -> Vec<Complex64> {
    let (lo, hi) = (min_mod.ln(), max_mod.ln());
    loop {
        let mut logs: Vec<f64> = (0..n - 1).map(|_| rng.random_range(lo..=hi)).collect();
        let last = -logs.iter().sum::<f64>();
        if n > 1 && !(lo..=hi).contains(&last) {
            continue;
        }
        if n == 1 {
            return vec![Complex64::new(1.0, 0.0)];
        }
        logs.push(last);
        let mut phases: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
        phases.push(-phases.iter().sum::<f64>());
        return logs
            .iter()
            .zip(&phases)
            .map(|(&lm, &ph)| Complex64::from_polar(lm.exp(), ph))
            .collect();
    }
}

/// Random semisimple element of `SL(n, ℂ)`: `l · D · l^{-1}` with `D`
/// from [`sl_torus_entries`] and `l` of condition number at most `cond`.
pub fn sl_semisimple<R: Rng>(rng: &mut R, n: usize, min_mod: f64, max_mod: f64, cond: f64) -> ComplexMatrix {
    let d = ComplexMatrix::from_diagonal(&sl_torus_entries(rng, n, min_mod, max_mod));
    let l = well_conditioned(rng, n, cond);
    l.conjugate(&d).expect("well-conditioned conjugator is invertible")
}

/// A commuting GL(n) tuple `l · B_i · l^{-1}`.
///
/// With `plant_unipotent`, the first two basis vectors carry a 2×2 upper
/// triangular Toeplitz block in every generator and at least one generator
/// (the returned index) gets a nonzero nilpotent part there. Otherwise every
/// `B_i` is diagonal. Requires `n ≥ 2` when planting.
pub fn commuting_gl_tuple<R: Rng>(
    rng: &mut R,
    n: usize,
    r: usize,
    plant_unipotent: bool,
    cond: f64,
) -> (Vec<ComplexMatrix>, Option<usize>) {
    let l = well_conditioned(rng, n, cond);
    let l_inv = l.inverse().expect("well-conditioned conjugator is invertible");
    let planted = if plant_unipotent {
        Some(rng.random_range(0..r))
    } else {
        None
    };
    let images = (0..r)
        .map(|i| {
            let mut b = ComplexMatrix::zeros(n);
            for d in 0..n {
                let z = Complex64::from_polar(rng.random_range(0.3..3.0), rng.random_range(0.0..2.0 * PI));
                b.set(d, d, z);
            }
            if plant_unipotent {
                // the 2×2 leading block must be scalar + nilpotent in every generator
                let lead = b.get(0, 0);
                b.set(1, 1, lead);
                let nil = if Some(i) == planted {
                    Complex64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..2.0 * PI))
                } else if rng.random_bool(0.5) {
                    complex_in_square(rng)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                b.set(0, 1, nil);
            }
            &(&l * &b) * &l_inv
        })
        .collect();
    (images, planted)
}
