//! Seeded randomized checks of the invariants of each module. Every suite
//! returns one [`LawResult`] per law with its worst residual, so a report can
//! be compared byte for byte across runs.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::classify::{
    decide_connected, decide_irreducible, Branch, FactorFamily, ReductiveGroupDescriptor, SimpleFactor, Verdict,
};
use crate::cohomology::{brute_force_invariant_dims, poincare_polynomial};
use crate::error::{Error, Result};
use crate::linalg::{eigendecompose, ComplexMatrix, Tolerances};
use crate::retraction::{delta_t, delta_tuple, sigma_t, RetractionTime};
use crate::sampling::{self, SampleRng};
use crate::varieties::{
    git_equivalent, is_compact_conjugate, is_polystable, lies_in_common_torus, validate_representation,
    weyl_canonical_form, FinAbGroup, GroupFamily, Representation, TorusPoint,
};

pub const SUITE_NAMES: [&str; 6] = [
    "retraction-laws",
    "polystable-oracle",
    "canonical-weyl",
    "classify-table",
    "cohomology-oracle",
    "quotient-descent",
];

/// Time grid used by the retraction suites.
pub const TIME_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Relative Frobenius tolerance of the retraction laws.
pub const RETRACTION_TOL: f64 = 1e-7;

/// Condition-number bound for random conjugators.
pub const CONJUGATOR_COND: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawResult {
    pub law: String,
    pub passed: bool,
    pub checks: usize,
    pub failures: usize,
    pub worst: f64,
    pub tolerance: f64,
}

impl LawResult {
    fn new(law: &str, tolerance: f64) -> Self {
        LawResult {
            law: law.into(),
            passed: true,
            checks: 0,
            failures: 0,
            worst: 0.0,
            tolerance,
        }
    }

    /// Records a residual against the law's tolerance.
    fn record(&mut self, residual: f64) {
        self.record_against(residual, self.tolerance);
    }

    fn record_against(&mut self, residual: f64, bound: f64) {
        self.checks += 1;
        if residual.is_nan() || residual > bound {
            self.failures += 1;
            self.passed = false;
        }
        if residual.is_nan() || residual > self.worst {
            self.worst = residual;
        }
    }

    /// Records a yes/no check; `worst` counts failures.
    fn record_bool(&mut self, ok: bool) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            self.passed = false;
            self.worst += 1.0;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub rng: &'static str,
    pub seed: u64,
    pub count: usize,
    pub laws: Vec<LawResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.laws.iter().all(|l| l.passed)
    }

    pub fn law(&self, name: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.law == name)
    }
}

/// Runs the named suite.
pub fn run_suite(name: &str, seed: u64, count: usize, tol: &Tolerances) -> Result<SuiteReport> {
    let laws = match name {
        "retraction-laws" => retraction_laws(seed, count, tol)?,
        "polystable-oracle" => polystable_oracle(seed, count, tol)?,
        "canonical-weyl" => canonical_weyl(seed, count)?,
        "classify-table" => classify_table()?,
        "cohomology-oracle" => cohomology_oracle()?,
        "quotient-descent" => quotient_descent(seed, count, tol)?,
        other => return Err(Error::UnknownSuite(other.into())),
    };
    Ok(SuiteReport {
        suite: name.into(),
        rng: sampling::RNG_NAME,
        seed,
        count,
        laws,
    })
}

fn time(t: f64) -> RetractionTime {
    RetractionTime::new(t).expect("grid point in [0, 1]")
}

/// `‖ab − ba‖ / max(1, ‖a‖‖b‖)`.
fn relative_commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (&(a * b) - &(b * a)).frobenius_norm() / 1f64.max(a.frobenius_norm() * b.frobenius_norm())
}

/// A semisimple `SL(3)` sample with its factorisation `g = l · diag(d) · l^{-1}`.
struct Sample {
    l: ComplexMatrix,
    d: Vec<Complex64>,
    g: ComplexMatrix,
}

fn sl3_sample(rng: &mut SampleRng) -> Sample {
    let d = sampling::sl_torus_entries(rng, 3, 0.1, 10.0);
    let l = sampling::well_conditioned(rng, 3, CONJUGATOR_COND);
    let g = l.conjugate(&ComplexMatrix::from_diagonal(&d)).expect("invertible conjugator");
    Sample { l, d, g }
}

/// `δ_t` through an explicit diagonaliser whose columns are shuffled and
/// rescaled, independently of the spectral-projector route.
fn delta_by_diagonaliser(s: &Sample, t: RetractionTime, rng: &mut SampleRng) -> Result<ComplexMatrix> {
    let n = s.d.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut h = ComplexMatrix::zeros(n);
    let mut dt = Vec::with_capacity(n);
    let flowed = sigma_t(&s.d, t)?;
    for (new, &old) in perm.iter().enumerate() {
        let scale = sampling::unit_phase(rng) * rng.random_range(0.5..2.0);
        for i in 0..n {
            h.set(i, new, s.l.get(i, old) * scale);
        }
        dt.push(flowed[old]);
    }
    h.conjugate(&ComplexMatrix::from_diagonal(&dt))
}

/// The nine retraction laws on random `SL(3)` samples over [`TIME_GRID`].
pub fn retraction_laws(seed: u64, count: usize, tol: &Tolerances) -> Result<Vec<LawResult>> {
    let mut rng = sampling::rng(seed);
    let mut identity = LawResult::new("identity_at_zero", RETRACTION_TOL);
    let mut endpoint = LawResult::new("endpoint_unit_modulus", RETRACTION_TOL);
    let mut well_defined = LawResult::new("well_defined", RETRACTION_TOL);
    let mut equivariance = LawResult::new("equivariance", RETRACTION_TOL);
    let mut commuting = LawResult::new("commutativity", RETRACTION_TOL);
    let mut power = LawResult::new("power", RETRACTION_TOL);
    let mut det = LawResult::new("determinant", RETRACTION_TOL);
    let mut stability = LawResult::new("retract_stability", RETRACTION_TOL);
    // residual is the excess of the observed difference quotient over the
    // spectral Lipschitz bound, relative to that bound
    let mut continuity = LawResult::new("continuity", RETRACTION_TOL);

    for _ in 0..count {
        let s = sl3_sample(&mut rng);
        let g = &s.g;
        let partner = s
            .l
            .conjugate(&ComplexMatrix::from_diagonal(&sampling::sl_torus_entries(&mut rng, 3, 0.1, 10.0)))?;
        let m = sampling::well_conditioned(&mut rng, 3, CONJUGATOR_COND);
        let conj = m.conjugate(g)?;
        let powers: Vec<ComplexMatrix> = (2..=5).map(|k| g.pow(k)).collect();

        let at_one = delta_t(g, RetractionTime::END, tol)?;
        let dec = eigendecompose(g, tol)?;
        let lipschitz: f64 = dec
            .eigenvalues()
            .iter()
            .zip(dec.projectors())
            .map(|(z, p)| z.norm().ln().abs() * z.norm().max(1.0) * p.frobenius_norm())
            .sum();

        let mut previous: Option<(f64, ComplexMatrix)> = None;
        for &tv in &TIME_GRID {
            let t = time(tv);
            let dg = delta_t(g, t, tol)?;
            if tv == 0.0 {
                identity.record(dg.relative_distance(g));
            }
            well_defined.record(dg.relative_distance(&delta_by_diagonaliser(&s, t, &mut rng)?));
            let lhs = delta_t(&conj, t, tol)?;
            equivariance.record(lhs.relative_distance(&m.conjugate(&dg)?));
            commuting.record(relative_commutator(&dg, &delta_t(&partner, t, tol)?));
            for (k, gk) in (2u32..).zip(&powers) {
                power.record(delta_t(gk, t, tol)?.relative_distance(&dg.pow(k)));
            }
            det.record((dg.determinant() - Complex64::new(1.0, 0.0)).norm());
            stability.record(delta_t(&at_one, t, tol)?.relative_distance(&at_one));
            if let Some((tp, prev)) = &previous {
                let quotient = (&dg - prev).frobenius_norm() / (tv - tp);
                continuity.record(((quotient - lipschitz) / lipschitz.max(1.0)).max(0.0));
            }
            previous = Some((tv, dg));
        }

        let d1 = eigendecompose(&at_one, tol)?;
        let modulus = d1.eigenvalues().iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
        endpoint.record(modulus);
        endpoint.record_bool(is_compact_conjugate(&at_one, tol)?);
    }
    Ok(vec![
        identity,
        endpoint,
        well_defined,
        equivariance,
        commuting,
        power,
        det,
        stability,
        continuity,
    ])
}

/// `is_polystable` against the torus-reduction oracle and the planted
/// ground truth on random commuting `GL(3)` tuples, half with a planted
/// unipotent part.
pub fn polystable_oracle(seed: u64, count: usize, tol: &Tolerances) -> Result<Vec<LawResult>> {
    let mut rng = sampling::rng(seed);
    let mut valid = LawResult::new("inputs_validate", 0.0);
    let mut agree = LawResult::new("agrees_with_diagonalization", 0.0);
    let mut truth = LawResult::new("agrees_with_construction", 0.0);
    for k in 0..count {
        let r = rng.random_range(1..=3);
        let plant = k % 2 == 1;
        let (images, planted) = sampling::commuting_gl_tuple(&mut rng, 3, r, plant, CONJUGATOR_COND);
        let rho = Representation::new(GroupFamily::gl(3), FinAbGroup::free(r)?, images)?;
        valid.record_bool(validate_representation(&rho, tol)?.is_valid());
        let ps = is_polystable(&rho, tol)?;
        agree.record_bool(ps == lies_in_common_torus(&rho, tol)?);
        truth.record_bool(ps == planted.is_none());
    }
    Ok(vec![valid, agree, truth])
}

/// Canonical forms are constant on Weyl orbits, exactly.
pub fn canonical_weyl(seed: u64, count: usize) -> Result<Vec<LawResult>> {
    let mut rng = sampling::rng(seed);
    let mut law = LawResult::new("weyl_invariance", 0.0);
    for k in 0..count {
        let n = rng.random_range(1..=4);
        let r = rng.random_range(1..=3);
        let family = match k % 3 {
            0 => GroupFamily::gl(n),
            1 => GroupFamily::sl(n),
            _ => GroupFamily::sp(n),
        };
        let rows: Vec<Vec<Complex64>> = (0..r)
            .map(|_| {
                if family.family == crate::varieties::Family::SL {
                    sampling::sl_torus_entries(&mut rng, n, 0.1, 10.0)
                } else if family.family == crate::varieties::Family::Sp {
                    // inverses of these are exact, so inverting a slot is exact
                    (0..n)
                        .map(|_| {
                            let m = 2f64.powi(rng.random_range(-3..=3));
                            [Complex64::new(m, 0.0), Complex64::new(-m, 0.0), Complex64::new(0.0, m)]
                                [rng.random_range(0..3)]
                        })
                        .collect()
                } else {
                    (0..n).map(|_| sampling::complex_in_square(&mut rng) + Complex64::new(2.5, 0.0)).collect()
                }
            })
            .collect();
        let p = TorusPoint::new(rows)?;
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let mut q = p.permute_slots(&perm)?;
        if family.family == crate::varieties::Family::Sp {
            let flags: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
            q = q.invert_slots(&flags)?;
        }
        law.record_bool(weyl_canonical_form(&p, family)? == weyl_canonical_form(&q, family)?);
    }
    Ok(vec![law])
}

/// One row of the classification truth table.
#[derive(Debug, Clone, Serialize)]
pub struct TableCase {
    pub factor: String,
    pub rank: usize,
    pub torsion: Vec<u64>,
    pub verdict: Verdict,
    pub branch: Branch,
}

/// The 48 cases over one factor, `r ∈ 1..=4` and torsion `[]` or `[2]`,
/// with the verdict and branch each must produce.
pub fn classify_cases() -> Vec<(SimpleFactor, FinAbGroup, Verdict, Branch)> {
    let factors = [
        SimpleFactor::sl(2),
        SimpleFactor::sl(3),
        SimpleFactor::sp(2),
        SimpleFactor::of(FactorFamily::E6),
        SimpleFactor::of(FactorFamily::E8),
        SimpleFactor::new(FactorFamily::NonSimplyConnected, Some(3), None).expect("valid factor"),
    ];
    let mut out = Vec::with_capacity(48);
    for f in factors {
        // (simply connected, product of SL/Sp, exceptional)
        let (sc, classical, exceptional) = match f.family() {
            FactorFamily::SL | FactorFamily::Sp => (true, true, false),
            FactorFamily::E6 => (false, false, true),
            FactorFamily::E8 => (true, false, true),
            _ => (false, false, false),
        };
        for r in 1..=4 {
            for torsion in [vec![], vec![2]] {
                let gamma = FinAbGroup::new(r, torsion.clone()).expect("valid group");
                let (v, b) = if !torsion.is_empty() {
                    (Verdict::No, Branch::TorsionDisconnects)
                } else if r == 1 {
                    (Verdict::Yes, Branch::RankOne)
                } else if exceptional && r == 2 {
                    (if sc { Verdict::Yes } else { Verdict::No }, Branch::ExceptionalRankTwo)
                } else if exceptional {
                    (Verdict::No, Branch::ExceptionalRankThree)
                } else if r == 2 && sc {
                    (Verdict::Yes, Branch::RankTwoSimplyConnected)
                } else if r == 2 {
                    (Verdict::No, Branch::RankTwoNotSimplyConnected)
                } else if classical {
                    (Verdict::Yes, Branch::RankThreeClassical)
                } else {
                    (Verdict::No, Branch::RankThreeNotClassical)
                };
                out.push((f, gamma, v, b));
            }
        }
    }
    out
}

pub fn classify_table() -> Result<Vec<LawResult>> {
    let mut irreducible = LawResult::new("irreducible_table", 0.0);
    let mut connected = LawResult::new("connected_table", 0.0);
    for (f, gamma, v, b) in classify_cases() {
        let g = ReductiveGroupDescriptor::semisimple(vec![f]);
        let di = decide_irreducible(&g, &gamma)?;
        irreducible.record_bool(di.verdict == v && di.branch == b);
        let dc = decide_connected(&g, &gamma)?;
        connected.record_bool(dc.verdict == v && dc.branch == b);
    }
    Ok(vec![irreducible, connected])
}

/// Class-sum formula against brute force, and the closed-form coefficient
/// rules.
pub fn cohomology_oracle() -> Result<Vec<LawResult>> {
    let mut oracle = LawResult::new("matches_brute_force", 0.0);
    let mut rules = LawResult::new("coefficient_rules", 0.0);
    for n in 1..=4 {
        for r in 1..=3 {
            if n * r <= 16 {
                oracle.record_bool(poincare_polynomial(n, r)? == brute_force_invariant_dims(n, r)?);
            }
        }
    }
    for n in 1..=6usize {
        for r in 1..=4usize {
            let p = poincare_polynomial(n, r)?;
            let top: u32 = if r % 2 == 0 || n == 1 { 1 } else { 0 };
            rules.record_bool(
                p.coeffs.len() == n * r + 1
                    && p.coeffs[0] == 1u32.into()
                    && p.coeffs[1] == (r as u32).into()
                    && p.coeffs[n * r] == top.into(),
            );
        }
    }
    Ok(vec![oracle, rules])
}

/// `ρ` and `l·ρ·l^{-1}` stay GIT equivalent after `δ_t` for `t ∈ {0.5, 1}`.
pub fn quotient_descent(seed: u64, count: usize, tol: &Tolerances) -> Result<Vec<LawResult>> {
    let mut rng = sampling::rng(seed);
    let mut before = LawResult::new("equivalent_before", 0.0);
    let mut after = LawResult::new("equivalent_after", 0.0);
    for _ in 0..count {
        let r = rng.random_range(1..=3);
        let (images, _) = sampling::commuting_gl_tuple(&mut rng, 3, r, false, CONJUGATOR_COND);
        let rho = Representation::new(GroupFamily::gl(3), FinAbGroup::free(r)?, images)?;
        let l = sampling::well_conditioned(&mut rng, 3, CONJUGATOR_COND);
        let other = rho.conjugated_by(&l)?;
        before.record_bool(git_equivalent(&rho, &other, tol)?);
        for t in [0.5, 1.0] {
            let a = delta_tuple(&rho, time(t), tol)?;
            let b = delta_tuple(&other, time(t), tol)?;
            after.record_bool(git_equivalent(&a, &b, tol)?);
        }
    }
    Ok(vec![before, after])
}
