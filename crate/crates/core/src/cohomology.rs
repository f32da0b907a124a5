//! Rational cohomology of `𝔛_{ℤ^r}(GL(n))`, which is the ring of
//! `S_n`-invariants in the exterior algebra on generators `α_j^i`
//! (`1 ≤ i ≤ r`, `1 ≤ j ≤ n`), with `S_n` permuting the lower index.
//!
//! The Poincaré polynomial is computed by averaging graded traces over
//! conjugacy classes: a permutation of cycle type `λ` has graded trace
//! `det(I + tP)^r = ∏_ℓ (1 − (−t)^ℓ)^{r m_ℓ}` on the exterior algebra.
//! Everything here is exact; there is no floating point.

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default bound on `r·n` for [`poincare_polynomial`].
pub const DEFAULT_MAX_RN: usize = 64;
/// Bound on `r·n` for the brute-force oracle (it enumerates `2^{rn}` monomials).
pub const ORACLE_MAX_RN: usize = 16;
/// Bound on `n` for the oracle (it enumerates all of `S_n`).
pub const ORACLE_MAX_N: usize = 8;

/// A partition of `n`, parts in nonincreasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `(ℓ, m_ℓ)` for each distinct part length, increasing in `ℓ`.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .parts
            .iter()
            .dedup_with_count()
            .map(|(m, &l)| (l, m))
            .collect();
        out.reverse();
        out
    }

    /// `z_λ = ∏ ℓ^{m_ℓ} m_ℓ!`, the centraliser order of the class.
    pub fn z(&self) -> BigUint {
        self.multiplicities()
            .into_iter()
            .map(|(l, m)| BigUint::from(l).pow(m as u32) * factorial(m))
            .product()
    }

    /// Number of permutations of cycle type `λ`, `n!/z_λ`.
    pub fn class_size(&self) -> BigUint {
        factorial(self.size()) / self.z()
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

/// All partitions of `n`, in reverse lexicographic order starting at `(n)`.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            prefix.push(p);
            rec(rest - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Coefficients `coeffs[d] = dim H^d`, for `d = 0..=rn`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoincarePolynomial {
    #[serde(serialize_with = "ser_coeffs", deserialize_with = "de_coeffs")]
    pub coeffs: Vec<BigUint>,
}

impl PoincarePolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Value at `t = 1`, the total Betti number.
    pub fn total(&self) -> BigUint {
        self.coeffs.iter().sum()
    }
}

/// Coefficients go out as JSON integers, or as decimal strings past `u64`.
fn ser_coeffs<S: Serializer>(coeffs: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(coeffs.len()))?;
    for c in coeffs {
        match c.to_u64() {
            Some(v) => seq.serialize_element(&v)?,
            None => seq.serialize_element(&c.to_string())?,
        }
    }
    seq.end()
}

fn de_coeffs<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigUint>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Coeff {
        Small(u64),
        Big(String),
    }
    Vec::<Coeff>::deserialize(d)?
        .into_iter()
        .map(|c| match c {
            Coeff::Small(v) => Ok(BigUint::from(v)),
            Coeff::Big(s) => s.parse().map_err(serde::de::Error::custom),
        })
        .collect()
}

fn check_args(n: usize, r: usize, max_rn: usize) -> Result<()> {
    if n == 0 || r == 0 {
        return Err(Error::InvalidGroup("n and r must be positive".into()));
    }
    if n.saturating_mul(r) > max_rn {
        return Err(Error::SizeLimit {
            what: "r*n",
            value: n.saturating_mul(r),
            limit: max_rn,
        });
    }
    Ok(())
}

/// Integer coefficients of `∏_ℓ (1 − (−t)^ℓ)^{r m_ℓ}`.
fn class_trace(lambda: &Partition, r: usize) -> Vec<BigInt> {
    let mut poly = vec![BigInt::one()];
    for &l in lambda.parts() {
        // 1 − (−t)^ℓ = 1 + (−1)^{ℓ+1} t^ℓ
        let lead = if l % 2 == 1 { BigInt::one() } else { -BigInt::one() };
        for _ in 0..r {
            let mut next = vec![BigInt::zero(); poly.len() + l];
            for (d, c) in poly.iter().enumerate() {
                next[d] += c;
                next[d + l] += c * &lead;
            }
            poly = next;
        }
    }
    poly
}

/// Converts averaged rational coefficients, insisting they are
/// nonnegative integers.
fn integral(avg: Vec<BigRational>) -> Result<PoincarePolynomial> {
    let mut coeffs = Vec::with_capacity(avg.len());
    for (degree, q) in avg.into_iter().enumerate() {
        if !q.is_integer() || q.is_negative() {
            return Err(Error::IntegralityFailure {
                degree,
                value: q.to_string(),
            });
        }
        coeffs.push(q.to_integer().to_biguint().expect("nonnegative"));
    }
    Ok(PoincarePolynomial { coeffs })
}

/// Poincaré polynomial of `𝔛_{ℤ^r}(GL(n))` with `rn ≤` [`DEFAULT_MAX_RN`].
pub fn poincare_polynomial(n: usize, r: usize) -> Result<PoincarePolynomial> {
    poincare_polynomial_with_limit(n, r, DEFAULT_MAX_RN)
}

pub fn poincare_polynomial_with_limit(n: usize, r: usize, max_rn: usize) -> Result<PoincarePolynomial> {
    check_args(n, r, max_rn)?;
    let mut acc = vec![BigRational::zero(); r * n + 1];
    for lambda in partitions(n) {
        let weight = BigRational::new(BigInt::one(), BigInt::from(lambda.z()));
        for (d, c) in class_trace(&lambda, r).into_iter().enumerate() {
            acc[d] += BigRational::from_integer(c) * &weight;
        }
    }
    integral(acc)
}

/// The same dimensions by summing the trace of every `σ ∈ S_n` on every
/// wedge monomial. Variable `α_j^i` is bit `i·n + j`.
pub fn brute_force_invariant_dims(n: usize, r: usize) -> Result<PoincarePolynomial> {
    check_args(n, r, ORACLE_MAX_RN)?;
    if n > ORACLE_MAX_N {
        return Err(Error::SizeLimit {
            what: "n",
            value: n,
            limit: ORACLE_MAX_N,
        });
    }
    let vars = r * n;
    let mut traces = vec![0i64; vars + 1];
    for sigma in (0..n).permutations(n) {
        let image: Vec<usize> = (0..vars).map(|v| (v / n) * n + sigma[v % n]).collect();
        for mask in 0u32..(1u32 << vars) {
            let factors: Vec<usize> = (0..vars).filter(|&v| mask >> v & 1 == 1).collect();
            let mapped: Vec<usize> = factors.iter().map(|&v| image[v]).collect();
            let image_mask = mapped.iter().fold(0u32, |m, &v| m | 1 << v);
            if image_mask != mask {
                continue;
            }
            let inversions = (0..mapped.len())
                .flat_map(|a| ((a + 1)..mapped.len()).map(move |b| (a, b)))
                .filter(|&(a, b)| mapped[a] > mapped[b])
                .count();
            traces[factors.len()] += if inversions % 2 == 0 { 1 } else { -1 };
        }
    }
    let order = BigInt::from(factorial(n));
    let avg = traces
        .into_iter()
        .map(|t| BigRational::new(BigInt::from(t), order.clone()))
        .collect();
    integral(avg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(p: &PoincarePolynomial) -> Vec<u64> {
        p.coeffs.iter().map(|c| c.to_u64().unwrap()).collect()
    }

    #[test]
    fn partition_examples() {
        let p1 = partitions(1);
        assert_eq!(p1.len(), 1);
        assert_eq!(p1[0].parts(), &[1]);
        let p2 = partitions(2);
        assert_eq!(p2.iter().map(|p| p.parts().to_vec()).collect::<Vec<_>>(), vec![vec![2], vec![1, 1]]);
        assert!(p2.iter().all(|p| p.z() == BigUint::from(2u32)));
        let p5 = partitions(5);
        assert_eq!(p5.len(), 7);
        assert_eq!(p5.iter().map(Partition::class_size).sum::<BigUint>(), BigUint::from(120u32));
        assert_eq!(partitions(10).len(), 42);
    }

    #[test]
    fn inverse_centralisers_sum_to_one() {
        for n in 1..=9 {
            let s: BigRational = partitions(n)
                .iter()
                .map(|p| BigRational::new(BigInt::one(), BigInt::from(p.z())))
                .sum();
            assert!(s.is_one(), "n = {n}");
        }
    }

    #[test]
    fn small_polynomials() {
        assert_eq!(coeffs(&poincare_polynomial(1, 3).unwrap()), vec![1, 3, 3, 1]);
        assert_eq!(coeffs(&poincare_polynomial(2, 1).unwrap()), vec![1, 1, 0]);
        assert_eq!(coeffs(&poincare_polynomial(2, 2).unwrap()), vec![1, 2, 2, 2, 1]);
    }

    #[test]
    fn oracle_small_cases() {
        assert_eq!(coeffs(&brute_force_invariant_dims(1, 4).unwrap()), vec![1, 4, 6, 4, 1]);
        assert_eq!(coeffs(&brute_force_invariant_dims(2, 1).unwrap()), vec![1, 1, 0]);
        assert_eq!(coeffs(&brute_force_invariant_dims(2, 2).unwrap()), vec![1, 2, 2, 2, 1]);
        assert_eq!(coeffs(&brute_force_invariant_dims(3, 1).unwrap())[1], 1);
    }

    #[test]
    fn limits() {
        assert!(matches!(poincare_polynomial(9, 8), Err(Error::SizeLimit { .. })));
        assert!(poincare_polynomial_with_limit(9, 8, 72).is_ok());
        assert!(matches!(brute_force_invariant_dims(5, 4), Err(Error::SizeLimit { .. })));
        assert!(poincare_polynomial(0, 1).is_err());
    }

    #[test]
    fn json_shape() {
        let p = poincare_polynomial(2, 2).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"coeffs":[1,2,2,2,1]}"#);
        assert_eq!(serde_json::from_str::<PoincarePolynomial>(&s).unwrap(), p);
        let big = PoincarePolynomial {
            coeffs: vec![BigUint::from(u64::MAX) * 4u32],
        };
        let back: PoincarePolynomial = serde_json::from_str(&serde_json::to_string(&big).unwrap()).unwrap();
        assert_eq!(back, big);
    }
}
