//! Representations of finitely generated abelian groups as commuting tuples
//! of matrices, and the operations that live on the character variety:
//! polystability, torus reduction, Weyl canonical forms, GIT equivalence and
//! cocharacter limits.

mod limit;
mod torus;
mod validate;
mod weyl;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

pub use limit::cochar_limit;
pub use torus::{is_polystable, lies_in_common_torus, simultaneous_diagonalize, TorusReduction};
pub use validate::{is_compact_conjugate, validate_representation, ValidationReport, Violation};
pub use weyl::{git_equivalent, weyl_canonical_form, CanonicalForm, TorusPoint};

/// `Γ = ℤ^rank ⊕ ⨁ ℤ/n_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FinAbGroupJson", into = "FinAbGroupJson")]
pub struct FinAbGroup {
    rank: usize,
    torsion: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FinAbGroupJson {
    rank: usize,
    #[serde(default)]
    torsion: Vec<u64>,
}

impl TryFrom<FinAbGroupJson> for FinAbGroup {
    type Error = Error;
    fn try_from(j: FinAbGroupJson) -> Result<Self> {
        FinAbGroup::new(j.rank, j.torsion)
    }
}

impl From<FinAbGroup> for FinAbGroupJson {
    fn from(g: FinAbGroup) -> Self {
        FinAbGroupJson {
            rank: g.rank,
            torsion: g.torsion,
        }
    }
}

impl FinAbGroup {
    pub fn new(rank: usize, torsion: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = torsion.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidGroup(format!("torsion order {bad} must be at least 2")));
        }
        if rank + torsion.len() == 0 {
            return Err(Error::InvalidGroup("group must have at least one generator".into()));
        }
        Ok(FinAbGroup { rank, torsion })
    }

    /// Free abelian group `ℤ^rank`.
    pub fn free(rank: usize) -> Result<Self> {
        Self::new(rank, Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Total number of generators, free ones first.
    pub fn generator_count(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Order of generator `i` (`None` for free generators).
    pub fn order_of(&self, i: usize) -> Option<u64> {
        i.checked_sub(self.rank).and_then(|j| self.torsion.get(j).copied())
    }

    /// Direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut torsion = self.torsion.clone();
        torsion.extend_from_slice(&other.torsion);
        FinAbGroup {
            rank: self.rank + other.rank,
            torsion,
        }
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(format!("Z^{}", self.rank));
        }
        parts.extend(self.torsion.iter().map(|n| format!("Z_{n}")));
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    GL,
    SL,
    Sp,
}

/// Matrix group: `GL(n)`, `SL(n)` or `Sp(n)`; the latter acts on `ℂ^{2n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupFamily {
    pub family: Family,
    pub n: usize,
}

impl GroupFamily {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("matrix group size must be positive".into()));
        }
        Ok(GroupFamily { family, n })
    }

    pub fn gl(n: usize) -> Self {
        Self::new(Family::GL, n).expect("n >= 1")
    }

    pub fn sl(n: usize) -> Self {
        Self::new(Family::SL, n).expect("n >= 1")
    }

    pub fn sp(n: usize) -> Self {
        Self::new(Family::Sp, n).expect("n >= 1")
    }

    /// Size of the matrices representing group elements.
    pub fn matrix_size(&self) -> usize {
        match self.family {
            Family::Sp => 2 * self.n,
            _ => self.n,
        }
    }

    /// Rank of the maximal torus.
    pub fn torus_rank(&self) -> usize {
        match self.family {
            Family::GL | Family::Sp => self.n,
            Family::SL => self.n - 1,
        }
    }

    pub(crate) fn require_linear(&self) -> Result<()> {
        match self.family {
            Family::GL | Family::SL => Ok(()),
            Family::Sp => Err(Error::UnsupportedFamily(format!("{self}"))),
        }
    }
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({})", self.family, self.n)
    }
}

/// Homomorphism `Γ → G` recorded by the images of the generators.
///
/// Construction only checks shapes; relations are checked by
/// [`validate_representation`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RepresentationJson", into = "RepresentationJson")]
pub struct Representation {
    group: GroupFamily,
    gamma: FinAbGroup,
    images: Vec<ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepresentationJson {
    family: Family,
    n: usize,
    rank: usize,
    #[serde(default)]
    torsion: Vec<u64>,
    images: Vec<ComplexMatrix>,
}

impl TryFrom<RepresentationJson> for Representation {
    type Error = Error;
    fn try_from(j: RepresentationJson) -> Result<Self> {
        Representation::new(GroupFamily::new(j.family, j.n)?, FinAbGroup::new(j.rank, j.torsion)?, j.images)
    }
}

impl From<Representation> for RepresentationJson {
    fn from(r: Representation) -> Self {
        RepresentationJson {
            family: r.group.family,
            n: r.group.n,
            rank: r.gamma.rank,
            torsion: r.gamma.torsion,
            images: r.images,
        }
    }
}

impl Representation {
    pub fn new(group: GroupFamily, gamma: FinAbGroup, images: Vec<ComplexMatrix>) -> Result<Self> {
        if images.len() != gamma.generator_count() {
            return Err(Error::DimensionMismatch {
                expected: gamma.generator_count(),
                found: images.len(),
            });
        }
        let size = group.matrix_size();
        if let Some(m) = images.iter().find(|m| m.dim() != size) {
            return Err(Error::DimensionMismatch {
                expected: size,
                found: m.dim(),
            });
        }
        Ok(Representation { group, gamma, images })
    }

    /// Trivial representation: every generator maps to the identity.
    pub fn trivial(group: GroupFamily, gamma: FinAbGroup) -> Self {
        let images = vec![ComplexMatrix::identity(group.matrix_size()); gamma.generator_count()];
        Representation { group, gamma, images }
    }

    pub fn group(&self) -> GroupFamily {
        self.group
    }

    pub fn gamma(&self) -> &FinAbGroup {
        &self.gamma
    }

    pub fn images(&self) -> &[ComplexMatrix] {
        &self.images
    }

    pub fn matrix_size(&self) -> usize {
        self.group.matrix_size()
    }

    /// Same group data with new images.
    pub fn with_images(&self, images: Vec<ComplexMatrix>) -> Result<Self> {
        Representation::new(self.group, self.gamma.clone(), images)
    }

    /// Simultaneous conjugation `l · ρ · l^{-1}`.
    pub fn conjugated_by(&self, l: &ComplexMatrix) -> Result<Self> {
        let l_inv = l.inverse()?;
        let images = self.images.iter().map(|g| &(l * g) * &l_inv).collect();
        self.with_images(images)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("representation serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_validation() {
        assert!(FinAbGroup::new(0, vec![]).is_err());
        assert!(FinAbGroup::new(1, vec![1]).is_err());
        let g = FinAbGroup::new(2, vec![3, 4]).unwrap();
        assert_eq!(g.generator_count(), 4);
        assert_eq!(g.order_of(0), None);
        assert_eq!(g.order_of(2), Some(3));
        assert_eq!(g.order_of(3), Some(4));
        assert_eq!(g.to_string(), "Z^2 + Z_3 + Z_4");
    }

    #[test]
    fn representation_json_round_trip() {
        let rho = Representation::new(
            GroupFamily::gl(2),
            FinAbGroup::new(1, vec![2]).unwrap(),
            vec![
                ComplexMatrix::from_real_diagonal(&[2.0, 0.5]),
                ComplexMatrix::from_real_diagonal(&[1.0, -1.0]),
            ],
        )
        .unwrap();
        let s = rho.to_json();
        assert!(s.starts_with(r#"{"family":"GL","n":2,"rank":1,"torsion":[2],"images":["#));
        let back: Representation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, rho);
    }

    #[test]
    fn shapes_are_checked() {
        let r = Representation::new(
            GroupFamily::sp(1),
            FinAbGroup::free(1).unwrap(),
            vec![ComplexMatrix::identity(1)],
        );
        assert!(matches!(r, Err(Error::DimensionMismatch { expected: 2, found: 1 })));
        let r = Representation::new(GroupFamily::gl(1), FinAbGroup::free(2).unwrap(), vec![ComplexMatrix::identity(1)]);
        assert!(r.is_err());
    }
}
