use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::torus::{is_polystable, simultaneous_diagonalize};
use super::{Family, GroupFamily, Representation};
use crate::error::{Error, Result};
use crate::linalg::Tolerances;

/// Point of `T^r`: entry `(i, j)` is the `j`-th torus coordinate of
/// generator `i`. Columns are the joint coordinates of one torus slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TorusPointJson", into = "TorusPointJson")]
pub struct TorusPoint {
    rows: Vec<Vec<Complex64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TorusPointJson {
    rows: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<TorusPointJson> for TorusPoint {
    type Error = Error;
    fn try_from(j: TorusPointJson) -> Result<Self> {
        TorusPoint::new(
            j.rows
                .into_iter()
                .map(|r| r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
                .collect(),
        )
    }
}

impl From<TorusPoint> for TorusPointJson {
    fn from(p: TorusPoint) -> Self {
        TorusPointJson {
            rows: p.rows.iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect(),
        }
    }
}

impl TorusPoint {
    pub fn new(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let width = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || width == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::DimensionMismatch {
                    expected: width,
                    found: row.len(),
                });
            }
            for (j, z) in row.iter().enumerate() {
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                if z.re == 0.0 && z.im == 0.0 {
                    return Err(Error::ZeroCoordinate { row: i, col: j });
                }
            }
        }
        Ok(TorusPoint { rows })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn generator_count(&self) -> usize {
        self.rows.len()
    }

    pub fn slot_count(&self) -> usize {
        self.rows[0].len()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.rows[i][j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.rows[i]
    }

    /// Joint coordinates of slot `j` across all generators.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    /// Applies a slot permutation: new slot `j` is old slot `perm[j]`.
    pub fn permute_slots(&self, perm: &[usize]) -> Result<Self> {
        TorusPoint::new(self.rows.iter().map(|r| perm.iter().map(|&p| r[p]).collect()).collect())
    }

    /// Inverts the coordinates of the flagged slots in every generator.
    pub fn invert_slots(&self, flags: &[bool]) -> Result<Self> {
        TorusPoint::new(
            self.rows
                .iter()
                .map(|r| {
                    r.iter()
                        .zip(flags)
                        .map(|(&z, &f)| if f { z.inv() } else { z })
                        .collect()
                })
                .collect(),
        )
    }

    /// Checks slot count and, for `SL`, unit row products.
    pub fn check_family(&self, family: GroupFamily, tol: &Tolerances) -> Result<()> {
        if self.slot_count() != family.n {
            return Err(Error::DimensionMismatch {
                expected: family.n,
                found: self.slot_count(),
            });
        }
        if family.family == Family::SL {
            for row in &self.rows {
                let prod: Complex64 = row.iter().product();
                let scale: f64 = row.iter().map(|z| z.norm()).product();
                if (prod - Complex64::new(1.0, 0.0)).norm() > tol.scaled(scale) {
                    return Err(Error::InvalidRepresentation(format!(
                        "SL torus coordinates have product {prod}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Sorted joint columns: a section of `T^r → T^r / W`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "CanonicalFormJson")]
pub struct CanonicalForm {
    columns: Vec<Vec<Complex64>>,
}

#[derive(Serialize)]
struct CanonicalFormJson {
    columns: Vec<Vec<[f64; 2]>>,
}

impl From<CanonicalForm> for CanonicalFormJson {
    fn from(c: CanonicalForm) -> Self {
        CanonicalFormJson {
            columns: c.columns.iter().map(|col| col.iter().map(|z| [z.re, z.im]).collect()).collect(),
        }
    }
}

impl CanonicalForm {
    pub fn columns(&self) -> &[Vec<Complex64>] {
        &self.columns
    }

    /// Coordinatewise comparison of two canonical forms, matching columns as
    /// multisets so that near-ties in the sort order cannot break agreement.
    pub fn approx_eq(&self, other: &CanonicalForm, tol: f64) -> bool {
        if self.columns.len() != other.columns.len() {
            return false;
        }
        let close = |a: &[Complex64], b: &[Complex64]| {
            a.len() == b.len()
                && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol * 1f64.max(x.norm()).max(y.norm()))
        };
        // exact sort order agrees in the generic case
        if self.columns.iter().zip(&other.columns).all(|(a, b)| close(a, b)) {
            return true;
        }
        let mut used = vec![false; other.columns.len()];
        for a in &self.columns {
            match (0..other.columns.len()).find(|&k| !used[k] && close(a, &other.columns[k])) {
                Some(k) => used[k] = true,
                None => return false,
            }
        }
        true
    }
}

/// `(Re, Im)` lexicographic order.
fn cmp_complex(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn cmp_column(a: &[Complex64], b: &[Complex64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| cmp_complex(x, y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Folds `-0.0` into `0.0` so the total order does not separate them.
fn normalize_zero(z: Complex64) -> Complex64 {
    Complex64::new(z.re + 0.0, z.im + 0.0)
}

/// Canonical representative of the Weyl orbit of `point`.
///
/// For `GL`/`SL` the Weyl group permutes slots, so the joint columns are
/// sorted. For `Sp` it also inverts slots; each column is first replaced by
/// the larger of itself and its inverse.
pub fn weyl_canonical_form(point: &TorusPoint, family: GroupFamily) -> Result<CanonicalForm> {
    if point.slot_count() != family.n {
        return Err(Error::DimensionMismatch {
            expected: family.n,
            found: point.slot_count(),
        });
    }
    let mut columns: Vec<Vec<Complex64>> = (0..point.slot_count())
        .map(|j| point.column(j).into_iter().map(normalize_zero).collect())
        .collect();
    if family.family == Family::Sp {
        for col in columns.iter_mut() {
            let inv: Vec<Complex64> = col.iter().map(|z| normalize_zero(z.inv())).collect();
            if cmp_column(&inv, col).is_gt() {
                *col = inv;
            }
        }
    }
    columns.sort_by(|a, b| cmp_column(a, b));
    Ok(CanonicalForm { columns })
}

/// True iff two polystable GL/SL representations have the same closed orbit,
/// decided by comparing canonical forms of their torus reductions.
pub fn git_equivalent(rho1: &Representation, rho2: &Representation, tol: &Tolerances) -> Result<bool> {
    if rho1.group() != rho2.group() {
        return Err(Error::InvalidRepresentation(format!(
            "groups differ: {} vs {}",
            rho1.group(),
            rho2.group()
        )));
    }
    if rho1.gamma() != rho2.gamma() {
        return Err(Error::InvalidRepresentation(format!(
            "source groups differ: {} vs {}",
            rho1.gamma(),
            rho2.gamma()
        )));
    }
    rho1.group().require_linear()?;
    if !is_polystable(rho1, tol)? {
        return Err(Error::NotPolystable("first"));
    }
    if !is_polystable(rho2, tol)? {
        return Err(Error::NotPolystable("second"));
    }
    let p1 = simultaneous_diagonalize(rho1, tol)?.point;
    let p2 = simultaneous_diagonalize(rho2, tol)?.point;
    let c1 = weyl_canonical_form(&p1, rho1.group())?;
    let c2 = weyl_canonical_form(&p2, rho2.group())?;
    Ok(c1.approx_eq(&c2, tol.eq_tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ComplexMatrix};
    use crate::varieties::FinAbGroup;

    #[test]
    fn gl_canonical_form_ignores_slot_order() {
        let p = TorusPoint::from_real_rows(&[&[2.0, 5.0], &[3.0, 7.0]]).unwrap();
        let q = p.permute_slots(&[1, 0]).unwrap();
        let g = GroupFamily::gl(2);
        assert_eq!(weyl_canonical_form(&p, g).unwrap(), weyl_canonical_form(&q, g).unwrap());
    }

    #[test]
    fn sl2_point_sorts_columns() {
        let p = TorusPoint::from_real_rows(&[&[2.0, 0.5]]).unwrap();
        let cf = weyl_canonical_form(&p, GroupFamily::sl(2)).unwrap();
        assert_eq!(cf.columns(), &[vec![c(0.5, 0.0)], vec![c(2.0, 0.0)]]);
    }

    #[test]
    fn sp1_picks_larger_of_orbit() {
        // the Weyl orbit of (0.5) is {0.5, 2}; the max under (Re, Im) is 2
        let p = TorusPoint::from_real_rows(&[&[0.5]]).unwrap();
        let cf = weyl_canonical_form(&p, GroupFamily::sp(1)).unwrap();
        assert_eq!(cf.columns(), &[vec![c(2.0, 0.0)]]);
        let q = p.invert_slots(&[true]).unwrap();
        assert_eq!(weyl_canonical_form(&q, GroupFamily::sp(1)).unwrap(), cf);
    }

    #[test]
    fn zero_coordinate_is_rejected() {
        assert!(matches!(
            TorusPoint::from_real_rows(&[&[1.0, 0.0]]),
            Err(Error::ZeroCoordinate { row: 0, col: 1 })
        ));
    }

    #[test]
    fn json_round_trip() {
        let p = TorusPoint::new(vec![vec![c(1.5, -0.25), c(2.0, 1.0)]]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"rows":[[[1.5,-0.25],[2.0,1.0]]]}"#);
        assert_eq!(serde_json::from_str::<TorusPoint>(&s).unwrap(), p);
    }

    fn diag_pair(a: [f64; 2], b: [f64; 2]) -> Representation {
        Representation::new(
            GroupFamily::sl(2),
            FinAbGroup::free(2).unwrap(),
            vec![ComplexMatrix::from_real_diagonal(&a), ComplexMatrix::from_real_diagonal(&b)],
        )
        .unwrap()
    }

    #[test]
    fn git_equivalence_examples() {
        let tol = Tolerances::default();
        let rho = diag_pair([2.0, 0.5], [3.0, 1.0 / 3.0]);
        let swapped = diag_pair([0.5, 2.0], [1.0 / 3.0, 3.0]);
        assert!(git_equivalent(&rho, &swapped, &tol).unwrap());

        let single = |x: f64| {
            Representation::new(
                GroupFamily::sl(2),
                FinAbGroup::free(1).unwrap(),
                vec![ComplexMatrix::from_real_diagonal(&[x, 1.0 / x])],
            )
            .unwrap()
        };
        assert!(!git_equivalent(&single(2.0), &single(3.0), &tol).unwrap());

        let l = ComplexMatrix::from_rows(&[&[c(1.0, 1.0), c(0.5, 0.0)], &[c(-0.2, 0.3), c(2.0, 0.0)]]);
        assert!(git_equivalent(&rho, &rho.conjugated_by(&l).unwrap(), &tol).unwrap());
    }

    #[test]
    fn git_equivalence_requires_polystable_inputs() {
        let tol = Tolerances::default();
        let unip = Representation::new(
            GroupFamily::sl(2),
            FinAbGroup::free(1).unwrap(),
            vec![ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]])],
        )
        .unwrap();
        let id = Representation::trivial(GroupFamily::sl(2), FinAbGroup::free(1).unwrap());
        assert_eq!(git_equivalent(&id, &unip, &tol), Err(Error::NotPolystable("second")));
    }
}
