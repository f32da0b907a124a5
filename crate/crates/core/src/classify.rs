//! Exact decisions about the topology of character varieties of abelian
//! groups, from a structural description of the group `G`.
//!
//! For semisimple `G` and `Γ` of rank `r`, the variety is irreducible, and
//! equivalently path connected, iff `Γ` is free and one of
//! `r = 1`, `r = 2` with `G` simply connected, or `r ≥ 3` with `G` a product
//! of `SL(n)`'s and `Sp(n)`'s holds. For reductive `G` with a central torus
//! only the "if" direction is known.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::varieties::FinAbGroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorFamily {
    SL,
    Sp,
    SpinOrOtherSC,
    NonSimplyConnected,
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl FactorFamily {
    fn is_exceptional(self) -> bool {
        matches!(self, Self::E6 | Self::E7 | Self::E8 | Self::F4 | Self::G2)
    }

    /// Whether the flag is forced, and its value.
    fn fixed_simply_connected(self) -> Option<bool> {
        match self {
            Self::SL | Self::Sp | Self::SpinOrOtherSC | Self::E8 | Self::F4 | Self::G2 => Some(true),
            Self::NonSimplyConnected => Some(false),
            Self::E6 | Self::E7 => None,
        }
    }

    /// Flag used when the caller does not give one. `E6` and `E7` default to
    /// the adjoint form.
    fn default_simply_connected(self) -> bool {
        self.fixed_simply_connected().unwrap_or(false)
    }
}

/// One simple factor of the derived group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SimpleFactorJson", into = "SimpleFactorJson")]
pub struct SimpleFactor {
    family: FactorFamily,
    n: Option<usize>,
    simply_connected: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimpleFactorJson {
    family: FactorFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    simply_connected: Option<bool>,
}

impl TryFrom<SimpleFactorJson> for SimpleFactor {
    type Error = Error;
    fn try_from(j: SimpleFactorJson) -> Result<Self> {
        SimpleFactor::new(j.family, j.n, j.simply_connected)
    }
}

impl From<SimpleFactor> for SimpleFactorJson {
    fn from(f: SimpleFactor) -> Self {
        let explicit = f.family.fixed_simply_connected().is_none() && f.simply_connected;
        SimpleFactorJson {
            family: f.family,
            n: f.n,
            simply_connected: explicit.then_some(true),
        }
    }
}

impl SimpleFactor {
    /// `SL(n)` needs `n ≥ 2` and `Sp(n)` needs `n ≥ 1`; other families take
    /// an optional size that is only carried along. The simply connected
    /// flag may be omitted; if given it must agree with the family, except
    /// for `E6`/`E7` where it selects the isogeny type.
    pub fn new(family: FactorFamily, n: Option<usize>, simply_connected: Option<bool>) -> Result<Self> {
        match (family, n) {
            (FactorFamily::SL, Some(k)) if k >= 2 => {}
            (FactorFamily::Sp, Some(k)) if k >= 1 => {}
            (FactorFamily::SL | FactorFamily::Sp, _) => {
                return Err(Error::InvalidGroup(format!(
                    "{family:?} needs a size n (n >= {})",
                    if family == FactorFamily::SL { 2 } else { 1 }
                )))
            }
            (_, Some(0)) => return Err(Error::InvalidGroup("factor size must be positive".into())),
            _ => {}
        }
        let flag = match (family.fixed_simply_connected(), simply_connected) {
            (Some(fixed), Some(given)) if fixed != given => {
                return Err(Error::InvalidGroup(format!(
                    "{family:?} has simply_connected = {fixed}, got {given}"
                )))
            }
            (_, Some(given)) => given,
            (_, None) => family.default_simply_connected(),
        };
        Ok(SimpleFactor {
            family,
            n,
            simply_connected: flag,
        })
    }

    pub fn sl(n: usize) -> Self {
        Self::new(FactorFamily::SL, Some(n), None).expect("n >= 2")
    }

    pub fn sp(n: usize) -> Self {
        Self::new(FactorFamily::Sp, Some(n), None).expect("n >= 1")
    }

    pub fn of(family: FactorFamily) -> Self {
        Self::new(family, None, None).expect("family without size")
    }

    pub fn family(&self) -> FactorFamily {
        self.family
    }

    pub fn n(&self) -> Option<usize> {
        self.n
    }

    pub fn simply_connected(&self) -> bool {
        self.simply_connected
    }

    fn is_sl_or_sp(&self) -> bool {
        matches!(self.family, FactorFamily::SL | FactorFamily::Sp)
    }
}

impl fmt::Display for SimpleFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n {
            Some(n) => write!(f, "{:?}({n})", self.family),
            None => write!(f, "{:?}", self.family),
        }
    }
}

/// `G = ((ℂ*)^d × DG) / F` with `DG` the product of `factors`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductiveGroupDescriptor {
    pub d: usize,
    #[serde(default)]
    pub factors: Vec<SimpleFactor>,
}

impl ReductiveGroupDescriptor {
    pub fn semisimple(factors: Vec<SimpleFactor>) -> Self {
        ReductiveGroupDescriptor { d: 0, factors }
    }

    pub fn is_semisimple(&self) -> bool {
        self.d == 0 && !self.factors.is_empty()
    }

    fn check(&self) -> Result<()> {
        if self.d == 0 && self.factors.is_empty() {
            Err(Error::EmptyGroup)
        } else {
            Ok(())
        }
    }

    fn all_simply_connected(&self) -> bool {
        self.factors.iter().all(SimpleFactor::simply_connected)
    }

    fn all_sl_or_sp(&self) -> bool {
        self.factors.iter().all(SimpleFactor::is_sl_or_sp)
    }

    fn single_exceptional(&self) -> Option<FactorFamily> {
        match self.factors.as_slice() {
            [f] if self.d == 0 && f.family.is_exceptional() => Some(f.family),
            _ => None,
        }
    }

    /// `DG` (or `G` when `d = 0`) as a readable product.
    fn derived_label(&self) -> String {
        if self.factors.is_empty() {
            "trivial".into()
        } else {
            self.factors.iter().map(ToString::to_string).collect::<Vec<_>>().join(" x ")
        }
    }
}

impl fmt::Display for ReductiveGroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d > 0 {
            write!(f, "(C*)^{} . ", self.d)?;
        }
        write!(f, "{}", self.derived_label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    /// The identity component has the property; nothing is claimed about
    /// the other components.
    YesIdentityComponent,
    No,
    Unknown,
}

/// Which known result produced a [`Verdict`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Γ has torsion: the variety has several components.
    TorsionDisconnects,
    RankOne,
    RankTwoSimplyConnected,
    RankTwoNotSimplyConnected,
    RankThreeClassical,
    RankThreeNotClassical,
    ExceptionalRankTwo,
    ExceptionalRankThree,
    /// Central torus present and the derived group satisfies the
    /// sufficient condition.
    ReductiveSufficient,
    /// Central torus present; no result applies.
    ReductiveOpen,
    SimplyConnectedClassical,
    SimplyConnectedIdentityComponent,
    SimplyConnectedOpen,
    CommutingLowRank,
    CommutingSmallMatrices,
    CommutingReducible,
    CommutingOpen,
}

impl Branch {
    pub fn id(self) -> &'static str {
        match self {
            Branch::TorsionDisconnects => "torsion_disconnects",
            Branch::RankOne => "rank_one",
            Branch::RankTwoSimplyConnected => "rank_two_simply_connected",
            Branch::RankTwoNotSimplyConnected => "rank_two_not_simply_connected",
            Branch::RankThreeClassical => "rank_three_classical",
            Branch::RankThreeNotClassical => "rank_three_not_classical",
            Branch::ExceptionalRankTwo => "exceptional_rank_two",
            Branch::ExceptionalRankThree => "exceptional_rank_three",
            Branch::ReductiveSufficient => "reductive_sufficient",
            Branch::ReductiveOpen => "reductive_open",
            Branch::SimplyConnectedClassical => "simply_connected_classical",
            Branch::SimplyConnectedIdentityComponent => "simply_connected_identity_component",
            Branch::SimplyConnectedOpen => "simply_connected_open",
            Branch::CommutingLowRank => "commuting_low_rank",
            Branch::CommutingSmallMatrices => "commuting_small_matrices",
            Branch::CommutingReducible => "commuting_reducible",
            Branch::CommutingOpen => "commuting_open",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub branch: Branch,
    pub justification: String,
}

impl Decision {
    fn new(verdict: Verdict, branch: Branch, justification: impl Into<String>) -> Self {
        Decision {
            verdict,
            branch,
            justification: justification.into(),
        }
    }
}

/// Shared semisimple test behind connectedness and irreducibility.
fn semisimple_decision(g: &ReductiveGroupDescriptor, gamma: &FinAbGroup, property: &str) -> Decision {
    let r = gamma.rank();
    let label = g.derived_label();
    if !gamma.is_free() {
        return Decision::new(
            Verdict::No,
            Branch::TorsionDisconnects,
            format!("Γ = {gamma} has torsion, so Hom(Γ, T) is disconnected and the variety is not {property}"),
        );
    }
    if let Some(fam) = g.single_exceptional() {
        if r >= 3 {
            return Decision::new(
                Verdict::No,
                Branch::ExceptionalRankThree,
                format!("{fam:?} is exceptional, hence not a product of SL/Sp; for r = {r} >= 3 the variety is not {property}"),
            );
        }
        if r == 2 {
            let sc = g.all_simply_connected();
            return Decision::new(
                if sc { Verdict::Yes } else { Verdict::No },
                Branch::ExceptionalRankTwo,
                format!(
                    "for r = 2 an exceptional group gives a {property} variety exactly for E8, F4, G2; {fam:?} is {}simply connected",
                    if sc { "" } else { "not " }
                ),
            );
        }
    }
    match r {
        1 => Decision::new(Verdict::Yes, Branch::RankOne, format!("Γ = Z: the variety T/W is {property}")),
        2 if g.all_simply_connected() => Decision::new(
            Verdict::Yes,
            Branch::RankTwoSimplyConnected,
            format!("r = 2 and {label} is simply connected, so the variety is {property}"),
        ),
        2 => Decision::new(
            Verdict::No,
            Branch::RankTwoNotSimplyConnected,
            format!("r = 2 and {label} is not simply connected, so the variety is not {property}"),
        ),
        _ if g.all_sl_or_sp() => Decision::new(
            Verdict::Yes,
            Branch::RankThreeClassical,
            format!("r = {r} >= 3 and {label} is a product of SL/Sp, so the variety is {property}"),
        ),
        _ => Decision::new(
            Verdict::No,
            Branch::RankThreeNotClassical,
            format!("r = {r} >= 3 and {label} is not a product of SL/Sp, so the variety is not {property}"),
        ),
    }
}

/// Whether the free-group condition on `DG` is met (used for reductive `G`).
fn reductive_sufficient(g: &ReductiveGroupDescriptor, r: usize) -> bool {
    match r {
        1 => true,
        2 => g.all_simply_connected(),
        _ => g.all_sl_or_sp(),
    }
}

/// Path connectedness of `𝔛_Γ(G)`.
pub fn decide_connected(g: &ReductiveGroupDescriptor, gamma: &FinAbGroup) -> Result<Decision> {
    g.check()?;
    if g.d > 0 {
        return Ok(Decision::new(
            Verdict::Unknown,
            Branch::ReductiveOpen,
            format!("{g} has a central torus; the connectedness criterion is only known for semisimple groups"),
        ));
    }
    Ok(semisimple_decision(g, gamma, "path connected"))
}

/// Irreducibility of `𝔛_Γ(G)`.
pub fn decide_irreducible(g: &ReductiveGroupDescriptor, gamma: &FinAbGroup) -> Result<Decision> {
    g.check()?;
    if g.d == 0 {
        return Ok(semisimple_decision(g, gamma, "irreducible"));
    }
    let r = gamma.rank();
    if gamma.is_free() && reductive_sufficient(g, r) {
        return Ok(Decision::new(
            Verdict::Yes,
            Branch::ReductiveSufficient,
            format!(
                "G = {g} is reductive and DG = {} meets the rank {r} condition, so the variety is irreducible",
                g.derived_label()
            ),
        ));
    }
    Ok(Decision::new(
        Verdict::Unknown,
        Branch::ReductiveOpen,
        format!("{g} has a central torus and the sufficient condition fails; the converse is not known"),
    ))
}

/// Simple connectivity of `𝔛_{ℤ^r}(G)` or of its identity component.
pub fn decide_simply_connected(g: &ReductiveGroupDescriptor, r: usize) -> Result<Decision> {
    g.check()?;
    if r == 0 {
        return Err(Error::InvalidGroup("rank r must be positive".into()));
    }
    // a central torus contributes π_1 = ℤ^d, so both results need d = 0
    if g.d == 0 && g.all_sl_or_sp() {
        return Ok(Decision::new(
            Verdict::Yes,
            Branch::SimplyConnectedClassical,
            format!("{g} is a product of SL/Sp, so the variety is connected and simply connected"),
        ));
    }
    if g.d == 0 && g.all_simply_connected() {
        return Ok(Decision::new(
            Verdict::YesIdentityComponent,
            Branch::SimplyConnectedIdentityComponent,
            format!("{g} is simply connected, so the identity component is simply connected"),
        ));
    }
    Ok(Decision::new(
        Verdict::Unknown,
        Branch::SimplyConnectedOpen,
        format!("{g} is not simply connected; no result applies"),
    ))
}

/// `|Hom(Γ, T)| = ∏ n_j^m` for a torus `T` of dimension `m`.
pub fn torus_component_count(gamma: &FinAbGroup, m: u32) -> BigUint {
    gamma
        .torsion()
        .iter()
        .map(|&n| BigUint::from(n).pow(m))
        .product()
}

/// Irreducibility of the variety `C_{r,n}` of commuting `r`-tuples of
/// `n × n` matrices; the same verdict holds for `Hom(ℤ^r, SL(n))` and
/// `Hom(ℤ^r, GL(n))`.
pub fn commuting_matrices_status(r: usize, n: usize) -> Result<Decision> {
    if r == 0 || n == 0 {
        return Err(Error::InvalidGroup("r and n must be positive".into()));
    }
    let d = if r <= 2 {
        Decision::new(
            Verdict::Yes,
            Branch::CommutingLowRank,
            format!("C_{{{r},{n}}} is irreducible for r <= 2"),
        )
    } else if (r == 3 && n <= 8) || n <= 3 {
        Decision::new(
            Verdict::Yes,
            Branch::CommutingSmallMatrices,
            format!("C_{{{r},{n}}} is irreducible (r = 3 with n <= 8, or n <= 3)"),
        )
    } else if r >= 4 || n >= 32 {
        Decision::new(
            Verdict::No,
            Branch::CommutingReducible,
            format!("C_{{{r},{n}}} is reducible (r, n >= 4, or r = 3 with n >= 32)"),
        )
    } else {
        Decision::new(
            Verdict::Unknown,
            Branch::CommutingOpen,
            format!("C_{{3,{n}}} with 8 < n < 32 is an open case"),
        )
    };
    Ok(d)
}
