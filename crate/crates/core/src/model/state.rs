use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `|sum(x) - 1|` accepted before renormalizing.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// The four individual states, in canonical order DI, DS, UI, US.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AgentState {
    #[serde(rename = "DI")]
    DefendedInfected,
    #[serde(rename = "DS")]
    DefendedSusceptible,
    #[serde(rename = "UI")]
    UnprotectedInfected,
    #[serde(rename = "US")]
    UnprotectedSusceptible,
}

pub const DI: usize = 0;
pub const DS: usize = 1;
pub const UI: usize = 2;
pub const US: usize = 3;

impl AgentState {
    pub const ALL: [AgentState; 4] = [
        AgentState::DefendedInfected,
        AgentState::DefendedSusceptible,
        AgentState::UnprotectedInfected,
        AgentState::UnprotectedSusceptible,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        ["DI", "DS", "UI", "US"][self.index()]
    }

    /// State reached by switching the protection regime.
    pub fn switched(self) -> AgentState {
        AgentState::ALL[[UI, US, DI, DS][self.index()]]
    }
}

/// Population fractions `(x_DI, x_DS, x_UI, x_US)` on the 3-simplex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct StateDist([f64; 4]);

impl StateDist {
    pub fn new(x_di: f64, x_ds: f64, x_ui: f64, x_us: f64) -> Result<Self> {
        Self::from_array([x_di, x_ds, x_ui, x_us])
    }

    /// Accepts `x` if every entry is `>= -SIMPLEX_TOL` and the sum is within
    /// `SIMPLEX_TOL` of one; clips and renormalizes.
    pub fn from_array(x: [f64; 4]) -> Result<Self> {
        if x.iter().any(|v| !v.is_finite() || *v < -SIMPLEX_TOL) {
            return Err(Error::InvalidSimplex(format!("components {x:?} must be >= 0")));
        }
        let sum: f64 = x.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidSimplex(format!("components {x:?} sum to {sum}")));
        }
        Ok(Self::renormalized(x))
    }

    /// Clips negatives to zero and rescales; `x` must have positive mass.
    pub(crate) fn renormalized(x: [f64; 4]) -> Self {
        let clipped = x.map(|v| v.max(0.0));
        let sum: f64 = clipped.iter().sum();
        Self(clipped.map(|v| v / sum))
    }

    pub fn as_array(&self) -> [f64; 4] {
        self.0
    }

    pub fn get(&self, state: AgentState) -> f64 {
        self.0[state.index()]
    }

    pub fn di(&self) -> f64 {
        self.0[DI]
    }

    pub fn ds(&self) -> f64 {
        self.0[DS]
    }

    pub fn ui(&self) -> f64 {
        self.0[UI]
    }

    pub fn us(&self) -> f64 {
        self.0[US]
    }

    /// Total infected fraction `x_DI + x_UI`.
    pub fn infected(&self) -> f64 {
        self.0[DI] + self.0[UI]
    }

    pub fn sup_distance(&self, other: &StateDist) -> f64 {
        sup_norm_diff(&self.0, &other.0)
    }

    /// Image under the defended/unprotected relabeling (DI<->UI, DS<->US).
    pub fn swap_protection(&self) -> Self {
        Self([self.0[UI], self.0[US], self.0[DI], self.0[DS]])
    }
}

impl TryFrom<[f64; 4]> for StateDist {
    type Error = Error;

    fn try_from(x: [f64; 4]) -> Result<Self> {
        Self::from_array(x)
    }
}

impl From<StateDist> for [f64; 4] {
    fn from(x: StateDist) -> Self {
        x.0
    }
}

pub(crate) fn sup_norm_diff(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

pub(crate) fn sup_norm(a: &[f64; 4]) -> f64 {
    a.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// The four admissible pure stationary strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StrategyCase {
    /// (i): always prefer unprotected; `u = (1,1,0,0)`.
    #[serde(rename = "i")]
    AlwaysUnprotected,
    /// (ii): always prefer defended; `u = (0,0,1,1)`.
    #[serde(rename = "ii")]
    AlwaysDefended,
    /// (iii): drop protection when infected, take it when susceptible; `u = (1,0,0,1)`.
    #[serde(rename = "iii")]
    DefendSusceptible,
    /// (iv): take protection when infected, drop it when susceptible; `u = (0,1,1,0)`.
    #[serde(rename = "iv")]
    DefendInfected,
}

impl StrategyCase {
    pub const ALL: [StrategyCase; 4] = [
        StrategyCase::AlwaysUnprotected,
        StrategyCase::AlwaysDefended,
        StrategyCase::DefendSusceptible,
        StrategyCase::DefendInfected,
    ];

    pub fn label(self) -> &'static str {
        match self {
            StrategyCase::AlwaysUnprotected => "i",
            StrategyCase::AlwaysDefended => "ii",
            StrategyCase::DefendSusceptible => "iii",
            StrategyCase::DefendInfected => "iv",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.label() == label)
    }

    pub fn control(self) -> ControlVector {
        let [di, ds, ui, us] = match self {
            StrategyCase::AlwaysUnprotected => [1, 1, 0, 0],
            StrategyCase::AlwaysDefended => [0, 0, 1, 1],
            StrategyCase::DefendSusceptible => [1, 0, 0, 1],
            StrategyCase::DefendInfected => [0, 1, 1, 0],
        };
        ControlVector::new(di, ds, ui, us)
    }

    pub fn is_acyclic(self) -> bool {
        matches!(self, StrategyCase::AlwaysUnprotected | StrategyCase::AlwaysDefended)
    }

    /// Counterpart under the defended/unprotected relabeling.
    pub fn swap_protection(self) -> Self {
        match self {
            StrategyCase::AlwaysUnprotected => StrategyCase::AlwaysDefended,
            StrategyCase::AlwaysDefended => StrategyCase::AlwaysUnprotected,
            StrategyCase::DefendSusceptible => StrategyCase::DefendInfected,
            StrategyCase::DefendInfected => StrategyCase::DefendSusceptible,
        }
    }
}

impl fmt::Display for StrategyCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Binary switching controls `(u_DI, u_DS, u_UI, u_US)`; `1` means
/// "switch protection regime".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ControlVector([u8; 4]);

impl ControlVector {
    /// Panics if any entry is not 0 or 1.
    pub fn new(u_di: u8, u_ds: u8, u_ui: u8, u_us: u8) -> Self {
        let u = [u_di, u_ds, u_ui, u_us];
        assert!(u.iter().all(|v| *v <= 1), "controls are binary, got {u:?}");
        Self(u)
    }

    /// All sixteen binary controls, `u_DI` as the most significant bit.
    pub fn all() -> impl Iterator<Item = ControlVector> {
        (0u8..16).map(|bits| Self([(bits >> 3) & 1, (bits >> 2) & 1, (bits >> 1) & 1, bits & 1]))
    }

    pub fn as_array(&self) -> [u8; 4] {
        self.0
    }

    pub fn get(&self, state: AgentState) -> u8 {
        self.0[state.index()]
    }

    pub(crate) fn rate(&self, index: usize) -> f64 {
        f64::from(self.0[index])
    }

    /// The admissible case this control belongs to, if any.
    pub fn case(&self) -> Option<StrategyCase> {
        StrategyCase::ALL.into_iter().find(|c| c.control() == *self)
    }
}

impl fmt::Display for ControlVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}
