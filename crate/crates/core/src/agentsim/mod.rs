//! Exact event-driven simulation of `N` interacting computers.
//!
//! Each computer sits in one of DI, DS, UI, US. Direct attacks and recoveries
//! act on single computers, contact infections occur at rate
//! `n_I n_S beta / N`, and a computer whose control asks for a switch changes
//! its protection regime at rate `lambda`. As `N` grows, `n / N` follows the
//! kinetic equation.

mod compare;
mod gillespie;

pub use compare::{compare_ode, replica_deviation, run_myopic_replicas, run_replicas, DeviationStats};
pub use gillespie::{simulate, simulate_myopic, MyopicRun, Sample, SwitchEvent, Trajectory};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ControlVector, ModelParams, StateDist, StrategyCase, DI, DS, UI, US};

/// Numbers of computers in DI, DS, UI, US.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AgentCounts {
    pub n_di: u64,
    pub n_ds: u64,
    pub n_ui: u64,
    pub n_us: u64,
}

impl AgentCounts {
    pub fn new(n_di: u64, n_ds: u64, n_ui: u64, n_us: u64) -> Result<Self> {
        let c = Self { n_di, n_ds, n_ui, n_us };
        if c.total() == 0 {
            return Err(Error::InvalidParams("population must contain at least one computer".into()));
        }
        Ok(c)
    }

    pub fn from_array(n: [u64; 4]) -> Result<Self> {
        Self::new(n[DI], n[DS], n[UI], n[US])
    }

    pub fn as_array(&self) -> [u64; 4] {
        [self.n_di, self.n_ds, self.n_ui, self.n_us]
    }

    pub fn total(&self) -> u64 {
        self.n_di + self.n_ds + self.n_ui + self.n_us
    }

    /// Empirical distribution `n / N`.
    pub fn fractions(&self) -> StateDist {
        let n = self.total() as f64;
        StateDist::renormalized(self.as_array().map(|v| v as f64 / n))
    }

    /// Rounds `n x` to integers with the largest-remainder rule, so the
    /// counts sum to `n` exactly. Ties go to the lower state index.
    pub fn from_fractions(x: &StateDist, n: u64) -> Result<Self> {
        let exact = x.as_array().map(|v| v * n as f64);
        let mut counts = exact.map(|v| v.floor() as u64);
        let assigned: u64 = counts.iter().sum();
        let mut order: Vec<usize> = (0..4).collect();
        order.sort_by(|&a, &b| (exact[b] - exact[b].floor()).total_cmp(&(exact[a] - exact[a].floor())).then(a.cmp(&b)));
        for &i in order.iter().take(n.saturating_sub(assigned) as usize) {
            counts[i] += 1;
        }
        Self::from_array(counts)
    }

    fn apply(&mut self, event: Event) {
        let (from, to) = event.jump();
        let mut n = self.as_array();
        debug_assert!(n[from] > 0, "{event:?} from an empty state");
        n[from] -= 1;
        n[to] += 1;
        *self = Self { n_di: n[DI], n_ds: n[DS], n_ui: n[UI], n_us: n[US] };
    }
}

/// The twelve jumps of the `N`-computer chain, in the order used by
/// [`event_rates`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Event {
    DirectInfectionD,
    DirectInfectionU,
    RecoveryD,
    RecoveryU,
    ContactDiToDs,
    ContactUiToDs,
    ContactDiToUs,
    ContactUiToUs,
    SwitchDi,
    SwitchDs,
    SwitchUi,
    SwitchUs,
}

impl Event {
    pub const ALL: [Event; 12] = [
        Event::DirectInfectionD,
        Event::DirectInfectionU,
        Event::RecoveryD,
        Event::RecoveryU,
        Event::ContactDiToDs,
        Event::ContactUiToDs,
        Event::ContactDiToUs,
        Event::ContactUiToUs,
        Event::SwitchDi,
        Event::SwitchDs,
        Event::SwitchUi,
        Event::SwitchUs,
    ];

    /// Source and target state indices of the moving computer.
    pub fn jump(self) -> (usize, usize) {
        match self {
            Event::DirectInfectionD | Event::ContactDiToDs | Event::ContactUiToDs => (DS, DI),
            Event::DirectInfectionU | Event::ContactDiToUs | Event::ContactUiToUs => (US, UI),
            Event::RecoveryD => (DI, DS),
            Event::RecoveryU => (UI, US),
            Event::SwitchDi => (DI, UI),
            Event::SwitchDs => (DS, US),
            Event::SwitchUi => (UI, DI),
            Event::SwitchUs => (US, DS),
        }
    }

    /// Change of the count vector caused by the jump.
    pub fn direction(self) -> [i64; 4] {
        let (from, to) = self.jump();
        let mut d = [0; 4];
        d[from] = -1;
        d[to] = 1;
        d
    }
}

/// Rate of every jump in [`Event::ALL`] order.
pub fn event_rates(params: &ModelParams, counts: &AgentCounts, u: &ControlVector) -> [f64; 12] {
    let p = params;
    let n = counts.as_array().map(|v| v as f64);
    let total = counts.total() as f64;
    let l = p.lambda;
    [
        n[DS] * p.direct_d(),
        n[US] * p.direct_u(),
        n[DI] * p.q_rec_d,
        n[UI] * p.q_rec_u,
        n[DI] * n[DS] * p.beta_dd / total,
        n[UI] * n[DS] * p.beta_ud / total,
        n[DI] * n[US] * p.beta_du / total,
        n[UI] * n[US] * p.beta_uu / total,
        l * n[DI] * u.rate(DI),
        l * n[DS] * u.rate(DS),
        l * n[UI] * u.rate(UI),
        l * n[US] * u.rate(US),
    ]
}

/// When the myopic policy re-solves the individual problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cadence {
    /// At every sample time.
    #[default]
    PerInterval,
    /// After every jump.
    PerEvent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    Fixed(ControlVector),
    /// Every computer plays the control of the cheapest stationary HJB
    /// solution at the current empirical distribution.
    Myopic(Cadence),
}

impl Policy {
    pub fn fixed(case: StrategyCase) -> Self {
        Policy::Fixed(case.control())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n_agents: u64,
    pub horizon: f64,
    pub seed: u64,
    pub policy: Policy,
    pub sample_interval: f64,
    /// Starting distribution, rounded to counts with
    /// [`AgentCounts::from_fractions`].
    pub initial: StateDist,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_agents == 0 {
            return Err(Error::InvalidParams("n_agents must be at least 1".into()));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::InvalidParams(format!("horizon must be positive, got {}", self.horizon)));
        }
        if !(self.sample_interval > 0.0 && self.sample_interval.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "sample_interval must be positive, got {}",
                self.sample_interval
            )));
        }
        Ok(())
    }

    pub fn initial_counts(&self) -> Result<AgentCounts> {
        AgentCounts::from_fractions(&self.initial, self.n_agents)
    }

    /// Sample times `0, dt, 2 dt, ...` not exceeding the horizon.
    pub fn sample_times(&self) -> Vec<f64> {
        let n = (self.horizon / self.sample_interval * (1.0 + 1e-12)).floor() as usize;
        (0..=n).map(|k| k as f64 * self.sample_interval).collect()
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}
