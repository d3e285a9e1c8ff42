use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{event_rates, AgentCounts, Cadence, Event, Policy, SimConfig};
use crate::error::{Error, Result};
use crate::hjb::{enumerate_hjb, DEDUP_TOL};
use crate::model::{ControlVector, ModelParams, StateDist, StrategyCase};
use crate::sampling::{seeded, SimRng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub counts: AgentCounts,
    /// Case of the control in force, when it is one of the four admissible ones.
    pub case: Option<StrategyCase>,
}

impl Sample {
    pub fn x(&self) -> StateDist {
        self.counts.fractions()
    }
}

/// Empirical distribution at each sample time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    /// Number of jumps simulated.
    pub events: u64,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn states(&self) -> Vec<StateDist> {
        self.samples.iter().map(Sample::x).collect()
    }
}

/// A change of the adopted control under the myopic policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwitchEvent {
    pub t: f64,
    /// `None` before the first adoption.
    pub old_case: Option<StrategyCase>,
    pub new_case: StrategyCase,
    /// Average cost of the adopted HJB solution.
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MyopicRun {
    pub trajectory: Trajectory,
    pub switches: Vec<SwitchEvent>,
    /// Decisions at which the HJB equation had no valid solution; the
    /// previous control was kept.
    pub unresolved: u64,
    /// Empirical distribution at the first such decision.
    pub first_unresolved: Option<[f64; 4]>,
}

impl MyopicRun {
    pub fn first_error(&self) -> Option<Error> {
        self.first_unresolved.map(Error::NoValidSolution)
    }
}

/// Simulates under a fixed control.
pub fn simulate(params: &ModelParams, cfg: &SimConfig) -> Result<Trajectory> {
    let Policy::Fixed(u) = cfg.policy else {
        return Err(Error::InvalidParams("simulate needs a fixed policy; use simulate_myopic".into()));
    };
    let mut engine = Engine::new(params, cfg, u)?;
    while engine.advance() {}
    Ok(engine.finish())
}

/// Simulates with every computer adopting the control of the cheapest
/// stationary HJB solution at the current empirical distribution.
///
/// Until a valid solution is first found nobody switches. Among solutions
/// with equal `mu` (within `DEDUP_TOL`) the incumbent control is kept.
pub fn simulate_myopic(params: &ModelParams, cfg: &SimConfig) -> Result<MyopicRun> {
    let Policy::Myopic(cadence) = cfg.policy else {
        return Err(Error::InvalidParams("simulate_myopic needs the myopic policy".into()));
    };
    let mut engine = Engine::new(params, cfg, ControlVector::new(0, 0, 0, 0))?;
    let mut chooser = Chooser::default();
    chooser.decide(&mut engine);
    loop {
        let running = engine.advance();
        if !running {
            break;
        }
        let decide = match cadence {
            Cadence::PerEvent => true,
            Cadence::PerInterval => engine.at_sample_boundary,
        };
        if decide {
            chooser.decide(&mut engine);
        }
    }
    Ok(MyopicRun {
        trajectory: engine.finish(),
        switches: chooser.switches,
        unresolved: chooser.unresolved,
        first_unresolved: chooser.first_unresolved,
    })
}

#[derive(Default)]
struct Chooser {
    incumbent: Option<(StrategyCase, f64)>,
    switches: Vec<SwitchEvent>,
    unresolved: u64,
    first_unresolved: Option<[f64; 4]>,
}

impl Chooser {
    fn decide(&mut self, engine: &mut Engine) {
        let x = engine.counts.fractions();
        let solutions = enumerate_hjb(engine.params, &x);
        let Some(best) = solutions.first() else {
            self.unresolved += 1;
            self.first_unresolved.get_or_insert(x.as_array());
            return;
        };
        // Keep the incumbent among the cheapest solutions.
        let keep = self
            .incumbent
            .and_then(|(case, _)| solutions.iter().find(|s| s.case == case && s.mu - best.mu <= DEDUP_TOL));
        let chosen = keep.unwrap_or(best);
        let old = self.incumbent.map(|(c, _)| c);
        if old != Some(chosen.case) {
            self.switches.push(SwitchEvent { t: engine.t, old_case: old, new_case: chosen.case, mu: chosen.mu });
        }
        self.incumbent = Some((chosen.case, chosen.mu));
        engine.set_control(chosen.control());
    }
}

struct Engine<'a> {
    params: &'a ModelParams,
    rng: SimRng,
    counts: AgentCounts,
    u: ControlVector,
    rates: [f64; 12],
    total: f64,
    t: f64,
    times: Vec<f64>,
    next_sample: usize,
    samples: Vec<Sample>,
    events: u64,
    /// The last call to `advance` stopped at a sample time rather than a jump.
    at_sample_boundary: bool,
}

impl<'a> Engine<'a> {
    fn new(params: &'a ModelParams, cfg: &SimConfig, u: ControlVector) -> Result<Self> {
        params.validate()?;
        cfg.validate()?;
        let counts = cfg.initial_counts()?;
        let mut engine = Self {
            params,
            rng: seeded(cfg.seed),
            counts,
            u,
            rates: [0.0; 12],
            total: 0.0,
            t: 0.0,
            times: cfg.sample_times(),
            next_sample: 0,
            samples: Vec::new(),
            events: 0,
            at_sample_boundary: false,
        };
        engine.refresh_rates();
        Ok(engine)
    }

    fn refresh_rates(&mut self) {
        self.rates = event_rates(self.params, &self.counts, &self.u);
        self.total = self.rates.iter().sum();
    }

    fn set_control(&mut self, u: ControlVector) {
        if u != self.u {
            self.u = u;
            self.refresh_rates();
        }
    }

    fn record(&mut self) {
        let t = self.times[self.next_sample];
        self.samples.push(Sample { t, counts: self.counts, case: self.u.case() });
        self.next_sample += 1;
    }

    /// Moves to the next jump or sample time, whichever comes first. The
    /// waiting time is memoryless, so stopping at a sample time and redrawing
    /// afterwards is exact. Returns `false` once the horizon is reached.
    fn advance(&mut self) -> bool {
        // Samples at the current time see the state before any later jump.
        while self.next_sample < self.times.len() && self.times[self.next_sample] <= self.t {
            self.record();
        }
        if self.next_sample >= self.times.len() {
            return false;
        }
        let next_sample_t = self.times[self.next_sample];
        let wait = if self.total > 0.0 {
            // 1 - U lies in (0, 1].
            -(1.0 - self.rng.random::<f64>()).ln() / self.total
        } else {
            f64::INFINITY
        };
        if self.t + wait >= next_sample_t {
            self.t = next_sample_t;
            self.record();
            self.at_sample_boundary = true;
            return true;
        }
        self.t += wait;
        let event = self.pick_event();
        self.counts.apply(event);
        self.events += 1;
        self.refresh_rates();
        self.at_sample_boundary = false;
        true
    }

    fn pick_event(&mut self) -> Event {
        let target = self.rng.random::<f64>() * self.total;
        let mut acc = 0.0;
        let mut last_positive = 0;
        for (i, rate) in self.rates.iter().enumerate() {
            if *rate <= 0.0 {
                continue;
            }
            last_positive = i;
            acc += rate;
            if target < acc {
                return Event::ALL[i];
            }
        }
        Event::ALL[last_positive]
    }

    fn finish(self) -> Trajectory {
        Trajectory { samples: self.samples, events: self.events }
    }
}
