//! Seeded experiment driver: iterates a solver, evaluates exploitability at
//! checkpoints, and optionally probes estimator variance. Given a game and
//! settings, every emitted number is a deterministic function of the seed.

use std::time::Instant;

use crate::cfr::{cfr_iteration, CfrConfig};
use crate::error::SolverError;
use crate::eval::{exploitability, probe_mean_variance};
use crate::game::{Game, PlayerId};
use crate::mccfr::{BaselineKeying, BaselineMode, OsConfig, OutcomeSampler};
use crate::rng::{stream_rng, StreamKind};
use crate::strategy::AverageStrategy;
use crate::tables::{AvgStrategyStore, RegretStore, UniformSampling};

/// Solver family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Cfr,
    CfrPlus,
    Mccfr,
    MccfrPlus,
    VrMccfr,
    VrMccfrPlus,
}

impl Algorithm {
    #[must_use]
    pub fn is_sampled(self) -> bool {
        !matches!(self, Algorithm::Cfr | Algorithm::CfrPlus)
    }

    #[must_use]
    pub fn is_plus(self) -> bool {
        matches!(
            self,
            Algorithm::CfrPlus | Algorithm::MccfrPlus | Algorithm::VrMccfrPlus
        )
    }

    /// Default baseline of the algorithm (sampled algorithms only).
    #[must_use]
    pub fn default_baseline(self) -> BaselineMode {
        match self {
            Algorithm::VrMccfr | Algorithm::VrMccfrPlus => BaselineMode::LearnedStateAction,
            _ => BaselineMode::None,
        }
    }

    #[must_use]
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Cfr => "cfr",
            Algorithm::CfrPlus => "cfr-plus",
            Algorithm::Mccfr => "mccfr",
            Algorithm::MccfrPlus => "mccfr-plus",
            Algorithm::VrMccfr => "vr-mccfr",
            Algorithm::VrMccfrPlus => "vr-mccfr-plus",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "cfr" => Algorithm::Cfr,
            "cfr-plus" => Algorithm::CfrPlus,
            "mccfr" => Algorithm::Mccfr,
            "mccfr-plus" => Algorithm::MccfrPlus,
            "vr-mccfr" => Algorithm::VrMccfr,
            "vr-mccfr-plus" => Algorithm::VrMccfrPlus,
            _ => return None,
        })
    }
}

/// Evaluation cadence: geometric 1-2-5 checkpoints (log-scale plots) or a
/// fixed linear step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalCadence {
    Geometric,
    Linear(u64),
}

/// Everything a run needs besides the game.
#[derive(Debug, Clone, Copy)]
pub struct RunSettings {
    pub algo: Algorithm,
    /// Baseline override; `None` keeps the algorithm default.
    pub baseline: Option<BaselineMode>,
    /// Learned-baseline granularity.
    pub keying: BaselineKeying,
    pub bootstrap: bool,
    /// Averaging override; `None` keeps the algorithm default (linear for
    /// the `+` variants, uniform otherwise).
    pub linear_averaging: Option<bool>,
    pub alpha: f64,
    pub iterations: u64,
    pub seed: u64,
    pub cadence: EvalCadence,
    /// Continuations per probed information set; 0 disables probing.
    pub probes: usize,
    /// Moving-average window (iterations) for the variance series.
    pub probe_window: u64,
    /// Record wall-clock times (off by default so outputs are
    /// reproducible byte for byte).
    pub timing: bool,
    pub oracle_node_limit: usize,
}

impl RunSettings {
    #[must_use]
    pub fn new(algo: Algorithm, iterations: u64, seed: u64) -> Self {
        RunSettings {
            algo,
            baseline: None,
            keying: BaselineKeying::History,
            bootstrap: true,
            linear_averaging: None,
            alpha: 0.5,
            iterations,
            seed,
            cadence: EvalCadence::Geometric,
            probes: 0,
            probe_window: 100,
            timing: false,
            oracle_node_limit: 100_000,
        }
    }

    #[must_use]
    pub fn resolved_baseline(&self) -> BaselineMode {
        self.baseline.unwrap_or_else(|| self.algo.default_baseline())
    }

    fn os_config(&self) -> OsConfig {
        OsConfig {
            plus: self.algo.is_plus(),
            linear_averaging: self.linear_averaging.unwrap_or_else(|| self.algo.is_plus()),
            baseline: self.resolved_baseline(),
            keying: self.keying,
            bootstrap: self.bootstrap,
            alpha: self.alpha,
            cross_baseline_updates: true,
            oracle_node_limit: self.oracle_node_limit,
        }
    }

    fn cfr_config(&self) -> CfrConfig {
        let base = if self.algo.is_plus() {
            CfrConfig::plus()
        } else {
            CfrConfig::vanilla()
        };
        CfrConfig {
            linear_averaging: self.linear_averaging.unwrap_or(base.linear_averaging),
            ..base
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let mut problems = Vec::new();
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            problems.push(format!("alpha must be in (0, 1], got {}", self.alpha));
        }
        if self.iterations < 1 {
            problems.push("iterations must be at least 1".to_string());
        }
        if !self.algo.is_sampled() {
            if self.baseline.is_some_and(|b| b != BaselineMode::None) {
                problems.push(format!(
                    "baselines apply to sampled algorithms only, not {}",
                    self.algo.name()
                ));
            }
            if self.probes > 0 {
                problems.push("variance probes apply to sampled algorithms only".to_string());
            }
        }
        if self.probes == 1 {
            problems.push("probes must be 0 (disabled) or at least 2".to_string());
        }
        if let EvalCadence::Linear(step) = self.cadence {
            if step == 0 {
                problems.push("linear evaluation cadence needs a positive step".to_string());
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(SolverError::Config(problems.join("; ")))
        }
    }
}

/// One evaluation checkpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunRecord {
    pub iteration: u64,
    pub exploitability: f64,
    pub br_value_p1: f64,
    pub br_value_p2: f64,
    /// Window-smoothed mean empirical variance, when probing.
    pub variance: Option<f64>,
    /// Wall-clock since run start, when timing.
    pub elapsed_ms: Option<f64>,
}

/// Store sizes at the end of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSummary {
    pub iterations: u64,
    pub regret_entries: usize,
    pub avg_entries: usize,
    pub baseline_entries: [usize; 2],
}

/// Output of one run.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub records: Vec<RunRecord>,
    pub summary: RunSummary,
}

/// The 1-2-5 ladder up to `iterations`, always ending at `iterations`.
#[must_use]
pub fn checkpoints(cadence: EvalCadence, iterations: u64) -> Vec<u64> {
    let mut out = Vec::new();
    match cadence {
        EvalCadence::Geometric => {
            let mut base = 1u64;
            'outer: loop {
                for mult in [1, 2, 5] {
                    let c = base.saturating_mul(mult);
                    if c >= iterations {
                        break 'outer;
                    }
                    out.push(c);
                }
                base = base.saturating_mul(10);
            }
        }
        EvalCadence::Linear(step) => {
            let mut c = step;
            while c < iterations {
                out.push(c);
                c += step;
            }
        }
    }
    out.push(iterations);
    out
}

/// Execute one run. Deterministic given `(game, settings)`; two runs with
/// the same settings produce identical artifacts (timing excluded).
pub fn run_solver(game: &dyn Game, settings: &RunSettings) -> Result<RunArtifacts, SolverError> {
    settings.validate()?;
    if settings.algo.is_sampled() {
        run_sampled(game, settings)
    } else {
        run_full_tree(game, settings)
    }
}

fn run_full_tree(game: &dyn Game, settings: &RunSettings) -> Result<RunArtifacts, SolverError> {
    let start = Instant::now();
    let config = settings.cfr_config();
    let marks = checkpoints(settings.cadence, settings.iterations);
    let mut next_mark = 0usize;

    let mut regrets = RegretStore::new();
    let mut avg = AvgStrategyStore::new();
    let mut records = Vec::with_capacity(marks.len());

    for t in 1..=settings.iterations {
        cfr_iteration(game, &mut regrets, &mut avg, t, config);
        if next_mark < marks.len() && marks[next_mark] == t {
            next_mark += 1;
            let rec = exploitability(game, &AverageStrategy(&avg));
            records.push(RunRecord {
                iteration: t,
                exploitability: rec.exploitability,
                br_value_p1: rec.br_value_p1,
                br_value_p2: rec.br_value_p2,
                variance: None,
                elapsed_ms: settings
                    .timing
                    .then(|| start.elapsed().as_secs_f64() * 1e3),
            });
        }
    }
    Ok(RunArtifacts {
        records,
        summary: RunSummary {
            iterations: settings.iterations,
            regret_entries: regrets.len(),
            avg_entries: avg.len(),
            baseline_entries: [0, 0],
        },
    })
}

fn run_sampled(game: &dyn Game, settings: &RunSettings) -> Result<RunArtifacts, SolverError> {
    let start = Instant::now();
    let marks = checkpoints(settings.cadence, settings.iterations);
    let mut next_mark = 0usize;
    let xi = UniformSampling;

    let mut solver = OutcomeSampler::new(game, settings.os_config())?;
    let mut records = Vec::with_capacity(marks.len());
    let mut window: Vec<f64> = Vec::new();

    for t in 1..=settings.iterations {
        solver.begin_iteration();
        let probing = settings.probes > 0 && in_probe_window(&marks, next_mark, t, settings.probe_window);
        let mut probe_values = Vec::new();

        for player in PlayerId::BOTH {
            solver.refresh_oracle(player);
            let mut rng = stream_rng(settings.seed, StreamKind::Trajectory, t, player.index());
            let traj = solver.sample(&xi, &mut rng);
            if probing {
                let mut probe_rng =
                    stream_rng(settings.seed, StreamKind::Probe, t, player.index());
                if let Some(v) = probe_mean_variance(
                    &solver.view(player),
                    &traj,
                    player,
                    &xi,
                    settings.probes,
                    &mut probe_rng,
                ) {
                    probe_values.push(v);
                }
            }
            solver.update_player(&traj, player)?;
        }

        if probing && !probe_values.is_empty() {
            window.push(probe_values.iter().sum::<f64>() / probe_values.len() as f64);
        }

        if next_mark < marks.len() && marks[next_mark] == t {
            next_mark += 1;
            let rec = exploitability(game, &AverageStrategy(&solver.avg));
            let variance = if settings.probes > 0 && !window.is_empty() {
                Some(window.iter().sum::<f64>() / window.len() as f64)
            } else {
                None
            };
            window.clear();
            records.push(RunRecord {
                iteration: t,
                exploitability: rec.exploitability,
                br_value_p1: rec.br_value_p1,
                br_value_p2: rec.br_value_p2,
                variance,
                elapsed_ms: settings
                    .timing
                    .then(|| start.elapsed().as_secs_f64() * 1e3),
            });
        }
    }

    Ok(RunArtifacts {
        records,
        summary: RunSummary {
            iterations: settings.iterations,
            regret_entries: solver.regrets.len(),
            avg_entries: solver.avg.len(),
            baseline_entries: [solver.baselines[0].len(), solver.baselines[1].len()],
        },
    })
}

/// Probe only inside the smoothing window that ends at the next checkpoint.
fn in_probe_window(marks: &[u64], next_mark: usize, t: u64, window: u64) -> bool {
    match marks.get(next_mark) {
        Some(&mark) => mark - t < window,
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Kuhn;

    #[test]
    fn geometric_ladder() {
        assert_eq!(
            checkpoints(EvalCadence::Geometric, 100),
            vec![1, 2, 5, 10, 20, 50, 100]
        );
        assert_eq!(checkpoints(EvalCadence::Geometric, 7), vec![1, 2, 5, 7]);
        assert_eq!(checkpoints(EvalCadence::Geometric, 1), vec![1]);
    }

    #[test]
    fn linear_ladder() {
        assert_eq!(checkpoints(EvalCadence::Linear(3), 10), vec![3, 6, 9, 10]);
    }

    #[test]
    fn records_are_strictly_increasing_in_iteration() {
        let settings = RunSettings::new(Algorithm::Mccfr, 50, 1);
        let arts = run_solver(&Kuhn, &settings).unwrap();
        for pair in arts.records.windows(2) {
            assert!(pair[0].iteration < pair[1].iteration);
        }
        assert_eq!(arts.records.last().unwrap().iteration, 50);
    }

    #[test]
    fn same_seed_reproduces_artifacts() {
        let settings = RunSettings::new(Algorithm::VrMccfr, 200, 42);
        let a = run_solver(&Kuhn, &settings).unwrap();
        let b = run_solver(&Kuhn, &settings).unwrap();
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn validation_rejects_bad_combinations() {
        let mut s = RunSettings::new(Algorithm::Cfr, 10, 1);
        s.baseline = Some(BaselineMode::Oracle);
        assert!(s.validate().is_err());
        let mut s = RunSettings::new(Algorithm::Mccfr, 10, 1);
        s.alpha = 1.5;
        assert!(s.validate().is_err());
        let mut s = RunSettings::new(Algorithm::Mccfr, 10, 1);
        s.probes = 1;
        assert!(s.validate().is_err());
    }

    #[test]
    fn iteration_one_average_matches_uniform_exploitability() {
        use crate::eval::exploitability;
        use crate::strategy::UniformStrategy;
        let settings = RunSettings::new(Algorithm::Cfr, 1, 1);
        let arts = run_solver(&Kuhn, &settings).unwrap();
        let uniform = exploitability(&Kuhn, &UniformStrategy);
        assert_eq!(arts.records[0].exploitability, uniform.exploitability);
    }
}
