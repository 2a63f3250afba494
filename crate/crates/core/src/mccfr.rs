//! Outcome-sampling MCCFR and its variance-reduced variants.
//!
//! One iteration samples a single root-to-terminal trajectory per player and
//! walks it backwards. Estimated values are built from control variates: at
//! every history the sampled branch contributes `b + (child − b)/ξ` and the
//! off-trajectory branches contribute their baseline `b`, so the estimate
//! stays unbiased for any fixed baseline while a good baseline removes most
//! of the sampling noise. Values are bootstrapped: the child value fed into
//! a node is itself already baseline-enhanced, propagating the reduction up
//! the trajectory. With a zero baseline the pass reduces exactly to plain
//! outcome-sampling MCCFR.

use std::collections::HashMap;

use rand::Rng;

use crate::cfr::exact_values;
use crate::error::SolverError;
use crate::game::{enumerate_histories, Game, History, InfoStateKey, PlayerId};
use crate::strategy::{CurrentStrategy, Strategy};
use crate::tables::{AvgStrategyStore, BaselineStore, RegretStore, SamplingPolicy};

/// Which baseline feeds the control variate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineMode {
    /// b ≡ 0: plain outcome-sampling MCCFR.
    None,
    /// Learned per (state, action) decayed average.
    LearnedStateAction,
    /// Learned per state, one scalar shared by all actions.
    LearnedState,
    /// True expected values `u_i^σ(ha)` keyed by history, recomputed from
    /// the current strategy every iteration. Desk-scale games only.
    Oracle,
}

/// What "state" means for the learned baseline's table.
///
/// `History` tracks one average per concrete history, the same granularity
/// as the oracle; on small games it approaches the oracle's zero-variance
/// behaviour as the averages converge. `Infoset` tracks one average per
/// augmented information set of the updating player; it masks the
/// opponent's private cards, which leaves their contribution to the
/// variance in place no matter how well the average has converged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKeying {
    History,
    Infoset,
}

/// Outcome-sampling solver settings.
#[derive(Debug, Clone, Copy)]
pub struct OsConfig {
    /// RM+ regret accumulation.
    pub plus: bool,
    /// Weight average-strategy accumulation by the iteration index.
    pub linear_averaging: bool,
    pub baseline: BaselineMode,
    /// Granularity of the learned-baseline table.
    pub keying: BaselineKeying,
    /// Propagate baseline-enhanced child values up the trajectory. When
    /// false, raw sampled values propagate and the baseline correction is
    /// applied only locally at updated information sets (ablation).
    pub bootstrap: bool,
    /// Decay factor of the learned-baseline average, in (0, 1].
    pub alpha: f64,
    /// Feed each sampled trajectory to both players' learned-baseline
    /// stores (regret updates stay with the trajectory's own player).
    /// Doubles baseline coverage per iteration.
    pub cross_baseline_updates: bool,
    /// Refuse the oracle baseline on games with more histories than this.
    pub oracle_node_limit: usize,
}

impl OsConfig {
    /// Plain outcome-sampling MCCFR.
    #[must_use]
    pub fn mccfr() -> Self {
        OsConfig {
            plus: false,
            linear_averaging: false,
            baseline: BaselineMode::None,
            keying: BaselineKeying::History,
            bootstrap: true,
            alpha: 0.5,
            cross_baseline_updates: true,
            oracle_node_limit: 100_000,
        }
    }

    /// VR-MCCFR with the learned state-action baseline.
    #[must_use]
    pub fn vr_mccfr() -> Self {
        OsConfig {
            baseline: BaselineMode::LearnedStateAction,
            ..OsConfig::mccfr()
        }
    }

    /// VR-MCCFR+: RM+ and linearly weighted averaging on top.
    #[must_use]
    pub fn vr_mccfr_plus() -> Self {
        OsConfig {
            plus: true,
            linear_averaging: true,
            ..OsConfig::vr_mccfr()
        }
    }
}

/// One node of a sampled trajectory, with the prefix quantities needed by
/// the backward pass.
#[derive(Debug, Clone)]
pub struct TrajNode {
    pub history: History,
    pub actor: PlayerId,
    /// Chosen action slot.
    pub sampled: usize,
    /// Acting player's strategy at the node (chance probabilities at chance
    /// nodes).
    pub sigma: Vec<f64>,
    /// Sampling probabilities (equal to `sigma` at chance nodes).
    pub xi: Vec<f64>,
    /// q(h): sampling probability of reaching this node.
    pub q: f64,
    /// π_p(h) for each player p: p's own contribution to reach.
    pub reach_own: [f64; 2],
    /// π_{-p}(h) for each player p: everyone else's contribution, chance
    /// included.
    pub reach_opp: [f64; 2],
}

/// A sampled root-to-terminal path.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub nodes: Vec<TrajNode>,
    pub terminal: History,
    pub q_terminal: f64,
    pub reach_own_terminal: [f64; 2],
    pub reach_opp_terminal: [f64; 2],
}

impl Trajectory {
    /// The trajectory's node at a prefix `h ⊑ z`, if any.
    #[must_use]
    pub fn node_at(&self, h: &History) -> Option<&TrajNode> {
        self.nodes.get(h.len()).filter(|n| &n.history == h)
    }

    /// Decision points of `player` along the path, with the weights needed
    /// to turn value estimates into counterfactual values.
    #[must_use]
    pub fn decision_points(&self, player: PlayerId) -> Vec<&TrajNode> {
        self.nodes.iter().filter(|n| n.actor == player).collect()
    }
}

/// Sample one trajectory under `profile`, following `xi` at player nodes
/// and the true chance probabilities at chance nodes. Consumes exactly one
/// uniform draw per visited non-terminal node.
pub fn sample_trajectory(
    game: &dyn Game,
    profile: &dyn Strategy,
    xi: &dyn SamplingPolicy,
    rng: &mut impl Rng,
) -> Trajectory {
    walk_forward(game, profile, xi, |probs| pick(probs, rng.random::<f64>()))
}

/// Deterministic trajectory along `action_ids` (tests, enumeration).
pub fn trajectory_from_ids(
    game: &dyn Game,
    profile: &dyn Strategy,
    xi: &dyn SamplingPolicy,
    action_ids: &[usize],
) -> Trajectory {
    let mut steps = action_ids.iter();
    walk_forward(game, profile, xi, |_probs| {
        *steps.next().expect("action list shorter than the path")
    })
}

fn pick(probs: &[f64], x: f64) -> usize {
    let mut acc = 0.0;
    for (slot, &p) in probs.iter().enumerate() {
        acc += p;
        if x < acc {
            return slot;
        }
    }
    probs.len() - 1
}

fn walk_forward(
    game: &dyn Game,
    profile: &dyn Strategy,
    xi: &dyn SamplingPolicy,
    mut choose: impl FnMut(&[f64]) -> usize,
) -> Trajectory {
    let mut h = History::root();
    let mut q = 1.0;
    let mut reach_own = [1.0, 1.0];
    let mut reach_opp = [1.0, 1.0];
    let mut nodes = Vec::new();

    while !game.is_terminal(&h) {
        let actor = game.current_player(&h);
        let (sigma, xi_probs) = if actor == PlayerId::Chance {
            let probs: Vec<f64> = game.chance_outcomes(&h).into_iter().map(|(_, p)| p).collect();
            (probs.clone(), probs)
        } else {
            let n = game.legal_actions(&h).len();
            let key = game.info_state_key(&h, actor);
            (profile.probs(&key, n), xi.probs(game, &h, n))
        };
        let sampled = choose(&xi_probs);
        nodes.push(TrajNode {
            history: h.clone(),
            actor,
            sampled,
            sigma: sigma.clone(),
            xi: xi_probs.clone(),
            q,
            reach_own,
            reach_opp,
        });
        q *= xi_probs[sampled];
        for p in 0..2 {
            if actor != PlayerId::Chance && actor.index() == p {
                reach_own[p] *= sigma[sampled];
            } else {
                reach_opp[p] *= sigma[sampled];
            }
        }
        h = h.apply(sampled);
    }

    Trajectory {
        nodes,
        terminal: h,
        q_terminal: q,
        reach_own_terminal: reach_own,
        reach_opp_terminal: reach_opp,
    }
}

/// Eq.-5-style plain sampled counterfactual value of history `h` for
/// `player`: `π_{-i}(h) · u_i^σ(h, z) / q(z)`, and 0 when `h ⋢ z`.
///
/// Kept independent of the backward pass as the reduction oracle for the
/// zero-baseline mode.
#[must_use]
pub fn sampled_cf_value(game: &dyn Game, traj: &Trajectory, h: &History, player: PlayerId) -> f64 {
    if !h.is_prefix_of(&traj.terminal) {
        return 0.0;
    }
    let i = player.index();
    let reach_opp = match traj.node_at(h) {
        Some(n) => n.reach_opp[i],
        None => traj.reach_opp_terminal[i],
    };
    let tail: f64 = traj.nodes[h.len()..]
        .iter()
        .map(|n| n.sigma[n.sampled])
        .product();
    reach_opp * tail * game.utility(&traj.terminal, player) / traj.q_terminal
}

/// Values produced by the backward pass at one trajectory node.
#[derive(Debug, Clone)]
pub struct NodeValues {
    /// û^b(h, a | z) for each action, under the propagation semantics of
    /// the active mode (baseline-enhanced when bootstrapping, raw sampled
    /// otherwise).
    pub action_values: Vec<f64>,
    /// û^b(h | z) = Σ_a σ(h,a) · û^b(h, a | z).
    pub mixed_value: f64,
    /// v̂(I, a) and v̂(I) when the updating player acts here.
    pub cf_action_values: Option<Vec<f64>>,
    pub cf_value: Option<f64>,
    /// Child value recorded for the learned-baseline update at this node's
    /// sampled action.
    pub baseline_sample: f64,
}

/// Backward-pass output for a whole trajectory, aligned with its nodes.
#[derive(Debug, Clone)]
pub struct PassValues {
    pub per_node: Vec<NodeValues>,
    pub root_value: f64,
}

/// Read-only bundle sufficient to evaluate the active estimator.
#[derive(Clone, Copy)]
pub struct EstimatorView<'a> {
    pub game: &'a dyn Game,
    pub config: &'a OsConfig,
    pub regrets: &'a RegretStore,
    pub baselines: &'a [BaselineStore; 2],
    /// Oracle values `u_i^σ(h)` for the updating player, when the mode
    /// needs them.
    pub oracle: Option<&'a HashMap<History, f64>>,
}

/// Store key of the learned baseline at `h` from `player`'s view.
fn baseline_key(
    game: &dyn Game,
    keying: BaselineKeying,
    h: &History,
    player: PlayerId,
) -> InfoStateKey {
    match keying {
        BaselineKeying::Infoset => game.info_state_key(h, player),
        BaselineKeying::History => {
            let mut s = String::with_capacity(h.len());
            for id in h.action_ids() {
                s.push((b'a' + id as u8) as char);
            }
            InfoStateKey::new(player, s)
        }
    }
}

impl EstimatorView<'_> {
    fn baseline_vec(&self, h: &History, actor: PlayerId, player: PlayerId, n: usize) -> Vec<f64> {
        match self.config.baseline {
            BaselineMode::None => vec![0.0; n],
            BaselineMode::LearnedStateAction => {
                let store = &self.baselines[player.index()];
                let key = baseline_key(self.game, self.config.keying, h, player);
                if actor == PlayerId::Chance {
                    // bucket by card identity, not remaining-deck position
                    (0..n)
                        .map(|a| store.value(&key, self.game.chance_outcome_class(h, a)))
                        .collect()
                } else {
                    store.values(&key, n)
                }
            }
            BaselineMode::LearnedState => {
                let key = baseline_key(self.game, self.config.keying, h, player);
                vec![self.baselines[player.index()].value(&key, 0); n]
            }
            BaselineMode::Oracle => {
                let oracle = self.oracle.expect("oracle baseline without oracle values");
                (0..n)
                    .map(|a| *oracle.get(&h.apply(a)).expect("history missing from oracle"))
                    .collect()
            }
        }
    }

    /// û^b(h, a | z') for every action at `h`, over one freshly sampled
    /// continuation. Read-only; used by the variance probe and tests.
    pub fn continuation_action_values(
        &self,
        h: &History,
        player: PlayerId,
        xi: &dyn SamplingPolicy,
        rng: &mut impl Rng,
    ) -> Vec<f64> {
        let (_sigma, xi_probs, n) = self.node_distributions(h);
        let sampled = pick(&xi_probs, rng.random::<f64>());
        let child = self.continuation_mixed_value(&h.apply(sampled), player, xi, rng);
        let actor = self.game.current_player(h);
        let b = self.baseline_vec(h, actor, player, n);
        enhanced_action_values(&b, child, sampled, xi_probs[sampled])
    }

    /// û^b(h | z') (or the raw û(h | z') when not bootstrapping) over one
    /// freshly sampled continuation below `h`.
    fn continuation_mixed_value(
        &self,
        h: &History,
        player: PlayerId,
        xi: &dyn SamplingPolicy,
        rng: &mut impl Rng,
    ) -> f64 {
        if self.game.is_terminal(h) {
            return self.game.utility(h, player);
        }
        let (sigma, xi_probs, n) = self.node_distributions(h);
        let sampled = pick(&xi_probs, rng.random::<f64>());
        let child = self.continuation_mixed_value(&h.apply(sampled), player, xi, rng);
        if self.config.bootstrap {
            let actor = self.game.current_player(h);
            let b = self.baseline_vec(h, actor, player, n);
            let action_values = enhanced_action_values(&b, child, sampled, xi_probs[sampled]);
            mix(&sigma, &action_values)
        } else {
            let action_values = raw_action_values(n, child, sampled, xi_probs[sampled]);
            mix(&sigma, &action_values)
        }
    }

    fn node_distributions(&self, h: &History) -> (Vec<f64>, Vec<f64>, usize) {
        let actor = self.game.current_player(h);
        if actor == PlayerId::Chance {
            let probs: Vec<f64> = self
                .game
                .chance_outcomes(h)
                .into_iter()
                .map(|(_, p)| p)
                .collect();
            let n = probs.len();
            (probs.clone(), probs, n)
        } else {
            let n = self.game.legal_actions(h).len();
            let key = self.game.info_state_key(h, actor);
            let sigma = self.regrets.strategy(&key, n);
            let xi = vec![1.0 / n as f64; n];
            (sigma, xi, n)
        }
    }
}

/// Eq.-9 action values: the sampled branch gets `b + (child − b)/ξ`, the
/// off-trajectory branches get their baseline.
fn enhanced_action_values(b: &[f64], child: f64, sampled: usize, xi_prob: f64) -> Vec<f64> {
    b.iter()
        .enumerate()
        .map(|(slot, &bv)| {
            if slot == sampled {
                bv + (child - bv) / xi_prob
            } else {
                bv
            }
        })
        .collect()
}

/// Eq.-7 raw action values: `child/ξ` on the sampled branch, 0 elsewhere.
fn raw_action_values(n: usize, child: f64, sampled: usize, xi_prob: f64) -> Vec<f64> {
    let mut out = vec![0.0; n];
    out[sampled] = child / xi_prob;
    out
}

fn mix(sigma: &[f64], values: &[f64]) -> f64 {
    sigma.iter().zip(values).map(|(&s, &v)| s * v).sum()
}

/// The recursive backward pass of one trajectory for `player`, without
/// touching any store. Walks the path terminal-first; at each history the
/// child's (already enhanced, when bootstrapping) value forms the Eq.-9
/// action values, their σ-mix propagates upward, and at the player's own
/// decision points the counterfactual values `π_{-i}(h)/q(h) · û^b` are
/// attached for the regret update.
pub fn compute_pass(
    view: &EstimatorView<'_>,
    traj: &Trajectory,
    player: PlayerId,
    iteration: u64,
) -> Result<PassValues, SolverError> {
    let i = player.index();
    let mut carried = view.game.utility(&traj.terminal, player);
    let mut per_node: Vec<NodeValues> = Vec::with_capacity(traj.nodes.len());

    for node in traj.nodes.iter().rev() {
        let n = node.sigma.len();
        let xi_prob = node.xi[node.sampled];

        let baseline_sample = carried;
        let (action_values, cf_action_values, cf_value) = if view.config.bootstrap {
            let b = view.baseline_vec(&node.history, node.actor, player, n);
            let values = enhanced_action_values(&b, carried, node.sampled, xi_prob);
            if node.actor == player {
                let w = node.reach_opp[i] / node.q;
                let cf: Vec<f64> = values.iter().map(|&v| w * v).collect();
                let cf_mix = w * mix(&node.sigma, &values);
                (values, Some(cf), Some(cf_mix))
            } else {
                (values, None, None)
            }
        } else {
            // raw propagation; the correction is applied only where regrets
            // are formed
            let values = raw_action_values(n, carried, node.sampled, xi_prob);
            if node.actor == player {
                let b = view.baseline_vec(&node.history, node.actor, player, n);
                let corrected = enhanced_action_values(&b, carried, node.sampled, xi_prob);
                let w = node.reach_opp[i] / node.q;
                let cf: Vec<f64> = corrected.iter().map(|&v| w * v).collect();
                let cf_mix = w * mix(&node.sigma, &corrected);
                (values, Some(cf), Some(cf_mix))
            } else {
                (values, None, None)
            }
        };

        let mixed_value = mix(&node.sigma, &action_values);
        if !mixed_value.is_finite() {
            let key = view.game.info_state_key(&node.history, player);
            return Err(SolverError::NonFinite {
                context: format!("û at {key}"),
                value: mixed_value,
                iteration,
            });
        }
        per_node.push(NodeValues {
            action_values,
            mixed_value,
            cf_action_values,
            cf_value,
            baseline_sample,
        });
        carried = mixed_value;
    }

    per_node.reverse();
    Ok(PassValues {
        per_node,
        root_value: carried,
    })
}

/// Outcome-sampling solver state: one run owns it exclusively.
pub struct OutcomeSampler<'g> {
    game: &'g dyn Game,
    config: OsConfig,
    pub regrets: RegretStore,
    pub avg: AvgStrategyStore,
    pub baselines: [BaselineStore; 2],
    oracle: [Option<HashMap<History, f64>>; 2],
    iteration: u64,
}

impl<'g> OutcomeSampler<'g> {
    pub fn new(game: &'g dyn Game, config: OsConfig) -> Result<Self, SolverError> {
        assert!(
            config.alpha > 0.0 && config.alpha <= 1.0,
            "alpha out of (0, 1]"
        );
        if config.baseline == BaselineMode::Oracle {
            let nodes = enumerate_histories(game).len();
            if nodes > config.oracle_node_limit {
                return Err(SolverError::OracleTooLarge {
                    nodes,
                    limit: config.oracle_node_limit,
                });
            }
        }
        let bound = game.utility_bound();
        Ok(OutcomeSampler {
            game,
            config,
            regrets: RegretStore::new(),
            avg: AvgStrategyStore::new(),
            baselines: [
                BaselineStore::with_bound(bound),
                BaselineStore::with_bound(bound),
            ],
            oracle: [None, None],
            iteration: 0,
        })
    }

    #[must_use]
    pub fn config(&self) -> &OsConfig {
        &self.config
    }

    #[must_use]
    pub fn game(&self) -> &'g dyn Game {
        self.game
    }

    #[must_use]
    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    /// Advance the iteration counter (1-based after the first call).
    pub fn begin_iteration(&mut self) -> u64 {
        self.iteration += 1;
        self.iteration
    }

    /// Recompute the oracle baseline for `player` against the current
    /// strategy. No-op for other modes.
    pub fn refresh_oracle(&mut self, player: PlayerId) {
        if self.config.baseline == BaselineMode::Oracle {
            let report = exact_values(self.game, &CurrentStrategy(&self.regrets), player);
            self.oracle[player.index()] = Some(report.history);
        }
    }

    /// Pin the oracle to a fixed value table (tests with frozen σ).
    pub fn set_oracle(&mut self, player: PlayerId, values: HashMap<History, f64>) {
        self.oracle[player.index()] = Some(values);
    }

    #[must_use]
    pub fn view(&self, player: PlayerId) -> EstimatorView<'_> {
        EstimatorView {
            game: self.game,
            config: &self.config,
            regrets: &self.regrets,
            baselines: &self.baselines,
            oracle: self.oracle[player.index()].as_ref(),
        }
    }

    /// Sample a trajectory under the current strategy.
    pub fn sample(&self, xi: &dyn SamplingPolicy, rng: &mut impl Rng) -> Trajectory {
        sample_trajectory(self.game, &CurrentStrategy(&self.regrets), xi, rng)
    }

    /// Backward pass for `player`: compute values, then accumulate regrets,
    /// the average strategy, and the learned baselines. With
    /// `cross_baseline_updates` the same trajectory also refreshes the
    /// other player's baseline store (values recomputed from that player's
    /// perspective; no regret or average update for them).
    pub fn update_player(
        &mut self,
        traj: &Trajectory,
        player: PlayerId,
    ) -> Result<f64, SolverError> {
        let values = compute_pass(&self.view(player), traj, player, self.iteration)?;
        self.apply_regret_updates(traj, &values, player);
        self.apply_baseline_updates(traj, &values, player)?;
        if self.config.cross_baseline_updates && self.has_learned_baseline() {
            let other = player.opponent();
            let other_values = compute_pass(&self.view(other), traj, other, self.iteration)?;
            self.apply_baseline_updates(traj, &other_values, other)?;
        }
        Ok(values.root_value)
    }

    fn has_learned_baseline(&self) -> bool {
        matches!(
            self.config.baseline,
            BaselineMode::LearnedStateAction | BaselineMode::LearnedState
        )
    }

    fn apply_regret_updates(&mut self, traj: &Trajectory, values: &PassValues, player: PlayerId) {
        let i = player.index();
        let iter_weight = if self.config.linear_averaging {
            self.iteration.max(1) as f64
        } else {
            1.0
        };
        for (node, nv) in traj.nodes.iter().zip(&values.per_node).rev() {
            if node.actor != player {
                continue;
            }
            let key = self.game.info_state_key(&node.history, player);
            let cf = nv.cf_action_values.as_ref().expect("cf values at own node");
            let cf_value = nv.cf_value.expect("cf value at own node");
            let r: Vec<f64> = cf.iter().map(|&v| v - cf_value).collect();
            if self.config.plus {
                self.regrets.add_plus(&key, &r);
            } else {
                self.regrets.add(&key, &r);
            }
            let reach_weight = node.reach_own[i] / node.q;
            self.avg.accumulate(&key, &node.sigma, reach_weight, iter_weight);
        }
    }

    fn apply_baseline_updates(
        &mut self,
        traj: &Trajectory,
        values: &PassValues,
        player: PlayerId,
    ) -> Result<(), SolverError> {
        if !self.has_learned_baseline() {
            return Ok(());
        }
        let i = player.index();
        let state_only = self.config.baseline == BaselineMode::LearnedState;
        for (node, nv) in traj.nodes.iter().zip(&values.per_node).rev() {
            let key = baseline_key(self.game, self.config.keying, &node.history, player);
            let (slot, n) = match self.config.baseline {
                BaselineMode::LearnedState => (0, 1),
                _ if node.actor == PlayerId::Chance => (
                    self.game.chance_outcome_class(&node.history, node.sampled),
                    self.game.chance_class_count(),
                ),
                _ => (node.sampled, node.sigma.len()),
            };
            self.baselines[i]
                .update(&key, slot, n, nv.baseline_sample, self.config.alpha)
                .map_err(|value| SolverError::NonFinite {
                    context: format!("baseline sample at {key}"),
                    value,
                    iteration: self.iteration,
                })?;
            // off-trajectory siblings that end the game have exact values;
            // feed those through the same recurrence
            if !state_only && node.actor != PlayerId::Chance {
                for a in 0..node.sigma.len() {
                    if a == node.sampled {
                        continue;
                    }
                    let child = node.history.apply(a);
                    if self.game.is_terminal(&child) {
                        let u = self.game.utility(&child, player);
                        self.baselines[i]
                            .update(&key, a, n, u, self.config.alpha)
                            .expect("terminal utilities are finite");
                    }
                }
            }
        }
        Ok(())
    }
}
