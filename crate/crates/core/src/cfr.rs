//! Full-tree CFR and CFR+, and the exact counterfactual-value oracle.
//!
//! The oracle ([`exact_values`]) is reused by the oracle baseline, the
//! unbiasedness tests, and best response; it is an exact recursive tree
//! evaluation, never sampled.

use std::collections::{BTreeMap, HashMap};

use crate::game::{Game, History, InfoStateKey, PlayerId};
use crate::strategy::{CurrentStrategy, Strategy};
use crate::tables::{AvgStrategyStore, RegretStore};

/// Counterfactual values of one player under a fixed profile.
#[derive(Debug, Clone)]
pub struct CfValueReport {
    /// Per information set: `v_i(σ, I)` and the per-action `v_i(σ, I, a)`.
    pub state: BTreeMap<InfoStateKey, StateValues>,
    /// Expected utility-to-go `u_i^σ(h)` for every history (terminals
    /// included).
    pub history: HashMap<History, f64>,
}

#[derive(Debug, Clone, Default)]
pub struct StateValues {
    pub value: f64,
    pub action_values: Vec<f64>,
}

/// Exact counterfactual values for `player` under `profile`.
///
/// `v_i(σ, I)` aggregates `π_{-i}(h) · u_i^σ(h)` over the histories of `I`;
/// the per-action values use the subtree below each action. Total on finite
/// trees.
pub fn exact_values(game: &dyn Game, profile: &dyn Strategy, player: PlayerId) -> CfValueReport {
    let mut report = CfValueReport {
        state: BTreeMap::new(),
        history: HashMap::new(),
    };
    walk_exact(game, profile, player, &History::root(), 1.0, &mut report);
    report
}

fn walk_exact(
    game: &dyn Game,
    profile: &dyn Strategy,
    player: PlayerId,
    h: &History,
    reach_opp: f64,
    report: &mut CfValueReport,
) -> f64 {
    if game.is_terminal(h) {
        let u = game.utility(h, player);
        report.history.insert(h.clone(), u);
        return u;
    }
    let actor = game.current_player(h);
    let (probs, children): (Vec<f64>, Vec<History>) = if actor == PlayerId::Chance {
        game.chance_outcomes(h)
            .into_iter()
            .map(|(a, p)| (p, h.apply(a.id)))
            .unzip()
    } else {
        let actions = game.legal_actions(h);
        let key = game.info_state_key(h, actor);
        let probs = profile.probs(&key, actions.len());
        (probs, actions.iter().map(|a| h.apply(a.id)).collect())
    };

    let mut child_values = Vec::with_capacity(children.len());
    for (child, &p) in children.iter().zip(&probs) {
        let child_reach = if actor == player { reach_opp } else { reach_opp * p };
        child_values.push(walk_exact(game, profile, player, child, child_reach, report));
    }
    let value: f64 = probs.iter().zip(&child_values).map(|(&p, &v)| p * v).sum();
    report.history.insert(h.clone(), value);

    if actor == player {
        let key = game.info_state_key(h, player);
        let entry = report.state.entry(key).or_insert_with(|| StateValues {
            value: 0.0,
            action_values: vec![0.0; child_values.len()],
        });
        entry.value += reach_opp * value;
        for (slot, &cv) in child_values.iter().enumerate() {
            entry.action_values[slot] += reach_opp * cv;
        }
    }
    value
}

/// Full-tree iteration settings.
#[derive(Debug, Clone, Copy)]
pub struct CfrConfig {
    /// RM+ regret accumulation instead of plain sums.
    pub plus: bool,
    /// Update one player per tree pass, alternating within the iteration
    /// (CFR+ style); otherwise both players update in a single pass.
    pub alternating: bool,
    /// Weight the average-strategy accumulation by the iteration index.
    pub linear_averaging: bool,
}

impl CfrConfig {
    /// Vanilla CFR: plain regrets, uniform averaging. Updates alternate
    /// between the players; set `alternating: false` for a single
    /// simultaneous pass (noticeably slower convergence).
    #[must_use]
    pub fn vanilla() -> Self {
        CfrConfig {
            plus: false,
            alternating: true,
            linear_averaging: false,
        }
    }

    /// CFR+: alternating updates, RM+, linearly weighted average.
    #[must_use]
    pub fn plus() -> Self {
        CfrConfig {
            plus: true,
            alternating: true,
            linear_averaging: true,
        }
    }
}

/// One full-tree iteration (`t` is 1-based).
///
/// The strategy profile is held fixed for the whole pass: regret deltas are
/// gathered per information set and applied only once the pass is done, so
/// an information set visited through several histories sees one consistent
/// σ^t. CFR+ thresholds the per-iteration sum, `Q^t = (Q^{t-1} + r^t)⁺`.
pub fn cfr_iteration(
    game: &dyn Game,
    regrets: &mut RegretStore,
    avg: &mut AvgStrategyStore,
    t: u64,
    config: CfrConfig,
) {
    assert!(t >= 1, "iterations are 1-based");
    let iter_weight = if config.linear_averaging { t as f64 } else { 1.0 };
    let passes: &[Option<PlayerId>] = if config.alternating {
        &[Some(PlayerId::P1), Some(PlayerId::P2)]
    } else {
        &[None]
    };
    for &update in passes {
        let mut pending: HashMap<InfoStateKey, Vec<f64>> = HashMap::new();
        walk_cfr(
            game,
            regrets,
            avg,
            &mut pending,
            &History::root(),
            [1.0, 1.0],
            1.0,
            update,
            iter_weight,
        );
        for (key, r) in pending {
            if config.plus {
                regrets.add_plus(&key, &r);
            } else {
                regrets.add(&key, &r);
            }
        }
    }
}

/// Recursive CFR pass. Returns the expected utilities of both players under
/// the current (regret-matched) profile; `update` limits regret and average
/// accumulation to one player, `None` updates both.
#[allow(clippy::too_many_arguments)]
fn walk_cfr(
    game: &dyn Game,
    regrets: &RegretStore,
    avg: &mut AvgStrategyStore,
    pending: &mut HashMap<InfoStateKey, Vec<f64>>,
    h: &History,
    reach: [f64; 2],
    reach_chance: f64,
    update: Option<PlayerId>,
    iter_weight: f64,
) -> [f64; 2] {
    if game.is_terminal(h) {
        let u = game.utility(h, PlayerId::P1);
        return [u, -u];
    }
    let actor = game.current_player(h);

    if actor == PlayerId::Chance {
        let mut ev = [0.0, 0.0];
        for (a, p) in game.chance_outcomes(h) {
            let child = walk_cfr(
                game,
                regrets,
                avg,
                pending,
                &h.apply(a.id),
                reach,
                reach_chance * p,
                update,
                iter_weight,
            );
            ev[0] += p * child[0];
            ev[1] += p * child[1];
        }
        return ev;
    }

    let actions = game.legal_actions(h);
    let key = game.info_state_key(h, actor);
    let sigma = regrets.strategy(&key, actions.len());
    let me = actor.index();

    let mut child_evs = Vec::with_capacity(actions.len());
    for (slot, a) in actions.iter().enumerate() {
        let mut next = reach;
        next[me] *= sigma[slot];
        child_evs.push(walk_cfr(
            game,
            regrets,
            avg,
            pending,
            &h.apply(a.id),
            next,
            reach_chance,
            update,
            iter_weight,
        ));
    }
    let mut ev = [0.0, 0.0];
    for (slot, child) in child_evs.iter().enumerate() {
        ev[0] += sigma[slot] * child[0];
        ev[1] += sigma[slot] * child[1];
    }

    if update.is_none() || update == Some(actor) {
        let reach_opp = reach[1 - me] * reach_chance;
        let entry = pending
            .entry(key.clone())
            .or_insert_with(|| vec![0.0; child_evs.len()]);
        for (slot, child) in child_evs.iter().enumerate() {
            entry[slot] += reach_opp * (child[me] - ev[me]);
        }
        avg.accumulate(&key, &sigma, reach[me], iter_weight);
    }
    ev
}

/// Convenience view of the current iterate for callers that hold the
/// stores.
#[must_use]
pub fn current_profile(regrets: &RegretStore) -> CurrentStrategy<'_> {
    CurrentStrategy(regrets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Kuhn;
    use crate::strategy::UniformStrategy;

    #[test]
    fn state_value_is_sigma_mix_of_action_values() {
        let g = Kuhn;
        let report = exact_values(&g, &UniformStrategy, PlayerId::P1);
        assert_eq!(report.state.len(), 6);
        for (key, sv) in &report.state {
            let mix: f64 = sv.action_values.iter().sum::<f64>() / sv.action_values.len() as f64;
            assert!(
                (sv.value - mix).abs() < 1e-10,
                "identity violated at {key}: {} vs {}",
                sv.value,
                mix
            );
        }
    }

    #[test]
    fn regret_identity_under_any_profile() {
        // Σ_a σ(I,a)·r(I,a) = 0 with r = v(I,a) − v(I)
        let g = Kuhn;
        for player in PlayerId::BOTH {
            let report = exact_values(&g, &UniformStrategy, player);
            for (key, sv) in &report.state {
                let sigma = 1.0 / sv.action_values.len() as f64;
                let total: f64 = sv
                    .action_values
                    .iter()
                    .map(|&va| sigma * (va - sv.value))
                    .sum();
                assert!(total.abs() < 1e-10, "Σσr = {total} at {key}");
            }
        }
    }

    #[test]
    fn first_iteration_averages_are_uniform() {
        let g = Kuhn;
        let mut regrets = RegretStore::new();
        let mut avg = AvgStrategyStore::new();
        cfr_iteration(&g, &mut regrets, &mut avg, 1, CfrConfig::vanilla());
        for (key, _) in avg.iter_sorted() {
            let s = avg.strategy(key, 2);
            assert_eq!(s, vec![0.5, 0.5]);
        }
    }

    #[test]
    fn history_values_cover_all_histories() {
        let g = Kuhn;
        let report = exact_values(&g, &UniformStrategy, PlayerId::P1);
        assert_eq!(report.history.len(), crate::game::enumerate_histories(&g).len());
    }
}
