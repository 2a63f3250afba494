//! Exact evaluation: best response, exploitability, and the empirical
//! variance probe for the sampled estimators.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;

use crate::game::{Game, History, InfoStateKey, PlayerId};
use crate::mccfr::{EstimatorView, Trajectory};
use crate::strategy::{Strategy, TabularStrategy};
use crate::tables::SamplingPolicy;

/// Exploitability of a profile at some iteration, in chips.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExploitabilityRecord {
    pub iteration: u64,
    /// Value of P1's best response against the profile's P2 strategy.
    pub br_value_p1: f64,
    /// Value of P2's best response against the profile's P1 strategy.
    pub br_value_p2: f64,
    /// `(br_value_p1 + br_value_p2) / 2`; non-negative, zero exactly at a
    /// Nash equilibrium.
    pub exploitability: f64,
}

/// Mean empirical variance of counterfactual-value estimates at some
/// iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceRecord {
    pub iteration: u64,
    pub mean_empirical_variance: f64,
}

/// Expected utility of `player` at the root under `profile`.
pub fn expected_value(game: &dyn Game, profile: &dyn Strategy, player: PlayerId) -> f64 {
    fn walk(game: &dyn Game, profile: &dyn Strategy, player: PlayerId, h: &History) -> f64 {
        if game.is_terminal(h) {
            return game.utility(h, player);
        }
        let actor = game.current_player(h);
        if actor == PlayerId::Chance {
            game.chance_outcomes(h)
                .into_iter()
                .map(|(a, p)| p * walk(game, profile, player, &h.apply(a.id)))
                .sum()
        } else {
            let actions = game.legal_actions(h);
            let key = game.info_state_key(h, actor);
            let sigma = profile.probs(&key, actions.len());
            actions
                .iter()
                .zip(&sigma)
                .map(|(a, &p)| p * walk(game, profile, player, &h.apply(a.id)))
                .sum()
        }
    }
    walk(game, profile, player, &History::root())
}

/// Exact best response of `player` against the opponent side of
/// `opponent_profile`: a single pass aggregating over the player's
/// information sets.
///
/// Returns the best-response value and the (pure) best-response strategy.
pub fn best_response(
    game: &dyn Game,
    opponent_profile: &dyn Strategy,
    player: PlayerId,
) -> (f64, TabularStrategy) {
    // opponent-and-chance reach for every history of the player's decision
    // points, grouped by information set
    let mut buckets: BTreeMap<InfoStateKey, Vec<(History, f64)>> = BTreeMap::new();
    collect_reaches(
        game,
        opponent_profile,
        player,
        &History::root(),
        1.0,
        &mut buckets,
    );

    let mut solver = BrSolver {
        game,
        opponent_profile,
        player,
        buckets,
        choices: BTreeMap::new(),
        values: HashMap::new(),
    };
    let value = solver.value(&History::root());

    let mut strategy = TabularStrategy::new();
    for (key, slot) in &solver.choices {
        let n = solver.buckets[key]
            .first()
            .map(|(h, _)| game.legal_actions(h).len())
            .unwrap();
        let mut probs = vec![0.0; n];
        probs[*slot] = 1.0;
        strategy.set(key.clone(), probs);
    }
    (value, strategy)
}

fn collect_reaches(
    game: &dyn Game,
    opponent_profile: &dyn Strategy,
    player: PlayerId,
    h: &History,
    reach_opp: f64,
    buckets: &mut BTreeMap<InfoStateKey, Vec<(History, f64)>>,
) {
    if game.is_terminal(h) {
        return;
    }
    let actor = game.current_player(h);
    if actor == player {
        let key = game.info_state_key(h, player);
        buckets.entry(key).or_default().push((h.clone(), reach_opp));
        for a in game.legal_actions(h) {
            collect_reaches(game, opponent_profile, player, &h.apply(a.id), reach_opp, buckets);
        }
    } else if actor == PlayerId::Chance {
        for (a, p) in game.chance_outcomes(h) {
            collect_reaches(
                game,
                opponent_profile,
                player,
                &h.apply(a.id),
                reach_opp * p,
                buckets,
            );
        }
    } else {
        let actions = game.legal_actions(h);
        let key = game.info_state_key(h, actor);
        let sigma = opponent_profile.probs(&key, actions.len());
        for (a, &p) in actions.iter().zip(&sigma) {
            collect_reaches(
                game,
                opponent_profile,
                player,
                &h.apply(a.id),
                reach_opp * p,
                buckets,
            );
        }
    }
}

struct BrSolver<'a> {
    game: &'a dyn Game,
    opponent_profile: &'a dyn Strategy,
    player: PlayerId,
    buckets: BTreeMap<InfoStateKey, Vec<(History, f64)>>,
    choices: BTreeMap<InfoStateKey, usize>,
    values: HashMap<History, f64>,
}

impl BrSolver<'_> {
    fn value(&mut self, h: &History) -> f64 {
        if let Some(&v) = self.values.get(h) {
            return v;
        }
        let v = if self.game.is_terminal(h) {
            self.game.utility(h, self.player)
        } else {
            let actor = self.game.current_player(h);
            if actor == self.player {
                let key = self.game.info_state_key(h, self.player);
                let slot = self.choice(&key);
                self.value(&h.apply(slot))
            } else if actor == PlayerId::Chance {
                self.game
                    .chance_outcomes(h)
                    .into_iter()
                    .map(|(a, p)| p * self.value(&h.apply(a.id)))
                    .sum()
            } else {
                let actions = self.game.legal_actions(h);
                let key = self.game.info_state_key(h, actor);
                let sigma = self.opponent_profile.probs(&key, actions.len());
                actions
                    .iter()
                    .zip(&sigma)
                    .map(|(a, &p)| p * self.value(&h.apply(a.id)))
                    .sum()
            }
        };
        self.values.insert(h.clone(), v);
        v
    }

    /// Best action at an information set: maximizes the reach-weighted sum
    /// of continuation values over the set's histories. Ties break to the
    /// lowest action id.
    fn choice(&mut self, key: &InfoStateKey) -> usize {
        if let Some(&slot) = self.choices.get(key) {
            return slot;
        }
        let bucket = self.buckets.get(key).cloned().unwrap_or_default();
        let n = self
            .game
            .legal_actions(&bucket.first().expect("empty information set").0)
            .len();
        let mut best = (0, f64::NEG_INFINITY);
        for slot in 0..n {
            let q: f64 = bucket
                .iter()
                .map(|(h, reach)| reach * self.value(&h.apply(slot)))
                .sum();
            if q > best.1 {
                best = (slot, q);
            }
        }
        self.choices.insert(key.clone(), best.0);
        best.0
    }
}

/// Exploitability of a profile: the mean of the two best-response values
/// (NashConv / 2), in chips.
pub fn exploitability(game: &dyn Game, profile: &dyn Strategy) -> ExploitabilityRecord {
    let (br1, _) = best_response(game, profile, PlayerId::P1);
    let (br2, _) = best_response(game, profile, PlayerId::P2);
    ExploitabilityRecord {
        iteration: 0,
        br_value_p1: br1,
        br_value_p2: br2,
        exploitability: 0.5 * (br1 + br2),
    }
}

/// Empirical variance of the active estimator at the decision points of
/// `player` along one sampled trajectory.
///
/// For each visited information set, `n_probes` fresh continuations are
/// sampled from its history; every continuation yields one estimate
/// `v̂(I, a)` per action (off-trajectory actions fall back to the baseline
/// exactly as in the real update). Returns the unweighted mean over all
/// probed (I, a) pairs of the per-pair sample variance, or `None` when the
/// trajectory contains no decision point of `player`. Read-only: no store
/// is touched.
pub fn probe_mean_variance(
    view: &EstimatorView<'_>,
    traj: &Trajectory,
    player: PlayerId,
    xi: &dyn SamplingPolicy,
    n_probes: usize,
    rng: &mut impl Rng,
) -> Option<f64> {
    assert!(n_probes >= 2, "variance needs at least two probes");
    let points = traj.decision_points(player);
    if points.is_empty() {
        return None;
    }
    let i = player.index();
    let mut total = 0.0;
    let mut pairs = 0usize;
    for node in points {
        let w = node.reach_opp[i] / node.q;
        let n_actions = node.sigma.len();
        let mut sum = vec![0.0; n_actions];
        let mut sum_sq = vec![0.0; n_actions];
        for _ in 0..n_probes {
            let values = view.continuation_action_values(&node.history, player, xi, rng);
            for (slot, &u) in values.iter().enumerate() {
                let v = w * u;
                sum[slot] += v;
                sum_sq[slot] += v * v;
            }
        }
        let n = n_probes as f64;
        for slot in 0..n_actions {
            let var = ((sum_sq[slot] - sum[slot] * sum[slot] / n) / (n - 1.0)).max(0.0);
            total += var;
            pairs += 1;
        }
    }
    Some(total / pairs as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Kuhn;
    use crate::strategy::UniformStrategy;

    #[test]
    fn best_response_beats_the_profile_value() {
        let g = Kuhn;
        for player in PlayerId::BOTH {
            let (br, _) = best_response(&g, &UniformStrategy, player);
            let ev = expected_value(&g, &UniformStrategy, player);
            assert!(br >= ev - 1e-12, "br {br} < profile value {ev}");
        }
    }

    #[test]
    fn exploitability_of_uniform_is_positive() {
        let g = Kuhn;
        let rec = exploitability(&g, &UniformStrategy);
        assert!(rec.exploitability > 0.0);
        assert!(rec.exploitability >= -1e-10);
    }

    #[test]
    fn br_strategy_achieves_its_value() {
        // playing the returned best response against the profile attains
        // the reported value
        let g = Kuhn;
        let (br_value, br_strategy) = best_response(&g, &UniformStrategy, PlayerId::P1);
        // profile: P1 plays br, P2 uniform
        struct Mixed<'a>(&'a TabularStrategy);
        impl Strategy for Mixed<'_> {
            fn probs(&self, key: &InfoStateKey, n: usize) -> Vec<f64> {
                match key.player {
                    PlayerId::P1 => self.0.probs(key, n),
                    _ => vec![1.0 / n as f64; n],
                }
            }
        }
        let achieved = expected_value(&g, &Mixed(&br_strategy), PlayerId::P1);
        assert!((achieved - br_value).abs() < 1e-12);
    }
}
