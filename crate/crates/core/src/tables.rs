//! Per-information-set state: cumulative regrets, accumulated average
//! strategy, and the learned baseline store with exponential decay.
//!
//! Entries are created lazily and read as zero vectors until touched, so an
//! untouched information set behaves as a uniform strategy with a zero
//! baseline. Stores are single-writer: one solver run owns its stores.

use std::collections::HashMap;
use std::io::Write;

use crate::game::{Game, History, InfoStateKey};

/// Regret matching: probabilities proportional to positive cumulative
/// regrets, uniform when no regret is positive. Panics on an empty vector.
#[must_use]
pub fn regret_matching(regrets: &[f64]) -> Vec<f64> {
    assert!(!regrets.is_empty(), "regret_matching on empty vector");
    let sum: f64 = regrets.iter().map(|&r| r.max(0.0)).sum();
    if sum > 0.0 {
        regrets.iter().map(|&r| r.max(0.0) / sum).collect()
    } else {
        vec![1.0 / regrets.len() as f64; regrets.len()]
    }
}

/// The regret-matching+ accumulator: elementwise `max(q + r, 0)`.
/// Panics on length mismatch.
#[must_use]
pub fn rm_plus_accumulate(q: &[f64], r: &[f64]) -> Vec<f64> {
    assert_eq!(q.len(), r.len(), "rm_plus_accumulate length mismatch");
    q.iter().zip(r).map(|(&q, &r)| (q + r).max(0.0)).collect()
}

/// Sampled baseline `b̂`: `b / ξ` when the action lies on the sampled
/// trajectory, 0 otherwise. Its expectation under `a ~ ξ` equals `b`.
#[must_use]
pub fn baseline_sampled(b: f64, on_trajectory: bool, xi_prob: f64) -> f64 {
    if on_trajectory {
        assert!(xi_prob > 0.0, "sampled action with non-positive ξ");
        b / xi_prob
    } else {
        0.0
    }
}

/// Cumulative regrets per (information set, action).
#[derive(Debug, Default, Clone, PartialEq)]
pub struct RegretStore {
    map: HashMap<InfoStateKey, Vec<f64>>,
}

impl RegretStore {
    #[must_use]
    pub fn new() -> Self {
        Self::default()
    }

    /// Regrets at `key`, zeros if never touched.
    #[must_use]
    pub fn get(&self, key: &InfoStateKey, n_actions: usize) -> Vec<f64> {
        match self.map.get(key) {
            Some(v) => v.clone(),
            None => vec![0.0; n_actions],
        }
    }

    /// Current strategy at `key` by regret matching.
    #[must_use]
    pub fn strategy(&self, key: &InfoStateKey, n_actions: usize) -> Vec<f64> {
        match self.map.get(key) {
            Some(v) => regret_matching(v),
            None => vec![1.0 / n_actions as f64; n_actions],
        }
    }

    /// Plain accumulation `R += r`.
    pub fn add(&mut self, key: &InfoStateKey, r: &[f64]) {
        let entry = self
            .map
            .entry(key.clone())
            .or_insert_with(|| vec![0.0; r.len()]);
        assert_eq!(entry.len(), r.len(), "action count changed for {key}");
        for (e, &x) in entry.iter_mut().zip(r) {
            *e += x;
        }
    }

    /// RM+ accumulation `Q = (Q + r)⁺`.
    pub fn add_plus(&mut self, key: &InfoStateKey, r: &[f64]) {
        let entry = self
            .map
            .entry(key.clone())
            .or_insert_with(|| vec![0.0; r.len()]);
        assert_eq!(entry.len(), r.len(), "action count changed for {key}");
        let updated = rm_plus_accumulate(entry, r);
        entry.copy_from_slice(&updated);
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.map.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter_sorted(&self) -> impl Iterator<Item = (&InfoStateKey, &Vec<f64>)> {
        let mut entries: Vec<_> = self.map.iter().collect();
        entries.sort_by(|a, b| a.0.cmp(b.0));
        entries.into_iter()
    }
}

/// Non-negative accumulated strategy weights; normalizes to the average
/// strategy on read (uniform where nothing was accumulated).
#[derive(Debug, Default, Clone, PartialEq)]
pub struct AvgStrategyStore {
    map: HashMap<InfoStateKey, Vec<f64>>,
}

impl AvgStrategyStore {
    #[must_use]
    pub fn new() -> Self {
        Self::default()
    }

    /// `store[key][a] += iteration_weight * reach_weight * sigma[a]`.
    ///
    /// For full-tree CFR `reach_weight` is the player's own reach; for
    /// outcome sampling it is `π_i(h) / q(h)` along the sampled trajectory.
    pub fn accumulate(
        &mut self,
        key: &InfoStateKey,
        sigma: &[f64],
        reach_weight: f64,
        iteration_weight: f64,
    ) {
        debug_assert!(reach_weight >= 0.0);
        debug_assert!(iteration_weight >= 1.0);
        let entry = self
            .map
            .entry(key.clone())
            .or_insert_with(|| vec![0.0; sigma.len()]);
        let w = iteration_weight * reach_weight;
        for (e, &s) in entry.iter_mut().zip(sigma) {
            *e += w * s;
        }
    }

    /// Normalized average strategy at `key`; uniform if untouched or all
    /// weights are zero.
    #[must_use]
    pub fn strategy(&self, key: &InfoStateKey, n_actions: usize) -> Vec<f64> {
        match self.map.get(key) {
            Some(v) => {
                let sum: f64 = v.iter().sum();
                if sum > 0.0 {
                    v.iter().map(|&x| x / sum).collect()
                } else {
                    vec![1.0 / v.len() as f64; v.len()]
                }
            }
            None => vec![1.0 / n_actions as f64; n_actions],
        }
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.map.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter_sorted(&self) -> impl Iterator<Item = (&InfoStateKey, &Vec<f64>)> {
        let mut entries: Vec<_> = self.map.iter().collect();
        entries.sort_by(|a, b| a.0.cmp(b.0));
        entries.into_iter()
    }
}

/// Exponentially decayed average expected values per (state, action), one
/// store per player: the learned baseline `b_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineStore {
    map: HashMap<InfoStateKey, BaselineEntry>,
    /// Stored values are clamped to `[-bound, bound]`. The quantity being
    /// averaged always lies in the game's payoff range, while individual
    /// samples carry importance-amplified noise far outside it; clamping
    /// keeps a cold entry from poisoning the estimates it feeds.
    bound: f64,
}

#[derive(Debug, Default, Clone, PartialEq)]
struct BaselineEntry {
    values: Vec<f64>,
    visits: Vec<u64>,
}

impl Default for BaselineStore {
    fn default() -> Self {
        BaselineStore {
            map: HashMap::new(),
            bound: f64::INFINITY,
        }
    }
}

impl BaselineStore {
    #[must_use]
    pub fn new() -> Self {
        Self::default()
    }

    /// A store whose values are clamped to the game's payoff range.
    #[must_use]
    pub fn with_bound(bound: f64) -> Self {
        BaselineStore {
            map: HashMap::new(),
            bound,
        }
    }

    /// Baseline value for one action slot; 0 when unvisited.
    #[must_use]
    pub fn value(&self, key: &InfoStateKey, slot: usize) -> f64 {
        self.map.get(key).map_or(0.0, |e| e.values[slot])
    }

    /// Baseline values for all `n` action slots.
    #[must_use]
    pub fn values(&self, key: &InfoStateKey, n: usize) -> Vec<f64> {
        match self.map.get(key) {
            Some(e) => e.values.clone(),
            None => vec![0.0; n],
        }
    }

    #[must_use]
    pub fn visits(&self, key: &InfoStateKey, slot: usize) -> u64 {
        self.map.get(key).map_or(0, |e| e.visits[slot])
    }

    /// Decayed-average update `ū ← (1−α)ū + α·sample` for one slot (prior 0
    /// on the first visit). `sample` must be finite and `0 < α ≤ 1`; the
    /// solver turns violations into aborted iterations.
    pub fn update(
        &mut self,
        key: &InfoStateKey,
        slot: usize,
        n_slots: usize,
        sample: f64,
        alpha: f64,
    ) -> Result<(), f64> {
        assert!(alpha > 0.0 && alpha <= 1.0, "alpha out of (0, 1]");
        if !sample.is_finite() {
            return Err(sample);
        }
        let entry = self.map.entry(key.clone()).or_insert_with(|| BaselineEntry {
            values: vec![0.0; n_slots],
            visits: vec![0; n_slots],
        });
        let updated = (1.0 - alpha) * entry.values[slot] + alpha * sample;
        entry.values[slot] = updated.clamp(-self.bound, self.bound);
        entry.visits[slot] += 1;
        Ok(())
    }

    /// Directly place a value (tests and frozen-baseline experiments).
    pub fn set(&mut self, key: &InfoStateKey, values: Vec<f64>) {
        let visits = vec![1; values.len()];
        self.map.insert(key.clone(), BaselineEntry { values, visits });
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.map.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter_sorted(&self) -> impl Iterator<Item = (&InfoStateKey, &Vec<f64>)> {
        let mut entries: Vec<_> = self.map.iter().map(|(k, e)| (k, &e.values)).collect();
        entries.sort_by(|a, b| a.0.cmp(b.0));
        entries.into_iter()
    }
}

/// Sampling policy ξ: a full-support distribution over legal actions at
/// every player decision point. Chance nodes always sample from the true
/// chance probabilities regardless of the policy.
pub trait SamplingPolicy: Send + Sync {
    fn probs(&self, game: &dyn Game, h: &History, n_actions: usize) -> Vec<f64>;
}

/// The paper's choice: uniform over legal actions.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformSampling;

impl SamplingPolicy for UniformSampling {
    fn probs(&self, _game: &dyn Game, _h: &History, n_actions: usize) -> Vec<f64> {
        vec![1.0 / n_actions as f64; n_actions]
    }
}

/// Debug snapshot of a store as `key<TAB>action<TAB>value` lines, sorted by
/// key. Not a stability contract.
pub fn write_snapshot<'a, W: Write>(
    out: &mut W,
    section: &str,
    entries: impl Iterator<Item = (&'a InfoStateKey, &'a Vec<f64>)>,
) -> std::io::Result<()> {
    writeln!(out, "# {section}")?;
    for (key, values) in entries {
        for (slot, v) in values.iter().enumerate() {
            writeln!(out, "{key}\t{slot}\t{v}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::PlayerId;
    use proptest::prelude::*;

    fn key(s: &str) -> InfoStateKey {
        InfoStateKey::new(PlayerId::P1, s)
    }

    #[test]
    fn regret_matching_examples() {
        assert_eq!(regret_matching(&[0.0, 0.0]), vec![0.5, 0.5]);
        assert_eq!(regret_matching(&[2.0, 0.0, 2.0]), vec![0.5, 0.0, 0.5]);
        assert_eq!(regret_matching(&[-1.0, 3.0]), vec![0.0, 1.0]);
    }

    #[test]
    #[should_panic(expected = "empty")]
    fn regret_matching_empty_panics() {
        let _ = regret_matching(&[]);
    }

    #[test]
    fn rm_plus_examples() {
        assert_eq!(rm_plus_accumulate(&[0.0, 0.0], &[-1.0, 2.0]), vec![0.0, 2.0]);
        assert_eq!(rm_plus_accumulate(&[3.0, 1.0], &[-5.0, 0.0]), vec![0.0, 1.0]);
        assert_eq!(rm_plus_accumulate(&[0.0], &[0.0]), vec![0.0]);
    }

    #[test]
    fn baseline_recurrence() {
        let mut store = BaselineStore::new();
        let k = key("K?");
        assert_eq!(store.value(&k, 0), 0.0, "unvisited reads as 0");
        assert_eq!(store.visits(&k, 0), 0);
        // prior ū=2, sample 4, α=0.5 → 3
        store.set(&k, vec![2.0, 0.0]);
        store.update(&k, 0, 2, 4.0, 0.5).unwrap();
        assert_eq!(store.value(&k, 0), 3.0);
        // α=1 keeps only the last sample
        store.update(&k, 0, 2, -7.5, 1.0).unwrap();
        assert_eq!(store.value(&k, 0), -7.5);
        // first visit from zero prior is α·sample
        let k2 = key("?Q");
        store.update(&k2, 1, 2, 4.0, 0.5).unwrap();
        assert_eq!(store.value(&k2, 1), 2.0);
        assert_eq!(store.visits(&k2, 1), 1);
    }

    #[test]
    fn baseline_rejects_non_finite() {
        let mut store = BaselineStore::new();
        assert!(store.update(&key("x"), 0, 1, f64::NAN, 0.5).is_err());
        assert!(store.update(&key("x"), 0, 1, f64::INFINITY, 0.5).is_err());
    }

    #[test]
    fn baseline_sampled_cases() {
        assert_eq!(baseline_sampled(1.0, true, 0.5), 2.0);
        assert_eq!(baseline_sampled(1.0, false, 0.5), 0.0);
        // unbiasedness identity for uniform ξ over two actions
        let b = 1.25;
        let e = 0.5 * baseline_sampled(b, true, 0.5) + 0.5 * baseline_sampled(b, false, 0.5);
        assert_eq!(e, b);
    }

    #[test]
    #[should_panic(expected = "non-positive")]
    fn baseline_sampled_zero_xi_panics() {
        let _ = baseline_sampled(1.0, true, 0.0);
    }

    #[test]
    fn avg_store_uniform_fallback() {
        let store = AvgStrategyStore::new();
        assert_eq!(store.strategy(&key("a"), 3), vec![1.0 / 3.0; 3]);
        let mut store = AvgStrategyStore::new();
        store.accumulate(&key("a"), &[0.0, 0.0], 1.0, 1.0);
        assert_eq!(store.strategy(&key("a"), 2), vec![0.5, 0.5]);
    }

    #[test]
    fn avg_store_accumulates_weighted() {
        let mut store = AvgStrategyStore::new();
        store.accumulate(&key("a"), &[0.25, 0.75], 2.0, 1.0);
        store.accumulate(&key("a"), &[1.0, 0.0], 1.0, 3.0);
        // weights: [0.5 + 3.0, 1.5 + 0.0]
        let s = store.strategy(&key("a"), 2);
        assert!((s[0] - 3.5 / 5.0).abs() < 1e-15);
        assert!((s[1] - 1.5 / 5.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn regret_matching_is_distribution(v in proptest::collection::vec(-1e6f64..1e6, 1..8)) {
            let p = regret_matching(&v);
            prop_assert_eq!(p.len(), v.len());
            prop_assert!(p.iter().all(|&x| (0.0..=1.0).contains(&x)));
            let s: f64 = p.iter().sum();
            prop_assert!((s - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn regret_matching_positive_homogeneity(
            v in proptest::collection::vec(-1e3f64..1e3, 1..8),
            c in 1e-3f64..1e3,
        ) {
            let scaled: Vec<f64> = v.iter().map(|&x| c * x).collect();
            let p = regret_matching(&v);
            let q = regret_matching(&scaled);
            for (a, b) in p.iter().zip(&q) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }

        #[test]
        fn regret_matching_argmax(v in proptest::collection::vec(-1e3f64..1e3, 2..8)) {
            let clipped: Vec<f64> = v.iter().map(|&x| x.max(0.0)).collect();
            let max = clipped.iter().cloned().fold(f64::MIN, f64::max);
            let unique = clipped.iter().filter(|&&x| x == max).count() == 1;
            if max > 0.0 && unique {
                let p = regret_matching(&v);
                let am_p = p.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
                let am_c = clipped.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
                prop_assert_eq!(am_p, am_c);
            }
        }

        #[test]
        fn rm_plus_stays_non_negative(
            q in proptest::collection::vec(0.0f64..1e6, 1..8),
            r in proptest::collection::vec(-1e6f64..1e6, 1..8),
        ) {
            let n = q.len().min(r.len());
            let out = rm_plus_accumulate(&q[..n], &r[..n]);
            prop_assert!(out.iter().all(|&x| x >= 0.0));
        }

        #[test]
        fn baseline_sampled_expectation_identity(
            b in -1e3f64..1e3,
            w in proptest::collection::vec(0.05f64..1.0, 2..5),
        ) {
            // normalize to a full-support ξ
            let total: f64 = w.iter().sum();
            let xi: Vec<f64> = w.iter().map(|&x| x / total).collect();
            for target in 0..xi.len() {
                let mut expect = 0.0;
                for sampled in 0..xi.len() {
                    expect += xi[sampled] * baseline_sampled(b, sampled == target, xi[target]);
                }
                prop_assert!((expect - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
        }
    }
}
