//! Strategy profiles as read-only probability providers.
//!
//! A single [`Strategy`] object serves both players: information-set keys
//! carry the player, so a profile is just a total map from keys to action
//! distributions (with a uniform fallback for unseen keys).

use std::collections::BTreeMap;

use crate::game::InfoStateKey;
use crate::tables::{AvgStrategyStore, RegretStore};

/// Read-only view of a strategy profile.
pub trait Strategy {
    /// Action distribution at `key` over `n_actions` actions.
    fn probs(&self, key: &InfoStateKey, n_actions: usize) -> Vec<f64>;
}

/// Uniform at every information set.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformStrategy;

impl Strategy for UniformStrategy {
    fn probs(&self, _key: &InfoStateKey, n_actions: usize) -> Vec<f64> {
        vec![1.0 / n_actions as f64; n_actions]
    }
}

/// Explicit per-key distributions; uniform where absent.
#[derive(Debug, Clone, Default)]
pub struct TabularStrategy {
    map: BTreeMap<InfoStateKey, Vec<f64>>,
}

impl TabularStrategy {
    #[must_use]
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: InfoStateKey, probs: Vec<f64>) {
        debug_assert!(
            (probs.iter().sum::<f64>() - 1.0).abs() < 1e-9,
            "probabilities at {key} do not sum to 1"
        );
        self.map.insert(key, probs);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&InfoStateKey, &Vec<f64>)> {
        self.map.iter()
    }
}

impl Strategy for TabularStrategy {
    fn probs(&self, key: &InfoStateKey, n_actions: usize) -> Vec<f64> {
        match self.map.get(key) {
            Some(p) => p.clone(),
            None => vec![1.0 / n_actions as f64; n_actions],
        }
    }
}

/// The current iterate: regret matching over cumulative regrets.
pub struct CurrentStrategy<'a>(pub &'a RegretStore);

impl Strategy for CurrentStrategy<'_> {
    fn probs(&self, key: &InfoStateKey, n_actions: usize) -> Vec<f64> {
        self.0.strategy(key, n_actions)
    }
}

/// The normalized average strategy, the object that converges to
/// equilibrium.
pub struct AverageStrategy<'a>(pub &'a AvgStrategyStore);

impl Strategy for AverageStrategy<'_> {
    fn probs(&self, key: &InfoStateKey, n_actions: usize) -> Vec<f64> {
        self.0.strategy(key, n_actions)
    }
}
