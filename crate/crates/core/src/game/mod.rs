//! Extensive-form game interface and concrete games.
//!
//! A game is a tree of histories (action sequences from the root). Chance is
//! modelled as a third player with fixed move probabilities. Strategies,
//! regrets and baselines are stored per information set; information-set
//! keys are defined for *every* history and player (augmented information
//! sets), not only at the acting player's own decision points, because the
//! learned baselines index opponent and chance nodes too.

mod kuhn;
mod leduc;

pub use kuhn::Kuhn;
pub use leduc::Leduc;

/// Payoffs in chips. Zero-sum: `u(z, P1) == -u(z, P2)` at every terminal.
pub type Utility = f64;

/// One of the two regret-updating players, or chance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlayerId {
    P1,
    P2,
    Chance,
}

impl PlayerId {
    /// The other regret-updating player. Panics for `Chance`.
    #[must_use]
    pub fn opponent(self) -> Self {
        match self {
            PlayerId::P1 => PlayerId::P2,
            PlayerId::P2 => PlayerId::P1,
            PlayerId::Chance => panic!("chance has no opponent"),
        }
    }

    /// 0 for P1, 1 for P2. Panics for `Chance`.
    #[must_use]
    pub fn index(self) -> usize {
        match self {
            PlayerId::P1 => 0,
            PlayerId::P2 => 1,
            PlayerId::Chance => panic!("chance has no player index"),
        }
    }

    pub const BOTH: [PlayerId; 2] = [PlayerId::P1, PlayerId::P2];
}

/// A move at a decision point. Ids are dense `0..n` within the decision
/// point; labels are unique within it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Action {
    pub id: usize,
    pub label: &'static str,
}

/// A node in the game tree: the sequence of action ids from the root.
///
/// Histories are value-like; `apply` copies and extends, leaving the parent
/// untouched.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct History(Vec<u8>);

impl History {
    #[must_use]
    pub fn root() -> Self {
        History(Vec::new())
    }

    #[must_use]
    pub fn apply(&self, action_id: usize) -> Self {
        let mut ids = self.0.clone();
        ids.push(action_id as u8);
        History(ids)
    }

    pub fn action_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&id| id as usize)
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Prefix test `self ⊑ other`.
    #[must_use]
    pub fn is_prefix_of(&self, other: &History) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// The prefix of the first `len` actions.
    #[must_use]
    pub fn truncated(&self, len: usize) -> History {
        History(self.0[..len].to_vec())
    }
}

/// Player-relative identifier of an (augmented) information set.
///
/// `observed` is the concatenation of everything the player has seen: own
/// private cards, `?` placeholders for the opponent's private cards, and all
/// public action labels, in history order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfoStateKey {
    pub player: PlayerId,
    pub observed: String,
}

impl InfoStateKey {
    #[must_use]
    pub fn new(player: PlayerId, observed: impl Into<String>) -> Self {
        InfoStateKey {
            player,
            observed: observed.into(),
        }
    }
}

impl std::fmt::Display for InfoStateKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let p = match self.player {
            PlayerId::P1 => "P1",
            PlayerId::P2 => "P2",
            PlayerId::Chance => "C",
        };
        write!(f, "{}:{}", p, self.observed)
    }
}

/// A two-player zero-sum extensive-form game with chance.
///
/// Implementations are immutable after construction and safe to share
/// across threads. Contract violations panic; see each method.
pub trait Game: Send + Sync {
    fn name(&self) -> &'static str;

    /// True iff `h` is terminal.
    fn is_terminal(&self, h: &History) -> bool;

    /// The player to act. Panics on terminal histories.
    fn current_player(&self, h: &History) -> PlayerId;

    /// Ordered legal actions (also defined at chance nodes, where they are
    /// the chance outcomes). Non-empty. Panics on terminal histories.
    fn legal_actions(&self, h: &History) -> Vec<Action>;

    /// Chance outcomes with probabilities summing to 1. Panics unless
    /// `current_player(h) == Chance`.
    fn chance_outcomes(&self, h: &History) -> Vec<(Action, f64)>;

    /// Terminal payoff for `player` in chips. Panics on non-terminal
    /// histories or for `Chance`.
    fn utility(&self, h: &History, player: PlayerId) -> Utility;

    /// Augmented information-set key of `player` at `h`; defined for every
    /// history. Equals the ordinary information set when `player` acts at
    /// `h`. Panics for `Chance`.
    fn info_state_key(&self, h: &History, player: PlayerId) -> InfoStateKey;

    /// Stable identity of a chance outcome across histories sharing an
    /// augmented information set (deck position rather than position in
    /// the remaining deck). Chance-node baselines bucket by this class so
    /// one slot always means the same card. Panics unless `h` is a chance
    /// node.
    fn chance_outcome_class(&self, h: &History, action_id: usize) -> usize;

    /// Exclusive upper bound on [`Game::chance_outcome_class`] values.
    fn chance_class_count(&self) -> usize;

    /// Largest attainable `|utility|`.
    fn utility_bound(&self) -> f64;
}

/// Extend `h` by `action`, checking legality. Panics on illegal actions.
pub fn apply_action(game: &dyn Game, h: &History, action: Action) -> History {
    let legal = game.legal_actions(h);
    assert!(
        legal.iter().any(|a| a.id == action.id),
        "illegal action {} at {}",
        action.id,
        format_history(game, h)
    );
    h.apply(action.id)
}

/// Human-readable rendering of a history using the game's action labels.
pub fn format_history(game: &dyn Game, h: &History) -> String {
    let mut out = String::new();
    let mut cur = History::root();
    for id in h.action_ids() {
        let label = game
            .legal_actions(&cur)
            .into_iter()
            .find(|a| a.id == id)
            .map(|a| a.label)
            .unwrap_or("!");
        out.push_str(label);
        cur = cur.apply(id);
    }
    out
}

/// Build a history by following action labels from the root.
///
/// Panics if a label does not name a legal action; intended for tests and
/// debugging (e.g. `history_from_labels(&kuhn, &["K", "Q", "B", "C"])`).
pub fn history_from_labels(game: &dyn Game, labels: &[&str]) -> History {
    let mut h = History::root();
    for label in labels {
        let actions = game.legal_actions(&h);
        let action = actions
            .iter()
            .find(|a| a.label == *label)
            .unwrap_or_else(|| panic!("no action labelled {label:?} at {}", format_history(game, &h)));
        h = h.apply(action.id);
    }
    h
}

/// All histories of the game in depth-first preorder (root first).
pub fn enumerate_histories(game: &dyn Game) -> Vec<History> {
    let mut out = Vec::new();
    let mut stack = vec![History::root()];
    while let Some(h) = stack.pop() {
        if !game.is_terminal(&h) {
            // push in reverse so children pop in action order
            for a in game.legal_actions(&h).into_iter().rev() {
                stack.push(h.apply(a.id));
            }
        }
        out.push(h);
    }
    out
}

/// All terminal histories in depth-first order.
pub fn enumerate_terminals(game: &dyn Game) -> Vec<History> {
    enumerate_histories(game)
        .into_iter()
        .filter(|h| game.is_terminal(h))
        .collect()
}
