//! Kuhn poker: three cards (J < Q < K), one card each, one ante, one betting
//! round with a single bet size of 1 chip.
//!
//! Histories are `[deal1, deal2, betting...]` where each deal id indexes the
//! remaining deck in ascending rank order. Betting actions use label `C` for
//! check/call, `B` for bet and `F` for fold, so the history dealt K then Q
//! followed by a bet and a call renders as `KQBC`.

use super::{Action, Game, History, InfoStateKey, PlayerId, Utility};

const CARDS: [&str; 3] = ["J", "Q", "K"];

const CHECK: Action = Action { id: 0, label: "C" };
const BET: Action = Action { id: 1, label: "B" };
const FOLD: Action = Action { id: 0, label: "F" };
const CALL: Action = Action { id: 1, label: "C" };

/// Betting state after the two deals.
enum Betting {
    // first player to act, or second after a check
    Open { to_act: PlayerId },
    // facing a bet
    Facing { to_act: PlayerId },
    Showdown { pot_each: i32 },
    Folded { winner: PlayerId },
}

pub struct Kuhn;

impl Kuhn {
    #[must_use]
    pub fn new() -> Self {
        Kuhn
    }

    /// Ranks (0=J,1=Q,2=K) dealt to each player, when both are dealt.
    fn deal(h: &History) -> (Option<usize>, Option<usize>) {
        let ids: Vec<usize> = h.action_ids().collect();
        let first = ids.first().copied();
        let second = ids.get(1).map(|&id| {
            // id indexes the remaining two cards in ascending order
            let c1 = first.unwrap();
            (0..3).filter(|&c| c != c1).nth(id).unwrap()
        });
        (first, second)
    }

    fn betting(h: &History) -> Option<Betting> {
        if h.len() < 2 {
            return None;
        }
        let bets: Vec<usize> = h.action_ids().skip(2).collect();
        Some(match bets.as_slice() {
            [] => Betting::Open { to_act: PlayerId::P1 },
            [0] => Betting::Open { to_act: PlayerId::P2 },
            [1] => Betting::Facing { to_act: PlayerId::P2 },
            [0, 0] => Betting::Showdown { pot_each: 1 },
            [0, 1] => Betting::Facing { to_act: PlayerId::P1 },
            [1, 0] => Betting::Folded { winner: PlayerId::P1 },
            [1, 1] => Betting::Showdown { pot_each: 2 },
            [0, 1, 0] => Betting::Folded { winner: PlayerId::P2 },
            [0, 1, 1] => Betting::Showdown { pot_each: 2 },
            _ => unreachable!("invalid Kuhn betting sequence {bets:?}"),
        })
    }
}

impl Default for Kuhn {
    fn default() -> Self {
        Kuhn::new()
    }
}

impl Game for Kuhn {
    fn name(&self) -> &'static str {
        "kuhn"
    }

    fn is_terminal(&self, h: &History) -> bool {
        matches!(
            Kuhn::betting(h),
            Some(Betting::Showdown { .. } | Betting::Folded { .. })
        )
    }

    fn current_player(&self, h: &History) -> PlayerId {
        match Kuhn::betting(h) {
            None => PlayerId::Chance,
            Some(Betting::Open { to_act } | Betting::Facing { to_act }) => to_act,
            Some(_) => panic!("current_player on terminal history"),
        }
    }

    fn legal_actions(&self, h: &History) -> Vec<Action> {
        match Kuhn::betting(h) {
            None => self.chance_outcomes(h).into_iter().map(|(a, _)| a).collect(),
            Some(Betting::Open { .. }) => vec![CHECK, BET],
            Some(Betting::Facing { .. }) => vec![FOLD, CALL],
            Some(_) => panic!("legal_actions on terminal history"),
        }
    }

    fn chance_outcomes(&self, h: &History) -> Vec<(Action, f64)> {
        let (first, second) = Kuhn::deal(h);
        assert!(second.is_none(), "chance_outcomes on a non-chance node");
        let remaining: Vec<usize> = (0..3).filter(|&c| Some(c) != first).collect();
        let p = 1.0 / remaining.len() as f64;
        remaining
            .iter()
            .enumerate()
            .map(|(id, &c)| (Action { id, label: CARDS[c] }, p))
            .collect()
    }

    fn utility(&self, h: &History, player: PlayerId) -> Utility {
        let sign = match player {
            PlayerId::P1 => 1.0,
            PlayerId::P2 => -1.0,
            PlayerId::Chance => panic!("utility of chance"),
        };
        let (c1, c2) = Kuhn::deal(h);
        let (c1, c2) = (c1.unwrap(), c2.unwrap());
        match Kuhn::betting(h) {
            Some(Betting::Folded { winner }) => {
                let won = if winner == PlayerId::P1 { 1.0 } else { -1.0 };
                sign * won
            }
            Some(Betting::Showdown { pot_each }) => {
                let won = if c1 > c2 { 1.0 } else { -1.0 };
                sign * won * pot_each as f64
            }
            _ => panic!("utility on non-terminal history"),
        }
    }

    fn info_state_key(&self, h: &History, player: PlayerId) -> InfoStateKey {
        assert_ne!(player, PlayerId::Chance, "no information sets for chance");
        let mut observed = String::new();
        let mut cur = History::root();
        for (pos, id) in h.action_ids().enumerate() {
            match pos {
                0 | 1 => {
                    let owner = if pos == 0 { PlayerId::P1 } else { PlayerId::P2 };
                    if owner == player {
                        let label = self
                            .chance_outcomes(&cur)
                            .into_iter()
                            .find(|(a, _)| a.id == id)
                            .unwrap()
                            .0
                            .label;
                        observed.push_str(label);
                    } else {
                        observed.push('?');
                    }
                }
                _ => {
                    let label = self.legal_actions(&cur)[id].label;
                    observed.push_str(label);
                }
            }
            cur = cur.apply(id);
        }
        InfoStateKey::new(player, observed)
    }

    fn chance_outcome_class(&self, h: &History, action_id: usize) -> usize {
        let (first, second) = Kuhn::deal(h);
        assert!(second.is_none(), "chance_outcome_class on a non-chance node");
        (0..3)
            .filter(|&c| Some(c) != first)
            .nth(action_id)
            .expect("chance action out of range")
    }

    fn chance_class_count(&self) -> usize {
        3
    }

    fn utility_bound(&self) -> f64 {
        2.0
    }
}
