//! Leduc poker.
//!
//! Six cards in two suits of three ranks (Ja Jb Qa Qb Ka Kb). Each player
//! antes 1 chip and receives one private card; a single public card is
//! revealed between the two betting rounds. At most two bet/raise actions
//! per round with fixed sizes: 2 chips in round one, 4 chips in round two.
//!
//! Conventions (the usual ones, spelled out because they matter for tree
//! shape): player 1 acts first in both rounds, fold is only available when
//! facing a bet, a raise re-opens the action, and the second bet/raise caps
//! the round. Showdown: a private card pairing the public card wins,
//! otherwise the higher rank wins, equal ranks split (utility 0).

use super::{Action, Game, History, InfoStateKey, PlayerId, Utility};

const CARDS: [&str; 6] = ["Ja", "Jb", "Qa", "Qb", "Ka", "Kb"];
const RAISE_CAP: u8 = 2;
const BET_SIZE: [i32; 2] = [2, 4];

const FOLD: Action = Action { id: 0, label: "F" };

fn rank(card: usize) -> usize {
    card / 2
}

/// Classification of the node reached by replaying a history.
enum Node {
    /// Deal or public-card reveal; `used` holds the cards already gone.
    Chance { used: Vec<usize> },
    Decision {
        to_act: PlayerId,
        facing_bet: bool,
        raises: u8,
    },
    Terminal {
        /// Chips committed by each player (antes included).
        committed: [i32; 2],
        folded: Option<PlayerId>,
    },
}

pub struct Leduc;

impl Leduc {
    #[must_use]
    pub fn new() -> Self {
        Leduc
    }

    fn replay(h: &History) -> (Node, [Option<usize>; 2], Option<usize>) {
        let mut private: [Option<usize>; 2] = [None, None];
        let mut public: Option<usize> = None;
        let mut committed = [1, 1];
        let mut round: usize = 0; // 0-based betting round
        let mut to_act = PlayerId::P1;
        let mut raises: u8 = 0;
        let mut facing_bet = false;
        let mut checked_once = false;
        // stage: 0 deal p1, 1 deal p2, 2 betting, 3 reveal, 4 betting, 5 done
        let mut stage = 0;

        let resolve =
            |used: &[Option<usize>], pub_c: Option<usize>, id: usize| -> usize {
                let gone: Vec<usize> = used
                    .iter()
                    .flatten()
                    .copied()
                    .chain(pub_c)
                    .collect();
                (0..6).filter(|c| !gone.contains(c)).nth(id).unwrap()
            };

        for id in h.action_ids() {
            match stage {
                0 => {
                    private[0] = Some(resolve(&private, public, id));
                    stage = 1;
                }
                1 => {
                    private[1] = Some(resolve(&private, public, id));
                    stage = 2;
                }
                3 => {
                    public = Some(resolve(&private, public, id));
                    stage = 4;
                    round = 1;
                    to_act = PlayerId::P1;
                    raises = 0;
                    facing_bet = false;
                    checked_once = false;
                }
                2 | 4 => {
                    let actor = to_act.index();
                    let other = 1 - actor;
                    // ids: facing a bet -> [F, C, R?]; otherwise -> [C, R]
                    let (is_fold, is_call_or_check, is_raise) = if facing_bet {
                        (id == 0, id == 1, id == 2)
                    } else {
                        (false, id == 0, id == 1)
                    };
                    if is_fold {
                        return (
                            Node::Terminal {
                                committed,
                                folded: Some(to_act),
                            },
                            private,
                            public,
                        );
                    } else if is_raise {
                        assert!(raises < RAISE_CAP, "raise past the cap");
                        committed[actor] = committed[other] + BET_SIZE[round];
                        raises += 1;
                        facing_bet = true;
                        to_act = to_act.opponent();
                    } else {
                        assert!(is_call_or_check, "invalid Leduc action id {id}");
                        if facing_bet {
                            committed[actor] = committed[other];
                        }
                        let round_over = facing_bet || checked_once;
                        if round_over {
                            if stage == 2 {
                                stage = 3;
                            } else {
                                return (
                                    Node::Terminal {
                                        committed,
                                        folded: None,
                                    },
                                    private,
                                    public,
                                );
                            }
                        } else {
                            checked_once = true;
                            to_act = to_act.opponent();
                        }
                    }
                }
                _ => unreachable!("action after terminal history"),
            }
        }

        let node = match stage {
            0 | 1 | 3 => Node::Chance {
                used: private.iter().flatten().copied().chain(public).collect(),
            },
            2 | 4 => Node::Decision {
                to_act,
                facing_bet,
                raises,
            },
            _ => unreachable!(),
        };
        (node, private, public)
    }
}

impl Default for Leduc {
    fn default() -> Self {
        Leduc::new()
    }
}

impl Game for Leduc {
    fn name(&self) -> &'static str {
        "leduc"
    }

    fn is_terminal(&self, h: &History) -> bool {
        matches!(Leduc::replay(h).0, Node::Terminal { .. })
    }

    fn current_player(&self, h: &History) -> PlayerId {
        match Leduc::replay(h).0 {
            Node::Chance { .. } => PlayerId::Chance,
            Node::Decision { to_act, .. } => to_act,
            Node::Terminal { .. } => panic!("current_player on terminal history"),
        }
    }

    fn legal_actions(&self, h: &History) -> Vec<Action> {
        match Leduc::replay(h).0 {
            Node::Chance { .. } => {
                self.chance_outcomes(h).into_iter().map(|(a, _)| a).collect()
            }
            Node::Decision {
                facing_bet, raises, ..
            } => {
                let mut acts = Vec::with_capacity(3);
                if facing_bet {
                    acts.push(FOLD);
                    acts.push(Action { id: 1, label: "C" });
                    if raises < RAISE_CAP {
                        acts.push(Action { id: 2, label: "R" });
                    }
                } else {
                    acts.push(Action { id: 0, label: "C" });
                    acts.push(Action { id: 1, label: "R" });
                }
                acts
            }
            Node::Terminal { .. } => panic!("legal_actions on terminal history"),
        }
    }

    fn chance_outcomes(&self, h: &History) -> Vec<(Action, f64)> {
        match Leduc::replay(h).0 {
            Node::Chance { used } => {
                let remaining: Vec<usize> =
                    (0..6).filter(|c| !used.contains(c)).collect();
                let p = 1.0 / remaining.len() as f64;
                remaining
                    .iter()
                    .enumerate()
                    .map(|(id, &c)| (Action { id, label: CARDS[c] }, p))
                    .collect()
            }
            _ => panic!("chance_outcomes on a non-chance node"),
        }
    }

    fn utility(&self, h: &History, player: PlayerId) -> Utility {
        let sign = match player {
            PlayerId::P1 => 1.0,
            PlayerId::P2 => -1.0,
            PlayerId::Chance => panic!("utility of chance"),
        };
        let (node, private, public) = Leduc::replay(h);
        match node {
            Node::Terminal { committed, folded } => {
                let p1_won = match folded {
                    Some(player) => {
                        let loser = player.index();
                        return sign
                            * if loser == 0 {
                                -(committed[0] as f64)
                            } else {
                                committed[1] as f64
                            };
                    }
                    None => {
                        let pub_rank = rank(public.expect("showdown without public card"));
                        let score = |c: usize| {
                            if rank(c) == pub_rank {
                                10 + rank(c)
                            } else {
                                rank(c)
                            }
                        };
                        let (s1, s2) = (score(private[0].unwrap()), score(private[1].unwrap()));
                        if s1 == s2 {
                            return 0.0;
                        }
                        s1 > s2
                    }
                };
                // winner takes what the loser committed
                let stake = if p1_won { committed[1] } else { committed[0] };
                sign * if p1_won { stake as f64 } else { -(stake as f64) }
            }
            _ => panic!("utility on non-terminal history"),
        }
    }

    fn info_state_key(&self, h: &History, player: PlayerId) -> InfoStateKey {
        assert_ne!(player, PlayerId::Chance, "no information sets for chance");
        let mut observed = String::new();
        let mut cur = History::root();
        for id in h.action_ids() {
            let owner = match Leduc::replay(&cur).0 {
                Node::Chance { ref used } if used.len() < 2 => {
                    // private deal: visible to its owner only
                    Some(if used.is_empty() { PlayerId::P1 } else { PlayerId::P2 })
                }
                _ => None, // public card or betting action: visible to both
            };
            match owner {
                Some(owner) if owner != player => observed.push('?'),
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
        match Leduc::replay(h).0 {
            Node::Chance { used } => (0..6)
                .filter(|c| !used.contains(c))
                .nth(action_id)
                .expect("chance action out of range"),
            _ => panic!("chance_outcome_class on a non-chance node"),
        }
    }

    fn chance_class_count(&self) -> usize {
        6
    }

    fn utility_bound(&self) -> f64 {
        13.0
    }
}
