//! Explicit safety games.

use std::collections::VecDeque;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Player {
    System,
    Env,
}

/// Game graph. The environment wins by reaching a losing node; a system node
/// without successors is losing as well, an environment node without
/// successors is winning for the system.
#[derive(Clone, Debug, Default)]
pub struct SafetyGame {
    pub owner: Vec<Player>,
    pub losing: Vec<bool>,
    pub succ: Vec<Vec<usize>>,
    pub initial: usize,
}

impl SafetyGame {
    pub fn add_node(&mut self, owner: Player, losing: bool) -> usize {
        self.owner.push(owner);
        self.losing.push(losing);
        self.succ.push(Vec::new());
        self.owner.len() - 1
    }

    pub fn num_nodes(&self) -> usize {
        self.owner.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SafetySolution {
    pub winning: Vec<bool>,
    /// For winning system nodes, the position in `succ` of the first
    /// successor that stays winning.
    pub strategy: Vec<Option<usize>>,
}

impl SafetySolution {
    pub fn realizable(&self, game: &SafetyGame) -> bool {
        self.winning[game.initial]
    }
}

/// Environment attractor of the losing nodes, computed with successor
/// counters; the system wins everywhere else.
pub fn solve_safety(game: &SafetyGame) -> SafetySolution {
    let n = game.num_nodes();
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, ss) in game.succ.iter().enumerate() {
        for s in ss {
            pred[*s].push(v);
        }
    }
    let mut count: Vec<usize> = game.succ.iter().map(Vec::len).collect();
    let mut attr = vec![false; n];
    let mut queue = VecDeque::new();
    for (v, a) in attr.iter_mut().enumerate() {
        if game.losing[v] || (game.owner[v] == Player::System && game.succ[v].is_empty()) {
            *a = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &u in &pred[v] {
            if attr[u] {
                continue;
            }
            let pulled = match game.owner[u] {
                Player::Env => true,
                Player::System => {
                    count[u] -= 1;
                    count[u] == 0
                }
            };
            if pulled {
                attr[u] = true;
                queue.push_back(u);
            }
        }
    }
    let winning: Vec<bool> = attr.iter().map(|a| !a).collect();
    let strategy = (0..n)
        .map(|v| {
            (winning[v] && game.owner[v] == Player::System)
                .then(|| game.succ[v].iter().position(|s| winning[*s]))
                .flatten()
        })
        .collect();
    SafetySolution { winning, strategy }
}
