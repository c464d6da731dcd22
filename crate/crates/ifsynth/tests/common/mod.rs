// Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use ifsynth::automata::{Dfa, Guard, SymbolicNfa};
use ifsynth::ltl::Ltl;
use ifsynth::synthesis::{Player, SafetyGame};
use ifsynth::vars::{VarId, VarSet};
use rand::Rng;

/// Truncated LTL semantics on a finite word, evaluated at position `i`.
/// `weak` selects the weak view (pending obligations hold); negation swaps
/// the views.
pub fn holds(f: &Ltl, w: &[VarSet], i: usize, weak: bool) -> bool {
    let n = w.len();
    match f {
        Ltl::True => true,
        Ltl::False => false,
        Ltl::Var(v) => w[i].contains(*v),
        Ltl::Not(g) => !holds(g, w, i, !weak),
        Ltl::And(a, b) => holds(a, w, i, weak) && holds(b, w, i, weak),
        Ltl::Or(a, b) => holds(a, w, i, weak) || holds(b, w, i, weak),
        Ltl::Implies(a, b) => !holds(a, w, i, !weak) || holds(b, w, i, weak),
        Ltl::Iff(a, b) => {
            (!holds(a, w, i, !weak) || holds(b, w, i, weak)) && (!holds(b, w, i, !weak) || holds(a, w, i, weak))
        }
        Ltl::Next(g) => {
            if i + 1 < n {
                holds(g, w, i + 1, weak)
            } else {
                weak
            }
        }
        Ltl::Globally(g) => (i..n).all(|j| holds(g, w, j, weak)) && weak,
        Ltl::Finally(g) => (i..n).any(|j| holds(g, w, j, weak)) || weak,
        Ltl::Until(a, b) | Ltl::WeakUntil(a, b) => {
            for j in i..n {
                if holds(b, w, j, weak) {
                    return true;
                }
                if !holds(a, w, j, weak) {
                    return false;
                }
            }
            weak
        }
        Ltl::Release(a, b) => {
            for j in i..n {
                if !holds(b, w, j, weak) {
                    return false;
                }
                if holds(a, w, j, weak) {
                    return true;
                }
            }
            weak
        }
    }
}

/// Whether some extension of `prefix` by `ext` letters over `vocab` is not
/// refuted by the weak view. For syntactic safety formulas this
/// approximates "not a bad prefix" from above and is exact once `ext`
/// exceeds the look-ahead the formula needs.
pub fn alive_by_extension(f: &Ltl, prefix: &[VarSet], vocab: VarSet, ext: usize) -> bool {
    fn go(f: &Ltl, w: &mut Vec<VarSet>, vocab: VarSet, left: usize) -> bool {
        if !w.is_empty() && !holds(f, w, 0, true) {
            return false;
        }
        if left == 0 {
            return true;
        }
        for l in 0..vocab.num_letters() {
            w.push(vocab.decode(l));
            let ok = go(f, w, vocab, left - 1);
            w.pop();
            if ok {
                return true;
            }
        }
        false
    }
    let mut w = Vec::new();
    for a in prefix {
        w.push(*a);
        if !holds(f, &w, 0, true) {
            return false;
        }
    }
    go(f, &mut w, vocab, ext)
}

/// Random formula of the given operator depth over `vars`.
pub fn random_formula(rng: &mut impl Rng, vars: &[VarId], depth: usize) -> Ltl {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..10) {
            0 => Ltl::True,
            1 => Ltl::False,
            _ => Ltl::var(vars[rng.gen_range(0..vars.len())]),
        };
    }
    let op = rng.gen_range(0..13);
    let mut sub = || Box::new(random_formula(rng, vars, depth - 1));
    match op {
        0 | 1 => Ltl::Not(sub()),
        2 => Ltl::And(sub(), sub()),
        3 => Ltl::Or(sub(), sub()),
        4 => Ltl::Implies(sub(), sub()),
        5 => Ltl::Iff(sub(), sub()),
        6 | 7 => Ltl::Next(sub()),
        8 => Ltl::Globally(sub()),
        9 => Ltl::WeakUntil(sub(), sub()),
        10 => Ltl::Release(sub(), sub()),
        11 => Ltl::Finally(sub()),
        _ => Ltl::Until(sub(), sub()),
    }
}

pub fn random_word(rng: &mut impl Rng, vocab: VarSet, len: usize) -> Vec<VarSet> {
    (0..len).map(|_| vocab.decode(rng.gen_range(0..vocab.num_letters()))).collect()
}

/// All words over `letters` letters of length at most `max_len`.
pub fn all_words(letters: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..letters).map(move |l| {
                    let mut w2 = w.clone();
                    w2.push(l);
                    w2
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub fn random_dfa(rng: &mut impl Rng, vocab: VarSet, max_states: usize) -> Dfa {
    let n = rng.gen_range(1..=max_states);
    let nl = vocab.num_letters();
    let delta = (0..n * nl).map(|_| rng.gen_range(0..n) as u32).collect();
    let accepting = (0..n).map(|_| rng.gen_bool(0.4)).collect();
    Dfa::new(vocab, 0, delta, accepting)
}

pub fn random_nfa(rng: &mut impl Rng, vocab: VarSet, max_states: usize) -> SymbolicNfa {
    let n = rng.gen_range(1..=max_states);
    let mut a = SymbolicNfa::new(vocab);
    for _ in 0..n {
        a.add_state(rng.gen_bool(0.35));
    }
    let init: Vec<usize> = (0..n).filter(|s| *s == 0 || rng.gen_bool(0.2)).collect();
    a.set_initial(init);
    for s in 0..n {
        for t in 0..n {
            if rng.gen_bool(0.4) {
                let bits: Vec<bool> = (0..vocab.num_letters()).map(|_| rng.gen_bool(0.5)).collect();
                let g = Guard::from_fn(vocab, |l| bits[l]);
                a.add_edge(s, g, t);
            }
        }
    }
    a
}

/// Path search through the edge list, without subset bookkeeping.
pub fn nfa_accepts(a: &SymbolicNfa, word: &[usize]) -> bool {
    fn go(a: &SymbolicNfa, s: usize, word: &[usize]) -> bool {
        match word.split_first() {
            None => a.is_accepting(s),
            Some((l, rest)) => a.edges(s).iter().any(|(g, t)| g.contains(*l) && go(a, *t, rest)),
        }
    }
    a.initial().iter().any(|s| go(a, *s, word))
}

pub fn random_game(rng: &mut impl Rng, n: usize) -> SafetyGame {
    let mut g = SafetyGame::default();
    for _ in 0..n {
        let owner = if rng.gen_bool(0.5) { Player::System } else { Player::Env };
        g.add_node(owner, rng.gen_bool(0.1));
    }
    for v in 0..n {
        let k = rng.gen_range(0..4);
        for _ in 0..k {
            g.succ[v].push(rng.gen_range(0..n));
        }
    }
    g.initial = rng.gen_range(0..n);
    g
}

/// Greatest fixpoint by repeated sweeps.
pub fn naive_winning(g: &SafetyGame) -> Vec<bool> {
    let mut win: Vec<bool> = g.losing.iter().map(|l| !l).collect();
    loop {
        let mut changed = false;
        for v in 0..g.num_nodes() {
            if !win[v] {
                continue;
            }
            let keep = match g.owner[v] {
                Player::System => g.succ[v].iter().any(|t| win[*t]),
                Player::Env => g.succ[v].iter().all(|t| win[*t]),
            };
            if !keep {
                win[v] = false;
                changed = true;
            }
        }
        if !changed {
            return win;
        }
    }
}
