//! Complete deterministic automata with a dense transition table.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use super::guard::Guard;
use super::nfa::SymbolicNfa;
use crate::vars::VarSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    vocab: VarSet,
    initial: usize,
    delta: Vec<u32>,
    accepting: Vec<bool>,
}

impl Dfa {
    /// Builds a DFA from a full transition table (`delta[s * letters + l]`).
    pub fn new(vocab: VarSet, initial: usize, delta: Vec<u32>, accepting: Vec<bool>) -> Self {
        assert_eq!(delta.len(), accepting.len() * vocab.num_letters());
        assert!(initial < accepting.len());
        Dfa { vocab, initial, delta, accepting }
    }

    /// Breadth-first construction from an implicit deterministic system.
    /// Returns the automaton and the payload of each state.
    pub fn explore<S, F, A>(vocab: VarSet, init: S, mut step: F, accept: A) -> (Dfa, Vec<S>)
    where
        S: Clone + Eq + Hash,
        F: FnMut(&S, usize) -> S,
        A: Fn(&S) -> bool,
    {
        let nl = vocab.num_letters();
        let mut index: HashMap<S, u32> = HashMap::new();
        let mut states = vec![init.clone()];
        index.insert(init, 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < states.len() {
            for l in 0..nl {
                let next = step(&states[i], l);
                let id = match index.get(&next) {
                    Some(id) => *id,
                    None => {
                        let id = states.len() as u32;
                        index.insert(next.clone(), id);
                        states.push(next);
                        id
                    }
                };
                delta.push(id);
            }
            i += 1;
        }
        let accepting = states.iter().map(&accept).collect();
        (Dfa { vocab, initial: 0, delta, accepting }, states)
    }

    /// Accepts every word (including the empty one).
    pub fn universal(vocab: VarSet) -> Self {
        Dfa::new(vocab, 0, vec![0; vocab.num_letters()], vec![true])
    }

    /// Accepts every nonempty word.
    pub fn nonempty_words(vocab: VarSet) -> Self {
        let nl = vocab.num_letters();
        Dfa::new(vocab, 0, vec![1; 2 * nl], vec![false, true])
    }

    pub fn empty_language(vocab: VarSet) -> Self {
        Dfa::new(vocab, 0, vec![0; vocab.num_letters()], vec![false])
    }

    pub fn vocab(&self) -> VarSet {
        self.vocab
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn num_letters(&self) -> usize {
        self.vocab.num_letters()
    }

    pub fn is_accepting(&self, s: usize) -> bool {
        self.accepting[s]
    }

    pub fn step(&self, s: usize, l: usize) -> usize {
        self.delta[s * self.num_letters() + l] as usize
    }

    pub fn run(&self, word: &[usize]) -> usize {
        word.iter().fold(self.initial, |s, l| self.step(s, *l))
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.accepting[self.run(word)]
    }

    pub fn complement(&self) -> Dfa {
        Dfa { accepting: self.accepting.iter().map(|a| !a).collect(), ..self.clone() }
    }

    /// Same language over a larger vocabulary; new variables are ignored.
    pub fn lift(&self, to: VarSet) -> Dfa {
        assert!(self.vocab.is_subset(to));
        if to == self.vocab {
            return self.clone();
        }
        let nl = to.num_letters();
        let proj: Vec<usize> = (0..nl).map(|l| to.translate(l, self.vocab)).collect();
        let delta = (0..self.num_states())
            .flat_map(|s| proj.iter().map(move |p| self.delta[s * self.num_letters() + p]))
            .collect();
        Dfa { vocab: to, initial: self.initial, delta, accepting: self.accepting.clone() }
    }

    /// Same automaton over another vocabulary of equal size; letter indices
    /// are kept, so the `j`-th variable of `self` becomes the `j`-th of `to`.
    pub fn rename_vocab(&self, to: VarSet) -> Dfa {
        assert_eq!(to.len(), self.vocab.len());
        Dfa { vocab: to, ..self.clone() }
    }

    /// Synchronous product; acceptance combined by `op`. Vocabularies are
    /// joined.
    pub fn product(&self, o: &Dfa, op: impl Fn(bool, bool) -> bool) -> Dfa {
        let vocab = self.vocab.union(o.vocab);
        let a = self.lift(vocab);
        let b = o.lift(vocab);
        Dfa::explore(
            vocab,
            (a.initial, b.initial),
            |&(x, y), l| (a.step(x, l), b.step(y, l)),
            |&(x, y)| op(a.accepting[x], b.accepting[y]),
        )
        .0
    }

    pub fn intersect(&self, o: &Dfa) -> Dfa {
        self.product(o, |a, b| a && b)
    }

    pub fn union(&self, o: &Dfa) -> Dfa {
        self.product(o, |a, b| a || b)
    }

    pub fn difference(&self, o: &Dfa) -> Dfa {
        self.product(o, |a, b| a && !b)
    }

    /// Shortest accepted word, lexicographically smallest among those.
    pub fn shortest_accepted(&self) -> Option<Vec<usize>> {
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.num_states()];
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(s) = queue.pop_front() {
            if self.accepting[s] {
                let mut word = Vec::new();
                let mut cur = s;
                while let Some((p, l)) = parent[cur] {
                    word.push(l);
                    cur = p;
                }
                word.reverse();
                return Some(word);
            }
            for l in 0..self.num_letters() {
                let t = self.step(s, l);
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((s, l));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_accepted().is_none()
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(s) = stack.pop() {
            for l in 0..self.num_letters() {
                let t = self.step(s, l);
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// States from which an accepting state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut good = self.accepting.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for s in 0..n {
                if !good[s] && (0..self.num_letters()).any(|l| good[self.step(s, l)]) {
                    good[s] = true;
                    changed = true;
                }
            }
        }
        good
    }

    /// Minimal automaton, numbered in breadth-first order from the initial
    /// state. Minimal automata of equal languages are structurally equal.
    pub fn minimize(&self) -> Dfa {
        let keys: Vec<u32> = self.accepting.iter().map(|a| *a as u32).collect();
        self.minimize_with(&keys)
    }

    /// Coarsest congruence refining the partition given by `keys`.
    pub fn minimize_with(&self, keys: &[u32]) -> Dfa {
        let n = self.num_states();
        let nl = self.num_letters();
        let reach = self.reachable();
        let mut class: Vec<u32> = keys.to_vec();
        let mut count = usize::MAX;
        loop {
            let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut next = vec![u32::MAX; n];
            for s in (0..n).filter(|s| reach[*s]) {
                let mut sig = Vec::with_capacity(nl + 1);
                sig.push(class[s]);
                sig.extend((0..nl).map(|l| class[self.step(s, l)]));
                let fresh = ids.len() as u32;
                next[s] = *ids.entry(sig).or_insert(fresh);
            }
            let new_count = ids.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let mut rep = vec![usize::MAX; count];
        for s in (0..n).filter(|s| reach[*s]) {
            if rep[class[s] as usize] == usize::MAX {
                rep[class[s] as usize] = s;
            }
        }
        let quotient = Dfa::explore(
            self.vocab,
            class[self.initial],
            |c, l| class[self.step(rep[*c as usize], l)],
            |c| self.accepting[rep[*c as usize]],
        );
        quotient.0
    }

    pub fn equivalent(&self, o: &Dfa) -> bool {
        self.vocab == o.vocab && self.minimize() == o.minimize()
    }

    /// Accepted words of length at most `max_len`, in length-lexicographic
    /// order over letter indices.
    pub fn accepted_words(&self, max_len: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut layer = vec![(Vec::new(), self.initial)];
        for len in 0..=max_len {
            out.extend(layer.iter().filter(|(_, s)| self.accepting[*s]).map(|(w, _)| w.clone()));
            if len == max_len {
                break;
            }
            layer = layer
                .into_iter()
                .flat_map(|(w, s)| {
                    (0..self.num_letters()).map(move |l| {
                        let mut w2 = w.clone();
                        w2.push(l);
                        (w2, self.step(s, l))
                    })
                })
                .collect();
        }
        out
    }

    pub fn to_nfa(&self) -> SymbolicNfa {
        let mut nfa = SymbolicNfa::new(self.vocab);
        for s in 0..self.num_states() {
            nfa.add_state(self.accepting[s]);
        }
        nfa.set_initial(vec![self.initial]);
        for s in 0..self.num_states() {
            let mut by_target: Vec<(usize, Guard)> = Vec::new();
            for l in 0..self.num_letters() {
                let t = self.step(s, l);
                match by_target.iter_mut().find(|(x, _)| *x == t) {
                    Some((_, g)) => g.insert(l),
                    None => by_target.push((t, Guard::letter(self.vocab, l))),
                }
            }
            for (t, g) in by_target {
                nfa.add_edge(s, g, t);
            }
        }
        nfa
    }
}
