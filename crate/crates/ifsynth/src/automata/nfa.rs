//! Nondeterministic finite automata with guard-labelled edges.

use std::collections::{HashMap, VecDeque};

use super::dfa::Dfa;
use super::guard::Guard;
use crate::vars::{VarId, VarSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicNfa {
    vocab: VarSet,
    initial: Vec<usize>,
    edges: Vec<Vec<(Guard, usize)>>,
    accepting: Vec<bool>,
}

impl SymbolicNfa {
    pub fn new(vocab: VarSet) -> Self {
        SymbolicNfa { vocab, initial: Vec::new(), edges: Vec::new(), accepting: Vec::new() }
    }

    pub fn add_state(&mut self, accepting: bool) -> usize {
        self.edges.push(Vec::new());
        self.accepting.push(accepting);
        self.edges.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, guard: Guard, to: usize) {
        assert_eq!(guard.vocab(), self.vocab, "edge guard over foreign vocabulary");
        if !guard.is_empty() {
            self.edges[from].push((guard, to));
        }
    }

    pub fn set_initial(&mut self, init: Vec<usize>) {
        self.initial = init;
    }

    pub fn vocab(&self) -> VarSet {
        self.vocab
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn num_states(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self, s: usize) -> &[(Guard, usize)] {
        &self.edges[s]
    }

    pub fn is_accepting(&self, s: usize) -> bool {
        self.accepting[s]
    }

    pub fn is_deterministic(&self) -> bool {
        self.initial.len() == 1
            && self.edges.iter().all(|es| {
                es.iter().enumerate().all(|(i, (g, _))| {
                    es[i + 1..].iter().all(|(h, _)| g.and(h).is_empty())
                })
            })
    }

    fn successors(&self, set: &[usize], l: usize) -> Vec<usize> {
        let mut out: Vec<usize> = set
            .iter()
            .flat_map(|s| self.edges[*s].iter().filter(|(g, _)| g.contains(l)).map(|(_, t)| *t))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let mut cur = self.initial.clone();
        cur.sort_unstable();
        cur.dedup();
        for l in word {
            cur = self.successors(&cur, *l);
        }
        cur.iter().any(|s| self.accepting[*s])
    }

    /// Subset construction.
    pub fn determinize(&self) -> Dfa {
        let mut init = self.initial.clone();
        init.sort_unstable();
        init.dedup();
        Dfa::explore(
            self.vocab,
            init,
            |set, l| self.successors(set, l),
            |set| set.iter().any(|s| self.accepting[*s]),
        )
        .0
    }

    pub fn complement(&self) -> SymbolicNfa {
        self.determinize().complement().to_nfa()
    }

    /// Intersection over the joined vocabulary.
    pub fn product(&self, o: &SymbolicNfa) -> SymbolicNfa {
        let vocab = self.vocab.union(o.vocab);
        let lift = |a: &SymbolicNfa| -> Vec<Vec<(Guard, usize)>> {
            a.edges.iter().map(|es| es.iter().map(|(g, t)| (g.lift(vocab), *t)).collect()).collect()
        };
        let (ea, eb) = (lift(self), lift(o));
        let mut out = SymbolicNfa::new(vocab);
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut init = Vec::new();
        for &x in &self.initial {
            for &y in &o.initial {
                let id = *index.entry((x, y)).or_insert_with(|| {
                    queue.push_back((x, y));
                    out.add_state(self.accepting[x] && o.accepting[y])
                });
                init.push(id);
            }
        }
        out.set_initial(init);
        while let Some((x, y)) = queue.pop_front() {
            let from = index[&(x, y)];
            for (g, tx) in &ea[x] {
                for (h, ty) in &eb[y] {
                    let gh = g.and(h);
                    if gh.is_empty() {
                        continue;
                    }
                    let to = *index.entry((*tx, *ty)).or_insert_with(|| {
                        queue.push_back((*tx, *ty));
                        out.add_state(self.accepting[*tx] && o.accepting[*ty])
                    });
                    out.add_edge(from, gh, to);
                }
            }
        }
        out
    }

    /// Existential projection onto `keep`.
    pub fn project(&self, keep: VarSet) -> SymbolicNfa {
        let vocab = keep.inter(self.vocab);
        SymbolicNfa {
            vocab,
            initial: self.initial.clone(),
            edges: self
                .edges
                .iter()
                .map(|es| es.iter().map(|(g, t)| (g.exists(vocab), *t)).collect())
                .collect(),
            accepting: self.accepting.clone(),
        }
    }

    /// Same language with every variable renamed by an order-preserving map.
    pub fn rename(&self, f: impl Fn(VarId) -> VarId + Copy) -> SymbolicNfa {
        let vocab = VarSet::from_ids(self.vocab.iter().map(f));
        SymbolicNfa {
            vocab,
            initial: self.initial.clone(),
            edges: self
                .edges
                .iter()
                .map(|es| es.iter().map(|(g, t)| (g.rename(f), *t)).collect())
                .collect(),
            accepting: self.accepting.clone(),
        }
    }

    pub fn is_empty(&self) -> bool {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<usize> = self.initial.clone();
        for s in &stack {
            seen[*s] = true;
        }
        while let Some(s) = stack.pop() {
            if self.accepting[s] {
                return false;
            }
            for (_, t) in &self.edges[s] {
                if !seen[*t] {
                    seen[*t] = true;
                    stack.push(*t);
                }
            }
        }
        true
    }

    /// Whether the language of `self` contains that of `o`.
    pub fn includes(&self, o: &SymbolicNfa) -> bool {
        o.product(&self.complement()).is_empty()
    }

    pub fn minimize(&self) -> SymbolicNfa {
        self.determinize().minimize().to_nfa()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Words over {a} whose second-to-last letter has `a`.
    fn second_last() -> SymbolicNfa {
        let v = VarSet::singleton(0);
        let mut n = SymbolicNfa::new(v);
        let s0 = n.add_state(false);
        let s1 = n.add_state(false);
        let s2 = n.add_state(true);
        n.set_initial(vec![s0]);
        n.add_edge(s0, Guard::full(v), s0);
        n.add_edge(s0, Guard::literal(v, 0, true), s1);
        n.add_edge(s1, Guard::full(v), s2);
        n
    }

    #[test]
    fn determinize_matches_nfa() {
        let n = second_last();
        assert!(!n.is_deterministic());
        let d = n.determinize();
        for w in Dfa::universal(n.vocab()).accepted_words(5) {
            assert_eq!(n.accepts(&w), d.accepts(&w), "{w:?}");
        }
        assert_eq!(d.minimize().num_states(), 4);
        assert!(d.to_nfa().is_deterministic());
    }

    #[test]
    fn product_and_projection() {
        let n = second_last();
        let m = n.rename(|v| v + 1);
        let p = n.product(&m);
        assert_eq!(p.vocab(), VarSet::from_ids([0, 1]));
        assert!(p.accepts(&[3, 0]));
        assert!(!p.accepts(&[1, 0]));
        let back = p.project(VarSet::singleton(0));
        assert!(back.includes(&n) && n.includes(&back));
    }

    #[test]
    fn complement_and_emptiness() {
        let n = second_last();
        assert!(n.product(&n.complement()).is_empty());
        assert!(!n.complement().is_empty());
        assert!(n.minimize().includes(&n));
    }
}
