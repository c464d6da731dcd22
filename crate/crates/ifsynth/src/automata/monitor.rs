//! Bad-prefix monitors for safety LTL.
//!
//! A monitor state is a disjunction of obligation sets; each obligation set
//! is a conjunction of NNF subformulas that must hold from the next position
//! on. Reading a letter expands every obligation into (letter guard, next
//! obligations) terms. The empty disjunction is the dead state, and states
//! without an infinite live continuation are merged into it.

use std::collections::HashMap;

use super::dfa::Dfa;
use super::guard::{Guard, MAX_GUARD_VARS};
use crate::error::{Error, Result};
use crate::ltl::{check_safety, Ltl, SafetyVerdict};
use crate::vars::{VarId, VarSet};

/// Deterministic monitor; accepting states of the underlying DFA are dead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonitorDfa {
    dfa: Dfa,
}

impl MonitorDfa {
    /// Wraps a DFA whose accepting states are read as dead. The dead states
    /// must be closed under every letter.
    pub fn from_dead_dfa(dfa: Dfa) -> Self {
        debug_assert!((0..dfa.num_states())
            .filter(|s| dfa.is_accepting(*s))
            .all(|s| (0..dfa.num_letters()).all(|l| dfa.is_accepting(dfa.step(s, l)))));
        MonitorDfa { dfa }
    }

    /// Monitor that never fails.
    pub fn trivial(vocab: VarSet) -> Self {
        MonitorDfa { dfa: Dfa::empty_language(vocab) }
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn vocab(&self) -> VarSet {
        self.dfa.vocab()
    }

    pub fn initial(&self) -> usize {
        self.dfa.initial()
    }

    pub fn num_states(&self) -> usize {
        self.dfa.num_states()
    }

    pub fn step(&self, s: usize, l: usize) -> usize {
        self.dfa.step(s, l)
    }

    /// Step on a valuation over any superset of the vocabulary.
    pub fn step_val(&self, s: usize, val: VarSet) -> usize {
        self.dfa.step(s, self.vocab().encode(val))
    }

    pub fn is_dead(&self, s: usize) -> bool {
        self.dfa.is_accepting(s)
    }

    pub fn live_states(&self) -> usize {
        (0..self.num_states()).filter(|s| !self.is_dead(*s)).count()
    }

    /// Whether the prefix (as letters of the vocabulary) is not yet violated.
    pub fn alive_after(&self, word: &[usize]) -> bool {
        !self.is_dead(self.dfa.run(word))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Node {
    True,
    False,
    Lit(VarId, bool),
    And(u32, u32),
    Or(u32, u32),
    X(u32),
    G(u32),
    W(u32, u32),
    R(u32, u32),
}

type Term = (Guard, Vec<u32>);

struct Tableau {
    vocab: VarSet,
    nodes: Vec<Node>,
    index: HashMap<Node, u32>,
    expand_cache: HashMap<u32, Vec<Term>>,
    conj_cache: HashMap<Vec<u32>, Vec<Term>>,
}

impl Tableau {
    fn intern(&mut self, n: Node) -> u32 {
        if let Some(id) = self.index.get(&n) {
            return *id;
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(n);
        self.index.insert(n, id);
        id
    }

    fn build(&mut self, f: &Ltl) -> u32 {
        let node = match f {
            Ltl::True => Node::True,
            Ltl::False => Node::False,
            Ltl::Var(v) => Node::Lit(*v, true),
            Ltl::Not(a) => match **a {
                Ltl::Var(v) => Node::Lit(v, false),
                _ => unreachable!("input is in NNF"),
            },
            Ltl::And(a, c) => Node::And(self.build(a), self.build(c)),
            Ltl::Or(a, c) => Node::Or(self.build(a), self.build(c)),
            Ltl::Next(a) => Node::X(self.build(a)),
            Ltl::Globally(a) => Node::G(self.build(a)),
            Ltl::WeakUntil(a, c) => Node::W(self.build(a), self.build(c)),
            Ltl::Release(a, c) => Node::R(self.build(a), self.build(c)),
            Ltl::Implies(..) | Ltl::Iff(..) | Ltl::Finally(_) | Ltl::Until(..) => {
                unreachable!("input is a safety NNF formula")
            }
        };
        self.intern(node)
    }

    fn obligation(&self, id: u32) -> Vec<u32> {
        if self.nodes[id as usize] == Node::True {
            vec![]
        } else {
            vec![id]
        }
    }

    fn cross(&self, a: &[Term], b: &[Term]) -> Vec<Term> {
        let mut out = Vec::new();
        for (g, n) in a {
            for (h, m) in b {
                let gh = g.and(h);
                if gh.is_empty() {
                    continue;
                }
                let mut next = n.clone();
                next.extend(m);
                next.sort_unstable();
                next.dedup();
                out.push((gh, next));
            }
        }
        normalize_terms(out)
    }

    fn expand(&mut self, id: u32) -> Vec<Term> {
        if let Some(t) = self.expand_cache.get(&id) {
            return t.clone();
        }
        let full = Guard::full(self.vocab);
        let terms = match self.nodes[id as usize] {
            Node::True => vec![(full, vec![])],
            Node::False => vec![],
            Node::Lit(v, val) => vec![(Guard::literal(self.vocab, v, val), vec![])],
            Node::And(a, c) => {
                let (ea, ec) = (self.expand(a), self.expand(c));
                self.cross(&ea, &ec)
            }
            Node::Or(a, c) => {
                let mut t = self.expand(a);
                t.extend(self.expand(c));
                normalize_terms(t)
            }
            Node::X(a) => {
                if self.nodes[a as usize] == Node::False {
                    vec![]
                } else {
                    vec![(full, self.obligation(a))]
                }
            }
            Node::G(a) => {
                let ea = self.expand(a);
                self.cross(&ea, &[(full, vec![id])])
            }
            Node::W(a, c) => {
                let ea = self.expand(a);
                let mut t = self.expand(c);
                t.extend(self.cross(&ea, &[(full, vec![id])]));
                normalize_terms(t)
            }
            Node::R(a, c) => {
                let mut ea = self.expand(a);
                ea.push((full, vec![id]));
                let ec = self.expand(c);
                self.cross(&ec, &normalize_terms(ea))
            }
        };
        self.expand_cache.insert(id, terms.clone());
        terms
    }

    fn expand_conj(&mut self, set: &[u32]) -> Vec<Term> {
        if let Some(t) = self.conj_cache.get(set) {
            return t.clone();
        }
        let mut acc = vec![(Guard::full(self.vocab), vec![])];
        for id in set {
            let e = self.expand(*id);
            acc = self.cross(&acc, &e);
        }
        self.conj_cache.insert(set.to_vec(), acc.clone());
        acc
    }
}

/// Merges terms with the same next obligations and drops unsatisfiable ones.
fn normalize_terms(terms: Vec<Term>) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    for (g, n) in terms {
        if g.is_empty() {
            continue;
        }
        match out.iter_mut().find(|(_, m)| *m == n) {
            Some((h, _)) => *h = h.or(&g),
            None => out.push((g, n)),
        }
    }
    out
}

/// Drops obligation sets that are strict supersets of another set.
fn subsume(mut sets: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    sets.sort();
    sets.dedup();
    let keep: Vec<bool> = sets
        .iter()
        .map(|s| !sets.iter().any(|t| t.len() < s.len() && t.iter().all(|x| s.binary_search(x).is_ok())))
        .collect();
    sets.into_iter().zip(keep).filter(|(_, k)| *k).map(|(s, _)| s).collect()
}

/// Deterministic minimal monitor of `f` over `vocab`: its dead states are
/// exactly the bad prefixes of `f`.
pub fn ltl_to_monitor(f: &Ltl, vocab: VarSet) -> Result<MonitorDfa> {
    if !f.atoms().is_subset(vocab) {
        return Err(Error::Vocabulary("formula mentions variables outside the vocabulary".into()));
    }
    if vocab.len() > MAX_GUARD_VARS {
        return Err(Error::Limit(format!("monitor vocabulary exceeds {MAX_GUARD_VARS} variables")));
    }
    if let SafetyVerdict::Rejected(why) = check_safety(f) {
        return Err(Error::NotSafety(why));
    }
    let mut tab = Tableau {
        vocab,
        nodes: Vec::new(),
        index: HashMap::new(),
        expand_cache: HashMap::new(),
        conj_cache: HashMap::new(),
    };
    let root = tab.build(&f.nnf());
    let init = vec![tab.obligation(root)];
    let mut term_cache: HashMap<Vec<Vec<u32>>, Vec<Term>> = HashMap::new();
    let (raw, _) = Dfa::explore(
        vocab,
        init,
        |state: &Vec<Vec<u32>>, l| {
            let terms = term_cache.entry(state.clone()).or_insert_with(|| {
                state.iter().flat_map(|set| tab.expand_conj(set)).collect()
            });
            subsume(terms.iter().filter(|(g, _)| g.contains(l)).map(|(_, n)| n.clone()).collect())
        },
        |state| state.is_empty(),
    );
    let n = raw.num_states();
    let mut live: Vec<bool> = (0..n).map(|s| !raw.is_accepting(s)).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for s in 0..n {
            if live[s] && !(0..raw.num_letters()).any(|l| live[raw.step(s, l)]) {
                live[s] = false;
                changed = true;
            }
        }
    }
    let delta = (0..n).flat_map(|s| (0..raw.num_letters()).map(move |l| (s, l))).map(|(s, l)| raw.step(s, l) as u32);
    let marked = Dfa::new(vocab, raw.initial(), delta.collect(), live.iter().map(|x| !x).collect());
    Ok(MonitorDfa { dfa: marked.minimize() })
}
