//! Information classes of environment words.
//!
//! Classes are built from representatives. The search first fixes a finite
//! set of lags `Λ` such that every distinguished pair differs at position
//! `len - λ` for some `λ ∈ Λ`. Then, for each round, the lexicographically
//! smallest uncovered word of every length is chosen as representative and
//! its class collects all words that agree with it on the lagged positions.
//! Positions before the start of a word count as agreeing.

use serde::Serialize;

use crate::automata::Dfa;
use crate::distinguishability::{PairVocabulary, Rho};
use crate::error::{Error, Result};
use crate::spec::ComponentId;
use crate::vars::{letter_rank, Valuation, VarSet};

pub const DEFAULT_CLASS_CAP: usize = 64;

/// Upper bound on candidate lag sets tried before giving up.
const LAG_SEARCH_BUDGET: usize = 1 << 12;

#[derive(Clone, Debug)]
pub struct InformationClass {
    pub id: usize,
    /// Minimal automaton over the environment vocabulary.
    pub dfa: Dfa,
    /// Shortest representative word.
    pub representative: Vec<Valuation>,
}

#[derive(Clone, Debug)]
pub struct ClassSet {
    pub component: ComponentId,
    pub env: VarSet,
    pub lags: Vec<usize>,
    pub classes: Vec<InformationClass>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassSummary {
    pub count: usize,
    pub lags: Vec<usize>,
    pub class_states: Vec<usize>,
}

/// Pairs of equally long words that agree at every position `len - λ`.
pub fn lag_relation(pair: &PairVocabulary, lags: &[usize]) -> Dfa {
    let width = lags.iter().copied().max().unwrap_or(0);
    let watch: u64 = lags.iter().fold(0, |m, l| m | 1 << (l - 1));
    let keep: u64 = if width == 0 { 0 } else { (1u64 << width) - 1 };
    Dfa::explore(
        pair.vocab(),
        0u64,
        |reg, l| {
            let (a, b) = pair.split(l);
            ((reg << 1) | u64::from(a != b)) & keep
        },
        |reg| reg & watch == 0,
    )
    .0
    .minimize()
}

/// Pairs `(u, w)` where `u` comes first in the preference order on letters.
fn lex_less(pair: &PairVocabulary) -> Dfa {
    let k = pair.base().len();
    Dfa::explore(
        pair.vocab(),
        0u8,
        |st, l| {
            if *st != 0 {
                return *st;
            }
            let (a, b) = pair.split(l);
            match letter_rank(k, a).cmp(&letter_rank(k, b)) {
                std::cmp::Ordering::Less => 1,
                std::cmp::Ordering::Greater => 2,
                std::cmp::Ordering::Equal => 0,
            }
        },
        |st| *st == 1,
    )
    .0
}

/// The lexicographically smallest word of every length accepted by `u`.
pub fn lexicographic_minimum(u: &Dfa, pair: &PairVocabulary) -> Dfa {
    let beaten = pair.project_right(&pair.lift_left(u).intersect(&lex_less(pair)));
    u.difference(&beaten).minimize()
}

/// Smallest lag set separating every distinguished pair, ordered by largest
/// lag, then size, then lexicographically.
pub fn find_lags(rho: &Rho) -> Result<Vec<usize>> {
    let pair = &rho.pair;
    if rho.is_empty() {
        return Ok(vec![]);
    }
    let bound = rho.minimized.num_states().min(62);
    let mut tried = 0;
    for top in 1..=bound {
        let mut subsets: Vec<u64> = (0..1u64 << (top - 1)).collect();
        subsets.sort_by_key(|m| (m.count_ones(), *m));
        for m in subsets {
            tried += 1;
            if tried > LAG_SEARCH_BUDGET {
                return Err(Error::Diverged(format!("no separating lag set among {LAG_SEARCH_BUDGET} candidates")));
            }
            let mut lags: Vec<usize> = (1..top).filter(|l| m >> (l - 1) & 1 == 1).collect();
            lags.push(top);
            if rho.minimized.intersect(&lag_relation(pair, &lags)).is_empty() {
                return Ok(lags);
            }
        }
    }
    Err(Error::Diverged(format!("no separating lag set with lags up to {bound}")))
}

pub fn compute_classes(rho: &Rho, cap: usize) -> Result<ClassSet> {
    if rho.diagnostic.is_some() {
        return Err(Error::LocallyUnrealizable);
    }
    let pair = rho.pair;
    let lags = find_lags(rho)?;
    let same = lag_relation(&pair, &lags);
    let mut uncovered = Dfa::nonempty_words(pair.base());
    let mut classes = Vec::new();
    while !uncovered.is_empty() {
        if classes.len() == cap {
            return Err(Error::Diverged(format!("more than {cap} classes")));
        }
        let reps = lexicographic_minimum(&uncovered, &pair);
        let dfa = pair.project_right(&pair.lift_left(&reps).intersect(&same));
        let shortest = reps.shortest_accepted().expect("uncovered words exist");
        uncovered = uncovered.difference(&dfa).minimize();
        classes.push(InformationClass {
            id: classes.len(),
            dfa,
            representative: shortest.iter().map(|l| pair.base().decode(*l)).collect(),
        });
    }
    Ok(ClassSet { component: rho.component, env: pair.base(), lags, classes })
}

/// No class contains two distinguished words.
pub fn check_soundness(cs: &ClassSet, rho: &Rho) -> bool {
    cs.classes.iter().all(|c| {
        let both = rho.pair.lift_left(&c.dfa).intersect(&rho.pair.lift_right(&c.dfa));
        both.intersect(&rho.minimized).is_empty()
    })
}

/// Every nonempty word lies in some class.
pub fn check_coverage(cs: &ClassSet) -> bool {
    let union = cs.classes.iter().fold(Dfa::empty_language(cs.env), |u, c| u.union(&c.dfa));
    Dfa::nonempty_words(cs.env).difference(&union).is_empty()
}

/// Deterministic product of all class automata.
#[derive(Clone, Debug)]
pub struct ClassTracker {
    pub dfa: Dfa,
    /// Bit `k` is set when the word read so far is in class `k`.
    pub members: Vec<u64>,
}

impl ClassTracker {
    pub fn contains(&self, state: usize, class: usize) -> bool {
        self.members[state] >> class & 1 == 1
    }
}

impl ClassSet {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn summary(&self) -> ClassSummary {
        ClassSummary {
            count: self.len(),
            lags: self.lags.clone(),
            class_states: self.classes.iter().map(|c| c.dfa.num_states()).collect(),
        }
    }

    /// Classes containing a word given as valuations.
    pub fn classes_of(&self, word: &[Valuation]) -> Vec<usize> {
        let letters: Vec<usize> = word.iter().map(|v| self.env.encode(*v)).collect();
        self.classes.iter().filter(|c| c.dfa.accepts(&letters)).map(|c| c.id).collect()
    }

    pub fn tracker(&self) -> ClassTracker {
        assert!(self.len() <= 64);
        let (dfa, states) = Dfa::explore(
            self.env,
            self.classes.iter().map(|c| c.dfa.initial() as u32).collect::<Vec<_>>(),
            |st, l| st.iter().zip(&self.classes).map(|(s, c)| c.dfa.step(*s as usize, l) as u32).collect(),
            |_| false,
        );
        let members = states
            .iter()
            .map(|st| {
                st.iter()
                    .zip(&self.classes)
                    .enumerate()
                    .filter(|(_, (s, c))| c.dfa.is_accepting(**s as usize))
                    .fold(0u64, |m, (k, _)| m | 1 << k)
            })
            .collect();
        ClassTracker { dfa, members }
    }

    /// Classes as seen through the variables in `visible`.
    pub fn project(&self, visible: VarSet) -> ClassSet {
        let keep = visible.inter(self.env);
        ClassSet {
            component: self.component,
            env: keep,
            lags: self.lags.clone(),
            classes: self
                .classes
                .iter()
                .map(|c| InformationClass {
                    id: c.id,
                    dfa: c.dfa.to_nfa().project(keep).determinize().minimize(),
                    representative: c.representative.iter().map(|v| v.inter(keep)).collect(),
                })
                .collect(),
        }
    }
}
