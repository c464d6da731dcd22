//! Distinguishability of environment words.
//!
//! Two environment words of length `m` are distinguished at `m` when no
//! common output word `o_0..o_m` lets both runs stay alive, while every
//! shorter prefix pair still admits such a common output word. The letter of
//! the environment at position `m` is existential in both runs.

use serde::Serialize;

use crate::automata::{Dfa, MonitorDfa};
use crate::error::{Error, Result};
use crate::spec::{Architecture, ComponentId, SafetyFormula};
use crate::vars::{Valuation, VarSet};

/// Largest number of environment variables for pair automata.
pub const MAX_ENV_VARS: usize = 8;

/// Vocabulary of pairs of environment letters: the base variables followed
/// by their primed copies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairVocabulary {
    base: VarSet,
}

impl PairVocabulary {
    pub fn new(base: VarSet) -> Result<Self> {
        if base.len() > MAX_ENV_VARS {
            return Err(Error::Limit(format!("more than {MAX_ENV_VARS} environment variables")));
        }
        Ok(PairVocabulary { base })
    }

    pub fn base(&self) -> VarSet {
        self.base
    }

    pub fn primed(&self) -> VarSet {
        self.base.primed()
    }

    pub fn vocab(&self) -> VarSet {
        self.base.union(self.primed())
    }

    pub fn base_letters(&self) -> usize {
        self.base.num_letters()
    }

    pub fn letter(&self, a: usize, b: usize) -> usize {
        a | b << self.base.len()
    }

    pub fn split(&self, l: usize) -> (usize, usize) {
        (l & (self.base_letters() - 1), l >> self.base.len())
    }

    /// Pairs of identical words.
    pub fn diagonal(&self) -> Dfa {
        Dfa::explore(self.vocab(), true, |ok, l| *ok && self.split(l).0 == self.split(l).1, |ok| *ok).0
    }

    /// Pairs `(u, w)` with `u` in `left`.
    pub fn lift_left(&self, left: &Dfa) -> Dfa {
        left.lift(self.vocab())
    }

    /// Pairs `(u, w)` with `w` in `right`.
    pub fn lift_right(&self, right: &Dfa) -> Dfa {
        right.rename_vocab(self.primed()).lift(self.vocab())
    }

    /// Words `w` such that some `(u, w)` is accepted.
    pub fn project_right(&self, pairs: &Dfa) -> Dfa {
        pairs
            .to_nfa()
            .project(self.primed())
            .determinize()
            .rename_vocab(self.base)
            .minimize()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RhoDiagnostic {
    /// Some environment word is distinguished from itself: no output word
    /// keeps it alive.
    LocallyUnrealizable { witness: Vec<Valuation> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RhoStats {
    /// States of the pair-subset construction.
    pub raw_states: usize,
    pub minimized_states: usize,
}

/// Automaton over pairs of environment words accepting exactly the pairs
/// that are distinguished at their length.
#[derive(Clone, Debug)]
pub struct Rho {
    pub component: ComponentId,
    pub pair: PairVocabulary,
    pub dfa: Dfa,
    pub minimized: Dfa,
    pub diagnostic: Option<RhoDiagnostic>,
}

impl Rho {
    pub fn stats(&self) -> RhoStats {
        RhoStats { raw_states: self.dfa.num_states(), minimized_states: self.minimized.num_states() }
    }

    /// Membership for two equally long words of environment letters.
    pub fn accepts(&self, u: &[usize], w: &[usize]) -> bool {
        assert_eq!(u.len(), w.len());
        let word: Vec<usize> = u.iter().zip(w).map(|(a, b)| self.pair.letter(*a, *b)).collect();
        self.dfa.accepts(&word)
    }

    pub fn is_empty(&self) -> bool {
        self.minimized.is_empty()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum RhoState {
    Pairs(Vec<(u32, u32)>),
    Distinguished,
    Sink,
}

/// Monitor steps indexed by environment and output letters.
struct Stepper {
    m: MonitorDfa,
    ne: usize,
    no: usize,
    table: Vec<u32>,
}

impl Stepper {
    fn new(phi: &SafetyFormula, arch: &Architecture) -> Result<Self> {
        let m = phi.monitor()?;
        let env = arch.env;
        let outs = arch.outputs(phi.component);
        let (ne, no) = (env.num_letters(), outs.num_letters());
        let mut table = Vec::with_capacity(m.num_states() * ne * no);
        for s in 0..m.num_states() {
            for e in 0..ne {
                for o in 0..no {
                    table.push(m.step_val(s, env.decode(e).union(outs.decode(o))) as u32);
                }
            }
        }
        Ok(Stepper { m, ne, no, table })
    }

    fn step(&self, s: usize, e: usize, o: usize) -> usize {
        self.table[(s * self.ne + e) * self.no + o] as usize
    }

    fn live(&self, s: usize) -> bool {
        !self.m.is_dead(s)
    }

    /// Outputs after which some environment letter keeps `s` alive.
    fn open_outputs(&self, s: usize) -> Vec<bool> {
        (0..self.no).map(|o| (0..self.ne).any(|e| self.live(self.step(s, e, o)))).collect()
    }
}

pub fn build_rho(phi: &SafetyFormula, arch: &Architecture) -> Result<Rho> {
    let pair = PairVocabulary::new(arch.env)?;
    let st = Stepper::new(phi, arch)?;
    let n = st.m.num_states();
    let open: Vec<Vec<bool>> = (0..n).map(|s| st.open_outputs(s)).collect();
    let viable = |s: usize, t: usize| {
        st.live(s) && st.live(t) && (0..st.no).any(|o| open[s][o] && open[t][o])
    };
    let keep = |mut v: Vec<(u32, u32)>| {
        v.retain(|&(s, t)| viable(s as usize, t as usize));
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            RhoState::Distinguished
        } else {
            RhoState::Pairs(v)
        }
    };
    let init = keep(vec![(st.m.initial() as u32, st.m.initial() as u32)]);
    let (dfa, _) = Dfa::explore(
        pair.vocab(),
        init,
        |state, l| match state {
            RhoState::Pairs(ps) => {
                let (a, b) = pair.split(l);
                let mut next = Vec::new();
                for &(s, t) in ps {
                    for o in 0..st.no {
                        let (s2, t2) = (st.step(s as usize, a, o), st.step(t as usize, b, o));
                        if st.live(s2) && st.live(t2) {
                            next.push((s2 as u32, t2 as u32));
                        }
                    }
                }
                keep(next)
            }
            _ => RhoState::Sink,
        },
        |state| *state == RhoState::Distinguished,
    );
    let minimized = dfa.minimize();
    let diagnostic = dfa.intersect(&pair.diagonal()).shortest_accepted().map(|w| {
        RhoDiagnostic::LocallyUnrealizable {
            witness: w.iter().map(|l| arch.env.decode(pair.split(*l).0)).collect(),
        }
    });
    Ok(Rho { component: phi.component, pair, dfa, minimized, diagnostic })
}

/// Direct check of the definition on pairs of environment words, by search
/// over common output words.
pub struct RhoOracle {
    monitor: MonitorDfa,
    envs: Vec<Valuation>,
    outs: Vec<Valuation>,
}

impl RhoOracle {
    pub fn new(phi: &SafetyFormula, arch: &Architecture) -> Result<Self> {
        let outs = arch.outputs(phi.component);
        Ok(RhoOracle {
            monitor: phi.monitor()?,
            envs: (0..arch.env.num_letters()).map(|e| arch.env.decode(e)).collect(),
            outs: (0..outs.num_letters()).map(|o| outs.decode(o)).collect(),
        })
    }

    fn alive(&self, s: usize) -> bool {
        !self.monitor.is_dead(s)
    }

    /// Some output word of length `n + 1` keeps both length-`n` prefixes alive.
    fn common(&self, u: &[Valuation], w: &[Valuation], k: usize, n: usize, s: usize, t: usize) -> bool {
        let m = &self.monitor;
        if k == n {
            return self.outs.iter().any(|o| {
                self.envs.iter().any(|e| self.alive(m.step_val(s, e.union(*o))))
                    && self.envs.iter().any(|e| self.alive(m.step_val(t, e.union(*o))))
            });
        }
        self.outs.iter().any(|o| {
            let (s2, t2) = (m.step_val(s, u[k].union(*o)), m.step_val(t, w[k].union(*o)));
            self.alive(s2) && self.alive(t2) && self.common(u, w, k + 1, n, s2, t2)
        })
    }

    pub fn distinguished(&self, u: &[Valuation], w: &[Valuation]) -> Result<bool> {
        if u.len() != w.len() {
            return Err(Error::Alphabet("distinguishability needs words of equal length".into()));
        }
        let i = self.monitor.initial();
        if !self.alive(i) {
            return Ok(u.is_empty());
        }
        Ok(!self.common(u, w, 0, u.len(), i, i) && (0..u.len()).all(|n| self.common(u, w, 0, n, i, i)))
    }
}

pub fn rho_oracle(phi: &SafetyFormula, arch: &Architecture, u: &[Valuation], w: &[Valuation]) -> Result<bool> {
    RhoOracle::new(phi, arch)?.distinguished(u, w)
}
