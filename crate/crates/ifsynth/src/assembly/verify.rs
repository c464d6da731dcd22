//! Bounded verification of the closed loop.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use serde::Serialize;

use super::local::{ClosedLoop, LocalImplementation};
use crate::distinguishability::RhoOracle;
use crate::error::Result;
use crate::spec::{Architecture, ComponentId, SafetyFormula};
use crate::vars::Valuation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ClosedVerdict {
    /// No violation within `depth` steps. The bound is certifying when the
    /// search saw every reachable product state.
    Verified { depth: usize, certifying: bool, states: usize },
    /// Environment word whose last letter completes a bad prefix.
    Counterexample { word: Vec<Valuation>, violated: Vec<ComponentId> },
}

impl ClosedVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, ClosedVerdict::Verified { .. })
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, ClosedVerdict::Verified { certifying: true, .. })
    }
}

/// Breadth-first search of the product of the closed loop with both monitors
/// over all environment words up to `depth`.
pub fn verify_closed(
    tp: &LocalImplementation,
    tq: &LocalImplementation,
    phi_p: &SafetyFormula,
    phi_q: &SafetyFormula,
    arch: &Architecture,
    depth: usize,
) -> Result<ClosedVerdict> {
    let lp = ClosedLoop::new(tp, tq, arch)?;
    let monitors = [phi_p.monitor()?, phi_q.monitor()?];
    let env = arch.env;
    type Key = ([usize; 2], [usize; 2]);
    let init: Key = (lp.initial(), [monitors[0].initial(), monitors[1].initial()]);
    let mut index: HashMap<Key, usize> = HashMap::from([(init, 0)]);
    let mut nodes = vec![init];
    let mut parent: Vec<Option<(usize, Valuation)>> = vec![None];
    let word_to = |mut n: usize, parent: &[Option<(usize, Valuation)>]| {
        let mut w = Vec::new();
        while let Some((p, e)) = parent[n] {
            w.push(e);
            n = p;
        }
        w.reverse();
        w
    };
    let mut frontier = vec![0usize];
    let mut level = 0;
    while !frontier.is_empty() && level < depth {
        let mut next = Vec::new();
        for &n in &frontier {
            let (s, m) = nodes[n];
            let out = lp.output(s);
            for e in 0..env.num_letters() {
                let ev = env.decode(e);
                let letter = ev.union(out);
                let m2 = [monitors[0].step_val(m[0], letter), monitors[1].step_val(m[1], letter)];
                let violated: Vec<ComponentId> =
                    ComponentId::BOTH.into_iter().filter(|c| monitors[c.index()].is_dead(m2[c.index()])).collect();
                if !violated.is_empty() {
                    let mut word = word_to(n, &parent);
                    word.push(ev);
                    return Ok(ClosedVerdict::Counterexample { word, violated });
                }
                let key = (lp.step(s, ev).0, m2);
                if let Entry::Vacant(slot) = index.entry(key) {
                    slot.insert(nodes.len());
                    nodes.push(key);
                    parent.push(Some((n, ev)));
                    next.push(nodes.len() - 1);
                }
            }
        }
        frontier = next;
        level += 1;
    }
    Ok(ClosedVerdict::Verified { depth: level, certifying: frontier.is_empty(), states: nodes.len() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IfaVerdict {
    Holds { depth: usize, pairs: usize },
    /// Distinguishable environment words on which the component read the same inputs.
    Violated { u: Vec<Valuation>, w: Vec<Valuation> },
}

impl IfaVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, IfaVerdict::Holds { .. })
    }
}

/// Checks that distinguishable environment words of length at most `depth`
/// reach the component of `phi` as different inputs before the deadline.
pub fn check_prefix_ifa(
    tp: &LocalImplementation,
    tq: &LocalImplementation,
    phi: &SafetyFormula,
    arch: &Architecture,
    depth: usize,
) -> Result<IfaVerdict> {
    let lp = ClosedLoop::new(tp, tq, arch)?;
    let oracle = RhoOracle::new(phi, arch)?;
    let c = phi.component.index();
    let letters: Vec<Valuation> = (0..arch.env.num_letters()).map(|e| arch.env.decode(e)).collect();
    let mut pairs = 0;
    // pairs of equally long words whose read inputs agree so far
    let mut stack = vec![(Vec::new(), Vec::new(), lp.initial(), lp.initial())];
    while let Some((u, w, su, sw)) = stack.pop() {
        if u.len() == depth {
            continue;
        }
        for a in &letters {
            for b in &letters {
                let (su2, ru) = lp.step(su, *a);
                let (sw2, rw) = lp.step(sw, *b);
                if ru[c] != rw[c] {
                    continue;
                }
                let mut u2 = u.clone();
                u2.push(*a);
                let mut w2 = w.clone();
                w2.push(*b);
                pairs += 1;
                if oracle.distinguished(&u2, &w2)? {
                    return Ok(IfaVerdict::Violated { u: u2, w: w2 });
                }
                stack.push((u2, w2, su2, sw2));
            }
        }
    }
    Ok(IfaVerdict::Holds { depth, pairs })
}
