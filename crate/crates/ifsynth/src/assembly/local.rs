//! Local implementations and their closed loop.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::compose::ComposedSystem;
use crate::error::{Error, Result};
use crate::spec::{Architecture, ComponentId};
use crate::synthesis::MooreMachine;
use crate::vars::{Valuation, VarSet, VarTable};

/// Moore machine over the component's own inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalImplementation {
    pub component: ComponentId,
    pub inputs: VarSet,
    pub outputs: VarSet,
    pub machine: MooreMachine,
    /// Per transition: no composed transition matched and the machine stays put.
    pub fallback: Vec<bool>,
    /// Per state: the tracked composed states disagree on the output.
    pub ambiguous: Vec<bool>,
}

impl LocalImplementation {
    /// Machine that never changes state.
    pub fn constant(component: ComponentId, arch: &Architecture, output: Valuation) -> Self {
        let inputs = arch.inputs(component);
        let outputs = arch.outputs(component);
        let ni = inputs.num_letters();
        LocalImplementation {
            component,
            inputs,
            outputs,
            machine: MooreMachine { num_inputs: ni, initial: 0, labels: vec![output.inter(outputs)], delta: vec![0; ni] },
            fallback: vec![false; ni],
            ambiguous: vec![false],
        }
    }

    pub fn num_states(&self) -> usize {
        self.machine.num_states()
    }

    pub fn step(&self, s: usize, input: Valuation) -> usize {
        self.machine.step(s, self.inputs.encode(input))
    }

    pub fn output(&self, s: usize) -> Valuation {
        self.machine.output(s)
    }

    pub fn to_dot(&self, name: &str, vars: &VarTable) -> String {
        self.machine.to_dot(name, vars, self.outputs, &|i| vars.show(self.inputs.decode(i)))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionMode {
    /// States are sets of composed states consistent with the local inputs.
    #[default]
    KnowledgeSet,
    /// States are composed states; each input picks the least matching
    /// successor in discovery order.
    MinSuccessor,
}

impl FromStr for DecompositionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "knowledge" => Ok(DecompositionMode::KnowledgeSet),
            "min" => Ok(DecompositionMode::MinSuccessor),
            _ => Err(Error::Problem(format!("unknown decomposition mode `{s}`"))),
        }
    }
}

impl fmt::Display for DecompositionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecompositionMode::KnowledgeSet => "knowledge",
            DecompositionMode::MinSuccessor => "min",
        })
    }
}

/// Component whose outputs the other component reads, if any.
pub fn upstream(arch: &Architecture) -> Result<Option<ComponentId>> {
    if arch.is_bidirectional() {
        return Err(Error::Bidirectional);
    }
    Ok(ComponentId::BOTH.into_iter().find(|c| !arch.comm_inputs(c.other()).is_empty()))
}

/// Successors of composed state `s` that agree with local input `x` of `c`.
/// A downstream component sees the upstream outputs of the successor.
fn matching(h: &ComposedSystem, arch: &Architecture, c: ComponentId, up: Option<ComponentId>, s: usize, x: Valuation) -> Vec<usize> {
    let seen_env = arch.env_inputs(c);
    let comm = arch.comm_inputs(c);
    (0..h.num_letters())
        .filter_map(|l| {
            let g = h.decode(l);
            if h.env.decode(g.env).inter(seen_env) != x.inter(seen_env) {
                return None;
            }
            let s2 = h.step(s, l)?;
            match up {
                Some(u) if u != c => (h.outputs[s2][u.index()].inter(comm) == x.inter(comm)).then_some(s2),
                _ => Some(s2),
            }
        })
        .collect()
}

/// Projects a filtered composed system onto the inputs and outputs of `c`.
pub fn decompose(h: &ComposedSystem, c: ComponentId, arch: &Architecture, mode: DecompositionMode) -> Result<LocalImplementation> {
    if !h.filtered {
        return Err(Error::Problem("decomposition needs a filtered composed system".into()));
    }
    let up = upstream(arch)?;
    let inputs = arch.inputs(c);
    let ni = inputs.num_letters();
    let out = |s: usize| h.outputs[s][c.index()];
    let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
    let start = BTreeSet::from([h.initial]);
    index.insert(start.clone(), 0);
    let mut order = vec![start];
    let (mut labels, mut delta, mut fallback, mut ambiguous) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut i = 0;
    while i < order.len() {
        let k = order[i].clone();
        let first = *k.iter().next().expect("knowledge sets are nonempty");
        labels.push(out(first));
        ambiguous.push(k.iter().any(|s| out(*s) != out(first)));
        for x in 0..ni {
            let xv = inputs.decode(x);
            let next: BTreeSet<usize> = match mode {
                DecompositionMode::KnowledgeSet => k.iter().flat_map(|s| matching(h, arch, c, up, *s, xv)).collect(),
                DecompositionMode::MinSuccessor => matching(h, arch, c, up, first, xv).into_iter().min().into_iter().collect(),
            };
            if next.is_empty() {
                fallback.push(true);
                delta.push(i as u32);
                continue;
            }
            fallback.push(false);
            let id = *index.entry(next.clone()).or_insert_with(|| {
                order.push(next);
                order.len() - 1
            });
            delta.push(id as u32);
        }
        i += 1;
    }
    Ok(LocalImplementation {
        component: c,
        inputs,
        outputs: arch.outputs(c),
        machine: MooreMachine { num_inputs: ni, initial: 0, labels, delta },
        fallback,
        ambiguous,
    })
}

/// Synchronous closed loop of two local implementations. The upstream
/// component moves first and the downstream one reads its new outputs in the
/// same step.
#[derive(Clone, Copy, Debug)]
pub struct ClosedLoop<'a> {
    pub arch: &'a Architecture,
    pub machines: [&'a LocalImplementation; 2],
    pub upstream: Option<ComponentId>,
}

impl<'a> ClosedLoop<'a> {
    pub fn new(tp: &'a LocalImplementation, tq: &'a LocalImplementation, arch: &'a Architecture) -> Result<Self> {
        for (m, c) in [(tp, ComponentId::P), (tq, ComponentId::Q)] {
            if m.component != c || m.inputs != arch.inputs(c) || m.outputs != arch.outputs(c) {
                return Err(Error::Alphabet(format!("local implementation does not fit component {c}")));
            }
        }
        Ok(ClosedLoop { arch, machines: [tp, tq], upstream: upstream(arch)? })
    }

    pub fn initial(&self) -> [usize; 2] {
        [self.machines[0].machine.initial, self.machines[1].machine.initial]
    }

    /// Joint output of a closed-loop state.
    pub fn output(&self, s: [usize; 2]) -> Valuation {
        self.machines[0].output(s[0]).union(self.machines[1].output(s[1]))
    }

    /// Successor on environment letter `e` and the inputs each component read.
    pub fn step(&self, s: [usize; 2], e: Valuation) -> ([usize; 2], [Valuation; 2]) {
        let order = match self.upstream {
            Some(u) => [u, u.other()],
            None => ComponentId::BOTH,
        };
        let mut next = s;
        let mut read = [VarSet::EMPTY; 2];
        for c in order {
            let i = c.index();
            let seen = e.union(self.machines[c.other().index()].output(next[c.other().index()]));
            read[i] = seen.inter(self.arch.inputs(c));
            next[i] = self.machines[i].step(s[i], read[i]);
        }
        (next, read)
    }

    /// Trace letters along an environment word, one per letter.
    pub fn trace(&self, word: &[Valuation]) -> Vec<Valuation> {
        let mut s = self.initial();
        word.iter()
            .map(|e| {
                let letter = e.inter(self.arch.env).union(self.output(s));
                s = self.step(s, *e).0;
                letter
            })
            .collect()
    }
}
