//! Product of two hyper implementations and the consistency filter.

use std::collections::{HashMap, VecDeque};

use crate::classes::{ClassSet, ClassTracker};
use crate::error::{Error, Result};
use crate::spec::{Architecture, ComponentId};
use crate::synthesis::HyperImplementation;
use crate::vars::{Valuation, VarSet};

/// Global letter: an environment letter and one class per component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GlobalLetter {
    pub env: usize,
    pub class_p: usize,
    pub class_q: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ComposedState {
    /// Hyper implementation states of p and q.
    pub local: [u32; 2],
    /// Class tracker states of p and q, present after filtering.
    pub tracker: Option<[u32; 2]>,
}

/// Composition of the two hyper implementations. Transitions removed by the
/// consistency filter are `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComposedSystem {
    pub env: VarSet,
    pub num_classes: [usize; 2],
    pub states: Vec<ComposedState>,
    pub outputs: Vec<[Valuation; 2]>,
    pub initial: usize,
    pub delta: Vec<Option<u32>>,
    pub filtered: bool,
}

impl ComposedSystem {
    pub fn num_letters(&self) -> usize {
        self.env.num_letters() * self.num_classes[0] * self.num_classes[1]
    }

    pub fn letter(&self, g: GlobalLetter) -> usize {
        (g.env * self.num_classes[0] + g.class_p) * self.num_classes[1] + g.class_q
    }

    pub fn decode(&self, l: usize) -> GlobalLetter {
        let (nq, np) = (self.num_classes[1], self.num_classes[0]);
        GlobalLetter { env: l / (np * nq), class_p: l / nq % np, class_q: l % nq }
    }

    pub fn step(&self, s: usize, l: usize) -> Option<usize> {
        self.delta[s * self.num_letters() + l].map(|t| t as usize)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// Joint output of both components.
    pub fn output(&self, s: usize) -> Valuation {
        self.outputs[s][0].union(self.outputs[s][1])
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().filter(|t| t.is_some()).count()
    }
}

fn check_alphabet(h: &HyperImplementation, c: ComponentId, arch: &Architecture) -> Result<()> {
    if h.component != c || h.observed != arch.env_inputs(c) || h.outputs != arch.outputs(c) {
        return Err(Error::Alphabet(format!("hyper implementation does not fit component {c}")));
    }
    Ok(())
}

/// Synchronous product: on `(e, c_p, c_q)` each machine reads its class and
/// its observed part of `e`.
pub fn compose(hp: &HyperImplementation, hq: &HyperImplementation, arch: &Architecture) -> Result<ComposedSystem> {
    check_alphabet(hp, ComponentId::P, arch)?;
    check_alphabet(hq, ComponentId::Q, arch)?;
    let mut sys = ComposedSystem {
        env: arch.env,
        num_classes: [hp.num_classes, hq.num_classes],
        states: Vec::new(),
        outputs: Vec::new(),
        initial: 0,
        delta: Vec::new(),
        filtered: false,
    };
    let nl = sys.num_letters();
    let mut index: HashMap<[u32; 2], usize> = HashMap::new();
    let init = [hp.machine.initial as u32, hq.machine.initial as u32];
    index.insert(init, 0);
    let mut order = vec![init];
    let mut i = 0;
    while i < order.len() {
        let [a, b] = order[i];
        for l in 0..nl {
            let g = sys.decode(l);
            let e = arch.env.decode(g.env);
            let a2 = hp.machine.step(a as usize, hp.input(g.class_p, e)) as u32;
            let b2 = hq.machine.step(b as usize, hq.input(g.class_q, e)) as u32;
            let id = *index.entry([a2, b2]).or_insert_with(|| {
                order.push([a2, b2]);
                order.len() - 1
            });
            sys.delta.push(Some(id as u32));
        }
        i += 1;
    }
    sys.states = order.iter().map(|l| ComposedState { local: *l, tracker: None }).collect();
    sys.outputs = order
        .iter()
        .map(|[a, b]| [hp.machine.output(*a as usize), hq.machine.output(*b as usize)])
        .collect();
    Ok(sys)
}

/// Keeps the transitions whose announced classes contain the environment word
/// read so far; unreachable states are dropped. States carry the class
/// tracker states.
pub fn filter_consistent(h: &ComposedSystem, cs_p: &ClassSet, cs_q: &ClassSet) -> Result<ComposedSystem> {
    if cs_p.len() != h.num_classes[0] || cs_q.len() != h.num_classes[1] || cs_p.env != h.env || cs_q.env != h.env {
        return Err(Error::Alphabet("class sets do not match the composed system".into()));
    }
    let trackers: [ClassTracker; 2] = [cs_p.tracker(), cs_q.tracker()];
    let nl = h.num_letters();
    let key = |s: usize, t: [u32; 2]| (h.states[s].local, t);
    let init_t = [trackers[0].dfa.initial() as u32, trackers[1].dfa.initial() as u32];
    let mut index: HashMap<([u32; 2], [u32; 2]), usize> = HashMap::new();
    index.insert(key(h.initial, init_t), 0);
    let mut order = vec![(h.initial, init_t)];
    let mut delta = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (s, t) = order[i];
        for l in 0..nl {
            let g = h.decode(l);
            let t2 = [trackers[0].dfa.step(t[0] as usize, g.env) as u32, trackers[1].dfa.step(t[1] as usize, g.env) as u32];
            let target = h.step(s, l);
            let keep = trackers[0].contains(t2[0] as usize, g.class_p) && trackers[1].contains(t2[1] as usize, g.class_q);
            match (keep, target) {
                (true, Some(s2)) => {
                    let id = *index.entry(key(s2, t2)).or_insert_with(|| {
                        order.push((s2, t2));
                        queue.push_back(order.len() - 1);
                        order.len() - 1
                    });
                    delta.push(Some(id as u32));
                }
                _ => delta.push(None),
            }
        }
    }
    Ok(ComposedSystem {
        env: h.env,
        num_classes: h.num_classes,
        states: order.iter().map(|(s, t)| ComposedState { local: h.states[*s].local, tracker: Some(*t) }).collect(),
        outputs: order.iter().map(|(s, _)| h.outputs[*s]).collect(),
        initial: 0,
        delta,
        filtered: true,
    })
}
