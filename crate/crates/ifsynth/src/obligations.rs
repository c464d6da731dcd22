//! Assumptions and guarantees between the two components.
//!
//! The assume arena of a component lets the environment announce, at every
//! step, the information class of the environment word so far together with
//! the environment inputs the component observes. The arena tracks every
//! environment word consistent with the announcements; a node is losing as
//! soon as one of them has violated the specification.
//!
//! Guarantees are monitors over the guaranteeing component's observed
//! environment inputs and its outputs read by the other component.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::automata::{Dfa, MonitorDfa};
use crate::classes::{ClassSet, ClassTracker};
use crate::error::{Error, Result};
use crate::spec::{Architecture, ComponentId, SafetyFormula};
use crate::vars::{letters_in_order, Valuation, VarId, VarSet};

/// Largest number of tracked (monitor, class tracker) pairs per arena node.
pub const MAX_ARENA_NODES: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArenaNode {
    /// Sorted (monitor state, class tracker state) pairs.
    pub payload: Vec<(u32, u32)>,
    pub losing: bool,
}

/// Environment move of the arena: an announced class and an observed letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ArenaMove {
    pub class: usize,
    pub observed: usize,
}

#[derive(Clone, Debug)]
pub struct AssumeArena {
    pub component: ComponentId,
    pub outputs: VarSet,
    /// Environment inputs observed by the component.
    pub observed: VarSet,
    pub num_classes: usize,
    pub nodes: Vec<ArenaNode>,
    /// `edges[node][output letter]` lists consistent moves and their targets.
    /// Losing nodes have no edges.
    pub edges: Vec<Vec<Vec<(usize, usize)>>>,
}

impl AssumeArena {
    pub fn num_moves(&self) -> usize {
        self.num_classes * self.observed.num_letters()
    }

    pub fn move_index(&self, m: ArenaMove) -> usize {
        m.class * self.observed.num_letters() + m.observed
    }

    pub fn decode_move(&self, idx: usize) -> ArenaMove {
        let nx = self.observed.num_letters();
        ArenaMove { class: idx / nx, observed: idx % nx }
    }
}

pub fn build_assume_arena(phi: &SafetyFormula, arch: &Architecture, cs: &ClassSet) -> Result<AssumeArena> {
    let c = phi.component;
    if cs.env != arch.env {
        return Err(Error::Alphabet("classes must range over all environment outputs".into()));
    }
    let monitor = phi.monitor()?;
    let tracker = cs.tracker();
    let env = arch.env;
    let outputs = arch.outputs(c);
    let observed = arch.env_inputs(c);
    let (ne, no, nx) = (env.num_letters(), outputs.num_letters(), observed.num_letters());
    let obs_of: Vec<usize> = (0..ne).map(|e| env.translate(e, observed)).collect();
    let mstep = |m: usize, e: usize, o: usize| monitor.step_val(m, env.decode(e).union(outputs.decode(o)));
    let mut arena = AssumeArena {
        component: c,
        outputs,
        observed,
        num_classes: cs.len(),
        nodes: Vec::new(),
        edges: Vec::new(),
    };
    let mut index: HashMap<Vec<(u32, u32)>, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |payload: Vec<(u32, u32)>, arena: &mut AssumeArena, queue: &mut VecDeque<usize>| -> Result<usize> {
        if let Some(id) = index.get(&payload) {
            return Ok(*id);
        }
        if arena.nodes.len() >= MAX_ARENA_NODES {
            return Err(Error::Limit(format!("assume arena exceeds {MAX_ARENA_NODES} nodes")));
        }
        let id = arena.nodes.len();
        let losing = payload.iter().any(|(m, _)| monitor.is_dead(*m as usize));
        index.insert(payload.clone(), id);
        arena.nodes.push(ArenaNode { payload, losing });
        arena.edges.push(Vec::new());
        queue.push_back(id);
        Ok(id)
    };
    intern(vec![(monitor.initial() as u32, tracker.dfa.initial() as u32)], &mut arena, &mut queue)?;
    while let Some(id) = queue.pop_front() {
        if arena.nodes[id].losing {
            continue;
        }
        let payload = arena.nodes[id].payload.clone();
        let mut per_output = Vec::with_capacity(no);
        for o in 0..no {
            let mut buckets: Vec<Vec<(u32, u32)>> = vec![Vec::new(); cs.len() * nx];
            for &(m, t) in &payload {
                for e in 0..ne {
                    let t2 = tracker.dfa.step(t as usize, e);
                    let m2 = mstep(m as usize, e, o);
                    for k in 0..cs.len() {
                        if tracker.contains(t2, k) {
                            buckets[k * nx + obs_of[e]].push((m2 as u32, t2 as u32));
                        }
                    }
                }
            }
            let mut moves = Vec::new();
            for (mv, mut b) in buckets.into_iter().enumerate() {
                if b.is_empty() {
                    continue;
                }
                b.sort_unstable();
                b.dedup();
                moves.push((mv, intern(b, &mut arena, &mut queue)?));
            }
            per_output.push(moves);
        }
        arena.edges[id] = per_output;
    }
    Ok(arena)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GuaranteeKind {
    Class,
    Full,
}

impl FromStr for GuaranteeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "class" => Ok(GuaranteeKind::Class),
            "full" => Ok(GuaranteeKind::Full),
            _ => Err(Error::Problem(format!("unknown guarantee kind `{s}`"))),
        }
    }
}

impl fmt::Display for GuaranteeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GuaranteeKind::Class => "class",
            GuaranteeKind::Full => "full",
        })
    }
}

/// Guarantee that `provider` gives to the other component.
#[derive(Clone, Debug)]
pub struct Guarantee {
    pub kind: GuaranteeKind,
    pub provider: ComponentId,
    pub monitor: MonitorDfa,
}

/// Which copies of an input a full-information guarantee accepts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    /// The input is repeated as is.
    #[default]
    Copy,
    /// The input is repeated as is or negated, the same way throughout a trace.
    Either,
}

/// Full information: every observed environment input `i` is repeated one
/// step later on `f(i)`. `f` pairs observed inputs and communication outputs
/// in declaration order.
pub fn build_full_information(arch: &Architecture, provider: ComponentId, polarity: Polarity) -> Result<Guarantee> {
    let domain: Vec<VarId> = arch.env_inputs(provider).iter().collect();
    let range: Vec<VarId> = arch.comm_inputs(provider.other()).iter().collect();
    if domain.len() > range.len() {
        return Err(Error::Budget(format!(
            "{} observed inputs but only {} communication variables",
            domain.len(),
            range.len()
        )));
    }
    let map: Vec<(VarId, VarId)> = domain.iter().copied().zip(range.iter().copied()).collect();
    full_information_monitor(&map, provider, polarity)
}

/// Full information for an explicit map from inputs to communication outputs.
pub fn full_information_monitor(map: &[(VarId, VarId)], provider: ComponentId, polarity: Polarity) -> Result<Guarantee> {
    let vocab = map.iter().fold(VarSet::EMPTY, |s, (i, c)| s.with(*i).with(*c));
    // per pair: last input value, copy still possible, negation still possible
    type St = Option<Vec<(Option<bool>, bool, bool)>>;
    let init: St = Some(vec![(None, true, polarity == Polarity::Either); map.len()]);
    let (dfa, _) = Dfa::explore(
        vocab,
        init,
        |st: &St, l| {
            let st = st.as_ref()?;
            let val = vocab.decode(l);
            let next: Vec<_> = st
                .iter()
                .zip(map)
                .map(|(&(last, pos, neg), &(i, c))| {
                    let out = val.contains(c);
                    let (pos, neg) = match last {
                        Some(v) => (pos && out == v, neg && out != v),
                        None => (pos, neg),
                    };
                    (Some(val.contains(i)), pos, neg)
                })
                .collect();
            next.iter().all(|(_, p, n)| *p || *n).then_some(next)
        },
        |st| st.is_none(),
    );
    Ok(Guarantee { kind: GuaranteeKind::Full, provider, monitor: MonitorDfa::from_dead_dfa(dfa.minimize()) })
}

/// Class codes: class `k` is written as the `k`-th valuation of the
/// communication variables in the preference order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassEncoding {
    pub comm: VarSet,
    pub codes: Vec<Valuation>,
}

impl ClassEncoding {
    pub fn binary(comm: VarSet, classes: usize) -> Result<Self> {
        if classes > comm.num_letters() {
            return Err(Error::Budget(format!(
                "{classes} classes do not fit into {} communication variables",
                comm.len()
            )));
        }
        let order = letters_in_order(comm.len());
        Ok(ClassEncoding { comm, codes: order[..classes].iter().map(|l| comm.decode(*l)).collect() })
    }
}

/// Class guarantee: after every nonempty environment word, the next value
/// of the communication outputs is the code of the word's class. Classes are
/// seen through the provider's observed inputs.
pub fn build_class_guarantee(
    classes: &ClassSet,
    arch: &Architecture,
    provider: ComponentId,
    encoding: Option<ClassEncoding>,
) -> Result<Guarantee> {
    let comm = arch.comm_inputs(provider.other());
    let encoding = match encoding {
        Some(e) => e,
        None => ClassEncoding::binary(comm, classes.len())?,
    };
    if encoding.comm != comm || encoding.codes.len() != classes.len() {
        return Err(Error::Alphabet("encoding does not match the classes".into()));
    }
    let visible = arch.env_inputs(provider);
    let seen = classes.project(visible);
    let tracker: ClassTracker = seen.tracker();
    let vocab = visible.union(comm);
    // required code for each tracker state
    let mut required: Vec<Option<Valuation>> = Vec::with_capacity(tracker.members.len());
    for (t, mask) in tracker.members.iter().enumerate() {
        let codes: Vec<Valuation> =
            (0..classes.len()).filter(|k| mask >> k & 1 == 1).map(|k| encoding.codes[k]).collect();
        if codes.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::ClassConflict(format!(
                "tracker state {t} lies in classes with different codes"
            )));
        }
        required.push(codes.first().copied());
    }
    let init = Some((tracker.dfa.initial(), None::<Valuation>));
    let (dfa, _) = Dfa::explore(
        vocab,
        init,
        |st, l| {
            let (t, need) = (*st)?;
            let val = vocab.decode(l);
            if need.is_some_and(|r| val.inter(comm) != r) {
                return None;
            }
            let t2 = tracker.dfa.step(t, visible.encode(val));
            Some((t2, required[t2]))
        },
        |st| st.is_none(),
    );
    Ok(Guarantee { kind: GuaranteeKind::Class, provider, monitor: MonitorDfa::from_dead_dfa(dfa.minimize()) })
}
