//! Moore machines with dense input alphabets.

use std::collections::HashMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::vars::{Valuation, VarSet, VarTable};

/// Total Moore machine; inputs are indices `0..num_inputs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MooreMachine {
    pub num_inputs: usize,
    pub initial: usize,
    pub labels: Vec<Valuation>,
    /// `delta[state * num_inputs + input]`
    pub delta: Vec<u32>,
}

impl MooreMachine {
    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    pub fn step(&self, s: usize, input: usize) -> usize {
        self.delta[s * self.num_inputs + input] as usize
    }

    pub fn output(&self, s: usize) -> Valuation {
        self.labels[s]
    }

    /// Outputs along an input word, starting with the initial label.
    pub fn run(&self, inputs: &[usize]) -> Vec<Valuation> {
        let mut s = self.initial;
        let mut out = vec![self.labels[s]];
        for i in inputs {
            s = self.step(s, *i);
            out.push(self.labels[s]);
        }
        out
    }

    /// Block of each state under the coarsest bisimulation.
    pub fn bisimulation(&self) -> Vec<u32> {
        let n = self.num_states();
        let mut ids: HashMap<Valuation, u32> = HashMap::new();
        let mut block: Vec<u32> = self
            .labels
            .iter()
            .map(|l| {
                let fresh = ids.len() as u32;
                *ids.entry(*l).or_insert(fresh)
            })
            .collect();
        let mut count = ids.len();
        loop {
            let mut sigs: HashMap<Vec<u32>, u32> = HashMap::new();
            let next: Vec<u32> = (0..n)
                .map(|s| {
                    let mut sig = vec![block[s]];
                    sig.extend((0..self.num_inputs).map(|i| block[self.step(s, i)]));
                    let fresh = sigs.len() as u32;
                    *sigs.entry(sig).or_insert(fresh)
                })
                .collect();
            block = next;
            if sigs.len() == count {
                return block;
            }
            count = sigs.len();
        }
    }

    /// Minimal machine over the reachable part, numbered breadth-first.
    /// Returns the machine and, for each new state, one original state.
    pub fn minimize(&self) -> (MooreMachine, Vec<usize>) {
        let block = self.bisimulation();
        let mut rep_of_block: HashMap<u32, usize> = HashMap::new();
        for (s, b) in block.iter().enumerate() {
            rep_of_block.entry(*b).or_insert(s);
        }
        let mut order = vec![rep_of_block[&block[self.initial]]];
        let mut index: HashMap<u32, usize> = HashMap::from([(block[self.initial], 0)]);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            for inp in 0..self.num_inputs {
                let b = block[self.step(s, inp)];
                let id = *index.entry(b).or_insert_with(|| {
                    order.push(rep_of_block[&b]);
                    order.len() - 1
                });
                delta.push(id as u32);
            }
            i += 1;
        }
        let labels = order.iter().map(|s| self.labels[*s]).collect();
        (MooreMachine { num_inputs: self.num_inputs, initial: 0, labels, delta }, order)
    }

    /// Graphviz rendering with input names given by `input_name`.
    pub fn to_dot(&self, name: &str, vars: &VarTable, outputs: VarSet, input_name: &dyn Fn(usize) -> String) -> String {
        let mut out = String::new();
        writeln!(out, "digraph \"{name}\" {{\n  rankdir=LR;\n  __init [shape=point];").unwrap();
        for s in 0..self.num_states() {
            let label = vars.show(self.labels[s].inter(outputs));
            writeln!(out, "  {s} [shape=box, label=\"{s}: {label}\"];").unwrap();
        }
        writeln!(out, "  __init -> {};", self.initial).unwrap();
        for s in 0..self.num_states() {
            let mut by_target: Vec<(usize, Vec<String>)> = Vec::new();
            for i in 0..self.num_inputs {
                let t = self.step(s, i);
                match by_target.iter_mut().find(|(x, _)| *x == t) {
                    Some((_, v)) => v.push(input_name(i)),
                    None => by_target.push((t, vec![input_name(i)])),
                }
            }
            for (t, names) in by_target {
                writeln!(out, "  {s} -> {t} [label=\"{}\"];", names.join("\\n")).unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimize_merges_bisimilar_states() {
        // states 0 and 1 behave the same; 2 differs in its label
        let m = MooreMachine {
            num_inputs: 2,
            initial: 0,
            labels: vec![VarSet(1), VarSet(1), VarSet(0), VarSet(0)],
            delta: vec![1, 2, 0, 2, 2, 0, 3, 3],
        };
        let (min, reps) = m.minimize();
        assert_eq!(min.num_states(), 2);
        assert_eq!(reps, vec![0, 2]);
        for w in [vec![0, 1, 1, 0], vec![1, 1, 0, 0, 1]] {
            assert_eq!(min.run(&w), m.run(&w));
        }
    }
}
