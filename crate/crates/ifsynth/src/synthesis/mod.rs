//! Synthesis of hyper implementations from assume arenas and guarantees.

pub mod game;
pub mod machine;

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::obligations::{AssumeArena, Guarantee};
use crate::spec::ComponentId;
use crate::vars::{letters_in_order, Valuation, VarSet, VarTable};
pub use game::{solve_safety, Player, SafetyGame, SafetySolution};
pub use machine::MooreMachine;

/// Moore machine reading an information class and the observed environment
/// inputs at every step. Input `class * 2^|observed| + x` pairs class
/// `class` with observed letter `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperImplementation {
    pub component: ComponentId,
    pub num_classes: usize,
    pub observed: VarSet,
    pub outputs: VarSet,
    pub machine: MooreMachine,
    /// Per transition: the announcement is inconsistent with the history, and
    /// the transition is a self-loop.
    pub inconsistent: Vec<bool>,
}

impl HyperImplementation {
    pub fn input(&self, class: usize, observed: Valuation) -> usize {
        class * self.observed.num_letters() + self.observed.encode(observed)
    }

    pub fn num_states(&self) -> usize {
        self.machine.num_states()
    }

    pub fn to_dot(&self, name: &str, vars: &VarTable) -> String {
        let nx = self.observed.num_letters();
        self.machine.to_dot(name, vars, self.outputs, &|i| {
            format!("c{} {}", i / nx, vars.show(self.observed.decode(i % nx)))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnrealizableLevel {
    /// The announced classes do not determine a safe output.
    Arena,
    /// The component cannot meet the guarantees it owes.
    Guarantee,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnrealizableDiagnostic {
    pub component: ComponentId,
    pub level: UnrealizableLevel,
    pub message: String,
}

#[derive(Clone, Debug)]
pub enum SynthesisOutcome {
    Realizable(HyperImplementation),
    Unrealizable(UnrealizableDiagnostic),
}

/// Largest synthesis game explored.
pub const MAX_GAME_NODES: usize = 2_000_000;

struct BuiltGame {
    game: SafetyGame,
    /// Output letter chosen by each successor of a system node.
    sys_outputs: Vec<Vec<usize>>,
    /// Arena move taken by each successor of an environment node.
    env_moves: Vec<Vec<usize>>,
}

fn build_game(arena: &AssumeArena, guarantees: &[&Guarantee]) -> Result<BuiltGame> {
    let allowed = arena.observed.union(arena.outputs);
    for g in guarantees {
        if !g.monitor.vocab().is_subset(allowed) {
            return Err(Error::Vocabulary("guarantee reads variables the component cannot see".into()));
        }
    }
    let order = letters_in_order(arena.outputs.len());
    let mut built = BuiltGame { game: SafetyGame::default(), sys_outputs: Vec::new(), env_moves: Vec::new() };
    let mut sys_index: HashMap<(usize, Vec<u32>), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let init_g: Vec<u32> = guarantees.iter().map(|g| g.monitor.initial() as u32).collect();
    let mut add_sys = |key: (usize, Vec<u32>), built: &mut BuiltGame, queue: &mut VecDeque<usize>| -> Result<usize> {
        if let Some(v) = sys_index.get(&key) {
            return Ok(*v);
        }
        if built.game.num_nodes() >= MAX_GAME_NODES {
            return Err(Error::Limit(format!("synthesis game exceeds {MAX_GAME_NODES} nodes")));
        }
        let losing = arena.nodes[key.0].losing
            || key.1.iter().zip(guarantees).any(|(s, g)| g.monitor.is_dead(*s as usize));
        let v = built.game.add_node(Player::System, losing);
        built.sys_outputs.push(Vec::new());
        built.env_moves.push(Vec::new());
        sys_index.insert(key, v);
        queue.push_back(v);
        Ok(v)
    };
    let mut keys: Vec<(usize, Vec<u32>)> = Vec::new();
    let root = add_sys((0, init_g.clone()), &mut built, &mut queue)?;
    keys.push((0, init_g));
    built.game.initial = root;
    while let Some(v) = queue.pop_front() {
        if built.game.losing[v] {
            continue;
        }
        let (a, gs) = keys[v].clone();
        for &o in &order {
            let e = built.game.add_node(Player::Env, false);
            built.sys_outputs.push(Vec::new());
            built.env_moves.push(Vec::new());
            keys.push((usize::MAX, Vec::new()));
            built.game.succ[v].push(e);
            built.sys_outputs[v].push(o);
            let out = arena.outputs.decode(o);
            for &(mv, target) in &arena.edges[a][o] {
                let x = arena.observed.decode(arena.decode_move(mv).observed);
                let g2: Vec<u32> = gs
                    .iter()
                    .zip(guarantees)
                    .map(|(s, g)| g.monitor.step_val(*s as usize, x.union(out)) as u32)
                    .collect();
                let before = built.game.num_nodes();
                let w = add_sys((target, g2.clone()), &mut built, &mut queue)?;
                if built.game.num_nodes() > before {
                    keys.push((target, g2));
                }
                built.game.succ[e].push(w);
                built.env_moves[e].push(mv);
            }
        }
    }
    Ok(built)
}

/// Solves the game of the arena restricted by `guarantees` and extracts a
/// minimal hyper implementation. Ties go to the first output in the
/// preference order.
pub fn synthesize_component(arena: &AssumeArena, guarantees: &[&Guarantee]) -> Result<SynthesisOutcome> {
    let built = build_game(arena, guarantees)?;
    let sol = solve_safety(&built.game);
    if !sol.realizable(&built.game) {
        let arena_only = build_game(arena, &[])?;
        let level = if solve_safety(&arena_only.game).realizable(&arena_only.game) {
            UnrealizableLevel::Guarantee
        } else {
            UnrealizableLevel::Arena
        };
        let message = match level {
            UnrealizableLevel::Arena => "no output strategy is safe for every environment word consistent with the announced classes",
            UnrealizableLevel::Guarantee => "the specification is realizable from the classes, but not together with the owed guarantees",
        };
        return Ok(SynthesisOutcome::Unrealizable(UnrealizableDiagnostic {
            component: arena.component,
            level,
            message: message.into(),
        }));
    }
    let g = &built.game;
    let nm = arena.num_moves();
    let mut index: HashMap<usize, usize> = HashMap::from([(g.initial, 0)]);
    let mut order = vec![g.initial];
    let mut labels = Vec::new();
    let mut delta = Vec::new();
    let mut inconsistent = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        let pick = sol.strategy[v].expect("winning system node has a strategy");
        labels.push(arena.outputs.decode(built.sys_outputs[v][pick]));
        let e = g.succ[v][pick];
        for mv in 0..nm {
            let target = match built.env_moves[e].iter().position(|m| *m == mv) {
                Some(k) => {
                    let w = g.succ[e][k];
                    inconsistent.push(false);
                    *index.entry(w).or_insert_with(|| {
                        order.push(w);
                        order.len() - 1
                    })
                }
                None => {
                    inconsistent.push(true);
                    i
                }
            };
            delta.push(target as u32);
        }
        i += 1;
    }
    let raw = MooreMachine { num_inputs: nm, initial: 0, labels, delta };
    let (machine, reps) = raw.minimize();
    let inconsistent = reps.iter().flat_map(|r| inconsistent[r * nm..(r + 1) * nm].to_vec()).collect();
    Ok(SynthesisOutcome::Realizable(HyperImplementation {
        component: arena.component,
        num_classes: arena.num_classes,
        observed: arena.observed,
        outputs: arena.outputs,
        machine,
        inconsistent,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{generate_benchmark, Family};
    use crate::classes::{compute_classes, DEFAULT_CLASS_CAP};
    use crate::distinguishability::build_rho;
    use crate::obligations::{build_assume_arena, build_class_guarantee, build_full_information, Polarity};
    use crate::spec::{parse_problem, ProblemInstance};

    fn arena_and_classes(p: &ProblemInstance, c: ComponentId) -> (AssumeArena, crate::classes::ClassSet) {
        let rho = build_rho(p.spec(c), &p.arch).unwrap();
        let cs = compute_classes(&rho, DEFAULT_CLASS_CAP).unwrap();
        (build_assume_arena(p.spec(c), &p.arch, &cs).unwrap(), cs)
    }

    fn realizable(o: SynthesisOutcome) -> HyperImplementation {
        match o {
            SynthesisOutcome::Realizable(h) => h,
            SynthesisOutcome::Unrealizable(d) => panic!("unrealizable: {d:?}"),
        }
    }

    #[test]
    fn running_example_machines() {
        let p = generate_benchmark(Family::SeqTrans, 1).unwrap();
        let (ra, rcs) = arena_and_classes(&p, ComponentId::P);
        let (ta, _) = arena_and_classes(&p, ComponentId::Q);
        let rx = realizable(synthesize_component(&ra, &[]).unwrap());
        assert_eq!(rx.num_states(), 2);
        let b_out = p.vars.set_of(&["b_out"]).unwrap();
        // the receiver repeats the announced class one step later
        assert_eq!(rx.machine.output(rx.machine.initial), b_out);
        let s = rx.machine.step(rx.machine.initial, rx.input(1, VarSet::EMPTY));
        assert_eq!(rx.machine.output(s), VarSet::EMPTY);
        assert_eq!(rx.machine.output(rx.machine.step(s, rx.input(0, VarSet::EMPTY))), b_out);

        let g = build_class_guarantee(&rcs, &p.arch, ComponentId::Q, None).unwrap();
        let tx = realizable(synthesize_component(&ta, &[&g]).unwrap());
        assert_eq!(tx.num_states(), 2);
        let b_in = p.vars.set_of(&["b_in"]).unwrap();
        let c_b = p.vars.set_of(&["c_b"]).unwrap();
        let s = tx.machine.step(tx.machine.initial, tx.input(0, b_in));
        assert_eq!(tx.machine.output(s), c_b);
        assert_eq!(tx.machine.output(tx.machine.step(s, tx.input(0, VarSet::EMPTY))), VarSet::EMPTY);

        let full = build_full_information(&p.arch, ComponentId::Q, Polarity::Copy).unwrap();
        assert_eq!(realizable(synthesize_component(&ta, &[&full]).unwrap()).num_states(), 2);
        // with either polarity allowed, the first input picks the polarity
        let either = build_full_information(&p.arch, ComponentId::Q, Polarity::Either).unwrap();
        assert!(realizable(synthesize_component(&ta, &[&either]).unwrap()).num_states() > 2);
    }

    #[test]
    fn same_step_echo_is_unrealizable_from_classes() {
        let p = parse_problem(
            r#"{
            "variables": ["b_in", "c_b", "b_out"],
            "env_outputs": ["b_in"],
            "components": [
                {"name": "r", "inputs": ["c_b"], "outputs": ["b_out"], "spec": "G (b_in <-> b_out)"},
                {"name": "t", "inputs": ["b_in"], "outputs": ["c_b"], "spec": "true"}
            ]
        }"#,
        )
        .unwrap();
        let (ra, _) = arena_and_classes(&p, ComponentId::P);
        match synthesize_component(&ra, &[]).unwrap() {
            SynthesisOutcome::Unrealizable(d) => {
                assert_eq!(d.level, UnrealizableLevel::Arena);
                assert_eq!(d.component, ComponentId::P);
            }
            SynthesisOutcome::Realizable(_) => panic!("expected unrealizable"),
        }
    }

    #[test]
    fn unmeetable_guarantee_is_reported_at_guarantee_level() {
        let p = generate_benchmark(Family::SeqTrans, 1).unwrap();
        let (ta, _) = arena_and_classes(&p, ComponentId::Q);
        // the transmitter's own output must never be set, yet it has to copy b_in
        let b_in = p.vars.id("b_in").unwrap();
        let c_b = p.vars.id("c_b").unwrap();
        let copy = crate::obligations::full_information_monitor(&[(b_in, c_b)], ComponentId::Q, Polarity::Copy).unwrap();
        let silent = Guarantee {
            kind: crate::obligations::GuaranteeKind::Full,
            provider: ComponentId::Q,
            monitor: crate::automata::ltl_to_monitor(
                &crate::ltl::Ltl::globally(crate::ltl::Ltl::not(crate::ltl::Ltl::var(c_b))),
                VarSet::singleton(c_b),
            )
            .unwrap(),
        };
        match synthesize_component(&ta, &[&copy, &silent]).unwrap() {
            SynthesisOutcome::Unrealizable(d) => assert_eq!(d.level, UnrealizableLevel::Guarantee),
            SynthesisOutcome::Realizable(_) => panic!("expected unrealizable"),
        }
    }
}
