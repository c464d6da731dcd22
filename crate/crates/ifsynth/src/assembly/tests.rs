use super::*;
use crate::benchmarks::{generate_benchmark, Family};
use crate::pipeline::{synthesize, Options, Run};
use crate::spec::{Architecture, ComponentId};
use crate::vars::VarSet;

fn run(f: Family, n: usize) -> Run {
    synthesize(&generate_benchmark(f, n).unwrap(), &Options::default()).unwrap()
}

fn parts(r: &Run) -> (&ComposedSystem, &ComposedSystem, &[LocalImplementation; 2]) {
    (r.composed.as_ref().unwrap(), r.filtered.as_ref().unwrap(), r.locals.as_ref().unwrap())
}

#[test]
fn running_example_end_to_end() {
    let r = run(Family::SeqTrans, 1);
    assert!(r.is_realizable());
    assert!(r.is_verified(), "{:?}", r.report);
}

#[test]
fn filter_drops_inconsistent_announcement() {
    let r = run(Family::SeqTrans, 1);
    let (h, f, _) = parts(&r);
    // !b_in announced together with the class of words ending in b_in
    let bad = h.letter(GlobalLetter { env: 0, class_p: 0, class_q: 0 });
    assert!(h.step(h.initial, bad).is_some());
    assert!(f.step(f.initial, bad).is_none());
    let good = h.letter(GlobalLetter { env: 1, class_p: 0, class_q: 0 });
    assert!(f.step(f.initial, good).is_some());
}

#[test]
fn filter_is_idempotent_and_never_adds_transitions() {
    for (fam, n) in [(Family::SeqTrans, 2), (Family::Delay, 2), (Family::Disj, 2)] {
        let r = run(fam, n);
        let (h, f, _) = parts(&r);
        let cs = &r.analysis;
        let again = filter_consistent(f, &cs[0].classes, &cs[1].classes).unwrap();
        assert_eq!(&again, f);
        assert!(f.num_transitions() <= h.num_transitions());
        for s in 0..f.num_states() {
            for l in 0..f.num_letters() {
                if let Some(t) = f.step(s, l) {
                    let src = h.states.iter().position(|x| x.local == f.states[s].local).unwrap();
                    let dst = h.states.iter().position(|x| x.local == f.states[t].local).unwrap();
                    assert_eq!(h.step(src, l), Some(dst));
                }
            }
        }
    }
}

#[test]
fn single_class_filter_keeps_every_transition() {
    let r = run(Family::SeqTrans, 1);
    let q = &r.analysis[1].classes;
    assert_eq!(q.len(), 1);
    let f = r.filtered.as_ref().unwrap();
    // only announcements for the receiver are ever pruned
    for s in 0..f.num_states() {
        for l in 0..f.num_letters() {
            let g = f.decode(l);
            let sibling = f.letter(GlobalLetter { class_p: 1 - g.class_p, ..g });
            assert!(f.step(s, l).is_some() || f.step(s, sibling).is_some());
        }
    }
}

#[test]
fn receiver_implements_delayed_echo() {
    let r = run(Family::SeqTrans, 1);
    let (_, _, locals) = parts(&r);
    let rx = &locals[0];
    let c_b = r.problem.vars.set_of(&["c_b"]).unwrap();
    let b_out = r.problem.vars.set_of(&["b_out"]).unwrap();
    assert_eq!(rx.inputs, c_b);
    for word in 0..64u32 {
        let xs: Vec<VarSet> = (0..6).map(|k| if word >> k & 1 == 1 { c_b } else { VarSet::EMPTY }).collect();
        let mut s = rx.machine.initial;
        for x in &xs {
            s = rx.step(s, *x);
            assert_eq!(rx.output(s) == b_out, *x == c_b);
        }
    }
}

#[test]
fn constant_transmitter_is_caught() {
    let r = run(Family::SeqTrans, 1);
    let (_, _, locals) = parts(&r);
    let p = &r.problem;
    let mute = LocalImplementation::constant(ComponentId::Q, &p.arch, VarSet::EMPTY);
    let v = verify_closed(&locals[0], &mute, p.spec(ComponentId::P), p.spec(ComponentId::Q), &p.arch, 50).unwrap();
    let ClosedVerdict::Counterexample { word, violated } = v else { panic!("expected a counterexample") };
    assert_eq!(violated, vec![ComponentId::P]);
    assert!(word.len() >= 2);
    let ifa = check_prefix_ifa(&locals[0], &mute, p.spec(ComponentId::P), &p.arch, 4).unwrap();
    let IfaVerdict::Violated { u, w } = ifa else { panic!("expected a violation") };
    assert_ne!(u, w);
}

#[test]
fn composing_with_a_constant_machine_injects_its_outputs() {
    let r = run(Family::SeqTrans, 1);
    let p = &r.problem;
    let hp = r.hyper(ComponentId::P).unwrap();
    let mut hq = r.hyper(ComponentId::Q).unwrap().clone();
    let c_b = p.vars.set_of(&["c_b"]).unwrap();
    hq.machine = crate::synthesis::MooreMachine {
        num_inputs: hq.machine.num_inputs,
        initial: 0,
        labels: vec![c_b],
        delta: vec![0; hq.machine.num_inputs],
    };
    let h = compose(hp, &hq, &p.arch).unwrap();
    assert_eq!(h.num_states(), hp.num_states());
    for s in 0..h.num_states() {
        assert_eq!(h.outputs[s][1], c_b);
        assert_eq!(h.outputs[s][0], hp.machine.output(h.states[s].local[0] as usize));
    }
}

#[test]
fn delay_needs_knowledge_sets() {
    let p = generate_benchmark(Family::Delay, 2).unwrap();
    let min = Options { decomposition: DecompositionMode::MinSuccessor, ..Options::default() };
    let r = synthesize(&p, &min).unwrap();
    assert!(matches!(r.report.verification, Some(ClosedVerdict::Counterexample { .. })));
    assert!(run(Family::Delay, 2).is_verified());
}

#[test]
fn bidirectional_architecture_is_rejected() {
    let (a, b, c, d) = (VarSet::singleton(0), VarSet::singleton(1), VarSet::singleton(2), VarSet::singleton(3));
    // q reads c from p while p reads b from q
    let arch = Architecture::new([b, c.union(a)], [c.union(d), b], a, VarSet::from_ids([0, 1, 2, 3])).unwrap();
    assert!(arch.is_bidirectional());
    assert!(matches!(upstream(&arch), Err(crate::Error::Bidirectional)));
}

#[test]
fn unfiltered_systems_are_not_decomposed() {
    let r = run(Family::SeqTrans, 1);
    let h = r.composed.as_ref().unwrap();
    assert!(decompose(h, ComponentId::P, &r.problem.arch, DecompositionMode::KnowledgeSet).is_err());
}
