// Composition, filtering and decomposition against lock-step simulation.

use std::collections::HashSet;

use ifsynth::assembly::{ClosedLoop, GlobalLetter};
use ifsynth::benchmarks::{generate_benchmark, Family};
use ifsynth::classes::ClassSet;
use ifsynth::obligations::GuaranteeKind;
use ifsynth::pipeline::{synthesize, Options, Run};
use ifsynth::spec::ComponentId;
use ifsynth::vars::VarSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn run(fam: Family, n: usize) -> Run {
    synthesize(&generate_benchmark(fam, n).unwrap(), &Options::default()).unwrap()
}

fn random_env_word(rng: &mut ChaCha8Rng, env: VarSet, len: usize) -> Vec<VarSet> {
    (0..len).map(|_| env.decode(rng.gen_range(0..env.num_letters()))).collect()
}

fn class_of(cs: &ClassSet, word: &[VarSet]) -> usize {
    let ks = cs.classes_of(word);
    assert_eq!(ks.len(), 1, "classes partition the nonempty words");
    ks[0]
}

const INSTANCES: [(Family, usize); 8] = [
    (Family::SeqTrans, 1),
    (Family::SeqTrans, 2),
    (Family::Delay, 1),
    (Family::Delay, 2),
    (Family::Conj, 1),
    (Family::Conj, 2),
    (Family::Disj, 1),
    (Family::Disj, 2),
];

#[test]
fn composition_matches_lock_step() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (fam, n) in INSTANCES {
        let r = run(fam, n);
        let [hp, hq] = r.hyper.as_ref().unwrap();
        let h = r.composed.as_ref().unwrap();
        for _ in 0..50 {
            let len = rng.gen_range(0..=8);
            let word = random_env_word(&mut rng, h.env, len);
            let (mut s, mut a, mut b) = (h.initial, hp.machine.initial, hq.machine.initial);
            for e in &word {
                let (kp, kq) = (rng.gen_range(0..h.num_classes[0]), rng.gen_range(0..h.num_classes[1]));
                s = h.step(s, h.letter(GlobalLetter { env: h.env.encode(*e), class_p: kp, class_q: kq })).unwrap();
                a = hp.machine.step(a, hp.input(kp, e.inter(hp.observed)));
                b = hq.machine.step(b, hq.input(kq, e.inter(hq.observed)));
                assert_eq!(h.outputs[s], [hp.machine.output(a), hq.machine.output(b)], "{fam}({n})");
            }
        }
    }
}

#[test]
fn decomposed_pair_reproduces_the_filtered_system() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (fam, n) in INSTANCES {
        let r = run(fam, n);
        let f = r.filtered.as_ref().unwrap();
        let [tp, tq] = r.locals.as_ref().unwrap();
        let lp = ClosedLoop::new(tp, tq, &r.problem.arch).unwrap();
        let cs = [&r.analysis[0].classes, &r.analysis[1].classes];
        for _ in 0..100 {
            let len = rng.gen_range(1..=8);
            let word = random_env_word(&mut rng, f.env, len);
            let (mut s, mut st) = (f.initial, lp.initial());
            assert_eq!(f.output(s), lp.output(st));
            for t in 0..word.len() {
                let g = GlobalLetter {
                    env: f.env.encode(word[t]),
                    class_p: class_of(cs[0], &word[..=t]),
                    class_q: class_of(cs[1], &word[..=t]),
                };
                s = f.step(s, f.letter(g)).expect("consistent announcements survive filtering");
                st = lp.step(st, word[t]).0;
                assert_eq!(f.output(s), lp.output(st), "{fam}({n}) {word:?} at {t}");
            }
        }
    }
}

#[test]
fn random_closed_loop_runs_stay_safe() {
    let r = run(Family::Delay, 2);
    let [tp, tq] = r.locals.as_ref().unwrap();
    let lp = ClosedLoop::new(tp, tq, &r.problem.arch).unwrap();
    let monitors = [r.problem.spec(ComponentId::P).monitor().unwrap(), r.problem.spec(ComponentId::Q).monitor().unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10_000 {
        let word = random_env_word(&mut rng, r.problem.arch.env, 20);
        let trace = lp.trace(&word);
        for m in &monitors {
            let mut s = m.initial();
            for l in &trace {
                s = m.step_val(s, *l);
                assert!(!m.is_dead(s), "{word:?}");
            }
        }
    }
}

#[test]
fn filter_keeps_exactly_the_consistently_reachable_states() {
    let r = run(Family::SeqTrans, 2);
    let h = r.composed.as_ref().unwrap();
    let f = r.filtered.as_ref().unwrap();
    let cs = [&r.analysis[0].classes, &r.analysis[1].classes];
    let depth = 6;
    // brute force over environment words with their true classes
    let mut expected: HashSet<[u32; 2]> = HashSet::from([h.states[h.initial].local]);
    let mut layer = vec![(Vec::new(), h.initial)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (w, s) in &layer {
            for e in 0..h.env.num_letters() {
                let mut w2: Vec<VarSet> = w.clone();
                w2.push(h.env.decode(e));
                let g = GlobalLetter { env: e, class_p: class_of(cs[0], &w2), class_q: class_of(cs[1], &w2) };
                let t = h.step(*s, h.letter(g)).unwrap();
                expected.insert(h.states[t].local);
                next.push((w2, t));
            }
        }
        layer = next;
    }
    let mut reached: HashSet<usize> = HashSet::from([f.initial]);
    let mut frontier = vec![f.initial];
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in frontier {
            for l in 0..f.num_letters() {
                if let Some(t) = f.step(s, l) {
                    if reached.insert(t) {
                        next.push(t);
                    }
                }
            }
        }
        frontier = next;
    }
    let got: HashSet<[u32; 2]> = reached.iter().map(|s| f.states[*s].local).collect();
    assert_eq!(got, expected);
}

#[test]
fn full_information_transmitters_separate_input_histories() {
    let options = Options { guarantee: GuaranteeKind::Full, ..Options::default() };
    for (fam, n) in [(Family::SeqTrans, 1), (Family::SeqTrans, 2), (Family::Delay, 2), (Family::Conj, 2)] {
        let r = synthesize(&generate_benchmark(fam, n).unwrap(), &options).unwrap();
        assert!(r.is_verified(), "{fam}({n})");
        let t = r.local(ComponentId::Q).unwrap();
        let env = r.problem.arch.env;
        let mut seen: HashSet<Vec<VarSet>> = HashSet::new();
        let words: Vec<Vec<VarSet>> = (0..env.num_letters().pow(4))
            .map(|k| (0..4).map(|j| env.decode(k / env.num_letters().pow(j) % env.num_letters())).collect())
            .collect();
        for w in words {
            let mut s = t.machine.initial;
            let outs: Vec<VarSet> = w
                .iter()
                .map(|e| {
                    s = t.step(s, e.inter(t.inputs));
                    t.output(s)
                })
                .collect();
            assert!(seen.insert(outs), "{fam}({n}): {w:?} is not transmitted");
        }
    }
}
