// Invariants checked against the reference implementations in `common`.

mod common;

use ifsynth::automata::Guard;
use ifsynth::benchmarks::{generate_benchmark, Family};
use ifsynth::ltl::{check_safety, parse, SafetyVerdict};
use ifsynth::pipeline::{synthesize, Options};
use ifsynth::spec::{eval_prefix, ComponentId, FiniteTrace, SafetyFormula};
use ifsynth::synthesis::solve_safety;
use ifsynth::vars::{VarSet, VarTable};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn words_over(vocab: VarSet, max_len: usize) -> Vec<Vec<VarSet>> {
    all_words(vocab.num_letters(), max_len).into_iter().map(|w| w.into_iter().map(|l| vocab.decode(l)).collect()).collect()
}

/// Delay(1) instance; the receiver's vocabulary is {i, o}.
fn delay_receiver_vocab() -> (ifsynth::spec::ProblemInstance, VarSet) {
    let p = generate_benchmark(Family::Delay, 1).unwrap();
    let vocab = p.spec(ComponentId::P).vocab;
    (p, vocab)
}

fn random_safety(seed: u64) -> Option<SafetyFormula> {
    let (p, vocab) = delay_receiver_vocab();
    let vars: Vec<u32> = vocab.iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SafetyFormula::new(random_formula(&mut rng, &vars, 4), ComponentId::P, &p.arch).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bad_prefixes_are_closed_under_extension(seed in any::<u64>()) {
        let Some(phi) = random_safety(seed) else { return Ok(()) };
        for w in words_over(phi.vocab, 4) {
            if !eval_prefix(&FiniteTrace::new(phi.vocab, w.clone()), &phi).unwrap() {
                for l in 0..phi.vocab.num_letters() {
                    let mut w2 = w.clone();
                    w2.push(phi.vocab.decode(l));
                    prop_assert!(!eval_prefix(&FiniteTrace::new(phi.vocab, w2), &phi).unwrap());
                }
            }
        }
    }

    #[test]
    fn nnf_preserves_finite_verdicts(seed in any::<u64>()) {
        let (_, vocab) = delay_receiver_vocab();
        let vars: Vec<u32> = vocab.iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_formula(&mut rng, &vars, 4);
        let g = f.nnf();
        prop_assert!(g.is_nnf());
        for w in words_over(vocab, 6).into_iter().filter(|w| !w.is_empty()) {
            for weak in [true, false] {
                prop_assert_eq!(holds(&f, &w, 0, weak), holds(&g, &w, 0, weak), "{:?} {:?}", g, w);
            }
        }
        if check_safety(&f) == SafetyVerdict::Safety {
            for w in words_over(vocab, 3) {
                prop_assert_eq!(alive_by_extension(&f, &w, vocab, 4), alive_by_extension(&g, &w, vocab, 4));
            }
        }
    }

    #[test]
    fn solve_safety_is_the_greatest_fixpoint(seed in any::<u64>(), n in 1usize..80) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_game(&mut rng, n);
        let sol = solve_safety(&g);
        let win = naive_winning(&g);
        prop_assert_eq!(&sol.winning, &win);
        for v in 0..n {
            if let Some(k) = sol.strategy[v] {
                prop_assert!(win[v] && win[g.succ[v][k]]);
            }
        }
    }

    #[test]
    fn minimization_is_canonical(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ab = VarSet::from_ids([0, 1]);
        let x = random_dfa(&mut rng, ab, 6);
        let m = x.minimize();
        prop_assert!(m.num_states() <= x.num_states());
        prop_assert_eq!(m.minimize(), m.clone());
        prop_assert_eq!(x.to_nfa().determinize().minimize(), m);
    }

    #[test]
    fn guard_operations_are_pointwise(a in any::<u8>(), b in any::<u8>()) {
        let v = VarSet::from_ids([0, 1, 3]);
        let ga = Guard::from_fn(v, |l| a >> l & 1 == 1);
        let gb = Guard::from_fn(v, |l| b >> l & 1 == 1);
        for l in 0..8 {
            let (x, y) = (a >> l & 1 == 1, b >> l & 1 == 1);
            prop_assert_eq!(ga.and(&gb).contains(l), x && y);
            prop_assert_eq!(ga.or(&gb).contains(l), x || y);
            prop_assert_eq!(ga.not().contains(l), !x);
        }
        let keep = VarSet::from_ids([0, 3]);
        let ex = ga.exists(keep);
        for l in 0..4 {
            let lifted = (0..8).filter(|m| v.translate(*m, keep) == l).any(|m| ga.contains(m));
            prop_assert_eq!(ex.contains(l), lifted);
        }
    }
}

#[test]
fn delayed_echo_verdicts_match_extension_search() {
    let p = generate_benchmark(Family::Delay, 2).unwrap();
    let phi = p.spec(ComponentId::P);
    for w in words_over(phi.vocab, 6) {
        let alive = eval_prefix(&FiniteTrace::new(phi.vocab, w.clone()), phi).unwrap();
        assert_eq!(alive, alive_by_extension(&phi.ltl, &w, phi.vocab, 8), "{w:?}");
    }
}

#[test]
fn echo_monitor_matches_extension_search_to_depth_eight() {
    let vars = VarTable::from_names(&["b_in", "b_out"]).unwrap();
    let f = parse("G (b_in <-> X b_out)", &vars).unwrap();
    let m = ifsynth::automata::ltl_to_monitor(&f, vars.all()).unwrap();
    assert_eq!((m.live_states(), m.num_states()), (3, 4));
    for w in words_over(vars.all(), 8) {
        let s = w.iter().fold(m.initial(), |s, l| m.step_val(s, *l));
        assert_eq!(!m.is_dead(s), alive_by_extension(&f, &w, vars.all(), 2), "{w:?}");
    }
}

#[test]
fn winning_strategies_keep_every_prefix_alive() {
    for fam in Family::ALL {
        for n in 1..=2 {
            let p = generate_benchmark(fam, n).unwrap();
            let run = synthesize(&p, &Options::default()).unwrap();
            let h = run.hyper(ComponentId::P).unwrap();
            let classes = &run.analysis[ComponentId::P.index()].classes;
            let phi = p.spec(ComponentId::P);
            for word in words_over(p.arch.env, 6) {
                let inputs: Vec<usize> = (1..=word.len())
                    .map(|t| h.input(classes.classes_of(&word[..t])[0], word[t - 1].inter(h.observed)))
                    .collect();
                let out = h.machine.run(&inputs);
                let trace: Vec<VarSet> = word.iter().zip(&out).map(|(e, o)| e.union(*o)).collect();
                assert!(eval_prefix(&FiniteTrace::new(phi.vocab, trace), phi).unwrap(), "{fam}({n}) {word:?}");
            }
        }
    }
}
