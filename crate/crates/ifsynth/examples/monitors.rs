// Parsing safety LTL and building deterministic monitors.

use ifsynth::automata::ltl_to_monitor;
use ifsynth::ltl::{check_safety, parse, SafetyVerdict};
use ifsynth::spec::{eval_prefix, FiniteTrace, SafetyFormula};
use ifsynth::benchmarks::{generate_benchmark, Family};
use ifsynth::spec::ComponentId;
use ifsynth::vars::VarTable;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let vars = VarTable::from_names(&["req", "grant"])?;
    let f = parse("G (req -> X grant) & G !(grant & X grant)", &vars)?;
    println!("{}  size {}", f.display(&vars), f.size());
    let m = ltl_to_monitor(&f, vars.all())?;
    println!("monitor: {} states, {} live", m.num_states(), m.live_states());

    let (req, grant) = (vars.set_of(&["req"])?, vars.set_of(&["grant"])?);
    let ok = [req, grant, Default::default()];
    let bad = [req, Default::default()];
    let run = |w: &[_]| w.iter().fold(m.initial(), |s, v| m.step_val(s, *v));
    println!("req,grant,- alive: {}", !m.is_dead(run(&ok)));
    println!("req,-      alive: {}", !m.is_dead(run(&bad)));

    let live = parse("G F grant", &vars)?;
    match check_safety(&live) {
        SafetyVerdict::Rejected(why) => println!("G F grant rejected: {why}"),
        SafetyVerdict::Safety => return Err("liveness accepted".into()),
    }

    let p = generate_benchmark(Family::SeqTrans, 1)?;
    let phi: &SafetyFormula = p.spec(ComponentId::P);
    let b_in = p.vars.set_of(&["b_in"])?;
    let trace = FiniteTrace::new(phi.vocab, vec![b_in, Default::default()]);
    println!("b_in then nothing satisfies the receiver spec so far: {}", eval_prefix(&trace, phi)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("monitor example");
}
