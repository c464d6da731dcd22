// Prefix distinguishability automata and their direct-definition oracle.

use ifsynth::benchmarks::{generate_benchmark, Family};
use ifsynth::distinguishability::{build_rho, RhoOracle};
use ifsynth::pipeline::rho_mismatches;
use ifsynth::spec::ComponentId;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for n in 1..=4 {
        let p = generate_benchmark(Family::Delay, n)?;
        let rho = build_rho(p.spec(ComponentId::P), &p.arch)?;
        let s = rho.stats();
        println!("delay({n}): {} raw states, {} minimized", s.raw_states, s.minimized_states);
    }

    let p = generate_benchmark(Family::Delay, 2)?;
    let phi = p.spec(ComponentId::P);
    let rho = build_rho(phi, &p.arch)?;
    let oracle = RhoOracle::new(phi, &p.arch)?;
    let i = p.vars.set_of(&["i"])?;
    let none = Default::default();
    // words differing two steps back are distinguished, one step back not yet
    let far = oracle.distinguished(&[i, none], &[none, none])?;
    let near = oracle.distinguished(&[i], &[none])?;
    println!("i,- vs -,-: {far}   i vs -: {near}");
    if !far || near || !rho.accepts(&[1, 0], &[0, 0]) {
        return Err("unexpected distinguishability".into());
    }

    let mismatches = rho_mismatches(&rho, &p, 4)?;
    println!("automaton vs enumeration on pair words up to length 4: {mismatches} mismatches");
    if mismatches != 0 {
        return Err("oracle disagrees".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("distinguishability example");
}
