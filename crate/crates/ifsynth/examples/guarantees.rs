// Guarantees a transmitter can owe: class codes and full information.

use ifsynth::benchmarks::{generate_benchmark, Family};
use ifsynth::obligations::{build_full_information, GuaranteeKind, Polarity};
use ifsynth::pipeline::{synthesize, Options};
use ifsynth::spec::ComponentId;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = generate_benchmark(Family::SeqTrans, 2)?;
    for guarantee in [GuaranteeKind::Class, GuaranteeKind::Full] {
        let run = synthesize(&p, &Options { guarantee, ..Options::default() })?;
        let tx = run.hyper(ComponentId::Q).ok_or("no transmitter")?;
        println!("{guarantee}: transmitter with {} states, verified {}", tx.num_states(), run.is_verified());
        if !run.is_verified() {
            return Err(format!("{guarantee} guarantee failed").into());
        }
    }

    // allowing either polarity lets the first input choose it
    let m = build_full_information(&p.arch, ComponentId::Q, Polarity::Either)?.monitor;
    let b1 = p.vars.set_of(&["b_in_1"])?;
    let c1 = p.vars.set_of(&["c_b_1"])?;
    let run = |w: &[_]| w.iter().fold(m.initial(), |s, v| m.step_val(s, *v));
    println!("negated copy accepted by the either-polarity monitor: {}", !m.is_dead(run(&[b1, Default::default()])));
    println!("same output for both inputs accepted: {} and {}", !m.is_dead(run(&[b1, c1])), !m.is_dead(run(&[Default::default(), c1])));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("guarantee example");
}
