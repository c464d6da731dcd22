// Transmitter and receiver for `G (b_in <-> X b_out)`, from classes to
// verified local machines.

use ifsynth::assembly::ClosedVerdict;
use ifsynth::benchmarks::{generate_benchmark, Family};
use ifsynth::pipeline::{synthesize, Options};
use ifsynth::spec::ComponentId;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let problem = generate_benchmark(Family::SeqTrans, 1)?;
    let run = synthesize(&problem, &Options::default())?;
    let vars = &problem.vars;

    let receiver = &run.analysis[ComponentId::P.index()];
    println!("receiver spec: {}", problem.spec(ComponentId::P).ltl.display(vars));
    println!("distinguishability: {:?}", receiver.rho.stats());
    for class in &receiver.classes.classes {
        println!("class {} represented by {}", class.id, class.representative.iter().map(|v| vars.show(*v)).collect::<Vec<_>>().join(" "));
    }

    let rx = run.local(ComponentId::P).ok_or("no receiver")?;
    let tx = run.local(ComponentId::Q).ok_or("no transmitter")?;
    println!("{}", rx.to_dot("receiver", vars));
    println!("{}", tx.to_dot("transmitter", vars));

    match run.report.verification.as_ref() {
        Some(v @ ClosedVerdict::Verified { certifying: true, .. }) => println!("closed loop: {v:?}"),
        other => return Err(format!("closed loop not verified: {other:?}").into()),
    }
    if receiver.classes.len() != 2 {
        return Err("expected two classes".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("running example");
}
