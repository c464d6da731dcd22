// Composition, consistency filtering, decomposition and closed-loop checks.

use ifsynth::assembly::{check_prefix_ifa, verify_closed, ClosedLoop, DecompositionMode, LocalImplementation};
use ifsynth::benchmarks::{generate_benchmark, Family};
use ifsynth::pipeline::{synthesize, Options};
use ifsynth::spec::ComponentId;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = generate_benchmark(Family::Delay, 2)?;
    let run = synthesize(&p, &Options::default())?;
    let (h, f) = (run.composed.as_ref().ok_or("no composition")?, run.filtered.as_ref().ok_or("no filter")?);
    println!("composed: {} states, {} transitions", h.num_states(), h.num_transitions());
    println!("filtered: {} states, {} transitions", f.num_states(), f.num_transitions());

    let [tp, tq] = run.locals.as_ref().ok_or("no local machines")?;
    let (sp, sq) = (p.spec(ComponentId::P), p.spec(ComponentId::Q));
    println!("verification: {:?}", verify_closed(tp, tq, sp, sq, &p.arch, 100)?);
    println!("information flow: {:?}", check_prefix_ifa(tp, tq, sp, &p.arch, 4)?);

    let lp = ClosedLoop::new(tp, tq, &p.arch)?;
    let i = p.vars.set_of(&["i"])?;
    let word = [i, Default::default(), Default::default(), i, Default::default(), Default::default()];
    println!("{}", ifsynth::pipeline::render_trace(&p, &lp.trace(&word)));

    // the literal least-successor projection loses track of the transmitter
    let min = synthesize(&p, &Options { decomposition: DecompositionMode::MinSuccessor, ..Options::default() })?;
    println!("least-successor decomposition: {:?}", min.report.verification);

    // a silent transmitter is caught
    let mute = LocalImplementation::constant(ComponentId::Q, &p.arch, Default::default());
    let v = verify_closed(tp, &mute, sp, sq, &p.arch, 100)?;
    println!("silent transmitter: {v:?}");
    if v.is_verified() || !run.is_verified() {
        return Err("unexpected verdicts".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("assembly example");
}
