// Diagnostics for specifications that cannot be met.

use ifsynth::classes::compute_classes;
use ifsynth::distinguishability::{build_rho, RhoDiagnostic};
use ifsynth::pipeline::{synthesize, Options, Realizability};
use ifsynth::spec::{parse_problem, ComponentId};
use ifsynth::synthesis::UnrealizableLevel;
use ifsynth::Error;

const SAME_STEP: &str = include_str!("problems/same_step_echo.json");

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // the receiver would have to react before the transmitter can tell it
    let p = parse_problem(SAME_STEP)?;
    let run = synthesize(&p, &Options::default())?;
    match &run.report.realizability {
        Some(Realizability::Unrealizable(d)) if d.level == UnrealizableLevel::Arena => {
            println!("{}: {} ({:?})", p.name, d.message, d.level)
        }
        other => return Err(format!("expected an arena-level verdict, got {other:?}").into()),
    }

    // no output word at all keeps this specification alive
    let bad = SAME_STEP.replace("G (b_in <-> b_out)", "G (b_in <-> X b_out) & G !b_out");
    let p = parse_problem(&bad)?;
    let rho = build_rho(p.spec(ComponentId::P), &p.arch)?;
    if let Some(RhoDiagnostic::LocallyUnrealizable { witness }) = &rho.diagnostic {
        println!("locally unrealizable, witness {}", witness.iter().map(|v| p.vars.show(*v)).collect::<Vec<_>>().join(" "));
    }
    match compute_classes(&rho, 64) {
        Err(Error::LocallyUnrealizable) => Ok(()),
        other => Err(format!("expected local unrealizability, got {other:?}").into()),
    }
}

#[allow(dead_code)]
fn main() {
    run_example().expect("unrealizable example");
}
