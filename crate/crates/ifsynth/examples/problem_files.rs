// Loading a problem file, synthesizing, and re-verifying stored artifacts.

use ifsynth::pipeline::{synthesize, verify_artifacts, Artifacts, Options};
use ifsynth::spec::parse_problem;

const RELAY: &str = include_str!("problems/alarm_relay.json");

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = parse_problem(RELAY)?;
    let run = synthesize(&p, &Options::default())?;
    println!("{}", run.report.to_json());

    let stored = serde_json::to_string(&run.artifacts().ok_or("nothing to store")?)?;
    let loaded: Artifacts = serde_json::from_str(&stored)?;
    let (_, verdict, flow) = verify_artifacts(&loaded, &Options::default())?;
    println!("reloaded: {verdict:?}, {flow:?}");
    if !verdict.is_certified() || !flow.holds() {
        return Err("stored machines do not verify".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("problem file example");
}
