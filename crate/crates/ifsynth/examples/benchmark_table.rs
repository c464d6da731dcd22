// The benchmark table for small parameters.

use std::time::Duration;

use ifsynth::benchmarks::Family;
use ifsynth::cli::cmd_bench;
use ifsynth::pipeline::Options;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let table = cmd_bench(&Family::ALL, 3, Some(Duration::from_secs(60)), &Options::default());
    print!("{}", table.to_text());
    if let Some(r) = table.rows.iter().find(|r| r.status != "ok") {
        return Err(format!("{} {} did not finish: {}", r.benchmark, r.param, r.status).into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("benchmark example");
}
