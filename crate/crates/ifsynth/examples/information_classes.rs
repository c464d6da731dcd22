// Information classes for every benchmark family.

use ifsynth::benchmarks::{generate_benchmark, Family};
use ifsynth::classes::{check_coverage, check_soundness, compute_classes, DEFAULT_CLASS_CAP};
use ifsynth::distinguishability::build_rho;
use ifsynth::spec::ComponentId;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for family in Family::ALL {
        for n in 1..=3 {
            let p = generate_benchmark(family, n)?;
            let rho = build_rho(p.spec(ComponentId::P), &p.arch)?;
            let cs = compute_classes(&rho, DEFAULT_CLASS_CAP)?;
            let sound = check_soundness(&cs, &rho);
            let cover = check_coverage(&cs);
            println!("{:<14} |C| = {:>2}  lags {:?}  sound {sound}  covering {cover}", p.name, cs.len(), cs.lags);
            if !sound || !cover {
                return Err(format!("{} classes are not a sound cover", p.name).into());
            }
        }
    }

    let p = generate_benchmark(Family::SeqTrans, 2)?;
    let cs = compute_classes(&build_rho(p.spec(ComponentId::P), &p.arch)?, DEFAULT_CLASS_CAP)?;
    let b1 = p.vars.set_of(&["b_in_1"])?;
    println!("classes of the word {{b_in_1}}: {:?}", cs.classes_of(&[b1]));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("information classes example");
}
