// Solving an explicit safety game and reading off the strategy.

use ifsynth::synthesis::{solve_safety, Player, SafetyGame};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // the system picks a corridor; the environment then moves inside it
    let mut g = SafetyGame::default();
    let start = g.add_node(Player::System, false);
    let risky = g.add_node(Player::Env, false);
    let safe = g.add_node(Player::Env, false);
    let trap = g.add_node(Player::System, true);
    g.succ[start] = vec![risky, safe];
    g.succ[risky] = vec![start, trap];
    g.succ[safe] = vec![start];
    g.initial = start;

    let sol = solve_safety(&g);
    println!("winning region: {:?}", sol.winning);
    println!("strategy at start: successor #{:?}", sol.strategy[start]);
    if !sol.realizable(&g) || sol.strategy[start] != Some(1) {
        return Err("expected the safe corridor".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("safety game example");
}
