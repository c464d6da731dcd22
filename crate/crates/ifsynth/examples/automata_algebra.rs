// Symbolic automata: guards, products, projection, determinization and
// minimization.

use ifsynth::automata::{Dfa, Guard, SymbolicNfa};
use ifsynth::vars::{VarSet, VarTable};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let vars = VarTable::from_names(&["a", "b"])?;
    let (a, b) = (vars.id("a").ok_or("a")?, vars.id("b").ok_or("b")?);
    let ab = vars.all();

    // some position carries `a`, followed by a position carrying `b`
    let mut n = SymbolicNfa::new(ab);
    let (s0, s1, s2) = (n.add_state(false), n.add_state(false), n.add_state(true));
    n.set_initial(vec![s0]);
    n.add_edge(s0, Guard::full(ab), s0);
    n.add_edge(s0, Guard::literal(ab, a, true), s1);
    n.add_edge(s1, Guard::literal(ab, b, true), s2);
    n.add_edge(s2, Guard::full(ab), s2);
    println!("guard a & !b renders as {}", Guard::literal(ab, a, true).and(&Guard::literal(ab, b, false)).render(&vars));

    let d = n.determinize().minimize();
    println!("determinized: {} states", d.num_states());

    // words of a-only letters never reach acceptance
    let only_a = SymbolicNfa::new(ab);
    let never = n.product(&only_a);
    println!("product with the empty automaton is empty: {}", never.is_empty());

    let proj = n.project(VarSet::singleton(a)).determinize().minimize();
    println!("projected onto a: {} states, accepts [a, -]: {}", proj.num_states(), proj.accepts(&[1, 0]));

    let all = Dfa::universal(ab);
    let rest = all.difference(&d);
    let back = rest.complement().minimize();
    println!("complement of the difference equals the original: {}", back.equivalent(&d));
    if !back.equivalent(&d) || !never.is_empty() {
        return Err("algebra laws violated".into());
    }
    let words = d.accepted_words(2);
    println!("accepted words of length <= 2: {words:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("automata example");
}
