use pinchlab::cli::verify::{run_all, Fault};

#[test]
fn acceptance() {
    let outcomes = run_all(Fault::None);
    for o in &outcomes {
        println!("{}  ({:.1}s)", o.line(), o.seconds);
    }
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    println!("{} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
