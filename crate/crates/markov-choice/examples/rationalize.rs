//! From data back to a model: grade the feasibility of the flow equations,
//! construct a rationalizing model for a granted class, and verify that it
//! reproduces the data it came from.

use std::path::Path;

use markov_choice::core::Tolerances;
use markov_choice::io::load_dataset;
use markov_choice::rationalize::{
    build_design_system, construct_irreducible, construct_model, solve_feasibility,
    verify_rationalizes, Grade,
};

fn main() -> markov_choice::Result<()> {
    let t = Tolerances::default();
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");

    // fully comparable data: the flow equations admit a strictly positive
    // solution, and the constructed model compares every pair directly
    let d = load_dataset(fixtures.join("data_fully_comparable.json"), &t)?;
    let menu = d.universe().full_menu();
    let system = build_design_system(&d, &menu, &t)?;
    let feasibility = solve_feasibility(&system, Grade::Strict);
    println!("fully comparable data: {:?}", feasibility.status);
    for ((a, b), g) in system.pairs.iter().zip(feasibility.gamma_f64().unwrap()) {
        println!(
            "  cross-flow weight {{{}, {}}} = {g:.4}",
            d.universe().name(*a),
            d.universe().name(*b)
        );
    }
    let gamma = feasibility.gamma.expect("strictly positive weights");
    let model = construct_model(&d, &system, &gamma, &t)?;
    let menus: Vec<_> = model.menus().cloned().collect();
    let (ok, gap) = verify_rationalizes(&model, &d, &menus, &t)?;
    println!("  reconstruction verified: {ok} (sup gap {gap:.1e})\n");

    // data with pairs that every rationalizing model must keep silent:
    // the construction routes around them and stays irreducible
    let d = load_dataset(fixtures.join("data_forced_zeros.json"), &t)?;
    let forced = markov_choice::rationalize::forced_zero_pairs(&d, &menu, &t)?;
    println!(
        "forced-zero data: {} pair(s) must carry no flow",
        forced.len()
    );
    for (a, b) in &forced {
        println!("  {{{}, {}}}", d.universe().name(*a), d.universe().name(*b));
    }
    let model = construct_irreducible(&d, &menu, &t)?;
    let block = model.require_block(&menu)?;
    for (a, b) in &forced {
        assert_eq!(block.q[*a][*b], 0.0);
        assert_eq!(block.q[*b][*a], 0.0);
    }
    let menus: Vec<_> = model.menus().cloned().collect();
    let (ok, gap) = verify_rationalizes(&model, &d, &menus, &t)?;
    println!("  irreducible reconstruction verified: {ok} (sup gap {gap:.1e})");
    Ok(())
}
