//! Choice-architecture probes: forbid transitions between chosen pairs and
//! watch whether the limiting choice moves. Reversible blocks shrug off any
//! admissible restriction; blocks with one-way flows can be steered.

use std::collections::BTreeMap;
use std::path::Path;

use markov_choice::core::Tolerances;
use markov_choice::io::load_model;
use markov_choice::manipulate::{
    apply_restriction, robustness_to_restrictions, Restriction, RobustnessScope,
};
use markov_choice::markov::generate_limiting;

fn main() -> markov_choice::Result<()> {
    let t = Tolerances::default();
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");

    let reversible = load_model(fixtures.join("model_two_class.json"), &t)?;
    let menu = reversible.universe().full_menu();
    let report =
        robustness_to_restrictions(&reversible, &menu, RobustnessScope::StrictSinglePair, &t)?;
    println!(
        "two-class model, every single-pair removal: robust = {} ({} restrictions tried)",
        report.robust, report.tried
    );

    let report = robustness_to_restrictions(
        &reversible,
        &menu,
        RobustnessScope::WeakSamples { count: 50, seed: 7 },
        &t,
    )?;
    println!(
        "two-class model, 50 random slow-downs/speed-ups: robust = {}",
        report.robust
    );

    // a handcrafted intervention: cut {i,l} entirely, double {i,j}
    let u = reversible.universe();
    let mut factors = BTreeMap::new();
    factors.insert((u.resolve("i")?, u.resolve("l")?), 0.0);
    factors.insert((u.resolve("i")?, u.resolve("j")?), 2.0);
    let restricted = apply_restriction(&reversible, &Restriction::weak(menu.clone(), factors), &t)?;
    let before = reversible.require_block(&menu)?;
    let after = restricted.require_block(&menu)?;
    let shift = generate_limiting(&after.q, &after.pi, &t)?
        .sup_distance(&generate_limiting(&before.q, &before.pi, &t)?);
    println!("handcrafted intervention shifts the limit by {shift:.1e}\n");

    // the partially comparable model is a different story
    let partial = load_model(fixtures.join("model_partial.json"), &t)?;
    let report =
        robustness_to_restrictions(&partial, &menu, RobustnessScope::StrictSinglePair, &t)?;
    println!("partial model: robust = {}", report.robust);
    if let Some((r, shift)) = report.counterexample {
        println!("  {} moves the limit by {shift:.4}", r.describe(u));
    }
    Ok(())
}
