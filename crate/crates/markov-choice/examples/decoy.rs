//! The attraction effect, mechanically: add a third option nobody switches
//! to from the target, and the target's share against its competitor grows.
//! Whether it grows in absolute terms depends on one rate comparison.

use std::path::Path;

use markov_choice::core::Tolerances;
use markov_choice::io::load_model;
use markov_choice::manipulate::decoy_analysis;

fn main() -> markov_choice::Result<()> {
    let t = Tolerances::default();
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let model = load_model(fixtures.join("model_decoy.json"), &t)?;
    let u = model.universe();
    let (target, rival, bait) = (
        u.resolve("target")?,
        u.resolve("rival")?,
        u.resolve("bait")?,
    );

    let report = decoy_analysis(&model, target, rival, bait, &t)?;
    println!("{}", report.render(u));

    // the rate condition is exactly the absolute-increase test: the decoy
    // must feed the target faster than the competitor does
    assert_eq!(report.absolute_increase, report.rate_condition);
    println!(
        "head-to-head share {:.4} -> {:.4} with the bait on the menu",
        report.rho_target_binary, report.rho_target_triple
    );
    Ok(())
}
