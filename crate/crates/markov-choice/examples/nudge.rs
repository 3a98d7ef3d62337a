//! Default-setting as an intervention: with impatient explorers, where
//! browsing starts decides what gets chosen; as patience grows the starting
//! point stops mattering (for irreducible blocks).

use std::path::Path;

use markov_choice::core::Tolerances;
use markov_choice::io::load_model;
use markov_choice::manipulate::nudge_initial_finite;

fn main() -> markov_choice::Result<()> {
    let t = Tolerances::default();
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let model = load_model(fixtures.join("model_cyclic.json"), &t)?;
    let u = model.universe();
    let menu = u.full_menu();
    let target = u.resolve("j")?;
    let block = model.require_block(&menu)?;

    for alpha in [0.5, 0.1, 0.001] {
        let report = nudge_initial_finite(block, &menu, alpha, target)?;
        println!("{}\n", report.render(u));
        assert!(report.target_start_is_best);
    }
    Ok(())
}
