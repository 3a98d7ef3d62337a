//! Run the data conditions on a stored dataset: which exploration models
//! could have produced it, and which witness blocks the rest.

use std::path::Path;

use markov_choice::core::Tolerances;
use markov_choice::cycles::classify;
use markov_choice::io::load_dataset;

fn show(path: &Path, t: &Tolerances) -> markov_choice::Result<()> {
    let d = load_dataset(path, t)?;
    let u = d.universe();
    let menu = u.full_menu();
    let r = classify(&d, &menu, t)?;

    println!("{}:", path.file_name().unwrap().to_string_lossy());
    println!("  rationalizable   {}", r.rationalizable);
    println!("  reversible-only  {}", r.reversible_only);
    println!("  pairwise         {}", r.pairwise);
    println!("  fully comparable {}", r.fully);
    println!("  irreducible      {}", r.irreducible);
    println!("  utility rule     {}", r.luce);
    if let Some(cycle) = &r.positive_cycle {
        println!("  sign-consistent cycle: {}", cycle.render(u));
    }
    if let Some((a, b)) = r.blocking_pair {
        println!("  blocking pair: {{{}, {}}}", u.name(a), u.name(b));
    }
    println!();
    Ok(())
}

fn main() -> markov_choice::Result<()> {
    let t = Tolerances::default();
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    // three datasets over the same binary choice table, differing only in
    // the grand-menu distribution — and landing in three different classes
    for name in [
        "data_reversible_only.json",
        "data_fully_comparable.json",
        "data_forced_zeros.json",
    ] {
        show(&fixtures.join(name), &t)?;
    }
    Ok(())
}
