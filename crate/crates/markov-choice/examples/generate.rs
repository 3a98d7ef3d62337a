//! Build an exploration model in code and read off the choice probabilities
//! it generates: impatient (stop with probability alpha after each step),
//! by truncated series, and in the vanishing-impatience limit.

use markov_choice::core::{MscModel, Tolerances, Universe};
use markov_choice::markov::{generate_finite, generate_limiting, generate_series};

fn main() -> markov_choice::Result<()> {
    let t = Tolerances::default();
    let u = Universe::new(["espresso", "filter", "flat white"])?;
    let menu = u.full_menu();

    // row-stochastic exploration: q[a][b] is the chance of hopping from a to
    // b while browsing; the diagonal is the chance of staying put
    let q = vec![
        vec![0.70, 0.20, 0.10],
        vec![0.05, 0.80, 0.15],
        vec![0.10, 0.30, 0.60],
    ];
    let pi = vec![0.5, 0.3, 0.2]; // where browsing starts

    let mut model = MscModel::new(u.clone());
    model.set_block(menu.clone(), q, pi)?;
    let block = model.require_block(&menu)?;

    println!("menu: {}", menu.label(&u));
    for alpha in [0.5, 0.1, 0.01] {
        let rho = generate_finite(&block.q, &block.pi, alpha)?;
        // truncate the stopping series once its tail (1-alpha)^(T+1) is dust
        let steps = (1e-12f64.ln() / (1.0 - alpha).ln()).ceil() as usize;
        let series = generate_series(&block.q, &block.pi, alpha, steps)?;
        println!(
            "alpha = {alpha:<4}  choice = {:?}  (series check: {:.1e})",
            rho.as_slice()
                .iter()
                .map(|v| (v * 1e4).round() / 1e4)
                .collect::<Vec<_>>(),
            rho.sup_distance(&series),
        );
    }

    // as impatience vanishes the walk mixes fully; for this irreducible
    // block the limit is its stationary distribution, independent of pi
    let limit = generate_limiting(&block.q, &block.pi, &t)?;
    println!("limit      choice = {:?}", limit.as_slice());
    let from_elsewhere = generate_limiting(&block.q, &[0.0, 0.0, 1.0], &t)?;
    println!(
        "same limit from a different start: gap {:.1e}",
        limit.sup_distance(&from_elsewhere)
    );
    Ok(())
}
