//! Shared fixtures for unit tests: a four-alternative universe {i,j,k,l}
//! with a fixed binary-menu table, three grand-menu probability vectors
//! that exercise every classification outcome, and the transition matrices
//! that rationalize them.

use crate::core::{ChoiceDataset, Menu, MscModel, Universe};
use crate::exact::{parse_decimal, Rat};

/// Stores a menu with the *decimal* values the floats print as, so exact
/// consumers (the flow-balance system) see 1/5 rather than the nearest
/// dyadic to 0.2 — the same thing loading the values from a file would do.
fn set_exact(d: &mut ChoiceDataset, menu: Menu, probs: &[f64]) {
    let exact: Vec<Rat> = probs
        .iter()
        .map(|p| parse_decimal(&format!("{p}")).unwrap())
        .collect();
    d.set_menu_exact(menu, exact).unwrap();
}

pub(crate) const I: usize = 0;
pub(crate) const J: usize = 1;
pub(crate) const K: usize = 2;
pub(crate) const L: usize = 3;

pub(crate) fn universe() -> Universe {
    Universe::new(["i", "j", "k", "l"]).unwrap()
}

/// Binary-menu table used by all three examples:
/// p(i|{i,j}) = p(i|{i,k}) = p(i|{i,l}) = p(j|{j,l}) = 0.5,
/// p(j|{j,k}) = 0.6, p(k|{k,l}) = 0.4.
const BINARY_TABLE: [(usize, usize, f64); 6] = [
    (I, J, 0.5),
    (I, K, 0.5),
    (I, L, 0.5),
    (J, K, 0.6),
    (J, L, 0.5),
    (K, L, 0.4),
];

fn insert_binaries(d: &mut ChoiceDataset) {
    for (a, b, p) in BINARY_TABLE {
        let m = Menu::binary(d.universe(), a, b).unwrap();
        set_exact(d, m, &[p, 1.0 - p]);
    }
}

pub(crate) fn dataset_with_full_menu(probs: [f64; 4]) -> ChoiceDataset {
    let mut d = ChoiceDataset::new(universe());
    insert_binaries(&mut d);
    let full = d.universe().full_menu();
    set_exact(&mut d, full, &probs);
    d
}

/// Star-shaped Δ digraph out of k; rationalizable only reversibly.
pub(crate) fn reversible_only_data() -> ChoiceDataset {
    dataset_with_full_menu([0.2, 0.2, 0.4, 0.2])
}

/// All six Δ values nonzero, every pair on a positive cycle; fully comparable.
pub(crate) fn fully_comparable_data() -> ChoiceDataset {
    dataset_with_full_menu([0.25, 0.28, 0.2, 0.27])
}

/// Positive cycle on {i,j,k} but pairs (j,l), (k,l) unbounded; irreducible
/// rationalization exists, pairwise-comparable does not.
pub(crate) fn forced_zeros_data() -> ChoiceDataset {
    dataset_with_full_menu([0.24, 0.3, 0.22, 0.24])
}

/// Reversible matrix with closed classes {i,j,l} and {k}; with initial mass
/// 0.4 on k its patient limit reproduces `reversible_only_data`'s grand-menu vector.
pub(crate) fn two_class_q() -> Vec<Vec<f64>> {
    vec![
        vec![0.8, 0.1, 0.0, 0.1],
        vec![0.1, 0.8, 0.0, 0.1],
        vec![0.0, 0.0, 1.0, 0.0],
        vec![0.1, 0.1, 0.0, 0.8],
    ]
}

/// Irreducible all-positive matrix with stationary (0.25, 0.28, 0.2, 0.27),
/// the `fully_comparable_data` grand-menu vector.
pub(crate) fn cyclic_q() -> Vec<Vec<f64>> {
    vec![
        vec![0.7, 0.1, 0.1, 0.1],
        vec![0.1, 0.72, 0.16, 0.02],
        vec![0.1, 0.24, 0.57, 0.09],
        vec![0.1, 0.02, 0.06, 0.82],
    ]
}

/// Irreducible matrix with q_jl = q_lj = q_kl = q_lk = 0 and stationary
/// (0.24, 0.3, 0.22, 0.24), the `forced_zeros_data` grand-menu vector.
pub(crate) fn partial_q() -> Vec<Vec<f64>> {
    vec![
        vec![0.4, 0.1, 0.3, 0.2],
        vec![0.1, 0.7, 0.2, 0.0],
        vec![0.3, 0.3, 0.4, 0.0],
        vec![0.2, 0.0, 0.0, 0.8],
    ]
}

/// Wraps a grand-menu matrix into a full model: binary blocks are scaled
/// binary shares (q_xy({x,y}) = 0.5·p(y|{x,y}), which matches the grand
/// ratios of two_class_q/cyclic_q/partial_q, so transition-ratio consistency holds), binary π =
/// the binary shares themselves.
pub(crate) fn benchmark_model(grand_q: Vec<Vec<f64>>, grand_pi: [f64; 4]) -> MscModel {
    let mut m = MscModel::new(universe());
    for (a, b, p) in BINARY_TABLE {
        let menu = Menu::binary(m.universe(), a, b).unwrap();
        let q = vec![
            vec![1.0 - 0.5 * (1.0 - p), 0.5 * (1.0 - p)],
            vec![0.5 * p, 1.0 - 0.5 * p],
        ];
        m.set_block(menu, q, vec![p, 1.0 - p]).unwrap();
    }
    let full = m.universe().full_menu();
    m.set_block(full, grand_q, grand_pi.to_vec()).unwrap();
    m
}

pub(crate) fn model_two_class() -> MscModel {
    benchmark_model(two_class_q(), [0.2, 0.2, 0.4, 0.2])
}

pub(crate) fn model_cyclic() -> MscModel {
    benchmark_model(cyclic_q(), [0.25; 4])
}

pub(crate) fn model_partial() -> MscModel {
    benchmark_model(partial_q(), [0.25; 4])
}

/// Choice data that follows a positive-utility rule exactly: p(x|M) =
/// u_x/Σ_{y∈M} u_y on every menu of a universe of |u| alternatives.
pub(crate) fn luce_dataset(u: &[f64]) -> ChoiceDataset {
    let n = u.len();
    let names: Vec<String> = (0..n).map(|x| format!("x{x}")).collect();
    let mut d = ChoiceDataset::new(Universe::new(names).unwrap());
    for bits in 1u32..(1 << n) {
        if bits.count_ones() < 2 {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&x| bits & (1 << x) != 0).collect();
        let total: f64 = members.iter().map(|&x| u[x]).sum();
        let probs: Vec<f64> = members.iter().map(|&x| u[x] / total).collect();
        let menu = Menu::new(d.universe(), members).unwrap();
        d.set_menu(menu, &probs).unwrap();
    }
    d
}
