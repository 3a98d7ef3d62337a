//! Shared machinery for the integration suites: fixture paths, random
//! dataset/model families, and independent oracles (own Δ formula, own
//! cycle enumeration, own float simplex) so the library's graph- and
//! rational-arithmetic routes are checked against genuinely separate code.

#![allow(dead_code)]
// each integration target uses its own slice of this
// symmetric w[i][j]/w[j][i] fills and tableau pivots read better indexed
#![allow(clippy::needless_range_loop)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use markov_choice::core::{
    validate_dataset, validate_model, ChoiceDataset, Menu, MscModel, Tolerances, Universe,
};
use markov_choice::markov::generate_limiting;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn tol() -> Tolerances {
    Tolerances::default()
}

const NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

pub fn small_universe(n: usize) -> Universe {
    Universe::new(NAMES[..n].iter().copied()).unwrap()
}

fn dirichlet(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n)
        .map(|_| -(rng.gen::<f64>().max(f64::MIN_POSITIVE)).ln() + 0.05)
        .collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / sum).collect()
}

/// A random dataset over `n` alternatives: all binary menus plus the full
/// menu. Each pair is either "tied" (binary share matched to the menu
/// vector, putting the pair's Δ at zero) or freely random, so the Δ-graphs
/// exercised mix zero and nonzero pairs.
pub fn random_dataset(rng: &mut ChaCha8Rng, n: usize) -> ChoiceDataset {
    let u = small_universe(n);
    let mut d = ChoiceDataset::new(u.clone());
    let grand = u.full_menu();
    let v = dirichlet(rng, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let share = if rng.gen_bool(0.4) {
                v[i] / (v[i] + v[j])
            } else {
                rng.gen_range(0.1..0.9)
            };
            let menu = Menu::binary(&u, i, j).unwrap();
            d.set_menu(menu, &[share, 1.0 - share]).unwrap();
        }
    }
    d.set_menu(grand, &v).unwrap();
    debug_assert!(validate_dataset(&d, &tol()).is_valid());
    d
}

/// Choice data proportional to positive utilities, over every menu with at
/// least two members.
pub fn luce_dataset(utilities: &[f64]) -> ChoiceDataset {
    let n = utilities.len();
    let u = small_universe(n);
    let mut d = ChoiceDataset::new(u.clone());
    for mask in 1u32..(1 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let total: f64 = members.iter().map(|&i| utilities[i]).sum();
        let probs: Vec<f64> = members.iter().map(|&i| utilities[i] / total).collect();
        let menu = Menu::new(&u, members).unwrap();
        d.set_menu(menu, &probs).unwrap();
    }
    d
}

/// Structural families of random models.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Detailed balance by construction (sometimes split into two closed
    /// classes).
    Reversible,
    /// Every pair comparable in at least one direction (sometimes exactly
    /// one).
    Pairwise,
    /// A covering cycle plus random extra edges: one communicating class.
    Irreducible,
    /// Arbitrary sparsity, no structure guaranteed.
    Free,
}

/// Scales raw nonnegative off-diagonal weights into a row-stochastic matrix
/// with at least half the mass left on every diagonal.
fn stochastic_from_weights(w: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = w.len();
    let max_out = (0..n)
        .map(|i| (0..n).filter(|&j| j != i).map(|j| w[i][j]).sum::<f64>())
        .fold(0.0f64, f64::max);
    let scale = if max_out > 0.0 { 0.5 / max_out } else { 0.0 };
    let mut q = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut off = 0.0;
        for j in 0..n {
            if i != j {
                q[i][j] = w[i][j] * scale;
                off += q[i][j];
            }
        }
        q[i][i] = 1.0 - off;
    }
    q
}

fn random_grand_block(rng: &mut ChaCha8Rng, n: usize, family: Family) -> Vec<Vec<f64>> {
    let mut w = vec![vec![0.0f64; n]; n];
    match family {
        Family::Reversible => {
            let rho = dirichlet(rng, n);
            // optionally split the menu into two closed groups
            let group: Vec<u8> = if n >= 3 && rng.gen_bool(0.4) {
                (0..n).map(|i| u8::from(i >= n / 2)).collect()
            } else {
                vec![0; n]
            };
            for i in 0..n {
                for j in (i + 1)..n {
                    if group[i] == group[j] && rng.gen_bool(0.75) {
                        let c = rng.gen_range(0.1..1.0);
                        w[i][j] = c / rho[i];
                        w[j][i] = c / rho[j];
                    }
                }
            }
        }
        Family::Pairwise => {
            for i in 0..n {
                for j in (i + 1)..n {
                    let a = rng.gen_range(0.1..1.0);
                    let b = rng.gen_range(0.1..1.0);
                    match rng.gen_range(0..100) {
                        0..=14 => {
                            w[i][j] = a;
                        }
                        15..=29 => {
                            w[j][i] = b;
                        }
                        _ => {
                            w[i][j] = a;
                            w[j][i] = b;
                        }
                    }
                }
            }
        }
        Family::Irreducible => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            for t in 0..n {
                w[order[t]][order[(t + 1) % n]] = rng.gen_range(0.3..1.0);
            }
            for i in 0..n {
                for j in 0..n {
                    if i != j && w[i][j] == 0.0 && rng.gen_bool(0.3) {
                        w[i][j] = rng.gen_range(0.0..0.5);
                    }
                }
            }
        }
        Family::Free => {
            for i in 0..n {
                for j in 0..n {
                    if i != j && rng.gen_bool(0.55) {
                        w[i][j] = rng.gen_range(0.05..1.0);
                    }
                }
            }
        }
    }
    stochastic_from_weights(&w)
}

/// A random valid model of the given family: grand block over the full menu
/// plus a binary block for every pair, transition ratios consistent across
/// menus (pairs the grand block never compares get a symmetric binary).
pub fn random_model(rng: &mut ChaCha8Rng, n: usize, family: Family) -> MscModel {
    let u = small_universe(n);
    let mut model = MscModel::new(u.clone());
    let grand = u.full_menu();
    let mut q = random_grand_block(rng, n, family);
    if n == 2 && q[0][1] == 0.0 && q[1][0] == 0.0 {
        // the grand menu is itself binary: comparability needs an edge, and
        // any two-state chain is reversible, so this stays in every family
        q = vec![vec![0.75, 0.25], vec![0.25, 0.75]];
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (q[i][j], q[j][i]);
            let (rij, rji) = if a == 0.0 && b == 0.0 {
                (0.25, 0.25)
            } else {
                let s = 0.5 / a.max(b);
                (a * s, b * s)
            };
            let menu = Menu::binary(&u, i, j).unwrap();
            let block = vec![vec![1.0 - rij, rij], vec![rji, 1.0 - rji]];
            model.set_block(menu, block, dirichlet(rng, 2)).unwrap();
        }
    }
    model.set_block(grand, q, dirichlet(rng, n)).unwrap();
    let report = validate_model(&model, &tol());
    assert!(report.passes(), "{}", report.render(&u));
    model
}

/// The stochastic choice data a model generates: the limiting distribution
/// of every stored block.
pub fn dataset_from_model(model: &MscModel) -> ChoiceDataset {
    let mut d = ChoiceDataset::new(model.universe().clone());
    for menu in model.menus() {
        let block = model.block(menu).unwrap();
        let limit = generate_limiting(&block.q, &block.pi, &tol()).unwrap();
        d.set_menu(menu.clone(), limit.as_slice()).unwrap();
    }
    d
}

// ---------------------------------------------------------------------------
// Brute-force oracle for the Δ-cycle conditions
// ---------------------------------------------------------------------------

/// Verdicts computed by exhaustive simple-cycle enumeration, with no shared
/// graph machinery.
pub struct BruteVerdicts {
    pub reversible_only: bool,
    pub pairwise: bool,
    pub irreducible: bool,
}

fn brute_delta(d: &ChoiceDataset, menu: &Menu, i: usize, j: usize) -> (f64, f64, f64) {
    let u = d.universe();
    let binary = Menu::binary(u, i, j).unwrap();
    let lhs = d.prob(menu, i).unwrap() * d.prob(&binary, j).unwrap();
    let rhs = d.prob(&binary, i).unwrap() * d.prob(menu, j).unwrap();
    (lhs - rhs, lhs, rhs)
}

fn brute_sign(d: &ChoiceDataset, menu: &Menu, i: usize, j: usize) -> i8 {
    let (delta, lhs, rhs) = brute_delta(d, menu, i, j);
    if delta.abs() <= 1e-12 * 1.0f64.max(lhs.abs()).max(rhs.abs()) {
        0
    } else if delta > 0.0 {
        1
    } else {
        -1
    }
}

/// Every simple directed cycle (as a vertex sequence, length ≥ 2) of the
/// digraph on `n` vertices given by `edge`, each cycle listed once with its
/// smallest vertex first.
fn all_simple_cycles(n: usize, edge: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut cycles = Vec::new();
    let mut path = Vec::new();
    fn extend(
        start: usize,
        n: usize,
        edge: &dyn Fn(usize, usize) -> bool,
        path: &mut Vec<usize>,
        cycles: &mut Vec<Vec<usize>>,
    ) {
        let last = *path.last().unwrap();
        if path.len() >= 2 && edge(last, start) {
            cycles.push(path.clone());
        }
        for next in (start + 1)..n {
            if !path.contains(&next) && edge(last, next) {
                path.push(next);
                extend(start, n, edge, path, cycles);
                path.pop();
            }
        }
    }
    for start in 0..n {
        path.push(start);
        extend(start, n, edge, &mut path, &mut cycles);
        path.pop();
    }
    cycles
}

/// Data conditions recomputed by brute force: enumerate the sign matrix,
/// then every simple cycle, and derive all three verdicts from the cycle
/// lists alone.
pub fn brute_conditions(d: &ChoiceDataset, menu: &Menu) -> BruteVerdicts {
    let members = menu.members();
    let n = members.len();
    let mut sign = vec![vec![0i8; n]; n];
    for a in 0..n {
        for b in 0..n {
            if a != b {
                sign[a][b] = brute_sign(d, menu, members[a], members[b]);
            }
        }
    }

    // cycles over the edges carrying any nonzero sign
    let nonzero_edge = |a: usize, b: usize| sign[a][b] != 0;
    let mut reversible_only = true;
    for cycle in all_simple_cycles(n, &nonzero_edge) {
        let signs: Vec<i8> = cycle
            .iter()
            .enumerate()
            .map(|(t, &v)| sign[v][cycle[(t + 1) % cycle.len()]])
            .collect();
        if signs.iter().all(|&s| s == 1) || signs.iter().all(|&s| s == -1) {
            reversible_only = false;
            break;
        }
    }

    // ordered edges lying on some all-positive cycle
    let positive_edge = |a: usize, b: usize| sign[a][b] == 1;
    let mut on_positive_cycle = vec![vec![false; n]; n];
    for cycle in all_simple_cycles(n, &positive_edge) {
        for (t, &v) in cycle.iter().enumerate() {
            on_positive_cycle[v][cycle[(t + 1) % cycle.len()]] = true;
        }
    }
    let bounded = |a: usize, b: usize| match sign[a][b] {
        0 => true,
        1 => on_positive_cycle[a][b],
        _ => on_positive_cycle[b][a],
    };
    let mut pairwise = true;
    for a in 0..n {
        for b in (a + 1)..n {
            if !bounded(a, b) {
                pairwise = false;
            }
        }
    }

    // connectivity of the undirected bounded-pair graph, by union-find
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if bounded(a, b) {
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let first = root(&mut parent, 0);
    let irreducible = (1..n).all(|x| root(&mut parent, x) == first);

    BruteVerdicts {
        reversible_only,
        pairwise,
        irreducible,
    }
}

// ---------------------------------------------------------------------------
// Independent float LP for the feasibility grades
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FloatStatus {
    StrictlyPositive,
    NonnegNonzero,
    OnlyZero,
}

const LP_EPS: f64 = 1e-9;

/// Grades the nonnegative solutions of Dγ = 0 (γ ≥ 0) with a dense float
/// simplex using Dantzig pivoting: substitute γ = t·1 + s, maximize t
/// subject to D(t·1 + s) = 0 and the normalization m·t + Σs = 1.
/// Infeasible means only γ = 0; t* = 0 means nonzero solutions exist but
/// every one has a zero entry; t* > 0 means a strictly positive γ exists.
pub fn float_feasibility(d: &[Vec<f64>]) -> FloatStatus {
    let rows = d.len();
    let m = if rows == 0 { 0 } else { d[0].len() };
    // constraint matrix over variables [t, s_1..s_m]
    let mut a: Vec<Vec<f64>> = Vec::with_capacity(rows + 1);
    let mut b: Vec<f64> = Vec::with_capacity(rows + 1);
    for data_row in d {
        let mut row = Vec::with_capacity(1 + m);
        row.push(data_row.iter().sum::<f64>());
        row.extend(data_row.iter().copied());
        a.push(row);
        b.push(0.0);
    }
    let mut norm = vec![1.0; 1 + m];
    norm[0] = m as f64;
    a.push(norm);
    b.push(1.0);
    let mut c = vec![0.0; 1 + m];
    c[0] = -1.0; // maximize t
    match dantzig_minimize(&a, &b, &c) {
        None => FloatStatus::OnlyZero,
        Some(value) => {
            if -value > LP_EPS {
                FloatStatus::StrictlyPositive
            } else {
                FloatStatus::NonnegNonzero
            }
        }
    }
}

/// Minimal dense two-phase simplex (Dantzig rule, float arithmetic).
/// Returns the optimal objective value, or None if infeasible. The programs
/// fed to it here are bounded, so unboundedness is treated as a failure.
fn dantzig_minimize(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Option<f64> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    // tableau with artificial basis: columns [vars | artificials | rhs]
    let width = n + m + 1;
    let mut tab: Vec<Vec<f64>> = Vec::with_capacity(m);
    for r in 0..m {
        let mut row = vec![0.0; width];
        let flip = if b[r] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            row[j] = flip * a[r][j];
        }
        row[n + r] = 1.0;
        row[width - 1] = flip * b[r];
        tab.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let pivot = |tab: &mut Vec<Vec<f64>>, basis: &mut Vec<usize>, row: usize, col: usize| {
        let p = tab[row][col];
        for v in tab[row].iter_mut() {
            *v /= p;
        }
        for r in 0..tab.len() {
            if r != row && tab[r][col].abs() > 0.0 {
                let f = tab[r][col];
                for j in 0..width {
                    tab[r][j] -= f * tab[row][j];
                }
            }
        }
        basis[row] = col;
    };

    // phase = objective coefficients over all columns
    let run = |tab: &mut Vec<Vec<f64>>, basis: &mut Vec<usize>, cost: &[f64], limit: usize| {
        for _ in 0..10_000 {
            // reduced costs: c_j − Σ_r cost[basis[r]]·tab[r][j]
            let mut enter = None;
            let mut best = -LP_EPS;
            for j in 0..limit {
                let mut red = cost[j];
                for (r, &bv) in basis.iter().enumerate() {
                    red -= cost[bv] * tab[r][j];
                }
                if red < best {
                    best = red;
                    enter = Some(j);
                }
            }
            let Some(col) = enter else { return true };
            let mut leave = None;
            let mut best_ratio = f64::INFINITY;
            for r in 0..tab.len() {
                if tab[r][col] > LP_EPS {
                    let ratio = tab[r][width - 1] / tab[r][col];
                    if ratio < best_ratio - 1e-15
                        || (ratio < best_ratio + 1e-15
                            && leave.is_some_and(|l: usize| basis[r] < basis[l]))
                    {
                        best_ratio = ratio;
                        leave = Some(r);
                    }
                }
            }
            let Some(row) = leave else { return false }; // unbounded
            pivot(tab, basis, row, col);
        }
        true
    };

    // phase one: drive the artificials out
    let mut cost1 = vec![0.0; width];
    cost1[n..n + m].fill(1.0);
    run(&mut tab, &mut basis, &cost1, n + m);
    let residual: f64 = basis
        .iter()
        .enumerate()
        .filter(|(_, &bv)| bv >= n)
        .map(|(r, _)| tab[r][width - 1])
        .sum();
    if residual > LP_EPS {
        return None;
    }

    // phase two over the original columns only
    let mut cost2 = vec![0.0; width];
    cost2[..n].copy_from_slice(c);
    if !run(&mut tab, &mut basis, &cost2, n) {
        return None; // unbounded: not expected for these programs
    }
    let value: f64 = basis
        .iter()
        .enumerate()
        .filter(|(_, &bv)| bv < n)
        .map(|(r, &bv)| c[bv] * tab[r][width - 1])
        .sum();
    Some(value)
}
