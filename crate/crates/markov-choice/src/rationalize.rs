//! Constructing exploration models that reproduce observed choice data.
//!
//! Whether a menu's data can be rationalized by a model of a given class
//! reduces to a linear feasibility question: the per-pair net probability
//! flows form a matrix `D` (one row per alternative, one column per
//! Δ-positive pair), and a transition-rate assignment γ reproduces the
//! data exactly when Dγ = 0. The grade of solution available — only the
//! zero vector, a nonzero nonnegative vector, a strictly positive vector —
//! separates the model classes, and each negative verdict carries an
//! integer certificate vector `z` with `zD ≥ 0` (or ≫ 0) proving that no
//! better solution exists.
//!
//! Everything here runs in exact rational arithmetic: the verdicts are
//! structural and must not depend on floating-point luck. Floats decide
//! only which pairs count as Δ-zero (one consistent signing for the whole
//! crate); the retained columns are then built exactly.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::core::{AltId, ChoiceDataset, Menu, MscModel, Tolerances};
use crate::cycles::{build_delta_graph, delta_exact, irreducibility_condition};
use crate::exact::{rat_to_f64, Rat};
use crate::markov::{generate_limiting, scc_decompose};
use crate::simplex::{minimize, LpOutcome};
use crate::{Error, Result};

/// The flow-balance system of a menu: one column per Δ-positive ordered
/// pair, one row per menu member. Column (i,j) carries +Δ_ij/p(j|{i,j}) at
/// i's row and the negative at j's row; a nonnegative weighting γ of the
/// columns with Dγ = 0 is exactly a transition-rate assignment under which
/// the observed data is stationary.
#[derive(Clone, Debug)]
pub struct DesignSystem {
    pub menu: Menu,
    /// Δ-positive ordered pairs, lexicographic; one per column.
    pub pairs: Vec<(AltId, AltId)>,
    /// Row-major, `menu.len()` rows by `pairs.len()` columns, exact.
    pub matrix: Vec<Vec<Rat>>,
}

impl DesignSystem {
    /// D·γ, exactly.
    pub fn apply(&self, gamma: &[Rat]) -> Vec<Rat> {
        self.matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(gamma)
                    .map(|(a, g)| a * g)
                    .fold(Rat::zero(), |acc, v| acc + v)
            })
            .collect()
    }

    /// Drops the columns of the given unordered pairs, keeping the rest.
    fn without_pairs(&self, dropped: &BTreeSet<(AltId, AltId)>) -> DesignSystem {
        let keep: Vec<usize> = self
            .pairs
            .iter()
            .enumerate()
            .filter(|(_, &(i, j))| !dropped.contains(&order(i, j)))
            .map(|(b, _)| b)
            .collect();
        DesignSystem {
            menu: self.menu.clone(),
            pairs: keep.iter().map(|&b| self.pairs[b]).collect(),
            matrix: self
                .matrix
                .iter()
                .map(|row| keep.iter().map(|&b| row[b].clone()).collect())
                .collect(),
        }
    }
}

fn order(i: AltId, j: AltId) -> (AltId, AltId) {
    (i.min(j), i.max(j))
}

/// Builds the flow-balance system for `menu`. Pair signs come from the
/// thresholded Δ digraph; the retained values are exact.
pub fn build_design_system(d: &ChoiceDataset, menu: &Menu, t: &Tolerances) -> Result<DesignSystem> {
    let graph = build_delta_graph(d, menu, t)?;
    let n = menu.len();
    let mut pairs = Vec::with_capacity(graph.edges.len());
    let mut matrix = vec![Vec::with_capacity(graph.edges.len()); n];
    for &(i, j, _) in &graph.edges {
        let binary = Menu::binary(d.universe(), i, j)?;
        let value = delta_exact(d, menu, i, j)? / d.prob_exact(&binary, j)?;
        assert!(
            value.is_positive(),
            "a Δ-positive pair must keep its sign exactly"
        );
        let (pi, pj) = (menu.position(i).unwrap(), menu.position(j).unwrap());
        for (r, row) in matrix.iter_mut().enumerate() {
            row.push(if r == pi {
                value.clone()
            } else if r == pj {
                -value.clone()
            } else {
                Rat::zero()
            });
        }
        pairs.push((i, j));
    }
    Ok(DesignSystem {
        menu: menu.clone(),
        pairs,
        matrix,
    })
}

/// How much of the nonnegative orthant the solution set of Dγ = 0 reaches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeasibilityStatus {
    /// Some γ with every entry strictly positive.
    StrictlyPositive,
    /// Nonzero nonnegative solutions exist, but every one has a zero entry.
    NonnegNonzero,
    /// The zero vector is the only nonnegative solution.
    OnlyZero,
}

/// Which grade of solution the caller wants materialized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grade {
    /// Maximize the smallest entry among normalized nonnegative solutions.
    Nonneg,
    /// Demand every entry ≥ 1 (any strictly positive solution rescales to
    /// this, so it is pure existence in scale-free form).
    Strict,
}

/// Outcome of [`solve_feasibility`].
#[derive(Clone, Debug)]
pub struct FeasibilityResult {
    pub status: FeasibilityStatus,
    /// A solution of the requested grade, aligned with the system's pairs.
    /// Present when the status permits one: the strict grade returns γ only
    /// when strictly positive solutions exist, the nonneg grade whenever
    /// nonzero solutions exist.
    pub gamma: Option<Vec<Rat>>,
    /// Integer heights z (one per menu position) certifying a negative
    /// verdict: zD ≫ 0 when only zero solves the system, zD ≥ 0 with a
    /// strict coordinate when no strictly positive solution exists.
    pub certificate: Option<Vec<i64>>,
}

impl FeasibilityResult {
    pub fn gamma_f64(&self) -> Option<Vec<f64>> {
        self.gamma
            .as_ref()
            .map(|g| g.iter().map(rat_to_f64).collect())
    }
}

/// Decides, exactly, which grade of nonnegative solution Dγ = 0 admits,
/// and produces a solution or a counting certificate.
///
/// The nonneg grade solves one linear program — maximize t subject to
/// γ = t·1 + s, s ≥ 0, Σγ = 1, Dγ = 0 — whose optimum separates all three
/// statuses: infeasible means only zero, t* = 0 means nonzero solutions all
/// touch the boundary, t* > 0 means a strictly positive solution. The
/// strict grade instead minimizes Σs subject to D(1 + s) = 0, s ≥ 0,
/// returning γ = 1 + s with every entry ≥ 1.
pub fn solve_feasibility(system: &DesignSystem, grade: Grade) -> FeasibilityResult {
    match grade {
        Grade::Nonneg => solve_nonneg(system),
        Grade::Strict => match solve_strict(system) {
            Some(gamma) => {
                debug_assert!(system.apply(&gamma).iter().all(Rat::is_zero));
                FeasibilityResult {
                    status: FeasibilityStatus::StrictlyPositive,
                    gamma: Some(gamma),
                    certificate: None,
                }
            }
            // No strict solution: fall back to the graded solve for the
            // honest status and its certificate.
            None => solve_nonneg(system),
        },
    }
}

fn solve_nonneg(system: &DesignSystem) -> FeasibilityResult {
    let n_g = system.pairs.len();
    let rows = system.matrix.len();
    // variables: x = (t, s_1..s_{n_g})
    let mut a: Vec<Vec<Rat>> = Vec::with_capacity(rows + 1);
    for row in &system.matrix {
        let mut lp_row = Vec::with_capacity(n_g + 1);
        lp_row.push(row.iter().fold(Rat::zero(), |acc, v| acc + v));
        lp_row.extend(row.iter().cloned());
        a.push(lp_row);
    }
    let mut norm = vec![Rat::from_integer(n_g.into())];
    norm.extend(std::iter::repeat_with(Rat::one).take(n_g));
    a.push(norm);
    let mut b = vec![Rat::zero(); rows];
    b.push(Rat::one());
    let mut c = vec![-Rat::one()];
    c.extend(std::iter::repeat_with(Rat::zero).take(n_g));

    match minimize(&a, &b, &c) {
        LpOutcome::Infeasible => {
            let certificate = gordan_heights(system);
            FeasibilityResult {
                status: FeasibilityStatus::OnlyZero,
                gamma: None,
                certificate: Some(certificate),
            }
        }
        LpOutcome::Unbounded => unreachable!("t is capped by the normalization row"),
        LpOutcome::Optimal { x, .. } => {
            let t_star = &x[0];
            let gamma: Vec<Rat> = (0..n_g).map(|b| t_star + &x[1 + b]).collect();
            debug_assert!(system.apply(&gamma).iter().all(Rat::is_zero));
            if t_star.is_positive() {
                FeasibilityResult {
                    status: FeasibilityStatus::StrictlyPositive,
                    gamma: Some(gamma),
                    certificate: None,
                }
            } else {
                let certificate = stiemke_heights(system);
                FeasibilityResult {
                    status: FeasibilityStatus::NonnegNonzero,
                    gamma: Some(gamma),
                    certificate: Some(certificate),
                }
            }
        }
    }
}

/// Minimizes Σs subject to D(1+s) = 0, s ≥ 0; γ = 1 + s when feasible.
fn solve_strict(system: &DesignSystem) -> Option<Vec<Rat>> {
    let n_g = system.pairs.len();
    let a = system.matrix.clone();
    let b: Vec<Rat> = system
        .matrix
        .iter()
        .map(|row| -row.iter().fold(Rat::zero(), |acc, v| acc + v))
        .collect();
    let c = vec![Rat::one(); n_g];
    match minimize(&a, &b, &c) {
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("the objective is bounded below by zero"),
        LpOutcome::Optimal { x, .. } => Some(x.into_iter().map(|s| s + Rat::one()).collect()),
    }
}

/// Heights witnessing that only zero solves the system: the Δ-positive
/// digraph is acyclic exactly in this case, so longest-path heights give
/// z_i > z_j along every edge, hence zD ≫ 0.
fn gordan_heights(system: &DesignSystem) -> Vec<i64> {
    let n = system.menu.len();
    let succ: Vec<Vec<usize>> = position_adjacency(system);
    let mut heights = vec![i64::MIN; n];
    fn height(
        v: usize,
        succ: &[Vec<usize>],
        heights: &mut Vec<i64>,
        on_path: &mut Vec<bool>,
    ) -> i64 {
        if heights[v] != i64::MIN {
            return heights[v];
        }
        assert!(!on_path[v], "a cycle contradicts the only-zero verdict");
        on_path[v] = true;
        let mut h = 0;
        for &w in &succ[v] {
            h = h.max(1 + height(w, succ, heights, on_path));
        }
        on_path[v] = false;
        heights[v] = h;
        h
    }
    let mut on_path = vec![false; n];
    for v in 0..n {
        height(v, &succ, &mut heights, &mut on_path);
    }
    verify_certificate(system, &heights, true);
    heights
}

/// Heights witnessing that no strictly positive solution exists: collapse
/// the Δ digraph's strongly connected components and take longest-path
/// heights of the condensation. Edges inside a component contribute zero,
/// edges across components contribute strictly — and an edge crossing
/// components is exactly an edge on no cycle.
fn stiemke_heights(system: &DesignSystem) -> Vec<i64> {
    let n = system.menu.len();
    let succ = position_adjacency(system);
    // reuse the matrix-based decomposition by painting edges as mass
    let fake: Vec<Vec<f64>> = (0..n)
        .map(|v| {
            (0..n)
                .map(|w| if succ[v].contains(&w) { 1.0 } else { 0.0 })
                .collect()
        })
        .collect();
    let scc = scc_decompose(&fake, &Tolerances::default());
    let classes = scc.classes.len();
    // condensation successors
    let mut class_succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); classes];
    for (v, ws) in succ.iter().enumerate() {
        for &w in ws {
            let (cv, cw) = (scc.class_index[v], scc.class_index[w]);
            if cv != cw {
                class_succ[cv].insert(cw);
            }
        }
    }
    let mut class_height = vec![i64::MIN; classes];
    fn height(c: usize, succ: &[BTreeSet<usize>], memo: &mut Vec<i64>) -> i64 {
        if memo[c] != i64::MIN {
            return memo[c];
        }
        let h = succ[c]
            .iter()
            .map(|&w| 1 + height(w, succ, memo))
            .max()
            .unwrap_or(0);
        memo[c] = h;
        h
    }
    for cls in 0..classes {
        height(cls, &class_succ, &mut class_height);
    }
    let heights: Vec<i64> = (0..n).map(|v| class_height[scc.class_index[v]]).collect();
    verify_certificate(system, &heights, false);
    heights
}

fn position_adjacency(system: &DesignSystem) -> Vec<Vec<usize>> {
    let mut succ = vec![Vec::new(); system.menu.len()];
    for &(i, j) in &system.pairs {
        let (pi, pj) = (
            system.menu.position(i).unwrap(),
            system.menu.position(j).unwrap(),
        );
        succ[pi].push(pj);
    }
    succ
}

/// Checks zD ≥ 0 column by column (strictly on every column when `strict`,
/// strictly somewhere otherwise). The column sign is the sign of
/// z_i − z_j, since the column's magnitude is positive.
fn verify_certificate(system: &DesignSystem, z: &[i64], strict: bool) {
    let mut some_positive = system.pairs.is_empty();
    for &(i, j) in &system.pairs {
        let gap = z[system.menu.position(i).unwrap()] - z[system.menu.position(j).unwrap()];
        if strict {
            assert!(gap > 0, "certificate fails on column ({i},{j})");
        } else {
            assert!(gap >= 0, "certificate fails on column ({i},{j})");
            some_positive |= gap > 0;
        }
    }
    assert!(
        strict || some_positive,
        "a boundary certificate must be nonzero on some column"
    );
}

/// Unordered pairs whose transition rates every rationalizing model must
/// zero out: Δ is nonzero but the pair sits on no sign-consistent cycle,
/// so any positive rate would push the stationary distribution off the
/// data. These are exactly the non-comparabilities the data forces.
pub fn forced_zero_pairs(
    d: &ChoiceDataset,
    menu: &Menu,
    t: &Tolerances,
) -> Result<Vec<(AltId, AltId)>> {
    let graph = build_delta_graph(d, menu, t)?;
    let mut forced = Vec::new();
    for &(i, j, _) in &graph.edges {
        if !graph.reachable(j, i) {
            forced.push(order(i, j));
        }
    }
    forced.sort_unstable();
    Ok(forced)
}

/// Builds the model the flow weights γ describe: off-diagonal rates are γ
/// on Δ-positive pairs, the binary-odds transfer of γ on their reverses,
/// and raw binary shares on Δ-zero pairs; everything is scaled so each row
/// keeps at least half its mass in place, and the initial distribution is
/// the data itself. Binary menus get share-proportional blocks.
///
/// The result is checked before being returned: it must satisfy the model
/// assumptions and reproduce the data on `menu` and on every binary
/// sub-menu to within `t.eq` (which holds exactly when Dγ = 0 — a γ that
/// does not solve the system is rejected here).
pub fn construct_model(
    d: &ChoiceDataset,
    system: &DesignSystem,
    gamma: &[Rat],
    t: &Tolerances,
) -> Result<MscModel> {
    construct_with(d, system, gamma, &BTreeSet::new(), t)
}

/// Identity-exploration model: every menu of three or more alternatives
/// gets the identity matrix (stay where you start), binary menus get
/// share-proportional blocks, and every initial distribution is the data.
/// Rationalizes any well-formed dataset, one block per stored menu.
pub fn construct_trivial(d: &ChoiceDataset) -> Result<MscModel> {
    let mut model = MscModel::new(d.universe().clone());
    for menu in d.menus().cloned().collect::<Vec<_>>() {
        let probs = d.get(&menu).expect("iterating stored menus").to_vec();
        let n = menu.len();
        let q = if n == 2 {
            binary_block(probs[0], probs[1])
        } else {
            (0..n)
                .map(|r| (0..n).map(|c| f64::from(u8::from(r == c))).collect())
                .collect()
        };
        model.set_block(menu, q, probs)?;
    }
    Ok(model)
}

fn binary_block(share_x: f64, share_y: f64) -> Vec<Vec<f64>> {
    vec![
        vec![1.0 - 0.5 * share_y, 0.5 * share_y],
        vec![0.5 * share_x, 1.0 - 0.5 * share_x],
    ]
}

fn construct_with(
    d: &ChoiceDataset,
    system: &DesignSystem,
    gamma: &[Rat],
    forced: &BTreeSet<(AltId, AltId)>,
    t: &Tolerances,
) -> Result<MscModel> {
    let menu = &system.menu;
    if gamma.len() != system.pairs.len() {
        return Err(Error::DimensionMismatch {
            what: "flow weights",
            expected: system.pairs.len(),
            got: gamma.len(),
        });
    }
    if let Some(g) = gamma.iter().find(|g| g.is_negative()) {
        return Err(Error::ConstructionFailed(format!(
            "flow weights must be nonnegative, got {g}"
        )));
    }
    let assigned: BTreeMap<(AltId, AltId), &Rat> =
        system.pairs.iter().copied().zip(gamma).collect();
    let members = menu.members();
    let n = members.len();

    // exact off-diagonal rates, then one scale factor for the whole block
    let mut raw = vec![vec![Rat::zero(); n]; n];
    for (a, &i) in members.iter().enumerate() {
        for (b, &j) in members.iter().enumerate() {
            if a == b || forced.contains(&order(i, j)) {
                continue;
            }
            let binary = Menu::binary(d.universe(), i, j)?;
            raw[a][b] = if let Some(&g) = assigned.get(&(i, j)) {
                g.clone()
            } else if let Some(&g) = assigned.get(&(j, i)) {
                // carry the reverse rate over at binary odds, keeping the
                // menu-independent transition ratio intact
                g * d.prob_exact(&binary, j)? / d.prob_exact(&binary, i)?
            } else {
                d.prob_exact(&binary, j)?
            };
        }
    }
    let max_out: Rat = raw
        .iter()
        .map(|row| row.iter().fold(Rat::zero(), |acc, v| acc + v))
        .max()
        .expect("menus are nonempty");
    let kappa = if max_out.is_zero() {
        Rat::one()
    } else {
        Rat::new(1.into(), 2.into()) / &max_out
    };
    let mut q = vec![vec![0.0f64; n]; n];
    for a in 0..n {
        let mut off_mass = Rat::zero();
        for b in 0..n {
            if a != b {
                let scaled = &kappa * &raw[a][b];
                q[a][b] = rat_to_f64(&scaled);
                off_mass += scaled;
            }
        }
        q[a][a] = rat_to_f64(&(Rat::one() - off_mass));
    }

    let mut model = MscModel::new(d.universe().clone());
    let data = d
        .get(menu)
        .ok_or_else(|| Error::MenuNotStored(menu.label(d.universe())))?;
    model.set_block(menu.clone(), q, data.to_vec())?;
    for (i, j) in menu.member_pairs() {
        let binary = Menu::binary(d.universe(), i, j)?;
        let (si, sj) = (d.prob(&binary, i)?, d.prob(&binary, j)?);
        model.set_block(binary, binary_block(si, sj), vec![si, sj])?;
    }

    let assumptions = crate::core::validate_model(&model, t);
    if !assumptions.passes() {
        return Err(Error::ConstructionFailed(format!(
            "constructed model violates its own assumptions:\n{}",
            assumptions.render(d.universe())
        )));
    }
    let menus: Vec<Menu> = model.menus().cloned().collect();
    let (ok, gap) = verify_rationalizes(&model, d, &menus, t)?;
    if !ok {
        return Err(Error::ConstructionFailed(format!(
            "weights do not balance the data (worst gap {gap:.3e}); they must solve the flow system exactly"
        )));
    }
    Ok(model)
}

/// Builds an irreducible model for data passing the irreducibility
/// condition. Forced pairs get rate zero; the remaining Δ-positive pairs
/// all sit on cycles, so the flow system restricted to them has a strictly
/// positive solution, and the Δ-zero pairs' share rates glue the rest of
/// the menu together. The grand block is required to come out as a single
/// communicating class.
pub fn construct_irreducible(d: &ChoiceDataset, menu: &Menu, t: &Tolerances) -> Result<MscModel> {
    let verdict = irreducibility_condition(d, menu, t)?;
    if !verdict.holds {
        let (i, j) = verdict.blocking_pair.expect("failed verdicts carry a pair");
        return Err(Error::ConstructionFailed(format!(
            "irreducibility condition fails: no chain of comparable pairs links {} and {}",
            d.universe().name(i),
            d.universe().name(j)
        )));
    }
    let forced: BTreeSet<(AltId, AltId)> = forced_zero_pairs(d, menu, t)?.into_iter().collect();
    let reduced = build_design_system(d, menu, t)?.without_pairs(&forced);
    let feasibility = solve_feasibility(&reduced, Grade::Strict);
    let gamma = match (feasibility.status, feasibility.gamma) {
        (FeasibilityStatus::StrictlyPositive, Some(gamma)) => gamma,
        _ => {
            return Err(Error::ConstructionFailed(
                "no strictly positive weights exist on the unforced pairs".into(),
            ))
        }
    };
    let model = construct_with(d, &reduced, &gamma, &forced, t)?;
    let block = model.require_block(menu)?;
    let decomposition = scc_decompose(&block.q, t);
    if !decomposition.is_irreducible() {
        return Err(Error::NotIrreducible {
            classes: decomposition.classes.len(),
        });
    }
    Ok(model)
}

/// Does the model reproduce the dataset on each of the given menus in the
/// patient limit? Returns the verdict at tolerance `t.eq` together with
/// the worst absolute gap.
pub fn verify_rationalizes(
    model: &MscModel,
    d: &ChoiceDataset,
    menus: &[Menu],
    t: &Tolerances,
) -> Result<(bool, f64)> {
    let mut worst = 0.0f64;
    for menu in menus {
        let block = model.require_block(menu)?;
        let limit = generate_limiting(&block.q, &block.pi, t)?;
        for (pos, &a) in menu.members().iter().enumerate() {
            let gap = (limit[pos] - d.prob(menu, a)?).abs();
            worst = worst.max(gap);
        }
    }
    Ok((worst <= t.eq, worst))
}
