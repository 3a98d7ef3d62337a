//! Classical testable properties, on both sides of the model/data divide:
//! positivity and odds-invariance (IIA) for choice data, detailed balance
//! and the cycle-products criterion for transition matrices, and fitting a
//! utility (Luce) rule to data.

use std::collections::BTreeMap;

use thiserror::Error as ThisError;

use crate::core::{AltId, ChoiceDataset, Menu, Tolerances};
use crate::cycles::{delta, delta_sign};
use crate::markov::{restrict, scc_decompose, stationary_distribution};
use crate::{Error, Result};

/// Largest matrix the brute-force cycle-products check will accept.
pub const DEFAULT_KOLMOGOROV_CAP: usize = 9;

fn ensure_square(q: &[Vec<f64>]) -> Result<usize> {
    let n = q.len();
    for row in q {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                what: "transition matrix row",
                expected: n,
                got: row.len(),
            });
        }
    }
    Ok(n)
}

/// Outcome of [`check_positivity`].
#[derive(Clone, Debug, PartialEq)]
pub struct PositivityReport {
    pub positive: bool,
    /// Stored sub-menus and alternatives whose probability is not strictly
    /// positive (at the Δ zero threshold).
    pub witnesses: Vec<(Menu, AltId)>,
}

/// Does every alternative get chosen with strictly positive probability on
/// `menu` and on every *stored* sub-menu of it? `menu` itself must be
/// stored.
pub fn check_positivity(
    d: &ChoiceDataset,
    menu: &Menu,
    t: &Tolerances,
) -> Result<PositivityReport> {
    if !d.contains(menu) {
        return Err(Error::MenuNotStored(menu.label(d.universe())));
    }
    let mut witnesses = Vec::new();
    for sub in d.menus().filter(|m| m.is_subset_of(menu)) {
        for &a in sub.members() {
            if d.prob(sub, a)? <= t.delta {
                witnesses.push((sub.clone(), a));
            }
        }
    }
    Ok(PositivityReport {
        positive: witnesses.is_empty(),
        witnesses,
    })
}

/// Outcome of [`check_iia`].
#[derive(Clone, Debug, PartialEq)]
pub struct IiaReport {
    pub holds: bool,
    /// Largest |Δ| over the menu's pairs (0.0 when the menu has no signal).
    pub max_violation: f64,
    /// The pair attaining `max_violation`, oriented so Δ > 0; `None` when
    /// the property holds.
    pub worst_pair: Option<(AltId, AltId)>,
}

/// Odds-invariance across menus: the relative odds of i over j inside
/// `menu` must match the binary menu {i,j}, i.e. Δ_ij(menu) = 0 for every
/// pair. This is the choice-data face of the Luce rule.
pub fn check_iia(d: &ChoiceDataset, menu: &Menu, t: &Tolerances) -> Result<IiaReport> {
    let mut max_violation = 0.0f64;
    let mut worst_pair = None;
    for (i, j) in menu.member_pairs() {
        if delta_sign(d, menu, i, j, t)? == 0 {
            continue;
        }
        let value = delta(d, menu, i, j)?;
        if value.abs() > max_violation {
            max_violation = value.abs();
            worst_pair = Some(if value > 0.0 { (i, j) } else { (j, i) });
        }
    }
    Ok(IiaReport {
        holds: worst_pair.is_none(),
        max_violation,
        worst_pair,
    })
}

/// One unbalanced pair found by [`check_detailed_balance`]: probability
/// flow i→j against j→i, by matrix position.
#[derive(Clone, Debug, PartialEq)]
pub struct BalanceViolation {
    pub i: usize,
    pub j: usize,
    pub flow_ij: f64,
    pub flow_ji: f64,
}

/// Outcome of [`check_detailed_balance`].
#[derive(Clone, Debug, PartialEq)]
pub struct BalanceReport {
    pub balanced: bool,
    pub violations: Vec<BalanceViolation>,
}

/// Does `rho` balance `q` pair by pair: ρ_i·q_ij = ρ_j·q_ji for all i, j?
/// All violations are collected, in position order.
pub fn check_detailed_balance(
    q: &[Vec<f64>],
    rho: &[f64],
    t: &Tolerances,
) -> Result<BalanceReport> {
    let n = ensure_square(q)?;
    if rho.len() != n {
        return Err(Error::DimensionMismatch {
            what: "balancing distribution",
            expected: n,
            got: rho.len(),
        });
    }
    let mut violations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let flow_ij = rho[i] * q[i][j];
            let flow_ji = rho[j] * q[j][i];
            if !t.approx_eq(flow_ij, flow_ji) {
                violations.push(BalanceViolation {
                    i,
                    j,
                    flow_ij,
                    flow_ji,
                });
            }
        }
    }
    Ok(BalanceReport {
        balanced: violations.is_empty(),
        violations,
    })
}

/// A cycle of states whose forward and backward transition products differ,
/// found by [`check_kolmogorov`]. Positions index the full matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleViolation {
    pub cycle: Vec<usize>,
    pub forward: f64,
    pub backward: f64,
}

/// Outcome of [`check_kolmogorov`].
#[derive(Clone, Debug, PartialEq)]
pub struct KolmogorovReport {
    pub reversible: bool,
    /// First offending cycle in enumeration order, when not reversible.
    pub violation: Option<CycleViolation>,
}

/// Cycle-products test for reversibility: around every cycle of distinct
/// states, the product of transition probabilities must equal the product
/// along the reversed cycle (relative tolerance `t.eq`, entries below the
/// zero threshold treated as exact zeros).
///
/// Cycles are enumerated within *closed* communicating classes only. Open
/// classes carry no mass in the patient limit, so their internal cycles
/// constrain nothing, and any cycle crossing class boundaries has both
/// products zero. Scoping the enumeration this way keeps this check
/// equivalent to the stationary-distribution route ([`check_reversible`])
/// on every stochastic matrix.
///
/// The enumeration is factorial in class size; matrices larger than `cap`
/// states are refused ([`check_reversible`] has no such cap).
pub fn check_kolmogorov(q: &[Vec<f64>], t: &Tolerances, cap: usize) -> Result<KolmogorovReport> {
    let n = ensure_square(q)?;
    if n > cap {
        return Err(Error::CapacityExceeded {
            what: "cycle-products reversibility check (the detailed-balance route scales further)",
            size: n,
            cap,
        });
    }
    let q_eff: Vec<Vec<f64>> = q
        .iter()
        .map(|row| {
            row.iter()
                .map(|&v| if t.is_zero(v, 1.0) { 0.0 } else { v })
                .collect()
        })
        .collect();
    let scc = scc_decompose(q, t);
    for (_, class) in scc.closed_classes() {
        if let Some(violation) = class_cycle_violation(&q_eff, class, t) {
            return Ok(KolmogorovReport {
                reversible: false,
                violation: Some(violation),
            });
        }
    }
    Ok(KolmogorovReport {
        reversible: true,
        violation: None,
    })
}

/// Enumerates distinct-state cycles of length ≥ 3 inside one class, each
/// once up to rotation and reversal (smallest state first, second state
/// below the last), and returns the first with mismatched products.
fn class_cycle_violation(
    q: &[Vec<f64>],
    class: &[usize],
    t: &Tolerances,
) -> Option<CycleViolation> {
    let k = class.len();
    if k < 3 {
        return None;
    }

    fn extend(
        start: usize,
        path: &mut Vec<usize>,
        used: &mut Vec<bool>,
        q: &[Vec<f64>],
        class: &[usize],
        t: &Tolerances,
    ) -> Option<CycleViolation> {
        for next in start + 1..class.len() {
            if used[next] {
                continue;
            }
            path.push(next);
            used[next] = true;
            if path.len() >= 3 && path[1] < *path.last().unwrap() {
                let cycle: Vec<usize> = path.iter().map(|&p| class[p]).collect();
                let mut forward = 1.0;
                let mut backward = 1.0;
                for (idx, &s) in cycle.iter().enumerate() {
                    let next_s = cycle[(idx + 1) % cycle.len()];
                    forward *= q[s][next_s];
                    backward *= q[next_s][s];
                }
                if (forward - backward).abs() > t.eq * forward.max(backward) {
                    used[*path.last().unwrap()] = false;
                    return Some(CycleViolation {
                        cycle,
                        forward,
                        backward,
                    });
                }
            }
            let found = extend(start, path, used, q, class, t);
            used[next] = false;
            path.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    for start in 0..k {
        let mut used = vec![false; k];
        used[start] = true;
        if let Some(v) = extend(start, &mut vec![start], &mut used, q, class, t) {
            return Some(v);
        }
    }
    None
}

/// Stationary-distribution route to reversibility: a stochastic matrix is
/// reversible iff within every closed communicating class, the class
/// stationary distribution satisfies detailed balance. Open classes impose
/// nothing (their limiting mass is zero).
pub fn check_reversible(q: &[Vec<f64>], t: &Tolerances) -> Result<bool> {
    ensure_square(q)?;
    let scc = scc_decompose(q, t);
    for (_, class) in scc.closed_classes() {
        let sub = restrict(q, class);
        let rho = stationary_distribution(&sub, t)?;
        if !check_detailed_balance(&sub, rho.as_slice(), t)?.balanced {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Why a dataset admits no utility-rule representation.
#[derive(Debug, ThisError)]
pub enum LuceError {
    #[error("choice probability of {alt} on menu {menu} is not strictly positive")]
    NotPositive { menu: String, alt: String },
    #[error(
        "menu {menu} shifts the odds of {i} over {j} away from the binary shares (Δ = {delta})"
    )]
    NotIia {
        menu: String,
        i: String,
        j: String,
        delta: f64,
    },
    #[error("no positive utility vector reproduces the data; best fit leaves residual {residual}")]
    NotRepresentable { residual: f64 },
    #[error(transparent)]
    Data(#[from] Error),
}

/// A fitted utility rule: p(x|M) = u_x / Σ_{y∈M} u_y.
#[derive(Clone, Debug)]
pub struct LuceFit {
    /// The alternative whose utility is normalized to 1.
    pub anchor: AltId,
    pub utilities: BTreeMap<AltId, f64>,
    /// Worst absolute gap between the data and the fitted rule over the
    /// menus the fit was asked to cover.
    pub residual: f64,
}

/// Fits a utility rule to the data on the given menus, or explains why none
/// exists. The anchor is the smallest alternative appearing in `menus`; the
/// other utilities are read off its binary menus, which must be stored.
pub fn fit_luce(
    d: &ChoiceDataset,
    menus: &[Menu],
    t: &Tolerances,
) -> std::result::Result<LuceFit, LuceError> {
    if menus.is_empty() {
        return Err(Error::InvalidDataset("no menus given to fit".into()).into());
    }
    let u = d.universe();
    let mut union: Vec<AltId> = menus
        .iter()
        .flat_map(|m| m.members().iter().copied())
        .collect();
    union.sort_unstable();
    union.dedup();

    for menu in menus {
        for &a in menu.members() {
            if d.prob(menu, a)? <= t.delta {
                return Err(LuceError::NotPositive {
                    menu: menu.label(u),
                    alt: u.name(a).to_string(),
                });
            }
        }
    }
    for menu in menus {
        let report = check_iia(d, menu, t)?;
        if let Some((i, j)) = report.worst_pair {
            return Err(LuceError::NotIia {
                menu: menu.label(u),
                i: u.name(i).to_string(),
                j: u.name(j).to_string(),
                delta: report.max_violation,
            });
        }
    }

    let anchor = union[0];
    let mut utilities = BTreeMap::new();
    for &a in &union {
        let value = if a == anchor {
            1.0
        } else {
            let binary = Menu::binary(u, anchor, a)?;
            let anchor_share = d.prob(&binary, anchor)?;
            if anchor_share <= t.delta {
                return Err(LuceError::NotPositive {
                    menu: binary.label(u),
                    alt: u.name(anchor).to_string(),
                });
            }
            d.prob(&binary, a)? / anchor_share
        };
        utilities.insert(a, value);
    }

    let mut residual = 0.0f64;
    for menu in menus {
        let total: f64 = menu.members().iter().map(|a| utilities[a]).sum();
        for &a in menu.members() {
            residual = residual.max((d.prob(menu, a)? - utilities[&a] / total).abs());
        }
    }
    if residual > t.eq {
        return Err(LuceError::NotRepresentable { residual });
    }
    Ok(LuceFit {
        anchor,
        utilities,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::Universe;
    use crate::testdata::{
        cyclic_q, forced_zeros_data, fully_comparable_data, luce_dataset, partial_q,
        reversible_only_data, two_class_q, I, J, K, L,
    };

    fn t() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn positivity_on_the_examples_and_a_degenerate_binary() {
        let d = fully_comparable_data();
        let full = d.universe().full_menu();
        let report = check_positivity(&d, &full, &t()).unwrap();
        assert!(report.positive && report.witnesses.is_empty());
        assert!(
            check_positivity(&reversible_only_data(), &full, &t())
                .unwrap()
                .positive
        );

        let mut degenerate = ChoiceDataset::new(Universe::new(["a", "b"]).unwrap());
        let pair = Menu::binary(degenerate.universe(), 0, 1).unwrap();
        degenerate.set_menu(pair.clone(), &[1.0, 0.0]).unwrap();
        let report = check_positivity(&degenerate, &pair, &t()).unwrap();
        assert!(!report.positive);
        assert_eq!(report.witnesses, vec![(pair, 1)]);

        let missing = Menu::new(reversible_only_data().universe(), [I, J, K]).unwrap();
        assert!(matches!(
            check_positivity(&reversible_only_data(), &missing, &t()),
            Err(Error::MenuNotStored(_))
        ));
    }

    #[test]
    fn iia_holds_for_utility_data_not_for_cyclic_data() {
        let dl = luce_dataset(&[1.0, 2.0, 3.0, 4.0]);
        let full = dl.universe().full_menu();
        let report = check_iia(&dl, &full, &t()).unwrap();
        assert!(report.holds);
        assert_eq!(report.max_violation, 0.0);
        assert_eq!(report.worst_pair, None);

        let d2 = fully_comparable_data();
        let report = check_iia(&d2, &d2.universe().full_menu(), &t()).unwrap();
        assert!(!report.holds);
        assert!((report.max_violation - 0.025).abs() < 1e-15);
        assert_eq!(report.worst_pair, Some((I, K)));

        // a binary menu can never disagree with itself
        let pair = Menu::binary(d2.universe(), I, J).unwrap();
        assert!(check_iia(&d2, &pair, &t()).unwrap().holds);
    }

    #[test]
    fn detailed_balance_split_by_matrix() {
        let rho2 = [0.2, 0.2, 0.4, 0.2];
        let report = check_detailed_balance(&two_class_q(), &rho2, &t()).unwrap();
        assert!(report.balanced, "{:?}", report.violations);

        let rho4 = [0.24, 0.3, 0.22, 0.24];
        let report = check_detailed_balance(&partial_q(), &rho4, &t()).unwrap();
        assert!(!report.balanced);
        let ik = report
            .violations
            .iter()
            .find(|v| (v.i, v.j) == (I, K))
            .expect("pair (i,k) must be unbalanced");
        assert!((ik.flow_ij - 0.072).abs() < 1e-15);
        assert!((ik.flow_ji - 0.066).abs() < 1e-15);
        // (i,l) stays balanced even in the unbalanced matrix
        assert!(!report.violations.iter().any(|v| (v.i, v.j) == (I, L)));

        assert!(matches!(
            check_detailed_balance(&two_class_q(), &[0.5, 0.5], &t()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn cycle_products_route() {
        let report = check_kolmogorov(&two_class_q(), &t(), DEFAULT_KOLMOGOROV_CAP).unwrap();
        assert!(report.reversible && report.violation.is_none());

        let report = check_kolmogorov(&cyclic_q(), &t(), DEFAULT_KOLMOGOROV_CAP).unwrap();
        assert!(!report.reversible);
        let v = report.violation.unwrap();
        assert_eq!(v.cycle, vec![I, J, K]);
        assert!((v.forward - 0.0016).abs() < 1e-15);
        assert!((v.backward - 0.0024).abs() < 1e-15);

        let two = vec![vec![0.9, 0.1], vec![0.2, 0.8]];
        assert!(
            check_kolmogorov(&two, &t(), DEFAULT_KOLMOGOROV_CAP)
                .unwrap()
                .reversible
        );

        assert!(matches!(
            check_kolmogorov(&cyclic_q(), &t(), 3),
            Err(Error::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn stationary_route_and_agreement() {
        assert!(check_reversible(&two_class_q(), &t()).unwrap());
        assert!(!check_reversible(&cyclic_q(), &t()).unwrap());
        assert!(!check_reversible(&partial_q(), &t()).unwrap());
        let identity: Vec<Vec<f64>> = (0..4)
            .map(|r| (0..4).map(|c| f64::from(u8::from(r == c))).collect())
            .collect();
        assert!(check_reversible(&identity, &t()).unwrap());

        for q in [two_class_q(), cyclic_q(), partial_q(), identity] {
            assert_eq!(
                check_reversible(&q, &t()).unwrap(),
                check_kolmogorov(&q, &t(), DEFAULT_KOLMOGOROV_CAP)
                    .unwrap()
                    .reversible,
            );
        }
    }

    #[test]
    fn kolmogorov_ignores_open_class_cycles() {
        // states 0..2 form an unbalanced cycle but leak into absorbing 3
        let q = vec![
            vec![0.5, 0.3, 0.1, 0.1],
            vec![0.1, 0.5, 0.3, 0.1],
            vec![0.3, 0.1, 0.5, 0.1],
            vec![0.0, 0.0, 0.0, 1.0],
        ];
        let report = check_kolmogorov(&q, &t(), DEFAULT_KOLMOGOROV_CAP).unwrap();
        assert!(report.reversible, "transient rotation carries no mass");
        assert!(check_reversible(&q, &t()).unwrap());
    }

    #[test]
    fn luce_fit_recovers_utilities() {
        let d = luce_dataset(&[1.0, 2.0, 3.0, 4.0]);
        let menus: Vec<Menu> = d.menus().cloned().collect();
        let fit = fit_luce(&d, &menus, &t()).unwrap();
        assert_eq!(fit.anchor, 0);
        for (a, expected) in [(0, 1.0), (1, 2.0), (2, 3.0), (3, 4.0)] {
            assert!((fit.utilities[&a] - expected).abs() <= 1e-12);
        }
        assert!(fit.residual <= 1e-12);

        let even = luce_dataset(&[3.0, 3.0, 3.0]);
        let menus: Vec<Menu> = even.menus().cloned().collect();
        let fit = fit_luce(&even, &menus, &t()).unwrap();
        assert!(fit.utilities.values().all(|&v| v == 1.0));

        // anchor is the smallest alternative in the menus given, not in the
        // universe
        let partial = [Menu::new(d.universe(), [1, 2]).unwrap()];
        let fit = fit_luce(&d, &partial, &t()).unwrap();
        assert_eq!(fit.anchor, 1);
        assert!((fit.utilities[&2] - 1.5).abs() <= 1e-12);
    }

    #[test]
    fn luce_fit_failure_modes() {
        let d3 = forced_zeros_data();
        let full = d3.universe().full_menu();
        match fit_luce(&d3, &[full], &t()) {
            Err(LuceError::NotIia { delta, .. }) => assert!((delta - 0.036).abs() < 1e-15),
            other => panic!("expected odds-shift failure, got {other:?}"),
        }

        // cyclically biased binaries pass IIA menu by menu but admit no
        // utility vector
        let mut cyclic = ChoiceDataset::new(Universe::new(["a", "b", "c"]).unwrap());
        for (x, y) in [(0, 1), (1, 2)] {
            let m = Menu::binary(cyclic.universe(), x, y).unwrap();
            cyclic.set_menu(m, &[0.6, 0.4]).unwrap();
        }
        let m = Menu::binary(cyclic.universe(), 0, 2).unwrap();
        cyclic.set_menu(m, &[0.4, 0.6]).unwrap();
        let menus: Vec<Menu> = cyclic.menus().cloned().collect();
        match fit_luce(&cyclic, &menus, &t()) {
            Err(LuceError::NotRepresentable { residual }) => assert!(residual > 0.1),
            other => panic!("expected residual failure, got {other:?}"),
        }

        let mut degenerate = ChoiceDataset::new(Universe::new(["a", "b"]).unwrap());
        let pair = Menu::binary(degenerate.universe(), 0, 1).unwrap();
        degenerate.set_menu(pair.clone(), &[1.0, 0.0]).unwrap();
        match fit_luce(&degenerate, &[pair], &t()) {
            Err(LuceError::NotPositive { alt, .. }) => assert_eq!(alt, "b"),
            other => panic!("expected positivity failure, got {other:?}"),
        }

        let missing = Menu::new(reversible_only_data().universe(), [I, J, K]).unwrap();
        assert!(matches!(
            fit_luce(&reversible_only_data(), &[missing], &t()),
            Err(LuceError::Data(Error::MenuNotStored(_)))
        ));

        assert!(matches!(
            fit_luce(&reversible_only_data(), &[], &t()),
            Err(LuceError::Data(Error::InvalidDataset(_)))
        ));
    }
}
