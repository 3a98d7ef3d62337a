//! The Δ-function on pairs of alternatives, the digraph of Δ-positive
//! pairs, sign-consistent cycle detection, and the three data-side
//! conditions that characterize which model classes can rationalize a
//! dataset on a menu.
//!
//! Δ_ij(M) = p(i|M)·p(j|{i,j}) − p(i|{i,j})·p(j|M) compares the relative
//! odds of i over j inside M against the binary menu. Its sign pattern over
//! pairs carries all the information the characterizations need:
//!
//! * data is rationalizable by a **reversible** model *only* (and then by
//!   nothing structurally richer) iff the Δ-positive digraph is acyclic
//!   ([`reversible_only_condition`]);
//! * data admits a **pairwise-comparable** model (every binary comparison
//!   possible in every menu) iff every pair is bounded in a sign-consistent
//!   cycle ([`comparability_condition`]); adding positivity gives the
//!   **fully comparable** class;
//! * data admits an **irreducible** model iff the bounded pairs connect the
//!   whole menu ([`irreducibility_condition`]).

use std::collections::VecDeque;

use crate::axioms::{check_iia, check_positivity};
use crate::core::{AltId, ChoiceDataset, Menu, Tolerances};
use crate::exact::Rat;
use crate::{Error, Result};

/// Largest menu size for which the brute-force cycle enumerator runs.
pub const DEFAULT_CYCLE_CAP: usize = 7;

/// Δ_ij(M) = p(i|M)·p(j|{i,j}) − p(i|{i,j})·p(j|M). Antisymmetric in (i,j).
pub fn delta(d: &ChoiceDataset, menu: &Menu, i: AltId, j: AltId) -> Result<f64> {
    let binary = Menu::binary(d.universe(), i, j)?;
    Ok(d.prob(menu, i)? * d.prob(&binary, j)? - d.prob(&binary, i)? * d.prob(menu, j)?)
}

/// Exact-rational Δ, for consumers that must not round (feasibility solves).
pub(crate) fn delta_exact(d: &ChoiceDataset, menu: &Menu, i: AltId, j: AltId) -> Result<Rat> {
    let binary = Menu::binary(d.universe(), i, j)?;
    Ok(d.prob_exact(menu, i)? * d.prob_exact(&binary, j)?
        - d.prob_exact(&binary, i)? * d.prob_exact(menu, j)?)
}

/// Sign of Δ_ij(M) under the zero-threshold policy: the natural scale of Δ
/// is the larger of the two products whose difference it is, so parse-level
/// float noise classifies as zero while honest signal keeps its sign.
pub fn delta_sign(
    d: &ChoiceDataset,
    menu: &Menu,
    i: AltId,
    j: AltId,
    t: &Tolerances,
) -> Result<i8> {
    let binary = Menu::binary(d.universe(), i, j)?;
    let lhs = d.prob(menu, i)? * d.prob(&binary, j)?;
    let rhs = d.prob(&binary, i)? * d.prob(menu, j)?;
    let value = lhs - rhs;
    if t.is_zero(value, lhs.abs().max(rhs.abs())) {
        Ok(0)
    } else if value > 0.0 {
        Ok(1)
    } else {
        Ok(-1)
    }
}

/// The Δ-positive digraph of a menu: one directed edge (i,j) per pair with
/// Δ_ij(M) > 0 (magnitude attached), plus the list of Δ-zero pairs. Every
/// unordered pair lands in exactly one of the two.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaGraph {
    pub menu: Menu,
    /// Lexicographically sorted (i, j, Δ_ij) with Δ_ij above threshold.
    pub edges: Vec<(AltId, AltId, f64)>,
    /// Unordered pairs (i < j) with |Δ| within threshold.
    pub zero_pairs: Vec<(AltId, AltId)>,
}

impl DeltaGraph {
    pub fn has_edge(&self, i: AltId, j: AltId) -> bool {
        self.edges.iter().any(|&(a, b, _)| (a, b) == (i, j))
    }

    pub fn successors(&self, i: AltId) -> impl Iterator<Item = AltId> + '_ {
        self.edges
            .iter()
            .filter(move |&&(a, _, _)| a == i)
            .map(|&(_, b, _)| b)
    }

    /// Smallest |Δ| among edges — how far the dataset is from flipping a
    /// sign decision. `None` when all pairs are Δ-zero.
    pub fn margin(&self) -> Option<f64> {
        self.edges
            .iter()
            .map(|&(_, _, v)| v)
            .min_by(|a, b| a.total_cmp(b))
    }

    /// Kahn's algorithm on the edge digraph.
    pub fn is_acyclic(&self) -> bool {
        let members = self.menu.members();
        let mut indegree: Vec<usize> = members
            .iter()
            .map(|&v| self.edges.iter().filter(|&&(_, b, _)| b == v).count())
            .collect();
        let mut queue: VecDeque<usize> = (0..members.len()).filter(|&p| indegree[p] == 0).collect();
        let mut seen = 0;
        while let Some(p) = queue.pop_front() {
            seen += 1;
            for next in self.successors(members[p]) {
                let np = self.menu.position(next).unwrap();
                indegree[np] -= 1;
                if indegree[np] == 0 {
                    queue.push_back(np);
                }
            }
        }
        seen == members.len()
    }

    /// Is `to` reachable from `from` along edges? (Trivially true if equal.)
    pub fn reachable(&self, from: AltId, to: AltId) -> bool {
        let mut queue = VecDeque::from([from]);
        let mut seen = vec![from];
        while let Some(v) = queue.pop_front() {
            if v == to {
                return true;
            }
            for w in self.successors(v) {
                if !seen.contains(&w) {
                    seen.push(w);
                    queue.push_back(w);
                }
            }
        }
        false
    }

    /// Extracts some directed cycle, if one exists (DFS back-edge walk).
    pub fn find_cycle(&self) -> Option<Vec<(AltId, AltId)>> {
        for &start in self.menu.members() {
            // follow successors depth-first from `start`, tracking the path
            let mut path: Vec<AltId> = vec![start];
            let mut iters: Vec<Vec<AltId>> = vec![self.successors(start).collect()];
            while let Some(frontier) = iters.last_mut() {
                match frontier.pop() {
                    None => {
                        path.pop();
                        iters.pop();
                    }
                    Some(next) => {
                        if let Some(at) = path.iter().position(|&v| v == next) {
                            let cycle = &path[at..];
                            return Some(
                                cycle
                                    .iter()
                                    .zip(cycle.iter().skip(1).chain([&next]))
                                    .map(|(&a, &b)| (a, b))
                                    .collect(),
                            );
                        }
                        path.push(next);
                        iters.push(self.successors(next).collect());
                    }
                }
            }
        }
        None
    }
}

/// Computes the Δ-positive digraph of `menu` under the zero-threshold
/// policy. Requires the menu and all its binary sub-menus to be stored.
pub fn build_delta_graph(d: &ChoiceDataset, menu: &Menu, t: &Tolerances) -> Result<DeltaGraph> {
    let mut edges = Vec::new();
    let mut zero_pairs = Vec::new();
    for (i, j) in menu.member_pairs() {
        match delta_sign(d, menu, i, j, t)? {
            0 => zero_pairs.push((i, j)),
            1 => edges.push((i, j, delta(d, menu, i, j)?)),
            _ => edges.push((j, i, delta(d, menu, j, i)?)),
        }
    }
    edges.sort_by_key(|&(a, b, _)| (a, b));
    Ok(DeltaGraph {
        menu: menu.clone(),
        edges,
        zero_pairs,
    })
}

/// A cycle of alternatives over some subset M' ⊆ M: ordered pairs chaining
/// cyclically through each element of M' exactly once, together with the
/// shared sign of all member Δ values (+1, −1, or 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleWitness {
    pub pairs: Vec<(AltId, AltId)>,
    pub sign: i8,
}

impl CycleWitness {
    pub fn render(&self, u: &crate::core::Universe) -> String {
        let body: Vec<String> = self
            .pairs
            .iter()
            .map(|&(a, b)| format!("({},{})", u.name(a), u.name(b)))
            .collect();
        let sign = match self.sign {
            1 => "+",
            -1 => "−",
            _ => "0",
        };
        format!("{{{}}} sign {}", body.join(","), sign)
    }
}

/// Brute-force enumeration of every sign-consistent cycle of alternatives
/// over every subset of `menu`. Sign-consistency is strict: all member Δ
/// values must share the same sign class (all +, all −, or all 0under the
/// threshold); mixed zero/positive cycles do not qualify.
///
/// This is the defining form of the condition — deliberately exhaustive and
/// slow — kept as the oracle against which the graph-based checks below are
/// validated. Menus beyond `cap` members are refused.
pub fn enumerate_sign_consistent_cycles(
    d: &ChoiceDataset,
    menu: &Menu,
    t: &Tolerances,
    cap: usize,
) -> Result<Vec<CycleWitness>> {
    if menu.len() > cap {
        return Err(Error::CapacityExceeded {
            what: "sign-consistent cycle enumeration",
            size: menu.len(),
            cap,
        });
    }
    let members = menu.members();
    let n = members.len();
    // sign[a][b] for positions a ≠ b
    let mut sign = vec![vec![0i8; n]; n];
    for (a, &va) in members.iter().enumerate() {
        for (b, &vb) in members.iter().enumerate() {
            if a != b {
                sign[a][b] = delta_sign(d, menu, va, vb, t)?;
            }
        }
    }

    let mut found = Vec::new();
    // Two-element cycles {(i,j),(j,i)}: member signs are s and −s, so they
    // are sign-consistent exactly when Δ_ij = 0.
    for a in 0..n {
        for b in a + 1..n {
            if sign[a][b] == 0 {
                found.push(CycleWitness {
                    pairs: vec![(members[a], members[b]), (members[b], members[a])],
                    sign: 0,
                });
            }
        }
    }
    // Longer cycles: enumerate all simple cyclic vertex sequences, start
    // pinned to the smallest member (both orientations are distinct cycles
    // and both get enumerated; a reversal flips the sign).
    fn extend(
        start: usize,
        path: &mut Vec<usize>,
        used: &mut Vec<bool>,
        sign: &[Vec<i8>],
        members: &[AltId],
        found: &mut Vec<CycleWitness>,
    ) {
        for next in start + 1..sign.len() {
            if used[next] {
                continue;
            }
            path.push(next);
            used[next] = true;
            if path.len() >= 3 {
                // try closing the cycle
                let first = sign[*path.last().unwrap()][start];
                let mut class = Some(first);
                for w in path.windows(2) {
                    if sign[w[0]][w[1]] != first {
                        class = None;
                        break;
                    }
                }
                if let Some(s) = class {
                    let mut pairs: Vec<(AltId, AltId)> = path
                        .windows(2)
                        .map(|w| (members[w[0]], members[w[1]]))
                        .collect();
                    pairs.push((members[*path.last().unwrap()], members[start]));
                    found.push(CycleWitness { pairs, sign: s });
                }
            }
            extend(start, path, used, sign, members, found);
            used[next] = false;
            path.pop();
        }
    }
    for start in 0..n {
        let mut used = vec![false; n];
        used[start] = true;
        extend(
            start,
            &mut vec![start],
            &mut used,
            &sign,
            members,
            &mut found,
        );
    }
    Ok(found)
}

/// Data condition for "rationalizable only by reversible models": no
/// sign-consistent nonzero cycle, equivalently the Δ-positive digraph is
/// acyclic. (A nonzero sign-consistent cycle exists iff the digraph has a
/// directed cycle: negative cycles are reversals of positive ones since
/// Δ_ji = −Δ_ij.)
pub fn reversible_only_condition(d: &ChoiceDataset, menu: &Menu, t: &Tolerances) -> Result<bool> {
    Ok(build_delta_graph(d, menu, t)?.is_acyclic())
}

/// Is the pair (i,j) bounded in a sign-consistent cycle? Vacuously true for
/// Δ-zero pairs; a Δ-positive edge is bounded iff some directed cycle of
/// the Δ-positive digraph uses it, i.e. iff j reaches i along edges.
/// Symmetric in its arguments.
pub fn bounded_in_cycle(
    d: &ChoiceDataset,
    menu: &Menu,
    i: AltId,
    j: AltId,
    t: &Tolerances,
) -> Result<bool> {
    let graph = build_delta_graph(d, menu, t)?;
    bounded_in_graph(&graph, i, j, d, menu, t)
}

fn bounded_in_graph(
    graph: &DeltaGraph,
    i: AltId,
    j: AltId,
    d: &ChoiceDataset,
    menu: &Menu,
    t: &Tolerances,
) -> Result<bool> {
    match delta_sign(d, menu, i, j, t)? {
        0 => Ok(true),
        1 => Ok(graph.reachable(j, i)),
        _ => Ok(graph.reachable(i, j)),
    }
}

/// Verdict of the pairwise/fully-comparable data condition.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparabilityVerdict {
    /// Every pair bounded in a cycle: a pairwise-comparable model exists.
    pub pairwise: bool,
    /// Pairwise plus positivity: a fully comparable model exists.
    pub fully: bool,
    /// First pair (lexicographic) failing boundedness, if any.
    pub blocking_pair: Option<(AltId, AltId)>,
}

/// Data condition for pairwise-comparable rationalizability (every pair
/// bounded in a cycle), with the positivity-strengthened "fully comparable"
/// flag alongside.
pub fn comparability_condition(
    d: &ChoiceDataset,
    menu: &Menu,
    t: &Tolerances,
) -> Result<ComparabilityVerdict> {
    let graph = build_delta_graph(d, menu, t)?;
    let mut blocking_pair = None;
    for (i, j) in menu.member_pairs() {
        if !bounded_in_graph(&graph, i, j, d, menu, t)? {
            blocking_pair = Some((i, j));
            break;
        }
    }
    let pairwise = blocking_pair.is_none();
    let fully = pairwise && check_positivity(d, menu, t)?.positive;
    Ok(ComparabilityVerdict {
        pairwise,
        fully,
        blocking_pair,
    })
}

/// Verdict of the irreducibility data condition.
#[derive(Clone, Debug, PartialEq)]
pub struct IrreducibilityVerdict {
    pub holds: bool,
    /// A closed walk over bounded pairs covering the menu (doubled
    /// spanning-tree traversal), when the condition holds.
    pub covering_walk: Option<Vec<(AltId, AltId)>>,
    /// A pair separated by the failure (members of different bounded-pair
    /// components), when it does not.
    pub blocking_pair: Option<(AltId, AltId)>,
}

/// Data condition for irreducible rationalizability: the undirected graph
/// whose edges are the bounded pairs must connect the whole menu. A closed
/// walk covering every member then exists and is returned as witness (the
/// walk may repeat alternatives; only coverage matters).
pub fn irreducibility_condition(
    d: &ChoiceDataset,
    menu: &Menu,
    t: &Tolerances,
) -> Result<IrreducibilityVerdict> {
    let graph = build_delta_graph(d, menu, t)?;
    let members = menu.members();
    let n = members.len();
    let mut ok = vec![vec![false; n]; n];
    for (a, &va) in members.iter().enumerate() {
        for (b, &vb) in members.iter().enumerate().skip(a + 1) {
            let bounded = bounded_in_graph(&graph, va, vb, d, menu, t)?;
            ok[a][b] = bounded;
            ok[b][a] = bounded;
        }
    }
    // BFS from position 0 over bounded pairs, recording tree edges.
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut visited = vec![false; n];
    visited[0] = true;
    let mut queue = VecDeque::from([0usize]);
    let mut order = vec![0usize];
    while let Some(a) = queue.pop_front() {
        for b in 0..n {
            if ok[a][b] && !visited[b] {
                visited[b] = true;
                parent[b] = Some(a);
                queue.push_back(b);
                order.push(b);
            }
        }
    }
    if let Some(outside) = (0..n).find(|&b| !visited[b]) {
        // smallest pair straddling the cut, as the failure certificate
        let inside = (0..n).find(|&a| visited[a]).unwrap();
        let (x, y) = (members[inside.min(outside)], members[inside.max(outside)]);
        return Ok(IrreducibilityVerdict {
            holds: false,
            covering_walk: None,
            blocking_pair: Some((x, y)),
        });
    }
    // Doubled spanning tree: depth-first traversal emitting (down, …, up)
    // pairs gives a closed walk covering every member.
    fn tour(a: usize, children: &[Vec<usize>], members: &[AltId], walk: &mut Vec<(AltId, AltId)>) {
        for &b in &children[a] {
            walk.push((members[a], members[b]));
            tour(b, children, members, walk);
            walk.push((members[b], members[a]));
        }
    }
    let mut children = vec![Vec::new(); n];
    for (b, p) in parent.iter().enumerate() {
        if let Some(a) = *p {
            children[a].push(b);
        }
    }
    let mut walk = Vec::new();
    tour(0, &children, members, &mut walk);
    Ok(IrreducibilityVerdict {
        holds: true,
        covering_walk: (!walk.is_empty()).then_some(walk),
        blocking_pair: None,
    })
}

/// Which model classes can rationalize the data on this menu.
///
/// `rationalizable` is always true — identity transitions with the data as
/// initial distribution reproduce any valid dataset — and is kept in the
/// report to make that explicit. The remaining flags are the data-side
/// conditions of the characterization results, with certificates.
#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub menu: Menu,
    pub rationalizable: bool,
    pub reversible_only: bool,
    pub pairwise: bool,
    pub fully: bool,
    pub irreducible: bool,
    pub luce: bool,
    /// min |Δ| over sign-nonzero pairs: how close the dataset sits to a
    /// different classification. None if every pair is Δ-zero.
    pub delta_margin: Option<f64>,
    /// A Δ-positive cycle (when reversible_only is false).
    pub positive_cycle: Option<CycleWitness>,
    /// First unbounded pair (when pairwise is false).
    pub blocking_pair: Option<(AltId, AltId)>,
    /// Covering closed walk (when irreducible is true).
    pub covering_walk: Option<Vec<(AltId, AltId)>>,
}

/// Runs every data-side condition on one menu.
pub fn classify(d: &ChoiceDataset, menu: &Menu, t: &Tolerances) -> Result<ClassificationReport> {
    let graph = build_delta_graph(d, menu, t)?;
    let reversible_only = graph.is_acyclic();
    let positive_cycle = if reversible_only {
        None
    } else {
        graph
            .find_cycle()
            .map(|pairs| CycleWitness { pairs, sign: 1 })
    };
    let comparability = comparability_condition(d, menu, t)?;
    let irreducibility = irreducibility_condition(d, menu, t)?;
    let luce = check_positivity(d, menu, t)?.positive && check_iia(d, menu, t)?.holds;
    Ok(ClassificationReport {
        menu: menu.clone(),
        rationalizable: true,
        reversible_only,
        pairwise: comparability.pairwise,
        fully: comparability.fully,
        irreducible: irreducibility.holds,
        luce,
        delta_margin: graph.margin(),
        positive_cycle,
        blocking_pair: comparability.blocking_pair,
        covering_walk: irreducibility.covering_walk,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testdata::{
        forced_zeros_data, fully_comparable_data, luce_dataset, reversible_only_data, I, J, K, L,
    };

    fn t() -> Tolerances {
        Tolerances::default()
    }

    fn full(d: &ChoiceDataset) -> Menu {
        d.universe().full_menu()
    }

    #[test]
    fn delta_matches_hand_computed_values() {
        let d2 = fully_comparable_data();
        let m = full(&d2);
        assert!((delta(&d2, &m, I, K).unwrap() - 0.025).abs() < 1e-15);
        assert!((delta(&d2, &m, J, I).unwrap() - 0.015).abs() < 1e-15);
        // antisymmetry
        for (a, b) in m.member_pairs() {
            let fwd = delta(&d2, &m, a, b).unwrap();
            let bwd = delta(&d2, &m, b, a).unwrap();
            assert_eq!(fwd, -bwd);
        }
        let d3 = forced_zeros_data();
        assert_eq!(delta(&d3, &m, I, L).unwrap(), 0.0);
        assert!((delta(&d3, &m, J, I).unwrap() - 0.03).abs() < 1e-15);
    }

    #[test]
    fn delta_graphs_of_the_three_examples() {
        let m = full(&reversible_only_data());

        let g1 = build_delta_graph(&reversible_only_data(), &m, &t()).unwrap();
        let e1: Vec<(usize, usize)> = g1.edges.iter().map(|&(a, b, _)| (a, b)).collect();
        assert_eq!(e1, vec![(K, I), (K, J), (K, L)]);
        assert!((g1.edges[0].2 - 0.1).abs() < 1e-15);
        assert!((g1.edges[1].2 - 0.16).abs() < 1e-15);
        assert!((g1.edges[2].2 - 0.16).abs() < 1e-15);
        assert_eq!(g1.zero_pairs, vec![(I, J), (I, L), (J, L)]);

        let g2 = build_delta_graph(&fully_comparable_data(), &m, &t()).unwrap();
        let e2: Vec<(usize, usize)> = g2.edges.iter().map(|&(a, b, _)| (a, b)).collect();
        assert_eq!(e2, vec![(I, K), (J, I), (J, L), (K, J), (K, L), (L, I)]);
        assert!(g2.zero_pairs.is_empty());
        assert!((g2.margin().unwrap() - 0.005).abs() < 1e-15);

        let g3 = build_delta_graph(&forced_zeros_data(), &m, &t()).unwrap();
        let e3: Vec<(usize, usize)> = g3.edges.iter().map(|&(a, b, _)| (a, b)).collect();
        assert_eq!(e3, vec![(I, K), (J, I), (J, L), (K, J), (K, L)]);
        assert_eq!(g3.zero_pairs, vec![(I, L)]);

        // a utility rule has no Δ signal at all
        let dl = luce_dataset(&[1.0, 2.0, 3.0, 4.0]);
        let gl = build_delta_graph(&dl, &dl.universe().full_menu(), &t()).unwrap();
        assert!(gl.edges.is_empty());
        assert_eq!(gl.zero_pairs.len(), 6);
    }

    #[test]
    fn enumeration_finds_the_benchmark_cycles() {
        let m = full(&fully_comparable_data());
        let cycles2 =
            enumerate_sign_consistent_cycles(&fully_comparable_data(), &m, &t(), DEFAULT_CYCLE_CAP)
                .unwrap();
        let quad = CycleWitness {
            pairs: vec![(I, K), (K, J), (J, L), (L, I)],
            sign: 1,
        };
        assert!(cycles2.contains(&quad), "missing the four-cycle");
        // every nonzero cycle's reversal appears with the opposite sign
        for c in cycles2.iter().filter(|c| c.sign != 0) {
            let mut rev: Vec<_> = c.pairs.iter().map(|&(a, b)| (b, a)).collect();
            rev.reverse();
            let rev = CycleWitness {
                pairs: {
                    // rotate so the smallest member leads again
                    let at = rev
                        .iter()
                        .enumerate()
                        .min_by_key(|(_, &(a, _))| a)
                        .map(|(idx, _)| idx)
                        .unwrap();
                    rev.rotate_left(at);
                    rev
                },
                sign: -c.sign,
            };
            assert!(cycles2.contains(&rev), "missing reversal of {c:?}");
        }

        let cycles1 =
            enumerate_sign_consistent_cycles(&reversible_only_data(), &m, &t(), DEFAULT_CYCLE_CAP)
                .unwrap();
        assert!(!cycles1.is_empty());
        assert!(
            cycles1.iter().all(|c| c.sign == 0),
            "star graph admits only zero cycles"
        );

        let cycles3 =
            enumerate_sign_consistent_cycles(&forced_zeros_data(), &m, &t(), DEFAULT_CYCLE_CAP)
                .unwrap();
        let triangle = CycleWitness {
            pairs: vec![(I, K), (K, J), (J, I)],
            sign: 1,
        };
        assert!(cycles3.contains(&triangle));

        let too_big = Menu::new(&crate::testdata::universe(), [0, 1]).unwrap();
        assert!(matches!(
            enumerate_sign_consistent_cycles(&reversible_only_data(), &too_big, &t(), 1),
            Err(Error::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn condition_verdicts_on_the_three_examples() {
        let m = full(&reversible_only_data());

        assert!(reversible_only_condition(&reversible_only_data(), &m, &t()).unwrap());
        assert!(!reversible_only_condition(&fully_comparable_data(), &m, &t()).unwrap());
        assert!(!reversible_only_condition(&forced_zeros_data(), &m, &t()).unwrap());

        let c2 = comparability_condition(&fully_comparable_data(), &m, &t()).unwrap();
        assert!(c2.pairwise && c2.fully && c2.blocking_pair.is_none());
        let c3 = comparability_condition(&forced_zeros_data(), &m, &t()).unwrap();
        assert!(!c3.pairwise);
        assert_eq!(c3.blocking_pair, Some((J, L)));
        let c1 = comparability_condition(&reversible_only_data(), &m, &t()).unwrap();
        assert!(!c1.pairwise);

        let i3 = irreducibility_condition(&forced_zeros_data(), &m, &t()).unwrap();
        assert!(i3.holds);
        let walk = i3.covering_walk.unwrap();
        let mut covered: Vec<usize> = walk.iter().map(|&(a, _)| a).collect();
        covered.sort_unstable();
        covered.dedup();
        assert_eq!(covered, vec![I, J, K, L], "walk must cover the menu");
        // walk chains cyclically
        for (idx, &(_, b)) in walk.iter().enumerate() {
            assert_eq!(b, walk[(idx + 1) % walk.len()].0);
        }

        let i2 = irreducibility_condition(&fully_comparable_data(), &m, &t()).unwrap();
        assert!(i2.holds, "pairwise implies irreducible");
        let i1 = irreducibility_condition(&reversible_only_data(), &m, &t()).unwrap();
        assert!(!i1.holds);
        let (a, b) = i1.blocking_pair.unwrap();
        assert!(a == K || b == K, "k is the separated alternative");
    }

    #[test]
    fn bounded_pairs_in_the_comparable_datasets() {
        let m = full(&fully_comparable_data());
        for (a, b) in m.member_pairs() {
            assert!(bounded_in_cycle(&fully_comparable_data(), &m, a, b, &t()).unwrap());
            // symmetry
            assert!(bounded_in_cycle(&fully_comparable_data(), &m, b, a, &t()).unwrap());
        }
        assert!(!bounded_in_cycle(&forced_zeros_data(), &m, J, L, &t()).unwrap());
        assert!(!bounded_in_cycle(&forced_zeros_data(), &m, K, L, &t()).unwrap());
        assert!(bounded_in_cycle(&forced_zeros_data(), &m, I, L, &t()).unwrap()); // Δ = 0
        assert!(bounded_in_cycle(&forced_zeros_data(), &m, I, K, &t()).unwrap());
    }

    #[test]
    fn classify_summarizes_the_benchmark_datasets() {
        let m = full(&reversible_only_data());

        let r1 = classify(&reversible_only_data(), &m, &t()).unwrap();
        assert!(r1.rationalizable && r1.reversible_only && !r1.pairwise && !r1.irreducible);
        assert!(!r1.luce, "the reversible-only data violates IIA");
        assert!(r1.positive_cycle.is_none());

        let r2 = classify(&fully_comparable_data(), &m, &t()).unwrap();
        assert!(!r2.reversible_only && r2.pairwise && r2.fully && r2.irreducible);
        let cycle = r2.positive_cycle.unwrap();
        assert!(cycle.pairs.len() >= 3);
        // certificate pairs really are Δ-positive edges
        let g2 = build_delta_graph(&fully_comparable_data(), &m, &t()).unwrap();
        for &(a, b) in &cycle.pairs {
            assert!(g2.has_edge(a, b));
        }

        let r3 = classify(&forced_zeros_data(), &m, &t()).unwrap();
        assert!(!r3.reversible_only && !r3.pairwise && r3.irreducible && !r3.luce);

        let dl = luce_dataset(&[1.0, 2.0, 3.0, 4.0]);
        let rl = classify(&dl, &dl.universe().full_menu(), &t()).unwrap();
        assert!(
            rl.rationalizable
                && rl.reversible_only
                && rl.pairwise
                && rl.fully
                && rl.irreducible
                && rl.luce
        );
        assert_eq!(rl.delta_margin, None);
    }

    #[test]
    fn graph_checks_agree_with_enumeration() {
        // the reduction from subset-quantified cycles to digraph reachability
        for d in [
            reversible_only_data(),
            fully_comparable_data(),
            forced_zeros_data(),
        ] {
            let m = full(&d);
            let witnesses =
                enumerate_sign_consistent_cycles(&d, &m, &t(), DEFAULT_CYCLE_CAP).unwrap();
            let any_nonzero = witnesses.iter().any(|c| c.sign != 0);
            assert_eq!(
                reversible_only_condition(&d, &m, &t()).unwrap(),
                !any_nonzero
            );
            for (a, b) in m.member_pairs() {
                let s = delta_sign(&d, &m, a, b, &t()).unwrap();
                let expected = if s == 0 {
                    true
                } else {
                    let (x, y) = if s > 0 { (a, b) } else { (b, a) };
                    witnesses
                        .iter()
                        .any(|c| c.sign == 1 && c.pairs.contains(&(x, y)))
                };
                assert_eq!(bounded_in_cycle(&d, &m, a, b, &t()).unwrap(), expected);
            }
        }
    }
}
