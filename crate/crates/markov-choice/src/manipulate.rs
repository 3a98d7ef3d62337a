//! Choice-architecture interventions on an existing model: restricting
//! which comparisons are possible, adding a dominated decoy, and nudging
//! where exploration starts — together with robustness checks that say
//! when such interventions can or cannot move choice.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::core::{AltId, Menu, ModelBlock, MscModel, Tolerances, Universe};
use crate::markov::{generate_finite, generate_limiting, scc_decompose};
use crate::{Error, Result};

fn order(i: AltId, j: AltId) -> (AltId, AltId) {
    (i.min(j), i.max(j))
}

/// How a restriction rescales the pairwise comparison rates.
#[derive(Clone, Debug, PartialEq)]
pub enum RestrictionKind {
    /// Binary architecture: a comparison is either removed (the zeroed
    /// pairs) or kept at a common factor `c`.
    Strict { c: f64 },
    /// Arbitrary nonnegative factor per unordered pair; absent pairs keep
    /// factor 1.
    Weak(BTreeMap<(AltId, AltId), f64>),
}

/// A symmetric rescaling of a menu's off-diagonal transition rates:
/// q′_ij = r_ij·q_ij with r_ij = r_ji, diagonal recomputed to keep rows
/// stochastic. Models making some comparisons harder or impossible.
#[derive(Clone, Debug, PartialEq)]
pub struct Restriction {
    pub menu: Menu,
    /// Unordered pairs whose comparisons are removed outright.
    pub zeroed_pairs: Vec<(AltId, AltId)>,
    pub kind: RestrictionKind,
}

impl Restriction {
    /// Removes exactly the given pairs, leaving every other rate untouched.
    pub fn strict(menu: Menu, zeroed: impl IntoIterator<Item = (AltId, AltId)>) -> Self {
        Restriction {
            menu,
            zeroed_pairs: zeroed.into_iter().map(|(i, j)| order(i, j)).collect(),
            kind: RestrictionKind::Strict { c: 1.0 },
        }
    }

    /// Rescales pairs by the given factors (missing pairs keep factor 1).
    pub fn weak(menu: Menu, factors: BTreeMap<(AltId, AltId), f64>) -> Self {
        let mut normalized = BTreeMap::new();
        for ((i, j), f) in factors {
            normalized.insert(order(i, j), f);
        }
        Restriction {
            menu,
            zeroed_pairs: Vec::new(),
            kind: RestrictionKind::Weak(normalized),
        }
    }

    fn factor(&self, i: AltId, j: AltId) -> f64 {
        let key = order(i, j);
        if self.zeroed_pairs.contains(&key) {
            return 0.0;
        }
        match &self.kind {
            RestrictionKind::Strict { c } => *c,
            RestrictionKind::Weak(map) => map.get(&key).copied().unwrap_or(1.0),
        }
    }

    pub fn describe(&self, u: &Universe) -> String {
        let mut parts: Vec<String> = self
            .zeroed_pairs
            .iter()
            .map(|&(i, j)| format!("{{{},{}}} removed", u.name(i), u.name(j)))
            .collect();
        match &self.kind {
            RestrictionKind::Strict { c } if *c != 1.0 => {
                parts.push(format!("all other pairs scaled by {c}"));
            }
            RestrictionKind::Strict { .. } => {}
            RestrictionKind::Weak(map) => {
                for (&(i, j), f) in map {
                    parts.push(format!("{{{},{}}} × {f}", u.name(i), u.name(j)));
                }
            }
        }
        if parts.is_empty() {
            "no change".to_string()
        } else {
            parts.join(", ")
        }
    }
}

/// Applies a restriction to the block of its menu, rejecting it unless the
/// result is still a well-formed model of the same shape: every factor
/// finite and nonnegative, every diagonal entry still positive, and the
/// communicating-class structure (membership and closedness) unchanged.
/// The initial distribution is untouched.
pub fn apply_restriction(model: &MscModel, r: &Restriction, t: &Tolerances) -> Result<MscModel> {
    let block = model.require_block(&r.menu)?;
    let restricted = restricted_block(block, &r.menu, r, t)?;
    let mut out = model.clone();
    out.set_block(r.menu.clone(), restricted.q, restricted.pi)?;
    Ok(out)
}

fn restricted_block(
    block: &ModelBlock,
    menu: &Menu,
    r: &Restriction,
    t: &Tolerances,
) -> Result<ModelBlock> {
    if let RestrictionKind::Strict { c } = r.kind {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::RestrictionRejected(format!(
                "the common factor must be positive and finite, got {c}"
            )));
        }
    }
    let members = menu.members();
    for &(i, j) in &r.zeroed_pairs {
        if !menu.contains(i) || !menu.contains(j) {
            return Err(Error::RestrictionRejected(format!(
                "pair ({i},{j}) is not inside the menu"
            )));
        }
    }
    if let RestrictionKind::Weak(map) = &r.kind {
        for (&(i, j), &f) in map {
            if !menu.contains(i) || !menu.contains(j) {
                return Err(Error::RestrictionRejected(format!(
                    "pair ({i},{j}) is not inside the menu"
                )));
            }
            if !(f >= 0.0 && f.is_finite()) {
                return Err(Error::RestrictionRejected(format!(
                    "factor for ({i},{j}) must be finite and nonnegative, got {f}"
                )));
            }
        }
    }

    let n = members.len();
    let mut q = vec![vec![0.0f64; n]; n];
    for a in 0..n {
        let mut off = 0.0f64;
        for b in 0..n {
            if a == b {
                continue;
            }
            q[a][b] = block.q[a][b] * r.factor(members[a], members[b]);
            off += q[a][b];
        }
        let diagonal = 1.0 - off;
        if diagonal <= t.delta {
            return Err(Error::RestrictionRejected(format!(
                "alternative {} would keep no dwell mass (diagonal {diagonal})",
                members[a]
            )));
        }
        q[a][a] = diagonal;
    }

    let before = scc_decompose(&block.q, t);
    let after = scc_decompose(&q, t);
    if before.classes != after.classes || before.closed != after.closed {
        return Err(Error::RestrictionRejected(
            "the restriction reshapes the communicating classes".into(),
        ));
    }
    Ok(ModelBlock {
        q,
        pi: block.pi.clone(),
    })
}

/// Which family of restrictions a robustness sweep ranges over.
#[derive(Clone, Copy, Debug)]
pub enum RobustnessScope {
    /// Every valid restriction removing exactly one pair.
    StrictSinglePair,
    /// `count` random weak restrictions (factors uniform on [0,2)), drawn
    /// reproducibly from `seed`. Invalid draws are redrawn.
    WeakSamples { count: usize, seed: u64 },
}

/// Outcome of [`robustness_to_restrictions`].
#[derive(Clone, Debug)]
pub struct RobustnessReport {
    pub robust: bool,
    /// How many restrictions were actually applied (rejected draws — those
    /// that would starve a diagonal or reshape the communicating classes —
    /// do not count).
    pub tried: usize,
    /// A restriction that moved the limiting distribution, with the size
    /// of the move.
    pub counterexample: Option<(Restriction, f64)>,
}

enum Applied {
    Rejected,
    Unchanged,
    Shifted(f64),
}

/// Sweeps restrictions over one menu's block and checks whether any valid
/// one moves the limiting choice distribution by more than `t.eq`.
/// Reversible blocks are provably immune — symmetric rescaling preserves
/// detailed balance with the same stationary weights — so a counterexample
/// here certifies non-reversibility that a choice architect could exploit.
pub fn robustness_to_restrictions(
    model: &MscModel,
    menu: &Menu,
    scope: RobustnessScope,
    t: &Tolerances,
) -> Result<RobustnessReport> {
    let block = model.require_block(menu)?;
    let base = generate_limiting(&block.q, &block.pi, t)?;

    let try_one = |r: &Restriction| -> Result<Applied> {
        match restricted_block(block, menu, r, t) {
            Err(Error::RestrictionRejected(_)) => Ok(Applied::Rejected),
            Err(other) => Err(other),
            Ok(restricted) => {
                let shifted = generate_limiting(&restricted.q, &restricted.pi, t)?;
                let shift = shifted.sup_distance(&base);
                Ok(if shift > t.eq {
                    Applied::Shifted(shift)
                } else {
                    Applied::Unchanged
                })
            }
        }
    };

    let mut tried = 0;
    match scope {
        RobustnessScope::StrictSinglePair => {
            for (i, j) in menu.member_pairs() {
                let r = Restriction::strict(menu.clone(), [(i, j)]);
                match try_one(&r)? {
                    Applied::Rejected => {}
                    Applied::Unchanged => tried += 1,
                    Applied::Shifted(shift) => {
                        return Ok(RobustnessReport {
                            robust: false,
                            tried: tried + 1,
                            counterexample: Some((r, shift)),
                        })
                    }
                }
            }
        }
        RobustnessScope::WeakSamples { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut attempts = 0;
            while tried < count && attempts < count * 20 {
                attempts += 1;
                let factors: BTreeMap<(AltId, AltId), f64> = menu
                    .member_pairs()
                    .map(|pair| (pair, rng.gen::<f64>() * 2.0))
                    .collect();
                let r = Restriction::weak(menu.clone(), factors);
                match try_one(&r)? {
                    Applied::Rejected => {}
                    Applied::Unchanged => tried += 1,
                    Applied::Shifted(shift) => {
                        return Ok(RobustnessReport {
                            robust: false,
                            tried: tried + 1,
                            counterexample: Some((r, shift)),
                        })
                    }
                }
            }
        }
    }
    Ok(RobustnessReport {
        robust: true,
        tried,
        counterexample: None,
    })
}

/// Does the patient limit ignore where exploration starts? True for
/// irreducible blocks (one stationary distribution), false as soon as two
/// communicating classes split the menu. Checked against every degenerate
/// start and `samples` random interior starts.
pub fn robustness_to_initial(
    block: &ModelBlock,
    samples: usize,
    seed: u64,
    t: &Tolerances,
) -> Result<bool> {
    let n = block.size();
    let base = generate_limiting(&block.q, &block.pi, t)?;
    let mut starts: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|b| f64::from(u8::from(b == j))).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let raw: Vec<f64> = (0..n)
            .map(|_| -(rng.gen::<f64>().max(f64::MIN_POSITIVE)).ln())
            .collect();
        let total: f64 = raw.iter().sum();
        starts.push(raw.into_iter().map(|v| v / total).collect());
    }
    for pi in &starts {
        let shifted = generate_limiting(&block.q, pi, t)?;
        if shifted.sup_distance(&base) > t.eq {
            return Ok(false);
        }
    }
    Ok(true)
}

/// What introducing a dominated decoy does to the target's choice share.
#[derive(Clone, Debug)]
pub struct DecoyReport {
    pub target: AltId,
    pub competitor: AltId,
    pub decoy: AltId,
    /// Limiting share of the target on {target, competitor}.
    pub rho_target_binary: f64,
    /// Limiting share of the target once the decoy joins the menu.
    pub rho_target_triple: f64,
    pub rho_competitor_binary: f64,
    pub rho_competitor_triple: f64,
    /// Did the target's absolute share rise when the decoy was added?
    pub absolute_increase: bool,
    /// Did the target's share relative to the competitor rise?
    pub relative_ratio_increase: bool,
    /// The transition-rate condition governing the absolute effect: the
    /// decoy must feed the target faster than the competitor does
    /// (q_{decoy→target} > q_{competitor→target} on the triple menu).
    pub rate_condition: bool,
}

impl DecoyReport {
    pub fn render(&self, u: &Universe) -> String {
        let (i, j, k) = (
            u.name(self.target),
            u.name(self.competitor),
            u.name(self.decoy),
        );
        format!(
            "decoy {k} targeting {i} against {j}:\n  \
             share of {i}: {:.6} on {{{i},{j}}} → {:.6} with {k} present\n  \
             share of {j}: {:.6} → {:.6}\n  \
             absolute attraction: {}   relative attraction: {}   rate condition q({k}→{i}) > q({j}→{i}): {}",
            self.rho_target_binary,
            self.rho_target_triple,
            self.rho_competitor_binary,
            self.rho_competitor_triple,
            self.absolute_increase,
            self.relative_ratio_increase,
            self.rate_condition,
        )
    }
}

/// Analyzes an asymmetrically dominated decoy `k` aimed at `target` against
/// `competitor`: on the triple menu the decoy is never entered from the
/// target (q_{target→decoy} = 0) while every other comparison stays open.
/// Requires the binary menu {target, competitor} and the triple menu to be
/// present in the model; the stored binary {target, decoy}, if any, must
/// show the same one-way pattern.
pub fn decoy_analysis(
    model: &MscModel,
    target: AltId,
    competitor: AltId,
    decoy: AltId,
    t: &Tolerances,
) -> Result<DecoyReport> {
    let u = model.universe();
    let binary = Menu::binary(u, target, competitor)?;
    let triple = Menu::new(u, [target, competitor, decoy])?;
    if triple.len() != 3 {
        return Err(Error::DecoyPattern(
            "target, competitor and decoy must be three distinct alternatives".into(),
        ));
    }
    let triple_block = model.require_block(&triple)?;
    let binary_block = model.require_block(&binary)?;

    let (pt, pc, pk) = (
        triple.position(target).unwrap(),
        triple.position(competitor).unwrap(),
        triple.position(decoy).unwrap(),
    );
    if !t.is_zero(triple_block.q[pt][pk], 1.0) {
        return Err(Error::DecoyPattern(format!(
            "the decoy must be unreachable from the target, but q({}→{}) = {}",
            u.name(target),
            u.name(decoy),
            triple_block.q[pt][pk],
        )));
    }
    for (a, b) in [(pt, pc), (pc, pt), (pc, pk), (pk, pc), (pk, pt)] {
        if t.is_zero(triple_block.q[a][b], 1.0) {
            return Err(Error::DecoyPattern(format!(
                "every comparison other than target→decoy must stay open; q[{a}][{b}] = 0"
            )));
        }
    }
    if let Ok(td) = Menu::binary(u, target, decoy) {
        if let Some(block) = model.block(&td) {
            let (bt, bk) = (td.position(target).unwrap(), td.position(decoy).unwrap());
            if !t.is_zero(block.q[bt][bk], 1.0) {
                return Err(Error::DecoyPattern(
                    "the stored target/decoy binary contradicts the one-way pattern".into(),
                ));
            }
        }
    }

    let pair_limit = generate_limiting(&binary_block.q, &binary_block.pi, t)?;
    let triple_limit = generate_limiting(&triple_block.q, &triple_block.pi, t)?;
    let (bt, bc) = (
        binary.position(target).unwrap(),
        binary.position(competitor).unwrap(),
    );
    let rho_target_binary = pair_limit[bt];
    let rho_competitor_binary = pair_limit[bc];
    let rho_target_triple = triple_limit[pt];
    let rho_competitor_triple = triple_limit[pc];

    Ok(DecoyReport {
        target,
        competitor,
        decoy,
        rho_target_binary,
        rho_target_triple,
        rho_competitor_binary,
        rho_competitor_triple,
        absolute_increase: rho_target_triple > rho_target_binary + t.delta,
        relative_ratio_increase: rho_target_triple * rho_competitor_binary
            > rho_target_binary * rho_competitor_triple + t.delta,
        rate_condition: triple_block.q[pk][pt] > triple_block.q[pc][pt] + t.delta,
    })
}

/// One row of a nudge table: where exploration started and what came out.
#[derive(Clone, Debug)]
pub struct NudgeRow {
    pub start: AltId,
    pub choice: Vec<f64>,
    pub target_mass: f64,
}

/// Outcome of [`nudge_initial_finite`].
#[derive(Clone, Debug)]
pub struct NudgeReport {
    pub menu: Menu,
    pub alpha: f64,
    pub target: AltId,
    pub rows: Vec<NudgeRow>,
    /// Strictly more target mass from the target start than any other.
    pub target_start_is_best: bool,
}

impl NudgeReport {
    pub fn render(&self, u: &Universe) -> String {
        let mut out = format!(
            "start → choice distribution at stopping probability {}\n",
            self.alpha
        );
        for row in &self.rows {
            let cells: Vec<String> = self
                .menu
                .members()
                .iter()
                .zip(&row.choice)
                .map(|(&a, p)| format!("{}: {:.6}", u.name(a), p))
                .collect();
            out.push_str(&format!(
                "  δ({}): {}\n",
                u.name(row.start),
                cells.join("  ")
            ));
        }
        out.push_str(&format!(
            "starting at {} is{} the best way to sell it",
            u.name(self.target),
            if self.target_start_is_best {
                ""
            } else {
                " not"
            },
        ));
        out
    }
}

/// Tabulates finite-patience choice for every degenerate starting point of
/// a menu, quantifying how much steering the first fixation is worth. With
/// stopping probability α bounded away from zero the start matters; as
/// α → 0 the rows collapse to the limiting distribution (for irreducible
/// blocks) and the nudge washes out.
pub fn nudge_initial_finite(
    block: &ModelBlock,
    menu: &Menu,
    alpha: f64,
    target: AltId,
) -> Result<NudgeReport> {
    let pos = menu.position(target).ok_or(Error::NotInMenu(target))?;
    if block.size() != menu.len() {
        return Err(Error::DimensionMismatch {
            what: "menu for this block",
            expected: block.size(),
            got: menu.len(),
        });
    }
    let n = menu.len();
    let mut rows = Vec::with_capacity(n);
    for (start_pos, &start) in menu.members().iter().enumerate() {
        let delta_start: Vec<f64> = (0..n)
            .map(|b| f64::from(u8::from(b == start_pos)))
            .collect();
        let choice = generate_finite(&block.q, &delta_start, alpha)?;
        let target_mass = choice[pos];
        rows.push(NudgeRow {
            start,
            choice: choice.into_vec(),
            target_mass,
        });
    }
    let own = rows[pos].target_mass;
    let target_start_is_best = rows
        .iter()
        .enumerate()
        .all(|(r, row)| r == pos || row.target_mass < own);
    Ok(NudgeReport {
        menu: menu.clone(),
        alpha,
        target,
        rows,
        target_start_is_best,
    })
}
