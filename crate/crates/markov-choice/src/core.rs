//! Domain types: universes of alternatives, menus, choice datasets, and
//! Markov exploration models, plus the validation operations over them.
//!
//! Validation *reports* content problems (bad sums, violated model
//! assumptions) instead of erroring; only structural misuse (unknown names,
//! shape mismatches) produces an [`Error`](crate::Error).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::exact::{rat_from_f64, rat_to_f64, Rat};
use crate::{Error, Result};

/// Canonical index of an alternative within its universe (0..n−1).
pub type AltId = usize;

/// The finite set of all alternatives, in a fixed canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    names: Vec<String>,
}

impl Universe {
    /// Builds a universe from distinct, non-empty names. Order is preserved
    /// and becomes the canonical index order.
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() < 2 {
            return Err(Error::UniverseTooSmall(names.len()));
        }
        for (k, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::EmptyAlternativeName);
            }
            if names[..k].contains(name) {
                return Err(Error::DuplicateAlternative(name.clone()));
            }
        }
        Ok(Self { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false // by construction n ≥ 2
    }

    pub fn name(&self, a: AltId) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    pub fn index_of(&self, name: &str) -> Option<AltId> {
        self.names.iter().position(|n| n == name)
    }

    /// Resolves a name, erroring on strangers.
    pub fn resolve(&self, name: &str) -> Result<AltId> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownAlternative(name.to_owned()))
    }

    fn check(&self, a: AltId) -> Result<()> {
        if a < self.len() {
            Ok(())
        } else {
            Err(Error::AltOutOfRange {
                index: a,
                size: self.len(),
            })
        }
    }

    /// The full menu containing every alternative.
    pub fn full_menu(&self) -> Menu {
        Menu((0..self.len()).collect())
    }
}

/// A menu: a non-empty subset of the universe, canonically sorted.
///
/// Menus are plain index sets; they are validated against a universe at
/// construction but carry no reference to it, so they work as map keys.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Menu(Vec<AltId>);

impl Menu {
    pub fn new(universe: &Universe, members: impl IntoIterator<Item = AltId>) -> Result<Self> {
        let mut ids: Vec<AltId> = members.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.is_empty() {
            return Err(Error::EmptyMenu);
        }
        for &a in &ids {
            universe.check(a)?;
        }
        Ok(Self(ids))
    }

    pub fn from_names<I, S>(universe: &Universe, names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let ids = names
            .into_iter()
            .map(|n| universe.resolve(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(universe, ids)
    }

    /// The binary menu {i,j}; errors if i = j.
    pub fn binary(universe: &Universe, i: AltId, j: AltId) -> Result<Self> {
        if i == j {
            return Err(Error::NotBinary);
        }
        Self::new(universe, [i, j])
    }

    pub fn members(&self) -> &[AltId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // by construction non-empty
    }

    pub fn contains(&self, a: AltId) -> bool {
        self.0.binary_search(&a).is_ok()
    }

    /// Position of `a` within this menu's sorted member list.
    pub fn position(&self, a: AltId) -> Option<usize> {
        self.0.binary_search(&a).ok()
    }

    /// All unordered member pairs (i, j) with i < j, lexicographically.
    pub fn member_pairs(&self) -> impl Iterator<Item = (AltId, AltId)> + '_ {
        let m = &self.0;
        (0..m.len()).flat_map(move |a| (a + 1..m.len()).map(move |b| (m[a], m[b])))
    }

    /// All ordered member pairs (i, j) with i ≠ j, lexicographically.
    pub fn ordered_pairs(&self) -> impl Iterator<Item = (AltId, AltId)> + '_ {
        let m = &self.0;
        m.iter()
            .flat_map(move |&a| m.iter().filter(move |&&b| b != a).map(move |&b| (a, b)))
    }

    pub fn is_subset_of(&self, other: &Menu) -> bool {
        self.0.iter().all(|&a| other.contains(a))
    }

    /// Human-readable label like `{i,j,k}`.
    pub fn label(&self, universe: &Universe) -> String {
        let mut s = String::from("{");
        for (k, &a) in self.0.iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            s.push_str(universe.name(a));
        }
        s.push('}');
        s
    }
}

/// Numeric tolerances used throughout.
///
/// * `sum` — how far a probability vector may drift from summing to 1.
/// * `eq` — relative tolerance for equality of computed quantities.
/// * `delta` — zero-threshold for sign classification: a quantity `v` with
///   natural scale `s` counts as zero when |v| ≤ delta·max(1, s).
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub sum: f64,
    pub eq: f64,
    pub delta: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            sum: 1e-12,
            eq: 1e-9,
            delta: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        if !(self.sum > 0.0 && self.eq > 0.0 && self.delta > 0.0) {
            return Err(Error::BadTolerances(
                "all tolerances must be strictly positive".into(),
            ));
        }
        if self.delta > self.eq {
            return Err(Error::BadTolerances(format!(
                "zero-threshold {} exceeds equality tolerance {}",
                self.delta, self.eq
            )));
        }
        Ok(())
    }

    /// Relative equality: |a − b| ≤ eq·max(1, |a|, |b|).
    pub fn approx_eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.eq * 1.0_f64.max(a.abs()).max(b.abs())
    }

    /// Sign classification of `v` at natural scale `scale` (≥ 0).
    pub fn is_zero(&self, v: f64, scale: f64) -> bool {
        v.abs() <= self.delta * 1.0_f64.max(scale)
    }
}

/// One menu's worth of observed choice probabilities, kept both as floats
/// (all numeric work) and exactly (sign decisions in rationalization).
#[derive(Clone, Debug)]
struct MenuEntry {
    probs: Vec<f64>,
    exact: Vec<Rat>,
}

/// Observed stochastic choice data: for each stored menu, a probability
/// vector over its members (in menu order).
#[derive(Clone, Debug)]
pub struct ChoiceDataset {
    universe: Universe,
    entries: BTreeMap<Menu, MenuEntry>,
}

impl ChoiceDataset {
    pub fn new(universe: Universe) -> Self {
        Self {
            universe,
            entries: BTreeMap::new(),
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// Stores a probability vector for `menu` (replacing any previous one).
    /// Only the shape is checked here; content problems are left to
    /// [`validate_dataset`].
    pub fn set_menu(&mut self, menu: Menu, probs: &[f64]) -> Result<()> {
        let exact = probs.iter().map(|&p| rat_from_f64(p)).collect();
        self.set_menu_with_exact(menu, probs.to_vec(), exact)
    }

    /// Stores exact rational probabilities; the float mirror is derived.
    pub fn set_menu_exact(&mut self, menu: Menu, exact: Vec<Rat>) -> Result<()> {
        let probs = exact.iter().map(rat_to_f64).collect();
        self.set_menu_with_exact(menu, probs, exact)
    }

    fn set_menu_with_exact(&mut self, menu: Menu, probs: Vec<f64>, exact: Vec<Rat>) -> Result<()> {
        if probs.len() != menu.len() {
            return Err(Error::DimensionMismatch {
                what: "choice probability vector",
                expected: menu.len(),
                got: probs.len(),
            });
        }
        self.entries.insert(menu, MenuEntry { probs, exact });
        Ok(())
    }

    pub fn menus(&self) -> impl Iterator<Item = &Menu> {
        self.entries.keys()
    }

    pub fn contains(&self, menu: &Menu) -> bool {
        self.entries.contains_key(menu)
    }

    /// The stored probability vector for `menu`, in menu member order.
    pub fn get(&self, menu: &Menu) -> Option<&[f64]> {
        self.entries.get(menu).map(|e| e.probs.as_slice())
    }

    pub fn get_exact(&self, menu: &Menu) -> Option<&[Rat]> {
        self.entries.get(menu).map(|e| e.exact.as_slice())
    }

    /// p(a|menu). The menu must be stored and contain `a`.
    pub fn prob(&self, menu: &Menu, a: AltId) -> Result<f64> {
        let entry = self
            .entries
            .get(menu)
            .ok_or_else(|| Error::MenuNotStored(menu.label(&self.universe)))?;
        let pos = menu.position(a).ok_or(Error::NotInMenu(a))?;
        Ok(entry.probs[pos])
    }

    pub fn prob_exact(&self, menu: &Menu, a: AltId) -> Result<Rat> {
        let entry = self
            .entries
            .get(menu)
            .ok_or_else(|| Error::MenuNotStored(menu.label(&self.universe)))?;
        let pos = menu.position(a).ok_or(Error::NotInMenu(a))?;
        Ok(entry.exact[pos].clone())
    }
}

/// p(i|{i,j}): the probability of picking `i` from the binary menu {i,j}.
pub fn binary_share(d: &ChoiceDataset, i: AltId, j: AltId) -> Result<f64> {
    let menu = Menu::binary(d.universe(), i, j)?;
    d.prob(&menu, i)
}

/// Exact-rational variant of [`binary_share`].
pub fn binary_share_exact(d: &ChoiceDataset, i: AltId, j: AltId) -> Result<Rat> {
    let menu = Menu::binary(d.universe(), i, j)?;
    d.prob_exact(&menu, i)
}

/// A single dataset invariant violation.
#[derive(Clone, Debug, PartialEq)]
pub enum DataViolation {
    /// A stored vector's sum is off by more than the tolerance.
    SumMismatch { menu: Menu, sum: f64 },
    /// An entry falls outside [0, 1].
    OutOfRange { menu: Menu, alt: AltId, value: f64 },
    /// A stored menu with ≥ 2 members lacks the binary sub-menu {i, j}.
    MissingBinary { menu: Menu, i: AltId, j: AltId },
}

impl DataViolation {
    pub fn describe(&self, u: &Universe) -> String {
        match self {
            DataViolation::SumMismatch { menu, sum } => {
                format!("menu {}: probabilities sum to {sum}, not 1", menu.label(u))
            }
            DataViolation::OutOfRange { menu, alt, value } => format!(
                "menu {}: p({}) = {value} outside [0,1]",
                menu.label(u),
                u.name(*alt)
            ),
            DataViolation::MissingBinary { menu, i, j } => format!(
                "menu {} is stored but its binary sub-menu {{{},{}}} is not",
                menu.label(u),
                u.name(*i),
                u.name(*j)
            ),
        }
    }
}

/// Outcome of [`validate_dataset`]: empty iff the dataset is valid.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<DataViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn render(&self, u: &Universe) -> String {
        if self.is_valid() {
            return "dataset valid".into();
        }
        let mut s = String::new();
        for v in &self.violations {
            let _ = writeln!(s, "- {}", v.describe(u));
        }
        s
    }
}

/// Checks every dataset invariant and reports all violations (content
/// problems never become errors).
pub fn validate_dataset(d: &ChoiceDataset, t: &Tolerances) -> ValidationReport {
    let mut violations = Vec::new();
    for (menu, entry) in &d.entries {
        let mut sum = 0.0;
        for (pos, &p) in entry.probs.iter().enumerate() {
            sum += p;
            if !(0.0..=1.0).contains(&p) {
                violations.push(DataViolation::OutOfRange {
                    menu: menu.clone(),
                    alt: menu.members()[pos],
                    value: p,
                });
            }
        }
        if (sum - 1.0).abs() > t.sum {
            violations.push(DataViolation::SumMismatch {
                menu: menu.clone(),
                sum,
            });
        }
        if menu.len() >= 2 {
            for (i, j) in menu.member_pairs() {
                let b = Menu::binary(&d.universe, i, j).expect("distinct members");
                if !d.entries.contains_key(&b) {
                    violations.push(DataViolation::MissingBinary {
                        menu: menu.clone(),
                        i,
                        j,
                    });
                }
            }
        }
    }
    ValidationReport { violations }
}

/// One menu's exploration dynamics: a transition matrix and an initial
/// distribution over the menu's members (both in menu order).
#[derive(Clone, Debug)]
pub struct ModelBlock {
    pub q: Vec<Vec<f64>>,
    pub pi: Vec<f64>,
}

impl ModelBlock {
    pub fn size(&self) -> usize {
        self.pi.len()
    }
}

/// A Markov exploration model: for each menu, transition probabilities
/// between its alternatives plus an initial fixation distribution.
#[derive(Clone, Debug)]
pub struct MscModel {
    universe: Universe,
    blocks: BTreeMap<Menu, ModelBlock>,
}

impl MscModel {
    pub fn new(universe: Universe) -> Self {
        Self {
            universe,
            blocks: BTreeMap::new(),
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// Installs the block for `menu`. Shape is checked here; row sums,
    /// ranges, and the model assumptions are judged by [`validate_model`].
    pub fn set_block(&mut self, menu: Menu, q: Vec<Vec<f64>>, pi: Vec<f64>) -> Result<()> {
        let n = menu.len();
        if q.len() != n {
            return Err(Error::DimensionMismatch {
                what: "transition matrix rows",
                expected: n,
                got: q.len(),
            });
        }
        for row in &q {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "transition matrix columns",
                    expected: n,
                    got: row.len(),
                });
            }
        }
        if pi.len() != n {
            return Err(Error::DimensionMismatch {
                what: "initial distribution",
                expected: n,
                got: pi.len(),
            });
        }
        self.blocks.insert(menu, ModelBlock { q, pi });
        Ok(())
    }

    pub fn menus(&self) -> impl Iterator<Item = &Menu> {
        self.blocks.keys()
    }

    pub fn block(&self, menu: &Menu) -> Option<&ModelBlock> {
        self.blocks.get(menu)
    }

    pub fn require_block(&self, menu: &Menu) -> Result<&ModelBlock> {
        self.blocks
            .get(menu)
            .ok_or_else(|| Error::MenuNotStored(menu.label(&self.universe)))
    }

    /// q_{ij}(menu) by alternative ids.
    pub fn rate(&self, menu: &Menu, i: AltId, j: AltId) -> Result<f64> {
        let block = self.require_block(menu)?;
        let pi_ = menu.position(i).ok_or(Error::NotInMenu(i))?;
        let pj = menu.position(j).ok_or(Error::NotInMenu(j))?;
        Ok(block.q[pi_][pj])
    }

    /// Human-readable rendering of every block: transition rows labelled by
    /// alternative names, initial distribution alongside.
    pub fn describe(&self, u: &Universe) -> String {
        let mut out = String::new();
        for (menu, block) in &self.blocks {
            out.push_str(&format!("menu {}\n", menu.label(u)));
            for (r, &a) in menu.members().iter().enumerate() {
                let row: Vec<String> = block.q[r].iter().map(|v| format!("{v:.6}")).collect();
                out.push_str(&format!(
                    "  {:<8} [{}]  π = {:.6}\n",
                    u.name(a),
                    row.join(", "),
                    block.pi[r]
                ));
            }
        }
        out
    }
}

/// A structural (non-assumption) model violation.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelViolation {
    RowSum {
        menu: Menu,
        alt: AltId,
        sum: f64,
    },
    EntryOutOfRange {
        menu: Menu,
        row: AltId,
        col: AltId,
        value: f64,
    },
    InitialSum {
        menu: Menu,
        sum: f64,
    },
    InitialOutOfRange {
        menu: Menu,
        alt: AltId,
        value: f64,
    },
}

impl ModelViolation {
    pub fn describe(&self, u: &Universe) -> String {
        match self {
            ModelViolation::RowSum { menu, alt, sum } => format!(
                "menu {}: row {} of Q sums to {sum}, not 1",
                menu.label(u),
                u.name(*alt)
            ),
            ModelViolation::EntryOutOfRange {
                menu,
                row,
                col,
                value,
            } => format!(
                "menu {}: q[{}][{}] = {value} outside [0,1]",
                menu.label(u),
                u.name(*row),
                u.name(*col)
            ),
            ModelViolation::InitialSum { menu, sum } => format!(
                "menu {}: initial distribution sums to {sum}, not 1",
                menu.label(u)
            ),
            ModelViolation::InitialOutOfRange { menu, alt, value } => format!(
                "menu {}: π({}) = {value} outside [0,1]",
                menu.label(u),
                u.name(*alt)
            ),
        }
    }
}

/// A transition-ratio consistency violation: the relative rate between two
/// alternatives differs between their binary menu and a super-menu.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionRatioViolation {
    pub menu: Menu,
    pub i: AltId,
    pub j: AltId,
    /// q_ij({i,j})·q_ji(menu)
    pub lhs: f64,
    /// q_ji({i,j})·q_ij(menu)
    pub rhs: f64,
}

/// Outcome of [`validate_model`]: per-assumption pass/fail with locations.
///
/// Model *classes* (reversible, irreducible, …) are deliberately not judged
/// here; see the classification and axiom-checking operations.
#[derive(Clone, Debug, Default)]
pub struct AssumptionReport {
    /// Row sums, ranges, initial-distribution shape.
    pub structure: Vec<ModelViolation>,
    /// Prolonged consideration: alternatives with q_ii = 0.
    pub prolonged_consideration: Vec<(Menu, AltId)>,
    /// Binary comparability: binary menus {i,j} with q_ij = q_ji = 0.
    pub binary_comparability: Vec<(AltId, AltId)>,
    /// Transition-ratio consistency across menus.
    pub transition_ratio: Vec<TransitionRatioViolation>,
}

impl AssumptionReport {
    pub fn passes(&self) -> bool {
        self.structure.is_empty()
            && self.prolonged_consideration.is_empty()
            && self.binary_comparability.is_empty()
            && self.transition_ratio.is_empty()
    }

    pub fn render(&self, u: &Universe) -> String {
        if self.passes() {
            return "model satisfies all assumptions".into();
        }
        let mut s = String::new();
        for v in &self.structure {
            let _ = writeln!(s, "- structure: {}", v.describe(u));
        }
        for (menu, a) in &self.prolonged_consideration {
            let _ = writeln!(
                s,
                "- prolonged consideration: q_{{{0},{0}}}({1}) = 0",
                u.name(*a),
                menu.label(u)
            );
        }
        for (i, j) in &self.binary_comparability {
            let _ = writeln!(
                s,
                "- binary comparability: q_{{{0},{1}}} = q_{{{1},{0}}} = 0 on {{{0},{1}}}",
                u.name(*i),
                u.name(*j)
            );
        }
        for v in &self.transition_ratio {
            let _ = writeln!(
                s,
                "- transition ratio: pair ({},{}) on {}: {} ≠ {}",
                u.name(v.i),
                u.name(v.j),
                v.menu.label(u),
                v.lhs,
                v.rhs
            );
        }
        s
    }
}

/// Checks simplex structure plus the three model assumptions on every stored
/// block. The transition-ratio check compares each super-menu pair against
/// the pair's binary block when that block is stored.
pub fn validate_model(m: &MscModel, t: &Tolerances) -> AssumptionReport {
    let mut report = AssumptionReport::default();
    for (menu, block) in &m.blocks {
        let members = menu.members();
        // Structure: entries in range, rows and π on the simplex.
        for (r, row) in block.q.iter().enumerate() {
            let mut sum = 0.0;
            for (c, &v) in row.iter().enumerate() {
                sum += v;
                if !(0.0..=1.0).contains(&v) {
                    report.structure.push(ModelViolation::EntryOutOfRange {
                        menu: menu.clone(),
                        row: members[r],
                        col: members[c],
                        value: v,
                    });
                }
            }
            if (sum - 1.0).abs() > t.sum {
                report.structure.push(ModelViolation::RowSum {
                    menu: menu.clone(),
                    alt: members[r],
                    sum,
                });
            }
        }
        let mut psum = 0.0;
        for (k, &v) in block.pi.iter().enumerate() {
            psum += v;
            if !(0.0..=1.0).contains(&v) {
                report.structure.push(ModelViolation::InitialOutOfRange {
                    menu: menu.clone(),
                    alt: members[k],
                    value: v,
                });
            }
        }
        if (psum - 1.0).abs() > t.sum {
            report.structure.push(ModelViolation::InitialSum {
                menu: menu.clone(),
                sum: psum,
            });
        }
        // Prolonged consideration: strictly positive diagonal.
        for (k, &a) in members.iter().enumerate() {
            if t.is_zero(block.q[k][k], 1.0) || block.q[k][k] < 0.0 {
                report.prolonged_consideration.push((menu.clone(), a));
            }
        }
        // Binary comparability, judged on binary menus only.
        if let [i, j] = *members {
            if t.is_zero(block.q[0][1], 1.0) && t.is_zero(block.q[1][0], 1.0) {
                report.binary_comparability.push((i, j));
            }
        }
        // Transition-ratio consistency against stored binary blocks.
        if menu.len() >= 3 {
            for (i, j) in menu.member_pairs() {
                let b = Menu::binary(&m.universe, i, j).expect("distinct members");
                let Some(bin) = m.blocks.get(&b) else {
                    continue;
                };
                let (pi_, pj) = (menu.position(i).unwrap(), menu.position(j).unwrap());
                let lhs = bin.q[0][1] * block.q[pj][pi_];
                let rhs = bin.q[1][0] * block.q[pi_][pj];
                if !t.approx_eq(lhs, rhs) {
                    report.transition_ratio.push(TransitionRatioViolation {
                        menu: menu.clone(),
                        i,
                        j,
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    report
}
