//! Reading and writing datasets and models as JSON documents.
//!
//! Probabilities travel as decimal strings (`"0.28"`), not binary floats:
//! exact-rational consumers see the same number a human wrote in the file,
//! and saved files stay diffable. `read_*` functions check structure and
//! field ranges, reporting positioned errors; `load_*` additionally runs the
//! full validators and rejects files whose content breaks the invariants.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::core::{
    validate_dataset, validate_model, ChoiceDataset, Menu, MscModel, Tolerances, Universe,
};
use crate::exact::{parse_decimal, render_prob, Rat};
use crate::{Error, Result};

/// On-disk shape of a choice dataset.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DatasetFile {
    pub universe: Vec<String>,
    pub menus: Vec<MenuRecord>,
}

/// One menu's observed choice frequencies; `probabilities[k]` belongs to
/// `members[k]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MenuRecord {
    pub members: Vec<String>,
    pub probabilities: Vec<String>,
}

/// On-disk shape of an exploration model.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub universe: Vec<String>,
    #[serde(default)]
    pub metadata: Metadata,
    pub blocks: Vec<BlockRecord>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub note: String,
}

/// One menu's transition matrix and initial distribution; rows, columns and
/// `pi` entries all follow the order of `menu`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockRecord {
    pub menu: Vec<String>,
    pub q: Vec<Vec<String>>,
    pub pi: Vec<String>,
}

fn positioned(path: &Path, detail: impl Into<String>) -> Error {
    Error::FileFormat {
        path: path.display().to_string(),
        detail: detail.into(),
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| {
        positioned(
            path,
            format!("line {}, column {}: {}", e.line(), e.column(), e),
        )
    })
}

fn resolve_members(
    u: &Universe,
    names: &[String],
    path: &Path,
    at: &str,
) -> Result<(Menu, Vec<usize>)> {
    let mut ids = Vec::with_capacity(names.len());
    for (k, name) in names.iter().enumerate() {
        let id = u.index_of(name).ok_or_else(|| {
            positioned(
                path,
                format!("{at}.members[{k}]: unknown alternative {name:?}"),
            )
        })?;
        if ids.contains(&id) {
            return Err(positioned(
                path,
                format!("{at}.members[{k}]: alternative {name:?} listed twice"),
            ));
        }
        ids.push(id);
    }
    let menu = Menu::new(u, ids.iter().copied())
        .map_err(|e| positioned(path, format!("{at}.members: {e}")))?;
    // where each file-order entry lands in the menu's canonical order
    let placement = ids
        .iter()
        .map(|&id| menu.position(id).expect("member of its own menu"))
        .collect();
    Ok((menu, placement))
}

fn parse_prob(text: &str, path: &Path, at: &str) -> Result<Rat> {
    let value = parse_decimal(text).map_err(|e| positioned(path, format!("{at}: {e}")))?;
    if value < Rat::from_integer(0.into()) || value > Rat::from_integer(1.into()) {
        return Err(positioned(
            path,
            format!("{at}: probability {text} is outside [0, 1]"),
        ));
    }
    Ok(value)
}

/// Parses a dataset file, checking structure and per-field ranges but not
/// the aggregate invariants (row sums, binary-menu coverage).
pub fn read_dataset(path: impl AsRef<Path>) -> Result<ChoiceDataset> {
    let path = path.as_ref();
    let file: DatasetFile = parse_json(path)?;
    let universe = Universe::new(file.universe.iter().map(String::as_str))
        .map_err(|e| positioned(path, format!("universe: {e}")))?;
    let mut dataset = ChoiceDataset::new(universe.clone());
    for (m, record) in file.menus.iter().enumerate() {
        let at = format!("menus[{m}]");
        let (menu, placement) = resolve_members(&universe, &record.members, path, &at)?;
        if record.probabilities.len() != record.members.len() {
            return Err(positioned(
                path,
                format!(
                    "{at}: {} members but {} probabilities",
                    record.members.len(),
                    record.probabilities.len()
                ),
            ));
        }
        let mut probs = vec![Rat::from_integer(0.into()); menu.len()];
        for (k, text) in record.probabilities.iter().enumerate() {
            probs[placement[k]] = parse_prob(text, path, &format!("{at}.probabilities[{k}]"))?;
        }
        if dataset.contains(&menu) {
            return Err(positioned(path, format!("{at}: menu listed twice")));
        }
        dataset
            .set_menu_exact(menu, probs)
            .map_err(|e| positioned(path, format!("{at}: {e}")))?;
    }
    Ok(dataset)
}

/// Reads a dataset and insists it is fully valid: distributions sum to one
/// and every pair inside a larger menu has its binary menu present.
pub fn load_dataset(path: impl AsRef<Path>, t: &Tolerances) -> Result<ChoiceDataset> {
    let path = path.as_ref();
    let dataset = read_dataset(path)?;
    let report = validate_dataset(&dataset, t);
    if !report.is_valid() {
        return Err(positioned(path, report.render(dataset.universe())));
    }
    Ok(dataset)
}

/// Writes a dataset with exact decimal probabilities, menus in canonical
/// order.
pub fn save_dataset(d: &ChoiceDataset, path: impl AsRef<Path>) -> Result<()> {
    let universe = d.universe();
    let file = DatasetFile {
        universe: universe.names().map(str::to_owned).collect(),
        menus: d
            .menus()
            .map(|menu| MenuRecord {
                members: menu
                    .members()
                    .iter()
                    .map(|&a| universe.name(a).to_owned())
                    .collect(),
                probabilities: d
                    .get_exact(menu)
                    .expect("stored menu")
                    .iter()
                    .map(render_prob)
                    .collect(),
            })
            .collect(),
    };
    write_json(&file, path.as_ref())
}

/// Parses a model file, checking structure and per-field ranges but not the
/// model assumptions.
pub fn read_model(path: impl AsRef<Path>) -> Result<MscModel> {
    let path = path.as_ref();
    let file: ModelFile = parse_json(path)?;
    let universe = Universe::new(file.universe.iter().map(String::as_str))
        .map_err(|e| positioned(path, format!("universe: {e}")))?;
    let mut model = MscModel::new(universe.clone());
    for (b, record) in file.blocks.iter().enumerate() {
        let at = format!("blocks[{b}]");
        let (menu, placement) = resolve_members(&universe, &record.menu, path, &at)?;
        let n = menu.len();
        if record.q.len() != n || record.pi.len() != n {
            return Err(positioned(
                path,
                format!(
                    "{at}: menu has {n} members but q has {} rows and pi {} entries",
                    record.q.len(),
                    record.pi.len()
                ),
            ));
        }
        let mut q = vec![vec![0.0f64; n]; n];
        for (r, row) in record.q.iter().enumerate() {
            if row.len() != n {
                return Err(positioned(
                    path,
                    format!("{at}.q[{r}]: expected {n} entries, found {}", row.len()),
                ));
            }
            for (c, text) in row.iter().enumerate() {
                let v = parse_prob(text, path, &format!("{at}.q[{r}][{c}]"))?;
                q[placement[r]][placement[c]] = crate::exact::rat_to_f64(&v);
            }
        }
        let mut pi = vec![0.0f64; n];
        for (k, text) in record.pi.iter().enumerate() {
            let v = parse_prob(text, path, &format!("{at}.pi[{k}]"))?;
            pi[placement[k]] = crate::exact::rat_to_f64(&v);
        }
        if model.block(&menu).is_some() {
            return Err(positioned(path, format!("{at}: menu listed twice")));
        }
        model
            .set_block(menu, q, pi)
            .map_err(|e| positioned(path, format!("{at}: {e}")))?;
    }
    Ok(model)
}

/// Reads a model and insists it satisfies every model assumption
/// (row-stochastic blocks, dwell mass everywhere, pairwise comparability,
/// menu-independent transition ratios).
pub fn load_model(path: impl AsRef<Path>, t: &Tolerances) -> Result<MscModel> {
    let path = path.as_ref();
    let model = read_model(path)?;
    let report = validate_model(&model, t);
    if !report.passes() {
        return Err(positioned(path, report.render(model.universe())));
    }
    Ok(model)
}

/// Writes a model with decimal-string entries (shortest round-tripping form
/// for values without a terminating decimal).
pub fn save_model(m: &MscModel, metadata: Metadata, path: impl AsRef<Path>) -> Result<()> {
    let universe = m.universe();
    let file = ModelFile {
        universe: universe.names().map(str::to_owned).collect(),
        metadata,
        blocks: m
            .menus()
            .map(|menu| {
                let block = m.block(menu).expect("stored menu");
                BlockRecord {
                    menu: menu
                        .members()
                        .iter()
                        .map(|&a| universe.name(a).to_owned())
                        .collect(),
                    q: block
                        .q
                        .iter()
                        .map(|row| row.iter().map(|&v| format!("{v}")).collect())
                        .collect(),
                    pi: block.pi.iter().map(|&v| format!("{v}")).collect(),
                }
            })
            .collect(),
    };
    write_json(&file, path.as_ref())
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
