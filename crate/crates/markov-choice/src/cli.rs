//! Command-line surface. Every report is available as prose (`--format
//! text`, the default) or as a JSON document (`--format json`); scripts
//! should branch on exit codes, not parse prose. Exit 0 means success (or
//! the queried condition holds), 1 means the condition fails (a certificate
//! is printed), 2 means the input was unusable.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::axioms::check_positivity;
use crate::core::{
    validate_dataset, validate_model, AltId, ChoiceDataset, Menu, MscModel, Tolerances, Universe,
};
use crate::cycles::{
    classify, comparability_condition, irreducibility_condition, ClassificationReport,
};
use crate::io::{load_dataset, load_model, read_dataset, read_model, save_model, Metadata};
use crate::manipulate::{
    apply_restriction, decoy_analysis, nudge_initial_finite, Restriction, RestrictionKind,
};
use crate::markov::{generate_finite, generate_limiting, Distribution};
use crate::rationalize::{
    build_design_system, construct_irreducible, construct_model, construct_trivial,
    solve_feasibility, verify_rationalizes, FeasibilityStatus, Grade,
};
use crate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "msc",
    version,
    about = "Markov stochastic choice: generate, test, rationalize, intervene"
)]
struct Cli {
    /// Report style: human-readable text or a JSON document.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a dataset or model file against every invariant.
    Validate(ValidateArgs),
    /// Choice probabilities of a model block, patient or impatient.
    Generate(GenerateArgs),
    /// Which model classes can rationalize the data on a menu.
    Classify(ClassifyArgs),
    /// Construct a rationalizing model of a requested class.
    Rationalize(RationalizeArgs),
    /// Rescale or remove pairwise comparisons and watch the limit.
    Restrict(RestrictArgs),
    /// Effect of an asymmetrically dominated decoy on its target.
    Decoy(DecoyArgs),
    /// How much steering the initial fixation is worth at a given patience.
    Nudge(NudgeArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ValidateArgs {
    /// Dataset file to check.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Model file to check.
    #[arg(long)]
    model: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    model: PathBuf,
    /// Menu, as comma-separated alternative names (e.g. `i,j,k`).
    #[arg(long)]
    menu: String,
    /// Stopping probability for the impatient chooser.
    #[arg(long, conflicts_with = "limit")]
    alpha: Option<f64>,
    /// Compute the patient (limiting) distribution instead.
    #[arg(long)]
    limit: bool,
    /// Override the block's initial distribution (comma-separated, in the
    /// menu's canonical order).
    #[arg(long)]
    pi: Option<String>,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("scope").required(true).multiple(false)))]
struct ClassifyArgs {
    #[arg(long)]
    data: PathBuf,
    /// Menu to classify, as comma-separated alternative names.
    #[arg(long, group = "scope")]
    menu: Option<String>,
    /// Classify every stored menu with at least two members.
    #[arg(long, group = "scope")]
    all_menus: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelClass {
    /// Any rationalizing model (per-menu, no cross-menu discipline).
    Any,
    /// A reversible model (always possible for valid data).
    Reversible,
    /// Every pair comparable in at least one direction.
    Pairwise,
    /// Every pair comparable in both directions.
    Fully,
    /// One communicating class spanning the menu.
    Irreducible,
}

impl ModelClass {
    fn name(self) -> &'static str {
        match self {
            ModelClass::Any => "any",
            ModelClass::Reversible => "reversible",
            ModelClass::Pairwise => "pairwise",
            ModelClass::Fully => "fully",
            ModelClass::Irreducible => "irreducible",
        }
    }
}

#[derive(Args)]
struct RationalizeArgs {
    #[arg(long)]
    data: PathBuf,
    /// Menu whose grand block is constructed (binary menus come along).
    #[arg(long)]
    menu: String,
    /// Model class to aim for.
    #[arg(long = "class", value_enum)]
    class: ModelClass,
    /// Write the model file here instead of printing it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RestrictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    menu: String,
    /// Remove a comparison outright (repeatable), e.g. `--zero i,l`.
    #[arg(long = "zero")]
    zero: Vec<String>,
    /// Common factor applied to every kept pair (strict restrictions).
    #[arg(long, conflicts_with = "weak")]
    c: Option<f64>,
    /// Per-pair factor (repeatable), e.g. `--weak i,j=2`.
    #[arg(long = "weak")]
    weak: Vec<String>,
}

#[derive(Args)]
struct DecoyArgs {
    #[arg(long)]
    model: PathBuf,
    /// Target, competitor, decoy — three comma-separated names.
    #[arg(long)]
    triple: String,
}

#[derive(Args)]
struct NudgeArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    menu: String,
    /// Stopping probability; the nudge washes out as this approaches 0.
    #[arg(long)]
    alpha: f64,
    /// Alternative whose head-start is being evaluated.
    #[arg(long)]
    target: String,
}

/// Parses `argv` and runs the requested command, returning the process exit
/// code. `argv[0]` is the program name, as in `std::env::args_os`.
pub fn cli_run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let format = cli.format;
    let outcome = match cli.command {
        Command::Validate(args) => run_validate(args, format),
        Command::Generate(args) => run_generate(args, format),
        Command::Classify(args) => run_classify(args, format),
        Command::Rationalize(args) => run_rationalize(args, format),
        Command::Restrict(args) => run_restrict(args, format),
        Command::Decoy(args) => run_decoy(args, format),
        Command::Nudge(args) => run_nudge(args, format),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            if format == Format::Json {
                println!("{}", json!({ "status": "error", "detail": e.to_string() }));
            }
            eprintln!("error: {e}");
            2
        }
    }
}

fn parse_menu(u: &Universe, spec: &str) -> Result<Menu> {
    Menu::from_names(u, spec.split(',').map(str::trim))
}

fn parse_pair(u: &Universe, spec: &str) -> Result<(AltId, AltId)> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Error::InvalidDataset(format!(
            "expected a pair like `i,j`, got {spec:?}"
        )));
    }
    Ok((u.resolve(parts[0])?, u.resolve(parts[1])?))
}

fn choice_json(u: &Universe, menu: &Menu, values: &[f64]) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> = menu
        .members()
        .iter()
        .zip(values)
        .map(|(&a, &p)| (u.name(a).to_owned(), json!(p)))
        .collect();
    serde_json::Value::Object(map)
}

fn choice_text(u: &Universe, menu: &Menu, values: &[f64]) -> String {
    menu.members()
        .iter()
        .zip(values)
        .map(|(&a, p)| format!("{}: {:.6}", u.name(a), p))
        .collect::<Vec<_>>()
        .join("  ")
}

fn pair_json(u: &Universe, pair: (AltId, AltId)) -> serde_json::Value {
    json!([u.name(pair.0), u.name(pair.1)])
}

fn run_validate(args: ValidateArgs, format: Format) -> Result<i32> {
    let t = Tolerances::default();
    if let Some(path) = args.data {
        let dataset = read_dataset(&path)?;
        let report = validate_dataset(&dataset, &t);
        let valid = report.is_valid();
        match format {
            Format::Json => {
                let violations: Vec<String> = report
                    .violations
                    .iter()
                    .map(|v| v.describe(dataset.universe()))
                    .collect();
                println!(
                    "{}",
                    json!({ "kind": "dataset", "valid": valid, "violations": violations })
                );
            }
            Format::Text => {
                if valid {
                    println!(
                        "dataset is valid: {} menus over {} alternatives",
                        dataset.menus().count(),
                        dataset.universe().len()
                    );
                } else {
                    println!("{}", report.render(dataset.universe()));
                }
            }
        }
        Ok(i32::from(!valid))
    } else {
        let path = args.model.expect("clap group guarantees one source");
        let model = read_model(&path)?;
        let report = validate_model(&model, &t);
        let valid = report.passes();
        match format {
            Format::Json => {
                println!(
                    "{}",
                    json!({
                        "kind": "model",
                        "valid": valid,
                        "report": report.render(model.universe()),
                    })
                );
            }
            Format::Text => {
                if valid {
                    println!(
                        "model is valid: {} blocks over {} alternatives",
                        model.menus().count(),
                        model.universe().len()
                    );
                } else {
                    println!("{}", report.render(model.universe()));
                }
            }
        }
        Ok(i32::from(!valid))
    }
}

fn run_generate(args: GenerateArgs, format: Format) -> Result<i32> {
    let t = Tolerances::default();
    let model = load_model(&args.model, &t)?;
    let u = model.universe().clone();
    let menu = parse_menu(&u, &args.menu)?;
    let block = model.require_block(&menu)?;
    let pi: Vec<f64> = match &args.pi {
        Some(spec) => {
            let raw: Vec<f64> = spec
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidDataset(format!("bad probability {s:?}")))
                })
                .collect::<Result<_>>()?;
            if raw.len() != menu.len() {
                return Err(Error::DimensionMismatch {
                    what: "initial distribution",
                    expected: menu.len(),
                    got: raw.len(),
                });
            }
            Distribution::new(raw)?.into_vec()
        }
        None => block.pi.clone(),
    };
    let (mode, choice) = match args.alpha {
        Some(alpha) => ("finite", generate_finite(&block.q, &pi, alpha)?),
        None if args.limit => ("limit", generate_limiting(&block.q, &pi, &t)?),
        None => {
            return Err(Error::InvalidDataset(
                "pass --alpha A for an impatient chooser or --limit for the patient one".into(),
            ))
        }
    };
    match format {
        Format::Json => println!(
            "{}",
            json!({
                "menu": menu.members().iter().map(|&a| u.name(a)).collect::<Vec<_>>(),
                "mode": mode,
                "alpha": args.alpha,
                "choice": choice_json(&u, &menu, choice.as_slice()),
            })
        ),
        Format::Text => {
            let heading = match args.alpha {
                Some(alpha) => format!("choice at stopping probability {alpha}"),
                None => "limiting choice".to_string(),
            };
            println!("{heading} on {}", menu.label(&u));
            println!("  {}", choice_text(&u, &menu, choice.as_slice()));
        }
    }
    Ok(0)
}

fn classification_json(u: &Universe, r: &ClassificationReport) -> serde_json::Value {
    json!({
        "menu": r.menu.members().iter().map(|&a| u.name(a)).collect::<Vec<_>>(),
        "rationalizable": r.rationalizable,
        "reversible_only": r.reversible_only,
        "pairwise": r.pairwise,
        "fully": r.fully,
        "irreducible": r.irreducible,
        "luce": r.luce,
        "delta_margin": r.delta_margin,
        "positive_cycle": r.positive_cycle.as_ref().map(|w| {
            w.pairs.iter().map(|&p| pair_json(u, p)).collect::<Vec<_>>()
        }),
        "blocking_pair": r.blocking_pair.map(|p| pair_json(u, p)),
        "covering_walk": r.covering_walk.as_ref().map(|walk| {
            walk.iter().map(|&p| pair_json(u, p)).collect::<Vec<_>>()
        }),
    })
}

fn classification_text(u: &Universe, r: &ClassificationReport) -> String {
    let mut out = format!("menu {}\n", r.menu.label(u));
    out.push_str(&format!(
        "  rationalizable:            {} (any valid dataset is)\n",
        r.rationalizable
    ));
    out.push_str(&format!(
        "  only reversible models:    {}\n",
        r.reversible_only
    ));
    if let Some(w) = &r.positive_cycle {
        out.push_str(&format!("    sign-consistent cycle: {}\n", w.render(u)));
    }
    out.push_str(&format!("  pairwise comparable:       {}\n", r.pairwise));
    if let Some(p) = r.blocking_pair {
        out.push_str(&format!(
            "    blocked by the pair {{{},{}}}\n",
            u.name(p.0),
            u.name(p.1)
        ));
    }
    out.push_str(&format!("  fully comparable:          {}\n", r.fully));
    out.push_str(&format!("  irreducible:               {}\n", r.irreducible));
    if let Some(walk) = &r.covering_walk {
        let body: Vec<String> = walk
            .iter()
            .map(|&(a, b)| format!("({},{})", u.name(a), u.name(b)))
            .collect();
        out.push_str(&format!("    covering walk: {}\n", body.join(" ")));
    }
    out.push_str(&format!("  Luce (positivity + IIA):   {}\n", r.luce));
    if let Some(m) = r.delta_margin {
        out.push_str(&format!("  margin to a sign flip:     {m:.3e}\n"));
    }
    out
}

fn run_classify(args: ClassifyArgs, format: Format) -> Result<i32> {
    let t = Tolerances::default();
    let dataset = load_dataset(&args.data, &t)?;
    let u = dataset.universe().clone();
    let menus: Vec<Menu> = if args.all_menus {
        dataset.menus().filter(|m| m.len() >= 2).cloned().collect()
    } else {
        // clap guarantees exactly one of --menu / --all-menus is present
        vec![parse_menu(&u, args.menu.as_deref().unwrap())?]
    };
    let mut reports = Vec::with_capacity(menus.len());
    for menu in &menus {
        reports.push(classify(&dataset, menu, &t)?);
    }
    match format {
        Format::Json => {
            let docs: Vec<serde_json::Value> =
                reports.iter().map(|r| classification_json(&u, r)).collect();
            if args.all_menus {
                println!("{}", json!({ "menus": docs }));
            } else {
                println!("{}", docs.into_iter().next().expect("one menu"));
            }
        }
        Format::Text => {
            for r in &reports {
                print!("{}", classification_text(&u, r));
            }
        }
    }
    Ok(0)
}

struct Infeasibility {
    blocking_pair: Option<(AltId, AltId)>,
    certificate: Option<Vec<i64>>,
    detail: String,
}

fn rationalize_model(
    dataset: &ChoiceDataset,
    menu: &Menu,
    class: ModelClass,
    t: &Tolerances,
) -> Result<std::result::Result<MscModel, Infeasibility>> {
    match class {
        ModelClass::Any => construct_trivial(dataset).map(Ok),
        ModelClass::Reversible => {
            let system = build_design_system(dataset, menu, t)?;
            let zeros = vec![crate::exact::Rat::from_integer(0.into()); system.pairs.len()];
            construct_model(dataset, &system, &zeros, t).map(Ok)
        }
        ModelClass::Pairwise | ModelClass::Fully => {
            let verdict = comparability_condition(dataset, menu, t)?;
            let attainable = match class {
                ModelClass::Fully => verdict.fully,
                _ => verdict.pairwise,
            };
            let system = build_design_system(dataset, menu, t)?;
            if !attainable {
                let feas = solve_feasibility(&system, Grade::Strict);
                let detail = if !verdict.pairwise {
                    "some pair lies on no sign-consistent cycle, so every rationalizing \
                     model leaves it incomparable"
                        .to_string()
                } else {
                    let witnesses = check_positivity(dataset, menu, t)?.witnesses;
                    let names: Vec<String> = witnesses
                        .iter()
                        .map(|(m, a)| {
                            format!(
                                "{} in {}",
                                dataset.universe().name(*a),
                                m.label(dataset.universe())
                            )
                        })
                        .collect();
                    format!(
                        "full comparability needs strictly positive data; zero probability for {}",
                        names.join(", ")
                    )
                };
                return Ok(Err(Infeasibility {
                    blocking_pair: verdict.blocking_pair,
                    certificate: feas.certificate,
                    detail,
                }));
            }
            let feas = solve_feasibility(&system, Grade::Strict);
            debug_assert_eq!(feas.status, FeasibilityStatus::StrictlyPositive);
            let gamma = feas.gamma.ok_or_else(|| {
                Error::ConstructionFailed("strict weights vanished despite the condition".into())
            })?;
            construct_model(dataset, &system, &gamma, t).map(Ok)
        }
        ModelClass::Irreducible => {
            let verdict = irreducibility_condition(dataset, menu, t)?;
            if !verdict.holds {
                return Ok(Err(Infeasibility {
                    blocking_pair: verdict.blocking_pair,
                    certificate: None,
                    detail: "no chain of comparable pairs links the whole menu".to_string(),
                }));
            }
            construct_irreducible(dataset, menu, t).map(Ok)
        }
    }
}

fn run_rationalize(args: RationalizeArgs, format: Format) -> Result<i32> {
    let t = Tolerances::default();
    let dataset = load_dataset(&args.data, &t)?;
    let u = dataset.universe().clone();
    let menu = parse_menu(&u, &args.menu)?;
    match rationalize_model(&dataset, &menu, args.class, &t)? {
        Ok(model) => {
            let menus: Vec<Menu> = model.menus().cloned().collect();
            let (ok, gap) = verify_rationalizes(&model, &dataset, &menus, &t)?;
            debug_assert!(ok, "constructions are verified before they return");
            let metadata = Metadata {
                name: format!("{} rationalizing model", args.class.name()),
                // file name only: output must not depend on how the caller
                // spelled the path
                note: format!(
                    "constructed from {}",
                    args.data
                        .file_name()
                        .map(|n| n.to_string_lossy().into_owned())
                        .unwrap_or_else(|| args.data.display().to_string())
                ),
            };
            if let Some(out) = &args.out {
                save_model(&model, metadata.clone(), out)?;
            }
            match format {
                Format::Json => {
                    let file = model_file_json(&model, &metadata);
                    println!(
                        "{}",
                        json!({
                            "status": "ok",
                            "class": args.class.name(),
                            "verified_gap": gap,
                            "written_to": args.out.as_ref().map(|p| p.display().to_string()),
                            "model": file,
                        })
                    );
                }
                Format::Text => {
                    let class = args.class.name();
                    let article = if class.starts_with(['a', 'e', 'i', 'o', 'u']) {
                        "an"
                    } else {
                        "a"
                    };
                    println!(
                        "constructed {article} {class} model reproducing the data (worst gap {gap:.2e})",
                    );
                    match &args.out {
                        Some(out) => println!("model written to {}", out.display()),
                        None => print!("{}", model.describe(&u)),
                    }
                }
            }
            Ok(0)
        }
        Err(inf) => {
            match format {
                Format::Json => {
                    let certificate = inf.certificate.as_ref().map(|z| {
                        let heights: serde_json::Map<String, serde_json::Value> = menu
                            .members()
                            .iter()
                            .zip(z)
                            .map(|(&a, &h)| (u.name(a).to_owned(), json!(h)))
                            .collect();
                        serde_json::Value::Object(heights)
                    });
                    println!(
                        "{}",
                        json!({
                            "status": "infeasible",
                            "class": args.class.name(),
                            "blocking_pair": inf.blocking_pair.map(|p| pair_json(&u, p)),
                            "certificate": certificate,
                            "detail": inf.detail,
                        })
                    );
                }
                Format::Text => {
                    println!("no {} model can rationalize this data", args.class.name());
                    println!("  {}", inf.detail);
                    if let Some((i, j)) = inf.blocking_pair {
                        println!("  blocking pair: {{{},{}}}", u.name(i), u.name(j));
                    }
                    if let Some(z) = &inf.certificate {
                        let body: Vec<String> = menu
                            .members()
                            .iter()
                            .zip(z)
                            .map(|(&a, h)| format!("{}: {h}", u.name(a)))
                            .collect();
                        println!("  certificate heights (z·D ≥ 0): {}", body.join("  "));
                    }
                }
            }
            Ok(1)
        }
    }
}

fn model_file_json(model: &MscModel, metadata: &Metadata) -> serde_json::Value {
    let u = model.universe();
    json!({
        "universe": u.names().collect::<Vec<_>>(),
        "metadata": { "name": metadata.name, "note": metadata.note },
        "blocks": model.menus().map(|menu| {
            let block = model.block(menu).expect("stored menu");
            json!({
                "menu": menu.members().iter().map(|&a| u.name(a)).collect::<Vec<_>>(),
                "q": block.q.iter().map(|row| {
                    row.iter().map(|v| format!("{v}")).collect::<Vec<_>>()
                }).collect::<Vec<_>>(),
                "pi": block.pi.iter().map(|v| format!("{v}")).collect::<Vec<_>>(),
            })
        }).collect::<Vec<_>>(),
    })
}

fn run_restrict(args: RestrictArgs, format: Format) -> Result<i32> {
    let t = Tolerances::default();
    let model = load_model(&args.model, &t)?;
    let u = model.universe().clone();
    let menu = parse_menu(&u, &args.menu)?;
    let zeroed: Vec<(AltId, AltId)> = args
        .zero
        .iter()
        .map(|s| parse_pair(&u, s))
        .collect::<Result<_>>()?;
    let restriction = if args.weak.is_empty() {
        let mut r = Restriction::strict(menu.clone(), zeroed);
        if let Some(c) = args.c {
            r.kind = RestrictionKind::Strict { c };
        }
        r
    } else {
        let mut factors = BTreeMap::new();
        for spec in &args.weak {
            let (pair_part, factor_part) = spec.split_once('=').ok_or_else(|| {
                Error::InvalidDataset(format!("expected `i,j=FACTOR`, got {spec:?}"))
            })?;
            let pair = parse_pair(&u, pair_part)?;
            let factor: f64 = factor_part.trim().parse().map_err(|_| {
                Error::InvalidDataset(format!("bad factor {factor_part:?} in {spec:?}"))
            })?;
            factors.insert(pair, factor);
        }
        for pair in zeroed {
            factors.insert(pair, 0.0);
        }
        Restriction::weak(menu.clone(), factors)
    };

    let block = model.require_block(&menu)?;
    let before = generate_limiting(&block.q, &block.pi, &t)?;
    match apply_restriction(&model, &restriction, &t) {
        Ok(restricted) => {
            let rblock = restricted.require_block(&menu).expect("block survives");
            let after = generate_limiting(&rblock.q, &rblock.pi, &t)?;
            let shift = after.sup_distance(&before);
            let changed = shift > t.eq;
            match format {
                Format::Json => println!(
                    "{}",
                    json!({
                        "status": "applied",
                        "menu": menu.members().iter().map(|&a| u.name(a)).collect::<Vec<_>>(),
                        "restriction": restriction.describe(&u),
                        "limit_before": choice_json(&u, &menu, before.as_slice()),
                        "limit_after": choice_json(&u, &menu, after.as_slice()),
                        "sup_shift": shift,
                        "changed": changed,
                    })
                ),
                Format::Text => {
                    println!(
                        "restriction on {}: {}",
                        menu.label(&u),
                        restriction.describe(&u)
                    );
                    println!(
                        "  limit before: {}",
                        choice_text(&u, &menu, before.as_slice())
                    );
                    println!(
                        "  limit after:  {}",
                        choice_text(&u, &menu, after.as_slice())
                    );
                    if changed {
                        println!("  the limiting choice moved by {shift:.3e}");
                    } else {
                        println!("  the limiting choice is unchanged (sup gap {shift:.3e})");
                    }
                }
            }
            Ok(0)
        }
        Err(Error::RestrictionRejected(reason)) => {
            match format {
                Format::Json => println!("{}", json!({ "status": "rejected", "reason": reason })),
                Format::Text => println!("restriction rejected: {reason}"),
            }
            Ok(1)
        }
        Err(other) => Err(other),
    }
}

fn run_decoy(args: DecoyArgs, format: Format) -> Result<i32> {
    let t = Tolerances::default();
    let model = load_model(&args.model, &t)?;
    let u = model.universe().clone();
    let parts: Vec<&str> = args.triple.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::InvalidDataset(format!(
            "expected `target,competitor,decoy`, got {:?}",
            args.triple
        )));
    }
    let target = u.resolve(parts[0])?;
    let competitor = u.resolve(parts[1])?;
    let decoy = u.resolve(parts[2])?;
    let report = decoy_analysis(&model, target, competitor, decoy, &t)?;
    match format {
        Format::Json => println!(
            "{}",
            json!({
                "target": u.name(report.target),
                "competitor": u.name(report.competitor),
                "decoy": u.name(report.decoy),
                "rho_target_binary": report.rho_target_binary,
                "rho_target_triple": report.rho_target_triple,
                "rho_competitor_binary": report.rho_competitor_binary,
                "rho_competitor_triple": report.rho_competitor_triple,
                "absolute_increase": report.absolute_increase,
                "relative_ratio_increase": report.relative_ratio_increase,
                "rate_condition": report.rate_condition,
            })
        ),
        Format::Text => println!("{}", report.render(&u)),
    }
    Ok(0)
}

fn run_nudge(args: NudgeArgs, format: Format) -> Result<i32> {
    let t = Tolerances::default();
    let model = load_model(&args.model, &t)?;
    let u = model.universe().clone();
    let menu = parse_menu(&u, &args.menu)?;
    let target = u.resolve(&args.target)?;
    let block = model.require_block(&menu)?;
    let report = nudge_initial_finite(block, &menu, args.alpha, target)?;
    match format {
        Format::Json => println!(
            "{}",
            json!({
                "menu": menu.members().iter().map(|&a| u.name(a)).collect::<Vec<_>>(),
                "alpha": report.alpha,
                "target": u.name(report.target),
                "rows": report.rows.iter().map(|row| json!({
                    "start": u.name(row.start),
                    "choice": choice_json(&u, &menu, &row.choice),
                    "target_mass": row.target_mass,
                })).collect::<Vec<_>>(),
                "target_start_is_best": report.target_start_is_best,
            })
        ),
        Format::Text => println!("{}", report.render(&u)),
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_flags_exit_with_usage_error() {
        assert_eq!(cli_run(["msc", "--no-such-flag"]), 2);
        assert_eq!(cli_run(["msc", "frobnicate"]), 2);
        assert_eq!(cli_run(["msc", "--help"]), 0);
    }

    #[test]
    fn missing_files_are_input_errors() {
        assert_eq!(
            cli_run([
                "msc",
                "classify",
                "--data",
                "/no/such/file.json",
                "--all-menus"
            ]),
            2
        );
    }
}
