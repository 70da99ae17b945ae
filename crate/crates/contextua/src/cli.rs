//! Command-line front end: JSON-file inputs, canonical JSON output with
//! sorted keys, and a stable exit-code contract (0 success regardless of
//! verdict, 1 usage, 2 parse failure, 3 domain invariant violation).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::bubclifton::{Context, ContextFile, DeterminateSublattice};
use crate::classical::{
    check_boolean_homomorphism, classical_truth, point_valuation, PhaseSpace, PhaseSpaceFile,
};
use crate::datasets::{self, DatasetPayload};
use crate::error::{Error, Result};
use crate::kscheck::{
    build_problem, check_parity_certificate, enumerate_colorings, solve, verify_coloring, Problem,
    RaySet, RaySetFile,
};
use crate::lattice::{Subspace, SubspaceFile};
use crate::valuation::{born_probability, classify, State, StateFile};

/// Exact quantum-logic toolkit: three-valued truth for subspace propositions,
/// determinate sublattices with their two-valued evaluators, and
/// Kochen-Specker colorability search, all in exact arithmetic.
#[derive(Parser, Debug)]
#[command(name = "contextua", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a subspace proposition as true, false, or indeterminate in a
    /// pure state, with its exact probability.
    Truth {
        /// JSON state file: {"vector": ["1", "0"]}
        #[arg(long)]
        state: PathBuf,
        /// JSON subspace file: {"dim": 2, "basis": [["1", "0"]]}
        #[arg(long)]
        prop: PathBuf,
    },
    /// Project a state into an observable's eigenspaces and report the
    /// determinate sublattice: rays, weights, evaluators.
    Bc {
        /// JSON context file: {"state": {...}, "observable": {...}}
        #[arg(long)]
        context: PathBuf,
        /// Subspace file to test for membership and evaluate.
        #[arg(long)]
        query: Option<PathBuf>,
        /// Include the evaluator table over the projected rays.
        #[arg(long)]
        homs: bool,
        /// Include the contextual mixed state.
        #[arg(long = "contextual-state")]
        contextual_state: bool,
    },
    /// Decide {0,1}-colorability of a ray set under the exclusivity and
    /// one-per-basis rules.
    Ks {
        /// JSON ray-set file: {"dim": 3, "rays": [{"label": ..., "vector": [...]}]}
        #[arg(long, conflicts_with = "dataset", required_unless_present = "dataset")]
        rays: Option<PathBuf>,
        /// Name of an embedded ray-set dataset.
        #[arg(long)]
        dataset: Option<String>,
        /// Enumerate all valid colorings up to this many.
        #[arg(long, value_name = "CAP")]
        enumerate: Option<usize>,
        /// Check the parity-based uncolorability certificate.
        #[arg(long)]
        certificate: bool,
    },
    /// Evaluate every named property of a finite phase space at one point.
    Classical {
        /// JSON phase-space file: {"points": [...], "properties": {...}}
        #[arg(long)]
        space: PathBuf,
        /// Point label to evaluate at.
        #[arg(long)]
        point: String,
    },
    /// Contrast the classical Boolean picture (point valuations are
    /// homomorphisms) with the quantum no-go verdict on the 18-ray set.
    Contrast,
    /// List or show the embedded datasets.
    Datasets {
        #[command(subcommand)]
        which: DatasetsCommand,
    },
    /// Lattice operations on subspace files.
    Lattice {
        #[command(subcommand)]
        op: LatticeCommand,
    },
}

#[derive(Subcommand, Debug)]
enum DatasetsCommand {
    /// List all dataset names with their kinds and provenance.
    List,
    /// Print one dataset in its JSON file form.
    Show { name: String },
}

#[derive(Subcommand, Debug)]
enum LatticeCommand {
    /// Intersection of two subspaces.
    Meet {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Closed span of the union of two subspaces.
    Join {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Orthogonal complement of a subspace.
    Ortho {
        #[arg(long)]
        a: PathBuf,
    },
}

/// Parses arguments, runs the command, prints canonical JSON, and returns the
/// process exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(output) => {
            // Tolerate a closed pipe (e.g. `contextua datasets list | head`).
            use std::io::Write;
            let stdout = std::io::stdout();
            let _ = writeln!(stdout.lock(), "{output}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) => 2,
                _ => 3,
            }
        }
    }
}

/// Executes a parsed invocation and returns its canonical JSON output
/// (sorted keys, no trailing newline).
pub fn run(cli: &Cli) -> Result<String> {
    let value = match &cli.command {
        Command::Truth { state, prop } => cmd_truth(state, prop)?,
        Command::Bc {
            context,
            query,
            homs,
            contextual_state,
        } => cmd_bc(context, query.as_deref(), *homs, *contextual_state)?,
        Command::Ks {
            rays,
            dataset,
            enumerate,
            certificate,
        } => cmd_ks(rays.as_deref(), dataset.as_deref(), *enumerate, *certificate)?,
        Command::Classical { space, point } => cmd_classical(space, point)?,
        Command::Contrast => cmd_contrast()?,
        Command::Datasets { which } => match which {
            DatasetsCommand::List => cmd_datasets_list()?,
            DatasetsCommand::Show { name } => cmd_datasets_show(name)?,
        },
        Command::Lattice { op } => cmd_lattice(op)?,
    };
    // Rebuilding through Value sorts every object's keys (the map type is
    // ordered), making the output canonical.
    serde_json::to_string_pretty(&value).map_err(|e| Error::Parse(e.to_string()))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("invalid JSON in {}: {e}", path.display())))
}

fn vector_strings(v: &crate::exactlin::Vect) -> Vec<String> {
    v.entries().iter().map(|s| s.to_string()).collect()
}

fn matrix_strings(m: &crate::exactlin::Mat) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c).to_string()).collect())
        .collect()
}

fn ray_strings(dl: &DeterminateSublattice) -> Vec<Vec<String>> {
    dl.rays()
        .iter()
        .map(|r| vector_strings(&r.as_subspace().basis_vectors()[0]))
        .collect()
}

fn bit(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

fn cmd_truth(state_path: &Path, prop_path: &Path) -> Result<Value> {
    let state = State::from_file(&read_json::<StateFile>(state_path)?)?;
    let prop = Subspace::from_file(&read_json::<SubspaceFile>(prop_path)?)?;
    let verdict = classify(&state, &prop)?;
    let probability = born_probability(&state, &prop)?;
    Ok(json!({
        "probability": probability.to_string(),
        "value": verdict.as_str(),
    }))
}

fn cmd_bc(
    context_path: &Path,
    query: Option<&Path>,
    homs: bool,
    contextual_state: bool,
) -> Result<Value> {
    let context = Context::from_file(&read_json::<ContextFile>(context_path)?)?;
    let dl = context.project();
    let weights: Vec<String> = dl.weights().iter().map(|w| w.to_string()).collect();
    let mut out = json!({
        "dim": dl.dim(),
        "k": dl.k(),
        "rays": ray_strings(&dl),
        "weights": weights,
    });
    let map = out.as_object_mut().expect("literal object");
    if let Some(query_path) = query {
        let prop = Subspace::from_file(&read_json::<SubspaceFile>(query_path)?)?;
        let entry = if dl.is_member(&prop)? {
            let values = dl
                .homomorphisms()
                .iter()
                .map(|h| Ok(bit(h.evaluate(&prop)?)))
                .collect::<Result<Vec<_>>>()?;
            json!({ "evaluators": values, "member": true })
        } else {
            json!({ "evaluators": "non-member", "member": false })
        };
        map.insert("query".to_string(), entry);
    }
    if homs {
        let rows = dl
            .homomorphisms()
            .iter()
            .map(|h| {
                dl.rays()
                    .iter()
                    .map(|r| Ok(bit(h.evaluate(r.as_subspace())?)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        map.insert("homomorphisms".to_string(), json!(rows));
    }
    if contextual_state {
        let cs = dl.contextual_state();
        let mixture: Vec<Value> = cs
            .mixture()
            .iter()
            .map(|(w, p)| {
                json!({
                    "projector": matrix_strings(p),
                    "weight": w.to_string(),
                })
            })
            .collect();
        let density = cs.density();
        map.insert(
            "contextual_state".to_string(),
            json!({
                "density": matrix_strings(&density),
                "mixture": mixture,
                "trace": density.trace()?.to_string(),
            }),
        );
    }
    Ok(out)
}

fn coloring_map(problem: &Problem, coloring: &[bool]) -> BTreeMap<String, &'static str> {
    problem
        .rays
        .labels()
        .iter()
        .zip(coloring)
        .map(|(label, &v)| (label.clone(), bit(v)))
        .collect()
}

fn cmd_ks(
    rays: Option<&Path>,
    dataset: Option<&str>,
    enumerate: Option<usize>,
    certificate: bool,
) -> Result<Value> {
    let rayset: RaySet = match (rays, dataset) {
        (Some(path), None) => RaySet::from_file(&read_json::<RaySetFile>(path)?)?,
        (None, Some(name)) => match datasets::get(name)?.payload {
            DatasetPayload::RaySet(rs) => rs,
            _ => {
                return Err(Error::domain(format!("dataset {name} is not a ray set")));
            }
        },
        _ => unreachable!("argument parser enforces exactly one source"),
    };
    let problem = build_problem(&rayset);
    let report = solve(&problem);
    if let Some(coloring) = &report.coloring {
        if !verify_coloring(&problem, coloring)?.is_empty() {
            return Err(Error::domain(
                "internal check failed: search reported an invalid coloring",
            ));
        }
    }
    let mut out = json!({
        "bases": problem.bases.len(),
        "coloring": report.coloring.as_deref().map(|c| coloring_map(&problem, c)),
        "edges": problem.edges.len(),
        "nodes_explored": report.nodes_explored,
        "rays": problem.rays.len(),
        "verdict": if report.satisfiable { "sat" } else { "unsat" },
    });
    let map = out.as_object_mut().expect("literal object");
    if certificate {
        let mut occurrences = vec![0usize; problem.rays.len()];
        for basis in &problem.bases {
            for &m in basis {
                occurrences[m] += 1;
            }
        }
        map.insert(
            "parity_certificate".to_string(),
            json!({
                "applies": check_parity_certificate(&problem),
                "basis_count": problem.bases.len(),
                "every_ray_occurrence_even": occurrences.iter().all(|&c| c % 2 == 0),
            }),
        );
    }
    if let Some(cap) = enumerate {
        if cap == 0 {
            return Err(Error::domain("enumeration cap must be at least 1"));
        }
        let enumeration = enumerate_colorings(&problem, cap);
        let colorings: Vec<BTreeMap<String, &str>> = enumeration
            .colorings
            .iter()
            .map(|c| coloring_map(&problem, c))
            .collect();
        map.insert(
            "enumeration".to_string(),
            json!({
                "cap": cap,
                "colorings": colorings,
                "complete": enumeration.complete,
                "count": colorings.len(),
            }),
        );
    }
    Ok(out)
}

fn cmd_classical(space_path: &Path, point: &str) -> Result<Value> {
    let file: PhaseSpaceFile = read_json(space_path)?;
    let (space, properties) = file.load()?;
    let mut table = BTreeMap::new();
    for (name, prop) in &properties {
        let truth = classical_truth(&space, point, prop)?;
        table.insert(name.clone(), if truth { "true" } else { "false" });
    }
    Ok(json!({ "point": point, "table": table }))
}

fn cmd_contrast() -> Result<Value> {
    // Classical side: on a three-point space, every point valuation over the
    // full power set passes the Boolean homomorphism check.
    let space = PhaseSpace::new(vec!["p1".to_string(), "p2".to_string(), "p3".to_string()])?;
    let family = space.power_set();
    let mut homomorphisms = 0;
    for point in space.points().to_vec() {
        let values = point_valuation(&space, &point, &family)?;
        if check_boolean_homomorphism(&space, &family, &values)?.is_empty() {
            homomorphisms += 1;
        }
    }
    // Quantum side: the 18-ray set admits no coloring at all.
    let rayset = match datasets::get("cabello18")?.payload {
        DatasetPayload::RaySet(rs) => rs,
        _ => unreachable!("cabello18 is a ray set"),
    };
    let report = solve(&build_problem(&rayset));
    Ok(json!({
        "cabello18": if report.satisfiable { "sat" } else { "unsat" },
        "classical_homomorphisms": homomorphisms,
    }))
}

fn cmd_datasets_list() -> Result<Value> {
    let entries = datasets::names()
        .into_iter()
        .map(|name| {
            let entry = datasets::get(name)?;
            Ok(json!({
                "kind": entry.kind(),
                "name": entry.name,
                "provenance": entry.provenance,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Value::Array(entries))
}

fn cmd_datasets_show(name: &str) -> Result<Value> {
    let entry = datasets::get(name)?;
    let payload = match &entry.payload {
        DatasetPayload::RaySet(rs) => serde_json::to_value(rs.to_file()),
        DatasetPayload::Context(c) => serde_json::to_value(c.to_file()),
        DatasetPayload::SpinExample(s) => serde_json::to_value(s.to_file()),
    }
    .map_err(|e| Error::Parse(e.to_string()))?;
    Ok(json!({
        "kind": entry.kind(),
        "name": entry.name,
        "payload": payload,
        "provenance": entry.provenance,
    }))
}

fn cmd_lattice(op: &LatticeCommand) -> Result<Value> {
    let load = |path: &Path| -> Result<Subspace> {
        Subspace::from_file(&read_json::<SubspaceFile>(path)?)
    };
    let result = match op {
        LatticeCommand::Meet { a, b } => load(a)?.meet(&load(b)?)?,
        LatticeCommand::Join { a, b } => load(a)?.join(&load(b)?)?,
        LatticeCommand::Ortho { a } => load(a)?.ortho(),
    };
    serde_json::to_value(result.to_file()).map_err(|e| Error::Parse(e.to_string()))
}
