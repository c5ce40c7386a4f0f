use std::fs;
use std::path::Path;

use graphsep::density::{complement_density, density_of_graph, CirculantSpec, DensityMatrix, GroupFunctionZ2n};
use graphsep::graph::{parse_graph, BipartiteLabeledGraph};
use graphsep::lab::{
    conjectured_product_count, figure_graphs, range_product_states, sweep_conjecture1, sweep_matchings, GraphRecord,
    RangeSearchOptions, SweepMode, SweepOptions,
};
use graphsep::separability::{
    decide_graph, degree_condition_graph, verify_decomposition, DecomposeError, DecompositionInput, StrategyRegistry,
    RECONSTRUCTION_TOL,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::{CliError, DecomposeArgs, RangeArgs, SweepArgs};

type CmdResult = Result<Value, CliError>;

fn user(msg: impl Into<String>) -> CliError {
    CliError::User(msg.into())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| user(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<BipartiteLabeledGraph, CliError> {
    parse_graph(&read(path)?).map_err(|e| user(format!("{}: {e}", path.display())))
}

fn resplit(g: BipartiteLabeledGraph, split: Option<&[usize]>) -> Result<BipartiteLabeledGraph, CliError> {
    let Some(&[p, q]) = split else { return Ok(g) };
    if p * q != g.vertex_count() {
        return Err(user(format!("split {p} x {q} does not match {} vertices", g.vertex_count())));
    }
    BipartiteLabeledGraph::from_index_edges(p, q, g.edges().iter().copied()).map_err(|e| user(e.to_string()))
}

fn decompose_error(e: DecomposeError) -> CliError {
    let msg = format!("{}: {e}", e.kind());
    if e.is_internal() {
        CliError::Internal(msg)
    } else {
        CliError::User(msg)
    }
}

pub fn analyze(path: &Path, split: Option<&[usize]>) -> CmdResult {
    let g = resplit(load_graph(path)?, split)?;
    let registry = StrategyRegistry::with_defaults();
    let verdict = decide_graph(&g, &registry).map_err(decompose_error)?;
    let degree = degree_condition_graph(&g);
    Ok(json!({
        "p": g.p(),
        "q": g.q(),
        "graph": to_value(&g),
        "laplacian": {
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "degrees": g.degrees(),
            "degrees_pt": g.partial_transpose().degrees(),
        },
        "degree": degree.holds,
        "degree_diff": degree.diff,
        "ppt": verdict.ppt,
        "min_pt_eigenvalue": verdict.min_pt_eigenvalue,
        "separable": verdict.decision.is_separable(),
        "verdict": to_value(&verdict),
    }))
}

pub fn decompose(args: &DecomposeArgs) -> CmdResult {
    let text = read(&args.file)?;
    let (name, input) = if let Some(pq) = &args.circulant {
        let spec: CirculantSpec = serde_json::from_str(&text).map_err(|e| user(format!("circulant spec: {e}")))?;
        ("circulant", DecompositionInput::Circulant { spec, p: pq[0], q: pq[1] })
    } else if let Some(kl) = &args.z2n {
        let f: GroupFunctionZ2n = serde_json::from_str(&text).map_err(|e| user(format!("Z2^n function: {e}")))?;
        ("z2n", DecompositionInput::Z2n { f, k: kl[0], l: kl[1] })
    } else {
        let g = parse_graph(&text).map_err(|e| user(format!("{}: {e}", args.file.display())))?;
        let name = if args.nearest_point {
            "nearest-point"
        } else if args.matching {
            "matching"
        } else {
            "block-matching"
        };
        (name, DecompositionInput::Graph(g))
    };
    let registry = StrategyRegistry::with_defaults();
    let decomposition = registry.decompose(name, &input).map_err(decompose_error)?;
    let rho = input.density().map_err(decompose_error)?;
    let verification = verify_decomposition(&decomposition, &rho, RECONSTRUCTION_TOL).map_err(decompose_error)?;
    if !verification.ok {
        return Err(CliError::Internal(format!(
            "ReconstructionFailed: verification failed with error {:e}",
            verification.reconstruction_error
        )));
    }
    Ok(json!({
        "strategy": name,
        "decomposition": to_value(&decomposition),
        "verification": to_value(&verification),
    }))
}

fn write_csv(path: &Path, records: &[GraphRecord]) -> Result<(), CliError> {
    let io = |e: csv::Error| user(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["index", "edges", "degree", "ppt", "separable", "min_pt_eigenvalue"]).map_err(io)?;
    for (i, r) in records.iter().enumerate() {
        let edges: Vec<String> =
            r.graph.edge_labels().iter().map(|((a, b), (c, d))| format!("{a}.{b}-{c}.{d}")).collect();
        let separable = r.separable.map_or(String::new(), |s| s.to_string());
        w.write_record([
            i.to_string(),
            edges.join(" "),
            r.degree.to_string(),
            r.ppt.to_string(),
            separable,
            format!("{:e}", r.min_pt_eigenvalue),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| user(format!("{}: {e}", path.display())))
}

pub fn sweep(args: &SweepArgs) -> CmdResult {
    let mode = match (&args.random, args.matchings) {
        (Some(r), _) => SweepMode::Random { seed: r[0], count: r[1] as usize },
        (None, true) => SweepMode::Matchings,
        (None, false) => SweepMode::Exhaustive,
    };
    let options = SweepOptions { keep_records: args.csv.is_some() };
    let (report, records) = sweep_conjecture1(args.p, args.q, mode, options).map_err(|e| user(e.to_string()))?;
    let mut value = to_value(&report);
    if args.matchings {
        let checks = sweep_matchings(args.p, args.q).map_err(|e| user(e.to_string()))?;
        if !checks.failures.is_empty() {
            eprintln!("graphsep: {} perfect matching check failure(s)", checks.failures.len());
        }
        value["matching_checks"] = to_value(&checks);
    }
    if let Some(path) = &args.csv {
        write_csv(path, &records)?;
    }
    if let Some(path) = &args.out {
        let text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
        fs::write(path, text).map_err(|e| user(format!("{}: {e}", path.display())))?;
    }

    let t = &report.totals;
    eprintln!(
        "graphsep: {} graphs, degree<=>PPT disagreements {}, conjecture counterexamples {} ({} decidable)",
        t.graphs, t.disagreements, t.conjecture_counterexamples, t.decidable
    );
    if t.disagreements > 0 {
        eprintln!("graphsep: !!! {} degree/PPT mismatches: this contradicts the proof identity", t.disagreements);
    }
    if t.conjecture_counterexamples > 0 {
        eprintln!("graphsep: !!! {} CONJECTURE COUNTEREXAMPLES found", t.conjecture_counterexamples);
    }
    Ok(value)
}

pub fn range_search(args: &RangeArgs) -> CmdResult {
    let text = read(&args.file)?;
    let looks_like_density = serde_json::from_str::<Value>(&text).is_ok_and(|v| v.get("matrix").is_some());
    let (rho, conjectured, kind) = if looks_like_density {
        let rho = DensityMatrix::from_json(&text).map_err(|e| user(e.to_string()))?;
        let rho = match args.split.as_deref() {
            Some(&[p, q]) => rho.with_split(p, q).map_err(|e| user(e.to_string()))?,
            _ => rho,
        };
        (rho, None, "density")
    } else {
        let g = parse_graph(&text).map_err(|e| user(format!("{}: {e}", args.file.display())))?;
        let g = resplit(g, args.split.as_deref())?;
        let rho = density_of_graph(&g).map_err(|e| user(e.to_string()))?;
        (rho, conjectured_product_count(&g), "graph")
    };
    let rho = if args.complement { complement_density(&rho).map_err(|e| user(e.to_string()))? } else { rho };
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(user("--tol must be positive"));
    }
    let options = RangeSearchOptions { seed: args.seed, restarts: args.restarts, tol: args.tol };
    let result = range_product_states(&rho, options).map_err(|e| user(e.to_string()))?;
    if let Some(c) = conjectured {
        eprintln!("graphsep: found {} product states, conjectured {c}", result.found);
    }
    let mut value = to_value(&result);
    value["input"] = json!(kind);
    value["complement"] = json!(args.complement);
    value["conjectured_count"] = json!(conjectured);
    Ok(value)
}

pub fn figures() -> CmdResult {
    let f = figure_graphs();
    Ok(json!({
        "fig2": to_value(&f.fig2),
        "fig3": to_value(&f.fig3),
        "fig4": to_value(&f.fig4),
        "notes": {
            "fig4": "representative found by search: perfect entangling matching on 3 x 4, closed under partial transpose, not a union of column-pair matchings, no two-column cycle"
        }
    }))
}
