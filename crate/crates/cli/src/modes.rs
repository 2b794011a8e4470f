use std::fmt::Write as _;

use serde_json::{json, Value};

use permagic::context::{census_of, OrthoGraph, PentagonCensus};
use permagic::cyclo::{parse_with, Env};
use permagic::fixtures::group_fixture;
use permagic::gates::{close_group, enumerate_magic_pairs, GateError, GroupJson, Notation, PairSearchResult};
use permagic::report::{run_classify, run_props, run_table2, ClassifyRun, ConstructionChoice, RowStatus};
use permagic::spectra::{reference_state, ClassifyOptions, ReferenceState, REFERENCE_NAMES};
use permagic::wigner::{monotones, phase_points, wigner_numeric, wigner_of_vector, WignerError};
use permagic::{GateGroup, Permutation, Ray};

use crate::output::{Failure, Report};
use crate::{Args, ConstructionArg, Mode, NotationArg};

pub fn dispatch(args: &Args) -> Result<Report, Failure> {
    match args.mode {
        Mode::Search => search(args),
        Mode::Classify => classify(args),
        Mode::Wigner => wigner(args),
        Mode::Table2 => table2(args),
        Mode::Context => context(args),
        Mode::Props => props(args),
    }
}

fn config<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Config(e.to_string())
}

fn compute<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Compute(e.to_string())
}

fn gate_failure(e: GateError) -> Failure {
    match e {
        GateError::OrderCapExceeded { .. } => compute(e),
        _ => config(e),
    }
}

fn choice(args: &Args) -> ConstructionChoice {
    match args.construction {
        ConstructionArg::Direct => ConstructionChoice::Direct,
        ConstructionArg::Tensor => ConstructionChoice::Tensor,
        ConstructionArg::Both => ConstructionChoice::Both,
    }
}

fn check_dims(dims: &[usize]) -> Result<(), Failure> {
    match dims.iter().find(|d| !(2..=9).contains(*d)) {
        Some(d) => Err(Failure::Config(format!("dimension {d} is outside 2..=9"))),
        None => Ok(()),
    }
}

/// At most one `--dim`, validated.
fn single_dim(args: &Args) -> Result<Option<usize>, Failure> {
    check_dims(&args.dim)?;
    match args.dim.as_slice() {
        [] => Ok(None),
        [d] => Ok(Some(*d)),
        _ => Err(Failure::Config("this mode takes a single --dim".into())),
    }
}

fn env(args: &Args) -> Result<Env, Failure> {
    let mut env = Env::new();
    for binding in &args.vars {
        let (name, expr) = binding
            .split_once('=')
            .ok_or_else(|| Failure::Config(format!("expected name=expr, got {binding:?}")))?;
        env.insert(name.trim(), parse_with(expr, &env).map_err(config)?);
    }
    Ok(env)
}

/// Groups named on the command line, or found by the magic-pair search.
fn groups(args: &Args) -> Result<Vec<(String, GateGroup)>, Failure> {
    let dim = single_dim(args)?;
    if let Some(name) = &args.group {
        if !args.generators.is_empty() {
            return Err(Failure::Config("--group and --generators are exclusive".into()));
        }
        let fixture = group_fixture(name).map_err(config)?;
        if dim.is_some_and(|d| d != fixture.dim) {
            return Err(Failure::Config(format!("{name} acts on dimension {}", fixture.dim)));
        }
        let g = fixture.group().map_err(compute)?;
        return Ok(vec![(name.clone(), g)]);
    }
    let d = dim.ok_or_else(|| Failure::Config("--dim, --group or --generators is required".into()))?;
    if !args.generators.is_empty() {
        let notation = match args.notation {
            NotationArg::OneLine => Notation::OneLine,
            NotationArg::Cycle => Notation::Cycle,
        };
        let gens = args
            .generators
            .iter()
            .map(|s| Permutation::parse(s, notation, Some(d)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(config)?;
        if let Some(p) = gens.iter().find(|p| p.degree() != d) {
            return Err(Failure::Config(format!("generator {} does not act on {d} letters", p.cycle_string())));
        }
        let g = close_group(&gens, args.order_cap).map_err(gate_failure)?;
        let name = g.signature().name().unwrap_or_else(|| format!("order {}", g.order()));
        return Ok(vec![(name, g)]);
    }
    eprintln!("searching magic generator pairs in degree {d}");
    let found = enumerate_magic_pairs(d, args.order_cap).map_err(gate_failure)?;
    Ok(found
        .distinct_groups()
        .into_iter()
        .enumerate()
        .map(|(i, g)| (g.name.unwrap_or_else(|| format!("group{i}")), g.group))
        .collect())
}

fn search(args: &Args) -> Result<Report, Failure> {
    let d = single_dim(args)?.ok_or_else(|| Failure::Config("search needs --dim".into()))?;
    eprintln!("searching magic generator pairs in degree {d}");
    let r = enumerate_magic_pairs(d, args.order_cap).map_err(gate_failure)?;
    Ok(search_report(&r))
}

fn search_report(r: &PairSearchResult) -> Report {
    let classes: Vec<Value> = r
        .classes
        .iter()
        .map(|c| {
            json!({
                "first": c.first.cycle_string(),
                "second": c.second.cycle_string(),
                "name": c.name,
                "order": c.signature.order,
                "transitive": c.transitive,
            })
        })
        .collect();
    let distinct: Vec<Value> = r
        .distinct_groups()
        .iter()
        .map(|g| {
            json!({
                "group": GroupJson::from(&g.group),
                "transitive": g.transitive,
                "pair_classes": g.pair_classes,
            })
        })
        .collect();
    let skipped: Vec<Value> = r
        .skipped
        .iter()
        .map(|s| json!({"first": s.first.cycle_string(), "second": s.second.cycle_string(), "partial": s.partial}))
        .collect();
    let json = json!({
        "degree": r.degree,
        "order_cap": r.options.order_cap,
        "classes": classes,
        "distinct_groups": distinct,
        "copies_by_name": r.copies_by_name(),
        "skipped": skipped,
        "cyclic_excluded": r.cyclic_excluded,
    });

    let mut text = format!("degree {}: {} pair classes\n", r.degree, r.classes.len());
    for c in &r.classes {
        let name = c.name.as_deref().unwrap_or("?");
        let _ = writeln!(text, "  {:<14} {:<14} -> {name} (order {})", c.first.cycle_string(), c.second.cycle_string(), c.signature.order);
    }
    for (name, n) in r.copies_by_name() {
        let _ = writeln!(text, "{name}: {n} copies");
    }
    if !r.skipped.is_empty() {
        let _ = writeln!(text, "{} pairs skipped at order cap {}", r.skipped.len(), r.options.order_cap);
    }

    let mut csv = String::from("first,second,name,order,transitive\n");
    for c in &r.classes {
        let _ = writeln!(
            csv,
            "\"{}\",\"{}\",{},{},{}",
            c.first.cycle_string(),
            c.second.cycle_string(),
            c.name.as_deref().unwrap_or(""),
            c.signature.order,
            c.transitive
        );
    }
    let mut report = Report::new(format!("search-d{}", r.degree), json, text);
    report.csv = Some(csv);
    report
}

fn classify(args: &Args) -> Result<Report, Failure> {
    if single_dim(args)? == Some(2) && args.group.is_none() && args.generators.is_empty() {
        // no magic permutation pairs exist on two letters
        return qubit_reference_report();
    }
    let opts = ClassifyOptions {
        min_clique_size: args.min_clique,
        paper_restriction: args.paper_restriction,
        ..ClassifyOptions::default()
    };
    let mut runs = Vec::new();
    for (name, g) in groups(args)? {
        eprintln!("classifying {name} (order {})", g.order());
        let run = run_classify(&g, &opts, choice(args)).map_err(compute)?;
        runs.push((name, run));
    }
    if runs.is_empty() {
        return Err(Failure::Compute("no group to classify".into()));
    }
    let json = Value::Array(
        runs.iter()
            .map(|(name, run)| json!({"name": name, "run": run}))
            .collect(),
    );
    let text: String = runs.iter().map(|(name, run)| classify_text(name, run)).collect();
    let csv: String = runs
        .iter()
        .map(|(name, run)| format!("# {name}\n{}", run.report.to_csv()))
        .collect();
    let dot: String = runs.iter().map(|(_, run)| run.graph.to_dot()).collect();
    let d = runs[0].1.report.dimension;
    let mut report = Report::new(format!("classify-d{d}"), json, text);
    report.csv = Some(csv);
    report.dot = Some(dot);
    Ok(report)
}

fn classify_text(name: &str, run: &ClassifyRun) -> String {
    let r = &run.report;
    let mut out = format!("{name} on {} letters, order {}\n", r.dimension, r.group.order);
    let _ = writeln!(out, "commuting cliques by size: {}", profile(&r.clique_size_profile()));
    let _ = writeln!(
        out,
        "rays: {} ({} stabilizer, {} magic, {} unclassified)",
        r.counts.total, r.counts.stabilizer, r.counts.magic, r.counts.unclassified
    );
    if r.restricted_out > 0 {
        let _ = writeln!(out, "magic rays dropped by the {{0, ±1}} restriction: {}", r.restricted_out);
    }
    for (i, ray) in r.rays.iter().enumerate() {
        let _ = writeln!(out, "  {i:>3} {:<12} {}", format!("{:?}", ray.tag).to_lowercase(), ray.ray);
    }
    let _ = writeln!(out, "orthogonality edges: {}", run.orthogonal_edges);
    let _ = writeln!(out, "orthogonal cliques by size: {}", profile(&run.ray_clique_profile));
    out.push_str(&census_text(&run.census));
    for m in &run.magic_negativity {
        let _ = writeln!(out, "  {} [{}] sum of negative entries {} ≈ {:.6}", m.ray, m.construction, m.sum_negative, m.approx);
    }
    out
}

fn census_text(c: &PentagonCensus) -> String {
    let mut out = format!(
        "pentagons: {} induced, {} five-vertex sets with a 5-cycle\n",
        c.pentagons.len(),
        c.five_cycle_vertex_sets
    );
    let contextual = c.pentagons.iter().filter(|p| p.witness.contextual).count();
    let _ = writeln!(out, "contextual pentagons: {contextual}/{}", c.pentagons.len());
    let _ = writeln!(out, "composition: {}", pairs(&c.composition));
    let _ = writeln!(out, "magic patterns: {}", pairs(&c.magic_patterns));
    for p in &c.pentagons {
        let _ = writeln!(
            out,
            "  {:?} witness {:.6} ± {:.1e} vs α = {} [{:?}]",
            p.vertices, p.witness.witness_max, p.witness.error_bound, p.witness.independence_number, p.witness.verdict
        );
    }
    out
}

fn profile(m: &std::collections::BTreeMap<usize, usize>) -> String {
    let parts: Vec<String> = m.iter().map(|(size, n)| format!("{n}×{size}")).collect();
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(", ")
    }
}

fn pairs(m: &std::collections::BTreeMap<String, usize>) -> String {
    let parts: Vec<String> = m.iter().map(|(k, n)| format!("{k}: {n}")).collect();
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(", ")
    }
}

/// Wigner functions of the single-qubit reference states.
fn qubit_reference_report() -> Result<Report, Failure> {
    let pps = phase_points(2, permagic::wigner::Construction::Direct).map_err(compute)?;
    let mut rows = Vec::new();
    let mut text = String::from("d = 2: reference states only, no magic permutation pairs exist\n");
    let mut csv = String::from("state,q,p,value\n");
    for name in REFERENCE_NAMES {
        let state = reference_state(name).map_err(compute)?;
        if state.to_c64().len() != 2 {
            continue;
        }
        let w = wigner_numeric(&state.to_c64(), &pps).map_err(compute)?;
        let exact = match &state {
            ReferenceState::Exact(v) => {
                let w = wigner_of_vector(v, &pps).map_err(compute)?;
                Some(w.rows().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>())
            }
            ReferenceState::Numeric(_) => None,
        };
        let negative = w.iter().flatten().filter(|x| **x < 0.0).fold(0.0, |a, x| a + x);
        let _ = writeln!(text, "{name:<8} W = {w:.6?} negative sum {negative:.6}");
        for (q, row) in w.iter().enumerate() {
            for (p, x) in row.iter().enumerate() {
                let _ = writeln!(csv, "{name},{q},{p},{x}");
            }
        }
        rows.push(json!({"state": name, "approx": w, "exact": exact, "negative_sum": negative}));
    }
    let mut report = Report::new("classify-d2", json!({"dimension": 2, "reference_states": rows}), text);
    report.csv = Some(csv);
    report.dot = Some("graph orthogonality {\n}\n".into());
    Ok(report)
}

fn context(args: &Args) -> Result<Report, Failure> {
    let opts = ClassifyOptions {
        min_clique_size: args.min_clique,
        paper_restriction: args.paper_restriction,
        ..ClassifyOptions::default()
    };
    let mut json = Vec::new();
    let mut text = String::new();
    let mut dot = String::new();
    let mut csv = String::from("group,vertices,stabilizer,magic,witness_max,error_bound,independence_number,verdict\n");
    let mut d = 0;
    for (name, g) in groups(args)? {
        eprintln!("building orthogonality graph of {name}");
        d = g.degree();
        let report = permagic::spectra::classify_group(&g, &opts).map_err(compute)?;
        let graph = OrthoGraph::from_report(&report);
        let census = census_of(&graph).map_err(compute)?;
        let _ = writeln!(text, "{name}: {} rays, {} edges", graph.len(), graph.edge_count());
        text.push_str(&census_text(&census));
        for p in &census.pentagons {
            let vs: Vec<String> = p.vertices.iter().map(ToString::to_string).collect();
            let _ = writeln!(
                csv,
                "{name},{},{},{},{},{},{},{:?}",
                vs.join(" "),
                p.stabilizer,
                p.magic,
                p.witness.witness_max,
                p.witness.error_bound,
                p.witness.independence_number,
                p.witness.verdict
            );
        }
        dot.push_str(&graph.to_dot());
        json.push(json!({"name": name, "census": census}));
    }
    let mut report = Report::new(format!("context-d{d}"), Value::Array(json), text);
    report.csv = Some(csv);
    report.dot = Some(dot);
    Ok(report)
}

fn wigner(args: &Args) -> Result<Report, Failure> {
    let spec = args.state.as_deref().ok_or_else(|| Failure::Config("wigner needs --state".into()))?;
    let dim = single_dim(args)?;
    let state = if REFERENCE_NAMES.contains(&spec) {
        reference_state(spec).map_err(config)?
    } else {
        ReferenceState::Exact(Ray::parse(spec, &env(args)?).map_err(config)?.amplitudes().to_vec())
    };
    let d = state.to_c64().len();
    if dim.is_some_and(|x| x != d) {
        return Err(Failure::Config(format!("state has {d} amplitudes")));
    }
    check_dims(&[d])?;
    let mut results = Vec::new();
    let mut text = String::new();
    let mut csv = String::from("construction,q,p,exact,approx\n");
    for c in choice(args).resolve(d) {
        let pps = phase_points(d, c).map_err(compute)?;
        let _ = writeln!(text, "{c} construction, d = {d}");
        let outcome = match &state {
            ReferenceState::Exact(v) => wigner_of_vector(v, &pps).map(|w| {
                let m = monotones(&w);
                let _ = write!(text, "{}", w.pretty());
                let _ = writeln!(text, "sum negativity {} ≈ {:.6}, mana {:.6}", m.sum_negativity, m.sum_negativity_f64(), m.mana);
                for (q, row) in w.rows().iter().enumerate() {
                    for (p, x) in row.iter().enumerate() {
                        let _ = writeln!(csv, "{c},{q},{p},\"{x}\",{}", x.to_f64());
                    }
                }
                json!({"construction": c, "wigner": w, "sum_negativity": m.sum_negativity.to_string(), "mana": m.mana})
            }),
            ReferenceState::Numeric(v) => wigner_numeric(v, &pps).map(|w| {
                let negative = w.iter().flatten().filter(|x| **x < 0.0).fold(0.0, |a, x| a + x);
                let _ = writeln!(text, "{w:.6?}\nsum of negative entries {negative:.6}");
                for (q, row) in w.iter().enumerate() {
                    for (p, x) in row.iter().enumerate() {
                        let _ = writeln!(csv, "{c},{q},{p},,{x}");
                    }
                }
                json!({"construction": c, "approx": w, "negative_sum": negative})
            }),
        };
        match outcome {
            Ok(v) => results.push(v),
            Err(e @ WignerError::NonHermitianDensity { .. }) => {
                let _ = writeln!(text, "not available: {e}");
                results.push(json!({"construction": c, "error": e.to_string()}));
            }
            Err(e) => return Err(compute(e)),
        }
    }
    let json = json!({"dimension": d, "state": spec, "results": results});
    let mut report = Report::new(format!("wigner-d{d}"), json, text);
    report.csv = Some(csv);
    Ok(report)
}

fn table2(args: &Args) -> Result<Report, Failure> {
    check_dims(&args.dim)?;
    let dims: Vec<usize> = if args.dim.is_empty() { (2..=9).collect() } else { args.dim.clone() };
    eprintln!("computing negativity table for dimensions {dims:?}");
    let t = run_table2(&dims, choice(args));
    let errors = t.rows.iter().filter(|r| r.status == RowStatus::Error).count();
    let mut report = Report::new("table2", serde_json::to_value(&t).map_err(compute)?, t.to_text());
    report.csv = Some(t.to_csv());
    report.mismatch = !t.all_match();
    if errors > 0 {
        eprintln!("{errors} rows failed to compute");
    }
    Ok(report)
}

fn props(args: &Args) -> Result<Report, Failure> {
    check_dims(&args.dim)?;
    let dims: Vec<usize> = if args.dim.is_empty() { (2..=9).collect() } else { args.dim.clone() };
    let mut all = Vec::new();
    for d in dims {
        eprintln!("checking phase points for d = {d}");
        all.extend(run_props(d, choice(args), args.samples).map_err(compute)?);
    }
    let flag = |b: bool| if b { "pass" } else { "FAIL" };
    let mut text = String::new();
    let mut csv = String::from("d,construction,hermitian,unit_trace,trace_orthogonal,sum_is_d_identity,striations,reconstruction\n");
    for r in &all {
        let striations = r.striations.map_or("n/a", flag);
        let _ = writeln!(
            text,
            "d={} {:<6} hermitian {} unit-trace {} orthogonal {} sum {} striations {} reconstruction {}",
            r.d,
            r.construction.to_string(),
            flag(r.hermitian),
            flag(r.unit_trace),
            flag(r.trace_orthogonal),
            flag(r.sum_is_d_identity),
            striations,
            flag(r.reconstruction)
        );
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            r.d,
            r.construction,
            r.hermitian,
            r.unit_trace,
            r.trace_orthogonal,
            r.sum_is_d_identity,
            r.striations.map_or("".to_string(), |b| b.to_string()),
            r.reconstruction
        );
    }
    let mut report = Report::new("props", serde_json::to_value(&all).map_err(compute)?, text);
    report.csv = Some(csv);
    Ok(report)
}
