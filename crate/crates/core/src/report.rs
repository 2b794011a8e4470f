//! Pipelines shared by the command-line tool and the test suites: the
//! negativity table, printed-matrix checks, phase-point properties and the
//! group → eigenstates → contextuality chain.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::context::{census_of, chorded_pentagon_count, ContextError, OrthoGraph, PentagonCensus};
use crate::cyclo::Cyclotomic;
use crate::fixtures::{fixtures, ExpectedNegativity, FixtureError, NegativityEntry, StateSpec};
use crate::gates::GateGroup;
use crate::spectra::{classify_group, reference_state, ClassifyOptions, EigenReport, ReferenceState, SpectraError};
use crate::wigner::{
    check_properties, constructions_for, monotones, phase_points, sample_rays, wigner_numeric, wigner_of_vector,
    Construction, PropertyReport, WignerError, WignerMatrix,
};

/// Tolerance for states that are only known numerically.
pub const NUMERIC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Fixture(#[from] FixtureError),
    #[error(transparent)]
    Wigner(#[from] WignerError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Context(#[from] ContextError),
}

/// Which phase-point constructions to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstructionChoice {
    Direct,
    Tensor,
    #[default]
    Both,
}

impl ConstructionChoice {
    /// For prime d the tensor product has a single factor and coincides with
    /// the direct construction, so `Tensor` falls back to `Direct` there.
    pub fn resolve(self, d: usize) -> Vec<Construction> {
        let available = constructions_for(d);
        match self {
            ConstructionChoice::Both => available,
            ConstructionChoice::Direct => vec![Construction::Direct],
            ConstructionChoice::Tensor if available.contains(&Construction::Tensor) => vec![Construction::Tensor],
            ConstructionChoice::Tensor => vec![Construction::Direct],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NegativityResult {
    pub construction: Construction,
    /// exact sum of negative entries; absent for numeric states
    pub exact: Option<String>,
    pub approx: Option<f64>,
    pub sum_negativity: Option<f64>,
    pub mana: Option<f64>,
    pub matches: bool,
    /// why no value was produced, e.g. non-Hermitian phase points
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Match,
    Mismatch,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table2Row {
    pub dimension: usize,
    pub state: String,
    pub group: Option<String>,
    pub expected: String,
    pub expected_approx: Option<f64>,
    pub results: Vec<NegativityResult>,
    pub matched_by: Vec<Construction>,
    pub status: RowStatus,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table2Report {
    pub rows: Vec<Table2Row>,
    /// per dimension, the constructions that matched every row of that dimension
    pub constructions_matching: BTreeMap<usize, Vec<Construction>>,
}

impl Table2Report {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.status == RowStatus::Match)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("dimension,state,group,expected,construction,exact,approx,matches\n");
        for r in &self.rows {
            for n in &r.results {
                out.push_str(&format!(
                    "{},\"{}\",{},\"{}\",{},\"{}\",{:.12},{}\n",
                    r.dimension,
                    r.state,
                    r.group.as_deref().unwrap_or(""),
                    r.expected,
                    n.construction,
                    n.exact.as_deref().unwrap_or(n.error.as_deref().unwrap_or("")),
                    n.approx.unwrap_or(f64::NAN),
                    n.matches
                ));
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let verdict = match r.status {
                RowStatus::Match => "match",
                RowStatus::Mismatch => "MISMATCH",
                RowStatus::Error => "ERROR",
            };
            let via: Vec<String> = r.matched_by.iter().map(ToString::to_string).collect();
            let got: Vec<String> = r
                .results
                .iter()
                .map(|n| match n.approx {
                    Some(x) => format!("{}={x:.6}", n.construction),
                    None => format!("{}=n/a", n.construction),
                })
                .collect();
            out.push_str(&format!(
                "d={} {:<24} expected {:<36} {}  [{}]{}\n",
                r.dimension,
                r.state,
                r.expected,
                got.join(" "),
                verdict,
                if via.is_empty() { String::new() } else { format!(" via {}", via.join(",")) }
            ));
        }
        for (d, cs) in &self.constructions_matching {
            let names: Vec<String> = cs.iter().map(ToString::to_string).collect();
            out.push_str(&format!("d={d}: rows reproduced by {}\n", if names.is_empty() { "none".into() } else { names.join(", ") }));
        }
        out
    }
}

fn negativity_row(entry: &NegativityEntry, choice: ConstructionChoice) -> Result<Table2Row, ReportError> {
    let d = entry.dim;
    let expected = entry.expected()?;
    let state: Vec<Cyclotomic>;
    let mut numeric = None;
    match (&entry.state, entry.ray()?) {
        (_, Some(ray)) => state = ray.amplitudes().to_vec(),
        (StateSpec::Named(name), None) => match reference_state(name)? {
            ReferenceState::Exact(v) => state = v,
            ReferenceState::Numeric(v) => {
                state = Vec::new();
                numeric = Some(v);
            }
        },
        (StateSpec::Amplitudes(_), None) => unreachable!("amplitude states always parse to a ray"),
    }
    let mut results = Vec::new();
    for c in choice.resolve(d) {
        let pps = phase_points(d, c)?;
        let result = match &numeric {
            Some(v) => wigner_numeric(v, &pps).map(|w| {
                let neg: f64 = w.iter().flatten().filter(|&&x| x < -NUMERIC_TOLERANCE).sum();
                let matches = match &expected {
                    ExpectedNegativity::Positive => neg == 0.0,
                    ExpectedNegativity::Exact(e) => (neg - e.to_f64()).abs() < NUMERIC_TOLERANCE,
                };
                NegativityResult {
                    construction: c,
                    exact: None,
                    approx: Some(neg),
                    sum_negativity: Some(-neg),
                    mana: Some((1.0 - 2.0 * neg).ln()),
                    matches,
                    error: None,
                }
            }),
            None => wigner_of_vector(&state, &pps).map(|w| {
                let neg = w.negative_sum();
                let m = monotones(&w);
                let matches = match &expected {
                    ExpectedNegativity::Positive => neg.is_zero(),
                    ExpectedNegativity::Exact(e) => neg == *e,
                };
                NegativityResult {
                    construction: c,
                    exact: Some(neg.to_string()),
                    approx: Some(neg.to_f64()),
                    sum_negativity: Some(m.sum_negativity.to_f64()),
                    mana: Some(m.mana),
                    matches,
                    error: None,
                }
            }),
        };
        let result = result.unwrap_or_else(|e| NegativityResult {
            construction: c,
            exact: None,
            approx: None,
            sum_negativity: None,
            mana: None,
            matches: false,
            error: Some(e.to_string()),
        });
        results.push(result);
    }
    let matched_by: Vec<Construction> = results.iter().filter(|r| r.matches).map(|r| r.construction).collect();
    Ok(Table2Row {
        dimension: d,
        state: entry.label(),
        group: entry.group.clone(),
        expected: entry.sum_negative.clone(),
        expected_approx: match expected {
            ExpectedNegativity::Exact(e) => Some(e.to_f64()),
            ExpectedNegativity::Positive => None,
        },
        status: if matched_by.is_empty() { RowStatus::Mismatch } else { RowStatus::Match },
        matched_by,
        results,
        error: None,
    })
}

/// Sum of negative entries for every negativity-table row in `dims`.
pub fn run_table2(dims: &[usize], choice: ConstructionChoice) -> Table2Report {
    let rows: Vec<Table2Row> = fixtures()
        .negativity_table
        .iter()
        .filter(|e| dims.is_empty() || dims.contains(&e.dim))
        .map(|e| {
            negativity_row(e, choice).unwrap_or_else(|err| Table2Row {
                dimension: e.dim,
                state: e.label(),
                group: e.group.clone(),
                expected: e.sum_negative.clone(),
                expected_approx: None,
                results: Vec::new(),
                matched_by: Vec::new(),
                status: RowStatus::Error,
                error: Some(err.to_string()),
            })
        })
        .collect();
    let mut constructions_matching: BTreeMap<usize, Vec<Construction>> = BTreeMap::new();
    for d in rows.iter().map(|r| r.dimension).collect::<std::collections::BTreeSet<_>>() {
        let in_dim: Vec<&Table2Row> = rows.iter().filter(|r| r.dimension == d).collect();
        let ok = choice
            .resolve(d)
            .into_iter()
            .filter(|c| in_dim.iter().all(|r| r.matched_by.contains(c)))
            .collect();
        constructions_matching.insert(d, ok);
    }
    Table2Report { rows, constructions_matching }
}

/// Entry where a computed matrix differs from the printed one.
#[derive(Debug, Clone, Serialize)]
pub struct EntryDiff {
    pub q: usize,
    pub p: usize,
    pub expected: String,
    pub computed: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixCheck {
    pub construction: Construction,
    /// absent when the construction gives a non-real Wigner function
    pub computed: Option<WignerMatrix>,
    pub diffs: Vec<EntryDiff>,
    pub error: Option<String>,
}

impl MatrixCheck {
    pub fn matches(&self) -> bool {
        self.computed.is_some() && self.diffs.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PrintedCheck {
    pub key: String,
    pub dimension: usize,
    pub state: String,
    pub expected: WignerMatrix,
    pub checks: Vec<MatrixCheck>,
    pub matched_by: Vec<Construction>,
}

impl PrintedCheck {
    pub fn matches(&self) -> bool {
        !self.matched_by.is_empty()
    }
}

fn diff(expected: &WignerMatrix, computed: &WignerMatrix) -> Vec<EntryDiff> {
    let d = expected.dim();
    let mut out = Vec::new();
    for q in 0..d {
        for p in 0..d {
            if expected.get(q, p) != computed.get(q, p) {
                out.push(EntryDiff {
                    q,
                    p,
                    expected: expected.get(q, p).to_string(),
                    computed: computed.get(q, p).to_string(),
                });
            }
        }
    }
    out
}

/// Every printed Wigner matrix against every applicable construction.
pub fn run_printed(choice: ConstructionChoice) -> Result<Vec<PrintedCheck>, ReportError> {
    fixtures()
        .printed_matrices
        .iter()
        .map(|m| {
            let expected = m.expected()?;
            let ray = m.ray()?;
            let mut checks = Vec::new();
            for c in choice.resolve(m.dim) {
                let check = match wigner_of_vector(ray.amplitudes(), &*phase_points(m.dim, c)?) {
                    Ok(w) => MatrixCheck {
                        construction: c,
                        diffs: diff(&expected, &w),
                        computed: Some(w),
                        error: None,
                    },
                    Err(e) => MatrixCheck {
                        construction: c,
                        computed: None,
                        diffs: Vec::new(),
                        error: Some(e.to_string()),
                    },
                };
                checks.push(check);
            }
            let matched_by = checks.iter().filter(|c| c.matches()).map(|c| c.construction).collect();
            Ok(PrintedCheck {
                key: m.key.clone(),
                dimension: m.dim,
                state: format!("({})", m.state.join(",")),
                expected,
                checks,
                matched_by,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct QubitCheck {
    pub key: String,
    pub exact: bool,
    pub expected: Vec<Vec<f64>>,
    pub computed: Vec<Vec<f64>>,
    /// exact diffs for cyclotomic states
    pub diffs: Vec<EntryDiff>,
    pub max_abs_error: f64,
    pub matches: bool,
}

/// Single-qubit reference states against their printed Wigner matrices.
pub fn run_qubit_table() -> Result<Vec<QubitCheck>, ReportError> {
    let pps = phase_points(2, Construction::Direct)?;
    fixtures()
        .qubit_table
        .iter()
        .map(|q| {
            let expected = q.expected()?;
            let state = reference_state(&q.state)?;
            let (computed, diffs) = match state.exact() {
                Some(v) if q.exact => {
                    let w = wigner_of_vector(v, &pps)?;
                    let diffs = diff(&expected, &w);
                    (w.to_f64(), diffs)
                }
                _ => (wigner_numeric(&state.to_c64(), &pps)?, Vec::new()),
            };
            let exp = expected.to_f64();
            let max_abs_error = exp
                .iter()
                .flatten()
                .zip(computed.iter().flatten())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let matches = if q.exact { diffs.is_empty() } else { max_abs_error < NUMERIC_TOLERANCE };
            Ok(QubitCheck {
                key: q.key.clone(),
                exact: q.exact,
                expected: exp,
                computed,
                diffs,
                max_abs_error,
                matches,
            })
        })
        .collect()
}

/// Phase-point property checks with `samples` pseudo-random reconstruction states.
pub fn run_props(d: usize, choice: ConstructionChoice, samples: usize) -> Result<Vec<PropertyReport>, ReportError> {
    choice
        .resolve(d)
        .into_iter()
        .map(|c| {
            let pps = phase_points(d, c)?;
            Ok(check_properties(&pps, &sample_rays(d, samples, d as u64)))
        })
        .collect()
}

/// Everything derived from one group.
#[derive(Debug, Clone, Serialize)]
pub struct ClassifyRun {
    pub report: EigenReport,
    /// maximal cliques of the orthogonality graph, by size (sizes ≥ 2)
    pub ray_clique_profile: BTreeMap<usize, usize>,
    pub orthogonal_edges: usize,
    pub pentagons: usize,
    pub chorded_five_cycles: usize,
    pub census: PentagonCensus,
    /// negativity of each magic ray under the applicable constructions
    pub magic_negativity: Vec<MagicNegativity>,
    #[serde(skip)]
    pub graph: OrthoGraph,
}

#[derive(Debug, Clone, Serialize)]
pub struct MagicNegativity {
    pub ray: String,
    pub construction: Construction,
    pub sum_negative: String,
    pub approx: f64,
}

pub fn run_classify(g: &GateGroup, opts: &ClassifyOptions, choice: ConstructionChoice) -> Result<ClassifyRun, ReportError> {
    let report = classify_group(g, opts)?;
    let graph = OrthoGraph::from_report(&report);
    let census = census_of(&graph)?;
    let d = g.degree();
    let mut magic_negativity = Vec::new();
    for c in choice.resolve(d) {
        let pps = phase_points(d, c)?;
        for r in report.rays.iter().filter(|r| r.tag == crate::spectra::Tag::Magic) {
            // non-Hermitian phase points give no real negativity to report
            if let Ok(w) = wigner_of_vector(r.ray.amplitudes(), &pps) {
                let neg = w.negative_sum();
                magic_negativity.push(MagicNegativity {
                    ray: r.ray.to_string(),
                    construction: c,
                    approx: neg.to_f64(),
                    sum_negative: neg.to_string(),
                });
            }
        }
    }
    Ok(ClassifyRun {
        ray_clique_profile: graph.clique_profile(2),
        orthogonal_edges: graph.edge_count(),
        pentagons: census.pentagons.len(),
        chorded_five_cycles: chorded_pentagon_count(&graph),
        census,
        magic_negativity,
        report,
        graph,
    })
}
