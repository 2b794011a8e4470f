//! Orthogonality graphs over rays, induced pentagons and the
//! non-contextuality witness Tr(Σ_Γ ρ) ≤ α(Γ).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cyclo::Cyclotomic;
use crate::graph::Graph;
use crate::spectra::{EigenReport, Ray, Tag};

/// Search-node budget for independence numbers; ample for the ≤ 60-vertex
/// graphs that occur here.
pub const DEFAULT_ALPHA_BUDGET: u64 = 5_000_000;
/// Violations smaller than this are reported as inconclusive.
pub const CONTEXTUALITY_MARGIN: f64 = 1e-6;
/// Required certified accuracy of the top eigenvalue.
pub const EIGEN_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContextError {
    #[error("ray {index} has dimension {got}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, got: usize },
    #[error("independence number search exceeded {0} nodes")]
    BudgetExceeded(u64),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(usize),
}

/// Rays with an edge wherever the exact inner product vanishes.
#[derive(Debug, Clone)]
pub struct OrthoGraph {
    rays: Vec<Ray>,
    tags: Vec<Option<Tag>>,
    graph: Graph,
}

pub fn build_graph(rays: &[Ray]) -> Result<OrthoGraph, ContextError> {
    build_tagged(rays.iter().map(|r| (r.clone(), None)).collect())
}

fn build_tagged(vertices: Vec<(Ray, Option<Tag>)>) -> Result<OrthoGraph, ContextError> {
    if let Some((first, _)) = vertices.first() {
        let d = first.dim();
        if let Some((index, (r, _))) = vertices.iter().enumerate().find(|(_, (r, _))| r.dim() != d) {
            return Err(ContextError::DimensionMismatch { index, expected: d, got: r.dim() });
        }
    }
    let (rays, tags): (Vec<Ray>, Vec<Option<Tag>>) = vertices.into_iter().unzip();
    let n = rays.len();
    let rows: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| (i + 1..n).filter(|&j| rays[i].is_orthogonal(&rays[j])).collect())
        .collect();
    let mut graph = Graph::new(n);
    for (i, row) in rows.into_iter().enumerate() {
        for j in row {
            graph.add_edge(i, j);
        }
    }
    Ok(OrthoGraph { rays, tags, graph })
}

impl OrthoGraph {
    /// The orthogonality graph of a classification report, keeping its tags.
    pub fn from_report(report: &EigenReport) -> OrthoGraph {
        build_tagged(report.rays.iter().map(|r| (r.ray.clone(), Some(r.tag))).collect())
            .expect("report rays share one dimension")
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn tag(&self, i: usize) -> Option<Tag> {
        self.tags[i]
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn maximal_cliques(&self, min_size: usize) -> Vec<Vec<usize>> {
        self.graph.maximal_cliques(min_size)
    }

    pub fn clique_profile(&self, min_size: usize) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for c in self.maximal_cliques(min_size) {
            *out.entry(c.len()).or_insert(0) += 1;
        }
        out
    }

    pub fn independence_number(&self, budget: u64) -> Result<usize, ContextError> {
        self.graph.independence_number(budget).ok_or(ContextError::BudgetExceeded(budget))
    }

    /// DOT rendering; stabilizer rays are large black bullets, magic rays small ones.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph ortho {\n  node [shape=circle, style=filled, fillcolor=black, fontsize=8];\n");
        for (i, r) in self.rays.iter().enumerate() {
            let width = match self.tags[i] {
                Some(Tag::Stabilizer) => "0.25",
                Some(Tag::Magic) => "0.1",
                _ => "0.15",
            };
            let label = r.to_string().replace('"', "\\\"");
            let _ = writeln!(out, "  v{i} [width={width}, xlabel=\"{label}\", label=\"\"];");
        }
        for i in 0..self.len() {
            for j in self.graph.neighbors(i).into_iter().filter(|&j| j > i) {
                let _ = writeln!(out, "  v{i} -- v{j};");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// An induced 5-cycle listed in cycle order: smallest vertex first, then
/// the smaller of its two neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Pentagon(pub [usize; 5]);

impl Pentagon {
    pub fn vertices(&self) -> &[usize; 5] {
        &self.0
    }
}

/// Every 5-cycle v0-a-b-c-e-v0 with v0 minimal and a < e, induced or not.
fn five_cycles(g: &Graph) -> Vec<[usize; 5]> {
    let n = g.len();
    let mut out: Vec<[usize; 5]> = (0..n)
        .into_par_iter()
        .flat_map_iter(|v0| {
            let mut found = Vec::new();
            let nb: Vec<usize> = g.neighbors(v0).into_iter().filter(|&x| x > v0).collect();
            for &a in &nb {
                for b in g.neighbors(a).into_iter().filter(|&b| b > v0 && b != a) {
                    for c in g.neighbors(b).into_iter().filter(|&c| c > v0 && c != a && c != b) {
                        for &e in nb.iter().filter(|&&e| e > a && e != b && e != c) {
                            if g.has_edge(c, e) {
                                found.push([v0, a, b, c, e]);
                            }
                        }
                    }
                }
            }
            found
        })
        .collect();
    out.sort_unstable();
    out
}

fn is_induced(g: &Graph, c: &[usize; 5]) -> bool {
    // the five non-consecutive pairs carry no edge
    (0..5).all(|i| !g.has_edge(c[i], c[(i + 2) % 5]))
}

/// All induced pentagons, deduplicated up to rotation and reflection.
pub fn find_pentagons(g: &OrthoGraph) -> Vec<Pentagon> {
    pentagons_in(&g.graph)
}

pub fn pentagons_in(g: &Graph) -> Vec<Pentagon> {
    five_cycles(g)
        .into_iter()
        .filter(|c| is_induced(g, c))
        .map(Pentagon)
        .collect()
}

/// Number of 5-vertex sets that carry a 5-cycle, chords allowed.
pub fn chorded_pentagon_count(g: &OrthoGraph) -> usize {
    five_cycles(&g.graph)
        .into_iter()
        .map(|mut c| {
            c.sort_unstable();
            c
        })
        .collect::<BTreeSet<_>>()
        .len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Contextual,
    Inconclusive,
    NonContextual,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub vertices: Vec<usize>,
    pub independence_number: usize,
    /// top eigenvalue of Σ_Γ
    pub witness_max: f64,
    /// certified bound on |witness_max − λ_max(Σ_Γ)|
    pub error_bound: f64,
    /// Tr(Σ_Γ ρ*) re-evaluated with the top eigenvector ρ*
    pub rayleigh: f64,
    pub verdict: Verdict,
    pub contextual: bool,
    /// exact Lovász number where known (√5 for a pentagon)
    pub theta_reference: Option<f64>,
}

/// Top eigenpair of a Hermitian matrix with a residual-based error bound.
pub fn top_eigen(h: &DMatrix<Complex64>) -> (f64, Vec<Complex64>, f64) {
    let n = h.nrows();
    let eig = SymmetricEigen::new(h.clone());
    let (k, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty matrix");
    let v = eig.eigenvectors.column(k).into_owned();
    // Weyl: the spectrum moves by at most ‖H − V Λ V†‖ if V is unitary; the
    // orthogonality defect covers V being only nearly so
    let lam = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| Complex64::new(x, 0.0)));
    let vecs = &eig.eigenvectors;
    let recon_err = (h - vecs * lam * vecs.adjoint()).norm();
    let ortho_err = (vecs.adjoint() * vecs - DMatrix::<Complex64>::identity(n, n)).norm();
    let residual = (h * &v - v.scale(lambda)).norm();
    let bound = recon_err.max(residual) + ortho_err * h.norm();
    (lambda, v.iter().copied().collect(), bound)
}

fn sigma(rays: &[&Ray]) -> DMatrix<Complex64> {
    let d = rays[0].dim();
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for r in rays {
        let v = r.to_c64();
        let n: f64 = v.iter().map(Complex64::norm_sqr).sum();
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] += v[i] * v[j].conj() / n;
            }
        }
    }
    m
}

/// Σ_Γ over the given vertices against the classical bound α of their induced subgraph.
pub fn witness_check(vertices: &[usize], g: &OrthoGraph) -> Result<WitnessReport, ContextError> {
    witness_check_with_budget(vertices, g, DEFAULT_ALPHA_BUDGET)
}

pub fn witness_check_with_budget(vertices: &[usize], g: &OrthoGraph, budget: u64) -> Result<WitnessReport, ContextError> {
    if let Some(&bad) = vertices.iter().find(|&&v| v >= g.len()) {
        return Err(ContextError::UnknownVertex(bad));
    }
    let sub = g.graph.induced(vertices);
    let alpha = sub.independence_number(budget).ok_or(ContextError::BudgetExceeded(budget))?;
    if vertices.is_empty() {
        return Ok(WitnessReport {
            vertices: vec![],
            independence_number: 0,
            witness_max: 0.0,
            error_bound: 0.0,
            rayleigh: 0.0,
            verdict: Verdict::NonContextual,
            contextual: false,
            theta_reference: None,
        });
    }
    let rays: Vec<&Ray> = vertices.iter().map(|&v| &g.rays[v]).collect();
    let h = sigma(&rays);
    let (lambda, v, bound) = top_eigen(&h);
    let hv = &h * DMatrix::from_column_slice(v.len(), 1, &v);
    let rayleigh = v.iter().zip(hv.iter()).map(|(a, b)| a.conj() * b).sum::<Complex64>().re;
    let gap = lambda - alpha as f64;
    let verdict = if gap > CONTEXTUALITY_MARGIN + bound {
        Verdict::Contextual
    } else if gap < -(CONTEXTUALITY_MARGIN + bound) {
        Verdict::NonContextual
    } else {
        Verdict::Inconclusive
    };
    let pentagon = vertices.len() == 5 && sub.edge_count() == 5 && (0..5).all(|i| sub.degree(i) == 2);
    Ok(WitnessReport {
        vertices: vertices.to_vec(),
        independence_number: alpha,
        witness_max: lambda,
        error_bound: bound,
        rayleigh,
        verdict,
        contextual: verdict == Verdict::Contextual,
        theta_reference: pentagon.then(|| 5f64.sqrt()),
    })
}

/// Class of a ray under coordinate permutations and global phase: the
/// lexicographically least sorted amplitude list over all rescalings that
/// make some nonzero amplitude equal to 1.
pub fn amplitude_pattern(ray: &Ray) -> String {
    let amps = ray.amplitudes();
    amps.iter()
        .filter(|a| !a.is_zero())
        .map(|a| {
            let inv = a.inv().expect("nonzero amplitude");
            let mut s: Vec<String> = amps.iter().map(|x| (x * &inv).to_string()).collect();
            s.sort();
            s
        })
        .min()
        .map(|s| format!("({})", s.join(",")))
        .unwrap_or_default()
}

/// Conventional name of a magic pattern where one exists.
pub fn pattern_name(pattern: &str) -> Option<&'static str> {
    match pattern {
        "(-1,0,1)" => Some("strange"),
        "(0,1,1)" => Some("Norrell"),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PentagonEntry {
    pub vertices: [usize; 5],
    pub rays: Vec<Ray>,
    pub stabilizer: usize,
    pub magic: usize,
    /// amplitude pattern of each magic vertex, sorted
    pub magic_patterns: Vec<String>,
    pub witness: WitnessReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PentagonCensus {
    pub rays: usize,
    pub pentagons: Vec<PentagonEntry>,
    /// chorded 5-cycles included
    pub five_cycle_vertex_sets: usize,
    /// "kS+mM" → number of pentagons
    pub composition: BTreeMap<String, usize>,
    /// magic pattern → number of magic vertex occurrences
    pub magic_patterns: BTreeMap<String, usize>,
}

impl PentagonCensus {
    pub fn all_contextual(&self) -> bool {
        self.pentagons.iter().all(|p| p.witness.contextual)
    }
}

pub fn pentagon_census(report: &EigenReport) -> Result<PentagonCensus, ContextError> {
    census_of(&OrthoGraph::from_report(report))
}

pub fn census_of(g: &OrthoGraph) -> Result<PentagonCensus, ContextError> {
    let pentagons = find_pentagons(g);
    let entries: Vec<PentagonEntry> = pentagons
        .par_iter()
        .map(|p| {
            let vs = *p.vertices();
            let witness = witness_check(&vs, g)?;
            let stabilizer = vs.iter().filter(|&&v| g.tags[v] == Some(Tag::Stabilizer)).count();
            let mut magic_patterns: Vec<String> = vs
                .iter()
                .filter(|&&v| g.tags[v] == Some(Tag::Magic))
                .map(|&v| amplitude_pattern(&g.rays[v]))
                .collect();
            magic_patterns.sort();
            Ok(PentagonEntry {
                vertices: vs,
                rays: vs.iter().map(|&v| g.rays[v].clone()).collect(),
                stabilizer,
                magic: magic_patterns.len(),
                magic_patterns,
                witness,
            })
        })
        .collect::<Result<_, ContextError>>()?;
    let mut composition = BTreeMap::new();
    let mut patterns = BTreeMap::new();
    for e in &entries {
        *composition.entry(format!("{}S+{}M", e.stabilizer, e.magic)).or_insert(0) += 1;
        for p in &e.magic_patterns {
            *patterns.entry(p.clone()).or_insert(0) += 1;
        }
    }
    Ok(PentagonCensus {
        rays: g.len(),
        pentagons: entries,
        five_cycle_vertex_sets: chorded_pentagon_count(g),
        composition,
        magic_patterns: patterns,
    })
}

/// Exact check that Σ_Γ of an orthogonal clique is a projector, so its top
/// eigenvalue is 1.
pub fn clique_sigma_is_projector(vertices: &[usize], g: &OrthoGraph) -> bool {
    let d = g.rays.first().map_or(0, Ray::dim);
    let s = vertices
        .iter()
        .fold(crate::matrix::Matrix::zeros(d, d), |acc, &v| acc.add(&g.rays[v].projector()));
    s.mul(&s) == s && s.trace() == Cyclotomic::from_int(vertices.len() as i64)
}
