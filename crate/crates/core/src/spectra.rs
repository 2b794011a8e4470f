//! Rays, joint eigenspaces of commuting gates, and the stabilizer/magic
//! classification of the eigenstates of a permutation group.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::cyclo::{parse_with, CycloError, Cyclotomic, Env};
use crate::gates::{commuting_clique_indices, GateGroup, GroupJson, Permutation};
use crate::matrix::{inner, joint_eigenspaces, norm_sqr, Matrix};
use crate::pauli::{stabilizer_set, PauliError, StabilizerConvention};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectraError {
    #[error("clique members do not commute")]
    NonCommutingClique,
    #[error("degenerate clique: {0}")]
    DegenerateClique(String),
    #[error("the zero vector is not a ray")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unknown reference state {0:?}")]
    UnknownName(String),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// A pure state up to scale, normalized so its first nonzero amplitude is 1.
#[derive(Clone, PartialEq, Eq)]
pub struct Ray {
    amps: Vec<Cyclotomic>,
}

impl Hash for Ray {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.amps.hash(state);
    }
}

impl Ray {
    pub fn new(v: Vec<Cyclotomic>) -> Result<Ray, SpectraError> {
        let lead = v.iter().find(|a| !a.is_zero()).ok_or(SpectraError::ZeroVector)?;
        if lead.is_one() {
            return Ok(Ray { amps: v });
        }
        let inv = lead.inv()?;
        Ok(Ray {
            amps: v.iter().map(|a| a * &inv).collect(),
        })
    }

    pub fn from_ints(v: &[i64]) -> Result<Ray, SpectraError> {
        Ray::new(v.iter().map(|&x| Cyclotomic::from_int(x)).collect())
    }

    /// Amplitudes from expression strings such as `["0", "1", "-E(3)"]`.
    pub fn from_strings<S: AsRef<str>>(amps: &[S]) -> Result<Ray, SpectraError> {
        Ray::parse_list(amps, &Env::default())
    }

    pub fn parse_list<S: AsRef<str>>(amps: &[S], env: &Env) -> Result<Ray, SpectraError> {
        let v = amps
            .iter()
            .map(|s| parse_with(s.as_ref(), env))
            .collect::<Result<Vec<_>, _>>()?;
        Ray::new(v)
    }

    /// Parses `(a, b, c)` or `a, b, c`, splitting only at top-level commas.
    pub fn parse(s: &str, env: &Env) -> Result<Ray, SpectraError> {
        let t = s.trim();
        let t = match t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            Some(inner) if balanced(inner) => inner,
            _ => t,
        };
        let mut parts = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        for (i, ch) in t.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    parts.push(&t[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        parts.push(&t[start..]);
        Ray::parse_list(&parts, env)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Cyclotomic] {
        &self.amps
    }

    pub fn inner(&self, other: &Ray) -> Cyclotomic {
        inner(&self.amps, &other.amps)
    }

    pub fn is_orthogonal(&self, other: &Ray) -> bool {
        self.inner(other).is_zero()
    }

    pub fn norm_sqr(&self) -> Cyclotomic {
        norm_sqr(&self.amps)
    }

    /// |v⟩⟨v| / ⟨v|v⟩
    pub fn projector(&self) -> Matrix {
        let n = self.norm_sqr().inv().expect("rays are nonzero");
        Matrix::outer(&self.amps).scale(&n)
    }

    /// All amplitudes in {0, 1, −1}.
    pub fn has_unit_entries(&self) -> bool {
        let minus = Cyclotomic::from_int(-1);
        self.amps.iter().all(|a| a.is_zero() || a.is_one() || *a == minus)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.amps.iter().map(ToString::to_string).collect()
    }

    /// Deterministic ordering key: the amplitude strings.
    pub fn sort_key(&self) -> Vec<String> {
        self.to_strings()
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.amps.iter().map(Cyclotomic::to_c64).collect()
    }
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

impl fmt::Debug for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ray{self}")
    }
}

impl Serialize for Ray {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Ray {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        Ray::from_strings(&v).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EigenvalueFilter {
    #[default]
    All,
    /// keep joint eigenspaces on which every clique member acts as ±1
    PlusMinusOne,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointRay {
    pub ray: Ray,
    /// eigenvalue of each clique member, in clique order
    pub eigenvalues: Vec<Cyclotomic>,
    /// dimension of the joint eigenspace the ray was taken from
    pub space_dim: usize,
}

fn check_clique(clique: &[Permutation]) -> Result<(), SpectraError> {
    let first = clique
        .first()
        .ok_or_else(|| SpectraError::DegenerateClique("empty clique".into()))?;
    for (i, a) in clique.iter().enumerate() {
        if a.degree() != first.degree() {
            return Err(SpectraError::DimensionMismatch {
                expected: first.degree(),
                got: a.degree(),
            });
        }
        if a.is_identity() {
            return Err(SpectraError::DegenerateClique("contains the identity".into()));
        }
        for b in &clique[i + 1..] {
            if a == b {
                return Err(SpectraError::DegenerateClique("repeated element".into()));
            }
            if a.compose(b) != b.compose(a) {
                return Err(SpectraError::NonCommutingClique);
            }
        }
    }
    Ok(())
}

/// Rays of the canonical echelon bases of all joint eigenspaces of the clique.
///
/// Candidate eigenvalues of an element of order o are the o-th roots of unity.
pub fn joint_eigenrays(clique: &[Permutation], filter: EigenvalueFilter) -> Result<Vec<JointRay>, SpectraError> {
    check_clique(clique)?;
    let mats: Vec<Matrix> = clique.iter().map(Permutation::matrix).collect();
    let cands: Vec<Vec<Cyclotomic>> = clique
        .iter()
        .map(|g| {
            let o = g.order();
            let roots = (0..o).map(|k| Cyclotomic::root_of_unity(o, k as i64));
            match filter {
                EigenvalueFilter::All => roots.collect(),
                EigenvalueFilter::PlusMinusOne => roots.filter(|r| r.is_rational()).collect(),
            }
        })
        .collect();
    let mut out = Vec::new();
    for space in joint_eigenspaces(&mats, &cands) {
        let dim = space.basis.len();
        for v in space.basis {
            out.push(JointRay {
                ray: Ray::new(v)?,
                eigenvalues: space.eigenvalues.clone(),
                space_dim: dim,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Stabilizer,
    Magic,
    Unclassified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    /// smallest maximal commuting clique that contributes rays
    pub min_clique_size: usize,
    /// for d ≥ 5, keep only magic rays with amplitudes in {0, ±1}
    pub paper_restriction: bool,
    pub eigenvalue_filter: EigenvalueFilter,
    pub convention: StabilizerConvention,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            min_clique_size: 1,
            paper_restriction: false,
            eigenvalue_filter: EigenvalueFilter::All,
            convention: StabilizerConvention::Tensor,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedRay {
    pub ray: Ray,
    pub tag: Tag,
    /// indices into the report's clique list
    pub cliques: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagCounts {
    pub total: usize,
    pub stabilizer: usize,
    pub magic: usize,
    pub unclassified: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenReport {
    pub group: GroupJson,
    pub dimension: usize,
    pub options: ClassifyOptions,
    /// cliques as 1-based one-line images of their members
    pub cliques: Vec<Vec<Vec<usize>>>,
    /// sorted by amplitude strings
    pub rays: Vec<ClassifiedRay>,
    pub counts: TagCounts,
    /// magic rays dropped by the {0, ±1} restriction
    pub restricted_out: usize,
}

impl EigenReport {
    pub fn ray_list(&self) -> Vec<Ray> {
        self.rays.iter().map(|r| r.ray.clone()).collect()
    }

    pub fn clique_size_profile(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for c in &self.cliques {
            *out.entry(c.len()).or_insert(0) += 1;
        }
        out
    }

    /// Flat CSV: index, tag, cliques, amplitudes.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,tag,cliques,amplitudes\n");
        for (i, r) in self.rays.iter().enumerate() {
            let tag = match r.tag {
                Tag::Stabilizer => "stabilizer",
                Tag::Magic => "magic",
                Tag::Unclassified => "unclassified",
            };
            let cl: Vec<String> = r.cliques.iter().map(ToString::to_string).collect();
            out.push_str(&format!("{i},{tag},\"{}\",\"{}\"\n", cl.join(" "), r.ray.to_strings().join(";")));
        }
        out
    }
}

/// Eigenstates of the maximal commuting cliques of `g`, deduplicated and
/// tagged stabilizer or magic.
pub fn classify_group(g: &GateGroup, opts: &ClassifyOptions) -> Result<EigenReport, SpectraError> {
    let d = g.degree();
    let clique_idx = commuting_clique_indices(g, opts.min_clique_size);
    let cliques: Vec<Vec<Permutation>> = clique_idx
        .iter()
        .map(|c| c.iter().map(|&i| g.elements()[i].clone()).collect())
        .collect();
    let per_clique: Vec<Vec<JointRay>> = cliques
        .par_iter()
        .map(|c| joint_eigenrays(c, opts.eigenvalue_filter))
        .collect::<Result<_, _>>()?;
    let mut found: BTreeMap<Vec<String>, (Ray, Vec<usize>)> = BTreeMap::new();
    for (ci, rays) in per_clique.into_iter().enumerate() {
        for jr in rays {
            let entry = found.entry(jr.ray.sort_key()).or_insert_with(|| (jr.ray, Vec::new()));
            if entry.1.last() != Some(&ci) {
                entry.1.push(ci);
            }
        }
    }
    let stab = if (2..=9).contains(&d) {
        Some(stabilizer_set(d, opts.convention)?)
    } else {
        None
    };
    let mut rays = Vec::new();
    let mut restricted_out = 0;
    for (_, (ray, cl)) in found {
        let tag = match &stab {
            Some(s) if s.contains(&ray) => Tag::Stabilizer,
            Some(_) => Tag::Magic,
            None => Tag::Unclassified,
        };
        if opts.paper_restriction && d >= 5 && tag == Tag::Magic && !ray.has_unit_entries() {
            restricted_out += 1;
            continue;
        }
        rays.push(ClassifiedRay { ray, tag, cliques: cl });
    }
    let mut counts = TagCounts {
        total: rays.len(),
        ..TagCounts::default()
    };
    for r in &rays {
        match r.tag {
            Tag::Stabilizer => counts.stabilizer += 1,
            Tag::Magic => counts.magic += 1,
            Tag::Unclassified => counts.unclassified += 1,
        }
    }
    Ok(EigenReport {
        group: GroupJson::from(g),
        dimension: d,
        options: *opts,
        cliques: cliques
            .iter()
            .map(|c| c.iter().map(Permutation::one_line).collect())
            .collect(),
        rays,
        counts,
        restricted_out,
    })
}

/// A named state; exact when its amplitudes are cyclotomic.
#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceState {
    Exact(Vec<Cyclotomic>),
    /// amplitudes that are not cyclotomic, to double precision
    Numeric(Vec<Complex64>),
}

impl ReferenceState {
    pub fn to_c64(&self) -> Vec<Complex64> {
        match self {
            ReferenceState::Exact(v) => v.iter().map(Cyclotomic::to_c64).collect(),
            ReferenceState::Numeric(v) => v.clone(),
        }
    }

    pub fn exact(&self) -> Option<&[Cyclotomic]> {
        match self {
            ReferenceState::Exact(v) => Some(v),
            ReferenceState::Numeric(_) => None,
        }
    }
}

pub const REFERENCE_NAMES: [&str; 8] = ["zero", "one", "plus", "minus_i", "H", "T", "norrell", "strange"];

/// Named reference states, normalized.
pub fn reference_state(name: &str) -> Result<ReferenceState, SpectraError> {
    let p = |s: &str| parse_with(s, &Env::default()).expect("built-in expression parses");
    let exact = |v: &[&str]| ReferenceState::Exact(v.iter().map(|s| p(s)).collect());
    Ok(match name {
        "zero" => exact(&["1", "0"]),
        "one" => exact(&["0", "1"]),
        "plus" => exact(&["sqrt(1/2)", "sqrt(1/2)"]),
        "minus_i" => exact(&["sqrt(1/2)", "-i*sqrt(1/2)"]),
        "H" => exact(&["cos(pi/8)", "sin(pi/8)"]),
        "norrell" => exact(&["0", "sqrt(1/2)", "sqrt(1/2)"]),
        "strange" => exact(&["0", "sqrt(1/2)", "-sqrt(1/2)"]),
        "T" => {
            // cos 2β = 1/√3
            let beta = (1.0 / 3f64.sqrt()).acos() / 2.0;
            let phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
            ReferenceState::Numeric(vec![Complex64::new(beta.cos(), 0.0), phase * beta.sin()])
        }
        _ => return Err(SpectraError::UnknownName(name.to_string())),
    })
}
