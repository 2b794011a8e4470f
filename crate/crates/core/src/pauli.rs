//! Generalized Pauli operators and stabilizer states.
//!
//! Stabilizer rays are the joint eigenvectors of maximal isotropic (order d)
//! subgroups of the Pauli group. Composite dimensions either use the tensor
//! product of prime factors (4 = 2⊗2, 6 = 2⊗3, 8 = 2⊗2⊗2, 9 = 3⊗3) or a
//! single Z_d clock/shift pair.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::Cyclotomic;
use crate::matrix::{joint_eigenspaces, Matrix};
use crate::spectra::Ray;

pub const CACHE_ENV: &str = "PERMAGIC_CACHE_DIR";
const CACHE_SCHEMA: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("dimension {0} is outside 2..=9")]
    UnsupportedDimension(usize),
    #[error("label ({m}, {j}) is out of range for dimension {d}")]
    LabelOutOfRange { d: usize, m: usize, j: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StabilizerConvention {
    /// Kronecker products of prime-dimensional factors.
    Tensor,
    /// One clock/shift pair of order d.
    SingleQudit,
}

impl StabilizerConvention {
    fn tag(self) -> &'static str {
        match self {
            StabilizerConvention::Tensor => "tensor",
            StabilizerConvention::SingleQudit => "single",
        }
    }
}

fn check_dim(d: usize) -> Result<(), PauliError> {
    if (2..=9).contains(&d) {
        Ok(())
    } else {
        Err(PauliError::UnsupportedDimension(d))
    }
}

/// Prime factors of d with multiplicity, smallest first.
pub fn tensor_factors(d: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = d;
    let mut p = 2;
    while n > 1 {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
        p += 1;
    }
    out
}

/// X|j⟩ = |j+1 mod d⟩
pub fn shift(d: usize) -> Matrix {
    Matrix::from_fn(d, d, |i, j| {
        if i == (j + 1) % d {
            Cyclotomic::one()
        } else {
            Cyclotomic::zero()
        }
    })
}

/// Z|j⟩ = ω^j|j⟩
pub fn clock(d: usize) -> Matrix {
    Matrix::diagonal(&(0..d).map(|j| Cyclotomic::root_of_unity(d as u32, j as i64)).collect::<Vec<_>>())
}

/// Z^m X^j without phase.
pub fn weyl(d: usize, m: usize, j: usize) -> Matrix {
    // (Z^m X^j)|k⟩ = ω^{m(k+j)}|k+j⟩
    Matrix::from_fn(d, d, |row, col| {
        if row == (col + j) % d {
            Cyclotomic::root_of_unity(d as u32, (m * row) as i64)
        } else {
            Cyclotomic::zero()
        }
    })
}

/// Pauli operator T_(m,j): i^{jm} Z^m X^j for d = 2, ω^{−jm/2} Z^m X^j
/// otherwise, with ω^{1/2} the primitive 2d-th root of unity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliOperator {
    pub d: usize,
    pub m: usize,
    pub j: usize,
    pub matrix: Matrix,
}

pub fn pauli_operator(d: usize, m: usize, j: usize) -> Result<PauliOperator, PauliError> {
    check_dim(d)?;
    if m >= d || j >= d {
        return Err(PauliError::LabelOutOfRange { d, m, j });
    }
    let phase = if d == 2 {
        Cyclotomic::root_of_unity(4, (j * m) as i64)
    } else {
        Cyclotomic::root_of_unity(2 * d as u32, -((j * m) as i64))
    };
    Ok(PauliOperator {
        d,
        m,
        j,
        matrix: weyl(d, m, j).scale(&phase),
    })
}

/// Labels of the Pauli group as points of ∏ Z_k × Z_k over the factors.
struct PhaseSpace {
    factors: Vec<usize>,
    size: usize,
}

impl PhaseSpace {
    fn new(factors: Vec<usize>) -> Self {
        let size = factors.iter().map(|k| k * k).product();
        PhaseSpace { factors, size }
    }

    /// (m_i, j_i) per factor
    fn label(&self, mut idx: usize) -> Vec<(usize, usize)> {
        let mut out = vec![(0, 0); self.factors.len()];
        for (slot, &k) in out.iter_mut().zip(&self.factors).rev() {
            let j = idx % k;
            idx /= k;
            let m = idx % k;
            idx /= k;
            *slot = (m, j);
        }
        out
    }

    fn index(&self, label: &[(usize, usize)]) -> usize {
        label
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&(m, j), &k)| (acc * k + m) * k + j)
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let (la, lb) = (self.label(a), self.label(b));
        let sum: Vec<(usize, usize)> = la
            .iter()
            .zip(&lb)
            .zip(&self.factors)
            .map(|((&(m, j), &(m2, j2)), &k)| ((m + m2) % k, (j + j2) % k))
            .collect();
        self.index(&sum)
    }

    /// Σ_i (m_i j'_i − j_i m'_i)/k_i ∈ Z
    fn commute(&self, a: usize, b: usize) -> bool {
        let l = self.factors.iter().fold(1, |acc, &k| num_integer::lcm(acc, k)) as i64;
        let total: i64 = self
            .label(a)
            .iter()
            .zip(self.label(b))
            .zip(&self.factors)
            .map(|((&(m, j), (m2, j2)), &k)| (m as i64 * j2 as i64 - j as i64 * m2 as i64) * (l / k as i64))
            .sum();
        total.rem_euclid(l) == 0
    }

    fn operator(&self, idx: usize) -> Matrix {
        self.label(idx)
            .iter()
            .zip(&self.factors)
            .map(|(&(m, j), &k)| weyl(k, m, j))
            .reduce(|acc, x| acc.kron(&x))
            .expect("at least one factor")
    }

    fn closure(&self, mask: u128, e: usize) -> u128 {
        let mut out = mask;
        loop {
            let mut next = out;
            for s in members(out) {
                next |= 1 << self.add(s, e);
            }
            if next == out {
                return out;
            }
            out = next;
        }
    }
}

fn members(mask: u128) -> impl Iterator<Item = usize> {
    (0..128).filter(move |i| mask >> i & 1 == 1)
}

/// Isotropic subgroups of order d.
fn lagrangian_subgroups(space: &PhaseSpace, d: usize) -> Vec<u128> {
    let mut seen: HashSet<u128> = HashSet::from([1]);
    let mut stack = vec![1u128];
    let mut out = BTreeSet::new();
    let commute: Vec<Vec<bool>> = (0..space.size)
        .map(|a| (0..space.size).map(|b| space.commute(a, b)).collect())
        .collect();
    while let Some(mask) = stack.pop() {
        let order = mask.count_ones() as usize;
        if order == d {
            out.insert(mask);
            continue;
        }
        for e in 0..space.size {
            if mask >> e & 1 == 1 || !members(mask).all(|s| commute[s][e]) {
                continue;
            }
            let bigger = space.closure(mask, e);
            if seen.insert(bigger) {
                stack.push(bigger);
            }
        }
    }
    out.into_iter().collect()
}

/// Minimal generating set, found greedily.
fn generators(space: &PhaseSpace, mask: u128) -> Vec<usize> {
    let mut span = 1u128;
    let mut gens = Vec::new();
    for e in members(mask) {
        if span >> e & 1 == 0 {
            span = space.closure(span, e);
            gens.push(e);
        }
    }
    gens
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerSet {
    pub d: usize,
    pub convention: StabilizerConvention,
    /// sorted by amplitude strings
    pub rays: Vec<Ray>,
    lookup: HashSet<Ray>,
}

impl StabilizerSet {
    fn new(d: usize, convention: StabilizerConvention, mut rays: Vec<Ray>) -> Self {
        rays.sort_by_cached_key(Ray::sort_key);
        rays.dedup();
        let lookup = rays.iter().cloned().collect();
        StabilizerSet {
            d,
            convention,
            rays,
            lookup,
        }
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn contains(&self, ray: &Ray) -> bool {
        self.lookup.contains(ray)
    }
}

/// Computes the stabilizer rays from scratch (no caching).
pub fn compute_stabilizer_set(d: usize, convention: StabilizerConvention) -> Result<StabilizerSet, PauliError> {
    check_dim(d)?;
    let factors = match convention {
        StabilizerConvention::Tensor => tensor_factors(d),
        StabilizerConvention::SingleQudit => vec![d],
    };
    let l = factors.iter().fold(1, |acc, &k| num_integer::lcm(acc, k));
    // Z^m X^j has order dividing 2l up to a scalar; its eigenvalues are 2l-th roots
    let roots: Vec<Cyclotomic> = (0..2 * l)
        .map(|k| Cyclotomic::root_of_unity(2 * l as u32, k as i64))
        .collect();
    let space = PhaseSpace::new(factors);
    let subgroups = lagrangian_subgroups(&space, d);
    let rays: Vec<Ray> = subgroups
        .par_iter()
        .flat_map_iter(|&mask| {
            let mats: Vec<Matrix> = generators(&space, mask).into_iter().map(|e| space.operator(e)).collect();
            let cands = vec![roots.clone(); mats.len()];
            joint_eigenspaces(&mats, &cands)
                .into_iter()
                .flat_map(|s| s.basis)
                .map(|v| Ray::new(v).expect("eigenvectors are nonzero"))
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(StabilizerSet::new(d, convention, rays))
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    schema_version: u32,
    d: usize,
    convention: StabilizerConvention,
    rays: Vec<Vec<String>>,
}

/// Directory for cached stabilizer sets: `$PERMAGIC_CACHE_DIR`, else a
/// `permagic-cache` folder in the system temp directory.
pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("permagic-cache"))
}

fn cache_path(dir: &std::path::Path, d: usize, convention: StabilizerConvention) -> PathBuf {
    dir.join(format!("stabilizers-v{CACHE_SCHEMA}-d{d}-{}.json", convention.tag()))
}

fn load_cache(dir: &std::path::Path, d: usize, convention: StabilizerConvention) -> Option<StabilizerSet> {
    let text = fs::read_to_string(cache_path(dir, d, convention)).ok()?;
    let file: CacheFile = serde_json::from_str(&text).ok()?;
    if file.schema_version != CACHE_SCHEMA || file.d != d || file.convention != convention || file.rays.is_empty() {
        return None;
    }
    let mut rays = Vec::with_capacity(file.rays.len());
    for amps in &file.rays {
        let ray = Ray::from_strings(amps).ok()?;
        if ray.dim() != d || ray.to_strings() != *amps {
            return None;
        }
        rays.push(ray);
    }
    Some(StabilizerSet::new(d, convention, rays))
}

fn store_cache(dir: &std::path::Path, set: &StabilizerSet) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let file = CacheFile {
        schema_version: CACHE_SCHEMA,
        d: set.d,
        convention: set.convention,
        rays: set.rays.iter().map(Ray::to_strings).collect(),
    };
    let path = cache_path(dir, set.d, set.convention);
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, serde_json::to_string(&file).expect("cache file serializes"))?;
    fs::rename(&tmp, &path)
}

/// Stabilizer set from `dir`, recomputing (and rewriting) when the file is
/// missing or unreadable.
pub fn stabilizer_set_in(
    dir: &std::path::Path,
    d: usize,
    convention: StabilizerConvention,
) -> Result<StabilizerSet, PauliError> {
    check_dim(d)?;
    if let Some(set) = load_cache(dir, d, convention) {
        return Ok(set);
    }
    let set = compute_stabilizer_set(d, convention)?;
    // the cache is an optimization; failing to write it is not an error
    let _ = store_cache(dir, &set);
    Ok(set)
}

/// Shared stabilizer set, memoized in memory and on disk.
pub fn stabilizer_set(d: usize, convention: StabilizerConvention) -> Result<Arc<StabilizerSet>, PauliError> {
    static MEMO: OnceLock<Mutex<HashMap<(usize, StabilizerConvention), Arc<StabilizerSet>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(s) = memo.lock().expect("stabilizer memo poisoned").get(&(d, convention)) {
        return Ok(s.clone());
    }
    let set = Arc::new(stabilizer_set_in(&cache_dir(), d, convention)?);
    Ok(memo
        .lock()
        .expect("stabilizer memo poisoned")
        .entry((d, convention))
        .or_insert(set)
        .clone())
}

/// Stabilizer set under the tensor-factor convention.
pub fn enumerate_stabilizer_rays(d: usize) -> Result<Arc<StabilizerSet>, PauliError> {
    stabilizer_set(d, StabilizerConvention::Tensor)
}

pub fn is_stabilizer(ray: &Ray) -> Result<bool, PauliError> {
    is_stabilizer_with(ray, StabilizerConvention::Tensor)
}

pub fn is_stabilizer_with(ray: &Ray, convention: StabilizerConvention) -> Result<bool, PauliError> {
    Ok(stabilizer_set(ray.dim(), convention)?.contains(ray))
}
