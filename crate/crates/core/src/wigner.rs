//! Phase-point operators, the discrete Wigner function and magic monotones.
//!
//! Direct construction: A(q,p) = (1/d) Σ_{j,m} ω^{pj−qm} h^{jm} X^j Z^m, where
//! h = ω^{2⁻¹ mod d} for odd d and h = ζ_{2d} for even d. Only this choice of
//! h makes A Hermitian for odd d.
//!
//! Tensor construction (composite d): the operator ⊗_i A_i(q_i, p_i) of the
//! prime factors sits at the cell whose mixed-radix digits are
//! (q_1, −p_1, q_2, −p_2, …), read row-major into a d×d grid.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::{CycloError, Cyclotomic, Sign};
use crate::matrix::{norm_sqr, Matrix};
use crate::pauli::{shift, tensor_factors};
use crate::spectra::Ray;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WignerError {
    #[error("dimension {0} is outside 2..=9")]
    UnsupportedDimension(usize),
    #[error("the tensor construction needs a composite dimension, got {0}")]
    UnsupportedConstruction(usize),
    #[error("state has dimension {got}, phase points have {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("density matrix gives a non-real Wigner entry at ({q}, {p})")]
    NonHermitianDensity { q: usize, p: usize },
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Direct,
    Tensor,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::Direct => "direct",
            Construction::Tensor => "tensor",
        })
    }
}

/// Constructions that apply to dimension d.
pub fn constructions_for(d: usize) -> Vec<Construction> {
    if tensor_factors(d).len() > 1 {
        vec![Construction::Direct, Construction::Tensor]
    } else {
        vec![Construction::Direct]
    }
}

/// The d² phase-point operators laid out on a d×d grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhasePointSet {
    d: usize,
    construction: Construction,
    /// row-major over (q, p)
    ops: Vec<Matrix>,
}

impl PhasePointSet {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn get(&self, q: usize, p: usize) -> &Matrix {
        &self.ops[q * self.d + p]
    }

    pub fn operators(&self) -> &[Matrix] {
        &self.ops
    }
}

fn direct_operator(d: usize, q: usize, p: usize, x_pows: &[Matrix], z_pows: &[Matrix]) -> Matrix {
    // phases are powers of ζ_n; ω = ζ_n^s and h = ζ_n^t
    let (n, s, t) = if d % 2 == 1 {
        (d, 1, (d + 1) / 2)
    } else {
        (2 * d, 2, 1)
    };
    let mut acc = Matrix::zeros(d, d);
    for j in 0..d {
        for m in 0..d {
            let e = s as i64 * ((p * j) as i64 - (q * m) as i64) + (t * j * m) as i64;
            let phase = Cyclotomic::root_of_unity(n as u32, e);
            acc = acc.add(&x_pows[j].mul(&z_pows[m]).scale(&phase));
        }
    }
    acc.scale(&Cyclotomic::from_frac(1, d as i64))
}

fn build_direct(d: usize) -> Vec<Matrix> {
    let x = shift(d);
    let z = crate::pauli::clock(d);
    let x_pows: Vec<Matrix> = (0..d as u32).map(|k| x.pow(k)).collect();
    let z_pows: Vec<Matrix> = (0..d as u32).map(|k| z.pow(k)).collect();
    let mut ops = Vec::with_capacity(d * d);
    for q in 0..d {
        for p in 0..d {
            ops.push(direct_operator(d, q, p, &x_pows, &z_pows));
        }
    }
    ops
}

fn build_tensor(d: usize) -> Vec<Matrix> {
    let factors = tensor_factors(d);
    let parts: Vec<Arc<PhasePointSet>> = factors
        .iter()
        .map(|&k| phase_points(k, Construction::Direct).expect("prime factors use the direct construction"))
        .collect();
    let mut ops = vec![Matrix::zeros(0, 0); d * d];
    // iterate over all tuples of factor points
    let total: usize = factors.iter().map(|k| k * k).product();
    for mut t in 0..total {
        let mut points = vec![(0, 0); factors.len()];
        for (slot, &k) in points.iter_mut().zip(&factors).rev() {
            let p = t % k;
            t /= k;
            let q = t % k;
            t /= k;
            *slot = (q, p);
        }
        let op = points
            .iter()
            .zip(&parts)
            .map(|(&(q, p), set)| set.get(q, p).clone())
            .reduce(|acc, a| acc.kron(&a))
            .expect("at least two factors");
        let cell = points
            .iter()
            .zip(&factors)
            .fold(0, |acc, (&(q, p), &k)| (acc * k + q) * k + (k - p) % k);
        ops[cell] = op;
    }
    ops
}

/// Memoized phase-point operators for (d, construction).
pub fn phase_points(d: usize, construction: Construction) -> Result<Arc<PhasePointSet>, WignerError> {
    if !(2..=9).contains(&d) {
        return Err(WignerError::UnsupportedDimension(d));
    }
    if construction == Construction::Tensor && tensor_factors(d).len() < 2 {
        return Err(WignerError::UnsupportedConstruction(d));
    }
    static MEMO: OnceLock<Mutex<HashMap<(usize, Construction), Arc<PhasePointSet>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(s) = memo.lock().expect("phase point memo poisoned").get(&(d, construction)) {
        return Ok(s.clone());
    }
    let ops = match construction {
        Construction::Direct => build_direct(d),
        Construction::Tensor => build_tensor(d),
    };
    let set = Arc::new(PhasePointSet { d, construction, ops });
    Ok(memo
        .lock()
        .expect("phase point memo poisoned")
        .entry((d, construction))
        .or_insert(set)
        .clone())
}

/// W(q,p) over a d×d grid, row q and column p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WignerMatrix {
    d: usize,
    entries: Vec<Cyclotomic>,
}

impl WignerMatrix {
    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> Self {
        let d = rows.len();
        assert!(rows.iter().all(|r| r.len() == d), "Wigner matrices are square");
        WignerMatrix {
            d,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, q: usize, p: usize) -> &Cyclotomic {
        &self.entries[q * self.d + p]
    }

    pub fn entries(&self) -> &[Cyclotomic] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Cyclotomic>> {
        self.entries.chunks(self.d).map(<[Cyclotomic]>::to_vec).collect()
    }

    pub fn total(&self) -> Cyclotomic {
        self.entries.iter().sum()
    }

    /// Sum of the strictly negative entries (zero when there are none).
    pub fn negative_sum(&self) -> Cyclotomic {
        self.entries
            .iter()
            .filter(|e| e.real_sign() == Ok(Sign::Negative))
            .sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|e| e.real_sign() != Ok(Sign::Negative))
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.entries
            .chunks(self.d)
            .map(|r| r.iter().map(Cyclotomic::to_f64).collect())
            .collect()
    }

    /// Layout with a common rational factor pulled out, e.g. `1/6 × [...]`.
    pub fn pretty(&self) -> String {
        let den = self
            .entries
            .iter()
            .flat_map(|e| e.coeffs().iter().map(|c| c.denom().clone()).collect::<Vec<_>>())
            .fold(BigInt::one(), |acc, x| acc.lcm(&x));
        let scale = Cyclotomic::from_rational(num_rational::BigRational::from_integer(den.clone()));
        let cells: Vec<String> = self.entries.iter().map(|e| (e * &scale).to_string()).collect();
        let width = cells.iter().map(|s| s.chars().count()).max().unwrap_or(1);
        let mut out = format!("1/{den} ×\n");
        for row in cells.chunks(self.d) {
            let padded: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            out.push_str(&format!("  [ {} ]\n", padded.join("  ")));
        }
        out
    }
}

impl Serialize for WignerMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View {
            d: usize,
            exact: Vec<Vec<String>>,
            approx: Vec<Vec<f64>>,
        }
        View {
            d: self.d,
            exact: self
                .entries
                .chunks(self.d)
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect(),
            approx: self.to_f64(),
        }
        .serialize(s)
    }
}

/// W_ρ for the normalized projector onto `ray`.
pub fn wigner_function(ray: &Ray, pps: &PhasePointSet) -> Result<WignerMatrix, WignerError> {
    wigner_of_vector(ray.amplitudes(), pps)
}

/// W_ρ for ρ = |v⟩⟨v| / ⟨v|v⟩.
pub fn wigner_of_vector(v: &[Cyclotomic], pps: &PhasePointSet) -> Result<WignerMatrix, WignerError> {
    let d = pps.d;
    if v.len() != d {
        return Err(WignerError::DimensionMismatch { expected: d, got: v.len() });
    }
    let scale = (norm_sqr(v) * Cyclotomic::from_int(d as i64)).inv()?;
    let conj: Vec<Cyclotomic> = v.iter().map(Cyclotomic::conj).collect();
    let mut entries = Vec::with_capacity(d * d);
    for q in 0..d {
        for p in 0..d {
            // ⟨v|A|v⟩
            let av = pps.get(q, p).mul_vec(v);
            let val: Cyclotomic = conj
                .iter()
                .zip(&av)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .map(|(a, b)| a * b)
                .sum();
            let w = val * &scale;
            if !w.is_real() {
                return Err(WignerError::NonHermitianDensity { q, p });
            }
            entries.push(w);
        }
    }
    Ok(WignerMatrix { d, entries })
}

/// W_ρ(q,p) = (1/d) tr(ρ A(q,p)) for any density matrix.
pub fn wigner_of_density(rho: &Matrix, pps: &PhasePointSet) -> Result<WignerMatrix, WignerError> {
    let d = pps.d;
    if rho.rows() != d || rho.cols() != d {
        return Err(WignerError::DimensionMismatch { expected: d, got: rho.rows() });
    }
    let inv_d = Cyclotomic::from_frac(1, d as i64);
    let mut entries = Vec::with_capacity(d * d);
    for q in 0..d {
        for p in 0..d {
            let w = rho.trace_product(pps.get(q, p)) * &inv_d;
            if !w.is_real() {
                return Err(WignerError::NonHermitianDensity { q, p });
            }
            entries.push(w);
        }
    }
    Ok(WignerMatrix { d, entries })
}

/// Double-precision Wigner function of a (not necessarily cyclotomic) state.
pub fn wigner_numeric(state: &[Complex64], pps: &PhasePointSet) -> Result<Vec<Vec<f64>>, WignerError> {
    let d = pps.d;
    if state.len() != d {
        return Err(WignerError::DimensionMismatch { expected: d, got: state.len() });
    }
    let norm: f64 = state.iter().map(Complex64::norm_sqr).sum();
    Ok((0..d)
        .map(|q| {
            (0..d)
                .map(|p| {
                    let a = pps.get(q, p).to_c64();
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..d {
                        for j in 0..d {
                            acc += state[i].conj() * a[i][j] * state[j];
                        }
                    }
                    acc.re / (norm * d as f64)
                })
                .collect()
        })
        .collect())
}

/// ρ = Σ_α W(α) A_α
pub fn reconstruct(w: &WignerMatrix, pps: &PhasePointSet) -> Matrix {
    let d = pps.d;
    let mut acc = Matrix::zeros(d, d);
    for (val, op) in w.entries.iter().zip(&pps.ops) {
        if !val.is_zero() {
            acc = acc.add(&op.scale(val));
        }
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MagicMonotones {
    /// |Σ negative entries|
    pub sum_negativity: Cyclotomic,
    /// ln(2·sn + 1)
    pub mana: f64,
}

pub fn monotones(w: &WignerMatrix) -> MagicMonotones {
    let sn = -w.negative_sum();
    let mana = (2.0 * sn.to_f64() + 1.0).ln();
    MagicMonotones {
        sum_negativity: sn,
        mana,
    }
}

/// Outcome of the structural checks on a phase-point set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub d: usize,
    pub construction: Construction,
    /// every A_α is Hermitian
    pub hermitian: bool,
    pub unit_trace: bool,
    /// tr(A_α A_β) = d δ_αβ
    pub trace_orthogonal: bool,
    /// Σ_α A_α = d·I
    pub sum_is_d_identity: bool,
    /// each striation gives orthogonal projectors summing to I;
    /// `None` for the tensor construction, which has no line geometry on Z_d²
    pub striations: Option<bool>,
    /// ρ = Σ W(α) A_α for the sample states
    pub reconstruction: bool,
    pub reconstruction_samples: usize,
}

impl PropertyReport {
    pub fn all_pass(&self) -> bool {
        self.hermitian
            && self.unit_trace
            && self.trace_orthogonal
            && self.sum_is_d_identity
            && self.striations != Some(false)
            && self.reconstruction
    }
}

/// Lines a·q + b·p = c of Z_d², grouped by direction (a, b).
pub fn striations(d: usize) -> Vec<Vec<Vec<(usize, usize)>>> {
    let mut dirs: Vec<(usize, usize)> = (0..d).map(|b| (1, b)).collect();
    dirs.push((0, 1));
    dirs.into_iter()
        .map(|(a, b)| {
            (0..d)
                .map(|c| {
                    let mut line = Vec::new();
                    for q in 0..d {
                        for p in 0..d {
                            if (a * q + b * p) % d == c {
                                line.push((q, p));
                            }
                        }
                    }
                    line
                })
                .collect()
        })
        .collect()
}

pub fn check_striations(pps: &PhasePointSet) -> bool {
    let d = pps.d;
    let inv_d = Cyclotomic::from_frac(1, d as i64);
    striations(d).into_iter().all(|lines| {
        let projectors: Vec<Matrix> = lines
            .iter()
            .map(|line| {
                line.iter()
                    .fold(Matrix::zeros(d, d), |acc, &(q, p)| acc.add(pps.get(q, p)))
                    .scale(&inv_d)
            })
            .collect();
        let total = projectors.iter().fold(Matrix::zeros(d, d), |acc, m| acc.add(m));
        total.is_identity()
            && projectors.iter().enumerate().all(|(i, a)| {
                projectors.iter().enumerate().all(|(j, b)| {
                    let prod = a.mul(b);
                    if i == j {
                        prod == *a
                    } else {
                        prod.is_zero()
                    }
                })
            })
    })
}

pub fn check_properties(pps: &PhasePointSet, samples: &[Ray]) -> PropertyReport {
    let d = pps.d;
    let ops = &pps.ops;
    let hermitian = ops.iter().all(Matrix::is_hermitian);
    let unit_trace = ops.iter().all(|a| a.trace().is_one());
    let dd = Cyclotomic::from_int(d as i64);
    let trace_orthogonal = (0..ops.len()).all(|i| {
        (i..ops.len()).all(|j| {
            let t = ops[i].trace_product(&ops[j]);
            if i == j {
                t == dd
            } else {
                t.is_zero()
            }
        })
    });
    let sum = ops.iter().fold(Matrix::zeros(d, d), |acc, m| acc.add(m));
    let sum_is_d_identity = sum == Matrix::identity(d).scale(&dd);
    let striations = match pps.construction {
        Construction::Direct => Some(check_striations(pps)),
        Construction::Tensor => None,
    };
    let reconstruction = samples.iter().all(|r| {
        wigner_function(r, pps).is_ok_and(|w| reconstruct(&w, pps) == r.projector())
    });
    PropertyReport {
        d,
        construction: pps.construction,
        hermitian,
        unit_trace,
        trace_orthogonal,
        sum_is_d_identity,
        striations,
        reconstruction,
        reconstruction_samples: samples.len(),
    }
}

/// Deterministic pseudo-random rays with small Gaussian-integer and root-of-unity entries.
pub fn sample_rays(d: usize, count: usize, seed: u64) -> Vec<Ray> {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = move || {
        // xorshift64*
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        state.wrapping_mul(0x2545F4914F6CDD1D) >> 33
    };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<Cyclotomic> = (0..d)
            .map(|_| {
                let re = (next() % 5) as i64 - 2;
                let im = (next() % 5) as i64 - 2;
                let root = Cyclotomic::root_of_unity(d as u32, (next() % d as u64) as i64);
                (Cyclotomic::from_int(re) + Cyclotomic::i() * Cyclotomic::from_int(im)) * root
            })
            .collect();
        if let Ok(r) = Ray::new(v) {
            out.push(r);
        }
    }
    out
}

impl MagicMonotones {
    pub fn sum_negativity_f64(&self) -> f64 {
        self.sum_negativity.to_f64()
    }
}
