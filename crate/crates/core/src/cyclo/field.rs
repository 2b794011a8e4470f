//! Basis bookkeeping for Q(ζ_N).
//!
//! Q(ζ_N) is stored in the tensor basis of its prime-power pieces: for
//! N = q_1·…·q_r with q_i = p_i^{e_i}, a basis element is
//! ζ_{q_1}^{k_1}·…·ζ_{q_r}^{k_r} with 0 ≤ k_i < φ(q_i). In this basis an element
//! lies in a smaller cyclotomic field exactly when the coefficients along one
//! axis vanish in a simple pattern, which makes conductor reduction cheap.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Debug)]
pub(crate) struct Factor {
    pub p: u32,
    pub q: u32,
    pub phi: usize,
    /// (N/q)^{-1} mod q
    pub crt: u32,
    pub stride: usize,
}

#[derive(Debug)]
pub(crate) struct Field {
    pub factors: Vec<Factor>,
    pub dim: usize,
    /// exponent of ζ_N for each basis element
    pub exps: Vec<u32>,
    /// ζ_N^e in the basis, for every e in 0..N
    pub expansion: Vec<Vec<(u32, i8)>>,
}

fn factorize(mut n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i64 % m as i64, m as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m as i64) as u64
}

/// Drops a lone factor of 2: Q(ζ_{2m}) = Q(ζ_m) for odd m.
pub(crate) fn normalize_conductor(n: u32) -> u32 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// ζ_q^r for a prime power q, 0 ≤ r < q, in the power basis 1..ζ_q^{φ(q)-1}.
fn prime_power_expansion(p: u32, q: u32, r: u32) -> Vec<(u32, i8)> {
    let phi = q - q / p;
    if r < phi {
        return vec![(r, 1)];
    }
    // Φ_q(x) = Σ_{j<p} x^{j·q/p}, so ζ^{(p-1)s+t} = -Σ_{j<p-1} ζ^{js+t}
    let s = q / p;
    let t = r - (p - 1) * s;
    (0..p - 1).map(|j| (j * s + t, -1)).collect()
}

impl Field {
    fn build(n: u32) -> Field {
        debug_assert_eq!(n, normalize_conductor(n));
        let mut factors: Vec<Factor> = factorize(n)
            .into_iter()
            .filter(|&(p, e)| !(p == 2 && e == 1))
            .map(|(p, e)| {
                let q = p.pow(e);
                let rest = n / q;
                Factor {
                    p,
                    q,
                    phi: (q - q / p) as usize,
                    crt: mod_inverse(rest as u64 % q as u64, q as u64) as u32,
                    stride: 0,
                }
            })
            .collect();
        let mut stride = 1usize;
        for f in factors.iter_mut().rev() {
            f.stride = stride;
            stride *= f.phi;
        }
        let dim = stride;
        let exps = (0..dim)
            .map(|idx| {
                factors.iter().fold(0u64, |acc, f| {
                    let k = (idx / f.stride) % f.phi;
                    (acc + k as u64 * (n / f.q) as u64) % n as u64
                }) as u32
            })
            .collect();
        let expansion = (0..n)
            .map(|e| {
                let mut terms: Vec<(u32, i8)> = vec![(0, 1)];
                for f in &factors {
                    let r = ((e as u64 * f.crt as u64) % f.q as u64) as u32;
                    let local = prime_power_expansion(f.p, f.q, r);
                    let mut next = Vec::with_capacity(terms.len() * local.len());
                    for &(idx, s) in &terms {
                        for &(k, t) in &local {
                            next.push((idx + k * f.stride as u32, s * t));
                        }
                    }
                    terms = next;
                }
                terms
            })
            .collect();
        Field {
            factors,
            dim,
            exps,
            expansion,
        }
    }

    /// Shared, lazily built field descriptor for a normalized conductor.
    pub fn get(n: u32) -> Arc<Field> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Field>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().expect("field cache poisoned").get(&n) {
            return f.clone();
        }
        let built = Arc::new(Field::build(n));
        cache
            .lock()
            .expect("field cache poisoned")
            .entry(n)
            .or_insert(built)
            .clone()
    }

    pub fn axis_index(&self, idx: usize, axis: usize) -> usize {
        let f = &self.factors[axis];
        (idx / f.stride) % f.phi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_are_euler_phi() {
        for (n, phi) in [(1, 1), (3, 2), (4, 2), (5, 4), (8, 4), (9, 6), (12, 4), (15, 8), (16, 8), (72, 24)] {
            assert_eq!(Field::get(n).dim, phi, "conductor {n}");
        }
    }

    #[test]
    fn basis_elements_expand_to_themselves() {
        for n in [3, 4, 8, 9, 12, 15, 20, 36] {
            let f = Field::get(n);
            for idx in 0..f.dim {
                assert_eq!(f.expansion[f.exps[idx] as usize], vec![(idx as u32, 1)]);
            }
        }
    }

    #[test]
    fn normalization_drops_single_two() {
        assert_eq!(normalize_conductor(6), 3);
        assert_eq!(normalize_conductor(2), 1);
        assert_eq!(normalize_conductor(14), 7);
        assert_eq!(normalize_conductor(12), 12);
    }
}
