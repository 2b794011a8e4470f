//! Dense matrices and vectors over cyclotomic fields.

use std::fmt;

use crate::cyclo::Cyclotomic;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Cyclotomic>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Cyclotomic::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Cyclotomic::one() } else { Cyclotomic::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cyclotomic) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn diagonal(entries: &[Cyclotomic]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { Cyclotomic::zero() })
    }

    /// |v⟩⟨v|, without normalization.
    pub fn outer(v: &[Cyclotomic]) -> Self {
        let conj: Vec<Cyclotomic> = v.iter().map(Cyclotomic::conj).collect();
        Self::from_fn(v.len(), v.len(), |i, j| &v[i] * &conj[j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyclotomic) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Cyclotomic] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Cyclotomic>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Cyclotomic] {
        &self.data
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Cyclotomic) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn kron(&self, o: &Matrix) -> Matrix {
        Matrix::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| {
            let a = self.get(i / o.rows, j / o.cols);
            if a.is_zero() {
                Cyclotomic::zero()
            } else {
                a * o.get(i % o.rows, j % o.cols)
            }
        })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Cyclotomic {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// tr(self·o) without forming the product.
    pub fn trace_product(&self, o: &Matrix) -> Cyclotomic {
        assert_eq!((self.cols, self.rows), (o.rows, o.cols), "matrix shape mismatch");
        let mut acc = Cyclotomic::zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = o.get(k, i);
                if !a.is_zero() && !b.is_zero() {
                    acc += a * b;
                }
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Cyclotomic::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| {
                let v = self.get(i, j);
                if i == j { v.is_one() } else { v.is_zero() }
            }))
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.adjoint()
    }

    pub fn pow(&self, e: u32) -> Matrix {
        (0..e).fold(Matrix::identity(self.rows), |acc, _| acc.mul(self))
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut rows = self.to_rows();
        let pivots = rref_in_place(&mut rows, self.cols);
        rows.truncate(pivots.len());
        let m = if rows.is_empty() {
            Matrix::zeros(0, self.cols)
        } else {
            Matrix::from_rows(rows)
        };
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical nullspace basis: one vector per free column, with a 1 there
    /// and zeros at the other free columns.
    pub fn nullspace(&self) -> Vec<Vec<Cyclotomic>> {
        let (r, pivots) = self.rref();
        nullspace_from_rref(&r, &pivots, self.cols)
    }

    pub fn to_c64(&self) -> Vec<Vec<num_complex::Complex64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Cyclotomic::to_c64).collect())
            .collect()
    }
}

/// Row-reduces in place; zero rows end up at the bottom. Returns pivot columns.
pub(crate) fn rref_in_place(rows: &mut [Vec<Cyclotomic>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        if !inv.is_one() {
            for v in rows[r][c..].iter_mut() {
                if !v.is_zero() {
                    *v = &*v * &inv;
                }
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn nullspace_from_rref(r: &Matrix, pivots: &[usize], cols: usize) -> Vec<Vec<Cyclotomic>> {
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Cyclotomic::zero(); cols];
            v[f] = Cyclotomic::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, f);
            }
            v
        })
        .collect()
}

/// ⟨a|b⟩ = Σ conj(a_i)·b_i
pub fn inner(a: &[Cyclotomic], b: &[Cyclotomic]) -> Cyclotomic {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x.conj() * y)
        .sum()
}

pub fn norm_sqr(v: &[Cyclotomic]) -> Cyclotomic {
    inner(v, v)
}

/// Joint eigenspace of commuting matrices, described by the equations cutting it out.
#[derive(Debug, Clone)]
pub struct JointEigenspace {
    /// eigenvalue of each input matrix on this space
    pub eigenvalues: Vec<Cyclotomic>,
    /// canonical nullspace basis
    pub basis: Vec<Vec<Cyclotomic>>,
}

/// All nonzero joint eigenspaces of `mats`, where each matrix's eigenvalues
/// are drawn from `candidates[i]`. Spaces are listed in depth-first order of
/// the candidate lists.
pub fn joint_eigenspaces(mats: &[Matrix], candidates: &[Vec<Cyclotomic>]) -> Vec<JointEigenspace> {
    assert_eq!(mats.len(), candidates.len());
    let n = mats.first().map_or(0, Matrix::cols);
    let mut out = Vec::new();
    let mut stack: Vec<Cyclotomic> = Vec::new();
    descend(mats, candidates, n, Vec::new(), &mut stack, &mut out);
    out
}

fn descend(
    mats: &[Matrix],
    candidates: &[Vec<Cyclotomic>],
    n: usize,
    equations: Vec<Vec<Cyclotomic>>,
    chosen: &mut Vec<Cyclotomic>,
    out: &mut Vec<JointEigenspace>,
) {
    let depth = chosen.len();
    if depth == mats.len() {
        let m = if equations.is_empty() {
            Matrix::zeros(0, n)
        } else {
            Matrix::from_rows(equations)
        };
        let basis = m.nullspace();
        if !basis.is_empty() {
            out.push(JointEigenspace {
                eigenvalues: chosen.clone(),
                basis,
            });
        }
        return;
    }
    for lambda in &candidates[depth] {
        let mut eqs = equations.clone();
        let shifted = mats[depth].sub(&Matrix::identity(n).scale(lambda));
        eqs.extend(shifted.to_rows());
        let pivots = rref_in_place(&mut eqs, n);
        if pivots.len() == n {
            continue;
        }
        eqs.truncate(pivots.len());
        chosen.push(lambda.clone());
        descend(mats, candidates, n, eqs, chosen, out);
        chosen.pop();
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
