//! Dense exact linear algebra over the rationals, plus Hermite normal form
//! for lattices spanned by rational vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{self, Rational};

pub type Vector = Vec<Rational>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn axpy(acc: &mut [Rational], c: &Rational, v: &[Rational]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        *a += c * x;
    }
}

/// A row echelon basis: every row has its first nonzero entry at
/// `pivots[i]`, and pivots strictly increase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub rows: Vec<Vector>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Coefficients `c` with `v = sum c_i rows_i`, if `v` is in the span.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vector> {
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rows.len());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = &rest[p] / &row[p];
            axpy(&mut rest, &-&c, row);
            coords.push(c);
        }
        is_zero_vector(&rest).then_some(coords)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn combine(&self, coords: &[Rational], width: usize) -> Vector {
        let mut out = zero_vector(width);
        for (c, row) in coords.iter().zip(&self.rows) {
            axpy(&mut out, c, row);
        }
        out
    }
}

/// Reduced row echelon form of the span of `rows` (zero rows dropped).
pub fn rref(rows: &[Vector]) -> Echelon {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vector> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = -row[c].clone();
                axpy(row, &f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    Echelon { rows: m, pivots }
}

pub fn rank(rows: &[Vector]) -> usize {
    rref(rows).rank()
}

/// Basis of `{x : M x = 0}` for `M` given by its rows (`ncols` unknowns).
pub fn nullspace(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let e = rref(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = zero_vector(ncols);
            x[f] = Rational::one();
            for (row, &p) in e.rows.iter().zip(&e.pivots) {
                x[p] = -row[f].clone();
            }
            x
        })
        .collect()
}

pub fn transpose(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    (0..ncols)
        .map(|c| rows.iter().map(|r| r[c].clone()).collect())
        .collect()
}

/// Left kernel: all `c` with `sum c_i rows_i = 0`.
pub fn left_kernel(rows: &[Vector]) -> Vec<Vector> {
    let ncols = rows.first().map_or(0, Vec::len);
    nullspace(&transpose(rows, ncols), rows.len())
}

/// Canonical basis of a subspace: its reduced row echelon form.
pub fn canonical_subspace(vectors: &[Vector]) -> Vec<Vector> {
    rref(vectors).rows
}

/// Inverse of a square matrix, if invertible.
pub fn inverse(m: &[Vector]) -> Option<Vec<Vector>> {
    let n = m.len();
    let augmented: Vec<Vector> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    let e = rref(&augmented);
    if e.rank() < n || e.pivots[n - 1] != n - 1 {
        return None;
    }
    Some(e.rows.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Determinant by Gaussian elimination over Q.
pub fn determinant(m: &[Vector]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vector> = m.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let pivot_row = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if !row[c].is_zero() {
                let f = -(&row[c] / &pivot_row[c]);
                axpy(row, &f, &pivot_row);
            }
        }
    }
    det
}

pub fn mat_vec(m: &[Vector], v: &[Rational]) -> Vector {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Row-style Hermite normal form of the integer lattice spanned by the
/// given rows. Pivots are positive and entries above a pivot are reduced
/// into `[0, pivot)`.
pub fn hnf_integer(rows: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m = rows;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        loop {
            let best = (r..m.len())
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()));
            let Some(best) = best else { break };
            m.swap(r, best);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                let pivot_row = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * p;
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r >= m.len() || m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot_row = m[r].clone();
        for row in m.iter_mut().take(r) {
            let q = row[c].div_floor(&pivot_row[c]);
            if !q.is_zero() {
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &q * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Hermite normal form of the Z-span of rational vectors: scale by the
/// common denominator, reduce over the integers, scale back.
pub fn hnf_rational(rows: &[Vector]) -> Echelon {
    let den = rational::common_denominator(rows.iter().flatten());
    let den_q = Rational::from_integer(den.clone());
    let ints: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|x| (x * &den_q).to_integer()).collect())
        .collect();
    let (h, pivots) = hnf_integer(ints);
    let rows = h
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| Rational::new(x, den.clone()))
                .collect()
        })
        .collect();
    Echelon { rows, pivots }
}
