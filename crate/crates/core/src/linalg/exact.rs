//! Exact integer/rational linear algebra: sparse fraction-free elimination
//! for ranks, dense rational nullspaces, and exact determinant signs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Sparse integer matrix stored by rows; entries are arbitrary-precision.
#[derive(Clone, Debug)]
pub struct SparseIntMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, BigInt)>>,
}

impl SparseIntMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseIntMatrix { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        if v.is_zero() {
            return;
        }
        let row = &mut self.rows[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(i) => row[i].1 = v,
            Err(i) => row.insert(i, (c, v)),
        }
    }

    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, BigInt)>,
    ) -> Self {
        let mut m = Self::zero(nrows, ncols);
        for (r, c, v) in triplets {
            m.set(r, c, v);
        }
        m
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn row_entries(&self, r: usize) -> &[(usize, BigInt)] {
        &self.rows[r]
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        let mut rows = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                rows[*c].push((r, v.clone()));
            }
        }
        SparseIntMatrix { nrows: self.ncols, ncols: self.nrows, rows }
    }

    /// Product of two sparse matrices (used to check boundary-of-boundary).
    pub fn multiply(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.ncols, other.nrows);
        let mut out = SparseIntMatrix::zero(self.nrows, other.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc: std::collections::BTreeMap<usize, BigInt> = Default::default();
            for (k, v) in row {
                for (c, w) in &other.rows[*k] {
                    *acc.entry(*c).or_insert_with(BigInt::zero) += v * w;
                }
            }
            out.rows[r] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    /// Exact rank over the rationals, by sparse cross-multiplication
    /// elimination with Markowitz-style pivoting (shortest row, then least
    /// populated column) and per-row gcd reduction.
    pub fn rank(&self) -> usize {
        use std::collections::BTreeSet;
        let mut rows: Vec<Option<Vec<(usize, BigInt)>>> = self
            .rows
            .iter()
            .filter(|r| !r.is_empty())
            .map(|r| {
                let mut row = r.clone();
                reduce_row(&mut row);
                Some(row)
            })
            .collect();
        let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.ncols];
        let mut queue: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref().unwrap();
            queue.insert((row.len(), i));
            for (c, _) in row {
                col_rows[*c].insert(i);
            }
        }
        let mut rank = 0usize;
        while let Some(&(len, pr)) = queue.iter().next() {
            queue.remove(&(len, pr));
            let pivot_row = rows[pr].take().unwrap();
            for (c, _) in &pivot_row {
                col_rows[*c].remove(&pr);
            }
            let (pc, pivot_val) = pivot_row
                .iter()
                .min_by_key(|(c, v)| (col_rows[*c].len(), v.bits(), *c))
                .map(|(c, v)| (*c, v.clone()))
                .unwrap();
            rank += 1;
            let victims: Vec<usize> = col_rows[pc].iter().copied().collect();
            for vi in victims {
                let row = rows[vi].take().unwrap();
                queue.remove(&(row.len(), vi));
                for (c, _) in &row {
                    col_rows[*c].remove(&vi);
                }
                let coeff = row.iter().find(|(c, _)| *c == pc).unwrap().1.clone();
                let mut new_row = row_combine(&pivot_val, &row, &coeff, &pivot_row, pc);
                reduce_row(&mut new_row);
                if !new_row.is_empty() {
                    queue.insert((new_row.len(), vi));
                    for (c, _) in &new_row {
                        col_rows[*c].insert(vi);
                    }
                    rows[vi] = Some(new_row);
                }
            }
        }
        rank
    }
}

/// pivot_val * row - coeff * pivot_row, dropping the pivot column.
fn row_combine(
    pivot_val: &BigInt,
    row: &[(usize, BigInt)],
    coeff: &BigInt,
    pivot_row: &[(usize, BigInt)],
    pivot_col: usize,
) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(row.len() + pivot_row.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot_row.len() {
        let ci = row.get(i).map(|e| e.0);
        let cj = pivot_row.get(j).map(|e| e.0);
        match (ci, cj) {
            (Some(a), Some(b)) if a == b => {
                if a != pivot_col {
                    let v = pivot_val * &row[i].1 - coeff * &pivot_row[j].1;
                    if !v.is_zero() {
                        out.push((a, v));
                    }
                }
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a < b => {
                out.push((a, pivot_val * &row[i].1));
                i += 1;
            }
            (Some(_), Some(b)) => {
                if b != pivot_col {
                    out.push((b, -(coeff * &pivot_row[j].1)));
                }
                j += 1;
            }
            (Some(a), None) => {
                out.push((a, pivot_val * &row[i].1));
                i += 1;
            }
            (None, Some(b)) => {
                if b != pivot_col {
                    out.push((b, -(coeff * &pivot_row[j].1)));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn reduce_row(row: &mut Vec<(usize, BigInt)>) {
    if row.is_empty() {
        return;
    }
    let mut g = row[0].1.abs();
    for (_, v) in row.iter().skip(1) {
        if g.is_one() {
            return;
        }
        g = g.gcd(v);
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// Converts an f64 row to integers by clearing the (power-of-two)
/// denominators; scaling a row by a positive constant preserves rank,
/// nullspace, and determinant sign.
pub fn scale_row_to_integers(values: &[f64]) -> Vec<BigInt> {
    let rationals: Vec<BigRational> = values
        .iter()
        .map(|&v| BigRational::from_float(v).expect("finite coordinate"))
        .collect();
    let mut lcm = BigInt::one();
    for r in &rationals {
        lcm = lcm.lcm(r.denom());
    }
    rationals.iter().map(|r| r.numer() * (&lcm / r.denom())).collect()
}

/// Exact sign of the determinant of a small dense f64 matrix: each row is
/// scaled to integers (positive scale), then Bareiss fraction-free
/// elimination gives the sign. Returns -1, 0, or 1.
pub fn exact_det_sign(rows: &[Vec<f64>]) -> i32 {
    let n = rows.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| scale_row_to_integers(r)).collect();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n {
        // Pivot search in column k.
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return 0;
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for r in k + 1..n {
            for c in k + 1..n {
                let v = (&m[k][k] * &m[r][c] - &m[r][k] * &m[k][c]) / &prev;
                m[r][c] = v;
            }
            m[r][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * match m[n - 1][n - 1].sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
    }
}

/// Dense rational matrix utilities for small systems.
#[derive(Clone, Debug)]
pub struct RatMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub data: Vec<Vec<BigRational>>,
}

impl RatMatrix {
    pub fn from_f64_rows(rows: &[Vec<f64>]) -> Self {
        let data: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigRational::from_float(v).expect("finite")).collect())
            .collect();
        let ncols = data.first().map_or(0, |r| r.len());
        RatMatrix { nrows: data.len(), ncols, data }
    }

    /// Basis of the right nullspace { x : M x = 0 }, via exact row reduction.
    pub fn nullspace(&self) -> Vec<Vec<BigRational>> {
        let mut m = self.data.clone();
        let (nr, nc) = (self.nrows, self.ncols);
        let mut pivot_cols = Vec::new();
        let mut row = 0usize;
        for col in 0..nc {
            let Some(p) = (row..nr).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(p, row);
            let inv = m[row][col].recip();
            for c in col..nc {
                let v = &m[row][c] * &inv;
                m[row][c] = v;
            }
            for r in 0..nr {
                if r != row && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    for c in col..nc {
                        let v = &m[r][c] - &factor * &m[row][c];
                        m[r][c] = v;
                    }
                }
            }
            pivot_cols.push(col);
            row += 1;
            if row == nr {
                break;
            }
        }
        let free_cols: Vec<usize> = (0..nc).filter(|c| !pivot_cols.contains(c)).collect();
        let mut basis = Vec::with_capacity(free_cols.len());
        for &fc in &free_cols {
            let mut x = vec![BigRational::zero(); nc];
            x[fc] = BigRational::one();
            for (ri, &pc) in pivot_cols.iter().enumerate() {
                x[pc] = -m[ri][fc].clone();
            }
            basis.push(x);
        }
        basis
    }
}
