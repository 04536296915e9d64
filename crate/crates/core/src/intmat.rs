//! Integer matrices with Hermite and Smith normal forms.
//!
//! Both forms are reached by unimodular row (and, for Smith, column)
//! operations and computed with arbitrary-precision entries. Pivot
//! selection always takes a minimal-magnitude nonzero entry, which keeps
//! intermediate growth tame at the matrix sizes that occur here.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        IntMat { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            let v = core::mem::take(&mut self.data[idx]);
            self.data[idx] = -v;
        }
    }

    /// row[dst] += c * row[src]
    fn add_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.data[src * self.cols + j].clone() * c;
            self.data[dst * self.cols + j] += v;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// col[dst] += c * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.data[i * self.cols + src].clone() * c;
            self.data[i * self.cols + dst] += v;
        }
    }
}

/// Row Hermite normal form `H = U * A` with `U` unimodular.
///
/// `hnf` keeps only the nonzero rows (one per pivot), pivots are positive,
/// entries above each pivot are reduced into `[0, pivot)`, and `pivot_cols`
/// is strictly increasing.
pub struct Hnf {
    pub hnf: IntMat,
    pub transform: IntMat,
    pub pivot_cols: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    /// Expresses `v` in the lattice basis given by the HNF rows.
    /// Returns `None` when `v` is not in the row lattice.
    pub fn express(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.hnf.cols());
        let mut w = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for (row, &pc) in self.pivot_cols.iter().enumerate() {
            let pivot = self.hnf.get(row, pc);
            let (q, rem) = w[pc].div_rem(pivot);
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (j, entry) in w.iter_mut().enumerate() {
                    *entry -= self.hnf.get(row, j) * &q;
                }
            }
            coords.push(q);
        }
        w.iter().all(|c| c.is_zero()).then_some(coords)
    }
}

/// Computes the row Hermite normal form of `a`.
pub fn hnf(a: &IntMat) -> Hnf {
    let mut m = a.clone();
    let mut u = IntMat::identity(a.rows());
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        // Clear column c below position r by repeated reduction.
        loop {
            let mut best: Option<usize> = None;
            for i in r..m.rows() {
                if m.get(i, c).is_zero() {
                    continue;
                }
                best = match best {
                    None => Some(i),
                    Some(b) if m.get(i, c).abs() < m.get(b, c).abs() => Some(i),
                    keep => keep,
                };
            }
            let Some(b) = best else { break };
            m.swap_rows(r, b);
            u.swap_rows(r, b);
            let mut done = true;
            for i in r + 1..m.rows() {
                if m.get(i, c).is_zero() {
                    continue;
                }
                // round-to-nearest quotient keeps remainders small
                let q = nearest_quotient(m.get(i, c), m.get(r, c));
                let negq = -q;
                m.add_multiple(i, r, &negq);
                u.add_multiple(i, r, &negq);
                if !m.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m.get(r, c).is_zero() {
            continue;
        }
        if m.get(r, c).is_negative() {
            m.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = m.get(i, c).div_floor(m.get(r, c));
            let negq = -q;
            m.add_multiple(i, r, &negq);
            u.add_multiple(i, r, &negq);
        }
        pivot_cols.push(c);
        r += 1;
    }
    let mut rows = Vec::with_capacity(r);
    for i in 0..r {
        rows.push(m.row(i).to_vec());
    }
    let hnf_mat = if r == 0 {
        IntMat::zeros(0, a.cols())
    } else {
        IntMat::from_rows(rows)
    };
    Hnf {
        hnf: hnf_mat,
        transform: u,
        pivot_cols,
    }
}

fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    // round(a / b) with ties toward zero; |a - q b| <= |b| / 2
    let (mut q, r) = a.div_rem(b);
    let two_r = r.abs() * 2;
    if two_r > b.abs() {
        if (a.is_negative()) == (b.is_negative()) {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// Diagonal of the Smith normal form: positive invariant factors
/// `d_1 | d_2 | ...`, one per unit of rank.
pub fn snf_invariant_factors(a: &IntMat) -> Vec<BigInt> {
    let mut m = a.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let n = rows.min(cols);
    let mut factors = Vec::new();
    let mut k = 0usize;
    while k < n {
        // locate minimal-magnitude nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if m.get(i, j).is_zero() {
                    continue;
                }
                best = match best {
                    None => Some((i, j)),
                    Some((bi, bj)) if m.get(i, j).abs() < m.get(bi, bj).abs() => Some((i, j)),
                    keep => keep,
                };
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap_rows(k, bi);
        m.swap_cols(k, bj);
        if m.get(k, k).is_negative() {
            m.negate_row(k);
        }
        let mut clean = true;
        for i in k + 1..rows {
            if !m.get(i, k).is_zero() {
                let q = nearest_quotient(m.get(i, k), m.get(k, k));
                m.add_multiple(i, k, &(-q));
                if !m.get(i, k).is_zero() {
                    clean = false;
                }
            }
        }
        for j in k + 1..cols {
            if !m.get(k, j).is_zero() {
                let q = nearest_quotient(m.get(k, j), m.get(k, k));
                m.add_col_multiple(j, k, &(-q));
                if !m.get(k, j).is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue; // imperfect elimination left smaller entries; re-pivot
        }
        // divisibility sweep: pivot must divide the trailing block
        let mut divides = true;
        'outer: for i in k + 1..rows {
            for j in k + 1..cols {
                if !(m.get(i, j) % m.get(k, k)).is_zero() {
                    m.add_multiple(k, i, &BigInt::one());
                    divides = false;
                    break 'outer;
                }
            }
        }
        if !divides {
            continue;
        }
        factors.push(m.get(k, k).clone());
        k += 1;
    }
    factors
}

/// Rank of an integer matrix (over Q), via the Smith form.
pub fn rank(a: &IntMat) -> usize {
    snf_invariant_factors(a).len()
}
