//! Exact integer linear algebra: Smith and Hermite normal forms, integer
//! solving, and enumeration of sublattices of `Z^2`.
//!
//! All arithmetic is carried out in arbitrary precision. Matrices here are
//! small and dense; the largest ones come from the cochain complexes of the
//! cohomology module (a few hundred rows).

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.as_ref().len(), c, "ragged rows");
            for (j, v) in row.as_ref().iter().enumerate() {
                m[(i, j)] = Int::from(*v);
            }
        }
        m
    }

    pub fn from_int_rows(rows: Vec<Vec<Int>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(r >= 1 && c >= 1, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        IntMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, v) in entries.iter().enumerate() {
            m[(i, i)] = Int::from(*v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Int::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
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

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let v = s * k;
                self.data[dst * self.cols + j] += v;
            }
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let v = s * k;
                self.data[i * self.cols + dst] += v;
            }
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = &mut self.data[i * self.cols + c];
            *v = -std::mem::take(v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = &mut self.data[r * self.cols + j];
            *v = -std::mem::take(v);
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| {
                self.row(i)
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
            }))
            .finish()
    }
}

/// `U * M * V = S` with `S` diagonal and each diagonal entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub s: IntMatrix,
    pub u: IntMatrix,
    /// `U^-1`, maintained alongside `U`.
    pub u_inverse: IntMatrix,
    pub v: IntMatrix,
    /// Diagonal of `S` (length `min(rows, cols)`): nonzero entries, then zeros.
    pub invariant_factors: Vec<Int>,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Invariant factors greater than one, i.e. the torsion of the cokernel.
    pub fn torsion(&self) -> Vec<Int> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect()
    }
}

/// Smallest nonzero entry of the trailing submatrix, ties broken by
/// row-major position.
fn smallest_entry(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows {
        for j in t..m.cols {
            let e = &m[(i, j)];
            if e.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if m[(bi, bj)].abs() <= e.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows, m.cols);
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inverse = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = smallest_entry(&s, t) else {
            break;
        };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        u_inverse.swap_cols(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -s[(i, t)].div_floor(&s[(t, t)]);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                u_inverse.add_col_multiple(t, i, &-&q);
                if !s[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -s[(t, j)].div_floor(&s[(t, t)]);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !s[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // Pivot row and column are clear; enforce divisibility.
                let pivot = s[(t, t)].clone();
                let bad = (t + 1..rows).find(|&i| {
                    (t + 1..cols).any(|j| !s[(i, j)].is_multiple_of(&pivot))
                });
                match bad {
                    None => break,
                    Some(i) => {
                        let one = Int::one();
                        s.add_row_multiple(t, i, &one);
                        u.add_row_multiple(t, i, &one);
                        u_inverse.add_col_multiple(i, t, &-&one);
                    }
                }
            }
            // Re-select the smallest entry in row t / column t as the pivot.
            let (mut bi, mut bj) = (t, t);
            for i in t..rows {
                if !s[(i, t)].is_zero() && s[(i, t)].abs() < s[(bi, bj)].abs() {
                    (bi, bj) = (i, t);
                }
            }
            for j in t..cols {
                if !s[(t, j)].is_zero() && s[(t, j)].abs() < s[(bi, bj)].abs() {
                    (bi, bj) = (t, j);
                }
            }
            s.swap_rows(t, bi);
            u.swap_rows(t, bi);
            u_inverse.swap_cols(t, bi);
            s.swap_cols(t, bj);
            v.swap_cols(t, bj);
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
            u_inverse.negate_col(t);
        }
        t += 1;
    }
    let rank = t;
    let invariant_factors = (0..rows.min(cols)).map(|i| s[(i, i)].clone()).collect();
    SmithDecomposition {
        s,
        u,
        u_inverse,
        v,
        invariant_factors,
        rank,
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U * M = H`, `U`
/// unimodular, `H` in row echelon form with positive pivots and the entries
/// above each pivot reduced into `[0, pivot)`. Zero rows are at the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows, m.cols);
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid on column c among rows r.., until a single nonzero remains.
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                if best.map_or(true, |b| h[(i, c)].abs() < h[(b, c)].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(r, b);
            u.swap_rows(r, b);
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Nonzero rows of the Hermite normal form of the matrix whose rows are
/// `vectors`: a canonical basis of the lattice they span.
pub fn lattice_basis(vectors: &[Vec<Int>], dim: usize) -> Vec<Vec<Int>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = IntMatrix::from_int_rows(vectors.to_vec());
    assert_eq!(m.cols(), dim);
    let (h, _) = hermite_normal_form(&m);
    h.to_rows()
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect()
}

/// Integer solutions of `A x = b`: `particular + span_Z(homogeneous_basis)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntAffineSolutionSet {
    pub particular: Option<Vec<Int>>,
    pub homogeneous_basis: Vec<Vec<Int>>,
}

impl IntAffineSolutionSet {
    pub fn is_empty(&self) -> bool {
        self.particular.is_none()
    }
}

pub fn integer_solve(a: &IntMatrix, b: &[Int]) -> IntAffineSolutionSet {
    assert_eq!(a.rows(), b.len(), "right-hand side has the wrong length");
    let snf = smith_normal_form(a);
    let ub = snf.u.mul_vec(b);
    let n = a.cols();
    let mut y = vec![Int::zero(); n];
    let mut solvable = true;
    for (i, c) in ub.iter().enumerate() {
        if i < snf.rank {
            let d = &snf.s[(i, i)];
            if !c.is_multiple_of(d) {
                solvable = false;
                break;
            }
            y[i] = c / d;
        } else if !c.is_zero() {
            solvable = false;
            break;
        }
    }
    let kernel: Vec<Vec<Int>> = (snf.rank..n).map(|j| snf.v.column(j)).collect();
    let homogeneous_basis = lattice_basis(&kernel, n);
    if !solvable {
        return IntAffineSolutionSet {
            particular: None,
            homogeneous_basis,
        };
    }
    let mut particular = snf.v.mul_vec(&y);
    // Reduce the particular solution against the echelon kernel basis so the
    // output does not depend on the transformation matrices.
    for row in &homogeneous_basis {
        let p = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
        let q = particular[p].div_floor(&row[p]);
        for (x, r) in particular.iter_mut().zip(row) {
            *x -= &q * r;
        }
    }
    IntAffineSolutionSet {
        particular: Some(particular),
        homogeneous_basis,
    }
}

/// All sublattices of `Z^2` of index `n`, as HNF basis matrices
/// `[[a, b], [0, d]]` with `a * d = n` and `0 <= b < d` (rows are the basis).
pub fn sublattices_of_index(n: u64) -> Vec<IntMatrix> {
    assert!(n >= 1);
    let n = n as i64;
    let mut out = Vec::new();
    for a in 1..=n {
        if n % a != 0 {
            continue;
        }
        let d = n / a;
        for b in 0..d {
            out.push(IntMatrix::from_rows(&[[a, b], [0, d]]));
        }
    }
    out
}

/// Greatest common divisor of a list of integers (nonnegative).
pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a Int>) -> Int {
    xs.into_iter().fold(Int::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn check_decomposition(m: &IntMatrix) -> SmithDecomposition {
        let d = smith_normal_form(m);
        assert_eq!(&(&d.u * m) * &d.v, d.s);
        assert!(d.u.determinant().abs().is_one());
        assert_eq!(&d.u * &d.u_inverse, IntMatrix::identity(m.rows()));
        assert!(d.v.determinant().abs().is_one());
        for i in 0..d.s.rows() {
            for j in 0..d.s.cols() {
                if i != j {
                    assert!(d.s[(i, j)].is_zero());
                }
            }
        }
        for w in d.invariant_factors.windows(2) {
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        d
    }

    #[test]
    fn snf_examples() {
        let d = check_decomposition(&IntMatrix::diagonal(&[2, 4]));
        assert_eq!(d.invariant_factors, ints(&[2, 4]));
        assert_eq!(d.s, IntMatrix::diagonal(&[2, 4]));
        let d = check_decomposition(&IntMatrix::identity(2));
        assert_eq!(d.s, IntMatrix::identity(2));
        let d = check_decomposition(&IntMatrix::from_rows(&[[2, 1], [0, 2]]));
        assert_eq!(d.invariant_factors, ints(&[1, 4]));
    }

    #[test]
    fn snf_rectangular_and_singular() {
        let d = check_decomposition(&IntMatrix::from_rows(&[[1, 1]]));
        assert_eq!(d.invariant_factors, ints(&[1]));
        let d = check_decomposition(&IntMatrix::from_rows(&[[2, 4], [4, 8], [6, 12]]));
        assert_eq!(d.invariant_factors, ints(&[2, 0]));
        assert_eq!(d.rank, 1);
        let d = check_decomposition(&IntMatrix::zeros(2, 3));
        assert_eq!(d.rank, 0);
    }

    #[test]
    fn snf_is_deterministic() {
        let m = IntMatrix::from_rows(&[[3, -5, 2], [7, 1, -4], [0, 6, 9]]);
        assert_eq!(smith_normal_form(&m), smith_normal_form(&m));
    }

    #[test]
    fn hnf_examples() {
        let (h, u) = hermite_normal_form(&IntMatrix::identity(2));
        assert_eq!(h, IntMatrix::identity(2));
        assert_eq!(u, IntMatrix::identity(2));
        let m = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, IntMatrix::identity(2));
        assert_eq!(&u * &m, h);
        let m = IntMatrix::from_rows(&[[2, 0], [1, 1]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, IntMatrix::from_rows(&[[1, 1], [0, 2]]));
        assert_eq!(&u * &m, h);
        assert!(u.determinant().abs().is_one());
    }

    #[test]
    fn integer_solve_examples() {
        let s = integer_solve(&IntMatrix::identity(2), &ints(&[3, 5]));
        assert_eq!(s.particular, Some(ints(&[3, 5])));
        assert!(s.homogeneous_basis.is_empty());
        let s = integer_solve(&IntMatrix::diagonal(&[2, 2]), &ints(&[1, 0]));
        assert!(s.is_empty());
        let s = integer_solve(&IntMatrix::from_rows(&[[1, 1]]), &ints(&[0]));
        assert_eq!(s.particular, Some(ints(&[0, 0])));
        assert_eq!(s.homogeneous_basis, vec![ints(&[1, -1])]);
    }

    #[test]
    fn sublattice_examples() {
        assert_eq!(sublattices_of_index(1), vec![IntMatrix::identity(2)]);
        assert_eq!(
            sublattices_of_index(2),
            vec![
                IntMatrix::from_rows(&[[1, 0], [0, 2]]),
                IntMatrix::from_rows(&[[1, 1], [0, 2]]),
                IntMatrix::from_rows(&[[2, 0], [0, 1]]),
            ]
        );
        assert_eq!(sublattices_of_index(4).len(), 7);
    }

    #[test]
    fn determinant_small() {
        assert_eq!(IntMatrix::from_rows(&[[0, 1], [-1, 0]]).determinant(), int(1));
        assert_eq!(
            IntMatrix::from_rows(&[[0, 2, 1], [1, 0, 0], [3, 1, 1]]).determinant(),
            int(-1)
        );
    }
}
