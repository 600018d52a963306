//! Dense exact linear algebra over a [`Field`]: rank, left kernels and Schur
//! complements.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::field::{denominator_lcm, Field, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
    #[error("leading {0}x{0} block is singular")]
    SingularBlock(usize),
    #[error("block size {block} exceeds matrix dimensions {rows}x{cols}")]
    BlockTooLarge {
        block: usize,
        rows: usize,
        cols: usize,
    },
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch {
                rows,
                cols,
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds from row vectors; `cols` is needed to describe matrices with no rows.
    pub fn from_rows(cols: usize, rows: Vec<Vec<T>>) -> Result<Self, LinalgError> {
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::ShapeMismatch {
                    rows: n_rows,
                    cols,
                    expected: n_rows * cols,
                    got: data.len() + row.len(),
                });
            }
            data.extend(row);
        }
        Self::from_vec(n_rows, cols, data)
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Entrywise map into another element type.
    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// `P M P^T` for the permutation listing the old index of each new position.
    pub fn permute_symmetric(&self, order: &[usize]) -> Self {
        assert_eq!(
            self.rows, self.cols,
            "symmetric permutation needs a square matrix"
        );
        assert_eq!(order.len(), self.rows);
        let n = self.rows;
        let mut data = Vec::with_capacity(n * n);
        for &i in order {
            for &j in order {
                data.push(self.get(i, j).clone());
            }
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }
}

pub fn identity<F: Field>(field: &F, n: usize) -> Matrix<F::Elem> {
    let mut m = Matrix::filled(n, n, field.zero());
    for i in 0..n {
        m.set(i, i, field.one());
    }
    m
}

pub fn from_i64_rows<F: Field>(field: &F, rows: &[Vec<i64>]) -> Matrix<F::Elem> {
    let cols = rows.first().map_or(0, Vec::len);
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
        .collect();
    Matrix::from_rows(cols, rows).expect("rows of equal length")
}

pub fn mat_mul<F: Field>(field: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.cols, b.rows, "inner dimensions differ");
    let mut out = Matrix::filled(a.rows, b.cols, field.zero());
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if field.is_zero(aik) {
                continue;
            }
            for j in 0..b.cols {
                let v = field.add(out.get(i, j), &field.mul(aik, b.get(k, j)));
                out.set(i, j, v);
            }
        }
    }
    out
}

/// Row vector times matrix.
pub fn vec_mat_mul<F: Field>(field: &F, w: &[F::Elem], m: &Matrix<F::Elem>) -> Vec<F::Elem> {
    assert_eq!(w.len(), m.rows, "vector length differs from row count");
    let mut out = vec![field.zero(); m.cols];
    for (i, wi) in w.iter().enumerate() {
        if field.is_zero(wi) {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o = field.add(o, &field.mul(wi, m.get(i, j)));
        }
    }
    out
}

/// Reduced row echelon form; returns the reduced matrix and its pivot columns.
pub fn rref<F: Field>(field: &F, m: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !field.is_zero(a.get(i, c))) else {
            continue;
        };
        swap_rows(&mut a, p, r);
        let inv = field.inv(a.get(r, c)).expect("pivot is nonzero");
        for j in c..a.cols {
            let v = field.mul(a.get(r, j), &inv);
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r || field.is_zero(a.get(i, c)) {
                continue;
            }
            let factor = a.get(i, c).clone();
            for j in c..a.cols {
                let v = field.sub(a.get(i, j), &field.mul(&factor, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

fn swap_rows<T>(m: &mut Matrix<T>, i: usize, j: usize) {
    if i == j {
        return;
    }
    let cols = m.cols;
    let (lo, hi) = (i.min(j), i.max(j));
    let (head, tail) = m.data.split_at_mut(hi * cols);
    head[lo * cols..(lo + 1) * cols].swap_with_slice(&mut tail[..cols]);
}

/// Rank by plain Gaussian elimination (forward pass only).
pub fn gauss_rank<F: Field + ?Sized>(field: &F, m: &Matrix<F::Elem>) -> usize {
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !field.is_zero(a.get(i, c))) else {
            continue;
        };
        swap_rows(&mut a, p, r);
        let inv = field.inv(a.get(r, c)).expect("pivot is nonzero");
        for i in r + 1..a.rows {
            if field.is_zero(a.get(i, c)) {
                continue;
            }
            let factor = field.mul(a.get(i, c), &inv);
            for j in c..a.cols {
                let v = field.sub(a.get(i, j), &field.mul(&factor, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        r += 1;
    }
    r
}

/// Rank of a rational matrix by fraction-free (Bareiss) elimination over the
/// integers. Each row is first cleared of denominators, which preserves rank.
pub fn bareiss_rank(m: &Matrix<Rational>) -> usize {
    let cols = m.cols;
    let mut a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| {
            let row = m.row(i);
            let scale = denominator_lcm(row);
            row.iter()
                .map(|q| q.numer() * (&scale / q.denom()))
                .collect()
        })
        .collect();
    let rows = a.len();
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            for j in c + 1..cols {
                let num = &pivot_row[c] * &row[j] - &row[c] * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Exact rank over the given field.
pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    field.rank(m)
}

/// Basis of `{w : w M = 0}`, each vector scaled so its first nonzero entry is 1.
pub fn left_kernel_basis<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let t = m.transpose();
    let (reduced, pivots) = rref(field, &t);
    let n = t.cols;
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&j| !is_pivot[j])
        .map(|free| {
            let mut w = vec![field.zero(); n];
            w[free] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                w[pc] = field.neg(reduced.get(r, free));
            }
            normalize_first_nonzero(field, &mut w);
            w
        })
        .collect()
}

/// Scales `v` so its first nonzero entry is 1; the zero vector is left unchanged.
pub fn normalize_first_nonzero<F: Field>(field: &F, v: &mut [F::Elem]) {
    if let Some(lead) = v.iter().find(|x| !field.is_zero(x)).cloned() {
        let inv = field.inv(&lead).expect("nonzero");
        for x in v.iter_mut() {
            *x = field.mul(x, &inv);
        }
    }
}

pub fn inverse<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    if m.rows != m.cols {
        return None;
    }
    let n = m.rows;
    let mut aug = Matrix::filled(n, 2 * n, field.zero());
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n + i, field.one());
    }
    let (reduced, pivots) = rref(field, &aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut inv = Matrix::filled(n, n, field.zero());
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, reduced.get(i, n + j).clone());
        }
    }
    Some(inv)
}

fn block<T: Clone>(m: &Matrix<T>, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix<T> {
    let mut data = Vec::with_capacity((r1 - r0) * (c1 - c0));
    for i in r0..r1 {
        data.extend_from_slice(&m.row(i)[c0..c1]);
    }
    Matrix {
        rows: r1 - r0,
        cols: c1 - c0,
        data,
    }
}

/// `M/A = D - C A^{-1} B` where `A` is the leading `block_size` square block.
pub fn schur_complement<F: Field>(
    field: &F,
    m: &Matrix<F::Elem>,
    block_size: usize,
) -> Result<Matrix<F::Elem>, LinalgError> {
    if block_size > m.rows || block_size > m.cols {
        return Err(LinalgError::BlockTooLarge {
            block: block_size,
            rows: m.rows,
            cols: m.cols,
        });
    }
    let k = block_size;
    let a = block(m, 0, k, 0, k);
    let b = block(m, 0, k, k, m.cols);
    let c = block(m, k, m.rows, 0, k);
    let d = block(m, k, m.rows, k, m.cols);
    let a_inv = inverse(field, &a).ok_or(LinalgError::SingularBlock(k))?;
    let cab = mat_mul(field, &mat_mul(field, &c, &a_inv), &b);
    let mut out = d;
    for (o, x) in out.data.iter_mut().zip(&cab.data) {
        *o = field.sub(o, x);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals, SampleField};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(rows: &[Vec<i64>]) -> Matrix<Rational> {
        from_i64_rows(&Rationals, rows)
    }

    #[test]
    fn rank_trivial_cases() {
        let f = Rationals;
        assert_eq!(rank(&f, &identity(&f, 3)), 3);
        assert_eq!(rank(&f, &q(&[vec![1, 1], vec![1, 1]])), 1);
        let empty: Matrix<Rational> = Matrix::from_vec(0, 0, vec![]).unwrap();
        assert_eq!(rank(&f, &empty), 0);
        let p = PrimeField::default();
        assert_eq!(rank(&p, &identity(&p, 3)), 3);
    }

    #[test]
    fn left_kernel_trivial_cases() {
        let f = Rationals;
        assert!(left_kernel_basis(&f, &identity(&f, 2)).is_empty());
        let m = q(&[vec![1, 2], vec![2, 4], vec![0, 1]]);
        let basis = left_kernel_basis(&f, &m);
        assert_eq!(basis.len(), 1);
        assert_eq!(
            basis[0],
            vec![
                f.from_i64(1),
                Rational::new((-1).into(), 2.into()),
                f.zero()
            ]
        );
        assert!(vec_mat_mul(&f, &basis[0], &m).iter().all(|x| f.is_zero(x)));
    }

    #[test]
    fn schur_of_identity() {
        let f = Rationals;
        let s = schur_complement(&f, &identity(&f, 4), 2).unwrap();
        assert_eq!(s, identity(&f, 2));
    }

    #[test]
    fn schur_singular_block() {
        let f = Rationals;
        let m = q(&[vec![0, 0, 1], vec![0, 0, 1], vec![1, 1, 1]]);
        assert_eq!(
            schur_complement(&f, &m, 2),
            Err(LinalgError::SingularBlock(2))
        );
        assert!(matches!(
            schur_complement(&f, &m, 4),
            Err(LinalgError::BlockTooLarge { .. })
        ));
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            Matrix::from_vec(2, 2, vec![1, 2, 3]),
            Err(LinalgError::ShapeMismatch { .. })
        ));
        assert!(Matrix::from_rows(2, vec![vec![1, 2], vec![3]]).is_err());
    }

    /// Random `rows x cols` matrix of rank `r` built as a product of random factors.
    fn planted<F: SampleField>(
        field: &F,
        rows: usize,
        cols: usize,
        r: usize,
        rng: &mut ChaCha8Rng,
    ) -> Matrix<F::Elem> {
        let left =
            Matrix::from_vec(rows, r, (0..rows * r).map(|_| field.sample(rng)).collect()).unwrap();
        let right =
            Matrix::from_vec(r, cols, (0..r * cols).map(|_| field.sample(rng)).collect()).unwrap();
        mat_mul(field, &left, &right)
    }

    #[test]
    fn planted_rank_prime_field() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for r in [0, 1, 17, 49, 50] {
            let m = planted(&f, 50, 50, r, &mut rng);
            assert_eq!(rank(&f, &m), r, "planted rank {r}");
        }
    }

    #[test]
    fn schur_rank_identity_randomized() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 200 {
            let n = rng.gen_range(2..9usize);
            let k = rng.gen_range(1..n);
            let r = rng.gen_range(0..=n);
            // Mix of full-rank and low-rank matrices; skip singular leading blocks.
            let m = planted(&f, n, n, r, &mut rng);
            let Ok(s) = schur_complement(&f, &m, k) else {
                continue;
            };
            assert_eq!(rank(&f, &m), k + rank(&f, &s));
            checked += 1;
        }
    }

    use rand::Rng;

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..6)
            .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(rows in small_matrix()) {
            let m = q(&rows);
            prop_assert_eq!(rank(&Rationals, &m), rank(&Rationals, &m.transpose()));
        }

        #[test]
        fn bareiss_matches_gauss(rows in small_matrix()) {
            let m = q(&rows);
            prop_assert_eq!(bareiss_rank(&m), gauss_rank(&Rationals, &m));
        }

        #[test]
        fn kernel_dimension_and_exactness(rows in small_matrix()) {
            let f = Rationals;
            let m = q(&rows);
            let basis = left_kernel_basis(&f, &m);
            prop_assert_eq!(basis.len(), m.rows() - rank(&f, &m));
            for w in &basis {
                prop_assert!(vec_mat_mul(&f, w, &m).iter().all(|x| f.is_zero(x)));
                let lead = w.iter().find(|x| !f.is_zero(x)).unwrap();
                prop_assert_eq!(lead, &f.one());
            }
        }

        #[test]
        fn prime_rank_never_exceeds_rational(rows in small_matrix()) {
            let p = PrimeField::default();
            let mp = from_i64_rows(&p, &rows);
            prop_assert!(rank(&p, &mp) <= rank(&Rationals, &q(&rows)));
        }
    }

    #[test]
    fn prime_rank_agrees_with_rational_on_random_integer_matrices() {
        let p = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let trials = 500;
        let mut agree = 0;
        for _ in 0..trials {
            let r = rng.gen_range(1..7usize);
            let c = rng.gen_range(1..7usize);
            let rows: Vec<Vec<i64>> = (0..r)
                .map(|_| {
                    (0..c)
                        .map(|_| rng.gen_range(-1_000_000..1_000_000))
                        .collect()
                })
                .collect();
            let rp = rank(&p, &from_i64_rows(&p, &rows));
            let rq = rank(&Rationals, &q(&rows));
            assert!(rp <= rq);
            agree += usize::from(rp == rq);
        }
        assert!(agree as f64 >= 0.99 * trials as f64);
    }
}
