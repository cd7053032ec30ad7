//! Dense matrices over arbitrary-precision rationals.
//!
//! Rank and determinant go through fraction-free (Bareiss) elimination on a
//! denominator-cleared integer copy; solving, inversion and kernel bases use
//! exact Gauss-Jordan reduction. Pivoting is deterministic everywhere: the
//! first row with a nonzero entry in the current column wins.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Row-major matrix of `BigRational` entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

/// Outcome of an exact linear solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(Vec<BigRational>),
    Underdetermined {
        particular: Vec<BigRational>,
        kernel: Vec<Vec<BigRational>>,
    },
    Inconsistent,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        RatMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        for row in &rows {
            if row.len() != ncols {
                return Err(Error::MatrixShape(nrows, ncols, 1, row.len()));
            }
        }
        Ok(RatMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
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

    pub fn at(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> RatMatrix {
        RatMatrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::MatrixShape(self.rows, self.cols, other.rows, other.cols));
        }
        Ok(RatMatrix::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = BigRational::zero();
            for k in 0..self.cols {
                acc += self.at(r, k) * other.at(k, c);
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::MatrixShape(self.rows, self.cols, v.len(), 1));
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = BigRational::zero();
                for c in 0..self.cols {
                    acc += self.at(r, c) * &v[c];
                }
                acc
            })
            .collect())
    }

    /// Scale every row to a common denominator, yielding an integer matrix
    /// together with the product of the row scalings.
    fn cleared(&self) -> (Vec<BigInt>, BigInt) {
        let mut ints = Vec::with_capacity(self.rows * self.cols);
        let mut scaling = BigInt::one();
        for r in 0..self.rows {
            let mut lcm = BigInt::one();
            for c in 0..self.cols {
                lcm = num_integer::lcm(lcm, self.at(r, c).denom().clone());
            }
            for c in 0..self.cols {
                let e = self.at(r, c);
                ints.push(e.numer() * (&lcm / e.denom()));
            }
            scaling *= lcm;
        }
        (ints, scaling)
    }

    /// Fraction-free Bareiss elimination on the denominator-cleared copy.
    /// Returns the rank, the determinant of the integer copy (square case)
    /// and the sign accumulated from row swaps.
    fn bareiss(&self) -> (usize, BigInt, i8) {
        let (mut a, _) = self.cleared();
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut sign: i8 = 1;
        let mut pivot_row = 0;
        let mut last_pivot = BigInt::one();
        for col in 0..cols {
            if pivot_row == rows {
                break;
            }
            let Some(found) = (pivot_row..rows).find(|&r| !a[r * cols + col].is_zero()) else {
                continue;
            };
            if found != pivot_row {
                for c in 0..cols {
                    a.swap(found * cols + c, pivot_row * cols + c);
                }
                sign = -sign;
            }
            let pivot = a[pivot_row * cols + col].clone();
            for r in (pivot_row + 1)..rows {
                for c in 0..cols {
                    if c == col {
                        continue;
                    }
                    let v = &pivot * &a[r * cols + c] - &a[r * cols + col] * &a[pivot_row * cols + c];
                    // Exact by the Bareiss identity.
                    a[r * cols + c] = v / &prev;
                }
                a[r * cols + col] = BigInt::zero();
            }
            prev = pivot.clone();
            last_pivot = pivot;
            pivot_row += 1;
        }
        (pivot_row, last_pivot, sign)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.bareiss().0
    }

    pub fn det(&self) -> Result<BigRational> {
        if !self.is_square() {
            return Err(Error::MatrixShape(self.rows, self.cols, self.cols, self.rows));
        }
        if self.rows == 0 {
            return Ok(BigRational::one());
        }
        let (_, scaling) = self.cleared();
        let (rank, last_pivot, sign) = self.bareiss();
        if rank < self.rows {
            return Ok(BigRational::zero());
        }
        let mut det = BigRational::new(last_pivot, scaling);
        if sign < 0 {
            det = -det;
        }
        Ok(det)
    }

    /// Gauss-Jordan reduction; returns the reduced matrix and pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(found) = (pivot_row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            if found != pivot_row {
                for c in 0..m.cols {
                    m.data.swap(found * m.cols + c, pivot_row * m.cols + c);
                }
            }
            let inv = m.at(pivot_row, col).recip();
            for c in 0..m.cols {
                let v = m.at(pivot_row, c) * &inv;
                m.set(pivot_row, c, v);
            }
            for r in 0..m.rows {
                if r == pivot_row || m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).clone();
                for c in 0..m.cols {
                    let v = m.at(r, c) - &factor * m.at(pivot_row, c);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (m, pivots)
    }

    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::MatrixShape(self.rows, self.cols, self.cols, self.rows));
        }
        let n = self.rows;
        let mut aug = RatMatrix::zero(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, n + r, BigRational::one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
            return Err(Error::SingularMatrix);
        }
        Ok(RatMatrix::from_fn(n, n, |r, c| red.at(r, n + c).clone()))
    }

    /// Solve `self * x = rhs` exactly.
    pub fn solve(&self, rhs: &[BigRational]) -> Result<LinearSolution> {
        if rhs.len() != self.rows {
            return Err(Error::MatrixShape(self.rows, self.cols, rhs.len(), 1));
        }
        let mut aug = RatMatrix::zero(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, self.cols, rhs[r].clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(LinearSolution::Inconsistent);
        }
        let mut particular = vec![BigRational::zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            particular[col] = red.at(row, self.cols).clone();
        }
        if pivots.len() == self.cols {
            return Ok(LinearSolution::Unique(particular));
        }
        let kernel = kernel_from_rref(&red, &pivots, self.cols);
        Ok(LinearSolution::Underdetermined { particular, kernel })
    }

    /// Deterministic basis of `{x : self * x = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<BigRational>> {
        if self.rows == 0 {
            return (0..self.cols)
                .map(|j| {
                    let mut v = vec![BigRational::zero(); self.cols];
                    v[j] = BigRational::one();
                    v
                })
                .collect();
        }
        let (red, pivots) = self.rref();
        kernel_from_rref(&red, &pivots, self.cols)
    }
}

fn kernel_from_rref(red: &RatMatrix, pivots: &[usize], ncols: usize) -> Vec<Vec<BigRational>> {
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (row, &col) in pivots.iter().enumerate() {
            v[col] = -red.at(row, free).clone();
        }
        basis.push(v);
    }
    basis
}

/// Parse a reduced rational literal: `p`, `p/q` or a decimal-free integer.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("invalid rational literal {text:?}"));
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let numer: BigInt = numer.trim().parse().map_err(|_| bad())?;
    let denom: BigInt = match denom {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(numer, denom))
}

/// Render a rational as `p` or `p/q` with positive denominator.
pub fn rational_to_string(v: &BigRational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn is_negative(v: &BigRational) -> bool {
    v.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn rat2(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> RatMatrix {
        RatMatrix::from_fn(rows, cols, |_, _| {
            rat2(rng.gen_range(-6..=6), rng.gen_range(1..=4))
        })
    }

    #[test]
    fn golden_inverse_3x3() {
        let m = RatMatrix::from_rows(vec![
            vec![rat(2), rat(1), rat(1)],
            vec![rat(2), rat(2), rat(2)],
            vec![rat(1), rat(1), rat(2)],
        ])
        .unwrap();
        assert_eq!(m.det().unwrap(), rat(2));
        let inv = m.inverse().unwrap();
        let expect = RatMatrix::from_rows(vec![
            vec![rat(1), rat2(-1, 2), rat(0)],
            vec![rat(-1), rat2(3, 2), rat(-1)],
            vec![rat(0), rat2(-1, 2), rat(1)],
        ])
        .unwrap();
        assert_eq!(inv, expect);
        assert_eq!(m.mul(&inv).unwrap(), RatMatrix::identity(3));
    }

    #[test]
    fn rank_agrees_between_bareiss_and_rref() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rows = rng.gen_range(1..=6);
            let cols = rng.gen_range(1..=6);
            let m = random_matrix(&mut rng, rows, cols);
            let (_, pivots) = m.rref();
            assert_eq!(m.rank(), pivots.len());
        }
    }

    #[test]
    fn det_matches_rref_pivot_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(1..=5);
            let m = random_matrix(&mut rng, n, n);
            let det = m.det().unwrap();
            if det.is_zero() {
                assert!(m.rank() < n);
            } else {
                let inv = m.inverse().unwrap();
                assert_eq!(m.mul(&inv).unwrap(), RatMatrix::identity(n));
                assert_eq!(inv.det().unwrap(), det.recip());
            }
        }
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..30 {
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(1..=6);
            let m = random_matrix(&mut rng, rows, cols);
            let kernel = m.kernel_basis();
            assert_eq!(kernel.len(), cols - m.rank());
            for v in &kernel {
                let image = m.mul_vec(v).unwrap();
                assert!(image.iter().all(|x| x.is_zero()));
            }
        }
    }

    #[test]
    fn solve_classifies_outcomes() {
        let a = RatMatrix::from_rows(vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]]).unwrap();
        match a.solve(&[rat(1), rat(2)]).unwrap() {
            LinearSolution::Underdetermined { particular, kernel } => {
                assert_eq!(kernel.len(), 1);
                let image = a.mul_vec(&particular).unwrap();
                assert_eq!(image, vec![rat(1), rat(2)]);
            }
            other => panic!("expected underdetermined, got {other:?}"),
        }
        assert_eq!(a.solve(&[rat(1), rat(3)]).unwrap(), LinearSolution::Inconsistent);
        let b = RatMatrix::identity(2);
        assert_eq!(
            b.solve(&[rat(4), rat(5)]).unwrap(),
            LinearSolution::Unique(vec![rat(4), rat(5)])
        );
    }

    #[test]
    fn empty_kernel_of_no_rows_is_full_basis() {
        let m = RatMatrix::zero(0, 3);
        assert_eq!(m.kernel_basis().len(), 3);
    }

    #[test]
    fn rational_literals_round_trip() {
        for text in ["0", "7", "-3", "5/3", "-12/7"] {
            let v = parse_rational(text).unwrap();
            assert_eq!(rational_to_string(&v), text);
        }
        assert_eq!(parse_rational("4/6").unwrap(), rat2(2, 3));
        assert_eq!(parse_rational(" 1/-2 ").unwrap(), rat2(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1.5").is_err());
    }
}
