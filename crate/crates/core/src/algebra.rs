//! Exact integer linear algebra: checked 128-bit matrices, Smith normal form,
//! cokernel presentations and divisibility in finitely generated abelian groups.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("invalid invariant factors {0:?}: each must be >= 2 and divide the next")]
    InvalidTorsion(Vec<i128>),
    #[error("divisor must be positive, got {0}")]
    NonPositiveDivisor(i128),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
}

pub type Result<T> = std::result::Result<T, AlgebraError>;

pub(crate) fn checked_add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(AlgebraError::Overflow("addition"))
}

pub(crate) fn checked_mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(AlgebraError::Overflow("multiplication"))
}

pub(crate) fn checked_sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(AlgebraError::Overflow("subtraction"))
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i128>>", into = "Vec<Vec<i128>>")]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from rows. An empty list gives the 0x0 matrix; use
    /// [`IntMatrix::zeros`] for shapes like 2x0.
    pub fn from_rows(rows: Vec<Vec<i128>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(AlgebraError::Ragged { row: i, expected: ncols, found: row.len() });
            }
            data.extend(row);
        }
        Ok(IntMatrix { rows: nrows, cols: ncols, data })
    }

    pub fn diagonal(entries: &[i128]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
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

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i128>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(AlgebraError::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = checked_mul(a, rhs[(k, j)])?;
                    out[(i, j)] = checked_add(out[(i, j)], prod)?;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i128]) -> Result<Vec<i128>> {
        if v.len() != self.cols {
            return Err(AlgebraError::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .try_fold(0i128, |acc, (&a, &b)| checked_add(acc, checked_mul(a, b)?))
            })
            .collect()
    }

    pub fn sub(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| checked_sub(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// `self - I`, the relation matrix of a monodromy's coinvariants.
    pub fn minus_identity(&self) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(AlgebraError::NotSquare { rows: self.rows, cols: self.cols });
        }
        self.sub(&IntMatrix::identity(self.rows))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<i128> {
        if !self.is_square() {
            return Err(AlgebraError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a = self.clone();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[(k, k)] == 0 {
                match (k + 1..n).find(|&i| a[(i, k)] != 0) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let lhs = checked_mul(a[(i, j)], a[(k, k)])?;
                    let rhs = checked_mul(a[(i, k)], a[(k, j)])?;
                    // Bareiss guarantees exact division.
                    a[(i, j)] = checked_sub(lhs, rhs)? / prev;
                }
            }
            prev = a[(k, k)];
        }
        Ok(sign * a[(n - 1, n - 1)])
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)] == 0))
    }

    pub fn diagonal_entries(&self) -> Vec<i128> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
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

    /// row[dst] += factor * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: i128) -> Result<()> {
        if factor == 0 {
            return Ok(());
        }
        for j in 0..self.cols {
            let delta = checked_mul(factor, self[(src, j)])?;
            self[(dst, j)] = checked_add(self[(dst, j)], delta)?;
        }
        Ok(())
    }

    /// col[dst] += factor * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: i128) -> Result<()> {
        if factor == 0 {
            return Ok(());
        }
        for i in 0..self.rows {
            let delta = checked_mul(factor, self[(i, src)])?;
            self[(i, dst)] = checked_add(self[(i, dst)], delta)?;
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i128;

    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl TryFrom<Vec<Vec<i128>>> for IntMatrix {
    type Error = AlgebraError;

    fn try_from(rows: Vec<Vec<i128>>) -> Result<Self> {
        IntMatrix::from_rows(rows)
    }
}

impl From<IntMatrix> for Vec<Vec<i128>> {
    fn from(m: IntMatrix) -> Self {
        m.to_rows()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{:?}", self.to_rows())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.data.iter().map(|x| x.to_string().len()).max().unwrap_or(1);
        for i in 0..self.rows {
            let cells: Vec<String> =
                self.row(i).iter().map(|x| format!("{x:>width$}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// `u * m * v = d` with `u`, `v` unimodular and `d` in Smith normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn invariant_factors(&self) -> Vec<i128> {
        self.d.diagonal_entries()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().iter().filter(|&&x| x != 0).count()
    }
}

/// Smith normal form with smallest-absolute-value pivoting.
///
/// Each stage moves the smallest nonzero entry of the trailing block to the
/// pivot (ties go to the lowest row, then lowest column), clears the pivot
/// column and then the pivot row by Euclidean reduction, and repeats until
/// both are clear and the pivot divides the remaining block.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithDecomposition> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_entry(&d, t) else {
                return Ok(SmithDecomposition { u, d, v });
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d[(t, t)];
            for i in t + 1..rows {
                let q = d[(i, t)] / pivot;
                d.add_row_multiple(i, t, -q)?;
                u.add_row_multiple(i, t, -q)?;
            }
            for j in t + 1..cols {
                let q = d[(t, j)] / pivot;
                d.add_col_multiple(j, t, -q)?;
                v.add_col_multiple(j, t, -q)?;
            }

            let row_clear = (t + 1..rows).all(|i| d[(i, t)] == 0);
            let col_clear = (t + 1..cols).all(|j| d[(t, j)] == 0);
            if !(row_clear && col_clear) {
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| d[(i, j)] % pivot != 0));
            match offender {
                Some(i) => {
                    d.add_row_multiple(t, i, 1)?;
                    u.add_row_multiple(t, i, 1)?;
                }
                None => break,
            }
        }
        if d[(t, t)] < 0 {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Ok(SmithDecomposition { u, d, v })
}

fn smallest_entry(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(u128, usize, usize)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            let a = m[(i, j)].unsigned_abs();
            if a != 0 && best.is_none_or(|(b, _, _)| a < b) {
                best = Some((a, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// A finitely generated abelian group `Z^free_rank ⊕ Z/d₁ ⊕ … ⊕ Z/d_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbelianGroupPresentation {
    free_rank: usize,
    torsion: Vec<i128>,
}

impl AbelianGroupPresentation {
    pub fn new(free_rank: usize, torsion: Vec<i128>) -> Result<Self> {
        let valid = torsion.iter().all(|&d| d >= 2)
            && torsion.windows(2).all(|w| w[1] % w[0] == 0);
        if !valid {
            return Err(AlgebraError::InvalidTorsion(torsion));
        }
        Ok(AbelianGroupPresentation { free_rank, torsion })
    }

    pub fn trivial() -> Self {
        AbelianGroupPresentation { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroupPresentation { free_rank: rank, torsion: Vec::new() }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[i128] {
        &self.torsion
    }

    /// Number of generators, free first.
    pub fn generator_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<i128> {
        if self.free_rank > 0 {
            return None;
        }
        self.torsion.iter().try_fold(1i128, |acc, &d| acc.checked_mul(d))
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Modulus of generator `i`; 0 for free generators.
    pub fn modulus(&self, i: usize) -> i128 {
        if i < self.free_rank {
            0
        } else {
            self.torsion[i - self.free_rank]
        }
    }

    /// Reduces torsion coordinates into `[0, d)`.
    pub fn reduce(&self, coords: &[i128]) -> Result<Vec<i128>> {
        self.check_len(coords)?;
        Ok(coords
            .iter()
            .enumerate()
            .map(|(i, &c)| match self.modulus(i) {
                0 => c,
                d => c.rem_euclid(d),
            })
            .collect())
    }

    pub(crate) fn check_len(&self, coords: &[i128]) -> Result<()> {
        if coords.len() != self.generator_count() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.generator_count(),
                found: coords.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for AbelianGroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Presentation of `Z^rows / image(m)`.
pub fn cokernel_presentation(m: &IntMatrix) -> Result<AbelianGroupPresentation> {
    let snf = smith_normal_form(m)?;
    let factors = snf.invariant_factors();
    let rank = factors.iter().filter(|&&x| x != 0).count();
    let torsion: Vec<i128> = factors.into_iter().filter(|&x| x > 1).collect();
    AbelianGroupPresentation::new(m.rows() - rank, torsion)
}

/// Whether `n·x = c` has a solution `x` in `group`.
pub fn solve_divisibility(group: &AbelianGroupPresentation, c: &[i128], n: i128) -> Result<bool> {
    if n <= 0 {
        return Err(AlgebraError::NonPositiveDivisor(n));
    }
    group.check_len(c)?;
    Ok(c.iter().enumerate().all(|(i, &ci)| match group.modulus(i) {
        0 => ci % n == 0,
        d => ci.rem_euclid(d) % gcd(n, d) == 0,
    }))
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i128]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn check_snf(input: &IntMatrix) -> SmithDecomposition {
        let s = smith_normal_form(input).unwrap();
        assert_eq!(s.u.mul(input).unwrap().mul(&s.v).unwrap(), s.d);
        assert_eq!(s.u.determinant().unwrap().abs(), 1);
        assert_eq!(s.v.determinant().unwrap().abs(), 1);
        assert!(s.d.is_diagonal());
        let diag = s.invariant_factors();
        for w in diag.windows(2) {
            assert!(w[0] >= 0);
            if w[0] == 0 {
                assert_eq!(w[1], 0);
            } else {
                assert_eq!(w[1] % w[0], 0);
            }
        }
        s
    }

    #[test]
    fn diag_2_3() {
        let s = check_snf(&IntMatrix::diagonal(&[2, 3]));
        assert_eq!(s.invariant_factors(), vec![1, 6]);
    }

    #[test]
    fn identity_is_fixed() {
        let s = check_snf(&IntMatrix::identity(4));
        assert_eq!(s.d, IntMatrix::identity(4));
        assert_eq!(s.u, IntMatrix::identity(4));
        assert_eq!(s.v, IntMatrix::identity(4));
    }

    #[test]
    fn zero_matrix() {
        let s = check_snf(&IntMatrix::zeros(2, 2));
        assert_eq!(s.d, IntMatrix::zeros(2, 2));
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
    }

    #[test]
    fn rectangular() {
        let s = check_snf(&m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(s.invariant_factors(), vec![2, 6, 12]);
        check_snf(&m(&[&[0, 3, 0, 5]]));
        check_snf(&m(&[&[4], &[6], &[0]]));
    }

    #[test]
    fn deterministic() {
        let input = m(&[&[3, 5, 7], &[2, -4, 1], &[0, 9, -2]]);
        assert_eq!(smith_normal_form(&input), smith_normal_form(&input));
    }

    #[test]
    fn overflow_is_an_error() {
        let big = i128::MAX / 2 + 7;
        let input = m(&[&[3, big], &[big, 5]]);
        assert!(matches!(smith_normal_form(&input), Err(AlgebraError::Overflow(_))));
    }

    #[test]
    fn cokernel_examples() {
        let g = cokernel_presentation(&m(&[&[3]])).unwrap();
        assert_eq!((g.free_rank(), g.torsion()), (0, &[3][..]));

        let g = cokernel_presentation(&IntMatrix::zeros(2, 0)).unwrap();
        assert_eq!(g, AbelianGroupPresentation::free(2));

        let g = cokernel_presentation(&m(&[&[1, 2], &[3, 4]])).unwrap();
        assert_eq!((g.free_rank(), g.torsion()), (0, &[2][..]));
        assert_eq!(g.to_string(), "Z/2");
    }

    #[test]
    fn divisibility_examples() {
        let z = AbelianGroupPresentation::free(1);
        assert!(solve_divisibility(&z, &[2], 2).unwrap());
        assert!(!solve_divisibility(&z, &[3], 2).unwrap());
        let z4 = AbelianGroupPresentation::new(0, vec![4]).unwrap();
        assert!(solve_divisibility(&z4, &[2], 2).unwrap());
        assert!(!solve_divisibility(&z4, &[1], 2).unwrap());
        assert!(solve_divisibility(&z, &[1, 2], 2).is_err());
        assert!(solve_divisibility(&z, &[2], 0).is_err());
    }

    #[test]
    fn presentation_validation() {
        assert!(AbelianGroupPresentation::new(0, vec![2, 3]).is_err());
        assert!(AbelianGroupPresentation::new(0, vec![1]).is_err());
        assert!(AbelianGroupPresentation::new(1, vec![2, 4]).is_ok());
        let g = AbelianGroupPresentation::new(1, vec![3]).unwrap();
        assert_eq!(g.to_string(), "Z + Z/3");
        assert_eq!(g.order(), None);
        assert_eq!(AbelianGroupPresentation::trivial().to_string(), "0");
    }

    #[test]
    fn determinant_small() {
        assert_eq!(m(&[&[1, 2], &[3, 4]]).determinant().unwrap(), -2);
        assert_eq!(m(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]).determinant().unwrap(), -2);
        assert_eq!(IntMatrix::zeros(0, 0).determinant().unwrap(), 1);
    }
}
