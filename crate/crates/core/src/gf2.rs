//! Dense GF(2) matrices with bit-packed rows, Gauss-Jordan elimination to
//! reduced row-echelon form with the accumulated transform, and the
//! primary/secondary column classification used by the anti-commuting set
//! construction.

use std::fmt;

use crate::bits::BitVector;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    n_cols: usize,
    rows: Vec<BitVector>,
}

impl BinaryMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_cols,
            rows: vec![BitVector::zeros(n_cols); n_rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitVector>) -> Result<Self> {
        let n_cols = rows.first().map_or(0, BitVector::len);
        if let Some(r) = rows.iter().find(|r| r.len() != n_cols) {
            return Err(Error::Dimension {
                expected: n_cols,
                got: r.len(),
            });
        }
        Ok(Self { n_cols, rows })
    }

    /// Rows given as 0/1 literals, e.g. `[[1,0,1],[0,1,1]]`.
    pub fn from_u8_rows(rows: &[&[u8]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| BitVector::from_bools(&r.iter().map(|b| *b != 0).collect::<Vec<_>>()))
                .collect(),
        )
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(n_rows: usize, columns: &[BitVector]) -> Result<Self> {
        let mut m = Self::zeros(n_rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != n_rows {
                return Err(Error::Dimension {
                    expected: n_rows,
                    got: c.len(),
                });
            }
            for i in c.ones() {
                m.rows[i].set(j, true);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn column(&self, j: usize) -> BitVector {
        BitVector::from_indices(
            self.n_rows(),
            (0..self.n_rows()).filter(|&i| self.rows[i].get(j)),
        )
    }

    pub fn columns(&self) -> Vec<BitVector> {
        (0..self.n_cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_columns(self.n_cols, &self.rows).expect("row lengths are uniform")
    }

    pub fn mul(&self, other: &BinaryMatrix) -> Result<Self> {
        if self.n_cols != other.n_rows() {
            return Err(Error::Dimension {
                expected: self.n_cols,
                got: other.n_rows(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BitVector::zeros(other.n_cols);
                for k in r.ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        Ok(Self {
            n_cols: other.n_cols,
            rows,
        })
    }

    /// `self · v`.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.n_cols {
            return Err(Error::Dimension {
                expected: self.n_cols,
                got: v.len(),
            });
        }
        Ok(BitVector::from_indices(
            self.n_rows(),
            (0..self.n_rows()).filter(|&i| self.rows[i].dot(v)),
        ))
    }

    /// `selfᵀ · v`: the XOR of the rows selected by `v`.
    pub fn transpose_mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.n_rows() {
            return Err(Error::Dimension {
                expected: self.n_rows(),
                got: v.len(),
            });
        }
        let mut acc = BitVector::zeros(self.n_cols);
        for i in v.ones() {
            acc.xor_assign(&self.rows[i]);
        }
        Ok(acc)
    }

    pub fn rank(&self) -> usize {
        rref_with_transform(self).pivot_rows.len()
    }

    /// Inverse of a square invertible matrix, by elimination.
    pub fn inverse(&self) -> Result<Self> {
        if self.n_rows() != self.n_cols {
            return Err(Error::Dimension {
                expected: self.n_rows(),
                got: self.n_cols,
            });
        }
        let r = rref_with_transform(self);
        if r.pivot_rows.len() != self.n_rows() {
            return Err(Error::InvalidArgument("matrix is singular over GF(2)".into()));
        }
        Ok(r.transform)
    }

    pub fn is_identity(&self) -> bool {
        self.n_rows() == self.n_cols && *self == Self::identity(self.n_cols)
    }

    /// Reduced row-echelon conditions: leading ones move strictly right, zero
    /// rows are at the bottom, and each leading one is alone in its column.
    pub fn is_rref(&self) -> bool {
        let mut last_lead: Option<usize> = None;
        let mut seen_zero = false;
        for (i, row) in self.rows.iter().enumerate() {
            match row.first_one() {
                None => seen_zero = true,
                Some(lead) => {
                    if seen_zero || last_lead.is_some_and(|l| lead <= l) {
                        return false;
                    }
                    if (0..self.n_rows()).any(|k| k != i && self.rows[k].get(lead)) {
                        return false;
                    }
                    last_lead = Some(lead);
                }
            }
        }
        true
    }

    fn xor_row_into(&mut self, src: usize, dst: usize, from_word: usize) {
        let (a, b) = if src < dst {
            let (lo, hi) = self.rows.split_at_mut(dst);
            (&lo[src], &mut hi[0])
        } else {
            let (lo, hi) = self.rows.split_at_mut(src);
            (&hi[0], &mut lo[dst])
        };
        b.xor_assign_from(a, from_word);
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{} [", self.n_rows(), self.n_cols)?;
        for r in &self.rows {
            f.write_str("  ")?;
            for j in 0..self.n_cols {
                f.write_str(if r.get(j) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        f.write_str("]")
    }
}

/// One line of `0`/`1` per row.
impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            for j in 0..self.n_cols {
                f.write_str(if r.get(j) { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

/// Outcome of Gauss-Jordan elimination on `M`.
#[derive(Clone, Debug)]
pub struct RrefResult {
    /// `M_rref = transform · M`.
    pub rref: BinaryMatrix,
    /// Invertible `n_rows × n_rows` transform `R`.
    pub transform: BinaryMatrix,
    /// Rows holding a leading one; always `0..rank`.
    pub pivot_rows: Vec<usize>,
    /// Column of the leading one of each pivot row.
    pub pivot_cols: Vec<usize>,
    /// Columns equal to a unit vector, left to right.
    pub primary_cols: Vec<usize>,
    /// `(column, i)` for columns equal to `e_0 + e_i`, `i >= 1`.
    pub secondary_cols: Vec<(usize, usize)>,
}

/// Partition of the columns of a reduced matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnClasses {
    /// `(column, pivot row)`.
    pub primary: Vec<(usize, usize)>,
    /// `(column, partner row)`.
    pub secondary: Vec<(usize, usize)>,
    pub unusable: Vec<usize>,
}

/// Gauss-Jordan elimination over GF(2) on the augmented matrix `(M | E)`.
///
/// Columns are scanned left to right and the topmost available row with a
/// one becomes the pivot, so the elimination path (and `R`) is reproducible.
pub fn rref_with_transform(m: &BinaryMatrix) -> RrefResult {
    let n = m.n_rows();
    let mut a = m.clone();
    let mut r = BinaryMatrix::identity(n);
    let mut pivot_cols = Vec::new();
    let mut next = 0usize;
    for col in 0..m.n_cols() {
        if next == n {
            break;
        }
        let Some(p) = (next..n).find(|&i| a.rows[i].get(col)) else {
            continue;
        };
        if p != next {
            a.rows.swap(p, next);
            r.rows.swap(p, next);
        }
        // the pivot row is zero left of `col`
        let from_word = col / 64;
        for i in 0..n {
            if i != next && a.rows[i].get(col) {
                a.xor_row_into(next, i, from_word);
                r.xor_row_into(next, i, 0);
            }
        }
        pivot_cols.push(col);
        next += 1;
    }
    let pivot_rows: Vec<usize> = (0..next).collect();
    let secondary_cols = find_secondary(&a, &pivot_cols);
    RrefResult {
        rref: a,
        transform: r,
        pivot_rows,
        primary_cols: pivot_cols.clone(),
        pivot_cols,
        secondary_cols,
    }
}

/// Columns matching `(1 0 .. 0 1_i 0 .. 0)ᵀ`, found word-parallel: track
/// which columns have at least one and at least two ones among rows `1..`.
fn find_secondary(a: &BinaryMatrix, pivot_cols: &[usize]) -> Vec<(usize, usize)> {
    let n = a.n_rows();
    if n < 2 || a.n_cols() == 0 {
        return Vec::new();
    }
    let words = a.rows[0].words().len();
    let mut once = vec![0u64; words];
    let mut twice = vec![0u64; words];
    for row in &a.rows[1..] {
        for (k, w) in row.words().iter().enumerate() {
            twice[k] |= once[k] & w;
            once[k] |= w;
        }
    }
    let mut out = Vec::new();
    let mut taken = vec![false; n];
    for (k, row0) in a.rows[0].words().iter().enumerate() {
        let mut cand = row0 & once[k] & !twice[k];
        while cand != 0 {
            let col = k * 64 + cand.trailing_zeros() as usize;
            cand &= cand - 1;
            debug_assert!(pivot_cols.binary_search(&col).is_err());
            let partner = (1..n).find(|&i| a.rows[i].get(col)).expect("second one present");
            // repeated input columns reduce to repeated patterns; keep the first
            if !std::mem::replace(&mut taken[partner], true) {
                out.push((col, partner));
            }
        }
    }
    out
}

/// Primary, secondary and unusable columns of an elimination result.
pub fn classify_columns(r: &RrefResult) -> ColumnClasses {
    let primary: Vec<(usize, usize)> = r
        .pivot_cols
        .iter()
        .copied()
        .zip(r.pivot_rows.iter().copied())
        .collect();
    let mut used = vec![false; r.rref.n_cols()];
    for &(c, _) in &primary {
        used[c] = true;
    }
    for &(c, _) in &r.secondary_cols {
        used[c] = true;
    }
    let unusable = (0..r.rref.n_cols()).filter(|&c| !used[c]).collect();
    ColumnClasses {
        primary,
        secondary: r.secondary_cols.clone(),
        unusable,
    }
}

/// Classifies the columns of an arbitrary matrix by pattern alone: the first
/// column equal to each unit vector `e_r` is primary, the first equal to each
/// `e_0 + e_i` is secondary.
pub fn classify_pattern(m: &BinaryMatrix) -> ColumnClasses {
    let n = m.n_rows();
    let mut unit_seen = vec![false; n];
    let mut primary = Vec::new();
    let mut unusable = Vec::new();
    let secondary = find_secondary(m, &[]);
    for j in 0..m.n_cols() {
        let col = m.column(j);
        if col.count_ones() == 1 {
            let r = col.first_one().unwrap();
            if !std::mem::replace(&mut unit_seen[r], true) {
                primary.push((j, r));
                continue;
            }
        }
        if !secondary.iter().any(|&(c, _)| c == j) {
            unusable.push(j);
        }
    }
    ColumnClasses {
        primary,
        secondary,
        unusable,
    }
}

/// `Rᵀ · v` over GF(2).
pub fn apply_transpose(transform: &BinaryMatrix, v: &BitVector) -> Result<BitVector> {
    transform.transpose_mul_vec(v)
}
