//! Exact rational linear algebra: rank, kernel, image, inverse, products.
//!
//! Matrices are stored as sparse rows of `BigRational` entries. All
//! eliminations are plain Gauss-Jordan over the rationals with a
//! Markowitz-style pivot choice (sparsest column, then sparsest row,
//! preferring unit pivots), which keeps fill-in and coefficient growth low on
//! the structural matrices produced elsewhere in the crate. Every result is
//! exact; there is no floating point anywhere.

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::exec;
use crate::guard;

pub type Rational = BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` as a rational. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse `"p/q"` or `"p"`; rejects malformed strings and zero denominators.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Rational::from_integer(n))
        }
    }
}

type SparseRow = Vec<(usize, Rational)>;

/// Sparse exact matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseRow>,
}

impl RMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        assert_dims(nrows, ncols);
        RMatrix {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        assert_dims(n, n);
        RMatrix {
            nrows: n,
            ncols: n,
            rows: (0..n).map(|i| vec![(i, Rational::one())]).collect(),
        }
    }

    /// Build from dense rows; zero entries are dropped.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert_dims(nrows, ncols);
        let rows = rows
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), ncols, "ragged rows");
                r.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        RMatrix { nrows, ncols, rows }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
    }

    /// Build from `(row, col, value)` triplets; duplicate positions are summed.
    pub fn from_triplets<I>(nrows: usize, ncols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        assert_dims(nrows, ncols);
        let mut rows: Vec<SparseRow> = vec![Vec::new(); nrows];
        for (i, j, v) in triplets {
            assert!(i < nrows && j < ncols, "triplet out of range");
            if !v.is_zero() {
                rows[i].push((j, v));
            }
        }
        for row in &mut rows {
            row.sort_by_key(|&(j, _)| j);
            *row = combine_sorted(std::mem::take(row));
        }
        RMatrix { nrows, ncols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational {
        assert!(i < self.nrows && j < self.ncols, "entry out of range");
        match self.rows[i].binary_search_by_key(&j, |&(c, _)| c) {
            Ok(pos) => self.rows[i][pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn row(&self, i: usize) -> &[(usize, Rational)] {
        &self.rows[i]
    }

    pub fn col(&self, j: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.nrows];
        for (i, row) in self.rows.iter().enumerate() {
            if let Ok(pos) = row.binary_search_by_key(&j, |&(c, _)| c) {
                out[i] = row[pos].1.clone();
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        (0..self.nrows)
            .map(|i| {
                let mut r = vec![Rational::zero(); self.ncols];
                for &(j, ref v) in &self.rows[i] {
                    r[j] = v.clone();
                }
                r
            })
            .collect()
    }

    pub fn transpose(&self) -> RMatrix {
        let mut rows: Vec<SparseRow> = vec![Vec::new(); self.ncols];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, ref v) in row {
                rows[j].push((i, v.clone()));
            }
        }
        RMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            rows,
        }
    }

    pub fn scale(&self, c: &Rational) -> RMatrix {
        if c.is_zero() {
            return RMatrix::zero(self.nrows, self.ncols);
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|(j, v)| (*j, v * c)).collect())
            .collect();
        RMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows,
        }
    }

    pub fn add(&self, other: &RMatrix) -> RMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| row_axpy(a, &Rational::one(), b))
            .collect();
        RMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows,
        }
    }

    pub fn sub(&self, other: &RMatrix) -> RMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let minus_one = -Rational::one();
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| row_axpy(a, &minus_one, b))
            .collect();
        RMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows,
        }
    }

    /// `self * other`, sparse on both sides.
    pub fn mul(&self, other: &RMatrix) -> RMatrix {
        assert_eq!(
            self.ncols, other.nrows,
            "mul shape mismatch: {}x{} * {}x{}",
            self.nrows, self.ncols, other.nrows, other.ncols
        );
        let row_indices: Vec<usize> = (0..self.nrows).collect();
        let rows = exec::map_vec(row_indices, |i| {
            let mut acc: SparseRow = Vec::new();
            for &(k, ref a) in &self.rows[i] {
                acc = row_axpy(&other.rows[k], a, &acc);
            }
            acc
        });
        RMatrix {
            nrows: self.nrows,
            ncols: other.ncols,
            rows,
        }
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.ncols, x.len());
        self.rows
            .iter()
            .map(|row| {
                let mut s = Rational::zero();
                for &(j, ref v) in row {
                    if !x[j].is_zero() {
                        s += v * &x[j];
                    }
                }
                s
            })
            .collect()
    }

    /// Horizontal concatenation.
    pub fn hstack(blocks: &[&RMatrix]) -> RMatrix {
        assert!(!blocks.is_empty());
        let nrows = blocks[0].nrows;
        let ncols = blocks.iter().map(|b| b.ncols).sum();
        assert_dims(nrows, ncols);
        let mut rows: Vec<SparseRow> = vec![Vec::new(); nrows];
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.nrows, nrows, "hstack row mismatch");
            for (i, row) in b.rows.iter().enumerate() {
                rows[i].extend(row.iter().map(|(j, v)| (j + offset, v.clone())));
            }
            offset += b.ncols;
        }
        RMatrix { nrows, ncols, rows }
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        self.eliminate(false, None).pivots.len()
    }

    /// Basis of the kernel as dense column vectors; count = ncols - rank.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let ech = self.eliminate(true, None);
        let mut is_pivot_col = vec![false; self.ncols];
        for &(_, c) in &ech.pivots {
            is_pivot_col[c] = true;
        }
        let mut basis = Vec::new();
        for f in 0..self.ncols {
            if is_pivot_col[f] {
                continue;
            }
            let mut v = vec![Rational::zero(); self.ncols];
            v[f] = Rational::one();
            for &(r, c) in &ech.pivots {
                let row = &ech.rows[r];
                if let Ok(pos) = row.binary_search_by_key(&f, |&(j, _)| j) {
                    let pivot_val = row
                        .binary_search_by_key(&c, |&(j, _)| j)
                        .map(|p| row[p].1.clone())
                        .expect("pivot entry present");
                    v[c] = -&row[pos].1 / pivot_val;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Independent spanning set of the column space, taken from the original
    /// columns; count = rank.
    pub fn image_basis(&self) -> Vec<Vec<Rational>> {
        let ech = self.eliminate(false, None);
        let mut cols: Vec<usize> = ech.pivots.iter().map(|&(_, c)| c).collect();
        cols.sort_unstable();
        cols.into_iter().map(|c| self.col(c)).collect()
    }

    /// Exact inverse, or `None` if singular.
    pub fn invert(&self) -> Option<RMatrix> {
        assert_eq!(self.nrows, self.ncols, "invert needs a square matrix");
        let n = self.nrows;
        let mut aug = self.clone();
        aug.ncols = 2 * n;
        for (i, row) in aug.rows.iter_mut().enumerate() {
            row.push((n + i, Rational::one()));
        }
        // pivots restricted to the original columns
        let ech = aug.eliminate(true, Some(n));
        if ech.pivots.len() != n {
            return None;
        }
        let mut rows: Vec<SparseRow> = vec![Vec::new(); n];
        for &(r, c) in &ech.pivots {
            let row = &ech.rows[r];
            let pivot_val = row
                .binary_search_by_key(&c, |&(j, _)| j)
                .map(|p| row[p].1.clone())
                .expect("pivot entry present");
            rows[c] = row
                .iter()
                .filter(|&&(j, _)| j >= n)
                .map(|(j, v)| (j - n, v / &pivot_val))
                .collect();
        }
        Some(RMatrix {
            nrows: n,
            ncols: n,
            rows,
        })
    }

    /// Gauss-Jordan elimination. With `full`, pivot columns are cleared from
    /// earlier pivot rows as well, leaving a solved form suitable for kernel
    /// and inverse extraction. `col_limit` restricts pivot choice to the
    /// leading columns (entries beyond are carried along untouched).
    fn eliminate(&self, full: bool, col_limit: Option<usize>) -> Echelon {
        let mut rows = self.rows.clone();
        let nrows = self.nrows;
        let ncols = self.ncols;
        let pivot_cols_end = col_limit.unwrap_or(ncols).min(ncols);
        // col_counts[c]: nonzeros at column c among non-pivot rows.
        let mut col_counts = vec![0usize; ncols];
        for row in &rows {
            for &(j, _) in row {
                col_counts[j] += 1;
            }
        }
        let mut is_pivot_row = vec![false; nrows];
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut marked = vec![false; nrows];
        let mut factors: Vec<Option<Rational>> = vec![None; nrows];

        loop {
            // Sparsest nonempty column.
            let mut best_col: Option<(usize, usize)> = None;
            for (c, &cnt) in col_counts.iter().enumerate().take(pivot_cols_end) {
                if cnt > 0 && best_col.map_or(true, |(bc, _)| cnt < bc) {
                    best_col = Some((cnt, c));
                    if cnt == 1 {
                        break;
                    }
                }
            }
            let Some((_, col)) = best_col else { break };

            // Sparsest candidate row at that column, preferring unit pivots.
            let mut pivot: Option<(usize, usize, bool)> = None;
            for (r, row) in rows.iter().enumerate() {
                if is_pivot_row[r] {
                    continue;
                }
                if let Ok(pos) = row.binary_search_by_key(&col, |&(j, _)| j) {
                    let v = &row[pos].1;
                    let unit = v.numer().abs().is_one() && v.denom().is_one();
                    let better = match pivot {
                        None => true,
                        Some((_, len, punit)) => {
                            (unit && !punit) || (unit == punit && row.len() < len)
                        }
                    };
                    if better {
                        pivot = Some((r, row.len(), unit));
                    }
                }
            }
            let (prow, _, _) = pivot.expect("column count said an entry exists");

            is_pivot_row[prow] = true;
            for &(j, _) in &rows[prow] {
                col_counts[j] -= 1;
            }
            let pivot_val = rows[prow]
                .binary_search_by_key(&col, |&(j, _)| j)
                .map(|p| rows[prow][p].1.clone())
                .expect("pivot entry present");

            // Rows to update: everything else with an entry at `col`. Only
            // non-pivot rows contribute to the counts.
            for r in 0..nrows {
                marked[r] = false;
                factors[r] = None;
            }
            for (r, row) in rows.iter().enumerate() {
                if r == prow || (!full && is_pivot_row[r]) {
                    continue;
                }
                if let Ok(pos) = row.binary_search_by_key(&col, |&(j, _)| j) {
                    marked[r] = true;
                    factors[r] = Some(-&row[pos].1 / &pivot_val);
                    if !is_pivot_row[r] {
                        for &(j, _) in row {
                            col_counts[j] -= 1;
                        }
                    }
                }
            }
            let pivot_row = std::mem::take(&mut rows[prow]);
            exec::for_each_marked(&mut rows, &marked, |r, row| {
                let f = factors[r].as_ref().expect("factor for marked row");
                *row = row_axpy(&pivot_row, f, row);
            });
            for (r, row) in rows.iter().enumerate() {
                if marked[r] && !is_pivot_row[r] {
                    for &(j, _) in row {
                        col_counts[j] += 1;
                    }
                }
            }
            rows[prow] = pivot_row;
            pivots.push((prow, col));
        }
        Echelon { rows, pivots }
    }
}

struct Echelon {
    rows: Vec<SparseRow>,
    pivots: Vec<(usize, usize)>,
}

fn assert_dims(nrows: usize, ncols: usize) {
    let limit = guard::max_cell_dim();
    assert!(
        nrows <= limit && ncols <= limit,
        "matrix of shape {nrows}x{ncols} exceeds the cell guard {limit}"
    );
}

/// Merge duplicate columns of a sorted row, dropping zeros.
fn combine_sorted(row: SparseRow) -> SparseRow {
    let mut out: SparseRow = Vec::with_capacity(row.len());
    for (j, v) in row {
        match out.last_mut() {
            Some((last, acc)) if *last == j => *acc += v,
            _ => out.push((j, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// `a * f + b` on sorted sparse rows.
fn row_axpy(a: &SparseRow, f: &Rational, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&(ca, ref va)), Some(&(cb, ref vb))) => {
                if ca < cb {
                    out.push((ca, va * f));
                    i += 1;
                } else if cb < ca {
                    out.push((cb, vb.clone()));
                    j += 1;
                } else {
                    let v = va * f + vb;
                    if !v.is_zero() {
                        out.push((ca, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            (Some(&(ca, ref va)), None) => {
                out.push((ca, va * f));
                i += 1;
            }
            (None, Some(&(cb, ref vb))) => {
                out.push((cb, vb.clone()));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_zero_and_identity() {
        assert_eq!(RMatrix::zero(3, 3).rank(), 0);
        assert_eq!(RMatrix::identity(4).rank(), 4);
    }

    #[test]
    fn rank_of_dependent_rows() {
        let m = RMatrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(RMatrix::identity(3).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_zero_map() {
        let basis = RMatrix::zero(2, 3).kernel_basis();
        assert_eq!(basis.len(), 3);
        let m = RMatrix::from_rows(basis);
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn kernel_of_row_sum() {
        let m = RMatrix::from_int_rows(&[&[1, 1]]);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 1);
        // forced up to scale: proportional to (1, -1)
        let v = &basis[0];
        assert_eq!(v[0], -v[1].clone());
        assert!(!v[0].is_zero());
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = RMatrix::from_int_rows(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        for v in m.kernel_basis() {
            assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
        assert_eq!(m.rank() + m.kernel_basis().len(), 3);
    }

    #[test]
    fn image_basis_spans_column_space() {
        let m = RMatrix::from_int_rows(&[
            &[1, 2, 3, 5],
            &[2, 4, 6, 10],
            &[0, 1, 1, 2],
            &[1, 3, 4, 7],
        ]);
        let basis = m.image_basis();
        assert_eq!(basis.len(), m.rank());
        let b = RMatrix::from_rows(basis).transpose();
        let joined = RMatrix::hstack(&[&b, &m]);
        assert_eq!(joined.rank(), m.rank());
    }

    #[test]
    fn image_of_zero_and_identity() {
        assert!(RMatrix::zero(2, 2).image_basis().is_empty());
        let basis = RMatrix::identity(3).image_basis();
        assert_eq!(basis.len(), 3);
        for (i, v) in basis.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(*x, if i == j { rat(1) } else { rat(0) });
            }
        }
    }

    #[test]
    fn invert_round_trip() {
        let m = RMatrix::from_int_rows(&[&[2, 1], &[1, 1]]);
        let inv = m.invert().unwrap();
        assert_eq!(m.mul(&inv), RMatrix::identity(2));
        assert_eq!(inv.mul(&m), RMatrix::identity(2));
        let singular = RMatrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert!(singular.invert().is_none());
    }

    #[test]
    fn empty_shapes() {
        let m = RMatrix::zero(0, 4);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.kernel_basis().len(), 4);
        let m = RMatrix::zero(4, 0);
        assert_eq!(m.rank(), 0);
        assert!(m.kernel_basis().is_empty());
    }

    #[test]
    fn parse_rational_strings() {
        assert_eq!(parse_rational("3/4"), Some(ratio(3, 4)));
        assert_eq!(parse_rational("-5"), Some(rat(-5)));
        assert_eq!(parse_rational(" 7 / 2 "), Some(ratio(7, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("a"), None);
        assert_eq!(parse_rational("6/4"), Some(ratio(3, 2)));
    }

    #[test]
    fn mul_matches_dense() {
        let a = RMatrix::from_int_rows(&[&[1, 0, 2], &[0, 3, 0]]);
        let b = RMatrix::from_int_rows(&[&[1, 1], &[0, 2], &[5, 0]]);
        let c = a.mul(&b);
        assert_eq!(c.entry(0, 0), rat(11));
        assert_eq!(c.entry(0, 1), rat(1));
        assert_eq!(c.entry(1, 0), rat(0));
        assert_eq!(c.entry(1, 1), rat(6));
    }
}
