//! Exact linear algebra over the rationals.
//!
//! Everything downstream — graph quotients, invariant-subspace dimensions,
//! Magnus expansions — reduces to row operations on sparse matrices with
//! arbitrary-precision rational entries. This module provides:
//!
//! * [`Rational`] — an exact rational number (arbitrary-precision numerator
//!   and denominator, always in lowest terms).
//! * [`SparseVector`] — a map from column index to nonzero coefficient.
//! * [`SparseMatrix`] — a row list with a fixed column count.
//! * [`rref`] — reduced row echelon form with a deterministic pivot rule:
//!   lowest-index pivot column first; among candidate rows the sparsest
//!   (fewest stored nonzeros) wins, ties broken by lowest row position.
//! * [`kernel_basis`] — null-space basis in "identity at free columns" form:
//!   the basis vector for free column `f` has coefficient 1 at `f`, the
//!   back-substituted value at each pivot column, and 0 at all other free
//!   columns. Coordinates of an arbitrary kernel vector in this basis can
//!   therefore be read off at the free columns.
//! * [`quotient_dim`] — dimension of `span(generators) / span(relations)`
//!   computed as `rank(G ∪ R) − rank(R)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

// ===== Rational =====

/// An exact rational number.
///
/// Thin wrapper over an arbitrary-precision fraction, always reduced.
/// Displays as `p` for integers and `p/q` otherwise; [`Rational::as_fraction`]
/// always produces `p/q`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// The number 0.
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    /// The number 1.
    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// `n/d` in lowest terms. Panics if `d == 0`.
    pub fn frac(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// `n/d` from big integers in lowest terms. Panics if `d == 0`.
    pub fn big_frac(n: BigInt, d: BigInt) -> Self {
        assert!(!d.is_zero(), "zero denominator");
        Rational(BigRational::new(n, d))
    }

    /// True iff this is 0.
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// True iff this is an integer.
    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Multiplicative inverse. Panics on 0.
    pub fn inverse(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Rational(self.0.recip())
    }

    /// Numerator (of the reduced form; sign lives here).
    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Denominator (of the reduced form; always positive).
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Sign as -1, 0, or 1.
    pub fn signum(&self) -> i32 {
        if self.0.is_zero() {
            0
        } else if self.0.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Always-two-part rendering `p/q`, e.g. `3/1`, `-1/2`.
    pub fn as_fraction(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    // Delegates to Display: rationals read better unquoted inside larger
    // structures.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Parses `p` or `p/q` (optional leading `-`).
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n = BigInt::from_str(n.trim())
            .map_err(|_| Error::invalid(format!("bad numerator in rational `{s}`")))?;
        let d = BigInt::from_str(d.trim())
            .map_err(|_| Error::invalid(format!("bad denominator in rational `{s}`")))?;
        if d.is_zero() {
            return Err(Error::invalid(format!("zero denominator in rational `{s}`")));
        }
        Ok(Rational(BigRational::new(n, d)))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

// ===== SparseVector =====

/// A sparse rational vector: stored entries are exactly the nonzero ones.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseVector {
    entries: BTreeMap<usize, Rational>,
}

impl SparseVector {
    /// The zero vector.
    pub fn new() -> Self {
        SparseVector { entries: BTreeMap::new() }
    }

    /// Builds from `(index, value)` pairs, dropping zeros and summing repeats.
    pub fn from_entries<I: IntoIterator<Item = (usize, Rational)>>(iter: I) -> Self {
        let mut v = SparseVector::new();
        for (i, c) in iter {
            v.add_to(i, &c);
        }
        v
    }

    /// Coefficient at `index` (zero if absent).
    pub fn get(&self, index: usize) -> Rational {
        self.entries.get(&index).cloned().unwrap_or_else(Rational::zero)
    }

    /// Sets the coefficient at `index`, removing the entry if zero.
    pub fn set(&mut self, index: usize, value: Rational) {
        if value.is_zero() {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, value);
        }
    }

    /// Adds `value` to the coefficient at `index`.
    pub fn add_to(&mut self, index: usize, value: &Rational) {
        if value.is_zero() {
            return;
        }
        let mut c = self.get(index);
        c += value;
        self.set(index, c);
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// True iff the vector is zero.
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Index of the first nonzero entry.
    pub fn leading_index(&self) -> Option<usize> {
        self.entries.keys().next().copied()
    }

    /// Iterates `(index, coefficient)` in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    /// Multiplies every entry by `c` in place.
    pub fn scale(&mut self, c: &Rational) {
        if c.is_zero() {
            self.entries.clear();
            return;
        }
        for v in self.entries.values_mut() {
            *v = &*v * c;
        }
    }

    /// Adds `c * other` to `self` in place.
    pub fn add_scaled(&mut self, other: &SparseVector, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (i, v) in other.iter() {
            self.add_to(i, &(v * c));
        }
    }

    /// Exact dot product with another vector.
    pub fn dot(&self, other: &SparseVector) -> Rational {
        // Iterate over the sparser of the two.
        let (a, b) = if self.nnz() <= other.nnz() { (self, other) } else { (other, self) };
        let mut acc = Rational::zero();
        for (i, c) in a.iter() {
            if let Some(d) = b.entries.get(&i) {
                acc += &(c * d);
            }
        }
        acc
    }
}

impl FromIterator<(usize, Rational)> for SparseVector {
    fn from_iter<I: IntoIterator<Item = (usize, Rational)>>(iter: I) -> Self {
        SparseVector::from_entries(iter)
    }
}

// ===== SparseMatrix =====

/// A sparse rational matrix: a list of sparse rows with a fixed column count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    ncols: usize,
    rows: Vec<SparseVector>,
}

impl SparseMatrix {
    /// Empty matrix with `ncols` columns and no rows.
    pub fn new(ncols: usize) -> Self {
        SparseMatrix { ncols, rows: Vec::new() }
    }

    /// Builds from rows; every row's indices must be `< ncols`.
    pub fn from_rows(ncols: usize, rows: Vec<SparseVector>) -> Self {
        let ok = rows.iter().all(|r| r.iter().all(|(i, _)| i < ncols));
        assert!(ok, "row index out of range for {ncols} columns");
        SparseMatrix { ncols, rows }
    }

    /// Appends a row. Panics if an index is out of range.
    pub fn push_row(&mut self, row: SparseVector) {
        assert!(
            row.iter().all(|(i, _)| i < self.ncols),
            "row index out of range for {} columns",
            self.ncols
        );
        self.rows.push(row);
    }

    /// Number of columns.
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Number of rows.
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Borrow the rows.
    pub fn rows(&self) -> &[SparseVector] {
        &self.rows
    }

    /// Matrix-vector product `M v`, producing one coefficient per row.
    pub fn apply(&self, v: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (r, row) in self.rows.iter().enumerate() {
            let c = row.dot(v);
            if !c.is_zero() {
                out.set(r, c);
            }
        }
        out
    }
}

// ===== rref / kernel / quotient =====

/// Result of [`rref`]: the reduced matrix, its rank, and the pivot columns
/// (in increasing order; `pivot_cols[r]` is the pivot column of row `r`).
#[derive(Clone, Debug)]
pub struct Rref {
    /// The reduced row echelon form with zero rows removed.
    pub matrix: SparseMatrix,
    /// Number of nonzero rows (= number of pivots).
    pub rank: usize,
    /// Pivot column of each nonzero row, strictly increasing.
    pub pivot_cols: Vec<usize>,
}

/// Reduced row echelon form with a deterministic pivot rule.
///
/// Columns are processed left to right. For each column, the candidate pivot
/// rows are the not-yet-pivoted rows with a nonzero entry there; the one with
/// the fewest stored nonzeros is chosen, ties broken by lowest current row
/// position. The pivot row is normalized to leading coefficient 1 and the
/// pivot column is eliminated from every other row. Zero rows are dropped
/// from the result.
pub fn rref(matrix: &SparseMatrix) -> Rref {
    let ncols = matrix.ncols;
    let mut rows: Vec<SparseVector> = matrix.rows.clone();
    let mut pivot_cols = Vec::new();
    let mut next = 0usize; // rows[..next] are placed pivot rows

    for col in 0..ncols {
        let mut best: Option<usize> = None;
        for (r, row) in rows.iter().enumerate().skip(next) {
            if !row.get(col).is_zero() {
                best = match best {
                    None => Some(r),
                    Some(b) if row.nnz() < rows[b].nnz() => Some(r),
                    keep => keep,
                };
            }
        }
        let Some(r) = best else { continue };
        rows.swap(next, r);
        let inv = rows[next].get(col).inverse();
        rows[next].scale(&inv);
        let pivot_row = rows[next].clone();
        for (rr, row) in rows.iter_mut().enumerate() {
            if rr == next {
                continue;
            }
            let c = row.get(col);
            if !c.is_zero() {
                row.add_scaled(&pivot_row, &-c);
            }
        }
        pivot_cols.push(col);
        next += 1;
    }

    rows.truncate(next);
    debug_assert!(rows.iter().all(|r| !r.is_zero()));
    Rref { matrix: SparseMatrix { ncols, rows }, rank: next, pivot_cols }
}

/// Basis of the null space `{v : Mv = 0}` in "identity at free columns" form.
///
/// One basis vector per free (non-pivot) column `f`, in increasing `f` order:
/// coefficient 1 at `f`, `−R[r][f]` at the pivot column of each rref row `r`,
/// and 0 at every other free column. Consequently the coordinates of any
/// kernel vector in this basis are its values at the free columns.
pub fn kernel_basis(matrix: &SparseMatrix) -> Vec<SparseVector> {
    let reduced = rref(matrix);
    let ncols = matrix.ncols;
    let is_pivot = {
        let mut mask = vec![false; ncols];
        for &c in &reduced.pivot_cols {
            mask[c] = true;
        }
        mask
    };

    let mut basis = Vec::with_capacity(ncols - reduced.rank);
    for f in (0..ncols).filter(|&f| !is_pivot[f]) {
        let mut v = SparseVector::new();
        v.set(f, Rational::one());
        for (r, &p) in reduced.pivot_cols.iter().enumerate() {
            let c = reduced.matrix.rows[r].get(f);
            if !c.is_zero() {
                v.set(p, -c);
            }
        }
        basis.push(v);
    }
    basis
}

/// Rank of a family of sparse vectors, touching only columns that actually
/// occur (suitable for huge ambient dimensions, e.g. linearized tensor
/// indices).
///
/// Classic sparse elimination: repeatedly extract the row with the smallest
/// leading index (fewest nonzeros on ties) and eliminate its leading column
/// from the rest.
pub fn rank_of_rows(rows: Vec<SparseVector>) -> usize {
    let mut rows: Vec<SparseVector> = rows.into_iter().filter(|r| !r.is_zero()).collect();
    let mut rank = 0usize;
    while !rows.is_empty() {
        let mut best = 0usize;
        for i in 1..rows.len() {
            let (li, lb) = (rows[i].leading_index(), rows[best].leading_index());
            if li < lb || (li == lb && rows[i].nnz() < rows[best].nnz()) {
                best = i;
            }
        }
        let pivot = rows.swap_remove(best);
        let lead = pivot.leading_index().expect("zero rows were filtered");
        let lead_inv = pivot.get(lead).inverse();
        rank += 1;
        for row in &mut rows {
            let c = row.get(lead);
            if !c.is_zero() {
                row.add_scaled(&pivot, &-(c * lead_inv.clone()));
            }
        }
        rows.retain(|r| !r.is_zero());
    }
    rank
}

/// Dimension of `span(generators) / span(relations)`, computed as
/// `rank(generators ∪ relations) − rank(relations)`.
///
/// Both families live in the same ambient coordinate space; `relations` need
/// not be contained in `span(generators)` set-theoretically — the formula
/// computes the dimension of the image of the generators in the quotient by
/// the relation span, which is what every quotient-space dimension here means.
pub fn quotient_dim(generators: &SparseMatrix, relations: &SparseMatrix) -> usize {
    assert_eq!(
        generators.ncols, relations.ncols,
        "generators and relations must share a coordinate space"
    );
    let rel_rank = rref(relations).rank;
    let mut combined = relations.clone();
    for row in &generators.rows {
        combined.push_row(row.clone());
    }
    rref(&combined).rank - rel_rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    fn vecf(entries: &[(usize, i64)]) -> SparseVector {
        entries.iter().map(|&(i, c)| (i, Rational::from(c))).collect()
    }

    #[test]
    fn rational_arithmetic_and_parsing() {
        assert_eq!(q(1, 2) + q(1, 3), q(5, 6));
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(1, 2).inverse(), q(2, 1));
        assert_eq!("-3/6".parse::<Rational>().unwrap(), q(-1, 2));
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::from(7));
        assert_eq!(q(-1, 2).as_fraction(), "-1/2");
        assert_eq!(format!("{}", q(6, 3)), "2");
        assert!("1/0".parse::<Rational>().is_err());
    }

    #[test]
    fn rref_reduces_a_dependent_system() {
        // Rows: (1,2,3), (2,4,6), (0,1,1) over 3 columns. Rank 2.
        let m = SparseMatrix::from_rows(
            3,
            vec![vecf(&[(0, 1), (1, 2), (2, 3)]), vecf(&[(0, 2), (1, 4), (2, 6)]), vecf(&[(1, 1), (2, 1)])],
        );
        let r = rref(&m);
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivot_cols, vec![0, 1]);
        // Reduced rows: (1,0,1), (0,1,1).
        assert_eq!(r.matrix.rows()[0], vecf(&[(0, 1), (2, 1)]));
        assert_eq!(r.matrix.rows()[1], vecf(&[(1, 1), (2, 1)]));
    }

    #[test]
    fn rref_pivot_rule_prefers_sparser_rows() {
        // Both rows have a nonzero in column 0; the second is sparser.
        let m = SparseMatrix::from_rows(3, vec![vecf(&[(0, 1), (1, 1), (2, 1)]), vecf(&[(0, 2)])]);
        let r = rref(&m);
        // Sparse row becomes the first pivot row (normalized to e_0),
        // and eliminates column 0 from the dense row.
        assert_eq!(r.matrix.rows()[0], vecf(&[(0, 1)]));
        assert_eq!(r.matrix.rows()[1], vecf(&[(1, 1), (2, 1)]));
    }

    #[test]
    fn kernel_has_identity_at_free_columns() {
        // x0 + x1 + x2 = 0 over 3 columns: kernel dim 2, free cols 1 and 2.
        let m = SparseMatrix::from_rows(3, vec![vecf(&[(0, 1), (1, 1), (2, 1)])]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        assert_eq!(k[0], vecf(&[(0, -1), (1, 1)]));
        assert_eq!(k[1], vecf(&[(0, -1), (2, 1)]));
        for v in &k {
            assert!(m.apply(v).is_zero());
        }
    }

    #[test]
    fn quotient_dim_counts_surviving_generators() {
        // Generators e0, e1, e2; relation e0 − e1. Quotient has dimension 2.
        let gens = SparseMatrix::from_rows(3, vec![vecf(&[(0, 1)]), vecf(&[(1, 1)]), vecf(&[(2, 1)])]);
        let rels = SparseMatrix::from_rows(3, vec![vecf(&[(0, 1), (1, -1)])]);
        assert_eq!(quotient_dim(&gens, &rels), 2);
        // Relations alone (generators zero) give dimension 0.
        let none = SparseMatrix::new(3);
        assert_eq!(quotient_dim(&none, &rels), 0);
    }

    #[test]
    fn rank_plus_nullity_is_column_count() {
        let m = SparseMatrix::from_rows(
            4,
            vec![vecf(&[(0, 1), (3, -2)]), vecf(&[(1, 5), (2, 1), (3, 1)]), vecf(&[(0, 2), (3, -4)])],
        );
        let r = rref(&m);
        let k = kernel_basis(&m);
        assert_eq!(r.rank + k.len(), m.ncols());
    }

    #[test]
    fn rank_of_rows_handles_huge_column_indices() {
        let big = 1_000_000_000_000usize;
        let rows = vec![
            vecf(&[(big, 1), (big + 7, 2)]),
            vecf(&[(big, 2), (big + 7, 4)]),
            vecf(&[(3, 1), (big + 7, 1)]),
            SparseVector::new(),
        ];
        assert_eq!(rank_of_rows(rows), 2);
    }
}
