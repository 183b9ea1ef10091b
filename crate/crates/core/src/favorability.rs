//! Favorability data model and the schedule objective.
//!
//! A [`FavorabilityVector`] describes one non-RTA station: entry `j` is set when
//! that station's trigger-based uplink gives RTA station `j` a usable PSR
//! opportunity. Concatenating the vectors in transmission order gives a
//! [`FavorabilityMatrix`], one schedule period. Since the period repeats, row
//! `j` of the matrix is read circularly, and its longest circular run of zeros
//! is the longest stretch of uplinks during which RTA station `j` cannot use PSR.
//!
//! The objective of a period is the vector of those run lengths sorted in
//! non-increasing order ([`ObjectiveVector`]); periods are compared
//! lexicographically, so the worst-served RTA station is minimized first, then
//! the next, and so on.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary favorability of one non-RTA station towards each RTA station.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FavorabilityVector {
    sta_id: usize,
    entries: Vec<bool>,
}

impl FavorabilityVector {
    pub fn new(sta_id: usize, entries: Vec<bool>) -> Self {
        Self { sta_id, entries }
    }

    /// Builds a vector from `0`/`1` values, rejecting anything else.
    pub fn from_bits(sta_id: usize, bits: &[u8]) -> Result<Self> {
        let entries = bits
            .iter()
            .enumerate()
            .map(|(j, &b)| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::invalid(format!(
                    "favorability entry {j} of station {sta_id} is {other}, expected 0 or 1"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { sta_id, entries })
    }

    pub fn sta_id(&self) -> usize {
        self.sta_id
    }

    pub fn entries(&self) -> &[bool] {
        &self.entries
    }

    pub fn get(&self, rta: usize) -> bool {
        self.entries[rta]
    }

    /// Number of RTA stations (M).
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.entries.iter().filter(|&&e| e).count()
    }

    pub fn bits(&self) -> Vec<u8> {
        self.entries.iter().map(|&e| u8::from(e)).collect()
    }
}

/// Ordered concatenation of favorability vectors; the column order is the
/// transmission order of the non-RTA stations within one period.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FavorabilityMatrix {
    columns: Vec<FavorabilityVector>,
    rows: usize,
}

impl FavorabilityMatrix {
    /// All columns must have the same length. An empty column list gives a
    /// matrix with zero rows.
    pub fn new(columns: Vec<FavorabilityVector>) -> Result<Self> {
        let rows = columns.first().map_or(0, FavorabilityVector::len);
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::invalid(format!(
                "favorability vector of station {} has length {}, expected {rows}",
                bad.sta_id,
                bad.len()
            )));
        }
        Ok(Self { columns, rows })
    }

    /// Builds a matrix from row-major `0`/`1` data; column `i` gets station id `i`.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if let Some((j, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::invalid(format!(
                "row {j} has {} entries, expected {n}",
                row.len()
            )));
        }
        let columns = (0..n)
            .map(|i| {
                let bits: Vec<u8> = rows.iter().map(|r| r[i]).collect();
                FavorabilityVector::from_bits(i, &bits)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut m = Self::new(columns)?;
        m.rows = rows.len();
        Ok(m)
    }

    /// Builds a matrix from column-major `0`/`1` data; column `i` gets station id `i`.
    pub fn from_columns(columns: &[Vec<u8>]) -> Result<Self> {
        let columns = columns
            .iter()
            .enumerate()
            .map(|(i, bits)| FavorabilityVector::from_bits(i, bits))
            .collect::<Result<Vec<_>>>()?;
        Self::new(columns)
    }

    /// Matrix with `n` columns and no rows (no RTA stations).
    pub fn without_rows(n: usize) -> Self {
        let columns = (0..n).map(|i| FavorabilityVector::new(i, Vec::new())).collect();
        Self { columns, rows: 0 }
    }

    /// Number of columns (N).
    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    /// Number of rows (M).
    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn columns(&self) -> &[FavorabilityVector] {
        &self.columns
    }

    pub fn column(&self, i: usize) -> &FavorabilityVector {
        &self.columns[i]
    }

    pub fn entry(&self, row: usize, col: usize) -> bool {
        self.columns[col].entries[row]
    }

    pub fn row(&self, row: usize) -> Vec<bool> {
        self.columns.iter().map(|c| c.entries[row]).collect()
    }

    pub fn rows(&self) -> Vec<Vec<bool>> {
        (0..self.rows).map(|j| self.row(j)).collect()
    }

    /// Returns the matrix with its columns placed in `order` (indices into the
    /// current column list). `order` must be a permutation.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        check_permutation(order, self.n_cols())?;
        Ok(Self {
            columns: order.iter().map(|&i| self.columns[i].clone()).collect(),
            rows: self.rows,
        })
    }

    /// Keeps only the listed rows, in the listed order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let columns = self
            .columns
            .iter()
            .map(|c| FavorabilityVector::new(c.sta_id, rows.iter().map(|&j| c.entries[j]).collect()))
            .collect();
        Self {
            columns,
            rows: rows.len(),
        }
    }
}

impl fmt::Display for FavorabilityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.rows {
            let line: String = self
                .columns
                .iter()
                .map(|c| if c.entries[j] { '1' } else { '0' })
                .collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

pub(crate) fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::invalid(format!(
            "order has {} entries, expected {n}",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::invalid(format!(
                "order {order:?} is not a permutation of 0..{n}"
            )));
        }
    }
    Ok(())
}

/// Per-row circular zero runs sorted in non-increasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectiveVector(Vec<usize>);

impl ObjectiveVector {
    pub fn from_unsorted(mut values: Vec<usize>) -> Self {
        values.sort_unstable_by(|a, b| b.cmp(a));
        Self(values)
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// The largest zero run, if there are any rows.
    pub fn leading(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_less_than(&self, other: &Self) -> Result<bool> {
        lexicographically_less(&self.0, &other.0)
    }
}

impl fmt::Display for ObjectiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Longest run of zeros in `row` when the row is repeated periodically.
///
/// Returns 0 for an all-ones row and `row.len()` for an all-zeros row (a
/// station that never gets a PSR opportunity).
pub fn max_circular_zero_run(row: &[bool]) -> Result<usize> {
    let n = row.len();
    if n == 0 {
        return Err(Error::invalid("zero run of an empty row"));
    }
    let Some(first_one) = row.iter().position(|&b| b) else {
        return Ok(n);
    };
    // Walking one full period starting just after a one covers every run of
    // the doubled row [row|row] without splitting any of them.
    let (mut best, mut run) = (0, 0);
    for k in 1..=n {
        if row[(first_one + k) % n] {
            run = 0;
        } else {
            run += 1;
            best = best.max(run);
        }
    }
    Ok(best)
}

/// Zero run of every row, in row order.
pub fn row_zero_runs(f: &FavorabilityMatrix) -> Result<Vec<usize>> {
    if f.n_cols() == 0 {
        return Err(Error::invalid("favorability matrix has no columns"));
    }
    (0..f.n_rows()).map(|j| max_circular_zero_run(&f.row(j))).collect()
}

pub fn objective_vector(f: &FavorabilityMatrix) -> Result<ObjectiveVector> {
    row_zero_runs(f).map(ObjectiveVector::from_unsorted)
}

/// Strict lexicographic comparison: true iff `v` is smaller at the first
/// position where the two differ. Equal vectors compare false.
pub fn lexicographically_less(v: &[usize], w: &[usize]) -> Result<bool> {
    if v.len() != w.len() {
        return Err(Error::invalid(format!(
            "cannot compare objective vectors of lengths {} and {}",
            v.len(),
            w.len()
        )));
    }
    for (a, b) in v.iter().zip(w) {
        if a < b {
            return Ok(true);
        } else if a > b {
            return Ok(false);
        }
    }
    Ok(false)
}

/// What happened to one row of the original matrix during trivial-row removal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowFate {
    /// Kept as the given row of the reduced matrix.
    Kept(usize),
    AllOnes,
    AllZeros,
}

/// Row mapping from a reduced matrix back to the full one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialRows {
    fates: Vec<RowFate>,
    n_cols: usize,
}

impl TrivialRows {
    pub fn fates(&self) -> &[RowFate] {
        &self.fates
    }

    pub fn kept(&self) -> usize {
        self.fates.iter().filter(|f| matches!(f, RowFate::Kept(_))).count()
    }

    /// Zero runs for every original row, given the zero runs of the reduced rows.
    pub fn full_zero_runs(&self, reduced: &[usize]) -> Result<Vec<usize>> {
        if reduced.len() != self.kept() {
            return Err(Error::invalid(format!(
                "expected {} reduced zero runs, got {}",
                self.kept(),
                reduced.len()
            )));
        }
        Ok(self
            .fates
            .iter()
            .map(|fate| match *fate {
                RowFate::Kept(r) => reduced[r],
                RowFate::AllOnes => 0,
                RowFate::AllZeros => self.n_cols,
            })
            .collect())
    }

    pub fn reattach(&self, reduced: &[usize]) -> Result<ObjectiveVector> {
        self.full_zero_runs(reduced).map(ObjectiveVector::from_unsorted)
    }
}

/// Drops rows that are all zeros or all ones; column order cannot change
/// their zero runs.
pub fn strip_trivial_rows(f: &FavorabilityMatrix) -> (FavorabilityMatrix, TrivialRows) {
    let mut kept = Vec::new();
    let fates = (0..f.n_rows())
        .map(|j| {
            let row = f.row(j);
            if row.iter().all(|&b| b) {
                RowFate::AllOnes
            } else if row.iter().all(|&b| !b) {
                RowFate::AllZeros
            } else {
                kept.push(j);
                RowFate::Kept(kept.len() - 1)
            }
        })
        .collect();
    (
        f.select_rows(&kept),
        TrivialRows {
            fates,
            n_cols: f.n_cols(),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(bits: &[u8]) -> Vec<bool> {
        bits.iter().map(|&b| b == 1).collect()
    }

    /// Longest zero run over [row|row|row] among runs that start in the middle copy.
    fn triple_scan(row: &[bool]) -> usize {
        let n = row.len();
        let tripled: Vec<bool> = row.iter().chain(row).chain(row).copied().collect();
        let mut best = 0;
        for start in n..2 * n {
            if tripled[start] || (start > 0 && !tripled[start - 1]) {
                continue;
            }
            let len = tripled[start..].iter().take_while(|&&b| !b).count();
            best = best.max(len);
        }
        best
    }

    #[test]
    fn zero_run_examples() {
        assert_eq!(max_circular_zero_run(&row(&[0, 1, 0, 1, 0, 0])).unwrap(), 3);
        assert_eq!(max_circular_zero_run(&row(&[1, 1, 1])).unwrap(), 0);
        assert_eq!(max_circular_zero_run(&row(&[0, 0, 1, 0])).unwrap(), 3);
        assert_eq!(max_circular_zero_run(&row(&[0, 0, 0])).unwrap(), 3);
        assert_eq!(max_circular_zero_run(&row(&[0])).unwrap(), 1);
        assert_eq!(max_circular_zero_run(&row(&[1])).unwrap(), 0);
        assert!(matches!(max_circular_zero_run(&[]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn objective_examples() {
        let f = FavorabilityMatrix::from_rows(&[vec![1, 0, 1, 0], vec![0, 1, 0, 1]]).unwrap();
        assert_eq!(objective_vector(&f).unwrap().values(), &[1, 1]);

        let f = FavorabilityMatrix::from_columns(&[vec![1, 0]]).unwrap();
        assert_eq!(objective_vector(&f).unwrap().values(), &[1, 0]);

        // rows with Z = 1, 3, 2
        let f = FavorabilityMatrix::from_rows(&[vec![1, 0, 1, 1], vec![1, 0, 0, 0], vec![1, 1, 0, 0]]).unwrap();
        assert_eq!(row_zero_runs(&f).unwrap(), vec![1, 3, 2]);
        assert_eq!(objective_vector(&f).unwrap().values(), &[3, 2, 1]);

        let empty = FavorabilityMatrix::new(Vec::new()).unwrap();
        assert!(objective_vector(&empty).is_err());
    }

    #[test]
    fn lexicographic_examples() {
        assert!(lexicographically_less(&[2, 1], &[2, 2]).unwrap());
        assert!(!lexicographically_less(&[3, 1], &[2, 2]).unwrap());
        assert!(!lexicographically_less(&[2, 2], &[2, 2]).unwrap());
        assert!(lexicographically_less(&[2], &[2, 2]).is_err());
    }

    #[test]
    fn lexicographic_is_strict_weak_order() {
        let space: Vec<Vec<usize>> = (0..3)
            .flat_map(|a| (0..3).flat_map(move |b| (0..3).map(move |c| vec![a, b, c])))
            .collect();
        let less = |a: &Vec<usize>, b: &Vec<usize>| lexicographically_less(a, b).unwrap();
        for a in &space {
            assert!(!less(a, a));
            for b in &space {
                assert!(!(less(a, b) && less(b, a)));
                for c in &space {
                    if less(a, b) && less(b, c) {
                        assert!(less(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn strip_examples() {
        let f = FavorabilityMatrix::from_rows(&[vec![1, 1, 1, 1], vec![0, 1, 0, 1], vec![0, 0, 0, 0]]).unwrap();
        let (reduced, map) = strip_trivial_rows(&f);
        assert_eq!(reduced.rows(), vec![row(&[0, 1, 0, 1])]);
        assert_eq!(map.fates(), &[RowFate::AllOnes, RowFate::Kept(0), RowFate::AllZeros]);
        assert_eq!(map.full_zero_runs(&[1]).unwrap(), vec![0, 1, 4]);

        let f = FavorabilityMatrix::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        let (reduced, map) = strip_trivial_rows(&f);
        assert_eq!(reduced, f);
        assert_eq!(map.fates(), &[RowFate::Kept(0), RowFate::Kept(1)]);

        let f = FavorabilityMatrix::from_rows(&[vec![1, 1], vec![0, 0]]).unwrap();
        let (reduced, map) = strip_trivial_rows(&f);
        assert_eq!(reduced.n_rows(), 0);
        assert_eq!(reduced.n_cols(), 2);
        assert_eq!(map.reattach(&[]).unwrap().values(), &[2, 0]);
    }

    #[test]
    fn rejects_non_binary_and_ragged() {
        assert!(FavorabilityVector::from_bits(0, &[0, 2]).is_err());
        assert!(FavorabilityMatrix::from_columns(&[vec![0, 1], vec![1]]).is_err());
        assert!(FavorabilityMatrix::from_rows(&[vec![0, 1], vec![1]]).is_err());
    }

    #[test]
    fn reordered_checks_permutation() {
        let f = FavorabilityMatrix::from_columns(&[vec![1], vec![0], vec![1]]).unwrap();
        assert!(f.reordered(&[0, 0, 1]).is_err());
        assert!(f.reordered(&[0, 1]).is_err());
        let g = f.reordered(&[2, 1, 0]).unwrap();
        assert_eq!(g.column(0).sta_id(), 2);
    }

    fn matrix_strategy() -> impl Strategy<Value = FavorabilityMatrix> {
        (1usize..8, 0usize..5).prop_flat_map(|(n, m)| {
            proptest::collection::vec(proptest::collection::vec(0u8..2, n), m).prop_map(move |rows| {
                if rows.is_empty() {
                    FavorabilityMatrix::without_rows(n)
                } else {
                    FavorabilityMatrix::from_rows(&rows).unwrap()
                }
            })
        })
    }

    proptest! {
        #[test]
        fn doubled_scan_matches_triple_oracle(bits in proptest::collection::vec(any::<bool>(), 1..40)) {
            let z = max_circular_zero_run(&bits).unwrap();
            let n = bits.len();
            if bits.iter().any(|&b| b) {
                prop_assert_eq!(z, triple_scan(&bits));
                prop_assert!(z < n);
            } else {
                prop_assert_eq!(z, n);
            }
            prop_assert_eq!(z == 0, bits.iter().all(|&b| b));
        }

        #[test]
        fn objective_is_rotation_invariant(f in matrix_strategy(), shift in 0usize..8) {
            let n = f.n_cols();
            let order: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
            let rotated = f.reordered(&order).unwrap();
            prop_assert_eq!(objective_vector(&f).unwrap(), objective_vector(&rotated).unwrap());
        }

        #[test]
        fn strip_then_reattach_matches_full(f in matrix_strategy(), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut order: Vec<usize> = (0..f.n_cols()).collect();
            order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let (reduced, map) = strip_trivial_rows(&f);
            let reduced_runs = row_zero_runs(&reduced.reordered(&order).unwrap()).unwrap();
            let full = objective_vector(&f.reordered(&order).unwrap()).unwrap();
            prop_assert_eq!(map.reattach(&reduced_runs).unwrap(), full);
        }
    }
}
