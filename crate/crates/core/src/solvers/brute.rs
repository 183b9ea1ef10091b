use std::time::Instant;

use rayon::prelude::*;

use super::{sort_desc_into, Instance, ScheduleSolution, SolverKind};
use crate::error::{Error, Result};
use crate::favorability::{lexicographically_less, FavorabilityVector};

/// Largest N accepted by [`brute_force_schedule`]; 11! orders are enumerated.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 12;

/// Bit-parallel zero runs need the doubled row to fit in a `u64`.
const MAX_CAP: usize = 32;

/// Exact lexicographic minimum over all column orders, with the default cap.
pub fn brute_force_schedule(vectors: &[FavorabilityVector]) -> Result<ScheduleSolution> {
    brute_force_schedule_with_cap(vectors, DEFAULT_BRUTE_FORCE_CAP)
}

/// Exact search with an explicit cap on N.
///
/// The objective is invariant under rotation of the period, so the first input
/// column is pinned to position 0 and the remaining `(N-1)!` orders are
/// enumerated in lexicographic order of input indices. The first order
/// reaching the minimum wins. Branches on the second position run in parallel
/// and are merged in branch order, which gives the same answer as a
/// sequential walk.
pub fn brute_force_schedule_with_cap(vectors: &[FavorabilityVector], cap: usize) -> Result<ScheduleSolution> {
    let start = Instant::now();
    let cap = cap.min(MAX_CAP);
    if vectors.len() > cap {
        return Err(Error::Capacity { n: vectors.len(), cap });
    }
    let inst = Instance::new(vectors)?;
    let n = inst.n();
    if inst.rows.is_empty() || n <= 2 {
        return inst.solution((0..n).collect(), SolverKind::BruteForce, start.elapsed());
    }

    // columns[c][r]: column c is favorable for reduced row r
    let columns: Vec<Vec<bool>> = (0..n).map(|c| inst.rows.iter().map(|row| row[c]).collect()).collect();

    let best = (1..n)
        .into_par_iter()
        .map(|second| {
            let mut search = Search::new(&columns, n);
            search.push(0);
            search.push(second);
            search.descend();
            search.best.expect("every branch has at least one leaf")
        })
        .collect::<Vec<_>>()
        .into_iter()
        .reduce(|incumbent, candidate| {
            if lexicographically_less(&candidate.0, &incumbent.0).unwrap_or(false) {
                candidate
            } else {
                incumbent
            }
        })
        .expect("n > 2 gives at least one branch");

    inst.solution(best.1, SolverKind::BruteForce, start.elapsed())
}

struct Search<'a> {
    columns: &'a [Vec<bool>],
    n: usize,
    order: Vec<usize>,
    used: Vec<bool>,
    /// Per reduced row, bit `d` set when the column at depth `d` is favorable.
    masks: Vec<u64>,
    scratch: Vec<usize>,
    best: Option<(Vec<usize>, Vec<usize>)>,
}

impl<'a> Search<'a> {
    fn new(columns: &'a [Vec<bool>], n: usize) -> Self {
        let m = columns[0].len();
        Self {
            columns,
            n,
            order: Vec::with_capacity(n),
            used: vec![false; n],
            masks: vec![0; m],
            scratch: Vec::with_capacity(m),
            best: None,
        }
    }

    fn push(&mut self, c: usize) {
        let depth = self.order.len();
        for (mask, &fav) in self.masks.iter_mut().zip(&self.columns[c]) {
            if fav {
                *mask |= 1 << depth;
            }
        }
        self.used[c] = true;
        self.order.push(c);
    }

    fn pop(&mut self) {
        let c = self.order.pop().expect("pop on empty order");
        let depth = self.order.len();
        for mask in &mut self.masks {
            *mask &= !(1 << depth);
        }
        self.used[c] = false;
    }

    fn descend(&mut self) {
        if self.order.len() == self.n {
            self.leaf();
            return;
        }
        for c in 1..self.n {
            if !self.used[c] {
                self.push(c);
                self.descend();
                self.pop();
            }
        }
    }

    fn leaf(&mut self) {
        let n = self.n;
        let mut scratch = std::mem::take(&mut self.scratch);
        sort_desc_into(&mut scratch, self.masks.iter().map(|&m| circular_zero_run_mask(m, n)));
        let better = match &self.best {
            None => true,
            Some((objective, _)) => lexicographically_less(&scratch, objective).unwrap_or(false),
        };
        if better {
            self.best = Some((scratch.clone(), self.order.clone()));
        }
        self.scratch = scratch;
    }
}

/// Longest circular zero run of the low `n` bits of `ones`.
fn circular_zero_run_mask(ones: u64, n: usize) -> usize {
    if ones == 0 {
        return n;
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let zeros = !ones & full;
    let mut run = zeros | (zeros << n);
    let mut len = 0;
    while run != 0 {
        run &= run << 1;
        len += 1;
    }
    len
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::favorability::{max_circular_zero_run, FavorabilityMatrix};
    use proptest::prelude::*;

    fn vectors(cols: &[Vec<u8>]) -> Vec<FavorabilityVector> {
        FavorabilityMatrix::from_columns(cols).unwrap().columns().to_vec()
    }

    #[test]
    fn alternating_instance() {
        let v = vectors(&[vec![1, 0], vec![0, 1], vec![1, 0], vec![0, 1]]);
        let sol = brute_force_schedule(&v).unwrap();
        assert_eq!(sol.objective.values(), &[1, 1]);
        assert_eq!(sol.order, vec![0, 1, 2, 3]);
        assert_eq!(sol.solver, SolverKind::BruteForce);
    }

    #[test]
    fn single_and_identical() {
        let sol = brute_force_schedule(&vectors(&[vec![1, 0]])).unwrap();
        assert_eq!(sol.order, vec![0]);
        assert_eq!(sol.objective.values(), &[1, 0]);

        let sol = brute_force_schedule(&vectors(&[vec![1, 0], vec![1, 0], vec![1, 0]])).unwrap();
        assert_eq!(sol.objective.values(), &[3, 0]);
        assert_eq!(sol.order, vec![0, 1, 2]);
    }

    #[test]
    fn refuses_above_cap() {
        let cols: Vec<Vec<u8>> = (0..13).map(|i| vec![(i % 2) as u8]).collect();
        let err = brute_force_schedule(&vectors(&cols)).unwrap_err();
        assert!(matches!(err, Error::Capacity { n: 13, cap: 12 }));
        let err = brute_force_schedule_with_cap(&vectors(&cols[..5]), 4).unwrap_err();
        assert!(matches!(err, Error::Capacity { n: 5, cap: 4 }));
    }

    #[test]
    fn empty_input_is_invalid() {
        assert!(matches!(brute_force_schedule(&[]), Err(Error::InvalidInput(_))));
    }

    proptest! {
        #[test]
        fn mask_runs_match_slice_runs(bits in proptest::collection::vec(any::<bool>(), 1..32)) {
            let mask = bits.iter().enumerate().fold(0u64, |m, (k, &b)| if b { m | 1 << k } else { m });
            prop_assert_eq!(circular_zero_run_mask(mask, bits.len()), max_circular_zero_run(&bits).unwrap());
        }
    }
}
