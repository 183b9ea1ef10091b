use std::time::Instant;

use super::{sort_desc_into, Instance, ScheduleSolution, SolverKind};
use crate::error::Result;
use crate::favorability::{lexicographically_less, FavorabilityVector};

/// Greedy insertion heuristic.
///
/// Starts from the first two vectors in input order. Each further vector is
/// tried after every column of the current order, from the first to the last,
/// and kept where the objective is strictly smallest; ties keep the earliest
/// position. Candidate objectives are evaluated in O(M) per position from
/// per-row run summaries, so the whole pass costs O(M log M * N^2).
pub fn greedy_schedule(vectors: &[FavorabilityVector]) -> Result<ScheduleSolution> {
    let start = Instant::now();
    let inst = Instance::new(vectors)?;
    let n = inst.n();
    if inst.rows.is_empty() || n <= 2 {
        return inst.solution((0..n).collect(), SolverKind::Greedy, start.elapsed());
    }

    let m = inst.rows.len();
    let mut order: Vec<usize> = vec![0, 1];
    let mut summaries: Vec<RowSummary> = (0..m).map(|_| RowSummary::default()).collect();
    let mut candidate = Vec::with_capacity(m);
    let mut best = Vec::with_capacity(m);

    for next in 2..n {
        for (summary, row) in summaries.iter_mut().zip(&inst.rows) {
            summary.rebuild(&order, row);
        }
        let mut best_slot = 0;
        for slot in 0..order.len() {
            sort_desc_into(
                &mut candidate,
                summaries
                    .iter()
                    .zip(&inst.rows)
                    .map(|(s, row)| s.after_insert(slot, row[next])),
            );
            if slot == 0 || lexicographically_less(&candidate, &best)? {
                std::mem::swap(&mut best, &mut candidate);
                best_slot = slot;
            }
        }
        order.insert(best_slot + 1, next);
    }

    inst.solution(order, SolverKind::Greedy, start.elapsed())
}

/// Run structure of one row of the current partial order.
///
/// Slot `s` is the gap right after position `s` (circularly). For each slot
/// we record the zero run it touches, if any, and how many zeros of that run
/// lie before the slot.
#[derive(Default)]
struct RowSummary {
    len: usize,
    any_one: bool,
    run_len: Vec<usize>,
    slot_run: Vec<Option<(usize, usize)>>,
    best: usize,
    best_run: usize,
    second: usize,
    scratch_bits: Vec<bool>,
    scratch_run: Vec<(usize, usize)>,
}

impl RowSummary {
    fn rebuild(&mut self, order: &[usize], row: &[bool]) {
        let len = order.len();
        self.len = len;
        self.run_len.clear();
        self.slot_run.clear();
        self.scratch_bits.clear();
        self.scratch_bits.extend(order.iter().map(|&c| row[c]));
        let bits = &self.scratch_bits;

        let Some(first_one) = bits.iter().position(|&b| b) else {
            self.any_one = false;
            return;
        };
        self.any_one = true;

        // (run id, zeros of the run up to and including this position)
        self.scratch_run.clear();
        self.scratch_run.resize(len, (usize::MAX, 0));
        for k in 1..=len {
            let pos = (first_one + k) % len;
            if bits[pos] {
                continue;
            }
            let prev = (pos + len - 1) % len;
            if bits[prev] {
                self.run_len.push(0);
            }
            let id = self.run_len.len() - 1;
            self.run_len[id] += 1;
            self.scratch_run[pos] = (id, self.run_len[id]);
        }

        for s in 0..len {
            let after = (s + 1) % len;
            let touched = if !bits[s] {
                Some(self.scratch_run[s])
            } else if !bits[after] {
                Some((self.scratch_run[after].0, 0))
            } else {
                None
            };
            self.slot_run.push(touched);
        }

        self.best = 0;
        self.best_run = usize::MAX;
        self.second = 0;
        for (id, &l) in self.run_len.iter().enumerate() {
            if l > self.best {
                self.second = self.best;
                self.best = l;
                self.best_run = id;
            } else if l > self.second {
                self.second = l;
            }
        }
    }

    /// Zero run of the row once a column with value `bit` goes into `slot`.
    fn after_insert(&self, slot: usize, bit: bool) -> usize {
        if !self.any_one {
            // all zeros so far: a one leaves `len` zeros around it
            return if bit { self.len } else { self.len + 1 };
        }
        match (self.slot_run[slot], bit) {
            (None, false) => self.best.max(1),
            (None, true) => self.best,
            (Some((run, _)), false) => self.best.max(self.run_len[run] + 1),
            (Some((run, before)), true) => {
                let others = if run == self.best_run { self.second } else { self.best };
                others.max(before).max(self.run_len[run] - before)
            }
        }
    }
}
