use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{brute_force_schedule, greedy_schedule, ScheduleSolution};
use crate::error::Result;
use crate::favorability::{FavorabilityVector, ObjectiveVector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShuffleOutcome {
    pub objective: ObjectiveVector,
    pub equal_to_brute: bool,
    pub leading_gap: usize,
}

/// Greedy against brute force on one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub brute: ScheduleSolution,
    pub greedy: ScheduleSolution,
    pub objectives_equal: bool,
    /// Greedy's largest zero run minus the optimal one.
    pub leading_gap: usize,
    /// Greedy re-run on shuffled input orders.
    pub shuffles: Vec<ShuffleOutcome>,
}

impl GapReport {
    pub fn shuffled_equal_rate(&self) -> Option<f64> {
        if self.shuffles.is_empty() {
            return None;
        }
        let equal = self.shuffles.iter().filter(|s| s.equal_to_brute).count();
        Some(equal as f64 / self.shuffles.len() as f64)
    }

    pub fn max_shuffled_leading_gap(&self) -> Option<usize> {
        self.shuffles.iter().map(|s| s.leading_gap).max()
    }
}

fn leading_gap(greedy: &ObjectiveVector, brute: &ObjectiveVector) -> usize {
    match (greedy.leading(), brute.leading()) {
        (Some(g), Some(b)) => g.saturating_sub(b),
        _ => 0,
    }
}

pub fn evaluate_gap(vectors: &[FavorabilityVector], repetitions: usize, rng_seed: u64) -> Result<GapReport> {
    let brute = brute_force_schedule(vectors)?;
    let greedy = greedy_schedule(vectors)?;

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut shuffled = vectors.to_vec();
    let shuffles = (0..repetitions)
        .map(|_| {
            shuffled.shuffle(&mut rng);
            let sol = greedy_schedule(&shuffled)?;
            Ok(ShuffleOutcome {
                equal_to_brute: sol.objective == brute.objective,
                leading_gap: leading_gap(&sol.objective, &brute.objective),
                objective: sol.objective,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(GapReport {
        objectives_equal: greedy.objective == brute.objective,
        leading_gap: leading_gap(&greedy.objective, &brute.objective),
        brute,
        greedy,
        shuffles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::favorability::FavorabilityMatrix;

    fn vectors(cols: &[Vec<u8>]) -> Vec<FavorabilityVector> {
        FavorabilityMatrix::from_columns(cols).unwrap().columns().to_vec()
    }

    #[test]
    fn alternating_instance_has_no_gap() {
        let v = vectors(&[vec![1, 0], vec![0, 1], vec![1, 0], vec![0, 1]]);
        let r = evaluate_gap(&v, 10, 7).unwrap();
        assert!(r.objectives_equal);
        assert_eq!(r.leading_gap, 0);
        assert_eq!(r.shuffles.len(), 10);
        assert!(r
            .shuffles
            .iter()
            .all(|s| !s.objective.is_less_than(&r.brute.objective).unwrap()));
    }

    #[test]
    fn identical_vectors_have_no_gap() {
        let v = vectors(&vec![vec![1, 0, 1]; 5]);
        let r = evaluate_gap(&v, 3, 1).unwrap();
        assert!(r.objectives_equal);
        assert_eq!(r.leading_gap, 0);
        assert_eq!(r.shuffled_equal_rate(), Some(1.0));
    }

    #[test]
    fn capacity_error_propagates() {
        let cols: Vec<Vec<u8>> = (0..13).map(|i| vec![(i % 3 == 0) as u8]).collect();
        assert!(matches!(
            evaluate_gap(&vectors(&cols), 0, 0),
            Err(Error::Capacity { .. })
        ));
    }
}
