//! QoS metrics over pooled RTA delays and per-station non-RTA throughput.
//!
//! Delay samples are in milliseconds; an undelivered packet is an infinite
//! sample.

use crate::error::{Error, Result};

/// Nearest-rank quantile: the `ceil(q * n)`-th smallest sample.
pub fn delay_quantile(samples_ms: &[f64], q: f64) -> Result<f64> {
    if samples_ms.is_empty() {
        return Err(Error::invalid("delay quantile of an empty sample set"));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::invalid(format!("quantile level {q} is outside (0, 1)")));
    }
    let n = samples_ms.len();
    // q * n is computed in binary; shave rounding noise so that e.g.
    // 0.999 * 1000 does not land just above 999
    let rank = ((q * n as f64) - 1e-9).ceil().clamp(1.0, n as f64) as usize;
    let mut sorted = samples_ms.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(sorted[rank - 1])
}

/// Fraction of packets later than `delay_bound_ms` or never delivered.
pub fn loss_ratio(samples_ms: &[f64], delay_bound_ms: f64) -> Result<f64> {
    if samples_ms.is_empty() {
        return Err(Error::invalid("loss ratio of an empty sample set"));
    }
    let late = samples_ms.iter().filter(|&&d| d > delay_bound_ms).count();
    Ok(late as f64 / samples_ms.len() as f64)
}

/// Jain's fairness index `(sum x)^2 / (n * sum x^2)`.
pub fn jain_index(throughputs: &[f64]) -> Result<f64> {
    if throughputs.is_empty() {
        return Err(Error::invalid("fairness index of an empty throughput set"));
    }
    if let Some(bad) = throughputs.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::invalid(format!(
            "throughput {bad} is not a finite non-negative value"
        )));
    }
    let sum: f64 = throughputs.iter().sum();
    let sum_sq: f64 = throughputs.iter().map(|x| x * x).sum();
    if sum_sq == 0.0 {
        return Err(Error::invalid("fairness index of all-zero throughputs"));
    }
    Ok(sum * sum / (throughputs.len() as f64 * sum_sq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn quantile_examples() {
        let s: Vec<f64> = (1..=1000).map(f64::from).collect();
        // ceil(0.999 * 1000) = 999
        assert_eq!(delay_quantile(&s, 0.999).unwrap(), 999.0);
        assert_eq!(delay_quantile(&s, 0.5).unwrap(), 500.0);
        assert_eq!(delay_quantile(&s, 0.9991).unwrap(), 1000.0);
        assert_eq!(delay_quantile(&[4.5; 7], 0.3).unwrap(), 4.5);
        assert_eq!(delay_quantile(&[4.5; 7], 0.999).unwrap(), 4.5);

        let mut s: Vec<f64> = (1..=99).map(f64::from).collect();
        s.push(f64::INFINITY);
        assert_eq!(delay_quantile(&s, 0.999).unwrap(), f64::INFINITY);

        assert!(delay_quantile(&[], 0.5).is_err());
        assert!(delay_quantile(&[1.0], 1.0).is_err());
    }

    #[test]
    fn loss_examples() {
        assert_eq!(loss_ratio(&[1.0, 2.0, 3.0], 20.0).unwrap(), 0.0);
        assert_eq!(loss_ratio(&[1.0, 30.0, 2.0, 40.0], 20.0).unwrap(), 0.5);
        assert_eq!(loss_ratio(&[0.1, 0.2], 0.0).unwrap(), 1.0);
        assert_eq!(loss_ratio(&[1.0, f64::INFINITY], 20.0).unwrap(), 0.5);
        // exactly at the bound is on time
        assert_eq!(loss_ratio(&[20.0], 20.0).unwrap(), 0.0);
        assert!(loss_ratio(&[], 20.0).is_err());
    }

    #[test]
    fn jain_examples() {
        assert_abs_diff_eq!(jain_index(&[3.0; 8]).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(jain_index(&[1.0, 0.0]).unwrap(), 0.5);
        assert!(jain_index(&[0.0, 0.0]).is_err());
        assert!(jain_index(&[]).is_err());
        assert!(jain_index(&[1.0, -1.0]).is_err());
    }

    proptest! {
        #[test]
        fn jain_scale_invariant(x in proptest::collection::vec(0.0f64..100.0, 1..10), c in 0.01f64..100.0) {
            prop_assume!(x.iter().any(|&v| v > 0.0));
            let a = jain_index(&x).unwrap();
            let scaled: Vec<f64> = x.iter().map(|v| v * c).collect();
            prop_assert!((a - jain_index(&scaled).unwrap()).abs() < 1e-12);
            prop_assert!(a > 0.0 && a <= 1.0 + 1e-12);
        }

        #[test]
        fn quantile_is_a_sample_and_monotone(x in proptest::collection::vec(0.0f64..100.0, 1..200), q1 in 0.01f64..0.99, dq in 0.0f64..0.5) {
            let q2 = (q1 + dq).min(0.999);
            let a = delay_quantile(&x, q1).unwrap();
            let b = delay_quantile(&x, q2).unwrap();
            prop_assert!(x.contains(&a));
            prop_assert!(a <= b);
        }
    }
}
