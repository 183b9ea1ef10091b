//! Channel timeline of the two BSSs.
//!
//! The channel cycles through
//!
//! 1. an inter-TXOP gap in which RTA stations with queued packets contend
//!    (each independently with the EDCA win probability; one uniform winner
//!    sends one packet at full power and the next TXOP starts after it),
//! 2. the downlink half of a non-RTA TXOP (no PSR opportunity),
//! 3. the trigger-based uplink half, sent by the next non-RTA station of the
//!    current schedule cycle. RTA stations for which that station is
//!    favorable send PSR packets back to back while they fit in the
//!    remaining uplink time, one packet per station per uplink, with a
//!    uniform pick among the stations ready at the same instant.
//!
//! Times are integer nanoseconds. Randomness comes from three ChaCha streams
//! of the run seed (arrival phases, contention, cycle orders), so a policy
//! that does not draw orders leaves the other two streams untouched.

use std::collections::VecDeque;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::ScenarioConfig;
use super::policy::{CycleOrder, PolicyKind, SchedulePolicy};
use super::report::{DelaySample, EventCounts, QosMetrics, SimReport};
use crate::error::{Error, Result};
use crate::favorability::{check_permutation, FavorabilityMatrix};
use crate::link::WindowedClassifier;

const STREAM_ARRIVALS: u64 = 0;
const STREAM_CONTENTION: u64 = 1;
const STREAM_ORDER: u64 = 2;

fn ms_to_ns(ms: f64) -> u64 {
    (ms * 1e6).round() as u64
}

fn us_to_ns(us: f64) -> u64 {
    (us * 1e3).round() as u64
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Simulates `config` under `policy` with the given seed.
pub fn run_simulation(config: &ScenarioConfig, policy: &SchedulePolicy, seed: u64) -> Result<SimReport> {
    policy.validate(config.n())?;
    let mut policy_state = policy.clone();
    run_with_orders(config, &mut policy_state, policy.tag(), seed)
}

/// Simulates `config` under the schedule `kind` derives from the
/// classification of the scenario; the report carries the kind as its tag.
pub fn run_policy(config: &ScenarioConfig, kind: PolicyKind, seed: u64) -> Result<SimReport> {
    config.validate()?;
    let f = WindowedClassifier::settled(&config.measurement_round()?, config.run.window_depth)?;
    let policy = kind.policy_for(&f)?;
    let mut state = policy;
    run_with_orders(config, &mut state, kind.as_str(), seed)
}

/// Simulates with an arbitrary per-cycle order source.
pub fn run_with_orders(
    config: &ScenarioConfig,
    orders: &mut dyn CycleOrder,
    policy_tag: &str,
    seed: u64,
) -> Result<SimReport> {
    config.validate()?;
    let mut engine = Engine::new(config, seed)?;
    engine.run(orders)?;
    engine.finish(config, policy_tag, seed)
}

struct Timing {
    half_downlink: u64,
    half_uplink: u64,
    gap: u64,
    rta_airtime: u64,
    /// Non-RTA payload delivered in one TXOP half.
    bytes_per_half: u64,
    horizon: u64,
    warmup: u64,
    drain_end: u64,
    period: u64,
}

impl Timing {
    fn new(config: &ScenarioConfig) -> Result<Self> {
        let t = &config.traffic;
        let mac = &config.mac;
        let run = &config.run;
        let txop = ms_to_ns(mac.txop_duration_ms);
        let overhead = us_to_ns(mac.ppdu_overhead_us);
        let half_downlink = txop / 2;
        let half_uplink = txop - half_downlink;

        let rta_rate = t.rate_mbps(t.rta_mcs)?;
        // bits / (Mb/s) = microseconds
        let rta_airtime = (f64::from(t.rta_packet_bytes) * 8.0 / rta_rate * 1e3).ceil() as u64 + overhead;

        let nonrta_rate = t.rate_mbps(t.nonrta_mcs)?;
        let payload_ns = half_downlink.min(half_uplink).saturating_sub(overhead);
        let payload_bits = payload_ns as f64 * nonrta_rate * 1e-3;
        let packet_bits = f64::from(t.nonrta_packet_bytes) * 8.0;
        let bytes_per_half = (payload_bits / packet_bits).floor() as u64 * u64::from(t.nonrta_packet_bytes);

        let horizon = (run.duration_s * 1e9).round() as u64;
        Ok(Self {
            half_downlink,
            half_uplink,
            gap: us_to_ns(mac.inter_txop_gap_us),
            rta_airtime,
            bytes_per_half,
            horizon,
            warmup: (horizon as f64 * run.warmup_fraction).round() as u64,
            drain_end: horizon + (run.drain_limit_s * 1e9).round() as u64,
            period: ms_to_ns(t.rta_period_ms),
        })
    }
}

struct Engine {
    timing: Timing,
    n: usize,
    m: usize,
    edca_p: f64,
    round: FavorabilityMatrix,
    classifier: WindowedClassifier,
    favorable: Vec<Vec<bool>>,
    queues: Vec<VecDeque<u64>>,
    next_arrival: Vec<u64>,
    contention: ChaCha8Rng,
    order_rng: ChaCha8Rng,
    samples: Vec<DelaySample>,
    nonrta_bytes: Vec<u64>,
    counts: EventCounts,
    schedule: Option<Vec<usize>>,
    now: u64,
}

impl Engine {
    fn new(config: &ScenarioConfig, seed: u64) -> Result<Self> {
        let timing = Timing::new(config)?;
        let (n, m) = (config.n(), config.m());
        let round = config.measurement_round()?;
        if round.n_cols() != n || round.n_rows() != m {
            return Err(Error::invalid("favorability matrix does not match the scenario size"));
        }
        let mut arrivals = stream(seed, STREAM_ARRIVALS);
        let next_arrival = (0..m).map(|_| arrivals.gen_range(0..timing.period)).collect();
        Ok(Self {
            n,
            m,
            edca_p: config.mac.edca_win_probability,
            classifier: WindowedClassifier::new(n, m, config.run.window_depth)?,
            favorable: vec![vec![false; m]; n],
            round,
            queues: vec![VecDeque::new(); m],
            next_arrival,
            contention: stream(seed, STREAM_CONTENTION),
            order_rng: stream(seed, STREAM_ORDER),
            samples: Vec::new(),
            nonrta_bytes: vec![0; n],
            counts: EventCounts::default(),
            schedule: config.run.record_schedule.then(Vec::new),
            now: 0,
            timing,
        })
    }

    /// Enqueues every packet generated up to and including `t`.
    fn admit(&mut self, t: u64) {
        for j in 0..self.m {
            while self.next_arrival[j] <= t && self.next_arrival[j] < self.timing.horizon {
                self.queues[j].push_back(self.next_arrival[j]);
                self.next_arrival[j] += self.timing.period;
                self.counts.generated += 1;
            }
        }
    }

    fn deliver(&mut self, sta: usize, at: u64) {
        let enqueued = self.queues[sta].pop_front().expect("delivery from an empty queue");
        debug_assert!(at >= enqueued);
        self.counts.delivered += 1;
        if enqueued >= self.timing.warmup {
            self.samples.push(DelaySample {
                sta,
                enqueue_ns: enqueued,
                delay_ns: Some(at - enqueued),
            });
        }
    }

    fn queued(&self) -> u64 {
        self.queues.iter().map(|q| q.len() as u64).sum()
    }

    fn traffic_done(&self) -> bool {
        self.now >= self.timing.horizon
            && self.next_arrival.iter().all(|&a| a >= self.timing.horizon)
            && self.queues.iter().all(VecDeque::is_empty)
    }

    fn run(&mut self, orders: &mut dyn CycleOrder) -> Result<()> {
        let mut cycle: Vec<usize> = Vec::new();
        let mut pos = 0;
        while !self.traffic_done() && self.now < self.timing.drain_end {
            if pos == cycle.len() {
                self.start_cycle(orders, &mut cycle)?;
                pos = 0;
            }
            let sta = cycle[pos];
            pos += 1;
            self.gap();
            self.txop(sta);
            debug_assert_eq!(self.counts.generated, self.counts.delivered + self.queued());
        }
        Ok(())
    }

    fn start_cycle(&mut self, orders: &mut dyn CycleOrder, cycle: &mut Vec<usize>) -> Result<()> {
        *cycle = orders.next_cycle(self.n, &mut self.order_rng as &mut dyn RngCore);
        check_permutation(cycle, self.n)?;
        // static geometry: every cycle contributes an identical measurement round
        self.classifier.record(&self.round)?;
        for i in 0..self.n {
            for j in 0..self.m {
                self.favorable[i][j] = self.classifier.is_favorable(i, j)?;
            }
        }
        self.counts.cycles += 1;
        Ok(())
    }

    fn gap(&mut self) {
        let start = self.now;
        self.admit(start);
        let mut attempters = Vec::new();
        for j in 0..self.m {
            if !self.queues[j].is_empty() && self.contention.gen_bool(self.edca_p) {
                attempters.push(j);
            }
        }
        self.now = start + self.timing.gap;
        if !attempters.is_empty() {
            let winner = attempters[self.contention.gen_range(0..attempters.len())];
            self.now += self.timing.rta_airtime;
            self.deliver(winner, self.now);
            self.counts.gap_transmissions += 1;
        }
    }

    fn txop(&mut self, sta: usize) {
        let start = self.now;
        let counted = start >= self.timing.warmup && start < self.timing.horizon;
        self.counts.txops += 1;
        if let Some(s) = self.schedule.as_mut() {
            s.push(sta);
        }

        self.now += self.timing.half_downlink;
        let uplink_start = self.now;
        let uplink_end = uplink_start + self.timing.half_uplink;
        self.uplink(sta, uplink_start, uplink_end);
        self.now = uplink_end;

        if counted {
            self.nonrta_bytes[sta] += 2 * self.timing.bytes_per_half;
        }
    }

    fn uplink(&mut self, sta: usize, start: u64, end: u64) {
        let air = self.timing.rta_airtime;
        self.admit(start);
        for j in 0..self.m {
            if !self.queues[j].is_empty() && !self.favorable[sta][j] {
                self.counts.denied_opportunities += 1;
            }
        }

        let mut sent = vec![false; self.m];
        let mut t = start;
        let mut eligible = Vec::with_capacity(self.m);
        while t + air <= end {
            self.admit(t);
            eligible.clear();
            eligible.extend((0..self.m).filter(|&j| self.favorable[sta][j] && !sent[j] && !self.queues[j].is_empty()));
            if !eligible.is_empty() {
                let j = eligible[self.contention.gen_range(0..eligible.len())];
                t += air;
                self.deliver(j, t);
                sent[j] = true;
                self.counts.psr_transmissions += 1;
                continue;
            }
            // idle until the next packet of a station that could still send
            let next = (0..self.m)
                .filter(|&j| self.favorable[sta][j] && !sent[j])
                .map(|j| self.next_arrival[j])
                .filter(|&a| a < self.timing.horizon)
                .min();
            match next {
                Some(a) if a + air <= end => t = t.max(a),
                _ => break,
            }
        }
    }

    fn finish(mut self, config: &ScenarioConfig, policy_tag: &str, seed: u64) -> Result<SimReport> {
        for j in 0..self.m {
            while let Some(enqueued) = self.queues[j].pop_front() {
                self.counts.undelivered += 1;
                if enqueued >= self.timing.warmup {
                    self.samples.push(DelaySample {
                        sta: j,
                        enqueue_ns: enqueued,
                        delay_ns: None,
                    });
                }
            }
        }
        self.samples.sort_by_key(|s| (s.enqueue_ns, s.sta));

        let measured_ns = self.timing.horizon - self.timing.warmup;
        let measured_s = measured_ns as f64 * 1e-9;
        let throughput: Vec<f64> = self
            .nonrta_bytes
            .iter()
            .map(|&b| b as f64 * 8.0 / measured_s / 1e6)
            .collect();
        let delays_ms: Vec<f64> = self.samples.iter().map(DelaySample::delay_ms).collect();
        let metrics = QosMetrics::compute(&delays_ms, &throughput, config.run.quantile, config.run.delay_bound_ms)?;

        Ok(SimReport {
            seed,
            config_digest: config.digest(),
            policy: policy_tag.to_string(),
            n: self.n,
            m: self.m,
            measured_s,
            quantile: config.run.quantile,
            delay_bound_ms: config.run.delay_bound_ms,
            delays: self.samples,
            nonrta_bytes: self.nonrta_bytes,
            nonrta_throughput_mbps: throughput,
            metrics,
            counts: self.counts,
            schedule: self.schedule,
        })
    }
}
