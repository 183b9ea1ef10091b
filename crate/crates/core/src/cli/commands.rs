use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::output::{
    csv_writer, fmt_value, run_metrics, write_json, Aggregate, SimulateOutput, SweepCell, SweepOutput, LONG_HEADER,
};
use super::{parse_f64_list, parse_usize_list, Cli, Command, Format, ScenarioOpts, SolverChoice};
use crate::error::{Error, Result};
use crate::favorability::{row_zero_runs, FavorabilityMatrix, FavorabilityVector, ObjectiveVector};
use crate::link::{PsrLinkBudget, WindowedClassifier};
use crate::scenario::{derive_seed, ScenarioFile};
use crate::sim::{run_policy, PolicyKind, Radio, ScenarioConfig, SimReport};
use crate::solvers::{brute_force_schedule, greedy_schedule, ScheduleSolution, DEFAULT_BRUTE_FORCE_CAP};

pub(super) fn dispatch(cli: &Cli, w: &mut dyn Write) -> Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Solve { scenario, solver } => solve(scenario, *solver, g.seed, g.format, w),
        Command::Classify { scenario } => classify(scenario, g.seed, g.format, w),
        Command::Simulate {
            scenario,
            policy,
            seeds,
            trta,
            duration,
        } => {
            let mut file = scenario.load(g.seed)?;
            apply_run_overrides(&mut file, *trta, *duration)?;
            simulate(&file, scenario.placement, policy.parse()?, *seeds, g.format, w)
        }
        Command::Sweep {
            scenario,
            trta,
            placements,
            policies,
            duration,
        } => {
            let mut file = scenario.load(g.seed)?;
            apply_run_overrides(&mut file, None, *duration)?;
            let policies = policies
                .split(',')
                .map(|p| p.trim().parse())
                .collect::<Result<Vec<PolicyKind>>>()?;
            sweep(&file, &parse_f64_list(trta)?, *placements, &policies, g.format, w)
        }
        Command::Bench { n, m, instances } => bench(
            &parse_usize_list(n)?,
            &parse_usize_list(m)?,
            *instances,
            g.seed.unwrap_or(0),
            g.format,
            w,
        ),
    }
}

fn apply_run_overrides(file: &mut ScenarioFile, trta: Option<f64>, duration: Option<f64>) -> Result<()> {
    if let Some(t) = trta {
        file.traffic.rta_period_ms = t;
    }
    if let Some(d) = duration {
        file.simulation.duration_s = d;
    }
    file.validate()
}

/// Classification the scheduler works with: `window_depth` identical rounds.
fn settled_matrix(cfg: &ScenarioConfig) -> Result<FavorabilityMatrix> {
    WindowedClassifier::settled(&cfg.measurement_round()?, cfg.run.window_depth)
}

fn bits(row: &[bool]) -> String {
    row.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolvedOrder {
    pub solution: ScheduleSolution,
    /// Station ids in transmission order.
    pub sta_order: Vec<usize>,
    /// Zero run of every row, in row order.
    pub row_zero_runs: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOutput {
    pub root_seed: u64,
    pub placement: u64,
    /// Favorability rows, one string of 0/1 per RTA station.
    pub matrix: Vec<String>,
    pub solutions: Vec<SolvedOrder>,
    /// Greedy's leading zero run minus the optimum, when both ran.
    pub leading_gap: Option<usize>,
}

fn solve(
    opts: &ScenarioOpts,
    choice: SolverChoice,
    seed: Option<u64>,
    format: Format,
    w: &mut dyn Write,
) -> Result<()> {
    let file = opts.load(seed)?;
    let cfg = file.resolve(opts.placement)?;
    let f = settled_matrix(&cfg)?;
    if f.n_rows() == 0 {
        log::warn!("scenario has no RTA stations; every order is optimal");
    }
    let mut solutions = Vec::new();
    if matches!(choice, SolverChoice::Brute | SolverChoice::Both) {
        solutions.push(brute_force_schedule(f.columns())?);
    }
    if matches!(choice, SolverChoice::Greedy | SolverChoice::Both) {
        solutions.push(greedy_schedule(f.columns())?);
    }
    let leading_gap = match solutions.as_slice() {
        [brute, greedy] => Some(
            greedy
                .objective
                .leading()
                .unwrap_or(0)
                .saturating_sub(brute.objective.leading().unwrap_or(0)),
        ),
        _ => None,
    };
    let solutions = solutions
        .into_iter()
        .map(|solution| {
            Ok(SolvedOrder {
                sta_order: solution.sta_order(f.columns()),
                row_zero_runs: row_zero_runs(&f.reordered(&solution.order)?)?,
                solution,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let out = SolveOutput {
        root_seed: file.seed,
        placement: opts.placement,
        matrix: f.rows().iter().map(|r| bits(r)).collect(),
        solutions,
        leading_gap,
    };
    match format {
        Format::Json => write_json(w, &out),
        Format::Csv => {
            let mut csv = csv_writer(w);
            csv.write_record([
                "root_seed",
                "placement",
                "solver",
                "order",
                "objective",
                "row_zero_runs",
                "elapsed_us",
                "leading_gap",
            ])?;
            for s in &out.solutions {
                let gap = match s.solution.solver {
                    crate::solvers::SolverKind::Greedy => out.leading_gap.map(|g| g.to_string()).unwrap_or_default(),
                    crate::solvers::SolverKind::BruteForce => String::new(),
                };
                csv.write_record([
                    out.root_seed.to_string(),
                    out.placement.to_string(),
                    s.solution.solver.to_string(),
                    join(&s.sta_order),
                    join(s.solution.objective.values()),
                    join(&s.row_zero_runs),
                    s.solution.elapsed.as_micros().to_string(),
                    gap,
                ])?;
            }
            csv.flush().map_err(csv::Error::from)?;
            Ok(())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOutput {
    pub root_seed: u64,
    pub placement: u64,
    pub window: usize,
    pub sinr_threshold_db: f64,
    pub pairs: Vec<PsrLinkBudget>,
    /// Favorability rows after windowing, one 0/1 string per RTA station.
    pub matrix: Vec<String>,
}

fn classify(opts: &ScenarioOpts, seed: Option<u64>, format: Format, w: &mut dyn Write) -> Result<()> {
    let file = opts.load(seed)?;
    let cfg = file.resolve(opts.placement)?;
    let Radio::Geometry { topology, link } = &cfg.radio else {
        return Err(Error::config(
            "classify needs a scenario with geometry, not an explicit matrix",
        ));
    };
    let f = settled_matrix(&cfg)?;
    let pairs: Vec<PsrLinkBudget> = topology.sinr_table(link)?.into_iter().flatten().collect();
    let out = ClassifyOutput {
        root_seed: file.seed,
        placement: opts.placement,
        window: cfg.run.window_depth,
        sinr_threshold_db: link.sinr_threshold_db,
        pairs,
        matrix: f.rows().iter().map(|r| bits(r)).collect(),
    };
    match format {
        Format::Json => write_json(w, &out),
        Format::Csv => {
            let mut csv = csv_writer(w);
            csv.write_record([
                "root_seed",
                "placement",
                "nonrta",
                "rta",
                "tf_rssi_dbm",
                "accept_interference_dbm",
                "psr_tx_power_dbm",
                "signal_dbm",
                "interference_dbm",
                "noise_dbm",
                "sinr_db",
                "favorable",
            ])?;
            for p in &out.pairs {
                csv.write_record([
                    out.root_seed.to_string(),
                    out.placement.to_string(),
                    p.nonrta.to_string(),
                    p.rta.to_string(),
                    p.tf_rssi_dbm.to_string(),
                    p.accept_interference_dbm.to_string(),
                    p.psr_tx_power_dbm.to_string(),
                    p.signal_dbm.to_string(),
                    p.interference_dbm.to_string(),
                    p.noise_dbm.to_string(),
                    p.sinr_db.to_string(),
                    u8::from(f.entry(p.rta, p.nonrta)).to_string(),
                ])?;
            }
            csv.flush().map_err(csv::Error::from)?;
            Ok(())
        }
    }
}

struct LongWriter<'a> {
    csv: csv::Writer<&'a mut dyn Write>,
    root_seed: String,
}

impl<'a> LongWriter<'a> {
    fn new(w: &'a mut dyn Write, root_seed: u64) -> Result<Self> {
        let mut csv = csv_writer(w);
        csv.write_record(LONG_HEADER)?;
        Ok(Self {
            csv,
            root_seed: root_seed.to_string(),
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn row(
        &mut self,
        scope: &str,
        policy: &str,
        trta_ms: f64,
        placement: u64,
        seed: Option<u64>,
        metric: &str,
        value: Option<f64>,
    ) -> Result<()> {
        self.csv.write_record([
            self.root_seed.as_str(),
            scope,
            policy,
            &trta_ms.to_string(),
            &placement.to_string(),
            &seed.map(|s| s.to_string()).unwrap_or_default(),
            metric,
            &fmt_value(value),
        ])?;
        Ok(())
    }

    fn flush(&mut self) -> Result<()> {
        self.csv.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

fn simulate(
    file: &ScenarioFile,
    placement: u64,
    policy: PolicyKind,
    seeds: u64,
    format: Format,
    w: &mut dyn Write,
) -> Result<()> {
    if seeds == 0 {
        return Err(Error::invalid("--seeds must be at least 1"));
    }
    let cfg = file.resolve(placement)?;
    if cfg.m() == 0 {
        log::warn!("scenario has no RTA stations; delay metrics stay empty");
    }
    log::info!("root seed {}, placement {placement}, policy {policy}", file.seed);
    let reports = (0..seeds)
        .into_par_iter()
        .map(|r| run_policy(&cfg, policy, file.run_seed(placement, r)))
        .collect::<Result<Vec<SimReport>>>()?;
    let out = SimulateOutput {
        root_seed: file.seed,
        policy: policy.to_string(),
        placement,
        trta_ms: file.traffic.rta_period_ms,
        aggregate: Aggregate::from_reports(&reports),
        reports,
    };
    match format {
        Format::Json => write_json(w, &out),
        Format::Csv => {
            let mut lw = LongWriter::new(w, out.root_seed)?;
            for r in &out.reports {
                for (metric, value) in run_metrics(&r.metrics, &r.counts, &r.nonrta_throughput_mbps) {
                    lw.row("run", &out.policy, out.trta_ms, placement, Some(r.seed), &metric, value)?;
                }
            }
            for (metric, stats) in out.aggregate.named() {
                for (scope, value) in [("mean", stats.mean), ("min", stats.min), ("max", stats.max)] {
                    lw.row(scope, &out.policy, out.trta_ms, placement, None, &metric, value)?;
                }
            }
            lw.flush()
        }
    }
}

fn sweep(
    file: &ScenarioFile,
    trta: &[f64],
    placements: u64,
    policies: &[PolicyKind],
    format: Format,
    w: &mut dyn Write,
) -> Result<()> {
    if placements == 0 || policies.is_empty() {
        return Err(Error::invalid("sweep needs at least one placement and one policy"));
    }
    log::info!(
        "root seed {}: {} periods x {placements} placements x {} policies",
        file.seed,
        trta.len(),
        policies.len()
    );
    let run_block = |t: f64| -> Result<Vec<SweepCell>> {
        let mut f = file.clone();
        f.traffic.rta_period_ms = t;
        f.validate()?;
        let keys: Vec<(u64, PolicyKind)> = (0..placements)
            .flat_map(|p| policies.iter().map(move |&k| (p, k)))
            .collect();
        keys.into_par_iter()
            .map(|(p, kind)| {
                let cfg = f.resolve(p)?;
                let seed = f.run_seed(p, 0);
                let r = run_policy(&cfg, kind, seed)?;
                log::debug!("T_RTA {t} ms, placement {p}, {kind}: {:?}", r.metrics.delay_quantile_ms);
                Ok(SweepCell {
                    trta_ms: t,
                    placement: p,
                    policy: kind.to_string(),
                    seed,
                    metrics: r.metrics,
                    counts: r.counts,
                    nonrta_throughput_mbps: r.nonrta_throughput_mbps,
                })
            })
            .collect()
    };

    match format {
        Format::Json => {
            let mut cells = Vec::new();
            for &t in trta {
                cells.extend(run_block(t)?);
            }
            write_json(
                w,
                &SweepOutput {
                    root_seed: file.seed,
                    cells,
                },
            )
        }
        Format::Csv => {
            // one block per period, flushed as soon as it is complete
            let mut lw = LongWriter::new(w, file.seed)?;
            for &t in trta {
                for cell in run_block(t)? {
                    for (metric, value) in run_metrics(&cell.metrics, &cell.counts, &cell.nonrta_throughput_mbps) {
                        lw.row("cell", &cell.policy, t, cell.placement, Some(cell.seed), &metric, value)?;
                    }
                }
                lw.flush()?;
            }
            Ok(())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub instances: usize,
    /// Share of instances where greedy reaches the optimal objective.
    pub equal_rate: Option<f64>,
    pub leading_gap_mean: Option<f64>,
    pub leading_gap_max: Option<usize>,
    /// Instances with a leading gap of 0, 1, 2 and 3 or more.
    pub leading_gap_hist: Option<[usize; 4]>,
    pub greedy_mean_us: f64,
    pub brute_mean_us: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchOutput {
    pub root_seed: u64,
    pub rows: Vec<BenchRow>,
}

/// Random `m x n` favorability vectors whose rows each hold a 0 and a 1.
pub fn random_nontrivial(n: usize, m: usize, rng: &mut impl Rng) -> Result<Vec<FavorabilityVector>> {
    if n < 2 {
        return Err(Error::invalid("rows with both a 0 and a 1 need at least two columns"));
    }
    let mut rows = Vec::with_capacity(m);
    while rows.len() < m {
        let row: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        if row.contains(&0) && row.contains(&1) {
            rows.push(row);
        }
    }
    if m == 0 {
        return Ok(FavorabilityMatrix::without_rows(n).columns().to_vec());
    }
    Ok(FavorabilityMatrix::from_rows(&rows)?.columns().to_vec())
}

fn bench(
    ns: &[usize],
    ms: &[usize],
    instances: usize,
    root_seed: u64,
    format: Format,
    w: &mut dyn Write,
) -> Result<()> {
    if instances == 0 {
        return Err(Error::invalid("--instances must be at least 1"));
    }
    let mut rows = Vec::new();
    for &m in ms {
        for &n in ns {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(root_seed, &format!("bench/{n}x{m}"), 0));
            let with_brute = n <= DEFAULT_BRUTE_FORCE_CAP;
            if !with_brute {
                log::warn!(
                    "n = {n} is above the brute-force cap of {DEFAULT_BRUTE_FORCE_CAP}; brute columns left empty"
                );
            }
            let mut greedy_us = 0.0;
            let mut brute_us = 0.0;
            let mut equal = 0;
            let mut gaps = Vec::new();
            for _ in 0..instances {
                let v = random_nontrivial(n, m, &mut rng)?;
                let start = Instant::now();
                let g = greedy_schedule(&v)?;
                greedy_us += start.elapsed().as_secs_f64() * 1e6;
                if with_brute {
                    let start = Instant::now();
                    let b = brute_force_schedule(&v)?;
                    brute_us += start.elapsed().as_secs_f64() * 1e6;
                    if g.objective.is_less_than(&b.objective)? {
                        return Err(Error::InvalidState(format!(
                            "greedy beat the exhaustive optimum on a {m}x{n} instance"
                        )));
                    }
                    equal += usize::from(g.objective == b.objective);
                    gaps.push(leading(&g.objective).saturating_sub(leading(&b.objective)));
                }
            }
            let k = instances as f64;
            let mut hist = [0usize; 4];
            for &g in &gaps {
                hist[g.min(3)] += 1;
            }
            rows.push(BenchRow {
                n,
                m,
                instances,
                equal_rate: with_brute.then(|| equal as f64 / k),
                leading_gap_mean: with_brute.then(|| gaps.iter().sum::<usize>() as f64 / k),
                leading_gap_max: gaps.iter().copied().max(),
                leading_gap_hist: with_brute.then_some(hist),
                greedy_mean_us: greedy_us / k,
                brute_mean_us: with_brute.then(|| brute_us / k),
            });
        }
    }
    let out = BenchOutput { root_seed, rows };
    match format {
        Format::Json => write_json(w, &out),
        Format::Csv => {
            let mut csv = csv_writer(w);
            csv.write_record([
                "root_seed",
                "n",
                "m",
                "instances",
                "equal_rate",
                "leading_gap_mean",
                "leading_gap_max",
                "gap_0",
                "gap_1",
                "gap_2",
                "gap_3_plus",
                "greedy_mean_us",
                "brute_mean_us",
            ])?;
            for r in &out.rows {
                let hist: [String; 4] = match r.leading_gap_hist {
                    Some(h) => h.map(|c| c.to_string()),
                    None => Default::default(),
                };
                let mut rec = vec![
                    root_seed.to_string(),
                    r.n.to_string(),
                    r.m.to_string(),
                    r.instances.to_string(),
                    fmt_value(r.equal_rate),
                    fmt_value(r.leading_gap_mean),
                    r.leading_gap_max.map(|g| g.to_string()).unwrap_or_default(),
                ];
                rec.extend(hist);
                rec.push(format!("{:.3}", r.greedy_mean_us));
                rec.push(r.brute_mean_us.map(|u| format!("{u:.3}")).unwrap_or_default());
                csv.write_record(&rec)?;
            }
            csv.flush().map_err(csv::Error::from)?;
            Ok(())
        }
    }
}

fn leading(o: &ObjectiveVector) -> usize {
    o.leading().unwrap_or(0)
}
