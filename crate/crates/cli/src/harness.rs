//! Benchmark harness: oracle-call counting and parallel completion-time
//! experiments over randomly generated decomposable instances.
//!
//! Experiment one sweeps the number of players and, for each generated
//! cluster instance, counts the entropy evaluations of the direct Shapley
//! solve against the decomposed pipeline (decomposer run plus per-block
//! solves, including the decomposer's own calls). The direct solve touches
//! every coalition exactly once, so its count is always `2^|V|`. Two
//! decomposed counts are reported: `decomposed_calls` charges each distinct
//! coalition once across the whole pipeline, while `decomposed_calls_raw`
//! sums the per-stage distinct counts without cross-stage deduplication.
//!
//! Experiment two times the two methods on prememoized entropy tables, so
//! evaluation cost stays out of the measured interval, and runs the
//! per-block solves on one thread per block. Timing cells run exclusively,
//! never co-scheduled with other cells.
//!
//! Both experiments re-verify on every instance that the two methods return
//! identical allocations, and fail hard when they do not.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use ratefair_core::{
    direct_sum, finest_decomposer, shapley_decomposed, shapley_direct, BitSourceModel, Caps,
    DecomposerResult, EntropyOracle, GenSpec, OracleLedger, Permutation, Rat, RateVector,
    ShapleyMethod, ShapleyResult, SubgameOracle, TableOracle,
};

/// Sweep parameters shared by both experiments.
#[derive(Clone, Debug)]
pub struct BenchConfig {
    /// Ground-set sizes to sweep.
    pub sizes: Vec<usize>,
    /// Instances generated per size.
    pub clusters: usize,
    /// Total entropy every instance is rescaled to.
    pub total_entropy: Rat,
    /// Master seed; per-cell seeds are derived from it.
    pub seed: u64,
    /// Timed repetitions per cell (one extra warmup run is discarded).
    pub repetitions: usize,
    /// Worker threads; defaults to the available parallelism.
    pub threads: Option<usize>,
    /// Enumeration budgets; cells beyond them are marked skipped.
    pub caps: Caps,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: (5..=15).collect(),
            clusters: 20,
            total_entropy: Rat::from_int(50),
            seed: 1,
            repetitions: 5,
            threads: None,
            caps: Caps::default(),
        }
    }
}

impl BenchConfig {
    fn resolved_threads(&self) -> usize {
        self.threads.unwrap_or_else(|| {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        })
    }
}

/// One (size, cluster) measurement.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BenchRow {
    /// Ground-set size of the instance.
    pub players: usize,
    /// Cluster index within the size.
    pub cluster_id: usize,
    /// Oracle calls of the direct solve; always `2^players`.
    pub direct_calls: u64,
    /// Distinct coalitions evaluated across the decomposed pipeline,
    /// decomposer included.
    pub decomposed_calls: u64,
    /// Per-stage distinct counts summed without cross-stage deduplication.
    pub decomposed_calls_raw: u64,
    /// The decomposer's share of `decomposed_calls`.
    pub decomposer_calls: u64,
    /// Direct-solve wall time in seconds.
    pub direct_time_sec: f64,
    /// Decomposed-solve wall time in seconds.
    pub decomposed_time_sec: f64,
    /// Largest block of the finest decomposer.
    pub max_block_size: usize,
    /// Whether the cell was skipped because it exceeded the caps.
    pub skipped: bool,
}

/// Per-size means and medians, for plotting the sweep.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SizeAggregate {
    /// Ground-set size.
    pub players: usize,
    /// Measured rows at this size.
    pub rows: usize,
    /// Skipped rows at this size.
    pub skipped: usize,
    /// Mean direct calls.
    pub mean_direct_calls: f64,
    /// Mean deduplicated decomposed calls.
    pub mean_decomposed_calls: f64,
    /// Mean raw decomposed calls.
    pub mean_decomposed_calls_raw: f64,
    /// Median direct time across rows.
    pub median_direct_time_sec: f64,
    /// Median decomposed time across rows.
    pub median_decomposed_time_sec: f64,
    /// Mean largest-block size.
    pub mean_max_block_size: f64,
}

/// Everything one experiment run produced.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BenchReport {
    /// All rows, sorted by (players, cluster).
    pub rows: Vec<BenchRow>,
    /// Per-size summaries, sorted by players.
    pub aggregates: Vec<SizeAggregate>,
    /// Worker threads used.
    pub threads: usize,
    /// Timed repetitions per cell.
    pub repetitions: usize,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn cell_seed(master: u64, players: usize, cluster: usize) -> u64 {
    splitmix64(master ^ splitmix64(((players as u64) << 32) | cluster as u64))
}

fn cell_instance(cfg: &BenchConfig, players: usize, cluster: usize) -> Result<BitSourceModel> {
    let spec = GenSpec {
        target_total_entropy: cfg.total_entropy.clone(),
        ..GenSpec::new(players, cell_seed(cfg.seed, players, cluster))
    };
    let inst = ratefair_core::generate_decomposable(&spec)
        .map_err(|e| anyhow::anyhow!("generation failed for |V|={players}: {e}"))?;
    Ok(inst.model)
}

struct CountedCell {
    direct_calls: u64,
    decomposed_calls: u64,
    decomposed_calls_raw: u64,
    decomposer_calls: u64,
    direct_time_sec: f64,
    decomposed_time_sec: f64,
    max_block_size: usize,
}

/// Runs both methods with counting oracles and checks they agree.
fn count_cell(model: &BitSourceModel, caps: Caps) -> Result<CountedCell> {
    // the direct solve touches each coalition exactly once, so counting raw
    // calls reports distinct-subset evaluations; memoization would add nothing
    let mut direct_oracle = EntropyOracle::new(model);
    direct_oracle.set_memoization(false);
    direct_oracle.set_phase("direct");
    let started = Instant::now();
    let direct = shapley_direct(&mut direct_oracle, caps)?;
    let direct_time_sec = started.elapsed().as_secs_f64();
    let direct_calls = direct_oracle.calls_in_phase("direct");

    // one phase across the whole pipeline: distinct-coalition counting
    let mut dec_oracle = EntropyOracle::new(model);
    dec_oracle.set_phase("decomposed");
    let started = Instant::now();
    let dec = shapley_decomposed(&mut dec_oracle, caps)?;
    let decomposed_time_sec = started.elapsed().as_secs_f64();
    let decomposed_calls = dec_oracle.calls_in_phase("decomposed");

    if direct.value != dec.shapley.value {
        bail!(
            "allocation mismatch on a benchmark instance: direct {} vs decomposed {}",
            direct.value,
            dec.shapley.value
        );
    }

    // per-stage phases: raw counts without cross-stage deduplication
    let mut raw_oracle = EntropyOracle::new(model);
    raw_oracle.set_phase("stage-decomposer");
    let n = model.players();
    let raw_dec = finest_decomposer(&mut raw_oracle, &Permutation::identity(n));
    let mut decomposed_calls_raw = raw_oracle.calls_in_phase("stage-decomposer");
    for (k, &block) in raw_dec.finest.blocks().iter().enumerate() {
        let phase = format!("stage-block-{k}");
        raw_oracle.set_phase(&phase);
        let mut view = SubgameOracle::new(&mut raw_oracle, block);
        shapley_direct(&mut view, caps)?;
        decomposed_calls_raw += raw_oracle.calls_in_phase(&phase);
    }

    Ok(CountedCell {
        direct_calls,
        decomposed_calls,
        decomposed_calls_raw,
        decomposer_calls: dec.decomposer.oracle_calls,
        direct_time_sec,
        decomposed_time_sec,
        max_block_size: dec.decomposer.finest.max_block_size(),
    })
}

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).expect("no NaN timings"));
    if values.is_empty() {
        return 0.0;
    }
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

fn time_median<T>(repetitions: usize, mut run: impl FnMut() -> Result<T>) -> Result<(f64, T)> {
    run()?; // warmup, discarded
    let mut samples = Vec::with_capacity(repetitions);
    let mut last = None;
    for _ in 0..repetitions.max(1) {
        let started = Instant::now();
        let value = run()?;
        samples.push(started.elapsed().as_secs_f64());
        last = Some(value);
    }
    Ok((median(samples), last.expect("at least one repetition")))
}

/// Times both methods against a prememoized entropy table. The decomposed
/// method runs one thread per block of the finest decomposer.
fn timing_cell(
    model: &BitSourceModel,
    caps: Caps,
    repetitions: usize,
) -> Result<(f64, f64, usize)> {
    let mut source = EntropyOracle::new(model);
    let table = TableOracle::build(&mut source);
    let n = model.players();

    let (direct_time, direct_value) = time_median(repetitions, || {
        let mut view = table.view_full();
        Ok(shapley_direct(&mut view, caps)?.value)
    })?;

    let (decomposed_time, (decomposed_value, max_block)) = time_median(repetitions, || {
        let mut view = table.view_full();
        let dec = finest_decomposer(&mut view, &Permutation::identity(n));
        let blocks = dec.finest.blocks().to_vec();
        let parts: Vec<(ratefair_core::Coalition, RateVector)> =
            std::thread::scope(|scope| -> Result<_> {
                let handles: Vec<_> = blocks
                    .iter()
                    .map(|&block| {
                        let table = &table;
                        scope.spawn(move || -> Result<_> {
                            let mut view = table.view(block);
                            Ok((block, shapley_direct(&mut view, caps)?.value))
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("block solver panicked"))
                    .collect()
            })?;
        let value = direct_sum(&parts)?;
        Ok((value, dec.finest.max_block_size()))
    })?;

    if direct_value != decomposed_value {
        bail!("allocation mismatch in the timing cell");
    }
    Ok((direct_time, decomposed_time, max_block))
}

fn aggregate(rows: &[BenchRow], sizes: &[usize]) -> Vec<SizeAggregate> {
    sizes
        .iter()
        .map(|&players| {
            let at_size: Vec<&BenchRow> =
                rows.iter().filter(|r| r.players == players && !r.skipped).collect();
            let skipped = rows.iter().filter(|r| r.players == players && r.skipped).count();
            let count = at_size.len().max(1) as f64;
            SizeAggregate {
                players,
                rows: at_size.len(),
                skipped,
                mean_direct_calls: at_size.iter().map(|r| r.direct_calls as f64).sum::<f64>()
                    / count,
                mean_decomposed_calls: at_size
                    .iter()
                    .map(|r| r.decomposed_calls as f64)
                    .sum::<f64>()
                    / count,
                mean_decomposed_calls_raw: at_size
                    .iter()
                    .map(|r| r.decomposed_calls_raw as f64)
                    .sum::<f64>()
                    / count,
                median_direct_time_sec: median(
                    at_size.iter().map(|r| r.direct_time_sec).collect(),
                ),
                median_decomposed_time_sec: median(
                    at_size.iter().map(|r| r.decomposed_time_sec).collect(),
                ),
                mean_max_block_size: at_size
                    .iter()
                    .map(|r| r.max_block_size as f64)
                    .sum::<f64>()
                    / count,
            }
        })
        .collect()
}

fn skipped_row(players: usize, cluster_id: usize) -> BenchRow {
    BenchRow {
        players,
        cluster_id,
        direct_calls: 0,
        decomposed_calls: 0,
        decomposed_calls_raw: 0,
        decomposer_calls: 0,
        direct_time_sec: 0.0,
        decomposed_time_sec: 0.0,
        max_block_size: 0,
        skipped: true,
    }
}

/// Experiment one: oracle-call counts per instance across the size sweep.
///
/// Cells run on a work pool; per-cell seeds make the output independent of
/// scheduling. Row times are single-shot and informational — the counting
/// runs include oracle evaluation.
pub fn run_oracle_count_experiment(cfg: &BenchConfig) -> Result<BenchReport> {
    let threads = cfg.resolved_threads();
    let cells: Vec<(usize, usize)> = cfg
        .sizes
        .iter()
        .flat_map(|&players| (0..cfg.clusters).map(move |cluster| (players, cluster)))
        .collect();
    if cells.is_empty() {
        bail!("experiment has no cells: empty size sweep or zero clusters");
    }

    let next = AtomicUsize::new(0);
    let results: Vec<Option<Result<BenchRow>>> =
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads.min(cells.len()))
                .map(|_| {
                    let cells = &cells;
                    let next = &next;
                    scope.spawn(move || {
                        let mut mine: Vec<(usize, Result<BenchRow>)> = Vec::new();
                        loop {
                            let idx = next.fetch_add(1, Ordering::Relaxed);
                            if idx >= cells.len() {
                                break;
                            }
                            let (players, cluster) = cells[idx];
                            let row = run_count_cell(cfg, players, cluster);
                            mine.push((idx, row));
                        }
                        mine
                    })
                })
                .collect();
            let mut slots: Vec<Option<Result<BenchRow>>> =
                (0..cells.len()).map(|_| None).collect();
            for handle in handles {
                for (idx, row) in handle.join().expect("worker panicked") {
                    slots[idx] = Some(row);
                }
            }
            slots
        });

    let mut rows = Vec::with_capacity(cells.len());
    for slot in results {
        rows.push(slot.expect("all cells assigned")?);
    }
    rows.sort_by_key(|r| (r.players, r.cluster_id));
    let aggregates = aggregate(&rows, &cfg.sizes);
    Ok(BenchReport { rows, aggregates, threads, repetitions: 1 })
}

fn run_count_cell(cfg: &BenchConfig, players: usize, cluster: usize) -> Result<BenchRow> {
    if players > cfg.caps.subset {
        return Ok(skipped_row(players, cluster));
    }
    let model = cell_instance(cfg, players, cluster)?;
    let counts = count_cell(&model, cfg.caps)
        .with_context(|| format!("cell |V|={players}, cluster {cluster}"))?;
    Ok(BenchRow {
        players,
        cluster_id: cluster,
        direct_calls: counts.direct_calls,
        decomposed_calls: counts.decomposed_calls,
        decomposed_calls_raw: counts.decomposed_calls_raw,
        decomposer_calls: counts.decomposer_calls,
        direct_time_sec: counts.direct_time_sec,
        decomposed_time_sec: counts.decomposed_time_sec,
        max_block_size: counts.max_block_size,
        skipped: false,
    })
}

/// Experiment two: median completion times against prememoized entropy
/// tables, with per-block solves running in parallel.
///
/// Cells run strictly one at a time so no cell's measurement is disturbed
/// by another; call counts are taken from separate counting runs on the
/// same instances.
pub fn run_parallel_timing_experiment(cfg: &BenchConfig) -> Result<BenchReport> {
    let threads = cfg.resolved_threads();
    let mut rows = Vec::new();
    for &players in &cfg.sizes {
        for cluster in 0..cfg.clusters {
            if players > cfg.caps.subset {
                rows.push(skipped_row(players, cluster));
                continue;
            }
            let model = cell_instance(cfg, players, cluster)?;
            let counts = count_cell(&model, cfg.caps)
                .with_context(|| format!("cell |V|={players}, cluster {cluster}"))?;
            let (direct_time, decomposed_time, max_block) =
                timing_cell(&model, cfg.caps, cfg.repetitions)
                    .with_context(|| format!("timing |V|={players}, cluster {cluster}"))?;
            debug_assert_eq!(max_block, counts.max_block_size);
            rows.push(BenchRow {
                players,
                cluster_id: cluster,
                direct_calls: counts.direct_calls,
                decomposed_calls: counts.decomposed_calls,
                decomposed_calls_raw: counts.decomposed_calls_raw,
                decomposer_calls: counts.decomposer_calls,
                direct_time_sec: direct_time,
                decomposed_time_sec: decomposed_time,
                max_block_size: max_block,
                skipped: false,
            });
        }
    }
    rows.sort_by_key(|r| (r.players, r.cluster_id));
    let aggregates = aggregate(&rows, &cfg.sizes);
    Ok(BenchReport { rows, aggregates, threads, repetitions: cfg.repetitions })
}

/// Output encoding for [`emit_report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    /// Detail CSV plus a `.means.csv` aggregate next to it.
    Csv,
    /// The whole report as one JSON document.
    Json,
}

/// Writes the report to `path`.
///
/// CSV detail columns: `players,clusterId,directCalls,decomposedCalls,
/// directTimeSec,decomposedTimeSec,maxBlockSize` (skipped cells are
/// omitted). The aggregate file adds the raw decomposed-call means and the
/// run's thread count.
pub fn emit_report(report: &BenchReport, path: &Path, format: ReportFormat) -> Result<()> {
    if report.rows.is_empty() {
        bail!("refusing to write an empty report");
    }
    match format {
        ReportFormat::Json => {
            let mut text = serde_json::to_string_pretty(report)?;
            text.push('\n');
            std::fs::write(path, text)
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
        ReportFormat::Csv => {
            let mut detail = String::from(
                "players,clusterId,directCalls,decomposedCalls,directTimeSec,decomposedTimeSec,maxBlockSize\n",
            );
            for r in report.rows.iter().filter(|r| !r.skipped) {
                detail.push_str(&format!(
                    "{},{},{},{},{:.9},{:.9},{}\n",
                    r.players,
                    r.cluster_id,
                    r.direct_calls,
                    r.decomposed_calls,
                    r.direct_time_sec,
                    r.decomposed_time_sec,
                    r.max_block_size
                ));
            }
            std::fs::write(path, detail)
                .with_context(|| format!("cannot write {}", path.display()))?;

            let means_path = path.with_extension("means.csv");
            let mut means = String::from(
                "players,rows,skipped,meanDirectCalls,meanDecomposedCalls,meanDecomposedCallsRaw,medianDirectTimeSec,medianDecomposedTimeSec,meanMaxBlockSize,threads,repetitions\n",
            );
            for a in &report.aggregates {
                means.push_str(&format!(
                    "{},{},{},{:.3},{:.3},{:.3},{:.9},{:.9},{:.3},{},{}\n",
                    a.players,
                    a.rows,
                    a.skipped,
                    a.mean_direct_calls,
                    a.mean_decomposed_calls,
                    a.mean_decomposed_calls_raw,
                    a.median_direct_time_sec,
                    a.median_decomposed_time_sec,
                    a.mean_max_block_size,
                    report.threads,
                    report.repetitions
                ));
            }
            std::fs::write(&means_path, means)
                .with_context(|| format!("cannot write {}", means_path.display()))?;
        }
    }
    Ok(())
}

/// Decomposed Shapley solve with the per-block subgames running on separate
/// threads, each against its own restricted model and oracle.
///
/// Call counts are merged per worker, so `oracle_calls` sums the decomposer
/// run and every subgame without cross-stage deduplication. The returned
/// ledger carries the per-phase breakdown.
pub fn shapley_decomposed_parallel(
    model: &BitSourceModel,
    caps: Caps,
) -> Result<(ShapleyResult, DecomposerResult, OracleLedger)> {
    let n = model.players();
    let mut oracle = EntropyOracle::new(model);
    oracle.set_phase("decomposer");
    let decomposer = finest_decomposer(&mut oracle, &Permutation::identity(n));
    caps.ensure_subset(decomposer.finest.max_block_size())
        .map_err(|e| anyhow::anyhow!("{e}"))?;

    let mut ledger = OracleLedger::new();
    ledger.merge(oracle.ledger());

    let blocks = decomposer.finest.blocks().to_vec();
    let solved: Vec<(ratefair_core::Coalition, ShapleyResult, OracleLedger)> =
        std::thread::scope(|scope| -> Result<_> {
            let handles: Vec<_> = blocks
                .iter()
                .map(|&block| {
                    let model = &model;
                    scope.spawn(move || -> Result<_> {
                        let restricted = model
                            .restrict(block)
                            .map_err(|e| anyhow::anyhow!("restricting to {block}: {e}"))?;
                        let mut sub_oracle = EntropyOracle::new(restricted.model());
                        sub_oracle.set_phase("subgame");
                        let result = shapley_direct(&mut sub_oracle, caps)
                            .map_err(|e| anyhow::anyhow!("subgame {block}: {e}"))?;
                        Ok((block, result, sub_oracle.ledger().clone()))
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("subgame solver panicked"))
                .collect()
        })?;

    let mut oracle_calls = decomposer.oracle_calls;
    let mut parts = Vec::with_capacity(solved.len());
    for (block, result, sub_ledger) in solved {
        oracle_calls += result.oracle_calls;
        ledger.merge(&sub_ledger);
        parts.push((block, result.value));
    }
    let value = direct_sum(&parts).map_err(|e| anyhow::anyhow!("{e}"))?;

    Ok((
        ShapleyResult {
            value,
            method: ShapleyMethod::Decomposed,
            oracle_calls,
            sample_count: None,
            seed: None,
            rng: None,
            extreme_point_mean: None,
        },
        decomposer,
        ledger,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_seeds_are_stable_and_distinct() {
        let a = cell_seed(1, 5, 0);
        assert_eq!(a, cell_seed(1, 5, 0));
        assert_ne!(a, cell_seed(1, 5, 1));
        assert_ne!(a, cell_seed(1, 6, 0));
        assert_ne!(a, cell_seed(2, 5, 0));
    }

    #[test]
    fn median_of_samples() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(median(vec![]), 0.0);
    }

    #[test]
    fn count_experiment_small_sweep() {
        let cfg = BenchConfig {
            sizes: vec![5, 6],
            clusters: 3,
            seed: 99,
            ..BenchConfig::default()
        };
        let report = run_oracle_count_experiment(&cfg).unwrap();
        assert_eq!(report.rows.len(), 6);
        for row in &report.rows {
            assert_eq!(row.direct_calls, 1u64 << row.players);
            assert!(row.decomposed_calls <= row.decomposed_calls_raw);
            assert!(row.decomposer_calls <= row.decomposed_calls);
        }
        assert_eq!(report.aggregates.len(), 2);
        assert_eq!(report.aggregates[0].mean_direct_calls, 32.0);
    }

    #[test]
    fn oversized_cells_are_marked_skipped() {
        let cfg = BenchConfig {
            sizes: vec![5, 25], // 25 exceeds the default subset cap of 24
            clusters: 2,
            seed: 4,
            ..BenchConfig::default()
        };
        let report = run_oracle_count_experiment(&cfg).unwrap();
        let skipped: Vec<_> = report.rows.iter().filter(|r| r.skipped).collect();
        assert_eq!(skipped.len(), 2);
        assert!(skipped.iter().all(|r| r.players == 25));
        let agg25 = report.aggregates.iter().find(|a| a.players == 25).unwrap();
        assert_eq!(agg25.rows, 0);
        assert_eq!(agg25.skipped, 2);
    }

    #[test]
    fn trivial_decomposition_times_stay_in_the_same_band() {
        // with a single block there is no decomposition benefit: the
        // decomposed path is the direct solve plus the decomposer run and
        // one thread spawn, so its time stays within a small factor
        let model =
            ratefair_core::generate_indecomposable(&GenSpec::new(5, 21)).unwrap();
        let (direct, decomposed, max_block) = timing_cell(&model, Caps::default(), 7).unwrap();
        assert_eq!(max_block, 5);
        assert!(
            decomposed < 20.0 * direct + 0.01,
            "decomposed {decomposed}s far outside the noise band of direct {direct}s"
        );
    }

    #[test]
    fn parallel_decomposed_matches_direct() {
        let inst = ratefair_core::generate_decomposable(&GenSpec::new(7, 5)).unwrap();
        let (result, decomposer, ledger) =
            shapley_decomposed_parallel(&inst.model, Caps::default()).unwrap();
        let mut o = EntropyOracle::new(&inst.model);
        let direct = shapley_direct(&mut o, Caps::default()).unwrap();
        assert_eq!(result.value, direct.value);
        assert!(decomposer.finest.block_count() >= 2);
        assert!(ledger.count("subgame") > 0);
        assert_eq!(result.oracle_calls, ledger.total());
    }

    #[test]
    fn report_files_round_trip(/* uses a temp dir under target */) {
        let cfg = BenchConfig {
            sizes: vec![5],
            clusters: 2,
            seed: 3,
            repetitions: 2,
            ..BenchConfig::default()
        };
        let report = run_parallel_timing_experiment(&cfg).unwrap();
        let dir = std::env::temp_dir().join("ratefair-harness-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.csv");
        emit_report(&report, &path, ReportFormat::Csv).unwrap();
        let detail = std::fs::read_to_string(&path).unwrap();
        assert!(detail.starts_with(
            "players,clusterId,directCalls,decomposedCalls,directTimeSec,decomposedTimeSec,maxBlockSize\n"
        ));
        assert_eq!(detail.lines().count(), 3);
        let means = std::fs::read_to_string(path.with_extension("means.csv")).unwrap();
        assert_eq!(means.lines().count(), 2);
        let json_path = dir.join("out.json");
        emit_report(&report, &json_path, ReportFormat::Json).unwrap();
        let parsed: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
        assert_eq!(parsed["rows"].as_array().unwrap().len(), 2);
    }
}
