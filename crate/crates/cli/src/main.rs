//! Command-line interface for fair source-coding rate allocation.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ratefair::format::{load_instance, parse_permutation, parse_rates, save_instance};
use ratefair::harness::{
    emit_report, run_oracle_count_experiment, run_parallel_timing_experiment,
    shapley_decomposed_parallel, BenchConfig, BenchReport, ReportFormat,
};
use ratefair_core::{
    check_membership, enumerate_extreme_points, generate_decomposable, generate_indecomposable,
    shapley_by_permutations, shapley_decomposed, shapley_direct, shapley_sampled, BitSourceModel,
    BlockCount, BoundForm, Caps, Coalition, EntropyOracle, GenSpec, MembershipReport, Partition,
    Permutation, Rat, RateVector, ShapleyResult, SumRateMode,
};

#[derive(Parser)]
#[command(
    name = "ratefair",
    version,
    about = "Fair source-coding rate allocation for multiterminal lossless compression",
    long_about = "Computes achievable-region membership, extreme points, Shapley values and \
                  game decompositions for entropy models given as independent weighted bits. \
                  All arithmetic is exact rational; player labels are 1-based on this interface."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    /// Lower bounds r(X) >= H(X | V\X)
    Sw,
    /// Upper bounds r(X) <= H(X)
    Core,
    /// Dual lower bounds r(X) >= H#(X)
    Dual,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Weighted-marginal sum over all coalitions
    Direct,
    /// Average of the greedy vector over all permutations
    Perms,
    /// Average over randomly sampled permutations
    Sampled,
    /// Finest decomposer, then per-block direct solves
    Decomposed,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a rate vector against the achievable region.
    Check {
        /// Instance JSON file.
        #[arg(long)]
        instance: PathBuf,
        /// Comma-separated rates, e.g. "1,9/5,2".
        #[arg(long)]
        rates: String,
        /// Which description of the region to check.
        #[arg(long, value_enum, default_value = "sw")]
        form: Form,
        /// Allow r(V) >= H(V) instead of equality. Decomposition guarantees
        /// do not apply to this relaxation.
        #[arg(long)]
        relaxed: bool,
        /// Lift the enumeration caps (prints a warning).
        #[arg(long)]
        force: bool,
        /// Machine-readable output.
        #[arg(long)]
        json: bool,
    },
    /// Enumerate the extreme points of the achievable region.
    ExtremePoints {
        #[arg(long)]
        instance: PathBuf,
        /// Machine-readable output.
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// One point per line, comma-separated coordinates.
        #[arg(long)]
        csv: bool,
        /// Lift the enumeration caps (prints a warning).
        #[arg(long)]
        force: bool,
    },
    /// Compute the Shapley value of the instance.
    Shapley {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "direct")]
        method: Method,
        /// Sample count for --method sampled.
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        /// RNG seed for --method sampled.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Solve subgames on one thread each (--method decomposed only).
        #[arg(long)]
        parallel: bool,
        /// Lift the enumeration caps (prints a warning).
        #[arg(long)]
        force: bool,
        /// Machine-readable output.
        #[arg(long)]
        json: bool,
    },
    /// Find the finest decomposer and a witness extreme point.
    Decompose {
        #[arg(long)]
        instance: PathBuf,
        /// 1-based ordering, e.g. "3,2,1"; identity when omitted.
        #[arg(long)]
        perm: Option<String>,
        /// Machine-readable output.
        #[arg(long)]
        json: bool,
    },
    /// Generate a random instance and write it as an instance file.
    Gen {
        /// Number of players.
        #[arg(long)]
        players: usize,
        /// Planted block count; random in 2..=players when omitted.
        #[arg(long)]
        blocks: Option<usize>,
        /// Target total entropy H(V), as an exact rational.
        #[arg(long, default_value = "50")]
        total: String,
        /// Generator seed.
        #[arg(long)]
        seed: u64,
        /// Output path.
        #[arg(short, long)]
        output: PathBuf,
        /// Generate a connected (indecomposable) instance instead.
        #[arg(long, conflicts_with = "blocks")]
        indecomposable: bool,
        /// Extra random bits per block, lower end.
        #[arg(long, default_value_t = 1)]
        extra_bits_min: usize,
        /// Extra random bits per block, upper end.
        #[arg(long, default_value_t = 3)]
        extra_bits_max: usize,
        /// Largest denominator of a drawn weight.
        #[arg(long, default_value_t = 10)]
        max_denominator: u32,
    },
    /// Complexity experiments over generated decomposable instances.
    Bench {
        #[command(subcommand)]
        experiment: BenchCommand,
    },
}

#[derive(clap::Args)]
struct BenchArgs {
    /// Size sweep: "5..15" (inclusive), a single size, or a comma list.
    #[arg(long, default_value = "5..15")]
    sizes: String,
    /// Instances per size.
    #[arg(long, default_value_t = 20)]
    clusters: usize,
    /// Target total entropy per instance.
    #[arg(long, default_value = "50")]
    total: String,
    /// Master seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output path.
    #[arg(short, long)]
    output: PathBuf,
    /// Output encoding.
    #[arg(long, value_enum, default_value = "csv")]
    format: OutFormat,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Count oracle calls of the direct vs decomposed solves.
    Calls {
        #[command(flatten)]
        args: BenchArgs,
    },
    /// Median completion times on prememoized entropy tables, subgames in
    /// parallel.
    Timing {
        #[command(flatten)]
        args: BenchArgs,
        /// Timed repetitions per cell (plus one discarded warmup).
        #[arg(long, default_value_t = 5)]
        reps: usize,
    },
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn caps_for(force: bool) -> Caps {
    if force {
        eprintln!(
            "warning: enumeration caps lifted; 2^|V| and |V|! work grows quickly beyond the defaults"
        );
        Caps::unlimited()
    } else {
        Caps::default()
    }
}

fn labels(c: Coalition) -> Vec<usize> {
    c.members().map(|p| p + 1).collect()
}

fn rate_strings(r: &RateVector) -> Vec<String> {
    r.rates().iter().map(|x| x.to_string()).collect()
}

fn partition_labels(p: &Partition) -> Vec<Vec<usize>> {
    p.blocks().iter().map(|b| labels(*b)).collect()
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Check { instance, rates, form, relaxed, force, json } => {
            let model = load_instance(&instance)?.model;
            let rates = parse_rates(&rates)?;
            if rates.len() != model.players() {
                bail!(
                    "instance has {} players but {} rates were given",
                    model.players(),
                    rates.len()
                );
            }
            let bound_form = match form {
                Form::Sw => BoundForm::SlepianWolf,
                Form::Core => BoundForm::Core,
                Form::Dual => BoundForm::DualBase,
            };
            let mode = if relaxed { SumRateMode::AtLeast } else { SumRateMode::Exact };
            let mut oracle = EntropyOracle::new(&model);
            oracle.set_phase("check");
            let report = check_membership(&mut oracle, &rates, bound_form, mode, caps_for(force))
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            print_membership(&report, form, relaxed, json);
        }
        Command::ExtremePoints { instance, json, csv, force } => {
            let model = load_instance(&instance)?.model;
            let mut oracle = EntropyOracle::new(&model);
            oracle.set_phase("extreme-points");
            let ex = enumerate_extreme_points(&mut oracle, caps_for(force))
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            if json {
                let points: Vec<Vec<String>> = ex.points().iter().map(rate_strings).collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "count": ex.point_count(),
                        "points": points,
                        "oracleCalls": oracle.calls_in_phase("extreme-points"),
                    }))?
                );
            } else if csv {
                for p in ex.points() {
                    println!("{}", rate_strings(p).join(","));
                }
            } else {
                println!("extreme points: {}", ex.point_count());
                for p in ex.points() {
                    println!("  {p}");
                }
                println!("oracle calls: {}", oracle.calls_in_phase("extreme-points"));
            }
        }
        Command::Shapley { instance, method, samples, seed, parallel, force, json } => {
            let model = load_instance(&instance)?.model;
            let caps = caps_for(force);
            run_shapley(&model, method, samples, seed, parallel, caps, json)?;
        }
        Command::Decompose { instance, perm, json } => {
            let model = load_instance(&instance)?.model;
            let perm = match perm {
                Some(text) => {
                    let p = parse_permutation(&text)?;
                    if p.len() != model.players() {
                        bail!(
                            "permutation covers {} players, instance has {}",
                            p.len(),
                            model.players()
                        );
                    }
                    p
                }
                None => Permutation::identity(model.players()),
            };
            let mut oracle = EntropyOracle::new(&model);
            oracle.set_phase("decompose");
            let result = ratefair_core::finest_decomposer(&mut oracle, &perm);
            let dimension = model.players() - result.finest.block_count();
            if json {
                let tight: Vec<Vec<usize>> =
                    result.min_tight_sets.iter().map(|c| labels(*c)).collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "permutation": perm.iter().map(|p| p + 1).collect::<Vec<_>>(),
                        "finest": partition_labels(&result.finest),
                        "decomposable": result.decomposable,
                        "extremePoint": rate_strings(&result.witness_extreme_point),
                        "oracleCalls": result.oracle_calls,
                        "minTightSets": tight,
                        "coreDimension": dimension,
                    }))?
                );
            } else {
                println!("permutation: {perm}");
                println!("finest decomposer: {}", result.finest);
                println!("decomposable: {}", if result.decomposable { "yes" } else { "no" });
                println!("extreme point: {}", result.witness_extreme_point);
                println!("oracle calls: {}", result.oracle_calls);
                println!("core dimension: {dimension}");
                for (p, tight) in result.min_tight_sets.iter().enumerate() {
                    println!("min tight set of player {}: {tight}", p + 1);
                }
            }
        }
        Command::Gen {
            players,
            blocks,
            total,
            seed,
            output,
            indecomposable,
            extra_bits_min,
            extra_bits_max,
            max_denominator,
        } => {
            let total: Rat = total.parse().map_err(|e| anyhow::anyhow!("--total: {e}"))?;
            let spec = GenSpec {
                target_total_entropy: total.clone(),
                block_count: match blocks {
                    Some(k) => BlockCount::Fixed(k),
                    None => BlockCount::Random,
                },
                extra_bits_per_block: (extra_bits_min, extra_bits_max),
                max_weight_denominator: max_denominator,
                ..GenSpec::new(players, seed)
            };
            if indecomposable {
                let model = generate_indecomposable(&spec).map_err(|e| anyhow::anyhow!("{e}"))?;
                save_instance(&output, &model, None)?;
                println!(
                    "wrote indecomposable instance: {players} players, {} bits, H(V) = {total} -> {}",
                    model.bits().len(),
                    output.display()
                );
            } else {
                let inst = generate_decomposable(&spec).map_err(|e| anyhow::anyhow!("{e}"))?;
                save_instance(&output, &inst.model, Some(&inst.planted))?;
                println!(
                    "wrote decomposable instance: {players} players, planted {}, {} bits, H(V) = {total} -> {}",
                    inst.planted,
                    inst.model.bits().len(),
                    output.display()
                );
            }
        }
        Command::Bench { experiment } => match experiment {
            BenchCommand::Calls { args } => {
                let cfg = bench_config(&args, 1)?;
                let report = run_oracle_count_experiment(&cfg)?;
                finish_bench(&report, &args)?;
            }
            BenchCommand::Timing { args, reps } => {
                let cfg = bench_config(&args, reps)?;
                let report = run_parallel_timing_experiment(&cfg)?;
                finish_bench(&report, &args)?;
            }
        },
    }
    Ok(())
}

fn run_shapley(
    model: &BitSourceModel,
    method: Method,
    samples: u64,
    seed: u64,
    parallel: bool,
    caps: Caps,
    json: bool,
) -> Result<()> {
    let mut oracle = EntropyOracle::new(model);
    match method {
        Method::Direct => {
            oracle.set_phase("shapley-direct");
            let res = shapley_direct(&mut oracle, caps).map_err(|e| anyhow::anyhow!("{e}"))?;
            print_shapley(&res, None, json);
        }
        Method::Perms => {
            oracle.set_phase("shapley-perms");
            let res =
                shapley_by_permutations(&mut oracle, caps).map_err(|e| anyhow::anyhow!("{e}"))?;
            if res.extreme_point_mean_differs() == Some(true) {
                eprintln!(
                    "note: repeated marginal vectors make the deduplicated extreme-point mean \
                     differ from the permutation average; the permutation average is the value"
                );
            }
            print_shapley(&res, None, json);
        }
        Method::Sampled => {
            oracle.set_phase("shapley-sampled");
            let res =
                shapley_sampled(&mut oracle, samples, seed).map_err(|e| anyhow::anyhow!("{e}"))?;
            print_shapley(&res, None, json);
        }
        Method::Decomposed => {
            if parallel {
                let (res, dec, _ledger) = shapley_decomposed_parallel(model, caps)?;
                print_shapley(&res, Some(&dec.finest), json);
            } else {
                oracle.set_phase("shapley-decomposed");
                let dec =
                    shapley_decomposed(&mut oracle, caps).map_err(|e| anyhow::anyhow!("{e}"))?;
                print_shapley(&dec.shapley, Some(&dec.decomposer.finest), json);
            }
        }
    }
    Ok(())
}

fn print_shapley(res: &ShapleyResult, finest: Option<&Partition>, json_out: bool) {
    let method = match res.method {
        ratefair_core::ShapleyMethod::Direct => "direct",
        ratefair_core::ShapleyMethod::PermutationAverage => "permutation-average",
        ratefair_core::ShapleyMethod::Sampled => "sampled",
        ratefair_core::ShapleyMethod::Decomposed => "decomposed",
    };
    if json_out {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "value": rate_strings(&res.value),
                "method": method,
                "oracleCalls": res.oracle_calls,
                "sampleCount": res.sample_count,
                "seed": res.seed,
                "rng": res.rng,
                "extremePointMean": res.extreme_point_mean.as_ref().map(rate_strings),
                "extremePointMeanDiffers": res.extreme_point_mean_differs(),
                "finestDecomposer": finest.map(partition_labels),
            }))
            .expect("serializable")
        );
    } else {
        println!("shapley value: {}", res.value);
        println!("method: {method}");
        println!("oracle calls: {}", res.oracle_calls);
        if let Some(samples) = res.sample_count {
            println!(
                "samples: {samples} (seed {}, rng {})",
                res.seed.unwrap_or(0),
                res.rng.unwrap_or("?")
            );
        }
        if let Some(mean) = &res.extreme_point_mean {
            println!("extreme-point mean: {mean}");
        }
        if let Some(p) = finest {
            println!("finest decomposer: {p}");
        }
    }
}

fn print_membership(report: &MembershipReport, form: Form, relaxed: bool, json_out: bool) {
    let form_name = match form {
        Form::Sw => "slepian-wolf",
        Form::Core => "core",
        Form::Dual => "dual",
    };
    if json_out {
        let violation = report.violation.as_ref().map(|v| {
            json!({
                "coalition": labels(v.coalition),
                "bound": v.bound.to_string(),
                "actual": v.actual.to_string(),
            })
        });
        let tight: Vec<Vec<usize>> = report.tight_sets.iter().map(|c| labels(*c)).collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "form": form_name,
                "relaxedSumRate": relaxed,
                "member": report.is_member,
                "violation": violation,
                "tightSets": tight,
            }))
            .expect("serializable")
        );
        return;
    }
    println!("form: {form_name}{}", if relaxed { " (relaxed sum-rate)" } else { "" });
    println!("member: {}", if report.is_member { "yes" } else { "no" });
    if let Some(v) = &report.violation {
        println!("violated at {}: bound {}, actual {}", v.coalition, v.bound, v.actual);
    }
    if report.is_member {
        let shown = report.tight_sets.len().min(16);
        let listed: Vec<String> =
            report.tight_sets[..shown].iter().map(|c| c.to_string()).collect();
        println!(
            "tight sets ({}): {}{}",
            report.tight_sets.len(),
            listed.join(" "),
            if shown < report.tight_sets.len() { " ..." } else { "" }
        );
    }
}

fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo.trim().parse().context("size range start")?;
        let hi: usize = hi.trim().parse().context("size range end")?;
        if lo == 0 || hi < lo {
            bail!("invalid size range {text:?}");
        }
        return Ok((lo..=hi).collect());
    }
    let sizes = text
        .split(',')
        .map(|part| part.trim().parse::<usize>().with_context(|| format!("size {part:?}")))
        .collect::<Result<Vec<_>>>()?;
    if sizes.is_empty() || sizes.contains(&0) {
        bail!("invalid size list {text:?}");
    }
    Ok(sizes)
}

fn bench_config(args: &BenchArgs, reps: usize) -> Result<BenchConfig> {
    Ok(BenchConfig {
        sizes: parse_sizes(&args.sizes)?,
        clusters: args.clusters,
        total_entropy: args.total.parse().map_err(|e| anyhow::anyhow!("--total: {e}"))?,
        seed: args.seed,
        repetitions: reps,
        threads: args.threads,
        caps: Caps::default(),
    })
}

fn finish_bench(report: &BenchReport, args: &BenchArgs) -> Result<()> {
    let format = match args.format {
        OutFormat::Csv => ReportFormat::Csv,
        OutFormat::Json => ReportFormat::Json,
    };
    emit_report(report, &args.output, format)?;
    println!("threads: {}", report.threads);
    println!(
        "{:>8} {:>6} {:>14} {:>16} {:>16} {:>12} {:>12}",
        "players", "rows", "meanDirect", "meanDecomposed", "meanDecompRaw", "medDirect_s", "medDecomp_s"
    );
    for a in &report.aggregates {
        println!(
            "{:>8} {:>6} {:>14.1} {:>16.1} {:>16.1} {:>12.6} {:>12.6}",
            a.players,
            a.rows,
            a.mean_direct_calls,
            a.mean_decomposed_calls,
            a.mean_decomposed_calls_raw,
            a.median_direct_time_sec,
            a.median_decomposed_time_sec
        );
    }
    println!("wrote {}", args.output.display());
    Ok(())
}
