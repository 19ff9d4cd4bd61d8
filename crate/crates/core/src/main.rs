use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cliquewatch::order_model::parse_clock;
use cliquewatch::pipeline::{
    analyze_orders, length_stats, parse_report_json, read_orders, report_json, run_pipeline, sweep_threshold,
    sweep_window, write_cdf_csv, write_threshold_sweep_csv, write_window_sweep_csv, DetectionParams, Emit, RunConfig,
};
use cliquewatch::synth_eval::{generate, score, GroundTruth, SynthConfig};
use cliquewatch::{AggregationConfig, InvestorId, OrderFileFormat};

/// Detect suspect collusive cliques from per-day limit-order files.
#[derive(Debug, Parser)]
#[command(name = "cliquewatch", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the full detection over one or more day files.
    Detect(DetectArgs),
    /// Correlation of two investors as a function of window width.
    SweepWindow(SweepWindowArgs),
    /// Daily-graph component count as a function of correlation threshold.
    SweepThreshold(SweepThresholdArgs),
    /// Empirical CDF of aggregated series lengths.
    Stats(StatsArgs),
    /// Generate a synthetic market with planted cliques.
    Synth(SynthArgs),
    /// Score a clique report against planted ground truth.
    Score(ScoreArgs),
}

#[derive(Debug, Clone, Args)]
struct ParseOpts {
    /// Session anchor clock time; window 0 starts here.
    #[arg(long, default_value = "09:00:00")]
    anchor: String,
    /// Keep orders placed before the anchor instead of dropping them.
    #[arg(long)]
    keep_pre_anchor: bool,
    /// Malformed rows tolerated per file before failing.
    #[arg(long, default_value_t = 0)]
    max_bad_rows: usize,
}

impl ParseOpts {
    fn format(&self) -> Result<OrderFileFormat> {
        Ok(OrderFileFormat {
            anchor: parse_clock(&self.anchor)?,
            keep_pre_anchor: self.keep_pre_anchor,
            max_bad_rows: self.max_bad_rows,
        })
    }
}

#[derive(Debug, Clone, Args)]
struct DetectOpts {
    /// Aggregation window width in seconds.
    #[arg(long, default_value_t = 60)]
    window_seconds: u32,
    /// Minimum number of non-zero windows for an investor to be eligible.
    #[arg(long, default_value_t = 15)]
    min_length: usize,
    /// Daily edges need a correlation strictly above this.
    #[arg(long, default_value_t = 0.90)]
    corr_threshold: f64,
    /// Integrated edges need at least this many daily occurrences.
    #[arg(long, default_value_t = 2)]
    occurrence_threshold: u32,
}

impl DetectOpts {
    fn params(&self) -> Result<DetectionParams> {
        let params = DetectionParams {
            aggregation: AggregationConfig::new(self.window_seconds, self.min_length)?,
            corr_threshold: self.corr_threshold,
            occurrence_threshold: self.occurrence_threshold,
        };
        params.validate()?;
        Ok(params)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Artifact {
    Matrix,
    DailyDot,
    IntegratedDot,
    Report,
    Stats,
    All,
}

#[derive(Debug, Args)]
struct DetectArgs {
    /// Order files, one per trading day, in day order.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    detect: DetectOpts,
    #[command(flatten)]
    parse: ParseOpts,
    /// Directory for written artifacts.
    #[arg(long, short)]
    out_dir: Option<PathBuf>,
    /// Artifacts to write into the output directory.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "report")]
    emit: Vec<Artifact>,
}

#[derive(Debug, Args)]
struct SweepWindowArgs {
    input: PathBuf,
    #[arg(long)]
    investor_a: String,
    #[arg(long)]
    investor_b: String,
    /// Window widths in seconds; defaults to 1..=200.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<u32>,
    #[command(flatten)]
    parse: ParseOpts,
    /// Output CSV; stdout when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepThresholdArgs {
    input: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "0.80,0.85,0.90,0.95")]
    thresholds: Vec<f64>,
    #[command(flatten)]
    detect: DetectOpts,
    #[command(flatten)]
    parse: ParseOpts,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StatsArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, default_value_t = 60)]
    window_seconds: u32,
    #[command(flatten)]
    parse: ParseOpts,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Directory receiving one CSV per day and truth.json.
    #[arg(long, short)]
    out_dir: PathBuf,
    /// JSON generator config; missing fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    days: Option<usize>,
    /// Generate a single busy day (about 800k orders) instead.
    #[arg(long)]
    desk_scale: bool,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    #[arg(long)]
    report: PathBuf,
    #[arg(long)]
    truth: PathBuf,
}

fn emit_flags(items: &[Artifact]) -> Emit {
    let all = items.contains(&Artifact::All);
    let has = |a| all || items.contains(&a);
    Emit {
        matrix: has(Artifact::Matrix),
        daily_dot: has(Artifact::DailyDot),
        integrated_dot: has(Artifact::IntegratedDot),
        report: has(Artifact::Report),
        stats: has(Artifact::Stats),
    }
}

fn output_sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn detect(args: DetectArgs) -> Result<()> {
    let config = RunConfig {
        inputs: args.inputs,
        params: args.detect.params()?,
        format: args.parse.format()?,
        out_dir: args.out_dir,
        emit: emit_flags(&args.emit),
    };
    let out = run_pipeline(&config)?;
    let labels: Vec<String> = out.days.iter().map(|d| d.label.clone()).collect();
    if config.out_dir.is_none() || !config.emit.report {
        print!("{}", report_json(&config.params, &config.format, &labels, &out.report)?);
    }
    for path in &out.written {
        log::info!("wrote {}", path.display());
    }
    Ok(())
}

fn sweep_window_cmd(args: SweepWindowArgs) -> Result<()> {
    let orders = read_orders(&args.input, &args.parse.format()?)?;
    let sizes = if args.sizes.is_empty() {
        (1..=200).collect()
    } else {
        args.sizes
    };
    let rows = sweep_window(
        &orders,
        &InvestorId::new(args.investor_a),
        &InvestorId::new(args.investor_b),
        &sizes,
    )?;
    write_window_sweep_csv(output_sink(&args.output)?, &rows)?;
    Ok(())
}

fn sweep_threshold_cmd(args: SweepThresholdArgs) -> Result<()> {
    let orders = read_orders(&args.input, &args.parse.format()?)?;
    let day = analyze_orders("sweep", &orders, &args.detect.params()?)?;
    let Some(matrix) = day.matrix else {
        bail!("fewer than two eligible investors in {}", args.input.display());
    };
    let rows = sweep_threshold(&matrix, &args.thresholds)?;
    write_threshold_sweep_csv(output_sink(&args.output)?, &rows)?;
    Ok(())
}

fn stats_cmd(args: StatsArgs) -> Result<()> {
    let format = args.parse.format()?;
    let days = args
        .inputs
        .iter()
        .map(|p| read_orders(p, &format))
        .collect::<Result<Vec<_>, _>>()?;
    let cdf = length_stats(&days, &AggregationConfig::new(args.window_seconds, 1)?);
    write_cdf_csv(output_sink(&args.output)?, &cdf)?;
    Ok(())
}

fn synth_cmd(args: SynthArgs) -> Result<()> {
    let mut config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None if args.desk_scale => SynthConfig::desk_scale(SynthConfig::default().rng_seed),
        None => SynthConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.rng_seed = seed;
    }
    if let Some(days) = args.days {
        config.days = days;
    }
    let market = generate(&config)?;
    let paths = market.write_to(&args.out_dir)?;
    for p in paths {
        println!("{}", p.display());
    }
    Ok(())
}

fn score_cmd(args: ScoreArgs) -> Result<()> {
    let report_text = fs::read_to_string(&args.report).with_context(|| format!("reading {}", args.report.display()))?;
    let report = parse_report_json(&report_text)?;
    let truth_text = fs::read_to_string(&args.truth).with_context(|| format!("reading {}", args.truth.display()))?;
    let truth: GroundTruth = serde_json::from_str(&truth_text)?;
    let s = score(&report, &truth);
    println!("{}", serde_json::to_string_pretty(&serde_json::to_value(s)?)?);
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("CLIQUEWATCH_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Detect(a) => detect(a),
        Command::SweepWindow(a) => sweep_window_cmd(a),
        Command::SweepThreshold(a) => sweep_threshold_cmd(a),
        Command::Stats(a) => stats_cmd(a),
        Command::Synth(a) => synth_cmd(a),
        Command::Score(a) => score_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
