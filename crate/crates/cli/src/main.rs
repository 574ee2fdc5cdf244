use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use citerank_core::indicator::{
    compute_percentiles, count_at_or_above, PercentileRule, RankClassScheme, ReferenceScope,
};
use citerank_core::pipeline::{
    compare_rules, emit_comparison, emit_paper_table, emit_ranking_table, parse_records,
    run_analysis, AnalysisConfig, InputDataset, InputFormat, ReportFormat, LEADER_TAG,
};
use citerank_core::stats::ztest_proportions;
use citerank_core::synth::ExperimentConfig;

/// Percentile-based citation impact indicators (I3, %I3) under competing counting rules.
#[derive(Debug, Parser)]
#[command(name = "citerank", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank sets by %I3 (or list per-paper percentiles with --level paper).
    Rank(RankArgs),
    /// Correlate per-set %I3 between counting rules.
    CompareRules(CompareArgs),
    /// Two-proportion z-test, from counts or from two sets of a dataset.
    Ztest(ZtestArgs),
    /// Run a synthetic rule-divergence experiment.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// csv | text | json
    #[arg(long, default_value = "csv")]
    format: ReportFormat,
    /// Write here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Level {
    Set,
    Paper,
}

#[derive(Debug, Args)]
struct RankArgs {
    #[arg(long)]
    input: PathBuf,
    /// quantile | lb09 | rousseau-raw | rousseau (repeatable)
    #[arg(long = "rule", default_value = "quantile")]
    rules: Vec<PercentileRule>,
    /// p100 | nsf6 | top10 (repeatable)
    #[arg(long = "scheme", default_value = "p100")]
    schemes: Vec<RankClassScheme>,
    /// global | per-set | per-doc-type | per-set-and-doc-type
    #[arg(long, default_value = "global")]
    scope: ReferenceScope,
    #[arg(long, value_enum, default_value_t = Level::Set)]
    level: Level,
    /// Percentile threshold for the top_share column.
    #[arg(long, default_value_t = 90.0)]
    top_threshold: f64,
    /// Add a generated_at timestamp (unix seconds) to the leader line.
    #[arg(long)]
    stamp: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long = "rule", required = true)]
    rules: Vec<PercentileRule>,
    #[arg(long, default_value = "p100")]
    scheme: RankClassScheme,
    #[arg(long, default_value = "global")]
    scope: ReferenceScope,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct ZtestArgs {
    #[arg(long, requires_all = ["n1", "k2", "n2"], conflicts_with = "input")]
    k1: Option<u64>,
    #[arg(long, requires = "k1")]
    n1: Option<u64>,
    #[arg(long, requires = "k1")]
    k2: Option<u64>,
    #[arg(long, requires = "k1")]
    n2: Option<u64>,
    #[arg(long, requires_all = ["set_a", "set_b"])]
    input: Option<PathBuf>,
    #[arg(long, requires = "input")]
    set_a: Option<String>,
    #[arg(long, requires = "input")]
    set_b: Option<String>,
    /// Papers at or above this percentile count as successes.
    #[arg(long, default_value_t = 90.0)]
    threshold: f64,
    #[arg(long, default_value = "quantile")]
    rule: PercentileRule,
    #[arg(long, default_value = "global")]
    scope: ReferenceScope,
    /// Also report the upper-tail p-value (A larger than B).
    #[arg(long)]
    one_sided: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    /// Reseed set i with SEED + i.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    out: OutputArgs,
}

fn load_dataset(path: &Path) -> Result<InputDataset> {
    let file = fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let format = match path.extension().and_then(|e| e.to_str()) {
        Some("tsv") | Some("tab") => InputFormat::tab(),
        _ => InputFormat::default(),
    };
    parse_records(file, format, &path.to_string_lossy())
        .with_context(|| format!("invalid input {}", path.display()))
}

fn write_output(out: &OutputArgs, text: &str) -> Result<()> {
    match &out.output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Exits with status 2 and a usage message, like clap's own argument errors.
fn usage_error(message: String) -> ! {
    Cli::command()
        .error(ErrorKind::ArgumentConflict, message)
        .exit()
}

fn reject_duplicates(rules: &[PercentileRule]) {
    for (i, rule) in rules.iter().enumerate() {
        if rules[..i].contains(rule) {
            usage_error(format!("duplicate rule: {rule}"));
        }
    }
}

fn cmd_rank(args: &RankArgs) -> Result<()> {
    reject_duplicates(&args.rules);
    let dataset = load_dataset(&args.input)?;
    let text = match args.level {
        Level::Set => {
            let config = AnalysisConfig {
                rules: args.rules.clone(),
                schemes: args.schemes.clone(),
                scope: args.scope,
                top_threshold: args.top_threshold,
            };
            let mut report = run_analysis(&dataset, &config)?;
            if args.stamp {
                let secs = std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)?
                    .as_secs();
                report.generated_at = Some(secs.to_string());
            }
            emit_ranking_table(&report, args.out.format)?
        }
        Level::Paper => {
            let assignments = args
                .rules
                .iter()
                .map(|&rule| compute_percentiles(&dataset.records, rule, args.scope))
                .collect::<Result<Vec<_>, _>>()?;
            emit_paper_table(&dataset.records, &assignments, args.out.format)?
        }
    };
    write_output(&args.out, &text)
}

fn cmd_compare_rules(args: &CompareArgs) -> Result<()> {
    if args.rules.len() < 2 {
        usage_error("compare-rules needs at least two --rule flags".into());
    }
    reject_duplicates(&args.rules);
    let dataset = load_dataset(&args.input)?;
    let config = AnalysisConfig::new(args.rules.clone(), vec![args.scheme], args.scope);
    let report = run_analysis(&dataset, &config)?;
    if report.rows.len() == 2 {
        eprintln!("warning: only 2 sets; correlations over 2 points are always +1 or -1");
    }
    let cmp = compare_rules(&report, &args.rules, &args.scheme)
        .context("cannot correlate rules (is every set's %I3 identical?)")?;
    write_output(&args.out, &emit_comparison(&cmp, args.out.format)?)
}

fn cmd_ztest(args: &ZtestArgs) -> Result<()> {
    let (k1, n1, k2, n2, label) = match (args.k1, &args.input) {
        (Some(k1), None) => {
            let (n1, k2, n2) = (args.n1.unwrap(), args.k2.unwrap(), args.n2.unwrap());
            (k1, n1, k2, n2, "counts".to_string())
        }
        (None, Some(path)) => {
            let dataset = load_dataset(path)?;
            let assignment = compute_percentiles(&dataset.records, args.rule, args.scope)?;
            let set_a = args.set_a.as_deref().unwrap();
            let set_b = args.set_b.as_deref().unwrap();
            let (k1, n1) = count_at_or_above(&assignment, set_a, args.threshold)?;
            let (k2, n2) = count_at_or_above(&assignment, set_b, args.threshold)?;
            let label = format!(
                "sets {set_a} vs {set_b} rule={} scope={} threshold={}",
                args.rule, args.scope, args.threshold
            );
            (k1 as u64, n1 as u64, k2 as u64, n2 as u64, label)
        }
        _ => usage_error("give either --k1/--n1/--k2/--n2 or --input/--set-a/--set-b".into()),
    };

    let result = ztest_proportions(k1, n1, k2, n2)?;
    let text = match args.out.format {
        ReportFormat::Json => {
            let mut value = serde_json::json!({
                "k1": k1, "n1": n1, "k2": k2, "n2": n2,
                "z": result.z,
                "p_two_sided": result.p_two_sided,
                "pooled_proportion": result.pooled_proportion,
            });
            if args.one_sided {
                value["p_one_sided"] = result.p_one_sided().into();
            }
            serde_json::to_string_pretty(&value)? + "\n"
        }
        _ => {
            let mut header = "k1,n1,k2,n2,z,p_two_sided,pooled_proportion".to_string();
            let mut row = format!(
                "{k1},{n1},{k2},{n2},{:.6},{:.6},{:.6}",
                result.z, result.p_two_sided, result.pooled_proportion
            );
            if args.one_sided {
                header.push_str(",p_one_sided");
                row.push_str(&format!(",{:.6}", result.p_one_sided()));
            }
            format!(
                "# {LEADER_TAG} {} ztest {label}\n{header}\n{row}\n",
                env!("CARGO_PKG_VERSION")
            )
        }
    };
    write_output(&args.out, &text)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let text = fs::read_to_string(&args.config)
        .with_context(|| format!("cannot read {}", args.config.display()))?;
    let mut config = ExperimentConfig::from_json(&text)
        .with_context(|| format!("invalid experiment config {}", args.config.display()))?;
    if let Some(seed) = args.seed {
        config.reseed(seed);
    }
    let result = config.run()?;
    write_output(
        &args.out,
        &emit_comparison(&result.comparison, args.out.format)?,
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Rank(a) => cmd_rank(a),
        Command::CompareRules(a) => cmd_compare_rules(a),
        Command::Ztest(a) => cmd_ztest(a),
        Command::Simulate(a) => cmd_simulate(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
