//! The `fairlens` command-line interface.
//!
//! Exit codes: 0 success, 1 usage/configuration error, 2 data error.
//! Diagnostics go to stderr; data goes to files only.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use fairlens_core::{
    extract_salient_box, fine_grained_saliency, iias, iss_cross, iss_intra, to_grayscale,
    AugmentPart, PipelineConfig, PlacementStrategy, RandAugPolicy, SaliencyConfig, Weights,
};

use crate::analysis::dataset_entry;
use crate::augment::{augment_dataset, write_augment_manifest};
use crate::config::{load_config, FileConfig};
use crate::dataset::{read_manifest, scan_dataset, undersample_balance, write_manifest, Manifest};
use crate::error::{Error, Result};
use crate::features::{embed_manifest, load_precomputed, write_features, EmbeddingSpec, FeatureSet};
use crate::imgio::{load_image, save_saliency_map};
use crate::report::{write_report, AuditReport, ReportEntry, ReportFormat};
use crate::util::atomic_write;

pub const SEED_ENV: &str = "FAIRLENS_SEED";

#[derive(Parser)]
#[command(
    name = "fairlens",
    version,
    about = "Saliency-guided augmentation and dataset diversity/fairness auditing"
)]
struct Cli {
    /// TOML config file; command-line flags override file values.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the saliency map and salient box of one image.
    Saliency(SaliencyArgs),
    /// Augment a dataset with the keep-original transform.
    Augment(AugmentArgs),
    /// Extract feature vectors from a dataset into a feature file.
    Features(FeaturesArgs),
    /// Undersample groups down to the smallest group's size.
    Balance(BalanceArgs),
    /// Diversity/fairness metrics (D_within, D_inter, M) over features.
    Metrics(MetricsArgs),
    /// Image similarity scores within and across datasets.
    Iss(IssArgs),
    /// Image-image association score between concepts and gender attributes.
    Iias(IiasArgs),
    /// End-to-end audit: scan, optional balance, embed, metrics, report.
    Audit(AuditArgs),
}

#[derive(Args)]
struct SaliencyOpts {
    /// Saliency window radii, comma separated.
    #[arg(long, value_delimiter = ',', value_name = "R,R,...")]
    radii: Option<Vec<u32>>,
    /// Fraction of the map maximum used to binarize for box extraction.
    #[arg(long, value_name = "F")]
    threshold_fraction: Option<f64>,
}

#[derive(Args)]
struct EmbeddingOpts {
    /// Feature extractor for image inputs: histogram | saliency-histogram.
    #[arg(long, value_name = "KIND")]
    embedding: Option<String>,
    /// Histogram bins per channel.
    #[arg(long, value_name = "N")]
    bins: Option<usize>,
    /// Worker threads for batch stages (0 = all cores).
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    #[command(flatten)]
    saliency: SaliencyOpts,
}

#[derive(Args)]
struct ReportOpts {
    /// Report file to write.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Report format: csv | json.
    #[arg(long, value_name = "FMT")]
    format: Option<String>,
}

#[derive(Args)]
struct SaliencyArgs {
    /// Input image.
    #[arg(long = "in", value_name = "IMAGE")]
    input: PathBuf,
    /// Output grayscale map image (default: `<input>.saliency.png`).
    #[arg(long, value_name = "PATH")]
    out_map: Option<PathBuf>,
    /// Output box JSON (default: `<input>.box.json`).
    #[arg(long, value_name = "PATH")]
    out_box: Option<PathBuf>,
    #[command(flatten)]
    saliency: SaliencyOpts,
}

#[derive(Args)]
struct AugmentArgs {
    /// Dataset root (one subdirectory per group) or manifest file.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Output directory; also receives `manifest.jsonl`.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Placement strategy: min | max | random.
    #[arg(long, value_name = "STRATEGY")]
    placement: Option<String>,
    /// Which part to augment: salient | nonsalient | both.
    #[arg(long, value_name = "PART")]
    part: Option<String>,
    /// Ops per image.
    #[arg(long, value_name = "N")]
    n_ops: Option<usize>,
    /// Shared op magnitude, 0..=30.
    #[arg(long, value_name = "M")]
    magnitude: Option<u8>,
    /// Master seed (or config `seed`, or $FAIRLENS_SEED).
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    #[command(flatten)]
    saliency: SaliencyOpts,
}

#[derive(Args)]
struct FeaturesArgs {
    /// Dataset root or manifest file.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Feature file to write.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    #[command(flatten)]
    embedding: EmbeddingOpts,
}

#[derive(Args)]
struct BalanceArgs {
    /// Dataset root or manifest file.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Balanced manifest to write.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Master seed (or config `seed`, or $FAIRLENS_SEED).
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
}

#[derive(Args)]
struct MetricsArgs {
    /// Feature file or image directory.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Within-group weight alpha in [0, 0.5].
    #[arg(long, value_name = "A")]
    alpha: Option<f64>,
    /// Inter-group weight beta in [0, 0.5].
    #[arg(long, value_name = "B")]
    beta: Option<f64>,
    #[command(flatten)]
    report: ReportOpts,
    #[command(flatten)]
    embedding: EmbeddingOpts,
}

#[derive(Args)]
struct IssArgs {
    /// Feature file or image directory.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Second dataset for the cross score.
    #[arg(long, value_name = "PATH")]
    cross: Option<PathBuf>,
    #[command(flatten)]
    report: ReportOpts,
    #[command(flatten)]
    embedding: EmbeddingOpts,
}

#[derive(Args)]
struct IiasArgs {
    /// Concept images or features (e.g. a profession dataset).
    #[arg(long, value_name = "PATH")]
    concepts: PathBuf,
    /// Male attribute images or features.
    #[arg(long, value_name = "PATH")]
    male: PathBuf,
    /// Female attribute images or features.
    #[arg(long, value_name = "PATH")]
    female: PathBuf,
    #[command(flatten)]
    report: ReportOpts,
    #[command(flatten)]
    embedding: EmbeddingOpts,
}

#[derive(Args)]
struct AuditArgs {
    /// Dataset root(s); repeat to audit several datasets into one report.
    #[arg(long = "in", value_name = "DIR", required = true)]
    input: Vec<PathBuf>,
    /// Undersample groups to the smallest group before auditing.
    #[arg(long)]
    balance: bool,
    /// Master seed (required with --balance).
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
    /// Within-group weight alpha in [0, 0.5].
    #[arg(long, value_name = "A")]
    alpha: Option<f64>,
    /// Inter-group weight beta in [0, 0.5].
    #[arg(long, value_name = "B")]
    beta: Option<f64>,
    #[command(flatten)]
    report: ReportOpts,
    #[command(flatten)]
    embedding: EmbeddingOpts,
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("fairlens: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    let file = match &cli.config {
        Some(path) => load_config(path)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Saliency(args) => cmd_saliency(&file, args),
        Command::Augment(args) => cmd_augment(&file, args),
        Command::Features(args) => cmd_features(&file, args),
        Command::Balance(args) => cmd_balance(&file, args),
        Command::Metrics(args) => cmd_metrics(&file, args),
        Command::Iss(args) => cmd_iss(&file, args),
        Command::Iias(args) => cmd_iias(&file, args),
        Command::Audit(args) => cmd_audit(&file, args),
    }
}

// ---- shared option resolution ------------------------------------------

fn saliency_config(file: &FileConfig, opts: &SaliencyOpts) -> SaliencyConfig {
    let defaults = SaliencyConfig::default();
    SaliencyConfig {
        radii: opts
            .radii
            .clone()
            .or_else(|| file.saliency.radii.clone())
            .unwrap_or(defaults.radii),
        threshold_fraction: opts
            .threshold_fraction
            .or(file.saliency.threshold_fraction)
            .unwrap_or(defaults.threshold_fraction),
    }
}

fn embedding_spec(file: &FileConfig, opts: &EmbeddingOpts) -> Result<EmbeddingSpec> {
    let bins = opts.bins.or(file.embedding.bins).unwrap_or(16);
    if bins < 2 {
        return Err(Error::config(format!("--bins must be at least 2, got {bins}")));
    }
    let kind = opts
        .embedding
        .clone()
        .or_else(|| file.embedding.kind.clone())
        .unwrap_or_else(|| "saliency-histogram".to_string());
    match kind.as_str() {
        "histogram" => Ok(EmbeddingSpec::Histogram { bins }),
        "saliency-histogram" => Ok(EmbeddingSpec::SaliencyWeighted {
            bins,
            saliency: saliency_config(file, &opts.saliency),
        }),
        other => Err(Error::config(format!(
            "unknown embedding `{other}` (expected histogram | saliency-histogram)"
        ))),
    }
}

fn weights(file: &FileConfig, alpha: Option<f64>, beta: Option<f64>) -> Result<Weights> {
    let alpha = alpha.or(file.metrics.alpha).unwrap_or(0.49);
    let beta = beta.or(file.metrics.beta).unwrap_or(0.49);
    if alpha == 0.5 || beta == 0.5 {
        eprintln!(
            "fairlens: warning: with alpha or beta at 0.5 the combined metric is bounded by 1 \
             rather than strictly below it"
        );
    }
    Weights::new(alpha, beta).map_err(|e| Error::config(e.to_string()))
}

fn resolve_seed(file: &FileConfig, flag: Option<u64>) -> Result<Option<u64>> {
    if let Some(seed) = flag.or(file.seed) {
        return Ok(Some(seed));
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .parse::<u64>()
            .map(Some)
            .map_err(|_| Error::config(format!("{SEED_ENV}: `{v}` is not a valid u64 seed"))),
        Err(_) => Ok(None),
    }
}

fn require_seed(file: &FileConfig, flag: Option<u64>, what: &str) -> Result<u64> {
    resolve_seed(file, flag)?.ok_or_else(|| {
        Error::config(format!(
            "{what} needs a master seed: pass --seed, set `seed` in the config, or set {SEED_ENV}"
        ))
    })
}

fn workers(file: &FileConfig, flag: Option<usize>) -> usize {
    flag.or(file.workers).unwrap_or(0)
}

fn parse_placement(s: &str) -> Result<PlacementStrategy> {
    match s {
        "min" => Ok(PlacementStrategy::MinArea),
        "max" => Ok(PlacementStrategy::MaxArea),
        "random" => Ok(PlacementStrategy::RandomArea),
        other => Err(Error::config(format!(
            "unknown placement `{other}` (expected min | max | random)"
        ))),
    }
}

fn parse_part(s: &str) -> Result<AugmentPart> {
    match s {
        "salient" => Ok(AugmentPart::SalientOnly),
        "nonsalient" => Ok(AugmentPart::NonSalientOnly),
        "both" => Ok(AugmentPart::Both),
        other => Err(Error::config(format!(
            "unknown part `{other}` (expected salient | nonsalient | both)"
        ))),
    }
}

fn parse_format(s: Option<&str>) -> Result<ReportFormat> {
    match s {
        None | Some("csv") => Ok(ReportFormat::Csv),
        Some("json") => Ok(ReportFormat::Json),
        Some(other) => {
            Err(Error::config(format!("unknown format `{other}` (expected csv | json)")))
        }
    }
}

/// A dataset root scans to a manifest; anything else parses as one.
fn load_manifest(path: &Path) -> Result<Manifest> {
    if path.is_dir() {
        scan_dataset(path)
    } else {
        read_manifest(path)
    }
}

/// Feature files load directly; directories are scanned and embedded.
fn load_features(
    file: &FileConfig,
    path: &Path,
    opts: &EmbeddingOpts,
) -> Result<FeatureSet> {
    if path.is_dir() {
        let manifest = scan_dataset(path)?;
        embed_manifest(&manifest, &embedding_spec(file, opts)?, workers(file, opts.workers))
    } else {
        load_precomputed(path)
    }
}

// ---- commands -----------------------------------------------------------

fn cmd_saliency(file: &FileConfig, args: SaliencyArgs) -> Result<()> {
    let cfg = saliency_config(file, &args.saliency);
    let image = load_image(&args.input)?;
    let map = fine_grained_saliency(&to_grayscale(&image), &cfg.radii)
        .map_err(|e| Error::config(e.to_string()))?;
    let sb = extract_salient_box(&map, cfg.threshold_fraction);

    let out_map = args
        .out_map
        .unwrap_or_else(|| append_ext(&args.input, "saliency.png"));
    let out_box = args
        .out_box
        .unwrap_or_else(|| append_ext(&args.input, "box.json"));
    save_saliency_map(&map, &out_map)?;
    #[derive(serde::Serialize)]
    struct BoxJson {
        x0: usize,
        y0: usize,
        x1: usize,
        y1: usize,
        peak: f32,
    }
    let json = serde_json::to_string_pretty(&BoxJson {
        x0: sb.rect.x0,
        y0: sb.rect.y0,
        x1: sb.rect.x1,
        y1: sb.rect.y1,
        peak: sb.peak_score,
    })
    .expect("box serialization");
    atomic_write(&out_box, format!("{json}\n").as_bytes())?;
    eprintln!(
        "saliency: map -> {}, box ({},{})..({},{}) -> {}",
        out_map.display(),
        sb.rect.x0,
        sb.rect.y0,
        sb.rect.x1,
        sb.rect.y1,
        out_box.display()
    );
    Ok(())
}

fn append_ext(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    name.push('.');
    name.push_str(suffix);
    path.with_file_name(name)
}

fn cmd_augment(file: &FileConfig, args: AugmentArgs) -> Result<()> {
    let placement =
        parse_placement(args.placement.as_deref().or(file.augment.placement.as_deref()).unwrap_or("random"))?;
    let part = parse_part(args.part.as_deref().or(file.augment.part.as_deref()).unwrap_or("both"))?;
    let n_ops = args.n_ops.or(file.augment.n_ops).unwrap_or(2);
    let magnitude = args.magnitude.or(file.augment.magnitude).unwrap_or(15);
    if magnitude > 30 {
        return Err(Error::config(format!("--magnitude must be 0..=30, got {magnitude}")));
    }
    let cfg = PipelineConfig {
        placement,
        part,
        policy: RandAugPolicy::new(n_ops, magnitude),
        saliency: saliency_config(file, &args.saliency),
        master_seed: require_seed(file, args.seed, "augment")?,
    };
    let manifest = load_manifest(&args.input)?;
    let records =
        augment_dataset(&manifest, &cfg, &args.out, workers(file, args.workers))?;
    write_augment_manifest(&records, &args.out.join("manifest.jsonl"))?;
    let failures = records.iter().filter(|r| r.status != "ok").count();
    eprintln!(
        "augment: {} images -> {}, {} failure(s)",
        records.len() - failures,
        args.out.display(),
        failures
    );
    Ok(())
}

fn cmd_features(file: &FileConfig, args: FeaturesArgs) -> Result<()> {
    let manifest = load_manifest(&args.input)?;
    let spec = embedding_spec(file, &args.embedding)?;
    let set = embed_manifest(&manifest, &spec, workers(file, args.embedding.workers))?;
    write_features(&set, &args.out)?;
    eprintln!("features: {} vectors (dim {}) -> {}", set.records.len(), set.dim, args.out.display());
    Ok(())
}

fn cmd_balance(file: &FileConfig, args: BalanceArgs) -> Result<()> {
    let seed = require_seed(file, args.seed, "balance")?;
    let manifest = load_manifest(&args.input)?;
    let balanced = undersample_balance(&manifest, seed);
    write_manifest(&balanced, &args.out)?;
    let sizes: Vec<String> = balanced
        .group_sizes()
        .iter()
        .map(|(g, n)| format!("{g}={n}"))
        .collect();
    eprintln!("balance: {} -> {} ({})", manifest.len(), balanced.len(), sizes.join(", "));
    Ok(())
}

fn cmd_metrics(file: &FileConfig, args: MetricsArgs) -> Result<()> {
    let weights = weights(file, args.alpha, args.beta)?;
    let set = load_features(file, &args.input, &args.embedding)?;
    let entry = dataset_entry(&set, weights)?;
    let report = AuditReport::new(vec![entry]);
    write_report(&report, &args.report.out, parse_format(args.report.format.as_deref())?)?;
    eprintln!("metrics: report -> {}", args.report.out.display());
    Ok(())
}

fn cmd_iss(file: &FileConfig, args: IssArgs) -> Result<()> {
    let set = load_features(file, &args.input, &args.embedding)?;
    let vectors = set.vectors();
    let mut entry = ReportEntry::empty(set.name.clone(), "all");
    entry.iss_intra =
        Some(iss_intra(&vectors).map_err(|e| Error::data(format!("{}: {e}", set.name)))?);
    if let Some(cross_path) = &args.cross {
        let other = load_features(file, cross_path, &args.embedding)?;
        entry.iss_cross = Some(
            iss_cross(&vectors, &other.vectors())
                .map_err(|e| Error::data(format!("{} x {}: {e}", set.name, other.name)))?,
        );
        entry.group_set = format!("{}|{}", set.name, other.name);
    }
    let report = AuditReport::new(vec![entry]);
    write_report(&report, &args.report.out, parse_format(args.report.format.as_deref())?)?;
    eprintln!("iss: report -> {}", args.report.out.display());
    Ok(())
}

fn cmd_iias(file: &FileConfig, args: IiasArgs) -> Result<()> {
    let concepts = load_features(file, &args.concepts, &args.embedding)?;
    let male = load_features(file, &args.male, &args.embedding)?;
    let female = load_features(file, &args.female, &args.embedding)?;
    let score = iias(&concepts.vectors(), &male.vectors(), &female.vectors())
        .map_err(|e| Error::data(format!("{}: {e}", concepts.name)))?;
    let mut entry = ReportEntry::empty(concepts.name.clone(), "male|female");
    entry.iias = Some(score);
    let report = AuditReport::new(vec![entry]);
    write_report(&report, &args.report.out, parse_format(args.report.format.as_deref())?)?;
    eprintln!("iias: {score:+.6} -> {}", args.report.out.display());
    Ok(())
}

fn cmd_audit(file: &FileConfig, args: AuditArgs) -> Result<()> {
    let weights = weights(file, args.alpha, args.beta)?;
    let seed = if args.balance {
        Some(require_seed(file, args.seed, "audit --balance")?)
    } else {
        resolve_seed(file, args.seed)?
    };
    let spec = embedding_spec(file, &args.embedding)?;
    let n_workers = workers(file, args.embedding.workers);

    let mut entries = Vec::new();
    for root in &args.input {
        let mut manifest = scan_dataset(root)?;
        if args.balance {
            manifest = undersample_balance(&manifest, seed.expect("checked above"));
        }
        let set = embed_manifest(&manifest, &spec, n_workers)?;
        entries.push(dataset_entry(&set, weights)?);
    }
    let report = AuditReport::new(entries);
    write_report(&report, &args.report.out, parse_format(args.report.format.as_deref())?)?;
    eprintln!("audit: {} dataset(s) -> {}", args.input.len(), args.report.out.display());
    Ok(())
}
