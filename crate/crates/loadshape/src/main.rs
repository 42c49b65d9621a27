use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};

use loadshape::dwelling::{load_dataset, write_dwelling_file, SchemaMap};
use loadshape::formats::{self, FormatError};
use loadshape::keyvalue;
use loadshape::manifest::RunManifest;
use loadshape::parallel::{elbow_scan_parallel, kmeans_best_parallel};
use loadshape::svg::render_svg;
use loadshape_core::cleaning::{clean, CleaningPolicy};
use loadshape_core::cluster::{KMeansConfig, KRange};
use loadshape_core::daytype::{partition, Axes, DayTypeScheme};
use loadshape_core::profile::{profile_matrix, Grouping, SimilarityMode};
use loadshape_core::report::{overlay_reference, render_cluster_panels, render_elbow, PlotBundle};
use loadshape_core::synth::{generate, Masking, SynthSpec};

const DAYS: &str = "days.csv";
const ENVIRONMENT: &str = "environment.csv";
const LABELS: &str = "labels.csv";
const CLEAN_DAYS: &str = "clean_days.csv";
const PROFILES: &str = "profiles.csv";
const ELBOW: &str = "elbow.csv";
const CLUSTERING: &str = "clustering.json";

/// Household load-profile pipeline. Each stage reads and writes files in the run directory.
#[derive(Parser)]
#[command(name = "loadshape", version)]
struct Cli {
    /// Run directory (the output directory of `synth`).
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// `stage.key = value` settings; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Prefix of plot files and the run id recorded in the manifest.
    #[arg(long, global = true, default_value = "run")]
    run_id: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a planted-truth population of dwelling files.
    Synth(SynthArgs),
    /// Load a directory of dwelling files into day records.
    Ingest(IngestArgs),
    /// Assign day-type labels.
    Label(LabelArgs),
    /// Split valid and error days, optionally imputing.
    Clean(CleanArgs),
    /// Build representative profiles.
    Profile(ProfileArgs),
    /// Scan WCSS over a range of k.
    Elbow(ElbowArgs),
    /// Cluster the profiles.
    Cluster(ClusterArgs),
    /// Write plot data and charts.
    Report(ReportArgs),
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    days: Option<usize>,
    #[arg(long)]
    start: Option<NaiveDate>,
    /// Noise as a fraction of the mean amplitude.
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long)]
    hour_fraction: Option<f64>,
    #[arg(long)]
    day_fraction: Option<f64>,
}

#[derive(Args)]
struct IngestArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Column mapping, `field = column` lines.
    #[arg(long)]
    schema: Option<PathBuf>,
}

#[derive(Args)]
struct LabelArgs {
    #[arg(long)]
    scheme: Option<PathBuf>,
    /// One ISO date per line.
    #[arg(long)]
    holidays: Option<PathBuf>,
    /// Drop days whose weather is missing instead of failing.
    #[arg(long)]
    drop_unlabelable: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Omit,
    Impute,
    ImputeByDaytype,
}

#[derive(Args)]
struct CleanArgs {
    #[arg(long, value_enum)]
    policy: Option<Policy>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupingArg {
    PerProperty,
    PerPropertyAndLabel,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Amplitude,
    Shape,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long, value_enum)]
    grouping: Option<GroupingArg>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Args)]
struct ElbowArgs {
    #[arg(long)]
    kmin: Option<usize>,
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    max_iterations: Option<usize>,
}

#[derive(Args)]
struct ClusterArgs {
    /// Defaults to the suggestion of a previous `elbow`.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    max_iterations: Option<usize>,
}

#[derive(Args)]
struct ReportArgs {
    /// Reference profiles to overlay on the centroids.
    #[arg(long)]
    refs: Option<PathBuf>,
}

const STAGE_KEYS: [(&str, &[&str]); 8] = [
    ("synth", &["days", "start", "noise", "hour_fraction", "day_fraction"]),
    ("ingest", &[]),
    ("label", &["drop_unlabelable"]),
    ("clean", &["policy"]),
    ("profile", &["grouping", "mode"]),
    ("elbow", &["kmin", "kmax", "restarts", "max_iterations"]),
    ("cluster", &["k", "restarts", "max_iterations"]),
    ("report", &[]),
];

/// Settings from `--config`. `schema.*` keys map dwelling columns and
/// `scheme.*` keys configure day types.
#[derive(Default)]
struct RunConfig {
    path: Option<PathBuf>,
    entries: BTreeMap<String, (usize, String)>,
}

impl RunConfig {
    fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = formats::read_text(path)?;
        let at = |line: usize, reason: &dyn Display| anyhow!("{}:{line}: {reason}", path.display());
        let mut entries = BTreeMap::new();
        for e in keyvalue::parse(&text).map_err(|e| at(e.line, &e.reason))? {
            let (stage, key) = e.key.split_once('.').ok_or_else(|| at(e.line, &format!("{:?} is not stage.key", e.key)))?;
            let known = match stage {
                "schema" | "scheme" => true,
                _ => STAGE_KEYS.iter().any(|(s, keys)| *s == stage && keys.contains(&key)),
            };
            if !known {
                return Err(at(e.line, &format!("unknown setting {:?}", e.key)));
            }
            entries.insert(e.key, (e.line, e.value));
        }
        let config = Self { path: Some(path.to_path_buf()), entries };
        // Catch bad column and day-type settings before any stage runs.
        SchemaMap::from_pairs(config.section("schema")).map_err(|e| anyhow!("{}: {e}", path.display()))?;
        formats::apply_scheme(&mut DayTypeScheme::new(Axes::CALENDAR)?, config.section("scheme"))
            .map_err(|e| at(e.line, &e.reason))?;
        Ok(config)
    }

    fn get<T: FromStr>(&self, stage: &str, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        let Some((line, value)) = self.entries.get(&format!("{stage}.{key}")) else { return Ok(None) };
        let path = self.path.as_deref().unwrap_or(Path::new("")).display();
        value.parse().map(Some).map_err(|e| anyhow!("{path}:{line}: {stage}.{key}: {e}"))
    }

    fn get_enum<T: ValueEnum>(&self, stage: &str, key: &str) -> Result<Option<T>> {
        let Some((line, value)) = self.entries.get(&format!("{stage}.{key}")) else { return Ok(None) };
        let path = self.path.as_deref().unwrap_or(Path::new("")).display();
        T::from_str(value, false).map(Some).map_err(|e| anyhow!("{path}:{line}: {stage}.{key}: {e}"))
    }

    /// `(line, key, value)` of every `prefix.*` entry with the prefix removed.
    fn section<'a>(&'a self, prefix: &str) -> Vec<(usize, &'a str, &'a str)> {
        let prefix = format!("{prefix}.");
        self.entries
            .iter()
            .filter_map(|(k, (line, v))| k.strip_prefix(&prefix).map(|key| (*line, key, v.as_str())))
            .collect()
    }
}

/// Stages whose output depends on `--seed`.
const RANDOM_STAGES: [&str; 3] = ["synth", "elbow", "cluster"];

struct Run {
    dir: PathBuf,
    seed: u64,
    run_id: String,
    config: RunConfig,
}

impl Run {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Reads a file produced by an earlier stage, naming that stage if it is missing.
    fn require<T>(&self, name: &str, stage: &str, read: impl FnOnce(&Path) -> Result<T, FormatError>) -> Result<T> {
        let path = self.path(name);
        read(&path).map_err(|e| {
            if e.is_not_found() {
                anyhow!("{} has no {name}; run `loadshape {stage} --out {}` first", self.dir.display(), self.dir.display())
            } else {
                e.into()
            }
        })
    }

    fn record(&self, stage: &str, parameters: &[(&str, String)], outputs: &[String], update: impl FnOnce(&mut RunManifest)) -> Result<()> {
        let mut manifest = RunManifest::load_or_new(&self.dir, &self.run_id, self.seed)?;
        manifest.run_id.clone_from(&self.run_id);
        if RANDOM_STAGES.contains(&stage) {
            manifest.seed = self.seed;
        }
        if let Some(path) = &self.config.path {
            manifest.add_config_file(&path.display().to_string());
        }
        update(&mut manifest);
        let parameters = parameters.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        manifest.record_stage(&self.dir, stage, parameters, outputs)?;
        manifest.save(&self.dir)?;
        Ok(())
    }
}

fn pick<T>(flag: Option<T>, config: Option<T>, default: T) -> T {
    flag.or(config).unwrap_or(default)
}

fn synth(run: &Run, args: SynthArgs) -> Result<()> {
    let c = &run.config;
    let mut spec = SynthSpec::default().with_seed(run.seed);
    spec.days = pick(args.days, c.get("synth", "days")?, spec.days);
    spec.start = pick(args.start, c.get("synth", "start")?, spec.start);
    if let Some(noise) = args.noise.or(c.get("synth", "noise")?) {
        spec = spec.with_relative_noise(noise);
    }
    spec.masking = Masking {
        hour_fraction: pick(args.hour_fraction, c.get("synth", "hour_fraction")?, spec.masking.hour_fraction),
        day_fraction: pick(args.day_fraction, c.get("synth", "day_fraction")?, spec.masking.day_fraction),
    };
    let out = generate(&spec)?;
    std::fs::create_dir_all(&run.dir).with_context(|| format!("creating {}", run.dir.display()))?;
    let mut outputs = Vec::new();
    for id in out.dataset.property_ids() {
        let name = format!("{id}.csv");
        write_dwelling_file(&run.path(&name), out.dataset.days_of(id), |d| out.dataset.environment(d).cloned())?;
        outputs.push(name);
    }
    formats::write_json_compact(&run.path("ledger.json"), &out.ledger)?;
    outputs.push("ledger.json".into());
    println!("{} dwelling files, {} days each, ground truth in ledger.json", out.ledger.properties.len(), spec.days);
    run.record(
        "synth",
        &[
            ("days", spec.days.to_string()),
            ("start", spec.start.to_string()),
            ("noise_sigma", spec.noise_sigma.to_string()),
            ("hour_fraction", spec.masking.hour_fraction.to_string()),
            ("day_fraction", spec.masking.day_fraction.to_string()),
        ],
        &outputs,
        |_| {},
    )
}

fn ingest(run: &Run, args: IngestArgs) -> Result<()> {
    let mut pairs: Vec<(usize, String, String)> =
        run.config.section("schema").into_iter().map(|(l, k, v)| (l, k.to_string(), v.to_string())).collect();
    if let Some(path) = &args.schema {
        let text = formats::read_text(path)?;
        let entries = keyvalue::parse(&text).map_err(|e| anyhow!("{}:{}: {}", path.display(), e.line, e.reason))?;
        pairs.extend(entries.into_iter().map(|e| (e.line, e.key, e.value)));
    }
    let schema = SchemaMap::from_pairs(pairs.iter().map(|(l, k, v)| (*l, k.as_str(), v.as_str())))?;
    let loaded = load_dataset(&args.input, &schema)?;
    std::fs::create_dir_all(&run.dir).with_context(|| format!("creating {}", run.dir.display()))?;
    formats::write_days(&run.path(DAYS), loaded.dataset.days())?;
    formats::write_environment(&run.path(ENVIRONMENT), loaded.dataset.environment_records())?;
    formats::write_parse_reports(&run.path("parse_report.csv"), &loaded.reports)?;
    formats::write_environment_conflicts(&run.path("environment_conflicts.csv"), &loaded.merge)?;
    println!("{} properties, {} day records", loaded.dataset.property_ids().len(), loaded.dataset.days().len());
    let rejected: usize = loaded.reports.iter().map(|r| r.issues.len()).sum();
    if rejected > 0 {
        println!("{rejected} unusable cells read as missing, see parse_report.csv");
    }
    let input = args.input.display().to_string();
    let mut params = vec![("in", input.clone())];
    if let Some(path) = &args.schema {
        params.push(("schema", path.display().to_string()));
    }
    let outputs = [DAYS, ENVIRONMENT, "parse_report.csv", "environment_conflicts.csv"].map(String::from);
    run.record("ingest", &params, &outputs, |m| m.input_dir = Some(input))
}

fn label(run: &Run, args: LabelArgs) -> Result<()> {
    let dataset = run.require(DAYS, "ingest", |p| formats::read_dataset(p, Some(&run.path(ENVIRONMENT))))?;
    let mut scheme = DayTypeScheme::new(Axes::CALENDAR)?;
    formats::apply_scheme(&mut scheme, run.config.section("scheme")).map_err(|e| anyhow!("config:{}: {}", e.line, e.reason))?;
    if let Some(path) = &args.scheme {
        scheme = formats::read_scheme(path, scheme)?;
    }
    if let Some(path) = &args.holidays {
        scheme = scheme.with_holidays(formats::read_holidays(path)?);
    }
    let drop = args.drop_unlabelable || run.config.get("label", "drop_unlabelable")?.unwrap_or(false);
    let partition = partition(&dataset, &scheme, drop)?;
    formats::write_labels(&run.path(LABELS), &partition.labeling())?;
    println!("{} day types, {} days dropped as unlabelable", partition.cells.len(), partition.dropped.len());
    let mut params = vec![("drop_unlabelable", drop.to_string())];
    if let Some(path) = &args.scheme {
        params.push(("scheme", path.display().to_string()));
    }
    if let Some(path) = &args.holidays {
        params.push(("holidays", path.display().to_string()));
    }
    run.record("label", &params, &[LABELS.into()], |_| {})
}

fn clean_stage(run: &Run, args: CleanArgs) -> Result<()> {
    let policy = pick(args.policy, run.config.get_enum("clean", "policy")?, Policy::Omit);
    let (policy, name) = match policy {
        Policy::Omit => (CleaningPolicy::Omit, "omit"),
        Policy::Impute => (CleaningPolicy::Impute, "impute"),
        Policy::ImputeByDaytype => (CleaningPolicy::ImputeByDayType, "impute-by-daytype"),
    };
    let dataset = run.require(DAYS, "ingest", |p| formats::read_dataset(p, None))?;
    let labels = match policy {
        CleaningPolicy::ImputeByDayType => Some(run.require(LABELS, "label", formats::read_labels)?),
        _ => None,
    };
    let outcome = clean(&dataset, policy, labels.as_ref())?;
    formats::write_days(&run.path(CLEAN_DAYS), outcome.dataset.days())?;
    formats::write_validity(&run.path("validity.csv"), &outcome.report)?;
    formats::write_text(&run.path("validity.txt"), &format!("{}\n", outcome.report))?;
    formats::write_imputation_log(&run.path("imputation_log.csv"), &outcome.log)?;
    formats::write_cleaning_notes(&run.path("cleaning_notes.csv"), &outcome.notes)?;
    println!("{}", outcome.report);
    if policy != CleaningPolicy::Omit {
        println!("{} days imputed, {} notes", outcome.log.len(), outcome.notes.len());
    }
    let outputs = [CLEAN_DAYS, "validity.csv", "validity.txt", "imputation_log.csv", "cleaning_notes.csv"].map(String::from);
    run.record("clean", &[("policy", name.into())], &outputs, |_| {})
}

fn profile(run: &Run, args: ProfileArgs) -> Result<()> {
    let grouping = pick(args.grouping, run.config.get_enum("profile", "grouping")?, GroupingArg::PerProperty);
    let mode = match pick(args.mode, run.config.get_enum("profile", "mode")?, ModeArg::Amplitude) {
        ModeArg::Amplitude => SimilarityMode::Amplitude,
        ModeArg::Shape => SimilarityMode::Shape,
    };
    let dataset = run.require(CLEAN_DAYS, "clean", |p| formats::read_dataset(p, None))?;
    let labels;
    let (grouping, grouping_name) = match grouping {
        GroupingArg::PerProperty => (Grouping::PerProperty, "per-property"),
        GroupingArg::PerPropertyAndLabel => {
            labels = run.require(LABELS, "label", formats::read_labels)?;
            (Grouping::PerPropertyAndLabel(&labels), "per-property-and-label")
        }
    };
    let matrix = profile_matrix(&dataset, grouping, mode);
    if matrix.profiles.is_empty() {
        bail!("no profiles could be built from {}", run.path(CLEAN_DAYS).display());
    }
    formats::write_profiles(&run.path(PROFILES), &matrix.profiles)?;
    formats::write_dropped_profiles(&run.path("dropped_profiles.csv"), &matrix.dropped)?;
    println!("{} profiles, {} cells dropped", matrix.profiles.len(), matrix.dropped.len());
    let params = [("grouping", grouping_name.to_string()), ("mode", mode.name().to_string())];
    run.record("profile", &params, &[PROFILES.into(), "dropped_profiles.csv".into()], |_| {})
}

fn kmeans_config(run: &Run, stage: &str, k: usize, restarts: Option<usize>, max_iterations: Option<usize>) -> Result<KMeansConfig> {
    let c = &run.config;
    Ok(KMeansConfig::new(k)?
        .with_restarts(pick(restarts, c.get(stage, "restarts")?, KMeansConfig::DEFAULT_RESTARTS))?
        .with_max_iterations(pick(max_iterations, c.get(stage, "max_iterations")?, KMeansConfig::DEFAULT_MAX_ITERATIONS))
        .with_seed(run.seed))
}

fn config_params(config: &KMeansConfig) -> Vec<(&'static str, String)> {
    vec![
        ("restarts", config.restarts.to_string()),
        ("max_iterations", config.max_iterations.to_string()),
        ("seed", config.seed.to_string()),
    ]
}

fn elbow(run: &Run, args: ElbowArgs) -> Result<()> {
    let c = &run.config;
    let range = KRange::new(pick(args.kmin, c.get("elbow", "kmin")?, 2), pick(args.kmax, c.get("elbow", "kmax")?, 10))?;
    let config = kmeans_config(run, "elbow", 1, args.restarts, args.max_iterations)?;
    let profiles = run.require(PROFILES, "profile", formats::read_profiles)?;
    let rows: Vec<_> = profiles.iter().map(|p| *p.values()).collect();
    let report = elbow_scan_parallel(&rows, range, &config)?;
    formats::write_elbow(&run.path(ELBOW), &report)?;
    formats::write_json(&run.path("elbow.json"), &report)?;
    for e in &report.entries {
        println!("k = {:>2}  WCSS = {}", e.k, e.wcss);
    }
    if report.degenerate {
        println!("no clear elbow; suggested k = {} is arbitrary", report.suggested_k);
    } else {
        println!("suggested k = {}", report.suggested_k);
    }
    let mut params = vec![("kmin", range.k_min.to_string()), ("kmax", range.k_max.to_string())];
    params.extend(config_params(&config));
    run.record("elbow", &params, &[ELBOW.into(), "elbow.json".into()], |_| {})
}

fn cluster(run: &Run, args: ClusterArgs) -> Result<()> {
    let k = match args.k.map(|k| k as usize).or(run.config.get("cluster", "k")?) {
        Some(k) => k,
        None => {
            let report = run
                .require(ELBOW, "elbow", formats::read_elbow)
                .context("cluster needs --k or a previous elbow scan")?;
            report.suggested_k
        }
    };
    let config = kmeans_config(run, "cluster", k, args.restarts, args.max_iterations)?;
    let profiles = run.require(PROFILES, "profile", formats::read_profiles)?;
    let rows: Vec<_> = profiles.iter().map(|p| *p.values()).collect();
    let result = kmeans_best_parallel(&rows, &config)?;
    if result.monotonicity_violations > 0 {
        log::warn!("WCSS rose between iterations {} times", result.monotonicity_violations);
    }
    let doc = formats::ClusteringDocument::new(config, &profiles, &result);
    formats::write_clustering(&run.path(CLUSTERING), &doc)?;
    formats::write_assignments(&run.path("assignments.csv"), &doc)?;
    println!("k = {k}, total WCSS = {}, sizes {:?}", result.total_wcss, result.cluster_sizes());
    let mut params = vec![("k", k.to_string())];
    params.extend(config_params(&config));
    run.record("cluster", &params, &[CLUSTERING.into(), "assignments.csv".into()], |_| {})
}

/// Writes a bundle's series as CSV, then draws the SVG from what was written.
fn write_plot(run: &Run, bundle: &PlotBundle, outputs: &mut Vec<String>) -> Result<()> {
    let stem = format!("plots/{}_{}", run.run_id, bundle.name);
    let csv = format!("{stem}.csv");
    formats::write_plot_csv(&run.path(&csv), &bundle.series)?;
    let mut drawn = PlotBundle::new(&bundle.name, &bundle.title, &bundle.x_label, &bundle.y_label);
    drawn.series = formats::read_plot_csv(&run.path(&csv))?;
    drawn.annotations.clone_from(&bundle.annotations);
    let svg = format!("{stem}.svg");
    formats::write_text(&run.path(&svg), &render_svg(&drawn))?;
    outputs.extend([csv, svg]);
    Ok(())
}

fn report(run: &Run, args: ReportArgs) -> Result<()> {
    let doc = run.require(CLUSTERING, "cluster", formats::read_clustering)?;
    let profiles = run.require(PROFILES, "profile", formats::read_profiles)?;
    let same = doc.profiles.len() == profiles.len()
        && doc.profiles.iter().zip(&profiles).all(|(r, p)| r.id == p.source().id && r.label == p.source().label);
    if !same {
        bail!("{CLUSTERING} was built from other profiles than {PROFILES}; rerun `loadshape cluster`");
    }
    std::fs::create_dir_all(run.path("plots")).context("creating plots directory")?;
    let mut outputs = Vec::new();
    for panel in render_cluster_panels(&doc.result(), &profiles)? {
        write_plot(run, &panel, &mut outputs)?;
    }
    match formats::read_elbow(&run.path(ELBOW)) {
        Ok(elbow) => write_plot(run, &render_elbow(&elbow)?, &mut outputs)?,
        Err(e) if e.is_not_found() => {}
        Err(e) => return Err(e.into()),
    }
    let mut params = Vec::new();
    if let Some(path) = &args.refs {
        let refs = formats::read_references(path)?;
        let overlay = overlay_reference(&doc.centroids, &refs)?;
        write_plot(run, &overlay.bundle, &mut outputs)?;
        formats::write_overlay_distances(&run.path("overlay_distances.csv"), &overlay.distances)?;
        outputs.push("overlay_distances.csv".into());
        params.push(("refs", path.display().to_string()));
    }
    println!("{} plot files in {}", outputs.iter().filter(|o| o.starts_with("plots/")).count(), run.path("plots").display());
    run.record("report", &params, &outputs, |_| {})
}

fn execute(cli: Cli) -> Result<()> {
    let run = Run { dir: cli.out, seed: cli.seed, run_id: cli.run_id, config: RunConfig::load(cli.config.as_deref())? };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n as usize);
    }
    let pool = pool.build()?;
    pool.install(|| match cli.command {
        Command::Synth(a) => synth(&run, a),
        Command::Ingest(a) => ingest(&run, a),
        Command::Label(a) => label(&run, a),
        Command::Clean(a) => clean_stage(&run, a),
        Command::Profile(a) => profile(&run, a),
        Command::Elbow(a) => elbow(&run, a),
        Command::Cluster(a) => cluster(&run, a),
        Command::Report(a) => report(&run, a),
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
