use std::error::Error;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use certpipe::document::parse_document;
use certpipe::eval::{
    cer_inputs, cer_report, date_accuracy, date_pairs, emit_cer, emit_report, load_eval_gold, name_accuracy,
    name_pairs, NameSource, ReportFormat,
};
use certpipe::extract::{backend_by_name, ExtractedRecord};
use certpipe::inventory::{build_inventory, clean, CleanMode, InventoryOptions};
use certpipe::jsonio;
use certpipe::lexicon::load_lexicon;
use certpipe::linking::{build_link_groups, link_stats, load_gold_rows, rows_from_records, ColumnMap};
use certpipe::pipeline::server::{serve, ServeOptions};
use certpipe::pipeline::{
    collect_documents, correct_records, extract_corpus, load_lexicon_opt, load_tables, merge_corrections, run_pipeline,
    with_workers, ConfigOverrides, CorrectionEvent, PipelineConfig, ReviewStore, CONFIG_ENV, EVENTS_FILE,
};
use certpipe::synth;

type Result<T> = std::result::Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "certpipe", version, about = "Post-process HTR output of death certificates into linked records")]
struct Cli {
    /// Pipeline config file (TOML).
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count scans per year and district and report gaps and duplicates.
    Inventory {
        root: PathBuf,
        /// Write the full report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Remove identical copies and set second scans aside (dry run by default).
    Clean {
        root: PathBuf,
        #[arg(long)]
        apply: bool,
        /// Action log, one JSON line per action.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Convert HTR documents (JSON or page XML) to canonical document JSON.
    Ingest {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract deceased names, death dates and mentions.
    Extract {
        /// Document files or directories.
        #[arg(required = true)]
        docs: Vec<PathBuf>,
        #[arg(long)]
        backend: Option<String>,
        #[arg(long)]
        tables: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Complete names, run the lexicon gate and attach correction suggestions.
    Correct {
        records: PathBuf,
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        min_freq: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Group person rows by name and birth-year window.
    Link {
        /// Gold rows (`.csv`) or extracted records (`.jsonl`).
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        stats: Option<PathBuf>,
        #[arg(long)]
        tolerance: Option<u32>,
        #[arg(long)]
        any_order: bool,
    },
    /// Score predictions against gold.
    Eval {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        metric: Metric,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long)]
        max_dist: Option<usize>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every stage with the config and flag overrides.
    Run(RunArgs),
    /// Serve the review queue over HTTP.
    ReviewServe {
        /// Review store directory; defaults to the config's.
        #[arg(long)]
        store: Option<PathBuf>,
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: SocketAddr,
        /// Shared token required in the x-certpipe-token header.
        #[arg(long, env = "CERTPIPE_TOKEN", hide_env_values = true)]
        token: Option<String>,
        /// Static files (the review UI build) to serve at `/`.
        #[arg(long = "static")]
        static_dir: Option<PathBuf>,
    },
    /// Apply review events to records and grow the lexicon.
    Merge {
        records: PathBuf,
        /// Review store directory holding the event log.
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Where to write the merged lexicon.
        #[arg(long)]
        lexicon_out: Option<PathBuf>,
    },
    /// Write a seeded synthetic corpus with truth, gold and lexicon files.
    Synth {
        dir: PathBuf,
        #[arg(long, default_value_t = synth::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = synth::DEFAULT_DOCUMENTS)]
        documents: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Metric {
    Names,
    NamesCorrected,
    NamesAnyOrder,
    Dates,
    Cer,
    All,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    scans: Option<PathBuf>,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    tables: Option<PathBuf>,
    #[arg(long)]
    gold: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    review_store: Option<PathBuf>,
    #[arg(long)]
    backend: Option<String>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    min_freq: Option<u64>,
    #[arg(long)]
    max_dist: Option<usize>,
    #[arg(long)]
    tolerance: Option<u32>,
    #[arg(long)]
    any_order: bool,
}

impl RunArgs {
    fn overrides(self) -> ConfigOverrides {
        ConfigOverrides {
            corpus: self.corpus,
            scans: self.scans,
            lexicon: self.lexicon,
            tables: self.tables,
            gold: self.gold,
            out: self.out,
            review_store: self.review_store,
            backend: self.backend,
            workers: self.workers,
            min_freq: self.min_freq,
            max_dist: self.max_dist,
            tolerance: self.tolerance,
            any_order: self.any_order.then_some(true),
        }
    }
}

fn expand_documents(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for input in inputs {
        if input.is_dir() {
            out.extend(collect_documents(input)?);
        } else {
            out.push(input.clone());
        }
    }
    Ok(out)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, text).map_err(|e| format!("writing {}: {e}", path.display()).into())
}

fn run(cli: Cli) -> Result<()> {
    let config = || PipelineConfig::discover(cli.config.as_deref());
    match cli.command {
        Command::Inventory { root, json } => {
            let report = build_inventory(&root, &InventoryOptions::default())?;
            println!("{} scan files, {} certificates", report.scan_files, report.total_count());
            println!("{} duplicate sets", report.duplicate_sets.len());
            println!("{} missing districts, {} extra", report.missing_districts.len(), report.extra_districts.len());
            if !report.missing_years.is_empty() {
                println!("missing years: {:?}", report.missing_years);
            }
            if let Some(path) = json {
                jsonio::write_json(&path, &report)?;
            }
        }
        Command::Clean { root, apply, log } => {
            let report = build_inventory(&root, &InventoryOptions::default())?;
            let mode = if apply { CleanMode::Apply } else { CleanMode::DryRun };
            let plan = clean(&root, &report, mode, log.as_deref())?;
            for action in &plan.actions {
                println!("{}", jsonio::to_sorted_line(action));
            }
            if !apply && !plan.actions.is_empty() {
                eprintln!("dry run: {} actions; pass --apply to perform them", plan.actions.len());
            }
        }
        Command::Ingest { files, out } => {
            std::fs::create_dir_all(&out)?;
            let mut failed = 0;
            for path in expand_documents(&files)? {
                match parse_document(&path) {
                    Ok(parsed) => {
                        for w in &parsed.warnings {
                            log::warn!("{}: {w:?}", path.display());
                        }
                        let target = out.join(format!("{}.json", parsed.document.scan_id.stem()));
                        write_text(&target, &(parsed.document.to_json_string() + "\n"))?;
                    }
                    Err(e) => {
                        log::error!("{}: {e}", path.display());
                        failed += 1;
                    }
                }
            }
            if failed > 0 {
                return Err(format!("{failed} documents could not be read").into());
            }
        }
        Command::Extract { docs, backend, tables, out } => {
            let config = config()?;
            let tables = load_tables(tables.as_deref().or(config.tables.as_deref()))?;
            let backend = backend_by_name(backend.as_deref().unwrap_or(&config.backend), tables)?;
            let paths = expand_documents(&docs)?;
            let (records, skipped) = with_workers(config.workers, || {
                extract_corpus(Path::new(""), &paths, backend.as_ref(), &config.layout)
            })?;
            for s in &skipped {
                log::warn!("skipped {}: {}", s.path, s.reason);
            }
            write_text(&out, &jsonio::jsonl_string(&records))?;
            eprintln!("{} records, {} skipped", records.len(), skipped.len());
        }
        Command::Correct { records, lexicon, min_freq, out } => {
            let config = config()?;
            let records: Vec<ExtractedRecord> = jsonio::read_jsonl(&records)?;
            let lexicon = load_lexicon_opt(lexicon.as_deref().or(config.lexicon.as_deref()))?;
            if lexicon.is_none() {
                log::warn!("no lexicon: names are completed but not gated");
            }
            let corrected =
                correct_records(&records, lexicon.as_ref(), min_freq.unwrap_or(config.correction.min_freq));
            write_text(&out, &jsonio::jsonl_string(&corrected))?;
            let gated = corrected.iter().filter(|r| r.is_gated()).count();
            eprintln!("{} records, {gated} for review", corrected.len());
        }
        Command::Link { input, out, stats, tolerance, any_order } => {
            let mut options = config()?.link;
            if let Some(t) = tolerance {
                options.tolerance = t;
            }
            options.any_order |= any_order;
            let is_jsonl = input.extension().is_some_and(|e| e.eq_ignore_ascii_case("jsonl"));
            let rows = if is_jsonl {
                rows_from_records(&jsonio::read_jsonl::<ExtractedRecord>(&input)?)
            } else {
                let loaded = load_gold_rows(&input, &ColumnMap::default())?;
                for m in &loaded.malformed {
                    log::warn!("{} line {}: {}", input.display(), m.line, m.reason);
                }
                loaded.rows
            };
            let groups = build_link_groups(&rows, &options);
            let summary = link_stats(&groups, &rows, &options);
            jsonio::write_json(&out, &groups)?;
            match stats {
                Some(path) => jsonio::write_json(&path, &summary)?,
                None => println!("{}", jsonio::to_sorted_pretty(&summary)),
            }
        }
        Command::Eval { gold, pred, metric, format, max_dist, out } => {
            let format: ReportFormat = format.parse()?;
            let max_dist = max_dist.unwrap_or(config()?.correction.max_dist);
            let gold = load_eval_gold(&gold)?;
            let records: Vec<ExtractedRecord> = jsonio::read_jsonl(&pred)?;
            let mut reports = Vec::new();
            let wants = |m: Metric| metric == m || metric == Metric::All;
            if wants(Metric::Names) {
                reports.push(name_accuracy(&name_pairs(&gold, &records, NameSource::Extracted), max_dist, false)?);
            }
            if wants(Metric::NamesCorrected) {
                let mut r = name_accuracy(&name_pairs(&gold, &records, NameSource::Corrected), max_dist, false)?;
                r.metric = "names_corrected".into();
                reports.push(r);
            }
            if wants(Metric::NamesAnyOrder) {
                reports.push(name_accuracy(&name_pairs(&gold, &records, NameSource::Extracted), max_dist, true)?);
            }
            if wants(Metric::Dates) {
                reports.push(date_accuracy(&date_pairs(&gold, &records))?);
            }
            let mut text = if reports.is_empty() { String::new() } else { emit_report(&reports, format) };
            if wants(Metric::Cer) {
                let inputs = cer_inputs(&gold, &records);
                if !inputs.is_empty() || metric == Metric::Cer {
                    if !text.is_empty() {
                        text.push('\n');
                    }
                    text.push_str(&emit_cer(&cer_report(&inputs)?, format));
                }
            }
            match out {
                Some(path) => write_text(&path, &text)?,
                None => print!("{text}"),
            }
        }
        Command::Run(args) => {
            let mut config = config()?;
            config.apply(args.overrides());
            let summary = run_pipeline(&config)?;
            println!("{}", jsonio::to_sorted_pretty(&summary));
        }
        Command::ReviewServe { store, bind, token, static_dir } => {
            let dir = match store {
                Some(dir) => dir,
                None => config()?.review_dir(),
            };
            let store = Arc::new(ReviewStore::open(&dir)?);
            let options = ServeOptions { token, static_dir };
            tokio::runtime::Runtime::new()?.block_on(serve(store, bind, options))?;
        }
        Command::Merge { records, store, lexicon, out, lexicon_out } => {
            let records: Vec<ExtractedRecord> = jsonio::read_jsonl(&records)?;
            let events: Vec<CorrectionEvent> = jsonio::read_jsonl(&store.join(EVENTS_FILE))?;
            let lexicon = match &lexicon {
                Some(path) => load_lexicon(path)?.lexicon,
                None => certpipe::lexicon::Lexicon::from_counts(std::iter::empty::<(&str, u64)>(), "empty")?,
            };
            let merged = merge_corrections(&records, &events, &lexicon)?;
            write_text(&out, &jsonio::jsonl_string(&merged.records))?;
            if let Some(path) = lexicon_out {
                write_text(&path, &merged.lexicon.to_csv_string())?;
            }
            eprintln!("{} events, {} confirmed tokens", events.len(), merged.confirmed_tokens);
        }
        Command::Synth { dir, seed, documents } => {
            synth::generate(seed, documents).write(&dir)?;
            eprintln!("{documents} documents written to {}", dir.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).parse_env("CERTPIPE_LOG").init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
