//! `wikidiv` command-line driver.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use serde::Deserialize;
use thiserror::Error;

use wikidiv_core::align::store::{load_concepts, save_concepts};
use wikidiv_core::align::{build_ill_graph, concept_align};
use wikidiv_core::census::{subset_census, CensusOptions};
use wikidiv_core::esa::{
    build_index, select_intersection_concepts, select_random_concepts, BuildOptions, EsaIndex, KnowledgeBase,
    TextPipeline,
};
use wikidiv_core::experiment::{
    compare_to_baseline, cross_language_report, derive_seeds, same_language_baseline, sample_pairs, ExperimentReport,
};
use wikidiv_core::ingest::store::{load_artdb, save_artdb};
use wikidiv_core::ingest::{parse_dump_with_stats, resolve_interlanguage_links, resolve_links, DumpFormat};
use wikidiv_core::manifest::{write_report, RunManifest, Timings};
use wikidiv_core::oc::{oc_study, OcConfig};
use wikidiv_core::synth::{generate, SynthConfig};
use wikidiv_core::{ArticleSet, LanguageCode, ToolConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Data {
        context: String,
        #[source]
        source: wikidiv_core::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data { .. } => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

trait Context<T> {
    fn context(self, what: impl std::fmt::Display) -> CliResult<T>;
}

impl<T> Context<T> for wikidiv_core::Result<T> {
    fn context(self, what: impl std::fmt::Display) -> CliResult<T> {
        self.map_err(|source| CliError::Data {
            context: what.to_string(),
            source,
        })
    }
}

impl<T> Context<T> for std::io::Result<T> {
    fn context(self, what: impl std::fmt::Display) -> CliResult<T> {
        self.map_err(wikidiv_core::Error::from).context(what)
    }
}

#[derive(Debug, Parser)]
#[command(name = "wikidiv", version, about = "Multilingual Wikipedia diversity toolkit")]
pub struct Cli {
    /// TOML configuration (for `synth`, the generator configuration).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for randomized commands; generated and logged when omitted.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to available parallelism.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, default_value = "info")]
    pub log_level: log::LevelFilter,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic corpus and its ledger.
    Synth {
        #[arg(long)]
        out: PathBuf,
    },
    /// Parse a dump, resolve redirects and write an article database.
    Ingest {
        #[arg(long)]
        dump: PathBuf,
        #[arg(long)]
        lang: LanguageCode,
        /// Dump format; inferred from the extension when omitted.
        #[arg(long)]
        format: Option<Format>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the interlanguage-link graph and label concepts.
    Align {
        #[arg(long, num_args = 1.., required = true)]
        artdb: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Concept coverage across languages.
    Census {
        #[arg(long)]
        concepts: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        langs: Vec<LanguageCode>,
        /// Restrict the report to these languages.
        #[arg(long, num_args = 1..)]
        subset: Option<Vec<LanguageCode>>,
        #[arg(long)]
        include_disambiguation: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Overlap coefficient of outlinks across languages.
    Oc {
        #[arg(long)]
        concepts: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        artdb: Vec<PathBuf>,
        #[arg(long, num_args = 1.., required = true)]
        langs: Vec<LanguageCode>,
        /// Concepts to sample; all eligible when omitted.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build an ESA index.
    EsaBuild(EsaBuildArgs),
    /// Relatedness of two texts under one index.
    EsaSr {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        t1: String,
        #[arg(long)]
        t2: String,
    },
    /// Cross-language relatedness experiments.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Xml,
    Jsonl,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Selection {
    Intersection,
    Random,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Precision {
    F32,
    F64,
}

#[derive(Debug, Args)]
pub struct EsaBuildArgs {
    #[arg(long, num_args = 1.., required = true)]
    artdb: Vec<PathBuf>,
    #[arg(long, value_enum)]
    selection: Selection,
    /// Languages of the intersection selection.
    #[arg(long, num_args = 1..)]
    langs: Vec<LanguageCode>,
    /// Build only this language; otherwise `--out` is a directory.
    #[arg(long)]
    lang: Option<LanguageCode>,
    #[arg(long)]
    concepts: Option<PathBuf>,
    /// Random selection size.
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, value_enum, default_value = "f64")]
    precision: Precision,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum ExperimentCommand {
    /// Correlate relatedness scores across per-language indices.
    CrossLang {
        #[arg(long, num_args = 1.., required = true)]
        indices: Vec<PathBuf>,
        #[arg(long)]
        concepts: PathBuf,
        #[arg(long, default_value_t = 2000)]
        pairs: usize,
        /// Pairs (C, C) included in the total.
        #[arg(long, default_value_t = 2)]
        identity: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Same-language baseline over random knowledge bases.
    Baseline {
        #[arg(long)]
        artdb: PathBuf,
        #[arg(long, default_value_t = 16)]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        /// Reuse the pair sample of a cross-lang report and test against it.
        #[arg(long, conflicts_with = "concepts")]
        sample_from: Option<PathBuf>,
        /// Sample fresh pairs from these concepts instead.
        #[arg(long)]
        concepts: Option<PathBuf>,
        #[arg(long, default_value_t = 2000)]
        pairs: usize,
        #[arg(long, default_value_t = 2)]
        identity: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parses `argv` (program name first), runs the command, returns the exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let _ = env_logger::Builder::new()
        .filter_level(cli.log_level)
        .format_timestamp(None)
        .try_init();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.workers {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return 2;
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn seed_or_generate(cli: &Cli) -> u64 {
    cli.seed.unwrap_or_else(|| {
        let seed = rand::random();
        warn!("no --seed given; using generated seed {seed}");
        seed
    })
}

fn tool_config(cli: &Cli) -> CliResult<ToolConfig> {
    match &cli.config {
        Some(p) => ToolConfig::load(p).context(p.display()),
        None => Ok(ToolConfig::default()),
    }
}

fn manifest(name: &str, config: &ToolConfig) -> RunManifest {
    RunManifest::new(name, &config.canonical_json())
}

fn add_input(m: &mut RunManifest, path: &Path) -> CliResult<()> {
    m.input(path).context(path.display())?;
    Ok(())
}

fn load_sets(paths: &[PathBuf]) -> CliResult<Vec<ArticleSet>> {
    paths.iter().map(|p| load_artdb(p).context(p.display())).collect()
}

fn finish<P: serde::Serialize>(out: &Path, m: &RunManifest, payload: &P, timings: &Timings) -> CliResult<()> {
    write_report(out, m, payload).context(out.display())?;
    timings.write_sidecar(out).context(out.display())?;
    info!("wrote {}", out.display());
    Ok(())
}

fn run(cli: &Cli) -> CliResult<()> {
    let mut timings = Timings::new();
    match &cli.command {
        Command::Synth { out } => {
            let mut cfg = match &cli.config {
                Some(p) => SynthConfig::load(p).context(p.display())?,
                None => SynthConfig::default(),
            };
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            let corpus = generate(&cfg, &ToolConfig::default()).context("synth")?;
            corpus.write_to_dir(out).context(out.display())?;
            info!("wrote {} languages to {}", corpus.dumps.len(), out.display());
        }
        Command::Ingest {
            dump,
            lang,
            format,
            out,
        } => {
            let config = tool_config(cli)?;
            let format = match format {
                Some(Format::Xml) => DumpFormat::Xml,
                Some(Format::Jsonl) => DumpFormat::Jsonl,
                None if dump.extension().is_some_and(|e| e == "xml") => DumpFormat::Xml,
                None => DumpFormat::Jsonl,
            };
            let file = std::fs::File::open(dump).context(dump.display())?;
            let (set, stats) = parse_dump_with_stats(file, lang, format, &config).context(dump.display())?;
            let (set, resolve) = resolve_links(set, config.redirect_chain_limit);
            info!(
                "{lang}: {} articles, {} redirects rewritten, {} dangling links",
                set.len(),
                resolve.rewritten,
                resolve.dangling
            );
            save_artdb(out, &set, Some(&stats), Some(&resolve)).context(out.display())?;
        }
        Command::Align { artdb, out } => {
            let config = tool_config(cli)?;
            let mut sets = load_sets(artdb)?;
            resolve_interlanguage_links(&mut sets, config.redirect_chain_limit);
            let graph = build_ill_graph(&sets, config.redirect_chain_limit).context("ILL graph")?;
            let table = concept_align(&graph);
            info!("{} concepts from {} articles", table.len(), graph.stats.nodes);
            save_concepts(out, &table).context(out.display())?;
        }
        Command::Census {
            concepts,
            langs,
            subset,
            include_disambiguation,
            out,
            csv,
        } => {
            let config = tool_config(cli)?;
            let table = load_concepts(concepts).context(concepts.display())?;
            timings.lap("load");
            let chosen = subset.as_ref().unwrap_or(langs);
            if let Some(sub) = subset {
                if let Some(l) = sub.iter().find(|l| !langs.contains(l)) {
                    return Err(CliError::Usage(format!("subset language {l} is not in --langs")));
                }
            }
            let opts = CensusOptions {
                include_disambiguation: *include_disambiguation,
            };
            let report = subset_census(&table, chosen, opts).context("census")?;
            timings.lap("census");
            let mut m = manifest("census", &config);
            add_input(&mut m, concepts)?;
            m.param("langs", langs).param("subset", subset).param("options", opts);
            if let Some(csv) = csv {
                std::fs::write(csv, report.coverage_csv()).context(csv.display())?;
            }
            finish(out, &m, &report, &timings)?;
        }
        Command::Oc {
            concepts,
            artdb,
            langs,
            sample,
            out,
        } => {
            let config = tool_config(cli)?;
            let seed = seed_or_generate(cli);
            let table = load_concepts(concepts).context(concepts.display())?;
            let mut sets = load_sets(artdb)?;
            resolve_interlanguage_links(&mut sets, config.redirect_chain_limit);
            let rules = config.time_title_rules().context("time rules")?;
            timings.lap("load");
            let oc_config = OcConfig {
                sample: *sample,
                seed,
                ..Default::default()
            };
            let report = oc_study(&table, &sets, langs, &rules, &oc_config).context("oc study")?;
            timings.lap("study");
            let mut m = manifest("oc", &config);
            add_input(&mut m, concepts)?;
            for p in artdb {
                add_input(&mut m, p)?;
            }
            m.seed("sample", seed).param("langs", langs).param("sample", sample);
            finish(out, &m, &report, &timings)?;
        }
        Command::EsaBuild(args) => esa_build(cli, args)?,
        Command::EsaSr { index, t1, t2 } => {
            let config = tool_config(cli)?;
            let score = match EsaIndex::<f64>::load(index) {
                Ok(idx) => idx.relatedness(t1, t2, &TextPipeline::for_language(&idx.lang, &config)),
                Err(wikidiv_core::Error::Format(_)) => {
                    let idx = EsaIndex::<f32>::load(index).context(index.display())?;
                    idx.relatedness(t1, t2, &TextPipeline::for_language(&idx.lang, &config)) as f64
                }
                Err(e) => return Err(e).context(index.display()),
            };
            println!("{score}");
        }
        Command::Experiment(ExperimentCommand::CrossLang {
            indices,
            concepts,
            pairs,
            identity,
            out,
            csv,
        }) => {
            let config = tool_config(cli)?;
            let seed = seed_or_generate(cli);
            let table = load_concepts(concepts).context(concepts.display())?;
            let mut loaded = Vec::new();
            for p in indices {
                loaded.push(EsaIndex::<f64>::load(p).context(p.display())?);
            }
            timings.lap("load");
            let by_lang: BTreeMap<LanguageCode, &EsaIndex<f64>> = loaded.iter().map(|i| (i.lang.clone(), i)).collect();
            if by_lang.len() != loaded.len() {
                return Err(CliError::Usage("two indices share a language".into()));
            }
            let langs: Vec<LanguageCode> = by_lang.keys().cloned().collect();
            let pipelines = langs
                .iter()
                .map(|l| (l.clone(), TextPipeline::for_language(l, &config)))
                .collect();
            let sample = sample_pairs(&table, &langs, *pairs, *identity, seed).context("pair sample")?;
            let report = cross_language_report(sample, &by_lang, &pipelines).context("scoring")?;
            timings.lap("score");
            let mut m = manifest("experiment cross-lang", &config);
            add_input(&mut m, concepts)?;
            for p in indices {
                add_input(&mut m, p)?;
            }
            m.seed("pairs", seed).param("pairs", pairs).param("identity", identity);
            if let Some(csv) = csv {
                std::fs::write(csv, report.with_identity.to_csv()).context(csv.display())?;
            }
            finish(out, &m, &report, &timings)?;
        }
        Command::Experiment(ExperimentCommand::Baseline {
            artdb,
            k,
            n,
            sample_from,
            concepts,
            pairs,
            identity,
            out,
        }) => {
            let config = tool_config(cli)?;
            let seed = seed_or_generate(cli);
            let set = load_artdb(artdb).context(artdb.display())?;
            let mut m = manifest("experiment baseline", &config);
            add_input(&mut m, artdb)?;
            let (titles, mask, multilingual) = match (sample_from, concepts) {
                (Some(path), _) => {
                    let report = read_cross_lang(path)?;
                    add_input(&mut m, path)?;
                    let titles = report.sample.for_language(&set.lang).context(path.display())?.to_vec();
                    let mask = (0..report.sample.len())
                        .map(|i| report.sample.is_identity(i))
                        .collect::<Vec<bool>>();
                    (titles, mask, Some(report))
                }
                (None, Some(path)) => {
                    let table = load_concepts(path).context(path.display())?;
                    add_input(&mut m, path)?;
                    let sample = sample_pairs(&table, std::slice::from_ref(&set.lang), *pairs, *identity, seed)
                        .context("pair sample")?;
                    let titles = sample.for_language(&set.lang).context("pair sample")?.to_vec();
                    let mask = (0..sample.len()).map(|i| sample.is_identity(i)).collect::<Vec<bool>>();
                    (titles, mask, None)
                }
                (None, None) => {
                    return Err(CliError::Usage("baseline needs --sample-from or --concepts".into()));
                }
            };
            timings.lap("load");
            let seeds = derive_seeds(seed, *k);
            let options = BuildOptions {
                prune_below: config.esa.prune_below,
                normalize_concepts: config.esa.normalize_concepts,
                ..Default::default()
            };
            let report = same_language_baseline::<f64>(&set, &seeds, *n, &titles, &mask, &config, &options)
                .context("baseline")?;
            timings.lap("baseline");
            let significance = match &multilingual {
                Some(r) => Some(BaselineComparison {
                    with_identity: compare_to_baseline(&report.with_identity, &r.with_identity).ok(),
                    without_identity: compare_to_baseline(&report.without_identity, &r.without_identity).ok(),
                }),
                None => None,
            };
            m.seed("knowledge_bases", seed).param("k", k).param("n", n);
            finish(
                out,
                &m,
                &BaselinePayload {
                    baseline: report,
                    significance,
                },
                &timings,
            )?;
        }
    }
    Ok(())
}

#[derive(serde::Serialize)]
struct BaselineComparison {
    with_identity: Option<wikidiv_core::stats::TTest>,
    without_identity: Option<wikidiv_core::stats::TTest>,
}

#[derive(serde::Serialize)]
struct BaselinePayload {
    baseline: wikidiv_core::experiment::BaselineReport,
    /// Welch test on Fisher-z values, baseline against cross-language r.
    significance: Option<BaselineComparison>,
}

fn read_cross_lang(path: &Path) -> CliResult<ExperimentReport> {
    #[derive(Deserialize)]
    struct Envelope {
        payload: ExperimentReport,
    }
    let text = std::fs::read_to_string(path).context(path.display())?;
    let env: Envelope = serde_json::from_str(&text)
        .map_err(wikidiv_core::Error::from)
        .context(path.display())?;
    Ok(env.payload)
}

fn esa_build(cli: &Cli, args: &EsaBuildArgs) -> CliResult<()> {
    let config = tool_config(cli)?;
    let sets = load_sets(&args.artdb)?;
    let options = BuildOptions {
        prune_below: config.esa.prune_below,
        normalize_concepts: config.esa.normalize_concepts,
        ..Default::default()
    };
    let mut m = manifest("esa-build", &config);
    for p in &args.artdb {
        add_input(&mut m, p)?;
    }
    let kbs: Vec<KnowledgeBase> = match args.selection {
        Selection::Random => {
            let set = match (&args.lang, sets.len()) {
                (Some(l), _) => sets
                    .iter()
                    .find(|s| &s.lang == l)
                    .ok_or_else(|| CliError::Usage(format!("no --artdb for language {l}")))?,
                (None, 1) => &sets[0],
                (None, _) => {
                    return Err(CliError::Usage(
                        "random selection with several --artdb needs --lang".into(),
                    ))
                }
            };
            let seed = seed_or_generate(cli);
            m.seed("selection", seed);
            vec![select_random_concepts(set, args.n, seed).context("random selection")?]
        }
        Selection::Intersection => {
            let concepts = args
                .concepts
                .as_ref()
                .ok_or_else(|| CliError::Usage("intersection selection needs --concepts".into()))?;
            if args.langs.is_empty() {
                return Err(CliError::Usage("intersection selection needs --langs".into()));
            }
            let table = load_concepts(concepts).context(concepts.display())?;
            add_input(&mut m, concepts)?;
            let all = select_intersection_concepts(&table, &sets, &args.langs).context("intersection selection")?;
            match &args.lang {
                Some(l) => all.into_iter().filter(|kb| &kb.lang == l).collect(),
                None => all,
            }
        }
    };
    if kbs.is_empty() {
        return Err(CliError::Usage("--lang is not among --langs".into()));
    }
    let single = kbs.len() == 1 && (args.lang.is_some() || matches!(args.selection, Selection::Random));
    if !single {
        std::fs::create_dir_all(&args.out).context(args.out.display())?;
    }
    for kb in &kbs {
        let set = sets
            .iter()
            .find(|s| s.lang == kb.lang)
            .expect("selection language loaded");
        let texts = kb.texts(set, &config).context(&kb.lang)?;
        let pipeline = TextPipeline::for_language(&kb.lang, &config);
        let path = if single {
            args.out.clone()
        } else {
            args.out.join(format!("{}.esa", kb.lang))
        };
        match args.precision {
            Precision::F64 => build_index::<f64>(kb, &texts, &pipeline, &options)
                .context(&kb.lang)?
                .save(&path),
            Precision::F32 => build_index::<f32>(kb, &texts, &pipeline, &options)
                .context(&kb.lang)?
                .save(&path),
        }
        .context(path.display())?;
        info!("{}: {} concepts -> {}", kb.lang, kb.len(), path.display());
    }
    Ok(())
}
