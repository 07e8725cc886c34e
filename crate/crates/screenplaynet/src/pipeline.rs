//! End-to-end pipeline: parse -> extract -> build -> metrics -> export.
//!
//! `run_pipeline` writes `report.json`, `stats_table.csv`, `rankings.csv`,
//! one GraphML file per family plus the flattened graph, and
//! `manifest.json`. Outputs are deterministic for a fixed seed: two runs on
//! identical inputs differ only in the manifest timestamp.

use crate::entities::{
    harvest_entities, load_stopword_file, register_keywords, select_keywords, tfidf_scores,
    tokenize_conversations, ConversationTokens, CurationConfig, EntityCatalog, EntityKind,
    ExtractError, LdaModel,
};
use crate::export::{export_graphml, write_rankings_csv, write_stats_csv};
use crate::graph::{appearance_counts, build_graph, subgraph, GraphError, MultilayerGraph};
use crate::metrics::MetricsError;
use crate::parser::{
    calibrate_layout, chunk_scenes, parse_heading, parse_scene_body, segment_conversations,
    ParseError, Scene,
};
use crate::report::{
    all_rank_tables, reference_comparison, EntityCounts, ReferenceStats, Report, ViewStatsRow,
    VIEW_ORDER,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Pipeline failure with stage attribution; the display form is always
/// `<stage>: <cause>`.
#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("input: {0}")]
    Input(String),
    #[error("parse: {0}")]
    Parse(#[from] ParseError),
    #[error("extract: {0}")]
    Extract(#[from] ExtractError),
    #[error("build: {0}")]
    Build(#[from] GraphError),
    #[error("metrics: {0}")]
    Metrics(#[from] MetricsError),
    #[error("export: {0}")]
    Export(String),
}

impl PipelineError {
    /// Process exit code: 1 input error, 2 pipeline error, 3 export error.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Input(_) => 1,
            PipelineError::Parse(_)
            | PipelineError::Extract(_)
            | PipelineError::Build(_)
            | PipelineError::Metrics(_) => 2,
            PipelineError::Export(_) => 3,
        }
    }
}

/// Optional knobs for a run.
#[derive(Debug, Clone, Default)]
pub struct PipelineOptions {
    /// Overrides the LDA seed from the config.
    pub seed_override: Option<u64>,
    /// Extra stopwords, one token per line; merged into the config set.
    pub stopwords_path: Option<PathBuf>,
    /// Reference statistics to print side by side in the report.
    pub reference_path: Option<PathBuf>,
    /// Top-k for rank tables.
    pub rank_k: usize,
}

impl PipelineOptions {
    pub fn rank_k_or_default(&self) -> usize {
        if self.rank_k == 0 {
            5
        } else {
            self.rank_k
        }
    }
}

/// Everything a run determines, echoed for reproducibility. Two manifests
/// for the same inputs and seed differ only in `timestamp_unix`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub script_path: String,
    pub config_path: String,
    pub out_dir: String,
    pub seed: u64,
    pub lda_topics: usize,
    pub lda_alpha: f64,
    pub lda_beta: f64,
    pub lda_iterations: usize,
    pub keyword_top_n: usize,
    pub description_margin: usize,
    pub cue_extra_indent: usize,
    /// SHA-256 over the script and config bytes (and stopword file when
    /// given).
    pub input_sha256: String,
    pub timestamp_unix: u64,
}

/// In-memory results of the analysis stages, before export.
pub struct PipelineRun {
    pub scenes: Vec<Scene>,
    pub conversations: Vec<ConversationTokens>,
    pub catalog: EntityCatalog,
    pub graph: MultilayerGraph,
    pub report: Report,
    pub manifest: RunManifest,
}

fn read_input(path: &Path, what: &str) -> Result<String, PipelineError> {
    std::fs::read_to_string(path)
        .map_err(|e| PipelineError::Input(format!("cannot read {what} {}: {e}", path.display())))
}

/// Run every analysis stage without touching the output directory.
pub fn analyze(
    script_path: &Path,
    config_path: &Path,
    options: &PipelineOptions,
) -> Result<PipelineRun, PipelineError> {
    // input
    let script_text = read_input(script_path, "script")?;
    let config_text = read_input(config_path, "config")?;
    let mut config = CurationConfig::parse(&config_text)
        .map_err(|e| PipelineError::Input(format!("config {}: {e}", config_path.display())))?;
    let mut hasher = Sha256::new();
    hasher.update(script_text.as_bytes());
    hasher.update(config_text.as_bytes());
    if let Some(stopwords_path) = &options.stopwords_path {
        let text = read_input(stopwords_path, "stopword file")?;
        hasher.update(text.as_bytes());
        config
            .stopwords
            .extend(load_stopword_file(stopwords_path).map_err(|e| {
                PipelineError::Input(format!("stopword file {}: {e}", stopwords_path.display()))
            })?);
    }
    let reference: Option<ReferenceStats> = match &options.reference_path {
        Some(path) => {
            let text = read_input(path, "reference file")?;
            Some(serde_json::from_str(&text).map_err(|e| {
                PipelineError::Input(format!("reference file {}: {e}", path.display()))
            })?)
        }
        None => None,
    };
    if let Some(seed) = options.seed_override {
        config.keyword_params.lda.seed = seed;
    }
    let input_sha256 = format!("{:x}", hasher.finalize());

    // parse
    log::info!("parsing {}", script_path.display());
    let chunks = chunk_scenes(&script_text)?;
    let layout = calibrate_layout(&chunks);
    let scenes: Vec<Scene> = chunks
        .iter()
        .enumerate()
        .map(|(index, chunk)| Scene {
            index,
            header: parse_heading(&chunk.heading),
            blocks: parse_scene_body(chunk, index, &layout),
        })
        .collect();
    log::info!(
        "parsed {} scenes (margin {})",
        scenes.len(),
        layout.description_margin
    );

    // extract
    let mut catalog = harvest_entities(&scenes, &config)?;
    let conversations: Vec<_> = scenes.iter().flat_map(segment_conversations).collect();
    let conversation_tokens = tokenize_conversations(&conversations, &config);
    let docs: Vec<Vec<String>> = conversation_tokens.iter().map(|c| c.all_tokens()).collect();
    let keywords = if config.keyword_params.top_n == 0 || docs.iter().all(|d| d.is_empty()) {
        Vec::new()
    } else {
        let tfidf = tfidf_scores(&docs)?;
        let model = LdaModel::train(&docs, config.keyword_params.lda)?;
        select_keywords(&model, &tfidf, &config)
    };
    register_keywords(&mut catalog, &keywords, &conversation_tokens)?;
    log::info!(
        "harvested {} characters, {} locations, {} keywords",
        catalog.of_kind(EntityKind::Character).count(),
        catalog.of_kind(EntityKind::Location).count(),
        catalog.of_kind(EntityKind::Keyword).count()
    );

    // build
    let graph = build_graph(&scenes, &conversation_tokens, &catalog)?;

    // metrics
    let views: Vec<ViewStatsRow> = VIEW_ORDER
        .iter()
        .map(|s| crate::report::view_stats_row(&graph, *s))
        .collect();
    let appearances = appearance_counts(&catalog, &scenes);
    let rankings = all_rank_tables(&graph, &catalog, &appearances, options.rank_k_or_default())?;
    let comparison = reference.as_ref().map(|r| reference_comparison(&views, r));

    let report = Report {
        script_path: script_path.display().to_string(),
        config_path: config_path.display().to_string(),
        seed: config.keyword_params.lda.seed,
        scene_count: scenes.len(),
        conversation_count: conversations.len(),
        entity_counts: EntityCounts {
            characters: catalog.of_kind(EntityKind::Character).count(),
            locations: catalog.of_kind(EntityKind::Location).count(),
            keywords: catalog.of_kind(EntityKind::Keyword).count(),
        },
        views,
        rankings,
        keywords,
        reference_comparison: comparison,
    };

    let manifest = RunManifest {
        script_path: script_path.display().to_string(),
        config_path: config_path.display().to_string(),
        out_dir: String::new(),
        seed: config.keyword_params.lda.seed,
        lda_topics: config.keyword_params.lda.topics,
        lda_alpha: config.keyword_params.lda.alpha,
        lda_beta: config.keyword_params.lda.beta,
        lda_iterations: config.keyword_params.lda.iterations,
        keyword_top_n: config.keyword_params.top_n,
        description_margin: layout.description_margin,
        cue_extra_indent: crate::parser::CUE_EXTRA_INDENT,
        input_sha256,
        timestamp_unix: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    };

    Ok(PipelineRun {
        scenes,
        conversations: conversation_tokens,
        catalog,
        graph,
        report,
        manifest,
    })
}

fn export_err(e: impl std::fmt::Display) -> PipelineError {
    PipelineError::Export(e.to_string())
}

/// Full pipeline: analyze, then write every report and graph file into
/// `out_dir`.
pub fn run_pipeline(
    script_path: &Path,
    config_path: &Path,
    out_dir: &Path,
    options: &PipelineOptions,
) -> Result<RunManifest, PipelineError> {
    let mut run = analyze(script_path, config_path, options)?;
    run.manifest.out_dir = out_dir.display().to_string();

    std::fs::create_dir_all(out_dir).map_err(export_err)?;
    let report_json = serde_json::to_string_pretty(&run.report).map_err(export_err)?;
    std::fs::write(out_dir.join("report.json"), report_json + "\n").map_err(export_err)?;
    write_stats_csv(&run.report.views, &out_dir.join("stats_table.csv")).map_err(export_err)?;
    write_rankings_csv(&run.report.rankings, &out_dir.join("rankings.csv")).map_err(export_err)?;
    for selector in VIEW_ORDER {
        let view = subgraph(&run.graph, selector);
        let filename = format!("{}.graphml", selector.name().to_lowercase());
        export_graphml(&view, &run.catalog, &out_dir.join(filename)).map_err(export_err)?;
    }
    let manifest_json = serde_json::to_string_pretty(&run.manifest).map_err(export_err)?;
    std::fs::write(out_dir.join("manifest.json"), manifest_json + "\n").map_err(export_err)?;
    log::info!("wrote outputs to {}", out_dir.display());
    Ok(run.manifest)
}

/// The ranked view selectors and their CLI names.
pub fn layer_selector(name: &str) -> Result<crate::graph::FamilySelector, PipelineError> {
    use crate::graph::{EdgeFamily, FamilySelector};
    match name.to_lowercase().as_str() {
        "c" | "cc" | "character" | "characters" => Ok(FamilySelector::Family(EdgeFamily::CC)),
        "l" | "ll" | "location" | "locations" => Ok(FamilySelector::Family(EdgeFamily::LL)),
        "k" | "kk" | "keyword" | "keywords" => Ok(FamilySelector::Family(EdgeFamily::KK)),
        "all" | "multilayer" => Ok(FamilySelector::All),
        other => Err(PipelineError::Input(format!("unknown layer {other:?}"))),
    }
}

pub fn measure_from_name(name: &str) -> Result<crate::metrics::Measure, PipelineError> {
    use crate::metrics::Measure;
    match name.to_lowercase().as_str() {
        "degree" | "d" => Ok(Measure::Degree),
        "betweenness" | "b" => Ok(Measure::Betweenness),
        "eigenvector" | "ei" | "eigen" => Ok(Measure::Eigenvector),
        "influence" | "influence_score" | "is" | "i.s" => Ok(Measure::InfluenceScore),
        other => Err(PipelineError::Input(format!("unknown measure {other:?}"))),
    }
}
