//! Command-line front end: run the full pipeline or individual stages.

use clap::{Args, Parser, Subcommand};
use screenplaynet::export::{
    export_csv_graph, export_graphml, export_json_graph, export_muxviz, rankings_csv_string,
    stats_csv_string,
};
use screenplaynet::graph::{appearance_counts, subgraph};
use screenplaynet::pipeline::{
    analyze, layer_selector, measure_from_name, run_pipeline, PipelineError, PipelineOptions,
};
use screenplaynet::report::{rank_report, VIEW_ORDER};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "screenplaynet",
    version,
    about = "Movie script analysis: scenes, entities, multilayer network, statistics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Script text file (UTF-8, LF or CRLF).
    script: PathBuf,
    /// Curation config with [aliases], [blocklist], [stopwords], [keywords].
    #[arg(long)]
    config: PathBuf,
    /// Extra stopword file, one token per line.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Override the LDA seed from the config.
    #[arg(long)]
    seed: Option<u64>,
}

impl CommonArgs {
    fn options(&self, rank_k: usize, reference: Option<PathBuf>) -> PipelineOptions {
        PipelineOptions {
            seed_override: self.seed,
            stopwords_path: self.stopwords.clone(),
            reference_path: reference,
            rank_k,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: parse, extract, build, measure, export everything.
    Run {
        #[command(flatten)]
        common: CommonArgs,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Reference statistics JSON printed side by side in the report.
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Rows per rank table.
        #[arg(short = 'k', long, default_value_t = 5)]
        top: usize,
    },
    /// Parse only: the scene list as JSON.
    Parse {
        /// Script text file.
        script: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Statistics table over the seven views.
    Stats {
        #[command(flatten)]
        common: CommonArgs,
        /// Output format: csv or json.
        #[arg(long, default_value = "csv")]
        format: String,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Top-k nodes of a layer by a centrality measure.
    Rank {
        #[command(flatten)]
        common: CommonArgs,
        /// Layer: c, l, k or all.
        #[arg(long)]
        layer: String,
        /// Measure: degree, betweenness, eigenvector or influence.
        #[arg(long)]
        measure: String,
        #[arg(short = 'k', long, default_value_t = 5)]
        top: usize,
        /// Output format: csv or json.
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Graph exports in an interchange format.
    Export {
        #[command(flatten)]
        common: CommonArgs,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Format: graphml, muxviz, json or csv.
        #[arg(long, default_value = "graphml")]
        format: String,
    },
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), PipelineError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| PipelineError::Export(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn export_failed(e: impl std::fmt::Display) -> PipelineError {
    PipelineError::Export(e.to_string())
}

fn dispatch(cli: Cli) -> Result<(), PipelineError> {
    match cli.command {
        Command::Run {
            common,
            out,
            reference,
            top,
        } => {
            let options = common.options(top, reference);
            let manifest = run_pipeline(&common.script, &common.config, &out, &options)?;
            println!(
                "wrote {} (seed {}, input sha256 {})",
                out.display(),
                manifest.seed,
                &manifest.input_sha256[..12]
            );
            Ok(())
        }
        Command::Parse { script, out } => {
            let text = std::fs::read_to_string(&script).map_err(|e| {
                PipelineError::Input(format!("cannot read script {}: {e}", script.display()))
            })?;
            let scenes = screenplaynet::parser::parse_script(&text)?;
            let json = serde_json::to_string_pretty(&scenes).map_err(export_failed)?;
            write_or_print(out.as_deref(), &(json + "\n"))
        }
        Command::Stats {
            common,
            format,
            out,
        } => {
            let options = common.options(5, None);
            let run = analyze(&common.script, &common.config, &options)?;
            let text = match format.as_str() {
                "json" => {
                    serde_json::to_string_pretty(&run.report.views).map_err(export_failed)? + "\n"
                }
                "csv" => stats_csv_string(&run.report.views).map_err(export_failed)?,
                other => {
                    return Err(PipelineError::Input(format!(
                        "unsupported stats format {other:?} (csv or json)"
                    )));
                }
            };
            write_or_print(out.as_deref(), &text)
        }
        Command::Rank {
            common,
            layer,
            measure,
            top,
            format,
        } => {
            let selector = layer_selector(&layer)?;
            let measure = measure_from_name(&measure)?;
            let options = common.options(top, None);
            let run = analyze(&common.script, &common.config, &options)?;
            let appearances = appearance_counts(&run.catalog, &run.scenes);
            let table = rank_report(
                &run.graph,
                &run.catalog,
                &appearances,
                selector,
                measure,
                top,
            )?;
            let text = match format.as_str() {
                "json" => serde_json::to_string_pretty(&table).map_err(export_failed)? + "\n",
                "csv" => {
                    rankings_csv_string(std::slice::from_ref(&table)).map_err(export_failed)?
                }
                other => {
                    return Err(PipelineError::Input(format!(
                        "unsupported rank format {other:?} (csv or json)"
                    )));
                }
            };
            write_or_print(None, &text)
        }
        Command::Export {
            common,
            out,
            format,
        } => {
            let options = common.options(5, None);
            let run = analyze(&common.script, &common.config, &options)?;
            std::fs::create_dir_all(&out).map_err(export_failed)?;
            match format.as_str() {
                "graphml" => {
                    for selector in VIEW_ORDER {
                        let view = subgraph(&run.graph, selector);
                        let path = out.join(format!("{}.graphml", selector.name().to_lowercase()));
                        export_graphml(&view, &run.catalog, &path).map_err(export_failed)?;
                    }
                }
                "muxviz" => {
                    export_muxviz(&run.graph, &run.catalog, &out).map_err(export_failed)?;
                }
                "json" => {
                    for selector in VIEW_ORDER {
                        let view = subgraph(&run.graph, selector);
                        let path = out.join(format!("{}.json", selector.name().to_lowercase()));
                        export_json_graph(&view, &run.catalog, &path).map_err(export_failed)?;
                    }
                }
                "csv" => {
                    for selector in VIEW_ORDER {
                        let view = subgraph(&run.graph, selector);
                        let path = out.join(format!("{}.csv", selector.name().to_lowercase()));
                        export_csv_graph(&view, &run.catalog, &path).map_err(export_failed)?;
                    }
                }
                other => {
                    return Err(PipelineError::Input(format!(
                        "unknown export format {other:?} (graphml, muxviz, json, csv)"
                    )));
                }
            }
            println!("wrote {format} exports to {}", out.display());
            Ok(())
        }
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("SCREENPLAYNET_LOG")).init();
    let cli = Cli::parse();
    if let Err(err) = dispatch(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
