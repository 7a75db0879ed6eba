use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use pdfchunk_core::eval::{run_eval, EmbedderSpec, EvalOptions, Scope};
use pdfchunk_core::pdf::{dump_fixture, extract_raw, load_fixture};
use pdfchunk_core::pipeline::{
    bench_parse, doc_id_for, parse_path, parse_raw, run_pipeline, OutputFormat, ParsedDocument, PipelineConfig,
    CONFIG_ENV,
};

#[derive(Parser)]
#[command(name = "pdfchunk", version, about = "Parse PDFs into structured markdown and retrieval chunks")]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    /// Log more (repeat for debug output).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Md,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Document,
    Corpus,
}

#[derive(Subcommand)]
enum Command {
    /// Convert documents to markdown.
    Parse {
        /// Files, directories or glob patterns (PDF, span fixture .json, or .md).
        inputs: Vec<String>,
        /// Parse this span fixture instead of extracting from a PDF.
        #[arg(long)]
        spans: Option<PathBuf>,
        #[arg(long, value_enum)]
        out: Option<Format>,
        /// Write one file per document here instead of printing.
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Also write each PDF's extracted spans as a fixture into this directory.
        #[arg(long)]
        dump_fixture: Option<PathBuf>,
    },
    /// Parse and chunk documents into JSONL.
    Chunk {
        inputs: Vec<String>,
        #[arg(long)]
        soft_limit: Option<usize>,
        #[arg(long)]
        hard_limit: Option<usize>,
        #[arg(long)]
        min_words: Option<usize>,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Documents processed in parallel (0 = one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Time parsing of every PDF in a directory and estimate CPU energy.
    Bench {
        dir: PathBuf,
        /// Rated CPU power in watts.
        #[arg(long)]
        cpu_tdp: f64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Score retrieval of chunks against a question dataset.
    Eval {
        #[arg(long)]
        dataset: PathBuf,
        /// Chunk JSONL files.
        #[arg(long, required = true, num_args = 1..)]
        chunks: Vec<PathBuf>,
        /// `hash` or the URL of an embedding endpoint.
        #[arg(long, default_value = "hash")]
        embedder: String,
        /// Dimension of the hash embedder.
        #[arg(long, default_value_t = 256)]
        dim: usize,
        #[arg(long, default_value_t = 32)]
        batch_size: usize,
        /// Model name sent to the endpoint.
        #[arg(long)]
        model: Option<String>,
        #[arg(short, long, default_value_t = 10)]
        k: usize,
        #[arg(long, value_enum, default_value = "document")]
        scope: ScopeArg,
        /// Accept single-passage matches by token overlap at this ratio.
        #[arg(long)]
        fuzzy: Option<f64>,
        /// Embedding cache file, reused across runs.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Write the synthetic evaluation corpus.
    GenCorpus {
        dir: PathBuf,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn expand_inputs(inputs: &[String]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for input in inputs {
        let path = Path::new(input);
        if path.is_dir() {
            let mut pdfs: Vec<PathBuf> = fs::read_dir(path)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("pdf")))
                .collect();
            pdfs.sort();
            out.extend(pdfs);
        } else if input.contains(['*', '?', '[']) {
            let mut matched: Vec<PathBuf> =
                glob::glob(input).with_context(|| format!("bad pattern {input}"))?.filter_map(|p| p.ok()).collect();
            matched.sort();
            if matched.is_empty() {
                log::warn!("{input} matched nothing");
            }
            out.extend(matched);
        } else {
            out.push(path.to_path_buf());
        }
    }
    Ok(out)
}

fn render(doc: &ParsedDocument, format: OutputFormat) -> Result<String> {
    Ok(match format {
        OutputFormat::Md => {
            let mut t = doc.markdown.text.clone();
            t.push('\n');
            t
        }
        OutputFormat::Json => serde_json::to_string_pretty(doc)? + "\n",
    })
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_parse(
    cfg: &PipelineConfig,
    inputs: &[String],
    spans: Option<&Path>,
    out: Option<Format>,
    output_dir: Option<&Path>,
    dump: Option<&Path>,
) -> Result<bool> {
    let format = match out {
        Some(Format::Md) => OutputFormat::Md,
        Some(Format::Json) => OutputFormat::Json,
        None => cfg.output,
    };
    let mut paths = expand_inputs(inputs)?;
    if let Some(s) = spans {
        paths.insert(0, s.to_path_buf());
    }
    if paths.is_empty() {
        bail!("no input documents");
    }
    if let Some(d) = output_dir.or(dump) {
        fs::create_dir_all(d)?;
    }
    let mut ok = true;
    let many = paths.len() > 1;
    for path in &paths {
        let result = match (dump, spans == Some(path.as_path())) {
            (Some(dir), false) if !path.extension().is_some_and(|e| e == "json" || e == "md") => {
                extract_raw(path).and_then(|raw| {
                    dump_fixture(&raw, dir.join(format!("{}.json", doc_id_for(path))))?;
                    parse_raw(raw, &doc_id_for(path), cfg)
                })
            }
            (_, true) => load_fixture(path).and_then(|raw| parse_raw(raw, &doc_id_for(path), cfg)),
            _ => parse_path(path, cfg),
        };
        match result {
            Ok(doc) => {
                let text = render(&doc, format)?;
                match output_dir {
                    Some(dir) => {
                        let ext = if format == OutputFormat::Md { "md" } else { "json" };
                        write_or_print(Some(&dir.join(format!("{}.{ext}", doc.doc_id))), &text)?;
                    }
                    None if many && format == OutputFormat::Md => print!("<!-- {} -->\n{text}\n", path.display()),
                    None => print!("{text}"),
                }
            }
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                ok = false;
            }
        }
    }
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool> {
    let mut cfg = PipelineConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Parse { inputs, spans, out, output_dir, dump_fixture } => {
            cmd_parse(&cfg, &inputs, spans.as_deref(), out, output_dir.as_deref(), dump_fixture.as_deref())
        }
        Command::Chunk { inputs, soft_limit, hard_limit, min_words, out, jobs } => {
            if let Some(v) = soft_limit {
                cfg.chunker.soft_limit_words = v;
            }
            if let Some(v) = hard_limit {
                cfg.chunker.hard_limit_words = v;
            }
            if let Some(v) = min_words {
                cfg.chunker.min_words = v;
            }
            let paths = expand_inputs(&inputs)?;
            let batch = run_pipeline(&paths, &cfg, jobs)?;
            write_or_print(out.as_deref(), &batch.chunks_jsonl())?;
            for o in &batch.outputs {
                log::info!("{}: {} chunks", o.path.display(), o.chunks.len());
            }
            for f in &batch.failures {
                eprintln!("error: {}: {}", f.path.display(), f.error);
            }
            Ok(batch.failures.is_empty())
        }
        Command::Bench { dir, cpu_tdp, report } => {
            let paths = expand_inputs(&[dir.to_string_lossy().into_owned()])?;
            let r = bench_parse(&paths, &cfg, cpu_tdp)?;
            println!("documents: {}, pages: {}", r.documents.len(), r.total_pages);
            println!("per-page parse time: {}", r.per_page_summary());
            println!(
                "cpu load: {:.3}, time: {:.6} h, cpu energy: {:.6} Wh, gpu energy: {:.1} Wh",
                r.mean_cpu_load, r.total_hours, r.cpu_energy_wh, r.gpu_energy_wh
            );
            if let Some(p) = report {
                fs::write(&p, serde_json::to_string_pretty(&r)? + "\n")?;
            }
            for f in &r.failures {
                eprintln!("error: {}: {}", f.path.display(), f.error);
            }
            Ok(r.failures.is_empty())
        }
        Command::Eval { dataset, chunks, embedder, dim, batch_size, model, k, scope, fuzzy, cache, report } => {
            let spec = if embedder == "hash" {
                EmbedderSpec::Hash { dim }
            } else {
                EmbedderSpec::Remote { url: embedder, batch_size, model }
            };
            let opts = EvalOptions {
                dataset,
                chunks,
                embedder: spec,
                k,
                scope: match scope {
                    ScopeArg::Document => Scope::Document,
                    ScopeArg::Corpus => Scope::Corpus,
                },
                fuzzy,
                cache,
            };
            let r = run_eval(&opts)?;
            for (name, a) in [("single", &r.single), ("multi", &r.multi), ("overall", &r.overall)] {
                println!(
                    "{name}: questions {}, recall@{k} {:.4}, ndcg@{k} {:.4}",
                    a.questions, a.mean_recall, a.mean_ndcg
                );
            }
            if let Some(p) = report {
                fs::write(&p, serde_json::to_string_pretty(&r)? + "\n")?;
            }
            Ok(true)
        }
        Command::GenCorpus { dir, seed } => {
            let paths = pdfchunk_core::corpus::write_corpus(&dir, seed)?;
            println!("wrote {} documents and {}", paths.pdfs.len(), paths.dataset.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
