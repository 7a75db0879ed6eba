use std::path::PathBuf;

use pdfchunk_core::corpus::write_corpus;
use pdfchunk_core::pdf::writer::{PdfBuilder, StdFont};
use pdfchunk_core::pipeline::{bench_parse, run_pipeline, PipelineConfig};

fn corpus() -> (tempfile::TempDir, Vec<PathBuf>) {
    let dir = tempfile::tempdir().unwrap();
    let paths = write_corpus(dir.path(), 7).unwrap();
    (dir, paths.pdfs)
}

fn encrypted(dir: &std::path::Path) -> PathBuf {
    let mut pdf = PdfBuilder::new();
    pdf.add_page(612.0, 792.0).text(72.0, 100.0, 11.0, StdFont::Helvetica, "locked");
    let path = dir.join("locked.pdf");
    std::fs::write(&path, pdf.to_encrypted_stub_bytes().unwrap()).unwrap();
    path
}

#[test]
fn empty_batch() {
    let batch = run_pipeline(&[], &PipelineConfig::default(), 2).unwrap();
    assert!(batch.outputs.is_empty() && batch.failures.is_empty());
    assert_eq!(batch.exit_code(), 0);
}

#[test]
fn encrypted_file_is_isolated() {
    let (dir, pdfs) = corpus();
    let inputs = vec![pdfs[0].clone(), encrypted(dir.path())];
    let batch = run_pipeline(&inputs, &PipelineConfig::default(), 2).unwrap();
    assert_eq!(batch.outputs.len(), 1);
    assert!(!batch.outputs[0].chunks.is_empty());
    assert_eq!(batch.failures.len(), 1);
    assert!(batch.failures[0].path.ends_with("locked.pdf"));
    assert!(batch.failures[0].error.to_lowercase().contains("encrypt"));
    assert_ne!(batch.exit_code(), 0);
}

#[test]
fn missing_file_is_a_failure_record() {
    let (dir, pdfs) = corpus();
    let inputs = vec![dir.path().join("absent.pdf"), pdfs[1].clone()];
    let batch = run_pipeline(&inputs, &PipelineConfig::default(), 1).unwrap();
    assert_eq!((batch.outputs.len(), batch.failures.len()), (1, 1));
    assert_eq!(batch.exit_code(), 1);
}

#[test]
fn reruns_are_byte_identical() {
    let (_dir, pdfs) = corpus();
    let cfg = PipelineConfig::default();
    let a = run_pipeline(&pdfs, &cfg, 4).unwrap().chunks_jsonl();
    let b = run_pipeline(&pdfs, &cfg, 1).unwrap().chunks_jsonl();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn batch_membership_does_not_change_output() {
    let (_dir, pdfs) = corpus();
    let cfg = PipelineConfig::default();
    let alone = run_pipeline(&pdfs[2..3], &cfg, 1).unwrap();
    let together = run_pipeline(&pdfs, &cfg, 3).unwrap();
    assert_eq!(alone.outputs[0], together.outputs[2]);
    assert_eq!(alone.chunks_jsonl(), pdfchunk_core::chunker::to_jsonl(&together.outputs[2].chunks));
}

#[test]
fn corpus_structure_survives_the_pipeline() {
    let (_dir, pdfs) = corpus();
    let batch = run_pipeline(&pdfs, &PipelineConfig::default(), 2).unwrap();
    for out in &batch.outputs {
        let md = &out.parsed.markdown.text;
        assert!(!md.contains("Field notes volume"), "{md}");
        assert!(!md.contains("Page 1"), "{md}");
        assert!(md.starts_with("# Survey of the "), "{md}");
        assert_eq!(md.lines().filter(|l| l.starts_with("## ")).count(), 3, "{md}");
        assert!(out.chunks.iter().all(|c| c.start_page.is_some()));
    }
}

#[test]
fn bench_arithmetic() {
    let (_dir, pdfs) = corpus();
    let report = bench_parse(&pdfs, &PipelineConfig::default(), 65.0).unwrap();
    assert_eq!(report.total_pages, 15);
    let total_ms: f64 = report.documents.iter().map(|d| d.parse_ms).sum();
    approx::assert_relative_eq!(report.per_page_mean_ms, total_ms / 15.0, max_relative = 1e-12);
    assert!(report.is_self_consistent(1e-9));
    let recomputed = report.mean_cpu_load * report.total_hours * report.cpu_power_watts;
    approx::assert_relative_eq!(report.cpu_energy_wh, recomputed, max_relative = 1e-9);
    assert!((0.0..=1.0).contains(&report.mean_cpu_load));
    assert!(report.cpu_samples >= 1);
    assert_eq!(report.gpu_energy_wh, 0.0);
}

#[test]
fn bench_rejects_bad_power() {
    assert!(bench_parse(&[], &PipelineConfig::default(), 0.0).is_err());
    assert!(bench_parse(&[], &PipelineConfig::default(), -5.0).is_err());
}
