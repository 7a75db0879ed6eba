use std::path::Path;
use std::process::{Command, Output};

fn pdfchunk(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdfchunk"))
        .args(args)
        .current_dir(cwd)
        .env_remove("PDFCHUNK_CONFIG")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn corpus(dir: &Path) {
    let o = pdfchunk(&["gen-corpus", "corpus"], dir);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn parse_prints_markdown() {
    let dir = tempfile::tempdir().unwrap();
    corpus(dir.path());
    let o = pdfchunk(&["parse", "corpus/doc1.pdf"], dir.path());
    assert!(o.status.success());
    let md = stdout(&o);
    assert!(md.starts_with("# Survey of the "), "{md}");
    assert!(md.contains("\n## 1. "), "{md}");
}

#[test]
fn parse_json_and_fixture_dump() {
    let dir = tempfile::tempdir().unwrap();
    corpus(dir.path());
    let o = pdfchunk(&["parse", "corpus/doc2.pdf", "--out", "json", "--dump-fixture", "fx"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["page_count"], 3);
    let fixture = dir.path().join("fx/doc2.json");
    assert!(fixture.exists());

    let from_pdf = pdfchunk(&["parse", "corpus/doc2.pdf"], dir.path());
    let from_fixture = pdfchunk(&["parse", "fx/doc2.json"], dir.path());
    assert_eq!(stdout(&from_pdf), stdout(&from_fixture));
}

#[test]
fn chunk_writes_jsonl_and_reports_failures() {
    let dir = tempfile::tempdir().unwrap();
    corpus(dir.path());
    std::fs::write(dir.path().join("broken.pdf"), b"not a pdf").unwrap();
    let o = pdfchunk(&["chunk", "corpus/doc1.pdf", "broken.pdf", "--out", "c.jsonl"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("broken.pdf"));
    let text = std::fs::read_to_string(dir.path().join("c.jsonl")).unwrap();
    assert!(!text.is_empty());
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["doc_id"], "doc1");
        assert!(v["word_count"].as_u64().unwrap() >= 15);
    }

    let ok = pdfchunk(&["chunk", "corpus/*.pdf", "--min-words", "1"], dir.path());
    assert!(ok.status.success());
    assert!(stdout(&ok).lines().count() >= 5);
}

#[test]
fn config_file_and_bad_values() {
    let dir = tempfile::tempdir().unwrap();
    corpus(dir.path());
    std::fs::write(dir.path().join("bad.toml"), "[chunker]\nsoft_limit_words = 0\n").unwrap();
    let o = pdfchunk(&["--config", "bad.toml", "chunk", "corpus/doc1.pdf"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = pdfchunk(&["chunk", "corpus/doc1.pdf", "--soft-limit", "500", "--hard-limit", "100"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eval_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    corpus(dir.path());
    let c = pdfchunk(&["chunk", "corpus", "--out", "chunks.jsonl"], dir.path());
    assert!(c.status.success());
    let o = pdfchunk(
        &["eval", "--dataset", "corpus/questions.jsonl", "--chunks", "chunks.jsonl", "--report", "r.json"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("overall: questions 15, recall@10 1.0000"), "{}", stdout(&o));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(r["overall"]["mean_recall"], 1.0);
}

#[test]
fn bench_reports_per_page_time() {
    let dir = tempfile::tempdir().unwrap();
    corpus(dir.path());
    let o = pdfchunk(&["bench", "corpus", "--cpu-tdp", "65", "--report", "b.json"], dir.path());
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("pages: 15"), "{out}");
    let line = out.lines().find(|l| l.starts_with("per-page parse time: ")).unwrap();
    let re = line.trim_start_matches("per-page parse time: ");
    let (mean, std) = re.split_once(" ms ± ").unwrap();
    assert!(mean.parse::<f64>().is_ok() && std.parse::<f64>().is_ok(), "{line}");
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("b.json")).unwrap()).unwrap();
    assert_eq!(r["gpu_energy_wh"], 0.0);
}
