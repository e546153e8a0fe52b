use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const CORPUS: &str = r#"{"_id": "d0", "text": "cat sat"}
{"_id": "d1", "text": "dog ran"}
{"_id": "d2", "text": "cat cat cat"}
"#;

fn sparselex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparselex"))
        .args(args)
        .env_remove("SPARSELEX_STOPWORDS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new(corpus: &str, extra: &[&str]) -> Self {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("corpus.jsonl"), corpus).unwrap();
        let fixture = Self { dir };
        let (corpus, index) = (fixture.corpus(), fixture.index());
        let mut args = vec!["index", "--corpus", p(&corpus), "--index", p(&index)];
        args.extend(extra);
        let out = sparselex(&args);
        assert!(out.status.success(), "{}", stderr(&out));
        fixture
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn corpus(&self) -> PathBuf {
        self.path("corpus.jsonl")
    }

    fn index(&self) -> PathBuf {
        self.path("index")
    }
}

#[test]
fn index_writes_all_files_and_reports_counts() {
    let fx = Fixture::new(CORPUS, &[]);
    let mut files: Vec<String> = fs::read_dir(fx.index())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    let mut expected: Vec<String> = sparselex::index::INDEX_FILES.iter().map(|s| s.to_string()).collect();
    expected.sort();
    assert_eq!(files, expected);
    assert_eq!(files.len(), 9);

    let out = sparselex(&["index", "--corpus", p(&fx.corpus()), "--index", p(&fx.path("again"))]);
    let text = stdout(&out);
    assert!(text.contains("documents\t3"));
    assert!(text.contains("vocabulary\t4"));
    assert!(text.contains("nonzeros\t5"));
    assert!(text.contains("build_seconds\t"));
}

#[test]
fn malformed_line_reports_its_number() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("bad.jsonl");
    fs::write(&corpus, "{\"_id\": \"a\", \"text\": \"x y\"}\n{\"_id\": \"b\", \"text\": \n").unwrap();
    let out = sparselex(&["index", "--corpus", p(&corpus), "--index", p(&dir.path().join("i"))]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn variant_and_delta_are_recorded() {
    let fx = Fixture::new(CORPUS, &["--variant", "bm25plus", "--delta", "1.0"]);
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(fx.index().join("meta.json")).unwrap()).unwrap();
    assert_eq!(meta["variant"], "bm25plus");
    assert_eq!(meta["delta"], 1.0);
}

#[test]
fn invalid_params_fail_before_reading_corpus() {
    let out = sparselex(&["index", "--corpus", "/nonexistent.jsonl", "--index", "/tmp/x", "--k1", "-1"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("k1"), "{}", stderr(&out));
}

#[test]
fn single_query_table_top_score() {
    let fx = Fixture::new(CORPUS, &[]);
    let out = sparselex(&["search", "--index", p(&fx.index()), "--query", "cat", "-k", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2, "{text}");

    // Lucene defaults: df(cat) = 2 of 3 docs, |d2| = 3, L_avg = 7/3.
    let idf = (1.0f64 + (3.0 - 2.0 + 0.5) / (2.0 + 0.5)).ln();
    let norm = 1.0 - 0.75 + 0.75 * 3.0 / (7.0 / 3.0);
    let oracle = idf * 3.0 / (3.0 + 1.5 * norm);
    let fields: Vec<&str> = rows[0].split_whitespace().collect();
    assert_eq!(fields[0], "1");
    assert_eq!(fields[2], "d2");
    let score: f64 = fields[1].parse().unwrap();
    assert!((score - oracle).abs() < 1e-6, "{score} vs {oracle}");
}

fn write_queries(dir: &Path, n: usize) -> PathBuf {
    let words = ["cat", "dog", "sat", "ran", "bird", "cats"];
    let lines: String = (0..n)
        .map(|i| {
            let text = format!("{} {}", words[i % words.len()], words[(i * 7 + 3) % words.len()]);
            format!("{}\n", serde_json::json!({"_id": format!("q{i}"), "text": text}))
        })
        .collect();
    let path = dir.join("queries.jsonl");
    fs::write(&path, lines).unwrap();
    path
}

#[test]
fn batch_output_does_not_depend_on_workers() {
    let corpus: String = (0..60)
        .map(|i| {
            let text = ["cat", "dog", "sat", "ran", "bird"]
                .iter()
                .cycle()
                .skip(i % 5)
                .take(1 + i % 7)
                .copied()
                .collect::<Vec<_>>()
                .join(" ");
            format!("{}\n", serde_json::json!({"_id": format!("d{i}"), "text": text}))
        })
        .collect();
    let fx = Fixture::new(&corpus, &["--variant", "bm25l"]);
    let queries = write_queries(fx.dir.path(), 100);
    let run = |workers: &str| {
        let out = sparselex(&[
            "search", "--index", p(&fx.index()), "--queries", p(&queries), "--workers", workers,
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        out.stdout
    };
    let one = run("1");
    assert_eq!(String::from_utf8_lossy(&one).lines().count(), 100 * 10);
    assert_eq!(one, run("4"));
}

#[test]
fn k_beyond_corpus_returns_everything_with_warning() {
    let fx = Fixture::new(CORPUS, &[]);
    let out = sparselex(&["search", "--index", p(&fx.index()), "--query", "cat", "-k", "50"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 1 + 3);
    assert!(stderr(&out).contains("warning"));
}

#[test]
fn run_file_is_trec_formatted() {
    let fx = Fixture::new(CORPUS, &[]);
    let queries = write_queries(fx.dir.path(), 3);
    let run = fx.path("run.trec");
    let out = sparselex(&[
        "search", "--index", p(&fx.index()), "--queries", p(&queries), "--output", p(&run), "-k", "2",
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(run).unwrap();
    let first: Vec<&str> = text.lines().next().unwrap().split(' ').collect();
    assert_eq!(first.len(), 6);
    assert_eq!((first[0], first[1], first[3], first[5]), ("q0", "Q0", "1", "sparselex"));
}

#[test]
fn missing_index_fails() {
    let out = sparselex(&["search", "--index", "/nonexistent/index", "--query", "cat"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("error"));
}

#[test]
fn bench_reports_contract_fields() {
    let fx = Fixture::new(CORPUS, &[]);
    let queries = write_queries(fx.dir.path(), 5);
    let out = sparselex(&[
        "bench", "--index", p(&fx.index()), "--queries", p(&queries), "--corpus", p(&fx.corpus()),
        "--repetitions", "3",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for field in ["qps_retrieve", "qps_end_to_end", "qps_naive", "speedup"] {
        assert!(report[field].as_f64().unwrap() > 0.0, "{field}");
    }
    assert_eq!(report["aggregate"], "median of 3 repetitions");
}

fn eval_fixture(dir: &Path, rank_of_relevant: usize) -> (PathBuf, PathBuf) {
    let run = dir.join("run.trec");
    let qrels = dir.join("qrels.tsv");
    let lines: String = (0..12)
        .map(|r| {
            let doc = if r == rank_of_relevant { "rel".to_string() } else { format!("n{r}") };
            format!("q1 Q0 {doc} {} {} test\n", r + 1, 12 - r)
        })
        .collect();
    fs::write(&run, lines).unwrap();
    fs::write(&qrels, "query-id\tcorpus-id\tscore\nq1\trel\t1\n").unwrap();
    (run, qrels)
}

#[test]
fn eval_prints_hand_computed_value() {
    let dir = tempfile::tempdir().unwrap();
    let (run, qrels) = eval_fixture(dir.path(), 1);
    let out = sparselex(&["eval", "--run", p(&run), "--qrels", p(&qrels)]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("query_id\tndcg@10"));
    assert!(text.contains("q1\t0.630930"));
    assert!(text.contains(&format!("all\t{:.6}", 1.0 / 3f64.log2())));
}

#[test]
fn eval_k_defaults_to_ten() {
    let dir = tempfile::tempdir().unwrap();
    // Relevant document at rank 11: zero at the default cutoff, non-zero at 11.
    let (run, qrels) = eval_fixture(dir.path(), 10);
    let default = stdout(&sparselex(&["eval", "--run", p(&run), "--qrels", p(&qrels)]));
    assert!(default.contains("all\t0.000000"), "{default}");
    let wider = stdout(&sparselex(&["eval", "--run", p(&run), "--qrels", p(&qrels), "-k", "11"]));
    assert!(!wider.contains("all\t0.000000"), "{wider}");
}

#[test]
fn eval_without_qrels_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let (run, _) = eval_fixture(dir.path(), 0);
    let out = sparselex(&["eval", "--run", p(&run)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--qrels"));
}

#[test]
fn eval_with_disjoint_queries_fails() {
    let dir = tempfile::tempdir().unwrap();
    let (run, _) = eval_fixture(dir.path(), 0);
    let qrels = dir.path().join("other.tsv");
    fs::write(&qrels, "q9\trel\t1\n").unwrap();
    let out = sparselex(&["eval", "--run", p(&run), "--qrels", p(&qrels)]);
    assert!(!out.status.success());
}

#[test]
fn stopwords_file_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.jsonl");
    fs::write(&corpus, CORPUS).unwrap();
    let stop = dir.path().join("stop.txt");
    fs::write(&stop, "cat\n").unwrap();
    let index = dir.path().join("i");
    let out = Command::new(env!("CARGO_BIN_EXE_sparselex"))
        .args(["index", "--corpus", p(&corpus), "--index", p(&index)])
        .env("SPARSELEX_STOPWORDS", &stop)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("vocabulary\t3"));
}
