use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hashembed::build::{build, BuildConfig, Source, SourceKind};
use hashembed::eval::{score_test, RelatednessTest};
use hashembed::weighting::ppmi;
use hashembed::{EmbeddingStore, Measure, Mode};

const CORPUS: &str = "the cat sat on the mat\nthe dog sat on the log\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hashembed"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[track_caller]
fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{args:?}\n{}{}",
        stdout(&o),
        stderr(&o)
    );
    stdout(&o)
}

#[track_caller]
fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

struct Work {
    dir: tempfile::TempDir,
}

impl Work {
    fn new() -> Self {
        Work {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn s(&self, name: &str) -> String {
        self.path(name).to_str().unwrap().to_owned()
    }

    fn write(&self, name: &str, text: &str) -> String {
        std::fs::write(self.path(name), text).unwrap();
        self.s(name)
    }
}

fn read(p: impl AsRef<Path>) -> Vec<u8> {
    std::fs::read(p).unwrap()
}

/// A synthetic corpus large enough to spread over several blocks and
/// workers.
fn bigger_corpus() -> String {
    let words = [
        "alpha", "beta", "gamma", "delta", "eps", "zeta", "eta", "theta",
    ];
    (0..6000)
        .map(|i| {
            (0..9)
                .map(|j| words[(i * 7 + j * j * 3 + i / 5) % words.len()])
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn usage_errors_exit_1_and_help_exits_0() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["build", "--help"]), 0);
    assert_eq!(code(&[]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["build", "-o", "x.txt"]), 1, "no sources");
    let w = Work::new();
    let c = w.write("c.txt", CORPUS);
    assert_eq!(
        code(&["build", "--text", &c, "-m", "0", "-o", &w.s("m")]),
        1
    );
    assert_eq!(
        code(&["build", "--text", &c, "--window", "0+0", "-o", &w.s("m")]),
        1
    );
    assert_eq!(code(&["build", "--text", &c]), 1, "no output");
    assert_eq!(code(&["nn", &w.s("m"), "cat", "-k", "0"]), 1);
}

#[test]
fn data_errors_exit_2() {
    let w = Work::new();
    assert_eq!(
        code(&["build", "--text", &w.s("missing.txt"), "-o", &w.s("m")]),
        2
    );
    assert_eq!(code(&["info", &w.s("missing.txt")]), 2);
    let bad = w.write(
        "bad.txt",
        "hashembed 1 m=4 mode=raw words=1\n#colsums 1 0 0\nx 0:1\n",
    );
    let o = run(&["info", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colsums"), "{}", stderr(&o));
}

#[test]
fn tiny_build_satisfies_invariants() {
    let w = Work::new();
    let c = w.write("c.txt", CORPUS);
    let out = ok(&["build", "--text", &c, "-m", "8", "-o", &w.s("model.txt")]);
    assert!(out.contains("vocabulary  7"), "{out}");
    assert!(out.contains("events      60"), "{out}");
    assert!(out.contains("wall time"), "{out}");
    let store = EmbeddingStore::load(w.path("model.txt")).unwrap();
    assert!(store.check_invariants().is_ok());
    let info = ok(&["info", &w.s("model.txt"), "--word", "cat"]);
    assert!(info.contains("invariants  ok"), "{info}");
    assert!(info.contains("mode        raw"), "{info}");
    assert!(info.contains("\ncat\t"), "{info}");
}

#[test]
fn worker_count_does_not_change_bytes() {
    let w = Work::new();
    let c = w.write("c.txt", &bigger_corpus());
    let d = w.write("d.txt", &bigger_corpus()[..20_000]);
    let mut files = Vec::new();
    for workers in ["1", "4"] {
        let out = w.s(&format!("model-{workers}.txt"));
        ok(&[
            "build", "--text", &c, "--docs", &d, "-m", "64", "-j", workers, "-o", &out,
        ]);
        files.push(read(&out));
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn combined_build_equals_merge_of_separate_builds() {
    let w = Work::new();
    let c = w.write("c.txt", CORPUS);
    let s = w.write("synsets.txt", "cat feline\ndog canine hound\nmat\n");
    ok(&[
        "build",
        "--text",
        &c,
        "--tuples",
        &s,
        "-m",
        "16",
        "-o",
        &w.s("both.txt"),
    ]);
    ok(&["build", "--text", &c, "-m", "16", "-o", &w.s("text.txt")]);
    let out = ok(&["build", "--tuples", &s, "-m", "16", "-o", &w.s("syn.txt")]);
    assert!(out.contains("skipped     1"), "{out}");
    ok(&[
        "merge",
        &w.s("text.txt"),
        &w.s("syn.txt"),
        "-o",
        &w.s("merged.txt"),
    ]);
    assert_eq!(read(w.path("both.txt")), read(w.path("merged.txt")));

    ok(&["build", "--text", &c, "-m", "8", "-o", &w.s("m8.txt")]);
    assert_eq!(
        code(&["merge", &w.s("text.txt"), &w.s("m8.txt"), "-o", &w.s("x")]),
        2
    );
}

#[test]
fn config_file_with_flag_overrides() {
    let w = Work::new();
    w.write("c.txt", CORPUS);
    let cfg = w.write(
        "build.toml",
        "m = 16\nwindow = \"1+1\"\noutput = \"from-config.txt\"\n\n[[sources]]\npath = \"c.txt\"\nkind = \"window-text\"\n",
    );
    ok(&["build", "--config", &cfg]);
    let store = EmbeddingStore::load(w.path("from-config.txt")).unwrap();
    assert_eq!(store.m(), 16);
    assert_eq!(store.total_events(), 20);

    ok(&["build", "-c", &cfg, "-m", "32", "-o", &w.s("override.txt")]);
    let store = EmbeddingStore::load(w.path("override.txt")).unwrap();
    assert_eq!(store.m(), 32);
    assert_eq!(store.total_events(), 20);

    let bad = w.write("bad.toml", "m = 16\ncolour = \"blue\"\n");
    assert_eq!(code(&["build", "-c", &bad, "-o", &w.s("x")]), 2);
}

fn raw_model(w: &Work, name: &str, m: usize, rows: &[(&str, &[(u32, u64)])]) -> String {
    let store = EmbeddingStore::from_counts(
        m,
        rows.iter()
            .map(|(word, cells)| (word.to_string(), cells.iter().copied().collect())),
    )
    .unwrap();
    store.save(w.path(name)).unwrap();
    w.s(name)
}

#[test]
fn weight_end_to_end() {
    let w = Work::new();
    // Independent rows: every weight is zero.
    let indep = raw_model(
        &w,
        "indep.txt",
        2,
        &[("a", &[(0, 1), (1, 2)]), ("b", &[(0, 2), (1, 4)])],
    );
    let out = ok(&["weight", &indep, "-o", &w.s("indep-w.txt")]);
    assert!(
        out.contains("nnz before  4") && out.contains("nnz after   0"),
        "{out}"
    );

    let diag = raw_model(&w, "diag.txt", 2, &[("a", &[(0, 2)]), ("b", &[(1, 2)])]);
    ok(&["weight", &diag, "-o", &w.s("diag-w.txt")]);
    let weighted = EmbeddingStore::load(w.path("diag-w.txt")).unwrap();
    assert_eq!(weighted.mode(), Mode::Weighted);
    assert!((weighted.get("a").unwrap().get(0) - 2f64.ln()).abs() < 1e-15);
    assert_eq!(weighted.get("a").unwrap().get(1), 0.0);

    let clamp = raw_model(
        &w,
        "clamp.txt",
        2,
        &[("a", &[(0, 3), (1, 1)]), ("b", &[(0, 1), (1, 3)])],
    );
    let out = ok(&[
        "weight",
        &clamp,
        "-o",
        &w.s("clamp-w.txt"),
        "--log-base",
        "2",
    ]);
    assert!(
        out.contains("nnz before  4") && out.contains("nnz after   2"),
        "{out}"
    );
    let weighted = EmbeddingStore::load(w.path("clamp-w.txt")).unwrap();
    assert!((weighted.get("b").unwrap().get(1) - 1.5f64.log2()).abs() < 1e-15);

    let o = run(&["weight", &w.s("diag-w.txt"), "-o", &w.s("twice.txt")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("weighted"), "{}", stderr(&o));
}

#[test]
fn sim_defaults_and_oov() {
    let w = Work::new();
    let c = w.write("c.txt", CORPUS);
    let model = w.s("model.txt");
    ok(&["build", "--text", &c, "-m", "8", "-o", &model]);
    let store = EmbeddingStore::load(&model).unwrap();

    let own = ok(&["sim", &model, "cat", "cat"]);
    assert_eq!(own.trim().parse::<f64>().unwrap(), 1.0);

    for measure in [None, Some("cosine"), Some("tau-b")] {
        let mut args = vec!["sim", model.as_str(), "cat", "dog"];
        if let Some(m) = measure {
            args.extend(["--measure", m]);
        }
        let got: f64 = ok(&args).trim().parse().unwrap();
        let m = measure.map_or(Measure::Gamma, |m| m.parse().unwrap());
        let want = m
            .compare(store.get("cat").unwrap(), store.get("dog").unwrap(), 8)
            .unwrap();
        assert_eq!(got, want, "{m}");
    }

    let o = run(&["sim", &model, "cat", "unicorn"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("'unicorn' is out of vocabulary"));
    assert_eq!(
        code(&["sim", &model, "cat", "dog", "--measure", "jaccard"]),
        1
    );
}

#[test]
fn nn_lists_neighbours() {
    let w = Work::new();
    let two = raw_model(
        &w,
        "two.txt",
        4,
        &[("a", &[(0, 1), (1, 3)]), ("b", &[(0, 2), (2, 1)])],
    );
    let out = ok(&["nn", &two, "a", "-k", "1"]);
    assert!(out.starts_with("b\t"), "{out}");

    let tied = raw_model(
        &w,
        "tied.txt",
        4,
        &[
            ("x", &[(0, 2), (1, 1)]),
            ("d", &[(0, 2), (1, 1)]),
            ("c", &[(0, 4), (1, 2)]),
        ],
    );
    let out = ok(&["nn", &tied, "x", "--measure", "cosine"]);
    let order: Vec<&str> = out.lines().map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(order, ["c", "d"]);
    assert_eq!(code(&["nn", &tied, "nope"]), 2);
}

#[test]
fn pipeline_matches_library() {
    let w = Work::new();
    let c = w.write("c.txt", &bigger_corpus());
    let t = w.write(
        "sim.txt",
        "# word1 word2 score\nalpha beta 7.5\nalpha gamma 2\nbeta delta 5.1\ntheta eta 9\nzeta eps 3.3\n",
    );
    let t2 = w.write("rel.csv", "alpha,zeta,1\ngamma,delta,8\neta,beta,4\n");
    let raw = w.s("raw.txt");
    let weighted = w.s("ppmi.txt");
    ok(&["build", "--text", &c, "-m", "32", "-o", &raw]);
    ok(&["weight", &raw, "-o", &weighted]);
    let out = ok(&["eval", &weighted, &t, &t2, "--csv", &w.s("res.csv")]);
    assert!(out.contains("measure: pearson (weighted model)"), "{out}");
    assert!(out.contains("A/G"), "{out}");

    let mut cfg = BuildConfig::new(32, vec![Source::new(&c, SourceKind::WindowText)]);
    cfg.workers = 2;
    let (store, _) = build(&cfg).unwrap();
    let lib = ppmi(&store).unwrap();
    assert_eq!(lib.to_bytes(), read(&weighted));

    let csv = String::from_utf8(read(w.path("res.csv"))).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("name,pearson,spearman,harmonic,covered,oov")
    );
    for (path, line) in [&t, &t2].into_iter().zip(lines) {
        let test = RelatednessTest::load(path).unwrap();
        let r = score_test(&lib, &test, Measure::Pearson).unwrap();
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[0], test.name);
        let cell = |v: Option<f64>| v.map_or_else(String::new, |v| v.to_string());
        assert_eq!(cells[1], cell(r.pearson_r));
        assert_eq!(cells[2], cell(r.spearman_rho));
        assert_eq!(cells[3], cell(r.harmonic));
    }

    let bad = w.write("bad.txt", "alpha beta 1\nalpha\n");
    let o = run(&["eval", &weighted, &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(":2"), "{}", stderr(&o));
}

#[test]
fn verify_passes_and_catches_corruption() {
    let w = Work::new();
    let c = w.write("c.txt", CORPUS);
    let s = w.write("s.txt", "cat feline\n");
    let out = ok(&[
        "verify", "--text", &c, "--docs", &c, "--tuples", &s, "-m", "8",
    ]);
    assert!(out.contains("PASS"), "{out}");
    let out = ok(&["verify", "--text", &c, "-m", "1"]);
    assert!(out.contains("PASS"), "{out}");

    let model = w.s("model.txt");
    ok(&["build", "--text", &c, "-m", "8", "-o", &model]);
    ok(&["verify", "--text", &c, "--model", &model]);

    let text = String::from_utf8(read(&model)).unwrap();
    let line = text.lines().find(|l| l.starts_with("cat ")).unwrap();
    let (head, last) = line.rsplit_once(':').unwrap();
    let bumped = format!("{head}:{}", last.parse::<u64>().unwrap() + 1);
    let corrupted = w.write("corrupt.txt", &text.replace(line, &bumped));
    let o = run(&["verify", "--text", &c, "--model", &corrupted]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));

    let other = w.write("other.txt", "a b c\n");
    assert_eq!(code(&["verify", "--text", &other, "--model", &model]), 3);
}

#[test]
fn sweep_emits_one_row_per_configuration() {
    let w = Work::new();
    let c = w.write("c.txt", &bigger_corpus());
    let t = w.write(
        "pairs.txt",
        "alpha beta 7.5\nalpha gamma 2\nbeta delta 5.1\ntheta eta 9\n",
    );
    let out = ok(&[
        "build",
        "--text",
        &c,
        "--m-list",
        "8,32",
        "--window-list",
        "1+1,2",
        "--test",
        &t,
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "m,window,vocabulary,events,nnz,seconds,pairs_raw_gamma,pairs_ppmi_pearson"
    );
    assert_eq!(lines.len(), 5);
    let keys: Vec<(String, String)> = lines[1..]
        .iter()
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            assert_eq!(c.len(), 8);
            (c[0].to_owned(), c[1].to_owned())
        })
        .collect();
    let want = [("8", "1+1"), ("32", "1+1"), ("8", "2+2"), ("32", "2+2")];
    assert_eq!(
        keys,
        want.map(|(a, b)| (a.to_owned(), b.to_owned())).to_vec()
    );

    let csv = w.s("sweep.csv");
    ok(&["build", "--text", &c, "--m-list", "4", "--csv", &csv]);
    let text = String::from_utf8(read(&csv)).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert_eq!(
        code(&["build", "--text", &c, "--m-list", "0", "--csv", &csv]),
        1
    );
    assert_eq!(
        code(&["build", "--text", &c, "--test", &t, "-o", &w.s("m")]),
        1
    );
}
