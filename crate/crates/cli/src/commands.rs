use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context};

use hashembed::build::{build as build_store, for_each_event, BuildConfig};
use hashembed::corpus::{ContextEvent, WindowConfig};
use hashembed::eval::{format_table, score_test, write_csv, RelatednessTest};
use hashembed::projection::verify_store;
use hashembed::weighting::{ppmi, ppmi_with, LogBase, PpmiOptions};
use hashembed::{Embedding, EmbeddingStore, Measure, Mode};

use crate::config::BuildArgs;
use crate::fail::{CmdResult, Fail};

fn load(path: &Path) -> CmdResult<EmbeddingStore> {
    Ok(EmbeddingStore::load(path)?)
}

fn save(store: &EmbeddingStore, path: &Path) -> CmdResult {
    Ok(store.save(path)?)
}

fn lookup<'a>(store: &'a EmbeddingStore, word: &str) -> CmdResult<&'a Embedding> {
    store
        .get(word)
        .ok_or_else(|| Fail::data(anyhow!("'{word}' is out of vocabulary")))
}

fn create(path: &Path) -> CmdResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .with_context(|| format!("creating {}", path.display()))
        .map_err(Fail::data)
}

fn io(path: &Path, r: std::io::Result<()>) -> CmdResult {
    r.with_context(|| format!("writing {}", path.display()))
        .map_err(Fail::data)
}

pub fn build(args: &BuildArgs, output: Option<PathBuf>) -> CmdResult {
    let file = args.file_config()?;
    let output = output
        .or_else(|| file.output.clone())
        .ok_or_else(|| Fail::usage(anyhow!("no output path; pass -o or set `output`")))?;
    let cfg = args.resolve(&file)?;
    let (store, stats) = build_store(&cfg)?;
    save(&store, &output)?;
    println!("model       {}", output.display());
    println!("m           {}", cfg.m);
    println!("window      {}", cfg.window);
    println!("workers     {}", cfg.workers);
    println!("vocabulary  {}", stats.vocabulary);
    println!("events      {}", stats.total_events);
    println!("lines       {}", stats.lines);
    println!("tokens      {}", stats.tokens);
    if stats.skipped_entries > 0 {
        println!("skipped     {} relation entries", stats.skipped_entries);
    }
    println!("wall time   {:.3}s", stats.elapsed.as_secs_f64());
    Ok(())
}

fn load_tests(paths: &[PathBuf]) -> CmdResult<Vec<RelatednessTest>> {
    paths
        .iter()
        .map(|p| RelatednessTest::load(p).map_err(Fail::from))
        .collect()
}

fn harmonic_cell(store: &EmbeddingStore, test: &RelatednessTest, measure: Measure) -> String {
    score_test(store, test, measure)
        .ok()
        .and_then(|r| r.harmonic)
        .map_or_else(String::new, |h| format!("{h:.6}"))
}

/// One CSV row per (m, window). With tests, each row also carries the raw
/// gamma and PPMI Pearson harmonic scores per test.
pub fn sweep(
    args: &BuildArgs,
    m_list: &[usize],
    window_list: &[WindowConfig],
    test_paths: &[PathBuf],
    csv: Option<PathBuf>,
) -> CmdResult {
    let file = args.file_config()?;
    let base = args.resolve(&file)?;
    let tests = load_tests(test_paths)?;
    let ms = if m_list.is_empty() {
        vec![base.m]
    } else {
        m_list.to_vec()
    };
    let windows = if window_list.is_empty() {
        vec![base.window]
    } else {
        window_list.to_vec()
    };

    let mut out: Box<dyn Write> = match &csv {
        Some(p) => Box::new(create(p)?),
        None => Box::new(std::io::stdout().lock()),
    };
    let sink = csv.clone().unwrap_or_else(|| PathBuf::from("<stdout>"));
    let mut header = String::from("m,window,vocabulary,events,nnz,seconds");
    for t in &tests {
        header += &format!(",{0}_raw_gamma,{0}_ppmi_pearson", t.name);
    }
    io(&sink, writeln!(out, "{header}"))?;

    for &window in &windows {
        for &m in &ms {
            let cfg = BuildConfig {
                m,
                window,
                ..base.clone()
            };
            cfg.validate().map_err(Fail::usage)?;
            let start = Instant::now();
            let (store, stats) = build_store(&cfg)?;
            let secs = start.elapsed().as_secs_f64();
            let mut row = format!(
                "{m},{window},{},{},{},{secs:.3}",
                stats.vocabulary,
                stats.total_events,
                store.nnz()
            );
            if !tests.is_empty() {
                let weighted = ppmi(&store).ok();
                for t in &tests {
                    row.push(',');
                    row += &harmonic_cell(&store, t, Measure::Gamma);
                    row.push(',');
                    if let Some(w) = &weighted {
                        row += &harmonic_cell(w, t, Measure::Pearson);
                    }
                }
            }
            io(&sink, writeln!(out, "{row}"))?;
        }
    }
    io(&sink, out.flush())
}

pub fn weight(input: &Path, output: &Path, log_base: LogBase) -> CmdResult {
    let store = load(input)?;
    let weighted = ppmi_with(
        &store,
        &PpmiOptions {
            log_base,
            ..Default::default()
        },
    )?;
    save(&weighted, output)?;
    println!("nnz before  {}", store.nnz());
    println!("nnz after   {}", weighted.nnz());
    Ok(())
}

fn measure_for(store: &EmbeddingStore, measure: Option<Measure>) -> Measure {
    measure.unwrap_or_else(|| Measure::default_for(store.mode()))
}

pub fn sim(model: &Path, w1: &str, w2: &str, measure: Option<Measure>) -> CmdResult {
    let store = load(model)?;
    let measure = measure_for(&store, measure);
    let (a, b) = (lookup(&store, w1)?, lookup(&store, w2)?);
    let s = measure
        .compare(a, b, store.m())
        .with_context(|| format!("{measure}({w1}, {w2})"))
        .map_err(Fail::data)?;
    println!("{s}");
    Ok(())
}

/// Top `k` neighbours by descending similarity, ties broken by word.
/// Words whose similarity is undefined are skipped.
pub fn neighbours<'a>(
    store: &'a EmbeddingStore,
    word: &str,
    k: usize,
    measure: Measure,
) -> CmdResult<Vec<(&'a str, f64)>> {
    let target = lookup(store, word)?;
    let dense = target.to_dense(store.m());
    let mut scored: Vec<(&str, f64)> = store
        .iter()
        .filter(|(w, _)| *w != word)
        .filter_map(|(w, v)| {
            let s = match measure {
                Measure::Cosine => measure.compare(target, v, store.m()),
                _ => measure.on_dense(&dense, &v.to_dense(store.m())),
            };
            s.ok().map(|s| (w, s))
        })
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    scored.truncate(k);
    Ok(scored)
}

pub fn nn(model: &Path, word: &str, k: usize, measure: Option<Measure>) -> CmdResult {
    let store = load(model)?;
    let measure = measure_for(&store, measure);
    for (w, s) in neighbours(&store, word, k, measure)? {
        println!("{w}\t{s:.6}");
    }
    Ok(())
}

pub fn eval(
    model: &Path,
    test_paths: &[PathBuf],
    measure: Option<Measure>,
    csv: Option<PathBuf>,
) -> CmdResult {
    let store = load(model)?;
    let measure = measure_for(&store, measure);
    let tests = load_tests(test_paths)?;
    let results = tests
        .iter()
        .map(|t| score_test(&store, t, measure))
        .collect::<Result<Vec<_>, _>>()?;
    println!("measure: {measure} ({} model)", store.mode());
    print!("{}", format_table(&results));
    if let Some(path) = csv {
        let mut out = create(&path)?;
        io(&path, write_csv(&mut out, &results))?;
        io(&path, out.flush())?;
    }
    Ok(())
}

pub fn merge(inputs: &[PathBuf], output: &Path) -> CmdResult {
    let mut merged: Option<EmbeddingStore> = None;
    for p in inputs {
        let store = load(p)?;
        merged = Some(match merged {
            None => store,
            Some(acc) => acc
                .merge(store)
                .with_context(|| format!("merging {}", p.display()))
                .map_err(Fail::data)?,
        });
    }
    let merged = merged.expect("clap requires two inputs");
    save(&merged, output)?;
    println!("vocabulary  {}", merged.len());
    println!("events      {}", merged.total_events());
    Ok(())
}

pub fn verify(args: &BuildArgs, model: Option<PathBuf>) -> CmdResult {
    let file = args.file_config()?;
    let mut cfg = args.resolve(&file)?;
    let store = match &model {
        Some(p) => {
            let store = load(p)?;
            if store.mode() != Mode::Raw {
                return Err(Fail::data(anyhow!(
                    "{} is weighted; only raw models can be checked against counts",
                    p.display()
                )));
            }
            cfg.m = store.m();
            store
        }
        None => build_store(&cfg)?.0,
    };

    let mut owned: Vec<(String, Vec<u8>)> = Vec::new();
    for_each_event(&cfg, |e| {
        owned.push((e.target.to_owned(), e.context.to_vec()))
    })?;
    let report = verify_store(&store, owned.iter().map(|(t, c)| ContextEvent::new(t, c)))?;

    let source = model
        .as_ref()
        .map_or_else(|| "streaming build".to_owned(), |p| p.display().to_string());
    println!("checked     {source}");
    println!("m           {}", store.m());
    println!("words       {}", report.words);
    println!("contexts    {}", report.contexts);
    println!("events      {}", report.events);
    let status = |v: &[String]| if v.is_empty() { "ok" } else { "FAILED" };
    println!("product     {}", status(&report.mismatches));
    for m in &report.mismatches {
        println!("  {m}");
    }
    println!("invariants  {}", status(&report.invariant_violations));
    for v in &report.invariant_violations {
        println!("  {v}");
    }
    if report.passed() {
        println!("PASS");
        Ok(())
    } else {
        println!("FAIL");
        Err(Fail::verification(
            "model does not match the count-matrix product",
        ))
    }
}

pub fn info(model: &Path, words: &[String]) -> CmdResult {
    let store = load(model)?;
    let cells = store.len() as f64 * store.m() as f64;
    println!("model       {}", model.display());
    println!("m           {}", store.m());
    println!("mode        {}", store.mode());
    println!("words       {}", store.len());
    println!(
        "nnz         {} ({:.2}% dense)",
        store.nnz(),
        if cells > 0.0 {
            100.0 * store.nnz() as f64 / cells
        } else {
            0.0
        }
    );
    println!("events      {}", store.total_events());
    let used = store.column_sums().iter().filter(|&&c| c > 0).count();
    println!("dims used   {used}");
    match store.check_invariants() {
        Ok(()) => println!("invariants  ok"),
        Err(v) => println!("invariants  {} violation(s)", v.len()),
    }
    for w in words {
        let v = lookup(&store, w)?;
        let cells: Vec<String> = v.iter().map(|(d, x)| format!("{d}:{x}")).collect();
        println!("{w}\t{}", cells.join(" "));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn store(rows: &[(&str, &[(u32, u64)])]) -> EmbeddingStore {
        EmbeddingStore::from_counts(
            4,
            rows.iter().map(|(w, cells)| {
                (
                    w.to_string(),
                    cells.iter().copied().collect::<BTreeMap<_, _>>(),
                )
            }),
        )
        .unwrap()
    }

    #[test]
    fn two_word_model_neighbour_is_the_other_word() {
        let s = store(&[("a", &[(0, 1), (1, 2)]), ("b", &[(0, 2), (2, 1)])]);
        let nn = neighbours(&s, "a", 1, Measure::Gamma).unwrap();
        assert_eq!(nn.len(), 1);
        assert_eq!(nn[0].0, "b");
    }

    #[test]
    fn ties_break_lexicographically() {
        let s = store(&[
            ("q", &[(0, 3), (1, 1)]),
            ("z", &[(0, 3), (1, 1)]),
            ("b", &[(0, 3), (1, 1)]),
            ("m", &[(0, 3), (1, 1)]),
        ]);
        let nn = neighbours(&s, "q", 3, Measure::Cosine).unwrap();
        assert_eq!(nn.iter().map(|p| p.0).collect::<Vec<_>>(), ["b", "m", "z"]);
    }

    #[test]
    fn matches_brute_force_resort() {
        let rows: Vec<(String, Vec<(u32, u64)>)> = (0..30u64)
            .map(|i| {
                let cells = (0..4u32)
                    .map(|d| (d, (i * 7 + u64::from(d) * 13) % 5 + 1))
                    .collect();
                (format!("w{i:02}"), cells)
            })
            .collect();
        let s = EmbeddingStore::from_counts(
            4,
            rows.iter()
                .map(|(w, c)| (w.clone(), c.iter().copied().collect::<BTreeMap<_, _>>())),
        )
        .unwrap();
        for measure in [Measure::Gamma, Measure::Cosine, Measure::Pearson] {
            let got = neighbours(&s, "w03", 100, measure).unwrap();
            let target = s.get("w03").unwrap();
            let mut brute: Vec<(String, f64)> = s
                .words()
                .into_iter()
                .filter(|w| *w != "w03")
                .filter_map(|w| {
                    measure
                        .compare(target, s.get(w).unwrap(), 4)
                        .ok()
                        .map(|x| (w.to_owned(), x))
                })
                .collect();
            brute.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
            let got: Vec<(String, f64)> = got.into_iter().map(|(w, x)| (w.to_owned(), x)).collect();
            assert_eq!(got.len(), brute.len());
            for (g, b) in got.iter().zip(&brute) {
                assert_eq!(g.0, b.0);
                assert!((g.1 - b.1).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn oov_is_a_data_error() {
        let s = store(&[("a", &[(0, 1)])]);
        let err = neighbours(&s, "zzz", 1, Measure::Gamma).unwrap_err();
        assert_eq!(err.code, crate::fail::Code::Data);
        assert!(err.to_string().contains("out of vocabulary"));
    }
}
