//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the report reads top to bottom.

#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop,
    clippy::type_complexity
)]

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wikidiv_core::align::{adjust_single_language_fraction, build_ill_graph, concept_align, ConceptId, IllGraph, Node};
use wikidiv_core::census::{coverage_distribution, global_concepts, pairwise_coverage, CensusOptions};
use wikidiv_core::esa::{
    build_index, select_intersection_concepts, BuildOptions, EsaIndex, KbMember, KnowledgeBase, SelectionDescriptor,
    TextPipeline,
};
use wikidiv_core::experiment::{cross_language_report, sample_pairs};
use wikidiv_core::ingest::{parse_dump, parse_dump_with_stats, resolve_links, write_canonical, DumpFormat};
use wikidiv_core::manifest::InputFile;
use wikidiv_core::oc::{oc_study, overlap_coefficient, overlap_ratio, OcConfig};
use wikidiv_core::stats::{pearson, ranks, spearman};
use wikidiv_core::synth::{generate, CorpusLedger, OverlapBucket, SynthConfig};
use wikidiv_core::{ArticleSet, ConceptTable, LanguageCode, ToolConfig};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn lang(c: &str) -> LanguageCode {
    LanguageCode::new(c).unwrap()
}

fn langs(codes: &[&str]) -> Vec<LanguageCode> {
    codes.iter().map(|c| lang(c)).collect()
}

fn within(limit: Duration, elapsed: Duration, what: &str) -> Result<(), String> {
    ensure!(elapsed < limit, "{what} took {elapsed:.2?}, limit {limit:?}");
    Ok(())
}

fn pipeline(cfg: &SynthConfig) -> (CorpusLedger, Vec<ArticleSet>, ConceptTable) {
    let tool = ToolConfig::default();
    let corpus = generate(cfg, &tool).unwrap();
    let sets = corpus.ingest(&tool).unwrap();
    let graph = build_ill_graph(&sets, tool.redirect_chain_limit).unwrap();
    let table = concept_align(&graph);
    (corpus.ledger, sets, table)
}

// 1 ------------------------------------------------------------------

fn random_graph(seed: u64, max_nodes: usize, max_edges: usize) -> IllGraph {
    let codes = ["en", "de", "fr", "es", "ja", "it"];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_nodes);
    let nodes: Vec<Node> = (0..n)
        .map(|i| Node {
            lang: lang(codes[i % codes.len()]),
            id: i as u64,
            title: format!("N{i}"),
            disambiguation: false,
        })
        .collect();
    let m = rng.gen_range(0..=max_edges);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a % codes.len() != b % codes.len() {
            edges.push((a as u32, b as u32));
        }
    }
    IllGraph::from_parts(nodes, edges).unwrap()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union_find_partition(graph: &IllGraph) -> BTreeSet<Vec<u32>> {
    let mut parent: Vec<usize> = (0..graph.nodes.len()).collect();
    for &(a, b) in &graph.edges {
        let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
        parent[ra.max(rb)] = ra.min(rb);
    }
    let mut groups: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for i in 0..graph.nodes.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i as u32);
    }
    groups.into_values().collect()
}

fn table_partition(graph: &IllGraph, table: &ConceptTable) -> Option<BTreeSet<Vec<u32>>> {
    let mut groups: BTreeMap<ConceptId, Vec<u32>> = BTreeMap::new();
    for (i, node) in graph.nodes.iter().enumerate() {
        groups
            .entry(table.concept_of(&node.lang, node.id)?)
            .or_default()
            .push(i as u32);
    }
    Some(groups.into_values().collect())
}

fn alignment_oracle() -> Outcome {
    let mut spent = Duration::ZERO;
    let mut largest = 0;
    for seed in 0..100 {
        let g = random_graph(seed, 10_000, 30_000);
        largest = largest.max(g.nodes.len());
        let t = Instant::now();
        let table = concept_align(&g);
        spent += t.elapsed();
        let got = table_partition(&g, &table).ok_or(format!("seed {seed}: unlabeled node"))?;
        ensure!(
            got == union_find_partition(&g),
            "seed {seed}: partition differs from union-find"
        );
    }
    within(Duration::from_secs(5), spent, "alignment")?;
    Ok(format!("100 graphs, largest {largest} nodes, alignment {spent:.2?}"))
}

// 2 ------------------------------------------------------------------

fn two_concept_fixture() -> Outcome {
    let cfg = ToolConfig::default().with_languages(["en", "es", "de"]).unwrap();
    let dumps = [
        ("en", vec![("A_EN", "[[es:A_ES]] [[de:A_DE]]"), ("B_EN", "")]),
        ("es", vec![("A_ES", ""), ("B_ES", "[[de:B_DE]]")]),
        ("de", vec![("A_DE", ""), ("B_DE", "[[en:B_EN]]")]),
    ];
    let sets: Vec<ArticleSet> = dumps
        .iter()
        .map(|(code, pages)| {
            let body: String = pages
                .iter()
                .enumerate()
                .map(|(i, (title, text))| {
                    format!(
                        "{}\n",
                        serde_json::json!({"id": i + 1, "lang": code, "title": title, "kind": "regular", "text": text})
                    )
                })
                .collect();
            resolve_links(
                parse_dump(body.as_bytes(), &lang(code), DumpFormat::Jsonl, &cfg).unwrap(),
                4,
            )
            .0
        })
        .collect();
    let graph = build_ill_graph(&sets, 4).unwrap();
    ensure!(graph.edges.len() == 4, "{} edges", graph.edges.len());
    let table = concept_align(&graph);
    ensure!(table.len() == 2, "{} concepts", table.len());
    for c in table.iter() {
        ensure!(c.article_count() == 3, "concept with {} articles", c.article_count());
    }
    let id = |code: &str, title: &str| {
        let set = sets.iter().find(|s| s.lang.as_str() == code).unwrap();
        table.concept_of(&set.lang, set.id_of(title).unwrap()).unwrap()
    };
    ensure!(id("es", "A ES") == id("de", "A DE"), "A_ES and A_DE split");
    ensure!(id("es", "B ES") == id("en", "B EN"), "B_ES and B_EN split");
    ensure!(id("en", "A EN") != id("en", "B EN"), "A and B merged");
    Ok("two concepts of three articles; A_ES ~ A_DE without a direct edge".into())
}

// 3 ------------------------------------------------------------------

fn best_case_adjustment() -> Outcome {
    let v: f64 = adjust_single_language_fraction(0.741, 0.08).map_err(|e| e.to_string())?;
    ensure!((v - 0.682).abs() <= 0.001, "got {v}");
    Ok(format!("adjusted fraction {v:.4}"))
}

// 4 ------------------------------------------------------------------

fn census_ledger() -> Outcome {
    let start = Instant::now();
    let cfg = SynthConfig {
        languages: langs(&["en", "de", "fr", "es", "it"]),
        seed: 2024,
        overlap: vec![
            OverlapBucket {
                languages: 1,
                count: 250,
            },
            OverlapBucket {
                languages: 2,
                count: 120,
            },
            OverlapBucket {
                languages: 3,
                count: 80,
            },
            OverlapBucket {
                languages: 4,
                count: 50,
            },
            OverlapBucket {
                languages: 5,
                count: 100,
            },
        ],
        time_concepts: 8,
        time_links_per_article: 1,
        clarity_defects: 10,
        disambiguation_per_language: 5,
        redirects_per_language: 20,
        redirect_cycles_per_language: 2,
        dangling_links_per_article: 1,
        dangling_ills_per_language: 3,
        links_per_article: 8,
        ..Default::default()
    };
    let (ledger, _, table) = pipeline(&cfg);
    ensure!(ledger.concepts.len() >= 500, "{} concepts", ledger.concepts.len());
    ensure!(
        table.len() == ledger.concepts.len(),
        "{} aligned vs {} planted",
        table.len(),
        ledger.concepts.len()
    );
    let ids: Vec<ConceptId> = ledger
        .concepts
        .iter()
        .map(|c| {
            let (l, ms) = c.members.iter().next().unwrap();
            table.concept_of(l, ms[0].id).unwrap()
        })
        .collect();
    let covered = |i: usize, l: &LanguageCode| {
        ledger.concepts[i]
            .members
            .get(l)
            .is_some_and(|ms| ms.iter().any(|m| !m.disambiguation))
    };
    let opts = CensusOptions::default();
    let k = cfg.languages.len();

    let mut expected = vec![0usize; k];
    let mut global = Vec::new();
    for i in 0..ledger.concepts.len() {
        let n = cfg.languages.iter().filter(|l| covered(i, l)).count();
        if n > 0 {
            expected[n - 1] += 1;
        }
        if n == k {
            global.push(ids[i]);
        }
    }
    global.sort();
    let d = coverage_distribution(&table, &cfg.languages, opts).map_err(|e| e.to_string())?;
    ensure!(
        d.counts == expected,
        "distribution {:?} vs ledger {expected:?}",
        d.counts
    );
    let g = global_concepts(&table, &cfg.languages, opts).map_err(|e| e.to_string())?;
    ensure!(g == global, "{} global vs ledger {}", g.len(), global.len());

    let mut cells = 0;
    for row in &cfg.languages {
        for col in &cfg.languages {
            let in_col: Vec<usize> = (0..ledger.concepts.len()).filter(|&i| covered(i, col)).collect();
            let shared = in_col.iter().filter(|&&i| covered(i, row)).count();
            let got: f64 = pairwise_coverage(&table, row, col, opts).map_err(|e| e.to_string())?;
            ensure!(
                got == shared as f64 / in_col.len() as f64,
                "coverage {row} over {col}: {got}"
            );
            cells += 1;
        }
    }
    within(Duration::from_secs(10), start.elapsed(), "census")?;
    Ok(format!(
        "{} concepts, distribution {:?}, {} global, {cells} coverage cells, {:.2?}",
        ledger.concepts.len(),
        d.counts,
        g.len(),
        start.elapsed()
    ))
}

// 5 ------------------------------------------------------------------

fn oc_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..1000 {
        let mut draw = || -> BTreeSet<u32> {
            let len = rng.gen_range(1..40);
            (0..len).map(|_| rng.gen_range(0..60)).collect()
        };
        let (a, b) = (draw(), draw());
        let shared = a.iter().filter(|x| b.iter().any(|y| y == *x)).count();
        let smaller = a.len().min(b.len());
        let r = overlap_ratio(&a, &b).map_err(|e| e.to_string())?;
        ensure!(
            *r.numer() * smaller == shared * *r.denom(),
            "pair {i}: ratio {r} vs {shared}/{smaller}"
        );
        let f: f64 = overlap_coefficient(&a, &b).map_err(|e| e.to_string())?;
        ensure!(
            f == shared as f64 / smaller as f64,
            "pair {i}: {f} vs {shared}/{smaller}"
        );
    }

    let cfg = SynthConfig {
        languages: langs(&["en", "de", "fr", "es"]),
        seed: 50,
        overlap: vec![
            OverlapBucket {
                languages: 1,
                count: 40,
            },
            OverlapBucket {
                languages: 4,
                count: 200,
            },
        ],
        links_per_article: 10,
        link_overlap_rate: 0.5,
        time_concepts: 4,
        time_links_per_article: 1,
        redirects_per_language: 15,
        dangling_links_per_article: 1,
        ..Default::default()
    };
    let (_, sets, table) = pipeline(&cfg);
    let rules = ToolConfig::default().time_title_rules().map_err(|e| e.to_string())?;
    let report = oc_study(&table, &sets, &cfg.languages, &rules, &OcConfig::default()).map_err(|e| e.to_string())?;
    let mean = report.mean.ok_or("no samples")?;
    ensure!(report.sample_size >= 1000, "only {} samples", report.sample_size);
    ensure!((mean - 0.5).abs() <= 0.02, "mean OC {mean}");
    within(Duration::from_secs(10), start.elapsed(), "OC")?;
    Ok(format!(
        "1000 brute-force pairs exact; planted 0.5 -> mean {mean:.4} over {} samples, {:.2?}",
        report.sample_size,
        start.elapsed()
    ))
}

// 6 ------------------------------------------------------------------

fn esa_hand_oracle() -> Outcome {
    let texts = [
        "apple banana apple cherry",
        "banana cherry date",
        "apple date date egg banana",
    ]
    .map(String::from);
    let kb = KnowledgeBase {
        lang: lang("en"),
        descriptor: SelectionDescriptor::Explicit,
        members: (0..3)
            .map(|i| KbMember {
                article_id: i + 1,
                title: format!("Doc {i}"),
                concept: None,
            })
            .collect(),
    };
    let p = TextPipeline::new();
    let idx: EsaIndex<f64> = build_index(&kb, &texts, &p, &BuildOptions::default()).map_err(|e| e.to_string())?;
    let l15 = 1.5f64.ln();
    let l3 = 3f64.ln();
    let close = |a: f64, b: f64| (a - b).abs() < 1e-9;

    ensure!(
        idx.postings("banana").is_none(),
        "banana occurs everywhere and must drop out"
    );
    for (t, o, w) in [
        ("apple", 0, 2.0 * l15),
        ("cherry", 0, l15),
        ("cherry", 1, l15),
        ("date", 1, l15),
        ("apple", 2, l15),
        ("date", 2, 2.0 * l15),
        ("egg", 2, l3),
        ("egg", 0, 0.0),
    ] {
        ensure!(close(idx.weight(t, o), w), "weight {t}/{o} = {}", idx.weight(t, o));
    }
    let v = idx.interpret("apple egg", &p);
    for (o, w) in [0.894427190999916, 0.0, 1.0559262295610068].iter().enumerate() {
        ensure!(close(v.get(o as u32), *w), "vector[{o}] = {}", v.get(o as u32));
    }
    for (a, b, r) in [
        ("apple egg", "cherry date", 0.4553667798448464),
        ("apple", "date", 0.1901849348063872),
    ] {
        let got = idx.relatedness(a, b, &p);
        ensure!(close(got, r), "rel({a}, {b}) = {got}");
    }
    ensure!(idx.relatedness("apple egg", "apple egg", &p) == 1.0, "self-relatedness");
    ensure!(idx.relatedness("egg", "cherry", &p) == 0.0, "zero-overlap pair");
    Ok("weights, vectors and cosines within 1e-9; self 1.0; disjoint 0.0".into())
}

// 7 ------------------------------------------------------------------

fn definition_r(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    sxy / (sxx.sqrt() * syy.sqrt())
}

fn correlation_identities() -> Outcome {
    let x = [0.12, 0.5, 0.33, 0.9, 0.05, 0.61, 0.72, 0.28, 0.44, 0.87];
    let y = [0.2, 0.41, 0.3, 0.77, 0.15, 0.5, 0.92, 0.1, 0.39, 0.8];
    let neg: Vec<f64> = x.iter().map(|v| -v).collect();
    let e = |e: wikidiv_core::Error| e.to_string();
    let rxx: f64 = pearson(&x, &x).map_err(e)?;
    let rxn: f64 = pearson(&x, &neg).map_err(e)?;
    let rxy: f64 = pearson(&x, &y).map_err(e)?;
    ensure!(rxx == 1.0, "r(x,x) = {rxx}");
    ensure!(rxn == -1.0, "r(x,-x) = {rxn}");
    ensure!(
        (rxy - definition_r(&x, &y)).abs() < 1e-12,
        "fixture {rxy} vs {}",
        definition_r(&x, &y)
    );

    let tx = [10.0, 20.0, 20.0, 30.0, 40.0];
    let ty = [2.0, 1.0, 3.0, 9.0, 7.0];
    ensure!(ranks(&tx) == vec![1.0, 2.5, 2.5, 4.0, 5.0], "ranks {:?}", ranks(&tx));
    let by_hand = definition_r(&[1.0, 2.5, 2.5, 4.0, 5.0], &[2.0, 1.0, 3.0, 5.0, 4.0]);
    let rs: f64 = spearman(&tx, &ty).map_err(e)?;
    ensure!((rs - by_hand).abs() < 1e-12, "spearman {rs} vs {by_hand}");
    Ok(format!(
        "r(x,x)=1, r(x,-x)={rxn}, fixture r={rxy:.6}, spearman with ties {rs:.6}"
    ))
}

// 8 ------------------------------------------------------------------

fn directional_separation() -> Outcome {
    let start = Instant::now();
    let tool = ToolConfig::default();
    let (a, b, c) = (lang("en"), lang("de"), lang("fr"));
    let mut lines = Vec::new();
    for seed in 0..10u64 {
        let cfg = SynthConfig {
            languages: vec![a.clone(), b.clone(), c.clone()],
            seed,
            overlap: vec![
                OverlapBucket {
                    languages: 1,
                    count: 30,
                },
                OverlapBucket {
                    languages: 3,
                    count: 200,
                },
            ],
            links_per_article: 8,
            noise_rate: 0.2,
            content_groups: [(a.clone(), 0), (b.clone(), 0), (c.clone(), 1)].into_iter().collect(),
            ..Default::default()
        };
        let (_, sets, table) = pipeline(&cfg);
        let kbs = select_intersection_concepts(&table, &sets, &cfg.languages).map_err(|e| e.to_string())?;
        let p = TextPipeline::new();
        let built: Vec<(LanguageCode, EsaIndex<f64>)> = kbs
            .iter()
            .map(|kb| {
                let set = sets.iter().find(|s| s.lang == kb.lang).unwrap();
                let texts = kb.texts(set, &tool).unwrap();
                (
                    kb.lang.clone(),
                    build_index(kb, &texts, &p, &BuildOptions::default()).unwrap(),
                )
            })
            .collect();
        let indices: BTreeMap<LanguageCode, &EsaIndex<f64>> = built.iter().map(|(l, i)| (l.clone(), i)).collect();
        let sample = sample_pairs(&table, &cfg.languages, 1000, 2, seed).map_err(|e| e.to_string())?;
        let report = cross_language_report(sample, &indices, &BTreeMap::new()).map_err(|e| e.to_string())?;
        let m = &report.without_identity;
        let r = |x: &LanguageCode, y: &LanguageCode| {
            let i = m.labels.iter().position(|l| l == x.as_str()).unwrap();
            let j = m.labels.iter().position(|l| l == y.as_str()).unwrap();
            m.cells[i][j].unwrap_or(f64::NAN)
        };
        let (ab, ac, bc) = (r(&a, &b), r(&a, &c), r(&b, &c));
        ensure!(
            ab > ac && ab > bc,
            "seed {seed}: r(A,B)={ab:.3} r(A,C)={ac:.3} r(B,C)={bc:.3}"
        );
        lines.push(format!("{ab:.2}/{ac:.2}/{bc:.2}"));
    }
    within(Duration::from_secs(60), start.elapsed(), "separation")?;
    Ok(format!(
        "10/10 seeds, r(A,B)/r(A,C)/r(B,C): {}; {:.2?}",
        lines.join(" "),
        start.elapsed()
    ))
}

// 9 ------------------------------------------------------------------

fn run(args: &[&str]) -> Result<(), String> {
    let mut argv = vec!["wikidiv", "--log-level", "warn"];
    argv.extend_from_slice(args);
    match wikidiv_cli::dispatch(argv) {
        0 => Ok(()),
        code => Err(format!("`{}` exited with {code}", args.join(" "))),
    }
}

fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else if !path.to_string_lossy().ends_with(".timings.json")
                && path.extension().is_some_and(|e| e != "toml")
            {
                out.insert(
                    path.strip_prefix(dir).unwrap().to_path_buf(),
                    std::fs::read(&path).unwrap(),
                );
            }
        }
    }
    out
}

fn full_run(dir: &Path) -> Result<(), String> {
    let s = |p: &str| dir.join(p).to_string_lossy().into_owned();
    let (cfg, corpus, concepts) = (s("synth.toml"), s("corpus"), s("concepts.json"));
    run(&["--config", &cfg, "--seed", "17", "synth", "--out", &corpus])?;
    for l in ["en", "de", "fr"] {
        let dump = format!("{corpus}/{l}.jsonl");
        run(&[
            "ingest",
            "--dump",
            &dump,
            "--lang",
            l,
            "--out",
            &s(&format!("{l}.artdb")),
        ])?;
    }
    let artdbs = [s("en.artdb"), s("de.artdb"), s("fr.artdb")];
    let mut align = vec!["align", "--artdb"];
    align.extend(artdbs.iter().map(String::as_str));
    align.extend(["--out", &concepts]);
    run(&align)?;
    run(&[
        "census",
        "--concepts",
        &concepts,
        "--langs",
        "en",
        "de",
        "fr",
        "--out",
        &s("census.json"),
        "--csv",
        &s("census.csv"),
    ])?;
    let mut oc = vec![
        "--seed",
        "3",
        "oc",
        "--concepts",
        &concepts,
        "--langs",
        "en",
        "de",
        "fr",
        "--sample",
        "40",
        "--artdb",
    ];
    oc.extend(artdbs.iter().map(String::as_str));
    let oc_out = s("oc.json");
    oc.extend(["--out", &oc_out]);
    run(&oc)?;
    let idx = s("idx");
    let mut build = vec![
        "esa-build",
        "--selection",
        "intersection",
        "--langs",
        "en",
        "de",
        "fr",
        "--concepts",
        &concepts,
        "--artdb",
    ];
    build.extend(artdbs.iter().map(String::as_str));
    build.extend(["--out", &idx]);
    run(&build)?;
    run(&[
        "--seed",
        "9",
        "esa-build",
        "--selection",
        "random",
        "--lang",
        "en",
        "--n",
        "60",
        "--artdb",
        &artdbs[0],
        "--out",
        &s("random.esa"),
    ])?;
    let (ien, ide, ifr) = (
        format!("{idx}/en.esa"),
        format!("{idx}/de.esa"),
        format!("{idx}/fr.esa"),
    );
    let xl = s("xl.json");
    run(&[
        "--seed",
        "4",
        "experiment",
        "cross-lang",
        "--indices",
        &ien,
        &ide,
        &ifr,
        "--concepts",
        &concepts,
        "--pairs",
        "300",
        "--out",
        &xl,
        "--csv",
        &s("xl.csv"),
    ])?;
    run(&[
        "--seed",
        "6",
        "experiment",
        "baseline",
        "--artdb",
        &artdbs[0],
        "--k",
        "4",
        "--n",
        "60",
        "--sample-from",
        &xl,
        "--out",
        &s("bl.json"),
    ])?;
    Ok(())
}

fn reproducibility() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    std::fs::write(
        dir.path().join("synth.toml"),
        "languages = [\"en\", \"de\", \"fr\"]\n\
         overlap = [{ languages = 1, count = 40 }, { languages = 3, count = 150 }]\n\
         time_concepts = 4\ntime_links_per_article = 1\nredirects_per_language = 8\n\
         noise_rate = 0.3\ncontent_groups = { en = 0, de = 0, fr = 1 }\n",
    )
    .map_err(|e| e.to_string())?;
    full_run(dir.path())?;
    let first = snapshot(dir.path());
    full_run(dir.path())?;
    let second = snapshot(dir.path());
    ensure!(first.len() >= 15, "only {} outputs", first.len());
    for (path, bytes) in &first {
        ensure!(
            second.get(path) == Some(bytes),
            "{} differs between runs",
            path.display()
        );
    }

    let mut reports = 0;
    for (path, bytes) in &first {
        if path.extension().is_none_or(|e| e != "json") || path.starts_with("corpus") {
            continue;
        }
        let v: serde_json::Value = serde_json::from_slice(bytes).map_err(|e| e.to_string())?;
        let Some(m) = v.get("manifest") else { continue };
        reports += 1;
        for input in m["inputs"].as_array().ok_or("manifest without inputs")? {
            let p = Path::new(input["path"].as_str().unwrap());
            let h = InputFile::hash(p).map_err(|e| e.to_string())?;
            ensure!(
                input["sha256"] == h.sha256,
                "{}: stale hash for {}",
                path.display(),
                p.display()
            );
        }
        ensure!(
            m["config_hash"].as_str().is_some_and(|h| h.len() == 64),
            "{}: config hash",
            path.display()
        );
    }
    ensure!(reports >= 4, "only {reports} manifest-bearing reports");
    Ok(format!(
        "{} files byte-identical across reruns; {reports} manifests verified",
        first.len()
    ))
}

// 10 -----------------------------------------------------------------

struct Chunked<'a> {
    data: &'a [u8],
    chunk: usize,
}

impl Read for Chunked<'_> {
    fn read(&mut self, buf: &mut [u8]) -> std::io::Result<usize> {
        let n = self.chunk.min(buf.len()).min(self.data.len());
        buf[..n].copy_from_slice(&self.data[..n]);
        self.data = &self.data[n..];
        Ok(n)
    }
}

fn big_xml(target: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let words = ["Ärger", "Zürich", "東京", "Fish &amp; chips", "Alpha", "Ωmega"];
    let mut out = String::from("<mediawiki>\n");
    let mut id = 1u64;
    while out.len() < target {
        let title = format!("{} {id}", words[rng.gen_range(0..words.len())]);
        let body = if id > 1 && rng.gen_ratio(1, 10) {
            format!("#REDIRECT [[{} {}]]", words[0], rng.gen_range(1..id))
        } else {
            (0..rng.gen_range(5..40))
                .map(|_| {
                    format!(
                        "text {w} [[{w} {t}|x]] &lt;b&gt; ",
                        w = words[rng.gen_range(0..words.len())],
                        t = rng.gen_range(1..id + 50)
                    )
                })
                .collect::<String>()
                + &format!("[[de:{title}]]")
        };
        let ns = if rng.gen_ratio(1, 20) { 4 } else { 0 };
        out.push_str(&format!(
            "<page><title>{title}</title><ns>{ns}</ns><id>{id}</id><revision><text>{body}</text></revision></page>\n"
        ));
        id += 1;
    }
    out + "</mediawiki>\n"
}

fn parser_robustness() -> Outcome {
    let cfg = ToolConfig::default();
    let en = lang("en");
    let xml = big_xml(3 << 19);
    let (whole, stats) =
        parse_dump_with_stats(xml.as_bytes(), &en, DumpFormat::Xml, &cfg).map_err(|e| e.to_string())?;
    for chunk in [1, 7, 4093] {
        let set = parse_dump(
            Chunked {
                data: xml.as_bytes(),
                chunk,
            },
            &en,
            DumpFormat::Xml,
            &cfg,
        )
        .map_err(|e| e.to_string())?;
        ensure!(set == whole, "XML differs at chunk size {chunk}");
    }
    let mut canonical = Vec::new();
    write_canonical(&whole, &mut canonical).map_err(|e| e.to_string())?;
    let back = parse_dump(&canonical[..], &en, DumpFormat::Jsonl, &cfg).map_err(|e| e.to_string())?;
    ensure!(back == whole, "canonical round trip changed the set");
    for chunk in [1, 13, 65537] {
        let set = parse_dump(
            Chunked {
                data: &canonical,
                chunk,
            },
            &en,
            DumpFormat::Jsonl,
            &cfg,
        )
        .map_err(|e| e.to_string())?;
        ensure!(set == whole, "JSONL differs at chunk size {chunk}");
    }
    let mut again = Vec::new();
    write_canonical(&back, &mut again).map_err(|e| e.to_string())?;
    ensure!(again == canonical, "second canonical write differs");
    Ok(format!(
        "{:.2} MB XML, {} pages, chunkings 1/7/4093 identical; {:.2} MB canonical round trip identical",
        xml.len() as f64 / 1e6,
        stats.pages_seen,
        canonical.len() as f64 / 1e6
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("alignment oracle", alignment_oracle),
        ("two-concept fixture", two_concept_fixture),
        ("best-case adjustment", best_case_adjustment),
        ("census ledger equivalence", census_ledger),
        ("overlap coefficient oracle", oc_oracle),
        ("ESA hand oracle", esa_hand_oracle),
        ("correlation identities", correlation_identities),
        ("directional separation", directional_separation),
        ("reproducibility", reproducibility),
        ("parser robustness", parser_robustness),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{elapsed:.2?}]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{elapsed:.2?}]: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
