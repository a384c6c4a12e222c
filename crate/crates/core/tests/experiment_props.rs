//! End-to-end relatedness experiments on generated corpora.

use std::collections::BTreeMap;

use proptest::prelude::*;
use wikidiv_core::align::{build_ill_graph, concept_align};
use wikidiv_core::esa::{build_index, select_intersection_concepts, BuildOptions, EsaIndex, TextPipeline};
use wikidiv_core::experiment::{
    correlation_matrix, cross_language_report, derive_seeds, same_language_baseline, sample_pairs, ExperimentReport,
};
use wikidiv_core::synth::{generate, OverlapBucket, SynthConfig};
use wikidiv_core::{ArticleSet, ConceptTable, LanguageCode, ToolConfig};

fn langs(codes: &[&str]) -> Vec<LanguageCode> {
    codes.iter().map(|c| LanguageCode::new(*c).unwrap()).collect()
}

fn corpus(cfg: &SynthConfig) -> (Vec<ArticleSet>, ConceptTable) {
    let tool = ToolConfig::default();
    let sets = generate(cfg, &tool).unwrap().ingest(&tool).unwrap();
    let graph = build_ill_graph(&sets, tool.redirect_chain_limit).unwrap();
    (sets.clone(), concept_align(&graph))
}

fn config(groups: &[(&str, usize)], noise: f64, seed: u64) -> SynthConfig {
    SynthConfig {
        languages: groups.iter().map(|(l, _)| LanguageCode::new(*l).unwrap()).collect(),
        seed,
        overlap: vec![OverlapBucket {
            languages: groups.len(),
            count: 150,
        }],
        links_per_article: 6,
        noise_rate: noise,
        content_groups: groups
            .iter()
            .map(|(l, g)| (LanguageCode::new(*l).unwrap(), *g))
            .collect(),
        ..Default::default()
    }
}

fn cross_language(cfg: &SynthConfig, pairs: usize) -> ExperimentReport {
    let tool = ToolConfig::default();
    let (sets, table) = corpus(cfg);
    let kbs = select_intersection_concepts(&table, &sets, &cfg.languages).unwrap();
    let p = TextPipeline::new();
    let indices: Vec<(LanguageCode, EsaIndex<f64>)> = kbs
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
    let indices: BTreeMap<LanguageCode, &EsaIndex<f64>> = indices.iter().map(|(l, i)| (l.clone(), i)).collect();
    let sample = sample_pairs(&table, &cfg.languages, pairs, 2, 11).unwrap();
    cross_language_report(sample, &indices, &BTreeMap::new()).unwrap()
}

#[test]
fn isomorphic_editions_correlate_perfectly() {
    let report = cross_language(&config(&[("en", 0), ("de", 0), ("fr", 0)], 0.0, 3), 400);
    let m = &report.without_identity;
    assert_eq!(m.pairs_averaged, 3);
    for r in m.off_diagonal() {
        assert!(r > 1.0 - 1e-9, "{r}");
    }
    let en = &report.scores[&LanguageCode::new("en").unwrap()];
    let de = &report.scores[&LanguageCode::new("de").unwrap()];
    for (a, b) in en.iter().zip(de) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn near_duplicate_editions_correlate_strongly() {
    let report = cross_language(&config(&[("en", 0), ("de", 0)], 0.05, 4), 400);
    let r = report.without_identity.mean_r.unwrap();
    assert!(r > 0.95 && r < 1.0, "{r}");
}

#[test]
fn different_content_lowers_correlation() {
    let same = cross_language(&config(&[("en", 0), ("de", 0)], 0.0, 5), 400);
    let diff = cross_language(&config(&[("en", 0), ("de", 1)], 0.0, 5), 400);
    let (s, d) = (
        same.without_identity.mean_r.unwrap(),
        diff.without_identity.mean_r.unwrap(),
    );
    assert!(d < s - 0.1, "same {s} different {d}");
    // identity pairs score 1 everywhere and pull the correlation up
    assert!(diff.with_identity.mean_r.unwrap() >= d);
}

#[test]
fn baseline_with_repeated_seed_is_perfectly_correlated() {
    let cfg = SynthConfig {
        languages: langs(&["en"]),
        overlap: vec![OverlapBucket {
            languages: 1,
            count: 200,
        }],
        links_per_article: 6,
        ..Default::default()
    };
    let (sets, _) = corpus(&cfg);
    let set = &sets[0];
    let titles: Vec<(String, String)> = set
        .iter()
        .step_by(3)
        .zip(set.iter().skip(1).step_by(3))
        .map(|(a, b)| (a.title().to_string(), b.title().to_string()))
        .take(50)
        .collect();
    let mask = vec![false; titles.len()];
    let tool = ToolConfig::default();
    let same =
        same_language_baseline::<f64>(set, &[7, 7, 7], 100, &titles, &mask, &tool, &BuildOptions::default()).unwrap();
    for r in same.without_identity.off_diagonal() {
        assert!((r - 1.0).abs() < 1e-12, "{r}");
    }
    let seeds = derive_seeds(1, 4);
    assert_eq!(seeds, derive_seeds(1, 4));
    let varied =
        same_language_baseline::<f64>(set, &seeds, 100, &titles, &mask, &tool, &BuildOptions::default()).unwrap();
    assert_eq!(varied.without_identity.labels.len(), 4);
    assert!(varied.without_identity.mean_r.unwrap() < 1.0);

    let err = same_language_baseline::<f64>(set, &seeds, 10_000, &titles, &mask, &tool, &BuildOptions::default())
        .unwrap_err();
    assert!(err.to_string().contains("10000"), "{err}");
}

proptest! {
    #[test]
    fn correlation_matrix_is_order_invariant(
        rows in proptest::collection::vec(proptest::collection::vec(0.0f64..1.0, 8), 3..6),
        rot in 0usize..6,
    ) {
        let named: Vec<(String, Vec<f64>)> =
            rows.iter().enumerate().map(|(i, v)| (format!("l{i}"), v.clone())).collect();
        let mut rotated = named.clone();
        rotated.rotate_left(rot % named.len());
        let a = correlation_matrix(&named, None).unwrap();
        let b = correlation_matrix(&rotated, None).unwrap();
        let find = |m: &wikidiv_core::experiment::CorrelationMatrix, x: &str, y: &str| {
            let i = m.labels.iter().position(|l| l == x).unwrap();
            let j = m.labels.iter().position(|l| l == y).unwrap();
            m.cells[i][j]
        };
        for x in &a.labels {
            for y in &a.labels {
                prop_assert_eq!(find(&a, x, y), find(&b, x, y));
            }
        }
        match (a.mean_r, b.mean_r) {
            (Some(p), Some(q)) => prop_assert!((p - q).abs() < 1e-12),
            (p, q) => prop_assert_eq!(p, q),
        }
    }
}
