//! Cross-language relatedness experiments: score one sample of concept pairs
//! under every language's ESA index and correlate the score vectors.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::align::{ConceptId, ConceptTable};
use crate::census::{global_concepts, CensusOptions};
use crate::config::ToolConfig;
use crate::error::{Error, Result};
use crate::esa::{
    build_index, select_random_concepts, BuildOptions, EsaIndex, KnowledgeBase, SelectionDescriptor, TextPipeline,
};
use crate::ingest::ArticleSet;
use crate::lang::{is_single_word, LanguageCode};
use crate::scalar::Scalar;
use crate::stats::{self, TTest};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptPairSample {
    pub languages: Vec<LanguageCode>,
    pub seed: u64,
    /// Concepts eligible for sampling.
    pub candidates: usize,
    /// Random pairs first, then `identity_pairs` pairs (C, C).
    pub pairs: Vec<(ConceptId, ConceptId)>,
    pub identity_pairs: usize,
    /// Per language, the title pair realizing each sampled pair.
    pub titles: BTreeMap<LanguageCode, Vec<(String, String)>>,
}

impl ConceptPairSample {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_identity(&self, i: usize) -> bool {
        let (a, b) = self.pairs[i];
        a == b
    }

    /// Sample restricted to the given languages' titles.
    pub fn for_language(&self, lang: &LanguageCode) -> Result<&[(String, String)]> {
        self.titles
            .get(lang)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::invalid(format!("sample has no titles for {lang}")))
    }
}

/// Samples `n` concept pairs among concepts global over `langs` whose title
/// is a single word in every language. `identity` of the `n` pairs are
/// (C, C); the rest are distinct unordered pairs.
pub fn sample_pairs(
    table: &ConceptTable,
    langs: &[LanguageCode],
    n: usize,
    identity: usize,
    seed: u64,
) -> Result<ConceptPairSample> {
    let langs: Vec<LanguageCode> = langs.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if identity > n {
        return Err(Error::invalid(format!(
            "{identity} identity pairs exceed {n} total pairs"
        )));
    }
    let candidates: Vec<ConceptId> = global_concepts(table, &langs, CensusOptions::default())?
        .into_iter()
        .filter(|id| {
            let c = table.get(*id).expect("listed concept");
            langs
                .iter()
                .all(|l| c.representative(l).is_some_and(|m| is_single_word(&m.title)))
        })
        .collect();
    let k = candidates.len();
    let random = n - identity;
    let possible = k * k.saturating_sub(1) / 2;
    if random > possible || identity > k {
        return Err(Error::Insufficient {
            what: format!("single-word global concepts over {} languages ({k} found)", langs.len()),
            needed: if random > possible { random } else { identity },
            available: if random > possible { possible } else { k },
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(n);
    if random * 2 <= possible {
        let mut seen = HashSet::with_capacity(random);
        while pairs.len() < random {
            let a = rng.gen_range(0..k);
            let b = rng.gen_range(0..k);
            if a == b {
                continue;
            }
            let key = (a.min(b), a.max(b));
            if seen.insert(key) {
                pairs.push((candidates[a], candidates[b]));
            }
        }
    } else {
        let all: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
        for i in index::sample(&mut rng, all.len(), random) {
            let (a, b) = all[i];
            pairs.push((candidates[a], candidates[b]));
        }
    }
    for i in index::sample(&mut rng, k, identity) {
        pairs.push((candidates[i], candidates[i]));
    }

    let titles = langs
        .iter()
        .map(|l| {
            let title = |c: ConceptId| {
                table
                    .get(c)
                    .and_then(|c| c.representative(l))
                    .expect("candidate member")
                    .title
                    .clone()
            };
            (l.clone(), pairs.iter().map(|&(a, b)| (title(a), title(b))).collect())
        })
        .collect();
    Ok(ConceptPairSample {
        languages: langs,
        seed,
        candidates: k,
        pairs,
        identity_pairs: identity,
        titles,
    })
}

/// Relatedness of every sampled title pair under one index.
pub fn score_titles<T: Scalar>(titles: &[(String, String)], index: &EsaIndex<T>, pipeline: &TextPipeline) -> Vec<T> {
    titles
        .par_iter()
        .map(|(a, b)| index.relatedness(a, b, pipeline))
        .collect()
}

/// SR vectors per language, each the length of the sample.
pub fn run_cross_language_sr<T: Scalar>(
    sample: &ConceptPairSample,
    indices: &BTreeMap<LanguageCode, &EsaIndex<T>>,
    pipelines: &BTreeMap<LanguageCode, TextPipeline>,
) -> Result<BTreeMap<LanguageCode, Vec<T>>> {
    let default = TextPipeline::new();
    sample
        .languages
        .iter()
        .map(|l| {
            let index = indices.get(l).ok_or_else(|| Error::MissingIndex(l.to_string()))?;
            if &index.lang != l {
                return Err(Error::invalid(format!("index for {l} was built for {}", index.lang)));
            }
            let p = pipelines.get(l).unwrap_or(&default);
            Ok((l.clone(), score_titles(sample.for_language(l)?, index, p)))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    /// Pearson r; `None` where a vector has zero variance.
    pub cells: Vec<Vec<Option<f64>>>,
    /// Mean over unordered off-diagonal pairs with a defined r.
    pub mean_r: Option<f64>,
    pub pairs_averaged: usize,
}

impl CorrelationMatrix {
    pub fn off_diagonal(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for i in 0..self.labels.len() {
            for j in i + 1..self.labels.len() {
                if let Some(r) = self.cells[i][j] {
                    out.push(r);
                }
            }
        }
        out
    }

    /// CSV with labels across the first row and down the first column.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(l);
            for cell in &self.cells[i] {
                out.push(',');
                if let Some(v) = cell {
                    out.push_str(&format!("{v:.2}"));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Pearson matrix over named score vectors, optionally keeping only the
/// positions where `keep` is true.
pub fn correlation_matrix<T: Scalar>(vectors: &[(String, Vec<T>)], keep: Option<&[bool]>) -> Result<CorrelationMatrix> {
    let filtered: Vec<Vec<f64>> = vectors
        .iter()
        .map(|(_, v)| {
            v.iter()
                .enumerate()
                .filter(|(i, _)| keep.is_none_or(|k| k[*i]))
                .map(|(_, x)| x.to_f64_lossy())
                .collect()
        })
        .collect();
    let k = vectors.len();
    let mut cells = vec![vec![None; k]; k];
    for i in 0..k {
        for j in i..k {
            let r = match stats::pearson(&filtered[i], &filtered[j]) {
                Ok(r) => Some(if i == j { 1.0 } else { r }),
                Err(Error::ZeroVariance(_)) => None,
                Err(e) => return Err(e),
            };
            cells[i][j] = r;
            cells[j][i] = r;
        }
    }
    let mut m = CorrelationMatrix {
        labels: vectors.iter().map(|(l, _)| l.clone()).collect(),
        cells,
        mean_r: None,
        pairs_averaged: 0,
    };
    let off = m.off_diagonal();
    m.pairs_averaged = off.len();
    m.mean_r = stats::mean(&off);
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub languages: Vec<LanguageCode>,
    pub sample: ConceptPairSample,
    pub descriptors: BTreeMap<LanguageCode, SelectionDescriptor>,
    pub scores: BTreeMap<LanguageCode, Vec<f64>>,
    pub with_identity: CorrelationMatrix,
    pub without_identity: CorrelationMatrix,
    pub mean_convention: String,
}

pub const MEAN_CONVENTION: &str = "mean of r over unordered language pairs";

pub fn cross_language_report<T: Scalar>(
    sample: ConceptPairSample,
    indices: &BTreeMap<LanguageCode, &EsaIndex<T>>,
    pipelines: &BTreeMap<LanguageCode, TextPipeline>,
) -> Result<ExperimentReport> {
    let scores = run_cross_language_sr(&sample, indices, pipelines)?;
    let named: Vec<(String, Vec<T>)> = scores.iter().map(|(l, v)| (l.to_string(), v.clone())).collect();
    let keep: Vec<bool> = (0..sample.len()).map(|i| !sample.is_identity(i)).collect();
    Ok(ExperimentReport {
        languages: sample.languages.clone(),
        descriptors: indices.iter().map(|(l, i)| (l.clone(), i.descriptor.clone())).collect(),
        with_identity: correlation_matrix(&named, None)?,
        without_identity: correlation_matrix(&named, Some(&keep))?,
        scores: scores
            .into_iter()
            .map(|(l, v)| (l, v.into_iter().map(Scalar::to_f64_lossy).collect()))
            .collect(),
        sample,
        mean_convention: MEAN_CONVENTION.to_string(),
    })
}

/// `k` seeds derived from one base seed.
pub fn derive_seeds(base: u64, k: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    (0..k).map(|_| rng.gen()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    pub lang: LanguageCode,
    pub seeds: Vec<u64>,
    pub knowledge_base_size: usize,
    pub descriptors: Vec<SelectionDescriptor>,
    pub with_identity: CorrelationMatrix,
    pub without_identity: CorrelationMatrix,
    pub mean_convention: String,
}

/// Scores `titles` under one random-selection index per seed, all built from
/// `set`, and correlates the resulting vectors pairwise.
pub fn same_language_baseline<T: Scalar>(
    set: &ArticleSet,
    seeds: &[u64],
    n: usize,
    titles: &[(String, String)],
    identity_mask: &[bool],
    config: &ToolConfig,
    options: &BuildOptions,
) -> Result<BaselineReport> {
    if seeds.len() < 2 {
        return Err(Error::invalid("baseline needs at least two knowledge bases"));
    }
    if identity_mask.len() != titles.len() {
        return Err(Error::invalid("identity mask length differs from sample length"));
    }
    let pipeline = TextPipeline::for_language(&set.lang, config);
    let kbs: Vec<KnowledgeBase> = seeds
        .iter()
        .map(|&s| select_random_concepts(set, n, s))
        .collect::<Result<_>>()?;
    let mut named = Vec::with_capacity(kbs.len());
    for (i, kb) in kbs.iter().enumerate() {
        let texts = kb.texts(set, config)?;
        let index: EsaIndex<T> = build_index(kb, &texts, &pipeline, options)?;
        named.push((format!("{}#{i}", set.lang), score_titles(titles, &index, &pipeline)));
    }
    let keep: Vec<bool> = identity_mask.iter().map(|&id| !id).collect();
    Ok(BaselineReport {
        lang: set.lang.clone(),
        seeds: seeds.to_vec(),
        knowledge_base_size: n,
        descriptors: kbs.into_iter().map(|kb| kb.descriptor).collect(),
        with_identity: correlation_matrix(&named, None)?,
        without_identity: correlation_matrix(&named, Some(&keep))?,
        mean_convention: MEAN_CONVENTION.to_string(),
    })
}

/// Welch test on Fisher-z values: same-language baseline r's against
/// cross-language r's.
pub fn compare_to_baseline(baseline: &CorrelationMatrix, multilingual: &CorrelationMatrix) -> Result<TTest> {
    stats::compare_correlations(&baseline.off_diagonal(), &multilingual.off_diagonal())
}
