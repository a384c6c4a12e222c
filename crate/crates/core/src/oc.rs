//! Sub-concept agreement: overlap coefficient between the outlink sets of
//! articles describing the same concept in different languages.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::align::{ConceptId, ConceptTable};
use crate::census::{global_concepts, CensusOptions};
use crate::error::{Error, Result};
use crate::ingest::time::TimeTitleRules;
use crate::ingest::{Article, ArticleSet};
use crate::lang::{ArticleRef, LanguageCode};
use crate::scalar::Scalar;
use crate::stats;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutlinkConceptSet {
    pub article: ArticleRef,
    pub concepts: BTreeSet<ConceptId>,
    /// Links to years, dates or months.
    pub dropped_time: usize,
    /// Links whose target has no article or no concept.
    pub dropped_unresolved: usize,
}

/// Maps an article's outlinks to the concepts of their targets.
pub fn outlinks_as_concepts(
    article: &Article,
    set: &ArticleSet,
    table: &ConceptTable,
    rules: &TimeTitleRules,
) -> Result<OutlinkConceptSet> {
    let mut out = OutlinkConceptSet {
        article: article.reference.clone(),
        concepts: BTreeSet::new(),
        dropped_time: 0,
        dropped_unresolved: 0,
    };
    for link in &article.outlinks {
        let target = set.by_title(&link.title).filter(|a| !a.kind.is_redirect());
        let Some(target) = target else {
            out.dropped_unresolved += 1;
            continue;
        };
        if rules.classify(&target.reference)? {
            out.dropped_time += 1;
            continue;
        }
        match table.concept_of(&set.lang, target.id) {
            Some(c) => {
                out.concepts.insert(c);
            }
            None => out.dropped_unresolved += 1,
        }
    }
    Ok(out)
}

/// |a ∩ b| / min(|a|, |b|), exact.
pub fn overlap_ratio<K: Ord>(a: &BTreeSet<K>, b: &BTreeSet<K>) -> Result<Ratio<usize>> {
    let smaller = a.len().min(b.len());
    if smaller == 0 {
        return Err(Error::invalid("overlap coefficient of an empty set"));
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let shared = small.iter().filter(|k| large.contains(k)).count();
    Ok(Ratio::new(shared, smaller))
}

pub fn overlap_coefficient<T: Scalar, K: Ord>(a: &BTreeSet<K>, b: &BTreeSet<K>) -> Result<T> {
    overlap_ratio(a, b).map(T::from_ratio)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OcConfig {
    /// Concepts to sample; `None` takes every eligible concept.
    pub sample: Option<usize>,
    pub seed: u64,
    pub min_outlinks: usize,
    pub min_inlinks: usize,
    /// Pairs where either side keeps fewer concepts after filtering are skipped.
    pub min_surviving: usize,
}

impl Default for OcConfig {
    fn default() -> Self {
        OcConfig {
            sample: None,
            seed: 0,
            min_outlinks: 3,
            min_inlinks: 3,
            min_surviving: 3,
        }
    }
}

/// Concepts remaining after each eligibility filter, in application order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterCounts {
    pub global: usize,
    pub perfect_clarity: usize,
    pub link_thresholds: usize,
}

/// Global, perfect-clarity concepts whose member in every language of
/// `langs` has at least `min_out` distinct outlinks and `min_in` distinct
/// inlinks. Ascending by id.
pub fn qualifying_concepts(
    table: &ConceptTable,
    sets: &[ArticleSet],
    langs: &[LanguageCode],
    min_out: usize,
    min_in: usize,
) -> Result<(Vec<ConceptId>, FilterCounts)> {
    let by_lang = index_sets(sets, langs)?;
    let inlinks: BTreeMap<&LanguageCode, BTreeMap<u64, usize>> =
        by_lang.iter().map(|(l, s)| (*l, s.inlink_counts())).collect();

    let global = global_concepts(table, langs, CensusOptions::default())?;
    let mut counts = FilterCounts {
        global: global.len(),
        ..Default::default()
    };
    if global.is_empty() {
        return Err(Error::EmptySelection("no concept is covered by every language".into()));
    }
    let clear: Vec<ConceptId> = global
        .into_iter()
        .filter(|id| table.get(*id).is_some_and(|c| c.has_perfect_clarity()))
        .collect();
    counts.perfect_clarity = clear.len();
    if clear.is_empty() {
        return Err(Error::EmptySelection("no global concept has perfect clarity".into()));
    }
    let kept: Vec<ConceptId> = clear
        .into_iter()
        .filter(|id| {
            let c = table.get(*id).expect("listed concept");
            by_lang.iter().all(|(lang, set)| {
                let Some(m) = c.representative(lang) else { return false };
                let Some(a) = set.get(m.id) else { return false };
                a.distinct_outlinks() >= min_out && inlinks[lang].get(&m.id).copied().unwrap_or(0) >= min_in
            })
        })
        .collect();
    counts.link_thresholds = kept.len();
    if kept.is_empty() {
        return Err(Error::EmptySelection(format!(
            "no perfect-clarity global concept has >= {min_out} outlinks and >= {min_in} inlinks in every language"
        )));
    }
    Ok((kept, counts))
}

pub(crate) fn index_sets<'a>(
    sets: &'a [ArticleSet],
    langs: &'a [LanguageCode],
) -> Result<BTreeMap<&'a LanguageCode, &'a ArticleSet>> {
    if langs.is_empty() {
        return Err(Error::invalid("language set is empty"));
    }
    let mut out = BTreeMap::new();
    for lang in langs {
        let set = sets
            .iter()
            .find(|s| &s.lang == lang)
            .ok_or_else(|| Error::invalid(format!("no article set loaded for language {lang}")))?;
        if !set.is_resolved() {
            return Err(Error::invalid(format!("article set {lang} has unresolved links")));
        }
        out.insert(lang, set);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OcSample {
    pub concept: ConceptId,
    pub l1: LanguageCode,
    pub l2: LanguageCode,
    pub oc: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairHistogram {
    pub l1: LanguageCode,
    pub l2: LanguageCode,
    pub count: usize,
    pub mean: Option<f64>,
    /// Ten equal-width bins over [0, 1]; 1.0 falls in the last bin.
    pub bins: [usize; 10],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OcStudyReport {
    pub languages: Vec<LanguageCode>,
    pub config: OcConfig,
    pub filters: FilterCounts,
    pub concepts_sampled: usize,
    pub sample_size: usize,
    pub skipped_pairs: usize,
    pub dropped_time_links: usize,
    pub dropped_unresolved_links: usize,
    pub mean: Option<f64>,
    /// Sample standard deviation.
    pub sd: Option<f64>,
    pub histograms: Vec<PairHistogram>,
    pub samples: Vec<OcSample>,
}

struct ConceptResult {
    samples: Vec<OcSample>,
    skipped: usize,
    dropped_time: usize,
    dropped_unresolved: usize,
}

pub fn oc_study(
    table: &ConceptTable,
    sets: &[ArticleSet],
    langs: &[LanguageCode],
    rules: &TimeTitleRules,
    config: &OcConfig,
) -> Result<OcStudyReport> {
    let langs: Vec<LanguageCode> = langs.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if langs.len() < 2 {
        return Err(Error::invalid("overlap study needs at least two languages"));
    }
    let by_lang = index_sets(sets, &langs)?;
    let (eligible, filters) = qualifying_concepts(table, sets, &langs, config.min_outlinks, config.min_inlinks)?;

    let chosen: Vec<ConceptId> = match config.sample {
        Some(n) if n < eligible.len() => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let mut picks = index::sample(&mut rng, eligible.len(), n).into_vec();
            picks.sort_unstable();
            picks.into_iter().map(|i| eligible[i]).collect()
        }
        _ => eligible,
    };

    let results: Vec<Result<ConceptResult>> = chosen
        .par_iter()
        .map(|&cid| {
            let concept = table.get(cid).expect("eligible concept exists");
            let mut per_lang = Vec::with_capacity(langs.len());
            let mut res = ConceptResult {
                samples: Vec::new(),
                skipped: 0,
                dropped_time: 0,
                dropped_unresolved: 0,
            };
            for lang in &langs {
                let set = by_lang[lang];
                let member = concept.representative(lang).expect("global concept");
                let article = set.get(member.id).expect("member article exists");
                let s = outlinks_as_concepts(article, set, table, rules)?;
                res.dropped_time += s.dropped_time;
                res.dropped_unresolved += s.dropped_unresolved;
                per_lang.push(s.concepts);
            }
            for i in 0..langs.len() {
                for j in i + 1..langs.len() {
                    let (a, b) = (&per_lang[i], &per_lang[j]);
                    if a.len() < config.min_surviving || b.len() < config.min_surviving {
                        res.skipped += 1;
                        continue;
                    }
                    res.samples.push(OcSample {
                        concept: cid,
                        l1: langs[i].clone(),
                        l2: langs[j].clone(),
                        oc: overlap_coefficient(a, b)?,
                    });
                }
            }
            Ok(res)
        })
        .collect();

    let mut samples = Vec::new();
    let (mut skipped, mut dropped_time, mut dropped_unresolved) = (0, 0, 0);
    for r in results {
        let r = r?;
        samples.extend(r.samples);
        skipped += r.skipped;
        dropped_time += r.dropped_time;
        dropped_unresolved += r.dropped_unresolved;
    }

    let values: Vec<f64> = samples.iter().map(|s| s.oc).collect();
    let mut histograms = Vec::new();
    for i in 0..langs.len() {
        for j in i + 1..langs.len() {
            let vals: Vec<f64> = samples
                .iter()
                .filter(|s| s.l1 == langs[i] && s.l2 == langs[j])
                .map(|s| s.oc)
                .collect();
            let mut bins = [0usize; 10];
            for v in &vals {
                bins[((v * 10.0) as usize).min(9)] += 1;
            }
            histograms.push(PairHistogram {
                l1: langs[i].clone(),
                l2: langs[j].clone(),
                count: vals.len(),
                mean: stats::mean(&vals),
                bins,
            });
        }
    }

    Ok(OcStudyReport {
        languages: langs,
        config: config.clone(),
        filters,
        concepts_sampled: chosen.len(),
        sample_size: samples.len(),
        skipped_pairs: skipped,
        dropped_time_links: dropped_time,
        dropped_unresolved_links: dropped_unresolved,
        mean: stats::mean(&values),
        sd: stats::sample_sd(&values),
        histograms,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[u32]) -> BTreeSet<u32> {
        v.iter().copied().collect()
    }

    #[test]
    fn coefficient_examples() {
        let a = set(&[1, 2, 3, 4]);
        let b = set(&[3, 4, 5]);
        assert_eq!(overlap_ratio(&a, &b).unwrap(), Ratio::new(2, 3));
        assert_eq!(overlap_coefficient::<f64, _>(&a, &a).unwrap(), 1.0);
        assert_eq!(overlap_coefficient::<f64, _>(&a, &set(&[9])).unwrap(), 0.0);
        assert!(overlap_ratio(&a, &set(&[])).is_err());
    }

    proptest! {
        #[test]
        fn coefficient_properties(a in prop::collection::btree_set(0u8..40, 1..20),
                                  b in prop::collection::btree_set(0u8..40, 1..20)) {
            let ab = overlap_ratio(&a, &b).unwrap();
            prop_assert_eq!(ab, overlap_ratio(&b, &a).unwrap());
            prop_assert!(ab <= Ratio::from_integer(1));
            prop_assert_eq!(overlap_ratio(&a, &a).unwrap(), Ratio::from_integer(1));
            let union: BTreeSet<u8> = a.union(&b).copied().collect();
            prop_assert_eq!(overlap_ratio(&a, &union).unwrap(), Ratio::from_integer(1));
        }
    }
}
