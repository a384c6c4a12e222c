//! Concept-level diversity: how many languages cover each concept, pairwise
//! coverage between editions, and the concepts every edition covers.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::align::{Concept, ConceptId, ConceptTable};
use crate::error::{Error, Result};
use crate::lang::LanguageCode;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusOptions {
    pub include_disambiguation: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageDistribution {
    /// `counts[n - 1]` = concepts covered by exactly `n` languages.
    pub counts: Vec<usize>,
    /// `cdf[n - 1]` = share of concepts covered by at most `n` languages.
    pub cdf: Vec<f64>,
    pub total: usize,
}

impl CoverageDistribution {
    pub fn single_language_fraction(&self) -> f64 {
        self.cdf.first().copied().unwrap_or(0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub languages: Vec<LanguageCode>,
    pub options: CensusOptions,
    pub distribution: CoverageDistribution,
    /// Concepts covered per language.
    pub concept_counts: Vec<usize>,
    /// `shared[r][c]` = concepts covered by both languages `r` and `c`.
    pub shared: Vec<Vec<usize>>,
    /// `coverage[r][c]` = share of `c`'s concepts also covered by `r`;
    /// `None` when `c` covers no concept.
    pub coverage: Vec<Vec<Option<f64>>>,
    pub global_concepts: Vec<ConceptId>,
}

fn check_langs(langs: &[LanguageCode]) -> Result<Vec<LanguageCode>> {
    if langs.is_empty() {
        return Err(Error::invalid("language set is empty"));
    }
    let set: BTreeSet<_> = langs.iter().cloned().collect();
    Ok(set.into_iter().collect())
}

fn coverage_count(c: &Concept, langs: &[LanguageCode], opts: CensusOptions) -> usize {
    langs
        .iter()
        .filter(|l| c.covered_by(l, opts.include_disambiguation))
        .count()
}

/// Counts concepts by the number of languages (within `langs`) covering them.
/// Concepts with no member in `langs` are excluded.
pub fn coverage_distribution(
    table: &ConceptTable,
    langs: &[LanguageCode],
    opts: CensusOptions,
) -> Result<CoverageDistribution> {
    let langs = check_langs(langs)?;
    let mut counts = vec![0usize; langs.len()];
    for c in table.iter() {
        let n = coverage_count(c, &langs, opts);
        if n > 0 {
            counts[n - 1] += 1;
        }
    }
    let total: usize = counts.iter().sum();
    let mut running = 0usize;
    let cdf = counts
        .iter()
        .map(|&k| {
            running += k;
            if total == 0 {
                0.0
            } else {
                running as f64 / total as f64
            }
        })
        .collect();
    Ok(CoverageDistribution { counts, cdf, total })
}

fn shared_count(table: &ConceptTable, a: &LanguageCode, b: &LanguageCode, opts: CensusOptions) -> usize {
    table
        .iter()
        .filter(|c| c.covered_by(a, opts.include_disambiguation) && c.covered_by(b, opts.include_disambiguation))
        .count()
}

/// Share of `col`'s concepts that `row` also covers.
pub fn pairwise_coverage<T: Scalar>(
    table: &ConceptTable,
    row: &LanguageCode,
    col: &LanguageCode,
    opts: CensusOptions,
) -> Result<T> {
    let col_total = shared_count(table, col, col, opts);
    if col_total == 0 {
        return Err(Error::invalid(format!("language {col} covers no concepts")));
    }
    let shared = shared_count(table, row, col, opts);
    Ok(T::from_usize_lossy(shared) / T::from_usize_lossy(col_total))
}

/// Concepts covered by every language of `langs`, ascending by id.
pub fn global_concepts(table: &ConceptTable, langs: &[LanguageCode], opts: CensusOptions) -> Result<Vec<ConceptId>> {
    let langs = check_langs(langs)?;
    Ok(table
        .iter()
        .filter(|c| coverage_count(c, &langs, opts) == langs.len())
        .map(|c| c.id)
        .collect())
}

/// Full census restricted to `langs`.
pub fn subset_census(table: &ConceptTable, langs: &[LanguageCode], opts: CensusOptions) -> Result<CensusReport> {
    let langs = check_langs(langs)?;
    let distribution = coverage_distribution(table, &langs, opts)?;
    let k = langs.len();
    let mut shared = vec![vec![0usize; k]; k];
    for c in table.iter() {
        let covered: Vec<bool> = langs
            .iter()
            .map(|l| c.covered_by(l, opts.include_disambiguation))
            .collect();
        for r in 0..k {
            if !covered[r] {
                continue;
            }
            for col in 0..k {
                if covered[col] {
                    shared[r][col] += 1;
                }
            }
        }
    }
    let concept_counts: Vec<usize> = (0..k).map(|i| shared[i][i]).collect();
    let coverage = (0..k)
        .map(|r| {
            (0..k)
                .map(|col| (concept_counts[col] > 0).then(|| shared[r][col] as f64 / concept_counts[col] as f64))
                .collect()
        })
        .collect();
    Ok(CensusReport {
        global_concepts: global_concepts(table, &langs, opts)?,
        languages: langs,
        options: opts,
        distribution,
        concept_counts,
        shared,
        coverage,
    })
}

impl CensusReport {
    /// Coverage matrix as CSV: rows are covering languages, columns covered.
    pub fn coverage_csv(&self) -> String {
        let mut out = String::from("covering\\covered");
        for l in &self.languages {
            out.push(',');
            out.push_str(l.as_str());
        }
        out.push('\n');
        for (r, l) in self.languages.iter().enumerate() {
            out.push_str(l.as_str());
            for cell in &self.coverage[r] {
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
