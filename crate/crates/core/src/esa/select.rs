//! Choosing which articles form an ESA knowledge base.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::align::{ConceptId, ConceptTable};
use crate::config::ToolConfig;
use crate::error::{Error, Result};
use crate::ingest::wikitext::{strip_markup, LinkExtractor};
use crate::ingest::ArticleSet;
use crate::lang::LanguageCode;
use crate::oc::{index_sets, qualifying_concepts};

/// Minimum distinct outlinks for an article to enter a random selection.
pub const RANDOM_MIN_OUTLINKS: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SelectionDescriptor {
    /// Perfect-clarity global concepts over `languages`.
    Intersection {
        languages: Vec<LanguageCode>,
        min_outlinks: usize,
        min_inlinks: usize,
    },
    /// Uniform sample of `n` out of `qualifying` articles.
    Random { n: usize, seed: u64, qualifying: usize },
    /// Hand-assembled knowledge base.
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KbMember {
    pub article_id: u64,
    pub title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concept: Option<ConceptId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnowledgeBase {
    pub lang: LanguageCode,
    pub descriptor: SelectionDescriptor,
    pub members: Vec<KbMember>,
}

impl KnowledgeBase {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Plain-text bodies of the members, in member order.
    pub fn texts(&self, set: &ArticleSet, config: &ToolConfig) -> Result<Vec<String>> {
        if set.lang != self.lang {
            return Err(Error::invalid(format!(
                "knowledge base is {} but article set is {}",
                self.lang, set.lang
            )));
        }
        let extractor = LinkExtractor::new(&self.lang, config);
        self.members
            .iter()
            .map(|m| {
                set.get(m.article_id)
                    .map(|a| strip_markup(&a.text, &extractor))
                    .ok_or_else(|| Error::invalid(format!("article {} missing from {}", m.article_id, self.lang)))
            })
            .collect()
    }
}

/// One knowledge base per language over the same concepts, each ordered by
/// concept id.
pub fn select_intersection_concepts(
    table: &ConceptTable,
    sets: &[ArticleSet],
    langs: &[LanguageCode],
) -> Result<Vec<KnowledgeBase>> {
    let (min_out, min_in) = (3, 3);
    let by_lang = index_sets(sets, langs)?;
    let (concepts, _) = qualifying_concepts(table, sets, langs, min_out, min_in)?;
    let languages: Vec<LanguageCode> = by_lang.keys().map(|l| (*l).clone()).collect();
    Ok(by_lang
        .keys()
        .map(|lang| {
            let members = concepts
                .iter()
                .map(|cid| {
                    let m = table
                        .get(*cid)
                        .and_then(|c| c.representative(lang))
                        .expect("qualifying member");
                    KbMember {
                        article_id: m.id,
                        title: m.title.clone(),
                        concept: Some(*cid),
                    }
                })
                .collect();
            KnowledgeBase {
                lang: (*lang).clone(),
                descriptor: SelectionDescriptor::Intersection {
                    languages: languages.clone(),
                    min_outlinks: min_out,
                    min_inlinks: min_in,
                },
                members,
            }
        })
        .collect())
}

/// Uniform sample without replacement of `n` regular articles with at least
/// [`RANDOM_MIN_OUTLINKS`] distinct outlinks, ordered by article id.
pub fn select_random_concepts(set: &ArticleSet, n: usize, seed: u64) -> Result<KnowledgeBase> {
    let pool: Vec<_> = set
        .iter()
        .filter(|a| !a.kind.is_redirect() && !a.kind.is_disambiguation())
        .filter(|a| a.distinct_outlinks() >= RANDOM_MIN_OUTLINKS)
        .collect();
    if n == 0 {
        return Err(Error::invalid("knowledge base size must be positive"));
    }
    if pool.len() < n {
        return Err(Error::Insufficient {
            what: format!("{} articles with >= {RANDOM_MIN_OUTLINKS} outlinks", set.lang),
            needed: n,
            available: pool.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks = index::sample(&mut rng, pool.len(), n).into_vec();
    picks.sort_unstable();
    Ok(KnowledgeBase {
        lang: set.lang.clone(),
        descriptor: SelectionDescriptor::Random {
            n,
            seed,
            qualifying: pool.len(),
        },
        members: picks
            .into_iter()
            .map(|i| KbMember {
                article_id: pool[i].id,
                title: pool[i].title().to_string(),
                concept: None,
            })
            .collect(),
    })
}
