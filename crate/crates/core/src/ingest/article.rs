use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lang::{ArticleRef, LanguageCode};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "target", rename_all = "lowercase")]
pub enum ArticleKind {
    Regular,
    Redirect(ArticleRef),
    Disambiguation,
}

impl ArticleKind {
    pub fn is_redirect(&self) -> bool {
        matches!(self, ArticleKind::Redirect(_))
    }

    pub fn is_disambiguation(&self) -> bool {
        matches!(self, ArticleKind::Disambiguation)
    }

    pub fn label(&self) -> &'static str {
        match self {
            ArticleKind::Regular => "regular",
            ArticleKind::Redirect(_) => "redirect",
            ArticleKind::Disambiguation => "disambiguation",
        }
    }
}

/// One page of one language edition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Article {
    pub id: u64,
    #[serde(rename = "ref")]
    pub reference: ArticleRef,
    pub kind: ArticleKind,
    /// Same-language links, in document order, duplicates kept.
    pub outlinks: Vec<ArticleRef>,
    /// Interlanguage links, in document order.
    pub ills: Vec<ArticleRef>,
    pub text: String,
}

impl Article {
    pub fn lang(&self) -> &LanguageCode {
        &self.reference.lang
    }

    pub fn title(&self) -> &str {
        &self.reference.title
    }

    /// Number of distinct outlink targets.
    pub fn distinct_outlinks(&self) -> usize {
        let mut titles: Vec<&str> = self.outlinks.iter().map(|r| r.title.as_str()).collect();
        titles.sort_unstable();
        titles.dedup();
        titles.len()
    }
}

/// All ingested articles of one language edition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleSet {
    pub lang: LanguageCode,
    articles: BTreeMap<u64, Article>,
    /// normalized title → id, first occurrence wins
    titles: BTreeMap<String, u64>,
    duplicate_titles: usize,
    resolved: bool,
}

impl ArticleSet {
    pub fn new(lang: LanguageCode) -> Self {
        ArticleSet {
            lang,
            articles: BTreeMap::new(),
            titles: BTreeMap::new(),
            duplicate_titles: 0,
            resolved: false,
        }
    }

    pub fn insert(&mut self, article: Article) -> Result<()> {
        if article.lang() != &self.lang {
            return Err(Error::invalid(format!(
                "article {} does not belong to language {}",
                article.reference, self.lang
            )));
        }
        if self.articles.contains_key(&article.id) {
            return Err(Error::DuplicateId {
                lang: self.lang.to_string(),
                id: article.id,
            });
        }
        match self.titles.get(article.title()) {
            Some(_) => self.duplicate_titles += 1,
            None => {
                self.titles.insert(article.title().to_string(), article.id);
            }
        }
        self.articles.insert(article.id, article);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.articles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.articles.is_empty()
    }

    pub fn get(&self, id: u64) -> Option<&Article> {
        self.articles.get(&id)
    }

    pub(crate) fn get_mut(&mut self, id: u64) -> Option<&mut Article> {
        self.articles.get_mut(&id)
    }

    pub fn id_of(&self, title: &str) -> Option<u64> {
        self.titles.get(title).copied()
    }

    /// Lookup by (already normalized) title.
    pub fn by_title(&self, title: &str) -> Option<&Article> {
        self.id_of(title).and_then(|id| self.articles.get(&id))
    }

    /// Articles in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = &Article> + '_ {
        self.articles.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = u64> + '_ {
        self.articles.keys().copied()
    }

    pub fn duplicate_titles(&self) -> usize {
        self.duplicate_titles
    }

    pub fn is_resolved(&self) -> bool {
        self.resolved
    }

    pub(crate) fn mark_resolved(&mut self) {
        self.resolved = true;
    }

    /// Number of distinct same-language non-redirect articles linking to each
    /// article id. Self-links are ignored.
    pub fn inlink_counts(&self) -> BTreeMap<u64, usize> {
        let mut sources: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for a in self.iter().filter(|a| !a.kind.is_redirect()) {
            for link in &a.outlinks {
                if let Some(target) = self.id_of(&link.title) {
                    if target != a.id {
                        sources.entry(target).or_default().push(a.id);
                    }
                }
            }
        }
        sources
            .into_iter()
            .map(|(t, mut s)| {
                s.sort_unstable();
                s.dedup();
                (t, s.len())
            })
            .collect()
    }
}
