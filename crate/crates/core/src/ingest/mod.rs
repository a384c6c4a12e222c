//! Dump ingestion: streaming parsers for the XML export subset and the
//! canonical line-delimited JSON format, plus redirect resolution.

pub mod article;
pub mod resolve;
pub mod store;
pub mod time;
pub mod wikitext;

mod jsonl;
mod xml;

use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::ToolConfig;
use crate::error::{Error, Result};
use crate::lang::{normalize_title, ArticleRef, LanguageCode};

pub use article::{Article, ArticleKind, ArticleSet};
pub use jsonl::{write_canonical, CanonicalRecord};
pub use resolve::{resolve_interlanguage_links, resolve_links, ResolveStats};
pub use time::{classify_time_title, TimeKind, TimePatterns, TimeTitleRules};
pub use wikitext::{extract_links, ExtractedLinks, LinkExtractor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DumpFormat {
    Xml,
    Jsonl,
}

impl FromStr for DumpFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "xml" => Ok(DumpFormat::Xml),
            "jsonl" => Ok(DumpFormat::Jsonl),
            other => Err(Error::invalid(format!("unknown dump format {other:?}"))),
        }
    }
}

/// Counters collected while parsing one dump.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    pub pages_seen: usize,
    pub skipped_namespace: usize,
    pub regular: usize,
    pub redirects: usize,
    pub disambiguation: usize,
    pub link_warnings: usize,
    pub duplicate_titles: usize,
    pub bytes_read: u64,
}

/// Parses a dump stream into an [`ArticleSet`]. See [`parse_dump_with_stats`].
pub fn parse_dump<R: Read>(
    stream: R,
    lang: &LanguageCode,
    format: DumpFormat,
    config: &ToolConfig,
) -> Result<ArticleSet> {
    parse_dump_with_stats(stream, lang, format, config).map(|(set, _)| set)
}

/// Single-pass, page-at-a-time parse. Only namespace-0 pages are kept.
pub fn parse_dump_with_stats<R: Read>(
    stream: R,
    lang: &LanguageCode,
    format: DumpFormat,
    config: &ToolConfig,
) -> Result<(ArticleSet, IngestStats)> {
    config.ensure_language(lang)?;
    let extractor = LinkExtractor::new(lang, config);
    let mut builder = SetBuilder {
        set: ArticleSet::new(lang.clone()),
        stats: IngestStats::default(),
        extractor: &extractor,
    };
    match format {
        DumpFormat::Xml => xml::read_pages(stream, &mut builder)?,
        DumpFormat::Jsonl => jsonl::read_records(stream, &mut builder)?,
    }
    builder.stats.duplicate_titles = builder.set.duplicate_titles();
    Ok((builder.set, builder.stats))
}

/// What a raw page says about itself before link extraction.
#[derive(Debug, Default)]
pub(crate) struct RawPage {
    pub id: Option<u64>,
    pub title: String,
    pub namespace: Option<i64>,
    /// Explicit redirect target (XML `<redirect title>` or JSON `redirect_target`).
    pub redirect_target: Option<String>,
    /// Explicit kind from canonical JSON; XML pages leave this unset.
    pub kind: Option<RecordKind>,
    pub text: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordKind {
    Regular,
    Redirect,
    Disambiguation,
}

pub(crate) struct SetBuilder<'a> {
    set: ArticleSet,
    stats: IngestStats,
    extractor: &'a LinkExtractor,
}

impl SetBuilder<'_> {
    pub(crate) fn lang(&self) -> &LanguageCode {
        &self.set.lang
    }

    pub(crate) fn set_bytes_read(&mut self, n: u64) {
        self.stats.bytes_read = n;
    }

    pub(crate) fn push(&mut self, page: RawPage, offset: u64) -> Result<()> {
        self.stats.pages_seen += 1;
        if page.namespace.unwrap_or(0) != 0 {
            self.stats.skipped_namespace += 1;
            return Ok(());
        }
        let title = normalize_title(&page.title);
        if title.is_empty() {
            return Err(Error::Malformed {
                offset,
                message: "page without a title".into(),
            });
        }
        let id = page.id.unwrap_or(self.stats.pages_seen as u64);
        let links = self.extractor.extract(&page.text);
        self.stats.link_warnings += links.warnings;
        let lang = self.set.lang.clone();

        let explicit_redirect = page
            .redirect_target
            .as_deref()
            .map(normalize_title)
            .filter(|t| !t.is_empty())
            .map(|title| ArticleRef {
                lang: lang.clone(),
                title,
            });
        let kind = match page.kind {
            Some(RecordKind::Redirect) => match explicit_redirect.or(links.redirect) {
                Some(target) => ArticleKind::Redirect(target),
                None => {
                    return Err(Error::Malformed {
                        offset,
                        message: format!("redirect record {title:?} has no target"),
                    })
                }
            },
            Some(RecordKind::Disambiguation) => ArticleKind::Disambiguation,
            Some(RecordKind::Regular) => ArticleKind::Regular,
            None => match explicit_redirect.or(links.redirect) {
                Some(target) => ArticleKind::Redirect(target),
                None if links.disambiguation || self.extractor.is_disambiguation_title(&title) => {
                    ArticleKind::Disambiguation
                }
                None => ArticleKind::Regular,
            },
        };
        match kind {
            ArticleKind::Regular => self.stats.regular += 1,
            ArticleKind::Redirect(_) => self.stats.redirects += 1,
            ArticleKind::Disambiguation => self.stats.disambiguation += 1,
        }
        // Redirect pages contribute no outlinks; their interlanguage links
        // are handed to the redirect target during resolution.
        let outlinks = if kind.is_redirect() { Vec::new() } else { links.outlinks };
        let article = Article {
            id,
            reference: ArticleRef { lang, title },
            kind,
            outlinks,
            ills: links.ills,
            text: page.text,
        };
        self.set.insert(article).map_err(|e| match e {
            Error::DuplicateId { id, .. } => Error::Malformed {
                offset,
                message: format!("duplicate article id {id}"),
            },
            other => other,
        })
    }
}
