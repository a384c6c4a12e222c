//! Link extraction from raw wikitext.
//!
//! Only literal `[[…]]` occurrences are considered; templates are never
//! expanded, so interlanguage links produced by templates are invisible.

use std::collections::{BTreeSet, HashSet};

use crate::config::ToolConfig;
use crate::lang::{normalize_title, ArticleRef, LanguageCode};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtractedLinks {
    pub outlinks: Vec<ArticleRef>,
    pub ills: Vec<ArticleRef>,
    pub redirect: Option<ArticleRef>,
    pub disambiguation: bool,
    /// Links dropped because of unbalanced or malformed brackets.
    pub warnings: usize,
}

/// Per-language extraction settings derived from a [`ToolConfig`].
#[derive(Clone, Debug)]
pub struct LinkExtractor {
    lang: LanguageCode,
    languages: HashSet<String>,
    namespaces: HashSet<String>,
    redirect_keywords: Vec<String>,
    disambiguation_suffixes: Vec<String>,
    disambiguation_templates: HashSet<String>,
}

impl LinkExtractor {
    pub fn new(lang: &LanguageCode, config: &ToolConfig) -> Self {
        let disamb = config.disambiguation_for(lang);
        LinkExtractor {
            lang: lang.clone(),
            languages: config.languages.iter().map(|l| l.to_string()).collect(),
            namespaces: config.namespace_prefixes.iter().map(|n| n.to_lowercase()).collect(),
            redirect_keywords: config
                .redirect_keywords_for(lang)
                .iter()
                .map(|k| k.to_uppercase())
                .collect(),
            disambiguation_suffixes: disamb.title_suffixes,
            disambiguation_templates: disamb.templates.iter().map(|t| template_key(t)).collect(),
        }
    }

    pub fn lang(&self) -> &LanguageCode {
        &self.lang
    }

    pub fn is_disambiguation_title(&self, title: &str) -> bool {
        self.disambiguation_suffixes
            .iter()
            .any(|s| !s.is_empty() && title.ends_with(s.as_str()))
    }

    pub fn extract(&self, wikitext: &str) -> ExtractedLinks {
        let mut out = ExtractedLinks::default();
        let redirect_span = self.redirect_directive(wikitext);
        if let Some((_, target)) = &redirect_span {
            let t = normalize_title(target);
            if !t.is_empty() {
                out.redirect = Some(ArticleRef {
                    lang: self.lang.clone(),
                    title: t,
                });
            }
        }
        let skip = redirect_span.map(|(start, _)| start);

        let (spans, warnings) = bracket_spans(wikitext);
        out.warnings = warnings;
        for (start, end) in spans {
            if Some(start) == skip {
                continue;
            }
            match self.classify_link(&wikitext[start..end]) {
                Link::Outlink(t) => out.outlinks.push(ArticleRef {
                    lang: self.lang.clone(),
                    title: t,
                }),
                Link::Ill(lang, t) => out.ills.push(ArticleRef { lang, title: t }),
                Link::Ignored => {}
                Link::Malformed => out.warnings += 1,
            }
        }
        out.disambiguation = self.has_disambiguation_template(wikitext);
        out
    }

    /// Returns the byte offset of the redirect link's content and its target.
    fn redirect_directive<'a>(&self, text: &'a str) -> Option<(usize, &'a str)> {
        let trimmed = text.trim_start();
        let keyword = self.redirect_keywords.iter().find(|k| {
            trimmed.len() >= k.len() && trimmed.is_char_boundary(k.len()) && trimmed[..k.len()].to_uppercase() == **k
        })?;
        let rest = &trimmed[keyword.len()..];
        let after_colon = rest.trim_start().strip_prefix(':').unwrap_or(rest);
        let body = after_colon.trim_start();
        let body = body.strip_prefix("[[")?;
        let close = body.find("]]")?;
        let inner = &body[..close];
        let target = inner.split('|').next().unwrap_or("");
        if target.contains('\n') {
            return None;
        }
        Some((text.len() - body.len(), target))
    }

    fn has_disambiguation_template(&self, text: &str) -> bool {
        if self.disambiguation_templates.is_empty() {
            return false;
        }
        let mut rest = text;
        while let Some(i) = rest.find("{{") {
            rest = &rest[i + 2..];
            let end = rest.find(['|', '}', '\n']).unwrap_or(rest.len());
            if self.disambiguation_templates.contains(&template_key(&rest[..end])) {
                return true;
            }
        }
        false
    }

    fn classify_link(&self, inner: &str) -> Link {
        let target = inner.split('|').next().unwrap_or("");
        if target
            .chars()
            .any(|c| matches!(c, '\n' | '{' | '}' | '[' | ']' | '<' | '>'))
        {
            return Link::Malformed;
        }
        let target = target.trim();
        let (escaped, target) = match target.strip_prefix(':') {
            Some(t) => (true, t.trim_start()),
            None => (false, target),
        };
        if let Some(colon) = target.find(':') {
            let prefix = target[..colon].trim();
            let rest = &target[colon + 1..];
            if self.namespaces.contains(&prefix.to_lowercase()) {
                return Link::Ignored;
            }
            if LanguageCode::is_valid(prefix) {
                if escaped || !self.languages.contains(prefix) || prefix == self.lang.as_str() {
                    return Link::Ignored;
                }
                let title = normalize_title(rest);
                if title.is_empty() {
                    return Link::Ignored;
                }
                let lang = LanguageCode::new(prefix).expect("validated prefix");
                return Link::Ill(lang, title);
            }
        }
        let title = normalize_title(target);
        if title.is_empty() {
            Link::Ignored
        } else {
            Link::Outlink(title)
        }
    }
}

enum Link {
    Outlink(String),
    Ill(LanguageCode, String),
    Ignored,
    Malformed,
}

fn template_key(name: &str) -> String {
    name.trim().replace('_', " ").to_lowercase()
}

/// Byte spans of the contents of every `[[…]]` pair, innermost first, plus
/// the number of unmatched brackets.
fn bracket_spans(text: &str) -> (Vec<(usize, usize)>, usize) {
    let bytes = text.as_bytes();
    let mut stack = Vec::new();
    let mut spans = Vec::new();
    let mut warnings = 0;
    let mut i = 0;
    while i + 1 < bytes.len() {
        match (bytes[i], bytes[i + 1]) {
            (b'[', b'[') => {
                stack.push(i + 2);
                i += 2;
            }
            (b']', b']') => {
                match stack.pop() {
                    Some(start) => spans.push((start, i)),
                    None => warnings += 1,
                }
                i += 2;
            }
            _ => i += 1,
        }
    }
    warnings += stack.len();
    spans.sort_unstable();
    (spans, warnings)
}

/// Extracts links with the default configuration restricted to `configured`.
pub fn extract_links(wikitext: &str, lang: &LanguageCode, configured: &BTreeSet<LanguageCode>) -> ExtractedLinks {
    let config = ToolConfig {
        languages: configured.clone(),
        ..Default::default()
    };
    LinkExtractor::new(lang, &config).extract(wikitext)
}

/// Reduces wikitext to readable prose for indexing: templates, interlanguage
/// and namespaced links are removed, piped links keep their anchor text.
pub fn strip_markup(wikitext: &str, extractor: &LinkExtractor) -> String {
    let mut out = String::with_capacity(wikitext.len());
    let mut depth = 0usize;
    let mut rest = wikitext;
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix("{{") {
            depth += 1;
            rest = r;
        } else if depth > 0 {
            if let Some(r) = rest.strip_prefix("}}") {
                depth -= 1;
                rest = r;
            } else {
                let ch = rest.chars().next().expect("nonempty");
                rest = &rest[ch.len_utf8()..];
            }
        } else if let Some(r) = rest.strip_prefix("[[") {
            match r.find("]]") {
                Some(end) if !r[..end].contains("[[") => {
                    let inner = &r[..end];
                    match extractor.classify_link(inner) {
                        Link::Outlink(_) => {
                            let shown = inner.rsplit('|').next().unwrap_or(inner);
                            out.push_str(shown);
                        }
                        Link::Ill(..) | Link::Ignored => {}
                        Link::Malformed => out.push_str(inner),
                    }
                    out.push(' ');
                    rest = &r[end + 2..];
                }
                _ => {
                    out.push_str("[[");
                    rest = r;
                }
            }
        } else {
            let ch = rest.chars().next().expect("nonempty");
            out.push(ch);
            rest = &rest[ch.len_utf8()..];
        }
    }
    out
}
