//! Tokenization for ESA documents and queries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::config::ToolConfig;
use crate::lang::LanguageCode;

/// Pluggable stemming hook. None ships by default.
pub trait Stemmer: Send + Sync {
    fn stem(&self, token: &str) -> String;
}

impl<F> Stemmer for F
where
    F: Fn(&str) -> String + Send + Sync,
{
    fn stem(&self, token: &str) -> String {
        self(token)
    }
}

/// Lowercases, splits on non-alphanumeric characters, then applies the
/// optional stemmer and stop-word list.
#[derive(Clone, Default)]
pub struct TextPipeline {
    stemmer: Option<Arc<dyn Stemmer>>,
    stop_words: BTreeSet<String>,
}

impl fmt::Debug for TextPipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TextPipeline")
            .field("stemmer", &self.stemmer.is_some())
            .field("stop_words", &self.stop_words.len())
            .finish()
    }
}

impl TextPipeline {
    pub fn new() -> Self {
        Self::default()
    }

    /// Pipeline with the stop words configured for `lang`.
    pub fn for_language(lang: &LanguageCode, config: &ToolConfig) -> Self {
        let words = config.esa.stop_words.get(lang).cloned().unwrap_or_default();
        Self::new().with_stop_words(words)
    }

    pub fn with_stop_words<I, S>(mut self, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.stop_words = words.into_iter().map(|w| w.as_ref().to_lowercase()).collect();
        self
    }

    pub fn with_stemmer(mut self, stemmer: impl Stemmer + 'static) -> Self {
        self.stemmer = Some(Arc::new(stemmer));
        self
    }

    pub fn tokenize(&self, text: &str) -> Vec<String> {
        text.split(|c: char| !c.is_alphanumeric())
            .filter(|t| !t.is_empty())
            .map(str::to_lowercase)
            .filter(|t| !self.stop_words.contains(t))
            .map(|t| match &self.stemmer {
                Some(s) => s.stem(&t),
                None => t,
            })
            .filter(|t| !t.is_empty())
            .collect()
    }

    pub fn term_counts(&self, text: &str) -> BTreeMap<String, u32> {
        let mut counts = BTreeMap::new();
        for t in self.tokenize(text) {
            *counts.entry(t).or_insert(0) += 1;
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn segments_and_lowercases() {
        let p = TextPipeline::new();
        assert_eq!(
            p.tokenize("The Cat's  hat, 1945!"),
            vec!["the", "cat", "s", "hat", "1945"]
        );
        assert_eq!(p.tokenize("Zürich und Köln"), vec!["zürich", "und", "köln"]);
        assert!(p.tokenize("  ,;  ").is_empty());
    }

    #[test]
    fn stop_words_and_stemmer() {
        let p = TextPipeline::new()
            .with_stop_words(["The"])
            .with_stemmer(|t: &str| t.trim_end_matches('s').to_string());
        assert_eq!(p.tokenize("the cats and dogs"), vec!["cat", "and", "dog"]);
        let counts = p.term_counts("cats cat dog");
        assert_eq!(counts["cat"], 2);
    }

    proptest! {
        #[test]
        fn concatenation_at_whitespace(a in "[a-zA-Z0-9 .,]{0,40}", b in "[a-zA-Z0-9 .,]{0,40}") {
            let p = TextPipeline::new();
            let mut expected = p.tokenize(&a);
            expected.extend(p.tokenize(&b));
            prop_assert_eq!(p.tokenize(&format!("{a} {b}")), expected);
        }
    }
}
