//! Run configuration: language set, disambiguation and redirect patterns,
//! time-title rules and ESA text settings.
//!
//! Configuration files are TOML. Every key is optional; anything omitted falls
//! back to the built-in defaults, and per-language tables override the
//! default entry for that language only.
//!
//! ```toml
//! languages = ["en", "de", "fr"]
//! redirect_chain_limit = 4
//! namespace_prefixes = ["Category", "File"]
//!
//! [redirect_keywords]
//! de = ["#WEITERLEITUNG", "#REDIRECT"]
//!
//! [disambiguation.en]
//! title_suffixes = [" (disambiguation)"]
//! templates = ["disambiguation", "disambig", "dab"]
//!
//! [time_rules.en]
//! years = ['^\d{1,4}( BC)?$']
//! dates = ['^(January|February) \d{1,2}$']
//! months = ['^(January|February)$']
//!
//! [esa]
//! prune_below = 0.0
//! normalize_concepts = true
//! [esa.stop_words]
//! en = ["the", "of"]
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::time::{TimePatterns, TimeTitleRules};
use crate::lang::LanguageCode;

/// The 25 editions the toolkit ships defaults for.
pub const DEFAULT_LANGUAGES: [&str; 25] = [
    "ca", "zh", "cs", "da", "nl", "en", "fi", "fr", "de", "he", "hu", "id", "it", "ja", "ko", "no", "pl", "pt", "ro",
    "ru", "sk", "es", "sv", "tr", "uk",
];

const DEFAULT_NAMESPACES: &[&str] = &[
    "Media",
    "Special",
    "Talk",
    "User",
    "Wikipedia",
    "WP",
    "Project",
    "File",
    "Image",
    "MediaWiki",
    "Template",
    "Help",
    "Category",
    "Portal",
    "Module",
    "Draft",
    "Book",
    "Kategorie",
    "Datei",
    "Bild",
    "Vorlage",
    "Hilfe",
    "Catégorie",
    "Fichier",
    "Modèle",
    "Aide",
    "Categoría",
    "Archivo",
    "Plantilla",
    "Ayuda",
    "Categoria",
    "Ficheiro",
    "Predefinição",
    "Immagine",
    "Categorie",
    "Bestand",
    "Sjabloon",
    "Kategoria",
    "Plik",
    "Szablon",
    "Категория",
    "Файл",
    "Шаблон",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct DisambiguationPatterns {
    #[serde(default)]
    pub title_suffixes: Vec<String>,
    /// Template names, matched case-insensitively as `{{name}}` or `{{name|…}}`.
    #[serde(default)]
    pub templates: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EsaConfig {
    /// Postings with weight strictly below this value are dropped.
    #[serde(default)]
    pub prune_below: f64,
    /// Divide each concept's contribution by its norm when interpreting
    /// text; `false` uses the raw tf-idf weights.
    #[serde(default = "yes")]
    pub normalize_concepts: bool,
    #[serde(default)]
    pub stop_words: BTreeMap<LanguageCode, BTreeSet<String>>,
}

impl Default for EsaConfig {
    fn default() -> Self {
        EsaConfig {
            prune_below: 0.0,
            normalize_concepts: true,
            stop_words: BTreeMap::new(),
        }
    }
}

/// Effective configuration for one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToolConfig {
    pub languages: BTreeSet<LanguageCode>,
    pub redirect_chain_limit: usize,
    pub namespace_prefixes: Vec<String>,
    pub redirect_keywords: BTreeMap<LanguageCode, Vec<String>>,
    pub disambiguation: BTreeMap<LanguageCode, DisambiguationPatterns>,
    pub time_rules: BTreeMap<LanguageCode, TimePatterns>,
    pub esa: EsaConfig,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    languages: Option<Vec<LanguageCode>>,
    redirect_chain_limit: Option<usize>,
    namespace_prefixes: Option<Vec<String>>,
    #[serde(default)]
    redirect_keywords: BTreeMap<LanguageCode, Vec<String>>,
    #[serde(default)]
    disambiguation: BTreeMap<LanguageCode, DisambiguationPatterns>,
    #[serde(default)]
    time_rules: BTreeMap<LanguageCode, TimePatterns>,
    esa: Option<EsaConfig>,
}

fn yes() -> bool {
    true
}

fn code(s: &str) -> LanguageCode {
    LanguageCode::new(s).expect("built-in language code")
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

impl Default for ToolConfig {
    fn default() -> Self {
        let languages: BTreeSet<_> = DEFAULT_LANGUAGES.iter().map(|c| code(c)).collect();

        let mut redirect_keywords = BTreeMap::new();
        for (lang, local) in [
            ("de", "#WEITERLEITUNG"),
            ("fr", "#REDIRECTION"),
            ("es", "#REDIRECCIÓN"),
            ("it", "#RINVIA"),
            ("nl", "#DOORVERWIJZING"),
            ("ca", "#REDIRECCIÓ"),
            ("pt", "#REDIRECIONAMENTO"),
            ("ru", "#ПЕРЕНАПРАВЛЕНИЕ"),
            ("sv", "#OMDIRIGERING"),
        ] {
            redirect_keywords.insert(code(lang), strings(&[local, "#REDIRECT"]));
        }

        let mut disambiguation = BTreeMap::new();
        for (lang, suffix, templates) in [
            ("en", " (disambiguation)", &["disambiguation", "disambig", "dab"][..]),
            ("de", " (Begriffsklärung)", &["Begriffsklärung"][..]),
            (
                "fr",
                " (homonymie)",
                &["homonymie", "bandeau standard pour page d'homonymie"][..],
            ),
            ("es", " (desambiguación)", &["desambiguación", "desambig"][..]),
            ("it", " (disambigua)", &["disambigua"][..]),
            ("nl", " (doorverwijspagina)", &["dp", "dpintro"][..]),
            ("ca", " (desambiguació)", &["desambiguació"][..]),
            ("pt", " (desambiguação)", &["desambiguação", "desambig"][..]),
        ] {
            disambiguation.insert(
                code(lang),
                DisambiguationPatterns {
                    title_suffixes: vec![suffix.to_string()],
                    templates: strings(templates),
                },
            );
        }

        ToolConfig {
            languages,
            redirect_chain_limit: 4,
            namespace_prefixes: strings(DEFAULT_NAMESPACES),
            redirect_keywords,
            disambiguation,
            time_rules: TimeTitleRules::default_patterns(),
            esa: EsaConfig::default(),
        }
    }
}

impl ToolConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut cfg = ToolConfig::default();
        if let Some(langs) = file.languages {
            if langs.is_empty() {
                return Err(Error::Config("`languages` must not be empty".into()));
            }
            cfg.languages = langs.into_iter().collect();
        }
        if let Some(limit) = file.redirect_chain_limit {
            cfg.redirect_chain_limit = limit;
        }
        if let Some(ns) = file.namespace_prefixes {
            cfg.namespace_prefixes = ns;
        }
        cfg.redirect_keywords.extend(file.redirect_keywords);
        cfg.disambiguation.extend(file.disambiguation);
        cfg.time_rules.extend(file.time_rules);
        if let Some(esa) = file.esa {
            cfg.esa = esa;
        }
        // Fail early on bad regexes.
        TimeTitleRules::compile(&cfg.time_rules)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    /// Restricts the configured language set.
    pub fn with_languages<I, S>(mut self, langs: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.languages = langs
            .into_iter()
            .map(|s| LanguageCode::new(s.as_ref()))
            .collect::<Result<_>>()?;
        Ok(self)
    }

    pub fn ensure_language(&self, lang: &LanguageCode) -> Result<()> {
        if self.languages.contains(lang) {
            Ok(())
        } else {
            Err(Error::UnconfiguredLanguage(lang.to_string()))
        }
    }

    pub fn redirect_keywords_for(&self, lang: &LanguageCode) -> Vec<String> {
        self.redirect_keywords
            .get(lang)
            .cloned()
            .unwrap_or_else(|| vec!["#REDIRECT".to_string()])
    }

    pub fn disambiguation_for(&self, lang: &LanguageCode) -> DisambiguationPatterns {
        self.disambiguation
            .get(lang)
            .cloned()
            .unwrap_or_else(|| DisambiguationPatterns {
                title_suffixes: vec![" (disambiguation)".to_string()],
                templates: strings(&["disambiguation", "disambig", "dab"]),
            })
    }

    pub fn time_title_rules(&self) -> Result<TimeTitleRules> {
        TimeTitleRules::compile(&self.time_rules)
    }

    /// Canonical serialized form, used for manifest hashing.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_cover_all_languages_with_time_rules() {
        let cfg = ToolConfig::default();
        assert_eq!(cfg.languages.len(), 25);
        let rules = cfg.time_title_rules().unwrap();
        for lang in &cfg.languages {
            assert!(rules.has_language(lang), "no time rules for {lang}");
        }
    }

    #[test]
    fn toml_overrides_merge_onto_defaults() {
        let cfg = ToolConfig::from_toml_str(
            r#"
            languages = ["en", "ca"]
            redirect_chain_limit = 2
            [disambiguation.en]
            title_suffixes = [" (dab)"]
            templates = ["dabpage"]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.languages.len(), 2);
        assert_eq!(cfg.redirect_chain_limit, 2);
        assert_eq!(cfg.disambiguation_for(&code("en")).templates, vec!["dabpage"]);
        assert_eq!(cfg.disambiguation_for(&code("de")).templates, vec!["Begriffsklärung"]);
        assert!(cfg.esa.normalize_concepts);

        let raw = ToolConfig::from_toml_str("[esa]\nnormalize_concepts = false\n").unwrap();
        assert!(!raw.esa.normalize_concepts);
        assert_eq!(raw.esa.prune_below, 0.0);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_regex() {
        assert!(ToolConfig::from_toml_str("bogus = 1").is_err());
        assert!(ToolConfig::from_toml_str("[time_rules.en]\nyears = ['(']").is_err());
        assert!(ToolConfig::from_toml_str("languages = []").is_err());
    }
}
