//! Language codes, article references and title normalization.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Short lowercase language-edition identifier such as `en` or `de`.
///
/// Accepts 2–3 ASCII lowercase letters, optionally followed by `-suffix`
/// groups (`zh-min-nan`, `be-x-old`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct LanguageCode(String);

impl LanguageCode {
    pub fn new(code: impl Into<String>) -> Result<Self> {
        let code = code.into();
        if Self::is_valid(&code) {
            Ok(LanguageCode(code))
        } else {
            Err(Error::InvalidLanguage(code))
        }
    }

    /// Whether `s` has the shape of an interwiki language prefix.
    pub fn is_valid(s: &str) -> bool {
        let mut parts = s.split('-');
        let head = parts.next().unwrap_or("");
        if !(2..=3).contains(&head.len()) || !head.bytes().all(|b| b.is_ascii_lowercase()) {
            return false;
        }
        parts.all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_lowercase()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for LanguageCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for LanguageCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LanguageCode::new(s)
    }
}

impl TryFrom<String> for LanguageCode {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        LanguageCode::new(s)
    }
}

impl From<LanguageCode> for String {
    fn from(code: LanguageCode) -> String {
        code.0
    }
}

impl AsRef<str> for LanguageCode {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Stable key for link resolution: a language plus a normalized title.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ArticleRef {
    pub lang: LanguageCode,
    pub title: String,
}

impl ArticleRef {
    /// Builds a reference, normalizing `title`.
    pub fn new(lang: LanguageCode, title: &str) -> Self {
        ArticleRef {
            lang,
            title: normalize_title(title),
        }
    }
}

impl fmt::Display for ArticleRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lang, self.title)
    }
}

/// MediaWiki-style title normalization.
///
/// Strips a `#section` anchor, maps underscores to spaces, collapses runs of
/// whitespace, trims, and uppercases the first character. Idempotent.
pub fn normalize_title(raw: &str) -> String {
    let without_anchor = match raw.find('#') {
        Some(i) => &raw[..i],
        None => raw,
    };
    let mut out = String::with_capacity(without_anchor.len());
    for word in without_anchor
        .split(|c: char| c == '_' || c.is_whitespace())
        .filter(|w| !w.is_empty())
    {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    let mut chars = out.chars();
    match chars.next() {
        Some(first) if !first.is_uppercase() => {
            let mut s: String = first.to_uppercase().collect();
            s.push_str(chars.as_str());
            s
        }
        _ => out,
    }
}

/// A title counts as a single word when it has no internal whitespace after
/// normalization. Whitespace-free CJK titles therefore qualify.
pub fn is_single_word(title: &str) -> bool {
    let t = normalize_title(title);
    !t.is_empty() && !t.contains(' ')
}
