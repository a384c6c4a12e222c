//! Canonical line-delimited JSON: one page object per line.
//!
//! ```json
//! {"id":1,"lang":"en","title":"Alpha","kind":"regular","text":"…"}
//! {"id":2,"lang":"en","title":"A","kind":"redirect","redirect_target":"Alpha","text":"#REDIRECT [[Alpha]]"}
//! ```

use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use super::{ArticleKind, ArticleSet, RawPage, RecordKind, SetBuilder};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanonicalRecord {
    pub id: u64,
    pub lang: String,
    pub title: String,
    pub kind: RecordKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub redirect_target: Option<String>,
    pub text: String,
}

pub(super) fn read_records<R: Read>(stream: R, builder: &mut SetBuilder<'_>) -> Result<()> {
    let mut reader = BufReader::with_capacity(64 * 1024, stream);
    let mut line = Vec::new();
    let mut offset = 0u64;
    loop {
        line.clear();
        let n = reader.read_until(b'\n', &mut line)?;
        if n == 0 {
            break;
        }
        let start = offset;
        offset += n as u64;
        if line.iter().all(|b| b.is_ascii_whitespace()) {
            continue;
        }
        let record: CanonicalRecord = serde_json::from_slice(&line).map_err(|e| {
            // serde_json columns are 1-based byte columns within the line
            Error::Malformed {
                offset: start + e.column().saturating_sub(1) as u64,
                message: e.to_string(),
            }
        })?;
        if record.lang != builder.lang().as_str() {
            return Err(Error::Malformed {
                offset: start,
                message: format!("record language {:?} does not match {}", record.lang, builder.lang()),
            });
        }
        let page = RawPage {
            id: Some(record.id),
            title: record.title,
            namespace: Some(0),
            redirect_target: record.redirect_target,
            kind: Some(record.kind),
            text: record.text,
        };
        builder.push(page, start)?;
    }
    builder.set_bytes_read(offset);
    Ok(())
}

impl CanonicalRecord {
    pub fn from_article(article: &super::Article) -> Self {
        let (kind, redirect_target) = match &article.kind {
            ArticleKind::Regular => (RecordKind::Regular, None),
            ArticleKind::Redirect(t) => (RecordKind::Redirect, Some(t.title.clone())),
            ArticleKind::Disambiguation => (RecordKind::Disambiguation, None),
        };
        CanonicalRecord {
            id: article.id,
            lang: article.lang().to_string(),
            title: article.title().to_string(),
            kind,
            redirect_target,
            text: article.text.clone(),
        }
    }
}

/// Writes `set` in the canonical line-delimited format, ascending by id.
pub fn write_canonical<W: Write>(set: &ArticleSet, mut out: W) -> Result<()> {
    for article in set.iter() {
        serde_json::to_writer(&mut out, &CanonicalRecord::from_article(article))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
