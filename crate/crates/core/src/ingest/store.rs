//! Article database files: a header line followed by one fully parsed
//! [`Article`] per line (JSON), so resolved links survive between stages.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Article, ArticleSet, IngestStats, ResolveStats};
use crate::error::{Error, Result};
use crate::lang::LanguageCode;

pub const ARTDB_FORMAT: &str = "wikidiv-artdb";
pub const ARTDB_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArtdbHeader {
    pub format: String,
    pub version: u32,
    pub lang: LanguageCode,
    pub articles: usize,
    pub resolved: bool,
    #[serde(default)]
    pub ingest: Option<IngestStats>,
    #[serde(default)]
    pub resolve: Option<ResolveStats>,
}

pub fn write_artdb<W: Write>(
    set: &ArticleSet,
    ingest: Option<&IngestStats>,
    resolve: Option<&ResolveStats>,
    out: W,
) -> Result<()> {
    let mut out = BufWriter::new(out);
    let header = ArtdbHeader {
        format: ARTDB_FORMAT.into(),
        version: ARTDB_VERSION,
        lang: set.lang.clone(),
        articles: set.len(),
        resolved: set.is_resolved(),
        ingest: ingest.cloned(),
        resolve: resolve.cloned(),
    };
    serde_json::to_writer(&mut out, &header)?;
    out.write_all(b"\n")?;
    for a in set.iter() {
        serde_json::to_writer(&mut out, a)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_artdb<R: Read>(input: R) -> Result<(ArticleSet, ArtdbHeader)> {
    let mut reader = BufReader::new(input);
    let mut line = String::new();
    let mut offset = 0u64;
    let n = reader.read_line(&mut line)?;
    if n == 0 {
        return Err(Error::Format("empty article database".into()));
    }
    let header: ArtdbHeader = serde_json::from_str(&line).map_err(|e| Error::Malformed {
        offset: 0,
        message: e.to_string(),
    })?;
    if header.format != ARTDB_FORMAT || header.version != ARTDB_VERSION {
        return Err(Error::Format(format!(
            "expected {ARTDB_FORMAT} v{ARTDB_VERSION}, found {} v{}",
            header.format, header.version
        )));
    }
    offset += n as u64;
    let mut set = ArticleSet::new(header.lang.clone());
    loop {
        line.clear();
        let n = reader.read_line(&mut line)?;
        if n == 0 {
            break;
        }
        if !line.trim().is_empty() {
            let article: Article = serde_json::from_str(&line).map_err(|e| Error::Malformed {
                offset,
                message: e.to_string(),
            })?;
            set.insert(article)?;
        }
        offset += n as u64;
    }
    if set.len() != header.articles {
        return Err(Error::Malformed {
            offset,
            message: format!("header announces {} articles, found {}", header.articles, set.len()),
        });
    }
    if header.resolved {
        set.mark_resolved();
    }
    Ok((set, header))
}

pub fn save_artdb(
    path: &Path,
    set: &ArticleSet,
    ingest: Option<&IngestStats>,
    resolve: Option<&ResolveStats>,
) -> Result<()> {
    write_artdb(set, ingest, resolve, File::create(path)?)
}

pub fn load_artdb(path: &Path) -> Result<ArticleSet> {
    Ok(read_artdb(File::open(path)?)?.0)
}
