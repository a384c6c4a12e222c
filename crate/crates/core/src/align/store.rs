//! JSON persistence for [`ConceptTable`].

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{AlignStats, Concept, ConceptTable};
use crate::error::{Error, Result};

pub const CONCEPTS_FORMAT: &str = "wikidiv-concepts";
pub const CONCEPTS_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ConceptFile {
    format: String,
    version: u32,
    stats: AlignStats,
    concepts: Vec<Concept>,
}

pub fn write_concepts<W: Write>(table: &ConceptTable, out: W) -> Result<()> {
    let file = ConceptFile {
        format: CONCEPTS_FORMAT.into(),
        version: CONCEPTS_VERSION,
        stats: table.stats.clone(),
        concepts: table.iter().cloned().collect(),
    };
    let mut out = BufWriter::new(out);
    serde_json::to_writer(&mut out, &file)?;
    out.flush()?;
    Ok(())
}

pub fn read_concepts<R: Read>(input: R) -> Result<ConceptTable> {
    let file: ConceptFile = serde_json::from_reader(BufReader::new(input))?;
    if file.format != CONCEPTS_FORMAT || file.version != CONCEPTS_VERSION {
        return Err(Error::Format(format!(
            "expected {CONCEPTS_FORMAT} v{CONCEPTS_VERSION}, found {} v{}",
            file.format, file.version
        )));
    }
    ConceptTable::from_concepts(file.concepts, file.stats.graph)
}

pub fn save_concepts(path: &Path, table: &ConceptTable) -> Result<()> {
    write_concepts(table, File::create(path)?)
}

pub fn load_concepts(path: &Path) -> Result<ConceptTable> {
    read_concepts(File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::align::{concept_align, IllGraph, Node};
    use crate::lang::LanguageCode;

    #[test]
    fn round_trip() {
        let nodes: Vec<Node> = ["en", "de", "fr"]
            .iter()
            .enumerate()
            .map(|(i, l)| Node {
                lang: LanguageCode::new(*l).unwrap(),
                id: i as u64,
                title: format!("T{i}"),
                disambiguation: i == 2,
            })
            .collect();
        let table = concept_align(&IllGraph::from_parts(nodes, [(0, 1)]).unwrap());
        let mut buf = Vec::new();
        write_concepts(&table, &mut buf).unwrap();
        assert_eq!(read_concepts(&buf[..]).unwrap(), table);
    }
}
