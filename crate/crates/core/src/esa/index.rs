//! Inverted tf-idf index over a knowledge base and the relatedness measure.

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::select::{KbMember, KnowledgeBase, SelectionDescriptor};
use super::text::TextPipeline;
use crate::error::{Error, Result};
use crate::lang::LanguageCode;
use crate::scalar::Scalar;

const MAGIC: &[u8; 6] = b"WDVESA";
const VERSION: u16 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildOptions {
    /// Postings with weight below this are dropped.
    pub prune_below: f64,
    /// Divide each concept's contribution by its vector norm when
    /// interpreting text.
    pub normalize_concepts: bool,
    /// Fixed idf values for listed terms; others use ln(N / df).
    pub frozen_idf: Option<BTreeMap<String, f64>>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            prune_below: 0.0,
            normalize_concepts: true,
            frozen_idf: None,
        }
    }
}

/// Sparse concept-space vector, ascending by ordinal, zero entries omitted.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InterpretationVector<T> {
    pub entries: Vec<(u32, T)>,
}

impl<T: Scalar> InterpretationVector<T> {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, ordinal: u32) -> T {
        self.entries
            .binary_search_by_key(&ordinal, |e| e.0)
            .map(|i| self.entries[i].1)
            .unwrap_or_else(|_| T::zero())
    }

    pub fn norm(&self) -> T {
        self.entries.iter().map(|e| e.1 * e.1).sum::<T>().sqrt()
    }

    pub fn dot(&self, other: &Self) -> T {
        let (mut i, mut j) = (0, 0);
        let mut acc = T::zero();
        while i < self.entries.len() && j < other.entries.len() {
            let (a, b) = (self.entries[i], other.entries[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc = acc + a.1 * b.1;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    /// Highest-weighted ordinal; ties go to the lowest ordinal.
    pub fn argmax(&self) -> Option<u32> {
        let mut best: Option<(u32, T)> = None;
        for &(o, w) in &self.entries {
            if best.is_none_or(|(_, bw)| w > bw) {
                best = Some((o, w));
            }
        }
        best.map(|b| b.0)
    }

    /// Cosine similarity; 0 when either side is the zero vector.
    pub fn cosine(&self, other: &Self) -> T {
        if self.is_zero() || other.is_zero() {
            return T::zero();
        }
        if self == other {
            return T::one();
        }
        let c = self.dot(other) / (self.norm() * other.norm());
        c.max(T::zero()).min(T::one())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EsaIndex<T> {
    pub lang: LanguageCode,
    pub descriptor: SelectionDescriptor,
    pub members: Vec<KbMember>,
    pub options: IndexOptions,
    terms: Vec<String>,
    df: Vec<u32>,
    postings: Vec<Vec<(u32, T)>>,
    norms: Vec<T>,
    lookup: HashMap<String, u32>,
}

/// Build settings persisted with an index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexOptions {
    pub prune_below: f64,
    pub normalize_concepts: bool,
}

pub fn build_index<T: Scalar>(
    kb: &KnowledgeBase,
    texts: &[String],
    pipeline: &TextPipeline,
    options: &BuildOptions,
) -> Result<EsaIndex<T>> {
    if texts.len() != kb.members.len() {
        return Err(Error::invalid(format!(
            "{} texts for {} knowledge-base members",
            texts.len(),
            kb.members.len()
        )));
    }
    if u32::try_from(texts.len()).is_err() {
        return Err(Error::invalid("knowledge base too large"));
    }
    let counts: Vec<BTreeMap<String, u32>> = texts.par_iter().map(|t| pipeline.term_counts(t)).collect();

    let mut df: BTreeMap<&str, u32> = BTreeMap::new();
    for doc in &counts {
        for term in doc.keys() {
            *df.entry(term.as_str()).or_insert(0) += 1;
        }
    }
    let n = T::from_usize_lossy(texts.len());
    let prune = T::from_f64(options.prune_below).unwrap_or_else(T::zero);
    let mut idf: HashMap<&str, (u32, T)> = HashMap::new();
    for (term, &d) in &df {
        let value = match options.frozen_idf.as_ref().and_then(|m| m.get(*term)) {
            Some(&v) => T::from_f64(v).unwrap_or_else(T::zero),
            None => (n / T::from_usize_lossy(d as usize)).ln(),
        };
        if value > T::zero() {
            idf.insert(term, (d, value));
        }
    }

    let mut by_term: BTreeMap<&str, Vec<(u32, T)>> = BTreeMap::new();
    for (ordinal, doc) in counts.iter().enumerate() {
        for (term, &tf) in doc {
            if let Some(&(_, w)) = idf.get(term.as_str()) {
                let weight = T::from_u32(tf).expect("count fits") * w;
                if weight > T::zero() && weight >= prune {
                    by_term.entry(term.as_str()).or_default().push((ordinal as u32, weight));
                }
            }
        }
    }
    if by_term.is_empty() {
        return Err(Error::EmptyVocabulary);
    }

    let mut terms = Vec::with_capacity(by_term.len());
    let mut dfs = Vec::with_capacity(by_term.len());
    let mut postings = Vec::with_capacity(by_term.len());
    for (term, list) in by_term {
        dfs.push(idf[term].0);
        terms.push(term.to_string());
        postings.push(list);
    }
    let norms = compute_norms(texts.len(), &postings);
    let lookup = make_lookup(&terms);
    Ok(EsaIndex {
        lang: kb.lang.clone(),
        descriptor: kb.descriptor.clone(),
        members: kb.members.clone(),
        options: IndexOptions {
            prune_below: options.prune_below,
            normalize_concepts: options.normalize_concepts,
        },
        terms,
        df: dfs,
        postings,
        norms,
        lookup,
    })
}

fn compute_norms<T: Scalar>(n: usize, postings: &[Vec<(u32, T)>]) -> Vec<T> {
    let mut sq = vec![T::zero(); n];
    for list in postings {
        for &(o, w) in list {
            sq[o as usize] = sq[o as usize] + w * w;
        }
    }
    sq.into_iter().map(|s| s.sqrt()).collect()
}

fn make_lookup(terms: &[String]) -> HashMap<String, u32> {
    terms.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect()
}

impl<T: Scalar> EsaIndex<T> {
    /// Knowledge-base size N.
    pub fn concept_count(&self) -> usize {
        self.members.len()
    }

    pub fn vocabulary_size(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn document_frequency(&self, term: &str) -> Option<u32> {
        self.lookup.get(term).map(|&i| self.df[i as usize])
    }

    pub fn postings(&self, term: &str) -> Option<&[(u32, T)]> {
        self.lookup.get(term).map(|&i| self.postings[i as usize].as_slice())
    }

    pub fn weight(&self, term: &str, ordinal: u32) -> T {
        self.postings(term)
            .and_then(|p| p.binary_search_by_key(&ordinal, |e| e.0).ok().map(|i| p[i].1))
            .unwrap_or_else(T::zero)
    }

    pub fn norms(&self) -> &[T] {
        &self.norms
    }

    pub fn recompute_norms(&self) -> Vec<T> {
        compute_norms(self.members.len(), &self.postings)
    }

    /// Copy with every weight passed through `f`; norms recomputed.
    pub fn map_weights(&self, f: impl Fn(T) -> T) -> Self {
        let mut out = self.clone();
        for list in &mut out.postings {
            for e in list.iter_mut() {
                e.1 = f(e.1);
            }
        }
        out.norms = out.recompute_norms();
        out
    }

    pub fn interpret(&self, text: &str, pipeline: &TextPipeline) -> InterpretationVector<T> {
        let mut acc: BTreeMap<u32, T> = BTreeMap::new();
        for (term, count) in pipeline.term_counts(text) {
            let Some(list) = self.postings(&term) else { continue };
            let c = T::from_u32(count).expect("count fits");
            for &(o, w) in list {
                let e = acc.entry(o).or_insert_with(T::zero);
                *e = *e + c * w;
            }
        }
        let entries = acc
            .into_iter()
            .map(|(o, v)| {
                if self.options.normalize_concepts {
                    (o, v / self.norms[o as usize])
                } else {
                    (o, v)
                }
            })
            .filter(|e| e.1 > T::zero())
            .collect();
        InterpretationVector { entries }
    }

    pub fn relatedness(&self, t1: &str, t2: &str, pipeline: &TextPipeline) -> T {
        self.interpret(t1, pipeline).cosine(&self.interpret(t2, pipeline))
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_u16::<LittleEndian>(VERSION)?;
        w.write_u8(T::WIDTH)?;
        w.write_u8(self.options.normalize_concepts as u8)?;
        w.write_f64::<LittleEndian>(self.options.prune_below)?;
        write_str(w, self.lang.as_str())?;
        write_str(w, &serde_json::to_string(&self.descriptor)?)?;
        w.write_u64::<LittleEndian>(self.members.len() as u64)?;
        w.write_u64::<LittleEndian>(self.terms.len() as u64)?;
        write_str(w, &serde_json::to_string(&self.members)?)?;
        for ((term, df), list) in self.terms.iter().zip(&self.df).zip(&self.postings) {
            write_str(w, term)?;
            w.write_u32::<LittleEndian>(*df)?;
            w.write_u32::<LittleEndian>(list.len() as u32)?;
            for &(o, wt) in list {
                w.write_u32::<LittleEndian>(o)?;
                wt.write_le(w)?;
            }
        }
        for &n in &self.norms {
            n.write_le(w)?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let mut magic = [0u8; 6];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("not an ESA index file".into()));
        }
        let version = r.read_u16::<LittleEndian>()?;
        if version != VERSION {
            return Err(Error::Format(format!(
                "ESA index version {version}, expected {VERSION}"
            )));
        }
        let width = r.read_u8()?;
        if width != T::WIDTH {
            return Err(Error::Format(format!(
                "index stores {width}-byte weights, reader expects {}",
                T::WIDTH
            )));
        }
        let normalize_concepts = r.read_u8()? != 0;
        let prune_below = r.read_f64::<LittleEndian>()?;
        let lang = LanguageCode::new(read_str(r)?)?;
        let descriptor = serde_json::from_str(&read_str(r)?)?;
        let n = r.read_u64::<LittleEndian>()? as usize;
        let vocab = r.read_u64::<LittleEndian>()? as usize;
        let members: Vec<KbMember> = serde_json::from_str(&read_str(r)?)?;
        if members.len() != n {
            return Err(Error::Format(format!(
                "header says {n} concepts, member list has {}",
                members.len()
            )));
        }
        let mut terms = Vec::with_capacity(vocab.min(1 << 20));
        let mut df = Vec::with_capacity(vocab.min(1 << 20));
        let mut postings = Vec::with_capacity(vocab.min(1 << 20));
        for _ in 0..vocab {
            terms.push(read_str(r)?);
            df.push(r.read_u32::<LittleEndian>()?);
            let len = r.read_u32::<LittleEndian>()? as usize;
            let mut list = Vec::with_capacity(len.min(n));
            for _ in 0..len {
                let o = r.read_u32::<LittleEndian>()?;
                if o as usize >= n {
                    return Err(Error::Format(format!("posting ordinal {o} out of range")));
                }
                list.push((o, T::read_le(r)?));
            }
            postings.push(list);
        }
        let norms = (0..n).map(|_| T::read_le(r)).collect::<std::io::Result<Vec<T>>>()?;
        let lookup = make_lookup(&terms);
        Ok(EsaIndex {
            lang,
            descriptor,
            members,
            options: IndexOptions {
                prune_below,
                normalize_concepts,
            },
            terms,
            df,
            postings,
            norms,
            lookup,
        })
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
        Self::read_from(&mut r)
    }
}

fn write_str<W: Write>(w: &mut W, s: &str) -> Result<()> {
    w.write_u32::<LittleEndian>(s.len() as u32)?;
    w.write_all(s.as_bytes())?;
    Ok(())
}

fn read_str<R: Read>(r: &mut R) -> Result<String> {
    let len = r.read_u32::<LittleEndian>()? as usize;
    let mut buf = Vec::new();
    r.take(len as u64).read_to_end(&mut buf)?;
    if buf.len() != len {
        return Err(Error::Format("truncated string in index file".into()));
    }
    String::from_utf8(buf).map_err(|e| Error::Format(e.to_string()))
}
