use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::graph::{GraphStats, IllGraph};
use crate::error::{Error, Result};
use crate::lang::LanguageCode;
use crate::scalar::Scalar;

/// Opaque 64-bit concept identifier, rendered as 16 hex digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ConceptId(pub u64);

impl ConceptId {
    /// Hash of a member key; `salt` separates the rare collisions.
    pub fn derive(lang: &LanguageCode, title: &str, salt: u32) -> Self {
        let mut h = Sha256::new();
        h.update(lang.as_str().as_bytes());
        h.update([0u8]);
        h.update(title.as_bytes());
        if salt > 0 {
            h.update([0u8]);
            h.update(salt.to_le_bytes());
        }
        let digest = h.finalize();
        let mut b = [0u8; 8];
        b.copy_from_slice(&digest[..8]);
        ConceptId(u64::from_be_bytes(b))
    }
}

impl fmt::Display for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

impl FromStr for ConceptId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        u64::from_str_radix(s, 16)
            .map(ConceptId)
            .map_err(|_| Error::invalid(format!("bad concept id {s:?}")))
    }
}

impl TryFrom<String> for ConceptId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ConceptId> for String {
    fn from(id: ConceptId) -> String {
        id.to_string()
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    pub id: u64,
    pub title: String,
    #[serde(default, skip_serializing_if = "is_false")]
    pub disambiguation: bool,
}

/// One connected component of the ILL graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Concept {
    pub id: ConceptId,
    /// Member articles per language, ascending by article id.
    pub members: BTreeMap<LanguageCode, Vec<Member>>,
    pub clarity: f64,
}

impl Concept {
    pub fn article_count(&self) -> usize {
        self.members.values().map(Vec::len).sum()
    }

    pub fn language_count(&self) -> usize {
        self.members.len()
    }

    /// Exact clarity: distinct languages over member articles.
    pub fn clarity_ratio(&self) -> Ratio<usize> {
        Ratio::new(self.language_count(), self.article_count())
    }

    pub fn has_perfect_clarity(&self) -> bool {
        self.language_count() == self.article_count()
    }

    /// Members of `lang` that count for analysis.
    pub fn eligible_members<'a>(
        &'a self,
        lang: &LanguageCode,
        include_disambiguation: bool,
    ) -> impl Iterator<Item = &'a Member> + 'a {
        self.members
            .get(lang)
            .into_iter()
            .flatten()
            .filter(move |m| include_disambiguation || !m.disambiguation)
    }

    /// A concept is covered by `lang` when it has at least one member there.
    pub fn covered_by(&self, lang: &LanguageCode, include_disambiguation: bool) -> bool {
        self.eligible_members(lang, include_disambiguation).next().is_some()
    }

    pub fn representative(&self, lang: &LanguageCode) -> Option<&Member> {
        self.eligible_members(lang, false).next()
    }
}

/// Distinct languages divided by member articles.
pub fn clarity<T: Scalar>(concept: &Concept) -> T {
    T::from_ratio(concept.clarity_ratio())
}

/// Lower bound on the single-language share if every missing ILL joined a
/// distinct single-language concept to some other concept.
pub fn adjust_single_language_fraction<T: Scalar>(fraction: T, miss_prob: T) -> Result<T> {
    let unit = |x: T| x >= T::zero() && x <= T::one();
    if !unit(fraction) || !unit(miss_prob) {
        return Err(Error::invalid(format!(
            "fraction {fraction} and miss probability {miss_prob} must lie in [0, 1]"
        )));
    }
    Ok(fraction * (T::one() - miss_prob))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AlignStats {
    pub graph: GraphStats,
    pub concepts: usize,
    pub perfect_clarity: usize,
    /// Concepts with clarity below one half.
    pub low_clarity: usize,
    /// Ten equal-width clarity bins over (0, 1]; the last bin includes 1.0.
    pub clarity_histogram: [usize; 10],
}

/// Partition of all graph nodes into concepts.
#[derive(Clone, Debug, PartialEq)]
pub struct ConceptTable {
    concepts: BTreeMap<ConceptId, Concept>,
    reverse: HashMap<(LanguageCode, u64), ConceptId>,
    pub stats: AlignStats,
}

impl ConceptTable {
    pub fn from_concepts(concepts: impl IntoIterator<Item = Concept>, graph: GraphStats) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut reverse = HashMap::new();
        for c in concepts {
            for (lang, members) in &c.members {
                for m in members {
                    if reverse.insert((lang.clone(), m.id), c.id).is_some() {
                        return Err(Error::invalid(format!(
                            "article {lang}:{} belongs to two concepts",
                            m.id
                        )));
                    }
                }
            }
            if map.insert(c.id, c).is_some() {
                return Err(Error::invalid("duplicate concept id"));
            }
        }
        let mut stats = AlignStats {
            graph,
            concepts: map.len(),
            ..AlignStats::default()
        };
        for c in map.values() {
            let v = clarity::<f64>(c);
            if c.has_perfect_clarity() {
                stats.perfect_clarity += 1;
            }
            if v < 0.5 {
                stats.low_clarity += 1;
            }
            let bin = ((v * 10.0).ceil() as usize).clamp(1, 10) - 1;
            stats.clarity_histogram[bin] += 1;
        }
        Ok(ConceptTable {
            concepts: map,
            reverse,
            stats,
        })
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn get(&self, id: ConceptId) -> Option<&Concept> {
        self.concepts.get(&id)
    }

    pub fn concept_of(&self, lang: &LanguageCode, article_id: u64) -> Option<ConceptId> {
        self.reverse.get(&(lang.clone(), article_id)).copied()
    }

    /// Concepts in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = &Concept> + '_ {
        self.concepts.values()
    }

    pub fn languages(&self) -> BTreeSet<LanguageCode> {
        self.concepts.values().flat_map(|c| c.members.keys().cloned()).collect()
    }

    pub fn article_count(&self) -> usize {
        self.reverse.len()
    }
}

/// Labels every connected component (edge direction ignored) as a concept
/// using an iterative breadth-first search.
pub fn concept_align(graph: &IllGraph) -> ConceptTable {
    let n = graph.node_count();
    let (offsets, adj) = graph.undirected_csr();
    let mut label = vec![u32::MAX; n];
    let mut components: Vec<Vec<u32>> = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if label[start] != u32::MAX {
            continue;
        }
        let comp = components.len() as u32;
        label[start] = comp;
        queue.push_back(start as u32);
        let mut members = Vec::new();
        while let Some(v) = queue.pop_front() {
            members.push(v);
            let v = v as usize;
            for &w in &adj[offsets[v]..offsets[v + 1]] {
                if label[w as usize] == u32::MAX {
                    label[w as usize] = comp;
                    queue.push_back(w);
                }
            }
        }
        components.push(members);
    }
    concepts_from_components(graph, components)
}

/// Turns node-index components into a [`ConceptTable`] with deterministic ids.
pub fn concepts_from_components(graph: &IllGraph, components: Vec<Vec<u32>>) -> ConceptTable {
    let key = |i: u32| {
        let node = &graph.nodes[i as usize];
        (&node.lang, node.title.as_str(), node.id)
    };
    let mut keyed: Vec<(u32, Vec<u32>)> = components
        .into_iter()
        .map(|c| {
            let rep = *c.iter().min_by(|a, b| key(**a).cmp(&key(**b))).expect("nonempty");
            (rep, c)
        })
        .collect();
    keyed.sort_by(|a, b| key(a.0).cmp(&key(b.0)));

    let mut used = HashSet::new();
    let mut concepts = Vec::with_capacity(keyed.len());
    for (rep, nodes) in keyed {
        let rep_node = &graph.nodes[rep as usize];
        let mut salt = 0;
        let id = loop {
            let id = ConceptId::derive(&rep_node.lang, &rep_node.title, salt);
            if used.insert(id) {
                break id;
            }
            salt += 1;
        };
        let mut members: BTreeMap<LanguageCode, Vec<Member>> = BTreeMap::new();
        for i in nodes {
            let node = &graph.nodes[i as usize];
            members.entry(node.lang.clone()).or_default().push(Member {
                id: node.id,
                title: node.title.clone(),
                disambiguation: node.disambiguation,
            });
        }
        for list in members.values_mut() {
            list.sort_by_key(|m| m.id);
        }
        let mut concept = Concept {
            id,
            members,
            clarity: 0.0,
        };
        concept.clarity = clarity(&concept);
        concepts.push(concept);
    }
    ConceptTable::from_concepts(concepts, graph.stats.clone()).expect("components partition the nodes")
}
