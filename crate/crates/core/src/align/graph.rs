use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::resolve::Resolution;
use crate::ingest::{ArticleKind, ArticleSet};
use crate::lang::{ArticleRef, LanguageCode};

/// One article node of the interlanguage-link graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub lang: LanguageCode,
    pub id: u64,
    pub title: String,
    pub disambiguation: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    /// ILLs whose target is missing, cyclic, or in a language with no set.
    pub dangling_ills: usize,
    /// Repeated identical ILLs collapsed into one edge.
    pub duplicate_ills: usize,
}

/// Directed interlanguage-link graph over all non-redirect articles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IllGraph {
    pub nodes: Vec<Node>,
    /// Sorted, deduplicated (source, target) node indices.
    pub edges: Vec<(u32, u32)>,
    pub stats: GraphStats,
}

impl IllGraph {
    /// Builds a graph directly from nodes and edges, validating endpoints.
    pub fn from_parts(nodes: Vec<Node>, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for n in &nodes {
            if !seen.insert((n.lang.clone(), n.id)) {
                return Err(Error::DuplicateId {
                    lang: n.lang.to_string(),
                    id: n.id,
                });
            }
        }
        let mut list: Vec<(u32, u32)> = Vec::new();
        for (s, t) in edges {
            let (si, ti) = (s as usize, t as usize);
            if si >= nodes.len() || ti >= nodes.len() {
                return Err(Error::invalid(format!("edge ({s}, {t}) has a missing endpoint")));
            }
            if nodes[si].lang == nodes[ti].lang {
                return Err(Error::invalid(format!(
                    "edge ({s}, {t}) joins two {} articles",
                    nodes[si].lang
                )));
            }
            list.push((s, t));
        }
        let before = list.len();
        list.sort_unstable();
        list.dedup();
        let stats = GraphStats {
            nodes: nodes.len(),
            edges: list.len(),
            dangling_ills: 0,
            duplicate_ills: before - list.len(),
        };
        Ok(IllGraph {
            nodes,
            edges: list,
            stats,
        })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Undirected adjacency in compressed sparse row form.
    pub(crate) fn undirected_csr(&self) -> (Vec<usize>, Vec<u32>) {
        let n = self.nodes.len();
        let mut degree = vec![0usize; n + 1];
        for &(s, t) in &self.edges {
            degree[s as usize + 1] += 1;
            degree[t as usize + 1] += 1;
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let mut fill = offsets.clone();
        let mut adj = vec![0u32; offsets[n]];
        for &(s, t) in &self.edges {
            adj[fill[s as usize]] = t;
            fill[s as usize] += 1;
            adj[fill[t as usize]] = s;
            fill[t as usize] += 1;
        }
        (offsets, adj)
    }
}

/// Builds the ILL graph from redirect-resolved article sets.
///
/// Nodes are all regular and disambiguation articles. ILL targets are
/// followed through redirects of the target language (up to `max_chain`
/// hops); anything unresolvable is dropped and counted.
pub fn build_ill_graph(sets: &[ArticleSet], max_chain: usize) -> Result<IllGraph> {
    for s in sets {
        if !s.is_resolved() {
            return Err(Error::invalid(format!(
                "article set {} has not been redirect-resolved",
                s.lang
            )));
        }
    }
    let mut by_lang: HashMap<&LanguageCode, Vec<&ArticleSet>> = HashMap::new();
    for s in sets {
        by_lang.entry(&s.lang).or_default().push(s);
    }

    let mut nodes = Vec::new();
    let mut index: HashMap<(LanguageCode, u64), u32> = HashMap::new();
    for s in sets {
        for a in s.iter().filter(|a| !a.kind.is_redirect()) {
            let key = (s.lang.clone(), a.id);
            if index.contains_key(&key) {
                return Err(Error::DuplicateId {
                    lang: s.lang.to_string(),
                    id: a.id,
                });
            }
            index.insert(key, nodes.len() as u32);
            nodes.push(Node {
                lang: s.lang.clone(),
                id: a.id,
                title: a.title().to_string(),
                disambiguation: a.kind == ArticleKind::Disambiguation,
            });
        }
    }

    let resolve = |r: &ArticleRef| -> Option<u32> {
        let candidates = by_lang.get(&r.lang)?;
        candidates
            .iter()
            .find_map(|set| match set.resolve_title(&r.title, max_chain) {
                Resolution::Article { id, .. } => index.get(&(r.lang.clone(), id)).copied(),
                _ => None,
            })
    };

    let mut edges = Vec::new();
    let mut dangling = 0usize;
    for s in sets {
        for a in s.iter().filter(|a| !a.kind.is_redirect()) {
            let source = index[&(s.lang.clone(), a.id)];
            for ill in &a.ills {
                if ill.lang == s.lang {
                    dangling += 1;
                    continue;
                }
                match resolve(ill) {
                    Some(target) => edges.push((source, target)),
                    None => dangling += 1,
                }
            }
        }
    }
    let mut graph = IllGraph::from_parts(nodes, edges)?;
    graph.stats.dangling_ills = dangling;
    Ok(graph)
}
