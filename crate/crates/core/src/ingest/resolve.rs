//! Redirect resolution for outlinks and interlanguage links.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{ArticleKind, ArticleSet};
use crate::lang::{ArticleRef, LanguageCode};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolveStats {
    pub rewritten: usize,
    pub dangling: usize,
    pub cycles: usize,
    pub chain_too_long: usize,
    /// Interlanguage links moved from redirect pages onto their targets.
    pub transferred_ills: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Resolution {
    /// Target is a non-redirect article; `hops` redirects were followed.
    Article {
        id: u64,
        hops: usize,
    },
    Dangling,
    Cycle,
    TooLong,
}

impl ArticleSet {
    /// Follows redirects from `title` for at most `max_chain` hops.
    pub fn resolve_title(&self, title: &str, max_chain: usize) -> Resolution {
        let mut current = title;
        let mut seen: Vec<&str> = Vec::new();
        loop {
            let Some(article) = self.by_title(current) else {
                return Resolution::Dangling;
            };
            match &article.kind {
                ArticleKind::Redirect(target) => {
                    if seen.contains(&current) {
                        return Resolution::Cycle;
                    }
                    seen.push(current);
                    current = target.title.as_str();
                }
                _ => {
                    let hops = seen.len();
                    return if hops > max_chain {
                        Resolution::TooLong
                    } else {
                        Resolution::Article { id: article.id, hops }
                    };
                }
            }
        }
    }
}

struct Memo<'a> {
    set: &'a ArticleSet,
    max_chain: usize,
    cache: HashMap<String, Resolution>,
}

impl<'a> Memo<'a> {
    fn new(set: &'a ArticleSet, max_chain: usize) -> Self {
        Memo {
            set,
            max_chain,
            cache: HashMap::new(),
        }
    }

    fn resolve(&mut self, title: &str) -> Resolution {
        if let Some(r) = self.cache.get(title) {
            return r.clone();
        }
        let r = self.set.resolve_title(title, self.max_chain);
        self.cache.insert(title.to_string(), r.clone());
        r
    }
}

fn rewrite(links: Vec<ArticleRef>, memo: &mut Memo<'_>, stats: &mut ResolveStats) -> Vec<ArticleRef> {
    let mut out = Vec::with_capacity(links.len());
    for link in links {
        match memo.resolve(&link.title) {
            Resolution::Article { id, hops } => {
                if hops > 0 {
                    stats.rewritten += 1;
                    let target = memo.set.get(id).expect("resolved id exists");
                    out.push(target.reference.clone());
                } else {
                    out.push(link);
                }
            }
            Resolution::Dangling => stats.dangling += 1,
            Resolution::Cycle => stats.cycles += 1,
            Resolution::TooLong => stats.chain_too_long += 1,
        }
    }
    out
}

/// Rewrites every outlink that targets a redirect to its final target,
/// following chains of at most `max_chain` hops. Links to missing titles,
/// redirect cycles and over-long chains are dropped and counted.
///
/// Interlanguage links found on redirect pages are moved to the redirect's
/// final target.
pub fn resolve_links(mut set: ArticleSet, max_chain: usize) -> (ArticleSet, ResolveStats) {
    let mut stats = ResolveStats::default();
    let ids: Vec<u64> = set.ids().collect();

    let mut updates = Vec::with_capacity(ids.len());
    let mut transfers: BTreeMap<u64, Vec<ArticleRef>> = BTreeMap::new();
    {
        let mut memo = Memo::new(&set, max_chain);
        for &id in &ids {
            let article = set.get(id).expect("id listed");
            if let ArticleKind::Redirect(_) = article.kind {
                if !article.ills.is_empty() {
                    if let Resolution::Article { id: target, .. } = memo.resolve(article.title()) {
                        stats.transferred_ills += article.ills.len();
                        transfers
                            .entry(target)
                            .or_default()
                            .extend(article.ills.iter().cloned());
                    }
                }
                continue;
            }
            let links = rewrite(article.outlinks.clone(), &mut memo, &mut stats);
            updates.push((id, links));
        }
    }
    for (id, links) in updates {
        set.get_mut(id).expect("id listed").outlinks = links;
    }
    for (id, ills) in transfers {
        let article = set.get_mut(id).expect("resolved id exists");
        for ill in ills {
            if !article.ills.contains(&ill) {
                article.ills.push(ill);
            }
        }
    }
    set.mark_resolved();
    (set, stats)
}

/// Rewrites interlanguage links through the redirects of the target
/// language's set. Links into languages without a set are left untouched;
/// unresolvable links into present languages are dropped and counted.
pub fn resolve_interlanguage_links(sets: &mut [ArticleSet], max_chain: usize) -> ResolveStats {
    let mut stats = ResolveStats::default();
    let by_lang: HashMap<LanguageCode, usize> = sets.iter().enumerate().map(|(i, s)| (s.lang.clone(), i)).collect();

    let mut planned: Vec<(usize, u64, Vec<ArticleRef>)> = Vec::new();
    for (si, set) in sets.iter().enumerate() {
        for article in set.iter() {
            if article.ills.is_empty() {
                continue;
            }
            let mut out = Vec::with_capacity(article.ills.len());
            let mut seen = HashSet::new();
            for ill in &article.ills {
                let resolved = match by_lang.get(&ill.lang) {
                    None => Some(ill.clone()),
                    Some(&ti) => match sets[ti].resolve_title(&ill.title, max_chain) {
                        Resolution::Article { id, hops } => {
                            if hops > 0 {
                                stats.rewritten += 1;
                            }
                            Some(sets[ti].get(id).expect("resolved").reference.clone())
                        }
                        Resolution::Dangling => {
                            stats.dangling += 1;
                            None
                        }
                        Resolution::Cycle => {
                            stats.cycles += 1;
                            None
                        }
                        Resolution::TooLong => {
                            stats.chain_too_long += 1;
                            None
                        }
                    },
                };
                if let Some(r) = resolved {
                    if seen.insert(r.clone()) {
                        out.push(r);
                    }
                }
            }
            if out != article.ills {
                planned.push((si, article.id, out));
            }
        }
    }
    for (si, id, ills) in planned {
        sets[si].get_mut(id).expect("planned id").ills = ills;
    }
    stats
}
