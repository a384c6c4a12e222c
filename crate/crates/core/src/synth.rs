//! Seeded synthetic multilingual corpora with a ground-truth ledger.
//!
//! Every regular concept gets a pseudo-word stem; its article in language
//! `xx` is titled `<Stem>xx`. Outlinks point at concepts covered by every
//! language: a shared block of `round(rate * links)` targets used by all of
//! the concept's articles, plus one block per content group. Two articles on
//! one concept therefore overlap in exactly the shared block unless their
//! languages are in the same content group, where they agree completely.
//!
//! Knobs and defaults (TOML keys match field names):
//!
//! | key | default | meaning |
//! |---|---|---|
//! | `languages` | `["en", "de", "fr"]` | editions to emit |
//! | `seed` | `0` | generator seed |
//! | `concepts` | unset | optional check: must equal the bucket total |
//! | `overlap` | 30 / 20 / 30 over 1 / 2 / 3 languages | `[{ languages = n, count = k }]` |
//! | `time_concepts` | `0` | year articles `1900`, `1901`, ... in every language |
//! | `clarity_defects` | `0` | concepts given a second article in one language |
//! | `disambiguation_per_language` | `0` | single-language disambiguation pages |
//! | `links_per_article` | `10` | planted outlinks per regular article |
//! | `link_overlap_rate` | `0.5` | shared share of those outlinks |
//! | `time_links_per_article` | `0` | extra links to year articles |
//! | `dangling_links_per_article` | `0` | extra links to missing titles |
//! | `redirects_per_language` | `0` | planted links rerouted through 1-3 redirects |
//! | `redirect_cycles_per_language` | `0` | two-page redirect loops, each linked once |
//! | `dangling_ills_per_language` | `0` | ILLs to missing titles |
//! | `core_tokens` | `20` | content words per article |
//! | `vocabulary` | `5000` | content and noise vocabulary size |
//! | `noise_rate` | `0.0` | per-language noise words per content word |
//! | `content_groups` | one group per language | `{ xx = group }`; same group, same content |

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::ToolConfig;
use crate::error::{Error, Result};
use crate::ingest::{
    parse_dump, resolve_interlanguage_links, resolve_links, ArticleSet, CanonicalRecord, DumpFormat, RecordKind,
    ResolveStats,
};
use crate::lang::LanguageCode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverlapBucket {
    /// Number of languages covering each concept of the bucket.
    pub languages: usize,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthConfig {
    pub languages: Vec<LanguageCode>,
    pub seed: u64,
    pub concepts: Option<usize>,
    pub overlap: Vec<OverlapBucket>,
    pub time_concepts: usize,
    pub clarity_defects: usize,
    pub disambiguation_per_language: usize,
    pub links_per_article: usize,
    pub link_overlap_rate: f64,
    pub time_links_per_article: usize,
    pub dangling_links_per_article: usize,
    pub redirects_per_language: usize,
    pub redirect_cycles_per_language: usize,
    pub dangling_ills_per_language: usize,
    pub core_tokens: usize,
    pub vocabulary: usize,
    pub noise_rate: f64,
    pub content_groups: BTreeMap<LanguageCode, usize>,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            languages: ["en", "de", "fr"]
                .iter()
                .map(|c| LanguageCode::new(*c).unwrap())
                .collect(),
            seed: 0,
            concepts: None,
            overlap: vec![
                OverlapBucket {
                    languages: 1,
                    count: 30,
                },
                OverlapBucket {
                    languages: 2,
                    count: 20,
                },
                OverlapBucket {
                    languages: 3,
                    count: 30,
                },
            ],
            time_concepts: 0,
            clarity_defects: 0,
            disambiguation_per_language: 0,
            links_per_article: 10,
            link_overlap_rate: 0.5,
            time_links_per_article: 0,
            dangling_links_per_article: 0,
            redirects_per_language: 0,
            redirect_cycles_per_language: 0,
            dangling_ills_per_language: 0,
            core_tokens: 20,
            vocabulary: 5000,
            noise_rate: 0.0,
            content_groups: BTreeMap::new(),
        }
    }
}

impl SynthConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Outlinks every article on a concept shares.
    pub fn shared_links(&self) -> usize {
        (self.link_overlap_rate * self.links_per_article as f64).round() as usize
    }

    fn group_of(&self, lang_pos: usize) -> usize {
        let lang = &self.languages[lang_pos];
        self.content_groups.get(lang).copied().unwrap_or(lang_pos)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LedgerKind {
    Planted,
    Time,
    Disambiguation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerMember {
    pub id: u64,
    pub title: String,
    pub disambiguation: bool,
    /// Ledger indices of planted link targets (resolvable, non-time).
    pub links: Vec<usize>,
    /// Ledger indices of linked year concepts.
    pub time_links: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerConcept {
    pub index: usize,
    pub kind: LedgerKind,
    /// Content group permutation target, for planted concepts.
    pub content: BTreeMap<LanguageCode, usize>,
    pub members: BTreeMap<LanguageCode, Vec<LedgerMember>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerIll {
    pub from_lang: LanguageCode,
    pub from_id: u64,
    pub to_lang: LanguageCode,
    pub to_title: String,
    /// `None` for dangling ILLs.
    pub to_id: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerRedirect {
    pub lang: LanguageCode,
    pub source_id: u64,
    /// Redirect titles in hop order; the last one points at `target_title`.
    pub chain: Vec<String>,
    pub chain_ids: Vec<u64>,
    pub target: usize,
    pub target_title: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerCycle {
    pub lang: LanguageCode,
    pub source_id: u64,
    pub titles: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerDangling {
    pub lang: LanguageCode,
    pub source_id: u64,
    pub title: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusLedger {
    pub seed: u64,
    pub languages: Vec<LanguageCode>,
    pub links_per_article: usize,
    pub shared_links: usize,
    pub concepts: Vec<LedgerConcept>,
    pub ill_edges: Vec<LedgerIll>,
    pub dangling_ills: Vec<LedgerIll>,
    pub redirects: Vec<LedgerRedirect>,
    pub redirect_cycles: Vec<LedgerCycle>,
    pub dangling_links: Vec<LedgerDangling>,
}

impl CorpusLedger {
    pub fn concept(&self, index: usize) -> &LedgerConcept {
        &self.concepts[index]
    }
}

/// Per-language outlink resolution counters and the interlanguage counters.
pub type IngestCounters = (BTreeMap<LanguageCode, ResolveStats>, ResolveStats);

#[derive(Clone, Debug, PartialEq)]
pub struct SynthCorpus {
    /// Canonical JSON Lines dump per language.
    pub dumps: BTreeMap<LanguageCode, String>,
    pub ledger: CorpusLedger,
}

impl SynthCorpus {
    pub fn ledger_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.ledger).expect("ledger serializes");
        s.push('\n');
        s
    }

    /// Writes `<lang>.jsonl` per language and `ledger.json`.
    pub fn write_to_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for (lang, dump) in &self.dumps {
            std::fs::write(dir.join(format!("{lang}.jsonl")), dump)?;
        }
        std::fs::write(dir.join("ledger.json"), self.ledger_json())?;
        Ok(())
    }

    /// Parses every dump and resolves redirects and interlanguage links.
    pub fn ingest(&self, config: &ToolConfig) -> Result<Vec<ArticleSet>> {
        self.ingest_with_stats(config).map(|(sets, _)| sets)
    }

    /// As [`ingest`](Self::ingest), also returning per-language outlink
    /// resolution counters and the interlanguage counters.
    pub fn ingest_with_stats(&self, config: &ToolConfig) -> Result<(Vec<ArticleSet>, IngestCounters)> {
        let mut sets = Vec::with_capacity(self.dumps.len());
        let mut per_lang = BTreeMap::new();
        for (lang, dump) in &self.dumps {
            let set = parse_dump(dump.as_bytes(), lang, DumpFormat::Jsonl, config)?;
            let (set, stats) = resolve_links(set, config.redirect_chain_limit);
            per_lang.insert(lang.clone(), stats);
            sets.push(set);
        }
        let ills = resolve_interlanguage_links(&mut sets, config.redirect_chain_limit);
        Ok((sets, (per_lang, ills)))
    }
}

const CONSONANTS: &[u8] = b"bdfgklmnprstvz";
const VOWELS: &[u8] = b"aeiou";

/// Distinct capitalized pseudo-word for every `n`, at least three syllables.
pub fn pseudo_word(n: usize) -> String {
    let base = CONSONANTS.len() * VOWELS.len();
    let mut v = n + base * base;
    let mut syllables = Vec::new();
    while v > 0 {
        let s = v % base;
        syllables.push([CONSONANTS[s / VOWELS.len()], VOWELS[s % VOWELS.len()]]);
        v /= base;
    }
    let mut out: String = syllables
        .iter()
        .rev()
        .flat_map(|s| s.iter().map(|&b| b as char))
        .collect();
    out[..1].make_ascii_uppercase();
    out
}

fn suffix(lang: &LanguageCode) -> String {
    lang.as_str().replace('-', "")
}

#[derive(Debug)]
struct Draft {
    id: u64,
    title: String,
    kind: RecordKind,
    redirect_target: Option<String>,
    content: Option<usize>,
    /// Surface titles of outlinks, in output order.
    links: Vec<String>,
    /// Which entries of `links` are planted (rewritable) links.
    planted: Vec<bool>,
    ills: Vec<(LanguageCode, String)>,
    extra_text: String,
}

struct Builder {
    langs: Vec<LanguageCode>,
    drafts: Vec<Vec<Draft>>,
    words: usize,
}

impl Builder {
    fn push(&mut self, lang: usize, mut d: Draft) -> usize {
        d.id = self.drafts[lang].len() as u64 + 1;
        self.drafts[lang].push(d);
        self.drafts[lang].len() - 1
    }

    fn fresh_stem(&mut self) -> String {
        self.words += 1;
        pseudo_word(self.words - 1)
    }

    fn fresh_title(&mut self, lang: usize) -> String {
        let stem = self.fresh_stem();
        format!("{stem}{}", suffix(&self.langs[lang]))
    }
}

fn draft(title: String, kind: RecordKind) -> Draft {
    Draft {
        id: 0,
        title,
        kind,
        redirect_target: None,
        content: None,
        links: Vec::new(),
        planted: Vec::new(),
        ills: Vec::new(),
        extra_text: String::new(),
    }
}

fn infeasible(msg: impl Into<String>) -> Error {
    Error::Config(format!("infeasible synthetic corpus: {}", msg.into()))
}

fn validate(cfg: &SynthConfig, tool: &ToolConfig) -> Result<usize> {
    if cfg.languages.is_empty() {
        return Err(infeasible("no languages"));
    }
    let distinct: BTreeSet<_> = cfg.languages.iter().collect();
    if distinct.len() != cfg.languages.len() {
        return Err(infeasible("duplicate language"));
    }
    for l in &cfg.languages {
        tool.ensure_language(l)?;
    }
    for l in cfg.content_groups.keys() {
        if !distinct.contains(l) {
            return Err(infeasible(format!("content group for unlisted language {l}")));
        }
    }
    for b in &cfg.overlap {
        if b.languages == 0 || b.languages > cfg.languages.len() {
            return Err(infeasible(format!(
                "bucket of {} languages with {} languages configured",
                b.languages,
                cfg.languages.len()
            )));
        }
    }
    let total: usize = cfg.overlap.iter().map(|b| b.count).sum();
    if let Some(n) = cfg.concepts {
        if n != total {
            return Err(infeasible(format!("concepts = {n} but overlap buckets hold {total}")));
        }
    }
    if !(0.0..=1.0).contains(&cfg.link_overlap_rate) {
        return Err(infeasible("link_overlap_rate outside [0, 1]"));
    }
    if !(cfg.noise_rate >= 0.0 && cfg.noise_rate.is_finite()) {
        return Err(infeasible("noise_rate must be a nonnegative number"));
    }
    if cfg.time_concepts + 1900 > 9999 {
        return Err(infeasible("too many year concepts"));
    }
    if cfg.time_links_per_article > cfg.time_concepts {
        return Err(infeasible("more time links per article than year concepts"));
    }
    if cfg.vocabulary == 0 && cfg.core_tokens > 0 {
        return Err(infeasible("empty vocabulary"));
    }
    if cfg.dangling_ills_per_language > 0 && cfg.languages.len() < 2 {
        return Err(infeasible("dangling ILLs need a second language"));
    }
    Ok(total)
}

/// Generates dumps and ledger. Identical config gives identical bytes.
pub fn generate(cfg: &SynthConfig, tool: &ToolConfig) -> Result<SynthCorpus> {
    let total = validate(cfg, tool)?;
    let nl = cfg.languages.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut b = Builder {
        langs: cfg.languages.clone(),
        drafts: (0..nl).map(|_| Vec::new()).collect(),
        words: 0,
    };

    // planted concepts: language positions and stems
    let mut planted: Vec<(Vec<usize>, String)> = Vec::with_capacity(total);
    for bucket in &cfg.overlap {
        for _ in 0..bucket.count {
            let mut langs = index::sample(&mut rng, nl, bucket.languages).into_vec();
            langs.sort_unstable();
            let stem = b.fresh_stem();
            planted.push((langs, stem));
        }
    }
    let pool: Vec<usize> = (0..total).filter(|&i| planted[i].0.len() == nl).collect();

    let m = cfg.links_per_article;
    let s = cfg.shared_links();
    let groups: Vec<usize> = (0..nl).map(|p| cfg.group_of(p)).collect();
    let group_ids: BTreeSet<usize> = groups.iter().copied().collect();

    // link plans: shared block + one block per content group present
    let mut plans: Vec<BTreeMap<usize, Vec<usize>>> = Vec::with_capacity(total);
    for (c, (langs, _)) in planted.iter().enumerate() {
        let present: BTreeSet<usize> = langs.iter().map(|&p| groups[p]).collect();
        let mut plan = BTreeMap::new();
        if m > 0 {
            let candidates: Vec<usize> = pool.iter().copied().filter(|&t| t != c).collect();
            let need = s + present.len() * (m - s);
            if candidates.len() < need {
                return Err(infeasible(format!(
                    "concept needs {need} distinct link targets, only {} global concepts available",
                    candidates.len()
                )));
            }
            let picks: Vec<usize> = index::sample(&mut rng, candidates.len(), need)
                .into_iter()
                .map(|i| candidates[i])
                .collect();
            for (k, g) in present.iter().enumerate() {
                let mut targets = picks[..s].to_vec();
                targets.extend_from_slice(&picks[s + k * (m - s)..s + (k + 1) * (m - s)]);
                targets.shuffle(&mut rng);
                plan.insert(*g, targets);
            }
        }
        plans.push(plan);
    }

    // content permutation per group; the lowest group keeps identity
    let lowest = group_ids.iter().next().copied().unwrap_or(0);
    let mut perms: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &g in &group_ids {
        let mut p: Vec<usize> = (0..total).collect();
        if g != lowest {
            p.shuffle(&mut rng);
        }
        perms.insert(g, p);
    }
    let core: Vec<Vec<usize>> = (0..total)
        .map(|_| {
            (0..cfg.core_tokens)
                .map(|_| rng.gen_range(0..cfg.vocabulary.max(1)))
                .collect()
        })
        .collect();

    let time_base = total;
    let mut ledger_concepts: Vec<LedgerConcept> = Vec::new();
    // (lang pos, draft index) of each concept member, for ILLs and ledger
    let mut member_slots: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut dangling_links = Vec::new();

    for (c, (langs, stem)) in planted.iter().enumerate() {
        let mut concept = LedgerConcept {
            index: c,
            kind: LedgerKind::Planted,
            content: BTreeMap::new(),
            members: BTreeMap::new(),
        };
        let mut slots = Vec::new();
        for &p in langs {
            let lang = &cfg.languages[p];
            let g = groups[p];
            let content = perms[&g][c];
            concept.content.insert(lang.clone(), content);
            let targets = plans[c].get(&g).cloned().unwrap_or_default();
            let mut d = draft(format!("{stem}{}", suffix(lang)), RecordKind::Regular);
            d.content = Some(content);
            for &t in &targets {
                d.links.push(format!("{}{}", planted[t].1, suffix(lang)));
                d.planted.push(true);
            }
            let time_links: Vec<usize> = index::sample(&mut rng, cfg.time_concepts, cfg.time_links_per_article)
                .into_iter()
                .collect();
            for &t in &time_links {
                d.links.push((1900 + t).to_string());
                d.planted.push(false);
            }
            let mut dangling = Vec::new();
            for _ in 0..cfg.dangling_links_per_article {
                let title = b.fresh_title(p);
                d.links.push(title.clone());
                d.planted.push(false);
                dangling.push(title);
            }
            let idx = b.push(p, d);
            let id = b.drafts[p][idx].id;
            for title in dangling {
                dangling_links.push(LedgerDangling {
                    lang: lang.clone(),
                    source_id: id,
                    title,
                });
            }
            concept.members.entry(lang.clone()).or_default().push(LedgerMember {
                id,
                title: b.drafts[p][idx].title.clone(),
                disambiguation: false,
                links: targets,
                time_links: time_links.iter().map(|t| time_base + t).collect(),
            });
            slots.push((p, idx));
        }
        ledger_concepts.push(concept);
        member_slots.push(slots);
    }
    for t in 0..cfg.time_concepts {
        let title = (1900 + t).to_string();
        let mut concept = LedgerConcept {
            index: time_base + t,
            kind: LedgerKind::Time,
            content: BTreeMap::new(),
            members: BTreeMap::new(),
        };
        let mut slots = Vec::new();
        for p in 0..nl {
            let idx = b.push(p, draft(title.clone(), RecordKind::Regular));
            let id = b.drafts[p][idx].id;
            concept
                .members
                .entry(cfg.languages[p].clone())
                .or_default()
                .push(LedgerMember {
                    id,
                    title: title.clone(),
                    disambiguation: false,
                    links: Vec::new(),
                    time_links: Vec::new(),
                });
            slots.push((p, idx));
        }
        ledger_concepts.push(concept);
        member_slots.push(slots);
    }

    // spanning tree of ILLs over one member per language
    let mut ill_edges = Vec::new();
    for slots in &member_slots {
        let mut order = slots.clone();
        order.shuffle(&mut rng);
        for i in 1..order.len() {
            let j = rng.gen_range(0..i);
            let (from, to) = if rng.gen_bool(0.5) {
                (order[i], order[j])
            } else {
                (order[j], order[i])
            };
            add_ill(&mut b, &mut ill_edges, from, to);
        }
    }

    // clarity defects: a second same-language article joined by one ILL
    let multi: Vec<usize> = (0..total).filter(|&c| planted[c].0.len() >= 2).collect();
    if cfg.clarity_defects > multi.len() {
        return Err(infeasible(format!(
            "{} clarity defects but only {} multi-language concepts",
            cfg.clarity_defects,
            multi.len()
        )));
    }
    let mut defect_concepts: Vec<usize> = index::sample(&mut rng, multi.len(), cfg.clarity_defects)
        .into_iter()
        .map(|i| multi[i])
        .collect();
    defect_concepts.sort_unstable();
    for c in defect_concepts {
        let slots = member_slots[c].clone();
        let k = rng.gen_range(0..slots.len());
        let (p, _) = slots[k];
        let others: Vec<(usize, usize)> = slots.iter().copied().filter(|s| s.0 != p).collect();
        let anchor = others[rng.gen_range(0..others.len())];
        let lang = cfg.languages[p].clone();
        let targets = plans[c].get(&groups[p]).cloned().unwrap_or_default();
        let mut d = draft(b.fresh_title(p), RecordKind::Regular);
        d.content = Some(perms[&groups[p]][c]);
        for &t in &targets {
            d.links.push(format!("{}{}", planted[t].1, suffix(&lang)));
            d.planted.push(true);
        }
        let idx = b.push(p, d);
        let (from, to) = if rng.gen_bool(0.5) {
            ((p, idx), anchor)
        } else {
            (anchor, (p, idx))
        };
        add_ill(&mut b, &mut ill_edges, from, to);
        ledger_concepts[c].members.entry(lang).or_default().push(LedgerMember {
            id: b.drafts[p][idx].id,
            title: b.drafts[p][idx].title.clone(),
            disambiguation: false,
            links: targets,
            time_links: Vec::new(),
        });
        member_slots[c].push((p, idx));
    }

    for p in 0..nl {
        let lang = cfg.languages[p].clone();
        let patterns = tool.disambiguation_for(&lang);
        let title_suffix = patterns.title_suffixes.first().cloned().unwrap_or_default();
        let template = patterns
            .templates
            .first()
            .cloned()
            .unwrap_or_else(|| "disambiguation".into());
        for _ in 0..cfg.disambiguation_per_language {
            let title = format!("{}{}", b.fresh_title(p), title_suffix);
            let mut d = draft(title.clone(), RecordKind::Disambiguation);
            d.extra_text = format!("{{{{{template}}}}}");
            let idx = b.push(p, d);
            let index = ledger_concepts.len();
            let mut members = BTreeMap::new();
            members.insert(
                lang.clone(),
                vec![LedgerMember {
                    id: b.drafts[p][idx].id,
                    title,
                    disambiguation: true,
                    links: Vec::new(),
                    time_links: Vec::new(),
                }],
            );
            ledger_concepts.push(LedgerConcept {
                index,
                kind: LedgerKind::Disambiguation,
                content: BTreeMap::new(),
                members,
            });
        }
    }

    // planted articles per language: (draft index, concept) for rewiring
    let mut regular_by_lang: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nl];
    for (c, slots) in member_slots.iter().enumerate().take(total) {
        for &(p, idx) in slots {
            regular_by_lang[p].push((idx, c));
        }
    }

    let mut redirects = Vec::new();
    let mut cycles = Vec::new();
    let mut dangling_ills = Vec::new();
    for p in 0..nl {
        let lang = cfg.languages[p].clone();
        let mut occurrences: Vec<(usize, usize)> = Vec::new();
        for &(idx, _) in &regular_by_lang[p] {
            for (k, &is_planted) in b.drafts[p][idx].planted.iter().enumerate() {
                if is_planted {
                    occurrences.push((idx, k));
                }
            }
        }
        if cfg.redirects_per_language > occurrences.len() {
            return Err(infeasible(format!(
                "{} redirects requested in {lang} but only {} planted links exist",
                cfg.redirects_per_language,
                occurrences.len()
            )));
        }
        let mut picks = index::sample(&mut rng, occurrences.len(), cfg.redirects_per_language).into_vec();
        picks.sort_unstable();
        for i in picks {
            let (idx, k) = occurrences[i];
            let target_title = b.drafts[p][idx].links[k].clone();
            let len = rng.gen_range(1..=3);
            let chain: Vec<String> = (0..len).map(|_| b.fresh_title(p)).collect();
            let mut chain_ids = Vec::new();
            for h in 0..len {
                let next = if h + 1 < len {
                    chain[h + 1].clone()
                } else {
                    target_title.clone()
                };
                let mut d = draft(chain[h].clone(), RecordKind::Redirect);
                d.redirect_target = Some(next);
                let r = b.push(p, d);
                chain_ids.push(b.drafts[p][r].id);
            }
            b.drafts[p][idx].links[k] = chain[0].clone();
            let target = planted
                .iter()
                .position(|(_, stem)| format!("{stem}{}", suffix(&lang)) == target_title)
                .expect("planted target");
            redirects.push(LedgerRedirect {
                lang: lang.clone(),
                source_id: b.drafts[p][idx].id,
                chain,
                chain_ids,
                target,
                target_title,
            });
        }

        if (cfg.redirect_cycles_per_language > 0 || cfg.dangling_ills_per_language > 0) && regular_by_lang[p].is_empty()
        {
            return Err(infeasible(format!("no planted article in {lang} to carry extra links")));
        }
        for _ in 0..cfg.redirect_cycles_per_language {
            let a = b.fresh_title(p);
            let c = b.fresh_title(p);
            for (from, to) in [(&a, &c), (&c, &a)] {
                let mut d = draft(from.clone(), RecordKind::Redirect);
                d.redirect_target = Some(to.clone());
                b.push(p, d);
            }
            let (idx, _) = regular_by_lang[p][rng.gen_range(0..regular_by_lang[p].len())];
            b.drafts[p][idx].links.push(a.clone());
            b.drafts[p][idx].planted.push(false);
            cycles.push(LedgerCycle {
                lang: lang.clone(),
                source_id: b.drafts[p][idx].id,
                titles: [a, c],
            });
        }
        for _ in 0..cfg.dangling_ills_per_language {
            let (idx, _) = regular_by_lang[p][rng.gen_range(0..regular_by_lang[p].len())];
            let mut q = rng.gen_range(0..nl - 1);
            if q >= p {
                q += 1;
            }
            let title = b.fresh_title(q);
            b.drafts[p][idx].ills.push((cfg.languages[q].clone(), title.clone()));
            dangling_ills.push(LedgerIll {
                from_lang: lang.clone(),
                from_id: b.drafts[p][idx].id,
                to_lang: cfg.languages[q].clone(),
                to_title: title,
                to_id: None,
            });
        }
    }

    // render
    let mut dumps = BTreeMap::new();
    for p in 0..nl {
        let lang = &cfg.languages[p];
        let noise_count = (cfg.noise_rate * cfg.core_tokens as f64).round() as usize;
        let noise_tag = suffix(lang);
        let mut out = String::new();
        for d in &b.drafts[p] {
            let text = match d.kind {
                RecordKind::Redirect => format!("#REDIRECT [[{}]]", d.redirect_target.as_deref().unwrap_or("")),
                _ => {
                    let mut t = format!("'''{}''' {}.", d.title, d.title);
                    if let Some(content) = d.content {
                        for &w in &core[content] {
                            write!(t, " w{w}").unwrap();
                        }
                    }
                    for _ in 0..noise_count {
                        let w = rng.gen_range(0..cfg.vocabulary.max(1));
                        write!(t, " x{noise_tag}{w}").unwrap();
                    }
                    for l in &d.links {
                        write!(t, " [[{l}]]").unwrap();
                    }
                    if !d.extra_text.is_empty() {
                        write!(t, "\n{}", d.extra_text).unwrap();
                    }
                    for (l, title) in &d.ills {
                        write!(t, "\n[[{l}:{title}]]").unwrap();
                    }
                    t
                }
            };
            let record = CanonicalRecord {
                id: d.id,
                lang: lang.to_string(),
                title: d.title.clone(),
                kind: d.kind,
                redirect_target: d.redirect_target.clone(),
                text,
            };
            out.push_str(&serde_json::to_string(&record)?);
            out.push('\n');
        }
        dumps.insert(lang.clone(), out);
    }

    Ok(SynthCorpus {
        dumps,
        ledger: CorpusLedger {
            seed: cfg.seed,
            languages: cfg.languages.clone(),
            links_per_article: m,
            shared_links: s,
            concepts: ledger_concepts,
            ill_edges,
            dangling_ills,
            redirects,
            redirect_cycles: cycles,
            dangling_links,
        },
    })
}

fn add_ill(b: &mut Builder, edges: &mut Vec<LedgerIll>, from: (usize, usize), to: (usize, usize)) {
    let to_lang = b.langs[to.0].clone();
    let to_title = b.drafts[to.0][to.1].title.clone();
    let to_id = b.drafts[to.0][to.1].id;
    b.drafts[from.0][from.1].ills.push((to_lang.clone(), to_title.clone()));
    edges.push(LedgerIll {
        from_lang: b.langs[from.0].clone(),
        from_id: b.drafts[from.0][from.1].id,
        to_lang,
        to_title,
        to_id: Some(to_id),
    });
}
