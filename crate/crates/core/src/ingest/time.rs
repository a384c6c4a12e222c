//! Classification of titles naming years, calendar dates and months.

use std::collections::{BTreeMap, HashMap};

use regex::RegexSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lang::{ArticleRef, LanguageCode};

/// Raw regular expressions for one language.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TimePatterns {
    #[serde(default)]
    pub years: Vec<String>,
    #[serde(default)]
    pub dates: Vec<String>,
    #[serde(default)]
    pub months: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeKind {
    Year,
    Date,
    Month,
}

#[derive(Debug, Clone)]
struct CompiledPatterns {
    years: RegexSet,
    dates: RegexSet,
    months: RegexSet,
}

/// Compiled per-language time-title rules.
#[derive(Debug, Clone, Default)]
pub struct TimeTitleRules {
    by_lang: HashMap<LanguageCode, CompiledPatterns>,
}

// (language, month names in title form, month names as used inside dates,
//  date template with {d} for the day number and {m} for the month group)
const MONTH_TABLE: &[(&str, &str, &str, &str)] = &[
    ("en", "January|February|March|April|May|June|July|August|September|October|November|December", "", "{m} {d}"),
    ("de", "Januar|Februar|März|April|Mai|Juni|Juli|August|September|Oktober|November|Dezember", "", "{d}\\. {m}"),
    ("fr", "janvier|février|mars|avril|mai|juin|juillet|août|septembre|octobre|novembre|décembre", "", "(?:{d}|1er) {m}"),
    ("es", "enero|febrero|marzo|abril|mayo|junio|julio|agosto|septiembre|octubre|noviembre|diciembre", "", "{d} de {m}"),
    ("it", "gennaio|febbraio|marzo|aprile|maggio|giugno|luglio|agosto|settembre|ottobre|novembre|dicembre", "", "(?:{d}|1º) {m}"),
    ("nl", "januari|februari|maart|april|mei|juni|juli|augustus|september|oktober|november|december", "", "{d} {m}"),
    ("ca", "gener|febrer|març|abril|maig|juny|juliol|agost|setembre|octubre|novembre|desembre", "", "{d} (?:de |d'){m}"),
    ("pt", "janeiro|fevereiro|março|abril|maio|junho|julho|agosto|setembro|outubro|novembro|dezembro", "", "{d} de {m}"),
    ("ro", "ianuarie|februarie|martie|aprilie|mai|iunie|iulie|august|septembrie|octombrie|noiembrie|decembrie", "", "{d} {m}"),
    ("da", "januar|februar|marts|april|maj|juni|juli|august|september|oktober|november|december", "", "{d}\\. {m}"),
    ("no", "januar|februar|mars|april|mai|juni|juli|august|september|oktober|november|desember", "", "{d}\\. {m}"),
    ("sv", "januari|februari|mars|april|maj|juni|juli|augusti|september|oktober|november|december", "", "{d} {m}"),
    ("fi", "tammikuu|helmikuu|maaliskuu|huhtikuu|toukokuu|kesäkuu|heinäkuu|elokuu|syyskuu|lokakuu|marraskuu|joulukuu", "tammikuuta|helmikuuta|maaliskuuta|huhtikuuta|toukokuuta|kesäkuuta|heinäkuuta|elokuuta|syyskuuta|lokakuuta|marraskuuta|joulukuuta", "{d}\\. {m}"),
    ("hu", "január|február|március|április|május|június|július|augusztus|szeptember|október|november|december", "", "{m} {d}\\.?"),
    ("cs", "leden|únor|březen|duben|květen|červen|červenec|srpen|září|říjen|listopad|prosinec", "", "{d}\\. {m}"),
    ("sk", "január|február|marec|apríl|máj|jún|júl|august|september|október|november|december", "", "{d}\\. {m}"),
    ("pl", "styczeń|luty|marzec|kwiecień|maj|czerwiec|lipiec|sierpień|wrzesień|październik|listopad|grudzień", "stycznia|lutego|marca|kwietnia|maja|czerwca|lipca|sierpnia|września|października|listopada|grudnia", "{d} {m}"),
    ("ru", "январь|февраль|март|апрель|май|июнь|июль|август|сентябрь|октябрь|ноябрь|декабрь", "января|февраля|марта|апреля|мая|июня|июля|августа|сентября|октября|ноября|декабря", "{d} {m}"),
    ("uk", "січень|лютий|березень|квітень|травень|червень|липень|серпень|вересень|жовтень|листопад|грудень", "січня|лютого|березня|квітня|травня|червня|липня|серпня|вересня|жовтня|листопада|грудня", "{d} {m}"),
    ("tr", "ocak|şubat|mart|nisan|mayıs|haziran|temmuz|ağustos|eylül|ekim|kasım|aralık", "", "{d} {m}"),
    ("id", "januari|februari|maret|april|mei|juni|juli|agustus|september|oktober|november|desember", "", "{d} {m}"),
    ("he", "ינואר|פברואר|מרץ|אפריל|מאי|יוני|יולי|אוגוסט|ספטמבר|אוקטובר|נובמבר|דצמבר", "", "{d} ב{m}"),
];

impl TimeTitleRules {
    /// Built-in pattern table for the default language set.
    pub fn default_patterns() -> BTreeMap<LanguageCode, TimePatterns> {
        let mut out = BTreeMap::new();
        for &(lang, months, date_months, date_shape) in MONTH_TABLE {
            let date_group = if date_months.is_empty() { months } else { date_months };
            let date = date_shape
                .replace("{d}", r"\d{1,2}")
                .replace("{m}", &format!("(?:{date_group})"));
            let mut years = vec![r"^\d{1,4}$".to_string()];
            match lang {
                "en" => years.push(r"^\d{1,4} BC$".into()),
                "de" => years.push(r"^\d{1,4} v\. Chr\.$".into()),
                "fr" => years.push(r"^\d{1,4} av\. J\.-C\.$".into()),
                _ => {}
            }
            out.insert(
                LanguageCode::new(lang).expect("table code"),
                TimePatterns {
                    years,
                    dates: vec![format!("(?i)^{date}$")],
                    months: vec![format!("(?i)^(?:{months})$")],
                },
            );
        }
        for (lang, year, month_day, month) in [
            ("ja", r"^\d{1,4}年$", r"^\d{1,2}月\d{1,2}日$", r"^\d{1,2}月$"),
            ("zh", r"^\d{1,4}年$", r"^\d{1,2}月\d{1,2}日$", r"^\d{1,2}月$"),
            ("ko", r"^\d{1,4}년$", r"^\d{1,2}월 \d{1,2}일$", r"^\d{1,2}월$"),
        ] {
            out.insert(
                LanguageCode::new(lang).expect("table code"),
                TimePatterns {
                    years: vec![year.into(), r"^\d{1,4}$".into()],
                    dates: vec![month_day.into()],
                    months: vec![month.into()],
                },
            );
        }
        out
    }

    pub fn compile(patterns: &BTreeMap<LanguageCode, TimePatterns>) -> Result<Self> {
        let build = |lang: &LanguageCode, list: &[String]| {
            RegexSet::new(list).map_err(|e| Error::Config(format!("time rule for {lang}: {e}")))
        };
        let mut by_lang = HashMap::new();
        for (lang, p) in patterns {
            by_lang.insert(
                lang.clone(),
                CompiledPatterns {
                    years: build(lang, &p.years)?,
                    dates: build(lang, &p.dates)?,
                    months: build(lang, &p.months)?,
                },
            );
        }
        Ok(TimeTitleRules { by_lang })
    }

    pub fn has_language(&self, lang: &LanguageCode) -> bool {
        self.by_lang.contains_key(lang)
    }

    pub fn kind(&self, r: &ArticleRef) -> Result<Option<TimeKind>> {
        let p = self
            .by_lang
            .get(&r.lang)
            .ok_or_else(|| Error::MissingTimeRules(r.lang.to_string()))?;
        let t = r.title.as_str();
        Ok(if p.years.is_match(t) {
            Some(TimeKind::Year)
        } else if p.dates.is_match(t) {
            Some(TimeKind::Date)
        } else if p.months.is_match(t) {
            Some(TimeKind::Month)
        } else {
            None
        })
    }

    /// True iff the title names a year, a date or a month in its language.
    pub fn classify(&self, r: &ArticleRef) -> Result<bool> {
        Ok(self.kind(r)?.is_some())
    }
}

/// Free-function form of [`TimeTitleRules::classify`].
pub fn classify_time_title(r: &ArticleRef, rules: &TimeTitleRules) -> Result<bool> {
    rules.classify(r)
}
