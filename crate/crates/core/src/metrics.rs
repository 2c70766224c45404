//! Code-mixing metrics and corpus statistics.
//!
//! * CMI of an utterance: `(N - max_i t_i) / (2N)` where `t_i` counts the
//!   tokens of language `i` and `N = sum_i t_i` counts language-dependent
//!   tokens; `other` tokens are excluded. Zero when `N = 0`.
//! * Corpus CMI: mean of the per-utterance values.
//! * I-index: switch points divided by word boundaries `l - 1`, where a
//!   switch is a change of language between consecutive language-dependent
//!   tokens (`other` tokens are skipped when pairing) and `l` counts all
//!   tokens.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generator::Variant;
use crate::lang::{Lang, Tagged, TokenTag};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("cannot aggregate an empty corpus")]
    EmptyCorpus,
}

/// Token counts that enter the CMI of one utterance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CmiInputs {
    pub per_language: BTreeMap<Lang, usize>,
    pub n_lang_dependent: usize,
    pub n_other: usize,
    pub total_len: usize,
}

impl CmiInputs {
    pub fn from_tags<T: Tagged>(tags: &[T]) -> Self {
        let mut inputs = CmiInputs::default();
        for tag in tags {
            let lang = tag.lang();
            if lang.is_other() {
                inputs.n_other += 1;
            } else {
                *inputs.per_language.entry(lang.clone()).or_default() += 1;
                inputs.n_lang_dependent += 1;
            }
        }
        inputs.total_len = tags.len();
        inputs
    }

    pub fn dominant_count(&self) -> usize {
        self.per_language.values().copied().max().unwrap_or(0)
    }

    pub fn cmi(&self) -> f64 {
        let n = self.n_lang_dependent;
        if n == 0 {
            return 0.0;
        }
        (n - self.dominant_count()) as f64 / (2 * n) as f64
    }
}

pub fn cmi_utterance<T: Tagged>(tags: &[T]) -> f64 {
    CmiInputs::from_tags(tags).cmi()
}

/// Mean of per-utterance CMI values.
pub fn cmi_corpus(values: &[f64]) -> Result<f64, MetricsError> {
    if values.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

pub fn i_index<T: Tagged>(tags: &[T]) -> f64 {
    let l = tags.len();
    if l <= 1 {
        return 0.0;
    }
    let mut switches = 0usize;
    let mut previous: Option<&Lang> = None;
    for lang in tags.iter().map(Tagged::lang).filter(|l| !l.is_other()) {
        if previous.is_some_and(|p| p != lang) {
            switches += 1;
        }
        previous = Some(lang);
    }
    switches as f64 / (l - 1) as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UtteranceClass {
    Codeswitched,
    EnglishOnly,
    NativeOnly,
    OtherOnly,
}

pub fn classify_utterance<T: Tagged>(tags: &[T]) -> UtteranceClass {
    let eng = tags.iter().any(|t| *t.lang() == Lang::Eng);
    let native = tags.iter().any(|t| matches!(t.lang(), Lang::Native(_)));
    match (eng, native) {
        (true, true) => UtteranceClass::Codeswitched,
        (true, false) => UtteranceClass::EnglishOnly,
        (false, true) => UtteranceClass::NativeOnly,
        (false, false) => UtteranceClass::OtherOnly,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub codeswitched: usize,
    pub english_only: usize,
    pub native_only: usize,
    pub other_only: usize,
}

impl ClassCounts {
    fn add(&mut self, class: UtteranceClass) {
        match class {
            UtteranceClass::Codeswitched => self.codeswitched += 1,
            UtteranceClass::EnglishOnly => self.english_only += 1,
            UtteranceClass::NativeOnly => self.native_only += 1,
            UtteranceClass::OtherOnly => self.other_only += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.codeswitched + self.english_only + self.native_only + self.other_only
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    /// Number of utterances aggregated (duplicates included).
    pub utterances: usize,
    /// Number of distinct utterance texts.
    pub unique_utterances: usize,
    /// Mean token count per utterance.
    pub average_length: f64,
    /// Distinct case-folded non-punctuation forms, any language.
    pub total_vocabulary: usize,
    /// Distinct case-folded forms per language-dependent class (`eng`,
    /// `hin`, ...).
    pub vocabulary: BTreeMap<String, usize>,
    pub other_vocabulary: usize,
    /// Classes of the distinct utterances.
    pub classification: ClassCounts,
    pub c_avg: f64,
    pub mean_i_index: f64,
}

fn is_punctuation_only(form: &str) -> bool {
    !form.chars().any(char::is_alphanumeric)
}

/// Statistics over the variants of a generated corpus.
pub fn corpus_stats(variants: &[Variant]) -> Result<CorpusStats, MetricsError> {
    utterance_stats(variants.iter().map(|v| v.tokens.as_slice()))
}

/// Statistics over arbitrary tagged utterances.
pub fn utterance_stats<'a, I>(utterances: I) -> Result<CorpusStats, MetricsError>
where
    I: IntoIterator<Item = &'a [TokenTag]>,
{
    let mut count = 0usize;
    let mut total_tokens = 0usize;
    let mut cmi_values = Vec::new();
    let mut i_sum = 0.0;
    let mut seen = HashSet::new();
    let mut classification = ClassCounts::default();
    let mut all_forms = BTreeSet::new();
    let mut per_lang: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let mut other_forms = BTreeSet::new();

    for tags in utterances {
        count += 1;
        total_tokens += tags.len();
        cmi_values.push(cmi_utterance(tags));
        i_sum += i_index(tags);

        let text = tags
            .iter()
            .map(|t| t.form.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        if seen.insert(text) {
            classification.add(classify_utterance(tags));
        }

        for tag in tags.iter().filter(|t| !is_punctuation_only(&t.form)) {
            let folded = tag.form.to_lowercase();
            all_forms.insert(folded.clone());
            match &tag.lang {
                Lang::Other => {
                    other_forms.insert(folded);
                }
                lang => {
                    per_lang.entry(lang.to_string()).or_default().insert(folded);
                }
            }
        }
    }

    let c_avg = cmi_corpus(&cmi_values)?;
    Ok(CorpusStats {
        utterances: count,
        unique_utterances: seen.len(),
        average_length: total_tokens as f64 / count as f64,
        total_vocabulary: all_forms.len(),
        vocabulary: per_lang.into_iter().map(|(k, v)| (k, v.len())).collect(),
        other_vocabulary: other_forms.len(),
        classification,
        c_avg,
        mean_i_index: i_sum / count as f64,
    })
}

impl CorpusStats {
    pub fn english_vocabulary(&self) -> usize {
        self.vocabulary.get("eng").copied().unwrap_or(0)
    }

    /// Plain-text table, one statistic per row.
    pub fn render_table(&self) -> String {
        let mut rows: Vec<(String, String)> = vec![
            ("Number of Utterances".into(), self.utterances.to_string()),
            ("Number of Unique Utterances".into(), self.unique_utterances.to_string()),
            ("Average Length".into(), format!("{:.2}", self.average_length)),
            ("Total Vocabulary Size".into(), self.total_vocabulary.to_string()),
            ("English Vocabulary Size".into(), self.english_vocabulary().to_string()),
        ];
        for (lang, size) in self.vocabulary.iter().filter(|(l, _)| *l != "eng") {
            rows.push((format!("Native Vocabulary Size ({})", lang), size.to_string()));
        }
        rows.extend([
            ("Others Vocabulary Size".into(), self.other_vocabulary.to_string()),
            (
                "Codeswitched Utterances".into(),
                self.classification.codeswitched.to_string(),
            ),
            (
                "English Utterances".into(),
                self.classification.english_only.to_string(),
            ),
            (
                "Native Utterances".into(),
                self.classification.native_only.to_string(),
            ),
            ("Other Utterances".into(), self.classification.other_only.to_string()),
            ("C_avg".into(), format!("{:.3}", self.c_avg)),
            ("I_index".into(), format!("{:.3}", self.mean_i_index)),
        ]);

        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{:<width$}  {}", k, v, width = width);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::LangCode;

    fn hin() -> Lang {
        Lang::Native(LangCode::new("hin").unwrap())
    }

    fn tags(spec: &str) -> Vec<Lang> {
        spec.split_whitespace()
            .map(|s| match s {
                "e" => Lang::Eng,
                "h" => hin(),
                "k" => Lang::Native(LangCode::new("kan").unwrap()),
                "o" => Lang::Other,
                other => panic!("bad tag {}", other),
            })
            .collect()
    }

    #[test]
    fn cmi_examples() {
        assert_eq!(cmi_utterance(&tags("e e e")), 0.0);
        assert_eq!(cmi_utterance(&tags("o o")), 0.0);
        assert_eq!(cmi_utterance::<Lang>(&[]), 0.0);
        assert_eq!(cmi_utterance(&tags("e e e e h h h h")), 0.25);
        assert_eq!(cmi_utterance(&tags("e e e e e e h h o o")), 0.125);
    }

    #[test]
    fn cmi_inputs_bookkeeping() {
        let inputs = CmiInputs::from_tags(&tags("e h o e"));
        assert_eq!(inputs.n_lang_dependent, 3);
        assert_eq!(inputs.n_other, 1);
        assert_eq!(inputs.total_len, 4);
        assert_eq!(inputs.per_language[&Lang::Eng], 2);
        assert_eq!(inputs.dominant_count(), 2);
    }

    #[test]
    fn corpus_mean() {
        assert_eq!(cmi_corpus(&[0.25, 0.125]).unwrap(), 0.1875);
        assert_eq!(cmi_corpus(&[0.3]).unwrap(), 0.3);
        assert_eq!(cmi_corpus(&[]), Err(MetricsError::EmptyCorpus));
    }

    #[test]
    fn i_index_examples() {
        assert_eq!(i_index(&tags("e e e e")), 0.0);
        assert_eq!(i_index(&tags("e h e h")), 1.0);
        assert_eq!(i_index(&tags("e o h")), 0.5);
        assert_eq!(i_index(&tags("h")), 0.0);
        assert_eq!(i_index::<Lang>(&[]), 0.0);
    }

    #[test]
    fn i_index_is_order_sensitive() {
        let grouped = tags("e e h h");
        let shuffled = tags("e h e h");
        assert_eq!(cmi_utterance(&grouped), cmi_utterance(&shuffled));
        assert!(i_index(&grouped) < i_index(&shuffled));
    }

    #[test]
    fn classes() {
        assert_eq!(classify_utterance(&tags("e h")), UtteranceClass::Codeswitched);
        assert_eq!(classify_utterance(&tags("e o")), UtteranceClass::EnglishOnly);
        assert_eq!(classify_utterance(&tags("h o")), UtteranceClass::NativeOnly);
        assert_eq!(classify_utterance(&tags("o")), UtteranceClass::OtherOnly);
        assert_eq!(classify_utterance::<Lang>(&[]), UtteranceClass::OtherOnly);
    }

    fn utt(pairs: &[(&str, Lang)]) -> Vec<TokenTag> {
        pairs.iter().map(|(f, l)| TokenTag::new(*f, l.clone())).collect()
    }

    #[test]
    fn stats_hand_tally() {
        // two code-switched utterances, one English-only
        let corpus = [
            utt(&[("a", Lang::Eng), ("x", hin())]),
            utt(&[("B", Lang::Eng), ("x", hin()), (".", Lang::Other)]),
            utt(&[("a", Lang::Eng), ("b", Lang::Eng)]),
        ];
        let stats = utterance_stats(corpus.iter().map(Vec::as_slice)).unwrap();
        assert_eq!(stats.utterances, 3);
        assert_eq!(stats.unique_utterances, 3);
        assert_eq!(
            stats.classification,
            ClassCounts {
                codeswitched: 2,
                english_only: 1,
                native_only: 0,
                other_only: 0
            }
        );
        assert_eq!(stats.english_vocabulary(), 2);
        assert_eq!(stats.vocabulary["hin"], 1);
        assert_eq!(stats.other_vocabulary, 0);
        assert_eq!(stats.total_vocabulary, 3);
        assert!((stats.average_length - 7.0 / 3.0).abs() < 1e-12);
        // CMI: 0.25, 0.25, 0
        assert!((stats.c_avg - 0.5 / 3.0).abs() < 1e-12);
        // I-index: 1/1, 1/2, 0
        assert!((stats.mean_i_index - 0.5).abs() < 1e-12);
    }

    #[test]
    fn duplicates_collapse_in_unique_count() {
        let one = utt(&[("a", Lang::Eng), ("b", Lang::Eng)]);
        let corpus = [one.clone(), one.clone(), one];
        let stats = utterance_stats(corpus.iter().map(Vec::as_slice)).unwrap();
        assert_eq!(stats.utterances, 3);
        assert_eq!(stats.unique_utterances, 1);
        assert_eq!(stats.classification.total(), 1);
        assert_eq!(stats.c_avg, 0.0);
    }

    #[test]
    fn digits_are_other_vocabulary() {
        let corpus = [utt(&[("42", Lang::Other), ("!", Lang::Other), ("go", Lang::Eng)])];
        let stats = utterance_stats(corpus.iter().map(Vec::as_slice)).unwrap();
        assert_eq!(stats.other_vocabulary, 1);
        assert_eq!(stats.total_vocabulary, 2);
    }

    #[test]
    fn empty_corpus() {
        let corpus: Vec<Vec<TokenTag>> = Vec::new();
        assert_eq!(
            utterance_stats(corpus.iter().map(Vec::as_slice)),
            Err(MetricsError::EmptyCorpus)
        );
    }

    #[test]
    fn table_row_names() {
        let corpus = [utt(&[("a", Lang::Eng), ("x", hin())])];
        let table = utterance_stats(corpus.iter().map(Vec::as_slice))
            .unwrap()
            .render_table();
        for row in [
            "Number of Unique Utterances",
            "Average Length",
            "Total Vocabulary Size",
            "English Vocabulary Size",
            "Native Vocabulary Size (hin)",
            "Others Vocabulary Size",
            "Codeswitched Utterances",
            "C_avg",
            "I_index",
        ] {
            assert!(table.contains(row), "missing {row}");
        }
    }
}
